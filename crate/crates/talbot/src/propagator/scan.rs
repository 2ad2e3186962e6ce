//! Scale-by-scale contributions of the multiscale datum
//! `f = Σ_m (m/R_m^s) f_{R_m}/‖f_{R_m}‖₂` at one point.

use super::{build_comb_datum, datum_norm, evolve_axis1, evolve_axis1_unchecked, evolve_lattice, Cutoffs, Symbol};
use crate::error::{Error, Result};
use crate::slabgeo::{slabs_containing, GqTables, Slab, SlabParams};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanTerm {
    /// `m` in `R_m = 2^m`.
    pub exponent: u32,
    pub r: f64,
    /// `m |T_t f_{R_m}(x)| / (R_m^s ‖f_{R_m}‖₂)`.
    pub contribution: f64,
    /// False when `t` lies beyond the checked range of the first factor.
    pub checked: bool,
}

#[derive(Clone, Debug)]
pub struct DivergenceReport {
    /// Scale `M` with `x ∈ F_M` that fixes the time.
    pub target: u32,
    pub slab: Slab,
    /// `t(x) = p₁/(D_M^k q)`.
    pub t: f64,
    pub terms: Vec<ScanTerm>,
    pub main: f64,
    pub off_sum: f64,
    pub max_off: f64,
    /// Every off-scale term is below `1/R_m`.
    pub dominates: bool,
}

/// Evaluates every term of the multiscale sum at `x` and the revival time of
/// the slab of `F_M` containing `x`.
///
/// With `target = None` the first listed scale whose `F_M` contains `x` is
/// used. `gq` must hold `G(q)` for the primes of the target scale.
#[allow(clippy::too_many_arguments)]
pub fn divergence_scan(
    symbol: &Symbol,
    exponents: &[u32],
    u1: f64,
    u2: f64,
    s_target: f64,
    x: &[f64],
    target: Option<u32>,
    cutoffs: &Cutoffs,
    gq: &GqTables,
) -> Result<DivergenceReport> {
    let k = match symbol {
        Symbol::Power { k, .. } => *k,
        Symbol::Saddle { .. } => return Err(Error::Precondition("divergence scan needs a power symbol".into())),
    };
    let n = symbol.n();
    if x.len() != n as usize {
        return Err(Error::DimensionMismatch { expected: n as usize, got: x.len() });
    }
    if exponents.is_empty() {
        return Err(Error::Precondition("no scales given".into()));
    }
    let candidates: Vec<u32> = match target {
        Some(m) if exponents.contains(&m) => vec![m],
        Some(m) => return Err(Error::Precondition(format!("target scale 2^{m} is not in the list"))),
        None => exponents.to_vec(),
    };
    let mut found = None;
    for m in candidates {
        let params = SlabParams::new(k, n, 2f64.powi(m as i32), u1, u2)?;
        if let Some(s) = slabs_containing(&params, gq, x)?.into_iter().next() {
            found = Some((m, params, s));
            break;
        }
    }
    let (big_m, params, slab) =
        found.ok_or_else(|| Error::OutsideDomain(format!("x = {x:?} lies in no F_M for the listed scales")))?;
    let t = slab.p[0] as f64 / (params.d.powi(k as i32) * slab.q as f64);

    let mut terms = Vec::with_capacity(exponents.len());
    for &m in exponents {
        let r = 2f64.powi(m as i32);
        let datum = build_comb_datum(symbol, r, u1, u2, *cutoffs)?;
        let (g, checked) = match evolve_axis1(&datum, x[0], t) {
            Ok(v) => (v, true),
            Err(Error::Precondition(_)) => (evolve_axis1_unchecked(&datum, x[0], t), false),
            Err(e) => return Err(e),
        };
        let value = g * evolve_lattice(&datum, &x[1..], t)?;
        let contribution = m as f64 * value.norm() / (r.powf(s_target) * datum_norm(&datum));
        terms.push(ScanTerm { exponent: m, r, contribution, checked });
    }
    let main = terms.iter().find(|s| s.exponent == big_m).map_or(0.0, |s| s.contribution);
    let off: Vec<&ScanTerm> = terms.iter().filter(|s| s.exponent != big_m).collect();
    let off_sum = off.iter().map(|s| s.contribution).sum();
    let max_off = off.iter().map(|s| s.contribution).fold(0.0, f64::max);
    let dominates = off.iter().all(|s| s.contribution < 1.0 / s.r);
    Ok(DivergenceReport { target: big_m, slab, t, terms, main, off_sum, max_off, dominates })
}
