//! The frequency-comb datum `f_R` for power symbols.

use num_complex::Complex64;

use super::cutoff::Cutoffs;
use super::{cis, cis_product};
use crate::error::{Error, Result};
use crate::fieldsum::IntPoly;
use crate::primes::largest_prime_in_dyadic;
use crate::regions::{dq_exponents, in_domain_d, ParamPoint};

/// Largest lattice (in points) accepted by the evaluators.
pub(crate) const LATTICE_BUDGET: f64 = 1e7;

/// Dispersive symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol {
    /// `P(ξ) = ξ₁^k + W(ξ′)` with `deg W = k`.
    Power { k: u32, w: IntPoly },
    /// `ξ₁² + ⋯ + ξ_m² − ξ_{m+1}² − ⋯ − ξ_n²`.
    Saddle { n: u32, m: u32 },
}

impl Symbol {
    pub fn power(k: u32, w: IntPoly) -> Result<Self> {
        if k < 2 {
            return Err(Error::Precondition(format!("degree k = {k} must be at least 2")));
        }
        if w.degree() != k {
            return Err(Error::InvalidPoly(format!("W has degree {}, expected {k}", w.degree())));
        }
        Ok(Symbol::Power { k, w })
    }

    pub fn saddle(n: u32, m: u32) -> Result<Self> {
        if m < 1 || 2 * m > n {
            return Err(Error::Precondition(format!("saddle index m = {m} must satisfy 1 <= m <= n/2 with n = {n}")));
        }
        Ok(Symbol::Saddle { n, m })
    }

    /// Space dimension.
    pub fn n(&self) -> u32 {
        match self {
            Symbol::Power { w, .. } => w.num_vars() as u32 + 1,
            Symbol::Saddle { n, .. } => *n,
        }
    }

    /// `P(ξ)`.
    pub fn eval(&self, xi: &[f64]) -> f64 {
        match self {
            Symbol::Power { k, w } => xi[0].powi(*k as i32) + w.eval_f64(&xi[1..]),
            Symbol::Saddle { m, .. } => xi
                .iter()
                .enumerate()
                .map(|(i, v)| if i < *m as usize { v * v } else { -v * v })
                .sum(),
        }
    }
}

/// Power-symbol datum at one scale.
#[derive(Clone, Debug)]
pub struct CombDatum {
    k: u32,
    w: IntPoly,
    w_k: IntPoly,
    r: f64,
    u1: f64,
    u2: f64,
    d: f64,
    big_q: f64,
    q: u64,
    cutoffs: Cutoffs,
    lattice_radius: i64,
}

impl CombDatum {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.w.num_vars() as u32 + 1
    }

    /// The lattice polynomial `W`.
    pub fn w(&self) -> &IntPoly {
        &self.w
    }

    /// Its top-degree part `W_k`.
    pub fn w_k(&self) -> &IntPoly {
        &self.w_k
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn u(&self) -> (f64, f64) {
        (self.u1, self.u2)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn big_q(&self) -> f64 {
        self.big_q
    }

    /// Largest prime in `[Q/2, Q]`, or 1 when `Q < 2`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn cutoffs(&self) -> &Cutoffs {
        &self.cutoffs
    }

    /// Largest `|mᵢ|` of a lattice point with `ψ(Dmᵢ/R) ≠ 0`.
    pub fn lattice_radius(&self) -> i64 {
        self.lattice_radius
    }

    /// `R^{1/4} (R/(DQ))^{(n−1)/2}`.
    pub fn predicted_ratio(&self) -> f64 {
        let nm1 = self.n() as f64 - 1.0;
        self.r.powf(0.25) * (self.r / (self.d * self.big_q)).powf(nm1 / 2.0)
    }

    /// `R^{−1/4} (R/D)^{(n−1)/2}`.
    pub fn norm_scale(&self) -> f64 {
        let nm1 = self.n() as f64 - 1.0;
        self.r.powf(-0.25) * (self.r / self.d).powf(nm1 / 2.0)
    }

    /// `Σ_{|m| ≤ L} ψ(Dm/R)^j` in one dimension.
    pub(crate) fn psi_moment(&self, j: i32) -> f64 {
        let l = self.lattice_radius;
        let v: Vec<f64> = (-l..=l).map(|m| self.psi(m).powi(j)).collect();
        crate::fieldsum::pairwise_sum_f64(&v)
    }

    #[inline]
    pub(crate) fn psi(&self, m: i64) -> f64 {
        self.cutoffs.psi.eval(self.d * m as f64 / self.r)
    }
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Builds `f_R` for `(u₁, u₂) ∈ 𝒟`.
///
/// `D` and `Q` follow from `R^{u₁} = D^k Q / R^{k−1}` and `R^{u₂} = DQ`.
/// Values within `1e-9` of an integer are snapped to it so that `Q = 8` is not
/// read as `7.999…`.
pub fn build_comb_datum(symbol: &Symbol, r: f64, u1: f64, u2: f64, cutoffs: Cutoffs) -> Result<CombDatum> {
    let (k, w) = match symbol {
        Symbol::Power { k, w } => (*k, w.clone()),
        Symbol::Saddle { .. } => {
            return Err(Error::Precondition("saddle symbols use build_saddle_datum".into()));
        }
    };
    if !(r >= 2.0) || r.log2().fract() != 0.0 {
        return Err(Error::Precondition(format!("R = {r} must be a power of two, at least 2")));
    }
    let n = w.num_vars() as u32 + 1;
    let p = ParamPoint::new(u1, u2, k, n);
    let check = in_domain_d(&p);
    if !check.inside {
        let names: Vec<&str> = check.violated.iter().map(|c| c.name()).collect();
        return Err(Error::OutsideDomain(format!("(u1, u2) = ({u1}, {u2}) violates {}", names.join(", "))));
    }
    let (de, qe) = dq_exponents(&p);
    let d = snap(r.powf(de));
    let big_q = snap(r.powf(qe));
    let q = if big_q < 2.0 { 1 } else { largest_prime_in_dyadic(big_q).unwrap_or(1) };
    let ratio = snap(r / d);
    // ψ(Dm/R) vanishes for |m| ≥ R/D.
    let lattice_radius = if ratio.fract() == 0.0 { ratio as i64 - 1 } else { ratio.floor() as i64 };
    let lattice_radius = lattice_radius.max(0);
    let points = ((2 * lattice_radius + 1) as f64).powi(n as i32 - 1);
    if points > LATTICE_BUDGET {
        return Err(Error::Budget { estimate: points, limit: LATTICE_BUDGET });
    }
    let w_k = w.homogeneous_part(k);
    Ok(CombDatum { k, w, w_k, r, u1, u2, d, big_q, q, cutoffs, lattice_radius })
}

/// `‖f_R‖₂` from the tensor structure:
/// `R^{−1/4} ‖φ̂₁‖ · (Σ_{m′} ψ(Dm′/R)²)^{1/2} · ‖φ̂₂‖^{n−1}`.
///
/// The translates `φ̂₂(· − Dm′)` have disjoint supports because `D > 2c`.
pub fn datum_norm(datum: &CombDatum) -> f64 {
    let nm1 = datum.n() as i32 - 1;
    let c = &datum.cutoffs;
    let g = datum.r.powf(-0.25) * c.phi1.hat_norm_sq().sqrt();
    let h = (datum.psi_moment(2) * c.phi2.hat_norm_sq()).powi(nm1).sqrt();
    g * h
}

/// `f_R(x)` in closed form: `φ₁(R^{1/2}x₁) e(Rx₁) · Σ_{m′} ψ(Dm′/R) e(Dm′·x′) φ₂(x′)`.
pub fn datum_value(datum: &CombDatum, x: &[f64]) -> Result<Complex64> {
    let n = datum.n() as usize;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let c = &datum.cutoffs;
    let g = cis_product(x[0], datum.r) * c.phi1.phys(datum.r.sqrt() * x[0]);
    let phi2: f64 = x[1..].iter().map(|&v| c.phi2.phys(v)).product();
    // The lattice sum is a tensor product of one-dimensional sums.
    let l = datum.lattice_radius;
    let mut h = Complex64::new(phi2, 0.0);
    for &xi in &x[1..] {
        let terms: Vec<Complex64> = (-l..=l).map(|m| cis(datum.d * m as f64 * xi) * datum.psi(m)).collect();
        h *= crate::fieldsum::pairwise_sum(0, terms.len(), &|i| terms[i]);
    }
    Ok(g * h)
}
