//! Admissible slab families, dilated unit cells, union measures, overlap
//! counts and covering numbers.
//!
//! For a prime `q ∈ [Q/2, Q]` and `p = (p₁, p′)` with `p mod q ∈ G(q)`, the
//! slab `E_{p,q,R}` is the box with center
//! `(−kR^{k−1}p₁/(D^k q), p′/(Dq))` and half-widths `(R^{−1/2}, 1/R, …, 1/R)`.
//! The sign of the first coordinate puts the center where `x₁ + kR^{k−1}t`
//! vanishes at the revival time `t = p₁/(D^k q)`.

mod cover;
mod measure;

pub use cover::{covering_count, dim_slope_estimate, CoverStrategy, SlopeFit, GRID_SHIFT};
pub use measure::{overlap_pair_count, union_measure, MeasureMethod, MeasureReport, OverlapReport};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fieldsum::{build_sum_table, compute_gq, GqSet, IntPoly};
use crate::primes::primes_in_dyadic;
use crate::regions::{dilation_rhs, dq_exponents, in_domain_d, ParamPoint, TIGHT_TOL};

/// Largest family the enumerators will build.
pub const FAMILY_BUDGET: f64 = 2e7;

/// Axis-aligned box `∏ [centerᵢ − radiiᵢ, centerᵢ + radiiᵢ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slab {
    pub center: Vec<f64>,
    pub radii: Vec<f64>,
    pub p: Vec<i64>,
    pub q: u64,
}

impl Slab {
    pub fn measure(&self) -> f64 {
        self.radii.iter().map(|r| 2.0 * r).product()
    }

    /// Open-box membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.center).zip(&self.radii).all(|((x, c), r)| (x - c).abs() < *r)
    }

    /// Closed boxes: tangent boxes intersect.
    pub fn intersects(&self, other: &Slab) -> bool {
        self.center
            .iter()
            .zip(&other.center)
            .zip(self.radii.iter().zip(&other.radii))
            .all(|((a, b), (ra, rb))| (a - b).abs() <= ra + rb)
    }
}

/// Scale parameters shared by every slab of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabParams {
    pub k: u32,
    pub n: u32,
    pub r: f64,
    pub u1: f64,
    pub u2: f64,
    pub d: f64,
    pub big_q: f64,
    /// Primes in `[Q/2, Q]`, or `[1]` when `Q < 2`.
    pub primes: Vec<u64>,
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

impl SlabParams {
    pub fn new(k: u32, n: u32, r: f64, u1: f64, u2: f64) -> Result<Self> {
        let p = ParamPoint::new(u1, u2, k, n);
        let check = in_domain_d(&p);
        if !check.inside {
            let names: Vec<&str> = check.violated.iter().map(|c| c.name()).collect();
            return Err(Error::OutsideDomain(format!("(u1, u2) = ({u1}, {u2}) violates {}", names.join(", "))));
        }
        if !(r > 1.0) {
            return Err(Error::Precondition(format!("R = {r} must exceed 1")));
        }
        let (de, qe) = dq_exponents(&p);
        let d = snap(r.powf(de));
        let big_q = snap(r.powf(qe));
        let primes = if big_q < 2.0 { vec![1] } else { primes_in_dyadic(big_q) };
        Ok(SlabParams { k, n, r, u1, u2, d, big_q, primes })
    }

    /// `x₁` distance between consecutive slab centers for modulus `q`.
    pub fn x1_spacing(&self, q: u64) -> f64 {
        self.k as f64 * self.r.powi(self.k as i32 - 1) / (self.d.powi(self.k as i32) * q as f64)
    }

    /// Half-widths `(R^{−1/2}, 1/R, …)`.
    pub fn radii(&self) -> Vec<f64> {
        let mut v = vec![1.0 / self.r; self.n as usize];
        v[0] = self.r.powf(-0.5);
        v
    }

    /// Period of `F_R` in each coordinate: `(kR^{k−1}/D^k, 1/D, …)`.
    pub fn period(&self) -> Vec<f64> {
        let mut v = vec![1.0 / self.d; self.n as usize];
        v[0] = self.x1_spacing(1);
        v
    }

    pub fn slab(&self, p: &[i64], q: u64) -> Slab {
        let mut center = vec![-(p[0] as f64) * self.x1_spacing(q)];
        center.extend(p[1..].iter().map(|&v| v as f64 / (self.d * q as f64)));
        Slab { center, radii: self.radii(), p: p.to_vec(), q }
    }
}

/// `G(q)` for every modulus a family needs.
#[derive(Clone, Debug)]
pub struct GqTables {
    dim: usize,
    sets: BTreeMap<u64, GqSet>,
}

impl GqTables {
    /// Builds the tables for `W_k` and the given moduli; `1` gets the trivial set.
    pub fn build(w_k: &IntPoly, moduli: &[u64], c1: f64, budget: f64) -> Result<Self> {
        let mut sets = BTreeMap::new();
        for &q in moduli {
            let set = if q == 1 {
                GqSet::trivial(w_k.num_vars())
            } else {
                compute_gq(&build_sum_table(w_k, q, c1, budget, false)?)
            };
            sets.insert(q, set);
        }
        Ok(GqTables { dim: w_k.num_vars(), sets })
    }

    pub fn from_sets(dim: usize, sets: impl IntoIterator<Item = GqSet>) -> Self {
        GqTables { dim, sets: sets.into_iter().map(|s| (s.q, s)).collect() }
    }

    pub fn get(&self, q: u64) -> Result<&GqSet> {
        self.sets
            .get(&q)
            .ok_or_else(|| Error::Precondition(format!("no G(q) table for q = {q}")))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyKind {
    /// Admissible slabs `F_R ∩ [−1, 1]^n`.
    F,
    /// Dilated unit cell `Ω_{R,a}` in `[0, 1)^n`.
    Omega { a1: f64, a2: f64 },
    /// Unit cell `F̃_{R,a}` before the change of variables.
    UnitCell { a1: f64, a2: f64 },
    /// Saddle boxes `H_R` in the coordinates `(x_{m+1}, x‴)`.
    Saddle { m: u32 },
}

/// Region in which a family's union is measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Plane,
    /// The cell `∏ [0, Pᵢ)` with opposite faces identified.
    Torus(Vec<f64>),
    /// The box `∏ [loᵢ, hiᵢ]`.
    Window(Vec<(f64, f64)>),
}

#[derive(Clone, Debug)]
pub struct SlabFamily {
    pub slabs: Vec<Slab>,
    pub params: SlabParams,
    pub kind: FamilyKind,
    pub domain: Domain,
}

impl SlabFamily {
    pub fn len(&self) -> usize {
        self.slabs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slabs.is_empty()
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            FamilyKind::Saddle { m } => self.params.n as usize - 2 * m as usize + 1,
            _ => self.params.n as usize,
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Sum of the box measures.
    pub fn total_measure(&self) -> f64 {
        let v: Vec<f64> = self.slabs.iter().map(Slab::measure).collect();
        crate::fieldsum::pairwise_sum_f64(&v)
    }
}

fn check_tables(params: &SlabParams, gq: &GqTables) -> Result<()> {
    if gq.dim() != params.n as usize - 1 {
        return Err(Error::DimensionMismatch { expected: params.n as usize - 1, got: gq.dim() });
    }
    for &q in &params.primes {
        gq.get(q)?;
    }
    Ok(())
}

/// Calls `f` on every integer vector in `∏ [loᵢ, hiᵢ]`.
pub(crate) fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut i = cur.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                cur[i + 1..].copy_from_slice(&lo[i + 1..]);
                break;
            }
        }
    }
}

/// All slabs of `F_R` meeting `[−1, 1]^n`.
pub fn admissible_family(k: u32, n: u32, r: f64, u1: f64, u2: f64, gq: &GqTables) -> Result<SlabFamily> {
    let params = SlabParams::new(k, n, r, u1, u2)?;
    check_tables(&params, gq)?;
    let radii = params.radii();
    let mut estimate = 0.0;
    let mut ranges = Vec::new();
    for &q in &params.primes {
        let s = params.x1_spacing(q);
        let p1 = ((1.0 + radii[0]) / s).floor() as i64;
        let pj = ((1.0 + radii[1]) * params.d * q as f64).floor() as i64;
        estimate += (2 * p1 + 1) as f64 * ((2 * pj + 1) as f64).powi(n as i32 - 1);
        ranges.push((q, p1, pj));
    }
    if estimate > FAMILY_BUDGET {
        return Err(Error::Budget { estimate, limit: FAMILY_BUDGET });
    }
    let mut slabs = Vec::new();
    for (q, p1, pj) in ranges {
        let set = gq.get(q)?;
        let mut lo = vec![-pj; n as usize];
        let mut hi = vec![pj; n as usize];
        lo[0] = -p1;
        hi[0] = p1;
        for_each_in_box(&lo, &hi, |p| {
            if set.contains(p) {
                let s = params.slab(p, q);
                let meets = s.center.iter().zip(&s.radii).all(|(c, r)| c.abs() <= 1.0 + r);
                if meets {
                    slabs.push(s);
                }
            }
        });
    }
    Ok(SlabFamily { slabs, params, kind: FamilyKind::F, domain: Domain::Plane })
}

/// Slabs of `F_R` whose open box contains `x`.
pub fn slabs_containing(params: &SlabParams, gq: &GqTables, x: &[f64]) -> Result<Vec<Slab>> {
    let n = params.n as usize;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    check_tables(params, gq)?;
    let radii = params.radii();
    let mut out = Vec::new();
    for &q in &params.primes {
        let s = params.x1_spacing(q);
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        // Center −s·p₁ within R^{−1/2} of x₁.
        lo[0] = ((-x[0] - radii[0]) / s).ceil() as i64;
        hi[0] = ((-x[0] + radii[0]) / s).floor() as i64;
        let step = params.d * q as f64;
        for i in 1..n {
            lo[i] = ((x[i] - radii[i]) * step).ceil() as i64;
            hi[i] = ((x[i] + radii[i]) * step).floor() as i64;
        }
        let set = gq.get(q)?;
        for_each_in_box(&lo, &hi, |p| {
            if set.contains(p) {
                let slab = params.slab(p, q);
                if slab.contains(x) {
                    out.push(slab);
                }
            }
        });
    }
    Ok(out)
}

/// Dilation exponents `a = (a₁, a₂, …, a₂)` and the `ε` of their line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilationExponents {
    pub a1: f64,
    pub a2: f64,
    pub eps: f64,
}

impl DilationExponents {
    /// Checks `u₁ ≤ a₁ ≤ 1/2`, `u₂ ≤ a₂ ≤ 1` and the line
    /// `a₁ + (n−1)a₂ = rhs(ε)` to `1e-9`.
    pub fn validate(&self, params: &SlabParams) -> Result<()> {
        let p = ParamPoint::new(params.u1, params.u2, params.k, params.n);
        let tol = 1e-9;
        let in_box = self.a1 >= params.u1 - tol
            && self.a1 <= 0.5 + tol
            && self.a2 >= params.u2 - tol
            && self.a2 <= 1.0 + tol;
        let line = self.a1 + (params.n as f64 - 1.0) * self.a2 - dilation_rhs(&p, self.eps);
        if !(self.eps > 0.0) || !in_box || line.abs() > tol {
            return Err(Error::Precondition(format!(
                "dilation (a1, a2) = ({}, {}) with epsilon = {} is outside the admissible segment",
                self.a1, self.a2, self.eps
            )));
        }
        Ok(())
    }
}

/// `Ω_{R,a}`: boxes `B₁(p₁/q, D^k/(kR^{k−1}R^{a₁})) × B_{n−1}(p′/q, D/R^{a₂})`
/// over `q ∈ 𝒫_Q`, `p ∈ G(q) ∩ [0, q)^n`, on the unit torus.
pub fn dilated_unit_cell(params: &SlabParams, gq: &GqTables, a: DilationExponents) -> Result<SlabFamily> {
    a.validate(params)?;
    let h1 = params.d.powi(params.k as i32) / (params.k as f64 * params.r.powi(params.k as i32 - 1) * params.r.powf(a.a1));
    let h2 = params.d / params.r.powf(a.a2);
    let mut fam = omega_family(params, gq, h1, h2)?;
    fam.kind = FamilyKind::Omega { a1: a.a1, a2: a.a2 };
    Ok(fam)
}

/// The union of boxes `B₁(p₁/q, h₁) × B_{n−1}(p′/q, h₂)` over `q ∈ 𝒫_Q` and
/// `p ∈ G(q) ∩ [0, q)^n`, on the unit torus.
pub fn omega_family(params: &SlabParams, gq: &GqTables, h1: f64, h2: f64) -> Result<SlabFamily> {
    check_tables(params, gq)?;
    let n = params.n as usize;
    let mut radii = vec![h2; n];
    radii[0] = h1;
    let mut slabs = Vec::new();
    for &q in &params.primes {
        let set = gq.get(q)?;
        for p in set.members() {
            let center = p.iter().map(|&v| v as f64 / q as f64).collect();
            slabs.push(Slab { center, radii: radii.clone(), p: p.iter().map(|&v| v as i64).collect(), q });
        }
    }
    Ok(SlabFamily {
        slabs,
        params: params.clone(),
        kind: FamilyKind::Omega { a1: f64::NAN, a2: f64::NAN },
        domain: Domain::Torus(vec![1.0; n]),
    })
}

/// `F̃_{R,a}`: the dilated slabs with `p ∈ G(q) ∩ [0, q)^n`, on the torus with
/// the period of `F_R`. Its image under `T(x) = (D^k x₁/(kR^{k−1}), Dx′)` is
/// [`dilated_unit_cell`].
pub fn dilated_slab_cell(params: &SlabParams, gq: &GqTables, a: DilationExponents) -> Result<SlabFamily> {
    a.validate(params)?;
    check_tables(params, gq)?;
    let n = params.n as usize;
    let mut radii = vec![params.r.powf(-a.a2); n];
    radii[0] = params.r.powf(-a.a1);
    let period = params.period();
    let mut slabs = Vec::new();
    for &q in &params.primes {
        let set = gq.get(q)?;
        for p in set.members() {
            let p: Vec<i64> = p.iter().map(|&v| v as i64).collect();
            let mut s = params.slab(&p, q);
            s.center[0] = s.center[0].rem_euclid(period[0]);
            s.radii = radii.clone();
            slabs.push(s);
        }
    }
    Ok(SlabFamily {
        slabs,
        params: params.clone(),
        kind: FamilyKind::UnitCell { a1: a.a1, a2: a.a2 },
        domain: Domain::Torus(period),
    })
}

/// Saddle boxes `B(R p_{m+1}/(D²q), 1/R) × B(p‴/(Dq), 1/R)` meeting
/// `[−1, 0] × [−1, 1]^{n−2m}`, for `Q = R^{2u₂−u₁−1}`, `D = R^{u₁−u₂+1}`.
///
/// `gq` holds `G(q)` for the quadratic form `−|x|²` in `n − 2m` variables.
pub fn saddle_family(n: u32, m: u32, r: f64, u1: f64, u2: f64, gq: &GqTables) -> Result<SlabFamily> {
    if m < 1 || 2 * m >= n {
        return Err(Error::Precondition(format!("saddle family needs 1 <= m < n/2, got n = {n}, m = {m}")));
    }
    let ok = (0.0..=1.0).contains(&u1) && (0.0..=1.0).contains(&u2) && 2.0 * u2 - u1 - 1.0 >= -TIGHT_TOL && u2 - u1 <= 0.5 + TIGHT_TOL;
    if !ok {
        return Err(Error::OutsideDomain(format!("(u1, u2) = ({u1}, {u2}) is outside the saddle domain")));
    }
    let free = (n - 2 * m) as usize;
    if gq.dim() != free {
        return Err(Error::DimensionMismatch { expected: free, got: gq.dim() });
    }
    let d = snap(r.powf(u1 - u2 + 1.0));
    let big_q = snap(r.powf(2.0 * u2 - u1 - 1.0));
    let primes = if big_q < 2.0 { vec![1] } else { primes_in_dyadic(big_q) };
    let rad = 1.0 / r;
    let mut slabs = Vec::new();
    let mut estimate = 0.0;
    for &q in &primes {
        let s0 = r / (d * d * q as f64);
        let pj = ((1.0 + rad) * d * q as f64).floor() as i64;
        estimate += ((1.0 + rad) / s0 + 1.0) * ((2 * pj + 1) as f64).powi(free as i32);
    }
    if estimate > FAMILY_BUDGET {
        return Err(Error::Budget { estimate, limit: FAMILY_BUDGET });
    }
    for &q in &primes {
        let set = gq.get(q)?;
        let s0 = r / (d * d * q as f64);
        // The x_{m+1} coordinate of the evaluation set is −Rt ≤ 0.
        let p0 = ((1.0 + rad) / s0).floor() as i64;
        let pj = ((1.0 + rad) * d * q as f64).floor() as i64;
        let mut lo = vec![-pj; free + 1];
        let mut hi = vec![pj; free + 1];
        lo[0] = 0;
        hi[0] = p0;
        for_each_in_box(&lo, &hi, |p| {
            if set.contains(p) {
                let mut center = vec![-(p[0] as f64) * s0];
                center.extend(p[1..].iter().map(|&v| v as f64 / (d * q as f64)));
                slabs.push(Slab { center, radii: vec![rad; free + 1], p: p.to_vec(), q });
            }
        });
    }
    let params = SlabParams { k: 2, n, r, u1, u2, d, big_q, primes };
    Ok(SlabFamily { slabs, params, kind: FamilyKind::Saddle { m }, domain: Domain::Plane })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_tables(params: &SlabParams) -> GqTables {
        GqTables::build(&IntPoly::parse("x^3", None).unwrap(), &params.primes, 0.1, 1e10).unwrap()
    }

    #[test]
    fn q_one_grid() {
        let params = SlabParams::new(2, 2, 256.0, 0.5, 0.75).unwrap();
        assert_eq!(params.primes, vec![1]);
        let gq = GqTables::build(&IntPoly::parse("x^2", None).unwrap(), &[1], 0.1, 1e10).unwrap();
        let fam = admissible_family(2, 2, 256.0, 0.5, 0.75, &gq).unwrap();
        // D = 2^6: x′ centers at j/64, x₁ centers spaced 2R/D² = 1/8.
        let xs: std::collections::BTreeSet<i64> = fam.slabs.iter().map(|s| (s.center[1] * 64.0).round() as i64).collect();
        assert_eq!(xs.len(), 129);
        assert!((params.x1_spacing(1) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn count_matches_exponent() {
        let params = SlabParams::new(3, 2, 4096.0, 0.3, 0.9).unwrap();
        let gq = cubic_tables(&params);
        let fam = admissible_family(3, 2, 4096.0, 0.3, 0.9, &gq).unwrap();
        // Independent count: every lattice label whose box meets [−1, 1]².
        let radii = params.radii();
        let mut direct = 0usize;
        for &q in &params.primes {
            let set = gq.get(q).unwrap();
            let s1 = params.x1_spacing(q);
            let step = 1.0 / (params.d * q as f64);
            let n1 = ((1.0 + radii[0]) / s1) as i64 + 2;
            let n2 = ((1.0 + radii[1]) / step) as i64 + 2;
            for p1 in -n1..=n1 {
                for p2 in -n2..=n2 {
                    let inside = (p1 as f64 * s1).abs() <= 1.0 + radii[0] && (p2 as f64 * step).abs() <= 1.0 + radii[1];
                    if inside && set.contains(&[p1, p2]) {
                        direct += 1;
                    }
                }
            }
        }
        assert_eq!(fam.len(), direct);
        // The exponent hides 1/log Q from the prime count and the density of
        // G(q); at R = 2^12 the constant is about 0.18.
        let expect = 4096f64.powf(2.5 * 0.9 + 0.5 * 0.3 - 1.0);
        let ratio = fam.len() as f64 / expect;
        assert!(ratio > 0.125 && ratio < 4.0, "ratio {ratio}");
        for s in &fam.slabs {
            assert!(gq.get(s.q).unwrap().contains(&s.p));
        }
    }

    #[test]
    fn x1_periodicity() {
        let params = SlabParams::new(3, 2, 4096.0, 0.3, 0.9).unwrap();
        for &q in &params.primes {
            let a = params.slab(&[2, 1], q);
            let b = params.slab(&[3, 1], q);
            assert!(((a.center[0] - b.center[0]).abs() - params.x1_spacing(q)).abs() < 1e-15);
        }
    }

    #[test]
    fn membership_finds_the_slab() {
        let params = SlabParams::new(3, 2, 4096.0, 0.3, 0.9).unwrap();
        let gq = cubic_tables(&params);
        let fam = admissible_family(3, 2, 4096.0, 0.3, 0.9, &gq).unwrap();
        for s in fam.slabs.iter().step_by(997) {
            let x: Vec<f64> = s.center.iter().zip(&s.radii).map(|(c, r)| c + 0.3 * r).collect();
            let hits = slabs_containing(&params, &gq, &x).unwrap();
            assert!(hits.iter().any(|h| h.p == s.p && h.q == s.q));
        }
        assert!(slabs_containing(&params, &gq, &[0.0]).is_err());
    }

    #[test]
    fn dilation_endpoints() {
        let params = SlabParams::new(3, 2, 4096.0, 0.3, 0.9).unwrap();
        let gq = cubic_tables(&params);
        let p = ParamPoint::new(0.3, 0.9, 3, 2);
        let seg = crate::regions::dilation_segment(&p, 0.05).unwrap().unwrap();
        let (a1, a2) = seg.critical_point();
        let fam = dilated_unit_cell(&params, &gq, DilationExponents { a1, a2, eps: 0.05 }).unwrap();
        assert!(!fam.is_empty());
        let bad = DilationExponents { a1: 0.5, a2: 1.0, eps: 0.05 };
        assert!(dilated_unit_cell(&params, &gq, bad).is_err());
    }

    #[test]
    fn missing_table_is_an_error() {
        let gq = GqTables::from_sets(1, []);
        assert!(admissible_family(3, 2, 4096.0, 0.3, 0.9, &gq).is_err());
    }
}
