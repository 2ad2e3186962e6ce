//! Parameter domain `𝒟`, the above/below split, dimension formulas, dilation
//! exponents, and the Sobolev-exponent curves.
//!
//! Points `(u₁, u₂)` encode the datum parameters through
//! `R^{u₁} = D^k Q / R^{k−1}` and `R^{u₂} = D Q`.

mod curves;
mod emit;

pub use curves::{
    positive_threshold, realized_dimension, saddle_sobolev, sobolev_from_alpha, sobolev_of_u2, sobolev_range,
    thm14_breakpoints, thm14_curve, thm16_curve, threshold_curve, PiecewiseCurve, SaddleBranch, Segment,
    SobolevBranch, SobolevPoint, SymbolClass,
};
pub use emit::{curve_emit, domain_polygon, Edge, EmitKind};

use crate::error::{Error, Result};

/// Tolerance used when deciding whether a constraint holds with equality.
pub const TIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint {
    pub u1: f64,
    pub u2: f64,
    pub k: u32,
    pub n: u32,
}

impl ParamPoint {
    pub fn new(u1: f64, u2: f64, k: u32, n: u32) -> Self {
        ParamPoint { u1, u2, k, n }
    }
}

/// The five inequalities defining `𝒟`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `0 ≤ u₁ ≤ 1/2`.
    U1Range,
    /// `1/2 ≤ u₂ ≤ 1`.
    U2Range,
    /// `k u₂ − u₁ ≥ k − 1`, i.e. `Q ≥ 1`.
    QAtLeastOne,
    /// `u₂ − u₁ < 1 − 1/k` (strict): shrinking unit cell.
    ShrinkingCell,
    /// `((k−2)/(k−1)) u₁ + ((n(k−1)+1)/(k−1)) u₂ ≤ n + 1/2`: disjointness.
    Disjointness,
}

impl Constraint {
    pub const ALL: [Constraint; 5] = [
        Constraint::U1Range,
        Constraint::U2Range,
        Constraint::QAtLeastOne,
        Constraint::ShrinkingCell,
        Constraint::Disjointness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::U1Range => "u1-range",
            Constraint::U2Range => "u2-range",
            Constraint::QAtLeastOne => "Q>=1",
            Constraint::ShrinkingCell => "shrinking-cell",
            Constraint::Disjointness => "disjointness",
        }
    }

    /// Signed slack: nonnegative when the closed constraint holds.
    pub fn slack(self, p: &ParamPoint) -> f64 {
        let k = p.k as f64;
        let n = p.n as f64;
        match self {
            Constraint::U1Range => p.u1.min(0.5 - p.u1),
            Constraint::U2Range => (p.u2 - 0.5).min(1.0 - p.u2),
            Constraint::QAtLeastOne => k * p.u2 - p.u1 - (k - 1.0),
            Constraint::ShrinkingCell => (1.0 - 1.0 / k) - (p.u2 - p.u1),
            Constraint::Disjointness => n + 0.5 - disjointness_form(p),
        }
    }

    fn is_strict(self) -> bool {
        matches!(self, Constraint::ShrinkingCell)
    }
}

/// `((k−2)/(k−1)) u₁ + ((n(k−1)+1)/(k−1)) u₂`.
pub fn disjointness_form(p: &ParamPoint) -> f64 {
    let k = p.k as f64;
    let n = p.n as f64;
    (k - 2.0) / (k - 1.0) * p.u1 + (n * (k - 1.0) + 1.0) / (k - 1.0) * p.u2
}

/// Result of a membership test for `𝒟`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainCheck {
    /// Membership in the closure of `𝒟`.
    pub inside: bool,
    /// Membership with the shrinking-cell inequality kept strict.
    pub strictly_inside: bool,
    /// Constraints failing even in closed form.
    pub violated: Vec<Constraint>,
    /// Constraints holding with equality.
    pub tight: Vec<Constraint>,
}

/// Tests the five constraints of `𝒟`.
///
/// `inside` accepts the closure, so the corner `(0, (k−1)/k)` where the
/// shrinking-cell inequality becomes an equality counts as a member;
/// `strictly_inside` reports the strict reading.
pub fn in_domain_d(p: &ParamPoint) -> DomainCheck {
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    let mut strict_ok = true;
    if p.k < 2 || p.n < 1 {
        return DomainCheck { inside: false, strictly_inside: false, violated: Constraint::ALL.to_vec(), tight };
    }
    for c in Constraint::ALL {
        let s = c.slack(p);
        if s < -TIGHT_TOL {
            violated.push(c);
        } else if s.abs() <= TIGHT_TOL {
            tight.push(c);
            if c.is_strict() {
                strict_ok = false;
            }
        }
    }
    let inside = violated.is_empty();
    DomainCheck { inside, strictly_inside: inside && strict_ok, violated, tight }
}

fn require_domain(p: &ParamPoint) -> Result<()> {
    let c = in_domain_d(p);
    if c.inside {
        Ok(())
    } else {
        let names: Vec<_> = c.violated.iter().map(|c| c.name()).collect();
        Err(Error::OutsideDomain(format!(
            "(u1, u2) = ({}, {}) with k = {}, n = {} violates {}",
            p.u1,
            p.u2,
            p.k,
            p.n,
            names.join(", ")
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Above,
    Below,
}

/// Left side of the above/below test, `(n−1−k/(k−1)) u₂ − ((k−2)/(k−1)) u₁`.
pub fn above_below_form(p: &ParamPoint) -> f64 {
    let k = p.k as f64;
    let n = p.n as f64;
    (n - 1.0 - k / (k - 1.0)) * p.u2 - (k - 2.0) / (k - 1.0) * p.u1
}

/// Above iff the form is strictly below `n − 5/2`; equality counts as below.
pub fn classify_above_below(p: &ParamPoint) -> Result<Region> {
    require_domain(p)?;
    Ok(if above_below_form(p) < p.n as f64 - 2.5 { Region::Above } else { Region::Below })
}

/// Exponents `(d, q)` with `D = R^d`, `Q = R^q`.
pub fn dq_exponents(p: &ParamPoint) -> (f64, f64) {
    let k = p.k as f64;
    let d = 1.0 - (p.u2 - p.u1) / (k - 1.0);
    let q = (k * p.u2 - p.u1) / (k - 1.0) - 1.0;
    (d, q)
}

/// `(D, Q)` for scale `R`.
pub fn dq_from_u(p: &ParamPoint, r: f64) -> (f64, f64) {
    let (d, q) = dq_exponents(p);
    (r.powf(d), r.powf(q))
}

/// Inverse map: `u₁ = log_R(D^k Q / R^{k−1})`, `u₂ = log_R(D Q)`.
pub fn u_from_dq(k: u32, r: f64, d: f64, q: f64) -> (f64, f64) {
    let lr = r.ln();
    let k = k as f64;
    ((k * d.ln() + q.ln() - (k - 1.0) * lr) / lr, (d.ln() + q.ln()) / lr)
}

/// Dimension formula of the above region.
pub fn dim_above(p: &ParamPoint) -> f64 {
    disjointness_form(p) - 0.5
}

/// Dimension formula of the below region.
pub fn dim_below(p: &ParamPoint) -> f64 {
    let k = p.k as f64;
    p.n as f64 - 3.0 + 2.0 * (k * p.u2 + (k - 2.0) * p.u1) / (k - 1.0)
}

/// Hausdorff dimension of the limsup divergence set at `p`.
pub fn dim_f(p: &ParamPoint) -> Result<f64> {
    Ok(match classify_above_below(p)? {
        Region::Above => dim_above(p),
        Region::Below => dim_below(p),
    })
}

/// Fine-ball covering exponent: `R^e` balls of radius `1/R` cover `F_R`.
pub fn fine_ball_exponent(p: &ParamPoint) -> f64 {
    let k = p.k as f64;
    let n = p.n as f64;
    (n + 1.0 / (k - 1.0)) * p.u2 + (k - 2.0) / (k - 1.0) * p.u1 - 0.5
}

/// Sheet covering exponent: `R^e` balls of radius `R^{-1/2}` cover `F_R`.
pub fn sheet_exponent(p: &ParamPoint) -> f64 {
    let k = p.k as f64;
    let n = p.n as f64;
    (n - 3.0) / 2.0 + (k - 2.0) / (k - 1.0) * p.u1 + k / (k - 1.0) * p.u2
}

/// Exponent of the number of slabs of `F_R` inside `[−1, 1]^n`.
pub fn slab_count_exponent(p: &ParamPoint) -> f64 {
    fine_ball_exponent(p) - 0.5
}

/// Lower bound `n − (n−1)/k` for the disjointness form over `𝒟`.
pub fn restriction_lower(p: &ParamPoint) -> f64 {
    p.n as f64 - (p.n as f64 - 1.0) / p.k as f64
}

/// The dilation segment `𝒜` for a given `ε`, parametrised by `a₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilationSegment {
    pub eps: f64,
    /// Right side of `a₁ + (n−1) a₂ = rhs`.
    pub rhs: f64,
    pub a2_min: f64,
    pub a2_max: f64,
    pub n: u32,
}

impl DilationSegment {
    pub fn a1(&self, a2: f64) -> f64 {
        self.rhs - (self.n as f64 - 1.0) * a2
    }

    /// The endpoint with the largest `a₁`.
    pub fn critical_point(&self) -> (f64, f64) {
        (self.a1(self.a2_min), self.a2_min)
    }
}

/// `((k−2+ε)/(k−1)) u₁ + ((n(k−1)+1−kε)/(k−1)) u₂ − (1−ε)`.
pub fn dilation_rhs(p: &ParamPoint, eps: f64) -> f64 {
    let k = p.k as f64;
    let n = p.n as f64;
    (k - 2.0 + eps) / (k - 1.0) * p.u1 + (n * (k - 1.0) + 1.0 - k * eps) / (k - 1.0) * p.u2 - (1.0 - eps)
}

/// `𝒜 = {(a₁, a₂) : u₁ ≤ a₁ ≤ 1/2, u₂ ≤ a₂ ≤ 1, a₁ + (n−1)a₂ = rhs}`, or
/// `None` when empty. Requires `n ≥ 2`.
pub fn dilation_segment(p: &ParamPoint, eps: f64) -> Result<Option<DilationSegment>> {
    require_domain(p)?;
    if p.n < 2 {
        return Err(Error::Precondition("dilation segment needs n >= 2".into()));
    }
    if eps <= 0.0 || eps >= 1.0 {
        return Err(Error::Precondition(format!("epsilon = {eps} must lie in (0, 1)")));
    }
    let rhs = dilation_rhs(p, eps);
    let m = p.n as f64 - 1.0;
    let lo = p.u2.max((rhs - 0.5) / m);
    let hi = 1f64.min((rhs - p.u1) / m);
    if lo > hi + TIGHT_TOL {
        return Ok(None);
    }
    Ok(Some(DilationSegment { eps, rhs, a2_min: lo, a2_max: hi.max(lo), n: p.n }))
}

/// The critical point `a₂ = u₂`, `a₁ = u₁ + (k u₂ − u₁ − (k−1))(1−ε)/(k−1)`.
pub fn critical_dilation(p: &ParamPoint, eps: f64) -> (f64, f64) {
    let k = p.k as f64;
    (p.u1 + (k * p.u2 - p.u1 - (k - 1.0)) * (1.0 - eps) / (k - 1.0), p.u2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_examples() {
        for k in 2..8u32 {
            let c = in_domain_d(&ParamPoint::new(0.0, (k as f64 - 1.0) / k as f64, k, 2));
            assert!(c.inside, "k = {k}");
            assert!(c.tight.contains(&Constraint::QAtLeastOne));
        }
        let c = in_domain_d(&ParamPoint::new(0.5, 1.0, 2, 2));
        assert!(!c.inside && c.violated == vec![Constraint::Disjointness]);
        assert!(in_domain_d(&ParamPoint::new(0.5, 0.75, 2, 2)).inside);
    }

    #[test]
    fn classification_examples() {
        let p = ParamPoint::new(0.5, 0.75, 2, 2);
        assert_eq!(classify_above_below(&p).unwrap(), Region::Above);
        assert!(classify_above_below(&ParamPoint::new(0.5, 1.0, 2, 2)).is_err());
        // k = 10, n = 2: the boundary crosses Q = 1 at u₂ = 1 − 1/(2(k−1)).
        let u2c = 1.0 - 1.0 / 18.0;
        let on_q1 = |u2: f64| ParamPoint::new(10.0 * u2 - 9.0, u2, 10, 2);
        assert_eq!(classify_above_below(&on_q1(u2c + 0.003)).unwrap(), Region::Above);
        assert_eq!(classify_above_below(&on_q1(u2c - 0.003)).unwrap(), Region::Below);
        // Equality counts as below.
        let tie = ParamPoint::new(0.5 - 1.0 / 16.0, 1.0, 10, 2);
        assert!(above_below_form(&tie) == -0.5);
        assert_eq!(classify_above_below(&tie).unwrap(), Region::Below);
    }

    #[test]
    fn dq_examples() {
        let (d, q) = dq_from_u(&ParamPoint::new(0.5, 1.0, 2, 2), 1024.0);
        assert!((d - 32.0).abs() < 1e-9 && (q - 32.0).abs() < 1e-9);
        let (_, qe) = dq_exponents(&ParamPoint::new(0.0, 2.0 / 3.0, 3, 2));
        assert!(qe.abs() < 1e-15);
        let p = ParamPoint::new(0.3, 0.9, 3, 2);
        let (d, q) = dq_from_u(&p, 4096.0);
        let (u1, u2) = u_from_dq(3, 4096.0, d, q);
        assert!((u1 - 0.3).abs() < 1e-12 && (u2 - 0.9).abs() < 1e-12);
    }

    #[test]
    fn dimension_examples() {
        assert!((dim_f(&ParamPoint::new(0.5, 0.75, 2, 2)).unwrap() - 1.75).abs() < 1e-15);
        let v = dim_f(&ParamPoint::new(0.0, 2.0 / 3.0, 3, 3)).unwrap();
        assert!((v - 11.0 / 6.0).abs() < 1e-14);
    }
}
