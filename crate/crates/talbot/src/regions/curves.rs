//! Piecewise-affine Sobolev-exponent curves: the power-symbol counterexample
//! curve, the saddle curves, and the positive thresholds.

use std::fmt;

use super::{classify_above_below, dim_f, ParamPoint, Region};
use crate::error::{Error, Result};

/// Affine piece `s(α) = slope·α + intercept` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub slope: f64,
    pub intercept: f64,
    pub label: String,
}

impl Segment {
    fn new(lo: f64, hi: f64, slope: f64, intercept: f64, label: impl Into<String>) -> Self {
        Segment { lo, hi, slope, intercept, label: label.into() }
    }

    /// Piece `c₀ + c₁ (n − α)`.
    fn from_n_minus_alpha(lo: f64, hi: f64, n: f64, c0: f64, c1: f64, label: impl Into<String>) -> Self {
        Segment::new(lo, hi, -c1, c0 + c1 * n, label)
    }

    pub fn value(&self, alpha: f64) -> f64 {
        self.slope * alpha + self.intercept
    }
}

/// Sorted, abutting affine segments.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseCurve {
    pub segments: Vec<Segment>,
}

impl PiecewiseCurve {
    fn from_segments(segments: Vec<Segment>) -> Self {
        let segments = segments.into_iter().filter(|s| s.hi > s.lo).collect();
        PiecewiseCurve { segments }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.segments[0].lo, self.segments[self.segments.len() - 1].hi)
    }

    /// Segment endpoints, from the left end of the domain to the right end.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.segments.iter().map(|s| s.lo).collect();
        b.push(self.domain().1);
        b
    }

    /// Value and label at `alpha`. At a breakpoint the lower-`α` segment wins.
    pub fn eval(&self, alpha: f64) -> Option<(f64, &str)> {
        self.segments
            .iter()
            .find(|s| s.lo <= alpha && alpha <= s.hi)
            .map(|s| (s.value(alpha), s.label.as_str()))
    }

    /// Largest jump across interior breakpoints.
    pub fn max_jump(&self) -> f64 {
        self.segments.windows(2).map(|w| (w[0].value(w[0].hi) - w[1].value(w[1].lo)).abs()).fold(0.0, f64::max)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.segments.iter().all(|s| s.slope <= 0.0) && self.segments.windows(2).all(|w| w[0].value(w[0].hi) >= w[1].value(w[1].lo) - 1e-12)
    }

    /// `samples` points per segment, both ends included.
    pub fn sample(&self, samples: usize) -> Vec<(f64, f64, &str)> {
        let m = samples.max(2);
        let mut out = Vec::new();
        for s in &self.segments {
            for j in 0..m {
                let a = s.lo + (s.hi - s.lo) * j as f64 / (m - 1) as f64;
                out.push((a, s.value(a), s.label.as_str()));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SobolevBranch {
    I,
    II,
    III,
}

impl SobolevBranch {
    pub fn label(self) -> &'static str {
        match self {
            SobolevBranch::I => "i",
            SobolevBranch::II => "ii",
            SobolevBranch::III => "iii",
        }
    }

    fn from_label(l: &str) -> Self {
        match l {
            "i" => SobolevBranch::I,
            "ii" => SobolevBranch::II,
            _ => SobolevBranch::III,
        }
    }
}

impl fmt::Display for SobolevBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Exponent, branch and the `(u₁, u₂)` realizing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevPoint {
    pub s: f64,
    pub branch: SobolevBranch,
    pub u1: f64,
    pub u2: f64,
}

fn check_kn(k: u32, n: u32) -> Result<()> {
    if k < 2 || n < 2 {
        return Err(Error::Precondition(format!("need k >= 2 and n >= 2, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Breakpoints in increasing order, from the left end of the range to `n`.
pub fn thm14_breakpoints(k: u32, n: u32) -> Result<Vec<f64>> {
    Ok(thm14_curve(k, n)?.breakpoints())
}

/// `[α_min, n]` on which the counterexample curve is defined.
pub fn sobolev_range(k: u32, n: u32) -> Result<(f64, f64)> {
    Ok(thm14_curve(k, n)?.domain())
}

/// The counterexample curve for `P(ξ) = ξ₁^k + W(ξ′)`.
pub fn thm14_curve(k: u32, n: u32) -> Result<PiecewiseCurve> {
    check_kn(k, n)?;
    let (kf, nf) = (k as f64, n as f64);
    let a1 = nf - (nf - 1.0) / (2.0 * kf);
    let big = nf * (kf - 1.0) + 1.0;
    let seg_i = |lo| {
        Segment::from_n_minus_alpha(lo, nf, nf, 0.25 + (nf - 1.0) / (4.0 * big), (nf - 1.0) * (kf - 1.0) / (2.0 * big), "i")
    };
    let seg_ii = |lo, hi| {
        let m = nf + kf - 1.0;
        Segment::from_n_minus_alpha(lo, hi, nf, 0.25 + (nf - 1.0) / (4.0 * m), (nf - 1.0) / (2.0 * m), "ii")
    };
    let segments = if k <= 2 * (n - 1) {
        vec![seg_ii(nf - 0.5 - (nf - 1.0) / kf, a1), seg_i(a1)]
    } else {
        let a2 = nf - (nf - 1.0) / (kf - nf + 1.0);
        let a3 = nf - (kf + nf - 1.0) / (2.0 * kf - nf + 1.0);
        let c = (nf - 1.0) / (4.0 * kf);
        vec![Segment::from_n_minus_alpha(a3, a2, nf, 0.25 + c, c, "iii"), seg_ii(a2, a1), seg_i(a1)]
    };
    Ok(PiecewiseCurve::from_segments(segments))
}

/// Counterexample exponent at dimension `alpha` with its branch and `(u₁, u₂)`.
///
/// Branches (i) and (ii) sit on `u₁ = 1/2` and on `Q = 1` in the above
/// region; branch (iii) sits on `Q = 1` in the below region.
pub fn sobolev_from_alpha(k: u32, n: u32, alpha: f64) -> Result<SobolevPoint> {
    let curve = thm14_curve(k, n)?;
    let (lo, hi) = curve.domain();
    let (s, label) = curve
        .eval(alpha)
        .ok_or_else(|| Error::Precondition(format!("alpha = {alpha} outside [{lo}, {hi}] for k = {k}, n = {n}")))?;
    let branch = SobolevBranch::from_label(label);
    let (kf, nf) = (k as f64, n as f64);
    let (u1, u2) = match branch {
        SobolevBranch::I => (0.5, (alpha + 1.0 / (2.0 * (kf - 1.0))) * (kf - 1.0) / (nf * (kf - 1.0) + 1.0)),
        SobolevBranch::II => {
            let u2 = (alpha + kf - 1.5) / (nf + kf - 1.0);
            (kf * u2 - (kf - 1.0), u2)
        }
        SobolevBranch::III => (0.5 - (nf - alpha) / 2.0, 1.0 - (nf - alpha + 1.0) / (2.0 * kf)),
    };
    Ok(SobolevPoint { s, branch, u1, u2 })
}

/// `s(u₂) = 1/4 + (n−1)(1−u₂)/2`, the exponent delivered by a datum at `u₂`.
pub fn sobolev_of_u2(n: u32, u2: f64) -> f64 {
    0.25 + (n as f64 - 1.0) * (1.0 - u2) / 2.0
}

/// Dimension and region at the point returned by [`sobolev_from_alpha`].
pub fn realized_dimension(k: u32, n: u32, sp: &SobolevPoint) -> Result<(f64, Region)> {
    let p = ParamPoint::new(sp.u1, sp.u2, k, n);
    Ok((dim_f(&p)?, classify_above_below(&p)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleBranch {
    /// Lattice datum at rational times.
    Talbot,
    /// The odd-dimensional case `m = (n−1)/2`.
    Odd,
    /// `(n−α+1)/2`.
    NonDispersive,
}

impl SaddleBranch {
    pub fn label(self) -> &'static str {
        match self {
            SaddleBranch::Talbot => "talbot",
            SaddleBranch::Odd => "odd",
            SaddleBranch::NonDispersive => "non-dispersive",
        }
    }

    fn from_label(l: &str) -> Self {
        match l {
            "talbot" => SaddleBranch::Talbot,
            "odd" => SaddleBranch::Odd,
            _ => SaddleBranch::NonDispersive,
        }
    }
}

/// Counterexample curve for the quadratic form of index `m`.
///
/// For `n` even and `m = n/2` the rational-time formula degenerates to the
/// constant `n/4`, which is included on `[n/2, n/2 + 1]`.
pub fn thm16_curve(n: u32, m: u32) -> Result<PiecewiseCurve> {
    if n < 2 || m < 1 || 2 * m > n {
        return Err(Error::Precondition(format!("saddle index m = {m} outside [1, n/2] for n = {n}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let nd = |lo| Segment::from_n_minus_alpha(lo, nf, nf, 0.5, 0.5, "non-dispersive");
    let talbot = |lo, hi| {
        let den = 2.0 * (nf - 2.0 * mf + 2.0);
        Segment::from_n_minus_alpha(lo, hi, nf, nf / den, (nf - 2.0 * mf) / den, "talbot")
    };
    let segments = if 2 * m + 2 <= n {
        vec![talbot(nf / 2.0, nf - mf + 1.0), nd(nf - mf + 1.0)]
    } else if n % 2 == 1 {
        let lo = (nf + 1.0) / 2.0;
        let mid = (nf + 3.0) / 2.0;
        vec![Segment::from_n_minus_alpha(lo, mid, nf, (mf + 1.0) / 4.0, 0.25, "odd"), nd(mid)]
    } else {
        vec![talbot(nf / 2.0, nf / 2.0 + 1.0), nd(nf / 2.0 + 1.0)]
    };
    Ok(PiecewiseCurve::from_segments(segments))
}

pub fn saddle_sobolev(n: u32, m: u32, alpha: f64) -> Result<(f64, SaddleBranch)> {
    let curve = thm16_curve(n, m)?;
    let (lo, hi) = curve.domain();
    let (s, label) = curve
        .eval(alpha)
        .ok_or_else(|| Error::Precondition(format!("alpha = {alpha} outside [{lo}, {hi}] for n = {n}, m = {m}")))?;
    Ok((s, SaddleBranch::from_label(label)))
}

/// Symbol classes carrying a positive (convergence) threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolClass {
    NonsingularP,
    NonsingularHessian,
    PositiveDefinite,
    /// Dispersive decay `|t|^{−β}`.
    Dispersive(f64),
}

impl SymbolClass {
    /// Accepts `nonsingular-p`, `nonsingular-hessian`, `positive-definite`
    /// and `dispersive:<beta>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nonsingular-p" => Ok(SymbolClass::NonsingularP),
            "nonsingular-hessian" => Ok(SymbolClass::NonsingularHessian),
            "positive-definite" => Ok(SymbolClass::PositiveDefinite),
            _ => {
                let beta = s
                    .strip_prefix("dispersive:")
                    .and_then(|b| b.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown symbol class '{s}'")))?;
                Ok(SymbolClass::Dispersive(beta))
            }
        }
    }
}

/// The convergence threshold curve on `[0, n]`.
pub fn threshold_curve(n: u32, class: SymbolClass) -> Result<PiecewiseCurve> {
    if n < 1 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let nf = n as f64;
    let trivial = |lo, hi| Segment::from_n_minus_alpha(lo, hi, nf, 0.0, 0.5, "dispersive");
    let nd = |lo| Segment::from_n_minus_alpha(lo, nf, nf, 0.5, 0.5, "non-dispersive");
    let segments = match class {
        SymbolClass::NonsingularP => vec![nd(0.0)],
        SymbolClass::NonsingularHessian => return threshold_curve(n, SymbolClass::Dispersive(nf / 2.0)),
        SymbolClass::Dispersive(beta) => {
            if !(beta > 0.0) {
                return Err(Error::Precondition(format!("beta = {beta} must be positive")));
            }
            let b = beta.min(nf);
            let c = (beta + 1.0).min(nf);
            vec![trivial(0.0, b), Segment::new(b, c, 0.0, (nf - beta) / 2.0, "plateau"), nd(c)]
        }
        SymbolClass::PositiveDefinite => {
            let h = nf / (2.0 * (nf + 1.0));
            vec![
                trivial(0.0, nf / 2.0),
                Segment::new(nf / 2.0, (nf + 1.0) / 2.0, 0.0, nf / 4.0, "plateau"),
                Segment::from_n_minus_alpha((nf + 1.0) / 2.0, nf, nf, h, h, "restriction"),
            ]
        }
    };
    Ok(PiecewiseCurve::from_segments(segments))
}

pub fn positive_threshold(n: u32, class: SymbolClass, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    if !(0.0..=nf).contains(&alpha) {
        return Err(Error::Precondition(format!("alpha = {alpha} outside [0, {n}]")));
    }
    let curve = threshold_curve(n, class)?;
    Ok(curve.eval(alpha).expect("curve covers [0, n]").0)
}
