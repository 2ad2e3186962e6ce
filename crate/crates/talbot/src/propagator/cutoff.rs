//! Concrete cutoff functions.
//!
//! The physical-side profile is `φ(x) = sinc(πx/s)^r` and its Fourier
//! transform is the dilated B-spline `φ̂(ξ) = s M_r(sξ)`, supported in
//! `[−c, c]` for `s = r/(2c)`. Both sides are nonnegative and `φ(0) = 1`.

use crate::bspline;
use crate::error::{Error, Result};

/// One-dimensional profile with compact Fourier support `[−c, c]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffProfile {
    c: f64,
    order: usize,
}

impl CutoffProfile {
    /// Default order of the B-spline on the Fourier side.
    pub const DEFAULT_ORDER: usize = 8;
    /// Default Fourier support radius.
    pub const DEFAULT_C: f64 = 0.01;

    pub fn new(c: f64) -> Result<Self> {
        Self::with_order(c, Self::DEFAULT_ORDER)
    }

    /// `order` must be even and at least 4 so that `φ` is integrable and `φ̂`
    /// has its knots symmetric about the origin.
    pub fn with_order(c: f64, order: usize) -> Result<Self> {
        if !(c > 0.0 && c <= 0.05) {
            return Err(Error::Precondition(format!("Fourier support radius c = {c} must lie in (0, 0.05]")));
        }
        if order < 4 || !order.is_multiple_of(2) {
            return Err(Error::Precondition(format!("profile order {order} must be even and at least 4")));
        }
        Ok(CutoffProfile { c, order })
    }

    pub fn name(&self) -> String {
        format!("bspline-{}", self.order)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dilation `s = r/(2c)`.
    pub fn scale(&self) -> f64 {
        self.order as f64 / (2.0 * self.c)
    }

    /// `φ̂(ξ)`.
    pub fn hat(&self, xi: f64) -> f64 {
        let s = self.scale();
        s * bspline::m(self.order, s * xi)
    }

    /// `φ(x)`.
    pub fn phys(&self, x: f64) -> f64 {
        bspline::m_hat(self.order, x / self.scale())
    }

    /// `‖φ̂‖₂² = s M_{2r}(0)`.
    pub fn hat_norm_sq(&self) -> f64 {
        self.scale() * bspline::l2_norm_sq(self.order)
    }

    /// Bound `|φ(x)| ≤ min(1, (s/(π|x|))^r)`.
    pub fn tail_bound(&self, x: f64) -> f64 {
        let v = self.scale() / (std::f64::consts::PI * x.abs());
        v.powi(self.order as i32).min(1.0)
    }

    /// Breakpoints of `φ̂`: `order + 1` equally spaced knots from `−c` to `c`.
    pub fn knots(&self) -> Vec<f64> {
        let h = 2.0 * self.c / self.order as f64;
        (0..=self.order).map(|j| -self.c + h * j as f64).collect()
    }

    /// `φ` sampled at `x₀ + j·step`, `j = 0..count`.
    pub fn table(&self, x0: f64, step: f64, count: usize) -> Vec<f64> {
        (0..count).map(|j| self.phys(x0 + step * j as f64)).collect()
    }
}

impl Default for CutoffProfile {
    fn default() -> Self {
        CutoffProfile { c: Self::DEFAULT_C, order: Self::DEFAULT_ORDER }
    }
}

/// Lattice bump `ψ(y) = M_r(ry/2)/M_r(0)`, supported in `|y| < 1` with
/// `ψ(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeBump {
    order: usize,
}

impl LatticeBump {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Precondition(format!("bump order {order} must be at least 2")));
        }
        Ok(LatticeBump { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval(&self, y: f64) -> f64 {
        let r = self.order;
        bspline::m(r, r as f64 * y / 2.0) / bspline::m(r, 0.0)
    }

    /// Tensor product over the coordinates of `y`.
    pub fn eval_tensor(&self, y: &[f64]) -> f64 {
        y.iter().map(|&v| self.eval(v)).product()
    }
}

impl Default for LatticeBump {
    fn default() -> Self {
        LatticeBump { order: 4 }
    }
}

/// The cutoffs `(φ₁, φ₂, ψ)` of a comb datum. `φ₂` is the tensor power of
/// its one-dimensional profile.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cutoffs {
    pub phi1: CutoffProfile,
    pub phi2: CutoffProfile,
    pub psi: LatticeBump,
}
