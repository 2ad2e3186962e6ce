use num_complex::Complex64;

use super::{check_prime, pairwise_sum, IntPoly, RootTable};
use crate::bspline;
use crate::error::{Error, Result};

/// A weight `ζ` on `ℤ^d` supported in the box `|mᵢ| ≤ radius`.
pub trait LatticeWeight: Sync {
    fn dim(&self) -> usize;
    /// Support radius `L`.
    fn radius(&self) -> f64;
    fn weight(&self, m: &[i64]) -> Complex64;
}

/// Tensor B-spline bump `ζ(m) = ∏ M_r(r mᵢ / (2L)) / M_r(0)`.
#[derive(Clone, Debug)]
pub struct SplineWeight {
    pub dim: usize,
    pub l: f64,
    pub order: usize,
}

impl LatticeWeight for SplineWeight {
    fn dim(&self) -> usize {
        self.dim
    }
    fn radius(&self) -> f64 {
        self.l
    }
    fn weight(&self, m: &[i64]) -> Complex64 {
        let s = self.order as f64 / (2.0 * self.l);
        let peak = bspline::m(self.order, 0.0);
        let v: f64 = m.iter().map(|&x| bspline::m(self.order, s * x as f64) / peak).product();
        Complex64::new(v, 0.0)
    }
}

/// Gaussian `exp(−|m|²/(2σ²))` truncated to the box of radius `L`.
#[derive(Clone, Debug)]
pub struct GaussianWeight {
    pub dim: usize,
    pub l: f64,
    pub sigma: f64,
}

impl LatticeWeight for GaussianWeight {
    fn dim(&self) -> usize {
        self.dim
    }
    fn radius(&self) -> f64 {
        self.l
    }
    fn weight(&self, m: &[i64]) -> Complex64 {
        if m.iter().any(|&x| (x as f64).abs() > self.l) {
            return Complex64::new(0.0, 0.0);
        }
        let r2: f64 = m.iter().map(|&x| (x * x) as f64).sum();
        Complex64::new((-r2 / (2.0 * self.sigma * self.sigma)).exp(), 0.0)
    }
}

/// Odd bump: derivative of the spline in the first coordinate, spline in the
/// others. Its total mass is zero by symmetry.
#[derive(Clone, Debug)]
pub struct OddBumpWeight {
    pub dim: usize,
    pub l: f64,
    pub order: usize,
}

impl LatticeWeight for OddBumpWeight {
    fn dim(&self) -> usize {
        self.dim
    }
    fn radius(&self) -> f64 {
        self.l
    }
    fn weight(&self, m: &[i64]) -> Complex64 {
        let s = self.order as f64 / (2.0 * self.l);
        let mut v = bspline::dm(self.order, s * m[0] as f64);
        for &x in &m[1..] {
            v *= bspline::m(self.order, s * x as f64);
        }
        Complex64::new(v, 0.0)
    }
}

/// Adapter for an arbitrary closure.
pub struct FnWeight<F: Fn(&[i64]) -> Complex64 + Sync> {
    pub dim: usize,
    pub l: f64,
    pub f: F,
}

impl<F: Fn(&[i64]) -> Complex64 + Sync> LatticeWeight for FnWeight<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn radius(&self) -> f64 {
        self.l
    }
    fn weight(&self, m: &[i64]) -> Complex64 {
        (self.f)(m)
    }
}

/// Comparison of a weighted lattice sum with its complete-sum approximation.
#[derive(Clone, Debug)]
pub struct BlockSumReport {
    /// `Σ_m ζ(m) e(f(m)/q)`.
    pub lhs: Complex64,
    /// `(q^{-d} Σ_m ζ(m)) · Σ_{l ∈ 𝔽_q^d} e(f(l)/q)`.
    pub main_term: Complex64,
    /// `|lhs − main_term|`.
    pub error: f64,
    /// `q^{d/2} (L/q)^{d−2N}`.
    pub bound: f64,
    pub ratio: f64,
}

/// Splits the weighted sum `Σ_m ζ(m) e(f(m)/q)` into the complete-sum main
/// term and the remainder, and reports the remainder against
/// `q^{d/2}(L/q)^{d−2N}`.
pub fn block_sum_verify(zeta: &dyn LatticeWeight, f: &IntPoly, q: u64, n_order: u32) -> Result<BlockSumReport> {
    check_prime(q)?;
    let d = zeta.dim();
    if f.num_vars() != d {
        return Err(Error::DimensionMismatch { expected: d, got: f.num_vars() });
    }
    if 2 * n_order as usize <= d {
        return Err(Error::Precondition(format!("N = {n_order} must exceed d/2 = {}", d as f64 / 2.0)));
    }
    let l = zeta.radius();
    let li = l.floor() as i64;
    let side = (2 * li + 1) as usize;
    let total = side.pow(d as u32);
    let roots = RootTable::new(q);

    let point = |idx: usize| {
        let mut m = [0i64; 16];
        let mut rest = idx;
        for slot in m[..d].iter_mut().rev() {
            *slot = (rest % side) as i64 - li;
            rest /= side;
        }
        m
    };
    let lhs = pairwise_sum(0, total, &|idx| {
        let m = point(idx);
        let r: Vec<u64> = m[..d].iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
        zeta.weight(&m[..d]) * roots.get(f.eval_residues(&r, q))
    });
    let mass = pairwise_sum(0, total, &|idx| zeta.weight(&point(idx)[..d]));
    let qd = (q as usize).pow(d as u32);
    let complete = pairwise_sum(0, qd, &|idx| {
        let mut r = [0u64; 16];
        super::digits(idx, q, d, &mut r);
        roots.get(f.eval_residues(&r[..d], q))
    });
    let main_term = mass / qd as f64 * complete;
    let error = (lhs - main_term).norm();
    let qf = q as f64;
    let bound = qf.powf(d as f64 / 2.0) * (l / qf).powf(d as f64 - 2.0 * n_order as f64);
    Ok(BlockSumReport { lhs, main_term, error, bound, ratio: error / bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_order() {
        let z = SplineWeight { dim: 2, l: 20.0, order: 6 };
        let f = IntPoly::parse("x^3+y^3", None).unwrap();
        assert!(block_sum_verify(&z, &f, 5, 1).is_err());
    }

    #[test]
    fn zero_mass_weight_has_no_main_term() {
        let z = OddBumpWeight { dim: 1, l: 40.0, order: 6 };
        let f = IntPoly::parse("x^3", None).unwrap();
        let r = block_sum_verify(&z, &f, 5, 1).unwrap();
        assert!(r.main_term.norm() < 1e-12);
        assert!((r.error - r.lhs.norm()).abs() < 1e-12);
    }

    #[test]
    fn lhs_matches_naive_loop() {
        let z = GaussianWeight { dim: 1, l: 40.0, sigma: 10.0 };
        let f = IntPoly::parse("x^3", None).unwrap();
        let r = block_sum_verify(&z, &f, 5, 1).unwrap();
        let mut naive = Complex64::new(0.0, 0.0);
        for m in -40i64..=40 {
            let ph = (m.pow(3)).rem_euclid(5) as f64 / 5.0;
            naive += Complex64::from_polar((-(m * m) as f64 / 200.0).exp(), std::f64::consts::TAU * ph);
        }
        assert!((naive - r.lhs).norm() < 1e-10);
    }
}
