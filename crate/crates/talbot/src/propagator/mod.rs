//! Frequency-comb initial data and the exact evaluation of their evolution.
//!
//! For a power symbol `P(ξ) = ξ₁^k + W(ξ′)` the datum is the tensor product
//! `f_R(x) = g(x₁) h(x′)` with
//!
//! ```text
//! g(x₁) = φ₁(R^{1/2} x₁) e(R x₁),
//! ĥ(ξ′) = Σ_{m′ ∈ ℤ^{n−1}} ψ(Dm′/R) φ̂₂(ξ′ − Dm′),
//! ```
//!
//! so `T_t f_R = T_t g · T_t h`. The first factor is a one-dimensional
//! oscillatory integral over the support of `φ̂₁`; the second is a finite
//! lattice sum whose terms are integrals over the support of `φ̂₂`. At the
//! rational times `t = p₁/(D^k q)` the lattice phases reduce to the complete
//! sums of [`crate::fieldsum`].
//!
//! Saddle symbols are handled in [`saddle`].

mod cutoff;
mod datum;
mod evolve;
pub mod saddle;
mod scan;

pub use cutoff::{CutoffProfile, Cutoffs, LatticeBump};
pub use datum::{build_comb_datum, datum_norm, datum_value, CombDatum, Symbol};
pub use evolve::{
    evolve_at, evolve_axis1, evolve_axis1_unchecked, evolve_lattice, evolve_lattice_rational,
    evolve_slab_point, lattice_block_check, GridSample, SampleMeta, SlabEval,
};
pub use saddle::{
    build_saddle_datum, saddle_evolve, saddle_gauss_check, saddle_points, SaddleDatum, SaddleKind,
    SaddleParams,
};
pub use scan::{divergence_scan, DivergenceReport, ScanTerm};

use num_complex::Complex64;

/// `e(x) = exp(2πix)`, reducing `x` mod 1 first.
#[inline]
pub(crate) fn cis(x: f64) -> Complex64 {
    let f = x - x.round();
    let th = std::f64::consts::TAU * f;
    Complex64::new(th.cos(), th.sin())
}

/// `e(ab)`, with the product split into its rounded value and exact error
/// before the reduction mod 1.
#[inline]
pub(crate) fn cis_product(a: f64, b: f64) -> Complex64 {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    cis((hi - hi.round()) + lo)
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(a + ξ)^e − a^e` expanded binomially, without the cancellation of the
/// naive difference.
pub(crate) fn pow_diff(a: f64, xi: f64, e: u32) -> f64 {
    (1..=e).map(|j| binom(e, j) * a.powi((e - j) as i32) * xi.powi(j as i32)).sum()
}

/// `W(a + ξ) − W(a)` term by term, telescoping over the variables.
pub(crate) fn poly_diff(w: &crate::fieldsum::IntPoly, a: &[f64], xi: &[f64]) -> f64 {
    let mut total = 0.0;
    for (e, c) in w.terms() {
        let mut term = 0.0;
        for j in 0..a.len() {
            if e[j] == 0 {
                continue;
            }
            let mut v = pow_diff(a[j], xi[j], e[j]);
            for i in 0..j {
                v *= (a[i] + xi[i]).powi(e[i] as i32);
            }
            for i in j + 1..a.len() {
                v *= a[i].powi(e[i] as i32);
            }
            term += v;
        }
        total += *c as f64 * term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldsum::IntPoly;

    #[test]
    fn cis_product_reduces_exactly() {
        // 2^40 · (1/3 + tiny) has a fractional part that plain rounding loses.
        let a = 2f64.powi(40);
        let b = 1.0 / 3.0;
        let exact_frac = {
            // b = m · 2^-54 exactly; a·b = m · 2^-14.
            let m = (b * 2f64.powi(54)) as u128;
            let num = m % (1u128 << 14);
            num as f64 / 2f64.powi(14)
        };
        let z = cis_product(a, b);
        let w = cis(exact_frac);
        assert!((z - w).norm() < 1e-12);
    }

    #[test]
    fn poly_diff_matches_direct() {
        let w = IntPoly::parse("x^3 + 2*x*y^2 - y^3 + x", None).unwrap();
        let a = [1.5, -2.25];
        let xi = [0.01, -0.003];
        let direct = w.eval_f64(&[a[0] + xi[0], a[1] + xi[1]]) - w.eval_f64(&a);
        assert!((poly_diff(&w, &a, &xi) - direct).abs() < 1e-13);
    }

    #[test]
    fn pow_diff_is_stable_at_large_base() {
        let a = 2f64.powi(20);
        let v = pow_diff(a, 1e-3, 3);
        let expect = 3.0 * a * a * 1e-3 + 3.0 * a * 1e-6 + 1e-9;
        assert!((v - expect).abs() < 1e-12 * expect);
    }
}
