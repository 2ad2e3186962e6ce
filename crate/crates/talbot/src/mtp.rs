//! Mass Transference Principle lower bounds, from rectangles to rectangles.
//!
//! A limsup of rectangles with side exponents `b` whose dilations to
//! exponents `a` have full measure has dimension at least
//!
//! ```text
//! min_{A ∈ {b_j}} ( #K₁ + Σ_{K₂} (1 − (b_j − a_j)/A) + Σ_{K₃} a_j/A )
//! ```
//!
//! with `K₁ = {a_j ≥ A}`, `K₂ = {b_j ≤ A} ∖ K₁` and `K₃` the rest. Every
//! routine is generic over the scalar so exact rationals can be used.

use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};

/// Scalars accepted by the MTP routines: `f64` and `Ratio<i64>` among others.
pub trait Scalar: Num + Copy + PartialOrd + ToPrimitive + std::fmt::Debug {}
impl<T: Num + Copy + PartialOrd + ToPrimitive + std::fmt::Debug> Scalar for T {}

fn half<T: Scalar>() -> T {
    T::one() / (T::one() + T::one())
}

/// Original exponents `b` and dilated exponents `a`, with `0 ≤ aᵢ ≤ bᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentPair<T> {
    b: Vec<T>,
    a: Vec<T>,
}

impl<T: Scalar> ExponentPair<T> {
    pub fn new(b: Vec<T>, a: Vec<T>) -> Result<Self> {
        if b.is_empty() || b.len() != a.len() {
            return Err(Error::DimensionMismatch { expected: b.len(), got: a.len() });
        }
        for (i, (&bi, &ai)) in b.iter().zip(&a).enumerate() {
            if !(bi > T::zero()) || ai < T::zero() || ai > bi {
                return Err(Error::Precondition(format!("exponent {i}: need 0 <= a <= b and b > 0, got a = {ai:?}, b = {bi:?}")));
            }
        }
        Ok(ExponentPair { b, a })
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// Distinct values of `b`, increasing.
    pub fn candidates(&self) -> Vec<T> {
        let mut v = self.b.clone();
        v.sort_by(|x, y| x.partial_cmp(y).expect("finite exponents"));
        v.dedup();
        v
    }
}

/// The bracketed expression at a given `A > 0`.
pub fn mtp_value_at<T: Scalar>(e: &ExponentPair<T>, big_a: T) -> T {
    let mut total = T::zero();
    for (&bj, &aj) in e.b.iter().zip(&e.a) {
        total = total
            + if aj >= big_a {
                T::one()
            } else if bj <= big_a {
                T::one() - (bj - aj) / big_a
            } else {
                aj / big_a
            };
    }
    total
}

/// Minimum of [`mtp_value_at`] over the distinct `b`-values.
pub fn mtp_lower_bound<T: Scalar>(e: &ExponentPair<T>) -> T {
    e.candidates()
        .into_iter()
        .map(|a| mtp_value_at(e, a))
        .reduce(|x, y| if y < x { y } else { x })
        .expect("nonempty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabBranch {
    /// `a₁ + (n−1)a₂ + 1/2`.
    Sheets,
    /// `n − 1 + 2a₁`.
    Thin,
}

/// `min{a₁ + (n−1)a₂ + 1/2, n − 1 + 2a₁}` for slabs with exponents
/// `b = (1/2, 1, …, 1)`; ties report [`SlabBranch::Sheets`].
pub fn slab_dim_bound<T: Scalar>(n: u32, a1: T, a2: T) -> Result<(T, SlabBranch)> {
    let h = half::<T>();
    if n < 1 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if a2 < h || a2 > T::one() || a1 < T::zero() || a1 > h {
        return Err(Error::Precondition(format!("need 0 <= a1 <= 1/2 <= a2 <= 1, got a1 = {a1:?}, a2 = {a2:?}")));
    }
    let nm1 = (1..n).fold(T::zero(), |acc, _| acc + T::one());
    let sheets = a1 + nm1 * a2 + h;
    let thin = nm1 + a1 + a1;
    Ok(if thin < sheets { (thin, SlabBranch::Thin) } else { (sheets, SlabBranch::Sheets) })
}

/// The exponent pair behind [`slab_dim_bound`].
pub fn slab_exponents<T: Scalar>(n: u32, a1: T, a2: T) -> Result<ExponentPair<T>> {
    let mut b = vec![T::one(); n as usize];
    b[0] = half();
    let mut a = vec![a2; n as usize];
    a[0] = a1;
    ExponentPair::new(b, a)
}

/// Switch line `a₁ = (n−1)a₂ − (n − 3/2)` between the two branches.
pub fn slab_switch_a1(n: u32, a2: f64) -> f64 {
    let n = n as f64;
    (n - 1.0) * a2 - (n - 1.5)
}

/// `dim S_τ = 2/τ` for `τ ≥ 2`.
pub fn jarnik_dim(tau: f64) -> Result<f64> {
    if !(tau >= 2.0) {
        return Err(Error::Precondition(format!("tau = {tau} must be at least 2")));
    }
    Ok(2.0 / tau)
}

/// The same value obtained by dilating `B(p/q, q^{−τ})` to `B(p/q, q^{−2})`,
/// whose limsup is all of `ℝ` by Dirichlet's theorem.
pub fn jarnik_via_mtp(tau: f64) -> Result<f64> {
    jarnik_dim(tau)?;
    Ok(mtp_lower_bound(&ExponentPair::new(vec![tau], vec![2.0])?))
}
