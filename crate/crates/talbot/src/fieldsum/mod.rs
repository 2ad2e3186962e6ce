//! Complete exponential sums over prime fields.
//!
//! The central object is
//! `Š(p₁, p′) = Σ_{r ∈ 𝔽_q^d} e((p′·r + p₁ W_k(r))/q)`, with `e(x) = exp(2πix)`.
//! All phases are looked up in a table of the `q`-th roots of unity and
//! reductions use a fixed pairwise tree, so values do not depend on the number
//! of worker threads.

mod blocksum;
mod poly;

pub use blocksum::{
    block_sum_verify, BlockSumReport, FnWeight, GaussianWeight, LatticeWeight, OddBumpWeight,
    SplineWeight,
};
pub use poly::IntPoly;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Default threshold constant `c1` in the definition of `G(q)`.
pub const DEFAULT_C1: f64 = 0.1;

/// Default ceiling on elementary operations for table construction.
pub const DEFAULT_BUDGET: f64 = 1e10;

/// The `q`-th roots of unity `e(j/q)`, with `j = 0` stored as exactly `1`.
#[derive(Clone, Debug)]
pub struct RootTable {
    q: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(q: u64) -> Self {
        let qi = q as usize;
        let mut roots = vec![Complex64::new(1.0, 0.0); qi];
        for j in 1..qi {
            // Fold the argument into [0, 1/2] so conjugate pairs are exact mirrors.
            if 2 * j <= qi {
                let theta = std::f64::consts::TAU * (j as f64 / q as f64);
                roots[j] = Complex64::new(theta.cos(), theta.sin());
            } else {
                roots[j] = roots[qi - j].conj();
            }
        }
        RootTable { q, roots }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn get(&self, j: u64) -> Complex64 {
        self.roots[(j % self.q) as usize]
    }

    /// `e(j/q)` for `j < q`.
    #[inline]
    pub(crate) fn at(&self, j: u64) -> Complex64 {
        self.roots[j as usize]
    }
}

/// Pairwise sum of `f(i)` over `i ∈ [lo, hi)` with a fixed split pattern.
pub fn pairwise_sum<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, f: &F) -> Complex64 {
    const LEAF: usize = 16;
    if hi - lo <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f)
    }
}

/// Real pairwise sum over a slice.
pub fn pairwise_sum_f64(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum_f64(a) + pairwise_sum_f64(b)
    }
}

/// Decodes a flat index into base-`q` digits, most significant first.
pub(crate) fn digits(mut idx: usize, q: u64, d: usize, out: &mut [u64]) {
    for slot in out[..d].iter_mut().rev() {
        *slot = idx as u64 % q;
        idx /= q as usize;
    }
}

/// `a·b mod q` for reduced `a, b < q`, in 64-bit arithmetic when `q < 2³²`.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    if q <= u32::MAX as u64 {
        a * b % q
    } else {
        ((a as u128 * b as u128) % q as u128) as u64
    }
}

/// `a + b mod q` for reduced `a, b < q`.
#[inline]
pub(crate) fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a.wrapping_add(b);
    if s >= q || s < a {
        s.wrapping_sub(q)
    } else {
        s
    }
}

pub(crate) fn encode(p: &[u64], q: u64) -> usize {
    p.iter().fold(0usize, |acc, &x| acc * q as usize + (x % q) as usize)
}

fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// Values `W(r) mod q` for every `r ∈ 𝔽_q^d` in lexicographic order.
fn poly_values(w: &IntPoly, q: u64) -> Vec<u64> {
    let d = w.num_vars();
    let total = (q as usize).pow(d as u32);
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut r = vec![0u64; d];
            digits(idx, q, d, &mut r);
            w.eval_residues(&r, q)
        })
        .collect()
}

/// `Š(p)` by direct summation over `𝔽_q^d`.
///
/// `p = (p₁, p′)` has length `d + 1` where `d` is the number of variables of
/// `w_k`. Entries may be any integers; they are reduced mod `q`.
pub fn exp_sum(w_k: &IntPoly, p: &[i64], q: u64) -> Result<Complex64> {
    check_prime(q)?;
    let d = w_k.num_vars();
    if p.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, got: p.len() });
    }
    let roots = RootTable::new(q);
    let pr: Vec<u64> = p.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
    let total = (q as usize).pow(d as u32);
    let term = |idx: usize| {
        let mut r = [0u64; 16];
        digits(idx, q, d, &mut r);
        let mut ph = mul_mod(pr[0], w_k.eval_residues(&r[..d], q), q);
        for i in 0..d {
            ph = add_mod(ph, mul_mod(pr[i + 1], r[i], q), q);
        }
        roots.get(ph)
    };
    if d > 16 {
        return Err(Error::Precondition("at most 16 summation variables are supported".into()));
    }
    Ok(pairwise_sum(0, total, &term))
}

/// All values of `Š` for one `(W_k, q)`.
#[derive(Clone, Debug)]
pub struct SumTable {
    pub q: u64,
    pub dim: usize,
    pub poly: IntPoly,
    pub c1: f64,
    /// Indexed by `encode((p₁, p′))`, `p₁` most significant.
    pub values: Vec<Complex64>,
}

impl SumTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at `p = (p₁, p′)`, entries reduced mod `q`.
    pub fn get(&self, p: &[i64]) -> Complex64 {
        let pr: Vec<u64> = p.iter().map(|&v| v.rem_euclid(self.q as i64) as u64).collect();
        self.values[encode(&pr, self.q)]
    }

    /// Decodes a flat index into `p = (p₁, p′)`.
    pub fn point(&self, idx: usize) -> Vec<u64> {
        let mut p = vec![0; self.dim + 1];
        digits(idx, self.q, self.dim + 1, &mut p);
        p
    }
}

/// Estimated elementary operations for [`build_sum_table`].
pub fn table_cost(w_k: &IntPoly, q: u64) -> f64 {
    let d = w_k.num_vars() as i32;
    let rows = if w_k.is_homogeneous() && w_k.degree() > 0 {
        gcd(w_k.degree() as u64, q - 1) as f64
    } else {
        q as f64
    };
    rows * (q as f64).powi(2 * d)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// Builds the complete table of `Š(p)` over `p ∈ 𝔽_q^{d+1}`.
///
/// For homogeneous `W_k` of degree `k`, the substitution `r ↦ λ⁻¹r` gives
/// `Š(aλ^k, p′) = Š(a, λ⁻¹p′)`, so only one row per coset of `(𝔽_q^*)^k` is
/// summed directly and the other rows are permutations of it. Non-homogeneous
/// input falls back to one direct row per `p₁`. The cost estimate of the chosen
/// route is compared with `budget` unless `force` is set.
pub fn build_sum_table(w_k: &IntPoly, q: u64, c1: f64, budget: f64, force: bool) -> Result<SumTable> {
    check_prime(q)?;
    let cost = table_cost(w_k, q);
    if !force && cost > budget {
        return Err(Error::Budget { estimate: cost, limit: budget });
    }
    let d = w_k.num_vars();
    let qd = (q as usize).pow(d as u32);
    let roots = RootTable::new(q);
    let wv = poly_values(w_k, q);

    let row = |a: u64| -> Vec<Complex64> {
        let aw: Vec<u64> = wv.iter().map(|&v| mul_mod(a, v, q)).collect();
        (0..qd)
            .into_par_iter()
            .map(|pidx| {
                let mut pp = [0u64; 16];
                digits(pidx, q, d, &mut pp);
                let term = |ridx: usize| {
                    let mut ph = aw[ridx];
                    if d == 1 {
                        ph = add_mod(ph, mul_mod(pp[0], ridx as u64, q), q);
                    } else {
                        let mut r = [0u64; 16];
                        digits(ridx, q, d, &mut r);
                        for i in 0..d {
                            ph = add_mod(ph, mul_mod(pp[i], r[i], q), q);
                        }
                    }
                    roots.at(ph)
                };
                pairwise_sum(0, qd, &term)
            })
            .collect()
    };

    let mut values = vec![Complex64::new(0.0, 0.0); qd * q as usize];
    // p₁ = 0: only p′ = 0 survives, with value q^d.
    values[0] = Complex64::new(qd as f64, 0.0);

    let homogeneous = w_k.is_homogeneous() && w_k.degree() > 0;
    if homogeneous {
        let k = w_k.degree() as u64;
        let mut assigned = vec![false; q as usize];
        for a in 1..q {
            if assigned[a as usize] {
                continue;
            }
            let base = row(a);
            for lambda in 1..q {
                let p1 = (a * pow_mod(lambda, k, q)) % q;
                if assigned[p1 as usize] {
                    continue;
                }
                assigned[p1 as usize] = true;
                let inv = pow_mod(lambda, q - 2, q);
                let dst = &mut values[p1 as usize * qd..(p1 as usize + 1) * qd];
                dst.par_iter_mut().enumerate().for_each(|(pidx, slot)| {
                    if d == 1 {
                        *slot = base[mul_mod(pidx as u64, inv, q) as usize];
                        return;
                    }
                    let mut pp = [0u64; 16];
                    digits(pidx, q, d, &mut pp);
                    for x in pp[..d].iter_mut() {
                        *x = *x * inv % q;
                    }
                    *slot = base[encode(&pp[..d], q)];
                });
            }
        }
    } else {
        for a in 1..q {
            let base = row(a);
            values[a as usize * qd..(a as usize + 1) * qd].copy_from_slice(&base);
        }
    }
    Ok(SumTable { q, dim: d, poly: w_k.clone(), c1, values })
}

/// Outcome of a Weil-bound check.
#[derive(Clone, Debug)]
pub struct WeilReport {
    /// Largest `|Š(p)| / ((k−1)^d q^{d/2})` over the checked `p` with `p₁ ≢ 0`.
    pub max_ratio: f64,
    /// Points where the ratio exceeds one.
    pub violations: Vec<Vec<u64>>,
    pub checked: usize,
}

/// The Weil bound `(k−1)^d q^{d/2}`.
pub fn weil_bound(k: u32, d: usize, q: u64) -> f64 {
    ((k - 1) as f64).powi(d as i32) * (q as f64).powf(d as f64 / 2.0)
}

fn weil_guard(q: u64, k: u32) -> Result<()> {
    if (k as u64).is_multiple_of(q) {
        return Err(Error::CharacteristicDividesDegree { q, k });
    }
    Ok(())
}

/// Checks `|Š(p)| ≤ (k−1)^d q^{d/2}` over every `p` with `p₁ ≢ 0` in the table.
///
/// Nonsingularity of the gradient is the caller's responsibility (see
/// [`grad_nonsingular_check`]).
pub fn weil_verify(table: &SumTable, k: u32) -> Result<WeilReport> {
    weil_guard(table.q, k)?;
    let bound = weil_bound(k, table.dim, table.q);
    let qd = (table.q as usize).pow(table.dim as u32);
    let tol = 1e-9;
    let mut max_ratio = 0.0f64;
    let mut violations = Vec::new();
    for idx in qd..table.values.len() {
        let ratio = table.values[idx].norm() / bound;
        max_ratio = max_ratio.max(ratio);
        if ratio > 1.0 + tol {
            violations.push(table.point(idx));
        }
    }
    Ok(WeilReport { max_ratio, violations, checked: table.values.len() - qd })
}

/// Weil-bound check on an explicit list of frequencies, by direct summation.
pub fn weil_verify_points(w_k: &IntPoly, k: u32, q: u64, points: &[Vec<i64>]) -> Result<WeilReport> {
    check_prime(q)?;
    weil_guard(q, k)?;
    let d = w_k.num_vars();
    if d > 16 {
        return Err(Error::Precondition("at most 16 summation variables are supported".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d + 1) {
        return Err(Error::DimensionMismatch { expected: d + 1, got: p.len() });
    }
    let bound = weil_bound(k, d, q);
    // W is evaluated once per residue and shared by every frequency.
    let wv = poly_values(w_k, q);
    let roots = RootTable::new(q);
    let qd = (q as usize).pow(d as u32);
    let ratios: Vec<Result<(f64, &Vec<i64>)>> = points
        .par_iter()
        .filter(|p| p[0].rem_euclid(q as i64) != 0)
        .map(|p| {
            let pr: Vec<u64> = p.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
            let term = |idx: usize| {
                let mut r = [0u64; 16];
                digits(idx, q, d, &mut r);
                let mut ph = mul_mod(pr[0], wv[idx], q);
                for i in 0..d {
                    ph = add_mod(ph, mul_mod(pr[i + 1], r[i], q), q);
                }
                roots.at(ph)
            };
            Ok((pairwise_sum(0, qd, &term).norm() / bound, p))
        })
        .collect();
    let mut max_ratio = 0.0f64;
    let mut violations = Vec::new();
    let mut checked = 0;
    for r in ratios {
        let (ratio, p) = r?;
        checked += 1;
        max_ratio = max_ratio.max(ratio);
        if ratio > 1.0 + 1e-9 {
            violations.push(p.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect());
        }
    }
    Ok(WeilReport { max_ratio, violations, checked })
}

/// Relative deviation of `Σ_p |Š(p)|²` from `q^{2(d+1)−1}`.
pub fn plancherel_verify(table: &SumTable) -> f64 {
    let sq: Vec<f64> = table.values.iter().map(|v| v.norm_sqr()).collect();
    let total = pairwise_sum_f64(&sq);
    let expect = (table.q as f64).powi(2 * (table.dim as i32 + 1) - 1);
    (total - expect).abs() / expect
}

/// The large-sum set `G(q) = {p : |Š(p)| ≥ c1 q^{d/2}}`.
#[derive(Clone, Debug)]
pub struct GqSet {
    pub q: u64,
    pub dim: usize,
    pub c1: f64,
    members: Vec<bool>,
    count: usize,
}

impl GqSet {
    /// Trivial set for `q = 1`: the single residue class is a member.
    pub fn trivial(dim: usize) -> Self {
        GqSet { q: 1, dim, c1: 0.0, members: vec![true], count: 1 }
    }

    pub fn density(&self) -> f64 {
        self.count as f64 / self.members.len() as f64
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        if self.q == 1 {
            return true;
        }
        let pr: Vec<u64> = p.iter().map(|&v| v.rem_euclid(self.q as i64) as u64).collect();
        self.members[encode(&pr, self.q)]
    }

    /// Members as residue vectors `(p₁, p′)` in `[0, q)^{d+1}`.
    pub fn members(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.count);
        for (idx, &m) in self.members.iter().enumerate() {
            if m {
                let mut p = vec![0; self.dim + 1];
                if self.q > 1 {
                    digits(idx, self.q, self.dim + 1, &mut p);
                }
                out.push(p);
            }
        }
        out
    }
}

/// Computes `G(q)` from a complete table using the table's `c1`.
pub fn compute_gq(table: &SumTable) -> GqSet {
    let thr = table.c1 * (table.q as f64).powf(table.dim as f64 / 2.0);
    let members: Vec<bool> = table.values.iter().map(|v| v.norm() >= thr).collect();
    let count = members.iter().filter(|&&m| m).count();
    GqSet { q: table.q, dim: table.dim, c1: table.c1, members, count }
}

/// True iff no `x ∈ 𝔽_q^d ∖ {0}` annihilates every partial derivative of `w_k`.
///
/// This scans `𝔽_q` only; singular points defined over an extension field are
/// not detected.
pub fn grad_nonsingular_check(w_k: &IntPoly, q: u64) -> Result<bool> {
    check_prime(q)?;
    if !w_k.is_homogeneous() {
        return Err(Error::InvalidPoly("gradient check requires a homogeneous polynomial".into()));
    }
    let d = w_k.num_vars();
    let partials: Vec<IntPoly> = (0..d).map(|i| w_k.partial(i)).collect();
    let total = (q as usize).pow(d as u32);
    let singular = (1..total).into_par_iter().any(|idx| {
        let mut r = vec![0u64; d];
        digits(idx, q, d, &mut r);
        partials.iter().all(|g| g.eval_residues(&r, q) == 0)
    });
    Ok(!singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> IntPoly {
        IntPoly::parse(s, None).unwrap()
    }

    #[test]
    fn roots_are_symmetric_and_exact_at_zero() {
        let t = RootTable::new(7);
        assert_eq!(t.get(0), Complex64::new(1.0, 0.0));
        for j in 1..7 {
            assert_eq!(t.get(j), t.get(7 - j).conj());
            assert!((t.get(j).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_sum_examples() {
        let s = exp_sum(&poly("x^2"), &[1, 0], 5).unwrap();
        assert!((s.norm() - 5f64.sqrt()).abs() < 1e-12);
        let s = exp_sum(&poly("x^3"), &[1, 0], 7).unwrap();
        let expect = 1.0 + 6.0 * (std::f64::consts::TAU / 7.0).cos();
        assert!((s.re - expect).abs() < 1e-12 && s.im.abs() < 1e-12);
        let s = exp_sum(&poly("x^3+y^3"), &[0, 0, 0], 11).unwrap();
        assert_eq!(s, Complex64::new(121.0, 0.0));
        assert!(matches!(exp_sum(&poly("x^2"), &[1, 0], 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn table_matches_direct_sums() {
        for (src, q) in [("x^3", 7u64), ("x^3+y^3", 7), ("x^4+y^4", 5), ("x^2+x", 5), ("x*y", 5)] {
            let w = poly(src);
            let t = build_sum_table(&w, q, 0.1, DEFAULT_BUDGET, false).unwrap();
            assert_eq!(t.len(), (q as usize).pow(w.num_vars() as u32 + 1));
            for idx in 0..t.len() {
                let p: Vec<i64> = t.point(idx).iter().map(|&v| v as i64).collect();
                let direct = exp_sum(&w, &p, q).unwrap();
                assert!((direct - t.values[idx]).norm() < 1e-9, "{src} q={q} p={p:?}");
            }
        }
    }

    #[test]
    fn table_origin_and_budget() {
        let t = build_sum_table(&poly("x^3"), 7, 0.1, DEFAULT_BUDGET, false).unwrap();
        assert_eq!(t.values[0], Complex64::new(7.0, 0.0));
        let err = build_sum_table(&poly("x^3+y^3"), 101, 0.1, 1e6, false).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn weil_examples() {
        let t = build_sum_table(&poly("x^2"), 5, 0.1, DEFAULT_BUDGET, false).unwrap();
        let r = weil_verify(&t, 2).unwrap();
        assert!((r.max_ratio - 1.0).abs() < 1e-12 && r.violations.is_empty());
        let t = build_sum_table(&poly("x^3"), 7, 0.1, DEFAULT_BUDGET, false).unwrap();
        let r = weil_verify(&t, 3).unwrap();
        assert!(r.max_ratio <= 1.0 && r.violations.is_empty());
        let t = build_sum_table(&poly("x^3"), 3, 0.1, DEFAULT_BUDGET, false).unwrap();
        assert!(matches!(weil_verify(&t, 3), Err(Error::CharacteristicDividesDegree { .. })));
        let t = build_sum_table(&poly("x^3+y^3"), 13, 0.1, DEFAULT_BUDGET, false).unwrap();
        let r = weil_verify(&t, 3).unwrap();
        assert!(r.max_ratio * 52.0 <= 52.0 + 1e-9);
    }

    #[test]
    fn sampled_weil_matches_direct_sums() {
        let w = poly("x^4+y^4");
        let pts = vec![vec![1, 2, 3], vec![5, 0, 0], vec![0, 1, 1], vec![12, -4, 7]];
        let r = weil_verify_points(&w, 4, 13, &pts).unwrap();
        assert_eq!(r.checked, 3);
        let direct = pts
            .iter()
            .filter(|p| p[0] % 13 != 0)
            .map(|p| exp_sum(&w, p, 13).unwrap().norm() / weil_bound(4, 2, 13))
            .fold(0.0, f64::max);
        assert!((r.max_ratio - direct).abs() < 1e-12);
        assert!(weil_verify_points(&w, 4, 13, &[vec![1, 2]]).is_err());
    }

    #[test]
    fn plancherel_examples() {
        let t = build_sum_table(&poly("x^2"), 5, 0.1, DEFAULT_BUDGET, false).unwrap();
        assert!(plancherel_verify(&t) <= 1e-12);
        let t = build_sum_table(&poly("x^3"), 7, 0.1, DEFAULT_BUDGET, false).unwrap();
        assert!(plancherel_verify(&t) <= 1e-12);
        let t = build_sum_table(&poly("x^3+y^3"), 11, 0.1, DEFAULT_BUDGET, false).unwrap();
        assert!(plancherel_verify(&t) <= 1e-9);
    }

    #[test]
    fn gq_examples() {
        let t = build_sum_table(&poly("x^2"), 5, 0.1, DEFAULT_BUDGET, false).unwrap();
        let g = compute_gq(&t);
        for p1 in 1..5 {
            for a in 0..5 {
                assert!(g.contains(&[p1, a]));
            }
        }
        let mut t0 = t.clone();
        t0.c1 = 0.0;
        assert_eq!(compute_gq(&t0).density(), 1.0);
    }

    #[test]
    fn gradient_examples() {
        assert!(grad_nonsingular_check(&poly("x^2+y^2"), 5).unwrap());
        assert!(!grad_nonsingular_check(&poly("x^2+y^2"), 2).unwrap());
        assert!(grad_nonsingular_check(&poly("x*y"), 5).unwrap());
        assert!(grad_nonsingular_check(&poly("x^2+y"), 5).is_err());
    }
}
