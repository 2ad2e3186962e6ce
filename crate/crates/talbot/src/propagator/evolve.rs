//! Factored evaluation of `T_t f_R = T_t g · T_t h` for power symbols.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::datum::{datum_norm, CombDatum};
use super::{cis, cis_product, poly_diff};
use crate::error::{Error, Result};
use crate::fieldsum::{block_sum_verify, pairwise_sum, BlockSumReport, FnWeight, IntPoly, RootTable};
use crate::primes::is_prime;
use crate::quad::{gauss_legendre, integrate};

const AXIS_TOL: f64 = 1e-11;
const GL_NODES: usize = 10;

fn gl() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(GL_NODES))
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `T_t g(x₁)` for `|t| < R^{−(k−1)}`.
pub fn evolve_axis1(datum: &CombDatum, x1: f64, t: f64) -> Result<Complex64> {
    let limit = datum.r().powi(-(datum.k() as i32 - 1));
    if !(t.abs() < limit) {
        return Err(Error::Precondition(format!("|t| = {:e} is not below R^-(k-1) = {limit:e}", t.abs())));
    }
    Ok(evolve_axis1_unchecked(datum, x1, t))
}

/// `T_t g(x₁)` without the time-window check.
///
/// Computes
/// `e(x₁R + tR^k) ∫ φ̂₁(ξ) e(R^{1/2}ξ(x₁ + tkR^{k−1}) + t Σ_{j≥2} C(k,j) ξ^j R^{k−j/2}) dξ`
/// with panels refined to the oscillation of the phase.
pub fn evolve_axis1_unchecked(datum: &CombDatum, x1: f64, t: f64) -> Complex64 {
    let k = datum.k();
    let r = datum.r();
    let phi = &datum.cutoffs().phi1;
    let c = phi.c();
    let lin = r.sqrt() * (x1 + t * k as f64 * r.powi(k as i32 - 1));
    let higher: Vec<f64> = (2..=k).map(|j| t * binom(k, j) * r.powf(k as f64 - j as f64 / 2.0)).collect();
    let spread = lin.abs() * 2.0 * c + higher.iter().enumerate().map(|(i, a)| a.abs() * c.powi(i as i32 + 2)).sum::<f64>();
    let panels = phi.order() * (spread.ceil() as usize).max(1);
    let f = |xi: f64| {
        let mut ph = 0.0;
        for a in higher.iter().rev() {
            ph = (ph + a) * xi;
        }
        ph = (ph * xi) + lin * xi;
        cis(ph) * phi.hat(xi)
    };
    let (v, _) = integrate(&f, -c, c, AXIS_TOL, panels);
    let carrier = cis_product(x1, r) * cis_product(t, r.powi(k as i32));
    carrier * v
}

/// Quadrature nodes for the inner integrals over `[−c, c]^{n−1}`: per axis,
/// knot-aligned Gauss–Legendre panels with `φ̂₂` folded into the weights.
struct InnerRule {
    nodes: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
}

impl InnerRule {
    fn new(datum: &CombDatum, xp: &[f64], t: f64) -> Self {
        let phi = &datum.cutoffs().phi2;
        let c = phi.c();
        let (gx, gw) = gl();
        // Largest |∂ᵢW| over the lattice support bounds the phase slope.
        let reach = datum.d() * datum.lattice_radius() as f64 + c;
        let mut nodes = Vec::with_capacity(xp.len());
        let mut weights = Vec::with_capacity(xp.len());
        for (i, &x) in xp.iter().enumerate() {
            let grad: f64 = datum
                .w()
                .terms()
                .iter()
                .filter(|(e, _)| e[i] > 0)
                .map(|(e, co)| (co.abs() * e[i] as i64) as f64 * reach.powi(e.iter().sum::<u32>() as i32 - 1))
                .sum();
            let cycles = 2.0 * c * (x.abs() + t.abs() * grad);
            let panels = phi.order() * (cycles.ceil() as usize).max(1);
            let h = 2.0 * c / panels as f64;
            let mut xs = Vec::with_capacity(panels * GL_NODES);
            let mut ws = Vec::with_capacity(panels * GL_NODES);
            for pnl in 0..panels {
                let mid = -c + h * (pnl as f64 + 0.5);
                for (z, w) in gx.iter().zip(gw) {
                    let xi = mid + 0.5 * h * z;
                    xs.push(xi);
                    ws.push(0.5 * h * w * phi.hat(xi));
                }
            }
            nodes.push(xs);
            weights.push(ws);
        }
        InnerRule { nodes, weights }
    }

    /// `∫ φ̂₂(ξ) e(x′·ξ + t(W(a + ξ) − W(a))) dξ`.
    fn integral(&self, w: &IntPoly, a: &[f64], xp: &[f64], t: f64) -> Complex64 {
        let dim = a.len();
        let counts: Vec<usize> = self.nodes.iter().map(Vec::len).collect();
        let total: usize = counts.iter().product();
        let mut xi = vec![0.0; dim];
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..total {
            let mut rest = idx;
            let mut wt = 1.0;
            let mut lin = 0.0;
            for ax in (0..dim).rev() {
                let j = rest % counts[ax];
                rest /= counts[ax];
                xi[ax] = self.nodes[ax][j];
                wt *= self.weights[ax][j];
                lin += xp[ax] * xi[ax];
            }
            if wt == 0.0 {
                continue;
            }
            acc += cis(lin + t * poly_diff(w, a, &xi)) * wt;
        }
        acc
    }
}

/// Lattice sum `Σ_{m′} ψ(Dm′/R) outer(m′) I(m′)`, where `I(m′)` is the inner
/// integral times the phase `e(t(W − W_k)(Dm′))` of the lower-order terms.
fn lattice_sum<F>(datum: &CombDatum, xp: &[f64], t: f64, outer: F) -> Complex64
where
    F: Fn(&[i64]) -> Complex64 + Sync,
{
    let dim = xp.len();
    let l = datum.lattice_radius();
    let side = (2 * l + 1) as usize;
    let total = side.pow(dim as u32);
    let rule = InnerRule::new(datum, xp, t);
    let lower = datum.w().add(&datum.w_k().scale(-1)).expect("same variables");
    let terms: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut m = vec![0i64; dim];
            let mut rest = idx;
            for slot in m.iter_mut().rev() {
                *slot = (rest % side) as i64 - l;
                rest /= side;
            }
            let psi: f64 = m.iter().map(|&v| datum.psi(v)).product();
            if psi == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let a: Vec<f64> = m.iter().map(|&v| datum.d() * v as f64).collect();
            let mut v = rule.integral(datum.w(), &a, xp, t) * outer(&m) * psi;
            if !lower.is_zero() {
                v *= cis_product(t, lower.eval_f64(&a));
            }
            v
        })
        .collect();
    pairwise_sum(0, terms.len(), &|i| terms[i])
}

/// `T_t h(x′)` with the outer phases `e(x′·Dm′ + tW_k(Dm′))` evaluated in
/// floating point.
pub fn evolve_lattice(datum: &CombDatum, xp: &[f64], t: f64) -> Result<Complex64> {
    let nm1 = datum.n() as usize - 1;
    if xp.len() != nm1 {
        return Err(Error::DimensionMismatch { expected: nm1, got: xp.len() });
    }
    let d = datum.d();
    let w_k = datum.w_k();
    Ok(lattice_sum(datum, xp, t, |m| {
        let a: Vec<f64> = m.iter().map(|&v| d * v as f64).collect();
        let mut z = cis_product(t, w_k.eval_f64(&a));
        for (x, ai) in xp.iter().zip(&a) {
            z *= cis_product(*x, *ai);
        }
        z
    }))
}

fn check_modulus(q: u64) -> Result<()> {
    if q != 1 && !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(())
}

/// Time and lattice coordinate of the rational point `(p, q)`:
/// `t = p₁/(D^k q)`, `x′ = p′/(Dq) + ε`.
fn rational_point(datum: &CombDatum, p: &[i64], q: u64, eps: &[f64]) -> (f64, Vec<f64>) {
    let d = datum.d();
    let qf = q as f64;
    let t = p[0] as f64 / (d.powi(datum.k() as i32) * qf);
    let xp = p[1..].iter().zip(eps).map(|(&pi, &e)| pi as f64 / (d * qf) + e).collect();
    (t, xp)
}

/// `T_t h(x′)` at `t = p₁/(D^k q)`, `x′ = p′/(Dq) + ε`, with the outer phase
/// reduced exactly to `e((p′·m′ + p₁W_k(m′))/q) e(ε·Dm′)`.
pub fn evolve_lattice_rational(datum: &CombDatum, p: &[i64], q: u64, eps: &[f64]) -> Result<Complex64> {
    let n = datum.n() as usize;
    if p.len() != n || eps.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n, got: p.len().min(eps.len() + 1) });
    }
    check_modulus(q)?;
    let (t, xp) = rational_point(datum, p, q, eps);
    let roots = RootTable::new(q);
    let w_k = datum.w_k();
    let d = datum.d();
    Ok(lattice_sum(datum, &xp, t, |m| {
        let mut z = Complex64::new(1.0, 0.0);
        if q > 1 {
            let r: Vec<u64> = m.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
            let mut ph = p[0].rem_euclid(q as i64) as u64 * w_k.eval_residues(&r, q) % q;
            for (pi, ri) in p[1..].iter().zip(&r) {
                ph = (ph + pi.rem_euclid(q as i64) as u64 * ri) % q;
            }
            z = roots.get(ph);
        }
        for (e, &mi) in eps.iter().zip(m) {
            z *= cis_product(*e, d * mi as f64);
        }
        z
    }))
}

/// Block-sum view of [`evolve_lattice_rational`]: the weight
/// `ζ(m′) = ψ(Dm′/R) e(ε·Dm′) I(m′)` against `f(m′) = p′·m′ + p₁W_k(m′)`.
///
/// Returns the report and the direct lattice value; `report.lhs` and the
/// direct value are two evaluations of the same sum.
pub fn lattice_block_check(datum: &CombDatum, p: &[i64], q: u64, eps: &[f64], n_order: u32) -> Result<(BlockSumReport, Complex64)> {
    let direct = evolve_lattice_rational(datum, p, q, eps)?;
    if q < 2 {
        return Err(Error::Precondition("the block-sum comparison needs a prime modulus".into()));
    }
    let (t, xp) = rational_point(datum, p, q, eps);
    let rule = InnerRule::new(datum, &xp, t);
    let lower = datum.w().add(&datum.w_k().scale(-1)).expect("same variables");
    let d = datum.d();
    let zeta = FnWeight {
        dim: datum.n() as usize - 1,
        l: datum.lattice_radius() as f64,
        f: |m: &[i64]| {
            let psi: f64 = m.iter().map(|&v| datum.psi(v)).product();
            if psi == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let a: Vec<f64> = m.iter().map(|&v| d * v as f64).collect();
            let mut v = rule.integral(datum.w(), &a, &xp, t) * psi;
            if !lower.is_zero() {
                v *= cis_product(t, lower.eval_f64(&a));
            }
            for (e, ai) in eps.iter().zip(&a) {
                v *= cis_product(*e, *ai);
            }
            v
        },
    };
    let f = datum.w_k().scale(p[0]).add(&IntPoly::linear(&p[1..]))?;
    let report = block_sum_verify(&zeta, &f, q, n_order)?;
    Ok((report, direct))
}

/// Where a sample came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMeta {
    pub r: f64,
    pub d: f64,
    pub big_q: f64,
    pub q: u64,
    /// Slab label when the points are tied to one `E_{p,q,R}`.
    pub p: Option<Vec<i64>>,
}

/// Evaluated points `(x, t)` and their amplitudes.
#[derive(Clone, Debug)]
pub struct GridSample {
    pub points: Vec<(Vec<f64>, f64)>,
    pub values: Vec<Complex64>,
    pub meta: SampleMeta,
}

/// `T_t f_R(x) = T_t g(x₁) · T_t h(x′)` at each point, in parallel.
pub fn evolve_at(datum: &CombDatum, points: &[(Vec<f64>, f64)]) -> Result<GridSample> {
    let n = datum.n() as usize;
    let values = points
        .par_iter()
        .map(|(x, t)| {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: x.len() });
            }
            Ok(evolve_axis1(datum, x[0], *t)? * evolve_lattice(datum, &x[1..], *t)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSample {
        points: points.to_vec(),
        values,
        meta: SampleMeta { r: datum.r(), d: datum.d(), big_q: datum.big_q(), q: datum.q(), p: None },
    })
}

/// One evaluation near the revival point of a slab.
#[derive(Clone, Debug)]
pub struct SlabEval {
    pub x: Vec<f64>,
    pub t: f64,
    pub value: Complex64,
    /// `|T_t f_R(x)| / ‖f_R‖₂`.
    pub normalized: f64,
    /// `normalized / (R^{1/4}(R/(DQ))^{(n−1)/2})`.
    pub ratio: f64,
}

/// Evaluates at `t = p₁/(D^k q)` and `x = c_{p,q} + offset`, where the slab
/// center is `c_{p,q} = (−kR^{k−1}p₁/(D^k q), p′/(Dq))`. At `offset = 0` the
/// phase `x₁ + kR^{k−1}t` of the first factor vanishes.
pub fn evolve_slab_point(datum: &CombDatum, p: &[i64], q: u64, offset: &[f64]) -> Result<SlabEval> {
    let n = datum.n() as usize;
    if p.len() != n || offset.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len().min(offset.len()) });
    }
    check_modulus(q)?;
    let k = datum.k() as i32;
    let (t, xp) = rational_point(datum, p, q, &offset[1..]);
    let x1 = -(k as f64) * datum.r().powi(k - 1) * t + offset[0];
    let value = evolve_axis1(datum, x1, t)? * evolve_lattice_rational(datum, p, q, &offset[1..])?;
    let normalized = value.norm() / datum_norm(datum);
    let mut x = vec![x1];
    x.extend(xp);
    Ok(SlabEval { x, t, value, normalized, ratio: normalized / datum.predicted_ratio() })
}
