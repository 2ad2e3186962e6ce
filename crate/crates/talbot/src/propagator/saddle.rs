//! Data for the saddle symbol `ξ₁² + ⋯ + ξ_m² − ξ_{m+1}² − ⋯ − ξ_n²`.
//!
//! Internally the frequencies are rotated pairwise, `ξ = Mη` with
//! `ξᵢ = (ηᵢ + η_{m+i})/2`, `ξ_{m+i} = (ηᵢ − η_{m+i})/2`, which turns the symbol
//! into `η₁η_{m+1} + ⋯ + η_mη_{2m} − |η‴|²`. A datum `ĝ` built in the rotated
//! variables corresponds to `f̂(ξ) = ĝ(M⁻¹ξ)` in the original ones, and
//! `T_t f(x) = |det M| T̃_t g(Mx)` since `M` is symmetric.
//!
//! Every datum is a tensor product of one-dimensional factors (shifted,
//! dilated or lattice-summed copies of `φ̂`), so `T̃_t g(y)` is a product over
//! the coupled pairs `(ηᵢ, η_{m+i})` and the free axes `η‴`, each reduced to a
//! one-dimensional quadrature with the identity `∫ φ̂(η) e(Aη) dη = φ(A)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::cutoff::{CutoffProfile, LatticeBump};
use super::evolve::{GridSample, SampleMeta};
use super::{cis, cis_product};
use crate::error::{Error, Result};
use crate::fieldsum::{exp_sum, pairwise_sum, IntPoly, RootTable};
use crate::primes::{is_prime, largest_prime_in_dyadic};
use crate::quad::integrate;

const TOL: f64 = 1e-11;

/// Which construction the datum follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleKind {
    /// Lattice in `η″`, dilation in `η_{m+1}`: amplitude `R^{1/2}(R/D)^{(m−1)/2}`.
    Sharp,
    /// Dilations in `η_{m+1}, η″`, lattice in `η‴` up to `R/D`: amplitude
    /// `R^{m/2}(R/(DQ))^{(n−2m)/2}` at rational points.
    Talbot,
    /// `n = 2m + 1`; lattice in `η_n` only up to `R^{1/2}/D`: amplitude
    /// `R^{m/2}(R^{1/2}/D)^{1/2}`.
    NoTalbot,
}

impl SaddleKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sharp" => Ok(SaddleKind::Sharp),
            "talbot" => Ok(SaddleKind::Talbot),
            "no-talbot" => Ok(SaddleKind::NoTalbot),
            _ => Err(Error::Parse(format!("unknown saddle construction '{s}'"))),
        }
    }
}

/// Scale parameters: `D = R^a` directly, or `(u₁, u₂)` with
/// `Q = R^{2u₂−u₁−1}`, `D = R^{u₁−u₂+1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SaddleParams {
    Exponent(f64),
    U(f64, f64),
}

/// Saddle datum at one scale.
#[derive(Clone, Debug)]
pub struct SaddleDatum {
    n: u32,
    m: u32,
    kind: SaddleKind,
    r: f64,
    d: f64,
    big_q: f64,
    q: u64,
    phi: CutoffProfile,
    psi: LatticeBump,
    /// `R/D` for the sharp and Talbot lattices, `R^{1/2}/D` otherwise.
    lattice_extent: f64,
    lattice_radius: i64,
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Builds the rotated-variable datum of the requested construction.
pub fn build_saddle_datum(
    n: u32,
    m: u32,
    kind: SaddleKind,
    r: f64,
    params: SaddleParams,
    phi: CutoffProfile,
    psi: LatticeBump,
) -> Result<SaddleDatum> {
    if m < 1 || 2 * m > n {
        return Err(Error::Precondition(format!("saddle index m = {m} must satisfy 1 <= m <= n/2 with n = {n}")));
    }
    if !(r >= 2.0) || r.log2().fract() != 0.0 {
        return Err(Error::Precondition(format!("R = {r} must be a power of two, at least 2")));
    }
    let (d, big_q, extent) = match (kind, params) {
        (SaddleKind::Sharp, SaddleParams::Exponent(a)) => {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::Precondition(format!("sharp construction needs 0 <= a <= 1, got {a}")));
            }
            let d = snap(r.powf(a));
            (d, 1.0, snap(r / d))
        }
        (SaddleKind::NoTalbot, SaddleParams::Exponent(a)) => {
            if n != 2 * m + 1 {
                return Err(Error::Precondition(format!("the odd construction needs n = 2m + 1, got n = {n}, m = {m}")));
            }
            if !(0.0..=0.5).contains(&a) {
                return Err(Error::Precondition(format!("odd construction needs 0 <= a <= 1/2, got {a}")));
            }
            let d = snap(r.powf(a));
            (d, 1.0, snap(r.sqrt() / d))
        }
        (SaddleKind::Talbot, SaddleParams::U(u1, u2)) => {
            if 2 * m >= n {
                return Err(Error::Precondition("the Talbot construction needs n > 2m".into()));
            }
            let ok = (0.0..=1.0).contains(&u1)
                && (0.0..=1.0).contains(&u2)
                && 2.0 * u2 - u1 - 1.0 >= -1e-12
                && u2 - u1 <= 0.5 + 1e-12;
            if !ok {
                return Err(Error::OutsideDomain(format!(
                    "(u1, u2) = ({u1}, {u2}) needs 0 <= u <= 1, 2u2 - u1 >= 1 and u2 - u1 <= 1/2"
                )));
            }
            let d = snap(r.powf(u1 - u2 + 1.0));
            let big_q = snap(r.powf(2.0 * u2 - u1 - 1.0));
            (d, big_q, snap(r / d))
        }
        _ => return Err(Error::Precondition(format!("{kind:?} construction does not take {params:?}"))),
    };
    if d <= 2.0 * phi.c() {
        return Err(Error::Precondition(format!("D = {d} must exceed 2c so the lattice translates are disjoint")));
    }
    let q = if big_q < 2.0 { 1 } else { largest_prime_in_dyadic(big_q).unwrap_or(1) };
    let lattice_radius = if extent.fract() == 0.0 { extent as i64 - 1 } else { extent.floor() as i64 }.max(0);
    Ok(SaddleDatum { n, m, kind, r, d, big_q, q, phi, psi, lattice_extent: extent, lattice_radius })
}

impl SaddleDatum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> SaddleKind {
        self.kind
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn big_q(&self) -> f64 {
        self.big_q
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn lattice_radius(&self) -> i64 {
        self.lattice_radius
    }

    fn psi(&self, l: i64) -> f64 {
        self.psi.eval(l as f64 / self.lattice_extent)
    }

    fn psi_moment(&self, j: i32) -> f64 {
        let v: Vec<f64> = (-self.lattice_radius..=self.lattice_radius).map(|l| self.psi(l).powi(j)).collect();
        crate::fieldsum::pairwise_sum_f64(&v)
    }

    /// Number of dilated axes and of lattice axes.
    fn layout(&self) -> (u32, u32) {
        match self.kind {
            SaddleKind::Sharp => (1, self.m - 1),
            SaddleKind::Talbot | SaddleKind::NoTalbot => (self.m, self.n - 2 * self.m),
        }
    }

    /// `‖f‖₂ = |det M|^{1/2} ‖ĝ‖₂` with `|det M| = 2^{−m}`.
    pub fn norm(&self) -> f64 {
        let (dilated, lattice) = self.layout();
        let g2 = self.phi.hat_norm_sq().powi(self.n as i32)
            * self.r.powi(dilated as i32)
            * self.psi_moment(2).powi(lattice as i32);
        (g2 * 0.5f64.powi(self.m as i32)).sqrt()
    }

    /// Predicted size of `|T_t f| / ‖f‖₂` on the evaluation set.
    pub fn predicted(&self) -> f64 {
        let (r, m, n) = (self.r, self.m as f64, self.n as f64);
        match self.kind {
            SaddleKind::Sharp => r.sqrt() * (r / self.d).powf((m - 1.0) / 2.0),
            SaddleKind::Talbot => r.powf(m / 2.0) * (r / (self.d * self.big_q)).powf((n - 2.0 * m) / 2.0),
            SaddleKind::NoTalbot => r.powf(m / 2.0) * (r.sqrt() / self.d).sqrt(),
        }
    }

    /// `y = Mx`.
    pub fn to_rotated(&self, x: &[f64]) -> Vec<f64> {
        let m = self.m as usize;
        let mut y = x.to_vec();
        for i in 0..m {
            y[i] = 0.5 * (x[i] + x[m + i]);
            y[m + i] = 0.5 * (x[i] - x[m + i]);
        }
        y
    }

    /// `x = M⁻¹y = 2My`.
    pub fn from_rotated(&self, y: &[f64]) -> Vec<f64> {
        let m = self.m as usize;
        let mut x = y.to_vec();
        for i in 0..m {
            x[i] = y[i] + y[m + i];
            x[m + i] = y[i] - y[m + i];
        }
        x
    }

    /// `Σ_l ψ(l/λ) e(wDl)`.
    fn lattice_exp(&self, w: f64) -> Complex64 {
        let l = self.lattice_radius;
        let terms: Vec<Complex64> = (-l..=l).map(|j| cis_product(w, self.d * j as f64) * self.psi(j)).collect();
        pairwise_sum(0, terms.len(), &|i| terms[i])
    }

    fn quad<F: Fn(f64) -> Complex64>(&self, f: F, cycles: f64) -> Complex64 {
        let c = self.phi.c();
        let g = |xi: f64| f(xi) * self.phi.hat(xi);
        integrate(&g, -c, c, TOL, self.phi.order() * (cycles.ceil() as usize).max(1)).0
    }

    /// Pair `(η₁, η_{m+1})`: `φ̂(η₁ − R) φ̂(η_{m+1}/R)`.
    fn first_pair(&self, y0: f64, ym: f64, t: f64) -> Complex64 {
        let r = self.r;
        let base = ym + t * r;
        let v = self.quad(|xi| cis(y0 * xi) * self.phi.phys(r * (base + t * xi)), 2.0 * self.phi.c() * y0.abs());
        cis_product(y0, r) * v * r
    }

    /// Pair `(ηᵢ, η_{m+i})`, `i ≥ 2`: `φ̂(ηᵢ)` against a dilated or a
    /// lattice-summed factor.
    fn other_pair(&self, yi: f64, ymi: f64, t: f64) -> Complex64 {
        let cyc = 2.0 * self.phi.c() * yi.abs();
        match self.kind {
            SaddleKind::Sharp => self.quad(
                |xi| {
                    let w = ymi + t * xi;
                    cis(yi * xi) * self.phi.phys(w) * self.lattice_exp(w)
                },
                cyc,
            ),
            _ => self.quad(|xi| cis(yi * xi) * self.phi.phys(self.r * (ymi + t * xi)), cyc) * self.r,
        }
    }

    /// Free axis `ηⱼ`, `j > 2m`, with symbol `−ηⱼ²`.
    fn free_axis(&self, y: f64, t: f64, phase: &(dyn Fn(i64) -> Complex64 + Sync)) -> Complex64 {
        let c = self.phi.c();
        let single = |shift: f64| {
            let a = y - 2.0 * t * shift;
            self.quad(|xi| cis(a * xi - t * xi * xi), 2.0 * c * a.abs() + t.abs() * c * c)
        };
        match self.kind {
            SaddleKind::Sharp => single(0.0),
            _ => {
                let l = self.lattice_radius;
                let terms: Vec<Complex64> = (-l..=l)
                    .into_par_iter()
                    .map(|j| {
                        let w = self.psi(j);
                        if w == 0.0 {
                            return Complex64::new(0.0, 0.0);
                        }
                        phase(j) * single(self.d * j as f64) * w
                    })
                    .collect();
                pairwise_sum(0, terms.len(), &|i| terms[i])
            }
        }
    }

    /// `T̃_t g(y)` in rotated coordinates, with free-axis lattice phases
    /// `e(yⱼDl − tD²l²)` in floating point.
    pub fn evolve_rotated(&self, y: &[f64], t: f64) -> Result<Complex64> {
        self.check_point(y, t)?;
        let d = self.d;
        Ok(self.product(y, t, |j, l| cis_product(y[j], d * l as f64) * cis_product(-t, d * d * (l * l) as f64)))
    }

    fn product<F: Fn(usize, i64) -> Complex64 + Sync>(&self, y: &[f64], t: f64, phase: F) -> Complex64 {
        let m = self.m as usize;
        let mut v = self.first_pair(y[0], y[m], t);
        for i in 1..m {
            v *= self.other_pair(y[i], y[m + i], t);
        }
        for (j, &yj) in y.iter().enumerate().take(self.n as usize).skip(2 * m) {
            v *= self.free_axis(yj, t, &|l| phase(j, l));
        }
        v
    }

    fn check_point(&self, y: &[f64], t: f64) -> Result<()> {
        let n = self.n as usize;
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        if !(0.0..=1.0 / self.r).contains(&t) {
            return Err(Error::Precondition(format!("time t = {t:e} outside [0, 1/R]")));
        }
        Ok(())
    }

    /// Rational evaluation for the Talbot kinds: `t = p_{m+1}/(D²q)`,
    /// `y‴ = p‴/(Dq) + ε`, `y_{m+1} = −Rt`, `y″ = 0`, `y₁ = ⋯ = y_m = 0`.
    /// Lattice phases are the exact residues `(pⱼl − p_{m+1}l²) mod q`.
    pub fn evolve_rational(&self, p: &[i64], q: u64, eps: &[f64]) -> Result<(Vec<f64>, f64, Complex64)> {
        let (y, t) = self.rational_point(p, q, eps)?;
        let m = self.m as usize;
        let roots = RootTable::new(q);
        let d = self.d;
        let v = self.product(&y, t, |j, l| {
            let pj = p[j - 2 * m + 1].rem_euclid(q as i64) as i128;
            let pm = p[0].rem_euclid(q as i64) as i128;
            let li = l as i128;
            let res = (pj * li - pm * li * li).rem_euclid(q as i128) as u64;
            roots.get(res) * cis_product(eps[j - 2 * m], d * l as f64)
        });
        Ok((y, t, v))
    }

    fn rational_point(&self, p: &[i64], q: u64, eps: &[f64]) -> Result<(Vec<f64>, f64)> {
        if self.kind == SaddleKind::Sharp {
            return Err(Error::Precondition("rational points belong to the lattice-in-η‴ constructions".into()));
        }
        let m = self.m as usize;
        let n = self.n as usize;
        let free = n - 2 * m;
        if p.len() != free + 1 || eps.len() != free {
            return Err(Error::DimensionMismatch { expected: free + 1, got: p.len() });
        }
        if q != 1 && !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let qf = q as f64;
        let t = p[0] as f64 / (self.d * self.d * qf);
        let mut y = vec![0.0; n];
        y[m] = -self.r * t;
        for j in 0..free {
            y[2 * m + j] = p[j + 1] as f64 / (self.d * qf) + eps[j];
        }
        self.check_point(&y, t)?;
        Ok((y, t))
    }
}

/// Evaluation points of the construction in original coordinates.
///
/// Talbot kinds: one point per `(p_{m+1}, p‴)` in `params`, at the rational
/// time. Sharp: `y″ = 0`, `y_{m+1} = −Rt` for each listed time `t = p₀/(qR)`.
pub fn saddle_points(datum: &SaddleDatum, labels: &[Vec<i64>], q: u64) -> Result<Vec<(Vec<f64>, f64)>> {
    labels
        .iter()
        .map(|p| match datum.kind {
            SaddleKind::Sharp => {
                let t = p[0] as f64 / (q as f64 * datum.r);
                let mut y = vec![0.0; datum.n as usize];
                y[datum.m as usize] = -datum.r * t;
                datum.check_point(&y, t)?;
                Ok((datum.from_rotated(&y), t))
            }
            _ => {
                let free = (datum.n - 2 * datum.m) as usize;
                let (y, t) = datum.rational_point(p, q, &vec![0.0; free])?;
                Ok((datum.from_rotated(&y), t))
            }
        })
        .collect()
}

/// `T_t f(x)` at user-facing points, in parallel.
pub fn saddle_evolve(datum: &SaddleDatum, points: &[(Vec<f64>, f64)]) -> Result<GridSample> {
    let det = 0.5f64.powi(datum.m as i32);
    let values = points
        .par_iter()
        .map(|(x, t)| {
            if x.len() != datum.n as usize {
                return Err(Error::DimensionMismatch { expected: datum.n as usize, got: x.len() });
            }
            Ok(datum.evolve_rotated(&datum.to_rotated(x), *t)? * det)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSample {
        points: points.to_vec(),
        values,
        meta: SampleMeta { r: datum.r, d: datum.d, big_q: datum.big_q, q: datum.q, p: None },
    })
}

/// Product of the one-dimensional complete sums
/// `Σ_{l ∈ 𝔽_q} e((pⱼl − p_{m+1}l²)/q)` over the free axes, next to the
/// multivariate `Σ_{l ∈ 𝔽_q^{n−2m}} e((p‴·l − p_{m+1}|l|²)/q)` computed by
/// [`exp_sum`] with `W = −|x|²`.
pub fn saddle_gauss_check(free: usize, p: &[i64], q: u64) -> Result<(Complex64, Complex64)> {
    if p.len() != free + 1 {
        return Err(Error::DimensionMismatch { expected: free + 1, got: p.len() });
    }
    let roots = RootTable::new(q);
    let mut prod = Complex64::new(1.0, 0.0);
    for &pj in &p[1..] {
        let terms: Vec<Complex64> = (0..q as i128)
            .map(|l| roots.get((pj as i128 * l - p[0] as i128 * l * l).rem_euclid(q as i128) as u64))
            .collect();
        prod *= pairwise_sum(0, terms.len(), &|i| terms[i]);
    }
    let w = IntPoly::power_sum(free, 2).scale(-1);
    Ok((prod, exp_sum(&w, p, q)?))
}
