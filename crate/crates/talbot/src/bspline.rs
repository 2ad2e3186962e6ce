//! Centered cardinal B-splines.
//!
//! `M_r` is the `r`-fold convolution of the indicator of `[-1/2, 1/2]`. It is
//! supported on `[-r/2, r/2]`, is `C^{r-2}`, integrates to one, and its Fourier
//! transform `∫ M_r(x) e^{-2πixω} dx` equals `sinc(πω)^r`.

/// Factorial as `f64` (exact for the small orders used here).
fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `M_r(x)`.
pub fn m(r: usize, x: f64) -> f64 {
    debug_assert!(r >= 1);
    let half = r as f64 / 2.0;
    // Evaluate on the left half, where the truncated-power sum has few small terms.
    let y = -x.abs();
    if y <= -half {
        return 0.0;
    }
    if r == 1 {
        return if x.abs() < 0.5 { 1.0 } else if x.abs() == 0.5 { 0.5 } else { 0.0 };
    }
    let mut acc = 0.0;
    for j in 0..=r {
        let s = y + half - j as f64;
        if s <= 0.0 {
            break;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom(r, j) * s.powi(r as i32 - 1);
    }
    acc / factorial(r - 1)
}

/// `M_r'(x) = M_{r-1}(x + 1/2) − M_{r-1}(x − 1/2)`.
pub fn dm(r: usize, x: f64) -> f64 {
    m(r - 1, x + 0.5) - m(r - 1, x - 0.5)
}

/// `sin(y)/y` with the removable singularity filled in.
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// Fourier transform of `M_r` at frequency `ω`.
pub fn m_hat(r: usize, omega: f64) -> f64 {
    sinc(std::f64::consts::PI * omega).powi(r as i32)
}

/// `∫ M_r(x)² dx = M_{2r}(0)`.
pub fn l2_norm_sq(r: usize) -> f64 {
    m(2 * r, 0.0)
}
