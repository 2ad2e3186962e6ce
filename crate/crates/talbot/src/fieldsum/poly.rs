use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Multivariate polynomial with integer coefficients.
///
/// Terms are kept sorted by exponent vector with zero coefficients removed, so
/// two polynomials are equal exactly when their term lists are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    num_vars: usize,
    terms: Vec<(Vec<u32>, i64)>,
    degree: u32,
}

impl IntPoly {
    /// Builds a polynomial, merging repeated exponent vectors.
    pub fn new(num_vars: usize, terms: Vec<(Vec<u32>, i64)>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidPoly("at least one variable is required".into()));
        }
        let mut merged: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch { expected: num_vars, got: e.len() });
            }
            let slot = merged.entry(e).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or_else(|| Error::InvalidPoly("coefficient overflow".into()))?;
        }
        let terms: Vec<_> = merged.into_iter().filter(|(_, c)| *c != 0).collect();
        let degree = terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0);
        Ok(IntPoly { num_vars, terms, degree })
    }

    /// `x₁^k + ⋯ + x_d^k`.
    pub fn power_sum(d: usize, k: u32) -> Self {
        let terms = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = k;
                (e, 1)
            })
            .collect();
        IntPoly::new(d, terms).expect("well formed")
    }

    /// `p' · x` as a degree-one polynomial.
    pub fn linear(coeffs: &[i64]) -> Self {
        let d = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut e = vec![0; d];
                e[i] = 1;
                (e, c)
            })
            .collect();
        IntPoly::new(d, terms).expect("well formed")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<u32>, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().sum::<u32>() == self.degree)
    }

    /// True when no term mixes two variables.
    pub fn is_separable(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().filter(|&&x| x > 0).count() <= 1)
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == k)
            .cloned()
            .collect();
        IntPoly::new(self.num_vars, terms).expect("subset of valid terms")
    }

    pub fn scale(&self, c: i64) -> Self {
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        IntPoly::new(self.num_vars, terms).expect("same shape")
    }

    pub fn add(&self, other: &IntPoly) -> Result<Self> {
        if other.num_vars != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: other.num_vars });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        IntPoly::new(self.num_vars, terms)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * e[i] as i64)
            })
            .collect();
        IntPoly::new(self.num_vars, terms).expect("same shape")
    }

    /// Value at an integer point reduced into `[0, q)`.
    pub fn eval_mod(&self, point: &[i64], q: u64) -> Result<u64> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: point.len() });
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let x: Vec<u64> = point.iter().map(|&v| v.rem_euclid(q as i64) as u64).collect();
        Ok(self.eval_residues(&x, q))
    }

    /// Evaluation on residues already reduced mod `q`; `q` is not checked.
    pub(crate) fn eval_residues(&self, x: &[u64], q: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = c.rem_euclid(q as i64) as u64;
            for (xi, &ei) in x.iter().zip(e) {
                let xi = xi % q;
                for _ in 0..ei {
                    t = super::mul_mod(t, xi, q);
                }
            }
            acc = super::add_mod(acc, t, q);
        }
        acc
    }

    /// Real evaluation.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                *c as f64 * x.iter().zip(e).map(|(xi, &ei)| xi.powi(ei as i32)).product::<f64>()
            })
            .sum()
    }

    /// Stable 64-bit fingerprint of the canonical term list.
    pub fn fingerprint(&self) -> u64 {
        let digest = Sha256::digest(self.to_string().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("eight bytes"))
    }

    /// Parses expressions such as `x^3+y^3`, `2*x*y - z^2` or `x1^4+x2^4`.
    ///
    /// Variables are `x, y, z, w` (indices 1–4) or `x1 … x9`. The number of
    /// variables is `num_vars` when given, else the largest index used.
    pub fn parse(src: &str, num_vars: Option<usize>) -> Result<Self> {
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut raw_terms: Vec<(BTreeMap<usize, u32>, i64)> = Vec::new();
        let mut max_var = 0usize;
        let bytes = cleaned.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1i64;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let term = &cleaned[start..pos];
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{src}'")));
            }
            let mut coeff = sign;
            let mut exps = BTreeMap::new();
            for factor in term.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent '{e}'")))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                if let Ok(c) = base.parse::<i64>() {
                    coeff = coeff
                        .checked_mul(c.checked_pow(exp).ok_or_else(|| Error::Parse("overflow".into()))?)
                        .ok_or_else(|| Error::Parse("overflow".into()))?;
                    continue;
                }
                let idx = match base {
                    "x" => 1,
                    "y" => 2,
                    "z" => 3,
                    "w" => 4,
                    b if b.starts_with('x') => b[1..]
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| Error::Parse(format!("unknown variable '{b}'")))?,
                    b => return Err(Error::Parse(format!("unknown variable '{b}'"))),
                };
                max_var = max_var.max(idx);
                *exps.entry(idx - 1).or_insert(0) += exp;
            }
            raw_terms.push((exps, coeff));
        }
        let nv = num_vars.unwrap_or(max_var.max(1));
        if max_var > nv {
            return Err(Error::Parse(format!("variable index {max_var} exceeds {nv} variables")));
        }
        let terms = raw_terms
            .into_iter()
            .map(|(m, c)| {
                let mut e = vec![0; nv];
                for (i, p) in m {
                    e[i] = p;
                }
                (e, c)
            })
            .collect();
        IntPoly::new(nv, terms)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (j, (e, c)) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            let constant = e.iter().all(|&x| x == 0);
            if c.abs() != 1 || constant {
                parts.push(c.abs().to_string());
            }
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, p)),
                }
            }
            if *c < 0 {
                write!(f, "-")?;
            } else if j > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
