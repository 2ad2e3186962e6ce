//! Deterministic primality for 64-bit integers and prime enumeration.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller–Rabin with the first twelve prime bases, which is exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes in the closed interval `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Primes `q` with `Q/2 <= q <= Q`, for real `Q`.
pub fn primes_in_dyadic(big_q: f64) -> Vec<u64> {
    if big_q < 2.0 {
        return Vec::new();
    }
    let lo = (big_q / 2.0).ceil() as u64;
    let hi = big_q.floor() as u64;
    primes_in(lo, hi)
}

/// Largest prime in `[Q/2, Q]`, or `None` when the interval holds no prime.
pub fn largest_prime_in_dyadic(big_q: f64) -> Option<u64> {
    primes_in_dyadic(big_q).last().copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn large_known_values() {
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn dyadic_layers() {
        assert_eq!(primes_in_dyadic(8.0), vec![5, 7]);
        assert_eq!(largest_prime_in_dyadic(8.0), Some(7));
        assert!(primes_in_dyadic(1.5).is_empty());
        assert_eq!(primes_in_dyadic(2.0), vec![2]);
        assert_eq!(largest_prime_in_dyadic(4.0), Some(3));
    }
}
