//! Factorials, binomials and Gamma values.

use statrs::function::gamma::{gamma, ln_gamma};

/// `n!` as a float; exact for `n ≤ 22`, log-Gamma beyond.
pub fn factorial(n: u32) -> f64 {
    if n <= 22 {
        (1..=n).fold(1.0, |acc, k| acc * k as f64)
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Exact `C(n, k)` by the multiplicative recurrence; `None` on overflow.
pub fn binomial_exact(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(a, k)` for real `a`.
///
/// Integer `a` with an exactly representable result uses [`binomial_exact`];
/// short falling factorials are multiplied out; long ones go through log-Gamma.
pub fn binomial(a: f64, k: u32) -> f64 {
    if a >= 0.0 && a.fract() == 0.0 && a < 9.0e15 {
        if let Some(b) = binomial_exact(a as u64, k as u64) {
            if b < (1u64 << 53) {
                return b as f64;
            }
        }
    }
    let tail = a - k as f64 + 1.0;
    if k > 64 && tail > 0.0 {
        return (ln_gamma(a + 1.0) - ln_factorial(k) - ln_gamma(tail)).exp();
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (a - i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// `Γ(x)` for positive `x`.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}
