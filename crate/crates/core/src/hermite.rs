//! Weighted Hermite polynomials and functions, normalized windows, two-index
//! complex Hermite polynomials and generalized Laguerre polynomials.
//!
//! The weighted family is `H_n^ν(x) = (−1)^n e^{νx²} dⁿ/dxⁿ e^{−νx²}` with
//! `H_0 = 1`, `H_1 = 2νx`, `H_{n+1} = 2νx H_n − 2nν H_{n−1}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quaternion::{slice_power, Quaternion};
use crate::special::{binomial, factorial, ln_factorial};

/// Window weight used by every transform.
pub const NU: f64 = 2.0 * PI;

/// Weight parameter `ν > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteParams {
    nu: f64,
}

impl HermiteParams {
    pub fn new(nu: f64) -> Option<Self> {
        (nu > 0.0 && nu.is_finite()).then_some(HermiteParams { nu })
    }

    pub fn nu(self) -> f64 {
        self.nu
    }
}

impl Default for HermiteParams {
    fn default() -> Self {
        HermiteParams { nu: NU }
    }
}

/// Order and weight of a normalized Hermite window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    pub order: u32,
    pub params: HermiteParams,
}

impl WindowSpec {
    pub fn new(order: u32) -> Self {
        WindowSpec {
            order,
            params: HermiteParams::default(),
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        hermite_fn_normalized(self.order, self.params.nu, x)
    }
}

/// `H_n^ν(x)` by the three-term recurrence.
pub fn hermite_poly(n: u32, nu: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * nu * x;
    for k in 1..n {
        let next = 2.0 * nu * x * cur - 2.0 * k as f64 * nu * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n^ν(x) = n! Σ_m (−1)^m ν^m (2νx)^{n−2m} / (m!(n−2m)!)`.
pub fn hermite_poly_explicit(n: u32, nu: f64, x: f64) -> f64 {
    let nf = factorial(n);
    (0..=n / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * nu.powi(m as i32) * (2.0 * nu * x).powi((n - 2 * m) as i32)
                / (factorial(m) * factorial(n - 2 * m))
        })
        .sum::<f64>()
        * nf
}

/// The explicit sum without the `ν^m` weight. Agrees with [`hermite_poly`] only at `ν = 1`;
/// kept so the discrepancy can be reported.
pub fn hermite_poly_unweighted_sum(n: u32, nu: f64, x: f64) -> f64 {
    hermite_poly_explicit(n, 1.0, nu * x)
}

/// `d/dx H_n^ν(x) = 2νn H_{n−1}^ν(x)`.
pub fn hermite_poly_deriv(n: u32, nu: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * nu * n as f64 * hermite_poly(n - 1, nu, x)
    }
}

/// `h_n^ν(x) = H_n^ν(x) e^{−νx²/2}`.
pub fn hermite_fn(n: u32, nu: f64, x: f64) -> f64 {
    hermite_poly(n, nu, x) * (-0.5 * nu * x * x).exp()
}

/// `‖h_n^ν‖² = 2ⁿ νⁿ n! (π/ν)^{1/2}`.
pub fn hermite_norm_sq(n: u32, nu: f64) -> f64 {
    ln_hermite_norm_sq(n, nu).exp()
}

pub fn ln_hermite_norm_sq(n: u32, nu: f64) -> f64 {
    n as f64 * (2.0 * nu).ln() + ln_factorial(n) + 0.5 * (PI / nu).ln()
}

/// `H_n^ν(x) / ‖h_n^ν‖`, by a recurrence that keeps every iterate O(1)-scaled.
pub fn hermite_poly_normalized(n: u32, nu: f64, x: f64) -> f64 {
    normalized_recurrence(n, nu, x, (PI / nu).powf(-0.25))
}

/// `h_n^ν(x) / ‖h_n^ν‖`.
pub fn hermite_fn_normalized(n: u32, nu: f64, x: f64) -> f64 {
    normalized_recurrence(n, nu, x, (PI / nu).powf(-0.25) * (-0.5 * nu * x * x).exp())
}

fn normalized_recurrence(n: u32, nu: f64, x: f64, seed: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = seed;
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 * nu / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized window `ψ_n(x)` at `ν = 2π`.
pub fn window(n: u32, x: f64) -> f64 {
    hermite_fn_normalized(n, NU, x)
}

/// `[ψ_0(x), …, ψ_nmax(x)]`.
pub fn windows_upto(nmax: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    let mut prev = 0.0;
    let mut cur = 2f64.powf(0.25) * (-PI * x * x).exp();
    out.push(cur);
    for k in 0..nmax {
        let kf = k as f64;
        let next = (2.0 * NU / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

fn complex_hermite_terms(m: u32, p: u32, alpha: f64) -> impl Iterator<Item = (u32, f64)> {
    let lead = alpha.powi(p as i32) * factorial(m) * factorial(p);
    (0..=m.min(p)).map(move |j| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * lead * alpha.powi((m - j) as i32)
            / (factorial(j) * factorial(m - j) * factorial(p - j));
        (j, c)
    })
}

/// `H^α_{m,p}(z, z̄)` by the closed finite sum.
pub fn complex_hermite_c(m: u32, p: u32, alpha: f64, z: Complex64) -> Complex64 {
    complex_hermite_terms(m, p, alpha)
        .map(|(j, c)| z.powu(p - j) * z.conj().powu(m - j) * c)
        .sum()
}

/// `H^α_{m,p}(q, q̄)` for a quaternion argument; `q` and `q̄` commute, so the sum is unambiguous.
pub fn complex_hermite(m: u32, p: u32, alpha: f64, q: Quaternion) -> Quaternion {
    let qc = q.conj();
    complex_hermite_terms(m, p, alpha)
        .map(|(j, c)| (slice_power(q, p - j) * slice_power(qc, m - j)).scale(c))
        .sum()
}

/// `‖H^α_{m,p}‖² = π α^{p+m−1} m! p!` against `e^{−α|z|²} dA`.
pub fn complex_hermite_norm_sq(m: u32, p: u32, alpha: f64) -> f64 {
    PI * alpha.powi(p as i32 + m as i32 - 1) * factorial(m) * factorial(p)
}

/// `L_n^β(x) = Σ_k (−1)^k C(n+β, n−k) x^k / k!`.
pub fn laguerre(n: u32, beta: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(n as f64 + beta, n - k) * pow / factorial(k);
        pow *= x;
    }
    sum
}

/// `Σ_{n ≤ N} H_n^ν(x) λⁿ / n!`.
pub fn generating_partial_sum(big_n: u32, nu: f64, x: f64, lambda: f64) -> f64 {
    let mut sum = 1.0;
    let mut prev = 1.0;
    let mut cur = 2.0 * nu * x;
    let mut coef = 1.0;
    for n in 1..=big_n {
        coef *= lambda / n as f64;
        sum += cur * coef;
        let next = 2.0 * nu * x * cur - 2.0 * n as f64 * nu * prev;
        prev = cur;
        cur = next;
    }
    sum
}
