//! Segal–Bargmann and polyanalytic Bargmann transforms, slice Fock inner
//! products and the true-poly Fock reproducing kernel.
//!
//! Transforms are evaluated on the slice `C_I` of the argument with complex
//! arithmetic; the resulting kernel value multiplies the signal from the left.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::hermite::{complex_hermite_c, hermite_poly_normalized, laguerre, NU};
use crate::numerics::{pairwise_sum_q, PolarRule, QuadResult};
use crate::quaternion::{representation_extend, slice_decompose, ImaginaryUnit, Quaternion};
use crate::signal::{HermiteExpansion, Signal, SignalQuadrature, VectorSignal, MAX_COEFFS};
use crate::special::factorial;

/// Evaluation route for the true-poly transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Finite sum over Hermite coefficients.
    Coefficient,
    /// Gaussian-kernel integral with a Hermite polynomial factor.
    Closed,
}

/// Exponent `−π(z² + t²) + 2π√2 z t`.
fn kernel_exponent(z: Complex64, t: f64) -> Complex64 {
    -PI * (z * z + t * t) + 2.0 * PI * SQRT_2 * z * t
}

/// Angular frequency of the kernel in `t` for argument `z`.
fn kernel_bandwidth(z: Complex64) -> f64 {
    2.0 * SQRT_2 * PI * z.im.abs() + 2.0 * PI
}

/// Closed route on a prepared quadrature.
pub fn closed_with_quadrature(quad: &SignalQuadrature, n: u32, q: Quaternion) -> Quaternion {
    let sp = slice_decompose(q);
    let z = sp.to_complex();
    let shift = SQRT_2 * z.re;
    quad.integrate(|t| {
        let k = kernel_exponent(z, t).exp() * hermite_poly_normalized(n, NU, shift - t);
        sp.unit.lift(k)
    })
    .scale(SQRT_2)
}

/// `2^{3/4} ∫ e^{−π(q²+x²)+2π√2 q x} φ(x) dx`.
pub fn segal_bargmann(phi: &Signal, q: Quaternion) -> Result<Quaternion> {
    true_poly_bargmann_closed(phi, 0, q)
}

/// `2^{3/4}(2ⁿ n! (2π)ⁿ)^{−1/2} ∫ e^{−π(q²+t²)+2π√2 q t} H_n(√2 Re q − t) φ(t) dt`.
///
/// Evaluated as `√2 ∫ e^{…} Ĥ_n(√2 Re q − t) φ(t) dt` with `Ĥ_n = H_n/‖h_n‖`, which is the same constant.
pub fn true_poly_bargmann_closed(phi: &Signal, n: u32, q: Quaternion) -> Result<Quaternion> {
    let z = slice_decompose(q).to_complex();
    let quad = phi.discretize(kernel_bandwidth(z))?;
    Ok(closed_with_quadrature(&quad, n, q))
}

/// Complex value of the coefficient route on the slice, for coefficients that are all slice-complex.
fn coeff_factor(n: u32, k: u32, z: Complex64) -> Complex64 {
    let scale = SQRT_2
        / ((NU.powi(n as i32) * factorial(n)).sqrt()
            * factorial(k).sqrt()
            * NU.powf(0.5 * k as f64));
    complex_hermite_c(n, k, NU, z) * scale
}

/// `√2 ((2π)ⁿ n!)^{−1/2} Σ_k H^{2π}_{n,k}(q, q̄) α_k / (√(k!) (2π)^{k/2})`.
pub fn true_poly_bargmann_coeff(phi: &HermiteExpansion, n: u32, q: Quaternion) -> Quaternion {
    let sp = slice_decompose(q);
    let z = sp.to_complex();
    phi.coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| sp.unit.lift(coeff_factor(n, k as u32, z)) * *a)
        .sum()
}

/// Precomputed coefficient route for repeated evaluation of one transform.
#[derive(Clone, Debug)]
pub struct CoeffEvaluator {
    n: u32,
    alphas: Vec<Quaternion>,
    /// `terms[k]` lists `(j, c)` so that the slice factor of `α_k` is `Σ_j c z^{k−j} z̄^{n−j}`.
    terms: Vec<Vec<(u32, f64)>>,
}

impl CoeffEvaluator {
    pub fn new(phi: &HermiteExpansion, n: u32) -> Self {
        let terms = (0..phi.len() as u32)
            .map(|k| {
                let scale = SQRT_2
                    / ((NU.powi(n as i32) * factorial(n)).sqrt()
                        * factorial(k).sqrt()
                        * NU.powf(0.5 * k as f64));
                let lead = NU.powi(k as i32) * factorial(n) * factorial(k) * scale;
                (0..=n.min(k))
                    .map(|j| {
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        let c = sign * lead * NU.powi((n - j) as i32)
                            / (factorial(j) * factorial(n - j) * factorial(k - j));
                        (j, c)
                    })
                    .collect()
            })
            .collect();
        CoeffEvaluator {
            n,
            alphas: phi.coeffs().to_vec(),
            terms,
        }
    }

    pub fn eval(&self, q: Quaternion) -> Quaternion {
        let sp = slice_decompose(q);
        let z = sp.to_complex();
        let kmax = self.alphas.len();
        let mut zp = vec![Complex64::new(1.0, 0.0); kmax.max(1)];
        for i in 1..kmax {
            zp[i] = zp[i - 1] * z;
        }
        let mut zb = vec![Complex64::new(1.0, 0.0); self.n as usize + 1];
        for i in 1..zb.len() {
            zb[i] = zb[i - 1] * z.conj();
        }
        let mut acc = Quaternion::ZERO;
        for (k, (a, terms)) in self.alphas.iter().zip(&self.terms).enumerate() {
            let f: Complex64 = terms
                .iter()
                .map(|&(j, c)| zp[k - j as usize] * zb[(self.n - j) as usize] * c)
                .sum();
            acc += sp.unit.lift(f) * *a;
        }
        acc
    }
}

/// `B^{n+1}φ(q)` by the chosen route. Samples are projected onto the first 64 basis functions for the coefficient route.
pub fn true_poly_bargmann(phi: &Signal, n: u32, q: Quaternion, route: Route) -> Result<Quaternion> {
    match (route, phi) {
        (Route::Closed, _) => true_poly_bargmann_closed(phi, n, q),
        (Route::Coefficient, Signal::Hermite(h)) => Ok(true_poly_bargmann_coeff(h, n, q)),
        (Route::Coefficient, s) => Ok(true_poly_bargmann_coeff(&s.to_expansion(MAX_COEFFS)?, n, q)),
    }
}

/// `Σ_j B^{j+1}φ_j(q)`.
pub fn full_poly_bargmann(vphi: &VectorSignal, q: Quaternion, route: Route) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for (j, phi) in vphi.components.iter().enumerate() {
        acc += true_poly_bargmann(phi, j as u32, q, route)?;
    }
    Ok(acc)
}

/// Polar quadrature on a slice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockQuadrature {
    pub radius: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl FockQuadrature {
    /// Radius `3 + √(n + K)` with 400 radial and 256 angular nodes.
    pub fn for_orders(n: u32, k: usize) -> Self {
        FockQuadrature {
            radius: 3.0 + ((n as usize + k) as f64).sqrt(),
            n_radial: 400,
            n_angular: 256,
        }
    }

    pub fn doubled(self) -> Self {
        FockQuadrature {
            n_radial: 2 * self.n_radial,
            n_angular: 2 * self.n_angular,
            ..self
        }
    }
}

fn fock_sum<F, G>(f: &F, g: &G, unit: ImaginaryUnit, quad: FockQuadrature) -> Quaternion
where
    F: Fn(Quaternion) -> Quaternion + Sync,
    G: Fn(Quaternion) -> Quaternion + Sync,
{
    let rule = PolarRule::new(quad.radius, quad.n_radial, quad.n_angular);
    let terms: Vec<Quaternion> = rule
        .points
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&(u, v), &w)| {
            let q = unit.point(u, v);
            (g(q).conj() * f(q)).scale(w * (-NU * (u * u + v * v)).exp())
        })
        .collect();
    pairwise_sum_q(&terms)
}

/// `∫_{C_I} conj(g(q)) f(q) e^{−2π|q|²} dA(q)` with its node-doubling estimate.
pub fn fock_inner<F, G>(
    f: F,
    g: G,
    unit: ImaginaryUnit,
    quad: FockQuadrature,
    tol: f64,
) -> QuadResult
where
    F: Fn(Quaternion) -> Quaternion + Sync,
    G: Fn(Quaternion) -> Quaternion + Sync,
{
    let coarse = fock_sum(&f, &g, unit, quad);
    let fine = fock_sum(&f, &g, unit, quad.doubled());
    let estimate = fine.dist(coarse);
    QuadResult {
        value: fine,
        estimate,
        converged: estimate <= tol * fine.norm().max(1.0),
    }
}

/// True-poly Fock kernel `K^n(q, r)`.
///
/// On a common slice this is `2 e^{2π z w̄} L_n(2π|z − w|²)`; other `q` are reached
/// from the slice of `r` with the representation formula.
pub fn true_fock_kernel(n: u32, q: Quaternion, r: Quaternion) -> Quaternion {
    let rs = slice_decompose(r);
    let unit = if rs.y > 0.0 {
        rs.unit
    } else {
        slice_decompose(q).unit
    };
    let w = unit.project(r);
    let on_slice = |p: Quaternion| {
        let z = unit.project(p);
        let k = (NU * z * w.conj()).exp() * 2.0 * laguerre(n, 0.0, NU * (z - w).norm_sqr());
        unit.lift(k)
    };
    representation_extend(on_slice, q, unit)
}
