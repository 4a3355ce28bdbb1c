//! Quaternionic short-time Fourier transform with Hermite windows.
//!
//! `V_{ψ_n}φ(x, ω) = √2 ∫ e^{−2πIωt} ψ_n(x − t) φ(t) dt`, where the exponential lives
//! on the slice `C_I` and multiplies `φ(t)` from the left. The window enters as
//! `ψ_n(x − t)` without time reversal, so `V_{ψ_n}ψ_n(0, 0) = √2 (−1)ⁿ`.

mod bounds;
mod field;

pub use bounds::{
    lieb_lp, pointwise_bound, uncertainty_check, LiebReport, MassReport, PointwiseReport, Region,
};
pub use field::{
    adjoint, compute_field, compute_full_field, default_grid, extent_ratio, full_adjoint,
    full_gabor_kernel_field, gabor_kernel, gabor_kernel_field, gabor_reproduce, moyal_inner,
    moyal_inner_polarized, reconstruct, reconstruct_many, TimeFreqField, DEFAULT_GRID_NODES,
};

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::bargmann::{full_poly_bargmann, true_poly_bargmann, Route};
use crate::error::Result;
use crate::hermite::window;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::signal::{hermite_bandwidth, Signal, SignalQuadrature, VectorSignal};

/// Angular bandwidth needed in `t` for frequency `omega` and window order `n`.
pub(crate) fn stft_bandwidth(omega: f64, n: u32) -> f64 {
    2.0 * PI * omega.abs() + hermite_bandwidth(n as usize)
}

/// `√2 Σ_t w_t e^{−2πIωt} g(x − t) φ(t)` on a prepared quadrature.
pub fn stft_with_window<G: Fn(f64) -> f64>(
    quad: &SignalQuadrature,
    g: G,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
) -> Quaternion {
    quad.integrate(|t| unit.lift(Complex64::from_polar(g(x - t), -2.0 * PI * omega * t)))
        .scale(SQRT_2)
}

/// True-poly QSTFT by direct quadrature.
pub fn true_qstft(
    phi: &Signal,
    n: u32,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
) -> Result<Quaternion> {
    let quad = phi.discretize(stft_bandwidth(omega, n))?;
    Ok(stft_with_window(&quad, |s| window(n, s), x, omega, unit))
}

/// QSTFT with the Gaussian window `g(t) = 2^{1/4} e^{−πt²}`.
pub fn gaussian_window_qstft(
    phi: &Signal,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
) -> Result<Quaternion> {
    let quad = phi.discretize(stft_bandwidth(omega, 0))?;
    let c = 2f64.powf(0.25);
    Ok(stft_with_window(
        &quad,
        |s| c * (-PI * s * s).exp(),
        x,
        omega,
        unit,
    ))
}

fn bargmann_frame(x: f64, omega: f64, unit: ImaginaryUnit) -> (Quaternion, Quaternion, f64) {
    let q = unit.point(x, omega);
    let phase = unit.lift(Complex64::from_polar(1.0, -PI * x * omega));
    (
        phase,
        q.conj().scale(1.0 / SQRT_2),
        (-0.5 * PI * q.norm_sqr()).exp(),
    )
}

/// `e^{−Iπxω} B^{n+1}φ(q̄/√2) e^{−π|q|²/2}` with `q = x + Iω`.
pub fn true_qstft_via_bargmann(
    phi: &Signal,
    n: u32,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
    route: Route,
) -> Result<Quaternion> {
    let (phase, arg, damp) = bargmann_frame(x, omega, unit);
    Ok((phase * true_poly_bargmann(phi, n, arg, route)?).scale(damp))
}

/// `Σ_j V_{ψ_j}φ_j(x, ω)`.
pub fn full_qstft(
    vphi: &VectorSignal,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
) -> Result<Quaternion> {
    let mut acc = Quaternion::ZERO;
    for (j, phi) in vphi.components.iter().enumerate() {
        acc += true_qstft(phi, j as u32, x, omega, unit)?;
    }
    Ok(acc)
}

/// `e^{−Iπxω} 𝔅φ⃗(q̄/√2) e^{−π|q|²/2}`.
pub fn full_qstft_via_bargmann(
    vphi: &VectorSignal,
    x: f64,
    omega: f64,
    unit: ImaginaryUnit,
    route: Route,
) -> Result<Quaternion> {
    let (phase, arg, damp) = bargmann_frame(x, omega, unit);
    Ok((phase * full_poly_bargmann(vphi, arg, route)?).scale(damp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::HermiteExpansion;

    fn psi(k: usize) -> Signal {
        Signal::Hermite(HermiteExpansion::basis(k, Quaternion::ONE))
    }

    #[test]
    fn origin_values() {
        let u = ImaginaryUnit::I;
        assert!(
            true_qstft(&psi(0), 0, 0.0, 0.0, u)
                .unwrap()
                .dist(Quaternion::real(SQRT_2))
                < 1e-13
        );
        assert!(true_qstft(&psi(1), 0, 0.0, 0.0, u).unwrap().norm() < 1e-13);
        for n in 0..6u32 {
            let s = if n % 2 == 0 { SQRT_2 } else { -SQRT_2 };
            let v = true_qstft(&psi(n as usize), n, 0.0, 0.0, u).unwrap();
            assert!(v.dist(Quaternion::real(s)) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn gaussian_window_is_order_zero() {
        let phi = Signal::Hermite(
            HermiteExpansion::new(vec![
                Quaternion::new(0.5, 0.1, 0.0, -0.2),
                Quaternion::new(0.0, 0.3, 0.4, 0.0),
            ])
            .unwrap(),
        );
        let u = ImaginaryUnit::J;
        for &(x, w) in &[(0.0, 0.0), (0.4, -1.3), (-2.0, 0.7)] {
            assert_eq!(
                true_qstft(&phi, 0, x, w, u).unwrap(),
                gaussian_window_qstft(&phi, x, w, u).unwrap()
            );
        }
    }

    #[test]
    fn two_routes_agree() {
        let phi = Signal::Hermite(
            HermiteExpansion::new(vec![
                Quaternion::new(0.5, 0.1, 0.0, -0.2),
                Quaternion::new(0.0, 0.3, 0.4, 0.0),
                Quaternion::new(0.1, 0.0, 0.0, 0.6),
            ])
            .unwrap(),
        );
        let u = ImaginaryUnit::from_direction(0.2, 1.0, -0.5).unwrap();
        for n in 0..4 {
            for &(x, w) in &[(0.0, 0.0), (0.4, -1.3), (-2.0, 0.7), (1.5, 1.5)] {
                let a = true_qstft(&phi, n, x, w, u).unwrap();
                let b = true_qstft_via_bargmann(&phi, n, x, w, u, Route::Coefficient).unwrap();
                assert!(a.dist(b) < 1e-10, "n={n} x={x} w={w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn full_pair_cancels_at_origin() {
        let v = VectorSignal::new(vec![psi(0), psi(1)]).unwrap();
        let u = ImaginaryUnit::I;
        assert!(full_qstft(&v, 0.0, 0.0, u).unwrap().norm() < 1e-12);
        let b = full_qstft_via_bargmann(&v, 0.3, -0.2, u, Route::Coefficient).unwrap();
        assert!(full_qstft(&v, 0.3, -0.2, u).unwrap().dist(b) < 1e-10);
    }
}
