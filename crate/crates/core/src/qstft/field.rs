use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use super::stft_bandwidth;
use crate::error::{QtfaError, Result};
use crate::hermite::window;
use crate::numerics::{pairwise_sum, pairwise_sum_q, Rule1D, UniformGrid, PANEL_ORDER};
use crate::quaternion::{polarization_inner, ImaginaryUnit, PolarizationNorms, Quaternion};
use crate::signal::{hermite_bandwidth, panel_length, Signal, SignalQuadrature, VectorSignal};

/// QSTFT values on a rectangular `(x, ω)` grid.
///
/// `values[ix * omega_grid.n + iw]` holds the value at `(x_ix, ω_iw)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeFreqField {
    pub x_grid: UniformGrid,
    pub omega_grid: UniformGrid,
    pub values: Vec<Quaternion>,
    pub slice_unit: ImaginaryUnit,
    /// Window order; the highest order for a full-poly field.
    pub window_order: u32,
    pub full: bool,
    /// `‖φ‖²`, or `‖φ_j‖²` per component for a full-poly field.
    pub norms_sq: Vec<f64>,
}

impl TimeFreqField {
    /// A field of zeros.
    pub fn zeros(
        x_grid: UniformGrid,
        omega_grid: UniformGrid,
        unit: ImaginaryUnit,
        n: u32,
    ) -> Self {
        TimeFreqField {
            x_grid,
            omega_grid,
            values: vec![Quaternion::ZERO; x_grid.n * omega_grid.n],
            slice_unit: unit,
            window_order: n,
            full: false,
            norms_sq: vec![0.0],
        }
    }

    pub fn get(&self, ix: usize, iw: usize) -> Quaternion {
        self.values[ix * self.omega_grid.n + iw]
    }

    /// Trapezoid weights, aligned with `values`.
    pub fn weights(&self) -> Vec<f64> {
        let wx = self.x_grid.weights();
        let ww = self.omega_grid.weights();
        wx.iter()
            .flat_map(|a| ww.iter().map(move |b| a * b))
            .collect()
    }

    /// `‖φ⃗‖²` (or `‖φ‖²`).
    pub fn signal_norm_sq(&self) -> f64 {
        self.norms_sq.iter().sum()
    }

    pub fn same_layout(&self, other: &TimeFreqField) -> Result<()> {
        if self.x_grid != other.x_grid || self.omega_grid != other.omega_grid {
            return Err(QtfaError::GridMismatch(format!(
                "{:?}×{:?} vs {:?}×{:?}",
                self.x_grid, self.omega_grid, other.x_grid, other.omega_grid
            )));
        }
        if self.slice_unit != other.slice_unit {
            return Err(QtfaError::GridMismatch(format!(
                "slice units differ: {} vs {}",
                self.slice_unit.label(),
                other.slice_unit.label()
            )));
        }
        Ok(())
    }
}

/// Default node count per axis.
pub const DEFAULT_GRID_NODES: usize = 256;

/// `[−T, T]` with `T = 4 + √(n + K)` and 256 nodes.
pub fn default_grid(n_max: u32, k: usize) -> UniformGrid {
    UniformGrid {
        start: -(4.0 + ((n_max as usize + k) as f64).sqrt()),
        end: 4.0 + ((n_max as usize + k) as f64).sqrt(),
        n: DEFAULT_GRID_NODES,
    }
}

/// Values of `√2 Σ_t w_t e^{−2πIωt} ψ_n(x − t) φ_t` on the grid.
fn field_values(
    quad: &SignalQuadrature,
    n: u32,
    xg: UniformGrid,
    wg: UniformGrid,
    unit: ImaginaryUnit,
) -> Vec<Quaternion> {
    let nt = quad.len();
    let omegas = wg.points();
    let iq = unit.as_quaternion();
    let iphi: Vec<Quaternion> = quad.v.iter().map(|v| iq * *v).collect();
    let vnorm: Vec<f64> = quad.v.iter().map(|v| v.norm()).collect();
    let cutoff = 1e-18 * vnorm.iter().cloned().fold(0.0, f64::max);
    let (cos, sin): (Vec<f64>, Vec<f64>) = omegas
        .iter()
        .flat_map(|w| quad.t.iter().map(move |t| (2.0 * PI * w * t).sin_cos()))
        .map(|(s, c)| (c, s))
        .unzip();
    let rows: Vec<Vec<Quaternion>> = xg
        .points()
        .par_iter()
        .map(|&x| {
            let mut a = [vec![0.0; nt], vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]];
            let mut b = [vec![0.0; nt], vec![0.0; nt], vec![0.0; nt], vec![0.0; nt]];
            let (mut lo, mut hi) = (nt, 0);
            for t in 0..nt {
                let g = window(n, x - quad.t[t]) * quad.w[t];
                if g.abs() * vnorm[t] > cutoff {
                    lo = lo.min(t);
                    hi = t + 1;
                }
                let (p, ip) = (quad.v[t].scale(g), iphi[t].scale(g));
                for (c, (pa, pb)) in [(p.w, ip.w), (p.x, ip.x), (p.y, ip.y), (p.z, ip.z)]
                    .into_iter()
                    .enumerate()
                {
                    a[c][t] = pa;
                    b[c][t] = pb;
                }
            }
            (0..omegas.len())
                .map(|iw| {
                    let cs = &cos[iw * nt..(iw + 1) * nt];
                    let sn = &sin[iw * nt..(iw + 1) * nt];
                    let mut acc = [0.0; 4];
                    for (c, slot) in acc.iter_mut().enumerate() {
                        let (ac, bc) = (&a[c], &b[c]);
                        let mut s = 0.0;
                        for t in lo..hi {
                            s += cs[t] * ac[t] - sn[t] * bc[t];
                        }
                        *slot = s * SQRT_2;
                    }
                    Quaternion::new(acc[0], acc[1], acc[2], acc[3])
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn field_bandwidth(wg: UniformGrid, n: u32) -> f64 {
    stft_bandwidth(wg.start.abs().max(wg.end.abs()), n)
}

/// `V_{ψ_n}φ` on the grid.
pub fn compute_field(
    phi: &Signal,
    n: u32,
    xg: UniformGrid,
    wg: UniformGrid,
    unit: ImaginaryUnit,
) -> Result<TimeFreqField> {
    let quad = phi.discretize(field_bandwidth(wg, n))?;
    Ok(TimeFreqField {
        x_grid: xg,
        omega_grid: wg,
        values: field_values(&quad, n, xg, wg, unit),
        slice_unit: unit,
        window_order: n,
        full: false,
        norms_sq: vec![phi.norm_sq()],
    })
}

/// `𝕍φ⃗ = Σ_j V_{ψ_j}φ_j` on the grid.
pub fn compute_full_field(
    vphi: &VectorSignal,
    xg: UniformGrid,
    wg: UniformGrid,
    unit: ImaginaryUnit,
) -> Result<TimeFreqField> {
    let mut values = vec![Quaternion::ZERO; xg.n * wg.n];
    for (j, phi) in vphi.components.iter().enumerate() {
        let quad = phi.discretize(field_bandwidth(wg, j as u32))?;
        for (acc, v) in values
            .iter_mut()
            .zip(field_values(&quad, j as u32, xg, wg, unit))
        {
            *acc += v;
        }
    }
    Ok(TimeFreqField {
        x_grid: xg,
        omega_grid: wg,
        values,
        slice_unit: unit,
        window_order: vphi.order(),
        full: true,
        norms_sq: vphi.component_norms_sq(),
    })
}

/// `∬ conj(G) F dx dω` by the trapezoid rule.
pub fn moyal_inner(f: &TimeFreqField, g: &TimeFreqField) -> Result<Quaternion> {
    f.same_layout(g)?;
    let terms: Vec<Quaternion> = f
        .values
        .iter()
        .zip(&g.values)
        .zip(f.weights())
        .map(|((a, b), w)| (b.conj() * *a).scale(w))
        .collect();
    Ok(pairwise_sum_q(&terms))
}

/// [`moyal_inner`] assembled from the eight polarization norms.
pub fn moyal_inner_polarized(f: &TimeFreqField, g: &TimeFreqField) -> Result<Quaternion> {
    f.same_layout(g)?;
    let w = f.weights();
    Ok(polarization_inner(&PolarizationNorms::from_weighted(
        &g.values,
        &f.values,
        Some(&w),
    )))
}

/// Largest boundary magnitude relative to the field maximum.
pub fn extent_ratio(f: &TimeFreqField) -> f64 {
    let (nx, nw) = (f.x_grid.n, f.omega_grid.n);
    let peak = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let mut edge: f64 = 0.0;
    for ix in 0..nx {
        edge = edge.max(f.get(ix, 0).norm()).max(f.get(ix, nw - 1).norm());
    }
    for iw in 0..nw {
        edge = edge.max(f.get(0, iw).norm()).max(f.get(nx - 1, iw).norm());
    }
    edge / peak
}

struct Synthesis {
    nx: usize,
    nw: usize,
    xs: Vec<f64>,
    wx: Vec<f64>,
    omegas: Vec<f64>,
    ww: Vec<f64>,
    values: Vec<Quaternion>,
    ivalues: Vec<Quaternion>,
}

impl Synthesis {
    fn new(f: &TimeFreqField) -> Self {
        let iq = f.slice_unit.as_quaternion();
        Synthesis {
            nx: f.x_grid.n,
            nw: f.omega_grid.n,
            xs: f.x_grid.points(),
            wx: f.x_grid.weights(),
            omegas: f.omega_grid.points(),
            ww: f.omega_grid.weights(),
            values: f.values.clone(),
            ivalues: f.values.iter().map(|v| iq * *v).collect(),
        }
    }

    /// `∬ e^{2πIωy} F(x, ω) ψ_n(x − y) dx dω`.
    fn eval(&self, n: u32, y: f64) -> Quaternion {
        let (c, s): (Vec<f64>, Vec<f64>) = self
            .omegas
            .iter()
            .zip(&self.ww)
            .map(|(w, ww)| {
                let (s, c) = (2.0 * PI * w * y).sin_cos();
                (c * ww, s * ww)
            })
            .unzip();
        let rows: Vec<Quaternion> = (0..self.nx)
            .map(|ix| {
                let g = window(n, self.xs[ix] - y) * self.wx[ix];
                if g == 0.0 {
                    return Quaternion::ZERO;
                }
                let base = ix * self.nw;
                let mut acc = Quaternion::ZERO;
                for iw in 0..self.nw {
                    acc +=
                        self.values[base + iw].scale(c[iw]) + self.ivalues[base + iw].scale(s[iw]);
                }
                acc.scale(g)
            })
            .collect();
        pairwise_sum_q(&rows)
    }
}

fn check_order(f: &TimeFreqField, n: u32) -> Result<()> {
    if f.full {
        return Err(QtfaError::Input(
            "field is full-poly; use the full adjoint".into(),
        ));
    }
    if f.window_order != n {
        return Err(QtfaError::Input(format!(
            "field was computed with window order {} but order {n} was requested",
            f.window_order
        )));
    }
    Ok(())
}

/// `(1/√2) ∬ e^{2πIωy} F(x, ω) ψ_n(x − y) dx dω`.
pub fn reconstruct(f: &TimeFreqField, n: u32, y: f64) -> Result<Quaternion> {
    check_order(f, n)?;
    Ok(Synthesis::new(f).eval(n, y).scale(1.0 / SQRT_2))
}

/// [`reconstruct`] at many points, in parallel.
pub fn reconstruct_many(f: &TimeFreqField, n: u32, ys: &[f64]) -> Result<Vec<Quaternion>> {
    check_order(f, n)?;
    let syn = Synthesis::new(f);
    Ok(ys
        .par_iter()
        .map(|&y| syn.eval(n, y).scale(1.0 / SQRT_2))
        .collect())
}

/// `V*_{ψ_n}F(y) = √2 ∬ e^{2πIωy} F(x, ω) ψ_n(x − y) dx dω`, computed as `2 · reconstruct`.
pub fn adjoint(f: &TimeFreqField, n: u32, y: f64) -> Result<Quaternion> {
    Ok(reconstruct(f, n, y)?.scale(2.0))
}

/// `(V*_{ψ_0}F(y), …, V*_{ψ_n}F(y))`.
pub fn full_adjoint(f: &TimeFreqField, n: u32, y: f64) -> Result<Vec<Quaternion>> {
    if f.window_order != n {
        return Err(QtfaError::Input(format!(
            "field was computed with window order {} but order {n} was requested",
            f.window_order
        )));
    }
    let syn = Synthesis::new(f);
    Ok((0..=n)
        .map(|j| syn.eval(j, y).scale(1.0 / SQRT_2).scale(2.0))
        .collect())
}

/// Time rule for kernel integrals centred on `x0`.
fn kernel_rule(n: u32, x0: f64, x1: f64, d_omega: f64) -> Rule1D {
    let r = 4.0 + (n as f64).sqrt();
    let (a, b) = (x0.min(x1) - r, x0.max(x1) + r);
    let omega = 2.0 * PI * d_omega.abs() + 2.0 * hermite_bandwidth(n as usize);
    let panels = ((b - a) / panel_length(omega)).ceil() as usize;
    Rule1D::composite_gauss_legendre(a, b, panels, PANEL_ORDER)
}

/// `K_{ψ_n}(x, ω; x', ω') = ∫ e^{2πI(ω'−ω)t} ψ_n(x' − t) ψ_n(x − t) dt`.
pub fn gabor_kernel(
    n: u32,
    x: f64,
    omega: f64,
    xp: f64,
    omegap: f64,
    unit: ImaginaryUnit,
) -> Quaternion {
    let rule = kernel_rule(n, x, xp, omegap - omega);
    let terms: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            Complex64::from_polar(
                w * window(n, xp - t) * window(n, x - t),
                2.0 * PI * (omegap - omega) * t,
            )
        })
        .collect();
    let re: Vec<f64> = terms.iter().map(|c| c.re).collect();
    let im: Vec<f64> = terms.iter().map(|c| c.im).collect();
    unit.lift(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
}

/// `K_{ψ_n}(·; x', ω')` over the field grid, aligned with `values`.
pub fn gabor_kernel_field(
    n: u32,
    xp: f64,
    omegap: f64,
    xg: UniformGrid,
    wg: UniformGrid,
    unit: ImaginaryUnit,
) -> Vec<Quaternion> {
    let r = 4.0 + (n as f64).sqrt();
    let omax = wg.start.abs().max(wg.end.abs()) + omegap.abs();
    let rule = kernel_rule(n, xp - r, xp + r, omax);
    let omegas = wg.points();
    let nt = rule.nodes.len();
    let (cos, sin): (Vec<f64>, Vec<f64>) = omegas
        .iter()
        .flat_map(|w| {
            rule.nodes
                .iter()
                .map(move |t| (2.0 * PI * (omegap - w) * t).sin_cos())
        })
        .map(|(s, c)| (c, s))
        .unzip();
    let rows: Vec<Vec<Quaternion>> = xg
        .points()
        .par_iter()
        .map(|&x| {
            let (idx, a): (Vec<usize>, Vec<f64>) = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &w)| w * window(n, xp - t) * window(n, x - t))
                .enumerate()
                .filter(|(_, a)| *a != 0.0)
                .unzip();
            (0..omegas.len())
                .map(|iw| {
                    let (cs, sn) = (&cos[iw * nt..(iw + 1) * nt], &sin[iw * nt..(iw + 1) * nt]);
                    let (mut re, mut im) = (0.0, 0.0);
                    for (&t, &at) in idx.iter().zip(&a) {
                        re += at * cs[t];
                        im += at * sn[t];
                    }
                    unit.lift(Complex64::new(re, im))
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// `Σ_{j ≤ n} K_{ψ_j}(·; x', ω')` over the field grid.
pub fn full_gabor_kernel_field(
    n: u32,
    xp: f64,
    omegap: f64,
    xg: UniformGrid,
    wg: UniformGrid,
    unit: ImaginaryUnit,
) -> Vec<Quaternion> {
    let mut acc = vec![Quaternion::ZERO; xg.n * wg.n];
    for j in 0..=n {
        for (a, k) in acc
            .iter_mut()
            .zip(gabor_kernel_field(j, xp, omegap, xg, wg, unit))
        {
            *a += k;
        }
    }
    acc
}

/// `⟨F, K⟩ = ∬ conj(K) F dx dω` for a kernel sampled on the field grid.
pub fn gabor_reproduce(f: &TimeFreqField, kernel: &[Quaternion]) -> Quaternion {
    let terms: Vec<Quaternion> = f
        .values
        .iter()
        .zip(kernel)
        .zip(f.weights())
        .map(|((v, k), w)| (k.conj() * *v).scale(w))
        .collect();
    pairwise_sum_q(&terms)
}
