//! Quaternion-valued signals on the real line and their quadrature form.

use std::f64::consts::PI;

use crate::error::{QtfaError, Result};
use crate::hermite::{windows_upto, NU};
use crate::numerics::{pairwise_sum, Rule1D};
use crate::quaternion::Quaternion;

/// Largest supported expansion length.
pub const MAX_COEFFS: usize = 64;
/// Relative endpoint magnitude above which a sampled signal counts as truncated.
pub const TAIL_THRESHOLD: f64 = 1e-6;

/// `φ(t) = Σ_k ψ_k(t) α_k` with quaternion coefficients on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteExpansion {
    coeffs: Vec<Quaternion>,
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<Quaternion>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(QtfaError::Input(
                "expansion needs at least one coefficient".into(),
            ));
        }
        if coeffs.len() > MAX_COEFFS {
            return Err(QtfaError::Input(format!(
                "expansion has {} coefficients; at most {MAX_COEFFS} are supported",
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(QtfaError::Input(format!("non-finite coefficient {c}")));
        }
        Ok(HermiteExpansion { coeffs })
    }

    /// `ψ_k · a`.
    pub fn basis(k: usize, a: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; k + 1];
        coeffs[k] = a;
        HermiteExpansion { coeffs }
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: f64) -> Quaternion {
        windows_upto(self.coeffs.len() as u32 - 1, t)
            .iter()
            .zip(&self.coeffs)
            .map(|(p, a)| a.scale(*p))
            .sum()
    }

    /// Parseval norm `Σ |α_k|²`.
    pub fn norm_sq(&self) -> f64 {
        pairwise_sum(&self.coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>())
    }

    /// `φ·a`.
    pub fn mul_right(&self, a: Quaternion) -> Self {
        HermiteExpansion {
            coeffs: self.coeffs.iter().map(|c| *c * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let get = |v: &[Quaternion], k: usize| v.get(k).copied().unwrap_or(Quaternion::ZERO);
        HermiteExpansion {
            coeffs: (0..n)
                .map(|k| get(&self.coeffs, k) + get(&other.coeffs, k))
                .collect(),
        }
    }

    /// Scales to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if n == 0.0 {
            return Err(QtfaError::Input("cannot normalize the zero signal".into()));
        }
        Ok(HermiteExpansion {
            coeffs: self.coeffs.iter().map(|c| c.scale(1.0 / n)).collect(),
        })
    }

    /// Half-width of the time support used for quadrature.
    pub fn support_radius(&self) -> f64 {
        4.0 + (self.coeffs.len() as f64).sqrt()
    }
}

/// Uniform samples `φ(t0 + i·dt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<Quaternion>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, values: Vec<Quaternion>) -> Result<Self> {
        if !(t0.is_finite() && dt.is_finite() && dt > 0.0) {
            return Err(QtfaError::Input(format!(
                "samples need finite t0 and positive dt, got t0={t0}, dt={dt}"
            )));
        }
        if values.len() < 2 {
            return Err(QtfaError::Input("samples need at least two values".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(QtfaError::Input(format!("non-finite sample {v}")));
        }
        Ok(SampledSignal { t0, dt, values })
    }

    /// Samples `f` on `[a, b]` with `n` points.
    pub fn from_fn<F: Fn(f64) -> Quaternion>(a: f64, b: f64, n: usize, f: F) -> Result<Self> {
        let dt = (b - a) / (n - 1) as f64;
        Self::new(a, dt, (0..n).map(|i| f(a + dt * i as f64)).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| self.t0 + self.dt * i as f64)
            .collect()
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.dt * (self.values.len() - 1) as f64
    }

    /// Trapezoid weights over the sample grid.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.values.len();
        (0..n)
            .map(|i| {
                if i == 0 || i + 1 == n {
                    0.5 * self.dt
                } else {
                    self.dt
                }
            })
            .collect()
    }

    pub fn norm_sq(&self) -> f64 {
        let w = self.weights();
        pairwise_sum(
            &self
                .values
                .iter()
                .zip(&w)
                .map(|(v, w)| v.norm_sqr() * w)
                .collect::<Vec<_>>(),
        )
    }

    /// Largest endpoint magnitude relative to the peak.
    pub fn tail_magnitude(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let ends = self.values[0]
            .norm()
            .max(self.values[self.values.len() - 1].norm());
        ends / peak
    }

    pub fn check_tails(&self, threshold: f64) -> Result<()> {
        let tail = self.tail_magnitude();
        if tail > threshold {
            return Err(QtfaError::Truncation(format!(
                "sampled signal endpoint magnitude {tail:.3e} (relative) exceeds {threshold:.1e}"
            )));
        }
        Ok(())
    }

    /// Coefficients `α_k = ∫ ψ_k φ dt` for `k < len`.
    pub fn project(&self, len: usize) -> Result<HermiteExpansion> {
        let w = self.weights();
        let mut coeffs = vec![Quaternion::ZERO; len];
        for (i, t) in self.times().into_iter().enumerate() {
            let psi = windows_upto(len as u32 - 1, t);
            for (c, p) in coeffs.iter_mut().zip(psi) {
                *c += self.values[i].scale(p * w[i]);
            }
        }
        HermiteExpansion::new(coeffs)
    }
}

/// A signal in either representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    Hermite(HermiteExpansion),
    Samples(SampledSignal),
}

/// Nodes, weights and values representing `∫ g(t) φ(t) dt ≈ Σ w_i g(t_i) φ(t_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalQuadrature {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
    pub v: Vec<Quaternion>,
}

impl SignalQuadrature {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `Σ w_i g(t_i) φ(t_i)` with `g` multiplying from the left.
    pub fn integrate<G: Fn(f64) -> Quaternion>(&self, g: G) -> Quaternion {
        let terms: Vec<Quaternion> = (0..self.t.len())
            .map(|i| (g(self.t[i]) * self.v[i]).scale(self.w[i]))
            .collect();
        crate::numerics::pairwise_sum_q(&terms)
    }
}

/// Panel length so a 32-node Gauss–Legendre panel resolves angular frequency `omega`.
pub fn panel_length(omega: f64) -> f64 {
    (40.0 / omega.max(1.0)).min(0.5)
}

/// Angular-frequency scale of `ψ_k` for `k ≤ order`.
pub fn hermite_bandwidth(order: usize) -> f64 {
    (NU * (2.0 * order as f64 + 1.0)).sqrt() + 2.0 * PI
}

impl Signal {
    pub fn norm_sq(&self) -> f64 {
        match self {
            Signal::Hermite(h) => h.norm_sq(),
            Signal::Samples(s) => s.norm_sq(),
        }
    }

    pub fn eval_hermite(&self, t: f64) -> Option<Quaternion> {
        match self {
            Signal::Hermite(h) => Some(h.eval(t)),
            Signal::Samples(_) => None,
        }
    }

    /// Quadrature form for integrands whose other factors oscillate at most at
    /// angular frequency `bandwidth`.
    ///
    /// Hermite expansions use composite Gauss–Legendre on `[−T, T]`; samples
    /// use the trapezoid rule on their own grid after a tail check.
    pub fn discretize(&self, bandwidth: f64) -> Result<SignalQuadrature> {
        match self {
            Signal::Hermite(h) => {
                let t_max = h.support_radius();
                let omega = bandwidth + hermite_bandwidth(h.len());
                let panels = (2.0 * t_max / panel_length(omega)).ceil() as usize;
                let rule = Rule1D::composite_gauss_legendre(
                    -t_max,
                    t_max,
                    panels,
                    crate::numerics::PANEL_ORDER,
                );
                let v = rule.nodes.iter().map(|&t| h.eval(t)).collect();
                Ok(SignalQuadrature {
                    t: rule.nodes,
                    w: rule.weights,
                    v,
                })
            }
            Signal::Samples(s) => {
                s.check_tails(TAIL_THRESHOLD)?;
                Ok(SignalQuadrature {
                    t: s.times(),
                    w: s.weights(),
                    v: s.values.clone(),
                })
            }
        }
    }

    /// Coefficient form; sampled signals are projected onto `len` basis functions.
    pub fn to_expansion(&self, len: usize) -> Result<HermiteExpansion> {
        match self {
            Signal::Hermite(h) => Ok(h.clone()),
            Signal::Samples(s) => s.project(len),
        }
    }
}

impl From<HermiteExpansion> for Signal {
    fn from(h: HermiteExpansion) -> Self {
        Signal::Hermite(h)
    }
}

impl From<SampledSignal> for Signal {
    fn from(s: SampledSignal) -> Self {
        Signal::Samples(s)
    }
}

/// Ordered components `(φ_0, …, φ_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSignal {
    pub components: Vec<Signal>,
}

impl VectorSignal {
    pub fn new(components: Vec<Signal>) -> Result<Self> {
        if components.is_empty() {
            return Err(QtfaError::Input(
                "vector signal needs at least one component".into(),
            ));
        }
        Ok(VectorSignal { components })
    }

    /// Highest window order `n`.
    pub fn order(&self) -> u32 {
        self.components.len() as u32 - 1
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(Signal::norm_sq).sum()
    }

    pub fn component_norms_sq(&self) -> Vec<f64> {
        self.components.iter().map(Signal::norm_sq).collect()
    }
}
