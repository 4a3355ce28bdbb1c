//! Quadrature rules, uniform grids, deterministic summation and a
//! finite-difference Wirtinger derivative.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{QtfaError, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::special::binomial_exact;

/// Nodes per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 32;
/// Smallest node count accepted per dimension.
pub const MIN_NODES: usize = 16;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Quadrature family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureKind {
    GaussLegendre,
    Trapezoid,
}

/// A 1D node/weight list.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    /// `panels` equal panels of `order`-point Gauss–Legendre on `[a, b]`.
    pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let owned;
        let (x, w) = if order == PANEL_ORDER {
            panel_rule()
        } else {
            owned = gauss_legendre(order);
            &owned
        };
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (xi, wi) in x.iter().zip(w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Rule1D { nodes, weights }
    }

    /// `n`-point uniform trapezoid on `[a, b]`, endpoints included.
    pub fn trapezoid(a: f64, b: f64, n: usize) -> Self {
        let grid = UniformGrid {
            start: a,
            end: b,
            n,
        };
        let h = grid.step();
        let nodes = grid.points();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Rule1D { nodes, weights }
    }

    /// About `n` nodes of the given kind; Gauss–Legendre uses 32-node panels once `n > 32`.
    pub fn of_kind(kind: QuadratureKind, a: f64, b: f64, n: usize) -> Self {
        match kind {
            QuadratureKind::Trapezoid => Self::trapezoid(a, b, n),
            QuadratureKind::GaussLegendre if n <= PANEL_ORDER => {
                Self::composite_gauss_legendre(a, b, 1, n)
            }
            QuadratureKind::GaussLegendre => {
                Self::composite_gauss_legendre(a, b, n.div_ceil(PANEL_ORDER), PANEL_ORDER)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<F: Fn(f64) -> Quaternion>(&self, f: F) -> Quaternion {
        let terms: Vec<Quaternion> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x).scale(w))
            .collect();
        pairwise_sum_q(&terms)
    }
}

/// Integration domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Interval {
        a: f64,
        b: f64,
    },
    Rectangle {
        x: (f64, f64),
        y: (f64, f64),
    },
    /// Disc of the given radius about the origin, integrated in polar coordinates.
    Disc {
        radius: f64,
    },
}

/// Quadrature kind, domain and node counts per dimension (radial then angular for a disc).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub kind: QuadratureKind,
    pub domain: Domain,
    pub nodes: Vec<usize>,
}

impl QuadratureSpec {
    pub fn new(kind: QuadratureKind, domain: Domain, nodes: Vec<usize>) -> Result<Self> {
        let s = QuadratureSpec {
            kind,
            domain,
            nodes,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let dims = match self.domain {
            Domain::Interval { a, b } => {
                check_interval(a, b)?;
                1
            }
            Domain::Rectangle { x, y } => {
                check_interval(x.0, x.1)?;
                check_interval(y.0, y.1)?;
                2
            }
            Domain::Disc { radius } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(QtfaError::Input(format!(
                        "disc radius {radius} must be finite and positive"
                    )));
                }
                2
            }
        };
        if self.nodes.len() != dims {
            return Err(QtfaError::Input(format!(
                "expected {dims} node counts, got {}",
                self.nodes.len()
            )));
        }
        if let Some(n) = self.nodes.iter().find(|&&n| n < MIN_NODES) {
            return Err(QtfaError::Input(format!(
                "node count {n} is below {MIN_NODES}"
            )));
        }
        Ok(())
    }

    /// Same domain with every node count doubled.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            kind: self.kind,
            domain: self.domain,
            nodes: self.nodes.iter().map(|n| 2 * n).collect(),
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(QtfaError::Input(format!(
            "interval [{a}, {b}] must be finite and nonempty"
        )));
    }
    Ok(())
}

/// A quadrature value with its node-doubling estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Quaternion,
    /// `|Q(2N) − Q(N)|`.
    pub estimate: f64,
    /// `estimate ≤ tol · max(1, |value|)`.
    pub converged: bool,
}

fn finish(coarse: Quaternion, fine: Quaternion, tol: f64) -> QuadResult {
    let estimate = fine.dist(coarse);
    QuadResult {
        value: fine,
        estimate,
        converged: estimate <= tol * fine.norm().max(1.0),
    }
}

/// Integrates over an interval; the reported value uses the doubled rule.
pub fn integrate_1d<F: Fn(f64) -> Quaternion>(
    f: F,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<QuadResult> {
    spec.validate()?;
    let Domain::Interval { a, b } = spec.domain else {
        return Err(QtfaError::Input(
            "integrate_1d needs an interval domain".into(),
        ));
    };
    let coarse = Rule1D::of_kind(spec.kind, a, b, spec.nodes[0]).apply(&f);
    let fine = Rule1D::of_kind(spec.kind, a, b, 2 * spec.nodes[0]).apply(&f);
    Ok(finish(coarse, fine, tol))
}

fn apply_2d<F: Fn(f64, f64) -> Quaternion>(f: &F, spec: &QuadratureSpec) -> Quaternion {
    match spec.domain {
        Domain::Rectangle { x, y } => {
            let rx = Rule1D::of_kind(spec.kind, x.0, x.1, spec.nodes[0]);
            let ry = Rule1D::of_kind(spec.kind, y.0, y.1, spec.nodes[1]);
            let rows: Vec<Quaternion> = rx
                .nodes
                .iter()
                .zip(&rx.weights)
                .map(|(&u, &wu)| ry.apply(|v| f(u, v)).scale(wu))
                .collect();
            pairwise_sum_q(&rows)
        }
        Domain::Disc { radius } => {
            let polar = PolarRule::new(radius, spec.nodes[0], spec.nodes[1]);
            polar.apply(f)
        }
        Domain::Interval { .. } => unreachable!("validated as two-dimensional"),
    }
}

/// Integrates over a rectangle or disc with area measure `du dv`.
pub fn integrate_2d<F: Fn(f64, f64) -> Quaternion>(
    f: F,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<QuadResult> {
    spec.validate()?;
    if matches!(spec.domain, Domain::Interval { .. }) {
        return Err(QtfaError::Input(
            "integrate_2d needs a rectangle or disc domain".into(),
        ));
    }
    let coarse = apply_2d(&f, spec);
    let fine = apply_2d(&f, &spec.doubled());
    Ok(finish(coarse, fine, tol))
}

/// Gauss–Legendre in the radius times periodic trapezoid in the angle.
#[derive(Clone, Debug)]
pub struct PolarRule {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

impl PolarRule {
    pub fn new(radius: f64, n_radial: usize, n_angular: usize) -> Self {
        let rr = Rule1D::of_kind(QuadratureKind::GaussLegendre, 0.0, radius, n_radial);
        let dth = std::f64::consts::TAU / n_angular as f64;
        let trig: Vec<(f64, f64)> = (0..n_angular).map(|k| (dth * k as f64).sin_cos()).collect();
        let mut points = Vec::with_capacity(rr.len() * n_angular);
        let mut weights = Vec::with_capacity(rr.len() * n_angular);
        for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
            for &(s, c) in &trig {
                points.push((r * c, r * s));
                weights.push(wr * r * dth);
            }
        }
        PolarRule { points, weights }
    }

    pub fn apply<F: Fn(f64, f64) -> Quaternion>(&self, f: F) -> Quaternion {
        let terms: Vec<Quaternion> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(&(u, v), &w)| f(u, v).scale(w))
            .collect();
        pairwise_sum_q(&terms)
    }
}

/// Tolerance classes used by the verification suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub rel_identity: f64,
    pub rel_cross_route: f64,
    pub rel_quadrature: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel_identity: 1e-10,
            rel_cross_route: 1e-6,
            rel_quadrature: 1e-3,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_identity > 0.0
            && self.rel_identity < self.rel_cross_route
            && self.rel_cross_route < self.rel_quadrature;
        if !ok {
            return Err(QtfaError::Input(format!(
                "tolerances must satisfy 0 < identity < cross_route < quadrature, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// `n ≥ 2` equally spaced points from `start` to `end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(start: f64, end: f64, n: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && end > start) || n < 2 {
            return Err(QtfaError::Input(format!(
                "grid [{start}, {end}] with {n} points must be finite, ascending and have at least 2 points"
            )));
        }
        Ok(UniformGrid { start, end, n })
    }

    /// Symmetric grid `[−half, half]`.
    pub fn symmetric(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, n)
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.end
        } else {
            self.start + self.step() * i as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n)
            .map(|i| {
                if i == 0 || i + 1 == self.n {
                    0.5 * h
                } else {
                    h
                }
            })
            .collect()
    }
}

/// Pairwise (cascade) summation in a fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_q(xs: &[Quaternion]) -> Quaternion {
    if xs.len() <= 8 {
        return xs.iter().copied().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_q(&xs[..mid]) + pairwise_sum_q(&xs[mid..])
}

struct Stencil {
    offsets: &'static [i32],
    coeffs: &'static [f64],
}

const STENCILS: [Stencil; 4] = [
    Stencil {
        offsets: &[0],
        coeffs: &[1.0],
    },
    Stencil {
        offsets: &[-2, -1, 1, 2],
        coeffs: &[1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0],
    },
    Stencil {
        offsets: &[-2, -1, 0, 1, 2],
        coeffs: &[
            -1.0 / 12.0,
            16.0 / 12.0,
            -30.0 / 12.0,
            16.0 / 12.0,
            -1.0 / 12.0,
        ],
    },
    Stencil {
        offsets: &[-3, -2, -1, 1, 2, 3],
        coeffs: &[0.125, -1.0, 1.625, -1.625, 1.0, -0.125],
    },
];

/// Base step per derivative order; multiplied by `1 + |z|`.
pub const WIRTINGER_STEPS: [f64; 4] = [0.0, 1e-4, 3e-4, 6e-4];

/// `∂_z^k f` at `z = u + I v` on the slice `C_I`, with `∂_z = ½(∂_u − I ∂_v)` and `I` acting from the left.
///
/// Fourth-order central differences; `k ≤ 3`.
pub fn wirtinger_derivative<F>(f: F, q: Quaternion, unit: ImaginaryUnit, k: u32) -> Quaternion
where
    F: Fn(Quaternion) -> Quaternion,
{
    assert!(k <= 3, "wirtinger_derivative supports k <= 3");
    if k == 0 {
        return f(q);
    }
    let z = unit.project(q);
    let h = WIRTINGER_STEPS[k as usize] * (1.0 + z.norm());
    let minus_i = -unit.as_quaternion();
    let mut total = Quaternion::ZERO;
    let mut left = Quaternion::ONE;
    for j in 0..=k {
        let su = &STENCILS[(k - j) as usize];
        let sv = &STENCILS[j as usize];
        let mut mixed = Quaternion::ZERO;
        for (&ou, &cu) in su.offsets.iter().zip(su.coeffs) {
            for (&ov, &cv) in sv.offsets.iter().zip(sv.coeffs) {
                let p = unit.point(z.re + ou as f64 * h, z.im + ov as f64 * h);
                mixed += f(p).scale(cu * cv);
            }
        }
        let c = binomial_exact(k as u64, j as u64).expect("small binomial") as f64;
        total += (left * mixed).scale(c);
        left = left * minus_i;
    }
    total.scale(0.5f64.powi(k as i32) / h.powi(k as i32))
}

/// Complex-valued form of [`wirtinger_derivative`] on the standard plane.
pub fn wirtinger_derivative_c<F>(f: F, z: Complex64, k: u32) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let u = ImaginaryUnit::I;
    let d = wirtinger_derivative(|q| u.lift(f(u.project(q))), u.lift(z), u, k);
    u.project(d)
}
