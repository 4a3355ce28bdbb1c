//! Seeded verification suites.
//!
//! Each suite evaluates a family of identities with independent routes and
//! records one [`Case`] per check. Reports are deterministic for a fixed seed
//! and tolerance set.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bargmann::{
    fock_inner, true_fock_kernel, true_poly_bargmann, true_poly_bargmann_closed, CoeffEvaluator,
    FockQuadrature, Route,
};
use crate::error::{QtfaError, Result};
use crate::hermite::{
    complex_hermite, complex_hermite_c, complex_hermite_norm_sq, generating_partial_sum,
    hermite_fn, hermite_norm_sq, hermite_poly, hermite_poly_deriv, hermite_poly_explicit,
    hermite_poly_unweighted_sum, laguerre, window, NU,
};
use crate::numerics::{
    pairwise_sum, wirtinger_derivative, wirtinger_derivative_c, PolarRule, QuadratureKind, Rule1D,
    TolerancePolicy, UniformGrid,
};
use crate::qstft::{
    compute_field, compute_full_field, default_grid, full_adjoint, full_gabor_kernel_field,
    full_qstft, gabor_kernel_field, gabor_reproduce, lieb_lp, moyal_inner, moyal_inner_polarized,
    pointwise_bound, reconstruct_many, true_qstft, uncertainty_check, Region, TimeFreqField,
};
use crate::quaternion::{slice_power, ImaginaryUnit, Quaternion};
use crate::signal::{HermiteExpansion, Signal, VectorSignal};
use crate::special::{factorial, gamma_fn};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hermite,
    ComplexHermite,
    Bargmann,
    Moyal,
    Reconstruction,
    Kernel,
    Lieb,
    Uncertainty,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Hermite,
        Suite::ComplexHermite,
        Suite::Bargmann,
        Suite::Moyal,
        Suite::Reconstruction,
        Suite::Kernel,
        Suite::Lieb,
        Suite::Uncertainty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::ComplexHermite => "complex-hermite",
            Suite::Bargmann => "bargmann",
            Suite::Moyal => "moyal",
            Suite::Reconstruction => "reconstruction",
            Suite::Kernel => "kernel",
            Suite::Lieb => "lieb",
            Suite::Uncertainty => "uncertainty",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = QtfaError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| QtfaError::Input(format!("unknown suite '{s}'")))
    }
}

/// How `measured` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `|m − e| ≤ tol · |e|`.
    Rel,
    /// `|m − e| ≤ tol`.
    Abs,
    /// `m ≤ e + tol`.
    Le,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub identity: String,
    pub anchor: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub metric: Metric,
    pub pass: bool,
}

impl Case {
    fn new(
        identity: String,
        anchor: &str,
        measured: f64,
        expected: f64,
        tolerance: f64,
        metric: Metric,
    ) -> Self {
        let pass = match metric {
            Metric::Rel => (measured - expected).abs() <= tolerance * expected.abs(),
            Metric::Abs => (measured - expected).abs() <= tolerance,
            Metric::Le => measured <= expected + tolerance,
        };
        Case {
            identity,
            anchor: anchor.to_string(),
            measured,
            expected,
            tolerance,
            metric,
            pass: pass && measured.is_finite(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub cases: Vec<Case>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }

    /// Fixed-width human-readable table.
    pub fn table(&self) -> String {
        let mut s = format!("suite {} seed {}\n", self.suite, self.seed);
        s.push_str(&format!(
            "{:<6} {:<58} {:>13} {:>13} {:>9} {:<3}\n",
            "status", "identity", "measured", "expected", "tol", "cmp"
        ));
        for c in &self.cases {
            let cmp = match c.metric {
                Metric::Rel => "rel",
                Metric::Abs => "abs",
                Metric::Le => "le",
            };
            s.push_str(&format!(
                "{:<6} {:<58} {:>13.6e} {:>13.6e} {:>9.1e} {:<3}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.identity,
                c.measured,
                c.expected,
                c.tolerance,
                cmp
            ));
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s.push_str(&format!(
            "{} cases, {} failed: {}\n",
            self.cases.len(),
            self.failures(),
            if self.pass { "PASS" } else { "FAIL" }
        ));
        s
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

/// Named tolerance classes, overridable with `name=value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub policy: TolerancePolicy,
    pub fock: f64,
    pub finite_difference: f64,
    pub operator: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            policy: TolerancePolicy::default(),
            fock: 1e-4,
            finite_difference: 1e-6,
            operator: 1e-5,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 6] = [
        "identity",
        "cross_route",
        "quadrature",
        "fock",
        "finite_difference",
        "operator",
    ];

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(QtfaError::Input(format!(
                "tolerance {name} must be positive, got {value}"
            )));
        }
        match name {
            "identity" => self.policy.rel_identity = value,
            "cross_route" => self.policy.rel_cross_route = value,
            "quadrature" => self.policy.rel_quadrature = value,
            "fock" => self.fock = value,
            "finite_difference" => self.finite_difference = value,
            "operator" => self.operator = value,
            _ => {
                return Err(QtfaError::Input(format!(
                    "unknown tolerance '{name}'; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        }
        self.policy.validate()
    }

    /// Parses `name=value`.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec.split_once('=').ok_or_else(|| {
            QtfaError::Input(format!("tolerance override '{spec}' is not name=value"))
        })?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| QtfaError::Input(format!("bad tolerance value '{value}'")))?;
        self.set(name.trim(), v)
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run(suite: Suite, seed: u64, tol: &Tolerances) -> Result<VerifyReport> {
    tol.policy.validate()?;
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    for s in suites {
        let mut ctx = Ctx {
            rng: ChaCha8Rng::seed_from_u64(seed ^ suite_salt(s)),
            tol: *tol,
            cases: Vec::new(),
            notes: Vec::new(),
        };
        match s {
            Suite::Hermite => hermite_suite(&mut ctx),
            Suite::ComplexHermite => complex_hermite_suite(&mut ctx),
            Suite::Bargmann => bargmann_suite(&mut ctx)?,
            Suite::Moyal => moyal_suite(&mut ctx)?,
            Suite::Reconstruction => reconstruction_suite(&mut ctx)?,
            Suite::Kernel => kernel_suite(&mut ctx)?,
            Suite::Lieb => lieb_suite(&mut ctx)?,
            Suite::Uncertainty => uncertainty_suite(&mut ctx)?,
            Suite::All => unreachable!(),
        }
        let prefix = if suite == Suite::All {
            format!("{}: ", s.name())
        } else {
            String::new()
        };
        cases.extend(ctx.cases.into_iter().map(|mut c| {
            c.identity = format!("{prefix}{}", c.identity);
            c
        }));
        notes.extend(ctx.notes.into_iter().map(|n| format!("{prefix}{n}")));
    }
    Ok(VerifyReport {
        suite: suite.name().to_string(),
        seed,
        pass: cases.iter().all(|c| c.pass),
        cases,
        notes,
    })
}

fn suite_salt(s: Suite) -> u64 {
    s.name().bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

struct Ctx {
    rng: ChaCha8Rng,
    tol: Tolerances,
    cases: Vec<Case>,
    notes: Vec<String>,
}

impl Ctx {
    fn push(
        &mut self,
        identity: String,
        anchor: &str,
        measured: f64,
        expected: f64,
        tolerance: f64,
        metric: Metric,
    ) {
        self.cases.push(Case::new(
            identity, anchor, measured, expected, tolerance, metric,
        ));
    }

    /// An error quantity that must not exceed `tol`.
    fn error(&mut self, identity: String, anchor: &str, err: f64, tol: f64) {
        self.push(identity, anchor, err, 0.0, tol, Metric::Abs);
    }

    fn uniform(&mut self, a: f64, b: f64) -> f64 {
        self.rng.gen_range(a..b)
    }

    fn quaternion(&mut self) -> Quaternion {
        Quaternion::new(
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
        )
    }

    fn unit(&mut self) -> ImaginaryUnit {
        loop {
            let (x, y, z) = (
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
            );
            let r = (x * x + y * y + z * z).sqrt();
            if (0.1..=1.0).contains(&r) {
                return ImaginaryUnit::from_direction(x, y, z).expect("nonzero direction");
            }
        }
    }

    /// Unit-norm expansion with `k` random coefficients.
    fn expansion(&mut self, k: usize) -> HermiteExpansion {
        let coeffs = (0..k).map(|_| self.quaternion()).collect();
        HermiteExpansion::new(coeffs)
            .and_then(|h| h.normalized())
            .expect("random coefficients are valid")
    }

    fn signal(&mut self, k: usize) -> Signal {
        Signal::Hermite(self.expansion(k))
    }
}

fn rel_err(a: Quaternion, b: Quaternion) -> f64 {
    a.dist(b) / b.norm().max(f64::MIN_POSITIVE)
}

fn basis(k: usize) -> Signal {
    Signal::Hermite(HermiteExpansion::basis(k, Quaternion::ONE))
}

fn hermite_suite(ctx: &mut Ctx) {
    let tol = ctx.tol;
    for nu in [1.0, NU] {
        for n in 0..=12u32 {
            let mut worst: f64 = 0.0;
            for _ in 0..8 {
                let x = ctx.uniform(-1.0, 1.0);
                let (a, b) = (hermite_poly(n, nu, x), hermite_poly_explicit(n, nu, x));
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
            }
            ctx.error(
                format!("explicit sum vs recurrence, nu={nu:.4}, n={n}"),
                "weighted Hermite recurrence",
                worst,
                tol.policy.rel_identity,
            );
        }
    }
    let literal = hermite_poly_unweighted_sum(2, NU, 0.0);
    let weighted = hermite_poly(2, NU, 0.0);
    ctx.notes.push(format!(
        "the explicit sum without the nu^m weight gives H_2(0) = {literal:?} at nu = 2pi, the recurrence gives {weighted:?}; the weighted sum is used"
    ));

    for nu in [1.0, NU] {
        for n in 1..=10u32 {
            let h = 1e-3 / (2.0 * nu * (n as f64 + 1.0)).sqrt();
            let mut worst: f64 = 0.0;
            for _ in 0..8 {
                let x = ctx.uniform(-1.5, 1.5);
                let f = |t: f64| hermite_poly(n, nu, t);
                let fd = (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h))
                    / (12.0 * h);
                let exact = hermite_poly_deriv(n, nu, x);
                let scale = exact.abs().max(1e-2 * hermite_poly_deriv(n, nu, 1.5).abs());
                worst = worst.max((fd - exact).abs() / scale);
            }
            ctx.error(
                format!("derivative identity vs finite difference, nu={nu:.4}, n={n}"),
                "Hermite derivative identity",
                worst,
                tol.finite_difference,
            );
        }
    }

    for nu in [1.0, NU] {
        for n in 0..=10u32 {
            let t = (8.0 + (2.0 * n as f64 + 1.0).sqrt()) / nu.sqrt();
            let rule = Rule1D::of_kind(QuadratureKind::GaussLegendre, -t, t, 512);
            let terms: Vec<f64> = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * hermite_fn(n, nu, x).powi(2))
                .collect();
            ctx.push(
                format!("norm of h_n by quadrature, nu={nu:.4}, n={n}"),
                "Hermite function norm",
                pairwise_sum(&terms),
                hermite_norm_sq(n, nu),
                1e-6,
                Metric::Rel,
            );
        }
    }

    let rule = Rule1D::of_kind(QuadratureKind::GaussLegendre, -9.0, 9.0, 512);
    let table: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&x| (0..=10).map(|n| window(n, x)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for j in 0..=10usize {
        for k in 0..=10usize {
            let terms: Vec<f64> = table
                .iter()
                .zip(&rule.weights)
                .map(|(row, w)| w * row[j] * row[k])
                .collect();
            let want = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((pairwise_sum(&terms) - want).abs());
        }
    }
    ctx.error(
        "orthonormality of psi_0..psi_10".into(),
        "normalized Hermite functions",
        worst,
        tol.policy.rel_identity,
    );

    let mut worst: f64 = 0.0;
    for _ in 0..6 {
        let x = ctx.uniform(-1.0, 1.0);
        let lambda = ctx.uniform(-0.3, 0.3);
        let exact = (2.0 * NU * x * lambda - NU * lambda * lambda).exp();
        worst = worst.max((generating_partial_sum(40, NU, x, lambda) - exact).abs());
    }
    ctx.error(
        "generating function partial sum, N=40".into(),
        "Hermite generating function",
        worst,
        1e-8,
    );

    let rule = Rule1D::of_kind(QuadratureKind::GaussLegendre, 0.0, 120.0, 1024);
    for gamma in [0.0, 1.0, 2.0] {
        let mut worst: f64 = 0.0;
        for j in 0..=4u32 {
            for k in 0..=4u32 {
                let terms: Vec<f64> = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&t, &w)| {
                        w * laguerre(j, gamma, t)
                            * laguerre(k, gamma, t)
                            * t.powf(gamma)
                            * (-t).exp()
                    })
                    .collect();
                let nj = gamma_fn(gamma + j as f64 + 1.0) / factorial(j);
                let nk = gamma_fn(gamma + k as f64 + 1.0) / factorial(k);
                let want = if j == k { nj } else { 0.0 };
                worst = worst.max((pairwise_sum(&terms) - want).abs() / (nj * nk).sqrt());
            }
        }
        ctx.error(
            format!("Laguerre orthogonality, gamma={gamma}"),
            "generalized Laguerre polynomials",
            worst,
            tol.policy.rel_identity,
        );
    }
}

const CH_MAX: u32 = 4;

fn complex_hermite_suite(ctx: &mut Ctx) {
    let tol = ctx.tol;
    let dim = ((CH_MAX + 1) * (CH_MAX + 1)) as usize;
    let index = |m: u32, p: u32| (m * (CH_MAX + 1) + p) as usize;
    for alpha in [1.0, NU] {
        let radius = if alpha == 1.0 { 10.0 } else { 5.0 };
        let gram = |n_radial: usize, n_angular: usize| -> Vec<Complex64> {
            let rule = PolarRule::new(radius, n_radial, n_angular);
            let chunk = 4096;
            let partials: Vec<Vec<Complex64>> = rule
                .points
                .par_chunks(chunk)
                .zip(rule.weights.par_chunks(chunk))
                .map(|(pts, ws)| {
                    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
                    let mut vals = vec![Complex64::new(0.0, 0.0); dim];
                    for (&(u, v), &w) in pts.iter().zip(ws) {
                        let z = Complex64::new(u, v);
                        for m in 0..=CH_MAX {
                            for p in 0..=CH_MAX {
                                vals[index(m, p)] = complex_hermite_c(m, p, alpha, z);
                            }
                        }
                        let weight = w * (-alpha * z.norm_sqr()).exp();
                        for a in 0..dim {
                            for b in 0..dim {
                                acc[a * dim + b] += vals[a] * vals[b].conj() * weight;
                            }
                        }
                    }
                    acc
                })
                .collect();
            let mut total = vec![Complex64::new(0.0, 0.0); dim * dim];
            for part in partials {
                for (t, v) in total.iter_mut().zip(part) {
                    *t += v;
                }
            }
            total
        };
        let coarse = gram(400, 256);
        let fine = gram(800, 512);
        let mut diag: f64 = 0.0;
        let mut off: f64 = 0.0;
        let mut estimate: f64 = 0.0;
        for m in 0..=CH_MAX {
            for p in 0..=CH_MAX {
                let a = index(m, p);
                let na = complex_hermite_norm_sq(m, p, alpha);
                for mm in 0..=CH_MAX {
                    for pp in 0..=CH_MAX {
                        let b = index(mm, pp);
                        let nb = complex_hermite_norm_sq(mm, pp, alpha);
                        let scale = (na * nb).sqrt();
                        let g = fine[a * dim + b];
                        estimate = estimate.max((g - coarse[a * dim + b]).norm() / scale);
                        if a == b {
                            diag = diag.max((g - na).norm() / na);
                        } else {
                            off = off.max(g.norm() / scale);
                        }
                    }
                }
            }
        }
        ctx.error(
            format!("diagonal norms, alpha={alpha:.4}"),
            "complex Hermite orthogonality",
            diag,
            tol.fock,
        );
        ctx.error(
            format!("off-diagonal inner products, alpha={alpha:.4}"),
            "complex Hermite orthogonality",
            off,
            tol.fock,
        );
        ctx.error(
            format!("node-doubling estimate, alpha={alpha:.4}"),
            "quadrature policy",
            estimate,
            tol.fock,
        );
    }

    let mut worst: f64 = 0.0;
    for m in 0..=CH_MAX {
        for p in 0..=CH_MAX {
            let want = factorial(m) * factorial(p) * NU.powi((p + m) as i32) / 2.0;
            worst = worst.max((complex_hermite_norm_sq(m, p, NU) - want).abs() / want);
        }
    }
    ctx.error(
        "alpha=2pi norm equals m!p!(2pi)^(p+m)/2".into(),
        "complex Hermite norm",
        worst,
        tol.policy.rel_identity,
    );

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let unit = ctx.unit();
        let (x, y) = (ctx.uniform(-1.5, 1.5), ctx.uniform(-1.5, 1.5));
        let q = unit.point(x, y);
        for m in 0..=CH_MAX {
            for p in 0..=CH_MAX {
                let c = unit.lift(complex_hermite_c(m, p, NU, Complex64::new(x, y)));
                worst = worst.max(complex_hermite(m, p, NU, q).dist(c) / c.norm().max(1.0));
            }
        }
    }
    ctx.error(
        "quaternion form matches slice complex form".into(),
        "slice lift",
        worst,
        1e-12,
    );
}

fn bargmann_suite(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.tol;

    let phi = ctx.expansion(8);
    let signal = Signal::Hermite(phi.clone());
    let units = [ctx.unit(), ctx.unit()];
    let points: Vec<Quaternion> = (0..20)
        .map(|i| {
            let r = ctx.uniform(0.0, 1.5);
            let a = ctx.uniform(0.0, 2.0 * PI);
            units[i % 2].point(r * a.cos(), r * a.sin())
        })
        .collect();
    for n in 0..=3u32 {
        let mut worst: f64 = 0.0;
        for &q in &points {
            let a = true_poly_bargmann(&signal, n, q, Route::Coefficient)?;
            let b = true_poly_bargmann_closed(&signal, n, q)?;
            worst = worst.max(a.dist(b) / a.norm().max(1.0));
        }
        ctx.error(
            format!("coefficient vs closed route, n={n}, 20 points"),
            "dual-route equality",
            worst,
            tol.policy.rel_cross_route,
        );
    }

    let mut worst: f64 = 0.0;
    for k in 0..=5usize {
        for &q in points.iter().take(6) {
            let want = slice_power(q, k as u32)
                .scale(SQRT_2 * NU.powf(0.5 * k as f64) / factorial(k as u32).sqrt());
            let got = true_poly_bargmann_closed(&basis(k), 0, q)?;
            worst = worst.max(got.dist(want) / want.norm().max(1.0));
        }
    }
    ctx.error(
        "Segal-Bargmann images of psi_0..psi_5".into(),
        "normalized monomials",
        worst,
        tol.policy.rel_cross_route,
    );

    let mut iso_est: f64 = 0.0;
    for i in 0..10 {
        let n = (i % 4) as u32;
        let h = ctx.expansion(8);
        let unit = ctx.unit();
        let ev = CoeffEvaluator::new(&h, n);
        let r = fock_inner(
            |q| ev.eval(q),
            |q| ev.eval(q),
            unit,
            FockQuadrature::for_orders(n, h.len()),
            tol.fock,
        );
        iso_est = iso_est.max(r.estimate);
        ctx.push(
            format!("Fock norm equals signal norm, signal {i}, n={n}"),
            "true-poly isometry",
            r.value.w,
            h.norm_sq(),
            tol.fock,
            Metric::Rel,
        );
    }
    ctx.error(
        "isometry node-doubling estimate".into(),
        "quadrature policy",
        iso_est,
        tol.fock,
    );

    for (j, m) in [(0u32, 1u32), (0, 2), (1, 3), (2, 3)] {
        let (a, b) = (ctx.expansion(6), ctx.expansion(6));
        let unit = ctx.unit();
        let (ea, eb) = (CoeffEvaluator::new(&a, j), CoeffEvaluator::new(&b, m));
        let r = fock_inner(
            |q| ea.eval(q),
            |q| eb.eval(q),
            unit,
            FockQuadrature::for_orders(m, 6),
            tol.fock,
        );
        ctx.error(
            format!("cross-order inner product, orders {j} and {m}"),
            "cross-order orthogonality",
            r.value.norm(),
            tol.fock,
        );
    }

    {
        let (a, b) = (ctx.expansion(6), ctx.expansion(6));
        let unit = ctx.unit();
        let (ea, eb) = (CoeffEvaluator::new(&a, 0), CoeffEvaluator::new(&b, 0));
        let r = fock_inner(
            |q| ea.eval(q),
            |q| eb.eval(q),
            unit,
            FockQuadrature::for_orders(0, 6),
            tol.fock,
        );
        let want: Quaternion = b
            .coeffs()
            .iter()
            .zip(a.coeffs())
            .map(|(x, y)| x.conj() * *y)
            .sum();
        ctx.error(
            "Segal-Bargmann preserves inner products".into(),
            "unitarity",
            r.value.dist(want),
            tol.fock,
        );
    }

    for n in 1..=2u32 {
        let comps: Vec<HermiteExpansion> = (0..=n).map(|_| ctx.expansion(4)).collect();
        let evs: Vec<CoeffEvaluator> = comps
            .iter()
            .enumerate()
            .map(|(j, h)| CoeffEvaluator::new(h, j as u32))
            .collect();
        let full = |q: Quaternion| evs.iter().map(|e| e.eval(q)).sum::<Quaternion>();
        let unit = ctx.unit();
        let r = fock_inner(full, full, unit, FockQuadrature::for_orders(n, 4), tol.fock);
        ctx.push(
            format!("full-poly Fock norm equals sum of component norms, n={n}"),
            "full-poly isometry",
            r.value.w,
            (n + 1) as f64,
            tol.fock,
            Metric::Rel,
        );
    }

    let grid = UniformGrid::symmetric(2.0, 20)?;
    let mut violations = 0usize;
    let vphi: Vec<HermiteExpansion> = (0..3).map(|_| ctx.expansion(5)).collect();
    let vnorm: f64 = vphi.iter().map(|h| h.norm_sq()).sum::<f64>().sqrt();
    let evs: Vec<CoeffEvaluator> = vphi
        .iter()
        .enumerate()
        .map(|(j, h)| CoeffEvaluator::new(h, j as u32))
        .collect();
    for unit in units {
        for x in grid.points() {
            for y in grid.points() {
                let q = unit.point(x, y);
                let growth = (PI * q.norm_sqr()).exp();
                for (j, e) in evs.iter().enumerate() {
                    if e.eval(q).norm() > SQRT_2 * growth * vphi[j].norm_sq().sqrt() * (1.0 + 1e-12)
                    {
                        violations += 1;
                    }
                }
                let total: Quaternion = evs.iter().map(|e| e.eval(q)).sum();
                if total.norm() > (2.0 * 3.0f64).sqrt() * growth * vnorm * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    ctx.push(
        "growth bound violations on 20x20 grids".into(),
        "pointwise growth bounds",
        violations as f64,
        0.0,
        0.0,
        Metric::Le,
    );

    for k in 0..=3u32 {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let z = Complex64::new(ctx.uniform(-0.8, 0.8), ctx.uniform(-0.8, 0.8));
            let x = Complex64::new(ctx.uniform(-0.8, 0.8), ctx.uniform(-0.3, 0.3));
            let g = move |z: Complex64| (-PI * (z * z + x * x) + 2.0 * PI * SQRT_2 * z * x).exp();
            let mut tower = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                let c = crate::special::binomial_exact(k as u64, j as u64).expect("small") as f64;
                tower += (-2.0 * PI * z.conj()).powu(j) * wirtinger_derivative_c(g, z, k - j) * c;
            }
            let arg = (z + z.conj()) / SQRT_2 - x;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let closed = g(z) * hermite_poly_c(k, arg) * sign * 2f64.powf(-0.5 * k as f64);
            worst = worst.max((tower - closed).norm() / closed.norm().max(1e-3));
        }
        ctx.error(
            format!("operator tower vs Hermite closed form, k={k}"),
            "Gaussian operator identity",
            worst,
            tol.operator,
        );
    }

    {
        let h = ctx.expansion(6);
        let unit = ctx.unit();
        let b0 = CoeffEvaluator::new(&h, 0);
        let b1 = CoeffEvaluator::new(&h, 1);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let q = unit.point(ctx.uniform(-1.0, 1.0), ctx.uniform(-1.0, 1.0));
            let ds = wirtinger_derivative(|p| b0.eval(p), q, unit, 1);
            let formed = (q.conj().scale(NU) * b0.eval(q) - ds).scale(1.0 / NU.sqrt());
            worst = worst.max(rel_err(formed, b1.eval(q)));
        }
        ctx.error(
            "order-two transform from slice derivative".into(),
            "derivative form",
            worst,
            tol.operator,
        );
    }

    {
        let unit = ctx.unit();
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let q = unit.point(ctx.uniform(-1.0, 1.0), ctx.uniform(-1.0, 1.0));
            let f = |p: Quaternion| Quaternion::real((-NU * p.norm_sqr()).exp());
            let want = q.conj().scale(-NU * (-NU * q.norm_sqr()).exp());
            worst = worst.max(rel_err(wirtinger_derivative(f, q, unit, 1), want));
        }
        ctx.error(
            "slice derivative of the Gaussian weight".into(),
            "Gaussian weight derivative",
            worst,
            tol.finite_difference,
        );
    }

    for k in 1..=3u32 {
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let unit = ctx.unit();
            let coeffs: Vec<Quaternion> = (0..5).map(|_| ctx.quaternion()).collect();
            let poly = |p: Quaternion| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, c)| slice_power(p, m as u32) * *c)
                    .sum::<Quaternion>()
            };
            let q = unit.point(ctx.uniform(-1.0, 1.0), ctx.uniform(-1.0, 1.0));
            let want: Quaternion = coeffs
                .iter()
                .enumerate()
                .skip(k as usize)
                .map(|(m, c)| {
                    let falling: f64 = (0..k).map(|i| (m as u32 - i) as f64).product();
                    slice_power(q, m as u32 - k).scale(falling) * *c
                })
                .sum();
            worst =
                worst.max(wirtinger_derivative(poly, q, unit, k).dist(want) / want.norm().max(1.0));
        }
        ctx.error(
            format!("slice derivative of polynomials, k={k}"),
            "derivative oracle",
            worst,
            tol.finite_difference,
        );
    }
    Ok(())
}

/// `H_k^{2π}` at a complex argument.
fn hermite_poly_c(k: u32, y: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if k == 0 {
        return prev;
    }
    let mut cur = y * 2.0 * NU;
    for n in 1..k {
        let next = y * 2.0 * NU * cur - prev * (2.0 * n as f64 * NU);
        prev = cur;
        cur = next;
    }
    cur
}

fn field(phi: &Signal, n: u32, k: usize, unit: ImaginaryUnit) -> Result<TimeFreqField> {
    let g = default_grid(n, k);
    compute_field(phi, n, g, g, unit)
}

fn moyal_suite(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.tol;
    for n in 0..=3u32 {
        let phi = ctx.signal(4);
        let unit = ctx.unit();
        let f = field(&phi, n, 4, unit)?;
        let m = moyal_inner(&f, &f)?;
        ctx.push(
            format!("squared field norm of unit signal, n={n}"),
            "Moyal identity",
            m.w,
            2.0,
            tol.policy.rel_quadrature,
            Metric::Abs,
        );
    }
    {
        let unit = ctx.unit();
        let f = field(&basis(0), 2, 2, unit)?;
        let g = field(&basis(1), 2, 2, unit)?;
        ctx.error(
            "fields of orthogonal signals, n=2".into(),
            "Moyal identity",
            moyal_inner(&f, &g)?.norm(),
            tol.policy.rel_quadrature,
        );
    }
    {
        let (a, b) = (ctx.expansion(4), ctx.expansion(4));
        let unit = ctx.unit();
        let n = 1;
        let fa = field(&Signal::Hermite(a.clone()), n, 4, unit)?;
        let fb = field(&Signal::Hermite(b.clone()), n, 4, unit)?;
        let direct = moyal_inner(&fa, &fb)?;
        let polar = moyal_inner_polarized(&fa, &fb)?;
        ctx.error(
            "polarization reproduces the direct inner product".into(),
            "polarization identity",
            polar.dist(direct) / direct.norm().max(1.0),
            tol.policy.rel_cross_route,
        );
        let want: Quaternion = b
            .coeffs()
            .iter()
            .zip(a.coeffs())
            .map(|(x, y)| x.conj() * *y)
            .sum::<Quaternion>()
            .scale(2.0);
        ctx.error(
            "field inner product is twice the signal inner product".into(),
            "Moyal identity",
            direct.dist(want),
            tol.policy.rel_quadrature,
        );
    }
    for n in 0..=3u32 {
        let comps: Vec<Signal> = (0..=n).map(|_| ctx.signal(3)).collect();
        let unit = ctx.unit();
        let g = default_grid(n, 3);
        let f = compute_full_field(&VectorSignal::new(comps)?, g, g, unit)?;
        let m = moyal_inner(&f, &f)?;
        ctx.push(
            format!("full-poly squared norm with unit components, n={n}"),
            "full-poly Moyal identity",
            m.w,
            2.0 * (n + 1) as f64,
            tol.policy.rel_quadrature,
            Metric::Abs,
        );
    }
    Ok(())
}

fn ys() -> Vec<f64> {
    (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect()
}

fn max_dist(a: &[Quaternion], b: impl Fn(f64) -> Quaternion, ys: &[f64]) -> f64 {
    a.iter()
        .zip(ys)
        .map(|(v, &y)| v.dist(b(y)))
        .fold(0.0, f64::max)
}

fn reconstruction_suite(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.tol.policy.rel_quadrature;
    let ys = ys();
    let unit = ctx.unit();
    let f = field(&basis(0), 0, 1, unit)?;
    let rec = reconstruct_many(&f, 0, &ys)?;
    ctx.error(
        "round trip of psi_0, n=0".into(),
        "inversion formula",
        max_dist(&rec, |y| Quaternion::real(window(0, y)), &ys),
        tol,
    );

    for n in 1..=3u32 {
        let h = ctx.expansion(5);
        let unit = ctx.unit();
        let f = field(&Signal::Hermite(h.clone()), n, 5, unit)?;
        let rec = reconstruct_many(&f, n, &ys)?;
        ctx.error(
            format!("round trip of a random signal, n={n}"),
            "inversion formula",
            max_dist(&rec, |y| h.eval(y), &ys),
            tol,
        );
        let adj: Vec<Quaternion> = rec.iter().map(|v| v.scale(2.0)).collect();
        ctx.error(
            format!("adjoint of the transform is twice the identity, n={n}"),
            "adjoint identity",
            max_dist(&adj, |y| h.eval(y).scale(2.0), &ys),
            tol,
        );
    }

    for n in 0..=2u32 {
        let comps: Vec<HermiteExpansion> = (0..=n).map(|_| ctx.expansion(3)).collect();
        let unit = ctx.unit();
        let g = default_grid(n, 3);
        let vphi = VectorSignal::new(comps.iter().cloned().map(Signal::Hermite).collect())?;
        let f = compute_full_field(&vphi, g, g, unit)?;
        let mut worst: f64 = 0.0;
        for &y in ys.iter().step_by(4) {
            for (j, v) in full_adjoint(&f, n, y)?.into_iter().enumerate() {
                worst = worst.max(v.dist(comps[j].eval(y).scale(2.0)));
            }
        }
        ctx.error(
            format!("full-poly adjoint componentwise, n={n}"),
            "full-poly adjoint identity",
            worst,
            tol,
        );
    }

    let g = default_grid(1, 1);
    let zero = TimeFreqField::zeros(g, g, ImaginaryUnit::I, 1);
    let rec = reconstruct_many(&zero, 1, &ys)?;
    ctx.error(
        "zero field reconstructs to zero".into(),
        "linearity",
        rec.iter().map(|v| v.norm()).fold(0.0, f64::max),
        0.0,
    );
    Ok(())
}

fn kernel_suite(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.tol;
    let mut est: f64 = 0.0;
    for n in 0..=2u32 {
        for k in 0..=4usize {
            let a = ctx.quaternion();
            let h = HermiteExpansion::basis(k, a);
            let unit = ctx.unit();
            let r = unit.point(ctx.uniform(-0.55, 0.55), ctx.uniform(-0.55, 0.55));
            let ev = CoeffEvaluator::new(&h, n);
            let res = fock_inner(
                |q| ev.eval(q),
                |q| true_fock_kernel(n, q, r),
                unit,
                FockQuadrature::for_orders(n, k + 1),
                tol.fock,
            );
            est = est.max(res.estimate);
            let want = ev.eval(r);
            ctx.error(
                format!("Fock kernel reproduces order-{} image of psi_{k}", n + 1),
                "reproducing kernel",
                res.value.dist(want) / want.norm().max(1.0),
                tol.fock,
            );
        }
    }
    ctx.error(
        "reproducing node-doubling estimate".into(),
        "quadrature policy",
        est,
        tol.fock,
    );

    let mut worst: f64 = 0.0;
    for n in 0..=4u32 {
        for _ in 0..4 {
            let q = ctx.quaternion().scale(1.5);
            let d = true_fock_kernel(n, q, q);
            let want = 2.0 * (NU * q.norm_sqr()).exp();
            worst = worst.max(d.dist(Quaternion::real(want)) / want);
        }
    }
    ctx.error(
        "kernel diagonal equals 2 exp(2pi|q|^2)".into(),
        "kernel diagonal",
        worst,
        tol.policy.rel_identity,
    );

    let mut worst: f64 = 0.0;
    for _ in 0..6 {
        let q = ctx.quaternion();
        let r = ctx.quaternion();
        let mut series = Quaternion::ZERO;
        let mut coef = 1.0;
        for m in 0..90u32 {
            series += slice_power(q, m) * slice_power(r.conj(), m).scale(coef);
            coef *= NU / (m + 1) as f64;
        }
        series = series.scale(2.0);
        worst = worst.max(rel_err(true_fock_kernel(0, q, r), series));
    }
    ctx.error(
        "order-one kernel off-slice vs star exponential series".into(),
        "star exponential kernel",
        worst,
        tol.policy.rel_identity,
    );

    for n in 0..=2u32 {
        let phi = ctx.signal(4);
        let unit = ctx.unit();
        let f = field(&phi, n, 4, unit)?;
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let (xp, wp) = (ctx.uniform(-1.5, 1.5), ctx.uniform(-1.5, 1.5));
            let kernel = gabor_kernel_field(n, xp, wp, f.x_grid, f.omega_grid, unit);
            let want = true_qstft(&phi, n, xp, wp, unit)?;
            worst = worst.max(gabor_reproduce(&f, &kernel).dist(want));
        }
        ctx.error(
            format!("Gabor kernel reproduces the field, n={n}"),
            "time-frequency reproducing kernel",
            worst,
            tol.policy.rel_quadrature,
        );
    }
    {
        let n = 1;
        let vphi = VectorSignal::new((0..=n).map(|_| ctx.signal(3)).collect())?;
        let unit = ctx.unit();
        let g = default_grid(n, 3);
        let f = compute_full_field(&vphi, g, g, unit)?;
        let mut worst: f64 = 0.0;
        for _ in 0..2 {
            let (xp, wp) = (ctx.uniform(-1.5, 1.5), ctx.uniform(-1.5, 1.5));
            let kernel = full_gabor_kernel_field(n, xp, wp, g, g, unit);
            worst = worst.max(gabor_reproduce(&f, &kernel).dist(full_qstft(&vphi, xp, wp, unit)?));
        }
        ctx.error(
            "summed Gabor kernel reproduces the full-poly field, n=1".into(),
            "full-poly reproducing kernel",
            worst,
            tol.policy.rel_quadrature,
        );
    }
    Ok(())
}

fn lieb_suite(ctx: &mut Ctx) -> Result<()> {
    let ps = [2.0, 3.0, 4.0, 6.0];
    let mut ratio = [0.0f64; 4];
    let mut pointwise = 0usize;
    let coarse = UniformGrid::symmetric(3.0, 20)?;
    for i in 0..50 {
        let n = (i % 4) as u32;
        let phi = ctx.signal(6);
        let unit = ctx.unit();
        let f = field(&phi, n, 6, unit)?;
        for (slot, &p) in ratio.iter_mut().zip(&ps) {
            let r = lieb_lp(&f, p)?;
            *slot = slot.max(r.value / r.bound);
        }
        if !pointwise_bound(&compute_field(&phi, n, coarse, coarse, unit)?).holds {
            pointwise += 1;
        }
    }
    for (p, r) in ps.iter().zip(ratio) {
        ctx.push(
            format!("largest L^{p} ratio over 50 unit signals"),
            "Lieb-type inequality",
            r,
            1.0,
            0.0,
            Metric::Le,
        );
    }
    ctx.push(
        "pointwise sqrt(2) bound violations on 20x20 grids".into(),
        "pointwise bound",
        pointwise as f64,
        0.0,
        0.0,
        Metric::Le,
    );

    let mut full_pointwise = 0usize;
    for n in 0..=3u32 {
        let vphi = VectorSignal::new((0..=n).map(|_| ctx.signal(3)).collect())?;
        let unit = ctx.unit();
        let g = default_grid(n, 3);
        let f = compute_full_field(&vphi, g, g, unit)?;
        for p in ps {
            let r = lieb_lp(&f, p)?;
            ctx.push(
                format!("full-poly L^{p} integral, n={n}"),
                "full-poly Lieb-type inequality",
                r.value,
                r.bound,
                0.0,
                Metric::Le,
            );
        }
        if !pointwise_bound(&compute_full_field(&vphi, coarse, coarse, unit)?).holds {
            full_pointwise += 1;
        }
    }
    ctx.push(
        "pointwise sqrt(2)(n+1) bound violations, n<=3".into(),
        "full-poly pointwise bound",
        full_pointwise as f64,
        0.0,
        0.0,
        Metric::Le,
    );
    Ok(())
}

const RADII: [f64; 7] = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];

fn disc_family(ctx: &mut Ctx, f: &TimeFreqField, label: &str) -> Result<()> {
    let mut violations = 0usize;
    for r in RADII {
        let region = Region::Disc {
            x: 0.0,
            omega: 0.0,
            radius: r,
        };
        for p in [None, Some(3.0), Some(4.0), Some(6.0)] {
            if !uncertainty_check(f, region, p)?.satisfied {
                violations += 1;
            }
        }
    }
    ctx.push(
        format!("{label}: violations over disc family"),
        "weak uncertainty principle",
        violations as f64,
        0.0,
        0.0,
        Metric::Le,
    );
    Ok(())
}

fn uncertainty_suite(ctx: &mut Ctx) -> Result<()> {
    let tol = ctx.tol.policy.rel_quadrature;
    let unit = ctx.unit();
    for k in 0..=2usize {
        for n in 0..=2u32 {
            let f = field(&basis(k), n, k + 1, unit)?;
            disc_family(ctx, &f, &format!("psi_{k}, n={n}"))?;
        }
    }
    let g = default_grid(0, 1);
    let whole = Region::Rectangle {
        x: (g.start, g.end),
        omega: (g.start, g.end),
    };
    let f = field(&basis(0), 0, 1, unit)?;
    ctx.push(
        "whole plane, weak bound".into(),
        "weak uncertainty principle",
        uncertainty_check(&f, whole, None)?.bound,
        0.5,
        tol,
        Metric::Abs,
    );
    let r2 = uncertainty_check(
        &f,
        Region::Disc {
            x: 0.0,
            omega: 0.0,
            radius: 2.0,
        },
        None,
    )?;
    ctx.push(
        "psi_0 on the radius-2 disc".into(),
        "weak uncertainty principle",
        r2.bound,
        r2.set_area,
        0.0,
        Metric::Le,
    );

    let vphi = VectorSignal::new(vec![basis(0), basis(1)])?;
    let g = default_grid(1, 2);
    let f = compute_full_field(&vphi, g, g, unit)?;
    disc_family(ctx, &f, "full-poly (psi_0, psi_1)")?;
    let whole = Region::Rectangle {
        x: (g.start, g.end),
        omega: (g.start, g.end),
    };
    ctx.push(
        "full-poly whole plane, weak bound n=1".into(),
        "full-poly weak uncertainty",
        uncertainty_check(&f, whole, None)?.bound,
        0.125,
        tol,
        Metric::Abs,
    );
    Ok(())
}
