//! Acceptance criteria 1 to 10, each checked against oracles computed here.
#![allow(clippy::needless_range_loop)]

use std::f64::consts::{PI, SQRT_2};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtfa::bargmann::{
    true_fock_kernel, true_poly_bargmann, true_poly_bargmann_closed, CoeffEvaluator, Route,
};
use qtfa::hermite::{
    complex_hermite_c, hermite_fn, hermite_poly, hermite_poly_deriv, hermite_poly_explicit, window,
};
use qtfa::numerics::{gauss_legendre, wirtinger_derivative_c, UniformGrid};
use qtfa::qstft::{
    compute_field, compute_full_field, default_grid, full_adjoint, full_gabor_kernel_field,
    full_qstft, gabor_kernel_field, reconstruct_many, true_qstft, uncertainty_check, Region,
    TimeFreqField,
};
use qtfa::signal::{HermiteExpansion, Signal, VectorSignal};
use qtfa::{ImaginaryUnit, Quaternion};

const TWO_PI: f64 = 2.0 * PI;

fn report(n: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {n:>2} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_q(r: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
    )
}

fn rand_unit(r: &mut ChaCha8Rng) -> ImaginaryUnit {
    loop {
        let v: [f64; 3] = [
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return ImaginaryUnit::from_direction(v[0], v[1], v[2]).unwrap();
        }
    }
}

fn rand_expansion(r: &mut ChaCha8Rng, k: usize) -> HermiteExpansion {
    let c: Vec<Quaternion> = (0..k).map(|_| rand_q(r)).collect();
    let s: f64 = c.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
    HermiteExpansion::new(c.into_iter().map(|q| q.scale(1.0 / s)).collect()).unwrap()
}

fn basis(k: usize) -> Signal {
    Signal::Hermite(HermiteExpansion::basis(k, Quaternion::ONE))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Physicists' Hermite polynomial; `H_n^ν(x) = ν^{n/2} H_n(√ν x)`.
fn phys_hermite(n: u32, y: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * y);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = 2.0 * y * b - 2.0 * k as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// Composite Gauss–Legendre nodes and weights.
fn gl_rule(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let lo = a + p as f64 * h;
            x.iter()
                .zip(&w)
                .map(move |(xi, wi)| (lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Polar rule on a disc: radial Gauss–Legendre times angular trapezoid.
fn polar_rule(radius: f64, nr: usize, na: usize) -> Vec<(f64, f64, f64)> {
    let radial = gl_rule(0.0, radius, nr / 32, 32);
    let mut out = Vec::with_capacity(radial.len() * na);
    for (r, wr) in radial {
        for k in 0..na {
            let th = TWO_PI * k as f64 / na as f64;
            out.push((r * th.cos(), r * th.sin(), wr * r * TWO_PI / na as f64));
        }
    }
    out
}

/// `∫ conj(g) f e^{−2π|z|²} dA` on the slice of `unit`.
fn fock<F: Fn(Quaternion) -> Quaternion, G: Fn(Quaternion) -> Quaternion>(
    f: F,
    g: G,
    unit: ImaginaryUnit,
    radius: f64,
) -> Quaternion {
    polar_rule(radius, 384, 256)
        .into_iter()
        .map(|(u, v, w)| {
            let q = unit.point(u, v);
            (g(q).conj() * f(q)).scale(w * (-TWO_PI * (u * u + v * v)).exp())
        })
        .sum()
}

fn trapezoid_weights(g: &UniformGrid) -> Vec<f64> {
    let h = (g.end - g.start) / (g.n - 1) as f64;
    (0..g.n)
        .map(|i| if i == 0 || i == g.n - 1 { 0.5 * h } else { h })
        .collect()
}

/// `∬ conj(G) F` with trapezoid weights built here.
fn field_inner(f: &TimeFreqField, g: &[Quaternion]) -> Quaternion {
    let (wx, ww) = (
        trapezoid_weights(&f.x_grid),
        trapezoid_weights(&f.omega_grid),
    );
    let mut acc = Quaternion::ZERO;
    for ix in 0..f.x_grid.n {
        for iw in 0..f.omega_grid.n {
            let i = ix * f.omega_grid.n + iw;
            acc += (g[i].conj() * f.values[i]).scale(wx[ix] * ww[iw]);
        }
    }
    acc
}

#[test]
fn criterion_01_hermite() {
    let start = Instant::now();
    let mut r = rng(101);
    let mut explicit: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for nu in [1.0, TWO_PI] {
        for n in 0..=12u32 {
            let sup = (0..=200)
                .map(|i| hermite_poly(n, nu, -1.0 + 0.01 * i as f64).abs())
                .fold(0.0, f64::max);
            for _ in 0..20 {
                let x: f64 = r.gen_range(-1.0..1.0);
                let rec = hermite_poly(n, nu, x);
                let exp = hermite_poly_explicit(n, nu, x);
                explicit = explicit.max((rec - exp).abs() / rec.abs().max(exp.abs()));
                let want = nu.powf(0.5 * n as f64) * phys_hermite(n, nu.sqrt() * x);
                oracle = oracle.max((rec - want).abs() / want.abs().max(1e-6 * sup));
            }
        }
    }
    let mut deriv: f64 = 0.0;
    for nu in [1.0, TWO_PI] {
        for n in 1..=10u32 {
            let h = 1e-4 / nu.sqrt();
            for _ in 0..10 {
                let x: f64 = r.gen_range(-1.5..1.5);
                let f = |t: f64| hermite_poly(n, nu, t);
                let fd = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h))
                    / (12.0 * h);
                let d = hermite_poly_deriv(n, nu, x);
                let want = 2.0 * nu * n as f64 * hermite_poly(n - 1, nu, x);
                let scale = want.abs().max(1e-2 * hermite_poly_deriv(n, nu, 1.5).abs());
                deriv = deriv
                    .max((fd - d).abs() / scale)
                    .max((d - want).abs() / scale);
            }
        }
    }
    let mut norm: f64 = 0.0;
    for nu in [1.0, TWO_PI] {
        for n in 0..=10u32 {
            let t = 12.0 / nu.sqrt();
            let q: f64 = gl_rule(-t, t, 24, 32)
                .into_iter()
                .map(|(x, w)| w * hermite_fn(n, nu, x).powi(2))
                .sum();
            let want = 2f64.powi(n as i32) * nu.powi(n as i32) * factorial(n) * (PI / nu).sqrt();
            norm = norm.max((q - want).abs() / want);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "Hermite recurrence, derivative and norm",
        explicit <= 1e-10 && oracle <= 1e-10 && deriv <= 1e-6 && norm <= 1e-6 && secs < 5.0,
        format!("explicit {explicit:.2e}, scaled-oracle {oracle:.2e}, derivative {deriv:.2e}, norm {norm:.2e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_02_complex_hermite_orthogonality() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for alpha in [1.0, TWO_PI] {
        let radius = if alpha == 1.0 { 10.0 } else { 5.0 };
        let nodes = polar_rule(radius, 416, 256);
        let idx: Vec<(u32, u32)> = (0..=4).flat_map(|m| (0..=4).map(move |p| (m, p))).collect();
        let mut gram = vec![Complex64::new(0.0, 0.0); idx.len() * idx.len()];
        let mut vals = vec![Complex64::new(0.0, 0.0); idx.len()];
        for &(u, v, w) in &nodes {
            let z = Complex64::new(u, v);
            for (slot, &(m, p)) in vals.iter_mut().zip(&idx) {
                *slot = complex_hermite_c(m, p, alpha, z);
            }
            let wt = w * (-alpha * z.norm_sqr()).exp();
            for a in 0..idx.len() {
                for b in 0..idx.len() {
                    gram[a * idx.len() + b] += vals[b].conj() * vals[a] * wt;
                }
            }
        }
        for (a, &(m, p)) in idx.iter().enumerate() {
            for (b, &(mm, pp)) in idx.iter().enumerate() {
                let na = PI * alpha.powi((p + m) as i32 - 1) * factorial(m) * factorial(p);
                let nb = PI * alpha.powi((pp + mm) as i32 - 1) * factorial(mm) * factorial(pp);
                let want = if a == b { na } else { 0.0 };
                worst = worst.max((gram[a * idx.len() + b] - want).norm() / (na * nb).sqrt());
            }
        }
    }
    let mut her3: f64 = 0.0;
    for m in 0..=4u32 {
        for p in 0..=4u32 {
            let lhs = PI * TWO_PI.powi((p + m) as i32 - 1) * factorial(m) * factorial(p);
            let rhs = factorial(m) * factorial(p) * TWO_PI.powi((p + m) as i32) / 2.0;
            her3 = her3.max((lhs - rhs).abs() / rhs);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "complex Hermite orthogonality",
        worst <= 1e-4 && her3 <= 1e-14 && secs < 30.0,
        format!("max normalized Gram error {worst:.2e}, 2pi diagonal {her3:.2e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_03_bargmann_dual_route() {
    let start = Instant::now();
    let mut r = rng(303);
    let phi = Signal::Hermite(rand_expansion(&mut r, 8));
    let units = [rand_unit(&mut r), rand_unit(&mut r)];
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let q = units[i % 2].point(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        for n in 0..=3 {
            let a = true_poly_bargmann(&phi, n, q, Route::Coefficient).unwrap();
            let b = true_poly_bargmann_closed(&phi, n, q).unwrap();
            worst = worst.max(a.dist(b) / a.norm().max(1.0));
        }
    }
    let mut mono: f64 = 0.0;
    for k in 0..5u32 {
        let q = units[0].point(0.4, -0.7);
        let mut p = Quaternion::ONE;
        for _ in 0..k {
            p = p * q;
        }
        let want = p.scale(SQRT_2 * TWO_PI.powf(0.5 * k as f64) / factorial(k).sqrt());
        let got = true_poly_bargmann_closed(&basis(k as usize), 0, q).unwrap();
        mono = mono.max(got.dist(want) / want.norm().max(1.0));
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        3,
        "Bargmann dual-route equality",
        worst <= 1e-6 && mono <= 1e-6 && secs < 30.0,
        format!("max route difference {worst:.2e}, monomial images {mono:.2e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_04_isometries() {
    let mut r = rng(404);
    let mut iso: f64 = 0.0;
    for i in 0..10u32 {
        let n = i % 4;
        let h = rand_expansion(&mut r, 6);
        let unit = rand_unit(&mut r);
        let ev = CoeffEvaluator::new(&h, n);
        let v = fock(
            |q| ev.eval(q),
            |q| ev.eval(q),
            unit,
            3.0 + ((n + 6) as f64).sqrt(),
        );
        iso = iso.max((v.w - 1.0).abs());
    }
    let mut cross: f64 = 0.0;
    for (j, m) in [(0, 1), (1, 2), (0, 3)] {
        let (a, b) = (rand_expansion(&mut r, 5), rand_expansion(&mut r, 5));
        let unit = rand_unit(&mut r);
        let (ea, eb) = (CoeffEvaluator::new(&a, j), CoeffEvaluator::new(&b, m));
        cross = cross.max(fock(|q| ea.eval(q), |q| eb.eval(q), unit, 5.5).norm());
    }
    report(
        4,
        "Fock isometry and cross-order orthogonality",
        iso <= 1e-4 && cross <= 1e-4,
        format!("max relative norm error {iso:.2e}, max cross inner product {cross:.2e}"),
    );
}

#[test]
fn criterion_05_moyal() {
    let mut r = rng(505);
    let mut details = Vec::new();
    let mut ok = true;
    for n in 0..=3u32 {
        let start = Instant::now();
        let phi = Signal::Hermite(rand_expansion(&mut r, 4));
        let unit = rand_unit(&mut r);
        let g = default_grid(n, 4);
        let f = compute_field(&phi, n, g, g, unit).unwrap();
        let m = field_inner(&f, &f.values).w;
        let comps = (0..=n)
            .map(|_| Signal::Hermite(rand_expansion(&mut r, 3)))
            .collect();
        let gv = default_grid(n, 3);
        let fv = compute_full_field(&VectorSignal::new(comps).unwrap(), gv, gv, unit).unwrap();
        let mv = field_inner(&fv, &fv.values).w;
        let secs = start.elapsed().as_secs_f64();
        ok &= (m - 2.0).abs() <= 1e-3 && (mv - 2.0 * (n + 1) as f64).abs() <= 1e-3 && secs < 60.0;
        details.push(format!("n={n}: {m:.6} / {mv:.6} in {secs:.1}s"));
    }
    report(5, "Moyal identities", ok, details.join("; "));
}

#[test]
fn criterion_06_reconstruction() {
    let mut r = rng(606);
    let ys: Vec<f64> = (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect();
    let g = default_grid(0, 1);
    let unit = rand_unit(&mut r);
    let f = compute_field(&basis(0), 0, g, g, unit).unwrap();
    let rec = reconstruct_many(&f, 0, &ys).unwrap();
    let gaussian = |y: f64| 2f64.powf(0.25) * (-PI * y * y).exp();
    let round = rec
        .iter()
        .zip(&ys)
        .map(|(v, &y)| v.dist(Quaternion::real(gaussian(y))))
        .fold(0.0, f64::max);

    let h = rand_expansion(&mut r, 5);
    let g = default_grid(2, 5);
    let f = compute_field(&Signal::Hermite(h.clone()), 2, g, g, unit).unwrap();
    let adj = reconstruct_many(&f, 2, &ys)
        .unwrap()
        .iter()
        .zip(&ys)
        .map(|(v, &y)| v.scale(2.0).dist(h.eval(y).scale(2.0)))
        .fold(0.0, f64::max);

    let mut comp: f64 = 0.0;
    for n in 0..=2u32 {
        let hs: Vec<HermiteExpansion> = (0..=n).map(|_| rand_expansion(&mut r, 3)).collect();
        let v = VectorSignal::new(hs.iter().cloned().map(Signal::Hermite).collect()).unwrap();
        let g = default_grid(n, 3);
        let f = compute_full_field(&v, g, g, unit).unwrap();
        for &y in ys.iter().step_by(5) {
            for (j, a) in full_adjoint(&f, n, y).unwrap().into_iter().enumerate() {
                comp = comp.max(a.dist(hs[j].eval(y).scale(2.0)));
            }
        }
    }
    report(
        6,
        "reconstruction and adjoints",
        round < 1e-3 && adj <= 1e-3 && comp <= 1e-3,
        format!("round trip {round:.2e}, V*V-2Id {adj:.2e}, componentwise {comp:.2e}"),
    );
}

#[test]
fn criterion_07_kernels() {
    let mut r = rng(707);
    let mut repro: f64 = 0.0;
    for n in 0..=2u32 {
        let h = rand_expansion(&mut r, 4);
        let unit = rand_unit(&mut r);
        let w = unit.point(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
        let ev = CoeffEvaluator::new(&h, n);
        let got = fock(|q| ev.eval(q), |q| true_fock_kernel(n, q, w), unit, 5.5);
        let want = ev.eval(w);
        repro = repro.max(got.dist(want) / want.norm().max(1.0));
    }
    let mut diag: f64 = 0.0;
    for n in 0..=4 {
        let q = rand_q(&mut r);
        let want = 2.0 * (TWO_PI * q.norm_sqr()).exp();
        diag = diag.max(true_fock_kernel(n, q, q).dist(Quaternion::real(want)) / want);
    }
    let mut gabor: f64 = 0.0;
    for n in 0..=2u32 {
        let phi = Signal::Hermite(rand_expansion(&mut r, 3));
        let unit = rand_unit(&mut r);
        let g = default_grid(n, 3);
        let f = compute_field(&phi, n, g, g, unit).unwrap();
        let (xp, wp) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let k = gabor_kernel_field(n, xp, wp, g, g, unit);
        gabor = gabor.max(field_inner(&f, &k).dist(true_qstft(&phi, n, xp, wp, unit).unwrap()));
    }
    let v = VectorSignal::new(vec![
        Signal::Hermite(rand_expansion(&mut r, 3)),
        Signal::Hermite(rand_expansion(&mut r, 3)),
    ])
    .unwrap();
    let unit = rand_unit(&mut r);
    let g = default_grid(1, 3);
    let f = compute_full_field(&v, g, g, unit).unwrap();
    let k = full_gabor_kernel_field(1, 0.3, -0.6, g, g, unit);
    gabor = gabor.max(field_inner(&f, &k).dist(full_qstft(&v, 0.3, -0.6, unit).unwrap()));
    report(
        7,
        "reproducing kernels",
        repro <= 1e-4 && diag <= 1e-13 && gabor <= 1e-3,
        format!("Fock {repro:.2e}, diagonal {diag:.2e}, Gabor {gabor:.2e}"),
    );
}

#[test]
fn criterion_08_bounds() {
    let mut r = rng(808);
    let coarse = UniformGrid::symmetric(3.0, 20).unwrap();
    let mut violations = 0usize;
    let mut lieb_worst: f64 = 0.0;
    for i in 0..50u32 {
        let n = i % 4;
        let phi = Signal::Hermite(rand_expansion(&mut r, 5));
        let unit = rand_unit(&mut r);
        let g = default_grid(n, 5);
        let f = compute_field(&phi, n, g, g, unit).unwrap();
        let (wx, ww) = (trapezoid_weights(&g), trapezoid_weights(&g));
        for p in [2.0, 3.0, 4.0, 6.0] {
            let mut integral = 0.0;
            for ix in 0..g.n {
                for iw in 0..g.n {
                    integral += f.get(ix, iw).norm().powf(p) * wx[ix] * ww[iw];
                }
            }
            lieb_worst = lieb_worst.max(integral / (2f64.powf(p + 1.0) / p));
        }
        let c = compute_field(&phi, n, coarse, coarse, unit).unwrap();
        violations += c
            .values
            .iter()
            .filter(|v| v.norm() > SQRT_2 * (1.0 + 1e-9))
            .count();
    }
    for n in 0..=3u32 {
        let v = VectorSignal::new((0..=n).map(|j| basis(j as usize)).collect()).unwrap();
        let unit = rand_unit(&mut r);
        let c = compute_full_field(&v, coarse, coarse, unit).unwrap();
        let bound = SQRT_2 * (n + 1) as f64;
        violations += c
            .values
            .iter()
            .filter(|q| q.norm() > bound * (1.0 + 1e-9))
            .count();
        let g = default_grid(n, n as usize + 1);
        let f = compute_full_field(&v, g, g, unit).unwrap();
        let (wx, ww) = (trapezoid_weights(&g), trapezoid_weights(&g));
        for p in [2.0, 3.0, 4.0, 6.0] {
            let mut integral = 0.0;
            for ix in 0..g.n {
                for iw in 0..g.n {
                    integral += f.get(ix, iw).norm().powf(p) * wx[ix] * ww[iw];
                }
            }
            let norm = ((n + 1) as f64).sqrt();
            let b = 2f64.powf(p + 1.0) / p * ((n + 1) as f64).powf(p - 1.0) * norm.powf(p);
            lieb_worst = lieb_worst.max(integral / b);
        }
    }
    let h = rand_expansion(&mut r, 4);
    let grid = UniformGrid::symmetric(2.0, 20).unwrap();
    let unit = rand_unit(&mut r);
    let evs: Vec<CoeffEvaluator> = (0..3).map(|n| CoeffEvaluator::new(&h, n)).collect();
    for x in grid.points() {
        for y in grid.points() {
            let q = unit.point(x, y);
            let grow = (PI * q.norm_sqr()).exp();
            for e in &evs {
                if e.eval(q).norm() > SQRT_2 * grow * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
            let total: Quaternion = evs.iter().map(|e| e.eval(q)).sum();
            if total.norm() > (2.0 * 3.0 * 3.0f64).sqrt() * grow * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }

    let mut unc_fail = 0usize;
    for k in 0..=2usize {
        for n in 0..=2u32 {
            let g = default_grid(n, k + 1);
            let f = compute_field(&basis(k), n, g, g, ImaginaryUnit::I).unwrap();
            let (wx, ww) = (trapezoid_weights(&g), trapezoid_weights(&g));
            for radius in [0.2, 0.4, 0.6, 1.0, 1.5, 2.5] {
                let mut mass = 0.0;
                for (ix, x) in g.points().into_iter().enumerate() {
                    for (iw, w) in g.points().into_iter().enumerate() {
                        if x * x + w * w < radius * radius {
                            mass += f.get(ix, iw).norm_sqr() * wx[ix] * ww[iw];
                        }
                    }
                }
                let eps = (1.0 - mass).max(0.0);
                let area = PI * radius * radius;
                let mut ok = area >= (1.0 - eps) / 2.0;
                for p in [3.0f64, 4.0, 6.0] {
                    ok &= area
                        >= (2f64.powf(p + 1.0) / p).powf(-2.0 / (p - 2.0))
                            * (1.0 - eps).powf(p / (p - 2.0));
                }
                let region = Region::Disc {
                    x: 0.0,
                    omega: 0.0,
                    radius,
                };
                for p in [None, Some(3.0), Some(4.0), Some(6.0)] {
                    ok &= uncertainty_check(&f, region, p).unwrap().satisfied;
                }
                if !ok {
                    unc_fail += 1;
                }
            }
        }
    }
    let v = VectorSignal::new(vec![basis(0), basis(1)]).unwrap();
    let g = default_grid(1, 2);
    let f = compute_full_field(&v, g, g, ImaginaryUnit::J).unwrap();
    for radius in [0.2, 0.5, 1.0, 2.0] {
        let region = Region::Disc {
            x: 0.0,
            omega: 0.0,
            radius,
        };
        let area = PI * radius * radius;
        for p in [None, Some(3.0), Some(6.0)] {
            let rep = uncertainty_check(&f, region, p).unwrap();
            let want = match p {
                None => (1.0 - rep.epsilon) / 8.0,
                Some(p) => {
                    (2f64.powf(p + 1.0) / p).powf(-2.0 / (p - 2.0))
                        * (1.0 - rep.epsilon).powf(p / (p - 2.0))
                        * 2f64.powf((2.0 - 3.0 * p) / (p - 2.0))
                }
            };
            if !(rep.satisfied && area >= want && (rep.bound - want).abs() <= 1e-12) {
                unc_fail += 1;
            }
        }
    }
    report(
        8,
        "pointwise, growth, Lieb and uncertainty bounds",
        violations == 0 && lieb_worst <= 1.0 && unc_fail == 0,
        format!("{violations} pointwise/growth violations, max Lieb ratio {lieb_worst:.3}, {unc_fail} uncertainty failures"),
    );
}

#[test]
fn criterion_09_operator_identity() {
    let mut r = rng(909);
    let mut worst: f64 = 0.0;
    for k in 0..=3u32 {
        for _ in 0..6 {
            let z = Complex64::new(r.gen_range(-0.8..0.8), r.gen_range(-0.8..0.8));
            let x = Complex64::new(r.gen_range(-0.8..0.8), r.gen_range(-0.3..0.3));
            let g = move |z: Complex64| (-PI * (z * z + x * x) + 2.0 * PI * SQRT_2 * z * x).exp();
            let mut tower = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for j in 0..=k {
                tower += (-TWO_PI * z.conj()).powu(j) * wirtinger_derivative_c(g, z, k - j) * binom;
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
            let u = (z + z.conj()) / SQRT_2 - x;
            let mut herm = Complex64::new(1.0, 0.0);
            let mut prev = Complex64::new(0.0, 0.0);
            for m in 0..k {
                let next = u * 2.0 * TWO_PI * herm - prev * (2.0 * m as f64 * TWO_PI);
                prev = herm;
                herm = next;
            }
            let closed = g(z) * herm * (-1f64).powi(k as i32) * 2f64.powf(-0.5 * k as f64);
            worst = worst.max((tower - closed).norm() / closed.norm().max(1e-3));
        }
    }
    report(
        9,
        "operator identity tower",
        worst <= 1e-5,
        format!("max relative error {worst:.2e}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_qtfa"))
            .args(["verify", "all", "--seed", "1", "--format", "json"])
            .env("QTFA_THREADS", "2")
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    let (c1, a) = run();
    let (c2, b) = run();
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    report(
        10,
        "byte-identical verify all --seed 1",
        c1 == Some(0) && c2 == Some(0) && a == b && parsed["pass"] == true,
        format!("{} bytes, exit codes {c1:?}/{c2:?}", a.len()),
    );
}

#[test]
fn window_is_the_normalized_hermite_function() {
    for n in 0..6u32 {
        for &x in &[-1.3, 0.0, 0.4] {
            let want = phys_hermite(n, (TWO_PI).sqrt() * x) * (-PI * x * x).exp() * 2f64.powf(0.25)
                / (2f64.powi(n as i32) * factorial(n)).sqrt();
            assert!((window(n, x) - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }
}
