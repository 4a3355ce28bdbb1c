//! Quaternion arithmetic and slice calculus.
//!
//! A nonreal quaternion `q` lies in exactly one complex plane `C_I = R + R·I`,
//! where `I` is a unit pure quaternion. Most of the transforms in this crate are
//! evaluated on such a plane with ordinary complex arithmetic and then lifted back.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QtfaError;

/// `w + x·i + y·j + z·k`. Serializes as `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const ONE: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const I: Quaternion = Quaternion {
        w: 0.0,
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const J: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const K: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(r: f64) -> Self {
        Quaternion {
            w: r,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Pure (vector) part.
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Euclidean distance in R^4.
    pub fn dist(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    pub fn to_array(self) -> [f64; 4] {
        self.into()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} + {:?}i + {:?}j + {:?}k",
            self.w, self.x, self.y, self.z
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, s: f64) {
        *self = self.scale(s);
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<T: Iterator<Item = Quaternion>>(iter: T) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// A unit pure quaternion; squares to −1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImaginaryUnit(Quaternion);

impl Default for ImaginaryUnit {
    fn default() -> Self {
        ImaginaryUnit::I
    }
}

impl Neg for ImaginaryUnit {
    type Output = ImaginaryUnit;
    fn neg(self) -> ImaginaryUnit {
        ImaginaryUnit(-self.0)
    }
}

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit(Quaternion::I);
    pub const J: ImaginaryUnit = ImaginaryUnit(Quaternion::J);
    pub const K: ImaginaryUnit = ImaginaryUnit(Quaternion::K);

    /// Normalizes `(x, y, z)`; fails on a zero or non-finite direction.
    pub fn from_direction(x: f64, y: f64, z: f64) -> Result<Self, QtfaError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(QtfaError::Input(format!(
                "imaginary unit direction ({x}, {y}, {z}) is zero or not finite"
            )));
        }
        if (n - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Ok(ImaginaryUnit(Quaternion::new(0.0, x, y, z)));
        }
        Ok(ImaginaryUnit(Quaternion::new(0.0, x / n, y / n, z / n)))
    }

    /// Parses `i`, `j`, `k` or a comma-separated direction `x,y,z`.
    pub fn parse(s: &str) -> Result<Self, QtfaError> {
        match s.trim() {
            "i" => Ok(Self::I),
            "j" => Ok(Self::J),
            "k" => Ok(Self::K),
            other => {
                let parts: Vec<&str> = other.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(QtfaError::Input(format!(
                        "slice unit must be i, j, k or x,y,z; got {other:?}"
                    )));
                }
                let mut v = [0.0; 3];
                for (slot, p) in v.iter_mut().zip(&parts) {
                    *slot = p.parse::<f64>().map_err(|e| {
                        QtfaError::Input(format!("bad slice unit component {p:?}: {e}"))
                    })?;
                }
                Self::from_direction(v[0], v[1], v[2])
            }
        }
    }

    pub fn as_quaternion(self) -> Quaternion {
        self.0
    }

    pub fn direction(self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    /// `re + I·im`.
    pub fn lift(self, c: Complex64) -> Quaternion {
        Quaternion::new(c.re, self.0.x * c.im, self.0.y * c.im, self.0.z * c.im)
    }

    /// Point `x + I·y` on the slice.
    pub fn point(self, x: f64, y: f64) -> Quaternion {
        self.lift(Complex64::new(x, y))
    }

    /// Projects `q` onto `C_I`, returning `(Re q, <Im q, I>)`.
    pub fn project(self, q: Quaternion) -> Complex64 {
        Complex64::new(q.w, q.x * self.0.x + q.y * self.0.y + q.z * self.0.z)
    }

    /// Short label: `i`, `j`, `k` or the direction triple.
    pub fn label(self) -> String {
        if self == Self::I {
            "i".into()
        } else if self == Self::J {
            "j".into()
        } else if self == Self::K {
            "k".into()
        } else {
            format!("{:?},{:?},{:?}", self.0.x, self.0.y, self.0.z)
        }
    }
}

/// `q = x + I·y` with `y ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    pub x: f64,
    pub y: f64,
    pub unit: ImaginaryUnit,
}

impl SlicePoint {
    pub fn recompose(&self) -> Quaternion {
        if self.y == 0.0 {
            Quaternion::real(self.x)
        } else {
            self.unit.point(self.x, self.y)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Decomposes with `I` as the fallback unit for real `q`.
pub fn slice_decompose_with(q: Quaternion, default: ImaginaryUnit) -> SlicePoint {
    let v = q.im();
    let y = v.norm();
    if y == 0.0 {
        SlicePoint {
            x: q.w,
            y: 0.0,
            unit: default,
        }
    } else {
        SlicePoint {
            x: q.w,
            y,
            unit: ImaginaryUnit(v.scale(1.0 / y)),
        }
    }
}

pub fn slice_decompose(q: Quaternion) -> SlicePoint {
    slice_decompose_with(q, ImaginaryUnit::default())
}

/// `q^n` via polar form in the slice of `q`.
pub fn slice_power(q: Quaternion, n: u32) -> Quaternion {
    if n == 0 {
        return Quaternion::ONE;
    }
    let sp = slice_decompose(q);
    if sp.y == 0.0 {
        return Quaternion::real(sp.x.powi(n as i32));
    }
    let (r, theta) = sp.to_complex().to_polar();
    sp.unit
        .lift(Complex64::from_polar(r.powi(n as i32), theta * n as f64))
}

/// `e^q = e^x (cos y + I sin y)`.
pub fn slice_exp(q: Quaternion) -> Quaternion {
    let sp = slice_decompose(q);
    if sp.y == 0.0 {
        return Quaternion::real(sp.x.exp());
    }
    sp.unit.lift(sp.to_complex().exp())
}

/// Evaluates a slice function at `q` from its restriction to `C_J`.
///
/// `f_j` is only ever called at points of `C_J`. When `q` already lies on
/// `C_J` the restriction is called at `q` directly.
pub fn representation_extend<F>(f_j: F, q: Quaternion, j: ImaginaryUnit) -> Quaternion
where
    F: Fn(Quaternion) -> Quaternion,
{
    let sp = slice_decompose_with(q, j);
    if sp.y == 0.0 {
        return f_j(Quaternion::real(sp.x));
    }
    let jq = j.as_quaternion();
    let iq = sp.unit.as_quaternion();
    let same = (iq - jq).norm() <= 4.0 * f64::EPSILON;
    let opposite = (iq + jq).norm() <= 4.0 * f64::EPSILON;
    if same || opposite {
        return f_j(q);
    }
    let plus = f_j(j.point(sp.x, sp.y));
    let minus = f_j(j.point(sp.x, -sp.y));
    let alpha = (plus + minus).scale(0.5);
    let beta = -(jq * (plus - minus).scale(0.5));
    alpha + iq * beta
}

/// The eight squared norms `‖u±v‖²`, `‖uτ±v‖²` for `τ ∈ {i, j, k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationNorms {
    pub plus: f64,
    pub minus: f64,
    pub tau_plus: [f64; 3],
    pub tau_minus: [f64; 3],
}

impl PolarizationNorms {
    /// Builds the norms for two finite vectors with `uτ` taken as right multiplication.
    pub fn from_vectors(u: &[Quaternion], v: &[Quaternion]) -> Self {
        assert_eq!(
            u.len(),
            v.len(),
            "polarization vectors must have equal length"
        );
        Self::from_weighted(u, v, None)
    }

    /// As [`from_vectors`](Self::from_vectors) with quadrature weights on each entry.
    pub fn from_weighted(u: &[Quaternion], v: &[Quaternion], weights: Option<&[f64]>) -> Self {
        let taus = [Quaternion::I, Quaternion::J, Quaternion::K];
        let nsq = |f: &dyn Fn(Quaternion, Quaternion) -> Quaternion| -> f64 {
            let terms: Vec<f64> = u
                .iter()
                .zip(v)
                .enumerate()
                .map(|(k, (&a, &b))| f(a, b).norm_sqr() * weights.map_or(1.0, |w| w[k]))
                .collect();
            crate::numerics::pairwise_sum(&terms)
        };
        let mut tau_plus = [0.0; 3];
        let mut tau_minus = [0.0; 3];
        for (t, tau) in taus.iter().enumerate() {
            tau_plus[t] = nsq(&|a, b| a * *tau + b);
            tau_minus[t] = nsq(&|a, b| a * *tau - b);
        }
        PolarizationNorms {
            plus: nsq(&|a, b| a + b),
            minus: nsq(&|a, b| a - b),
            tau_plus,
            tau_minus,
        }
    }
}

/// `¼(‖u+v‖² − ‖u−v‖²) + ¼ Σ_τ (‖uτ+v‖² − ‖uτ−v‖²) τ`.
///
/// For the inner product `⟨a, b⟩ = Σ conj(b_k) a_k` this equals `⟨v, u⟩ = Σ conj(u_k) v_k`.
pub fn polarization_inner(n: &PolarizationNorms) -> Quaternion {
    let q = |t: usize| 0.25 * (n.tau_plus[t] - n.tau_minus[t]);
    Quaternion::new(0.25 * (n.plus - n.minus), q(0), q(1), q(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.dist(b) <= tol * (1.0 + b.norm())
    }

    #[test]
    fn multiplication_table() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(k * j, -i);
        assert_eq!(i * k, -j);
        for u in [i, j, k] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
    }

    #[test]
    fn norm_and_conjugate() {
        let q = Quaternion::new(1.0, -2.0, 3.0, 0.5);
        let n2 = 1.0 + 4.0 + 9.0 + 0.25;
        assert_eq!(q.norm_sqr(), n2);
        assert_eq!(q * q.conj(), Quaternion::real(n2));
        assert_eq!(q.conj() * q, Quaternion::real(n2));
        let p = Quaternion::new(0.3, 0.1, -0.7, 2.0);
        assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-15));
    }

    #[test]
    fn decompose_examples() {
        let sp = slice_decompose(Quaternion::real(3.0));
        assert_eq!((sp.x, sp.y, sp.unit), (3.0, 0.0, ImaginaryUnit::I));
        let sp = slice_decompose(Quaternion::new(1.0, 2.0, 0.0, 0.0));
        assert_eq!((sp.x, sp.y, sp.unit), (1.0, 2.0, ImaginaryUnit::I));
        let sp = slice_decompose(Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let s = 3f64.sqrt();
        assert_eq!(sp.x, 1.0);
        assert!((sp.y - s).abs() < 1e-15);
        let d = sp.unit.direction();
        for c in d {
            assert!((c - 1.0 / s).abs() < 1e-15);
        }
        let r = slice_decompose_with(Quaternion::real(2.0), ImaginaryUnit::K);
        assert_eq!(r.unit, ImaginaryUnit::K);
        assert_eq!(r.recompose(), Quaternion::real(2.0));
    }

    #[test]
    fn power_examples() {
        assert!(close(
            slice_power(Quaternion::I, 2),
            -Quaternion::ONE,
            1e-15
        ));
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert!(close(
            slice_power(q, 2),
            Quaternion::new(0.0, 0.0, 2.0, 0.0),
            1e-15
        ));
        assert!(close(slice_power(q, 2), q * q, 1e-15));
        assert_eq!(
            slice_power(Quaternion::new(0.2, 1.0, -3.0, 4.0), 0),
            Quaternion::ONE
        );
        assert_eq!(
            slice_power(Quaternion::real(-2.0), 3),
            Quaternion::real(-8.0)
        );
    }

    #[test]
    fn exp_examples() {
        assert_eq!(slice_exp(Quaternion::ZERO), Quaternion::ONE);
        let e = slice_exp(Quaternion::I.scale(std::f64::consts::PI));
        assert!(close(e, -Quaternion::ONE, 1e-15));
        let q = Quaternion::J.scale(std::f64::consts::FRAC_PI_2);
        let mut series = Quaternion::ZERO;
        let mut term = Quaternion::ONE;
        for n in 0..30 {
            series += term;
            term = term * q / (n as f64 + 1.0);
        }
        assert!(close(slice_exp(q), series, 1e-14));
        assert!(close(slice_exp(q), Quaternion::J, 1e-15));
    }

    #[test]
    fn extend_examples() {
        let j = ImaginaryUnit::J;
        let f = |z: Quaternion| z * z + Quaternion::K * 0.5;
        let q = j.point(0.4, 1.3);
        assert_eq!(representation_extend(f, q, j), f(q));
        assert_eq!(
            representation_extend(f, Quaternion::real(0.7), j),
            f(Quaternion::real(0.7))
        );
        let i = ImaginaryUnit::from_direction(1.0, 2.0, -0.5).unwrap();
        let q = i.point(-0.3, 0.8);
        assert!(close(representation_extend(|z| z, q, j), q, 1e-15));
        // z² is intrinsic, so extending it from C_J gives q² on any slice.
        assert!(close(representation_extend(|z| z * z, q, j), q * q, 1e-14));
    }

    #[test]
    fn extend_is_right_linear() {
        let j = ImaginaryUnit::K;
        let i = ImaginaryUnit::from_direction(0.3, -1.0, 0.2).unwrap();
        let q = i.point(0.5, -0.9);
        let a = Quaternion::new(0.1, 2.0, -1.0, 0.4);
        let f = |z: Quaternion| slice_exp(z);
        let g = |z: Quaternion| z * z * z;
        let lhs = representation_extend(|z| f(z) * a + g(z), q, j);
        let rhs = representation_extend(f, q, j) * a + representation_extend(g, q, j);
        assert!(close(lhs, rhs, 1e-14));
    }

    #[test]
    fn polarization_examples() {
        let u = vec![Quaternion::real(1.0), Quaternion::real(-0.5)];
        let mut norms = PolarizationNorms::from_vectors(&u, &u);
        let s = 1.25;
        assert!(close(
            polarization_inner(&norms),
            Quaternion::real(s),
            1e-15
        ));
        norms = PolarizationNorms {
            plus: 2.0,
            minus: 2.0,
            tau_plus: [2.0; 3],
            tau_minus: [2.0; 3],
        };
        assert_eq!(polarization_inner(&norms), Quaternion::ZERO);
        let u = [
            Quaternion::new(0.1, 0.2, 0.3, 0.4),
            Quaternion::new(-1.0, 0.0, 2.0, 0.5),
        ];
        let v = [
            Quaternion::new(0.7, -0.2, 0.0, 1.0),
            Quaternion::new(0.3, 0.3, -0.3, 0.3),
        ];
        let direct: Quaternion = u.iter().zip(&v).map(|(a, b)| a.conj() * *b).sum();
        let pol = polarization_inner(&PolarizationNorms::from_vectors(&u, &v));
        assert!(close(pol, direct, 1e-14));
    }

    #[test]
    fn unit_parsing() {
        assert_eq!(ImaginaryUnit::parse("j").unwrap(), ImaginaryUnit::J);
        let u = ImaginaryUnit::parse("1, 1, 0").unwrap();
        let sq = u.as_quaternion() * u.as_quaternion();
        assert!(close(sq, -Quaternion::ONE, 1e-15));
        assert!(ImaginaryUnit::parse("0,0,0").is_err());
        assert!(ImaginaryUnit::parse("q").is_err());
    }

    #[test]
    fn serde_array_form() {
        let q = Quaternion::new(1.0, -0.1, 1e-300, 3.5);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-0.1,1e-300,3.5]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
