use std::f64::consts::{PI, SQRT_2};

use super::field::TimeFreqField;
use crate::error::{QtfaError, Result};
use crate::numerics::pairwise_sum;

/// `∬ |F|^p` against its bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiebReport {
    pub p: f64,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `∬ |F|^p dx dω ≤ (2^{p+1}/p) ‖φ‖^p`, or `(2^{p+1}/p)(n+1)^{p−1} ‖φ⃗‖^p` for a full-poly field.
pub fn lieb_lp(f: &TimeFreqField, p: f64) -> Result<LiebReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(QtfaError::Input(format!(
            "Lieb exponent must be finite and at least 2, got {p}"
        )));
    }
    let terms: Vec<f64> = f
        .values
        .iter()
        .zip(f.weights())
        .map(|(v, w)| v.norm().powf(p) * w)
        .collect();
    let value = pairwise_sum(&terms);
    let base = 2f64.powf(p + 1.0) / p * f.signal_norm_sq().powf(0.5 * p);
    let bound = if f.full {
        base * (f.window_order as f64 + 1.0).powf(p - 1.0)
    } else {
        base
    };
    Ok(LiebReport {
        p,
        value,
        bound,
        holds: value <= bound,
    })
}

/// Largest `|F|` on the grid against `√2 Σ_j ‖φ_j‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointwiseReport {
    pub max: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn pointwise_bound(f: &TimeFreqField) -> PointwiseReport {
    let max = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bound = SQRT_2 * f.norms_sq.iter().map(|n| n.sqrt()).sum::<f64>();
    PointwiseReport {
        max,
        bound,
        holds: max <= bound * (1.0 + 1e-9),
    }
}

/// Concentration set in the `(x, ω)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Disc { x: f64, omega: f64, radius: f64 },
    Rectangle { x: (f64, f64), omega: (f64, f64) },
}

impl Region {
    pub fn area(&self) -> f64 {
        match *self {
            Region::Disc { radius, .. } => PI * radius * radius,
            Region::Rectangle { x, omega } => (x.1 - x.0) * (omega.1 - omega.0),
        }
    }

    pub fn contains(&self, px: f64, pw: f64) -> bool {
        match *self {
            Region::Disc { x, omega, radius } => {
                (px - x).powi(2) + (pw - omega).powi(2) <= radius * radius
            }
            Region::Rectangle { x, omega } => {
                px >= x.0 && px <= x.1 && pw >= omega.0 && pw <= omega.1
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Region::Disc { x, omega, radius } => {
                x.is_finite() && omega.is_finite() && radius.is_finite() && radius > 0.0
            }
            Region::Rectangle { x, omega } => {
                x.0.is_finite()
                    && x.1.is_finite()
                    && omega.0.is_finite()
                    && omega.1.is_finite()
                    && x.1 > x.0
                    && omega.1 > omega.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(QtfaError::Input(format!("invalid region {self:?}")))
        }
    }
}

/// Concentration of a unit signal's field on a set `U`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassReport {
    /// `1 − ∬_U |F|² / (2‖φ⃗‖²)`, clamped to `[0, 1]`.
    pub epsilon: f64,
    pub set_area: f64,
    pub bound: f64,
    pub satisfied: bool,
}

const UNIT_TOL: f64 = 1e-6;

/// Measures `ε` on `U` and checks `|U|` against the weak (no `p`) or Lieb-sharpened (`p > 2`) bound.
pub fn uncertainty_check(f: &TimeFreqField, region: Region, p: Option<f64>) -> Result<MassReport> {
    region.validate()?;
    if let Some(bad) = f.norms_sq.iter().find(|n| (*n - 1.0).abs() > UNIT_TOL) {
        return Err(QtfaError::NonUnitSignal(*bad));
    }
    let xs = f.x_grid.points();
    let ws = f.omega_grid.points();
    let weights = f.weights();
    let nw = ws.len();
    let terms: Vec<f64> = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if region.contains(xs[i / nw], ws[i % nw]) {
                v.norm_sqr() * weights[i]
            } else {
                0.0
            }
        })
        .collect();
    let mass = pairwise_sum(&terms);
    let epsilon = (1.0 - mass / (2.0 * f.signal_norm_sq())).clamp(0.0, 1.0);
    let m = if f.full {
        f.window_order as f64 + 1.0
    } else {
        1.0
    };
    let bound = match p {
        None => (1.0 - epsilon) / (2.0 * m * m),
        Some(p) => {
            if !(p > 2.0 && p.is_finite()) {
                return Err(QtfaError::Input(format!(
                    "sharpened bound needs finite p > 2, got {p}"
                )));
            }
            let lieb = (2f64.powf(p + 1.0) / p).powf(-2.0 / (p - 2.0))
                * (1.0 - epsilon).powf(p / (p - 2.0));
            if f.full {
                lieb * m.powf((2.0 - 3.0 * p) / (p - 2.0))
            } else {
                lieb
            }
        }
    };
    let set_area = region.area();
    Ok(MassReport {
        epsilon,
        set_area,
        bound,
        satisfied: set_area >= bound - 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::UniformGrid;
    use crate::quaternion::{ImaginaryUnit, Quaternion};

    fn gaussian_field(full_order: Option<u32>) -> TimeFreqField {
        let g = UniformGrid::symmetric(6.0, 121).unwrap();
        let mut f = TimeFreqField::zeros(g, g, ImaginaryUnit::I, 0);
        for ix in 0..g.n {
            for iw in 0..g.n {
                let (x, w) = (g.point(ix), g.point(iw));
                f.values[ix * g.n + iw] =
                    Quaternion::real(SQRT_2 * (-0.5 * PI * (x * x + w * w)).exp());
            }
        }
        if let Some(n) = full_order {
            f.full = true;
            f.window_order = n;
            f.norms_sq = vec![1.0; n as usize + 1];
        } else {
            f.norms_sq = vec![1.0];
        }
        f
    }

    #[test]
    fn lieb_values() {
        let f = gaussian_field(None);
        let r = lieb_lp(&f, 2.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10 && r.bound == 4.0 && r.holds);
        let r = lieb_lp(&f, 4.0).unwrap();
        assert!(r.bound == 8.0 && r.holds);
        assert!(lieb_lp(&f, 1.5).is_err());
        let mut full = gaussian_field(Some(1));
        full.norms_sq = vec![0.5, 0.5];
        assert_eq!(lieb_lp(&full, 4.0).unwrap().bound, 64.0);
        full.norms_sq = vec![1.0, 1.0];
        assert_eq!(lieb_lp(&full, 4.0).unwrap().bound, 256.0);
    }

    #[test]
    fn uncertainty_bounds() {
        let f = gaussian_field(None);
        let whole = Region::Rectangle {
            x: (-6.0, 6.0),
            omega: (-6.0, 6.0),
        };
        let r = uncertainty_check(&f, whole, None).unwrap();
        assert!(r.epsilon < 1e-9 && (r.bound - 0.5).abs() < 1e-9 && r.satisfied);
        let disc = Region::Disc {
            x: 0.0,
            omega: 0.0,
            radius: 0.3,
        };
        let r = uncertainty_check(&f, disc, Some(4.0)).unwrap();
        assert!(r.epsilon > 0.0 && r.satisfied);
        let full = gaussian_field(Some(1));
        let r = uncertainty_check(&full, whole, None).unwrap();
        // Mass 2 against 2‖φ⃗‖² = 4 gives ε = 1/2 here; the bound follows.
        assert!((r.bound - 0.5 / 8.0).abs() < 1e-9);
        let mut bad = gaussian_field(None);
        bad.norms_sq = vec![2.0];
        assert!(matches!(
            uncertainty_check(&bad, disc, None),
            Err(QtfaError::NonUnitSignal(_))
        ));
    }

    #[test]
    fn pointwise() {
        let r = pointwise_bound(&gaussian_field(None));
        assert!((r.max - SQRT_2).abs() < 1e-15 && r.holds);
    }
}
