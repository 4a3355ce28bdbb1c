//! Signal files, field and table CSV, and atomic output.
//!
//! Signals are JSON: `{"type": "hermite_coeffs", "coeffs": [[w,x,y,z], …]}` or
//! `{"type": "samples", "t0": …, "dt": …, "values": [[w,x,y,z], …]}`. A JSON
//! array of such objects is a vector signal. Floats are written in shortest
//! round-trip form.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{QtfaError, Result};
use crate::numerics::UniformGrid;
use crate::qstft::TimeFreqField;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::signal::{HermiteExpansion, SampledSignal, Signal, VectorSignal};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    HermiteCoeffs {
        coeffs: Vec<Quaternion>,
    },
    Samples {
        t0: f64,
        dt: f64,
        values: Vec<Quaternion>,
    },
}

impl SignalSpec {
    pub fn into_signal(self) -> Result<Signal> {
        match self {
            SignalSpec::HermiteCoeffs { coeffs } => {
                Ok(Signal::Hermite(HermiteExpansion::new(coeffs)?))
            }
            SignalSpec::Samples { t0, dt, values } => {
                Ok(Signal::Samples(SampledSignal::new(t0, dt, values)?))
            }
        }
    }

    pub fn from_signal(s: &Signal) -> Self {
        match s {
            Signal::Hermite(h) => SignalSpec::HermiteCoeffs {
                coeffs: h.coeffs().to_vec(),
            },
            Signal::Samples(s) => SignalSpec::Samples {
                t0: s.t0,
                dt: s.dt,
                values: s.values.clone(),
            },
        }
    }
}

/// A parsed signal file.
#[derive(Clone, Debug, PartialEq)]
pub enum SignalInput {
    Single(Signal),
    Vector(VectorSignal),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInput {
    One(SignalSpec),
    Many(Vec<SignalSpec>),
}

pub fn parse_signal(text: &str) -> Result<SignalInput> {
    let raw: RawInput = serde_json::from_str(text)
        .map_err(|e| QtfaError::Input(format!("signal file is not a valid signal spec: {e}")))?;
    match raw {
        RawInput::One(s) => Ok(SignalInput::Single(s.into_signal()?)),
        RawInput::Many(v) => {
            let comps = v
                .into_iter()
                .map(SignalSpec::into_signal)
                .collect::<Result<Vec<_>>>()?;
            Ok(SignalInput::Vector(VectorSignal::new(comps)?))
        }
    }
}

pub fn read_signal(path: &Path) -> Result<SignalInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QtfaError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_signal(&text)
}

/// Quaternion points from a JSON array of `[w, x, y, z]`.
pub fn parse_points(text: &str) -> Result<Vec<Quaternion>> {
    let pts: Vec<Quaternion> = serde_json::from_str(text).map_err(|e| {
        QtfaError::Input(format!("point list must be a JSON array of [w,x,y,z]: {e}"))
    })?;
    if pts.is_empty() {
        return Err(QtfaError::Input("point list is empty".into()));
    }
    Ok(pts)
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| QtfaError::Io(e.error))?;
    Ok(())
}

fn grid_meta(g: &UniformGrid) -> String {
    format!("{:?},{:?},{}", g.start, g.end, g.n)
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// CSV with `#` metadata lines, then `x,omega,qw,qx,qy,qz,abs`.
pub fn field_to_csv(f: &TimeFreqField) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# kind={}", if f.full { "full" } else { "true" });
    let _ = writeln!(s, "# window_order={}", f.window_order);
    let _ = writeln!(s, "# slice={}", f.slice_unit.label());
    let _ = writeln!(s, "# x_grid={}", grid_meta(&f.x_grid));
    let _ = writeln!(s, "# omega_grid={}", grid_meta(&f.omega_grid));
    let _ = writeln!(s, "# norms_sq={}", join_f64(&f.norms_sq));
    s.push_str("x,omega,qw,qx,qy,qz,abs\n");
    for ix in 0..f.x_grid.n {
        let x = f.x_grid.point(ix);
        for iw in 0..f.omega_grid.n {
            let v = f.get(ix, iw);
            let _ = writeln!(
                s,
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                x,
                f.omega_grid.point(iw),
                v.w,
                v.x,
                v.y,
                v.z,
                v.norm()
            );
        }
    }
    s
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| QtfaError::Input(format!("bad {what} {s:?}: {e}")))?;
    if !v.is_finite() {
        return Err(QtfaError::Input(format!("{what} {s:?} is not finite")));
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<UniformGrid> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(QtfaError::Input(format!(
            "grid metadata {s:?} must be start,end,n"
        )));
    }
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|e| QtfaError::Input(format!("bad grid size {:?}: {e}", parts[2])))?;
    UniformGrid::new(
        parse_f64(parts[0], "grid start")?,
        parse_f64(parts[1], "grid end")?,
        n,
    )
}

pub fn field_from_csv(text: &str) -> Result<TimeFreqField> {
    let mut meta = std::collections::BTreeMap::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in text.lines().enumerate() {
        if let Some(m) = line.strip_prefix('#') {
            if let Some((k, v)) = m.trim().split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != "x,omega,qw,qx,qy,qz,abs" {
                return Err(QtfaError::Input(format!(
                    "unexpected field header {line:?}"
                )));
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(QtfaError::Input(format!(
                "line {}: expected 7 columns, got {}",
                lineno + 1,
                cols.len()
            )));
        }
        let mut v = [0.0; 6];
        for (slot, c) in v.iter_mut().zip(&cols[..6]) {
            *slot = parse_f64(c, "field value")?;
        }
        rows.push(v);
    }
    let get = |k: &str| {
        meta.get(k)
            .ok_or_else(|| QtfaError::Input(format!("field metadata is missing {k:?}")))
    };
    let full = match get("kind")?.as_str() {
        "true" => false,
        "full" => true,
        other => return Err(QtfaError::Input(format!("unknown field kind {other:?}"))),
    };
    let window_order: u32 = get("window_order")?
        .parse()
        .map_err(|e| QtfaError::Input(format!("bad window_order: {e}")))?;
    let slice_unit = ImaginaryUnit::parse(get("slice")?)?;
    let x_grid = parse_grid(get("x_grid")?)?;
    let omega_grid = parse_grid(get("omega_grid")?)?;
    let norms_sq = get("norms_sq")?
        .split(',')
        .map(|s| parse_f64(s, "norm"))
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != x_grid.n * omega_grid.n {
        return Err(QtfaError::Input(format!(
            "field has {} rows but the grids need {}",
            rows.len(),
            x_grid.n * omega_grid.n
        )));
    }
    let tol = |g: &UniformGrid| 1e-9 * (g.start.abs().max(g.end.abs()) + 1.0);
    let mut values = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let (ix, iw) = (i / omega_grid.n, i % omega_grid.n);
        if (r[0] - x_grid.point(ix)).abs() > tol(&x_grid)
            || (r[1] - omega_grid.point(iw)).abs() > tol(&omega_grid)
        {
            return Err(QtfaError::Input(format!(
                "row {} is off the declared grid",
                i + 1
            )));
        }
        values.push(Quaternion::new(r[2], r[3], r[4], r[5]));
    }
    Ok(TimeFreqField {
        x_grid,
        omega_grid,
        values,
        slice_unit,
        window_order,
        full,
        norms_sq,
    })
}

pub fn read_field(path: &Path) -> Result<TimeFreqField> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QtfaError::Input(format!("cannot read {}: {e}", path.display())))?;
    field_from_csv(&text)
}

/// Appends a quaternion as four comma-separated columns.
pub fn push_quaternion(s: &mut String, q: Quaternion) {
    let _ = write!(s, "{:?},{:?},{:?},{:?}", q.w, q.x, q.y, q.z);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        let s =
            parse_signal(r#"{"type":"hermite_coeffs","coeffs":[[1,0,0,0],[0,0.5,0,0]]}"#).unwrap();
        assert!(matches!(s, SignalInput::Single(Signal::Hermite(ref h)) if h.len() == 2));
        let v = parse_signal(
            r#"[{"type":"hermite_coeffs","coeffs":[[1,0,0,0]]},{"type":"samples","t0":-1,"dt":0.5,"values":[[0,0,0,0],[1,0,0,0],[0,0,0,0]]}]"#,
        )
        .unwrap();
        assert!(matches!(v, SignalInput::Vector(ref vs) if vs.components.len() == 2));
        assert!(parse_signal(r#"{"type":"hermite_coeffs","coeffs":[]}"#).is_err());
        assert!(parse_signal(r#"{"type":"hermite_coeffs","coeffs":[[1,0,0]]}"#).is_err());
        assert!(parse_signal(r#"{"type":"wavelet"}"#).is_err());
        assert!(parse_signal("not json").is_err());
    }

    #[test]
    fn field_round_trip() {
        let g = UniformGrid::new(-1.0, 1.0, 3).unwrap();
        let mut f = TimeFreqField::zeros(
            g,
            UniformGrid::new(-0.5, 0.7, 2).unwrap(),
            ImaginaryUnit::from_direction(1.0, 2.0, 2.0).unwrap(),
            3,
        );
        for (i, v) in f.values.iter_mut().enumerate() {
            *v = Quaternion::new(0.1 * i as f64, 1.0 / 3.0, -1e-310, std::f64::consts::PI);
        }
        f.norms_sq = vec![0.999_999_999_999_9];
        let back = field_from_csv(&field_to_csv(&f)).unwrap();
        assert_eq!(back, f);
        let mut bad = field_to_csv(&f);
        bad.push_str("0,0,0,0,0,0,0\n");
        assert!(field_from_csv(&bad).is_err());
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"a").unwrap();
        write_atomic(&p, b"b").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"b");
    }

    #[test]
    fn points() {
        assert_eq!(
            parse_points("[[0,0,0,0],[1,2,3,4]]").unwrap()[1],
            Quaternion::new(1.0, 2.0, 3.0, 4.0)
        );
        assert!(parse_points("[[0,0]]").is_err());
        assert!(parse_points("[]").is_err());
    }
}
