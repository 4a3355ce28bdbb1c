use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qtfa::bargmann::{full_poly_bargmann, true_poly_bargmann, Route};
use qtfa::io::{
    field_to_csv, parse_points, push_quaternion, read_field, read_signal, write_atomic, SignalInput,
};
use qtfa::numerics::UniformGrid;
use qtfa::qstft::{
    compute_field, compute_full_field, default_grid, extent_ratio, full_adjoint, reconstruct_many,
};
use qtfa::signal::{Signal, VectorSignal};
use qtfa::verify::{self, Suite, Tolerances};
use qtfa::{ImaginaryUnit, QtfaError, Quaternion, Result};

#[derive(Parser)]
#[command(
    name = "qtfa",
    version,
    about = "Quaternionic time-frequency analysis with Hermite windows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the QSTFT of a signal on a time-frequency grid.
    Spectrogram {
        input: PathBuf,
        #[arg(short = 'n', long = "window-order")]
        window_order: Option<u32>,
        /// Treat the input as a vector signal and sum over window orders.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value = "i")]
        slice: String,
        /// "xmin,xmax,nx,wmin,wmax,nw"
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the polyanalytic Bargmann transform by both routes.
    Bargmann {
        input: PathBuf,
        #[arg(short = 'n', long = "window-order")]
        window_order: Option<u32>,
        /// JSON array of [w,x,y,z] points.
        #[arg(long, conflicts_with = "grid")]
        points: Option<PathBuf>,
        /// "xmin,xmax,nx,ymin,ymax,ny" on the chosen slice.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, default_value = "i")]
        slice: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a signal from a field CSV.
    Reconstruct {
        field: PathBuf,
        #[arg(short = 'n', long = "window-order")]
        window_order: u32,
        /// "ymin,ymax,ny"
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2,41")]
        y: String,
        /// Signal file to compare against.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance override "name=value"; repeatable.
        #[arg(long)]
        tol: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: QtfaError| e.to_string())
}

fn parse_numbers(s: &str, want: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != want {
        return Err(QtfaError::Input(format!(
            "{what} needs {want} comma-separated values, got '{s}'"
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| QtfaError::Input(format!("bad number '{p}' in {what}")))
        })
        .collect()
}

fn parse_axis(start: f64, end: f64, n: f64, what: &str) -> Result<UniformGrid> {
    if n.fract() != 0.0 || n < 2.0 {
        return Err(QtfaError::Input(format!(
            "{what} node count must be an integer >= 2"
        )));
    }
    UniformGrid::new(start, end, n as usize)
}

fn parse_grid(s: &str) -> Result<(UniformGrid, UniformGrid)> {
    let v = parse_numbers(s, 6, "--grid")?;
    Ok((
        parse_axis(v[0], v[1], v[2], "x")?,
        parse_axis(v[3], v[4], v[5], "omega")?,
    ))
}

/// Default grid half-width covering the signal.
fn default_axis(sig: &Signal, n: u32) -> Result<UniformGrid> {
    match sig {
        Signal::Hermite(h) => Ok(default_grid(n, h.len())),
        Signal::Samples(s) => {
            let half = s.t0.abs().max(s.t_end().abs()) + 4.0 + (n as f64).sqrt();
            UniformGrid::symmetric(half, qtfa::qstft::DEFAULT_GRID_NODES)
        }
    }
}

fn default_axis_vec(v: &VectorSignal) -> Result<UniformGrid> {
    let n = v.order();
    let mut widest = default_axis(&v.components[0], n)?;
    for c in &v.components[1..] {
        let g = default_axis(c, n)?;
        if g.end > widest.end {
            widest = g;
        }
    }
    Ok(widest)
}

fn vector_of(input: SignalInput) -> Result<VectorSignal> {
    match input {
        SignalInput::Single(s) => VectorSignal::new(vec![s]),
        SignalInput::Vector(v) => Ok(v),
    }
}

fn check_order(given: Option<u32>, order: u32) -> Result<()> {
    match given {
        Some(n) if n != order => Err(QtfaError::Input(format!(
            "--window-order {n} does not match the vector signal order {order}"
        ))),
        _ => Ok(()),
    }
}

fn spectrogram(
    input: &Path,
    window_order: Option<u32>,
    full: bool,
    slice: &str,
    grid: Option<&str>,
    out: &Path,
) -> Result<()> {
    let unit = ImaginaryUnit::parse(slice)?;
    let signal = read_signal(input)?;
    let field = if full {
        let v = vector_of(signal)?;
        check_order(window_order, v.order())?;
        let (xg, wg) = match grid {
            Some(g) => parse_grid(g)?,
            None => {
                let g = default_axis_vec(&v)?;
                (g, g)
            }
        };
        compute_full_field(&v, xg, wg, unit)?
    } else {
        let SignalInput::Single(s) = signal else {
            return Err(QtfaError::Input("vector signal needs --full".into()));
        };
        let n = window_order.unwrap_or(0);
        let (xg, wg) = match grid {
            Some(g) => parse_grid(g)?,
            None => {
                let g = default_axis(&s, n)?;
                (g, g)
            }
        };
        compute_field(&s, n, xg, wg, unit)?
    };
    if field.values.iter().any(|v| !v.is_finite()) {
        return Err(QtfaError::Numerical("field has non-finite values".into()));
    }
    let edge = extent_ratio(&field);
    if edge > 1e-6 {
        eprintln!("warning: field at the grid boundary is {edge:.3e} of its peak");
    }
    write_atomic(out, field_to_csv(&field).as_bytes())
}

fn bargmann(
    input: &Path,
    window_order: Option<u32>,
    points: Option<&Path>,
    grid: Option<&str>,
    slice: &str,
    out: &Path,
) -> Result<()> {
    let signal = read_signal(input)?;
    let qs = match (points, grid) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| QtfaError::Input(format!("cannot read {}: {e}", p.display())))?;
            parse_points(&text)?
        }
        (None, Some(g)) => {
            let unit = ImaginaryUnit::parse(slice)?;
            let (xg, yg) = parse_grid(g)?;
            xg.points()
                .into_iter()
                .flat_map(|x| yg.points().into_iter().map(move |y| unit.point(x, y)))
                .collect()
        }
        (None, None) => return Err(QtfaError::Input("give --points or --grid".into())),
    };
    if qs.iter().any(|q| !q.is_finite()) {
        return Err(QtfaError::Input("points must be finite".into()));
    }
    let eval = |q: Quaternion, route: Route| -> Result<Quaternion> {
        match &signal {
            SignalInput::Single(s) => true_poly_bargmann(s, window_order.unwrap_or(0), q, route),
            SignalInput::Vector(v) => {
                check_order(window_order, v.order())?;
                full_poly_bargmann(v, q, route)
            }
        }
    };
    let mut csv = String::new();
    let order = match &signal {
        SignalInput::Single(_) => window_order.unwrap_or(0),
        SignalInput::Vector(v) => v.order(),
    };
    let _ = writeln!(csv, "# window_order={order}");
    let _ = writeln!(
        csv,
        "# kind={}",
        if matches!(signal, SignalInput::Vector(_)) {
            "full"
        } else {
            "true"
        }
    );
    csv.push_str(
        "qw,qx,qy,qz,coeff_w,coeff_x,coeff_y,coeff_z,closed_w,closed_x,closed_y,closed_z,diff\n",
    );
    let mut worst: f64 = 0.0;
    for q in qs {
        let a = eval(q, Route::Coefficient)?;
        let b = eval(q, Route::Closed)?;
        if !(a.is_finite() && b.is_finite()) {
            return Err(QtfaError::Numerical(format!("non-finite transform at {q}")));
        }
        let d = a.dist(b);
        worst = worst.max(d);
        for (i, v) in [q, a, b].into_iter().enumerate() {
            if i > 0 {
                csv.push(',');
            }
            push_quaternion(&mut csv, v);
        }
        let _ = writeln!(csv, ",{d:?}");
    }
    write_atomic(out, csv.as_bytes())?;
    println!("max route difference {worst:?}");
    Ok(())
}

fn reconstruct(field: &Path, n: u32, y: &str, reference: Option<&Path>, out: &Path) -> Result<()> {
    let f = read_field(field)?;
    let v = parse_numbers(y, 3, "--y")?;
    let ys = parse_axis(v[0], v[1], v[2], "y")?.points();
    let rows: Vec<Vec<Quaternion>> = if f.full {
        let mut rows = Vec::with_capacity(ys.len());
        for &y in &ys {
            rows.push(
                full_adjoint(&f, n, y)?
                    .into_iter()
                    .map(|q| q.scale(0.5))
                    .collect(),
            );
        }
        rows
    } else {
        reconstruct_many(&f, n, &ys)?
            .into_iter()
            .map(|q| vec![q])
            .collect()
    };
    let refs: Option<Vec<Signal>> = match reference {
        None => None,
        Some(p) => Some(match read_signal(p)? {
            SignalInput::Single(s) => vec![s],
            SignalInput::Vector(v) => v.components,
        }),
    };
    if let Some(r) = &refs {
        if r.len() != rows[0].len() {
            return Err(QtfaError::Input(format!(
                "reference has {} components, field has {}",
                r.len(),
                rows[0].len()
            )));
        }
    }
    let mut csv = format!(
        "# window_order={n}\n# kind={}\ny",
        if f.full { "full" } else { "true" }
    );
    for j in 0..rows[0].len() {
        let _ = write!(csv, ",w{j},x{j},y{j},z{j}");
    }
    if refs.is_some() {
        csv.push_str(",error");
    }
    csv.push('\n');
    let mut worst: f64 = 0.0;
    for (y, row) in ys.iter().zip(&rows) {
        let _ = write!(csv, "{y:?}");
        let mut err: f64 = 0.0;
        for (j, q) in row.iter().enumerate() {
            csv.push(',');
            push_quaternion(&mut csv, *q);
            if let Some(r) = &refs {
                let want = match &r[j] {
                    Signal::Hermite(h) => h.eval(*y),
                    s => s.to_expansion(qtfa::signal::MAX_COEFFS)?.eval(*y),
                };
                err = err.max(q.dist(want));
            }
        }
        if refs.is_some() {
            let _ = write!(csv, ",{err:?}");
        }
        csv.push('\n');
        worst = worst.max(if refs.is_some() {
            err
        } else {
            row.iter().map(|q| q.norm()).fold(0.0, f64::max)
        });
    }
    write_atomic(out, csv.as_bytes())?;
    if refs.is_some() {
        println!("max abs error {worst:?}");
    } else {
        println!("max abs value {worst:?}");
    }
    Ok(())
}

fn verify(
    suite: Suite,
    seed: u64,
    tol: &[String],
    format: Format,
    out: Option<&Path>,
) -> Result<bool> {
    let mut t = Tolerances::default();
    for spec in tol {
        t.apply_override(spec)?;
    }
    let report = verify::run(suite, seed, &t)?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(p) = out {
        write_atomic(p, json.as_bytes())?;
    }
    match format {
        Format::Table => print!("{}", report.table()),
        Format::Json => print!("{json}"),
    }
    Ok(report.pass)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QTFA_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            QtfaError::Input(format!(
                "QTFA_THREADS must be a positive integer, got '{v}'"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| QtfaError::Input(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Spectrogram {
            input,
            window_order,
            full,
            slice,
            grid,
            out,
        } => spectrogram(&input, window_order, full, &slice, grid.as_deref(), &out)?,
        Command::Bargmann {
            input,
            window_order,
            points,
            grid,
            slice,
            out,
        } => bargmann(
            &input,
            window_order,
            points.as_deref(),
            grid.as_deref(),
            &slice,
            &out,
        )?,
        Command::Reconstruct {
            field,
            window_order,
            y,
            reference,
            out,
        } => reconstruct(&field, window_order, &y, reference.as_deref(), &out)?,
        Command::Verify {
            suite,
            seed,
            tol,
            format,
            out,
        } => return verify(suite, seed, &tol, format, out.as_deref()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
