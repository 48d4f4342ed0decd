use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use tsmap::report::{to_json, to_text};
use tsmap::runner::run_manifest;
use tsmap_core::clairaut::{clairaut_trace, ClairautParams, HSpec, Start};

#[derive(Parser)]
#[command(name = "tsmap", version, about = "Numerical checks for anti-invariant Riemannian maps to trans-Sasakian manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a manifest and print a report.
    Check {
        /// Manifest path, or `builtin:NAME` for a bundled one.
        manifest: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Default tolerance for checks that do not set their own.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Integrate one geodesic and dump it as CSV with θ and the Clairaut invariant.
    Geodesic {
        manifest: String,
        #[arg(long)]
        map: String,
        /// `p1,p2,...;v1,v2,...`
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Expression for h on the codomain, or `constant`.
        #[arg(long, default_value = "constant")]
        h: String,
        /// Declared frames supplying (range π*)⊥ along the curve.
        #[arg(long)]
        frames: Option<String>,
        /// The start lives on the domain and is pushed forward by the map.
        #[arg(long)]
        lifted: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Parse and resolve a manifest without running it.
    Validate { manifest: String },
}

fn emit(out: Option<&str>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_start(text: &str) -> Result<(DVector<f64>, DVector<f64>), String> {
    let (p, v) = text.split_once(';').ok_or("--start must look like `p1,p2,...;v1,v2,...`")?;
    let parse = |s: &str| -> Result<DVector<f64>, String> {
        let xs = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}` in --start: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DVector::from_vec(xs))
    };
    Ok((parse(p)?, parse(v)?))
}

#[allow(clippy::too_many_arguments)]
fn geodesic(
    manifest: &str,
    map: &str,
    start: &str,
    length: f64,
    step: f64,
    h: &str,
    frames: Option<&str>,
    lifted: bool,
    out: Option<&str>,
) -> Result<(), String> {
    let m = tsmap::load(manifest).map_err(|e| e.to_string())?;
    let spec = m.maps.get(map).ok_or_else(|| format!("no map `{map}` in manifest"))?;
    let declared = match frames {
        Some(name) => {
            let (owner, f) = m.frames.get(name).ok_or_else(|| format!("no frames `{name}` in manifest"))?;
            if owner != map {
                return Err(format!("frames `{name}` belong to map `{owner}`"));
            }
            Some((**f).clone())
        }
        None => None,
    };
    let hspec = if h == "constant" {
        HSpec::FitConstant
    } else {
        HSpec::Expr(spec.codomain.parse(h).map_err(|e| e.to_string())?)
    };
    let (point, velocity) = parse_start(start)?;
    let start = if lifted { Start::Lifted { point, velocity } } else { Start::Codomain { point, velocity } };
    let params = ClairautParams { length, step, tol: m.tol };
    let trace = clairaut_trace(spec, &hspec, declared.as_ref(), &start, params).map_err(|e| e.to_string())?;
    let n = spec.codomain.dim();
    let mut csv = String::from("s");
    for i in 1..=n {
        let _ = write!(csv, ",x{i}");
    }
    for i in 1..=n {
        let _ = write!(csv, ",v{i}");
    }
    csv.push_str(",theta,invariant\n");
    for (k, sample) in trace.base.samples.iter().enumerate() {
        let _ = write!(csv, "{:.16e}", sample.s);
        for x in sample.point.iter().chain(sample.velocity.iter()) {
            let _ = write!(csv, ",{x:.16e}");
        }
        let _ = writeln!(csv, ",{:.16e},{:.16e}", trace.theta[k], trace.invariant[k]);
    }
    emit(out, &csv)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { manifest, seed, tol, format, out, timing } => {
            let started = Instant::now();
            match tsmap::load(&manifest) {
                Ok(m) => {
                    let report = run_manifest(&m, seed, tol);
                    let elapsed = timing.then(|| started.elapsed().as_secs_f64());
                    let text = match format {
                        Format::Json => to_json(&report, elapsed),
                        Format::Text => to_text(&report, elapsed),
                    };
                    emit(out.as_deref(), &text).map(|_| report.exit_code())
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Geodesic { manifest, map, start, length, step, h, frames, lifted, out } => {
            geodesic(&manifest, &map, &start, length, step, &h, frames.as_deref(), lifted, out.as_deref()).map(|_| 0)
        }
        Command::Validate { manifest } => tsmap::load(&manifest).map(|m| {
            println!(
                "{}: {} manifolds, {} structures, {} maps, {} frames, {} checks",
                m.name,
                m.manifolds.len(),
                m.structures.len(),
                m.maps.len(),
                m.frames.len(),
                m.checks.len()
            );
            0
        })
        .map_err(|e| e.to_string()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
