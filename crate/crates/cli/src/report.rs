//! JSON and plain-text renderings of a run.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::runner::{RunReport, Status};

/// Pretty printer that writes every float with 17 significant digits.
struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with keys in sorted order. `elapsed_seconds` is attached
/// only when given, so untimed reports are byte-identical across runs.
pub fn to_json(report: &RunReport, elapsed: Option<f64>) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    if let (Some(t), Value::Object(map)) = (elapsed, &mut value) {
        map.insert("elapsed_seconds".into(), serde_json::json!(t));
    }
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report serializes");
    out.push(b'\n');
    String::from_utf8(out).expect("json is utf-8")
}

pub fn to_text(report: &RunReport, elapsed: Option<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "manifest {} (seed {}, tol {:e})", report.manifest, report.seed, report.tol);
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS   ",
            Status::Fail => "FAIL   ",
            Status::Vacuous => "VACUOUS",
            Status::Error => "ERROR  ",
        };
        let _ = writeln!(out, "{tag} {:width$}  {}", c.name, c.message);
    }
    let _ = writeln!(
        out,
        "{} passed, {} vacuous, {} failed, {} errors",
        report.count(Status::Pass),
        report.count(Status::Vacuous),
        report.count(Status::Fail),
        report.count(Status::Error)
    );
    if let Some(t) = elapsed {
        let _ = writeln!(out, "elapsed {t:.3} s");
    }
    out
}
