//! Runs every check of a manifest in parallel with per-check random
//! streams, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::checks::{evaluate, Metrics};
use crate::manifest::{Expect, Manifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The check held only because its hypothesis was not met.
    Vacuous,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub kind: &'static str,
    /// Raw verdict of the check, absent when it errored.
    pub verdict: Option<bool>,
    pub expect: &'static str,
    pub status: Status,
    pub message: String,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub manifest: String,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckOutcome>,
}

impl RunReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// 0 when no check failed or errored, 2 when any errored, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Error) > 0 {
            2
        } else if self.count(Status::Fail) > 0 {
            1
        } else {
            0
        }
    }
}

pub fn check_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn run_check(manifest: &Manifest, index: usize, seed: u64) -> CheckOutcome {
    let spec = &manifest.checks[index];
    let expect = spec.expect.unwrap_or(Expect::Pass);
    let (verdict, metrics) = evaluate(manifest, index, check_rng(seed, index));
    let expect_str = match expect {
        Expect::Pass => "pass",
        Expect::Fail => "fail",
    };
    let (verdict, status, message) = match verdict {
        Ok(v) => {
            let vacuous = metrics.get("vacuous") == Some(&serde_json::Value::Bool(true));
            let status = match (v == (expect == Expect::Pass), vacuous && v) {
                (true, true) => Status::Vacuous,
                (true, false) => Status::Pass,
                (false, _) => Status::Fail,
            };
            let message = format!("check {}, expected to {expect_str}", if v { "held" } else { "did not hold" });
            (Some(v), status, message)
        }
        Err(e) => (None, Status::Error, e.to_string()),
    };
    CheckOutcome {
        name: manifest.check_label(index),
        kind: spec.kind.as_str(),
        verdict,
        expect: expect_str,
        status,
        message,
        metrics,
    }
}

/// Runs all checks; `seed` and `tol` override the manifest values.
pub fn run_manifest(manifest: &Manifest, seed: Option<u64>, tol: Option<f64>) -> RunReport {
    let mut manifest = manifest.clone();
    if let Some(t) = tol {
        manifest.tol = t;
    }
    let seed = seed.unwrap_or(manifest.seed);
    let checks = (0..manifest.checks.len()).into_par_iter().map(|i| run_check(&manifest, i, seed)).collect();
    RunReport { version: env!("CARGO_PKG_VERSION"), manifest: manifest.name.clone(), seed, tol: manifest.tol, checks }
}
