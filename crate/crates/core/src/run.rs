//! Suite orchestration shared by the CLI and the tests.

use serde::Serialize;

use crate::genbundle::generalized_suite;
use crate::geometry::{classify_points, GeometryError, ManifoldSpec, Symmetry};
use crate::lifts::{lifted_invariant_suite, Bundle};
use crate::manifest::{Manifest, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};
use crate::norden::norden_suite;
use crate::report::{CheckSet, Report};
use crate::sampling::{self, Interval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub fiber: Interval,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOLERANCE,
            fiber: (-1.0, 1.0),
        }
    }
}

impl SuiteOptions {
    /// Run settings recorded in a manifest.
    pub fn from_manifest(m: &Manifest) -> Self {
        Self {
            samples: m.samples,
            seed: m.seed,
            tol: m.tolerance,
            fiber: (m.fiber_domain[0], m.fiber_domain[1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Generalized,
    Lift,
    Norden,
    All,
}

/// Classification flags plus a check that the metric has its declared
/// symmetry class at the sample points.
pub fn classify_report(spec: &ManifoldSpec, opts: &SuiteOptions) -> Result<Report, GeometryError> {
    let points = sampling::sample_box(spec.domain(), opts.samples.max(1), opts.seed);
    let cls = classify_points(&spec.connection(), spec.metric(), &points, opts.tol)?;
    let mut set = CheckSet::new(opts.tol);
    let sign = spec.symmetry().sign();
    let skip = sign
        .is_none()
        .then(|| "no symmetry class declared".to_string());
    set.define("classify.symmetry", "h_ij = ±h_ji as declared", skip);
    set.define(
        "classify.nondegenerate",
        "h is invertible at every sample",
        None,
    );
    for p in &points {
        let h = spec.metric_checked(p)?;
        set.observe("classify.nondegenerate", 0.0);
        if let Some(s) = sign {
            for (i, row) in h.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    set.observe("classify.symmetry", v - s * h[j][i]);
                }
            }
        }
    }
    let mut report = Report::new(spec.label(), opts.seed, points.len());
    report.set_classification(&cls);
    report
        .flags
        .insert("symmetric".into(), spec.symmetry() == Symmetry::Symmetric);
    Ok(set.into_report(report))
}

/// Runs a command. `bundle = None` runs lift and norden suites on both
/// bundles.
pub fn run(
    command: Command,
    spec: &ManifoldSpec,
    bundle: Option<Bundle>,
    opts: &SuiteOptions,
) -> Result<Report, GeometryError> {
    let bundles: Vec<Bundle> = match bundle {
        Some(b) => vec![b],
        None => vec![Bundle::Cotangent, Bundle::Tangent],
    };
    let mut report = classify_report(spec, opts)?;
    match command {
        Command::Classify => {}
        Command::Generalized => report.merge(generalized_suite(spec, opts)?),
        Command::Lift => {
            for b in bundles {
                report.merge(lifted_invariant_suite(spec, b, opts)?);
            }
        }
        Command::Norden => {
            for b in bundles {
                report.merge(norden_suite(spec, b, opts)?);
            }
        }
        Command::All => {
            report.merge(generalized_suite(spec, opts)?);
            for b in bundles {
                report.merge(lifted_invariant_suite(spec, b, opts)?);
                report.merge(norden_suite(spec, b, opts)?);
            }
        }
    }
    Ok(report)
}
