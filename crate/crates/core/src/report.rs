//! Verification reports: per-check maximum residuals against a tolerance.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::geometry::Classification;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked, as a formula.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// A check whose hypotheses do not hold for the spec. The residual is still
/// recorded for information.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCheck {
    pub id: String,
    pub anchor: String,
    pub reason: String,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub spec_label: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckRecord>,
    pub flags: BTreeMap<String, bool>,
    pub skipped: Vec<SkippedCheck>,
}

impl Report {
    pub fn new(spec_label: &str, seed: u64, samples: usize) -> Self {
        Self {
            spec_label: spec_label.to_string(),
            seed,
            samples,
            checks: Vec::new(),
            flags: BTreeMap::new(),
            skipped: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn skipped_check(&self, id: &str) -> Option<&SkippedCheck> {
        self.skipped.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn set_classification(&mut self, c: &Classification) {
        self.flags.insert("torsion_free".into(), c.torsion_free);
        self.flags
            .insert("metric_parallel".into(), c.metric_parallel);
        self.flags
            .insert("quasi_statistical".into(), c.quasi_statistical);
        self.flags.insert("flat".into(), c.flat);
        self.flags.insert("hessian".into(), c.hessian);
    }

    /// Appends another report's checks, skipped entries and flags, keeping
    /// everything ordered by id.
    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.skipped.extend(other.skipped);
        self.flags.extend(other.flags);
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self.skipped.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Entry {
    anchor: String,
    skip_reason: Option<String>,
    residual: f64,
}

/// Accumulates maximum residuals per check id.
pub struct CheckSet {
    tol: f64,
    entries: BTreeMap<String, Entry>,
}

impl CheckSet {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            entries: BTreeMap::new(),
        }
    }

    /// Declares a check. `skip_reason` moves it to the skipped list.
    pub fn define(&mut self, id: &str, anchor: &str, skip_reason: Option<String>) {
        self.entries.insert(
            id.to_string(),
            Entry {
                anchor: anchor.to_string(),
                skip_reason,
                residual: 0.0,
            },
        );
    }

    /// Records a residual (absolute value taken). NaN is sticky.
    pub fn observe(&mut self, id: &str, value: f64) {
        let e = self
            .entries
            .get_mut(id)
            .unwrap_or_else(|| panic!("check `{id}` observed before being defined"));
        let v = value.abs();
        if v.is_nan() || e.residual.is_nan() {
            e.residual = f64::NAN;
        } else if v > e.residual {
            e.residual = v;
        }
    }

    pub fn observe_all(&mut self, id: &str, values: impl IntoIterator<Item = f64>) {
        for v in values {
            self.observe(id, v);
        }
    }

    /// Current maximum residual of a defined check.
    pub fn residual(&self, id: &str) -> Option<f64> {
        self.entries.get(id).map(|e| e.residual)
    }

    pub fn is_active(&self, id: &str) -> bool {
        self.entries
            .get(id)
            .is_some_and(|e| e.skip_reason.is_none())
    }

    pub fn into_report(self, mut report: Report) -> Report {
        for (id, e) in self.entries {
            match e.skip_reason {
                None => report.checks.push(CheckRecord {
                    id,
                    anchor: e.anchor,
                    max_residual: e.residual,
                    tolerance: self.tol,
                    pass: e.residual <= self.tol,
                }),
                Some(reason) => report.skipped.push(SkippedCheck {
                    id,
                    anchor: e.anchor,
                    reason,
                    max_residual: e.residual,
                }),
            }
        }
        report.checks.sort_by(|a, b| a.id.cmp(&b.id));
        report.skipped.sort_by(|a, b| a.id.cmp(&b.id));
        report
    }
}
