use serde::{Deserialize, Serialize};

/// Version of the JSON layout written by [`VerdictReport`].
pub const SCHEMA_VERSION: u32 = 1;

/// Acceptance rule for an empirical value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tolerance {
    AtMost { bound: f64 },
    AtLeast { bound: f64 },
    Within { lo: f64, hi: f64 },
    Finite,
}

impl Tolerance {
    pub fn admits(&self, v: f64) -> bool {
        match *self {
            Self::AtMost { bound } => v <= bound,
            Self::AtLeast { bound } => v >= bound,
            Self::Within { lo, hi } => v >= lo && v <= hi,
            Self::Finite => v.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub quantity: String,
    pub empirical: f64,
    pub tolerance: Tolerance,
    /// `value(2N) / value(N)` for refinement checks.
    pub stability_ratio: Option<f64>,
    /// Allowed `|ratio - 1|`.
    pub stability_allowed: Option<f64>,
    pub pass: bool,
    pub mandatory: bool,
    pub config_hash: String,
}

/// A table written as one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Outcome of one suite. `pass` holds iff every mandatory check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub suite: String,
    pub config_hash: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub curves: Vec<Curve>,
}

/// `fine / coarse`, with `0/0` read as `1`.
pub fn refinement_ratio(coarse: f64, fine: f64) -> f64 {
    if coarse == 0.0 && fine == 0.0 {
        1.0
    } else {
        fine / coarse
    }
}

impl VerdictReport {
    pub fn new(suite: impl Into<String>, config_hash: impl Into<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            config_hash: config_hash.into(),
            pass: true,
            checks: Vec::new(),
            curves: Vec::new(),
        }
    }

    fn push(&mut self, record: CheckRecord) {
        if record.mandatory && !record.pass {
            self.pass = false;
        }
        self.checks.push(record);
    }

    fn record(&self, quantity: String, empirical: f64, tolerance: Tolerance, mandatory: bool) -> CheckRecord {
        CheckRecord {
            pass: tolerance.admits(empirical),
            quantity,
            empirical,
            tolerance,
            stability_ratio: None,
            stability_allowed: None,
            mandatory,
            config_hash: self.config_hash.clone(),
        }
    }

    /// A mandatory check.
    pub fn check(&mut self, quantity: impl Into<String>, empirical: f64, tolerance: Tolerance) -> bool {
        let r = self.record(quantity.into(), empirical, tolerance, true);
        let pass = r.pass;
        self.push(r);
        pass
    }

    /// A recorded value that does not enter the verdict.
    pub fn info(&mut self, quantity: impl Into<String>, empirical: f64, tolerance: Tolerance) {
        let r = self.record(quantity.into(), empirical, tolerance, false);
        self.push(r);
    }

    /// A mandatory finite constant measured at `N` and `2N`; it passes when
    /// both values are finite and `|fine/coarse - 1| <= allowed`.
    pub fn stable(&mut self, quantity: impl Into<String>, coarse: f64, fine: f64, allowed: f64) -> bool {
        let ratio = refinement_ratio(coarse, fine);
        let mut r = self.record(quantity.into(), coarse, Tolerance::Finite, true);
        r.pass = r.pass && fine.is_finite() && (ratio - 1.0).abs() <= allowed;
        r.stability_ratio = Some(ratio);
        r.stability_allowed = Some(allowed);
        let pass = r.pass;
        self.push(r);
        pass
    }

    pub fn curve(&mut self, curve: Curve) {
        self.curves.push(curve);
    }

    pub fn find(&self, quantity: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.quantity == quantity)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.mandatory && !c.pass)
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
