//! JSON-serialisable report schemas shared by the CLI, the audits, and the
//! solvers. Reports are deterministic for a fixed config and seed; wall-clock
//! metadata goes into a separate sidecar file, never into the report itself.

use serde::Serialize;

use crate::grid::{Grid, TimeLadder};

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub half_width: f64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_segments: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<f64>,
}

impl GridMeta {
    pub fn space_only(grid: Grid) -> Self {
        GridMeta {
            half_width: grid.half_width(),
            n: grid.n(),
            t_horizon: None,
            time_segments: None,
            grading: None,
        }
    }

    pub fn space_time(grid: Grid, ladder: &TimeLadder) -> Self {
        GridMeta {
            half_width: grid.half_width(),
            n: grid.n(),
            t_horizon: Some(ladder.horizon()),
            time_segments: Some(ladder.segments()),
            grading: Some(ladder.grading()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioEntry {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioEntry {
    pub fn new(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 {
            0.0
        } else {
            lhs / rhs
        };
        RatioEntry {
            label: label.into(),
            lhs,
            rhs,
            ratio,
        }
    }
}

/// Measured left/right sides of one inequality over a sample set, with the
/// empirical constant `max_ratio` taken over the entries that gate
/// acceptance (informational entries carry `gated = false`).
#[derive(Debug, Clone, Serialize)]
pub struct EstimateAudit {
    pub inequality: String,
    pub sample_grid: GridMeta,
    pub max_ratio: f64,
    pub ratios: Vec<RatioEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub informational: Vec<RatioEntry>,
}

impl EstimateAudit {
    pub fn new(inequality: impl Into<String>, sample_grid: GridMeta) -> Self {
        EstimateAudit {
            inequality: inequality.into(),
            sample_grid,
            max_ratio: 0.0,
            ratios: Vec::new(),
            informational: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: RatioEntry) {
        self.max_ratio = self.max_ratio.max(entry.ratio);
        self.ratios.push(entry);
    }

    pub fn push_informational(&mut self, entry: RatioEntry) {
        self.informational.push(entry);
    }

    /// Plain-text table, one aligned row per entry.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "audit {}  (max ratio {:.6})\n",
            self.inequality, self.max_ratio
        ));
        let width = self
            .ratios
            .iter()
            .chain(&self.informational)
            .map(|e| e.label.len())
            .max()
            .unwrap_or(8)
            .max(8);
        for e in self.ratios.iter().chain(&self.informational) {
            out.push_str(&format!(
                "  {:<w$}  lhs {:>13.6e}  rhs {:>13.6e}  ratio {:>11.6}\n",
                e.label,
                e.lhs,
                e.rhs,
                e.ratio,
                w = width
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        NamedValue {
            name: name.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ConservationReport {
    pub mass_drift: f64,
    pub momentum_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_series: Option<Vec<f64>>,
    pub inf_volume: f64,
}

/// One solver run: data sizes, Picard history, norm-box values, and the
/// conservation diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub system: String,
    pub m_initial: f64,
    pub t_horizon: f64,
    pub grid: GridMeta,
    pub seed: u64,
    pub data_specs: Vec<(String, String)>,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
    pub norm_box: Vec<NamedValue>,
    pub conservation: ConservationReport,
}
