use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{CliError, OutputFormat, RunConfig};

/// One verification suite outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checked: usize,
    pub violations: usize,
    pub max_slack: f64,
    pub wall_ms: u64,
    pub verdict: String,
}

impl SuiteResult {
    pub fn new(
        suite: impl Into<String>,
        checked: usize,
        violations: usize,
        max_slack: f64,
    ) -> Self {
        Self {
            suite: suite.into(),
            checked,
            violations,
            max_slack,
            wall_ms: 0,
            verdict: if violations == 0 {
                "pass".into()
            } else {
                "fail".into()
            },
        }
    }

    pub fn with_wall(mut self, ms: u64) -> Self {
        self.wall_ms = ms;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub epsilon_list: Vec<f64>,
    pub depth: usize,
}

impl ConfigEcho {
    pub fn from(config: &RunConfig) -> Self {
        Self {
            command: config.command.clone(),
            target: config.target.clone(),
            seed: config.seed,
            samples: config.samples,
            tolerance: config.tolerance,
            epsilon_list: config.epsilon_list.clone(),
            depth: config.depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSizeRow {
    pub epsilon: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: usize,
    pub samples: usize,
    pub open_samples: usize,
    pub captured: usize,
    /// Cluster representatives of the captured class.
    pub clusters: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub point: String,
    pub clearance: f64,
    pub height: f64,
    pub delta_to_base: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub suites: Vec<SuiteResult>,
    pub net_sizes: Vec<NetSizeRow>,
    pub levels: Vec<LevelRow>,
    pub terminated: Option<bool>,
    pub certificate_agreement: Option<f64>,
    pub consistency_agreement: Option<f64>,
    pub probes: Vec<ProbeRow>,
    pub verdict: String,
}

impl RunReport {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            config: ConfigEcho::from(config),
            suites: Vec::new(),
            net_sizes: Vec::new(),
            levels: Vec::new(),
            terminated: None,
            certificate_agreement: None,
            consistency_agreement: None,
            probes: Vec::new(),
            verdict: "pass".into(),
        }
    }

    pub fn push_suite(&mut self, suite: SuiteResult) {
        if suite.verdict == "fail" {
            self.verdict = "fail".into();
        }
        self.suites.push(suite);
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    /// Copy with volatile timing fields cleared; emitted artifacts must be
    /// byte-identical across reruns of the same configuration and seed.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.suites {
            s.wall_ms = 0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.normalized())
            .expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let norm = self.normalized();
        let mut out = String::from("suite,checked,violations,max_slack,wall_ms,verdict\n");
        for s in &norm.suites {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.suite,
                s.checked,
                s.violations,
                fmt_sig(s.max_slack),
                s.wall_ms,
                s.verdict
            ));
        }
        out
    }
}

/// Writes the report in the requested format; the written bytes are a pure
/// function of the report content.
pub fn emit_report(report: &RunReport, format: OutputFormat, path: &Path) -> Result<(), CliError> {
    let payload = match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    };
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    file.write_all(payload.as_bytes())
        .map_err(|e| CliError::Io(format!("short write to {}: {e}", path.display())))?;
    Ok(())
}

/// 12 significant digits, the numeric print format of the interface.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.11e}")
}
