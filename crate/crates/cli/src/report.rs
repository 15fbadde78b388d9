//! Analysis reports: one structure, two renderings (text and JSON) with
//! identical verdicts.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceEcho {
    pub eps_root: f64,
    pub eps_rank: f64,
    pub eps_cluster: f64,
    pub eps_verify: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Echo of the command line that produced the report.
    pub command: String,
    pub seed: u64,
    pub tolerances: ToleranceEcho,
    /// Named boolean outcomes, the authoritative verdicts.
    pub verdicts: BTreeMap<String, bool>,
    /// Named residual magnitudes.
    pub residuals: Vec<(String, f64)>,
    /// Structured extras (eigenvalues, exceptional points, cycles, ...).
    pub values: BTreeMap<String, serde_json::Value>,
    /// Free-form notes, printed verbatim.
    pub notes: Vec<String>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: String, seed: u64, tol: &pencillab::Tolerances) -> Report {
        Report {
            command,
            seed,
            tolerances: ToleranceEcho {
                eps_root: tol.eps_root,
                eps_rank: tol.eps_rank,
                eps_cluster: tol.eps_cluster,
                eps_verify: tol.eps_verify,
                max_iter: tol.max_iter,
            },
            verdicts: BTreeMap::new(),
            residuals: Vec::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn verdict(&mut self, name: &str, value: bool) {
        self.verdicts.insert(name.to_string(), value);
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.push((name.to_string(), value));
    }

    pub fn value(&mut self, name: &str, value: serde_json::Value) {
        self.values.insert(name.to_string(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!(
            "seed: {}  tolerances: eps_root={:.1e} eps_rank={:.1e} eps_cluster={:.1e} eps_verify={:.1e} max_iter={}\n",
            self.seed,
            self.tolerances.eps_root,
            self.tolerances.eps_rank,
            self.tolerances.eps_cluster,
            self.tolerances.eps_verify,
            self.tolerances.max_iter,
        ));
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for (name, value) in &self.verdicts {
                out.push_str(&format!("  {name}: {value}\n"));
            }
        }
        if !self.residuals.is_empty() {
            out.push_str("residuals:\n");
            for (name, value) in &self.residuals {
                out.push_str(&format!("  {name}: {value:.6e}\n"));
            }
        }
        for (name, value) in &self.values {
            out.push_str(&format!("{name}: {value}\n"));
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out.push_str(&format!("elapsed: {} ms\n", self.timing_ms));
        out
    }
}

/// Complex number as a JSON `[re, im]` pair.
pub fn cx_json(z: num_complex::Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}
