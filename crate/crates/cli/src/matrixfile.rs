//! The on-disk matrix file format: a JSON object mapping names to
//! `{"n": dim, "entries": [[re, im], ...], "scale": "1" | "2pi_i"}`.
//! Entries are row-major; the `2pi_i` scale multiplies every entry by
//! `2πi` on load, which keeps integer-valued gallery files integral.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use pencillab::{two_pi_i, CMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub n: usize,
    /// Row-major `[re, im]` pairs, length n².
    pub entries: Vec<[f64; 2]>,
    #[serde(default = "default_scale", skip_serializing_if = "is_default_scale")]
    pub scale: String,
}

fn default_scale() -> String {
    "1".to_string()
}

fn is_default_scale(s: &String) -> bool {
    s == "1"
}

pub type MatrixFile = BTreeMap<String, MatrixEntry>;

#[derive(Debug)]
pub enum FileError {
    Io(std::io::Error),
    Parse(String),
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FileError::Io(e) => write!(f, "i/o error: {e}"),
            FileError::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for FileError {}

impl From<std::io::Error> for FileError {
    fn from(e: std::io::Error) -> Self {
        FileError::Io(e)
    }
}

pub fn load(path: &Path) -> Result<MatrixFile, FileError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| FileError::Parse(e.to_string()))
}

pub fn save(path: &Path, file: &MatrixFile) -> Result<(), FileError> {
    let text =
        serde_json::to_string_pretty(file).map_err(|e| FileError::Parse(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Materializes a named matrix, applying the scale flag.
pub fn to_matrix(entry: &MatrixEntry) -> Result<CMatrix, FileError> {
    if entry.entries.len() != entry.n * entry.n {
        return Err(FileError::Parse(format!(
            "expected {} entries for n = {}, got {}",
            entry.n * entry.n,
            entry.n,
            entry.entries.len()
        )));
    }
    let factor = match entry.scale.as_str() {
        "1" => Complex64::new(1.0, 0.0),
        "2pi_i" => two_pi_i(),
        other => return Err(FileError::Parse(format!("unknown scale {other:?}"))),
    };
    let rows: Vec<Vec<Complex64>> = (0..entry.n)
        .map(|i| {
            (0..entry.n)
                .map(|j| {
                    let [re, im] = entry.entries[i * entry.n + j];
                    Complex64::new(re, im) * factor
                })
                .collect()
        })
        .collect();
    CMatrix::from_rows(&rows).map_err(|e| FileError::Parse(e.to_string()))
}

/// Raw (scale "1") entry for a matrix, bit-exact.
pub fn from_matrix(m: &CMatrix) -> MatrixEntry {
    let n = m.dim();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            entries.push([z.re, z.im]);
        }
    }
    MatrixEntry { n, entries, scale: default_scale() }
}

/// Integer-valued entry to be rescaled by `2πi` on load.
pub fn from_integer_grid(grid: &[Vec<i64>]) -> MatrixEntry {
    let n = grid.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in grid {
        assert_eq!(row.len(), n);
        for &v in row {
            entries.push([v as f64, 0.0]);
        }
    }
    MatrixEntry { n, entries, scale: "2pi_i".to_string() }
}

pub fn lookup<'f>(file: &'f MatrixFile, name: &str) -> Result<&'f MatrixEntry, FileError> {
    file.get(name).ok_or_else(|| {
        FileError::Parse(format!(
            "no matrix named {name:?}; available: {:?}",
            file.keys().collect::<Vec<_>>()
        ))
    })
}
