//! Matrix/tensor file format and result records.
//!
//! Input files are single JSON objects:
//!
//! ```text
//! {"kind": "matrix",    "n": 3,          "entries": [[1.0, 0.0], 1.1, ...]}   // n*n entries
//! {"kind": "symmetric", "n": 2,          "entries": [...]}                    // (2n)*(2n) entries
//! {"kind": "tensor",    "n": 3, "nu": 3, "entries": [...]}                    // n^nu entries
//! ```
//!
//! Entries are `[re, im]` pairs or bare reals, row-major (lexicographic for
//! tensors). For `symmetric`, `n` is the number of pairs in a perfect
//! matching and the matrix side is `2n`; symmetry is checked exactly on load.
//!
//! The canonical form written by [`write_structure`] always uses pairs and the
//! shortest round-trip representation of each double, so writing and reading
//! back reproduces every entry bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numerics::{CubicalTensor, Entries, EvenSymmetricMatrix, SquareMatrix};

/// Any input the tool accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Matrix(SquareMatrix),
    Symmetric(EvenSymmetricMatrix),
    Tensor(CubicalTensor),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Matrix(_) => "matrix",
            Structure::Symmetric(_) => "symmetric",
            Structure::Tensor(_) => "tensor",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: String,
    n: usize,
    nu: Option<usize>,
    entries: Vec<RawEntry>,
}

#[derive(Serialize)]
struct CanonicalFile<'a> {
    kind: &'a str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<usize>,
    entries: Vec<[f64; 2]>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a matrix file.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let raw: RawFile = serde_json::from_str(text).map_err(parse_err)?;
    let entries: Vec<Complex64> = raw
        .entries
        .into_iter()
        .map(|e| match e {
            RawEntry::Real(re) => Complex64::new(re, 0.0),
            RawEntry::Pair([re, im]) => Complex64::new(re, im),
        })
        .collect();
    if raw.kind != "tensor" && raw.nu.is_some() {
        return Err(Error::Parse(format!("field nu is only valid for tensors, kind is {}", raw.kind)));
    }
    let structure = match raw.kind.as_str() {
        "matrix" => Structure::Matrix(SquareMatrix::new(raw.n, entries).map_err(parse_err)?),
        "symmetric" => Structure::Symmetric(
            EvenSymmetricMatrix::new_strict(2 * raw.n, entries).map_err(parse_err)?,
        ),
        "tensor" => {
            let nu = raw.nu.ok_or_else(|| Error::Parse("tensor file is missing nu".into()))?;
            Structure::Tensor(CubicalTensor::new(nu, raw.n, entries).map_err(parse_err)?)
        }
        other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
    };
    Ok(structure)
}

fn pairs(entries: &[Complex64]) -> Vec<[f64; 2]> {
    entries.iter().map(|z| [z.re, z.im]).collect()
}

/// Canonical single-line form of `s`.
pub fn write_structure(s: &Structure) -> String {
    let file = match s {
        Structure::Matrix(m) => CanonicalFile {
            kind: "matrix",
            n: m.n(),
            nu: None,
            entries: pairs(m.entries()),
        },
        Structure::Symmetric(m) => CanonicalFile {
            kind: "symmetric",
            n: m.pairs(),
            nu: None,
            entries: pairs(m.entries()),
        },
        Structure::Tensor(t) => CanonicalFile {
            kind: "tensor",
            n: t.n(),
            nu: Some(t.nu()),
            entries: pairs(t.entries()),
        },
    };
    serde_json::to_string(&file).expect("finite entries always serialize")
}

pub fn write_matrix(m: &SquareMatrix) -> String {
    write_structure(&Structure::Matrix(m.clone()))
}

/// `sha256:<hex>` of the canonical form.
pub fn digest(s: &Structure) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(write_structure(s).as_bytes())))
}

/// A double with 17 significant digits, or a quoted `"inf"`, `"-inf"`, `"nan"`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"nan\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// Bound fields carried by approximation records only.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxFields {
    pub log_estimate: Complex64,
    pub m: usize,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `None` when the order was fixed by the caller.
    pub epsilon: Option<f64>,
    pub additive_bound: f64,
    pub relative_bound: f64,
}

/// One line of command output.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub input_digest: String,
    pub operation: String,
    pub kind: String,
    pub value: Complex64,
    pub approx: Option<ApproxFields>,
    pub wall_time_s: f64,
}

impl ResultRecord {
    /// Single-line JSON object; every double has 17 significant digits.
    pub fn to_line(&self) -> String {
        let mut out = format!(
            "{{\"operation\":{},\"input_digest\":{},\"kind\":{},\"value\":{}",
            serde_json::to_string(&self.operation).unwrap(),
            serde_json::to_string(&self.input_digest).unwrap(),
            serde_json::to_string(&self.kind).unwrap(),
            fmt_complex(self.value),
        );
        if let Some(a) = &self.approx {
            out.push_str(&format!(
                ",\"log_estimate\":{},\"m\":{},\"beta\":{},\"gamma\":{},\"delta\":{},\"epsilon\":{},\"additive_bound\":{},\"relative_bound\":{}",
                fmt_complex(a.log_estimate),
                a.m,
                fmt_f64(a.beta),
                fmt_f64(a.gamma),
                fmt_f64(a.delta),
                a.epsilon.map_or_else(|| "null".to_string(), fmt_f64),
                fmt_f64(a.additive_bound),
                fmt_f64(a.relative_bound),
            ));
        }
        out.push_str(&format!(",\"wall_time_s\":{}}}", fmt_f64(self.wall_time_s)));
        out
    }
}
