//! Plain-text Pauli Hamiltonian files (`.pham`) and the bundled fixtures.
//!
//! ```text
//! # theta = 0.16
//! # qubits = 5
//! IIIII 4.599205 -0.533073
//! ZIIII -0.251131 0.022353
//! ```
//!
//! Lines starting with `#` are header comments; `key = value` comments are
//! exposed through [`HamiltonianFile::metadata`]. Every other non-blank line
//! is `<STRING> <re> <im>`, where the imaginary part may carry an `i` or `j`
//! suffix. Character `k` of a string acts on qubit `k`.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, MAX_PAULI_QUBITS};

const MODEL_N5: &str = include_str!("../fixtures/model_n5.pham");
const H2MINUS: &str = include_str!("../fixtures/h2minus_631g.pham");

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFile {
    /// Header comment lines without the leading `#`.
    pub comments: Vec<String>,
    pub sum: PauliSum,
}

impl HamiltonianFile {
    pub fn new(comments: Vec<String>, sum: PauliSum) -> Self {
        Self { comments, sum }
    }

    pub fn n_qubits(&self) -> usize {
        self.sum.n_qubits()
    }

    /// Value of the first `# key = value` comment.
    pub fn metadata(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    pub fn metadata_f64(&self, key: &str) -> Option<f64> {
        self.metadata(key)?.parse().ok()
    }

    pub fn to_text(&self) -> String {
        serialize(&self.comments, &self.sum)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_error(line, format!("{what} part {token:?} is not a number")))
}

pub fn parse_file(text: &str) -> Result<HamiltonianFile> {
    let mut comments = Vec::new();
    let mut terms: Vec<(PauliString, Complex64)> = Vec::new();
    let mut seen = HashSet::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_error(
                line,
                format!("expected `<STRING> <re> <im>`, found {} fields", tokens.len()),
            ));
        }
        let label = tokens[0];
        if let Some(bad) = label.chars().find(|ch| Pauli::from_char(*ch).is_none()) {
            return Err(parse_error(line, format!("invalid Pauli character {bad:?}")));
        }
        let n = label.chars().count();
        match width {
            None if n > MAX_PAULI_QUBITS => {
                return Err(parse_error(
                    line,
                    format!("{n} qubits exceeds the {MAX_PAULI_QUBITS}-qubit limit"),
                ))
            }
            None => width = Some(n),
            Some(w) if w != n => {
                return Err(parse_error(line, format!("string has length {n}, expected {w}")))
            }
            Some(_) => {}
        }
        let p: PauliString = label.parse().map_err(|e: Error| parse_error(line, e.to_string()))?;
        if !seen.insert(p) {
            return Err(parse_error(line, format!("duplicate string {label}")));
        }
        let re = parse_number(tokens[1], line, "real")?;
        let im_token = tokens[2].trim_end_matches(['i', 'j']);
        let im = parse_number(im_token, line, "imaginary")?;
        terms.push((p, Complex64::new(re, im)));
    }
    let Some(n) = width else {
        return Err(Error::EmptySum);
    };
    let mut sum = PauliSum::new(n)?.with_prune_tol(0.0);
    for (p, c) in terms {
        sum.add_term(p, c)?;
    }
    if let Some(declared) = comments.iter().find_map(|c| {
        let (k, v) = c.split_once('=')?;
        (k.trim() == "qubits").then(|| v.trim().parse::<usize>().ok()).flatten()
    }) {
        if declared != n {
            return Err(parse_error(0, format!("header declares {declared} qubits, terms have {n}")));
        }
    }
    Ok(HamiltonianFile { comments, sum })
}

pub fn parse(text: &str) -> Result<PauliSum> {
    parse_file(text).map(|f| f.sum)
}

/// Six decimals unless that loses information, in which case the shortest
/// representation that reads back exactly.
fn format_coefficient(v: f64) -> String {
    let fixed = format!("{v:.6}");
    if fixed.parse::<f64>() == Ok(v) {
        fixed
    } else {
        format!("{v}")
    }
}

/// Lossless text: six decimals, widened per number where needed.
pub fn serialize(comments: &[String], sum: &PauliSum) -> String {
    write_terms(comments, sum, format_coefficient)
}

/// Table-style text with every coefficient rounded to six decimals.
pub fn serialize_rounded(comments: &[String], sum: &PauliSum) -> String {
    write_terms(comments, sum, |v| {
        let s = format!("{v:.6}");
        if s == "-0.000000" {
            "0.000000".to_string()
        } else {
            s
        }
    })
}

fn write_terms(comments: &[String], sum: &PauliSum, fmt: impl Fn(f64) -> String) -> String {
    let mut out = String::new();
    for c in comments {
        if c.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {c}");
        }
    }
    for (p, c) in sum.terms() {
        let _ = writeln!(out, "{p} {} {}", fmt(c.re), fmt(c.im));
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Hamiltonians shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// One-electron model, `n = 5`, `theta = 0.16`, `alpha = 0.65`.
    ModelN5,
    /// H2- anion, 6-31g, eight spin orbitals, `theta = 0.18`.
    H2Minus,
}

impl Fixture {
    pub const ALL: [Fixture; 2] = [Fixture::ModelN5, Fixture::H2Minus];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::ModelN5 => "model-n5",
            Fixture::H2Minus => "h2minus",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn text(self) -> &'static str {
        match self {
            Fixture::ModelN5 => MODEL_N5,
            Fixture::H2Minus => H2MINUS,
        }
    }

    pub fn sha256(self) -> String {
        sha256_hex(self.text().as_bytes())
    }

    pub fn load(self) -> HamiltonianFile {
        parse_file(self.text()).expect("bundled fixture parses")
    }
}

pub fn fixture_model_n5() -> PauliSum {
    Fixture::ModelN5.load().sum
}

pub fn fixture_h2minus() -> PauliSum {
    Fixture::H2Minus.load().sum
}
