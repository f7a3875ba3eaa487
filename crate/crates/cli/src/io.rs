//! Reading and writing codes and operators.
//!
//! Codes are stored as JSON objects with `hx`/`hz` bit rows, as plain
//! matrices (`rows cols` header then bit rows) or in the alist sparse
//! format. Operators are whitespace-separated `P<i>` tokens with 1-based
//! qubit indices.

use std::fmt::Write as _;

use hommeas::codelib::{self, Benchmark};
use hommeas::{BitMatrix, BitVec, CssCode, PauliOperator};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct ParseError(pub String);

fn perr(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    #[serde(default)]
    n: Option<usize>,
    hx: Vec<Vec<u8>>,
    hz: Vec<Vec<u8>>,
}

fn rows_to_matrix(name: &str, rows: &[Vec<u8>], n: usize) -> Result<BitMatrix, ParseError> {
    let mut m = BitMatrix::zeros(rows.len(), n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(perr(format!("{name} row {r} has {} entries, expected {n}", row.len())));
        }
        for (c, &b) in row.iter().enumerate() {
            match b {
                0 => {}
                1 => m.set(r, c, true),
                _ => return Err(perr(format!("{name} row {r} has non-bit entry {b}"))),
            }
        }
    }
    Ok(m)
}

fn matrix_to_rows(m: &BitMatrix) -> Vec<Vec<u8>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| u8::from(m.get(r, c))).collect())
        .collect()
}

pub fn parse_code_json(src: &str) -> Result<CssCode, ParseError> {
    let file: CodeFile = serde_json::from_str(src).map_err(|e| perr(format!("code JSON: {e}")))?;
    let n = file
        .n
        .or_else(|| file.hx.first().or(file.hz.first()).map(Vec::len))
        .ok_or_else(|| perr("code JSON has no rows and no \"n\""))?;
    let hx = rows_to_matrix("hx", &file.hx, n)?;
    let hz = rows_to_matrix("hz", &file.hz, n)?;
    CssCode::new(hx, hz).map_err(|e| perr(format!("code JSON: {e}")))
}

pub fn code_to_json(code: &CssCode) -> String {
    let file = CodeFile {
        n: Some(code.n()),
        hx: matrix_to_rows(code.hx()),
        hz: matrix_to_rows(code.hz()),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn parse_plain(name: &str, src: &str) -> Result<BitMatrix, ParseError> {
    codelib::parse_plain_matrix(name, src).map_err(|e| perr(e.to_string()))
}

pub fn write_plain(m: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let bits: Vec<&str> = (0..m.cols()).map(|c| if m.get(r, c) { "1" } else { "0" }).collect();
        out.push_str(&bits.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an alist file: `cols rows`, maximum weights, column weights, row
/// weights, then 1-based row lists per column and column lists per row
/// (zero entries are padding).
pub fn parse_alist(name: &str, src: &str) -> Result<BitMatrix, ParseError> {
    let mut lines = src.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut nums = |what: &str| -> Result<Vec<usize>, ParseError> {
        let line = lines
            .next()
            .ok_or_else(|| perr(format!("{name}: missing {what}")))?;
        line.split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(format!("{name}: bad number {t:?} in {what}"))))
            .collect()
    };
    let head = nums("header")?;
    let [cols, rows] = head[..] else {
        return Err(perr(format!("{name}: header must hold two numbers")));
    };
    nums("maximum weights")?;
    let col_w = nums("column weights")?;
    let row_w = nums("row weights")?;
    if col_w.len() != cols || row_w.len() != rows {
        return Err(perr(format!("{name}: weight list lengths do not match the header")));
    }
    let mut by_col = BitMatrix::zeros(rows, cols);
    for (c, &w) in col_w.iter().enumerate() {
        let entries: Vec<usize> = nums("column list")?.into_iter().filter(|&v| v != 0).collect();
        if entries.len() != w {
            return Err(perr(format!("{name}: column {} lists {} entries, weight is {w}", c + 1, entries.len())));
        }
        for r in entries {
            if r > rows {
                return Err(perr(format!("{name}: row index {r} out of range")));
            }
            by_col.set(r - 1, c, true);
        }
    }
    let mut by_row = BitMatrix::zeros(rows, cols);
    for (r, &w) in row_w.iter().enumerate() {
        let entries: Vec<usize> = nums("row list")?.into_iter().filter(|&v| v != 0).collect();
        if entries.len() != w {
            return Err(perr(format!("{name}: row {} lists {} entries, weight is {w}", r + 1, entries.len())));
        }
        for c in entries {
            if c > cols {
                return Err(perr(format!("{name}: column index {c} out of range")));
            }
            by_row.set(r, c - 1, true);
        }
    }
    if by_col != by_row {
        return Err(perr(format!("{name}: column and row lists disagree")));
    }
    Ok(by_col)
}

pub fn write_alist(m: &BitMatrix) -> String {
    let t = m.transpose();
    let col_w = t.row_weights();
    let row_w = m.row_weights();
    let max_c = col_w.iter().copied().max().unwrap_or(0);
    let max_r = row_w.iter().copied().max().unwrap_or(0);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.cols(), m.rows());
    let _ = writeln!(out, "{max_c} {max_r}");
    let _ = writeln!(out, "{}", join(&col_w));
    let _ = writeln!(out, "{}", join(&row_w));
    let padded = |ones: Vec<usize>, width: usize| {
        let mut v: Vec<usize> = ones.into_iter().map(|i| i + 1).collect();
        v.resize(width.max(1), 0);
        join(&v)
    };
    for c in 0..m.cols() {
        let _ = writeln!(out, "{}", padded(t.row_ones(c).collect(), max_c));
    }
    for r in 0..m.rows() {
        let _ = writeln!(out, "{}", padded(m.row_ones(r).collect(), max_r));
    }
    out
}

/// Builds a code from two matrices with matching column counts.
pub fn code_from_matrices(hx: BitMatrix, hz: BitMatrix) -> Result<CssCode, ParseError> {
    if hx.cols() != hz.cols() {
        return Err(perr(format!(
            "hx has {} columns, hz has {}",
            hx.cols(),
            hz.cols()
        )));
    }
    CssCode::new(hx, hz).map_err(|e| perr(e.to_string()))
}

/// Shipped codes: `steane`, `hamming15`, `surface:D`, `toric:D`,
/// `surface-pair:D`, `lp1`, `lp2`, `hgp1`, `hgp2`.
pub fn builtin_code(name: &str) -> Result<CssCode, ParseError> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => {
            let d: usize = a.parse().map_err(|_| perr(format!("bad size in {name:?}")))?;
            (b, Some(d))
        }
        None => (name, None),
    };
    let sized = |f: fn(usize) -> Result<CssCode, codelib::CodeLibError>| {
        let d = arg.ok_or_else(|| perr(format!("{base} needs a size, e.g. {base}:3")))?;
        f(d).map_err(|e| perr(e.to_string()))
    };
    match base {
        "steane" => Ok(codelib::steane()),
        "hamming15" => Ok(codelib::hamming15()),
        "surface" => sized(codelib::surface),
        "toric" => sized(codelib::toric),
        "surface-pair" => {
            let s = sized(codelib::surface)?;
            Ok(s.direct_sum(&s))
        }
        _ => benchmark(base).map(Benchmark::code),
    }
}

pub fn benchmark(name: &str) -> Result<Benchmark, ParseError> {
    Benchmark::ALL
        .into_iter()
        .find(|b| b.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| perr(format!("unknown builtin code {name:?}")))
}

/// Parses `X1 Y2 Z3`-style operators on `n` qubits; `Y` is the Hermitian
/// Pauli with both bits set.
pub fn parse_operator(src: &str, n: usize) -> Result<PauliOperator, ParseError> {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    let mut seen = BitVec::zeros(n);
    let mut any = false;
    for tok in src.split_whitespace() {
        let mut chars = tok.chars();
        let p = chars.next().expect("tokens are nonempty");
        let idx: usize = chars
            .as_str()
            .parse()
            .map_err(|_| perr(format!("bad operator token {tok:?}")))?;
        if idx == 0 || idx > n {
            return Err(perr(format!("qubit index {idx} in {tok:?} outside 1..={n}")));
        }
        let q = idx - 1;
        if seen.get(q) {
            return Err(perr(format!("qubit {idx} appears twice")));
        }
        seen.set(q, true);
        match p {
            'X' => x.set(q, true),
            'Z' => z.set(q, true),
            'Y' => {
                x.set(q, true);
                z.set(q, true);
            }
            _ => return Err(perr(format!("bad Pauli letter in {tok:?}"))),
        }
        any = true;
    }
    if !any {
        return Err(perr("empty operator"));
    }
    Ok(PauliOperator { x, z, phase: 0 })
}

/// Inverse of [`parse_operator`] for Hermitian operators with sign `+1`.
pub fn format_operator(op: &PauliOperator) -> String {
    let mut toks = Vec::new();
    for q in 0..op.n() {
        let letter = match (op.x.get(q), op.z.get(q)) {
            (false, false) => continue,
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        };
        toks.push(format!("{letter}{}", q + 1));
    }
    let sign = if op.sign() == Some(-1) { "-" } else { "" };
    format!("{sign}{}", toks.join(" "))
}
