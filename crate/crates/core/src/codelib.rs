//! Constructors for the code families used throughout the crate, plus the
//! shipped benchmark instances.
//!
//! Product codes order their qubits block by block: the left block holds
//! the `n1 × n2` (or lifted `n1·m2`) sector in row-major order, followed by
//! the right block.

use thiserror::Error;

use crate::css::CssCode;
use crate::f2la::{circulant_lift, BitMatrix, BitVec, F2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeLibError {
    #[error("size must be at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error("fixture {name}: {msg}")]
    Fixture { name: String, msg: String },
}

/// The `(r - 1) × r` parity-check matrix of the repetition code.
pub fn repetition(r: usize) -> Result<BitMatrix, CodeLibError> {
    if r < 2 {
        return Err(CodeLibError::TooSmall { min: 2, got: r });
    }
    let mut m = BitMatrix::zeros(r - 1, r);
    for i in 0..r - 1 {
        m.set(i, i, true);
        m.set(i, i + 1, true);
    }
    Ok(m)
}

/// The `r × r` parity-check matrix of the cyclic repetition code.
pub fn cyclic_repetition(r: usize) -> Result<BitMatrix, CodeLibError> {
    if r < 2 {
        return Err(CodeLibError::TooSmall { min: 2, got: r });
    }
    let mut m = BitMatrix::zeros(r, r);
    for i in 0..r {
        m.toggle(i, i);
        m.toggle(i, (i + 1) % r);
    }
    Ok(m)
}

/// Hypergraph product with `H_X = (H1 ⊗ I | I ⊗ H2^T)` and
/// `H_Z = (I ⊗ H2 | H1^T ⊗ I)`.
pub fn hgp(h1: &BitMatrix, h2: &BitMatrix) -> CssCode {
    let (m1, n1) = h1.shape();
    let (m2, n2) = h2.shape();
    let hx = BitMatrix::kron(h1, &BitMatrix::identity(n2))
        .hstack(&BitMatrix::kron(&BitMatrix::identity(m1), &h2.transpose()));
    let hz = BitMatrix::kron(&BitMatrix::identity(n1), h2)
        .hstack(&BitMatrix::kron(&h1.transpose(), &BitMatrix::identity(m2)));
    CssCode::new(hx, hz).expect("hypergraph products commute")
}

/// Planar surface code of distance `d`; the first `d` qubits carry an X logical.
pub fn surface(d: usize) -> Result<CssCode, CodeLibError> {
    let h = repetition(d)?;
    Ok(hgp(&h, &h))
}

/// Toric code of distance `d`; the first `d` qubits carry an X logical.
pub fn toric(d: usize) -> Result<CssCode, CodeLibError> {
    let h = cyclic_repetition(d)?;
    Ok(hgp(&h, &h))
}

/// The `[[7,1,3]]` Steane code.
pub fn steane() -> CssCode {
    let h = BitMatrix::from_bitstrings(&["0001111", "0110011", "1010101"]);
    CssCode::new(h.clone(), h).expect("Steane checks commute")
}

/// The `[[15,7,3]]` quantum Hamming code.
pub fn hamming15() -> CssCode {
    let h = BitMatrix::from_bitstrings(&[
        "000000011111111",
        "000111100001111",
        "011001100110011",
        "101010101010101",
    ]);
    CssCode::new(h.clone(), h).expect("Hamming checks commute")
}

/// A matrix over `F2[x]/(x^ℓ - 1)`; each entry is a coefficient vector of length ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ell: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<bool>>,
}

impl PolyMatrix {
    pub fn zeros(ell: usize, rows: usize, cols: usize) -> Self {
        Self {
            ell,
            rows,
            cols,
            entries: vec![vec![false; ell]; rows * cols],
        }
    }

    pub fn identity(ell: usize, n: usize) -> Self {
        let mut m = Self::zeros(ell, n, n);
        for i in 0..n {
            m.entries[i * n + i][0] = true;
        }
        m
    }

    /// Builds from exponent lists; `entries[r][c]` lists the monomials of that entry.
    pub fn from_exponents(ell: usize, entries: &[Vec<Vec<usize>>]) -> Result<Self, CodeLibError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(ell, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(CodeLibError::Fixture {
                    name: "poly".into(),
                    msg: format!("row {r} has {} entries, expected {cols}", row.len()),
                });
            }
            for (c, exps) in row.iter().enumerate() {
                for &e in exps {
                    if e >= ell {
                        return Err(F2Error::DegreeTooLarge { degree: e, ell }.into());
                    }
                    m.entries[r * cols + c][e] ^= true;
                }
            }
        }
        Ok(m)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry(&self, r: usize, c: usize) -> &[bool] {
        &self.entries[r * self.cols + c]
    }

    /// Transpose with every entry replaced by its ring transpose, so that the
    /// lift of the result is the transpose of the lift.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ell, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = crate::f2la::ring_transpose(self.entry(r, c), self.ell);
            }
        }
        t
    }

    /// Kronecker product over the ring.
    pub fn kron(&self, other: &PolyMatrix) -> Self {
        assert_eq!(self.ell, other.ell, "lift sizes differ");
        let (r2, c2) = other.shape();
        let mut out = Self::zeros(self.ell, self.rows * r2, self.cols * c2);
        let oc = out.cols;
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.entries[(i * r2 + k) * oc + j * c2 + l] =
                            ring_mul(self.entry(i, j), other.entry(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &PolyMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.ell, self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[r * cols + c] = self.entry(r, c).to_vec();
            }
            for c in 0..other.cols {
                out.entries[r * cols + self.cols + c] = other.entry(r, c).to_vec();
            }
        }
        out
    }

    /// Replaces each entry by its `ℓ × ℓ` circulant.
    pub fn lift(&self) -> BitMatrix {
        let l = self.ell;
        let mut out = BitMatrix::zeros(self.rows * l, self.cols * l);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let b = circulant_lift(self.entry(r, c), l).expect("entries have length ell");
                for i in 0..l {
                    for j in b.row_ones(i) {
                        out.set(r * l + i, c * l + j, true);
                    }
                }
            }
        }
        out
    }
}

fn ring_mul(a: &[bool], b: &[bool]) -> Vec<bool> {
    let l = a.len();
    let mut out = vec![false; l];
    for (i, &x) in a.iter().enumerate() {
        if x {
            for (j, &y) in b.iter().enumerate() {
                if y {
                    out[(i + j) % l] ^= true;
                }
            }
        }
    }
    out
}

/// Quasi-cyclic lifted product with `H_X = B([A1 ⊗ I | I ⊗ A2])` and
/// `H_Z = B([I ⊗ A2^T | A1^T ⊗ I])`.
pub fn lifted_product(a1: &PolyMatrix, a2: &PolyMatrix) -> CssCode {
    let ell = a1.ell();
    let (m1, n1) = a1.shape();
    let (m2, n2) = a2.shape();
    let hx = a1
        .kron(&PolyMatrix::identity(ell, m2))
        .hstack(&PolyMatrix::identity(ell, m1).kron(a2));
    let hz = PolyMatrix::identity(ell, n1)
        .kron(&a2.transpose())
        .hstack(&a1.transpose().kron(&PolyMatrix::identity(ell, n2)));
    CssCode::new(hx.lift(), hz.lift()).expect("lifted products commute")
}

/// Shipped benchmark instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Lp1,
    Lp2,
    Hgp1,
    Hgp2,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [Benchmark::Lp1, Benchmark::Lp2, Benchmark::Hgp1, Benchmark::Hgp2];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Lp1 => "LP1",
            Benchmark::Lp2 => "LP2",
            Benchmark::Hgp1 => "HGP1",
            Benchmark::Hgp2 => "HGP2",
        }
    }

    pub fn code(self) -> CssCode {
        match self {
            Benchmark::Lp1 | Benchmark::Lp2 => {
                let src = if self == Benchmark::Lp1 { LP1 } else { LP2 };
                let a = parse_poly_matrix(self.name(), src).expect("shipped fixture parses");
                lifted_product(&a, &a.transpose())
            }
            Benchmark::Hgp1 | Benchmark::Hgp2 => {
                let src = if self == Benchmark::Hgp1 { HGP1 } else { HGP2 };
                let h = parse_plain_matrix(self.name(), src).expect("shipped fixture parses");
                hgp(&h, &h)
            }
        }
    }

    /// The benchmark X logical as 0-based qubit indices.
    pub fn logical_support(self) -> Vec<usize> {
        LOGICALS
            .lines()
            .filter_map(|l| {
                let mut it = l.split_whitespace();
                (it.next() == Some(self.name()))
                    .then(|| it.map(|t| t.parse::<usize>().expect("index") - 1).collect())
            })
            .next()
            .expect("every benchmark has a logical")
    }

    pub fn logical(self) -> BitVec {
        BitVec::from_indices(self.code().n(), self.logical_support())
    }
}

pub const LP1: &str = include_str!("../fixtures/lp1.txt");
pub const LP2: &str = include_str!("../fixtures/lp2.txt");
pub const HGP1: &str = include_str!("../fixtures/hgp1.txt");
pub const HGP2: &str = include_str!("../fixtures/hgp2.txt");
pub const LOGICALS: &str = include_str!("../fixtures/logicals.txt");

/// Shipped fixture files with their names, for checksum verification.
pub const FIXTURES: [(&str, &str); 5] = [
    ("lp1.txt", LP1),
    ("lp2.txt", LP2),
    ("hgp1.txt", HGP1),
    ("hgp2.txt", HGP2),
    ("logicals.txt", LOGICALS),
];

/// Parses the plain matrix format: a `rows cols` header then rows of bits.
pub fn parse_plain_matrix(name: &str, src: &str) -> Result<BitMatrix, CodeLibError> {
    let err = |msg: String| CodeLibError::Fixture {
        name: name.to_string(),
        msg,
    };
    let mut lines = src.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| err("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(format!("bad header token {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(err("header must be `rows cols`".into()));
    };
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| err(format!("missing row {r}")))?;
        let bits: Vec<&str> = line.split_whitespace().collect();
        if bits.len() != cols {
            return Err(err(format!("row {r} has {} entries", bits.len())));
        }
        for (c, b) in bits.iter().enumerate() {
            match *b {
                "0" => {}
                "1" => m.set(r, c, true),
                other => return Err(err(format!("bad bit {other:?} at ({r},{c})"))),
            }
        }
    }
    if lines.next().is_some() {
        return Err(err("trailing data".into()));
    }
    Ok(m)
}

/// Parses a polynomial matrix: an `ell rows cols` header then rows whose
/// entries are comma-separated exponents, with `-` for the zero polynomial.
pub fn parse_poly_matrix(name: &str, src: &str) -> Result<PolyMatrix, CodeLibError> {
    let err = |msg: String| CodeLibError::Fixture {
        name: name.to_string(),
        msg,
    };
    let mut lines = src.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| err("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(format!("bad header token {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [ell, rows, cols] = dims[..] else {
        return Err(err("header must be `ell rows cols`".into()));
    };
    let mut entries = Vec::with_capacity(rows);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| err(format!("missing row {r}")))?;
        let row: Vec<Vec<usize>> = line
            .split_whitespace()
            .map(|tok| {
                if tok == "-" {
                    Ok(Vec::new())
                } else {
                    tok.split(',')
                        .map(|e| e.parse().map_err(|_| err(format!("bad exponent {e:?}"))))
                        .collect()
                }
            })
            .collect::<Result<_, _>>()?;
        if row.len() != cols {
            return Err(err(format!("row {r} has {} entries", row.len())));
        }
        entries.push(row);
    }
    PolyMatrix::from_exponents(ell, &entries)
}
