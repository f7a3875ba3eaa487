//! Test-side oracles and random fixture generators.
//!
//! The oracles work on `u64` bit masks with their own elimination so they do
//! not share code paths with the library routines they check.

#![allow(dead_code)]

use hommeas::codelib::hgp;
use hommeas::homology::{ChainComplex, ChainMap};
use hommeas::{BitMatrix, BitVec, CssCode};
use rand::Rng;

pub fn masks(m: &BitMatrix) -> Vec<u64> {
    assert!(m.cols() <= 64, "oracle limited to 64 columns");
    (0..m.rows())
        .map(|r| m.row_ones(r).fold(0u64, |acc, c| acc | (1 << c)))
        .collect()
}

pub fn mask_of(v: &BitVec) -> u64 {
    v.iter_ones().fold(0u64, |acc, c| acc | (1 << c))
}

/// Row echelon basis keyed by leading bit.
pub struct Span {
    rows: Vec<u64>,
}

impl Span {
    pub fn new(vectors: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Span { rows: Vec::new() };
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows.push(v);
        self.rows.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Basis of `{v : r · v = 0 for every row r}` on `n` bits.
pub fn kernel(rows: &[u64], n: usize) -> Vec<u64> {
    // column-by-column elimination of the rows viewed as a linear map
    let mut pivots: Vec<(usize, u64)> = Vec::new();
    let mut reduced: Vec<u64> = rows.to_vec();
    let mut row_of_pivot = Vec::new();
    let mut used = vec![false; reduced.len()];
    for c in 0..n {
        if let Some(r) = (0..reduced.len()).find(|&r| !used[r] && reduced[r] >> c & 1 == 1) {
            used[r] = true;
            let pr = reduced[r];
            for (s, row) in reduced.iter_mut().enumerate() {
                if s != r && *row >> c & 1 == 1 {
                    *row ^= pr;
                }
            }
            row_of_pivot.push((c, r));
        }
    }
    let pivot_cols: Vec<usize> = row_of_pivot.iter().map(|p| p.0).collect();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = 1u64 << free;
        for &(c, r) in &row_of_pivot {
            if reduced[r] >> free & 1 == 1 {
                v |= 1 << c;
            }
        }
        pivots.push((free, v));
    }
    pivots.into_iter().map(|p| p.1).collect()
}

pub fn rank(rows: &[u64]) -> usize {
    Span::new(rows.iter().copied()).dim()
}

/// Minimum weight of a vector in `ker(opposite)` outside `span(same)`, by
/// Gray-code enumeration of the kernel. `None` when every kernel vector is
/// trivial.
pub fn min_logical_weight(opposite: &[u64], same: &[u64], n: usize) -> Option<usize> {
    let basis = kernel(opposite, n);
    assert!(basis.len() <= 26, "kernel of dimension {} too large", basis.len());
    let span = Span::new(same.iter().copied());
    let mut best: Option<usize> = None;
    let mut v = 0u64;
    for i in 1u64..(1u64 << basis.len()) {
        v ^= basis[i.trailing_zeros() as usize];
        let w = v.count_ones() as usize;
        if best.is_some_and(|b| w >= b) {
            continue;
        }
        if !span.contains(v) {
            best = Some(w);
        }
    }
    best
}

/// X distance of a CSS code, with optional extra rows treated as X gauges.
pub fn oracle_distance_x(code: &CssCode, gauge: &[u64]) -> Option<usize> {
    let mut same = masks(code.hx());
    same.extend_from_slice(gauge);
    min_logical_weight(&masks(code.hz()), &same, code.n())
}

/// Z distance of a CSS code, with optional extra rows treated as Z gauges.
pub fn oracle_distance_z(code: &CssCode, gauge: &[u64]) -> Option<usize> {
    let mut same = masks(code.hz());
    same.extend_from_slice(gauge);
    min_logical_weight(&masks(code.hx()), &same, code.n())
}

/// Exhaustive Cheeger constant `min |∂S| / |S|` over `1 ≤ |S| ≤ nv / 2`
/// as a reduced `(numerator, denominator)` pair.
pub fn oracle_cheeger(nv: usize, edges: &[Vec<usize>]) -> (usize, usize) {
    let mut best = (usize::MAX, 1usize);
    for s in 1u64..(1 << nv) {
        let size = s.count_ones() as usize;
        if size > nv / 2 {
            continue;
        }
        let cut = edges
            .iter()
            .filter(|e| e.iter().filter(|&&v| s >> v & 1 == 1).count() % 2 == 1)
            .count();
        if cut * best.1 < best.0 * size {
            best = (cut, size);
        }
    }
    let g = gcd(best.0, best.1);
    (best.0 / g, best.1 / g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

/// Edge lists of an incidence matrix (edges × vertices).
pub fn edges_of(incidence: &BitMatrix) -> Vec<Vec<usize>> {
    (0..incidence.rows()).map(|r| incidence.row_ones(r).collect()).collect()
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(0.5) {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// Hypergraph product of two small random classical codes with at least one
/// logical qubit.
pub fn random_small_hgp<R: Rng>(rng: &mut R) -> CssCode {
    loop {
        let (m1, n1) = (rng.gen_range(2..=3), rng.gen_range(3..=4));
        let (m2, n2) = (rng.gen_range(2..=3), rng.gen_range(3..=4));
        let h1 = random_matrix(m1, n1, rng);
        let h2 = random_matrix(m2, n2, rng);
        let code = hgp(&h1, &h2);
        if code.k() > 0 && code.n() <= 30 {
            return code;
        }
    }
}

/// A random complex over `[lo, lo + dims.len() - 1]`: each boundary has
/// columns drawn from the kernel of the previous one.
pub fn random_complex<R: Rng>(lo: i32, dims: &[usize], rng: &mut R) -> ChainComplex {
    let mut maps: Vec<BitMatrix> = Vec::new();
    for j in 1..dims.len() {
        let (rows, cols) = (dims[j - 1], dims[j]);
        let m = match maps.last() {
            None => random_matrix(rows, cols, rng),
            Some(prev) => {
                // columns are random combinations of a kernel basis of prev
                let ker = prev.nullspace();
                let coeffs = random_matrix(cols, ker.rows(), rng);
                coeffs.mul(&ker).transpose()
            }
        };
        maps.push(m);
    }
    ChainComplex::with_dims(lo, dims.to_vec(), maps).expect("constructed to compose to zero")
}

/// A uniformly random chain map `A → C` on the grades of `A`, sampled from
/// the solution space of the commutation constraints.
pub fn random_chain_map<R: Rng>(a: &ChainComplex, c: &ChainComplex, rng: &mut R) -> ChainMap {
    let grades: Vec<i32> = (a.lo()..=a.hi()).collect();
    let shapes: Vec<(usize, usize)> = grades.iter().map(|&i| (c.dim(i), a.dim(i))).collect();
    let nvars: usize = shapes.iter().map(|s| s.0 * s.1).sum();
    let build = |bits: &dyn Fn(usize) -> bool| -> Vec<BitMatrix> {
        let mut k = 0;
        shapes
            .iter()
            .map(|&(r, cc)| {
                let mut m = BitMatrix::zeros(r, cc);
                for i in 0..r {
                    for j in 0..cc {
                        if bits(k) {
                            m.set(i, j, true);
                        }
                        k += 1;
                    }
                }
                m
            })
            .collect()
    };
    let residual = |comps: &[BitMatrix]| -> BitVec {
        let comp = |i: i32| -> BitMatrix {
            match grades.iter().position(|&g| g == i) {
                Some(p) => comps[p].clone(),
                None => BitMatrix::zeros(c.dim(i), a.dim(i)),
            }
        };
        let mut bits = Vec::new();
        for i in a.lo()..=a.hi() + 1 {
            let m = c.boundary(i).mul(&comp(i)).add(&comp(i - 1).mul(&a.boundary(i)));
            bits.extend((0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).map(|(r, c)| m.get(r, c)));
        }
        BitVec::from_bools(&bits)
    };
    let columns: Vec<BitVec> = (0..nvars).map(|v| residual(&build(&|k| k == v))).collect();
    let len = columns.first().map_or(0, BitVec::len);
    let constraint = BitMatrix::from_rows(&columns, len).transpose();
    let solutions = constraint.nullspace();
    let mut pick = BitVec::zeros(nvars);
    for r in 0..solutions.rows() {
        if rng.gen_bool(0.5) {
            pick.xor_assign(&solutions.row(r));
        }
    }
    let comps = build(&|k| pick.get(k));
    ChainMap::new(a.clone(), c.clone(), a.lo(), comps).expect("solution of the constraints")
}
