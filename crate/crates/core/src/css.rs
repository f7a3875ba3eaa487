//! CSS and symplectic stabilizer codes, Pauli operators, parameters,
//! logical bases and distance computation.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::f2la::{BitMatrix, BitVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CssError {
    #[error("check matrices do not commute")]
    NonCommuting,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("search space of dimension {dim} exceeds cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
}

/// Which Pauli type an operator or check belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    X,
    Z,
}

impl Sector {
    pub fn other(self) -> Sector {
        match self {
            Sector::X => Sector::Z,
            Sector::Z => Sector::X,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::X => write!(f, "X"),
            Sector::Z => write!(f, "Z"),
        }
    }
}

/// Code distance; `Infinite` when there is no nontrivial logical operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// A CSS code given by its X and Z check matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
}

/// Maximum and mean column (q) and row (w) weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightProfile {
    pub q_x: usize,
    pub w_x: usize,
    pub q_z: usize,
    pub w_z: usize,
    pub q: usize,
    pub w: usize,
    pub q_x_avg: f64,
    pub w_x_avg: f64,
    pub q_z_avg: f64,
    pub w_z_avg: f64,
    pub q_avg: f64,
    pub w_avg: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl WeightProfile {
    pub fn of_matrices(hx: &BitMatrix, hz: &BitMatrix) -> Self {
        let n = hx.cols();
        let stacked = hx.vstack(hz);
        let max = |v: Vec<usize>| v.into_iter().max().unwrap_or(0);
        let (nx, nz) = (hx.count_ones(), hz.count_ones());
        Self {
            q_x: max(hx.col_weights()),
            w_x: max(hx.row_weights()),
            q_z: max(hz.col_weights()),
            w_z: max(hz.row_weights()),
            q: max(stacked.col_weights()),
            w: max(stacked.row_weights()),
            q_x_avg: ratio(nx, n),
            w_x_avg: ratio(nx, hx.rows()),
            q_z_avg: ratio(nz, n),
            w_z_avg: ratio(nz, hz.rows()),
            q_avg: ratio(nx + nz, n),
            w_avg: ratio(nx + nz, stacked.rows()),
        }
    }
}

impl CssCode {
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self, CssError> {
        if hx.cols() != hz.cols() {
            return Err(CssError::LengthMismatch {
                expected: hx.cols(),
                found: hz.cols(),
            });
        }
        if !hz.mul(&hx.transpose()).is_zero() {
            return Err(CssError::NonCommuting);
        }
        Ok(Self { hx, hz })
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn k(&self) -> usize {
        self.n() - self.hx.rank() - self.hz.rank()
    }

    pub fn params(&self) -> (usize, usize) {
        (self.n(), self.k())
    }

    /// Checks of the given type.
    pub fn checks(&self, sector: Sector) -> &BitMatrix {
        match sector {
            Sector::X => &self.hx,
            Sector::Z => &self.hz,
        }
    }

    /// The code with the roles of X and Z exchanged.
    pub fn dual(&self) -> CssCode {
        CssCode {
            hx: self.hz.clone(),
            hz: self.hx.clone(),
        }
    }

    /// Direct sum of two codes; qubits of `other` follow those of `self`.
    pub fn direct_sum(&self, other: &CssCode) -> CssCode {
        let bd = |a: &BitMatrix, b: &BitMatrix| {
            BitMatrix::block_sized(
                &[vec![Some(a), None], vec![None, Some(b)]],
                &[a.rows(), b.rows()],
                &[a.cols(), b.cols()],
            )
        };
        CssCode {
            hx: bd(&self.hx, &other.hx),
            hz: bd(&self.hz, &other.hz),
        }
    }

    pub fn weight_profile(&self) -> WeightProfile {
        WeightProfile::of_matrices(&self.hx, &self.hz)
    }

    /// True when `v` commutes with every check of the opposite type.
    pub fn is_operator(&self, v: &BitVec, sector: Sector) -> bool {
        v.len() == self.n() && self.checks(sector.other()).mul_vec(v).is_zero()
    }

    /// True when `v` is a logical operator outside the stabilizer group.
    pub fn is_nontrivial_logical(&self, v: &BitVec, sector: Sector) -> bool {
        self.is_operator(v, sector)
            && !self
                .checks(sector)
                .row_space_contains(v)
                .expect("length checked")
    }

    /// Coset representatives of `ker H_opp / rowspace H_same`; `k` rows.
    pub fn logical_basis(&self, sector: Sector) -> BitMatrix {
        complete_basis(self.checks(sector), &self.checks(sector.other()).nullspace(), &[])
    }

    /// Logical bases with `lx · lz^T = I`. When `first_x` is given it becomes
    /// the first row of `lx`.
    pub fn paired_logicals(&self, first_x: Option<&BitVec>) -> (BitMatrix, BitMatrix) {
        let extra: Vec<BitVec> = first_x.into_iter().cloned().collect();
        let lx = complete_basis(&self.hx, &self.hz.nullspace(), &extra);
        let lz = self.logical_basis(Sector::Z);
        let m = lx.mul(&lz.transpose());
        let inv = m.inverse().expect("logical pairing is nondegenerate");
        let lz = inv.transpose().mul(&lz);
        (lx, lz)
    }
}

/// Extends `span(fixed)` by `extra` then by rows of `candidates`, returning only
/// the added rows that are independent modulo `fixed`.
fn complete_basis(fixed: &BitMatrix, candidates: &BitMatrix, extra: &[BitVec]) -> BitMatrix {
    let n = fixed.cols();
    let mut acc = fixed.rref();
    let mut out = BitMatrix::zeros(0, n);
    let rows = extra.iter().cloned().chain(candidates.row_vecs());
    let mut rank = acc.rows();
    for v in rows {
        let trial = acc.vstack(&BitMatrix::from_rows(std::slice::from_ref(&v), n));
        let r = trial.rank();
        if r > rank {
            rank = r;
            acc = trial.rref();
            out.push_row(&v);
        }
    }
    out
}

/// A Pauli operator `i^phase · ⊗_q P_q` with `P_q ∈ {I, X, Y, Z}` given by
/// the bits `(x_q, z_q)`; `(1, 1)` is the Hermitian `Y = iXZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub x: BitVec,
    pub z: BitVec,
    /// Power of `i`, reduced mod 4.
    pub phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn new(x: BitVec, z: BitVec, phase: u8) -> Result<Self, CssError> {
        if x.len() != z.len() {
            return Err(CssError::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self {
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn from_x(x: BitVec) -> Self {
        let n = x.len();
        Self {
            x,
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    pub fn from_z(z: BitVec) -> Self {
        let n = z.len();
        Self {
            x: BitVec::zeros(n),
            z,
            phase: 0,
        }
    }

    /// Operator of the given type on `support`.
    pub fn pure(sector: Sector, n: usize, support: &[usize]) -> Self {
        let v = BitVec::from_indices(n, support.iter().copied());
        match sector {
            Sector::X => Self::from_x(v),
            Sector::Z => Self::from_z(v),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).weight()
    }

    /// `Some(X)` or `Some(Z)` for pure operators, `None` otherwise (identity is `None`).
    pub fn sector(&self) -> Option<Sector> {
        match (self.x.is_zero(), self.z.is_zero()) {
            (false, true) => Some(Sector::X),
            (true, false) => Some(Sector::Z),
            _ => None,
        }
    }

    /// Bits of the part of the given type.
    pub fn part(&self, sector: Sector) -> &BitVec {
        match sector {
            Sector::X => &self.x,
            Sector::Z => &self.z,
        }
    }

    /// Sign as `+1`/`-1`, or `None` for imaginary phases.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// `(x | z)` as a single vector of length `2n`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn from_symplectic(v: &BitVec, phase: u8) -> Self {
        let n = v.len() / 2;
        Self {
            x: v.slice(0, n),
            z: v.slice(n, 2 * n),
            phase: phase % 4,
        }
    }

    /// Product `self · other` with exact phase.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(self.n(), other.n(), "length mismatch in Pauli product");
        let e = i64::from(self.phase)
            + i64::from(other.phase)
            + product_exponent(self.x.words(), self.z.words(), other.x.words(), other.z.words());
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        PauliOperator {
            x,
            z,
            phase: e.rem_euclid(4) as u8,
        }
    }

    pub fn negate(&self) -> PauliOperator {
        let mut p = self.clone();
        p.phase = (p.phase + 2) % 4;
        p
    }

    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) % 4,
        }
    }

    /// Restriction to the qubits `start..end`, dropping the phase.
    pub fn slice(&self, start: usize, end: usize) -> PauliOperator {
        PauliOperator {
            x: self.x.slice(start, end),
            z: self.z.slice(start, end),
            phase: 0,
        }
    }
}

/// Exponent of `i` produced when multiplying single-qubit Paulis
/// `(x1, z1) · (x2, z2)` in the Hermitian basis.
#[cfg(test)]
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i64 {
    let (x2, z2) = (i64::from(x2), i64::from(z2));
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Exponent of `i` in the product of two Paulis given as words, summed
/// over qubits one word at a time.
pub(crate) fn product_exponent(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> i64 {
    let mut e = 0i64;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        let y1 = a & b;
        let xo = a & !b;
        let zo = b & !a;
        let plus = (y1 & d & !c) | (xo & c & d) | (zo & c & !d);
        let minus = (y1 & c & !d) | (xo & d & !c) | (zo & c & d);
        e += i64::from(plus.count_ones()) - i64::from(minus.count_ones());
    }
    e
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        let mut first = true;
        for q in 0..self.n() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => continue,
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{c}{q}")?;
            first = false;
        }
        if first {
            write!(f, "I")?;
        }
        Ok(())
    }
}

/// True iff the symplectic form `a_x·b_z + a_z·b_x` vanishes.
pub fn symplectic_commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool, CssError> {
    if a.n() != b.n() {
        return Err(CssError::LengthMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(a.x.dot(&b.z) == a.z.dot(&b.x))
}

/// A stabilizer code as one symplectic `(X | Z)` matrix with generator signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticCode {
    stab: BitMatrix,
    signs: BitVec,
}

impl SymplecticCode {
    /// `signs[i]` set means generator `i` carries a `-1`.
    pub fn new(stab: BitMatrix, signs: BitVec) -> Result<Self, CssError> {
        if !stab.cols().is_multiple_of(2) {
            return Err(CssError::LengthMismatch {
                expected: stab.cols() + 1,
                found: stab.cols(),
            });
        }
        if signs.len() != stab.rows() {
            return Err(CssError::LengthMismatch {
                expected: stab.rows(),
                found: signs.len(),
            });
        }
        let code = Self { stab, signs };
        let sw = code.swapped();
        if !code.stab.mul(&sw.transpose()).is_zero() {
            return Err(CssError::NonCommuting);
        }
        Ok(code)
    }

    pub fn from_css(code: &CssCode) -> Self {
        let n = code.n();
        let z0 = BitMatrix::zeros(code.hx().rows(), n);
        let x0 = BitMatrix::zeros(code.hz().rows(), n);
        let stab = code.hx().hstack(&z0).vstack(&x0.hstack(code.hz()));
        Self {
            signs: BitVec::zeros(stab.rows()),
            stab,
        }
    }

    pub fn from_generators(gens: &[PauliOperator]) -> Result<Self, CssError> {
        let n = gens.first().map_or(0, |g| g.n());
        let mut stab = BitMatrix::zeros(0, 2 * n);
        let mut signs = Vec::new();
        for g in gens {
            let s = g.sign().ok_or(CssError::NonCommuting)?;
            stab.push_row(&g.symplectic());
            signs.push(s < 0);
        }
        Self::new(stab, BitVec::from_bools(&signs))
    }

    pub fn stab(&self) -> &BitMatrix {
        &self.stab
    }

    pub fn signs(&self) -> &BitVec {
        &self.signs
    }

    pub fn n(&self) -> usize {
        self.stab.cols() / 2
    }

    pub fn k(&self) -> usize {
        self.n() - self.stab.rank()
    }

    pub fn generator(&self, i: usize) -> PauliOperator {
        let phase = if self.signs.get(i) { 2 } else { 0 };
        PauliOperator::from_symplectic(&self.stab.row(i), phase)
    }

    pub fn generators(&self) -> Vec<PauliOperator> {
        (0..self.stab.rows()).map(|i| self.generator(i)).collect()
    }

    /// `[Z | X]`, so that `a · swapped(b)^T` is the symplectic form.
    fn swapped(&self) -> BitMatrix {
        let n = self.n();
        self.stab.column_range(n, 2 * n).hstack(&self.stab.column_range(0, n))
    }

    pub fn all_commute(&self) -> bool {
        self.stab.mul(&self.swapped().transpose()).is_zero()
    }

    /// Maximum generator weight and maximum number of generators per qubit.
    pub fn max_weights(&self) -> (usize, usize) {
        let n = self.n();
        let supp = (0..self.stab.rows())
            .map(|r| self.generator(r).x.or(&self.generator(r).z))
            .collect::<Vec<_>>();
        let m = BitMatrix::from_rows(&supp, n);
        (
            m.max_row_weight(),
            m.col_weights().into_iter().max().unwrap_or(0),
        )
    }

    /// Exact minimum weight of a nontrivial logical operator.
    pub fn exact_distance(&self, opts: &DistanceOptions) -> Result<DistanceResult, CssError> {
        let n = self.n();
        let basis = self.swapped().nullspace();
        let dual = self.stab.nullspace();
        let weight = move |w: &[u64]| {
            let v = BitVec::from_words(w.to_vec(), 2 * n);
            v.slice(0, n).or(&v.slice(n, 2 * n)).weight()
        };
        min_weight_nontrivial(&basis, &dual, &weight, opts)
    }
}

/// Tuning knobs for exhaustive distance computation.
#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    /// Largest kernel dimension that will be enumerated.
    pub cap: usize,
    /// Worker threads; results do not depend on this.
    pub workers: usize,
    /// Maximum number of minimum-weight witnesses retained.
    pub max_witnesses: usize,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            cap: 26,
            workers: 1,
            max_witnesses: 64,
        }
    }
}

/// Outcome of an exhaustive distance search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub distance: Distance,
    /// Minimum-weight nontrivial logicals, sorted, truncated to the option limit.
    pub witnesses: Vec<BitVec>,
}

/// Minimum weight over `ker H_opp` outside `rowspace(H_same ∪ gauge_rows)`,
/// by enumerating the kernel in Gray-code order.
pub fn exact_distance(
    code: &CssCode,
    sector: Sector,
    gauge_rows: Option<&BitMatrix>,
    opts: &DistanceOptions,
) -> Result<DistanceResult, CssError> {
    let basis = code.checks(sector.other()).nullspace();
    let mut same = code.checks(sector).clone();
    if let Some(g) = gauge_rows {
        if g.cols() != code.n() {
            return Err(CssError::LengthMismatch {
                expected: code.n(),
                found: g.cols(),
            });
        }
        same = same.vstack(g);
    }
    let dual = same.nullspace();
    let weight = |w: &[u64]| w.iter().map(|x| x.count_ones() as usize).sum::<usize>();
    min_weight_nontrivial(&basis, &dual, &weight, opts)
}

/// Shared enumeration engine. A vector `v` in the span of `basis` is
/// nontrivial when `dual · v != 0`.
fn min_weight_nontrivial(
    basis: &BitMatrix,
    dual: &BitMatrix,
    weight: &(dyn Fn(&[u64]) -> usize + Sync),
    opts: &DistanceOptions,
) -> Result<DistanceResult, CssError> {
    let dim = basis.rows();
    if dim > opts.cap || dim > 63 {
        return Err(CssError::CapExceeded { dim, cap: opts.cap });
    }
    // syndromes of basis vectors against the dual, compressed to independent columns
    let syn = basis.mul(&dual.transpose());
    let cols = syn.echelon().pivots;
    let syn_bits: Vec<u64> = (0..dim)
        .map(|r| {
            cols.iter()
                .enumerate()
                .filter(|(_, &c)| syn.get(r, c))
                .fold(0u64, |acc, (j, _)| acc | (1u64 << j))
        })
        .collect();
    if cols.is_empty() {
        return Ok(DistanceResult {
            distance: Distance::Infinite,
            witnesses: Vec::new(),
        });
    }
    let rows: Vec<Vec<u64>> = (0..dim).map(|r| basis.row_words(r).to_vec()).collect();
    let len = basis.cols();
    let workers = opts.workers.max(1);
    let top = (usize::BITS - 1 - workers.next_power_of_two().leading_zeros()) as usize;
    let top = top.min(dim);
    let low = dim - top;
    let scan = |prefix: usize| -> (usize, Vec<Vec<u64>>) {
        let mut v = vec![0u64; rows.first().map_or(0, |r| r.len())];
        let mut s = 0u64;
        for j in 0..top {
            if prefix >> j & 1 == 1 {
                for (a, b) in v.iter_mut().zip(&rows[low + j]) {
                    *a ^= *b;
                }
                s ^= syn_bits[low + j];
            }
        }
        let mut best = usize::MAX;
        let mut wit: Vec<Vec<u64>> = Vec::new();
        let mut consider = |v: &[u64], s: u64| {
            if s != 0 {
                let w = weight(v);
                match w.cmp(&best) {
                    Ordering::Less => {
                        best = w;
                        wit.clear();
                        wit.push(v.to_vec());
                    }
                    Ordering::Equal if wit.len() < opts.max_witnesses.max(1) * 4 => {
                        wit.push(v.to_vec());
                    }
                    _ => {}
                }
            }
        };
        consider(&v, s);
        for i in 1u64..(1u64 << low) {
            let b = i.trailing_zeros() as usize;
            for (a, x) in v.iter_mut().zip(&rows[b]) {
                *a ^= *x;
            }
            s ^= syn_bits[b];
            consider(&v, s);
        }
        (best, wit)
    };
    let prefixes: Vec<usize> = (0..1usize << top).collect();
    let results: Vec<(usize, Vec<Vec<u64>>)> = if workers <= 1 || top == 0 {
        prefixes.iter().map(|&p| scan(p)).collect()
    } else {
        std::thread::scope(|sc| {
            let chunks: Vec<&[usize]> = prefixes.chunks(prefixes.len().div_ceil(workers)).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    let scan = &scan;
                    sc.spawn(move || chunk.iter().map(|&p| scan(p)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("distance worker panicked"))
                .collect()
        })
    };
    let best = results.iter().map(|r| r.0).min().unwrap_or(usize::MAX);
    if best == usize::MAX {
        return Ok(DistanceResult {
            distance: Distance::Infinite,
            witnesses: Vec::new(),
        });
    }
    let mut witnesses: Vec<BitVec> = results
        .into_iter()
        .filter(|r| r.0 == best)
        .flat_map(|r| r.1)
        .map(|w| BitVec::from_words(w, len))
        .collect();
    witnesses.sort();
    witnesses.dedup();
    witnesses.truncate(opts.max_witnesses);
    Ok(DistanceResult {
        distance: Distance::Finite(best),
        witnesses,
    })
}

/// Randomized upper bound on the distance of one sector.
///
/// Each trial eliminates the opposite check matrix with pivots chosen in a
/// random column order; every free column then yields a kernel vector whose
/// weight is one plus the weight of that column. Candidates lighter than the
/// current best are tested for nontriviality.
pub fn distance_upper_bound(
    code: &CssCode,
    sector: Sector,
    trials: usize,
    seed: u64,
    workers: usize,
) -> (Distance, Option<BitVec>) {
    let check = code.checks(sector.other());
    let dual = code.logical_basis(sector.other());
    if dual.rows() == 0 {
        return (Distance::Infinite, None);
    }
    let n = code.n();
    let workers = workers.max(1);
    let run = |w: usize, count: usize| -> (usize, Option<BitVec>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(w as u64);
        let mut best = usize::MAX;
        let mut best_vec = None;
        let mut order: Vec<usize> = (0..n).collect();
        let mut m = check.clone();
        for _ in 0..count {
            order.shuffle(&mut rng);
            m.clone_from(check);
            let pivots = m.reduce_in_order(order.iter().copied());
            let mut is_pivot = vec![false; n];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            let mut colw = vec![0usize; n];
            for r in 0..pivots.len() {
                for c in m.row_ones(r) {
                    colw[c] += 1;
                }
            }
            for j in 0..n {
                if is_pivot[j] || colw[j] + 1 >= best {
                    continue;
                }
                let mut v = BitVec::zeros(n);
                v.set(j, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, j) {
                        v.set(p, true);
                    }
                }
                if !dual.mul_vec(&v).is_zero() {
                    best = colw[j] + 1;
                    best_vec = Some(v);
                }
            }
        }
        (best, best_vec)
    };
    let share = |w: usize| trials / workers + usize::from(w < trials % workers);
    let results: Vec<(usize, Option<BitVec>)> = if workers == 1 {
        vec![run(0, trials)]
    } else {
        std::thread::scope(|sc| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let run = &run;
                    sc.spawn(move || run(w, share(w)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("distance worker panicked"))
                .collect()
        })
    };
    let (best, vec) = results
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least one worker");
    if best == usize::MAX {
        (Distance::Infinite, None)
    } else {
        (Distance::Finite(best), vec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steane() -> CssCode {
        let h = BitMatrix::from_bitstrings(&["0001111", "0110011", "1010101"]);
        CssCode::new(h.clone(), h).unwrap()
    }

    #[test]
    fn steane_params_and_distance() {
        let c = steane();
        assert_eq!(c.params(), (7, 1));
        let d = exact_distance(&c, Sector::X, None, &DistanceOptions::default()).unwrap();
        assert_eq!(d.distance, Distance::Finite(3));
        let d = exact_distance(&c, Sector::Z, None, &DistanceOptions::default()).unwrap();
        assert_eq!(d.distance, Distance::Finite(3));
        let (ub, v) = distance_upper_bound(&c, Sector::X, 50, 1, 1);
        assert_eq!(ub, Distance::Finite(3));
        assert!(c.is_nontrivial_logical(&v.unwrap(), Sector::X));
    }

    #[test]
    fn steane_logical_basis() {
        let c = steane();
        let l = c.logical_basis(Sector::X);
        assert_eq!(l.rows(), 1);
        assert!(c.is_nontrivial_logical(&l.row(0), Sector::X));
        let x = BitVec::from_bitstring("1110000");
        let (lx, lz) = c.paired_logicals(Some(&x));
        assert_eq!(lx.row(0), x);
        assert_eq!(lx.mul(&lz.transpose()), BitMatrix::identity(1));
    }

    #[test]
    fn distance_workers_agree() {
        let c = steane();
        let one = exact_distance(&c, Sector::X, None, &DistanceOptions::default()).unwrap();
        let opts = DistanceOptions {
            workers: 3,
            ..Default::default()
        };
        assert_eq!(exact_distance(&c, Sector::X, None, &opts).unwrap(), one);
    }

    #[test]
    fn word_phase_matches_single_qubit_table() {
        let paulis = [(false, false), (true, false), (false, true), (true, true)];
        for &(x1, z1) in &paulis {
            for &(x2, z2) in &paulis {
                let w = |b: bool| [u64::from(b) << 5];
                let e = product_exponent(&w(x1), &w(z1), &w(x2), &w(z2));
                assert_eq!(e, phase_exponent(x1, z1, x2, z2));
            }
        }
        let x = PauliOperator::pure(Sector::X, 1, &[0]);
        let z = PauliOperator::pure(Sector::Z, 1, &[0]);
        assert_eq!(x.mul(&z).phase, 3);
        assert_eq!(z.mul(&x).phase, 1);
    }

    #[test]
    fn no_logicals_gives_infinite() {
        let c = CssCode::new(BitMatrix::identity(2), BitMatrix::zeros(0, 2)).unwrap();
        assert_eq!(c.k(), 0);
        let d = exact_distance(&c, Sector::X, None, &DistanceOptions::default()).unwrap();
        assert_eq!(d.distance, Distance::Infinite);
        assert_eq!(distance_upper_bound(&c, Sector::X, 10, 0, 1).0, Distance::Infinite);
    }

    #[test]
    fn cap_is_enforced() {
        let c = CssCode::new(BitMatrix::zeros(0, 30), BitMatrix::zeros(0, 30)).unwrap();
        assert!(matches!(
            exact_distance(&c, Sector::X, None, &DistanceOptions::default()),
            Err(CssError::CapExceeded { dim: 30, cap: 26 })
        ));
    }

    #[test]
    fn commutation_examples() {
        let x1 = PauliOperator::pure(Sector::X, 2, &[0]);
        let z2 = PauliOperator::pure(Sector::Z, 2, &[1]);
        let z1 = PauliOperator::pure(Sector::Z, 2, &[0]);
        let y1 = x1.mul(&z1);
        assert!(symplectic_commutes(&x1, &z2).unwrap());
        assert!(!symplectic_commutes(&x1, &z1).unwrap());
        assert!(symplectic_commutes(&y1, &y1).unwrap());
        assert!(symplectic_commutes(&x1, &PauliOperator::identity(3)).is_err());
    }

    #[test]
    fn pauli_phases() {
        let x = PauliOperator::pure(Sector::X, 1, &[0]);
        let z = PauliOperator::pure(Sector::Z, 1, &[0]);
        // XZ = -iY and ZX = iY
        let xz = x.mul(&z);
        assert_eq!((xz.x.get(0), xz.z.get(0), xz.phase), (true, true, 3));
        assert_eq!(z.mul(&x).phase, 1);
        // Y = iXZ, so (iXZ)(iXZ) = I
        let mut y = xz.clone();
        y.phase = 0;
        assert_eq!(y.mul(&y), PauliOperator::identity(1));
        assert_eq!(x.mul(&x), PauliOperator::identity(1));
    }

    #[test]
    fn weight_profile_of_empty_code() {
        let c = CssCode::new(BitMatrix::zeros(0, 0), BitMatrix::zeros(0, 0)).unwrap();
        let p = c.weight_profile();
        assert_eq!((p.q_x, p.w_x, p.q_z, p.w_z, p.q, p.w), (0, 0, 0, 0, 0, 0));
        assert_eq!(p.q_avg, 0.0);
    }
}
