//! Noiseless execution of the five-step measurement protocol on a
//! stabilizer tableau.
//!
//! The tableau keeps `n` destabilizer and `n` stabilizer rows as Pauli
//! operators and performs the usual update for measuring an arbitrary
//! Hermitian Pauli. The protocol prepares an eigenstate of the target
//! logical, attaches ancillas, measures the merged code and finally measures
//! the ancillas out again.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::css::{CssCode, PauliOperator, Sector};
use crate::f2la::{BitMatrix, BitVec};
use crate::surgery::{MeasurementArtifact, MergedCode, Scheme};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("the protocol needs a CSS cone artifact")]
    NotCss,
    #[error("prepared eigenvalue must be +1 or -1, got {0}")]
    BadEigenvalue(i8),
    #[error("at least one round of stabilizer measurements is required")]
    ZeroRounds,
    #[error("measured operator is not Hermitian")]
    NotHermitian,
    #[error("operator acts on {found} qubits, state has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("tableau inconsistency: {0}")]
    Inconsistent(String),
}

/// A stabilizer state on `n` qubits with its destabilizers.
#[derive(Clone, Debug)]
pub struct StabilizerState {
    destab: Vec<PauliOperator>,
    stab: Vec<PauliOperator>,
    rng: ChaCha8Rng,
}

fn anticommutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    let (ax, az, bx, bz) = (a.x.words(), a.z.words(), b.x.words(), b.z.words());
    let mut parity = 0u32;
    for w in 0..ax.len() {
        parity ^= ((ax[w] & bz[w]) ^ (az[w] & bx[w])).count_ones();
    }
    parity & 1 == 1
}

impl StabilizerState {
    /// The state `|0…0⟩`; `seed` drives random measurement outcomes.
    pub fn zero(n: usize, seed: u64) -> Self {
        Self {
            destab: (0..n).map(|q| PauliOperator::pure(Sector::X, n, &[q])).collect(),
            stab: (0..n).map(|q| PauliOperator::pure(Sector::Z, n, &[q])).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn n(&self) -> usize {
        self.stab.len()
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.stab
    }

    fn check(&self, p: &PauliOperator) -> Result<(), ProtocolError> {
        if p.n() != self.n() {
            return Err(ProtocolError::LengthMismatch {
                expected: self.n(),
                found: p.n(),
            });
        }
        if p.sign().is_none() {
            return Err(ProtocolError::NotHermitian);
        }
        Ok(())
    }

    /// The eigenvalue of `p` when it is fixed by the state.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Option<i8>, ProtocolError> {
        self.check(p)?;
        if self.stab.iter().any(|s| anticommutes(s, p)) {
            return Ok(None);
        }
        let mut acc = PauliOperator::identity(self.n());
        for (d, s) in self.destab.iter().zip(&self.stab) {
            if anticommutes(d, p) {
                acc = acc.mul(s);
            }
        }
        if acc.x != p.x || acc.z != p.z {
            return Err(ProtocolError::Inconsistent(
                "commuting operator outside the stabilizer group".into(),
            ));
        }
        Ok(Some(if acc.phase == p.phase { 1 } else { -1 }))
    }

    /// Measures `p`, returning the outcome and whether it was determined.
    pub fn measure_pauli(&mut self, p: &PauliOperator) -> Result<(i8, bool), ProtocolError> {
        self.check(p)?;
        let Some(pivot) = self.stab.iter().position(|s| anticommutes(s, p)) else {
            let value = self.expectation(p)?.expect("commutes with every stabilizer");
            return Ok((value, true));
        };
        let row = self.stab[pivot].clone();
        for i in 0..self.n() {
            if i != pivot && anticommutes(&self.stab[i], p) {
                self.stab[i] = self.stab[i].mul(&row);
            }
            if anticommutes(&self.destab[i], p) {
                let mut d = self.destab[i].mul(&row);
                d.phase = 0;
                self.destab[i] = d;
            }
        }
        self.destab[pivot] = row;
        let flip: bool = self.rng.gen();
        self.stab[pivot] = if flip { p.negate() } else { p.clone() };
        Ok((if flip { -1 } else { 1 }, false))
    }

    /// Conjugates the state by the Pauli `e`.
    pub fn apply_pauli(&mut self, e: &PauliOperator) {
        for s in &mut self.stab {
            if anticommutes(s, e) {
                *s = s.negate();
            }
        }
    }

    /// Stabilizers commute, destabilizers pair with them symplectically.
    pub fn is_consistent(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| {
                !anticommutes(&self.stab[i], &self.stab[j])
                    && anticommutes(&self.destab[i], &self.stab[j]) == (i == j)
            })
        })
    }

    /// Row space of the Z-type elements of the stabilizer group.
    pub fn z_subgroup(&self) -> BitMatrix {
        let n = self.n();
        let xs = BitMatrix::from_rows(&self.stab.iter().map(|s| s.x.clone()).collect::<Vec<_>>(), n);
        let zs = BitMatrix::from_rows(&self.stab.iter().map(|s| s.z.clone()).collect::<Vec<_>>(), n);
        xs.left_nullspace().mul(&zs).rref()
    }
}

/// Record of one noiseless protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolReport {
    pub prepared: i8,
    /// Outcomes of the vertex checks measured in step 2.
    pub step2_outcomes: Vec<i8>,
    /// Product of the step-2 outcomes times the artifact sign.
    pub inferred: i8,
    /// The Z-type group after step 2 spans `[[H_Z, f0], [0, G]]` with `ker G = im ∂1`.
    pub step2_group_matches: bool,
    /// Cycle checks in `rowspace(G)` left unmeasured because `∂0` does not need them.
    pub fixed_gauges: usize,
    pub step3_outcomes: Vec<i8>,
    /// Syndrome of every merged-code check for each round.
    pub rounds: Vec<Vec<i8>>,
    pub rounds_deterministic: bool,
    /// Z outcomes of the ancillas in step 5, set bits meaning `-1`.
    pub ancilla_outcomes: BitVec,
    /// X correction applied to the original qubits after step 5.
    pub correction: BitVec,
    /// Every original check is fixed with sign `+1` at the end.
    pub final_group_matches: bool,
    /// Eigenvalue of the measured logical at the end.
    pub final_logical: i8,
}

fn pad(v: &BitVec, total: usize) -> BitVec {
    v.concat(&BitVec::zeros(total - v.len()))
}

fn as_x(v: &BitVec) -> PauliOperator {
    PauliOperator::from_x(v.clone())
}

fn as_z(v: &BitVec) -> PauliOperator {
    PauliOperator::from_z(v.clone())
}

/// Runs the protocol for a cone artifact, preparing the measured logical
/// with eigenvalue `prepared`. Z measurements run in the Hadamard-rotated
/// frame, where they become X measurements.
pub fn run_protocol(
    art: &MeasurementArtifact,
    prepared: i8,
    rounds: usize,
    seed: u64,
) -> Result<ProtocolReport, ProtocolError> {
    if prepared != 1 && prepared != -1 {
        return Err(ProtocolError::BadEigenvalue(prepared));
    }
    if rounds == 0 {
        return Err(ProtocolError::ZeroRounds);
    }
    let (MergedCode::Css(merged), Some(sector)) = (&art.merged, art.sector) else {
        return Err(ProtocolError::NotCss);
    };
    if art.scheme == Scheme::Cylinder {
        return Err(ProtocolError::NotCss);
    }
    let (original, merged) = match sector {
        Sector::X => (art.original.clone(), merged.clone()),
        Sector::Z => (art.original.dual(), merged.dual()),
    };
    let xbar = art.measured_operator.part(sector).clone();
    let sign = art.sign;
    let mut report = run_x(&original, &merged, art, &xbar, prepared * sign, rounds, seed)?;
    report.prepared = prepared;
    report.inferred *= sign;
    report.final_logical *= sign;
    Ok(report)
}

fn inconsistent(msg: &str) -> ProtocolError {
    ProtocolError::Inconsistent(msg.into())
}

fn run_x(
    original: &CssCode,
    merged: &CssCode,
    art: &MeasurementArtifact,
    xbar: &BitVec,
    prepared: i8,
    rounds: usize,
    seed: u64,
) -> Result<ProtocolReport, ProtocolError> {
    let n = original.n();
    let total = merged.n();
    let (mx, mz) = (original.hx().rows(), original.hz().rows());
    let mut state = StabilizerState::zero(total, seed);

    // preparation: fix every X check and every X logical, then repair signs
    let (lx, _) = original.paired_logicals(Some(xbar));
    let targets: Vec<BitVec> = original.hx().row_vecs().into_iter().chain(lx.row_vecs()).collect();
    let mut flips = Vec::with_capacity(targets.len());
    for (i, t) in targets.iter().enumerate() {
        let (value, _) = state.measure_pauli(&as_x(&pad(t, total)))?;
        let want = if i == mx { prepared } else { 1 };
        flips.push(value != want);
    }
    let system = BitMatrix::from_rows(&targets, n);
    let frame = system
        .solve(&BitVec::from_bools(&flips))
        .map_err(|e| ProtocolError::Inconsistent(e.to_string()))?
        .ok_or_else(|| inconsistent("no Pauli frame repairs the preparation signs"))?;
    state.apply_pauli(&as_z(&pad(&frame, total)));
    let logical = as_x(&pad(xbar, total));
    if state.expectation(&logical)? != Some(prepared) {
        return Err(inconsistent("logical not prepared"));
    }

    // step 1: ancillas start in |0⟩, nothing to do
    // step 2: vertex checks
    let mut step2_outcomes = Vec::new();
    for r in mx..merged.hx().rows() {
        step2_outcomes.push(state.measure_pauli(&as_x(&merged.hx().row(r)))?.0);
    }
    let inferred: i8 = step2_outcomes.iter().product();
    let g = art.d1.left_nullspace();
    let expected = original
        .hz()
        .hstack(&art.f0)
        .vstack(&BitMatrix::zeros(g.rows(), n).hstack(&g));
    let step2_group_matches = state.z_subgroup().same_row_space(&expected);

    // step 3: extended Z checks; cycles outside rowspace(∂0) stay unmeasured
    let fixed_gauges = g.rank() - art.d0.rank();
    let mut step3_outcomes = Vec::new();
    for r in 0..mz {
        let (value, det) = state.measure_pauli(&as_z(&merged.hz().row(r)))?;
        if !det {
            return Err(inconsistent("extended Z check was not fixed after step 2"));
        }
        step3_outcomes.push(value);
    }

    // step 4: repeated rounds over all merged checks
    let mut round_records = Vec::with_capacity(rounds);
    let mut rounds_deterministic = true;
    for _ in 0..rounds {
        let mut record = Vec::new();
        for r in 0..merged.hx().rows() {
            let (value, det) = state.measure_pauli(&as_x(&merged.hx().row(r)))?;
            rounds_deterministic &= det;
            record.push(value);
        }
        for r in 0..merged.hz().rows() {
            let (value, det) = state.measure_pauli(&as_z(&merged.hz().row(r)))?;
            rounds_deterministic &= det;
            record.push(value);
        }
        if round_records.last().is_some_and(|prev| *prev != record) {
            rounds_deterministic = false;
        }
        round_records.push(record);
    }

    // step 5: measure ancillas out and undo their effect on the Z checks
    let a = total - n;
    let mut ancilla_bits = Vec::with_capacity(a);
    for q in n..total {
        let (value, _) = state.measure_pauli(&PauliOperator::pure(Sector::Z, total, &[q]))?;
        ancilla_bits.push(value < 0);
    }
    let ancilla_outcomes = BitVec::from_bools(&ancilla_bits);
    let u = art
        .d1
        .solve(&ancilla_outcomes)
        .map_err(|e| ProtocolError::Inconsistent(e.to_string()))?
        .ok_or_else(|| inconsistent("ancilla outcomes are not a boundary"))?;
    let correction = art.f1.mul_vec(&u);
    state.apply_pauli(&as_x(&pad(&correction, total)));

    let mut final_group_matches = true;
    for r in 0..mx {
        final_group_matches &= state.expectation(&as_x(&pad(&original.hx().row(r), total)))? == Some(1);
    }
    for r in 0..mz {
        final_group_matches &= state.expectation(&as_z(&pad(&original.hz().row(r), total)))? == Some(1);
    }
    let final_logical = state
        .expectation(&logical)?
        .ok_or_else(|| inconsistent("logical no longer fixed"))?;
    Ok(ProtocolReport {
        prepared,
        step2_outcomes,
        inferred,
        step2_group_matches,
        fixed_gauges,
        step3_outcomes,
        rounds: round_records,
        rounds_deterministic,
        ancilla_outcomes,
        correction,
        final_group_matches,
        final_logical,
    })
}
