//! Measurement constructions: restriction maps, low-weight cycle bases, the
//! edge expanded homological measurement, mixed and parallel measurement,
//! and the earlier surgery schemes used for comparison.
//!
//! All constructions are phrased for an X-type operator. Z-type operators
//! are handled by running the X construction on the dual code and exchanging
//! the roles of the two check matrices afterwards.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codelib;
use crate::css::{symplectic_commutes, CssCode, CssError, PauliOperator, Sector, SymplecticCode};
use crate::f2la::{BitMatrix, BitVec, F2Error};
use crate::homology::{
    ancilla_chain_map, chain_to_css, logical_gauge_counts, mapping_cone, mapping_cylinder,
    ChainComplex, ChainMap, ConeCounts, HomologyError,
};
use crate::hypergraph::{Hypergraph, HypergraphError, DEFAULT_CHEEGER_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("operator is not a nontrivial logical of the code")]
    NotALogical,
    #[error("operator must be a pure X or pure Z Pauli")]
    NotPure,
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("support must be strictly increasing and below {n}")]
    BadSupport { n: usize },
    #[error("support is not annihilated by the opposing checks")]
    NotInKernel,
    #[error("operators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("support extension for operator {0} has no solution")]
    ExtensionInconsistent(usize),
    #[error("structural mismatch: {0}")]
    StructuralMismatch(String),
    #[error("the number of layers must be at least 1")]
    ZeroLayers,
    #[error("cylinder variant rejected: {0}")]
    CylinderRejected(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Css(#[from] CssError),
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// Tuning knobs for the measurement constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementOptions {
    pub seed: u64,
    /// Random candidates drawn by the low-weight cycle search.
    pub samples: usize,
    pub cheeger_cap: usize,
    /// Run greedy edge expansion on the ancilla graph.
    pub expand: bool,
    /// Largest acceptable cycle-check weight; defaults to `max(w_X, w_Z) + 2`.
    pub threshold: Option<usize>,
    /// Take the hyperedge expansion and cellulation branch unconditionally.
    pub force_branch: bool,
    pub cellulation: bool,
    /// Cycle weight above which cellulation splits; defaults to the threshold.
    pub max_cycle_weight: Option<usize>,
    /// Vertex degree cap for chords; defaults to the threshold minus one.
    pub max_degree: Option<usize>,
}

impl Default for MeasurementOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1000,
            cheeger_cap: DEFAULT_CHEEGER_CAP,
            expand: true,
            threshold: None,
            force_branch: false,
            cellulation: true,
            max_cycle_weight: None,
            max_degree: None,
        }
    }
}

/// Provenance of a stabilizer generator of a merged code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowTag {
    OriginalX,
    OriginalZ,
    /// Vertex check of an X measurement.
    NewX,
    /// Vertex check of a Z measurement.
    NewZ,
    /// Merged vertex check of a mixed measurement.
    NewY,
    /// Cycle check supported on ancillas.
    Cycle,
}

impl RowTag {
    /// True for vertex checks, whose outcomes multiply to the measured operator.
    pub fn is_vertex(self) -> bool {
        matches!(self, RowTag::NewX | RowTag::NewZ | RowTag::NewY)
    }

    fn dualized(self) -> RowTag {
        match self {
            RowTag::OriginalX => RowTag::OriginalZ,
            RowTag::OriginalZ => RowTag::OriginalX,
            RowTag::NewX => RowTag::NewZ,
            RowTag::NewZ => RowTag::NewX,
            t => t,
        }
    }
}

/// Which construction produced an artifact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    EdgeExpanded,
    Mixed,
    LatticeSurgery,
    GeneralizedLatticeSurgery { r: usize },
    Cylinder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergedCode {
    Css(CssCode),
    Symplectic(SymplecticCode),
}

impl MergedCode {
    pub fn n(&self) -> usize {
        match self {
            MergedCode::Css(c) => c.n(),
            MergedCode::Symplectic(s) => s.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            MergedCode::Css(c) => c.k(),
            MergedCode::Symplectic(s) => s.k(),
        }
    }

    pub fn as_css(&self) -> Option<&CssCode> {
        match self {
            MergedCode::Css(c) => Some(c),
            MergedCode::Symplectic(_) => None,
        }
    }

    /// Stabilizer matrix in symplectic form; CSS codes list X checks first.
    pub fn symplectic(&self) -> SymplecticCode {
        match self {
            MergedCode::Css(c) => SymplecticCode::from_css(c),
            MergedCode::Symplectic(s) => s.clone(),
        }
    }
}

/// Full output of a measurement construction.
///
/// For a single-sector construction `f1`, `f0`, `d1`, `d0` are the ancilla
/// chain map of the (possibly dualized) X construction. For a mixed
/// measurement `d1` and `d0` are the merged graph and its cycle checks, `f1`
/// maps merged vertices to their qubits and `f0` is `diag(f0_X, f0_Z)`.
#[derive(Clone, Debug)]
pub struct MeasurementArtifact {
    pub scheme: Scheme,
    /// `None` for a mixed measurement.
    pub sector: Option<Sector>,
    pub original: CssCode,
    pub measured_operator: PauliOperator,
    pub f1: BitMatrix,
    pub f0: BitMatrix,
    pub d1: BitMatrix,
    pub d0: BitMatrix,
    pub merged: MergedCode,
    pub ancilla_count: usize,
    /// One tag per row of `merged.symplectic().stab()`.
    pub row_tags: Vec<RowTag>,
    /// Cheeger constants before and after every added edge.
    pub cheeger_trace: Vec<Ratio<usize>>,
    pub edges_added: Vec<(usize, usize)>,
    pub chords: Vec<(usize, usize)>,
    pub seed: u64,
    pub samples: usize,
    /// True when the hyperedge expansion and cellulation branch ran.
    pub branch_taken: bool,
    pub cellulation_feasible: bool,
    /// Product of vertex-check outcomes equals `sign` times the outcome of
    /// the measured operator.
    pub sign: i8,
    pub counts: Option<ConeCounts>,
    pub not_a_measurement: bool,
    pub advisory: Option<String>,
}

impl MeasurementArtifact {
    /// Indices of rows carrying `tag` in the symplectic row order.
    pub fn rows_tagged(&self, tag: RowTag) -> Vec<usize> {
        (0..self.row_tags.len())
            .filter(|&i| self.row_tags[i] == tag)
            .collect()
    }

    /// Indices of vertex checks in the symplectic row order.
    pub fn vertex_rows(&self) -> Vec<usize> {
        (0..self.row_tags.len())
            .filter(|&i| self.row_tags[i].is_vertex())
            .collect()
    }

    /// Final Cheeger constant of the ancilla graph, when one was computed.
    pub fn cheeger(&self) -> Option<Ratio<usize>> {
        self.cheeger_trace.last().copied()
    }

    /// Maximum row weight of the cycle checks `d0`.
    pub fn cycle_weight(&self) -> usize {
        self.d0.max_row_weight()
    }
}

/// Outcome of several measurements applied one after another.
#[derive(Clone, Debug)]
pub struct ParallelArtifact {
    pub original: CssCode,
    pub merged: CssCode,
    pub steps: Vec<MeasurementArtifact>,
    /// Each operator as passed to its step, extended over earlier ancillas.
    pub extended: Vec<PauliOperator>,
}

/// The maps obtained by restricting a check matrix to an operator support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMaps {
    /// `n × w`, column `j` is the unit vector of qubit `q_j`.
    pub f1: BitMatrix,
    /// Opposing checks restricted to the support, zero rows removed.
    pub d1: BitMatrix,
    /// Unit columns selecting the checks `h_j` kept in `d1`.
    pub f0: BitMatrix,
    /// The indices `h_j`.
    pub rows: Vec<usize>,
}

fn validate_support(code: &CssCode, support: &[usize], sector: Sector) -> Result<(), SurgeryError> {
    let n = code.n();
    if support.windows(2).any(|p| p[0] >= p[1]) || support.iter().any(|&q| q >= n) {
        return Err(SurgeryError::BadSupport { n });
    }
    let v = BitVec::from_indices(n, support.iter().copied());
    if !code.is_operator(&v, sector) {
        return Err(SurgeryError::NotInKernel);
    }
    Ok(())
}

/// Restriction maps for an operator of type `sector` supported on `support`.
pub fn restriction_maps(
    code: &CssCode,
    support: &[usize],
    sector: Sector,
) -> Result<RestrictionMaps, SurgeryError> {
    validate_support(code, support, sector)?;
    let h = code.checks(sector.other());
    let n = code.n();
    let w = support.len();
    let mut f1 = BitMatrix::zeros(n, w);
    for (j, &q) in support.iter().enumerate() {
        f1.set(q, j, true);
    }
    let restricted = h.select_columns(support);
    let rows = restricted.nonzero_rows();
    let d1 = restricted.select_rows(&rows);
    let mut f0 = BitMatrix::zeros(h.rows(), rows.len());
    for (j, &r) in rows.iter().enumerate() {
        f0.set(r, j, true);
    }
    Ok(RestrictionMaps { f1, d1, f0, rows })
}

/// The same maps obtained by deleting columns and rows from identities and
/// from the opposing check matrix.
pub fn restriction_maps_by_deletion(
    code: &CssCode,
    support: &[usize],
    sector: Sector,
) -> Result<RestrictionMaps, SurgeryError> {
    validate_support(code, support, sector)?;
    let h = code.checks(sector.other());
    let f1 = BitMatrix::identity(code.n()).select_columns(support);
    let d1_full = h.select_columns(support);
    let keep: Vec<usize> = (0..d1_full.rows())
        .filter(|&r| !d1_full.is_row_zero(r))
        .collect();
    let d1 = d1_full.select_rows(&keep);
    let f0 = BitMatrix::identity(h.rows()).select_columns(&keep);
    Ok(RestrictionMaps {
        f1,
        d1,
        f0,
        rows: keep,
    })
}

/// Cycle checks for the graph `d1` that complement the cycles already
/// generated by `h`: `V = {vᵀ f0 : v ∈ ker hᵀ}`.
pub fn algorithm2_low_weight_d0(
    d1: &BitMatrix,
    hz: &BitMatrix,
    f0: &BitMatrix,
    samples: usize,
    seed: u64,
) -> BitMatrix {
    let v = hz.left_nullspace().mul(f0).rref();
    low_weight_complement(d1, &v, samples, seed)
}

/// Random search for a low-weight basis of a complement of `span(v)` inside
/// the cycle space `ker d1ᵀ`. Candidates `A·W + B·V` and `A·W` replace the
/// current best only when their maximum row weight is strictly smaller.
pub fn low_weight_complement(d1: &BitMatrix, v: &BitMatrix, samples: usize, seed: u64) -> BitMatrix {
    let edges = d1.rows();
    let v = v.rref();
    let ech = v.echelon();
    let mut w = d1.left_nullspace();
    for (i, &p) in ech.pivots.iter().enumerate() {
        let pivot_row = ech.basis.row(i);
        for r in 0..w.rows() {
            if w.get(r, p) {
                let mut row = w.row(r);
                row.xor_assign(&pivot_row);
                w.set_row(r, &row);
            }
        }
    }
    let w = w.rref();
    if w.rows() == 0 {
        return BitMatrix::zeros(0, edges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = w.clone();
    let mut best_weight = best.max_row_weight();
    for _ in 0..samples {
        let a = BitMatrix::random_invertible_with(w.rows(), &mut rng);
        let b = BitMatrix::random(w.rows(), v.rows(), &mut rng);
        let aw = a.mul(&w);
        let full = if v.rows() == 0 {
            aw.clone()
        } else {
            aw.add(&b.mul(&v))
        };
        for cand in [full, aw] {
            let weight = cand.max_row_weight();
            if weight < best_weight {
                best_weight = weight;
                best = cand;
            }
        }
    }
    best
}

fn max_check_weight(code: &CssCode) -> usize {
    code.hx().max_row_weight().max(code.hz().max_row_weight())
}

fn zero_columns(f0: &BitMatrix, extra: usize) -> BitMatrix {
    f0.hstack(&BitMatrix::zeros(f0.rows(), extra))
}

/// Restriction maps followed by optional greedy edge expansion.
struct ExpandedGraph {
    f1: BitMatrix,
    d1: BitMatrix,
    f0: BitMatrix,
    trace: Vec<Ratio<usize>>,
    added: Vec<(usize, usize)>,
}

fn expand_graph(
    f1: BitMatrix,
    d1: BitMatrix,
    f0: BitMatrix,
    opts: &MeasurementOptions,
) -> Result<ExpandedGraph, SurgeryError> {
    let w = d1.cols();
    let graph = Hypergraph::new(d1.clone())?;
    if w < 2 {
        return Ok(ExpandedGraph {
            f1,
            d1,
            f0,
            trace: Vec::new(),
            added: Vec::new(),
        });
    }
    if !opts.expand {
        let trace = if w <= opts.cheeger_cap {
            vec![graph.cheeger(opts.cheeger_cap)?]
        } else {
            Vec::new()
        };
        return Ok(ExpandedGraph {
            f1,
            d1,
            f0,
            trace,
            added: Vec::new(),
        });
    }
    let exp = graph.expand_edges(opts.cheeger_cap)?;
    let f0 = zero_columns(&f0, exp.added.len());
    Ok(ExpandedGraph {
        f1,
        d1: exp.graph.incidence().clone(),
        f0,
        trace: exp.trace,
        added: exp.added,
    })
}

fn pure_support(op: &PauliOperator) -> Result<(Sector, Vec<usize>), SurgeryError> {
    let sector = op.sector().ok_or(SurgeryError::NotPure)?;
    Ok((sector, op.part(sector).support()))
}

/// Edge expanded homological measurement of a pure X or Z logical.
pub fn algorithm3_measure(
    code: &CssCode,
    op: &PauliOperator,
    opts: &MeasurementOptions,
) -> Result<MeasurementArtifact, SurgeryError> {
    if op.n() != code.n() {
        return Err(SurgeryError::BadSupport { n: code.n() });
    }
    let (sector, support) = pure_support(op)?;
    if op.sign().is_none() {
        return Err(SurgeryError::NotHermitian);
    }
    let mut art = match sector {
        Sector::X => measure_x(code, &support, opts)?,
        Sector::Z => dualize(measure_x(&code.dual(), &support, opts)?, code),
    };
    art.measured_operator = op.clone();
    art.sign = op.sign().expect("checked Hermitian");
    Ok(art)
}

fn measure_x(
    code: &CssCode,
    support: &[usize],
    opts: &MeasurementOptions,
) -> Result<MeasurementArtifact, SurgeryError> {
    let n = code.n();
    let x = BitVec::from_indices(n, support.iter().copied());
    if support.is_empty() || !code.is_nontrivial_logical(&x, Sector::X) {
        return Err(SurgeryError::NotALogical);
    }
    let rm = restriction_maps(code, support, Sector::X)?;
    let first = expand_graph(rm.f1.clone(), rm.d1.clone(), rm.f0.clone(), opts)?;
    let mut f1 = first.f1;
    let mut d1 = first.d1;
    let mut f0 = first.f0;
    let mut trace = first.trace;
    let mut added = first.added;
    let mut d0 = algorithm2_low_weight_d0(&d1, code.hz(), &f0, opts.samples, opts.seed);
    let threshold = opts.threshold.unwrap_or(max_check_weight(code) + 2);
    let mut branch_taken = false;
    let mut chords = Vec::new();
    let mut feasible = true;
    if d0.max_row_weight() > threshold || opts.force_branch {
        branch_taken = true;
        let he = Hypergraph::new(rm.d1.clone())?.expand_hyperedges(opts.cheeger_cap)?;
        let mut origin = vec![0; he.graph.edge_count()];
        for (e, rows) in he.record.iter().enumerate() {
            for &r in rows {
                origin[r] = e;
            }
        }
        let again = expand_graph(
            rm.f1.clone(),
            he.graph.incidence().clone(),
            rm.f0.select_columns(&origin),
            opts,
        )?;
        f1 = again.f1;
        d1 = again.d1;
        f0 = again.f0;
        trace = again.trace;
        added = again.added;
        d0 = algorithm2_low_weight_d0(&d1, code.hz(), &f0, opts.samples, opts.seed);
        if opts.cellulation {
            let mcw = opts.max_cycle_weight.unwrap_or(threshold);
            let md = opts.max_degree.unwrap_or(threshold.saturating_sub(1));
            let cell = Hypergraph::new(d1.clone())?.cellulate(&d0, mcw, md)?;
            f0 = zero_columns(&f0, cell.chords.len());
            d1 = cell.graph.incidence().clone();
            d0 = cell.cycles;
            chords = cell.chords;
            feasible = cell.feasible;
        }
    }
    let f = ancilla_chain_map(code, &d1, &d0, &f1, &f0)?;
    let counts = logical_gauge_counts(code, &f)?;
    let merged = chain_to_css(&mapping_cone(&f), 1);
    let mut row_tags = vec![RowTag::OriginalX; code.hx().rows()];
    row_tags.extend(std::iter::repeat_n(RowTag::NewX, d1.cols()));
    row_tags.extend(std::iter::repeat_n(RowTag::OriginalZ, code.hz().rows()));
    row_tags.extend(std::iter::repeat_n(RowTag::Cycle, d0.rows()));
    Ok(MeasurementArtifact {
        scheme: Scheme::EdgeExpanded,
        sector: Some(Sector::X),
        original: code.clone(),
        measured_operator: PauliOperator::from_x(x),
        ancilla_count: d1.rows(),
        f1,
        f0,
        d1,
        d0,
        merged: MergedCode::Css(merged),
        row_tags,
        cheeger_trace: trace,
        edges_added: added,
        chords,
        seed: opts.seed,
        samples: opts.samples,
        branch_taken,
        cellulation_feasible: feasible,
        sign: 1,
        counts: Some(counts),
        not_a_measurement: false,
        advisory: None,
    })
}

/// Turns an artifact built on `original.dual()` into one for `original`.
fn dualize(mut art: MeasurementArtifact, original: &CssCode) -> MeasurementArtifact {
    let MergedCode::Css(dual_merged) = &art.merged else {
        return art;
    };
    let hx_rows = dual_merged.hx().rows();
    let (xs, zs) = art.row_tags.split_at(hx_rows);
    art.row_tags = zs
        .iter()
        .chain(xs)
        .map(|t| t.dualized())
        .collect();
    art.merged = MergedCode::Css(dual_merged.dual());
    art.original = original.clone();
    art.sector = art.sector.map(Sector::other);
    let m = &art.measured_operator;
    art.measured_operator = PauliOperator {
        x: m.z.clone(),
        z: m.x.clone(),
        phase: m.phase,
    };
    art
}

/// Joint measurement of a logical with both X and Z parts.
///
/// The merged code lives on `[original | X-graph edges | Z-graph edges]`.
/// Operators with an empty part are passed to [`algorithm3_measure`].
pub fn mixed_measure(
    code: &CssCode,
    op: &PauliOperator,
    opts: &MeasurementOptions,
) -> Result<MeasurementArtifact, SurgeryError> {
    let n = code.n();
    if op.n() != n {
        return Err(SurgeryError::BadSupport { n });
    }
    if op.sign().is_none() {
        return Err(SurgeryError::NotHermitian);
    }
    if op.x.is_zero() || op.z.is_zero() {
        return algorithm3_measure(code, op, opts);
    }
    let in_kernel = code.is_operator(&op.x, Sector::X) && code.is_operator(&op.z, Sector::Z);
    let trivial = code.hx().row_space_contains(&op.x)? && code.hz().row_space_contains(&op.z)?;
    if !in_kernel || trivial {
        return Err(SurgeryError::NotALogical);
    }
    let sx = op.x.support();
    let sz = op.z.support();
    let rx = restriction_maps(code, &sx, Sector::X)?;
    let rz = restriction_maps(&code.dual(), &sz, Sector::X)?;
    let gx = expand_graph(rx.f1, rx.d1, rx.f0, opts)?;
    let gz = expand_graph(rz.f1, rz.d1, rz.f0, opts)?;
    let (ex, ez) = (gx.d1.rows(), gz.d1.rows());
    let (wx, wz) = (sx.len(), sz.len());

    // pairs (X vertex, Z vertex) to merge
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, q) in sx.iter().enumerate() {
        if let Ok(j) = sz.binary_search(q) {
            pairs.push((i, j));
        }
    }
    if pairs.is_empty() {
        let dx = gx.d1.col_weights();
        let dz = gz.d1.col_weights();
        let i = (0..wx).min_by_key(|&i| (dx[i], i)).expect("nonempty support");
        let j = (0..wz).min_by_key(|&j| (dz[j], j)).expect("nonempty support");
        pairs.push((i, j));
    }
    let mut x_index = vec![usize::MAX; wx];
    let mut z_index = vec![usize::MAX; wz];
    let merged_x: Vec<bool> = {
        let mut m = vec![false; wx];
        for &(i, _) in &pairs {
            m[i] = true;
        }
        m
    };
    let merged_z: Vec<bool> = {
        let mut m = vec![false; wz];
        for &(_, j) in &pairs {
            m[j] = true;
        }
        m
    };
    let mut next = 0;
    for i in (0..wx).filter(|&i| !merged_x[i]) {
        x_index[i] = next;
        next += 1;
    }
    for &(i, j) in &pairs {
        x_index[i] = next;
        z_index[j] = next;
        next += 1;
    }
    for j in (0..wz).filter(|&j| !merged_z[j]) {
        z_index[j] = next;
        next += 1;
    }
    let vcount = next;
    let mut d1 = BitMatrix::zeros(ex + ez, vcount);
    for e in 0..ex {
        for v in gx.d1.row_ones(e) {
            d1.set(e, x_index[v], true);
        }
    }
    for e in 0..ez {
        for v in gz.d1.row_ones(e) {
            d1.set(ex + e, z_index[v], true);
        }
    }
    let vx = code.hz().left_nullspace().mul(&gx.f0);
    let vz = code.hx().left_nullspace().mul(&gz.f0);
    let v = BitMatrix::block_sized(
        &[vec![Some(&vx), None], vec![None, Some(&vz)]],
        &[vx.rows(), vz.rows()],
        &[ex, ez],
    );
    let d0 = low_weight_complement(&d1, &v, opts.samples, opts.seed);
    let d0x = d0.column_range(0, ex);
    let d0z = d0.column_range(ex, ex + ez);

    let total = n + ex + ez;
    let mut gens: Vec<PauliOperator> = Vec::new();
    let mut tags: Vec<RowTag> = Vec::new();
    let pauli = |x: BitVec, z: BitVec| PauliOperator { x, z, phase: 0 };
    let zeros = BitVec::zeros;
    // X checks with X-part [H_X, 0, f0_Z]
    for r in 0..code.hx().rows() {
        let x = code.hx().row(r).concat(&zeros(ex)).concat(&gz.f0.row(r));
        gens.push(pauli(x, zeros(total)));
        tags.push(RowTag::OriginalX);
    }
    let x_vertex = |i: usize| {
        let x = gx.f1.column(i).concat(&gx.d1.column(i)).concat(&zeros(ez));
        pauli(x, zeros(total))
    };
    let z_vertex = |j: usize| {
        let z = gz.f1.column(j).concat(&zeros(ex)).concat(&gz.d1.column(j));
        pauli(zeros(total), z)
    };
    let mut vertex_gens = Vec::new();
    for i in (0..wx).filter(|&i| !merged_x[i]) {
        vertex_gens.push((x_vertex(i), RowTag::NewX));
    }
    for &(i, j) in &pairs {
        let g = x_vertex(i).mul(&z_vertex(j));
        // drop the phase to obtain the Hermitian generator with sign +1
        vertex_gens.push((pauli(g.x, g.z), RowTag::NewY));
    }
    let mut z_vertices = Vec::new();
    for j in (0..wz).filter(|&j| !merged_z[j]) {
        z_vertices.push((z_vertex(j), RowTag::NewZ));
    }
    let mut product = PauliOperator::identity(total);
    for (g, _) in vertex_gens.iter().chain(&z_vertices) {
        product = product.mul(g);
    }
    let target = PauliOperator {
        x: op.x.concat(&zeros(ex + ez)),
        z: op.z.concat(&zeros(ex + ez)),
        phase: op.phase,
    };
    if product.x != target.x || product.z != target.z {
        return Err(SurgeryError::StructuralMismatch(
            "vertex checks do not multiply to the operator".into(),
        ));
    }
    let rel = (i64::from(product.phase) - i64::from(target.phase)).rem_euclid(4);
    let sign = match rel {
        0 => 1,
        2 => -1,
        _ => return Err(SurgeryError::NotHermitian),
    };
    for (g, t) in vertex_gens {
        gens.push(g);
        tags.push(t);
    }
    for r in 0..code.hz().rows() {
        let z = code.hz().row(r).concat(&gx.f0.row(r)).concat(&zeros(ez));
        gens.push(pauli(zeros(total), z));
        tags.push(RowTag::OriginalZ);
    }
    for (g, t) in z_vertices {
        gens.push(g);
        tags.push(t);
    }
    for r in 0..d0.rows() {
        let x = zeros(n + ex).concat(&d0z.row(r));
        let z = zeros(n).concat(&d0x.row(r)).concat(&zeros(ez));
        gens.push(pauli(x, z));
        tags.push(RowTag::Cycle);
    }
    let merged = SymplecticCode::from_generators(&gens)?;

    let mut f1 = BitMatrix::zeros(n, vcount);
    for (i, &q) in sx.iter().enumerate() {
        f1.set(q, x_index[i], true);
    }
    for (j, &q) in sz.iter().enumerate() {
        f1.set(q, z_index[j], true);
    }
    let f0 = BitMatrix::block_sized(
        &[vec![Some(&gx.f0), None], vec![None, Some(&gz.f0)]],
        &[gx.f0.rows(), gz.f0.rows()],
        &[ex, ez],
    );
    let mut trace = gx.trace;
    trace.extend(gz.trace);
    let mut added = gx.added;
    added.extend(gz.added.iter().map(|&(a, b)| (a + wx, b + wx)));
    Ok(MeasurementArtifact {
        scheme: Scheme::Mixed,
        sector: None,
        original: code.clone(),
        measured_operator: op.clone(),
        f1,
        f0,
        ancilla_count: ex + ez,
        d1,
        d0,
        merged: MergedCode::Symplectic(merged),
        row_tags: tags,
        cheeger_trace: trace,
        edges_added: added,
        chords: Vec::new(),
        seed: opts.seed,
        samples: opts.samples,
        branch_taken: false,
        cellulation_feasible: true,
        sign,
        counts: None,
        not_a_measurement: false,
        advisory: None,
    })
}

/// Measures commuting pure logicals one after another. Each operator is
/// first extended over the ancillas of earlier steps so that it commutes
/// with every check of the current merged code.
pub fn parallel_measure(
    code: &CssCode,
    ops: &[PauliOperator],
    opts: &MeasurementOptions,
) -> Result<ParallelArtifact, SurgeryError> {
    for (i, a) in ops.iter().enumerate() {
        if a.n() != code.n() {
            return Err(SurgeryError::BadSupport { n: code.n() });
        }
        a.sector().ok_or(SurgeryError::NotPure)?;
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            if !symplectic_commutes(a, b)? {
                return Err(SurgeryError::NonCommuting(i, j));
            }
        }
    }
    let mut current = code.clone();
    let mut steps = Vec::new();
    let mut extended = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        let sector = op.sector().expect("checked pure");
        let ext = extend_operator(&current, op.part(sector), sector)
            .ok_or(SurgeryError::ExtensionInconsistent(i))?;
        let ext_op = PauliOperator::pure(sector, current.n(), &ext.support());
        let art = algorithm3_measure(&current, &ext_op, opts)?;
        current = art.merged.as_css().expect("single-sector artifacts are CSS").clone();
        extended.push(ext_op);
        steps.push(art);
    }
    Ok(ParallelArtifact {
        original: code.clone(),
        merged: current,
        steps,
        extended,
    })
}

/// Pads `v` (defined on the leading qubits) with ancilla bits so that it
/// commutes with the opposing checks of `code`.
fn extend_operator(code: &CssCode, v: &BitVec, sector: Sector) -> Option<BitVec> {
    let n0 = v.len();
    let n = code.n();
    if n0 == n {
        return Some(v.clone());
    }
    let h = code.checks(sector.other());
    let old = h.column_range(0, n0);
    let new = h.column_range(n0, n);
    let rhs = old.mul_vec(v);
    let y = new.solve(&rhs).ok()??;
    Some(v.concat(&y))
}

/// Lattice surgery of two codes along ordered logical supports of equal
/// length `d`: a path of `d − 1` ancillas joining `q1_j` and `q2_j`.
pub fn scheme_lattice_surgery(
    code1: &CssCode,
    code2: &CssCode,
    x1: &[usize],
    x2: &[usize],
) -> Result<MeasurementArtifact, SurgeryError> {
    let d = x1.len();
    if d != x2.len() || d < 2 {
        return Err(SurgeryError::StructuralMismatch(format!(
            "supports of lengths {} and {} cannot be joined",
            x1.len(),
            x2.len()
        )));
    }
    for (c, s) in [(code1, x1), (code2, x2)] {
        let v = BitVec::from_indices(c.n(), s.iter().copied().filter(|&q| q < c.n()));
        if s.iter().any(|&q| q >= c.n()) || v.weight() != d || !c.is_nontrivial_logical(&v, Sector::X) {
            return Err(SurgeryError::NotALogical);
        }
    }
    let code = code1.direct_sum(code2);
    let n1 = code1.n();
    let q2: Vec<usize> = x2.iter().map(|&q| q + n1).collect();
    let hz = code.hz();
    let mut f1 = BitMatrix::zeros(code.n(), d);
    for j in 0..d {
        f1.set(x1[j], j, true);
        f1.set(q2[j], j, true);
    }
    let d1 = codelib::repetition(d).expect("d >= 2");
    let mut f0 = BitMatrix::zeros(hz.rows(), d - 1);
    for i in 0..hz.rows() {
        for j in 0..d - 1 {
            let adj = |q: &[usize]| hz.get(i, q[j]) && hz.get(i, q[j + 1]);
            if adj(x1) || adj(&q2) {
                f0.set(i, j, true);
            }
        }
    }
    if f0.mul(&d1) != hz.mul(&f1) {
        return Err(SurgeryError::StructuralMismatch(
            "restricted checks do not follow the repetition pattern".into(),
        ));
    }
    let d0 = BitMatrix::zeros(0, d - 1);
    let mut support: Vec<usize> = x1.iter().copied().chain(q2.iter().copied()).collect();
    support.sort_unstable();
    let op = PauliOperator::pure(Sector::X, code.n(), &support);
    cone_artifact(Scheme::LatticeSurgery, &code, op, f1, f0, d1, d0)
}

fn cone_artifact(
    scheme: Scheme,
    code: &CssCode,
    op: PauliOperator,
    f1: BitMatrix,
    f0: BitMatrix,
    d1: BitMatrix,
    d0: BitMatrix,
) -> Result<MeasurementArtifact, SurgeryError> {
    let f = ancilla_chain_map(code, &d1, &d0, &f1, &f0)?;
    let counts = logical_gauge_counts(code, &f)?;
    let merged = chain_to_css(&mapping_cone(&f), 1);
    let mut row_tags = vec![RowTag::OriginalX; code.hx().rows()];
    row_tags.extend(std::iter::repeat_n(RowTag::NewX, d1.cols()));
    row_tags.extend(std::iter::repeat_n(RowTag::OriginalZ, code.hz().rows()));
    row_tags.extend(std::iter::repeat_n(RowTag::Cycle, d0.rows()));
    Ok(MeasurementArtifact {
        scheme,
        sector: Some(Sector::X),
        original: code.clone(),
        measured_operator: op,
        ancilla_count: d1.rows(),
        f1,
        f0,
        d1,
        d0,
        merged: MergedCode::Css(merged),
        row_tags,
        cheeger_trace: Vec::new(),
        edges_added: Vec::new(),
        chords: Vec::new(),
        seed: 0,
        samples: 0,
        branch_taken: false,
        cellulation_feasible: true,
        sign: 1,
        counts: Some(counts),
        not_a_measurement: false,
        advisory: None,
    })
}

/// Generalized lattice surgery: the ancilla complex is the product of the
/// restricted graph with an `r`-vertex path, attached along the first copy.
/// With `r = 1` this is the bare restriction cone.
pub fn scheme_generalized_lattice_surgery(
    code: &CssCode,
    op: &PauliOperator,
    r: usize,
) -> Result<MeasurementArtifact, SurgeryError> {
    if r == 0 {
        return Err(SurgeryError::ZeroLayers);
    }
    let (sector, support) = pure_support(op)?;
    match sector {
        Sector::X => gls_x(code, &support, r),
        Sector::Z => Ok(dualize(gls_x(&code.dual(), &support, r)?, code)),
    }
}

fn gls_x(code: &CssCode, support: &[usize], r: usize) -> Result<MeasurementArtifact, SurgeryError> {
    let n = code.n();
    let x = BitVec::from_indices(n, support.iter().copied());
    if support.is_empty() || !code.is_nontrivial_logical(&x, Sector::X) {
        return Err(SurgeryError::NotALogical);
    }
    let rm = restriction_maps(code, support, Sector::X)?;
    let w = support.len();
    let nz = rm.d1.rows();
    let hr = if r >= 2 {
        codelib::repetition(r).expect("r >= 2")
    } else {
        BitMatrix::zeros(0, 1)
    };
    let d1 = BitMatrix::kron(&BitMatrix::identity(r), &rm.d1)
        .vstack(&BitMatrix::kron(&hr, &BitMatrix::identity(w)));
    let d0 = BitMatrix::kron(&hr, &BitMatrix::identity(nz))
        .hstack(&BitMatrix::kron(&BitMatrix::identity(r - 1), &rm.d1));
    let f1 = rm.f1.hstack(&BitMatrix::zeros(n, (r - 1) * w));
    let f0 = zero_columns(&rm.f0, d1.rows() - nz);
    let op = PauliOperator::from_x(x);
    cone_artifact(Scheme::GeneralizedLatticeSurgery { r }, code, op, f1, f0, d1, d0)
}

/// Choice of the top map `∂2 : A_2 → A_1` of the cylinder construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylinderTop {
    Zero,
    AllOnes,
}

/// Cylinder code of the restriction maps with `∂2 = 0`. The target logical
/// is not in the X row space, so the artifact is flagged as not a
/// measurement.
pub fn scheme_cylinder(code: &CssCode, op: &PauliOperator) -> Result<MeasurementArtifact, SurgeryError> {
    scheme_cylinder_with(code, op, CylinderTop::Zero)
}

/// Cylinder code with a chosen `∂2`. The all-ones choice adds an X check of
/// the same weight as the logical and is rejected.
pub fn scheme_cylinder_with(
    code: &CssCode,
    op: &PauliOperator,
    top: CylinderTop,
) -> Result<MeasurementArtifact, SurgeryError> {
    let (sector, support) = pure_support(op)?;
    if sector != Sector::X {
        let art = scheme_cylinder_with(&code.dual(), &dual_operator(op), top)?;
        return Ok(dualize(art, code));
    }
    let x = op.x.clone();
    if support.is_empty() || !code.is_nontrivial_logical(&x, Sector::X) {
        return Err(SurgeryError::NotALogical);
    }
    let rm = restriction_maps(code, &support, Sector::X)?;
    let w = support.len();
    if top == CylinderTop::AllOnes {
        return Err(SurgeryError::CylinderRejected(format!(
            "the all-ones top map adds an X check of weight {w}, the weight of the logical"
        )));
    }
    let e = rm.d1.rows();
    let d0 = BitMatrix::zeros(0, e);
    let a = ChainComplex::with_dims(-1, vec![0, e, w], vec![d0.clone(), rm.d1.clone()])?;
    let c = crate::homology::css_to_chain(code)?;
    let f = ChainMap::new(a, c, 0, vec![rm.f0.clone(), rm.f1.clone()])?;
    let merged = chain_to_css(&mapping_cylinder(&f), 1);
    let target = x.concat(&BitVec::zeros(e + w));
    let in_rowspace = merged.hx().row_space_contains(&target)?;
    let mut row_tags = vec![RowTag::OriginalX; code.hx().rows()];
    row_tags.extend(std::iter::repeat_n(RowTag::NewX, w));
    row_tags.extend(std::iter::repeat_n(RowTag::OriginalZ, code.hz().rows()));
    row_tags.extend(std::iter::repeat_n(RowTag::Cycle, e));
    let advisory = (!in_rowspace).then(|| {
        "cylinder code does not contain the target logical in its X row space".to_string()
    });
    Ok(MeasurementArtifact {
        scheme: Scheme::Cylinder,
        sector: Some(Sector::X),
        original: code.clone(),
        measured_operator: op.clone(),
        ancilla_count: e + w,
        f1: rm.f1,
        f0: rm.f0,
        d1: rm.d1,
        d0,
        merged: MergedCode::Css(merged),
        row_tags,
        cheeger_trace: Vec::new(),
        edges_added: Vec::new(),
        chords: Vec::new(),
        seed: 0,
        samples: 0,
        branch_taken: false,
        cellulation_feasible: true,
        sign: 1,
        counts: None,
        not_a_measurement: !in_rowspace,
        advisory,
    })
}

fn dual_operator(op: &PauliOperator) -> PauliOperator {
    PauliOperator {
        x: op.z.clone(),
        z: op.x.clone(),
        phase: op.phase,
    }
}
