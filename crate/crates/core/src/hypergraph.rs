//! Hypergraphs stored as edge–vertex incidence matrices, Cheeger constants,
//! greedy edge expansion, hyperedge splitting, cycle bases and cellulation.

use num_rational::Ratio;
use thiserror::Error;

use crate::f2la::{BitMatrix, BitVec};

/// Default vertex cap for exhaustive Cheeger enumeration.
pub const DEFAULT_CHEEGER_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("{count} vertices exceed the exhaustive Cheeger cap of {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("Cheeger constant needs at least two vertices")]
    TooFewVertices,
    #[error("hyperedge {edge} has odd weight {weight}")]
    OddHyperedge { edge: usize, weight: usize },
    #[error("cycle matrix has {found} columns, graph has {expected} edges")]
    CycleShape { expected: usize, found: usize },
}

/// A hypergraph whose incidence matrix has one row per edge and one column
/// per vertex. Repeated edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    incidence: BitMatrix,
}

/// Outcome of greedy edge expansion.
#[derive(Clone, Debug)]
pub struct EdgeExpansion {
    pub graph: Hypergraph,
    /// Added edges in insertion order; each is appended as a new last row.
    pub added: Vec<(usize, usize)>,
    /// Cheeger constant before expansion and after every added edge.
    pub trace: Vec<Ratio<usize>>,
}

/// Outcome of replacing hyperedges by perfect matchings.
#[derive(Clone, Debug)]
pub struct HyperedgeExpansion {
    pub graph: Hypergraph,
    /// `record[e]` lists the rows of the new incidence matrix that replace edge `e`.
    pub record: Vec<Vec<usize>>,
}

/// Outcome of cellulation.
#[derive(Clone, Debug)]
pub struct Cellulation {
    pub graph: Hypergraph,
    pub cycles: BitMatrix,
    /// Chords in insertion order; each is appended as a new last row.
    pub chords: Vec<(usize, usize)>,
    /// False when some cycle above the weight bound could not be split.
    pub feasible: bool,
}

impl Hypergraph {
    pub fn new(incidence: BitMatrix) -> Result<Self, HypergraphError> {
        if let Some(e) = (0..incidence.rows()).find(|&e| incidence.is_row_zero(e)) {
            return Err(HypergraphError::EmptyEdge(e));
        }
        Ok(Self { incidence })
    }

    /// Builds from explicit edge vertex lists.
    pub fn from_edges(vertices: usize, edges: &[Vec<usize>]) -> Result<Self, HypergraphError> {
        let mut m = BitMatrix::zeros(edges.len(), vertices);
        for (e, vs) in edges.iter().enumerate() {
            for &v in vs {
                if v >= vertices {
                    return Err(HypergraphError::VertexOutOfRange {
                        vertex: v,
                        count: vertices,
                    });
                }
                m.toggle(e, v);
            }
        }
        Self::new(m)
    }

    /// The cycle graph on `n` vertices with edges `(i, i + 1 mod n)`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn incidence(&self) -> &BitMatrix {
        &self.incidence
    }

    pub fn vertex_count(&self) -> usize {
        self.incidence.cols()
    }

    pub fn edge_count(&self) -> usize {
        self.incidence.rows()
    }

    pub fn edge(&self, e: usize) -> Vec<usize> {
        self.incidence.row_ones(e).collect()
    }

    /// Number of edges containing each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.col_weights()
    }

    pub fn is_graph(&self) -> bool {
        (0..self.edge_count()).all(|e| self.incidence.row_weight(e) == 2)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        (0..self.edge_count()).any(|e| {
            self.incidence.row_weight(e) == 2 && self.incidence.get(e, a) && self.incidence.get(e, b)
        })
    }

    /// Hop distances from `source`, with `usize::MAX` for unreachable vertices.
    /// A hyperedge joins every pair of its vertices.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for e in (0..self.edge_count()).filter(|&e| self.incidence.get(e, v)) {
                for u in self.incidence.row_ones(e) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        dist
    }

    /// The graph with the edge `{a, b}` appended.
    pub fn with_edge(&self, a: usize, b: usize) -> Hypergraph {
        let mut row = BitVec::zeros(self.vertex_count());
        row.set(a, true);
        row.set(b, true);
        let mut m = self.incidence.clone();
        m.push_row(&row);
        Hypergraph { incidence: m }
    }

    /// Edges meeting `s` in an odd number of vertices.
    pub fn boundary(&self, s: &[usize]) -> Result<Vec<usize>, HypergraphError> {
        let n = self.vertex_count();
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(HypergraphError::VertexOutOfRange { vertex: v, count: n });
        }
        let ind = BitVec::from_indices(n, s.iter().copied());
        Ok(self.incidence.mul_vec(&ind).support())
    }

    /// Exact Cheeger constant by exhaustive enumeration.
    pub fn cheeger(&self, cap: usize) -> Result<Ratio<usize>, HypergraphError> {
        self.sparsest_cut(cap).map(|(_, h)| h)
    }

    /// A subset attaining the Cheeger minimum. Among optimal subsets the
    /// lexicographically smallest sorted index list is returned.
    pub fn sparsest_cut(&self, cap: usize) -> Result<(Vec<usize>, Ratio<usize>), HypergraphError> {
        let n = self.vertex_count();
        if n < 2 {
            return Err(HypergraphError::TooFewVertices);
        }
        if n > cap || n > 31 {
            return Err(HypergraphError::TooManyVertices { count: n, cap });
        }
        let t = self.incidence.transpose();
        let ew = self.edge_count().div_ceil(64).max(1);
        let mut cols = vec![0u64; n * ew];
        for v in 0..n {
            for e in t.row_ones(v) {
                cols[v * ew + e / 64] |= 1 << (e % 64);
            }
        }
        let half = n / 2;
        let mut parity = vec![0u64; ew];
        let mut mask = 0u32;
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 1u32..(1u32 << n) {
            let b = i.trailing_zeros() as usize;
            mask ^= 1 << b;
            for (p, c) in parity.iter_mut().zip(&cols[b * ew..(b + 1) * ew]) {
                *p ^= *c;
            }
            let size = mask.count_ones() as usize;
            if size > half {
                continue;
            }
            let cut: usize = parity.iter().map(|w| w.count_ones() as usize).sum();
            let better = match best {
                None => true,
                Some((bc, bs, bm)) => {
                    let (l, r) = (cut * bs, bc * size);
                    l < r || (l == r && lex_less(mask, bm))
                }
            };
            if better {
                best = Some((cut, size, mask));
            }
        }
        let (cut, size, mask) = best.expect("n >= 2 gives a nonempty candidate");
        let set = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        Ok((set, Ratio::new(cut, size)))
    }

    /// Greedily adds weight-2 edges across sparsest cuts until the Cheeger
    /// constant reaches 1. Every pair of minimum-degree vertices on the two
    /// sides of the cut is tried and the pair giving the largest resulting
    /// constant wins. Ties go to the pair farthest apart in the current
    /// graph, then to the earlier pair.
    pub fn expand_edges(&self, cap: usize) -> Result<EdgeExpansion, HypergraphError> {
        let one = Ratio::from_integer(1);
        let mut g = self.clone();
        let mut added = Vec::new();
        let (mut cut, mut h) = g.sparsest_cut(cap)?;
        let mut trace = vec![h];
        while h < one {
            let deg = g.degrees();
            let inside: Vec<bool> = {
                let mut v = vec![false; g.vertex_count()];
                for &s in &cut {
                    v[s] = true;
                }
                v
            };
            let min_deg = |want: bool| {
                (0..g.vertex_count())
                    .filter(|&v| inside[v] == want)
                    .map(|v| deg[v])
                    .min()
                    .expect("both sides nonempty")
            };
            let (din, dout) = (min_deg(true), min_deg(false));
            // (v1, v2, resulting constant, distance, new sparsest cut)
            type Best = (usize, usize, Ratio<usize>, usize, Vec<usize>);
            let mut best: Option<Best> = None;
            for v1 in (0..g.vertex_count()).filter(|&v| inside[v] && deg[v] == din) {
                let dist = g.distances_from(v1);
                for v2 in (0..g.vertex_count()).filter(|&v| !inside[v] && deg[v] == dout) {
                    let (c, h2) = g.with_edge(v1, v2).sparsest_cut(cap)?;
                    if best.as_ref().is_none_or(|b| (h2, dist[v2]) > (b.2, b.3)) {
                        best = Some((v1, v2, h2, dist[v2], c));
                    }
                }
            }
            let (v1, v2, h2, _, c2) = best.expect("at least one candidate pair");
            g = g.with_edge(v1, v2);
            added.push((v1.min(v2), v1.max(v2)));
            trace.push(h2);
            h = h2;
            cut = c2;
        }
        Ok(EdgeExpansion {
            graph: g,
            added,
            trace,
        })
    }

    /// Replaces every edge of weight above two by a perfect matching of its
    /// vertices, in place. Edges are processed in order; for each one every
    /// perfect matching is scored by the Cheeger constant of the resulting
    /// hypergraph and the first maximiser is kept.
    pub fn expand_hyperedges(&self, cap: usize) -> Result<HyperedgeExpansion, HypergraphError> {
        for e in 0..self.edge_count() {
            let w = self.incidence.row_weight(e);
            if w % 2 == 1 {
                return Err(HypergraphError::OddHyperedge { edge: e, weight: w });
            }
        }
        let n = self.vertex_count();
        let mut rows: Vec<Vec<Vec<usize>>> = (0..self.edge_count()).map(|e| vec![self.edge(e)]).collect();
        let flatten = |rows: &[Vec<Vec<usize>>]| {
            let all: Vec<Vec<usize>> = rows.iter().flatten().cloned().collect();
            Hypergraph::from_edges(n, &all).expect("valid edges")
        };
        for e in 0..rows.len() {
            let vs = rows[e][0].clone();
            if vs.len() <= 2 {
                continue;
            }
            let mut best: Option<(Ratio<usize>, Vec<Vec<usize>>)> = None;
            for m in perfect_matchings(&vs) {
                rows[e] = m.clone();
                let h = flatten(&rows).cheeger(cap)?;
                if best.as_ref().is_none_or(|b| h > b.0) {
                    best = Some((h, m));
                }
            }
            rows[e] = best.expect("even hyperedge has a matching").1;
        }
        let mut record = Vec::with_capacity(rows.len());
        let mut next = 0;
        for r in &rows {
            record.push((next..next + r.len()).collect());
            next += r.len();
        }
        Ok(HyperedgeExpansion {
            graph: flatten(&rows),
            record,
        })
    }

    /// Rows span the cycle space `ker M^T`; `|E| - rank M` rows.
    pub fn cycle_basis(&self) -> BitMatrix {
        self.incidence.transpose().nullspace()
    }

    /// Splits every input cycle row of weight at least `max_cycle_weight`
    /// with chords between cycle vertices, never pushing a vertex degree
    /// above `max_degree`. Chords are added one at a time over all rows: the
    /// one minimising the heavier of its two pieces wins, then the one that
    /// rules out the fewest other candidate chords, then the smaller vertex
    /// pair. Pieces heavier than the bound are split again. Rows that are not simple cycles are
    /// left alone. The result is flagged infeasible when some row stays
    /// heavier than the bound.
    pub fn cellulate(
        &self,
        cycles: &BitMatrix,
        max_cycle_weight: usize,
        max_degree: usize,
    ) -> Result<Cellulation, HypergraphError> {
        if cycles.cols() != self.edge_count() {
            return Err(HypergraphError::CycleShape {
                expected: self.edge_count(),
                found: cycles.cols(),
            });
        }
        let mut g = self.clone();
        let mut rows: Vec<Vec<usize>> = (0..cycles.rows()).map(|r| cycles.row_ones(r).collect()).collect();
        // input rows are split from the bound upwards, pieces only above it
        let mut is_piece = vec![false; rows.len()];
        let mut chords = Vec::new();
        loop {
            let deg = g.degrees();
            // every admissible chord of every row still due for splitting
            let mut candidates = Vec::new();
            let mut orders = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                let limit = if is_piece[i] { max_cycle_weight + 1 } else { max_cycle_weight.max(1) };
                if row.len() < limit {
                    continue;
                }
                let Some(order) = cycle_order(&g, row) else {
                    continue;
                };
                let len = order.len();
                for a in 0..len {
                    for b in a + 2..len {
                        if a == 0 && b == len - 1 {
                            continue;
                        }
                        let (va, vb) = (order[a].0, order[b].0);
                        if deg[va] >= max_degree || deg[vb] >= max_degree || g.has_edge(va, vb) {
                            continue;
                        }
                        // pieces: edges a..b plus chord, and the rest plus chord
                        let piece = (b - a + 1).max(len - (b - a) + 1);
                        candidates.push((piece, (va.min(vb), va.max(vb)), i, orders.len(), a, b));
                    }
                }
                orders.push(order);
            }
            if candidates.is_empty() {
                break;
            }
            let mut touching = vec![0usize; g.vertex_count()];
            for c in &candidates {
                touching[c.1 .0] += 1;
                touching[c.1 .1] += 1;
            }
            let blocked = |v: usize| if deg[v] + 1 >= max_degree { touching[v] - 1 } else { 0 };
            let &(_, (va, vb), i, o, a, b) = candidates
                .iter()
                .min_by_key(|c| (c.0, blocked(c.1 .0) + blocked(c.1 .1), c.1, c.2))
                .expect("nonempty");
            let order = &orders[o];
            let chord = g.edge_count();
            g = g.with_edge(va, vb);
            chords.push((va, vb));
            let mut first: Vec<usize> = order[a..b].iter().map(|p| p.1).collect();
            first.push(chord);
            let mut second: Vec<usize> = order[b..].iter().chain(&order[..a]).map(|p| p.1).collect();
            second.push(chord);
            first.sort_unstable();
            second.sort_unstable();
            rows[i] = first;
            rows.insert(i + 1, second);
            is_piece[i] = true;
            is_piece.insert(i + 1, true);
        }
        let feasible = rows.iter().all(|r| r.len() <= max_cycle_weight);
        let m = g.edge_count();
        let cycles_out = BitMatrix::from_rows(
            &rows
                .iter()
                .map(|r| BitVec::from_indices(m, r.iter().copied()))
                .collect::<Vec<_>>(),
            m,
        );
        Ok(Cellulation {
            graph: g,
            cycles: cycles_out,
            chords,
            feasible,
        })
    }
}

/// `a` precedes `b` as sorted index lists.
fn lex_less(a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    let p = (a ^ b).trailing_zeros();
    let above = |m: u32| m.checked_shr(p + 1).unwrap_or(0) != 0;
    if a >> p & 1 == 1 {
        above(b)
    } else {
        !above(a)
    }
}

/// All perfect matchings of `vs`, pairing the first vertex with each later
/// one in turn and recursing.
fn perfect_matchings(vs: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if vs.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for j in 1..vs.len() {
        let rest: Vec<usize> = vs[1..]
            .iter()
            .enumerate()
            .filter(|(i, _)| *i + 1 != j)
            .map(|(_, &v)| v)
            .collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, vec![vs[0], vs[j]]);
            out.push(m);
        }
    }
    out
}

/// Walks a simple cycle given by its edge set. Returns `(vertex, edge to next
/// vertex)` pairs starting from the smallest vertex, or `None` when the edges
/// do not form one simple cycle of weight-2 edges.
fn cycle_order(g: &Hypergraph, edges: &[usize]) -> Option<Vec<(usize, usize)>> {
    if edges.len() < 3 {
        return None;
    }
    let mut adj: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for &e in edges {
        let vs = g.edge(e);
        if vs.len() != 2 {
            return None;
        }
        adj.entry(vs[0]).or_default().push((vs[1], e));
        adj.entry(vs[1]).or_default().push((vs[0], e));
    }
    if adj.values().any(|n| n.len() != 2) || adj.len() != edges.len() {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut order = Vec::with_capacity(edges.len());
    let (mut cur, mut prev_edge) = (start, usize::MAX);
    loop {
        let &(next, e) = adj[&cur].iter().find(|(_, e)| *e != prev_edge)?;
        order.push((cur, e));
        prev_edge = e;
        cur = next;
        if cur == start {
            break;
        }
        if order.len() > edges.len() {
            return None;
        }
    }
    (order.len() == edges.len()).then_some(order)
}
