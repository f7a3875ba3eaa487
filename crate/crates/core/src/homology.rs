//! Chain complexes over F2, chain maps, mapping cones and cylinders.
//!
//! Grades are explicit integers. A complex stores the dimension of every
//! grade in an inclusive range `[lo, hi]`; grades outside that range have
//! dimension zero and every boundary map touching them is the zero map.
//! `∂_i` maps grade `i` to grade `i - 1` and is stored as a
//! `dim C_{i-1} × dim C_i` matrix acting on column vectors.

use thiserror::Error;

use crate::css::CssCode;
use crate::f2la::BitMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary maps do not compose to zero at grade {grade}")]
    NotAComplex { grade: i32 },
    #[error("boundary map at grade {grade} has shape {found:?}, expected {expected:?}")]
    BadShape {
        grade: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("chain map does not commute with boundaries at grade {grade}")]
    NotAChainMap { grade: i32 },
    #[error("check matrices do not commute (H_Z · H_X^T != 0)")]
    NonCommuting,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
}

/// A bounded chain complex of F2 vector spaces.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    lo: i32,
    dims: Vec<usize>,
    /// `maps[j]` is `∂_{lo + j + 1}`.
    maps: Vec<BitMatrix>,
}

impl ChainComplex {
    /// The complex with all spaces zero.
    pub fn zero() -> Self {
        Self {
            lo: 0,
            dims: vec![0],
            maps: Vec::new(),
        }
    }

    /// Builds a complex whose lowest grade is `lo`. `boundaries[j]` is
    /// `∂_{lo + j + 1}`, so a complex with `m` boundary maps spans `m + 1` grades.
    /// Dimensions are read from the matrix shapes.
    pub fn new(lo: i32, boundaries: Vec<BitMatrix>) -> Result<Self, HomologyError> {
        if boundaries.is_empty() {
            return Err(HomologyError::InvalidConfiguration(
                "use with_dims for a single-grade complex".into(),
            ));
        }
        let mut dims = vec![boundaries[0].rows()];
        for b in &boundaries {
            dims.push(b.cols());
        }
        Self::with_dims(lo, dims, boundaries)
    }

    /// Builds a complex from explicit grade dimensions and boundary maps.
    pub fn with_dims(
        lo: i32,
        dims: Vec<usize>,
        boundaries: Vec<BitMatrix>,
    ) -> Result<Self, HomologyError> {
        if dims.len() != boundaries.len() + 1 {
            return Err(HomologyError::InvalidConfiguration(format!(
                "{} grades need {} boundary maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (j, b) in boundaries.iter().enumerate() {
            let expected = (dims[j], dims[j + 1]);
            if b.shape() != expected {
                return Err(HomologyError::BadShape {
                    grade: lo + j as i32 + 1,
                    expected,
                    found: b.shape(),
                });
            }
        }
        let c = Self {
            lo,
            dims,
            maps: boundaries,
        };
        for i in c.lo + 1..c.hi() {
            if !c.boundary(i).mul(&c.boundary(i + 1)).is_zero() {
                return Err(HomologyError::NotAComplex { grade: i });
            }
        }
        Ok(c)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, i: i32) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    /// `∂_i : C_i → C_{i-1}`; the zero matrix of the right shape outside the range.
    pub fn boundary(&self, i: i32) -> BitMatrix {
        if i <= self.lo || i > self.hi() {
            BitMatrix::zeros(self.dim(i - 1), self.dim(i))
        } else {
            self.maps[(i - self.lo - 1) as usize].clone()
        }
    }

    /// `∂_{i} ∘ ∂_{i+1} = 0` at every grade.
    pub fn is_complex(&self) -> bool {
        (self.lo..=self.hi() + 1).all(|i| self.boundary(i).mul(&self.boundary(i + 1)).is_zero())
    }

    /// `dim H_i = dim ker ∂_i − rank ∂_{i+1}`.
    pub fn homology_dim(&self, i: i32) -> usize {
        let d = self.boundary(i);
        let ker = self.dim(i) - d.rank();
        ker - self.boundary(i + 1).rank()
    }

    /// Alternating sum `Σ (-1)^i dim C_i` over the stored range.
    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| {
                let d = self.dim(i) as i64;
                if i.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// True when every grade has zero homology.
    pub fn is_exact(&self) -> bool {
        (self.lo..=self.hi()).all(|i| self.homology_dim(i) == 0)
    }

    /// Compares two complexes grade by grade over the union of their ranges,
    /// treating absent grades as zero.
    pub fn block_identical(&self, other: &ChainComplex) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi + 1).all(|i| self.dim(i) == other.dim(i) && self.boundary(i) == other.boundary(i))
    }

    /// Builds a complex over `[lo, hi]` from a closure giving `∂_i`.
    fn from_fn(
        lo: i32,
        hi: i32,
        dim: impl Fn(i32) -> usize,
        boundary: impl Fn(i32) -> BitMatrix,
    ) -> Self {
        let dims = (lo..=hi).map(&dim).collect();
        let maps = (lo + 1..=hi).map(boundary).collect();
        Self { lo, dims, maps }
    }
}

/// A chain map `f : A → C` with components `f_i : A_i → C_i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    lo: i32,
    /// `comps[j]` is `f_{lo + j}`.
    comps: Vec<BitMatrix>,
}

impl ChainMap {
    /// Builds and validates a chain map. `components[j]` is `f_{lo + j}`;
    /// components outside the given range are zero.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        lo: i32,
        components: Vec<BitMatrix>,
    ) -> Result<Self, HomologyError> {
        for (j, f) in components.iter().enumerate() {
            let i = lo + j as i32;
            let expected = (target.dim(i), source.dim(i));
            if f.shape() != expected {
                return Err(HomologyError::BadShape {
                    grade: i,
                    expected,
                    found: f.shape(),
                });
            }
        }
        let m = Self {
            source,
            target,
            lo,
            comps: components,
        };
        let glo = m.source.lo().min(m.target.lo()).min(lo);
        let ghi = m
            .source
            .hi()
            .max(m.target.hi())
            .max(lo + m.comps.len() as i32);
        for i in glo..=ghi + 1 {
            let left = m.target.boundary(i).mul(&m.component(i));
            let right = m.component(i - 1).mul(&m.source.boundary(i));
            if left != right {
                return Err(HomologyError::NotAChainMap { grade: i });
            }
        }
        Ok(m)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// `f_i`, zero outside the stored range.
    pub fn component(&self, i: i32) -> BitMatrix {
        let j = i - self.lo;
        if j >= 0 && (j as usize) < self.comps.len() {
            self.comps[j as usize].clone()
        } else {
            BitMatrix::zeros(self.target.dim(i), self.source.dim(i))
        }
    }
}

/// The mapping cone: grade `i` is `C_i ⊕ A_{i-1}` with boundary
/// `[[∂C_i, f_{i-1}], [0, ∂A_{i-1}]]`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let a = f.source();
    let c = f.target();
    let lo = c.lo().min(a.lo() + 1);
    let hi = c.hi().max(a.hi() + 1);
    ChainComplex::from_fn(
        lo,
        hi,
        |i| c.dim(i) + a.dim(i - 1),
        |i| {
            let dc = c.boundary(i);
            let fi = f.component(i - 1);
            let da = a.boundary(i - 1);
            BitMatrix::block_sized(
                &[vec![Some(&dc), Some(&fi)], vec![None, Some(&da)]],
                &[c.dim(i - 1), a.dim(i - 2)],
                &[c.dim(i), a.dim(i - 1)],
            )
        },
    )
}

/// The mapping cylinder: grade `i` is `C_i ⊕ A_{i-1} ⊕ A_i` with boundary
/// `[[∂C_i, f_{i-1}, 0], [0, ∂A_{i-1}, 0], [0, I, ∂A_i]]`.
pub fn mapping_cylinder(f: &ChainMap) -> ChainComplex {
    let a = f.source();
    let c = f.target();
    let lo = c.lo().min(a.lo());
    let hi = c.hi().max(a.hi() + 1);
    ChainComplex::from_fn(
        lo,
        hi,
        |i| c.dim(i) + a.dim(i - 1) + a.dim(i),
        |i| {
            let dc = c.boundary(i);
            let fi = f.component(i - 1);
            let da_prev = a.boundary(i - 1);
            let da = a.boundary(i);
            let id = BitMatrix::identity(a.dim(i - 1));
            BitMatrix::block_sized(
                &[
                    vec![Some(&dc), Some(&fi), None],
                    vec![None, Some(&da_prev), None],
                    vec![None, Some(&id), Some(&da)],
                ],
                &[c.dim(i - 1), a.dim(i - 2), a.dim(i - 1)],
                &[c.dim(i), a.dim(i - 1), a.dim(i)],
            )
        },
    )
}

/// The auxiliary complex `B_i = A_i ⊕ A_{i+1}` with boundary
/// `[[∂A_i, 0], [I, ∂A_{i+1}]]` and the map `g_i = (f_i 0) : B_i → C_i`,
/// for which `cyl(f) = cone(g)`.
pub fn cylinder_auxiliary(f: &ChainMap) -> Result<ChainMap, HomologyError> {
    let a = f.source();
    let c = f.target();
    let lo = a.lo() - 1;
    let hi = a.hi();
    let b = ChainComplex::from_fn(
        lo,
        hi,
        |i| a.dim(i) + a.dim(i + 1),
        |i| {
            let da = a.boundary(i);
            let da_next = a.boundary(i + 1);
            let id = BitMatrix::identity(a.dim(i));
            BitMatrix::block_sized(
                &[vec![Some(&da), None], vec![Some(&id), Some(&da_next)]],
                &[a.dim(i - 1), a.dim(i)],
                &[a.dim(i), a.dim(i + 1)],
            )
        },
    );
    let glo = lo.min(c.lo());
    let ghi = hi.max(c.hi());
    let comps = (glo..=ghi)
        .map(|i| {
            let fi = f.component(i);
            BitMatrix::block_sized(&[vec![Some(&fi), None]], &[c.dim(i)], &[a.dim(i), a.dim(i + 1)])
        })
        .collect();
    ChainMap::new(b, c.clone(), glo, comps)
}

/// The 3-term complex `C_2 →(H_X^T) C_1 →(H_Z) C_0` of a CSS code.
pub fn css_to_chain(code: &CssCode) -> Result<ChainComplex, HomologyError> {
    if !code.hz().mul(&code.hx().transpose()).is_zero() {
        return Err(HomologyError::NonCommuting);
    }
    ChainComplex::with_dims(
        0,
        vec![code.hz().rows(), code.n(), code.hx().rows()],
        vec![code.hz().clone(), code.hx().transpose()],
    )
}

/// Reads a CSS code off two consecutive boundary maps around `qubit_grade`:
/// `H_X^T = ∂_{q+1}` and `H_Z = ∂_q`.
pub fn chain_to_css(chain: &ChainComplex, qubit_grade: i32) -> CssCode {
    let hx = chain.boundary(qubit_grade + 1).transpose();
    let hz = chain.boundary(qubit_grade);
    CssCode::new(hx, hz).expect("boundary maps of a complex always commute")
}

/// The ancilla complex `A_1 →(∂1) A_0 →(∂0) A_{-1}` together with the chain
/// map into the code complex given by `f1 : A_1 → C_1` and `f0 : A_0 → C_0`.
pub fn ancilla_chain_map(
    code: &CssCode,
    d1: &BitMatrix,
    d0: &BitMatrix,
    f1: &BitMatrix,
    f0: &BitMatrix,
) -> Result<ChainMap, HomologyError> {
    let c = css_to_chain(code)?;
    let a = ChainComplex::with_dims(
        -1,
        vec![d0.rows(), d1.rows(), d1.cols()],
        vec![d0.clone(), d1.clone()],
    )?;
    ChainMap::new(a, c, 0, vec![f0.clone(), f1.clone()])
}

/// Raw quantities entering the logical and gauge counts of a cone code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeCounts {
    /// Number of logical qubits of the cone code.
    pub k: usize,
    /// Number of gauge qubits of the cone code.
    pub r: usize,
    /// `dim ker ∂1`.
    pub ker_d1: usize,
    /// `dim(ker ∂0 / im ∂1)`, the logical count of the ancilla complex.
    pub ancilla_homology: usize,
    /// `dim ker ∂0^T`, redundancy among the ancilla cycle checks.
    pub ker_d0t: usize,
}

/// Logical and gauge counts `(k̃, r̃)` of the cone code built from `f`.
///
/// `k̃ = k + (dim ker H̃_X^T − dim ker H_X^T) − dim ker ∂1` and
/// `r̃ = dim(ker ∂0 / im ∂1) + (dim ker H̃_Z^T − dim ker ∂0^T) − dim ker H_Z^T`.
pub fn logical_gauge_counts(code: &CssCode, f: &ChainMap) -> Result<ConeCounts, HomologyError> {
    let c = css_to_chain(code)?;
    if c.dim(0) != f.target().dim(0) || c.dim(1) != f.target().dim(1) {
        return Err(HomologyError::InvalidConfiguration(
            "chain map does not target the code complex".into(),
        ));
    }
    let a = f.source();
    let cone = mapping_cone(f);
    let merged = chain_to_css(&cone, 1);
    let left_kernel = |m: &BitMatrix| m.rows() - m.rank();
    let d1 = a.boundary(1);
    let d0 = a.boundary(0);
    let ker_d1 = d1.cols() - d1.rank();
    let ker_d0t = left_kernel(&d0);
    let ancilla_homology = a.homology_dim(0);
    let k = code.k() as i64;
    let kt = k + left_kernel(merged.hx()) as i64 - left_kernel(code.hx()) as i64 - ker_d1 as i64;
    let rt = ancilla_homology as i64 + left_kernel(merged.hz()) as i64
        - ker_d0t as i64
        - left_kernel(code.hz()) as i64;
    if kt < 0 || rt < 0 {
        return Err(HomologyError::InvalidConfiguration(format!(
            "negative count (k={kt}, r={rt})"
        )));
    }
    Ok(ConeCounts {
        k: kt as usize,
        r: rt as usize,
        ker_d1,
        ancilla_homology,
        ker_d0t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steane() -> CssCode {
        let h = BitMatrix::from_bitstrings(&["0001111", "0110011", "1010101"]);
        CssCode::new(h.clone(), h).unwrap()
    }

    #[test]
    fn steane_chain_round_trip() {
        let code = steane();
        let c = css_to_chain(&code).unwrap();
        assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (3, 7, 3));
        assert_eq!(c.homology_dim(1), 1);
        assert_eq!(chain_to_css(&c, 1), code);
    }

    #[test]
    fn empty_code_chain() {
        let code = CssCode::new(BitMatrix::zeros(0, 5), BitMatrix::zeros(0, 5)).unwrap();
        let c = css_to_chain(&code).unwrap();
        assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (0, 5, 0));
        assert_eq!(c.homology_dim(1), 5);
    }

    #[test]
    fn classical_chain_as_css() {
        let h = BitMatrix::from_bitstrings(&["110", "011"]);
        let c = ChainComplex::new(0, vec![h.clone()]).unwrap();
        let code = chain_to_css(&c, 1);
        assert_eq!(code.hx().rows(), 0);
        assert_eq!(code.hz(), &h);
    }

    #[test]
    fn non_commuting_rejected() {
        let hx = BitMatrix::from_bitstrings(&["10"]);
        let hz = BitMatrix::from_bitstrings(&["11"]);
        assert!(CssCode::new(hx, hz).is_err());
    }

    #[test]
    fn cone_over_zero_complex_is_target() {
        let code = steane();
        let c = css_to_chain(&code).unwrap();
        let f = ChainMap::new(ChainComplex::zero(), c.clone(), 0, vec![]).unwrap();
        assert!(mapping_cone(&f).block_identical(&c));
        assert!(mapping_cylinder(&f).block_identical(&c));
    }

    #[test]
    fn invalid_chain_map_rejected() {
        let code = steane();
        let c = css_to_chain(&code).unwrap();
        let a = ChainComplex::with_dims(0, vec![0, 1], vec![BitMatrix::zeros(0, 1)]).unwrap();
        // qubit 0 alone is not in ker H_Z, so f0 ∂1 = H_Z f1 fails
        let mut f1 = BitMatrix::zeros(7, 1);
        f1.set(0, 0, true);
        let err = ChainMap::new(a, c, 0, vec![BitMatrix::zeros(3, 0), f1]).unwrap_err();
        assert!(matches!(err, HomologyError::NotAChainMap { .. }));
    }

    #[test]
    fn exact_sequence_homology_vanishes() {
        let id = BitMatrix::identity(3);
        let c = ChainComplex::new(0, vec![id]).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.euler_characteristic(), 0);
    }
}
