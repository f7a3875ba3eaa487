//! Serializable reports with key names following the benchmark tables.

use hommeas::css::{distance_upper_bound, exact_distance, CssError, DistanceOptions, WeightProfile};
use hommeas::{BitMatrix, CssCode, Distance, Sector, SymplecticCode};
use serde::Serialize;

/// Settings for distance estimates in reports.
#[derive(Clone, Copy, Debug)]
pub struct DistanceSettings {
    /// Largest kernel dimension searched exhaustively.
    pub cap: usize,
    /// Randomized trials per sector when exhaustive search is out of reach.
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Averages {
    #[serde(rename = "q_X")]
    pub q_x: Option<f64>,
    #[serde(rename = "w_X")]
    pub w_x: Option<f64>,
    #[serde(rename = "q_Z")]
    pub q_z: Option<f64>,
    #[serde(rename = "w_Z")]
    pub w_z: Option<f64>,
    pub q: f64,
    pub w: f64,
}

/// Parameters and weight profile of a code. Sector fields are absent for
/// codes that are not CSS.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    /// Smallest logical weight found; `None` when there are no logicals.
    pub d_upper: Option<usize>,
    /// True when `d_upper` came from exhaustive search and is exact.
    pub d_exact: bool,
    #[serde(rename = "q_X")]
    pub q_x: Option<usize>,
    #[serde(rename = "w_X")]
    pub w_x: Option<usize>,
    #[serde(rename = "q_Z")]
    pub q_z: Option<usize>,
    #[serde(rename = "w_Z")]
    pub w_z: Option<usize>,
    pub q: usize,
    pub w: usize,
    pub averages: Averages,
}

/// Minimum weight of a nontrivial logical in one sector, and whether the
/// search was exhaustive.
pub fn sector_distance(code: &CssCode, sector: Sector, s: &DistanceSettings) -> (Distance, bool) {
    let opts = DistanceOptions {
        cap: s.cap,
        workers: s.workers,
        ..DistanceOptions::default()
    };
    match exact_distance(code, sector, None, &opts) {
        Ok(res) => (res.distance, true),
        Err(CssError::CapExceeded { .. }) => {
            (distance_upper_bound(code, sector, s.trials, s.seed, s.workers).0, false)
        }
        Err(e) => panic!("distance search on a valid code failed: {e}"),
    }
}

pub fn summarize_css(code: &CssCode, s: &DistanceSettings) -> CodeSummary {
    let p: WeightProfile = code.weight_profile();
    let (dx, ex) = sector_distance(code, Sector::X, s);
    let (dz, ez) = sector_distance(code, Sector::Z, s);
    CodeSummary {
        n: code.n(),
        k: code.k(),
        d_upper: dx.min(dz).finite(),
        d_exact: ex && ez,
        q_x: Some(p.q_x),
        w_x: Some(p.w_x),
        q_z: Some(p.q_z),
        w_z: Some(p.w_z),
        q: p.q,
        w: p.w,
        averages: Averages {
            q_x: Some(p.q_x_avg),
            w_x: Some(p.w_x_avg),
            q_z: Some(p.q_z_avg),
            w_z: Some(p.w_z_avg),
            q: p.q_avg,
            w: p.w_avg,
        },
    }
}

pub fn summarize_symplectic(code: &SymplecticCode, s: &DistanceSettings) -> CodeSummary {
    let n = code.n();
    let stab = code.stab();
    let support = stab.column_range(0, n);
    let z = stab.column_range(n, 2 * n);
    let rows: Vec<_> = (0..stab.rows())
        .map(|r| support.row(r).or(&z.row(r)))
        .collect();
    let m = BitMatrix::from_rows(&rows, n);
    let opts = DistanceOptions {
        cap: s.cap,
        workers: s.workers,
        ..DistanceOptions::default()
    };
    let (d_upper, d_exact) = match code.exact_distance(&opts) {
        Ok(res) => (res.distance.finite(), true),
        Err(_) => (None, false),
    };
    let ones = m.count_ones() as f64;
    CodeSummary {
        n,
        k: code.k(),
        d_upper,
        d_exact,
        q_x: None,
        w_x: None,
        q_z: None,
        w_z: None,
        q: m.col_weights().into_iter().max().unwrap_or(0),
        w: m.max_row_weight(),
        averages: Averages {
            q_x: None,
            w_x: None,
            q_z: None,
            w_z: None,
            q: if n == 0 { 0.0 } else { ones / n as f64 },
            w: if m.rows() == 0 { 0.0 } else { ones / m.rows() as f64 },
        },
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counts {
    pub k: usize,
    pub r: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProtocolRun {
    pub prepared: i8,
    pub inferred: i8,
    pub final_group_matches: bool,
    /// Syndrome of every merged check in each round.
    pub rounds: Vec<Vec<i8>>,
}

/// Output of `measure`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MeasureReport {
    pub scheme: String,
    pub operator: String,
    pub sector: String,
    pub input: CodeSummary,
    pub merged: CodeSummary,
    pub n_anc: usize,
    pub counts: Option<Counts>,
    /// Cheeger constants as `p/q` strings, before and after each added edge.
    pub cheeger_trace: Vec<String>,
    /// Added edges as pairs of 0-based ancilla-graph vertices.
    pub edges_added: Vec<[usize; 2]>,
    pub chords: Vec<[usize; 2]>,
    pub branch_taken: bool,
    pub cellulation_feasible: bool,
    pub sign: i8,
    pub not_a_measurement: bool,
    pub advisory: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub workers: usize,
    pub row_provenance: Vec<&'static str>,
    pub protocol: Vec<ProtocolRun>,
}

/// Output of `compare`: ancilla counts per scheme.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CompareReport {
    pub operator: String,
    /// Code distance in the operator's sector.
    pub d: usize,
    /// Generalized lattice surgery with `r = d`.
    pub gls: usize,
    /// The `r` supplied on the command line, if any.
    pub r: Option<usize>,
    /// Generalized lattice surgery with the supplied `r`; `None` when unavailable.
    pub gls_r: Option<usize>,
    pub eehm: usize,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AgrestiReport {
    pub n_fail: u64,
    pub n_tot: u64,
    pub kappa: f64,
    pub p_fail: f64,
    pub half_width: f64,
}
