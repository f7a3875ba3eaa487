//! Command-line definitions and command implementations.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hommeas::css::CssError;
use hommeas::hypergraph::HypergraphError;
use hommeas::protocol::{run_protocol, ProtocolError};
use hommeas::surgery::{
    algorithm3_measure, mixed_measure, scheme_cylinder, scheme_generalized_lattice_surgery,
    MeasurementArtifact, MeasurementOptions, MergedCode, RowTag, SurgeryError,
};
use hommeas::{CssCode, PauliOperator, Sector};
use serde::Serialize;
use thiserror::Error;

use crate::io::{self, ParseError};
use crate::report::{
    sector_distance, summarize_css, summarize_symplectic, AgrestiReport, CodeSummary, CompareReport, Counts,
    DistanceSettings, MeasureReport, ProtocolRun,
};
use crate::stats::{agresti_coull, StatsError, DEFAULT_KAPPA};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status: 2 for malformed input, 3 when the operator is not
    /// a logical, 4 when a search cap is exceeded, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Stats(_) => 2,
            CliError::Surgery(SurgeryError::NotALogical | SurgeryError::NotInKernel) => 3,
            CliError::Surgery(SurgeryError::Hypergraph(HypergraphError::TooManyVertices { .. }))
            | CliError::Surgery(SurgeryError::Css(CssError::CapExceeded { .. })) => 4,
            _ => 1,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Parser)]
#[command(name = "hommeas", version, about = "Homological measurement of logical Pauli operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the ancilla system and merged code measuring an operator.
    Measure(MeasureArgs),
    /// Compare ancilla counts of lattice surgery and edge-expanded measurement.
    Compare(CompareArgs),
    /// Agresti–Coull estimate of a failure rate.
    Agresti(AgrestiArgs),
    /// Write a builtin code to files.
    Export(ExportArgs),
    /// Print the shipped logical operator of a benchmark code.
    Logical { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Plain,
    Alist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Plain,
    Alist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Eehm,
    Gls,
    Cylinder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    X,
    Z,
    Auto,
}

/// Where the input code comes from; exactly one source must be given.
#[derive(Debug, Args)]
pub struct CodeArgs {
    /// JSON code file with `hx` and `hz` rows.
    #[arg(long, conflicts_with_all = ["hx", "builtin"])]
    pub code: Option<PathBuf>,
    /// X check matrix file (with --hz).
    #[arg(long, requires = "hz", conflicts_with = "builtin")]
    pub hx: Option<PathBuf>,
    /// Z check matrix file (with --hx).
    #[arg(long, requires = "hx")]
    pub hz: Option<PathBuf>,
    /// Format of --hx/--hz files.
    #[arg(long, value_enum, default_value = "plain")]
    pub format: MatrixFormat,
    /// Shipped code: steane, hamming15, surface:D, toric:D, surface-pair:D, lp1, lp2, hgp1, hgp2.
    #[arg(long)]
    pub builtin: Option<String>,
}

impl CodeArgs {
    pub fn load(&self) -> Result<CssCode, CliError> {
        if let Some(path) = &self.code {
            return Ok(io::parse_code_json(&read_file(path)?)?);
        }
        if let (Some(hx), Some(hz)) = (&self.hx, &self.hz) {
            let parse = |p: &Path| -> Result<_, CliError> {
                let src = read_file(p)?;
                let name = p.display().to_string();
                Ok(match self.format {
                    MatrixFormat::Plain => io::parse_plain(&name, &src)?,
                    MatrixFormat::Alist => io::parse_alist(&name, &src)?,
                })
            };
            return Ok(io::code_from_matrices(parse(hx)?, parse(hz)?)?);
        }
        if let Some(name) = &self.builtin {
            return Ok(io::builtin_code(name)?);
        }
        Err(ParseError("no code given; use --code, --hx/--hz or --builtin".into()).into())
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for distance searches.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Random samples for the low-weight cycle search.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Largest vertex count for exhaustive Cheeger constants.
    #[arg(long, default_value_t = 24)]
    pub cheeger_cap: usize,
    /// Largest kernel dimension for exhaustive distance search.
    #[arg(long, default_value_t = 26)]
    pub distance_cap: usize,
    /// Random trials per sector when the distance search is capped.
    #[arg(long, default_value_t = 1000)]
    pub distance_trials: usize,
    /// Skip cellulation of long cycles.
    #[arg(long)]
    pub no_cellulation: bool,
    /// Cycle weight bound for cellulation.
    #[arg(long)]
    pub max_cycle_weight: Option<usize>,
    /// Vertex degree bound for cellulation.
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    pub fn options(&self) -> MeasurementOptions {
        MeasurementOptions {
            seed: self.seed,
            samples: self.samples,
            cheeger_cap: self.cheeger_cap,
            cellulation: !self.no_cellulation,
            max_cycle_weight: self.max_cycle_weight,
            max_degree: self.max_degree,
            ..MeasurementOptions::default()
        }
    }

    pub fn distance(&self) -> DistanceSettings {
        DistanceSettings {
            cap: self.distance_cap,
            trials: self.distance_trials,
            seed: self.seed,
            workers: self.workers,
        }
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Operator such as "X1 X2 X3" (1-based qubit indices).
    pub operator: String,
    /// Ancilla construction scheme.
    #[arg(long, value_enum, default_value = "eehm")]
    pub scheme: SchemeArg,
    /// Required sector of the operator; auto accepts any.
    #[arg(long, value_enum, default_value = "auto")]
    pub sector: SectorArg,
    /// Layers for generalized lattice surgery; defaults to the operator weight.
    #[arg(long)]
    pub r: Option<usize>,
    /// Simulate the measurement protocol with this many rounds for both eigenvalues.
    #[arg(long, default_value_t = 0)]
    pub rounds: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    pub operator: String,
    /// Layer count for the reduced lattice surgery column.
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct AgrestiArgs {
    #[arg(long)]
    pub n_fail: u64,
    #[arg(long)]
    pub n_tot: u64,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: f64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Builtin code name.
    pub builtin: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ExportFormat,
    /// Output file for JSON, or prefix for `<prefix>.hx` and `<prefix>.hz`.
    #[arg(long)]
    pub output: PathBuf,
}

fn emit<T: Serialize>(report: &T, output: Option<&Path>) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    match output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Runs a parsed command and returns what should go to standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Agresti(a) => {
            let (p_fail, half_width) = agresti_coull(a.n_fail, a.n_tot, a.kappa)?;
            emit(
                &AgrestiReport {
                    n_fail: a.n_fail,
                    n_tot: a.n_tot,
                    kappa: a.kappa,
                    p_fail,
                    half_width,
                },
                None,
            )
        }
        Command::Export(a) => cmd_export(a),
        Command::Logical { name } => {
            let b = io::benchmark(name)?;
            let op = PauliOperator::from_x(b.logical());
            Ok(io::format_operator(&op) + "\n")
        }
    }
}

fn check_sector(op: &PauliOperator, sector: SectorArg) -> Result<(), CliError> {
    let want = match sector {
        SectorArg::Auto => return Ok(()),
        SectorArg::X => Sector::X,
        SectorArg::Z => Sector::Z,
    };
    if op.sector() == Some(want) {
        Ok(())
    } else {
        Err(ParseError(format!("--sector {} needs a pure {want} operator", want.to_string().to_lowercase())).into())
    }
}

fn tag_name(tag: RowTag) -> &'static str {
    match tag {
        RowTag::OriginalX => "original_x",
        RowTag::OriginalZ => "original_z",
        RowTag::NewX => "new_x",
        RowTag::NewZ => "new_z",
        RowTag::NewY => "new_y",
        RowTag::Cycle => "cycle",
    }
}

fn summarize_merged(merged: &MergedCode, s: &DistanceSettings) -> CodeSummary {
    match merged {
        MergedCode::Css(c) => summarize_css(c, s),
        MergedCode::Symplectic(c) => summarize_symplectic(c, s),
    }
}

fn cmd_measure(a: &MeasureArgs) -> Result<String, CliError> {
    let code = a.code.load()?;
    let op = io::parse_operator(&a.operator, code.n())?;
    check_sector(&op, a.sector)?;
    let opts = a.run.options();
    let art: MeasurementArtifact = match (a.scheme, op.sector()) {
        (SchemeArg::Eehm, Some(_)) => algorithm3_measure(&code, &op, &opts)?,
        (SchemeArg::Eehm, None) => mixed_measure(&code, &op, &opts)?,
        (SchemeArg::Gls, _) => {
            scheme_generalized_lattice_surgery(&code, &op, a.r.unwrap_or(op.weight()))?
        }
        (SchemeArg::Cylinder, _) => scheme_cylinder(&code, &op)?,
    };
    let mut protocol = Vec::new();
    if a.rounds > 0 {
        for prepared in [1, -1] {
            let rep = run_protocol(&art, prepared, a.rounds, a.run.seed)?;
            protocol.push(ProtocolRun {
                prepared,
                inferred: rep.inferred,
                final_group_matches: rep.final_group_matches,
                rounds: rep.rounds,
            });
        }
    }
    let ds = a.run.distance();
    let report = MeasureReport {
        scheme: format!("{:?}", art.scheme),
        operator: io::format_operator(&op),
        sector: art.sector.map_or("mixed".into(), |s| s.to_string()),
        input: summarize_css(&code, &ds),
        merged: summarize_merged(&art.merged, &ds),
        n_anc: art.ancilla_count,
        counts: art.counts.as_ref().map(|c| Counts { k: c.k, r: c.r }),
        cheeger_trace: art.cheeger_trace.iter().map(|r| r.to_string()).collect(),
        edges_added: art.edges_added.iter().map(|&(u, v)| [u, v]).collect(),
        chords: art.chords.iter().map(|&(u, v)| [u, v]).collect(),
        branch_taken: art.branch_taken,
        cellulation_feasible: art.cellulation_feasible,
        sign: art.sign,
        not_a_measurement: art.not_a_measurement,
        advisory: art.advisory.clone(),
        seed: a.run.seed,
        samples: a.run.samples,
        workers: a.run.workers,
        row_provenance: art.row_tags.iter().map(|&t| tag_name(t)).collect(),
        protocol,
    };
    emit(&report, a.run.output.as_deref())
}

fn cmd_compare(a: &CompareArgs) -> Result<String, CliError> {
    let code = a.code.load()?;
    let op = io::parse_operator(&a.operator, code.n())?;
    let sector = op.sector().ok_or(SurgeryError::NotPure)?;
    let (dist, _) = sector_distance(&code, sector, &a.run.distance());
    let d = dist.finite().ok_or(SurgeryError::NotALogical)?;
    let gls = scheme_generalized_lattice_surgery(&code, &op, d)?.ancilla_count;
    let gls_r = match a.r {
        Some(r) => Some(scheme_generalized_lattice_surgery(&code, &op, r)?.ancilla_count),
        None => None,
    };
    let eehm = algorithm3_measure(&code, &op, &a.run.options())?.ancilla_count;
    let report = CompareReport {
        operator: io::format_operator(&op),
        d,
        gls,
        r: a.r,
        gls_r,
        eehm,
        seed: a.run.seed,
        workers: a.run.workers,
    };
    emit(&report, a.run.output.as_deref())
}

fn cmd_export(a: &ExportArgs) -> Result<String, CliError> {
    let code = io::builtin_code(&a.builtin)?;
    let with_ext = |ext: &str| {
        let mut s = a.output.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    match a.format {
        ExportFormat::Json => write_file(&a.output, &io::code_to_json(&code))?,
        ExportFormat::Plain => {
            write_file(&with_ext(".hx"), &io::write_plain(code.hx()))?;
            write_file(&with_ext(".hz"), &io::write_plain(code.hz()))?;
        }
        ExportFormat::Alist => {
            write_file(&with_ext(".hx"), &io::write_alist(code.hx()))?;
            write_file(&with_ext(".hz"), &io::write_alist(code.hz()))?;
        }
    }
    Ok(String::new())
}
