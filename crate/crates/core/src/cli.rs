//! Command-line front end: reads a generator file, runs one analysis and
//! prints a line-oriented or JSON report.
//!
//! # Input format
//!
//! A TOML document with an optional `[params]` table and one `[[generator]]`
//! table per matrix:
//!
//! ```toml
//! [params]
//! length = 12      # word length L, 1..=20
//! horizon = 200    # power horizon N, 10..=10000
//! samples = 10     # random positive vectors per local-radius check
//! seed = 0
//! tol_dup = 1e-9   # ray deduplication distance
//! tol_spec = 1e-6  # relative tolerance of spectral identities
//!
//! [[generator]]
//! name = "A"
//! rows = [[1, 1], [0, 1]]
//!
//! [[generator]]
//! name = "B"
//! rows = [["1/3", 0.5], [0, 1e-3]]
//! ```
//!
//! Entries are numbers or strings holding a fraction `p/q`. Command-line flags
//! override `[params]`.
//!
//! Order continuity, bands and band irreducibility need no separate treatment:
//! in `R^n` every positive operator is order continuous and every band is a
//! coordinate ideal, so band irreducibility is ideal irreducibility and the
//! commuting-pair and compact-operator statements reduce to the checks of the
//! `pair` and `verify` commands.
//!
//! # Exit codes
//!
//! `0` all checks pass (or the command is descriptive), `1` a check failed,
//! `2` the input or the parameters are invalid (including a `pair` input that does not
//! commute or has no irreducible member), `3` a check was inconclusive
//! and a larger `L` or `N` may resolve it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::irreducibility::{self, Crosscheck};
use crate::lattice::{disjoint, Matrix, Tolerances};
use crate::linalg;
use crate::semigroup::{self, generate_ball_with, normalize, BallConfig, ProjectionRecord, SemigroupApprox};
use crate::structure::{
    self, analyze_commuting_pair, analyze_single, block_decomposition, common_eigenvector, group_law,
    permutation_structure, verify_structure_theorems, CheckStatus, Diagnosis, PairConfig, VerifyConfig,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const LENGTH_RANGE: (usize, usize) = (1, 20);
const HORIZON_RANGE: (usize, usize) = (10, 10_000);
const LOCAL_DELTA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "psg",
    version,
    about = "Structure of irreducible semigroups of nonnegative matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Frobenius distance under which two unit rays are identified.
    #[arg(long, global = true)]
    pub tol_dup: Option<f64>,
    /// Relative tolerance of spectral identities.
    #[arg(long, global = true)]
    pub tol_spec: Option<f64>,
    /// Seed for the sampled positive vectors.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide ideal irreducibility with a path certificate or an invariant ideal.
    Irreducible { file: PathBuf },
    /// Cyclic structure of a single irreducible matrix.
    Pf {
        file: PathBuf,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Word ball, minimal rank, minimal projections and right ideals.
    Semigroup {
        file: PathBuf,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Common eigenvector and local spectral radii of a commuting pair `S`, `K`.
    Pair {
        file: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Full battery of structure checks on the word ball.
    Verify {
        file: PathBuf,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Irreducible { .. } => "irreducible",
            Command::Pf { .. } => "pf",
            Command::Semigroup { .. } => "semigroup",
            Command::Pair { .. } => "pair",
            Command::Verify { .. } => "verify",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::Irreducible { file }
            | Command::Pf { file, .. }
            | Command::Semigroup { file, .. }
            | Command::Pair { file, .. }
            | Command::Verify { file, .. } => file,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_dup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_spec: Option<f64>,
}

impl Params {
    fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    pub names: Vec<String>,
    pub generators: Vec<Matrix>,
    pub params: Params,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    params: Option<Params>,
    #[serde(default)]
    generator: Vec<RawGenerator>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: Option<String>,
    rows: Vec<Vec<Entry>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Text(String),
}

fn parse_entry(e: &Entry) -> std::result::Result<f64, String> {
    match e {
        Entry::Number(v) => Ok(*v),
        Entry::Text(s) => {
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("cannot read {s:?} as a number"))
            };
            match s.split_once('/') {
                Some((p, q)) => {
                    let q = parse(q)?;
                    if q == 0.0 {
                        return Err(format!("zero denominator in {s:?}"));
                    }
                    Ok(parse(p)? / q)
                }
                None => parse(s),
            }
        }
    }
}

pub fn parse_matrix_set(path: &Path) -> Result<MatrixSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_set_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix_set_str(text: &str) -> Result<MatrixSet> {
    let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
    if raw.generator.is_empty() {
        return Err(Error::Parse("no [[generator]] entries".into()));
    }
    let mut names = Vec::with_capacity(raw.generator.len());
    let mut generators = Vec::with_capacity(raw.generator.len());
    for (g, gen) in raw.generator.iter().enumerate() {
        let name = gen.name.clone().unwrap_or_else(|| format!("G{}", g + 1));
        let at = |msg: String| Error::Parse(format!("generator {name:?} (#{}): {msg}", g + 1));
        let n = gen.rows.len();
        if n == 0 {
            return Err(at("no rows".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in gen.rows.iter().enumerate() {
            if row.len() != n {
                return Err(at(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            let values = row
                .iter()
                .enumerate()
                .map(|(j, e)| parse_entry(e).map_err(|m| at(format!("entry ({}, {}): {m}", i + 1, j + 1))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(values);
        }
        let matrix = Matrix::from_rows(&rows).map_err(|e| match e {
            Error::NegativeEntry { row, col, value } => {
                at(format!("negative entry {value} at ({}, {})", row + 1, col + 1))
            }
            Error::NonFinite { row, col } => at(format!("non-finite entry at ({}, {})", row + 1, col + 1)),
            other => at(other.to_string()),
        })?;
        if let Some(first) = generators.first().map(Matrix::dim) {
            if first != n {
                return Err(at(format!("dimension {n}, expected {first}")));
            }
        }
        names.push(name);
        generators.push(matrix);
    }
    Ok(MatrixSet {
        names,
        generators,
        params: raw.params.unwrap_or_default(),
    })
}

/// Serializes a generator set in the input format; numbers use the shortest
/// decimal form that reads back to the same `f64`.
pub fn emit_matrix_set(set: &MatrixSet) -> String {
    let mut out = String::new();
    if !set.params.is_empty() {
        out.push_str("[params]\n");
        out.push_str(&toml::to_string(&set.params).expect("params serialize"));
        out.push('\n');
    }
    for (name, g) in set.names.iter().zip(&set.generators) {
        let rows: Vec<String> = g
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "[[generator]]\nname = {}\nrows = [{}]\n",
            toml::Value::String(name.clone()),
            rows.join(", ")
        );
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub id: String,
    pub name: String,
    pub citation: String,
    pub status: CheckStatus,
    pub evidence: String,
}

impl CheckLine {
    fn new(id: &str, name: &str, citation: &str, pass: bool, evidence: String) -> CheckLine {
        let status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckLine {
            id: id.into(),
            name: name.into(),
            citation: citation.into(),
            status,
            evidence,
        }
    }

    fn with_status(id: &str, name: &str, citation: &str, status: CheckStatus, evidence: String) -> CheckLine {
        CheckLine {
            id: id.into(),
            name: name.into(),
            citation: citation.into(),
            status,
            evidence,
        }
    }

    fn from_error(id: &str, name: &str, citation: &str, e: &Error) -> CheckLine {
        let status = if e.is_inconclusive() || matches!(e, Error::BallExplosion { .. }) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Fail
        };
        CheckLine::with_status(id, name, citation, status, e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub params: Value,
    pub results: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub checks: Vec<CheckLine>,
}

impl Report {
    fn new(command: &str, input: &Path, params: Value) -> Report {
        Report {
            command: command.into(),
            input: input.display().to_string(),
            params,
            results: BTreeMap::new(),
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(
            key.into(),
            serde_json::to_value(value).expect("report values serialize"),
        );
    }

    pub fn status(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Inconclusive) {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            CheckStatus::Fail => EXIT_FAIL,
            CheckStatus::Inconclusive => EXIT_INCONCLUSIVE,
            _ => EXIT_PASS,
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut value = serde_json::to_value(report).expect("report serializes");
            value["status"] = json!(report.status().label());
            let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "command: {}", report.command);
            let _ = writeln!(out, "input: {}", report.input);
            if let Value::Object(params) = &report.params {
                for (k, v) in params {
                    let _ = writeln!(out, "param {k}: {v}");
                }
            }
            for (k, v) in &report.results {
                let _ = writeln!(out, "result {k}: {v}");
            }
            for note in &report.notes {
                let _ = writeln!(out, "note: {note}");
            }
            for c in &report.checks {
                let _ = writeln!(out, "{} [{}] {}: {}", c.status.label(), c.id, c.name, c.evidence);
                let _ = writeln!(out, "    cites: {}", c.citation);
            }
            let _ = writeln!(out, "status: {}", report.status().label());
            out
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(report) => Outcome {
            stdout: emit_report(&report, cli.format),
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_INPUT,
        },
    }
}

/// Parameters after merging flags, file values and defaults.
#[derive(Debug, Clone, Copy, Serialize)]
struct Effective {
    length: usize,
    horizon: usize,
    samples: usize,
    seed: u64,
    tol_dup: f64,
    tol_spec: f64,
}

fn in_range(name: &str, v: usize, (lo, hi): (usize, usize)) -> Result<usize> {
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside [{lo}, {hi}]")))
    }
}

fn positive_tol(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive")))
    }
}

fn resolve(cli: &Cli, set: &MatrixSet, default_length: usize) -> Result<Effective> {
    let p = &set.params;
    let (length, horizon, samples) = match &cli.command {
        Command::Pf { length, .. } | Command::Semigroup { length, .. } => (*length, None, None),
        Command::Pair { horizon, samples, .. } => (None, *horizon, *samples),
        Command::Verify {
            length,
            horizon,
            samples,
            ..
        } => (*length, *horizon, *samples),
        Command::Irreducible { .. } => (None, None, None),
    };
    let defaults = Tolerances::default();
    Ok(Effective {
        length: in_range("length", length.or(p.length).unwrap_or(default_length), LENGTH_RANGE)?,
        horizon: in_range("horizon", horizon.or(p.horizon).unwrap_or(200), HORIZON_RANGE)?,
        samples: samples.or(p.samples).unwrap_or(10),
        seed: cli.seed.or(p.seed).unwrap_or(0),
        tol_dup: positive_tol("tol_dup", cli.tol_dup.or(p.tol_dup).unwrap_or(defaults.dedup))?,
        tol_spec: positive_tol("tol_spec", cli.tol_spec.or(p.tol_spec).unwrap_or(defaults.spectral))?,
    })
}

fn execute(cli: &Cli) -> Result<Report> {
    let path = cli.command.file();
    let set = parse_matrix_set(path)?;
    let n = set.generators[0].dim();
    let default_length = match cli.command {
        Command::Pf { .. } => (2 * n + 2).min(LENGTH_RANGE.1),
        Command::Irreducible { .. } => n.clamp(LENGTH_RANGE.0, LENGTH_RANGE.1),
        _ => 8,
    };
    let eff = resolve(cli, &set, default_length)?;
    let params = match cli.command {
        Command::Irreducible { .. } => json!({ "length": eff.length }),
        Command::Pf { .. } => json!({ "length": eff.length, "tol_spec": eff.tol_spec }),
        Command::Semigroup { .. } => json!({ "length": eff.length, "tol_dup": eff.tol_dup }),
        Command::Pair { .. } => json!({
            "horizon": eff.horizon, "samples": eff.samples, "seed": eff.seed, "tol_spec": eff.tol_spec
        }),
        Command::Verify { .. } => serde_json::to_value(eff).expect("params serialize"),
    };
    let mut report = Report::new(cli.command.name(), path, params);
    report.set("generators", &set.names);
    report.set("dimension", n);
    match cli.command {
        Command::Irreducible { .. } => irreducible_command(&set, &eff, &mut report)?,
        Command::Pf { .. } => pf_command(&set, &eff, &mut report)?,
        Command::Semigroup { .. } => semigroup_command(&set, &eff, &mut report),
        Command::Pair { .. } => pair_command(&set, &eff, &mut report)?,
        Command::Verify { .. } => verify_command(&set, &eff, &mut report),
    }
    Ok(report)
}

fn word_name(names: &[String], word: &[usize]) -> String {
    word.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("·")
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

const CITE_IRREDUCIBLE: &str =
    "a family is ideal irreducible iff its union positivity digraph is strongly connected, iff every orbit of a basis vector generates the whole space";

fn irreducible_command(set: &MatrixSet, eff: &Effective, report: &mut Report) -> Result<()> {
    let gens = &set.generators;
    let n = gens[0].dim();
    let irr = irreducibility::is_ideal_irreducible(gens)?;
    report.set("irreducible", irr.verdict);
    report.set("witness", &irr.witness);
    let certificate: Vec<Value> = irr
        .certificate
        .iter()
        .map(|w| json!({ "from": w.from + 1, "to": w.to + 1, "word": word_name(&set.names, &w.word) }))
        .collect();
    report.set("certificate", certificate);

    if irr.verdict {
        let bad = irr
            .certificate
            .iter()
            .find(|w| irreducibility::evaluate_word(gens, &w.word).get(w.to, w.from) <= 0.0);
        report.checks.push(CheckLine::new(
            "certificate",
            "path certificate",
            CITE_IRREDUCIBLE,
            bad.is_none() && irr.certificate.len() == n * n,
            match bad {
                Some(w) => format!(
                    "word {} has zero entry ({}, {})",
                    word_name(&set.names, &w.word),
                    w.to + 1,
                    w.from + 1
                ),
                None => format!("{} ordered pairs joined by positive words", irr.certificate.len()),
            },
        ));
    } else {
        let witness = irr.witness.clone().expect("reducible family has a witness");
        let offender = gens.iter().position(|g| !witness.is_invariant_under(g));
        report.checks.push(CheckLine::new(
            "witness",
            "invariant ideal",
            CITE_IRREDUCIBLE,
            offender.is_none() && witness.is_proper(n) && !witness.is_empty(),
            match offender {
                Some(g) => format!("ideal {witness} is not invariant under {}", set.names[g]),
                None => format!("ideal {witness} is proper and invariant under every generator"),
            },
        ));
    }

    let cross = irreducibility::crosscheck_characterizations(gens, eff.length)?;
    let (status, evidence) = match cross {
        Crosscheck::Agree { irreducible } => (
            CheckStatus::Pass,
            format!("digraph, orbit and word tests agree: irreducible = {irreducible}"),
        ),
        Crosscheck::Inconclusive { length, pair } => (
            CheckStatus::Inconclusive,
            format!(
                "no word of length <= {length} reaches {} from {}; increase L",
                pair.1 + 1,
                pair.0 + 1
            ),
        ),
        Crosscheck::Disagree(msg) => (CheckStatus::Fail, msg),
    };
    report.checks.push(CheckLine::with_status(
        "characterizations",
        "equivalent characterizations",
        CITE_IRREDUCIBLE,
        status,
        evidence,
    ));
    Ok(())
}

const CITE_SINGLE: &str = "an irreducible T acts on the peripheral range as r(T) times a cyclic permutation of r disjoint positive vectors; r is the period, the minimal rank in R+T and the number of peripheral eigenvalues";

fn pf_command(set: &MatrixSet, eff: &Effective, report: &mut Report) -> Result<()> {
    if set.generators.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "pf expects one generator, found {}",
            set.generators.len()
        )));
    }
    let t = &set.generators[0];
    let rep = match analyze_single(t, eff.length) {
        Ok(rep) => rep,
        Err(e) => {
            report.checks.push(CheckLine::from_error(
                "single",
                "single-operator structure",
                CITE_SINGLE,
                &e,
            ));
            return Ok(());
        }
    };
    report.set("radius", rep.radius);
    report.set("r", rep.r);
    report.set("period", rep.period);
    report.set("minrank", rep.minrank);
    report.set("peripheral_multiplicity", rep.peripheral_multiplicity);
    report.set(
        "sigma_per",
        rep.sigma_per.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    );
    report.set("cycle", rep.cycle.iter().map(|i| i + 1).collect::<Vec<_>>());
    report.set("basis", &rep.basis);
    report.set("asymptotic_rays", rep.asymptotic.iter().map(rows).collect::<Vec<_>>());

    report.checks.push(CheckLine::new(
        "r",
        "three computations of r agree",
        CITE_SINGLE,
        rep.agree,
        format!(
            "period {}, minrank {}, peripheral eigenvalues {}",
            rep.period,
            rep.minrank.map_or("none".into(), |m| m.to_string()),
            rep.peripheral_multiplicity
        ),
    ));
    report.checks.push(CheckLine::new(
        "cycle",
        "T permutes the basis cyclically",
        CITE_SINGLE,
        rep.full_cycle && rep.action_residual <= eff.tol_spec,
        format!(
            "cycle {:?}, full = {}, max relative residual {:.3e}{}",
            rep.cycle.iter().map(|i| i + 1).collect::<Vec<_>>(),
            rep.full_cycle,
            rep.action_residual,
            match rep.subcycle_witness_invariant {
                Some(inv) => format!(", sub-cycle ideal invariant = {inv}"),
                None => String::new(),
            }
        ),
    ));
    let overlap = (0..rep.basis.len())
        .flat_map(|i| (i + 1..rep.basis.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !disjoint(&rep.basis[i], &rep.basis[j], 1e-9).unwrap_or(false));
    report.checks.push(CheckLine::new(
        "disjoint",
        "basis vectors are disjoint",
        CITE_SINGLE,
        overlap.is_none(),
        match overlap {
            Some((i, j)) => format!("x_{} and x_{} overlap", i + 1, j + 1),
            None => format!("{} pairwise disjoint vectors", rep.basis.len()),
        },
    ));
    report.checks.push(CheckLine::new(
        "roots",
        "peripheral spectrum is r(T) times the r-th roots of unity, each simple",
        CITE_SINGLE,
        rep.roots_deviation <= eff.tol_spec && rep.simple,
        format!(
            "max relative deviation {:.3e}, simple = {}",
            rep.roots_deviation, rep.simple
        ),
    ));
    report.checks.push(CheckLine::new(
        "asymptotic",
        "asymptotic rays T_1^k ⊕ 0 lie in the ball",
        "R+T consists of the multiples of the powers of T and the operators T_1^k ⊕ 0",
        rep.asymptotic_in_ball && rep.asymptotic.len() == rep.r,
        format!(
            "{} rays, all present = {}",
            rep.asymptotic.len(),
            rep.asymptotic_in_ball
        ),
    ));
    Ok(())
}

fn build_ball(set: &MatrixSet, eff: &Effective) -> Result<SemigroupApprox> {
    let config = BallConfig {
        tau_dup: eff.tol_dup,
        tolerances: Tolerances {
            dedup: eff.tol_dup,
            spectral: eff.tol_spec,
            ..Tolerances::default()
        },
        ..BallConfig::new(eff.length)
    };
    generate_ball_with(&set.generators, &config)
}

const CITE_PROJECTIONS: &str =
    "an irreducible semigroup of minimal rank r contains rank-r projections, up to positive multiples";
const CITE_RIGHT_IDEALS: &str = "the minimal projections share a range iff every minimal right ideal is two-sided, iff some minimal right ideal is two-sided, iff the minimal right ideal is unique";

/// Ball, projections and the descriptive part shared by `semigroup` and `verify`.
fn describe_ball(
    set: &MatrixSet,
    eff: &Effective,
    report: &mut Report,
) -> Option<(SemigroupApprox, Vec<ProjectionRecord>)> {
    let ball = match build_ball(set, eff) {
        Ok(b) => b,
        Err(e) => {
            report
                .checks
                .push(CheckLine::from_error("ball", "word ball", CITE_PROJECTIONS, &e));
            return None;
        }
    };
    let n = ball.dim();
    let mut profile: BTreeMap<String, usize> = BTreeMap::new();
    for r in &ball.rays {
        *profile.entry(r.rank.to_string()).or_default() += 1;
    }
    report.set("rays", ball.len());
    report.set("word_rays", ball.word_rays().count());
    report.set("rank_profile", &profile);
    report.set("zero_word", ball.zero_word.as_ref().map(|w| word_name(&set.names, w)));
    report.set("minrank", ball.minrank());
    let identity = normalize(&DMatrix::identity(n, n)).expect("identity is nonzero");
    let identity_in_ball = ball.find(&identity, 1e-8).is_some();
    report.set("identity_in_ball", identity_in_ball);

    let mut note = Vec::new();
    if !identity_in_ball {
        note.push("I not in semigroup ball".to_string());
    }
    if let Some(top) = ball
        .rays
        .iter()
        .map(|r| r.rank)
        .max()
        .filter(|&m| Some(m) != ball.minrank())
    {
        let letters: Vec<Option<usize>> = ball
            .rays
            .iter()
            .filter(|r| r.rank == top)
            .map(|r| r.word().filter(|w| w.iter().all(|&g| g == w[0])).map(|w| w[0]))
            .collect();
        if let Some(Some(g)) = letters.first() {
            if letters.iter().all(|l| *l == Some(*g)) {
                note.push(format!("all rank-{top} rays are powers of {}", set.names[*g]));
            }
        }
    }
    if !note.is_empty() {
        report.notes.push(note.join("; "));
    }

    let projections = match semigroup::rank_r_projections(&ball) {
        Ok(p) => p,
        Err(e) => {
            report.checks.push(CheckLine::from_error(
                "projections",
                "minimal projections",
                CITE_PROJECTIONS,
                &e,
            ));
            return None;
        }
    };
    report.set(
        "projections",
        projections
            .iter()
            .map(|p| json!({ "rank": p.rank, "source": p.source.describe(), "matrix": rows(p.as_dmatrix()) }))
            .collect::<Vec<_>>(),
    );
    let worst = projections
        .iter()
        .map(|p| linalg::distance(&(p.as_dmatrix() * p.as_dmatrix()), p.as_dmatrix()))
        .fold(0.0, f64::max);
    let ranks_ok = projections.iter().all(|p| Some(p.rank) == ball.minrank());
    report.checks.push(CheckLine::new(
        "projections",
        "minimal projections",
        CITE_PROJECTIONS,
        !projections.is_empty() && ranks_ok && worst <= 1e-8,
        format!(
            "{} projections of rank {}, max ||P^2 - P|| = {worst:.3e}",
            projections.len(),
            ball.minrank().map_or("none".into(), |m| m.to_string())
        ),
    ));

    match structure::same_range_diagnosis(&ball, &projections) {
        Ok(d) => {
            report.set("same_range_diagnosis", d.diagnosis);
            let angles = d.pairwise_angles.iter().map(|&(_, _, a)| a);
            report.set(
                "max_principal_angle",
                angles
                    .clone()
                    .fold(None, |m: Option<f64>, a| Some(m.map_or(a, |m| m.max(a)))),
            );
            report.set(
                "min_principal_angle",
                angles.fold(None, |m: Option<f64>, a| Some(m.map_or(a, |m| m.min(a)))),
            );
        }
        Err(e) => report.checks.push(CheckLine::from_error(
            "diagnosis",
            "range diagnosis",
            CITE_RIGHT_IDEALS,
            &e,
        )),
    }
    match semigroup::right_ideal_analysis(&ball, &projections) {
        Ok(ri) => {
            report.set(
                "right_ideals",
                json!({
                    "conditions": ri.conditions,
                    "classes": ri.classes.len(),
                    "two_sided": ri.two_sided.iter().filter(|&&b| b).count(),
                    "sizes": ri.sizes,
                }),
            );
            report.checks.push(CheckLine::new(
                "right-ideals",
                "equivalent conditions on minimal right ideals",
                CITE_RIGHT_IDEALS,
                ri.conditions.consistent(),
                format!(
                    "same range {}, all two-sided {}, some two-sided {}, unique {}",
                    ri.conditions.same_range,
                    ri.conditions.all_two_sided,
                    ri.conditions.some_two_sided,
                    ri.conditions.unique_minimal
                ),
            ));
        }
        Err(e) => report.checks.push(CheckLine::from_error(
            "right-ideals",
            "minimal right ideals",
            CITE_RIGHT_IDEALS,
            &e,
        )),
    }
    Some((ball, projections))
}

fn semigroup_command(set: &MatrixSet, eff: &Effective, report: &mut Report) {
    let witness = irreducibility::is_ideal_irreducible(&set.generators)
        .ok()
        .and_then(|r| r.witness);
    describe_ball(set, eff, report);
    if let Some(w) = witness {
        report.notes.push(format!(
            "family is reducible (invariant ideal {w}); structure checks not applicable"
        ));
        for check in &mut report.checks {
            check.status = CheckStatus::NotApplicable;
            check.evidence = format!("requires an irreducible family; recorded: {}", check.evidence);
        }
    }
}

const CITE_PAIR: &str = "commuting S, K with one of them irreducible share a strictly positive eigenvector x0 and eigenfunctional x0*, with K x0 = r(K) x0, and the local spectral radius of K at every x > 0 is r(K)";

fn local_check(id: &str, name: &str, finals: &[f64], seqs: &[Vec<f64>], target: f64, horizon: usize) -> CheckLine {
    let mut worst = 0.0f64;
    let mut status = CheckStatus::Pass;
    for (last, seq) in finals.iter().zip(seqs) {
        let gap = (last - target).abs() / target;
        worst = worst.max(gap);
        if gap > LOCAL_DELTA {
            let tail = (structure::verify::tail_rate(seq) - target).abs() / target;
            status = if tail <= LOCAL_DELTA && status != CheckStatus::Fail {
                CheckStatus::Inconclusive
            } else {
                CheckStatus::Fail
            };
        }
    }
    let mut evidence = format!(
        "max relative gap {worst:.3e} to {target:.6} at N = {horizon} over {} samples",
        finals.len()
    );
    if status == CheckStatus::Inconclusive {
        evidence.push_str("; tail growth within tolerance, increase N");
    }
    CheckLine::with_status(id, name, CITE_PAIR, status, evidence)
}

fn pair_command(set: &MatrixSet, eff: &Effective, report: &mut Report) -> Result<()> {
    if set.generators.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "pair expects two generators, found {}",
            set.generators.len()
        )));
    }
    let find = |name: &str| set.names.iter().position(|n| n == name);
    let (si, ki) = match (find("S"), find("K")) {
        (Some(s), Some(k)) => (s, k),
        _ => (0, 1),
    };
    report.set("S", &set.names[si]);
    report.set("K", &set.names[ki]);
    let config = PairConfig {
        horizon: eff.horizon,
        samples: eff.samples,
        seed: eff.seed,
        ..PairConfig::default()
    };
    let rep = match analyze_commuting_pair(&set.generators[si], &set.generators[ki], &config) {
        Ok(rep) => rep,
        Err(
            e @ (Error::NotCommuting(_)
            | Error::BothReducible
            | Error::DimensionMismatch { .. }
            | Error::InvalidParameter(_)),
        ) => {
            return Err(e);
        }
        Err(e) => {
            report
                .checks
                .push(CheckLine::from_error("pair", "commuting pair", CITE_PAIR, &e));
            return Ok(());
        }
    };
    report.set("lambda", rep.lambda);
    report.set("rK", rep.r_k);
    report.set("x0", &rep.x0);
    report.set("x0star", &rep.x0star);
    report.set("residuals", rep.residuals);
    report.set(
        "local_radius_estimates",
        json!({
            "K": rep.k_final, "K_dual": rep.k_dual_final, "S": rep.s_final, "S_dual": rep.s_dual_final
        }),
    );
    report.set("semigroup_angle", rep.semigroup_angle);
    if let Some(note) = &rep.semigroup_note {
        report.notes.push(note.clone());
    }

    let worst = rep.residuals.iter().copied().fold(0.0, f64::max);
    report.checks.push(CheckLine::new(
        "eigen",
        "S x0 = λ x0, K x0 = r(K) x0 and dual identities",
        CITE_PAIR,
        worst <= eff.tol_spec,
        format!("max relative residual {worst:.3e}"),
    ));
    report.checks.push(CheckLine::new(
        "positive",
        "x0 and x0* strictly positive",
        CITE_PAIR,
        rep.x0_strictly_positive && rep.x0star_strictly_positive,
        format!("min x0 = {:.3e}, min x0* = {:.3e}", rep.x0.0.min(), rep.x0star.0.min()),
    ));
    let l = &rep.local_radii;
    report.checks.push(local_check(
        "local-K",
        "||K^N x||^(1/N) → r(K)",
        &rep.k_final,
        &l.k,
        rep.r_k,
        eff.horizon,
    ));
    report.checks.push(local_check(
        "local-K*",
        "||(K^T)^N x*||^(1/N) → r(K)",
        &rep.k_dual_final,
        &l.k_dual,
        rep.r_k,
        eff.horizon,
    ));
    report.checks.push(local_check(
        "local-S",
        "||S^N x||^(1/N) → λ",
        &rep.s_final,
        &l.s,
        rep.lambda,
        eff.horizon,
    ));
    report.checks.push(local_check(
        "local-S*",
        "||(S^T)^N x*||^(1/N) → λ",
        &rep.s_dual_final,
        &l.s_dual,
        rep.lambda,
        eff.horizon,
    ));
    report.checks.push(match rep.semigroup_angle {
        Some(a) => CheckLine::new(
            "semigroup",
            "x0 agrees with the semigroup's common eigenvector",
            "the sum of the atoms of a minimal projection is a common eigenvector",
            a <= 1e-6,
            format!("angle {a:.3e} rad"),
        ),
        None => CheckLine::with_status(
            "semigroup",
            "x0 agrees with the semigroup's common eigenvector",
            "the sum of the atoms of a minimal projection is a common eigenvector",
            CheckStatus::Skipped,
            rep.semigroup_note.clone().unwrap_or_default(),
        ),
    });
    Ok(())
}

const CITE_MAIN: &str = "when the minimal projections share a range, every element acts on its atoms as a positive multiple of a permutation, and these permutations form a transitive group";
const CITE_EIGEN: &str =
    "when the minimal projections share a range, x0 = Σ x_i is a strictly positive common eigenvector";
const CITE_BLOCKS: &str =
    "the supports of the atoms partition the coordinates and every element is a block permutation matrix";

fn verify_command(set: &MatrixSet, eff: &Effective, report: &mut Report) {
    let irr = match irreducibility::is_ideal_irreducible(&set.generators) {
        Ok(r) => r,
        Err(e) => {
            report.checks.push(CheckLine::from_error(
                "irreducible",
                "ideal irreducibility",
                CITE_IRREDUCIBLE,
                &e,
            ));
            return;
        }
    };
    report.checks.push(CheckLine::new(
        "irreducible",
        "ideal irreducibility",
        CITE_IRREDUCIBLE,
        irr.verdict,
        match &irr.witness {
            Some(w) => format!("invariant ideal {w}"),
            None => "union digraph strongly connected".into(),
        },
    ));
    if !irr.verdict {
        return;
    }
    let Some((ball, projections)) = describe_ball(set, eff, report) else {
        return;
    };
    let fixed = structure::fixed_space_intersection_dim(&projections);
    report.set("fixed_space_intersection_dim", fixed);

    let ps = match permutation_structure(&ball, &projections, 0) {
        Ok(ps) => ps,
        Err(Error::DistinctRanges) => {
            if fixed == 0 {
                report
                    .notes
                    .push("no common eigenvector: the fixed spaces of the minimal projections intersect in 0".into());
            }
            report
                .notes
                .push("minimal projections have distinct ranges; permutation structure checks skipped".into());
            return;
        }
        Err(e) => {
            report.checks.push(CheckLine::from_error(
                "permutation",
                "scaled permutation action",
                CITE_MAIN,
                &e,
            ));
            return;
        }
    };
    report.set("r", ps.rank());
    report.set("basis", &ps.basis);
    report.set("duals", &ps.duals);
    report.set(
        "group",
        ps.group
            .iter()
            .map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    report.set("transitive", ps.transitive);

    let worst = ps
        .table
        .iter()
        .filter(|e| e.permutation.is_some())
        .map(|e| e.residual)
        .fold(0.0, f64::max);
    let law = group_law(&ball, &ps, 60);
    let (law_ok, law_text) = match &law {
        Ok(l) => (
            l.mismatches.is_empty() && l.max_scale_gap <= eff.tol_spec,
            format!(
                "{} pairs, max scale gap {:.3e}, {} mismatches",
                l.pairs,
                l.max_scale_gap,
                l.mismatches.len()
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    report.checks.push(CheckLine::new(
        "permutation",
        "elements act as scaled permutations",
        CITE_MAIN,
        worst <= eff.tol_spec && ps.transitive && law_ok,
        format!(
            "{} rays, max residual {worst:.3e}, transitive = {}; group law: {law_text}",
            ps.table.len(),
            ps.transitive
        ),
    ));

    match common_eigenvector(&ball, &ps) {
        Ok(ce) => {
            report.set("x0", &ce.x0);
            report.set("x0star", &ce.x0star);
            if let Some(caveat) = &ce.dual_caveat {
                report.notes.push(caveat.clone());
            }
            let dual_ok =
                ce.max_dual_residual.is_none_or(|r| r <= eff.tol_spec) && ce.dual_strictly_positive != Some(false);
            report.checks.push(CheckLine::new(
                "eigenvector",
                "common eigenvector x0",
                CITE_EIGEN,
                ce.max_residual <= eff.tol_spec && ce.strictly_positive && dual_ok,
                format!(
                    "max residual {:.3e}, strictly positive = {}, unique = {}, dual residual {}",
                    ce.max_residual,
                    ce.strictly_positive,
                    ce.unique,
                    ce.max_dual_residual.map_or("withheld".into(), |r| format!("{r:.3e}"))
                ),
            ));
        }
        Err(e) => report.checks.push(CheckLine::from_error(
            "eigenvector",
            "common eigenvector x0",
            CITE_EIGEN,
            &e,
        )),
    }

    match block_decomposition(&ball, &ps) {
        Ok(b) => {
            report.set("blocks", &b.blocks);
            report.checks.push(CheckLine::new(
                "blocks",
                "block permutation form",
                CITE_BLOCKS,
                b.exhaustive && b.mismatched.is_empty(),
                format!(
                    "{} blocks, exhaustive = {}, mismatched rays {:?}",
                    b.blocks.len(),
                    b.exhaustive,
                    b.mismatched
                ),
            ));
        }
        Err(e) => report.checks.push(CheckLine::from_error(
            "blocks",
            "block permutation form",
            CITE_BLOCKS,
            &e,
        )),
    }

    let config = VerifyConfig {
        horizon: eff.horizon,
        samples: eff.samples,
        seed: eff.seed,
        tol: eff.tol_spec,
        ..VerifyConfig::default()
    };
    match verify_structure_theorems(&ball, &projections, &ps, &config) {
        Ok(v) => report.checks.extend(v.checks.into_iter().map(|c| CheckLine {
            id: c.id.into(),
            name: c.name.into(),
            citation: c.citation.into(),
            status: c.status,
            evidence: c.evidence,
        })),
        Err(e) => report
            .checks
            .push(CheckLine::from_error("theorems", "structure theorems", CITE_MAIN, &e)),
    }
    if ps.diagnosis == Diagnosis::UniqueProjection {
        report
            .notes
            .push("unique minimal projection: dual structure emitted".into());
    }
}
