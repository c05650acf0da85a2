//! Command-line front end: reads a JSON pullback spec, runs the engine and renders the
//! result for people or for programs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use bredon_core::bredon::{validate_block, BlockSummary, Finding, BUILTIN_BLOCKS};
use bredon_core::ktheory::{report_from_table, Report};
use bredon_core::pullback::{
    certify, compute_pullback_cohomology, run_pullback, BigradedEntry, BigradedTable,
    FullProductCheck, OracleCheck,
};
use bredon_core::{builtin_block, parse_spec, FgAbGroup, KTheoryResult, OutputFormat, SpecError};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Tor depth used by `e2` and `verify` when neither the flag nor the spec sets one.
pub const DEFAULT_TOR_DEPTH: usize = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bredon",
    version,
    about = "Bredon cohomology and equivariant K-theory of pullbacks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Compare every fold with the cohomology of a product complex.
    #[arg(long, global = true)]
    pub oracle: bool,

    /// Also build the product complex of all blocks at once.
    #[arg(long, global = true)]
    pub full_product_oracle: bool,

    /// Highest Tor degree of the E2 page.
    #[arg(long, global = true, value_name = "N")]
    pub tor_depth: Option<usize>,

    /// Output style; defaults to the spec's choice, then human.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Human => OutputFormat::Human,
            Format::Machine => OutputFormat::Machine,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bredon cohomology of each block and of the pullback.
    Cohomology { spec: PathBuf },
    /// Equivariant K-theory, Bredon homology and K-homology of the pullback.
    Ktheory { spec: PathBuf },
    /// Eilenberg-Moore E2 page at every fold.
    E2 { spec: PathBuf },
    /// Product-complex and collapse certificates for every fold.
    Verify { spec: PathBuf },
    /// The built-in block catalog.
    Blocks,
}

/// Why a run failed; each kind has its own exit code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// Bad arguments or an unreadable spec file.
    Usage,
    /// Malformed or invalid spec.
    Parse,
    /// The pipeline failed or a certificate did not hold.
    Computation,
}

impl ErrorKind {
    pub fn exit_code(&self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Parse => 2,
            ErrorKind::Computation => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            exit_code: kind.exit_code(),
            kind,
            message: message.into(),
            line: None,
            column: None,
            field: None,
        }
    }

    fn from_spec(e: SpecError) -> Self {
        CliError {
            line: e.line,
            column: e.column,
            field: e.field.clone(),
            ..CliError::new(ErrorKind::Parse, e.to_string())
        }
    }

    /// `{"error": {...}}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::new(ErrorKind::Computation, e.to_string())
}

type Degrees = BTreeMap<i64, FgAbGroup>;

fn signed(groups: BTreeMap<usize, FgAbGroup>) -> Degrees {
    groups.into_iter().map(|(d, g)| (d as i64, g)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCohomology {
    pub name: String,
    pub cohomology: Degrees,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub point_group_order: usize,
    pub blocks: Vec<BlockCohomology>,
    pub cohomology: Degrees,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Fold {
    pub fold: usize,
    pub block: String,
    pub e2: BigradedTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Report {
    pub point_group_order: usize,
    pub blocks: Vec<String>,
    pub tor_depth: usize,
    pub folds: Vec<E2Fold>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFold {
    pub fold: usize,
    pub block: String,
    pub kunneth: Degrees,
    pub oracle: OracleCheck,
    /// Whether every Tor row with `p ≥ 1` vanishes.
    pub collapses: bool,
    /// The first nonzero entry with `p ≥ 1`.
    pub obstruction: Option<BigradedEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub point_group_order: usize,
    pub blocks: Vec<String>,
    pub tor_depth: usize,
    pub folds: Vec<VerifyFold>,
    pub full_product: Option<FullProductCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    #[serde(flatten)]
    pub summary: BlockSummary,
    pub findings: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub blocks: Vec<CatalogEntry>,
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Cohomology(CohomologyReport),
    Ktheory(Box<Report>),
    E2(E2Report),
    Verify(VerifyReport),
    Blocks(CatalogReport),
}

impl Output {
    /// A failed verification still produces a report, but the run exits as a failure.
    pub fn failure(&self) -> Option<CliError> {
        match self {
            Output::Verify(v) if !v.passed => Some(computation(
                "verification failed: a product-complex check or a collapse certificate does not hold",
            )),
            _ => None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Human => self.human(),
        }
    }

    fn human(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Cohomology(r) => {
                for b in &r.blocks {
                    let _ = writeln!(s, "{}", b.name);
                    degrees(&mut s, "H^", &b.cohomology);
                }
                let names: Vec<&str> = r.blocks.iter().map(|b| b.name.as_str()).collect();
                let _ = writeln!(
                    s,
                    "pullback of {} over C{}",
                    names.join(", "),
                    r.point_group_order
                );
                degrees(&mut s, "H^", &r.cohomology);
            }
            Output::Ktheory(r) => {
                let _ = writeln!(
                    s,
                    "pullback of {} over C{}",
                    r.blocks.join(", "),
                    r.point_group_order
                );
                let _ = writeln!(s, "Bredon cohomology");
                degrees(&mut s, "H^", &r.cohomology);
                k_groups(&mut s, "Equivariant K-theory", "K^", &r.k_theory);
                let _ = writeln!(s, "Bredon homology");
                degrees(&mut s, "H_", &r.homology);
                k_groups(&mut s, "Equivariant K-homology", "K_", &r.k_homology);
                if let (Some(k0), Some(k1)) = (&r.k_homology.k0, &r.k_homology.k1) {
                    let _ = writeln!(s, "Reduced group C*-algebra");
                    let _ = writeln!(s, "  K_0(C*_r Γ) = {k0}");
                    let _ = writeln!(s, "  K_1(C*_r Γ) = {k1}");
                }
                let _ = writeln!(s, "Assumptions");
                for a in &r.assumptions {
                    let _ = writeln!(s, "  - {a}");
                }
            }
            Output::E2(r) => {
                if r.folds.is_empty() {
                    let _ = writeln!(s, "a single block has no folds");
                }
                for f in &r.folds {
                    let _ = writeln!(s, "fold {} (with {})", f.fold, f.block);
                    for p in 0..=r.tor_depth {
                        let row = f.e2.row(p);
                        let cells: Vec<String> =
                            row.iter().map(|(q, g)| format!("q={q}: {g}")).collect();
                        let body = if cells.is_empty() {
                            "0".to_string()
                        } else {
                            cells.join(", ")
                        };
                        let _ = writeln!(s, "  p={p}  {body}");
                    }
                }
            }
            Output::Verify(r) => {
                for f in &r.folds {
                    let _ = writeln!(s, "fold {} (with {})", f.fold, f.block);
                    let verdict = if f.oracle.agrees() {
                        "agrees"
                    } else {
                        "DISAGREES"
                    };
                    let _ = writeln!(s, "  product complex {verdict}");
                    if !f.oracle.agrees() {
                        for d in &f.oracle.mismatched_degrees {
                            let k = f.kunneth.get(&(*d as i64)).cloned().unwrap_or_default();
                            let p = f.oracle.product.get(d).cloned().unwrap_or_default();
                            let _ = writeln!(s, "    degree {d}: tensor {k}, product {p}");
                        }
                    }
                    match &f.obstruction {
                        None => {
                            let _ = writeln!(s, "  Tor rows p=1..{} vanish", r.tor_depth);
                        }
                        Some(e) => {
                            let _ = writeln!(
                                s,
                                "  Tor row p={} is nonzero: q={}: {}",
                                e.p, e.q, e.group
                            );
                        }
                    }
                }
                if let Some(full) = &r.full_product {
                    let verdict = if full.check.agrees() {
                        "agrees"
                    } else {
                        "DISAGREES"
                    };
                    let _ = writeln!(
                        s,
                        "full product complex (ranks {:?}) {verdict}",
                        full.flat_ranks
                    );
                    for (d, g) in &full.check.product {
                        let _ = writeln!(s, "  H^{d} = {g}");
                    }
                }
                let _ = writeln!(s, "{}", if r.passed { "PASSED" } else { "FAILED" });
            }
            Output::Blocks(r) => {
                for b in &r.blocks {
                    let m = &b.summary;
                    let _ = writeln!(
                        s,
                        "{}  point group C{}, dimension {}",
                        m.name, m.point_group_order, m.dimension
                    );
                    for (d, cells) in m.cells.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "  degree {d}: isotropy orders {:?}, cochain rank {}",
                            cells, m.cochain_ranks[d]
                        );
                    }
                    for f in &b.findings {
                        let _ = writeln!(s, "  problem: {f}");
                    }
                }
            }
        }
        s
    }
}

fn degrees(s: &mut String, prefix: &str, groups: &Degrees) {
    if groups.is_empty() {
        let _ = writeln!(s, "  (all zero)");
    }
    for (d, g) in groups {
        let _ = writeln!(s, "  {prefix}{d} = {g}");
    }
}

fn k_groups(s: &mut String, title: &str, prefix: &str, k: &KTheoryResult) {
    match (&k.k0, &k.k1) {
        (Some(k0), Some(k1)) => {
            let _ = writeln!(s, "{title} (spectral sequence collapses)");
            let _ = writeln!(s, "  {prefix}0 = {k0}");
            let _ = writeln!(s, "  {prefix}1 = {k1}");
        }
        _ => {
            let _ = writeln!(s, "{title} (odd degrees present; bounds only)");
            let _ = writeln!(s, "  {prefix}0 is at most {}", k.even_e2);
            let _ = writeln!(s, "  {prefix}1 is at most {}", k.odd_e2);
        }
    }
    for a in &k.assumptions {
        let _ = writeln!(s, "  note: {a}");
    }
}

/// Reads and validates a spec file.
pub fn load_spec(path: &std::path::Path) -> Result<bredon_core::SpecDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::new(
            ErrorKind::Usage,
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    parse_spec(&text).map_err(CliError::from_spec)
}

/// Runs a command. Returns the report and the output format to render it in.
pub fn execute(cli: &Cli) -> Result<(Output, OutputFormat), CliError> {
    let flag_format = cli.format.map(OutputFormat::from);
    let path = match &cli.command {
        Command::Blocks => {
            return Ok((catalog()?, flag_format.unwrap_or_default()));
        }
        Command::Cohomology { spec }
        | Command::Ktheory { spec }
        | Command::E2 { spec }
        | Command::Verify { spec } => spec,
    };
    let doc = load_spec(path)?;
    let format = flag_format.unwrap_or(doc.options.format);
    let mut spec = doc.pullback_spec().map_err(CliError::from_spec)?;
    let opts = &mut spec.options;
    opts.oracle |= cli.oracle;
    opts.full_product_oracle |= cli.full_product_oracle;
    if let Some(t) = cli.tor_depth {
        opts.tor_depth = t;
    }
    let order = spec.point_group().order();
    let names: Vec<String> = spec.blocks().iter().map(|b| b.name().to_string()).collect();
    let check_depth = cli
        .tor_depth
        .or((doc.options.tor_depth > 0).then_some(doc.options.tor_depth))
        .unwrap_or(DEFAULT_TOR_DEPTH);

    let out = match &cli.command {
        Command::Cohomology { .. } => {
            let run = run_pullback(&spec).map_err(computation)?;
            certify(&run).map_err(computation)?;
            Output::Cohomology(CohomologyReport {
                point_group_order: order,
                blocks: run
                    .block_tables
                    .iter()
                    .map(|(name, t)| BlockCohomology {
                        name: name.clone(),
                        cohomology: signed(all_degrees(t)),
                    })
                    .collect(),
                cohomology: signed(all_degrees(&run.result)),
            })
        }
        Command::Ktheory { .. } => {
            let table = compute_pullback_cohomology(&spec).map_err(computation)?;
            Output::Ktheory(Box::new(report_from_table(&spec, &table)))
        }
        Command::E2 { .. } => {
            spec.options.tor_depth = check_depth;
            let run = run_pullback(&spec).map_err(computation)?;
            Output::E2(E2Report {
                point_group_order: order,
                blocks: names,
                tor_depth: check_depth,
                folds: run
                    .folds
                    .into_iter()
                    .map(|f| E2Fold {
                        fold: f.fold,
                        block: f.block,
                        e2: f.e2.unwrap_or_default(),
                    })
                    .collect(),
            })
        }
        Command::Verify { .. } => {
            spec.options.oracle = true;
            spec.options.tor_depth = check_depth;
            let run = run_pullback(&spec).map_err(computation)?;
            let passed = run.oracles_agree() && run.collapses();
            Output::Verify(VerifyReport {
                point_group_order: order,
                blocks: names,
                tor_depth: check_depth,
                folds: run
                    .folds
                    .into_iter()
                    .map(|f| {
                        let e2 = f.e2.unwrap_or_default();
                        VerifyFold {
                            fold: f.fold,
                            block: f.block,
                            kunneth: signed(f.kunneth),
                            oracle: f.oracle.expect("oracle requested"),
                            collapses: e2.higher_rows_vanish(),
                            obstruction: e2.first_higher_entry().cloned(),
                        }
                    })
                    .collect(),
                full_product: run.full_product,
                passed,
            })
        }
        Command::Blocks => unreachable!("handled above"),
    };
    Ok((out, format))
}

/// Every degree from 0 to the top, zeros included.
fn all_degrees(t: &bredon_core::CohomologyTable) -> BTreeMap<usize, FgAbGroup> {
    (0..=t.top_degree()).map(|d| (d, t.group(d))).collect()
}

fn catalog() -> Result<Output, CliError> {
    let blocks = BUILTIN_BLOCKS
        .iter()
        .map(|name| {
            let b = builtin_block(name).map_err(computation)?;
            Ok(CatalogEntry {
                summary: b.summary(),
                findings: validate_block(&b).findings,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output::Blocks(CatalogReport { blocks }))
}
