//! `lieclass` command-line driver. [`run`] does all the work and returns
//! the rendered report with its exit code, so tests can call it directly.

mod render;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lieclass_core::catalog::{self, CatalogError};
use lieclass_core::determining::{determining_system, is_symmetry, symmetry_residual, PdeInstance, Verdict};
use lieclass_core::invclass::{audit_table3, load_table3, Table3Audit};
use lieclass_core::liealg::{adjoint_exp, LieAlgebraPresentation, LieError, NonClosed};
use lieclass_core::optsys::{audit_optimal_system, AdjointGroup, AuditConfig, AuditReport, DEFAULT_SAMPLES, DEFAULT_SEED};
use lieclass_core::{parse_chart, parse_expression, parse_field, parse_lsf, ChartDecl, ParseError};

pub use render::Table;

pub const SCHEMA: u32 = 1;

/// Chart for `--field` and `--f` arguments.
pub const CLI_CHART: &str = "vars x y t; dep u; class f; param s c1 c2 c3 c4;
    fun F(x,y,u,u_x,u_y), Phi(l), X1(x,y,t,u), X2(x,y,t,u), X3(x,y,t,u), P(x,y,t,u), a(t), beta(x,y,t);";

pub const GENERAL_ANSATZ: &str =
    "X1(x,y,t,u)*d_x + X2(x,y,t,u)*d_y + X3(x,y,t,u)*d_t + P(x,y,t,u)*d_u";

#[derive(Parser, Debug, Clone)]
#[command(name = "lieclass", version, about = "Lie symmetry tables and audits for u_t = f(u_xx + u_yy)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Basis file (.lsf) replacing the built-in six-dimensional basis.
    #[arg(long, global = true)]
    pub basis: Option<PathBuf>,
    /// Catalog file replacing the built-in representatives or table rows.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES, value_parser = positive)]
    pub samples: usize,
    /// Allow coordinate reflections as extra moves.
    #[arg(long, global = true)]
    pub reflections: bool,
    /// Use Y5 = d_t - f*d_f as printed instead of t*d_t - f*d_f.
    #[arg(long = "printed-Y5", global = true)]
    pub printed_y5: bool,
    /// Write the report here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Commutator table of the basis.
    Brackets,
    /// Adjoint table Ad(exp(s Y_i)) Y_j.
    Adjoint,
    /// Determining system of an ansatz.
    Detsys {
        #[arg(long, default_value = GENERAL_ANSATZ)]
        field: String,
        #[arg(long = "f", default_value = "F(x,y,u,u_x,u_y)")]
        f: String,
    },
    /// Whether a field is a symmetry of u_t = f(u_xx + u_yy).
    Check {
        #[arg(long)]
        field: String,
        #[arg(long = "f", default_value = "F(x,y,u,u_x,u_y)")]
        f: String,
    },
    /// Audit of the one-dimensional subalgebra list.
    Optsys,
    /// Audit of the classification table.
    Classify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Finding(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Finding(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Parse(m) => write!(f, "parse error: {}", m),
            CliError::Finding(m) => write!(f, "{}", m),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Parse(p) => CliError::Parse(p.to_string()),
            other => CliError::Finding(other.to_string()),
        }
    }
}

/// Rendered report and exit code.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))
}

fn color() -> bool {
    std::env::var("LIECLASS_COLOR").is_ok_and(|v| v == "1")
}

fn presentation(cli: &Cli) -> Result<LieAlgebraPresentation, CliError> {
    match &cli.basis {
        Some(p) => Ok(catalog::presentation_of(&parse_lsf(&read(p)?)?)?),
        None => Ok(catalog::basis_presentation(cli.printed_y5)?),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(command: &str, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body }).expect("serializable");
    s.push('\n');
    s
}

/// Runs one subcommand.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Brackets => brackets(cli),
        Command::Adjoint => adjoint(cli),
        Command::Detsys { field, f } => detsys(cli, field, f),
        Command::Check { field, f } => check(cli, field, f),
        Command::Optsys => optsys(cli),
        Command::Classify => classify(cli),
    }
}

/// Parses `args` (program name first) and runs; usage errors become
/// exit code 1 with clap's message.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli).unwrap_or_else(|e| Output { text: format!("{}\n", e), code: e.code() }),
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            Output { text: e.render().to_string(), code }
        }
    }
}

#[derive(Serialize)]
struct BracketsReport<'a> {
    names: &'a [String],
    fields: Vec<String>,
    closed: bool,
    /// `table[i][j]` renders `[Y_i, Y_j]`.
    table: Vec<Vec<String>>,
    witnesses: &'a [NonClosed],
}

fn bracket_table(p: &LieAlgebraPresentation) -> Vec<Vec<String>> {
    let n = p.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let w = p.witnesses.iter().find(|w| (w.i, w.j) == (i, j) || (w.i, w.j) == (j, i));
                    match w {
                        Some(w) if w.i == i => format!("outside span: {}", w.residual),
                        Some(w) => format!("outside span: {}", w.residual.scale(&lieclass_core::Expr::int(-1))),
                        None => p.commutator_entry(i, j),
                    }
                })
                .collect()
        })
        .collect()
}

fn brackets(cli: &Cli) -> Result<Output, CliError> {
    let p = presentation(cli)?;
    let table = bracket_table(&p);
    let code = if p.closed { 0 } else { 2 };
    let text = match cli.format {
        Format::Json => json(
            "brackets",
            BracketsReport {
                names: &p.names,
                fields: p.basis.iter().map(|b| b.to_string()).collect(),
                closed: p.closed,
                table,
                witnesses: &p.witnesses,
            },
        ),
        fmt => {
            let t = Table::square("[Yi, Yj]", &p.names, &table);
            let mut s = t.render(fmt);
            if fmt == Format::Md {
                for w in &p.witnesses {
                    s.push_str(&format!(
                        "\n{}: [{}, {}] = {} is outside the span\n",
                        render::paint("non-closed", false, color()),
                        p.names[w.i],
                        p.names[w.j],
                        w.residual
                    ));
                }
            }
            s
        }
    };
    Ok(Output { text, code })
}

#[derive(Serialize)]
struct AdjointReport<'a> {
    names: &'a [String],
    /// `table[i][j]` renders `Ad(exp(s*Y_i)) Y_j`.
    table: Vec<Vec<String>>,
    eigenvalues: Vec<Vec<i64>>,
}

fn adjoint(cli: &Cli) -> Result<Output, CliError> {
    let p = presentation(cli)?;
    if let Err(e) = p.require_closed() {
        return Err(CliError::Finding(e.to_string()));
    }
    let mut table = Vec::new();
    let mut eigenvalues = Vec::new();
    for i in 0..p.dim() {
        let m = adjoint_exp(&p, i).map_err(|e: LieError| CliError::Finding(e.to_string()))?;
        table.push((0..p.dim()).map(|j| m.entry_string(j, &p.names)).collect());
        eigenvalues.push(m.eigenvalues.clone());
    }
    let text = match cli.format {
        Format::Json => json("adjoint", AdjointReport { names: &p.names, table, eigenvalues }),
        fmt => Table::square("Ad", &p.names, &table).render(fmt),
    };
    Ok(Output { text, code: 0 })
}

fn cli_chart() -> ChartDecl {
    parse_chart(CLI_CHART).expect("built-in chart")
}

fn pde_for(f: &str, chart: &ChartDecl) -> Result<PdeInstance, CliError> {
    Ok(PdeInstance::with_f(parse_expression(f, chart)?))
}

#[derive(Serialize)]
struct DetsysReport {
    field: String,
    f: String,
    equations: Vec<lieclass_core::determining::DeterminingEquation>,
}

fn detsys(cli: &Cli, field: &str, f: &str) -> Result<Output, CliError> {
    let chart = cli_chart();
    let x = parse_field(field, &chart)?;
    let pde = pde_for(f, &chart)?;
    let sys = determining_system(&x, &pde).map_err(|e| CliError::Finding(e.to_string()))?;
    let text = match cli.format {
        Format::Json => json(
            "detsys",
            DetsysReport { field: x.to_string(), f: pde.f.to_string(), equations: sys.equations },
        ),
        fmt => Table::new(
            vec!["marker".into(), "coefficient".into()],
            sys.equations.iter().map(|e| vec![e.marker.clone(), e.coefficient.clone()]).collect(),
        )
        .render(fmt),
    };
    Ok(Output { text, code: 0 })
}

#[derive(Serialize)]
struct CheckReport {
    field: String,
    f: String,
    verdict: Verdict,
    residual: String,
}

fn check(cli: &Cli, field: &str, f: &str) -> Result<Output, CliError> {
    let chart = cli_chart();
    let x = parse_field(field, &chart)?;
    let pde = pde_for(f, &chart)?;
    let err = |e: lieclass_core::determining::DetError| CliError::Finding(e.to_string());
    let verdict = is_symmetry(&x, &pde).map_err(err)?;
    let residual = symmetry_residual(&x, &pde).map_err(err)?.to_string();
    let code = if verdict.is_yes() { 0 } else { 2 };
    let text = match cli.format {
        Format::Json => json("check", CheckReport { field: x.to_string(), f: pde.f.to_string(), verdict, residual }),
        Format::Csv => Table::new(
            vec!["field".into(), "f".into(), "verdict".into(), "residual".into()],
            vec![vec![x.to_string(), pde.f.to_string(), verdict.to_string(), residual]],
        )
        .render(Format::Csv),
        Format::Md => format!(
            "field: {}\nf: {}\nverdict: {}\nresidual: {}\n",
            x,
            pde.f,
            render::paint(&verdict.to_string(), verdict.is_yes(), color()),
            residual
        ),
    };
    Ok(Output { text, code })
}

fn group(cli: &Cli) -> Result<(AdjointGroup, Vec<(String, lieclass_core::optsys::CoeffVector)>), CliError> {
    let p = presentation(cli)?;
    let reps_file = match &cli.catalog {
        Some(path) => parse_lsf(&read(path)?)?,
        None => parse_lsf(catalog::OPTIMAL_SYSTEM)?,
    };
    let reps = catalog::representatives(&reps_file, &p)?
        .into_iter()
        .map(|(n, v)| (n, lieclass_core::optsys::CoeffVector(v)))
        .collect();
    let g = AdjointGroup::new(p).map_err(|e| CliError::Finding(e.to_string()))?;
    Ok((g, reps))
}

fn optsys(cli: &Cli) -> Result<Output, CliError> {
    let (g, reps) = group(cli)?;
    let config = AuditConfig {
        samples: cli.samples,
        seed: cli.seed,
        reflections: cli.reflections,
    };
    let report: AuditReport = audit_optimal_system(&g, &reps, &config);
    let clean = report.replay_failures == 0 && report.counts.unmatched == 0 && report.redundant_pairs.is_empty();
    let text = match cli.format {
        Format::Json => json("optsys", &report),
        fmt => render::optsys(&report, fmt, color()),
    };
    Ok(Output { text, code: if clean { 0 } else { 2 } })
}

fn table3_audit(cli: &Cli) -> Result<Table3Audit, CliError> {
    let rows = match &cli.catalog {
        Some(path) => load_table3(&parse_lsf(&read(path)?)?),
        None => catalog::table3_rows()?,
    };
    let p = presentation(cli)?;
    let items = parse_lsf(catalog::OPTIMAL_SYSTEM)?;
    let items: Vec<_> = catalog::representatives(&items, &p)?
        .into_iter()
        .map(|(n, v)| (n, p.combine(&v)))
        .collect();
    audit_table3(&rows, &items).map_err(|e| CliError::Finding(e.to_string()))
}

fn classify(cli: &Cli) -> Result<Output, CliError> {
    let audit = table3_audit(cli)?;
    let clean = audit.summary.all_pass.len() == audit.summary.rows;
    let text = match cli.format {
        Format::Json => json("classify", &audit),
        fmt => render::classify(&audit, fmt, color()),
    };
    Ok(Output { text, code: if clean { 0 } else { 2 } })
}
