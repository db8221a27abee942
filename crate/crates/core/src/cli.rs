//! Command-line surface: argument parsing, dispatch and exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::accuracy::{self, factor_accuracy};
use crate::arith::rational::format_sig;
use crate::arith::{parse_rational, set_default_tolerance, GaussianRational, Rational};
use crate::criterion::{self, analyse_truncation, certify_stability, first_certified, CriterionReport, ZetaMode};
use crate::engine::{right_factorise, verify_factorisation, FactorisationResult, VerificationReport};
use crate::error::{Error, Result};
use crate::harness::{ex61_streams, ex62_streams, ex63_streams, reproduce, write_reproduction, ExampleFamily, FamilyId, ReproduceConfig};
use crate::io::{parse_stream_spec, Problem};
use crate::laurent::LaurentMatrix2;
use crate::normalise::{p_normalise, NormaliseMode};
use crate::tail::{optimize_zeta, BoundContext, GridSpec};

pub const EXIT_IO: i32 = 1;
pub const EXIT_NOT_MONOMIAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_OTHER: i32 = 4;
pub const EXIT_NOT_CERTIFIED: i32 = 10;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "whstab", version, about = "Certified stable Wiener-Hopf factorisation of 2x2 matrix functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorise a Laurent matrix polynomial given as JSON.
    Factor(FactorArgs),
    /// Run the stability criterion for N = 1..nmax.
    Certify(CertifyArgs),
    /// Regenerate the full tables of a reference family.
    Reproduce(ReproduceArgs),
    /// Factor accuracy bounds at one order.
    Bounds(BoundsArgs),
    /// Choose the circles that minimise delta_N at one order.
    OptimizeZeta(OptimizeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn normalise_arg(s: &str) -> std::result::Result<NormaliseMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn family_arg(s: &str) -> std::result::Result<FamilyId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug, Args)]
pub struct ProblemArgs {
    /// Reference family: ex61, ex62 or ex63.
    #[arg(long, value_parser = family_arg, conflicts_with = "spec")]
    pub family: Option<FamilyId>,
    /// Stream specification JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_parser = rational_arg)]
    pub k1: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub k2: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<i64>,
    #[arg(long, value_parser = rational_arg, requires = "zeta2")]
    pub zeta1: Option<Rational>,
    #[arg(long, value_parser = rational_arg, requires = "zeta1")]
    pub zeta2: Option<Rational>,
    /// Pick the circles per order instead of using fixed ones.
    #[arg(long, conflicts_with = "zeta1")]
    pub optimize_zeta: bool,
    /// Distance kept from the ends of the admissible circle ranges.
    #[arg(long, value_parser = rational_arg, default_value = "1/100")]
    pub epsilon: Rational,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// auto, i2, j2, minus-infinity-identity or raw.
    #[arg(long, value_parser = normalise_arg, default_value = "auto")]
    pub normalise: NormaliseMode,
    /// Relative tolerance of certified constants.
    #[arg(long, value_parser = rational_arg)]
    pub tol: Option<Rational>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output directory; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Leave the generation time out of output headers.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// LMP-JSON file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_parser = normalise_arg, default_value = "auto")]
    pub normalise: NormaliseMode,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 30)]
    pub nmax: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 30)]
    pub nmax: u64,
    /// Order of the truncation that stands in for the full function.
    #[arg(long, default_value_t = 40)]
    pub reference: u64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub n: u64,
    /// Largest zeta2 tried when the plus stream is entire.
    #[arg(long, value_parser = rational_arg, default_value = "16")]
    pub cap: Rational,
}

/// What a command produced: text for standard output, files written, a summary
/// line and the exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub summary: Option<String>,
    pub written: Vec<PathBuf>,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotMonomialDet(_) => EXIT_NOT_MONOMIAL,
        Error::VerificationFailed(_) => EXIT_VERIFICATION,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_OTHER,
    }
}

fn family_with(id: FamilyId, p: &ProblemArgs) -> Result<ExampleFamily> {
    let r = ExampleFamily::reference(id);
    let real = |z: &GaussianRational| z.re.clone();
    let k1 = p.k1.clone().unwrap_or_else(|| real(&r.k1));
    let k2 = p.k2.clone().unwrap_or_else(|| real(&r.k2));
    let theta = p.theta.unwrap_or(r.theta);
    match id {
        FamilyId::Ex61 if theta != 0 => Err(Error::InvalidParameter("ex61 has theta = 0".into())),
        FamilyId::Ex61 => ex61_streams(k1, k2),
        FamilyId::Ex62 if theta.rem_euclid(2) != 0 => Err(Error::InvalidParameter("ex62 needs an even theta".into())),
        FamilyId::Ex62 => ex62_streams(k1, k2.into(), theta / 2),
        FamilyId::Ex63 => ex63_streams(k1.into(), k2.into(), theta),
    }
}

fn problem_of(p: &ProblemArgs) -> Result<Problem> {
    let mut problem = match (&p.family, &p.spec) {
        (Some(id), _) => {
            let f = family_with(*id, p)?;
            Problem { label: f.describe(), model: f.model.clone(), zeta: Some(f.default_zeta.clone()), family: Some(f) }
        }
        (None, Some(path)) => {
            if p.k1.is_some() || p.k2.is_some() || p.theta.is_some() {
                return Err(Error::InvalidParameter("--k1/--k2/--theta apply to --family only".into()));
            }
            parse_stream_spec(&fs::read_to_string(path)?)?
        }
        (None, None) => return Err(Error::InvalidParameter("give --family or --spec".into())),
    };
    if let (Some(z1), Some(z2)) = (&p.zeta1, &p.zeta2) {
        problem.zeta = Some(BoundContext::new(z1.clone(), z2.clone()));
    }
    Ok(problem)
}

fn zeta_mode(problem: &Problem, p: &ProblemArgs) -> Result<ZetaMode> {
    if p.optimize_zeta {
        return Ok(ZetaMode::Optimize { epsilon: p.epsilon.clone(), grid: GridSpec::default() });
    }
    let mut ctx = problem
        .zeta
        .clone()
        .ok_or_else(|| Error::InvalidParameter("no circles known for this problem: give --zeta1/--zeta2 or --optimize-zeta".into()))?;
    ctx.epsilon = p.epsilon.clone();
    ctx.check(&problem.model)?;
    Ok(ZetaMode::Fixed(ctx))
}

fn timestamp(run: &RunArgs) -> Option<String> {
    if run.no_timestamp {
        return None;
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Some(format!("unix time {secs}"))
}

#[derive(Serialize)]
struct Header {
    command: &'static str,
    problem: String,
    zeta: String,
    epsilon: String,
    normalise: String,
    tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<String>,
}

fn header(command: &'static str, problem: &Problem, zeta: &ZetaMode, p: &ProblemArgs, run: &RunArgs) -> Header {
    let zeta = match zeta {
        ZetaMode::Fixed(c) => format!("fixed zeta1={} zeta2={}", c.zeta1, c.zeta2),
        ZetaMode::Optimize { .. } => "optimised per order".into(),
    };
    Header {
        command,
        problem: problem.label.clone(),
        zeta,
        epsilon: p.epsilon.to_string(),
        normalise: format!("{:?}", run.normalise).to_lowercase(),
        tolerance: crate::arith::default_tolerance().to_string(),
        generated: timestamp(run),
    }
}

impl Header {
    fn comment_lines(&self) -> String {
        let mut s = format!("# {}: {}\n", self.command, self.problem);
        let _ = writeln!(s, "# {} epsilon={} normalise={} tol={}", self.zeta, self.epsilon, self.normalise, self.tolerance);
        if let Some(g) = &self.generated {
            let _ = writeln!(s, "# generated {g}");
        }
        s
    }
}

fn emit(run: &RunArgs, stem: &str, body: String, out: &mut Outcome) -> Result<()> {
    match &run.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let ext = if run.format == Format::Json { "json" } else { "csv" };
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, body)?;
            out.written.push(path);
        }
        None => out.stdout.push_str(&body),
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

#[derive(Serialize)]
struct FactorOutput<'a> {
    indices: (i64, i64),
    stable: bool,
    #[serde(flatten)]
    factorisation: &'a FactorisationResult,
    verification: VerificationReport,
}

pub fn factorise_json(a: &LaurentMatrix2, mode: NormaliseMode) -> Result<String> {
    let raw = right_factorise(a)?;
    let f = if raw.is_stable() && mode != NormaliseMode::Raw { p_normalise(&raw, mode)? } else { raw };
    let verification = verify_factorisation(a, &f);
    if !verification.all_pass() {
        return Err(Error::VerificationFailed(verification.summary()));
    }
    let out = FactorOutput { indices: f.indices, stable: f.is_stable(), factorisation: &f, verification };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

fn cmd_factor(a: &FactorArgs) -> Result<Outcome> {
    let m: LaurentMatrix2 = serde_json::from_str(&read_input(&a.input)?)?;
    Ok(Outcome { stdout: factorise_json(&m, a.normalise)?, ..Outcome::default() })
}

fn certified_line(first: Option<u64>) -> (String, i32) {
    match first {
        Some(n) => (format!("CERTIFIED at N={n}"), 0),
        None => ("NOT CERTIFIED for any N".into(), EXIT_NOT_CERTIFIED),
    }
}

#[derive(Serialize)]
struct JsonTable<'a, T: Serialize> {
    header: &'a Header,
    rows: &'a [T],
}

fn cmd_certify(a: &CertifyArgs) -> Result<Outcome> {
    let problem = problem_of(&a.problem)?;
    let zeta = zeta_mode(&problem, &a.problem)?;
    if a.nmax == 0 {
        return Err(Error::InvalidParameter("--nmax must be at least 1".into()));
    }
    let orders: Vec<u64> = (1..=a.nmax).collect();
    let analyses = certify_stability(&problem.model, &orders, &zeta, a.run.normalise, a.run.jobs)?;
    let reports: Vec<CriterionReport> = analyses.into_iter().map(|x| x.report).collect();
    let head = header("certify", &problem, &zeta, &a.problem, &a.run);
    let body = match a.run.format {
        Format::Csv => {
            let mut s = format!("{}{}\n", head.comment_lines(), criterion::CSV_HEADER);
            for r in &reports {
                let _ = writeln!(s, "{}", r.csv_row());
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&JsonTable { header: &head, rows: &reports })? + "\n",
    };
    let mut out = Outcome::default();
    emit(&a.run, "criterion", body, &mut out)?;
    let (line, code) = certified_line(first_certified(&reports));
    out.summary = Some(line);
    out.code = code;
    Ok(out)
}

fn cmd_reproduce(a: &ReproduceArgs) -> Result<Outcome> {
    let problem = problem_of(&a.problem)?;
    let family = problem.family.clone().ok_or_else(|| Error::InvalidParameter("reproduce needs a reference family".into()))?;
    let zeta = zeta_mode(&problem, &a.problem)?;
    let config = ReproduceConfig { n_max: a.nmax, reference_order: a.reference, zeta, mode: a.run.normalise, jobs: a.run.jobs };
    let r = reproduce(&family, &config)?;
    let dir = a.run.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let written = write_reproduction(&r, &dir, timestamp(&a.run))?;
    let (line, code) = certified_line(r.first_certified);
    let stdout = written.iter().map(|p| format!("{}\n", p.display())).collect();
    Ok(Outcome { stdout, summary: Some(line), written, code })
}

#[derive(Serialize)]
struct BoundsRow<'a> {
    n: u64,
    criterion: &'a CriterionReport,
    accuracy: &'a accuracy::AccuracyReport,
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome> {
    let problem = problem_of(&a.problem)?;
    let zeta = zeta_mode(&problem, &a.problem)?;
    let analysis = analyse_truncation(&problem.model, a.n, &zeta, a.run.normalise)?;
    let acc = factor_accuracy(&analysis, problem.model.theta, &analysis.report.delta_n)?;
    let head = header("bounds", &problem, &zeta, &a.problem, &a.run);
    let body = match a.run.format {
        Format::Csv => format!("{}{}\n{}\n", head.comment_lines(), accuracy::CSV_HEADER, acc.csv_row(a.n)),
        Format::Json => {
            let row = BoundsRow { n: a.n, criterion: &analysis.report, accuracy: &acc };
            serde_json::to_string_pretty(&JsonTable { header: &head, rows: &[row] })? + "\n"
        }
    };
    let mut out = Outcome::default();
    emit(&a.run, "bounds", body, &mut out)?;
    if let Some(note) = &acc.note {
        out.summary = Some(format!("note: {note}"));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ZetaRow {
    n: u64,
    zeta1: String,
    zeta2: String,
    delta_n: String,
}

fn cmd_optimize(a: &OptimizeArgs) -> Result<Outcome> {
    let problem = problem_of(&a.problem)?;
    let grid = GridSpec { cap: a.cap.clone(), ..GridSpec::default() };
    let c = optimize_zeta(&problem.model, a.n, &a.problem.epsilon, &grid)?;
    let mode = ZetaMode::Optimize { epsilon: a.problem.epsilon.clone(), grid };
    let head = header("optimize-zeta", &problem, &mode, &a.problem, &a.run);
    let row = ZetaRow { n: a.n, zeta1: c.zeta1.to_string(), zeta2: c.zeta2.to_string(), delta_n: format_sig(&c.delta.value, 10) };
    let body = match a.run.format {
        Format::Csv => format!("{}N,zeta1,zeta2,delta_N\n{},{},{},{}\n", head.comment_lines(), row.n, row.zeta1, row.zeta2, row.delta_n),
        Format::Json => serde_json::to_string_pretty(&JsonTable { header: &head, rows: &[row] })? + "\n",
    };
    let mut out = Outcome::default();
    emit(&a.run, "zeta", body, &mut out)?;
    Ok(out)
}

fn apply_tolerance(run: Option<&RunArgs>) -> Result<()> {
    if let Some(tol) = run.and_then(|r| r.tol.clone()) {
        set_default_tolerance(tol)?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let run_args = match &cli.command {
        Command::Factor(_) => None,
        Command::Certify(a) => Some(&a.run),
        Command::Reproduce(a) => Some(&a.run),
        Command::Bounds(a) => Some(&a.run),
        Command::OptimizeZeta(a) => Some(&a.run),
    };
    apply_tolerance(run_args)?;
    match &cli.command {
        Command::Factor(a) => cmd_factor(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Reproduce(a) => cmd_reproduce(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::OptimizeZeta(a) => cmd_optimize(a),
    }
}

/// Parses `args` and runs; returns the exit code after printing.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(s) = &out.summary {
                if out.stdout.is_empty() || !out.written.is_empty() {
                    println!("{s}");
                } else {
                    eprintln!("{s}");
                }
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
