use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fairvote::construct::{example_rule, unbiased_rule, ExampleRule};
use fairvote::enumerate::{enumerate_rules, satisfying_rules, Predicate, MAX_ENUMERATION_N};
use fairvote::format::{parse_rule, serialize};
use fairvote::indices::{banzhaf, is_unbiased, shapley_shubik, IndexVector, Method};
use fairvote::rule::ValidationReport;
use fairvote::symmetry::is_equitable;
use fairvote::{Error, VotingRule};

/// Largest enumeration run without `--best-effort`.
const DEFAULT_ENUMERATION_N: usize = 6;

#[derive(Parser)]
#[command(name = "fairvote", version, about = "Fair two-candidate voting rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an unbiased rule on n voters.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a rule file and print a JSON fairness report.
    Check {
        path: PathBuf,
        /// Also decide equitability (symmetry search).
        #[arg(long)]
        equitable: bool,
    },
    /// Print the Shapley-Shubik and Banzhaf indices of a rule file.
    Indices {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write one of the worked example rules.
    Example {
        #[arg(long, value_parser = parse_example)]
        name: ExampleRule,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate every rule on n voters and count the fair ones.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_predicate)]
        predicate: Option<Predicate>,
        /// Write each satisfying rule (every rule without --predicate) here.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Allow n = 7, which takes much longer.
        #[arg(long)]
        best_effort: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_example(s: &str) -> Result<ExampleRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_predicate(s: &str) -> Result<Predicate, String> {
    s.parse()
}

/// Each variant maps to one exit code.
enum Failure {
    Invalid(String),
    NonExistence(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::NonExistence(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::NonExistence(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PowerOfTwo(_) => Failure::NonExistence(e.to_string()),
            Error::InvalidRule(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<VotingRule, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_rule(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct MonotoneWitness {
    smaller: Vec<usize>,
    larger: Vec<usize>,
}

#[derive(Serialize)]
struct NeutralWitness {
    coalition: Vec<usize>,
    complement: Vec<usize>,
    both_win: bool,
}

#[derive(Serialize)]
struct BiasWitness {
    voters: [usize; 2],
    size: usize,
}

#[derive(Serialize, Default)]
struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    monotonicity: Option<MonotoneWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    neutrality: Option<NeutralWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bias: Option<BiasWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbits: Option<Vec<Vec<usize>>>,
}

impl Witness {
    fn is_empty(&self) -> bool {
        self.monotonicity.is_none() && self.neutrality.is_none() && self.bias.is_none() && self.orbits.is_none()
    }

    fn from_validation(report: &ValidationReport) -> Self {
        Witness {
            monotonicity: report
                .monotone
                .map(|m| MonotoneWitness { smaller: m.smaller.ids(), larger: m.larger.ids() }),
            neutrality: report.neutral_resolute.map(|v| NeutralWitness {
                coalition: v.coalition.ids(),
                complement: v.coalition.complement().ids(),
                both_win: v.wins,
            }),
            ..Default::default()
        }
    }
}

#[derive(Serialize)]
struct Report {
    n: usize,
    valid: bool,
    shapley: Option<Vec<String>>,
    banzhaf: Option<Vec<String>>,
    ss_fair: Option<bool>,
    banzhaf_fair: Option<bool>,
    unbiased: Option<bool>,
    equitable: Option<bool>,
    witness: Option<Witness>,
}

fn check(path: &Path, equitable: bool) -> Outcome {
    let rule = load(path)?;
    let validation = rule.validate()?;
    if !validation.is_valid() {
        print_json(&Report {
            n: rule.n(),
            valid: false,
            shapley: None,
            banzhaf: None,
            ss_fair: None,
            banzhaf_fair: None,
            unbiased: None,
            equitable: None,
            witness: Some(Witness::from_validation(&validation)),
        })?;
        return Err(Failure::Invalid(format!("{}: {validation}", path.display())));
    }
    let shapley = shapley_shubik(&rule, Method::WinningCount)?;
    let bz = banzhaf(&rule, Method::WinningCount)?;
    let unbiased = is_unbiased(&rule)?;
    let mut witness = Witness {
        bias: unbiased.witness.map(|(i, j, k)| BiasWitness { voters: [i, j], size: k }),
        ..Default::default()
    };
    let equitable = if equitable {
        let verdict = is_equitable(&rule)?;
        if !verdict.equitable {
            witness.orbits = Some(verdict.orbits);
        }
        Some(verdict.equitable)
    } else {
        None
    };
    print_json(&Report {
        n: rule.n(),
        valid: true,
        ss_fair: Some(shapley.all_equal()),
        banzhaf_fair: Some(bz.all_equal()),
        shapley: Some(shapley.to_strings()),
        banzhaf: Some(bz.to_strings()),
        unbiased: Some(unbiased.unbiased),
        equitable,
        witness: (!witness.is_empty()).then_some(witness),
    })
}

#[derive(Serialize)]
struct IndicesReport {
    shapley: Vec<String>,
    banzhaf: Vec<String>,
}

fn print_table(shapley: &IndexVector, bz: &IndexVector) {
    let (s, b) = (shapley.to_strings(), bz.to_strings());
    let voter_w = column_width("voter", (1..=s.len()).map(|v| v.to_string().len()));
    let s_w = column_width("shapley", s.iter().map(String::len));
    let b_w = column_width("banzhaf", b.iter().map(String::len));
    println!("{:>voter_w$}  {:>s_w$}  {:>b_w$}", "voter", "shapley", "banzhaf");
    for (voter, (sv, bv)) in s.iter().zip(&b).enumerate() {
        println!("{:>voter_w$}  {sv:>s_w$}  {bv:>b_w$}", voter + 1);
    }
}

fn column_width(header: &str, widths: impl Iterator<Item = usize>) -> usize {
    widths.fold(header.len(), usize::max)
}

fn indices(path: &Path, format: Format) -> Outcome {
    let rule = load(path)?;
    let shapley = shapley_shubik(&rule, Method::WinningCount)?;
    let bz = banzhaf(&rule, Method::WinningCount)?;
    match format {
        Format::Json => print_json(&IndicesReport { shapley: shapley.to_strings(), banzhaf: bz.to_strings() }),
        Format::Table => {
            print_table(&shapley, &bz);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct EnumerateOutput {
    n: usize,
    total_rules: u64,
    ss_fair: u64,
    banzhaf_fair: u64,
    unbiased: u64,
    equitable: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
}

fn dump_rules(dir: &Path, predicate: Option<Predicate>, n: usize) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    let tables = match predicate {
        Some(p) => satisfying_rules(n, p)?,
        None => {
            let mut all = Vec::new();
            fairvote::enumerate::for_each_rule(n, |t| all.push(t))?;
            all.sort();
            all
        }
    };
    let width = tables.len().to_string().len();
    for (idx, table) in tables.iter().enumerate() {
        let text = serialize(&table.to_rule())?;
        write_file(&dir.join(format!("rule_{:0width$}.vr", idx + 1)), &text)?;
    }
    Ok(())
}

fn enumerate(n: usize, predicate: Option<Predicate>, dump: Option<&Path>, best_effort: bool) -> Outcome {
    let limit = if best_effort { MAX_ENUMERATION_N } else { DEFAULT_ENUMERATION_N };
    if n > limit {
        let hint = if best_effort { "" } else { " (pass --best-effort for n = 7)" };
        return Err(Failure::Io(format!("enumeration supports n <= {limit}{hint}")));
    }
    let report = enumerate_rules(n)?;
    if let Some(dir) = dump {
        dump_rules(dir, predicate, n)?;
    }
    print_json(&EnumerateOutput {
        n: report.n,
        total_rules: report.total_rules,
        ss_fair: report.ss_fair,
        banzhaf_fair: report.banzhaf_fair,
        unbiased: report.unbiased,
        equitable: report.equitable,
        predicate: predicate.map(|p| p.name().to_string()),
        count: predicate.map(|p| report.count(p)),
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct { n, out } => {
            if n == 0 {
                return Err(Failure::Io("n must be at least 1".into()));
            }
            write_file(&out, &serialize(&unbiased_rule(n)?)?)
        }
        Command::Check { path, equitable } => check(&path, equitable),
        Command::Indices { path, format } => indices(&path, format),
        Command::Example { name, out } => write_file(&out, &serialize(&example_rule(name)?)?),
        Command::Enumerate { n, predicate, dump, best_effort } => enumerate(n, predicate, dump.as_deref(), best_effort),
    }
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("FAIRVOTE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Io(format!("FAIRVOTE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
