//! Command-line front end: transition matrices, stationary vectors, spectra,
//! lumping checks and the verification suites, all in exact arithmetic.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtsetlin::combinatorics::Composition;
use qtsetlin::flags::{rcayley_stationary, transition_matrix_flags, PrimeField};
use qtsetlin::hecke_chains::{transition_matrix_perm, transition_matrix_word, LinearOperator, PermRates, WordRates};
use qtsetlin::lumping::{check_commuting, proj_flags_to_perms, proj_perms_to_words, push_forward, Diagram};
use qtsetlin::sampling::{generic_perm_rates, generic_word_rates, seeded};
use qtsetlin::spectra::{eigen_catalog_flags, eigen_catalog_perm, eigen_catalog_word, verify_annihilation, verify_multiplicities};
use qtsetlin::stationary::{
    stationary_flags_formula, stationary_oracle, stationary_perm_formula, stationary_word_formula, StationaryVector,
};
use qtsetlin::verify::{all_pass, run_suite, Suite, VerifyConfig};
use qtsetlin::{format_rational, parse_rational, ExactEigenEntry, Rational};
use serde_json::{json, Value};

use output::{matrix_json, matrix_table, vector_json, vectors_table, Format, Table};

#[derive(Parser)]
#[command(name = "qtsetlin", version, about = "Exact q-deformed Tsetlin library chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the transition matrix (row = source state).
    Matrix(MatrixArgs),
    /// Print the stationary distribution.
    Stationary(StationaryArgs),
    /// Print the eigenvalue catalog, optionally checked against exact nullities.
    Spectrum(SpectrumArgs),
    /// Check the intertwining identities between flags, permutations and words.
    LumpCheck(LumpArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Perm,
    Word,
    Flag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Oracle,
    Semigroup,
    All,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// Number of letters; defaults to the number of rates.
    #[arg(long)]
    n: Option<usize>,
    /// Field size for the flag space; q is then p.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Comma-separated rationals; sampled from --seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    rates: Option<String>,
    /// Content of the words, e.g. 1,2.
    #[arg(long)]
    m: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct StationaryArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, value_enum, default_value = "formula")]
    method: Method,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Compare predicted multiplicities with exact nullities.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LumpArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Primes for the flag diagrams.
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    /// Composition for the word diagrams.
    #[arg(long)]
    m: Option<String>,
    /// Deformation parameter for the word diagrams.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rates: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
    p: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure modes mapped to exit codes 2 and 1.
enum Failure {
    Config(String),
    Check(String),
}

impl From<qtsetlin::Error> for Failure {
    fn from(e: qtsetlin::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn config<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Config(msg.into()))
}

enum Chain {
    Perm(PermRates<Rational>),
    Word(WordRates<Rational>),
    Flag(PermRates<Rational>, PrimeField),
}

fn parse_list(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t).map_err(Failure::from)).collect()
}

fn resolve_n(n: Option<usize>, rates: &Option<Vec<Rational>>) -> CliResult<usize> {
    match (n, rates) {
        (Some(n), Some(r)) if n != r.len() => config(format!("--n {n} but {} rates given", r.len())),
        (Some(n), _) => Ok(n),
        (None, Some(r)) => Ok(r.len()),
        (None, None) => config("give --n or --rates"),
    }
}

fn require_q(q: &Option<String>) -> CliResult<Rational> {
    match q {
        Some(q) => Ok(parse_rational(q)?),
        None => config("--q is required for this space"),
    }
}

impl ChainArgs {
    fn build(&self) -> CliResult<Chain> {
        let rates = self.rates.as_deref().map(parse_list).transpose()?;
        let mut rng = seeded(self.seed);
        match self.space {
            Space::Perm => {
                let q = require_q(&self.q)?;
                let n = resolve_n(self.n, &rates)?;
                Ok(Chain::Perm(match rates {
                    Some(x) => PermRates::new(q, x)?,
                    None => generic_perm_rates(n, &q, &mut rng)?,
                }))
            }
            Space::Word => {
                let q = require_q(&self.q)?;
                let Some(m) = &self.m else { return config("--m is required for the word space") };
                let m: Composition = m.parse()?;
                if self.n.is_some_and(|n| n != m.total()) {
                    return config(format!("--n does not match the content {m}"));
                }
                Ok(Chain::Word(match rates {
                    Some(x) => WordRates::new(q, x, m)?,
                    None => generic_word_rates(&m, &q, &mut rng)?,
                }))
            }
            Space::Flag => {
                if self.q.is_some() {
                    return config("the flag space takes --p, not --q");
                }
                let Some(p) = self.p else { return config("--p is required for the flag space") };
                let field = PrimeField::new(p)?;
                let n = resolve_n(self.n, &rates)?;
                let q = field.q::<Rational>();
                Ok(Chain::Flag(
                    match rates {
                        Some(x) => PermRates::new(q, x)?,
                        None => generic_perm_rates(n, &q, &mut rng)?,
                    },
                    field,
                ))
            }
        }
    }
}

fn emit(output: &OutputArgs, json: Value, table: Table) -> CliResult<()> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
        Format::Csv => table.to_csv().map_err(|e| Failure::Config(e.to_string()))?,
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_matrix(args: &MatrixArgs) -> CliResult<()> {
    fn go<S: Clone + Eq + std::hash::Hash + std::fmt::Display>(out: &OutputArgs, op: LinearOperator<Rational, S>) -> CliResult<()> {
        emit(out, matrix_json(&op), matrix_table(&op))
    }
    match args.chain.build()? {
        Chain::Perm(x) => go(&args.output, transition_matrix_perm(&x)?),
        Chain::Word(x) => go(&args.output, transition_matrix_word(&x)?),
        Chain::Flag(x, field) => go(&args.output, transition_matrix_flags(&x, field)?),
    }
}

fn emit_methods<S: Clone + Eq + std::hash::Hash + std::fmt::Display>(out: &OutputArgs, methods: Vec<(&str, StationaryVector<Rational, S>)>, all: bool) -> CliResult<()> {
    let agree = methods.windows(2).all(|w| w[0].1.values() == w[1].1.values());
    let json = if all {
        let map = methods.iter().map(|(name, v)| (name.to_string(), vector_json(v))).collect::<serde_json::Map<_, _>>();
        json!({ "methods": map, "agree": agree })
    } else {
        vector_json(&methods[0].1)
    };
    emit(out, json, vectors_table(&methods))?;
    if agree {
        Ok(())
    } else {
        Err(Failure::Check("stationary methods disagree".into()))
    }
}

fn cmd_stationary(args: &StationaryArgs) -> CliResult<()> {
    let all = args.method == Method::All;
    let wants = |m: Method| all || args.method == m;
    let chain = args.chain.build()?;
    if args.method == Method::Semigroup && !matches!(chain, Chain::Flag(..)) {
        return config("--method semigroup applies to the flag space only");
    }
    match chain {
        Chain::Perm(x) => {
            let mut methods = Vec::new();
            if wants(Method::Formula) {
                methods.push(("formula", stationary_perm_formula(&x)?));
            }
            if wants(Method::Oracle) {
                methods.push(("oracle", stationary_oracle(&transition_matrix_perm(&x)?, &x.total())?));
            }
            emit_methods(&args.output, methods, all)
        }
        Chain::Word(x) => {
            let mut methods = Vec::new();
            if wants(Method::Formula) {
                methods.push(("formula", stationary_word_formula(&x)?));
            }
            if wants(Method::Oracle) {
                methods.push(("oracle", stationary_oracle(&transition_matrix_word(&x)?, &x.total())?));
            }
            emit_methods(&args.output, methods, all)
        }
        Chain::Flag(x, field) => {
            let mut methods = Vec::new();
            let formula = stationary_flags_formula(&x, field)?;
            if wants(Method::Semigroup) {
                let values = formula.states().iter().map(|f| rcayley_stationary(&x, f)).collect::<Result<Vec<_>, _>>()?;
                methods.push(("semigroup", StationaryVector::new(formula.states().to_vec(), values)?));
            }
            if wants(Method::Oracle) {
                methods.insert(0, ("oracle", stationary_oracle(&transition_matrix_flags(&x, field)?, &x.total())?));
            }
            if wants(Method::Formula) {
                methods.insert(0, ("formula", formula));
            }
            emit_methods(&args.output, methods, all)
        }
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let chain = args.chain.build()?;
    let catalog: Vec<ExactEigenEntry> = match &chain {
        Chain::Perm(x) => eigen_catalog_perm(x),
        Chain::Word(x) => eigen_catalog_word(x),
        Chain::Flag(x, field) => eigen_catalog_flags(x, *field)?,
    };
    let entries: Vec<Value> = catalog
        .iter()
        .map(|e| json!({ "label": e.label.to_string(), "value": format_rational(&e.value), "multiplicity": e.multiplicity.to_string() }))
        .collect();
    if !args.verify {
        let table = Table {
            header: vec!["label".into(), "value".into(), "multiplicity".into()],
            rows: catalog.iter().map(|e| vec![e.label.to_string(), format_rational(&e.value), e.multiplicity.to_string()]).collect(),
        };
        return emit(&args.output, json!({ "entries": entries }), table);
    }
    let (report, annihilation) = match &chain {
        Chain::Perm(x) => {
            let t = transition_matrix_perm(x)?;
            (verify_multiplicities(&t, &catalog), verify_annihilation(&t, &catalog))
        }
        Chain::Word(x) => {
            let t = transition_matrix_word(x)?;
            (verify_multiplicities(&t, &catalog), verify_annihilation(&t, &catalog))
        }
        Chain::Flag(x, field) => {
            let t = transition_matrix_flags(x, *field)?;
            (verify_multiplicities(&t, &catalog), verify_annihilation(&t, &catalog))
        }
    };
    let pass = report.pass() && annihilation;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "label": c.label(),
                "value": format_rational(&c.value),
                "predicted": c.predicted.to_string(),
                "computed": c.computed.to_string(),
                "pass": c.pass(),
            })
        })
        .collect();
    let json = json!({
        "entries": entries,
        "report": {
            "checks": checks,
            "dimension": report.dimension,
            "predicted_total": report.predicted_total.to_string(),
            "annihilation": annihilation,
            "pass": pass,
        }
    });
    let table = Table {
        header: ["label", "value", "predicted", "computed", "pass"].map(String::from).to_vec(),
        rows: report
            .checks
            .iter()
            .map(|c| vec![c.label(), format_rational(&c.value), c.predicted.to_string(), c.computed.to_string(), c.pass().to_string()])
            .collect(),
    };
    emit(&args.output, json, table)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("spectrum verification failed".into()))
    }
}

fn cmd_lump_check(args: &LumpArgs) -> CliResult<()> {
    if args.p.is_empty() && args.m.is_none() {
        return config("give --p for the flag diagrams or --m for the word diagrams");
    }
    let rates = args.rates.as_deref().map(parse_list).transpose()?;
    let mut rng = seeded(args.seed);
    let mut checks: Vec<(String, bool)> = Vec::new();
    if args.q.is_some() && args.m.is_none() {
        return config("--q applies to the word diagrams; the flag diagrams use q = p");
    }
    for &p in &args.p {
        let field = PrimeField::new(p)?;
        let q = field.q::<Rational>();
        let n = resolve_n(args.n, &rates)?;
        let x = match &rates {
            Some(x) => PermRates::new(q, x.clone())?,
            None => generic_perm_rates(n, &q, &mut rng)?,
        };
        for d in [Diagram::FlagsPermsProjection(field), Diagram::FlagsPermsInclusion(field)] {
            checks.push((d.to_string(), check_commuting(&d, &x)?));
        }
        let lumped = push_forward(&stationary_flags_formula(&x, field)?, &proj_flags_to_perms(n, field))?;
        checks.push((format!("flag stationary vector lumps to permutations (p={p})"), lumped == stationary_perm_formula(&x)?));
    }
    if let Some(m) = &args.m {
        let m: Composition = m.parse()?;
        let q = require_q(&args.q)?;
        if args.n.is_some_and(|n| n != m.total()) {
            return config(format!("--n does not match the content {m}"));
        }
        let x = match &rates {
            Some(x) if x.len() == m.len() => WordRates::new(q, x.clone(), m.clone())?.to_perm_rates(),
            Some(x) => {
                let x = PermRates::new(q, x.clone())?;
                if !x.is_compatible(&m) {
                    return config(format!("rates are not compatible with {m}"));
                }
                x
            }
            None => generic_word_rates(&m, &q, &mut rng)?.to_perm_rates(),
        };
        for d in [Diagram::PermsWordsProjection(m.clone()), Diagram::PermsWordsInclusion(m.clone())] {
            checks.push((d.to_string(), check_commuting(&d, &x)?));
        }
        let lumped = push_forward(&stationary_perm_formula(&x)?, &proj_perms_to_words(&m))?;
        checks.push((format!("permutation stationary vector lumps to words (m={m})"), lumped == stationary_word_formula(&x.to_word_rates(&m)?)?));
    }
    let pass = checks.iter().all(|(_, ok)| *ok);
    let json = json!({
        "checks": checks.iter().map(|(name, ok)| json!({ "check": name, "pass": ok })).collect::<Vec<_>>(),
        "pass": pass,
    });
    let table = Table {
        header: vec!["check".into(), "pass".into()],
        rows: checks.iter().map(|(name, ok)| vec![name.clone(), ok.to_string()]).collect(),
    };
    emit(&args.output, json, table)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("an intertwining identity failed".into()))
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let suite: Suite = args.suite.parse()?;
    let primes = args.p.iter().map(|&p| PrimeField::new(p)).collect::<Result<Vec<_>, _>>()?;
    if primes.is_empty() {
        return config("--p needs at least one prime");
    }
    let results = run_suite(suite, &VerifyConfig { n_max: args.n_max, primes, seed: args.seed });
    let passed = results.iter().filter(|r| r.pass).count();
    let failed = results.len() - passed;
    for r in results.iter().filter(|r| !r.pass) {
        eprintln!("FAIL [{}] {}{}", r.suite, r.name, r.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default());
    }
    eprintln!("{passed} passed, {failed} failed");
    let json = json!({
        "checks": results
            .iter()
            .map(|r| json!({ "suite": r.suite.to_string(), "name": r.name, "pass": r.pass, "detail": r.detail }))
            .collect::<Vec<_>>(),
        "passed": passed,
        "failed": failed,
    });
    let table = Table {
        header: ["suite", "name", "pass", "detail"].map(String::from).to_vec(),
        rows: results
            .iter()
            .map(|r| vec![r.suite.to_string(), r.name.clone(), r.pass.to_string(), r.detail.clone().unwrap_or_default()])
            .collect(),
    };
    emit(&args.output, json, table)?;
    if all_pass(&results) {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Matrix(a) => cmd_matrix(a),
        Command::Stationary(a) => cmd_stationary(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::LumpCheck(a) => cmd_lump_check(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
