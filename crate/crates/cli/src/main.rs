use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use arcmot::deformed::LambdaContext;
use arcmot::format::{to_json_value, to_latex};
use arcmot::milnor::Route;
use arcmot::numtheory::divisors;
use arcmot::series::Series;
use arcmot::verify::{bench, verify, BenchRow, RunConfig, RunMode, Suite, VerificationReport};
use arcmot::{Error, Rational};

#[derive(Parser)]
#[command(name = "arcmot")]
#[command(about = "Exact motivic integrals over plane arcs with fixed tangency orders")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one exact value
    Compute {
        kind: Kind,
        /// Orders: `k m` for g, g-deformed, h; `a k` for s; `n` for z
        #[arg(required = true, num_args = 1..=2)]
        indices: Vec<u64>,
        #[command(flatten)]
        common: ValueArgs,
    },
    /// Print every value with orders up to N
    Table {
        kind: Kind,
        /// Largest order; overrides --max
        n: Option<u64>,
        #[arg(long, default_value_t = 10)]
        max: u64,
        #[command(flatten)]
        common: ValueArgs,
    },
    /// Run a verification suite and write its report
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time every suite on the exact and the randomized path
    Bench {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long, value_enum, default_value_t = Format::Latex)]
    format: Format,
    /// Route for g values
    #[arg(long, value_enum, default_value_t = RouteArg::Recurrence)]
    route: RouteArg,
    /// JSON file specializing the λ parameters
    #[arg(long, value_name = "SPEC.json")]
    lambda: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    max: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write zero for every duration so reports are reproducible byte for byte
    #[arg(long)]
    no_timings: bool,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        let mode = match self.mode {
            ModeArg::Exact => RunMode::Exact,
            ModeArg::Modp => RunMode::Modp,
            ModeArg::Both => RunMode::Both,
        };
        RunConfig { max: self.max, mode, seed: self.seed, timings: !self.no_timings }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    G,
    GDeformed,
    H,
    S,
    Z,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::G => "g",
            Kind::GDeformed => "g-deformed",
            Kind::H => "h",
            Kind::S => "s",
            Kind::Z => "z",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Kind::G | Kind::GDeformed => "G",
            Kind::H => "H",
            Kind::S => "S",
            Kind::Z => "Z",
        }
    }

    fn arity(self) -> usize {
        if self == Kind::Z {
            1
        } else {
            2
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Modp,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Recurrence,
    DivisorChain,
    ChainTuple,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Recurrence => Route::Recurrence,
            RouteArg::DivisorChain => Route::DivisorChain,
            RouteArg::ChainTuple => Route::ChainTuple,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Routes,
    Symmetry,
    SLemma,
    Measure,
    FunctionalEq,
    Deformed,
    Theorem4,
    ZOde,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Routes => Suite::Routes,
            SuiteArg::Symmetry => Suite::Symmetry,
            SuiteArg::SLemma => Suite::SLemma,
            SuiteArg::Measure => Suite::Measure,
            SuiteArg::FunctionalEq => Suite::FunctionalEq,
            SuiteArg::Deformed => Suite::Deformed,
            SuiteArg::Theorem4 => Suite::Theorem4,
            SuiteArg::ZOde => Suite::ZOde,
        }
    }
}

enum Failure {
    Usage(String),
    Identity,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compute { kind, indices, common } => {
            if indices.len() != kind.arity() {
                return Err(Failure::Usage(format!(
                    "{} takes {} indices, got {}",
                    kind.name(),
                    kind.arity(),
                    indices.len()
                )));
            }
            let ctx = lambda_context(kind, &common)?;
            let s = Series::new();
            let value = evaluate(&s, kind, &indices, &ctx, common.route.into())?;
            let text = render_values(kind, common.format, route_name(kind, &common), &[(indices, value)]);
            emit(&text, common.out.as_ref())
        }
        Command::Table { kind, n, max, common } => {
            let n = n.unwrap_or(max);
            if n == 0 {
                return Err(Failure::Usage("table bound must be at least 1".into()));
            }
            let ctx = lambda_context(kind, &common)?;
            let s = Series::new();
            let mut rows = Vec::new();
            for idx in table_indices(kind, n) {
                let v = evaluate(&s, kind, &idx, &ctx, common.route.into())?;
                rows.push((idx, v));
            }
            let text = render_values(kind, common.format, route_name(kind, &common), &rows);
            emit(&text, common.out.as_ref())
        }
        Command::Verify { suite, run, format, out } => {
            let report = verify(suite.into(), &run.config());
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Latex => report_latex(&report),
            };
            emit(&text, out.as_ref())?;
            if out.is_some() {
                eprintln!(
                    "{}: {}/{} cells passed",
                    report.suite, report.summary.passed, report.summary.cells
                );
            }
            if report.pass() {
                Ok(())
            } else {
                Err(Failure::Identity)
            }
        }
        Command::Bench { run, format, out } => {
            let config = run.config();
            let rows = bench(&config);
            emit(&render_bench(&rows, format), out.as_ref())?;
            if config.mode == RunMode::Both && rows.iter().any(|r| !r.verdicts_agree) {
                return Err(Failure::Identity);
            }
            Ok(())
        }
    }
}

fn lambda_context(kind: Kind, common: &ValueArgs) -> Result<LambdaContext, Failure> {
    let Some(path) = &common.lambda else {
        return Ok(LambdaContext::symbolic());
    };
    if !matches!(kind, Kind::GDeformed | Kind::H) {
        return Err(Failure::Usage("--lambda applies only to g-deformed and h".into()));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(LambdaContext::from_json(&text)?)
}

fn route_name(kind: Kind, common: &ValueArgs) -> &'static str {
    match kind {
        Kind::G => Route::from(common.route).name(),
        Kind::GDeformed => "deformed-recurrence",
        Kind::H | Kind::Z => "chain-sum",
        Kind::S => "direct-sum",
    }
}

fn evaluate(s: &Series, kind: Kind, idx: &[u64], ctx: &LambdaContext, route: Route) -> Result<Rational, Error> {
    match kind {
        Kind::G => s.milnor.g(route, idx[0], idx[1]),
        Kind::GDeformed => s.deformed.g_def_recurrence(idx[0], idx[1], ctx),
        Kind::H => s.deformed.h_chain_sum(idx[0], idx[1], ctx),
        Kind::S => s.milnor.s_direct(idx[0], idx[1]),
        Kind::Z => {
            if idx[0] == 0 {
                return Err(Error::InvalidOrder(0, 0));
            }
            s.z_value(idx[0])
        }
    }
}

/// The `k <= m` triangle for two-order kinds, divisor pairs for `s`.
fn table_indices(kind: Kind, n: u64) -> Vec<Vec<u64>> {
    match kind {
        Kind::Z => (1..=n).map(|k| vec![k]).collect(),
        Kind::S => (2..=n)
            .flat_map(|k| divisors(k).into_iter().filter(move |&a| a < k).map(move |a| vec![a, k]))
            .collect(),
        _ => (1..=n).flat_map(|k| (k..=n).map(move |m| vec![k, m])).collect(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_values(kind: Kind, format: Format, route: &str, rows: &[(Vec<u64>, Rational)]) -> String {
    let joined = |idx: &[u64], sep: &str| idx.iter().map(u64::to_string).collect::<Vec<_>>().join(sep);
    match format {
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|(idx, v)| json!({ "indices": idx, "value": to_json_value(v) }))
                .collect();
            let doc = json!({ "kind": kind.name(), "route": route, "entries": entries });
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
        Format::Csv => {
            let mut out = format!("# kind: {}, route: {route}\nindices,value\n", kind.name());
            for (idx, v) in rows {
                out.push_str(&format!("{},{}\n", joined(idx, " "), csv_field(&v.to_string())));
            }
            out
        }
        Format::Latex => {
            let mut out = format!("% kind: {}, route: {route}\n", kind.name());
            for (idx, v) in rows {
                out.push_str(&format!("{}_{{{}}} = {}\n", kind.symbol(), joined(idx, ","), to_latex(v)));
            }
            out
        }
    }
}

fn report_latex(r: &VerificationReport) -> String {
    let mut out = String::from("\\begin{tabular}{lrr}\nidentity & passed & cells \\\\\n\\hline\n");
    for id in &r.identities {
        let passed = id.cells.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "\\texttt{{{}}} & {} & {} \\\\\n",
            id.name,
            passed,
            id.cells.len()
        ));
    }
    out.push_str("\\end{tabular}\n");
    out
}

fn render_bench(rows: &[BenchRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("suite,cells,exact_millis,modp_millis,exact_pass,modp_pass,verdicts_agree\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.suite, r.cells, r.exact_millis, r.modp_millis, r.exact_pass, r.modp_pass, r.verdicts_agree
                ));
            }
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{lrrr}\nsuite & cells & exact (ms) & modp (ms) \\\\\n\\hline\n");
            for r in rows {
                out.push_str(&format!(
                    "{} & {} & {} & {} \\\\\n",
                    r.suite, r.cells, r.exact_millis, r.modp_millis
                ));
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
