use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use poset_enum::antichains::{enumerate_antichains_basic, enumerate_antichains_gray, Direction};
use poset_enum::audit::PotentialConstants;
use poset_enum::generate::generate;
use poset_enum::ideals::{enumerate_ideals_basic, enumerate_ideals_gray};
use poset_enum::stepper::{default_delta_bound, make_stepper};
use poset_enum::{Delta, Family, Kind, Order, Poset};
use poset_enum_cli::bench::{self, BenchConfig};
use poset_enum_cli::format::{delta_line, parse_poset, set_line, write_poset};
use poset_enum_cli::genspec::parse_family;
use poset_enum_cli::report::{self, AuditConfig};

const EXIT_INPUT: u8 = 2;
const EXIT_AUDIT: u8 = 3;

#[derive(Parser)]
#[command(name = "posetenum", about = "Enumerate, audit and benchmark poset ideals and antichains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream every ideal or antichain.
    Enumerate(EnumerateArgs),
    /// Run an instrumented enumeration and check the potential inequalities.
    Audit(AuditArgs),
    /// Delay figures over a size sweep, as CSV.
    Bench(BenchArgs),
    /// Print the poset file (transitive reduction) of the input.
    Write(SourceArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Poset file.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Generator: chain:N, antichain:N, random:N:DENSITY[:SEED] or uno:L.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

#[derive(Args)]
struct SourceArgs {
    #[command(flatten)]
    source: Source,
    /// Seed for random generators without one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ideals,
    Antichains,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Basic,
    Gray,
}

#[derive(Args)]
struct Mode {
    #[arg(long, value_enum, default_value = "ideals")]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "gray")]
    order: OrderArg,
    /// Potential-method constant `T⋆` (default: calibrated per order).
    #[arg(long)]
    tstar: Option<u64>,
    /// Potential-method constant `μ`.
    #[arg(long)]
    mu: Option<u64>,
}

impl Mode {
    fn kind(&self) -> Kind {
        match self.kind {
            KindArg::Ideals => Kind::Ideals,
            KindArg::Antichains => Kind::Antichains,
        }
    }

    fn order(&self) -> Order {
        match self.order {
            OrderArg::Basic => Order::Basic,
            OrderArg::Gray => Order::Gray,
        }
    }

    fn constants(&self) -> PotentialConstants {
        let mut c = PotentialConstants::calibrated(self.kind(), self.order());
        if let Some(t) = self.tstar {
            c = c.with_tstar(t);
        }
        if let Some(m) = self.mu {
            c = c.with_mu(m);
        }
        c
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    src: SourceArgs,
    #[command(flatten)]
    mode: Mode,
    /// Gray antichains only: emit the mirrored sequence.
    #[arg(long)]
    reverse: bool,
    /// Worst-case constant delay through the bounded queue (Gray only).
    #[arg(long)]
    loopless: bool,
    /// Print the number of sets only.
    #[arg(long, conflicts_with = "deltas")]
    count: bool,
    /// Print the first set, then one delta line per step.
    #[arg(long)]
    deltas: bool,
    /// Also audit the run; exit 3 on a violation.
    #[arg(long)]
    audit: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    src: SourceArgs,
    #[command(flatten)]
    mode: Mode,
    /// Recursion depth to trace (default: unlimited up to 64 elements, else 1).
    #[arg(long)]
    max_depth: Option<u32>,
    /// Also check the push-out inequality, e.g. `--pushout alpha=2 beta=4`.
    #[arg(long, num_args = 1..=2, value_name = "TERM")]
    pushout: Vec<String>,
    /// Ledger CSV destination.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Chain,
    Antichain,
    Random,
    Uno,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 200, 400])]
    sizes: Vec<usize>,
    /// Edge probability for random posets.
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    mode: Mode,
    #[arg(long)]
    loopless: bool,
    /// Outputs measured per poset.
    #[arg(long, default_value_t = bench::DEFAULT_PREFIX)]
    prefix: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(1, e.to_string())
    }
}

fn input_error(msg: impl ToString) -> Fail {
    Fail(EXIT_INPUT, msg.to_string())
}

fn load(src: &SourceArgs) -> Result<Poset, Fail> {
    match (&src.source.input, &src.source.generator) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            parse_poset(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        (None, Some(spec)) => Ok(generate(parse_family(spec, src.seed).map_err(input_error)?)),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Fail> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn enumerate(args: &EnumerateArgs) -> Result<(), Fail> {
    let p = load(&args.src)?;
    let (kind, order) = (args.mode.kind(), args.mode.order());
    if args.loopless && order != Order::Gray {
        return Err(input_error("--loopless needs --order gray"));
    }
    if args.reverse && (kind != Kind::Antichains || order != Order::Gray || args.loopless) {
        return Err(input_error("--reverse applies to non-loopless gray antichains only"));
    }
    let mut out = output(&args.out)?;
    let mut first = true;
    let mut failed: Option<io::Error> = None;
    let mut emit = |members: &[usize], delta: &Delta| {
        if args.count || failed.is_some() {
            return;
        }
        let line = if args.deltas && !first { delta_line(&p, delta) } else { set_line(&p, members) };
        first = false;
        if let Err(e) = writeln!(out, "{line}") {
            failed = Some(e);
        }
    };
    let total = if args.loopless {
        let c = args.mode.constants();
        let mut s = make_stepper(&p, kind, default_delta_bound(&p), &c);
        let mut total = 0u64;
        while let Some(d) = s.step().map_err(|e| Fail(1, e.to_string()))? {
            let members: Vec<usize> = (0..p.len()).filter(|&u| s.members()[u]).collect();
            emit(&members, &d);
            total += 1;
        }
        total
    } else {
        match (kind, order) {
            (Kind::Ideals, Order::Basic) => enumerate_ideals_basic(&p, &mut emit),
            (Kind::Ideals, Order::Gray) => enumerate_ideals_gray(&p, &mut emit),
            (Kind::Antichains, Order::Basic) => enumerate_antichains_basic(&p, &mut emit),
            (Kind::Antichains, Order::Gray) => {
                let dir = if args.reverse { Direction::Reverse } else { Direction::Forward };
                enumerate_antichains_gray(&p, &mut emit, dir)
            }
        }
    };
    if let Some(e) = failed {
        return Err(e.into());
    }
    if args.count {
        writeln!(out, "{total}")?;
    }
    out.flush()?;
    if args.audit {
        let mut cfg = AuditConfig::new(&p, kind, order);
        cfg.constants = args.mode.constants();
        let res = report::audit(&p, &cfg);
        for line in res.summary() {
            eprintln!("{line}");
        }
        if !res.passed() {
            return Err(Fail(EXIT_AUDIT, "audit violation".into()));
        }
    }
    Ok(())
}

fn audit(args: &AuditArgs) -> Result<(), Fail> {
    let p = load(&args.src)?;
    let mut cfg = AuditConfig::new(&p, args.mode.kind(), args.mode.order());
    cfg.constants = args.mode.constants();
    if args.max_depth.is_some() {
        cfg.max_depth = args.max_depth;
    }
    if !args.pushout.is_empty() {
        let params = report::parse_pushout(&args.pushout, cfg.constants.tstar)
            .ok_or_else(|| input_error("push-out needs alpha=A beta=B with A > 1"))?;
        cfg.pushout = Some(params);
    }
    let res = report::audit(&p, &cfg);
    if let Some(path) = &args.out {
        fs::write(path, res.ledger.to_csv())?;
    }
    let mut out = io::stdout().lock();
    for line in res.summary() {
        writeln!(out, "{line}")?;
    }
    if res.passed() {
        Ok(())
    } else {
        Err(Fail(EXIT_AUDIT, "audit violation".into()))
    }
}

fn bench(args: &BenchArgs) -> Result<(), Fail> {
    let (kind, order) = (args.mode.kind(), args.mode.order());
    if args.loopless && order != Order::Gray {
        return Err(input_error("--loopless needs --order gray"));
    }
    if !(0.0..=1.0).contains(&args.density) {
        return Err(input_error("density must lie in [0, 1]"));
    }
    let posets: Vec<Poset> = args
        .sizes
        .iter()
        .map(|&n| {
            generate(match args.family {
                FamilyArg::Chain => Family::Chain(n),
                FamilyArg::Antichain => Family::Antichain(n),
                FamilyArg::Random => Family::Random { n, density: args.density, seed: args.seed },
                FamilyArg::Uno => Family::Uno(n.max(1)),
            })
        })
        .collect();
    let cfg = BenchConfig { kind, order, loopless: args.loopless, prefix: args.prefix, constants: args.mode.constants() };
    let rows = bench::sweep(&posets, &cfg).map_err(|e| Fail(1, e.to_string()))?;
    let mut out = output(&args.out)?;
    out.write_all(bench::to_csv(&rows).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Audit(a) => audit(a),
        Command::Bench(a) => bench(a),
        Command::Write(src) => load(src).and_then(|p| {
            let mut out = io::stdout().lock();
            out.write_all(write_poset(&p).as_bytes())?;
            Ok(())
        }),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
