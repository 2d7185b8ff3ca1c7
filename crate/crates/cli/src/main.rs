//! `keyregion`: rate regions, outer bounds, Markov special cases and codec
//! simulations for the four-terminal source model.
//!
//! Exit codes: 0 success, 1 other failure, 2 unreadable or unparsable input,
//! 3 invalid PMF, 4 no known Markov chain, 5 inner corner outside the outer
//! box.

mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use keyregion::codec::{report_csv, run_trials, SimConfig, SimulationReport};
use keyregion::dmms::{chain_label, JointPmf4};
use keyregion::region::{
    corollary_capacity, outer_bound, read_corners_csv, search_inner_region, Capacity, RateTriple,
    SearchConfig,
};
use keyregion::Error;
use serde::Serialize;
use serde_json::{json, Value};

use record::{ExperimentRecord, OutDir};

/// Slack for the inner-versus-outer containment check.
const CONTAINMENT_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "keyregion", version, about = "Secret-key / private-keys rate regions")]
struct Cli {
    /// Base seed; for `simulate` it overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for payload files and experiment records.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Tolerance for Markov-chain tests.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace the achievable region by auxiliary search.
    Region {
        pmf: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Print the outer box.
    Outer { pmf: PathBuf },
    /// Detect a Markov structure with a known region.
    Corollary {
        pmf: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Run the codec sweep described by a config file.
    Simulate { config: PathBuf },
    /// Verify that every traced corner lies in the outer box.
    Check {
        pmf: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        /// Check corners from this CSV instead of searching.
        #[arg(long, hide = true)]
        frontier: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Serialize)]
struct SearchFlags {
    /// Enumerate deterministic channels when there are at most this many.
    #[arg(long, default_value_t = 1_000_000)]
    exhaustive_budget: u64,
    #[arg(long, default_value_t = 1000)]
    random_samples: usize,
    #[arg(long, default_value_t = 2)]
    refine_sweeps: usize,
    /// |U0|, |U1|, |U2|; defaults to |X3|.
    #[arg(long)]
    card_u: Option<usize>,
    #[arg(long, default_value_t = 1)]
    card_q: usize,
}

impl SearchFlags {
    fn config(&self, seed: u64) -> SearchConfig {
        SearchConfig {
            card_u0: self.card_u,
            card_u1: self.card_u,
            card_u2: self.card_u,
            card_q: self.card_q,
            exhaustive_budget: self.exhaustive_budget,
            random_samples: self.random_samples,
            refine_sweeps: self.refine_sweeps,
            seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    InvalidPmf(String),
    NoChain,
    Violation,
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Input(_) => 2,
            Failure::InvalidPmf(_) => 3,
            Failure::NoChain => 4,
            Failure::Violation => 5,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::Config(_) => Failure::Input(e.to_string()),
            Error::NegativeProbability { .. }
            | Error::NonFiniteProbability { .. }
            | Error::NotNormalized { .. }
            | Error::ShapeMismatch(_) => Failure::InvalidPmf(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(format!("writing output: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn load_pmf(path: &Path) -> Result<JointPmf4, Failure> {
    JointPmf4::load(path).map_err(|e| match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        Failure::InvalidPmf(msg) => Failure::InvalidPmf(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn fmt_triple(p: RateTriple) -> String {
    format!("({:.6}, {:.6}, {:.6})", p.r0, p.r1, p.r2)
}

struct Ctx {
    out: OutDir,
    seed: u64,
    tol: f64,
    started: Instant,
}

impl Ctx {
    fn finish(&self, command: &str, config: Value, seed: u64, payload: Value) -> CmdResult {
        let rec = ExperimentRecord::new(command, config, seed, payload, self.started.elapsed());
        self.out.write_json(&format!("{command}.record.json"), &rec)?;
        Ok(())
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

fn cmd_region(ctx: &Ctx, pmf_path: &Path, search: &SearchFlags) -> CmdResult {
    let pmf = load_pmf(pmf_path)?;
    let frontier = search_inner_region(&pmf, &search.config(ctx.seed))?;
    let csv = frontier.to_csv_string();
    ctx.out.write("frontier.csv", &csv)?;
    ctx.out.write_json("provenance.json", &frontier.provenance)?;
    let max = frontier.max_rates();
    println!("corners: {}", frontier.len());
    println!("max r0 = {:.6}", max.r0);
    println!("max r1 = {:.6}", max.r1);
    println!("max r2 = {:.6}", max.r2);
    ctx.finish(
        "region",
        json!({ "pmf": pmf_path, "search": search }),
        ctx.seed,
        json!({ "frontier_csv": csv }),
    )
}

fn cmd_outer(ctx: &Ctx, pmf_path: &Path) -> CmdResult {
    let pmf = load_pmf(pmf_path)?;
    let b = outer_bound(&pmf);
    let csv = format!("b0,b1,b2\n{},{},{}\n", b.b0, b.b1, b.b2);
    ctx.out.write("outer.csv", &csv)?;
    println!("outer box: {}", fmt_triple(b.corner()));
    println!("R0 <= min{{I(X3;X1|X4), I(X3;X2|X4)}} = {}", b.b0);
    println!("R1 <= min{{I(X3;X1|X4), I(X3;X1|X2)}} = {}", b.b1);
    println!("R2 <= min{{I(X3;X2|X4), I(X3;X2|X1)}} = {}", b.b2);
    ctx.finish("outer", json!({ "pmf": pmf_path }), ctx.seed, to_value(&b))
}

fn cmd_corollary(ctx: &Ctx, pmf_path: &Path, search: &SearchFlags) -> CmdResult {
    let pmf = load_pmf(pmf_path)?;
    let Some(report) = corollary_capacity(&pmf, ctx.tol, &search.config(ctx.seed))? else {
        println!("no known Markov chain holds at tol {}", ctx.tol);
        return Err(Failure::NoChain);
    };
    println!("{} (chain {})", report.case.label(), report.chain_label());
    match &report.capacity {
        Capacity::Box(c) => {
            println!(
                "capacity: 0 <= R0 <= {}, 0 <= R1 <= {}, 0 <= R2 <= {}",
                c.r0, c.r1, c.r2
            );
        }
        Capacity::Region(f) => {
            println!(
                "capacity region: {} corners, max {}",
                f.len(),
                fmt_triple(f.max_rates())
            );
        }
        Capacity::InnerBound(f) => {
            println!(
                "achievable (inner bound only): {} corners, max {}",
                f.len(),
                fmt_triple(f.max_rates())
            );
        }
    }
    if report.matched.len() > 1 {
        let others: Vec<String> = report.matched[1..]
            .iter()
            .map(|(case, chain)| format!("{} ({})", case.label(), chain_label(chain)))
            .collect();
        println!("also holds: {}", others.join(", "));
    }
    ctx.out.write_json("corollary.json", &report)?;
    ctx.finish(
        "corollary",
        json!({ "pmf": pmf_path, "tol": ctx.tol, "search": search }),
        ctx.seed,
        to_value(&report),
    )
}

fn cmd_simulate(ctx: &Ctx, config_path: &Path, seed_override: Option<u64>) -> CmdResult {
    let mut cfg = SimConfig::load(config_path).map_err(|e| match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", config_path.display())),
        other => other,
    })?;
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    let pmf = load_pmf(&cfg.pmf)?;
    let aux = cfg.aux.resolve(pmf.sizes()[JointPmf4::X3])?;
    let reports: Vec<SimulationReport> = cfg
        .n
        .iter()
        .map(|&n| run_trials(&pmf, &aux, &cfg.trial_config(n)))
        .collect::<Result<_, _>>()?;
    let csv = report_csv(&reports);
    ctx.out.write("report.csv", &csv)?;
    ctx.out.write_json("report.json", &reports)?;
    print!("{csv}");
    ctx.finish("simulate", to_value(&cfg), cfg.seed, to_value(&reports))
}

fn cmd_check(ctx: &Ctx, pmf_path: &Path, search: &SearchFlags, frontier: Option<&Path>) -> CmdResult {
    let pmf = load_pmf(pmf_path)?;
    let corners = match frontier {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            read_corners_csv(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => search_inner_region(&pmf, &search.config(ctx.seed))?.points,
    };
    let outer = outer_bound(&pmf);
    let violations: Vec<RateTriple> = corners
        .iter()
        .copied()
        .filter(|c| !outer.contains(*c, CONTAINMENT_TOL))
        .collect();
    let payload = json!({
        "outer": outer,
        "corners": corners,
        "violations": violations,
        "contained": violations.is_empty(),
    });
    ctx.out.write_json("check.json", &payload)?;
    ctx.finish(
        "check",
        json!({ "pmf": pmf_path, "search": search, "frontier": frontier }),
        ctx.seed,
        payload,
    )?;
    if violations.is_empty() {
        println!(
            "contained: all {} corners within outer box {}",
            corners.len(),
            fmt_triple(outer.corner())
        );
        Ok(())
    } else {
        for v in &violations {
            println!("violation: corner {} exceeds outer box {}", fmt_triple(*v), fmt_triple(outer.corner()));
        }
        Err(Failure::Violation)
    }
}

fn run(cli: &Cli) -> CmdResult {
    let ctx = Ctx {
        out: OutDir::create(&cli.out)
            .map_err(|e| Failure::Input(format!("{}: {e}", cli.out.display())))?,
        seed: cli.seed.unwrap_or(0),
        tol: cli.tol,
        started: Instant::now(),
    };
    match &cli.command {
        Command::Region { pmf, search } => cmd_region(&ctx, pmf, search),
        Command::Outer { pmf } => cmd_outer(&ctx, pmf),
        Command::Corollary { pmf, search } => cmd_corollary(&ctx, pmf, search),
        Command::Simulate { config } => cmd_simulate(&ctx, config, cli.seed),
        Command::Check {
            pmf,
            search,
            frontier,
        } => cmd_check(&ctx, pmf, search, frontier.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(Failure::Other(format!("thread pool: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::InvalidPmf(m) | Failure::Other(m) => {
                    eprintln!("error: {m}")
                }
                Failure::NoChain | Failure::Violation => {}
            }
            ExitCode::from(f.code())
        }
    }
}
