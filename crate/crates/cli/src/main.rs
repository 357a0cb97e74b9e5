mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densitylab::{Error, Execution, Rat};
use serde_json::{json, Value};

use args::{parse_count, parse_positive_rat};

/// Exact experiments on asymptotic density, density measures and
/// permutations of ℕ = {1, 2, 3, …}.
///
/// Sets, permutations, index sequences and measure rules are given as
/// expressions, e.g. `periodic(4;1,2,3)`, `blocks(dexp)`, `qswap`,
/// `pair(periodic(2;1), periodic(2;0))`, `combo(dexp(4))`.
///
/// Exit status: 0 when a report was computed (including Inconclusive
/// verdicts), 2 on input errors, 3 when a computation would exceed the
/// enumeration budget or a predicate cap.
#[derive(Parser, Debug)]
#[command(name = "densitylab", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower and upper estimates of A(n)/n over the tail window [tail, horizon].
    ///
    /// The sample grid contains the window ends, powers of two and the ends
    /// of every periodic piece of the set, so for block sets the estimates
    /// are the exact extremes of A(n)/n over the window.
    Density {
        /// Set expression.
        set: String,
    },
    /// Lévy-group membership: the defect |{k : k ≤ n < π(k)}|/n on a grid.
    ///
    /// The grid has 100 uniform points up to the horizon plus every 2^k and
    /// 2^k − 1 below it. The verdict is LevyLikely when the tail stays at most
    /// 1/100 (horizon ≥ 10^4), NonLevyLikely when at least 3 tail values reach 1/10.
    Levy {
        /// Permutation expression.
        perm: String,
        /// Count k ≤ n < π(k) by forward evaluation, or π(k) ≤ n < k through the inverse.
        #[arg(long, value_enum, default_value_t = Mode::Downward)]
        mode: Mode,
    },
    /// Statistical convergence of π(n)/n to 1.
    ///
    /// Densities of {n : |π(n)/n − 1| ≥ ε} at 10 uniform checkpoints, for each
    /// ε in --eps (default 1/10,1/100). A permutation is in the Lévy group
    /// exactly when these densities tend to 0 for every ε.
    Statlim {
        /// Permutation expression.
        perm: String,
    },
    /// The displacement (A(n) − (πA)(n))/n of one set under a permutation.
    ///
    /// It tends to 0 for every A exactly when π is in the Lévy group; a
    /// single set only gives evidence one way.
    Displacement {
        /// Permutation expression.
        perm: String,
        /// Set expression.
        set: String,
    },
    /// Evaluate a density-measure surrogate on a set.
    ///
    /// Subsequence limits, combinations 2·lim A(2n)/(2n) − lim A(n)/n and
    /// finite mixtures are evaluated at their declared points; the result is a
    /// value when the partials settle within --tol, an interval otherwise.
    /// --horizon and --tail do not apply: the rule's sequence fixes the points.
    Measure {
        /// Measure expression.
        measure: String,
        /// Set expression.
        set: String,
        /// Measure the image πA of the set instead.
        #[arg(long, value_name = "PERM")]
        image: Option<String>,
    },
    /// The pairing permutation swapping the i-th elements of A ∖ B and B ∖ A.
    ///
    /// Reports the leading pairs and the defect, which equals
    /// |(A ∖ B)(n) − (B ∖ A)(n)|/n at every n.
    Pair {
        /// First set expression.
        a: String,
        /// Second set expression.
        b: String,
    },
    /// The witness set {k : π(k) > k}, whose displacement equals the defect.
    ///
    /// Checks the identity at every grid point and, when the permutation is
    /// NonLevyLikely, builds a certificate that density measures are not
    /// invariant under it: defect peaks along which the witness set's
    /// displacement stays bounded away from 0.
    Witness {
        /// Permutation expression.
        perm: String,
    },
    /// Whether (A(n) − B(n))/n → 0, which forces every density measure to agree on A and B.
    ///
    /// The difference is sampled on the tail window and along dexp(K),
    /// its doubling and a geometric sequence.
    Equal {
        /// First set expression.
        a: String,
        /// Second set expression.
        b: String,
    },
    /// The block-set counterexamples for combination measures.
    ///
    /// For A = ⋃ [2^(2^i), 2·2^(2^i)): the combination value 1 exceeds the upper
    /// density 1/2; μ(2A) = 0 ≠ μ(A)/2; B = periodic(4;1,2,3) dominates A pointwise
    /// (checked up to --horizon, default 10^6) yet μ(B) = 3/4 < μ(A). Also checks
    /// S(n) ≤ S(2n) ≤ S(n) + n on fixed and --seed generated sets, and
    /// monotonicity and scaling of subsequence limits and their mixtures.
    Suite,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Upward,
    Downward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Exec {
    Parallel,
    Sequential,
}

#[derive(Args, Debug)]
struct Config {
    /// Largest n examined [default: 10^5; suite: 10^6].
    #[arg(long, global = true, value_parser = parse_count)]
    horizon: Option<u64>,
    /// Start of the tail window [default: horizon/10].
    #[arg(long, global = true, value_parser = parse_count)]
    tail: Option<u64>,
    /// Convergence tolerance.
    #[arg(long, global = true, value_parser = parse_positive_rat, default_value = "1/1000")]
    tol: Rat,
    /// Largest horizon any enumeration may touch.
    #[arg(long, global = true, value_parser = parse_count, default_value = "10000000")]
    budget: u64,
    /// Number of points 2^(2^i) in double-exponential sequences [default: 4; suite: 6].
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=densitylab::asymptotics::MAX_DEXP_TERMS as i64))]
    dexp_terms: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shorthand for --format csv.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance grid for statistical convergence, comma separated [default: 1/10,1/100].
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_positive_rat)]
    eps: Vec<Rat>,
    /// Inner-loop execution; results do not depend on it.
    #[arg(long, global = true, value_enum, default_value_t = Exec::Parallel)]
    execution: Exec,
}

/// Flags after defaults are resolved for the chosen subcommand.
pub struct Resolved {
    pub horizon: u64,
    pub tail: u64,
    pub tol: Rat,
    pub dexp_terms: u32,
    pub seed: u64,
    pub eps: Vec<Rat>,
    pub eval: densitylab::EvalConfig,
}

impl Resolved {
    fn echo(&self, format: Format) -> Value {
        json!({
            "horizon": self.horizon.to_string(),
            "tail": self.tail.to_string(),
            "tol": output::rat(&self.tol),
            "budget": self.eval.enumeration_budget.to_string(),
            "dexp_terms": self.dexp_terms,
            "format": if format == Format::Csv { "csv" } else { "json" },
            "seed": self.seed.to_string(),
            "eps": self.eps.iter().map(output::rat).collect::<Vec<_>>(),
            "execution": match self.eval.execution { Execution::Parallel => "parallel", Execution::Sequential => "sequential" },
        })
    }
}

fn resolve(cli: &Cli) -> Result<Resolved, Error> {
    let c = &cli.config;
    let suite = matches!(cli.command, Command::Suite);
    let horizon = c.horizon.unwrap_or(if suite { 1_000_000 } else { 100_000 });
    let tail = c.tail.unwrap_or(horizon / 10);
    if tail == 0 || tail >= horizon {
        return Err(Error::InvalidArgument(format!("--tail {tail} must satisfy 1 ≤ tail < horizon {horizon}")));
    }
    if c.budget < horizon {
        return Err(Error::EnumerationBudgetExceeded { horizon: horizon.into(), budget: c.budget });
    }
    let eps = if c.eps.is_empty() { vec![densitylab::rat(1, 10), densitylab::rat(1, 100)] } else { c.eps.clone() };
    Ok(Resolved {
        horizon,
        tail,
        tol: c.tol.clone(),
        dexp_terms: c.dexp_terms.unwrap_or(if suite { 6 } else { 4 }),
        seed: c.seed,
        eps,
        eval: densitylab::EvalConfig {
            enumeration_budget: c.budget,
            execution: match c.execution {
                Exec::Parallel => Execution::Parallel,
                Exec::Sequential => Execution::Sequential,
            },
        },
    })
}

fn run(cli: &Cli, cfg: &Resolved) -> Result<(&'static str, Value, output::Report), Error> {
    use commands as c;
    Ok(match &cli.command {
        Command::Density { set } => ("density", json!({ "set": set }), c::density(cfg, set)?),
        Command::Levy { perm, mode } => {
            let m = match mode {
                Mode::Upward => densitylab::perm::DefectMode::Upward,
                Mode::Downward => densitylab::perm::DefectMode::Downward,
            };
            ("levy", json!({ "perm": perm }), c::levy(cfg, perm, m)?)
        }
        Command::Statlim { perm } => ("statlim", json!({ "perm": perm }), c::statlim(cfg, perm)?),
        Command::Displacement { perm, set } => {
            ("displacement", json!({ "perm": perm, "set": set }), c::displacement(cfg, perm, set)?)
        }
        Command::Measure { measure, set, image } => (
            "measure",
            json!({ "measure": measure, "set": set, "image": image }),
            c::measure(cfg, measure, set, image.as_deref())?,
        ),
        Command::Pair { a, b } => ("pair", json!({ "a": a, "b": b }), c::pair(cfg, a, b)?),
        Command::Witness { perm } => ("witness", json!({ "perm": perm }), c::witness(cfg, perm)?),
        Command::Equal { a, b } => ("equal", json!({ "a": a, "b": b }), c::equal(cfg, a, b)?),
        Command::Suite => ("suite", json!({}), c::suite(cfg)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.config.csv { Format::Csv } else { cli.config.format };
    let outcome = resolve(&cli).and_then(|cfg| run(&cli, &cfg).map(|r| (cfg, r)));
    match outcome {
        Ok((cfg, (command, input, report))) => {
            match format {
                Format::Json => {
                    let doc = json!({
                        "schema": output::SCHEMA,
                        "command": command,
                        "input": input,
                        "config": cfg.echo(format),
                        "result": report.result,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                Format::Csv => print!("{}", output::csv(&report)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
