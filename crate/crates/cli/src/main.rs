use clap::{Args, Parser, Subcommand, ValueEnum};
use guesslab::exact::{bc_partial_sums, count_avoiders, stirling_ratio};
use guesslab::montecarlo::{estimate_random_families, sample_hits};
use guesslab::report::write_csv;
use guesslab::scalar::sig17;
use guesslab::tree::{build_meager_witness, build_tree, verify_tree, verify_witness, TreeMode};
use guesslab::walks::simulate_recurrence;
use guesslab::{ExactScalar, FamilyId, PiBound};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

/// Construct, analyze and simulate guessing sequences.
#[derive(Parser, Debug)]
#[command(name = "guesslab", version)]
struct Cli {
    /// Run seed for every randomized command.
    #[arg(long, global = true, env = "GUESSLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family and summarize its levels.
    Gen(GenArgs),
    /// Exact analysis.
    #[command(subcommand)]
    Exact(ExactCommand),
    /// Monte Carlo estimation.
    #[command(subcommand)]
    Mc(McCommand),
    /// Simulate simple random walks on Z^d.
    Walk(WalkArgs),
    /// Sparse tree and meagerness witness.
    #[command(subcommand)]
    Tree(TreeCommand),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Family id: tail, frozen:<bits>, cycling:<pi>, cb1:<mode>, cb2:<mode>, dense1, random:<pi>:<seed>.
    #[arg(long)]
    family: String,
    #[arg(long)]
    depth: usize,
}

#[derive(Subcommand, Debug)]
enum ExactCommand {
    /// Count words of each length avoiding every level of a family.
    Avoiders {
        #[arg(long)]
        family: String,
        #[arg(long)]
        depth: usize,
    },
    /// Partial sums of π(n)/2^n.
    Sums {
        /// π id: const:<c>, pow2minus:<k>, cb1[:mode], cb2[:mode], table:<path>.
        #[arg(long)]
        pi: String,
        #[arg(long)]
        depth: usize,
    },
    /// C(n, n/2)·√(πn)/(√2·2^n) to 50 digits.
    Stirling {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum McCommand {
    /// Hit statistics of uniform words against one family.
    Hits {
        #[arg(long)]
        family: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Hit statistics over uniformly random families with |A_n| = π(n).
    RandomFamilies {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 50)]
        families: usize,
        #[arg(long, default_value_t = 2000)]
        words: usize,
    },
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    walks: usize,
    /// Report per-walk first return times instead of the summary.
    #[arg(long)]
    return_times: bool,
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// Build the stages and check every structural property.
    Build {
        #[arg(long, default_value_t = guesslab::tree::DEFAULT_STAGES)]
        stages: usize,
        /// Place levels according to this π instead of inducing it.
        #[arg(long)]
        pi: Option<String>,
        /// Highest level searched when --pi is given.
        #[arg(long, default_value_t = 1 << 16)]
        horizon: usize,
    },
    /// Build the tree and a witness of meagerness, then verify the witness.
    Witness {
        #[arg(long, default_value_t = guesslab::tree::DEFAULT_STAGES)]
        stages: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

fn runtime(e: guesslab::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn parse_family(id: &str) -> Result<FamilyId, Failure> {
    id.parse().map_err(|e: guesslab::Error| Failure::Usage(e.to_string()))
}

fn parse_pi(id: &str) -> Result<PiBound, Failure> {
    PiBound::parse(id).map_err(|e| Failure::Usage(e.to_string()))
}

/// A rendered report plus an optional line for standard output.
struct Outcome {
    report: String,
    verdict: Option<String>,
    failed: bool,
}

impl Outcome {
    fn report(report: String) -> Self {
        Self {
            report,
            verdict: None,
            failed: false,
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn render(format: Format, json: impl FnOnce() -> Value, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => json_text(&json()),
        Format::Csv => csv(),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    let seed = cli.seed;
    match &cli.command {
        Command::Gen(a) => {
            let id = parse_family(&a.family)?;
            let seq = id.build(a.depth).map_err(runtime)?;
            let rows = seq.summary();
            Ok(Outcome::report(render(
                format,
                || json!({ "family": id.to_string(), "depth": a.depth, "levels": rows }),
                || {
                    write_csv(
                        &["n", "cardinality", "pi", "repr"],
                        rows.iter().map(|r| {
                            vec![
                                r.n.to_string(),
                                r.cardinality.to_string(),
                                r.pi.as_ref().map(|p| p.to_string()).unwrap_or_default(),
                                r.repr.to_string(),
                            ]
                        }),
                    )
                },
            )))
        }
        Command::Exact(ExactCommand::Avoiders { family, depth }) => {
            let id = parse_family(family)?;
            let seq = id.build(*depth).map_err(runtime)?;
            let table = count_avoiders(&seq, *depth).map_err(runtime)?;
            Ok(Outcome::report(render(format, || table.to_json(), || table.to_csv())))
        }
        Command::Exact(ExactCommand::Sums { pi, depth }) => {
            let pi = parse_pi(pi)?;
            let report = bc_partial_sums::<ExactScalar>(&pi, *depth);
            Ok(Outcome::report(render(format, || report.to_json(), || report.to_csv())))
        }
        Command::Exact(ExactCommand::Stirling { n }) => {
            let r = stirling_ratio(*n).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Outcome::report(render(
                format,
                || r.to_json(),
                || {
                    write_csv(
                        &["n", "central_binomial", "ratio", "deviation_from_one"],
                        [vec![
                            r.n.to_string(),
                            r.central_binomial.to_string(),
                            r.ratio.significant(guesslab::exact::STIRLING_DIGITS),
                            sig17(r.deviation()),
                        ]],
                    )
                },
            )))
        }
        Command::Mc(McCommand::Hits { family, depth, samples }) => {
            let id = parse_family(family)?;
            let seq = id.build(*depth).map_err(runtime)?;
            let stats = sample_hits(&seq, *depth, *samples, seed).map_err(runtime)?;
            Ok(Outcome::report(render(
                format,
                || {
                    let freq: Vec<String> = (0..=*depth).map(|n| sig17(stats.level_frequency(n))).collect();
                    json!({
                        "family": stats.family,
                        "depth": stats.depth,
                        "samples": stats.samples,
                        "seed": stats.seed,
                        "mean_hits": sig17(stats.mean_hits()),
                        "at_least": stats.at_least.iter().map(|&p| sig17(p)).collect::<Vec<_>>(),
                        "level_hits": stats.level_hits,
                        "level_frequency": freq,
                        "histogram": stats.histogram(),
                    })
                },
                || stats.histogram_csv(),
            )))
        }
        Command::Mc(McCommand::RandomFamilies { pi, depth, families, words }) => {
            let pi = parse_pi(pi)?;
            let s = estimate_random_families(&pi, *depth, *families, *words, seed).map_err(runtime)?;
            Ok(Outcome::report(render(
                format,
                || s.to_json(),
                || {
                    write_csv(
                        &["family_seed", "at_least_one", "mean_hits", "exact_at_least_one"],
                        s.families.iter().map(|f| {
                            vec![
                                f.family_seed.to_string(),
                                sig17(f.at_least_one),
                                sig17(f.mean_hits),
                                f.exact_at_least_one.map(sig17).unwrap_or_default(),
                            ]
                        }),
                    )
                },
            )))
        }
        Command::Walk(a) => {
            if !(1..=3).contains(&a.dim) {
                return Err(Failure::Usage(format!("--dim must be 1, 2 or 3, got {}", a.dim)));
            }
            let stats = simulate_recurrence(a.dim, a.steps, a.walks, seed).map_err(runtime)?;
            let report = if a.return_times {
                match format {
                    Format::Csv => stats.return_times_csv(),
                    Format::Json => json_text(&json!({
                        "summary": stats.to_json(),
                        "first_return": stats.first_return,
                        "returns": stats.returns,
                    })),
                }
            } else {
                render(
                    format,
                    || stats.to_json(),
                    || {
                        write_csv(
                            &["dim", "walks", "steps", "seed", "return_fraction", "mean_returns"],
                            [vec![
                                stats.dim.to_string(),
                                stats.walks.to_string(),
                                stats.steps.to_string(),
                                stats.seed.to_string(),
                                sig17(stats.return_fraction()),
                                sig17(stats.mean_returns()),
                            ]],
                        )
                    },
                )
            };
            Ok(Outcome::report(report))
        }
        Command::Tree(TreeCommand::Build { stages, pi, horizon }) => {
            let mode = match pi {
                Some(id) => TreeMode::Given {
                    pi: parse_pi(id)?,
                    horizon: *horizon,
                },
                None => TreeMode::Induced,
            };
            let tree = build_tree(*stages, mode).map_err(runtime)?;
            let verdict = verify_tree(&tree);
            let report = render(
                format,
                || json!({ "tree": tree.to_json(), "verification": verdict }),
                || {
                    write_csv(
                        &["property", "passed", "counterexample"],
                        verdict.checks.iter().map(|c| {
                            vec![
                                c.property.to_string(),
                                c.passed.to_string(),
                                c.counterexample.clone().unwrap_or_default().replace(',', ";"),
                            ]
                        }),
                    )
                },
            );
            Ok(Outcome {
                report,
                verdict: Some(format!("tree verified: {}", verdict.all_passed())),
                failed: !verdict.all_passed(),
            })
        }
        Command::Tree(TreeCommand::Witness { stages }) => {
            let tree = build_tree(*stages, TreeMode::Induced).map_err(runtime)?;
            let witness = build_meager_witness(&tree).map_err(runtime)?;
            let ok = verify_witness(&tree, &witness);
            let report = render(
                format,
                || json!({ "stages": stages, "verified": ok, "witness": witness.to_json() }),
                || {
                    write_csv(
                        &["index", "start", "len", "bits"],
                        witness.blocks.iter().map(|b| {
                            vec![b.index.to_string(), b.start.to_string(), b.len.to_string(), b.bits.to_string()]
                        }),
                    )
                },
            );
            Ok(Outcome {
                report,
                verdict: Some(format!("witness verified: {ok}")),
                failed: !ok,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("guesslab: {}", f.message());
            return ExitCode::from(f.code());
        }
    };
    // Verdict-producing commands print the verdict and only write the
    // report when asked to.
    match (&cli.out, &outcome.verdict) {
        (Some(path), _) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("guesslab: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        (None, None) => print!("{}", outcome.report),
        (None, Some(_)) => {}
    }
    if let Some(v) = &outcome.verdict {
        println!("{v}");
    }
    if outcome.failed {
        eprintln!("guesslab: verification failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
