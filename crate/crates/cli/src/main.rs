use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use probaccept::commands::{self, AcceptPolicy, Globals, Input, LotteryKind, Order};
use probaccept::CliError;
use probaccept_core::acceptance::{OrderedPolicy, DEFAULT_SEED};
use probaccept_core::logic::DEFAULT_CAP;
use probaccept_core::rational::parse_rational;
use probaccept_core::stat_tests::{BinomialTestSpec, Sidedness};
use probaccept_core::Rational;

/// Probabilistic acceptance over propositional belief bases.
#[derive(Parser)]
#[command(name = "probaccept", version)]
struct Cli {
    /// Accept only above the level instead of at or above it.
    #[arg(long, global = true)]
    strict_threshold: bool,
    /// Seed for sampled orderings.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest set handed to subset enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    max_candidates: usize,
    /// Print JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Threshold,
    Lehrer,
    Cascade,
    Sequential,
    Teng,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderedArg {
    Sequential,
    Teng,
}

#[derive(Clone, Copy, ValueEnum)]
enum SidedArg {
    Two,
    Upper,
    Lower,
}

#[derive(Subcommand)]
enum Command {
    /// Run an acceptance policy over a belief base.
    Accept {
        #[arg(long, value_enum)]
        policy: PolicyArg,
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        /// `natural`, `reverse`, or a comma-separated list of labels
        /// (sequential and teng only).
        #[arg(long)]
        order: Option<String>,
        file: PathBuf,
    },
    /// Run an order-dependent policy over many orderings.
    Extensions {
        #[arg(long, value_enum)]
        policy: OrderedArg,
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        #[arg(long, default_value_t = 5040)]
        max_permutations: usize,
        file: PathBuf,
    },
    /// Generate a lottery belief base.
    Lottery {
        /// Write the file here and print a summary instead.
        #[arg(long, global = true)]
        output: Option<PathBuf>,
        #[command(subcommand)]
        kind: LotteryArg,
    },
    /// Inconsistency diagnostics of the threshold-accepted set.
    Diagnose {
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        file: PathBuf,
    },
    /// Support for the conjunction of premises, or for a conclusion they entail.
    Closure {
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        /// Comma-separated candidate labels.
        #[arg(long, value_delimiter = ',', required = true)]
        premises: Vec<String>,
        #[arg(long)]
        conclusion: Option<String>,
        file: PathBuf,
    },
    /// Binomial tests read as acceptance.
    Stat {
        #[command(subcommand)]
        test: StatArg,
    },
}

#[derive(Subcommand)]
enum LotteryArg {
    Fair {
        #[arg(long)]
        n: usize,
    },
    Biased {
        /// Comma-separated ticket probabilities summing to 1.
        #[arg(long, value_parser = rational, value_delimiter = ',', required = true)]
        weights: Vec<Rational>,
    },
    Independent {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational)]
        p: Rational,
    },
}

#[derive(Subcommand)]
enum StatArg {
    /// Test `p = p0` on a binomial count.
    Binom {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = rational)]
        p0: Rational,
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        #[arg(long, value_enum, default_value = "two")]
        sided: SidedArg,
        #[arg(long, allow_negative_numbers = true)]
        observed: i64,
        #[arg(long, default_value = "H")]
        hypothesis: String,
    },
    /// Combined support for several rejections.
    Combine {
        /// Comma-separated significance levels.
        #[arg(long, value_parser = rational, value_delimiter = ',', required = true)]
        epsilons: Vec<Rational>,
    },
}

enum Output {
    Report(commands::Report),
    Raw(String),
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let globals = Globals {
        strict: cli.strict_threshold,
        seed: cli.seed,
        max_candidates: cli.max_candidates,
    };
    let report = match cli.command {
        Command::Accept {
            policy,
            epsilon,
            order,
            file,
        } => {
            let policy = match policy {
                PolicyArg::Threshold => AcceptPolicy::Threshold,
                PolicyArg::Lehrer => AcceptPolicy::Lehrer,
                PolicyArg::Cascade => AcceptPolicy::Cascade,
                PolicyArg::Sequential => AcceptPolicy::Sequential,
                PolicyArg::Teng => AcceptPolicy::Teng,
            };
            let order = order.as_deref().map(Order::parse);
            commands::accept(&Input::load(&file)?, policy, &epsilon, order.as_ref(), &globals)?
        }
        Command::Extensions {
            policy,
            epsilon,
            max_permutations,
            file,
        } => {
            let policy = match policy {
                OrderedArg::Sequential => OrderedPolicy::Sequential,
                OrderedArg::Teng => OrderedPolicy::Teng,
            };
            commands::extensions(&Input::load(&file)?, policy, &epsilon, max_permutations, &globals)?
        }
        Command::Lottery { output, kind } => {
            let kind = match kind {
                LotteryArg::Fair { n } => LotteryKind::Fair { n },
                LotteryArg::Biased { weights } => LotteryKind::Biased { weights },
                LotteryArg::Independent { n, p } => LotteryKind::Independent { n, p },
            };
            let text = commands::lottery(&kind)?;
            match output {
                None => return Ok(Output::Raw(text)),
                Some(path) => commands::lottery_written(&path, &text, &globals)?,
            }
        }
        Command::Diagnose { epsilon, file } => {
            commands::diagnose(&Input::load(&file)?, &epsilon, &globals)?
        }
        Command::Closure {
            epsilon,
            premises,
            conclusion,
            file,
        } => commands::closure(
            &Input::load(&file)?,
            &epsilon,
            &premises,
            conclusion.as_deref(),
            &globals,
        )?,
        Command::Stat { test } => match test {
            StatArg::Binom {
                n,
                p0,
                epsilon,
                sided,
                observed,
                hypothesis,
            } => {
                let sided = match sided {
                    SidedArg::Two => Sidedness::TwoSided,
                    SidedArg::Upper => Sidedness::Upper,
                    SidedArg::Lower => Sidedness::Lower,
                };
                let spec = BinomialTestSpec::new(n, p0, epsilon, sided)?.named(&hypothesis)?;
                commands::stat_binom(&spec, observed, &globals)?
            }
            StatArg::Combine { epsilons } => commands::stat_combine(&epsilons, &globals)?,
        },
    };
    Ok(Output::Report(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(output) => {
            let text = match output {
                Output::Raw(text) => text,
                Output::Report(r) if json => r.to_json(),
                Output::Report(r) => r.to_text(),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
