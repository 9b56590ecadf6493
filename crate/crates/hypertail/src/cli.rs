//! Command-line front end.
//!
//! Flags mirror one fixed notation: -N population, -M whites, -n draws,
//! -i count, -k threshold; `--help` carries the translation table. Output
//! goes to stdout in text, JSON, or CSV; exit codes are 0 for success, 2
//! for invalid parameters or usage, 3 when a verification sweep found
//! soundness violations.

use std::ffi::OsString;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use serde_json::json;

use crate::bounds::{self, BoundForm, TailSide, TailSpec};
use crate::dist::{Hypergeometric, LogFactorials};
use crate::error::Error;
use crate::numeric;
use crate::report::{self, GridSpec};
use crate::sampler::{self, SampleConfig};

/// Largest population the exact backend handles by default; beyond it the
/// log backend is selected automatically.
pub const EXACT_BACKEND_DEFAULT_LIMIT: u64 = 10_000;

/// Largest population the log-factorial table is willing to cover
/// (one f64 per integer up to N).
const LOG_BACKEND_LIMIT: u64 = 10_000_000;

const NOTATION: &str = "\
Notation, fixed throughout (every command and report uses these names):
  N   total number of balls in the urn          -N, --population
  M   number of white balls among them          -M, --whites
  n   number of balls drawn, without replacement -n, --draws
  i   white balls among the n drawn             -i, --count
  k   tail threshold on i                       -k, --threshold

The white count i follows the hypergeometric distribution. `tail` sums the
exact PMF (upper: Pr[i >= k]; lower: Pr[i <= k]). `bound` evaluates the
Hoeffding-style analytic ceilings at deviation t, where the upper threshold
is k = (M/N + t)n and the lower threshold is k = (M/N - t)n. `verify`
sweeps a parameter grid and certifies exact <= hoeffding <= relaxed.";

#[derive(Parser)]
#[command(
    name = "hypertail",
    version,
    about = "Exact hypergeometric probabilities, Hoeffding-style tail bounds, and a verification harness",
    long_about = None,
    after_help = NOTATION
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Evaluation backend for pmf/tail; default: exact for N <= 10000, log above
    #[arg(long, global = true, value_enum)]
    backend: Option<Backend>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    /// Arbitrary-precision rational arithmetic (authoritative)
    Exact,
    /// f64 log-factorial arithmetic (for large N)
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Upper,
    Lower,
}

impl Side {
    fn tail_side(self) -> TailSide {
        match self {
            Side::Upper => TailSide::Upper,
            Side::Lower => TailSide::Lower,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Hoeffding,
    Relaxed,
}

impl Form {
    fn bound_form(self) -> BoundForm {
        match self {
            Form::Hoeffding => BoundForm::Hoeffding,
            Form::Relaxed => BoundForm::Relaxed,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Form::Hoeffding => "hoeffding",
            Form::Relaxed => "relaxed",
        }
    }
}

#[derive(Args)]
struct UrnArgs {
    /// Total balls in the urn (N)
    #[arg(short = 'N', long = "population")]
    population: u64,

    /// White balls (M)
    #[arg(short = 'M', long = "whites")]
    whites: u64,

    /// Balls drawn without replacement (n)
    #[arg(short = 'n', long = "draws")]
    draws: u64,
}

impl UrnArgs {
    fn params(&self) -> Result<Hypergeometric, Error> {
        Hypergeometric::new(self.population, self.whites, self.draws)
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("deviation").required(true).args(["t", "threshold"])))]
struct BoundArgs {
    #[command(flatten)]
    urn: UrnArgs,

    /// Exact deviation t (a/b, integer, or decimal), threshold k = (M/N+t)n
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,

    /// Integer threshold k; the deviation is derived as t = k/n - M/N
    /// (upper) or M/N - k/n (lower)
    #[arg(short = 'k', long = "threshold", allow_negative_numbers = true)]
    threshold: Option<i64>,

    /// Which tail to bound
    #[arg(long, value_enum, default_value = "upper")]
    side: Side,

    /// Which analytic form to evaluate
    #[arg(long, value_enum, default_value = "hoeffding")]
    form: Form,
}

#[derive(Subcommand)]
enum Command {
    /// Probability of drawing exactly i white balls
    Pmf {
        #[command(flatten)]
        urn: UrnArgs,
        /// White count being asked about (i)
        #[arg(short = 'i', long = "count")]
        count: u64,
    },
    /// Expected white count n*M/N, exactly
    Mean {
        #[command(flatten)]
        urn: UrnArgs,
    },
    /// Variance n*M*(N-M)*(N-n)/(N^2*(N-1)), exactly
    Var {
        #[command(flatten)]
        urn: UrnArgs,
    },
    /// Tail probability: Pr[i >= k] (upper) or Pr[i <= k] (lower)
    Tail {
        #[command(flatten)]
        urn: UrnArgs,
        /// Integer threshold (k)
        #[arg(short = 'k', long = "threshold", allow_negative_numbers = true)]
        threshold: i64,
        /// Which tail to sum
        #[arg(long, value_enum, default_value = "upper")]
        side: Side,
    },
    /// Analytic ceiling on a tail probability at deviation t
    Bound(BoundArgs),
    /// Sweep a grid of (N, M, n, k) and certify exact <= hoeffding <= relaxed
    Verify {
        /// Smallest population to sweep
        #[arg(long = "N-min")]
        n_min: u64,
        /// Largest population to sweep
        #[arg(long = "N-max")]
        n_max: u64,
        /// Which tail to verify
        #[arg(long, value_enum, default_value = "upper")]
        side: Side,
        /// Write the report here instead of stdout (summary still printed)
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Seeded Monte Carlo estimate of the upper tail Pr[i >= k]
    Sample {
        #[command(flatten)]
        urn: UrnArgs,
        /// Integer threshold (k)
        #[arg(short = 'k', long = "threshold", allow_negative_numbers = true)]
        threshold: i64,
        /// PRNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of replicates
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
    },
}

/// Parses and runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

type CliResult = Result<i32, Box<dyn std::error::Error>>;

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn dispatch(cli: Cli) -> CliResult {
    let format = cli.format;
    match cli.command {
        Command::Pmf { urn, count } => pmf_cmd(&urn, count, cli.backend, format),
        Command::Mean { urn } => moment_cmd(&urn, "mean", format),
        Command::Var { urn } => moment_cmd(&urn, "variance", format),
        Command::Tail {
            urn,
            threshold,
            side,
        } => tail_cmd(&urn, threshold, side, cli.backend, format),
        Command::Bound(args) => bound_cmd(&args, format),
        Command::Verify {
            n_min,
            n_max,
            side,
            out,
        } => verify_cmd(n_min, n_max, side, out, format),
        Command::Sample {
            urn,
            threshold,
            seed,
            reps,
        } => sample_cmd(&urn, threshold, seed, reps, format),
    }
}

fn pick_backend(choice: Option<Backend>, population: u64) -> Result<Backend, Error> {
    let backend = choice.unwrap_or(if population <= EXACT_BACKEND_DEFAULT_LIMIT {
        Backend::Exact
    } else {
        Backend::Log
    });
    if backend == Backend::Log && population > LOG_BACKEND_LIMIT {
        return Err(Error::PopulationTooLarge {
            population,
            limit: LOG_BACKEND_LIMIT,
        });
    }
    Ok(backend)
}

fn pmf_cmd(urn: &UrnArgs, count: u64, backend: Option<Backend>, format: Format) -> CliResult {
    let params = urn.params()?;
    match pick_backend(backend, params.population())? {
        Backend::Exact => {
            let p = params.pmf(count);
            match format {
                Format::Text => println!("{} = {}", p.fraction(), fmt_f64(p.to_f64())),
                Format::Json => println!(
                    "{}",
                    json!({
                        "N": params.population(),
                        "M": params.whites(),
                        "n": params.draws(),
                        "i": count,
                        "backend": "exact",
                        "pmf_fraction": p.fraction(),
                        "pmf": p.to_f64(),
                    })
                ),
                Format::Csv => {
                    println!("N,M,n,i,pmf_fraction,pmf");
                    println!(
                        "{},{},{},{},{},{}",
                        params.population(),
                        params.whites(),
                        params.draws(),
                        count,
                        p.fraction(),
                        fmt_f64(p.to_f64())
                    );
                }
            }
        }
        Backend::Log => {
            let table = LogFactorials::up_to(params.population());
            let lp = table.pmf_log(&params, count);
            match format {
                Format::Text => {
                    println!("{} (ln {})", fmt_f64(lp.prob()), fmt_f64(lp.ln_value()))
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "N": params.population(),
                        "M": params.whites(),
                        "n": params.draws(),
                        "i": count,
                        "backend": "log",
                        "pmf": lp.prob(),
                        "ln_pmf": lp.ln_value(),
                    })
                ),
                Format::Csv => {
                    println!("N,M,n,i,pmf,ln_pmf");
                    println!(
                        "{},{},{},{},{},{}",
                        params.population(),
                        params.whites(),
                        params.draws(),
                        count,
                        fmt_f64(lp.prob()),
                        fmt_f64(lp.ln_value())
                    );
                }
            }
        }
    }
    Ok(0)
}

fn moment_cmd(urn: &UrnArgs, which: &str, format: Format) -> CliResult {
    let params = urn.params()?;
    let value = if which == "mean" {
        params.mean()
    } else {
        params.variance()
    };
    let fraction = numeric::format_ratio(&value);
    let float = numeric::ratio_to_f64(&value);
    match format {
        Format::Text => println!("{fraction} = {}", fmt_f64(float)),
        Format::Json => {
            let mut obj = json!({
                "N": params.population(),
                "M": params.whites(),
                "n": params.draws(),
            });
            let map = obj.as_object_mut().expect("object literal");
            map.insert(format!("{which}_fraction"), json!(fraction));
            map.insert(which.to_string(), json!(float));
            println!("{obj}");
        }
        Format::Csv => {
            println!("N,M,n,{which}_fraction,{which}");
            println!(
                "{},{},{},{},{}",
                params.population(),
                params.whites(),
                params.draws(),
                fraction,
                fmt_f64(float)
            );
        }
    }
    Ok(0)
}

fn tail_cmd(
    urn: &UrnArgs,
    threshold: i64,
    side: Side,
    backend: Option<Backend>,
    format: Format,
) -> CliResult {
    let params = urn.params()?;
    match pick_backend(backend, params.population())? {
        Backend::Exact => {
            let p = match side {
                Side::Upper => params.upper_tail(threshold),
                Side::Lower => params.lower_tail(threshold),
            };
            match format {
                Format::Text => println!("{} = {}", p.fraction(), fmt_f64(p.to_f64())),
                Format::Json => println!(
                    "{}",
                    json!({
                        "N": params.population(),
                        "M": params.whites(),
                        "n": params.draws(),
                        "k": threshold,
                        "side": side.name(),
                        "backend": "exact",
                        "tail_fraction": p.fraction(),
                        "tail": p.to_f64(),
                    })
                ),
                Format::Csv => {
                    println!("N,M,n,k,side,tail_fraction,tail");
                    println!(
                        "{},{},{},{},{},{},{}",
                        params.population(),
                        params.whites(),
                        params.draws(),
                        threshold,
                        side.name(),
                        p.fraction(),
                        fmt_f64(p.to_f64())
                    );
                }
            }
        }
        Backend::Log => {
            let table = LogFactorials::up_to(params.population());
            let lp = table.tail_log(&params, threshold, side == Side::Lower);
            match format {
                Format::Text => {
                    println!("{} (ln {})", fmt_f64(lp.prob()), fmt_f64(lp.ln_value()))
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "N": params.population(),
                        "M": params.whites(),
                        "n": params.draws(),
                        "k": threshold,
                        "side": side.name(),
                        "backend": "log",
                        "tail": lp.prob(),
                        "ln_tail": lp.ln_value(),
                    })
                ),
                Format::Csv => {
                    println!("N,M,n,k,side,tail,ln_tail");
                    println!(
                        "{},{},{},{},{},{},{}",
                        params.population(),
                        params.whites(),
                        params.draws(),
                        threshold,
                        side.name(),
                        fmt_f64(lp.prob()),
                        fmt_f64(lp.ln_value())
                    );
                }
            }
        }
    }
    Ok(0)
}

fn bound_cmd(args: &BoundArgs, format: Format) -> CliResult {
    let params = args.urn.params()?;
    let side = args.side;
    // exactly one of --t and -k is present (enforced by the arg group)
    let (t, threshold): (BigRational, Option<i64>) = match (&args.t, args.threshold) {
        (Some(t_str), None) => (numeric::parse_ratio(t_str)?, None),
        (None, Some(k)) => {
            let spec = match side {
                Side::Upper => TailSpec::upper(params, k),
                Side::Lower => TailSpec::lower(params, k),
            }?;
            (spec.t().clone(), Some(k))
        }
        _ => unreachable!("clap group guarantees exactly one deviation source"),
    };
    let form = args.form.bound_form();
    let bound = match side {
        Side::Upper => bounds::upper_deviation_bound(&params, &t, form),
        Side::Lower => bounds::lower_deviation_bound(&params, &t, form),
    };
    let t_fraction = numeric::format_ratio(&t);
    let t_float = numeric::ratio_to_f64(&t);
    match format {
        Format::Text => {
            if bound.vacuous {
                println!("{} (vacuous: t < 0)", fmt_f64(bound.value));
            } else {
                println!("{}", fmt_f64(bound.value));
            }
        }
        Format::Json => println!(
            "{}",
            json!({
                "N": params.population(),
                "M": params.whites(),
                "n": params.draws(),
                "side": side.name(),
                "form": args.form.name(),
                "k": threshold,
                "t_fraction": t_fraction,
                "t": t_float,
                "bound": bound.value,
                "vacuous": bound.vacuous,
            })
        ),
        Format::Csv => {
            println!("N,M,n,side,form,k,t_fraction,t,bound,vacuous");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                params.population(),
                params.whites(),
                params.draws(),
                side.name(),
                args.form.name(),
                threshold.map_or(String::new(), |k| k.to_string()),
                t_fraction,
                fmt_f64(t_float),
                fmt_f64(bound.value),
                bound.vacuous
            );
        }
    }
    Ok(0)
}

fn verify_cmd(
    n_min: u64,
    n_max: u64,
    side: Side,
    out: Option<std::path::PathBuf>,
    format: Format,
) -> CliResult {
    let spec = GridSpec::exhaustive(n_min, n_max, side.tail_side())?;
    let rpt = report::grid_verify(&spec);
    let summary_text = report::summary_to_text(&rpt, side.tail_side());
    let rendered = match format {
        Format::Text => summary_text.clone(),
        Format::Json => report::report_to_json(&rpt),
        Format::Csv => report::report_to_csv(&rpt),
    };
    match out {
        Some(path) => {
            std::fs::write(&path, rendered)?;
            print!("{summary_text}");
        }
        None => {
            print!("{rendered}");
            if format == Format::Csv {
                eprint!("{summary_text}");
            }
        }
    }
    Ok(if rpt.summary.violations > 0 { 3 } else { 0 })
}

fn sample_cmd(urn: &UrnArgs, threshold: i64, seed: u64, reps: u64, format: Format) -> CliResult {
    let params = urn.params()?;
    let config = SampleConfig::new(seed, reps)?;
    let est = sampler::estimate_upper_tail(&params, threshold, &config);
    match format {
        Format::Text => println!(
            "estimate = {} (std error {}, replicates {})",
            fmt_f64(est.point_estimate),
            fmt_f64(est.std_error),
            est.replicates
        ),
        Format::Json => println!(
            "{}",
            json!({
                "N": params.population(),
                "M": params.whites(),
                "n": params.draws(),
                "k": threshold,
                "seed": seed,
                "replicates": est.replicates,
                "estimate": est.point_estimate,
                "std_error": est.std_error,
            })
        ),
        Format::Csv => {
            println!("N,M,n,k,seed,replicates,estimate,std_error");
            println!(
                "{},{},{},{},{},{},{},{}",
                params.population(),
                params.whites(),
                params.draws(),
                threshold,
                seed,
                est.replicates,
                fmt_f64(est.point_estimate),
                fmt_f64(est.std_error)
            );
        }
    }
    Ok(0)
}
