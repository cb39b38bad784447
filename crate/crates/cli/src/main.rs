use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ecmoments::bias::HalfExponent;
use ecmoments::closed_form::verify_family;
use ecmoments::discovery::{discover, summarize, FitMode, Verdict};
use ecmoments::modular::PrimeList;
use ecmoments::run::{group_by_family, run_moments_with_progress, run_report, RunConfig};
use ecmoments::store::read_records;
use ecmoments::trace::{moment_sums, point_count_oracle, trace_of_fiber, MomentRecord, DEFAULT_MOMENT};
use ecmoments::{CurveFamily, LegendreTable};

const EXIT_INVALID: u8 = 1;
const EXIT_MISMATCH: u8 = 2;

/// Moments of Frobenius traces in one-parameter families of elliptic curves.
#[derive(Parser)]
#[command(name = "ecmoments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute S1..S{rmax} for every family and prime into OUT/moments.csv.
    Moments(Common),
    /// Bias, block, rank and Catalan statistics from a moments CSV.
    Report {
        #[command(flatten)]
        common: Common,
        /// Moments CSV; defaults to OUT/moments.csv.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Fit S2 = p^2 + a p + b per congruence class.
    Discover {
        #[command(flatten)]
        common: Common,
        /// Read S2 from this CSV instead of computing it.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Use every prime of a class, starting with the first.
        #[arg(long)]
        all_primes: bool,
    },
    /// Compare S1 and S2 with the closed forms of the template families.
    Verify(Common),
    /// Cross-check traces against brute-force point counts.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Values of t checked per prime; 0 checks all of them.
        #[arg(long, default_value_t = 8)]
        samples: u64,
    },
}

#[derive(Args)]
struct Common {
    /// Family definition file; defaults to the built-in corpus.
    #[arg(long)]
    families: Option<PathBuf>,
    /// First prime index (p_1 = 2).
    #[arg(long, default_value_t = 3)]
    start: usize,
    /// Last prime index, inclusive.
    #[arg(long, default_value_t = 102)]
    end: usize,
    #[arg(long, default_value_t = DEFAULT_MOMENT)]
    rmax: usize,
    #[arg(long, default_value_t = 50)]
    block: usize,
    /// Exponents of 2, 3 and 5 in the discovery modulus.
    #[arg(long, default_value = "2,0,0", value_parser = parse_modulus)]
    modulus: (u32, u32, u32),
    /// Normalization of the second moment residual: 1 or 3/2.
    #[arg(long, default_value = "3/2")]
    exponent: HalfExponent,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    /// Keep rows already present in OUT/moments.csv.
    #[arg(long)]
    resume: bool,
}

fn parse_modulus(s: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [e, f, g] = parts[..] else {
        return Err(format!("expected e,f,g, got `{s}`"));
    };
    let num = |x: &str| x.parse::<u32>().map_err(|_| format!("`{x}` is not a non-negative integer"));
    Ok((num(e)?, num(f)?, num(g)?))
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            families: self.families.clone(),
            start: self.start,
            end: self.end,
            r_max: self.rmax,
            block_size: self.block,
            modulus: self.modulus,
            exponent: self.exponent,
            out_dir: self.out.clone(),
            threads: self.threads,
            resume: self.resume,
            ..RunConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(command: Command) -> ecmoments::Result<ExitCode> {
    match command {
        Command::Moments(common) => {
            let config = common.config();
            config.validate()?;
            let families = config.load_families()?;
            let path = run_moments_with_progress(&config, &families, |done, total| {
                eprint!("\r{done}/{total} records");
            })?;
            eprintln!();
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { common, csv } => {
            let config = common.config();
            config.validate()?;
            let families = config.load_families()?;
            let csv = csv.unwrap_or_else(|| config.moments_path());
            let report = run_report(&csv, &config, &families)?;
            print!("{}", report.text);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Discover { common, csv, all_primes } => {
            let config = common.config();
            config.validate()?;
            let mode = if all_primes {
                FitMode::Robust { min_prime_index: 0 }
            } else {
                FitMode::default()
            };
            let groups = match csv {
                Some(path) => group_by_family(&read_records(&path)?),
                None => {
                    let families = config.load_families()?;
                    compute(&config, &families, 2)?
                }
            };
            let (e, f, g) = config.modulus;
            let mut falsified = false;
            for (name, records) in groups {
                let fits = discover(&records, e, f, g, mode)?;
                let verdict = summarize(&fits);
                println!("== {name} ==");
                for fit in &fits {
                    println!("{fit}");
                }
                println!("verdict: {verdict:?}");
                falsified |= verdict == Verdict::SomeFalsified;
            }
            Ok(exit_for(falsified))
        }
        Command::Verify(common) => {
            let config = common.config();
            config.validate()?;
            let families: Vec<CurveFamily> = config
                .load_families()?
                .into_iter()
                .filter(|f| {
                    let known = f.template().is_some();
                    if !known {
                        eprintln!("skipping {}: no closed form", f.name());
                    }
                    known
                })
                .collect();
            let mut mismatch = false;
            for (family, (_, records)) in families.iter().zip(compute(&config, &families, 2)?) {
                let report = verify_family(family, &records)?;
                for c in report.failures() {
                    mismatch = true;
                    println!(
                        "MISMATCH {} p={} (index {}): S1={} expected {}, S2={} expected {}",
                        report.family, c.p, c.prime_index, c.s1, c.prediction.s1, c.s2, c.prediction.s2
                    );
                }
                let status = if report.all_passed() { "ok" } else { "FAILED" };
                println!(
                    "{}: {} [{}], {} primes checked, {status}",
                    report.family,
                    report.template,
                    template_kind(family),
                    report.checked()
                );
            }
            Ok(exit_for(mismatch))
        }
        Command::Oracle { common, samples } => {
            let config = common.config();
            config.validate()?;
            let families = config.load_families()?;
            let primes = PrimeList::first(config.end);
            let pool = config.thread_pool()?;
            let mut mismatch = false;
            for family in &families {
                let reduced: Vec<_> = primes.range(config.start, config.end).collect();
                let failures: Vec<String> = pool.install(|| {
                    reduced
                        .par_iter()
                        .map(|&(_, p)| oracle_check(family, p, samples))
                        .collect::<ecmoments::Result<Vec<_>>>()
                })?
                .into_iter()
                .flatten()
                .collect();
                for f in &failures {
                    println!("MISMATCH {}: {f}", family.name());
                }
                mismatch |= !failures.is_empty();
                let status = if failures.is_empty() { "ok" } else { "FAILED" };
                println!("{}: {} primes, {status}", family.name(), reduced.len());
            }
            Ok(exit_for(mismatch))
        }
    }
}

fn exit_for(mismatch: bool) -> ExitCode {
    if mismatch {
        ExitCode::from(EXIT_MISMATCH)
    } else {
        ExitCode::SUCCESS
    }
}

fn template_kind(family: &CurveFamily) -> &'static str {
    use ecmoments::Template::*;
    match family.template() {
        Some(Linear { .. }) => "linear",
        Some(TwistedLinear { .. }) => "twisted",
        Some(Quartic) => "quartic",
        None => "none",
    }
}

/// Moment records per family, in family order.
fn compute(
    config: &RunConfig,
    families: &[CurveFamily],
    r_max: usize,
) -> ecmoments::Result<Vec<(String, Vec<MomentRecord>)>> {
    let primes = PrimeList::first(config.end);
    let pool = config.thread_pool()?;
    families
        .iter()
        .map(|fam| {
            let records = pool.install(|| {
                primes
                    .range(config.start, config.end)
                    .collect::<Vec<_>>()
                    .par_iter()
                    .map(|&(i, p)| moment_sums(fam, i, p, r_max))
                    .collect::<ecmoments::Result<Vec<_>>>()
            })?;
            Ok((fam.name().to_string(), records))
        })
        .collect()
}

/// Spreads `samples` values of `t` over `0..p` and compares each trace
/// with `p` minus the affine point count.
fn oracle_check(family: &CurveFamily, p: u64, samples: u64) -> ecmoments::Result<Vec<String>> {
    let table = LegendreTable::new(p)?;
    let reduced = family.reduce_mod(p)?;
    let ts: Vec<u64> = if samples == 0 || samples >= p {
        (0..p).collect()
    } else {
        let mut ts: Vec<u64> = (0..samples).map(|k| k * p / samples).collect();
        ts.dedup();
        ts
    };
    let mut failures = Vec::new();
    for t in ts {
        let fiber = reduced.fiber(t);
        let trace = trace_of_fiber(&fiber, &table);
        let count = point_count_oracle(&fiber) as i64;
        if trace != p as i64 - count {
            failures.push(format!("p={p} t={t}: trace {trace}, p - count = {}", p as i64 - count));
        }
    }
    Ok(failures)
}
