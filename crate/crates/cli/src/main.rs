use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use migrate_sched::acceptance::{run_all, run_all_with};
use migrate_sched::adversary::sweep_adversary;
use migrate_sched::alpha::{solve_alpha_with, HarmonicTable};
use migrate_sched::batch::{exit_code, run_batch, write_csv, AlgSpec, EXIT_ORACLE_GUARD, EXIT_VIOLATION};
use migrate_sched::generate::{generate, GenKind, GenSpec};
use migrate_sched::model::{read_trace, write_trace};
use migrate_sched::num::{fmt_decimal, fmt_fraction, parse_rational};
use migrate_sched::{opt_makespan, Error, Instance, Rational, RunOptions, ScheduleState};

#[derive(Parser)]
#[command(name = "migrate-sched", version, about = "Online makespan scheduling with bounded job migration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print alpha_m and mu_m as CSV
    Alpha {
        #[arg(long, conflicts_with = "table")]
        m: Option<usize>,
        /// Print every m from 2 up to this value
        #[arg(long)]
        table: Option<usize>,
    },
    /// Run one algorithm on an instance file and print the report as JSON
    Run {
        #[arg(long, default_value = "opt")]
        alg: AlgSpec,
        /// Budget parameter for `--alg c`
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
        /// Write the event log (JSON lines) here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Simulate with f64 sizes instead of exact fractions
        #[arg(long)]
        float: bool,
    },
    /// Exact optimum makespan of an instance file
    Opt {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Play the lower-bound adversary and print the outcomes as JSON
    Adversary {
        #[arg(long, default_value = "opt")]
        alg: AlgSpec,
        #[arg(long)]
        m: usize,
        /// Phase-one job counts, each a multiple of m
        #[arg(long, value_delimiter = ',', default_value = "100,1000")]
        nprime: Vec<usize>,
        #[arg(long, default_value = "1/1000")]
        eps: String,
    },
    /// Generate an instance file
    Gen {
        #[command(flatten)]
        spec: GenArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several algorithms on several instances and print CSV
    Batch {
        #[arg(long, value_delimiter = ',', default_value = "opt,c=5/3,list")]
        alg: Vec<AlgSpec>,
        /// Instance files; when absent, instances are generated
        #[arg(long, num_args = 1..)]
        instances: Vec<PathBuf>,
        #[command(flatten)]
        spec: GenArgs,
        /// Number of generated instances, seeds 0..seeds
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Verify {
        /// Smaller instance counts; the suite will not meet its size thresholds
        #[arg(long)]
        quick: bool,
    },
    /// Rebuild a schedule from an instance and an event log
    Replay {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Compute the exact optimum when the instance is small enough
    #[arg(long)]
    check: bool,
    /// Stop at the first invariant violation
    #[arg(long)]
    strict: bool,
    /// Fail with exit code 3 when the instance is too large for the oracle
    #[arg(long)]
    require_opt: bool,
}

impl CheckArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            check: self.check || self.require_opt,
            strict: self.strict,
            require_opt: self.require_opt,
            ..RunOptions::default()
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "uniform")]
    kind: GenKind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    max: u32,
    #[arg(long, default_value_t = 4)]
    den_max: u32,
}

impl GenArgs {
    fn spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            max: self.max,
            den_max: self.den_max,
            ..GenSpec::new(self.kind, self.n, self.m, seed)
        }
    }
}

fn read_instance(path: &Path) -> anyhow::Result<Instance<Rational>> {
    Instance::read_from(path).with_context(|| format!("reading {}", path.display()))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(text: &str) -> io::Result<()> {
    writeln!(io::stdout().lock(), "{text}")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Alpha { m, table } => {
            let mut out = csv::Writer::from_writer(io::stdout().lock());
            out.write_record(["m", "alpha_num", "alpha_den", "alpha_dec", "mu"])?;
            let ms: Vec<usize> = match (m, table) {
                (Some(m), _) => vec![m],
                (None, Some(max)) => (2..=max).collect(),
                (None, None) => bail!("pass --m or --table"),
            };
            let harmonics = HarmonicTable::up_to(ms.iter().copied().max().unwrap_or(2));
            for m in ms {
                let p = solve_alpha_with(&harmonics, m)?;
                out.write_record([
                    m.to_string(),
                    p.alpha.numer().to_string(),
                    p.alpha.denom().to_string(),
                    fmt_decimal(&p.alpha, 10),
                    p.mu.to_string(),
                ])?;
            }
            out.flush()?;
            Ok(0)
        }
        Command::Run {
            mut alg,
            c,
            instance,
            check,
            trace,
            float,
        } => {
            if let Some(c) = c {
                alg = format!("c={c}").parse()?;
            }
            let inst = read_instance(&instance)?;
            let opts = check.options();
            let (report, events) = if float {
                let out = alg.run(&inst.to_float(), &opts)?;
                (out.report, out.schedule.events)
            } else {
                let out = alg.run(&inst, &opts)?;
                (out.report, out.schedule.events)
            };
            if let Some(path) = trace {
                write_trace(&events, File::create(&path)?)?;
            }
            emit(&serde_json::to_string_pretty(&report)?)?;
            Ok(if report.ok() { 0 } else { EXIT_VIOLATION as u8 })
        }
        Command::Opt { instance } => {
            let inst = read_instance(&instance)?;
            let opt = opt_makespan(&inst)?;
            emit(&fmt_fraction(&opt))?;
            Ok(0)
        }
        Command::Adversary { alg, m, nprime, eps } => {
            let eps = parse_rational(&eps)?;
            let table = sweep_adversary(|| alg.scheduler(m), &nprime, &eps)?;
            emit(&serde_json::to_string_pretty(&table)?)?;
            Ok(0)
        }
        Command::Gen { spec, seed, out } => {
            let inst = generate(&spec.spec(seed))?;
            output(out.as_deref())?.write_all(inst.to_text().as_bytes())?;
            Ok(0)
        }
        Command::Batch {
            alg,
            instances,
            spec,
            seeds,
            check,
            out,
        } => {
            let inputs = if instances.is_empty() {
                (0..seeds)
                    .map(|s| {
                        let g = spec.spec(s);
                        Ok((g.label(), generate(&g)?))
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?
            } else {
                instances
                    .iter()
                    .map(|p| Ok((p.display().to_string(), read_instance(p)?)))
                    .collect::<anyhow::Result<Vec<_>>>()?
            };
            let rows = run_batch(&alg, &inputs, &check.options())?;
            write_csv(&rows, output(out.as_deref())?)?;
            Ok(exit_code(&rows) as u8)
        }
        Command::Verify { quick } => {
            let verdicts = if quick { run_all_with(100, 12, 500) } else { run_all() };
            for v in &verdicts {
                emit(&v.to_string())?;
            }
            let failed = verdicts.iter().filter(|v| !v.passed).count();
            emit(&format!("{} of {} criteria passed", verdicts.len() - failed, verdicts.len()))?;
            Ok(if failed == 0 { 0 } else { EXIT_VIOLATION as u8 })
        }
        Command::Replay { instance, trace } => {
            let inst = read_instance(&instance)?;
            let file = File::open(&trace).with_context(|| format!("opening {}", trace.display()))?;
            let events = read_trace(BufReader::new(file))?;
            let state = ScheduleState::replay(inst.m, &inst.jobs, &events)?;
            let summary = serde_json::json!({
                "m": inst.m,
                "n": inst.n(),
                "makespan": fmt_fraction(&state.makespan()),
                "migrations": state.migrations(),
                "loads": state.loads().iter().map(fmt_fraction).collect::<Vec<_>>(),
            });
            emit(&serde_json::to_string_pretty(&summary)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::OracleGuard { .. }) => ExitCode::from(EXIT_ORACLE_GUARD as u8),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
