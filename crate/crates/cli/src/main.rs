use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use addcomb::experiments::{self, ConvexGenerator};
use addcomb::verify::{self, Config, SUBGROUP_PRIMES};
use addcomb::Exec;
use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "addcomb", version, about = "Identity batteries and experiment scans for additive combinatorics")]
struct Cli {
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity, inequality and subgroup batteries.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Identity trials; the inequality battery runs five times as many.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Override the inequality trial count.
        #[arg(long)]
        inequality_trials: Option<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = SUBGROUP_PRIMES)]
        primes: Vec<u32>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include runtimes in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Energy and sumset statistics of every subgroup of F_p^*.
    SubgroupScan {
        #[arg(long)]
        pmax: u32,
        #[arg(long, default_value_t = 1)]
        tmin: u32,
        #[arg(long, default_value_t = u32::MAX)]
        tmax: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dyadic level sets of Γ∘Γ.
    LevelProfile {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Smallest m with mΓ = F_p for every subgroup.
    #[command(name = "coverage-6gamma")]
    Coverage6Gamma {
        #[arg(long)]
        pmax: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Energies of convex sequences of length 2..=nmax.
    ConvexScan {
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Generator::Squares)]
        generator: Generator,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Product-set statistics for integer sets, one per line.
    DoublingStats {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        shift: i64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Longest arithmetic progressions inside subgroups.
    ApScan {
        #[arg(long)]
        pmax: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Growth of |A + Γ| for A ⊆ Γ.
    ExpansionScan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Three-set convolution sums over invariant sets.
    StepanovTable {
        #[arg(long)]
        pmax: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Squares,
    Perturbed,
}

fn emit<T: Serialize>(rows: &[T], path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            experiments::write_csv(rows, f)?;
        }
        None => experiments::write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Verify { seed, trials, inequality_trials, primes, json, timing } => {
            let cfg = Config { exec, timing, ..Config::new(seed, trials) };
            let report = verify::run_all(&cfg, inequality_trials.unwrap_or(5 * trials), &primes)?;
            for s in &report.suites {
                eprintln!(
                    "{:<13} {} checks={} failed={} worst_slack={:e}",
                    s.name,
                    if s.pass { "PASS" } else { "FAIL" },
                    s.summary.checks,
                    s.summary.failed,
                    s.summary.worst_slack
                );
                if let Some(cx) = &s.counterexample {
                    eprintln!("  counterexample: {} lhs={} rhs={} trial={}", cx.check.name, cx.check.lhs, cx.check.rhs, cx.instance.trial);
                }
            }
            let text = report.to_json()?;
            match json {
                Some(p) => fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => writeln!(io::stdout().lock(), "{text}")?,
            }
            Ok(status(report.pass))
        }
        Command::SubgroupScan { pmax, tmin, tmax, csv } => {
            let scan = experiments::subgroup_scan(pmax, tmin, tmax, exec)?;
            emit(&scan.rows, csv.as_ref())?;
            let mismatched = scan.validated.iter().filter(|v| !v.2).count();
            eprintln!(
                "rows={} lower_bound={} validated={} mismatched={} worst_ratio_52={}",
                scan.rows.len(),
                if scan.all_lower_ok { "ok" } else { "VIOLATED" },
                scan.validated.len(),
                mismatched,
                scan.worst_ratio_52
            );
            Ok(status(scan.pass()))
        }
        Command::LevelProfile { p, t, csv } => {
            let prof = experiments::level_set_profile(p, t)?;
            emit(&prof.rows, csv.as_ref())?;
            eprintln!("p={} t={} E={} d={} above={} partition={}", prof.p, prof.t, prof.energy, prof.d, prof.above, prof.partition_ok);
            Ok(status(prof.partition_ok))
        }
        Command::Coverage6Gamma { pmax, csv } => {
            let rows = experiments::coverage_scan(pmax, exec)?;
            emit(&rows, csv.as_ref())?;
            let capped = rows.iter().filter(|r| r.cap_reached).count();
            let within = rows.iter().filter(|r| r.within_6).count();
            eprintln!("rows={} within_6={} cap_reached={}", rows.len(), within, capped);
            Ok(ExitCode::SUCCESS)
        }
        Command::ConvexScan { nmax, generator, seed, csv } => {
            let g = match generator {
                Generator::Squares => ConvexGenerator::Squares,
                Generator::Perturbed => ConvexGenerator::Perturbed(seed),
            };
            let scan = experiments::convex_scan(nmax, g, exec)?;
            emit(&scan.rows, csv.as_ref())?;
            eprintln!(
                "rows={} validated={} mismatched={}",
                scan.rows.len(),
                scan.validated.len(),
                scan.validated.iter().filter(|v| !v.1).count()
            );
            Ok(status(scan.pass()))
        }
        Command::DoublingStats { file, shift, csv } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let rows = experiments::parse_sets(&text)?
                .iter()
                .map(|s| experiments::doubling_stats(s, shift))
                .collect::<addcomb::Result<Vec<_>>>()?;
            emit(&rows, csv.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ApScan { pmax, csv } => {
            let rows = experiments::progression_scan(pmax, exec)?;
            emit(&rows, csv.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExpansionScan { p, t, trials, seed, csv } => {
            let rows = experiments::expansion_scan(p, t, trials, seed)?;
            emit(&rows, csv.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::StepanovTable { pmax, seed, csv } => {
            let rows = experiments::stepanov_table(pmax, seed, exec)?;
            emit(&rows, csv.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
