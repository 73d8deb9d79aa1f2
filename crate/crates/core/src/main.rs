use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mcwave::channel::TapDelayProfile;
use mcwave::harness::{builtin_manifest, load_manifest, run, run_suite, Scenario, FULL_PSD_FRAMES};
use mcwave::Result;

#[derive(Parser)]
#[command(name = "mcwave", version, about = "Multicarrier waveform OOBE and CFO simulations")]
struct Cli {
    /// Overrides the seed of every scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    /// Use the full Monte Carlo counts instead of desk-scale defaults.
    #[arg(long, global = true)]
    full_scale: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run a manifest of scenario files, or the built-in manifest.
    Suite {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Print the ids of the built-in scenarios.
    ListScenarios {
        /// Print full scenario text instead of ids.
        #[arg(long)]
        verbose: bool,
    },
    /// Write a channel profile as `delay_us,power_db` CSV.
    ExportProfile {
        profile: Profile,
        /// Use the 6-path profile.
        #[arg(long)]
        six_path: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Cost207,
}

fn adjust(s: &mut Scenario, cli: &Cli) {
    if let Some(seed) = cli.seed {
        s.seed = seed;
    }
    if cli.full_scale {
        s.n_mc = s.n_mc.max(FULL_PSD_FRAMES);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Run { scenario } => {
            let mut s = Scenario::parse(&std::fs::read_to_string(scenario)?)?;
            adjust(&mut s, cli);
            let r = run(&s)?;
            let dir = cli.out.join(&s.id);
            r.write_to(&dir)?;
            println!("{} -> {}", s.id, dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite { manifest } => {
            let mut scenarios = match manifest {
                Some(p) => load_manifest(p)?,
                None => builtin_manifest(cli.full_scale),
            };
            scenarios.iter_mut().for_each(|s| adjust(s, cli));
            let outcomes = run_suite(&scenarios, Some(&cli.out))?;
            let mut failed = 0;
            for o in &outcomes {
                match &o.result {
                    Ok(_) => println!("{} ok", o.id),
                    Err(e) => {
                        failed += 1;
                        println!("{} failed: {e}", o.id);
                    }
                }
            }
            println!("{} scenarios, {failed} failed, output in {}", outcomes.len(), cli.out.display());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::ListScenarios { verbose } => {
            for s in builtin_manifest(cli.full_scale) {
                if *verbose {
                    println!("{}", s.to_text());
                } else {
                    println!("{}", s.id);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportProfile { profile, six_path } => {
            let p = match (profile, six_path) {
                (Profile::Cost207, false) => TapDelayProfile::cost207_ht12(),
                (Profile::Cost207, true) => TapDelayProfile::cost207_ht6(),
            };
            std::fs::create_dir_all(&cli.out)?;
            let path = cli.out.join(format!("{}.csv", p.name));
            std::fs::write(&path, p.to_csv())?;
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
