use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybrid_cli::commands::{matrix, report, resource, simulate, thread_pool};
use hybrid_cli::{CliError, CliResult, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "hybridsim", version, about = "Hybrid floating wind-wave simulator and techno-economic pipeline")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(short, long, global = true, default_value = "hybridsim.toml")]
    config: PathBuf,
    /// Override `output_dir`.
    #[arg(short, long, global = true)]
    output_dir: Option<PathBuf>,
    /// Parallel case workers.
    #[arg(short = 'j', long, global = true, env = "HYBRIDSIM_WORKERS")]
    workers: Option<usize>,
    /// Override `simulation.duration` (s).
    #[arg(long, global = true)]
    duration: Option<f64>,
    /// Override `simulation.seeds` (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Print failures as a JSON object on stderr.
    #[arg(long, global = true)]
    error_json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the JPD, wind rose and combined resource from the buoy file.
    Resource,
    /// Run time-domain cases, e.g. `--select "run1 x hybrid_5mw_spar_rp"`.
    Simulate {
        #[arg(short, long, default_value = "* x *")]
        select: String,
        /// Rerun cases that already have results.
        #[arg(long)]
        force: bool,
    },
    /// Build per-device power matrices for one system over the site resource.
    Matrix {
        system: String,
        #[arg(long)]
        force: bool,
    },
    /// AEP, CF, P_CV, LCOE tables and synergy verdicts.
    Report {
        /// Metric values or matrix directories supplied directly (TOML or JSON).
        #[arg(long)]
        bypass: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> CliResult<()> {
    let overrides = Overrides { output_dir: cli.output_dir.clone(), duration: cli.duration, seeds: cli.seeds.clone() };
    let cfg = if cli.config.exists() || !matches!(cli.command, Command::Report { bypass: Some(_) }) {
        RunConfig::load(&cli.config, &overrides)?
    } else {
        let mut c = RunConfig::from_toml("")?;
        c.apply(&overrides);
        c
    };
    match &cli.command {
        Command::Resource => {
            let s = resource::cmd_resource(&cfg)?;
            println!(
                "{} records ({} dropped); modal cell Hm0 {} m, Te {} s with {} h; site mean wind {:.2} m/s",
                s.records, s.dropped, s.modal_hm0, s.modal_te, s.modal_hours, s.site_mean_wind
            );
        }
        Command::Simulate { select, force } => {
            let pool = thread_pool(cli.workers)?;
            for s in simulate::cmd_simulate(&cfg, select, *force, &pool)? {
                let rms = |c: &str| s.stats.get(c).map_or(f64::NAN, |x| x.std);
                println!(
                    "{} {} seed {}: heave std {:.4} m, pitch std {:.5} rad, WEC {:.1} kW, FWT {:.1} kW",
                    s.system,
                    s.run,
                    s.seed,
                    rms("platform_heave"),
                    rms("platform_pitch"),
                    s.wec_mean_electrical.unwrap_or(0.0) / 1e3,
                    s.fwt_mean_electrical.unwrap_or(0.0) / 1e3
                );
            }
        }
        Command::Matrix { system, force } => {
            let pool = thread_pool(cli.workers)?;
            for m in matrix::cmd_matrix(&cfg, system, *force, &pool)? {
                println!("{system}: {} matrix with {} simulated cells", m.device, m.n_simulated());
            }
        }
        Command::Report { bypass } => {
            let r = report::cmd_report(&cfg, bypass.as_deref())?;
            for h in &r.synergy {
                for v in &h.verdicts {
                    println!("{} {}: {:?} ({:+.4}, {:+.4})", h.system, v.metric, v.classification, v.delta_a, v.delta_b);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e, cli.error_json),
    }
}

fn report_error(e: &CliError, json: bool) -> ExitCode {
    let r = e.report();
    if json {
        eprintln!("{}", serde_json::to_string(&r).unwrap_or_else(|_| r.message.clone()));
    } else {
        eprintln!("error: {e}");
    }
    ExitCode::from(r.exit_code as u8)
}
