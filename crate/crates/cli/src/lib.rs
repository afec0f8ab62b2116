//! Command-line front end for softtrack.

pub mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use softtrack::config::{parse_config_verbose, ConfigError, OutputFormat, RunConfig};
use softtrack::mission::check_mission;
use softtrack::sweep::Sweep;
use softtrack::{evaluate, CompactionMode, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_CHECKS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "softtrack", version, about = "Tracked-chassis traction on soft soil")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Configuration file (required except for `table3`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long = "compaction-mode", global = true, value_enum)]
    pub compaction_mode: Option<Mode>,
    /// Override the passive earth pressure coefficient.
    #[arg(long, global = true)]
    pub kp: Option<f64>,
    #[arg(long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate tractive performance for the configured chassis.
    Evaluate,
    /// Reproduce the reference chassis column from built-in presets.
    Table3,
    /// Check the configured robot against the mission requirements.
    Check,
    /// Sweep the configured design space.
    Sweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    #[value(name = "verbatim-eq8")]
    VerbatimEq8,
    #[value(name = "bekker-classic")]
    BekkerClassic,
}

impl From<Mode> for CompactionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::VerbatimEq8 => CompactionMode::VerbatimEq8,
            Mode::BekkerClassic => CompactionMode::BekkerClassic,
        }
    }
}

/// Exit status for a pipeline error: numerical failures are 3, the rest 2.
pub fn exit_code_for(e: &Error) -> u8 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

/// Failure modes mapped onto exit statuses.
#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if exit_code_for(&e) == EXIT_NUMERICAL {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    body: String,
    ok: bool,
}

/// Runs one invocation; returns the exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match dispatch(cli, stderr) {
        Ok((outcome, format_path)) => {
            let written = match format_path {
                Some(path) => fs::write(&path, &outcome.body)
                    .map_err(|e| format!("writing {}: {e}", path.display())),
                None => stdout
                    .write_all(outcome.body.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INPUT;
            }
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_FAILED_CHECKS
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(stderr, "numerical error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn load(cli: &Cli, stderr: &mut dyn Write) -> Result<RunConfig, Failure> {
    let mut cfg = match (&cli.command, &cli.opts.config) {
        (Command::Table3, None) => RunConfig::paper(),
        (_, None) => return Err(Failure::Input("--config <path> is required".into())),
        (_, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?;
            let (cfg, defaults) = parse_config_verbose(&text)?;
            if cli.opts.verbose || cfg.output.verbose {
                for d in defaults {
                    let _ = writeln!(stderr, "default: {d}");
                }
            }
            cfg
        }
    };
    if let Some(kp) = cli.opts.kp {
        if !(kp.is_finite() && kp > 0.0) {
            return Err(Failure::Input(format!("--kp {kp} must be > 0")));
        }
        cfg.terrain.kp_override = Some(kp);
    }
    if let Some(m) = cli.opts.compaction_mode {
        cfg.state.compaction_mode = m.into();
    }
    if let Some(f) = cli.opts.format {
        cfg.output.format = match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
        };
    }
    if let Some(p) = &cli.opts.output {
        cfg.output.path = Some(p.display().to_string());
    }
    cfg.output.verbose |= cli.opts.verbose;
    Ok(cfg)
}

fn dispatch(cli: &Cli, stderr: &mut dyn Write) -> Result<(Outcome, Option<PathBuf>), Failure> {
    let cfg = load(cli, stderr)?;
    if cfg.output.verbose {
        let _ = writeln!(stderr, "effective configuration:\n{}", cfg.to_canonical());
    }
    let csv = cfg.output.format == OutputFormat::Csv;
    let outcome = match cli.command {
        Command::Evaluate => {
            let r = evaluate(
                &cfg.chassis.geometry,
                &cfg.terrain,
                &cfg.state.state,
                cfg.eval_options(),
            )?;
            Outcome {
                ok: !r.checks.iter().any(|c| c.failed()),
                body: if csv { render::performance_csv(&r) } else { render::performance_text(&r) },
            }
        }
        Command::Table3 => {
            let r = evaluate(
                &cfg.chassis.geometry,
                &cfg.terrain,
                &cfg.state.state,
                cfg.eval_options(),
            )?;
            let (text, ok) = render::reference_text(&r);
            Outcome {
                ok,
                body: if csv { render::performance_csv(&r) } else { format!("{text}\n{}", render::performance_text(&r)) },
            }
        }
        Command::Check => {
            let mission = cfg.mission_spec()?;
            let rep = check_mission(
                &cfg.chassis.geometry,
                &cfg.terrain,
                &cfg.state.state,
                cfg.eval_options(),
                &mission,
            )?;
            Outcome {
                ok: rep.all_pass(),
                body: if csv { render::feasibility_csv(&rep) } else { render::feasibility_text(&rep) },
            }
        }
        Command::Sweep => {
            let (space, ctx) = cfg.sweep_inputs()?;
            let sweep = Sweep::new(&space, &ctx)?;
            let dump_path = cfg.sweep.as_ref().and_then(|s| s.dump.clone());
            let mut buf = Vec::new();
            let result = if csv || dump_path.is_some() {
                sweep.run(Some(&mut buf))?
            } else {
                sweep.run(None)?
            };
            if let Some(path) = &dump_path {
                fs::write(path, &buf).map_err(|e| Failure::Input(format!("writing {path}: {e}")))?;
            }
            Outcome {
                ok: result.best.is_some(),
                body: if csv {
                    String::from_utf8(buf).expect("CSV output is UTF-8")
                } else {
                    render::sweep_text(&result, space.objective.as_str())
                },
            }
        }
    };
    Ok((outcome, cfg.output.path.map(PathBuf::from)))
}
