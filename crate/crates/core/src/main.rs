use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use vacuum_nonlocality::battery::{run_battery, BatteryOptions};
use vacuum_nonlocality::correlator::amplitude_set;
use vacuum_nonlocality::harness::{render, run_pipeline, write_text, ExperimentConfig, Format};
use vacuum_nonlocality::labels::parse_string;
use vacuum_nonlocality::nonlocality::{
    behavior_from_rho, hybrid_bound, hybrid_lp_feasible, maximize_svetlichny, Behavior, OptimizerConfig,
};
use vacuum_nonlocality::rho::{
    assemble_from_pairs, dominance_amplitudes, dominance_limit, filter, normalize, FilterParam, Rho8, RhoRecord,
};
use vacuum_nonlocality::wick::expand_symbolic;
use vacuum_nonlocality::windows::sample;
use vacuum_nonlocality::{Error, Result};

#[derive(Parser)]
#[command(name = "vacnl", version, about = "Tripartite nonlocality extracted from the field vacuum by three detectors")]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for optimizer starts; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Smeared two-point amplitudes at one separation.
    Amplitudes {
        /// Separation in units of the window duration; defaults to the first sweep value.
        #[arg(long)]
        separation: Option<f64>,
    },
    /// Second-order detector density matrix.
    Rho {
        #[arg(long)]
        separation: Option<f64>,
        /// Apply the local filter with this attenuation.
        #[arg(long, value_name = "ETA")]
        filter: Option<f64>,
        #[arg(long)]
        normalize: bool,
        /// Use exchange-only amplitudes of this size instead of the field.
        #[arg(long, value_name = "S")]
        dominance: Option<f64>,
    },
    /// Filter a density matrix read from JSON.
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        normalize: bool,
    },
    /// Maximize the Svetlichny value over measurement settings.
    Svetlichny {
        /// `dominance` or a path to a density matrix JSON file.
        #[arg(long, default_value = "dominance")]
        state: String,
        /// Exchange amplitude used by the dominance state.
        #[arg(long, default_value_t = 0.1)]
        dominance: f64,
        #[arg(long)]
        starts: Option<usize>,
        /// Also write the optimal behavior as JSON.
        #[arg(long)]
        behavior_out: Option<PathBuf>,
    },
    /// Membership of a behavior in the hybrid local-nonlocal polytope.
    LpTest {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run every sweep point of the configuration.
    Sweep,
    /// Validate the pipeline against the exact lattice oracle.
    OracleCheck,
    /// Window utilities.
    Windows {
        #[command(subcommand)]
        action: WindowsAction,
    },
    /// Wick-expansion utilities.
    Wick {
        #[command(subcommand)]
        action: WickAction,
    },
}

#[derive(Subcommand)]
enum WindowsAction {
    /// Samples (t, ε(t)) of the configured window as CSV.
    Dump {
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum WickAction {
    /// Symbolic pairing expansion, e.g. `BCBC^--++`.
    Expand { string: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output values serialize");
    s.push('\n');
    s
}

fn output(cli: &Cli, fallback: Option<&Path>, text: &str) -> Result<()> {
    match cli.out.as_deref().or(fallback) {
        Some(path) => write_text(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
                context: "writing stdout".into(),
                source,
            })
        }
    }
}

fn separation(cfg: &ExperimentConfig, given: Option<f64>) -> f64 {
    given.unwrap_or(cfg.sweep.separations[0])
}

fn rho_text(rho: &Rho8, format: Option<OutputFormat>) -> Result<String> {
    match format {
        None | Some(OutputFormat::Json) => Ok(pretty(&RhoRecord::from(rho))),
        Some(OutputFormat::Text) => Ok(rho.table()),
        Some(OutputFormat::Csv) => Err(Error::config("density matrices are emitted as json or text")),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Amplitudes { separation: l } => {
            let l = separation(&cfg, *l);
            let set = amplitude_set(&cfg.field_spec(), &cfg.detector_specs(l)?)?;
            let text = match cli.format {
                None | Some(OutputFormat::Json) => {
                    let mut m = Map::new();
                    m.insert("L_over_T".into(), json!(l));
                    for (k, v) in set.entries() {
                        m.insert(k, json!([v.re, v.im]));
                    }
                    m.insert("C".into(), json!(set.norm_term));
                    m.insert("fingerprint".into(), json!(set.provenance.fingerprint));
                    pretty(&Value::Object(m))
                }
                Some(OutputFormat::Csv) => {
                    let mut s = String::from("name,re,im\n");
                    for (k, v) in set.entries() {
                        s.push_str(&format!("{k},{:e},{:e}\n", v.re, v.im));
                    }
                    s.push_str(&format!("C,{:e},0\n", set.norm_term));
                    s
                }
                Some(OutputFormat::Text) => return Err(Error::config("amplitudes are emitted as json or csv")),
            };
            output(&cli, None, &text)?;
        }
        Command::Rho {
            separation: l,
            filter: eta,
            normalize: norm,
            dominance,
        } => {
            let set = match dominance {
                Some(s) => dominance_amplitudes(*s),
                None => amplitude_set(&cfg.field_spec(), &cfg.detector_specs(separation(&cfg, *l))?)?,
            };
            let mut rho = assemble_from_pairs(&set)?.rho;
            if let Some(eta) = eta {
                rho = filter(&rho, FilterParam::new(*eta)?);
            }
            if *norm {
                rho = normalize(&rho)?;
            }
            output(&cli, None, &rho_text(&rho, cli.format)?)?;
        }
        Command::Filter {
            input,
            eta,
            normalize: norm,
        } => {
            let record: RhoRecord = read_json(input)?;
            let mut rho = filter(&Rho8::try_from(&record)?, FilterParam::new(*eta)?);
            if *norm {
                rho = normalize(&rho)?;
            }
            output(&cli, None, &rho_text(&rho, cli.format)?)?;
        }
        Command::Svetlichny {
            state,
            dominance,
            starts,
            behavior_out,
        } => {
            let rho = if state == "dominance" {
                dominance_limit(*dominance)?.0
            } else {
                Rho8::try_from(&read_json::<RhoRecord>(Path::new(state))?)?
            };
            let opt = OptimizerConfig {
                starts: starts.unwrap_or(cfg.analysis.starts),
                seed: cfg.seed,
                project_psd: cfg.analysis.project_psd,
                ..Default::default()
            };
            let best = maximize_svetlichny(&rho, &opt)?;
            let bound = hybrid_bound();
            if let Some(path) = behavior_out {
                let behavior = behavior_from_rho(&rho, &best.settings, opt.project_psd)?;
                write_text(path, &pretty(&behavior))?;
            }
            let report = json!({
                "S_star": best.best,
                "settings": best.settings,
                "hybrid_bound": bound,
                "violated": best.best > bound,
                "converged": best.converged,
            });
            output(&cli, None, &pretty(&report))?;
        }
        Command::LpTest { input } => {
            let behavior: Behavior = read_json(input)?;
            let verdict = hybrid_lp_feasible(&behavior)?;
            output(&cli, None, &pretty(&verdict))?;
        }
        Command::Sweep => {
            let records = run_pipeline(&cfg)?;
            let format = match cli.format {
                Some(OutputFormat::Json) => Format::Json,
                Some(OutputFormat::Csv) => Format::Csv,
                Some(OutputFormat::Text) => return Err(Error::config("sweeps are emitted as json or csv")),
                None => cfg.output.format,
            };
            output(&cli, cfg.output.path.as_deref(), &render(&records, format)?)?;
            if records.iter().any(|r| r.error.is_some()) {
                eprintln!("warning: some sweep points failed; see the `error` column");
            }
        }
        Command::OracleCheck => {
            let report = run_battery(&BatteryOptions::default())?;
            output(&cli, None, &pretty(&report))?;
            if !report.passed {
                return Ok(3);
            }
        }
        Command::Windows {
            action: WindowsAction::Dump { points },
        } => {
            let window = cfg.detectors.window.build()?;
            let mut s = String::from("t,epsilon\n");
            for (t, e) in sample(&window, *points)? {
                s.push_str(&format!("{t:e},{e:e}\n"));
            }
            output(&cli, None, &s)?;
        }
        Command::Wick {
            action: WickAction::Expand { string },
        } => {
            let (dets, signs) = split_string(string)?;
            let ops = parse_string(&dets, &signs)?;
            output(&cli, None, &format!("{}\n", expand_symbolic(&ops)?))?;
        }
    }
    Ok(0)
}

/// `BCBC^--++` or `BCBC--++` into detector letters and signs.
fn split_string(s: &str) -> Result<(String, String)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (dets, signs) = match s.split_once('^') {
        Some((d, g)) => (d.to_string(), g.to_string()),
        None => {
            let k = s.find(['+', '-']).unwrap_or(s.len());
            (s[..k].to_string(), s[k..].to_string())
        }
    };
    let dets = dets.trim_start_matches("d_").to_string();
    if dets.is_empty() || dets.len() != signs.len() {
        return Err(Error::config(format!("cannot read operator string `{s}`")));
    }
    Ok((dets, signs))
}
