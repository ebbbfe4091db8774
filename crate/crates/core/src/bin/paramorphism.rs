use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use paramorphism::braids::{braid_compose, extract_with, BraidError, BraidWord, ExtractionOptions};
use paramorphism::cli::{self, Experiment, ExperimentConfig, FlowPreset, Overrides, EXIT_CONFIG, EXIT_NUMERICAL};
use paramorphism::quasimorphisms::signature;
use paramorphism::sphere::{Configuration, SpherePoint};

#[derive(Parser)]
#[command(name = "paramorphism", version, about = "Braid functionals of area-preserving flows on the sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write report.json and points.csv.
    Run(RunArgs),
    /// Braid word utilities.
    #[command(subcommand)]
    Braid(BraidCommand),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long, value_enum)]
    flow: Option<FlowPreset>,
    #[arg(long)]
    qm: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Iteration counts, `a..b` or `a,b,c`.
    #[arg(long = "k")]
    k_range: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    angle: Option<f64>,
    #[arg(long)]
    axis: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Braid of a flow preset at given points, relative to base points (default: the same points).
    Extract {
        #[arg(long, value_enum, default_value = "eggbeater")]
        flow: FlowPreset,
        /// Points as `lat,lon;lat,lon;...` in radians.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long, default_value = "z")]
        axis: String,
        #[arg(long)]
        json: bool,
    },
    /// `a` after `b`, freely reduced.
    Compose {
        a: String,
        b: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Permutation, exponent sum, linking numbers and signature.
    Invariants {
        word: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_word(text: &str, n: Option<usize>) -> Result<BraidWord, BraidError> {
    match n {
        Some(n) => BraidWord::parse_with_strands(text, n),
        None => text.parse(),
    }
}

fn parse_points(text: &str) -> Result<Configuration, String> {
    let points = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (lat, lon) = pair.split_once(',').ok_or_else(|| format!("bad point {pair:?}"))?;
            let lat: f64 = lat.trim().parse().map_err(|_| format!("bad latitude {lat:?}"))?;
            let lon: f64 = lon.trim().parse().map_err(|_| format!("bad longitude {lon:?}"))?;
            Ok(SpherePoint::from_lat_lon(lat, lon))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Configuration::new(points).map_err(|e| e.to_string())
}

fn invariants_json(w: &BraidWord) -> serde_json::Value {
    let n = w.n();
    let mut lk = serde_json::Map::new();
    for i in 1..=n {
        for j in i + 1..=n {
            lk.insert(format!("{i}-{j}"), w.linking_number(i, j).into());
        }
    }
    serde_json::json!({
        "word": w.to_string(),
        "n": n,
        "permutation": w.permutation().iter().map(|p| p + 1).collect::<Vec<_>>(),
        "pure": w.is_pure(),
        "exponent_sum": w.exponent_sum(),
        "linking": lk,
        "signature": signature(w),
    })
}

fn print_invariants(w: &BraidWord) {
    let n = w.n();
    println!("word          {}", if w.is_empty() { "(empty)".to_string() } else { w.to_string() });
    println!("strands       {n}");
    let perm: Vec<String> = w.permutation().iter().map(|p| (p + 1).to_string()).collect();
    println!("permutation   [{}]{}", perm.join(" "), if w.is_pure() { " (pure)" } else { "" });
    println!("exponent sum  {}", w.exponent_sum());
    for i in 1..=n {
        for j in i + 1..=n {
            println!("lk{i}{j}          {}", w.linking_number(i, j));
        }
    }
    println!("signature     {}", signature(w));
}

fn braid(cmd: BraidCommand) -> Result<(), String> {
    match cmd {
        BraidCommand::Invariants { word, n, json } => {
            let w = parse_word(&word, n).map_err(|e| e.to_string())?;
            if json {
                println!("{}", invariants_json(&w));
            } else {
                print_invariants(&w);
            }
        }
        BraidCommand::Compose { a, b, n } => {
            let err = |e: BraidError| e.to_string();
            let n = match n {
                Some(n) => n,
                None => parse_word(&a, None).map_err(err)?.n().max(parse_word(&b, None).map_err(err)?.n()),
            };
            let a = parse_word(&a, Some(n)).map_err(err)?;
            let b = parse_word(&b, Some(n)).map_err(err)?;
            let c = braid_compose(&a, &b).map_err(|e| e.to_string())?;
            println!("{}", if c.is_empty() { "(empty)".to_string() } else { c.to_string() });
        }
        BraidCommand::Extract { flow, points, base, angle, axis, json } => {
            let x = parse_points(&points)?;
            let z = match base {
                Some(b) => parse_points(&b)?,
                None => x.clone(),
            };
            let config = ExperimentConfig { flow, angle, axis, n: x.n().max(4), ..Default::default() };
            config.validate().map_err(|e| e.to_string())?;
            let iso = cli::build_flow(&config).map_err(|e| e.to_string())?;
            let e = extract_with(&iso, &x, &z, &ExtractionOptions::default()).map_err(|e| e.to_string())?;
            if json {
                println!("{}", e.word.to_json_array());
            } else {
                println!("{}", if e.word.is_empty() { "(empty)".to_string() } else { e.word.to_string() });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(a) => {
            let flags = Overrides {
                experiment: a.experiment,
                flow: a.flow,
                qm: a.qm,
                n: a.n,
                samples: a.samples,
                k_range: a.k_range,
                seed: a.seed,
                workers: a.workers,
                out: a.out,
                angle: a.angle,
                axis: a.axis,
                delta: a.delta,
                amplitude: a.amplitude,
                scale: a.scale,
            };
            let config = match ExperimentConfig::resolve(a.config.as_deref(), &flags) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("ConfigInvalid: {}", e.0);
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            match cli::run(&config) {
                Ok(outcome) => {
                    println!("{}", outcome.report.summary_line());
                    if let Some(e) = &outcome.error {
                        eprintln!("NumericalFailure: {e}");
                    }
                    ExitCode::from(outcome.exit_code as u8)
                }
                Err(e) => {
                    eprintln!("cannot write outputs: {e}");
                    ExitCode::from(EXIT_NUMERICAL as u8)
                }
            }
        }
        Command::Braid(cmd) => match braid(cmd) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG as u8)
            }
        },
    }
}
