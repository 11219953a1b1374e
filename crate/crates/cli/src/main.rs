use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tmi_core::gamma::{gamma, gamma_closed};
use tmi_core::io::{
    betti_json, betti_text, certificate_json, certificate_line, complex_from_json, complex_to_json, config_metadata,
    off_export,
};
use tmi_core::linalg::{Backend, Prime, DEFAULT_PRIME};
use tmi_core::monomial::{transversal_generators, BlockConfig};
use tmi_core::oracle::betti_oracle;
use tmi_core::resolution::{betti_table, certify};
use tmi_core::veronese::{depolarize, format_x_monomial, parse_x_monomial, polarize, veronese_checks};
use tmi_core::LabeledComplex;

/// Largest number of variables the pipeline accepts.
const MAX_VARIABLES: usize = 16;

#[derive(Parser)]
#[command(name = "tmi", version, about = "Cellular resolutions of transversal monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Number of blocks.
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Number of factors per product.
    #[arg(short = 't')]
    t: Option<usize>,
    /// Block sizes, comma separated; all ones when omitted.
    #[arg(short = 'b', value_delimiter = ',')]
    b: Option<Vec<usize>>,
    /// JSON file with fields n, t, b.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<BlockConfig> {
        let cfg = if let Some(path) = &self.config {
            if self.n.is_some() || self.t.is_some() || self.b.is_some() {
                bail!("--config cannot be combined with -n, -t or -b");
            }
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<BlockConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
        } else {
            let t = self.t.context("-t is required")?;
            let b = match (&self.b, self.n) {
                (Some(b), Some(n)) if b.len() != n => bail!("-b lists {} block sizes but -n is {n}", b.len()),
                (Some(b), _) => b.clone(),
                (None, Some(n)) => vec![1; n],
                (None, None) => bail!("give -n or -b"),
            };
            BlockConfig::new(t, b)?
        };
        if cfg.m() > MAX_VARIABLES {
            bail!("m = {} variables exceeds the pipeline limit of {MAX_VARIABLES}", cfg.m());
        }
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct BackendArgs {
    /// Prime for the finite field rank computations.
    #[arg(long, default_value_t = DEFAULT_PRIME as u64)]
    prime: u64,
    /// Use exact rational arithmetic instead of a prime field.
    #[arg(long, conflicts_with = "prime")]
    rational: bool,
}

impl BackendArgs {
    fn backend(&self) -> Result<Backend> {
        Ok(if self.rational { Backend::Rational } else { Backend::Prime(Prime::new(self.prime)?) })
    }
}

#[derive(Args, Clone)]
struct BuildArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Build from the closed-form list of maximal cells.
    #[arg(long)]
    closed: bool,
}

impl BuildArgs {
    fn build(&self) -> Result<(BlockConfig, LabeledComplex)> {
        let cfg = self.cfg.resolve()?;
        let x = if self.closed { gamma_closed(&cfg)? } else { gamma(&cfg)? };
        Ok((cfg, x))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimal generators of the ideal.
    Gen {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build the complex and print its f-vector.
    Build {
        #[command(flatten)]
        build: BuildArgs,
        /// Compare the recursive and closed-form constructions.
        #[arg(long)]
        seed_check: bool,
        /// Write the complex as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the Betti table read off the complex.
    Resolve {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that the complex gives a minimal free resolution.
    Verify {
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        backend: BackendArgs,
        /// Verify a complex read from JSON instead of building one.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Betti table computed from the ideal alone.
    Oracle {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Map a squarefree Veronese generator to a monomial in y.
    Depolarize {
        monomial: String,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 't')]
        t: usize,
        /// Map a monomial in y back to x.
        #[arg(long)]
        inverse: bool,
    },
    /// Necessary conditions for the squarefree Veronese complex to be a ball.
    VeroneseCheck {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 't')]
        t: usize,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the complex as JSON and as an OFF mesh.
    Export {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        off: Option<PathBuf>,
    },
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn warn(cfg: &BlockConfig) {
    if let Some(w) = config_metadata(cfg).get("warning") {
        eprintln!("warning: {}", w.as_str().unwrap_or_default());
    }
}

/// Runs one command; `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { cfg, json } => {
            let cfg = cfg.resolve()?;
            let gens = transversal_generators(&cfg);
            for g in gens.generators() {
                println!("{g}");
            }
            if let Some(path) = json {
                let list: Vec<String> = gens.generators().iter().map(|g| g.to_string()).collect();
                write(&path, &pretty(&json!({"config": config_metadata(&cfg), "generators": list})))?;
            }
            Ok(true)
        }
        Command::Build { build, seed_check, json } => {
            let (cfg, x) = build.build()?;
            warn(&cfg);
            println!("{cfg}");
            println!("f-vector: {:?}", x.f_vector());
            println!("maximal cells: {}", x.maximal_cells().len());
            if let Some(path) = json {
                write(&path, &complex_to_json(&x))?;
            }
            if seed_check {
                let other = if build.closed { gamma(&cfg)? } else { gamma_closed(&cfg)? };
                let only_here: Vec<String> = x.cells().difference(other.cells()).map(|c| c.to_string()).collect();
                let only_there: Vec<String> = other.cells().difference(x.cells()).map(|c| c.to_string()).collect();
                if only_here.is_empty() && only_there.is_empty() {
                    println!("seed-check: PASS ({} cells)", x.len());
                } else {
                    println!("seed-check: FAIL");
                    println!("{}", pretty(&json!({"only_in_built": only_here, "only_in_other": only_there})));
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Command::Resolve { build, json } => {
            let (cfg, x) = build.build()?;
            warn(&cfg);
            let table = betti_table(&x)?;
            print!("{}", betti_text(&table));
            if let Some(path) = json {
                write(&path, &pretty(&json!({"config": config_metadata(&cfg), "betti": betti_json(&table)})))?;
            }
            Ok(true)
        }
        Command::Verify { build, backend, input, json } => {
            let (cfg, x) = match &input {
                Some(path) => {
                    let cfg = build.cfg.resolve()?;
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    (cfg, complex_from_json(&text)?)
                }
                None => build.build()?,
            };
            warn(&cfg);
            let cert = certify(&x, backend.backend()?)?;
            println!("{}", certificate_line(&cert));
            let report = certificate_json(&cfg, &cert);
            if let Some(path) = json {
                write(&path, &pretty(&report))?;
            }
            if !cert.passed() {
                print!("{}", pretty(&report));
            }
            Ok(cert.passed())
        }
        Command::Oracle { cfg, backend, json } => {
            let cfg = cfg.resolve()?;
            let table = betti_oracle(&transversal_generators(&cfg), backend.backend()?)?;
            print!("{}", betti_text(&table));
            if let Some(path) = json {
                write(&path, &pretty(&json!({"config": config_metadata(&cfg), "betti": betti_json(&table)})))?;
            }
            Ok(true)
        }
        Command::Depolarize { monomial, m, t, inverse } => {
            if inverse {
                println!("{}", format_x_monomial(&polarize(&monomial.parse()?, m, t)?));
            } else {
                println!("{}", depolarize(&parse_x_monomial(&monomial)?, m, t)?);
            }
            Ok(true)
        }
        Command::VeroneseCheck { m, t, backend, json } => {
            if m > MAX_VARIABLES {
                bail!("m = {m} variables exceeds the pipeline limit of {MAX_VARIABLES}");
            }
            let report = veronese_checks(m, t, backend.backend()?)?;
            print!("{report}");
            if let Some(path) = json {
                write(&path, &pretty(&serde_json::to_value(&report)?))?;
            }
            Ok(report.passed())
        }
        Command::Export { build, json, off } => {
            let (cfg, x) = build.build()?;
            warn(&cfg);
            if json.is_none() && off.is_none() {
                bail!("give --json and/or --off");
            }
            if let Some(path) = json {
                write(&path, &complex_to_json(&x))?;
            }
            if let Some(path) = off {
                write(&path, &off_export(&x))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("TMI_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({"status": "error", "message": format!("{e:#}")}));
            ExitCode::from(2)
        }
    }
}
