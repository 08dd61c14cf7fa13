use clap::{Parser, Subcommand, ValueEnum};
use resilient_ham::digraph::{parse_arc_list, read_edge_list};
use resilient_ham::harness::{
    self, cmd_attack, cmd_check, cmd_gen, cmd_ham, cmd_oracle, cmd_sweep, cmd_verify, parse_cycle, AdversaryConfig,
    AdversaryKindArg, ExperimentConfig, PSource, SweepConfig,
};
use resilient_ham::pseudorandom::{CheckMode, PseudoParams};
use resilient_ham::random_models::AdversarySpec;
use resilient_ham::scale::ScaleConfig;
use resilient_ham::{Digraph, Error, Result, VertexId};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "resilient-ham", version, about = "Hamilton cycles in pseudorandom digraphs, and a resilience lab")]
#[command(after_help = "Scale knobs are set with --scale.<knob>=<value>, e.g. --scale.k_floor=2.\n\
                        RESILIENT_HAM_THREADS caps the number of worker threads.")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Adversary {
    Random,
    OnewayCut,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum PSourceArg {
    Measured,
    Nominal,
    MinDegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Default,
    Literal,
    Permissive,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a D(n,p) edge list
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Delete arcs from an edge list and print the deletion report
    Attack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        adversary: Adversary,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// |A| for the one-way cut; A = {0, .., cut_size-1}
        #[arg(long)]
        cut_size: Option<usize>,
        /// Arc list (one `u v` per line) for the custom adversary
        #[arg(long)]
        arcs: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check P1, P2 and P3 and print the verdicts as JSON
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Defaults to the arc density of the input
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value = "sampled")]
        mode: Mode,
        /// Sample count in sampled mode
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Look for a Hamilton cycle; exit 0 on a verified cycle, 2 on failure
    Ham {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Defaults to the arc density of the input
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "default")]
        preset: Preset,
        /// Where to write the cycle (one line of vertex ids)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the full run report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a grid of seeded trials and write trials.jsonl, summary.json, plot.csv
    Sweep {
        /// Comma-separated list
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        r: Vec<f64>,
        /// No adversary when omitted
        #[arg(long, value_enum)]
        adversary: Option<Adversary>,
        #[arg(long)]
        cut_size: Option<usize>,
        #[arg(long)]
        arcs: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Derive alpha from the budget: alpha = (1/2 - r)/2
        #[arg(long)]
        alpha_from_r: bool,
        /// How the pseudorandomness p is derived from each generated digraph
        #[arg(long, value_enum, default_value = "min-degree")]
        p_source: PSourceArg,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "default")]
        preset: Preset,
        /// Also check P2/P3 in every trial
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Confirm with Held-Karp when n <= 20
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide Hamiltonicity exactly (Held-Karp, n <= 20)
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a cycle file against an edge list; exit 0 if it is a Hamilton cycle
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
    },
}

/// Pulls `--scale.<knob>=<value>` (or `--scale.<knob> <value>`) out of the
/// argument list before clap sees it.
fn split_scale_args(args: Vec<String>) -> std::result::Result<(Vec<String>, BTreeMap<String, String>), String> {
    let mut rest = Vec::new();
    let mut knobs = BTreeMap::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(spec) = a.strip_prefix("--scale.") else {
            rest.push(a);
            continue;
        };
        let (k, v) = match spec.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => (spec.to_string(), it.next().ok_or_else(|| format!("--scale.{spec} needs a value"))?),
        };
        knobs.insert(k, v);
    }
    Ok((rest, knobs))
}

fn scale_from(preset: Preset, knobs: &BTreeMap<String, String>) -> Result<ScaleConfig> {
    let mut s = match preset {
        Preset::Default => ScaleConfig::default(),
        Preset::Literal => ScaleConfig::literal(),
        Preset::Permissive => ScaleConfig::permissive(),
    };
    for (k, v) in knobs {
        s.set_knob(k, v)?;
    }
    Ok(s)
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn mode_of(m: Mode, samples: usize, seed: u64) -> CheckMode {
    match m {
        Mode::Exact => CheckMode::Exact,
        Mode::Sampled => CheckMode::Sampled { trials: samples, seed },
    }
}

/// The given p, else the density of `g`. A digraph without arcs has density
/// 0, which no parameter set accepts; it is checked against p = 1 instead.
fn params_for(g: &Digraph, alpha: f64, p: Option<f64>) -> Result<PseudoParams> {
    let p = p.unwrap_or_else(|| if g.arc_count() == 0 { 1.0 } else { g.density() });
    PseudoParams::new(g.n(), alpha, p)
}

fn read_arcs(path: &Path) -> Result<Vec<(VertexId, VertexId)>> {
    parse_arc_list(&std::fs::read_to_string(path)?)
}

fn run(cmd: Cmd, knobs: BTreeMap<String, String>) -> Result<ExitCode> {
    if !knobs.is_empty() && !matches!(cmd, Cmd::Ham { .. } | Cmd::Sweep { .. }) {
        return Err(Error::InvalidParam("--scale.* applies only to ham and sweep".into()));
    }
    match cmd {
        Cmd::Gen { n, p, seed, out } => print_json(&cmd_gen(n, p, seed, &out)?)?,
        Cmd::Attack { input, adversary, r, cut_size, arcs, seed, out } => {
            let spec = match adversary {
                Adversary::Random => AdversarySpec::random_budgeted(r, seed),
                Adversary::OnewayCut => {
                    let n = read_edge_list(&input)?.n();
                    let a = cut_size.unwrap_or(n / 2).min(n);
                    AdversarySpec::oneway_cut((0..a as u32).map(VertexId).collect())
                }
                Adversary::Custom => {
                    let path = arcs.ok_or_else(|| Error::InvalidParam("custom adversary needs --arcs".into()))?;
                    AdversarySpec::custom(read_arcs(&path)?)
                }
            };
            print_json(&cmd_attack(&input, &spec, &out)?)?;
        }
        Cmd::Check { input, alpha, p, mode, samples, seed } => {
            let g = read_edge_list(&input)?;
            let params = params_for(&g, alpha, p)?;
            print_json(&cmd_check(&g, &params, mode_of(mode, samples, seed))?)?;
        }
        Cmd::Ham { input, alpha, p, seed, preset, out, report } => {
            let g = read_edge_list(&input)?;
            let params = params_for(&g, alpha, p)?;
            let scale = scale_from(preset, &knobs)?;
            let (rep, ok) = cmd_ham(&g, &params, &scale, seed);
            if let Some(path) = report {
                std::fs::write(path, serde_json::to_string_pretty(&rep)? + "\n")?;
            }
            if ok {
                let line = rep.cycle_line().unwrap_or_default();
                match out {
                    Some(path) => std::fs::write(path, line + "\n")?,
                    None => println!("{line}"),
                }
                return Ok(ExitCode::SUCCESS);
            }
            let f = rep.failure.as_ref();
            eprintln!(
                "no cycle: stage={} kind={} {}",
                f.map_or("Verify".to_string(), |f| f.stage.to_string()),
                f.map_or("", |f| f.kind.as_str()),
                f.map_or("", |f| f.message.as_str())
            );
            return Ok(ExitCode::from(2));
        }
        Cmd::Sweep {
            n,
            p,
            r,
            adversary,
            cut_size,
            arcs,
            alpha,
            alpha_from_r,
            p_source,
            trials,
            seed,
            preset,
            mode,
            samples,
            oracle,
            threads,
            out,
        } => {
            let mut base = ExperimentConfig::new(n[0], p[0], seed);
            base.alpha = alpha;
            base.alpha_from_r = alpha_from_r;
            base.trials = trials;
            base.p_source = match p_source {
                PSourceArg::Measured => PSource::Measured,
                PSourceArg::Nominal => PSource::Nominal,
                PSourceArg::MinDegree => PSource::MinDegree,
            };
            base.scale = scale_from(preset, &BTreeMap::new())?;
            base = base.with_overrides(&knobs)?;
            base.check = mode.map(|m| mode_of(m, samples, seed));
            base.oracle = oracle;
            base.threads = threads;
            base.out = Some(out.clone());
            let kind = match adversary {
                None => AdversaryKindArg::None,
                Some(Adversary::Random) => AdversaryKindArg::Random,
                Some(Adversary::OnewayCut) => AdversaryKindArg::OnewayCut,
                Some(Adversary::Custom) => {
                    let path = arcs.ok_or_else(|| Error::InvalidParam("custom adversary needs --arcs".into()))?;
                    base.adversary = AdversaryConfig::Custom { arcs: read_arcs(&path)? };
                    AdversaryKindArg::Custom
                }
            };
            let cfg = SweepConfig { ns: n, ps: p, rs: r, adversary: kind, cut_size, base };
            let res = cmd_sweep(&cfg)?;
            print!("{}", harness::plot_csv(&res.summary.cells));
            eprintln!("wrote {}", out.display());
        }
        Cmd::Oracle { input } => print_json(&cmd_oracle(&read_edge_list(&input)?)?)?,
        Cmd::Verify { input, cycle } => {
            let g = read_edge_list(&input)?;
            let c = parse_cycle(&std::fs::read_to_string(cycle)?)?;
            let ok = cmd_verify(&g, &c);
            println!("{}", if ok { "valid" } else { "invalid" });
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let (args, knobs) = match split_scale_args(std::env::args().collect()) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli.cmd, knobs) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
