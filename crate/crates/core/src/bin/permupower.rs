use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use permupower::builtins::builtin;
use permupower::classify::{
    class_bound, classify_exhaustive_with, classify_sampled, ClassHistogram, ClassifyOptions,
};
use permupower::entangle::entangling_power;
use permupower::latin::{construct_mols_with, MolsTable};
use permupower::oracle::{mc_power, Unitary};
use permupower::verify::{self, Target, VerifyConfig};
use permupower::{BiPerm, Error};

/// Fixed so bare invocations are reproducible.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "permupower", version, about = "Entangling power of bipartite permutations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Local dimension
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "PERMUPOWER_THREADS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Lift enumeration budgets
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct PermSource {
    /// Builtin name: identity, swap, cnot, m, r9, d6hat, min:<d>, mols:<d>
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    builtin: Option<String>,
    /// Permutation file ("d=<d>" then the one-line form)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact entangling power of one permutation
    Power(PermSource),
    /// Histogram of entangling classes
    Classify {
        /// Enumerate every permutation
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Number of uniformly random permutations
        #[arg(long)]
        samples: Option<u64>,
        /// Directory for resumable partial results (exhaustive only)
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Orthogonal Latin squares and their superimposed permutation
    Mols {
        /// Extra pairs, e.g. for orders 2 mod 4
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Run a named cross-check suite
    Verify {
        #[arg(value_parser = parse_target)]
        target: Target,
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Monte Carlo estimate of the entangling power
    Sample {
        #[command(flatten)]
        source: PermSource,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Lib(Error),
    Verify,
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(lib) => Failure::Lib(lib),
            Err(e) => Failure::Other(e),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::NotBijection { .. }
        | Error::ValueOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotLatin { .. }
        | Error::NotOrthogonal(..) => 2,
        Error::UnsupportedOrder { .. } => 3,
        Error::BudgetExceeded { .. } => 4,
        _ => 1,
    }
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn stdout(body: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(global: &Global, body: &str) -> anyhow::Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => stdout(body),
    }
}

fn load_perm(src: &PermSource, d: Option<usize>) -> Result<BiPerm, Failure> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => Ok(builtin(name, d)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(text.parse::<BiPerm>()?)
        }
        (None, None) => unreachable!("clap requires one source"),
    }
}

fn json_line(v: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_power(g: &Global, src: &PermSource) -> Result<(), Failure> {
    let p = load_perm(src, g.d)?;
    let r = entangling_power(&p)?;
    let body = match g.format {
        Format::Json => json_line(&r)?,
        Format::Csv => format!(
            "d,q_p,q_ps,epsilon_num,epsilon_den,epsilon_float\n{},{},{},{},{},{}\n",
            r.d,
            r.q_p,
            r.q_ps,
            r.epsilon.num(),
            r.epsilon.den(),
            r.epsilon.to_f64()
        ),
        Format::Text => format!(
            "d={} q_p={} q_ps={} epsilon={} ({:.10})\n",
            r.d,
            r.q_p,
            r.q_ps,
            r.epsilon,
            r.epsilon.to_f64()
        ),
    };
    emit(g, &body)?;
    Ok(())
}

fn render_histogram(g: &Global, h: &ClassHistogram) -> Result<String, Failure> {
    Ok(match g.format {
        Format::Json => h.to_json()? + "\n",
        Format::Csv => h.to_csv()?,
        Format::Text => h.to_string(),
    })
}

fn cmd_classify(g: &Global, exhaustive: bool, samples: Option<u64>, checkpoint: Option<PathBuf>) -> Result<(), Failure> {
    let d = g.d.context("classify needs --d")?;
    let h = match samples {
        Some(n) if !exhaustive => classify_sampled(d, n, g.seed, g.workers)?.0,
        _ => classify_exhaustive_with(
            d,
            &ClassifyOptions {
                workers: g.workers,
                force: g.force,
                checkpoint_dir: checkpoint,
            },
        )?,
    };
    emit(g, &render_histogram(g, &h)?)?;
    let mean = h.mean()?.map_or("none".to_string(), |m| format!("{m} ({:.6})", m.to_f64()));
    let summary = format!(
        "classes {}{}, mean {mean}, bound {}",
        if samples.is_some() && !exhaustive { ">= " } else { "" },
        h.classes().len(),
        class_bound(d)?
    );
    // keep stdout machine-readable when it carries the histogram
    if g.out.is_some() {
        stdout(&format!("{summary}\n"))?;
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn perm_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".perm");
    PathBuf::from(s)
}

fn cmd_mols(g: &Global, table: Option<PathBuf>) -> Result<(), Failure> {
    let d = g.d.context("mols needs --d")?;
    let table = table.map(MolsTable::load).transpose()?;
    let pair = construct_mols_with(d, table.as_ref())?;
    let p = pair.superimpose();
    let pair_body = match g.format {
        Format::Json => json_line(&json!({
            "d": d,
            "first": pair.first().rows(),
            "second": pair.second().rows(),
        }))?,
        _ => format!("{pair}"),
    };
    // the permutation file is always the text format read by `power --input`
    let perm_body = p.to_string();
    match &g.out {
        Some(out) => {
            std::fs::write(out, &pair_body).with_context(|| format!("writing {}", out.display()))?;
            let pp = perm_path(out);
            std::fs::write(&pp, &perm_body).with_context(|| format!("writing {}", pp.display()))?;
            stdout(&format!("wrote {} and {}\n", out.display(), pp.display()))?;
        }
        None => {
            stdout(&format!("{pair_body}\n{perm_body}"))?;
        }
    }
    Ok(())
}

fn cmd_verify(g: &Global, target: Target, samples: u64) -> Result<(), Failure> {
    let d = g.d.context("verify needs --d")?;
    let report = verify::run(target, &VerifyConfig { d, samples, seed: g.seed })?;
    let body = match g.format {
        Format::Json => json_line(&report)?,
        _ => report.to_string(),
    };
    emit(g, &body)?;
    if report.passed() {
        Ok(())
    } else {
        if g.format == Format::Json || g.out.is_some() {
            eprint!("{report}");
        }
        Err(Failure::Verify)
    }
}

fn cmd_sample(g: &Global, src: &PermSource, samples: u64) -> Result<(), Failure> {
    let p = load_perm(src, g.d)?;
    let exact = entangling_power(&p)?.epsilon;
    let est = mc_power(&Unitary::from_biperm(&p)?, samples as usize, g.seed)?;
    let body = match g.format {
        Format::Json => json_line(&json!({
            "d": p.d(),
            "mean": est.mean,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "exact": exact,
        }))?,
        Format::Csv => format!(
            "d,mean,std_error,samples,seed,exact_num,exact_den\n{},{},{},{},{},{},{}\n",
            p.d(),
            est.mean,
            est.std_error,
            est.samples,
            est.seed,
            exact.num(),
            exact.den()
        ),
        Format::Text => format!(
            "d={} mean={:.6} se={:.2e} samples={} seed={} exact={exact} ({:.6})\n",
            p.d(),
            est.mean,
            est.std_error,
            est.samples,
            est.seed,
            exact.to_f64()
        ),
    };
    emit(g, &body)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Some(n) = g.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Power(src) => cmd_power(g, &src),
        Command::Classify { exhaustive, samples, checkpoint } => cmd_classify(g, exhaustive, samples, checkpoint),
        Command::Mols { table } => cmd_mols(g, table),
        Command::Verify { target, samples } => cmd_verify(g, target, samples),
        Command::Sample { source, samples } => cmd_sample(g, &source, samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verify) => ExitCode::from(5),
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
