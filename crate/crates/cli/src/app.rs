//! Argument parsing and the four subcommands. Every command returns the
//! process exit code: 0 on success, 2 for invalid input, 3 when a run cannot
//! finish (slot budget exhausted, or an expectation that diverges at p = 1).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};
use jnc_core::coding::Ap;
use jnc_core::matrix::ReceptionMatrix;
use jnc_core::protocols::{dnc_expected_transmissions, DncError, SlotRecord, Transmission};
use jnc_core::sim::{
    overhead_bits, replay_traced, run_experiment, AggregateStats, ExperimentError, OverheadScheme, Protocol, SimError,
};
use jnc_core::topology::NetworkConfig;

use crate::format::sig;
use crate::report::{summary_line, write_csv};
use crate::svg;
use crate::sweep::{Fixed, Param, RunError, SweepSpec, DEFAULT_SEED, DEFAULT_TRIALS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNFINISHED: i32 = 3;

/// Environment variable capping the number of simulation worker threads.
pub const THREADS_ENV: &str = "JNCSIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "jncsim", version, about = "Retransmission simulator for two interfering multicast access points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one configuration and print its CSV row and a summary.
    Run(RunArgs),
    /// Sweep one parameter, writing CSV and optionally an SVG chart.
    Sweep(SweepArgs),
    /// Print the expected DNC transmissions and per-packet header overheads.
    Analytic(AnalyticArgs),
    /// Replay a reception matrix over a lossless channel with a slot trace.
    Replay(ReplayArgs),
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Receivers per AP.
    #[arg(long)]
    pub n: u32,
    /// Overlap receivers per AP.
    #[arg(long)]
    pub m: u32,
    /// Per-link loss probability.
    #[arg(long)]
    pub p: f64,
    /// Batch size per AP.
    #[arg(long)]
    pub b: u32,
    /// arq, dnc or jnc.
    #[arg(long, default_value = "jnc")]
    pub protocol: Protocol,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// fig2, fig3, fig4 or fig5.
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<String>,
    /// JSON sweep description.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Swept parameter: p, M, N or B.
    #[arg(long)]
    pub param: Option<Param>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Option<Vec<f64>>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub b: Option<u32>,
    /// Repeat the sweep for each of these overlap sizes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub m_series: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub protocols: Option<Vec<Protocol>>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG chart destination.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct AnalyticArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, clap::Args)]
pub struct ReplayArgs {
    /// Reception matrix file.
    pub matrix: PathBuf,
    /// arq, dnc or jnc.
    #[arg(long, default_value = "jnc")]
    pub protocol: Protocol,
}

/// Parses `args` (program name first) and runs the chosen command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INVALID;
    }
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Analytic(a) => cmd_analytic(a, out),
        Command::Replay(a) => cmd_replay(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            if f.code == EXIT_INVALID {
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            f.code
        }
    }
}

/// A failed command: message plus exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn invalid(msg: impl ToString) -> Self {
        Failure { code: EXIT_INVALID, msg: msg.to_string() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_FAILURE, msg: format!("{}: {e}", path.display()) }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let code = match e.source {
            SimError::Budget(_) => EXIT_UNFINISHED,
            SimError::Config(_) => EXIT_INVALID,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Spec(s) => Failure::invalid(s),
            RunError::Experiment(x) => x.into(),
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    // a pool built earlier in this process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Writes CSV to `path`, or to `out` when no path is given, and the
/// summaries to whichever stream is not carrying CSV.
fn emit<'a>(rows: &[AggregateStats], path: Option<&Path>, out: &'a mut dyn Write, err: &'a mut dyn Write) -> Result<(), Failure> {
    let summaries = match path {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
            write_csv(std::io::BufWriter::new(file), rows).map_err(|e| Failure::io(path, e))?;
            out
        }
        None => {
            write_csv(&mut *out, rows).map_err(|e| Failure { code: EXIT_FAILURE, msg: e.to_string() })?;
            err
        }
    };
    for r in rows {
        let _ = writeln!(summaries, "{}", summary_line(r));
    }
    Ok(())
}

fn cmd_run(a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    if a.trials == 0 {
        return Err(Failure::invalid("trials must be at least 1"));
    }
    let cfg = NetworkConfig::new(a.n, a.m, a.p, a.b, a.seed).map_err(Failure::invalid)?;
    let rows = run_experiment(&[cfg], &[a.protocol], a.trials, a.seed)?;
    emit(&rows, a.out.as_deref(), out, err)
}

fn build_spec(a: &SweepArgs) -> Result<SweepSpec, Failure> {
    let mut spec = if let Some(name) = &a.preset {
        SweepSpec::preset(name).map_err(Failure::invalid)?
    } else if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        SweepSpec::from_json(&text).map_err(Failure::invalid)?
    } else {
        let param = a.param.ok_or_else(|| Failure::invalid("give --preset, --spec, or --param with --values"))?;
        SweepSpec {
            param,
            values: Vec::new(),
            fixed: Fixed { n: 5, m: 2, p: 0.1, b: 20 },
            m_series: Vec::new(),
            protocols: vec![Protocol::DncSim, Protocol::JncCr],
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        }
    };
    if let Some(p) = a.param {
        spec.param = p;
    }
    if let Some(v) = &a.values {
        spec.values = v.clone();
    }
    if let Some(ms) = &a.m_series {
        spec.m_series = ms.clone();
    }
    if let Some(ps) = &a.protocols {
        spec.protocols = ps.clone();
    }
    spec.fixed.n = a.n.unwrap_or(spec.fixed.n);
    spec.fixed.m = a.m.unwrap_or(spec.fixed.m);
    spec.fixed.p = a.p.unwrap_or(spec.fixed.p);
    spec.fixed.b = a.b.unwrap_or(spec.fixed.b);
    spec.trials = a.trials.unwrap_or(spec.trials);
    spec.seed = a.seed.unwrap_or(spec.seed);
    spec.grid().map_err(Failure::invalid)?;
    Ok(spec)
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let spec = build_spec(&a)?;
    let rows = spec.run()?;
    emit(&rows, a.out.as_deref(), out, err)?;
    if let Some(path) = &a.svg {
        let f = spec.fixed;
        let fixed: Vec<String> = [(Param::N, f.n.to_string()), (Param::M, f.m.to_string()), (Param::P, sig(f.p, 6)), (Param::B, f.b.to_string())]
            .into_iter()
            .filter(|(p, _)| *p != spec.param && !(*p == Param::M && !spec.m_series.is_empty()))
            .map(|(p, v)| format!("{p}={v}"))
            .collect();
        let title = format!("Mean retransmissions vs {} ({})", spec.param, fixed.join(", "));
        let chart = svg::render(&title, spec.param.name(), &svg::series(&spec, &rows));
        fs::write(path, chart).map_err(|e| Failure::io(path, e))?;
    }
    Ok(())
}

fn cmd_analytic(a: AnalyticArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let expected = dnc_expected_transmissions(a.n, a.b, a.p).map_err(|e| match e {
        DncError::DivergentExpectation => Failure { code: EXIT_UNFINISHED, msg: format!("p = {} never delivers: {e}", a.p) },
        DncError::InvalidArgument => Failure::invalid(e),
    })?;
    let (n, b) = (a.n as u64, a.b as u64);
    let _ = writeln!(out, "expected DNC transmissions per AP (q = infinity, N={}, B={}, p={}): {}", a.n, a.b, sig(a.p, 6), sig(expected, 6));
    let _ = writeln!(out, "expected retransmissions per AP: {}", sig(expected - a.b as f64, 6));
    let _ = writeln!(out, "\nscheme      overhead_bits");
    let _ = writeln!(out, "{:<11} {}", "jnc", overhead_bits(OverheadScheme::Jnc, n, b, 2));
    let _ = writeln!(out, "{:<11} {}", "xor", overhead_bits(OverheadScheme::Xor, n, b, 2));
    for q in [2u64, 16, 256] {
        let _ = writeln!(out, "{:<11} {}", format!("dnc q={q}"), overhead_bits(OverheadScheme::DncQ, n, b, q));
    }
    Ok(())
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.matrix).map_err(|e| Failure::invalid(format!("{}: {e}", a.matrix.display())))?;
    let matrix: ReceptionMatrix = text.parse().map_err(|e| Failure::invalid(format!("{}: {e}", a.matrix.display())))?;
    let (result, trace) = replay_traced(&matrix, a.protocol);
    for (i, rec) in trace.iter().enumerate() {
        let _ = writeln!(out, "{}", describe_slot(i + 1, rec, matrix.b));
    }
    let _ = writeln!(
        out,
        "total: {} slots ({} AP transmissions) with {}",
        result.retransmissions,
        result.transmissions,
        a.protocol.tag()
    );
    Ok(())
}

/// One trace line, for example
/// `slot 1 [stage1] AP1+AP2 send (c1⊕c2)⊙(c3⊕c4); R1 decodes c1; R2 decodes c2`.
pub fn describe_slot(slot: usize, rec: &SlotRecord, batch: u32) -> String {
    let mut line = format!("slot {slot} [{}] ", rec.phase);
    match &rec.tx {
        Transmission::Clean { ap, packet } => line += &format!("{ap} sends {}", packet.display(batch)),
        Transmission::Collision(jp) => line += &format!("{}+{} send {}", Ap::One, Ap::Two, jp.display(batch)),
        Transmission::Dense { ap } => {
            line += &format!("{ap} sends a dense combination");
            if !rec.dense_hits.is_empty() {
                let hits: Vec<String> = rec.dense_hits.iter().map(|r| r.to_string()).collect();
                line += &format!("; innovative at {}", hits.join(", "));
            }
        }
    }
    for (r, ids) in &rec.decoded {
        if !ids.is_empty() {
            let labels: Vec<String> = ids.iter().map(|id| id.label(batch)).collect();
            line += &format!("; {r} decodes {}", labels.join(", "));
        }
    }
    line
}
