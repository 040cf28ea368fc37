//! Command implementations behind the `qdegrade` binary.
//!
//! Every command writes its document to `--output` (or stdout) and maps its
//! outcome onto an exit code: 0 YES / pass, 1 NO / fail, 2 INCONCLUSIVE,
//! 3 for anything wrong with the input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qdegrade::capacity::{
    one_shot_optimize, td_complement_capacity, CapacityResult, CapacityStatus, Method,
    OptimizerConfig,
};
use qdegrade::degradability::{
    candidate_map, decide, ecd_screen, verify_certificate, CertificateCheck, Query, ScreenReport,
    SearchConfig, VerdictDoc,
};
use qdegrade::io::{load_certificate, SCHEMA_VERSION};
use qdegrade::linalg::eigenvalues;
use qdegrade::zoo::{td_channel, td_complement_qubit, ChannelSpec, TdParams};
use qdegrade::{Channel, Mode, Status, Tolerance};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qdegrade::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "qdegrade",
    version,
    about = "Degradability and capacity of quantum channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide (anti)degradability of a channel.
    Decide(DecideArgs),
    /// Choi eigenvalues of the antidegrading candidate over a t grid.
    SweepEigs(SweepArgs),
    /// Complement capacity of the transpose-depolarizing channel over a t grid.
    Capacity(CapacityArgs),
    /// Exclusion rules for exclusively conjugate degradable channels.
    Screen(ScreenArgs),
    /// Re-check a stored certificate.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Default,
    Strict,
    Loose,
}

impl Profile {
    pub fn tolerance(self) -> Tolerance {
        match self {
            Profile::Default => Tolerance::default(),
            Profile::Strict => Tolerance {
                rank_tol: 1e-12,
                psd_tol: 1e-11,
                residual_tol: 1e-11,
            },
            Profile::Loose => Tolerance {
                rank_tol: 1e-8,
                psd_tol: 1e-7,
                residual_tol: 1e-7,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    #[arg(
        long,
        value_enum,
        env = "QDEGRADE_TOLERANCE",
        default_value = "default"
    )]
    pub tolerance: Profile,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    #[arg(long)]
    pub psd_tol: Option<f64>,
    #[arg(long)]
    pub residual_tol: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> CliResult<Tolerance> {
        let base = self.tolerance.tolerance();
        Ok(Tolerance::new(
            self.rank_tol.unwrap_or(base.rank_tol),
            self.psd_tol.unwrap_or(base.psd_tol),
            self.residual_tol.unwrap_or(base.residual_tol),
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct DecideArgs {
    #[arg(long)]
    pub channel: ChannelSpec,
    #[arg(long)]
    pub mode: Mode,
    /// Search the solution family when the candidate is not a channel.
    #[arg(long)]
    pub search: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Grid {
    #[arg(long)]
    pub d: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(CliError::Usage(format!(
                "bad grid [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.points == 0 {
            return Err(CliError::Usage("grid needs at least one point".into()));
        }
        if !matches!(self.d, 2 | 3) {
            return Err(CliError::Usage(format!("d must be 2 or 3, got {}", self.d)));
        }
        let n = self.points;
        let ts: Vec<f64> = if n == 1 {
            vec![self.start]
        } else {
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        };
        // reject the whole grid up front rather than failing halfway
        for &t in &ts {
            TdParams::new(self.d, t)?;
        }
        Ok(ts)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: Grid,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub grid: Grid,
    /// Maximize the coherent information over inputs instead of using I/d.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub max_iters: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScreenArgs {
    #[arg(long)]
    pub channel: ChannelSpec,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub certificate: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: TolArgs,
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, doc: &T) -> CliResult<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// 17 significant digits, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialized name of a unit enum, e.g. `NUMERICAL_EVIDENCE`.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Decide(a) => cmd_decide(&a),
        Command::SweepEigs(a) => cmd_sweep_eigs(&a),
        Command::Capacity(a) => cmd_capacity(&a),
        Command::Screen(a) => cmd_screen(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Yes => EXIT_YES,
        Status::No => EXIT_NO,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub fn cmd_decide(a: &DecideArgs) -> CliResult<u8> {
    let tol = a.tol.resolve()?;
    let seed = match (a.search, a.seed) {
        (true, None) => return Err(CliError::Usage("--search requires --seed".into())),
        (_, s) => s.unwrap_or(0),
    };
    let channel = a.channel.build(&tol)?;
    let cfg = SearchConfig {
        restarts: a.restarts,
        max_iters: a.max_iters,
        seed,
        tol,
        ..SearchConfig::default()
    };
    let label = channel.label().to_string();
    let verdict = decide(
        &Query {
            channel,
            mode: a.mode,
            search: a.search,
        },
        &cfg,
    )?;
    let doc: VerdictDoc = verdict.to_doc(&label, a.mode);
    write_json(a.output.as_deref(), &doc)?;
    eprintln!("{}: {} ({})", a.mode, verdict.status, tag(&verdict.reason));
    Ok(exit_code(verdict.status))
}

/// Antidegradability problem for the TD channel with a fixed environment
/// size: the 4-dim template for qubits, a 9-dim padded dilation for qutrits.
fn td_antidegrading_problem(d: usize, t: f64, tol: &Tolerance) -> CliResult<(Channel, Channel)> {
    let td = td_channel(TdParams::new(d, t)?, tol)?;
    let comp = if d == 2 {
        td_complement_qubit(t, tol)?
    } else {
        let padded = Channel::from_kraus(td.label(), td.kraus().padded(d * d), tol)?;
        padded.complement(tol)?
    };
    Ok((comp, td))
}

#[derive(Debug, Serialize)]
struct EigRow {
    t: f64,
    eigenvalues: Vec<f64>,
}

pub fn sweep_eig_rows(grid: &Grid, tol: &Tolerance) -> CliResult<Vec<(f64, Vec<f64>)>> {
    grid.values()?
        .into_par_iter()
        .map(|t| {
            let (comp, td) = td_antidegrading_problem(grid.d, t, tol)?;
            let cand = candidate_map(comp.superop(), td.superop(), tol)?;
            if !cand.consistent {
                eprintln!(
                    "warning: t={t}: no linear antidegrading map (residual {:.3e}), row shows the least-squares candidate",
                    cand.residual
                );
            }
            let choi = qdegrade::channel::superop_to_choi(&cand.map);
            Ok((t, eigenvalues(choi.matrix())?))
        })
        .collect()
}

pub fn cmd_sweep_eigs(a: &SweepArgs) -> CliResult<u8> {
    let tol = a.tol.resolve()?;
    let rows = sweep_eig_rows(&a.grid, &tol)?;
    match a.format {
        Format::Csv => {
            let mut w = sink(a.output.as_deref())?;
            let k = rows.first().map_or(0, |r| r.1.len());
            let mut header = vec!["t".to_string()];
            header.extend((1..=k).map(|i| format!("lambda_{i}")));
            writeln!(w, "{}", header.join(","))?;
            for (t, e) in &rows {
                let mut cells = vec![fmt_f64(*t)];
                cells.extend(e.iter().map(|x| fmt_f64(*x)));
                writeln!(w, "{}", cells.join(","))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc: Vec<EigRow> = rows
                .into_iter()
                .map(|(t, eigenvalues)| EigRow { t, eigenvalues })
                .collect();
            write_json(a.output.as_deref(), &doc)?;
        }
    }
    Ok(EXIT_YES)
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityRow {
    pub t: f64,
    pub value: f64,
    pub base: f64,
    pub method: Method,
    pub status: CapacityStatus,
    /// Inside the parameter range realized by optimal asymmetric cloners.
    pub cloner: bool,
}

fn cloner_interval(d: usize) -> (f64, f64) {
    if d == 2 {
        (0.0, 1.0 / 3.0)
    } else {
        (0.0, 0.25)
    }
}

pub fn capacity_rows(
    grid: &Grid,
    optimize: Option<OptimizerConfig>,
    tol: &Tolerance,
) -> CliResult<Vec<CapacityRow>> {
    let (lo, hi) = cloner_interval(grid.d);
    let d = grid.d;
    grid.values()?
        .into_par_iter()
        .map(|t| {
            let r: CapacityResult = match optimize {
                None => td_complement_capacity(d, t)?,
                Some(cfg) => {
                    let (comp, _) = td_antidegrading_problem(d, t, tol)?;
                    one_shot_optimize(&comp, &cfg, d as f64)?
                }
            };
            Ok(CapacityRow {
                t,
                value: r.value,
                base: r.base,
                method: r.method,
                status: r.status,
                cloner: t >= lo - 1e-12 && t <= hi + 1e-12,
            })
        })
        .collect()
}

pub fn cmd_capacity(a: &CapacityArgs) -> CliResult<u8> {
    let tol = a.tol.resolve()?;
    let optimize = match (a.optimize, a.seed) {
        (true, None) => return Err(CliError::Usage("--optimize requires --seed".into())),
        (true, Some(seed)) => Some(OptimizerConfig {
            restarts: a.restarts,
            max_iters: a.max_iters,
            seed,
        }),
        (false, _) => None,
    };
    let rows = capacity_rows(&a.grid, optimize, &tol)?;
    match a.format {
        Format::Csv => {
            let mut w = sink(a.output.as_deref())?;
            writeln!(w, "t,value,base,method,status,cloner")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.value),
                    r.base,
                    tag(&r.method),
                    tag(&r.status),
                    r.cloner
                )?;
            }
            w.flush()?;
        }
        Format::Json => write_json(a.output.as_deref(), &rows)?,
    }
    Ok(EXIT_YES)
}

#[derive(Debug, Serialize)]
pub struct ScreenDoc {
    pub schema_version: u32,
    pub label: String,
    #[serde(flatten)]
    pub report: ScreenReport,
}

pub fn cmd_screen(a: &ScreenArgs) -> CliResult<u8> {
    let tol = a.tol.resolve()?;
    let channel = a.channel.build(&tol)?;
    let report = ecd_screen(&channel, &tol)?;
    write_json(
        a.output.as_deref(),
        &ScreenDoc {
            schema_version: SCHEMA_VERSION,
            label: channel.label().to_string(),
            report,
        },
    )?;
    Ok(EXIT_YES)
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub schema_version: u32,
    pub label: String,
    pub passed: bool,
    pub check: Option<CertificateCheck>,
    pub message: Option<String>,
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<u8> {
    let tol = a.tol.resolve()?;
    let doc = load_certificate(&a.certificate)?;
    let map = doc.map.to_superop()?;
    let target = doc.target.to_superop()?;
    let out = match &doc.certificate {
        None => VerifyDoc {
            schema_version: SCHEMA_VERSION,
            label: doc.label.clone(),
            passed: false,
            check: None,
            message: Some("document carries no certificate".into()),
        },
        Some(c) => {
            let check = verify_certificate(&map, &target, &c.to_superop()?, &tol)?;
            VerifyDoc {
                schema_version: SCHEMA_VERSION,
                label: doc.label.clone(),
                passed: check.passed,
                check: Some(check),
                message: None,
            }
        }
    };
    write_json(a.output.as_deref(), &out)?;
    Ok(if out.passed { EXIT_YES } else { EXIT_NO })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d: usize, start: f64, stop: f64, points: usize) -> Grid {
        Grid {
            d,
            start,
            stop,
            points,
        }
    }

    #[test]
    fn grid_hits_both_endpoints_exactly() {
        let g = grid(2, -1.0, 1.0 / 3.0, 7).values().unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[6], 1.0 / 3.0);
        assert_eq!(grid(3, 0.1, 0.1, 1).values().unwrap(), vec![0.1]);
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(grid(2, 0.2, 0.1, 3).values().is_err());
        assert!(grid(2, 0.0, 0.1, 0).values().is_err());
        assert!(grid(5, 0.0, 0.1, 3).values().is_err());
        assert!(grid(3, -0.6, 0.0, 3).values().is_err());
    }

    #[test]
    fn floats_round_trip_through_csv() {
        for x in [0.1, -2.0 / 3.0, 1e-300, 0.0, 3f64.log2() - 1.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn explicit_tolerance_overrides_profile() {
        let a = TolArgs {
            tolerance: Profile::Loose,
            rank_tol: None,
            psd_tol: Some(1e-3),
            residual_tol: None,
        };
        let t = a.resolve().unwrap();
        assert_eq!((t.rank_tol, t.psd_tol), (1e-8, 1e-3));
        let bad = TolArgs {
            residual_tol: Some(-1.0),
            ..a
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
