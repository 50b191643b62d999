//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 success, 1 check failure, 2 invalid input,
//! 3 resource cap.

use crate::compare::{default_observables, mc_vs_hydro, mc_vs_spectral};
use crate::error::{Error, Result};
use crate::hydro::{
    density_reconstruct, limit_moments, step_report, write_density_csv, CharFlow, InitialProfile, DEFAULT_GRID,
    DEFAULT_N_MAX,
};
use crate::messep::{Configuration, LatticeParams, SpectralKernel};
use crate::simulator::{run as simulate, write_moments_csv, RunSpec};
use crate::udbm::{low_density_compare, write_compare_csv, SpectralIndex, TimeMatching};
use crate::verify::{run_suite, Suite, VerifyOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "messep-lab", version, about = "Spectra, simulation and hydrodynamics of the maximal entropy exclusion process")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Multiplies floating-point tolerances.
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues, gap, ψ and the partition labelling for one (L, N).
    Spectrum {
        #[arg(long)]
        ring: Option<usize>,
        #[arg(long)]
        particles: Option<usize>,
    },
    /// Run a verification suite and print one JSON verdict per check.
    Verify {
        #[arg(value_enum)]
        suite: Option<SuiteArg>,
    },
    /// Density reconstructions, limiting moments and step-profile fronts.
    Hydro {
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        /// Mode number of the single-mode profile.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Monte Carlo trajectories; empirical moments to CSV.
    Simulate {
        #[arg(long)]
        ring: Option<usize>,
        #[arg(long)]
        particles: Option<usize>,
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
    },
    /// Error tables between Monte Carlo, exact and limiting predictions.
    Compare {
        #[arg(value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        paths: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Characters,
    SchurIdentities,
    Eigenbasis,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    Step,
    SingleMode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    McVsSpectral,
    MessepVsUdbm,
    McVsHydro,
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance_scale: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumParams {
    ring: usize,
    particles: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    #[serde(default = "default_suite")]
    suite: Suite,
    n_max: Option<usize>,
    ring_max: Option<usize>,
    samples: Option<usize>,
    tolerance_scale: Option<f64>,
}

fn default_suite() -> Suite {
    Suite::All
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HydroParams {
    profile: InitialProfile,
    alpha: f64,
    times: Vec<f64>,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default = "default_n_max")]
    n_max: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_n_max() -> usize {
    DEFAULT_N_MAX
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
enum CompareParams {
    McVsSpectral {
        #[serde(default = "ten")]
        ring: usize,
        #[serde(default = "three")]
        particles: usize,
        #[serde(default = "spectral_start")]
        start: Vec<usize>,
        #[serde(default = "spectral_steps")]
        steps: Vec<u64>,
        #[serde(default = "spectral_paths")]
        paths: usize,
        /// Largest accepted z-score.
        #[serde(default = "three_f")]
        sigmas: f64,
    },
    MessepVsUdbm {
        #[serde(default = "udbm_m")]
        m: Vec<i64>,
        #[serde(default = "udbm_t")]
        t: f64,
        #[serde(default = "udbm_rings")]
        rings: Vec<usize>,
        #[serde(default = "udbm_x0")]
        x0: Vec<f64>,
        #[serde(default)]
        matching: TimeMatching,
    },
    McVsHydro {
        #[serde(default = "hydro_ring")]
        ring: usize,
        #[serde(default = "hydro_particles")]
        particles: usize,
        #[serde(default = "hydro_t")]
        t: f64,
        #[serde(default = "hydro_paths")]
        paths: usize,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default = "hydro_bandwidth")]
        bandwidth: f64,
        #[serde(default = "hydro_tolerance")]
        tolerance: f64,
    },
}

fn ten() -> usize {
    10
}
fn three() -> usize {
    3
}
fn three_f() -> f64 {
    3.0
}
fn spectral_start() -> Vec<usize> {
    vec![0, 1, 3]
}
fn spectral_steps() -> Vec<u64> {
    vec![1, 5, 20, 200]
}
fn spectral_paths() -> usize {
    100_000
}
fn udbm_m() -> Vec<i64> {
    vec![-1, 1]
}
fn udbm_t() -> f64 {
    0.05
}
fn udbm_rings() -> Vec<usize> {
    vec![32, 64, 128]
}
fn udbm_x0() -> Vec<f64> {
    vec![0.0, 2.0]
}
fn hydro_ring() -> usize {
    600
}
fn hydro_particles() -> usize {
    300
}
fn hydro_t() -> f64 {
    0.01
}
fn hydro_paths() -> usize {
    20
}
fn hydro_bandwidth() -> f64 {
    0.05
}
fn hydro_tolerance() -> f64 {
    0.05
}

/// Exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CheckFailed(_) | Error::NumericalFailure(_) | Error::DegenerateEvaluation(_) => 1,
        Error::InvalidArgument(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 2,
        Error::ResourceCap { .. } => 3,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

struct Context {
    out: PathBuf,
    seed: u64,
    tolerance_scale: f64,
}

impl Context {
    fn file(&self, name: &str) -> Result<BufWriter<File>> {
        fs::create_dir_all(&self.out)?;
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    fn write_json(&self, name: &str, v: &impl Serialize) -> Result<()> {
        let mut f = self.file(name)?;
        serde_json::to_writer_pretty(&mut f, v)?;
        std::io::Write::write_all(&mut f, b"\n")?;
        Ok(())
    }
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

// Config parameters overridden by explicit flags.
fn merge(params: &Value, overrides: Vec<(&str, Option<Value>)>) -> Result<Value> {
    let mut map = match params {
        Value::Null => Map::new(),
        Value::Object(m) => m.clone(),
        _ => return Err(Error::invalid("config params must be a JSON object")),
    };
    for (k, v) in overrides {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    }
    Ok(Value::Object(map))
}

fn parse<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::invalid(format!("parameters: {e}")))
}

fn opt<T: Serialize>(v: Option<T>) -> Option<Value> {
    v.map(|x| serde_json::to_value(x).expect("serialisable flag"))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum { .. } => "spectrum",
        Command::Verify { .. } => "verify",
        Command::Hydro { .. } => "hydro",
        Command::Simulate { .. } => "simulate",
        Command::Compare { .. } => "compare",
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::invalid("--threads must be positive"));
        }
        // a global pool can only be installed once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = cli.config.as_deref().map(read_config).transpose()?;
    let params = config.as_ref().map_or(Value::Null, |c| c.params.clone());
    let ctx = Context {
        out: cli.out.or_else(|| config.as_ref().and_then(|c| c.out.clone())).unwrap_or_else(|| PathBuf::from(".")),
        seed: cli.seed.or(config.as_ref().and_then(|c| c.seed)).unwrap_or(0),
        tolerance_scale: cli.tolerance_scale.or(config.as_ref().and_then(|c| c.tolerance_scale)).unwrap_or(1.0),
    };
    if !(ctx.tolerance_scale > 0.0) {
        return Err(Error::invalid("--tolerance-scale must be positive"));
    }
    let command = match (cli.command, &config) {
        (Some(c), Some(cfg)) if command_name(&c) != cfg.command => {
            return Err(Error::invalid(format!("config is for {:?}, not {:?}", cfg.command, command_name(&c))));
        }
        (Some(c), _) => c,
        (None, Some(cfg)) => match cfg.command.as_str() {
            "spectrum" => Command::Spectrum { ring: None, particles: None },
            "verify" => Command::Verify { suite: None },
            "hydro" => Command::Hydro { alpha: None, times: None, profile: None, p: None, grid: None },
            "simulate" => Command::Simulate { ring: None, particles: None, paths: None, times: None },
            "compare" => Command::Compare { mode: None, paths: None },
            other => return Err(Error::invalid(format!("unknown command {other:?}"))),
        },
        (None, None) => return Err(Error::invalid("no command given (see --help)")),
    };
    match command {
        Command::Spectrum { ring, particles } => {
            cmd_spectrum(parse(merge(&params, vec![("ring", opt(ring)), ("particles", opt(particles))])?)?, &ctx)
        }
        Command::Verify { suite } => {
            let name = suite.map(|s| {
                Value::String(match s {
                    SuiteArg::Characters => "characters",
                    SuiteArg::SchurIdentities => "schur-identities",
                    SuiteArg::Eigenbasis => "eigenbasis",
                    SuiteArg::All => "all",
                }
                .into())
            });
            cmd_verify(parse(merge(&params, vec![("suite", name)])?)?, &ctx)
        }
        Command::Hydro { alpha, times, profile, p, grid } => {
            let profile = match (profile, p) {
                (Some(ProfileArg::Step), _) => Some(json!({ "kind": "step" })),
                (Some(ProfileArg::SingleMode), p) => Some(json!({ "kind": "single_mode", "p": p.unwrap_or(1) })),
                (None, Some(_)) => return Err(Error::invalid("--p needs --profile single-mode")),
                (None, None) => None,
            };
            let merged = merge(
                &params,
                vec![("alpha", opt(alpha)), ("times", opt(times)), ("profile", profile), ("grid", opt(grid))],
            )?;
            cmd_hydro(parse(merged)?, &ctx)
        }
        Command::Simulate { ring, particles, paths, times } => {
            let mut merged = merge(&params, vec![("paths", opt(paths)), ("times", opt(times))])?;
            if ring.is_some() || particles.is_some() {
                let lattice = merged.get("params").cloned().unwrap_or(Value::Null);
                let lattice = merge(&lattice, vec![("ring", opt(ring)), ("particles", opt(particles))])?;
                merged["params"] = lattice;
            }
            merged["seed"] = json!(ctx.seed);
            if merged.get("initial").is_none() {
                merged["initial"] = json!({ "kind": "packed_block" });
            }
            cmd_simulate(parse(merged)?, &ctx)
        }
        Command::Compare { mode, paths } => {
            let mode = mode.map(|m| {
                Value::String(match m {
                    ModeArg::McVsSpectral => "mc-vs-spectral",
                    ModeArg::MessepVsUdbm => "messep-vs-udbm",
                    ModeArg::McVsHydro => "mc-vs-hydro",
                }
                .into())
            });
            cmd_compare(parse(merge(&params, vec![("mode", mode), ("paths", opt(paths))])?)?, &ctx)
        }
    }
}

fn cmd_spectrum(p: SpectrumParams, ctx: &Context) -> Result<()> {
    let params = LatticeParams::new(p.ring, p.particles)?;
    let kernel = SpectralKernel::new(params)?;
    let mut w = csv::Writer::from_writer(ctx.file("spectrum.csv")?);
    w.write_record(["index", "sites", "partition", "eigenvalue", "psi"])?;
    for i in 0..kernel.len() {
        let sites: Vec<String> = kernel.configs[i].sites().iter().map(|s| s.to_string()).collect();
        let parts: Vec<String> = kernel.partitions[i].parts().iter().map(|s| s.to_string()).collect();
        w.write_record([
            i.to_string(),
            sites.join(" "),
            parts.join(" "),
            kernel.eigenvalues[i].to_string(),
            kernel.psi[i].to_string(),
        ])?;
    }
    w.flush()?;
    let mut sorted = kernel.eigenvalues.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let summary = json!({
        "ring": p.ring,
        "particles": p.particles,
        "states": kernel.len(),
        "rho": kernel.rho,
        "gap": kernel.gap(),
        "eigenvalues": sorted,
    });
    ctx.write_json("spectrum.json", &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn cmd_verify(p: VerifyParams, ctx: &Context) -> Result<()> {
    let d = VerifyOptions::default();
    let options = VerifyOptions {
        n_max: p.n_max.unwrap_or(d.n_max),
        ring_max: p.ring_max.unwrap_or(d.ring_max),
        samples: p.samples.unwrap_or(d.samples),
        seed: ctx.seed,
        tolerance_scale: p.tolerance_scale.unwrap_or(1.0) * ctx.tolerance_scale,
    };
    let verdicts = run_suite(p.suite, &options)?;
    for v in &verdicts {
        println!("{}", serde_json::to_string(v)?);
    }
    ctx.write_json("verify.json", &verdicts)?;
    let failed: Vec<&str> = verdicts.iter().filter(|v| !v.passed).map(|v| v.check.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        let shown = failed.iter().take(10).copied().collect::<Vec<_>>().join(", ");
        let more = if failed.len() > 10 { ", ..." } else { "" };
        Err(Error::CheckFailed(format!("{} check(s) failed: {shown}{more}", failed.len())))
    }
}

fn cmd_hydro(p: HydroParams, ctx: &Context) -> Result<()> {
    if p.times.is_empty() {
        return Err(Error::invalid("no times given"));
    }
    let flow = CharFlow::new(p.alpha, p.profile.clone())?;
    let mut grids = Vec::new();
    for (k, &t) in p.times.iter().enumerate() {
        let g = density_reconstruct(t, &flow, p.grid)?;
        write_density_csv(std::slice::from_ref(&g), ctx.file(&format!("density_{k}.csv"))?)?;
        grids.push(g);
    }
    let mut w = csv::Writer::from_writer(ctx.file("moments.csv")?);
    w.write_record(["t", "n", "re", "im"])?;
    for &t in &p.times {
        for (n, m) in limit_moments(p.n_max, t, &flow)?.iter().enumerate() {
            w.write_record([t.to_string(), (n + 1).to_string(), m.re.to_string(), m.im.to_string()])?;
        }
    }
    w.flush()?;
    let summary: Vec<Value> = grids
        .iter()
        .map(|g| {
            json!({
                "t": g.t,
                "mass": g.mass(),
                "saturated_low": g.saturated_low.iter().filter(|&&b| b).count(),
                "saturated_high": g.saturated_high.iter().filter(|&&b| b).count(),
                "front": g.front.iter().filter(|&&b| b).count(),
            })
        })
        .collect();
    if p.profile == InitialProfile::Step {
        let reports = p.times.iter().map(|&t| step_report(p.alpha, t)).collect::<Result<Vec<_>>>()?;
        ctx.write_json("fronts.json", &reports)?;
    }
    ctx.write_json("hydro.json", &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn cmd_simulate(job: RunSpec, ctx: &Context) -> Result<()> {
    let records = simulate(&job)?;
    write_moments_csv(&records, ctx.file("moments.csv")?)?;
    println!("{}", json!({ "paths": records.len(), "times": job.times }));
    Ok(())
}

fn cmd_compare(p: CompareParams, ctx: &Context) -> Result<()> {
    match p {
        CompareParams::McVsSpectral { ring, particles, start, steps, paths, sigmas } => {
            let params = LatticeParams::new(ring, particles)?;
            let start = Configuration::new(start, ring)?;
            let rows = mc_vs_spectral(params, &start, &steps, paths, ctx.seed, &default_observables())?;
            let mut w = csv::Writer::from_writer(ctx.file("compare_spectral.csv")?);
            w.write_record(["observable", "steps", "mc_re", "mc_im", "std_err", "exact_re", "exact_im", "z"])?;
            for r in &rows {
                w.write_record([
                    r.observable.clone(),
                    r.steps.to_string(),
                    r.estimate.mean.re.to_string(),
                    r.estimate.mean.im.to_string(),
                    r.estimate.std_err.to_string(),
                    r.exact.re.to_string(),
                    r.exact.im.to_string(),
                    r.z_score.to_string(),
                ])?;
            }
            w.flush()?;
            let limit = sigmas * ctx.tolerance_scale;
            let worst = rows.iter().map(|r| r.z_score).fold(0.0, f64::max);
            println!("{}", json!({ "mode": "mc-vs-spectral", "max_z": worst, "limit": limit }));
            if worst > limit {
                return Err(Error::CheckFailed(format!("max z-score {worst:.3} exceeds {limit}")));
            }
        }
        CompareParams::MessepVsUdbm { m, t, rings, x0, matching } => {
            let m = SpectralIndex::new(m)?;
            let rows = low_density_compare(&rings, &m, t, &x0, matching)?;
            write_compare_csv(&rows, ctx.file("compare_udbm.csv")?)?;
            let ratios: Vec<f64> = rows.windows(2).map(|w| w[0].abs_err / w[1].abs_err).collect();
            println!("{}", json!({ "mode": "messep-vs-udbm", "errors": rows.iter().map(|r| r.abs_err).collect::<Vec<_>>(), "ratios": ratios }));
        }
        CompareParams::McVsHydro { ring, particles, t, paths, grid, bandwidth, tolerance } => {
            let cmp = mc_vs_hydro(ring, particles, t, paths, ctx.seed, grid, bandwidth)?;
            let mut w = csv::Writer::from_writer(ctx.file("compare_hydro.csv")?);
            w.write_record(["x", "empirical", "hydro"])?;
            for j in 0..grid {
                w.write_record([cmp.hydro.x(j).to_string(), cmp.empirical[j].to_string(), cmp.hydro.f[j].to_string()])?;
            }
            w.flush()?;
            let limit = tolerance * ctx.tolerance_scale;
            println!("{}", json!({ "mode": "mc-vs-hydro", "l1": cmp.l1, "limit": limit }));
            if cmp.l1 > limit {
                return Err(Error::CheckFailed(format!("L1 distance {:.4} exceeds {limit}", cmp.l1)));
            }
        }
    }
    Ok(())
}
