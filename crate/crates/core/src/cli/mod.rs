//! Command-line surface: `simulate`, `beamform`, `imageproc`, `validate`.
//!
//! Exit codes: 0 success, 2 usage, 3 validation failure (bad inputs or a
//! failed check), 4 I/O, 5 numerical failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::beamform::{
    default_grid, make_grid, BackprojectOptions, Backprojector, Interpolation, Normalization,
    RayModel, VoxelGrid,
};
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::imageproc::{
    depth_gain, drc, median_background, mip, normalize, slice, Axis, DrcParams, MedianKernel,
};
use crate::io::{
    ping_file_name, read_index, read_ping, read_volume, write_image, write_index, write_ping,
    write_volume, IndexEntry, PgmDepth, RunManifest,
};
use crate::scene::{load_scenario, scenario_hash, Scenario};
use crate::synth::{make_waveform, matched_filter, simulate_survey_with};
use crate::validate::{run_suite, Suite, ValidateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

/// Maps an error to its documented exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => EXIT_USAGE,
        Error::Parse { .. }
        | Error::Validation { .. }
        | Error::Config(_)
        | Error::RecordLength { .. }
        | Error::GridMismatch(_) => EXIT_VALIDATION,
        Error::Io { .. } | Error::Format { .. } => EXIT_IO,
        Error::Numerical(_) => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "subbottom-sas",
    version,
    about = "Sub-bottom sonar simulation, beamforming and imaging"
)]
pub struct Cli {
    /// Worker threads for simulation and beamforming (default: all cores).
    #[arg(long, global = true, env = "SUBBOTTOM_SAS_WORKERS")]
    pub workers: Option<usize>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize every transmit event of a scenario into ping files.
    Simulate(SimulateArgs),
    /// Backproject a directory of ping files into a volume.
    Beamform(BeamformArgs),
    /// Post-process a volume into image products.
    Imageproc(ImageprocArgs),
    /// Run a validation suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario TOML file.
    pub scenario: PathBuf,
    /// Output directory for ping files, index and manifest.
    #[arg(short, long, env = "SUBBOTTOM_SAS_OUT", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BeamformArgs {
    /// Scenario TOML file the pings were simulated from.
    pub scenario: PathBuf,
    /// Directory holding the ping files and index.
    #[arg(long, env = "SUBBOTTOM_SAS_OUT", default_value = "out")]
    pub pings: PathBuf,
    /// Output volume (default: <pings>/volume.sbv).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Straight rays at the water sound speed instead of refracted rays.
    #[arg(long)]
    pub straight_ray: bool,
    /// Grid corner "x,y,z", m (default: the standard image tile).
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub origin: Option<[f64; 3]>,
    /// Grid extent "along,cross,depth", m.
    #[arg(long, value_parser = parse_triple)]
    pub extent: Option<[f64; 3]>,
    /// Voxel spacing, m.
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long, value_enum, default_value_t = InterpArg::Linear)]
    pub interp: InterpArg,
    /// Plain coherent sum instead of dividing by the pair count.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpArg {
    Linear,
    Nearest,
}

#[derive(Debug, Args)]
pub struct ImageprocArgs {
    /// Input volume file.
    pub volume: PathBuf,
    /// Output directory for image products.
    #[arg(short, long, env = "SUBBOTTOM_SAS_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Depth gain, dB/m.
    #[arg(long)]
    pub gain: Option<f64>,
    /// Median-background normalization (to dB).
    #[arg(long)]
    pub normalize: bool,
    /// Percentile clip and gamma before writing images.
    #[arg(long)]
    pub drc: bool,
    /// Maximum-intensity projections along the listed axes, e.g. "x,y,z".
    #[arg(long, value_delimiter = ',', value_parser = parse_axis)]
    pub mip: Vec<Axis>,
    /// Slices "axis=coordinate", e.g. "z=1.0"; repeatable.
    #[arg(long, value_parser = parse_slice)]
    pub slice: Vec<(Axis, f64)>,
    /// Write 16-bit instead of 8-bit graymaps.
    #[arg(long)]
    pub sixteen_bit: bool,
    /// Also write the processed volume.
    #[arg(long)]
    pub save_volume: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// sonar_equation, vcz, multipath_geometry, target_strength, psf,
    /// contrast, bookkeeping or determinism.
    pub suite: String,
    /// Ensemble size (suite default when absent).
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Offset for every derived seed.
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Also write the key=value report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    <[f64; 3]>::try_from(v).map_err(|_| "expected three comma-separated numbers".to_string())
}

fn parse_axis(s: &str) -> std::result::Result<Axis, String> {
    Axis::parse(s.trim()).ok_or_else(|| format!("unknown axis `{s}` (x, y or z)"))
}

fn parse_slice(s: &str) -> std::result::Result<(Axis, f64), String> {
    let (a, c) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}`: expected axis=coordinate"))?;
    let c = c.trim().parse::<f64>().map_err(|e| format!("`{c}`: {e}"))?;
    Ok((parse_axis(a)?, c))
}

fn load(path: &Path) -> Result<Scenario> {
    if !path.exists() {
        return Err(Error::Usage(format!(
            "scenario file {} not found",
            path.display()
        )));
    }
    load_scenario(path)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs a parsed command inside a pool of the requested size.
pub fn run(cli: Cli) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Error::Usage("--workers must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Simulate(a) => cmd_simulate(&a).map(|_| EXIT_OK),
        Command::Beamform(a) => cmd_beamform(&a).map(|_| EXIT_OK),
        Command::Imageproc(a) => cmd_imageproc(&a).map(|_| EXIT_OK),
        Command::Validate(a) => cmd_validate(&a),
    })
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<RunManifest> {
    let t0 = Instant::now();
    let s = load(&a.scenario)?;
    create_dir(&a.out)?;
    let hash = scenario_hash(&s);
    let mut manifest = RunManifest::new("simulate", hash, s.rng_seed);
    manifest.inputs.push(a.scenario.clone());
    let mut entries = Vec::new();
    simulate_survey_with(&s, |rec| {
        let name = ping_file_name(rec.ping_index);
        let path = a.out.join(&name);
        write_ping(&path, &rec)?;
        log::info!("wrote {}", path.display());
        manifest.outputs.push(path);
        entries.push(IndexEntry {
            file: name,
            ping_index: rec.ping_index,
            location_index: rec.location_index,
            tx_id: rec.tx_id,
            seed: rec.seed,
        });
        Ok(())
    })?;
    let index = a.out.join("index.txt");
    write_index(&index, hash, &entries)?;
    manifest.outputs.push(index);
    manifest.wall_time_s = t0.elapsed().as_secs_f64();
    manifest.write(&a.out.join("manifest.txt"))?;
    Ok(manifest)
}

fn beamform_grid(a: &BeamformArgs, s: &Scenario) -> Result<VoxelGrid> {
    if a.origin.is_none() && a.extent.is_none() && a.spacing.is_none() {
        return Ok(default_grid(s));
    }
    let d = default_grid(s);
    let origin = a
        .origin
        .map(|o| Vec3::new(o[0], o[1], o[2]))
        .unwrap_or(d.origin);
    let extent = a
        .extent
        .unwrap_or([0, 1, 2].map(|i| d.dims[i] as f64 * d.spacing[i]));
    make_grid(origin, extent, a.spacing.unwrap_or(d.spacing[0]))
}

pub fn cmd_beamform(a: &BeamformArgs) -> Result<RunManifest> {
    let t0 = Instant::now();
    let s = load(&a.scenario)?;
    let hash = scenario_hash(&s);
    let grid = beamform_grid(a, &s)?;
    let opts = BackprojectOptions {
        rays: if a.straight_ray {
            RayModel::Straight {
                speed: s.water.sound_speed,
            }
        } else {
            RayModel::Refracted
        },
        interpolation: match a.interp {
            InterpArg::Linear => Interpolation::Linear,
            InterpArg::Nearest => Interpolation::Nearest,
        },
        normalization: if a.no_normalize {
            Normalization::None
        } else {
            Normalization::PairCount
        },
        center_frequency: None,
    };
    let index_path = a.pings.join("index.txt");
    let entries = read_index(&index_path)?;
    let w = make_waveform(&s.waveform)?;
    let mut manifest = RunManifest::new("beamform", hash, s.rng_seed);
    manifest.inputs.push(a.scenario.clone());
    manifest.inputs.push(index_path);
    let mut bp = Backprojector::new(&grid, &s, opts);
    for e in &entries {
        let path = a.pings.join(&e.file);
        let rec = read_ping(&path)?;
        let rec = if rec.series.is_analytic() {
            rec
        } else {
            matched_filter(&rec, &w)?
        };
        bp.add_ping(&rec).map_err(|err| match err {
            Error::GridMismatch(m) => Error::GridMismatch(format!("{}: {m}", path.display())),
            other => other,
        })?;
        manifest.inputs.push(path);
    }
    let r = bp.finish();
    let out = a.out.clone().unwrap_or_else(|| a.pings.join("volume.sbv"));
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    write_volume(&out, &r.volume)?;
    let [nx, ny, nz] = grid.dims;
    log::info!(
        "wrote {} ({ny} cross x {nx} along x {nz} depth)",
        out.display()
    );
    manifest.outputs.push(out.clone());
    manifest.wall_time_s = t0.elapsed().as_secs_f64();
    manifest.write(&manifest_path(&out))?;
    Ok(manifest)
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.txt");
    PathBuf::from(s)
}

pub fn cmd_imageproc(a: &ImageprocArgs) -> Result<RunManifest> {
    let t0 = Instant::now();
    if a.mip.is_empty() && a.slice.is_empty() && !a.save_volume {
        return Err(Error::Usage(
            "no image products requested (use --mip, --slice or --save-volume)".into(),
        ));
    }
    let mut v = read_volume(&a.volume)?;
    let mut manifest = RunManifest::new("imageproc", v.provenance.scenario_hash, 0);
    manifest.inputs.push(a.volume.clone());
    if let Some(rate) = a.gain {
        v = depth_gain(&v, rate);
    }
    if a.normalize {
        let bg = median_background(&v, MedianKernel::default())?;
        v = normalize(&v, &bg)?;
    }
    if a.drc {
        v = drc(&v, DrcParams::default())?;
    }
    create_dir(&a.out)?;
    let depth = if a.sixteen_bit {
        PgmDepth::Sixteen
    } else {
        PgmDepth::Eight
    };
    let mut products = Vec::new();
    for &axis in &a.mip {
        products.push(mip(&v, axis));
    }
    for &(axis, coord) in &a.slice {
        products.push(slice(&v, axis, coord)?);
    }
    for mut img in products {
        if !a.drc {
            // Without a mapping, scale to the image's own range.
            let lo = img.data.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = img.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            img.data.iter_mut().for_each(|x| *x = (*x - lo) / span);
        }
        let path = a.out.join(format!("{}.pgm", img.label()));
        write_image(&path, &img, depth)?;
        manifest.outputs.push(path);
    }
    if a.save_volume {
        let path = a.out.join("processed.sbv");
        write_volume(&path, &v)?;
        manifest.outputs.push(path);
    }
    manifest.wall_time_s = t0.elapsed().as_secs_f64();
    manifest.write(&a.out.join("imageproc.manifest.txt"))?;
    Ok(manifest)
}

pub fn cmd_validate(a: &ValidateArgs) -> Result<i32> {
    let suite = Suite::parse(&a.suite)?;
    let report = run_suite(
        suite,
        ValidateOptions {
            seeds: a.seeds,
            base_seed: a.base_seed,
        },
    )?;
    print!("{}", report.render_text());
    print!("{}", report.render_kv());
    if let Some(p) = &a.report {
        std::fs::write(p, report.render_kv()).map_err(|e| Error::io(p, e))?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    })
}
