//! Statistical and geometric consistency experiments.
//!
//! Each experiment returns its measured quantities; the suite wrappers turn
//! them into pass/fail checks against fixed tolerances and render a report
//! as human-readable text or line-oriented `key=value` records.

mod coherence;
mod determinism;
mod imaging;
mod reverb;
mod scenes;
mod tables;

use std::fmt::Write as _;
use std::time::Instant;

pub use coherence::{vcz_experiment, CoherenceComparison, VczConfig};
pub use determinism::{determinism_experiment, DeterminismConfig, DeterminismOutcome};
pub use imaging::{
    contrast_experiment, depth_profile, highest_sidelobe_db, multipath_experiment, psf_experiment,
    ContrastConfig, ContrastOutcome, MultipathConfig, MultipathOutcome, PsfConfig, PsfOutcome,
};
pub use reverb::{
    predicted_mean_square, sonar_equation_experiment, ReverbComparison, SonarEquationConfig,
};
pub use scenes::{
    contrast_scene, cross_track_line_array, determinism_scene, multipath_scene, psf_scene,
    single_pair_array, single_pair_scene, vcz_scene,
};
pub use tables::{bookkeeping, target_strength_table, Bookkeeping, TargetStrengthTable};

use crate::error::{Error, Result};

/// One pass/fail line of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        measured: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            passed,
            measured: measured.into(),
            expected: expected.into(),
        }
    }

    /// `lo <= value <= hi`.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64, unit: &str) -> Self {
        Check::new(
            name,
            value >= lo && value <= hi,
            format!("{value:.4}{unit}"),
            format!("[{lo}, {hi}]{unit}"),
        )
    }

    /// `value <= limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64, unit: &str) -> Self {
        Check::new(
            name,
            value <= limit,
            format!("{value:.4}{unit}"),
            format!("<= {limit}{unit}"),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SonarEquation,
    Vcz,
    MultipathGeometry,
    TargetStrength,
    Psf,
    Contrast,
    Bookkeeping,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::TargetStrength,
        Suite::MultipathGeometry,
        Suite::Contrast,
        Suite::SonarEquation,
        Suite::Vcz,
        Suite::Psf,
        Suite::Bookkeeping,
        Suite::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SonarEquation => "sonar_equation",
            Suite::Vcz => "vcz",
            Suite::MultipathGeometry => "multipath_geometry",
            Suite::TargetStrength => "target_strength",
            Suite::Psf => "psf",
            Suite::Contrast => "contrast",
            Suite::Bookkeeping => "bookkeeping",
            Suite::Determinism => "determinism",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Usage(format!(
                    "unknown suite `{name}` (expected one of: {})",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Additional measured values, in report order.
    pub values: Vec<(String, String)>,
    pub seeds: usize,
    pub elapsed_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "suite {} : {status} ({} seeds, {:.1} s)",
            self.suite.name(),
            self.seeds,
            self.elapsed_s
        );
        for c in &self.checks {
            let s = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  [{s}] {}: {} (expected {})",
                c.name, c.measured, c.expected
            );
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "  {k} = {v}");
        }
        out
    }

    /// Line-oriented `key=value` records.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        let suite = self.suite.name();
        let _ = writeln!(out, "suite={suite}");
        let _ = writeln!(out, "{suite}.passed={}", self.passed());
        let _ = writeln!(out, "{suite}.seeds={}", self.seeds);
        let _ = writeln!(out, "{suite}.elapsed_s={:.3}", self.elapsed_s);
        for c in &self.checks {
            let _ = writeln!(out, "{suite}.check.{}.passed={}", c.name, c.passed);
            let _ = writeln!(out, "{suite}.check.{}.measured={}", c.name, c.measured);
            let _ = writeln!(out, "{suite}.check.{}.expected={}", c.name, c.expected);
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "{suite}.{k}={v}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidateOptions {
    /// Ensemble size; each suite has its own default.
    pub seeds: Option<usize>,
    /// Offset added to every derived seed.
    pub base_seed: u64,
}

/// Apparent-depth tolerance of the first-order multipath ridge, m.
pub const FIRST_RIDGE_DEPTH: (f64, f64) = (0.50, 0.70);
/// Apparent-depth band of the second-order ridge, m.
pub const SECOND_RIDGE_DEPTH: (f64, f64) = (2.9, 3.1);
/// Accepted buried-cylinder contrast band, dB.
pub const CONTRAST_BAND_DB: (f64, f64) = (7.0, 14.0);
/// Largest mean-square deviation from the sonar-equation prediction, dB.
pub const SONAR_EQUATION_TOLERANCE_DB: f64 = 1.0;
/// Largest RMS coherence deviation from the footprint transform.
pub const VCZ_RMS_TOLERANCE: f64 = 0.1;
/// Minimum peak-to-sidelobe ratio of an in-water point response, dB.
pub const PSF_SIDELOBE_DB: f64 = 12.0;

pub fn run_suite(suite: Suite, opts: ValidateOptions) -> Result<SuiteReport> {
    let t0 = Instant::now();
    let mut values = Vec::new();
    let mut seeds = 0;
    let checks = match suite {
        Suite::TargetStrength => {
            let t = target_strength_table();
            values.push(("wavelength_m".into(), format!("{:.5}", t.wavelength)));
            vec![
                Check::within("sphere_ts", t.sphere, -32.0, -31.8, " dB"),
                Check::within("short_cylinder_ts", t.short_cylinder, -12.0, -11.8, " dB"),
                Check::within("long_cylinder_ts", t.long_cylinder, -6.0, -5.8, " dB"),
            ]
        }
        Suite::Bookkeeping => {
            let b = bookkeeping();
            let [nx, ny, nz] = b.grid_dims;
            values.push(("grid_cross_along_depth".into(), format!("{ny}x{nx}x{nz}")));
            vec![
                Check::new(
                    "default_grid",
                    [ny, nx, nz] == [100, 750, 100],
                    format!("{ny} x {nx} x {nz}"),
                    "100 x 750 x 100",
                ),
                Check::new(
                    "survey_series",
                    b.series == 12_240,
                    b.series.to_string(),
                    "12240",
                ),
            ]
        }
        Suite::MultipathGeometry => {
            let cfg = MultipathConfig {
                seed: opts.base_seed,
                ..MultipathConfig::default()
            };
            seeds = 1;
            let m = multipath_experiment(&cfg)?;
            values.push((
                "predicted_first_m".into(),
                format!("{:.4}", m.predicted_first),
            ));
            values.push((
                "predicted_second_m".into(),
                format!("{:.4}", m.predicted_second),
            ));
            vec![
                Check::within(
                    "first_order_ridge",
                    m.first_ridge,
                    FIRST_RIDGE_DEPTH.0,
                    FIRST_RIDGE_DEPTH.1,
                    " m",
                ),
                Check::within(
                    "second_order_ridge",
                    m.second_ridge,
                    SECOND_RIDGE_DEPTH.0,
                    SECOND_RIDGE_DEPTH.1,
                    " m",
                ),
            ]
        }
        Suite::Contrast => {
            let n = opts.seeds.unwrap_or(5);
            seeds = n;
            let base = ContrastConfig::default();
            let mut sand = Vec::with_capacity(n);
            let mut silt = Vec::with_capacity(n);
            for i in 0..n as u64 {
                let seed = opts.base_seed + i;
                sand.push(
                    contrast_experiment(&ContrastConfig { seed, ..base }, false)?.contrast_db,
                );
                silt.push(contrast_experiment(&ContrastConfig { seed, ..base }, true)?.contrast_db);
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
            let (ms, mi) = (mean(&sand), mean(&silt));
            let fmt = |v: &[f64]| {
                v.iter()
                    .map(|x| format!("{x:.2}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            values.push(("sand_db".into(), fmt(&sand)));
            values.push(("silt_db".into(), fmt(&silt)));
            let lo = sand.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = sand.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            vec![
                Check::new(
                    "sand_contrast",
                    lo >= CONTRAST_BAND_DB.0 && hi <= CONTRAST_BAND_DB.1,
                    format!("mean {ms:.2} dB, range [{lo:.2}, {hi:.2}] dB"),
                    format!(
                        "every seed in [{}, {}] dB",
                        CONTRAST_BAND_DB.0, CONTRAST_BAND_DB.1
                    ),
                ),
                Check::new(
                    "silt_above_sand",
                    mi > ms,
                    format!("silt {mi:.2} dB vs sand {ms:.2} dB"),
                    "silt > sand",
                ),
            ]
        }
        Suite::SonarEquation => {
            let cfg = SonarEquationConfig {
                seeds: opts.seeds.unwrap_or(SonarEquationConfig::default().seeds),
                base_seed: opts.base_seed,
                ..SonarEquationConfig::default()
            };
            seeds = cfg.seeds;
            let r = sonar_equation_experiment(&cfg)?;
            values.push(("windows".into(), r.simulated_db.len().to_string()));
            values.push(("mean_error_db".into(), format!("{:.4}", r.mean_error_db())));
            values.push((
                "interval_s".into(),
                format!("{:.6},{:.6}", r.interval.0, r.interval.1),
            ));
            vec![Check::at_most(
                "mean_square_level",
                r.max_abs_error_db(),
                SONAR_EQUATION_TOLERANCE_DB,
                " dB",
            )]
        }
        Suite::Vcz => {
            let cfg = VczConfig {
                seeds: opts.seeds.unwrap_or(VczConfig::default().seeds),
                base_seed: opts.base_seed,
                ..VczConfig::default()
            };
            seeds = cfg.seeds;
            let c = vcz_experiment(&cfg)?;
            for d in 0..c.measured.len() {
                values.push((
                    format!("gamma.{}", d + 1),
                    format!(
                        "{:.4},{:.4},{:.4}",
                        c.measured[d], c.predicted[d], c.predicted_shared[d]
                    ),
                ));
            }
            values.push((
                "shared_footprint_rms".into(),
                format!("{:.4}", c.shared_rms_error()),
            ));
            vec![Check::at_most(
                "coherence_rms",
                c.rms_error(),
                VCZ_RMS_TOLERANCE,
                "",
            )]
        }
        Suite::Psf => {
            let p = psf_experiment(&PsfConfig::default())?;
            values.push((
                "water_peak_offset_voxels".into(),
                format!("{:.3}", p.water_offset_voxels),
            ));
            values.push((
                "straight_ray_offset_voxels".into(),
                format!("{:.3}", p.straight_offset_voxels),
            ));
            values.push((
                "straight_ray_depth_shift_m".into(),
                format!("{:.4}", p.straight_depth_shift),
            ));
            vec![
                Check::at_most("water_point_focus", p.water_offset_voxels, 1.0, " voxels"),
                Check::new(
                    "water_point_sidelobes",
                    p.sidelobe_db >= PSF_SIDELOBE_DB,
                    format!("{:.2} dB", p.sidelobe_db),
                    format!(">= {PSF_SIDELOBE_DB} dB"),
                ),
                Check::at_most(
                    "buried_point_refracted",
                    p.refracted_offset_voxels,
                    1.0,
                    " voxels",
                ),
                Check::new(
                    "buried_point_straight_displaced",
                    p.straight_offset_voxels >= 2.0,
                    format!("{:.2} voxels", p.straight_offset_voxels),
                    ">= 2 voxels",
                ),
            ]
        }
        Suite::Determinism => {
            let d = determinism_experiment(&DeterminismConfig::default())?;
            values.push(("ping_files".into(), d.ping_files.to_string()));
            vec![
                Check::new(
                    "simulate_bytes",
                    d.pings_identical,
                    format!("{} of {} files identical", d.identical_files, d.ping_files),
                    "all identical",
                ),
                Check::new(
                    "beamform_bytes",
                    d.volume_identical,
                    d.volume_identical.to_string(),
                    "true",
                ),
            ]
        }
    };
    Ok(SuiteReport {
        suite,
        checks,
        values,
        seeds,
        elapsed_s: t0.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(matches!(Suite::parse("bogus"), Err(Error::Usage(_))));
    }

    #[test]
    fn table_suites_pass() {
        for s in [Suite::TargetStrength, Suite::Bookkeeping] {
            let r = run_suite(s, ValidateOptions::default()).unwrap();
            assert!(r.passed(), "{}", r.render_text());
            assert!(r.render_kv().contains(&format!("{}.passed=true", s.name())));
        }
    }
}
