//! C ABI over the `subbottom-sas` simulator and imager.
//!
//! # Conventions
//!
//! * Every fallible function returns an [`SbsStatus`]; `SBS_STATUS_OK` is 0.
//!   On failure a human-readable message is kept per thread and can be read
//!   with [`sbs_last_error_message`] until the next failing call on that
//!   thread.
//! * Objects are opaque handles created by `sbs_*` constructors through an
//!   out-pointer and released with the matching `sbs_*_free`. Passing NULL
//!   to a `free` function is a no-op.
//! * Strings are NUL-terminated UTF-8. Strings returned by the library are
//!   released with [`sbs_string_free`].
//! * Panics never cross the boundary; they are reported as
//!   `SBS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use subbottom_sas::beamform::{
    backproject, default_grid, BackprojectOptions, RayModel, VoxelGrid, VoxelVolume,
};
use subbottom_sas::error::Error;
use subbottom_sas::geom::Vec3;
use subbottom_sas::imageproc::{self, Axis, DrcParams, MedianKernel};
use subbottom_sas::io::{read_volume, write_volume};
use subbottom_sas::scene::{
    load_scenario, parse_scenario, ping_poses, Scenario, SedimentProperties,
};
use subbottom_sas::synth::{make_waveform, matched_filter, simulate_survey, PingRecord};
use subbottom_sas::validate::{run_suite, Suite, ValidateOptions};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbsStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An argument was out of range, not UTF-8, or otherwise unusable.
    InvalidArgument = 2,
    /// A caller-supplied buffer is too small.
    BufferTooSmall = 3,
    /// Scenario text could not be parsed.
    Parse = 10,
    /// A configuration value failed validation.
    Validation = 11,
    /// The configuration is inconsistent.
    Config = 12,
    /// An echo falls outside the fixed record window.
    RecordLength = 13,
    /// Records or volumes do not match the scenario or each other.
    GridMismatch = 14,
    /// A file could not be read or written.
    Io = 20,
    /// A file is malformed.
    Format = 21,
    /// A computation produced a non-finite or degenerate result.
    Numerical = 30,
    /// A validation suite ran and at least one check failed.
    SuiteFailed = 40,
    /// An internal panic was caught at the boundary.
    Panic = 99,
}

/// Ray model used to compute voxel travel times.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbsRays {
    /// Fermat paths refracted at the water/sediment interface.
    Refracted = 0,
    /// Straight lines at the water sound speed everywhere.
    Straight = 1,
}

/// Image axis: along-track, cross-track or depth.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbsAxis {
    X = 0,
    Y = 1,
    Z = 2,
}

/// Regular voxel lattice. Voxel `(i, j, k)` sits at
/// `origin + (i, j, k) * spacing`; volume values are stored with `k`
/// (depth) varying fastest, then `j`, then `i`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbsGrid {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
}

/// Validated scenario.
pub struct SbsScenario {
    inner: Scenario,
}

/// Raw pressure records of a simulated survey, in transmit-event order.
pub struct SbsSurvey {
    records: Vec<PingRecord>,
}

/// Beamformed or processed voxel volume.
pub struct SbsVolume {
    inner: VoxelVolume,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static VERSION: &CStr =
    match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };

struct Failure {
    status: SbsStatus,
    message: String,
}

impl Failure {
    fn new(status: SbsStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(name: &str) -> Self {
        Failure::new(SbsStatus::NullPointer, format!("`{name}` is NULL"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => SbsStatus::Parse,
            Error::Validation { .. } => SbsStatus::Validation,
            Error::Config(_) => SbsStatus::Config,
            Error::RecordLength { .. } => SbsStatus::RecordLength,
            Error::GridMismatch(_) => SbsStatus::GridMismatch,
            Error::Numerical(_) => SbsStatus::Numerical,
            Error::Format { .. } => SbsStatus::Format,
            Error::Io { .. } => SbsStatus::Io,
            Error::Usage(_) => SbsStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SbsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SbsStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            SbsStatus::Panic
        }
    }
}

/// Borrows a NUL-terminated UTF-8 string.
///
/// # Safety
/// `p` must be NULL or point to a NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(SbsStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

/// Borrows the object behind a handle.
///
/// # Safety
/// `p` must be NULL or a live handle of type `T`.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(name))
}

/// Stores a new handle in `out`.
///
/// # Safety
/// `out` must be valid for a pointer write; it was checked for NULL.
unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::null("out"))
    } else {
        Ok(())
    }
}

fn to_grid(g: &VoxelGrid) -> SbsGrid {
    SbsGrid {
        origin: [g.origin.x, g.origin.y, g.origin.z],
        spacing: g.spacing,
        dims: g.dims,
    }
}

fn from_grid(g: &SbsGrid) -> Result<VoxelGrid, Failure> {
    let ok = g.spacing.iter().all(|s| s.is_finite() && *s > 0.0)
        && g.origin.iter().all(|o| o.is_finite())
        && g.dims.iter().all(|&d| d > 0);
    if !ok {
        return Err(Failure::new(
            SbsStatus::InvalidArgument,
            "grid needs finite origin, positive spacing and non-zero dimensions",
        ));
    }
    Ok(VoxelGrid {
        origin: Vec3::new(g.origin[0], g.origin[1], g.origin[2]),
        spacing: g.spacing,
        dims: g.dims,
    })
}

fn axis(a: SbsAxis) -> Axis {
    match a {
        SbsAxis::X => Axis::X,
        SbsAxis::Y => Axis::Y,
        SbsAxis::Z => Axis::Z,
    }
}

// ---------------------------------------------------------------------------
// Library-wide
// ---------------------------------------------------------------------------

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn sbs_version() -> *const c_char {
    VERSION.as_ptr()
}

/// Message of the last failing call on this thread, or NULL if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sbs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// Loads and validates a TOML scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_load(
    path: *const c_char,
    out: *mut *mut SbsScenario,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let path = str_arg(path, "path")?;
        let inner = load_scenario(path)?;
        emit(out, SbsScenario { inner });
        Ok(())
    })
}

/// Parses and validates scenario TOML text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_parse(
    text: *const c_char,
    out: *mut *mut SbsScenario,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let text = str_arg(text, "text")?;
        let inner = parse_scenario(text, "<ffi>")?;
        emit(out, SbsScenario { inner });
        Ok(())
    })
}

/// The reference design-study scenario over a named sediment
/// (`"medium_sand"` or `"very_fine_silt"`).
///
/// # Safety
/// `sediment` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_design_study(
    sediment: *const c_char,
    out: *mut *mut SbsScenario,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let name = str_arg(sediment, "sediment")?;
        let sed = SedimentProperties::preset(name).ok_or_else(|| {
            Failure::new(
                SbsStatus::InvalidArgument,
                format!("unknown sediment `{name}` (expected medium_sand or very_fine_silt)"),
            )
        })?;
        emit(
            out,
            SbsScenario {
                inner: Scenario::design_study(sed),
            },
        );
        Ok(())
    })
}

/// Releases a scenario. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_free(s: *mut SbsScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of transmit events (locations times transmitters) in the survey.
///
/// # Safety
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_event_count(
    s: *const SbsScenario,
    out: *mut usize,
) -> SbsStatus {
    guard(|| {
        let s = handle(s, "scenario")?;
        let out = out.as_mut().ok_or_else(|| Failure::null("out"))?;
        *out = ping_poses(&s.inner).len();
        Ok(())
    })
}

/// Number of receiver channels of the array.
///
/// # Safety
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_receiver_count(
    s: *const SbsScenario,
    out: *mut usize,
) -> SbsStatus {
    guard(|| {
        let s = handle(s, "scenario")?;
        let out = out.as_mut().ok_or_else(|| Failure::null("out"))?;
        *out = s.inner.array.receiver_count();
        Ok(())
    })
}

/// The scenario's default image grid.
///
/// # Safety
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_scenario_default_grid(
    s: *const SbsScenario,
    out: *mut SbsGrid,
) -> SbsStatus {
    guard(|| {
        let s = handle(s, "scenario")?;
        let out = out.as_mut().ok_or_else(|| Failure::null("out"))?;
        *out = to_grid(&default_grid(&s.inner));
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Simulates every transmit event of the scenario.
///
/// # Safety
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_simulate(
    s: *const SbsScenario,
    out: *mut *mut SbsSurvey,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let s = handle(s, "scenario")?;
        let records = simulate_survey(&s.inner)?;
        emit(out, SbsSurvey { records });
        Ok(())
    })
}

/// Releases a survey. NULL is ignored.
///
/// # Safety
/// `v` must be NULL or a live survey handle.
#[no_mangle]
pub unsafe extern "C" fn sbs_survey_free(v: *mut SbsSurvey) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Number of records (transmit events) in the survey.
///
/// # Safety
/// `v` must be a live survey handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_survey_len(v: *const SbsSurvey, out: *mut usize) -> SbsStatus {
    guard(|| {
        let v = handle(v, "survey")?;
        let out = out.as_mut().ok_or_else(|| Failure::null("out"))?;
        *out = v.records.len();
        Ok(())
    })
}

/// Copies one receiver's pressure series (Pa) of record `record`.
///
/// With `buf` NULL only `*len_out` is written. Otherwise `buf` must hold at
/// least `capacity` values and `SBS_STATUS_BUFFER_TOO_SMALL` is returned when
/// the series is longer.
///
/// # Safety
/// `v` must be a live survey handle; `buf` must be NULL or valid for
/// `capacity` writes; `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_survey_series(
    v: *const SbsSurvey,
    record: usize,
    receiver: usize,
    buf: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> SbsStatus {
    guard(|| {
        let v = handle(v, "survey")?;
        let len_out = len_out.as_mut().ok_or_else(|| Failure::null("len_out"))?;
        let rec = v.records.get(record).ok_or_else(|| {
            Failure::new(
                SbsStatus::InvalidArgument,
                format!("record {record} out of range ({} records)", v.records.len()),
            )
        })?;
        let series = rec.real().and_then(|r| r.get(receiver)).ok_or_else(|| {
            Failure::new(
                SbsStatus::InvalidArgument,
                format!("receiver {receiver} out of range"),
            )
        })?;
        *len_out = series.len();
        if buf.is_null() {
            return Ok(());
        }
        if capacity < series.len() {
            return Err(Failure::new(
                SbsStatus::BufferTooSmall,
                format!(
                    "series has {} samples, buffer holds {capacity}",
                    series.len()
                ),
            ));
        }
        std::slice::from_raw_parts_mut(buf, series.len()).copy_from_slice(series);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Beamforming
// ---------------------------------------------------------------------------

/// Pulse-compresses every record of `survey` and backprojects it onto
/// `grid` (the scenario's default grid when NULL). Straight-ray mode uses
/// the water sound speed.
///
/// # Safety
/// `s` and `survey` must be live handles; `grid` must be NULL or valid;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_beamform(
    s: *const SbsScenario,
    survey: *const SbsSurvey,
    grid: *const SbsGrid,
    rays: SbsRays,
    out: *mut *mut SbsVolume,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let s = &handle(s, "scenario")?.inner;
        let survey = handle(survey, "survey")?;
        let grid = match grid.as_ref() {
            Some(g) => from_grid(g)?,
            None => default_grid(s),
        };
        let w = make_waveform(&s.waveform)?;
        let compressed = survey
            .records
            .iter()
            .map(|r| matched_filter(r, &w))
            .collect::<Result<Vec<_>, _>>()?;
        let opts = BackprojectOptions {
            rays: match rays {
                SbsRays::Refracted => RayModel::Refracted,
                SbsRays::Straight => RayModel::Straight {
                    speed: s.water.sound_speed,
                },
            },
            ..BackprojectOptions::default()
        };
        let r = backproject(&compressed, &grid, s, opts)?;
        emit(out, SbsVolume { inner: r.volume });
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Volumes
// ---------------------------------------------------------------------------

/// Reads a volume file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_read(
    path: *const c_char,
    out: *mut *mut SbsVolume,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let path = str_arg(path, "path")?;
        let inner = read_volume(Path::new(path))?;
        emit(out, SbsVolume { inner });
        Ok(())
    })
}

/// Writes a volume file and its text sidecar.
///
/// # Safety
/// `v` must be a live volume handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_write(v: *const SbsVolume, path: *const c_char) -> SbsStatus {
    guard(|| {
        let v = handle(v, "volume")?;
        let path = str_arg(path, "path")?;
        write_volume(Path::new(path), &v.inner)?;
        Ok(())
    })
}

/// Releases a volume. NULL is ignored.
///
/// # Safety
/// `v` must be NULL or a live volume handle.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_free(v: *mut SbsVolume) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Lattice of the volume.
///
/// # Safety
/// `v` must be a live volume handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_grid(v: *const SbsVolume, out: *mut SbsGrid) -> SbsStatus {
    guard(|| {
        let v = handle(v, "volume")?;
        let out = out.as_mut().ok_or_else(|| Failure::null("out"))?;
        *out = to_grid(&v.inner.grid);
        Ok(())
    })
}

/// 1 when the volume holds complex (beamformed) values, 0 for real
/// (processed) values, -1 for a NULL handle.
///
/// # Safety
/// `v` must be NULL or a live volume handle.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_is_complex(v: *const SbsVolume) -> c_int {
    match v.as_ref() {
        Some(v) => c_int::from(v.inner.is_complex()),
        None => -1,
    }
}

/// Copies the voxel values into `buf`: magnitudes for complex volumes, the
/// values themselves for real ones. `capacity` must be at least the voxel
/// count.
///
/// # Safety
/// `v` must be a live volume handle; `buf` must be valid for `capacity`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_values(
    v: *const SbsVolume,
    buf: *mut f64,
    capacity: usize,
) -> SbsStatus {
    guard(|| {
        let v = handle(v, "volume")?;
        if buf.is_null() {
            return Err(Failure::null("buf"));
        }
        let n = v.inner.len();
        if capacity < n {
            return Err(Failure::new(
                SbsStatus::BufferTooSmall,
                format!("volume has {n} voxels, buffer holds {capacity}"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, n);
        match (v.inner.complex_values(), v.inner.real_values()) {
            (Some(c), _) => dst.iter_mut().zip(c).for_each(|(d, c)| *d = c.norm()),
            (_, Some(r)) => dst.copy_from_slice(r),
            _ => unreachable!("a volume is either complex or real"),
        }
        Ok(())
    })
}

/// Applies a depth-dependent gain of `rate_db_per_m` below the interface.
///
/// # Safety
/// `v` must be a live volume handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_depth_gain(
    v: *const SbsVolume,
    rate_db_per_m: f64,
    out: *mut *mut SbsVolume,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let v = handle(v, "volume")?;
        if !rate_db_per_m.is_finite() {
            return Err(Failure::new(
                SbsStatus::InvalidArgument,
                "gain rate must be finite",
            ));
        }
        emit(
            out,
            SbsVolume {
                inner: imageproc::depth_gain(&v.inner, rate_db_per_m),
            },
        );
        Ok(())
    })
}

/// Divides by a moving-median background estimate (default window) and
/// converts to dB above background.
///
/// # Safety
/// `v` must be a live volume handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_normalize(
    v: *const SbsVolume,
    out: *mut *mut SbsVolume,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let v = handle(v, "volume")?;
        let bg = imageproc::median_background(&v.inner, MedianKernel::default())?;
        let inner = imageproc::normalize(&v.inner, &bg)?;
        emit(out, SbsVolume { inner });
        Ok(())
    })
}

/// Dynamic-range compression of a real (normalized, dB) volume: clips to
/// the `p_low`/`p_high` percentiles, maps to [0, 1] and applies `x^gamma`.
/// Complex volumes are rejected with `SBS_STATUS_VALIDATION`.
///
/// # Safety
/// `v` must be a live volume handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_drc(
    v: *const SbsVolume,
    p_low: f64,
    p_high: f64,
    gamma: f64,
    out: *mut *mut SbsVolume,
) -> SbsStatus {
    guard(|| {
        check_out(out)?;
        let v = handle(v, "volume")?;
        let inner = imageproc::drc(
            &v.inner,
            DrcParams {
                p_low,
                p_high,
                gamma,
            },
        )?;
        emit(out, SbsVolume { inner });
        Ok(())
    })
}

/// Maximum-intensity projection along `axis`, row-major.
///
/// `rows_out` and `cols_out` always receive the image size. With `buf`
/// NULL nothing else is written; otherwise `buf` must hold `capacity`
/// values, at least `rows * cols`.
///
/// # Safety
/// `v` must be a live volume handle; `buf` must be NULL or valid for
/// `capacity` writes; `rows_out` and `cols_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_volume_mip(
    v: *const SbsVolume,
    projection: SbsAxis,
    buf: *mut f64,
    capacity: usize,
    rows_out: *mut usize,
    cols_out: *mut usize,
) -> SbsStatus {
    guard(|| {
        let v = handle(v, "volume")?;
        let rows_out = rows_out.as_mut().ok_or_else(|| Failure::null("rows_out"))?;
        let cols_out = cols_out.as_mut().ok_or_else(|| Failure::null("cols_out"))?;
        let img = imageproc::mip(&v.inner, axis(projection));
        *rows_out = img.height();
        *cols_out = img.width();
        if buf.is_null() {
            return Ok(());
        }
        if capacity < img.data.len() {
            return Err(Failure::new(
                SbsStatus::BufferTooSmall,
                format!(
                    "image has {} pixels, buffer holds {capacity}",
                    img.data.len()
                ),
            ));
        }
        std::slice::from_raw_parts_mut(buf, img.data.len()).copy_from_slice(&img.data);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Runs a named validation suite. `seeds` of 0 keeps the suite's default
/// ensemble size. On completion `*report` receives the `key=value` report
/// (free with [`sbs_string_free`]) and `*passed` is 1 or 0; a failed suite
/// also returns `SBS_STATUS_SUITE_FAILED`.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `passed` and `report` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sbs_validate(
    suite: *const c_char,
    seeds: usize,
    base_seed: u64,
    passed: *mut c_int,
    report: *mut *mut c_char,
) -> SbsStatus {
    guard(|| {
        if passed.is_null() {
            return Err(Failure::null("passed"));
        }
        if report.is_null() {
            return Err(Failure::null("report"));
        }
        let name = str_arg(suite, "suite")?;
        let suite = Suite::parse(name)?;
        let opts = ValidateOptions {
            seeds: (seeds > 0).then_some(seeds),
            base_seed,
        };
        let r = run_suite(suite, opts)?;
        let ok = r.passed();
        *passed = c_int::from(ok);
        *report = CString::new(r.render_kv())
            .map_err(|_| Failure::new(SbsStatus::Numerical, "report contains NUL"))?
            .into_raw();
        if ok {
            Ok(())
        } else {
            Err(Failure::new(
                SbsStatus::SuiteFailed,
                format!("suite {} failed", suite.name()),
            ))
        }
    })
}
