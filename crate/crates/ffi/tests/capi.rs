//! Exercises the C ABI the way a C caller would: raw pointers, status codes
//! and explicit frees.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use subbottom_sas_ffi::*;

const TINY: &str = r#"
rng_seed = 7

[geometry]
water_depth = 2.5
sensor_altitude = 2.0

[sediment]
preset = "medium_sand"

[track]
ping_count = 1
tx_schedule = "round_robin"

[noise]
enabled = false

[scatterers]
interface = false
volume = false

[propagation]
max_order = 0
coherent_reflection = false

[targets.0]
kind = "point"
position = [0.0, 0.0, -0.5]
fixed_ts_override = -10.0
"#;

fn last_error() -> String {
    let p = sbs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn tiny() -> *mut SbsScenario {
    let text = CString::new(TINY).unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { sbs_scenario_parse(text.as_ptr(), &mut s) };
    assert_eq!(st, SbsStatus::Ok, "{}", last_error());
    assert!(!s.is_null());
    s
}

fn local_grid() -> SbsGrid {
    SbsGrid {
        origin: [-0.2, -0.2, -0.7],
        spacing: [0.02; 3],
        dims: [20, 20, 20],
    }
}

#[test]
fn version_is_semver() {
    let v = unsafe { CStr::from_ptr(sbs_version()) }.to_str().unwrap();
    assert_eq!(v.split('.').count(), 3);
}

#[test]
fn scenario_queries() {
    let s = tiny();
    let (mut events, mut rx) = (0usize, 0usize);
    unsafe {
        assert_eq!(sbs_scenario_event_count(s, &mut events), SbsStatus::Ok);
        assert_eq!(sbs_scenario_receiver_count(s, &mut rx), SbsStatus::Ok);
        let mut g = local_grid();
        assert_eq!(sbs_scenario_default_grid(s, &mut g), SbsStatus::Ok);
        assert_eq!(g.dims, [750, 100, 100]);
        sbs_scenario_free(s);
    }
    assert_eq!(events, 1);
    assert_eq!(rx, 48);
}

#[test]
fn design_study_presets() {
    for name in ["medium_sand", "very_fine_silt"] {
        let c = CString::new(name).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { sbs_scenario_design_study(c.as_ptr(), &mut s) },
            SbsStatus::Ok
        );
        unsafe { sbs_scenario_free(s) };
    }
    let c = CString::new("granite").unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { sbs_scenario_design_study(c.as_ptr(), &mut s) };
    assert_eq!(st, SbsStatus::InvalidArgument);
    assert!(s.is_null());
    assert!(last_error().contains("granite"));
}

#[test]
fn errors_map_to_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            sbs_scenario_parse(ptr::null(), &mut s),
            SbsStatus::NullPointer
        );
        let bad = CString::new("[geometry\nwater_depth = 1").unwrap();
        assert_eq!(sbs_scenario_parse(bad.as_ptr(), &mut s), SbsStatus::Parse);
        let invalid =
            CString::new(TINY.replace("sensor_altitude = 2.0", "sensor_altitude = 3.0")).unwrap();
        assert_eq!(
            sbs_scenario_parse(invalid.as_ptr(), &mut s),
            SbsStatus::Validation
        );
        assert!(last_error().contains("sensor_altitude"));
        let missing = CString::new("/nonexistent/scenario.toml").unwrap();
        assert_eq!(sbs_scenario_load(missing.as_ptr(), &mut s), SbsStatus::Io);
        let text = CString::new(TINY).unwrap();
        assert_eq!(
            sbs_scenario_parse(text.as_ptr(), ptr::null_mut()),
            SbsStatus::NullPointer
        );
    }
    assert!(s.is_null());
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        sbs_scenario_free(ptr::null_mut());
        sbs_survey_free(ptr::null_mut());
        sbs_volume_free(ptr::null_mut());
        sbs_string_free(ptr::null_mut());
        assert_eq!(sbs_volume_is_complex(ptr::null()), -1);
    }
}

#[test]
fn simulate_beamform_process() {
    let s = tiny();
    unsafe {
        let mut survey = ptr::null_mut();
        assert_eq!(
            sbs_simulate(s, &mut survey),
            SbsStatus::Ok,
            "{}",
            last_error()
        );
        let mut n = 0;
        assert_eq!(sbs_survey_len(survey, &mut n), SbsStatus::Ok);
        assert_eq!(n, 1);

        let mut len = 0;
        assert_eq!(
            sbs_survey_series(survey, 0, 0, ptr::null_mut(), 0, &mut len),
            SbsStatus::Ok
        );
        assert!(len > 0);
        let mut small = vec![0.0; len - 1];
        assert_eq!(
            sbs_survey_series(survey, 0, 0, small.as_mut_ptr(), small.len(), &mut len),
            SbsStatus::BufferTooSmall
        );
        let mut series = vec![0.0; len];
        assert_eq!(
            sbs_survey_series(survey, 0, 0, series.as_mut_ptr(), series.len(), &mut len),
            SbsStatus::Ok
        );
        assert!(series.iter().any(|v| *v != 0.0));
        assert_eq!(
            sbs_survey_series(survey, 1, 0, ptr::null_mut(), 0, &mut len),
            SbsStatus::InvalidArgument
        );

        let grid = local_grid();
        let mut vol = ptr::null_mut();
        assert_eq!(
            sbs_beamform(s, survey, &grid, SbsRays::Refracted, &mut vol),
            SbsStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(sbs_volume_is_complex(vol), 1);
        let mut g = local_grid();
        g.dims = [0; 3];
        assert_eq!(sbs_volume_grid(vol, &mut g), SbsStatus::Ok);
        assert_eq!(g, grid);

        // The point target at (0, 0, -0.5) is the brightest voxel.
        let mut values = vec![0.0; 8000];
        assert_eq!(
            sbs_volume_values(vol, values.as_mut_ptr(), values.len()),
            SbsStatus::Ok
        );
        let (idx, _) =
            values
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        let (i, j, k) = (idx / 400, (idx / 20) % 20, idx % 20);
        assert!(
            i.abs_diff(10) <= 1 && j.abs_diff(10) <= 1 && k.abs_diff(10) <= 1,
            "{i} {j} {k}"
        );

        let mut gained = ptr::null_mut();
        assert_eq!(sbs_volume_depth_gain(vol, 10.0, &mut gained), SbsStatus::Ok);
        let mut compressed = ptr::null_mut();
        // Compression works on real (dB) volumes only.
        assert_eq!(
            sbs_volume_drc(gained, 50.0, 99.9, 0.5, &mut compressed),
            SbsStatus::Validation
        );
        let mut normalized = ptr::null_mut();
        assert_eq!(
            sbs_volume_normalize(gained, &mut normalized),
            SbsStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(sbs_volume_is_complex(normalized), 0);
        assert_eq!(
            sbs_volume_drc(normalized, 50.0, 99.9, 0.5, &mut compressed),
            SbsStatus::Ok
        );
        assert_eq!(sbs_volume_is_complex(compressed), 0);
        let (mut rows, mut cols) = (0, 0);
        assert_eq!(
            sbs_volume_mip(
                compressed,
                SbsAxis::Z,
                ptr::null_mut(),
                0,
                &mut rows,
                &mut cols
            ),
            SbsStatus::Ok
        );
        assert_eq!(rows * cols, 400);
        let mut img = vec![0.0; rows * cols];
        assert_eq!(
            sbs_volume_mip(
                compressed,
                SbsAxis::Z,
                img.as_mut_ptr(),
                img.len(),
                &mut rows,
                &mut cols
            ),
            SbsStatus::Ok
        );
        assert!(img.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(img.iter().any(|v| *v == 1.0));

        // Round trip through a file.
        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("v.sbv").to_str().unwrap()).unwrap();
        assert_eq!(sbs_volume_write(vol, path.as_ptr()), SbsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sbs_volume_read(path.as_ptr(), &mut back), SbsStatus::Ok);
        let mut again = vec![0.0; 8000];
        assert_eq!(
            sbs_volume_values(back, again.as_mut_ptr(), again.len()),
            SbsStatus::Ok
        );
        // Files store single precision.
        for (a, b) in again.iter().zip(&values) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-30), "{a} vs {b}");
        }
        let mut short = vec![0.0; 10];
        assert_eq!(
            sbs_volume_values(back, short.as_mut_ptr(), short.len()),
            SbsStatus::BufferTooSmall
        );

        for v in [vol, gained, normalized, compressed, back] {
            sbs_volume_free(v);
        }
        sbs_survey_free(survey);
        sbs_scenario_free(s);
    }
}

#[test]
fn reading_garbage_is_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk.sbv");
    std::fs::write(&p, b"not a volume").unwrap();
    let c = CString::new(p.to_str().unwrap()).unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(
        unsafe { sbs_volume_read(c.as_ptr(), &mut v) },
        SbsStatus::Format
    );
    assert!(v.is_null());
}

#[test]
fn validate_table_suite() {
    let name = CString::new("target_strength").unwrap();
    let mut passed = -1;
    let mut report: *mut c_char = ptr::null_mut();
    let st = unsafe { sbs_validate(name.as_ptr(), 0, 0, &mut passed, &mut report) };
    assert_eq!(st, SbsStatus::Ok);
    assert_eq!(passed, 1);
    let text = unsafe { CStr::from_ptr(report) }
        .to_str()
        .unwrap()
        .to_owned();
    unsafe { sbs_string_free(report) };
    assert!(text.contains("target_strength.passed=true"));

    let bogus = CString::new("bogus").unwrap();
    let st = unsafe { sbs_validate(bogus.as_ptr(), 0, 0, &mut passed, &mut report) };
    assert_eq!(st, SbsStatus::InvalidArgument);
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("include/subbottom_sas.h"),
    )
    .unwrap();
    for f in [
        "sbs_version",
        "sbs_last_error_message",
        "sbs_scenario_parse",
        "sbs_simulate",
        "sbs_beamform",
        "sbs_volume_mip",
        "sbs_validate",
        "typedef struct SbsVolume SbsVolume",
        "SBS_STATUS_OK = 0",
    ] {
        assert!(header.contains(f), "header lacks {f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/subbottom_sas.h");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status();
    match status {
        Ok(st) => assert!(st.success(), "C compiler rejected the header"),
        // No C toolchain available: nothing to check.
        Err(_) => {}
    }
}
