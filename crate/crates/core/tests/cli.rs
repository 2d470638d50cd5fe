//! End-to-end runs of the command-line tool: the simulate, beamform and
//! imageproc chain on a tiny scene, documented exit codes and independence
//! of the outputs from the worker count.

use std::path::Path;
use std::process::{Command, Output};

const TINY: &str = r#"
rng_seed = 5

[geometry]
water_depth = 2.5
sensor_altitude = 2.0

[sediment]
preset = "medium_sand"

[track]
ping_count = 2
tx_schedule = "round_robin"

[scatterers]
interface = true
volume = false
max_incidence_deg = 10.0

[propagation]
max_order = 0

[targets.0]
kind = "point"
position = [0.0, 0.0, -0.5]
fixed_ts_override = -10.0
"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subbottom-sas"));
    c.env_remove("SUBBOTTOM_SAS_WORKERS")
        .env_remove("SUBBOTTOM_SAS_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn the binary")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn ok(o: Output) -> Output {
    assert_eq!(
        code(&o),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o
}

fn write_tiny(dir: &Path) -> String {
    let p = dir.join("tiny.toml");
    std::fs::write(&p, TINY).unwrap();
    p.to_str().unwrap().to_owned()
}

const GRID: [&str; 6] = [
    "--origin",
    "-0.2,-0.2,-0.7",
    "--extent",
    "0.4,0.4,0.4",
    "--spacing",
    "0.02",
];

/// Simulates and beamforms with the given worker count; returns the bytes
/// of every ping file and of the volume.
fn chain(dir: &Path, scenario: &str, workers: &str) -> Vec<Vec<u8>> {
    let pings = dir.join(format!("pings{workers}"));
    let pings = pings.to_str().unwrap();
    ok(run(&[
        "--workers",
        workers,
        "simulate",
        scenario,
        "--out",
        pings,
    ]));
    let mut args = vec!["--workers", workers, "beamform", scenario, "--pings", pings];
    args.extend(GRID);
    ok(run(&args));
    let mut names: Vec<_> = std::fs::read_dir(pings)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| !n.starts_with("manifest") && !n.ends_with(".manifest.txt"))
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "volume.sbv"), "{names:?}");
    assert!(names.iter().any(|n| n == "index.txt"), "{names:?}");
    names
        .iter()
        .map(|n| std::fs::read(Path::new(pings).join(n)).unwrap())
        .collect()
}

#[test]
fn simulate_beamform_imageproc() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_tiny(dir.path());
    let files = chain(dir.path(), &scenario, "2");
    // Two pings, the index, the volume and its text header.
    assert_eq!(files.len(), 5);

    let volume = dir.path().join("pings2/volume.sbv");
    let images = dir.path().join("images");
    ok(run(&[
        "imageproc",
        volume.to_str().unwrap(),
        "--out",
        images.to_str().unwrap(),
        "--gain",
        "10",
        "--normalize",
        "--drc",
        "--mip",
        "x,z",
        "--slice",
        "z=-0.5",
        "--save-volume",
    ]));
    for name in ["processed.sbv", "imageproc.manifest.txt"] {
        assert!(images.join(name).is_file(), "{name} missing");
    }
    let pgms: Vec<_> = std::fs::read_dir(&images)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pgm"))
        .collect();
    assert_eq!(pgms.len(), 3, "{pgms:?}");
    for p in pgms {
        let bytes = std::fs::read(&p).unwrap();
        assert!(
            bytes.starts_with(b"P5"),
            "{} is not a binary graymap",
            p.display()
        );
    }
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_tiny(dir.path());
    let one = chain(dir.path(), &scenario, "1");
    let three = chain(dir.path(), &scenario, "3");
    assert_eq!(one.len(), three.len());
    for (a, b) in one.iter().zip(&three) {
        assert!(a == b, "outputs differ between 1 and 3 workers");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["simulate", "/nonexistent/scenario.toml"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_tiny(dir.path());
    assert_eq!(code(&run(&["--workers", "0", "simulate", &scenario])), 2);
    // A volume but no requested products.
    assert_eq!(code(&run(&["imageproc", &scenario])), 2);
    assert_eq!(code(&run(&["validate", "bogus"])), 2);
}

#[test]
fn invalid_scenarios_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        TINY.replace("sensor_altitude = 2.0", "sensor_altitude = 3.0"),
    )
    .unwrap();
    let o = run(&[
        "simulate",
        bad.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sensor_altitude"));

    std::fs::write(&bad, "[geometry\nwater_depth = 1").unwrap();
    assert_eq!(code(&run(&["simulate", bad.to_str().unwrap()])), 3);
}

#[test]
fn unreadable_inputs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_tiny(dir.path());
    // No index in an empty ping directory.
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(
        code(&run(&[
            "beamform",
            &scenario,
            "--pings",
            empty.to_str().unwrap()
        ])),
        4
    );
    let junk = dir.path().join("junk.sbv");
    std::fs::write(&junk, b"not a volume").unwrap();
    let out = dir.path().join("img");
    assert_eq!(
        code(&run(&[
            "imageproc",
            junk.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--mip",
            "z"
        ])),
        4
    );
}

#[test]
fn validate_reports_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("ts.txt");
    let o = ok(run(&[
        "validate",
        "target_strength",
        "--report",
        report.to_str().unwrap(),
    ]));
    assert!(String::from_utf8_lossy(&o.stdout).contains("target_strength.passed=true"));
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.contains("target_strength.passed=true"));
}
