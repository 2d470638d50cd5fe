use num_complex::Complex64;

use super::*;
use crate::error::Error;
use crate::geom::Vec3;
use crate::scene::{build_modeled_array, Scenario, SedimentProperties, TargetSpec};
use crate::synth::{make_waveform, matched_filter, simulate_survey, PingRecord, Series};

fn quiet(targets: Vec<TargetSpec>) -> Scenario {
    let mut s = Scenario::design_study(SedimentProperties::medium_sand());
    s.array = build_modeled_array();
    s.track.ping_count = 1;
    s.scatterers.interface = false;
    s.scatterers.volume = false;
    s.propagation.coherent_reflection = false;
    s.propagation.max_order = 0;
    s.noise.enabled = false;
    s.targets = targets;
    s
}

fn compressed(s: &Scenario) -> Vec<PingRecord> {
    let w = make_waveform(&s.waveform).unwrap();
    simulate_survey(s)
        .unwrap()
        .iter()
        .map(|r| matched_filter(r, &w).unwrap())
        .collect()
}

fn box_around(p: Vec3, half: [f64; 3], spacing: f64) -> VoxelGrid {
    make_grid(
        Vec3::new(p.x - half[0], p.y - half[1], p.z - half[2]),
        [2.0 * half[0], 2.0 * half[1], 2.0 * half[2]],
        spacing,
    )
    .unwrap()
}

fn peak_position(r: &BeamformResult) -> Vec3 {
    let ([i, j, k], _) = r.volume.peak().unwrap();
    r.volume.grid.world(i, j, k)
}

#[test]
fn water_target_focuses_at_its_position() {
    let p = Vec3::new(0.2, 0.05, -0.6);
    let s = quiet(vec![TargetSpec::point(p, -10.0)]);
    let pings = compressed(&s);
    let grid = box_around(p, [0.2, 0.2, 0.2], 0.02);
    let r = backproject(&pings, &grid, &s, BackprojectOptions::default()).unwrap();
    let q = peak_position(&r);
    assert!(q.distance(p) <= 0.02 * 3f64.sqrt() + 1e-9, "{q:?}");
    assert!(r.coverage.iter().all(|&c| c > 0));
}

#[test]
fn buried_target_needs_refraction() {
    let p = Vec3::new(0.2, 0.0, 1.0);
    let s = quiet(vec![TargetSpec::point(p, -10.0)]);
    let pings = compressed(&s);
    let grid = box_around(p, [0.2, 0.2, 0.4], 0.02);
    let bent = backproject(&pings, &grid, &s, BackprojectOptions::default()).unwrap();
    let q = peak_position(&bent);
    assert!((q.z - p.z).abs() <= 0.02 + 1e-9, "refracted peak {q:?}");
    let straight = BackprojectOptions {
        rays: RayModel::Straight { speed: 1480.0 },
        ..Default::default()
    };
    let r = backproject(&pings, &grid, &s, straight).unwrap();
    let q = peak_position(&r);
    assert!((q.z - p.z).abs() >= 2.0 * 0.02, "straight peak {q:?}");
}

#[test]
fn unnormalized_image_is_linear() {
    let a = Vec3::new(0.1, 0.0, -0.6);
    let b = Vec3::new(0.25, 0.1, -0.55);
    let s = quiet(vec![
        TargetSpec::point(a, -10.0),
        TargetSpec::point(b, -15.0),
    ]);
    let sa = quiet(vec![TargetSpec::point(a, -10.0)]);
    let sb = quiet(vec![TargetSpec::point(b, -15.0)]);
    let opts = BackprojectOptions {
        normalization: Normalization::None,
        ..Default::default()
    };
    let grid = box_around(Vec3::new(0.175, 0.05, -0.6), [0.15, 0.1, 0.1], 0.02);
    let both = backproject(&compressed(&s), &grid, &s, opts).unwrap();
    let ra = backproject(&compressed(&sa), &grid, &s, opts).unwrap();
    let rb = backproject(&compressed(&sb), &grid, &s, opts).unwrap();
    let v = both.volume.complex_values().unwrap();
    let va = ra.volume.complex_values().unwrap();
    let vb = rb.volume.complex_values().unwrap();
    let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for ((x, y), z) in v.iter().zip(va).zip(vb) {
        assert!((x - (y + z)).norm() <= 1e-12 * scale);
    }
}

#[test]
fn result_does_not_depend_on_worker_count() {
    let p = Vec3::new(0.2, 0.05, -0.6);
    let s = quiet(vec![TargetSpec::point(p, -10.0)]);
    let pings = compressed(&s);
    let grid = box_around(p, [0.1, 0.1, 0.1], 0.02);
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| backproject(&pings, &grid, &s, BackprojectOptions::default()).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn nearest_and_linear_agree_on_peak() {
    let p = Vec3::new(0.2, 0.05, -0.6);
    let s = quiet(vec![TargetSpec::point(p, -10.0)]);
    let pings = compressed(&s);
    let grid = box_around(p, [0.1, 0.1, 0.1], 0.02);
    let near = BackprojectOptions {
        interpolation: Interpolation::Nearest,
        ..Default::default()
    };
    let a = backproject(&pings, &grid, &s, near).unwrap();
    assert!(peak_position(&a).distance(p) <= 0.02 * 3f64.sqrt() + 1e-9);
}

#[test]
fn empty_stream_gives_zero_coverage() {
    let s = quiet(Vec::new());
    let grid = make_grid(Vec3::ZERO, [0.1, 0.1, 0.1], 0.02).unwrap();
    let r = backproject(std::iter::empty(), &grid, &s, BackprojectOptions::default()).unwrap();
    assert!(r.coverage.iter().all(|&c| c == 0));
    assert!(r
        .volume
        .complex_values()
        .unwrap()
        .iter()
        .all(|v| *v == Complex64::new(0.0, 0.0)));
    assert_eq!(r.volume.provenance.ping_range, None);
}

#[test]
fn raw_and_mismatched_records_are_rejected() {
    let s = quiet(vec![TargetSpec::point(Vec3::new(0.0, 0.0, -0.6), -10.0)]);
    let raw = simulate_survey(&s).unwrap();
    let grid = make_grid(Vec3::new(0.0, 0.0, -0.7), [0.1, 0.1, 0.1], 0.02).unwrap();
    let mut bp = Backprojector::new(&grid, &s, BackprojectOptions::default());
    assert!(matches!(
        bp.add_ping(&raw[0]),
        Err(Error::Validation { .. })
    ));
    let mut mf = compressed(&s);
    bp.add_ping(&mf[0]).unwrap();
    mf[1].sample_rate *= 2.0;
    assert!(matches!(bp.add_ping(&mf[1]), Err(Error::GridMismatch(_))));
    let mut short = mf[2].clone();
    if let Series::Analytic(v) = &mut short.series {
        v.pop();
    }
    assert!(matches!(bp.add_ping(&short), Err(Error::GridMismatch(_))));
}
