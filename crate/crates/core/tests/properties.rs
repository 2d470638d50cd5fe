//! Property tests for the model invariants: ray geometry, reflection
//! bounds, image-source lattice, target strength monotonicity, grid
//! mapping, scenario round trips and the image-processing algebra.

use num_complex::Complex64;
use proptest::prelude::*;

use subbottom_sas::beamform::{Provenance, VolumeData, VoxelGrid, VoxelVolume};
use subbottom_sas::geom::Vec3;
use subbottom_sas::imageproc::{
    drc_bounds, drc_map, drc_with_bounds, median_background, mip, normalize, Axis, DrcBounds,
    DrcParams, MedianKernel,
};
use subbottom_sas::propagation::{
    eckart_coherent_coeff, enumerate_image_sources, flat_reflection_coeff, path_between,
    refracted_path,
};
use subbottom_sas::scene::{
    parse_scenario, serialize_scenario, Scenario, SedimentProperties, TargetSpec,
};
use subbottom_sas::targetmodel::{cylinder_ts, sphere_ts};

const CW: f64 = 1480.0;

fn sediments() -> impl Strategy<Value = SedimentProperties> {
    prop_oneof![
        Just(SedimentProperties::medium_sand()),
        Just(SedimentProperties::very_fine_silt())
    ]
}

fn water_point() -> impl Strategy<Value = Vec3> {
    (-3.0..3.0f64, -3.0..3.0f64, -2.5..-0.01f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn sediment_point() -> impl Strategy<Value = Vec3> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.01..3.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn grid(dims: [usize; 3]) -> VoxelGrid {
    VoxelGrid {
        origin: Vec3::new(-0.1, 0.2, 0.0),
        spacing: [0.02, 0.02, 0.02],
        dims,
    }
}

fn complex_volume(dims: [usize; 3], values: Vec<(f64, f64)>) -> VoxelVolume {
    VoxelVolume {
        grid: grid(dims),
        data: VolumeData::Complex(
            values
                .into_iter()
                .map(|(r, i)| Complex64::new(r, i))
                .collect(),
        ),
        provenance: Provenance::default(),
    }
}

fn real_volume(dims: [usize; 3], values: Vec<f64>) -> VoxelVolume {
    VoxelVolume::real(grid(dims), values, Provenance::default())
}

/// Two-segment time through an arbitrary crossing point on z = 0.
fn time_via(a: Vec3, b: Vec3, crossing: Vec3, cs: f64) -> f64 {
    a.distance(crossing) / CW + crossing.distance(b) / cs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn refracted_path_obeys_snell_and_fermat(
        a in water_point(),
        b in sediment_point(),
        sed in sediments(),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        let cs = sed.sound_speed;
        let p = refracted_path(a, b, CW, cs).unwrap();
        let c = p.crossing.unwrap();
        let s1 = p.incidence.sin() / CW;
        let s2 = p.refraction.sin() / cs;
        prop_assert!((s1 - s2).abs() < 1e-9, "Snell residual {}", s1 - s2);
        let t = time_via(a, b, c, cs);
        prop_assert!((t - p.travel_time).abs() < 1e-12);
        // Moving the crossing by 1 mm in any horizontal direction never
        // shortens the path.
        let d = Vec3::new(1e-3 * angle.cos(), 1e-3 * angle.sin(), 0.0);
        for moved in [c + d, c - d] {
            prop_assert!(time_via(a, b, moved, cs) >= p.travel_time - 1e-15);
        }
    }

    #[test]
    fn travel_time_is_reciprocal(a in water_point(), b in sediment_point(), sed in sediments()) {
        let forward = path_between(a, b, CW, sed.sound_speed).unwrap();
        let back = path_between(b, a, CW, sed.sound_speed).unwrap();
        prop_assert!((forward.travel_time - back.travel_time).abs() < 1e-12);
    }

    #[test]
    fn roughness_never_increases_coherent_reflection(
        sed in sediments(),
        theta in 0.0..1.5f64,
        freq in 1e3..100e3f64,
        h in 0.0..0.05f64,
    ) {
        let water = Scenario::design_study(sed).water;
        let flat = flat_reflection_coeff(&water, &sed, theta);
        let rough = eckart_coherent_coeff(flat, freq, h, theta, CW);
        prop_assert!(rough.norm() <= flat.norm() + 1e-15);
        if h == 0.0 {
            prop_assert!((rough - flat).norm() < 1e-15);
        }
    }

    #[test]
    fn two_image_sources_per_order(
        x in -2.0..2.0f64,
        y in -1.0..1.0f64,
        z in -2.4..-0.1f64,
        max_order in 0u32..5,
    ) {
        let s = Scenario::design_study(SedimentProperties::medium_sand());
        let images = enumerate_image_sources(Vec3::new(x, y, z), &s.geometry, max_order);
        prop_assert_eq!(images.iter().filter(|i| i.order == 0).count(), 1);
        for n in 1..=max_order {
            prop_assert_eq!(images.iter().filter(|i| i.order == n).count(), 2);
        }
        // Mirrors never move the horizontal position.
        for im in &images {
            prop_assert_eq!((im.position.x, im.position.y), (x, y));
        }
    }

    #[test]
    fn target_strength_is_monotone(
        r in 0.01..1.0f64,
        l in 0.05..3.0f64,
        lambda in 0.01..0.2f64,
        f in 1.01..2.0f64,
    ) {
        prop_assert!(sphere_ts(r * f) > sphere_ts(r));
        prop_assert!(cylinder_ts(r * f, l, lambda) > cylinder_ts(r, l, lambda));
        prop_assert!(cylinder_ts(r, l * f, lambda) > cylinder_ts(r, l, lambda));
        prop_assert!(cylinder_ts(r, l, lambda * f) < cylinder_ts(r, l, lambda));
    }

    #[test]
    fn grid_index_is_a_bijection(nx in 1usize..12, ny in 1usize..12, nz in 1usize..12) {
        let g = grid([nx, ny, nz]);
        let mut seen = vec![false; g.len()];
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    let idx = g.index(i, j, k);
                    prop_assert!(!seen[idx]);
                    seen[idx] = true;
                    prop_assert_eq!(g.unindex(idx), [i, j, k]);
                    prop_assert_eq!(g.locate(g.world(i, j, k)), Some([i, j, k]));
                }
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn scenario_text_round_trips(
        depth in 1.0..10.0f64,
        frac in 0.1..0.9f64,
        rough in 0.0..0.05f64,
        pings in 1usize..60,
        seed in any::<u64>(),
        sed in sediments(),
        target in (-1.0..1.0f64, -0.5..0.5f64, -0.5..2.0f64, 0.01..0.3f64),
    ) {
        let mut s = Scenario::design_study(sed);
        s.geometry.water_depth = depth;
        s.geometry.sensor_altitude = frac * depth;
        s.geometry.interface_rms_roughness = rough;
        s.track.ping_count = pings;
        s.rng_seed = seed;
        let (x, y, z, r) = target;
        s.targets.push(TargetSpec::sphere(r, Vec3::new(x, y, z)));
        let text = serialize_scenario(&s);
        let back = parse_scenario(&text, "roundtrip").unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_scenario(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_ignores_global_gain(
        values in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8 * 6 * 5),
        gain in 1e-3..1e3f64,
    ) {
        let dims = [8, 6, 5];
        let kernel = MedianKernel { along: 0.06, cross: 0.06, depth: 0.06 };
        let v = complex_volume(dims, values.clone());
        let scaled = complex_volume(dims, values.iter().map(|(r, i)| (r * gain, i * gain)).collect());
        let a = normalize(&v, &median_background(&v, kernel).unwrap()).unwrap();
        let b = normalize(&scaled, &median_background(&scaled, kernel).unwrap()).unwrap();
        for (x, y) in a.real_values().unwrap().iter().zip(b.real_values().unwrap()) {
            prop_assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn mip_commutes_with_compression(
        values in prop::collection::vec(-40.0..40.0f64, 7 * 5 * 6),
        gamma in 0.2..3.0f64,
        axis in prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)],
    ) {
        let v = real_volume([7, 5, 6], values);
        let bounds = drc_bounds(&v, DrcParams::default()).unwrap();
        let a = mip(&drc_with_bounds(&v, bounds, gamma).unwrap(), axis);
        let projected = mip(&v, axis);
        prop_assert_eq!(a.data.len(), projected.data.len());
        for (x, p) in a.data.iter().zip(&projected.data) {
            prop_assert_eq!(*x, drc_map(*p, bounds, gamma));
        }
    }

    #[test]
    fn compression_is_monotone(
        values in prop::collection::vec(-60.0..60.0f64, 2..400),
        low in 1.0..60.0f64,
        span in 1.0..39.0f64,
        gamma in 0.2..3.0f64,
    ) {
        let n = values.len();
        let v = real_volume([n, 1, 1], values.clone());
        let params = DrcParams { p_low: low, p_high: low + span, gamma };
        let out = subbottom_sas::imageproc::drc(&v, params).unwrap();
        let y = out.real_values().unwrap();
        for i in 0..n {
            prop_assert!((0.0..=1.0).contains(&y[i]));
            for j in 0..n {
                if values[i] <= values[j] {
                    prop_assert!(y[i] <= y[j]);
                }
            }
        }
    }

    #[test]
    fn compression_map_is_monotone(
        a in -100.0..100.0f64,
        b in -100.0..100.0f64,
        low in -50.0..0.0f64,
        span in 0.1..80.0f64,
        gamma in 0.1..4.0f64,
    ) {
        let bounds = DrcBounds { low, high: low + span };
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(drc_map(lo, bounds, gamma) <= drc_map(hi, bounds, gamma));
        prop_assert_eq!(drc_map(low + span, bounds, gamma), 1.0);
    }
}
