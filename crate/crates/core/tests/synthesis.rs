//! Echo synthesis properties over realized scatterer fields: superposition
//! of echo families, source-level scaling against multipath, determinism,
//! diffuse-return statistics and density invariance of the mean power.

use num_complex::Complex64;
use rayon::prelude::*;

use subbottom_sas::geom::Vec3;
use subbottom_sas::scatterfield::{footprint_extent, generate_field, mix_seed, ScattererField};
use subbottom_sas::scene::{ping_poses, Scenario, SedimentProperties, TargetSpec};
use subbottom_sas::synth::{ping_seed, Components, PingRecord, Synthesizer};
use subbottom_sas::validate::single_pair_scene;

fn series(r: &PingRecord) -> &[Vec<f64>] {
    r.real().expect("raw record")
}

/// Small diffuse scene with one target, two pings, shallow volume layer.
fn mixed_scene() -> Scenario {
    let mut s = single_pair_scene(SedimentProperties::medium_sand());
    s.track.ping_count = 2;
    s.scatterers.max_incidence_deg = 25.0;
    s.targets = vec![TargetSpec::sphere(0.1, Vec3::new(0.0, 0.0, 0.3))];
    s
}

fn field_of(s: &Scenario, seed: u64) -> ScattererField {
    generate_field(s, footprint_extent(s), seed).unwrap()
}

#[test]
fn targets_and_scatterers_superpose() {
    let s = mixed_scene();
    let field = field_of(&s, 3);
    let synth = Synthesizer::new(&s).unwrap();
    let event = ping_poses(&s)[1];
    let only = |scatterers: bool, targets: bool| {
        let comps = Components {
            scatterers,
            targets,
            ..Components::NONE
        };
        synth.ping_components(&field, &event, 0, comps).unwrap()
    };
    let both = only(true, true);
    let sum = only(true, false).add(&only(false, true)).unwrap();
    let peak = series(&both)[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(peak > 0.0);
    for (a, b) in series(&both)
        .iter()
        .flatten()
        .zip(series(&sum).iter().flatten())
    {
        assert!((a - b).abs() <= 1e-9 * peak, "{a} vs {b}");
    }
}

#[test]
fn louder_source_does_not_beat_multipath() {
    // A proud target seen directly and through surface and seabed images.
    let mut s = single_pair_scene(SedimentProperties::medium_sand());
    s.scatterers.interface = false;
    s.scatterers.volume = false;
    s.propagation.max_order = 2;
    s.targets = vec![TargetSpec::point(Vec3::new(0.0, 0.0, -0.8), -10.0)];
    let empty = field_of(&s, 0);
    let comps = Components {
        targets: true,
        ..Components::NONE
    };
    // Direct echo amplitude and the strongest multipath replica.
    let levels = |sl: f64| {
        let mut t = s.clone();
        t.waveform.source_level = sl;
        let synth = Synthesizer::new(&t).unwrap();
        let mut arrivals = synth
            .arrivals(&empty, &ping_poses(&t)[0], comps)
            .unwrap()
            .remove(0);
        arrivals.sort_by(|a, b| a.delay.total_cmp(&b.delay));
        let direct = arrivals[0].amplitude.norm();
        let replica = arrivals[1..]
            .iter()
            .map(|a| a.amplitude.norm())
            .fold(0.0, f64::max);
        (direct, replica)
    };
    let (d1, m1) = levels(190.0);
    let (d2, m2) = levels(190.0 + 20.0 * 2f64.log10());
    assert!(m1 > 0.0);
    let gain_db = 20.0 * (d2 / d1).log10();
    assert!((gain_db - 6.0206).abs() < 1e-3, "target gain {gain_db} dB");
    assert!(((d2 / m2) / (d1 / m1) - 1.0).abs() < 1e-12);
}

#[test]
fn identical_inputs_give_identical_records() {
    let mut s = mixed_scene();
    s.noise.enabled = true;
    let run = || {
        let field = field_of(&s, 11);
        let synth = Synthesizer::new(&s).unwrap();
        ping_poses(&s)
            .iter()
            .map(|e| synth.ping(&field, e, ping_seed(&s, e.event_index)).unwrap())
            .collect::<Vec<_>>()
    };
    let (a, b) = (run(), run());
    for (x, y) in a.iter().zip(&b) {
        for (u, v) in series(x).iter().flatten().zip(series(y).iter().flatten()) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
    }
}

/// Diffuse-only analytic series of the single-pair scene, one per seed.
fn ensemble(s: &Scenario, seeds: u64, base: u64) -> Vec<Vec<Complex64>> {
    let synth = Synthesizer::new(s).unwrap();
    let event = ping_poses(s)[0];
    let comps = Components {
        scatterers: true,
        ..Components::NONE
    };
    (0..seeds)
        .into_par_iter()
        .map(|i| {
            let field = field_of(s, mix_seed(base, i));
            synth
                .ping_analytic(&field, &event, comps)
                .unwrap()
                .remove(0)
        })
        .collect()
}

/// Asymptotic Kolmogorov survival function.
fn kolmogorov_p(n: usize, d: f64) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

#[test]
fn diffuse_envelope_is_rayleigh() {
    let s = single_pair_scene(SedimentProperties::medium_sand());
    let runs = ensemble(&s, 500, 77);
    let start = Synthesizer::new(&s).unwrap().window().start;
    let t = 2.0 * s.geometry.sensor_altitude / s.water.sound_speed + 0.6 * s.waveform.duration;
    let bin = ((t - start) * s.waveform.sample_rate).round() as usize;
    let mut r: Vec<f64> = runs.iter().map(|x| x[bin].norm()).collect();
    let two_sigma2 = r.iter().map(|v| v * v).sum::<f64>() / r.len() as f64;
    assert!(two_sigma2 > 0.0);
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    let d = r
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = 1.0 - (-v * v / two_sigma2).exp();
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max);
    let p = kolmogorov_p(r.len(), d);
    assert!(p > 0.01, "KS distance {d}, p = {p}");
}

#[test]
fn doubling_density_keeps_mean_power() {
    let mut base = single_pair_scene(SedimentProperties::medium_sand());
    base.scatterers.max_incidence_deg = 25.0;
    let mut dense = base.clone();
    dense.scatterers.interface_density *= 2.0;
    dense.scatterers.volume_density *= 2.0;
    let seeds = 600;
    let synth = Synthesizer::new(&base).unwrap();
    let (start, fs) = (synth.window().start, base.waveform.sample_rate);
    let c = base.water.sound_speed;
    // Pool the bulk of the diffuse return: neighbouring samples see mostly
    // the same scatterers, so finer windows add little information.
    let first = 2.0 * base.geometry.sensor_altitude / c + 0.2 * base.waveform.duration;
    let k0 = ((first - start) * fs) as usize;
    let k1 = k0 + (base.waveform.duration * fs) as usize;
    assert!(k0 + 100 < synth.window().sample_count(fs));
    let mean_power = |s: &Scenario, salt: u64| {
        let runs = ensemble(s, seeds, salt);
        runs.iter()
            .map(|x| {
                x[k0..k1.min(x.len())]
                    .iter()
                    .map(|v| v.norm_sqr())
                    .sum::<f64>()
            })
            .sum::<f64>()
            / seeds as f64
    };
    for (sa, sb) in [(1, 2), (2, 1)] {
        let diff = 10.0 * (mean_power(&dense, sb) / mean_power(&base, sa)).log10();
        assert!(
            diff.abs() < 0.5,
            "doubled density changes the mean power by {diff:.3} dB"
        );
    }
}
