use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vacuum_nonlocality::correlator::{amplitude_set, equilateral, smeared_pair, AmplitudeSet, FieldSpec};
use vacuum_nonlocality::harness::{ExperimentConfig, WindowConfig, WindowKind};
use vacuum_nonlocality::labels::{DetectorId, Sign};
use vacuum_nonlocality::nonlocality::states::{mix_with_noise, pure, w};
use vacuum_nonlocality::nonlocality::{behavior_from_rho, hybrid_bound, hybrid_lp_feasible, svetlichny_value, MeasurementSettings};
use vacuum_nonlocality::rho::assemble_from_pairs;
use vacuum_nonlocality::windows::WindowSpec;

fn set_at(separation: f64, amplitude: f64) -> AmplitudeSet {
    let window = WindowSpec::gaussian_default(amplitude, 1.0).unwrap();
    amplitude_set(&FieldSpec::massless(1.0), &equilateral(separation, 4.0, &window)).unwrap()
}

#[test]
fn regulator_independence() {
    let field = FieldSpec::massless(1.0);
    let dets = equilateral(3.0, 4.0, &WindowSpec::gaussian_default(1.0, 1.0).unwrap());
    for (i, j) in [(0, 0), (0, 1), (1, 2)] {
        for (a, b) in [(Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Plus)] {
            let e = smeared_pair(&field, &dets[i], a, &dets[j], b).unwrap();
            println!("{i}{j} {a:?}{b:?} {:e} {:e} {:e}", e.value.norm(), e.extrapolation_residual, e.quadrature_error);
            assert!(e.extrapolation_residual <= 1e-6 * e.value.norm());
        }
    }
}

#[test]
fn quadratic_scaling() {
    let base = set_at(3.0, 1.0);
    for lambda in [0.5, 2.0] {
        let scaled = set_at(3.0, lambda);
        for ((key, a), (_, b)) in base.entries().iter().zip(scaled.entries()) {
            let expect = a * lambda * lambda;
            assert!((b - expect).norm() <= 1e-12 * expect.norm(), "{key}: {b} vs {expect}");
        }
    }
}

#[test]
fn exchange_decays_with_distance() {
    let mut last = f64::INFINITY;
    for l in [1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0] {
        let d = set_at(l, 1.0).get(DetectorId::A, Sign::Plus, DetectorId::B, Sign::Plus).norm();
        assert!(d <= last, "L/T = {l}: {d} > {last}");
        last = d;
    }
}

#[test]
fn trace_defect_is_beyond_second_order() {
    // C equals the summed emission, so 1 − trace starts at λ⁴.
    let base = set_at(3.0, 1.0);
    let emission: f64 = DetectorId::ALL.iter().map(|&d| base.get(d, Sign::Minus, d, Sign::Plus).re).sum();
    let second_order = base.norm_term - emission;
    assert!(second_order.abs() <= 1e-6 * emission);
    let defect = |lambda: f64| {
        let trace = assemble_from_pairs(&base.scaled(lambda * lambda)).unwrap().rho.matrix.trace().re;
        1.0 - trace - second_order * lambda * lambda
    };
    // Halving λ divides a quartic defect by 16; the six-point corner entry
    // adds a λ⁶ correction that fades as λ shrinks.
    let ratios: Vec<f64> = [1.0, 0.5, 0.25, 0.125].windows(2).map(|w| defect(w[0]) / defect(w[1])).collect();
    assert!(ratios.iter().all(|r| (r - 16.0).abs() < 0.5), "{ratios:?}");
    assert!((ratios[2] - 16.0).abs() < (ratios[0] - 16.0).abs(), "{ratios:?}");
}

fn random_settings(rng: &mut ChaCha8Rng) -> MeasurementSettings {
    let mut unit = || {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    };
    MeasurementSettings {
        directions: std::array::from_fn(|_| [unit(), unit()]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quantum_behaviors_do_not_signal(seed in 0u64..10_000, lambda in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = mix_with_noise(&pure(&w()), lambda);
        let settings = random_settings(&mut rng);
        let b = behavior_from_rho(&rho, &settings, false).unwrap();
        prop_assert!(b.signaling() <= 1e-10);
        let direct = svetlichny_value(&rho, &settings).unwrap();
        prop_assert!((b.svetlichny() - direct).abs() <= 1e-12);
    }

    #[test]
    fn feasible_behaviors_respect_the_bound(seed in 0u64..10_000, lambda in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = mix_with_noise(&pure(&w()), lambda);
        let b = behavior_from_rho(&rho, &random_settings(&mut rng), false).unwrap();
        let verdict = hybrid_lp_feasible(&b).unwrap();
        if verdict.feasible {
            prop_assert!(b.svetlichny() <= hybrid_bound() + 1e-8);
        }
        if b.svetlichny() > hybrid_bound() {
            prop_assert!(!verdict.feasible);
        }
    }

    #[test]
    fn config_round_trip(
        seed in any::<u64>(),
        gap in 0.5f64..10.0,
        separations in prop::collection::vec(1.5f64..8.0, 1..4),
        couplings in prop::collection::vec(0.0f64..2.0, 1..3),
        eta in prop::option::of(0.01f64..1.0),
        starts in 1usize..200,
        raised in any::<bool>(),
    ) {
        let mut cfg = ExperimentConfig::default();
        cfg.seed = seed;
        cfg.detectors.gap = gap;
        cfg.sweep.separations = separations;
        cfg.sweep.couplings = couplings;
        cfg.filter.eta = eta;
        cfg.analysis.starts = starts;
        if raised {
            cfg.detectors.window = WindowConfig { family: WindowKind::RaisedCosine, ..Default::default() };
        }
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }
}

#[test]
fn overlap_stays_below_exchange() {
    let set = set_at(2.0, 1.0);
    for (i, j) in [(DetectorId::A, DetectorId::B), (DetectorId::B, DetectorId::C)] {
        let overlap: Complex64 = set.get(i, Sign::Minus, j, Sign::Plus);
        assert!(overlap.norm() < set.get(i, Sign::Plus, j, Sign::Plus).norm());
    }
}
