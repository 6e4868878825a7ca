mod common;

use proptest::prelude::*;
use rand::Rng;

use ballvol::ballstats::{
    ball_volume_curve, empirical_ball_volume, fidi_ball_volume, two_sample_ball_test, BarcodeSample, DiagramGenerator, Provenance,
    TrajectorySample,
};
use ballvol::barcode::DiagramMetric;
use ballvol::persistence::PersistenceDiagram;
use ballvol::rng::derive_seed;

use common::*;

fn sample_of(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Vec<Vec<(f64, f64)>>, BarcodeSample) {
    let raw: Vec<Vec<(f64, f64)>> = (0..n).map(|_| random_pairs(rng, 3, 1.0)).collect();
    let diagrams = raw.iter().map(|p| PersistenceDiagram::new(p.clone(), 1.0, 3).unwrap()).collect();
    (raw, BarcodeSample::new(diagrams, Provenance::Synthetic).unwrap())
}

fn volume_oracle(raw: &[Vec<(f64, f64)>], center: &[(f64, f64)], r: f64) -> f64 {
    raw.iter().filter(|d| brute_bottleneck(d, center) <= r).count() as f64 / raw.len() as f64
}

#[test]
fn ball_volumes_match_counting_oracle() {
    let mut rng = rng(derive_seed(40, 0));
    for _ in 0..40 {
        let n = rng.random_range(1..=12);
        let (raw, sample) = sample_of(&mut rng, n);
        let center = random_pairs(&mut rng, 3, 1.0);
        let c = PersistenceDiagram::new(center.clone(), 1.0, 3).unwrap();
        let mut radii: Vec<f64> = (0..6).map(|_| rng.random::<f64>() * 0.6).collect();
        radii.sort_by(f64::total_cmp);
        let curve = ball_volume_curve(&sample, &c, &radii, &DiagramMetric::Bottleneck).unwrap();
        for (r, v) in radii.iter().zip(&curve.values) {
            assert_eq!(*v, volume_oracle(&raw, &center, *r));
        }
        assert!(curve.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(curve.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

#[test]
fn statistic_matches_pooled_sup_oracle() {
    let mut rng = rng(derive_seed(41, 0));
    for _ in 0..20 {
        let (na, nb) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let (ra, a) = sample_of(&mut rng, na);
        let (rb, b) = sample_of(&mut rng, nb);
        let radii = [0.05, 0.1, 0.2, 0.4];
        let t = two_sample_ball_test(&a, &b, Some(&radii), 99, 7, &DiagramMetric::Bottleneck).unwrap();
        let (ra, rb) = (&ra, &rb);
        let want = ra
            .iter()
            .chain(rb)
            .flat_map(|c| radii.iter().map(move |&r| (volume_oracle(ra, c, r) - volume_oracle(rb, c, r)).abs()))
            .fold(0.0, f64::max);
        assert!((t.statistic - want).abs() <= 1e-12, "{} vs {want}", t.statistic);
    }
}

#[test]
fn permutation_p_values_are_valid_under_the_null() {
    let null = DiagramGenerator::UniformBox { alpha: 1.0, cap: 3, max_points: 3 };
    let reps = 300u64;
    let n_perm = 99;
    let p: Vec<f64> = (0..reps)
        .map(|r| {
            let a = null.sample(15, derive_seed(42, 2 * r)).unwrap();
            let b = null.sample(15, derive_seed(42, 2 * r + 1)).unwrap();
            two_sample_ball_test(&a, &b, None, n_perm, derive_seed(43, r), &DiagramMetric::Bottleneck).unwrap().p_value
        })
        .collect();
    for u in [0.1, 0.25, 0.5] {
        let rate = p.iter().filter(|&&x| x <= u).count() as f64 / reps as f64;
        let se = (u * (1.0 - u) / reps as f64).sqrt();
        assert!(rate <= u + 1.0 / (n_perm as f64 + 1.0) + 3.0 * se, "P(p <= {u}) = {rate}");
    }
}

#[test]
fn fidi_with_one_time_is_the_ball_volume() {
    let mut rng = rng(derive_seed(44, 0));
    for _ in 0..20 {
        let n = rng.random_range(1..=8);
        let (_, sample) = sample_of(&mut rng, n);
        let ts = TrajectorySample::new(sample.diagrams().iter().map(|d| vec![d.clone()]).collect(), None).unwrap();
        let center = sample.diagrams()[0].clone();
        for r in [0.0, 0.1, 0.3] {
            assert_eq!(
                fidi_ball_volume(&ts, std::slice::from_ref(&center), r, &DiagramMetric::Bottleneck).unwrap(),
                empirical_ball_volume(&sample, &center, r, &DiagramMetric::Bottleneck).unwrap()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn test_is_symmetric(seed in any::<u64>(), na in 1usize..10, nb in 1usize..10) {
        let mut r = rng(seed);
        let (_, a) = sample_of(&mut r, na);
        let (_, b) = sample_of(&mut r, nb);
        let ab = two_sample_ball_test(&a, &b, None, 99, seed, &DiagramMetric::Bottleneck).unwrap();
        let ba = two_sample_ball_test(&b, &a, None, 99, seed, &DiagramMetric::Bottleneck).unwrap();
        prop_assert_eq!(ab.statistic, ba.statistic);
        prop_assert_eq!(ab.p_value, ba.p_value);
        prop_assert!(ab.p_value > 0.0 && ab.p_value <= 1.0);
    }
}
