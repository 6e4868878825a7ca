mod common;

use proptest::prelude::*;
use rand::Rng;

use ballvol::barcode::{bottleneck, bottleneck_eps, wasserstein_diagram, DiagonalGrid};
use ballvol::gf2::Matrix;
use ballvol::metric::PointCloud;
use ballvol::persistence::{ph_pipeline, PersistenceDiagram, PhParams};
use ballvol::rng::derive_seed;
use ballvol::zigzag::{interval_decomposition, zz_pipeline_full, Direction, ZigzagArrow, ZigzagModule, ZzParams};

use common::*;

fn diagram(pairs: Vec<(f64, f64)>) -> PersistenceDiagram {
    PersistenceDiagram::new(pairs, 1.0, 6).unwrap()
}

fn pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..=5).prop_map(|v| {
        v.into_iter()
            .filter(|(u, w)| u != w)
            .map(|(u, w)| (u.min(w), u.max(w)))
            .collect()
    })
}

fn random_module(rng: &mut rand_chacha::ChaCha8Rng) -> ZigzagModule {
    let nodes = rng.random_range(1..=6);
    let dims: Vec<usize> = (0..nodes).map(|_| rng.random_range(0..=3)).collect();
    let arrows = (0..nodes - 1)
        .map(|a| {
            let direction = if rng.random::<bool>() { Direction::Forward } else { Direction::Backward };
            let (s, t) = direction.endpoints(a);
            let density = rng.random::<f64>();
            ZigzagArrow { direction, map: Matrix::from_fn(dims[t], dims[s], |_, _| rng.random::<f64>() < density) }
        })
        .collect();
    ZigzagModule::new(dims, arrows).unwrap()
}

#[test]
fn ph_ranks_match_rank_nullity_in_three_dimensions() {
    let mut rng = rng(derive_seed(30, 0));
    for _ in 0..60 {
        let n = rng.random_range(1..=7);
        let pts = random_points(&mut rng, n, 3, 1.0);
        let dist = distance_rows(&pts);
        let cloud = PointCloud::new(pts, None).unwrap();
        let verts: Vec<usize> = (0..n).collect();
        for k in 0..=2 {
            let d = ph_pipeline(&cloud, &PhParams { k, max_scale: 2.0, max_dim: k + 1, alpha: 2.0, cap: 64 }).unwrap();
            for _ in 0..4 {
                let s = rng.random::<f64>() * 2.0;
                assert_eq!(d.rank_at(s), betti(&dist, &verts, s, k), "k = {k}, s = {s}");
            }
        }
    }
}

#[test]
fn ph_is_stable_under_perturbation() {
    let mut rng = rng(derive_seed(31, 0));
    for _ in 0..60 {
        let n = rng.random_range(2..=7);
        let pts = random_points(&mut rng, n, 2, 1.0);
        let delta = 0.05 * rng.random::<f64>();
        let moved: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let t = rng.random::<f64>() * std::f64::consts::TAU;
                vec![p[0] + delta * t.cos(), p[1] + delta * t.sin()]
            })
            .collect();
        let params = PhParams { k: 1, max_scale: 3.0, max_dim: 2, alpha: 3.0, cap: 64 };
        let a = ph_pipeline(&PointCloud::new(pts, None).unwrap(), &params).unwrap();
        let b = ph_pipeline(&PointCloud::new(moved, None).unwrap(), &params).unwrap();
        assert!(bottleneck(&a, &b).unwrap().dist <= 2.0 * delta + 1e-12);
    }
}

#[test]
fn random_modules_decompose_consistently() {
    let mut rng = rng(derive_seed(32, 0));
    for _ in 0..300 {
        let m = random_module(&mut rng);
        let n = m.len();
        let bc = interval_decomposition(&m);
        for v in 1..=n {
            assert_eq!(bc.covering(v, v), m.dims()[v - 1]);
        }
        for (a, arrow) in m.arrows().iter().enumerate() {
            assert_eq!(arrow.map.rank(), bc.covering(a + 1, a + 2));
        }
        let mut mirrored: Vec<(usize, usize)> = bc.intervals().iter().map(|&(i, j)| (n + 1 - j, n + 1 - i)).collect();
        mirrored.sort_unstable();
        assert_eq!(interval_decomposition(&m.reversed()).intervals(), mirrored.as_slice());
    }
}

#[test]
fn single_cloud_zigzag_is_a_betti_number() {
    let mut rng = rng(derive_seed(33, 0));
    for _ in 0..40 {
        let n = rng.random_range(1..=6);
        let pts = random_points(&mut rng, n, 2, 1.0);
        let dist = distance_rows(&pts);
        let eps = rng.random_range(0.1..1.0);
        let out = zz_pipeline_full(&[PointCloud::new(pts, None).unwrap()], &ZzParams { eps, k: 0, max_dim: 1, alpha: 1.0, cap: 16 }).unwrap();
        assert_eq!(out.barcode.len(), betti(&dist, &(0..n).collect::<Vec<_>>(), eps, 0));
        assert!(out.barcode.intervals().iter().all(|&iv| iv == (1, 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bottleneck_matches_enumeration(a in pairs(), b in pairs()) {
        let got = bottleneck(&diagram(a.clone()), &diagram(b.clone())).unwrap().dist;
        prop_assert!((got - brute_bottleneck(&a, &b)).abs() <= 1e-12);
    }

    #[test]
    fn diagram_distances_are_metrics(a in pairs(), b in pairs(), c in pairs(), q in 1.0f64..3.0) {
        let (a, b, c) = (diagram(a), diagram(b), diagram(c));
        let grid = DiagonalGrid::uniform(0.1, 1.0).unwrap();
        let metrics: [&dyn Fn(&PersistenceDiagram, &PersistenceDiagram) -> f64; 3] = [
            &|x, y| bottleneck(x, y).unwrap().dist,
            &|x, y| bottleneck_eps(x, y, &grid).unwrap().dist,
            &|x, y| wasserstein_diagram(x, y, q).unwrap(),
        ];
        for d in metrics {
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
        }
        prop_assert!(bottleneck(&a, &b).unwrap().dist <= wasserstein_diagram(&a, &b, q).unwrap() + 1e-12);
    }

    #[test]
    fn eps_bottleneck_is_within_n_eps(a in pairs(), b in pairs(), eps in 0.02f64..0.3) {
        let (a, b) = (diagram(a), diagram(b));
        let grid = DiagonalGrid::uniform(eps, 1.0).unwrap();
        let gap = (bottleneck(&a, &b).unwrap().dist - bottleneck_eps(&a, &b, &grid).unwrap().dist).abs();
        prop_assert!(gap <= 6.0 * eps + 1e-12);
    }
}
