use mfp_core::oracle::ProjectionSplit;
use mfp_core::{mfp_vertex, mfp_vertex_reference, Covector, LatticePoint, PerturbedCovector, PointConfiguration};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    rng.next_u64() % n
}

fn coord(rng: &mut ChaCha8Rng) -> i64 {
    below(rng, 7) as i64 - 3
}

/// A random configuration whose projection spans the eliminated space.
fn instance(rng: &mut ChaCha8Rng) -> (PointConfiguration, ProjectionSplit) {
    loop {
        let k = 1 + below(rng, 2) as usize;
        let n = k + 1 + below(rng, (5 - k) as u64) as usize;
        let sets = (0..=k)
            .map(|_| {
                let size = 1 + below(rng, 5) as usize;
                (0..size)
                    .map(|_| LatticePoint::from_i64(&(0..n).map(|_| coord(rng)).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let config = PointConfiguration::new(sets).unwrap();
        let split = ProjectionSplit::new(n, k).unwrap();
        let projected: Vec<Vec<LatticePoint>> =
            config.sets().iter().map(|s| s.iter().map(|a| split.p(a)).collect()).collect();
        if PointConfiguration::new(projected).unwrap().is_full_dimensional() {
            return (config, split);
        }
    }
}

#[test]
fn fast_and_reference_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let (config, split) = instance(&mut rng);
        let primary = Covector::from_i64(&(0..split.kept()).map(|_| below(&mut rng, 41) as i64 - 20).collect::<Vec<_>>());
        let gamma = PerturbedCovector::with_seed(primary, case);
        let (fast, _) = mfp_vertex(&config, &split, &gamma, case).unwrap();
        let reference = mfp_vertex_reference(&config, &split, &gamma).unwrap();
        assert_eq!(fast.to_rational(), reference, "case {case}: {config:?}");
    }
}
