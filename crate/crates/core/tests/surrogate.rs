use proptest::prelude::*;
use volclust::garch::simulate;
use volclust::ingest::sample_moments;
use volclust::{analyze, iid_gaussian, shuffle, AnalysisConfig, GarchParams, ReturnSeries, Seed};

#[test]
fn gaussian_moments() {
    let r = iid_gaussian(500_000, 1.0, Seed(31)).unwrap();
    let (mean, sd) = sample_moments(r.values());
    assert!(mean.abs() < 0.01, "mean {mean}");
    assert!((sd - 1.0).abs() < 0.01, "sd {sd}");
}

#[test]
fn shuffling_destroys_clustering() {
    let params = GarchParams::new(0.05, 0.10, 0.85).unwrap();
    let config = AnalysisConfig::default();
    for seed in 0..10 {
        let r = simulate(&params, 100_000, Seed(seed)).unwrap();
        let raw = analyze(&r, &config).unwrap();
        let shuffled = analyze(&shuffle(&r, Seed(seed).derive(1)).unwrap(), &config).unwrap();
        assert!(shuffled.dvc_p.abs() < raw.dvc_p.abs(), "seed {seed}");
        assert!(shuffled.dvc_n.abs() < raw.dvc_n.abs(), "seed {seed}");
    }
}

proptest! {
    #[test]
    fn shuffle_preserves_multiset(values in prop::collection::vec(-1e3f64..1e3, 1..300), seed: u64) {
        let r = ReturnSeries::new(values).unwrap();
        let s = shuffle(&r, Seed(seed)).unwrap();
        prop_assert_eq!(s.len(), r.len());
        let mut a = r.values().to_vec();
        let mut b = s.values().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(&a, &b);
        // moments of a permutation only differ by summation order
        prop_assert!((s.mean() - r.mean()).abs() <= 1e-9 * (1.0 + r.mean().abs()));
        prop_assert!((s.stdev() - r.stdev()).abs() <= 1e-9 * (1.0 + r.stdev()));
        prop_assert_eq!(s, shuffle(&r, Seed(seed)).unwrap());
    }
}
