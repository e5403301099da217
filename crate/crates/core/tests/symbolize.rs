use proptest::prelude::*;
use rand::Rng;
use volclust::{build_bins, standardize, symbolize, BinningScheme, ReturnSeries, Seed};

/// Independent bin search: walk the edges from the left.
fn linear_scan(edges: &[f64], value: f64) -> usize {
    let n_bins = edges.len() - 1;
    let mut index = 0;
    for (i, &edge) in edges.iter().enumerate().take(n_bins).skip(1) {
        if value >= edge {
            index = i;
        }
    }
    index
}

#[test]
fn agrees_with_linear_scan_on_uniform_draws() {
    let mut rng = Seed(17).rng();
    let values: Vec<f64> = (0..10_000).map(|_| rng.random_range(-4.0..4.0)).collect();
    let r = ReturnSeries::new(values.clone()).unwrap();
    for n_bins in [3, 5, 41] {
        let scheme = BinningScheme::symmetric(n_bins, 0.0, 3.0).unwrap();
        let symbols = symbolize(&r, &scheme);
        assert_eq!(symbols.len(), values.len());
        for (&v, &i) in values.iter().zip(symbols.indices()) {
            assert_eq!(i, linear_scan(scheme.edges(), v), "value {v}");
        }
    }
}

#[test]
fn edges_themselves_follow_the_tie_rule() {
    let scheme = BinningScheme::symmetric(41, 0.0, 3.0).unwrap();
    for (i, &e) in scheme.edges().iter().enumerate() {
        assert_eq!(scheme.index_of(e), linear_scan(scheme.edges(), e));
        assert_eq!(scheme.index_of(e), i.clamp(0, 40));
    }
}

fn scheme_strategy() -> impl Strategy<Value = BinningScheme> {
    ((1usize..30).prop_map(|k| 2 * k + 1), 0.1f64..10.0, -1.0f64..1.0)
        .prop_map(|(n, half, loc)| BinningScheme::symmetric(n, loc, half).unwrap())
}

proptest! {
    #[test]
    fn total_and_monotone(scheme in scheme_strategy(), a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (i, j) = (scheme.index_of(lo), scheme.index_of(hi));
        prop_assert!(i < scheme.n_bins() && j < scheme.n_bins());
        prop_assert!(i <= j);
        prop_assert_eq!(i, linear_scan(scheme.edges(), lo));
    }

    #[test]
    fn built_scheme_is_symmetric(values in prop::collection::vec(-5.0f64..5.0, 3..100), k in 1usize..30, clip in 0.5f64..6.0) {
        let r = ReturnSeries::new(values).unwrap();
        prop_assume!(r.stdev() > 1e-6);
        let s = standardize(&r).unwrap();
        let n = 2 * k + 1;
        let scheme = build_bins(&s, n, clip).unwrap();
        prop_assert_eq!(scheme.edges().len(), n + 1);
        prop_assert!(scheme.centers()[n / 2].abs() < 1e-12);
        for i in 0..=n {
            prop_assert!((scheme.edges()[i] + scheme.edges()[n - i]).abs() < 1e-12);
        }
        for i in 0..n {
            prop_assert_eq!(scheme.centers()[i], (scheme.edges()[i] + scheme.edges()[i + 1]) / 2.0);
        }
    }
}
