use calogero_core::harmonic::{HaSpectrum, HarmonicParams};
use calogero_core::spectra::{linear_entropy, min_entropy, renyi, von_neumann};
use calogero_core::EntanglementSpectrum;
use proptest::prelude::*;

/// Normalized spectra with 2..=40 entries, including a few near-zero weights.
fn spectrum() -> impl Strategy<Value = EntanglementSpectrum> {
    prop::collection::vec(prop_oneof![4 => 1e-3f64..1.0, 1 => 1e-12f64..1e-6], 2..=40).prop_map(|w| {
        let total: f64 = w.iter().sum();
        EntanglementSpectrum::from_probabilities(w.iter().map(|x| x / total).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn renyi_is_non_increasing_in_order(s in spectrum(), a in 0.05f64..8.0, b in 0.05f64..8.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(renyi(&s, lo).unwrap() >= renyi(&s, hi).unwrap() - 1e-10);
    }

    #[test]
    fn renyi_limits(s in spectrum()) {
        let vn = von_neumann(&s);
        prop_assert!((renyi(&s, 1.0 + 1e-4).unwrap() - vn).abs() <= 1e-3);
        prop_assert!((renyi(&s, 1.0 - 1e-4).unwrap() - vn).abs() <= 1e-3);
        prop_assert!((renyi(&s, 1e6).unwrap() - min_entropy(&s)).abs() <= 1e-4);
        prop_assert_eq!(renyi(&s, f64::INFINITY).unwrap(), min_entropy(&s));
    }

    #[test]
    fn linear_entropy_is_collision_entropy(s in spectrum()) {
        let s2 = renyi(&s, 2.0).unwrap();
        prop_assert!((linear_entropy(&s) - (1.0 - (-s2).exp2())).abs() <= 1e-12);
    }

    #[test]
    fn entropies_are_bounded(s in spectrum()) {
        let d = s.eigenvalues().len() as f64;
        let vn = von_neumann(&s);
        prop_assert!(vn >= 0.0 && vn <= d.log2() + 1e-12);
        prop_assert!(min_entropy(&s) <= vn + 1e-12);
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn harmonic_partial_sums_match_direct_summation(delta in -6f64..1.0) {
        let params = HarmonicParams::from_offset(10f64.powf(delta)).unwrap();
        let spectrum = HaSpectrum::new(params);
        let (kept, tail) = spectrum.branch_partial_sum(2000, 12);
        let direct: f64 = (0..2000).flat_map(|k| (0..12).map(move |kp| (k, kp))).map(|(k, kp)| spectrum.eigenvalue(k, kp)).sum();
        prop_assert!((kept - direct).abs() <= 1e-12 * kept.max(1e-300) + 1e-15);
        prop_assert!((2.0 * (kept + tail) - 1.0).abs() <= 1e-12);
    }
}
