use proptest::prelude::*;

use rsc_core::cycles::{f_from_h, h_from_f};
use rsc_core::homology::homology;
use rsc_core::model::{io, is_valid_complex, ProbabilityVector};
use rsc_core::sampler::{sample, SampleSpec};

fn spec() -> impl Strategy<Value = (u32, Vec<f64>, u64)> {
    (3u32..11, 1usize..4, any::<u64>())
        .prop_flat_map(|(n, r, seed)| (Just(n), prop::collection::vec(0.0f64..=1.0, r + 1), Just(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_valid_and_homology_is_consistent((n, p, seed) in spec()) {
        let y = sample(&SampleSpec::with_probabilities(n, ProbabilityVector::from_f64s(&p).unwrap(), seed)).unwrap();
        prop_assert!(is_valid_complex(&y.to_raw()).valid);
        let h = homology(&y).unwrap();
        prop_assert_eq!(h.euler_characteristic, h.betti.euler_characteristic());
        prop_assert_eq!(io::from_json(&io::to_json(&y).unwrap()).unwrap(), y.clone());
        prop_assert_eq!(io::from_text(&io::to_text(&y)).unwrap(), y);
    }

    #[test]
    fn coupling_is_monotone((n, p, seed) in spec(), shrink in 0.0f64..=1.0) {
        let lower: Vec<f64> = p.iter().map(|x| x * shrink).collect();
        let big = sample(&SampleSpec::with_probabilities(n, ProbabilityVector::from_f64s(&p).unwrap(), seed)).unwrap();
        let small = sample(&SampleSpec::with_probabilities(n, ProbabilityVector::from_f64s(&lower).unwrap(), seed)).unwrap();
        prop_assert!(small.iter_faces().all(|f| big.contains(f)));
    }

    #[test]
    fn h_and_f_are_mutually_inverse((n, p, seed) in spec()) {
        let y = sample(&SampleSpec::with_probabilities(n, ProbabilityVector::from_f64s(&p).unwrap(), seed)).unwrap();
        if let Some(k) = y.dim() {
            let f = y.f_vector();
            let back = f_from_h(&h_from_f(&f, k)).unwrap();
            prop_assert_eq!(&back.0[..], &f.0[..=k]);
        }
    }
}
