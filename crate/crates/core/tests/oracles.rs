use proptest::prelude::*;

use rumorlab::gw::extinction_by_iteration;
use rumorlab::laws::{law_n_prime, offspring_law};
use rumorlab::thresholds::{psi_root, theta};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_iteration_matches_root_finder(d in 3u32..40, j in 1u32..=50) {
        let p = j as f64 / 50.0;
        let tol = 1e-11;
        let iterated = extinction_by_iteration(&offspring_law(d, p).unwrap(), tol).unwrap();
        let psi = psi_root(d, p).unwrap().psi;
        prop_assert!((iterated - psi).abs() <= 10.0 * tol, "{} vs {}", iterated, psi);
    }

    #[test]
    fn theta_is_root_law_at_psi(d in 3u32..40, j in 1u32..=50) {
        let p = j as f64 / 50.0;
        let psi = psi_root(d, p).unwrap().psi;
        let from_law = 1.0 - law_n_prime(d, p).unwrap().pgf(psi);
        prop_assert!((theta(d, p).unwrap() - from_law).abs() < 1e-12);
    }
}
