use opchain::chainseq::{
    complementary, gamma_from_system, generalised_complementary, minimal_parameters,
    parameters_from_gamma, system_from_gamma, wall_sppcs_test, GammaSeq, SppcsVerdict,
};
use opchain::families::laguerre_system;
use opchain::jacobi::{lu_factor, truncate, ul_product};
use opchain::perturbations::{
    gccs_witness, quasi_orthogonality_check, swapped_split_check, unswapped_split_check,
};
use opchain::recurrence::{convergent, kernel_system, laurent_expand, moments};
use opchain::scalar::{int, rat, Rational};
use opchain::wire::{GammaDoc, SystemDoc};
use opchain::ThreeTermSystem;
use proptest::prelude::*;

fn gamma_strategy(len: usize) -> impl Strategy<Value = GammaSeq<Rational>> {
    prop::collection::vec((1i64..=60, 1i64..=20), len)
        .prop_map(|v| GammaSeq::from_vec(v.into_iter().map(|(p, q)| rat(p, q)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_round_trips_through_system(gamma in gamma_strategy(14)) {
        let sys = system_from_gamma(&gamma).unwrap();
        let back = gamma_from_system(&sys, &gamma.get(1).unwrap(), 6).unwrap();
        prop_assert_eq!(back.take(14).unwrap(), gamma.take(14).unwrap());
    }

    #[test]
    fn split_identities_hold(gamma in gamma_strategy(20)) {
        prop_assert!(swapped_split_check(&gamma, 6).unwrap().holds());
        prop_assert!(unswapped_split_check(&gamma, 6).unwrap().holds());
        prop_assert_eq!(gccs_witness(&gamma, 6).unwrap(), None);
        for n in 1..=5 {
            prop_assert!(quasi_orthogonality_check(&gamma, n).unwrap().holds);
        }
    }

    #[test]
    fn lu_reassembles(gamma in gamma_strategy(14)) {
        let sys = system_from_gamma(&gamma).unwrap();
        let g1 = gamma.get(1).unwrap();
        for n in 1..=6 {
            let j = truncate(&sys, n).unwrap();
            let f = lu_factor(&j, &g1).unwrap();
            prop_assert_eq!(f.product(), j);
            let ul = ul_product(&f);
            let k = truncate(&kernel_system(&gamma).unwrap(), n).unwrap();
            prop_assert_eq!(&ul.sub, &k.sub);
            prop_assert_eq!(&ul.diag[..n - 1], &k.diag[..n - 1]);
        }
    }

    #[test]
    fn convergents_match_moments(gamma in gamma_strategy(12)) {
        let sys = system_from_gamma(&gamma).unwrap();
        for n in 1..=4 {
            let (p, q) = convergent(&sys, n).unwrap();
            let series = laurent_expand(&p, &q, 2 * n).unwrap();
            for k in 0..2 * n {
                prop_assert_eq!(&series.coeffs[k], &moments(&sys, k).unwrap());
            }
        }
    }

    #[test]
    fn parameters_are_chain_parameters(gamma in gamma_strategy(16)) {
        let g = parameters_from_gamma(&gamma, 6).unwrap();
        let sys = system_from_gamma(&gamma).unwrap();
        let d = g.chain();
        for n in 1..=6 {
            let b = sys.b(n).unwrap() * sys.b(n + 1).unwrap();
            prop_assert_eq!(d.get(n).unwrap(), sys.a2(n).unwrap() / b);
        }
    }
}

#[test]
fn complementary_of_laguerre() {
    let sys = laguerre_system(&int(0)).unwrap();
    let gamma = gamma_from_system(&sys, &int(0), 6).unwrap();
    let m = parameters_from_gamma(&gamma, 6).unwrap();
    assert!(m.is_minimal());
    assert_eq!(m, minimal_parameters(&m.chain(), 6).unwrap());
    let k = complementary(&m).unwrap();
    assert_eq!(k.parameters.values()[3], rat(4, 7));
    let again = generalised_complementary(&m).unwrap();
    assert_eq!(again.parameters, k.parameters);
}

#[test]
fn wall_verdicts_on_laguerre() {
    // m_n = n / (2n + α + 1): α = -1/2 is SPPCS by the Wall bound
    let m = parameters_from_gamma(
        &gamma_from_system(&laguerre_system(&rat(-1, 2)).unwrap(), &int(0), 12).unwrap(),
        12,
    )
    .unwrap();
    assert_eq!(wall_sppcs_test(&m, 12).verdict, SppcsVerdict::UniqueByWall);
}

#[test]
fn wire_round_trip_keeps_system() {
    let sys = laguerre_system(&rat(7, 3)).unwrap();
    let doc = SystemDoc::from_system(&sys, 6).unwrap();
    let text = serde_json::to_string(&doc).unwrap();
    let back: ThreeTermSystem<Rational> = serde_json::from_str::<SystemDoc>(&text)
        .unwrap()
        .to_system()
        .unwrap();
    assert_eq!(back.first_difference(&sys, 5).unwrap(), None);
    let gamma = gamma_from_system(&sys, &int(0), 3).unwrap();
    let gdoc = GammaDoc::from_gamma(&gamma, 8).unwrap();
    assert_eq!(gdoc.gamma[..4], ["0", "10/3", "1", "13/3"]);
}
