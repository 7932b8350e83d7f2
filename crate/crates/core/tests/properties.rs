use cqg_core::instances::{on_plus_truncated, suq2_truncated};
use cqg_core::l1_algebra::{convolve, involute, lambda_hat};
use cqg_core::l2_space::{a_map, b_map, beta2_haar, beta2_haar_via_coproduct, pq_projection, star};
use cqg_core::{Element, L1Element, L2Vector, QuantumGroupData};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn instance() -> impl Strategy<Value = QuantumGroupData> {
    prop_oneof![
        (0.3f64..=1.0, 0usize..=3).prop_map(|(q, level)| suq2_truncated(q, level).unwrap()),
        (2usize..=4, 0usize..=2).prop_map(|(n, level)| on_plus_truncated(n, level).unwrap()),
    ]
}

fn element<S: cqg_core::element::Space>(g: &QuantumGroupData) -> impl Strategy<Value = Element<S>> {
    let basis = g.basis();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), basis.len()).prop_map(move |cs| {
        Element::from_terms(
            basis
                .iter()
                .cloned()
                .zip(cs)
                .map(|(k, (re, im))| (k, Complex64::new(re, im))),
        )
    })
}

fn with_three<S: cqg_core::element::Space>(
) -> impl Strategy<Value = (QuantumGroupData, Element<S>, Element<S>, Element<S>)> {
    instance().prop_flat_map(|g| {
        (element::<S>(&g), element::<S>(&g), element::<S>(&g), Just(g)).prop_map(|(f, h, k, g)| (g, f, h, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative((g, f, h, k) in with_three::<cqg_core::element::L1>()) {
        let lhs = convolve(&g, &convolve(&g, &f, &h).unwrap(), &k).unwrap();
        let rhs = convolve(&g, &f, &convolve(&g, &h, &k).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < TOL);
    }

    #[test]
    fn involution_reverses_products((g, f, h, _) in with_three::<cqg_core::element::L1>()) {
        prop_assert_eq!(involute(&g, &involute(&g, &f).unwrap()).unwrap(), f.clone());
        let lhs = involute(&g, &convolve(&g, &f, &h).unwrap()).unwrap();
        let rhs = convolve(&g, &involute(&g, &h).unwrap(), &involute(&g, &f).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < TOL);
    }

    #[test]
    fn lambda_hat_is_a_star_homomorphism((g, f, h, _) in with_three::<cqg_core::element::L1>()) {
        let lhs = lambda_hat(&g, &convolve(&g, &f, &h).unwrap()).unwrap();
        let rhs = lambda_hat(&g, &f).unwrap().mul(&lambda_hat(&g, &h).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < TOL);
        let adj = lambda_hat(&g, &involute(&g, &f).unwrap()).unwrap();
        prop_assert!(adj.max_abs_diff(&lambda_hat(&g, &f).unwrap().adjoint()) < TOL);
    }

    #[test]
    fn star_is_an_involution((g, xi, _, _) in with_three::<cqg_core::element::L2>()) {
        let back = star(&g, &star(&g, &xi).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&xi) < TOL);
    }

    #[test]
    fn a_and_b_are_inverse((g, f, _, _) in with_three::<cqg_core::element::L1>()) {
        prop_assert_eq!(b_map(&g, &a_map(&g, &f).unwrap()).unwrap(), f);
    }

    #[test]
    fn beta2_routes_agree((g, xi, _, _) in with_three::<cqg_core::element::L2>()) {
        let lhs = beta2_haar(&g, &xi).unwrap();
        prop_assert!(lhs.max_abs_diff(&beta2_haar_via_coproduct(&g, &xi).unwrap()) < TOL);
        prop_assert!(beta2_haar(&g, &lhs).unwrap().max_abs_diff(&lhs) < TOL);
        let p = pq_projection(&g, &xi).unwrap();
        prop_assert!(pq_projection(&g, &p).unwrap().max_abs_diff(&p) < TOL);
    }

    #[test]
    fn element_json_round_trips((_, f, _, _) in with_three::<cqg_core::element::L1>()) {
        let json = f.to_json_string().unwrap();
        prop_assert_eq!(L1Element::from_json_str(&json).unwrap(), f);
    }

    #[test]
    fn vector_json_round_trips((_, xi, _, _) in with_three::<cqg_core::element::L2>()) {
        let json = xi.to_json_string().unwrap();
        prop_assert_eq!(L2Vector::from_json_str(&json).unwrap(), xi);
    }
}
