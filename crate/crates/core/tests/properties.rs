use num_traits::{FromPrimitive, ToPrimitive, Zero};
use phi4_core::borel::pade::pade_exact;
use phi4_core::cumulants::recursion_matches_exponential;
use phi4_core::graph::named;
use phi4_core::rational::{self, int};
use phi4_core::valuation::{self, Compensated, Cutoff, Method, Valuator};
use phi4_core::{canonicalize, wick, Multigraph, Rational};
use proptest::prelude::*;

fn multigraph() -> impl Strategy<Value = Multigraph> {
    (2usize..=7).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=12).prop_map(move |pairs| {
            let edges = pairs.into_iter().filter(|(u, v)| u != v);
            Multigraph::new(n, edges).unwrap()
        })
    })
}

fn relabelled() -> impl Strategy<Value = (Multigraph, Vec<usize>)> {
    multigraph().prop_flat_map(|g| {
        let perm = Just((0..g.vertex_count()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), perm)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_key_ignores_labels((g, perm) in relabelled()) {
        let h = g.relabel(&perm).unwrap();
        let key = canonicalize(&g).unwrap();
        prop_assert_eq!(&key, &canonicalize(&h).unwrap());
        prop_assert_eq!(&key, &canonicalize(&key.to_graph()).unwrap());
        prop_assert_eq!(key.to_graph().degree(), g.degree());
    }

    #[test]
    fn canonical_key_separates_edge_counts(g in multigraph(), h in multigraph()) {
        if canonicalize(&g).unwrap() == canonicalize(&h).unwrap() {
            prop_assert_eq!(g.valences().iter().sum::<usize>(), h.valences().iter().sum::<usize>());
            let mut a = g.valences();
            let mut b = h.valences();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_sums_match_streamed_matchings(a in 0usize..=3, b in 0usize..=4) {
        prop_assume!(a + b >= 2 && 4 * a + 2 * b <= 14);
        let bucketed = wick::p0(a, b).unwrap();
        prop_assert_eq!(&bucketed, &wick::p0_by_matchings(a, b, wick::DEFAULT_LEG_CAP).unwrap());
        let brute = wick::brute_force_nonflat_count(a, b);
        prop_assert_eq!(bucketed.total(), int(brute as i64));
    }

    #[test]
    fn cumulant_recursion_inverts(values in proptest::collection::vec(-50i64..=50, 2..9)) {
        let mut mu = vec![int(1)];
        mu.extend(values.into_iter().map(int));
        prop_assert!(recursion_matches_exponential(&mu));
    }

    #[test]
    fn pade_matches_series(
        coeffs in proptest::collection::vec((-20i64..=20, 1i64..=9), 8),
        l in 0usize..=3,
        m in 1usize..=3,
    ) {
        let c: Vec<Rational> = coeffs.iter().map(|&(p, q)| rational::ratio(p, q)).collect();
        prop_assume!(!c[0].is_zero());
        if let Ok((p, q)) = pade_exact(&c, l, m) {
            prop_assert_eq!(p.len(), l + 1);
            prop_assert_eq!(q.len(), m + 1);
            for k in 0..=l + m {
                let qf: Rational = (0..=m.min(k)).map(|j| &q[j] * &c[k - j]).sum();
                let pk = p.get(k).cloned().unwrap_or_else(Rational::zero);
                prop_assert_eq!(qf, pk, "order {}", k);
            }
        }
    }

    #[test]
    fn compensated_sum_is_accurate(xs in proptest::collection::vec(-1e12f64..1e12, 1..200)) {
        let exact: Rational = xs.iter().map(|&x| Rational::from_f64(x).unwrap()).sum();
        let exact = exact.to_f64().unwrap();
        let got = Compensated::total(xs.iter().copied());
        prop_assert!((got - exact).abs() <= exact.abs() * 4.0 * f64::EPSILON + 1e-3);
    }
}

fn pool() -> Vec<Multigraph> {
    vec![
        named::double_edge(),
        named::bubble(),
        named::sunset(),
        named::triangle(),
        named::bubble_with_leg(),
        named::double_edge_chain(),
        named::double_triangle(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn valuation_is_multiplicative(i in 0usize..7, j in 0usize..7, n in 1u32..=3) {
        let graphs = pool();
        let c = Cutoff(n);
        let union = graphs[i].disjoint_union(&graphs[j]);
        let product = valuation::pi_momentum(&graphs[i], c).unwrap().value
            * valuation::pi_momentum(&graphs[j], c).unwrap().value;
        for method in [Method::Spectral, Method::Momentum] {
            let v = Valuator::new(c).with_method(method).graph(&union).unwrap();
            prop_assert!((v - product).abs() <= 1e-12 * product, "{:?}: {} vs {}", method, v, product);
        }
    }
}
