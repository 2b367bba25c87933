//! Randomized property suites on quivers with at most 6 vertices.

mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dual_is_an_involution(q in arb_quadratic()) {
        prop_dual_involution(&q)?;
    }

    #[test]
    fn dual_dimensions_are_complementary(q in arb_quadratic()) {
        prop_dim_complementarity(&q)?;
    }

    #[test]
    fn form_is_nondegenerate_and_symmetric(l in arb_properly_graded()) {
        prop_form(&l)?;
    }

    #[test]
    fn nakayama_identity_holds(l in arb_properly_graded(), twisted in any::<bool>()) {
        prop_nakayama(&l, twisted)?;
    }

    #[test]
    fn preprojective_degree_zero_is_gamma(l in arb_properly_graded()) {
        prop_preprojective_degree_zero(&l)?;
    }

    #[test]
    fn bidegree_dimensions_match(l in arb_properly_graded()) {
        prop_bidegree_dims(&l)?;
    }

    #[test]
    fn translations_commute(g in arb_finite_type_gamma()) {
        prop_translations_commute(&g)?;
    }

    #[test]
    fn slice_mutations_round_trip(
        g in arb_finite_type_gamma(),
        picks in prop::collection::vec((any::<bool>(), 0usize..8), 1..8),
    ) {
        prop_slice_round_trip(&g, &picks)?;
    }
}
