mod common;

use knotkit::corpus::{knot_table, named_knot, K13N4639};
use knotkit::diagram::{parse_pd, PlanarDiagram};
use knotkit::khovanov::{homology_dims, BigradedDims, Field};
use knotkit::knotpoly::{
    alexander_fox, determinant_from_alexander, determinant_from_jones, jones_from_kh, s_from_thin, LaurentPoly,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn poly(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s).unwrap()
}

fn kh_q(d: &PlanarDiagram) -> BigradedDims {
    homology_dims(d, Field::Rationals).unwrap()
}

#[test]
fn jones_matches_kauffman_bracket_and_table() {
    for k in knot_table() {
        let from_kh = jones_from_kh(&k.kh_q).unwrap();
        assert_eq!(from_kh, k.jones, "{} vs table", k.name);
        assert_eq!(common::jones_kauffman(&k.diagram), from_kh, "{} vs bracket", k.name);
    }
}

#[test]
fn alexander_matches_table() {
    for k in knot_table() {
        let a = alexander_fox(&k.diagram).unwrap();
        assert_eq!(a, k.alexander, "{}", k.name);
        assert_eq!(a.eval_unit(1), BigInt::from(1));
        assert!(a.is_symmetric());
        assert_eq!(determinant_from_alexander(&a), BigInt::from(k.det));
    }
}

#[test]
fn jones_examples() {
    assert_eq!(jones_from_kh(&kh_q(&PlanarDiagram::unknot())).unwrap(), LaurentPoly::one());
    let fig8 = jones_from_kh(&kh_q(&named_knot("4_1").unwrap())).unwrap();
    assert_eq!(fig8, poly("t^2 - t + 1 - t^-1 + t^-2"));
    let trefoil = BigradedDims::from_entries(Field::Rationals, [((0, 2), 1), ((2, 6), 1), ((3, 8), 1)]);
    assert_eq!(jones_from_kh(&trefoil).unwrap(), poly("t + t^3 - t^4"));
    assert_eq!(determinant_from_jones(&fig8), BigInt::from(5));
    let v52 = jones_from_kh(&kh_q(&named_knot("5_2").unwrap())).unwrap();
    assert_eq!(determinant_from_jones(&v52), BigInt::from(7));
}

#[test]
fn alexander_examples() {
    let alex = |name: &str| alexander_fox(&named_knot(name).unwrap()).unwrap();
    assert_eq!(alex("5_2"), poly("2*t - 3 + 2*t^-1"));
    assert_eq!(alex("P(-3,3,1)"), poly("-2*t + 5 - 2*t^-1"));
    assert_eq!(alex("4_1"), poly("-t + 3 - t^-1"));
    assert_eq!(alexander_fox(&PlanarDiagram::unknot()).unwrap(), LaurentPoly::one());
    for (a, det) in [("2*t - 3 + 2*t^-1", 7), ("t^4 - t^3 + 1 - t^-3 + t^-4", 5), ("1", 1)] {
        assert_eq!(determinant_from_alexander(&poly(a)), BigInt::from(det));
    }
}

#[test]
fn determinant_cross_oracle_on_named_knots() {
    for d in [named_knot("T(2,5)").unwrap(), named_knot("P(-3,3,1)").unwrap(), parse_pd(K13N4639).unwrap()] {
        let v = jones_from_kh(&kh_q(&d)).unwrap();
        assert_eq!(determinant_from_jones(&v), determinant_from_alexander(&alexander_fox(&d).unwrap()));
    }
}

#[test]
fn s_invariant_of_thin_knots() {
    assert_eq!(s_from_thin(&kh_q(&named_knot("4_1").unwrap())), Some(0));
    assert_eq!(s_from_thin(&kh_q(&named_knot("T(2,5)").unwrap())), Some(4));
    assert_eq!(s_from_thin(&kh_q(&named_knot("T(-2,5)").unwrap())), Some(-4));
    assert_eq!(s_from_thin(&kh_q(&parse_pd(K13N4639).unwrap())), None);
}

#[test]
fn det_bound_and_thinness_on_corpus() {
    for k in knot_table() {
        let dim = k.kh_q.total_dim() as u64;
        assert!(dim >= k.det, "{}", k.name);
        assert_eq!(dim == k.det, k.kh_q.delta_support().single_parity(), "{}", k.name);
        if k.alternating {
            assert!(k.kh_q.delta_support().single().is_some(), "{} alternating but thick", k.name);
        }
    }
}

fn corpus_index() -> impl Strategy<Value = usize> {
    0..85usize
}

proptest! {
    #[test]
    fn jones_of_mirror_inverts_variable(i in corpus_index()) {
        let k = &knot_table()[i];
        let v = jones_from_kh(&k.kh_q).unwrap();
        let vm = jones_from_kh(&kh_q(&k.diagram.mirror())).unwrap();
        prop_assert_eq!(vm, v.invert_var());
    }

    #[test]
    fn alexander_of_mirror_is_unchanged(i in corpus_index()) {
        let k = &knot_table()[i];
        prop_assert_eq!(alexander_fox(&k.diagram.mirror()).unwrap(), k.alexander.clone());
    }

    #[test]
    fn laurent_parse_round_trips(terms in prop::collection::vec((-20i64..20, -50i64..50), 0..8)) {
        let p = LaurentPoly::from_terms(&terms);
        prop_assert_eq!(LaurentPoly::parse(&p.to_string()).unwrap(), p.clone());
        prop_assert!(p.terms().all(|(_, c)| *c != BigInt::from(0)));
    }
}

#[test]
fn fifteen_crossing_knots_match_bracket_and_profiles() {
    use knotkit::corpus::LARGE_NAMED;
    for &(name, pd, dim) in LARGE_NAMED {
        let d = parse_pd(pd).unwrap();
        let dims = kh_q(&d);
        assert_eq!(dims.total_dim(), dim, "{name}");
        assert_eq!(jones_from_kh(&dims).unwrap(), common::jones_kauffman(&d), "{name}");
        let a = alexander_fox(&d).unwrap();
        assert_eq!(determinant_from_jones(&jones_from_kh(&dims).unwrap()), determinant_from_alexander(&a));
    }
}
