mod common;

use knotkit::corpus::{knot_table, named_knot, K13N4639};
use knotkit::diagram::{parse_pd, pretzel_diagram, DiagramError, PlanarDiagram};
use knotkit::knotpoly::{alexander_fox, determinant_from_alexander};
use num_bigint::BigInt;
use proptest::prelude::*;

fn corpus() -> Vec<PlanarDiagram> {
    knot_table().into_iter().map(|k| k.diagram).collect()
}

fn tuples(d: &PlanarDiagram) -> Vec<[u32; 4]> {
    d.crossings().iter().map(|c| c.0).collect()
}

#[test]
fn standard_trefoil_code_is_valid() {
    let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
    assert_eq!(d.crossing_count(), 3);
    assert_eq!(d.writhe().abs(), 3);
}

#[test]
fn empty_code_is_the_unknot() {
    let d = parse_pd("PD[]").unwrap();
    assert_eq!(d, PlanarDiagram::unknot());
    assert_eq!(d.mirror(), d);
}

#[test]
fn invalid_codes_are_rejected() {
    for bad in [
        "PD[X[1,1,1,1]]",
        "PD[X[1,2,3,4]]",
        "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,7]]",
        "PD[X[0,4,2,5],X[3,6,4,1],X[5,2,6,3]]",
        "PD[X[1,4,2,5],X[3,6,4,1]]",
    ] {
        assert!(parse_pd(bad).is_err(), "{bad} accepted");
    }
    assert!(matches!(parse_pd("PD[X[1,4,2,5"), Err(DiagramError::Syntax { .. })));
    assert!(matches!(parse_pd("PD[X[a,b,c,d]]"), Err(DiagramError::Syntax { .. })));
}

#[test]
fn two_component_link_is_rejected() {
    // Hopf link
    let err = parse_pd("PD[X[4,1,3,2],X[2,3,1,4]]").unwrap_err();
    assert!(matches!(err, DiagramError::Link(2) | DiagramError::Validation(_)), "{err}");
}

#[test]
fn named_codes_validate() {
    assert_eq!(corpus().len(), 85);
    assert_eq!(parse_pd(K13N4639).unwrap().crossing_count(), 13);
    for name in ["T(2,5)", "T(-2,5)", "P(-3,3,1)", "5_2", "4_1"] {
        assert!(named_knot(name).is_some(), "{name}");
    }
}

#[test]
fn mirror_of_right_trefoil_has_writhe_minus_three() {
    let d = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]").unwrap();
    assert_eq!(d.writhe(), 3);
    assert_eq!(d.mirror().writhe(), -3);
}

#[test]
fn pretzel_examples() {
    let six_one = pretzel_diagram(-3, 3, 1).unwrap();
    assert_eq!(six_one.crossing_count(), 7);
    let det = |d: &PlanarDiagram| determinant_from_alexander(&alexander_fox(d).unwrap());
    assert_eq!(det(&six_one), BigInt::from(9));
    let trefoil = pretzel_diagram(1, 1, 1).unwrap();
    assert_eq!(trefoil.crossing_count(), 3);
    assert_eq!(det(&trefoil), BigInt::from(3));
    assert!(matches!(pretzel_diagram(2, 2, 1), Err(DiagramError::Link(_))));
}

#[test]
fn json_input_matches_pd_text() {
    for d in corpus().into_iter().take(20) {
        assert_eq!(parse_pd(&d.to_json()).unwrap(), d);
    }
}

#[test]
fn basepoint_is_validated() {
    let d = named_knot("4_1").unwrap();
    assert_eq!(d.basepoint_edge(), 1);
    assert_eq!(d.clone().with_basepoint(8).unwrap().basepoint_edge(), 8);
    assert!(d.clone().with_basepoint(0).is_err());
    assert!(d.with_basepoint(9).is_err());
}

fn corpus_knot() -> impl Strategy<Value = PlanarDiagram> {
    let all = corpus();
    (1..all.len()).prop_map(move |i| all[i].clone())
}

/// A corpus knot with up to three random kinks.
fn kinked_knot() -> impl Strategy<Value = PlanarDiagram> {
    (corpus_knot(), prop::collection::vec((any::<u32>(), 0..4usize), 0..3)).prop_map(|(mut d, kinks)| {
        for (e, kind) in kinks {
            let edge = e % d.edge_count() as u32 + 1;
            d = common::add_kink(&d, edge, kind);
        }
        d
    })
}

proptest! {
    #[test]
    fn pd_text_round_trips(d in kinked_knot()) {
        prop_assert_eq!(parse_pd(&d.to_pd_string()).unwrap(), d);
    }

    #[test]
    fn mirror_negates_writhe(d in kinked_knot()) {
        prop_assert_eq!(d.mirror().writhe(), -d.writhe());
        prop_assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn writhe_counts_signs(d in kinked_knot()) {
        prop_assert_eq!(d.writhe(), d.positive_count() as i64 - d.negative_count() as i64);
        prop_assert_eq!(d.positive_count() + d.negative_count(), d.crossing_count());
    }

    #[test]
    fn one_label_mutation_is_rejected(d in corpus_knot(), slot in any::<usize>(), label in any::<u32>()) {
        let mut t = tuples(&d);
        let n2 = 2 * t.len() as u32;
        let (c, p) = (slot % t.len(), slot / t.len() % 4);
        let old = t[c][p];
        let new = label % (n2 + 2) + 1;
        prop_assume!(new != old);
        t[c][p] = new;
        prop_assert!(PlanarDiagram::from_tuples(&t).is_err());
    }
}
