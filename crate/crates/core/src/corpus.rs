//! The bundled reference table: the unknot and every prime knot with at most
//! nine crossings, with Jones and Alexander polynomials, determinants and
//! reduced Khovanov homology over ℚ and 𝔽₂ as tabulated by KnotInfo.
//! `scripts/build_corpus.py` regenerates the file.
//!
//! A few larger named knots are provided as PD codes only.

use serde::Deserialize;

use crate::diagram::{parse_pd, pretzel_diagram, PlanarDiagram};
use crate::khovanov::{BigradedDims, Field};
use crate::knotpoly::LaurentPoly;

const KNOTS_CSV: &str = include_str!("../data/knots.csv");

/// One row of the reference table.
#[derive(Clone, Debug)]
pub struct CorpusKnot {
    pub name: String,
    pub pd_text: String,
    pub diagram: PlanarDiagram,
    pub alternating: bool,
    pub jones: LaurentPoly,
    pub alexander: LaurentPoly,
    pub det: u64,
    pub kh_q: BigradedDims,
    pub kh_f2: BigradedDims,
}

#[derive(Deserialize)]
struct Row {
    name: String,
    pd: String,
    alternating: String,
    jones: String,
    alexander: String,
    det: u64,
    kh_q: String,
    kh_f2: String,
}

fn dims(field: Field, json: &str) -> BigradedDims {
    let triples: Vec<[i64; 3]> = serde_json::from_str(json).expect("bundled Khovanov triples");
    BigradedDims::from_entries(field, triples.iter().map(|&[h, q, d]| ((h, q), d as usize)))
}

/// All rows of the bundled table, in file order.
pub fn knot_table() -> Vec<CorpusKnot> {
    let mut reader = csv::Reader::from_reader(KNOTS_CSV.as_bytes());
    reader
        .deserialize::<Row>()
        .map(|row| {
            let row = row.expect("bundled table is well formed");
            CorpusKnot {
                diagram: parse_pd(&row.pd).expect("bundled PD code is valid"),
                alternating: row.alternating == "Y",
                jones: LaurentPoly::parse(&row.jones).expect("bundled Jones polynomial"),
                alexander: LaurentPoly::parse(&row.alexander).expect("bundled Alexander polynomial"),
                det: row.det,
                kh_q: dims(Field::Rationals, &row.kh_q),
                kh_f2: dims(Field::Prime(2), &row.kh_f2),
                name: row.name,
                pd_text: row.pd,
            }
        })
        .collect()
}

/// A 13-crossing knot whose reduced integral Khovanov homology has 2-torsion
/// (four `ℤ/2` summands; dimension 11 over ℚ and 19 over 𝔽₂).
pub const K13N4639: &str = "PD[X[5,1,6,26],X[1,23,2,22],X[2,10,3,9],X[10,4,11,3],X[23,5,24,4],\
X[6,14,7,13],X[20,7,21,8],X[15,9,16,8],X[11,17,12,16],X[19,13,20,12],X[14,22,15,21],\
X[24,18,25,17],X[18,26,19,25]]";

/// Larger knots named by the nearly fibered classification, with PD codes
/// taken from the spherogram knot tables. Each entry is
/// `(name, PD code, expected dim Kh̄(ℚ))`.
pub const LARGE_NAMED: &[(&str, &str, usize)] = &[
    (
        "15n_43522",
        "PD[X[3,1,4,30],X[1,9,2,8],X[9,3,10,2],X[4,13,5,14],X[5,18,6,19],X[17,6,18,7],X[12,7,13,8],\
X[10,25,11,26],X[26,11,27,12],X[19,15,20,14],X[15,23,16,22],X[23,17,24,16],X[20,29,21,30],\
X[28,21,29,22],X[24,27,25,28]]",
        17,
    ),
    (
        "15n_115646",
        "PD[X[3,1,4,30],X[1,17,2,16],X[17,3,18,2],X[9,5,10,4],X[5,13,6,12],X[6,21,7,22],X[20,7,21,8],\
X[13,9,14,8],X[10,29,11,30],X[28,11,29,12],X[14,25,15,26],X[24,15,25,16],X[23,19,24,18],\
X[19,27,20,26],X[27,23,28,22]]",
        23,
    ),
];

/// Looks up a knot by table name (`4_1`), by one of the aliases `unknot`,
/// `T(2,5)`, `T(-2,5)`, `13n_4639`, or a pretzel `P(p,q,r)`.
pub fn named_knot(name: &str) -> Option<PlanarDiagram> {
    let key = name.trim();
    match key {
        "unknot" | "0_1" => return Some(PlanarDiagram::unknot()),
        "13n_4639" | "13n4639" => return parse_pd(K13N4639).ok(),
        "T(2,5)" => return named_knot("5_1"),
        "T(-2,5)" => return named_knot("5_1").map(|d| d.mirror()),
        _ => {}
    }
    if let Some(args) = key.strip_prefix("P(").and_then(|s| s.strip_suffix(')')) {
        let v: Vec<i64> = args.split(',').map(|a| a.trim().parse().ok()).collect::<Option<_>>()?;
        return match v[..] {
            [p, q, r] => pretzel_diagram(p, q, r).ok(),
            _ => None,
        };
    }
    if let Some(&(_, pd, _)) = LARGE_NAMED.iter().find(|(n, _, _)| *n == key) {
        return parse_pd(pd).ok();
    }
    knot_table().into_iter().find(|k| k.name == key).map(|k| k.diagram)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_loads() {
        let t = knot_table();
        assert_eq!(t.len(), 85);
        assert_eq!(t[0].name, "0_1");
        assert!(t.iter().all(|k| k.kh_q.total_dim() as u64 >= k.det));
    }

    #[test]
    fn aliases() {
        assert_eq!(named_knot("T(2,5)").unwrap().writhe(), 5);
        assert_eq!(named_knot("T(-2,5)").unwrap().writhe(), -5);
        assert_eq!(named_knot("13n_4639").unwrap().crossing_count(), 13);
        assert_eq!(named_knot("P(-3,3,1)").unwrap().crossing_count(), 7);
        assert!(named_knot("P(2,2,1)").is_none());
        assert!(named_knot("nonsense").is_none());
    }
}
