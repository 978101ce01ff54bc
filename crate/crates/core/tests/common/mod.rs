//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use knotkit::diagram::{parse_pd, PlanarDiagram};
use knotkit::khovanov::Limits;
use knotkit::knotpoly::LaurentPoly;

const VARIANTS_CSV: &str = include_str!("../data/variants.csv");

/// Diagrams of the same knot grouped by knot name: the standard diagram and
/// versions enlarged by random Reidemeister moves.
pub fn diagram_variants() -> BTreeMap<String, Vec<PlanarDiagram>> {
    let mut out: BTreeMap<String, Vec<PlanarDiagram>> = BTreeMap::new();
    let mut reader = csv::Reader::from_reader(VARIANTS_CSV.as_bytes());
    for row in reader.records() {
        let row = row.unwrap();
        let d = parse_pd(&row[2]).unwrap_or_else(|e| panic!("variant of {}: {e}", &row[0]));
        out.entry(row[0].to_string()).or_default().push(d);
    }
    out
}

/// Limits roomy enough for the enlarged variants.
pub fn roomy_limits() -> Limits {
    Limits {
        max_crossings: 30,
        ..Limits::default()
    }
}

/// Inserts a Reidemeister-I kink on edge `edge`. `kind` in `0..4` picks the
/// side and sign of the kink.
pub fn add_kink(d: &PlanarDiagram, edge: u32, kind: usize) -> PlanarDiagram {
    let tuples: Vec<[u32; 4]> = d.crossings().iter().map(|c| c.0).collect();
    let n2 = 2 * tuples.len() as u32;
    assert!(n2 >= 4 && (1..=n2).contains(&edge));
    let next = edge % n2 + 1;
    let mut out = Vec::with_capacity(tuples.len() + 1);
    let mut head_found = false;
    for t in &tuples {
        let mut r = *t;
        for p in 0..4 {
            if t[p] > edge {
                r[p] = t[p] + 2;
            } else if t[p] == edge && t[(p + 2) % 4] == next && !head_found {
                r[p] = edge + 2;
                head_found = true;
            }
        }
        out.push(r);
    }
    assert!(head_found);
    let (i, j, k) = (edge, edge + 1, edge + 2);
    out.push(match kind % 4 {
        0 => [i, j, j, k],
        1 => [i, k, j, j],
        2 => [j, i, k, j],
        _ => [j, j, k, i],
    });
    PlanarDiagram::from_tuples(&out).expect("kink keeps the diagram valid")
}

/// Jones polynomial from the Kauffman bracket state sum, in `t = A^-4`.
pub fn jones_kauffman(d: &PlanarDiagram) -> LaurentPoly {
    let tuples: Vec<[u32; 4]> = d.crossings().iter().map(|c| c.0).collect();
    let n = tuples.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let n_edges = 2 * n;
    // bracket as a map from powers of A to coefficients
    let mut bracket: BTreeMap<i64, i64> = BTreeMap::new();
    for state in 0u64..(1 << n) {
        let mut parent: Vec<usize> = (0..=n_edges).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut join = |a: u32, b: u32| {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            parent[ra] = rb;
        };
        let mut a_count = 0i64;
        for (c, t) in tuples.iter().enumerate() {
            let [a, b, cc, dd] = *t;
            if state >> c & 1 == 0 {
                a_count += 1;
                join(a, b);
                join(cc, dd);
            } else {
                join(a, dd);
                join(b, cc);
            }
        }
        let loops = (1..=n_edges).filter(|&e| find(&mut parent, e) == e).count();
        // A^(a - b) (-A^2 - A^-2)^(loops - 1)
        let mut term: BTreeMap<i64, i64> = BTreeMap::from([(2 * a_count - n as i64, 1)]);
        for _ in 1..loops {
            let mut next: BTreeMap<i64, i64> = BTreeMap::new();
            for (&e, &c) in &term {
                *next.entry(e + 2).or_default() -= c;
                *next.entry(e - 2).or_default() -= c;
            }
            term = next;
        }
        for (e, c) in term {
            *bracket.entry(e).or_default() += c;
        }
    }
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let mut v = LaurentPoly::zero();
    for (e, c) in bracket {
        if c == 0 {
            continue;
        }
        // (-A^3)^-w <D>, then A^k = t^(-k/4)
        let k = e - 3 * w;
        assert_eq!(k.rem_euclid(4), 0, "bracket exponent not divisible by 4");
        v.add_term(-k / 4, (sign * c).into());
    }
    v
}
