//! The full cube of resolutions, reduced at the basepoint. Exponential in the
//! crossing count; kept as an independent oracle for small diagrams.
//!
//! Generators of a resolution label every unmarked circle `1` or `X`; the
//! marked circle always carries `1` and anything that would put `X` on it is
//! zero. The edge changing crossing `i` carries the sign
//! `(-1)^{#(1-smoothings among crossings 0..i)}`.

use super::{KhovanovError, Limits, ScalarComplex};
use crate::diagram::PlanarDiagram;
use num_rational::BigRational;

/// Circles of one resolution, numbered by smallest edge label with the
/// marked circle moved to the end.
struct Resolution {
    circle_of: Vec<usize>,
    count: usize,
}

impl Resolution {
    fn new(d: &PlanarDiagram, state: u64) -> Self {
        let m = d.edge_count();
        let mut parent: Vec<usize> = (0..=m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: u32, b: u32| {
            let (ra, rb) = (find(p, a as usize), find(p, b as usize));
            if ra != rb {
                p[ra.max(rb)] = ra.min(rb);
            }
        };
        for (i, x) in d.crossings().iter().enumerate() {
            let [a, b, c, e] = x.0;
            if state >> i & 1 == 0 {
                union(&mut parent, a, b);
                union(&mut parent, c, e);
            } else {
                union(&mut parent, a, e);
                union(&mut parent, b, c);
            }
        }
        let marked_root = find(&mut parent, d.basepoint_edge() as usize);
        let mut id_of_root = vec![usize::MAX; m + 1];
        let mut count = 0;
        for l in 1..=m {
            let r = find(&mut parent, l);
            if r != marked_root && id_of_root[r] == usize::MAX {
                id_of_root[r] = count;
                count += 1;
            }
        }
        id_of_root[marked_root] = count;
        count += 1;
        let circle_of = (0..=m)
            .map(|l| if l == 0 { usize::MAX } else { id_of_root[find(&mut parent, l)] })
            .collect();
        Self { circle_of, count }
    }

    fn marked(&self) -> usize {
        self.count - 1
    }

    fn of(&self, label: u32) -> usize {
        self.circle_of[label as usize]
    }
}

/// Builds the cube complex with gradings before the global shift.
pub(crate) fn cube_complex(d: &PlanarDiagram, limits: &Limits) -> Result<ScalarComplex, KhovanovError> {
    let n = d.crossing_count();
    if n > limits.max_naive_crossings {
        return Err(KhovanovError::Resource(format!(
            "naive cube limited to {} crossings, diagram has {n}",
            limits.max_naive_crossings
        )));
    }
    if n == 0 {
        return Ok(ScalarComplex {
            objects: vec![(0, 0)],
            entries: vec![],
        });
    }
    let states = 1u64 << n;
    let resolutions: Vec<Resolution> = (0..states).map(|s| Resolution::new(d, s)).collect();
    let mut offset = Vec::with_capacity(states as usize);
    let mut objects = Vec::new();
    for (s, r) in resolutions.iter().enumerate() {
        offset.push(objects.len());
        let h = s.count_ones() as i64;
        let free = r.count - 1;
        if objects.len() + (1usize << free) > limits.max_objects {
            return Err(KhovanovError::Resource(format!(
                "cube exceeds {} generators",
                limits.max_objects
            )));
        }
        for mask in 0..1u64 << free {
            let q = free as i64 - 2 * mask.count_ones() as i64 + h;
            objects.push((h, q));
        }
    }

    let mut entries = Vec::new();
    for s in 0..states {
        let rs = &resolutions[s as usize];
        for (i, x) in d.crossings().iter().enumerate() {
            if s >> i & 1 == 1 {
                continue;
            }
            let t = s | 1 << i;
            let rt = &resolutions[t as usize];
            let sign: i64 = if (s & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            let [a, b, c, _] = x.0;
            // Circles not touched by the crossing keep their label.
            let carry = |mask: u64, skip: &[usize]| -> u64 {
                let mut out = 0u64;
                for l in 1..=d.edge_count() as u32 {
                    let k = rs.of(l);
                    if mask >> k & 1 == 1 && !skip.contains(&k) {
                        out |= 1 << rt.of(l);
                    }
                }
                out
            };
            let (ca, cc) = (rs.of(a), rs.of(c));
            for mask in 0..1u64 << (rs.count - 1) {
                let src = offset[s as usize] + mask as usize;
                let mut images: Vec<u64> = Vec::new();
                if ca != cc {
                    let (xa, xc) = (mask >> ca & 1, mask >> cc & 1);
                    let merged = rt.of(a);
                    if xa + xc == 2 {
                        continue;
                    }
                    let base = carry(mask, &[ca, cc]);
                    if xa + xc == 1 {
                        if merged != rt.marked() {
                            images.push(base | 1 << merged);
                        }
                    } else {
                        images.push(base);
                    }
                } else {
                    let (c1, c2) = (rt.of(a), rt.of(b));
                    let base = carry(mask, &[ca]);
                    let x = mask >> ca & 1 == 1;
                    let mut push = |bits: &[usize]| {
                        if bits.iter().all(|&k| k != rt.marked()) {
                            images.push(bits.iter().fold(base, |m, &k| m | 1 << k));
                        }
                    };
                    if x {
                        push(&[c1, c2]);
                    } else {
                        push(&[c1]);
                        push(&[c2]);
                    }
                }
                for img in images {
                    let tgt = offset[t as usize] + img as usize;
                    entries.push((src, tgt, BigRational::from_integer(sign.into())));
                }
            }
        }
    }
    Ok(ScalarComplex { objects, entries })
}
