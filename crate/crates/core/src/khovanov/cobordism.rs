//! Dotted cobordisms between crossingless matchings, reduced at a basepoint.
//!
//! A matching on `B` boundary points is a partner array. A morphism between
//! loop-free matchings `A` and `B` is a combination of basis cobordisms: one
//! disk on every circle of `A ∪ B`, each disk carrying at most one dot. A
//! basis element is a bitmask of dotted circles, circles ordered by their
//! smallest boundary point. The circle through the basepoint never carries a
//! dot (dots there are zero in the reduced theory).
//!
//! Arbitrary glued surfaces are reduced to this basis by the local
//! relations: a handle equals two dots, two dots on one component vanish, a
//! sphere is zero unless it carries exactly one dot, and neck cutting
//! distributes the dot across the boundary circles of a component.

/// Which circle of `A ∪ B` each boundary point lies on, circles numbered by
/// smallest point.
#[derive(Clone, Debug)]
pub(crate) struct Circles {
    pub of_point: Vec<u16>,
    pub count: usize,
    pub marked: Option<usize>,
}

pub(crate) fn circles(a: &[u16], b: &[u16], marked_point: Option<usize>) -> Circles {
    debug_assert_eq!(a.len(), b.len());
    const UNSEEN: u16 = u16::MAX;
    let mut of_point = vec![UNSEEN; a.len()];
    let mut count = 0usize;
    for start in 0..a.len() {
        if of_point[start] != UNSEEN {
            continue;
        }
        let mut p = start;
        loop {
            of_point[p] = count as u16;
            let q = a[p] as usize;
            of_point[q] = count as u16;
            p = b[q] as usize;
            if p == start {
                break;
            }
        }
        count += 1;
    }
    let marked = marked_point.map(|p| of_point[p] as usize);
    Circles {
        of_point,
        count,
        marked,
    }
}

/// A surface assembled from disks by gluing along boundary intervals and
/// capping boundary circles, tracked per connected component.
pub(crate) struct Surface {
    parent: Vec<u32>,
    chi: Vec<i32>,
    dots: Vec<u32>,
}

impl Surface {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            parent: Vec::with_capacity(n),
            chi: Vec::with_capacity(n),
            dots: Vec::with_capacity(n),
        }
    }

    /// Adds a disk, possibly dotted.
    pub fn disk(&mut self, dotted: bool) -> usize {
        let id = self.parent.len();
        self.parent.push(id as u32);
        self.chi.push(1);
        self.dots.push(dotted as u32);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    /// Glues the pieces containing `a` and `b` along a boundary interval.
    pub fn glue(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.chi[ra] -= 1;
        } else {
            self.parent[rb] = ra as u32;
            self.chi[ra] += self.chi[rb] - 1;
            self.dots[ra] += self.dots[rb];
        }
    }

    /// Caps a boundary circle of the piece containing `a` with a disk.
    pub fn cap(&mut self, a: usize, dotted: bool) {
        let r = self.find(a);
        self.chi[r] += 1;
        self.dots[r] += dotted as u32;
    }

    /// Expands the surface in the dotted-disk basis. `circle_piece[i]` is a
    /// piece touching the `i`-th remaining boundary circle; `marked` is the
    /// index of the basepoint circle.
    pub fn evaluate(&mut self, circle_piece: &[usize], marked: Option<usize>) -> Vec<(u64, i64)> {
        debug_assert!(circle_piece.len() <= 64);
        let n = self.parent.len();
        let mut comp_circles: Vec<u64> = vec![0; n];
        let mut comp_k: Vec<u32> = vec![0; n];
        for (i, &p) in circle_piece.iter().enumerate() {
            let r = self.find(p);
            comp_circles[r] |= 1 << i;
            comp_k[r] += 1;
        }
        let marked_bit = marked.map_or(0u64, |m| 1 << m);
        let mut acc: Vec<(u64, i64)> = vec![(0, 1)];
        for r in 0..n {
            if self.parent[r] as usize != r {
                continue;
            }
            let k = comp_k[r] as i32;
            let twice_genus = 2 - self.chi[r] - k;
            debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0, "bad surface");
            let genus = (twice_genus / 2) as u32;
            let e = genus + self.dots[r];
            let bits = comp_circles[r];
            let scale = 1i64 << genus;
            // Options for this component: (dotted circles, coefficient).
            let options: Vec<(u64, i64)> = if k == 0 {
                if e == 1 {
                    vec![(0, scale)]
                } else {
                    vec![]
                }
            } else if bits & marked_bit != 0 {
                if e == 0 {
                    vec![(bits & !marked_bit, 1)]
                } else {
                    vec![]
                }
            } else {
                match e {
                    0 => (0..64)
                        .filter(|i| bits >> i & 1 == 1)
                        .map(|i| (bits & !(1u64 << i), 1))
                        .collect(),
                    1 => vec![(bits, scale)],
                    _ => vec![],
                }
            };
            if options.is_empty() {
                return vec![];
            }
            if options.len() == 1 {
                let (b, c) = options[0];
                for t in acc.iter_mut() {
                    t.0 |= b;
                    t.1 *= c;
                }
            } else {
                acc = acc
                    .iter()
                    .flat_map(|&(m, c)| options.iter().map(move |&(b, f)| (m | b, c * f)))
                    .collect();
            }
        }
        acc.sort_unstable();
        acc
    }
}

/// Composes basis cobordisms `f: L0 -> S` (mask `mf`) and `g: S -> L1`
/// (mask `mg`).
pub(crate) fn compose(
    l0: &[u16],
    s: &[u16],
    l1: &[u16],
    mf: u64,
    mg: u64,
    marked_point: Option<usize>,
) -> Vec<(u64, i64)> {
    let cf = circles(l0, s, marked_point);
    let cg = circles(s, l1, marked_point);
    let cout = circles(l0, l1, marked_point);
    let mut surf = Surface::with_capacity(cf.count + cg.count);
    for i in 0..cf.count {
        surf.disk(mf >> i & 1 == 1);
    }
    for j in 0..cg.count {
        surf.disk(mg >> j & 1 == 1);
    }
    for p in 0..s.len() {
        if (s[p] as usize) > p {
            surf.glue(cf.of_point[p] as usize, cf.count + cg.of_point[p] as usize);
        }
    }
    let mut reps = vec![usize::MAX; cout.count];
    for p in 0..l0.len() {
        let c = cout.of_point[p] as usize;
        if reps[c] == usize::MAX {
            reps[c] = cf.of_point[p] as usize;
        }
    }
    surf.evaluate(&reps, cout.marked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_counts() {
        // Two arcs on four points: (0 1)(2 3) against (0 3)(1 2) is one circle.
        let a = [1u16, 0, 3, 2];
        let b = [3u16, 2, 1, 0];
        assert_eq!(circles(&a, &a, None).count, 2);
        let c = circles(&a, &b, Some(2));
        assert_eq!(c.count, 1);
        assert_eq!(c.marked, Some(0));
    }

    #[test]
    fn identity_composes_to_identity() {
        let a = [1u16, 0, 3, 2];
        assert_eq!(compose(&a, &a, &a, 0, 0, None), vec![(0, 1)]);
        assert_eq!(compose(&a, &a, &a, 0b01, 0, None), vec![(0b01, 1)]);
        assert_eq!(compose(&a, &a, &a, 0b01, 0b01, None), vec![]);
        assert_eq!(compose(&a, &a, &a, 0b10, 0b01, None), vec![(0b11, 1)]);
    }

    #[test]
    fn saddle_then_saddle_is_a_tube() {
        // A -> B -> A through two saddles: a tube between the two arcs,
        // which neck-cuts into "dot on one circle" plus "dot on the other".
        let a = [1u16, 0, 3, 2];
        let b = [3u16, 2, 1, 0];
        assert_eq!(compose(&a, &b, &a, 0, 0, None), vec![(0b01, 1), (0b10, 1)]);
        // Reduced at point 0: only the unmarked circle can take the dot.
        assert_eq!(compose(&a, &b, &a, 0, 0, Some(0)), vec![(0b10, 1)]);
    }

    #[test]
    fn closed_components() {
        let mut s = Surface::with_capacity(2);
        let a = s.disk(true);
        s.cap(a, false);
        assert_eq!(s.evaluate(&[], None), vec![(0, 1)]);
        let mut s = Surface::with_capacity(1);
        let a = s.disk(false);
        s.cap(a, false);
        assert!(s.evaluate(&[], None).is_empty());
        // Torus: a disk glued to itself along two interleaved intervals is a
        // punctured torus; capping its boundary closes it up.
        let mut s = Surface::with_capacity(1);
        let a = s.disk(false);
        s.glue(a, a);
        s.glue(a, a);
        s.cap(a, false);
        assert_eq!(s.evaluate(&[], None), vec![(0, 2)]);
    }
}
