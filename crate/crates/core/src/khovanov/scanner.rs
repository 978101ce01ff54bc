//! Reduced Khovanov complex by scanning crossings one at a time.
//!
//! The knot is cut open at the basepoint edge, giving a tangle whose two
//! loose ends stay on the boundary throughout. Crossings are added in a
//! greedy order that keeps the boundary small. After each crossing the
//! complex lives in the category of dotted cobordisms on the current
//! boundary: closed loops are removed by delooping (`O ⊔ ○ ≅ O{+1} ⊕ O{-1}`)
//! and every invertible differential entry is cancelled by Gaussian
//! elimination. At the end every object is the single arc joining the two
//! loose ends, morphisms are scalars, and over a field nothing but the
//! homology survives.
//!
//! Sign convention: the complex of crossing `c` is `0-smoothing -> 1-smoothing`
//! and the tensor product uses `d(x ⊗ y) = dx ⊗ y + (-1)^{h(x)} x ⊗ dy`, so the
//! cube edge changing coordinate `i` carries the sign of the number of
//! 1-smoothings among crossings added before `i`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::rc::Rc;

use super::cobordism::{circles, compose, Circles, Surface};
use super::ring::Ring;
use super::{KhovanovError, Limits};
use crate::diagram::PlanarDiagram;

type Morph<E> = Vec<(u64, E)>;

/// Surviving objects `(h, q)` (before the global grading shift) and the
/// remaining scalar differential entries `(source, target, value)`.
pub(crate) struct ScanResult<E> {
    pub objects: Vec<(i64, i64)>,
    pub entries: Vec<(usize, usize, E)>,
}

#[derive(Clone, Copy, Debug)]
struct Obj {
    m: u32,
    h: i64,
    q: i64,
}

/// One arc of a glued matching, as seen from the pieces that contain it:
/// the old arc through old boundary point `p`, or arc `j` of the crossing's
/// smoothing.
#[derive(Clone, Copy, Debug)]
enum Part {
    Old(usize),
    New(usize),
}

/// An old matching glued to one smoothing of the new crossing.
struct Glued {
    m: u32,
    /// One representative part per closed loop.
    loops: Vec<Part>,
}

/// Smoothing arcs by slot: 0-smoothing joins slots (0,1),(2,3), the
/// 1-smoothing joins (0,3),(1,2).
const SMOOTHING_ARC: [[usize; 4]; 2] = [[0, 0, 1, 1], [0, 1, 1, 0]];
const SMOOTHING_PARTNER: [[usize; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];

struct Complex<'r, R: Ring> {
    ring: &'r R,
    bd: Vec<u32>,
    matchings: Vec<Rc<Vec<u16>>>,
    match_ids: HashMap<Rc<Vec<u16>>, u32>,
    objs: Vec<Option<Obj>>,
    out: Vec<BTreeMap<usize, Morph<R::E>>>,
    inn: Vec<BTreeSet<usize>>,
    marked: Option<usize>,
    base: u32,
    compose_cache: HashMap<(u32, u32, u32, u64, u64), Rc<Vec<(u64, i64)>>>,
    circle_cache: HashMap<(u32, u32), Rc<Circles>>,
}

/// Where each label of the crossing being added ends up.
struct Step {
    /// For each slot: the old boundary point with the same label, if any.
    old_point: [Option<usize>; 4],
    /// For each slot: the other slot with the same label, if any.
    twin: [Option<usize>; 4],
    new_bd: Vec<u32>,
    /// Old boundary point -> new boundary point (if it stays on the boundary).
    old_to_new: Vec<Option<usize>>,
    /// Slot -> new boundary point (if it is on the boundary).
    slot_to_new: [Option<usize>; 4],
    /// New boundary point -> where it comes from.
    new_origin: Vec<Part>,
}

impl<'r, R: Ring> Complex<'r, R> {
    fn new(ring: &'r R, base: u32) -> Self {
        let mut c = Self {
            ring,
            bd: vec![],
            matchings: vec![],
            match_ids: HashMap::new(),
            objs: vec![],
            out: vec![],
            inn: vec![],
            marked: None,
            base,
            compose_cache: HashMap::new(),
            circle_cache: HashMap::new(),
        };
        let m = c.intern(vec![]);
        c.push_obj(Obj { m, h: 0, q: 0 });
        c
    }

    fn intern(&mut self, partner: Vec<u16>) -> u32 {
        if let Some(&id) = self.match_ids.get(&partner) {
            return id;
        }
        let id = self.matchings.len() as u32;
        let rc = Rc::new(partner);
        self.matchings.push(rc.clone());
        self.match_ids.insert(rc, id);
        id
    }

    fn push_obj(&mut self, o: Obj) -> usize {
        self.objs.push(Some(o));
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeSet::new());
        self.objs.len() - 1
    }

    fn alive(&self) -> impl Iterator<Item = (usize, Obj)> + '_ {
        self.objs
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.map(|o| (i, o)))
    }

    fn circles_of(&mut self, a: u32, b: u32) -> Rc<Circles> {
        if let Some(c) = self.circle_cache.get(&(a, b)) {
            return c.clone();
        }
        let c = Rc::new(circles(
            &self.matchings[a as usize],
            &self.matchings[b as usize],
            self.marked,
        ));
        self.circle_cache.insert((a, b), c.clone());
        c
    }

    fn add_to_entry(&mut self, src: usize, tgt: usize, mask: u64, v: R::E) {
        if self.ring.is_zero(&v) {
            return;
        }
        let morph = self.out[src].entry(tgt).or_default();
        match morph.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => {
                let sum = self.ring.add(&morph[i].1, &v);
                if self.ring.is_zero(&sum) {
                    morph.remove(i);
                } else {
                    morph[i].1 = sum;
                }
            }
            Err(i) => morph.insert(i, (mask, v)),
        }
        if morph.is_empty() {
            self.out[src].remove(&tgt);
            self.inn[tgt].remove(&src);
        } else {
            self.inn[tgt].insert(src);
        }
    }

    fn plan_step(&self, slots: [u32; 4]) -> Step {
        let old_index: HashMap<u32, usize> =
            self.bd.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let old_point = slots.map(|l| old_index.get(&l).copied());
        let twin: [Option<usize>; 4] =
            std::array::from_fn(|k| (0..4).find(|&j| j != k && slots[j] == slots[k]));
        let mut new_labels: Vec<(u32, Part)> = Vec::new();
        let internal_old: BTreeSet<usize> = old_point.iter().flatten().copied().collect();
        for (i, &l) in self.bd.iter().enumerate() {
            if !internal_old.contains(&i) {
                new_labels.push((l, Part::Old(i)));
            }
        }
        for k in 0..4 {
            if old_point[k].is_none() && twin[k].is_none() {
                new_labels.push((slots[k], Part::New(k)));
            }
        }
        new_labels.sort_by_key(|t| t.0);
        let mut old_to_new = vec![None; self.bd.len()];
        let mut slot_to_new = [None; 4];
        for (ni, &(_, part)) in new_labels.iter().enumerate() {
            match part {
                Part::Old(i) => old_to_new[i] = Some(ni),
                Part::New(k) => slot_to_new[k] = Some(ni),
            }
        }
        Step {
            old_point,
            twin,
            new_bd: new_labels.iter().map(|t| t.0).collect(),
            old_to_new,
            slot_to_new,
            new_origin: new_labels.iter().map(|t| t.1).collect(),
        }
    }

    /// Glues old matching `m` to smoothing `s`; returns the new partner array
    /// and one representative part per closed loop.
    fn glue(&self, step: &Step, m: u32, s: usize) -> (Vec<u16>, Vec<Part>) {
        let old = &self.matchings[m as usize];
        let mut old_used = vec![false; old.len()];
        let mut new_used = [false; 2];
        let mut partner = vec![0u16; step.new_bd.len()];

        // Walks from a part's endpoint across arcs and junctions until it
        // reaches a boundary point; returns that new boundary point.
        let walk = |start: Part, old_used: &mut Vec<bool>, new_used: &mut [bool; 2]| -> Option<usize> {
            let mut at = start;
            loop {
                // Cross the arc.
                let far = match at {
                    Part::Old(p) => {
                        old_used[p] = true;
                        old_used[old[p] as usize] = true;
                        Part::Old(old[p] as usize)
                    }
                    Part::New(k) => {
                        new_used[SMOOTHING_ARC[s][k]] = true;
                        Part::New(SMOOTHING_PARTNER[s][k])
                    }
                };
                // At the far end: boundary, or a junction to continue through.
                match far {
                    Part::Old(p) => {
                        if let Some(n) = step.old_to_new[p] {
                            return Some(n);
                        }
                        let k = (0..4).find(|&k| step.old_point[k] == Some(p)).expect("junction");
                        at = Part::New(k);
                    }
                    Part::New(k) => {
                        if let Some(n) = step.slot_to_new[k] {
                            return Some(n);
                        }
                        at = match (step.old_point[k], step.twin[k]) {
                            (Some(p), _) => Part::Old(p),
                            (None, Some(j)) => Part::New(j),
                            (None, None) => unreachable!("slot is either boundary or internal"),
                        };
                    }
                }
                if let (Part::New(k), Part::New(k0)) = (at, start) {
                    if k == k0 {
                        return None;
                    }
                }
                if let (Part::Old(p), Part::Old(p0)) = (at, start) {
                    if p == p0 {
                        return None;
                    }
                }
            }
        };

        for (ni, &origin) in step.new_origin.iter().enumerate() {
            let end = walk(origin, &mut old_used, &mut new_used).expect("boundary walk ends");
            partner[ni] = end as u16;
        }
        let mut loops = Vec::new();
        for p in 0..old.len() {
            if !old_used[p] {
                let _ = walk(Part::Old(p), &mut old_used, &mut new_used);
                loops.push(Part::Old(p));
            }
        }
        for j in 0..2 {
            if !new_used[j] {
                let k = (0..4).find(|&k| SMOOTHING_ARC[s][k] == j).unwrap();
                let _ = walk(Part::New(k), &mut old_used, &mut new_used);
                loops.push(Part::New(k));
            }
        }
        (partner, loops)
    }

    /// Adds the gluings along internal labels. `old_piece(p)` and
    /// `new_piece(k)` name the pieces containing old point `p` and slot `k`.
    fn glue_internal(
        step: &Step,
        surf: &mut Surface,
        old_piece: &dyn Fn(usize) -> usize,
        new_piece: &dyn Fn(usize) -> usize,
    ) {
        for k in 0..4 {
            if let Some(p) = step.old_point[k] {
                surf.glue(old_piece(p), new_piece(k));
            } else if let Some(j) = step.twin[k] {
                if j > k {
                    surf.glue(new_piece(k), new_piece(j));
                }
            }
        }
    }

    fn add_crossing(&mut self, slots: [u32; 4], limits: &Limits) -> Result<(), KhovanovError> {
        let step = self.plan_step(slots);
        // The basepoint edge is cut, so both of its ends stay on the boundary.
        let new_marked = step.new_bd.iter().position(|&l| l == self.base);

        // Glue every live matching to both smoothings.
        let live_ms: BTreeSet<u32> = self.alive().map(|(_, o)| o.m).collect();
        let mut new_matchings: Vec<Rc<Vec<u16>>> = Vec::new();
        let mut new_ids: HashMap<Rc<Vec<u16>>, u32> = HashMap::new();
        let mut glued: HashMap<(u32, usize), Glued> = HashMap::new();
        for &m in &live_ms {
            for s in 0..2 {
                let (partner, loops) = self.glue(&step, m, s);
                let id = match new_ids.get(&partner) {
                    Some(&id) => id,
                    None => {
                        let id = new_matchings.len() as u32;
                        let rc = Rc::new(partner);
                        new_matchings.push(rc.clone());
                        new_ids.insert(rc, id);
                        id
                    }
                };
                glued.insert((m, s), Glued { m: id, loops });
            }
        }

        // New objects, delooped. Bit l of `sigma` set means loop l carries X.
        let mut new_objs: Vec<Obj> = Vec::new();
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        let live: Vec<(usize, Obj)> = self.alive().collect();
        for &(i, o) in &live {
            for s in 0..2 {
                let g = &glued[&(o.m, s)];
                let nl = g.loops.len();
                first.insert((i, s), new_objs.len());
                for sigma in 0..1u32 << nl {
                    let x_count = sigma.count_ones() as i64;
                    let q = o.q + s as i64 + (nl as i64 - x_count) - x_count;
                    new_objs.push(Obj {
                        m: g.m,
                        h: o.h + s as i64,
                        q,
                    });
                }
            }
            if new_objs.len() > limits.max_objects {
                return Err(KhovanovError::Resource(format!(
                    "intermediate complex exceeds {} objects",
                    limits.max_objects
                )));
            }
        }

        let mut entries: Vec<(usize, usize, u64, R::E)> = Vec::new();
        let one = self.ring.from_i64(1);
        let minus_one = self.ring.from_i64(-1);

        // Horizontal edges: old differential tensored with the identity.
        let mut horiz_cache: HashMap<(u32, u32, u64, usize), Rc<Vec<Vec<(u64, i64)>>>> =
            HashMap::new();
        for &(i, oi) in &live {
            let targets: Vec<(usize, Morph<R::E>)> =
                self.out[i].iter().map(|(&j, m)| (j, m.clone())).collect();
            for (j, morph) in targets {
                let oj = self.objs[j].expect("live target");
                for s in 0..2 {
                    let (gi, gj) = (&glued[&(oi.m, s)], &glued[&(oj.m, s)]);
                    let (li, lj) = (gi.loops.len(), gj.loops.len());
                    for (mask, coeff) in &morph {
                        let key = (oi.m, oj.m, *mask, s);
                        let table = match horiz_cache.get(&key) {
                            Some(t) => t.clone(),
                            None => {
                                let t = Rc::new(self.horizontal_table(
                                    &step, oi.m, oj.m, *mask, s, gi, gj, new_marked,
                                    &new_matchings,
                                ));
                                horiz_cache.insert(key, t.clone());
                                t
                            }
                        };
                        for sigma in 0..1usize << li {
                            for tau in 0..1usize << lj {
                                for &(nm, c) in &table[sigma << lj | tau] {
                                    let v = self.ring.mul(coeff, &self.ring.from_i64(c));
                                    entries.push((
                                        first[&(i, s)] + sigma,
                                        first[&(j, s)] + tau,
                                        nm,
                                        v,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }

        // Vertical edges: the saddle, signed by the homological degree.
        let mut vert_cache: HashMap<u32, Rc<Vec<Vec<(u64, i64)>>>> = HashMap::new();
        for &(i, oi) in &live {
            let (g0, g1) = (&glued[&(oi.m, 0)], &glued[&(oi.m, 1)]);
            let (l0, l1) = (g0.loops.len(), g1.loops.len());
            let table = match vert_cache.get(&oi.m) {
                Some(t) => t.clone(),
                None => {
                    let t = Rc::new(self.vertical_table(&step, oi.m, g0, g1, new_marked, &new_matchings));
                    vert_cache.insert(oi.m, t.clone());
                    t
                }
            };
            let sign = if oi.h.rem_euclid(2) == 0 { &one } else { &minus_one };
            for sigma in 0..1usize << l0 {
                for tau in 0..1usize << l1 {
                    for &(nm, c) in &table[sigma << l1 | tau] {
                        let v = self.ring.mul(sign, &self.ring.from_i64(c));
                        entries.push((first[&(i, 0)] + sigma, first[&(i, 1)] + tau, nm, v));
                    }
                }
            }
        }

        // Swap in the new complex.
        self.bd = step.new_bd.clone();
        self.marked = new_marked;
        self.matchings = new_matchings;
        self.match_ids = new_ids;
        self.compose_cache.clear();
        self.circle_cache.clear();
        self.objs = Vec::with_capacity(new_objs.len());
        self.out = Vec::with_capacity(new_objs.len());
        self.inn = Vec::with_capacity(new_objs.len());
        for o in new_objs {
            self.push_obj(o);
        }
        for (src, tgt, mask, v) in entries {
            self.add_to_entry(src, tgt, mask, v);
        }
        Ok(())
    }

    /// Coefficients of `f ⊔ id` between delooped summands, indexed by
    /// `sigma << (target loops) | tau`, for one basis cobordism `f`.
    #[allow(clippy::too_many_arguments)]
    fn horizontal_table(
        &mut self,
        step: &Step,
        a: u32,
        b: u32,
        mask: u64,
        s: usize,
        ga: &Glued,
        gb: &Glued,
        new_marked: Option<usize>,
        new_matchings: &[Rc<Vec<u16>>],
    ) -> Vec<Vec<(u64, i64)>> {
        let circ = self.circles_of(a, b);
        let nf = circ.count;
        let out_circles = circles(
            &new_matchings[ga.m as usize],
            &new_matchings[gb.m as usize],
            new_marked,
        );
        let old_piece = |p: usize| circ.of_point[p] as usize;
        let new_piece = |k: usize| nf + SMOOTHING_ARC[s][k];
        let part_piece = |part: Part| match part {
            Part::Old(p) => old_piece(p),
            Part::New(k) => new_piece(k),
        };
        let reps = circle_reps(step, &out_circles, &part_piece);
        let (la, lb) = (ga.loops.len(), gb.loops.len());
        let mut table = Vec::with_capacity(1 << (la + lb));
        for sigma in 0..1usize << la {
            for tau in 0..1usize << lb {
                let mut surf = Surface::with_capacity(nf + 2);
                for c in 0..nf {
                    surf.disk(mask >> c & 1 == 1);
                }
                surf.disk(false);
                surf.disk(false);
                Self::glue_internal(step, &mut surf, &old_piece, &new_piece);
                cap_loops(&mut surf, &ga.loops, &gb.loops, sigma, tau, &part_piece);
                table.push(surf.evaluate(&reps, out_circles.marked));
            }
        }
        table
    }

    /// Coefficients of `id ⊔ saddle` between delooped summands.
    fn vertical_table(
        &mut self,
        step: &Step,
        m: u32,
        g0: &Glued,
        g1: &Glued,
        new_marked: Option<usize>,
        new_matchings: &[Rc<Vec<u16>>],
    ) -> Vec<Vec<(u64, i64)>> {
        // Each old arc is its own circle of `m ∪ m`; those are the strips.
        let circ = self.circles_of(m, m);
        let ns = circ.count;
        let out_circles = circles(
            &new_matchings[g0.m as usize],
            &new_matchings[g1.m as usize],
            new_marked,
        );
        let old_piece = |p: usize| circ.of_point[p] as usize;
        let new_piece = |_k: usize| ns;
        let part_piece = |part: Part| match part {
            Part::Old(p) => old_piece(p),
            Part::New(k) => new_piece(k),
        };
        let reps = circle_reps(step, &out_circles, &part_piece);
        let (l0, l1) = (g0.loops.len(), g1.loops.len());
        let mut table = Vec::with_capacity(1 << (l0 + l1));
        for sigma in 0..1usize << l0 {
            for tau in 0..1usize << l1 {
                let mut surf = Surface::with_capacity(ns + 1);
                for _ in 0..=ns {
                    surf.disk(false);
                }
                Self::glue_internal(step, &mut surf, &old_piece, &new_piece);
                cap_loops(&mut surf, &g0.loops, &g1.loops, sigma, tau, &part_piece);
                table.push(surf.evaluate(&reps, out_circles.marked));
            }
        }
        table
    }

    fn compose_basis(&mut self, l0: u32, s: u32, l1: u32, mf: u64, mg: u64) -> Rc<Vec<(u64, i64)>> {
        let key = (l0, s, l1, mf, mg);
        if let Some(v) = self.compose_cache.get(&key) {
            return v.clone();
        }
        let v = Rc::new(compose(
            &self.matchings[l0 as usize],
            &self.matchings[s as usize],
            &self.matchings[l1 as usize],
            mf,
            mg,
            self.marked,
        ));
        self.compose_cache.insert(key, v.clone());
        v
    }

    /// The scalar `c` when `i -> j` is `c` times an identity cobordism.
    fn iso_scalar(&self, i: usize, j: usize) -> Option<R::E> {
        let (oi, oj) = (self.objs[i]?, self.objs[j]?);
        if oi.m != oj.m || oi.q != oj.q {
            return None;
        }
        let morph = self.out[i].get(&j)?;
        match morph.as_slice() {
            [(0, c)] => self.ring.unit_inverse(c).map(|_| c.clone()),
            _ => None,
        }
    }

    fn score(&self, i: usize, j: usize) -> usize {
        (self.out[i].len() - 1) * (self.inn[j].len() - 1)
    }

    /// Cancels `i -> j` (an isomorphism `c·id`), updating the zig-zag entries.
    fn cancel(&mut self, i: usize, j: usize, c: &R::E, touched: &mut Vec<(usize, usize)>) {
        let cinv = self.ring.unit_inverse(c).expect("unit");
        let neg_cinv = self.ring.neg(&cinv);
        let sources: Vec<usize> = self.inn[j].iter().copied().filter(|&l| l != i).collect();
        let targets: Vec<(usize, Morph<R::E>)> = self.out[i]
            .iter()
            .filter(|(&l, _)| l != j)
            .map(|(&l, m)| (l, m.clone()))
            .collect();
        let sm = self.objs[i].expect("live").m;
        for &l0 in &sources {
            let b = self.out[l0][&j].clone();
            let m0 = self.objs[l0].expect("live").m;
            for (l1, cm) in &targets {
                let m1 = self.objs[*l1].expect("live").m;
                for (mb, vb) in &b {
                    let vb = self.ring.mul(vb, &neg_cinv);
                    for (mc, vc) in cm {
                        let prod = self.ring.mul(&vb, vc);
                        let comp = self.compose_basis(m0, sm, m1, *mb, *mc);
                        for &(nm, k) in comp.iter() {
                            let v = self.ring.mul(&prod, &self.ring.from_i64(k));
                            self.add_to_entry(l0, *l1, nm, v);
                        }
                    }
                }
                touched.push((l0, *l1));
            }
        }
        for x in [i, j] {
            let outs: Vec<usize> = self.out[x].keys().copied().collect();
            for t in outs {
                self.inn[t].remove(&x);
            }
            self.out[x].clear();
            let ins: Vec<usize> = self.inn[x].iter().copied().collect();
            for s in ins {
                self.out[s].remove(&x);
            }
            self.inn[x].clear();
            self.objs[x] = None;
        }
    }

    /// Gaussian elimination of every invertible entry, cheapest first.
    fn simplify(&mut self) {
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
        for i in 0..self.objs.len() {
            if self.objs[i].is_none() {
                continue;
            }
            for &j in self.out[i].keys() {
                if self.iso_scalar(i, j).is_some() {
                    heap.push(Reverse((self.score(i, j), i, j)));
                }
            }
        }
        let mut touched = Vec::new();
        while let Some(Reverse((score, i, j))) = heap.pop() {
            let Some(c) = self.iso_scalar(i, j) else { continue };
            let now = self.score(i, j);
            if now > score {
                heap.push(Reverse((now, i, j)));
                continue;
            }
            touched.clear();
            self.cancel(i, j, &c, &mut touched);
            for &(a, b) in &touched {
                if self.iso_scalar(a, b).is_some() {
                    heap.push(Reverse((self.score(a, b), a, b)));
                }
            }
        }
    }
}

/// A piece touching each output circle, found through the circle's smallest
/// boundary point.
fn circle_reps(step: &Step, out: &Circles, part_piece: &dyn Fn(Part) -> usize) -> Vec<usize> {
    let mut reps = vec![usize::MAX; out.count];
    for (p, &c) in out.of_point.iter().enumerate() {
        let c = c as usize;
        if reps[c] == usize::MAX {
            reps[c] = part_piece(step.new_origin[p]);
        }
    }
    reps
}

/// Source loops get a cup (dotted for an X summand); target loops get a cap
/// (dotted for a 1 summand).
fn cap_loops(
    surf: &mut Surface,
    src: &[Part],
    tgt: &[Part],
    sigma: usize,
    tau: usize,
    part_piece: &dyn Fn(Part) -> usize,
) {
    for (l, &part) in src.iter().enumerate() {
        surf.cap(part_piece(part), sigma >> l & 1 == 1);
    }
    for (l, &part) in tgt.iter().enumerate() {
        surf.cap(part_piece(part), tau >> l & 1 == 0);
    }
}

/// Crossings with the basepoint edge cut: the second occurrence of the
/// basepoint label is renamed `2n + 1`.
fn cut_at_basepoint(d: &PlanarDiagram) -> Vec<[u32; 4]> {
    let b = d.basepoint_edge();
    let cut = d.edge_count() as u32 + 1;
    let mut seen = false;
    d.crossings()
        .iter()
        .map(|x| {
            x.0.map(|l| {
                if l == b {
                    if seen {
                        return cut;
                    }
                    seen = true;
                }
                l
            })
        })
        .collect()
}

/// Greedy order: start at the basepoint, then always add the crossing that
/// leaves the smallest boundary (ties by index).
pub(crate) fn crossing_order(crossings: &[[u32; 4]], basepoint: u32) -> Vec<usize> {
    let n = crossings.len();
    if n == 0 {
        return vec![];
    }
    let mut done = vec![false; n];
    let mut bd: BTreeSet<u32> = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    let start = crossings.iter().position(|x| x.contains(&basepoint)).unwrap_or(0);
    let mut next = Some(start);
    while let Some(c) = next {
        done[c] = true;
        order.push(c);
        for &l in &crossings[c] {
            if !bd.remove(&l) {
                bd.insert(l);
            }
        }
        next = (0..n).filter(|&c| !done[c]).min_by_key(|&c| {
            let x = &crossings[c];
            let growth: i64 = x
                .iter()
                .map(|l| match (x.iter().filter(|&m| m == l).count(), bd.contains(l)) {
                    (2, _) => 0,
                    (_, true) => -1,
                    (_, false) => 1,
                })
                .sum();
            (growth, c)
        });
    }
    order
}

/// Runs the scan. Gradings in the result are before the global shift.
pub(crate) fn scan<R: Ring>(ring: &R, d: &PlanarDiagram, limits: &Limits) -> Result<ScanResult<R::E>, KhovanovError> {
    let b = d.basepoint_edge();
    let mut cx = Complex::new(ring, b);
    let crossings = cut_at_basepoint(d);
    let order = crossing_order(&crossings, b);
    for &c in &order {
        cx.add_crossing(crossings[c], limits)?;
        cx.simplify();
        log::debug!(
            "crossing {c}: boundary {}, objects {}",
            cx.bd.len(),
            cx.alive().count()
        );
    }
    let live: Vec<(usize, Obj)> = cx.alive().collect();
    let index: HashMap<usize, usize> = live.iter().enumerate().map(|(k, &(i, _))| (i, k)).collect();
    let mut entries = Vec::new();
    for &(i, _) in &live {
        for (&j, morph) in &cx.out[i] {
            for (mask, v) in morph {
                debug_assert_eq!(*mask, 0, "final morphisms are scalars");
                entries.push((index[&i], index[&j], v.clone()));
            }
        }
    }
    Ok(ScanResult {
        objects: live.iter().map(|&(_, o)| (o.h, o.q)).collect(),
        entries,
    })
}
