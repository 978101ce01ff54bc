//! Planar diagram (PD) codes for oriented knots.
//!
//! Each crossing is a 4-tuple `X[a,b,c,d]` of edge labels read
//! counterclockwise starting from the incoming under-strand, the convention
//! used by KnotInfo and the Knot Atlas. Edges are numbered `1..=2n` along the
//! knot, so edge `e` flows into edge `e+1` (and `2n` into `1`). The under
//! strand therefore runs `a -> c` with `c = a + 1`, and the over strand joins
//! `b` and `d`, which are consecutive labels in one order or the other.
//!
//! A crossing is positive when the over strand runs `d -> b`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("PD syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("invalid PD code: {0}")]
    Validation(String),
    #[error("PD code describes a link with {0} components; only knots are supported")]
    Link(usize),
}

/// One crossing, labels counterclockwise from the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing(pub [u32; 4]);

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "X[{a},{b},{c},{d}]")
    }
}

/// A validated knot diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    signs: Vec<i8>,
    basepoint: u32,
}

impl PlanarDiagram {
    /// Validates `crossings` and computes crossing signs. The basepoint is edge 1.
    pub fn new(crossings: Vec<Crossing>) -> Result<Self, DiagramError> {
        let signs = validate(&crossings)?;
        Ok(Self {
            crossings,
            signs,
            basepoint: 1,
        })
    }

    pub fn unknot() -> Self {
        Self {
            crossings: vec![],
            signs: vec![],
            basepoint: 1,
        }
    }

    pub fn from_tuples(tuples: &[[u32; 4]]) -> Result<Self, DiagramError> {
        Self::new(tuples.iter().map(|t| Crossing(*t)).collect())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    /// `+1` or `-1`.
    pub fn crossing_sign(&self, c: usize) -> i8 {
        self.signs[c]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn basepoint_edge(&self) -> u32 {
        self.basepoint
    }

    /// Moves the basepoint used for reduced homology.
    pub fn with_basepoint(mut self, edge: u32) -> Result<Self, DiagramError> {
        let max = self.edge_count().max(1) as u32;
        if edge == 0 || edge > max {
            return Err(DiagramError::Validation(format!(
                "basepoint edge {edge} is outside 1..={max}"
            )));
        }
        self.basepoint = edge;
        Ok(self)
    }

    /// The mirror image: each tuple is rotated by one position so that the
    /// over strand becomes the under strand.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(x, &s)| {
                let [a, b, c, d] = x.0;
                if s > 0 {
                    Crossing([d, a, b, c])
                } else {
                    Crossing([b, c, d, a])
                }
            })
            .collect();
        Self {
            crossings,
            signs: self.signs.iter().map(|s| -s).collect(),
            basepoint: self.basepoint,
        }
    }

    /// `PD[X[..],...]` text.
    pub fn to_pd_string(&self) -> String {
        let body: Vec<String> = self.crossings.iter().map(|x| x.to_string()).collect();
        format!("PD[{}]", body.join(","))
    }

    /// JSON list of 4-element arrays.
    pub fn to_json(&self) -> String {
        let tuples: Vec<[u32; 4]> = self.crossings.iter().map(|x| x.0).collect();
        serde_json::to_string(&tuples).expect("tuples serialize")
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

impl Serialize for PlanarDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_pd_string())
    }
}

impl<'de> Deserialize<'de> for PlanarDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_pd(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `PD[X[1,4,2,5],...]` (whitespace-insensitive) or a JSON-style list
/// `[[1,4,2,5],...]`.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
    let tuples = tokenize_pd(text)?;
    PlanarDiagram::new(tuples.into_iter().map(Crossing).collect())
}

fn tokenize_pd(text: &str) -> Result<Vec<[u32; 4]>, DiagramError> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut p = Cursor { chars: &chars, pos: 0, len: text.len() };
    let functional = p.peek() == Some('P');
    if functional {
        p.expect_str("PD")?;
    }
    p.expect('[')?;
    let mut tuples = Vec::new();
    if p.peek() != Some(']') {
        loop {
            if functional {
                p.expect('X')?;
            }
            p.expect('[')?;
            let mut t = [0u32; 4];
            for (k, slot) in t.iter_mut().enumerate() {
                if k > 0 {
                    p.expect(',')?;
                }
                *slot = p.number()?;
            }
            p.expect(']')?;
            tuples.push(t);
            match p.peek() {
                Some(',') => p.pos += 1,
                _ => break,
            }
        }
    }
    p.expect(']')?;
    if p.pos < chars.len() {
        return Err(p.error("trailing characters"));
    }
    Ok(tuples)
}

struct Cursor<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
    len: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn error(&self, msg: &str) -> DiagramError {
        DiagramError::Syntax {
            offset: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), DiagramError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(&format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(&format!("expected '{want}', found end of input"))),
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<(), DiagramError> {
        s.chars().try_for_each(|c| self.expect(c))
    }

    fn number(&mut self) -> Result<u32, DiagramError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a positive integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        digits.parse().map_err(|_| DiagramError::Syntax {
            offset: self.chars[start].0,
            msg: format!("label {digits} out of range"),
        })
    }
}

/// Checks the label, component, orientation and planarity invariants and
/// returns the crossing signs.
fn validate(crossings: &[Crossing]) -> Result<Vec<i8>, DiagramError> {
    let n = crossings.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let m = 2 * n as u32;
    let mut count = vec![0u8; m as usize + 1];
    for x in crossings {
        for &e in &x.0 {
            if e == 0 || e > m {
                return Err(DiagramError::Validation(format!(
                    "edge label {e} in {x} is outside 1..={m}"
                )));
            }
            count[e as usize] += 1;
        }
    }
    if let Some(e) = (1..=m).find(|&e| count[e as usize] != 2) {
        return Err(DiagramError::Validation(format!(
            "edge label {e} appears {} times (expected 2)",
            count[e as usize]
        )));
    }

    let components = count_components(crossings, m);
    if components > 1 {
        return Err(DiagramError::Link(components));
    }

    let next = |e: u32| e % m + 1;
    // heads[e]/tails[e]: how often edge e ends/starts at a crossing.
    let mut heads = vec![0u8; m as usize + 1];
    let mut tails = vec![0u8; m as usize + 1];
    let mut signs = Vec::with_capacity(n);
    for x in crossings {
        let [a, b, c, d] = x.0;
        if c != next(a) {
            return Err(DiagramError::Validation(format!(
                "under strand of {x} must run from edge {a} to edge {}",
                next(a)
            )));
        }
        let d_to_b = b == next(d);
        let b_to_d = d == next(b);
        let positive = match (d_to_b, b_to_d) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => {
                // Only possible with two edges: decide by which labels can
                // still end or start here.
                if b == a || d == c {
                    true
                } else if d == a || b == c {
                    false
                } else {
                    unreachable!("two-edge crossing uses both labels")
                }
            }
            (false, false) => {
                return Err(DiagramError::Validation(format!(
                    "over strand of {x} does not join consecutive edges"
                )))
            }
        };
        let (over_in, over_out) = if positive { (d, b) } else { (b, d) };
        heads[a as usize] += 1;
        heads[over_in as usize] += 1;
        tails[c as usize] += 1;
        tails[over_out as usize] += 1;
        signs.push(if positive { 1 } else { -1 });
    }
    if let Some(e) = (1..=m).find(|&e| heads[e as usize] != 1 || tails[e as usize] != 1) {
        return Err(DiagramError::Validation(format!(
            "edge {e} is not oriented consistently with the edge numbering"
        )));
    }
    let faces = count_faces(crossings, m);
    if faces != n + 2 {
        return Err(DiagramError::Validation(format!(
            "diagram is not planar ({faces} faces for {n} crossings, expected {})",
            n + 2
        )));
    }
    Ok(signs)
}

/// Components of the strand graph: labels are vertices, and each crossing
/// joins `a–c` and `b–d`.
fn count_components(crossings: &[Crossing], m: u32) -> usize {
    let mut parent: Vec<u32> = (0..=m).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut union = |x: u32, y: u32| {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx as usize] = ry;
        }
    };
    for x in crossings {
        let [a, b, c, d] = x.0;
        union(a, c);
        union(b, d);
    }
    (1..=m).filter(|&e| find(&mut parent, e) == e).count()
}

/// Counts faces by walking darts: from a crossing slot, cross the edge to
/// its other end and turn to the next slot counterclockwise.
fn count_faces(crossings: &[Crossing], m: u32) -> usize {
    let slots = 4 * crossings.len();
    let mut ends: Vec<Vec<usize>> = vec![Vec::with_capacity(2); m as usize + 1];
    for (ci, x) in crossings.iter().enumerate() {
        for (k, &e) in x.0.iter().enumerate() {
            ends[e as usize].push(4 * ci + k);
        }
    }
    let mut other = vec![0usize; slots];
    for pair in &ends[1..] {
        other[pair[0]] = pair[1];
        other[pair[1]] = pair[0];
    }
    let step = |s: usize| {
        let t = other[s];
        t - t % 4 + (t + 1) % 4
    };
    let mut seen = vec![false; slots];
    let mut faces = 0;
    for s in 0..slots {
        if seen[s] {
            continue;
        }
        faces += 1;
        let mut cur = s;
        while !seen[cur] {
            seen[cur] = true;
            cur = step(cur);
        }
    }
    faces
}

// ---------------------------------------------------------------------------
// Building diagrams from crossing slots and wires
// ---------------------------------------------------------------------------

/// Crossing slots in counterclockwise order.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// A planar network of crossings joined by wires through pass-through
/// terminals. Slots of each crossing are numbered counterclockwise; strands
/// go straight through (slot `s` to slot `s + 2`).
#[derive(Default)]
struct NetworkBuilder {
    /// Adjacency of ports; crossing slots are ports `4c..4c+4`, terminals follow.
    adj: Vec<Vec<usize>>,
    /// Whether the strand through slots 1 and 3 is the over strand.
    over_13: Vec<bool>,
}

impl NetworkBuilder {
    fn crossing(&mut self, over_13: bool) -> usize {
        // Crossing ports must stay contiguous, so crossings are created first.
        let c = self.over_13.len();
        assert_eq!(self.adj.len(), 4 * c, "create crossings before terminals");
        self.over_13.push(over_13);
        self.adj.extend((0..4).map(|_| Vec::new()));
        c
    }

    fn terminal(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn slot(c: usize, s: usize) -> usize {
        4 * c + s
    }

    fn wire(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn is_slot(&self, port: usize) -> bool {
        port < 4 * self.over_13.len()
    }

    /// Follows wires from crossing slot `from` to the next crossing slot,
    /// marking terminals on the way.
    fn follow(&self, from: usize, seen: &mut [bool]) -> usize {
        let mut prev = from;
        let mut cur = self.adj[from][0];
        while !self.is_slot(cur) {
            seen[cur] = true;
            let nb = &self.adj[cur];
            let nxt = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = nxt;
        }
        cur
    }

    fn build(&self) -> Result<PlanarDiagram, DiagramError> {
        let n = self.over_13.len();
        if n == 0 {
            return Ok(PlanarDiagram::unknot());
        }
        let mut seen = vec![false; self.adj.len()];
        let mut labels = vec![0u32; 4 * n];
        let mut entering = vec![false; 4 * n];
        let start = Self::slot(0, NE);
        let mut inc = start;
        let mut label = 0u32;
        loop {
            let out = inc - inc % 4 + (inc % 4 + 2) % 4;
            let next_in = self.follow(out, &mut seen);
            label += 1;
            labels[out] = label;
            labels[next_in] = label;
            entering[next_in] = true;
            inc = next_in;
            if inc == start {
                break;
            }
        }
        let slots_seen = labels.iter().filter(|&&l| l != 0).count();
        let stray_loops = (4 * n..self.adj.len()).any(|t| !seen[t]);
        if slots_seen < 4 * n || stray_loops {
            return Err(DiagramError::Link(2));
        }
        let crossings = (0..n)
            .map(|c| {
                let under = if self.over_13[c] { [NE, SW] } else { [NW, SE] };
                let u = if entering[4 * c + under[0]] { under[0] } else { under[1] };
                Crossing(std::array::from_fn(|k| labels[4 * c + (u + k) % 4]))
            })
            .collect();
        PlanarDiagram::new(crossings)
    }
}

/// The pretzel knot `P(p, q, r)`: three vertical twist columns with `|p|`,
/// `|q|`, `|r|` crossings, joined across the top and bottom.
///
/// Sign convention: a column with a negative parameter consists of positive
/// crossings when the two strands of the column run in the same vertical
/// direction, so `P(-1,-1,-1)` is the right-handed trefoil.
pub fn pretzel_diagram(p: i64, q: i64, r: i64) -> Result<PlanarDiagram, DiagramError> {
    let params = [p, q, r];
    if params.iter().all(|&x| x == 0) {
        return Err(DiagramError::Validation(
            "pretzel parameters must not all be zero".into(),
        ));
    }
    let evens = params.iter().filter(|&&x| x % 2 == 0).count();
    if evens > 1 {
        return Err(DiagramError::Link(2));
    }
    let mut b = NetworkBuilder::default();
    let columns: Vec<Vec<usize>> = params
        .iter()
        .map(|&x| (0..x.unsigned_abs()).map(|_| b.crossing(x < 0)).collect())
        .collect();
    // Terminals at the four corners of each column: TL, TR, BL, BR.
    let mut corners = Vec::new();
    for col in &columns {
        let [tl, tr, bl, br] = [b.terminal(), b.terminal(), b.terminal(), b.terminal()];
        if col.is_empty() {
            b.wire(tl, bl);
            b.wire(tr, br);
        } else {
            let (first, last) = (col[0], col[col.len() - 1]);
            b.wire(tl, NetworkBuilder::slot(first, NW));
            b.wire(tr, NetworkBuilder::slot(first, NE));
            b.wire(bl, NetworkBuilder::slot(last, SW));
            b.wire(br, NetworkBuilder::slot(last, SE));
            for w in col.windows(2) {
                b.wire(NetworkBuilder::slot(w[0], SW), NetworkBuilder::slot(w[1], NW));
                b.wire(NetworkBuilder::slot(w[0], SE), NetworkBuilder::slot(w[1], NE));
            }
        }
        corners.push([tl, tr, bl, br]);
    }
    for i in 0..3 {
        let j = (i + 1) % 3;
        if j == 0 {
            // Outer arcs around the whole picture.
            b.wire(corners[0][0], corners[2][1]);
            b.wire(corners[0][2], corners[2][3]);
        } else {
            b.wire(corners[i][1], corners[j][0]);
            b.wire(corners[i][3], corners[j][2]);
        }
    }
    b.build()
}
