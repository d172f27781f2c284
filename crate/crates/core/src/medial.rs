//! Medial graphs, strands and strand matchings.
//!
//! The medial graph has one vertex per network edge (its midpoint) and one arc
//! per corner of the embedding. Stub `2i-1` leaves the corner just before
//! node `i` in counterclockwise order and stub `2i` the corner just after it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{CpnError, Result};
use crate::network::{twin, AugmentedMap, Network};

/// A fixed-point-free involution on the stubs `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandMatching {
    n: usize,
    partner: Vec<usize>,
}

impl StrandMatching {
    /// Builds a matching from its pairs.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![0; 2 * n + 1];
        for &(a, b) in pairs {
            for s in [a, b] {
                if s == 0 || s > 2 * n {
                    return Err(CpnError::Invariant(format!(
                        "stub {s} out of range 1..{}",
                        2 * n
                    )));
                }
                if partner[s] != 0 {
                    return Err(CpnError::Invariant(format!("stub {s} matched twice")));
                }
            }
            if a == b {
                return Err(CpnError::Invariant(format!("stub {a} matched to itself")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if let Some(s) = (1..=2 * n).find(|&s| partner[s] == 0) {
            return Err(CpnError::Invariant(format!("stub {s} is unmatched")));
        }
        Ok(StrandMatching { n, partner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, s: usize) -> usize {
        self.partner[s]
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (1..=2 * self.n)
            .filter(|&a| a < self.partner[a])
            .map(|a| (a, self.partner[a]))
            .collect()
    }

    /// True when the chords `p` and `q` interleave around the circle.
    pub fn chords_cross(p: (usize, usize), q: (usize, usize)) -> bool {
        let (a, b) = (p.0.min(p.1), p.0.max(p.1));
        let inside = |x: usize| a < x && x < b;
        inside(q.0) != inside(q.1)
    }

    /// All crossing pairs of chords.
    pub fn crossing_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let pairs = self.pairs();
        let mut out = Vec::new();
        for (i, &p) in pairs.iter().enumerate() {
            for &q in &pairs[i + 1..] {
                if Self::chords_cross(p, q) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_pairs().len()
    }

    /// Every matching on `2n` stubs, in a deterministic order.
    pub fn all(n: usize) -> Vec<StrandMatching> {
        fn rec(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            if rest.is_empty() {
                out.push(acc.clone());
                return;
            }
            let a = rest[0];
            for i in 1..rest.len() {
                let remaining: Vec<usize> =
                    rest[1..i].iter().chain(&rest[i + 1..]).copied().collect();
                acc.push((a, rest[i]));
                rec(&remaining, acc, out);
                acc.pop();
            }
        }
        let stubs: Vec<usize> = (1..=2 * n).collect();
        let mut raw = Vec::new();
        rec(&stubs, &mut Vec::new(), &mut raw);
        raw.into_iter()
            .map(|p| StrandMatching::new(n, &p).expect("valid matching"))
            .collect()
    }

    /// The matching `{i, n+i}` of the standard well-connected network.
    pub fn well_connected(n: usize) -> StrandMatching {
        let pairs: Vec<(usize, usize)> = (1..=n).map(|i| (i, n + i)).collect();
        StrandMatching::new(n, &pairs).expect("valid matching")
    }

    /// Parses `matching <n>` followed by `pair <a> <b>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| CpnError::parse(ln, format!("bad integer `{t}`")))
            };
            match (toks[0], toks.len()) {
                ("matching", 2) if n.is_none() => n = Some(num(toks[1])?),
                ("pair", 3) if n.is_some() => pairs.push((num(toks[1])?, num(toks[2])?)),
                _ => {
                    return Err(CpnError::parse(
                        ln,
                        "expected `matching <n>` then `pair <a> <b>` lines",
                    ))
                }
            }
        }
        let n = n.ok_or_else(|| CpnError::parse(1, "missing `matching <n>` header"))?;
        StrandMatching::new(n, &pairs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("matching {}\n", self.n);
        for (a, b) in self.pairs() {
            let _ = writeln!(out, "pair {a} {b}");
        }
        out
    }
}

/// One end of a medial arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MedialEnd {
    /// The medial vertex at the midpoint of the edge with this id.
    Vertex(usize),
    /// A boundary stub.
    Stub(usize),
}

/// A corner of the embedding: vertex `vertex`, between positions `position`
/// and `position + 1` of its augmented rotation (which for a node includes
/// the two boundary arcs at the ends).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Corner {
    pub vertex: usize,
    pub position: usize,
}

/// The medial graph of an embedded network.
#[derive(Clone, Debug)]
pub struct MedialGraph {
    n: usize,
    vertices: Vec<usize>,
    arcs: Vec<(MedialEnd, MedialEnd)>,
    corners: Vec<Corner>,
    map: AugmentedMap,
    edge_ids: Vec<usize>,
}

/// A strand: a maximal path going straight through each medial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    /// Stub endpoints, or `None` for a closed strand.
    pub endpoints: Option<(usize, usize)>,
    /// Ids of the edges whose midpoints the strand passes, in order.
    pub edges: Vec<usize>,
    /// Corners the strand runs through, in order.
    pub corners: Vec<Corner>,
}

/// Why a network fails to be minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalityCertificate {
    Minimal,
    /// A strand with no stubs.
    ClosedStrand {
        strand: usize,
    },
    /// A strand that crosses itself at the given edge.
    SelfCrossing {
        strand: usize,
        edge: usize,
    },
    /// Two strands that cross at two or more edges.
    DoubleCrossing {
        strands: (usize, usize),
        edges: Vec<usize>,
    },
}

impl MinimalityCertificate {
    pub fn is_minimal(&self) -> bool {
        matches!(self, MinimalityCertificate::Minimal)
    }

    pub fn describe(&self) -> String {
        match self {
            MinimalityCertificate::Minimal => "minimal".into(),
            MinimalityCertificate::ClosedStrand { strand } => {
                format!("closed strand (strand {strand})")
            }
            MinimalityCertificate::SelfCrossing { strand, edge } => {
                format!("strand crosses itself (strand {strand} at edge {edge})")
            }
            MinimalityCertificate::DoubleCrossing { strands, edges } => format!(
                "strands cross twice (strands {} and {} at edges {:?})",
                strands.0, strands.1, edges
            ),
        }
    }
}

impl MedialGraph {
    /// Builds the medial graph of `g`.
    pub fn new(g: &Network) -> Self {
        let map = g.augmented_map();
        let edge_ids: Vec<usize> = g.edges().iter().map(|e| e.id).collect();
        let end_of = |d: usize, v: usize, first: bool| -> MedialEnd {
            if map.is_arc(d) {
                MedialEnd::Stub(if first { 2 * v } else { 2 * v - 1 })
            } else {
                MedialEnd::Vertex(edge_ids[d / 2])
            }
        };
        let mut arcs = Vec::new();
        let mut corners = Vec::new();
        for v in 1..=g.vertex_count() {
            let around = &map.around[v - 1];
            let count = if g.is_node(v) {
                around.len() - 1
            } else {
                around.len()
            };
            for p in 0..count {
                let a = around[p];
                let b = around[(p + 1) % around.len()];
                arcs.push((end_of(a, v, true), end_of(b, v, false)));
                corners.push(Corner {
                    vertex: v,
                    position: p,
                });
            }
        }
        MedialGraph {
            n: g.n(),
            vertices: edge_ids.clone(),
            arcs,
            corners,
            map,
            edge_ids,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Medial vertices, identified by edge id.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Medial arcs, one per corner, in the order of [`MedialGraph::corners`].
    pub fn arcs(&self) -> &[(MedialEnd, MedialEnd)] {
        &self.arcs
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    fn around(&self, v: usize) -> &[usize] {
        &self.map.around[v - 1]
    }

    fn is_node(&self, v: usize) -> bool {
        v <= self.n
    }

    /// Position of dart `d` in the augmented rotation of its vertex.
    fn position_of(&self, d: usize) -> (usize, usize) {
        let v = self.map.dart_vertex[d];
        let p = self
            .around(v)
            .iter()
            .position(|&x| x == d)
            .expect("dart in rotation");
        (v, p)
    }

    fn corner_index(&self, v: usize, p: usize) -> usize {
        let len = self.around(v).len();
        let p = if self.is_node(v) { p } else { p % len };
        self.corners
            .binary_search(&Corner {
                vertex: v,
                position: p,
            })
            .expect("corner exists")
    }

    /// One step of a strand from corner `(v, p)`. Returns the edge crossed
    /// and the next state, or the stub where the strand leaves.
    fn step(
        &self,
        v: usize,
        p: usize,
        forward: bool,
    ) -> std::result::Result<(usize, usize, usize, bool), usize> {
        let around = self.around(v);
        let len = around.len();
        let h = if forward {
            around[(p + 1) % len]
        } else {
            around[p]
        };
        if self.map.is_arc(h) {
            return Err(if forward { 2 * v - 1 } else { 2 * v });
        }
        let (y, q) = self.position_of(twin(h));
        let ylen = self.around(y).len();
        if forward {
            Ok((h / 2, y, (q + ylen - 1) % ylen, false))
        } else {
            Ok((h / 2, y, q, true))
        }
    }

    fn trace_from(&self, v: usize, p: usize, forward: bool, used: &mut [bool]) -> Strand {
        let (mut v, mut p, mut forward) = (v, p, forward);
        let start = self.corner_index(v, p);
        let mut edges = Vec::new();
        let mut corners = Vec::new();
        loop {
            let c = self.corner_index(v, p);
            if used[c] {
                // Back at the start of a closed strand.
                debug_assert_eq!(c, start);
                return Strand {
                    endpoints: None,
                    edges,
                    corners,
                };
            }
            used[c] = true;
            corners.push(self.corners[c]);
            match self.step(v, p, forward) {
                Ok((e, y, q, f)) => {
                    edges.push(self.edge_ids[e]);
                    v = y;
                    p = q;
                    forward = f;
                }
                Err(stub) => {
                    return Strand {
                        endpoints: Some((0, stub)),
                        edges,
                        corners,
                    }
                }
            }
        }
    }

    /// All strands: those starting at stubs (in increasing order of their
    /// smaller stub) followed by closed strands.
    pub fn strands(&self) -> Vec<Strand> {
        let mut used = vec![false; self.corners.len()];
        let mut out: Vec<Strand> = Vec::new();
        for s in 1..=2 * self.n {
            let v = s.div_ceil(2);
            let (p, forward) = if s % 2 == 0 {
                (0, true)
            } else {
                (self.around(v).len() - 2, false)
            };
            if used[self.corner_index(v, p)] {
                continue;
            }
            let mut st = self.trace_from(v, p, forward, &mut used);
            let end = st.endpoints.expect("stub strands end at stubs").1;
            st.endpoints = Some((s, end));
            out.push(st);
        }
        for c in 0..self.corners.len() {
            if !used[c] {
                let Corner { vertex, position } = self.corners[c];
                out.push(self.trace_from(vertex, position, true, &mut used));
            }
        }
        out
    }
}

/// The medial graph of `g`.
pub fn medial_graph(g: &Network) -> MedialGraph {
    MedialGraph::new(g)
}

/// The strand matching of `g`.
pub fn strand_matching(g: &Network) -> StrandMatching {
    let pairs: Vec<(usize, usize)> = MedialGraph::new(g)
        .strands()
        .iter()
        .filter_map(|s| s.endpoints)
        .collect();
    StrandMatching::new(g.n(), &pairs).expect("strands pair every stub")
}

/// Decides minimality: no closed strands, no self-crossings, and no two
/// strands crossing more than once.
pub fn is_minimal(g: &Network) -> MinimalityCertificate {
    let strands = MedialGraph::new(g).strands();
    if let Some(i) = strands.iter().position(|s| s.endpoints.is_none()) {
        return MinimalityCertificate::ClosedStrand { strand: i };
    }
    let mut through: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in strands.iter().enumerate() {
        for &e in &s.edges {
            through.entry(e).or_default().push(i);
        }
    }
    let mut pair_edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (&e, ss) in &through {
        if ss[0] == ss[1] {
            return MinimalityCertificate::SelfCrossing {
                strand: ss[0],
                edge: e,
            };
        }
        pair_edges
            .entry((ss[0].min(ss[1]), ss[0].max(ss[1])))
            .or_default()
            .push(e);
    }
    for (pair, edges) in pair_edges {
        if edges.len() > 1 {
            return MinimalityCertificate::DoubleCrossing {
                strands: pair,
                edges,
            };
        }
    }
    MinimalityCertificate::Minimal
}
