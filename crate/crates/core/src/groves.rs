//! Groves, node partitions, partition sums, and the tripod and dual-tripod
//! Pfaffian formulas for normalized partition sums.
//!
//! A grove is a forest in which every component contains at least one node.
//! Its partition records which nodes share a tree. `Z_tau` sums the weights
//! (products of conductances) of groves with partition `tau`; values are
//! usually normalized by `Z_unc`, the sum over groves separating all nodes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{CpnError, Result};
use crate::exactalg::{
    det, effective_resistance, pfaffian, rat, solve, Rat, RatMatrix, SkewMatrix,
};
use crate::network::{Network, ResponseMatrix, UnionFind};

/// Default largest edge count accepted by the grove enumerator.
pub const GROVE_EDGE_CAP: usize = 14;

/// A partition of the nodes `1..=n` with blocks sorted internally and by
/// their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NodePartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(CpnError::Invariant("empty block".into()));
            }
            b.sort_unstable();
            for &v in b.iter() {
                if v == 0 || v > n || seen[v] {
                    return Err(CpnError::Invariant(format!(
                        "node {v} is out of range or repeated"
                    )));
                }
                seen[v] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(CpnError::Invariant("blocks do not cover every node".into()));
        }
        blocks.sort_unstable();
        Ok(NodePartition { n, blocks })
    }

    /// Builds the partition whose blocks are the classes of `label`
    /// (indexed by node - 1).
    pub fn from_labels(label: &[usize]) -> Self {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in label.iter().enumerate() {
            by.entry(l).or_default().push(i + 1);
        }
        let mut blocks: Vec<Vec<usize>> = by.into_values().collect();
        blocks.sort_unstable();
        NodePartition {
            n: label.len(),
            blocks,
        }
    }

    /// The partition into singletons.
    pub fn singletons(n: usize) -> Self {
        NodePartition {
            n,
            blocks: (1..=n).map(|v| vec![v]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing node `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&v))
            .expect("node is covered")
    }

    /// Whether the blocks are non-crossing in the circular order, by a
    /// nested-parentheses scan.
    pub fn is_planar(&self) -> bool {
        let mut block = vec![0usize; self.n + 1];
        for (k, b) in self.blocks.iter().enumerate() {
            for &v in b {
                block[v] = k;
            }
        }
        let mut stack: Vec<usize> = Vec::new();
        for v in 1..=self.n {
            let b = &self.blocks[block[v]];
            if b.len() == 1 {
                continue;
            }
            if v == b[0] {
                stack.push(block[v]);
                continue;
            }
            if stack.last() != Some(&block[v]) {
                return false;
            }
            if v == *b.last().unwrap() {
                stack.pop();
            }
        }
        true
    }

    /// The Kreweras complement on the dual nodes, where dual node `i` sits
    /// between nodes `i` and `i+1`. Two dual nodes share a block exactly when
    /// the chord between them crosses no block.
    pub fn dual(&self) -> NodePartition {
        let n = self.n;
        let mut uf = UnionFind::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                let inside = |v: usize| v > i && v <= j;
                if self
                    .blocks
                    .iter()
                    .all(|b| b.iter().all(|&v| inside(v)) || b.iter().all(|&v| !inside(v)))
                {
                    uf.union(i - 1, j - 1);
                }
            }
        }
        let label: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        NodePartition::from_labels(&label)
    }

    /// All planar partitions of `1..=n`.
    pub fn all_planar(n: usize) -> Vec<NodePartition> {
        let mut out = Vec::new();
        let mut label = vec![0usize; n];
        fn rec(i: usize, max: usize, label: &mut Vec<usize>, out: &mut Vec<NodePartition>) {
            if i == label.len() {
                let p = NodePartition::from_labels(label);
                if p.is_planar() {
                    out.push(p);
                }
                return;
            }
            for l in 0..=max {
                label[i] = l;
                rec(i + 1, max.max(l + 1), label, out);
            }
        }
        if n == 0 {
            return vec![NodePartition {
                n: 0,
                blocks: Vec::new(),
            }];
        }
        rec(1, 1, &mut label, &mut out);
        out.sort();
        out
    }

    /// Parses `partition <n>: {1,4},{2},{3,5}`.
    pub fn parse(text: &str) -> Result<Self> {
        let line = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty());
        let line = line.ok_or_else(|| CpnError::parse(1, "empty partition"))?;
        let rest = line
            .strip_prefix("partition")
            .ok_or_else(|| CpnError::parse(1, "expected `partition`"))?;
        let (n, body) = rest
            .split_once(':')
            .ok_or_else(|| CpnError::parse(1, "expected `:`"))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CpnError::parse(1, "bad node count"))?;
        let mut blocks = Vec::new();
        for chunk in body.split('}') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk
                .strip_prefix('{')
                .ok_or_else(|| CpnError::parse(1, format!("bad block `{chunk}`")))?;
            let block = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| CpnError::parse(1, format!("bad node `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        NodePartition::new(n, blocks).map_err(|e| CpnError::parse(1, e.to_string()))
    }
}

impl fmt::Display for NodePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "{{{}}}",
                    b.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "partition {}: {}", self.n, blocks.join(","))
    }
}

/// Partition sums and grove counts of a network, keyed by partition.
#[derive(Clone, Debug)]
pub struct GroveTable {
    n: usize,
    entries: BTreeMap<NodePartition, (Rat, usize)>,
}

impl GroveTable {
    /// Enumerates every grove of `g`; fails above [`GROVE_EDGE_CAP`] edges.
    pub fn new(g: &Network) -> Result<Self> {
        Self::with_cap(g, GROVE_EDGE_CAP)
    }

    pub fn with_cap(g: &Network, cap: usize) -> Result<Self> {
        let edges = g.edges();
        if edges.len() > cap {
            return Err(CpnError::Capacity(format!(
                "{} edges exceed the grove enumeration cap of {cap}",
                edges.len()
            )));
        }
        let mut table = GroveTable {
            n: g.n(),
            entries: BTreeMap::new(),
        };
        let uf = UnionFind::new(g.vertex_count());
        table.walk(g, 0, uf, Rat::one());
        Ok(table)
    }

    fn walk(&mut self, g: &Network, k: usize, uf: UnionFind, weight: Rat) {
        let edges = g.edges();
        if k == edges.len() {
            self.record(g, uf, weight);
            return;
        }
        let e = &edges[k];
        let mut with = uf.clone();
        if with.union(e.u - 1, e.v - 1) {
            self.walk(g, k + 1, with, &weight * &e.conductance);
        }
        self.walk(g, k + 1, uf, weight);
    }

    fn record(&mut self, g: &Network, mut uf: UnionFind, weight: Rat) {
        let n = g.n();
        let roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
        for v in n..g.vertex_count() {
            let r = uf.find(v);
            if !roots.contains(&r) {
                return;
            }
        }
        let entry = self
            .entries
            .entry(NodePartition::from_labels(&roots))
            .or_insert((Rat::zero(), 0));
        entry.0 += weight;
        entry.1 += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Z_tau`; zero when no grove has partition `tau`.
    pub fn sum(&self, tau: &NodePartition) -> Rat {
        self.entries
            .get(tau)
            .map(|e| e.0.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Number of groves with partition `tau`.
    pub fn count(&self, tau: &NodePartition) -> usize {
        self.entries.get(tau).map(|e| e.1).unwrap_or(0)
    }

    pub fn uncrossing_sum(&self) -> Rat {
        self.sum(&NodePartition::singletons(self.n))
    }

    /// `Z_tau / Z_unc`.
    pub fn normalized(&self, tau: &NodePartition) -> Rat {
        self.sum(tau) / self.uncrossing_sum()
    }

    /// Partitions realized by at least one grove.
    pub fn partitions(&self) -> impl Iterator<Item = &NodePartition> {
        self.entries.keys()
    }
}

/// `Z_tau` by brute-force enumeration.
pub fn grove_sum(g: &Network, tau: &NodePartition) -> Result<Rat> {
    if tau.n() != g.n() {
        return Err(CpnError::Precondition(
            "partition and network have different node counts".into(),
        ));
    }
    Ok(GroveTable::new(g)?.sum(tau))
}

/// Number of groves with partition `tau`.
pub fn grove_count(g: &Network, tau: &NodePartition) -> Result<usize> {
    if tau.n() != g.n() {
        return Err(CpnError::Precondition(
            "partition and network have different node counts".into(),
        ));
    }
    Ok(GroveTable::new(g)?.count(tau))
}

/// `Z_unc`: the partition sum over groves that separate every node.
pub fn uncrossing_sum(g: &Network) -> Result<Rat> {
    grove_sum(g, &NodePartition::singletons(g.n()))
}

/// Color of a node in a tripod coloring. The two-colored values mark the
/// singleton nodes sitting between two arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeColor {
    R,
    G,
    B,
    RG,
    GB,
    BR,
}

impl NodeColor {
    pub fn is_mono(self) -> bool {
        matches!(self, NodeColor::R | NodeColor::G | NodeColor::B)
    }

    fn next(self) -> NodeColor {
        match self {
            NodeColor::R => NodeColor::G,
            NodeColor::G => NodeColor::B,
            _ => NodeColor::R,
        }
    }

    /// The singleton color sharing no color with this one.
    fn opposite(self) -> NodeColor {
        match self {
            NodeColor::R => NodeColor::GB,
            NodeColor::G => NodeColor::BR,
            _ => NodeColor::RG,
        }
    }
}

/// Whether a coloring describes a tripod (one part of size three) or a
/// dual tripod (all parts of size two apart from singletons).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripodKind {
    Tripod,
    DualTripod,
}

/// A coloring of the nodes by three contiguous arcs red, green, blue in
/// circular order, with at most one singleton node between consecutive arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripodSpec {
    n: usize,
    start: usize,
    colors: Vec<NodeColor>,
}

impl TripodSpec {
    /// `labels[k]` is the color of node `start + k` (circularly).
    pub fn new(n: usize, start: usize, labels: Vec<NodeColor>) -> Result<Self> {
        if labels.len() != n || start == 0 || start > n {
            return Err(CpnError::Precondition(
                "coloring does not cover the nodes".into(),
            ));
        }
        const ORDER: [NodeColor; 6] = [
            NodeColor::R,
            NodeColor::RG,
            NodeColor::G,
            NodeColor::GB,
            NodeColor::B,
            NodeColor::BR,
        ];
        let mut stage = 0;
        let mut prev: Option<NodeColor> = None;
        for &c in &labels {
            let pos = ORDER.iter().position(|&o| o == c).unwrap();
            if pos < stage || (!c.is_mono() && prev == Some(c)) {
                return Err(CpnError::Precondition(
                    "arcs are not in circular order red, green, blue".into(),
                ));
            }
            stage = pos;
            prev = Some(c);
        }
        let mut colors = vec![NodeColor::R; n];
        for (k, c) in labels.into_iter().enumerate() {
            colors[(start - 1 + k) % n] = c;
        }
        Ok(TripodSpec { n, start, colors })
    }

    /// Builds the coloring `R^r [RG] G^g [GB] B^b [BR]` starting at `start`.
    pub fn from_counts(
        n: usize,
        start: usize,
        r: usize,
        rg: bool,
        g: usize,
        gb: bool,
        b: usize,
        br: bool,
    ) -> Result<Self> {
        let mut labels = vec![NodeColor::R; r];
        if rg {
            labels.push(NodeColor::RG);
        }
        labels.extend(std::iter::repeat_n(NodeColor::G, g));
        if gb {
            labels.push(NodeColor::GB);
        }
        labels.extend(std::iter::repeat_n(NodeColor::B, b));
        if br {
            labels.push(NodeColor::BR);
        }
        TripodSpec::new(n, start, labels)
    }

    /// Every coloring on `n` nodes whose induced partition exists, without
    /// duplicates.
    pub fn all(n: usize) -> Vec<TripodSpec> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for start in 1..=n.max(1) {
            for flags in 0..8u8 {
                let (rg, gb, br) = (flags & 1 != 0, flags & 2 != 0, flags & 4 != 0);
                let singles = rg as usize + gb as usize + br as usize;
                if singles > n {
                    continue;
                }
                let k = n - singles;
                for r in 0..=k {
                    for g in 0..=k - r {
                        let Ok(spec) =
                            TripodSpec::from_counts(n, start, r, rg, g, gb, k - r - g, br)
                        else {
                            continue;
                        };
                        if spec.partition().is_ok() && seen.insert(spec.colors.clone()) {
                            out.push(spec);
                        }
                    }
                }
            }
        }
        out
    }

    /// A coloring whose induced partition is `tau`, if one exists.
    pub fn find(tau: &NodePartition) -> Option<TripodSpec> {
        TripodSpec::all(tau.n())
            .into_iter()
            .find(|s| s.partition().ok().as_ref() == Some(tau))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Color of node `v` (1-based).
    pub fn color(&self, v: usize) -> NodeColor {
        self.colors[v - 1]
    }

    /// Nodes of a single color in circular order from the start node.
    pub fn arc(&self, c: NodeColor) -> Vec<usize> {
        (0..self.n)
            .map(|k| (self.start - 1 + k) % self.n + 1)
            .filter(|&v| self.color(v) == c)
            .collect()
    }

    fn singleton(&self, c: NodeColor) -> Option<usize> {
        (1..=self.n).find(|&v| self.color(v) == c)
    }

    pub fn kind(&self) -> TripodKind {
        let mono = self.colors.iter().filter(|c| c.is_mono()).count();
        if mono % 2 == 1 {
            TripodKind::Tripod
        } else {
            TripodKind::DualTripod
        }
    }

    /// The induced partition: arcs are paired off in parallel, with a part
    /// of size three joining all arcs for a tripod.
    pub fn partition(&self) -> Result<NodePartition> {
        let (r, g, b) = (
            self.arc(NodeColor::R),
            self.arc(NodeColor::G),
            self.arc(NodeColor::B),
        );
        let (nr, ng, nb) = (r.len() as i64, g.len() as i64, b.len() as i64);
        let odd = self.kind() == TripodKind::Tripod;
        let shift = odd as i64;
        let (prg, pgb, pbr) = (
            (nr + ng - nb - shift) / 2,
            (ng + nb - nr - shift) / 2,
            (nb + nr - ng - shift) / 2,
        );
        if prg < 0 || pgb < 0 || pbr < 0 {
            return Err(CpnError::Precondition(
                "arc sizes admit no tripod partition".into(),
            ));
        }
        let (prg, pgb, pbr) = (prg as usize, pgb as usize, pbr as usize);
        let mut blocks = Vec::new();
        if odd {
            blocks.push(vec![r[pbr], g[prg], b[pgb]]);
        }
        for k in 0..prg {
            blocks.push(vec![r[r.len() - 1 - k], g[k]]);
        }
        for k in 0..pgb {
            blocks.push(vec![g[g.len() - 1 - k], b[k]]);
        }
        for k in 0..pbr {
            blocks.push(vec![b[b.len() - 1 - k], r[k]]);
        }
        for v in 1..=self.n {
            if !self.color(v).is_mono() {
                blocks.push(vec![v]);
            }
        }
        NodePartition::new(self.n, blocks)
    }

    /// Single-colored nodes in matrix order: red, green, blue arcs.
    fn matrix_order(&self) -> Vec<usize> {
        let mut order = self.arc(NodeColor::R);
        order.extend(self.arc(NodeColor::G));
        order.extend(self.arc(NodeColor::B));
        order
    }
}

fn check_spec(l: &ResponseMatrix, spec: &TripodSpec, kind: TripodKind) -> Result<()> {
    if l.n() != spec.n() {
        return Err(CpnError::Precondition(
            "coloring and matrix have different node counts".into(),
        ));
    }
    if spec.kind() != kind {
        return Err(CpnError::Precondition(format!(
            "coloring is a {:?}, expected {:?}",
            spec.kind(),
            kind
        )));
    }
    spec.partition().map(|_| ())
}

/// `Z_tau / Z_unc` for a dual-tripod coloring: the Pfaffian of the matrix
/// with `L[i][j]` above the diagonal between differently colored nodes.
pub fn dual_tripod_pf(l: &ResponseMatrix, spec: &TripodSpec) -> Result<Rat> {
    check_spec(l, spec, TripodKind::DualTripod)?;
    let order = spec.matrix_order();
    let m = SkewMatrix::from_upper(order.len(), |a, c| {
        let (u, v) = (order[a], order[c]);
        if spec.color(u) == spec.color(v) {
            Rat::zero()
        } else {
            l.get(u, v).clone()
        }
    });
    Ok(pfaffian(&m))
}

/// `Z_tau / Z_unc` for a tripod coloring: red-blue entries change sign and
/// an extra column holds, for each node, its total response to the next arc
/// plus its response to the opposite singleton.
pub fn tripod_pf(l: &ResponseMatrix, spec: &TripodSpec) -> Result<Rat> {
    check_spec(l, spec, TripodKind::Tripod)?;
    let order = spec.matrix_order();
    let k = order.len();
    let m = SkewMatrix::from_upper(k + 1, |a, c| {
        let u = order[a];
        let cu = spec.color(u);
        if c == k {
            let mut s: Rat = order
                .iter()
                .filter(|&&w| spec.color(w) == cu.next())
                .map(|&w| l.get(u, w))
                .sum();
            if let Some(w) = spec.singleton(cu.opposite()) {
                s += l.get(u, w);
            }
            return s;
        }
        let v = order[c];
        let cv = spec.color(v);
        if cu == cv {
            Rat::zero()
        } else if cu == NodeColor::R && cv == NodeColor::B {
            -l.get(u, v).clone()
        } else {
            l.get(u, v).clone()
        }
    });
    Ok(pfaffian(&m))
}

/// `Z_tau / Z_unc` for a dual-tripod coloring without singletons, computed
/// through effective resistances: the linear coefficient in `t` of the
/// Pfaffian with entries `t - R_ij / 2` between colors gives
/// `Z_tau / Z_tree`, which is rescaled by `Z_tree / Z_unc`.
pub fn dual_tripod_via_resistance(l: &ResponseMatrix, spec: &TripodSpec) -> Result<Rat> {
    check_spec(l, spec, TripodKind::DualTripod)?;
    if (1..=spec.n()).any(|v| !spec.color(v).is_mono()) {
        return Err(CpnError::Precondition(
            "resistance formula needs a coloring without singletons".into(),
        ));
    }
    let order = spec.matrix_order();
    let k = order.len();
    let mut res = RatMatrix::zeros(k, k);
    for a in 0..k {
        for c in a + 1..k {
            if spec.color(order[a]) != spec.color(order[c]) {
                res[(a, c)] = effective_resistance(l.matrix(), order[a] - 1, order[c] - 1)?;
            }
        }
    }
    // The Pfaffian has degree at most k/2 in t: interpolate at 0..=k/2.
    let deg = k / 2;
    let points: Vec<Rat> = (0..=deg as i64).map(rat).collect();
    let values: Vec<Rat> = points
        .iter()
        .map(|t| {
            let m = SkewMatrix::from_upper(k, |a, c| {
                if spec.color(order[a]) == spec.color(order[c]) {
                    Rat::zero()
                } else {
                    t - &res[(a, c)] / rat(2)
                }
            });
            pfaffian(&m)
        })
        .collect();
    let vander = RatMatrix::from_fn(deg + 1, deg + 1, |i, j| pow(&points[i], j));
    let rhs = RatMatrix::from_fn(deg + 1, 1, |i, _| values[i].clone());
    let coeffs = solve(&vander, &rhs)?;
    let linear = if deg >= 1 {
        coeffs[(1, 0)].clone()
    } else {
        Rat::zero()
    };
    let n = l.n();
    let rest: Vec<usize> = (1..n).collect();
    let tree_over_unc = det(&l.matrix().neg().submatrix(&rest, &rest))?;
    Ok(linear * tree_over_unc)
}

fn pow(x: &Rat, e: usize) -> Rat {
    (0..e).fold(Rat::one(), |acc, _| acc * x)
}

/// How a normalized partition sum was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Evaluation {
    /// Node gluing and internalization reduced the partition to a tripod or
    /// dual tripod, evaluated by the matching Pfaffian formula.
    Pfaffian(TripodKind),
    /// Solved from the linear system relating minors of the response matrix
    /// to normalized partition sums.
    MinorSystem,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Pfaffian(TripodKind::Tripod) => f.write_str("tripod-pfaffian"),
            Evaluation::Pfaffian(TripodKind::DualTripod) => f.write_str("dual-tripod-pfaffian"),
            Evaluation::MinorSystem => f.write_str("minor-system"),
        }
    }
}

/// `Z_tau / Z_unc` for a planar partition, computed from the response
/// matrix alone. Adjacent singleton nodes are glued (an infinite-conductance
/// edge, which leaves the value unchanged) and a node flanked by two members
/// of its own large block is internalized (which scales the value by `-L_vv`)
/// until the partition is induced by a tripod coloring. Partitions that do
/// not reduce this way fall back to the minor system.
pub fn partition_ratio(l: &ResponseMatrix, tau: &NodePartition) -> Result<(Rat, Evaluation)> {
    if l.n() != tau.n() {
        return Err(CpnError::Precondition(
            "partition and matrix have different node counts".into(),
        ));
    }
    if !tau.is_planar() {
        return Ok((Rat::zero(), Evaluation::MinorSystem));
    }
    if let Some(found) = reduce_to_tripod(l, tau)? {
        return Ok(found);
    }
    Ok((minor_system_ratio(l, tau)?, Evaluation::MinorSystem))
}

fn reduce_to_tripod(l: &ResponseMatrix, tau: &NodePartition) -> Result<Option<(Rat, Evaluation)>> {
    let mut l = l.clone();
    // order[p] is the original label of the node now at position p + 1.
    let mut order: Vec<usize> = (1..=tau.n()).collect();
    let mut block: Vec<usize> = (1..=tau.n()).map(|v| tau.block_of(v)).collect();
    let mut sizes: Vec<usize> = tau.blocks().iter().map(|b| b.len()).collect();
    let mut factor = Rat::one();
    loop {
        // Glue circularly adjacent singletons.
        'glue: loop {
            let k = order.len();
            if k < 2 {
                break;
            }
            for p in 0..k {
                let q = (p + 1) % k;
                if sizes[block[order[p] - 1]] == 1 && sizes[block[order[q] - 1]] == 1 {
                    l = l.glue(p + 1)?;
                    // The merged node takes the smaller position.
                    order.remove(p.max(q));
                    continue 'glue;
                }
            }
            break;
        }
        let labels: Vec<usize> = order.iter().map(|&v| block[v - 1]).collect();
        let current = NodePartition::from_labels(&labels);
        if let Some(spec) = TripodSpec::find(&current) {
            let v = match spec.kind() {
                TripodKind::Tripod => tripod_pf(&l, &spec)?,
                TripodKind::DualTripod => dual_tripod_pf(&l, &spec)?,
            };
            return Ok(Some((factor * v, Evaluation::Pfaffian(spec.kind()))));
        }
        let k = order.len();
        let Some(p) = (0..k).find(|&p| {
            let b = block[order[p] - 1];
            sizes[b] >= 4
                && block[order[(p + k - 1) % k] - 1] == b
                && block[order[(p + 1) % k] - 1] == b
        }) else {
            return Ok(None);
        };
        if l.get(p + 1, p + 1).is_zero() {
            // An isolated node: leave the evaluation to the minor system.
            return Ok(None);
        }
        factor *= -l.get(p + 1, p + 1).clone();
        l = l.internalize(p + 1)?;
        let v = order.remove(p);
        sizes[block[v - 1]] -= 1;
        block[v - 1] = usize::MAX;
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n + 1 - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// Coefficient of `Z_sigma / Z_unc` in the minor of `L` with rows `rs` and
/// columns `cs` deleted: nonzero only when every block of `sigma` holds
/// exactly one deleted row and one deleted column.
fn minor_coefficient(rs: &[usize], cs: &[usize], sigma: &NodePartition, n: usize) -> i64 {
    let k = rs.len();
    if sigma.blocks().len() != k {
        return 0;
    }
    let mut image = vec![0usize; k];
    for b in sigma.blocks() {
        let r: Vec<usize> = b
            .iter()
            .filter_map(|v| rs.iter().position(|x| x == v))
            .collect();
        let c: Vec<usize> = b
            .iter()
            .filter_map(|v| cs.iter().position(|x| x == v))
            .collect();
        if r.len() != 1 || c.len() != 1 {
            return 0;
        }
        image[r[0]] = c[0];
    }
    let mut inversions = 0;
    for i in 0..k {
        for j in i + 1..k {
            if image[i] > image[j] {
                inversions += 1;
            }
        }
    }
    let exponent = inversions + rs.iter().sum::<usize>() + cs.iter().sum::<usize>() + (n - k);
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Z_tau / Z_unc` from the linear relations between minors of `L` and the
/// normalized partition sums of planar partitions with the same number of
/// parts. Rows of the system are added only while they increase its rank, so
/// only the needed minors are computed.
pub fn minor_system_ratio(l: &ResponseMatrix, tau: &NodePartition) -> Result<Rat> {
    let n = l.n();
    let k = tau.blocks().len();
    if k == n {
        return Ok(Rat::one());
    }
    let unknowns: Vec<NodePartition> = NodePartition::all_planar(n)
        .into_iter()
        .filter(|p| p.blocks().len() == k)
        .collect();
    let target = unknowns
        .iter()
        .position(|p| p == tau)
        .ok_or_else(|| CpnError::Precondition("partition is not planar".into()))?;
    let u = unknowns.len();
    let subsets = combinations(n, k);
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rows: Vec<(Vec<i64>, Rat)> = Vec::new();
    'outer: for rs in &subsets {
        for cs in &subsets {
            let coef: Vec<i64> = unknowns
                .iter()
                .map(|s| minor_coefficient(rs, cs, s, n))
                .collect();
            let mut reduced: Vec<Rat> = coef.iter().map(|&c| rat(c)).collect();
            for (b, &p) in basis.iter().zip(&pivots) {
                if !reduced[p].is_zero() {
                    let f = reduced[p].clone() / &b[p];
                    for j in 0..u {
                        let t = &f * &b[j];
                        reduced[j] -= t;
                    }
                }
            }
            let Some(p) = reduced.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let keep_r: Vec<usize> = (0..n).filter(|i| !rs.contains(&(i + 1))).collect();
            let keep_c: Vec<usize> = (0..n).filter(|i| !cs.contains(&(i + 1))).collect();
            let minor = det(&l.matrix().submatrix(&keep_r, &keep_c))?;
            basis.push(reduced);
            pivots.push(p);
            rows.push((coef, minor));
            if rows.len() == u {
                break 'outer;
            }
        }
    }
    if rows.len() < u {
        return Err(CpnError::Singular(
            "minor system does not determine the partition sums".into(),
        ));
    }
    let a = RatMatrix::from_fn(u, u, |i, j| rat(rows[i].0[j]));
    let b = RatMatrix::from_fn(u, 1, |i, _| rows[i].1.clone());
    let x = solve(&a, &b)?;
    Ok(x[(target, 0)].clone())
}
