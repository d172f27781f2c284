//! Tripod variables of a response matrix and exact recovery of the
//! conductances of the standard network of a strand matching.
//!
//! Each crossing `chi` of the rectilinear strand diagram carries a comb: the
//! crossings met going up-left from `chi` (the spine) together with the
//! crossings met going up-right from each spine crossing (the teeth).
//! Resolving comb crossings vertically and all other crossings horizontally
//! yields a partition `tau_chi`, realized by exactly one grove of the
//! standard network. The normalized sums `Z_{tau_chi} / Z_unc`, plus the
//! exterior value for the all-horizontal resolution, determine every
//! conductance as a biratio.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::dyck::{standard_network, EdgeOrientation, RectStrandDiagram};
use crate::error::{CpnError, Result};
use crate::exactalg::{det, format_rat, Rat, RatMatrix};
use crate::groves::{partition_ratio, Evaluation, NodePartition};
use crate::medial::StrandMatching;
use crate::network::{Network, ResponseMatrix, UnionFind};

/// Largest node count accepted by [`search_matching`].
pub const MATCHING_SEARCH_MAX_NODES: usize = 6;

/// The comb of a crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comb {
    pub base: usize,
    /// Crossings along the up-left strand, starting with `base`.
    pub spine: Vec<usize>,
    /// For each spine crossing, the crossings along its up-right strand,
    /// starting with the spine crossing itself.
    pub teeth: Vec<Vec<usize>>,
}

impl Comb {
    pub fn new(d: &RectStrandDiagram, base: usize) -> Self {
        let mut spine = vec![base];
        spine.extend(d.follow(base, false));
        let teeth = spine
            .iter()
            .map(|&s| {
                let mut t = vec![s];
                t.extend(d.follow(s, true));
                t
            })
            .collect();
        Comb { base, spine, teeth }
    }

    /// Every crossing of the comb.
    pub fn members(&self) -> BTreeSet<usize> {
        self.teeth.iter().flatten().copied().collect()
    }
}

/// The partition of the nodes (and its dual) obtained by resolving the
/// crossings of the comb of `chi` vertically and all others horizontally;
/// `None` resolves every crossing horizontally. `g` is the standard network
/// of the diagram.
pub fn comb_partition(
    g: &Network,
    d: &RectStrandDiagram,
    chi: Option<usize>,
) -> (NodePartition, NodePartition) {
    let comb = chi.map(|c| Comb::new(d, c).members()).unwrap_or_default();
    let mut uf = UnionFind::new(g.vertex_count());
    for e in g.edges() {
        let vertical = d.crossings()[e.id].orientation == EdgeOrientation::Vertical;
        if vertical == comb.contains(&e.id) {
            uf.union(e.u - 1, e.v - 1);
        }
    }
    let labels: Vec<usize> = (0..g.n()).map(|v| uf.find(v)).collect();
    let tau = NodePartition::from_labels(&labels);
    let dual = tau.dual();
    (tau, dual)
}

/// One step of a graph extension acting on a response matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionStep {
    /// Adds an edge of the given conductance between nodes `node` and
    /// `node + 1` (circularly).
    AdjoinEdge { node: usize, conductance: Rat },
    /// The infinite-conductance limit of `AdjoinEdge`: merges `node` with
    /// `node + 1`.
    Glue { node: usize },
    /// Inserts an isolated node at position `position` (1-based).
    InsertNode { position: usize },
    /// Turns `node` into an internal vertex.
    Internalize { node: usize },
}

/// Applies extension steps in order.
pub fn extend_response(l: &ResponseMatrix, steps: &[ExtensionStep]) -> Result<ResponseMatrix> {
    let mut cur = l.clone();
    for step in steps {
        let n = cur.n();
        cur = match step {
            ExtensionStep::AdjoinEdge { node, conductance } => {
                if *node == 0 || *node > n || n < 2 {
                    return Err(CpnError::Precondition(format!("no node {node}")));
                }
                let (i, j) = (node - 1, node % n);
                let mut m = cur.matrix().clone();
                m[(i, i)] -= conductance;
                m[(j, j)] -= conductance;
                m[(i, j)] += conductance;
                m[(j, i)] += conductance;
                ResponseMatrix::new(m)?
            }
            ExtensionStep::Glue { node } => cur.glue(*node)?,
            ExtensionStep::InsertNode { position } => {
                if *position == 0 || *position > n + 1 {
                    return Err(CpnError::Precondition(format!(
                        "cannot insert at {position}"
                    )));
                }
                let p = position - 1;
                let old = |k: usize| {
                    if k < p {
                        Some(k)
                    } else if k == p {
                        None
                    } else {
                        Some(k - 1)
                    }
                };
                let m = RatMatrix::from_fn(n + 1, n + 1, |a, b| match (old(a), old(b)) {
                    (Some(x), Some(y)) => cur.matrix()[(x, y)].clone(),
                    _ => Rat::zero(),
                });
                ResponseMatrix::new(m)?
            }
            ExtensionStep::Internalize { node } => cur.internalize(*node)?,
        };
    }
    Ok(cur)
}

/// Normalized tripod variables of a response matrix relative to a strand
/// matching, indexed like the crossings of its diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripodVariableSet {
    pub values: Vec<Rat>,
    pub partitions: Vec<NodePartition>,
    pub sources: Vec<Evaluation>,
    pub exterior: Rat,
    pub exterior_partition: NodePartition,
    pub exterior_source: Evaluation,
}

impl TripodVariableSet {
    /// Number of variables: one per crossing plus the exterior value.
    pub fn len(&self) -> usize {
        self.values.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Text report with one line per crossing and one for the exterior.
    pub fn report(&self, d: &RectStrandDiagram) -> String {
        let mut out = String::new();
        for (i, c) in d.crossings().iter().enumerate() {
            let _ = writeln!(
                out,
                "tripod {i} at ({},{}): {} via {} [{}]",
                c.x,
                c.y,
                format_rat(&self.values[i]),
                self.sources[i],
                self.partitions[i]
            );
        }
        let _ = writeln!(
            out,
            "exterior: {} via {} [{}]",
            format_rat(&self.exterior),
            self.exterior_source,
            self.exterior_partition
        );
        out
    }
}

/// Computes the tripod variables of `l` for the cell of `m`.
pub fn tripod_variables(l: &ResponseMatrix, m: &StrandMatching) -> Result<TripodVariableSet> {
    if l.n() != m.n() {
        return Err(CpnError::Precondition(
            "matrix and matching have different node counts".into(),
        ));
    }
    let (g, d) = standard_network(m)?;
    tripod_variables_on(l, &g, &d)
}

fn tripod_variables_on(
    l: &ResponseMatrix,
    g: &Network,
    d: &RectStrandDiagram,
) -> Result<TripodVariableSet> {
    let eval = |chi: Option<usize>| -> Result<(Rat, NodePartition, Evaluation)> {
        let (tau, _) = comb_partition(g, d, chi);
        let (v, how) = partition_ratio(l, &tau)?;
        if v <= Rat::zero() {
            let at = chi
                .map(|c| format!("crossing {c}"))
                .unwrap_or_else(|| "the exterior".into());
            return Err(CpnError::NotInCell(format!(
                "tripod variable at {at} is {} via {how} [{tau}], not positive",
                format_rat(&v)
            )));
        }
        Ok((v, tau, how))
    };
    let mut values = Vec::new();
    let mut partitions = Vec::new();
    let mut sources = Vec::new();
    for chi in 0..d.crossings().len() {
        let (v, tau, how) = eval(Some(chi))?;
        values.push(v);
        partitions.push(tau);
        sources.push(how);
    }
    let (exterior, exterior_partition, exterior_source) = eval(None)?;
    Ok(TripodVariableSet {
        values,
        partitions,
        sources,
        exterior,
        exterior_partition,
        exterior_source,
    })
}

/// Conductance of every edge of the standard network (indexed by crossing)
/// as a biratio of tripod variables: the vertical conductance at `e` is
/// `Z_e Z_f / (Z_a Z_b)`, where `a` and `b` are the first crossings up-left
/// and up-right of `e` and `f` the first crossing up-left of `b`; missing
/// crossings use the exterior value.
pub fn conductances_from_tripods(
    tv: &TripodVariableSet,
    d: &RectStrandDiagram,
) -> Result<Vec<Rat>> {
    if tv.values.len() != d.crossings().len() {
        return Err(CpnError::Precondition(
            "tripod variables do not match the diagram".into(),
        ));
    }
    let z = |c: Option<usize>| c.map(|c| &tv.values[c]).unwrap_or(&tv.exterior);
    let mut out = Vec::new();
    for (e, crossing) in d.crossings().iter().enumerate() {
        let a = d.follow(e, false).first().copied();
        let b = d.follow(e, true).first().copied();
        let f = b.and_then(|b| d.follow(b, false).first().copied());
        let den = z(a) * z(b);
        if den.is_zero() {
            return Err(CpnError::NotInCell(format!(
                "zero denominator in the biratio at crossing {e}"
            )));
        }
        let vertical = z(Some(e)) * z(f) / den;
        if vertical.is_zero() {
            return Err(CpnError::NotInCell(format!("zero biratio at crossing {e}")));
        }
        out.push(match crossing.orientation {
            EdgeOrientation::Vertical => vertical,
            EdgeOrientation::Horizontal => Rat::one() / vertical,
        });
    }
    Ok(out)
}

/// Result of a reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub network: Network,
    pub diagram: RectStrandDiagram,
    pub tripods: TripodVariableSet,
}

/// Recovers the standard network of `m` whose response matrix is `l`. The
/// round trip is checked; a mismatch means `l` is not in the cell of `m`.
pub fn reconstruct_standard(l: &ResponseMatrix, m: &StrandMatching) -> Result<Reconstruction> {
    if l.n() != m.n() {
        return Err(CpnError::Precondition(
            "matrix and matching have different node counts".into(),
        ));
    }
    let (g, d) = standard_network(m)?;
    let tripods = tripod_variables_on(l, &g, &d)?;
    let cond = conductances_from_tripods(&tripods, &d)?;
    let network = g.with_conductances(|e| cond[e.id].clone())?;
    if network.response_matrix()? != *l {
        return Err(CpnError::NotInCell(
            "reconstructed network does not reproduce the matrix".into(),
        ));
    }
    Ok(Reconstruction {
        network,
        diagram: d,
        tripods,
    })
}

/// Circular pairs `(P; Q)` of node sets: `P` followed by `Q` reversed are in
/// circular order. Returned as 0-based index lists.
fn circular_pairs(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let s = set.len();
        if s == 0 || s % 2 == 1 {
            continue;
        }
        let k = s / 2;
        for cut in 0..s {
            let seq: Vec<usize> = (0..s).map(|t| set[(cut + t) % s]).collect();
            let p = seq[..k].to_vec();
            let q: Vec<usize> = seq[k..].iter().rev().copied().collect();
            out.push((p, q));
        }
    }
    out
}

/// Which circular pairs are connected: their minor of the response matrix
/// is nonzero.
fn connections(l: &RatMatrix, pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<Vec<bool>> {
    pairs
        .iter()
        .map(|(p, q)| Ok(!det(&l.submatrix(p, q))?.is_zero()))
        .collect()
}

/// Finds the strand matching whose cell contains `l`, by exhaustive search.
///
/// This is a brute-force heuristic for small `n`, not a decision procedure:
/// each matching with a standard network is compared with `l` on which
/// circular pairs of node sets are connected, and the first agreeing
/// candidate is confirmed by a full reconstruction round trip.
pub fn search_matching(l: &ResponseMatrix) -> Result<StrandMatching> {
    let n = l.n();
    if n > MATCHING_SEARCH_MAX_NODES {
        return Err(CpnError::Capacity(format!(
            "matching search is limited to {MATCHING_SEARCH_MAX_NODES} nodes"
        )));
    }
    let pairs = circular_pairs(n);
    let target = connections(l.matrix(), &pairs)?;
    for m in StrandMatching::all(n) {
        let Ok((g, _)) = standard_network(&m) else {
            continue;
        };
        if connections(g.response_matrix()?.matrix(), &pairs)? != target {
            continue;
        }
        if reconstruct_standard(l, &m).is_ok() {
            return Ok(m);
        }
    }
    Err(CpnError::NotInCell(
        "no strand matching reproduces the matrix".into(),
    ))
}
