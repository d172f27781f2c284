//! Circular planar networks: the embedded graph model, Laplacian and response
//! matrix, the planar dual, the local electrical transformations, and the
//! `cpn v1` text format.
//!
//! Vertices are numbered `1..=n` for boundary nodes (counterclockwise around
//! the disk) followed by `n+1..=n+k` for internal vertices. The embedding is a
//! rotation system: for each vertex, the counterclockwise order of incident
//! edge ids. For a boundary node the list is linear, starting with the edge
//! nearest the boundary arc towards node `i+1` and ending with the edge
//! nearest node `i-1`. A self-loop appears twice in its vertex's list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{CpnError, Result};
use crate::exactalg::{format_rat, parse_rat, schur_complement, Rat, RatMatrix};

/// An edge with a stable id and a positive conductance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub conductance: Rat,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `w`.
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// An embedded circular planar network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    n: usize,
    internals: usize,
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
}

/// A half-edge of the augmented map: an edge index (real edges first, then
/// the `n` boundary arcs) and which end it sits at.
pub(crate) type Dart = usize;

/// The combinatorial map of a network with its boundary circle added as `n`
/// extra arcs (arc `i-1` joins node `i` to node `i+1`).
#[derive(Clone, Debug)]
pub(crate) struct AugmentedMap {
    /// Number of real edges; arcs have edge indices `edge_count..edge_count+n`.
    pub edge_count: usize,
    pub dart_vertex: Vec<usize>,
    /// Darts of each vertex in rotation order (index `v - 1`).
    pub around: Vec<Vec<Dart>>,
    pub face_of: Vec<usize>,
    /// Face orbits of `d -> next(twin(d))`, where `next` is the following
    /// dart counterclockwise around a vertex; each face lies to the right of
    /// its darts.
    pub faces: Vec<Vec<Dart>>,
}

pub(crate) fn twin(d: Dart) -> Dart {
    d ^ 1
}

impl AugmentedMap {
    pub fn is_arc(&self, d: Dart) -> bool {
        d / 2 >= self.edge_count
    }

    /// The dart of arc `i-1` that starts at node `i + 1` and runs clockwise;
    /// its face is the interior face touching that boundary arc.
    pub fn inner_arc_dart(&self, i: usize) -> Dart {
        2 * (self.edge_count + i - 1) + 1
    }

    /// The dart of arc `i-1` leaving node `i` counterclockwise (outer face).
    pub fn outer_arc_dart(&self, i: usize) -> Dart {
        2 * (self.edge_count + i - 1)
    }
}

impl Network {
    /// Builds and validates a network.
    pub fn new(
        n: usize,
        internals: usize,
        edges: Vec<Edge>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let g = Network {
            n,
            internals,
            edges,
            rotation,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn internals(&self) -> usize {
        self.internals
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.internals
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_node(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    /// Rotation list of vertex `v` (1-based).
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v - 1]
    }

    pub fn edge(&self, id: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_position(&self, id: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v - 1].len()
    }

    /// A fresh edge id larger than every id in use.
    pub fn fresh_id(&self) -> usize {
        self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0)
    }

    /// Returns a copy with conductances replaced via `f(edge)`.
    pub fn with_conductances(&self, mut f: impl FnMut(&Edge) -> Rat) -> Result<Self> {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.conductance = f(e);
            if !e.conductance.is_positive() {
                return Err(CpnError::Precondition(format!(
                    "conductance of edge {} must be positive",
                    e.id
                )));
            }
        }
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(CpnError::Invariant(
                "a network needs at least one boundary node".into(),
            ));
        }
        let nv = self.vertex_count();
        if self.rotation.len() != nv {
            return Err(CpnError::Invariant(format!(
                "expected {nv} rotation lists, found {}",
                self.rotation.len()
            )));
        }
        let mut ids = BTreeSet::new();
        for e in &self.edges {
            if !ids.insert(e.id) {
                return Err(CpnError::Invariant(format!("duplicate edge id {}", e.id)));
            }
            if e.u == 0 || e.v == 0 || e.u > nv || e.v > nv {
                return Err(CpnError::Invariant(format!(
                    "edge {} has an endpoint out of range",
                    e.id
                )));
            }
            if !e.conductance.is_positive() {
                return Err(CpnError::Invariant(format!(
                    "edge {} has non-positive conductance",
                    e.id
                )));
            }
        }
        for v in 1..=nv {
            let mut expected: BTreeMap<usize, usize> = BTreeMap::new();
            for e in &self.edges {
                let mult = usize::from(e.u == v) + usize::from(e.v == v);
                if mult > 0 {
                    expected.insert(e.id, mult);
                }
            }
            let mut found: BTreeMap<usize, usize> = BTreeMap::new();
            for &id in &self.rotation[v - 1] {
                *found.entry(id).or_default() += 1;
            }
            if expected != found {
                return Err(CpnError::Invariant(format!(
                    "rotation of vertex {v} does not list its incident edges"
                )));
            }
        }
        let map = self.augmented_map();
        // Euler characteristic per connected component of the augmented map.
        let mut comp = UnionFind::new(nv + 1);
        for e in &self.edges {
            comp.union(e.u, e.v);
        }
        for i in 1..self.n {
            comp.union(i, i + 1);
        }
        let mut stats: BTreeMap<usize, (i64, i64, i64)> = BTreeMap::new();
        for v in 1..=nv {
            stats.entry(comp.find(v)).or_default().0 += 1;
        }
        for e in &self.edges {
            stats.entry(comp.find(e.u)).or_default().1 += 1;
        }
        stats.entry(comp.find(1)).or_default().1 += self.n as i64;
        for f in &map.faces {
            let v = map.dart_vertex[f[0]];
            stats.entry(comp.find(v)).or_default().2 += 1;
        }
        for (root, (v, e, f)) in stats {
            if e == 0 {
                continue;
            }
            if v - e + f != 2 {
                return Err(CpnError::Invariant(format!(
                    "rotation system is not planar (component of vertex {root}: V-E+F = {})",
                    v - e + f
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn augmented_map(&self) -> AugmentedMap {
        let m = self.edges.len();
        let n = self.n;
        let nd = 2 * (m + n);
        let mut dart_vertex = vec![0; nd];
        for (k, e) in self.edges.iter().enumerate() {
            dart_vertex[2 * k] = e.u;
            dart_vertex[2 * k + 1] = e.v;
        }
        for i in 1..=n {
            let a = m + i - 1;
            dart_vertex[2 * a] = i;
            dart_vertex[2 * a + 1] = if i == n { 1 } else { i + 1 };
        }
        let index: BTreeMap<usize, usize> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| (e.id, k))
            .collect();
        let mut around = Vec::with_capacity(self.vertex_count());
        for v in 1..=self.vertex_count() {
            let mut darts = Vec::new();
            if v <= n {
                darts.push(2 * (m + v - 1));
            }
            let mut seen_loop: BTreeSet<usize> = BTreeSet::new();
            for &id in &self.rotation[v - 1] {
                let k = index[&id];
                let e = &self.edges[k];
                let end = if e.is_loop() {
                    usize::from(!seen_loop.insert(k))
                } else {
                    usize::from(e.u != v)
                };
                darts.push(2 * k + end);
            }
            if v <= n {
                let prev = if v == 1 { n } else { v - 1 };
                darts.push(2 * (m + prev - 1) + 1);
            }
            around.push(darts);
        }
        let mut sigma = vec![0; nd];
        for darts in &around {
            for (p, &d) in darts.iter().enumerate() {
                sigma[d] = darts[(p + 1) % darts.len()];
            }
        }
        let mut face_of = vec![usize::MAX; nd];
        let mut faces = Vec::new();
        for start in 0..nd {
            if face_of[start] != usize::MAX {
                continue;
            }
            let fid = faces.len();
            let mut orbit = Vec::new();
            let mut d = start;
            while face_of[d] == usize::MAX {
                face_of[d] = fid;
                orbit.push(d);
                d = sigma[twin(d)];
            }
            faces.push(orbit);
        }
        AugmentedMap {
            edge_count: m,
            dart_vertex,
            around,
            face_of,
            faces,
        }
    }

    /// The weighted Laplacian on all vertices (positive diagonal). Self-loops
    /// contribute nothing; parallel edges add.
    pub fn laplacian(&self) -> RatMatrix {
        let nv = self.vertex_count();
        let mut lap = RatMatrix::zeros(nv, nv);
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            let (a, b) = (e.u - 1, e.v - 1);
            let c = &e.conductance;
            lap[(a, a)] += c;
            lap[(b, b)] += c;
            lap[(a, b)] -= c;
            lap[(b, a)] -= c;
        }
        lap
    }

    /// The response matrix: minus the Schur complement of the Laplacian onto
    /// the boundary nodes.
    pub fn response_matrix(&self) -> Result<ResponseMatrix> {
        let keep: Vec<usize> = (0..self.n).collect();
        let s = schur_complement(&self.laplacian(), &keep).map_err(|_| {
            CpnError::Singular("an internal component is not connected to any node".into())
        })?;
        Ok(ResponseMatrix { m: s.neg() })
    }

    /// The planar dual. Dual node `i` sits on the boundary arc between primal
    /// nodes `i` and `i+1`; dual edge ids equal primal edge ids and dual
    /// conductances are reciprocals.
    pub fn dual(&self) -> Result<Network> {
        let map = self.augmented_map();
        let n = self.n;
        let outer = map.face_of[map.outer_arc_dart(1)];
        let mut label = vec![0usize; map.faces.len()];
        for i in 1..=n {
            let f = map.face_of[map.inner_arc_dart(i)];
            if f == outer {
                return Err(CpnError::Precondition(
                    "boundary arc lies on the outer face".into(),
                ));
            }
            if label[f] != 0 {
                return Err(CpnError::Precondition(format!(
                    "dual nodes {} and {i} coincide (cactus dual)",
                    label[f]
                )));
            }
            label[f] = i;
        }
        let mut next = n + 1;
        for (f, l) in label.iter_mut().enumerate() {
            if f != outer && *l == 0 {
                *l = next;
                next += 1;
            }
        }
        // Every face must be reachable from the boundary: a floating
        // component would leave a face whose boundary is disconnected.
        let mut comp = UnionFind::new(self.vertex_count() + 1);
        for e in &self.edges {
            comp.union(e.u, e.v);
        }
        for i in 1..n {
            comp.union(i, i + 1);
        }
        if (1..=self.vertex_count()).any(|v| comp.find(v) != comp.find(1)) {
            return Err(CpnError::Precondition(
                "network has a component disjoint from the boundary".into(),
            ));
        }
        let internals = next - 1 - n;
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| Edge {
                id: e.id,
                u: label[map.face_of[2 * k]],
                v: label[map.face_of[2 * k + 1]],
                conductance: Rat::one() / &e.conductance,
            })
            .collect();
        let mut rotation = vec![Vec::new(); n + internals];
        for (f, orbit) in map.faces.iter().enumerate() {
            if f == outer {
                continue;
            }
            let start = orbit.iter().position(|&d| map.is_arc(d)).unwrap_or(0);
            let mut walk: Vec<Dart> = orbit[start..]
                .iter()
                .chain(&orbit[..start])
                .copied()
                .collect();
            if map.is_arc(walk[0]) {
                walk.remove(0);
            }
            let list: Vec<usize> = walk.iter().rev().map(|&d| self.edges[d / 2].id).collect();
            rotation[label[f] - 1] = list;
        }
        Network::new(n, internals, edges, rotation)
    }

    /// Applies one electrical transformation.
    pub fn apply(&self, t: &Transformation) -> Result<Network> {
        match *t {
            Transformation::RemoveDeadBranch { vertex } => self.remove_dead_branch(vertex),
            Transformation::RemoveSelfLoop { edge } => self.remove_self_loop(edge),
            Transformation::SeriesMerge { vertex } => self.series_merge(vertex),
            Transformation::ParallelMerge { first, second } => self.parallel_merge(first, second),
            Transformation::YDelta { vertex } => self.y_delta(vertex),
            Transformation::DeltaY { edges } => self.delta_y(edges),
        }
    }

    fn check_internal(&self, v: usize) -> Result<()> {
        if v <= self.n || v > self.vertex_count() {
            return Err(CpnError::Precondition(format!(
                "vertex {v} is not an internal vertex"
            )));
        }
        Ok(())
    }

    fn remove_edges(&mut self, ids: &[usize]) {
        self.edges.retain(|e| !ids.contains(&e.id));
        for rot in &mut self.rotation {
            rot.retain(|id| !ids.contains(id));
        }
    }

    /// Deletes internal vertex `v` (which must have no incident edges) and
    /// renumbers later internal vertices.
    fn drop_vertex(&mut self, v: usize) {
        debug_assert!(self.rotation[v - 1].is_empty());
        self.rotation.remove(v - 1);
        self.internals -= 1;
        for e in &mut self.edges {
            if e.u > v {
                e.u -= 1;
            }
            if e.v > v {
                e.v -= 1;
            }
        }
    }

    fn remove_dead_branch(&self, v: usize) -> Result<Network> {
        self.check_internal(v)?;
        let rot = self.rotation(v);
        if rot.len() != 1 {
            return Err(CpnError::Precondition(format!(
                "vertex {v} has degree {} (dead branch needs 1)",
                rot.len()
            )));
        }
        let mut g = self.clone();
        g.remove_edges(&[rot[0]]);
        g.drop_vertex(v);
        Ok(g)
    }

    /// Deletes an edge without any electrical compensation (not a
    /// response-preserving move; used to break connectivity).
    pub fn delete_edge(&self, id: usize) -> Result<Network> {
        if self.edge(id).is_none() {
            return Err(CpnError::Precondition(format!("no edge {id}")));
        }
        let mut g = self.clone();
        g.remove_edges(&[id]);
        Ok(g)
    }

    /// Contracts a non-loop edge with at least one internal endpoint, merging
    /// that endpoint into the other one (not a response-preserving move).
    pub fn contract_edge(&self, id: usize) -> Result<Network> {
        let e = self
            .edge(id)
            .ok_or_else(|| CpnError::Precondition(format!("no edge {id}")))?
            .clone();
        if e.is_loop() {
            return Err(CpnError::Precondition("cannot contract a self-loop".into()));
        }
        let (keep, gone) = if e.v > self.n {
            (e.u, e.v)
        } else if e.u > self.n {
            (e.v, e.u)
        } else {
            return Err(CpnError::Precondition(
                "contracting an edge between two nodes glues them".into(),
            ));
        };
        let mut g = self.clone();
        let keep_rot = &g.rotation[keep - 1];
        let gone_rot = &g.rotation[gone - 1];
        let pk = keep_rot
            .iter()
            .position(|&x| x == id)
            .expect("edge at keep");
        let pg = gone_rot
            .iter()
            .position(|&x| x == id)
            .expect("edge at gone");
        // Splice: the contracted vertex's remaining edges replace the edge in
        // the surviving vertex's rotation, continuing counterclockwise.
        let tail: Vec<usize> = gone_rot[pg + 1..]
            .iter()
            .chain(&gone_rot[..pg])
            .copied()
            .collect();
        let mut merged: Vec<usize> = keep_rot[..pk].to_vec();
        merged.extend(tail);
        merged.extend_from_slice(&keep_rot[pk + 1..]);
        g.rotation[keep - 1] = merged;
        g.rotation[gone - 1].clear();
        g.edges.retain(|x| x.id != id);
        for x in &mut g.edges {
            if x.u == gone {
                x.u = keep;
            }
            if x.v == gone {
                x.v = keep;
            }
        }
        g.drop_vertex(gone);
        g.validate()?;
        Ok(g)
    }

    fn remove_self_loop(&self, id: usize) -> Result<Network> {
        let e = self
            .edge(id)
            .ok_or_else(|| CpnError::Precondition(format!("no edge {id}")))?;
        if !e.is_loop() {
            return Err(CpnError::Precondition(format!(
                "edge {id} is not a self-loop"
            )));
        }
        let mut g = self.clone();
        g.remove_edges(&[id]);
        Ok(g)
    }

    fn series_merge(&self, v: usize) -> Result<Network> {
        self.check_internal(v)?;
        let rot = self.rotation(v).to_vec();
        if rot.len() != 2 || rot[0] == rot[1] {
            return Err(CpnError::Precondition(format!(
                "vertex {v} is not a series vertex"
            )));
        }
        let e1 = self.edge(rot[0]).unwrap().clone();
        let e2 = self.edge(rot[1]).unwrap().clone();
        let a = e1.other(v);
        let b = e2.other(v);
        let c = (&e1.conductance * &e2.conductance) / (&e1.conductance + &e2.conductance);
        let mut g = self.clone();
        // e1 survives with endpoints (a, b); e2's slot at b becomes e1.
        for rot in &mut g.rotation {
            for id in rot.iter_mut() {
                if *id == e2.id {
                    *id = e1.id;
                }
            }
        }
        g.rotation[v - 1].clear();
        g.edges.retain(|x| x.id != e2.id);
        let k = g.edge_position(e1.id).unwrap();
        g.edges[k] = Edge {
            id: e1.id,
            u: a,
            v: b,
            conductance: c,
        };
        g.drop_vertex(v);
        Ok(g)
    }

    fn parallel_merge(&self, first: usize, second: usize) -> Result<Network> {
        let e1 = self
            .edge(first)
            .ok_or_else(|| CpnError::Precondition(format!("no edge {first}")))?;
        let e2 = self
            .edge(second)
            .ok_or_else(|| CpnError::Precondition(format!("no edge {second}")))?;
        let same = (e1.u == e2.u && e1.v == e2.v) || (e1.u == e2.v && e1.v == e2.u);
        if first == second || !same || e1.is_loop() {
            return Err(CpnError::Precondition(format!(
                "edges {first} and {second} are not parallel"
            )));
        }
        let c = &e1.conductance + &e2.conductance;
        let mut g = self.clone();
        g.remove_edges(&[second]);
        let k = g.edge_position(first).unwrap();
        g.edges[k].conductance = c;
        Ok(g)
    }

    fn y_delta(&self, v: usize) -> Result<Network> {
        self.check_internal(v)?;
        let rot = self.rotation(v).to_vec();
        if rot.len() != 3 {
            return Err(CpnError::Precondition(format!(
                "vertex {v} does not have degree 3"
            )));
        }
        let legs: Vec<Edge> = rot
            .iter()
            .map(|&id| self.edge(id).unwrap().clone())
            .collect();
        if legs.iter().any(|e| e.is_loop()) {
            return Err(CpnError::Precondition(
                "Y center carries a self-loop".into(),
            ));
        }
        let ends: Vec<usize> = legs.iter().map(|e| e.other(v)).collect();
        if ends[0] == ends[1] || ends[1] == ends[2] || ends[0] == ends[2] {
            return Err(CpnError::Precondition(
                "Y legs must reach three distinct vertices".into(),
            ));
        }
        let c: Vec<&Rat> = legs.iter().map(|e| &e.conductance).collect();
        let s = c[0] + c[1] + c[2];
        let mut g = self.clone();
        g.remove_edges(&rot);
        // The triangle edge opposite leg i joins ends i+1 and i+2 and reuses
        // leg i's id.
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            g.edges.push(Edge {
                id: legs[i].id,
                u: ends[j],
                v: ends[k],
                conductance: (c[j] * c[k]) / &s,
            });
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            // At end i the leg is replaced by [edge to end j, edge to end k],
            // i.e. ids [leg k, leg j].
            let rot_i = &mut g.rotation[ends[i] - 1];
            let orig = self.rotation(ends[i]);
            let p = orig.iter().position(|&x| x == legs[i].id).unwrap();
            let mut new_rot = orig[..p].to_vec();
            new_rot.push(legs[k].id);
            new_rot.push(legs[j].id);
            new_rot.extend_from_slice(&orig[p + 1..]);
            *rot_i = new_rot;
        }
        g.edges.sort_by_key(|e| e.id);
        g.drop_vertex(v);
        g.validate()?;
        Ok(g)
    }

    fn delta_y(&self, ids: [usize; 3]) -> Result<Network> {
        let map = self.augmented_map();
        let mut want = ids;
        want.sort_unstable();
        if want[0] == want[1] || want[1] == want[2] {
            return Err(CpnError::Precondition(
                "triangle needs three distinct edges".into(),
            ));
        }
        let face = map.faces.iter().find(|orbit| {
            let mut es: Vec<usize> = orbit
                .iter()
                .filter(|&&d| !map.is_arc(d))
                .map(|&d| self.edges[d / 2].id)
                .collect();
            es.sort_unstable();
            orbit.len() == 3 && es == want
        });
        let Some(face) = face else {
            return Err(CpnError::Precondition(format!(
                "edges {ids:?} do not bound a triangular face"
            )));
        };
        // Walk order A -> B -> C along the face (face on the right).
        let verts: Vec<usize> = face.iter().map(|&d| map.dart_vertex[d]).collect();
        if verts[0] == verts[1] || verts[1] == verts[2] || verts[0] == verts[2] {
            return Err(CpnError::Precondition(
                "triangle vertices must be distinct".into(),
            ));
        }
        let tri: Vec<Edge> = face.iter().map(|&d| self.edges[d / 2].clone()).collect();
        // tri[i] joins verts[i] -> verts[i+1]; the opposite vertex of tri[i] is verts[i+2].
        let s = &tri[0].conductance * &tri[1].conductance
            + &tri[1].conductance * &tri[2].conductance
            + &tri[2].conductance * &tri[0].conductance;
        let center = self.vertex_count() + 1;
        let mut g = self.clone();
        g.remove_edges(&tri.iter().map(|e| e.id).collect::<Vec<_>>());
        let mut legs = Vec::new();
        for i in 0..3 {
            // Leg to verts[i] takes the id of the opposite edge tri[i+1].
            let opp = &tri[(i + 1) % 3];
            legs.push(Edge {
                id: opp.id,
                u: verts[i],
                v: center,
                conductance: &s / &opp.conductance,
            });
        }
        for i in 0..3 {
            let w = verts[i];
            let orig = self.rotation(w);
            // At w the face lies between the incoming edge tri[i-1] and the
            // outgoing edge tri[i], which are consecutive counterclockwise.
            let inc = tri[(i + 2) % 3].id;
            let out = tri[i].id;
            let len = orig.len();
            let p = (0..len)
                .find(|&p| orig[p] == inc && orig[(p + 1) % len] == out)
                .ok_or_else(|| CpnError::Invariant("triangle corner is not consecutive".into()))?;
            let mut new_rot = Vec::with_capacity(len - 1);
            if p + 1 == len {
                // Wrapped corner (only possible at an internal vertex).
                new_rot.push(legs[i].id);
                new_rot.extend_from_slice(&orig[1..p]);
            } else {
                new_rot.extend_from_slice(&orig[..p]);
                new_rot.push(legs[i].id);
                new_rot.extend_from_slice(&orig[p + 2..]);
            }
            g.rotation[w - 1] = new_rot;
        }
        g.edges.extend(legs.iter().cloned());
        g.edges.sort_by_key(|e| e.id);
        g.internals += 1;
        // Walk order is clockwise around the face, so counterclockwise around
        // the new center is A, C, B.
        g.rotation.push(vec![legs[0].id, legs[2].id, legs[1].id]);
        g.validate()?;
        Ok(g)
    }

    /// Applies one inverse move. The result has the same response matrix.
    pub fn expand(&self, x: &Expansion) -> Result<Network> {
        let mut g = self.clone();
        match x {
            Expansion::DeadBranch {
                vertex,
                slot,
                conductance,
            }
            | Expansion::SelfLoop {
                vertex,
                slot,
                conductance,
            } => {
                let v = *vertex;
                if v == 0 || v > self.vertex_count() || *slot > self.rotation(v).len() {
                    return Err(CpnError::Precondition(format!(
                        "no slot {slot} at vertex {v}"
                    )));
                }
                let id = self.fresh_id();
                if matches!(x, Expansion::DeadBranch { .. }) {
                    let w = self.vertex_count() + 1;
                    g.edges.push(Edge {
                        id,
                        u: v,
                        v: w,
                        conductance: conductance.clone(),
                    });
                    g.rotation[v - 1].insert(*slot, id);
                    g.rotation.push(vec![id]);
                    g.internals += 1;
                } else {
                    g.edges.push(Edge {
                        id,
                        u: v,
                        v,
                        conductance: conductance.clone(),
                    });
                    g.rotation[v - 1].splice(*slot..*slot, [id, id]);
                }
            }
            Expansion::Series { edge, first } | Expansion::Parallel { edge, first } => {
                let e = self
                    .edge(*edge)
                    .ok_or_else(|| CpnError::Precondition(format!("no edge {edge}")))?
                    .clone();
                if e.is_loop() {
                    return Err(CpnError::Precondition("cannot split a self-loop".into()));
                }
                let id = self.fresh_id();
                let series = matches!(x, Expansion::Series { .. });
                let second = if series {
                    if first <= &e.conductance {
                        return Err(CpnError::Precondition(
                            "series split needs a larger first conductance".into(),
                        ));
                    }
                    (first * &e.conductance) / (first - &e.conductance)
                } else {
                    if first >= &e.conductance || !first.is_positive() {
                        return Err(CpnError::Precondition(
                            "parallel split needs 0 < first < conductance".into(),
                        ));
                    }
                    &e.conductance - first
                };
                let k = g.edge_position(e.id).unwrap();
                if series {
                    let w = self.vertex_count() + 1;
                    g.edges[k] = Edge {
                        id: e.id,
                        u: e.u,
                        v: w,
                        conductance: first.clone(),
                    };
                    g.edges.push(Edge {
                        id,
                        u: w,
                        v: e.v,
                        conductance: second,
                    });
                    let p = g.rotation[e.v - 1].iter().position(|&x| x == e.id).unwrap();
                    g.rotation[e.v - 1][p] = id;
                    g.rotation.push(vec![e.id, id]);
                    g.internals += 1;
                } else {
                    g.edges[k].conductance = first.clone();
                    g.edges.push(Edge {
                        id,
                        u: e.u,
                        v: e.v,
                        conductance: second,
                    });
                    let p = g.rotation[e.u - 1].iter().position(|&x| x == e.id).unwrap();
                    g.rotation[e.u - 1].insert(p, id);
                    let q = g.rotation[e.v - 1].iter().position(|&x| x == e.id).unwrap();
                    g.rotation[e.v - 1].insert(q + 1, id);
                }
            }
        }
        g.validate()?;
        Ok(g)
    }

    /// Every site at which some transformation applies.
    pub fn transformation_sites(&self) -> Vec<Transformation> {
        let mut out = Vec::new();
        for v in self.n + 1..=self.vertex_count() {
            let rot = self.rotation(v);
            match rot.len() {
                1 => out.push(Transformation::RemoveDeadBranch { vertex: v }),
                2 if rot[0] != rot[1] => out.push(Transformation::SeriesMerge { vertex: v }),
                _ => {}
            }
            if rot.len() == 3 && self.y_delta(v).is_ok() {
                out.push(Transformation::YDelta { vertex: v });
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                out.push(Transformation::RemoveSelfLoop { edge: e.id });
                continue;
            }
            for f in &self.edges[i + 1..] {
                if (e.u == f.u && e.v == f.v) || (e.u == f.v && e.v == f.u) {
                    out.push(Transformation::ParallelMerge {
                        first: e.id,
                        second: f.id,
                    });
                }
            }
        }
        let map = self.augmented_map();
        for orbit in &map.faces {
            if orbit.len() == 3 && orbit.iter().all(|&d| !map.is_arc(d)) {
                let mut ids = [0; 3];
                for (k, &d) in orbit.iter().enumerate() {
                    ids[k] = self.edges[d / 2].id;
                }
                let t = Transformation::DeltaY { edges: ids };
                if self.delta_y(ids).is_ok() {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Parses the `cpn v1` text format.
    pub fn parse(text: &str) -> Result<Network> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
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
            match toks[0] {
                "cpn" => {
                    if header.is_some() || toks.len() != 3 {
                        return Err(CpnError::parse(
                            ln,
                            "expected a single `cpn <n> <k>` header",
                        ));
                    }
                    let (n, k) = (num(toks[1])?, num(toks[2])?);
                    header = Some((n, k));
                    rotation = vec![None; n + k];
                }
                "edge" => {
                    if header.is_none() {
                        return Err(CpnError::parse(ln, "edge before header"));
                    }
                    if toks.len() != 5 {
                        return Err(CpnError::parse(ln, "expected `edge <id> <u> <v> <p/q>`"));
                    }
                    let c = parse_rat(toks[4]).map_err(|e| CpnError::parse(ln, e))?;
                    edges.push(Edge {
                        id: num(toks[1])?,
                        u: num(toks[2])?,
                        v: num(toks[3])?,
                        conductance: c,
                    });
                }
                "rot" => {
                    let Some((n, k)) = header else {
                        return Err(CpnError::parse(ln, "rot before header"));
                    };
                    if toks.len() < 2 {
                        return Err(CpnError::parse(ln, "expected `rot <v> <ids>`"));
                    }
                    let v = num(toks[1])?;
                    if v == 0 || v > n + k {
                        return Err(CpnError::parse(ln, format!("vertex {v} out of range")));
                    }
                    if rotation[v - 1].is_some() {
                        return Err(CpnError::parse(ln, format!("duplicate rot for vertex {v}")));
                    }
                    rotation[v - 1] =
                        Some(toks[2..].iter().map(|t| num(t)).collect::<Result<_>>()?);
                }
                other => return Err(CpnError::parse(ln, format!("unknown keyword `{other}`"))),
            }
        }
        let (n, k) = header.ok_or_else(|| CpnError::parse(1, "missing `cpn <n> <k>` header"))?;
        let rotation = rotation
            .into_iter()
            .map(Option::unwrap_or_default)
            .collect();
        Network::new(n, k, edges, rotation)
    }

    /// Renders the `cpn v1` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("cpn {} {}\n", self.n, self.internals);
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} {} {}",
                e.id,
                e.u,
                e.v,
                format_rat(&e.conductance)
            );
        }
        for v in 1..=self.vertex_count() {
            let ids: Vec<String> = self.rotation(v).iter().map(|x| x.to_string()).collect();
            if ids.is_empty() {
                let _ = writeln!(out, "rot {v}");
            } else {
                let _ = writeln!(out, "rot {v} {}", ids.join(" "));
            }
        }
        out
    }
}

/// A response-preserving local move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transformation {
    /// Remove an internal vertex of degree one together with its edge.
    RemoveDeadBranch { vertex: usize },
    /// Remove a self-loop.
    RemoveSelfLoop { edge: usize },
    /// Replace the two edges at an internal degree-two vertex by one edge.
    SeriesMerge { vertex: usize },
    /// Replace two edges with the same endpoints by one edge.
    ParallelMerge { first: usize, second: usize },
    /// Replace an internal degree-three vertex by a triangle.
    YDelta { vertex: usize },
    /// Replace a triangular face by an internal degree-three vertex.
    DeltaY { edges: [usize; 3] },
}

/// An inverse transformation: grows the network without changing its
/// response matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// Hang a new internal vertex off `vertex`, inserting the edge at
    /// position `slot` of its rotation.
    DeadBranch {
        vertex: usize,
        slot: usize,
        conductance: Rat,
    },
    /// Attach a self-loop at position `slot` of the rotation of `vertex`.
    SelfLoop {
        vertex: usize,
        slot: usize,
        conductance: Rat,
    },
    /// Subdivide an edge; the part at its first endpoint gets conductance
    /// `first`, which must exceed the edge's.
    Series { edge: usize, first: Rat },
    /// Double an edge; the copies have conductances `first` and the rest.
    Parallel { edge: usize, first: Rat },
}

/// The response matrix of a network: symmetric with zero row sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResponseMatrix {
    m: RatMatrix,
}

impl ResponseMatrix {
    /// Wraps a matrix after checking squareness, symmetry and zero row sums.
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(CpnError::Dimension("response matrix must be square".into()));
        }
        if !m.is_symmetric() {
            return Err(CpnError::Invariant(
                "response matrix must be symmetric".into(),
            ));
        }
        for i in 0..m.rows() {
            let s: Rat = m.row(i).iter().sum();
            if !s.is_zero() {
                return Err(CpnError::Invariant(format!(
                    "row {} does not sum to zero",
                    i + 1
                )));
            }
        }
        Ok(ResponseMatrix { m })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    /// Entry `L[i][j]` with 1-based node labels.
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.m[(i - 1, j - 1)]
    }

    /// Glues circularly adjacent nodes `i` and `i+1` (1-based, `n` wraps to 1)
    /// by summing their rows and columns. The merged node takes the smaller
    /// position.
    pub fn glue(&self, i: usize) -> Result<ResponseMatrix> {
        let n = self.n();
        if n < 2 || i == 0 || i > n {
            return Err(CpnError::Precondition(format!(
                "cannot glue node {i} of {n}"
            )));
        }
        let j = if i == n { 1 } else { i + 1 };
        let (keep, gone) = (i.min(j) - 1, i.max(j) - 1);
        let idx: Vec<usize> = (0..n).filter(|&k| k != gone).collect();
        let fold = |k: usize| if k == gone { keep } else { k };
        let mut out = RatMatrix::zeros(n - 1, n - 1);
        let pos: Vec<usize> = (0..n)
            .map(|k| idx.iter().position(|&x| x == fold(k)).unwrap())
            .collect();
        for a in 0..n {
            for b in 0..n {
                out[(pos[a], pos[b])] += &self.m[(a, b)];
            }
        }
        Ok(ResponseMatrix { m: out })
    }

    /// Makes node `i` internal by Schur reduction.
    pub fn internalize(&self, i: usize) -> Result<ResponseMatrix> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(CpnError::Precondition(format!("no node {i}")));
        }
        let keep: Vec<usize> = (0..n).filter(|&k| k != i - 1).collect();
        Ok(ResponseMatrix {
            m: schur_complement(&self.m, &keep)?,
        })
    }

    /// Rotates node labels so that node `i` becomes node `i - 1`.
    pub fn rotate(&self) -> ResponseMatrix {
        let n = self.n();
        ResponseMatrix {
            m: RatMatrix::from_fn(n, n, |a, b| self.m[((a + 1) % n, (b + 1) % n)].clone()),
        }
    }
}

/// Small union-find over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Joins the classes of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{effective_resistance, rat, ratio};

    fn edge(id: usize, u: usize, v: usize, c: Rat) -> Edge {
        Edge {
            id,
            u,
            v,
            conductance: c,
        }
    }

    fn single(c: i64) -> Network {
        Network::new(2, 0, vec![edge(0, 1, 2, rat(c))], vec![vec![0], vec![0]]).unwrap()
    }

    fn star(a: i64, b: i64, c: i64) -> Network {
        Network::new(
            3,
            1,
            vec![
                edge(0, 1, 4, rat(a)),
                edge(1, 2, 4, rat(b)),
                edge(2, 3, 4, rat(c)),
            ],
            vec![vec![0], vec![1], vec![2], vec![0, 1, 2]],
        )
        .unwrap()
    }

    fn triangle() -> Network {
        Network::new(
            3,
            0,
            vec![
                edge(0, 1, 2, rat(1)),
                edge(1, 2, 3, rat(1)),
                edge(2, 3, 1, rat(1)),
            ],
            vec![vec![0, 2], vec![1, 0], vec![2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            single(7).laplacian(),
            RatMatrix::from_i64(&[&[7, -7], &[-7, 7]])
        );
        let par = Network::new(
            2,
            0,
            vec![edge(0, 1, 2, rat(1)), edge(1, 1, 2, rat(2))],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert_eq!(par.laplacian(), RatMatrix::from_i64(&[&[3, -3], &[-3, 3]]));
        let lap = star(3, 3, 3).laplacian();
        assert_eq!(
            (0..4).map(|i| lap[(i, i)].clone()).collect::<Vec<_>>(),
            vec![rat(3), rat(3), rat(3), rat(9)]
        );
    }

    #[test]
    fn response_examples() {
        assert_eq!(
            single(7).response_matrix().unwrap().matrix(),
            &RatMatrix::from_i64(&[&[-7, 7], &[7, -7]])
        );
        let y = RatMatrix::from_i64(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]);
        assert_eq!(star(3, 3, 3).response_matrix().unwrap().matrix(), &y);
        let floating = Network::new(
            2,
            2,
            vec![edge(0, 1, 2, rat(1)), edge(1, 3, 4, rat(1))],
            vec![vec![0], vec![0], vec![1], vec![1]],
        )
        .unwrap();
        assert!(matches!(
            floating.response_matrix(),
            Err(CpnError::Singular(_))
        ));
    }

    #[test]
    fn rejects_bad_rotation() {
        // Node 2 lists its two edges in the wrong order for a planar disk.
        let bad = Network::new(
            3,
            1,
            vec![
                edge(0, 1, 4, rat(1)),
                edge(1, 2, 4, rat(1)),
                edge(2, 3, 4, rat(1)),
                edge(3, 1, 3, rat(1)),
            ],
            vec![vec![3, 0], vec![1], vec![3, 2], vec![0, 1, 2]],
        );
        assert!(bad.is_err());
        assert!(Network::new(2, 0, vec![edge(0, 1, 2, rat(-1))], vec![vec![0], vec![0]]).is_err());
    }

    #[test]
    fn transformations_preserve_response() {
        let y = star(3, 3, 3);
        let d = y.apply(&Transformation::YDelta { vertex: 4 }).unwrap();
        assert_eq!(d.internals(), 0);
        assert!(d.edges().iter().all(|e| e.conductance == rat(1)));
        assert_eq!(d.response_matrix().unwrap(), y.response_matrix().unwrap());
        let back = d
            .apply(&Transformation::DeltaY { edges: [0, 1, 2] })
            .unwrap();
        assert_eq!(back.edges(), y.edges());

        let y2 = star(2, 5, 7);
        let d2 = y2.apply(&Transformation::YDelta { vertex: 4 }).unwrap();
        let b2 = d2
            .apply(&Transformation::DeltaY { edges: [0, 1, 2] })
            .unwrap();
        assert_eq!(b2.response_matrix().unwrap(), y2.response_matrix().unwrap());
        for e in y2.edges() {
            assert_eq!(b2.edge(e.id).unwrap().conductance, e.conductance);
        }

        let series = Network::new(
            2,
            1,
            vec![edge(0, 1, 3, rat(2)), edge(1, 3, 2, rat(2))],
            vec![vec![0], vec![1], vec![0, 1]],
        )
        .unwrap();
        let merged = series
            .apply(&Transformation::SeriesMerge { vertex: 3 })
            .unwrap();
        assert_eq!(merged.edges(), &[edge(0, 1, 2, rat(1))]);
        assert!(series
            .apply(&Transformation::SeriesMerge { vertex: 1 })
            .is_err());
    }

    #[test]
    fn expansions_preserve_response() {
        let g = star(2, 5, 7);
        let l = g.response_matrix().unwrap();
        let moves = [
            Expansion::DeadBranch {
                vertex: 4,
                slot: 1,
                conductance: rat(3),
            },
            Expansion::DeadBranch {
                vertex: 2,
                slot: 0,
                conductance: rat(3),
            },
            Expansion::SelfLoop {
                vertex: 1,
                slot: 1,
                conductance: rat(2),
            },
            Expansion::Series {
                edge: 1,
                first: rat(9),
            },
            Expansion::Parallel {
                edge: 2,
                first: ratio(5, 2),
            },
        ];
        for x in &moves {
            let h = g.expand(x).unwrap();
            assert_eq!(h.response_matrix().unwrap(), l);
            let sites = h.transformation_sites();
            assert!(!sites.is_empty());
            for t in sites {
                assert_eq!(
                    h.apply(&t).unwrap().response_matrix().unwrap(),
                    l,
                    "{x:?} {t:?}"
                );
            }
        }
        assert!(g
            .expand(&Expansion::Series {
                edge: 1,
                first: rat(5)
            })
            .is_err());
        let t = triangle();
        assert!(t
            .transformation_sites()
            .iter()
            .any(|s| matches!(s, Transformation::DeltaY { .. })));
    }

    #[test]
    fn dual_examples() {
        let d = single(5).dual().unwrap();
        assert_eq!(d.edges().len(), 1);
        assert_eq!(d.edges()[0].conductance, ratio(1, 5));
        let t = triangle();
        let dd = t.dual().unwrap().dual().unwrap();
        assert_eq!(
            dd.response_matrix().unwrap(),
            t.response_matrix().unwrap().rotate()
        );
        let s = star(2, 3, 5);
        let sd = s.dual().unwrap();
        assert_eq!(sd.edges().len(), 3);
        assert_eq!(
            sd.dual().unwrap().response_matrix().unwrap(),
            s.response_matrix().unwrap().rotate()
        );
    }

    #[test]
    fn dual_resistance_matches_cut_sums() {
        let s = star(2, 3, 5);
        let l = s.response_matrix().unwrap();
        let ld = s.dual().unwrap().response_matrix().unwrap();
        let n = 3;
        for i in 1..=n {
            for j in i + 1..=n {
                let inside: Vec<usize> = (i + 1..=j).collect();
                let mut cut = Rat::zero();
                for &a in &inside {
                    for b in 1..=n {
                        if !inside.contains(&b) {
                            cut += l.get(a, b);
                        }
                    }
                }
                assert_eq!(
                    effective_resistance(ld.matrix(), i - 1, j - 1).unwrap(),
                    cut
                );
            }
        }
    }

    #[test]
    fn glue_and_text() {
        let l = star(3, 3, 3).response_matrix().unwrap();
        let g = l.glue(3).unwrap();
        assert_eq!(g.matrix(), &RatMatrix::from_i64(&[&[-2, 2], &[2, -2]]));
        let s = star(2, 3, 5);
        let text = s.to_text();
        assert_eq!(Network::parse(&text).unwrap(), s);
        assert!(matches!(
            Network::parse("cpn 2 0\nedge 0 1 2 x\n"),
            Err(CpnError::Parse { line: 2, .. })
        ));
    }
}
