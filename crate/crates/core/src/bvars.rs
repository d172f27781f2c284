//! B variables: positive values on the cells of a minimal strand
//! arrangement whose biratio across every edge is the edge's conductance,
//! and the cube recurrence relating them across Y-Δ moves.
//!
//! Cells are the vertices and the interior faces of the network. Each cell is
//! identified by its sign vector: bit `k` is set when the cell lies between
//! the two stubs of strand `k`, with strands indexed by increasing smaller
//! stub. Strands are read as chords of the boundary, oriented from the smaller
//! stub to the larger one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{CpnError, Result};
use crate::exactalg::{format_rat, Rat};
use crate::medial::{is_minimal, MedialGraph, StrandMatching};
use crate::network::{Network, Transformation};

/// Sign vector of a cell.
pub type CellSign = u64;

/// Whether a cell is a vertex or an interior face of the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Vertex,
    Face,
}

/// The cells around each edge and the strands crossing there.
#[derive(Clone, Debug)]
struct Arrangement {
    strands: Vec<(usize, usize)>,
    vertex_sign: Vec<CellSign>,
    /// Per edge position: endpoints' signs, adjacent faces' signs, and the
    /// two strands (smaller chord first).
    edge_cells: Vec<([CellSign; 2], [CellSign; 2], (usize, usize))>,
    face_signs: BTreeSet<CellSign>,
    /// Strands through the corners of each vertex and of each face.
    vertex_strands: Vec<BTreeSet<usize>>,
    face_strands: BTreeMap<CellSign, BTreeSet<usize>>,
    /// Sign of the face bounded by each set of edge ids (triangles only).
    triangle_faces: BTreeMap<Vec<usize>, CellSign>,
}

fn inside((s, t): (usize, usize), doubled_pos: usize) -> bool {
    2 * s < doubled_pos && doubled_pos < 2 * t
}

/// Sign vector of the position `doubled_pos / 2` on the boundary.
fn boundary_sign(strands: &[(usize, usize)], doubled_pos: usize) -> CellSign {
    strands
        .iter()
        .enumerate()
        .filter(|(_, &c)| inside(c, doubled_pos))
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

impl Arrangement {
    fn new(g: &Network) -> Result<Self> {
        let cert = is_minimal(g);
        if !cert.is_minimal() {
            return Err(CpnError::Precondition(format!(
                "network is not minimal: {}",
                cert.describe()
            )));
        }
        let medial = MedialGraph::new(g);
        let strand_list = medial.strands();
        if strand_list.len() > 64 {
            return Err(CpnError::Capacity("more than 64 strands".into()));
        }
        let strands: Vec<(usize, usize)> = strand_list
            .iter()
            .map(|s| {
                s.endpoints
                    .expect("minimal networks have no closed strands")
            })
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let pos: BTreeMap<usize, usize> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| (e.id, k))
            .collect();
        let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.edges().len()];
        for (k, s) in strand_list.iter().enumerate() {
            for id in &s.edges {
                through[pos[id]].push(k);
            }
        }
        // Propagate vertex signs from the nodes across edges.
        let mut vertex_sign: Vec<Option<CellSign>> = vec![None; g.vertex_count()];
        let mut queue = VecDeque::new();
        for i in 1..=g.n() {
            vertex_sign[i - 1] = Some(boundary_sign(&strands, 4 * i - 1));
            queue.push_back(i);
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
        for (k, e) in g.edges().iter().enumerate() {
            incident[e.u - 1].push(k);
            incident[e.v - 1].push(k);
        }
        while let Some(u) = queue.pop_front() {
            let su = vertex_sign[u - 1].unwrap();
            for &k in &incident[u - 1] {
                let e = &g.edges()[k];
                let w = e.other(u);
                let flip = through[k].iter().fold(0, |acc, &s| acc ^ (1u64 << s));
                let sw = su ^ flip;
                match vertex_sign[w - 1] {
                    None => {
                        vertex_sign[w - 1] = Some(sw);
                        queue.push_back(w);
                    }
                    Some(x) if x != sw => {
                        return Err(CpnError::Invariant(format!(
                            "inconsistent sign at vertex {w}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        let vertex_sign: Vec<CellSign> = vertex_sign
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    CpnError::Precondition(format!("vertex {} is not connected to a node", i + 1))
                })
            })
            .collect::<Result<_>>()?;
        // Faces through corners: crossing the corner's strand leaves the vertex.
        let map = g.augmented_map();
        let outer = map.face_of[map.outer_arc_dart(1)];
        let mut face_sign: BTreeMap<usize, CellSign> = BTreeMap::new();
        let mut vertex_strands = vec![BTreeSet::new(); g.vertex_count()];
        let mut face_strands: BTreeMap<CellSign, BTreeSet<usize>> = BTreeMap::new();
        let mut corner_strand: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, s) in strand_list.iter().enumerate() {
            for c in &s.corners {
                corner_strand.insert((c.vertex, c.position), k);
            }
        }
        for (&(v, p), &k) in &corner_strand {
            let around = &map.around[v - 1];
            let face = map.face_of[crate::network::twin(around[p])];
            let sign = vertex_sign[v - 1] ^ (1u64 << k);
            if let Some(&old) = face_sign.get(&face) {
                if old != sign {
                    return Err(CpnError::Invariant(format!(
                        "inconsistent sign on face {face}"
                    )));
                }
            }
            face_sign.insert(face, sign);
            vertex_strands[v - 1].insert(k);
            if face != outer {
                face_strands.entry(sign).or_default().insert(k);
            }
        }
        let edge_cells = g
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let faces = [
                    face_sign[&map.face_of[2 * k]],
                    face_sign[&map.face_of[2 * k + 1]],
                ];
                let (a, b) = (through[k][0], through[k][1]);
                let pair = if strands[a] < strands[b] {
                    (a, b)
                } else {
                    (b, a)
                };
                ([vertex_sign[e.u - 1], vertex_sign[e.v - 1]], faces, pair)
            })
            .collect();
        let mut triangle_faces = BTreeMap::new();
        for (fid, darts) in map.faces.iter().enumerate() {
            if fid == outer || darts.len() != 3 || darts.iter().any(|&d| map.is_arc(d)) {
                continue;
            }
            let mut ids: Vec<usize> = darts.iter().map(|&d| g.edges()[d / 2].id).collect();
            ids.sort_unstable();
            triangle_faces.insert(ids, face_sign[&fid]);
        }
        let face_signs = face_sign
            .iter()
            .filter(|(&f, _)| f != outer)
            .map(|(_, &s)| s)
            .collect();
        Ok(Arrangement {
            strands,
            vertex_sign,
            edge_cells,
            face_signs,
            vertex_strands,
            face_strands,
            triangle_faces,
        })
    }

    /// Whether `cell` lies in the left region of the crossing of strands
    /// `(a, b)`: inside the earlier chord and outside the later one.
    fn in_left_region(&self, cell: CellSign, (a, b): (usize, usize)) -> bool {
        cell >> a & 1 == 1 && cell >> b & 1 == 0
    }
}

/// The cells of the crossing of two strands of a matching that lie in its
/// left region: between the first stubs of the two chords.
pub fn left_region(
    m: &StrandMatching,
    first: (usize, usize),
    second: (usize, usize),
    cells: &[CellSign],
) -> Result<Vec<CellSign>> {
    let pairs = m.pairs();
    let a = pairs
        .iter()
        .position(|&p| p == first)
        .ok_or_else(|| CpnError::Precondition(format!("{first:?} is not a strand")))?;
    let b = pairs
        .iter()
        .position(|&p| p == second)
        .ok_or_else(|| CpnError::Precondition(format!("{second:?} is not a strand")))?;
    if !StrandMatching::chords_cross(first, second) {
        return Err(CpnError::Precondition("strands do not cross".into()));
    }
    let (a, b) = if first < second { (a, b) } else { (b, a) };
    Ok(cells
        .iter()
        .copied()
        .filter(|&c| c >> a & 1 == 1 && c >> b & 1 == 0)
        .collect())
}

/// Per-cell B values of a minimal network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BAssignment {
    strands: Vec<(usize, usize)>,
    values: BTreeMap<CellSign, (CellKind, Rat)>,
}

/// Where a cube step applies: the center cell of a Y (a degree-three vertex)
/// or of a Δ (a triangular face), and the three strands around it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeSite {
    pub center: CellSign,
    pub strands: [usize; 3],
}

impl BAssignment {
    /// Strand chords in index order.
    pub fn strands(&self) -> &[(usize, usize)] {
        &self.strands
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellSign, CellKind, &Rat)> {
        self.values.iter().map(|(&s, (k, v))| (s, *k, v))
    }

    pub fn value(&self, cell: CellSign) -> Option<&Rat> {
        self.values.get(&cell).map(|(_, v)| v)
    }

    /// Multiplies the value of every cell inside strand `k` by `factor`.
    pub fn gauge(&self, k: usize, factor: &Rat) -> BAssignment {
        let mut out = self.clone();
        for (s, (_, v)) in out.values.iter_mut() {
            if *s >> k & 1 == 1 {
                *v *= factor;
            }
        }
        out
    }

    /// `B_u B_v / (B_f B_f')` at every edge of `g`, by edge position.
    pub fn biratios(&self, g: &Network) -> Result<Vec<Rat>> {
        let arr = Arrangement::new(g)?;
        let get = |s: CellSign| {
            self.value(s)
                .cloned()
                .ok_or_else(|| CpnError::Precondition(format!("no B value for cell {s:#b}")))
        };
        arr.edge_cells
            .iter()
            .map(|(v, f, _)| Ok(get(v[0])? * get(v[1])? / (get(f[0])? * get(f[1])?)))
            .collect()
    }

    /// The cube recurrence at `site`: the center value `B_0` is replaced by
    /// `B_7 = (B_1 B_4 + B_2 B_5 + B_3 B_6) / B_0` on the opposite cell, where
    /// each `B_i` across one strand is paired with the cell across the other
    /// two.
    pub fn cube_step(&self, site: &CubeSite) -> Result<BAssignment> {
        let s0 = site.center;
        let [i, j, k] = site.strands.map(|s| 1u64 << s);
        let get = |s: CellSign| {
            self.value(s)
                .cloned()
                .ok_or_else(|| CpnError::Precondition(format!("site has no cell {s:#b}")))
        };
        let b0 = get(s0)?;
        let mut sum = Rat::zero();
        for (a, bc) in [(i, j ^ k), (j, i ^ k), (k, i ^ j)] {
            sum += get(s0 ^ a)? * get(s0 ^ bc)?;
        }
        let (kind, _) = self.values[&s0];
        let new_kind = match kind {
            CellKind::Face => CellKind::Vertex,
            CellKind::Vertex => CellKind::Face,
        };
        let mut out = self.clone();
        out.values.remove(&s0);
        let s7 = s0 ^ i ^ j ^ k;
        if out.values.contains_key(&s7) {
            return Err(CpnError::Precondition(
                "opposite cell already exists".into(),
            ));
        }
        out.values.insert(s7, (new_kind, sum / b0));
        Ok(out)
    }

    /// Text dump: one line per cell with its sign vector, kind and value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.strands.len();
        for (&s, (kind, v)) in &self.values {
            let bits: String = (0..width)
                .map(|k| if s >> k & 1 == 1 { '1' } else { '0' })
                .collect();
            let kind = match kind {
                CellKind::Vertex => "vertex",
                CellKind::Face => "face",
            };
            let _ = writeln!(out, "cell {bits} {kind}: {}", format_rat(v));
        }
        out
    }
}

/// The B variables of a minimal network: each cell gets the product of the
/// horizontal conductances of the crossings whose left region contains it.
/// The horizontal conductance of an edge is its conductance when the left
/// cell of its crossing is a vertex, and the reciprocal otherwise.
pub fn b_assignment(g: &Network) -> Result<BAssignment> {
    let arr = Arrangement::new(g)?;
    let mut cells: BTreeMap<CellSign, CellKind> = BTreeMap::new();
    for &s in &arr.vertex_sign {
        cells.insert(s, CellKind::Vertex);
    }
    for &s in &arr.face_signs {
        cells.insert(s, CellKind::Face);
    }
    let horizontal: Vec<(Rat, (usize, usize))> = g
        .edges()
        .iter()
        .zip(&arr.edge_cells)
        .map(|(e, (v, _, pair))| {
            let left_is_vertex = v.iter().any(|&s| arr.in_left_region(s, *pair));
            let h = if left_is_vertex {
                e.conductance.clone()
            } else {
                Rat::one() / &e.conductance
            };
            (h, *pair)
        })
        .collect();
    let values = cells
        .into_iter()
        .map(|(s, kind)| {
            let v = horizontal
                .iter()
                .filter(|(_, p)| arr.in_left_region(s, *p))
                .fold(Rat::one(), |acc, (h, _)| acc * h);
            (s, (kind, v))
        })
        .collect();
    Ok(BAssignment {
        strands: arr.strands,
        values,
    })
}

/// The cube site of a Y-Δ or Δ-Y transformation of `g`.
pub fn cube_site(g: &Network, t: &Transformation) -> Result<CubeSite> {
    let arr = Arrangement::new(g)?;
    let (center, strands) = match t {
        Transformation::YDelta { vertex } => {
            if *vertex <= g.n() || *vertex > g.vertex_count() || g.degree(*vertex) != 3 {
                return Err(CpnError::Precondition(format!(
                    "vertex {vertex} is not an internal degree-three vertex"
                )));
            }
            (
                arr.vertex_sign[vertex - 1],
                arr.vertex_strands[vertex - 1].clone(),
            )
        }
        Transformation::DeltaY { edges } => {
            let mut ids = edges.to_vec();
            ids.sort_unstable();
            let s = *arr.triangle_faces.get(&ids).ok_or_else(|| {
                CpnError::Precondition(format!("edges {edges:?} do not bound a triangular face"))
            })?;
            (s, arr.face_strands[&s].clone())
        }
        _ => {
            return Err(CpnError::Precondition(
                "cube steps apply only to Y-Δ and Δ-Y moves".into(),
            ))
        }
    };
    let strands: Vec<usize> = strands.into_iter().collect();
    let strands: [usize; 3] = strands
        .try_into()
        .map_err(|_| CpnError::Precondition("site is not surrounded by three strands".into()))?;
    Ok(CubeSite { center, strands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyck::standard_network;
    use crate::exactalg::{rat, ratio};
    use crate::network::Edge;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn conductances(g: &Network) -> Vec<Rat> {
        g.edges().iter().map(|e| e.conductance.clone()).collect()
    }

    #[test]
    fn single_edge() {
        let g = Network::new(
            2,
            0,
            vec![Edge {
                id: 0,
                u: 1,
                v: 2,
                conductance: rat(5),
            }],
            vec![vec![0], vec![0]],
        )
        .unwrap();
        let b = b_assignment(&g).unwrap();
        assert_eq!(b.biratios(&g).unwrap(), vec![rat(5)]);
        assert!(b.cells().any(|(_, _, v)| v.is_one()));
    }

    #[test]
    fn biratio_on_standard_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..=5 {
            for m in StrandMatching::all(n) {
                let Ok((g, _)) = standard_network(&m) else {
                    continue;
                };
                let g = g
                    .with_conductances(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=9)))
                    .unwrap();
                let b = b_assignment(&g).unwrap();
                assert_eq!(b.biratios(&g).unwrap(), conductances(&g), "{m:?}");
                let gauged = b.gauge(0, &ratio(7, 3));
                assert_eq!(gauged.biratios(&g).unwrap(), conductances(&g));
            }
        }
    }

    #[test]
    fn cube_recurrence_follows_y_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut checked = 0;
        for m in StrandMatching::all(5) {
            let Ok((g, _)) = standard_network(&m) else {
                continue;
            };
            let g = g
                .with_conductances(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=9)))
                .unwrap();
            for v in g.n() + 1..=g.vertex_count() {
                if g.degree(v) != 3 {
                    continue;
                }
                let t = Transformation::YDelta { vertex: v };
                let Ok(h) = g.apply(&t) else { continue };
                let b = b_assignment(&g).unwrap();
                let site = cube_site(&g, &t).unwrap();
                let stepped = b.cube_step(&site).unwrap();
                assert_eq!(stepped.biratios(&h).unwrap(), conductances(&h));
                assert_eq!(
                    stepped
                        .cube_step(&CubeSite {
                            center: site.center ^ site.strands.iter().fold(0, |a, &s| a ^ 1 << s),
                            ..site
                        })
                        .unwrap(),
                    b
                );
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn cube_step_on_unit_values() {
        let strands = vec![(1, 4), (2, 5), (3, 6)];
        let mut values = BTreeMap::new();
        for s in 0u64..8 {
            if s != 7 {
                values.insert(s, (CellKind::Face, rat(1)));
            }
        }
        let b = BAssignment { strands, values };
        let out = b
            .cube_step(&CubeSite {
                center: 0,
                strands: [0, 1, 2],
            })
            .unwrap();
        assert_eq!(out.value(7), Some(&rat(3)));
    }
}
