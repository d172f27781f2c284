//! Dyck paths, cover-inclusive Dyck tilings, their bijection with strand
//! matchings, and the standard network of a matching.
//!
//! Lattice points are `(x, h)` with `0 <= x <= 2n`. A box is identified by
//! its center `(x, y)` with `x + y` odd; it spans heights `y-1..y+1` at
//! column `x`. Strands run left to right through the boxes under the upper
//! path: through a crossing box they continue diagonally, through any other
//! box they bounce.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{CpnError, Result};
use crate::exactalg::rat;
use crate::medial::StrandMatching;
use crate::network::{Edge, Network, UnionFind};

/// A step of a Dyck path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    U,
    D,
}

/// A lattice path from height 0 to height 0 that never goes below 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut h = 0i64;
        for s in &steps {
            h += if *s == Step::U { 1 } else { -1 };
            if h < 0 {
                return Err(CpnError::Invariant("Dyck path goes below zero".into()));
            }
        }
        if h != 0 {
            return Err(CpnError::Invariant(
                "Dyck path does not return to zero".into(),
            ));
        }
        Ok(DyckPath { steps })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::U),
                'D' => Ok(Step::D),
                _ => Err(CpnError::Invariant(format!("bad step `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights at lattice positions `0..=len`.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = vec![0i64];
        for s in &self.steps {
            let last = *h.last().unwrap();
            h.push(last + if *s == Step::U { 1 } else { -1 });
        }
        h
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(if *s == Step::U { "U" } else { "D" })?;
        }
        Ok(())
    }
}

/// A Dyck tile: a set of boxes forming a fattened Dyck path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckTile {
    boxes: Vec<(i64, i64)>,
}

impl DyckTile {
    pub fn new(mut boxes: Vec<(i64, i64)>) -> Self {
        boxes.sort_unstable();
        DyckTile { boxes }
    }

    /// Boxes sorted by `(x, y)`.
    pub fn boxes(&self) -> &[(i64, i64)] {
        &self.boxes
    }

    /// The leftmost box, which carries the tile's strand crossing.
    pub fn anchor(&self) -> (i64, i64) {
        self.boxes[0]
    }
}

/// A cover-inclusive Dyck tiling of the skew region between two Dyck paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyckTiling {
    lower: DyckPath,
    upper: DyckPath,
    tiles: Vec<DyckTile>,
}

impl DyckTiling {
    /// Builds a tiling after checking that the tiles exactly cover the
    /// region between `lower` and `upper`.
    pub fn new(lower: DyckPath, upper: DyckPath, mut tiles: Vec<DyckTile>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(CpnError::Invariant("paths have different lengths".into()));
        }
        let (lh, uh) = (lower.heights(), upper.heights());
        if lh.iter().zip(&uh).any(|(l, u)| l > u) {
            return Err(CpnError::Invariant(
                "lower path rises above upper path".into(),
            ));
        }
        let mut covered = BTreeSet::new();
        for t in &tiles {
            if t.boxes.is_empty() {
                return Err(CpnError::Invariant("empty tile".into()));
            }
            for &b in &t.boxes {
                if !covered.insert(b) {
                    return Err(CpnError::Invariant(format!("box {b:?} covered twice")));
                }
            }
        }
        let mut region = BTreeSet::new();
        for x in 1..lower.len() as i64 {
            let (l, u) = (lh[x as usize], uh[x as usize]);
            let mut y = l + 1;
            while y < u {
                region.insert((x, y));
                y += 2;
            }
        }
        if region != covered {
            return Err(CpnError::Invariant(
                "tiles do not partition the skew region".into(),
            ));
        }
        tiles.sort();
        Ok(DyckTiling {
            lower,
            upper,
            tiles,
        })
    }

    pub fn lower(&self) -> &DyckPath {
        &self.lower
    }

    pub fn upper(&self) -> &DyckPath {
        &self.upper
    }

    pub fn tiles(&self) -> &[DyckTile] {
        &self.tiles
    }

    /// Total number of boxes over all tiles.
    pub fn area(&self) -> usize {
        self.tiles.iter().map(|t| t.boxes.len()).sum()
    }

    /// Parses `lower <steps>`, `upper <steps>` and `tile x,y x,y ...` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lower = None;
        let mut upper = None;
        let mut tiles = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let path = |t: Option<&&str>| {
                DyckPath::parse(t.copied().unwrap_or(""))
                    .map_err(|e| CpnError::parse(ln, e.to_string()))
            };
            match toks[0] {
                "tiling" => {}
                "lower" => lower = Some(path(toks.get(1))?),
                "upper" => upper = Some(path(toks.get(1))?),
                "tile" => {
                    let mut boxes = Vec::new();
                    for t in &toks[1..] {
                        let (a, b) = t
                            .split_once(',')
                            .ok_or_else(|| CpnError::parse(ln, format!("bad box `{t}`")))?;
                        let x = a
                            .parse()
                            .map_err(|_| CpnError::parse(ln, format!("bad box `{t}`")))?;
                        let y = b
                            .parse()
                            .map_err(|_| CpnError::parse(ln, format!("bad box `{t}`")))?;
                        boxes.push((x, y));
                    }
                    tiles.push(DyckTile::new(boxes));
                }
                other => return Err(CpnError::parse(ln, format!("unknown keyword `{other}`"))),
            }
        }
        let lower = lower.ok_or_else(|| CpnError::parse(1, "missing `lower` path"))?;
        let upper = upper.ok_or_else(|| CpnError::parse(1, "missing `upper` path"))?;
        DyckTiling::new(lower, upper, tiles)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "tiling {}\nlower {}\nupper {}\n",
            self.lower.len() / 2,
            self.lower,
            self.upper
        );
        for t in &self.tiles {
            let boxes: Vec<String> = t.boxes.iter().map(|(x, y)| format!("{x},{y}")).collect();
            let _ = writeln!(out, "tile {}", boxes.join(" "));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    /// Insert an adjacent pair of stubs at positions `i, i+1`.
    Insert(usize),
    /// Cross the strands ending at positions `i, i+1`.
    Cross(usize),
}

/// Deconstructs a matching into build moves (returned in build order) by
/// repeatedly undoing the leftmost peak.
fn moves(m: &StrandMatching) -> Vec<Move> {
    let mut cur: BTreeMap<usize, usize> = (1..=2 * m.n()).map(|s| (s, m.partner(s))).collect();
    let mut size = 2 * m.n();
    let mut seq = Vec::new();
    while size > 0 {
        let i = (1..size)
            .find(|&i| cur[&i] > i && cur[&(i + 1)] < i + 1)
            .expect("a nonempty matching has a peak");
        if cur[&i] == i + 1 {
            seq.push(Move::Insert(i));
            let shift = |k: usize| if k < i { k } else { k - 2 };
            cur = cur
                .iter()
                .filter(|(&k, _)| k != i && k != i + 1)
                .map(|(&k, &v)| (shift(k), shift(v)))
                .collect();
            size -= 2;
        } else {
            seq.push(Move::Cross(i));
            let a = cur[&(i + 1)];
            let b = cur[&i];
            cur.insert(a, i);
            cur.insert(i, a);
            cur.insert(i + 1, b);
            cur.insert(b, i + 1);
        }
    }
    seq.reverse();
    seq
}

/// Runs the inductive construction: returns the upper path and the tiles.
fn build(m: &StrandMatching) -> (Vec<Step>, Vec<Vec<(i64, i64)>>) {
    let mut mu: Vec<Step> = Vec::new();
    let mut tiles: Vec<BTreeSet<(i64, i64)>> = Vec::new();
    for mv in moves(m) {
        match mv {
            Move::Insert(i) => {
                let p = i as i64 - 1;
                for t in &mut tiles {
                    let mut s = BTreeSet::new();
                    for &(x, y) in t.iter() {
                        if x < p {
                            s.insert((x, y));
                        } else if x > p {
                            s.insert((x + 2, y));
                        } else {
                            s.extend([(x, y), (x + 1, y + 1), (x + 2, y)]);
                        }
                    }
                    *t = s;
                }
                mu.splice(p as usize..p as usize, [Step::U, Step::D]);
            }
            Move::Cross(i) => {
                let h: i64 = mu[..i]
                    .iter()
                    .map(|s| if *s == Step::U { 1 } else { -1 })
                    .sum();
                debug_assert!(mu[i - 1] == Step::D && mu[i] == Step::U);
                tiles.push(BTreeSet::from([(i as i64, h + 1)]));
                mu[i - 1] = Step::U;
                mu[i] = Step::D;
            }
        }
    }
    (
        mu,
        tiles.into_iter().map(|t| t.into_iter().collect()).collect(),
    )
}

/// The Dyck tiling of a strand matching.
pub fn matching_to_tiling(m: &StrandMatching) -> DyckTiling {
    let (mu, tiles) = build(m);
    let upper = DyckPath::new(mu).expect("construction yields a Dyck path");
    let uh = upper.heights();
    let mut per_column = vec![0i64; uh.len()];
    for t in &tiles {
        for &(x, _) in t {
            per_column[x as usize] += 1;
        }
    }
    let lh: Vec<i64> = uh.iter().zip(&per_column).map(|(h, c)| h - 2 * c).collect();
    let steps = lh
        .windows(2)
        .map(|w| if w[1] > w[0] { Step::U } else { Step::D })
        .collect();
    let lower = DyckPath::new(steps).expect("lower boundary is a Dyck path");
    DyckTiling::new(lower, upper, tiles.into_iter().map(DyckTile::new).collect())
        .expect("construction is a tiling")
}

/// Traces strands through the boxes under `heights`, treating `crossings`
/// as crossing boxes. Returns the matching pairs and, per strand (keyed by
/// its starting stub), the crossing boxes it passes.
fn trace(
    heights: &[i64],
    crossings: &BTreeSet<(i64, i64)>,
) -> Vec<((usize, usize), Vec<(i64, i64)>)> {
    let len = heights.len() - 1;
    let mut out = Vec::new();
    for k in 1..=len {
        if heights[k] < heights[k - 1] {
            continue;
        }
        // Doubled coordinates of the midpoint of step k, heading down-right.
        let (mut px, mut py) = (2 * k as i64 - 1, 2 * heights[k - 1] + 1);
        let mut d = -1i64;
        let mut passed = Vec::new();
        let end = loop {
            let (cx, cy) = (px + 1, py + d);
            let (bx, by) = (cx.div_euclid(2), cy.div_euclid(2));
            if crossings.contains(&(bx, by)) {
                passed.push((bx, by));
                px += 2;
                py += 2 * d;
            } else {
                px += 2;
                d = -d;
            }
            let j = (px + 1) / 2;
            if (1..=len as i64).contains(&j) && py == heights[j as usize - 1] + heights[j as usize]
            {
                break j as usize;
            }
            assert!(px <= 2 * len as i64, "strand left the diagram");
        };
        out.push(((k, end), passed));
    }
    out
}

/// The matching of a tiling.
pub fn tiling_to_matching(t: &DyckTiling) -> StrandMatching {
    let crossings: BTreeSet<(i64, i64)> = t.tiles.iter().map(|tile| tile.anchor()).collect();
    let pairs: Vec<(usize, usize)> = trace(&t.upper.heights(), &crossings)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    StrandMatching::new(t.upper.len() / 2, &pairs).expect("strands pair every stub")
}

/// Whether the primal edge of a crossing runs left-right or up-down in the
/// rectilinear picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeOrientation {
    Horizontal,
    Vertical,
}

/// A crossing of the rectilinear strand diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub x: i64,
    pub y: i64,
    /// The two strands through the crossing, as stub pairs with the smaller
    /// stub first; the first strand is the one with the smaller start.
    pub strands: ((usize, usize), (usize, usize)),
    pub orientation: EdgeOrientation,
}

/// The rectilinear strand diagram of a matching, built from its tiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectStrandDiagram {
    n: usize,
    heights: Vec<i64>,
    crossings: Vec<Crossing>,
    index: BTreeMap<(i64, i64), usize>,
}

impl RectStrandDiagram {
    /// Builds the diagram of `m`.
    pub fn new(m: &StrandMatching) -> Self {
        let tiling = matching_to_tiling(m);
        let heights = tiling.upper.heights();
        let boxes: BTreeSet<(i64, i64)> = tiling.tiles.iter().map(|t| t.anchor()).collect();
        let mut through: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
        for (pair, passed) in trace(&heights, &boxes) {
            for b in passed {
                through.entry(b).or_default().push(pair);
            }
        }
        let crossings: Vec<Crossing> = boxes
            .iter()
            .map(|&(x, y)| {
                let s = &through[&(x, y)];
                debug_assert_eq!(s.len(), 2);
                let (a, b) = if s[0] < s[1] {
                    (s[0], s[1])
                } else {
                    (s[1], s[0])
                };
                let orientation = if x % 2 == 0 {
                    EdgeOrientation::Horizontal
                } else {
                    EdgeOrientation::Vertical
                };
                Crossing {
                    x,
                    y,
                    strands: (a, b),
                    orientation,
                }
            })
            .collect();
        let index = crossings
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.x, c.y), i))
            .collect();
        RectStrandDiagram {
            n: m.n(),
            heights,
            crossings,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Crossings sorted by `(x, y)`; the index of a crossing is the id of its
    /// edge in the standard network.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Heights of the upper path.
    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn crossing_at(&self, x: i64, y: i64) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    fn under_upper(&self, x: i64, y: i64) -> bool {
        x >= 0 && (x as usize) < self.heights.len() && y < self.heights[x as usize]
    }

    /// Follows the strand leaving crossing `start` through its upper-right
    /// edge (`rightward`) or its upper-left edge (leftward), and returns the
    /// crossings met in order.
    pub fn follow(&self, start: usize, rightward: bool) -> Vec<usize> {
        let dx = if rightward { 1 } else { -1 };
        let (mut x, mut y) = (self.crossings[start].x, self.crossings[start].y);
        let mut dy = 1;
        let mut out = Vec::new();
        loop {
            let (nx, ny) = (x + dx, y + dy);
            if !self.under_upper(nx, ny) {
                return out;
            }
            if let Some(c) = self.crossing_at(nx, ny) {
                out.push(c);
            } else {
                dy = -dy;
            }
            x = nx;
            y = ny;
        }
    }
}

/// Boundary nodes glued together by the construction (cactus degeneracy);
/// empty for a genuine standard network.
pub fn glued_nodes(m: &StrandMatching) -> Vec<Vec<usize>> {
    let d = RectStrandDiagram::new(m);
    let layout = Layout::new(&d);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in layout.node_class.iter().enumerate() {
        classes.entry(c).or_default().push(i + 1);
    }
    classes.into_values().filter(|v| v.len() > 1).collect()
}

/// Vertex classes of the standard network: primal points merged through
/// non-crossing boxes.
struct Layout {
    /// Points of each class, sorted by x (all at the same height).
    class_points: Vec<Vec<(i64, i64)>>,
    point_class: BTreeMap<(i64, i64), usize>,
    node_class: Vec<usize>,
}

impl Layout {
    fn new(d: &RectStrandDiagram) -> Self {
        let h = &d.heights;
        let len = h.len() as i64 - 1;
        let mut points = Vec::new();
        let mut x = 1;
        while x < len {
            let mut y = 1;
            while y <= h[x as usize] {
                points.push((x, y));
                y += 2;
            }
            x += 2;
        }
        let pos: BTreeMap<(i64, i64), usize> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut uf = UnionFind::new(points.len());
        for x in (2..len).step_by(2) {
            let mut y = 1;
            while y < h[x as usize] {
                if d.crossing_at(x, y).is_none() {
                    uf.union(pos[&(x - 1, y)], pos[&(x + 1, y)]);
                }
                y += 2;
            }
        }
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        let mut class_points: Vec<Vec<(i64, i64)>> = Vec::new();
        let mut point_class = BTreeMap::new();
        for (i, &p) in points.iter().enumerate() {
            let r = uf.find(i);
            let c = *roots.entry(r).or_insert_with(|| {
                class_points.push(Vec::new());
                class_points.len() - 1
            });
            class_points[c].push(p);
            point_class.insert(p, c);
        }
        let node_class = (1..=d.n as i64)
            .map(|i| point_class[&(2 * i - 1, h[(2 * i - 1) as usize])])
            .collect();
        Layout {
            class_points,
            point_class,
            node_class,
        }
    }
}

/// The standard network of `m` (unit conductances) with its diagram. Edge
/// ids are crossing indices of the diagram.
pub fn standard_network(m: &StrandMatching) -> Result<(Network, RectStrandDiagram)> {
    let d = RectStrandDiagram::new(m);
    let layout = Layout::new(&d);
    let n = d.n;
    let mut seen = BTreeSet::new();
    if layout.node_class.iter().any(|c| !seen.insert(*c)) {
        let glued = glued_nodes(m);
        let text: Vec<String> = glued
            .iter()
            .map(|g| {
                format!(
                    "{{{}}}",
                    g.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        return Err(CpnError::Precondition(format!(
            "cactus degeneration: glued nodes {}",
            text.join(" ")
        )));
    }
    // Edges: endpoints as classes.
    let ends: Vec<(usize, usize)> = d
        .crossings
        .iter()
        .map(|c| match c.orientation {
            EdgeOrientation::Horizontal => (
                layout.point_class[&(c.x - 1, c.y)],
                layout.point_class[&(c.x + 1, c.y)],
            ),
            EdgeOrientation::Vertical => (
                layout.point_class[&(c.x, c.y - 1)],
                layout.point_class[&(c.x, c.y + 1)],
            ),
        })
        .collect();
    // Number vertices: nodes first, then internal classes with edges.
    let mut label = vec![0usize; layout.class_points.len()];
    for (i, &c) in layout.node_class.iter().enumerate() {
        label[c] = i + 1;
    }
    let mut used = vec![false; layout.class_points.len()];
    for &(a, b) in &ends {
        used[a] = true;
        used[b] = true;
    }
    let mut next = n + 1;
    for c in 0..layout.class_points.len() {
        if label[c] == 0 && used[c] {
            label[c] = next;
            next += 1;
        }
    }
    let internals = next - 1 - n;
    let edges: Vec<Edge> = ends
        .iter()
        .enumerate()
        .map(|(id, &(a, b))| Edge {
            id,
            u: label[a],
            v: label[b],
            conductance: rat(1),
        })
        .collect();
    let mut rotation = vec![Vec::new(); n + internals];
    for (c, pts) in layout.class_points.iter().enumerate() {
        if label[c] == 0 {
            continue;
        }
        let y = pts[0].1;
        let (xl, xr) = (pts[0].0, pts[pts.len() - 1].0);
        let top = |x: i64| d.crossing_at(x, y + 1);
        let bottom = |x: i64| d.crossing_at(x, y - 1);
        let xs: Vec<i64> = pts.iter().map(|p| p.0).collect();
        let right_end = d.crossing_at(xr + 1, y);
        let left_end = d.crossing_at(xl - 1, y);
        let mut rot = Vec::new();
        let v = label[c];
        if v <= n {
            let xn = 2 * v as i64 - 1;
            rot.extend(xs.iter().filter(|&&x| x > xn).filter_map(|&x| top(x)));
            rot.extend(right_end);
            rot.extend(xs.iter().rev().filter_map(|&x| bottom(x)));
            rot.extend(left_end);
            rot.extend(xs.iter().filter(|&&x| x < xn).filter_map(|&x| top(x)));
        } else {
            rot.extend(right_end);
            rot.extend(xs.iter().rev().filter_map(|&x| bottom(x)));
            rot.extend(left_end);
            rot.extend(xs.iter().filter_map(|&x| top(x)));
        }
        rotation[v - 1] = rot;
    }
    let g = Network::new(n, internals, edges, rotation)?;
    Ok((g, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medial::{is_minimal, strand_matching};

    fn m(n: usize, pairs: &[(usize, usize)]) -> StrandMatching {
        StrandMatching::new(n, pairs).unwrap()
    }

    #[test]
    fn tiling_examples() {
        let t = matching_to_tiling(&m(2, &[(1, 2), (3, 4)]));
        assert_eq!(
            (
                t.lower().to_string(),
                t.upper().to_string(),
                t.tiles().len()
            ),
            ("UDUD".into(), "UDUD".into(), 0)
        );
        let t = matching_to_tiling(&m(2, &[(1, 3), (2, 4)]));
        assert_eq!(
            (t.lower().to_string(), t.upper().to_string()),
            ("UDUD".into(), "UUDD".into())
        );
        assert_eq!(t.tiles().len(), 1);
        for n in 1..=6 {
            let t = matching_to_tiling(&StrandMatching::well_connected(n));
            assert_eq!(t.lower().to_string(), "UD".repeat(n));
            assert_eq!(
                t.upper().to_string(),
                format!("{}{}", "U".repeat(n), "D".repeat(n))
            );
            assert!(t.tiles().iter().all(|x| x.boxes().len() == 1));
        }
    }

    #[test]
    fn bijection_round_trips() {
        for n in 1..=5 {
            for mm in StrandMatching::all(n) {
                let t = matching_to_tiling(&mm);
                assert_eq!(tiling_to_matching(&t), mm);
                assert_eq!(DyckTiling::parse(&t.to_text()).unwrap(), t);
                assert_eq!(t.tiles().len(), mm.crossing_count());
            }
        }
    }

    #[test]
    fn standard_networks_realize_their_matching() {
        for n in 1..=5 {
            for mm in StrandMatching::all(n) {
                match standard_network(&mm) {
                    Ok((g, d)) => {
                        assert_eq!(strand_matching(&g), mm, "{mm:?}");
                        assert!(is_minimal(&g).is_minimal());
                        assert_eq!(g.edges().len(), mm.crossing_count());
                        assert_eq!(d.crossings().len(), mm.crossing_count());
                    }
                    Err(_) => assert!(!glued_nodes(&mm).is_empty()),
                }
            }
        }
    }

    #[test]
    fn standard_examples() {
        let (g, _) = standard_network(&m(2, &[(1, 3), (2, 4)])).unwrap();
        assert_eq!(g.edges().len(), 1);
        let (g, _) = standard_network(&m(5, &[(1, 4), (2, 6), (3, 8), (5, 9), (7, 10)])).unwrap();
        assert_eq!((g.n(), g.edges().len()), (5, 7));
        for n in 2..=7 {
            let (g, _) = standard_network(&StrandMatching::well_connected(n)).unwrap();
            assert_eq!(g.edges().len(), n * (n - 1) / 2);
        }
        assert!(standard_network(&m(2, &[(1, 4), (2, 3)])).is_err());
    }
}
