//! Contiguous, central and noninterlaced minors; truncated Aztec diamond
//! Laurent polynomials in the central minors; the Desnanot-Jacobi and jaw
//! identities; and the well-connectedness test by small central minors.
//!
//! Indices are 1-based and read modulo `n` with residue 0 mapped to `n`.
//! Contiguous minors list rows ascending and columns descending, which makes
//! every such minor of a well-connected response matrix positive.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{CpnError, Result};
use crate::exactalg::{det, Rat, RatMatrix};
use crate::network::ResponseMatrix;

fn wrap(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

/// Determinant of the submatrix with the given 1-based rows and columns,
/// in the order given.
pub fn minor(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> Result<Rat> {
    if rows.len() != cols.len() {
        return Err(CpnError::Dimension(
            "minor needs as many rows as columns".into(),
        ));
    }
    if rows
        .iter()
        .chain(cols)
        .any(|&i| i == 0 || i > m.rows().max(m.cols()))
    {
        return Err(CpnError::Precondition("minor index out of range".into()));
    }
    let r: Vec<usize> = rows.iter().map(|i| i - 1).collect();
    let c: Vec<usize> = cols.iter().map(|i| i - 1).collect();
    det(&m.submatrix(&r, &c))
}

/// Rows and columns of the contiguous minor `CM_{a,b,y}`.
pub fn contiguous_indices(n: usize, a: i64, b: i64, y: usize) -> (Vec<usize>, Vec<usize>) {
    let rows = (0..y as i64).map(|i| wrap(a + i, n)).collect();
    let cols = (0..y as i64)
        .map(|i| wrap(b + y as i64 - 1 - i, n))
        .collect();
    (rows, cols)
}

/// `CM_{a,b,y}`: rows `a..a+y-1` ascending, columns `b+y-1..b` descending.
pub fn contiguous_minor(m: &RatMatrix, a: i64, b: i64, y: usize) -> Result<Rat> {
    let n = m.rows();
    if y > n {
        return Err(CpnError::Precondition(format!(
            "minor size {y} exceeds {n}"
        )));
    }
    let (rows, cols) = contiguous_indices(n, a, b, y);
    minor(m, &rows, &cols)
}

/// Indices `(a, b)` of the central minor at `(x, y)`.
pub fn central_indices(n: usize, x: i64, y: i64) -> (i64, i64) {
    let c = n as i64 - ((n as i64 - 1) % 2);
    ((x - y).div_euclid(2), (x - y + c).div_euclid(2))
}

/// The central minor `CM_{x,y}`.
pub fn central_minor(m: &RatMatrix, x: i64, y: usize) -> Result<Rat> {
    let (a, b) = central_indices(m.rows(), x, y as i64);
    contiguous_minor(m, a, b, y)
}

/// A labeled small central minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMinor {
    pub x: i64,
    pub y: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Rat,
}

/// Positions `(x, y)` of the small central minors: `y < n/2` for every `x`,
/// and `y = n/2` when `x + y` is odd, with `x` in `1..=n` for symmetric
/// matrices and `1..=2n` otherwise.
pub fn small_central_positions(n: usize, symmetric: bool) -> Vec<(i64, usize)> {
    let xmax = if symmetric { n } else { 2 * n } as i64;
    let mut out = Vec::new();
    for y in 1..=n / 2 {
        for x in 1..=xmax {
            if 2 * y < n || (x + y as i64) % 2 == 1 {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn small_central_minors(m: &RatMatrix, symmetric: bool) -> Result<Vec<LabeledMinor>> {
    let n = m.rows();
    small_central_positions(n, symmetric)
        .into_iter()
        .map(|(x, y)| {
            let (a, b) = central_indices(n, x, y as i64);
            let (rows, cols) = contiguous_indices(n, a, b, y);
            let value = minor(m, &rows, &cols)?;
            Ok(LabeledMinor {
                x,
                y,
                rows,
                cols,
                value,
            })
        })
        .collect()
}

/// Verdict of the small-central-minor test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellConnectedness {
    pub well_connected: bool,
    /// The first nonpositive small central minor, if any.
    pub witness: Option<LabeledMinor>,
    pub minors: Vec<LabeledMinor>,
}

/// A response matrix comes from a well-connected network exactly when all
/// its small central minors are positive.
pub fn is_well_connected(l: &ResponseMatrix) -> Result<WellConnectedness> {
    let minors = small_central_minors(l.matrix(), true)?;
    let witness = minors.iter().find(|m| m.value <= Rat::zero()).cloned();
    Ok(WellConnectedness {
        well_connected: witness.is_none(),
        witness,
        minors,
    })
}

/// Orders a noninterlaced pair of node sets: rows ascending and columns
/// descending along the circle, read from a start where every row precedes
/// every column. Returns `None` when the sets interlace.
pub fn noninterlaced_order(
    n: usize,
    rows: &[usize],
    cols: &[usize],
) -> Option<(Vec<usize>, Vec<usize>)> {
    if rows.len() != cols.len() || rows.iter().any(|r| cols.contains(r)) {
        return None;
    }
    if rows.is_empty() {
        return Some((Vec::new(), Vec::new()));
    }
    for &start in rows {
        let key = |v: usize| (v + n - start) % n;
        let last_row = rows.iter().map(|&v| key(v)).max().unwrap();
        let first_col = cols.iter().map(|&v| key(v)).min().unwrap();
        if last_row < first_col {
            let mut r = rows.to_vec();
            r.sort_by_key(|&v| key(v));
            let mut c = cols.to_vec();
            c.sort_by_key(|&v| std::cmp::Reverse(key(v)));
            return Some((r, c));
        }
    }
    None
}

/// The noninterlaced minor of `m` on the given node sets.
pub fn noninterlaced_minor(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> Result<Rat> {
    let (r, c) = noninterlaced_order(m.rows(), rows, cols)
        .ok_or_else(|| CpnError::Precondition("index sets interlace".into()))?;
    minor(m, &r, &c)
}

fn without(all: &[usize], drop: &[usize]) -> Vec<usize> {
    all.iter().copied().filter(|i| !drop.contains(i)).collect()
}

/// Both sides of Desnanot-Jacobi for rows `a < b` and columns `c < d` of a
/// square matrix (1-based):
/// `det M_a^c det M_b^d = det M det M_{ab}^{cd} + det M_b^c det M_a^d`, where
/// sub- and superscripts are deleted rows and columns.
pub fn desnanot_jacobi(
    m: &RatMatrix,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<(Rat, Rat)> {
    let n = m.rows();
    if !m.is_square() || !(1 <= a && a < b && b <= n && 1 <= c && c < d && d <= n) {
        return Err(CpnError::Precondition(
            "Desnanot-Jacobi needs rows a < b and columns c < d".into(),
        ));
    }
    let all: Vec<usize> = (1..=n).collect();
    let del = |rows: &[usize], cols: &[usize]| minor(m, &without(&all, rows), &without(&all, cols));
    let lhs = del(&[a], &[c])? * del(&[b], &[d])?;
    let rhs = del(&[], &[])? * del(&[a, b], &[c, d])? + del(&[b], &[c])? * del(&[a], &[d])?;
    Ok((lhs, rhs))
}

/// Both sides of the jaw identity for a `(p+1) x p` matrix, rows
/// `a < b < c` and column `d` (1-based):
/// `det M_b det M_{ac}^d = det M_a det M_{bc}^d + det M_c det M_{ab}^d`.
pub fn jaw_identity(m: &RatMatrix, a: usize, b: usize, c: usize, d: usize) -> Result<(Rat, Rat)> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows != cols + 1 || !(1 <= a && a < b && b < c && c <= rows) || d == 0 || d > cols {
        return Err(CpnError::Precondition(
            "jaw move needs a (p+1) x p matrix, rows a < b < c and a column d".into(),
        ));
    }
    let all_r: Vec<usize> = (1..=rows).collect();
    let all_c: Vec<usize> = (1..=cols).collect();
    let del = |r: &[usize], c: &[usize]| -> Result<Rat> {
        let rr: Vec<usize> = without(&all_r, r).iter().map(|i| i - 1).collect();
        let cc: Vec<usize> = without(&all_c, c).iter().map(|i| i - 1).collect();
        det(&m.submatrix(&rr, &cc))
    };
    let lhs = del(&[b], &[])? * del(&[a, c], &[d])?;
    let rhs = del(&[a], &[])? * del(&[b, c], &[d])? + del(&[c], &[])? * del(&[a, b], &[d])?;
    Ok((lhs, rhs))
}

/// A noninterlaced minor rewritten by jaw moves as a subtraction-free
/// rational expression in contiguous minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorExpr {
    /// A minor whose rows and columns are both circular intervals (rows
    /// ascending, columns descending).
    Contiguous { rows: Vec<usize>, cols: Vec<usize> },
    /// `(p1 * q1 + p2 * q2) / den`.
    Jaw {
        p1: Box<MinorExpr>,
        q1: Box<MinorExpr>,
        p2: Box<MinorExpr>,
        q2: Box<MinorExpr>,
        den: Box<MinorExpr>,
    },
}

impl MinorExpr {
    pub fn eval(&self, m: &RatMatrix) -> Result<Rat> {
        match self {
            MinorExpr::Contiguous { rows, cols } => minor(m, rows, cols),
            MinorExpr::Jaw {
                p1,
                q1,
                p2,
                q2,
                den,
            } => {
                let d = den.eval(m)?;
                if d.is_zero() {
                    return Err(CpnError::Singular(
                        "zero denominator in a jaw rewrite".into(),
                    ));
                }
                Ok((p1.eval(m)? * q1.eval(m)? + p2.eval(m)? * q2.eval(m)?) / d)
            }
        }
    }

    /// Number of contiguous minors at the leaves.
    pub fn leaves(&self) -> usize {
        match self {
            MinorExpr::Contiguous { .. } => 1,
            MinorExpr::Jaw {
                p1,
                q1,
                p2,
                q2,
                den,
            } => p1.leaves() + q1.leaves() + p2.leaves() + q2.leaves() + den.leaves(),
        }
    }
}

/// Position of `v` along the circle read from `start`.
fn circ(v: usize, start: usize, n: usize) -> usize {
    (v + n - start) % n
}

/// First element of `set` (in list order) followed by a gap, i.e. the next
/// position along the list direction is missing from `set`.
fn gap_after(set: &[usize], start: usize, n: usize, descending: bool) -> Option<usize> {
    for w in set.windows(2) {
        let (p, q) = (circ(w[0], start, n), circ(w[1], start, n));
        let step = if descending { p - q } else { q - p };
        if step > 1 {
            let g = if descending { p - 1 } else { p + 1 };
            return Some((g + start - 1) % n + 1);
        }
    }
    None
}

/// Rewrites a noninterlaced minor (rows ascending, columns descending, as
/// returned by [`noninterlaced_order`]) into contiguous minors. A gap in the
/// columns is filled by a jaw move on the matrix with one extra column whose
/// outer columns and an outer row are deleted; gaps in the rows are handled
/// symmetrically. Every generated minor is again noninterlaced.
pub fn jaw_rewrite(n: usize, rows: &[usize], cols: &[usize]) -> Result<MinorExpr> {
    let (rows, cols) = noninterlaced_order(n, rows, cols)
        .ok_or_else(|| CpnError::Precondition("index sets interlace".into()))?;
    Ok(rewrite(n, &rows, &cols))
}

fn rewrite(n: usize, rows: &[usize], cols: &[usize]) -> MinorExpr {
    let p = rows.len();
    if p == 0 {
        return MinorExpr::Contiguous {
            rows: Vec::new(),
            cols: Vec::new(),
        };
    }
    let start = rows[0];
    let leaf = || MinorExpr::Contiguous {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
    };
    let node = |r: &[usize], c: &[usize]| Box::new(rewrite(n, r, c));
    if let Some(g) = gap_after(cols, start, n, true) {
        // Columns c_1 > ... with g inserted in order; delete the first or last.
        let mut ext = cols.to_vec();
        let at = ext
            .iter()
            .position(|&v| circ(v, start, n) < circ(g, start, n))
            .unwrap();
        ext.insert(at, g);
        let (a, c) = (ext[0], *ext.last().unwrap());
        let d = rows[p - 1];
        let r_d = without(rows, &[d]);
        return MinorExpr::Jaw {
            p1: node(rows, &without(&ext, &[a])),
            q1: node(&r_d, &without(&ext, &[g, c])),
            p2: node(rows, &without(&ext, &[c])),
            q2: node(&r_d, &without(&ext, &[a, g])),
            den: node(&r_d, &without(&ext, &[a, c])),
        };
    }
    if let Some(g) = gap_after(rows, start, n, false) {
        let mut ext = rows.to_vec();
        let at = ext
            .iter()
            .position(|&v| circ(v, start, n) > circ(g, start, n))
            .unwrap();
        ext.insert(at, g);
        let (a, c) = (ext[0], *ext.last().unwrap());
        let d = cols[0];
        let c_d = without(cols, &[d]);
        return MinorExpr::Jaw {
            p1: node(&without(&ext, &[a]), cols),
            q1: node(&without(&ext, &[g, c]), &c_d),
            p2: node(&without(&ext, &[c]), cols),
            q2: node(&without(&ext, &[a, g]), &c_d),
            den: node(&without(&ext, &[a, c]), &c_d),
        };
    }
    leaf()
}

/// A monomial in the central-minor variables `v[x,y]` with exponents.
pub type Monomial = Vec<((i64, i64), i32)>;

/// A Laurent polynomial with positive integer coefficients in the variables
/// `v[x,y]`. Variables with `y = 0` are empty minors and are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, u64>,
}

fn normalize(mut exps: BTreeMap<(i64, i64), i32>) -> Monomial {
    exps.retain(|&(_, y), e| *e != 0 && y != 0);
    exps.into_iter().collect()
}

impl LaurentPoly {
    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        *self.terms.entry(m).or_insert(0) += c;
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let mut e: BTreeMap<(i64, i64), i32> = m1.iter().copied().collect();
                for &(v, k) in m2 {
                    *e.entry(v).or_insert(0) += k;
                }
                out.add_term(normalize(e), c1 * c2);
            }
        }
        out
    }

    /// Evaluates with `v[x,y] := value(x, y)`.
    pub fn evaluate(&self, mut value: impl FnMut(i64, i64) -> Result<Rat>) -> Result<Rat> {
        let mut total = Rat::zero();
        for (m, &c) in &self.terms {
            let mut t = Rat::from_integer(c.into());
            for &((x, y), e) in m {
                let v = value(x, y)?;
                if e < 0 && v.is_zero() {
                    return Err(CpnError::ZeroVariable { x, y });
                }
                for _ in 0..e.abs() {
                    if e > 0 {
                        t *= &v;
                    } else {
                        t /= &v;
                    }
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Canonical text: terms in sorted order joined by ` + `.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut factors: Vec<String> = Vec::new();
                if c != 1 || m.is_empty() {
                    factors.push(c.to_string());
                }
                for &((x, y), e) in m {
                    factors.push(if e == 1 {
                        format!("v[{x},{y}]")
                    } else {
                        format!("v[{x},{y}]^{e}")
                    });
                }
                factors.join("*")
            })
            .collect();
        terms.join(" + ")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A domino: its lower-left square and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Domino {
    pub x: i64,
    pub y: i64,
    pub horizontal: bool,
}

/// The Aztec diamond of order `l` centered at `(x0, y0)`, truncated to the
/// band of squares with `0 <= y <= n - 1` (so its lattice points have
/// `0 <= y <= n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TadRegion {
    pub x0: i64,
    pub y0: i64,
    pub l: i64,
    pub n: usize,
}

impl TadRegion {
    pub fn new(x0: i64, y0: i64, l: i64, n: usize) -> Result<Self> {
        if l < 0 || y0 < 0 || y0 > n as i64 {
            return Err(CpnError::Precondition(
                "region needs l >= 0 and 0 <= y0 <= n".into(),
            ));
        }
        Ok(TadRegion { x0, y0, l, n })
    }

    /// Unit squares by lower-left corner, sorted by `(y, x)`.
    pub fn squares(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for y in (self.y0 - self.l - 1).max(0)..=(self.y0 + self.l).min(self.n as i64 - 1) {
            for x in self.x0 - self.l - 1..=self.x0 + self.l {
                // |x + 1/2 - x0| + |y + 1/2 - y0| <= l, doubled.
                if (2 * x + 1 - 2 * self.x0).abs() + (2 * y + 1 - 2 * self.y0).abs() <= 2 * self.l {
                    out.push((x, y));
                }
            }
        }
        out.sort_by_key(|&(x, y)| (y, x));
        out
    }

    /// Every domino tiling, in a deterministic order.
    pub fn tilings(&self) -> Vec<Vec<Domino>> {
        let squares = self.squares();
        let mut free: std::collections::BTreeSet<(i64, i64)> =
            squares.iter().map(|&(x, y)| (y, x)).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            free: &mut std::collections::BTreeSet<(i64, i64)>,
            cur: &mut Vec<Domino>,
            out: &mut Vec<Vec<Domino>>,
        ) {
            let Some(&(y, x)) = free.iter().next() else {
                out.push(cur.clone());
                return;
            };
            for (other, horizontal) in [((y, x + 1), true), ((y + 1, x), false)] {
                if free.contains(&other) {
                    free.remove(&(y, x));
                    free.remove(&other);
                    cur.push(Domino { x, y, horizontal });
                    rec(free, cur, out);
                    cur.pop();
                    free.insert((y, x));
                    free.insert(other);
                }
            }
        }
        rec(&mut free, &mut cur, &mut out);
        out
    }

    /// Lattice points of the diamond inside the band: the monomial factor.
    fn monomial(&self) -> BTreeMap<(i64, i64), i32> {
        let mut e = BTreeMap::new();
        for y in (self.y0 - self.l).max(0)..=(self.y0 + self.l).min(self.n as i64) {
            for x in self.x0 - self.l..=self.x0 + self.l {
                if (x - self.x0).abs() + (y - self.y0).abs() <= self.l {
                    *e.entry((x, y)).or_insert(0) += 1;
                }
            }
        }
        e
    }

    /// The weighted tiling sum times the monomial factor. A horizontal domino
    /// on `(x,y),(x+1,y)` weighs `1/(v[x+1,y] v[x+1,y+1])`; a vertical one on
    /// `(x,y),(x,y+1)` weighs `1/(v[x,y+1] v[x+1,y+1])`.
    pub fn laurent(&self) -> LaurentPoly {
        let base = self.monomial();
        let mut poly = LaurentPoly::default();
        for t in self.tilings() {
            let mut e = base.clone();
            for d in &t {
                let (p, q) = if d.horizontal {
                    ((d.x + 1, d.y), (d.x + 1, d.y + 1))
                } else {
                    ((d.x, d.y + 1), (d.x + 1, d.y + 1))
                };
                *e.entry(p).or_insert(0) -= 1;
                *e.entry(q).or_insert(0) -= 1;
            }
            poly.add_term(normalize(e), 1);
        }
        poly
    }

    /// The contiguous minor `(a, b, y)` the region evaluates to: the row set
    /// of one extreme central minor with the column set of the other.
    pub fn target(&self) -> (usize, usize, usize) {
        let n = self.n;
        let y = self.y0;
        let (ar, br) = central_indices(n, self.x0 + self.l, y);
        let (al, bl) = central_indices(n, self.x0 - self.l, y);
        let (a, b) = if self.l == 0 {
            (ar, br)
        } else if ar != central_indices(n, self.x0 + self.l - 1, y).0 {
            (ar, bl)
        } else {
            (al, br)
        };
        (wrap(a, n), wrap(b, n), y as usize)
    }
}

/// The region of least order whose Laurent polynomial gives `CM_{a,b,y}`.
pub fn locate_region(n: usize, a: usize, b: usize, y: usize) -> Option<TadRegion> {
    let (a, b) = (wrap(a as i64, n), wrap(b as i64, n));
    for l in 0..n as i64 {
        for x0 in 0..2 * n as i64 {
            let r = TadRegion {
                x0,
                y0: y as i64,
                l,
                n,
            };
            if r.target() == (a, b, y) {
                return Some(r);
            }
        }
    }
    None
}

/// Evaluates the region's Laurent polynomial at the central minors of `m`.
pub fn evaluate_tad(m: &RatMatrix, r: &TadRegion) -> Result<Rat> {
    if m.rows() != r.n {
        return Err(CpnError::Dimension("region and matrix sizes differ".into()));
    }
    let mut cache: BTreeMap<(i64, i64), Rat> = BTreeMap::new();
    r.laurent().evaluate(|x, y| {
        if let Some(v) = cache.get(&(x, y)) {
            return Ok(v.clone());
        }
        let v = central_minor(m, x, y as usize)?;
        cache.insert((x, y), v.clone());
        Ok(v)
    })
}

/// The Kuo condensation relation between regions, as Laurent polynomials:
/// returns both sides of
/// `P(x,y,l) P(x,y,l-2) = P(x,y+1,l-1) P(x,y-1,l-1) + P(x-1,y,l-1) P(x+1,y,l-1)`.
pub fn kuo_sides(x: i64, y: i64, l: i64, n: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    if l < 2 || y < 1 || y + l > n as i64 {
        return Err(CpnError::Precondition(
            "Kuo relation needs l >= 2, y >= 1 and y + l <= n".into(),
        ));
    }
    let p = |x, y, l| TadRegion { x0: x, y0: y, l, n }.laurent();
    let lhs = p(x, y, l).mul(&p(x, y, l - 2));
    let rhs = p(x, y + 1, l - 1)
        .mul(&p(x, y - 1, l - 1))
        .add(&p(x - 1, y, l - 1).mul(&p(x + 1, y, l - 1)));
    Ok((lhs, rhs))
}

/// Whether the contiguous minor's row and column sets are disjoint.
pub fn contiguous_disjoint(n: usize, a: usize, b: usize, y: usize) -> bool {
    let (rows, cols) = contiguous_indices(n, a as i64, b as i64, y);
    rows.iter().all(|r| !cols.contains(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};
    use proptest::prelude::*;

    fn random_matrix(n: usize, seed: u64, symmetric: bool) -> RatMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        let m = RatMatrix::from_fn(n, n, |_, _| {
            ratio(
                (next() % 30 + 1) * if next() % 2 == 0 { 1 } else { -1 },
                next() % 7 + 1,
            )
        });
        if symmetric {
            RatMatrix::from_fn(n, n, |i, j| m[(i.min(j), i.max(j))].clone())
        } else {
            m
        }
    }

    #[test]
    fn central_examples() {
        let m = RatMatrix::from_fn(7, 7, |i, j| rat(10 * (i as i64 + 1) + j as i64 + 1));
        assert_eq!(central_minor(&m, 1, 1).unwrap(), rat(73));
        assert_eq!(contiguous_minor(&m, 7, 3, 1).unwrap(), rat(73));
        assert_eq!(central_minor(&m, 4, 0).unwrap(), rat(1));
        assert_eq!(small_central_positions(6, true).len(), 15);
        assert_eq!(small_central_positions(7, true).len(), 21);
        for n in 2..=9 {
            assert_eq!(small_central_positions(n, true).len(), n * (n - 1) / 2);
            assert_eq!(small_central_positions(n, false).len(), n * (n - 1));
        }
    }

    #[test]
    fn tad_examples() {
        let r = TadRegion::new(1, 1, 0, 7).unwrap();
        assert_eq!(r.laurent().to_text(), "v[1,1]");
        let r = TadRegion::new(2, 1, 1, 7).unwrap();
        assert_eq!(r.target(), (1, 3, 1));
        assert_eq!(r.laurent().terms().len(), 2);
        assert_eq!(
            r.laurent().to_text(),
            "v[1,1]*v[2,1]^-1*v[3,1] + v[2,1]^-1*v[2,2]"
        );
        for l in 0..=5 {
            let r = TadRegion::new(0, l + 1, l, 2 * l as usize + 2).unwrap();
            assert_eq!(r.tilings().len(), 1 << (l * (l + 1) / 2));
        }
    }

    #[test]
    fn domino_regions_match_determinants() {
        for n in 5..=7 {
            for symmetric in [true, false] {
                let m = random_matrix(n, 7 + n as u64, symmetric);
                for y in 1..=n / 2 {
                    for a in 1..=n {
                        for b in 1..=n {
                            if !contiguous_disjoint(n, a, b, y) {
                                continue;
                            }
                            let r = locate_region(n, a, b, y).unwrap();
                            assert!(r.l as usize <= n / 2 - y);
                            assert_eq!(
                                evaluate_tad(&m, &r).unwrap(),
                                contiguous_minor(&m, a as i64, b as i64, y).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kuo_relation() {
        for n in 4..=6 {
            for x in 1..=2 * n as i64 {
                for y in 1..n as i64 {
                    for l in 2..=4 {
                        if let Ok((lhs, rhs)) = kuo_sides(x, y, l, n) {
                            assert_eq!(lhs, rhs, "{x} {y} {l} {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn well_connected_examples() {
        let tri = ResponseMatrix::new(RatMatrix::from_i64(&[
            &[-2, 1, 1],
            &[1, -2, 1],
            &[1, 1, -2],
        ]))
        .unwrap();
        let v = is_well_connected(&tri).unwrap();
        assert!(v.well_connected);
        assert_eq!(v.minors.len(), 3);
        let edge =
            ResponseMatrix::new(RatMatrix::from_i64(&[&[-1, 1, 0], &[1, -1, 0], &[0, 0, 0]]))
                .unwrap();
        assert!(!is_well_connected(&edge).unwrap().well_connected);
    }

    #[test]
    fn off_center_condensation() {
        let m = random_matrix(8, 3, true);
        let mm = |r: &[usize], c: &[usize]| minor(&m, r, c).unwrap();
        let lhs = mm(&[1, 2], &[7, 6]);
        let rhs = (mm(&[1, 2], &[6, 5]) * mm(&[2, 3], &[7, 6])
            + mm(&[2], &[6]) * mm(&[1, 2, 3], &[7, 6, 5]))
            / mm(&[2, 3], &[6, 5]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn jaw_rewrites_match_determinants() {
        let m = random_matrix(7, 5, true);
        let cases: [(&[usize], &[usize]); 4] = [
            (&[1, 3], &[7, 5]),
            (&[1, 2, 4], &[7, 6, 5]),
            (&[2, 4], &[7, 5]),
            (&[1], &[4]),
        ];
        for (r, c) in cases {
            let e = jaw_rewrite(7, r, c).unwrap();
            assert_eq!(e.eval(&m).unwrap(), noninterlaced_minor(&m, r, c).unwrap());
        }
        assert!(jaw_rewrite(7, &[1, 3], &[2, 4]).is_err());
    }

    #[test]
    fn jaw_rewrites_every_noninterlaced_pair() {
        let n = 7;
        let m = random_matrix(n, 11, false);
        let mut checked = 0;
        for mask_r in 1u32..(1 << n) {
            for mask_c in 1u32..(1 << n) {
                if mask_r & mask_c != 0
                    || mask_r.count_ones() != mask_c.count_ones()
                    || mask_r.count_ones() > 3
                {
                    continue;
                }
                let r: Vec<usize> = (1..=n).filter(|i| mask_r >> (i - 1) & 1 == 1).collect();
                let c: Vec<usize> = (1..=n).filter(|i| mask_c >> (i - 1) & 1 == 1).collect();
                if let Ok(e) = jaw_rewrite(n, &r, &c) {
                    assert_eq!(
                        e.eval(&m).unwrap(),
                        noninterlaced_minor(&m, &r, &c).unwrap(),
                        "{r:?} {c:?}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }

    proptest! {
        #[test]
        fn condensation_identities(v in proptest::collection::vec(-9i64..10, 36)) {
            let m = RatMatrix::from_fn(6, 6, |i, j| rat(v[i * 6 + j]));
            let (l, r) = desnanot_jacobi(&m, 2, 5, 1, 4).unwrap();
            prop_assert_eq!(l, r);
            let tall = RatMatrix::from_fn(6, 5, |i, j| rat(v[i * 6 + j]));
            let (l, r) = jaw_identity(&tall, 1, 3, 6, 2).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
