//! Exact rational arithmetic and the dense linear-algebra kernels used by the
//! rest of the crate: determinants, Pfaffians, Schur complements, linear
//! solves and effective resistances.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CpnError, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

/// Builds a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds the rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q` into a rational.
pub fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("bad rational `{s}`"))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational `{s}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(num, den))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Builds a matrix from explicit rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(CpnError::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Borrow a row as a slice.
    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// The submatrix on the listed rows and columns, in the listed order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Matrix product.
    pub fn mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CpnError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Rat::zero();
            for k in 0..self.cols {
                s += &self[(i, k)] * &other[(k, j)];
            }
            s
        }))
    }

    /// Entrywise negation.
    pub fn neg(&self) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Parses the text format: a `rows cols` header followed by one line per
    /// row of whitespace-separated rationals. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| CpnError::parse(1, "empty matrix file"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CpnError::parse(hline, "expected `rows cols`"))?;
        if dims.len() != 2 {
            return Err(CpnError::parse(hline, "expected `rows cols`"));
        }
        let (r, c) = (dims[0], dims[1]);
        let mut data = Vec::with_capacity(r * c);
        let mut seen = 0;
        for (ln, line) in lines {
            if seen == r {
                return Err(CpnError::parse(ln, "too many rows"));
            }
            let row: Vec<Rat> = line
                .split_whitespace()
                .map(parse_rat)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| CpnError::parse(ln, e))?;
            if row.len() != c {
                return Err(CpnError::parse(
                    ln,
                    format!("expected {c} entries, found {}", row.len()),
                ));
            }
            data.extend(row);
            seen += 1;
        }
        if seen != r {
            return Err(CpnError::parse(
                hline,
                format!("expected {r} rows, found {seen}"),
            ));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Renders the text format read by [`RatMatrix::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A skew-symmetric square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    entries: RatMatrix,
}

impl SkewMatrix {
    /// Wraps a matrix after checking skew-symmetry.
    pub fn new(entries: RatMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(CpnError::Dimension("skew matrix must be square".into()));
        }
        let n = entries.rows();
        for i in 0..n {
            if !entries[(i, i)].is_zero() {
                return Err(CpnError::Invariant(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if entries[(i, j)] != -entries[(j, i)].clone() {
                    return Err(CpnError::Invariant(format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(SkewMatrix { entries })
    }

    /// Builds the skew matrix whose entry `(i, j)` for `i < j` is `f(i, j)`.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = RatMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                m[(j, i)] = -v.clone();
                m[(i, j)] = v;
            }
        }
        SkewMatrix { entries: m }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn det(m: &RatMatrix) -> Result<Rat> {
    if !m.is_square() {
        return Err(CpnError::Dimension(format!(
            "det of {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut result = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return Ok(Rat::zero());
        };
        if p != k {
            a.swap_rows(p, k);
            result = -result;
        }
        let pivot = a[(k, k)].clone();
        result *= &pivot;
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for j in k + 1..n {
                let t = &f * &a[(k, j)];
                a[(i, j)] -= t;
            }
            a[(i, k)] = Rat::zero();
        }
    }
    Ok(result)
}

/// Exact Pfaffian by skew-symmetric elimination. The sign convention is
/// `Pf([[0, a], [-a, 0]]) = a`; odd dimensions give 0 and the empty matrix 1.
pub fn pfaffian(m: &SkewMatrix) -> Rat {
    let n = m.dim();
    if n % 2 == 1 {
        return Rat::zero();
    }
    let mut a = m.entries.clone();
    let mut result = Rat::one();
    let mut k = 0;
    while k < n {
        let Some(p) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
            return Rat::zero();
        };
        if p != k + 1 {
            // Simultaneous row and column swap flips the sign of the Pfaffian.
            a.swap_rows(p, k + 1);
            for i in 0..n {
                a.data.swap(i * n + p, i * n + k + 1);
            }
            result = -result;
        }
        let pivot = a[(k, k + 1)].clone();
        result *= &pivot;
        // Congruence operations clearing rows k and k+1 beyond column k+1.
        for j in k + 2..n {
            let f = &a[(k, j)] / &pivot;
            let g = &a[(k + 1, j)] / &pivot;
            if f.is_zero() && g.is_zero() {
                continue;
            }
            // column_j -= f * column_{k+1} - g * column_k, and the same on rows.
            for i in 0..n {
                let t = &f * &a[(i, k + 1)] - &g * &a[(i, k)];
                a[(i, j)] -= t;
            }
            for i in 0..n {
                let t = &f * &a[(k + 1, i)] - &g * &a[(k, i)];
                a[(j, i)] -= t;
            }
        }
        k += 2;
    }
    result
}

/// Solves `a * x = b` for square nonsingular `a`.
pub fn solve(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(CpnError::Dimension(
            "solve needs square a and matching b".into(),
        ));
    }
    let n = a.rows();
    let w = b.cols();
    let mut aug = RatMatrix::from_fn(n, n + w, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !aug[(i, k)].is_zero()) else {
            return Err(CpnError::Singular(format!("pivot column {k} is zero")));
        };
        aug.swap_rows(p, k);
        let pivot = aug[(k, k)].clone();
        for j in k..n + w {
            aug[(k, j)] /= &pivot;
        }
        for i in 0..n {
            if i == k || aug[(i, k)].is_zero() {
                continue;
            }
            let f = aug[(i, k)].clone();
            for j in k..n + w {
                let t = &f * &aug[(k, j)];
                aug[(i, j)] -= t;
            }
        }
    }
    Ok(RatMatrix::from_fn(n, w, |i, j| aug[(i, n + j)].clone()))
}

/// Schur complement onto the `keep` indices (in the order given):
/// `M_kk - M_ke M_ee^{-1} M_ek`, where `e` are the remaining indices.
pub fn schur_complement(m: &RatMatrix, keep: &[usize]) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(CpnError::Dimension(
            "schur complement of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut is_kept = vec![false; n];
    for &k in keep {
        if k >= n || is_kept[k] {
            return Err(CpnError::Precondition(format!("bad keep index {k}")));
        }
        is_kept[k] = true;
    }
    let elim: Vec<usize> = (0..n).filter(|&i| !is_kept[i]).collect();
    let mkk = m.submatrix(keep, keep);
    if elim.is_empty() {
        return Ok(mkk);
    }
    let mee = m.submatrix(&elim, &elim);
    let mek = m.submatrix(&elim, keep);
    let x =
        solve(&mee, &mek).map_err(|_| CpnError::Singular("eliminated block is singular".into()))?;
    let mke = m.submatrix(keep, &elim);
    let corr = mke.mul(&x)?;
    Ok(RatMatrix::from_fn(keep.len(), keep.len(), |i, j| {
        &mkk[(i, j)] - &corr[(i, j)]
    }))
}

/// Effective resistance between nodes `i` and `j` (0-based) of a network with
/// response matrix `l` (off-diagonal entries are conductance-like and rows sum
/// to zero). Computed by grounding node `j` and solving for the potential at
/// `i` under unit current.
pub fn effective_resistance(l: &RatMatrix, i: usize, j: usize) -> Result<Rat> {
    let n = l.rows();
    if !l.is_square() || i >= n || j >= n {
        return Err(CpnError::Dimension("bad resistance query".into()));
    }
    if i == j {
        return Ok(Rat::zero());
    }
    let rest: Vec<usize> = (0..n).filter(|&k| k != j).collect();
    let k = l.neg().submatrix(&rest, &rest);
    let pos = rest.iter().position(|&k| k == i).expect("i is kept");
    let rhs = RatMatrix::from_fn(rest.len(), 1, |r, _| {
        if r == pos {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let phi = solve(&k, &rhs).map_err(|_| {
        CpnError::Singular(format!("nodes {} and {} are disconnected", i + 1, j + 1))
    })?;
    Ok(phi[(pos, 0)].clone())
}

/// True when the rational is strictly positive.
pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
