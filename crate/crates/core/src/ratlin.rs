//! Exact rational linear algebra and integer Smith normal form.
//!
//! Everything here works over `BigRational` / `BigInt`; there is no floating
//! point. Subspaces are passed around as matrices whose columns form a basis.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;
pub type QVector = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatlinError {
    #[error("input columns are linearly dependent (rank {rank} < {cols})")]
    DependentColumns { rank: usize, cols: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qvec(entries: &[i64]) -> QVector {
    entries.iter().map(|&e| int(e)).collect()
}

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational, RatlinError> {
    let t = s.trim();
    let parse_int = |x: &str| x.trim().parse::<BigInt>().map_err(|_| RatlinError::Parse(s.to_string()));
    match t.split_once('/') {
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(RatlinError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(parse_int(t)?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

/// Rescales `v` by a positive rational so that its entries are coprime integers.
pub fn primitive(v: &[Rational]) -> QVector {
    if is_zero_vec(v) {
        return v.to_vec();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// True iff `a = λ·b` for some λ > 0.
pub fn positively_proportional(a: &[Rational], b: &[Rational]) -> bool {
    if is_zero_vec(a) || is_zero_vec(b) {
        return is_zero_vec(a) && is_zero_vec(b);
    }
    primitive(a) == primitive(b)
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entries length must equal rows*cols");
        Matrix { rows, cols, entries }
    }

    /// Builds from row vectors; `cols` is only used when `rows` is empty.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, entries }
    }

    /// Builds from column vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(&cols, self.rows)
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }
}

impl<T> Mul for &Matrix<T>
where
    T: Clone + Zero,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    let cell: &mut T = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        out
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl RationalMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rs: Vec<QVector> = rows.iter().map(|r| qvec(r)).collect();
        let cols = rs.first().map_or(0, Vec::len);
        Self::from_rows(&rs, cols)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn to_f64_columns(&self) -> Vec<Vec<f64>> {
        self.columns().iter().map(|c| vec_to_f64(c)).collect()
    }
}

/// Row rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    m.rref().1.len()
}

/// Rank of a family of vectors of common length `dim`.
pub fn rank_of_vectors(vectors: &[QVector], dim: usize) -> usize {
    rank(&RationalMatrix::from_rows(vectors, dim))
}

/// Basis of `ker M`, one column per free variable. Columns are scaled to
/// primitive integer vectors.
pub fn nullspace(m: &RationalMatrix) -> RationalMatrix {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<QVector> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            primitive(&v)
        })
        .collect();
    RationalMatrix::from_columns(&basis, m.cols)
}

/// Basis (as columns) of the orthogonal complement of the column span of `basis`.
pub fn orthogonal_complement(basis: &RationalMatrix) -> Result<RationalMatrix, RatlinError> {
    let r = rank(basis);
    if r < basis.cols() {
        return Err(RatlinError::DependentColumns { rank: r, cols: basis.cols() });
    }
    Ok(nullspace(&basis.transpose()))
}

/// Orthogonal complement of the span of arbitrary (possibly dependent) vectors in ℚ^dim.
pub fn complement_of_span(vectors: &[QVector], dim: usize) -> RationalMatrix {
    nullspace(&RationalMatrix::from_rows(vectors, dim))
}

/// Indices of a maximal linearly independent subfamily, greedily in order.
pub fn independent_subset(vectors: &[QVector], dim: usize) -> Vec<usize> {
    let m = RationalMatrix::from_columns(vectors, dim);
    m.rref().1
}

/// Orthogonal projection of `x` onto the column span of `basis` (columns independent).
pub fn project_onto_span(basis: &RationalMatrix, x: &[Rational]) -> QVector {
    let k = basis.cols();
    if k == 0 {
        return vec![Rational::zero(); x.len()];
    }
    let bt = basis.transpose();
    let gram = &bt * basis;
    let rhs = bt.mul_vec(x);
    let coeffs = solve_square(&gram, &rhs).expect("Gram matrix of independent columns is invertible");
    basis.mul_vec(&coeffs)
}

/// Solves `A x = b` for square invertible `A`.
pub fn solve_square(a: &RationalMatrix, b: &[Rational]) -> Option<QVector> {
    let n = a.rows();
    let mut aug = RationalMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (r, pivots) = aug.rref();
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..n).map(|i| r[(i, n)].clone()).collect())
}

/// Canonical basis of a subspace: primitive rows of the RREF of the spanning vectors.
pub fn canonical_basis(vectors: &[QVector], dim: usize) -> Vec<QVector> {
    let (r, pivots) = RationalMatrix::from_rows(vectors, dim).rref();
    (0..pivots.len()).map(|i| primitive(r.row(i))).collect()
}

/// Result of a Smith normal form computation: `u * a * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form by elimination with smallest-magnitude pivots.
/// `invariant_factors` lists the nonzero diagonal entries, each dividing the next.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !s[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !s[(i, t)].is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offender =
                (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !(&s[(i, j)] % &s[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => {
                    row_axpy(&mut s, t, i, &-BigInt::one());
                    row_axpy(&mut u, t, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            for j in 0..n {
                s[(t, j)] = -s[(t, j)].clone();
            }
            for j in 0..m {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
        t += 1;
    }
    let invariant_factors = (0..m.min(n)).map(|i| s[(i, i)].clone()).take_while(|d| !d.is_zero()).collect();
    SnfResult { u, s, v, invariant_factors }
}

/// row[target] -= q * row[source]
fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let delta = q * &m[(source, j)];
        m[(target, j)] -= delta;
    }
}

/// col[target] -= q * col[source]
fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let delta = q * &m[(i, source)];
        m[(i, target)] -= delta;
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rs: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let cols = rs.first().map_or(0, Vec::len);
        Self::from_rows(&rs, cols)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix::from_entries(
            self.rows(),
            self.cols(),
            self.entries().iter().map(|x| Rational::from_integer(x.clone())).collect(),
        )
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows()).map(|i| self.row(i).iter().map(|x| x.to_i64().expect("entry fits in i64")).collect()).collect()
    }

    /// Determinant over the integers (via rationals).
    pub fn determinant(&self) -> BigInt {
        self.to_rational().determinant().to_integer()
    }
}
