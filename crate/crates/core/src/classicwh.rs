//! Winding numbers of Laurent polynomial symbols and exact Fredholm indices of the
//! associated Toeplitz operators `T(a)_{ij} = a_{i−j}` on `ℓ²(ℕ)`.
//!
//! The index is computed from kernels. For the supported symbols, `z^m·q` with `m ≥ 0`
//! and `q` a polynomial in `z` with strictly dominant constant term, or `z^m·r` with
//! `m ≤ 0` and `r` a polynomial in `z⁻¹` with strictly dominant constant term, the
//! kernels of `T(a)` and `T(a)* = T(ã)` are finitely supported. They are then
//! exactly the kernels of the truncations to the first `N` columns with every row
//! those columns touch, computed over ℚ.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratlin::Rational;

/// Modulus below which the symbol counts as vanishing.
pub const MIN_MODULUS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WhError {
    #[error("symbol is not Fredholm: minimum modulus {0:e} on the circle")]
    NotFredholm(f64),
    #[error("grid of {got} points is too coarse, need at least {need}")]
    GridTooCoarse { got: usize, need: usize },
    #[error("truncation size {got} is too small, need at least {need}")]
    TruncationTooSmall { got: usize, need: usize },
    #[error("symbol is outside the supported class (monomial times a one-sided dominant factor)")]
    UnsupportedSymbol,
    #[error("coefficient {0} is not finite")]
    NonFinite(f64),
}

/// A Laurent polynomial `Σ c_k z^k` with nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LaurentSymbol {
    coefficients: BTreeMap<i64, Complex64>,
}

impl LaurentSymbol {
    pub fn new(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coefficients = BTreeMap::new();
        for (k, c) in terms {
            *coefficients.entry(k).or_insert(Complex64::zero()) += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        LaurentSymbol { coefficients }
    }

    pub fn real(terms: &[(i64, f64)]) -> Self {
        Self::new(terms.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0))))
    }

    pub fn monomial(k: i64) -> Self {
        Self::real(&[(k, 1.0)])
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.coefficients.get(&k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coefficients.keys().next_back().copied()
    }

    /// `max |k|` over the support.
    pub fn bandwidth(&self) -> usize {
        self.coefficients.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients.iter().map(|(&k, &c)| c * z.powi(k as i32)).sum()
    }

    pub fn mul(&self, other: &LaurentSymbol) -> LaurentSymbol {
        Self::new(self.coefficients.iter().flat_map(|(&a, &x)| other.coefficients.iter().map(move |(&b, &y)| (a + b, x * y))))
    }

    /// `ã(z) = Σ conj(c_{−k}) z^k`, the symbol of the adjoint.
    pub fn adjoint(&self) -> LaurentSymbol {
        Self::new(self.coefficients.iter().map(|(&k, c)| (-k, c.conj())))
    }

    /// Whether the index method applies.
    pub fn is_supported(&self) -> bool {
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return false;
        };
        let dominant_at = |k: i64| {
            let rest: f64 = self.coefficients.iter().filter(|(&j, _)| j != k).map(|(_, c)| c.norm()).sum();
            self.coefficient(k).norm() > rest
        };
        (lo >= 0 && dominant_at(lo)) || (hi <= 0 && dominant_at(hi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub min_modulus: f64,
}

/// Smallest admissible grid: `8·(max |degree| + 1)`.
pub fn min_grid(s: &LaurentSymbol) -> usize {
    8 * (s.bandwidth() + 1)
}

/// Total phase increment over `grid` equally spaced points on the circle, divided by 2π.
pub fn winding_number(s: &LaurentSymbol, grid: usize) -> Result<WindingResult, WhError> {
    if let Some(bad) = s.coefficients.values().flat_map(|c| [c.re, c.im]).find(|x| !x.is_finite()) {
        return Err(WhError::NonFinite(bad));
    }
    let need = min_grid(s);
    if grid < need {
        return Err(WhError::GridTooCoarse { got: grid, need });
    }
    let values: Vec<Complex64> =
        (0..grid).map(|k| s.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid as f64))).collect();
    let min_modulus = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min_modulus < MIN_MODULUS {
        return Err(WhError::NotFredholm(min_modulus));
    }
    let total: f64 = (0..grid).map(|k| (values[(k + 1) % grid] / values[k]).arg()).sum();
    Ok(WindingResult { winding: (total / (2.0 * PI)).round() as i64, min_modulus })
}

/// Smallest admissible truncation for a symbol with the given winding number.
pub fn min_truncation(s: &LaurentSymbol, winding: i64) -> usize {
    10 * (s.bandwidth() + winding.unsigned_abs() as usize + 1)
}

/// `T(a)` on the first `n` columns, with every row those columns reach.
fn column_truncation(s: &LaurentSymbol, n: usize) -> (Vec<Vec<Complex64>>, usize) {
    let hi = s.max_degree().unwrap_or(0).max(0) as usize;
    let rows = n + hi;
    let m = (0..rows).map(|i| (0..n).map(|j| s.coefficient(i as i64 - j as i64)).collect()).collect();
    (m, rows)
}

fn exact(x: f64) -> Rational {
    Rational::from_float(x).expect("coefficients are finite")
}

/// Rank over ℚ by fraction-free elimination on integer rows. Only rows with a nonzero
/// entry in the pivot column are touched, so banded inputs stay cheap.
fn integer_rank(mut rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot = &head[r];
        for row in tail.iter_mut().filter(|row| !row[c].is_zero()) {
            let g = pivot[c].gcd(&row[c]);
            let (f, h) = (&pivot[c] / &g, &row[c] / &g);
            for (x, y) in row.iter_mut().zip(pivot).skip(c) {
                if !x.is_zero() || !y.is_zero() {
                    *x = &f * &*x - &h * y;
                }
            }
            let content = row.iter().skip(c + 1).fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                row.iter_mut().skip(c + 1).for_each(|x| *x /= &content);
            }
        }
        r += 1;
    }
    r
}

/// `dim ker` of a complex matrix over ℚ(i). Complex entries use the real embedding
/// with interleaved blocks `[[x, −y], [y, x]]`, which keeps banded matrices banded.
fn nullity(m: &[Vec<Complex64>], rows: usize, cols: usize) -> usize {
    let complex = m.iter().flatten().any(|c| c.im != 0.0);
    let q: Vec<Vec<Rational>> = if complex {
        let mut q = vec![vec![Rational::zero(); 2 * cols]; 2 * rows];
        for i in 0..rows {
            for j in 0..cols {
                let (x, y) = (exact(m[i][j].re), exact(m[i][j].im));
                q[2 * i][2 * j] = x.clone();
                q[2 * i][2 * j + 1] = -y.clone();
                q[2 * i + 1][2 * j] = y;
                q[2 * i + 1][2 * j + 1] = x;
            }
        }
        q
    } else {
        m.iter().map(|r| r.iter().map(|c| exact(c.re)).collect()).collect()
    };
    let denominator = q.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = q.iter().map(|r| r.iter().map(|x| x.numer() * (&denominator / x.denom())).collect()).collect();
    let width = if complex { 2 * cols } else { cols };
    let rank = integer_rank(ints, width);
    if complex {
        cols - rank / 2
    } else {
        cols - rank
    }
}

/// `dim ker T(a) − dim ker T(ã)`, from exact ranks of column truncations of size `n`.
pub fn toeplitz_index(s: &LaurentSymbol, n: usize) -> Result<i64, WhError> {
    let w = winding_number(s, min_grid(s).max(256))?;
    let need = min_truncation(s, w.winding);
    if n < need {
        return Err(WhError::TruncationTooSmall { got: n, need });
    }
    if !s.is_supported() {
        return Err(WhError::UnsupportedSymbol);
    }
    let (t, rows) = column_truncation(s, n);
    let (t_adj, rows_adj) = column_truncation(&s.adjoint(), n);
    Ok(nullity(&t, rows, n) as i64 - nullity(&t_adj, rows_adj, n) as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexCheck {
    pub winding: i64,
    pub index: i64,
    pub truncation: usize,
    /// `index = −winding`.
    pub passes: bool,
}

pub fn index_theorem_check(s: &LaurentSymbol, n: usize) -> Result<IndexCheck, WhError> {
    let winding = winding_number(s, min_grid(s).max(256))?.winding;
    let index = toeplitz_index(s, n)?;
    Ok(IndexCheck { winding, index, truncation: n, passes: index == -winding })
}
