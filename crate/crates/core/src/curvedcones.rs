//! Non-polyhedral cones: Lorentz cones and Siegel cones `C(K, B)`.
//!
//! Points are `f64` vectors. A Siegel cone lives in `U × V × ℝ` and a point is
//! stored flat as `(u, v, t)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycone::Cone;
use crate::ratlin::vec_to_f64;

/// Absolute tolerance used for boundary decisions.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvedError {
    #[error("Lorentz cone needs ambient dimension at least 2, got {0}")]
    LorentzDim(usize),
    #[error("point has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("bilinear map must have one coefficient matrix per V-coordinate ({expected}), got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("coefficient matrix {index} is not {dim}×{dim}")]
    CoefficientShape { index: usize, dim: usize },
    #[error("coefficient matrix {index} is not symmetric at ({row}, {col})")]
    NotSymmetric { index: usize, row: usize, col: usize },
    #[error("point is not in the cone")]
    NotInCone,
    #[error("point is zero")]
    ZeroPoint,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `{(t, x) ∈ ℝ × ℝ^{n−1} : t ≥ ‖x‖}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LorentzCone {
    pub ambient_dim: usize,
}

impl LorentzCone {
    pub fn new(ambient_dim: usize) -> Result<Self, CurvedError> {
        if ambient_dim < 2 {
            return Err(CurvedError::LorentzDim(ambient_dim));
        }
        Ok(LorentzCone { ambient_dim })
    }

    /// `t − ‖x‖`.
    pub fn boundary_residual(&self, p: &[f64]) -> f64 {
        p[0] - norm(&p[1..])
    }

    pub fn contains_tol(&self, p: &[f64], tol: f64) -> bool {
        p.len() == self.ambient_dim && self.boundary_residual(p) >= -tol
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.contains_tol(p, BOUNDARY_TOL)
    }

    /// Nonzero boundary points are extreme.
    pub fn is_extreme(&self, p: &[f64], tol: f64) -> bool {
        let scale = norm(p);
        scale > tol && (self.boundary_residual(p) / scale).abs() <= tol
    }

    /// Smallest `⟨p, q⟩` over sampled pairs of unit boundary points; nonnegative up to
    /// rounding because the cone is self-dual.
    pub fn self_duality_min(&self, pairs: usize) -> f64 {
        let dirs = crate::strata::lorentz::sample_directions(self.ambient_dim - 1, pairs.max(2));
        let point = |w: &[f64]| {
            let mut v = vec![1.0];
            v.extend_from_slice(w);
            v
        };
        (0..pairs)
            .map(|k| {
                let p = point(&dirs[k % dirs.len()]);
                let q = point(&dirs[(k * 7 + 3) % dirs.len()]);
                dot(&p, &q) / 2.0
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Membership wrapper for polyhedral cones on float points.
pub fn polyhedral_contains(cone: &Cone, p: &[f64], tol: f64) -> bool {
    let ok_ineq = cone.inequalities().iter().all(|a| {
        let a = vec_to_f64(a);
        dot(&a, p) / norm(&a) >= -tol
    });
    let ok_eq = cone.equalities().iter().all(|b| {
        let b = vec_to_f64(b);
        (dot(&b, p) / norm(&b)).abs() <= tol
    });
    p.len() == cone.ambient_dim() && ok_ineq && ok_eq
}

/// The cone `K` of a Siegel construction.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseCone {
    Polyhedral(Cone),
    Lorentz(LorentzCone),
}

impl BaseCone {
    pub fn ambient_dim(&self) -> usize {
        match self {
            BaseCone::Polyhedral(c) => c.ambient_dim(),
            BaseCone::Lorentz(l) => l.ambient_dim,
        }
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        match self {
            BaseCone::Polyhedral(c) => polyhedral_contains(c, v, tol),
            BaseCone::Lorentz(l) => l.contains_tol(v, tol),
        }
    }

    /// `v` spans an extreme ray of `K`.
    pub fn is_extreme(&self, v: &[f64], tol: f64) -> bool {
        match self {
            BaseCone::Polyhedral(c) => {
                let nv = norm(v);
                nv > tol
                    && c.generators().iter().any(|g| {
                        let g = vec_to_f64(g);
                        dot(&g, v) / (norm(&g) * nv) >= 1.0 - tol
                    })
            }
            BaseCone::Lorentz(l) => l.is_extreme(v, tol),
        }
    }
}

/// `U`-dimension, `K ⊂ V` and the symmetric `V`-valued bilinear map `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelData {
    pub u_dim: usize,
    pub k: BaseCone,
    /// `b[i]` is the `u_dim × u_dim` symmetric matrix of the `i`-th coordinate of `B`.
    pub b: Vec<Vec<Vec<f64>>>,
}

impl SiegelData {
    pub fn new(u_dim: usize, k: BaseCone, b: Vec<Vec<Vec<f64>>>) -> Result<Self, CurvedError> {
        if b.len() != k.ambient_dim() {
            return Err(CurvedError::CoefficientCount { expected: k.ambient_dim(), got: b.len() });
        }
        for (index, m) in b.iter().enumerate() {
            if m.len() != u_dim || m.iter().any(|r| r.len() != u_dim) {
                return Err(CurvedError::CoefficientShape { index, dim: u_dim });
            }
            let asym = (0..u_dim).flat_map(|r| (r + 1..u_dim).map(move |c| (r, c))).find(|&(r, c)| m[r][c] != m[c][r]);
            if let Some((row, col)) = asym {
                return Err(CurvedError::NotSymmetric { index, row, col });
            }
        }
        Ok(SiegelData { u_dim, k, b })
    }

    pub fn v_dim(&self) -> usize {
        self.k.ambient_dim()
    }

    /// `B(u, u)`.
    pub fn quadratic(&self, u: &[f64]) -> Vec<f64> {
        self.b.iter().map(|m| m.iter().zip(u).map(|(row, ui)| ui * dot(row, u)).sum()).collect()
    }
}

/// Outcome of the sampled K-positivity test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub positive: bool,
    pub trials: usize,
    /// `(u, B(u, u))` for the first violation.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Halton points in `[0, 1)^dims`, skipping the first `skip` indices.
pub fn halton(dims: usize, count: usize, skip: usize) -> Vec<Vec<f64>> {
    const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    assert!(dims <= PRIMES.len());
    let radical_inverse = |mut i: u64, base: u64| {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    };
    (skip..skip + count).map(|i| (0..dims).map(|d| radical_inverse(i as u64 + 1, PRIMES[d])).collect()).collect()
}

/// Unit vectors in ℝᵐ from Halton points through the Box–Muller transform.
pub fn halton_unit_vectors(m: usize, count: usize, skip: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    let pairs = m.div_ceil(2);
    halton(2 * pairs, count, skip)
        .into_iter()
        .map(|h| {
            let mut g = Vec::with_capacity(2 * pairs);
            for p in 0..pairs {
                let r = (-2.0 * (1.0 - h[2 * p]).ln()).sqrt();
                let a = 2.0 * PI * h[2 * p + 1];
                g.push(r * a.cos());
                g.push(r * a.sin());
            }
            g.truncate(m);
            let n = norm(&g);
            g.iter().map(|x| x / n).collect()
        })
        .collect()
}

/// Checks `B(u, u) ∈ K ∖ {0}` on the coordinate vectors and then on Halton unit vectors.
pub fn k_positivity_check(data: &SiegelData, trials: usize) -> PositivityReport {
    let coords = (0..data.u_dim).map(|i| (0..data.u_dim).map(|k| if i == k { 1.0 } else { 0.0 }).collect());
    let samples = halton_unit_vectors(data.u_dim, trials.saturating_sub(data.u_dim), 0);
    let mut count = 0;
    for u in coords.chain(samples) {
        count += 1;
        let bu = data.quadratic(&u);
        if norm(&bu) <= BOUNDARY_TOL || !data.k.contains(&bu, BOUNDARY_TOL) {
            return PositivityReport { positive: false, trials: count, witness: Some((u, bu)) };
        }
    }
    PositivityReport { positive: true, trials: count, witness: None }
}

/// `C(K, B) = {(u, v, t) : v ∈ K, t ≥ 0, tv − B(u) ∈ K}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelCone {
    pub data: SiegelData,
}

impl SiegelCone {
    pub fn new(data: SiegelData) -> Self {
        SiegelCone { data }
    }

    pub fn ambient_dim(&self) -> usize {
        self.data.u_dim + self.data.v_dim() + 1
    }

    pub fn split<'a>(&self, p: &'a [f64]) -> (&'a [f64], &'a [f64], f64) {
        let (u, rest) = p.split_at(self.data.u_dim);
        let (v, t) = rest.split_at(self.data.v_dim());
        (u, v, t[0])
    }

    /// `tv − B(u)`.
    pub fn slack(&self, p: &[f64]) -> Vec<f64> {
        let (u, v, t) = self.split(p);
        let bu = self.data.quadratic(u);
        v.iter().zip(&bu).map(|(vi, bi)| t * vi - bi).collect()
    }

    fn check_len(&self, p: &[f64]) -> Result<(), CurvedError> {
        if p.len() != self.ambient_dim() {
            return Err(CurvedError::LengthMismatch { expected: self.ambient_dim(), got: p.len() });
        }
        Ok(())
    }
}

pub fn siegel_membership(p: &[f64], s: &SiegelCone, tol: f64) -> Result<bool, CurvedError> {
    s.check_len(p)?;
    let (_, v, t) = s.split(p);
    Ok(t >= -tol && s.data.k.contains(v, tol) && s.data.k.contains(&s.slack(p), tol))
}

/// Extreme iff `tv = B(u)` and, when `t = 0`, `v` spans an extreme ray of `K`.
/// The test runs on `p/‖p‖`, so it is invariant under positive scaling.
pub fn siegel_is_extreme(p: &[f64], s: &SiegelCone, tol: f64) -> Result<bool, CurvedError> {
    s.check_len(p)?;
    let scale = norm(p);
    if scale <= tol {
        return Err(CurvedError::ZeroPoint);
    }
    let q: Vec<f64> = p.iter().map(|x| x / scale).collect();
    if !siegel_membership(&q, s, tol)? {
        return Err(CurvedError::NotInCone);
    }
    let (_, v, t) = s.split(&q);
    let on_boundary = norm(&s.slack(&q)) <= tol;
    Ok(on_boundary && (t > tol || s.data.k.is_extreme(v, tol)))
}

/// `C(ℝ≥0, ⟨·,·⟩_{ℝ^m})` with its linear identification onto the Lorentz cone in ℝ^{m+2}:
/// `(u, v, t) ↦ ((t+v)/√2, (t−v)/√2, √2·u)`, under which `T² − ‖X‖² = 2(tv − ‖u‖²)`.
#[derive(Clone, Debug)]
pub struct LorentzSiegel {
    pub m: usize,
    pub cone: SiegelCone,
    pub lorentz: LorentzCone,
}

impl LorentzSiegel {
    pub fn to_lorentz(&self, p: &[f64]) -> Vec<f64> {
        let (u, v, t) = self.cone.split(p);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = vec![(t + v[0]) * s, (t - v[0]) * s];
        out.extend(u.iter().map(|x| x * std::f64::consts::SQRT_2));
        out
    }

    pub fn from_lorentz(&self, q: &[f64]) -> Vec<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out: Vec<f64> = q[2..].iter().map(|x| x * s).collect();
        out.push((q[0] - q[1]) * s);
        out.push((q[0] + q[1]) * s);
        out
    }

    /// Counts samples on which membership agrees across the identification.
    pub fn membership_agreement(&self, samples: usize, seed: u64, tol: f64) -> (usize, usize) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut agree = 0;
        for _ in 0..samples {
            let mut p: Vec<f64> = (0..self.m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            p.push(rng.gen_range(-0.25..1.5));
            p.push(rng.gen_range(-0.25..1.5));
            let a = siegel_membership(&p, &self.cone, tol).expect("sample has the right length");
            let b = self.lorentz.contains_tol(&self.to_lorentz(&p), tol);
            agree += usize::from(a == b);
        }
        (agree, samples)
    }
}

pub fn lorentz_as_siegel(m: usize) -> LorentzSiegel {
    assert!(m >= 1);
    let identity: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|k| if i == k { 1.0 } else { 0.0 }).collect()).collect();
    let half_line = Cone::from_generators(1, &[crate::ratlin::qvec(&[1])]).expect("half-line is valid");
    let data = SiegelData::new(m, BaseCone::Polyhedral(half_line), vec![identity]).expect("identity is symmetric");
    LorentzSiegel { m, cone: SiegelCone::new(data), lorentz: LorentzCone { ambient_dim: m + 2 } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::qvec;

    fn half_line() -> BaseCone {
        BaseCone::Polyhedral(Cone::from_generators(1, &[qvec(&[1])]).unwrap())
    }

    #[test]
    fn lorentz_membership_examples() {
        let l = LorentzCone::new(3).unwrap();
        assert!(l.contains(&[1.0, 0.0, 0.0]));
        assert!(l.contains(&[1.0, 1.0, 0.0]));
        assert!(!l.contains(&[0.9, 1.0, 0.0]));
        assert!(LorentzCone::new(1).is_err());
        assert!(l.self_duality_min(1000) >= -1e-12);
    }

    #[test]
    fn positivity_examples() {
        let inner = SiegelData::new(2, half_line(), vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]]).unwrap();
        assert!(k_positivity_check(&inner, 200).positive);

        let indefinite = SiegelData::new(2, half_line(), vec![vec![vec![1.0, 0.0], vec![0.0, -1.0]]]).unwrap();
        let r = k_positivity_check(&indefinite, 200);
        assert!(!r.positive);
        let (u, bu) = r.witness.unwrap();
        assert_eq!(u, vec![0.0, 1.0]);
        assert_eq!(bu, indefinite.quadratic(&u));
        assert!(bu[0] < 0.0);

        let quadrant = Cone::from_generators(2, &[qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        let diag = SiegelData::new(1, BaseCone::Polyhedral(quadrant), vec![vec![vec![1.0]], vec![vec![1.0]]]).unwrap();
        assert!(k_positivity_check(&diag, 50).positive);
    }

    #[test]
    fn rejects_asymmetric_b() {
        let r = SiegelData::new(2, half_line(), vec![vec![vec![1.0, 2.0], vec![0.0, 1.0]]]);
        assert_eq!(r, Err(CurvedError::NotSymmetric { index: 0, row: 0, col: 1 }));
    }

    #[test]
    fn siegel_membership_examples() {
        let s = lorentz_as_siegel(2).cone;
        assert!(siegel_membership(&[0.0, 0.0, 3.0, 0.0], &s, 1e-12).unwrap());
        let u = [0.3, -0.4];
        let n2 = 0.25;
        assert!(siegel_membership(&[u[0], u[1], n2, 1.0], &s, 1e-12).unwrap());
        assert!(!siegel_membership(&[u[0], u[1], n2 / 2.0, 1.0], &s, 1e-12).unwrap());
    }

    #[test]
    fn extreme_examples() {
        let s = lorentz_as_siegel(1).cone;
        assert!(siegel_is_extreme(&[0.5, 0.25, 1.0], &s, 1e-12).unwrap());
        assert!(siegel_is_extreme(&[0.0, 1.0, 0.0], &s, 1e-12).unwrap());
        assert!(!siegel_is_extreme(&[0.0, 1.0, 1.0], &s, 1e-12).unwrap());
        assert_eq!(siegel_is_extreme(&[1.0, 0.0, 0.0], &s, 1e-12), Err(CurvedError::NotInCone));
        for lambda in [0.01, 3.0, 1e4] {
            let p = [0.5 * lambda, 0.25 * lambda, lambda];
            assert!(siegel_is_extreme(&p, &s, 1e-12).unwrap());
        }
    }

    #[test]
    fn identification_round_trip() {
        let id = lorentz_as_siegel(1);
        let img = id.to_lorentz(&[1.0, 1.0, 1.0]);
        assert!(id.lorentz.boundary_residual(&img).abs() < 1e-12);
        let img = id.to_lorentz(&[0.0, 1.0, 0.0]);
        assert!(id.lorentz.is_extreme(&img, 1e-12));
        let p = [0.2, -0.7, 0.4];
        let back = id.from_lorentz(&id.to_lorentz(&p));
        assert!(back.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-15));
        for m in [1, 2] {
            let (agree, total) = lorentz_as_siegel(m).membership_agreement(10_000, 11, 1e-9);
            assert!(agree * 100 >= total * 99);
        }
    }

    #[test]
    fn halton_vectors_are_unit() {
        for v in halton_unit_vectors(5, 100, 0) {
            assert!((norm(&v) - 1.0).abs() < 1e-12);
        }
    }
}
