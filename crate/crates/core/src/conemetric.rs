//! The truncated Hausdorff distance between closed convex cones.
//!
//! `e(A, B) = sup{dist(a, B) : a ∈ A, ‖a‖ ≤ 1}` is attained on `A ∩ S^{n−1}` (or at 0),
//! and `h(A, B) = max(e(A, B), e(B, A))`. The supremum is approximated on a
//! deterministic grid: `A` is split into simplicial cones, each carries a
//! barycentric grid matched to the requested sample density, and the best grid
//! points are improved by a pattern search. Distances to `B` are computed by
//! projecting onto the spans of its faces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycone::{face_lattice, Cone, FaceLattice};
use crate::ratlin::vec_to_f64;
use crate::strata::{incidence_space, lorentz, pair_geometry, StrataError, Stratification};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("inner product {0} is negative; the closed form needs a nonnegative one")]
    NegativeInnerProduct(f64),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error("face {0} is not in the image of ξ")]
    NotInXiImage(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Target number of samples on the unit sphere; `None` picks the default for the dimension.
    pub sphere_samples_per_dim: Option<usize>,
    pub refinement_rounds: usize,
    pub tolerance: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { sphere_samples_per_dim: None, refinement_rounds: 2, tolerance: 5e-3 }
    }
}

impl MetricConfig {
    /// 720 in ℝ², 64² in ℝ³, 24³ in ℝ⁴, 16^{n−1} above.
    pub fn samples_for(&self, n: usize) -> usize {
        self.sphere_samples_per_dim.unwrap_or(match n {
            0 | 1 => 2,
            2 => 720,
            3 => 64 * 64,
            4 => 24 * 24 * 24,
            _ => 16usize.pow(n as u32 - 1),
        })
    }

    /// Grid spacing on `S^{n−1}` implied by the sample count.
    fn spacing(&self, n: usize) -> f64 {
        use std::f64::consts::PI;
        let area = match n {
            0 | 1 => return PI,
            2 => 2.0 * PI,
            3 => 4.0 * PI,
            4 => 2.0 * PI * PI,
            _ => 4.0 * PI,
        };
        (area / self.samples_for(n) as f64).powf(1.0 / (n as f64 - 1.0))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    a.iter().map(|x| x / n).collect()
}

/// Gram–Schmidt; drops vectors dependent on earlier ones.
fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&w);
        if n > 1e-10 * norm(v).max(1.0) {
            out.push(w.iter().map(|x| x / n).collect());
        }
    }
    out
}

fn project(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; x.len()];
    for b in basis {
        let c = dot(x, b);
        p.iter_mut().zip(b).for_each(|(y, z)| *y += c * z);
    }
    p
}

/// Float data for distance queries against a cone and for sampling its unit sphere.
#[derive(Clone, Debug)]
pub struct PreparedCone {
    ambient_dim: usize,
    lineality: Vec<Vec<f64>>,
    face_bases: Vec<Vec<Vec<f64>>>,
    inequalities: Vec<Vec<f64>>,
    /// Simplicial cones covering the cone, as lists of unit generators.
    simplices: Vec<Vec<Vec<f64>>>,
}

impl PreparedCone {
    pub fn new(cone: &Cone) -> PreparedCone {
        let pointed = cone.pointed_part();
        let lattice = face_lattice(&pointed).expect("pointed part is pointed");
        let gens: Vec<Vec<f64>> = pointed.generators().iter().map(|g| normalize(&vec_to_f64(g))).collect();
        let face_bases = lattice
            .faces
            .iter()
            .map(|f| orthonormalize(&f.generator_index_set.iter().map(|&g| gens[g].clone()).collect::<Vec<_>>()))
            .collect();
        let inequalities = cone.inequalities().iter().map(|a| normalize(&vec_to_f64(a))).collect();
        let lineality = orthonormalize(&cone.lineality().iter().map(|l| vec_to_f64(l)).collect::<Vec<_>>());

        let top = lattice.len() - 1;
        let pointed_simplices: Vec<Vec<usize>> =
            if lattice.faces[top].dim == 0 { vec![Vec::new()] } else { pulling_triangulation(&lattice, top) };
        let mut simplices = Vec::new();
        for signs in 0u32..(1 << lineality.len()) {
            for s in &pointed_simplices {
                let mut cols: Vec<Vec<f64>> = s.iter().map(|&g| gens[g].clone()).collect();
                for (i, l) in lineality.iter().enumerate() {
                    let sign = if signs & (1 << i) == 0 { 1.0 } else { -1.0 };
                    cols.push(l.iter().map(|x| sign * x).collect());
                }
                if !cols.is_empty() {
                    simplices.push(cols);
                }
            }
        }
        PreparedCone { ambient_dim: cone.ambient_dim(), lineality, face_bases, inequalities, simplices }
    }

    /// Euclidean distance from `x` to the cone.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let lin = project(&self.lineality, x);
        let xr: Vec<f64> = x.iter().zip(&lin).map(|(a, b)| a - b).collect();
        let scale = norm(&xr).max(1.0);
        let mut best = f64::INFINITY;
        for basis in &self.face_bases {
            let p = project(basis, &xr);
            if self.inequalities.iter().all(|a| dot(a, &p) >= -1e-12 * scale) {
                let d = xr.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                best = best.min(d);
            }
        }
        best
    }
}

/// Pulling triangulation of a face: cone from its first generator over the facets
/// that avoid it.
fn pulling_triangulation(lattice: &FaceLattice, face: usize) -> Vec<Vec<usize>> {
    let f = &lattice.faces[face];
    match f.dim {
        0 => Vec::new(),
        1 => vec![f.generator_index_set.clone()],
        _ => {
            let v = f.generator_index_set[0];
            let mut out = Vec::new();
            for facet in lattice.facets_of(face) {
                if lattice.faces[facet].generator_index_set.contains(&v) {
                    continue;
                }
                for mut s in pulling_triangulation(lattice, facet) {
                    s.insert(0, v);
                    out.push(s);
                }
            }
            out
        }
    }
}

/// Integer compositions of `total` into `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn combine(cols: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; cols[0].len()];
    for (c, w) in cols.iter().zip(weights) {
        x.iter_mut().zip(c).for_each(|(a, b)| *a += w * b);
    }
    normalize(&x)
}

/// Grid resolution for a simplicial cone: a power of two, so denser configurations refine
/// coarser grids.
fn resolution(cols: &[Vec<f64>], spacing: f64) -> usize {
    let mut widest: f64 = 0.0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            widest = widest.max(dot(&cols[i], &cols[j]).clamp(-1.0, 1.0).acos());
        }
    }
    ((widest / spacing).ceil() as usize).max(1).next_power_of_two()
}

fn sampled_excess(a: &PreparedCone, b: &PreparedCone, cfg: &MetricConfig) -> f64 {
    let spacing = cfg.spacing(a.ambient_dim);
    // (distance, simplex, weights, resolution)
    let candidates: Vec<(f64, usize, Vec<f64>, usize)> = a
        .simplices
        .par_iter()
        .enumerate()
        .flat_map_iter(|(si, cols)| {
            let r = resolution(cols, spacing);
            compositions(r, cols.len()).into_iter().map(move |c| {
                let w: Vec<f64> = c.iter().map(|&k| k as f64 / r as f64).collect();
                (si, w, r)
            })
        })
        .map(|(si, w, r)| (b.distance(&combine(&a.simplices[si], &w)), si, w, r))
        .collect();
    let mut best = candidates.iter().map(|c| c.0).fold(0.0, f64::max);
    if cfg.refinement_rounds == 0 || candidates.is_empty() {
        return best;
    }
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| candidates[j].0.total_cmp(&candidates[i].0).then(i.cmp(&j)));
    let refined: Vec<f64> = order
        .iter()
        .take(4)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            let (mut value, si, ref w, r) = candidates[i];
            let cols = &a.simplices[si];
            let mut w = w.clone();
            let mut step = 0.5 / r as f64;
            for _ in 0..cfg.refinement_rounds {
                for _ in 0..64 {
                    let mut improved = false;
                    for p in 0..w.len() {
                        for q in 0..w.len() {
                            if p == q || w[q] < step {
                                continue;
                            }
                            let mut trial = w.clone();
                            trial[p] += step;
                            trial[q] -= step;
                            let d = b.distance(&combine(cols, &trial));
                            if d > value {
                                value = d;
                                w = trial;
                                improved = true;
                            }
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                step /= 2.0;
            }
            value
        })
        .collect();
    for v in refined {
        best = best.max(v);
    }
    best
}

fn check_dims(a: &Cone, b: &Cone) -> Result<(), MetricError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(MetricError::DimensionMismatch(a.ambient_dim(), b.ambient_dim()));
    }
    Ok(())
}

/// Exact containment `A ⊆ B`.
fn contained(a: &Cone, b: &Cone) -> bool {
    a.generators().iter().all(|g| b.contains(g))
        && a.lineality().iter().all(|l| b.contains(l) && b.contains(&l.iter().map(|x| -x).collect::<Vec<_>>()))
}

/// `e(A ∩ 𝔹, B)`; exactly 0 when `A ⊆ B`.
pub fn excess(a: &Cone, b: &Cone, cfg: &MetricConfig) -> Result<f64, MetricError> {
    check_dims(a, b)?;
    if contained(a, b) {
        return Ok(0.0);
    }
    Ok(sampled_excess(&PreparedCone::new(a), &PreparedCone::new(b), cfg))
}

pub fn hausdorff_h(a: &Cone, b: &Cone, cfg: &MetricConfig) -> Result<f64, MetricError> {
    Ok(excess(a, b, cfg)?.max(excess(b, a, cfg)?))
}

/// `√(1 − ⟨e₁, e₂⟩²)` for unit vectors with nonnegative inner product.
pub fn ray_distance(e1: &[f64], e2: &[f64]) -> Result<f64, MetricError> {
    for e in [e1, e2] {
        let n = norm(e);
        if (n - 1.0).abs() > 1e-12 {
            return Err(MetricError::NotUnit(n));
        }
    }
    let c = dot(e1, e2);
    if c < 0.0 {
        return Err(MetricError::NegativeInnerProduct(c));
    }
    Ok((1.0 - c.min(1.0) * c.min(1.0)).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarityReport {
    pub h_primal: f64,
    pub h_dual: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub passes: bool,
}

/// Compares `h(A, B)` with `h(A*, B*)`.
pub fn polarity_isometry_check(a: &Cone, b: &Cone, cfg: &MetricConfig) -> Result<PolarityReport, MetricError> {
    let h_primal = hausdorff_h(a, b, cfg)?;
    let h_dual = hausdorff_h(&a.dual(), &b.dual(), cfg)?;
    let gap = (h_primal - h_dual).abs();
    Ok(PolarityReport { h_primal, h_dual, gap, tolerance: cfg.tolerance, passes: gap <= cfg.tolerance })
}

/// One checked pair of the sandwich `h ≤ ‖e₁ − e₂‖ ≤ √2·h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichSample {
    pub f1: usize,
    pub f2: usize,
    pub h: f64,
    pub e_distance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs_checked: usize,
    /// Pairs with negative `⟨e₁, e₂⟩`, outside the sandwich's regime.
    pub pairs_skipped: usize,
    pub violations: Vec<SandwichSample>,
    pub holds: bool,
}

fn sandwich(h: f64, e_distance: f64, tol: f64) -> bool {
    h <= e_distance + tol && e_distance <= std::f64::consts::SQRT_2 * h + tol
}

/// Sandwich test over the fibre `ξ⁻¹(E)` of a polyhedral stratification. For rays the
/// distance uses the closed form; otherwise the sampled `h`.
pub fn lipschitz_probe(e: usize, s: &Stratification, cfg: &MetricConfig) -> Result<LipschitzReport, MetricError> {
    let j = s.stratum_of(e)? + 1;
    if j > s.d() {
        return Err(MetricError::NotInXiImage(e));
    }
    let inc = incidence_space(s, j)?;
    let fibre: Vec<usize> = inc.pairs.iter().filter(|p| p.0 == e).map(|p| p.1).collect();
    if fibre.is_empty() {
        return Err(MetricError::NotInXiImage(e));
    }
    let geoms = fibre.iter().map(|&f| pair_geometry(e, f, s)).collect::<Result<Vec<_>, _>>()?;
    let mut report = LipschitzReport { pairs_checked: 0, pairs_skipped: 0, violations: Vec::new(), holds: true };
    for (a, ga) in geoms.iter().enumerate() {
        for (b, gb) in geoms.iter().enumerate().skip(a) {
            if dot(&ga.e_vector_unit, &gb.e_vector_unit) < 0.0 {
                report.pairs_skipped += 1;
                continue;
            }
            let (fa, fb) = (s.face(fibre[a]), s.face(fibre[b]));
            let h = if fa.dim == 1 && fb.dim == 1 {
                let ua = normalize(&vec_to_f64(&fa.relint_point));
                let ub = normalize(&vec_to_f64(&fb.relint_point));
                match ray_distance(&ua, &ub) {
                    Ok(h) => h,
                    Err(_) => hausdorff_h(&s.dual.face_cone(fa), &s.dual.face_cone(fb), cfg)?,
                }
            } else {
                hausdorff_h(&s.dual.face_cone(fa), &s.dual.face_cone(fb), cfg)?
            };
            let diff: Vec<f64> = ga.e_vector_unit.iter().zip(&gb.e_vector_unit).map(|(x, y)| x - y).collect();
            let e_distance = norm(&diff);
            let holds = sandwich(h, e_distance, cfg.tolerance);
            report.pairs_checked += 1;
            if !holds {
                report.violations.push(SandwichSample { f1: fibre[a], f2: fibre[b], h, e_distance, holds });
            }
        }
    }
    report.holds = report.violations.is_empty();
    Ok(report)
}

/// Sandwich test on the fibre over the Lorentz cone itself, where `F_ω = ℝ≥0·(1, ω)` and
/// `e_ω = (1, −ω)/√2`; `h` is the ray distance between the unit generators.
pub fn lorentz_lipschitz_probe(n: usize, samples: usize, tol: f64) -> LipschitzReport {
    let dirs = lorentz::sample_directions(n - 1, samples);
    let unit = |w: &[f64], sign: f64| {
        let mut v = vec![std::f64::consts::FRAC_1_SQRT_2];
        v.extend(w.iter().map(|x| sign * x * std::f64::consts::FRAC_1_SQRT_2));
        v
    };
    let m = dirs.len();
    let mut report = LipschitzReport { pairs_checked: 0, pairs_skipped: 0, violations: Vec::new(), holds: true };
    for a in 0..m {
        let b = (a + 1 + a * 37) % m;
        let (fa, fb) = (unit(&dirs[a], 1.0), unit(&dirs[b], 1.0));
        let c = dot(&fa, &fb).min(1.0);
        let h = (1.0 - c * c).max(0.0).sqrt();
        let (ea, eb) = (unit(&dirs[a], -1.0), unit(&dirs[b], -1.0));
        let e_distance = norm(&ea.iter().zip(&eb).map(|(x, y)| x - y).collect::<Vec<_>>());
        let holds = sandwich(h, e_distance, tol);
        report.pairs_checked += 1;
        if !holds {
            report.violations.push(SandwichSample { f1: a, f2: b, h, e_distance, holds });
        }
    }
    report.holds = report.violations.is_empty();
    report
}

/// Unit vector `((1 − s²)/(1 + s²), 2s/(1 + s²))` with rational coordinates for rational `s`.
pub fn rational_unit_circle_point(s: &crate::ratlin::Rational) -> Vec<crate::ratlin::Rational> {
    use num_traits::One;
    let one = crate::ratlin::Rational::one();
    let d = &one + s * s;
    vec![(&one - s * s) / &d, (s * crate::ratlin::int(2)) / &d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycone::fixtures::*;
    use crate::ratlin::{qvec, rat};

    fn ray(v: &[i64]) -> Cone {
        Cone::from_generators(v.len(), &[qvec(v)]).unwrap()
    }

    #[test]
    fn excess_examples() {
        let cfg = MetricConfig::default();
        let x = ray(&[1, 0]);
        let y = ray(&[0, 1]);
        assert_eq!(excess(&x, &orthant(2), &cfg).unwrap(), 0.0);
        assert!((excess(&x, &y, &cfg).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(hausdorff_h(&x, &x, &cfg).unwrap(), 0.0);
        assert!(matches!(excess(&x, &orthant(3), &cfg), Err(MetricError::DimensionMismatch(2, 3))));
    }

    #[test]
    fn ray_distance_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(ray_distance(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(ray_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((ray_distance(&[1.0, 0.0], &[s, s]).unwrap() - s).abs() < 1e-12);
        assert!(matches!(ray_distance(&[1.0, 0.0], &[-1.0, 0.0]), Err(MetricError::NegativeInnerProduct(_))));
        assert!(matches!(ray_distance(&[2.0, 0.0], &[1.0, 0.0]), Err(MetricError::NotUnit(_))));
    }

    #[test]
    fn rays_match_closed_form() {
        let cfg = MetricConfig::default();
        let base = ray(&[1, 0]);
        for k in 0..=24 {
            let p = rational_unit_circle_point(&rat(k, 24));
            let other = Cone::from_generators(2, std::slice::from_ref(&p)).unwrap();
            let h = hausdorff_h(&base, &other, &cfg).unwrap();
            let closed = ray_distance(&[1.0, 0.0], &vec_to_f64(&p)).unwrap();
            assert!((h - closed).abs() <= cfg.tolerance, "k={k}: {h} vs {closed}");
        }
    }

    /// Dense angular grid oracle for the quadrant against the half-plane `{x ≥ 0}`.
    #[test]
    fn quadrant_vs_halfplane_against_grid() {
        let cfg = MetricConfig::default();
        let quadrant = orthant(2);
        let halfplane = Cone::from_inequalities(2, &[qvec(&[1, 0])]).unwrap();
        let h = hausdorff_h(&quadrant, &halfplane, &cfg).unwrap();
        let dist_quadrant = |x: f64, y: f64| (x.min(0.0).powi(2) + y.min(0.0).powi(2)).sqrt();
        let grid = 100_000;
        let oracle = (0..grid)
            .map(|k| -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / (grid - 1) as f64)
            .map(|a| dist_quadrant(a.cos(), a.sin()))
            .fold(0.0, f64::max);
        assert!((h - oracle).abs() <= cfg.tolerance);
        assert!((h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_and_triangle() {
        let cfg = MetricConfig::default();
        let cones = [
            orthant(3),
            square_cone(),
            Cone::from_generators(3, &[qvec(&[1, 0, 2]), qvec(&[0, 1, 1]), qvec(&[-1, -1, 3])]).unwrap(),
        ];
        for a in &cones {
            for b in &cones {
                assert_eq!(hausdorff_h(a, b, &cfg).unwrap(), hausdorff_h(b, a, &cfg).unwrap());
                for c in &cones {
                    let lhs = hausdorff_h(a, c, &cfg).unwrap();
                    let rhs = hausdorff_h(a, b, &cfg).unwrap() + hausdorff_h(b, c, &cfg).unwrap();
                    assert!(lhs <= rhs + 2.0 * cfg.tolerance);
                }
            }
        }
    }

    #[test]
    fn denser_grid_does_not_decrease_excess() {
        let a = square_cone();
        let b = Cone::from_generators(3, &[qvec(&[1, 0, 2]), qvec(&[0, 1, 1]), qvec(&[-1, -1, 3])]).unwrap();
        let mut last = 0.0;
        for samples in [256, 512, 1024, 2048, 4096] {
            let cfg = MetricConfig { sphere_samples_per_dim: Some(samples), refinement_rounds: 0, tolerance: 5e-3 };
            let e = excess(&a, &b, &cfg).unwrap();
            assert!(e >= last - 1e-9);
            last = e;
        }
    }

    #[test]
    fn polarity_on_rays_and_fixtures() {
        let cfg = MetricConfig::default();
        let q = orthant(3);
        assert_eq!(polarity_isometry_check(&q, &q, &cfg).unwrap().gap, 0.0);
        let base = ray(&[1, 0]);
        for k in [1, 5, 12, 24] {
            let other = Cone::from_generators(2, &[rational_unit_circle_point(&rat(k, 24))]).unwrap();
            let r = polarity_isometry_check(&base, &other, &cfg).unwrap();
            assert!(r.passes, "{r:?}");
        }
        let r = polarity_isometry_check(&orthant(3), &square_cone(), &cfg).unwrap();
        assert!(r.passes, "{r:?}");
    }

    #[test]
    fn lorentz_sandwich() {
        for n in [3, 4] {
            let r = lorentz_lipschitz_probe(n, 720, 1e-12);
            assert_eq!(r.pairs_checked, 720);
            assert!(r.holds);
        }
    }

    #[test]
    fn square_cone_fibre_probe() {
        let cfg = MetricConfig::default();
        let s = crate::strata::stratify(&square_cone()).unwrap();
        for &e in s.strata[0].iter().chain(&s.strata[1]).chain(&s.strata[2]) {
            let r = lipschitz_probe(e, &s, &cfg).unwrap();
            assert!(r.pairs_checked >= 1);
        }
        assert!(matches!(lipschitz_probe(s.strata[3][0], &s, &cfg), Err(MetricError::NotInXiImage(_))));
    }
}
