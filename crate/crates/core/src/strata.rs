//! Stratification of the boundary of a cone by the face dimensions of its dual.
//!
//! For a pointed solid cone Ω with dual face dimensions `0 = n_0 < … < n_d = n`,
//! stratum `P_j` holds the faces of Ω* of dimension `n_{d−j}`, the fibre of
//! `Σ_j` over `F` is `F⊥`, and `𝒫_j` is the set of containing pairs
//! `(E, F) ∈ P_{j−1} × P_j`. Polyhedral cones are handled exactly; the Lorentz
//! cone has closed forms in [`lorentz`].

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polycone::{dual_face, face_lattice, is_exposed, Cone, ConeError, Face, FaceLattice};
use crate::ratlin::{self, dot, rank_of_vectors, vec_to_f64, QVector, RationalMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("stratum index {j} out of range 1..={d}")]
    IndexOutOfRange { j: usize, d: usize },
    #[error("face {0} is not in the face lattice of the dual cone")]
    UnknownFace(usize),
    #[error("faces {e} and {f} do not form a containing pair of consecutive strata")]
    NotAPair { e: usize, f: usize },
    #[error("F⊥ ∩ E^⊛ has dimension {0}, expected a single ray")]
    RayDegeneracy(usize),
}

/// Stratification data of a polyhedral cone Ω, computed from the face lattice of Ω*.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub ambient_dim: usize,
    /// `n_0 < n_1 < … < n_d`.
    pub dims: Vec<usize>,
    /// `strata[j]` lists lattice indices of faces of Ω* with dimension `n_{d−j}`.
    pub strata: Vec<Vec<usize>>,
    pub facially_compact: bool,
    pub primal: Cone,
    pub dual: Cone,
    pub lattice: FaceLattice,
}

/// The fibre `F⊥` of `Σ_j` over `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaFiber {
    pub face: usize,
    pub basis: RationalMatrix,
}

impl SigmaFiber {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// The incidence space `𝒫_j` with its projections `ξ(E,F) = E`, `η(E,F) = F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSpace {
    pub j: usize,
    pub pairs: Vec<(usize, usize)>,
    pub xi_image: Vec<usize>,
    pub xi_surjective: bool,
    pub eta_surjective: bool,
}

/// Exact geometry of a pair `(E, F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGeometry {
    pub e_face: usize,
    pub f_face: usize,
    /// Primitive generator of the ray `F⊥ ∩ E^⊛`.
    pub e_vector_ray: QVector,
    pub e_vector_unit: Vec<f64>,
    /// `span E ∩ F⊥ ∩ e⊥`.
    pub half_space_basis: RationalMatrix,
    pub e_perp_basis: RationalMatrix,
    pub f_perp_basis: RationalMatrix,
}

/// Result of the local smoothness test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub locally_smooth: bool,
    /// Offending `(E, F)` pairs as lattice indices.
    pub witnesses: Vec<(usize, usize)>,
    pub modular_faces_checked: usize,
    pub pairs_checked: usize,
}

/// Size of a stratum: finite, or a continuum described by its parameter manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumSize {
    Finite(usize),
    Continuum(String),
}

/// Shape-only view of a stratification, shared by polyhedral and closed-form cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationSummary {
    pub ambient_dim: usize,
    pub dims: Vec<usize>,
    pub stratum_sizes: Vec<StratumSize>,
    pub facially_compact: bool,
}

/// Computes the stratification of a pointed solid polyhedral cone.
pub fn stratify(omega: &Cone) -> Result<Stratification, StrataError> {
    if !omega.is_pointed() {
        return Err(ConeError::NotPointed(omega.lineality().len()).into());
    }
    if !omega.is_solid() {
        return Err(ConeError::NotSolid { span: omega.dim(), ambient: omega.ambient_dim() }.into());
    }
    let dual = omega.dual();
    let lattice = face_lattice(&dual)?;
    let dims = lattice.dims_present.clone();
    let d = dims.len() - 1;
    let strata: Vec<Vec<usize>> = (0..=d).map(|j| lattice.faces_of_dim(dims[d - j]).collect()).collect();
    Ok(Stratification {
        ambient_dim: omega.ambient_dim(),
        dims,
        strata,
        facially_compact: true,
        primal: omega.clone(),
        dual,
        lattice,
    })
}

impl Stratification {
    pub fn d(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn face(&self, index: usize) -> &Face {
        &self.lattice.faces[index]
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// The `j` with `face ∈ P_j`.
    pub fn stratum_of(&self, face: usize) -> Result<usize, StrataError> {
        let dim = self.lattice.faces.get(face).ok_or(StrataError::UnknownFace(face))?.dim;
        let pos = self.dims.iter().position(|&x| x == dim).expect("face dims come from the lattice");
        Ok(self.d() - pos)
    }

    pub fn sigma_fiber(&self, face: usize) -> Result<SigmaFiber, StrataError> {
        let f = self.lattice.faces.get(face).ok_or(StrataError::UnknownFace(face))?;
        Ok(SigmaFiber { face, basis: f.orthogonal_complement() })
    }

    /// `n − n_{d−j}`.
    pub fn fiber_dim(&self, j: usize) -> usize {
        self.ambient_dim - self.dims[self.d() - j]
    }

    /// Dimension of the half space for pairs in `𝒫_j`: `n_{d−j+1} − n_{d−j} − 1`.
    pub fn half_space_dim(&self, j: usize) -> usize {
        let d = self.d();
        self.dims[d - j + 1] - self.dims[d - j] - 1
    }

    /// The alternative index reading `n_{d−j−1} − n_{d−j} − 1`, when defined.
    pub fn alternative_half_space_dim(&self, j: usize) -> Option<i64> {
        let d = self.d();
        (j < d).then(|| self.dims[d - j - 1] as i64 - self.dims[d - j] as i64 - 1)
    }

    pub fn summary(&self) -> StratificationSummary {
        StratificationSummary {
            ambient_dim: self.ambient_dim,
            dims: self.dims.clone(),
            stratum_sizes: self.strata.iter().map(|s| StratumSize::Finite(s.len())).collect(),
            facially_compact: self.facially_compact,
        }
    }

    /// The generators of a face of Ω* as vectors.
    pub fn face_generators(&self, face: usize) -> Vec<QVector> {
        self.lattice.faces[face].generators(&self.dual).cloned().collect()
    }
}

pub fn incidence_space(s: &Stratification, j: usize) -> Result<IncidenceSpace, StrataError> {
    let d = s.d();
    if j == 0 || j > d {
        return Err(StrataError::IndexOutOfRange { j, d });
    }
    let mut pairs = Vec::new();
    for &e in &s.strata[j - 1] {
        for &f in &s.strata[j] {
            if s.lattice.faces[e].contains_face(&s.lattice.faces[f]) {
                pairs.push((e, f));
            }
        }
    }
    let mut xi_image: Vec<usize> = pairs.iter().map(|&(e, _)| e).collect();
    xi_image.dedup();
    let xi_surjective = xi_image.len() == s.strata[j - 1].len();
    let eta_surjective = s.strata[j].iter().all(|f| pairs.iter().any(|(_, g)| g == f));
    Ok(IncidenceSpace { j, pairs, xi_image, xi_surjective, eta_surjective })
}

/// Whether `E` contains a face of the largest dimension present strictly below `dim E`.
pub fn is_modular(e: usize, s: &Stratification) -> bool {
    let dim = s.lattice.faces[e].dim;
    let Some(&below) = s.dims.iter().rev().find(|&&x| x < dim) else {
        return false;
    };
    s.lattice.faces_of_dim(below).any(|f| s.lattice.faces[e].contains_face(&s.lattice.faces[f]))
}

/// The relative dual `E^⊛ = E* ∩ span E` as a pointed cone whose generators lie in `span E`.
pub fn relative_dual(e: usize, s: &Stratification) -> Cone {
    let face = &s.lattice.faces[e];
    if face.is_zero() {
        return Cone::zero(s.ambient_dim);
    }
    s.dual.face_cone(face).dual().pointed_part()
}

/// Indices of generators of `E^⊛` orthogonal to every generator of `F`.
fn relative_dual_face(e_star: &Cone, f_gens: &[QVector]) -> Vec<usize> {
    (0..e_star.generators().len()).filter(|&i| f_gens.iter().all(|g| dot(g, &e_star.generators()[i]).is_zero())).collect()
}

/// Every modular face must be smooth: for each maximal subface `F` of a modular `E`,
/// the face `F⊥ ∩ E^⊛` of the relative dual is a single exposed ray.
pub fn is_locally_smooth(s: &Stratification) -> SmoothnessReport {
    let modular: Vec<usize> = (0..s.lattice.len()).filter(|&e| is_modular(e, s)).collect();
    let checks: Vec<(usize, usize, bool)> = modular
        .par_iter()
        .flat_map_iter(|&e| {
            let dim = s.lattice.faces[e].dim;
            let below = *s.dims.iter().rev().find(|&&x| x < dim).expect("modular faces are nonzero");
            let e_star = relative_dual(e, s);
            let subfaces: Vec<usize> =
                s.lattice.faces_of_dim(below).filter(|&f| s.lattice.faces[e].contains_face(&s.lattice.faces[f])).collect();
            subfaces
                .into_iter()
                .map(|f| {
                    let set = relative_dual_face(&e_star, &s.face_generators(f));
                    let face = e_star.face_from_set(&set);
                    let smooth = face.dim == 1 && is_exposed(&face, &e_star).unwrap_or(false);
                    (e, f, smooth)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let witnesses: Vec<(usize, usize)> = checks.iter().filter(|c| !c.2).map(|c| (c.0, c.1)).collect();
    SmoothnessReport {
        locally_smooth: witnesses.is_empty(),
        witnesses,
        modular_faces_checked: modular.len(),
        pairs_checked: checks.len(),
    }
}

pub fn pair_geometry(e: usize, f: usize, s: &Stratification) -> Result<PairGeometry, StrataError> {
    let n = s.ambient_dim;
    let (ef, ff) =
        (s.lattice.faces.get(e).ok_or(StrataError::UnknownFace(e))?, s.lattice.faces.get(f).ok_or(StrataError::UnknownFace(f))?);
    let j = s.stratum_of(f)?;
    if j == 0 || s.stratum_of(e)? != j - 1 || !ef.contains_face(ff) {
        return Err(StrataError::NotAPair { e, f });
    }
    let e_star = relative_dual(e, s);
    let f_gens = s.face_generators(f);
    let set = relative_dual_face(&e_star, &f_gens);
    let ray_face = e_star.face_from_set(&set);
    if ray_face.dim != 1 {
        return Err(StrataError::RayDegeneracy(ray_face.dim));
    }
    let e_vector_ray = e_star.generators()[set[0]].clone();
    let approx = vec_to_f64(&e_vector_ray);
    let norm = approx.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e_vector_unit = approx.iter().map(|x| x / norm).collect();

    let e_perp_basis = ef.orthogonal_complement();
    let f_perp_basis = ff.orthogonal_complement();
    let mut constraints: Vec<QVector> = f_gens;
    constraints.extend(e_perp_basis.columns());
    constraints.push(e_vector_ray.clone());
    let half_space_basis = ratlin::complement_of_span(&constraints, n);
    Ok(PairGeometry { e_face: e, f_face: f, e_vector_ray, e_vector_unit, half_space_basis, e_perp_basis, f_perp_basis })
}

/// Exact check of `F⊥ = E⊥ ⊕ E_{1/2}(F) ⊕ ℝ·e`: pieces pairwise orthogonal, inside `F⊥`,
/// independent, and of total dimension `dim F⊥`.
pub fn verify_decomposition(g: &PairGeometry) -> bool {
    let n = g.f_perp_basis.rows();
    let e_perp = g.e_perp_basis.columns();
    let half = g.half_space_basis.columns();
    let ray = [g.e_vector_ray.clone()];
    let orthogonal = |a: &[QVector], b: &[QVector]| a.iter().all(|x| b.iter().all(|y| dot(x, y).is_zero()));
    let pieces = [&e_perp[..], &half[..], &ray[..]];
    for a in 0..3 {
        for b in a + 1..3 {
            if !orthogonal(pieces[a], pieces[b]) {
                return false;
            }
        }
    }
    let fperp = g.f_perp_basis.columns();
    let all: Vec<QVector> = pieces.concat();
    let fdim = fperp.len();
    let inside = rank_of_vectors(&[fperp.clone(), all.clone()].concat(), n) == fdim;
    inside && all.len() == fdim && rank_of_vectors(&all, n) == fdim
}

/// Geometry for every pair of every `𝒫_j`, in order.
pub fn all_pair_geometries(s: &Stratification) -> Result<Vec<PairGeometry>, StrataError> {
    let pairs: Vec<(usize, usize)> =
        (1..=s.d()).map(|j| incidence_space(s, j)).collect::<Result<Vec<_>, _>>()?.into_iter().flat_map(|p| p.pairs).collect();
    pairs.par_iter().map(|&(e, f)| pair_geometry(e, f, s)).collect()
}

/// Whether `(E,F) ↦ (E, e)` is injective: distinct `F` over the same `E` give distinct rays.
pub fn embedding_is_injective(geoms: &[PairGeometry]) -> bool {
    geoms.iter().enumerate().all(|(i, a)| {
        geoms[i + 1..].iter().all(|b| a.e_face != b.e_face || a.f_face == b.f_face || a.e_vector_ray != b.e_vector_ray)
    })
}

/// Consistency of dual faces with strata: `F ∈ P_j` corresponds to a `j`-dimensional face of Ω.
pub fn dual_face_dimension(s: &Stratification, face: usize) -> Result<usize, StrataError> {
    Ok(dual_face(&s.lattice.faces[face], &s.dual)?.dim)
}

/// Closed forms for the Lorentz cone `L = {(t, x) : t ≥ ‖x‖}` in ℝⁿ.
///
/// `L` is self-dual, its face dimensions are `{0, 1, n}`, and its extreme rays are
/// `ℝ≥0·(1, ω)` for unit `ω ∈ ℝ^{n−1}`.
pub mod lorentz {
    use super::{StratificationSummary, StratumSize};

    /// Unit directions in ℝᵐ: the circle for `m = 2`, Fibonacci sphere for `m = 3`,
    /// normalized Halton points otherwise.
    pub fn sample_directions(m: usize, count: usize) -> Vec<Vec<f64>> {
        use std::f64::consts::PI;
        match m {
            0 => Vec::new(),
            1 => vec![vec![1.0], vec![-1.0]],
            2 => (0..count).map(|k| 2.0 * PI * k as f64 / count as f64).map(|a| vec![a.cos(), a.sin()]).collect(),
            3 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..count)
                    .map(|k| {
                        let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                        let r = (1.0 - z * z).sqrt();
                        let a = golden * k as f64;
                        vec![r * a.cos(), r * a.sin(), z]
                    })
                    .collect()
            }
            _ => crate::curvedcones::halton_unit_vectors(m, count, 1),
        }
    }

    /// Float geometry of a pair, with orthonormal bases.
    #[derive(Clone, Debug)]
    pub struct FloatPairGeometry {
        pub e_unit: Vec<f64>,
        pub half_space_basis: Vec<Vec<f64>>,
        pub e_perp_basis: Vec<Vec<f64>>,
        pub f_perp_basis: Vec<Vec<f64>>,
    }

    pub fn summary(n: usize) -> StratificationSummary {
        let rays = if n == 2 { StratumSize::Finite(2) } else { StratumSize::Continuum(format!("S^{}", n - 2)) };
        StratificationSummary {
            ambient_dim: n,
            dims: vec![0, 1, n],
            stratum_sizes: vec![StratumSize::Finite(1), rays, StratumSize::Finite(1)],
            facially_compact: true,
        }
    }

    /// Orthonormal basis of `ω⊥` in ℝᵐ by Gram–Schmidt against the standard basis.
    pub fn orthonormal_complement(omega: &[f64]) -> Vec<Vec<f64>> {
        let m = omega.len();
        let mut basis: Vec<Vec<f64>> = vec![omega.to_vec()];
        for i in 0..m {
            let mut v = vec![0.0; m];
            v[i] = 1.0;
            for b in &basis {
                let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                basis.push(v.iter().map(|x| x / norm).collect());
            }
            if basis.len() == m {
                break;
            }
        }
        basis.remove(0);
        basis
    }

    fn lift(first: f64, rest: &[f64]) -> Vec<f64> {
        let mut v = vec![first];
        v.extend_from_slice(rest);
        v
    }

    /// `E = L`, `F = ℝ≥0·(1, ω)`: `e = (1, −ω)/√2`, `E_{1/2}(F) = {(0, w) : w ⊥ ω}`.
    pub fn top_pair(omega: &[f64]) -> FloatPairGeometry {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e_unit = lift(s, &omega.iter().map(|x| -x * s).collect::<Vec<_>>());
        let half_space_basis: Vec<Vec<f64>> = orthonormal_complement(omega).iter().map(|w| lift(0.0, w)).collect();
        let mut f_perp_basis = vec![e_unit.clone()];
        f_perp_basis.extend(half_space_basis.iter().cloned());
        FloatPairGeometry { e_unit, half_space_basis, e_perp_basis: Vec::new(), f_perp_basis }
    }

    /// `E = ℝ≥0·(1, ω)`, `F = {0}`: `e = (1, ω)/√2`, `E_{1/2}(F) = 0`, `E⊥ = (1, ω)⊥`.
    pub fn ray_pair(omega: &[f64]) -> FloatPairGeometry {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = omega.len() + 1;
        let e_unit = lift(s, &omega.iter().map(|x| x * s).collect::<Vec<_>>());
        let mut e_perp_basis = vec![lift(s, &omega.iter().map(|x| -x * s).collect::<Vec<_>>())];
        e_perp_basis.extend(orthonormal_complement(omega).iter().map(|w| lift(0.0, w)));
        let f_perp_basis = (0..n).map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 }).collect()).collect();
        FloatPairGeometry { e_unit, half_space_basis: Vec::new(), e_perp_basis, f_perp_basis }
    }

    /// Largest violation among orthogonality, unit norm, membership in `F⊥` and spanning `F⊥`;
    /// `None` when the dimensions do not add up.
    pub fn decomposition_residual(g: &FloatPairGeometry) -> Option<f64> {
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut pieces: Vec<&Vec<f64>> = g.e_perp_basis.iter().collect();
        pieces.extend(g.half_space_basis.iter());
        pieces.push(&g.e_unit);
        if pieces.len() != g.f_perp_basis.len() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (i, a) in pieces.iter().enumerate() {
            worst = worst.max((dot(a, a) - 1.0).abs());
            for b in &pieces[i + 1..] {
                worst = worst.max(dot(a, b).abs());
            }
            // a ∈ F⊥: a equals its projection onto the orthonormal F⊥ basis
            let mut r = (*a).clone();
            for b in &g.f_perp_basis {
                let c = dot(a, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            worst = worst.max(r.iter().map(|x| x.abs()).fold(0.0, f64::max));
        }
        Some(worst)
    }

    /// Face dimensions present below `dim`, for modularity.
    pub fn is_modular(face_dim: usize, n: usize) -> bool {
        let dims = [0, 1, n];
        face_dim > 0 && dims.contains(&face_dim)
    }

    /// `F⊥ ∩ L = ℝ≥0·(1, −ω)` is a single exposed ray for every ω, and the only
    /// modular faces are `L` and its rays, so `L` is locally smooth.
    pub fn is_locally_smooth(n: usize, samples: usize) -> (bool, usize) {
        let dirs = sample_directions(n - 1, samples);
        let ok = dirs.iter().all(|w| {
            let g = top_pair(w);
            let p = crate::curvedcones::LorentzCone::new(n).unwrap();
            // e ∈ L, ⟨e, (1, ω)⟩ = 0 and e is on the boundary
            let f = lift(1.0, w);
            let dot: f64 = g.e_unit.iter().zip(&f).map(|(a, b)| a * b).sum();
            p.contains(&g.e_unit) && dot.abs() < 1e-12 && p.boundary_residual(&g.e_unit).abs() < 1e-12
        });
        (ok, dirs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycone::fixtures::*;
    use crate::ratlin::qvec;

    #[test]
    fn fixture_stratum_sizes() {
        let s = stratify(&half_line()).unwrap();
        assert_eq!(s.dims, vec![0, 1]);
        assert_eq!(s.stratum_sizes(), vec![1, 1]);
        assert_eq!(stratify(&orthant(3)).unwrap().stratum_sizes(), vec![1, 3, 3, 1]);
        let sq = stratify(&square_cone()).unwrap();
        assert_eq!(sq.dims, vec![0, 1, 2, 3]);
        assert_eq!(sq.stratum_sizes(), vec![1, 4, 4, 1]);
        assert_eq!(sq.face(sq.strata[0][0]).dim, 3);
        assert!(sq.face(sq.strata[3][0]).is_zero());
    }

    #[test]
    fn rejects_non_pointed_or_non_solid() {
        let ray = Cone::from_generators(2, &[qvec(&[1, 0])]).unwrap();
        assert!(matches!(stratify(&ray), Err(StrataError::Cone(ConeError::NotSolid { .. }))));
        assert!(matches!(stratify(&ray.dual()), Err(StrataError::Cone(ConeError::NotPointed(1)))));
    }

    #[test]
    fn partition_and_fibres() {
        for c in [half_line(), orthant(3), square_cone()] {
            let s = stratify(&c).unwrap();
            assert_eq!(s.stratum_sizes().iter().sum::<usize>(), s.lattice.len());
            for j in 0..=s.d() {
                for &f in &s.strata[j] {
                    let fib = s.sigma_fiber(f).unwrap();
                    assert_eq!(fib.dim(), s.fiber_dim(j));
                    for g in s.face_generators(f) {
                        assert!(fib.basis.columns().iter().all(|b| dot(b, &g).is_zero()));
                    }
                    assert_eq!(s.stratum_of(f).unwrap(), j);
                    assert_eq!(dual_face_dimension(&s, f).unwrap(), j);
                }
            }
        }
    }

    #[test]
    fn incidence_examples() {
        let sq = stratify(&square_cone()).unwrap();
        let sizes: Vec<usize> = (1..=3).map(|j| incidence_space(&sq, j).unwrap().pairs.len()).collect();
        assert_eq!(sizes, vec![4, 8, 4]);
        let p2 = incidence_space(&sq, 2).unwrap();
        assert!(p2.xi_surjective && p2.eta_surjective);
        let q = stratify(&orthant(3)).unwrap();
        let p1 = incidence_space(&q, 1).unwrap();
        assert_eq!(p1.pairs.len(), 3);
        assert!(p1.xi_surjective);
        let last = incidence_space(&q, 3).unwrap();
        assert!(last.pairs.iter().all(|&(_, f)| f == q.strata[3][0]));
        assert!(last.eta_surjective);
        assert_eq!(incidence_space(&q, 0), Err(StrataError::IndexOutOfRange { j: 0, d: 3 }));
        assert_eq!(incidence_space(&q, 4), Err(StrataError::IndexOutOfRange { j: 4, d: 3 }));
    }

    #[test]
    fn modularity() {
        let sq = stratify(&square_cone()).unwrap();
        for e in 0..sq.lattice.len() {
            assert_eq!(is_modular(e, &sq), !sq.face(e).is_zero());
        }
    }

    #[test]
    fn polyhedral_fixtures_are_locally_smooth() {
        for c in [half_line(), orthant(2), orthant(3), square_cone()] {
            let r = is_locally_smooth(&stratify(&c).unwrap());
            assert!(r.locally_smooth);
            assert!(r.witnesses.is_empty());
            assert!(r.pairs_checked > 0);
        }
    }

    #[test]
    fn quadrant_pair_geometry() {
        let q = stratify(&orthant(2)).unwrap();
        let top = q.strata[0][0];
        let x_axis = q.lattice.find(&[q.dual.generators().iter().position(|g| *g == qvec(&[1, 0])).unwrap()]).unwrap();
        let g = pair_geometry(top, x_axis, &q).unwrap();
        assert_eq!(g.e_vector_ray, qvec(&[0, 1]));
        assert_eq!(g.half_space_basis.cols(), 0);
        assert!(verify_decomposition(&g));
        assert!(matches!(pair_geometry(x_axis, top, &q), Err(StrataError::NotAPair { .. })));
    }

    #[test]
    fn decomposition_holds_on_fixtures() {
        for c in [half_line(), orthant(2), orthant(3), square_cone()] {
            let s = stratify(&c).unwrap();
            let geoms = all_pair_geometries(&s).unwrap();
            for g in &geoms {
                assert!(verify_decomposition(g));
                let j = s.stratum_of(g.f_face).unwrap();
                assert_eq!(g.half_space_basis.cols(), s.half_space_dim(j));
                assert!(relative_dual(g.e_face, &s).contains(&g.e_vector_ray));
                assert!(s.face_generators(g.f_face).iter().all(|f| dot(f, &g.e_vector_ray).is_zero()));
            }
            assert!(embedding_is_injective(&geoms));
        }
        let sq = stratify(&square_cone()).unwrap();
        assert_eq!(all_pair_geometries(&sq).unwrap().len(), 16);
    }

    #[test]
    fn lorentz_closed_forms() {
        for n in [3, 4] {
            let dirs = lorentz::sample_directions(n - 1, 720);
            assert_eq!(dirs.len(), 720);
            for w in &dirs {
                let top = lorentz::top_pair(w);
                assert_eq!(top.half_space_basis.len(), n - 2);
                assert!(lorentz::decomposition_residual(&top).unwrap() <= 1e-12);
                let ray = lorentz::ray_pair(w);
                assert!(ray.half_space_basis.is_empty());
                assert!(lorentz::decomposition_residual(&ray).unwrap() <= 1e-12);
            }
        }
        assert!(lorentz::is_modular(3, 3) && lorentz::is_modular(1, 3) && !lorentz::is_modular(0, 3));
        assert!(lorentz::is_locally_smooth(3, 720).0);
    }
}
