//! Polyhedral cones in both representations, computed exactly.
//!
//! A [`Cone`] stores the pair
//!
//! * V-side: extreme rays (`generators`, orthogonal to the lineality space)
//!   and a basis of the lineality space (`lineality`);
//! * H-side: facet normals `a` meaning `⟨a, x⟩ ≥ 0` (`inequalities`, lying in
//!   the span of the cone) and a basis of the orthogonal complement of the
//!   span (`equalities`).
//!
//! With this convention the dual cone is obtained by swapping the two sides.
//! Conversions use the double description method with an algebraic (rank)
//! adjacency test.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ratlin::{
    self, canonical_basis, dot, is_zero_vec, primitive, project_onto_span, rank_of_vectors, QVector, Rational, RationalMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("no input vectors")]
    EmptyInput,
    #[error("input vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("input vector {index} has length {got}, expected {expected}")]
    LengthMismatch { index: usize, expected: usize, got: usize },
    #[error("cone is not pointed (lineality dimension {0})")]
    NotPointed(usize),
    #[error("cone is not solid (span dimension {span} < {ambient})")]
    NotSolid { span: usize, ambient: usize },
    #[error("generator set {0:?} is not a face of the cone")]
    NotAFace(Vec<usize>),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// A closed convex polyhedral cone with both representations populated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<QVector>,
    lineality: Vec<QVector>,
    inequalities: Vec<QVector>,
    equalities: Vec<QVector>,
}

/// How the output generator list is ordered.
#[derive(Clone, Copy)]
enum RayOrder<'a> {
    /// Follow the first proportional vector in this list.
    Like(&'a [QVector]),
    Lexicographic,
}

impl Cone {
    /// The cone `{0}` in ℝⁿ.
    pub fn zero(ambient_dim: usize) -> Cone {
        Cone {
            ambient_dim,
            generators: Vec::new(),
            lineality: Vec::new(),
            inequalities: Vec::new(),
            equalities: canonical_basis(&identity_rows(ambient_dim), ambient_dim),
        }
    }

    /// The whole space ℝⁿ.
    pub fn full_space(ambient_dim: usize) -> Cone {
        Cone::zero(ambient_dim).dual()
    }

    /// Builds a cone from a V-representation (conic hull of `generators`).
    pub fn from_generators(ambient_dim: usize, generators: &[QVector]) -> Result<Cone, ConeError> {
        validate_input(ambient_dim, generators)?;
        // H-side: the dual cone {y : ⟨g, y⟩ ≥ 0}
        let (dual_lines, dual_rays) = double_description(ambient_dim, generators, &[]);
        let equalities = canonical_basis(&dual_lines, ambient_dim);
        let inequalities = canonical_rays(&dual_rays, &equalities, ambient_dim, RayOrder::Lexicographic);
        // V-side, irredundant, from the H-side
        let (lines, rays) = double_description(ambient_dim, &inequalities, &equalities);
        let lineality = canonical_basis(&lines, ambient_dim);
        let generators = canonical_rays(&rays, &lineality, ambient_dim, RayOrder::Like(generators));
        Ok(Cone { ambient_dim, generators, lineality, inequalities, equalities })
    }

    /// Builds a cone from an H-representation `{x : ⟨a, x⟩ ≥ 0 for all a}`.
    pub fn from_inequalities(ambient_dim: usize, inequalities: &[QVector]) -> Result<Cone, ConeError> {
        validate_input(ambient_dim, inequalities)?;
        let (lines, rays) = double_description(ambient_dim, inequalities, &[]);
        let lineality = canonical_basis(&lines, ambient_dim);
        let generators = canonical_rays(&rays, &lineality, ambient_dim, RayOrder::Lexicographic);
        let mut v_side: Vec<QVector> = generators.clone();
        for l in &lineality {
            v_side.push(l.clone());
            v_side.push(l.iter().map(|x| -x).collect());
        }
        if v_side.is_empty() {
            return Ok(Cone::zero(ambient_dim));
        }
        let (dual_lines, dual_rays) = double_description(ambient_dim, &v_side, &[]);
        let equalities = canonical_basis(&dual_lines, ambient_dim);
        let inequalities = canonical_rays(&dual_rays, &equalities, ambient_dim, RayOrder::Like(inequalities));
        Ok(Cone { ambient_dim, generators, lineality, inequalities, equalities })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    pub fn lineality(&self) -> &[QVector] {
        &self.lineality
    }

    pub fn inequalities(&self) -> &[QVector] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[QVector] {
        &self.equalities
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_solid(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equalities.len()
    }

    /// Dual cone `{y : ⟨y, x⟩ ≥ 0 for all x ∈ C}`; the two representations swap.
    pub fn dual(&self) -> Cone {
        Cone {
            ambient_dim: self.ambient_dim,
            generators: self.inequalities.clone(),
            lineality: self.equalities.clone(),
            inequalities: self.generators.clone(),
            equalities: self.lineality.clone(),
        }
    }

    /// `C ∩ L⊥` where `L` is the lineality space: a pointed cone with the same generators.
    pub fn pointed_part(&self) -> Cone {
        let mut equalities = self.equalities.clone();
        equalities.extend(self.lineality.iter().cloned());
        Cone {
            ambient_dim: self.ambient_dim,
            generators: self.generators.clone(),
            lineality: Vec::new(),
            inequalities: self.inequalities.clone(),
            equalities: canonical_basis(&equalities, self.ambient_dim),
        }
    }

    /// Exact membership test against the H-representation.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|a| !dot(a, x).is_negative()) && self.equalities.iter().all(|b| dot(b, x).is_zero())
    }

    /// Membership in the polar cone `{y : ⟨y, g⟩ ≤ 0}`.
    pub fn polar_contains(&self, y: &[Rational]) -> bool {
        self.generators.iter().all(|g| !dot(g, y).is_positive()) && self.lineality.iter().all(|l| dot(l, y).is_zero())
    }

    /// Same set as `other` (checked through mutual containment of generators).
    pub fn same_set(&self, other: &Cone) -> bool {
        let inside = |a: &Cone, b: &Cone| {
            a.generators.iter().all(|g| b.contains(g))
                && a.lineality.iter().all(|l| b.contains(l) && b.contains(&l.iter().map(|x| -x).collect::<Vec<_>>()))
        };
        self.ambient_dim == other.ambient_dim && inside(self, other) && inside(other, self)
    }

    /// Cross-validation of the two sides: every generator satisfies every inequality.
    pub fn is_consistent(&self) -> bool {
        let gens_ok = self.generators.iter().all(|g| self.contains(g));
        let lines_ok = self.lineality.iter().all(|l| {
            self.inequalities.iter().all(|a| dot(a, l).is_zero()) && self.equalities.iter().all(|b| dot(b, l).is_zero())
        });
        let span = rank_of_vectors(&[self.generators.clone(), self.lineality.clone()].concat(), self.ambient_dim);
        gens_ok && lines_ok && span == self.dim()
    }

    fn require_pointed(&self) -> Result<(), ConeError> {
        if self.is_pointed() {
            Ok(())
        } else {
            Err(ConeError::NotPointed(self.lineality.len()))
        }
    }

    /// Indices of generators tight on inequality `i`.
    fn facet_generator_set(&self, i: usize) -> BTreeSet<usize> {
        let a = &self.inequalities[i];
        (0..self.generators.len()).filter(|&g| dot(a, &self.generators[g]).is_zero()).collect()
    }

    /// Indices of inequalities tight on every generator in `set`.
    pub fn tight_inequalities(&self, set: &[usize]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&i| set.iter().all(|&g| dot(&self.inequalities[i], &self.generators[g]).is_zero()))
            .collect()
    }

    /// Smallest face containing the given generators, as a generator index set.
    pub fn face_closure(&self, set: &[usize]) -> Vec<usize> {
        let tight = self.tight_inequalities(set);
        (0..self.generators.len())
            .filter(|&g| tight.iter().all(|&i| dot(&self.inequalities[i], &self.generators[g]).is_zero()))
            .collect()
    }

    /// Builds the [`Face`] spanned by a set of generator indices (no face check).
    pub fn face_from_set(&self, set: &[usize]) -> Face {
        let vectors: Vec<QVector> = set.iter().map(|&g| self.generators[g].clone()).collect();
        let mut span_vectors = vectors.clone();
        span_vectors.extend(self.lineality.iter().cloned());
        let basis_idx = ratlin::independent_subset(&span_vectors, self.ambient_dim);
        let basis: Vec<QVector> = basis_idx.iter().map(|&i| span_vectors[i].clone()).collect();
        let span_basis = RationalMatrix::from_columns(&basis, self.ambient_dim);
        let relint_point = vectors.iter().fold(vec![Rational::zero(); self.ambient_dim], |acc, v| ratlin::add_vec(&acc, v));
        Face { generator_index_set: set.to_vec(), dim: basis.len(), span_basis, relint_point }
    }

    /// Face lookup with a face check.
    pub fn face(&self, set: &[usize]) -> Result<Face, ConeError> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&g| g >= self.generators.len()) || self.face_closure(&sorted) != sorted {
            return Err(ConeError::NotAFace(sorted));
        }
        Ok(self.face_from_set(&sorted))
    }

    /// The cone itself as a face.
    pub fn top_face(&self) -> Face {
        self.face_from_set(&(0..self.generators.len()).collect::<Vec<_>>())
    }

    /// The cone generated by the generators of `face` (plus lineality).
    pub fn face_cone(&self, face: &Face) -> Cone {
        let mut gens: Vec<QVector> = face.generator_index_set.iter().map(|&g| self.generators[g].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        if gens.is_empty() {
            return Cone::zero(self.ambient_dim);
        }
        Cone::from_generators(self.ambient_dim, &gens).expect("face generators are valid")
    }
}

fn identity_rows(n: usize) -> Vec<QVector> {
    (0..n).map(|i| (0..n).map(|j| if i == j { ratlin::int(1) } else { ratlin::int(0) }).collect()).collect()
}

fn validate_input(ambient_dim: usize, vectors: &[QVector]) -> Result<(), ConeError> {
    if ambient_dim == 0 {
        return Err(ConeError::ZeroDimension);
    }
    if vectors.is_empty() {
        return Err(ConeError::EmptyInput);
    }
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != ambient_dim {
            return Err(ConeError::LengthMismatch { index, expected: ambient_dim, got: v.len() });
        }
        if is_zero_vec(v) {
            return Err(ConeError::ZeroVector { index });
        }
    }
    Ok(())
}

/// Projects rays onto the orthogonal complement of `lines`, makes them
/// primitive, removes duplicates and orders them.
fn canonical_rays(rays: &[QVector], lines: &[QVector], dim: usize, order: RayOrder<'_>) -> Vec<QVector> {
    let line_basis = RationalMatrix::from_columns(lines, dim);
    let reduce = |r: &QVector| {
        let p = project_onto_span(&line_basis, r);
        primitive(&ratlin::sub_vec(r, &p))
    };
    let mut out: Vec<QVector> = Vec::new();
    for r in rays {
        let c = reduce(r);
        if !is_zero_vec(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    match order {
        RayOrder::Lexicographic => out.sort(),
        RayOrder::Like(reference) => {
            let key = |v: &QVector| reference.iter().position(|x| reduce(x) == *v).unwrap_or(usize::MAX);
            out.sort_by(|a, b| key(a).cmp(&key(b)).then_with(|| a.cmp(b)));
        }
    }
    out
}

struct DdRay {
    vector: QVector,
    zero_set: BTreeSet<usize>,
}

/// Double description: returns (lines, rays) generating
/// `{x : ⟨a, x⟩ ≥ 0 for a in inequalities, ⟨b, x⟩ = 0 for b in equalities}`.
/// Rays are extreme modulo the returned lineality.
fn double_description(dim: usize, inequalities: &[QVector], equalities: &[QVector]) -> (Vec<QVector>, Vec<QVector>) {
    let mut constraints: Vec<QVector> = Vec::new();
    for b in equalities {
        constraints.push(b.clone());
        constraints.push(b.iter().map(|x| -x).collect());
    }
    constraints.extend(inequalities.iter().cloned());

    let mut lines: Vec<QVector> = identity_rows(dim);
    let mut rays: Vec<DdRay> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        if let Some(li) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lines.remove(li);
            let mut s = dot(a, &l);
            if s.is_negative() {
                l = l.iter().map(|x| -x).collect();
                s = -s;
            }
            let shift = |v: &QVector| -> QVector {
                let c = dot(a, v) / &s;
                primitive(&ratlin::sub_vec(v, &ratlin::scale_vec(&l, &c)))
            };
            for m in lines.iter_mut() {
                *m = shift(m);
            }
            for r in rays.iter_mut() {
                r.vector = shift(&r.vector);
                r.zero_set.insert(k);
            }
            rays.push(DdRay { vector: primitive(&l), zero_set: (0..k).collect() });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot(a, &r.vector)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let target_rank = (dim - lines.len()).saturating_sub(2);

        let mut created: Vec<DdRay> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: BTreeSet<usize> = rays[p].zero_set.intersection(&rays[q].zero_set).copied().collect();
                if common.len() < target_rank {
                    continue;
                }
                let rows: Vec<QVector> = common.iter().map(|&i| constraints[i].clone()).collect();
                if rank_of_vectors(&rows, dim) != target_rank {
                    continue;
                }
                let v = ratlin::sub_vec(
                    &ratlin::scale_vec(&rays[q].vector, &values[p]),
                    &ratlin::scale_vec(&rays[p].vector, &values[q]),
                );
                let mut zero_set = common;
                zero_set.insert(k);
                created.push(DdRay { vector: primitive(&v), zero_set });
            }
        }

        let mut next: Vec<DdRay> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zero_set.insert(k);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }
    (lines, rays.into_iter().map(|r| r.vector).collect())
}

/// A face of a cone, keyed by the generators it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub generator_index_set: Vec<usize>,
    pub span_basis: RationalMatrix,
    pub dim: usize,
    pub relint_point: QVector,
}

impl Face {
    pub fn contains_face(&self, other: &Face) -> bool {
        other.generator_index_set.iter().all(|g| self.generator_index_set.binary_search(g).is_ok())
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn generators<'a>(&'a self, cone: &'a Cone) -> impl Iterator<Item = &'a QVector> + 'a {
        self.generator_index_set.iter().map(move |&g| &cone.generators()[g])
    }

    /// Basis (columns) of the orthogonal complement of the span of the face.
    pub fn orthogonal_complement(&self) -> RationalMatrix {
        ratlin::orthogonal_complement(&self.span_basis).expect("span basis is independent")
    }
}

/// All faces of a pointed cone, graded by dimension.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
    /// `(child, parent)` index pairs where the child is a maximal proper subface of the parent.
    pub covering_relation: Vec<(usize, usize)>,
    pub dims_present: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    pub fn find(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.faces[i].dim == dim)
    }

    /// Indices of faces that cover nothing above `parent` (its facets).
    pub fn facets_of(&self, parent: usize) -> Vec<usize> {
        self.covering_relation.iter().filter(|&&(_, p)| p == parent).map(|&(c, _)| c).collect()
    }

    /// Strict containment `child ⊊ parent`.
    pub fn strictly_contains(&self, parent: usize, child: usize) -> bool {
        parent != child && self.faces[parent].contains_face(&self.faces[child])
    }

    /// The meet of two faces.
    pub fn intersection(&self, a: usize, b: usize) -> Option<usize> {
        let set: Vec<usize> = self.faces[a]
            .generator_index_set
            .iter()
            .filter(|g| self.faces[b].generator_index_set.binary_search(g).is_ok())
            .copied()
            .collect();
        self.find(&set)
    }
}

/// Enumerates all faces of a pointed cone as intersections of facets.
pub fn face_lattice(cone: &Cone) -> Result<FaceLattice, ConeError> {
    cone.require_pointed()?;
    let all: Vec<usize> = (0..cone.generators().len()).collect();
    let facets: Vec<BTreeSet<usize>> = (0..cone.inequalities().len()).map(|i| cone.facet_generator_set(i)).collect();

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(all.clone());
    found.insert(Vec::new());
    let mut frontier: Vec<BTreeSet<usize>> = vec![all.iter().copied().collect()];
    while let Some(face) = frontier.pop() {
        for f in &facets {
            let meet: BTreeSet<usize> = face.intersection(f).copied().collect();
            let key: Vec<usize> = meet.iter().copied().collect();
            if found.insert(key) {
                frontier.push(meet);
            }
        }
    }

    let mut faces: Vec<Face> = found.iter().map(|s| cone.face_from_set(s)).collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.generator_index_set.cmp(&b.generator_index_set)));
    let index: HashMap<Vec<usize>, usize> = faces.iter().enumerate().map(|(i, f)| (f.generator_index_set.clone(), i)).collect();

    let mut covering_relation = Vec::new();
    for p in 0..faces.len() {
        let below: Vec<usize> = (0..faces.len()).filter(|&c| c != p && faces[p].contains_face(&faces[c])).collect();
        for &c in &below {
            let covered = !below.iter().any(|&m| m != c && faces[m].contains_face(&faces[c]) && faces[m].dim > faces[c].dim);
            if covered {
                covering_relation.push((c, p));
            }
        }
    }
    let dims_present: Vec<usize> = faces.iter().map(|f| f.dim).collect::<BTreeSet<_>>().into_iter().collect();
    Ok(FaceLattice { faces, covering_relation, dims_present, index })
}

/// The face `F⊥ ∩ C*` of the dual cone (indices refer to `cone.dual()`'s generators).
pub fn dual_face(face: &Face, cone: &Cone) -> Result<Face, ConeError> {
    if cone.face_closure(&face.generator_index_set) != face.generator_index_set {
        return Err(ConeError::NotAFace(face.generator_index_set.clone()));
    }
    let tight = cone.tight_inequalities(&face.generator_index_set);
    Ok(cone.dual().face_from_set(&tight))
}

/// Whether `C ∩ y⊥ = F` for `y` the relative-interior point of the dual face.
pub fn is_exposed(face: &Face, cone: &Cone) -> Result<bool, ConeError> {
    let y = dual_face(face, cone)?.relint_point;
    let exposed: Vec<usize> = (0..cone.generators().len()).filter(|&g| dot(&y, &cone.generators()[g]).is_zero()).collect();
    Ok(exposed == face.generator_index_set)
}

/// Exact metric projection onto a pointed cone by searching faces: returns the
/// face-span projection satisfying the Moreau conditions.
pub fn project_onto_cone(x: &[Rational], cone: &Cone) -> Result<QVector, ConeError> {
    if x.len() != cone.ambient_dim() {
        return Err(ConeError::DimensionMismatch(x.len(), cone.ambient_dim()));
    }
    let lattice = face_lattice(cone)?;
    for face in lattice.faces.iter().rev() {
        let p = project_onto_span(&face.span_basis, x);
        if !cone.contains(&p) {
            continue;
        }
        let residual = ratlin::sub_vec(x, &p);
        if cone.polar_contains(&residual) {
            debug_assert!(dot(&p, &residual).is_zero());
            return Ok(p);
        }
    }
    unreachable!("the Moreau decomposition exists for every closed convex cone")
}

/// Moreau conditions for `p` as the projection of `x` onto `cone`.
pub fn satisfies_moreau(x: &[Rational], p: &[Rational], cone: &Cone) -> bool {
    let r = ratlin::sub_vec(x, p);
    cone.contains(p) && cone.polar_contains(&r) && dot(p, &r).is_zero()
}

/// The standard fixtures used across tests and examples.
pub mod fixtures {
    use super::*;
    use crate::ratlin::qvec;

    pub fn half_line() -> Cone {
        Cone::from_generators(1, &[qvec(&[1])]).unwrap()
    }

    pub fn orthant(n: usize) -> Cone {
        let gens: Vec<QVector> = identity_rows(n);
        Cone::from_generators(n, &gens).unwrap()
    }

    /// Cone over the square with vertices (±1, ±1) at height 1.
    pub fn square_cone() -> Cone {
        Cone::from_generators(3, &[qvec(&[1, 1, 1]), qvec(&[1, -1, 1]), qvec(&[-1, 1, 1]), qvec(&[-1, -1, 1])]).unwrap()
    }

    /// A pointed solid cone with small integer generators, reproducible from `seed`.
    /// Generators have positive last coordinate, so the cone is pointed.
    pub fn random_pointed_solid(n: usize, seed: u64) -> Cone {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let count = rng.gen_range(n..=n + 4);
            let gens: Vec<QVector> = (0..count)
                .map(|_| {
                    let mut v: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
                    v.push(rng.gen_range(1..=4));
                    qvec(&v)
                })
                .collect();
            let cone = Cone::from_generators(n, &gens).expect("generators are nonzero");
            if cone.is_solid() {
                return cone;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::ratlin::{int, qvec, rat};

    fn sorted(mut v: Vec<QVector>) -> Vec<QVector> {
        v.sort();
        v
    }

    /// Extreme rays of `{y : ⟨g, y⟩ ≥ 0}` by brute force: for every (n-1)-subset of
    /// constraints with rank n-1, take the kernel direction with the feasible sign.
    fn brute_force_dual_rays(n: usize, gens: &[QVector]) -> Vec<QVector> {
        fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if m < k {
                return vec![];
            }
            let mut out = subsets(m - 1, k);
            for mut s in subsets(m - 1, k - 1) {
                s.push(m - 1);
                out.push(s);
            }
            out
        }
        let mut out: Vec<QVector> = Vec::new();
        for s in subsets(gens.len(), n - 1) {
            let rows: Vec<QVector> = s.iter().map(|&i| gens[i].clone()).collect();
            let ker = ratlin::nullspace(&RationalMatrix::from_rows(&rows, n));
            if ker.cols() != 1 {
                continue;
            }
            let d = ker.column(0);
            for cand in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
                if gens.iter().all(|g| !dot(g, &cand).is_negative()) {
                    let p = primitive(&cand);
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        sorted(out)
    }

    #[test]
    fn quadrant_h_rep() {
        let c = orthant(2);
        assert_eq!(sorted(c.inequalities().to_vec()), vec![qvec(&[0, 1]), qvec(&[1, 0])]);
        assert!(c.is_pointed() && c.is_solid() && c.is_consistent());
    }

    #[test]
    fn square_cone_h_rep_matches_brute_force() {
        let c = square_cone();
        let expected = brute_force_dual_rays(3, c.generators());
        assert_eq!(expected, sorted(vec![qvec(&[1, 0, 1]), qvec(&[-1, 0, 1]), qvec(&[0, 1, 1]), qvec(&[0, -1, 1])]));
        assert_eq!(sorted(c.inequalities().to_vec()), expected);
        assert_eq!(c.generators().len(), 4);
    }

    #[test]
    fn half_line_from_h_rep() {
        let c = Cone::from_inequalities(1, &[qvec(&[1])]).unwrap();
        assert_eq!(c.generators(), &[qvec(&[1])]);
        assert!(c.is_pointed() && c.is_solid());
    }

    #[test]
    fn redundant_generators_are_dropped_in_input_order() {
        let c = Cone::from_generators(2, &[qvec(&[0, 2]), qvec(&[1, 1]), qvec(&[3, 0]), qvec(&[1, 2])]).unwrap();
        assert_eq!(c.generators(), &[qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Cone::from_generators(2, &[qvec(&[0, 0])]), Err(ConeError::ZeroVector { index: 0 }));
        assert_eq!(Cone::from_generators(2, &[]), Err(ConeError::EmptyInput));
        assert!(matches!(Cone::from_generators(2, &[qvec(&[1])]), Err(ConeError::LengthMismatch { .. })));
        assert_eq!(Cone::from_generators(0, &[vec![]]), Err(ConeError::ZeroDimension));
    }

    #[test]
    fn non_pointed_and_non_solid_cones() {
        let halfplane = Cone::from_inequalities(2, &[qvec(&[1, 0])]).unwrap();
        assert_eq!(halfplane.lineality().len(), 1);
        assert_eq!(halfplane.generators(), &[qvec(&[1, 0])]);
        assert!(matches!(face_lattice(&halfplane), Err(ConeError::NotPointed(1))));

        let ray = Cone::from_generators(2, &[qvec(&[1, 1])]).unwrap();
        assert!(!ray.is_solid());
        assert_eq!(ray.dim(), 1);
        let d = ray.dual();
        assert!(!d.is_pointed() && d.is_solid());
        assert!(d.contains(&qvec(&[1, -1])) && d.contains(&qvec(&[-1, 1])) && !d.contains(&qvec(&[-1, -1])));
        assert!(d.is_consistent());
    }

    #[test]
    fn dual_cone_examples() {
        let q = orthant(2);
        assert!(q.dual().same_set(&q));
        let h = half_line();
        assert!(h.dual().same_set(&h));
        let s = square_cone();
        let expected =
            Cone::from_generators(3, &[qvec(&[1, 0, 1]), qvec(&[-1, 0, 1]), qvec(&[0, 1, 1]), qvec(&[0, -1, 1])]).unwrap();
        assert!(s.dual().same_set(&expected));
        assert!(s.dual().dual().same_set(&s));
    }

    /// Brute-force faces of the orthant: one per coordinate subset.
    #[test]
    fn orthant_face_count() {
        let lat = face_lattice(&orthant(3)).unwrap();
        assert_eq!(lat.len(), 8);
        let mut sets: Vec<Vec<usize>> = lat.faces.iter().map(|f| f.generator_index_set.clone()).collect();
        sets.sort();
        let mut expected: Vec<Vec<usize>> = (0..8u32).map(|m| (0..3).filter(|i| m & (1 << i) != 0).collect()).collect();
        expected.sort();
        assert_eq!(sets, expected);
        assert_eq!(lat.dims_present, vec![0, 1, 2, 3]);
    }

    #[test]
    fn square_cone_faces_by_dim() {
        let lat = face_lattice(&square_cone()).unwrap();
        let counts: Vec<usize> = (0..=3).map(|d| lat.faces_of_dim(d).count()).collect();
        assert_eq!(counts, vec![1, 4, 4, 1]);
        // intersection-closed
        for a in 0..lat.len() {
            for b in 0..lat.len() {
                assert!(lat.intersection(a, b).is_some());
            }
        }
        for &(c, p) in &lat.covering_relation {
            assert!(lat.strictly_contains(p, c));
            assert_eq!(lat.faces[p].dim, lat.faces[c].dim + 1);
        }
    }

    #[test]
    fn half_line_faces() {
        let lat = face_lattice(&half_line()).unwrap();
        assert_eq!(lat.len(), 2);
        assert_eq!(lat.faces[0].dim, 0);
        assert_eq!(lat.faces[1].dim, 1);
    }

    #[test]
    fn dual_face_examples() {
        let q = orthant(2);
        let x_axis = q.face(&[0]).unwrap();
        let df = dual_face(&x_axis, &q).unwrap();
        let dual = q.dual();
        let rays: Vec<&QVector> = df.generators(&dual).collect();
        assert_eq!(rays, vec![&qvec(&[0, 1])]);

        let s = square_cone();
        let i = s.generators().iter().position(|g| *g == qvec(&[1, 1, 1])).unwrap();
        let j = s.generators().iter().position(|g| *g == qvec(&[1, -1, 1])).unwrap();
        let mut set = vec![i, j];
        set.sort();
        let facet = s.face(&set).unwrap();
        assert_eq!(facet.dim, 2);
        let sd = s.dual();
        let df = dual_face(&facet, &s).unwrap();
        assert_eq!(df.dim, 1);
        assert_eq!(df.generators(&sd).collect::<Vec<_>>(), vec![&qvec(&[-1, 0, 1])]);

        let zero = s.face(&[]).unwrap();
        let df = dual_face(&zero, &s).unwrap();
        assert_eq!(df.dim, 3);
    }

    #[test]
    fn dual_face_rejects_non_faces() {
        let s = square_cone();
        let fake = s.face_from_set(&[0, 3]);
        assert!(matches!(dual_face(&fake, &s), Err(ConeError::NotAFace(_))));
    }

    #[test]
    fn antitone_dimension_bijection() {
        for c in [orthant(3), square_cone(), half_line()] {
            let lat = face_lattice(&c).unwrap();
            let dual_lat = face_lattice(&c.dual()).unwrap();
            let mut images = BTreeSet::new();
            for f in &lat.faces {
                let df = dual_face(f, &c).unwrap();
                assert_eq!(f.dim + df.dim, c.ambient_dim());
                assert!(dual_lat.find(&df.generator_index_set).is_some());
                images.insert(df.generator_index_set.clone());
            }
            assert_eq!(images.len(), lat.len());
            for a in 0..lat.len() {
                for b in 0..lat.len() {
                    if lat.strictly_contains(a, b) {
                        let da = dual_face(&lat.faces[a], &c).unwrap();
                        let db = dual_face(&lat.faces[b], &c).unwrap();
                        assert!(db.contains_face(&da) && da != db);
                    }
                }
            }
        }
    }

    #[test]
    fn exposure() {
        for c in [orthant(2), orthant(3), square_cone()] {
            for f in face_lattice(&c).unwrap().faces {
                assert!(is_exposed(&f, &c).unwrap());
            }
        }
        let s = square_cone();
        let top = s.top_face();
        assert!(dual_face(&top, &s).unwrap().relint_point.iter().all(Zero::is_zero));
        assert!(is_exposed(&top, &s).unwrap());
    }

    #[test]
    fn projection_examples() {
        let q = orthant(2);
        let x = qvec(&[2, 5]);
        assert_eq!(project_onto_cone(&x, &q).unwrap(), x);
        assert_eq!(project_onto_cone(&qvec(&[-1, 2]), &q).unwrap(), qvec(&[0, 2]));

        let s = square_cone();
        let x = qvec(&[3, 0, -1]);
        let p = project_onto_cone(&x, &s).unwrap();
        assert!(satisfies_moreau(&x, &p, &s));
        assert_eq!(p, brute_force_projection(&x, &s));
        assert_eq!(p, vec![int(1), int(0), int(1)]);
    }

    /// Enumerates every subset of generators, projects onto its span and keeps the
    /// feasible candidate of least distance.
    fn brute_force_projection(x: &[Rational], c: &Cone) -> QVector {
        let g = c.generators();
        let mut best: Option<(Rational, QVector)> = None;
        for mask in 0u32..(1 << g.len()) {
            let vs: Vec<QVector> = (0..g.len()).filter(|i| mask & (1 << i) != 0).map(|i| g[i].clone()).collect();
            let idx = ratlin::independent_subset(&vs, c.ambient_dim());
            let basis: Vec<QVector> = idx.iter().map(|&i| vs[i].clone()).collect();
            let p = project_onto_span(&RationalMatrix::from_columns(&basis, c.ambient_dim()), x);
            if !c.contains(&p) {
                continue;
            }
            let r = ratlin::sub_vec(x, &p);
            let d = dot(&r, &r);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, p));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn projection_dominance_on_square_cone() {
        use rand::{Rng, SeedableRng};
        let s = square_cone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x: QVector = (0..3).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
            let p = project_onto_cone(&x, &s).unwrap();
            assert!(satisfies_moreau(&x, &p, &s));
            let r = ratlin::sub_vec(&x, &p);
            let d = dot(&r, &r);
            for _ in 0..100 {
                let c: QVector = s
                    .generators()
                    .iter()
                    .map(|g| ratlin::scale_vec(g, &rat(rng.gen_range(0..=10), rng.gen_range(1..=5))))
                    .fold(vec![int(0); 3], |a, b| ratlin::add_vec(&a, &b));
                let rc = ratlin::sub_vec(&x, &c);
                assert!(d <= dot(&rc, &rc));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_cone(n: usize) -> impl Strategy<Value = Vec<QVector>> {
            proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, n - 1).prop_flat_map(|head| {
                    (1i64..=4).prop_map(move |t| {
                        let mut v: Vec<Rational> = head.iter().map(|&x| int(x)).collect();
                        v.push(int(t));
                        v
                    })
                }),
                1..7,
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn round_trip_and_duality(gens in random_cone(3)) {
                let c = Cone::from_generators(3, &gens).unwrap();
                prop_assert!(c.is_consistent());
                prop_assert!(c.is_pointed());
                let again = Cone::from_inequalities(3, c.inequalities());
                if c.is_solid() {
                    let again = again.unwrap();
                    prop_assert_eq!(sorted(again.generators().to_vec()), sorted(c.generators().to_vec()));
                }
                prop_assert!(c.dual().dual().same_set(&c));
                prop_assert!(c.dual().is_consistent());
                // every input generator is in the cone; every extreme ray is an input generator up to scale
                for g in &gens {
                    prop_assert!(c.contains(g));
                }
                for e in c.generators() {
                    prop_assert!(gens.iter().any(|g| ratlin::positively_proportional(g, e)));
                }
            }

            #[test]
            fn face_lattice_is_intersection_closed(gens in random_cone(4)) {
                let c = Cone::from_generators(4, &gens).unwrap();
                let lat = face_lattice(&c).unwrap();
                for a in 0..lat.len() {
                    for b in 0..lat.len() {
                        prop_assert!(lat.intersection(a, b).is_some());
                    }
                    prop_assert!(is_exposed(&lat.faces[a], &c).unwrap());
                }
            }
        }
    }
}
