//! The augmented cellular chain complex of a polytope section of a polyhedral cone.
//!
//! `C_j` is free on `P_j`. A face `F ∈ P_j` of Ω* corresponds to the face
//! `F̌ = Ω ∩ F⊥` of Ω of dimension `j`, i.e. a `(j−1)`-cell of the section
//! `{x ∈ Ω : ⟨c, x⟩ = 1}` with `c` interior to Ω*. `C_0` is the augmentation
//! degree and `D_1` sends every vertex to 1.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::polycone::dual_face;
use crate::ratlin::{self, dot, smith_normal_form, IntMatrix, QVector, Rational, RationalMatrix};
use crate::strata::{Stratification, StratificationSummary, StratumSize};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face dimensions {0:?} are not consecutive")]
    NonConsecutiveDims(Vec<usize>),
    #[error("D_{lower}·D_{upper} is nonzero")]
    BoundaryNotSquareZero { lower: usize, upper: usize },
    #[error("stratum {0} is infinite")]
    InfiniteStratum(usize),
}

/// Reordering and reorientation of cells, for orientation-independence checks.
#[derive(Clone, Debug, Default)]
pub struct ComplexOptions {
    /// Shuffle each `P_j` and flip cell orientations at random from this seed.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    /// `cells[j]` lists the lattice indices of `P_j` in basis order.
    pub cells: Vec<Vec<usize>>,
    /// `(n − n_{d−j}) mod 2`.
    pub parity: Vec<u8>,
    /// `boundaries[j − 1]` is `D_j : C_j → C_{j−1}`, of shape `|P_{j−1}| × |P_j|`.
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn d(&self) -> usize {
        self.cells.len() - 1
    }

    /// `D_j`, for `1 ≤ j ≤ d`.
    pub fn boundary(&self, j: usize) -> &IntMatrix {
        &self.boundaries[j - 1]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks().iter().enumerate().map(|(j, &r)| if j % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    /// Invariant factors greater than 1 in each degree.
    pub torsion: Vec<Vec<BigInt>>,
    pub exact: bool,
}

/// Vertices of the section cell `F̌`, each scaled onto `⟨c, x⟩ = 1`.
fn section_vertices(gens: &[QVector], c: &[Rational]) -> Vec<QVector> {
    gens.iter().map(|g| ratlin::scale_vec(g, &(Rational::from_integer(1.into()) / dot(c, g)))).collect()
}

fn barycenter(points: &[QVector]) -> QVector {
    let n = points[0].len();
    let sum = points.iter().fold(vec![Rational::zero(); n], |acc, p| ratlin::add_vec(&acc, p));
    ratlin::scale_vec(&sum, &Rational::new(1.into(), (points.len() as i64).into()))
}

/// Ordered basis of the direction space of the affine hull of the points.
fn direction_basis(points: &[QVector]) -> Vec<QVector> {
    let n = points[0].len();
    let diffs: Vec<QVector> = points[1..].iter().map(|p| ratlin::sub_vec(p, &points[0])).collect();
    ratlin::independent_subset(&diffs, n).into_iter().map(|i| diffs[i].clone()).collect()
}

struct Cell {
    center: QVector,
    basis: Vec<QVector>,
}

pub fn build_cellular_complex(s: &Stratification, options: &ComplexOptions) -> Result<ChainComplex, ComplexError> {
    if s.dims != (0..=s.ambient_dim).collect::<Vec<_>>() {
        return Err(ComplexError::NonConsecutiveDims(s.dims.clone()));
    }
    let d = s.d();
    let mut rng = options.seed.map(rand_chacha::ChaCha8Rng::seed_from_u64);
    let mut cells = s.strata.clone();
    if let Some(rng) = rng.as_mut() {
        for stratum in cells.iter_mut() {
            stratum.shuffle(rng);
        }
    }

    let c = s.dual.generators().iter().fold(vec![Rational::zero(); s.ambient_dim], |acc, g| ratlin::add_vec(&acc, g));
    let primal_gens = s.primal.generators();
    let geometry: Vec<Vec<Option<Cell>>> = cells
        .iter()
        .map(|stratum| {
            stratum
                .iter()
                .map(|&f| {
                    let dual = dual_face(s.face(f), &s.dual).expect("lattice faces are faces");
                    if dual.generator_index_set.is_empty() {
                        return None;
                    }
                    let gens: Vec<QVector> = dual.generator_index_set.iter().map(|&g| primal_gens[g].clone()).collect();
                    let vertices = section_vertices(&gens, &c);
                    let mut basis = direction_basis(&vertices);
                    if let (Some(rng), Some(first)) = (rng.as_mut(), basis.first_mut()) {
                        if rng.gen_bool(0.5) {
                            *first = first.iter().map(|x| -x).collect();
                        }
                    }
                    Some(Cell { center: barycenter(&vertices), basis })
                })
                .collect()
        })
        .collect();

    let mut boundaries = Vec::with_capacity(d);
    for j in 1..=d {
        let (lower, upper) = (&cells[j - 1], &cells[j]);
        let mut m = IntMatrix::zeros(lower.len(), upper.len());
        for (col, &g) in upper.iter().enumerate() {
            for (row, &g_sub) in lower.iter().enumerate() {
                // the cell of g_sub is a facet of the cell of g iff g ⊂ g_sub in Ω*
                if !s.face(g_sub).contains_face(s.face(g)) {
                    continue;
                }
                m[(row, col)] = if j == 1 {
                    BigInt::from(1)
                } else {
                    let cell = geometry[j][col].as_ref().expect("nonempty cell");
                    let sub = geometry[j - 1][row].as_ref().expect("nonempty cell");
                    incidence_sign(cell, sub)
                };
            }
        }
        boundaries.push(m);
    }
    let parity = (0..=d).map(|j| (s.fiber_dim(j) % 2) as u8).collect();
    Ok(ChainComplex { cells, parity, boundaries })
}

/// Sign of `det(Bᵀ[w, B'])` with `w` pointing from the cell's center to the facet's center.
fn incidence_sign(cell: &Cell, facet: &Cell) -> BigInt {
    let n = cell.center.len();
    let mut cols = vec![ratlin::sub_vec(&facet.center, &cell.center)];
    cols.extend(facet.basis.iter().cloned());
    let b = RationalMatrix::from_columns(&cell.basis, n);
    let m = RationalMatrix::from_columns(&cols, n);
    let det = (&b.transpose() * &m).determinant();
    debug_assert!(!det.is_zero());
    BigInt::from(if det.is_positive() { 1 } else { -1 })
}

pub fn verify_boundary_squared(c: &ChainComplex) -> bool {
    (2..=c.d()).all(|j| (&c.boundary(j - 1).to_rational() * &c.boundary(j).to_rational()).is_zero())
}

pub fn homology(c: &ChainComplex) -> Result<HomologyReport, ComplexError> {
    for j in 2..=c.d() {
        if !(&c.boundary(j - 1).to_rational() * &c.boundary(j).to_rational()).is_zero() {
            return Err(ComplexError::BoundaryNotSquareZero { lower: j - 1, upper: j });
        }
    }
    let d = c.d();
    let snf: Vec<_> = c.boundaries.iter().map(smith_normal_form).collect();
    let rank_of = |j: usize| if j == 0 || j > d { 0 } else { snf[j - 1].rank() };
    let ranks = c.ranks();
    let betti: Vec<usize> = (0..=d).map(|j| ranks[j] - rank_of(j) - rank_of(j + 1)).collect();
    let torsion: Vec<Vec<BigInt>> = (0..=d).map(|j| if j < d { snf[j].torsion() } else { Vec::new() }).collect();
    let exact = betti.iter().all(|&b| b == 0) && torsion.iter().all(Vec::is_empty);
    Ok(HomologyReport { betti, torsion, exact })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ParityRow {
    pub j: usize,
    pub rank: usize,
    pub fiber_dim: usize,
    /// The degree in which `K_c` of the fibre is nonzero.
    pub degree: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ParityTable {
    pub rows: Vec<ParityRow>,
    /// Degrees alternate across every pair of strata with consecutive fibre dimensions.
    pub alternates: bool,
}

pub fn k_parity_table(s: &StratificationSummary) -> Result<ParityTable, ComplexError> {
    let d = s.dims.len() - 1;
    let mut rows = Vec::with_capacity(d + 1);
    for (j, size) in s.stratum_sizes.iter().enumerate() {
        let StratumSize::Finite(rank) = size else {
            return Err(ComplexError::InfiniteStratum(j));
        };
        let fiber_dim = s.ambient_dim - s.dims[d - j];
        rows.push(ParityRow { j, rank: *rank, fiber_dim, degree: (fiber_dim % 2) as u8 });
    }
    let alternates = rows.windows(2).all(|w| w[1].fiber_dim != w[0].fiber_dim + 1 || w[1].degree != w[0].degree);
    Ok(ParityTable { rows, alternates })
}
