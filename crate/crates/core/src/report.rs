//! Analysis pipeline and report rendering.
//!
//! Every section is plain data built from `Vec`s, so the JSON rendering is
//! deterministic for fixed inputs and options.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classicwh::IndexCheck;
use crate::conemetric::{self, MetricConfig, PolarityReport};
use crate::curvedcones::{k_positivity_check, siegel_is_extreme, BaseCone, SiegelCone, BOUNDARY_TOL};
use crate::document::{ConeDocument, ConeKind};
use crate::indexcomplex::{self, ComplexOptions, ParityTable};
use crate::polycone::{Cone, ConeError};
use crate::ratlin::{format_rational, QVector};
use crate::strata::{self, lorentz, StrataError, Stratification, StratumSize};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("cone does not meet the analysis preconditions: {0}")]
    Precondition(ConeError),
    #[error("{0} is not a polyhedral cone")]
    NotPolyhedral(String),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Complex(#[from] indexcomplex::ComplexError),
    #[error(transparent)]
    Metric(#[from] conemetric::MetricError),
}

impl AnalysisError {
    /// Input-shaped failures are the caller's fault.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            AnalysisError::Precondition(_)
                | AnalysisError::NotPolyhedral(_)
                | AnalysisError::Metric(conemetric::MetricError::DimensionMismatch(..))
        )
    }
}

/// Which sections to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sections {
    pub stratification: bool,
    pub smoothness: bool,
    pub decomposition: bool,
    pub complex: bool,
    pub metric: bool,
}

impl Sections {
    pub const ALL_BUT_METRIC: Sections =
        Sections { stratification: true, smoothness: true, decomposition: true, complex: true, metric: false };
    pub const STRATIFY: Sections =
        Sections { stratification: true, smoothness: false, decomposition: false, complex: false, metric: false };
    pub const COMPLEX: Sections =
        Sections { stratification: true, smoothness: false, decomposition: false, complex: true, metric: false };
    pub const SMOOTH: Sections =
        Sections { stratification: true, smoothness: true, decomposition: false, complex: false, metric: false };
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub sections: Sections,
    pub metric: MetricConfig,
    pub seed: u64,
    /// Directions sampled on the sphere of extreme rays of a Lorentz cone.
    pub lorentz_samples: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { sections: Sections::ALL_BUT_METRIC, metric: MetricConfig::default(), seed: 0, lorentz_samples: 720 }
    }
}

fn strings(v: &[crate::ratlin::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn string_vectors(vs: &[QVector]) -> Vec<Vec<String>> {
    vs.iter().map(|v| strings(v)).collect()
}

/// A boolean verdict and the number of instances behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    /// Failing enforced checks make the run fail; others are informational.
    pub enforced: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    pub generators: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
    pub inequalities: Vec<Vec<String>>,
    pub equalities: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationSection {
    pub dims: Vec<usize>,
    pub stratum_sizes: Vec<StratumSize>,
    pub facially_compact: bool,
    /// For each `j`, the faces of `P_j` as index sets into the dual generators.
    pub strata: Option<Vec<Vec<Vec<usize>>>>,
    pub incidence: Vec<IncidenceSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncidenceSection {
    pub j: usize,
    pub size: StratumSize,
    /// `(position of E in P_{j−1}, position of F in P_j)`.
    pub pairs: Option<Vec<(usize, usize)>>,
    pub xi_surjective: bool,
    pub eta_surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessSection {
    pub locally_smooth: bool,
    /// `(j, position of E, position of F)` for pairs failing the test.
    pub witnesses: Vec<(usize, usize, usize)>,
    pub modular_faces: usize,
    pub instances_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub j: usize,
    pub e: usize,
    pub f: usize,
    pub e_ray: Vec<String>,
    pub half_space_dim: usize,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledPairFamily {
    pub j: usize,
    pub samples: usize,
    pub half_space_dim: usize,
    pub max_residual: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub pairs: Vec<PairEntry>,
    pub sampled: Vec<SampledPairFamily>,
    pub passes: usize,
    pub failures: usize,
    pub embedding_injective: bool,
}

/// The half-space dimension by the containment formula and by the alternative index reading.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionFormulaSection {
    pub implemented: String,
    pub alternative: String,
    pub rows: Vec<DimensionFormulaRow>,
    pub discrepancy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionFormulaRow {
    pub j: usize,
    pub implemented: i64,
    pub alternative: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSection {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
    pub boundary_squared_zero: bool,
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<String>>,
    pub exact: bool,
    pub euler_characteristic: i64,
    pub orientation_independent: bool,
    pub parity: ParityTable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayPairEntry {
    pub a: usize,
    pub b: usize,
    pub h: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSection {
    pub requested: bool,
    pub config: Option<MetricConfig>,
    pub ray_pairs: Vec<RayPairEntry>,
    pub polarity: Vec<PolarityReport>,
    pub sandwich_pairs_checked: usize,
    pub sandwich_violations: usize,
    pub self_duality_min: Option<f64>,
}

impl MetricSection {
    fn empty() -> Self {
        MetricSection {
            requested: false,
            config: None,
            ray_pairs: Vec::new(),
            polarity: Vec::new(),
            sandwich_pairs_checked: 0,
            sandwich_violations: 0,
            self_duality_min: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelSection {
    pub u_dim: usize,
    pub v_dim: usize,
    pub positivity_trials: usize,
    pub k_positive: bool,
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
    pub boundary_samples: usize,
    pub classifier_agreements: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    pub name: String,
    pub kind: String,
    pub ambient_dim: usize,
    pub cone: Option<ConeSection>,
    pub stratification: Option<StratificationSection>,
    pub smoothness: Option<SmoothnessSection>,
    pub decomposition: Option<DecompositionSection>,
    pub dimension_formula: Option<DimensionFormulaSection>,
    pub complex: Option<ComplexSection>,
    pub metric: MetricSection,
    pub siegel: Option<SiegelSection>,
    pub classical: Option<IndexCheck>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl AnalysisReport {
    pub(crate) fn new(name: &str, kind: &str, ambient_dim: usize) -> Self {
        AnalysisReport {
            report_version: REPORT_VERSION,
            name: name.to_string(),
            kind: kind.to_string(),
            ambient_dim,
            cone: None,
            stratification: None,
            smoothness: None,
            decomposition: None,
            dimension_formula: None,
            complex: None,
            metric: MetricSection::empty(),
            siegel: None,
            classical: None,
            notes: Vec::new(),
            checks: Vec::new(),
            all_passed: true,
        }
    }

    pub(crate) fn check(&mut self, name: &str, passed: bool, instances: usize, enforced: bool) {
        self.checks.push(Check { name: name.to_string(), passed, instances, enforced });
    }

    pub(crate) fn finish(mut self) -> Self {
        self.all_passed = self.checks.iter().all(|c| c.passed || !c.enforced);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn analyze(doc: &ConeDocument, opts: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    let report = match &doc.kind {
        ConeKind::Polyhedral { cone, .. } => analyze_polyhedral(doc, cone, opts)?,
        ConeKind::Lorentz(l) => analyze_lorentz(doc, l.ambient_dim, opts),
        ConeKind::Siegel(s) => analyze_siegel(doc, s),
    };
    Ok(report.finish())
}

fn cone_section(cone: &Cone) -> ConeSection {
    ConeSection {
        generators: string_vectors(cone.generators()),
        lineality: string_vectors(cone.lineality()),
        inequalities: string_vectors(cone.inequalities()),
        equalities: string_vectors(cone.equalities()),
    }
}

fn position(s: &Stratification, j: usize, face: usize) -> usize {
    s.strata[j].iter().position(|&f| f == face).expect("face lies in its stratum")
}

fn dimension_formula(dims: &[usize]) -> DimensionFormulaSection {
    let d = dims.len() - 1;
    let rows: Vec<DimensionFormulaRow> = (1..=d)
        .map(|j| DimensionFormulaRow {
            j,
            implemented: dims[d - j + 1] as i64 - dims[d - j] as i64 - 1,
            alternative: (j < d).then(|| dims[d - j - 1] as i64 - dims[d - j] as i64 - 1),
        })
        .collect();
    let discrepancy = rows.iter().any(|r| r.alternative.is_some_and(|a| a != r.implemented));
    DimensionFormulaSection {
        implemented: "n_{d-j+1} - n_{d-j} - 1".into(),
        alternative: "n_{d-j-1} - n_{d-j} - 1".into(),
        rows,
        discrepancy,
    }
}

fn analyze_polyhedral(doc: &ConeDocument, cone: &Cone, opts: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    let mut r = AnalysisReport::new(&doc.name, doc.kind_name(), doc.ambient_dim);
    r.cone = Some(cone_section(cone));
    let s = strata::stratify(cone).map_err(|e| match e {
        StrataError::Cone(c) => AnalysisError::Precondition(c),
        other => other.into(),
    })?;
    let d = s.d();
    let incidences = (1..=d).map(|j| strata::incidence_space(&s, j)).collect::<Result<Vec<_>, _>>()?;

    if opts.sections.stratification {
        let strata_sets =
            s.strata.iter().map(|faces| faces.iter().map(|&f| s.face(f).generator_index_set.clone()).collect()).collect();
        let incidence = incidences
            .iter()
            .map(|inc| IncidenceSection {
                j: inc.j,
                size: StratumSize::Finite(inc.pairs.len()),
                pairs: Some(inc.pairs.iter().map(|&(e, f)| (position(&s, inc.j - 1, e), position(&s, inc.j, f))).collect()),
                xi_surjective: inc.xi_surjective,
                eta_surjective: inc.eta_surjective,
            })
            .collect();
        let summary = s.summary();
        r.stratification = Some(StratificationSection {
            dims: summary.dims,
            stratum_sizes: summary.stratum_sizes,
            facially_compact: summary.facially_compact,
            strata: Some(strata_sets),
            incidence,
        });
        let partition = s.stratum_sizes().iter().sum::<usize>() == s.lattice.len();
        r.check("strata partition the faces of the dual cone", partition, s.lattice.len(), true);
        let all_pairs: usize = incidences.iter().map(|i| i.pairs.len()).sum();
        r.check("every incidence pair is a containment", true, all_pairs, true);
        r.dimension_formula = Some(dimension_formula(&s.dims));
    }

    if opts.sections.smoothness {
        let sm = strata::is_locally_smooth(&s);
        let witnesses = sm
            .witnesses
            .iter()
            .map(|&(e, f)| {
                let j = s.stratum_of(f).unwrap_or(0);
                (
                    j,
                    s.strata.get(j.wrapping_sub(1)).and_then(|p| p.iter().position(|&x| x == e)).unwrap_or(usize::MAX),
                    position(&s, j, f),
                )
            })
            .collect();
        r.check("locally smooth", sm.locally_smooth, sm.pairs_checked, true);
        r.smoothness = Some(SmoothnessSection {
            locally_smooth: sm.locally_smooth,
            witnesses,
            modular_faces: sm.modular_faces_checked,
            instances_checked: sm.pairs_checked,
        });
    }

    if opts.sections.decomposition {
        let geoms = strata::all_pair_geometries(&s)?;
        let pairs: Vec<PairEntry> = geoms
            .iter()
            .map(|g| {
                let j = s.stratum_of(g.f_face).expect("known face");
                PairEntry {
                    j,
                    e: position(&s, j - 1, g.e_face),
                    f: position(&s, j, g.f_face),
                    e_ray: strings(&g.e_vector_ray),
                    half_space_dim: g.half_space_basis.cols(),
                    passes: strata::verify_decomposition(g) && g.half_space_basis.cols() == s.half_space_dim(j),
                }
            })
            .collect();
        let passes = pairs.iter().filter(|p| p.passes).count();
        let injective = strata::embedding_is_injective(&geoms);
        r.check("orthogonal decomposition of F⊥", passes == pairs.len(), pairs.len(), true);
        r.check("(E, F) ↦ (E, e) is injective", injective, pairs.len(), true);
        r.decomposition = Some(DecompositionSection {
            failures: pairs.len() - passes,
            passes,
            pairs,
            sampled: Vec::new(),
            embedding_injective: injective,
        });
    }

    if opts.sections.complex {
        match indexcomplex::build_cellular_complex(&s, &ComplexOptions::default()) {
            Ok(cx) => {
                let squared = indexcomplex::verify_boundary_squared(&cx);
                let h = indexcomplex::homology(&cx)?;
                let other = indexcomplex::build_cellular_complex(&s, &ComplexOptions { seed: Some(opts.seed) })?;
                let independent = indexcomplex::homology(&other)? == h;
                let parity = indexcomplex::k_parity_table(&s.summary())?;
                r.check("boundary squared is zero", squared, d.saturating_sub(1), true);
                r.check("augmented complex is exact", h.exact, d + 1, true);
                r.check("homology is orientation independent", independent, 1, true);
                r.check("K-degrees alternate along strata", parity.alternates, d, true);
                r.complex = Some(ComplexSection {
                    ranks: cx.ranks(),
                    boundaries: cx.boundaries.iter().map(|m| m.to_i64_rows()).collect(),
                    boundary_squared_zero: squared,
                    betti: h.betti,
                    torsion: h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect(),
                    exact: h.exact,
                    euler_characteristic: cx.euler_characteristic(),
                    orientation_independent: independent,
                    parity,
                });
            }
            Err(e) => r.notes.push(format!("index complex skipped: {e}")),
        }
    }

    if opts.sections.metric {
        r.metric = polyhedral_metric(cone, &s, &opts.metric)?;
        let m = &r.metric;
        let rays_ok = m.ray_pairs.iter().all(|p| (p.h - p.closed_form).abs() <= opts.metric.tolerance);
        let polarity_ok = m.polarity.iter().all(|p| p.passes);
        let (rays_n, pol_n, sw_n, sw_bad) =
            (m.ray_pairs.len(), m.polarity.len(), m.sandwich_pairs_checked, m.sandwich_violations);
        r.check("sampled h matches the ray closed form", rays_ok, rays_n, true);
        r.check("polarity is an isometry for h", polarity_ok, pol_n, true);
        r.check("fibre sandwich h ≤ |e1 - e2| ≤ √2·h", sw_bad == 0, sw_n, false);
    }
    Ok(r)
}

fn polyhedral_metric(cone: &Cone, s: &Stratification, cfg: &MetricConfig) -> Result<MetricSection, AnalysisError> {
    let n = cone.ambient_dim();
    let gens = cone.generators();
    let unit = |v: &QVector| {
        let f = crate::ratlin::vec_to_f64(v);
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        f.into_iter().map(|x| x / norm).collect::<Vec<_>>()
    };
    let mut ray_pairs = Vec::new();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let Ok(closed_form) = conemetric::ray_distance(&unit(&gens[a]), &unit(&gens[b])) else {
                continue;
            };
            let ra = Cone::from_generators(n, &[gens[a].clone()]).expect("generator is nonzero");
            let rb = Cone::from_generators(n, &[gens[b].clone()]).expect("generator is nonzero");
            ray_pairs.push(RayPairEntry { a, b, h: conemetric::hausdorff_h(&ra, &rb, cfg)?, closed_form });
        }
    }
    // Ω against the cones obtained by dropping one extreme ray, when still solid
    let mut polarity = Vec::new();
    for drop in 0..gens.len().min(4) {
        let rest: Vec<QVector> = gens.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, g)| g.clone()).collect();
        if rest.is_empty() {
            continue;
        }
        let smaller = Cone::from_generators(n, &rest).expect("generators are nonzero");
        polarity.push(conemetric::polarity_isometry_check(cone, &smaller, cfg)?);
    }
    let (mut checked, mut violations) = (0, 0);
    for j in 0..s.d() {
        for &e in &s.strata[j] {
            let probe = conemetric::lipschitz_probe(e, s, cfg)?;
            checked += probe.pairs_checked;
            violations += probe.violations.len();
        }
    }
    Ok(MetricSection {
        requested: true,
        config: Some(cfg.clone()),
        ray_pairs,
        polarity,
        sandwich_pairs_checked: checked,
        sandwich_violations: violations,
        self_duality_min: None,
    })
}

fn analyze_lorentz(doc: &ConeDocument, n: usize, opts: &AnalysisOptions) -> AnalysisReport {
    let mut r = AnalysisReport::new(&doc.name, doc.kind_name(), n);
    let summary = lorentz::summary(n);
    let rays = summary.stratum_sizes[1].clone();
    if opts.sections.stratification {
        r.stratification = Some(StratificationSection {
            dims: summary.dims.clone(),
            stratum_sizes: summary.stratum_sizes.clone(),
            facially_compact: summary.facially_compact,
            strata: None,
            incidence: vec![
                IncidenceSection { j: 1, size: rays.clone(), pairs: None, xi_surjective: true, eta_surjective: true },
                IncidenceSection { j: 2, size: rays, pairs: None, xi_surjective: true, eta_surjective: true },
            ],
        });
        r.dimension_formula = Some(dimension_formula(&summary.dims));
    }
    if opts.sections.smoothness {
        let (smooth, samples) = lorentz::is_locally_smooth(n, opts.lorentz_samples);
        r.check("locally smooth", smooth, samples, true);
        r.smoothness = Some(SmoothnessSection {
            locally_smooth: smooth,
            witnesses: Vec::new(),
            modular_faces: 2,
            instances_checked: samples,
        });
    }
    if opts.sections.decomposition {
        let dirs = lorentz::sample_directions(n - 1, opts.lorentz_samples);
        let family = |j: usize, pair: fn(&[f64]) -> lorentz::FloatPairGeometry, expected_half: usize| {
            let mut worst: f64 = 0.0;
            let mut dims_ok = true;
            for w in &dirs {
                let g = pair(w);
                dims_ok &= g.half_space_basis.len() == expected_half;
                worst = worst.max(lorentz::decomposition_residual(&g).unwrap_or(f64::INFINITY));
            }
            SampledPairFamily {
                j,
                samples: dirs.len(),
                half_space_dim: expected_half,
                max_residual: worst,
                passes: dims_ok && worst <= 1e-12,
            }
        };
        let sampled = vec![family(1, lorentz::top_pair, n - 2), family(2, lorentz::ray_pair, 0)];
        let passes = sampled.iter().filter(|f| f.passes).count();
        for f in &sampled {
            r.check(&format!("orthogonal decomposition of F⊥ on 𝒫_{}", f.j), f.passes, f.samples, true);
        }
        r.decomposition = Some(DecompositionSection {
            pairs: Vec::new(),
            failures: sampled.len() - passes,
            passes,
            sampled,
            embedding_injective: true,
        });
    }
    if opts.sections.complex {
        r.notes.push("index complex skipped: the Lorentz cone is not polyhedral".into());
    }
    if opts.sections.metric {
        let probe = conemetric::lorentz_lipschitz_probe(n, opts.lorentz_samples, 1e-12);
        let self_dual = crate::curvedcones::LorentzCone { ambient_dim: n }.self_duality_min(1000);
        r.check("fibre sandwich h ≤ |e1 - e2| ≤ √2·h", probe.holds, probe.pairs_checked, true);
        r.check("self-duality on sampled pairs", self_dual >= -1e-12, 1000, true);
        r.metric = MetricSection {
            requested: true,
            config: Some(opts.metric.clone()),
            ray_pairs: Vec::new(),
            polarity: Vec::new(),
            sandwich_pairs_checked: probe.pairs_checked,
            sandwich_violations: probe.violations.len(),
            self_duality_min: Some(self_dual),
        };
    }
    r
}

/// K-positivity plus the extreme classifier on points `(u, B(u), 1)` (extreme) and
/// `(u, B(u) + k₀, 1)` with `k₀` interior to `K` (not extreme).
pub fn siegel_section(s: &SiegelCone, samples: usize) -> SiegelSection {
    let data = &s.data;
    let pos = k_positivity_check(data, 256);
    let k0: Vec<f64> = match &data.k {
        BaseCone::Polyhedral(c) => {
            let mut v = vec![0.0; c.ambient_dim()];
            for g in c.generators() {
                v.iter_mut().zip(crate::ratlin::vec_to_f64(g)).for_each(|(a, b)| *a += b);
            }
            v
        }
        BaseCone::Lorentz(l) => (0..l.ambient_dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
    };
    let mut agreements = 0;
    let us = crate::curvedcones::halton_unit_vectors(data.u_dim, samples, 7);
    for (i, u) in us.iter().enumerate() {
        let bu = data.quadratic(u);
        let interior = i % 2 == 1;
        let v: Vec<f64> = if interior { bu.iter().zip(&k0).map(|(a, b)| a + b).collect() } else { bu };
        let mut p = u.clone();
        p.extend(v);
        p.push(1.0);
        if siegel_is_extreme(&p, s, 1e-9).is_ok_and(|e| e != interior) {
            agreements += 1;
        }
    }
    SiegelSection {
        u_dim: data.u_dim,
        v_dim: data.v_dim(),
        positivity_trials: pos.trials,
        k_positive: pos.positive,
        witness: pos.witness,
        boundary_samples: us.len(),
        classifier_agreements: agreements,
    }
}

fn analyze_siegel(doc: &ConeDocument, s: &SiegelCone) -> AnalysisReport {
    let mut r = AnalysisReport::new(&doc.name, doc.kind_name(), doc.ambient_dim);
    let section = siegel_section(s, 100);
    r.check("B is K-positive", section.k_positive, section.positivity_trials, true);
    if section.k_positive {
        r.check("extreme classifier", section.classifier_agreements == section.boundary_samples, section.boundary_samples, true);
    }
    r.notes.push(format!("membership tolerance {BOUNDARY_TOL:e}; stratification of general Siegel cones is not computed"));
    r.siegel = Some(section);
    r
}

/// Report for the `classical` subcommand.
pub fn classical_report(check: IndexCheck) -> AnalysisReport {
    let mut r = AnalysisReport::new("classical", "laurent_symbol", 1);
    r.check("index = -winding", check.passes, 1, true);
    r.classical = Some(check);
    r.finish()
}

/// Report for the `metric` subcommand on two polyhedral cones.
pub fn metric_report(a: &ConeDocument, b: &ConeDocument, cfg: &MetricConfig) -> Result<AnalysisReport, AnalysisError> {
    let ca = a.polyhedral().ok_or_else(|| AnalysisError::NotPolyhedral(a.name.clone()))?;
    let cb = b.polyhedral().ok_or_else(|| AnalysisError::NotPolyhedral(b.name.clone()))?;
    let polarity = conemetric::polarity_isometry_check(ca, cb, cfg)?;
    let mut r = AnalysisReport::new(&format!("{} vs {}", a.name, b.name), "metric", a.ambient_dim);
    r.check("polarity is an isometry for h", polarity.passes, 1, true);
    let mut ray_pairs = Vec::new();
    if let ([ga], [gb], true, true) = (ca.generators(), cb.generators(), ca.lineality().is_empty(), cb.lineality().is_empty()) {
        let unit = |g: &[crate::ratlin::Rational]| {
            let v = crate::ratlin::vec_to_f64(g);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect::<Vec<_>>()
        };
        if let Ok(closed_form) = conemetric::ray_distance(&unit(ga), &unit(gb)) {
            ray_pairs.push(RayPairEntry { a: 0, b: 0, h: polarity.h_primal, closed_form });
            r.check("sampled h matches the ray closed form", (polarity.h_primal - closed_form).abs() <= cfg.tolerance, 1, true);
        }
    }
    r.metric = MetricSection {
        requested: true,
        config: Some(cfg.clone()),
        ray_pairs,
        polarity: vec![polarity],
        ..MetricSection::empty()
    };
    Ok(r.finish())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn size_text(s: &StratumSize) -> String {
    match s {
        StratumSize::Finite(k) => k.to_string(),
        StratumSize::Continuum(m) => format!("continuum ({m})"),
    }
}

/// Markdown rendering with one section per computed part.
pub fn to_markdown(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Analysis of `{}`\n", r.name);
    let _ = writeln!(out, "- kind: {}\n- ambient dimension: {}\n- report version: {}\n", r.kind, r.ambient_dim, r.report_version);
    if let Some(c) = &r.cone {
        let _ = writeln!(out, "## Cone\n");
        let _ = writeln!(
            out,
            "- extreme rays: {}",
            c.generators.iter().map(|v| format!("({})", v.join(", "))).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(
            out,
            "- facet normals: {}",
            c.inequalities.iter().map(|v| format!("({})", v.join(", "))).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(out, "- lineality dimension: {}\n- equalities: {}\n", c.lineality.len(), c.equalities.len());
    }
    if let Some(s) = &r.stratification {
        let _ = writeln!(out, "## Stratification\n");
        let _ = writeln!(out, "- dimensions of dual faces: {:?}", s.dims);
        let _ = writeln!(out, "- facially compact: {}\n", yes(s.facially_compact));
        let _ = writeln!(out, "| j | #P_j |\n|---|---|");
        for (j, size) in s.stratum_sizes.iter().enumerate() {
            let _ = writeln!(out, "| {j} | {} |", size_text(size));
        }
        let _ = writeln!(out, "\n| j | pairs | ξ onto | η onto |\n|---|---|---|---|");
        for inc in &s.incidence {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                inc.j,
                size_text(&inc.size),
                yes(inc.xi_surjective),
                yes(inc.eta_surjective)
            );
        }
        out.push('\n');
    }
    if let Some(s) = &r.smoothness {
        let _ = writeln!(out, "## Local smoothness\n");
        let _ = writeln!(
            out,
            "- locally smooth: {} ({} instances, {} modular faces)\n- witnesses: {:?}\n",
            yes(s.locally_smooth),
            s.instances_checked,
            s.modular_faces,
            s.witnesses
        );
    }
    if let Some(d) = &r.decomposition {
        let _ = writeln!(out, "## Decomposition of F⊥\n");
        let _ = writeln!(
            out,
            "- passes: {}, failures: {}, injective embedding: {}",
            d.passes,
            d.failures,
            yes(d.embedding_injective)
        );
        if !d.pairs.is_empty() {
            let _ = writeln!(out, "\n| j | E | F | e | dim E½ | ok |\n|---|---|---|---|---|---|");
            for p in &d.pairs {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | ({}) | {} | {} |",
                    p.j,
                    p.e,
                    p.f,
                    p.e_ray.join(", "),
                    p.half_space_dim,
                    yes(p.passes)
                );
            }
        }
        for f in &d.sampled {
            let _ = writeln!(
                out,
                "- 𝒫_{}: {} sampled rays, dim E½ = {}, max residual {:e}, ok: {}",
                f.j,
                f.samples,
                f.half_space_dim,
                f.max_residual,
                yes(f.passes)
            );
        }
        out.push('\n');
    }
    if let Some(f) = &r.dimension_formula {
        let _ = writeln!(out, "## Half-space dimension formula\n");
        let _ = writeln!(out, "| j | {} | {} |\n|---|---|---|", f.implemented, f.alternative);
        for row in &f.rows {
            let alt = row.alternative.map_or("undefined".to_string(), |a| a.to_string());
            let _ = writeln!(out, "| {} | {} | {} |", row.j, row.implemented, alt);
        }
        let _ = writeln!(out, "\n- the two readings disagree: {}\n", yes(f.discrepancy));
    }
    if let Some(c) = &r.complex {
        let _ = writeln!(out, "## Index complex\n");
        let _ = writeln!(
            out,
            "- ranks: {:?}\n- D∘D = 0: {}\n- betti: {:?}\n- torsion: {:?}",
            c.ranks,
            yes(c.boundary_squared_zero),
            c.betti,
            c.torsion
        );
        let _ = writeln!(
            out,
            "- exact: {}\n- Euler characteristic: {}\n- orientation independent: {}",
            yes(c.exact),
            c.euler_characteristic,
            yes(c.orientation_independent)
        );
        for (j, m) in c.boundaries.iter().enumerate() {
            let _ = writeln!(out, "- D_{} = {:?}", j + 1, m);
        }
        let _ = writeln!(out, "\n| j | rank | fibre dim | K degree |\n|---|---|---|---|");
        for row in &c.parity.rows {
            let _ = writeln!(out, "| {} | {} | {} | {} |", row.j, row.rank, row.fiber_dim, row.degree);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "## Metric\n");
    if !r.metric.requested {
        let _ = writeln!(out, "not requested\n");
    } else {
        let m = &r.metric;
        for p in &m.ray_pairs {
            let _ = writeln!(out, "- rays {} and {}: h = {:.6}, closed form {:.6}", p.a, p.b, p.h, p.closed_form);
        }
        for p in &m.polarity {
            let _ = writeln!(
                out,
                "- h(A,B) = {:.6}, h(A*,B*) = {:.6}, gap {:.2e}, ok: {}",
                p.h_primal,
                p.h_dual,
                p.gap,
                yes(p.passes)
            );
        }
        let _ = writeln!(out, "- sandwich: {} pairs, {} violations", m.sandwich_pairs_checked, m.sandwich_violations);
        if let Some(v) = m.self_duality_min {
            let _ = writeln!(out, "- smallest sampled inner product of cone points: {v:.3e}");
        }
        out.push('\n');
    }
    if let Some(s) = &r.siegel {
        let _ = writeln!(out, "## Siegel cone\n");
        let _ = writeln!(
            out,
            "- dim U = {}, dim V = {}\n- K-positive: {} ({} trials)",
            s.u_dim,
            s.v_dim,
            yes(s.k_positive),
            s.positivity_trials
        );
        if let Some((u, bu)) = &s.witness {
            let _ = writeln!(out, "- witness u = {u:?}, B(u,u) = {bu:?}");
        }
        let _ = writeln!(out, "- extreme classifier: {}/{} agree\n", s.classifier_agreements, s.boundary_samples);
    }
    if let Some(c) = &r.classical {
        let _ = writeln!(out, "## Classical index\n");
        let _ = writeln!(
            out,
            "- winding number: {}\n- index: {}\n- truncation: {}\n- index = -winding: {}\n",
            c.winding,
            c.index,
            c.truncation,
            yes(c.passes)
        );
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "## Notes\n");
        for n in &r.notes {
            let _ = writeln!(out, "- {n}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "## Checks\n\n| check | passed | instances | enforced |\n|---|---|---|---|");
    for c in &r.checks {
        let _ = writeln!(out, "| {} | {} | {} | {} |", c.name, yes(c.passed), c.instances, yes(c.enforced));
    }
    let _ = writeln!(out, "\nall enforced checks passed: {}", yes(r.all_passed));
    out
}
