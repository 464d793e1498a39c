//! Acceptance suite: one line per criterion, nonzero exit status if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use conestrat::classicwh::{index_theorem_check, min_truncation, winding_number, LaurentSymbol};
use conestrat::conemetric::{
    hausdorff_h, lorentz_lipschitz_probe, polarity_isometry_check, rational_unit_circle_point, ray_distance, MetricConfig,
};
use conestrat::curvedcones::{lorentz_as_siegel, siegel_is_extreme};
use conestrat::indexcomplex::{build_cellular_complex, homology, verify_boundary_squared, ComplexOptions};
use conestrat::polycone::fixtures::{half_line, orthant, random_pointed_solid, square_cone};
use conestrat::polycone::Cone;
use conestrat::ratlin::{qvec, rat, vec_to_f64};
use conestrat::strata::{all_pair_geometries, incidence_space, is_locally_smooth, lorentz, stratify, verify_decomposition};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn wedge() -> Cone {
    Cone::from_inequalities(2, &[qvec(&[1, 0]), vec![rat(-1, 2), rat(1, 1)]]).unwrap()
}

fn polyhedral_fixtures() -> Vec<(&'static str, Cone)> {
    vec![
        ("half_line", half_line()),
        ("quadrant2", orthant(2)),
        ("quadrant3", orthant(3)),
        ("square_cone", square_cone()),
        ("wedge", wedge()),
    ]
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

fn classical_anchor() -> Outcome {
    let start = Instant::now();
    let mut symbols: Vec<(String, LaurentSymbol)> = (-3..=3).map(|k| (format!("z^{k}"), LaurentSymbol::monomial(k))).collect();
    symbols.push(("1+0.5z".into(), LaurentSymbol::real(&[(0, 1.0), (1, 0.5)])));
    let mut failures = Vec::new();
    for (name, s) in &symbols {
        let w = winding_number(s, 256).unwrap().winding;
        match index_theorem_check(s, min_truncation(s, w)) {
            Ok(r) if r.passes => {}
            other => failures.push(format!("{name}: {other:?}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 1.0),
        format!("{} symbols, index = -winding, {:.3} s {}", symbols.len(), elapsed.as_secs_f64(), failures.join("; ")),
    )
}

fn stratification_fixtures() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, cone, sizes) in [
        ("half_line", half_line(), vec![1, 1]),
        ("quadrant3", orthant(3), vec![1, 3, 3, 1]),
        ("square_cone", square_cone(), vec![1, 4, 4, 1]),
    ] {
        let start = Instant::now();
        let s = stratify(&cone).unwrap();
        let mut good = s.stratum_sizes() == sizes;
        if name == "square_cone" {
            let pairs: Vec<usize> = (1..=3).map(|j| incidence_space(&s, j).unwrap().pairs.len()).collect();
            good &= pairs == vec![4, 8, 4];
        }
        good &= within(start.elapsed(), 1.0);
        ok &= good;
        notes.push(format!("{name} {:?}", s.stratum_sizes()));
    }
    outcome(ok, format!("{}; square cone pair counts (4, 8, 4)", notes.join(", ")))
}

fn index_complex() -> Outcome {
    let start = Instant::now();
    let mut cones: Vec<(String, Cone)> =
        vec![("half_line".into(), half_line()), ("quadrant3".into(), orthant(3)), ("square_cone".into(), square_cone())];
    for seed in 0..25u64 {
        let n = if seed % 2 == 0 { 3 } else { 4 };
        cones.push((format!("random R^{n} #{seed}"), random_pointed_solid(n, 9000 + seed)));
    }
    let mut failures = Vec::new();
    for (name, cone) in &cones {
        let s = stratify(cone).unwrap();
        let cx = build_cellular_complex(&s, &ComplexOptions::default()).unwrap();
        let exact = homology(&cx).map(|h| h.exact).unwrap_or(false);
        if !verify_boundary_squared(&cx) || !exact {
            failures.push(name.clone());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 30.0),
        format!("{} cones, D∘D = 0 and exact, {:.2} s {}", cones.len(), elapsed.as_secs_f64(), failures.join(", ")),
    )
}

fn decomposition() -> Outcome {
    let mut exact_pairs = 0;
    let mut ok = true;
    for (_, cone) in polyhedral_fixtures() {
        let s = stratify(&cone).unwrap();
        for g in all_pair_geometries(&s).unwrap() {
            exact_pairs += 1;
            ok &= verify_decomposition(&g);
        }
    }
    let mut worst: f64 = 0.0;
    let mut rays = 0;
    let mut dims_ok = true;
    for n in [3, 4] {
        for w in lorentz::sample_directions(n - 1, 720) {
            rays += 1;
            let top = lorentz::top_pair(&w);
            if n == 3 {
                dims_ok &= top.half_space_basis.len() == 1;
            }
            for g in [top, lorentz::ray_pair(&w)] {
                worst = worst.max(lorentz::decomposition_residual(&g).unwrap_or(f64::INFINITY));
            }
        }
    }
    ok &= worst <= 1e-12 && dims_ok;
    outcome(ok, format!("{exact_pairs} exact pairs over Q; {rays} Lorentz rays, max residual {worst:.1e}, dim E_1/2 = 1 in R^3"))
}

fn metric() -> Outcome {
    let start = Instant::now();
    let cfg = MetricConfig::default();
    let mut worst_ray: f64 = 0.0;
    for i in 0..720i64 {
        let s1 = rat(i - 360, 360);
        let s2 = &s1 + rat((i * 7) % 100, 250);
        let (p1, p2) = (rational_unit_circle_point(&s1), rational_unit_circle_point(&s2));
        let closed = ray_distance(&vec_to_f64(&p1), &vec_to_f64(&p2)).unwrap();
        let a = Cone::from_generators(2, &[p1]).unwrap();
        let b = Cone::from_generators(2, &[p2]).unwrap();
        worst_ray = worst_ray.max((hausdorff_h(&a, &b, &cfg).unwrap() - closed).abs());
    }
    let mut worst_gap: f64 = 0.0;
    for k in 0..20u64 {
        let a = random_pointed_solid(3, 5000 + 2 * k);
        let b = random_pointed_solid(3, 5001 + 2 * k);
        worst_gap = worst_gap.max(polarity_isometry_check(&a, &b, &cfg).unwrap().gap);
    }
    let sandwich_pairs: usize;
    let sandwich_ok = {
        let probes: Vec<_> = [3, 4].iter().map(|&n| lorentz_lipschitz_probe(n, 720, 1e-12)).collect();
        sandwich_pairs = probes.iter().map(|p| p.pairs_checked).sum();
        probes.iter().all(|p| p.holds)
    };
    let elapsed = start.elapsed();
    outcome(
        worst_ray <= 5e-3 && worst_gap <= 5e-3 && sandwich_ok && within(elapsed, 60.0),
        format!(
            "720 ray pairs max error {worst_ray:.1e}; 20 polarity gaps max {worst_gap:.1e}; {sandwich_pairs} Lorentz sandwich pairs; {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn local_smoothness() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    for (_, cone) in polyhedral_fixtures() {
        let r = is_locally_smooth(&stratify(&cone).unwrap());
        ok &= r.locally_smooth && r.witnesses.is_empty();
        checked += 1;
    }
    for n in [3, 4] {
        ok &= lorentz::is_locally_smooth(n, 720).0;
    }
    outcome(ok, format!("{checked} polyhedral fixtures without witnesses; Lorentz R^3 and R^4"))
}

fn siegel() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for m in [1, 2] {
        let (agree, total) = lorentz_as_siegel(m).membership_agreement(10_000, 42, 1e-9);
        ok &= agree * 100 >= total * 99;
        notes.push(format!("m={m} agreement {agree}/{total}"));
    }
    // boundary of C(ℝ≥0, u·u'): (u, u²/t, t) for t > 0 and (0, v, 0)
    let id = lorentz_as_siegel(1);
    let mut matches = 0;
    for k in 0..100 {
        let p = if k % 10 == 0 {
            vec![0.0, 0.5 + k as f64 / 100.0, 0.0]
        } else {
            let t = 0.1 + (k as f64) / 40.0;
            let u = ((k * 37) % 100) as f64 / 25.0 - 2.0;
            vec![u, u * u / t, t]
        };
        let (u, v, t) = (p[0], p[1], p[2]);
        let formula = (t * v - u * u).abs() <= 1e-9 * (1.0 + v.abs() * t.abs()) && (t > 0.0 || v > 0.0);
        let image_on_boundary = id.lorentz.is_extreme(&id.to_lorentz(&p), 1e-9);
        let classified = siegel_is_extreme(&p, &id.cone, 1e-9).unwrap_or(false);
        if classified == formula && formula == image_on_boundary {
            matches += 1;
        }
    }
    ok &= matches == 100;
    notes.push(format!("extreme classifier {matches}/100 boundary samples"));
    outcome(ok, notes.join("; "))
}

fn determinism() -> Outcome {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/square_cone.json");
    let run = || Command::new(env!("CARGO_BIN_EXE_conestrat")).arg("analyze").arg(&data).output().expect("binary runs");
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success() && b.status.success(),
        format!("two analyze runs, {} bytes each, identical: {same}", a.stdout.len()),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("classical anchor", classical_anchor),
        ("stratification fixtures", stratification_fixtures),
        ("index complex", index_complex),
        ("decomposition", decomposition),
        ("metric", metric),
        ("local smoothness", local_smoothness),
        ("siegel", siegel),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.passed);
        println!("{} [{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
