//! Strata, incidence spaces and the exact pair geometry of the square cone.

use conestrat::polycone::fixtures::square_cone;
use conestrat::ratlin::format_rational;
use conestrat::strata::{all_pair_geometries, incidence_space, is_locally_smooth, stratify, verify_decomposition};

fn main() {
    let s = stratify(&square_cone()).unwrap();
    println!("face dimensions of the dual: {:?}", s.dims);
    println!("stratum sizes: {:?}", s.stratum_sizes());
    for j in 1..=s.d() {
        let p = incidence_space(&s, j).unwrap();
        println!(
            "P_{j}: {} pairs, half space dim {}, xi onto: {}, eta onto: {}",
            p.pairs.len(),
            s.half_space_dim(j),
            p.xi_surjective,
            p.eta_surjective
        );
    }
    for g in all_pair_geometries(&s).unwrap().iter().take(4) {
        let e: Vec<String> = g.e_vector_ray.iter().map(format_rational).collect();
        println!("E = {:>2}, F = {:>2}: e spans ({})", g.e_face, g.f_face, e.join(", "));
        assert!(verify_decomposition(g));
    }
    println!("locally smooth: {}", is_locally_smooth(&s).locally_smooth);
}
