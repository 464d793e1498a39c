//! Augmented cellular complex of a random cone, with homology over ℤ.

use conestrat::indexcomplex::{build_cellular_complex, homology, k_parity_table, verify_boundary_squared, ComplexOptions};
use conestrat::polycone::fixtures::random_pointed_solid;
use conestrat::strata::stratify;

fn main() {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(11);
    let s = stratify(&random_pointed_solid(4, seed)).unwrap();
    for opts in [ComplexOptions::default(), ComplexOptions { seed: Some(seed) }] {
        let cx = build_cellular_complex(&s, &opts).unwrap();
        let h = homology(&cx).unwrap();
        println!(
            "cells per degree {:?}, D∘D = 0: {}, betti {:?}, exact: {}",
            cx.ranks(),
            verify_boundary_squared(&cx),
            h.betti,
            h.exact
        );
    }
    let table = k_parity_table(&s.summary()).unwrap();
    for row in &table.rows {
        println!("j = {}: {} cells, fibre dimension {}, K-degree {}", row.j, row.rank, row.fiber_dim, row.degree);
    }
}
