//! Double description, duality and the face lattice of the cone over a square.

use conestrat::polycone::{dual_face, face_lattice, is_exposed, Cone};
use conestrat::ratlin::{format_rational, qvec, QVector};

fn show(v: &QVector) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

fn main() {
    // four extreme rays, the fifth generator is redundant
    let gens = [[1, 1, 1], [1, -1, 1], [-1, 1, 1], [-1, -1, 1], [0, 0, 1]].map(|g| qvec(&g));
    let cone = Cone::from_generators(3, &gens).unwrap();
    println!("extreme rays: {}", cone.generators().iter().map(show).collect::<Vec<_>>().join(" "));
    println!("facet normals: {}", cone.inequalities().iter().map(show).collect::<Vec<_>>().join(" "));
    assert!(cone.dual().dual().same_set(&cone));

    let lattice = face_lattice(&cone).unwrap();
    for d in 0..=3 {
        println!("faces of dimension {d}: {}", lattice.faces_of_dim(d).count());
    }
    for f in &lattice.faces {
        let g = dual_face(f, &cone).unwrap();
        assert_eq!(f.dim + g.dim, 3);
        assert!(is_exposed(f, &cone).unwrap());
    }
    println!("covering pairs: {}", lattice.covering_relation.len());
}
