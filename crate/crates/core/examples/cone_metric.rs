//! Distances between cones, the polarity check and the ray-pair closed form.

use conestrat::conemetric::{hausdorff_h, polarity_isometry_check, ray_distance, MetricConfig};
use conestrat::polycone::fixtures::{orthant, random_pointed_solid};
use conestrat::polycone::Cone;
use conestrat::ratlin::qvec;

fn main() {
    let cfg = MetricConfig::default();
    let quadrant = orthant(2);
    let half_plane = Cone::from_generators(2, &[qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1])]).unwrap();
    println!("h(quadrant, half plane) = {:.6}", hausdorff_h(&quadrant, &half_plane, &cfg).unwrap());

    let (a, b) = (qvec(&[1, 0]), qvec(&[3, 4]));
    let closed = ray_distance(&[1.0, 0.0], &[0.6, 0.8]).unwrap();
    let ra = Cone::from_generators(2, &[a]).unwrap();
    let rb = Cone::from_generators(2, &[b]).unwrap();
    println!("ray pair: sampled {:.6}, closed form {closed:.6}", hausdorff_h(&ra, &rb, &cfg).unwrap());

    for seed in 0..5 {
        let (a, b) = (random_pointed_solid(3, 2 * seed), random_pointed_solid(3, 2 * seed + 1));
        let r = polarity_isometry_check(&a, &b, &cfg).unwrap();
        println!("seed {seed}: h = {:.4}, h on duals = {:.4}, gap {:.1e}", r.h_primal, r.h_dual, r.gap);
    }
}
