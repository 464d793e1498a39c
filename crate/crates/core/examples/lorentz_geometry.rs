//! Closed-form pair geometry of Lorentz cones, checked on sampled boundary rays.

use conestrat::strata::lorentz;

fn main() {
    for n in [3, 4, 5] {
        let summary = lorentz::summary(n);
        let dirs = lorentz::sample_directions(n - 1, 720);
        let worst = dirs
            .iter()
            .flat_map(|w| [lorentz::top_pair(w), lorentz::ray_pair(w)])
            .map(|g| lorentz::decomposition_residual(&g).unwrap())
            .fold(0.0, f64::max);
        let (smooth, checked) = lorentz::is_locally_smooth(n, 720);
        println!(
            "n = {n}: dims {:?}, strata {:?}, {} rays, max residual {worst:.1e}, locally smooth {smooth} ({checked} checks)",
            summary.dims,
            summary.stratum_sizes,
            dirs.len()
        );
    }
}
