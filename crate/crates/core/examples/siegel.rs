//! Siegel cones: membership, extreme rays, and the identification with Lorentz cones.

use conestrat::curvedcones::{k_positivity_check, lorentz_as_siegel, siegel_is_extreme, siegel_membership, BaseCone, SiegelData};

fn main() {
    for m in [1, 2, 3] {
        let id = lorentz_as_siegel(m);
        let (agree, total) = id.membership_agreement(10_000, 1, 1e-9);
        println!("m = {m}: {agree}/{total} samples agree with the Lorentz cone in dimension {}", m + 2);
    }
    let parabola = lorentz_as_siegel(1).cone;
    for p in [[1.0, 1.0, 1.0], [1.0, 2.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.5, 1.0]] {
        let member = siegel_membership(&p, &parabola, 1e-12).unwrap();
        match siegel_is_extreme(&p, &parabola, 1e-12) {
            Ok(extreme) => println!("{p:?}: member {member}, extreme {extreme}"),
            Err(e) => println!("{p:?}: member {member}, {e}"),
        }
    }
    // B(u) = u₁² − u₂² leaves the half line
    let b = vec![vec![vec![1.0, 0.0], vec![0.0, -1.0]]];
    let k = BaseCone::Polyhedral(conestrat::polycone::fixtures::half_line());
    let data = SiegelData::new(2, k, b).unwrap();
    let report = k_positivity_check(&data, 64);
    println!("indefinite B positive: {} (witness {:?})", report.positive, report.witness);
}
