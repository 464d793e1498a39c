//! Winding number against Toeplitz index for a few Laurent polynomial symbols.

use conestrat::classicwh::{index_theorem_check, min_truncation, winding_number, LaurentSymbol};
use num_complex::Complex64;

fn main() {
    let symbols = [
        ("z^2", LaurentSymbol::monomial(2)),
        ("z^-3", LaurentSymbol::monomial(-3)),
        ("1 + z/2", LaurentSymbol::real(&[(0, 1.0), (1, 0.5)])),
        ("z(2i + (1+i)z/2)", LaurentSymbol::new([(1, Complex64::new(0.0, 2.0)), (2, Complex64::new(0.5, 0.5))])),
    ];
    println!("{:<18} {:>8} {:>6} {:>6}", "symbol", "winding", "index", "N");
    for (name, s) in &symbols {
        let w = winding_number(s, 256).expect("symbol does not vanish on the circle");
        let r = index_theorem_check(s, min_truncation(s, w.winding)).expect("supported symbol");
        println!("{name:<18} {:>8} {:>6} {:>6}", r.winding, r.index, r.truncation);
        assert!(r.passes);
    }
}
