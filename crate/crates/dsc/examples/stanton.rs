//! The change-of-variables formula for composition operators: the norm of
//! the composed series equals a counting-weighted area integral.
//!
//! ```sh
//! cargo run --example stanton
//! ```

use dsc::counting::CountingSymbol;
use dsc::series::DirichletPolynomial;
use dsc::spaces::{self, StantonGrid};
use dsc::zeros::{DiskMap, PeriodicSymbol};
use num_complex::Complex64;

fn main() {
    let f = DirichletPolynomial::monomial(2, Complex64::new(1.0, 0.0));
    let grid = StantonGrid::default();

    let affine = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Affine {
        c0: Complex64::new(1.5, 0.0),
        c1: Complex64::new(0.5, 0.0),
    }));
    let mobius = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::HalfPlaneMobius {
        nu: Complex64::new(1.0, 0.0),
    }));

    println!("||f o phi||_a^2 = |f(phi(inf))|^2 + c_a int |f'(w)|^2 M_(phi,1-a)(w) dA(w)");
    println!("with f = 2^(-s):");
    for (name, sym) in [("3/2 + (1/2) 2^(-s)", &affine), ("half-plane Moebius", &mobius)] {
        for a in [0.0, -1.0] {
            let check = spaces::stanton_verify(&f, sym, a, &grid).unwrap();
            println!(
                "  phi = {name}, a = {a:4}: coefficient side {:.6}, counting side {:.6}, rel gap {:.2e}",
                check.lhs, check.rhs, check.rel_err
            );
        }
    }

    // the pinned coefficient-side value for the affine symbol at a = 0
    let check = spaces::stanton_verify(&f, &affine, 0.0, &grid).unwrap();
    println!(
        "coefficient-side oracle: ||2^(-phi)||_0^2 = (1/8) sum_k ((ln2/2)^k / k!)^2 = {:.6}",
        check.lhs
    );
}
