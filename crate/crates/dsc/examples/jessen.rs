//! The Jessen function of `phi - w` along vertical lines: quadrature vs
//! character averages, and the right-derivative route back to the
//! unweighted counting function.
//!
//! ```sh
//! cargo run --example jessen
//! ```

use std::f64::consts::LN_2;

use dsc::counting::{self, CountingSymbol, JessenMode};
use dsc::series::DirichletPolynomial;
use num_complex::Complex64;

fn main() {
    let sym = CountingSymbol::Poly(DirichletPolynomial::monomial(2, Complex64::new(1.0, 0.0)));
    let w = Complex64::new(0.25, 0.0);

    println!("J(sigma) for phi = 2^(-s), w = 1/4 (oracle: max(-sigma ln 2, ln|w|)):");
    for sigma in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let vertical = counting::jessen(&sym, w, sigma, 500.0, JessenMode::Vertical).unwrap();
        let mc = counting::jessen(
            &sym,
            w,
            sigma,
            500.0,
            JessenMode::MonteCarlo {
                samples: 30_000,
                seed: 17,
            },
        )
        .unwrap();
        let oracle = (-sigma * LN_2).max(w.norm().ln());
        println!(
            "  sigma = {sigma:3}: vertical {vertical:+.9}  characters {mc:+.6}  oracle {oracle:+.9}"
        );
    }

    println!("unweighted count recovered from -J'(sigma+):");
    for sigma in [1.0, 1.7, 2.5] {
        let d = counting::count_from_jessen(&sym, w, sigma, 1e-2).unwrap();
        println!(
            "  sigma = {sigma}: M_(phi,0) = {:.9} (step {:.1e}, stable {})",
            d.value, d.step, d.stable
        );
    }
    println!("(below the lattice line the slope is ln 2 = {LN_2:.9}, above it 0)");
}
