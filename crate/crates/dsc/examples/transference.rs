//! Transference between half-strip windows and the unit disk: counting
//! sums sandwiched by the Nevanlinna sum of the transplanted symbol.
//!
//! ```sh
//! cargo run --example transference
//! ```

use dsc::counting::CountingSymbol;
use dsc::operators;
use dsc::series::DirichletPolynomial;
use dsc::zeros::DiskMap;
use num_complex::Complex64;

fn main() {
    // the half-strip map and its normalization
    let sigma = 0.5;
    let t = 50.0;
    let center = Complex64::new(sigma + 2.0 * t, 0.0);
    println!(
        "Theta^(-1) at the normalization point {center}: {:?}",
        operators::halfstrip_inverse(center, sigma, t).unwrap()
    );

    // the sandwich M(w, 2 sigma, T) <= C1 T^(a-1) N(w) <= C2 M(w, sigma, 2T)
    let sym = CountingSymbol::Poly(DirichletPolynomial::monomial(2, Complex64::new(1.0, 0.0)));
    let w = Complex64::new(0.25, 0.0);
    println!("sandwich for phi = 2^(-s), w = 1/4, a = 1:");
    for t in [25.0, 50.0, 100.0] {
        let check = operators::transference_check(&sym, 1.0, w, sigma, t).unwrap();
        println!(
            "  T = {t:5}: lower {:.4}  disk-side {:.4}  upper {:.4}  (c1 = {:.3}, c2 = {:.3})",
            check.lower, check.mid, check.upper, check.c1, check.c2
        );
    }

    // Nevanlinna counting on the disk side
    let w_disk = Complex64::from_polar((-1.0f64).exp(), 0.5);
    let n1 = operators::nevanlinna(&DiskMap::SingularInner, 1.0, w_disk).unwrap();
    println!(
        "generalized Nevanlinna sum of the singular inner map at |w| = e^(-1): {:.6} (tail bound {:.1e})",
        n1.value, n1.tail_bound
    );
    let classical = operators::nevanlinna_classical(
        &DiskMap::HalfPlaneMobius {
            nu: Complex64::new(1.2, -0.4),
        },
        Complex64::new(1.9, 0.8),
    )
    .unwrap();
    println!(
        "classical Nevanlinna value of the univalent Moebius map: {:.6} (single preimage)",
        classical.value
    );
}
