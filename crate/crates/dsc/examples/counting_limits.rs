//! Weighted mean counting functions and their iterated limits on the
//! lattice symbol: `M_{phi,a}(1/4) = 2^a ln 2` for `phi(s) = 2^{-s}`.
//!
//! ```sh
//! cargo run --example counting_limits
//! ```

use std::f64::consts::LN_2;

use dsc::counting::{self, CountingSymbol, LimitSchedule};
use dsc::series::DirichletPolynomial;
use num_complex::Complex64;

fn main() {
    let sym = CountingSymbol::Poly(DirichletPolynomial::monomial(2, Complex64::new(1.0, 0.0)));
    let w = Complex64::new(0.25, 0.0);
    let schedule = LimitSchedule::default();

    println!("window convergence of M_(phi,1)(1/4, sigma=1, T):");
    let est = counting::mean_count(&sym, 1.0, w, 1.0, &schedule).unwrap();
    for (t, v) in est.t_schedule.iter().zip(&est.per_t_values) {
        println!("  T = {t:9.2}  ->  {v:.6}");
    }
    println!(
        "  converged: {} (last step {:.2e})",
        est.converged, est.error_estimate
    );

    println!("iterated limits against the exact lattice density 2^a ln 2:");
    for a in [0.0, 0.5, 1.0, 2.0] {
        let limit = counting::mean_count_limit(&sym, a, w, &schedule).unwrap();
        let exact = 2f64.powf(a) * LN_2;
        println!(
            "  a = {a:3}: M = {:.6}, exact {:.6}, rel err {:.2e}",
            limit.value,
            exact,
            (limit.value - exact).abs() / exact
        );
    }

    // counts vanish once sigma passes the lattice abscissa
    let empty = counting::mean_count(&sym, 1.0, w, 3.0, &schedule).unwrap();
    println!("beyond the lattice (sigma = 3): M = {}", empty.value);
}
