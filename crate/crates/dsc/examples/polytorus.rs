//! The ergodic representation of the mean counting function: averaging
//! unit-window counts of twisted symbols over the infinite polytorus.
//!
//! ```sh
//! cargo run --example polytorus
//! ```

use std::f64::consts::LN_2;

use dsc::counting::{self, CountingSymbol, LimitSchedule};
use dsc::series::{Character, DirichletPolynomial};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let sym = CountingSymbol::Poly(DirichletPolynomial::monomial(2, Complex64::new(1.0, 0.0)));
    let w = Complex64::new(0.25, 0.0);
    let exact = 2.0 * LN_2;

    println!("M_(phi,1)(1/4) as a polytorus average of M_(phi_chi,1)(1/4, 0, 1):");
    for samples in [500u64, 2_000, 10_000] {
        let avg = counting::polytorus_average(&sym, 1.0, w, samples, 424_242).unwrap();
        println!(
            "  {samples:6} samples: {:.6} +- {:.6}   (exact {:.6}, off by {:+.2} stderr)",
            avg.estimate,
            avg.stderr,
            exact,
            (avg.estimate - exact) / avg.stderr
        );
    }

    // for a >= 1 the T-limit may be taken at sigma = 0 directly, for almost
    // every character
    let schedule = LimitSchedule::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    println!("direct T-limits at sigma = 0 for sampled characters (a = 1):");
    for k in 0..4 {
        let chi = Character::random(&[2], &mut rng);
        let est = counting::direct_t_limit(&sym, 1.0, w, &chi, &schedule).unwrap();
        println!(
            "  chi #{k}: {:.6} (rel err {:.2e})",
            est.value,
            (est.value - exact).abs() / exact
        );
    }
}
