//! The two integral identities tying the weighted counting function to the
//! unweighted one and to the Jessen function.
//!
//! ```sh
//! cargo run --example identities
//! ```

use dsc::counting::{self, CountingSymbol, LimitSchedule};
use dsc::zeros::{DiskMap, PeriodicSymbol};
use num_complex::Complex64;

fn main() {
    let schedule = LimitSchedule::default();
    let fixtures: Vec<(&str, CountingSymbol, Complex64)> = vec![
        (
            "2^(-s)",
            CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Identity)),
            Complex64::new(0.25, 0.0),
        ),
        (
            "3/2 + (1/2) 2^(-s)",
            CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Affine {
                c0: Complex64::new(1.5, 0.0),
                c1: Complex64::new(0.5, 0.0),
            })),
            Complex64::new(13.0 / 8.0, 0.0),
        ),
        (
            "half-plane Moebius",
            CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::HalfPlaneMobius {
                nu: Complex64::new(1.0, 0.0),
            })),
            Complex64::new(1.25, 0.4),
        ),
    ];

    println!("weight identity   M_a(s) = M_0(s) s^a + a int_s^inf t^(a-1) M_0(t) dt");
    println!("jessen identity   M_a(s) - M_0(s) s^a = a s^(a-1) J(s) - a cap^(a-1) log|phi(inf)-w| - a(1-a) int t^(a-2) J");
    for (name, sym, w) in &fixtures {
        println!("symbol {name}, target {w}:");
        for a in [0.5, 1.0, 2.0] {
            for sigma in [0.7, 1.3] {
                let wi = counting::verify_weight_identity(sym, a, *w, sigma, &schedule).unwrap();
                let ji = counting::verify_jessen_identity(sym, a, *w, sigma, &schedule).unwrap();
                println!(
                    "  a = {a:3}, sigma = {sigma}: weight lhs {:+.6} rhs {:+.6} (rel {:.1e});  jessen rel {:.1e}",
                    wi.lhs, wi.rhs, wi.rel_residual, ji.rel_residual
                );
            }
        }
    }
}
