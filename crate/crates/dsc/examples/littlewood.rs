//! The Littlewood-type upper bound for the weight-1 mean counting
//! function, with its equality case for univalent half-plane symbols.
//!
//! ```sh
//! cargo run --example littlewood
//! ```

use dsc::counting::{CountingSymbol, LimitSchedule};
use dsc::operators;
use dsc::zeros::{DiskMap, PeriodicSymbol};
use num_complex::Complex64;

fn main() {
    let schedule = LimitSchedule::default();

    // the affine symbol: image compactly inside the half-plane
    let affine = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Affine {
        c0: Complex64::new(1.5, 0.0),
        c1: Complex64::new(0.5, 0.0),
    }));
    println!("phi = 3/2 + (1/2) 2^(-s):");
    for w in [
        Complex64::new(13.0 / 8.0, 0.0),
        Complex64::new(1.3, 0.2),
        Complex64::new(4.0, 0.0), // outside the image: lhs = 0
    ] {
        let check = operators::littlewood_bound_check(&affine, w, &schedule).unwrap();
        println!(
            "  w = {w:10}: M_1 = {:.6} <= bound {:.6} (holds: {})",
            check.lhs, check.rhs, check.holds
        );
    }

    // the half-plane Moebius symbol is univalent: the bound is an equality
    let mobius = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::HalfPlaneMobius {
        nu: Complex64::new(1.0, 0.0),
    }));
    println!("phi = Moebius onto the half-plane (equality case):");
    for w in [Complex64::new(1.25, 0.4), Complex64::new(0.7, -1.4)] {
        let check = operators::littlewood_bound_check(&mobius, w, &schedule).unwrap();
        println!(
            "  w = {w:10}: M_1 = {:.12}, bound = {:.12}, gap {:.1e}",
            check.lhs,
            check.rhs,
            (check.rhs - check.lhs).abs()
        );
    }

    // the quadratic consequence used by the compactness profiles
    let w = Complex64::new(1.2, 0.7);
    let check = operators::littlewood_bound_check(&mobius, w, &schedule).unwrap();
    println!(
        "quadratic form at {w}: M_1 = {:.6} <= {:.6}",
        check.lhs,
        operators::quadratic_counting_bound(&mobius, w)
    );
}
