//! The submean-value behavior of the weighted counting function: its value
//! at a disk center against the area average over the disk.
//!
//! ```sh
//! cargo run --example submean
//! ```

use dsc::counting::{self, CountingSymbol, LimitSchedule};
use dsc::zeros::{DiskMap, PeriodicSymbol};
use num_complex::Complex64;

fn main() {
    let schedule = LimitSchedule::default();
    let sym = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::HalfPlaneMobius {
        nu: Complex64::new(1.0, 0.0),
    }));
    let w = Complex64::new(1.2, 0.3);

    println!("M_(phi,a)(w) vs its area average over D(w, r), Moebius symbol, w = {w}:");
    for a in [0.5, 1.0, 2.0] {
        for r in [0.12, 0.06, 0.015] {
            let check = counting::submean_check(&sym, a, w, r, 12, &schedule).unwrap();
            println!(
                "  a = {a:3}, r = {r:5}: center {:.6}, average {:.6}, ratio {:.4}",
                check.lhs, check.rhs, check.ratio
            );
        }
    }
    println!("(shrinking disks drive the ratio to 1 at continuity points)");

    // a target with an empty preimage neighborhood: both sides vanish
    let empty = counting::submean_check(
        &CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Affine {
            c0: Complex64::new(1.5, 0.0),
            c1: Complex64::new(0.5, 0.0),
        })),
        1.0,
        Complex64::new(2.6, 0.0),
        0.05,
        8,
        &schedule,
    )
    .unwrap();
    println!(
        "empty region: center {}, average {}, ratio {}",
        empty.lhs, empty.rhs, empty.ratio
    );
}
