//! Boundary ratio profiles behind the boundedness/compactness conditions
//! for composition operators.
//!
//! ```sh
//! cargo run --example ratio_profiles
//! ```

use dsc::counting::CountingSymbol;
use dsc::operators::{self, BoundarySchedule};
use dsc::zeros::{DiskMap, PeriodicSymbol};
use num_complex::Complex64;

fn main() {
    let schedule = BoundarySchedule::default();

    // image compactly inside the half-plane: the compactness ratio vanishes
    let inside = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::Affine {
        c0: Complex64::new(1.5, 0.0),
        c1: Complex64::new(0.5, 0.0),
    }));
    // image the whole half-plane: the ratio plateaus at a positive constant
    let onto = CountingSymbol::Periodic(PeriodicSymbol::new(DiskMap::HalfPlaneMobius {
        nu: Complex64::new(1.0, 0.0),
    }));

    println!("compactness profiles M_(phi,1+a)(w)/(Re w - 1/2)^(1+a), a = 1/2:");
    for (name, sym) in [("affine (image in C_1)", &inside), ("Moebius onto C_1/2", &onto)] {
        let p = operators::compactness_ratio(sym, 0.5, &schedule).unwrap();
        println!("  {name}: verdict {}, sup {:.4}", p.verdict, p.sup);
        let shown = p.ratios.len().min(4);
        for k in 0..shown {
            let (re, im) = p.boundary_points[k];
            println!("    w = {re:.4}{im:+.2}i  ratio {:.5}", p.ratios[k]);
        }
    }

    println!("boundedness profile M_(phi,1-a)(w)/(Re w - 1/2)^(1-a), a = 1/2, exclusion radius 0.25:");
    let p = operators::boundedness_profile(&onto, 0.5, 0.25, &schedule).unwrap();
    println!(
        "  Moebius: verdict {}, constant estimate C(delta) = {:.4} over {} grid points",
        p.verdict,
        p.sup,
        p.ratios.len()
    );

    // CSV form used by the batch driver
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    println!("profile CSV (first rows):");
    for line in text.lines().take(4) {
        println!("  {line}");
    }
}
