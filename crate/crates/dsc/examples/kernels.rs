//! Reproducing kernels of the weighted spaces and the zeta-like sums with
//! their singular main term.
//!
//! ```sh
//! cargo run --example kernels
//! ```

use dsc::series::DirichletPolynomial;
use dsc::spaces;
use num_complex::Complex64;

fn main() {
    // the kernel reproduces point values under the weighted pairing
    let f = DirichletPolynomial::from_terms([
        (1, Complex64::new(0.4, 0.0)),
        (2, Complex64::new(1.0, -0.3)),
        (6, Complex64::new(-0.2, 0.8)),
    ]);
    let s0 = Complex64::new(0.9, 0.4);
    for a in [-1.0, 0.0, 0.5] {
        let k = spaces::kernel_polynomial(s0, a, 64);
        let paired = spaces::inner_product_da(&f, &k, a);
        println!(
            "a = {a:4}: <f, k_s> = {paired:.12}, f(s) = {:.12}",
            f.eval(s0)
        );
    }

    // near the boundary the squared norm grows like (2 Re s - 1)^(a-1)
    println!("boundary products ||k||^2 (2 Re s - 1)^(1-a):");
    for a in [-1.0, 0.0, 0.5] {
        let mut row = format!("  a = {a:4}:");
        for re in [0.6, 0.55, 0.525, 0.5125] {
            let kn = spaces::kernel_norm(Complex64::new(re, 0.0), a, 400_000).unwrap();
            row.push_str(&format!(
                "  {:.4}",
                kn.norm_sq * (2.0 * re - 1.0).powf(1.0 - a)
            ));
        }
        println!("{row}");
    }

    // J_a(w) = Gamma(2-a)/(w-1)^(2-a) + E_a(w) with E_a holomorphic past
    // the singularity
    println!("singular decomposition along w -> 1+:");
    for a in [0.0, 0.5, 1.0] {
        for u in [2.0, 1.2, 1.05] {
            let d = spaces::ja_eval(Complex64::new(u, 0.0), a, 400_000).unwrap();
            println!(
                "  a = {a:3}, w = {u:5}: J = {:10.4}, main {:10.4}, remainder {:+.4}",
                d.value().re,
                d.main_term().re,
                d.remainder().re
            );
        }
    }
}
