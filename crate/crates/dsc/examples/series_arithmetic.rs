//! Dirichlet-polynomial arithmetic: evaluation, differentiation, twisting
//! by polytorus characters, truncated exponentials, and composition with
//! symbols `c0 * s + phi(s)`.
//!
//! ```sh
//! cargo run --example series_arithmetic
//! ```

use dsc::series::{
    compose_truncated, exp_truncated, gh_test_series, multiply_truncated, Character,
    DirichletPolynomial, Symbol,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let f = DirichletPolynomial::from_terms([(2, c(1.0, 0.0)), (3, c(0.5, 0.25))]);
    println!("f(s)  = {f}");
    println!("f(1)  = {:.9}", f.eval(c(1.0, 0.0)));
    println!("f'(s) = {}", f.derivative());
    println!("f(s+1) = {}", f.shift(1.0));

    // twisting multiplies the coefficient at n by chi(n), extended
    // completely multiplicatively over the primes
    let chi = Character::new([(2, c(0.0, 1.0)), (3, c(-1.0, 0.0))]).unwrap();
    println!("twisted by chi(2)=i, chi(3)=-1: {}", f.twist(&chi));
    let six = DirichletPolynomial::monomial(6, c(1.0, 0.0));
    println!("6^(-s) twisted: {}", six.twist(&chi));

    // truncated products and exponentials are exact up to the cutoff
    let square = multiply_truncated(&f, &f, 9);
    println!("f^2 (truncated at 9) = {square}");
    let g = DirichletPolynomial::monomial(2, c(-std::f64::consts::LN_2, 0.0));
    let e = exp_truncated(&g, 16).unwrap();
    println!("exp(-ln2 * 2^(-s)) through 16 = {e}");

    // composing with psi(s) = c0 s + phi(s)
    let phi = DirichletPolynomial::from_terms([(1, c(1.5, 0.0)), (2, c(0.5, 0.0))]);
    let psi = Symbol::g0(phi).unwrap();
    let composed = compose_truncated(&DirichletPolynomial::monomial(2, c(1.0, 0.0)), &psi, 64)
        .unwrap();
    println!("2^(-psi(s)) with phi = 3/2 + (1/2)2^(-s):");
    println!("  {composed}");
    let s = c(6.0, 1.0);
    println!(
        "  pointwise check at s = {s}: composed {:.10} vs direct {:.10}",
        composed.eval(s),
        (-(psi.eval(s)) * 2f64.ln()).exp()
    );

    // the prime-supported test series of the admissible class
    let t = gh_test_series(0.0, 5);
    println!("prime test series (a = 0, 5 primes) = {t}");
}
