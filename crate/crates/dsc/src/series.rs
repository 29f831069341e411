//! Exact and truncated arithmetic on Dirichlet polynomials: evaluation,
//! differentiation, shifting, twisting by polytorus characters, truncated
//! products and exponentials, and composition with symbols of the form
//! `psi(s) = c0*s + phi(s)`.
//!
//! Coefficients are stored sparsely by integer frequency `n >= 1`; every
//! truncated operation takes the truncation order `N` explicitly. All values
//! are immutable after construction and all operations are pure functions.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::primes;
use crate::{Error, Result};

/// Default truncation order used by the CLI when a config does not pin one.
pub const DEFAULT_TRUNCATION: u64 = 10_000;

/// A finite Dirichlet series `sum a_n n^{-s}` with integer frequencies
/// `n >= 1`. The abscissa of uniform convergence of a polynomial is `-inf`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirichletPolynomial {
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPolynomial {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(1, c);
        }
        Self { coeffs }
    }

    /// The single term `c * n^{-s}`.
    pub fn monomial(n: u64, c: Complex64) -> Self {
        assert!(n >= 1, "frequencies must be >= 1");
        let mut coeffs = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(n, c);
        }
        Self { coeffs }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Complex64)>) -> Self {
        let mut out = Self::zero();
        for (n, c) in terms {
            assert!(n >= 1, "frequencies must be >= 1");
            let entry = out.coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `f(+infinity)`, the coefficient at frequency 1.
    pub fn value_at_infinity(&self) -> Complex64 {
        self.coeff(1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(1)
    }

    /// Smallest frequency `>= 2` in the support, if any.
    pub fn min_frequency_above_one(&self) -> Option<u64> {
        self.coeffs.keys().find(|&&n| n >= 2).copied()
    }

    /// Evaluate the finite sum `sum a_n n^{-s}` exactly over the support.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            if n == 1 {
                acc += c;
            } else {
                acc += c * (-(s) * (n as f64).ln()).exp();
            }
        }
        acc
    }

    /// Evaluate the derivative `sum -a_n (ln n) n^{-s}`.
    pub fn eval_derivative(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            if n >= 2 {
                let ln_n = (n as f64).ln();
                acc -= c * ln_n * (-(s) * ln_n).exp();
            }
        }
        acc
    }

    /// Termwise derivative: `a_n -> -a_n ln n`, constant term dropped.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&n, _)| n >= 2)
            .map(|(&n, &c)| (n, -c * (n as f64).ln()))
            .collect();
        Self { coeffs }
    }

    /// Horizontal shift `f(. + sigma)`: `a_n -> a_n n^{-sigma}`.
    pub fn shift(&self, sigma: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, &c)| (n, c * (n as f64).powf(-sigma)))
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = Self {
            coeffs: self.coeffs.iter().map(|(&n, &c)| (n, c * k)).collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, &c) in &other.coeffs {
            *out.coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Twist by a character: `a_n -> a_n chi(n)`.
    pub fn twist(&self, chi: &Character) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, &c)| (n, c * chi.value(n)))
            .collect();
        Self { coeffs }
    }

    /// `sum a_n |.|`-style tail: `sum_{n>=2} |a_n| n^{-sigma}`, an upper
    /// bound for `|f(s) - f(+inf)|` on `Re s >= sigma`.
    pub fn tail_sup(&self, sigma: f64) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&n, _)| n >= 2)
            .map(|(&n, &c)| c.norm() * (n as f64).powf(-sigma))
            .sum()
    }

    /// Upper bound for `|f'(s)|` on `Re s >= sigma`.
    pub fn derivative_sup(&self, sigma: f64) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&n, _)| n >= 2)
            .map(|(&n, &c)| {
                let ln_n = (n as f64).ln();
                c.norm() * ln_n * (n as f64).powf(-sigma)
            })
            .sum()
    }

    /// Exact vertical period `2*pi/ln(b)` when every frequency `>= 2` in the
    /// support is a power of a common integer base `b >= 2`.
    pub fn vertical_period(&self) -> Option<f64> {
        let support: Vec<u64> = self.coeffs.keys().copied().filter(|&n| n >= 2).collect();
        let &smallest = support.first()?;
        // try bases b = smallest^(1/j), largest base (smallest period) first
        for j in 1..=smallest.ilog2().max(1) {
            let b = (smallest as f64).powf(1.0 / j as f64).round() as u64;
            if b < 2 || b.checked_pow(j).map(|v| v != smallest).unwrap_or(true) {
                continue;
            }
            if support.iter().all(|&n| is_power_of(n, b)) {
                return Some(2.0 * std::f64::consts::PI / (b as f64).ln());
            }
        }
        None
    }
}

fn is_power_of(mut n: u64, b: u64) -> bool {
    while n % b == 0 {
        n /= b;
    }
    n == 1
}

/// Truncated product: coefficient at `k <= trunc` is `sum_{nm=k} a_n b_m`.
pub fn multiply_truncated(
    f: &DirichletPolynomial,
    g: &DirichletPolynomial,
    trunc: u64,
) -> DirichletPolynomial {
    assert!(trunc >= 1, "truncation order must be >= 1");
    let mut coeffs: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (&n, &a) in &f.coeffs {
        if n > trunc {
            break;
        }
        for (&m, &b) in &g.coeffs {
            match n.checked_mul(m) {
                Some(k) if k <= trunc => {
                    *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += a * b;
                }
                _ => break,
            }
        }
    }
    let mut out = DirichletPolynomial { coeffs };
    out.prune();
    out
}

/// Truncated exponential `sum_k g^k / k!`. The sum terminates exactly
/// because the minimal frequency of `g^k` grows geometrically past `trunc`.
///
/// Rejects input with a nonzero coefficient at frequency 1; callers must
/// factor the constant term out first.
pub fn exp_truncated(g: &DirichletPolynomial, trunc: u64) -> Result<DirichletPolynomial> {
    if g.coeff(1) != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput(
            "exp_truncated requires a zero coefficient at frequency 1".into(),
        ));
    }
    let mut result = DirichletPolynomial::one();
    let mut term = DirichletPolynomial::one();
    let mut k = 1.0f64;
    loop {
        term = multiply_truncated(&term, g, trunc).scale(Complex64::new(1.0 / k, 0.0));
        if term.is_zero() {
            return Ok(result);
        }
        result = result.add(&term);
        k += 1.0;
    }
}

/// Completely multiplicative character of the rationals, identified with a
/// finitely supported point of the infinite polytorus: unimodular values on
/// finitely many primes, `chi(p) = 1` off the support.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Character {
    values: BTreeMap<u64, Complex64>,
}

impl Character {
    /// The identity character `chi == 1`.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(values: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, v) in values {
            if primes::factorize(p).len() != 1 || primes::factorize(p)[0].1 != 1 {
                return Err(Error::InvalidInput(format!(
                    "character support must consist of primes, got {p}"
                )));
            }
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "character value at {p} is not unimodular: |chi(p)| = {}",
                    v.norm()
                )));
            }
            map.insert(p, v);
        }
        Ok(Self { values: map })
    }

    /// The vertical-translation character `chi(n) = n^{-i tau}`, restricted
    /// to the given primes.
    pub fn vertical(tau: f64, primes_support: &[u64]) -> Self {
        let values = primes_support
            .iter()
            .map(|&p| {
                let angle = -tau * (p as f64).ln();
                (p, Complex64::from_polar(1.0, angle))
            })
            .collect();
        Self { values }
    }

    /// Uniform random character on the given primes (independent phases).
    pub fn random(primes_support: &[u64], rng: &mut impl rand::Rng) -> Self {
        let values = primes_support
            .iter()
            .map(|&p| {
                let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (p, Complex64::from_polar(1.0, angle))
            })
            .collect();
        Self { values }
    }

    pub fn value_at_prime(&self, p: u64) -> Complex64 {
        self.values
            .get(&p)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0))
    }

    /// The completely multiplicative extension evaluated at `n`.
    pub fn value(&self, n: u64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (p, e) in primes::factorize(n) {
            if let Some(v) = self.values.get(&p) {
                acc *= v.powi(e as i32);
            }
        }
        acc
    }

    /// Pointwise power `chi^k`.
    pub fn pow(&self, k: u32) -> Self {
        let values = self
            .values
            .iter()
            .map(|(&p, v)| (p, v.powi(k as i32)))
            .collect();
        Self { values }
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.keys().copied()
    }
}

/// Class tag for composition symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolClass {
    /// characteristic zero, maps `C_0` into `C_{1/2}`
    G0,
    /// characteristic >= 1, maps `C_0` into `C_0` (or constant imaginary)
    Gge1,
    Untagged,
}

/// Composition symbol `psi(s) = c0 * s + phi(s)` with a class tag.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub c0: u32,
    pub phi: DirichletPolynomial,
    pub class: SymbolClass,
}

impl Symbol {
    pub fn untagged(c0: u32, phi: DirichletPolynomial) -> Self {
        Self {
            c0,
            phi,
            class: SymbolClass::Untagged,
        }
    }

    /// Characteristic-zero symbol; runs the numeric mapping check
    /// `Re phi(s) > 1/2` over a sample grid in `C_0`.
    pub fn g0(phi: DirichletPolynomial) -> Result<Self> {
        let sym = Self {
            c0: 0,
            phi,
            class: SymbolClass::G0,
        };
        sym.check_mapping()?;
        Ok(sym)
    }

    pub fn identity() -> Self {
        Self {
            c0: 1,
            phi: DirichletPolynomial::zero(),
            class: SymbolClass::Gge1,
        }
    }

    pub fn phi_at_infinity(&self) -> Complex64 {
        self.phi.value_at_infinity()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        s * self.c0 as f64 + self.phi.eval(s)
    }

    /// Sample-grid mapping check for the tagged class. For `G0`: no grid
    /// point of `C_0` may have `Re phi(s) <= 1/2`.
    pub fn check_mapping(&self) -> Result<()> {
        match self.class {
            SymbolClass::G0 => {
                if self.c0 != 0 {
                    return Err(Error::SymbolClass(
                        "class G0 requires characteristic c0 = 0".into(),
                    ));
                }
                for s in mapping_grid(&self.phi) {
                    let v = self.phi.eval(s);
                    if v.re <= 0.5 {
                        return Err(Error::SymbolClass(format!(
                            "Re phi({s}) = {} <= 1/2",
                            v.re
                        )));
                    }
                }
                Ok(())
            }
            SymbolClass::Gge1 => {
                if self.c0 == 0 {
                    return Err(Error::SymbolClass(
                        "class Gge1 requires characteristic c0 >= 1".into(),
                    ));
                }
                let constant_imaginary = self.phi.support_len() == 0
                    || (self.phi.support_len() == 1 && self.phi.value_at_infinity().re == 0.0);
                if constant_imaginary {
                    return Ok(());
                }
                for s in mapping_grid(&self.phi) {
                    let v = self.phi.eval(s);
                    if v.re <= 0.0 {
                        return Err(Error::SymbolClass(format!("Re phi({s}) = {} <= 0", v.re)));
                    }
                }
                Ok(())
            }
            SymbolClass::Untagged => Ok(()),
        }
    }

    /// The twisted symbol `psi_chi(s) = c0*s + phi_chi(s)`.
    pub fn twist(&self, chi: &Character) -> Self {
        Self {
            c0: self.c0,
            phi: self.phi.twist(chi),
            class: self.class,
        }
    }
}

fn mapping_grid(phi: &DirichletPolynomial) -> Vec<Complex64> {
    let period = phi
        .vertical_period()
        .unwrap_or(2.0 * std::f64::consts::PI / std::f64::consts::LN_2);
    let mut grid = Vec::new();
    let mut sigma = 1e-3;
    while sigma <= 50.0 {
        for k in 0..24 {
            let t = period * k as f64 / 24.0;
            grid.push(Complex64::new(sigma, t));
        }
        sigma *= 1.9;
    }
    grid
}

/// Composition `f(psi(s))` truncated at frequency `trunc`, built termwise:
/// `n^{-psi(s)} = n^{-a1} * n^{-c0 s} * exp(-ln(n) * (phi - a1))`, where the
/// factor `n^{-c0 s}` multiplies frequencies by `n^{c0}`.
pub fn compose_truncated(
    f: &DirichletPolynomial,
    psi: &Symbol,
    trunc: u64,
) -> Result<DirichletPolynomial> {
    if trunc < 1 {
        return Err(Error::InvalidInput(
            "composition truncation order must be >= 1".into(),
        ));
    }
    let alpha = psi.phi_at_infinity();
    let reduced = psi.phi.sub(&DirichletPolynomial::constant(alpha));
    let mut out = DirichletPolynomial::zero();
    for (n, a_n) in f.terms() {
        if n == 1 {
            out = out.add(&DirichletPolynomial::constant(a_n));
            continue;
        }
        let ln_n = (n as f64).ln();
        // frequency multiplier contributed by n^{-c0 s}
        let mult = match n.checked_pow(psi.c0) {
            Some(m) if m <= trunc => m,
            _ => continue,
        };
        let cap = trunc / mult;
        let expo = exp_truncated(&reduced.scale(Complex64::new(-ln_n, 0.0)), cap.max(1))?;
        let head = (-alpha * ln_n).exp(); // n^{-a1}
        for (m, c) in expo.terms() {
            match m.checked_mul(mult) {
                Some(k) if k <= trunc => {
                    out = out.add(&DirichletPolynomial::monomial(k, a_n * head * c));
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

/// The prime-supported test series with coefficients
/// `a_p = (sqrt(p) * ln(p)^{1 + a/2})^{-1}` over the first `count` primes.
/// For `a <= 1` it lies in `D_a` with abscissa of convergence 1/2, and its
/// vertical limits almost surely converge on `C_0`.
pub fn gh_test_series(a: f64, count: usize) -> DirichletPolynomial {
    assert!(a <= 1.0, "the test series is defined for weights a <= 1");
    let ps = primes::first_primes(count);
    DirichletPolynomial::from_terms(ps.into_iter().map(|p| {
        let pf = p as f64;
        let coeff = 1.0 / (pf.sqrt() * pf.ln().powf(1.0 + a / 2.0));
        (p, Complex64::new(coeff, 0.0))
    }))
}

impl fmt::Display for DirichletPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&n, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if n == 1 {
                write!(f, "({:.6} + {:.6}i)", c.re, c.im)?;
            } else {
                write!(f, "({:.6} + {:.6}i)*{}^(-s)", c.re, c.im, n)?;
            }
        }
        Ok(())
    }
}

// --- serialization: {"coeffs": [[n, re, im], ...]} ------------------------

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<(u64, f64, f64)>,
}

impl Serialize for DirichletPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            coeffs: self.terms().map(|(n, c)| (n, c.re, c.im)).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        for &(n, _, _) in &repr.coeffs {
            if n < 1 {
                return Err(D::Error::custom("frequencies must be >= 1"));
            }
        }
        Ok(DirichletPolynomial::from_terms(
            repr.coeffs
                .into_iter()
                .map(|(n, re, im)| (n, Complex64::new(re, im))),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    c0: u32,
    phi: DirichletPolynomial,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<String>,
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let class = match self.class {
            SymbolClass::G0 => Some("G0".to_string()),
            SymbolClass::Gge1 => Some("Gge1".to_string()),
            SymbolClass::Untagged => None,
        };
        SymbolRepr {
            c0: self.c0,
            phi: self.phi.clone(),
            class,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SymbolRepr::deserialize(deserializer)?;
        let class = match repr.class.as_deref() {
            Some("G0") => SymbolClass::G0,
            Some("Gge1") => SymbolClass::Gge1,
            None => SymbolClass::Untagged,
            Some(other) => {
                return Err(D::Error::custom(format!("unknown symbol class {other:?}")))
            }
        };
        let sym = Symbol {
            c0: repr.c0,
            phi: repr.phi,
            class,
        };
        sym.check_mapping().map_err(D::Error::custom)?;
        Ok(sym)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_pow() -> DirichletPolynomial {
        DirichletPolynomial::monomial(2, c(1.0, 0.0))
    }

    #[test]
    fn eval_basics() {
        // single term 2^{-s} at s = 1
        assert!((two_pow().eval(c(1.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        // constant 1 anywhere
        assert!((DirichletPolynomial::one().eval(c(3.0, -7.0)) - c(1.0, 0.0)).norm() < 1e-15);
        // 2^{-s}+3^{-s} at s = 0: n^0 = 1
        let f = two_pow().add(&DirichletPolynomial::monomial(3, c(1.0, 0.0)));
        assert!((f.eval(c(0.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_term_rule() {
        let d = two_pow().derivative();
        assert!((d.coeff(2) + c(2f64.ln(), 0.0)).norm() < 1e-15);
        assert!(DirichletPolynomial::one().derivative().is_zero());
        let d4 = DirichletPolynomial::monomial(4, c(1.0, 0.0)).derivative();
        assert!((d4.coeff(4) + c(4f64.ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shift_scales_coefficients() {
        let f = two_pow().shift(1.0);
        assert!((f.coeff(2) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(two_pow().shift(0.0), two_pow());
        let g = DirichletPolynomial::monomial(3, c(1.0, 0.0)).shift(2.0);
        assert!((g.coeff(3) - c(1.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn twist_multiplicative() {
        let chi = Character::new([(2, c(0.0, 1.0)), (3, c(-1.0, 0.0))]).unwrap();
        let f = two_pow().twist(&chi);
        assert!((f.coeff(2) - c(0.0, 1.0)).norm() < 1e-15);
        // chi(6) = chi(2) chi(3) = -i
        let g = DirichletPolynomial::monomial(6, c(1.0, 0.0)).twist(&chi);
        assert!((g.coeff(6) - c(0.0, -1.0)).norm() < 1e-15);
        // trivial character leaves f unchanged
        assert_eq!(two_pow().twist(&Character::trivial()), two_pow());
    }

    #[test]
    fn multiply_respects_truncation() {
        let three = DirichletPolynomial::monomial(3, c(1.0, 0.0));
        let p6 = multiply_truncated(&two_pow(), &three, 6);
        assert!((p6.coeff(6) - c(1.0, 0.0)).norm() < 1e-15);
        let p5 = multiply_truncated(&two_pow(), &three, 5);
        assert!(p5.is_zero());
        // (1 + 2^{-s})^2 = 1 + 2*2^{-s} + 4^{-s}
        let f = DirichletPolynomial::one().add(&two_pow());
        let sq = multiply_truncated(&f, &f, 4);
        assert!((sq.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((sq.coeff(2) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((sq.coeff(4) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exp_matches_taylor() {
        // exp(-ln(2) * 3^{-s}) truncated at 9: 1 - ln2*3^{-s} + ln2^2/2*9^{-s}
        let ln2 = 2f64.ln();
        let g = DirichletPolynomial::monomial(3, c(-ln2, 0.0));
        let e = exp_truncated(&g, 9).unwrap();
        assert!((e.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e.coeff(3) + c(ln2, 0.0)).norm() < 1e-15);
        assert!((e.coeff(9) - c(ln2 * ln2 / 2.0, 0.0)).norm() < 1e-15);
        // exp(0) = 1
        assert_eq!(
            exp_truncated(&DirichletPolynomial::zero(), 5).unwrap(),
            DirichletPolynomial::one()
        );
        // coefficient at 8 of exp(c*2^{-s}) is c^3/6
        let k = c(0.3, -0.7);
        let e8 = exp_truncated(&DirichletPolynomial::monomial(2, k), 8).unwrap();
        assert!((e8.coeff(8) - k * k * k / 6.0).norm() < 1e-14);
        // nonzero constant term is rejected
        assert!(exp_truncated(&DirichletPolynomial::one(), 4).is_err());
    }

    #[test]
    fn compose_identity_and_shift() {
        let f = two_pow();
        let id = Symbol::identity();
        assert_eq!(compose_truncated(&f, &id, 2).unwrap(), f);
        // psi(s) = s + 1 halves the coefficient of 2^{-s}
        let shift = Symbol::untagged(1, DirichletPolynomial::one());
        let g = compose_truncated(&f, &shift, 2).unwrap();
        assert!((g.coeff(2) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn compose_exponential_expansion() {
        // phi = 3/2 + (1/2) 2^{-s}; coefficient of f∘psi at 4^{-s} is
        // 2^{-3/2} (ln2/2)^2 / 2
        let phi = DirichletPolynomial::constant(c(1.5, 0.0))
            .add(&DirichletPolynomial::monomial(2, c(0.5, 0.0)));
        let psi = Symbol::untagged(0, phi);
        let f = two_pow();
        let comp = compose_truncated(&f, &psi, 16).unwrap();
        let ln2 = 2f64.ln();
        let expect = 2f64.powf(-1.5) * (ln2 / 2.0).powi(2) / 2.0;
        assert!((comp.coeff(4) - c(expect, 0.0)).norm() < 1e-12);
        assert!((expect - 0.021236).abs() < 1e-5);
    }

    #[test]
    fn compose_agrees_with_pointwise_eval_at_large_re() {
        let f = two_pow().add(&DirichletPolynomial::monomial(3, c(0.5, 0.25)));
        let phi = DirichletPolynomial::constant(c(1.25, 0.0))
            .add(&DirichletPolynomial::monomial(2, c(0.5, 0.0)));
        let psi = Symbol::untagged(0, phi);
        let trunc = 4096;
        let comp = compose_truncated(&f, &psi, trunc).unwrap();
        for &t in &[0.0, 1.3, -2.7] {
            let s = c(8.0, t);
            let direct = f.eval(psi.eval(s));
            let via = comp.eval(s);
            assert!(
                (direct - via).norm() < 1e-8,
                "mismatch at t={t}: {direct} vs {via}"
            );
        }
    }

    #[test]
    fn gh_series_coefficients() {
        let ln2 = 2f64.ln();
        let f0 = gh_test_series(0.0, 1);
        let expect0 = 1.0 / (2f64.sqrt() * ln2);
        assert!((f0.coeff(2).re - expect0).abs() < 1e-14);
        assert!((expect0 - 1.0201).abs() < 1e-3);
        let f1 = gh_test_series(1.0, 1);
        let expect1 = 1.0 / (2f64.sqrt() * ln2.powf(1.5));
        assert!((f1.coeff(2).re - expect1).abs() < 1e-14);
        assert!((expect1 - 1.2253).abs() < 1e-3);
        assert!(gh_test_series(0.5, 0).is_zero());
    }

    #[test]
    fn vertical_periods() {
        assert!(two_pow().vertical_period().is_some());
        let f48 = DirichletPolynomial::from_terms([(4, c(1.0, 0.0)), (8, c(1.0, 0.0))]);
        let p = f48.vertical_period().unwrap();
        assert!((p - 2.0 * std::f64::consts::PI / 2f64.ln()).abs() < 1e-12);
        let f4 = DirichletPolynomial::monomial(4, c(1.0, 0.0));
        let p4 = f4.vertical_period().unwrap();
        assert!((p4 - 2.0 * std::f64::consts::PI / 4f64.ln()).abs() < 1e-12);
        let mixed = DirichletPolynomial::from_terms([(2, c(1.0, 0.0)), (3, c(1.0, 0.0))]);
        assert!(mixed.vertical_period().is_none());
    }

    #[test]
    fn serde_round_trip() {
        let f = two_pow().add(&DirichletPolynomial::monomial(6, c(-0.25, 1.5)));
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("coeffs"));
        let back: DirichletPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);

        let phi = DirichletPolynomial::constant(c(1.5, 0.0))
            .add(&DirichletPolynomial::monomial(2, c(0.5, 0.0)));
        let sym = Symbol::g0(phi).unwrap();
        let json = serde_json::to_string(&sym).unwrap();
        let back: Symbol = serde_json::from_str(&json).unwrap();
        assert_eq!(sym, back);
    }

    #[test]
    fn g0_check_rejects_bad_symbols() {
        // phi = 2^{-s} takes values with Re <= 1/2 on C_0
        assert!(Symbol::g0(two_pow()).is_err());
        let ok = DirichletPolynomial::constant(c(1.5, 0.0))
            .add(&DirichletPolynomial::monomial(2, c(0.5, 0.0)));
        assert!(Symbol::g0(ok).is_ok());
    }
}
