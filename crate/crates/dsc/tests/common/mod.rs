//! Fixtures and closed-form oracles shared by the integration suites.
//!
//! The fixture family is periodic symbols `phi(s) = g(2^{-s})` whose zero
//! sets are explicit vertical lattices: everything here is computed from
//! the lattice geometry alone, independent of the library's scans,
//! quadratures, and schedules.

// not every integration binary touches every helper
#![allow(dead_code)]

use std::f64::consts::LN_2;

use dsc::counting::CountingSymbol;
use dsc::series::DirichletPolynomial;
use dsc::zeros::{DiskMap, PeriodicSymbol, Rectangle, PERIOD_BASE_2};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `2^{-s}` as a Dirichlet polynomial.
pub fn poly_lattice() -> DirichletPolynomial {
    DirichletPolynomial::monomial(2, c(1.0, 0.0))
}

/// `3/2 + (1/2) 2^{-s}` as a Dirichlet polynomial.
pub fn poly_affine() -> DirichletPolynomial {
    DirichletPolynomial::from_terms([(1, c(1.5, 0.0)), (2, c(0.5, 0.0))])
}

pub fn periodic_identity() -> PeriodicSymbol {
    PeriodicSymbol::new(DiskMap::Identity)
}

pub fn periodic_affine() -> PeriodicSymbol {
    PeriodicSymbol::new(DiskMap::Affine {
        c0: c(1.5, 0.0),
        c1: c(0.5, 0.0),
    })
}

pub fn periodic_mobius(nu: Complex64) -> PeriodicSymbol {
    PeriodicSymbol::new(DiskMap::HalfPlaneMobius { nu })
}

pub fn singular_inner() -> PeriodicSymbol {
    PeriodicSymbol::new(DiskMap::SingularInner)
}

/// The base points `(rho, tau0)` of the preimage lattice of `w`: zeros sit
/// at `rho + i (tau0 + k * 2 pi / ln 2)`.
pub fn lattice_bases(map: &DiskMap, w: Complex64) -> Vec<(f64, f64)> {
    map.preimages(w, 0.0, 1.0 - 1e-12)
        .inside
        .iter()
        .map(|(z, _)| {
            let base = PeriodicSymbol::base_point(*z);
            (base.re, base.im)
        })
        .collect()
}

/// Exact number of lattice zeros inside an open rectangle.
pub fn lattice_count(bases: &[(f64, f64)], rect: &Rectangle) -> i64 {
    let mut count = 0i64;
    for &(rho, tau0) in bases {
        if rho <= rect.sigma_min || rho >= rect.sigma_max {
            continue;
        }
        let k_lo = ((rect.t_min - tau0) / PERIOD_BASE_2).ceil() as i64;
        let k_hi = ((rect.t_max - tau0) / PERIOD_BASE_2).floor() as i64;
        for k in k_lo..=k_hi {
            let t = tau0 + k as f64 * PERIOD_BASE_2;
            if rect.t_min < t && t < rect.t_max {
                count += 1;
            }
        }
    }
    count
}

/// Jensen-formula oracle for the Jessen function of a periodic symbol:
/// the circular mean of `log |g(z) - w|` over `|z| = 2^{-sigma}` is
/// `log |g(0) - w| + ln(2) * sum_{rho_i > sigma} (rho_i - sigma)`.
pub fn jessen_oracle(map: &DiskMap, w: Complex64, sigma: f64) -> f64 {
    let mut acc = (map.value_at_center() - w).norm().ln();
    let r = 2f64.powf(-sigma);
    for (z, mult) in map.preimages(w, 0.0, r).inside {
        acc += mult as f64 * (r / z.norm()).ln();
    }
    acc
}

/// Exact mean-count limit `M_{phi,b}(w) = ln(2) * sum rho_i^b` from the
/// lattice density (finitely many preimages assumed).
pub fn lattice_limit(map: &DiskMap, b: f64, w: Complex64) -> f64 {
    lattice_bases(map, w)
        .iter()
        .map(|&(rho, _)| LN_2 * rho.powf(b))
        .sum()
}

pub fn counting_fixtures() -> Vec<(&'static str, CountingSymbol, Complex64)> {
    vec![
        (
            "lattice 2^(-s)",
            CountingSymbol::Periodic(periodic_identity()),
            c(0.25, 0.0),
        ),
        (
            "affine 3/2+(1/2)2^(-s)",
            CountingSymbol::Periodic(periodic_affine()),
            c(13.0 / 8.0, 0.0),
        ),
        (
            "half-plane Moebius",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
            c(1.25, 0.4),
        ),
    ]
}

/// Simple deterministic generator for reproducible "random" test data.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
}
