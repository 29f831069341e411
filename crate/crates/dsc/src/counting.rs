//! Weighted mean counting functions
//! `M_{phi,a}(w, sigma, T) = (pi/T) * sum (Re s)^a` over the solutions of
//! `phi(s) = w` with `sigma < Re s` and `|Im s| < T`, their `T`- and
//! `sigma`-limits, the Jessen function and its right-derivative link to the
//! unweighted count, the weight/Jessen integral identities, ergodic
//! averages over the polytorus, and a submean-value diagnostic.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::primes;
use crate::quad;
use crate::series::{Character, DirichletPolynomial};
use crate::zeros::{self, AnalyticSymbol, DiskMap, PeriodicSymbol, Rectangle, PERIOD_BASE_2};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// symbols the counting layer accepts
// ---------------------------------------------------------------------------

/// A symbol whose zero sets the counting functions can reach: either a
/// Dirichlet polynomial (argument-principle scans) or a periodic symbol
/// `g(2^{-s})` with closed-form preimage lattices.
#[derive(Debug, Clone)]
pub enum CountingSymbol {
    Poly(DirichletPolynomial),
    Periodic(PeriodicSymbol),
}

impl From<DirichletPolynomial> for CountingSymbol {
    fn from(p: DirichletPolynomial) -> Self {
        CountingSymbol::Poly(p)
    }
}

impl From<PeriodicSymbol> for CountingSymbol {
    fn from(p: PeriodicSymbol) -> Self {
        CountingSymbol::Periodic(p)
    }
}

impl AnalyticSymbol for CountingSymbol {
    fn value(&self, s: Complex64) -> Complex64 {
        match self {
            CountingSymbol::Poly(p) => p.value(s),
            CountingSymbol::Periodic(p) => p.value(s),
        }
    }
    fn deriv(&self, s: Complex64) -> Complex64 {
        match self {
            CountingSymbol::Poly(p) => p.deriv(s),
            CountingSymbol::Periodic(p) => p.deriv(s),
        }
    }
    fn value_at_infinity(&self) -> Complex64 {
        match self {
            CountingSymbol::Poly(p) => AnalyticSymbol::value_at_infinity(p),
            CountingSymbol::Periodic(p) => p.value_at_infinity(),
        }
    }
    fn tail_sup(&self, sigma: f64) -> f64 {
        match self {
            CountingSymbol::Poly(p) => AnalyticSymbol::tail_sup(p, sigma),
            CountingSymbol::Periodic(p) => p.tail_sup(sigma),
        }
    }
    fn deriv_sup_halfplane(&self, sigma: f64) -> f64 {
        match self {
            CountingSymbol::Poly(p) => p.deriv_sup_halfplane(sigma),
            CountingSymbol::Periodic(p) => p.deriv_sup_halfplane(sigma),
        }
    }
    fn vertical_period(&self) -> Option<f64> {
        match self {
            CountingSymbol::Poly(p) => AnalyticSymbol::vertical_period(p),
            CountingSymbol::Periodic(p) => p.vertical_period(),
        }
    }
}

impl CountingSymbol {
    /// Twist by a character; a periodic symbol only feels `chi(2)`.
    pub fn twist(&self, chi: &Character) -> Self {
        match self {
            CountingSymbol::Poly(p) => CountingSymbol::Poly(p.twist(chi)),
            CountingSymbol::Periodic(p) => {
                CountingSymbol::Periodic(p.twist_by(chi.value_at_prime(2)))
            }
        }
    }

    /// Primes dividing the support frequencies; the polytorus sampler only
    /// needs phases there.
    pub fn support_primes(&self) -> Vec<u64> {
        match self {
            CountingSymbol::Poly(p) => {
                let mut out: Vec<u64> = Vec::new();
                for (n, _) in p.terms() {
                    if n >= 2 {
                        for (q, _) in primes::factorize(n) {
                            if !out.contains(&q) {
                                out.push(q);
                            }
                        }
                    }
                }
                out.sort_unstable();
                out
            }
            CountingSymbol::Periodic(_) => vec![2],
        }
    }

    /// Zero-free abscissa cap: the smallest `sigma` with
    /// `sup_{Re s >= sigma} |phi(s) - phi(+inf)| < |w - phi(+inf)| / 2`,
    /// so no solution of `phi = w` has `Re s >= sigma`.
    pub fn sigma_cap(&self, w: Complex64) -> Result<f64> {
        let gap = (w - self.value_at_infinity()).norm();
        if gap == 0.0 {
            return match self {
                CountingSymbol::Poly(_) => Err(Error::TargetAtInfinity),
                // the closed-form path excludes the center preimage, so it
                // needs no cap
                CountingSymbol::Periodic(_) => Ok(f64::INFINITY),
            };
        }
        let half = gap / 2.0;
        let lo = 1e-9;
        if self.tail_sup(lo) < half {
            return Ok(lo);
        }
        let mut lo = lo;
        let mut hi = 1.0;
        let mut guard = 0;
        while self.tail_sup(hi) >= half {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 80 {
                return Err(Error::InvalidInput(
                    "no zero-free half-plane found; tail bound does not decay".into(),
                ));
            }
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.tail_sup(mid) < half {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

// ---------------------------------------------------------------------------
// schedules and estimates
// ---------------------------------------------------------------------------

/// Discretization of the iterated limits: a geometric ladder of window
/// heights `T` and a decreasing ladder of abscissae `sigma`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LimitSchedule {
    pub t_values: Vec<f64>,
    pub sigma_values: Vec<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl LimitSchedule {
    pub fn new(
        t_values: Vec<f64>,
        sigma_values: Vec<f64>,
        rel_tol: f64,
        abs_tol: f64,
    ) -> Result<Self> {
        if t_values.is_empty() || sigma_values.is_empty() {
            return Err(Error::InvalidInput("empty limit schedule".into()));
        }
        if !t_values.windows(2).all(|w| w[0] < w[1]) || t_values[0] <= 0.0 {
            return Err(Error::InvalidInput(
                "T values must be positive and strictly increasing".into(),
            ));
        }
        if !sigma_values.windows(2).all(|w| w[0] > w[1]) || *sigma_values.last().unwrap() <= 0.0 {
            return Err(Error::InvalidInput(
                "sigma values must be strictly decreasing and positive".into(),
            ));
        }
        Ok(Self {
            t_values,
            sigma_values,
            rel_tol,
            abs_tol,
        })
    }

    /// `T = t0 * 2^k` for `k = 0..=t_doublings`, `sigma = sigma0 * 2^{-k}`
    /// for `k = 0..=sigma_halvings`.
    pub fn geometric(
        t0: f64,
        t_doublings: u32,
        sigma0: f64,
        sigma_halvings: u32,
        rel_tol: f64,
        abs_tol: f64,
    ) -> Result<Self> {
        let t_values = (0..=t_doublings)
            .map(|k| t0 * 2f64.powi(k as i32))
            .collect();
        let sigma_values = (0..=sigma_halvings)
            .map(|k| sigma0 * 2f64.powi(-(k as i32)))
            .collect();
        Self::new(t_values, sigma_values, rel_tol, abs_tol)
    }

    pub fn t_max(&self) -> f64 {
        *self.t_values.last().unwrap()
    }
}

impl Default for LimitSchedule {
    /// Tuned to fixtures with vertical period near `2 pi / ln 2`: the
    /// largest window is 200 periods tall.
    fn default() -> Self {
        Self::geometric(12.5 * PERIOD_BASE_2, 4, 0.5, 12, 1e-3, 1e-9).unwrap()
    }
}

/// A value of `M_{phi,a}(w, sigma, T)` or an extrapolated limit, with
/// convergence diagnostics. For `sigma`-limits the schedule entries are the
/// `sigma` ladder.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CountingEstimate {
    pub value: f64,
    pub a: f64,
    pub w_re: f64,
    pub w_im: f64,
    pub sigma: f64,
    pub t_schedule: Vec<f64>,
    pub per_t_values: Vec<f64>,
    pub converged: bool,
    pub diverged: bool,
    pub error_estimate: f64,
}

impl CountingEstimate {
    pub fn w(&self) -> Complex64 {
        Complex64::new(self.w_re, self.w_im)
    }
}

// ---------------------------------------------------------------------------
// finite-window counts
// ---------------------------------------------------------------------------

fn check_target(sym: &CountingSymbol, w: Complex64) -> Result<()> {
    if let CountingSymbol::Poly(_) = sym {
        if (w - sym.value_at_infinity()).norm() == 0.0 {
            return Err(Error::TargetAtInfinity);
        }
    }
    Ok(())
}

/// Nudge `sigma` upward (never past `sigma + 0.05`) until the vertical line
/// is certifiably clear of the zero set. The counting functions are
/// right-continuous in `sigma`, so the nudge converges to the intended
/// value; fixtures with isolated zero lines never actually move.
fn clear_sigma(sym: &CountingSymbol, w: Complex64, sigma: f64, t_lo: f64, t_hi: f64) -> f64 {
    let target = 0.5 * zeros::default_delta(w);
    let budget = 0.05;
    let mut offset = 0.0;
    while offset <= budget {
        if zeros::vertical_line_clear(sym, w, sigma + offset, t_lo, t_hi, target) {
            if offset > 0.0 {
                crate::diag(&format!("sigma line nudged by {offset:.3e}"));
            }
            return sigma + offset;
        }
        offset += budget / 64.0;
    }
    sigma + budget
}

/// Zeros of `phi - w` in the band `sigma < Re s < cap`, complete for every
/// window `t_lo < Im s < t_hi` (the scan rectangle is padded before the
/// safe-edge nudges so no window zero can be lost).
fn poly_band_zeros(
    sym: &CountingSymbol,
    w: Complex64,
    sigma: f64,
    cap: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<zeros::ZeroSet> {
    let pad = sym.vertical_period().unwrap_or(PERIOD_BASE_2) + 0.1;
    let s_lo = clear_sigma(sym, w, sigma, t_lo - pad, t_hi + pad);
    let rect = Rectangle::new(s_lo, cap.max(s_lo + 1e-6), t_lo - pad, t_hi)?;
    zeros::locate_zeros(sym, w, &rect, 1e-9)
}

/// The finite-window weighted count
/// `M_{phi,a}(w, sigma, T) = (pi/T) * sum (Re s)^a` over solutions with
/// `sigma < Re s` and `|Im s| < T`. The abscissa range is capped above by
/// the zero-free half-plane bound. `sigma = 0` is admissible: polynomial
/// symbols are entire, and the periodic path sums its lattice tail with an
/// integral estimate (erroring out when that tail diverges).
pub fn weighted_count_finite(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    t: f64,
) -> Result<f64> {
    if sigma < 0.0 || t <= 0.0 {
        return Err(Error::InvalidInput(
            "weighted_count_finite needs sigma >= 0 and T > 0".into(),
        ));
    }
    check_target(sym, w)?;
    Ok(PI / t * band_weighted_sum(sym, a, w, sigma, -t, t)?)
}

/// `sum (Re s)^a` over zeros with `sigma < Re s`, `t_lo < Im s < t_hi`.
fn band_weighted_sum(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<f64> {
    match sym {
        CountingSymbol::Poly(_) => {
            let cap = sym.sigma_cap(w)?;
            if cap <= sigma {
                return Ok(0.0);
            }
            let set = poly_band_zeros(sym, w, sigma, cap, t_lo, t_hi)?;
            Ok(set
                .zeros
                .iter()
                .filter(|z| t_lo < z.location_im && z.location_im < t_hi)
                .map(|z| z.multiplicity as f64 * z.location_re.powf(a))
                .sum())
        }
        CountingSymbol::Periodic(p) => periodic_band_sum(p, a, w, sigma, t_lo, t_hi),
    }
}

// ---------------------------------------------------------------------------
// periodic lattice sums
// ---------------------------------------------------------------------------

/// `x(y)` for the singular-inner preimage family at height `y`:
/// the abscissa of the lifted lattice line.
fn singular_abscissa(b: f64, y: f64) -> f64 {
    let num = (1.0 - b) * (1.0 - b) + y * y;
    let den = (1.0 + b) * (1.0 + b) + y * y;
    -(num / den).ln() / (2.0 * LN_2)
}

/// `int_{y0}^{Y} x(y)^a dy` plus the closed-form continuation beyond the
/// range where `x(y) = (2b/ln2) / y^2` holds to 1e-6; diverges (errors)
/// when `a <= 1/2` and the range is unbounded.
fn singular_tail_integral(b: f64, a: f64, y0: f64, y_stop: Option<f64>) -> Result<f64> {
    let y_far = match y_stop {
        Some(y) => y.max(y0),
        None => {
            if a <= 0.5 {
                return Err(Error::Divergent(format!(
                    "lattice tail with weight a = {a} <= 1/2 diverges"
                )));
            }
            (4.0e6 * b).sqrt().max(4.0 * y0)
        }
    };
    let numeric = if y_far > y0 {
        quad::adaptive(|y| singular_abscissa(b, y).powf(a), y0, y_far, 1e-14, 1e-10, 20_000).value
    } else {
        0.0
    };
    let analytic = if y_stop.is_none() {
        let c = 2.0 * b / LN_2;
        c.powf(a) * y_far.powf(1.0 - 2.0 * a) / (2.0 * a - 1.0)
    } else {
        0.0
    };
    Ok(numeric + analytic)
}

/// Closed-form lattice sum `sum mult * count_window * (Re s)^a` for a
/// periodic symbol over `sigma < Re s`, `t_lo < Im s < t_hi`. When the
/// preimage family is infinite (the band touches `Re s = 0`), the tail is
/// summed by an integral estimate at the average window density.
fn periodic_band_sum(
    p: &PeriodicSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<f64> {
    let height = t_hi - t_lo;
    let window_count = |base_im: f64| -> f64 {
        let k_lo = ((t_lo - base_im) / PERIOD_BASE_2).ceil();
        let k_hi = ((t_hi - base_im) / PERIOD_BASE_2).floor();
        (k_hi - k_lo + 1.0).max(0.0)
    };

    match &p.map {
        DiskMap::SingularInner => {
            let b = -w.norm().ln();
            if b <= 0.0 || w.norm() == 0.0 {
                return Ok(0.0);
            }
            let theta = w.arg();
            let im_of = |y: f64| {
                let z = Complex64::new(1.0 - b, y) / Complex64::new(-b - 1.0, y);
                PeriodicSymbol::base_point(z / p.rotation).im
            };
            let n_stop: i64 = 4000;
            let mut acc = 0.0f64;
            let mut truncated = false;
            for dir in [0i64, 1, -1] {
                // dir 0 handles n = 0 alone; dirs +-1 sweep outward
                let mut n = dir;
                loop {
                    let y = theta + TAU * n as f64;
                    let x = singular_abscissa(b, y);
                    if !x.is_finite() {
                        // the center preimage z = 0 (w = g(0)); no zero lifts
                    } else if x > sigma {
                        acc += window_count(im_of(y)) * x.powf(a);
                    } else if dir != 0 {
                        break; // |z| is monotone along each direction
                    }
                    if dir == 0 {
                        break;
                    }
                    n += dir;
                    if n.abs() > n_stop {
                        truncated = true;
                        break;
                    }
                }
            }
            if truncated {
                // remaining family: average window density x integral
                let y_start = TAU * (n_stop as f64 + 0.5);
                let y_stop = if sigma > 0.0 {
                    let q = 4f64.powf(sigma);
                    let y2 = ((1.0 + b) * (1.0 + b) - q * (1.0 - b) * (1.0 - b)) / (q - 1.0);
                    if y2 <= y_start * y_start {
                        return Ok(acc);
                    }
                    Some(y2.sqrt())
                } else {
                    None
                };
                let tail = singular_tail_integral(b, a, y_start, y_stop)?;
                acc += (height / PERIOD_BASE_2) * 2.0 * tail / TAU;
            }
            Ok(acc)
        }
        _ => {
            let pre = p.preimages_for_band(w, sigma, f64::INFINITY);
            let mut acc = 0.0;
            for (u, mult) in pre.inside {
                let base = PeriodicSymbol::base_point(u);
                acc += mult as f64 * window_count(base.im) * base.re.powf(a);
            }
            Ok(acc)
        }
    }
}

/// `sum mult * (Re s)^a` with exactly one lattice point per preimage: the
/// per-period density sum, whose `2 pi / period` multiple is the exact
/// `T`-limit of the mean count.
fn periodic_period_sum(p: &PeriodicSymbol, a: f64, w: Complex64, sigma: f64) -> Result<f64> {
    match &p.map {
        DiskMap::SingularInner => {
            let b = -w.norm().ln();
            if b <= 0.0 || w.norm() == 0.0 {
                return Ok(0.0);
            }
            let theta = w.arg();
            let n_stop: i64 = 4000;
            let mut acc = 0.0f64;
            let mut truncated = false;
            for dir in [0i64, 1, -1] {
                let mut n = dir;
                loop {
                    let y = theta + TAU * n as f64;
                    let x = singular_abscissa(b, y);
                    if !x.is_finite() {
                        // center preimage: excluded
                    } else if x > sigma {
                        acc += x.powf(a);
                    } else if dir != 0 {
                        break;
                    }
                    if dir == 0 {
                        break;
                    }
                    n += dir;
                    if n.abs() > n_stop {
                        truncated = true;
                        break;
                    }
                }
            }
            if truncated {
                let y_start = TAU * (n_stop as f64 + 0.5);
                let y_stop = if sigma > 0.0 {
                    let q = 4f64.powf(sigma);
                    let y2 = ((1.0 + b) * (1.0 + b) - q * (1.0 - b) * (1.0 - b)) / (q - 1.0);
                    if y2 <= y_start * y_start {
                        return Ok(acc);
                    }
                    Some(y2.sqrt())
                } else {
                    None
                };
                acc += 2.0 * singular_tail_integral(b, a, y_start, y_stop)? / TAU;
            }
            Ok(acc)
        }
        _ => {
            let pre = p.preimages_for_band(w, sigma, f64::INFINITY);
            Ok(pre
                .inside
                .iter()
                .map(|(u, mult)| {
                    *mult as f64 * PeriodicSymbol::base_point(*u).re.powf(a)
                })
                .sum())
        }
    }
}

// ---------------------------------------------------------------------------
// T- and sigma-limits
// ---------------------------------------------------------------------------

/// Exact `T -> infinity, sigma -> 0+` limit of the mean count for a
/// periodic symbol: `(2 pi / period) * sum mult * (Re s)^a` over the
/// per-period preimage lattice. Errors with [`Error::Divergent`] when the
/// lattice tail diverges (weight `a <= 1/2` against an infinite family).
pub fn periodic_exact_limit(p: &PeriodicSymbol, a: f64, w: Complex64) -> Result<f64> {
    Ok(TAU / PERIOD_BASE_2 * periodic_period_sum(p, a, w, 0.0)?)
}

/// The zeros of `phi - w` with `sigma < Re s < cap` and `t_lo < Im s < t_hi`
/// as an explicit list (argument-principle scan for polynomials, preimage
/// lattice for periodic symbols).
pub fn zero_list(
    sym: &CountingSymbol,
    w: Complex64,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<zeros::Zero>> {
    match sym {
        CountingSymbol::Poly(_) => {
            let cap = sym.sigma_cap(w)?;
            if cap <= sigma {
                return Ok(Vec::new());
            }
            let set = poly_band_zeros(sym, w, sigma, cap, t_lo, t_hi)?;
            Ok(set
                .zeros
                .into_iter()
                .filter(|z| t_lo < z.location_im && z.location_im < t_hi)
                .collect())
        }
        CountingSymbol::Periodic(p) => {
            // materialize through the closed form; bounded abscissa via cap
            let cap = match sym.sigma_cap(w) {
                Ok(c) if c.is_finite() => c,
                _ => 64.0,
            };
            let rect = Rectangle::new(sigma, cap.max(sigma + 1e-6), t_lo, t_hi)?;
            Ok(zeros::zeros_periodic_symbol(p, w, &rect)?.zeros)
        }
    }
}

/// Finite-window counts along the whole `T` schedule. Polynomial symbols
/// get one zero scan at the largest window, from which every smaller
/// window's count is a partial sum.
fn schedule_counts(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    schedule: &LimitSchedule,
) -> Result<Vec<f64>> {
    match sym {
        CountingSymbol::Poly(_) => {
            let cap = sym.sigma_cap(w)?;
            if cap <= sigma {
                return Ok(vec![0.0; schedule.t_values.len()]);
            }
            let t_max = schedule.t_max();
            let set = poly_band_zeros(sym, w, sigma, cap, -t_max, t_max)?;
            Ok(schedule
                .t_values
                .iter()
                .map(|&t| {
                    PI / t
                        * set
                            .zeros
                            .iter()
                            .filter(|z| z.location_im.abs() < t)
                            .map(|z| z.multiplicity as f64 * z.location_re.powf(a))
                            .sum::<f64>()
                })
                .collect())
        }
        CountingSymbol::Periodic(p) => schedule
            .t_values
            .iter()
            .map(|&t| Ok(PI / t * periodic_band_sum(p, a, w, sigma, -t, t)?))
            .collect(),
    }
}

/// `M_{phi,a}(w, sigma)`: the `T -> infinity` limit along the schedule,
/// with the Cauchy criterion on the last two entries. Periodic symbols
/// know their exact lattice density; it is returned as the value and the
/// schedule entries serve as the convergence record.
pub fn mean_count(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    schedule: &LimitSchedule,
) -> Result<CountingEstimate> {
    if sigma < 0.0 {
        return Err(Error::InvalidInput("mean_count needs sigma >= 0".into()));
    }
    check_target(sym, w)?;
    let per_t = schedule_counts(sym, a, w, sigma, schedule)?;
    let value = match sym {
        CountingSymbol::Poly(_) => *per_t.last().unwrap(),
        CountingSymbol::Periodic(p) => {
            TAU / PERIOD_BASE_2 * periodic_period_sum(p, a, w, sigma)?
        }
    };
    let last_step = if per_t.len() >= 2 {
        (per_t[per_t.len() - 1] - per_t[per_t.len() - 2]).abs()
    } else {
        0.0
    };
    let converged = matches!(sym, CountingSymbol::Periodic(_))
        || last_step <= schedule.abs_tol.max(schedule.rel_tol * value.abs());
    Ok(CountingEstimate {
        value: value.max(0.0),
        a,
        w_re: w.re,
        w_im: w.im,
        sigma,
        t_schedule: schedule.t_values.clone(),
        per_t_values: per_t,
        converged,
        diverged: false,
        error_estimate: last_step,
    })
}

/// `M_{phi,a}(w) = lim_{sigma -> 0+} M_{phi,a}(w, sigma)`, extrapolated
/// along the sigma schedule. The counts are non-decreasing as `sigma`
/// falls, so the sequence either settles (a geometric tail estimate is
/// added) or is flagged divergent when the increment ratios refuse to fall
/// below 1. Divergence is a reported outcome, not an error.
pub fn mean_count_limit(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    schedule: &LimitSchedule,
) -> Result<CountingEstimate> {
    check_target(sym, w)?;
    let mut values = Vec::with_capacity(schedule.sigma_values.len());
    for &sigma in &schedule.sigma_values {
        let est = mean_count(sym, a, w, sigma, schedule)?;
        values.push(est.value);
        // early exit: four consecutive stagnant increments (longer than any
        // plateau the dyadic ladder can produce while terms are still due)
        let k = values.len();
        if k >= 5 {
            let tol = schedule.abs_tol.max(schedule.rel_tol * values[k - 1].abs());
            if (1..=4).all(|j| (values[k - j] - values[k - j - 1]).abs() <= tol) {
                let error_estimate = (values[k - 1] - values[k - 2]).abs();
                return Ok(CountingEstimate {
                    value: values[k - 1],
                    a,
                    w_re: w.re,
                    w_im: w.im,
                    sigma,
                    t_schedule: schedule.sigma_values[..k].to_vec(),
                    per_t_values: values,
                    converged: true,
                    diverged: false,
                    error_estimate,
                });
            }
        }
    }
    let incs: Vec<f64> = values.windows(2).map(|v| v[1] - v[0]).collect();
    let k = values.len();
    let last = values[k - 1];
    let sigma_last = *schedule.sigma_values.last().unwrap();
    let tol = schedule.abs_tol.max(schedule.rel_tol * last.abs());

    // smooth the dyadic wobble of the lattice bands: compare the mean of
    // the last three increments against the mean of the three before them
    let (rho, smoothed_inc) = if incs.len() >= 6 {
        let m2: f64 = incs[incs.len() - 3..].iter().sum::<f64>() / 3.0;
        let m1: f64 = incs[incs.len() - 6..incs.len() - 3].iter().sum::<f64>() / 3.0;
        if m1.abs() > 1e-300 {
            (m2 / m1, m2)
        } else {
            (0.0, m2)
        }
    } else {
        let d_last = *incs.last().unwrap_or(&0.0);
        let d_prev = if incs.len() >= 2 {
            incs[incs.len() - 2]
        } else {
            0.0
        };
        if d_prev.abs() > 1e-300 {
            ((d_last / d_prev).powi(3), d_last)
        } else {
            (0.0, d_last)
        }
    };

    if smoothed_inc.abs() <= tol {
        return Ok(CountingEstimate {
            value: last,
            a,
            w_re: w.re,
            w_im: w.im,
            sigma: sigma_last,
            t_schedule: schedule.sigma_values.clone(),
            per_t_values: values,
            converged: true,
            diverged: false,
            error_estimate: smoothed_inc.abs(),
        });
    }
    // rho ~ r^3 for increments decaying geometrically with ratio r; growth
    // without decay (r near or above 1) is the divergence signature
    if rho >= 0.73 {
        return Ok(CountingEstimate {
            value: last,
            a,
            w_re: w.re,
            w_im: w.im,
            sigma: sigma_last,
            t_schedule: schedule.sigma_values.clone(),
            per_t_values: values,
            converged: false,
            diverged: true,
            error_estimate: f64::INFINITY,
        });
    }
    let r = rho.max(0.0).powf(1.0 / 3.0).clamp(0.0, 0.9);
    // smoothed last increment, then the geometric continuation
    let d_hat = smoothed_inc * 3.0 * r * r / (1.0 + r + r * r);
    let tail = d_hat * r / (1.0 - r);
    Ok(CountingEstimate {
        value: (last + tail).max(0.0),
        a,
        w_re: w.re,
        w_im: w.im,
        sigma: sigma_last,
        t_schedule: schedule.sigma_values.clone(),
        per_t_values: values,
        converged: true,
        diverged: false,
        error_estimate: tail.abs() + smoothed_inc.abs(),
    })
}

// ---------------------------------------------------------------------------
// Jessen function
// ---------------------------------------------------------------------------

/// How to evaluate the vertical mean of `log |phi - w|`.
#[derive(Debug, Clone, Copy)]
pub enum JessenMode {
    /// adaptive quadrature along the vertical line, singularities split off
    Vertical,
    /// ergodic average over sampled characters
    MonteCarlo { samples: u32, seed: u64 },
}

/// The Jessen function
/// `J(sigma) = lim_T (1/2T) int_{-T}^{T} log |phi(sigma+it) - w| dt`.
///
/// For symbols with an exact vertical period the mean over one period *is*
/// the limit, and near-line zeros are handled by subtracting their
/// logarithmic singularity in closed form. Without a period, the window
/// `[-T, T]` is integrated directly (O(1/T) truncation). A zero sitting on
/// the line within 1e-12 nudges the line by `sigma * 1e-9`.
pub fn jessen(
    sym: &CountingSymbol,
    w: Complex64,
    sigma: f64,
    t_window: f64,
    mode: JessenMode,
) -> Result<f64> {
    if sigma <= 0.0 {
        return Err(Error::InvalidInput("jessen needs sigma > 0".into()));
    }
    match mode {
        JessenMode::MonteCarlo { samples, seed } => {
            let primes_support = sym.support_primes();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut acc = 0.0;
            for _ in 0..samples.max(1) {
                let chi = Character::random(&primes_support, &mut rng);
                let v = sym.twist(&chi).value(Complex64::new(sigma, 0.0));
                acc += (v - w).norm().max(1e-300).ln();
            }
            Ok(acc / samples.max(1) as f64)
        }
        JessenMode::Vertical => jessen_vertical(sym, w, sigma, t_window),
    }
}

fn jessen_vertical(sym: &CountingSymbol, w: Complex64, sigma: f64, t_window: f64) -> Result<f64> {
    let mut sigma = sigma;
    let (t_lo, t_hi, norm) = match sym.vertical_period() {
        Some(p) => (0.0, p, p),
        None => (-t_window, t_window, 2.0 * t_window),
    };

    let half_band = (0.5 * sigma).min(0.5);
    let near = near_line_zeros(sym, w, sigma, half_band, t_lo, t_hi)?;

    if near.iter().any(|z| (z.location_re - sigma).abs() < 1e-12) {
        crate::diag(&format!(
            "jessen: zero on the integration line at sigma = {sigma}; nudging"
        ));
        sigma += sigma * 1e-9;
    }

    let subtract: Vec<(f64, f64, f64)> = near
        .iter()
        .map(|z| (z.location_im, z.location_re - sigma, z.multiplicity as f64))
        .collect();

    let smooth = |t: f64| {
        let s = Complex64::new(sigma, t);
        let modulus = (sym.value(s) - w).norm();
        let mut v = if modulus > 1e-280 {
            modulus.ln()
        } else {
            // numerically on a zero: the regular factor is |phi'|
            sym.deriv(s).norm().max(1e-280).ln()
        };
        for &(tau, d, m) in &subtract {
            let rho2 = (t - tau) * (t - tau) + d * d;
            if rho2 > 1e-280 {
                v -= 0.5 * m * rho2.ln();
            }
        }
        v
    };

    let mut splits = vec![t_lo];
    for &(tau, _, _) in &subtract {
        if t_lo < tau && tau < t_hi {
            splits.push(tau);
        }
    }
    splits.push(t_hi);
    splits.sort_by(f64::total_cmp);
    splits.dedup();

    let q = quad::adaptive_split(smooth, &splits, 1e-10, 1e-10, 4000);
    let mut total = q.value;
    for &(tau, d, m) in &subtract {
        total += 0.5 * m * (log_primitive(t_hi - tau, d) - log_primitive(t_lo - tau, d));
    }
    Ok(total / norm)
}

/// Antiderivative of `ln(u^2 + d^2)`.
fn log_primitive(u: f64, d: f64) -> f64 {
    let d = d.abs();
    if d < 1e-300 {
        if u == 0.0 {
            return 0.0;
        }
        return u * (u * u).ln() - 2.0 * u;
    }
    u * (u * u + d * d).ln() - 2.0 * u + 2.0 * d * (u / d).atan()
}

/// Zeros whose logarithmic dip reaches the integration line: those with
/// `|Re s - sigma|` below the band half-width, over the window plus a pad.
fn near_line_zeros(
    sym: &CountingSymbol,
    w: Complex64,
    sigma: f64,
    half_band: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<zeros::Zero>> {
    let lo = (sigma - half_band).max(sigma * 0.25).max(1e-9);
    let hi = sigma + half_band;
    let pad = 1.0;
    match sym {
        CountingSymbol::Periodic(p) => {
            let rect = Rectangle::new(lo, hi, t_lo - pad, t_hi + pad)?;
            Ok(zeros::zeros_periodic_symbol(p, w, &rect)?.zeros)
        }
        CountingSymbol::Poly(_) => {
            let cap = sym.sigma_cap(w)?;
            // widen the band until both vertical edges are clear of the
            // zero set (enlarging only adds harmless subtraction terms);
            // past the cap every line is clear by construction
            let target = 0.25 * zeros::default_delta(w);
            let mut hi = hi;
            if hi >= cap - 0.02 {
                hi = cap + 0.05;
            } else {
                let mut tries = 0;
                while !zeros::vertical_line_clear(sym, w, hi, t_lo - pad, t_hi + pad, target) {
                    hi += 0.013;
                    tries += 1;
                    if hi >= cap - 0.02 || tries > 40 {
                        hi = cap + 0.05;
                        break;
                    }
                }
            }
            let mut lo = lo;
            let mut tries = 0;
            while !zeros::vertical_line_clear(sym, w, lo, t_lo - pad, t_hi + pad, target) {
                lo = (lo - 0.013).max(lo * 0.5);
                tries += 1;
                if tries > 40 {
                    break;
                }
            }
            if hi <= lo {
                return Ok(Vec::new());
            }
            let rect = Rectangle::new(lo, hi, t_lo - pad, t_hi + pad)?;
            Ok(zeros::locate_zeros(sym, w, &rect, 1e-10)?.zeros)
        }
    }
}

/// Estimate of `-J'(sigma+)` by one-sided differences with step-halving
/// Richardson extrapolation; `stable = false` records persistent
/// disagreement (a kink inside the step that would not shrink away).
#[derive(Debug, Clone, Copy)]
pub struct JessenDerivative {
    pub value: f64,
    pub step: f64,
    pub stable: bool,
}

/// The unweighted counting function recovered from the Jessen function:
/// `M_{phi,0}(w, sigma) = -J'(sigma+)`.
pub fn count_from_jessen(
    sym: &CountingSymbol,
    w: Complex64,
    sigma: f64,
    h: f64,
) -> Result<JessenDerivative> {
    if sigma <= 0.0 || h <= 0.0 {
        return Err(Error::InvalidInput(
            "count_from_jessen needs sigma > 0 and h > 0".into(),
        ));
    }
    let t_window = 200.0 * PERIOD_BASE_2;
    let j0 = jessen(sym, w, sigma, t_window, JessenMode::Vertical)?;
    let mut h = h;
    let mut last = None;
    for _ in 0..5 {
        let j1 = jessen(sym, w, sigma + h, t_window, JessenMode::Vertical)?;
        let j_half = jessen(sym, w, sigma + 0.5 * h, t_window, JessenMode::Vertical)?;
        let d1 = (j0 - j1) / h;
        let d2 = (j0 - j_half) / (0.5 * h);
        let value = 2.0 * d2 - d1;
        if (d2 - d1).abs() <= 1e-5 * d2.abs().max(1.0) {
            return Ok(JessenDerivative {
                value,
                step: h,
                stable: true,
            });
        }
        last = Some(JessenDerivative {
            value,
            step: h,
            stable: false,
        });
        h *= 0.25;
    }
    crate::diag("count_from_jessen: persistent step disagreement (kink nearby)");
    Ok(last.unwrap())
}

// ---------------------------------------------------------------------------
// the two integral identities
// ---------------------------------------------------------------------------

/// Two-sided check record for an identity between counting quantities.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

impl IdentityCheck {
    /// `scale` is the magnitude of the terms the two sides are built from,
    /// so near-cancelling identities still report a meaningful relative
    /// residual.
    fn of(lhs: f64, rhs: f64, scale: f64) -> Self {
        let abs = (lhs - rhs).abs();
        Self {
            lhs,
            rhs,
            abs_residual: abs,
            rel_residual: abs / lhs.abs().max(rhs.abs()).max(scale).max(1e-12),
        }
    }
}

/// Distinct abscissae of the zero set in `(sigma, cap)`: the jump points of
/// `t -> M_{phi,0}(w, t)`.
fn abscissa_jumps(sym: &CountingSymbol, w: Complex64, sigma: f64, cap: f64) -> Result<Vec<f64>> {
    let set: Vec<zeros::Zero> = match sym {
        CountingSymbol::Periodic(p) => {
            let rect = Rectangle::new(sigma, cap, -0.5 * PERIOD_BASE_2, 0.5 * PERIOD_BASE_2)?;
            zeros::zeros_periodic_symbol(p, w, &rect)?.zeros
        }
        CountingSymbol::Poly(_) => {
            // aperiodic zero sets scatter their abscissae; a taller hint
            // window catches more of the distinct values
            let window = 6.0 * PERIOD_BASE_2;
            // nudge the scan band off any zero line sitting exactly on it
            let target = 0.25 * zeros::default_delta(w);
            let mut lo = sigma;
            let mut tries = 0;
            while !zeros::vertical_line_clear(sym, w, lo, -window, window, target) {
                lo = (lo - 0.013).max(lo * 0.5);
                tries += 1;
                if tries > 40 {
                    break;
                }
            }
            let rect = Rectangle::new(lo, cap + 0.05, -window, window)?;
            zeros::locate_zeros(sym, w, &rect, 1e-9)?.zeros
        }
    };
    let mut res: Vec<f64> = Vec::new();
    for z in set {
        if z.location_re > sigma
            && z.location_re < cap
            && !res.iter().any(|&r| (r - z.location_re).abs() < 1e-7)
        {
            res.push(z.location_re);
        }
    }
    res.sort_by(f64::total_cmp);
    Ok(res)
}

/// Residual of the weight identity
/// `M_{phi,a}(w,sigma) = M_{phi,0}(w,sigma) sigma^a
///  + a int_sigma^inf t^{a-1} M_{phi,0}(w,t) dt`.
/// The integrand is piecewise constant; the integral splits exactly at the
/// jump abscissae and each piece integrates `t^{a-1}` in closed form.
pub fn verify_weight_identity(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    schedule: &LimitSchedule,
) -> Result<IdentityCheck> {
    if sigma <= 0.0 {
        return Err(Error::InvalidInput("identity check needs sigma > 0".into()));
    }
    if (w - sym.value_at_infinity()).norm() == 0.0 {
        return Err(Error::TargetAtInfinity);
    }
    let lhs = mean_count(sym, a, w, sigma, schedule)?.value;
    let m0_sigma = mean_count(sym, 0.0, w, sigma, schedule)?.value;
    let cap = sym.sigma_cap(w)?;
    let mut rhs = m0_sigma * sigma.powf(a);
    if a != 0.0 && cap > sigma {
        let mut cuts = vec![sigma];
        cuts.extend(abscissa_jumps(sym, w, sigma, cap)?);
        cuts.push(cap);
        let mut integral = 0.0;
        for pair in cuts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            if hi - lo < 1e-12 {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let m0 = mean_count(sym, 0.0, w, mid, schedule)?.value;
            if m0 == 0.0 {
                continue;
            }
            let piece = if a.abs() > 1e-14 {
                (hi.powf(a) - lo.powf(a)) / a
            } else {
                (hi / lo).ln()
            };
            integral += m0 * piece;
        }
        rhs += a * integral;
    }
    let scale = lhs.abs().max(m0_sigma * sigma.powf(a));
    Ok(IdentityCheck::of(lhs, rhs, scale))
}

/// Residual of the Jessen-function identity
/// `M_{phi,a}(w,sigma) - M_{phi,0}(w,sigma) sigma^a
///  = a sigma^{a-1} J(sigma) - a sigma_inf^{a-1} log|phi(+inf) - w|
///    - a(1-a) int_sigma^{sigma_inf} t^{a-2} J(t) dt`,
/// with `sigma_inf` the zero-free cap, beyond which `J` is exactly the
/// constant `log|phi(+inf) - w|`.
pub fn verify_jessen_identity(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    sigma: f64,
    schedule: &LimitSchedule,
) -> Result<IdentityCheck> {
    if sigma <= 0.0 {
        return Err(Error::InvalidInput("identity check needs sigma > 0".into()));
    }
    if (w - sym.value_at_infinity()).norm() == 0.0 {
        return Err(Error::TargetAtInfinity);
    }
    let t_window = 200.0 * PERIOD_BASE_2;
    let lhs_a = mean_count(sym, a, w, sigma, schedule)?.value;
    let m0 = mean_count(sym, 0.0, w, sigma, schedule)?.value;
    let lhs = lhs_a - m0 * sigma.powf(a);

    let cap = sym.sigma_cap(w)?.max(sigma + 1e-6);
    let log_gap = (sym.value_at_infinity() - w).norm().ln();
    let j_sigma = jessen(sym, w, sigma, t_window, JessenMode::Vertical)?;
    let mut rhs = a * sigma.powf(a - 1.0) * j_sigma - a * cap.powf(a - 1.0) * log_gap;
    if a != 0.0 && (1.0 - a).abs() > 1e-14 {
        let mut cuts = vec![sigma];
        cuts.extend(abscissa_jumps(sym, w, sigma, cap)?);
        cuts.push(cap);
        let q = quad::adaptive_split(
            |t| {
                let j = jessen(sym, w, t, t_window, JessenMode::Vertical).unwrap_or(f64::NAN);
                t.powf(a - 2.0) * j
            },
            &cuts,
            1e-9,
            1e-9,
            600,
        );
        rhs -= a * (1.0 - a) * q.value;
    }
    let scale = (a * sigma.powf(a - 1.0) * j_sigma).abs() + (a * cap.powf(a - 1.0) * log_gap).abs();
    Ok(IdentityCheck::of(lhs, rhs, scale))
}

// ---------------------------------------------------------------------------
// polytorus averages and the direct T-limit
// ---------------------------------------------------------------------------

/// Monte Carlo estimate of the polytorus representation
/// `M_{phi,a}(w) = int M_{phi_chi, a}(w, 0, 1) dm(chi)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PolytorusAverage {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub resampled: u64,
}

fn splitmix(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sample characters uniformly on the primes dividing the support and
/// average the unit-window count `M_{phi_chi,a}(w, 0, 1)`. Localization
/// failures are resampled and counted; more than 1% of the budget fails
/// the run. Deterministic for a fixed seed, independent of thread count.
pub fn polytorus_average(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    n_samples: u64,
    seed: u64,
) -> Result<PolytorusAverage> {
    check_target(sym, w)?;
    if n_samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let primes_support = sym.support_primes();
    let results: Vec<Result<(f64, u64)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut resamples = 0u64;
            loop {
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed, i + resamples * 0x5bd1));
                let chi = Character::random(&primes_support, &mut rng);
                match weighted_count_finite(&sym.twist(&chi), a, w, 0.0, 1.0) {
                    Ok(v) => return Ok((v, resamples)),
                    Err(Error::Divergent(msg)) => return Err(Error::Divergent(msg)),
                    Err(_) => {
                        resamples += 1;
                        if resamples > 8 {
                            return Err(Error::Inconclusive(
                                "sample localization failed repeatedly".into(),
                            ));
                        }
                    }
                }
            }
        })
        .collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut resampled = 0u64;
    for r in results {
        let (v, re) = r?;
        sum += v;
        sum_sq += v * v;
        resampled += re;
    }
    if resampled * 100 > n_samples {
        return Err(Error::Inconclusive(format!(
            "{resampled} resamples out of {n_samples} budget"
        )));
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(PolytorusAverage {
        estimate: mean,
        stderr: (var / n).sqrt(),
        samples: n_samples,
        resampled,
    })
}

/// For `a >= 1` the `T`-limit may be taken directly at `sigma = 0` for
/// almost every character:
/// `lim_T (pi/T) sum_{Re s > 0, |Im s| < T} (Re s)^a` over the zeros of the
/// twisted symbol, with the same convergence contract as [`mean_count`].
pub fn direct_t_limit(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    chi: &Character,
    schedule: &LimitSchedule,
) -> Result<CountingEstimate> {
    if a < 1.0 {
        return Err(Error::InvalidInput(
            "the direct T-limit at sigma = 0 needs a >= 1".into(),
        ));
    }
    check_target(sym, w)?;
    let twisted = sym.twist(chi);
    let per_t = schedule_counts(&twisted, a, w, 0.0, schedule)?;
    let value = *per_t.last().unwrap();
    let last_step = if per_t.len() >= 2 {
        (per_t[per_t.len() - 1] - per_t[per_t.len() - 2]).abs()
    } else {
        0.0
    };
    Ok(CountingEstimate {
        value: value.max(0.0),
        a,
        w_re: w.re,
        w_im: w.im,
        sigma: 0.0,
        t_schedule: schedule.t_values.clone(),
        per_t_values: per_t,
        converged: last_step <= schedule.abs_tol.max(schedule.rel_tol * value.abs()),
        diverged: false,
        error_estimate: last_step,
    })
}

// ---------------------------------------------------------------------------
// submean-value diagnostic
// ---------------------------------------------------------------------------

/// Two sides of the submean comparison over a disk.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SubmeanCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Compare `M_{phi,a}(w)` against the area average of `M_{phi,a}` over
/// `D(w, r)` (tensor grid in `(rho^2, angle)` with `n_grid^2` nodes).
/// Any divergent node makes the check inconclusive.
pub fn submean_check(
    sym: &CountingSymbol,
    a: f64,
    w: Complex64,
    r: f64,
    n_grid: usize,
    schedule: &LimitSchedule,
) -> Result<SubmeanCheck> {
    if a <= 0.0 {
        return Err(Error::InvalidInput("submean check needs a > 0".into()));
    }
    if w.re - r <= 0.5 {
        return Err(Error::InvalidInput(
            "disk must stay inside the half-plane Re w > 1/2".into(),
        ));
    }
    if (sym.value_at_infinity() - w).norm() <= r {
        return Err(Error::InvalidInput(
            "disk must not contain phi(+infinity)".into(),
        ));
    }
    let lhs_est = mean_count_limit(sym, a, w, schedule)?;
    if lhs_est.diverged {
        return Err(Error::Inconclusive("center value diverged".into()));
    }
    let lhs = lhs_est.value;

    let n = n_grid.max(2);
    let nodes: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let i = k / n;
            let j = k % n;
            let rho = r * ((i as f64 + 0.5) / n as f64).sqrt();
            let angle = TAU * (j as f64 + 0.5) / n as f64;
            w + Complex64::from_polar(rho, angle)
        })
        .collect();

    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&z| -> Result<f64> {
            let est = mean_count_limit(sym, a, z, schedule)?;
            if est.diverged {
                return Err(Error::Inconclusive("divergent node in the disk".into()));
            }
            Ok(est.value)
        })
        .collect::<Result<_>>()?;

    // midpoint rule in (rho^2, angle): equal weights against dA / (pi r^2)
    let rhs = values.iter().sum::<f64>() / values.len() as f64;
    let ratio = if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    };
    Ok(SubmeanCheck { lhs, rhs, ratio })
}
