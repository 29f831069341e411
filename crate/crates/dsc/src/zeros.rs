//! Certified localization of the solutions of `phi(s) = w` in rectangles.
//!
//! The workhorse is the argument principle: the boundary integral
//! `(1/2*pi*i) * integral phi'/(phi - w) ds` over a rectangle whose boundary
//! stays at distance `delta` from the zero set is an integer, and adaptive
//! refinement of the quadrature until the raw value sits within 0.25 of an
//! integer turns that integer into a certificate. Recursive bisection plus
//! Newton refinement then pins the individual zeros.
//!
//! Periodic symbols `phi(s) = g(2^{-s})` with an explicitly invertible disk
//! map `g` get a closed-form path: each disk preimage `z` of `w` lifts to
//! the vertical lattice `s = -log_2(z) + i * (2*pi/ln 2) * k`.

use std::f64::consts::{LN_2, TAU};
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quad;
use crate::series::DirichletPolynomial;
use crate::{Error, Result};

/// Vertical period of every `g(2^{-s})` symbol.
pub const PERIOD_BASE_2: f64 = TAU / LN_2;

/// Axis-aligned closed rectangle `[sigma_min, sigma_max] x [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rectangle {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if !(sigma_min < sigma_max && t_min < t_max) {
            return Err(Error::InvalidInput(format!(
                "degenerate rectangle [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]"
            )));
        }
        Ok(Self {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.sigma_min + self.sigma_max),
            0.5 * (self.t_min + self.t_max),
        )
    }

    pub fn contains_strict(&self, s: Complex64) -> bool {
        self.sigma_min < s.re && s.re < self.sigma_max && self.t_min < s.im && s.im < self.t_max
    }
}

/// Interface the zero scan needs from a symbol: pointwise values and
/// derivatives plus the coarse sup-bounds that drive certification.
pub trait AnalyticSymbol: Sync {
    fn value(&self, s: Complex64) -> Complex64;
    fn deriv(&self, s: Complex64) -> Complex64;
    /// `phi(+infinity)`.
    fn value_at_infinity(&self) -> Complex64;
    /// Upper bound for `|phi(s) - phi(+inf)|` on `Re s >= sigma`.
    fn tail_sup(&self, sigma: f64) -> f64;
    /// Upper bound for `|phi'(s)|` on `Re s >= sigma`.
    fn deriv_sup_halfplane(&self, sigma: f64) -> f64;
    /// Exact vertical period, when the symbol has one.
    fn vertical_period(&self) -> Option<f64>;
}

impl AnalyticSymbol for DirichletPolynomial {
    fn value(&self, s: Complex64) -> Complex64 {
        self.eval(s)
    }
    fn deriv(&self, s: Complex64) -> Complex64 {
        self.eval_derivative(s)
    }
    fn value_at_infinity(&self) -> Complex64 {
        DirichletPolynomial::value_at_infinity(self)
    }
    fn tail_sup(&self, sigma: f64) -> f64 {
        DirichletPolynomial::tail_sup(self, sigma)
    }
    fn deriv_sup_halfplane(&self, sigma: f64) -> f64 {
        self.derivative_sup(sigma)
    }
    fn vertical_period(&self) -> Option<f64> {
        DirichletPolynomial::vertical_period(self)
    }
}

// ---------------------------------------------------------------------------
// periodic symbols phi(s) = g(rotation * 2^{-s})
// ---------------------------------------------------------------------------

/// Explicitly invertible self-maps `g` of the unit disk (up to scale), the
/// disk side of periodic symbols `phi(s) = g(2^{-s})`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskMap {
    /// `g(z) = z`
    Identity,
    /// `g(z) = c0 + c1 z`, image the disk `D(c0, |c1|)`
    Affine { c0: Complex64, c1: Complex64 },
    /// `g(z) = ((conj(nu) - 1) z + nu) / (1 - z)`, mapping the disk onto the
    /// half-plane `Re w > 1/2`; requires `Re nu > 1/2`
    HalfPlaneMobius { nu: Complex64 },
    /// the atomic singular inner function `g(z) = exp(-(1+z)/(1-z))`
    SingularInner,
}

/// Disk preimages of a target, with exclusion diagnostics.
#[derive(Debug, Clone, Default)]
pub struct Preimages {
    /// solutions of `g(z) = w` with `r_lo < |z| < r_hi`, with multiplicity
    pub inside: Vec<(Complex64, u32)>,
    /// `w = g(0)`: the center preimage is excluded from lattices
    pub at_center: bool,
    /// preimages pinched onto `|z| = 1` (excluded)
    pub on_boundary: usize,
    /// false when an infinite family was truncated by the enumeration cap
    pub complete: bool,
}

const PREIMAGE_CAP: usize = 200_000;

impl DiskMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            DiskMap::Identity => z,
            DiskMap::Affine { c0, c1 } => c0 + c1 * z,
            DiskMap::HalfPlaneMobius { nu } => ((nu.conj() - 1.0) * z + nu) / (1.0 - z),
            DiskMap::SingularInner => (-(1.0 + z) / (1.0 - z)).exp(),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            DiskMap::Identity => Complex64::new(1.0, 0.0),
            DiskMap::Affine { c1, .. } => *c1,
            DiskMap::HalfPlaneMobius { nu } => {
                Complex64::new(2.0 * nu.re - 1.0, 0.0) / ((1.0 - z) * (1.0 - z))
            }
            DiskMap::SingularInner => {
                let one_minus = 1.0 - z;
                self.eval(z) * (-2.0) / (one_minus * one_minus)
            }
        }
    }

    /// `g(0) = phi(+infinity)` of the induced symbol.
    pub fn value_at_center(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }

    /// All solutions of `g(z) = w` in the open annulus `r_lo < |z| < r_hi`.
    pub fn preimages(&self, w: Complex64, r_lo: f64, r_hi: f64) -> Preimages {
        let r_hi = r_hi.min(1.0);
        let mut out = Preimages {
            complete: true,
            ..Preimages::default()
        };
        let push = |z: Complex64, out: &mut Preimages| {
            let r = z.norm();
            if r <= 1e-300 {
                out.at_center = true;
            } else if r >= 1.0 - 1e-14 {
                out.on_boundary += 1;
            } else if r_lo < r && r < r_hi {
                out.inside.push((z, 1));
            }
        };
        match self {
            DiskMap::Identity => push(w, &mut out),
            DiskMap::Affine { c0, c1 } => {
                if c1.norm() > 0.0 {
                    push((w - c0) / c1, &mut out);
                }
            }
            DiskMap::HalfPlaneMobius { nu } => {
                let denom = w + nu.conj() - 1.0;
                if denom.norm() > 1e-300 {
                    push((w - nu) / denom, &mut out);
                }
            }
            DiskMap::SingularInner => {
                let b = -w.norm().ln();
                if b <= 0.0 || w.norm() == 0.0 {
                    return out; // outside the image (punctured disk)
                }
                let theta = w.arg();
                // z_n = (1 - b + i y) / (i y - b - 1), y = theta + 2 pi n;
                // |z_n| increases with |y|, so sweep outward from n = 0
                let z_of = |n: i64| {
                    let y = theta + TAU * n as f64;
                    Complex64::new(1.0 - b, y) / Complex64::new(-b - 1.0, y)
                };
                push(z_of(0), &mut out);
                for dir in [1i64, -1] {
                    let mut n = dir;
                    loop {
                        let z = z_of(n);
                        if z.norm() >= r_hi {
                            break;
                        }
                        push(z, &mut out);
                        if out.inside.len() > PREIMAGE_CAP {
                            out.complete = false;
                            return out;
                        }
                        n += dir;
                    }
                }
            }
        }
        out
    }

    /// Upper bound for `sup_{|z| <= r} |g(z) - g(0)|`.
    pub fn center_tail_sup(&self, r: f64) -> f64 {
        match self {
            DiskMap::Identity => r,
            DiskMap::Affine { c1, .. } => c1.norm() * r,
            DiskMap::HalfPlaneMobius { nu } => {
                // g(z) - g(0) = (2 Re nu - 1) z / (1 - z)
                (2.0 * nu.re - 1.0).abs() * r / (1.0 - r).max(1e-12)
            }
            DiskMap::SingularInner => r * self.deriv_sup(r),
        }
    }

    /// Upper bound for `sup_{|z| <= r} |g'(z)|`.
    pub fn deriv_sup(&self, r: f64) -> f64 {
        match self {
            DiskMap::Identity => 1.0,
            DiskMap::Affine { c1, .. } => c1.norm(),
            DiskMap::HalfPlaneMobius { nu } => {
                (2.0 * nu.re - 1.0).abs() / ((1.0 - r) * (1.0 - r)).max(1e-24)
            }
            DiskMap::SingularInner => {
                let near = (-(1.0 - r) / (1.0 + r)).exp();
                2.0 * near / ((1.0 - r) * (1.0 - r)).max(1e-24)
            }
        }
    }

    /// Taylor coefficients of `g` at the origin, through `z^order`.
    pub fn taylor(&self, order: usize) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            DiskMap::Identity => {
                let mut v = vec![zero; order + 1];
                if order >= 1 {
                    v[1] = one;
                }
                v
            }
            DiskMap::Affine { c0, c1 } => {
                let mut v = vec![zero; order + 1];
                v[0] = *c0;
                if order >= 1 {
                    v[1] = *c1;
                }
                v
            }
            DiskMap::HalfPlaneMobius { nu } => {
                // nu + (2 Re nu - 1) (z + z^2 + ...)
                let c = Complex64::new(2.0 * nu.re - 1.0, 0.0);
                let mut v = vec![c; order + 1];
                v[0] = *nu;
                v
            }
            DiskMap::SingularInner => {
                // exp(-1) * exp(-2 (z + z^2 + ...))
                let mut h = vec![Complex64::new(-2.0, 0.0); order + 1];
                h[0] = zero;
                let mut e = exp_power_series(&h);
                let scale = (-1.0f64).exp();
                for c in &mut e {
                    *c *= scale;
                }
                e
            }
        }
    }
}

/// Exponential of a power series with vanishing constant term, via the
/// `P' = h' P` recurrence. Sparse inputs cost `O(K * support)`.
pub fn exp_power_series(h: &[Complex64]) -> Vec<Complex64> {
    assert!(h[0].norm() == 0.0, "constant term must vanish");
    let n = h.len();
    let support: Vec<(usize, Complex64)> = h
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(j, &c)| (j, c * j as f64))
        .collect();
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    p[0] = Complex64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(j, hj) in &support {
            if j > k {
                break;
            }
            acc += hj * p[k - j];
        }
        p[k] = acc / k as f64;
    }
    p
}

/// A vertically periodic symbol `phi(s) = g(rotation * 2^{-s})` with
/// unimodular `rotation`; twisting by a character multiplies the rotation
/// by `chi(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSymbol {
    pub map: DiskMap,
    pub rotation: Complex64,
}

impl PeriodicSymbol {
    pub fn new(map: DiskMap) -> Self {
        Self {
            map,
            rotation: Complex64::new(1.0, 0.0),
        }
    }

    pub fn rotated(map: DiskMap, rotation: Complex64) -> Self {
        Self { map, rotation }
    }

    pub fn twist_by(&self, chi_2: Complex64) -> Self {
        Self {
            map: self.map.clone(),
            rotation: self.rotation * chi_2,
        }
    }

    fn disk_coord(&self, s: Complex64) -> Complex64 {
        self.rotation * (-s * LN_2).exp()
    }

    /// Disk preimages of `w` restricted to the annulus determined by the
    /// abscissa range: `sigma_min < Re s < sigma_max` corresponds to
    /// `2^{-sigma_max} < |z| < 2^{-sigma_min}`.
    pub fn preimages_for_band(&self, w: Complex64, sigma_min: f64, sigma_max: f64) -> Preimages {
        let r_lo = if sigma_max.is_finite() {
            2f64.powf(-sigma_max)
        } else {
            0.0
        };
        let r_hi = 2f64.powf(-sigma_min).min(1.0);
        let mut pre = self.map.preimages(w, r_lo, r_hi);
        // undo the rotation: g(rot * u) = w  <=>  rot * u = z
        for (z, _) in &mut pre.inside {
            *z /= self.rotation;
        }
        pre
    }

    /// Base lattice point of a disk preimage: `s0 = -log_2(u)` (principal).
    pub fn base_point(u: Complex64) -> Complex64 {
        Complex64::new(-u.norm().ln() / LN_2, -u.arg() / LN_2)
    }
}

impl AnalyticSymbol for PeriodicSymbol {
    fn value(&self, s: Complex64) -> Complex64 {
        self.map.eval(self.disk_coord(s))
    }
    fn deriv(&self, s: Complex64) -> Complex64 {
        let z = self.disk_coord(s);
        self.map.deriv(z) * z * (-LN_2)
    }
    fn value_at_infinity(&self) -> Complex64 {
        self.map.value_at_center()
    }
    fn tail_sup(&self, sigma: f64) -> f64 {
        self.map.center_tail_sup(2f64.powf(-sigma).min(1.0))
    }
    fn deriv_sup_halfplane(&self, sigma: f64) -> f64 {
        let r = 2f64.powf(-sigma).min(1.0 - 1e-9);
        self.map.deriv_sup(r) * r * LN_2
    }
    fn vertical_period(&self) -> Option<f64> {
        Some(PERIOD_BASE_2)
    }
}

// ---------------------------------------------------------------------------
// certified edges
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct EdgeCert {
    passed: bool,
    lower_bound: f64,
}

/// Certified lower bound for `min |f|` along a segment, given a Lipschitz
/// bound for `f`. Branch-and-bound on `(|f(a)|+|f(b)|)/2 - L*h/2`.
fn certify_edge_min(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    lip: f64,
    target: f64,
    mut budget: usize,
) -> EdgeCert {
    let mut stack = vec![(a, f(a).norm(), b, f(b).norm())];
    let mut lower = f64::INFINITY;
    while let Some((x1, f1, x2, f2)) = stack.pop() {
        if f1 < target || f2 < target {
            return EdgeCert {
                passed: false,
                lower_bound: f1.min(f2),
            };
        }
        let h = x2 - x1;
        let cert = 0.5 * (f1 + f2) - 0.5 * lip * h;
        if cert >= target {
            lower = lower.min(cert);
            continue;
        }
        if budget == 0 || h < 1e-13 * (1.0 + x1.abs()) {
            return EdgeCert {
                passed: false,
                lower_bound: cert,
            };
        }
        budget -= 1;
        let mid = 0.5 * (x1 + x2);
        let fm = f(mid).norm();
        stack.push((x1, f1, mid, fm));
        stack.push((mid, fm, x2, f2));
    }
    EdgeCert {
        passed: true,
        lower_bound: lower,
    }
}

const EDGE_BUDGET: usize = 200_000;

fn horizontal_edge_cert<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    t: f64,
    sigma_lo: f64,
    sigma_hi: f64,
    lip: f64,
    target: f64,
    budget: usize,
) -> EdgeCert {
    certify_edge_min(
        &|x| phi.value(Complex64::new(x, t)) - w,
        sigma_lo,
        sigma_hi,
        lip,
        target,
        budget,
    )
}

fn vertical_edge_cert<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
    lip: f64,
    target: f64,
    budget: usize,
) -> EdgeCert {
    certify_edge_min(
        &|t| phi.value(Complex64::new(sigma, t)) - w,
        t_lo,
        t_hi,
        lip,
        target,
        budget,
    )
}

/// Default edge clearance for a target `w`.
pub fn default_delta(w: Complex64) -> f64 {
    1e-3 * (1.0 + w.norm())
}

/// Certified check that the vertical line `Re s = sigma` keeps
/// `|phi - w| >= target` over `t_lo <= Im s <= t_hi`.
pub fn vertical_line_clear<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
    target: f64,
) -> bool {
    let lip = phi.deriv_sup_halfplane(sigma).max(1e-12);
    vertical_edge_cert(phi, w, sigma, t_lo, t_hi, lip, target, EDGE_BUDGET).passed
}

/// Nudge the horizontal edges of `rect` upward (each by at most one
/// period-scale unit) until `|phi(s) - w| >= delta` holds on both of them,
/// certified through the derivative bound. The search advances by the
/// certified deficit, never by less than `delta / (4 L)`.
pub fn safe_rectangle<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
    delta: f64,
) -> Result<Rectangle> {
    if delta <= 0.0 {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    let unit = phi.vertical_period().unwrap_or(PERIOD_BASE_2);
    let lip = phi.deriv_sup_halfplane(rect.sigma_min).max(1e-12);
    let min_step = 0.25 * delta / lip;

    let find = |t0: f64| -> Result<f64> {
        let mut offset = 0.0f64;
        loop {
            let cert = horizontal_edge_cert(
                phi,
                w,
                t0 + offset,
                rect.sigma_min,
                rect.sigma_max,
                lip,
                delta,
                EDGE_BUDGET,
            );
            if cert.passed {
                return Ok(t0 + offset);
            }
            let deficit = (delta - cert.lower_bound).max(0.0);
            offset += (deficit / lip).max(min_step);
            if offset > unit {
                return Err(Error::NoZeroFreeEdge { delta });
            }
        }
    };

    let t_min = find(rect.t_min)?;
    let t_max = find(rect.t_max)?;
    Rectangle::new(rect.sigma_min, rect.sigma_max, t_min, t_max)
}

// ---------------------------------------------------------------------------
// winding numbers
// ---------------------------------------------------------------------------

fn edge_breakpoints(a: f64, b: f64, unit: f64) -> Vec<f64> {
    let n = (((b - a) / (0.5 * unit)).ceil() as usize).max(1);
    (0..=n)
        .map(|k| a + (b - a) * k as f64 / n as f64)
        .collect()
}

fn boundary_integral_weighted<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
    abs_tol: f64,
    weight: &dyn Fn(Complex64) -> Complex64,
) -> (Complex64, f64) {
    let unit = phi.vertical_period().unwrap_or(PERIOD_BASE_2);
    let per_edge = abs_tol / 4.0;
    let max_panels = 20_000;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;

    // bottom: sigma_min -> sigma_max at t_min, ds = dx
    let q = quad::adaptive_split(
        |x| {
            let s = Complex64::new(x, rect.t_min);
            weight(s) * phi.deriv(s) / (phi.value(s) - w)
        },
        &edge_breakpoints(rect.sigma_min, rect.sigma_max, unit),
        per_edge,
        0.0,
        max_panels,
    );
    total += q.value;
    err += q.error;

    // right: t_min -> t_max at sigma_max, ds = i dt
    let q = quad::adaptive_split(
        |t| {
            let s = Complex64::new(rect.sigma_max, t);
            weight(s) * phi.deriv(s) / (phi.value(s) - w)
        },
        &edge_breakpoints(rect.t_min, rect.t_max, unit),
        per_edge,
        0.0,
        max_panels,
    );
    total += Complex64::new(0.0, 1.0) * q.value;
    err += q.error;

    // top: sigma_max -> sigma_min at t_max
    let q = quad::adaptive_split(
        |x| {
            let s = Complex64::new(x, rect.t_max);
            weight(s) * phi.deriv(s) / (phi.value(s) - w)
        },
        &edge_breakpoints(rect.sigma_min, rect.sigma_max, unit),
        per_edge,
        0.0,
        max_panels,
    );
    total -= q.value;
    err += q.error;

    // left: t_max -> t_min at sigma_min
    let q = quad::adaptive_split(
        |t| {
            let s = Complex64::new(rect.sigma_min, t);
            weight(s) * phi.deriv(s) / (phi.value(s) - w)
        },
        &edge_breakpoints(rect.t_min, rect.t_max, unit),
        per_edge,
        0.0,
        max_panels,
    );
    total -= Complex64::new(0.0, 1.0) * q.value;
    err += q.error;

    (total / Complex64::new(0.0, TAU), err)
}

fn boundary_integral<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
    abs_tol: f64,
) -> (Complex64, f64) {
    boundary_integral_weighted(phi, w, rect, abs_tol, &|_| Complex64::new(1.0, 0.0))
}

/// Centroid of the zero cluster inside `rect` (multiplicities included),
/// from the first moment of the argument principle:
/// `(1/2 pi i) * integral s phi'/(phi - w) ds = sum mult * s_j`.
pub fn zero_centroid<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
    winding: i64,
) -> Result<Complex64> {
    if winding == 0 {
        return Err(Error::InvalidInput("empty cluster has no centroid".into()));
    }
    let scale = rect.center().norm() + rect.diameter();
    let (moment, _err) =
        boundary_integral_weighted(phi, w, rect, 1e-8 * scale.max(1.0), &|s| s);
    Ok(moment / winding as f64)
}

/// The argument-principle count of solutions of `phi(s) = w` inside `rect`
/// (with multiplicity). The boundary must stay clear of the zero set; use
/// [`safe_rectangle`] first. The unrounded integral must come within 0.25 of
/// an integer, else the quadrature is refined and ultimately rejected.
pub fn winding_number<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
) -> Result<i64> {
    let mut abs_tol = 0.15;
    let mut raw = 0.0;
    for _ in 0..4 {
        let (value, _est) = boundary_integral(phi, w, rect, abs_tol);
        raw = value.re;
        let nearest = raw.round();
        if (raw - nearest).abs() <= 0.25 && value.im.abs() <= 0.25 {
            return Ok(nearest as i64);
        }
        abs_tol /= 8.0;
    }
    Err(Error::ContourUnresolved { raw })
}

// ---------------------------------------------------------------------------
// zero sets
// ---------------------------------------------------------------------------

/// A located solution of `phi(s) = w`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Zero {
    pub location_re: f64,
    pub location_im: f64,
    pub multiplicity: u32,
    /// false when Newton refinement fell back to the cell center
    pub refined: bool,
}

impl Zero {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.location_re, self.location_im)
    }
}

/// Zeros-with-multiplicities of `phi - w` in a rectangle, together with the
/// winding-number certificate for the whole rectangle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    pub winding_total: i64,
    pub rect: Rectangle,
    /// certified lower bound for `|phi - w|` on the boundary
    pub min_boundary_modulus: f64,
    /// diagnostics from the closed-form path: preimages excluded at the
    /// disk center or boundary
    pub excluded_center: bool,
    pub excluded_boundary: usize,
}

impl ZeroSet {
    pub fn empty(rect: Rectangle) -> Self {
        Self {
            zeros: Vec::new(),
            winding_total: 0,
            rect,
            min_boundary_modulus: f64::INFINITY,
            excluded_center: false,
            excluded_boundary: 0,
        }
    }

    pub fn multiplicity_sum(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }

    /// `sum (Re s)^a` over the zeros, multiplicities included.
    pub fn weighted_sum(&self, a: f64) -> f64 {
        self.zeros
            .iter()
            .map(|z| z.multiplicity as f64 * z.location_re.powf(a))
            .sum()
    }

    fn sort(&mut self) {
        self.zeros.sort_by(|p, q| {
            p.location_im
                .total_cmp(&q.location_im)
                .then(p.location_re.total_cmp(&q.location_re))
        });
    }

    /// CSV rows `(re, im, multiplicity)` preceded by a `#`-prefixed JSON
    /// header carrying the winding certificate.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let header = serde_json::json!({
            "winding_total": self.winding_total,
            "rect": self.rect,
            "min_boundary_modulus": self.min_boundary_modulus,
            "excluded_center": self.excluded_center,
            "excluded_boundary": self.excluded_boundary,
        });
        writeln!(out, "# {header}")?;
        writeln!(out, "re,im,multiplicity")?;
        for z in &self.zeros {
            writeln!(out, "{},{},{}", z.location_re, z.location_im, z.multiplicity)?;
        }
        Ok(())
    }
}

struct Scan<'a, A: AnalyticSymbol + ?Sized> {
    phi: &'a A,
    w: Complex64,
    tol: f64,
    delta: f64,
    scale: f64,
    lip: f64,
}

impl<A: AnalyticSymbol + ?Sized> Scan<'_, A> {
    fn newton(&self, start: Complex64, cell: &Rectangle) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..40 {
            let f = self.phi.value(z) - self.w;
            if f.norm() <= 1e-9 * self.scale {
                // polish: two more steps push the residual to rounding level,
                // so downstream sums do not inherit the refinement tolerance
                for _ in 0..2 {
                    let d = self.phi.deriv(z);
                    if d.norm() < 1e-300 {
                        break;
                    }
                    z -= (self.phi.value(z) - self.w) / d;
                }
                return cell.contains_strict(z).then_some(z);
            }
            let d = self.phi.deriv(z);
            if d.norm() < 1e-300 {
                return None;
            }
            let step = f / d;
            z -= step;
            if !z.re.is_finite() || !z.im.is_finite() {
                return None;
            }
        }
        None
    }

    /// Split coordinate certified `>= target` away from the zero set,
    /// searched near the midpoint of `[lo, hi]`.
    fn clear_split(&self, cell: &Rectangle, vertical: bool) -> Result<f64> {
        let (lo, hi) = if vertical {
            (cell.sigma_min, cell.sigma_max)
        } else {
            (cell.t_min, cell.t_max)
        };
        let mid = 0.5 * (lo + hi);
        let span = hi - lo;
        // near an m-fold zero the clearance scales like distance^m, so the
        // ladder must reach far below delta before giving up
        for shrink in 0..16 {
            let target = self.delta * 0.25f64.powi(shrink);
            if target < 1e-13 * (1.0 + self.w.norm()) {
                break;
            }
            for j in 0..16 {
                // alternate around the midpoint: 0, +1, -1, +2, ...
                let k = (j + 1) / 2;
                let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
                let x = mid + sign * k as f64 * span / 40.0;
                if x <= lo || x >= hi {
                    continue;
                }
                // split candidates fail fast: a certifiable line for a
                // simple-zero split never needs a deep search
                let cert = if vertical {
                    vertical_edge_cert(
                        self.phi, self.w, x, cell.t_min, cell.t_max, self.lip, target, 20_000,
                    )
                } else {
                    horizontal_edge_cert(
                        self.phi,
                        self.w,
                        x,
                        cell.sigma_min,
                        cell.sigma_max,
                        self.lip,
                        target,
                        20_000,
                    )
                };
                if cert.passed {
                    return Ok(x);
                }
            }
        }
        Err(Error::NoZeroFreeEdge { delta: self.delta })
    }

    fn refine(&self, cell: &Rectangle, winding: i64, out: &mut Vec<Zero>) -> Result<()> {
        if winding == 0 {
            return Ok(());
        }
        if winding == 1 {
            if let Some(z) = self.newton(cell.center(), cell) {
                out.push(Zero {
                    location_re: z.re,
                    location_im: z.im,
                    multiplicity: 1,
                    refined: true,
                });
                return Ok(());
            }
        }
        if cell.diameter() < self.tol {
            return self.report_cluster(cell, winding, out);
        }
        // split the longer side along a certified-clear line; around an
        // m-fold zero the clearance of any line shrinks like distance^m, so
        // a failed search means the cluster is tighter than the certifiable
        // scale and gets reported where it stands
        let vertical = cell.height() >= cell.width();
        if vertical {
            let t = match self.clear_split(cell, false) {
                Ok(t) => t,
                Err(Error::NoZeroFreeEdge { .. }) => {
                    return self.report_cluster(cell, winding, out)
                }
                Err(e) => return Err(e),
            };
            let lower = Rectangle::new(cell.sigma_min, cell.sigma_max, cell.t_min, t)?;
            let upper = Rectangle::new(cell.sigma_min, cell.sigma_max, t, cell.t_max)?;
            let w_lower = winding_number(self.phi, self.w, &lower)?;
            self.refine(&lower, w_lower, out)?;
            self.refine(&upper, winding - w_lower, out)
        } else {
            let x = match self.clear_split(cell, true) {
                Ok(x) => x,
                Err(Error::NoZeroFreeEdge { .. }) => {
                    return self.report_cluster(cell, winding, out)
                }
                Err(e) => return Err(e),
            };
            let left = Rectangle::new(cell.sigma_min, x, cell.t_min, cell.t_max)?;
            let right = Rectangle::new(x, cell.sigma_max, cell.t_min, cell.t_max)?;
            let w_left = winding_number(self.phi, self.w, &left)?;
            self.refine(&left, w_left, out)?;
            self.refine(&right, winding - w_left, out)
        }
    }

    /// Report a zero cluster as one entry: the moment integral pins the
    /// centroid (exact for a single m-fold zero); the cell center is the
    /// fallback.
    fn report_cluster(
        &self,
        cell: &Rectangle,
        winding: i64,
        out: &mut Vec<Zero>,
    ) -> Result<()> {
        let (location, refined) = match zero_centroid(self.phi, self.w, cell, winding) {
            Ok(z) if cell.contains_strict(z) => (z, true),
            _ => (cell.center(), false),
        };
        out.push(Zero {
            location_re: location.re,
            location_im: location.im,
            multiplicity: winding as u32,
            refined,
        });
        Ok(())
    }
}

/// Locate all solutions of `phi(s) = w` in `rect` by recursive bisection
/// with winding-number certificates; simple zeros are Newton-refined to
/// residual `<= 1e-9 * max(1, |w|)`.
///
/// The horizontal edges are first nudged by [`safe_rectangle`]; the
/// realized rectangle is recorded in the result.
pub fn locate_zeros<A: AnalyticSymbol + ?Sized>(
    phi: &A,
    w: Complex64,
    rect: &Rectangle,
    tol: f64,
) -> Result<ZeroSet> {
    let delta = default_delta(w);
    let rect = safe_rectangle(phi, w, rect, delta)?;
    let lip = phi.deriv_sup_halfplane(rect.sigma_min).max(1e-12);

    // certify the vertical edges as well before integrating
    let mut min_edge = f64::INFINITY;
    for sigma in [rect.sigma_min, rect.sigma_max] {
        let cert =
            vertical_edge_cert(phi, w, sigma, rect.t_min, rect.t_max, lip, delta * 1e-3, EDGE_BUDGET);
        if !cert.passed {
            return Err(Error::NoZeroFreeEdge { delta });
        }
        min_edge = min_edge.min(cert.lower_bound);
    }
    for t in [rect.t_min, rect.t_max] {
        let cert =
            horizontal_edge_cert(phi, w, t, rect.sigma_min, rect.sigma_max, lip, delta, EDGE_BUDGET);
        min_edge = min_edge.min(cert.lower_bound.max(0.0));
    }

    let scan = Scan {
        phi,
        w,
        tol: tol.max(1e-12),
        delta,
        scale: w.norm().max(1.0),
        lip,
    };
    let total = winding_number(phi, w, &rect)?;
    let mut zeros = Vec::new();
    scan.refine(&rect, total, &mut zeros)?;
    let mut set = ZeroSet {
        zeros,
        winding_total: total,
        rect,
        min_boundary_modulus: min_edge,
        excluded_center: false,
        excluded_boundary: 0,
    };
    set.sort();
    debug_assert_eq!(set.multiplicity_sum(), set.winding_total);
    Ok(set)
}

/// Closed-form zero set of a periodic symbol over a rectangle: each disk
/// preimage `u` of `w` lifts to the lattice
/// `s = -log_2(u) + i k * 2 pi / ln 2`, intersected with `rect`.
/// Preimages at the disk center or pinched onto the boundary are excluded
/// and reported in the diagnostics.
pub fn zeros_periodic_symbol(
    symbol: &PeriodicSymbol,
    w: Complex64,
    rect: &Rectangle,
) -> Result<ZeroSet> {
    let pre = symbol.preimages_for_band(w, rect.sigma_min, rect.sigma_max);
    if !pre.complete {
        return Err(Error::Divergent(
            "preimage family truncated; rectangle reaches too close to Re s = 0".into(),
        ));
    }
    let mut set = ZeroSet::empty(*rect);
    set.excluded_center = pre.at_center;
    set.excluded_boundary = pre.on_boundary;
    for (u, mult) in pre.inside {
        let base = PeriodicSymbol::base_point(u);
        if base.re <= rect.sigma_min || base.re >= rect.sigma_max {
            continue;
        }
        let k_lo = ((rect.t_min - base.im) / PERIOD_BASE_2).ceil() as i64;
        let k_hi = ((rect.t_max - base.im) / PERIOD_BASE_2).floor() as i64;
        for k in k_lo..=k_hi {
            let t = base.im + k as f64 * PERIOD_BASE_2;
            if t <= rect.t_min || t >= rect.t_max {
                continue;
            }
            set.zeros.push(Zero {
                location_re: base.re,
                location_im: t,
                multiplicity: mult,
                refined: true,
            });
        }
    }
    set.winding_total = set.multiplicity_sum();
    set.sort();
    Ok(set)
}
