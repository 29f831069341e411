//! The weighted Hilbert spaces `D_a` of Dirichlet series with norm
//! `||f||_a^2 = |a_1|^2 + sum_{n>=2} |a_n|^2 ln(n)^a` (`a <= 1`): coefficient
//! and Littlewood-Paley forms of the norm, reproducing kernels, the
//! zeta-like sums `J_a` with their singular main term, and the
//! change-of-variables (Stanton) verification for composition operators.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::counting::{self, CountingSymbol, LimitSchedule};
use crate::quad;
use crate::series::{self, DirichletPolynomial, Symbol};
use crate::special::gamma;
use crate::zeros::{exp_power_series, AnalyticSymbol, DiskMap, PeriodicSymbol};
use crate::{Error, Result};

fn check_weight(a: f64) -> Result<()> {
    if a > 1.0 {
        return Err(Error::InvalidInput(format!(
            "the weighted space is defined for a <= 1, got {a}"
        )));
    }
    Ok(())
}

/// The coefficient-side norm `sqrt(|a_1|^2 + sum |a_n|^2 ln(n)^a)`.
pub fn norm_da(f: &DirichletPolynomial, a: f64) -> f64 {
    let mut acc = f.value_at_infinity().norm_sqr();
    for (n, c) in f.terms() {
        if n >= 2 {
            acc += c.norm_sqr() * (n as f64).ln().powf(a);
        }
    }
    acc.sqrt()
}

/// The pairing `<f, g>_a = a_1 conj(b_1) + sum a_n conj(b_n) ln(n)^a`.
pub fn inner_product_da(f: &DirichletPolynomial, g: &DirichletPolynomial, a: f64) -> Complex64 {
    let mut acc = f.value_at_infinity() * g.value_at_infinity().conj();
    for (n, c) in f.terms() {
        if n >= 2 {
            let d = g.coeff(n);
            if d.norm_sqr() > 0.0 {
                acc += c * d.conj() * (n as f64).ln().powf(a);
            }
        }
    }
    acc
}

/// Littlewood-Paley form of the norm:
/// `||f||_a^2 = |f(+inf)|^2 + (2^{1-a}/Gamma(2-a)) * lim lim
///  (1/T) int int |f'(sigma+it)|^2 sigma^{1-a} dt dsigma`.
///
/// For a Dirichlet polynomial the inner vertical mean is exact
/// (`(1/2T) int |f'|^2 dt -> sum |a_n|^2 ln(n)^2 n^{-2 sigma}`), so a single
/// adaptive quadrature in `sigma` remains.
pub fn littlewood_paley_norm(f: &DirichletPolynomial, a: f64) -> Result<f64> {
    check_weight(a)?;
    let head = f.value_at_infinity().norm_sqr();
    let terms: Vec<(f64, f64)> = f
        .terms()
        .filter(|&(n, _)| n >= 2)
        .map(|(n, c)| ((n as f64).ln(), c.norm_sqr()))
        .collect();
    if terms.is_empty() {
        return Ok(head.sqrt());
    }
    let parseval_mean = |sigma: f64| -> f64 {
        terms
            .iter()
            .map(|&(ln_n, c2)| c2 * ln_n * ln_n * (-2.0 * sigma * ln_n).exp())
            .sum()
    };
    // the slowest frequency sets the exponential range of the integrand
    let ln_min = terms
        .iter()
        .map(|&(ln_n, _)| ln_n)
        .fold(f64::INFINITY, f64::min);
    let sigma_cut = 40.0 / ln_min;
    let q = quad::adaptive(
        |sigma| 2.0 * parseval_mean(sigma) * sigma.powf(1.0 - a),
        0.0,
        sigma_cut,
        1e-300,
        1e-12,
        60_000,
    );
    let total = head + 2f64.powf(1.0 - a) / gamma(2.0 - a) * q.value;
    Ok(total.sqrt())
}

// ---------------------------------------------------------------------------
// reproducing kernels and the J_a sums
// ---------------------------------------------------------------------------

/// A truncated kernel or series value together with its tail control.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TailedValue {
    pub value_re: f64,
    pub value_im: f64,
    /// integral bound for the omitted terms
    pub tail_bound: f64,
}

impl TailedValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// `int_N^inf ln(x)^{-a} x^{-c} dx` for `c > 1` (exponential substitution,
/// then adaptive quadrature).
fn log_power_tail(n_trunc: u64, a: f64, c: f64) -> f64 {
    if c <= 1.0 {
        return f64::INFINITY;
    }
    let ln_n = (n_trunc as f64).ln();
    // x = N e^{u/(c-1)}: integral = N^{1-c}/(c-1) * int (ln N + u/(c-1))^{-a} e^{-u} du
    let scale = (n_trunc as f64).powf(1.0 - c) / (c - 1.0);
    let q = quad::adaptive(
        |u: f64| (ln_n + u / (c - 1.0)).powf(-a) * (-u).exp(),
        0.0,
        45.0,
        1e-300,
        1e-12,
        4000,
    );
    scale * q.value
}

/// Partial sum of the reproducing kernel
/// `k_{s,a}(w) = 1 + sum_{n>=2} ln(n)^{-a} n^{-conj(s)-w}` with the
/// integral tail bound for the omitted terms.
pub fn kernel_eval(s: Complex64, a: f64, w: Complex64, n_trunc: u64) -> Result<TailedValue> {
    check_weight(a)?;
    let c = s.re + w.re;
    if c <= 1.0 {
        return Err(Error::InvalidInput(
            "kernel evaluation needs Re s + Re w > 1".into(),
        ));
    }
    let expo = -(s.conj() + w);
    let mut acc = Complex64::new(1.0, 0.0);
    for n in 2..=n_trunc {
        let ln_n = (n as f64).ln();
        acc += ln_n.powf(-a) * (expo * ln_n).exp();
    }
    Ok(TailedValue {
        value_re: acc.re,
        value_im: acc.im,
        tail_bound: log_power_tail(n_trunc, a, c),
    })
}

/// Kernel polynomial truncation: the element of `D_a` implementing point
/// evaluation at `s`, as a Dirichlet polynomial (for pairing tests).
pub fn kernel_polynomial(s: Complex64, a: f64, n_trunc: u64) -> DirichletPolynomial {
    let mut terms = vec![(1u64, Complex64::new(1.0, 0.0))];
    for n in 2..=n_trunc {
        let ln_n = (n as f64).ln();
        terms.push((n, ln_n.powf(-a) * (-s.conj() * ln_n).exp()));
    }
    DirichletPolynomial::from_terms(terms)
}

/// `||k_{s,a}||^2` with the tail *estimate* folded in (Euler-Maclaurin:
/// integral minus half the boundary term), so the value tracks the slow
/// series near `Re s = 1/2` instead of undershooting it.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct KernelNorm {
    pub norm_sq: f64,
    pub partial: f64,
    pub tail_estimate: f64,
    /// order of the first omitted Euler-Maclaurin correction
    pub tail_error: f64,
}

pub fn kernel_norm(s: Complex64, a: f64, n_trunc: u64) -> Result<KernelNorm> {
    check_weight(a)?;
    let c = 2.0 * s.re;
    if c <= 1.0 {
        return Err(Error::InvalidInput("kernel norm needs Re s > 1/2".into()));
    }
    let mut partial = 1.0;
    for n in 2..=n_trunc {
        let ln_n = (n as f64).ln();
        partial += ln_n.powf(-a) * (n as f64).powf(-c);
    }
    let f_n = {
        let x = n_trunc as f64;
        x.ln().powf(-a) * x.powf(-c)
    };
    let integral = log_power_tail(n_trunc, a, c);
    let tail_estimate = integral - 0.5 * f_n;
    let tail_error = {
        let x = n_trunc as f64;
        // |f'(N)| / 12
        (f_n * (a / (x * x.ln()) + c / x)).abs() / 12.0
    };
    Ok(KernelNorm {
        norm_sq: partial + tail_estimate,
        partial,
        tail_estimate,
        tail_error,
    })
}

/// Decomposition of `J_a(w) = sum_{n>=1} ln(n)^{1-a} n^{-w}` into its
/// singular main term `Gamma(2-a) / (w-1)^{2-a}` (principal branch) and the
/// holomorphic remainder estimate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct JaDecomposition {
    pub value_re: f64,
    pub value_im: f64,
    pub main_re: f64,
    pub main_im: f64,
    pub remainder_re: f64,
    pub remainder_im: f64,
    pub tail_error: f64,
}

impl JaDecomposition {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
    pub fn main_term(&self) -> Complex64 {
        Complex64::new(self.main_re, self.main_im)
    }
    pub fn remainder(&self) -> Complex64 {
        Complex64::new(self.remainder_re, self.remainder_im)
    }
}

pub fn ja_eval(w: Complex64, a: f64, n_trunc: u64) -> Result<JaDecomposition> {
    check_weight(a)?;
    if w.re <= 1.0 {
        return Err(Error::InvalidInput("J_a needs Re w > 1".into()));
    }
    let mut partial = Complex64::new(0.0, 0.0);
    for n in 1..=n_trunc {
        let ln_n = (n as f64).ln();
        // 0^0 = 1 keeps the n = 1 term of J_1 = zeta
        partial += ln_n.powf(1.0 - a) * (-w * ln_n).exp();
    }
    // Euler-Maclaurin tail: u = ln x, complex decay exp(-(w-1)u)
    let ln_n = (n_trunc as f64).ln();
    let decay = w - 1.0;
    let u_span = 60.0 / decay.re.max(1e-6);
    let integral = quad::adaptive(
        |u: f64| (-decay * u).exp() * u.powf(1.0 - a),
        ln_n,
        ln_n + u_span,
        1e-300,
        1e-13,
        20_000,
    )
    .value;
    let f_n = {
        let x = n_trunc as f64;
        x.ln().powf(1.0 - a) * (-w * x.ln()).exp()
    };
    let value = partial + integral - 0.5 * f_n;
    let main = gamma(2.0 - a) / (w - 1.0).powf(2.0 - a);
    let rem = value - main;
    let tail_error = {
        let x = n_trunc as f64;
        (f_n.norm() * (w.norm() / x + (1.0 - a).abs() / (x * x.ln()))) / 12.0
    };
    Ok(JaDecomposition {
        value_re: value.re,
        value_im: value.im,
        main_re: main.re,
        main_im: main.im,
        remainder_re: rem.re,
        remainder_im: rem.im,
        tail_error,
    })
}

// ---------------------------------------------------------------------------
// composition with periodic symbols, on the coefficient side
// ---------------------------------------------------------------------------

/// A series supported on the frequencies `2^k`: the natural carrier for
/// `f(g(2^{-s}))`, whose exponent range outgrows `u64` frequencies long
/// before its coefficients stop mattering.
#[derive(Debug, Clone)]
pub struct GeometricSeries {
    /// coefficient of `2^{-ks}` at index `k`
    pub coeffs: Vec<Complex64>,
}

impl GeometricSeries {
    /// `||.||_a` over the frequencies `2^k` (weight `(k ln 2)^a` for `k >= 1`).
    pub fn norm_da(&self, a: f64) -> f64 {
        let mut acc = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k == 0 {
                acc += c.norm_sqr();
            } else {
                acc += c.norm_sqr() * (k as f64 * LN_2).powf(a);
            }
        }
        acc.sqrt()
    }

    /// Tail estimate for the norm mass beyond the truncation order, from
    /// the dyadic fit `S_inf - S(K) ~ (S(K) - S(K/2)) / (sqrt(2) - 1)`
    /// (exact for the `k^{-3/2}` coefficient decay of inner-type
    /// compositions; zero for entire ones).
    pub fn truncation_tail(&self, a: f64) -> f64 {
        let k = self.coeffs.len();
        if k < 8 {
            return 0.0;
        }
        let weight = |i: usize, c: &Complex64| {
            if i == 0 {
                c.norm_sqr()
            } else {
                c.norm_sqr() * (i as f64 * LN_2).powf(a)
            }
        };
        let upper_half: f64 = self.coeffs[k / 2..]
            .iter()
            .enumerate()
            .map(|(j, c)| weight(k / 2 + j, c))
            .sum();
        (upper_half / (2f64.sqrt() - 1.0)).max(0.0)
    }
}

/// Coefficients of `f(g(2^{-s}))` through `2^{-order*s}`, computed on the
/// power-series side: `n^{-g(z)} = n^{-g(0)} exp(-ln(n) (g(z) - g(0)))`.
pub fn compose_with_disk_map(
    f: &DirichletPolynomial,
    map: &DiskMap,
    order: usize,
) -> Result<GeometricSeries> {
    let g = map.taylor(order);
    let g0 = g[0];
    let mut acc = vec![Complex64::new(0.0, 0.0); order + 1];
    for (n, a_n) in f.terms() {
        if n == 1 {
            acc[0] += a_n;
            continue;
        }
        let ln_n = (n as f64).ln();
        let mut h: Vec<Complex64> = g.iter().map(|&c| -ln_n * c).collect();
        h[0] = Complex64::new(0.0, 0.0);
        let e = exp_power_series(&h);
        let head = a_n * (-g0 * ln_n).exp();
        for (k, c) in e.iter().enumerate() {
            acc[k] += head * c;
        }
    }
    Ok(GeometricSeries { coeffs: acc })
}

// ---------------------------------------------------------------------------
// the change-of-variables verification
// ---------------------------------------------------------------------------

/// Grid controls for the area integral of the change-of-variables formula.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct StantonGrid {
    /// innermost `Re w - 1/2` level
    pub x_min: f64,
    /// outer `Re w - 1/2` cap (the integrand decays like `4^{-Re w}`)
    pub x_max: f64,
    /// geometric abscissa levels between them
    pub x_levels: usize,
    /// vertical window; beyond it the half-plane-image tail is added in
    /// closed form
    pub t_cap: f64,
    /// truncation order (in powers of 2) for the composed series norm
    pub taylor_order: usize,
}

impl Default for StantonGrid {
    fn default() -> Self {
        Self {
            x_min: 1e-3,
            x_max: 24.0,
            x_levels: 60,
            t_cap: 64.0,
            taylor_order: 8192,
        }
    }
}

/// Right-hand side of the change-of-variables formula:
/// `|f(phi(+inf))|^2 + (2^{1-a}/(Gamma(2-a) pi)) *
///  int_{C_{1/2}} |f'(w)|^2 M_{phi,1-a}(w) dA(w)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct StantonRhs {
    pub total: f64,
    pub point_term: f64,
    pub integral_term: f64,
    pub t_tail_correction: f64,
}

/// Both sides of the change-of-variables formula and their relative gap.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct StantonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub lhs_tail_bound: f64,
}

fn mean_limit_for(sym: &CountingSymbol, b: f64, w: Complex64) -> Result<f64> {
    match sym {
        CountingSymbol::Periodic(p) => counting::periodic_exact_limit(p, b, w),
        CountingSymbol::Poly(_) => {
            let schedule = LimitSchedule::default();
            let est = counting::mean_count_limit(sym, b, w, &schedule)?;
            if est.diverged {
                return Err(Error::Divergent("counting node diverged".into()));
            }
            Ok(est.value)
        }
    }
}

/// Evaluate the area integral on a grid geometric in `Re w - 1/2` and
/// adaptive in `Im w` (conjugate symmetry is exploited when both `f` and
/// the symbol have real data). For half-plane Moebius images the vertical
/// tail beyond `t_cap` is added from the `M ~ (x C / t^2)^{1-a}` asymptote.
pub fn stanton_rhs(
    f: &DirichletPolynomial,
    sym: &CountingSymbol,
    a: f64,
    grid: &StantonGrid,
) -> Result<StantonRhs> {
    check_weight(a)?;
    let b = 1.0 - a;
    let phi_inf = sym.value_at_infinity();
    let point_term = f.eval(phi_inf).norm_sqr();

    let f_deriv = f.derivative();
    let real_symmetric = is_real(f) && symbol_is_real(sym);

    // inner integral over Im w at a fixed abscissa
    let t_integral = |x: f64| -> f64 {
        let u = 0.5 + x;
        let inner = |t: f64| -> f64 {
            let w = Complex64::new(u, t);
            let m = mean_limit_for(sym, b, w).unwrap_or(f64::NAN);
            if m == 0.0 {
                return 0.0;
            }
            f_deriv.eval(w).norm_sqr() * m
        };
        if real_symmetric {
            2.0 * quad::adaptive(inner, 0.0, grid.t_cap, 1e-14, 1e-9, 4000).value
        } else {
            quad::adaptive(inner, -grid.t_cap, grid.t_cap, 1e-14, 1e-9, 8000).value
        }
    };

    // geometric abscissa breakpoints, with the sliver [0, x_min] included
    let ratio = (grid.x_max / grid.x_min).powf(1.0 / grid.x_levels as f64);
    let mut cuts = vec![0.0, grid.x_min];
    for j in 1..=grid.x_levels {
        cuts.push(grid.x_min * ratio.powi(j as i32));
    }
    let q = quad::adaptive_split(t_integral, &cuts, 1e-12, 1e-6, 1600);

    // closed-form vertical tail for the half-plane image
    let t_tail = match sym {
        CountingSymbol::Periodic(PeriodicSymbol {
            map: DiskMap::HalfPlaneMobius { nu },
            ..
        }) => {
            let c = 2.0 * nu.re - 1.0;
            let diag: Vec<(f64, f64)> = f_deriv
                .terms()
                .map(|(n, cf)| ((n as f64).ln(), cf.norm_sqr()))
                .collect();
            let tail_at = |x: f64| -> f64 {
                let u = 0.5 + x;
                let p_diag: f64 = diag.iter().map(|&(ln_n, c2)| c2 * (-2.0 * u * ln_n).exp()).sum();
                // M ~ ln2^a (x c / t^2)^{1-a}; int_{t_cap}^inf t^{-2(1-a)} dt
                let m_coef = LN_2.powf(a) * (x * c).powf(b);
                let expo = 2.0 * b - 1.0;
                if expo <= 0.0 {
                    return f64::INFINITY;
                }
                2.0 * p_diag * m_coef * grid.t_cap.powf(-expo) / expo
            };
            quad::adaptive_split(tail_at, &cuts, 1e-13, 1e-7, 800).value
        }
        _ => 0.0,
    };

    let scale = 2f64.powf(1.0 - a) / (gamma(2.0 - a) * PI);
    let integral_term = scale * (q.value + t_tail);
    if !integral_term.is_finite() {
        return Err(Error::Divergent("rhs-divergent".into()));
    }
    Ok(StantonRhs {
        total: point_term + integral_term,
        point_term,
        integral_term,
        t_tail_correction: scale * t_tail,
    })
}

fn is_real(f: &DirichletPolynomial) -> bool {
    f.terms().all(|(_, c)| c.im == 0.0)
}

fn symbol_is_real(sym: &CountingSymbol) -> bool {
    match sym {
        CountingSymbol::Poly(p) => p.terms().all(|(_, c)| c.im == 0.0),
        CountingSymbol::Periodic(p) => {
            if (p.rotation - Complex64::new(1.0, 0.0)).norm() > 0.0 {
                return false;
            }
            match &p.map {
                DiskMap::Identity | DiskMap::SingularInner => true,
                DiskMap::Affine { c0, c1 } => c0.im == 0.0 && c1.im == 0.0,
                DiskMap::HalfPlaneMobius { nu } => nu.im == 0.0,
            }
        }
    }
}

/// Verify the change-of-variables formula: the coefficient-side norm of the
/// composed series against the counting-side area integral.
pub fn stanton_verify(
    f: &DirichletPolynomial,
    sym: &CountingSymbol,
    a: f64,
    grid: &StantonGrid,
) -> Result<StantonCheck> {
    check_weight(a)?;
    let (lhs, lhs_tail) = match sym {
        CountingSymbol::Periodic(p) => {
            if (p.rotation - Complex64::new(1.0, 0.0)).norm() > 1e-15 {
                return Err(Error::InvalidInput(
                    "verification uses the untwisted symbol".into(),
                ));
            }
            let composed = compose_with_disk_map(f, &p.map, grid.taylor_order)?;
            (composed.norm_da(a).powi(2), composed.truncation_tail(a))
        }
        CountingSymbol::Poly(poly) => {
            let psi = Symbol::g0(poly.clone())?;
            let trunc = 1u64 << 20;
            let composed = series::compose_truncated(f, &psi, trunc)?;
            (norm_da(&composed, a).powi(2), 0.0)
        }
    };
    let rhs = stanton_rhs(f, sym, a, grid)?;
    let rel_err = (lhs - rhs.total).abs() / lhs.abs().max(1e-12);
    Ok(StantonCheck {
        lhs,
        rhs: rhs.total,
        rel_err,
        lhs_tail_bound: lhs_tail,
    })
}
