//! Adaptive Gauss–Kronrod quadrature over real intervals, for real- and
//! complex-valued integrands. The 15-point Kronrod rule with the embedded
//! 7-point Gauss rule supplies the per-panel error estimate; a global
//! worst-panel-first queue drives refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Sub};

use num_complex::Complex64;

const XGK: [f64; 7] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Values the panel rule can integrate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn scale(self, k: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        num_complex::Complex::norm(self)
    }
}

fn qk15<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for (j, &x) in XGK.iter().enumerate() {
        let dx = half * x;
        let sum = f(center - dx) + f(center + dx);
        kron = kron + sum.scale(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + sum.scale(WG[j / 2]);
        }
    }
    let value = kron.scale(half);
    let err = (kron - gauss).scale(half).norm();
    (value, err)
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<V> {
    pub value: V,
    pub error: f64,
    pub panels: usize,
}

/// Integrate `f` over `[a, b]`, refining until the summed panel error drops
/// below `max(abs_tol, rel_tol * |value|)` or the panel budget is exhausted.
pub fn adaptive<V: QuadValue>(
    f: impl Fn(f64) -> V,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quadrature<V> {
    adaptive_split(f, &[a, b], abs_tol, rel_tol, max_panels)
}

/// Same as [`adaptive`], starting from the subdivision induced by
/// `breakpoints` (sorted, at least two entries). Useful when the integrand
/// has known kinks or near-singular points.
pub fn adaptive_split<V: QuadValue>(
    f: impl Fn(f64) -> V,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quadrature<V> {
    assert!(breakpoints.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut count = 0usize;
    for win in breakpoints.windows(2) {
        let (a, b) = (win[0], win[1]);
        if a == b {
            continue;
        }
        let (value, error) = qk15(&f, a, b);
        heap.push(Panel { a, b, value, error });
        count += 1;
    }
    loop {
        let mut total = V::zero();
        let mut err = 0.0;
        for p in heap.iter() {
            total = total + p.value;
            err += p.error;
        }
        let tol = abs_tol.max(rel_tol * total.norm());
        if err <= tol || count >= max_panels {
            return Quadrature {
                value: total,
                error: err,
                panels: count,
            };
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; give up on it
            heap.push(worst);
            return finish(heap, count);
        }
        let (lv, le) = qk15(&f, worst.a, mid);
        let (rv, re) = qk15(&f, mid, worst.b);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        count += 1;
    }
}

fn finish<V: QuadValue>(heap: BinaryHeap<Panel<V>>, count: usize) -> Quadrature<V> {
    let mut total = V::zero();
    let mut err = 0.0;
    for p in heap.iter() {
        total = total + p.value;
        err += p.error;
    }
    Quadrature {
        value: total,
        error: err,
        panels: count,
    }
}

/// Composite fixed-order rule over `n` equal panels; cheap workhorse for
/// smooth periodic integrands where adaptivity buys nothing.
pub fn composite<V: QuadValue>(f: impl Fn(f64) -> V, a: f64, b: f64, n: usize) -> V {
    let mut total = V::zero();
    let h = (b - a) / n as f64;
    for k in 0..n {
        let (v, _) = qk15(&f, a + k as f64 * h, a + (k + 1) as f64 * h);
        total = total + v;
    }
    total
}
