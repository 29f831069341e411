//! Acceptance suite: every numbered criterion runs against closed-form
//! oracles at its stated tolerance and prints one pass line. Run with
//! `cargo test --test acceptance -- --nocapture` to see them all.

mod common;

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use common::*;
use dsc::counting::{self, CountingSymbol, JessenMode, LimitSchedule};
use dsc::operators;
use dsc::runner::{self, ExperimentConfig};
use dsc::series::{Character, DirichletPolynomial};
use dsc::spaces::{self, StantonGrid};
use dsc::zeros::{self, DiskMap, Rectangle, PERIOD_BASE_2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE PASS {n:>2}: {what}");
}

/// 1. Winding numbers on random rectangles match exact lattice counts.
#[test]
fn criterion_01_zero_count_exactness() {
    let fixtures: Vec<(CountingSymbol, DiskMap, Complex64)> = vec![
        (
            CountingSymbol::Poly(poly_lattice()),
            DiskMap::Identity,
            c(0.25, 0.0),
        ),
        (
            CountingSymbol::Poly(poly_affine()),
            DiskMap::Affine {
                c0: c(1.5, 0.0),
                c1: c(0.5, 0.0),
            },
            c(13.0 / 8.0, 0.0),
        ),
        (
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
            DiskMap::HalfPlaneMobius { nu: c(1.0, 0.0) },
            c(1.25, 0.4),
        ),
    ];
    let mut rng = TestRng(2024);
    let mut slowest = 0.0f64;
    for (sym, map, w) in &fixtures {
        let bases = lattice_bases(map, *w);
        assert!(!bases.is_empty());
        for _ in 0..50 {
            let s_lo = rng.uniform(0.2, 2.6);
            let s_hi = s_lo + rng.uniform(0.3, 2.0);
            let t_lo = rng.uniform(-30.0, 20.0);
            let t_hi = t_lo + rng.uniform(2.0, 14.0);
            let rect = Rectangle::new(s_lo, s_hi, t_lo, t_hi).unwrap();
            let safe = zeros::safe_rectangle(sym, *w, &rect, zeros::default_delta(*w)).unwrap();
            let started = Instant::now();
            let winding = zeros::winding_number(sym, *w, &safe).unwrap();
            let elapsed = started.elapsed().as_secs_f64();
            slowest = slowest.max(elapsed);
            let exact = lattice_count(&bases, &safe);
            assert_eq!(winding, exact, "rect {safe:?} target {w}");
            assert!(elapsed < 0.05, "winding took {elapsed:.4}s on {safe:?}");
        }
    }
    pass(1, &format!("150 random rectangles, winding == lattice count, slowest {slowest:.4}s"));
}

/// 2. Counting-function limits on the lattice symbol: `2^a ln 2`.
#[test]
fn criterion_02_counting_limits() {
    let sym = CountingSymbol::Poly(poly_lattice());
    let schedule = LimitSchedule::default(); // T_max = 200 periods
    let w = c(0.25, 0.0);
    for &a in &[0.0, 0.5, 1.0, 2.0] {
        let est = counting::mean_count_limit(&sym, a, w, &schedule).unwrap();
        let exact = 2f64.powf(a) * LN_2;
        assert!(est.converged && !est.diverged, "a={a}: {est:?}");
        assert!(
            (est.value - exact).abs() < 1e-2 * exact,
            "a={a}: {} vs {}",
            est.value,
            exact
        );
    }
    pass(2, "mean_count_limit(2^(-s), a, 1/4) = 2^a ln 2 for a in {0, 1/2, 1, 2} (rel < 1e-2)");
}

fn identity_grid() -> (Vec<f64>, Vec<f64>) {
    (vec![-1.0, 0.5, 1.0, 2.0], vec![0.3, 0.7, 1.1, 1.7, 2.5])
}

/// 3. The weight identity across fixtures, weights, abscissae.
#[test]
fn criterion_03_weight_identity() {
    let schedule = LimitSchedule::default();
    let (weights, sigmas) = identity_grid();
    let mut checked = 0;
    for (name, sym, w) in counting_fixtures() {
        for &a in &weights {
            for &sigma in &sigmas {
                let check =
                    counting::verify_weight_identity(&sym, a, w, sigma, &schedule).unwrap();
                assert!(
                    check.rel_residual < 1e-3,
                    "{name}, a={a}, sigma={sigma}: lhs {} rhs {}",
                    check.lhs,
                    check.rhs
                );
                checked += 1;
            }
        }
    }
    pass(3, &format!("weight identity residual < 1e-3 on {checked} fixture/weight/sigma combinations"));
}

/// 4. The Jessen-function identity on the same grid, with the Jessen
/// function itself validated against the circular-mean (Jensen) oracle.
#[test]
fn criterion_04_jessen_identity() {
    let schedule = LimitSchedule::default();
    let (weights, sigmas) = identity_grid();
    // jessen against the closed-form circular mean first
    for (name, sym, w) in counting_fixtures() {
        let map = match &sym {
            CountingSymbol::Periodic(p) => p.map.clone(),
            _ => unreachable!(),
        };
        for &sigma in &sigmas {
            let j = counting::jessen(&sym, w, sigma, 500.0, JessenMode::Vertical).unwrap();
            let oracle = jessen_oracle(&map, w, sigma);
            assert!(
                (j - oracle).abs() < 1e-6,
                "{name}, sigma={sigma}: jessen {j} vs oracle {oracle}"
            );
        }
    }
    let mut checked = 0;
    for (name, sym, w) in counting_fixtures() {
        for &a in &weights {
            for &sigma in &sigmas {
                let check =
                    counting::verify_jessen_identity(&sym, a, w, sigma, &schedule).unwrap();
                assert!(
                    check.rel_residual < 1e-3,
                    "{name}, a={a}, sigma={sigma}: lhs {} rhs {}",
                    check.lhs,
                    check.rhs
                );
                checked += 1;
            }
        }
    }
    pass(4, &format!("Jessen identity residual < 1e-3 on {checked} combinations; J validated to 1e-6 against the circular-mean oracle"));
}

/// 5. Polytorus representation: Monte Carlo average of unit-window counts.
#[test]
fn criterion_05_polytorus_average() {
    let fixtures: Vec<(&str, CountingSymbol, Complex64, f64, u64)> = vec![
        (
            "lattice 2^(-s)",
            CountingSymbol::Poly(poly_lattice()),
            c(0.25, 0.0),
            lattice_limit(&DiskMap::Identity, 1.0, c(0.25, 0.0)),
            501,
        ),
        (
            "affine",
            CountingSymbol::Poly(poly_affine()),
            c(13.0 / 8.0, 0.0),
            lattice_limit(
                &DiskMap::Affine {
                    c0: c(1.5, 0.0),
                    c1: c(0.5, 0.0),
                },
                1.0,
                c(13.0 / 8.0, 0.0),
            ),
            502,
        ),
        (
            "half-plane Moebius",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
            c(1.25, 0.4),
            lattice_limit(&DiskMap::HalfPlaneMobius { nu: c(1.0, 0.0) }, 1.0, c(1.25, 0.4)),
            503,
        ),
    ];
    for (name, sym, w, exact, seed) in fixtures {
        let avg = counting::polytorus_average(&sym, 1.0, w, 10_000, seed).unwrap();
        assert!(
            (avg.estimate - exact).abs() <= 3.0 * avg.stderr,
            "{name}: {} vs {} (stderr {})",
            avg.estimate,
            exact,
            avg.stderr
        );
        assert!(
            avg.stderr < 0.02 * exact,
            "{name}: stderr {} vs 2% of {}",
            avg.stderr,
            exact
        );
    }
    pass(5, "polytorus average within 3 stderr of the limit, stderr < 2%, 10^4 samples x 3 fixtures");
}

/// 6. Direct T-limit at sigma = 0 for a >= 1, over random characters.
#[test]
fn criterion_06_direct_t_limit() {
    let schedule = LimitSchedule::default();
    let fixtures: Vec<(&str, CountingSymbol, Complex64, f64)> = vec![
        (
            "lattice 2^(-s)",
            CountingSymbol::Poly(poly_lattice()),
            c(0.25, 0.0),
            2.0 * LN_2,
        ),
        (
            "affine",
            CountingSymbol::Poly(poly_affine()),
            c(13.0 / 8.0, 0.0),
            2.0 * LN_2,
        ),
        (
            "half-plane Moebius",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
            c(1.25, 0.4),
            lattice_limit(&DiskMap::HalfPlaneMobius { nu: c(1.0, 0.0) }, 1.0, c(1.25, 0.4)),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for (name, sym, w, exact) in fixtures {
        for k in 0..10 {
            let chi = Character::random(&[2], &mut rng);
            let est = counting::direct_t_limit(&sym, 1.0, w, &chi, &schedule).unwrap();
            assert!(
                (est.value - exact).abs() < 0.01 * exact,
                "{name}, chi #{k}: {} vs {}",
                est.value,
                exact
            );
        }
    }
    pass(6, "direct T-limit (a = 1, sigma = 0) matches the iterated limit within 1% for 10 characters x 3 fixtures");
}

/// 7. Littlewood-Paley form of the norm against the coefficient form.
#[test]
fn criterion_07_littlewood_paley() {
    let mut rng = TestRng(7007);
    for trial in 0..20 {
        // 10 distinct random frequencies with complex coefficients
        let mut freqs = Vec::new();
        while freqs.len() < 10 {
            let n = 2 + (rng.next_u64() % 299);
            if !freqs.contains(&n) {
                freqs.push(n);
            }
        }
        let f = DirichletPolynomial::from_terms(
            freqs
                .iter()
                .map(|&n| (n, c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))),
        );
        for &a in &[-2.0, -1.0, 0.0, 0.5, 1.0] {
            let lp = spaces::littlewood_paley_norm(&f, a).unwrap();
            let direct = spaces::norm_da(&f, a);
            assert!(
                (lp - direct).abs() < 1e-8 * direct.max(1.0),
                "trial {trial}, a={a}: {lp} vs {direct}"
            );
        }
    }
    pass(7, "Littlewood-Paley norm == coefficient norm to 1e-8 for 20 random 10-term series x 5 weights");
}

/// 8. The change-of-variables (Stanton) formula on the fixture family.
#[test]
fn criterion_08_stanton_formula() {
    let grid = StantonGrid::default();
    let f1 = poly_lattice();
    let f2 = poly_lattice().add(&DirichletPolynomial::monomial(3, c(1.0, 0.0)));
    let affine = CountingSymbol::Periodic(periodic_affine());
    let mobius = CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0)));

    // pinned coefficient-side oracle for (2^{-s}, affine, a = 0)
    let oracle = spaces::stanton_verify(&f1, &affine, 0.0, &grid).unwrap();
    assert!(
        (oracle.lhs - 0.140472).abs() < 1e-6,
        "lhs oracle {}",
        oracle.lhs
    );

    for (fname, f) in [("2^(-s)", &f1), ("2^(-s)+3^(-s)", &f2)] {
        for (sname, sym) in [("affine", &affine), ("mobius", &mobius)] {
            for &a in &[-1.0, 0.0] {
                let check = spaces::stanton_verify(f, sym, a, &grid).unwrap();
                assert!(
                    check.rel_err < 1e-2,
                    "{fname} o {sname}, a={a}: lhs {} rhs {} rel {}",
                    check.lhs,
                    check.rhs,
                    check.rel_err
                );
            }
        }
    }
    pass(8, "change-of-variables rel_err < 1e-2 on 2 functions x 2 symbols x 2 weights; lhs oracle 0.140472 +- 1e-6");
}

/// 9. The finite/infinite dichotomy of the singular-inner fixture.
#[test]
fn criterion_09_singular_dichotomy() {
    let sym = CountingSymbol::Periodic(singular_inner());
    let w = c((-1.0f64).exp(), 0.0);
    let schedule = LimitSchedule::geometric(PERIOD_BASE_2, 3, 0.25, 16, 1e-4, 1e-10).unwrap();
    for &a in &[0.25, 0.5] {
        let est = counting::mean_count_limit(&sym, a, w, &schedule).unwrap();
        assert!(est.diverged, "a={a} must diverge: {:?}", est.per_t_values);
    }
    for &a in &[0.75, 1.0] {
        let est = counting::mean_count_limit(&sym, a, w, &schedule).unwrap();
        assert!(!est.diverged && est.converged, "a={a} must converge");
    }
    // brute-force preimage-lattice oracle at a = 1
    let mut oracle = 0.0;
    for n in 1..400_000i64 {
        let y = std::f64::consts::TAU * n as f64;
        oracle += 2.0 * ((4.0 + y * y) / (y * y)).ln() / (2.0 * LN_2);
    }
    oracle *= LN_2;
    let fine = counting::mean_count_limit(&sym, 1.0, w, &schedule).unwrap();
    assert!(
        (fine.value - oracle).abs() < 1e-2 * oracle,
        "a=1: {} vs brute-force {}",
        fine.value,
        oracle
    );
    pass(9, "singular-inner dichotomy: divergence flags at a in {1/4, 1/2}, convergence at {3/4, 1}, a=1 value within 1% of the preimage sum");
}

/// 10. The Littlewood-type bound at random targets.
#[test]
fn criterion_10_littlewood_bound() {
    let schedule = LimitSchedule::default();
    let mut rng = TestRng(1010);
    let mut checked = 0;
    // admissible (characteristic-zero, half-plane image) fixtures only
    let fixtures: Vec<(&str, CountingSymbol)> = vec![
        (
            "affine 3/2+(1/2)2^(-s)",
            CountingSymbol::Periodic(periodic_affine()),
        ),
        (
            "mobius nu=1",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
        ),
        (
            "mobius nu=1.3+0.4i",
            CountingSymbol::Periodic(periodic_mobius(c(1.3, 0.4))),
        ),
    ];
    for (name, sym) in fixtures {
        for _ in 0..100 {
            let w = match name {
                "affine 3/2+(1/2)2^(-s)" => loop {
                    let w = c(rng.uniform(1.05, 1.95), rng.uniform(-0.45, 0.45));
                    if (w - c(1.5, 0.0)).norm() < 0.49 && (w - c(1.5, 0.0)).norm() > 1e-3 {
                        break w;
                    }
                },
                _ => c(rng.uniform(0.55, 3.0), rng.uniform(-2.0, 2.0)),
            };
            let check = operators::littlewood_bound_check(&sym, w, &schedule).unwrap();
            assert!(
                check.lhs <= check.rhs + 1e-6,
                "{name} at {w}: {} > {}",
                check.lhs,
                check.rhs
            );
            checked += 1;
        }
    }
    pass(10, &format!("Littlewood bound holds (lhs <= rhs + 1e-6) at {checked} random targets on 3 admissible fixtures"));
}

/// 11. Submean-value comparison over fixture disks.
#[test]
fn criterion_11_submean() {
    let schedule = LimitSchedule::default();
    let disks: Vec<(&str, CountingSymbol, Complex64, f64)> = vec![
        (
            "mobius",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
            c(1.2, 0.3),
            0.12,
        ),
        (
            "lattice",
            CountingSymbol::Periodic(periodic_identity()),
            c(0.75, 0.1),
            0.05,
        ),
    ];
    for &a in &[0.5, 1.0, 2.0] {
        for (name, sym, w, r) in &disks {
            let check = counting::submean_check(sym, a, *w, *r, 10, &schedule).unwrap();
            assert!(
                check.ratio >= 0.0 && check.ratio <= 10.0,
                "{name}, a={a}: {check:?}"
            );
            let tight = counting::submean_check(sym, a, *w, *r / 8.0, 10, &schedule).unwrap();
            assert!(
                (tight.ratio - 1.0).abs() < 0.05,
                "{name}, a={a}, r/8: {tight:?}"
            );
        }
    }
    pass(11, "submean ratio <= 10 on fixture disks (a in {1/2, 1, 2}); ratio -> 1 within 5% at r/8");
}

/// 12. The Schwarz-lemma constant, re-validated on a 10x finer grid.
#[test]
fn criterion_12_schwarz_constant() {
    let grid = operators::SchwarzGrid::default();
    let fixtures: Vec<(&str, CountingSymbol)> = vec![
        ("affine polynomial", CountingSymbol::Poly(poly_affine())),
        (
            "half-plane Moebius",
            CountingSymbol::Periodic(periodic_mobius(c(1.0, 0.0))),
        ),
        (
            "constant",
            CountingSymbol::Poly(DirichletPolynomial::constant(c(1.75, 0.3))),
        ),
    ];
    for (name, sym) in fixtures {
        let est = operators::schwarz_constant(&sym, &grid).unwrap();
        assert!(est.is_finite() && est > 0.0, "{name}: {est}");
        let worst = operators::schwarz_violation(&sym, est * 1.05, &grid.refined(10)).unwrap();
        assert!(worst <= 0.0, "{name}: violation {worst} at 1.05 x estimate");
    }
    pass(12, "Schwarz constant finite on 3 fixtures; inequality holds on the 10x finer grid with zero violations");
}

/// 13. The singular decomposition of the zeta-like sums.
#[test]
fn criterion_13_ja_decomposition() {
    let d = spaces::ja_eval(c(2.0, 0.0), 1.0, 200_000).unwrap();
    let zeta2 = PI * PI / 6.0;
    assert!((d.value().re - zeta2).abs() < 1e-6, "J_1(2) = {}", d.value());
    for &a in &[0.0, 0.5, 1.0] {
        for &u in &[2.0, 1.5, 1.2, 1.1, 1.05] {
            let d = spaces::ja_eval(c(u, 0.0), a, 400_000).unwrap();
            assert!(
                d.remainder().norm() < 10.0,
                "a={a}, w={u}: remainder {}",
                d.remainder().norm()
            );
        }
    }
    pass(13, "J_1(2) = zeta(2) within 1e-6; remainder stays below 10 down to w = 1.05 for a in {0, 1/2, 1}");
}

/// 14. Reproducing-kernel norm asymptotics near the boundary.
#[test]
fn criterion_14_kernel_asymptotics() {
    for &a in &[-1.0, 0.0, 0.5] {
        let mut products = Vec::new();
        for &re in &[0.6, 0.55, 0.525, 0.5125] {
            let kn = spaces::kernel_norm(c(re, 0.0), a, 400_000).unwrap();
            products.push(kn.norm_sq * (2.0 * re - 1.0).powf(1.0 - a));
        }
        let max = products.iter().cloned().fold(f64::MIN, f64::max);
        let min = products.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            (max - min) / max < 0.25,
            "a={a}: boundary products vary by more than 25%: {products:?}"
        );
    }
    pass(14, "||k||^2 (2 Re s - 1)^(1-a) varies < 25% across Re s in {.6, .55, .525, .5125} for a in {-1, 0, 1/2}");
}

/// 15. Byte-determinism of the golden configs (and agreement with the
/// committed golden outputs where provided).
#[test]
fn criterion_15_determinism() {
    let config_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/configs");
    let expected_dir =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/expected");
    let mut entries: Vec<_> = std::fs::read_dir(&config_dir)
        .expect("golden configs present")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    assert!(!entries.is_empty());
    let mut compared = 0;
    for config_path in &entries {
        let cfg = ExperimentConfig::from_file(config_path).unwrap();
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let r1 = runner::run(&cfg, dir1.path()).unwrap();
        let _r2 = runner::run(&cfg, dir2.path()).unwrap();
        for out in &r1.outputs {
            let rel = out.strip_prefix(dir1.path()).unwrap();
            let a = std::fs::read(dir1.path().join(rel)).unwrap();
            let b = std::fs::read(dir2.path().join(rel)).unwrap();
            assert_eq!(a, b, "nondeterministic output {rel:?} from {config_path:?}");
            let golden = expected_dir.join(rel);
            if golden.exists() {
                let want = std::fs::read(&golden).unwrap();
                assert_eq!(
                    a, want,
                    "output {rel:?} deviates from the committed golden file"
                );
                compared += 1;
            }
        }
    }
    assert!(compared >= 4, "expected at least 4 committed golden files");
    pass(15, &format!("byte-identical outputs across two runs for {} golden configs; {compared} committed goldens matched", entries.len()));
}
