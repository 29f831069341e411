//! Numerics for weighted mean counting functions of Dirichlet series and
//! for composition operators on weighted Hilbert spaces of Dirichlet series.
//!
//! The crate has five layers:
//!
//! - [`series`]: exact and truncated arithmetic on Dirichlet polynomials
//!   (evaluation, twisting by polytorus characters, truncated exponentials,
//!   composition with symbols `c0*s + phi`).
//! - [`zeros`]: certified localization of the solutions of `phi(s) = w` in
//!   rectangles via winding numbers, plus closed-form preimage lattices for
//!   periodic symbols `phi(s) = g(2^{-s})`.
//! - [`counting`]: the weighted mean counting functions
//!   `M_{phi,a}(w, sigma, T) = (pi/T) * sum (Re s)^a` over those solutions,
//!   their `T`- and `sigma`-limits, the Jessen function, the weight/Jessen
//!   identities relating them, polytorus averages, and a submean-value check.
//! - [`spaces`]: norms of the weighted spaces `D_a` (coefficient and
//!   Littlewood-Paley forms), reproducing kernels, zeta-like sums with their
//!   singular main terms, and the change-of-variables (Stanton) verification.
//! - [`operators`]: diagnostics for composition operators: a Schwarz-lemma
//!   constant, Littlewood-type bounds, boundedness/compactness ratio
//!   profiles, Nevanlinna counting on the disk, and half-strip transference.
//!
//! The `runner` module and the `dsc` binary expose every experiment as a
//! batch job driven by a JSON config, with CSV/JSON outputs that are
//! byte-deterministic for a fixed seed. Start with the `examples/`
//! directory: each file is a runnable demonstration of one capability.

pub mod counting;
pub mod operators;
pub mod primes;
pub mod quad;
pub mod runner;
pub mod series;
pub mod spaces;
pub mod special;
pub mod zeros;

use thiserror::Error;

/// Diagnostic channel gated by `DSC_LOG` (`error`, `info`, or `debug`);
/// library internals report non-fatal events (line nudges, resamples) here.
pub(crate) fn diag(msg: &str) {
    use std::sync::OnceLock;
    static LEVEL: OnceLock<u8> = OnceLock::new();
    let level = *LEVEL.get_or_init(|| match std::env::var("DSC_LOG").as_deref() {
        Ok("debug") => 2,
        Ok("info") => 1,
        _ => 0,
    });
    if level >= 2 {
        eprintln!("[dsc debug] {msg}");
    }
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// No admissible horizontal edge offset was found within the search
    /// budget; the requested clearance `delta` is too large.
    #[error("no-zero-free-edge: no admissible edge offset for delta = {delta:.3e}")]
    NoZeroFreeEdge { delta: f64 },

    /// The boundary integral would not settle within 0.25 of an integer.
    #[error("contour-unresolved: winding integral stuck at {raw:.6}")]
    ContourUnresolved { raw: f64 },

    #[error("symbol class violation: {0}")]
    SymbolClass(String),

    /// Counting functions are undefined at `w = phi(+infinity)`.
    #[error("target w coincides with phi(+infinity)")]
    TargetAtInfinity,

    /// A counting sum grew without bound; reported as a first-class outcome
    /// where the contract allows, an error where it does not.
    #[error("divergent: {0}")]
    Divergent(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
