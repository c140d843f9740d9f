//! Vallée Poussin averages of Fourier series, their interpolation
//! analogs, and computable deviation bounds over classes of smooth
//! periodic functions defined by a coefficient weight and a phase shift.
//!
//! The crate is organized bottom-up:
//!
//! * [`trig`]: polynomials, grids, norms, partial sums and the averages;
//! * [`interp`]: the discrete (interpolation) counterparts on 2n-1 nodes;
//! * [`psi`]: coefficient weights, kernels, and the weighted tail sums
//!   that appear on the right-hand side of the deviation bounds;
//! * [`best_approx`]: best-approximation solvers with certificates;
//! * [`extremal`]: worst-case inputs that make the bounds tight;
//! * [`harness`]: bound evaluation, parameter sweeps, verification;
//! * [`config`] / [`report`]: run descriptions and row serialization.

pub mod best_approx;
pub mod config;
pub mod error;
pub mod extremal;
pub mod harness;
pub mod interp;
pub mod psi;
pub mod quad;
pub mod trig;
pub mod report;

pub use best_approx::{best_approx, best_approx_c, best_approx_l2, best_approx_ls, ApproxResult, Certificate};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use harness::{
    bound_rhs, default_plan, run_case, sweep, verify_suite, BoundBreakdown, CaseSpec, CheckResult,
    DeviationReport, PhiSpec, SweepRow, Theorem, Tolerances, VerifyOptions, VerifySummary,
    CHECK_NAMES, DEFAULT_SEED,
};
pub use psi::{BetaSpec, PsiBetaWeight, PsiFamily, VPProfile};
pub use report::{write_csv, write_json};
pub use trig::{NormIndex, SampledFunction, TrigPolynomial, UniformGrid};
