//! Fixtures shared by the benchmark targets: one weight table and a couple
//! of deterministic inputs, so every target measures the same workload.

use poussin::harness::random_poly;
use poussin::psi::{make_psi, psi_integral, BetaSpec, PsiBetaWeight, PsiFamily};
use poussin::TrigPolynomial;

pub fn weight() -> PsiBetaWeight {
    make_psi(PsiFamily::QPowKSquared(0.5), 12)
        .unwrap()
        .with_beta(&BetaSpec::Alternating)
        .unwrap()
}

pub fn profile(order: usize) -> TrigPolynomial {
    random_poly(order, 1729)
}

/// Class member whose weighted derivative is `profile(order)`.
pub fn member(w: &PsiBetaWeight, order: usize) -> TrigPolynomial {
    psi_integral(&profile(order), w).unwrap()
}
