//! Rapidly decaying spectral weights ψ(k) with phase offsets β̄, the kernels
//! they generate, and the taper-weighted tail sums that drive every bound.
//!
//! A weight sequence is admissible when ψ(k+1)/ψ(k) → 0; numerically we
//! certify a finite surrogate: the ratio at the stored tail must fall below a
//! threshold and the last few ratios must be non-increasing. This keeps the
//! truncation error of every kernel below an explicit geometric bound.

use crate::error::{Error, Result};
use crate::trig::{eval_poly, SampledFunction, TrigPolynomial, UniformGrid};
use std::f64::consts::PI;

const D0_RATIO_THRESHOLD: f64 = 0.2;
const D0_MONOTONE_WINDOW: usize = 4;
/// ψ values below this are considered numerically dead when sizing K_max.
const PSI_FLOOR: f64 = 1e-300;

/// Weight families with guaranteed superlinear ratio decay.
#[derive(Clone, Debug, PartialEq)]
pub enum PsiFamily {
    /// ψ(k) = q^{k²}, 0 < q < 1; ratios q^{2k+1}.
    QPowKSquared(f64),
    /// ψ(k) = 1/k!; ratios 1/(k+1).
    InverseFactorial,
    /// User-supplied positive values for k = 1, 2, …
    Explicit(Vec<f64>),
}

impl PsiFamily {
    pub fn value(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::param("weights are indexed from k = 1"));
        }
        match self {
            PsiFamily::QPowKSquared(q) => {
                if !(*q > 0.0 && *q < 1.0) {
                    return Err(Error::param(format!("need 0 < q < 1, got {q}")));
                }
                let e = (k * k) as i32;
                Ok(q.powi(e))
            }
            PsiFamily::InverseFactorial => {
                let mut v = 1.0f64;
                for j in 1..=k {
                    v /= j as f64;
                }
                Ok(v)
            }
            PsiFamily::Explicit(vals) => vals.get(k - 1).copied().ok_or_else(|| {
                Error::param(format!("explicit weight list has no entry for k = {k}"))
            }),
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            PsiFamily::QPowKSquared(q) => format!("q_pow_k_squared({q})"),
            PsiFamily::InverseFactorial => "inverse_factorial".into(),
            PsiFamily::Explicit(_) => "explicit".into(),
        }
    }
}

/// Phase sequence β̄.
#[derive(Clone, Debug, PartialEq)]
pub enum BetaSpec {
    Constant(f64),
    /// 0, 1, 0, 1, … starting at β₁ = 0.
    Alternating,
    Explicit(Vec<f64>),
}

impl BetaSpec {
    fn value(&self, k: usize) -> Result<f64> {
        match self {
            BetaSpec::Constant(b) => Ok(*b),
            BetaSpec::Alternating => Ok(((k - 1) % 2) as f64),
            BetaSpec::Explicit(vals) => vals.get(k - 1).copied().ok_or_else(|| {
                Error::param(format!("explicit beta list has no entry for k = {k}"))
            }),
        }
    }
}

/// Evidence that the stored weights behave like a rapidly-decaying sequence.
#[derive(Clone, Copy, Debug)]
pub struct D0Certificate {
    /// ψ(K_max)/ψ(K_max−1)
    pub tail_ratio: f64,
    pub threshold: f64,
    /// ratios non-increasing over the last window
    pub monotone_tail: bool,
}

/// Weights ψ(1..=K_max), phases β(1..=K_max), and a certified tail estimate.
#[derive(Clone, Debug)]
pub struct PsiBetaWeight {
    family: PsiFamily,
    psi: Vec<f64>,
    beta: Vec<f64>,
    /// suffix[k-1] = Σ_{j≥k} ψ(j), tail beyond K_max included
    suffix: Vec<f64>,
    tail_bound: f64,
    d0: D0Certificate,
}

/// Build and validate a weight table. Phases default to β ≡ 0; use
/// [`PsiBetaWeight::with_beta`] to change them.
pub fn make_psi(family: PsiFamily, k_max: usize) -> Result<PsiBetaWeight> {
    if k_max < D0_MONOTONE_WINDOW + 1 {
        return Err(Error::param(format!(
            "K_max must be at least {}, got {k_max}",
            D0_MONOTONE_WINDOW + 1
        )));
    }
    let mut psi = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let v = family.value(k)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::WeightRejected(format!("ψ({k}) = {v} is not positive")));
        }
        psi.push(v);
    }

    let ratio = |k: usize| psi[k] / psi[k - 1]; // ψ(k+1)/ψ(k), 0-based
    let tail_ratio = ratio(k_max - 1);
    let mut monotone = true;
    for k in (k_max - D0_MONOTONE_WINDOW)..(k_max - 1) {
        if ratio(k + 1) > ratio(k) * (1.0 + 1e-12) {
            monotone = false;
        }
    }
    let d0 = D0Certificate {
        tail_ratio,
        threshold: D0_RATIO_THRESHOLD,
        monotone_tail: monotone,
    };
    if tail_ratio >= D0_RATIO_THRESHOLD {
        return Err(Error::WeightRejected(format!(
            "tail ratio ψ(K)/ψ(K−1) = {tail_ratio:.3e} is not below {D0_RATIO_THRESHOLD}"
        )));
    }
    if !monotone {
        return Err(Error::WeightRejected(
            "ratio sequence is not non-increasing near the tail".into(),
        ));
    }

    // geometric tail: ψ(K+i) ≤ ψ(K)·r^i since ratios keep shrinking
    let tail_bound = psi[k_max - 1] * tail_ratio / (1.0 - tail_ratio);

    let mut suffix = vec![0.0; k_max];
    let mut acc = tail_bound;
    for k in (0..k_max).rev() {
        acc += psi[k];
        suffix[k] = acc;
    }

    Ok(PsiBetaWeight {
        family,
        psi,
        beta: vec![0.0; k_max],
        suffix,
        tail_bound,
        d0,
    })
}

/// Smallest K_max at which the family has decayed to 1e-30 of ψ(1), clamped
/// to [min_needed, the last index where ψ is still a normal float].
pub fn default_k_max(family: &PsiFamily, min_needed: usize) -> Result<usize> {
    let hard_cap = 64usize;
    let psi1 = family.value(1)?;
    let mut decayed = hard_cap;
    let mut cap = hard_cap;
    for k in 2..=hard_cap {
        let v = family.value(k);
        let alive = matches!(&v, Ok(x) if *x >= PSI_FLOOR);
        if !alive {
            cap = k - 1;
            break;
        }
        if decayed == hard_cap && v.unwrap() < 1e-30 * psi1 {
            decayed = k;
        }
    }
    let k = decayed.max(min_needed).max(D0_MONOTONE_WINDOW + 1);
    if k > cap {
        return Err(Error::param(format!(
            "family {} cannot support K_max = {k} (weights underflow past {cap})",
            family.label()
        )));
    }
    Ok(k)
}

impl PsiBetaWeight {
    pub fn k_max(&self) -> usize {
        self.psi.len()
    }

    pub fn family(&self) -> &PsiFamily {
        &self.family
    }

    /// ψ(k) for 1 ≤ k ≤ K_max.
    pub fn psi(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.psi.len(), "ψ index {k} out of range");
        self.psi[k - 1]
    }

    pub fn beta(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.beta.len(), "β index {k} out of range");
        self.beta[k - 1]
    }

    /// Phase rotation β_k·π/2 of harmonic k.
    pub fn theta(&self, k: usize) -> f64 {
        self.beta(k) * PI / 2.0
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn d0_certificate(&self) -> D0Certificate {
        self.d0
    }

    /// Σ_{j≥k} ψ(j) including the beyond-table estimate; for k = K_max+1
    /// this is just the tail bound.
    pub fn tail_from(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.psi.len() + 1);
        if k == self.psi.len() + 1 {
            self.tail_bound
        } else {
            self.suffix[k - 1]
        }
    }

    pub fn with_beta(mut self, spec: &BetaSpec) -> Result<Self> {
        for k in 1..=self.psi.len() {
            let b = spec.value(k)?;
            if !b.is_finite() {
                return Err(Error::param(format!("β({k}) is not finite")));
            }
            self.beta[k - 1] = b;
        }
        Ok(self)
    }
}

/// Taper profile of the degree-(n,p) average on its tail side: τ(k) ramps
/// from 1/p at k = n−p+1 up to 1 at k = n and stays there.
#[derive(Clone, Copy, Debug)]
pub struct VPProfile {
    pub n: usize,
    pub p: usize,
}

impl VPProfile {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 || p > n {
            return Err(Error::param(format!("need 1 <= p <= n, got n={n}, p={p}")));
        }
        Ok(VPProfile { n, p })
    }

    /// τ(k): complement of the averaging multiplier. Defined for k ≥ n−p+1.
    pub fn tau(&self, k: usize) -> f64 {
        assert!(
            k + self.p > self.n,
            "τ is defined for k ≥ n−p+1 (n={}, p={}, k={k})",
            self.n,
            self.p
        );
        if k >= self.n {
            1.0
        } else {
            1.0 - (self.n - k) as f64 / self.p as f64
        }
    }
}

/// Generating kernel Σ_k ψ(k)·cos(kt − β_k·π/2) truncated at K_max.
pub fn kernel_full(w: &PsiBetaWeight, g: &UniformGrid) -> Result<SampledFunction> {
    kernel_from(w, g, 1, None)
}

/// Tail kernel Σ_{k≥n−p+j} τ(k)·ψ(k)·cos(kt − β_k·π/2).
pub fn kernel_truncated(
    w: &PsiBetaWeight,
    n: usize,
    p: usize,
    j: usize,
    g: &UniformGrid,
) -> Result<SampledFunction> {
    let profile = VPProfile::new(n, p)?;
    if j == 0 {
        return Err(Error::param("tail index j starts at 1"));
    }
    let start = n - p + j;
    if start > w.k_max() {
        return Err(Error::param(format!(
            "tail start n−p+j = {start} exceeds K_max = {}",
            w.k_max()
        )));
    }
    kernel_from(w, g, start, Some(profile))
}

fn kernel_from(
    w: &PsiBetaWeight,
    g: &UniformGrid,
    start: usize,
    profile: Option<VPProfile>,
) -> Result<SampledFunction> {
    let k_max = w.k_max();
    if g.len() < 2 * k_max + 1 {
        return Err(Error::GridTooCoarse {
            needed: 2 * k_max + 1,
            actual: g.len(),
        });
    }
    let mut p = TrigPolynomial::zero(k_max);
    for k in start..=k_max {
        let weight = match profile {
            Some(pr) => pr.tau(k) * w.psi(k),
            None => w.psi(k),
        };
        let (s, c) = w.theta(k).sin_cos();
        // cos(kt − θ) = cosθ·cos kt + sinθ·sin kt
        p.set(k, weight * c, weight * s);
    }
    Ok(eval_poly(&p, g))
}

/// Transform that strips the weight: harmonic k is scaled by 1/ψ(k) and its
/// phase advanced by β_k·π/2. The constant term is dropped.
pub fn psi_derivative(f: &TrigPolynomial, w: &PsiBetaWeight) -> Result<TrigPolynomial> {
    if f.order() > w.k_max() {
        return Err(Error::param(format!(
            "order {} exceeds the weight table (K_max = {})",
            f.order(),
            w.k_max()
        )));
    }
    let mut out = TrigPolynomial::zero(f.order());
    for k in 1..=f.order() {
        let (s, c) = w.theta(k).sin_cos();
        let (a, b) = (f.a(k), f.b(k));
        // rotation by −θ then scaling
        out.set(
            k,
            (a * c + b * s) / w.psi(k),
            (b * c - a * s) / w.psi(k),
        );
    }
    Ok(out)
}

/// Inverse transform: harmonic k scaled by ψ(k), phase retarded by β_k·π/2.
/// A constant term is carried through unchanged.
pub fn psi_integral(phi: &TrigPolynomial, w: &PsiBetaWeight) -> Result<TrigPolynomial> {
    if phi.order() > w.k_max() {
        return Err(Error::param(format!(
            "order {} exceeds the weight table (K_max = {})",
            phi.order(),
            w.k_max()
        )));
    }
    let mut out = TrigPolynomial::zero(phi.order());
    out.set(0, phi.a(0), 0.0);
    for k in 1..=phi.order() {
        let (s, c) = w.theta(k).sin_cos();
        let (a, b) = (phi.a(k), phi.b(k));
        out.set(
            k,
            w.psi(k) * (a * c - b * s),
            w.psi(k) * (b * c + a * s),
        );
    }
    Ok(out)
}

/// Tail sum Σ_{k≥n−p+j} τ(k)·ψ(k) together with its closed-form cap.
#[derive(Clone, Copy, Debug)]
pub struct TauSum {
    pub value: f64,
    /// min{Σ ψ(k), (1/p)·Σ (k−n+p)·ψ(k)} over the same range; always ≥ value.
    pub min_bound: f64,
}

/// Direct τ-weighted summation over the stored range plus the certified tail.
pub fn tau_sum(w: &PsiBetaWeight, n: usize, p: usize, j: usize) -> Result<TauSum> {
    let profile = VPProfile::new(n, p)?;
    let start = start_index(w, n, p, j)?;

    let mut value = 0.0;
    for k in start..=w.k_max() {
        value += profile.tau(k) * w.psi(k);
    }
    value += w.tail_bound(); // τ ≡ 1 beyond the table

    // Unweighted branch of the cap.
    let plain = w.tail_from(start);

    // Linear-weight branch: (1/p)·Σ (k−n+p)·ψ(k) with a rigorous tail.
    let mut weighted = 0.0;
    for k in start..=w.k_max() {
        weighted += (k + p - n) as f64 * w.psi(k);
    }
    let r = w.d0_certificate().tail_ratio;
    let k_end = w.k_max();
    // Σ_{i≥1} (K+i−n+p)·ψ(K)·r^i = ψ(K)·[(K−n+p)·r/(1−r) + r/(1−r)²]
    weighted += w.psi(k_end)
        * ((k_end + p - n) as f64 * r / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)));
    weighted /= p as f64;

    Ok(TauSum {
        value,
        min_bound: plain.min(weighted),
    })
}

/// The same tail sum evaluated through its split form: the ramp terms
/// (k−n+p)/p·ψ(k) up to k = n−1, then the plain suffix Σ_{k≥max(start,n)} ψ.
pub fn tau_sum_piecewise(w: &PsiBetaWeight, n: usize, p: usize, j: usize) -> Result<f64> {
    VPProfile::new(n, p)?;
    let start = start_index(w, n, p, j)?;
    let mut acc = 0.0;
    for k in start..n {
        acc += (k + p - n) as f64 / p as f64 * w.psi(k);
    }
    Ok(acc + w.tail_from(start.max(n)))
}

fn start_index(w: &PsiBetaWeight, n: usize, p: usize, j: usize) -> Result<usize> {
    if j == 0 {
        return Err(Error::param("tail index j starts at 1"));
    }
    let start = n + j - p;
    if n + j < p + 1 {
        return Err(Error::param(format!("n−p+j = {}−{}+{} is below 1", n, p, j)));
    }
    if start > w.k_max() {
        return Err(Error::param(format!(
            "tail start n−p+j = {start} exceeds K_max = {}",
            w.k_max()
        )));
    }
    Ok(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::{fourier_analyze, NormIndex};
    use proptest::prelude::*;

    fn half_weights(k_max: usize) -> PsiBetaWeight {
        make_psi(PsiFamily::QPowKSquared(0.5), k_max).unwrap()
    }

    #[test]
    fn family_values_and_ratios() {
        let w = half_weights(12);
        assert_eq!(w.psi(1), 0.5);
        assert_eq!(w.psi(2), 0.0625);
        for k in 1..12 {
            let ratio = w.psi(k + 1) / w.psi(k);
            assert!((ratio - 2f64.powi(-(2 * k as i32 + 1))).abs() < 1e-18);
        }
        let wf = make_psi(PsiFamily::InverseFactorial, 10).unwrap();
        assert_eq!(wf.psi(1), 1.0);
        assert_eq!(wf.psi(4), 1.0 / 24.0);
    }

    #[test]
    fn slow_decay_is_rejected() {
        let vals: Vec<f64> = (1..=12).map(|k| 1.0 / (k * k) as f64).collect();
        match make_psi(PsiFamily::Explicit(vals), 12) {
            Err(Error::WeightRejected(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let w = half_weights(8);
        // true tail Σ_{k>8} 2^{-k²} is utterly dominated by ψ(8)·r/(1−r)
        let true_tail: f64 = (9..=12).map(|k| 2f64.powi(-((k * k) as i32))).sum();
        assert!(w.tail_bound() >= true_tail);
        assert!(w.tail_bound() >= w.psi(8) * (w.psi(8) / w.psi(7)) / (1.0 - w.psi(8) / w.psi(7)));
    }

    #[test]
    fn default_k_max_tracks_decay_and_underflow() {
        let fam = PsiFamily::QPowKSquared(0.5);
        // 2^{-k²+1} < 1e-30 first holds at k = 11
        assert_eq!(default_k_max(&fam, 1).unwrap(), 11);
        assert_eq!(default_k_max(&fam, 24).unwrap(), 24);
        // past k = 31 the weights fall below the normal-float floor
        assert!(default_k_max(&fam, 40).is_err());
        assert_eq!(default_k_max(&PsiFamily::InverseFactorial, 1).unwrap(), 29);
    }

    #[test]
    fn kernel_peak_at_origin() {
        let w = half_weights(12);
        let g = UniformGrid::new(128).unwrap();
        let kern = kernel_full(&w, &g).unwrap();
        let direct: f64 = (1..=12).map(|k| w.psi(k)).sum();
        assert!((kern.values[0] - direct).abs() < 1e-15);
        assert!((direct - 0.5644684136059368).abs() < 1e-12);
    }

    #[test]
    fn truncated_kernel_leading_coefficient() {
        // start k = n−p+j = 4 carries τ = 2/3
        let w = half_weights(12);
        let g = UniformGrid::new(128).unwrap();
        let kern = kernel_truncated(&w, 5, 3, 2, &g).unwrap();
        let spec = fourier_analyze(&kern, 12).unwrap();
        assert!((spec.a(4) - (2.0 / 3.0) * w.psi(4)).abs() < 1e-18);
        assert!(spec.a(3).abs() < 1e-18);
        assert!((spec.a(5) - w.psi(5)).abs() < 1e-18);
    }

    #[test]
    fn kernel_symmetry_under_zero_phases() {
        // β ≡ 0 makes the kernel even: Ψ(t) = Ψ(2π − t)
        let w = half_weights(10);
        let g = UniformGrid::new(256).unwrap();
        let kern = kernel_full(&w, &g).unwrap();
        let m = g.len();
        for j in 1..m / 2 {
            assert!((kern.values[j] - kern.values[m - j]).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_normalizes_shifted_harmonic() {
        // f = ψ(k)·cos(kx − β_k·π/2) maps to plain cos kx
        let w = half_weights(8).with_beta(&BetaSpec::Constant(1.0)).unwrap();
        let k = 5;
        let (s, c) = w.theta(k).sin_cos();
        let mut f = TrigPolynomial::zero(k);
        f.set(k, w.psi(k) * c, w.psi(k) * s);
        let d = psi_derivative(&f, &w).unwrap();
        assert!((d.a(k) - 1.0).abs() < 1e-15);
        assert!(d.b(k).abs() < 1e-15);
    }

    #[test]
    fn derivative_advances_phase() {
        // cos kx maps to (1/ψ(k))·cos(kx + β_k·π/2)
        let w = half_weights(8).with_beta(&BetaSpec::Alternating).unwrap();
        let k = 2; // β₂ = 1
        let d = psi_derivative(&TrigPolynomial::cosine(k, 1.0), &w).unwrap();
        let g = UniformGrid::new(64).unwrap();
        for x in g.points() {
            let want = (k as f64 * x + w.theta(k)).cos() / w.psi(k);
            assert!((d.eval(x) - want).abs() * w.psi(k) < 1e-13);
        }
    }

    #[test]
    fn integral_inverts_derivative_up_to_mean() {
        let w = half_weights(10).with_beta(&BetaSpec::Alternating).unwrap();
        let mut f = TrigPolynomial::zero(8);
        f.set(0, 1.4, 0.0);
        for k in 1..=8 {
            f.set(k, (0.3 * k as f64).cos(), (0.7 * k as f64).sin());
        }
        let back = psi_integral(&psi_derivative(&f, &w).unwrap(), &w).unwrap();
        assert!(back.a(0).abs() < 1e-15); // mean dropped
        for k in 1..=8 {
            assert!((back.a(k) - f.a(k)).abs() < 1e-13);
            assert!((back.b(k) - f.b(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn integral_matches_kernel_convolution() {
        // J φ(x) = (1/π)·∫ φ(x−t)·Ψ(t) dt for zero-mean φ
        let w = half_weights(8).with_beta(&BetaSpec::Alternating).unwrap();
        let mut phi = TrigPolynomial::zero(5);
        phi.set(3, 1.0, 0.0);
        phi.set(5, 0.0, 1.0);
        let jf = psi_integral(&phi, &w).unwrap();
        let g = UniformGrid::new(64).unwrap();
        let kern = kernel_full(&w, &g).unwrap();
        for x in [0.0, 0.7, 2.9, 5.5] {
            let mut acc = 0.0;
            for (j, t) in g.points().enumerate() {
                acc += phi.eval(x - t) * kern.values[j];
            }
            acc *= 2.0 / g.len() as f64; // (1/π)·(2π/M)
            assert!((acc - jf.eval(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn tau_profile_values() {
        let pr = VPProfile::new(5, 3).unwrap();
        assert!((pr.tau(3) - 1.0 / 3.0).abs() < 3e-16);
        assert!((pr.tau(4) - 2.0 / 3.0).abs() < 3e-16);
        assert_eq!(pr.tau(5), 1.0);
        assert_eq!(pr.tau(9), 1.0);
    }

    #[test]
    fn tau_complements_averaging_multiplier() {
        use crate::trig::vp_multipliers;
        for n in 2..10usize {
            for p in 1..=n {
                let lambda = vp_multipliers(n, p).unwrap();
                let pr = VPProfile::new(n, p).unwrap();
                for k in (n - p + 1)..n {
                    assert!((lambda[k] + pr.tau(k) - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn tau_sum_reference_value() {
        // n=5, p=3, j=2: (2/3)·2^{-16} + 2^{-25} + 2^{-36} + …
        let w = half_weights(12);
        let ts = tau_sum(&w, 5, 3, 2).unwrap();
        let direct = 2.0 / 3.0 * 2f64.powi(-16)
            + 2f64.powi(-25)
            + 2f64.powi(-36)
            + 2f64.powi(-49)
            + 2f64.powi(-64);
        assert!((ts.value - direct).abs() < 1e-18);
        assert!(ts.value <= ts.min_bound);
    }

    #[test]
    fn tau_sum_all_ones_when_ramp_is_skipped() {
        // p ≤ j means the start index is past the ramp
        let w = half_weights(12);
        let ts = tau_sum(&w, 6, 2, 2).unwrap();
        assert!((ts.value - w.tail_from(6)).abs() < 1e-20);
    }

    #[test]
    fn split_form_matches_direct_summation() {
        let w = half_weights(20);
        let wf = make_psi(PsiFamily::InverseFactorial, 20).unwrap();
        for n in 1..=12usize {
            for p in 1..=n {
                for j in 1..=3usize {
                    if n + j < p + 1 || n + j - p > 20 {
                        continue;
                    }
                    for table in [&w, &wf] {
                        let direct = tau_sum(table, n, p, j).unwrap().value;
                        let split = tau_sum_piecewise(table, n, p, j).unwrap();
                        assert!(
                            (direct - split).abs() <= 1e-15,
                            "n={n} p={p} j={j}: {direct} vs {split}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_l2_norm_matches_coefficient_sum() {
        // ‖Ψ‖₂² = π·Σψ² for β ≡ 0
        let w = half_weights(10);
        let g = UniformGrid::new(256).unwrap();
        let kern = kernel_full(&w, &g).unwrap();
        let l2 = crate::trig::norm(&kern, NormIndex::new(2.0).unwrap());
        let want = (PI * (1..=10).map(|k| w.psi(k) * w.psi(k)).sum::<f64>()).sqrt();
        assert!((l2 - want).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn prop_integral_derivative_roundtrip(seed in 0u64..1_000_000, order in 1usize..10) {
            let w = half_weights(12).with_beta(&BetaSpec::Alternating).unwrap();
            let mut state = seed | 1;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let mut phi = TrigPolynomial::zero(order);
            for k in 1..=order {
                phi.set(k, next(), next());
            }
            let roundtrip = psi_derivative(&psi_integral(&phi, &w).unwrap(), &w).unwrap();
            for k in 1..=order {
                prop_assert!((roundtrip.a(k) - phi.a(k)).abs() < 1e-10);
                prop_assert!((roundtrip.b(k) - phi.b(k)).abs() < 1e-10);
            }
        }
    }
}
