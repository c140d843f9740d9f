//! Worst-case inputs: profiles whose smoothed versions make the
//! deviation bounds tight, plus the oscillatory integral that controls
//! the two-harmonic lower bound.
//!
//! Throughout, the profile phase is theta = (pi/2) * beta_m, the kernel
//! phase at the first unaveraged harmonic, so that applying the
//! coefficient weight turns each profile into a member of the class
//! whose deviation is being bounded.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::psi::{psi_integral, PsiBetaWeight};
use crate::quad;
use crate::trig::{cos_norm, fourier_analyze, Evaluator, NormIndex, SampledFunction, TrigPolynomial, UniformGrid};

/// Conjugate-power profile: scale · |cos(m t + theta)|^{s'-1} · sign cos,
/// normalized so its L_s norm equals `e_value`. Its s-power mark is a
/// pure cosine, which makes zero its own best approximation of order m.
pub fn build_phi(m: usize, theta: f64, s: f64, e_value: f64) -> Result<Evaluator> {
    if m == 0 {
        return Err(Error::param("profile frequency m must be >= 1"));
    }
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::param(
            "conjugate-power profile needs 1 < s < inf; use the square wave at the endpoints",
        ));
    }
    if !(e_value > 0.0 && e_value.is_finite()) {
        return Err(Error::param(format!("e_value must be positive, got {e_value}")));
    }
    let s_conj = s / (s - 1.0);
    let cn = cos_norm(NormIndex::new(s_conj)?);
    Ok(Evaluator::PowerCos {
        m,
        phase: theta,
        power: s_conj - 1.0,
        scale: e_value * cn.powf(1.0 - s_conj),
    })
}

/// Square-wave profile e_value · sign cos(m t + theta).
pub fn build_phi0(m: usize, theta: f64, e_value: f64) -> Result<Evaluator> {
    if m == 0 {
        return Err(Error::param("profile frequency m must be >= 1"));
    }
    if !(e_value > 0.0 && e_value.is_finite()) {
        return Err(Error::param(format!("e_value must be positive, got {e_value}")));
    }
    Ok(Evaluator::SignCos {
        m,
        phase: theta,
        amplitude: e_value,
    })
}

/// The square wave mollified by a box kernel of half-width `delta`;
/// ramps must not overlap, so delta < pi / (2m).
pub fn build_phi_delta(m: usize, theta: f64, e_value: f64, delta: f64) -> Result<Evaluator> {
    if m == 0 {
        return Err(Error::param("profile frequency m must be >= 1"));
    }
    if !(e_value > 0.0 && e_value.is_finite()) {
        return Err(Error::param(format!("e_value must be positive, got {e_value}")));
    }
    if !(delta > 0.0 && delta < PI / (2.0 * m as f64)) {
        return Err(Error::param(format!(
            "ramp half-width must satisfy 0 < delta < pi/(2m) = {}, got {delta}",
            PI / (2.0 * m as f64)
        )));
    }
    Ok(Evaluator::RampCos {
        m,
        phase: theta,
        amplitude: e_value,
        delta,
    })
}

/// Mollification width that keeps the smoothing error one decay step
/// below the leading term of the bound at (n, p).
pub fn default_delta(w: &PsiBetaWeight, n: usize, p: usize) -> Result<f64> {
    if p == 0 || p > n {
        return Err(Error::param(format!("need 1 <= p <= n, got n={n}, p={p}")));
    }
    let m = n - p + 1;
    if m + 1 > w.k_max() {
        return Err(Error::param(format!(
            "default width needs psi through {} but the table ends at {}",
            m + 1,
            w.k_max()
        )));
    }
    let ratio = w.psi(m + 1) / w.psi(m);
    Ok(0.5 * ratio * ratio / m as f64)
}

/// Phase mismatch between the harmonics m and m+1 after the square
/// wave's argument is rescaled from m t to (m+1) t.
pub fn alpha_offset(w: &PsiBetaWeight, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("frequency m must be >= 1"));
    }
    if m + 1 > w.k_max() {
        return Err(Error::param(format!(
            "phase offset needs beta through {} but the table ends at {}",
            m + 1,
            w.k_max()
        )));
    }
    Ok(w.theta(m + 1) - (m as f64 + 1.0) / m as f64 * w.theta(m))
}

/// I(gamma, alpha) = integral of |cos(m t) + 2 gamma cos((m+1) t + alpha)|
/// over the period, evaluated segment-exactly between the integrand's
/// sign changes. Duality against sign cos(m t) forces I >= 4.
pub fn telyakovskii_integral(m: usize, gamma: f64, alpha: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("frequency m must be >= 1"));
    }
    if !gamma.is_finite() || !alpha.is_finite() {
        return Err(Error::param("gamma and alpha must be finite"));
    }
    let mf = m as f64;
    let g = |t: f64| (mf * t).cos() + 2.0 * gamma * (((mf + 1.0) * t) + alpha).cos();
    let prim = |t: f64| (mf * t).sin() / mf + 2.0 * gamma * (((mf + 1.0) * t) + alpha).sin() / (mf + 1.0);
    let scan = 4096usize.max(64 * (m + 1));
    let mut cuts = quad::sign_changes(&mut |t| g(t), 0.0, 2.0 * PI, scan);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &z in cuts.iter().chain(std::iter::once(&(2.0 * PI))) {
        if z > prev {
            acc += (prim(z) - prim(prev)).abs();
            prev = z;
        }
    }
    Ok(acc)
}

/// Exact spectrum of the square wave through `k_max`: harmonics only at
/// odd multiples of m, the j-th carrying amplitude 4 e / (pi j).
pub fn phi0_spectrum(m: usize, theta: f64, e_value: f64, k_max: usize) -> TrigPolynomial {
    let mut out = TrigPolynomial::zero(k_max);
    let mut j = 1usize;
    while j * m <= k_max {
        let amp = e_value * 4.0 / (PI * j as f64) * if j % 4 == 1 { 1.0 } else { -1.0 };
        let (sn, cs) = (j as f64 * theta).sin_cos();
        out.set(j * m, amp * cs, -amp * sn);
        j += 2;
    }
    out
}

/// Spectrum of the mollified square wave: each harmonic k of the square
/// wave picks up the box-kernel factor sin(k delta)/(k delta).
pub fn phi_delta_spectrum(
    m: usize,
    theta: f64,
    e_value: f64,
    delta: f64,
    k_max: usize,
) -> TrigPolynomial {
    let mut out = phi0_spectrum(m, theta, e_value, k_max);
    for k in 1..=k_max {
        let kd = k as f64 * delta;
        let damp = if kd == 0.0 { 1.0 } else { kd.sin() / kd };
        out.set(k, out.a(k) * damp, out.b(k) * damp);
    }
    out.trimmed()
}

/// Member of the smoothness class generated by a profile: sample it,
/// read off its spectrum, and apply the coefficient weight.
pub fn member_from_profile(
    phi: &Evaluator,
    w: &PsiBetaWeight,
    grid: UniformGrid,
) -> Result<TrigPolynomial> {
    let sampled = SampledFunction::from_evaluator(phi.clone(), grid);
    let spec = fourier_analyze(&sampled, w.k_max())?;
    psi_integral(&spec, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::best_approx::verify_zero_best;
    use crate::psi::{make_psi, BetaSpec, PsiFamily};
    use crate::trig::norm;

    fn sample(ev: &Evaluator, len: usize) -> SampledFunction {
        SampledFunction::from_evaluator(ev.clone(), UniformGrid::new(len).unwrap())
    }

    #[test]
    fn conjugate_profile_has_requested_norm() {
        let e = 0.37;
        for (s, tol) in [(1.5, 1e-10), (2.0, 1e-12), (3.0, 1e-9), (4.0, 1e-7)] {
            let phi = build_phi(3, 0.4, s, e).unwrap();
            let got = norm(&sample(&phi, 4096), NormIndex::new(s).unwrap());
            assert!(
                (got - e).abs() < tol * e.max(1.0),
                "s={s}: |phi|_s = {got}, want {e}"
            );
        }
    }

    #[test]
    fn conjugate_profile_at_s2_is_plain_cosine() {
        let e = 1.3;
        let phi = build_phi(4, -0.9, 2.0, e).unwrap();
        let amp = e / PI.sqrt();
        for t in [0.0f64, 0.3, 1.1, 2.9, 4.4, 6.1] {
            let want = amp * (4.0 * t - 0.9).cos();
            assert!((phi.eval(t) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn conjugate_profile_is_zero_best() {
        let phi = build_phi(3, 0.25, 1.5, 0.8).unwrap();
        assert!(verify_zero_best(&sample(&phi, 4096), 3, 1.5).unwrap());
        // and remains so at the larger order matching its frequency gap
        assert!(!verify_zero_best(&sample(&phi, 4096), 4, 1.5).unwrap());
    }

    #[test]
    fn profile_builders_reject_bad_parameters() {
        assert!(build_phi(0, 0.0, 2.0, 1.0).is_err());
        assert!(build_phi(3, 0.0, 1.0, 1.0).is_err());
        assert!(build_phi(3, 0.0, 2.0, 0.0).is_err());
        assert!(build_phi0(3, 0.0, -1.0).is_err());
        assert!(build_phi_delta(3, 0.0, 1.0, PI / 6.0).is_err());
        assert!(build_phi_delta(3, 0.0, 1.0, 0.0).is_err());
        assert!(build_phi_delta(3, 0.0, 1.0, 0.99 * PI / 6.0).is_ok());
    }

    /// Exact Fourier coefficient of the square wave by summing the
    /// antiderivative over its constancy segments.
    fn square_wave_coeff(m: usize, theta: f64, e: f64, k: usize) -> (f64, f64) {
        let ev = Evaluator::SignCos {
            m,
            phase: theta,
            amplitude: e,
        };
        let mut cuts = ev.breakpoints();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let kf = k as f64;
        let mut a = 0.0;
        let mut b = 0.0;
        let mut prev = 0.0;
        for &z in cuts.iter().chain(std::iter::once(&(2.0 * PI))) {
            if z <= prev {
                continue;
            }
            let mid = 0.5 * (prev + z);
            let sgn = ev.eval(mid);
            if k == 0 {
                a += sgn * (z - prev);
            } else {
                a += sgn * ((kf * z).sin() - (kf * prev).sin()) / kf;
                b += sgn * (-(kf * z).cos() + (kf * prev).cos()) / kf;
            }
            prev = z;
        }
        (a / PI, b / PI)
    }

    #[test]
    fn square_wave_spectrum_matches_segment_integrals() {
        let (m, theta, e) = (2usize, 0.7, 1.4);
        let spec = phi0_spectrum(m, theta, e, 11);
        for k in 0..=11usize {
            let (a, b) = square_wave_coeff(m, theta, e, k);
            assert!(
                (spec.a(k) - a).abs() < 1e-12 && (spec.b(k) - b).abs() < 1e-12,
                "k={k}: ({}, {}) vs ({a}, {b})",
                spec.a(k),
                spec.b(k)
            );
        }
    }

    #[test]
    fn ramp_spectrum_matches_breakpoint_quadrature() {
        let (m, theta, e, delta) = (3usize, -0.4, 0.9, 0.08);
        let ev = build_phi_delta(m, theta, e, delta).unwrap();
        let spec = phi_delta_spectrum(m, theta, e, delta, 10);
        let cuts = ev.breakpoints();
        for k in [0usize, 2, 3, 9] {
            let kf = k as f64;
            let a = quad::integrate_with_breakpoints(
                &mut |t| ev.eval(t) * (kf * t).cos(),
                0.0,
                2.0 * PI,
                &cuts,
            ) / PI;
            let b = quad::integrate_with_breakpoints(
                &mut |t| ev.eval(t) * (kf * t).sin(),
                0.0,
                2.0 * PI,
                &cuts,
            ) / PI;
            assert!(
                (spec.a(k) - a).abs() < 1e-12 && (spec.b(k) - b).abs() < 1e-12,
                "k={k}: ({}, {}) vs ({a}, {b})",
                spec.a(k),
                spec.b(k)
            );
        }
    }

    #[test]
    fn mollification_cost_in_l1_is_linear_in_width() {
        let (m, theta, e, delta) = (3usize, 0.6, 1.2, 0.05);
        let phi0 = build_phi0(m, theta, e).unwrap();
        let phid = build_phi_delta(m, theta, e, delta).unwrap();
        let mut cuts = phid.breakpoints();
        cuts.extend(phi0.breakpoints());
        let dist = quad::integrate_with_breakpoints(
            &mut |t| (phid.eval(t) - phi0.eval(t)).abs(),
            0.0,
            2.0 * PI,
            &cuts,
        );
        let want = 2.0 * m as f64 * delta * e;
        assert!((dist - want).abs() < 1e-10, "{dist} vs {want}");
    }

    #[test]
    fn oscillatory_integral_reference_values() {
        for m in [1usize, 3, 7] {
            for alpha in [0.0, 1.1] {
                let v = telyakovskii_integral(m, 0.0, alpha).unwrap();
                assert!((v - 4.0).abs() < 1e-12, "m={m}: {v}");
            }
        }
        // pure second harmonic: integrand reduces to |2 gamma cos(..)|
        let only_second = telyakovskii_integral(1, 0.0, 0.0).unwrap();
        assert!((only_second - 4.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integral_never_dips_below_duality_bound() {
        for m in [2usize, 3, 6] {
            for &gamma in &[0.02, 0.1, 0.35, 1.0] {
                for i in 0..8 {
                    let alpha = i as f64 * PI / 4.0;
                    let v = telyakovskii_integral(m, gamma, alpha).unwrap();
                    assert!(v >= 4.0 - 1e-9, "m={m} gamma={gamma} alpha={alpha}: {v}");
                    let excess = (v - 4.0) / (gamma * gamma);
                    assert!(excess <= 20.0, "quadratic excess {excess}");
                }
            }
        }
    }

    #[test]
    fn default_width_fits_between_the_jumps() {
        for family in [PsiFamily::QPowKSquared(0.5), PsiFamily::InverseFactorial] {
            let w = make_psi(family, 16).unwrap();
            for (n, p) in [(6usize, 2usize), (4, 1), (9, 3)] {
                let d = default_delta(&w, n, p).unwrap();
                let m = n - p + 1;
                assert!(d > 0.0 && d < PI / (2.0 * m as f64));
            }
        }
    }

    #[test]
    fn phase_offset_closed_forms() {
        let w = make_psi(PsiFamily::QPowKSquared(0.5), 12).unwrap();
        assert_eq!(alpha_offset(&w, 4).unwrap(), 0.0);

        let alt = w.clone().with_beta(&BetaSpec::Alternating).unwrap();
        // alternating spec: beta_4 = 1, beta_5 = 0
        let m = 4usize;
        let want = alt.theta(5) - 1.25 * alt.theta(4);
        assert_eq!(alpha_offset(&alt, m).unwrap(), want);
        assert!(alpha_offset(&alt, 12).is_err());
    }

    #[test]
    fn weighting_a_pure_profile_rotates_out_the_phase() {
        let w = make_psi(PsiFamily::QPowKSquared(0.5), 8)
            .unwrap()
            .with_beta(&BetaSpec::Alternating)
            .unwrap();
        let m = 3usize;
        let amp = 0.7;
        let mut phi = TrigPolynomial::zero(m);
        let (sn, cs) = w.theta(m).sin_cos();
        phi.set(m, amp * cs, -amp * sn);
        let f = member_from_profile(
            &Evaluator::Trig(phi),
            &w,
            UniformGrid::new(256).unwrap(),
        )
        .unwrap();
        for k in 0..=w.k_max().min(f.order()) {
            if k == m {
                assert!((f.a(k) - w.psi(m) * amp).abs() < 1e-12);
                assert!(f.b(k).abs() < 1e-12);
            } else {
                assert!(f.amplitude(k) < 1e-12);
            }
        }
    }
}
