//! Interpolation counterparts of the partial-sum averages: discrete Fourier
//! coefficients on the 2n−1 equispaced nodes, the interpolating polynomial,
//! and the taper-weighted interpolation average Ṽ_{n,p}.
//!
//! On 2n−1 nodes a frequency q folds onto the slot ±q mod (2n−1): the cosine
//! part lands with sign +1, the sine part flips sign when the representative
//! exceeds n−1. `alias` exposes the rule; the coefficient routines inherit it.

use crate::error::{Error, Result};
use crate::quad;
use crate::trig::{eval_poly, vp_multipliers, SampledFunction, TrigPolynomial, UniformGrid};
use std::f64::consts::PI;

/// Interpolation nodes x_j = 2πj/(2n−1), j = 0..2n−2.
pub fn interp_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let count = 2 * n - 1;
    Ok((0..count)
        .map(|j| 2.0 * PI * j as f64 / count as f64)
        .collect())
}

/// Where frequency q lands on the 2n−1 node set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alias {
    /// representative slot in 0..=n−1
    pub slot: usize,
    /// sign picked up by the sine component (+1 or −1)
    pub sin_sign: f64,
}

pub fn alias(q: usize, n: usize) -> Result<Alias> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let count = 2 * n - 1;
    let r = q % count;
    Ok(if r < n {
        Alias {
            slot: r,
            sin_sign: 1.0,
        }
    } else {
        Alias {
            slot: count - r,
            sin_sign: -1.0,
        }
    })
}

/// Discrete Fourier coefficients aₖ, bₖ on the node set, computed through
/// k = n. The k = n entries duplicate k = n−1 up to the sine sign flip and
/// are kept to expose the aliased edge.
#[derive(Clone, Debug)]
pub struct DiscreteSpectrum {
    pub n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl DiscreteSpectrum {
    pub fn a(&self, k: usize) -> f64 {
        self.a.get(k).copied().unwrap_or(0.0)
    }

    pub fn b(&self, k: usize) -> f64 {
        self.b.get(k).copied().unwrap_or(0.0)
    }
}

pub fn discrete_coeffs(samples: &[f64], n: usize) -> Result<DiscreteSpectrum> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let count = 2 * n - 1;
    if samples.len() != count {
        return Err(Error::param(format!(
            "need 2n−1 = {count} node samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("non-finite node sample"));
    }
    let scale = 2.0 / count as f64;
    let mut a = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for k in 0..=n {
        let mut ca = 0.0;
        let mut cb = 0.0;
        for (j, &v) in samples.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / count as f64;
            let (s, c) = (k as f64 * x).sin_cos();
            ca += v * c;
            cb += v * s;
        }
        a[k] = scale * ca;
        b[k] = if k > 0 { scale * cb } else { 0.0 };
    }
    Ok(DiscreteSpectrum { n, a, b })
}

/// The order-(n−1) polynomial matching the samples at every node.
pub fn interp_polynomial(spec: &DiscreteSpectrum) -> TrigPolynomial {
    let n = spec.n;
    let mut p = TrigPolynomial::zero(n - 1);
    for k in 0..n {
        p.set(k, spec.a(k), spec.b(k));
    }
    p
}

/// Ṽ_{n,p}: the averaging multipliers applied to discrete coefficients.
pub fn interp_vp_sum(spec: &DiscreteSpectrum, p: usize) -> Result<TrigPolynomial> {
    let n = spec.n;
    let lambda = vp_multipliers(n, p)?;
    let mut out = TrigPolynomial::zero(n - 1);
    for k in 0..n {
        out.set(k, lambda[k] * spec.a(k), lambda[k] * spec.b(k));
    }
    Ok(out)
}

/// Deviation ρ̃_{n,p}(f) = f − Ṽ_{n,p}(f) for spectral f, sampled on `g`,
/// together with its sup norm. Exact node sampling keeps the aliasing rule
/// honest, and the difference stays a polynomial so the sup is refined.
pub fn deviation_rho_tilde(
    f: &TrigPolynomial,
    n: usize,
    p: usize,
    g: &UniformGrid,
) -> Result<(SampledFunction, f64)> {
    if g.len() < 2 * f.order() + 1 {
        return Err(Error::GridTooCoarse {
            needed: 2 * f.order() + 1,
            actual: g.len(),
        });
    }
    let nodes = interp_nodes(n)?;
    let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
    let spec = discrete_coeffs(&samples, n)?;
    let vtilde = interp_vp_sum(&spec, p)?;
    let rho = f - &vtilde;
    let sf = eval_poly(&rho, g);
    let sup = crate::trig::norm(&sf, crate::trig::NormIndex::Infinity);
    Ok((sf, sup))
}

/// ρ̃ for a general pointwise-evaluable f. Without a closed form the sup is
/// refined by a local search around the grid argmax only.
pub fn deviation_rho_tilde_fn(
    f: &dyn Fn(f64) -> f64,
    n: usize,
    p: usize,
    g: &UniformGrid,
) -> Result<(SampledFunction, f64)> {
    let nodes = interp_nodes(n)?;
    let samples: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let spec = discrete_coeffs(&samples, n)?;
    let vtilde = interp_vp_sum(&spec, p)?;
    let values: Vec<f64> = g.points().map(|x| f(x) - vtilde.eval(x)).collect();
    let sf = SampledFunction::from_values(*g, values)?;
    let grid_max = sf.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let argmax = sf
        .values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
        .map(|(j, _)| j)
        .unwrap_or(0);
    let h = 2.0 * PI / g.len() as f64;
    let x0 = g.point(argmax);
    let mut resid = |x: f64| (f(x) - vtilde.eval(x)).abs();
    let sup = grid_max.max(quad::golden_max(&mut resid, x0 - h, x0 + h).1);
    Ok((sf, sup))
}

/// Convenience: the interpolation average of spectral f directly.
pub fn interp_vp_of_poly(f: &TrigPolynomial, n: usize, p: usize) -> Result<TrigPolynomial> {
    let nodes = interp_nodes(n)?;
    let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
    let spec = discrete_coeffs(&samples, n)?;
    interp_vp_sum(&spec, p)
}

/// ρ̃ − ρ = V_{n,p}(f) − Ṽ_{n,p}(f) for spectral f, assembled from the
/// aliasing rule: only harmonics at or above n contribute, each folded into
/// its slot with the taper weight. The coefficients keep full relative
/// precision however small the tail is, where the node-sampling route loses
/// anything below ≈1e−16·‖f‖ to rounding.
pub fn vp_interp_difference(f: &TrigPolynomial, n: usize, p: usize) -> Result<TrigPolynomial> {
    let lambda = vp_multipliers(n, p)?;
    let mut d = TrigPolynomial::zero(n.saturating_sub(1));
    for q in n..=f.order() {
        let al = alias(q, n)?;
        if al.slot == 0 {
            d.set(0, d.a(0) - 2.0 * lambda[0] * f.a(q), 0.0);
        } else {
            let l = lambda[al.slot];
            d.set(
                al.slot,
                d.a(al.slot) - l * f.a(q),
                d.b(al.slot) - al.sin_sign * l * f.b(q),
            );
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::partial_sum;

    #[test]
    fn nodes_are_equispaced() {
        let nodes = interp_nodes(3).unwrap();
        assert_eq!(nodes.len(), 5);
        for (j, &x) in nodes.iter().enumerate() {
            assert!((x - 2.0 * PI * j as f64 / 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn low_orders_are_reproduced_exactly() {
        // any polynomial of order ≤ n−1 has exact discrete coefficients
        let n = 6;
        let mut f = TrigPolynomial::zero(n - 1);
        for k in 0..n {
            f.set(k, 0.3 + k as f64, if k > 0 { 1.0 / (k as f64) } else { 0.0 });
        }
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
        let spec = discrete_coeffs(&samples, n).unwrap();
        for k in 0..n {
            assert!((spec.a(k) - f.a(k)).abs() < 1e-12, "a_{k}");
            assert!((spec.b(k) - f.b(k)).abs() < 1e-12, "b_{k}");
        }
    }

    #[test]
    fn sine_alias_flips_sign() {
        // sin 3x on 5 nodes lands on slot 2 with a sign flip
        let n = 3;
        let f = TrigPolynomial::sine(3, 1.0);
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
        let spec = discrete_coeffs(&samples, n).unwrap();
        assert!((spec.b(2) + 1.0).abs() < 1e-13);
        assert!(spec.a(2).abs() < 1e-13);
        assert_eq!(alias(3, 3).unwrap(), Alias { slot: 2, sin_sign: -1.0 });
    }

    #[test]
    fn full_fold_onto_constant() {
        // cos 5x ≡ 1 on the 5-node set: a_0 = 2
        let n = 3;
        let f = TrigPolynomial::cosine(5, 1.0);
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
        let spec = discrete_coeffs(&samples, n).unwrap();
        assert!((spec.a(0) - 2.0).abs() < 1e-13);
        assert_eq!(alias(5, 3).unwrap().slot, 0);
    }

    #[test]
    fn edge_coefficients_duplicate() {
        // frequency n is indistinguishable from n−1 on 2n−1 nodes
        let n = 5;
        let mut f = TrigPolynomial::zero(7);
        for k in 1..=7 {
            f.set(k, (k as f64).sin(), (k as f64 * 1.3).cos());
        }
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
        let spec = discrete_coeffs(&samples, n).unwrap();
        assert!((spec.a(n) - spec.a(n - 1)).abs() < 1e-13);
        assert!((spec.b(n) + spec.b(n - 1)).abs() < 1e-13);
    }

    #[test]
    fn interpolant_matches_arbitrary_function_at_nodes() {
        let n = 7;
        let f = |x: f64| (x.cos()).exp() + 0.3 * (2.0 * x).sin();
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let t = interp_polynomial(&discrete_coeffs(&samples, n).unwrap());
        for &x in &nodes {
            assert!((t.eval(x) - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn average_halves_the_top_harmonic() {
        // f = cos 2x with n=3, p=2: multiplier at k=2 is 1/2
        let n = 3;
        let f = TrigPolynomial::cosine(2, 1.0);
        let v = interp_vp_of_poly(&f, n, 2).unwrap();
        assert!((v.a(2) - 0.5).abs() < 1e-13);
        assert!(v.a(1).abs() < 1e-13);
    }

    #[test]
    fn average_decomposes_into_interp_partial_sums() {
        let n = 6;
        let mut f = TrigPolynomial::zero(9);
        for k in 0..=9 {
            f.set(k, (0.4 * k as f64).cos(), (0.9 * k as f64).sin());
        }
        let nodes = interp_nodes(n).unwrap();
        let samples: Vec<f64> = nodes.iter().map(|&x| f.eval(x)).collect();
        let spec = discrete_coeffs(&samples, n).unwrap();
        let t = interp_polynomial(&spec);
        for p in 1..=n {
            let direct = interp_vp_sum(&spec, p).unwrap();
            let mut acc = TrigPolynomial::zero(n - 1);
            for k in (n - p)..n {
                acc = &acc + &partial_sum(&t, k);
            }
            let avg = acc.scaled(1.0 / p as f64);
            for k in 0..n {
                assert!((direct.a(k) - avg.a(k)).abs() < 1e-13);
                assert!((direct.b(k) - avg.b(k)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn aliased_harmonic_gap_between_deviations() {
        // f one harmonic above the node bandwidth: the grid deviation keeps
        // all of f, the interpolation one also picks up the folded image
        let psi5 = 2f64.powi(-25);
        let f = TrigPolynomial::cosine(5, psi5);
        let g = UniformGrid::new(256).unwrap();
        let (rho, _) = crate::trig::deviation_rho(&f, 5, 2, &g).unwrap();
        let (rho_t, _) = deviation_rho_tilde(&f, 5, 2, &g).unwrap();
        let diff: Vec<f64> = rho
            .values
            .iter()
            .zip(&rho_t.values)
            .map(|(x, y)| x - y)
            .collect();
        let gap = diff.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // Ṽ consists of exactly λ₄ = 1/2 times the folded harmonic
        assert!((gap - 0.5 * psi5).abs() < 1e-17);
    }

    #[test]
    fn rho_tilde_fn_agrees_with_spectral_path() {
        let mut f = TrigPolynomial::zero(8);
        for k in 1..=8 {
            f.set(k, 1.0 / (1.0 + k as f64), 0.2 * k as f64);
        }
        let g = UniformGrid::new(512).unwrap();
        let (_, sup_spec) = deviation_rho_tilde(&f, 6, 2, &g).unwrap();
        let (_, sup_fn) = deviation_rho_tilde_fn(&|x| f.eval(x), 6, 2, &g).unwrap();
        assert!((sup_spec - sup_fn).abs() < 1e-9);
    }

    #[test]
    fn fold_difference_matches_node_route() {
        // O(1) coefficients keep the node route above rounding, so the two
        // constructions of V − Ṽ must agree
        let mut f = TrigPolynomial::zero(11);
        for k in 0..=11 {
            f.set(k, (0.7 * k as f64).cos(), (1.1 * k as f64).sin());
        }
        for (n, p) in [(4usize, 1usize), (4, 2), (5, 3), (6, 2)] {
            let direct = crate::trig::vp_sum(&f, n, p).unwrap();
            let node = &direct - &interp_vp_of_poly(&f, n, p).unwrap();
            let fold = vp_interp_difference(&f, n, p).unwrap();
            for k in 0..n {
                assert!((node.a(k) - fold.a(k)).abs() < 1e-13, "a_{k} n={n} p={p}");
                assert!((node.b(k) - fold.b(k)).abs() < 1e-13, "b_{k} n={n} p={p}");
            }
        }
    }

    #[test]
    fn fold_difference_keeps_tiny_tails() {
        // harmonic n over a unit bulk: sampling f at the nodes rounds the
        // fold away, the coefficient route keeps it to full precision
        let mut f = TrigPolynomial::cosine(1, 1.0);
        let tiny = 1e-30;
        f.set(4, tiny, 0.5 * tiny);
        let d = vp_interp_difference(&f, 4, 2).unwrap();
        // slot 3 with sine flip, taper 1/2 at k = 3
        assert_eq!(d.order(), 3);
        assert!((d.a(3) + 0.5 * tiny).abs() < 1e-46);
        assert!((d.b(3) - 0.25 * tiny).abs() < 1e-46);
        assert_eq!(d.a(1), 0.0);
        // below-bandwidth input never contributes
        let low = TrigPolynomial::cosine(3, 1.0);
        let z = vp_interp_difference(&low, 4, 2).unwrap();
        assert!((0..4).all(|k| z.a(k) == 0.0 && z.b(k) == 0.0));
    }
}
