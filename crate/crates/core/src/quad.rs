//! Integration helpers shared by the norm and solver code.
//!
//! Two regimes:
//! * periodic rectangle rule on a uniform grid, spectrally accurate for
//!   smooth 2π-periodic integrands, O(h²) at |·|-type kinks;
//! * panel-wise Gauss–Legendre between known breakpoints, with a sine
//!   substitution that flattens algebraic endpoint behaviour such as |t−ξ|^s
//!   at a simple zero ξ of the integrand.

use once_cell::sync::Lazy;
use std::f64::consts::PI;

/// Rectangle rule over one period for samples on a uniform grid.
/// For periodic integrands this coincides with the trapezoid rule.
pub fn grid_rule(values: &[f64]) -> f64 {
    let m = values.len();
    assert!(m > 0, "empty sample vector");
    values.iter().sum::<f64>() * (2.0 * PI / m as f64)
}

const GL_ORDER: usize = 32;

/// Gauss–Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
static GL32: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(GL_ORDER));

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Plain Gauss–Legendre on [a, b]; exact for smooth integrands at this width.
pub fn gauss_panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = (&GL32.0, &GL32.1);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Gauss–Legendre after the substitution t = c + h·sin(πu/2).
///
/// The Jacobian vanishes at both panel ends, so an integrand behaving like
/// |t−a|^s or |t−b|^s (s ≥ 1) becomes smooth enough for rapid convergence.
pub fn gauss_panel_regularized(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = (&GL32.0, &GL32.1);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (u, w) in nodes.iter().zip(weights) {
        let (s, cs) = (0.5 * PI * u).sin_cos();
        acc += w * f(c + h * s) * cs;
    }
    acc * h * 0.5 * PI
}

/// Integrate over [lo, hi] splitting at the given breakpoints, regularizing
/// every panel end. Breakpoints outside (lo, hi) are ignored.
pub fn integrate_with_breakpoints(
    f: &mut dyn FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
) -> f64 {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > lo + 1e-14 && t < hi - 1e-14)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    let mut acc = 0.0;
    let mut left = lo;
    for cut in cuts {
        acc += gauss_panel_regularized(f, left, cut);
        left = cut;
    }
    acc + gauss_panel_regularized(f, left, hi)
}

/// Locate the sign changes of `f` on [lo, hi) by scanning `scan` cells and
/// bisecting each bracketed root to ~1e-14·(hi-lo).
pub fn sign_changes(f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    assert!(scan >= 2);
    let h = (hi - lo) / scan as f64;
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for j in 1..=scan {
        let xb = lo + h * j as f64;
        let fb = f(xb);
        if fa == 0.0 {
            out.push(xa);
        } else if fa * fb < 0.0 {
            let (mut a, mut b, mut va) = (xa, xb, fa);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                let vm = f(m);
                if va * vm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    va = vm;
                }
            }
            out.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    out
}

/// Golden-section maximization of `f` on [a, b]; assumes the window is small
/// enough that `f` is unimodal there. Returns the refined argmax and value.
pub fn golden_max(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-13 {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if f1 >= f2 && f1 >= fm {
        (x1, f1)
    } else if f2 >= fm {
        (x2, f2)
    } else {
        (mid, fm)
    }
}
