//! Best approximation by trigonometric polynomials of fixed order.
//!
//! Three routes, one per norm regime: closed-form spectral projection in
//! L2, a Remez exchange for the uniform norm, and damped Newton on a
//! smoothed objective for general L_s. Every result carries a
//! certificate that can be checked without rerunning the solver.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;
use crate::trig::{norm, NormIndex, SampledFunction, TrigPolynomial};

/// Evidence that the reported error is the best-approximation error.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// L2: truncation of the spectrum is the exact minimizer.
    Projection,
    /// Uniform norm: residual equioscillates at the listed points.
    Alternation { points: Vec<f64> },
    /// Smooth L_s (s > 1): first-order stationarity of the convex objective.
    Smooth { gradient_norm: f64, iterations: usize },
    /// L1 via smoothing homotopy: near-feasible dual point and its gap.
    Homotopy {
        gradient_norm: f64,
        final_epsilon: f64,
        duality_gap: f64,
    },
}

#[derive(Debug, Clone)]
pub struct ApproxResult {
    /// Best-approximation error in the requested norm.
    pub value: f64,
    /// Minimizing polynomial, order <= m - 1.
    pub minimizer: TrigPolynomial,
    pub certificate: Certificate,
}

/// Minimal grid density relative to the approximation order.
const GRID_FACTOR: usize = 32;

fn check_grid(len: usize, m: usize) -> Result<()> {
    if len < GRID_FACTOR * m {
        return Err(Error::GridTooCoarse {
            needed: GRID_FACTOR * m,
            actual: len,
        });
    }
    Ok(())
}

/// Coefficient layout used by the iterative solvers:
/// c[0] constant, c[2i-1] cos(i x), c[2i] sin(i x), i = 1..m-1.
fn basis_eval(k: usize, x: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        let i = (k + 1) / 2;
        let (sn, cs) = (i as f64 * x).sin_cos();
        if k % 2 == 1 {
            cs
        } else {
            sn
        }
    }
}

fn coeffs_to_poly(c: &[f64], m: usize) -> TrigPolynomial {
    let mut t = TrigPolynomial::zero(m.saturating_sub(1));
    t.set(0, 2.0 * c[0], 0.0);
    for i in 1..m {
        t.set(i, c[2 * i - 1], c[2 * i]);
    }
    t.trimmed()
}

/// Best L2 approximation of a spectral input: drop everything of order >= m.
pub fn best_approx_l2(f: &TrigPolynomial, m: usize) -> Result<ApproxResult> {
    if m == 0 {
        return Err(Error::param("approximation order m must be >= 1"));
    }
    let mut tail = 0.0;
    for k in m..=f.order() {
        tail += f.a(k) * f.a(k) + f.b(k) * f.b(k);
    }
    Ok(ApproxResult {
        value: (PI * tail).sqrt(),
        minimizer: crate::trig::partial_sum(f, m - 1),
        certificate: Certificate::Projection,
    })
}

/// Cyclic maximal same-sign runs of the residual; one argmax per run.
/// Points with |r| <= tol do not break a run. Returns indices in cyclic
/// order; adjacent entries (including the wrap pair) carry opposite signs.
fn alternation_candidates(r: &[f64], tol: f64) -> Vec<usize> {
    let len = r.len();
    let Some(anchor) = (0..len).find(|&j| r[j].abs() > tol) else {
        return Vec::new();
    };
    let mut cands: Vec<usize> = Vec::new();
    let mut cur_sign = 0i8;
    let mut cur_best = anchor;
    for step in 0..len {
        let j = (anchor + step) % len;
        let s = if r[j] > tol {
            1
        } else if r[j] < -tol {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if cur_sign == 0 {
            cur_sign = s;
            cur_best = j;
        } else if s == cur_sign {
            if r[j].abs() > r[cur_best].abs() {
                cur_best = j;
            }
        } else {
            cands.push(cur_best);
            cur_sign = s;
            cur_best = j;
        }
    }
    cands.push(cur_best);
    if cands.len() >= 2 {
        let first = cands[0];
        let last = *cands.last().unwrap();
        if (r[first] > 0.0) == (r[last] > 0.0) {
            if r[first].abs() >= r[last].abs() {
                cands.pop();
            } else {
                cands.remove(0);
            }
        }
    }
    cands
}

/// Trim an alternating cyclic candidate list down to `target` entries,
/// removing weakest extrema in pairs so the sign pattern survives.
fn trim_candidates(cands: &mut Vec<usize>, r: &[f64], target: usize) {
    while cands.len() > target {
        let l = cands.len();
        let i = (0..l)
            .min_by(|&a, &b| {
                r[cands[a]]
                    .abs()
                    .partial_cmp(&r[cands[b]].abs())
                    .unwrap()
            })
            .unwrap();
        let prev = (i + l - 1) % l;
        let next = (i + 1) % l;
        let drop2 = if r[cands[prev]].abs() <= r[cands[next]].abs() {
            prev
        } else {
            next
        };
        let mut kill = [i, drop2];
        kill.sort_unstable();
        cands.remove(kill[1]);
        cands.remove(kill[0]);
    }
}

/// Solve the levelled-error system at the given reference abscissae:
/// t(x_i) + sigma_i h = f(x_i) with sigma alternating. Returns (c, h).
fn solve_reference(xs: &[f64], fs: &[f64], m: usize) -> Result<(Vec<f64>, f64)> {
    let n_basis = 2 * m - 1;
    let rows = xs.len();
    debug_assert_eq!(rows, 2 * m);
    let mut a = DMatrix::<f64>::zeros(rows, rows);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (i, (&x, &fx)) in xs.iter().zip(fs).enumerate() {
        for k in 0..n_basis {
            a[(i, k)] = basis_eval(k, x);
        }
        a[(i, n_basis)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = fx;
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::param("degenerate reference set in exchange step"))?;
    let c = sol.as_slice()[..n_basis].to_vec();
    Ok((c, sol[n_basis]))
}

/// Best uniform approximation via Remez exchange on the sample grid,
/// followed by a continuous polish of the reference set when the input
/// carries a pointwise evaluator.
pub fn best_approx_c(f: &SampledFunction, m: usize) -> Result<ApproxResult> {
    if m == 0 {
        return Err(Error::param("approximation order m must be >= 1"));
    }
    let len = f.grid.len();
    check_grid(len, m)?;
    let xs: Vec<f64> = f.grid.points().collect();
    let scale = f.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

    let mut refs: Vec<usize> = (0..2 * m).map(|i| i * len / (2 * m)).collect();
    let mut c = vec![0.0; 2 * m - 1];
    let mut h = 0.0;
    let mut r = vec![0.0; len];
    let mut best: Option<(f64, Vec<f64>, Vec<usize>, f64)> = None;

    for _ in 0..100 {
        let ref_x: Vec<f64> = refs.iter().map(|&j| xs[j]).collect();
        let ref_f: Vec<f64> = refs.iter().map(|&j| f.values[j]).collect();
        let (cc, hh) = solve_reference(&ref_x, &ref_f, m)?;
        c = cc;
        h = hh;
        for j in 0..len {
            let mut t = 0.0;
            for (k, ck) in c.iter().enumerate() {
                t += ck * basis_eval(k, xs[j]);
            }
            r[j] = f.values[j] - t;
        }
        let e_grid = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if best.as_ref().map_or(true, |b| e_grid < b.0) {
            best = Some((e_grid, c.clone(), refs.clone(), h));
        }
        if e_grid - h.abs() <= 1e-12 * e_grid.max(1e-300) {
            break;
        }

        let mut cands = alternation_candidates(&r, 1e-14 * scale.max(1e-300));
        if cands.len() >= 2 * m {
            trim_candidates(&mut cands, &r, 2 * m);
            cands.sort_unstable();
            if cands == refs {
                break;
            }
            refs = cands;
        } else {
            // single exchange: swap the global extremum for the
            // sign-compatible neighbor in the current reference
            let jstar = (0..len)
                .max_by(|&a, &b| r[a].abs().partial_cmp(&r[b].abs()).unwrap())
                .unwrap();
            if refs.contains(&jstar) {
                break;
            }
            let positive = r[jstar] > 0.0;
            let pos = refs.partition_point(|&j| j < jstar);
            let left = (pos + 2 * m - 1) % (2 * m);
            let right = pos % (2 * m);
            if (r[refs[left]] > 0.0) == positive {
                refs[left] = jstar;
            } else {
                refs[right] = jstar;
            }
            refs.sort_unstable();
            refs.dedup();
            if refs.len() < 2 * m {
                break;
            }
        }
    }

    if let Some((e, bc, brefs, bh)) = best {
        c = bc;
        refs = brefs;
        h = bh;
        let _ = e;
    }

    // Continuous stage: move references to true residual extrema and
    // re-level until the global sup matches the levelled error.
    let mut cert_x: Vec<f64> = refs.iter().map(|&j| xs[j]).collect();
    let mut value;
    if let Some(ev) = f.evaluator.clone() {
        let grid_h = 2.0 * PI / len as f64;
        let mut sigma: Vec<f64> = refs.iter().map(|&j| r[j].signum()).collect();
        for _ in 0..30 {
            for i in 0..cert_x.len() {
                let gap_l = (cert_x[i] - cert_x[(i + cert_x.len() - 1) % cert_x.len()])
                    .rem_euclid(2.0 * PI);
                let gap_r = (cert_x[(i + 1) % cert_x.len()] - cert_x[i]).rem_euclid(2.0 * PI);
                let w = (2.0 * grid_h).min(0.45 * gap_l.min(gap_r));
                let sg = sigma[i];
                let cl = c.clone();
                let mut g = |x: f64| {
                    let mut t = 0.0;
                    for (k, ck) in cl.iter().enumerate() {
                        t += ck * basis_eval(k, x);
                    }
                    sg * (ev.eval(x) - t)
                };
                cert_x[i] = quad::golden_max(&mut g, cert_x[i] - w, cert_x[i] + w).0;
            }
            let ref_f: Vec<f64> = cert_x.iter().map(|&x| ev.eval(x)).collect();
            let (cc, hh) = solve_reference(&cert_x, &ref_f, m)?;
            c = cc;
            h = hh;
            sigma = (0..cert_x.len())
                .map(|i| if i % 2 == 0 { h.signum() } else { -h.signum() })
                .collect();
            let mut e_glob = 0.0f64;
            let mut argmax = 0.0;
            for (j, &x) in xs.iter().enumerate() {
                let mut t = 0.0;
                for (k, ck) in c.iter().enumerate() {
                    t += ck * basis_eval(k, x);
                }
                let v = (ev.eval(x) - t).abs();
                r[j] = f.values[j] - t;
                if v > e_glob {
                    e_glob = v;
                    argmax = x;
                }
            }
            let cl = c.clone();
            let mut g = |x: f64| {
                let mut t = 0.0;
                for (k, ck) in cl.iter().enumerate() {
                    t += ck * basis_eval(k, x);
                }
                (ev.eval(x) - t).abs()
            };
            // the sup can hide between grid points at any residual
            // extremum, so refine every reference window, not just one
            e_glob = e_glob.max(quad::golden_max(&mut g, argmax - grid_h, argmax + grid_h).1);
            for &x0 in cert_x.iter() {
                e_glob = e_glob.max(quad::golden_max(&mut g, x0 - grid_h, x0 + grid_h).1);
            }
            if e_glob - h.abs() <= 1e-11 * e_glob.max(1e-300) {
                value = e_glob;
                return Ok(ApproxResult {
                    value,
                    minimizer: coeffs_to_poly(&c, m),
                    certificate: Certificate::Alternation { points: cert_x },
                });
            }
        }
        // polish stalled; report the levelled error, still a valid bound
        value = h.abs();
        for &x in xs.iter() {
            let mut t = 0.0;
            for (k, ck) in c.iter().enumerate() {
                t += ck * basis_eval(k, x);
            }
            value = value.max((ev.eval(x) - t).abs());
        }
    } else {
        value = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    }
    Ok(ApproxResult {
        value,
        minimizer: coeffs_to_poly(&c, m),
        certificate: Certificate::Alternation { points: cert_x },
    })
}

/// rho(u) = (u^2 + eps^2)^{s/2} - eps^s and its first two derivatives.
fn rho_terms(u: f64, s: f64, eps: f64) -> (f64, f64, f64) {
    let q = u * u + eps * eps;
    let val = q.powf(0.5 * s) - eps.powf(s);
    let d1 = s * u * q.powf(0.5 * s - 1.0);
    let d2 = s * q.powf(0.5 * s - 2.0) * ((s - 1.0) * u * u + eps * eps);
    (val, d1, d2)
}

struct LsState {
    basis: Vec<Vec<f64>>,
    fv: Vec<f64>,
    w: f64,
}

impl LsState {
    fn residual(&self, c: &DVector<f64>, out: &mut [f64]) {
        let mlen = self.fv.len();
        out.copy_from_slice(&self.fv);
        for (k, col) in self.basis.iter().enumerate() {
            let ck = c[k];
            if ck != 0.0 {
                for j in 0..mlen {
                    out[j] -= ck * col[j];
                }
            }
        }
    }

    fn objective(&self, c: &DVector<f64>, s: f64, eps: f64, scratch: &mut [f64]) -> f64 {
        self.residual(c, scratch);
        let mut j = 0.0;
        for &u in scratch.iter() {
            j += rho_terms(u, s, eps).0;
        }
        self.w * j
    }
}

fn newton_level(
    st: &LsState,
    c: &mut DVector<f64>,
    s: f64,
    eps: f64,
    iters_used: &mut usize,
) -> Result<f64> {
    let n = st.basis.len();
    let mlen = st.fv.len();
    let mut r = vec![0.0; mlen];
    let mut scratch = vec![0.0; mlen];
    let mut last_gn = f64::INFINITY;
    for _ in 0..60 {
        *iters_used += 1;
        st.residual(c, &mut r);
        let mut j_val = 0.0;
        let mut d1 = vec![0.0; mlen];
        let mut d2 = vec![0.0; mlen];
        for (j, &u) in r.iter().enumerate() {
            let (v, g, hh) = rho_terms(u, s, eps);
            j_val += v;
            d1[j] = g;
            d2[j] = hh;
        }
        j_val *= st.w;
        let mut g = DVector::<f64>::zeros(n);
        for (k, col) in st.basis.iter().enumerate() {
            let mut acc = 0.0;
            for j in 0..mlen {
                acc += d1[j] * col[j];
            }
            g[k] = -st.w * acc;
        }
        let gscale: f64 = st.w * d1.iter().map(|v| v.abs()).sum::<f64>() + 1e-300;
        let gn = g.amax();
        last_gn = gn / gscale;
        if gn <= 1e-10 * gscale {
            return Ok(last_gn);
        }
        let mut hess = DMatrix::<f64>::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut acc = 0.0;
                for j in 0..mlen {
                    acc += d2[j] * st.basis[a][j] * st.basis[b][j];
                }
                let v = st.w * acc;
                hess[(a, b)] = v;
                hess[(b, a)] = v;
            }
        }
        let ridge = 1e-14 * hess.trace().abs() / n as f64 + 1e-300;
        for a in 0..n {
            hess[(a, a)] += ridge;
        }
        let d = match hess.clone().cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => hess
                .lu()
                .solve(&(-&g))
                .ok_or_else(|| Error::param("singular Hessian in smooth solve"))?,
        };
        let mut dec: f64 = g.dot(&d);
        let dir = if dec < 0.0 {
            d
        } else {
            dec = -g.dot(&g);
            -g.clone()
        };
        if dir.amax() <= 1e-13 * (1.0 + c.amax()) {
            // step below coefficient rounding: converged to fp precision
            return Ok(last_gn);
        }
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..45 {
            let trial = &*c + step * &dir;
            let jt = st.objective(&trial, s, eps, &mut scratch);
            if jt <= j_val + 0.25 * step * dec {
                *c = trial;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            // flat to rounding; accept if the scaled gradient is small
            if gn <= 1e-7 * gscale {
                return Ok(last_gn);
            }
            return Err(Error::NoConvergence {
                solver: "ls_newton",
                iterations: *iters_used,
                residual: last_gn,
            });
        }
    }
    if last_gn <= 1e-6 {
        return Ok(last_gn);
    }
    Err(Error::NoConvergence {
        solver: "ls_newton",
        iterations: *iters_used,
        residual: last_gn,
    })
}

/// Integral error of a candidate minimizer, refined off-grid when the
/// input is backed by an evaluator; grid quadrature otherwise.
fn ls_error(f: &SampledFunction, t: &TrigPolynomial, s: f64) -> f64 {
    match &f.evaluator {
        Some(ev) => {
            let g = |x: f64| ev.eval(x) - t.eval(x);
            let mut cuts = ev.breakpoints();
            cuts.extend(quad::sign_changes(
                &mut |x| g(x),
                0.0,
                2.0 * PI,
                f.grid.len().max(2048),
            ));
            let val = quad::integrate_with_breakpoints(
                &mut |x| g(x).abs().powf(s),
                0.0,
                2.0 * PI,
                &cuts,
            );
            val.powf(1.0 / s)
        }
        None => {
            let w = 2.0 * PI / f.grid.len() as f64;
            let mut acc = 0.0;
            for (j, &v) in f.values.iter().enumerate() {
                acc += (v - t.eval(f.grid.point(j))).abs().powf(s);
            }
            (w * acc).powf(1.0 / s)
        }
    }
}

/// Best L_s approximation, 1 <= s < infinity. Smoothing homotopy in
/// epsilon with a damped Newton inner loop; s = 1 stops at a positive
/// epsilon and certifies through the induced dual point.
pub fn best_approx_ls(f: &SampledFunction, m: usize, s: f64) -> Result<ApproxResult> {
    if m == 0 {
        return Err(Error::param("approximation order m must be >= 1"));
    }
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::param("integral norm index must satisfy 1 <= s < inf"));
    }
    let mlen = f.grid.len();
    check_grid(mlen, m)?;
    let n = 2 * m - 1;
    let xs: Vec<f64> = f.grid.points().collect();
    let mut basis = Vec::with_capacity(n);
    for k in 0..n {
        basis.push(xs.iter().map(|&x| basis_eval(k, x)).collect::<Vec<f64>>());
    }
    let st = LsState {
        basis,
        fv: f.values.clone(),
        w: 2.0 * PI / mlen as f64,
    };
    let scale = f
        .values
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-30);

    // warm start: discrete L2 projection (exact by grid orthogonality)
    let mut c = DVector::<f64>::zeros(n);
    c[0] = f.values.iter().sum::<f64>() / mlen as f64;
    for i in 1..m {
        let (mut ac, mut bc) = (0.0, 0.0);
        for (j, &x) in xs.iter().enumerate() {
            let (sn, cs) = (i as f64 * x).sin_cos();
            ac += f.values[j] * cs;
            bc += f.values[j] * sn;
        }
        c[2 * i - 1] = 2.0 * ac / mlen as f64;
        c[2 * i] = 2.0 * bc / mlen as f64;
    }

    let levels: Vec<f64> = if s >= 2.0 {
        vec![1e-2 * scale, 0.0]
    } else if s > 1.0 {
        (1..=5).map(|i| scale * 10f64.powi(-(2 * i - 1))).collect()
    } else {
        (1..=8).map(|i| scale * 10f64.powi(-i)).collect()
    };
    let final_eps = *levels.last().unwrap();
    let mut iters = 0usize;
    for &eps in &levels {
        newton_level(&st, &mut c, s, eps, &mut iters)?;
    }

    let mut r = vec![0.0; mlen];
    st.residual(&c, &mut r);
    let minimizer = coeffs_to_poly(c.as_slice(), m);
    let value = ls_error(f, &minimizer, s);

    let certificate = if s == 1.0 {
        let mut defect = vec![0.0f64; n];
        let mut gap = 0.0;
        for (j, &u) in r.iter().enumerate() {
            let y = u / (u * u + final_eps * final_eps).sqrt();
            gap += u.abs() - y * u;
            for (k, col) in st.basis.iter().enumerate() {
                defect[k] += y * col[j];
            }
        }
        Certificate::Homotopy {
            gradient_norm: st.w * defect.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
            final_epsilon: final_eps,
            duality_gap: st.w * gap,
        }
    } else {
        let mut g_true = vec![0.0f64; n];
        for (j, &u) in r.iter().enumerate() {
            let d = s * u.abs().powf(s - 1.0) * u.signum();
            for (k, col) in st.basis.iter().enumerate() {
                g_true[k] += d * col[j];
            }
        }
        Certificate::Smooth {
            gradient_norm: st.w * g_true.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
            iterations: iters,
        }
    };

    Ok(ApproxResult {
        value,
        minimizer,
        certificate,
    })
}

/// Route on the norm index.
pub fn best_approx(f: &SampledFunction, m: usize, s: NormIndex) -> Result<ApproxResult> {
    match s {
        NormIndex::Infinity => best_approx_c(f, m),
        NormIndex::Finite(v) => best_approx_ls(f, m, v),
    }
}

/// Check the zero-best criterion in L_s, s in (1, inf): zero is a best
/// approximation of order m iff |f|^{s-1} sign f is orthogonal to every
/// basis element of order < m. Tolerance scales with ||f||_s^{s-1}.
pub fn verify_zero_best(f: &SampledFunction, m: usize, s: f64) -> Result<bool> {
    if m == 0 {
        return Err(Error::param("approximation order m must be >= 1"));
    }
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::param("zero-best test requires 1 < s < inf"));
    }
    check_grid(f.grid.len(), m)?;
    let w = 2.0 * PI / f.grid.len() as f64;
    let fnorm = norm(f, NormIndex::new(s)?);
    let tol = 1e-8 * fnorm.powf(s - 1.0);
    let u: Vec<f64> = f
        .values
        .iter()
        .map(|&v| v.abs().powf(s - 1.0) * v.signum())
        .collect();
    for k in 0..2 * m - 1 {
        let mut acc = 0.0;
        for (j, &uj) in u.iter().enumerate() {
            acc += uj * basis_eval(k, f.grid.point(j));
        }
        if (w * acc).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
