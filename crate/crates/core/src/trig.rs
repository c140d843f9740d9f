//! Trigonometric polynomials on a uniform periodic grid: evaluation,
//! coefficient analysis, L_s norms, partial sums, and the taper-weighted
//! partial-sum averages (Vallée Poussin sums) everything else builds on.

use crate::error::{Error, Result};
use crate::quad;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Exponent of an L_s space on the period, with s = ∞ as an explicit variant
/// rather than a float sentinel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormIndex {
    Finite(f64),
    Infinity,
}

impl NormIndex {
    /// A finite exponent; requires s ≥ 1.
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 1.0 {
            return Err(Error::param(format!("norm exponent must satisfy s >= 1, got {s}")));
        }
        Ok(NormIndex::Finite(s))
    }

    pub fn infinity() -> Self {
        NormIndex::Infinity
    }

    /// Hölder conjugate: 1 ↔ ∞ and s' = s/(s−1) otherwise.
    pub fn conjugate(self) -> Self {
        match self {
            NormIndex::Infinity => NormIndex::Finite(1.0),
            NormIndex::Finite(s) if s == 1.0 => NormIndex::Infinity,
            NormIndex::Finite(s) => NormIndex::Finite(s / (s - 1.0)),
        }
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            NormIndex::Finite(s) => Some(s),
            NormIndex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, NormIndex::Infinity)
    }
}

impl fmt::Display for NormIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormIndex::Finite(s) => write!(f, "{s}"),
            NormIndex::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for NormIndex {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormIndex::Finite(s) => ser.serialize_f64(*s),
            NormIndex::Infinity => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for NormIndex {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(s) => NormIndex::new(s).map_err(de::Error::custom),
            Raw::Str(s) if s == "inf" || s == "infinity" => Ok(NormIndex::Infinity),
            Raw::Str(s) => Err(de::Error::custom(format!("bad norm exponent {s:?}"))),
        }
    }
}

/// Real trigonometric polynomial a₀/2 + Σ_{k≥1} aₖ cos kx + bₖ sin kx.
///
/// `a[0]` stores the raw a₀; the 1/2 is applied at evaluation time.
/// `b[0]` is unused and kept at zero so both vectors index by harmonic.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPolynomial {
    pub fn zero(order: usize) -> Self {
        TrigPolynomial {
            a: vec![0.0; order + 1],
            b: vec![0.0; order + 1],
        }
    }

    /// Build from coefficient vectors; `a` has length order+1, `b` may be
    /// shorter and is zero-padded (its k=0 slot is forced to zero).
    pub fn from_coeffs(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::param("coefficient vector a must contain a_0"));
        }
        if b.len() > a.len() {
            return Err(Error::param("b has more harmonics than a"));
        }
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(Error::param("non-finite coefficient"));
        }
        let mut b = b;
        b.resize(a.len(), 0.0);
        b[0] = 0.0;
        Ok(TrigPolynomial { a, b })
    }

    pub fn cosine(k: usize, amplitude: f64) -> Self {
        let mut p = TrigPolynomial::zero(k);
        if k == 0 {
            p.a[0] = 2.0 * amplitude; // a_0/2 convention
        } else {
            p.a[k] = amplitude;
        }
        p
    }

    pub fn sine(k: usize, amplitude: f64) -> Self {
        assert!(k >= 1, "sine harmonic must be >= 1");
        let mut p = TrigPolynomial::zero(k);
        p.b[k] = amplitude;
        p
    }

    /// Highest stored harmonic index.
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self, k: usize) -> f64 {
        self.a.get(k).copied().unwrap_or(0.0)
    }

    pub fn b(&self, k: usize) -> f64 {
        self.b.get(k).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, k: usize, a: f64, b: f64) {
        if k >= self.a.len() {
            self.a.resize(k + 1, 0.0);
            self.b.resize(k + 1, 0.0);
        }
        self.a[k] = a;
        if k > 0 {
            self.b[k] = b;
        }
    }

    /// Amplitude √(aₖ²+bₖ²) of harmonic k (k ≥ 1).
    pub fn amplitude(&self, k: usize) -> f64 {
        self.a(k).hypot(self.b(k))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.5 * self.a[0];
        for k in 1..self.a.len() {
            let (s, c) = (k as f64 * x).sin_cos();
            acc += self.a[k] * c + self.b[k] * s;
        }
        acc
    }

    /// Drop trailing zero harmonics (never below the constant term).
    pub fn trimmed(mut self) -> Self {
        while self.a.len() > 1
            && self.a.last() == Some(&0.0)
            && self.b.last() == Some(&0.0)
        {
            self.a.pop();
            self.b.pop();
        }
        self
    }

    pub fn scaled(&self, c: f64) -> Self {
        TrigPolynomial {
            a: self.a.iter().map(|v| c * v).collect(),
            b: self.b.iter().map(|v| c * v).collect(),
        }
    }
}

impl std::ops::Add for &TrigPolynomial {
    type Output = TrigPolynomial;
    fn add(self, rhs: &TrigPolynomial) -> TrigPolynomial {
        let n = self.a.len().max(rhs.a.len());
        let mut out = TrigPolynomial::zero(n - 1);
        for k in 0..n {
            out.a[k] = self.a(k) + rhs.a(k);
            out.b[k] = self.b(k) + rhs.b(k);
        }
        out
    }
}

impl std::ops::Sub for &TrigPolynomial {
    type Output = TrigPolynomial;
    fn sub(self, rhs: &TrigPolynomial) -> TrigPolynomial {
        let n = self.a.len().max(rhs.a.len());
        let mut out = TrigPolynomial::zero(n - 1);
        for k in 0..n {
            out.a[k] = self.a(k) - rhs.a(k);
            out.b[k] = self.b(k) - rhs.b(k);
        }
        out
    }
}

/// M equispaced points x_j = 2πj/M on one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    len: usize,
}

impl UniformGrid {
    pub fn new(len: usize) -> Result<Self> {
        if len < 4 {
            return Err(Error::param(format!("grid needs at least 4 points, got {len}")));
        }
        Ok(UniformGrid { len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.point(j))
    }

    /// Default resolution for work at spectral order `k`: max(4096, 16k+64).
    pub fn for_order(k: usize) -> Self {
        UniformGrid {
            len: 4096usize.max(16 * k + 64),
        }
    }
}

/// Closed-form evaluation rule attached to a sample vector, enabling
/// off-grid evaluation and breakpoint-aware integration.
#[derive(Clone, Debug)]
pub enum Evaluator {
    Trig(TrigPolynomial),
    /// amplitude · sign cos(m t + phase): a square wave with 2m jumps.
    SignCos { m: usize, phase: f64, amplitude: f64 },
    /// The square wave above with each jump replaced by a linear ramp of
    /// half-width `delta` (equivalently, convolution with a box kernel).
    RampCos {
        m: usize,
        phase: f64,
        amplitude: f64,
        delta: f64,
    },
    /// scale · |cos(m t + phase)|^{power} · sign cos(m t + phase).
    PowerCos {
        m: usize,
        phase: f64,
        power: f64,
        scale: f64,
    },
}

impl Evaluator {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Evaluator::Trig(p) => p.eval(t),
            Evaluator::SignCos { m, phase, amplitude } => {
                let c = (*m as f64 * t + phase).cos();
                amplitude * sign(c)
            }
            Evaluator::RampCos {
                m,
                phase,
                amplitude,
                delta,
            } => {
                let mf = *m as f64;
                let theta = mf * t + phase;
                // jumps sit at theta = π/2 + kπ
                let w = theta / PI - 0.5;
                let k = w.round();
                let u = (w - k) * PI / mf; // signed distance to nearest jump
                if u.abs() >= *delta {
                    amplitude * sign(theta.cos())
                } else {
                    // sign after the jump with index k is -(-1)^k
                    let parity = (k as i64).rem_euclid(2);
                    let after = if parity == 0 { -1.0 } else { 1.0 };
                    amplitude * after * u / delta
                }
            }
            Evaluator::PowerCos {
                m,
                phase,
                power,
                scale,
            } => {
                let c = (*m as f64 * t + phase).cos();
                scale * c.abs().powf(*power) * sign(c)
            }
        }
    }

    /// Points in [0, 2π) where the function or its derivative is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Evaluator::Trig(_) => Vec::new(),
            Evaluator::SignCos { m, phase, .. } | Evaluator::PowerCos { m, phase, .. } => {
                cos_zeros(*m, *phase)
            }
            Evaluator::RampCos { m, phase, delta, .. } => {
                let mut pts = Vec::with_capacity(6 * m);
                for z in cos_zeros(*m, *phase) {
                    pts.push(norm_angle(z - delta));
                    pts.push(z);
                    pts.push(norm_angle(z + delta));
                }
                pts
            }
        }
    }
}

fn sign(c: f64) -> f64 {
    if c > 0.0 {
        1.0
    } else if c < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn norm_angle(t: f64) -> f64 {
    t.rem_euclid(2.0 * PI)
}

/// Zeros of cos(m t + phase) in [0, 2π).
fn cos_zeros(m: usize, phase: f64) -> Vec<f64> {
    let mf = m as f64;
    (0..2 * m)
        .map(|k| norm_angle((PI / 2.0 + k as f64 * PI - phase) / mf))
        .collect()
}

/// A function known by its samples on a uniform grid, optionally with the
/// closed form it was sampled from.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    pub evaluator: Option<Evaluator>,
}

impl SampledFunction {
    pub fn from_values(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(format!(
                "sample vector length {} does not match grid {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("non-finite sample"));
        }
        Ok(SampledFunction {
            grid,
            values,
            evaluator: None,
        })
    }

    pub fn from_evaluator(ev: Evaluator, grid: UniformGrid) -> Self {
        let values = grid.points().map(|x| ev.eval(x)).collect();
        SampledFunction {
            grid,
            values,
            evaluator: Some(ev),
        }
    }

    pub fn eval(&self, t: f64) -> Option<f64> {
        self.evaluator.as_ref().map(|ev| ev.eval(t))
    }
}

/// Sample a polynomial on a grid, keeping the exact form attached.
pub fn eval_poly(p: &TrigPolynomial, grid: &UniformGrid) -> SampledFunction {
    SampledFunction::from_evaluator(Evaluator::Trig(p.clone()), *grid)
}

/// Recover Fourier coefficients through harmonic `k_max` from grid samples.
/// Exact for polynomials of order ≤ k_max when the grid resolves them.
pub fn fourier_analyze(f: &SampledFunction, k_max: usize) -> Result<TrigPolynomial> {
    let m = f.grid.len();
    if m < 2 * k_max + 1 {
        return Err(Error::GridTooCoarse {
            needed: 2 * k_max + 1,
            actual: m,
        });
    }
    let scale = 2.0 / m as f64;
    let mut p = TrigPolynomial::zero(k_max);
    for k in 0..=k_max {
        let mut ca = 0.0;
        let mut cb = 0.0;
        for (j, &v) in f.values.iter().enumerate() {
            let (s, c) = (k as f64 * f.grid.point(j)).sin_cos();
            ca += v * c;
            cb += v * s;
        }
        p.set(k, scale * ca, scale * cb);
    }
    Ok(p)
}

/// ‖f‖ in L_s over one period (no normalization of the measure).
///
/// With an attached evaluator the integral is taken panel-wise between
/// breakpoints and sign changes, which keeps |·|^s kinks away from panel
/// interiors; otherwise the uniform-grid rule is used directly.
pub fn norm(f: &SampledFunction, idx: NormIndex) -> f64 {
    match idx {
        NormIndex::Infinity => sup_norm(f),
        NormIndex::Finite(s) => match &f.evaluator {
            Some(ev) => {
                let scan = f.grid.len().max(2048);
                let mut g = |t: f64| ev.eval(t);
                let mut cuts = ev.breakpoints();
                cuts.extend(quad::sign_changes(&mut g, 0.0, 2.0 * PI, scan));
                let mut integrand = |t: f64| ev.eval(t).abs().powf(s);
                quad::integrate_with_breakpoints(&mut integrand, 0.0, 2.0 * PI, &cuts)
                    .max(0.0)
                    .powf(1.0 / s)
            }
            None => {
                let vals: Vec<f64> = f.values.iter().map(|v| v.abs().powf(s)).collect();
                quad::grid_rule(&vals).max(0.0).powf(1.0 / s)
            }
        },
    }
}

/// ‖cos‖ in the given norm on one period. Shows up as the constant in
/// front of every leading term, so it gets a dedicated closed path.
pub fn cos_norm(idx: NormIndex) -> f64 {
    match idx {
        NormIndex::Infinity => 1.0,
        NormIndex::Finite(s) => {
            let cuts = [PI / 2.0, 3.0 * PI / 2.0];
            quad::integrate_with_breakpoints(
                &mut |t: f64| t.cos().abs().powf(s),
                0.0,
                2.0 * PI,
                &cuts,
            )
            .powf(1.0 / s)
        }
    }
}

fn sup_norm(f: &SampledFunction) -> f64 {
    let grid_max = f.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let Some(ev) = &f.evaluator else {
        return grid_max;
    };
    // polish every near-maximal lobe; cheap because windows are one cell wide
    let h = 2.0 * PI / f.grid.len() as f64;
    let cutoff = grid_max * (1.0 - 1e-3);
    let mut best = grid_max;
    let mut refined = 0usize;
    for (j, &v) in f.values.iter().enumerate() {
        if v.abs() >= cutoff && refined < 256 {
            let x = f.grid.point(j);
            let mut g = |t: f64| ev.eval(t).abs();
            best = best.max(quad::golden_max(&mut g, x - h, x + h).1);
            refined += 1;
        }
    }
    best
}

/// Partial sum S_k: truncation to harmonics ≤ k.
pub fn partial_sum(p: &TrigPolynomial, k: usize) -> TrigPolynomial {
    let kept = k.min(p.order());
    let mut out = TrigPolynomial::zero(kept);
    for j in 0..=kept {
        out.set(j, p.a(j), p.b(j));
    }
    out
}

/// Multipliers λ_k^{(n)} of the degree-(n,p) partial-sum average:
/// 1 on k ≤ n−p, then linear decay 1 − (k−n+p)/p; returned for k = 0..n−1.
pub fn vp_multipliers(n: usize, p: usize) -> Result<Vec<f64>> {
    if n == 0 || p == 0 || p > n {
        return Err(Error::param(format!(
            "need 1 <= p <= n, got n={n}, p={p}"
        )));
    }
    let out = (0..n)
        .map(|k| {
            if k + p <= n {
                1.0
            } else {
                1.0 - (k + p - n) as f64 / p as f64
            }
        })
        .collect();
    Ok(out)
}

/// V_{n,p}(f) = (1/p) Σ_{k=n−p}^{n−1} S_k(f), computed through the
/// multiplier form. The result has order ≤ n−1.
pub fn vp_sum(f: &TrigPolynomial, n: usize, p: usize) -> Result<TrigPolynomial> {
    let lambda = vp_multipliers(n, p)?;
    let kept = (n - 1).min(f.order());
    let mut out = TrigPolynomial::zero(kept);
    for k in 0..=kept {
        out.set(k, lambda[k] * f.a(k), lambda[k] * f.b(k));
    }
    Ok(out)
}

/// Deviation ρ_{n,p}(f) = f − V_{n,p}(f), sampled on `g`, with its sup norm.
/// The grid must resolve the order of f.
pub fn deviation_rho(
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
    let v = vp_sum(f, n, p)?;
    let rho = f - &v;
    let sf = eval_poly(&rho, g);
    let sup = norm(&sf, NormIndex::Infinity);
    Ok((sf, sup))
}
