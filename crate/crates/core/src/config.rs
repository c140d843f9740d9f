//! JSON run configuration. Every key has a default so a config file only
//! states what it changes; unknown family/mode/kind strings are config
//! errors, while out-of-range cells (p > n) surface later as row statuses.

use crate::error::{Error, Result};
use crate::harness::{mix_seed, CaseSpec, PhiSpec, Tolerances, DEFAULT_SEED};
use crate::psi::{BetaSpec, PsiFamily};
use crate::trig::{NormIndex, TrigPolynomial};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsiConfig {
    pub family: String,
    /// base of the q^{k²} family
    pub q: Option<f64>,
    /// weight-table length override
    pub kmax: Option<usize>,
    /// values for the explicit family, k = 1, 2, …
    pub values: Option<Vec<f64>>,
}

impl Default for PsiConfig {
    fn default() -> Self {
        PsiConfig {
            family: "q_pow_k_squared".into(),
            q: None,
            kmax: None,
            values: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetaConfig {
    pub mode: String,
    pub value: Option<f64>,
    pub values: Option<Vec<f64>>,
}

impl Default for BetaConfig {
    fn default() -> Self {
        BetaConfig {
            mode: "constant".into(),
            value: None,
            values: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhiParams {
    /// random profiles: highest harmonic; defaults to n + 4 per cell
    pub order: Option<usize>,
    /// mollified profiles: ramp half-width
    pub delta: Option<f64>,
    /// explicit profiles: cosine coefficients a_0, a_1, …
    pub a: Option<Vec<f64>>,
    /// explicit profiles: sine coefficients (b_0 ignored)
    pub b: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhiConfig {
    pub kind: String,
    pub params: PhiParams,
    pub seed: Option<u64>,
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig {
            kind: "random".into(),
            params: PhiParams::default(),
            seed: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub psi: PsiConfig,
    pub beta: BetaConfig,
    pub s: NormIndex,
    /// inclusive; an inverted range is empty, not an error
    pub n_range: [usize; 2],
    pub p_range: [usize; 2],
    pub phi: PhiConfig,
    /// profiles per (n, p) cell; only random profiles vary across reps
    pub reps: usize,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            psi: PsiConfig::default(),
            beta: BetaConfig::default(),
            s: NormIndex::Finite(2.0),
            n_range: [4, 12],
            p_range: [1, 3],
            phi: PhiConfig::default(),
            reps: 1,
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn family(&self) -> Result<PsiFamily> {
        match self.psi.family.as_str() {
            "q_pow_k_squared" => {
                let q = self.psi.q.unwrap_or(0.5);
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::Config(format!("psi.q must lie in (0, 1), got {q}")));
                }
                Ok(PsiFamily::QPowKSquared(q))
            }
            "inverse_factorial" => Ok(PsiFamily::InverseFactorial),
            "explicit" => match &self.psi.values {
                Some(v) if !v.is_empty() => Ok(PsiFamily::Explicit(v.clone())),
                _ => Err(Error::Config(
                    "psi.family = explicit needs a non-empty psi.values".into(),
                )),
            },
            other => Err(Error::Config(format!(
                "unknown psi.family {other:?}; expected q_pow_k_squared, inverse_factorial or explicit"
            ))),
        }
    }

    pub fn beta(&self) -> Result<BetaSpec> {
        match self.beta.mode.as_str() {
            "constant" => Ok(BetaSpec::Constant(self.beta.value.unwrap_or(0.0))),
            "alternating" => Ok(BetaSpec::Alternating),
            "explicit" => match &self.beta.values {
                Some(v) if !v.is_empty() => Ok(BetaSpec::Explicit(v.clone())),
                _ => Err(Error::Config(
                    "beta.mode = explicit needs a non-empty beta.values".into(),
                )),
            },
            other => Err(Error::Config(format!(
                "unknown beta.mode {other:?}; expected constant, alternating or explicit"
            ))),
        }
    }

    fn phi_for(&self, n: usize, counter: u64, base_seed: u64) -> Result<PhiSpec> {
        match self.phi.kind.as_str() {
            "random" => Ok(PhiSpec::Random {
                order: self.phi.params.order.unwrap_or(n + 4),
                seed: mix_seed(base_seed, counter),
            }),
            "conjugate" => Ok(PhiSpec::Conjugate),
            "square_wave" => Ok(PhiSpec::SquareWave),
            "mollified" => Ok(PhiSpec::Mollified {
                delta: self.phi.params.delta,
            }),
            "explicit" => {
                let a = self.phi.params.a.clone().ok_or_else(|| {
                    Error::Config("phi.kind = explicit needs phi.params.a".into())
                })?;
                let b = self.phi.params.b.clone().unwrap_or_default();
                let t = TrigPolynomial::from_coeffs(a, b)
                    .map_err(|e| Error::Config(format!("bad explicit profile: {e}")))?;
                Ok(PhiSpec::Explicit(t))
            }
            other => Err(Error::Config(format!(
                "unknown phi.kind {other:?}; expected random, conjugate, square_wave, mollified or explicit"
            ))),
        }
    }

    /// Expands the ranges into concrete cells. `seed` overrides the config
    /// seed, `grid_size` pins the measurement grid of every cell.
    pub fn plan(&self, seed: Option<u64>, grid_size: Option<usize>) -> Result<Vec<CaseSpec>> {
        let family = self.family()?;
        let beta = self.beta()?;
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        let base_seed = seed.or(self.phi.seed).unwrap_or(DEFAULT_SEED);
        let mut plan = Vec::new();
        let mut counter = 0u64;
        for n in self.n_range[0]..=self.n_range[1] {
            for p in self.p_range[0]..=self.p_range[1] {
                for _ in 0..self.reps {
                    let phi = self.phi_for(n, counter, base_seed)?;
                    counter += 1;
                    plan.push(CaseSpec {
                        family: family.clone(),
                        beta: beta.clone(),
                        s: self.s,
                        n,
                        p,
                        phi,
                        grid_size,
                        k_max: self.psi.kmax,
                    });
                }
            }
        }
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n_range, [4, 12]);
        assert_eq!(back.phi.kind, "random");
        assert!(matches!(back.s, NormIndex::Finite(v) if v == 2.0));
    }

    #[test]
    fn minimal_json_uses_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"s": "inf"}"#).unwrap();
        assert!(cfg.s.is_infinite());
        let plan = cfg.plan(None, None).unwrap();
        assert_eq!(plan.len(), 9 * 3);
        let seeds: std::collections::HashSet<_> =
            plan.iter().filter_map(|c| c.phi.seed()).collect();
        assert_eq!(seeds.len(), plan.len());
    }

    #[test]
    fn unknown_names_are_config_errors() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"psi": {"family": "gaussian"}}"#).unwrap();
        assert!(matches!(cfg.plan(None, None), Err(Error::Config(_))));
        let cfg: RunConfig = serde_json::from_str(r#"{"beta": {"mode": "ramp"}}"#).unwrap();
        assert!(matches!(cfg.plan(None, None), Err(Error::Config(_))));
        let cfg: RunConfig = serde_json::from_str(r#"{"phi": {"kind": "spike"}}"#).unwrap();
        assert!(matches!(cfg.plan(None, None), Err(Error::Config(_))));
        assert!(serde_json::from_str::<RunConfig>(r#"{"psi": {"sigma": 2}}"#).is_err());
    }

    #[test]
    fn inverted_range_gives_empty_plan() {
        let cfg: RunConfig = serde_json::from_str(r#"{"n_range": [6, 5]}"#).unwrap();
        assert!(cfg.plan(None, None).unwrap().is_empty());
    }

    #[test]
    fn explicit_profile_and_seed_override() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{
                "n_range": [5, 5], "p_range": [2, 2],
                "phi": {"kind": "explicit", "params": {"a": [0.0, 0.0, 0.0, 0.0, 1.0]}}
            }"#,
        )
        .unwrap();
        let plan = cfg.plan(Some(9), Some(4096)).unwrap();
        assert_eq!(plan.len(), 1);
        assert!(matches!(&plan[0].phi, PhiSpec::Explicit(t) if t.order() == 4));
        assert_eq!(plan[0].grid_size, Some(4096));

        let cfg: RunConfig =
            serde_json::from_str(r#"{"n_range": [5, 5], "p_range": [1, 1]}"#).unwrap();
        let a = cfg.plan(Some(1), None).unwrap();
        let b = cfg.plan(Some(2), None).unwrap();
        assert_ne!(a[0].phi.seed(), b[0].phi.seed());
    }
}
