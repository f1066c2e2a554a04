//! Inverse-temperature and coupling schedules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One constant-parameter block of a piecewise schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    pub length: u64,
}

/// How `γ` evolves under an exponential-interpolation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GammaSchedule {
    Constant { gamma: f64 },
    Exponential { initial: f64, r#final: f64 },
}

impl Default for GammaSchedule {
    fn default() -> Self {
        GammaSchedule::Constant { gamma: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum AnnealSchedule {
    /// `β(it) = β_i (β_f / β_i)^{it / it_max}`.
    Exponential {
        beta_initial: f64,
        beta_final: f64,
        #[serde(default)]
        gamma: GammaSchedule,
        iterations: u64,
    },
    /// Constant `(β_n, γ_n)` for `T_n` consecutive steps.
    Piecewise { stages: Vec<Stage> },
}

impl AnnealSchedule {
    pub fn exponential(beta_initial: f64, beta_final: f64, iterations: u64) -> Result<Self> {
        Self::exponential_with_gamma(beta_initial, beta_final, GammaSchedule::default(), iterations)
    }

    pub fn exponential_with_gamma(
        beta_initial: f64,
        beta_final: f64,
        gamma: GammaSchedule,
        iterations: u64,
    ) -> Result<Self> {
        let s = AnnealSchedule::Exponential { beta_initial, beta_final, gamma, iterations };
        s.validate()?;
        Ok(s)
    }

    pub fn piecewise(stages: Vec<Stage>) -> Result<Self> {
        let s = AnnealSchedule::Piecewise { stages };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            AnnealSchedule::Exponential { beta_initial, beta_final, gamma, .. } => {
                if !(*beta_initial > 0.0 && beta_final >= beta_initial && beta_final.is_finite()) {
                    return bad(format!("need 0 < beta_initial <= beta_final, got {beta_initial}, {beta_final}"));
                }
                match *gamma {
                    GammaSchedule::Constant { gamma } if !(gamma >= 0.0 && gamma.is_finite()) => {
                        return bad(format!("gamma must be >= 0, got {gamma}"));
                    }
                    GammaSchedule::Exponential { initial, r#final }
                        if !(initial > 0.0 && r#final > 0.0 && r#final.is_finite()) =>
                    {
                        return bad(format!("interpolated gamma needs positive endpoints, got {initial}, {final}"));
                    }
                    _ => {}
                }
            }
            AnnealSchedule::Piecewise { stages } => {
                if stages.is_empty() {
                    return Err(Error::EmptySchedule);
                }
                let mut prev = 0.0;
                for s in stages {
                    if !(s.beta > 0.0 && s.beta.is_finite() && s.gamma >= 0.0 && s.length > 0) {
                        return bad(format!("invalid stage {s:?}"));
                    }
                    if s.beta < prev {
                        return bad("stage betas must be nondecreasing".into());
                    }
                    prev = s.beta;
                }
            }
        }
        Ok(())
    }

    /// Total number of steps `it_max`.
    pub fn iterations(&self) -> u64 {
        match self {
            AnnealSchedule::Exponential { iterations, .. } => *iterations,
            AnnealSchedule::Piecewise { stages } => stages.iter().map(|s| s.length).sum(),
        }
    }

    fn check_it(&self, it: u64) -> Result<()> {
        let max = self.iterations();
        if it > max {
            return Err(Error::IndexOutOfRange { index: it as usize, len: max as usize + 1 });
        }
        Ok(())
    }

    fn stage_at(stages: &[Stage], it: u64) -> &Stage {
        let mut end = 0;
        for s in stages {
            end += s.length;
            if it < end {
                return s;
            }
        }
        stages.last().expect("validated schedules are non-empty")
    }

    pub fn beta_at(&self, it: u64) -> Result<f64> {
        self.check_it(it)?;
        Ok(self.beta_unchecked(it))
    }

    pub fn gamma_at(&self, it: u64) -> Result<f64> {
        self.check_it(it)?;
        Ok(self.gamma_unchecked(it))
    }

    pub(crate) fn beta_unchecked(&self, it: u64) -> f64 {
        match self {
            AnnealSchedule::Exponential { beta_initial, beta_final, iterations, .. } => {
                interpolate(*beta_initial, *beta_final, it, *iterations)
            }
            AnnealSchedule::Piecewise { stages } => Self::stage_at(stages, it).beta,
        }
    }

    pub(crate) fn gamma_unchecked(&self, it: u64) -> f64 {
        match self {
            AnnealSchedule::Exponential { gamma, iterations, .. } => match *gamma {
                GammaSchedule::Constant { gamma } => gamma,
                GammaSchedule::Exponential { initial, r#final } => interpolate(initial, r#final, it, *iterations),
            },
            AnnealSchedule::Piecewise { stages } => Self::stage_at(stages, it).gamma,
        }
    }
}

fn interpolate(start: f64, end: f64, it: u64, max: u64) -> f64 {
    if max == 0 || it == 0 {
        return start;
    }
    if it >= max {
        return end;
    }
    start * (end / start).powf(it as f64 / max as f64)
}

/// Stage lengths `T_k = e^{m β_k} (ln κ₁ + C b) / C`, rounded up to an integer.
pub fn azencott_lengths(betas: &[f64], m: f64, kappa1: f64, c: f64, b: f64) -> Result<Vec<u64>> {
    if !(c > 0.0 && b > 0.0 && kappa1 >= 1.0 && m >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need C > 0, b > 0, kappa1 >= 1, m >= 0; got C={c}, b={b}, kappa1={kappa1}, m={m}"
        )));
    }
    let scale = (kappa1.ln() + c * b) / c;
    Ok(betas
        .iter()
        .map(|&beta| {
            let t = (m * beta).exp() * scale;
            let nearest = t.round();
            let t = if (t - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { t.ceil() };
            t.max(1.0) as u64
        })
        .collect())
}
