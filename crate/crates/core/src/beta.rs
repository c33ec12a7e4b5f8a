//! Diffusion functions `β(H) = ½ σ̂(H)² H` of the Gamma equation, one per
//! volatility model, with their analytic derivatives.

use std::f64::consts::PI;

use thiserror::Error;

use crate::cost::{CostError, CostFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("Le = {le} >= 1: the model is not parabolic")]
    NotParabolic { le: f64 },
    #[error("operation requires the variable transaction costs model")]
    VariantMismatch,
    #[error("H = {0} is outside the model's domain (H >= 0)")]
    Domain(f64),
    #[error(transparent)]
    Cost(#[from] CostError),
}

fn sqrt_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

/// Sign with `sgn(0) = 0`.
fn sgn(h: f64) -> f64 {
    if h > 0.0 {
        1.0
    } else if h < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Leland number `√(2/π) C / (σ√Δt)`.
pub fn leland_number(cost_rate: f64, sigma: f64, dt: f64) -> f64 {
    sqrt_2_over_pi() * cost_rate / (sigma * dt.sqrt())
}

/// Volatility model entering `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaModel {
    /// Variable transaction costs with rebalancing interval `dt` (years).
    Vtc { sigma: f64, dt: f64, cost: CostFunction },
    /// Leland's model with a fixed Leland number.
    LelandConst { sigma: f64, le: f64 },
    /// Risk adjusted pricing methodology, `σ̂² = σ²(1 - μ H^{1/3})`.
    Rapm { sigma: f64, mu: f64 },
    /// Bakstein–Howison liquidity model.
    BaksteinHowison { sigma: f64, lambda: f64, gamma_bar: f64, alpha: f64 },
}

/// The pair `(Le, L̲e)` built from `C0` and the cost floor `C̲0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LelandNumbers {
    pub upper: f64,
    /// `None` for cost functions without a positive floor bound (linear costs).
    pub lower: Option<f64>,
}

impl BetaModel {
    pub fn vtc(sigma: f64, dt: f64, cost: CostFunction) -> Result<Self, ModelError> {
        let m = Self::Vtc { sigma, dt, cost };
        m.validate()?;
        Ok(m)
    }

    pub fn leland(sigma: f64, le: f64) -> Result<Self, ModelError> {
        let m = Self::LelandConst { sigma, le };
        m.validate()?;
        Ok(m)
    }

    /// Constant volatility (`β(H) = σ²H/2`), the `Le = 0` Leland model.
    pub fn black_scholes(sigma: f64) -> Result<Self, ModelError> {
        Self::leland(sigma, 0.0)
    }

    pub fn rapm(sigma: f64, mu: f64) -> Result<Self, ModelError> {
        let m = Self::Rapm { sigma, mu };
        m.validate()?;
        Ok(m)
    }

    /// RAPM with `μ = 3 (C0² R / 2π)^{1/3}` from the cost and risk premium measures.
    pub fn rapm_from_costs(sigma: f64, c0: f64, risk_premium: f64) -> Result<Self, ModelError> {
        if !(c0 >= 0.0) || !(risk_premium >= 0.0) {
            return Err(ModelError::InvalidParameter("C0 and R must be nonnegative".into()));
        }
        Self::rapm(sigma, 3.0 * (c0 * c0 * risk_premium / (2.0 * PI)).cbrt())
    }

    pub fn bakstein_howison(sigma: f64, lambda: f64, gamma_bar: f64, alpha: f64) -> Result<Self, ModelError> {
        let m = Self::BaksteinHowison { sigma, lambda, gamma_bar, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            Self::Vtc { sigma, .. }
            | Self::LelandConst { sigma, .. }
            | Self::Rapm { sigma, .. }
            | Self::BaksteinHowison { sigma, .. } => sigma,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let sigma = self.sigma();
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(ModelError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        match *self {
            Self::Vtc { dt, cost, .. } => {
                if !(dt > 0.0) || !dt.is_finite() {
                    return Err(ModelError::InvalidParameter(format!("dt must be positive, got {dt}")));
                }
                cost.validate()?;
                let le = leland_number(cost.c0(), sigma, dt);
                if le >= 1.0 {
                    return Err(ModelError::NotParabolic { le });
                }
                Ok(())
            }
            Self::LelandConst { le, .. } => {
                if !(le >= 0.0) {
                    return Err(ModelError::InvalidParameter(format!("Le must be nonnegative, got {le}")));
                }
                if le >= 1.0 {
                    return Err(ModelError::NotParabolic { le });
                }
                Ok(())
            }
            Self::Rapm { mu, .. } => {
                if !(mu >= 0.0) || !mu.is_finite() {
                    return Err(ModelError::InvalidParameter(format!("mu must be nonnegative, got {mu}")));
                }
                Ok(())
            }
            Self::BaksteinHowison { lambda, gamma_bar, alpha, .. } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(ModelError::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")));
                }
                if !lambda.is_finite() || !(gamma_bar >= 0.0) {
                    return Err(ModelError::InvalidParameter("lambda finite and gamma_bar >= 0 required".into()));
                }
                Ok(())
            }
        }
    }

    /// `(Le, L̲e)` of the variable transaction costs model.
    pub fn leland_numbers(&self) -> Result<LelandNumbers, ModelError> {
        match *self {
            Self::Vtc { sigma, dt, cost } => Ok(LelandNumbers {
                upper: leland_number(cost.c0(), sigma, dt),
                lower: cost.floor().map(|f| leland_number(f, sigma, dt)),
            }),
            _ => Err(ModelError::VariantMismatch),
        }
    }

    /// `(σ̂²_min, σ̂²_max) = (σ²(1 - Le), σ²(1 - L̲e))`, the constant variances
    /// of the sub- and super-solution models.
    pub fn sigma_bounds(&self) -> Result<(f64, f64), ModelError> {
        let ln = self.leland_numbers()?;
        let lower = ln.lower.ok_or_else(|| {
            ModelError::InvalidParameter("cost function has no positive floor; sigma_max undefined".into())
        })?;
        let s2 = self.sigma().powi(2);
        Ok((s2 * (1.0 - ln.upper), s2 * (1.0 - lower)))
    }

    /// Effective variance `σ̂(H)²`.
    pub fn volatility_sq(&self, h: f64) -> Result<f64, ModelError> {
        let s2 = self.sigma().powi(2);
        match *self {
            Self::Vtc { sigma, dt, cost } => {
                let scale = sigma * dt.sqrt();
                let ct = cost.mean_value_modification(scale * h.abs());
                Ok(s2 * (1.0 - sqrt_2_over_pi() * ct * sgn(h) / scale))
            }
            Self::LelandConst { le, .. } => Ok(s2 * (1.0 - le * sgn(h))),
            Self::Rapm { mu, .. } => {
                if h < 0.0 {
                    return Err(ModelError::Domain(h));
                }
                Ok(s2 * (1.0 - mu * h.cbrt()))
            }
            Self::BaksteinHowison { lambda, gamma_bar, alpha, .. } => {
                let a2 = (1.0 - alpha).powi(2);
                let k = sqrt_2_over_pi();
                Ok(s2
                    * (1.0 + gamma_bar * gamma_bar * a2
                        + 2.0 * lambda * h
                        + lambda * lambda * a2 * h * h
                        + 2.0 * k * gamma_bar * sgn(h)
                        + 2.0 * k * lambda * a2 * gamma_bar * h.abs()))
            }
        }
    }

    /// `σ̂` as `H → 0⁺`.
    pub fn volatility_right_limit_at_zero(&self) -> f64 {
        // every model is continuous from the right at 0 once sgn is fixed to +1
        let s2 = self.sigma().powi(2);
        let v = match *self {
            Self::Vtc { sigma, dt, cost } => s2 * (1.0 - leland_number(cost.c0(), sigma, dt)),
            Self::LelandConst { le, .. } => s2 * (1.0 - le),
            Self::Rapm { .. } => s2,
            Self::BaksteinHowison { gamma_bar, alpha, .. } => {
                s2 * (1.0 + gamma_bar * gamma_bar * (1.0 - alpha).powi(2) + 2.0 * sqrt_2_over_pi() * gamma_bar)
            }
        };
        v.sqrt()
    }

    /// `σ̂(0)` with `sgn(0) = 0`.
    pub fn volatility_at_zero(&self) -> f64 {
        self.volatility_sq(0.0).map(f64::sqrt).unwrap_or_else(|_| self.sigma())
    }

    /// Diffusion function `β(H) = ½ σ̂(H)² H`.
    pub fn beta(&self, h: f64) -> Result<f64, ModelError> {
        if h == 0.0 {
            return Ok(0.0);
        }
        Ok(0.5 * self.volatility_sq(h)? * h)
    }

    /// `β'(H)`. At `H = 0` the right limit is returned.
    pub fn beta_prime(&self, h: f64) -> Result<f64, ModelError> {
        let half_s2 = 0.5 * self.sigma().powi(2);
        match *self {
            Self::Vtc { sigma, dt, cost } => {
                let scale = sigma * dt.sqrt();
                let xi = scale * h.abs();
                let ct = cost.mean_value_modification(xi);
                let dct = if xi == 0.0 { 0.0 } else { xi * cost.mean_value_modification_derivative(xi) };
                // d/dH [C̃(scale|H|) H] = C̃(ξ) + ξ C̃'(ξ) on either side of 0
                let s = if h < 0.0 { -1.0 } else { 1.0 };
                Ok(half_s2 * (1.0 - s * sqrt_2_over_pi() / scale * (ct + dct)))
            }
            Self::LelandConst { le, .. } => {
                let s = if h < 0.0 { -1.0 } else { 1.0 };
                Ok(half_s2 * (1.0 - le * s))
            }
            Self::Rapm { mu, .. } => {
                if h < 0.0 {
                    return Err(ModelError::Domain(h));
                }
                Ok(half_s2 * (1.0 - 4.0 / 3.0 * mu * h.cbrt()))
            }
            Self::BaksteinHowison { lambda, gamma_bar, alpha, .. } => {
                let a2 = (1.0 - alpha).powi(2);
                let k = sqrt_2_over_pi();
                let s = if h < 0.0 { -1.0 } else { 1.0 };
                let level = 1.0 + gamma_bar * gamma_bar * a2 + 2.0 * k * gamma_bar * s;
                // β = ½σ²(level·H + 2λH² + λ²(1-α)²H³ + 2√(2/π)λ(1-α)²γ̄·H|H|)
                Ok(half_s2
                    * (level
                        + 4.0 * lambda * h
                        + 3.0 * lambda * lambda * a2 * h * h
                        + 4.0 * k * lambda * a2 * gamma_bar * h.abs()))
            }
        }
    }
}
