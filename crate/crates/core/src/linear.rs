//! Closed-form Black–Scholes prices with constant volatility.
//!
//! These provide the sub- and super-solution price bounds and the oracle for
//! constant-coefficient runs of the Gamma solver.

use crate::beta::ModelError;
use crate::numerics::{normal_cdf, normal_pdf};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsInputs {
    pub spot: f64,
    pub strike: f64,
    pub rate: f64,
    pub sigma: f64,
    /// Time to expiry in years.
    pub tau: f64,
}

impl BsInputs {
    pub fn new(spot: f64, strike: f64, rate: f64, sigma: f64, tau: f64) -> Result<Self, ModelError> {
        let bad = |what: &str, v: f64| Err(ModelError::InvalidParameter(format!("{what} must be positive, got {v}")));
        if !(spot > 0.0) {
            return bad("spot", spot);
        }
        if !(strike > 0.0) {
            return bad("strike", strike);
        }
        if !(sigma > 0.0) {
            return bad("sigma", sigma);
        }
        if !(tau > 0.0) {
            return bad("tau", tau);
        }
        if !(rate >= 0.0) {
            return Err(ModelError::InvalidParameter(format!("rate must be nonnegative, got {rate}")));
        }
        Ok(Self { spot, strike, rate, sigma, tau })
    }

    fn d1_d2(&self) -> (f64, f64) {
        let vol_t = self.sigma * self.tau.sqrt();
        let d1 = ((self.spot / self.strike).ln() + (self.rate + 0.5 * self.sigma * self.sigma) * self.tau) / vol_t;
        (d1, d1 - vol_t)
    }

    fn discount(&self) -> f64 {
        (-self.rate * self.tau).exp()
    }
}

/// European call `S N(d1) - E e^{-rτ} N(d2)`.
pub fn bs_call(p: &BsInputs) -> f64 {
    let (d1, d2) = p.d1_d2();
    p.spot * normal_cdf(d1) - p.strike * p.discount() * normal_cdf(d2)
}

/// European put `E e^{-rτ} N(-d2) - S N(-d1)`.
pub fn bs_put(p: &BsInputs) -> f64 {
    let (d1, d2) = p.d1_d2();
    p.strike * p.discount() * normal_cdf(-d2) - p.spot * normal_cdf(-d1)
}

/// Call delta `N(d1)`.
pub fn bs_call_delta(p: &BsInputs) -> f64 {
    normal_cdf(p.d1_d2().0)
}

/// Put delta `N(d1) - 1`.
pub fn bs_put_delta(p: &BsInputs) -> f64 {
    -normal_cdf(-p.d1_d2().0)
}

/// `H = S ∂²V/∂S²` of the constant-volatility model at log-moneyness
/// `x = ln(S/E)` and time to expiry `tau`:
///
/// ```text
/// H(x, τ) = n(d) / (σ√τ),   d = (x + (r + σ²/2) τ) / (σ√τ)
/// ```
///
/// It solves `∂τH = σ²/2 (∂²ₓH + ∂ₓH) + r ∂ₓH` and tends to a Dirac mass at
/// `x = 0` as `τ → 0`. Depends only on `(σ, r, τ)`.
pub fn gamma_kernel(sigma: f64, rate: f64, tau: f64, x: f64) -> f64 {
    let vol_t = sigma * tau.sqrt();
    let d = (x + (rate + 0.5 * sigma * sigma) * tau) / vol_t;
    normal_pdf(d) / vol_t
}

pub fn bs_gamma_kernel(p: &BsInputs, x: f64) -> f64 {
    gamma_kernel(p.sigma, p.rate, p.tau, x)
}
