//! Transaction-cost functions `C(ξ)` and their mean value modification
//!
//! ```text
//! C̃(ξ) = ∫₀^∞ C(ξx) x exp(-x²/2) dx,
//! ```
//!
//! the Gaussian-weighted average cost that enters the volatility of the
//! variable transaction costs model. Closed forms are used wherever they
//! exist; [`CostFunction::mean_value_modification_quadrature`] evaluates the
//! defining integral directly and is kept as an independent check.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numerics::{self, gaussian_window, mills_ratio, NumericsError};

/// Upper truncation of the half-line integral; `x exp(-x²/2)` is far below
/// double precision there.
const GAUSSIAN_CUTOFF: f64 = 40.0;

/// Above this `κξ` the exponential closed form switches to its asymptotic series.
const EXP_SERIES_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("invalid cost parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Per-unit transaction cost as a function of traded volume `ξ = |Δδ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostFunction {
    /// Leland's constant rate.
    Constant { c0: f64 },
    /// `C0 - κξ`; turns negative past `ξ = C0/κ` and is kept that way.
    Linear { c0: f64, kappa: f64 },
    /// `C0` up to `ξ₋`, linear decrease to the floor `C0 - κ(ξ₊ - ξ₋)` at `ξ₊`.
    PiecewiseLinear { c0: f64, kappa: f64, xi_minus: f64, xi_plus: f64 },
    /// `C0 exp(-κξ)`.
    Exponential { c0: f64, kappa: f64 },
}

fn invalid(msg: impl Into<String>) -> CostError {
    CostError::InvalidParameter(msg.into())
}

impl CostFunction {
    pub fn constant(c0: f64) -> Result<Self, CostError> {
        let c = Self::Constant { c0 };
        c.validate()?;
        Ok(c)
    }

    pub fn linear(c0: f64, kappa: f64) -> Result<Self, CostError> {
        let c = Self::Linear { c0, kappa };
        c.validate()?;
        Ok(c)
    }

    pub fn piecewise_linear(c0: f64, kappa: f64, xi_minus: f64, xi_plus: f64) -> Result<Self, CostError> {
        let c = Self::PiecewiseLinear { c0, kappa, xi_minus, xi_plus };
        c.validate()?;
        Ok(c)
    }

    pub fn exponential(c0: f64, kappa: f64) -> Result<Self, CostError> {
        let c = Self::Exponential { c0, kappa };
        c.validate()?;
        Ok(c)
    }

    /// Checks the parameter invariants of the variant.
    pub fn validate(&self) -> Result<(), CostError> {
        let c0 = self.c0();
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(invalid(format!("C0 must be positive and finite, got {c0}")));
        }
        match *self {
            Self::Constant { .. } => Ok(()),
            Self::Linear { kappa, .. } | Self::Exponential { kappa, .. } => {
                if !(kappa >= 0.0) || !kappa.is_finite() {
                    return Err(invalid(format!("kappa must be nonnegative and finite, got {kappa}")));
                }
                Ok(())
            }
            Self::PiecewiseLinear { kappa, xi_minus, xi_plus, .. } => {
                if !(kappa >= 0.0) || !kappa.is_finite() {
                    return Err(invalid(format!("kappa must be nonnegative and finite, got {kappa}")));
                }
                if !(xi_minus >= 0.0) || !xi_minus.is_finite() || !(xi_plus > xi_minus) {
                    return Err(invalid(format!(
                        "breakpoints must satisfy 0 <= xi_minus < xi_plus, got {xi_minus}, {xi_plus}"
                    )));
                }
                let floor = self.floor().unwrap_or(f64::NEG_INFINITY);
                if !(floor > 0.0) {
                    return Err(invalid(format!(
                        "floor C0 - kappa (xi_plus - xi_minus) must be positive, got {floor}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Cost rate at zero volume, `C(0) = C0`.
    pub fn c0(&self) -> f64 {
        match *self {
            Self::Constant { c0 }
            | Self::Linear { c0, .. }
            | Self::PiecewiseLinear { c0, .. }
            | Self::Exponential { c0, .. } => c0,
        }
    }

    /// Infimum `C̲0` of the cost over `ξ >= 0`; `None` when unbounded below.
    pub fn floor(&self) -> Option<f64> {
        match *self {
            Self::Constant { c0 } => Some(c0),
            Self::Linear { c0, kappa } => (kappa == 0.0).then_some(c0),
            Self::PiecewiseLinear { c0, kappa, xi_minus, xi_plus } => {
                if kappa == 0.0 {
                    Some(c0)
                } else if xi_plus.is_infinite() {
                    None
                } else {
                    Some(c0 - kappa * (xi_plus - xi_minus))
                }
            }
            Self::Exponential { c0, kappa } => Some(if kappa == 0.0 { c0 } else { 0.0 }),
        }
    }

    /// Volumes where `C` has a kink.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            Self::PiecewiseLinear { xi_minus, xi_plus, .. } => {
                [xi_minus, xi_plus].into_iter().filter(|x| *x > 0.0 && x.is_finite()).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Pointwise cost `C(ξ)`.
    pub fn eval(&self, xi: f64) -> f64 {
        match *self {
            Self::Constant { c0 } => c0,
            Self::Linear { c0, kappa } => c0 - kappa * xi,
            Self::PiecewiseLinear { c0, kappa, xi_minus, xi_plus } => {
                if xi <= xi_minus {
                    c0
                } else if xi <= xi_plus {
                    c0 - kappa * (xi - xi_minus)
                } else {
                    c0 - kappa * (xi_plus - xi_minus)
                }
            }
            Self::Exponential { c0, kappa } => c0 * (-kappa * xi).exp(),
        }
    }

    /// Closed-form mean value modification `C̃(ξ)`; `C̃(0) = C(0)`.
    pub fn mean_value_modification(&self, xi: f64) -> f64 {
        let xi = xi.abs();
        if xi == 0.0 {
            return self.c0();
        }
        match *self {
            Self::Constant { c0 } => c0,
            Self::Linear { c0, kappa } => c0 - kappa * xi * (PI / 2.0).sqrt(),
            Self::PiecewiseLinear { c0, kappa, xi_minus, xi_plus } => {
                // integration by parts leaves only the sloped segment
                c0 - kappa * xi * gaussian_window(xi_minus / xi, xi_plus / xi)
            }
            Self::Exponential { c0, kappa } => c0 * exp_one_minus_ag(kappa * xi),
        }
    }

    /// `dC̃/dξ` for `ξ > 0` (right limit at `ξ = 0`).
    pub fn mean_value_modification_derivative(&self, xi: f64) -> f64 {
        let xi = xi.abs();
        match *self {
            Self::Constant { .. } => 0.0,
            Self::Linear { kappa, .. } => -kappa * (PI / 2.0).sqrt(),
            Self::PiecewiseLinear { kappa, xi_minus, xi_plus, .. } => {
                if xi == 0.0 {
                    return if xi_minus == 0.0 { -kappa * (PI / 2.0).sqrt() } else { 0.0 };
                }
                let lo = xi_minus / xi;
                let hi = xi_plus / xi;
                -kappa * gaussian_window(lo, hi) - kappa * (tail_weight(lo) - tail_weight(hi))
            }
            Self::Exponential { c0, kappa } => -c0 * kappa * exp_derivative_core(kappa * xi),
        }
    }

    /// `C̃(ξ)` by adaptive quadrature of its defining integral, to absolute
    /// tolerance `1e-13`.
    pub fn mean_value_modification_quadrature(&self, xi: f64) -> Result<f64, CostError> {
        self.mean_value_modification_quadrature_tol(xi, 1e-13)
    }

    pub fn mean_value_modification_quadrature_tol(&self, xi: f64, tol: f64) -> Result<f64, CostError> {
        let xi = xi.abs();
        let mut points = vec![0.0];
        if xi > 0.0 {
            let mut inner: Vec<f64> = self
                .kinks()
                .into_iter()
                .map(|k| k / xi)
                .filter(|x| *x < GAUSSIAN_CUTOFF)
                .collect();
            // the exponential decay length 1/(κξ) can be far below the Gaussian scale
            if let Self::Exponential { kappa, .. } = *self {
                let scale = 1.0 / (kappa * xi);
                inner.extend([scale, 5.0 * scale, 40.0 * scale].into_iter().filter(|x| *x < GAUSSIAN_CUTOFF));
            }
            inner.sort_by(f64::total_cmp);
            points.extend(inner);
        }
        points.push(GAUSSIAN_CUTOFF);
        let value = numerics::integrate_pieces(
            |x| self.eval(xi * x) * x * (-0.5 * x * x).exp(),
            &points,
            tol,
            numerics::DEFAULT_MAX_SUBDIVISIONS,
        )?;
        Ok(value)
    }
}

/// `u exp(-u²/2)`, zero at `u = ∞`.
fn tail_weight(u: f64) -> f64 {
    if u.is_infinite() || u > GAUSSIAN_CUTOFF {
        0.0
    } else {
        u * (-0.5 * u * u).exp()
    }
}

/// `1 - a g(a)` with `g` the Gaussian Mills ratio; this is `C̃/C0` for the
/// exponential cost at `a = κξ`.
fn exp_one_minus_ag(a: f64) -> f64 {
    if a < EXP_SERIES_THRESHOLD {
        return 1.0 - a * mills_ratio(a);
    }
    // 1 - a g(a) = Σ_{k>=1} (-1)^{k+1} (2k-1)!! / a^{2k}
    let inv = 1.0 / (a * a);
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..30 {
        term *= (2 * k - 1) as f64 * inv;
        let signed = if k % 2 == 1 { term } else { -term };
        sum += signed;
        if term < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(1 + a²) g(a) - a`, so that `dC̃/dξ = -C0 κ · core(κξ)` for the exponential cost.
fn exp_derivative_core(a: f64) -> f64 {
    if a < EXP_SERIES_THRESHOLD {
        return (1.0 + a * a) * mills_ratio(a) - a;
    }
    // Σ_{k>=1} (-1)^{k+1} 2k (2k-1)!! / a^{2k+1}
    let inv = 1.0 / (a * a);
    let mut dfact = 1.0;
    let mut power = 1.0 / a;
    let mut sum = 0.0;
    for k in 1..30 {
        dfact *= (2 * k - 1) as f64;
        power *= inv;
        let term = 2.0 * k as f64 * dfact * power;
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
