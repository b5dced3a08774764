//! The map between the planar angle of a cap and the fraction of the sphere's
//! surface it covers, and the cost models that follow from it.
//!
//! For the cap of half-angle `theta` about any axis in `R^n`,
//!
//! ```text
//! Theta(theta) = 1/2 I_{sin^2 theta}((n-1)/2, 1/2)        theta <= pi/2
//!              = 1 - 1/2 I_{sin^2 theta}((n-1)/2, 1/2)    theta >  pi/2
//! ```
//!
//! `sin^2` and `cos^2` are passed to the incomplete beta routine side by side,
//! so neither branch loses precision near `pi/2`.

use std::f64::consts::{FRAC_PI_2, LN_10, LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{self, BetaParams};

/// A cost reported both as `log10` and, when representable, linearly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cost {
    pub log10: f64,
    /// `None` when `10^log10` overflows an `f64`.
    pub value: Option<f64>,
}

impl Cost {
    fn from_ln(ln: f64) -> Self {
        let value = ln.exp();
        Cost {
            log10: ln / LN_10,
            value: value.is_finite().then_some(value),
        }
    }
}

/// Dimension-bound evaluator of the angle map, its inverse and the cost
/// formulas.
#[derive(Debug, Clone, Copy)]
pub struct AngleMap {
    n: usize,
    params: BetaParams,
    ln_beta: f64,
}

impl AngleMap {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("angle map requires n >= 2, got {n}")));
        }
        let params = BetaParams::new((n as f64 - 1.0) / 2.0, 0.5)?;
        let ln_beta = specfun::log_beta(params)?;
        Ok(AngleMap { n, params, ln_beta })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `ln B((n-1)/2, 1/2)`. Its negative is `ln(s_{n-1} / s_n)`.
    pub fn ln_beta(&self) -> f64 {
        self.ln_beta
    }

    fn check_angle(theta: f64) -> Result<()> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!(
                "planar angle must lie in [0, pi], got {theta}"
            )));
        }
        Ok(())
    }

    fn half_inc_beta(&self, theta: f64) -> Result<specfun::IncBeta> {
        let (s, c) = theta.sin_cos();
        specfun::inc_beta(
            s * s,
            c * c,
            self.params.alpha(),
            self.params.beta(),
            self.ln_beta,
        )
    }

    /// Solid angle fraction `Theta(theta)` of the cap with half-angle `theta`.
    pub fn theta_to_fraction(&self, theta: f64) -> Result<f64> {
        Self::check_angle(theta)?;
        let ib = self.half_inc_beta(theta)?;
        if theta <= FRAC_PI_2 {
            Ok(0.5 * ib.value)
        } else {
            Ok(1.0 - 0.5 * ib.value)
        }
    }

    /// `ln Theta(theta)`; finite for every `theta > 0` even when the fraction
    /// underflows.
    pub fn ln_theta_to_fraction(&self, theta: f64) -> Result<f64> {
        Self::check_angle(theta)?;
        let ib = self.half_inc_beta(theta)?;
        if theta <= FRAC_PI_2 {
            Ok(ib.ln_value - LN_2)
        } else {
            Ok((-0.5 * ib.value).ln_1p())
        }
    }

    /// Inverse map: the half-angle whose cap covers the fraction `omega`.
    pub fn fraction_to_theta(&self, omega: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::domain(format!(
                "solid angle fraction must lie in [0, 1], got {omega}"
            )));
        }
        let a = self.params.alpha();
        let b = self.params.beta();
        if omega <= 0.5 {
            let (x, xc) = specfun::inv_inc_beta(2.0 * omega, a, b, self.ln_beta)?;
            Ok(x.sqrt().atan2(xc.sqrt()))
        } else {
            let (x, xc) = specfun::inv_inc_beta(2.0 * (1.0 - omega), a, b, self.ln_beta)?;
            Ok(PI - x.sqrt().atan2(xc.sqrt()))
        }
    }

    /// Expected number of uniform sphere draws per draw landing in the cap,
    /// `1 / Theta(theta)`.
    pub fn rejection_cost(&self, theta: f64) -> Result<Cost> {
        if !(theta > 0.0) {
            return Err(Error::domain(format!(
                "rejection cost requires theta > 0, got {theta}"
            )));
        }
        Ok(Cost::from_ln(-self.ln_theta_to_fraction(theta)?))
    }

    /// Small-angle closed form `sqrt(2 pi e (n-1)) / theta^(n-1)` of
    /// [`rejection_cost`](Self::rejection_cost).
    ///
    /// The constant comes from approximating `B((n-1)/2, 1/2)` by
    /// `sqrt(2 pi e / (n-1))`; the asymptotically exact constant is
    /// `sqrt(2 pi / (n-1))`, so this overestimates by a factor near
    /// `sqrt(e)` as `theta -> 0`.
    pub fn rejection_cost_small_angle(&self, theta: f64) -> Result<Cost> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::domain(format!(
                "small-angle rejection cost requires theta > 0, got {theta}"
            )));
        }
        let m = self.n as f64 - 1.0;
        let ln = 0.5 * (2.0 * PI * std::f64::consts::E * m).ln() - m * theta.ln();
        Ok(Cost::from_ln(ln))
    }

    /// Expected number of proposals per accepted planar angle in the
    /// one-dimensional rejection generator:
    /// `Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)) * theta0 * sin^(n-2)(min(theta0, pi/2)) / Theta(theta0)`.
    pub fn planar_rejection_cost(&self, theta0: f64) -> Result<Cost> {
        if !(theta0 > 0.0) {
            return Err(Error::domain(format!(
                "planar rejection cost requires theta0 > 0, got {theta0}"
            )));
        }
        let ln_theta = self.ln_theta_to_fraction(theta0)?;
        // Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)) = 1 / B((n-1)/2, 1/2)
        let ln_peak = (self.n as f64 - 2.0) * theta0.min(FRAC_PI_2).sin().ln();
        Ok(Cost::from_ln(
            -self.ln_beta + theta0.ln() + ln_peak - ln_theta,
        ))
    }
}
