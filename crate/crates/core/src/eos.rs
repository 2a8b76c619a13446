//! Barotropic equation of state `p(rho) = kappa * rho^gamma`.
//!
//! The specific internal energy is the antiderivative of `p / rho^2` that
//! vanishes as `rho -> 0+`, which for `gamma > 1` gives
//! `eps(rho) = kappa * rho^(gamma - 1) / (gamma - 1)`.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    kappa: f64,
    gamma: f64,
}

impl PressureLaw {
    pub fn new(kappa: f64, gamma: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Domain { quantity: "kappa", value: kappa });
        }
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::Domain { quantity: "gamma", value: gamma });
        }
        Ok(Self { kappa, gamma })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho).map(|rho| self.p(rho))
    }

    /// `p'(rho) = kappa * gamma * rho^(gamma - 1)`.
    pub fn dpressure(&self, rho: f64) -> Result<f64> {
        check_density(rho).map(|rho| self.dp(rho))
    }

    pub fn internal_energy(&self, rho: f64) -> Result<f64> {
        check_density(rho).map(|rho| self.eps(rho))
    }

    /// `eps(rho) + p(rho) / rho`, strictly increasing with derivative `p'(rho) / rho`.
    pub fn enthalpy_like(&self, rho: f64) -> Result<f64> {
        check_density(rho).map(|rho| self.enthalpy(rho))
    }

    // Unchecked evaluations for callers that validated their densities already.

    pub(crate) fn p(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    pub(crate) fn dp(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0)
    }

    pub(crate) fn eps(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma - 1.0) / (self.gamma - 1.0)
    }

    pub(crate) fn enthalpy(&self, rho: f64) -> f64 {
        self.eps(rho) + self.p(rho) / rho
    }
}

pub(crate) fn check_density(rho: f64) -> Result<f64> {
    if rho.is_finite() && rho > 0.0 {
        Ok(rho)
    } else {
        Err(Error::Domain { quantity: "density", value: rho })
    }
}
