//! Gas/damping parameters and the theoretical decay-rate table.
//!
//! Everything downstream is derived from the adiabatic exponent `gamma`, the
//! friction decay exponent `nu`, and (for profiles) the total mass. The
//! pressure law is p(rho) = kappa rho^gamma with kappa = (gamma-1)^2/(4 gamma),
//! and the friction coefficient equals kappa as well, which is the
//! normalization that makes the kinetic entropy kernels rational.

use crate::error::{domain_err, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// One gas/damping configuration with every derived constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GasModel {
    /// Adiabatic exponent, > 1.
    pub gamma: f64,
    /// Friction decay exponent, in [0, 1).
    pub nu: f64,
    /// Pressure constant, (gamma-1)^2 / (4 gamma).
    pub kappa: f64,
    /// Friction strength; equals `kappa` by construction.
    pub alpha: f64,
    /// Kernel exponent (gamma-1)/2.
    pub theta: f64,
    /// Kernel weight exponent (3-gamma)/(2(gamma-1)); always > -1/2.
    pub lambda: f64,
    /// Raw moment of |z|^{2 gamma/(gamma-1)} against (1-z^2)^lambda.
    pub c1: f64,
    /// gamma(gamma+1)/(gamma-1)^2 times the raw moment of |z|^{2/(gamma-1)}.
    pub c2: f64,
    /// Base order for the weighted quadratures.
    pub quad_order: usize,
}

impl GasModel {
    /// Derives all constants from `(gamma, nu)`.
    ///
    /// The two entropy moments are computed by Jacobi-type quadrature with
    /// the |z|^sigma kink absorbed exactly, so they are accurate to machine
    /// precision even when lambda is negative (gamma > 3).
    pub fn derive(gamma: f64, nu: f64, quad_order: usize) -> Result<GasModel> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(domain_err!("gamma must be a finite number > 1, got {}", gamma));
        }
        if !(0.0..1.0).contains(&nu) {
            return Err(domain_err!("nu must lie in [0, 1), got {}", nu));
        }
        if quad_order == 0 {
            return Err(domain_err!("quadrature order must be positive"));
        }
        let kappa = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
        let theta = 0.5 * (gamma - 1.0);
        let lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
        let c1 = quad::kernel_integral(lambda, 2.0 * gamma / (gamma - 1.0), 0.0, quad_order, |_| 1.0);
        let low_moment = quad::kernel_integral(lambda, 2.0 / (gamma - 1.0), 0.0, quad_order, |_| 1.0);
        let c2 = gamma * (gamma + 1.0) / ((gamma - 1.0) * (gamma - 1.0)) * low_moment;
        Ok(GasModel {
            gamma,
            nu,
            kappa,
            alpha: kappa,
            theta,
            lambda,
            c1,
            c2,
            quad_order,
        })
    }

    /// Polytropic pressure p(rho) = kappa rho^gamma.
    #[inline]
    pub fn pressure(&self, rho: f64) -> f64 {
        self.kappa * pow_gamma(rho, self.gamma)
    }

    /// Sound speed sqrt(p'(rho)) = (gamma-1)/2 * rho^theta.
    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        // sqrt(gamma * kappa) = (gamma-1)/2 under this normalization
        0.5 * (self.gamma - 1.0) * pow_theta(rho, self.theta)
    }

    /// Breakpoint gamma/(gamma+2) separating the two damping regimes.
    #[inline]
    pub fn nu_breakpoint(&self) -> f64 {
        self.gamma / (self.gamma + 2.0)
    }

    /// True when `nu` sits in the slow-friction branch [0, gamma/(gamma+2)].
    /// The tie goes to this branch; the rates coincide there.
    #[inline]
    pub fn slow_friction_branch(&self) -> bool {
        self.nu <= self.nu_breakpoint()
    }
}

/// rho^gamma with fast paths for the common exponents.
#[inline]
pub fn pow_gamma(rho: f64, gamma: f64) -> f64 {
    if gamma == 2.0 {
        rho * rho
    } else if gamma == 1.5 {
        rho * rho.sqrt()
    } else if gamma == 3.0 {
        rho * rho * rho
    } else {
        rho.powf(gamma)
    }
}

/// rho^theta with fast paths for theta = 1/2 and 1/4.
#[inline]
pub fn pow_theta(rho: f64, theta: f64) -> f64 {
    if theta == 0.5 {
        rho.sqrt()
    } else if theta == 0.25 {
        rho.sqrt().sqrt()
    } else if theta == 1.0 {
        rho
    } else {
        rho.powf(theta)
    }
}

/// Theoretical long-time decay exponents for one configuration and slack.
///
/// Sign convention: `mu` carries the +epsilon written in its source line,
/// while `k`, `phi`, `mu_star` and `omega` carry -epsilon. Acceptance
/// comparisons always use the weaker (-epsilon) value, exposed by
/// [`RateTable::mu_acceptance`]; the discrepancy between the two written
/// conventions is surfaced in the constants report.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateTable {
    /// L1 density-distance exponent.
    pub k: f64,
    /// L^gamma density-distance exponent (valid for gamma >= 2), +epsilon
    /// convention as written.
    pub mu: f64,
    /// Relative-entropy integral exponent.
    pub phi: f64,
    /// Weight exponent of the L^{gamma+1} distance integral bound.
    pub mu_star: f64,
    /// Weight exponent of the time-integrated pressure-gap bound.
    pub theta_star: f64,
    /// Weight exponent of the mechanical-energy integral bound.
    pub omega: f64,
    /// The slack used throughout.
    pub epsilon: f64,
}

impl RateTable {
    /// Builds the table; requires `0 < epsilon < 0.01`.
    pub fn derive(model: &GasModel, epsilon: f64) -> Result<RateTable> {
        if !(epsilon > 0.0 && epsilon < 0.01) {
            return Err(domain_err!(
                "epsilon must lie in (0, 0.01), got {}",
                epsilon
            ));
        }
        let g = model.gamma;
        let nu = model.nu;
        let gp1 = g + 1.0;
        let (k0, mu0, mu_star0, theta_star) = if model.slow_friction_branch() {
            (
                g * (1.0 + nu) / (2.0 * gp1 * gp1),
                (g * g + g - 1.0) / (gp1 * gp1) * (1.0 + nu),
                1.0 + nu - (nu + 1.0) / (2.0 * gp1),
                nu,
            )
        } else {
            (
                g * (1.0 - nu) / (2.0 * gp1),
                (2.0 * g - 1.0 - nu) / gp1,
                1.5 + 0.5 * nu - (nu + 1.0) / gp1,
                (g - nu) / gp1,
            )
        };
        Ok(RateTable {
            k: k0 - epsilon,
            mu: mu0 + epsilon,
            phi: mu0 - epsilon,
            mu_star: mu_star0 - epsilon,
            theta_star,
            omega: (g - 1.0) * (nu + 1.0) / gp1 - epsilon,
            epsilon,
        })
    }

    /// The weaker -epsilon form of `mu`, used for all acceptance targets.
    #[inline]
    pub fn mu_acceptance(&self) -> f64 {
        self.mu - 2.0 * self.epsilon
    }
}
