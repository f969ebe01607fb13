//! Normal CDF and the station-level probability kernels built on it.
//!
//! Everything downstream (error probabilities, expected costs, ratio
//! sequencing) reduces to three quantities per station: the false-flag
//! probability on clean containers, the missed-flag probability on suspect
//! ones, and the marginal pass probability under the prior.

mod erf;

pub use erf::erfc;

use crate::model::Station;
use crate::Error;

/// A value certified to lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Option<Self> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Some(Probability(value))
        } else {
            None
        }
    }

    /// Clamps floating-point spill just outside [0, 1] back onto the ends.
    pub(crate) fn clamped(value: f64) -> Self {
        Probability(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Standard normal CDF `Phi(z)`.
///
/// Accurate to better than 1e-12 absolute error; saturates to exactly 0 or 1
/// for |z| > 40. Non-finite input is rejected.
pub fn normal_cdf(z: f64) -> Result<Probability, Error> {
    if !z.is_finite() {
        return Err(Error::NonFinite {
            what: "normal_cdf argument",
        });
    }
    Ok(Probability(phi(z)))
}

pub(crate) fn phi(z: f64) -> f64 {
    if z < -40.0 {
        return 0.0;
    }
    if z > 40.0 {
        return 1.0;
    }
    (0.5 * erfc(-z * std::f64::consts::FRAC_1_SQRT_2)).clamp(0.0, 1.0)
}

/// Upper tail `1 - Phi(z)` without cancellation: goes through erfc directly
/// so tiny tails keep their relative accuracy.
pub(crate) fn phi_upper(z: f64) -> f64 {
    if z < -40.0 {
        return 1.0;
    }
    if z > 40.0 {
        return 0.0;
    }
    (0.5 * erfc(z * std::f64::consts::FRAC_1_SQRT_2)).clamp(0.0, 1.0)
}

/// P(station flags a clean container) = P(r > T | x = 0) = 1 - Phi(T / sigma0).
pub fn type1_error(station: &Station, threshold: f64) -> Probability {
    Probability(phi_upper(threshold / station.sigma0))
}

/// P(station clears a suspect container) = P(r <= T | x = 1) = Phi((T - 1) / sigma1).
pub fn type2_error(station: &Station, threshold: f64) -> Probability {
    Probability(phi((threshold - 1.0) / station.sigma1))
}

/// Marginal probability the station clears a container under prior `pi`:
/// `(1 - pi) * Phi(T / sigma0) + pi * Phi((T - 1) / sigma1)`.
pub fn pass_probability(station: &Station, threshold: f64, prior: f64) -> Probability {
    let clean_pass = phi(threshold / station.sigma0);
    let suspect_pass = phi((threshold - 1.0) / station.sigma1);
    Probability::clamped((1.0 - prior) * clean_pass + prior * suspect_pass)
}
