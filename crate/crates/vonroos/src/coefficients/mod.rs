//! Effective ambiguity coefficients.
//!
//! Averaging the symmetrized kinetic pair over a weight distribution on the
//! ordering triangle produces a kinetic operator of the fixed shape
//!
//! ```text
//! T = -1/2 [ eta1·m'^2/m^3 + eta2·m''/m^2 - m'/m^2·d/dx + (1/m)·d^2/dx^2 ]
//! ```
//!
//! where only the two scalars depend on the distribution:
//!
//! ```text
//! eta1 = < 1 + a + b + a·b + a^2 >_rho        (weighted mean)
//! eta2 = < -(1 + b)/2 >_rho
//! ```
//!
//! This module computes `(eta1, eta2)` and the total weight by iterated
//! Gauss-Legendre quadrature for continuous weights, by exact rational
//! summation for discrete weights, by closed forms for the uniform and
//! Lorentzian-sum densities, and by a seeded Monte Carlo estimator used as
//! an independent cross-check. All computations are pure; sweeps over many
//! region sizes can run concurrently without coordination.

mod closed_form;
mod monte_carlo;
mod quadrature;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::domain::{DomainError, Region};
use crate::rational::{integer, ratio, rational_from_f64, rational_to_f64};
use crate::weight::{WeightError, WeightSpec};

pub use closed_form::{lorentz_closed_form, uniform_closed_form};
pub use monte_carlo::{mc_estimate, McEstimate};
pub use quadrature::{gauss_legendre, region_nodes, QuadratureConfig, MAX_QUADRATURE_ORDER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoefficientError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("total weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error(
        "quadrature did not reach tolerance {tol} by order {order}; \
         best estimate eta1 = {eta1}, eta2 = {eta2}"
    )]
    NoConvergence {
        tol: f64,
        order: usize,
        eta1: f64,
        eta2: f64,
    },
    #[error("quadrature order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("refinement tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("closed form evaluated non-finite at b = {b}")]
    NonFiniteValue { b: f64 },
    #[error("Monte Carlo estimation needs at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },
    #[error("Monte Carlo estimation requires a non-degenerate region")]
    DegenerateRegion,
    #[error("no Monte Carlo samples carried weight; effective area is zero")]
    NoAcceptedSamples,
}

/// Integrand whose weighted mean is `eta1`.
pub fn eta1_integrand(alpha: f64, beta: f64) -> f64 {
    1.0 + alpha + beta + alpha * beta + alpha * alpha
}

/// Integrand whose weighted mean is `eta2`.
pub fn eta2_integrand(alpha: f64, beta: f64) -> f64 {
    -0.5 * (1.0 + beta)
}

/// Exact counterpart of [`eta1_integrand`].
pub fn eta1_integrand_exact(alpha: &BigRational, beta: &BigRational) -> BigRational {
    integer(1) + alpha + beta + alpha * beta + alpha * alpha
}

/// Exact counterpart of [`eta2_integrand`].
pub fn eta2_integrand_exact(_alpha: &BigRational, beta: &BigRational) -> BigRational {
    ratio(-1, 2) * (integer(1) + beta)
}

/// Exact coefficient triple, available when the computation ran in rational
/// arithmetic end to end.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients {
    pub eta1: BigRational,
    pub eta2: BigRational,
    pub total_weight: BigRational,
}

/// The pair `(eta1, eta2)` plus the normalization (total weight).
#[derive(Debug, Clone, PartialEq)]
pub struct KineticCoefficients {
    pub eta1: f64,
    pub eta2: f64,
    pub total_weight: f64,
    /// Set when the result was computed exactly (discrete sums, degenerate
    /// point evaluation).
    pub exact: Option<ExactCoefficients>,
}

impl KineticCoefficients {
    pub fn approximate(eta1: f64, eta2: f64, total_weight: f64) -> Self {
        KineticCoefficients {
            eta1,
            eta2,
            total_weight,
            exact: None,
        }
    }

    pub fn from_exact(eta1: BigRational, eta2: BigRational, total_weight: BigRational) -> Self {
        KineticCoefficients {
            eta1: rational_to_f64(&eta1),
            eta2: rational_to_f64(&eta2),
            total_weight: rational_to_f64(&total_weight),
            exact: Some(ExactCoefficients {
                eta1,
                eta2,
                total_weight,
            }),
        }
    }
}

/// Exact weighted means over a discrete weight.
///
/// Since every finite double converts exactly to a rational, the sums run in
/// rational arithmetic end to end and the result carries the exact triple.
pub fn coefficients_discrete(weight: &WeightSpec) -> Result<KineticCoefficients, CoefficientError> {
    let WeightSpec::Discrete(discrete) = weight else {
        return Err(WeightError::NotDiscrete.into());
    };
    let mut total = BigRational::zero();
    let mut sum1 = BigRational::zero();
    let mut sum2 = BigRational::zero();
    for entry in discrete.entries() {
        let c = rational_from_f64(entry.c).expect("entries validated finite");
        sum1 = sum1 + &c * eta1_integrand_exact(&entry.alpha, &entry.beta);
        sum2 = sum2 + &c * eta2_integrand_exact(&entry.alpha, &entry.beta);
        total = total + c;
    }
    if !total.is_positive() {
        return Err(WeightError::ZeroTotalWeight.into());
    }
    Ok(KineticCoefficients::from_exact(
        &sum1 / &total,
        &sum2 / &total,
        total,
    ))
}

/// Ambiguity coefficients for a continuous weight over a region.
///
/// Non-degenerate regions are integrated by iterated Gauss-Legendre
/// quadrature per [`QuadratureConfig`]; when refinement is enabled the
/// order doubles until successive `(eta1, eta2)` estimates agree within the
/// tolerance, failing with the best estimate if
/// [`MAX_QUADRATURE_ORDER`] is reached first. The degenerate region
/// (`b = -2/3`) is handled by exact evaluation at its single point
/// `(-1/3, -1/3)`, where the normalized means reduce to point values.
pub fn coefficients_continuous(
    region: &Region,
    weight: &WeightSpec,
    config: &QuadratureConfig,
) -> Result<KineticCoefficients, CoefficientError> {
    if !weight.is_continuous() {
        return Err(WeightError::NotContinuous.into());
    }
    if region.is_degenerate() {
        return degenerate_point_coefficients(weight);
    }

    let mut order = config.order();
    let mut estimate = quadrature::integrate(region, weight, order)?;
    let Some(tol) = config.refine_tol() else {
        return Ok(KineticCoefficients::approximate(
            estimate.eta1,
            estimate.eta2,
            estimate.total,
        ));
    };

    while order < MAX_QUADRATURE_ORDER {
        order *= 2;
        let refined = quadrature::integrate(region, weight, order)?;
        let drift = (refined.eta1 - estimate.eta1)
            .abs()
            .max((refined.eta2 - estimate.eta2).abs());
        estimate = refined;
        if drift <= tol {
            return Ok(KineticCoefficients::approximate(
                estimate.eta1,
                estimate.eta2,
                estimate.total,
            ));
        }
    }
    Err(CoefficientError::NoConvergence {
        tol,
        order,
        eta1: estimate.eta1,
        eta2: estimate.eta2,
    })
}

/// Point evaluation at `(-1/3, -1/3)`: the weighted means of a single point
/// are the integrand values there, independent of the weight's magnitude;
/// the total weight is the density at the point.
fn degenerate_point_coefficients(
    weight: &WeightSpec,
) -> Result<KineticCoefficients, CoefficientError> {
    let alpha = ratio(-1, 3);
    let beta = ratio(-1, 3);
    let density = weight.eval_exact(&alpha, &beta)?;
    if !density.is_positive() {
        return Err(CoefficientError::NonPositiveWeight(rational_to_f64(
            &density,
        )));
    }
    Ok(KineticCoefficients::from_exact(
        eta1_integrand_exact(&alpha, &beta),
        eta2_integrand_exact(&alpha, &beta),
        density,
    ))
}
