//! Closed-form reference coefficients for the built-in densities.
//!
//! Both results come from integrating the two ambiguity integrands over the
//! triangle directly; the quadrature engine is the arbiter used to validate
//! them, and the test suite pins the agreement.

use crate::domain::Region;

use super::{CoefficientError, KineticCoefficients};

/// Coefficients for the uniform density:
///
/// ```text
/// eta1 = (3 b^2 + 4 b + 28) / 48,   eta2 = -1/3,   A = (2 + 3 b)^2 / 8
/// ```
///
/// `eta2` is independent of the region size because the mean of `beta` over
/// the symmetric triangle sits at the centroid.
pub fn uniform_closed_form(b: f64) -> Result<KineticCoefficients, CoefficientError> {
    let region = Region::new(b)?;
    let eta1 = (3.0 * b * b + 4.0 * b + 28.0) / 48.0;
    Ok(KineticCoefficients::approximate(
        eta1,
        -1.0 / 3.0,
        region.projected_area(),
    ))
}

/// Coefficients for the Lorentzian-sum density
/// `rho = 1/(alpha^2+1) + 1/(beta^2+1)`.
///
/// With `L = ln(4 (2 + 2b + b^2) / (4 + b^2))` and
/// `T = atan(b/2) + atan(1 + b)`:
///
/// ```text
/// A    = 2 (1 + b) T - L
/// eta1 = [ -(3b^2 + 12b + 20) L + 2 (b^3 + 3b^2 + 12b + 4) T
///          + 15b^2 + 40b + 20 ] / (24 A)
/// eta2 = [ (b + 4) L - 2 (3b + 2) T - (3b + 2) ] / (8 A)
/// ```
///
/// At `b = -2/3` both numerators and `A` vanish; the analytic limit
/// `(5/9, -1/3)` is returned there (with zero total weight, since the
/// region has no area). Within roughly `1e-4` of the lower bound the
/// expressions lose accuracy to cancellation, `A` being second order in the
/// distance from the bound.
pub fn lorentz_closed_form(b: f64) -> Result<KineticCoefficients, CoefficientError> {
    let region = Region::new(b)?;
    if region.is_degenerate() {
        return Ok(KineticCoefficients::approximate(5.0 / 9.0, -1.0 / 3.0, 0.0));
    }
    let l = (4.0 * (2.0 + 2.0 * b + b * b) / (4.0 + b * b)).ln();
    let t = (b / 2.0).atan() + (1.0 + b).atan();
    let total = 2.0 * (1.0 + b) * t - l;
    let eta1 = (-(3.0 * b * b + 12.0 * b + 20.0) * l
        + 2.0 * (b * b * b + 3.0 * b * b + 12.0 * b + 4.0) * t
        + 15.0 * b * b
        + 40.0 * b
        + 20.0)
        / (24.0 * total);
    let eta2 = ((b + 4.0) * l - 2.0 * (3.0 * b + 2.0) * t - (3.0 * b + 2.0)) / (8.0 * total);
    if !eta1.is_finite() || !eta2.is_finite() || !total.is_finite() {
        return Err(CoefficientError::NonFiniteValue { b });
    }
    Ok(KineticCoefficients::approximate(eta1, eta2, total))
}
