//! Recovery of the ambiguity coefficients' dependence on the ordering
//! parameters.
//!
//! The symmetrized pair at rational `(alpha, beta)` yields exact values of
//! the two ambiguity coefficients. Interpolating those engine-produced
//! values over six or more points in general position pins down the unique
//! bivariate quadratic behind each coefficient, so the closed forms used by
//! the coefficient engine are machine-verified rather than assumed.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::rational::format_rational;

use super::{vonroos_pair, OperatorError};

/// Which of the two pair coefficients to interpolate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitTarget {
    /// Coefficient of m'^2/m^3.
    GradientSquared,
    /// Coefficient of m''/m^2.
    Curvature,
}

/// Bivariate quadratic `c0 + c1·a + c2·b + c3·a·b + c4·a^2 + c5·b^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    pub constant: BigRational,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub alpha_beta: BigRational,
    pub alpha_sq: BigRational,
    pub beta_sq: BigRational,
}

impl QuadraticForm {
    /// Coefficients in basis order `(1, a, b, a·b, a^2, b^2)`.
    pub fn coefficients(&self) -> [&BigRational; 6] {
        [
            &self.constant,
            &self.alpha,
            &self.beta,
            &self.alpha_beta,
            &self.alpha_sq,
            &self.beta_sq,
        ]
    }

    pub fn evaluate(&self, alpha: &BigRational, beta: &BigRational) -> BigRational {
        &self.constant
            + &self.alpha * alpha
            + &self.beta * beta
            + &self.alpha_beta * alpha * beta
            + &self.alpha_sq * alpha * alpha
            + &self.beta_sq * beta * beta
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["1", "a", "b", "a*b", "a^2", "b^2"];
        let mut first = true;
        for (coeff, name) in self.coefficients().into_iter().zip(names) {
            if coeff.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", format_rational(coeff), name)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Interpolate the selected pair coefficient over the given sample points.
///
/// Needs at least six distinct points in general position (no rank
/// deficiency of the quadratic Vandermonde system); otherwise a degeneracy
/// error asks for more samples. Extra points are checked for consistency.
pub fn fit_ambiguity_polynomial(
    samples: &[(BigRational, BigRational)],
    target: FitTarget,
) -> Result<QuadraticForm, OperatorError> {
    let distinct: BTreeSet<_> = samples.iter().cloned().collect();
    if distinct.len() < 6 {
        return Err(OperatorError::NotEnoughSamples {
            needed: 6,
            got: distinct.len(),
        });
    }

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(distinct.len());
    for (alpha, beta) in &distinct {
        let pair = vonroos_pair(alpha.clone(), beta.clone())?;
        let value = match target {
            FitTarget::GradientSquared => pair.f,
            FitTarget::Curvature => pair.g,
        };
        rows.push(vec![
            BigRational::from_integer(1.into()),
            alpha.clone(),
            beta.clone(),
            alpha * beta,
            alpha * alpha,
            beta * beta,
            value,
        ]);
    }

    let solution = solve_exact(rows, 6)?;
    let mut it = solution.into_iter();
    Ok(QuadraticForm {
        constant: it.next().unwrap(),
        alpha: it.next().unwrap(),
        beta: it.next().unwrap(),
        alpha_beta: it.next().unwrap(),
        alpha_sq: it.next().unwrap(),
        beta_sq: it.next().unwrap(),
    })
}

/// Gauss-Jordan elimination over exact rationals on an augmented system
/// (each row is `unknowns + 1` entries). Rank below `unknowns` is reported
/// as a degenerate sample set; an inconsistent overdetermined system is an
/// internal error, since every right-hand side here is engine-produced.
fn solve_exact(
    mut rows: Vec<Vec<BigRational>>,
    unknowns: usize,
) -> Result<Vec<BigRational>, OperatorError> {
    let n = rows.len();
    for col in 0..unknowns {
        let pivot_row = (col..n).find(|&r| !rows[r][col].is_zero());
        let Some(pivot_row) = pivot_row else {
            return Err(OperatorError::DegenerateSamples);
        };
        rows.swap(col, pivot_row);
        let pivot = rows[col][col].clone();
        for entry in rows[col].iter_mut() {
            *entry = entry.clone() / pivot.clone();
        }
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..=unknowns {
                let delta = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - delta;
            }
        }
    }
    // Surplus rows must have been eliminated to zero.
    for row in rows.iter().skip(unknowns) {
        if !row[unknowns].is_zero() {
            return Err(OperatorError::InconsistentSamples);
        }
    }
    Ok(rows[..unknowns]
        .iter()
        .map(|row| row[unknowns].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    fn points(raw: &[(i64, i64, i64, i64)]) -> Vec<(BigRational, BigRational)> {
        raw.iter()
            .map(|&(an, ad, bn, bd)| (ratio(an, ad), ratio(bn, bd)))
            .collect()
    }

    #[test]
    fn recovers_gradient_squared_quadratic() {
        let samples = points(&[
            (0, 1, 0, 1),
            (1, 1, 0, 1),
            (0, 1, 1, 1),
            (1, 1, 1, 1),
            (2, 1, 1, 1),
            (1, 2, -1, 3),
            (-2, 3, 5, 7),
        ]);
        let q = fit_ambiguity_polynomial(&samples, FitTarget::GradientSquared).unwrap();
        assert_eq!(q.constant, integer(1));
        assert_eq!(q.alpha, integer(1));
        assert_eq!(q.beta, integer(1));
        assert_eq!(q.alpha_beta, integer(1));
        assert_eq!(q.alpha_sq, integer(1));
        assert_eq!(q.beta_sq, integer(0));
    }

    #[test]
    fn recovers_curvature_linear_form() {
        let samples = points(&[
            (0, 1, 0, 1),
            (1, 1, 0, 1),
            (0, 1, 1, 1),
            (1, 1, 1, 1),
            (2, 1, 1, 1),
            (1, 2, -1, 3),
        ]);
        let q = fit_ambiguity_polynomial(&samples, FitTarget::Curvature).unwrap();
        assert_eq!(q.constant, ratio(-1, 2));
        assert_eq!(q.alpha, integer(0));
        assert_eq!(q.beta, ratio(-1, 2));
        assert_eq!(q.alpha_beta, integer(0));
        assert_eq!(q.alpha_sq, integer(0));
        assert_eq!(q.beta_sq, integer(0));
    }

    #[test]
    fn collinear_samples_are_degenerate() {
        // All on beta = 0: the b, a*b, b^2 columns vanish.
        let samples = points(&[
            (0, 1, 0, 1),
            (1, 1, 0, 1),
            (2, 1, 0, 1),
            (3, 1, 0, 1),
            (4, 1, 0, 1),
            (5, 1, 0, 1),
        ]);
        let err = fit_ambiguity_polynomial(&samples, FitTarget::GradientSquared).unwrap_err();
        assert!(matches!(err, OperatorError::DegenerateSamples));
    }

    #[test]
    fn too_few_distinct_points_rejected() {
        let samples = points(&[
            (0, 1, 0, 1),
            (0, 1, 0, 1),
            (1, 1, 0, 1),
            (0, 1, 1, 1),
            (1, 1, 1, 1),
            (2, 1, 1, 1),
        ]);
        let err = fit_ambiguity_polynomial(&samples, FitTarget::GradientSquared).unwrap_err();
        assert!(matches!(
            err,
            OperatorError::NotEnoughSamples { needed: 6, got: 5 }
        ));
    }

    #[test]
    fn display_lists_nonzero_coefficients() {
        let q = QuadraticForm {
            constant: integer(1),
            alpha: integer(0),
            beta: ratio(-1, 2),
            alpha_beta: integer(0),
            alpha_sq: integer(0),
            beta_sq: integer(0),
        };
        assert_eq!(q.to_string(), "(1) 1 + (-1/2) b");
    }
}
