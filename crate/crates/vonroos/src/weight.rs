//! Weight distributions over the ordering parameters.
//!
//! A weight assigns relative importance to each ordering `(alpha, beta)`:
//! either a continuous density (uniform, the built-in Lorentzian sum
//! `1/(alpha^2+1) + 1/(beta^2+1)`, or a user expression) or a discrete list
//! of weighted points. Weights must be nonnegative wherever they are
//! evaluated and must carry positive total weight; violations are hard
//! errors, since a signed "distribution" has no meaningful mean.

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{ExprError, Expression};
use crate::rational::{integer, ratio, rational_from_f64, rational_to_f64};

/// Variables available to user weight expressions.
pub const WEIGHT_VARIABLES: [&str; 2] = ["alpha", "beta"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weight expression: {0}")]
    Parse(#[from] ExprError),
    #[error("operation requires a continuous weight, got a discrete one")]
    NotContinuous,
    #[error("operation requires a discrete weight, got a continuous one")]
    NotDiscrete,
    #[error("weight evaluated non-finite at (alpha, beta) = ({alpha}, {beta})")]
    NonFinite { alpha: f64, beta: f64 },
    #[error("negative weight {value} at (alpha, beta) = ({alpha}, {beta}); weights must be >= 0")]
    Negative { alpha: f64, beta: f64, value: f64 },
    #[error("discrete weight must have at least one entry")]
    EmptyDiscrete,
    #[error("discrete entry {index} has invalid coefficient {c}; coefficients must be finite and >= 0")]
    InvalidEntry { index: usize, c: f64 },
    #[error("total discrete weight must be positive")]
    ZeroTotalWeight,
}

/// A parsed weight expression over `alpha` and `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightExpr {
    expr: Expression,
}

impl WeightExpr {
    /// Raw evaluation; may be non-finite or negative, callers validate.
    pub fn eval_raw(&self, alpha: f64, beta: f64) -> f64 {
        self.expr.eval(&[alpha, beta])
    }
}

impl std::fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.expr.fmt(f)
    }
}

/// Parse a weight expression such as `1/(alpha^2+1) + 1/(beta^2+1)`.
///
/// Only `alpha` and `beta` are in scope; the third ordering parameter is
/// not a free variable.
pub fn parse_rho(text: &str) -> Result<WeightExpr, WeightError> {
    let expr = Expression::parse(text, &WEIGHT_VARIABLES)?;
    Ok(WeightExpr { expr })
}

/// One point of a discrete distribution. The third ordering parameter is
/// derived, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEntry {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub c: f64,
}

impl DiscreteEntry {
    pub fn new(alpha: BigRational, beta: BigRational, c: f64) -> Self {
        DiscreteEntry { alpha, beta, c }
    }

    pub fn gamma(&self) -> BigRational {
        -BigRational::one() - &self.alpha - &self.beta
    }
}

/// Validated list of discrete entries: nonempty, each coefficient finite
/// and nonnegative, total weight positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteWeights {
    entries: Vec<DiscreteEntry>,
}

impl DiscreteWeights {
    pub fn new(entries: Vec<DiscreteEntry>) -> Result<Self, WeightError> {
        if entries.is_empty() {
            return Err(WeightError::EmptyDiscrete);
        }
        for (index, entry) in entries.iter().enumerate() {
            if !entry.c.is_finite() || entry.c < 0.0 {
                return Err(WeightError::InvalidEntry { index, c: entry.c });
            }
        }
        if entries.iter().map(|e| e.c).sum::<f64>() <= 0.0 {
            return Err(WeightError::ZeroTotalWeight);
        }
        Ok(DiscreteWeights { entries })
    }

    pub fn entries(&self) -> &[DiscreteEntry] {
        &self.entries
    }

    /// Exact total weight (coefficients convert exactly from binary floats).
    pub fn total(&self) -> BigRational {
        self.entries
            .iter()
            .map(|e| rational_from_f64(e.c).expect("validated finite"))
            .fold(BigRational::zero(), |acc, c| acc + c)
    }
}

/// A weight distribution over the ordering parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// Constant density 1.
    Uniform,
    /// `1/(alpha^2+1) + 1/(beta^2+1)`, symmetric in alpha and beta.
    LorentzSum,
    /// User-supplied density over `alpha`, `beta`.
    Expression(WeightExpr),
    /// Weighted list of ordering points.
    Discrete(DiscreteWeights),
}

impl WeightSpec {
    /// Build a discrete weight, validating the entries.
    pub fn discrete(entries: Vec<DiscreteEntry>) -> Result<Self, WeightError> {
        Ok(WeightSpec::Discrete(DiscreteWeights::new(entries)?))
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, WeightSpec::Discrete(_))
    }

    /// Evaluate a continuous density. Checks that the value is finite and
    /// nonnegative; errors identify the offending point.
    pub fn eval(&self, alpha: f64, beta: f64) -> Result<f64, WeightError> {
        let value = match self {
            WeightSpec::Uniform => 1.0,
            WeightSpec::LorentzSum => {
                1.0 / (alpha * alpha + 1.0) + 1.0 / (beta * beta + 1.0)
            }
            WeightSpec::Expression(expr) => expr.eval_raw(alpha, beta),
            WeightSpec::Discrete(_) => return Err(WeightError::NotContinuous),
        };
        if !value.is_finite() {
            return Err(WeightError::NonFinite { alpha, beta });
        }
        if value < 0.0 {
            return Err(WeightError::Negative { alpha, beta, value });
        }
        Ok(value)
    }

    /// Exact evaluation at a rational point, where the density permits it.
    /// Expression weights fall back to converting the double evaluation
    /// exactly.
    pub fn eval_exact(
        &self,
        alpha: &BigRational,
        beta: &BigRational,
    ) -> Result<BigRational, WeightError> {
        match self {
            WeightSpec::Uniform => Ok(BigRational::one()),
            WeightSpec::LorentzSum => {
                let one = BigRational::one();
                Ok(&one / (alpha * alpha + &one) + &one / (beta * beta + &one))
            }
            WeightSpec::Expression(_) => {
                let value = self.eval(rational_to_f64(alpha), rational_to_f64(beta))?;
                Ok(rational_from_f64(value).expect("validated finite"))
            }
            WeightSpec::Discrete(_) => Err(WeightError::NotContinuous),
        }
    }
}

/// A named ordering-parameter choice from the literature.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedOrdering {
    pub name: &'static str,
    pub alpha: BigRational,
    pub beta: BigRational,
}

impl NamedOrdering {
    pub fn gamma(&self) -> BigRational {
        -BigRational::one() - &self.alpha - &self.beta
    }
}

/// The five classic ordering-parameter sets.
pub fn known_orderings() -> Vec<NamedOrdering> {
    vec![
        NamedOrdering {
            name: "gora-williams",
            alpha: integer(-1),
            beta: integer(0),
        },
        NamedOrdering {
            name: "bendaniel-duke",
            alpha: integer(0),
            beta: integer(-1),
        },
        NamedOrdering {
            name: "zhu-kroemer",
            alpha: ratio(-1, 2),
            beta: integer(0),
        },
        NamedOrdering {
            name: "li-kuhn",
            alpha: integer(0),
            beta: ratio(-1, 2),
        },
        NamedOrdering {
            name: "mustafa-mazharimousavi",
            alpha: ratio(-1, 4),
            beta: ratio(-1, 2),
        },
    ]
}

/// Discrete weight giving the five classic orderings equal coefficient 1.
pub fn preset_orderings() -> WeightSpec {
    let entries = known_orderings()
        .into_iter()
        .map(|o| DiscreteEntry::new(o.alpha, o.beta, 1.0))
        .collect();
    WeightSpec::discrete(entries).expect("preset entries are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_eval_examples() {
        let one = parse_rho("1").unwrap();
        assert_eq!(one.eval_raw(0.3, -0.7), 1.0);

        let lorentz = parse_rho("1/(alpha^2+1) + 1/(beta^2+1)").unwrap();
        assert_eq!(lorentz.eval_raw(0.0, 0.0), 2.0);
        assert_eq!(lorentz.eval_raw(1.0, 1.0), 1.0);
    }

    #[test]
    fn gamma_is_not_a_free_variable() {
        let err = parse_rho("1/(gamma^2+1)").unwrap_err();
        assert!(err.to_string().contains("unknown identifier `gamma`"));
    }

    #[test]
    fn builtin_lorentz_values() {
        assert_eq!(WeightSpec::LorentzSum.eval(0.0, 0.0).unwrap(), 2.0);
        assert_eq!(WeightSpec::LorentzSum.eval(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(WeightSpec::Uniform.eval(3.0, -9.0).unwrap(), 1.0);
    }

    #[test]
    fn eval_rejects_non_finite_and_negative() {
        let spec = WeightSpec::Expression(parse_rho("1/alpha").unwrap());
        let err = spec.eval(0.0, 0.5).unwrap_err();
        assert!(matches!(err, WeightError::NonFinite { alpha, .. } if alpha == 0.0));

        let spec = WeightSpec::Expression(parse_rho("alpha").unwrap());
        let err = spec.eval(-0.5, 0.0).unwrap_err();
        assert!(matches!(err, WeightError::Negative { value, .. } if value == -0.5));
    }

    #[test]
    fn discrete_validation() {
        assert!(matches!(
            WeightSpec::discrete(vec![]),
            Err(WeightError::EmptyDiscrete)
        ));
        let neg = vec![DiscreteEntry::new(integer(0), integer(0), -1.0)];
        assert!(matches!(
            WeightSpec::discrete(neg),
            Err(WeightError::InvalidEntry { index: 0, .. })
        ));
        let zeros = vec![DiscreteEntry::new(integer(0), integer(0), 0.0)];
        assert!(matches!(
            WeightSpec::discrete(zeros),
            Err(WeightError::ZeroTotalWeight)
        ));
        let err = WeightSpec::Discrete(DiscreteWeights::new(vec![DiscreteEntry::new(
            integer(0),
            integer(0),
            1.0,
        )])
        .unwrap())
        .eval(0.0, 0.0)
        .unwrap_err();
        assert!(matches!(err, WeightError::NotContinuous));
    }

    #[test]
    fn preset_has_five_entries_with_total_weight_five() {
        let spec = preset_orderings();
        let WeightSpec::Discrete(discrete) = &spec else {
            panic!("preset must be discrete");
        };
        assert_eq!(discrete.entries().len(), 5);
        assert_eq!(discrete.total(), integer(5));
    }

    #[test]
    fn preset_gammas_match_the_literature_values() {
        let expected = [
            ("gora-williams", integer(0)),
            ("bendaniel-duke", integer(0)),
            ("zhu-kroemer", ratio(-1, 2)),
            ("li-kuhn", ratio(-1, 2)),
            ("mustafa-mazharimousavi", ratio(-1, 4)),
        ];
        for (ordering, (name, gamma)) in known_orderings().iter().zip(expected) {
            assert_eq!(ordering.name, name);
            assert_eq!(ordering.gamma(), gamma, "{name}");
        }
    }

    #[test]
    fn exact_lorentz_at_equal_thirds() {
        let v = WeightSpec::LorentzSum
            .eval_exact(&ratio(-1, 3), &ratio(-1, 3))
            .unwrap();
        assert_eq!(v, ratio(9, 5));
    }

    proptest! {
        #[test]
        fn lorentz_sum_is_symmetric(a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let ab = WeightSpec::LorentzSum.eval(a, b).unwrap();
            let ba = WeightSpec::LorentzSum.eval(b, a).unwrap();
            prop_assert_eq!(ab, ba);
        }
    }
}
