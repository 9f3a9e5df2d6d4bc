//! Symbolic normal ordering of momentum/mass operator words.
//!
//! An [`OperatorExpression`] is a product of atoms — powers of the mass
//! function `m(x)`, the momentum `p = -i d/dx` (hbar = 1), and the bare
//! derivative `d/dx` — with an overall exact scalar. [`normal_order`]
//! rewrites such a product so every derivative stands to the right of every
//! multiplicative factor, using nothing but the product rule; the result is
//! a [`CanonicalForm`] with exact Gaussian-rational coefficients.
//!
//! [`vonroos_pair`] builds the symmetrized kinetic pair
//! `m^a p m^b p m^g + m^g p m^b p m^a` (with `g = -1 - a - b`),
//! normal-orders it, and checks that the outcome has the four-term shape
//!
//! ```text
//! -2 [ f·m'^2/m^3 + g·m''/m^2 - m'/m^2·d/dx + (1/m)·d^2/dx^2 ]
//! ```
//!
//! extracting `(f, g)` exactly. The quadratic dependence of `f` (and the
//! affine dependence of `g`) on the ordering parameters is recovered by
//! interpolation in [`fit_ambiguity_polynomial`], not assumed.
//!
//! Everything here is an immutable value and every operation is pure, so
//! concurrent use needs no coordination.

mod canonical;
mod fit;
mod parse;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_gauss, format_rational, gauss_real, GaussRational};

pub use canonical::{normal_order, CanonicalForm, MassWord, TermKey};
pub use fit::{fit_ambiguity_polynomial, FitTarget, QuadraticForm};

/// Errors from parsing, normal ordering, and coefficient extraction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("operator expression must contain at least one atom")]
    Empty,
    #[error(
        "normal-ordered pair does not match the four-term template ({details}); \
         this signals an internal inconsistency in the ordering engine"
    )]
    TemplateMismatch { details: String },
    #[error("degenerate sample set; provide more points in general position")]
    DegenerateSamples,
    #[error("need at least {needed} distinct sample points, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },
    #[error("sample values are not consistent with a single quadratic")]
    InconsistentSamples,
    #[error(
        "insufficient derivative data: need {mass_orders} mass orders and \
         {target_orders} target orders"
    )]
    InsufficientJet {
        mass_orders: usize,
        target_orders: usize,
    },
    #[error("mass must be positive to apply fractional powers, got {mass}")]
    NonPositiveMass { mass: f64 },
}

/// One factor of an operator word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// Multiplication by `m(x)^exponent`.
    MassPower(BigRational),
    /// `p = -i d/dx`.
    Momentum,
    /// `d/dx`.
    Derivative,
}

/// A product of atoms with an overall scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorExpression {
    scalar: GaussRational,
    atoms: Vec<Atom>,
}

impl OperatorExpression {
    /// Build from parts; the atom sequence must be nonempty.
    pub fn new(scalar: GaussRational, atoms: Vec<Atom>) -> Result<Self, OperatorError> {
        if atoms.is_empty() {
            return Err(OperatorError::Empty);
        }
        Ok(OperatorExpression { scalar, atoms })
    }

    /// Parse a word such as `m^(-1/2) p m^0 p m^(-1/2)` or `-2 * m p`.
    pub fn parse(text: &str) -> Result<Self, OperatorError> {
        parse::parse(text)
    }

    pub fn scalar(&self) -> &GaussRational {
        &self.scalar
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Normal-order this expression.
    pub fn normal_order(&self) -> CanonicalForm {
        normal_order(self)
    }
}

/// Normalized spelling: optional `scalar * `, then atoms separated by
/// single spaces, with `m` for exponent 1, bare integer exponents
/// (`m^-1`), and parenthesized fractions (`m^(-1/2)`). Expressions whose
/// scalar is real parse back to an equal value; `print -> parse -> print`
/// is a fixed point.
impl fmt::Display for OperatorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scalar.is_one() {
            write!(f, "{} * ", format_gauss(&self.scalar))?;
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match atom {
                Atom::Momentum => write!(f, "p")?,
                Atom::Derivative => write!(f, "dx")?,
                Atom::MassPower(q) => {
                    if q.is_one() {
                        write!(f, "m")?;
                    } else if q.is_integer() {
                        write!(f, "m^{}", q.numer())?;
                    } else {
                        write!(f, "m^({})", format_rational(q))?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The word `m^alpha p m^beta p m^gamma` with `gamma = -1 - alpha - beta`.
pub fn von_roos_word(alpha: BigRational, beta: BigRational) -> OperatorExpression {
    let gamma = -BigRational::one() - &alpha - &beta;
    OperatorExpression {
        scalar: gauss_real(BigRational::one()),
        atoms: vec![
            Atom::MassPower(alpha),
            Atom::Momentum,
            Atom::MassPower(beta),
            Atom::Momentum,
            Atom::MassPower(gamma),
        ],
    }
}

/// Ambiguity coefficients extracted from a symmetrized pair:
/// `pair = -2 [ f·m'^2/m^3 + g·m''/m^2 - m'/m^2·d/dx + (1/m)·d^2/dx^2 ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VonRoosPairCoeffs {
    /// Coefficient of m'^2/m^3.
    pub f: BigRational,
    /// Coefficient of m''/m^2.
    pub g: BigRational,
}

/// Normal-ordered sum of the two mirrored words at `(alpha, beta)`.
pub fn vonroos_pair_canonical(alpha: BigRational, beta: BigRational) -> CanonicalForm {
    let gamma = -BigRational::one() - &alpha - &beta;
    let forward = von_roos_word(alpha.clone(), beta.clone()).normal_order();
    let mirrored = OperatorExpression {
        scalar: gauss_real(BigRational::one()),
        atoms: vec![
            Atom::MassPower(gamma),
            Atom::Momentum,
            Atom::MassPower(beta),
            Atom::Momentum,
            Atom::MassPower(alpha),
        ],
    }
    .normal_order();
    forward.add(&mirrored)
}

/// Build, normal-order, and template-check the symmetrized pair, returning
/// the exact `(f, g)` coefficients.
///
/// The four-term shape is verified structurally on every call rather than
/// assumed; a mismatch means the ordering engine itself is broken.
pub fn vonroos_pair(
    alpha: BigRational,
    beta: BigRational,
) -> Result<VonRoosPairCoeffs, OperatorError> {
    let form = vonroos_pair_canonical(alpha, beta);
    let mismatch = |details: String| OperatorError::TemplateMismatch { details };

    let minus_two = gauss_real(crate::rational::integer(-2));
    let two = gauss_real(crate::rational::integer(2));

    let mut f = BigRational::zero();
    let mut g = BigRational::zero();
    let mut saw_first_order = false;
    let mut saw_second_order = false;

    for (key, coeff) in form.terms() {
        if !coeff.im.is_zero() {
            return Err(mismatch(format!(
                "complex coefficient {} in {}",
                format_gauss(coeff),
                form
            )));
        }
        let word = &key.mass_word;
        match key.derivative_order {
            0 if *word == MassWord::new(crate::rational::integer(-3), vec![2]) => {
                f = &coeff.re / crate::rational::integer(-2);
            }
            0 if *word == MassWord::new(crate::rational::integer(-2), vec![0, 1]) => {
                g = &coeff.re / crate::rational::integer(-2);
            }
            1 if *word == MassWord::new(crate::rational::integer(-2), vec![1]) => {
                if *coeff != two {
                    return Err(mismatch(format!("first-derivative term is not +2 in {form}")));
                }
                saw_first_order = true;
            }
            2 if *word == MassWord::mass_power(crate::rational::integer(-1)) => {
                if *coeff != minus_two {
                    return Err(mismatch(format!("second-derivative term is not -2 in {form}")));
                }
                saw_second_order = true;
            }
            _ => {
                return Err(mismatch(format!("unexpected term in {form}")));
            }
        }
    }
    if !saw_first_order || !saw_second_order {
        return Err(mismatch(format!("missing derivative terms in {form}")));
    }
    Ok(VonRoosPairCoeffs { f, g })
}
