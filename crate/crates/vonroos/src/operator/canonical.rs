//! Normal-ordered operator forms.
//!
//! A [`CanonicalForm`] is a finite sum of terms
//!
//! ```text
//! coefficient · m^e0 · (m')^e1 · (m'')^e2 · … · d^k/dx^k
//! ```
//!
//! with all derivative operators moved to the right of all multiplicative
//! factors. Coefficients are exact Gaussian rationals, the base exponent
//! `e0` is an exact rational, and the exponents of the mass derivatives are
//! nonnegative integers. Terms are kept in a deterministic order (by
//! derivative order `k`, then by mass word) with zero coefficients removed,
//! so two forms are equal as operators iff they are equal as values.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{
    format_gauss, format_rational, gauss_minus_i, gauss_one, gauss_real, GaussRational,
};

use super::{Atom, OperatorError, OperatorExpression};

/// Product of powers of the mass function and its derivatives.
///
/// `base` is the (rational) exponent of `m` itself; `derivs[i]` is the
/// integer exponent of the `(i+1)`-th derivative of `m`. Trailing zero
/// entries are trimmed so equal words compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MassWord {
    base: BigRational,
    derivs: Vec<u32>,
}

impl MassWord {
    /// The empty product (multiplication by 1).
    pub fn one() -> Self {
        MassWord {
            base: BigRational::zero(),
            derivs: Vec::new(),
        }
    }

    /// `m^exponent`.
    pub fn mass_power(exponent: BigRational) -> Self {
        MassWord {
            base: exponent,
            derivs: Vec::new(),
        }
    }

    /// Word with the given base exponent and derivative exponents
    /// (`derivs[i]` is the exponent of the `(i+1)`-th derivative).
    pub fn new(base: BigRational, derivs: Vec<u32>) -> Self {
        let mut word = MassWord { base, derivs };
        word.trim();
        word
    }

    fn trim(&mut self) {
        while self.derivs.last() == Some(&0) {
            self.derivs.pop();
        }
    }

    pub fn base_exponent(&self) -> &BigRational {
        &self.base
    }

    /// Exponent of the `order`-th derivative of `m` (`order >= 1`).
    pub fn derivative_exponent(&self, order: usize) -> u32 {
        assert!(order >= 1);
        self.derivs.get(order - 1).copied().unwrap_or(0)
    }

    /// Highest derivative of `m` appearing in this word (0 if none).
    pub fn max_derivative(&self) -> usize {
        self.derivs.len()
    }

    pub fn is_one(&self) -> bool {
        self.base.is_zero() && self.derivs.is_empty()
    }

    fn multiplied_by_mass_power(&self, exponent: &BigRational) -> Self {
        MassWord {
            base: &self.base + exponent,
            derivs: self.derivs.clone(),
        }
    }

    /// Product rule: d/dx of this word as a list of `(factor, word)` pairs.
    fn differentiated(&self) -> Vec<(BigRational, MassWord)> {
        let mut out = Vec::new();
        if !self.base.is_zero() {
            let mut derivs = self.derivs.clone();
            if derivs.is_empty() {
                derivs.push(0);
            }
            derivs[0] += 1;
            out.push((
                self.base.clone(),
                MassWord::new(&self.base - BigRational::one(), derivs),
            ));
        }
        for (idx, &e) in self.derivs.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut derivs = self.derivs.clone();
            derivs[idx] -= 1;
            if derivs.len() <= idx + 1 {
                derivs.resize(idx + 2, 0);
            }
            derivs[idx + 1] += 1;
            out.push((
                BigRational::from_integer(e.into()),
                MassWord::new(self.base.clone(), derivs),
            ));
        }
        out
    }
}

/// Key identifying a term: derivative order first so that canonical order
/// is "sorted by k, then mass word".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    pub derivative_order: u32,
    pub mass_word: MassWord,
}

/// A normal-ordered operator: sum of coefficient · mass-word · d^k/dx^k.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonicalForm {
    terms: BTreeMap<TermKey, GaussRational>,
}

impl CanonicalForm {
    /// The zero operator.
    pub fn zero() -> Self {
        CanonicalForm::default()
    }

    /// The identity operator (coefficient 1, empty word, k = 0).
    pub fn identity() -> Self {
        let mut form = CanonicalForm::zero();
        form.add_term(
            TermKey {
                derivative_order: 0,
                mass_word: MassWord::one(),
            },
            gauss_one(),
        );
        form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &GaussRational)> {
        self.terms.iter()
    }

    /// Coefficient of a term (zero when absent).
    pub fn coefficient(&self, key: &TermKey) -> GaussRational {
        self.terms.get(key).cloned().unwrap_or_else(|| {
            GaussRational::new(BigRational::zero(), BigRational::zero())
        })
    }

    /// Highest d/dx order appearing in the form.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.derivative_order)
            .max()
            .unwrap_or(0)
    }

    /// Highest mass-derivative order appearing in any term.
    pub fn max_mass_derivative(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.mass_word.max_derivative())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, key: TermKey, coeff: GaussRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    /// Sum of two forms, collecting like terms.
    pub fn add(&self, other: &CanonicalForm) -> CanonicalForm {
        let mut out = self.clone();
        for (key, coeff) in &other.terms {
            out.add_term(key.clone(), coeff.clone());
        }
        out
    }

    /// Scalar multiple.
    pub fn scaled(&self, scalar: &GaussRational) -> CanonicalForm {
        if scalar.is_zero() {
            return CanonicalForm::zero();
        }
        let mut out = CanonicalForm::zero();
        for (key, coeff) in &self.terms {
            out.add_term(key.clone(), coeff.clone() * scalar.clone());
        }
        out
    }

    /// Left-multiply by `m^exponent`.
    fn left_multiplied_by_mass_power(&self, exponent: &BigRational) -> CanonicalForm {
        let mut out = CanonicalForm::zero();
        for (key, coeff) in &self.terms {
            out.add_term(
                TermKey {
                    derivative_order: key.derivative_order,
                    mass_word: key.mass_word.multiplied_by_mass_power(exponent),
                },
                coeff.clone(),
            );
        }
        out
    }

    /// Left-apply d/dx, using d/dx ∘ (W ∂^k) = W' ∂^k + W ∂^(k+1).
    fn left_differentiated(&self) -> CanonicalForm {
        let mut out = CanonicalForm::zero();
        for (key, coeff) in &self.terms {
            out.add_term(
                TermKey {
                    derivative_order: key.derivative_order + 1,
                    mass_word: key.mass_word.clone(),
                },
                coeff.clone(),
            );
            for (factor, word) in key.mass_word.differentiated() {
                out.add_term(
                    TermKey {
                        derivative_order: key.derivative_order,
                        mass_word: word,
                    },
                    coeff.clone() * gauss_real(factor),
                );
            }
        }
        out
    }

    /// Apply the operator to a jet of derivative values at one point.
    ///
    /// `mass_derivatives[n]` is the n-th derivative of the mass at the point
    /// (`[0]` the mass itself, which must be positive so that fractional
    /// powers are defined); `target_derivatives[k]` is the k-th derivative of
    /// the function being acted on. Both slices must cover the orders
    /// appearing in the form.
    pub fn apply(
        &self,
        mass_derivatives: &[f64],
        target_derivatives: &[Complex64],
    ) -> Result<Complex64, OperatorError> {
        let need_mass = self.max_mass_derivative() + 1;
        let need_target = self.max_derivative_order() as usize + 1;
        if mass_derivatives.len() < need_mass || target_derivatives.len() < need_target {
            return Err(OperatorError::InsufficientJet {
                mass_orders: need_mass,
                target_orders: need_target,
            });
        }
        let m = mass_derivatives[0];
        if m <= 0.0 {
            return Err(OperatorError::NonPositiveMass { mass: m });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (key, coeff) in &self.terms {
            let mut factor = m.powf(key.mass_word.base_exponent().to_f64().unwrap_or(f64::NAN));
            for order in 1..=key.mass_word.max_derivative() {
                let e = key.mass_word.derivative_exponent(order);
                if e > 0 {
                    factor *= mass_derivatives[order].powi(e as i32);
                }
            }
            let c = Complex64::new(
                coeff.re.to_f64().unwrap_or(f64::NAN),
                coeff.im.to_f64().unwrap_or(f64::NAN),
            );
            total += c * factor * target_derivatives[key.derivative_order as usize];
        }
        Ok(total)
    }
}

/// Normal-order an operator expression.
///
/// Processes atoms right to left: multiplication by `m^q` merges into the
/// mass word, and each derivative (or momentum, which also carries `-i`)
/// is pushed through with the product rule. The result equals the input as
/// an operator on smooth functions. Exact rational arithmetic throughout;
/// coefficients cannot overflow.
pub fn normal_order(expr: &OperatorExpression) -> CanonicalForm {
    let mut form = CanonicalForm::identity();
    for atom in expr.atoms().iter().rev() {
        form = match atom {
            Atom::MassPower(q) => form.left_multiplied_by_mass_power(q),
            Atom::Derivative => form.left_differentiated(),
            Atom::Momentum => form.left_differentiated().scaled(&gauss_minus_i()),
        };
    }
    form.scaled(expr.scalar())
}

fn write_exponent(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "({})", format_rational(q))
    }
}

fn write_term_factors(f: &mut fmt::Formatter<'_>, key: &TermKey) -> fmt::Result {
    for order in 1..=key.mass_word.max_derivative() {
        let e = key.mass_word.derivative_exponent(order);
        if e == 0 {
            continue;
        }
        write!(f, " m{}", "'".repeat(order))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    let base = key.mass_word.base_exponent();
    if !base.is_zero() {
        if base.is_one() {
            write!(f, " m")?;
        } else {
            write!(f, " m^")?;
            write_exponent(f, base)?;
        }
    }
    if key.derivative_order > 0 {
        write!(f, " dx^{}", key.derivative_order)?;
    }
    Ok(())
}

/// Stable printed spelling, e.g.
/// `-2 * [ (5/9) m'^2 m^-3 + (-1/3) m'' m^-2 + (-1) m' m^-2 dx^1 + (1) m^-1 dx^2 ]`.
///
/// A common scalar — the coefficient of the final term in canonical order —
/// is factored out in front; each bracketed term is the residual coefficient
/// in parentheses, then mass-derivative factors in ascending order, the base
/// power of `m`, and the derivative `dx^k`. The zero operator prints as `0`.
impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(factor) = self.terms.values().last() else {
            return write!(f, "0");
        };
        let prefix = format_gauss(factor);
        // Parenthesize mixed complex factors (sign in the interior).
        if prefix[1..].contains(['+', '-']) {
            write!(f, "({prefix}) * [")?;
        } else {
            write!(f, "{prefix} * [")?;
        }
        for (i, (key, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " +")?;
            }
            let reduced = coeff.clone() / factor.clone();
            write!(f, " ({})", format_gauss(&reduced))?;
            write_term_factors(f, key)?;
        }
        write!(f, " ]")
    }
}
