//! A small arithmetic expression language.
//!
//! Used for user-supplied weight functions over `(alpha, beta)` and for
//! potentials `V(x)`. Supports `+ - * / ^` (with `^` right-associative and
//! binding tighter than unary minus), parentheses, decimal literals, named
//! variables, and the functions `ln`, `atan`, `exp`.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr   := term   { ("+" | "-") term }
//! term   := unary  { ("*" | "/") unary }
//! unary  := "-" unary | power
//! power  := atom   [ "^" unary ]
//! atom   := number | ident [ "(" expr ")" ] | "(" expr ")"
//! number := digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ]
//! ```
//!
//! An identifier followed by `(` must be one of the known functions; any
//! other identifier must be one of the variables declared at parse time.

use std::fmt;
use thiserror::Error;

/// Syntax or name-resolution error, with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl ExprError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        ExprError {
            column,
            message: message.into(),
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Ln,
    Atan,
    Exp,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Ln => "ln",
            UnaryFn::Atan => "atan",
            UnaryFn::Exp => "exp",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            UnaryFn::Ln => x.ln(),
            UnaryFn::Atan => x.atan(),
            UnaryFn::Exp => x.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Number(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(UnaryFn, Box<Node>),
}

/// A parsed expression over a fixed set of named variables.
///
/// Printing and reparsing an `Expression` is stable: the printed form parses
/// back to an expression that prints identically.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    variables: Vec<String>,
    root: Node,
}

impl Expression {
    /// Parse `text` with the given variable names in scope.
    pub fn parse(text: &str, variables: &[&str]) -> Result<Expression, ExprError> {
        let mut parser = Parser::new(text, variables);
        let root = parser.parse_expr()?;
        parser.expect_end()?;
        Ok(Expression {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            root,
        })
    }

    /// Evaluate at the given variable values (one per declared variable).
    ///
    /// Division by zero and domain errors propagate as non-finite values;
    /// callers decide how to report them.
    pub fn eval(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.variables.len());
        eval_node(&self.root, values)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }
}

fn eval_node(node: &Node, values: &[f64]) -> f64 {
    match node {
        Node::Number(v) => *v,
        Node::Var(i) => values[*i],
        Node::Neg(a) => -eval_node(a, values),
        Node::Add(a, b) => eval_node(a, values) + eval_node(b, values),
        Node::Sub(a, b) => eval_node(a, values) - eval_node(b, values),
        Node::Mul(a, b) => eval_node(a, values) * eval_node(b, values),
        Node::Div(a, b) => eval_node(a, values) / eval_node(b, values),
        Node::Pow(a, b) => eval_node(a, values).powf(eval_node(b, values)),
        Node::Call(f, a) => f.apply(eval_node(a, values)),
    }
}

// Precedence levels used by both the parser and the printer.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn node_prec(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => PREC_ADD,
        Node::Mul(..) | Node::Div(..) => PREC_MUL,
        Node::Neg(..) => PREC_NEG,
        Node::Pow(..) => PREC_POW,
        Node::Number(..) | Node::Var(..) | Node::Call(..) => PREC_ATOM,
    }
}

fn write_node(
    f: &mut fmt::Formatter<'_>,
    node: &Node,
    vars: &[String],
    min_prec: u8,
) -> fmt::Result {
    let prec = node_prec(node);
    let parens = prec < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match node {
        Node::Number(v) => write!(f, "{v}")?,
        Node::Var(i) => write!(f, "{}", vars[*i])?,
        Node::Neg(a) => {
            write!(f, "-")?;
            write_node(f, a, vars, PREC_POW)?;
        }
        Node::Add(a, b) => {
            write_node(f, a, vars, PREC_ADD)?;
            write!(f, " + ")?;
            write_node(f, b, vars, PREC_ADD + 1)?;
        }
        Node::Sub(a, b) => {
            write_node(f, a, vars, PREC_ADD)?;
            write!(f, " - ")?;
            write_node(f, b, vars, PREC_ADD + 1)?;
        }
        Node::Mul(a, b) => {
            write_node(f, a, vars, PREC_MUL)?;
            write!(f, "*")?;
            write_node(f, b, vars, PREC_MUL + 1)?;
        }
        Node::Div(a, b) => {
            write_node(f, a, vars, PREC_MUL)?;
            write!(f, "/")?;
            write_node(f, b, vars, PREC_MUL + 1)?;
        }
        Node::Pow(a, b) => {
            write_node(f, a, vars, PREC_ATOM)?;
            write!(f, "^")?;
            write_node(f, b, vars, PREC_NEG)?;
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, vars, 0)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.variables, 0)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    variables: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &str, variables: &'a [&'a str]) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            variables,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::new(self.column(), format!("expected `{c}`")))
        }
    }

    fn expect_end(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(ExprError::new(
                self.column(),
                format!("unexpected `{c}` after expression"),
            )),
        }
    }

    fn parse_expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.parse_term()?;
        loop {
            if self.eat('+') {
                let rhs = self.parse_term()?;
                lhs = Node::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat('-') {
                let rhs = self.parse_term()?;
                lhs = Node::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.parse_unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.parse_unary()?;
                lhs = Node::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat('/') {
                let rhs = self.parse_unary()?;
                lhs = Node::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Node, ExprError> {
        if self.eat('-') {
            let inner = self.parse_unary()?;
            Ok(Node::Neg(Box::new(inner)))
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<Node, ExprError> {
        let base = self.parse_atom()?;
        if self.eat('^') {
            let exponent = self.parse_unary()?;
            Ok(Node::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.parse_ident(),
            Some(c) => Err(ExprError::new(self.column(), format!("unexpected `{c}`"))),
            None => Err(ExprError::new(self.column(), "unexpected end of input")),
        }
    }

    fn parse_number(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if matches!(self.chars.get(self.pos), Some('.')) {
            self.pos += 1;
            while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
                while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark; // bare `e` belongs to something else
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let value: f64 = text
            .parse()
            .map_err(|_| ExprError::new(start + 1, format!("invalid number `{text}`")))?;
        if !value.is_finite() {
            return Err(ExprError::new(
                start + 1,
                format!("numeric literal `{text}` out of range"),
            ));
        }
        Ok(Node::Number(value))
    }

    fn parse_ident(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if self.eat('(') {
            let func = match name.as_str() {
                "ln" => UnaryFn::Ln,
                "atan" => UnaryFn::Atan,
                "exp" => UnaryFn::Exp,
                _ => {
                    return Err(ExprError::new(
                        start + 1,
                        format!("unknown function `{name}`"),
                    ))
                }
            };
            let arg = self.parse_expr()?;
            self.expect(')')?;
            return Ok(Node::Call(func, Box::new(arg)));
        }
        match self.variables.iter().position(|v| *v == name) {
            Some(i) => Ok(Node::Var(i)),
            None => Err(ExprError::new(
                start + 1,
                format!("unknown identifier `{name}`"),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse_ab(text: &str) -> Expression {
        Expression::parse(text, &["alpha", "beta"]).unwrap()
    }

    #[test]
    fn evaluates_with_standard_precedence() {
        let e = parse_ab("1 + 2*3 - 4/2");
        assert_eq!(e.eval(&[0.0, 0.0]), 5.0);
        let e = parse_ab("2^3^2");
        assert_eq!(e.eval(&[0.0, 0.0]), 512.0); // right-associative
        let e = parse_ab("-2^2");
        assert_eq!(e.eval(&[0.0, 0.0]), -4.0); // pow binds tighter than neg
        let e = parse_ab("2^-1");
        assert_eq!(e.eval(&[0.0, 0.0]), 0.5);
    }

    #[test]
    fn evaluates_variables_and_functions() {
        let e = parse_ab("1/(alpha^2+1) + 1/(beta^2+1)");
        assert_eq!(e.eval(&[0.0, 0.0]), 2.0);
        assert_eq!(e.eval(&[1.0, 1.0]), 1.0);
        let e = parse_ab("ln(exp(alpha)) + atan(0)");
        assert!((e.eval(&[1.5, 0.0]) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_identifiers_with_position() {
        let err = Expression::parse("1/(gamma^2+1)", &["alpha", "beta"]).unwrap_err();
        assert!(err.message.contains("unknown identifier `gamma`"));
        assert_eq!(err.column, 4);
        let err = Expression::parse("sin(alpha)", &["alpha"]).unwrap_err();
        assert!(err.message.contains("unknown function"));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "1 +", "(1", "1)", "1 2", "^2", "alpha beta"] {
            assert!(
                Expression::parse(bad, &["alpha", "beta"]).is_err(),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn division_by_zero_propagates_as_non_finite() {
        let e = parse_ab("1/alpha");
        assert!(!e.eval(&[0.0, 0.0]).is_finite());
        let e = parse_ab("ln(alpha)");
        assert!(e.eval(&[-1.0, 0.0]).is_nan());
    }

    fn arb_node() -> impl Strategy<Value = Node> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(|n| Node::Number(n as f64)),
            (0usize..2).prop_map(Node::Var),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Div(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Pow(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
                inner
                    .clone()
                    .prop_map(|a| Node::Call(UnaryFn::Atan, Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_print_is_a_fixed_point(root in arb_node()) {
            let expr = Expression {
                variables: vec!["alpha".into(), "beta".into()],
                root,
            };
            let printed = expr.to_string();
            let reparsed = Expression::parse(&printed, &["alpha", "beta"]).unwrap();
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
