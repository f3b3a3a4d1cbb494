//! Expression trees over interval primitives.

use std::collections::BTreeMap;
use std::ops;

use super::interval::{Interval, IntervalError};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// `num / den`.
    Rational(i64, i64),
    /// A decimal constant looked up by name, so it can be swapped out.
    Named(&'static str),
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    Acos(Box<Expr>),
}

pub fn rat(num: i64, den: i64) -> Expr {
    Expr::Rational(num, den)
}

pub fn int(n: i64) -> Expr {
    Expr::Rational(n, 1)
}

pub fn pi() -> Expr {
    Expr::Pi
}

pub fn named(name: &'static str) -> Expr {
    Expr::Named(name)
}

pub fn sqrt(e: Expr) -> Expr {
    Expr::Sqrt(Box::new(e))
}

pub fn acos(e: Expr) -> Expr {
    Expr::Acos(Box::new(e))
}

/// Isoperimetric profile `B(A) = √(A(4π − A))`.
pub fn profile(area: Expr) -> Expr {
    sqrt(area.clone() * (int(4) * pi() - area))
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Named decimal constants plus an optional artificial minimum width applied
/// to every intermediate enclosure.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalContext {
    pub constants: BTreeMap<String, String>,
    pub min_width: f64,
}

impl EvalContext {
    pub fn new(constants: BTreeMap<String, String>) -> Self {
        Self {
            constants,
            min_width: 0.0,
        }
    }

    fn constant(&self, name: &str) -> Result<&str, EvalError> {
        self.constants
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| EvalError::UnknownConstant(name.to_string()))
    }

    pub fn eval(&self, e: &Expr) -> Result<Interval, EvalError> {
        let value = match e {
            Expr::Rational(n, d) => Interval::rational(*n, *d),
            Expr::Named(name) => Interval::decimal(self.constant(name)?)?,
            Expr::Pi => Interval::pi(),
            Expr::Add(a, b) => self.eval(a)?.add(&self.eval(b)?),
            Expr::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?),
            Expr::Mul(a, b) => self.eval(a)?.mul(&self.eval(b)?),
            Expr::Div(a, b) => self.eval(a)?.div(&self.eval(b)?)?,
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Sqrt(a) => self.eval(a)?.sqrt()?,
            Expr::Acos(a) => self.eval(a)?.acos()?,
        };
        Ok(if self.min_width > 0.0 {
            value.widened_to(self.min_width)
        } else {
            value
        })
    }

    /// Plain round-to-nearest evaluation with no error control.
    pub fn eval_f64(&self, e: &Expr) -> Result<f64, EvalError> {
        Ok(match e {
            Expr::Rational(n, d) => *n as f64 / *d as f64,
            Expr::Named(name) => {
                let text = self.constant(name)?;
                text.trim()
                    .parse()
                    .map_err(|_| EvalError::Interval(IntervalError::Decimal(text.to_string())))?
            }
            Expr::Pi => std::f64::consts::PI,
            Expr::Add(a, b) => self.eval_f64(a)? + self.eval_f64(b)?,
            Expr::Sub(a, b) => self.eval_f64(a)? - self.eval_f64(b)?,
            Expr::Mul(a, b) => self.eval_f64(a)? * self.eval_f64(b)?,
            Expr::Div(a, b) => self.eval_f64(a)? / self.eval_f64(b)?,
            Expr::Neg(a) => -self.eval_f64(a)?,
            Expr::Sqrt(a) => self.eval_f64(a)?.sqrt(),
            Expr::Acos(a) => self.eval_f64(a)?.acos(),
        })
    }
}
