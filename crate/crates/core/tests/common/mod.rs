//! High-precision reference values, computed with 256-bit binary floats.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use sphere_partition::verifier::{EvalContext, Expr, Interval};

pub const P: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

impl Oracle {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    pub fn rational(&self, n: i64, d: i64) -> BigFloat {
        BigFloat::from_i64(n, P).div(&BigFloat::from_i64(d, P), P, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(P, RM)
    }

    pub fn decimal(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, P, RM, &mut self.cc)
    }

    pub fn acos(&mut self, x: &BigFloat) -> BigFloat {
        x.acos(P, RM, &mut self.cc)
    }

    pub fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(P, RM)
    }

    /// `√(A(4π − A))`.
    pub fn profile(&mut self, area: &BigFloat) -> BigFloat {
        let four_pi = self.pi().mul(&self.f(4.0), P, RM);
        self.sqrt(&area.mul(&four_pi.sub(area, P, RM), P, RM))
    }

    pub fn eval(&mut self, e: &Expr, ctx: &EvalContext) -> BigFloat {
        match e {
            Expr::Rational(n, d) => self.rational(*n, *d),
            Expr::Named(name) => {
                let text = ctx.constants[*name].clone();
                self.decimal(&text)
            }
            Expr::Pi => self.pi(),
            Expr::Add(a, b) => self.eval(a, ctx).add(&self.eval(b, ctx), P, RM),
            Expr::Sub(a, b) => self.eval(a, ctx).sub(&self.eval(b, ctx), P, RM),
            Expr::Mul(a, b) => self.eval(a, ctx).mul(&self.eval(b, ctx), P, RM),
            Expr::Div(a, b) => self.eval(a, ctx).div(&self.eval(b, ctx), P, RM),
            Expr::Neg(a) => self.eval(a, ctx).neg(),
            Expr::Sqrt(a) => {
                let v = self.eval(a, ctx);
                self.sqrt(&v)
            }
            Expr::Acos(a) => {
                let v = self.eval(a, ctx);
                self.acos(&v)
            }
        }
    }

    pub fn nearest_f64(&mut self, x: &BigFloat) -> f64 {
        let s = x.format(Radix::Dec, RM, &mut self.cc).expect("formattable");
        s.parse().expect("decimal")
    }
}

pub fn encloses(iv: &Interval, x: &BigFloat) -> bool {
    BigFloat::from_f64(iv.lo(), P) <= *x && *x <= BigFloat::from_f64(iv.hi(), P)
}
