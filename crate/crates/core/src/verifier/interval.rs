//! Closed intervals with outward rounding.
//!
//! Every operation rounds to nearest and then moves each endpoint one
//! representable number outward (`next_down` / `next_up`). Round-to-nearest
//! is off by at most half an ulp, so the nudged result always contains the
//! exact value. Exact results (negation, products with an exact zero) are
//! not nudged.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

pub const ROUNDING_MODE: &str = "round-to-nearest, then each endpoint nudged one ulp outward (next_down/next_up)";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("invalid interval [{lo}, {hi}]")]
    Invalid { lo: f64, hi: f64 },
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),
    #[error("square root of an interval reaching below zero: {0}")]
    SqrtDomain(Interval),
    #[error("arccos of an interval leaving [-1, 1]: {0}")]
    AcosDomain(Interval),
    #[error("cannot parse decimal `{0}`")]
    Decimal(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::Invalid { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The single float `x`, taken as exact.
    pub fn exact(x: f64) -> Self {
        assert!(x.is_finite(), "exact() needs a finite value");
        Self { lo: x, hi: x }
    }

    /// Enclosure of `num / den`. Exact when the quotient is representable.
    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        assert!(num.unsigned_abs() < 1 << 53 && den.unsigned_abs() < 1 << 53);
        let (n, d) = (num as f64, den as f64);
        let q = n / d;
        // the residual of a correctly rounded quotient is exactly representable
        if q.mul_add(d, -n) == 0.0 {
            Self::exact(q)
        } else {
            Self { lo: down(q), hi: up(q) }
        }
    }

    /// Enclosure of a decimal literal such as `"11.47"`.
    pub fn decimal(text: &str) -> Result<Self, IntervalError> {
        let x: f64 = text.trim().parse().map_err(|_| IntervalError::Decimal(text.to_string()))?;
        if !x.is_finite() {
            return Err(IntervalError::Decimal(text.to_string()));
        }
        // parsing rounds correctly, so the true value is within half an ulp
        Ok(Self { lo: down(x), hi: up(x) })
    }

    /// `[PI, next_up(PI)]`; the f64 nearest π lies just below it.
    pub fn pi() -> Self {
        Self { lo: PI, hi: up(PI) }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Pads symmetrically so the width is at least `min_width`.
    pub fn widened_to(&self, min_width: f64) -> Interval {
        let w = self.width();
        if w >= min_width {
            return *self;
        }
        let pad = 0.5 * (min_width - w);
        Interval {
            lo: down(self.lo - pad),
            hi: up(self.hi + pad),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: down(self.lo + other.lo),
            hi: up(self.hi + other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: down(self.lo - other.hi),
            hi: up(self.hi - other.lo),
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in [self.lo, self.hi] {
            for b in [other.lo, other.hi] {
                let p = a * b;
                // a product with a zero factor is exact
                let exact = a == 0.0 || b == 0.0;
                lo = lo.min(if exact { p } else { down(p) });
                hi = hi.max(if exact { p } else { up(p) });
            }
        }
        Interval { lo, hi }
    }

    pub fn div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        if other.lo <= 0.0 && other.hi >= 0.0 {
            return Err(IntervalError::DivisionByZero(*other));
        }
        let quotients = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo: down(lo), hi: up(hi) })
    }

    pub fn sqr(&self) -> Interval {
        if self.lo >= 0.0 {
            Interval {
                lo: down(self.lo * self.lo).max(0.0),
                hi: up(self.hi * self.hi),
            }
        } else if self.hi <= 0.0 {
            self.neg().sqr()
        } else {
            let m = self.lo.abs().max(self.hi);
            Interval { lo: 0.0, hi: up(m * m) }
        }
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::SqrtDomain(*self));
        }
        Ok(Interval {
            lo: down(self.lo.sqrt()).max(0.0),
            hi: up(self.hi.sqrt()),
        })
    }

    /// Monotone decreasing, so the result is spanned by certified bounds at
    /// the two endpoints.
    pub fn acos(&self) -> Result<Interval, IntervalError> {
        if self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::AcosDomain(*self));
        }
        let at_hi = acos_point(self.hi);
        let at_lo = acos_point(self.lo);
        Ok(Interval {
            lo: at_hi.lo.max(0.0),
            hi: at_lo.hi,
        })
    }

    /// Drops the negative part of an enclosure of a quantity known to be
    /// nonnegative.
    fn clamp_nonneg(&self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

const ASIN_TERMS: usize = 64;

/// Enclosure of `acos(x)` for a float `x` in [-1, 1].
///
/// Uses `acos(x) = 2 asin(√((1−x)/2))` for `x ≥ 0` and
/// `acos(x) = π − 2 asin(√((1+x)/2))` for `x < 0`, so the series argument
/// never exceeds `1/√2`.
fn acos_point(x: f64) -> Interval {
    let one = Interval::exact(1.0);
    let half = Interval::exact(0.5);
    let two = Interval::exact(2.0);
    let xi = Interval::exact(x);
    if x >= 0.0 {
        let s = one.sub(&xi).mul(&half).clamp_nonneg().sqrt().expect("x ≤ 1");
        two.mul(&asin_series(&s))
    } else {
        let s = one.add(&xi).mul(&half).clamp_nonneg().sqrt().expect("x ≥ -1");
        Interval::pi().sub(&two.mul(&asin_series(&s)))
    }
}

/// `asin(s)` for `0 ≤ s ≤ 0.71` by its Maclaurin series
/// `Σ c_k s^(2k+1)`, `c_k = (2k)! / (4^k (k!)² (2k+1))`, plus a bound on the
/// tail. The coefficients decrease, so the tail after `K` terms is at most
/// `c_K s^(2K+1) / (1 − s²)`.
fn asin_series(s: &Interval) -> Interval {
    assert!(s.lo >= 0.0 && s.hi <= 0.71, "series argument out of range: {s}");
    let s2 = s.sqr();
    let mut power = *s;
    let mut coeff = Interval::exact(1.0);
    let mut sum = Interval::exact(0.0);
    for k in 0..ASIN_TERMS {
        let term = coeff.mul(&power);
        sum = sum.add(&term);
        power = power.mul(&s2);
        // c_{k+1} = c_k (2k+1)² / ((2k+2)(2k+3))
        let k = k as i64;
        coeff = coeff.mul(&Interval::rational((2 * k + 1) * (2 * k + 1), (2 * k + 2) * (2 * k + 3)));
        if term.hi < 1e-20 {
            break;
        }
    }
    let tail = coeff
        .mul(&power)
        .div(&Interval::exact(1.0).sub(&s2))
        .expect("s² < 1");
    Interval {
        lo: sum.lo,
        hi: up(sum.hi + tail.hi),
    }
}
