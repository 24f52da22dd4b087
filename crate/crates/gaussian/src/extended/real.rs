use std::ops::{Add, Mul, Neg, Sub};

use twofloat::TwoFloat;

/// Minimal real-number interface for the extended-precision routines.
///
/// Division and square root go through this trait because `TwoFloat`'s own
/// `/` and `sqrt` only reach `f64` accuracy without hardware FMA; the
/// `TwoFloat` implementation refines them with Newton steps built on its exact
/// multiplication.
pub trait Real:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Unit roundoff.
    const EPS: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn quotient(self, rhs: Self) -> Self;
    fn square_root(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn quotient(self, rhs: Self) -> Self {
        self / rhs
    }

    fn square_root(self) -> Self {
        self.sqrt()
    }
}

impl Real for TwoFloat {
    const EPS: f64 = 4.930380657631324e-32;

    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }

    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }

    fn quotient(self, rhs: Self) -> Self {
        let d = rhs.hi();
        let mut q = TwoFloat::from(self.hi() / d);
        for _ in 0..2 {
            let r = self - q * rhs;
            q += TwoFloat::from(r.hi() / d);
        }
        q
    }

    fn square_root(self) -> Self {
        if self.hi() == 0.0 && self.lo() == 0.0 {
            return self;
        }
        if self < TwoFloat::from(0.0) {
            return TwoFloat::from(f64::NAN);
        }
        let y0 = self.hi().sqrt();
        let mut y = TwoFloat::from(y0);
        for _ in 0..2 {
            let r = self - y * y;
            y += TwoFloat::from(r.hi() / (2.0 * y0));
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_reaches_double_double_accuracy() {
        let third = TwoFloat::from(1.0).quotient(TwoFloat::from(3.0));
        let residual = third * TwoFloat::from(3.0) - TwoFloat::from(1.0);
        assert!(residual.hi().abs() < 1e-31, "{residual:?}");
        let a = TwoFloat::new_add(1e9, 1e-9);
        let b = TwoFloat::new_add(31622.776601683792, 1.06e-12);
        let q = a.quotient(b);
        assert!((q * b - a).hi().abs() < 1e-22);
    }

    #[test]
    fn square_root_reaches_double_double_accuracy() {
        for x in [2.0, 1e9, 1e-12, 0.7] {
            let v = TwoFloat::from(x);
            let s = v.square_root();
            assert!((s * s - v).hi().abs() < 1e-30 * x, "{x}");
        }
        assert_eq!(TwoFloat::from(0.0).square_root(), TwoFloat::from(0.0));
        assert!(TwoFloat::from(-1.0).square_root().hi().is_nan());
    }

    #[test]
    fn f64_is_plain_arithmetic() {
        assert_eq!(9.0.square_root(), 3.0);
        assert_eq!(1.0.quotient(4.0), 0.25);
        assert_eq!((-2.5f64).magnitude(), 2.5);
    }
}
