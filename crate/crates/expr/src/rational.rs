use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ExprError;
use crate::poly::{Poly, Var};

/// Exact multivariate rational function `numerator / denominator` over Q.
///
/// Always kept in canonical form: numerator and denominator are coprime and
/// the denominator is monic under the graded-lex term order, so structural
/// equality coincides with equality of functions. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        RationalExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn var(name: &str) -> Self {
        let v: Var = Arc::from(name);
        RationalExpr {
            num: Poly::var(&v),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalExpr {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator { position: None });
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return RationalExpr {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalExpr { num, den }
        } else {
            let inv = lc.recip();
            RationalExpr {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// True iff the canonical numerator is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Variables occurring in numerator or denominator, sorted by name.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn checked_div(&self, rhs: &RationalExpr) -> Result<RationalExpr, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::ZeroDenominator { position: None });
        }
        Ok(self.mul_ref(&rhs.recip_unchecked()))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<RationalExpr> {
        (!self.is_zero()).then(|| self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> RationalExpr {
        let lc = self.num.leading_coeff();
        let inv = lc.recip();
        RationalExpr {
            num: self.den.scale(&inv),
            den: self.num.scale(&inv),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Result<RationalExpr, ExprError> {
        if exp < 0 {
            let r = self
                .recip()
                .ok_or(ExprError::ZeroDenominator { position: None })?;
            return r.pow(-exp);
        }
        let e = exp as u32;
        Ok(RationalExpr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    pub fn add_ref(&self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::normalize(self.num.add(&rhs.num), self.den.clone());
        }
        if rhs.den.is_one() {
            return RationalExpr {
                num: self.num.add(&rhs.num.mul(&self.den)),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return RationalExpr {
                num: rhs.num.add(&self.num.mul(&rhs.den)),
                den: rhs.den.clone(),
            };
        }
        let g = self.den.gcd(&rhs.den);
        let ra = self.den.div_exact(&g).expect("gcd divides");
        let rb = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&rb).add(&rhs.num.mul(&ra));
        Self::normalize(num, self.den.mul(&rb))
    }

    pub fn sub_ref(&self, rhs: &RationalExpr) -> RationalExpr {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(self.num.mul(&rhs.num));
        }
        // Cross-cancel before multiplying; both inputs are already reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        let inv = lc.recip();
        RationalExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn scale(&self, c: &BigRational) -> RationalExpr {
        if c.is_zero() {
            return Self::zero();
        }
        RationalExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact partial derivative with respect to `var`.
    pub fn derivative(&self, var: &str) -> RationalExpr {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den))
    }

    /// Exact value at `point`; every occurring variable must be assigned.
    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<BigRational, ExprError> {
        let lookup = |v: &str| {
            point
                .get(v)
                .cloned()
                .ok_or_else(|| ExprError::UnassignedVariable(v.to_string()))
        };
        let d = self.den.eval_with(lookup)?;
        if d.is_zero() {
            return Err(ExprError::PoleAtPoint(self.to_string()));
        }
        let n = self.num.eval_with(lookup)?;
        Ok(n / d)
    }

    /// Square root when `self` is the square of a rational function with
    /// positive leading coefficients.
    pub fn sqrt_exact(&self) -> Option<RationalExpr> {
        let n = self.num.sqrt_exact()?;
        let d = self.den.sqrt_exact()?;
        Some(Self::normalize(n, d))
    }
}

impl Default for RationalExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalExpr {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for RationalExpr {
    fn from(c: BigRational) -> Self {
        Self::from_rational(c)
    }
}

impl fmt::Display for RationalExpr {
    /// Fully parenthesized canonical text; re-parses to the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                self.$inner(rhs)
            }
        }
        impl $tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$inner(rhs)
            }
        }
        impl $tr<RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl RationalExpr {
    fn div_panicking(&self, rhs: &RationalExpr) -> RationalExpr {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

// Panics on a zero divisor; use `checked_div` when the divisor may vanish.
forward_binop!(Div, div, div_panicking);

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        self.neg_ref()
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        self.neg_ref()
    }
}

impl std::iter::Sum for RationalExpr {
    fn sum<I: Iterator<Item = RationalExpr>>(iter: I) -> Self {
        iter.fold(RationalExpr::zero(), |a, b| a.add_ref(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> RationalExpr {
        RationalExpr::var("y")
    }

    fn z() -> RationalExpr {
        RationalExpr::var("z")
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let e = RationalExpr::from_int(4) * y() / (RationalExpr::from_int(2) * z());
        assert_eq!(e.denominator().to_string(), "z");
        assert_eq!(e.to_string(), "(2*y)/(z)");
        let neg = y() / (-z());
        assert_eq!(neg.to_string(), "(-y)/(z)");
    }

    #[test]
    fn common_factor_cancels() {
        let e = (z() * z() - y() * y()) / (z() - y());
        assert_eq!(e, y() + z());
        assert!(e.is_polynomial());
    }

    #[test]
    fn quotient_rule() {
        let e = RationalExpr::from_int(4) * y() / z();
        let d = e.derivative("z");
        assert_eq!(d, RationalExpr::from_int(-4) * y() / (z() * z()));
        assert!(e.derivative("x").is_zero());
    }

    #[test]
    fn negative_power_inverts() {
        assert_eq!(z().pow(-2).unwrap(), RationalExpr::one() / (z() * z()));
        assert!(RationalExpr::zero().pow(-1).is_err());
        assert!(RationalExpr::zero().pow(0).unwrap().is_one());
    }

    #[test]
    fn sqrt_of_rational_square() {
        let e = RationalExpr::one() / (z() * z());
        assert_eq!(e.sqrt_exact().unwrap(), RationalExpr::one() / z());
        assert!(z().sqrt_exact().is_none());
    }

    #[test]
    fn eval_reports_poles() {
        let mut pt = HashMap::new();
        pt.insert("z".to_string(), BigRational::zero());
        let e = RationalExpr::one() / z();
        assert!(matches!(e.eval(&pt), Err(ExprError::PoleAtPoint(_))));
        assert!(matches!(
            y().eval(&pt),
            Err(ExprError::UnassignedVariable(v)) if v == "y"
        ));
    }
}
