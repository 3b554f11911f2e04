use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BigRat, FieldError, PolyK};

/// Element of Q(k). The denominator is monic and coprime to the numerator,
/// so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatK {
    num: PolyK,
    den: PolyK,
}

impl Default for RatK {
    fn default() -> Self {
        RatK::zero()
    }
}

impl RatK {
    pub fn zero() -> Self {
        RatK { num: PolyK::zero(), den: PolyK::one() }
    }

    pub fn one() -> Self {
        RatK { num: PolyK::one(), den: PolyK::one() }
    }

    pub fn k() -> Self {
        RatK::from_poly(PolyK::k())
    }

    /// `k + a`
    pub fn k_plus(a: i64) -> Self {
        RatK::from_poly(PolyK::k_plus(a))
    }

    pub fn from_i64(v: i64) -> Self {
        RatK::from_poly(PolyK::from_i64(v))
    }

    /// `p / q` as a constant.
    pub fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        RatK::constant(BigRat::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn constant(v: BigRat) -> Self {
        RatK::from_poly(PolyK::constant(v))
    }

    pub fn from_poly(p: PolyK) -> Self {
        RatK { num: p, den: PolyK::one() }
    }

    /// Builds `num / den`, normalizing. Errors if `den` is zero.
    pub fn new(num: PolyK, den: PolyK) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: PolyK, den: PolyK) -> Self {
        if num.is_zero() {
            return RatK::zero();
        }
        if den.is_constant() {
            let c = den.constant_term();
            if c.is_one() {
                return RatK { num, den };
            }
            return RatK { num: num.scale(&c.recip()), den: PolyK::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.lc().unwrap().clone();
        if lc.is_one() {
            RatK { num, den }
        } else {
            let inv = lc.recip();
            RatK { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn num(&self) -> &PolyK {
        &self.num
    }

    pub fn den(&self) -> &PolyK {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value does not depend on `k`.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRat> {
        if self.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    /// Integer value, if the element is a constant integer.
    pub fn as_integer(&self) -> Option<i64> {
        let c = self.constant_value()?;
        if !c.is_integer() {
            return None;
        }
        i64::try_from(c.to_integer()).ok()
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        if s.is_zero() {
            return RatK::zero();
        }
        RatK { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &RatK) -> Result<Self, FieldError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = RatK::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Value at `k = x`; errors if `x` is a pole.
    pub fn eval(&self, x: &BigRat) -> Result<BigRat, FieldError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(FieldError::Pole { at: x.to_string() });
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitutes `k -> s`, which may itself depend on `k`.
    pub fn substitute(&self, s: &RatK) -> Result<Self, FieldError> {
        let n = horner(&self.num, s);
        let d = horner(&self.den, s);
        if d.is_zero() {
            return Err(FieldError::Pole { at: s.to_string() });
        }
        n.checked_div(&d)
    }

    fn fmt_part(p: &PolyK, f: &mut fmt::Formatter<'_>, wrap: bool) -> fmt::Result {
        if wrap && (p.term_count() > 1 || p.degree().is_some_and(|d| d > 0) && !p.lc().unwrap().is_one()) {
            write!(f, "({})", p)
        } else {
            write!(f, "{}", p)
        }
    }
}

fn horner(p: &PolyK, s: &RatK) -> RatK {
    let mut acc = RatK::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * s) + &RatK::constant(c.clone());
    }
    acc
}

impl fmt::Display for RatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        RatK::fmt_part(&self.num, f, true)?;
        write!(f, "/")?;
        RatK::fmt_part(&self.den, f, true)
    }
}

impl fmt::Debug for RatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatK({})", self)
    }
}

impl From<i64> for RatK {
    fn from(v: i64) -> Self {
        RatK::from_i64(v)
    }
}

impl From<PolyK> for RatK {
    fn from(p: PolyK) -> Self {
        RatK::from_poly(p)
    }
}

impl From<BigRat> for RatK {
    fn from(v: BigRat) -> Self {
        RatK::constant(v)
    }
}

impl Add for &RatK {
    type Output = RatK;
    fn add(self, o: &RatK) -> RatK {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatK { num: &self.num + &o.num, den: PolyK::one() };
        }
        if self.den == o.den {
            return RatK::normalized(&self.num + &o.num, self.den.clone());
        }
        if o.den.is_one() {
            return RatK { num: &self.num + &(&o.num * &self.den), den: self.den.clone() };
        }
        if self.den.is_one() {
            return RatK { num: &(&self.num * &o.den) + &o.num, den: o.den.clone() };
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return RatK::normalized(num, &self.den * &o.den);
        }
        let a = self.den.div_rem(&g).0;
        let b = o.den.div_rem(&g).0;
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatK::normalized(num, &(&a * &b) * &g)
    }
}

impl Add for RatK {
    type Output = RatK;
    fn add(self, o: RatK) -> RatK {
        &self + &o
    }
}

impl AddAssign<&RatK> for RatK {
    fn add_assign(&mut self, o: &RatK) {
        if o.is_zero() {
            return;
        }
        if self.den.is_one() && o.den.is_one() {
            self.num = &self.num + &o.num;
            return;
        }
        *self = &*self + o;
    }
}

impl Neg for &RatK {
    type Output = RatK;
    fn neg(self) -> RatK {
        RatK { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatK {
    type Output = RatK;
    fn neg(self) -> RatK {
        RatK { num: -self.num, den: self.den }
    }
}

impl Sub for &RatK {
    type Output = RatK;
    fn sub(self, o: &RatK) -> RatK {
        self + &(-o)
    }
}

impl Sub for RatK {
    type Output = RatK;
    fn sub(self, o: RatK) -> RatK {
        &self - &o
    }
}

impl Mul for &RatK {
    type Output = RatK;
    fn mul(self, o: &RatK) -> RatK {
        if self.is_zero() || o.is_zero() {
            return RatK::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatK { num: &self.num * &o.num, den: PolyK::one() };
        }
        if self.is_constant() {
            return o.scale(&self.num.constant_term());
        }
        if o.is_constant() {
            return self.scale(&o.num.constant_term());
        }
        // cross-cancel before multiplying to keep degrees down
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() { (self.num.clone(), o.den.clone()) } else { (self.num.div_rem(&g1).0, o.den.div_rem(&g1).0) };
        let (n2, d1) = if g2.is_one() { (o.num.clone(), self.den.clone()) } else { (o.num.div_rem(&g2).0, self.den.div_rem(&g2).0) };
        let den = &d1 * &d2;
        let lc = den.lc().unwrap().clone();
        let num = &n1 * &n2;
        if lc.is_one() {
            RatK { num, den }
        } else {
            let inv = lc.recip();
            RatK { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Mul for RatK {
    type Output = RatK;
    fn mul(self, o: RatK) -> RatK {
        &self * &o
    }
}

/// Panics on division by zero; use [`RatK::checked_div`] for a structured error.
impl Div for &RatK {
    type Output = RatK;
    fn div(self, o: &RatK) -> RatK {
        self.checked_div(o).expect("division by zero in Q(k)")
    }
}

impl Div for RatK {
    type Output = RatK;
    fn div(self, o: RatK) -> RatK {
        &self / &o
    }
}

impl std::iter::Sum for RatK {
    fn sum<I: Iterator<Item = RatK>>(iter: I) -> RatK {
        let mut acc = RatK::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl std::iter::Product for RatK {
    fn product<I: Iterator<Item = RatK>>(iter: I) -> RatK {
        let mut acc = RatK::one();
        for x in iter {
            acc = &acc * &x;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> PolyK {
        PolyK::from_coeffs(c.iter().map(|x| rat(*x, 1)).collect())
    }

    fn ratk() -> impl Strategy<Value = RatK> {
        (prop::collection::vec(-4i64..=4, 1..4), prop::collection::vec(-3i64..=3, 1..3)).prop_filter_map("zero denominator", |(n, d)| {
            RatK::new(poly(&n), poly(&d)).ok()
        })
    }

    #[test]
    fn normal_form() {
        let a = RatK::new(poly(&[1, 1]), poly(&[1, 2, 1])).unwrap();
        assert_eq!(a, RatK::k_plus(1).inv().unwrap());
        assert_eq!(a.den().lc().unwrap(), &rat(1, 1));
        let b = RatK::new(poly(&[2]), poly(&[4, 2])).unwrap();
        assert_eq!(b, RatK::k_plus(2).inv().unwrap());
        assert!(RatK::new(poly(&[1]), PolyK::zero()).is_err());
    }

    #[test]
    fn substitution_shifts_the_level() {
        let a = &RatK::k() / &RatK::k_plus(3);
        let shifted = a.substitute(&RatK::k_plus(1)).unwrap();
        assert_eq!(shifted, &RatK::k_plus(1) / &RatK::k_plus(4));
        assert!(RatK::k_plus(2).inv().unwrap().eval(&rat(-2, 1)).is_err());
        assert_eq!(a.eval(&rat(1, 1)).unwrap(), rat(1, 4));
    }

    #[test]
    fn integers() {
        assert_eq!(RatK::from_i64(-7).as_integer(), Some(-7));
        assert_eq!(RatK::frac(1, 2).as_integer(), None);
        assert_eq!(RatK::k().as_integer(), None);
    }

    proptest! {
        #[test]
        fn field_axioms(a in ratk(), b in ratk(), c in ratk()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in ratk(), b in ratk(), x in -20i64..20) {
            let x = rat(x, 7);
            if let (Ok(va), Ok(vb)) = (a.eval(&x), b.eval(&x)) {
                prop_assert_eq!((&a * &b).eval(&x).unwrap(), &va * &vb);
                prop_assert_eq!((&a + &b).eval(&x).unwrap(), va + vb);
            }
        }
    }
}
