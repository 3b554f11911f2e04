use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::BigRat;

/// Dense polynomial in `k` with rational coefficients, lowest degree first.
/// The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyK {
    c: Vec<BigRat>,
}

impl PolyK {
    pub fn zero() -> Self {
        PolyK { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    /// The indeterminate `k`.
    pub fn k() -> Self {
        PolyK { c: vec![BigRat::zero(), BigRat::one()] }
    }

    pub fn constant(v: BigRat) -> Self {
        if v.is_zero() {
            Self::zero()
        } else {
            PolyK { c: vec![v] }
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(BigRat::from_integer(BigInt::from(v)))
    }

    pub fn from_coeffs(mut c: Vec<BigRat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyK { c }
    }

    /// `k + a`
    pub fn k_plus(a: i64) -> Self {
        PolyK::k() + PolyK::from_i64(a)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&BigRat> {
        self.c.last()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn constant_term(&self) -> BigRat {
        self.c.first().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        PolyK { c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = PolyK::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Division with remainder. Panics on a zero divisor.
    pub fn div_rem(&self, d: &PolyK) -> (PolyK, PolyK) {
        let dd = d.degree().expect("polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (PolyK::zero(), self.clone());
        }
        let inv_lc = d.c[dd].recip();
        let mut r = self.c.clone();
        let mut q = vec![BigRat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv_lc;
            if !t.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[i + j] -= &t * dc;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (PolyK::from_coeffs(q), PolyK::from_coeffs(r))
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &PolyK) -> PolyK {
        if self.is_zero() || other.is_zero() {
            return PolyK::zero();
        }
        let g = self.gcd(other);
        (self * &other.div_rem(&g).0).monic()
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, other: &PolyK) -> PolyK {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.c {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        l
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            if d == 0 {
                write!(f, "{}", a)?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{}*", a)?;
            }
            write!(f, "{}", var)?;
            if d > 1 {
                write!(f, "^{}", d)?;
            }
        }
        Ok(())
    }

    /// Term count, used to decide whether a rendering needs parentheses.
    pub fn term_count(&self) -> usize {
        self.c.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, "k")
    }
}

impl fmt::Debug for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyK({})", self)
    }
}

impl PartialOrd for PolyK {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyK {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl Add for &PolyK {
    type Output = PolyK;
    fn add(self, o: &PolyK) -> PolyK {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, x) in short.c.iter().enumerate() {
            c[i] += x;
        }
        PolyK::from_coeffs(c)
    }
}

impl AddAssign<&PolyK> for PolyK {
    fn add_assign(&mut self, o: &PolyK) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), BigRat::zero());
        }
        for (i, x) in o.c.iter().enumerate() {
            self.c[i] += x;
        }
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }
}

impl Add for PolyK {
    type Output = PolyK;
    fn add(self, o: PolyK) -> PolyK {
        &self + &o
    }
}

impl Neg for &PolyK {
    type Output = PolyK;
    fn neg(self) -> PolyK {
        PolyK { c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for PolyK {
    type Output = PolyK;
    fn neg(self) -> PolyK {
        -&self
    }
}

impl Sub for &PolyK {
    type Output = PolyK;
    fn sub(self, o: &PolyK) -> PolyK {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        PolyK::from_coeffs(c)
    }
}

impl Sub for PolyK {
    type Output = PolyK;
    fn sub(self, o: PolyK) -> PolyK {
        &self - &o
    }
}

impl Mul for &PolyK {
    type Output = PolyK;
    fn mul(self, o: &PolyK) -> PolyK {
        if self.c.is_empty() || o.c.is_empty() {
            return PolyK::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut c = vec![BigRat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyK::from_coeffs(c)
    }
}

impl Mul for PolyK {
    type Output = PolyK;
    fn mul(self, o: PolyK) -> PolyK {
        &self * &o
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

    #[test]
    fn gcd_is_monic() {
        let a = &poly(&[2, 2]) * &poly(&[3, 1]);
        let b = &poly(&[1, 1]) * &poly(&[-1, 1]);
        assert_eq!(a.gcd(&b), poly(&[1, 1]));
        assert_eq!(poly(&[0, 0, 0]), PolyK::zero());
        assert_eq!(poly(&[1, 2, 1]).eval(&rat(-1, 1)), rat(0, 1));
    }

    proptest! {
        #[test]
        fn division_with_remainder(a in prop::collection::vec(-5i64..=5, 1..5), d in prop::collection::vec(-3i64..=3, 1..3)) {
            let (a, d) = (poly(&a), poly(&d));
            prop_assume!(!d.is_zero());
            let (q, r) = a.div_rem(&d);
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.is_zero() || r.degree() < d.degree());
        }

        #[test]
        fn gcd_divides(a in prop::collection::vec(-4i64..=4, 1..4), b in prop::collection::vec(-4i64..=4, 1..4)) {
            let (a, b) = (poly(&a), poly(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = a.gcd(&b);
            prop_assert!(a.div_rem(&g).1.is_zero());
            prop_assert!(b.div_rem(&g).1.is_zero());
        }
    }
}
