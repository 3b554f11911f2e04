use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{BigRat, RatK};
use crate::lattice::{Label, Momentum, RootData};

use super::poly::{DiffMono, WickPoly};

/// `P(d^j J) e^{(p, phi)}`: a Wick polynomial times a single exponential.
#[derive(Clone)]
pub struct VertexField {
    momentum: Momentum,
    poly: WickPoly,
}

impl VertexField {
    pub fn new(poly: WickPoly, momentum: Momentum) -> Self {
        VertexField { momentum, poly }
    }

    pub fn zero() -> Self {
        VertexField::new(WickPoly::zero(), Momentum::zero())
    }

    pub fn identity() -> Self {
        VertexField::new(WickPoly::one(), Momentum::zero())
    }

    pub fn constant(c: RatK) -> Self {
        VertexField::new(WickPoly::constant(c), Momentum::zero())
    }

    pub fn current(l: Label) -> Self {
        VertexField::new(WickPoly::current(l), Momentum::zero())
    }

    pub fn current_derivative(l: Label, d: u8) -> Self {
        VertexField::new(WickPoly::term(DiffMono::current(l, d), RatK::one()), Momentum::zero())
    }

    pub fn exp(p: Momentum) -> Self {
        VertexField::new(WickPoly::one(), p)
    }

    pub fn poly(&self) -> &WickPoly {
        &self.poly
    }

    pub fn momentum(&self) -> &Momentum {
        &self.momentum
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Weight of the polynomial part, if homogeneous.
    pub fn poly_weight(&self) -> Option<u32> {
        self.poly.weight()
    }

    /// `weight(P) + (p,p)/2`
    pub fn grading(&self, rd: &RootData) -> Option<RatK> {
        let w = self.poly.weight()?;
        let half = rd.pairing(&self.momentum, &self.momentum).scale(&BigRat::new(1.into(), 2.into()));
        Some(&RatK::from_i64(w as i64) + &half)
    }

    pub fn checked_add(&self, o: &VertexField) -> Result<VertexField> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.momentum != o.momentum {
            return Err(Error::Undefined(format!("sum of fields with momenta {} and {}", self.momentum, o.momentum)));
        }
        Ok(VertexField::new(self.poly.add(&o.poly), self.momentum.clone()))
    }

    pub fn scale(&self, s: &RatK) -> VertexField {
        VertexField::new(self.poly.scale(s), self.momentum.clone())
    }

    pub fn scale_i(&self, s: i64) -> VertexField {
        self.scale(&RatK::from_i64(s))
    }

    /// Multiplies the polynomial part by a momentum-free polynomial.
    pub fn times_poly(&self, p: &WickPoly) -> VertexField {
        VertexField::new(p.mul(&self.poly), self.momentum.clone())
    }

    /// `d(P e^p) = (dP + X_p P) e^p`
    pub fn derivative(&self) -> VertexField {
        let mut d = self.poly.derivative();
        if !self.momentum.is_zero() {
            d.add_assign(&WickPoly::linear(&self.momentum).mul(&self.poly));
        }
        VertexField::new(d, self.momentum.clone())
    }

    pub fn derivative_n(&self, n: u32) -> VertexField {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    pub fn map_labels(&self, f: impl Fn(Label) -> Label + Copy) -> VertexField {
        VertexField::new(self.poly.map_labels(f), Momentum::from_terms(self.momentum.iter().map(|(l, c)| (f(*l), c.clone()))))
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatK) -> RatK) -> VertexField {
        VertexField::new(self.poly.map_coeffs(f), self.momentum.clone())
    }

    /// Checks that every current and momentum component exists in `rd`.
    pub fn validate(&self, rd: &RootData) -> Result<()> {
        for l in self.poly.labels() {
            rd.validate(l)?;
        }
        for (l, _) in self.momentum.iter() {
            rd.validate(*l)?;
        }
        Ok(())
    }
}

impl PartialEq for VertexField {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() && o.is_zero() {
            return true;
        }
        self.momentum == o.momentum && self.poly == o.poly
    }
}

impl Eq for VertexField {}

impl fmt::Debug for VertexField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.poly)?;
        if !self.momentum.is_zero() {
            write!(f, " exp({})", self.momentum)?;
        }
        Ok(())
    }
}

/// Panics if the momenta differ; see [`VertexField::checked_add`].
impl Add for &VertexField {
    type Output = VertexField;
    fn add(self, o: &VertexField) -> VertexField {
        self.checked_add(o).expect("adding fields with different momenta")
    }
}

impl Add for VertexField {
    type Output = VertexField;
    fn add(self, o: VertexField) -> VertexField {
        &self + &o
    }
}

impl Neg for &VertexField {
    type Output = VertexField;
    fn neg(self) -> VertexField {
        self.scale_i(-1)
    }
}

impl Neg for VertexField {
    type Output = VertexField;
    fn neg(self) -> VertexField {
        self.scale_i(-1)
    }
}

impl Sub for &VertexField {
    type Output = VertexField;
    fn sub(self, o: &VertexField) -> VertexField {
        self + &(-o)
    }
}

impl Sub for VertexField {
    type Output = VertexField;
    fn sub(self, o: VertexField) -> VertexField {
        &self - &o
    }
}

impl std::iter::Sum for VertexField {
    fn sum<I: Iterator<Item = VertexField>>(iter: I) -> VertexField {
        iter.fold(VertexField::zero(), |a, b| a + b)
    }
}
