use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::exact::{BigRat, RatK};
use crate::lattice::{Label, Momentum};

/// `d^d J_label`
pub type Factor = (Label, u8);

/// Normally ordered product of current derivatives, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DiffMono(SmallVec<[Factor; 6]>);

impl DiffMono {
    pub fn one() -> Self {
        DiffMono(SmallVec::new())
    }

    pub fn from_factors(mut f: SmallVec<[Factor; 6]>) -> Self {
        f.sort_unstable();
        DiffMono(f)
    }

    pub fn current(l: Label, d: u8) -> Self {
        let mut v = SmallVec::new();
        v.push((l, d));
        DiffMono(v)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(_, d)| *d as u32 + 1).sum()
    }

    pub fn mul(&self, o: &DiffMono) -> DiffMono {
        if o.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return o.clone();
        }
        let mut v: SmallVec<[Factor; 6]> = SmallVec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            if self.0[i] <= o.0[j] {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(o.0[j]);
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&o.0[j..]);
        DiffMono(v)
    }

    /// Leibniz rule; returns `(multiplicity, monomial)` pairs.
    pub fn derivative(&self) -> Vec<(i64, DiffMono)> {
        let mut out: Vec<(i64, DiffMono)> = Vec::new();
        for i in 0..self.0.len() {
            if i > 0 && self.0[i] == self.0[i - 1] {
                continue;
            }
            let mult = self.0.iter().filter(|f| **f == self.0[i]).count() as i64;
            let mut v = self.0.clone();
            v[i].1 += 1;
            v.sort_unstable();
            out.push((mult, DiffMono(v)));
        }
        out
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().map(|(l, _)| *l)
    }

    pub fn map_labels(&self, f: impl Fn(Label) -> Label) -> DiffMono {
        DiffMono::from_factors(self.0.iter().map(|(l, d)| (f(*l), *d)).collect())
    }
}

impl fmt::Display for DiffMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, d)| if *d == 0 { l.to_string() } else { format!("d^{}({})", d, l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for DiffMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Polynomial in current derivatives with coefficients in Q(k).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WickPoly(BTreeMap<DiffMono, RatK>);

impl WickPoly {
    pub fn zero() -> Self {
        WickPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        WickPoly::term(DiffMono::one(), RatK::one())
    }

    pub fn constant(c: RatK) -> Self {
        WickPoly::term(DiffMono::one(), c)
    }

    pub fn current(l: Label) -> Self {
        WickPoly::term(DiffMono::current(l, 0), RatK::one())
    }

    pub fn term(m: DiffMono, c: RatK) -> Self {
        let mut p = WickPoly::zero();
        p.add_term(m, &c);
        p
    }

    /// `X_p = sum_l p_l J_l`
    pub fn linear(p: &Momentum) -> Self {
        WickPoly(p.iter().map(|(l, c)| (DiffMono::current(*l, 0), c.clone())).collect())
    }

    pub fn add_term(&mut self, m: DiffMono, c: &RatK) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DiffMono, &RatK)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &DiffMono) -> RatK {
        self.0.get(m).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &WickPoly) -> WickPoly {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }

    pub fn add_assign(&mut self, o: &WickPoly) {
        for (m, c) in &o.0 {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, o: &WickPoly, s: &RatK) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.0 {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn sub(&self, o: &WickPoly) -> WickPoly {
        let mut p = self.clone();
        p.add_scaled(o, &RatK::from_i64(-1));
        p
    }

    pub fn scale(&self, s: &RatK) -> WickPoly {
        if s.is_zero() {
            return WickPoly::zero();
        }
        WickPoly(self.0.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    pub fn scale_rat(&self, s: &BigRat) -> WickPoly {
        self.scale(&RatK::constant(s.clone()))
    }

    /// Wick (commutative) product.
    pub fn mul(&self, o: &WickPoly) -> WickPoly {
        let mut p = WickPoly::zero();
        for (a, ca) in &self.0 {
            for (b, cb) in &o.0 {
                p.add_term(a.mul(b), &(ca * cb));
            }
        }
        p
    }

    /// Derivative ignoring any exponential factor.
    pub fn derivative(&self) -> WickPoly {
        let mut p = WickPoly::zero();
        for (m, c) in &self.0 {
            for (mult, dm) in m.derivative() {
                p.add_term(dm, &c.scale(&BigRat::from_integer(mult.into())));
            }
        }
        p
    }

    /// Weights present, ascending.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.0.keys().map(|m| m.weight()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Weight if homogeneous (zero polynomial reports `None`).
    pub fn weight(&self) -> Option<u32> {
        let w = self.weights();
        (w.len() == 1).then(|| w[0])
    }

    pub fn max_weight(&self) -> u32 {
        self.0.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    pub fn component(&self, w: u32) -> WickPoly {
        WickPoly(self.0.iter().filter(|(m, _)| m.weight() == w).map(|(m, c)| (m.clone(), c.clone())).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatK) -> RatK) -> WickPoly {
        let mut p = WickPoly::zero();
        for (m, c) in &self.0 {
            p.add_term(m.clone(), &f(c));
        }
        p
    }

    pub fn try_map_coeffs<E>(&self, f: impl Fn(&RatK) -> Result<RatK, E>) -> Result<WickPoly, E> {
        let mut p = WickPoly::zero();
        for (m, c) in &self.0 {
            p.add_term(m.clone(), &f(c)?);
        }
        Ok(p)
    }

    pub fn map_labels(&self, f: impl Fn(Label) -> Label + Copy) -> WickPoly {
        let mut p = WickPoly::zero();
        for (m, c) in &self.0 {
            p.add_term(m.map_labels(f), c);
        }
        p
    }

    pub fn labels(&self) -> std::collections::BTreeSet<Label> {
        self.0.keys().flat_map(|m| m.labels().collect::<Vec<_>>()).collect()
    }

    /// Terms in display order: higher degree first, then canonical order.
    pub fn display_terms(&self) -> Vec<(&DiffMono, &RatK)> {
        let mut v: Vec<_> = self.0.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        v
    }
}

impl FromIterator<(DiffMono, RatK)> for WickPoly {
    fn from_iter<I: IntoIterator<Item = (DiffMono, RatK)>>(iter: I) -> Self {
        let mut p = WickPoly::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }
}

impl fmt::Debug for WickPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.display_terms().iter().map(|(m, c)| format!("({}) {}", c, m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All monomials of the given weight over the labels, in canonical order.
pub fn monomials_of_weight(labels: &[Label], w: u32) -> Vec<DiffMono> {
    let mut cands: Vec<Factor> = Vec::new();
    for &l in labels {
        for d in 0..w {
            cands.push((l, d as u8));
        }
    }
    cands.sort_unstable();
    let mut out = Vec::new();
    let mut cur: SmallVec<[Factor; 6]> = SmallVec::new();
    fn rec(cands: &[Factor], start: usize, rem: u32, cur: &mut SmallVec<[Factor; 6]>, out: &mut Vec<DiffMono>) {
        if rem == 0 {
            out.push(DiffMono(cur.clone()));
            return;
        }
        for i in start..cands.len() {
            let wt = cands[i].1 as u32 + 1;
            if wt > rem {
                continue;
            }
            cur.push(cands[i]);
            rec(cands, i, rem - wt, cur, out);
            cur.pop();
        }
    }
    rec(&cands, 0, w, &mut cur, &mut out);
    out.sort();
    out
}
