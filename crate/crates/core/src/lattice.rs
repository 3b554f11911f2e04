//! Root data of the free-field realizations: currents, the Gram matrix of
//! the momentum lattice, and the level-dependent constants.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat, BigRat, MatK, RatK};

/// A free current `J = (b, dphi)`. The derived order is the canonical
/// basis order `A_{n-m-1}, ..., A_1, Q+, Q-, A_{-1}, ..., Y`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(i16);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    A(i32),
    QPlus,
    QMinus,
    Y,
}

impl Label {
    pub const QP: Label = Label(100);
    pub const QM: Label = Label(101);
    pub const Y: Label = Label(1000);

    pub fn a(i: i32) -> Label {
        assert!(i != 0 && i.abs() < 99, "A index out of range");
        if i > 0 {
            Label(100 - i as i16)
        } else {
            Label(101 - i as i16)
        }
    }

    /// Dense code respecting the canonical order.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn kind(self) -> LabelKind {
        match self.0 {
            100 => LabelKind::QPlus,
            101 => LabelKind::QMinus,
            1000 => LabelKind::Y,
            c if c < 100 => LabelKind::A(100 - c as i32),
            c => LabelKind::A(101 - c as i32),
        }
    }

    /// Mirror image under the label-reversing automorphism.
    pub fn mirror(self) -> Label {
        match self.kind() {
            LabelKind::A(i) => Label::a(-i),
            LabelKind::QPlus => Label::QM,
            LabelKind::QMinus => Label::QP,
            LabelKind::Y => Label::Y,
        }
    }

    /// Name of the lattice vector paired with this current.
    pub fn vector_name(self) -> String {
        match self.kind() {
            LabelKind::A(i) => format!("a{}", i),
            LabelKind::QPlus => "psi+".into(),
            LabelKind::QMinus => "psi-".into(),
            LabelKind::Y => "xi".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "Q+" | "Q" => Some(Label::QP),
            "Q-" => Some(Label::QM),
            "Y" => Some(Label::Y),
            "psi+" | "psi" => Some(Label::QP),
            "psi-" => Some(Label::QM),
            "xi" | "Xi" => Some(Label::Y),
            _ => {
                let rest = s.strip_prefix('A').or_else(|| s.strip_prefix('a'))?;
                let i: i32 = rest.parse().ok()?;
                (i != 0 && i.abs() < 99).then(|| Label::a(i))
            }
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            LabelKind::A(i) => write!(f, "A{}", i),
            LabelKind::QPlus => write!(f, "Q+"),
            LabelKind::QMinus => write!(f, "Q-"),
            LabelKind::Y => write!(f, "Y"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A lattice vector written in the basis dual to the currents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Momentum(BTreeMap<Label, RatK>);

impl Momentum {
    pub fn zero() -> Self {
        Momentum(BTreeMap::new())
    }

    pub fn basis(l: Label) -> Self {
        Momentum::from_terms([(l, RatK::one())])
    }

    /// The vector `xi` paired with the current `Y`.
    pub fn xi() -> Self {
        Momentum::basis(Label::Y)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Label, RatK)>) -> Self {
        let mut m = Momentum::zero();
        for (l, c) in terms {
            m.add_term(l, &c);
        }
        m
    }

    pub fn add_term(&mut self, l: Label, c: &RatK) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(l).or_default();
        *e += c;
        if e.is_zero() {
            self.0.remove(&l);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, l: Label) -> RatK {
        self.0.get(&l).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &RatK)> {
        self.0.iter()
    }

    pub fn scale(&self, s: &RatK) -> Momentum {
        Momentum::from_terms(self.0.iter().map(|(l, c)| (*l, c * s)))
    }

    pub fn add(&self, o: &Momentum) -> Momentum {
        let mut m = self.clone();
        for (l, c) in &o.0 {
            m.add_term(*l, c);
        }
        m
    }

    pub fn neg(&self) -> Momentum {
        Momentum(self.0.iter().map(|(l, c)| (*l, -c)).collect())
    }

    pub fn mirror(&self, flip_xi: bool) -> Momentum {
        Momentum::from_terms(self.0.iter().map(|(l, c)| {
            let c = if flip_xi && *l == Label::Y { -c } else { c.clone() };
            (l.mirror(), c)
        }))
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(l, c)| format!("({})*{}", c, l.vector_name())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Momentum({})", self)
    }
}

/// Lattice data of the realization `n[m]`.
#[derive(Clone, Debug)]
pub struct RootData {
    pub n: usize,
    pub m: usize,
    labels: Vec<Label>,
    gram: MatK,
    exclusions: Vec<BigRat>,
}

impl RootData {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m > n {
            return Err(Error::InvalidRank { n, m });
        }
        if m == n {
            return Ok(RootData::new(n, 0)?.mirrored());
        }
        let mut labels: Vec<Label> = (1..(n - m) as i32).rev().map(Label::a).collect();
        labels.push(Label::QP);
        if m > 0 {
            labels.push(Label::QM);
        }
        labels.extend((1..m as i32).map(|i| Label::a(-i)));
        labels.push(Label::Y);
        let gram = build_gram(n, &labels);
        Ok(RootData { n, m, labels, gram, exclusions: excluded_levels(n) })
    }

    /// The realization `n[n-m]` obtained by reversing the labels; the vector
    /// `xi` changes sign, so pairings with `Y` flip.
    fn mirrored(&self) -> RootData {
        let mut labels: Vec<Label> = self.labels.iter().map(|l| l.mirror()).collect();
        labels.sort();
        let d = labels.len();
        let mut gram = MatK::zeros(d, d);
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                let mut g = self.gram_entry(a.mirror(), b.mirror());
                if (*a == Label::Y) != (*b == Label::Y) {
                    g = -g;
                }
                gram[(i, j)] = g;
            }
        }
        RootData { n: self.n, m: self.n - self.m, labels, gram, exclusions: self.exclusions.clone() }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, l: Label) -> Option<usize> {
        self.labels.iter().position(|x| *x == l)
    }

    pub fn has(&self, l: Label) -> bool {
        self.index_of(l).is_some()
    }

    pub fn gram(&self) -> &MatK {
        &self.gram
    }

    /// Pairing of two basis vectors (zero if either is absent).
    pub fn gram_entry(&self, a: Label, b: Label) -> RatK {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.gram[(i, j)].clone(),
            _ => RatK::zero(),
        }
    }

    /// `(b_l, p)`
    pub fn pair_label(&self, l: Label, p: &Momentum) -> RatK {
        let mut acc = RatK::zero();
        for (x, c) in p.iter() {
            let g = self.gram_entry(l, *x);
            if !g.is_zero() {
                acc += &(&g * c);
            }
        }
        acc
    }

    pub fn pairing(&self, p: &Momentum, q: &Momentum) -> RatK {
        let mut acc = RatK::zero();
        for (l, c) in p.iter() {
            let t = self.pair_label(*l, q);
            if !t.is_zero() {
                acc += &(c * &t);
            }
        }
        acc
    }

    /// `k + n`
    pub fn kappa(&self) -> RatK {
        RatK::k_plus(self.n as i64)
    }

    pub fn exclusions(&self) -> &[BigRat] {
        &self.exclusions
    }

    pub fn check_level(&self, value: &BigRat) -> Result<()> {
        if self.exclusions.contains(value) {
            return Err(Error::ExcludedLevel { n: self.n, value: value.to_string() });
        }
        Ok(())
    }

    pub fn validate(&self, l: Label) -> Result<()> {
        if self.has(l) {
            Ok(())
        } else {
            Err(Error::UnknownLabel(format!("{} in {}[{}]", l, self.n, self.m)))
        }
    }

    /// Inverse Gram matrix in label order.
    pub fn gram_inverse(&self) -> Result<MatK> {
        Ok(self.gram.inverse()?)
    }

    /// Gram matrix with the `Y` row and column removed.
    pub fn dressed_cartan(&self) -> MatK {
        let d = self.dim() - 1;
        let mut c = MatK::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                c[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        c
    }

    /// The vector in the span of `a_i, psi` pairing like `xi` with all of them,
    /// in label order (without `Y`).
    pub fn xi_projection(&self) -> Result<Vec<RatK>> {
        let c = self.dressed_cartan();
        let rhs: Vec<RatK> = self.labels[..self.dim() - 1].iter().map(|l| self.gram_entry(*l, Label::Y)).collect();
        match c.solve(&rhs)? {
            crate::exact::Solution::Unique(x) => Ok(x),
            _ => Err(Error::Field(crate::exact::FieldError::Singular)),
        }
    }
}

fn build_gram(n: usize, labels: &[Label]) -> MatK {
    let kap = RatK::k_plus(n as i64);
    let d = labels.len();
    let mut g = MatK::zeros(d, d);
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            g[(i, j)] = gram_rule(&kap, *a, *b);
        }
    }
    g
}

fn gram_rule(kap: &RatK, a: Label, b: Label) -> RatK {
    use LabelKind::*;
    let (x, y) = if a <= b { (a.kind(), b.kind()) } else { (b.kind(), a.kind()) };
    match (x, y) {
        (A(i), A(j)) if i == j => kap * &RatK::from_i64(2),
        (A(i), A(j)) if i.signum() == j.signum() && (i - j).abs() == 1 => -kap,
        (A(1), QPlus) | (QMinus, A(-1)) => -kap,
        (QPlus, QPlus) | (QMinus, QMinus) => RatK::one(),
        (QPlus, QMinus) => kap - &RatK::one(),
        (QPlus, Y) => RatK::one(),
        (QMinus, Y) => RatK::from_i64(-1),
        _ => RatK::zero(),
    }
}

/// Levels at which the construction degenerates: `k = -n` and the zero of `l_n`.
pub fn excluded_levels(n: usize) -> Vec<BigRat> {
    let n = n as i64;
    let mut v = vec![rat(-n, 1)];
    if n > 1 {
        let z = rat(-n * (n - 2), n - 1);
        if !v.contains(&z) {
            v.push(z);
        }
    }
    v
}

/// `l_n(k) = ((n-1)/n) k + n - 2`
pub fn ell(n: usize) -> RatK {
    let n = n as i64;
    &RatK::k().scale(&rat(n - 1, n)) + &RatK::from_i64(n - 2)
}

/// `lambda_m(n, k) = prod_{i=1}^m (i (k+n-1) - 1)`, with `lambda_m = 1` for `m <= 0`.
pub fn lambda(m: i64, n: usize) -> RatK {
    let base = RatK::k_plus(n as i64 - 1);
    (1..=m).map(|i| &base.scale(&rat(i, 1)) - &RatK::one()).product()
}

/// Virasoro central charge of the algebra at level `k`.
pub fn central_charge(n: usize) -> RatK {
    let n = n as i64;
    let kap = RatK::k_plus(n);
    let a = &kap.scale(&rat(n - 1, 1)) - &RatK::from_i64(n);
    let b = &kap.scale(&rat((n - 2) * n, 1)) - &RatK::from_i64(n * n - 1);
    -(&(&a * &b) / &kap)
}

/// Central charge of the `(p, p')` minimal model of `W_{m+1}`.
pub fn minimal_model_charge(p: i64, pp: i64, m: i64) -> BigRat {
    let cube = rat((m - 1) * m * (m + 1), 1);
    rat(2 * m * m * m - m - 1, 1) - &cube * rat(pp, p) - &cube * rat(p, pp)
}

/// The level `k = 1 - n + (m+1)/(n-1)` at which the Virasoro charge matches
/// the `W_{m+1}` minimal model `(m+1, m+n)` after removing the Heisenberg part.
pub fn rank_level_point(n: usize, m: i64) -> BigRat {
    let n = n as i64;
    rat(1 - n, 1) + rat(m + 1, n - 1)
}

/// Dual level `k'` with `(k+n-1)(k'+n-1) = 1`.
pub fn dual_level(n: usize, k: &RatK) -> Result<RatK> {
    let n = n as i64;
    let shifted = k + &RatK::from_i64(n - 1);
    Ok(&shifted.inv()? - &RatK::from_i64(n - 1))
}

/// Conformal weight of the `[lambda_1, k']` module.
pub fn weight_lambda1(n: usize, kp: &RatK) -> Result<RatK> {
    let nn = n as i64;
    let den = (kp + &RatK::from_i64(nn)).scale(&rat(2 * nn, 1));
    Ok(RatK::from_i64(nn * nn - 1).checked_div(&den)?)
}

/// `L_0` eigenvalue of the primary vertex `V_{n,m}`: `1 - n/2 + (n^2-1)/(2n(k+n))`.
pub fn primary_weight(n: usize) -> RatK {
    let nn = n as i64;
    let kap = RatK::k_plus(nn);
    &RatK::constant(rat(2 - nn, 2)) + &(&RatK::constant(rat(nn * nn - 1, 2 * nn)) / &kap)
}

/// Explicit form of the projection of `xi` for `m = 0`, coefficients in
/// label order `a_{n-1}, ..., a_1, psi`.
pub fn xi_projection_explicit(n: usize) -> Vec<RatK> {
    let l = ell(n);
    let s = -(&RatK::from_i64(n as i64) * &l).inv().expect("l_n nonzero");
    (1..=n as i64).map(|j| s.scale(&rat(j, 1))).collect()
}

/// Explicit inverse Gram matrix for `m = 0`, in label order.
pub fn gram_inverse_explicit(n: usize) -> MatK {
    let nn = n as i64;
    let kap = RatK::k_plus(nn);
    let inv_k = kap.inv().expect("k+n nonzero");
    let mut g = MatK::zeros(n + 1, n + 1);
    let over_n = rat(1, nn);
    for r in 1..nn {
        for c in 1..nn {
            let v = rat(r.min(c) * (nn - r.max(c)), 1);
            g[((r - 1) as usize, (c - 1) as usize)] = inv_k.scale(&(v * &over_n));
        }
        g[((r - 1) as usize, n)] = RatK::constant(rat(r, nn));
        g[(n, (r - 1) as usize)] = RatK::constant(rat(r, nn));
    }
    g[(n - 1, n)] = RatK::one();
    g[(n, n - 1)] = RatK::one();
    g[(n, n)] = ell(n);
    g
}

/// Determinant `-n (k+n)^{n-1}` of the Gram matrix.
pub fn gram_det_expected(n: usize) -> RatK {
    let kap = RatK::k_plus(n as i64);
    -(&RatK::from_i64(n as i64) * &kap.pow(n as i32 - 1).expect("power"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn label_order_and_names() {
        let rd = RootData::new(4, 2).unwrap();
        let shown: Vec<String> = rd.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, ["A1", "Q+", "Q-", "A-1", "Y"]);
        for l in rd.labels() {
            assert_eq!(Label::parse(&l.to_string()), Some(*l));
            assert_eq!(Label::parse(&l.vector_name()), Some(*l));
            assert_eq!(l.mirror().mirror(), *l);
        }
        assert_eq!(Label::parse("A0"), None);
        assert_eq!(Label::parse("B1"), None);
    }

    #[test]
    fn extreme_realizations() {
        let r0 = RootData::new(3, 0).unwrap();
        assert!(r0.has(Label::QP) && !r0.has(Label::QM));
        let r3 = RootData::new(3, 3).unwrap();
        assert!(r3.has(Label::QM) && !r3.has(Label::QP));
        assert_eq!(r3.dim(), r0.dim());
        assert_eq!(r3.gram_entry(Label::QM, Label::Y), RatK::from_i64(-1));
        assert!(RootData::new(3, 4).is_err());
        assert!(RootData::new(0, 0).is_err());
    }

    #[test]
    fn dressed_cartan_entries() {
        let rd = RootData::new(3, 1).unwrap();
        let kap = rd.kappa();
        assert_eq!(rd.gram_entry(Label::a(1), Label::a(1)), &kap * &RatK::from_i64(2));
        assert_eq!(rd.gram_entry(Label::a(1), Label::QP), -&kap);
        assert_eq!(rd.gram_entry(Label::QP, Label::QM), &kap - &RatK::one());
        assert_eq!(rd.gram_entry(Label::QP, Label::QP), RatK::one());
        assert_eq!(rd.dressed_cartan().rows(), rd.dim() - 1);
    }

    #[test]
    fn special_levels() {
        let rd = RootData::new(3, 0).unwrap();
        assert!(rd.check_level(&rat(-3, 1)).is_err());
        // l_3 = 2k/3 + 1 vanishes at k = -3/2
        assert!(rd.check_level(&rat(-3, 2)).is_err());
        assert!(rd.check_level(&rat(1, 1)).is_ok());
        assert_eq!(rank_level_point(3, 2), rat(-1, 2));
        assert_eq!(lambda(0, 4), RatK::one());
        assert_eq!(lambda(2, 2), &RatK::k() * &(&RatK::k().scale(&rat(2, 1)) + &RatK::one()));
        // c_2 is the Sugawara charge of sl(2)
        assert_eq!(central_charge(2), &RatK::k().scale(&rat(3, 1)) / &RatK::k_plus(2));
    }

    proptest! {
        #[test]
        fn gram_is_symmetric(n in 2usize..6, m in 0usize..6) {
            prop_assume!(m <= n);
            let rd = RootData::new(n, m).unwrap();
            prop_assert_eq!(rd.gram().transpose(), rd.gram().clone());
            prop_assert_eq!(rd.dim(), n + 1);
            prop_assert_eq!(rd.gram().det().unwrap(), gram_det_expected(n));
        }

        #[test]
        fn pairing_is_bilinear(a in prop::collection::vec(-3i64..=3, 4), b in prop::collection::vec(-3i64..=3, 4), s in -4i64..=4) {
            let rd = RootData::new(3, 1).unwrap();
            let mk = |v: &[i64]| Momentum::from_terms(rd.labels().iter().zip(v).map(|(l, c)| (*l, RatK::from_i64(*c))));
            let (p, q) = (mk(&a), mk(&b));
            prop_assert_eq!(rd.pairing(&p, &q), rd.pairing(&q, &p));
            prop_assert_eq!(rd.pairing(&p.scale(&RatK::from_i64(s)), &q), &rd.pairing(&p, &q) * &RatK::from_i64(s));
            prop_assert_eq!(rd.pairing(&p.add(&q), &q), &rd.pairing(&p, &q) + &rd.pairing(&q, &q));
        }
    }
}
