//! Generators of `W^(2)_n` in the realization `n[m]`: the polynomial
//! currents `P_n`, the fields `E, F, H, T`, the spin-3 current `W`, the
//! primary vertices and the U-currents of the `E F` expansion.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::{rat, MatK, RatK, Solution};
use crate::lattice::{ell, lambda, Label, LabelKind, Momentum, RootData};
use crate::screening;
use crate::wick::{fit, normal_product, normal_product_nested, ope, LaurentOpe, VertexField, WickPoly};

/// How the polynomial currents are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `P_n^{(k)} = ((k+n-1) d + Q + sum A_i) P_{n-1}^{(k+1)}` on Wick polynomials.
    Recursive,
    /// Product of the factors `((k+n-1) d + R_i)` applied through the OPE engine.
    Factored,
}

/// `P_n^{(k+shift)}` in the currents `A_{n-1}, ..., A_1, Q+`.
pub fn p_poly(n: usize, shift: i64) -> WickPoly {
    assert!(n >= 1, "P_0 is not defined");
    if n == 1 {
        return WickPoly::current(Label::QP);
    }
    let inner = p_poly(n - 1, shift + 1);
    let coef = RatK::k_plus(shift + n as i64 - 1);
    let mut lin = WickPoly::current(Label::QP);
    for i in 1..n as i32 {
        lin.add_assign(&WickPoly::current(Label::a(i)));
    }
    let mut out = inner.derivative().scale(&coef);
    out.add_assign(&lin.mul(&inner));
    out
}

/// `R_i = Q+ + A_1 + ... + A_i`
fn r_current(i: usize) -> VertexField {
    let mut p = WickPoly::current(Label::QP);
    for j in 1..=i as i32 {
        p.add_assign(&WickPoly::current(Label::a(j)));
    }
    VertexField::new(p, Momentum::zero())
}

/// `P_n^{(k+shift)}` as the ordered product of first-order factors
/// `((k+shift+n-1) d + R_i)`, each applied as a normally ordered product.
pub fn p_poly_factored(n: usize, shift: i64, rd: &RootData) -> Result<WickPoly> {
    if n == 0 {
        return Err(Error::Undefined("P_0".into()));
    }
    let coef = RatK::k_plus(shift + n as i64 - 1);
    let mut x = r_current(0);
    for i in 1..n {
        let d = x.derivative().scale(&coef);
        let nx = normal_product(&r_current(i), &x, rd)?;
        x = &d + &nx;
    }
    Ok(x.poly().clone())
}

/// `A_i -> A_{-i}`, `Q+ -> Q-`.
fn to_negative_side(l: Label) -> Label {
    match l.kind() {
        LabelKind::A(i) if i > 0 => Label::a(-i),
        LabelKind::QPlus => Label::QM,
        _ => l,
    }
}

fn p_for(n: usize, shift: i64, route: Route) -> Result<WickPoly> {
    match route {
        Route::Recursive => Ok(p_poly(n, shift)),
        // the currents A_{n-1}, ..., A_1, Q+ all live in the realization n[0]
        Route::Factored => p_poly_factored(n, shift, &RootData::new(n, 0)?),
    }
}

/// `E_{n[m]}`
pub fn e_field(rd: &RootData, route: Route) -> Result<VertexField> {
    let (n, m) = (rd.n, rd.m);
    if m == 0 {
        return Ok(VertexField::exp(Momentum::xi()));
    }
    let p = p_for(m, (n - m) as i64, route)?.map_labels(to_negative_side);
    Ok(VertexField::new(p, Momentum::xi()))
}

/// `F_{n[m]}`
pub fn f_field(rd: &RootData, route: Route) -> Result<VertexField> {
    let (n, m) = (rd.n, rd.m);
    let sign = if m % 2 == 0 { -1 } else { 1 };
    let mxi = Momentum::xi().neg();
    if m == n {
        return Ok(VertexField::exp(mxi).scale_i(sign));
    }
    let p = p_for(n - m, m as i64, route)?;
    Ok(VertexField::new(p, mxi).scale_i(sign))
}

/// `H_{n[m]} = l_n Y + sum_i ((n-i-m)/n) A_i + ((n-m)/n) Q+ - sum_i ((m+i)/n) A_{i} - (m/n) Q-`
pub fn h_field(rd: &RootData) -> VertexField {
    let (n, m) = (rd.n as i64, rd.m as i64);
    let mut p = WickPoly::current(Label::Y).scale(&ell(rd.n));
    for i in 1..(n - m) {
        p.add_term(crate::wick::DiffMono::current(Label::a(i as i32), 0), &RatK::constant(rat(n - i - m, n)));
    }
    if m < n {
        p.add_term(crate::wick::DiffMono::current(Label::QP, 0), &RatK::constant(rat(n - m, n)));
    }
    for i in (-m + 1)..0 {
        p.add_term(crate::wick::DiffMono::current(Label::a(i as i32), 0), &RatK::constant(rat(-(m + i), n)));
    }
    if m > 0 {
        p.add_term(crate::wick::DiffMono::current(Label::QM, 0), &RatK::constant(rat(-m, n)));
    }
    VertexField::new(p, Momentum::zero())
}

/// Sugawara-type energy-momentum tensor for `m = 0`:
/// `1/2 sum (Gamma^{-1})_{ij} J_i J_j + sum_i c_i dA_i - (n/2) dQ`.
pub fn t_gamma_formula(rd: &RootData) -> Result<VertexField> {
    if rd.m != 0 {
        return Err(Error::Undefined("the inverse-Gram form of T outside m = 0".into()));
    }
    let n = rd.n as i64;
    let inv: MatK = rd.gram_inverse()?;
    let labels = rd.labels();
    let mut p = WickPoly::zero();
    let half = RatK::constant(rat(1, 2));
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            let c = &inv[(i, j)] * &half;
            p.add_assign(&WickPoly::current(*a).mul(&WickPoly::current(*b)).scale(&c));
        }
    }
    let kap = RatK::k_plus(n);
    let kn1 = RatK::k_plus(n - 1);
    for i in 1..n {
        let num = &kn1.scale(&rat((n - i) * (i - 1), 1)) - &RatK::from_i64(n - i);
        let c = &num / &kap.scale(&rat(2, 1));
        p.add_term(crate::wick::DiffMono::current(Label::a(i as i32), 1), &c);
    }
    p.add_term(crate::wick::DiffMono::current(Label::QP, 1), &RatK::constant(rat(-n, 2)));
    Ok(VertexField::new(p, Momentum::zero()))
}

/// `T` read off from the pole of order `n-2` of `E F` (needs `n >= 3`).
pub fn t_from_ef(rd: &RootData, ef: &LaurentOpe, h: &VertexField) -> Result<VertexField> {
    let n = rd.n as i64;
    if n < 3 {
        return Err(Error::Undefined("T from the E F expansion for n < 3".into()));
    }
    let pole = ef.pole(n - 2)?;
    let hh = normal_product(h, h, rd)?;
    let kn1 = RatK::k_plus(n - 1);
    let c_dh = (&kn1.scale(&rat(n - 2, 1)) - &RatK::one()).scale(&rat(n, 2));
    let lam = lambda(n - 3, rd.n);
    let inside = &(&hh.scale(&RatK::constant(rat(n * (n - 1), 2))) + &h.derivative().scale(&c_dh)) - &pole.scale(&lam.inv()?);
    Ok(inside.scale(&rd.kappa().inv()?))
}

/// `T` fixed inside the weight-2 commutant of the screenings by
/// `T H ~ H/(z-w)^2 + dH/(z-w)` and `T E ~ (n/2) E/(z-w)^2 + ...`.
pub fn t_normalized(rd: &RootData, e: &VertexField, f: &VertexField, h: &VertexField) -> Result<VertexField> {
    let scr = screening::first_screenings(rd);
    let basis = screening::commutant_at_weight(rd, &scr, 2)?;
    let half_n = RatK::constant(rat(rd.n as i64, 2));
    let mut images = Vec::new();
    for b in &basis {
        let th = ope(b, h, rd, -1)?;
        let te = ope(b, e, rd, -1)?;
        let tf = ope(b, f, rd, -1)?;
        images.push(vec![th.pole(3)?, th.pole(2)?, te.pole(2)?, tf.pole(2)?]);
    }
    let targets = vec![VertexField::zero(), h.clone(), e.scale(&half_n), f.scale(&half_n)];
    match fit(&images, &targets)? {
        Solution::Unique(x) => Ok(crate::wick::combine(&x, &basis)),
        Solution::NoSolution => Err(Error::NoSolution("normalizing T in the weight-2 commutant".into())),
        Solution::Underdetermined { .. } => Err(Error::NotUnique("normalizing T in the weight-2 commutant".into())),
    }
}

/// `T_perp = T - HH/(2 l_n)`, the part of `T` commuting with `H`.
pub fn t_perp(rd: &RootData, t: &VertexField, h: &VertexField) -> Result<VertexField> {
    let hh = normal_product(h, h, rd)?;
    Ok(t - &hh.scale(&(&ell(rd.n) * &RatK::from_i64(2)).inv()?))
}

/// The weight-3 current `W_{n,3}` defined by subtracting the composite
/// part from the pole of order `n-3` of `E F` (needs `n >= 4`).
pub fn w3_field(rd: &RootData, ef: &LaurentOpe, t: &VertexField, h: &VertexField) -> Result<VertexField> {
    let n = rd.n as i64;
    if n < 4 {
        return Err(Error::Undefined("W_{n,3} for n < 4".into()));
    }
    let l = ell(rd.n);
    let tp = t_perp(rd, t, h)?;
    let pole = ef.pole(n - 3)?;
    let lam3 = lambda(n - 3, rd.n);
    let lam2 = lambda(n - 2, rd.n);
    let dh = h.derivative();
    let hhh = normal_product_nested(&[h.clone(), h.clone(), h.clone()], rd)?;
    let dhh = normal_product(&dh, h, rd)?;
    let ddh = dh.derivative();
    let nn = RatK::from_i64(n);
    let cubic = &(&hhh.scale(&(&nn / &(&l * &l).scale(&rat(6, 1)))) + &dhh.scale(&(&nn / &l.scale(&rat(2, 1)))))
        + &ddh.scale(&RatK::constant(rat(n, 6)));
    let htp = normal_product(h, &tp, rd)?;
    let inner = &tp.derivative().scale(&RatK::constant(rat(1, 2))) + &htp.scale(&l.inv()?);
    let w = &(&pole.scale(&lam3.inv()?) + &inner.scale(&rd.kappa())) - &cubic.scale(&(&lam2 / &lam3));
    Ok(w)
}

/// `V_{n,m} = exp(v)` with `v = (sum_j (m+j) a_j + m psi+ + m psi-)/(n(k+n)) + xi/n`.
pub fn primary_vertex(rd: &RootData) -> Result<VertexField> {
    let (n, m) = (rd.n as i64, rd.m as i64);
    if rd.m == rd.n {
        return Err(Error::Undefined("V_{n,m} for m = n".into()));
    }
    let s = (&RatK::k_plus(n) * &RatK::from_i64(n)).inv()?;
    let mut v = Momentum::zero();
    for j in (-m + 1)..(n - m) {
        if j != 0 {
            v.add_term(Label::a(j as i32), &s.scale(&rat(m + j, 1)));
        }
    }
    if m > 0 {
        v.add_term(Label::QP, &s.scale(&rat(m, 1)));
        v.add_term(Label::QM, &s.scale(&rat(m, 1)));
    }
    v.add_term(Label::Y, &RatK::constant(rat(1, n)));
    Ok(VertexField::exp(v))
}

/// `V*_{n,m} = exp(v*)` with
/// `v* = (sum_j j a_{n-m-j} + (n-m) psi+ + (n-m) psi-)/(n(k+n)) - xi/n`.
pub fn dual_primary_vertex(rd: &RootData) -> Result<VertexField> {
    let (n, m) = (rd.n as i64, rd.m as i64);
    if rd.m == 0 {
        return Err(Error::Undefined("V*_{n,m} for m = 0".into()));
    }
    let s = (&RatK::k_plus(n) * &RatK::from_i64(n)).inv()?;
    let mut v = Momentum::zero();
    for j in 1..n {
        if j != n - m {
            v.add_term(Label::a((n - m - j) as i32), &s.scale(&rat(j, 1)));
        }
    }
    if m < n {
        v.add_term(Label::QP, &s.scale(&rat(n - m, 1)));
        v.add_term(Label::QM, &s.scale(&rat(n - m, 1)));
    }
    v.add_term(Label::Y, &RatK::constant(rat(-1, n)));
    Ok(VertexField::exp(v))
}

/// All generators of one realization, with the heavier fields built on demand.
pub struct Realization {
    pub rd: RootData,
    pub route: Route,
    pub e: VertexField,
    pub f: VertexField,
    pub h: VertexField,
    ef: OnceLock<Result<LaurentOpe>>,
    t: OnceLock<Result<VertexField>>,
    w: OnceLock<Result<VertexField>>,
}

impl Realization {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Realization::with_route(n, m, Route::Recursive)
    }

    pub fn with_route(n: usize, m: usize, route: Route) -> Result<Self> {
        let rd = RootData::new(n, m)?;
        let e = e_field(&rd, route)?;
        let f = f_field(&rd, route)?;
        let h = h_field(&rd);
        Ok(Realization { rd, route, e, f, h, ef: OnceLock::new(), t: OnceLock::new(), w: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.rd.n
    }

    pub fn m(&self) -> usize {
        self.rd.m
    }

    /// `E(z) F(w)` through the regular term.
    pub fn ef(&self) -> Result<&LaurentOpe> {
        self.ef.get_or_init(|| ope(&self.e, &self.f, &self.rd, 0)).as_ref().map_err(Clone::clone)
    }

    pub fn t(&self) -> Result<&VertexField> {
        self.t
            .get_or_init(|| {
                if self.rd.n >= 3 {
                    t_from_ef(&self.rd, self.ef()?, &self.h)
                } else {
                    t_normalized(&self.rd, &self.e, &self.f, &self.h)
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn t_perp(&self) -> Result<VertexField> {
        t_perp(&self.rd, self.t()?, &self.h)
    }

    pub fn w(&self) -> Result<&VertexField> {
        self.w.get_or_init(|| w3_field(&self.rd, self.ef()?, self.t()?, &self.h)).as_ref().map_err(Clone::clone)
    }

    /// `U_{n-j}` = coefficient of `(z-w)^{-j}` in `E F`, for `j = n, ..., 1`,
    /// returned as `[U_0, ..., U_{n-1}]`.
    pub fn u_currents(&self) -> Result<Vec<VertexField>> {
        let n = self.rd.n as i64;
        let ef = self.ef()?;
        (0..n).map(|i| ef.pole(n - i)).collect()
    }

    /// `:E F:`
    pub fn ef_normal(&self) -> Result<VertexField> {
        self.ef()?.pole(0)
    }

    pub fn v(&self) -> Result<VertexField> {
        primary_vertex(&self.rd)
    }

    pub fn v_star(&self) -> Result<VertexField> {
        dual_primary_vertex(&self.rd)
    }

    /// Field by name: `E`, `F`, `H`, `T`, `W`, `V`, `Vstar`.
    pub fn named(&self, name: &str) -> Result<VertexField> {
        match name {
            "E" => Ok(self.e.clone()),
            "F" => Ok(self.f.clone()),
            "H" => Ok(self.h.clone()),
            "T" => self.t().cloned(),
            "W" => self.w().cloned(),
            "V" => self.v(),
            "Vstar" => self.v_star(),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wick::singular;

    #[test]
    fn lowest_polynomials() {
        assert_eq!(p_poly(1, 0), WickPoly::current(Label::QP));
        let q = WickPoly::current(Label::QP);
        let mut p2 = WickPoly::current(Label::a(1)).mul(&q);
        p2.add_assign(&q.mul(&q));
        p2.add_assign(&q.derivative().scale(&RatK::k_plus(1)));
        assert_eq!(p_poly(2, 0), p2);
        // the shift moves the level
        assert_eq!(p_poly(2, 1), p2.map_coeffs(|c| c.substitute(&RatK::k_plus(1)).unwrap()));
    }

    #[test]
    fn rank_two_is_affine_sl2() {
        let r = Realization::new(2, 0).unwrap();
        let ef = r.ef().unwrap();
        assert_eq!(ef.pole(2).unwrap(), VertexField::constant(RatK::k()));
        assert_eq!(ef.pole(1).unwrap(), r.h.scale_i(2));
        assert!(singular(&r.e, &r.e, &r.rd).unwrap().is_empty());
        assert_eq!(r.u_currents().unwrap().len(), 2);
    }

    #[test]
    fn routes_agree() {
        for m in 0..=3 {
            let a = Realization::with_route(3, m, Route::Recursive).unwrap();
            let b = Realization::with_route(3, m, Route::Factored).unwrap();
            assert_eq!(a.e, b.e);
            assert_eq!(a.f, b.f);
        }
    }

    #[test]
    fn t_perp_commutes_with_h() {
        let r = Realization::new(3, 1).unwrap();
        let tp = r.t_perp().unwrap();
        let s = singular(&r.h, &tp, &r.rd).unwrap();
        assert!(s.is_empty(), "{:?}", s);
    }

    #[test]
    fn named_fields() {
        let r = Realization::new(3, 0).unwrap();
        assert_eq!(r.named("H").unwrap(), r.h);
        assert!(r.named("V").is_ok());
        assert!(r.named("Vstar").is_err());
        assert!(r.named("Q").is_err());
        // no weight-3 current below rank 4
        assert!(r.w().is_err());
    }
}
