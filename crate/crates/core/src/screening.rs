//! Screening operators and the commutation criterion: the residue of
//! `s(z) X(w)` at `z = w` must be a total derivative.

use crate::error::{Error, Result};
use crate::exact::{MatK, RatK};
use crate::lattice::{Label, LabelKind, Momentum, RootData};
use crate::wick::{bracket, kernel, monomials_of_weight, total_derivative_solve, VertexField, WickPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

#[derive(Clone, Debug)]
pub struct Screening {
    pub name: String,
    pub integrand: VertexField,
    pub stats: Statistics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The residue is a total derivative.
    TotalDerivative,
    /// The residue vanishes identically.
    Strict,
}

/// First screenings: `e^{a_i}` for every `A` current (bosonic) and
/// `e^{psi+}`, `e^{psi-}` (fermionic).
pub fn first_screenings(rd: &RootData) -> Vec<Screening> {
    rd.labels()
        .iter()
        .filter_map(|&l| {
            let stats = match l.kind() {
                LabelKind::A(_) => Statistics::Bosonic,
                LabelKind::QPlus | LabelKind::QMinus => Statistics::Fermionic,
                LabelKind::Y => return None,
            };
            Some(Screening { name: format!("exp({})", l.vector_name()), integrand: VertexField::exp(Momentum::basis(l)), stats })
        })
        .collect()
}

/// Second screenings `e^{-a_i/(k+n)}` and, for `0 < m < n`, the dressed
/// `(a Q+ + b Q-) e^{-(psi+ + psi-)/(k+n)}`. The ratio is solved for when
/// `ab` is not given.
pub fn second_screenings(rd: &RootData, e: &VertexField, f: &VertexField, ab: Option<(RatK, RatK)>) -> Result<Vec<Screening>> {
    let inv = rd.kappa().inv()?;
    let mut out: Vec<Screening> = rd
        .labels()
        .iter()
        .filter(|l| matches!(l.kind(), LabelKind::A(_)))
        .map(|&l| Screening {
            name: format!("exp(-{}/(k+{}))", l.vector_name(), rd.n),
            integrand: VertexField::exp(Momentum::basis(l).scale(&-&inv)),
            stats: Statistics::Bosonic,
        })
        .collect();
    if rd.m > 0 && rd.m < rd.n {
        let (a, b) = match ab {
            Some(ab) => ab,
            None => solve_dressed_coefficients(rd, e, f)?,
        };
        out.push(dressed_screening(rd, &a, &b)?);
    }
    Ok(out)
}

fn dressed_momentum(rd: &RootData) -> Result<Momentum> {
    let inv = rd.kappa().inv()?;
    Ok(Momentum::from_terms([(Label::QP, -&inv), (Label::QM, -&inv)]))
}

pub fn dressed_screening(rd: &RootData, a: &RatK, b: &RatK) -> Result<Screening> {
    let p = dressed_momentum(rd)?;
    let mut poly = WickPoly::current(Label::QP).scale(a);
    poly.add_assign(&WickPoly::current(Label::QM).scale(b));
    Ok(Screening { name: format!("({})Q+ + ({})Q-", a, b), integrand: VertexField::new(poly, p), stats: Statistics::Bosonic })
}

/// Residue of `s(z) X(w)` at `z = w`.
pub fn residue(s: &Screening, x: &VertexField, rd: &RootData) -> Result<VertexField> {
    bracket(&s.integrand, x, 1, rd)
}

pub fn commutes(s: &Screening, x: &VertexField, rd: &RootData, mode: Mode) -> Result<bool> {
    let r = residue(s, x, rd)?;
    match mode {
        Mode::Strict => Ok(r.is_zero()),
        Mode::TotalDerivative => Ok(total_derivative_solve(&r, rd)?.is_some()),
    }
}

/// For `X = P e^{q}`, the pole of `s(z) P(w)` whose vanishing is equivalent
/// to a zero residue of `s(z) X(w)`: order `1 + (p_s, q)`.
pub fn strict_pole_order(s: &Screening, x: &VertexField, rd: &RootData) -> Result<i64> {
    let g = rd.pairing(s.integrand.momentum(), x.momentum());
    Ok(1 + g.as_integer().ok_or_else(|| Error::NonLocal(g.to_string()))?)
}

/// The pole of `s(z) P(w)` named by [`strict_pole_order`], with `P` the
/// polynomial part of `X`.
pub fn strict_coefficient(s: &Screening, x: &VertexField, rd: &RootData) -> Result<VertexField> {
    let j = strict_pole_order(s, x, rd)?;
    let p = VertexField::new(x.poly().clone(), Momentum::zero());
    bracket(&s.integrand, &p, j, rd)
}

pub fn pole_name(j: i64) -> String {
    match j {
        0 => "normally ordered product".into(),
        1 => "first-order pole".into(),
        2 => "second-order pole".into(),
        j => format!("pole of order {}", j),
    }
}

/// Images `-d(b e^q)` of the monomials of weight `w - 1`, for each weight
/// `w` occurring in `fields`.
fn derivative_images(rd: &RootData, q: &Momentum, fields: &[VertexField]) -> Vec<VertexField> {
    let mut weights: Vec<u32> = fields.iter().flat_map(|f| f.poly().weights()).collect();
    weights.sort_unstable();
    weights.dedup();
    let mut out = Vec::new();
    for w in weights.into_iter().filter(|w| *w >= 1) {
        for m in monomials_of_weight(rd.labels(), w - 1) {
            out.push(VertexField::new(WickPoly::term(m, RatK::one()), q.clone()).derivative().scale_i(-1));
        }
    }
    out
}

/// Basis of the momentum-zero fields of weight `w` annihilated by every
/// screening charge, i.e. with vanishing residue against each integrand.
/// Total derivatives are not accepted here: `d J` would pass for every
/// current `J` although the charge does not commute with it.
pub fn commutant_at_weight(rd: &RootData, screenings: &[Screening], w: u32) -> Result<Vec<VertexField>> {
    let basis: Vec<VertexField> = monomials_of_weight(rd.labels(), w)
        .into_iter()
        .map(|m| VertexField::new(WickPoly::term(m, RatK::one()), Momentum::zero()))
        .collect();
    if screenings.is_empty() {
        return Ok(basis);
    }
    let images: Vec<Vec<VertexField>> =
        basis.iter().map(|b| screenings.iter().map(|s| residue(s, b, rd)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let ker = kernel(&images, screenings.len())?;
    if ker.is_empty() {
        return Ok(Vec::new());
    }
    let rows = MatK::from_rows(ker).row_basis();
    Ok(rows.iter().map(|r| crate::wick::combine(r, &basis)).collect())
}

/// Solves for the ratio `(a, b)` making the dressed screening commute
/// with `E` and `F`; normalized to `a = 1` when possible. When every pair
/// commutes (the integrand is then free up to the total derivative
/// `d exp(p)` and scale) the pair `(1, 0)` is returned, which satisfies
/// `a != b`; [`dressed_solution_space`] exposes the full space.
pub fn solve_dressed_coefficients(rd: &RootData, e: &VertexField, f: &VertexField) -> Result<(RatK, RatK)> {
    let rows = dressed_solution_space(rd, e, f)?;
    match rows.len() {
        0 => Err(Error::NoSolution("no dressed screening commutes with E and F".into())),
        1 => {
            let (a, b) = (rows[0][0].clone(), rows[0][1].clone());
            if a.is_zero() {
                Ok((RatK::zero(), RatK::one()))
            } else if a == b {
                Err(Error::NoSolution("only a = b commutes, which is a total derivative".into()))
            } else {
                Ok((RatK::one(), b.checked_div(&a)?))
            }
        }
        _ => Ok((RatK::one(), RatK::zero())),
    }
}

/// Basis (reduced echelon form) of the pairs `(a, b)` for which the dressed
/// screening commutes with `E` and `F` in total-derivative mode.
pub fn dressed_solution_space(rd: &RootData, e: &VertexField, f: &VertexField) -> Result<Vec<Vec<RatK>>> {
    if rd.m == 0 || rd.m == rd.n {
        return Err(Error::Undefined("the dressed screening for m = 0 or m = n".into()));
    }
    let p = dressed_momentum(rd)?;
    let plus = Screening { name: "Q+".into(), integrand: VertexField::new(WickPoly::current(Label::QP), p.clone()), stats: Statistics::Bosonic };
    let minus = Screening { name: "Q-".into(), integrand: VertexField::new(WickPoly::current(Label::QM), p.clone()), stats: Statistics::Bosonic };
    let targets = [e, f];
    let rp: Vec<VertexField> = targets.iter().map(|x| residue(&plus, x, rd)).collect::<Result<_>>()?;
    let rm: Vec<VertexField> = targets.iter().map(|x| residue(&minus, x, rd)).collect::<Result<_>>()?;
    let mut images = vec![rp.clone(), rm.clone()];
    for c in 0..targets.len() {
        let q = p.add(targets[c].momentum());
        for d in derivative_images(rd, &q, &[rp[c].clone(), rm[c].clone()]) {
            let mut v = vec![VertexField::zero(); targets.len()];
            v[c] = d;
            images.push(v);
        }
    }
    let ker = kernel(&images, targets.len())?;
    if ker.is_empty() {
        return Ok(Vec::new());
    }
    Ok(MatK::from_rows(ker.iter().map(|v| v[..2].to_vec()).collect()).row_basis())
}

/// Fermionic/bosonic label used in reports.
pub fn describe(s: &Screening) -> String {
    format!("{} ({})", s.name, if s.stats == Statistics::Bosonic { "bosonic" } else { "fermionic" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wgen::Realization;

    #[test]
    fn first_screening_statistics() {
        let rd = RootData::new(4, 2).unwrap();
        let s = first_screenings(&rd);
        assert_eq!(s.len(), 4);
        let fermionic = s.iter().filter(|s| s.stats == Statistics::Fermionic).count();
        assert_eq!(fermionic, 2);
        assert!(describe(&s[0]).ends_with("(bosonic)"));
    }

    #[test]
    fn generators_commute_and_currents_do_not() {
        let r = Realization::new(3, 1).unwrap();
        for s in first_screenings(&r.rd) {
            for x in [&r.e, &r.f, &r.h] {
                assert!(commutes(&s, x, &r.rd, Mode::TotalDerivative).unwrap(), "{}", s.name);
            }
        }
        let a = VertexField::current(Label::a(1));
        let s = &first_screenings(&r.rd)[0];
        assert!(!commutes(s, &a, &r.rd, Mode::TotalDerivative).unwrap());
    }

    #[test]
    fn strict_order_follows_the_pairing() {
        let r = Realization::new(3, 0).unwrap();
        let s = &first_screenings(&r.rd)[0];
        let j = strict_pole_order(s, &r.e, &r.rd).unwrap();
        assert_eq!(j, 1 + r.rd.pairing(s.integrand.momentum(), r.e.momentum()).as_integer().unwrap());
        assert!(strict_coefficient(s, &r.e, &r.rd).unwrap().is_zero());
    }

    #[test]
    fn commutant_of_sl2() {
        // weight 1 in 2[0]: only H survives
        let rd = RootData::new(2, 0).unwrap();
        let basis = commutant_at_weight(&rd, &first_screenings(&rd), 1).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(commutant_at_weight(&rd, &[], 1).unwrap().len(), rd.dim());
    }

    #[test]
    fn dressed_coefficients() {
        let r = Realization::new(3, 1).unwrap();
        let (a, b) = solve_dressed_coefficients(&r.rd, &r.e, &r.f).unwrap();
        assert!(a != b);
        let s = dressed_screening(&r.rd, &a, &b).unwrap();
        for x in [&r.e, &r.f, &r.h] {
            assert!(commutes(&s, x, &r.rd, Mode::TotalDerivative).unwrap());
        }
        let r0 = Realization::new(3, 0).unwrap();
        assert!(dressed_solution_space(&r0.rd, &r0.e, &r0.f).is_err());
        assert_eq!(second_screenings(&r0.rd, &r0.e, &r0.f, None).unwrap().len(), 2);
    }

    #[test]
    fn pole_names() {
        assert_eq!(pole_name(1), "first-order pole");
        assert_eq!(pole_name(4), "pole of order 4");
    }
}

