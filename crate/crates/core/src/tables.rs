//! The operator product tables of the two lowest nontrivial algebras:
//! the Bershadsky-Polyakov algebra (`n = 3`) and `W^(2)_4`.

use crate::error::Result;
use crate::exact::{rat, PolyK, RatK, Solution};
use crate::lattice::{central_charge, ell};
use crate::report::CheckResult;
use crate::suites::{compare_poles, expect_poles, virasoro};
use crate::wgen::{self, Realization};
use crate::wick::{express, normal_product, normal_product_nested, singular, VertexField};

/// Polynomial in `k` from ascending integer coefficients.
pub fn pk(c: &[i64]) -> RatK {
    RatK::from_poly(PolyK::from_coeffs(c.iter().map(|x| rat(*x, 1)).collect()))
}

fn q(p: i64, d: i64) -> RatK {
    RatK::constant(rat(p, d))
}

fn prod(fs: &[RatK]) -> RatK {
    fs.iter().cloned().product()
}

fn sum(fs: &[VertexField]) -> VertexField {
    fs.iter().fold(VertexField::zero(), |a, b| &a + b)
}

/// Bershadsky-Polyakov table for the realization `3[m]`.
pub fn bp_table(m: usize) -> Vec<CheckResult> {
    let tag = format!("bp/3[{}]", m);
    let r = match Realization::new(3, m) {
        Ok(r) => r,
        Err(e) => return vec![CheckResult::fail(tag, "realization", e.to_string())],
    };
    let res = (|| -> Result<Vec<CheckResult>> {
        let rd = &r.rd;
        let (e, f, h) = (&r.e, &r.f, &r.h);
        let t = r.t()?;
        let id = |s: &str| format!("{}/{}", tag, s);
        let hh = normal_product(h, h, rd)?;
        let ef1 = sum(&[hh.scale_i(3), t.scale(&pk(&[-3, -1])), h.derivative().scale(&pk(&[3, 3]).scale(&rat(1, 2)))]);
        let mut out = vec![
            expect_poles(
                &id("EF"),
                "E F = (k+1)(2k+3)/(z-w)^3 + 3(k+1)H/(z-w)^2 + (3HH - (k+3)T + 3/2 (k+1) dH)/(z-w)",
                e,
                f,
                &[(3, VertexField::constant(pk(&[3, 5, 2]))), (2, h.scale(&pk(&[3, 3]))), (1, ef1)],
                rd,
            ),
            expect_poles(&id("HE"), "H E = E/(z-w)", h, e, &[(1, e.clone())], rd),
            expect_poles(&id("HF"), "H F = -F/(z-w)", h, f, &[(1, f.scale_i(-1))], rd),
            expect_poles(&id("TE"), "T E = 3/2 E/(z-w)^2 + dE/(z-w)", t, e, &[(2, e.scale(&q(3, 2))), (1, e.derivative())], rd),
            expect_poles(&id("TF"), "T F = 3/2 F/(z-w)^2 + dF/(z-w)", t, f, &[(2, f.scale(&q(3, 2))), (1, f.derivative())], rd),
            expect_poles(&id("TH"), "T H = H/(z-w)^2 + dH/(z-w)", t, h, &[(2, h.clone()), (1, h.derivative())], rd),
            expect_poles(&id("TT"), "T T = c_3/2/(z-w)^4 + 2T/(z-w)^2 + dT/(z-w)", t, t, &virasoro(t, &central_charge(3)), rd),
            expect_poles(&id("HH"), "H H = (2k+3)/3/(z-w)^2", h, h, &[(2, VertexField::constant(pk(&[3, 2]).scale(&rat(1, 3))))], rd),
        ];
        // c_3 in the form quoted with the table
        let c3 = &(&pk(&[3, 2]) * &pk(&[1, 3])) / &pk(&[3, 1]);
        out.push(CheckResult::scalars(id("c3"), "c_3 = -(2k+3)(3k+1)/(k+3)", &central_charge(3), &-&c3));
        // T fixed inside the commutant, independently of the E F expansion
        let tn = wgen::t_normalized(rd, e, f, h)?;
        out.push(CheckResult::fields(id("T-commutant"), "T from the E F expansion equals the commutant T", t, &tn));
        Ok(out)
    })();
    res.unwrap_or_else(|e| vec![CheckResult::fail(tag, "BP table", e.to_string())])
}

/// Composite fields of `W^(2)_4` in one realization.
pub struct W4 {
    pub r: Realization,
    pub t: VertexField,
    pub tp: VertexField,
    pub w: VertexField,
}

/// Common factors of the `W^(2)_4` table.
struct K4 {
    k2: RatK,
    k3: RatK,
    k4: RatK,
    c8: RatK,
    d1: RatK,
    d2: RatK,
}

impl K4 {
    fn new() -> Self {
        K4 { k2: pk(&[2, 1]), k3: pk(&[3, 1]), k4: pk(&[4, 1]), c8: pk(&[8, 3]), d1: pk(&[102, 93, 20]), d2: pk(&[262, 349, 84]) }
    }
}

impl W4 {
    pub fn new(m: usize) -> Result<Self> {
        let r = Realization::new(4, m)?;
        let t = r.t()?.clone();
        let tp = r.t_perp()?;
        let w = r.w()?.clone();
        Ok(W4 { r, t, tp, w })
    }

    fn np(&self, a: &VertexField, b: &VertexField) -> Result<VertexField> {
        normal_product(a, b, &self.r.rd)
    }

    fn nest(&self, fs: &[&VertexField]) -> Result<VertexField> {
        normal_product_nested(&fs.iter().map(|f| (*f).clone()).collect::<Vec<_>>(), &self.r.rd)
    }

    /// `Lambda` from its closed formula.
    pub fn lambda(&self) -> Result<VertexField> {
        let K4 { k2, k4, c8, d1, .. } = K4::new();
        let (e, f, h, w, tp) = (&self.r.e, &self.r.f, &self.r.h, &self.w, &self.tp);
        let k5 = pk(&[5, 2]);
        let terms = [
            self.np(e, f)?,
            w.derivative().scale(&-&k2.scale(&rat(1, 2))),
            self.np(w, h)?.scale(&-&(&k2.scale(&rat(4, 1)) / &c8)),
            tp.derivative_n(2).scale(&(&prod(&[k2.pow(2)?, k4.clone(), pk(&[46, 33, 6])]).scale(&rat(3, 1)) / &(&c8 * &d1).scale(&rat(2, 1)))),
            self.np(tp, tp)?.scale(&-&(&prod(&[k2.clone(), k4.pow(2)?, pk(&[26, 11])]) / &(&c8 * &d1).scale(&rat(2, 1)))),
            self.np(tp, h)?.derivative().scale(&(&(&k2 * &k4).scale(&rat(2, 1)) / &c8)),
            self.nest(&[tp, h, h])?.scale(&(&(&k2 * &k4).scale(&rat(8, 1)) / &c8.pow(2)?)),
            self.np(&h.derivative_n(2), h)?.scale(&-&(&(&k2 * &k5).scale(&rat(8, 1)) / &c8.scale(&rat(3, 1)))),
            self.np(&h.derivative(), &h.derivative())?.scale(&-&(&(&k2 * &k5).scale(&rat(2, 1)) / &c8)),
            self.nest(&[&h.derivative(), h, h])?.scale(&-&(&(&k2 * &k5).scale(&rat(16, 1)) / &c8.pow(2)?)),
            self.nest(&[h, h, h, h])?.scale(&-&(&(&k2 * &k5).scale(&rat(32, 1)) / &c8.pow(3)?.scale(&rat(3, 1)))),
            h.derivative_n(3).scale(&-&(&k2 * &k5).scale(&rat(1, 6))),
        ];
        Ok(sum(&terms).scale(&k2.pow(-2)?))
    }

    /// Displayed pole 1 of `E F`.
    fn ef_pole1(&self) -> Result<VertexField> {
        let K4 { k2, k4, c8, .. } = K4::new();
        let (h, t, w) = (&self.r.h, &self.t, &self.w);
        let terms = [
            w.clone(),
            t.derivative().scale(&-&k4.scale(&rat(1, 2))),
            self.np(t, h)?.scale(&-&(&k4.scale(&rat(4, 1)) / &c8)),
            self.nest(&[h, h, h])?.scale(&(&pk(&[32, 11]).scale(&rat(8, 1)) / &c8.pow(2)?.scale(&rat(3, 1)))),
            self.np(&h.derivative(), h)?.scale_i(6),
            h.derivative_n(2).scale(&(&pk(&[26, 17, 3]).scale(&rat(4, 1)) / &c8.scale(&rat(3, 1)))),
        ];
        Ok(sum(&terms).scale(&k2))
    }

    /// Displayed singular part of `W X^{+-}`, `sign = +1` for `E`.
    fn w_x(&self, x: &VertexField, sign: i64) -> Result<Vec<(i64, VertexField)>> {
        let K4 { k2, k3, k4, c8, .. } = K4::new();
        let h = &self.r.h;
        let s = RatK::from_i64(sign);
        let k16 = pk(&[16, 5]);
        let c82 = c8.pow(2)?;
        let p3 = x.scale(&(&(&prod(&[k4.clone(), pk(&[7, 3]), k16.clone()]).scale(&rat(2, 1)) / &c82) * &s));
        let p2 = &x.derivative().scale(&(&(&(&k4 * &k16).scale(&rat(3, 1)) / &c8.scale(&rat(2, 1))) * &s))
            + &self.np(h, x)?.scale(&-&(&(&k4 * &k16).scale(&rat(6, 1)) / &c82));
        let inner = sum(&[
            self.np(h, &x.derivative())?.scale(&(&k3.scale(&rat(8, 1)) / &c8)),
            self.np(&h.derivative(), x)?.scale(&(&pk(&[16, 15, 3]).scale(&rat(4, 1)) / &c82)),
            x.derivative_n(2).scale(&-&(&k3 * &s)),
            self.np(&self.t, x)?.scale(&(&(&k4.scale(&rat(2, 1)) / &c8) * &s)),
            self.nest(&[h, h, x])?.scale(&-&(&(&k16.scale(&rat(4, 1)) / &c82) * &s)),
        ]);
        let p1 = inner.scale(&-&(&k4 / &k2));
        Ok(vec![(3, p3), (2, p2), (1, p1)])
    }

    /// Displayed singular part of `W W`, with `Lambda` supplied.
    fn w_w(&self, lam: &VertexField) -> Result<Vec<(i64, VertexField)>> {
        let K4 { k4, c8, d1, .. } = K4::new();
        let tp = &self.tp;
        let k16 = pk(&[16, 5]);
        let a = &(&k4.pow(2)? * &k16) / &c8;
        let b = pk(&[74, 59, 12]);
        let c = &(&k4.pow(3)? * &k16).scale(&rat(8, 1)) / &(&c8 * &d1);
        let p6 = VertexField::constant(&prod(&[k4.clone(), pk(&[5, 2]), pk(&[7, 3]), k16.clone()]).scale(&rat(2, 1)) / &c8);
        let p4 = tp.scale(&a.scale(&rat(-3, 1)));
        let p3 = tp.derivative().scale(&a.scale(&rat(-3, 2)));
        let p2 = sum(&[
            tp.derivative_n(2).scale(&-&(&(&a * &b).scale(&rat(3, 4)) / &d1)),
            self.np(tp, tp)?.scale(&c),
            lam.scale(&k4.scale(&rat(4, 1))),
        ]);
        let p1 = sum(&[
            tp.derivative_n(3).scale(&-&(&(&a * &b).scale(&rat(1, 6)) / &d1)),
            self.np(&tp.derivative(), tp)?.scale(&c),
            lam.derivative().scale(&k4.scale(&rat(2, 1))),
        ]);
        Ok(vec![(6, p6), (4, p4), (3, p3), (2, p2), (1, p1)])
    }

    /// `Z` read off from pole 2 of `W Lambda`.
    pub fn z_from(&self, wl2: &VertexField) -> Result<VertexField> {
        let K4 { k2, k4, c8, d1, d2, .. } = K4::new();
        let w = &self.w;
        let f3 = prod(&[pk(&[5, 3]), pk(&[10, 3]), pk(&[11, 4])]);
        let den = prod(&[k2.clone(), c8.clone(), d1.clone(), d2.clone()]);
        let wt = self.np(w, &self.tp)?.scale(&(&(&k4 * &f3).scale(&rat(312, 1)) / &den));
        let ddw = w.derivative_n(2).scale(&-&(&(&f3 * &pk(&[62, 29, 4])).scale(&rat(18, 1)) / &den));
        let rest = &wl2.scale(&k4.inv()?) - &(&wt + &ddw);
        Ok(rest.scale(&k4.inv()?))
    }

    /// Displayed singular part of `W Lambda` given `Z`.
    fn w_lambda(&self, z: &VertexField) -> Result<Vec<(i64, VertexField)>> {
        let K4 { k2, k4, c8, d1, d2, .. } = K4::new();
        let w = &self.w;
        let tp = &self.tp;
        let f3 = prod(&[pk(&[5, 3]), pk(&[10, 3]), pk(&[11, 4])]);
        let p4 = w.scale(&-&(&(&k4 * &f3).scale(&rat(12, 1)) / &prod(&[k2.clone(), c8.clone(), d1.clone()])));
        let p3 = w.derivative().scale(&-&(&(&k4 * &pk(&[550, 695, 279, 36])).scale(&rat(4, 1)) / &prod(&[k2.clone(), c8.clone(), d1.clone()])));
        let den2 = prod(&[k2.clone(), c8.clone(), d1.clone(), d2.clone()]);
        let p2 = sum(&[
            z.scale(&k4),
            self.np(w, tp)?.scale(&(&(&k4 * &f3).scale(&rat(312, 1)) / &den2)),
            w.derivative_n(2).scale(&-&(&(&f3 * &pk(&[62, 29, 4])).scale(&rat(18, 1)) / &den2)),
        ])
        .scale(&k4);
        let g2 = &pk(&[5, 3]) * &pk(&[10, 3]);
        let k22 = k2.pow(2)?;
        let p1 = sum(&[
            z.derivative().scale(&k4.scale(&rat(2, 5))),
            self.np(w, &tp.derivative())?.scale(&(&(&k4 * &g2).scale(&rat(30, 1)) / &prod(&[k22.clone(), c8.clone(), d2.clone()]))),
            w.derivative_n(3).scale(&-&(&(&g2 * &pk(&[18384, 22746, 9647, 1652, 96])) / &prod(&[k22.clone(), c8.clone(), d1.clone(), d2.clone()]).scale(&rat(2, 1)))),
            self.np(&w.derivative(), tp)?.scale(&(&prod(&[k4.clone(), g2.clone(), pk(&[634, 523, 108])]).scale(&rat(4, 1)) / &prod(&[k22, c8, d1, d2]))),
        ])
        .scale(&k4);
        Ok(vec![(4, p4), (3, p3), (2, p2), (1, p1)])
    }

    fn z_primary(&self, id: &str, anchor: &str, z: &VertexField) -> Result<CheckResult> {
        let tz = singular(&self.t, z, &self.r.rd)?;
        Ok(compare_poles(id, anchor, &tz, &[(2, z.scale_i(5)), (1, z.derivative())]))
    }

    /// Compares the coefficients of `X+ dX-`, `dX+ X-`, `H X+ X-` in
    /// `(k+2)^3 Z` with `5/2, -5/2, 2/(3k+8)`.
    fn z_leading(&self, id: &str, anchor: &str, z: &VertexField, basis: &[VertexField]) -> Result<CheckResult> {
        let K4 { k2, c8, .. } = K4::new();
        let lead = [q(5, 2), q(-5, 2), &RatK::from_i64(2) / &c8];
        Ok(match express(&z.scale(&k2.pow(3)?), basis)? {
            Solution::Unique(x) => CheckResult::from_bool(id, anchor, x[..3] == lead[..], || {
                format!("leading coefficients {}, {}, {}", x[0], x[1], x[2])
            }),
            Solution::NoSolution => CheckResult::fail(id, anchor, "Z is outside the weight-5 composites"),
            Solution::Underdetermined { .. } => CheckResult::fail(id, anchor, "weight-5 composites are linearly dependent"),
        })
    }

    /// Weight-5, charge-0 composites used to read off the leading terms of
    /// `Z`. The first three are `X+ dX-`, `dX+ X-`, `H X+ X-`.
    /// `Z` extracted from pole 2 of `W Lambda` as displayed.
    pub fn z(&self) -> Result<VertexField> {
        let lam = self.lambda()?;
        let wl = singular(&self.w, &lam, &self.r.rd)?;
        self.z_from(&wl.get(&2).cloned().unwrap_or_else(VertexField::zero))
    }

    pub fn weight5_basis(&self) -> Result<Vec<VertexField>> {
        let (e, f, h, t, w) = (&self.r.e, &self.r.f, &self.r.h, &self.t, &self.w);
        let dh = h.derivative();
        let dt = t.derivative();
        Ok(vec![
            self.np(e, &f.derivative())?,
            self.np(&e.derivative(), f)?,
            self.nest(&[h, e, f])?,
            w.derivative_n(2),
            self.np(&w.derivative(), h)?,
            self.np(w, &dh)?,
            self.nest(&[w, h, h])?,
            self.np(w, t)?,
            t.derivative_n(3),
            self.np(&t.derivative_n(2), h)?,
            self.np(&dt, &dh)?,
            self.nest(&[&dt, h, h])?,
            self.np(t, &h.derivative_n(2))?,
            self.nest(&[t, &dh, h])?,
            self.nest(&[t, h, h, h])?,
            self.np(&dt, t)?,
            self.nest(&[t, t, h])?,
            h.derivative_n(4),
            self.np(&h.derivative_n(3), h)?,
            self.np(&h.derivative_n(2), &dh)?,
            self.nest(&[&h.derivative_n(2), h, h])?,
            self.nest(&[&dh, &dh, h])?,
            self.nest(&[&dh, h, h, h])?,
            self.nest(&[h, h, h, h, h])?,
        ])
    }
}

/// The `W^(2)_4` table in the realization `4[m]`.
pub fn w4_table(m: usize) -> Vec<CheckResult> {
    let tag = format!("w4/4[{}]", m);
    let res = (|| -> Result<Vec<CheckResult>> {
        let w4 = W4::new(m)?;
        let rd = &w4.r.rd;
        let (e, f, h) = (&w4.r.e, &w4.r.f, &w4.r.h);
        let id = |s: &str| format!("{}/{}", tag, s);
        let K4 { k2, k4, c8, .. } = K4::new();
        let mut out = Vec::new();

        out.push(CheckResult::scalars(id("T-perp"), "1/(2 l_4) = 2/(3k+8)", &ell(4).scale(&rat(2, 1)).inv()?, &(&RatK::from_i64(2) / &c8)));
        let hh = w4.np(h, h)?;
        let ef = vec![
            (4, VertexField::constant(prod(&[k2.clone(), pk(&[5, 2]), c8.clone()]))),
            (3, h.scale(&(&k2 * &pk(&[5, 2])).scale(&rat(4, 1)))),
            (2, sum(&[w4.t.scale(&-&k4), hh.scale_i(6), h.derivative().scale(&pk(&[10, 4]))]).scale(&k2)),
            (1, w4.ef_pole1()?),
        ];
        out.push(expect_poles(&id("EF"), "E F, four poles", e, f, &ef, rd));
        out.push(expect_poles(&id("WE"), "W X+, three poles", &w4.w, e, &w4.w_x(e, 1)?, rd));
        out.push(expect_poles(&id("WF"), "W X-, three poles", &w4.w, f, &w4.w_x(f, -1)?, rd));

        let lam = w4.lambda()?;
        let tl = singular(&w4.t, &lam, rd)?;
        out.push(compare_poles(&id("T-Lambda"), "Lambda is a weight-4 primary", &tl, &[(2, lam.scale_i(4)), (1, lam.derivative())]));
        out.push(expect_poles(&id("H-Lambda"), "Lambda has regular OPE with H", h, &lam, &[], rd));
        out.push(expect_poles(&id("WW"), "W W, poles 6 to 1 with 4(k+4) Lambda", &w4.w, &w4.w, &w4.w_w(&lam)?, rd));

        let wl = singular(&w4.w, &lam, rd)?;
        let wl2 = wl.get(&2).cloned().unwrap_or_else(VertexField::zero);
        let z = w4.z_from(&wl2)?;
        out.push(compare_poles(&id("W-Lambda"), "W Lambda, poles 4 to 1", &wl, &w4.w_lambda(&z)?));
        out.push(w4.z_primary(&id("T-Z"), "Z is a weight-5 primary", &z)?);
        let basis = w4.weight5_basis()?;
        out.push(w4.z_leading(&id("Z-leading"), "(k+2)^3 Z = 5/2 X+ dX- - 5/2 dX+ X- + 2/(3k+8) H X+ X- + ...", &z, &basis)?);

        // the same expansion with every coefficient negated
        let zn = w4.z_from(&wl2.scale_i(-1))?;
        let negated: Vec<(i64, VertexField)> = w4.w_lambda(&zn)?.into_iter().map(|(j, f)| (j, f.scale_i(-1))).collect();
        out.push(compare_poles(&id("W-Lambda-negated"), "W Lambda equals the negated expansion", &wl, &negated));
        out.push(w4.z_primary(&id("T-Z-negated"), "Z from the negated expansion is a weight-5 primary", &zn)?);
        out.push(w4.z_leading(&id("Z-leading-negated"), "leading terms of Z from the negated expansion", &zn, &basis)?);
        Ok(out)
    })();
    res.unwrap_or_else(|e| vec![CheckResult::fail(tag, "W4 table", e.to_string())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn coefficient_polynomials() {
        assert_eq!(pk(&[3, 1]), RatK::k_plus(3));
        assert_eq!(pk(&[0, 0, 1]), &RatK::k() * &RatK::k());
        assert_eq!(pk(&[]), RatK::zero());
    }

    #[test]
    fn bershadsky_polyakov() {
        for m in [0, 3] {
            let cs = bp_table(m);
            assert!(cs.len() >= 10);
            assert!(cs.iter().all(|c| c.status == Status::Pass), "{:?}", cs.iter().map(|c| &c.witness).collect::<Vec<_>>());
        }
    }

    #[test]
    fn bad_realization() {
        let cs = bp_table(7);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].status, Status::Fail);
    }
}
