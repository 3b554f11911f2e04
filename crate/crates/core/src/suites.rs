//! Verification suites. Each function returns one [`CheckResult`] per
//! statement so that the CLI and the tests can share them.

use rayon::prelude::*;

use crate::error::Result;
use crate::exact::{rat, BigRat, RatK};
use crate::lattice::{
    central_charge, dual_level, ell, excluded_levels, gram_det_expected, gram_inverse_explicit, lambda, minimal_model_charge,
    primary_weight, rank_level_point, weight_lambda1, xi_projection_explicit, Label, RootData,
};
use crate::report::{CheckResult, Status};
use crate::screening::{self, Mode};
use crate::wgen::{self, Realization, Route};
use crate::wick::{express, singular, LaurentOpe, VertexField};

/// Compares every pole of `f(z) g(w)` with `expected` (pole order, field);
/// poles missing from `expected` must vanish.
pub fn expect_poles(id: &str, anchor: &str, f: &VertexField, g: &VertexField, expected: &[(i64, VertexField)], rd: &RootData) -> CheckResult {
    CheckResult::from_result(id, anchor, singular(f, g, rd).map(|got| compare_poles(id, anchor, &got, expected)))
}

pub fn compare_poles(
    id: &str,
    anchor: &str,
    got: &std::collections::BTreeMap<i64, VertexField>,
    expected: &[(i64, VertexField)],
) -> CheckResult {
    let mut orders: Vec<i64> = got.keys().copied().chain(expected.iter().map(|(j, _)| *j)).collect();
    orders.sort_unstable();
    orders.dedup();
    for j in orders.into_iter().rev() {
        let lhs = got.get(&j).cloned().unwrap_or_else(VertexField::zero);
        let rhs = expected.iter().find(|(o, _)| *o == j).map(|(_, f)| f.clone()).unwrap_or_else(VertexField::zero);
        let c = CheckResult::fields(id, anchor, &lhs, &rhs);
        if c.status == Status::Fail {
            return CheckResult::fail(id, anchor, format!("{}: {}", screening::pole_name(j), c.witness.unwrap_or_default()));
        }
    }
    CheckResult::pass(id, anchor)
}

fn konst(c: RatK) -> VertexField {
    VertexField::constant(c)
}

fn tag(r: &Realization) -> String {
    format!("{}[{}]", r.n(), r.m())
}

/// OPE structure of one realization: leading poles of `E F`, the `H`
/// and `T` OPEs, and the weight-3 current for `n >= 4`.
pub fn structure(r: &Realization) -> Vec<CheckResult> {
    let rd = &r.rd;
    let n = rd.n as i64;
    let t = tag(r);
    let mut out = Vec::new();
    let id = |s: &str| format!("structure/{}/{}", t, s);

    match r.ef() {
        Ok(ef) => {
            out.push(CheckResult::from_result(
                id("EF-central"),
                "E F central term lambda_{n-1}",
                ef.pole(n).map(|p| CheckResult::fields(id("EF-central"), "E F central term lambda_{n-1}", &p, &konst(lambda(n - 1, rd.n)))),
            ));
            out.push(CheckResult::from_result(
                id("EF-H"),
                "E F pole n-1 = n lambda_{n-2} H",
                ef.pole(n - 1).map(|p| {
                    CheckResult::fields(id("EF-H"), "E F pole n-1 = n lambda_{n-2} H", &p, &r.h.scale(&lambda(n - 2, rd.n).scale(&rat(n, 1))))
                }),
            ));
            if n >= 3 {
                out.push(CheckResult::from_result(id("EF-T"), "E F pole n-2 through H H, dH and T", ef_pole_n2(r, ef)));
            }
            let hi = (n + 1..=n + 4).map(|j| ef.pole(j).map(|p| p.is_zero())).collect::<Result<Vec<_>>>();
            out.push(CheckResult::from_result(
                id("EF-order"),
                "E F has no pole above order n",
                hi.map(|v| CheckResult::from_bool(id("EF-order"), "E F has no pole above order n", v.iter().all(|b| *b), || "higher pole".into())),
            ));
        }
        Err(e) => out.push(CheckResult::fail(id("EF"), "E F expansion", e.to_string())),
    }

    let h = &r.h;
    out.push(expect_poles(&id("HH"), "H H = l_n/(z-w)^2", h, h, &[(2, konst(ell(rd.n)))], rd));
    out.push(expect_poles(&id("HE"), "H E = E/(z-w)", h, &r.e, &[(1, r.e.clone())], rd));
    out.push(expect_poles(&id("HF"), "H F = -F/(z-w)", h, &r.f, &[(1, r.f.scale_i(-1))], rd));

    match r.t() {
        Ok(tf) => {
            let half_n = RatK::constant(rat(n, 2));
            out.push(expect_poles(&id("TT"), "T T with central charge c_n", tf, tf, &virasoro(tf, &central_charge(rd.n)), rd));
            out.push(expect_poles(&id("TH"), "H is a weight-1 primary", tf, h, &[(2, h.clone()), (1, h.derivative())], rd));
            out.push(expect_poles(&id("TE"), "E is a weight-n/2 primary", tf, &r.e, &[(2, r.e.scale(&half_n)), (1, r.e.derivative())], rd));
            out.push(expect_poles(&id("TF"), "F is a weight-n/2 primary", tf, &r.f, &[(2, r.f.scale(&half_n)), (1, r.f.derivative())], rd));
            if rd.m == 0 {
                out.push(CheckResult::from_result(
                    id("T-gram"),
                    "inverse-Gram form of T equals the extracted T",
                    wgen::t_gamma_formula(rd).map(|g| CheckResult::fields(id("T-gram"), "inverse-Gram form of T equals the extracted T", &g, tf)),
                ));
            }
        }
        Err(e) => out.push(CheckResult::fail(id("T"), "energy-momentum tensor", e.to_string())),
    }

    if n >= 4 {
        match (r.w(), r.t()) {
            (Ok(w), Ok(tf)) => {
                out.push(expect_poles(&id("TW"), "W is a weight-3 primary", tf, w, &[(2, w.scale_i(3)), (1, w.derivative())], rd));
                out.push(expect_poles(&id("HW"), "W has regular OPE with H", h, w, &[], rd));
            }
            (Err(e), _) | (_, Err(e)) => out.push(CheckResult::fail(id("W"), "weight-3 current", e.to_string())),
        }
    } else {
        out.push(CheckResult::with_status(id("W"), "pole n-3 carries no weight-3 current", Status::Skipped, None));
    }
    out
}

/// Expected singular part of `T T`.
pub fn virasoro(t: &VertexField, c: &RatK) -> Vec<(i64, VertexField)> {
    vec![(4, konst(c.scale(&rat(1, 2)))), (2, t.scale_i(2)), (1, t.derivative())]
}

fn ef_pole_n2(r: &Realization, ef: &LaurentOpe) -> Result<CheckResult> {
    let rd = &r.rd;
    let n = rd.n as i64;
    let h = &r.h;
    let t = r.t()?;
    let hh = crate::wick::normal_product(h, h, rd)?;
    let c_dh = (&RatK::k_plus(n - 1).scale(&rat(n - 2, 1)) - &RatK::one()).scale(&rat(n, 2));
    let inner = &(&hh.scale(&RatK::constant(rat(n * (n - 1), 2))) + &h.derivative().scale(&c_dh)) - &t.scale(&rd.kappa());
    let rhs = inner.scale(&lambda(n - 3, rd.n));
    Ok(CheckResult::fields(format!("structure/{}/EF-T", tag(r)), "E F pole n-2 through H H, dH and T", &ef.pole(n - 2)?, &rhs))
}

/// First screenings against `E, H, F, T` in total-derivative mode and
/// the individual vanishing poles in strict mode.
pub fn first_screenings(r: &Realization) -> Vec<CheckResult> {
    let rd = &r.rd;
    let t = tag(r);
    let scr = screening::first_screenings(rd);
    let tf = r.t().cloned();
    let mut jobs: Vec<(String, screening::Screening, VertexField)> = Vec::new();
    let mut out = Vec::new();
    for s in &scr {
        for (name, f) in [("E", Ok(r.e.clone())), ("H", Ok(r.h.clone())), ("F", Ok(r.f.clone())), ("T", tf.clone())] {
            match f {
                Ok(f) => jobs.push((name.to_string(), s.clone(), f)),
                Err(e) => out.push(CheckResult::fail(format!("screening/{}/{}/{}", t, s.name, name), "generator", e.to_string())),
            }
        }
    }
    let done: Vec<CheckResult> = jobs.par_iter().flat_map_iter(|(name, s, f)| {
        let id = format!("screening/{}/{}/{}", t, s.name, name);
        let td = CheckResult::from_result(
            format!("{}/total-derivative", id),
            "residue is a total derivative",
            screening::commutes(s, f, rd, Mode::TotalDerivative).map(|ok| {
                CheckResult::from_bool(format!("{}/total-derivative", id), "residue is a total derivative", ok, || {
                    screening::residue(s, f, rd).map(|x| format!("{:?}", x)).unwrap_or_default()
                })
            }),
        );
        let strict = strict_check(&id, s, f, rd);
        [td, strict]
    }).collect();
    out.extend(done);
    out
}

fn strict_check(id: &str, s: &screening::Screening, f: &VertexField, rd: &RootData) -> CheckResult {
    let sid = format!("{}/strict", id);
    let r = (|| {
        let j = screening::strict_pole_order(s, f, rd)?;
        let c = screening::strict_coefficient(s, f, rd)?;
        let anchor = format!("{} vanishes", screening::pole_name(j));
        Ok(CheckResult::from_bool(sid.clone(), anchor, c.is_zero(), || format!("{:?}", c)))
    })();
    CheckResult::from_result(sid.clone(), "strict pole vanishing", r)
}

/// Second screenings against `E, H, F`, with the dressed coefficients solved.
pub fn second_screenings(r: &Realization) -> Vec<CheckResult> {
    let rd = &r.rd;
    let t = tag(r);
    let scr = match screening::second_screenings(rd, &r.e, &r.f, None) {
        Ok(s) => s,
        Err(e) => return vec![CheckResult::fail(format!("second/{}", t), "second screenings", e.to_string())],
    };
    let jobs: Vec<(&screening::Screening, &str, &VertexField)> =
        scr.iter().flat_map(|s| [("E", &r.e), ("H", &r.h), ("F", &r.f)].into_iter().map(move |(n, f)| (s, n, f))).collect();
    jobs.par_iter()
        .map(|(s, name, f)| {
            let id = format!("second/{}/{}/{}", t, s.name, name);
            CheckResult::from_result(
                id.clone(),
                "second screening commutes",
                screening::commutes(s, f, rd, Mode::TotalDerivative).map(|ok| {
                    CheckResult::from_bool(id.clone(), "second screening commutes", ok, || {
                        screening::residue(s, f, rd).map(|x| format!("{:?}", x)).unwrap_or_default()
                    })
                }),
            )
        })
        .collect()
}

/// Dimensions of the screening commutant at weights 1 and 2, and the
/// membership of `H` and `T` in it.
pub fn commutant_dimensions(r: &Realization) -> Vec<CheckResult> {
    let rd = &r.rd;
    let t = tag(r);
    let scr = screening::first_screenings(rd);
    let mut out = Vec::new();
    for (w, want) in [(1u32, 1usize), (2, 3)] {
        let id = format!("commutant/{}/weight-{}", t, w);
        let res = screening::commutant_at_weight(rd, &scr, w).and_then(|basis| {
            let mut c = CheckResult::from_bool(id.clone(), format!("dimension {}", want), basis.len() == want, || {
                format!("dimension {}", basis.len())
            });
            if c.status == Status::Pass {
                let members: Vec<VertexField> = if w == 1 {
                    vec![r.h.clone()]
                } else {
                    let h = &r.h;
                    vec![crate::wick::normal_product(h, h, rd)?, h.derivative(), r.t()?.clone()]
                };
                for m in &members {
                    if !matches!(express(m, &basis)?, crate::exact::Solution::Unique(_)) {
                        c = CheckResult::fail(id.clone(), "spanned by the generators", format!("{:?} not in the span", m));
                    }
                }
            }
            Ok(c)
        });
        out.push(CheckResult::from_result(id, "commutant dimension", res));
    }
    out
}

/// Primary vertices `V` and `V*`.
pub fn primary_vertices(r: &Realization) -> Vec<CheckResult> {
    let rd = &r.rd;
    let n = rd.n as i64;
    let t = tag(r);
    let mut out = Vec::new();
    let id = |s: &str| format!("primary/{}/{}", t, s);
    if rd.m < rd.n {
        match r.v() {
            Ok(v) => {
                out.push(expect_poles(&id("EV"), "E V = 0", &r.e, &v, &[], rd));
                out.push(single_pole(&id("FV"), "F V has only a first-order pole", &r.f, &v, rd));
                out.push(expect_poles(&id("HV"), "H_0 V = V/n", &r.h, &v, &[(1, v.scale(&RatK::constant(rat(1, n))))], rd));
                match r.t() {
                    Ok(tf) => out.push(CheckResult::from_result(id("TV"), "L_0 V = Delta_n V", bracket_eq(tf, &v, 2, &v.scale(&primary_weight(rd.n)), rd, &id("TV")))),
                    Err(e) => out.push(CheckResult::fail(id("TV"), "L_0 eigenvalue", e.to_string())),
                }
                let vm = v.momentum().clone();
                let want = &RatK::from_i64(n - 1) / &(&RatK::k_plus(n) * &RatK::from_i64(n));
                out.push(CheckResult::scalars(id("vv"), "(v, v) = (n-1)/(n(k+n))", &rd.pairing(&vm, &vm), &want));
            }
            Err(e) => out.push(CheckResult::fail(id("V"), "primary vertex", e.to_string())),
        }
    }
    if rd.m > 0 {
        match r.v_star() {
            Ok(v) => {
                out.push(expect_poles(&id("FV*"), "F V* = 0", &r.f, &v, &[], rd));
                out.push(single_pole(&id("EV*"), "E V* has only a first-order pole", &r.e, &v, rd));
                out.push(expect_poles(&id("HV*"), "H_0 V* = -V*/n", &r.h, &v, &[(1, v.scale(&RatK::constant(rat(-1, n))))], rd));
                if let Ok(tf) = r.t() {
                    out.push(CheckResult::from_result(id("TV*"), "L_0 V* = Delta_n V*", bracket_eq(tf, &v, 2, &v.scale(&primary_weight(rd.n)), rd, &id("TV*"))));
                }
                let vm = v.momentum().clone();
                let want = &RatK::from_i64(n - 1) / &(&RatK::k_plus(n) * &RatK::from_i64(n));
                out.push(CheckResult::scalars(id("v*v*"), "(v*, v*) = (n-1)/(n(k+n))", &rd.pairing(&vm, &vm), &want));
            }
            Err(e) => out.push(CheckResult::fail(id("V*"), "dual primary vertex", e.to_string())),
        }
    }
    out
}

fn single_pole(id: &str, anchor: &str, f: &VertexField, g: &VertexField, rd: &RootData) -> CheckResult {
    CheckResult::from_result(
        id,
        anchor,
        singular(f, g, rd).map(|s| {
            let ok = s.keys().all(|j| *j == 1) && s.contains_key(&1);
            CheckResult::from_bool(id, anchor, ok, || format!("pole orders {:?}", s.keys().collect::<Vec<_>>()))
        }),
    )
}

fn bracket_eq(f: &VertexField, g: &VertexField, j: i64, want: &VertexField, rd: &RootData, id: &str) -> Result<CheckResult> {
    let got = crate::wick::bracket(f, g, j, rd)?;
    let mut c = CheckResult::fields(id, "eigenvalue", &got, want);
    if c.status == Status::Pass {
        // a primary has no higher poles against T
        for jj in j + 1..j + 3 {
            if !crate::wick::bracket(f, g, jj, rd)?.is_zero() {
                c = CheckResult::fail(id, "eigenvalue", format!("nonzero {}", screening::pole_name(jj)));
            }
        }
    }
    Ok(c)
}

/// The optional footnote identification `F V = :F_{(n-1)[m]}^{(k+1)} V:/(z-w)`;
/// failures are reported as warnings.
pub fn footnote_check(r: &Realization) -> CheckResult {
    let id = format!("primary/{}/footnote", tag(r));
    let rd = &r.rd;
    if rd.m >= rd.n.saturating_sub(1) || rd.n < 3 {
        return CheckResult::with_status(id, "F V residue", Status::Skipped, None);
    }
    let res = (|| {
        let v = r.v()?;
        let lhs = crate::wick::bracket(&r.f, &v, 1, rd)?;
        let sub = RootData::new(rd.n - 1, rd.m)?;
        let f_prev = wgen::f_field(&sub, Route::Recursive)?.map_coeffs(|c| c.substitute(&RatK::k_plus(1)).expect("polynomial shift"));
        let rhs = crate::wick::normal_product(&f_prev, &v, rd)?;
        let c = CheckResult::fields(id.clone(), "F V residue is :F' V:", &lhs, &rhs);
        Ok(if c.status == Status::Fail { CheckResult::with_status(id.clone(), "F V residue is :F' V:", Status::Warning, c.witness) } else { c })
    })();
    CheckResult::from_result(id, "F V residue", res)
}

/// Factored route against the recursive one, generator by generator.
pub fn factored_vs_recursive(n: usize, m: usize) -> Vec<CheckResult> {
    let id = format!("factored/{}[{}]", n, m);
    let res = (|| {
        let rd = RootData::new(n, m)?;
        let mut out = Vec::new();
        for (name, a, b) in [
            ("E", wgen::e_field(&rd, Route::Recursive)?, wgen::e_field(&rd, Route::Factored)?),
            ("F", wgen::f_field(&rd, Route::Recursive)?, wgen::f_field(&rd, Route::Factored)?),
        ] {
            out.push(CheckResult::fields(format!("{}/{}", id, name), "factored form equals the recursion", &a, &b));
        }
        Ok(out)
    })();
    res.unwrap_or_else(|e: crate::Error| vec![CheckResult::fail(id, "factored form", e.to_string())])
}

/// Numerical identities: H recursion, level duality, dimension sums,
/// rank-level duality and the Gram data.
pub fn identities(n_max: usize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 3..=n_max.max(3) {
        out.push(h_recursion(n));
    }
    for n in 2..=n_max.max(6) {
        out.extend(duality(n));
    }
    for n in 2..=4usize {
        for m in 2..=6i64 {
            let k = rank_level_point(n, m);
            let c = central_charge(n).eval(&k);
            let id = format!("identity/rank-level/{}/{}", n, m);
            let want = minimal_model_charge(m + 1, m + n as i64, m);
            out.push(match c {
                Ok(c) => CheckResult::from_bool(id, "c_n(k) - 1 = c_{m+1,m+n}(m)", &c - BigRat::from_integer(1.into()) == want, || {
                    format!("{} - 1 != {}", c, want)
                }),
                Err(e) => CheckResult::fail(id, "c_n(k) - 1 = c_{m+1,m+n}(m)", e.to_string()),
            });
        }
    }
    for n in 2..=n_max.max(5) {
        out.extend(gram(n));
    }
    out
}

/// `n H_{n[0]}^{(k)} - (n-1) H_{(n-1)[0]}^{(k+1)} = (k+n-1) Y + sum A_i + Q`.
pub fn h_recursion(n: usize) -> CheckResult {
    let id = format!("identity/H-recursion/{}", n);
    let res = (|| {
        let h = wgen::h_field(&RootData::new(n, 0)?);
        let prev = wgen::h_field(&RootData::new(n - 1, 0)?).map_coeffs(|c| c.substitute(&RatK::k_plus(1)).expect("polynomial shift"));
        let lhs = &h.scale_i(n as i64) - &prev.scale_i(n as i64 - 1);
        let mut rhs = VertexField::current(Label::Y).scale(&RatK::k_plus(n as i64 - 1));
        rhs = &rhs + &VertexField::current(Label::QP);
        for i in 1..n as i32 {
            rhs = &rhs + &VertexField::current(Label::a(i));
        }
        Ok(CheckResult::fields(id.clone(), "n H_n - (n-1) H_{n-1}(k+1) = (k+n-1) Y + sum A_i + Q", &lhs, &rhs))
    })();
    CheckResult::from_result(id, "H recursion", res)
}

/// Level duality `k -> k'` and the dimension and length sums.
pub fn duality(n: usize) -> Vec<CheckResult> {
    let id = |s: &str| format!("identity/duality/{}/{}", n, s);
    let nn = n as i64;
    let res = (|| {
        let k = RatK::k();
        let kp = dual_level(n, &k)?;
        let mult = &RatK::k_plus(nn - 1) * &(&kp + &RatK::from_i64(nn - 1));
        let add = &RatK::k_plus(nn).inv()? + &(&kp + &RatK::from_i64(nn)).inv()?;
        let back = dual_level(n, &kp)?;
        // solving the additive form for k' independently
        let from_add = &(&RatK::one() - &RatK::k_plus(nn).inv()?).inv()? - &RatK::from_i64(nn);
        let delta_n = primary_weight(n);
        let ds = &weight_lambda1(n, &kp)? + &delta_n;
        let len = &(&RatK::from_i64(nn - 1) / &(&RatK::k_plus(nn) * &RatK::from_i64(nn)))
            + &(&RatK::from_i64(nn - 1) / &(&(&kp + &RatK::from_i64(nn)) * &RatK::from_i64(nn)));
        Ok(vec![
            CheckResult::scalars(id("mult"), "(k+n-1)(k'+n-1) = 1", &mult, &RatK::one()),
            CheckResult::scalars(id("add"), "1/(k+n) + 1/(k'+n) = 1", &add, &RatK::one()),
            CheckResult::scalars(id("equivalent"), "the additive form gives the same k'", &from_add, &kp),
            CheckResult::scalars(id("involution"), "k'' = k", &back, &k),
            CheckResult::scalars(id("delta-sum"), "Delta_[l1,k'] + Delta_n(k) = 1 - 1/(2n)", &ds, &RatK::constant(rat(2 * nn - 1, 2 * nn))),
            CheckResult::scalars(id("length-sum"), "momentum lengths sum to 1 - 1/n", &len, &RatK::constant(rat(nn - 1, nn))),
        ])
    })();
    res.unwrap_or_else(|e: crate::Error| vec![CheckResult::fail(id("all"), "duality", e.to_string())])
}

/// Gram determinant, explicit inverse, `xi` projection and exclusions.
pub fn gram(n: usize) -> Vec<CheckResult> {
    let id = |s: &str| format!("identity/gram/{}/{}", n, s);
    let res = (|| {
        let mut out = Vec::new();
        let rd0 = RootData::new(n, 0)?;
        let det = rd0.gram().det()?;
        out.push(CheckResult::scalars(id("det"), "det Gamma = -n (k+n)^{n-1}", &det, &gram_det_expected(n)));
        let inv = rd0.gram_inverse()?;
        let explicit = gram_inverse_explicit(n);
        out.push(CheckResult::from_bool(id("inverse"), "explicit inverse Gram matrix", inv == explicit, || format!("{:?}", inv)));
        let xi = rd0.xi_projection()?;
        out.push(CheckResult::from_bool(id("xi"), "n-dimensional part of xi", xi == xi_projection_explicit(n), || {
            format!("{:?}", xi.iter().map(|c| c.to_string()).collect::<Vec<_>>())
        }));
        // (xi, xi) restricted to the n-dimensional part is -1/l_n
        let nd: Vec<Label> = rd0.labels().iter().copied().filter(|l| *l != Label::Y).collect();
        let mut s = RatK::zero();
        for (i, a) in nd.iter().enumerate() {
            for (j, b) in nd.iter().enumerate() {
                s += &(&(&xi[i] * &xi[j]) * &rd0.gram_entry(*a, *b));
            }
        }
        out.push(CheckResult::scalars(id("xi-norm"), "(xi_n, xi_n) = -1/l_n", &s, &-&ell(n).inv()?));
        let sub = crate::exact::MatK::from_rows(
            (0..nd.len()).map(|i| (0..nd.len()).map(|j| rd0.gram_entry(nd[i], nd[j])).collect()).collect(),
        );
        let want = &(&RatK::k_plus(n as i64).pow(n as i32 - 1)? * &ell(n)).scale(&rat(-(n as i64), 1));
        out.push(CheckResult::scalars(id("det-n"), "n-dimensional determinant", &sub.det()?, &want));
        for m in 1..=n {
            let rd = RootData::new(n, m)?;
            out.push(CheckResult::scalars(id(&format!("det-{}", m)), "determinant is independent of m", &rd.gram().det()?, &gram_det_expected(n)));
        }
        let ex = excluded_levels(n);
        for x in &ex {
            let rej = rd0.check_level(x).is_err();
            out.push(CheckResult::from_bool(id(&format!("excluded-{}", x)), "excluded level is rejected", rej, || "accepted".into()));
        }
        Ok(out)
    })();
    res.unwrap_or_else(|e: crate::Error| vec![CheckResult::fail(id("all"), "Gram identities", e.to_string())])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_failures(cs: &[CheckResult]) {
        let bad: Vec<_> = cs.iter().filter(|c| c.status == Status::Fail).collect();
        assert!(bad.is_empty(), "{:?}", bad.iter().map(|c| (&c.id, &c.witness)).collect::<Vec<_>>());
    }

    #[test]
    fn rank_three() {
        for m in 0..=3 {
            let r = Realization::new(3, m).unwrap();
            no_failures(&structure(&r));
            no_failures(&primary_vertices(&r));
            no_failures(&second_screenings(&r));
        }
    }

    #[test]
    fn identities_hold() {
        no_failures(&identities(4));
    }

    #[test]
    fn wrong_expectations_fail() {
        let r = Realization::new(2, 0).unwrap();
        let c = expect_poles("x", "H H", &r.h, &r.h, &[(2, VertexField::constant(RatK::k()))], &r.rd);
        assert_eq!(c.status, Status::Fail);
        assert!(c.witness.unwrap().starts_with("second-order pole"));
        let c = expect_poles("x", "H E", &r.h, &r.e, &[], &r.rd);
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn skipped_and_warning_rows() {
        let r = Realization::new(3, 0).unwrap();
        assert!(structure(&r).iter().any(|c| c.status == Status::Skipped));
        assert_ne!(footnote_check(&r).status, Status::Fail);
        assert_eq!(footnote_check(&Realization::new(2, 0).unwrap()).status, Status::Skipped);
    }
}
