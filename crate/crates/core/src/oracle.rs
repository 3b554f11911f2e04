//! Cross-checks of the contraction engine against the Fock-module mode
//! computation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::RatK;
use crate::fock::{FockState, ModeAlgebra};
use crate::lattice::{Label, Momentum, RootData};
use crate::report::CheckResult;
use crate::wgen::Realization;
use crate::wick::{monomials_of_weight, ope, LaurentOpe, VertexField, WickPoly};

/// Settings shared by the oracle checks.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Pole orders `j >= 1 - depth` are compared.
    pub depth: i64,
    /// Highest level of the compared states.
    pub cutoff: usize,
    /// Sampled states per pair for the commutator formula.
    pub samples: usize,
    /// Randomized field pairs per realization.
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { depth: 1, cutoff: 4, samples: 6, random_pairs: 20, seed: 0x5eed }
    }
}

fn binomial(a: i64, i: i64) -> RatK {
    let mut num = RatK::one();
    for t in 0..i {
        num = &num * &RatK::from_i64(a - t);
    }
    let den: i64 = (1..=i).product();
    &num / &RatK::from_i64(den)
}

fn int_pairing(rd: &RootData, p: &Momentum, q: &Momentum) -> Result<i64> {
    let g = rd.pairing(p, q);
    g.as_integer().ok_or_else(|| Error::NonLocal(g.to_string()))
}

/// Momenta with integer mutual pairings: `0`, `+-xi` and `+-psi` (`psi+`,
/// or `psi-` when `m = n`).
pub fn sample_momenta(rd: &RootData) -> Vec<Momentum> {
    let xi = Momentum::xi();
    let psi = Momentum::basis(if rd.has(Label::QP) { Label::QP } else { Label::QM });
    vec![Momentum::zero(), xi.clone(), xi.neg(), psi.clone(), psi.neg()]
}

/// A random state of level at most 2 in `sector`.
fn random_state(rng: &mut ChaCha8Rng, rd: &RootData, sector: Momentum, cutoff: usize) -> FockState {
    let labels = rd.labels();
    let mut st = FockState::zero(sector.clone(), cutoff);
    for _ in 0..rng.gen_range(1..=2) {
        let level = rng.gen_range(0..=2u32);
        let modes: Vec<(Label, u32)> = match level {
            0 => vec![],
            1 => vec![(*labels.choose(rng).unwrap(), 1)],
            _ if rng.gen_bool(0.5) => vec![(*labels.choose(rng).unwrap(), 2)],
            _ => vec![(*labels.choose(rng).unwrap(), 1), (*labels.choose(rng).unwrap(), 1)],
        };
        let c = RatK::from_i64(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let m = FockState::monomial(sector.clone(), &modes, c, cutoff).expect("level within cutoff");
        st = st.add(&m).expect("same sector");
    }
    st
}

/// A random field of weight at most 2 times `e^p`, with `p` from [`sample_momenta`].
pub fn random_field(rng: &mut ChaCha8Rng, rd: &RootData) -> VertexField {
    let p = sample_momenta(rd).choose(rng).unwrap().clone();
    let w = rng.gen_range(0..=2u32);
    let monos = monomials_of_weight(rd.labels(), w);
    let mut poly = WickPoly::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let m = monos.choose(rng).unwrap().clone();
        let c = if rng.gen_bool(0.5) { RatK::from_i64(rng.gen_range(1..=4)) } else { RatK::k_plus(rng.gen_range(-2..=3)) };
        poly.add_term(m, &c);
    }
    VertexField::new(poly, p)
}

fn max_weight(f: &VertexField) -> i64 {
    f.poly().max_weight() as i64
}

/// Compares `f(z) g(w)` from the engine with the mode computation: the
/// coefficients of `f(z)|g>` against the states of the engine's
/// coefficients, and the commutator formula
/// `f_(a) g_(b) - e g_(b) f_(a) = sum_i C(a,i) (f_(i) g)_(a+b-i)` on
/// sampled states, `e = (-1)^{(p,q)}`.
pub fn oracle_ope_check(
    id: &str,
    anchor: &str,
    rd: &RootData,
    f: &VertexField,
    g: &VertexField,
    opts: &OracleOptions,
    rng: &mut ChaCha8Rng,
) -> CheckResult {
    CheckResult::from_result(id, anchor, oracle_mismatch(rd, f, g, opts, rng).map(|m| match m {
        None => CheckResult::pass(id, anchor),
        Some(w) => CheckResult::fail(id, anchor, w),
    }))
}

fn oracle_mismatch(rd: &RootData, f: &VertexField, g: &VertexField, opts: &OracleOptions, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let gamma = int_pairing(rd, f.momentum(), g.momentum())?;
    let lo = ope(f, g, rd, (opts.depth - 1 - gamma).max(-1 - gamma))?;
    compare_with_modes(rd, f, g, &lo, opts, rng)
}

/// Compares a given expansion `lo` of `f(z) g(w)` with the mode computation.
/// `lo` must reach the depth requested by `opts`.
pub fn compare_with_modes(
    rd: &RootData,
    f: &VertexField,
    g: &VertexField,
    lo: &LaurentOpe,
    opts: &OracleOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Option<String>> {
    let alg = ModeAlgebra::new(rd.clone());
    let (p, q) = (f.momentum(), g.momentum());
    let gamma = int_pairing(rd, p, q)?;
    let cutoff = opts.cutoff;
    let lowest = gamma - max_weight(f) - max_weight(g);

    // f(z)|g> against the states of the coefficients
    let gstate = alg.state_of(g, max_weight(g) as usize)?;
    for pw in lowest..=(opts.depth - 1) {
        let fock = alg.component(&gstate, f, pw, cutoff)?;
        let coeff = lo.coeff(pw - gamma)?;
        let eng = alg.state_of(&coeff, cutoff)?;
        if !fock.agrees_with(&eng, cutoff) {
            return Ok(Some(format!("coefficient of z^{} on |g>: modes give {}, engine gives {}", pw, fock, eng)));
        }
    }

    // commutator formula on sampled states
    let eps = if gamma % 2 == 0 { 1 } else { -1 };
    let brackets: Vec<(i64, VertexField)> = lo.singular_part()?.into_iter().collect();
    let sectors: Vec<Momentum> = sample_momenta(rd)
        .into_iter()
        .filter(|s| [p, q].iter().all(|x| rd.pairing(x, s).as_integer().is_some()))
        .collect();
    for _ in 0..opts.samples {
        let sector = sectors.choose(rng).unwrap().clone();
        let st = random_state(rng, rd, sector.clone(), 2);
        let top = st.max_level().unwrap_or(0) as i64;
        let g_sec = int_pairing(rd, q, &sector)?;
        let f_sec = int_pairing(rd, p, &sector.add(q))?;
        let mid = rng.gen_range(0..=cutoff as i64);
        let end = rng.gen_range(0..=cutoff as i64);
        let b = -1 - g_sec + max_weight(g) + top - mid;
        let a = -1 - f_sec + max_weight(f) + mid - end;

        let inner_cut = |h: &VertexField, c: i64, sec: &Momentum| -> Result<usize> {
            let shifts = alg.level_shift(h, c, sec)?;
            Ok((cutoff as i64 - shifts.first().copied().unwrap_or(0)).max(0) as usize)
        };
        let gb = alg.mode(&st, g, b, inner_cut(f, a, &sector.add(q))?)?;
        let fa_gb = alg.mode(&gb, f, a, cutoff)?;
        let fa = alg.mode(&st, f, a, inner_cut(g, b, &sector.add(p))?)?;
        let gb_fa = alg.mode(&fa, g, b, cutoff)?;
        let lhs = fa_gb.sub(&gb_fa.scale(&RatK::from_i64(eps)))?;
        let mut rhs = FockState::zero(sector.add(p).add(q), cutoff);
        for (j, c) in &brackets {
            let i = j - 1;
            let term = alg.mode(&st, c, a + b - i, cutoff)?;
            rhs = rhs.add(&term.scale(&binomial(a, i)))?;
        }
        if !lhs.agrees_with(&rhs, cutoff) {
            return Ok(Some(format!("modes a = {}, b = {} on {}: commutator {}, brackets {}", a, b, st, lhs, rhs)));
        }
    }
    Ok(None)
}

/// `[A,[B,C]] + [B,[C,A]] + [C,[A,B]] = 0` and the commutator rule for
/// sampled current modes on sampled states.
pub fn mode_jacobi(rd: &RootData, trials: usize, rng: &mut ChaCha8Rng) -> Option<String> {
    let alg = ModeAlgebra::new(rd.clone());
    let labels = rd.labels();
    let cut = 12;
    for _ in 0..trials {
        let sector = sample_momenta(rd).choose(rng).unwrap().clone();
        let st = random_state(rng, rd, sector, cut);
        let modes: Vec<(Label, i64)> = (0..3).map(|_| (*labels.choose(rng).unwrap(), rng.gen_range(-2..=2))).collect();
        let act = |v: &FockState, m: (Label, i64)| alg.apply_current_mode(v, m.0, m.1);
        let comm = |v: &FockState, x: (Label, i64), y: (Label, i64)| act(&act(v, y), x).sub(&act(&act(v, x), y)).expect("same sector");
        let (a, b) = (modes[0], modes[1]);
        let direct = comm(&st, a, b);
        let rule = st.scale(&alg.commutator(a.0, a.1, b.0, b.1));
        if !direct.agrees_with(&rule, cut) {
            return Some(format!("[{:?},{:?}] on {}", a, b, st));
        }
        let mut total = FockState::zero(st.sector().clone(), cut);
        for r in 0..3 {
            let (x, y, z) = (modes[r], modes[(r + 1) % 3], modes[(r + 2) % 3]);
            // [x,[y,z]] v = x [y,z] v - [y,z] x v
            let yz = comm(&st, y, z);
            let t = act(&yz, x).sub(&comm(&act(&st, x), y, z)).expect("same sector");
            total = total.add(&t).expect("same sector");
        }
        if !total.is_zero() {
            return Some(format!("Jacobi fails for {:?} on {}", modes, st));
        }
    }
    None
}

/// The oracle grid for one realization: the generator pairs
/// `(E,F)`, `(H,H)`, `(T,T)`, `(T,E)` and randomized low-weight pairs.
pub fn oracle_realization(r: &Realization, opts: &OracleOptions) -> Vec<CheckResult> {
    let rd = &r.rd;
    let t = format!("oracle/{}[{}]", r.n(), r.m());
    let id = |s: &str| format!("{}/{}", t, s);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((r.n() as u64) << 8 | r.m() as u64));
    let mut out = Vec::new();
    match r.t() {
        Ok(tt) => {
            let pairs: [(&str, &VertexField, &VertexField); 4] =
                [("EF", &r.e, &r.f), ("HH", &r.h, &r.h), ("TT", tt, tt), ("TE", tt, &r.e)];
            for (name, f, g) in pairs {
                out.push(oracle_ope_check(&id(name), "engine and mode computation agree", rd, f, g, opts, &mut rng));
            }
        }
        Err(e) => out.push(CheckResult::fail(id("T"), "energy-momentum tensor", e.to_string())),
    }
    let seeds: Vec<u64> = (0..opts.random_pairs).map(|_| rng.gen()).collect();
    out.extend(seeds.par_iter().enumerate().map(|(i, s)| {
        let mut rng = ChaCha8Rng::seed_from_u64(*s);
        let f = random_field(&mut rng, rd);
        let g = random_field(&mut rng, rd);
        oracle_ope_check(&id(&format!("random-{}", i)), "randomized pair", rd, &f, &g, opts, &mut rng)
    }).collect::<Vec<_>>());
    let jacobi = mode_jacobi(rd, 20, &mut rng);
    out.push(CheckResult::from_bool(id("mode-jacobi"), "Jacobi identity of current modes", jacobi.is_none(), || jacobi.clone().unwrap_or_default()));
    out
}

/// Every realization with `n <= n_max`.
pub fn oracle_suite(n_max: usize, opts: &OracleOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for m in 0..=n {
            match Realization::new(n, m) {
                Ok(r) => out.extend(oracle_realization(&r, opts)),
                Err(e) => out.push(CheckResult::fail(format!("oracle/{}[{}]", n, m), "realization", e.to_string())),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(r: &Realization, f: &VertexField, g: &VertexField, lo: &LaurentOpe) -> Option<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        compare_with_modes(&r.rd, f, g, lo, &OracleOptions::default(), &mut rng).unwrap()
    }

    #[test]
    fn generators_agree() {
        let r = Realization::new(2, 1).unwrap();
        let lo = ope(&r.e, &r.f, &r.rd, 0).unwrap();
        assert_eq!(check(&r, &r.e, &r.f, &lo), None);
    }

    #[test]
    fn rescaled_expansion_is_caught() {
        let r = Realization::new(2, 1).unwrap();
        let lo = ope(&r.e, &r.f, &r.rd, 0).unwrap().map_coeffs(|c| c.scale_i(2));
        assert!(check(&r, &r.e, &r.f, &lo).is_some());
    }

    #[test]
    fn swapped_order_is_caught() {
        let r = Realization::new(3, 1).unwrap();
        let lo = ope(&r.f, &r.e, &r.rd, 0).unwrap();
        assert!(check(&r, &r.e, &r.f, &lo).is_some());
    }

    #[test]
    fn current_modes_satisfy_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(mode_jacobi(&RootData::new(3, 2).unwrap(), 10, &mut rng), None);
    }

    #[test]
    fn sample_momenta_pair_integrally() {
        for (n, m) in [(2, 0), (3, 1), (3, 3)] {
            let rd = RootData::new(n, m).unwrap();
            let ps = sample_momenta(&rd);
            for p in &ps {
                for q in &ps {
                    assert!(int_pairing(&rd, p, q).is_ok());
                }
            }
        }
    }
}
