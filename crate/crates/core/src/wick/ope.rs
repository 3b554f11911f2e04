use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact::{factorial, BigRat, PolyK, RatK};
use crate::lattice::{Label, Momentum, RootData};

use super::field::VertexField;
use super::poly::{DiffMono, Factor, WickPoly};

/// Expansion `f(z) g(w) = (z-w)^offset sum_N (z-w)^N C_N(w)`, known for all
/// `N <= depth`.
#[derive(Clone)]
pub struct LaurentOpe {
    offset: RatK,
    depth: i64,
    momentum: Momentum,
    coeffs: BTreeMap<i64, VertexField>,
}

impl LaurentOpe {
    pub fn offset(&self) -> &RatK {
        &self.offset
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn momentum(&self) -> &Momentum {
        &self.momentum
    }

    /// Nonzero coefficients keyed by `N`.
    pub fn coeffs(&self) -> &BTreeMap<i64, VertexField> {
        &self.coeffs
    }

    /// Coefficient of `(z-w)^{offset + n}`.
    pub fn coeff(&self, n: i64) -> Result<VertexField> {
        if n > self.depth {
            return Err(Error::Truncated { depth: self.depth, wanted: n });
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(VertexField::zero))
    }

    /// Integer offset, if the fields are mutually local.
    pub fn integer_offset(&self) -> Result<i64> {
        self.offset.as_integer().ok_or_else(|| Error::NonLocal(self.offset.to_string()))
    }

    /// Coefficient of `(z-w)^{-j}` in the full expansion.
    pub fn pole(&self, j: i64) -> Result<VertexField> {
        let g = self.integer_offset()?;
        self.coeff(-j - g)
    }

    /// Highest pole order with a nonzero coefficient (0 if regular).
    pub fn max_pole(&self) -> Result<i64> {
        let g = self.integer_offset()?;
        Ok(self.coeffs.keys().next().map_or(0, |n| (-n - g).max(0)))
    }

    /// Coefficients at poles `j >= 1`, keyed by pole order.
    pub fn singular_part(&self) -> Result<BTreeMap<i64, VertexField>> {
        let g = self.integer_offset()?;
        Ok(self.coeffs.iter().filter(|(n, _)| **n + g < 0).map(|(n, c)| (-n - g, c.clone())).collect())
    }

    pub fn is_regular(&self) -> Result<bool> {
        Ok(self.singular_part()?.is_empty())
    }

    pub fn map_coeffs(&self, f: impl Fn(&VertexField) -> VertexField) -> LaurentOpe {
        LaurentOpe {
            offset: self.offset.clone(),
            depth: self.depth,
            momentum: self.momentum.clone(),
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, f(c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub(crate) fn from_parts(offset: RatK, depth: i64, momentum: Momentum, coeffs: BTreeMap<i64, VertexField>) -> Self {
        LaurentOpe { offset, depth, momentum, coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl PartialEq for LaurentOpe {
    fn eq(&self, o: &Self) -> bool {
        self.offset == o.offset && self.coeffs == o.coeffs
    }
}

impl fmt::Debug for LaurentOpe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LaurentOpe offset {} depth {}", self.offset, self.depth)?;
        for (n, c) in &self.coeffs {
            writeln!(f, "  N={}: {:?}", n, c)?;
        }
        Ok(())
    }
}

/// Least common multiple of the denominators of `xs`.
fn common_den<'a>(xs: impl Iterator<Item = &'a RatK>) -> PolyK {
    xs.fold(PolyK::one(), |d, x| if x.den().is_one() { d } else { d.lcm(x.den()) })
}

/// `x * d` as a polynomial; `d` must clear the denominator of `x`.
fn clear(x: &RatK, d: &PolyK) -> PolyK {
    if x.den().is_one() {
        return x.num() * d;
    }
    x.num() * &d.div_rem(x.den()).0
}

/// Pairing tables for one OPE, as numerators over the common denominator `den`.
struct Tables {
    slot: Vec<u16>,
    gram: Vec<PolyK>,
    dim: usize,
    /// `(b_u, p_right)` per slot
    with_right_exp: Vec<PolyK>,
    /// `(p_left, b_v)` per slot
    with_left_exp: Vec<PolyK>,
    den: PolyK,
}

impl Tables {
    fn new(rd: &RootData, pl: &Momentum, pr: &Momentum) -> Self {
        let labels = rd.labels();
        let dim = labels.len();
        let maxc = labels.iter().map(|l| l.code()).max().unwrap_or(0);
        let mut slot = vec![u16::MAX; maxc + 1];
        for (i, l) in labels.iter().enumerate() {
            slot[l.code()] = i as u16;
        }
        let mut gram = Vec::with_capacity(dim * dim);
        for &a in labels {
            for &b in labels {
                gram.push(rd.gram_entry(a, b));
            }
        }
        let right: Vec<RatK> = labels.iter().map(|l| rd.pair_label(*l, pr)).collect();
        let left: Vec<RatK> = labels.iter().map(|l| rd.pair_label(*l, pl)).collect();
        let den = common_den(gram.iter().chain(&right).chain(&left));
        let num = |v: &[RatK]| v.iter().map(|x| clear(x, &den)).collect::<Vec<_>>();
        Tables { slot, gram: num(&gram), dim, with_right_exp: num(&right), with_left_exp: num(&left), den }
    }

    #[inline]
    fn idx(&self, l: Label) -> usize {
        self.slot[l.code()] as usize
    }

    #[inline]
    fn g(&self, a: Label, b: Label) -> &PolyK {
        &self.gram[self.idx(a) * self.dim + self.idx(b)]
    }
}

/// Keyed by order, monomial, number of table factors and exponential degree;
/// the value is a numerator over `D_L D_R D_T^c D_P^t`.
type Acc = FxHashMap<(i64, DiffMono, u8, u8), PolyK>;

struct Walk<'a> {
    t: &'a Tables,
    lf: &'a [Factor],
    rf: &'a [Factor],
    max_order: i64,
    exp: &'a [Vec<(DiffMono, PolyK)>],
    has_exp: bool,
    coeff: &'a PolyK,
    left_suffix: Vec<i64>,
    right_total: i64,
}

struct State<'a> {
    used: u32,
    used_weight: i64,
    pole: i64,
    num: BigRat,
    kf: SmallVec<[&'a PolyK; 8]>,
    lsurv: SmallVec<[Factor; 6]>,
    rsurv: SmallVec<[Factor; 6]>,
}

fn fact(n: u32) -> BigRat {
    BigRat::from_integer(factorial(n))
}

impl<'a> Walk<'a> {
    fn run(&self, acc: &mut Acc) {
        let mut st = State {
            used: 0,
            used_weight: 0,
            pole: 0,
            num: BigRat::one(),
            kf: SmallVec::new(),
            lsurv: SmallVec::new(),
            rsurv: SmallVec::new(),
        };
        self.left(0, &mut st, acc);
    }

    fn bound_ok(&self, i: usize, st: &State) -> bool {
        let rem = self.left_suffix[i] + (self.right_total - st.used_weight);
        st.pole + rem + self.max_order >= 0
    }

    fn left(&self, i: usize, st: &mut State<'a>, acc: &mut Acc) {
        if !self.bound_ok(i, st) {
            return;
        }
        if i == self.lf.len() {
            self.right(0, st, acc);
            return;
        }
        let (u, a) = self.lf[i];
        // survive
        st.lsurv.push((u, a));
        self.left(i + 1, st, acc);
        st.lsurv.pop();
        // contract with a right current
        for j in 0..self.rf.len() {
            if st.used & (1 << j) != 0 {
                continue;
            }
            if j > 0 && self.rf[j] == self.rf[j - 1] && st.used & (1 << (j - 1)) == 0 {
                // identical unused neighbour already tried; count via multiplicity below
                continue;
            }
            let (v, b) = self.rf[j];
            let g = self.t.g(u, v);
            if g.is_zero() {
                continue;
            }
            // number of identical unused copies of rf[j]
            let mut copies = 0i64;
            let mut k = j;
            while k < self.rf.len() && self.rf[k] == self.rf[j] {
                if st.used & (1 << k) == 0 {
                    copies += 1;
                }
                k += 1;
            }
            let old = st.num.clone();
            let sign = if a % 2 == 0 { 1 } else { -1 };
            st.num = &st.num * fact(a as u32 + b as u32 + 1) * BigRat::from_integer(BigInt::from(sign * copies));
            st.kf.push(g);
            st.used |= 1 << j;
            st.used_weight += b as i64 + 1;
            st.pole += a as i64 + b as i64 + 2;
            self.left(i + 1, st, acc);
            st.pole -= a as i64 + b as i64 + 2;
            st.used_weight -= b as i64 + 1;
            st.used &= !(1 << j);
            st.kf.pop();
            st.num = old;
        }
        // contract with the right exponential
        let c = &self.t.with_right_exp[self.t.idx(u)];
        if !c.is_zero() {
            let old = st.num.clone();
            let sign = if a % 2 == 0 { 1 } else { -1 };
            st.num = &st.num * fact(a as u32) * BigRat::from_integer(BigInt::from(sign));
            st.kf.push(c);
            st.pole += a as i64 + 1;
            self.left(i + 1, st, acc);
            st.pole -= a as i64 + 1;
            st.kf.pop();
            st.num = old;
        }
    }

    fn right(&self, j: usize, st: &mut State<'a>, acc: &mut Acc) {
        if st.pole + (self.right_total - st.used_weight) + self.max_order < 0 {
            return;
        }
        if j == self.rf.len() {
            self.leaf(st, acc);
            return;
        }
        if st.used & (1 << j) != 0 {
            self.right(j + 1, st, acc);
            return;
        }
        let (v, b) = self.rf[j];
        st.used |= 1 << j;
        // survive
        st.rsurv.push((v, b));
        self.right(j + 1, st, acc);
        st.rsurv.pop();
        // contract with the left exponential
        let c = &self.t.with_left_exp[self.t.idx(v)];
        if !c.is_zero() {
            let old = st.num.clone();
            st.num = -(&st.num * fact(b as u32));
            st.kf.push(c);
            st.used_weight += b as i64 + 1;
            st.pole += b as i64 + 1;
            self.right(j + 1, st, acc);
            st.pole -= b as i64 + 1;
            st.used_weight -= b as i64 + 1;
            st.kf.pop();
            st.num = old;
        }
        st.used &= !(1 << j);
    }

    fn leaf(&self, st: &State, acc: &mut Acc) {
        let budget = self.max_order + st.pole;
        if budget < 0 {
            return;
        }
        let mut s = self.coeff.scale(&st.num);
        for f in &st.kf {
            s = &s * *f;
        }
        if s.is_zero() {
            return;
        }
        let base = DiffMono::from_factors(st.rsurv.clone());
        let mut shifted: SmallVec<[Factor; 6]> = SmallVec::new();
        self.taylor(0, budget, 0, BigRat::one(), &mut shifted, &base, &s, st, acc);
    }

    #[allow(clippy::too_many_arguments)]
    fn taylor(
        &self,
        i: usize,
        rem: i64,
        used: i64,
        mult: BigRat,
        shifted: &mut SmallVec<[Factor; 6]>,
        base: &DiffMono,
        s: &PolyK,
        st: &State,
        acc: &mut Acc,
    ) {
        if i < st.lsurv.len() {
            let (u, a) = st.lsurv[i];
            for t in 0..=rem {
                shifted.push((u, a + t as u8));
                self.taylor(i + 1, rem - t, used + t, &mult / fact(t as u32), shifted, base, s, st, acc);
                shifted.pop();
            }
            return;
        }
        let mono = base.mul(&DiffMono::from_factors(shifted.clone()));
        let top = if self.has_exp { rem } else { 0 };
        let sm = s.scale(&mult);
        let nf = st.kf.len() as u8;
        for te in 0..=top {
            let n = -st.pole + used + te;
            for (em, ec) in self.exp[te as usize].iter() {
                let c = &sm * ec;
                let key = (n, mono.mul(em), nf, te as u8);
                match acc.get_mut(&key) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(key, c);
                    }
                }
            }
        }
    }
}

/// Coefficients `E_t` of `exp(sum_{s>=1} x^s/s! d^{s-1} X_p) = sum_t x^t E_t`.
pub fn exp_series(p: &Momentum, t_max: usize) -> Vec<WickPoly> {
    let mut out = vec![WickPoly::one()];
    if p.is_zero() {
        return out;
    }
    let derivs: Vec<WickPoly> = (0..t_max)
        .map(|j| p.iter().map(|(l, c)| (DiffMono::current(*l, j as u8), c.clone())).collect())
        .collect();
    for t in 1..=t_max {
        let mut e = WickPoly::zero();
        for s in 1..=t {
            let w = BigRat::new(BigInt::one(), factorial(s as u32 - 1) * BigInt::from(t));
            e.add_scaled(&derivs[s - 1].mul(&out[t - s]), &RatK::constant(w));
        }
        out.push(e);
    }
    out
}

/// A polynomial's coefficients as numerators over `den`.
fn numerators(p: &WickPoly, den: &PolyK) -> Vec<(DiffMono, PolyK)> {
    p.iter().map(|(m, c)| (m.clone(), clear(c, den))).collect()
}

/// Operator product expansion of `left(z) right(w)`, computed for all
/// orders `N <= depth` relative to the offset `(p_left, p_right)`.
pub fn ope(left: &VertexField, right: &VertexField, rd: &RootData, depth: i64) -> Result<LaurentOpe> {
    left.validate(rd)?;
    right.validate(rd)?;
    let pl = left.momentum();
    let pr = right.momentum();
    let offset = rd.pairing(pl, pr);
    let momentum = pl.add(pr);
    let t = Tables::new(rd, pl, pr);
    let wl = left.poly().max_weight() as i64;
    let wr = right.poly().max_weight() as i64;
    let t_max = (depth + wl + wr).max(0) as usize;
    let has_exp = !pl.is_zero();
    if t_max > u8::MAX as usize {
        return Err(Error::Undefined("expansion depth above 255".into()));
    }

    // E_t has denominator dividing D_P^t
    let dp = common_den(pl.iter().map(|(_, c)| c));
    let exp: Vec<Vec<(DiffMono, PolyK)>> =
        exp_series(pl, t_max).iter().enumerate().map(|(t, e)| numerators(e, &dp.pow(t as u32))).collect();
    let dl = common_den(left.poly().iter().map(|(_, c)| c));
    let dr = common_den(right.poly().iter().map(|(_, c)| c));
    let lterms = numerators(left.poly(), &dl);
    let rterms = numerators(right.poly(), &dr);
    if rterms.iter().any(|(m, _)| m.degree() > 32) {
        return Err(Error::Undefined("monomials of degree above 32".into()));
    }

    let work = |(lm, lc): &(DiffMono, PolyK)| -> Acc {
        let mut acc = Acc::default();
        let lf = lm.factors();
        let mut left_suffix = vec![0i64; lf.len() + 1];
        for i in (0..lf.len()).rev() {
            left_suffix[i] = left_suffix[i + 1] + lf[i].1 as i64 + 1;
        }
        for (rm, rc) in &rterms {
            let coeff = lc * rc;
            let rf = rm.factors();
            let walk = Walk {
                t: &t,
                lf,
                rf,
                max_order: depth,
                exp: &exp,
                has_exp,
                coeff: &coeff,
                left_suffix: left_suffix.clone(),
                right_total: rf.iter().map(|f| f.1 as i64 + 1).sum(),
            };
            walk.run(&mut acc);
        }
        acc
    };

    fn merge(mut a: Acc, mut b: Acc) -> Acc {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        for (k, v) in b {
            match a.get_mut(&k) {
                Some(x) => *x += &v,
                None => {
                    a.insert(k, v);
                }
            }
        }
        a
    }

    let acc = if lterms.len() * rterms.len() > 64 {
        lterms.par_iter().map(work).reduce(Acc::default, merge)
    } else {
        lterms.iter().map(work).fold(Acc::default(), merge)
    };

    let base = &dl * &dr;
    let mut dens: FxHashMap<(u8, u8), RatK> = FxHashMap::default();
    let mut by_order: BTreeMap<i64, WickPoly> = BTreeMap::new();
    for ((n, mono, nf, te), c) in acc {
        if c.is_zero() {
            continue;
        }
        let d = dens.entry((nf, te)).or_insert_with(|| {
            let den = &(&base * &t.den.pow(nf as u32)) * &dp.pow(te as u32);
            RatK::from_poly(den).inv().expect("nonzero denominator")
        });
        by_order.entry(n).or_default().add_term(mono, &(&RatK::from_poly(c) * &*d));
    }
    let coeffs = by_order.into_iter().map(|(n, p)| (n, VertexField::new(p, momentum.clone()))).collect();
    Ok(LaurentOpe::from_parts(offset, depth, momentum, coeffs))
}

/// Coefficient of `(z-w)^{-j}` in `f(z) g(w)`.
pub fn bracket(f: &VertexField, g: &VertexField, j: i64, rd: &RootData) -> Result<VertexField> {
    let gamma = rd.pairing(f.momentum(), g.momentum());
    let gi = gamma.as_integer().ok_or_else(|| Error::NonLocal(gamma.to_string()))?;
    ope(f, g, rd, -j - gi)?.pole(j)
}

/// Singular part of `f(z) g(w)` keyed by pole order.
pub fn singular(f: &VertexField, g: &VertexField, rd: &RootData) -> Result<BTreeMap<i64, VertexField>> {
    let gamma = rd.pairing(f.momentum(), g.momentum());
    let gi = gamma.as_integer().ok_or_else(|| Error::NonLocal(gamma.to_string()))?;
    ope(f, g, rd, -1 - gi)?.singular_part()
}

/// Normally ordered product `:f g:`, the `(z-w)^0` coefficient.
pub fn normal_product(f: &VertexField, g: &VertexField, rd: &RootData) -> Result<VertexField> {
    bracket(f, g, 0, rd)
}

/// Right-nested normal product `:f1 :f2 :... fn:::`.
pub fn normal_product_nested(fs: &[VertexField], rd: &RootData) -> Result<VertexField> {
    let Some((last, init)) = fs.split_last() else {
        return Ok(VertexField::identity());
    };
    let mut acc = last.clone();
    for f in init.iter().rev() {
        acc = normal_product(f, &acc, rd)?;
    }
    Ok(acc)
}

/// Finds `S` with `dS = r`, if one exists.
pub fn total_derivative_solve(r: &VertexField, rd: &RootData) -> Result<Option<VertexField>> {
    use crate::exact::{MatK, Solution};
    if r.is_zero() {
        return Ok(Some(VertexField::zero()));
    }
    let p = r.momentum().clone();
    let mut total = WickPoly::zero();
    for w in r.poly().weights() {
        let comp = r.poly().component(w);
        if w == 0 {
            return Ok(None);
        }
        let basis = super::poly::monomials_of_weight(rd.labels(), w - 1);
        let images: Vec<WickPoly> =
            basis.iter().map(|m| VertexField::new(WickPoly::term(m.clone(), RatK::one()), p.clone()).derivative().poly().clone()).collect();
        let mut rows: Vec<DiffMono> = comp.iter().map(|(m, _)| m.clone()).collect();
        for im in &images {
            rows.extend(im.iter().map(|(m, _)| m.clone()));
        }
        rows.sort();
        rows.dedup();
        let mut a = MatK::zeros(rows.len(), basis.len());
        for (j, im) in images.iter().enumerate() {
            for (m, c) in im.iter() {
                let i = rows.binary_search(m).unwrap();
                a[(i, j)] = c.clone();
            }
        }
        let b: Vec<RatK> = rows.iter().map(|m| comp.coeff(m)).collect();
        let x = match a.solve(&b)? {
            Solution::NoSolution => return Ok(None),
            Solution::Unique(x) => x,
            Solution::Underdetermined { particular, .. } => particular,
        };
        for (m, c) in basis.iter().zip(x) {
            total.add_term(m.clone(), &c);
        }
    }
    Ok(Some(VertexField::new(total, p)))
}

/// Numeric specialization at `k = value`; refuses excluded levels and poles.
pub fn specialize_field(f: &VertexField, value: &BigRat, rd: &RootData) -> Result<VertexField> {
    rd.check_level(value)?;
    let poly = f.poly().try_map_coeffs(|c| c.eval(value).map(RatK::constant))?;
    let mom = Momentum::from_terms(
        f.momentum().iter().map(|(l, c)| Ok((*l, RatK::constant(c.eval(value)?)))).collect::<Result<Vec<_>>>()?,
    );
    Ok(VertexField::new(poly, mom))
}

pub fn specialize_ope(o: &LaurentOpe, value: &BigRat, rd: &RootData) -> Result<LaurentOpe> {
    rd.check_level(value)?;
    let mut coeffs = BTreeMap::new();
    for (n, c) in o.coeffs() {
        coeffs.insert(*n, specialize_field(c, value, rd)?);
    }
    let mom = Momentum::from_terms(
        o.momentum().iter().map(|(l, c)| Ok((*l, RatK::constant(c.eval(value)?)))).collect::<Result<Vec<_>>>()?,
    );
    Ok(LaurentOpe::from_parts(RatK::constant(o.offset().eval(value)?), o.depth(), mom, coeffs))
}
