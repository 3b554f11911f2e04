//! Truncated Fock modules of the free-boson mode algebra over Q(k).
//!
//! Fields act through their mode expansions: currents split into creation
//! and annihilation parts, and `e^p` acts as
//! `z^{(p,s)} exp(sum X_{-n} z^n/n) exp(-sum X_n z^{-n}/n)` on the sector
//! `s`, with `X = (p, J)`. Nothing here touches the contraction engine.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact::RatK;
use crate::lattice::{Label, Momentum, RootData};
use crate::wick::VertexField;

/// Sorted creation modes; `(l, n)` stands for `a^l_{-n}` with `n > 0`.
pub type ModeMono = SmallVec<[(Label, u32); 6]>;

fn level_of(m: &ModeMono) -> usize {
    m.iter().map(|(_, n)| *n as usize).sum()
}

fn insert_mode(m: &ModeMono, l: Label, n: u32) -> ModeMono {
    let mut out = m.clone();
    let pos = out.iter().position(|x| *x > (l, n)).unwrap_or(out.len());
    out.insert(pos, (l, n));
    out
}

/// A vector in the Fock module of one sector, truncated at a level cutoff.
#[derive(Clone, PartialEq, Eq)]
pub struct FockState {
    sector: Momentum,
    terms: BTreeMap<ModeMono, RatK>,
    cutoff: usize,
}

impl FockState {
    pub fn zero(sector: Momentum, cutoff: usize) -> Self {
        FockState { sector, terms: BTreeMap::new(), cutoff }
    }

    /// The highest-weight vector `|s>`.
    pub fn vacuum(sector: Momentum, cutoff: usize) -> Self {
        let mut st = FockState::zero(sector, cutoff);
        st.terms.insert(ModeMono::new(), RatK::one());
        st
    }

    pub fn monomial(sector: Momentum, modes: &[(Label, u32)], coeff: RatK, cutoff: usize) -> Result<Self> {
        let mut m: ModeMono = modes.iter().copied().collect();
        if m.iter().any(|(_, n)| *n == 0) {
            return Err(Error::Undefined("creation mode of index 0".into()));
        }
        m.sort_unstable();
        if level_of(&m) > cutoff {
            return Err(Error::Cutoff(cutoff));
        }
        let mut st = FockState::zero(sector, cutoff);
        st.add_term(m, coeff);
        Ok(st)
    }

    pub fn sector(&self) -> &Momentum {
        &self.sector
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<ModeMono, RatK> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_level(&self) -> Option<usize> {
        self.terms.keys().map(level_of).max()
    }

    pub fn min_level(&self) -> Option<usize> {
        self.terms.keys().map(level_of).min()
    }

    /// Drops monomials above the cutoff, which may be lowered.
    pub fn with_cutoff(&self, cutoff: usize) -> FockState {
        FockState { sector: self.sector.clone(), terms: self.terms.iter().filter(|(m, _)| level_of(m) <= cutoff).map(|(m, c)| (m.clone(), c.clone())).collect(), cutoff }
    }

    pub fn level_component(&self, level: usize) -> FockState {
        FockState {
            sector: self.sector.clone(),
            terms: self.terms.iter().filter(|(m, _)| level_of(m) == level).map(|(m, c)| (m.clone(), c.clone())).collect(),
            cutoff: self.cutoff,
        }
    }

    fn add_term(&mut self, m: ModeMono, c: RatK) {
        if c.is_zero() || level_of(&m) > self.cutoff {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Sum of two states of the same sector; the result keeps the smaller cutoff.
    pub fn add(&self, o: &FockState) -> Result<FockState> {
        if self.sector != o.sector && !self.is_zero() && !o.is_zero() {
            return Err(Error::Undefined(format!("sum of states in sectors {} and {}", self.sector, o.sector)));
        }
        let sector = if self.is_zero() { o.sector.clone() } else { self.sector.clone() };
        let mut out = FockState { sector, terms: BTreeMap::new(), cutoff: self.cutoff.min(o.cutoff) };
        for (m, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &RatK) -> FockState {
        let mut out = FockState::zero(self.sector.clone(), self.cutoff);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, o: &FockState) -> Result<FockState> {
        self.add(&o.scale(&RatK::from_i64(-1)))
    }

    /// Equality of the components at levels `<= cutoff`, ignoring the
    /// sectors of zero states.
    pub fn agrees_with(&self, o: &FockState, cutoff: usize) -> bool {
        let a = self.with_cutoff(cutoff);
        let b = o.with_cutoff(cutoff);
        a.terms == b.terms && (a.is_zero() || a.sector == b.sector)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let modes: Vec<String> = m.iter().map(|(l, n)| format!("{}[-{}]", l, n)).collect();
                format!("({}) {}|{}>", c, modes.join(" "), self.sector)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Heisenberg algebra `[a^u_p, a^v_q] = p (u, v) delta_{p+q,0}` acting on
/// Fock modules.
#[derive(Clone, Debug)]
pub struct ModeAlgebra {
    rd: RootData,
}

/// Falling product `prod_{t=1..d} (x - t)`.
fn falling(x: i64, d: u8) -> i64 {
    (1..=d as i64).map(|t| x - t).product()
}

impl ModeAlgebra {
    pub fn new(rd: RootData) -> Self {
        ModeAlgebra { rd }
    }

    pub fn root_data(&self) -> &RootData {
        &self.rd
    }

    pub fn commutator(&self, u: Label, p: i64, v: Label, q: i64) -> RatK {
        if p + q != 0 {
            return RatK::zero();
        }
        &self.rd.gram_entry(u, v) * &RatK::from_i64(p)
    }

    /// `a^label_p` applied to `state`.
    pub fn apply_current_mode(&self, state: &FockState, label: Label, p: i64) -> FockState {
        let mut out = FockState::zero(state.sector.clone(), state.cutoff);
        match p {
            p if p < 0 => {
                for (m, c) in &state.terms {
                    out.add_term(insert_mode(m, label, (-p) as u32), c.clone());
                }
            }
            0 => {
                let z = self.rd.pair_label(label, &state.sector);
                if !z.is_zero() {
                    for (m, c) in &state.terms {
                        out.add_term(m.clone(), c * &z);
                    }
                }
            }
            p => {
                for (m, c) in &state.terms {
                    self.contract(m, c, p as u32, |l| self.rd.gram_entry(label, l), &mut out);
                }
            }
        }
        out
    }

    /// Removes one creation mode of index `n`, weighted by `n * w(label)`.
    fn contract(&self, m: &ModeMono, c: &RatK, n: u32, w: impl Fn(Label) -> RatK, out: &mut FockState) {
        for i in 0..m.len() {
            let (l, nn) = m[i];
            if nn != n {
                continue;
            }
            let g = w(l);
            if g.is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.remove(i);
            out.add_term(rest, &(c * &g) * &RatK::from_i64(n as i64));
        }
    }

    /// `X_n = sum_l p_l a^l_n` for `n != 0`.
    fn apply_x(&self, state: &FockState, p: &Momentum, n: i64, scale: &RatK) -> FockState {
        let mut out = FockState::zero(state.sector.clone(), state.cutoff);
        if n < 0 {
            for (m, c) in &state.terms {
                for (l, pl) in p.iter() {
                    out.add_term(insert_mode(m, *l, (-n) as u32), &(c * pl) * scale);
                }
            }
        } else {
            for (m, c) in &state.terms {
                self.contract(m, &(c * scale), n as u32, |l| self.rd.pair_label(l, p), &mut out);
            }
        }
        out
    }

    /// `exp(sign * sum_{n>0} X_{dir*n} / n)`, where `dir = -1` raises and
    /// `dir = 1` lowers the level.
    fn apply_exp(&self, state: &FockState, p: &Momentum, raising: bool) -> Result<FockState> {
        if p.is_zero() {
            return Ok(state.clone());
        }
        let mut total = state.clone();
        let mut cur = state.clone();
        let mut k = 1i64;
        loop {
            let bound = if raising {
                state.cutoff.saturating_sub(cur.min_level().unwrap_or(0))
            } else {
                cur.max_level().unwrap_or(0)
            };
            let mut next = FockState::zero(state.sector.clone(), state.cutoff);
            for n in 1..=bound as i64 {
                let s = RatK::frac(if raising { 1 } else { -1 }, n * k);
                next = next.add(&self.apply_x(&cur, p, if raising { -n } else { n }, &s))?;
            }
            if next.is_zero() {
                break;
            }
            total = total.add(&next)?;
            cur = next;
            k += 1;
        }
        Ok(total)
    }

    /// Annihilation part `sum_{n>=0} a_n prod_{t=1..d}(-n-t)` of `d^d a(z)`,
    /// with the zero mode read in `sector`.
    fn annihilation_part(&self, state: &FockState, l: Label, d: u8, sector: &Momentum) -> Result<FockState> {
        let mut out = FockState::zero(state.sector.clone(), state.cutoff);
        let top = state.max_level().unwrap_or(0) as i64;
        for n in 0..=top {
            let f = falling(-n, d);
            if f == 0 {
                continue;
            }
            let part = if n == 0 {
                let z = self.rd.pair_label(l, sector);
                state.scale(&z)
            } else {
                self.apply_current_mode(state, l, n)
            };
            out = out.add(&part.scale(&RatK::from_i64(f)))?;
        }
        Ok(out)
    }

    /// Creation part `sum_{n>=1} a_{-n} prod_{t=1..d}(n-t)` of `d^d a(z)`.
    fn creation_part(&self, state: &FockState, l: Label, d: u8) -> Result<FockState> {
        let mut out = FockState::zero(state.sector.clone(), state.cutoff);
        let room = state.cutoff.saturating_sub(state.min_level().unwrap_or(0)) as i64;
        for n in 1..=room {
            let f = falling(n, d);
            if f == 0 {
                continue;
            }
            out = out.add(&self.apply_current_mode(state, l, -n).scale(&RatK::from_i64(f)))?;
        }
        Ok(out)
    }

    /// Coefficient of `z^power` in `f(z) |state>`, kept up to level `cutoff`.
    pub fn component(&self, state: &FockState, f: &VertexField, power: i64, cutoff: usize) -> Result<FockState> {
        let p = f.momentum();
        let gamma = self.rd.pairing(p, &state.sector);
        let g = gamma.as_integer().ok_or_else(|| Error::NonLocal(gamma.to_string()))?;
        let out_sector = state.sector.add(p);
        let mut out = FockState::zero(out_sector.clone(), cutoff);
        for (mono, coeff) in f.poly().iter() {
            let factors = mono.factors();
            if factors.len() > 16 {
                return Err(Error::Undefined("monomials of degree above 16".into()));
            }
            let wt = mono.weight() as i64;
            for (m, c) in &state.terms {
                let target = level_of(m) as i64 + power - g + wt;
                if target < 0 || target > cutoff as i64 {
                    continue;
                }
                let target = target as usize;
                let mut input = FockState::zero(state.sector.clone(), level_of(m));
                input.add_term(m.clone(), c * coeff);
                for mask in 0u32..(1 << factors.len()) {
                    let mut v = input.clone();
                    for (i, (l, d)) in factors.iter().enumerate() {
                        if mask & (1 << i) == 0 {
                            v = self.annihilation_part(&v, *l, *d, &state.sector)?;
                        }
                    }
                    if v.is_zero() {
                        continue;
                    }
                    v = self.apply_exp(&v, p, false)?;
                    let mut v = FockState { sector: out_sector.clone(), terms: v.terms, cutoff: target };
                    v = self.apply_exp(&v, p, true)?;
                    for (i, (l, d)) in factors.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            v = self.creation_part(&v, *l, *d)?;
                        }
                    }
                    out = out.add(&v.level_component(target).with_cutoff(cutoff))?;
                }
            }
        }
        Ok(FockState { sector: out_sector, terms: out.terms, cutoff })
    }

    /// `f(z) |state>` for the powers in `window`.
    pub fn apply_vertex(&self, state: &FockState, f: &VertexField, window: RangeInclusive<i64>, cutoff: usize) -> Result<BTreeMap<i64, FockState>> {
        window.map(|pw| Ok((pw, self.component(state, f, pw, cutoff)?))).collect()
    }

    /// The mode `f_(a)`, the coefficient of `z^{-a-1}`.
    pub fn mode(&self, state: &FockState, f: &VertexField, a: i64, cutoff: usize) -> Result<FockState> {
        self.component(state, f, -a - 1, cutoff)
    }

    /// The state `f(z)|0>` at `z = 0`.
    pub fn state_of(&self, f: &VertexField, cutoff: usize) -> Result<FockState> {
        self.component(&FockState::vacuum(Momentum::zero(), 0), f, 0, cutoff)
    }

    /// Level shifts of `f_(a)` on a state in `sector`, one per term weight.
    pub fn level_shift(&self, f: &VertexField, a: i64, sector: &Momentum) -> Result<Vec<i64>> {
        let gamma = self.rd.pairing(f.momentum(), sector);
        let g = gamma.as_integer().ok_or_else(|| Error::NonLocal(gamma.to_string()))?;
        let mut w: Vec<i64> = f.poly().iter().map(|(m, _)| -a - 1 - g + m.weight() as i64).collect();
        w.sort_unstable();
        w.dedup();
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize, m: usize) -> ModeAlgebra {
        ModeAlgebra::new(RootData::new(n, m).unwrap())
    }

    #[test]
    fn derivative_shifts_components() {
        let a = alg(3, 1);
        let f = VertexField::exp(Momentum::xi().add(&Momentum::basis(Label::QP)));
        let df = f.derivative();
        let st = FockState::monomial(Momentum::basis(Label::QP), &[(Label::Y, 1)], RatK::from_i64(3), 4).unwrap();
        for pw in -3..3 {
            let lhs = a.component(&st, &df, pw, 4).unwrap();
            let rhs = a.component(&st, &f, pw + 1, 4).unwrap().scale(&RatK::from_i64(pw + 1));
            assert!(lhs.agrees_with(&rhs, 4), "power {}", pw);
        }
    }

    #[test]
    fn annihilators_kill_the_vacuum() {
        let a = alg(3, 1);
        let v = FockState::vacuum(Momentum::xi(), 3);
        for l in a.root_data().labels() {
            assert!(a.apply_current_mode(&v, *l, 1).is_zero());
            assert!(a.apply_current_mode(&v, *l, 2).is_zero());
        }
    }

    #[test]
    fn zero_mode_reads_the_sector() {
        let a = alg(3, 1);
        let v = FockState::vacuum(Momentum::xi(), 3);
        assert_eq!(a.apply_current_mode(&v, Label::QP, 0), v);
        assert_eq!(a.apply_current_mode(&v, Label::QM, 0), v.scale(&RatK::from_i64(-1)));
    }

    #[test]
    fn commutator_on_vacuum() {
        let a = alg(3, 1);
        let v = FockState::vacuum(Momentum::zero(), 3);
        for &u in a.root_data().labels() {
            for &w in a.root_data().labels() {
                let uv = a.apply_current_mode(&a.apply_current_mode(&v, w, -1), u, 1);
                let vu = a.apply_current_mode(&a.apply_current_mode(&v, u, 1), w, -1);
                assert_eq!(uv.sub(&vu).unwrap(), v.scale(&a.commutator(u, 1, w, -1)));
            }
        }
    }

    #[test]
    fn exponential_on_vacuum_starts_with_the_shifted_vacuum() {
        let a = alg(2, 1);
        let f = VertexField::exp(Momentum::xi());
        let out = a.apply_vertex(&FockState::vacuum(Momentum::zero(), 2), &f, -1..=0, 2).unwrap();
        assert!(out[&-1].is_zero());
        assert_eq!(out[&0], FockState::vacuum(Momentum::xi(), 2));
    }

    #[test]
    fn current_state_is_the_first_creation_mode() {
        let a = alg(2, 0);
        let f = VertexField::current_derivative(Label::QP, 2);
        let st = a.state_of(&f, 4).unwrap();
        let want = FockState::monomial(Momentum::zero(), &[(Label::QP, 3)], RatK::from_i64(2), 4).unwrap();
        assert_eq!(st, want);
    }

    #[test]
    fn non_integer_exponent_is_rejected() {
        let a = alg(2, 1);
        let p = Momentum::basis(Label::QP).scale(&RatK::frac(1, 2));
        let f = VertexField::exp(p);
        let err = a.component(&FockState::vacuum(Momentum::basis(Label::QP), 2), &f, 0, 2);
        assert!(matches!(err, Err(Error::NonLocal(_))));
    }
}
