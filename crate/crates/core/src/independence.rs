//! Realization independence at the level of structure constants: the poles
//! of the OPEs among the U-currents, `E` and `F` are written in a fixed
//! basis of normal-ordered words in those same currents, and the
//! coefficients must agree for every `m`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Solution;
use crate::report::CheckResult;
use crate::wgen::Realization;
use crate::wick::{combine, express, normal_product, singular, VertexField};

/// A strong generator with twice its conformal weight and its `H` charge.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub field: VertexField,
    pub weight2: u32,
    pub charge: i32,
}

/// `U_1, ..., U_{n-1}` (`U_0` is a constant), `E` and `F`.
pub fn generators(r: &Realization) -> Result<Vec<Generator>> {
    let n = r.n() as u32;
    let us = r.u_currents()?;
    let mut out: Vec<Generator> = (1..n)
        .map(|j| Generator { name: format!("U{}", j), field: us[j as usize].clone(), weight2: 2 * j, charge: 0 })
        .collect();
    out.push(Generator { name: "E".into(), field: r.e.clone(), weight2: n, charge: 1 });
    out.push(Generator { name: "F".into(), field: r.f.clone(), weight2: n, charge: -1 });
    Ok(out)
}

/// A word `:d^{a1} g1 (d^{a2} g2 (...)):`, letters sorted.
pub type Word = Vec<(usize, u32)>;

/// Sorted multisets of letters `(generator, derivative order)` of total
/// doubled weight `w2` and charge `c`.
pub fn words(gens: &[Generator], w2: u32, c: i32) -> Vec<Word> {
    let mut letters: Vec<(usize, u32)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut d = 0;
        while g.weight2 + 2 * d <= w2 {
            letters.push((i, d));
            d += 1;
        }
    }
    let w = w2;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(gens: &[Generator], letters: &[(usize, u32)], from: usize, w: u32, c: i32, cur: &mut Word, out: &mut Vec<Word>) {
        if w == 0 {
            if c == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for (i, &(g, d)) in letters.iter().enumerate().skip(from) {
            let lw = gens[g].weight2 + 2 * d;
            if lw <= w {
                cur.push((g, d));
                rec(gens, letters, i, w - lw, c - gens[g].charge, cur, out);
                cur.pop();
            }
        }
    }
    rec(gens, &letters, 0, w, c, &mut cur, &mut out);
    out
}

/// Fields of words, memoized on suffixes.
pub struct WordFields<'a> {
    r: &'a Realization,
    gens: &'a [Generator],
    cache: HashMap<Word, VertexField>,
}

impl<'a> WordFields<'a> {
    pub fn new(r: &'a Realization, gens: &'a [Generator]) -> Self {
        WordFields { r, gens, cache: HashMap::new() }
    }

    pub fn field(&mut self, word: &[(usize, u32)]) -> Result<VertexField> {
        if let Some(f) = self.cache.get(word) {
            return Ok(f.clone());
        }
        let f = match word {
            [] => VertexField::identity(),
            [(g, d)] => self.gens[*g].field.derivative_n(*d),
            [(g, d), rest @ ..] => {
                let tail = self.field(rest)?;
                normal_product(&self.gens[*g].field.derivative_n(*d), &tail, &self.r.rd)?
            }
        };
        self.cache.insert(word.to_vec(), f.clone());
        Ok(f)
    }
}

/// Singular poles of `U_i U_j` (`i <= j`), `U_i E` and `U_i F`.
pub fn targets(gens: &[Generator]) -> Vec<(usize, usize)> {
    let us: Vec<usize> = (0..gens.len()).filter(|i| gens[*i].charge == 0).collect();
    let mut out = Vec::new();
    for (a, &i) in us.iter().enumerate() {
        for &j in &us[a..] {
            out.push((i, j));
        }
        for (j, g) in gens.iter().enumerate() {
            if g.charge != 0 {
                out.push((i, j));
            }
        }
    }
    out
}

fn word_name(names: &[String], w: &[(usize, u32)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(g, d)| match d {
            0 => names[*g].clone(),
            1 => format!("d{}", names[*g]),
            d => format!("d^{}{}", d, names[*g]),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Compares the poles of `g_i g_j` in `r` with the word expansion found in
/// the reference realization `r0`; returns a witness on mismatch.
pub fn compare_pair(
    r0: &Realization,
    gens0: &[Generator],
    r: &Realization,
    gens: &[Generator],
    i: usize,
    j: usize,
) -> Result<Option<String>> {
    let names: Vec<String> = gens0.iter().map(|g| g.name.clone()).collect();
    let w2 = gens0[i].weight2 + gens0[j].weight2;
    let charge = gens0[i].charge + gens0[j].charge;
    let top = (w2 / 2) as i64;
    let sing0 = singular(&gens0[i].field, &gens0[j].field, &r0.rd)?;
    let sing = singular(&gens[i].field, &gens[j].field, &r.rd)?;
    if sing0.keys().chain(sing.keys()).any(|o| *o > top) {
        return Ok(Some("pole above the weight bound".into()));
    }
    let mut wf0 = WordFields::new(r0, gens0);
    let mut wf = WordFields::new(r, gens);
    for order in 1..=top {
        let basis = words(gens0, w2 - 2 * order as u32, charge);
        let fields0: Vec<VertexField> = basis.iter().map(|w| wf0.field(w)).collect::<Result<_>>()?;
        let pole0 = sing0.get(&order).cloned().unwrap_or_else(VertexField::zero);
        let x = match express(&pole0, &fields0)? {
            Solution::Unique(x) => x,
            Solution::Underdetermined { particular, .. } => particular,
            Solution::NoSolution => return Err(Error::NoSolution(format!("pole {} is not in the span of the words", order))),
        };
        let fields: Vec<VertexField> = basis.iter().map(|w| wf.field(w)).collect::<Result<_>>()?;
        let want = combine(&x, &fields);
        let got = sing.get(&order).cloned().unwrap_or_else(VertexField::zero);
        if !(&got - &want).is_zero() {
            let terms: Vec<String> =
                basis.iter().zip(&x).filter(|(_, c)| !c.is_zero()).map(|(w, c)| format!("({}) {}", c, word_name(&names, w))).collect();
            let shown = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            return Ok(Some(format!("pole {} is not {}", order, shown)));
        }
    }
    Ok(None)
}

/// Realization-independence for rank `n`: the word expansions found in
/// `n[0]` reproduce the corresponding poles in every `n[m]`.
pub fn realization_independence(n: usize) -> Vec<CheckResult> {
    let anchor = "U-current OPEs have the same structure constants for every m";
    let head = format!("independence/{}", n);
    let res = (|| -> Result<Vec<CheckResult>> {
        let reals: Vec<Realization> = (0..=n).map(|m| Realization::new(n, m)).collect::<Result<_>>()?;
        let gens: Vec<Vec<Generator>> = reals.iter().map(generators).collect::<Result<_>>()?;
        let pairs = targets(&gens[0]);
        Ok(pairs
            .par_iter()
            .map(|&(i, j)| {
                let id = format!("{}/{}{}", head, gens[0][i].name, gens[0][j].name);
                let res = (|| -> Result<CheckResult> {
                    for m in 1..=n {
                        if let Some(w) = compare_pair(&reals[0], &gens[0], &reals[m], &gens[m], i, j)? {
                            return Ok(CheckResult::fail(&id, anchor, format!("{}[{}]: {}", n, m, w)));
                        }
                    }
                    Ok(CheckResult::pass(&id, anchor))
                })();
                CheckResult::from_result(id.clone(), anchor, res)
            })
            .collect())
    })();
    res.unwrap_or_else(|e| vec![CheckResult::fail(head, anchor, e.to_string())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        let r = Realization::new(3, 0).unwrap();
        let gens = generators(&r).unwrap();
        assert_eq!(words(&gens, 0, 0), vec![Vec::<(usize, u32)>::new()]);
        // weight 2, charge 0: U1 U1, dU1, U2
        assert_eq!(words(&gens, 4, 0).len(), 3);
        // weight 3, charge 0: U1^3, U1 dU1, d^2U1, U1 U2, dU2, E F
        assert_eq!(words(&gens, 6, 0).len(), 6);
        // weight 5/2, charge 1: U1 E, dE
        assert_eq!(words(&gens, 5, 1).len(), 2);
    }

    #[test]
    fn rank_three_agrees() {
        assert!(realization_independence(3).iter().all(|c| c.status == crate::report::Status::Pass));
    }

    #[test]
    fn rescaled_current_is_caught() {
        let r0 = Realization::new(3, 0).unwrap();
        let r1 = Realization::new(3, 1).unwrap();
        let g0 = generators(&r0).unwrap();
        let mut g1 = generators(&r1).unwrap();
        assert_eq!(compare_pair(&r0, &g0, &r1, &g1, 1, 1).unwrap(), None);
        g1[1].field = g1[1].field.scale_i(2);
        assert!(compare_pair(&r0, &g0, &r1, &g1, 1, 1).unwrap().is_some());
    }
}
