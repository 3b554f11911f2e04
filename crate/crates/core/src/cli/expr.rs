//! Field expressions:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? scalar? atom?          (at least one of scalar, atom)
//! atom   := NAME '(' n ',' m ')'        generators E H F T W Lambda Z, vertices V Vstar
//!         | CURRENT                     A1, A-1, Q+, Q-, Q, Y
//!         | 'd^' INT '(' expr ')'
//!         | 'prod(' expr (',' expr)+ ')'
//!         | 'exp(' momentum ')'
//! scalar := rational function in k, e.g. 3/2, (k+1)/(k+2), k
//! ```

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{BigRat, RatK};
use crate::lattice::{Label, Momentum, RootData};
use crate::tables::W4;
use crate::wgen::Realization;
use crate::wick::{normal_product_nested, VertexField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenName {
    E,
    H,
    F,
    T,
    W,
    Lambda,
    Z,
}

impl GenName {
    pub const ALL: [GenName; 7] = [GenName::E, GenName::H, GenName::F, GenName::T, GenName::W, GenName::Lambda, GenName::Z];

    pub fn as_str(self) -> &'static str {
        match self {
            GenName::E => "E",
            GenName::H => "H",
            GenName::F => "F",
            GenName::T => "T",
            GenName::W => "W",
            GenName::Lambda => "Lambda",
            GenName::Z => "Z",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldExpr {
    Generator { name: GenName, n: usize, m: usize },
    Current { label: Label, order: u32 },
    Vertex { dual: bool, n: usize, m: usize },
    Exp(Momentum),
    NormalProduct(Vec<FieldExpr>),
    Derivative { order: u32, expr: Box<FieldExpr> },
    ScalarMul(RatK, Box<FieldExpr>),
    Sum(Vec<FieldExpr>),
    /// A scalar on its own, i.e. a multiple of the identity.
    Constant(RatK),
}

pub fn parse_expression(text: &str) -> Result<FieldExpr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(e)
}

/// Parses a rational function of `k`, e.g. `(k+1)/(2*k+3)`.
pub fn parse_scalar(text: &str) -> Result<RatK> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let v = p.s_expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(v)
}

const NAMES: [&str; 13] = ["E", "H", "F", "T", "W", "Lambda", "Z", "V", "Vstar", "prod", "exp", "d", "k"];

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    /// Identifier, with the sign of `Q+`, `psi-` and `A-1` attached.
    fn ident(&mut self) -> Option<(usize, String)> {
        self.ws();
        let start = self.pos;
        if !self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
        let next = self.s.get(self.pos).copied();
        let after = self.s.get(self.pos + 1).copied();
        let signed = match word.as_str() {
            "Q" | "psi" => matches!(next, Some(b'+') | Some(b'-')),
            "A" | "a" => next == Some(b'-') && after.is_some_and(|c| c.is_ascii_digit()),
            _ => false,
        };
        if signed {
            let mut w = word;
            w.push(next.unwrap() as char);
            self.pos += 1;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                w.push(self.s[self.pos] as char);
                self.pos += 1;
            }
            return Some((start, w));
        }
        Some((start, word))
    }

    fn expr(&mut self) -> Result<FieldExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.peek() == Some(b'-') {
                terms.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { FieldExpr::Sum(terms) })
    }

    fn starts_scalar(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'(' => true,
            Some(b'k') => {
                let save = self.pos;
                let id = self.ident();
                self.pos = save;
                id.is_some_and(|(_, w)| w == "k")
            }
            _ => false,
        }
    }

    fn term(&mut self) -> Result<FieldExpr> {
        let neg = self.eat(b'-');
        let scalar = if self.starts_scalar() { Some(self.s_term(true)?) } else { None };
        self.eat(b'*');
        let atom = match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => Some(self.atom()?),
            _ => None,
        };
        let mut out = match (scalar, atom) {
            (Some(s), Some(a)) => FieldExpr::ScalarMul(s, Box::new(a)),
            (Some(s), None) => FieldExpr::Constant(s),
            (None, Some(a)) => a,
            (None, None) => return Err(self.err("expected a term")),
        };
        if neg {
            out = match out {
                FieldExpr::ScalarMul(s, a) => FieldExpr::ScalarMul(-&s, a),
                FieldExpr::Constant(s) => FieldExpr::Constant(-&s),
                a => FieldExpr::ScalarMul(RatK::from_i64(-1), Box::new(a)),
            };
        }
        Ok(out)
    }

    fn rank_args(&mut self) -> Result<(usize, usize)> {
        self.expect(b'(')?;
        let n = self.uint()? as usize;
        self.expect(b',')?;
        let m = self.uint()? as usize;
        self.expect(b')')?;
        Ok((n, m))
    }

    fn atom(&mut self) -> Result<FieldExpr> {
        let (start, name) = self.ident().ok_or_else(|| self.err("expected a name"))?;
        if let Some(g) = GenName::ALL.iter().find(|g| g.as_str() == name) {
            if self.peek() == Some(b'(') {
                let (n, m) = self.rank_args()?;
                return Ok(FieldExpr::Generator { name: *g, n, m });
            }
            return Err(Error::Parse { pos: start, msg: format!("`{}` needs its realization, as in `{}(n,m)`", name, name) });
        }
        match name.as_str() {
            "V" | "Vstar" => {
                let (n, m) = self.rank_args()?;
                Ok(FieldExpr::Vertex { dual: name == "Vstar", n, m })
            }
            "d" => {
                let order = if self.eat(b'^') { self.uint()? as u32 } else { 1 };
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(match e {
                    FieldExpr::Current { label, order: o } => FieldExpr::Current { label, order: o + order },
                    e => FieldExpr::Derivative { order, expr: Box::new(e) },
                })
            }
            "prod" => {
                self.expect(b'(')?;
                let mut fs = vec![self.expr()?];
                while self.eat(b',') {
                    fs.push(self.expr()?);
                }
                self.expect(b')')?;
                Ok(FieldExpr::NormalProduct(fs))
            }
            "exp" => {
                self.expect(b'(')?;
                let p = self.momentum()?;
                self.expect(b')')?;
                Ok(FieldExpr::Exp(p))
            }
            _ => match Label::parse(&name) {
                Some(label) if name.starts_with('A') || !name.starts_with(char::is_lowercase) => Ok(FieldExpr::Current { label, order: 0 }),
                _ => Err(Error::Parse { pos: start, msg: unresolved(&name) }),
            },
        }
    }

    fn momentum(&mut self) -> Result<Momentum> {
        let mut terms: Vec<(Label, RatK)> = Vec::new();
        if self.peek() == Some(b'0') {
            let save = self.pos;
            self.pos += 1;
            if self.peek() == Some(b')') {
                return Ok(Momentum::zero());
            }
            self.pos = save;
        }
        loop {
            let neg = self.eat(b'-');
            let c = if self.starts_scalar() { self.s_term(true)? } else { RatK::one() };
            self.eat(b'*');
            let (start, name) = self.ident().ok_or_else(|| self.err("expected a lattice vector"))?;
            let label = Label::parse(&name).ok_or_else(|| Error::Parse { pos: start, msg: format!("unknown lattice vector `{}`", name) })?;
            terms.push((label, if neg { -&c } else { c }));
            if !self.eat(b'+') && self.peek() != Some(b'-') {
                break;
            }
        }
        Ok(Momentum::from_terms(terms))
    }

    // scalar arithmetic over Q(k)

    fn s_expr(&mut self) -> Result<RatK> {
        let mut v = self.s_term(false)?;
        loop {
            if self.eat(b'+') {
                v = &v + &self.s_term(false)?;
            } else if self.eat(b'-') {
                v = &v - &self.s_term(false)?;
            } else {
                return Ok(v);
            }
        }
    }

    /// Products and quotients. At term level a `*` followed by a field
    /// name ends the scalar.
    fn s_term(&mut self, term_level: bool) -> Result<RatK> {
        let mut v = self.s_factor()?;
        loop {
            let save = self.pos;
            if self.eat(b'*') {
                if term_level && !self.starts_scalar() {
                    self.pos = save;
                    return Ok(v);
                }
                v = &v * &self.s_factor()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.s_factor()?;
                v = v.checked_div(&d).map_err(|_| Error::Parse { pos: at, msg: "division by zero".into() })?;
            } else {
                return Ok(v);
            }
        }
    }

    fn s_factor(&mut self) -> Result<RatK> {
        if self.eat(b'-') {
            return Ok(-&self.s_factor()?);
        }
        let base = if self.eat(b'(') {
            let v = self.s_expr()?;
            self.expect(b')')?;
            v
        } else if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            RatK::constant(BigRat::from_integer(self.uint()?.into()))
        } else {
            match self.ident() {
                Some((_, w)) if w == "k" => RatK::k(),
                Some((start, w)) => return Err(Error::Parse { pos: start, msg: format!("`{}` in a scalar; only k is allowed", w) }),
                None => return Err(self.err("expected a scalar")),
            }
        };
        if self.eat(b'^') {
            let e = self.uint()?;
            return base.pow(e as i32).map_err(Error::from);
        }
        Ok(base)
    }
}

fn unresolved(name: &str) -> String {
    let best = NAMES
        .iter()
        .map(|c| c.to_string())
        .chain(["A1", "Q+", "Q-", "Y"].iter().map(|c| c.to_string()))
        .map(|c| (strsim::levenshtein(name, &c), c))
        .min();
    match best {
        Some((d, c)) if d <= 2 => format!("unresolved reference `{}`; did you mean `{}`?", name, c),
        _ => format!("unresolved reference `{}`", name),
    }
}

/// The single realization referenced by the expression, if any.
pub fn realization_of(e: &FieldExpr) -> Result<Option<(usize, usize)>> {
    fn walk(e: &FieldExpr, acc: &mut Option<(usize, usize)>) -> Result<()> {
        let mut see = |nm: (usize, usize)| match acc {
            Some(prev) if *prev != nm => Err(Error::Undefined(format!("mixing {}[{}] and {}[{}] in one expression", prev.0, prev.1, nm.0, nm.1))),
            _ => {
                *acc = Some(nm);
                Ok(())
            }
        };
        match e {
            FieldExpr::Generator { n, m, .. } | FieldExpr::Vertex { n, m, .. } => see((*n, *m)),
            FieldExpr::NormalProduct(fs) | FieldExpr::Sum(fs) => fs.iter().try_for_each(|f| walk(f, acc)),
            FieldExpr::Derivative { expr, .. } | FieldExpr::ScalarMul(_, expr) => walk(expr, acc),
            FieldExpr::Current { .. } | FieldExpr::Exp(_) | FieldExpr::Constant(_) => Ok(()),
        }
    }
    let mut acc = None;
    walk(e, &mut acc)?;
    Ok(acc)
}

/// Evaluates expressions against one realization, caching the generators.
pub struct Evaluator {
    pub realization: Realization,
    w4: Option<W4>,
    cache: HashMap<GenName, VertexField>,
}

impl Evaluator {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Ok(Evaluator { realization: Realization::new(n, m)?, w4: None, cache: HashMap::new() })
    }

    /// The realization named in the expressions, or `fallback`.
    pub fn for_exprs(exprs: &[&FieldExpr], fallback: (usize, usize)) -> Result<Self> {
        let mut found: Option<(usize, usize)> = None;
        for e in exprs {
            if let Some(nm) = realization_of(e)? {
                if found.is_some_and(|f| f != nm) {
                    return Err(Error::Undefined(format!("operands live in {}[{}] and {}[{}]", found.unwrap().0, found.unwrap().1, nm.0, nm.1)));
                }
                found = Some(nm);
            }
        }
        let (n, m) = found.unwrap_or(fallback);
        Evaluator::new(n, m)
    }

    pub fn rd(&self) -> &RootData {
        &self.realization.rd
    }

    fn w4(&mut self) -> Result<&W4> {
        if self.w4.is_none() {
            if self.rd().n != 4 {
                return Err(Error::Undefined("Lambda and Z outside n = 4".into()));
            }
            self.w4 = Some(W4::new(self.rd().m)?);
        }
        Ok(self.w4.as_ref().unwrap())
    }

    fn generator(&mut self, g: GenName) -> Result<VertexField> {
        if let Some(f) = self.cache.get(&g) {
            return Ok(f.clone());
        }
        let f = match g {
            GenName::Lambda => self.w4()?.lambda()?,
            GenName::Z => self.w4()?.z()?,
            g => self.realization.named(g.as_str())?,
        };
        self.cache.insert(g, f.clone());
        Ok(f)
    }

    pub fn eval(&mut self, e: &FieldExpr) -> Result<VertexField> {
        let rd = self.rd().clone();
        let here = |n: usize, m: usize| {
            if (n, m) == (rd.n, rd.m) {
                Ok(())
            } else {
                Err(Error::Undefined(format!("{}[{}] inside an expression evaluated in {}[{}]", n, m, rd.n, rd.m)))
            }
        };
        match e {
            FieldExpr::Generator { name, n, m } => {
                here(*n, *m)?;
                self.generator(*name)
            }
            FieldExpr::Vertex { dual, n, m } => {
                here(*n, *m)?;
                if *dual {
                    self.realization.v_star()
                } else {
                    self.realization.v()
                }
            }
            FieldExpr::Current { label, order } => {
                rd.validate(*label)?;
                Ok(VertexField::current(*label).derivative_n(*order))
            }
            FieldExpr::Exp(p) => {
                for (l, _) in p.iter() {
                    rd.validate(*l)?;
                }
                Ok(VertexField::exp(p.clone()))
            }
            FieldExpr::NormalProduct(fs) => {
                let vs: Vec<VertexField> = fs.iter().map(|f| self.eval(f)).collect::<Result<_>>()?;
                normal_product_nested(&vs, &rd)
            }
            FieldExpr::Derivative { order, expr } => Ok(self.eval(expr)?.derivative_n(*order)),
            FieldExpr::ScalarMul(c, expr) => Ok(self.eval(expr)?.scale(c)),
            FieldExpr::Sum(fs) => {
                let mut acc: Option<VertexField> = None;
                for f in fs {
                    let v = self.eval(f)?;
                    acc = Some(match acc {
                        None => v,
                        Some(a) => a.checked_add(&v)?,
                    });
                }
                Ok(acc.unwrap_or_else(VertexField::zero))
            }
            FieldExpr::Constant(c) => Ok(VertexField::constant(c.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_reference() {
        assert_eq!(parse_expression("E(3,0)").unwrap(), FieldExpr::Generator { name: GenName::E, n: 3, m: 0 });
    }

    #[test]
    fn product_with_derivative() {
        let e = parse_expression("prod(A1, d^1(Q+))").unwrap();
        assert_eq!(
            e,
            FieldExpr::NormalProduct(vec![FieldExpr::Current { label: Label::a(1), order: 0 }, FieldExpr::Current { label: Label::QP, order: 1 }])
        );
    }

    #[test]
    fn scalar_times_derivative() {
        let e = parse_expression("(k+1) d^1(Q)").unwrap();
        assert_eq!(e, FieldExpr::ScalarMul(RatK::k_plus(1), Box::new(FieldExpr::Current { label: Label::QP, order: 1 })));
    }

    #[test]
    fn rational_scalars() {
        assert_eq!(parse_scalar("(k+1)/(k+2)").unwrap(), RatK::k_plus(1).checked_div(&RatK::k_plus(2)).unwrap());
        assert_eq!(parse_scalar("-3/2*k^2").unwrap(), (&RatK::k() * &RatK::k()).scale(&crate::exact::rat(-3, 2)));
    }

    #[test]
    fn errors_carry_positions_and_suggestions() {
        match parse_expression("Lamda(4,0)") {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 0);
                assert!(msg.contains("Lambda"), "{}", msg);
            }
            other => panic!("{:?}", other),
        }
        match parse_expression("E(3,0) +") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn p2_from_text() {
        // A Q + Q Q + (k+1) dQ in 2[0]
        let mut ev = Evaluator::new(2, 0).unwrap();
        let e = parse_expression("prod(A1, Q) + prod(Q, Q) + (k+1) d^1(Q)").unwrap();
        let f = ev.eval(&e).unwrap();
        assert_eq!(f.poly(), &crate::wgen::p_poly(2, 0));
    }

    #[test]
    fn mixed_realizations_are_rejected() {
        let e = parse_expression("E(3,0) + F(3,1)").unwrap();
        assert!(realization_of(&e).is_err());
    }
}
