//! Text, LaTeX and JSON renderings of fields, expansions and reports. The
//! text form of a field is a valid input expression.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::exact::{BigRat, PolyK, RatK};
use crate::lattice::{Label, LabelKind, Momentum};
use crate::report::{Report, Status};
use crate::wick::{DiffMono, LaurentOpe, VertexField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "latex" | "tex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            o => Err(format!("unknown format `{}` (text, latex, json)", o)),
        }
    }
}

// text

fn mono_atoms(m: &DiffMono) -> Vec<String> {
    m.factors().iter().map(|(l, d)| if *d == 0 { l.to_string() } else { format!("d^{}({})", d, l) }).collect()
}

fn momentum_text(p: &Momentum) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.iter().map(|(l, c)| format!("({})*{}", c, l.vector_name())).collect::<Vec<_>>().join(" + ")
}

pub fn field_text(f: &VertexField) -> String {
    let terms = f.poly().display_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let exp = (!f.momentum().is_zero()).then(|| format!("exp({})", momentum_text(f.momentum())));
    let parts: Vec<String> = terms
        .iter()
        .map(|(m, c)| {
            let mut atoms = mono_atoms(m);
            atoms.extend(exp.clone());
            let atom = match atoms.len() {
                0 => String::new(),
                1 => atoms.pop().unwrap(),
                _ => format!("prod({})", atoms.join(", ")),
            };
            match (c.is_one(), atom.is_empty()) {
                (true, false) => atom,
                (_, true) => format!("({})", c),
                (false, false) => format!("({}) {}", c, atom),
            }
        })
        .collect();
    parts.join(" + ")
}

/// Pole orders of the stored coefficients, or `None` for non-local pairs.
fn orders(o: &LaurentOpe) -> Option<Vec<(i64, &VertexField)>> {
    let g = o.integer_offset().ok()?;
    Some(o.coeffs().iter().map(|(n, c)| (-n - g, c)).collect())
}

fn shown(o: &LaurentOpe, min_order: i64) -> Vec<(i64, &VertexField)> {
    match orders(o) {
        Some(v) => v.into_iter().filter(|(j, _)| *j >= min_order).collect(),
        None => o.coeffs().iter().map(|(n, c)| (-n, c)).filter(|(j, _)| *j >= min_order).collect(),
    }
}

pub fn ope_text(o: &LaurentOpe, min_order: i64) -> String {
    let mut s = String::new();
    if o.integer_offset().is_err() {
        let _ = writeln!(s, "offset {}", o.offset());
    }
    for (j, c) in shown(o, min_order) {
        let _ = writeln!(s, "pole {}: {}", j, field_text(c));
    }
    if s.is_empty() {
        s.push_str("regular\n");
    }
    s
}

pub fn report_text(r: &Report) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let _ = write!(s, "{:<8} {}  ({})", c.status, c.id, c.anchor);
        if let Some(w) = &c.witness {
            let _ = write!(s, "\n         {}", w);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{}", summary(r));
    s
}

pub fn summary(r: &Report) -> String {
    format!(
        "{}: {} checks, {} passed, {} failed, {} warnings, {} skipped",
        r.suite,
        r.checks.len(),
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Warning),
        r.count(Status::Skipped)
    )
}

// latex

fn bigrat_latex(c: &BigRat) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn poly_latex(p: &PolyK) -> String {
    let mut s = String::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let neg = num_traits::Signed::is_negative(c);
        let a = num_traits::Signed::abs(c);
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let one = num_traits::One::is_one(&a);
        if d == 0 || !one {
            s.push_str(&bigrat_latex(&a));
        }
        match d {
            0 => {}
            1 => s.push('k'),
            d => {
                let _ = write!(s, "k^{{{}}}", d);
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn scalar_latex(c: &RatK) -> String {
    if c.den().is_one() {
        poly_latex(c.num())
    } else {
        format!("\\frac{{{}}}{{{}}}", poly_latex(c.num()), poly_latex(c.den()))
    }
}

fn label_latex(l: Label) -> String {
    match l.kind() {
        LabelKind::A(i) => format!("A_{{{}}}", i),
        LabelKind::QPlus => "Q^{+}".into(),
        LabelKind::QMinus => "Q^{-}".into(),
        LabelKind::Y => "Y".into(),
    }
}

fn vector_latex(l: Label) -> String {
    match l.kind() {
        LabelKind::A(i) => format!("a_{{{}}}", i),
        LabelKind::QPlus => "\\psi^{+}".into(),
        LabelKind::QMinus => "\\psi^{-}".into(),
        LabelKind::Y => "\\xi".into(),
    }
}

fn wrapped(c: &RatK) -> String {
    let s = scalar_latex(c);
    if c.den().is_one() && c.num().term_count() > 1 {
        format!("({})", s)
    } else {
        s
    }
}

pub fn field_latex(f: &VertexField) -> String {
    let terms = f.poly().display_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let exp = (!f.momentum().is_zero()).then(|| {
        let parts: Vec<String> = f.momentum().iter().map(|(l, c)| format!("{}\\,{}", wrapped(c), vector_latex(*l))).collect();
        format!("e^{{{}}}", parts.join(" + "))
    });
    let mut s = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let mut atoms: Vec<String> = m
            .factors()
            .iter()
            .map(|(l, d)| match d {
                0 => label_latex(*l),
                1 => format!("\\partial {}", label_latex(*l)),
                d => format!("\\partial^{{{}}} {}", d, label_latex(*l)),
            })
            .collect();
        atoms.extend(exp.clone());
        let body = atoms.join(" ");
        let negative = c.num().lc().is_some_and(num_traits::Signed::is_negative) && c.num().term_count() == 1;
        let mag = if negative { -*c } else { (*c).clone() };
        if i > 0 {
            s.push_str(if negative { " - " } else { " + " });
        } else if negative {
            s.push('-');
        }
        if body.is_empty() {
            s.push_str(&scalar_latex(&mag));
        } else if mag.is_one() {
            s.push_str(&body);
        } else {
            let _ = write!(s, "{}\\,{}", wrapped(&mag), body);
        }
    }
    s
}

fn document(body: &str) -> String {
    format!("\\documentclass{{article}}\n\\usepackage{{amsmath,amssymb}}\n\\begin{{document}}\n{}\\end{{document}}\n", body)
}

pub fn field_latex_document(f: &VertexField) -> String {
    document(&format!("\\[\n{}\n\\]\n", field_latex(f)))
}

pub fn ope_latex(o: &LaurentOpe, min_order: i64) -> String {
    let rows: Vec<String> = shown(o, min_order)
        .into_iter()
        .map(|(j, c)| match j {
            0 => format!("&+ {}", field_latex(c)),
            j if j < 0 => format!("&+ (z-w)^{{{}}}\\,\\big({}\\big)", -j, field_latex(c)),
            j => format!("&+ \\frac{{{}}}{{(z-w)^{{{}}}}}", field_latex(c), j),
        })
        .collect();
    if rows.is_empty() {
        return document("\\[\n\\text{regular}\n\\]\n");
    }
    document(&format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", rows.join(" \\\\\n")))
}

fn tex_escape(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            '_' | '&' | '%' | '$' | '#' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            c => out.push(c),
        }
    }
    out
}

pub fn report_latex(r: &Report) -> String {
    let mut rows = String::new();
    for c in &r.checks {
        let _ = writeln!(rows, "{} & \\texttt{{{}}} & {} \\\\", c.status, tex_escape(&c.id), tex_escape(&c.anchor));
    }
    document(&format!(
        "\\section*{{{}}}\n\\begin{{longtable}}{{lll}}\nstatus & check & statement \\\\\n\\hline\n{}\\end{{longtable}}\n{}\n",
        tex_escape(&r.suite),
        rows,
        tex_escape(&summary(r))
    ))
    .replace("\\usepackage{amsmath,amssymb}", "\\usepackage{amsmath,amssymb,longtable}")
}

// json

pub fn field_json(f: &VertexField) -> Value {
    let momentum: serde_json::Map<String, Value> = f.momentum().iter().map(|(l, c)| (l.to_string(), Value::String(c.to_string()))).collect();
    let terms: Vec<Value> = f
        .poly()
        .display_terms()
        .iter()
        .map(|(m, c)| {
            let mono: Vec<Value> = m.factors().iter().map(|(l, d)| json!([l.to_string(), d])).collect();
            json!({"mono": mono, "coeff": c.to_string()})
        })
        .collect();
    json!({"momentum": momentum, "terms": terms})
}

pub fn ope_json(o: &LaurentOpe, min_order: i64) -> Value {
    let offset = if o.integer_offset().is_ok() { "0".to_string() } else { o.offset().to_string() };
    let poles: Vec<Value> = shown(o, min_order).into_iter().map(|(j, c)| json!({"order": j, "field": field_json(c)})).collect();
    json!({"offset": offset, "poles": poles})
}

pub fn report_json(r: &Report) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"id": c.id, "anchor": c.anchor, "status": c.status.to_string(), "witness": c.witness}))
        .collect();
    json!({
        "suite": r.suite,
        "checks": checks,
        "passed": r.count(Status::Pass),
        "failed": r.count(Status::Fail),
        "warnings": r.count(Status::Warning),
        "skipped": r.count(Status::Skipped),
    })
}

pub fn render_field(f: &VertexField, fmt: Format) -> String {
    match fmt {
        Format::Text => format!("{}\n", field_text(f)),
        Format::Latex => field_latex_document(f),
        Format::Json => format!("{}\n", field_json(f)),
    }
}

pub fn render_ope(o: &LaurentOpe, min_order: i64, fmt: Format) -> String {
    match fmt {
        Format::Text => ope_text(o, min_order),
        Format::Latex => ope_latex(o, min_order),
        Format::Json => format!("{}\n", ope_json(o, min_order)),
    }
}

pub fn render_report(r: &Report, fmt: Format) -> String {
    match fmt {
        Format::Text => report_text(r),
        Format::Latex => report_latex(r),
        Format::Json => format!("{}\n", report_json(r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::expr::{parse_expression, Evaluator};
    use crate::lattice::RootData;
    use crate::wick::ope;

    #[test]
    fn yy_is_regular() {
        let rd = RootData::new(2, 0).unwrap();
        let y = VertexField::current(Label::Y);
        let o = ope(&y, &y, &rd, 0).unwrap();
        assert_eq!(ope_json(&o, 1).to_string(), r#"{"offset":"0","poles":[]}"#);
    }

    #[test]
    fn p2_latex() {
        let f = VertexField::new(crate::wgen::p_poly(2, 0), Momentum::zero());
        let s = field_latex(&f);
        for part in ["A_{1} Q^{+}", "Q^{+} Q^{+}", "(k + 1)\\,\\partial Q^{+}"] {
            assert!(s.contains(part), "{}", s);
        }
    }

    #[test]
    fn text_round_trips_through_the_parser() {
        let mut ev = Evaluator::new(3, 1).unwrap();
        for name in ["E", "F", "H", "T"] {
            let f = ev.realization.named(name).unwrap();
            let back = ev.eval(&parse_expression(&field_text(&f)).unwrap()).unwrap();
            assert_eq!(back, f, "{}", name);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn random_fields_round_trip(seed in proptest::prelude::any::<u64>(), m in 0usize..=3) {
            use rand::SeedableRng;
            let mut ev = Evaluator::new(3, m).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = crate::oracle::random_field(&mut rng, ev.rd());
            let text = field_text(&f);
            let back = ev.eval(&parse_expression(&text).unwrap()).unwrap();
            proptest::prop_assert_eq!(&back, &f, "{}", text);
            let json = field_json(&f);
            proptest::prop_assert!(json["momentum"].is_object());
            proptest::prop_assert_eq!(json["terms"].as_array().map(|t| t.len()), Some(f.poly().len()));
        }
    }
}
