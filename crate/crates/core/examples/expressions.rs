//! Parsing field expressions and rendering them as text, LaTeX and JSON.
use w2n::cli::{parse_expression, render_field, Evaluator, Format};

fn main() -> anyhow::Result<()> {
    let mut ev = Evaluator::new(2, 0)?;
    let e = parse_expression("prod(A1, Q) + prod(Q, Q) + (k+1) d^1(Q)")?;
    let f = ev.eval(&e)?;
    for fmt in [Format::Text, Format::Latex, Format::Json] {
        println!("{}", render_field(&f, fmt));
    }
    match parse_expression("Lamda") {
        Ok(x) => println!("parsed {:?}", x),
        Err(err) => println!("error: {}", err),
    }
    Ok(())
}
