//! The generators E, F, H and T of `W^(2)_n` in one realization, built by
//! the recursion and by the factored route.
use w2n::cli::render::field_text;
use w2n::cli::{build, Format};
use w2n::lattice::Momentum;
use w2n::wgen::{p_poly, Route};
use w2n::wick::VertexField;

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let m: usize = std::env::args().nth(2).map(|s| s.parse()).transpose()?.unwrap_or(1);
    println!("P_{} = {}", n, field_text(&VertexField::new(p_poly(n, 0), Momentum::zero())));
    let rec = build(n, m, Route::Recursive, Format::Text)?;
    let fac = build(n, m, Route::Factored, Format::Text)?;
    print!("{}", rec);
    println!("factored route agrees: {}", rec == fac);
    Ok(())
}
