//! Operator products of generators and composite expressions.
use w2n::cli::{ope_command, Format};

fn main() -> anyhow::Result<()> {
    for (l, r) in [("E(3,1)", "F(3,1)"), ("H(3,1)", "E(3,1)"), ("T(3,0)", "T(3,0)"), ("A1", "exp(psi+)")] {
        println!("{} x {}:", l, r);
        print!("{}", ope_command(l, r, 0, (3, 0), Format::Text)?);
    }
    println!("{}", ope_command("H(2,0)", "H(2,0)", 0, (2, 0), Format::Json)?);
    Ok(())
}
