//! Operator products at a fixed rational level.
use w2n::cli::{specialize_command, Format};

fn main() -> anyhow::Result<()> {
    print!("{}", specialize_command("1/2", "E(3,0)", Some("F(3,0)"), 0, (3, 0), Format::Text)?);
    // k = -3 is excluded for rank 3
    if let Err(e) = specialize_command("-3", "E(3,0)", Some("F(3,0)"), 0, (3, 0), Format::Text) {
        println!("k = -3: {}", e);
    }
    Ok(())
}
