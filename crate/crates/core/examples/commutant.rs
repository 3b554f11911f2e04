//! Low-weight fields annihilated by all first screenings.
use w2n::cli::render::field_text;
use w2n::screening::{commutant_at_weight, first_screenings};
use w2n::wgen::Realization;

fn main() -> anyhow::Result<()> {
    for (n, m) in [(3, 0), (4, 1)] {
        let r = Realization::new(n, m)?;
        let scr = first_screenings(&r.rd);
        for w in 1..=2 {
            let basis = commutant_at_weight(&r.rd, &scr, w)?;
            println!("{}[{}] weight {}: dimension {}", n, m, w, basis.len());
            for b in &basis {
                println!("  {}", field_text(b));
            }
        }
    }
    Ok(())
}
