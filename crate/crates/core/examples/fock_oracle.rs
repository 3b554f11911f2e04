//! Pole coefficients from the contraction engine against mode computations
//! in Fock modules.
use w2n::oracle::{oracle_realization, OracleOptions};
use w2n::report::Status;
use w2n::wgen::Realization;

fn main() -> anyhow::Result<()> {
    let opts = OracleOptions { cutoff: 3, random_pairs: 5, ..OracleOptions::default() };
    for m in 0..=2 {
        let r = Realization::new(2, m)?;
        let cs = oracle_realization(&r, &opts);
        let bad = cs.iter().filter(|c| c.status == Status::Fail).count();
        println!("2[{}]: {} checks, {} failed", m, cs.len(), bad);
    }
    Ok(())
}
