//! The `W^(2)_4` table in one realization (slow: a few minutes).
use w2n::tables::w4_table;

fn main() -> anyhow::Result<()> {
    let m: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    for c in w4_table(m) {
        println!("[{}] {} ({})", c.status, c.id, c.anchor);
        if let Some(w) = c.witness {
            println!("    {}", w.chars().take(300).collect::<String>());
        }
    }
    Ok(())
}
