//! The Bershadsky-Polyakov operator products in every realization of rank 3.
use w2n::report::Status;
use w2n::tables::bp_table;

fn main() {
    for m in 0..=3 {
        for c in bp_table(m) {
            println!("[{}] {} ({})", c.status, c.id, c.anchor);
            if c.status == Status::Fail {
                println!("    {}", c.witness.unwrap_or_default());
            }
        }
    }
}
