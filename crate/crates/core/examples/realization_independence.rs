//! Structure constants of the U-current operator products, compared across
//! the realizations of one rank.
use w2n::independence::realization_independence;

fn main() {
    for c in realization_independence(3) {
        println!("[{}] {}", c.status, c.id);
        if let Some(w) = c.witness {
            println!("    {}", w);
        }
    }
}
