//! Level duality, dimension sums, rank-level duality and Gram identities.
use w2n::suites::identities;

fn main() {
    let cs = identities(5);
    let passed = cs.iter().filter(|c| c.status == w2n::report::Status::Pass).count();
    for c in cs.iter().filter(|c| c.id.contains("rank-level/3") || c.id.contains("duality/4")) {
        println!("[{}] {} ({})", c.status, c.id, c.anchor);
    }
    println!("{}/{} identities hold", passed, cs.len());
}
