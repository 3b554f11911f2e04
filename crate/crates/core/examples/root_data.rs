//! Labels and Gram matrix of a realization `n[m]`.
use w2n::lattice::{central_charge, ell, RootData};

fn main() -> anyhow::Result<()> {
    let (n, m) = (4, 2);
    let rd = RootData::new(n, m)?;
    let labels = rd.labels();
    println!("{}[{}]: {}", n, m, labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "));
    for a in labels {
        let row: Vec<String> = labels.iter().map(|b| rd.gram_entry(*a, *b).to_string()).collect();
        println!("  {:>4} | {}", a.to_string(), row.join("  "));
    }
    println!("det = {}", rd.gram().det()?);
    println!("l_{} = {}, c_{} = {}", n, ell(n), n, central_charge(n));
    println!("excluded levels: {:?}", rd.exclusions().iter().map(|x| x.to_string()).collect::<Vec<_>>());
    Ok(())
}
