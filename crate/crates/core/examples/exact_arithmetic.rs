//! Rational functions of the level and exact linear solves.
use w2n::exact::{rat, MatK, RatK, Solution};

fn main() -> anyhow::Result<()> {
    let k = RatK::k();
    let x = &(&k + &RatK::one()) / &(&(&k * &k) - &RatK::one());
    println!("(k+1)/(k^2-1) = {}", x);
    println!("at k = 3: {}", x.eval(&rat(3, 1))?);
    println!("shifted k -> k+1: {}", x.substitute(&RatK::k_plus(1))?);

    let a = MatK::from_rows(vec![vec![k.clone(), RatK::one()], vec![RatK::one(), k.clone()]]);
    println!("det = {}", a.det()?);
    if let Solution::Unique(s) = a.solve(&[RatK::one(), RatK::zero()])? {
        println!("solution: [{}, {}]", s[0], s[1]);
    }
    Ok(())
}
