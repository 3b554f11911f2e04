//! First and second screenings against the generators.
use w2n::screening::{self, Mode};
use w2n::wgen::Realization;

fn main() -> anyhow::Result<()> {
    let r = Realization::new(3, 1)?;
    let t = r.t()?.clone();
    for s in screening::first_screenings(&r.rd) {
        for (name, x) in [("E", &r.e), ("F", &r.f), ("H", &r.h), ("T", &t)] {
            let td = screening::commutes(&s, x, &r.rd, Mode::TotalDerivative)?;
            let j = screening::strict_pole_order(&s, x, &r.rd)?;
            let strict = screening::strict_coefficient(&s, x, &r.rd)?.is_zero();
            println!("{:<22} {}: commutes {}, {} vanishes {}", screening::describe(&s), name, td, screening::pole_name(j), strict);
        }
    }
    let (a, b) = screening::solve_dressed_coefficients(&r.rd, &r.e, &r.f)?;
    println!("dressed screening: ({}) Q+ + ({}) Q-", a, b);
    for s in screening::second_screenings(&r.rd, &r.e, &r.f, Some((a, b)))? {
        let ok = [&r.e, &r.h, &r.f].iter().all(|x| screening::commutes(&s, x, &r.rd, Mode::TotalDerivative).unwrap_or(false));
        println!("{:<40} commutes with E, H, F: {}", screening::describe(&s), ok);
    }
    Ok(())
}
