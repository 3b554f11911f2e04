//! Free-field vertex operators and their operator product expansions,
//! computed by Wick contraction with exact coefficients.

mod field;
mod fit;
mod ope;
mod poly;

pub use field::VertexField;
pub use fit::{combine, express, fit, kernel};
pub use ope::{
    bracket, exp_series, normal_product, normal_product_nested, ope, singular, specialize_field, specialize_ope,
    total_derivative_solve, LaurentOpe,
};
pub use poly::{monomials_of_weight, DiffMono, Factor, WickPoly};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, rat, RatK};
    use crate::lattice::{Label, Momentum, RootData};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rd() -> RootData {
        RootData::new(3, 1).unwrap()
    }

    fn pair(seed: u64) -> (VertexField, VertexField) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rd = rd();
        (crate::oracle::random_field(&mut rng, &rd), crate::oracle::random_field(&mut rng, &rd))
    }

    fn pole(s: &std::collections::BTreeMap<i64, VertexField>, j: i64) -> VertexField {
        s.get(&j).cloned().unwrap_or_else(VertexField::zero)
    }

    #[test]
    fn currents_pair_through_the_gram_matrix() {
        let rd = rd();
        for a in rd.labels() {
            for b in rd.labels() {
                let s = singular(&VertexField::current(*a), &VertexField::current(*b), &rd).unwrap();
                let want = rd.gram_entry(*a, *b);
                assert_eq!(pole(&s, 2), VertexField::constant(want));
                assert!(pole(&s, 1).is_zero());
            }
        }
    }

    #[test]
    fn exponentials() {
        let rd = rd();
        let p = Momentum::basis(Label::QP);
        let a = VertexField::current(Label::a(1));
        // A(z) e^p(w) = (b_A, p) e^p(w)/(z-w)
        let s = singular(&a, &VertexField::exp(p.clone()), &rd).unwrap();
        assert_eq!(pole(&s, 1), VertexField::exp(p.clone()).scale(&rd.pair_label(Label::a(1), &p)));
        // (psi+, psi+) = 1: e^p(z) e^{-p}(w) = 1/(z-w) + ...
        let o = ope(&VertexField::exp(p.clone()), &VertexField::exp(p.neg()), &rd, 0).unwrap();
        assert_eq!(o.offset(), &RatK::from_i64(-1));
        assert_eq!(o.pole(1).unwrap(), VertexField::identity());
        assert_eq!(o.max_pole().unwrap(), 1);
    }

    #[test]
    fn total_derivatives_are_recognized() {
        let rd = rd();
        let (f, _) = pair(3);
        let d = f.derivative();
        let s = total_derivative_solve(&d, &rd).unwrap().expect("derivative");
        assert_eq!(s.derivative(), d);
        assert!(total_derivative_solve(&VertexField::current(Label::QP), &rd).unwrap().is_none());
    }

    #[test]
    fn specialization_rejects_excluded_levels() {
        let rd = rd();
        let f = VertexField::current(Label::QP).scale(&RatK::k());
        assert!(specialize_field(&f, &rat(-3, 1), &rd).is_err());
        assert_eq!(specialize_field(&f, &rat(2, 1), &rd).unwrap(), VertexField::current(Label::QP).scale_i(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn derivative_compatibility(seed in any::<u64>()) {
            let rd = rd();
            let (f, g) = pair(seed);
            let s = singular(&f, &g, &rd).unwrap();
            let sd = singular(&f.derivative(), &g, &rd).unwrap();
            let sr = singular(&f, &g.derivative(), &rd).unwrap();
            let top = s.keys().max().copied().unwrap_or(0) + 2;
            for j in 1..=top {
                prop_assert_eq!(pole(&sd, j), pole(&s, j - 1).scale(&RatK::from_i64(-(j - 1))));
                prop_assert_eq!(pole(&sr, j), &pole(&s, j).derivative() + &pole(&s, j - 1).scale(&RatK::from_i64(j - 1)));
            }
        }

        #[test]
        fn skew_symmetry(seed in any::<u64>()) {
            let rd = rd();
            let (f, g) = pair(seed);
            let fg = singular(&f, &g, &rd).unwrap();
            let gf = singular(&g, &f, &rd).unwrap();
            let eps = if rd.pairing(f.momentum(), g.momentum()).as_integer().unwrap() % 2 == 0 { 1 } else { -1 };
            let top = fg.keys().chain(gf.keys()).max().copied().unwrap_or(0);
            for p in 1..=top {
                let mut want = VertexField::zero();
                for i in 0..=(top - p) {
                    let sign = if (p + i) % 2 == 0 { 1 } else { -1 };
                    let c = RatK::constant(rat(sign * eps, 1) / crate::exact::BigRat::from_integer(factorial(i as u32)));
                    want = &want + &pole(&fg, p + i).derivative_n(i as u32).scale(&c);
                }
                prop_assert_eq!(pole(&gf, p), want);
            }
        }

        #[test]
        fn leibniz_rule(seed in any::<u64>()) {
            let rd = rd();
            let (f, g) = pair(seed);
            let fg = normal_product(&f, &g, &rd).unwrap();
            let rhs = &normal_product(&f.derivative(), &g, &rd).unwrap() + &normal_product(&f, &g.derivative(), &rd).unwrap();
            prop_assert_eq!(fg.derivative(), rhs);
        }
    }
}
