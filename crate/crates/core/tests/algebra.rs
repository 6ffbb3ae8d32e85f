use diffeo::algebra::{rat, Bindings, ExactFraction, Monomial, MultiPoly, Symbol};
use proptest::prelude::*;

fn symbols() -> [Symbol; 4] {
    [Symbol::a(1), Symbol::a(2), Symbol::x(1), Symbol::M2]
}

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-20i64..=20, prop::collection::vec(0u32..3, 4)), 0..max_terms).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|(c, exps)| {
            let m = Monomial::from_factors(symbols().into_iter().zip(exps));
            (m, rat(c))
        }))
    })
}

/// Non-constant polynomial with a linear part, so it is never zero.
fn atom_strategy() -> impl Strategy<Value = MultiPoly> {
    (1i64..=5, -5i64..=5, -5i64..=5).prop_map(|(a, b, c)| {
        MultiPoly::var(Symbol::x(1)).scale(&rat(a)) + MultiPoly::var(Symbol::a(1)).scale(&rat(b)) + MultiPoly::int(c)
    })
}

fn point_strategy() -> impl Strategy<Value = Bindings> {
    prop::collection::vec((-50i64..=50, 1i64..=9), 4).prop_map(|v| {
        symbols()
            .into_iter()
            .zip(v)
            .map(|(s, (n, d))| (s, diffeo::algebra::ratio(n, d)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(p in poly_strategy(5), q in poly_strategy(5), r in poly_strategy(5)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(q.clone() + r.clone()), &p * &q + &p * &r);
        prop_assert_eq!((p.clone() + q.clone()) + r.clone(), p.clone() + (q.clone() + r.clone()));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((p.clone() - p.clone()).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(p in poly_strategy(6)) {
        let text = p.to_string();
        let back: MultiPoly = text.parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn evaluation_is_multiplicative(p in poly_strategy(4), q in poly_strategy(4), pt in point_strategy()) {
        let lhs = (&p * &q).evaluate(&pt).unwrap();
        prop_assert_eq!(lhs, p.evaluate(&pt).unwrap() * q.evaluate(&pt).unwrap());
    }

    #[test]
    fn exact_division_by_an_atom(p in poly_strategy(4), atom in atom_strategy()) {
        prop_assert_eq!((&p * &atom).exact_div(&atom), Some(p));
    }

    #[test]
    fn fraction_arithmetic_commutes_with_evaluation(
        p in poly_strategy(3),
        q in poly_strategy(3),
        a in atom_strategy(),
        b in atom_strategy(),
        pt in point_strategy(),
    ) {
        let f = ExactFraction::new(p, [a.clone()]).unwrap();
        let g = ExactFraction::new(q, [b.clone(), a.clone()]).unwrap();
        let (da, db) = (a.evaluate(&pt).unwrap(), b.evaluate(&pt).unwrap());
        prop_assume!(da != rat(0) && db != rat(0));
        let (fv, gv) = (f.evaluate(&pt).unwrap(), g.evaluate(&pt).unwrap());
        prop_assert_eq!(f.add(&g).evaluate(&pt).unwrap(), fv.clone() + gv.clone());
        prop_assert_eq!(f.mul(&g).evaluate(&pt).unwrap(), fv * gv);
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn cancelled_atoms_leave_the_denominator(p in poly_strategy(3), a in atom_strategy()) {
        let f = ExactFraction::new(&p * &a, [a.clone()]).unwrap();
        prop_assert_eq!(f.as_poly(), Some(&p));
    }

    #[test]
    fn normalizing_is_idempotent(p in poly_strategy(3), a in atom_strategy(), b in atom_strategy()) {
        let f = ExactFraction::new(&p * &b, [a, b]).unwrap();
        let once = f.normalized();
        prop_assert_eq!(once.normalized(), once);
    }
}
