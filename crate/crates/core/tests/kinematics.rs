use diffeo::kinematics::{edge_atom, legs_of, square, ExternalConfig, Momentum};
use diffeo::algebra::Symbol;
use proptest::prelude::*;

fn config() -> impl Strategy<Value = ExternalConfig> {
    (3usize..=7).prop_flat_map(|n| {
        prop::collection::btree_set(1..=n, 0..=n.min(3)).prop_map(move |off| ExternalConfig::new(n, off).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conservation_of_atoms(cfg in config(), bits in any::<u32>()) {
        let n = cfg.n_legs();
        let mask = bits & cfg.full_mask();
        prop_assume!(mask != 0 && mask != cfg.full_mask());
        let inside = Momentum::of_mask(&cfg, mask);
        let outside = Momentum::of_mask(&cfg, cfg.full_mask() & !mask);
        match (edge_atom(&inside, &cfg), edge_atom(&outside, &cfg)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => prop_assert!(mask.count_ones() == 1 || n - (mask.count_ones() as usize) == 1),
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn square_is_quadratic(cfg in config(), coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let q = Momentum::new(coeffs[..cfg.n_legs() - 1].to_vec());
        let four = square(&q, &cfg).unwrap().scale(&diffeo::algebra::rat(4));
        prop_assert_eq!(square(&q.scaled(2), &cfg).unwrap(), four);
    }

    #[test]
    fn invariants_avoid_forbidden_symbols(cfg in config(), bits in any::<u32>()) {
        let mask = bits & cfg.full_mask();
        prop_assume!(mask.count_ones() >= 2 && (cfg.full_mask() & !mask).count_ones() >= 2);
        let atom = edge_atom(&Momentum::of_mask(&cfg, mask), &cfg).unwrap();
        for s in atom.symbols() {
            for i in 1..=cfg.n_legs() {
                prop_assert!(s != Symbol::s(i, i));
                if !cfg.is_offshell(i) {
                    prop_assert!(s != Symbol::x(i));
                }
            }
        }
        prop_assert!(legs_of(mask).count() >= 2);
    }
}
