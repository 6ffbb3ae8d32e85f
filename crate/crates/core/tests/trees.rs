use diffeo::bell::b_closed_form;
use diffeo::trees::{
    amplitude_at, enumerate_trees, has_grading, on_shell_point, tree_count, trees_by_insertion, verify_vanishing,
    Mode, Strategy as Sum,
};
use diffeo::kinematics::ExternalConfig;
use proptest::prelude::*;

#[test]
fn census_against_insertion_generator() {
    for (n, want) in (3..=7).zip([1u128, 4, 26, 236, 2752]) {
        assert_eq!(enumerate_trees(n).unwrap().len() as u128, want, "n={n}");
        assert_eq!(trees_by_insertion(n).unwrap().len() as u128, want, "n={n}");
        assert_eq!(tree_count(n), want);
    }
}

#[test]
fn b_is_homogeneous_in_the_grading() {
    for n in 1..=8 {
        assert!(has_grading(&b_closed_form(n).unwrap(), n), "b{n}");
    }
}

#[test]
fn symbolic_vanishing_to_five_legs() {
    for n in 3..=5 {
        let r = verify_vanishing(n, &Mode::Symbolic).unwrap();
        assert!(r.is_pass(), "{r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn on_shell_sums_vanish_at_random_points(n in 6usize..=7, seed in any::<u64>()) {
        let cfg = ExternalConfig::on_shell(n).unwrap();
        let pt = on_shell_point(&cfg, seed).unwrap();
        prop_assert!(amplitude_at(&cfg, &pt, Sum::Grouped).unwrap().is_zero());
    }

    #[test]
    fn summation_strategies_agree(n in 4usize..=6, off in 1usize..=3, seed in any::<u64>()) {
        let cfg = ExternalConfig::new(n, 1..=off.min(n)).unwrap();
        let pt = on_shell_point(&cfg, seed).unwrap();
        prop_assert_eq!(
            amplitude_at(&cfg, &pt, Sum::Grouped).unwrap(),
            amplitude_at(&cfg, &pt, Sum::PerTree).unwrap()
        );
    }
}
