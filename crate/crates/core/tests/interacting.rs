use diffeo::interacting::{
    bare_vertex_value, interacting_amplitude, interacting_amplitude_at, phi4_coefficients, phi4_coefficients_by_bell,
};
use proptest::prelude::*;

#[test]
fn fourth_power_and_bell_composition_agree() {
    assert_eq!(phi4_coefficients(10).unwrap(), phi4_coefficients_by_bell(10).unwrap());
}

#[test]
fn symbolic_amplitudes() {
    assert_eq!(interacting_amplitude(4, 1).unwrap().as_poly(), Some(&bare_vertex_value()));
    assert!(interacting_amplitude(5, 1).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn six_points_vanish(seed in any::<u64>()) {
        prop_assert!(interacting_amplitude_at(6, 1, seed).unwrap().is_zero());
    }

    #[test]
    fn four_points_are_the_bare_vertex(seed in any::<u64>()) {
        prop_assert_eq!(interacting_amplitude_at(4, 1, seed).unwrap(), bare_vertex_value());
    }
}
