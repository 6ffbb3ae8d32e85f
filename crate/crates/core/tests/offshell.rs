use diffeo::algebra::{MultiPoly, Symbol};
use diffeo::bell::b_closed_form;
use diffeo::offshell::{
    offshell_amplitude, vertex_completeness_defect, verify_dual_reading, verify_er_split, verify_twice_marked,
};

#[test]
fn marked_vertices_are_complete() {
    for k in 3..=8 {
        assert!(vertex_completeness_defect(k).unwrap().is_zero(), "valence {k}");
    }
}

#[test]
fn one_offshell_leg_gives_x_times_b() {
    for n in 3..=6 {
        let amp = offshell_amplitude(n, [n]).unwrap();
        let poly = amp.as_poly().expect("no propagators survive");
        let quotient = poly.exact_div(&MultiPoly::var(Symbol::x(n))).expect("divisible by x_n");
        assert!(quotient.is_kinematics_free(), "n={n}: {quotient}");
        assert_eq!(quotient, b_closed_form(n - 1).unwrap(), "n={n}");
    }
}

#[test]
fn twice_marked_edges_divide_exactly() {
    for n in 4..=5 {
        let r = verify_twice_marked(n).unwrap();
        assert!(r.is_pass(), "{r}");
    }
}

#[test]
fn split_and_reading() {
    for n in 3..=5 {
        assert!(verify_er_split(n).unwrap().is_pass());
    }
    let r = verify_dual_reading(4, &[1, 2, 3]).unwrap();
    assert!(r.is_pass(), "{r}");
    assert_eq!(r.witness, "shifted");
}

#[test]
fn two_offshell_coefficient_factorizes() {
    // Coefficient of x1 x2 at n = 4: b-factors from each side, joined by one propagator.
    let amp = offshell_amplitude(4, [1, 2]).unwrap();
    let x12 = amp.numerator().coefficient_of(Symbol::x(1), 1).coefficient_of(Symbol::x(2), 1);
    assert!(!x12.is_zero());
    assert!(amp.atoms().count() >= 1);
}
