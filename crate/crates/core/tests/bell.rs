use diffeo::algebra::{factorial, MultiPoly, Rational, Series, Symbol};
use diffeo::bell::{bell, bell_by_composition, bell_by_partitions, formal_sequence};
use num_bigint::BigInt;
use proptest::prelude::*;

fn lambda() -> MultiPoly {
    MultiPoly::var(Symbol::formal("lambda").unwrap())
}

#[test]
fn recurrence_matches_partition_enumeration() {
    let x = formal_sequence("y", 10);
    for n in 1..=10 {
        for k in 1..=n {
            assert_eq!(bell(n, k, &x).unwrap(), bell_by_partitions(n, k, &x).unwrap(), "B({n},{k})");
        }
    }
}

#[test]
fn series_power_coefficients() {
    let x = formal_sequence("y", 10);
    for k in 1..=10 {
        let f = Series::from_coeffs(
            (0..=10).map(|j| {
                if j == 0 {
                    MultiPoly::zero()
                } else {
                    x[j - 1].scale(&Rational::new(BigInt::from(1), factorial(j)))
                }
            }),
            11,
        );
        let fk = f.pow(k as u32).scale(&Rational::new(BigInt::from(1), factorial(k)));
        for n in k..=10 {
            let want = bell(n, k, &x).unwrap().scale(&Rational::new(BigInt::from(1), factorial(n)));
            assert_eq!(fk.coeff(n), want, "n={n} k={k}");
            assert_eq!(bell_by_composition(n, k, &x).unwrap(), bell(n, k, &x).unwrap());
        }
    }
}

#[test]
fn homogeneity_with_formal_lambda() {
    let x = formal_sequence("y", 8);
    let scaled: Vec<MultiPoly> = x.iter().enumerate().map(|(j, xj)| lambda().pow(j as u32 + 1) * xj).collect();
    for n in 1..=8 {
        for k in 1..=n {
            let lhs = bell(n, k, &scaled).unwrap();
            let rhs = lambda().pow(n as u32) * bell(n, k, &x).unwrap();
            assert_eq!(lhs, rhs, "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_every_argument(n in 1usize..=8, k_off in 0usize..8, c in -4i64..=4) {
        let k = 1 + k_off % n;
        let x = formal_sequence("y", n);
        let cx: Vec<MultiPoly> = x.iter().map(|v| v.scale(&diffeo::algebra::rat(c))).collect();
        let lhs = bell(n, k, &cx).unwrap();
        let rhs = bell(n, k, &x).unwrap().scale(&diffeo::algebra::rat(c.pow(k as u32)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_arguments_count_partitions(n in 1usize..=9, k_off in 0usize..9) {
        let k = 1 + k_off % n;
        let ones = vec![MultiPoly::one(); n];
        let mut count = 0u64;
        diffeo::bell::for_each_set_partition(n, k, &mut |_| count += 1);
        prop_assert_eq!(bell(n, k, &ones).unwrap(), MultiPoly::int(count as i64));
    }
}
