use proptest::prelude::*;
use survopt::fuzzy::{graded_mean, graded_mean_integral, membership, TrapezoidalFuzzy};

fn trapezoid() -> impl Strategy<Value = TrapezoidalFuzzy> {
    (0.1f64..100.0, 0.0f64..10.0, 0.0f64..10.0, 0.0f64..10.0)
        .prop_map(|(c, da, db, dd)| TrapezoidalFuzzy::new(c, c + da, c + da + db, c + da + db + dd))
}

#[test]
fn division_rejects_zero_touching_divisor() {
    let a = TrapezoidalFuzzy::new(1.0, 2.0, 3.0, 4.0);
    assert!(a.div(TrapezoidalFuzzy::new(0.0, 1.0, 2.0, 3.0)).is_err());
}

#[test]
fn membership_rejects_non_canonical() {
    assert!(membership(1.0, &TrapezoidalFuzzy::from([3.0, 2.0, 1.0, 0.0])).is_err());
}

proptest! {
    #[test]
    fn graded_mean_is_linear(x in trapezoid(), y in trapezoid(), k in 0.01f64..10.0) {
        let tol = 1e-12 * (1.0 + graded_mean(&x) + graded_mean(&y));
        prop_assert!((graded_mean(&(x + y)) - graded_mean(&x) - graded_mean(&y)).abs() <= tol);
        prop_assert!((graded_mean(&(x - y)) - graded_mean(&x) + graded_mean(&y)).abs() <= tol);
        prop_assert!((graded_mean(&x.scale(k)) - k * graded_mean(&x)).abs() <= k * tol);
    }

    #[test]
    fn operations_keep_shape(x in trapezoid(), y in trapezoid()) {
        prop_assert!((x + y).is_canonical());
        prop_assert!((x - y).is_canonical());
        prop_assert!((x * y).is_canonical());
        prop_assert!(x.div(y).unwrap().is_canonical());
        prop_assert_eq!(x - y, x + y.neg());
    }

    #[test]
    fn crisp_numbers_collapse(u in -100.0f64..100.0, v in 0.1f64..100.0) {
        let (a, b) = (TrapezoidalFuzzy::crisp(u), TrapezoidalFuzzy::crisp(v));
        prop_assert_eq!(a + b, TrapezoidalFuzzy::crisp(u + v));
        prop_assert_eq!(a - b, TrapezoidalFuzzy::crisp(u - v));
        prop_assert_eq!(a * b, TrapezoidalFuzzy::crisp(u * v));
        prop_assert_eq!(a.div(b).unwrap(), TrapezoidalFuzzy::crisp(u / v));
        prop_assert!((graded_mean(&a) - u).abs() <= 1e-12 * (1.0 + u.abs()));
    }

    #[test]
    fn graded_mean_matches_its_integral(x in trapezoid()) {
        let v = graded_mean_integral(&x, 1e-12).unwrap();
        prop_assert!((v - graded_mean(&x)).abs() <= 1e-9 * graded_mean(&x));
    }
}
