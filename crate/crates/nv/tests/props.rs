//! Generated-input invariants of the spin model.

use fluxtrap_magnetics::Vec3;
use fluxtrap_nv::*;
use fluxtrap_numerics::eigenvalues_hermitian_3x3;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Vec3> {
    (
        -0.02..0.02_f64,
        -0.02..0.02_f64,
        -0.02..0.02_f64,
    )
        .prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transitions_are_even_in_the_field(b in field_strategy()) {
        let zm = ZeemanModel::default();
        let t1 = transition_frequencies(&zm, b, Vec3::Z).unwrap();
        let t2 = transition_frequencies(&zm, -b, Vec3::Z).unwrap();
        prop_assert!((t1.lower - t2.lower).abs() <= 1e-9 * t1.upper.abs());
        prop_assert!((t1.upper - t2.upper).abs() <= 1e-9 * t1.upper.abs());
    }

    #[test]
    fn level_sum_is_twice_the_zero_field_splitting(b in field_strategy()) {
        let zm = ZeemanModel::default();
        let h = hamiltonian(&zm, b);
        let levels = eigenvalues_hermitian_3x3(&h).unwrap();
        let expect = 2.0 * zm.zero_field_splitting_hz;
        prop_assert!((levels.iter().sum::<f64>() - expect).abs() <= 1e-6 * expect);
    }

    #[test]
    fn splitting_grows_with_field_magnitude(
        b in field_strategy(),
        scale in 1.1..3.0_f64,
    ) {
        prop_assume!(b.norm() > 1e-4);
        let zm = ZeemanModel::default();
        let small = transition_frequencies(&zm, b, Vec3::Z).unwrap();
        let large = transition_frequencies(&zm, b * scale, Vec3::Z).unwrap();
        prop_assert!(large.splitting() > small.splitting());
    }
}
