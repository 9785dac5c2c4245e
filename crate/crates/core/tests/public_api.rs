use proptest::prelude::*;

use kmtheta::checks::closed_form_rhs;
use kmtheta::fixture;
use kmtheta::{Coset, EvenLattice, QuadratureSpec, TauPoint, ThetaContext, Vector};

fn ctx() -> ThetaContext {
    ThetaContext::new(
        fixture::fixture_lattice(),
        fixture::canonical_config(),
        QuadratureSpec::default(),
    )
    .unwrap()
}

#[test]
fn lattice_from_rows_matches_columns() {
    let r2 = 2f64.sqrt();
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { r2 } else { 0.0 }).collect())
        .collect();
    let l = EvenLattice::from_rows(fixture::split_space(), &rows).unwrap();
    assert_eq!(l, fixture::fixture_lattice());
    assert!(EvenLattice::from_rows(fixture::split_space(), &rows[..3]).is_err());
}

#[test]
fn cosets_cover_the_discriminant_group() {
    let c = ctx();
    let cosets = c.cosets().unwrap();
    assert_eq!(cosets.len() as u64, c.lattice().discriminant());
    assert!(cosets.iter().all(|m| m.is_dual(c.lattice())));
}

#[test]
fn completed_series_reports_its_truncation() {
    let c = ctx();
    let mu: Coset = "[1/2,0,1/2,0]".parse().unwrap();
    let tau = TauPoint::new(0.1, 1.2).unwrap();
    let v = c.completed_theta(&mu, tau, 3.0, 1e-3).unwrap();
    assert!(v.terms > 0 && v.tail_bound <= 1e-3 && v.value.norm().is_finite());
    assert!(c.completed_theta(&mu, tau, 0.25, 1e-12).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_closed_form_agrees_with_direct_sum(coords in prop::array::uniform4(-3.0f64..3.0)) {
        let c = ctx();
        let x = Vector::new(coords.to_vec());
        prop_assume!(c.config().is_regular(&x));
        let split = c.closed_form_i(&x.scale(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
        let direct = closed_form_rhs(c.config(), &x, c.spec()).unwrap();
        prop_assert!((split - direct).abs() <= 1e-10, "{} vs {}", split, direct);
    }
}
