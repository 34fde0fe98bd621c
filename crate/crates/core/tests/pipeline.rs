//! End-to-end: telescope each binomial power, then check its operator
//! against the exact coefficient tables.

use num_rational::BigRational as Rational;
use num_traits::Zero;

use franel::franel::{annihilation_check, default_n_from, franel};
use franel::hyperterm::binom_power_term;
use franel::telescoper::{analyze_structure, verify_certificate, zeilberger, TelescopeError};

#[test]
fn operators_have_predicted_shape_for_small_powers() {
    for s in 1..=6 {
        let term = binom_power_term(s).unwrap();
        let found = zeilberger(&term, 4).unwrap();
        assert!(verify_certificate(&term, &found.operator, &found.certificate), "s = {s}");
        let report = analyze_structure(&found.operator, &found.certificate, s);
        assert!(report.all_match(), "s = {s}: {report:?}");
        assert_eq!(default_n_from(&report), 0);
    }
}

#[test]
fn operator_annihilates_deformed_coefficients() {
    let term = binom_power_term(5).unwrap();
    let found = zeilberger(&term, 4).unwrap();
    let report = annihilation_check(5, &found.operator, 2, 0, 25).unwrap();
    assert!(report.all_zero(), "{:?}", report.violations.first());
    assert_eq!(report.checked, 3 * 26);
}

#[test]
fn franel_numbers_satisfy_found_recurrence() {
    let term = binom_power_term(3).unwrap();
    let op = zeilberger(&term, 3).unwrap().operator;
    let values: Vec<Rational> = (0..40).map(|n| Rational::from_integer(franel(3, n).unwrap())).collect();
    for n in 0..38 {
        assert!(op.apply(&values, n).unwrap().is_zero(), "n = {n}");
    }
}

#[test]
fn search_reports_every_attempt_when_bound_too_small() {
    let term = binom_power_term(6).unwrap();
    match zeilberger(&term, 2) {
        Err(TelescopeError::NotFound { attempted }) => {
            assert_eq!(attempted, vec![1, 2]);
        }
        other => panic!("expected NotFound, got {other:?}"),
    }
}
