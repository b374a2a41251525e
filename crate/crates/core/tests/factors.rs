use boundcalc::factor::{compose_factor, validate_bound, validate_factor, Role};
use boundcalc::relations::Env;
use boundcalc::{BoundExpr, FactorError, Numeral, Witness};

fn e(s: &str) -> BoundExpr {
    BoundExpr::parse(s).unwrap()
}

#[test]
fn bound_validation() {
    let env = Env::standard();
    assert!(validate_bound(&e("type1(log)"), &env).holds());
    let v = validate_bound(&e("5"), &env);
    assert!(v.fails());
    match v.witness {
        Witness::Counterexample { point, .. } => assert_eq!(point, "6"),
        w => panic!("{w:?}"),
    }
    assert!(validate_bound(&e("mlog"), &env).fails());
}

#[test]
fn factor_roles() {
    let env = Env::standard();
    assert!(validate_factor(&e("log"), Role::Type1Factor, &env).is_ok());
    assert!(validate_factor(&e("2"), Role::Type1Factor, &env).is_ok());
    assert!(matches!(
        validate_factor(&e("n"), Role::Type2Exponent, &env),
        Err(FactorError::RoleMismatch { .. })
    ));
    assert!(validate_factor(&e("type1(log)"), Role::Type1Factor, &env).is_err());
}

#[test]
fn factor_composition() {
    let env = Env::standard();
    let f = |s: &str| validate_factor(&e(s), Role::Type1Factor, &env).unwrap();
    let c = compose_factor(&f("log"), &f("n"), &env).unwrap();
    assert_eq!(c.factor.expr, BoundExpr::Log);
    let c = compose_factor(&f("log"), &f("log"), &env).unwrap();
    assert_eq!(c.factor.expr, BoundExpr::log_iter(2));
    assert!(c.strict_descent);
    let c = compose_factor(&f("log"), &f("logstar"), &env).unwrap();
    assert_eq!(c.factor.expr.render(), "log(logstar)");
    assert!(c.strict_descent);
}

#[test]
fn midpoint_gap_example() {
    // mid(2, n) at 2^16: mlog(2) = 1, mlog(2^16) = 16, msqrt(16) = 4, 2^4 = 16.
    let env = Env::standard();
    let m = BoundExpr::mid(BoundExpr::constant(2), BoundExpr::Id);
    let v = m.eval(&Numeral::from_u64(1 << 16), &env.ar).unwrap();
    assert_eq!(v, Numeral::from_u64(16));
}
