use std::sync::Arc;

use boundcalc::relations::{
    cmp_ae, cmp_growth, dedupe_it, is_subhomogeneous, is_superlinear, is_tame, it_embed, le_it,
    le_pow, ll_pow, lt_it, Env, GrowthClass,
};
use boundcalc::{Bound, BoundExpr, ExactFn, Iterated, Outcome, Witness};
use num_bigint::BigUint;

fn e(s: &str) -> BoundExpr {
    BoundExpr::parse(s).unwrap()
}

fn env() -> Env {
    Env::standard()
}

#[test]
fn ae_examples() {
    let env = env();
    let v = cmp_ae(&e("n"), &e("2*n"), &env);
    assert_eq!(v.outcome, Outcome::Holds);
    assert_eq!(
        v.witness,
        Witness::Threshold {
            n0: "0".into(),
            upper_bound: true
        }
    );
    assert!(cmp_ae(&e("2*n"), &e("n"), &env).fails());
    // n + 100 <= 2n exactly from n = 100 on.
    let v = cmp_ae(&e("n+100"), &e("2*n"), &env);
    assert_eq!(v.outcome, Outcome::Holds);
    assert_eq!(
        v.witness,
        Witness::Threshold {
            n0: "100".into(),
            upper_bound: true
        }
    );
}

#[test]
fn growth_examples() {
    let env = env();
    assert_eq!(
        cmp_growth(&e("n*log"), &e("n^2"), &env).class,
        GrowthClass::StrictlyBelow
    );
    assert_eq!(
        cmp_growth(&e("n^2"), &e("n*log"), &env).class,
        GrowthClass::StrictlyAbove
    );
    let g = cmp_growth(&e("2*n"), &e("3*n"), &env);
    assert_eq!(g.class, GrowthClass::SameOrder);
    assert_eq!(g.constant, Some(BigUint::from(2u32)));
}

#[test]
fn superlinear_examples() {
    let env = env();
    assert!(is_superlinear(&e("type1(log)"), &env).holds());
    assert!(is_superlinear(&e("2*n"), &env).fails());
    assert!(is_superlinear(&e("n"), &env).fails());
}

#[test]
fn subhomogeneous_examples() {
    let env = env();
    let v = is_subhomogeneous(&e("n^2"), &env, &[2, 3]);
    assert!(v.holds(), "{v}");
    assert_eq!(
        v.witness,
        Witness::Constants {
            pairs: vec![("2".into(), "4".into()), ("3".into(), "9".into())]
        }
    );
    assert!(is_subhomogeneous(&e("n*log"), &env, &[2, 3]).holds());
    assert!(is_subhomogeneous(&e("exp2"), &env, &[2]).fails());
}

#[test]
fn power_examples() {
    let env = env();
    assert!(ll_pow(&e("log{2}"), &e("log"), &env).holds());
    let v = ll_pow(&e("log"), &e("log"), &env);
    assert!(v.fails());
    assert!(
        matches!(
            v.witness,
            Witness::Counterexample { .. } | Witness::Scheme { .. }
        ),
        "{v}"
    );
    assert!(ll_pow(&e("2"), &e("log"), &env).holds());
    assert!(le_pow(&e("log^2"), &e("log"), &env).holds());
    assert!(le_pow(&e("log"), &e("log^2"), &env).holds());
}

#[test]
fn iteration_examples() {
    let env = env();
    assert!(lt_it(&e("type1(log{2})"), &e("type1(log)"), &env).holds());
    assert!(le_it(&e("iter(type1(log),3)"), &e("type1(log)"), &env).holds());
    assert!(le_it(&e("type1(log)"), &e("iter(type1(log),3)"), &env).holds());
    assert!(le_it(&e("n"), &e("2*n"), &env).holds());
    assert!(le_it(&e("2*n"), &e("n"), &env).fails());
    assert!(le_it(&e("type1(log)"), &e("type2(2)"), &env).holds());
}

#[test]
fn embedding_examples() {
    let env = env();
    assert!(it_embed(&[e("type1(log)")], &[e("iter(type1(log),2)")], &env).holds());
    assert!(it_embed(&[e("n")], &[e("2*n")], &env).fails());
    let d = dedupe_it(
        &[e("type1(log)"), e("iter(type1(log),2)"), e("type1(log{2})")],
        &env,
    );
    assert_eq!(d.len(), 2);
    assert_eq!(d[0], e("type1(log{2})"));
}

fn parity() -> ExactFn {
    ExactFn::new("beta1", |n: &BigUint| {
        let sq = n * n;
        if n.bit(0) {
            sq << 1u32
        } else {
            sq
        }
    })
}

#[test]
fn tameness_examples() {
    let env = env();
    let (a, b) = (e("2*n"), e("n^2"));
    assert!(is_tame(&[&a, &b], &env).holds());
    let n = e("n");
    assert!(is_tame(&[&n, &n], &env).holds());

    let b1 = Arc::new(parity());
    let b2 = e("n^4");
    assert!(is_tame(&[&n, b1.as_ref(), &b2], &env).holds());
    let b1_2 = Iterated::new(b1.clone() as Arc<dyn Bound>, 2);
    let v = is_tame(&[&n, b1.as_ref(), &b2, &b1_2], &env);
    assert!(v.fails());
    match v.witness {
        Witness::Accumulation {
            modulus,
            limsup,
            liminf,
        } => {
            assert_eq!(modulus, 2);
            assert_eq!((limsup.as_str(), liminf.as_str()), ("4", "1"));
        }
        w => panic!("{w:?}"),
    }
}
