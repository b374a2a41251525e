use boundcalc::factor::{validate_factor, Role};
use boundcalc::order::{export_order, CantorSeq};
use boundcalc::relations::{is_tame, le_it, ll_pow, Env};
use boundcalc::universe::{catalog, descending_chain, generate, lookup, Address, ChainType};
use boundcalc::{Bound, BoundExpr, Numeral, UniverseError};

fn e(s: &str) -> BoundExpr {
    BoundExpr::parse(s).unwrap()
}

fn addr(s: &str) -> Address {
    s.parse().unwrap()
}

#[test]
fn type1_gap_depth_one() {
    let env = Env::standard();
    let chain = generate(ChainType::Type1, 1, 4, Some((e("2"), e("n"))), &env).unwrap();
    let addrs: Vec<String> = chain
        .entries
        .iter()
        .map(|x| x.address.to_string())
        .collect();
    assert_eq!(addrs, ["Λ", "1", "top"]);
    let mid = lookup(&chain, &addr("1")).unwrap();
    assert_eq!(mid.factor.expr, e("mid(2,n)"));
    assert_eq!(mid.parents, Some((addr(""), addr("top"))));
    let v = mid
        .factor
        .expr
        .eval(&Numeral::from_u64(1 << 16), &env.ar)
        .unwrap();
    assert_eq!(v, Numeral::from_u64(16));
    assert!(matches!(
        lookup(&chain, &addr("01")),
        Err(UniverseError::UnknownAddress(_))
    ));
}

#[test]
fn type1_gap_depth_two() {
    let env = Env::standard();
    let chain = generate(ChainType::Type1, 2, 4, Some((e("2"), e("n"))), &env).unwrap();
    assert_eq!(chain.entries.len(), 5);
    assert_eq!(
        lookup(&chain, &addr("01")).unwrap().factor.expr,
        e("mid(2,mid(2,n))")
    );
    assert_eq!(
        lookup(&chain, &addr("11")).unwrap().factor.expr,
        e("mid(mid(2,n),n)")
    );
    let json = chain.to_json();
    assert_eq!(json["entries"].as_array().unwrap().len(), 5);
    assert_eq!(json["entries"][1]["address"], "01");
    assert!(chain.to_dot().starts_with("digraph"));
}

#[test]
fn base_chains() {
    let env = Env::standard();
    let t1 = generate(ChainType::Type1, 0, 4, None, &env).unwrap();
    let exprs: Vec<String> = t1.entries.iter().map(|x| x.bound.to_string()).collect();
    assert_eq!(
        exprs,
        [
            "type1(2)",
            "type1(logstar)",
            "type1(log{4})",
            "type1(log{3})",
            "type1(log{2})",
            "type1(log)",
            "type1(n)"
        ]
    );
    assert_eq!(t1.entries.last().unwrap().address, Address::Top);
    let t2 = generate(ChainType::Type2, 0, 4, None, &env).unwrap();
    assert_eq!(t2.entries.len(), 2);
}

#[test]
fn combined_chain_is_truncated_with_a_limit_gap() {
    let env = Env::standard();
    let chain = generate(ChainType::Combined, 0, 4, None, &env).unwrap();
    assert_eq!(chain.params.truncated_at, Some(4));
    assert!(chain.params.limit_gap.is_some());
    // n·n and n^2 share one position.
    let shared: Vec<_> = chain
        .entries
        .iter()
        .filter(|x| x.exponent.is_some())
        .collect();
    assert_eq!(shared.len(), 1);
    assert_eq!(shared[0].factor.expr, BoundExpr::Id);
    assert_eq!(shared[0].exponent.as_ref().unwrap().expr, e("2"));
}

#[test]
fn addresses_agree_with_iteration_order() {
    let env = Env::standard();
    let chain = generate(ChainType::Combined, 1, 4, None, &env).unwrap();
    let n = chain.entries.len();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&chain.entries[i], &chain.entries[j]);
            let le = le_it(&a.bound, &b.bound, &env);
            assert_eq!(
                a.address <= b.address,
                le.holds(),
                "{} {} {:?}",
                a.bound,
                b.bound,
                le.outcome
            );
        }
    }
}

#[test]
fn gap_errors() {
    let env = Env::standard();
    let r = generate(ChainType::Type1, 1, 4, Some((e("n"), e("2"))), &env);
    assert!(
        matches!(r, Err(UniverseError::GapNotOrdered { .. })),
        "{r:?}"
    );
    let r = generate(ChainType::Type1, 99, 4, None, &env);
    assert!(matches!(r, Err(UniverseError::DepthExceeded { .. })));
}

#[test]
fn descending_chains() {
    let env = Env::standard();
    let f = |s: &str| validate_factor(&e(s), Role::Type1Factor, &env).unwrap();
    let chain = descending_chain(&f("log"), &f("log"), 4, &env).unwrap();
    let exprs: Vec<String> = chain.iter().map(|x| x.expr.to_string()).collect();
    assert_eq!(exprs, ["log", "log{2}", "log{3}", "log{4}"]);
    for pair in chain.windows(2) {
        assert!(ll_pow(&pair[1].expr, &pair[0].expr, &env).holds());
    }
    assert!(descending_chain(&f("n"), &f("log"), 3, &env).is_err());
    assert!(descending_chain(&f("log"), &f("2"), 3, &env).is_err());
}

#[test]
fn named_set_catalog() {
    let c = catalog(4);
    assert_eq!(c.len(), 9);
    assert_eq!(c[0].representative, e("type1(2)"));
    assert_eq!(c[8].representative, e("exp2"));
}

#[test]
fn descending_chains_over_logstar() {
    let env = Env::standard();
    let f = |s: &str| validate_factor(&e(s), Role::Type1Factor, &env).unwrap();
    for (a1, want) in [
        ("log", ["logstar", "log(logstar)", "log{2}(logstar)"]),
        ("logstar", ["logstar", "iter(logstar,2)", "iter(logstar,3)"]),
    ] {
        let chain = descending_chain(&f(a1), &f("logstar"), 3, &env).unwrap();
        let exprs: Vec<String> = chain.iter().map(|x| x.expr.to_string()).collect();
        assert_eq!(exprs, want, "{a1}");
        for pair in chain.windows(2) {
            assert!(
                ll_pow(&pair[1].expr, &pair[0].expr, &env).holds(),
                "{a1}: {pair:?}"
            );
        }
    }
}

#[test]
fn generated_chain_with_identity_is_tame() {
    let env = Env::standard();
    let chain = generate(ChainType::Type1, 2, 4, Some((e("2"), e("n"))), &env).unwrap();
    let mut set = chain.bounds();
    set.push(BoundExpr::Id);
    let refs: Vec<&dyn Bound> = set.iter().map(|b| b as &dyn Bound).collect();
    let v = is_tame(&refs, &env);
    assert!(v.holds(), "{v}");
}

#[test]
fn export_lists_cuts_in_order() {
    let env = Env::standard();
    let chain = generate(ChainType::Type1, 2, 4, Some((e("2"), e("n"))), &env).unwrap();
    let x = export_order(&chain, &[]).unwrap();
    assert_eq!(x.cuts[0].cut, "bottom");
    assert_eq!(x.cuts[0].cantor.as_deref(), Some("(0)"));
    // Three internal entries, each with two principal cuts, then the whole chain.
    assert_eq!(x.cuts.len(), 1 + 2 * 3 + 1);
    assert!(x.cuts.last().unwrap().cantor.is_none());
    let codes: Vec<CantorSeq> = x
        .cuts
        .iter()
        .filter_map(|r| r.cantor.as_ref()?.parse().ok())
        .collect();
    assert!(codes.windows(2).all(|w| w[0] < w[1]), "{codes:?}");
    // Lower segments grow along the table.
    assert!(x
        .cuts
        .windows(2)
        .all(|w| w[0].lower.len() <= w[1].lower.len()));
    let vals: Vec<_> = x.chain["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["val"].clone())
        .collect();
    let looked: Vec<_> = chain
        .entries
        .iter()
        .map(|en| serde_json::json!(lookup(&chain, &en.address).unwrap().val))
        .collect();
    assert_eq!(vals, looked);
}
