mod common;

use boundcalc::certify::{
    closure, partition_max, regular_check, superadditivity_violation, BoundSetSchema,
};
use boundcalc::growth::form_of;
use boundcalc::relations::{
    cmp_ae, cmp_growth, is_superlinear, is_tame, le_it, le_pow, Env, GrowthClass,
};
use boundcalc::universe::{catalog, generate, ChainType};
use boundcalc::{Arith, Bound, BoundExpr, EvalError, Numeral, Outcome, Witness};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::sync::OnceLock;

fn env() -> &'static Env {
    static ENV: OnceLock<Env> = OnceLock::new();
    ENV.get_or_init(Env::standard)
}

fn e(s: &str) -> BoundExpr {
    BoundExpr::parse(s).unwrap()
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Samples like the wrapped expression but hides it, so only grid evidence is used.
struct Opaque(BoundExpr);

impl Bound for Opaque {
    fn label(&self) -> String {
        self.0.render()
    }

    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        self.0.eval(n, ar)
    }
}

fn exact_points() -> Vec<Numeral> {
    let mut v: Vec<Numeral> = (2..=40).map(Numeral::from_u64).collect();
    v.extend([64, 100, 257, 1000, 1 << 12, 1 << 16].map(Numeral::from_u64));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_is_deterministic(seed in any::<u64>()) {
        let b = common::bound(&mut rng(seed));
        for n in exact_points() {
            let (x, y) = (b.eval(&n, &env().ar), b.eval(&n, &env().ar));
            prop_assert_eq!(x.is_ok(), y.is_ok());
            if let (Ok(x), Ok(y)) = (x, y) {
                prop_assert_eq!(x, y);
            }
        }
        let g = common::bound(&mut rng(seed ^ 1));
        prop_assert_eq!(cmp_ae(&b, &g, env()), cmp_ae(&b, &g, env()));
    }

    #[test]
    fn iterates_are_pointwise_ordered(seed in any::<u64>()) {
        let b = common::superlinear(&mut rng(seed));
        for n in (2..=64u64).map(Numeral::from_u64) {
            let vals: Vec<Numeral> = (1..=3)
                .map(|k| BoundExpr::iterate(b.clone(), k).eval(&n, &env().ar))
                .take_while(|v| v.is_ok())
                .map(|v| v.unwrap())
                .collect();
            for w in vals.windows(2) {
                prop_assert_ne!(w[0].le(&w[1]), Some(false), "{} at {}", b, n);
            }
        }
    }

    #[test]
    fn le_pow_is_transitive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (common::factor(&mut r), common::factor(&mut r), common::factor(&mut r));
        let (ab, bc) = (le_pow(&a, &b, env()), le_pow(&b, &c, env()));
        if ab.holds() && bc.holds() {
            prop_assert!(!le_pow(&a, &c, env()).fails(), "{a} {b} {c}");
        }
    }

    #[test]
    fn le_it_is_transitive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (common::superlinear(&mut r), common::superlinear(&mut r), common::superlinear(&mut r));
        let (ab, bc) = (le_it(&a, &b, env()), le_it(&b, &c, env()));
        if ab.holds() && bc.holds() {
            prop_assert!(!le_it(&a, &c, env()).fails(), "{a} {b} {c}");
        }
        prop_assert!(!le_it(&a, &a, env()).fails(), "{a}");
    }

    /// Where normal forms and grid evidence both answer, they agree, unless
    /// the forms place the crossover beyond the grid and say so.
    #[test]
    fn symbolic_and_numeric_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (f, g) = (common::bound(&mut r), common::bound(&mut r));
        prop_assume!(form_of(&f).is_some() && form_of(&g).is_some());
        let sym = cmp_ae(&f, &g, env());
        let num = cmp_ae(&Opaque(f.clone()), &Opaque(g.clone()), env());
        let beyond = matches!(sym.witness, Witness::Symbolic { .. } | Witness::Rule { .. });
        if sym.outcome != Outcome::Unknown && num.outcome != Outcome::Unknown && !beyond {
            prop_assert_eq!(sym.outcome, num.outcome, "{} vs {}", f, g);
        }
    }

    /// Downward-closed address sets compare by their maxima exactly when
    /// their closures are nested, and closures are fixed points.
    #[test]
    fn closures_follow_maxima(i in 0usize..64, j in 0usize..64) {
        let chain = small_chain();
        let addrs: Vec<_> = chain.entries.iter().map(|x| x.address.clone()).collect();
        let (a, b) = (&addrs[i % addrs.len()], &addrs[j % addrs.len()]);
        let (ca, cb) = (closure(std::slice::from_ref(a), chain), closure(std::slice::from_ref(b), chain));
        prop_assert_eq!(closure(&ca, chain), ca.clone());
        let le = le_it(&chain.entries[i % addrs.len()].bound, &chain.entries[j % addrs.len()].bound, env()).holds();
        prop_assert_eq!(le, ca.iter().all(|x| cb.contains(x)));
    }
}

fn small_chain() -> &'static boundcalc::universe::UniverseChain {
    static CHAIN: OnceLock<boundcalc::universe::UniverseChain> = OnceLock::new();
    CHAIN.get_or_init(|| generate(ChainType::Type1, 2, 4, Some((e("2"), e("n"))), env()).unwrap())
}

#[test]
fn tower_identities() {
    let ar = &env().ar;
    for k in 1..=6u32 {
        let t = ar.tower(k).unwrap();
        assert_eq!(
            BoundExpr::Log.eval(&t, ar).unwrap(),
            ar.tower(k - 1).unwrap(),
            "log T({k})"
        );
        assert_eq!(
            BoundExpr::LogStar.eval(&t, ar).unwrap(),
            Numeral::from_u64(k as u64),
            "log* T({k})"
        );
    }
}

#[test]
fn tameness_with_identity_matches_small_multiples() {
    let fixtures: Vec<Vec<BoundExpr>> = vec![
        vec![e("type1(log)")],
        vec![e("type1(log)"), e("type1(logstar)")],
        vec![e("n^2"), e("type2(log)")],
        small_chain().bounds(),
    ];
    for b in fixtures {
        let mut with_n = b.clone();
        with_n.push(e("n"));
        let mut with_multiples = b.clone();
        with_multiples.extend([e("2*n"), e("3*n")]);
        let refs = |v: &[BoundExpr]| {
            is_tame(
                &v.iter().map(|x| x as &dyn Bound).collect::<Vec<_>>(),
                env(),
            )
            .outcome
        };
        let o = refs(&with_n);
        assert_ne!(o, Outcome::Unknown, "{b:?}");
        assert_eq!(o, refs(&with_multiples), "{b:?}");
    }
}

/// Catalog representatives: superlinear upper side plus O-below gives it-below,
/// and composing with a superlinear bound is strictly above.
#[test]
fn catalog_growth_cross_checks() {
    let reps: Vec<BoundExpr> = catalog(3).into_iter().map(|c| c.representative).collect();
    let (mut it_checked, mut comp_checked) = (0, 0);
    for b1 in &reps {
        for b2 in &reps {
            let g = cmp_growth(b1, b2, env()).class;
            let below = matches!(
                g,
                GrowthClass::StrictlyBelow | GrowthClass::SameOrder | GrowthClass::Below
            );
            if below && is_superlinear(b2, env()).holds() {
                assert!(le_it(b1, b2, env()).holds(), "{b1} ≤it {b2}");
                it_checked += 1;
            }
        }
    }
    let supers: Vec<&BoundExpr> = reps
        .iter()
        .filter(|b| is_superlinear(*b, env()).holds())
        .collect();
    for s in supers
        .iter()
        .filter(|b| form_of(b).is_some_and(|f| f.exp.is_none()))
    {
        for b in reps
            .iter()
            .filter(|b| form_of(b).is_some_and(|f| f.exp.is_none()))
        {
            let c = BoundExpr::compose((*s).clone(), b.clone());
            assert_eq!(
                cmp_growth(b, &c, env()).class,
                GrowthClass::StrictlyBelow,
                "{b} vs {c}"
            );
            comp_checked += 1;
        }
    }
    assert!(
        it_checked >= reps.len() && comp_checked > 0,
        "{it_checked} {comp_checked}"
    );
}

/// The iteration-set rule and a direct search for `β″ ≥ae β + β′∘β` agree.
#[test]
fn iteration_sets_pass_the_direct_check() {
    let mut checked = Vec::new();
    for c in catalog(3) {
        let beta = c.representative;
        let schema = BoundSetSchema::ItOf { beta: beta.clone() };
        if !regular_check(&schema, env()).is_certified()
            || form_of(&beta).is_some_and(|f| f.exp.is_some())
        {
            continue;
        }
        let it = |k: u32| {
            if k == 1 {
                beta.clone()
            } else {
                BoundExpr::iterate(beta.clone(), k)
            }
        };
        for i in 1..=2 {
            for j in 1..=2 {
                let lhs = BoundExpr::add(it(i), it(i + j));
                let found = (1..=i + j + 2).any(|m| cmp_ae(&lhs, &it(m), env()).holds());
                assert!(found, "{beta}: β⟨{i}⟩ + β⟨{j}⟩∘β⟨{i}⟩");
            }
        }
        checked.push(beta.render());
    }
    assert!(checked.len() >= 4, "{checked:?}");
}

#[test]
fn superadditive_bounds_take_a_single_block() {
    let ar = Arith::default();
    let mut checked = 0;
    for beta in [
        "type1(log)",
        "type1(logstar)",
        "type1(log{2})",
        "n^2",
        "type1(mid(2,log))",
    ] {
        let b = e(beta);
        if superadditivity_violation(&b, 128, &ar).unwrap().is_some() {
            continue;
        }
        checked += 1;
        for n in 1..=10 {
            let r = partition_max(&b, n, &ar).unwrap();
            assert_eq!(r.best, r.single_block, "{beta} at {n}");
        }
    }
    assert!(checked >= 3);
}
