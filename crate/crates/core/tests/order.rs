use std::cmp::Ordering;
use std::collections::BTreeSet;

use boundcalc::order::{
    cantor_to_cut, cut_to_cantor, lex_cmp, real_to_cantor, val, BinWord, CantorSeq, Cut, Dyadic,
};
use boundcalc::OrderError;
use num_bigint::BigUint;
use proptest::prelude::*;

fn w(s: &str) -> BinWord {
    s.parse().unwrap()
}

/// `val` scaled by 2^scale, summed letter by letter.
fn scaled_val(word: &BinWord, scale: u32) -> u64 {
    word.bits()
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| 1u64 << (scale - 1 - i as u32))
        .sum()
}

fn scaled(d: &Dyadic, scale: u32) -> u64 {
    let n: BigUint = d.num() << (scale - d.exp());
    u64::try_from(n).unwrap()
}

/// Lexicographic order on B read through the infinite sequence w 1 0^∞ without the
/// trailing 1, i.e. the prefix order of `w` padded with an end marker that sorts first.
fn oracle_lex(a: &BinWord, b: &BinWord) -> Ordering {
    let key = |x: &BinWord| {
        x.bits()
            .iter()
            .map(|&b| if b { 2u8 } else { 1 })
            .collect::<Vec<_>>()
    };
    key(a).cmp(&key(b))
}

#[test]
fn words_of_b() {
    assert!(matches!(
        BinWord::new(vec![true, false]),
        Err(OrderError::NotInB(_))
    ));
    assert_eq!(BinWord::all_up_to(3).len(), 1 + 1 + 2 + 4);
    assert_eq!(w("").to_string(), "Λ");
    assert_eq!(w("Λ"), BinWord::empty());
}

#[test]
fn val_is_monotone_for_words_up_to_length_10() {
    let words = BinWord::all_up_to(10);
    for pair in words.windows(2) {
        assert_eq!(lex_cmp(&pair[0], &pair[1]), Ordering::Less);
        assert!(val(&pair[0]) < val(&pair[1]), "{} {}", pair[0], pair[1]);
    }
    for x in &words {
        assert_eq!(scaled(&val(x), 10), scaled_val(x, 10), "{x}");
    }
}

#[test]
fn val_examples() {
    assert_eq!(val(&w("1")).to_string(), "1/2^1");
    assert_eq!(val(&w("01")).to_string(), "1/2^2");
    assert_eq!(val(&w("11")).to_string(), "3/2^2");
    assert_eq!(val(&w("")), Dyadic::zero());
}

#[test]
fn cut_anchors() {
    assert_eq!(cut_to_cantor(&Cut::Bottom).unwrap().to_string(), "(0)");
    assert_eq!(
        cut_to_cantor(&Cut::Incl(w("101"))).unwrap().to_string(),
        "101(0)"
    );
    assert_eq!(
        cut_to_cantor(&Cut::Excl(w("101"))).unwrap().to_string(),
        "100(1)"
    );
    assert_eq!(
        cantor_to_cut(&"(1)".parse().unwrap()),
        Err(OrderError::NoCut)
    );
    assert!(Cut::excl(BinWord::empty()).is_err());
}

#[test]
fn finite_cuts_reduce_to_their_maximum() {
    let words: BTreeSet<BinWord> = ["", "001", "01", "011"].iter().map(|s| w(s)).collect();
    let c = Cut::Finite { max_len: 3, words };
    assert_eq!(c.principal().unwrap(), Cut::Incl(w("011")));
    let gap: BTreeSet<BinWord> = ["", "01"].iter().map(|s| w(s)).collect();
    assert!(Cut::Finite {
        max_len: 3,
        words: gap
    }
    .principal()
    .is_err());
}

#[test]
fn dyadic_codes() {
    let d: Dyadic = "3/2^2".parse().unwrap();
    assert_eq!(real_to_cantor(&d).unwrap().to_string(), "11(0)");
    assert_eq!(real_to_cantor(&Dyadic::one()).unwrap().to_string(), "(1)");
    assert_eq!(d.to_word(), Some(w("11")));
}

fn word(max: usize) -> impl Strategy<Value = BinWord> {
    proptest::collection::vec(any::<bool>(), 0..max).prop_map(|mut v| {
        if !v.is_empty() {
            *v.last_mut().unwrap() = true;
        }
        BinWord::new(v).unwrap()
    })
}

fn cantor(max: usize) -> impl Strategy<Value = CantorSeq> {
    (
        proptest::collection::vec(any::<bool>(), 0..max),
        any::<bool>(),
    )
        .prop_map(|(p, t)| CantorSeq::new(p, t))
}

proptest! {
    #[test]
    fn lex_matches_marker_order(a in word(12), b in word(12)) {
        prop_assert_eq!(lex_cmp(&a, &b), oracle_lex(&a, &b));
    }

    #[test]
    fn val_is_an_order_embedding(a in word(40), b in word(40)) {
        prop_assert_eq!(lex_cmp(&a, &b), val(&a).cmp(&val(&b)));
    }

    #[test]
    fn cut_round_trip(a in word(9), incl in any::<bool>()) {
        let c = if incl { Cut::incl(a) } else {
            prop_assume!(!a.is_empty());
            Cut::Excl(a)
        };
        prop_assert_eq!(cantor_to_cut(&cut_to_cantor(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn cantor_round_trip(f in cantor(9)) {
        match cantor_to_cut(&f) {
            Ok(c) => prop_assert_eq!(cut_to_cantor(&c).unwrap(), f),
            Err(e) => {
                prop_assert_eq!(e, OrderError::NoCut);
                prop_assert_eq!(f.to_string(), "(1)");
            }
        }
    }

    #[test]
    fn cut_code_separates_segments(a in word(8), incl in any::<bool>(), u in word(8)) {
        // u lies in the lower segment iff the code of Incl(u) is at most the cut's code.
        let c = if incl { Cut::incl(a) } else {
            prop_assume!(!a.is_empty());
            Cut::Excl(a)
        };
        let code = cut_to_cantor(&c).unwrap();
        let ucode = cut_to_cantor(&Cut::incl(u.clone())).unwrap();
        prop_assert_eq!(c.contains(&u), ucode <= code);
    }
}

fn principal(a: BinWord, incl: bool) -> Option<Cut> {
    if incl {
        Some(Cut::incl(a))
    } else {
        Cut::excl(a).ok()
    }
}

/// Lower segments compared on every word up to `len`.
fn segment_le(c: &Cut, d: &Cut, len: usize) -> bool {
    BinWord::all_up_to(len)
        .iter()
        .all(|u| !c.contains(u) || d.contains(u))
}

proptest! {
    #[test]
    fn codes_order_cuts_by_inclusion(a in word(6), ia in any::<bool>(), b in word(6), ib in any::<bool>()) {
        let (Some(c), Some(d)) = (principal(a, ia), principal(b, ib)) else {
            return Ok(());
        };
        // Words longer than both descriptions separate distinct cuts.
        let le = segment_le(&c, &d, 8);
        prop_assert_eq!(le, cut_to_cantor(&c).unwrap() <= cut_to_cantor(&d).unwrap());
    }
}

#[test]
fn each_word_has_two_adjacent_principal_cuts() {
    let words: Vec<BinWord> = BinWord::all_up_to(5);
    let cuts: Vec<Cut> = words
        .iter()
        .flat_map(|a| [principal(a.clone(), false), principal(a.clone(), true)])
        .flatten()
        .collect();
    for a in words.iter().filter(|a| !a.is_empty()) {
        let (lo, hi) = (Cut::Excl(a.clone()), Cut::Incl(a.clone()));
        let (flo, fhi) = (cut_to_cantor(&lo).unwrap(), cut_to_cantor(&hi).unwrap());
        assert!(flo < fhi, "{a}");
        assert!(segment_le(&lo, &hi, 7) && !segment_le(&hi, &lo, 7), "{a}");
        for c in &cuts {
            let f = cut_to_cantor(c).unwrap();
            assert!(!(flo < f && f < fhi), "{c} between the cuts of {a}");
        }
    }
}

#[test]
fn binary_expansion_embeds_dyadics() {
    let k = 10;
    let reals: Vec<Dyadic> = (0..=1u32 << k)
        .map(|p| Dyadic::new(BigUint::from(p), k))
        .collect();
    let codes: Vec<CantorSeq> = reals.iter().map(|r| real_to_cantor(r).unwrap()).collect();
    for i in 1..codes.len() {
        assert!(codes[i - 1] < codes[i], "{} vs {}", reals[i - 1], reals[i]);
    }
    assert_eq!(codes[0].to_string(), "(0)");
    assert_eq!(codes.last().unwrap().to_string(), "(1)");
}
