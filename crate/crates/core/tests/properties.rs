use std::collections::BTreeMap;

use proptest::prelude::*;
use subalba_core::fol::{simplify_fo, standard_translation, VarSupply};
use subalba_core::semantics::{eval_fo, eval_formula, FiniteFrame, Valuation};
use subalba_core::syntax::{parse_formula, render_formula, Formula, Modality};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        Just(Formula::var("p")),
        Just(Formula::var("q")),
        Just(Formula::nom("i")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (0..Modality::ALL.len(), inner).prop_map(|(k, a)| Formula::modal(Modality::ALL[k], a)),
        ]
    })
}

/// A frame with up to three worlds, a valuation of `p`, `q`, `i` and a world.
fn model() -> impl Strategy<Value = (FiniteFrame, Valuation, usize)> {
    (1usize..=3).prop_flat_map(|n| {
        let rel = 0u64..1 << (n * n);
        let set = 0u64..1 << n;
        (rel.clone(), rel, set.clone(), set, 0..n, 0..n).prop_map(move |(r, rp, p, q, i, w)| {
            let val = Valuation::default().with_prop("p", p).with_prop("q", q).with_nom("i", i);
            (FiniteFrame::from_masks(n, r, rp), val, w)
        })
    })
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in formula()) {
        prop_assert_eq!(parse_formula(&render_formula(&f)).unwrap(), f);
    }

    #[test]
    fn translation_agrees_with_evaluation(f in formula(), (frame, val, w) in model()) {
        let taken = ["x".to_string(), "i".to_string()].into_iter().collect();
        let st = standard_translation(&f, "x", &mut VarSupply::avoiding(taken));
        let env = BTreeMap::from([("x".to_string(), w)]);
        let direct = eval_formula(&frame, &val, &f).unwrap() >> w & 1 == 1;
        prop_assert_eq!(eval_fo(&frame, &val, &st, &env).unwrap(), direct);
        prop_assert_eq!(eval_fo(&frame, &val, &simplify_fo(&st), &env).unwrap(), direct);
    }

    #[test]
    fn negation_mirrors_polarity(f in formula()) {
        let (pos, neg) = f.polarity("p");
        prop_assert_eq!(Formula::not(f.clone()).polarity("p"), (neg, pos));
    }
}
