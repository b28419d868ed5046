use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::rules::{apply_local, distribute_inequality, Fresh, Rule};
use super::trace::{Recorder, Stage, Target};
use crate::classify::uniform_eliminations;
use crate::syntax::{Formula, Inequality, Rel};
use crate::trees::{Sign, SignedTree};

pub(crate) fn distribute_all(rec: &mut Recorder, list: &mut Vec<Inequality>, target: Target) {
    for i in 0..list.len() {
        let d = distribute_inequality(&list[i]);
        if d != list[i] {
            let old = list[i].clone();
            rec.rewrite(list, Stage::Preprocess, Rule::Distribute, target, None, alloc::vec![old], alloc::vec![d], Vec::new());
        }
    }
}

/// Splits until no inequality has a meet on the right or a join on the left.
pub(crate) fn split_all(rec: &mut Recorder, list: &mut Vec<Inequality>, target: Target, stage: Stage) {
    let mut fresh = Fresh::default();
    while let Some((i, rule)) = list.iter().enumerate().find_map(|(i, x)| {
        [Rule::SplitMeet, Rule::SplitJoin]
            .into_iter()
            .find(|r| apply_local(*r, x, &mut Fresh::default()).is_some())
            .map(|r| (i, r))
    }) {
        let old = list[i].clone();
        let (out, _) = apply_local(rule, &old, &mut fresh).expect("premise matched");
        rec.rewrite(list, stage, rule, target, None, alloc::vec![old], out, Vec::new());
    }
}

pub(crate) fn rewrite_prec(rec: &mut Recorder, list: &mut Vec<Inequality>, target: Target) {
    for i in 0..list.len() {
        if list[i].rel == Rel::Prec {
            let old = list[i].clone();
            let new = old.to_leq();
            rec.rewrite(list, Stage::Preprocess, Rule::PrecRewrite, target, None, alloc::vec![old], alloc::vec![new], Vec::new());
        }
    }
}

/// Substitutes `t` for `p` in every inequality of `list` that mentions `p`.
pub(crate) fn substitute_all(rec: &mut Recorder, list: &mut Vec<Inequality>, target: Target, p: &str, t: &Formula) {
    let consumed: Vec<Inequality> = list.iter().filter(|x| x.contains_var(p)).cloned().collect();
    if consumed.is_empty() {
        return;
    }
    let produced = consumed.iter().map(|x| x.substitute(t, p)).collect();
    let rule = if *t == Formula::Bot {
        Rule::EliminateBot
    } else {
        Rule::EliminateTop
    };
    rec.rewrite(list, Stage::Preprocess, rule, target, Some(p.into()), consumed, produced, Vec::new());
}

/// Stage 1 on a quasi-inequality. Returns the rewritten antecedent and
/// consequent, every row in `≤` form.
pub(crate) fn preprocess_quasi(
    rec: &mut Recorder,
    antecedent: &[Inequality],
    consequent: &[Inequality],
) -> (Vec<Inequality>, Vec<Inequality>) {
    let mut a = antecedent.to_vec();
    let mut c = consequent.to_vec();
    rec.input(Target::Antecedent, &a);
    rec.input(Target::Consequent, &c);
    for (list, t) in [(&mut a, Target::Antecedent), (&mut c, Target::Consequent)] {
        distribute_all(rec, list, t);
        split_all(rec, list, t, Stage::Preprocess);
    }
    for (p, t) in uniform_eliminations(&a, &c) {
        substitute_all(rec, &mut a, Target::Antecedent, &p, &t);
        substitute_all(rec, &mut c, Target::Consequent, &p, &t);
    }
    rewrite_prec(rec, &mut a, Target::Antecedent);
    rewrite_prec(rec, &mut c, Target::Consequent);
    (a, c)
}

/// `q := ⊥` when every occurrence of `q` is positive in a left side or
/// negative in a right side, `q := ⊤` in the mirror case.
pub(crate) fn exists_eliminations(body: &[Inequality], bound: &[String]) -> Vec<(String, Formula)> {
    let mut leaves = Vec::new();
    for x in body {
        let x = x.to_leq();
        leaves.extend(SignedTree::new(Sign::Pos, &x.lhs).var_leaves());
        leaves.extend(SignedTree::new(Sign::Neg, &x.rhs).var_leaves());
    }
    bound
        .iter()
        .filter_map(|q| {
            let signs: BTreeSet<Sign> = leaves.iter().filter(|(v, _)| v == q).map(|(_, s)| *s).collect();
            match signs.into_iter().collect::<Vec<_>>()[..] {
                [Sign::Pos] => Some((q.clone(), Formula::Bot)),
                [Sign::Neg] => Some((q.clone(), Formula::Top)),
                _ => None,
            }
        })
        .collect()
}

pub(crate) fn preprocess_exists(rec: &mut Recorder, body: &[Inequality], bound: &[String]) -> Vec<Inequality> {
    let mut b = body.to_vec();
    rec.input(Target::Exists, &b);
    distribute_all(rec, &mut b, Target::Exists);
    split_all(rec, &mut b, Target::Exists, Stage::Preprocess);
    for (q, t) in exists_eliminations(&b, bound) {
        substitute_all(rec, &mut b, Target::Exists, &q, &t);
    }
    rewrite_prec(rec, &mut b, Target::Exists);
    b
}
