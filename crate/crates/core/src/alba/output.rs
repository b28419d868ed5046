//! Post-processing of pure quasi-inequalities into their readable form.
//!
//! Every rewrite here is an equivalence on all frames under arbitrary
//! valuations, so the oracle can compare either form with the input.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{render_inequality, Formula, Inequality, QuasiInequality};

fn nom_count(f: &Formula, i: &str) -> usize {
    match f {
        Formula::Nom(j) => usize::from(j == i),
        Formula::Top | Formula::Bot | Formula::Var(_) => 0,
        Formula::Not(a) | Formula::Modal(_, a) => nom_count(a, i),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => nom_count(a, i) + nom_count(b, i),
    }
}

fn count_in(x: &Inequality, i: &str) -> usize {
    nom_count(&x.lhs, i) + nom_count(&x.rhs, i)
}

fn total(ante: &[Inequality], goal: &Inequality, i: &str) -> usize {
    ante.iter().map(|x| count_in(x, i)).sum::<usize>() + count_in(goal, i)
}

fn as_nom(f: &Formula) -> Option<&str> {
    match f {
        Formula::Nom(i) => Some(i),
        _ => None,
    }
}

fn as_neg_nom(f: &Formula) -> Option<&str> {
    match f {
        Formula::Not(a) => as_nom(a),
        _ => None,
    }
}

/// `A ≤ ¬j ⇒ X ≤ ¬j` with `j` nowhere else becomes `X ≤ A`.
fn absorb_right(ante: &mut Vec<Inequality>, goal: &mut Inequality) -> bool {
    let Some(j) = as_neg_nom(&goal.rhs).map(String::from) else {
        return false;
    };
    if total(ante, goal, &j) != 2 {
        return false;
    }
    let Some(k) = ante.iter().position(|x| as_neg_nom(&x.rhs) == Some(&j)) else {
        return false;
    };
    let a = ante.remove(k);
    goal.rhs = a.lhs;
    true
}

/// `j ≤ θ & i ≤ Dj` becomes `i ≤ Dθ`, and dually `θ ≤ ¬j & B¬j ≤ ¬i`
/// becomes `Bθ ≤ ¬i`, when `j` occurs nowhere else.
fn reverse_approximation(ante: &mut Vec<Inequality>, goal: &Inequality) -> bool {
    for a in 0..ante.len() {
        let x = &ante[a];
        let (j, theta, dual) = if let Some(j) = as_nom(&x.lhs) {
            (String::from(j), x.rhs.clone(), false)
        } else if let Some(j) = as_neg_nom(&x.rhs) {
            (String::from(j), x.lhs.clone(), true)
        } else {
            continue;
        };
        if total(ante, goal, &j) != 2 {
            continue;
        }
        let found = ante.iter().enumerate().find_map(|(b, y)| {
            if b == a {
                return None;
            }
            match (&y.lhs, &y.rhs, dual) {
                (Formula::Nom(_), Formula::Modal(d, t), false) if d.is_diamond() && as_nom(t) == Some(&j) => {
                    Some((b, Inequality::leq(y.lhs.clone(), Formula::modal(*d, theta.clone()))))
                }
                (Formula::Modal(m, t), r, true) if !m.is_diamond() && as_neg_nom(t) == Some(&j) && as_neg_nom(r).is_some() => {
                    Some((b, Inequality::leq(Formula::modal(*m, theta.clone()), r.clone())))
                }
                _ => None,
            }
        });
        if let Some((b, new)) = found {
            ante[b] = new;
            ante.remove(a);
            return true;
        }
    }
    false
}

/// `i ≤ A ⇒ i ≤ X` with `i` nowhere else becomes `A ≤ X`.
fn absorb_left(ante: &mut Vec<Inequality>, goal: &mut Inequality) -> bool {
    let Some(i) = as_nom(&goal.lhs).map(String::from) else {
        return false;
    };
    if total(ante, goal, &i) != 2 {
        return false;
    }
    let Some(k) = ante.iter().position(|x| as_nom(&x.lhs) == Some(&i)) else {
        return false;
    };
    let a = ante.remove(k);
    goal.lhs = a.rhs;
    true
}

/// Absorbs approximation leftovers until nothing changes.
pub fn simplify_pure(q: &QuasiInequality) -> QuasiInequality {
    let mut ante: Vec<Inequality> = q.antecedent.iter().filter(|x| !x.is_trivial()).cloned().collect();
    let mut goals = Vec::new();
    for g in &q.consequent {
        let mut a = ante.clone();
        let mut g = g.clone();
        while absorb_right(&mut a, &mut g) || reverse_approximation(&mut a, &g) || absorb_left(&mut a, &mut g) {}
        goals.push((a, g));
    }
    // Several consequents share the antecedent; only simplify the single case.
    if goals.len() == 1 {
        let (a, g) = goals.pop().unwrap();
        ante = a;
        return QuasiInequality::new(ante.into_iter().map(|x| tidy(&x)).collect(), alloc::vec![tidy(&g)]);
    }
    QuasiInequality::new(ante, q.consequent.clone())
}

/// `¬M¬θ` to the dual modality and `¬¬θ` to `θ`, bottom-up.
pub fn collapse(f: &Formula) -> Formula {
    match f {
        Formula::Not(a) => match collapse(a) {
            Formula::Not(b) => *b,
            Formula::Modal(m, b) => match *b {
                Formula::Not(c) => Formula::modal(m.dual(), *c),
                b => Formula::not(Formula::modal(m, b)),
            },
            a => Formula::not(a),
        },
        Formula::Modal(m, a) => Formula::modal(*m, collapse(a)),
        Formula::And(a, b) => Formula::and(collapse(a), collapse(b)),
        Formula::Or(a, b) => Formula::or(collapse(a), collapse(b)),
        Formula::Imp(a, b) => Formula::imp(collapse(a), collapse(b)),
        _ => f.clone(),
    }
}

fn negations(f: &Formula) -> usize {
    match f {
        Formula::Not(a) => 1 + negations(a),
        Formula::Modal(_, a) => negations(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => negations(a) + negations(b),
        _ => 0,
    }
}

fn tidy(x: &Inequality) -> Inequality {
    let mut x = x.map(collapse);
    if let Some(j) = as_neg_nom(&x.rhs) {
        let flipped = Inequality::leq(Formula::nom(j), collapse(&Formula::not(x.lhs.clone())));
        if negations(&flipped.lhs) + negations(&flipped.rhs) < negations(&x.lhs) + negations(&x.rhs) {
            x = flipped;
        }
    }
    while let (Formula::Nom(_), Formula::Modal(b, t)) = (&x.lhs, &x.rhs) {
        if b.is_diamond() {
            break;
        }
        x = Inequality::leq(Formula::modal(b.adjoint(), x.lhs.clone()), (**t).clone());
    }
    x
}

fn nominal_order(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Nom(i) => {
            if !out.contains(i) {
                out.push(i.clone());
            }
        }
        Formula::Not(a) | Formula::Modal(_, a) => nominal_order(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            nominal_order(a, out);
            nominal_order(b, out);
        }
        _ => {}
    }
}

fn nominals_in_order(q: &QuasiInequality) -> Vec<String> {
    let mut out = Vec::new();
    for x in q.antecedent.iter().chain(&q.consequent) {
        nominal_order(&x.lhs, &mut out);
        nominal_order(&x.rhs, &mut out);
    }
    out
}

fn rename(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
    match f {
        Formula::Nom(i) => Formula::nom(map.get(i).unwrap_or(i)),
        Formula::Not(a) => Formula::not(rename(a, map)),
        Formula::Modal(m, a) => Formula::modal(*m, rename(a, map)),
        Formula::And(a, b) => Formula::and(rename(a, map), rename(b, map)),
        Formula::Or(a, b) => Formula::or(rename(a, map), rename(b, map)),
        Formula::Imp(a, b) => Formula::imp(rename(a, map), rename(b, map)),
        _ => f.clone(),
    }
}

/// The `k`-th canonical nominal name: `i, j, k, l, m, n, i1, j1, ...`.
pub fn canonical_nominal(k: usize) -> String {
    let base = ["i", "j", "k", "l", "m", "n"][k % 6];
    match k / 6 {
        0 => base.into(),
        r => alloc::format!("{base}{r}"),
    }
}

/// Renames nominals to `i, j, k, ...` in order of first appearance.
pub fn canonical_nominals(q: &QuasiInequality) -> QuasiInequality {
    let map: BTreeMap<String, String> = nominals_in_order(q)
        .into_iter()
        .enumerate()
        .map(|(k, i)| (i, canonical_nominal(k)))
        .collect();
    let r = |x: &Inequality| x.map(|f| rename(f, &map));
    QuasiInequality {
        antecedent: q.antecedent.iter().map(r).collect(),
        consequent: q.consequent.iter().map(r).collect(),
    }
}

/// Simplified and canonically named form of a pure quasi-inequality.
pub fn finish(q: &QuasiInequality) -> QuasiInequality {
    canonical_nominals(&simplify_pure(q))
}

/// `forall @i @j. A => C`, dropping `A =>` when the antecedent is trivial.
pub fn render_pure_quasi(q: &QuasiInequality) -> String {
    let mut s = String::new();
    let noms = nominals_in_order(q);
    if !noms.is_empty() {
        s.push_str("forall");
        for i in &noms {
            s.push_str(" @");
            s.push_str(i);
        }
        s.push_str(". ");
    }
    let ante: Vec<String> = q.antecedent.iter().filter(|x| !x.is_trivial()).map(render_inequality).collect();
    if !ante.is_empty() {
        s.push_str(&ante.join(" & "));
        s.push_str(" => ");
    }
    let cons: Vec<String> = q.consequent.iter().map(render_inequality).collect();
    s.push_str(&cons.join(" & "));
    s
}
