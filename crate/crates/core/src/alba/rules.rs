//! Single-inequality rewrite rules and the Ackermann rules.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{substitute, Formula, Inequality, Modality, Rel};
use crate::trees::{node_roles, Connective, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Input,
    Distribute,
    /// `θ ≤ η ∧ ι` into `θ ≤ η`, `θ ≤ ι` (also for `prec`).
    SplitMeet,
    /// `θ ∨ η ≤ ι` into `θ ≤ ι`, `η ≤ ι` (also for `prec`).
    SplitJoin,
    /// Monotone elimination, `p := ⊥`.
    EliminateBot,
    /// Antitone elimination, `p := ⊤`.
    EliminateTop,
    PrecRewrite,
    FirstApprox,
    /// `i ≤ Dθ` for a diamond `D`, or `Bθ ≤ ¬i` for a box `B`.
    Approx(Modality),
    ApproxImp,
    /// `Dθ ≤ ι` into `θ ≤ D⁺ι` for a diamond, `θ ≤ Bι` into `B⁺θ ≤ ι` for a box.
    Res(Modality),
    NotResLeft,
    NotResRight,
    AndRes1,
    AndRes2,
    OrRes1,
    OrRes2,
    ImpRes1,
    ImpRes2,
    DoubleNeg,
    AckermannRight,
    AckermannLeft,
}

impl Rule {
    pub fn name(self) -> String {
        let fixed = match self {
            Rule::Input => "input",
            Rule::Distribute => "distribute",
            Rule::SplitMeet => "split-meet",
            Rule::SplitJoin => "split-join",
            Rule::EliminateBot => "eliminate-bot",
            Rule::EliminateTop => "eliminate-top",
            Rule::PrecRewrite => "prec-rewrite",
            Rule::FirstApprox => "first-approx",
            Rule::ApproxImp => "approx-imp",
            Rule::NotResLeft => "not-res-left",
            Rule::NotResRight => "not-res-right",
            Rule::AndRes1 => "and-res-1",
            Rule::AndRes2 => "and-res-2",
            Rule::OrRes1 => "or-res-1",
            Rule::OrRes2 => "or-res-2",
            Rule::ImpRes1 => "imp-res-1",
            Rule::ImpRes2 => "imp-res-2",
            Rule::DoubleNeg => "double-neg",
            Rule::AckermannRight => "ackermann-right",
            Rule::AckermannLeft => "ackermann-left",
            Rule::Approx(m) => return alloc::format!("approx-{}", m.keyword()),
            Rule::Res(m) => return alloc::format!("res-{}", m.keyword()),
        };
        fixed.into()
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        let all = [
            Rule::Input,
            Rule::Distribute,
            Rule::SplitMeet,
            Rule::SplitJoin,
            Rule::EliminateBot,
            Rule::EliminateTop,
            Rule::PrecRewrite,
            Rule::FirstApprox,
            Rule::ApproxImp,
            Rule::NotResLeft,
            Rule::NotResRight,
            Rule::AndRes1,
            Rule::AndRes2,
            Rule::OrRes1,
            Rule::OrRes2,
            Rule::ImpRes1,
            Rule::ImpRes2,
            Rule::DoubleNeg,
            Rule::AckermannRight,
            Rule::AckermannLeft,
        ];
        all.into_iter()
            .chain(Modality::ALL.into_iter().flat_map(|m| [Rule::Approx(m), Rule::Res(m)]))
            .find(|r| r.name() == s)
    }

    /// Rules for black connectives, used only on inputs that already contain them.
    pub fn is_extended(self) -> bool {
        match self {
            Rule::Approx(m) => m.is_black(),
            Rule::Res(m) => m.is_black(),
            Rule::DoubleNeg => true,
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Fresh nominals `_0`, `_1`, ... skipping every name already in use.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    next: usize,
    taken: BTreeSet<String>,
}

impl Fresh {
    pub fn avoiding(taken: BTreeSet<String>) -> Fresh {
        Fresh { next: 0, taken }
    }

    /// Resumes numbering at `next`.
    pub fn resume(next: usize, taken: BTreeSet<String>) -> Fresh {
        Fresh { next, taken }
    }

    pub fn counter(&self) -> usize {
        self.next
    }

    pub fn nominal(&mut self) -> String {
        loop {
            let name = alloc::format!("_{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

fn neg_nom(f: &Formula) -> Option<&str> {
    match f {
        Formula::Not(a) => match &**a {
            Formula::Nom(i) => Some(i),
            _ => None,
        },
        _ => None,
    }
}

fn leq(a: Formula, b: Formula) -> Inequality {
    Inequality::leq(a, b)
}

/// Applies a local rule to one inequality. Returns the conclusions and the
/// fresh nominals introduced, or `None` when the premise does not match.
pub fn apply_local(rule: Rule, x: &Inequality, fresh: &mut Fresh) -> Option<(Vec<Inequality>, Vec<String>)> {
    use Formula::*;
    let plain = |v: Vec<Inequality>| Some((v, Vec::new()));
    let rel = |a: Formula, b: Formula| Inequality { lhs: a, rel: x.rel, rhs: b };
    match rule {
        Rule::Distribute => {
            let d = distribute_inequality(x);
            (d != *x).then(|| (alloc::vec![d], Vec::new()))
        }
        Rule::SplitMeet => match &x.rhs {
            And(a, b) => plain(alloc::vec![rel(x.lhs.clone(), (**a).clone()), rel(x.lhs.clone(), (**b).clone())]),
            _ => None,
        },
        Rule::SplitJoin => match &x.lhs {
            Or(a, b) => plain(alloc::vec![rel((**a).clone(), x.rhs.clone()), rel((**b).clone(), x.rhs.clone())]),
            _ => None,
        },
        Rule::PrecRewrite => (x.rel == Rel::Prec).then(|| (alloc::vec![x.to_leq()], Vec::new())),
        _ if x.rel != Rel::Leq => None,
        Rule::Approx(m) if m.is_diamond() => match (&x.lhs, &x.rhs) {
            (Nom(i), Modal(d, theta)) if *d == m && !matches!(**theta, Nom(_)) => {
                let j = fresh.nominal();
                let out = alloc::vec![
                    leq(Formula::nom(&j), (**theta).clone()),
                    leq(Formula::nom(i), Formula::modal(m, Formula::nom(&j))),
                ];
                Some((out, alloc::vec![j]))
            }
            _ => None,
        },
        Rule::Approx(m) => match (&x.lhs, neg_nom(&x.rhs)) {
            (Modal(b, theta), Some(i)) if *b == m && neg_nom(theta).is_none() => {
                let j = fresh.nominal();
                let nj = Formula::not(Formula::nom(&j));
                let out = alloc::vec![
                    leq((**theta).clone(), nj.clone()),
                    leq(Formula::modal(m, nj), Formula::not(Formula::nom(i))),
                ];
                Some((out, alloc::vec![j]))
            }
            _ => None,
        },
        Rule::ApproxImp => match (&x.lhs, neg_nom(&x.rhs)) {
            (Imp(a, b), Some(i)) => {
                let j = fresh.nominal();
                let k = fresh.nominal();
                let nk = Formula::not(Formula::nom(&k));
                let out = alloc::vec![
                    leq(Formula::nom(&j), (**a).clone()),
                    leq((**b).clone(), nk.clone()),
                    leq(Formula::imp(Formula::nom(&j), nk), Formula::not(Formula::nom(i))),
                ];
                Some((out, alloc::vec![j, k]))
            }
            _ => None,
        },
        Rule::Res(m) if m.is_diamond() => match &x.lhs {
            Modal(d, theta) if *d == m => plain(alloc::vec![leq(
                (**theta).clone(),
                Formula::modal(m.adjoint(), x.rhs.clone())
            )]),
            _ => None,
        },
        Rule::Res(m) => match &x.rhs {
            Modal(b, iota) if *b == m => plain(alloc::vec![leq(
                Formula::modal(m.adjoint(), x.lhs.clone()),
                (**iota).clone()
            )]),
            _ => None,
        },
        Rule::NotResLeft => match &x.lhs {
            Not(theta) => plain(alloc::vec![leq(Formula::not(x.rhs.clone()), (**theta).clone())]),
            _ => None,
        },
        Rule::NotResRight => match &x.rhs {
            Not(iota) => plain(alloc::vec![leq((**iota).clone(), Formula::not(x.lhs.clone()))]),
            _ => None,
        },
        Rule::AndRes1 => match &x.lhs {
            And(t, i) => plain(alloc::vec![leq((**t).clone(), Formula::imp((**i).clone(), x.rhs.clone()))]),
            _ => None,
        },
        Rule::AndRes2 => match &x.lhs {
            And(t, i) => plain(alloc::vec![leq((**i).clone(), Formula::imp((**t).clone(), x.rhs.clone()))]),
            _ => None,
        },
        Rule::OrRes1 => match &x.rhs {
            Or(i, e) => plain(alloc::vec![leq(
                Formula::and(x.lhs.clone(), Formula::not((**i).clone())),
                (**e).clone()
            )]),
            _ => None,
        },
        Rule::OrRes2 => match &x.rhs {
            Or(i, e) => plain(alloc::vec![leq(
                Formula::and(x.lhs.clone(), Formula::not((**e).clone())),
                (**i).clone()
            )]),
            _ => None,
        },
        Rule::ImpRes1 => match &x.rhs {
            Imp(i, e) => plain(alloc::vec![leq(Formula::and(x.lhs.clone(), (**i).clone()), (**e).clone())]),
            _ => None,
        },
        Rule::ImpRes2 => match &x.rhs {
            Imp(i, e) => plain(alloc::vec![leq((**i).clone(), Formula::imp(x.lhs.clone(), (**e).clone()))]),
            _ => None,
        },
        Rule::DoubleNeg => {
            let strip = |f: &Formula| match f {
                Not(a) => match &**a {
                    Not(b) => Some((**b).clone()),
                    _ => None,
                },
                _ => None,
            };
            match (strip(&x.lhs), strip(&x.rhs)) {
                (Some(l), _) => plain(alloc::vec![leq(l, x.rhs.clone())]),
                (None, Some(r)) => plain(alloc::vec![leq(x.lhs.clone(), r)]),
                _ => None,
            }
        }
        Rule::Input
        | Rule::EliminateBot
        | Rule::EliminateTop
        | Rule::FirstApprox
        | Rule::AckermannRight
        | Rule::AckermannLeft => None,
    }
}

fn is_skeleton(sign: Sign, c: Connective) -> bool {
    node_roles(sign, c).skeleton.is_some()
}

/// One bottom-up pass of the distribution rules on the tree with root sign
/// `s`. `skel` says whether every ancestor is a Skeleton node.
fn distribute_pass(f: &Formula, s: Sign, skel: bool) -> Formula {
    use Formula::*;
    let here = |c: Connective| skel && is_skeleton(s, c);
    let rebuilt = match f {
        Not(a) => {
            let k = here(Connective::Not);
            Formula::not(distribute_pass(a, s.flip(), k))
        }
        Modal(m, a) => {
            let k = here(Connective::Modal(*m));
            Formula::modal(*m, distribute_pass(a, s, k))
        }
        And(a, b) => {
            let k = here(Connective::And);
            Formula::and(distribute_pass(a, s, k), distribute_pass(b, s, k))
        }
        Or(a, b) => {
            let k = here(Connective::Or);
            Formula::or(distribute_pass(a, s, k), distribute_pass(b, s, k))
        }
        Imp(a, b) => {
            let k = here(Connective::Imp);
            Formula::imp(distribute_pass(a, s.flip(), k), distribute_pass(b, s, k))
        }
        _ => return f.clone(),
    };
    let node_skel = match &rebuilt {
        Not(_) => here(Connective::Not),
        Modal(m, _) => here(Connective::Modal(*m)),
        And(..) => here(Connective::And),
        Or(..) => here(Connective::Or),
        Imp(..) => here(Connective::Imp),
        _ => false,
    };
    if !node_skel {
        return rebuilt;
    }
    let c = |x: &Formula| x.clone();
    match (s, &rebuilt) {
        // +∨ pushed up through +D, -¬, +∧ and the first child of -→.
        (Sign::Pos, Modal(m, a)) if m.is_diamond() => match &**a {
            Or(x, y) => Formula::or(Formula::modal(*m, c(x)), Formula::modal(*m, c(y))),
            _ => rebuilt,
        },
        (Sign::Neg, Not(a)) => match &**a {
            Or(x, y) => Formula::and(Formula::not(c(x)), Formula::not(c(y))),
            _ => rebuilt,
        },
        (Sign::Pos, And(a, b)) => match (&**a, &**b) {
            (Or(x, y), _) => Formula::or(Formula::and(c(x), c(b)), Formula::and(c(y), c(b))),
            (_, Or(x, y)) => Formula::or(Formula::and(c(a), c(x)), Formula::and(c(a), c(y))),
            _ => rebuilt,
        },
        (Sign::Neg, Imp(a, b)) => match (&**a, &**b) {
            (Or(x, y), _) => Formula::and(Formula::imp(c(x), c(b)), Formula::imp(c(y), c(b))),
            // -∧ pushed up through the second child of -→.
            (_, And(x, y)) => Formula::and(Formula::imp(c(a), c(x)), Formula::imp(c(a), c(y))),
            _ => rebuilt,
        },
        // -∧ pushed up through -B, +¬ and -∨.
        (Sign::Neg, Modal(m, a)) if !m.is_diamond() => match &**a {
            And(x, y) => Formula::and(Formula::modal(*m, c(x)), Formula::modal(*m, c(y))),
            _ => rebuilt,
        },
        (Sign::Pos, Not(a)) => match &**a {
            And(x, y) => Formula::or(Formula::not(c(x)), Formula::not(c(y))),
            _ => rebuilt,
        },
        (Sign::Neg, Or(a, b)) => match (&**a, &**b) {
            (And(x, y), _) => Formula::and(Formula::or(c(x), c(b)), Formula::or(c(y), c(b))),
            (_, And(x, y)) => Formula::and(Formula::or(c(a), c(x)), Formula::or(c(a), c(y))),
            _ => rebuilt,
        },
        _ => rebuilt,
    }
}

/// Distribution to a fixpoint on `+lhs` and `-rhs`.
pub fn distribute_inequality(x: &Inequality) -> Inequality {
    let fix = |f: &Formula, s: Sign| {
        let mut cur = f.clone();
        loop {
            let next = distribute_pass(&cur, s, true);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    };
    Inequality {
        lhs: fix(&x.lhs, Sign::Pos),
        rel: x.rel,
        rhs: fix(&x.rhs, Sign::Neg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// Bounds `θ ≤ p`, substitute their join.
    Right,
    /// Bounds `p ≤ θ`, substitute their meet.
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AckermannError {
    /// The variable occurs with the wrong polarity in this inequality.
    Polarity(Inequality),
    NotPresent,
}

/// The inequalities an Ackermann step consumes (in system order) and the
/// ones it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AckermannStep {
    pub consumed: Vec<Inequality>,
    pub produced: Vec<Inequality>,
    pub witness: Formula,
}

pub fn ackermann(system: &[Inequality], p: &str, side: Side) -> Result<AckermannStep, AckermannError> {
    let var = Formula::var(p);
    let mut bounds = Vec::new();
    let mut consumed = Vec::new();
    let mut others = Vec::new();
    for x in system.iter().filter(|x| x.contains_var(p)) {
        let (bound, rest) = match side {
            Side::Right => (&x.rhs, &x.lhs),
            Side::Left => (&x.lhs, &x.rhs),
        };
        if x.rel == Rel::Leq && *bound == var && !rest.contains_var(p) {
            bounds.push(rest.clone());
        } else {
            let ok = match side {
                Side::Right => x.lhs.positive_in(p) && x.rhs.negative_in(p),
                Side::Left => x.lhs.negative_in(p) && x.rhs.positive_in(p),
            };
            if !ok {
                return Err(AckermannError::Polarity(x.clone()));
            }
            others.push(x.clone());
        }
        consumed.push(x.clone());
    }
    if consumed.is_empty() {
        return Err(AckermannError::NotPresent);
    }
    let witness = match side {
        Side::Right => Formula::join_all(bounds),
        Side::Left => Formula::meet_all(bounds),
    };
    let produced = others
        .iter()
        .map(|x| Inequality {
            lhs: substitute(&x.lhs, &witness, p),
            rel: x.rel,
            rhs: substitute(&x.rhs, &witness, p),
        })
        .collect();
    Ok(AckermannStep {
        consumed,
        produced,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_statement, Statement};

    fn ineq(src: &str) -> Inequality {
        match parse_statement(src).unwrap() {
            Statement::Inequality(i) => i,
            other => panic!("{other:?}"),
        }
    }

    fn run(rule: Rule, src: &str) -> Vec<String> {
        let mut fresh = Fresh::default();
        apply_local(rule, &ineq(src), &mut fresh)
            .unwrap()
            .0
            .iter()
            .map(crate::syntax::render_inequality)
            .collect()
    }

    #[test]
    fn displayed_rules() {
        assert_eq!(run(Rule::Res(Modality::Dia), "dia p <= q"), ["p <= bbox q"]);
        assert_eq!(run(Rule::Approx(Modality::Dia), "@i <= dia p"), ["@_0 <= p", "@i <= dia @_0"]);
        assert_eq!(run(Rule::Res(Modality::SBox), "@j <= sbox sdia @j"), ["sbdia @j <= sdia @j"]);
        assert_eq!(run(Rule::Approx(Modality::Box), "box p <= ~@i"), ["p <= ~@_0", "box ~@_0 <= ~@i"]);
        assert_eq!(
            run(Rule::ApproxImp, "p -> q <= ~@i"),
            ["@_0 <= p", "q <= ~@_1", "@_0 -> ~@_1 <= ~@i"]
        );
        assert_eq!(run(Rule::OrRes2, "a <= b \\/ c"), ["a /\\ ~c <= b"]);
        assert_eq!(run(Rule::ImpRes2, "a <= b -> c"), ["b <= a -> c"]);
        assert_eq!(run(Rule::NotResLeft, "~a <= ~@j"), ["~~@j <= a"]);
        assert_eq!(run(Rule::DoubleNeg, "~~@j <= a"), ["@j <= a"]);
        assert_eq!(run(Rule::SplitMeet, "a prec b /\\ c"), ["a prec b", "a prec c"]);
    }

    #[test]
    fn rule_names_round_trip() {
        for m in Modality::ALL {
            for r in [Rule::Approx(m), Rule::Res(m)] {
                assert_eq!(Rule::from_name(&r.name()), Some(r));
            }
        }
        assert_eq!(Rule::from_name("ackermann-left"), Some(Rule::AckermannLeft));
    }

    #[test]
    fn distribution_targets_skeleton_joins() {
        let d = |s| crate::syntax::render_inequality(&distribute_inequality(&ineq(s)));
        assert_eq!(d("dia (p \\/ q) <= r"), "dia p \\/ dia q <= r");
        assert_eq!(d("r <= box (p /\\ q)"), "r <= box p /\\ box q");
        assert_eq!(d("(a \\/ b) /\\ c <= r"), "a /\\ c \\/ b /\\ c <= r");
        // +∨ under +□ is below a PIA node, so it stays.
        assert_eq!(d("box (p \\/ q) <= r"), "box (p \\/ q) <= r");
        assert_eq!(d("r <= (a /\\ b) \\/ c"), "r <= (a \\/ c) /\\ (b \\/ c)");
        let f = parse_formula("sdia (a \\/ (b \\/ c))").unwrap();
        let x = Inequality::leq(f, Formula::var("r"));
        assert_eq!(
            crate::syntax::render_inequality(&distribute_inequality(&x)),
            "sdia a \\/ (sdia b \\/ sdia c) <= r"
        );
    }

    #[test]
    fn ackermann_cases() {
        let sys = [ineq("@k <= a"), ineq("sdia a <= b"), ineq("@i <= sdia dia @k")];
        let s = ackermann(&sys, "a", Side::Right).unwrap();
        assert_eq!(s.produced, [ineq("sdia @k <= b")]);
        let sys = [ineq("sdia @k <= b"), ineq("dia b <= ~@j")];
        assert_eq!(ackermann(&sys, "b", Side::Right).unwrap().produced, [ineq("dia sdia @k <= ~@j")]);
        let sys = [ineq("dia p <= ~@j")];
        assert_eq!(ackermann(&sys, "p", Side::Right).unwrap().produced, [ineq("dia F <= ~@j")]);
        let sys = [ineq("@i <= p"), ineq("p <= dia p")];
        assert!(matches!(ackermann(&sys, "p", Side::Right), Err(AckermannError::Polarity(_))));
    }
}
