//! The deterministic reduction and elimination loop shared by both engines.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::rules::{ackermann, apply_local, Fresh, Rule, Side};
use super::trace::{Recorder, Stage, Target};
use crate::classify::DependenceOrder;
use crate::syntax::{Formula, Inequality, Modality};
use crate::trees::{critical_branches, OrderType, Polarity, Sign, SignedTree};

/// Upper bound on rule applications in one run of the loop.
pub const STEP_BUDGET: usize = 10_000;

#[derive(Clone, Debug)]
pub(crate) struct Strategy {
    pub eps: OrderType,
    pub omega: DependenceOrder,
    /// Approximation rules are available (second half and plain runs only).
    pub approximate: bool,
    /// Variables to eliminate; `None` means every variable in the system.
    pub scope: Option<BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Stuck {
    NoRule(Vec<String>),
    Budget(Vec<String>),
}

impl Strategy {
    fn critical(&self, f: &Formula, s: Sign) -> bool {
        !critical_branches(&SignedTree::new(s, f), &self.eps).is_empty()
    }

    fn in_scope(&self, list: &[Inequality]) -> Vec<String> {
        let mut vars = BTreeSet::new();
        for x in list {
            vars.extend(x.info().prop_vars);
        }
        match &self.scope {
            Some(s) => vars.intersection(s).cloned().collect(),
            None => vars.into_iter().collect(),
        }
    }

    /// Maximal variables of `Ω` first, then the rest in name order. Each
    /// variable is tried on its `ε` side first.
    fn plan(&self, vars: &[String]) -> Vec<(String, Side)> {
        let mut order: Vec<String> = self.omega.0.iter().rev().filter(|p| vars.contains(p)).cloned().collect();
        let rest: Vec<String> = vars.iter().filter(|p| !order.contains(p)).cloned().collect();
        order.extend(rest);
        let mut plan = Vec::new();
        for p in order {
            let first = match self.eps.get(&p) {
                Some(Polarity::Partial) => Side::Left,
                _ => Side::Right,
            };
            let second = if first == Side::Right { Side::Left } else { Side::Right };
            plan.push((p.clone(), first));
            plan.push((p, second));
        }
        plan
    }

    pub(crate) fn choose_rule(&self, x: &Inequality) -> Option<Rule> {
        use Formula::*;
        if x.is_pure() {
            return None;
        }
        if matches!(x.rhs, And(..)) {
            return Some(Rule::SplitMeet);
        }
        if matches!(x.lhs, Or(..)) {
            return Some(Rule::SplitJoin);
        }
        let bad_left = self.critical(&x.lhs, Sign::Neg);
        let bad_right = self.critical(&x.rhs, Sign::Pos);
        if self.approximate {
            match (&x.lhs, &x.rhs) {
                // Closed-type diamonds and open-type boxes are approximated even
                // on uniform sides so every Ackermann step stays topologically correct.
                (Nom(_), Modal(d, t)) if d.is_diamond() && !matches!(**t, Nom(_)) => {
                    if bad_right || *d != Modality::Dia {
                        return Some(Rule::Approx(*d));
                    }
                }
                (Modal(b, t), Not(i)) if !b.is_diamond() && matches!(**i, Nom(_)) => {
                    let neg_nom = matches!(&**t, Not(n) if matches!(**n, Nom(_)));
                    if !neg_nom && (bad_left || *b != Modality::Box) {
                        return Some(Rule::Approx(*b));
                    }
                }
                (Imp(..), Not(i)) if bad_left && matches!(**i, Nom(_)) => return Some(Rule::ApproxImp),
                _ => {}
            }
        }
        if let Not(a) = &x.lhs {
            if let Not(b) = &**a {
                if matches!(**b, Nom(_)) {
                    return Some(Rule::DoubleNeg);
                }
            }
        }
        match (bad_left, bad_right) {
            (false, true) => match &x.rhs {
                Not(_) => Some(Rule::NotResRight),
                Modal(b, _) if !b.is_diamond() => Some(Rule::Res(*b)),
                Or(i, _) => Some(if self.critical(i, Sign::Pos) {
                    Rule::OrRes2
                } else {
                    Rule::OrRes1
                }),
                Imp(_, e) => Some(if self.critical(e, Sign::Pos) {
                    Rule::ImpRes1
                } else {
                    Rule::ImpRes2
                }),
                _ => None,
            },
            (true, false) => match &x.lhs {
                Not(_) => Some(Rule::NotResLeft),
                Modal(d, _) if d.is_diamond() => Some(Rule::Res(*d)),
                And(t, _) => Some(if self.critical(t, Sign::Neg) {
                    Rule::AndRes1
                } else {
                    Rule::AndRes2
                }),
                _ => None,
            },
            _ => None,
        }
    }

    /// Reduces and eliminates until no variable in scope is left.
    pub(crate) fn run(
        &self,
        rec: &mut Recorder,
        list: &mut Vec<Inequality>,
        target: Target,
        fresh: &mut Fresh,
    ) -> Result<(), Stuck> {
        let mut budget = STEP_BUDGET;
        loop {
            if budget == 0 {
                return Err(Stuck::Budget(self.in_scope(list)));
            }
            budget -= 1;
            let next = list.iter().enumerate().find_map(|(k, x)| {
                let r = self.choose_rule(x)?;
                let mut probe = fresh.clone();
                apply_local(r, x, &mut probe).map(|_| (k, r))
            });
            if let Some((k, rule)) = next {
                let old = list[k].clone();
                let (out, names) = apply_local(rule, &old, fresh).expect("probed");
                rec.rewrite(list, Stage::Reduce, rule, target, None, alloc::vec![old], out, names);
                continue;
            }
            let vars = self.in_scope(list);
            if vars.is_empty() {
                return Ok(());
            }
            let step = self
                .plan(&vars)
                .into_iter()
                .find_map(|(p, side)| ackermann(list, &p, side).ok().map(|s| (p, side, s)));
            let Some((p, side, s)) = step else {
                return Err(Stuck::NoRule(vars));
            };
            let rule = match side {
                Side::Right => Rule::AckermannRight,
                Side::Left => Rule::AckermannLeft,
            };
            rec.rewrite(list, Stage::Reduce, rule, target, Some(p), s.consumed, s.produced, Vec::new());
        }
    }
}
