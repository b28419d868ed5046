//! Checks that every Ackermann step of a trace is topologically correct.

use alloc::string::String;
use alloc::vec::Vec;

use super::rules::Rule;
use super::trace::{ReplayError, Replay, Trace};
use crate::classify::syntactic_polarity;
use crate::syntax::Inequality;
use crate::trees::Sign;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoStep {
    pub step: usize,
    pub var: Option<String>,
    pub correct: bool,
    /// Non-pure inequalities whose left side is not closed or right side not open.
    pub offending: Vec<Inequality>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoReport {
    pub steps: Vec<TopoStep>,
    pub replay_error: Option<ReplayError>,
}

impl TopoReport {
    pub fn all_correct(&self) -> bool {
        self.replay_error.is_none() && self.steps.iter().all(|s| s.correct)
    }
}

pub fn topologically_sound(x: &Inequality) -> bool {
    x.is_pure() || (syntactic_polarity(&x.lhs, Sign::Pos).closed && syntactic_polarity(&x.rhs, Sign::Pos).open)
}

pub fn check_topological_correctness(tr: &Trace) -> TopoReport {
    let mut replay = Replay::default();
    let mut steps = Vec::new();
    for s in &tr.steps {
        if matches!(s.rule, Rule::AckermannRight | Rule::AckermannLeft) {
            let offending: Vec<Inequality> = replay
                .list(s.target)
                .iter()
                .filter(|x| !topologically_sound(x))
                .cloned()
                .collect();
            steps.push(TopoStep {
                step: s.step,
                var: s.var.clone(),
                correct: offending.is_empty(),
                offending,
            });
        }
        if let Err(e) = replay.apply(s) {
            return TopoReport {
                steps,
                replay_error: Some(e),
            };
        }
    }
    TopoReport {
        steps,
        replay_error: None,
    }
}
