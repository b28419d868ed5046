use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::rules::Rule;
use crate::syntax::Inequality;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Preprocess,
    Reduce,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Preprocess => "preprocess",
            Stage::Reduce => "reduce",
        }
    }
}

/// Which list of inequalities a step rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Antecedent,
    Consequent,
    /// Body of an existential statement.
    Exists,
    /// The system built from the `k`-th preprocessed quasi-inequality.
    System(usize),
}

impl core::fmt::Display for Target {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Target::Antecedent => f.write_str("antecedent"),
            Target::Consequent => f.write_str("consequent"),
            Target::Exists => f.write_str("exists"),
            Target::System(k) => write!(f, "system {k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub stage: Stage,
    pub rule: Rule,
    pub target: Target,
    /// The eliminated variable for Ackermann and monotone steps.
    pub var: Option<String>,
    pub consumed: Vec<Inequality>,
    pub produced: Vec<Inequality>,
    pub fresh: Vec<String>,
    /// Set by first-approximation steps.
    pub goal: Option<Inequality>,
    /// 1 or 2 for the two halves of a Π₂ run.
    pub half: Option<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {step}: consumed inequality not present in {target}")]
    Missing { step: usize, target: Target },
}

/// Removes each consumed inequality (first unused occurrence) and inserts
/// the produced ones where the earliest consumed one was, or at the end.
/// The engine mutates systems only through this function, which is what
/// makes replay exact.
pub fn apply_step(list: &mut Vec<Inequality>, consumed: &[Inequality], produced: &[Inequality]) -> Result<(), ()> {
    let mut taken = alloc::vec![false; list.len()];
    for c in consumed {
        let j = (0..list.len()).find(|&j| !taken[j] && list[j] == *c).ok_or(())?;
        taken[j] = true;
    }
    let at = taken.iter().position(|&t| t).unwrap_or(list.len());
    let mut k = 0;
    list.retain(|_| {
        k += 1;
        !taken[k - 1]
    });
    for (n, x) in produced.iter().enumerate() {
        list.insert(at + n, x.clone());
    }
    Ok(())
}

/// State reconstructed from a trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Replay {
    pub antecedent: Vec<Inequality>,
    pub consequent: Vec<Inequality>,
    pub exists: Vec<Inequality>,
    pub systems: BTreeMap<usize, (Vec<Inequality>, Option<Inequality>)>,
}

impl Replay {
    pub fn list_mut(&mut self, t: Target) -> &mut Vec<Inequality> {
        match t {
            Target::Antecedent => &mut self.antecedent,
            Target::Consequent => &mut self.consequent,
            Target::Exists => &mut self.exists,
            Target::System(k) => &mut self.systems.entry(k).or_default().0,
        }
    }

    pub fn list(&self, t: Target) -> &[Inequality] {
        match t {
            Target::Antecedent => &self.antecedent,
            Target::Consequent => &self.consequent,
            Target::Exists => &self.exists,
            Target::System(k) => self.systems.get(&k).map(|s| &s.0[..]).unwrap_or(&[]),
        }
    }

    /// Applies one step. `input` steps replace the target list outright.
    pub fn apply(&mut self, s: &TraceStep) -> Result<(), ReplayError> {
        if s.rule == Rule::Input {
            *self.list_mut(s.target) = s.produced.clone();
            return Ok(());
        }
        if let (Target::System(k), Some(g)) = (s.target, &s.goal) {
            self.systems.entry(k).or_default().1 = Some(g.clone());
        }
        apply_step(self.list_mut(s.target), &s.consumed, &s.produced).map_err(|()| ReplayError::Missing {
            step: s.step,
            target: s.target,
        })
    }
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn replay(&self) -> Result<Replay, ReplayError> {
        self.replay_half(None)
    }

    /// Replays only the steps of one half (`None` replays everything).
    pub fn replay_half(&self, half: Option<u8>) -> Result<Replay, ReplayError> {
        let mut r = Replay::default();
        for s in self.steps.iter().filter(|s| half.is_none() || s.half == half) {
            r.apply(s)?;
        }
        Ok(r)
    }
}

/// Appends steps with consecutive numbers and a fixed half tag.
#[derive(Clone, Debug, Default)]
pub struct Recorder {
    pub trace: Trace,
    pub half: Option<u8>,
}

impl Recorder {
    pub fn input(&mut self, target: Target, items: &[Inequality]) {
        self.push(TraceStep {
            step: 0,
            stage: Stage::Preprocess,
            rule: Rule::Input,
            target,
            var: None,
            consumed: Vec::new(),
            produced: items.to_vec(),
            fresh: Vec::new(),
            goal: None,
            half: None,
        });
    }

    pub fn push(&mut self, mut s: TraceStep) {
        s.step = self.trace.steps.len();
        s.half = self.half;
        self.trace.steps.push(s);
    }

    /// Rewrites `list` and records the step.
    #[allow(clippy::too_many_arguments)]
    pub fn rewrite(
        &mut self,
        list: &mut Vec<Inequality>,
        stage: Stage,
        rule: Rule,
        target: Target,
        var: Option<String>,
        consumed: Vec<Inequality>,
        produced: Vec<Inequality>,
        fresh: Vec<String>,
    ) {
        apply_step(list, &consumed, &produced).expect("consumed inequalities come from the list");
        self.push(TraceStep {
            step: 0,
            stage,
            rule,
            target,
            var,
            consumed,
            produced,
            fresh,
            goal: None,
            half: None,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula;

    #[test]
    fn apply_step_positions() {
        let x = |n: &str| Inequality::leq(Formula::var(n), Formula::Top);
        let mut l = alloc::vec![x("a"), x("b"), x("c"), x("b")];
        apply_step(&mut l, &[x("c"), x("b")], &[x("d")]).unwrap();
        assert_eq!(l, [x("a"), x("d"), x("b")]);
        apply_step(&mut l, &[], &[x("e")]).unwrap();
        assert_eq!(l, [x("a"), x("d"), x("b"), x("e")]);
        assert!(apply_step(&mut l, &[x("z")], &[]).is_err());
    }
}
