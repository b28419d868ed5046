//! The ALBA engine on quasi-inequalities.
//!
//! A run preprocesses the input, builds one system per consequent inequality
//! with the first-approximation rule, then reduces each system with the
//! residuation, approximation and Ackermann rules until no propositional
//! variable is left. All rewriting goes through the trace recorder, so
//! replaying the trace reproduces every final system exactly.

pub mod engine;
pub mod monitor;
pub mod output;
pub mod preprocess;
pub mod rules;
pub mod trace;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub use monitor::{check_topological_correctness, TopoReport, TopoStep};
pub use output::{finish, render_pure_quasi};
pub use rules::{ackermann, apply_local, AckermannError, AckermannStep, Fresh, Rule, Side};
pub use trace::{Replay, ReplayError, Stage, Target, Trace, TraceStep};

use crate::classify::{certificates, find_certificate, uniform_eliminations, Certificate};
use crate::syntax::{Formula, Inequality, QuasiInequality};
use engine::{Strategy, Stuck};
pub(crate) use trace::Recorder;

/// A system of inequalities with its goal `i ≤ ¬j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub inequalities: Vec<Inequality>,
    pub goal: Option<Inequality>,
    /// Next index for fresh nominals `_k`.
    pub fresh_counter: usize,
}

impl System {
    fn nominals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for x in self.inequalities.iter().chain(&self.goal) {
            out.extend(x.info().nominals);
        }
        out
    }

    fn fresh(&self) -> Fresh {
        Fresh::resume(self.fresh_counter, self.nominals())
    }
}

/// A rule addressed at one inequality (`index`), or at a variable for the
/// elimination rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub index: usize,
    pub var: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("no inequality at index {0}")]
    NoSuchInequality(usize),
    #[error("premise of {0} does not match")]
    Mismatch(Rule),
    #[error("{0} needs a variable")]
    MissingVariable(Rule),
    #[error("ackermann precondition fails: {0:?}")]
    Ackermann(AckermannError),
    #[error("{0} is not a system rule")]
    NotApplicable(Rule),
}

/// Applies one rule to a system. Local rules replace the addressed
/// inequality by their conclusions in place.
pub fn apply_rule(s: &System, r: &RuleInstance) -> Result<System, RuleError> {
    match r.rule {
        Rule::AckermannRight | Rule::AckermannLeft => {
            let p = r.var.as_deref().ok_or(RuleError::MissingVariable(r.rule))?;
            let side = if r.rule == Rule::AckermannRight { Side::Right } else { Side::Left };
            eliminate(s, p, side).map_err(RuleError::Ackermann)
        }
        Rule::EliminateBot | Rule::EliminateTop => {
            let p = r.var.as_deref().ok_or(RuleError::MissingVariable(r.rule))?;
            let t = if r.rule == Rule::EliminateBot { Formula::Bot } else { Formula::Top };
            Ok(System {
                inequalities: s.inequalities.iter().map(|x| x.substitute(&t, p)).collect(),
                goal: s.goal.clone(),
                fresh_counter: s.fresh_counter,
            })
        }
        Rule::Input | Rule::FirstApprox => Err(RuleError::NotApplicable(r.rule)),
        rule => {
            let x = s.inequalities.get(r.index).ok_or(RuleError::NoSuchInequality(r.index))?;
            let mut fresh = s.fresh();
            let (out, _) = apply_local(rule, x, &mut fresh).ok_or(RuleError::Mismatch(rule))?;
            let mut inequalities = s.inequalities.clone();
            inequalities.splice(r.index..=r.index, out);
            Ok(System {
                inequalities,
                goal: s.goal.clone(),
                fresh_counter: fresh.counter(),
            })
        }
    }
}

/// One Ackermann step on `p`. An empty set of bounds substitutes `⊥`
/// (right) or `⊤` (left).
pub fn eliminate(s: &System, p: &str, side: Side) -> Result<System, AckermannError> {
    let step = ackermann(&s.inequalities, p, side)?;
    let mut inequalities = s.inequalities.clone();
    trace::apply_step(&mut inequalities, &step.consumed, &step.produced).expect("consumed from the system");
    Ok(System {
        inequalities,
        goal: s.goal.clone(),
        fresh_counter: s.fresh_counter,
    })
}

/// `Φ ⇒ α ≤ β` becomes `Φ & i ≤ α & β ≤ ¬j` with goal `i ≤ ¬j`. Returns
/// `None` unless there is exactly one consequent inequality.
pub fn first_approximation(q: &QuasiInequality) -> Option<System> {
    let [c] = &q.consequent[..] else {
        return None;
    };
    let mut fresh = Fresh::avoiding(q.info().nominals);
    let (list, goal) = approximate(&q.antecedent, c, &mut fresh);
    Some(System {
        inequalities: list,
        goal: Some(goal),
        fresh_counter: fresh.counter(),
    })
}

fn approximate(ante: &[Inequality], c: &Inequality, fresh: &mut Fresh) -> (Vec<Inequality>, Inequality) {
    let c = c.to_leq();
    let i = Formula::nom(&fresh.nominal());
    let j = Formula::nom(&fresh.nominal());
    let mut list = ante.to_vec();
    list.push(Inequality::leq(i.clone(), c.lhs));
    list.push(Inequality::leq(c.rhs, Formula::not(j.clone())));
    (list, Inequality::leq(i, Formula::not(j)))
}

/// Stage 1 without first approximation: one quasi-inequality per consequent
/// inequality, all in `≤` form.
pub fn preprocess(q: &QuasiInequality) -> (Vec<QuasiInequality>, Trace) {
    let mut rec = Recorder::default();
    let (a, c) = preprocess::preprocess_quasi(&mut rec, &q.antecedent, &q.consequent);
    let out = c
        .into_iter()
        .map(|x| QuasiInequality::new(a.clone(), alloc::vec![x]))
        .collect();
    (out, rec.trace)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaSuccess {
    /// Simplified and canonically named, one per preprocessed consequent.
    pub pure_quasis: Vec<QuasiInequality>,
    /// Final systems with their goals, exactly as the trace leaves them.
    pub raw: Vec<QuasiInequality>,
    pub trace: Trace,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// No rule of the strategy applies and variables remain.
    Stuck,
    StepBudget,
    /// The first half of a Π₂ run could not eliminate the bound variables.
    FirstHalf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaFailure {
    pub system: Vec<Inequality>,
    pub goal: Option<Inequality>,
    pub unresolved: Vec<String>,
    pub trace: Trace,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlbaOutcome {
    Success(AlbaSuccess),
    Failure(AlbaFailure),
}

impl AlbaOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, AlbaOutcome::Success(_))
    }

    pub fn trace(&self) -> &Trace {
        match self {
            AlbaOutcome::Success(s) => &s.trace,
            AlbaOutcome::Failure(f) => &f.trace,
        }
    }

    pub fn success(&self) -> Option<&AlbaSuccess> {
        match self {
            AlbaOutcome::Success(s) => Some(s),
            AlbaOutcome::Failure(_) => None,
        }
    }
}

/// Candidate certificates are tried exhaustively only up to this many variables.
const CANDIDATE_LIMIT: usize = 3;

/// Runs with the certificate found by search. Without one, every candidate
/// (or just the first beyond three variables) is tried in search order and
/// the first success wins; otherwise the first failure is reported.
pub fn run_alba(q: &QuasiInequality) -> AlbaOutcome {
    run_from(Recorder::default(), q)
}

/// Candidate certificates in the order the fallback search tries them.
pub(crate) fn candidates(vars: &[String]) -> Vec<Certificate> {
    let limit = if vars.len() <= CANDIDATE_LIMIT { usize::MAX } else { 1 };
    let mut out: Vec<Certificate> = certificates(vars).take(limit).collect();
    if out.is_empty() {
        out.push(Certificate::default());
    }
    out
}

/// Certificate search and run, appending to the steps already in `base`.
pub(crate) fn run_from(base: Recorder, q: &QuasiInequality) -> AlbaOutcome {
    if let Ok(Some(c)) = find_certificate(q) {
        let mut rec = base;
        let out = run_recorded(&mut rec, q, &c);
        return finish_outcome(rec, out, Some(c));
    }
    let eliminated: BTreeSet<String> = uniform_eliminations(&q.antecedent, &q.consequent)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let vars: Vec<String> = q.prop_vars().into_iter().filter(|p| !eliminated.contains(p)).collect();
    let mut first = None;
    for c in candidates(&vars) {
        let mut rec = base.clone();
        let out = run_recorded(&mut rec, q, &c);
        match finish_outcome(rec, out, None) {
            s @ AlbaOutcome::Success(_) => return s,
            f => {
                first.get_or_insert(f);
            }
        }
    }
    first.expect("at least one candidate")
}

/// Runs the strategy guided by `cert`.
pub fn run_alba_with(q: &QuasiInequality, cert: &Certificate) -> AlbaOutcome {
    let mut rec = Recorder::default();
    let out = run_recorded(&mut rec, q, cert);
    finish_outcome(rec, out, Some(cert.clone()))
}

pub(crate) type Partial = Result<Vec<QuasiInequality>, (Vec<Inequality>, Option<Inequality>, Stuck)>;

pub(crate) fn finish_outcome(rec: Recorder, out: Partial, certificate: Option<Certificate>) -> AlbaOutcome {
    match out {
        Ok(raw) => AlbaOutcome::Success(AlbaSuccess {
            pure_quasis: raw.iter().map(finish).collect(),
            raw,
            trace: rec.trace,
            certificate,
        }),
        Err((system, goal, stuck)) => {
            let (unresolved, reason) = match stuck {
                Stuck::NoRule(v) => (v, FailureReason::Stuck),
                Stuck::Budget(v) => (v, FailureReason::StepBudget),
            };
            AlbaOutcome::Failure(AlbaFailure {
                system,
                goal,
                unresolved,
                trace: rec.trace,
                reason,
            })
        }
    }
}

/// The whole quasi-inequality pipeline, recording into `rec`.
pub(crate) fn run_recorded(rec: &mut Recorder, q: &QuasiInequality, cert: &Certificate) -> Partial {
    let (a, c) = preprocess::preprocess_quasi(rec, &q.antecedent, &q.consequent);
    let strategy = Strategy {
        eps: cert.eps.clone(),
        omega: cert.omega.clone(),
        approximate: true,
        scope: None,
    };
    let mut fresh = Fresh::avoiding(q.info().nominals);
    let mut raw = Vec::new();
    for (k, x) in c.iter().enumerate() {
        let (mut list, goal) = approximate(&a, x, &mut fresh);
        rec.push(TraceStep {
            step: 0,
            stage: Stage::Preprocess,
            rule: Rule::FirstApprox,
            target: Target::System(k),
            var: None,
            consumed: Vec::new(),
            produced: list.clone(),
            fresh: [&goal.lhs, &goal.rhs].iter().flat_map(|f| f.info().nominals).collect(),
            goal: Some(goal.clone()),
            half: None,
        });
        if let Err(stuck) = strategy.run(rec, &mut list, Target::System(k), &mut fresh) {
            return Err((list, Some(goal), stuck));
        }
        raw.push(QuasiInequality::new(list, alloc::vec![goal]));
    }
    Ok(raw)
}
