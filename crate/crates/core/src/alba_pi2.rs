//! ALBA for Π₂-statements `Φ ⇒ ∃q̄ Ψ`.
//!
//! The first half removes the bound variables from `Ψ` without nominals or
//! approximation; the second half is the ordinary engine on `Φ ⇒ Ψ'`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alba::engine::{Strategy, Stuck};
use crate::alba::preprocess::preprocess_exists;
use crate::alba::{candidates, run_alba, run_from, AlbaFailure, AlbaOutcome, FailureReason, Fresh, Recorder, Target, Trace};
use crate::classify::Certificate;
use crate::syntax::{ExistsStatement, Inequality, Pi2Statement, QuasiInequality};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstHalf {
    /// The meta-conjunction left once the bound variables are gone.
    pub body: Vec<Inequality>,
    pub trace: Trace,
    /// `(ε, Ω)` over the bound variables that guided the run, if any were left
    /// after the monotone eliminations.
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstHalfFailure {
    pub body: Vec<Inequality>,
    /// Bound variables that could not be eliminated.
    pub unresolved: Vec<String>,
    pub trace: Trace,
}

type Halfway = Result<(Vec<Inequality>, Option<Certificate>), (Vec<Inequality>, Vec<String>)>;

fn first_half_recorded(rec: &mut Recorder, e: &ExistsStatement) -> Halfway {
    let body = preprocess_exists(rec, &e.body, &e.bound);
    let present: BTreeSet<String> = body.iter().flat_map(|x| x.info().prop_vars).collect();
    let bound: Vec<String> = e.bound.iter().filter(|q| present.contains(*q)).cloned().collect();
    if bound.is_empty() {
        return Ok((body, None));
    }
    let mut first = None;
    for c in candidates(&bound) {
        let strategy = Strategy {
            eps: c.eps.clone(),
            omega: c.omega.clone(),
            approximate: false,
            scope: Some(bound.iter().cloned().collect()),
        };
        let mut attempt = rec.clone();
        let mut list = body.clone();
        match strategy.run(&mut attempt, &mut list, Target::Exists, &mut Fresh::default()) {
            Ok(()) => {
                *rec = attempt;
                return Ok((list, Some(c)));
            }
            Err(Stuck::NoRule(v) | Stuck::Budget(v)) => {
                first.get_or_insert((attempt, list, v));
            }
        }
    }
    let (attempt, list, v) = first.expect("at least one candidate");
    *rec = attempt;
    Err((list, v))
}

/// Eliminates the bound variables of `e`, steps tagged with half 1.
pub fn first_half(e: &ExistsStatement) -> Result<FirstHalf, FirstHalfFailure> {
    let mut rec = Recorder {
        half: Some(1),
        ..Recorder::default()
    };
    match first_half_recorded(&mut rec, e) {
        Ok((body, certificate)) => Ok(FirstHalf {
            body,
            trace: rec.trace,
            certificate,
        }),
        Err((body, unresolved)) => Err(FirstHalfFailure {
            body,
            unresolved,
            trace: rec.trace,
        }),
    }
}

/// The quasi-inequality handed to the second half.
pub fn second_half_input(s: &Pi2Statement, body: Vec<Inequality>) -> QuasiInequality {
    let body = if body.is_empty() {
        alloc::vec![Inequality::trivial()]
    } else {
        body
    };
    QuasiInequality::new(s.antecedent.clone(), body)
}

pub fn run_alba_pi2(s: &Pi2Statement) -> AlbaOutcome {
    if s.exists.bound.is_empty() {
        return run_alba(&second_half_input(s, s.exists.body.clone()));
    }
    let mut rec = Recorder {
        half: Some(1),
        ..Recorder::default()
    };
    match first_half_recorded(&mut rec, &s.exists) {
        Ok((body, _)) => {
            rec.half = Some(2);
            run_from(rec, &second_half_input(s, body))
        }
        Err((system, unresolved)) => AlbaOutcome::Failure(AlbaFailure {
            system,
            goal: None,
            unresolved,
            trace: rec.trace,
            reason: FailureReason::FirstHalf,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alba::render_pure_quasi;
    use crate::syntax::{parse_statement, render_inequality, Statement};

    fn pi2(src: &str) -> Pi2Statement {
        match parse_statement(src).unwrap() {
            Statement::Pi2(p) => p,
            other => panic!("{other:?}"),
        }
    }

    fn body(src: &str) -> Vec<String> {
        let e = pi2(src).exists;
        first_half(&e).unwrap().body.iter().map(render_inequality).collect()
    }

    #[test]
    fn first_half_examples() {
        assert_eq!(body("T <= T => E c. sdia p <= c & sdia c <= q"), ["sdia sdia p <= q"]);
        assert_eq!(body("T <= T => E c. T <= T"), ["T <= T"]);
        let e = pi2("T <= T => E c. c <= dia c & dia c <= c").exists;
        assert_eq!(first_half(&e).unwrap_err().unresolved, ["c"]);
    }

    #[test]
    fn transitivity() {
        let out = run_alba_pi2(&pi2("p prec q => E c. p prec c & c prec q"));
        let s = out.success().expect("success");
        let shown: Vec<String> = s.pure_quasis.iter().map(render_pure_quasi).collect();
        assert_eq!(shown, ["forall @i. sdia sdia @i <= sdia @i"]);
        let halves: BTreeSet<Option<u8>> = s.trace.steps.iter().map(|t| t.half).collect();
        assert_eq!(halves, [Some(1), Some(2)].into_iter().collect());
        assert!(crate::alba::check_topological_correctness(&s.trace).all_correct());
    }

    #[test]
    fn empty_bound_list_is_a_plain_run() {
        let s = pi2("p prec q => E c. p <= q");
        let mut plain = s.clone();
        plain.exists.bound.clear();
        let q = second_half_input(&plain, plain.exists.body.clone());
        assert_eq!(run_alba_pi2(&plain), run_alba(&q));
    }

    #[test]
    fn failing_first_half_skips_the_second() {
        match run_alba_pi2(&pi2("p <= q => E c. c <= dia c & dia c <= c")) {
            AlbaOutcome::Failure(f) => {
                assert_eq!(f.reason, FailureReason::FirstHalf);
                assert!(f.trace.steps.iter().all(|t| t.half == Some(1)));
            }
            other => panic!("{other:?}"),
        }
    }
}
