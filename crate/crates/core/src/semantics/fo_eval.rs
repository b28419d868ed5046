use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{FiniteFrame, SemanticsError, Valuation, WorldSet};
use crate::fol::FoFormula;
use crate::syntax::Relation;

#[derive(Clone, Debug)]
enum Node {
    True,
    False,
    Rel(Relation, usize, usize),
    Pred(usize, usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// First-order formula with variables resolved to environment slots.
#[derive(Clone, Debug)]
pub struct CompiledFo {
    root: Node,
    /// Free individual variables, occupying the first slots.
    pub free: Vec<String>,
    /// Predicate symbols in slot order.
    pub preds: Vec<String>,
    slots: usize,
}

impl CompiledFo {
    pub fn compile(f: &FoFormula) -> CompiledFo {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut scope: Vec<(String, usize)> = free.iter().cloned().zip(0..).collect();
        let mut preds = Vec::new();
        let mut slots = free.len();
        let root = build(f, &mut scope, &mut slots, &mut preds);
        CompiledFo {
            root,
            free,
            preds,
            slots,
        }
    }

    /// `env` must hold a world for every free variable, in `free` order.
    pub fn eval(&self, frame: &FiniteFrame, preds: &[WorldSet], env: &[usize]) -> bool {
        let mut e = alloc::vec![0usize; self.slots.max(1)];
        e[..env.len()].copy_from_slice(env);
        go(&self.root, frame, preds, &mut e)
    }

    /// Truth of a sentence without predicate symbols.
    pub fn eval_sentence(&self, frame: &FiniteFrame) -> bool {
        self.eval(frame, &alloc::vec![0; self.preds.len()], &[])
    }
}

fn build(
    f: &FoFormula,
    scope: &mut Vec<(String, usize)>,
    slots: &mut usize,
    preds: &mut Vec<String>,
) -> Node {
    let look = |x: &String, scope: &Vec<(String, usize)>| {
        scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, k)| *k)
            .expect("free variables are pre-bound")
    };
    match f {
        FoFormula::True => Node::True,
        FoFormula::False => Node::False,
        FoFormula::Rel(r, x, y) => Node::Rel(*r, look(x, scope), look(y, scope)),
        FoFormula::Pred(p, x) => {
            let k = match preds.iter().position(|q| q == p) {
                Some(k) => k,
                None => {
                    preds.push(p.clone());
                    preds.len() - 1
                }
            };
            Node::Pred(k, look(x, scope))
        }
        FoFormula::Eq(x, y) => Node::Eq(look(x, scope), look(y, scope)),
        FoFormula::Not(a) => Node::Not(Box::new(build(a, scope, slots, preds))),
        FoFormula::And(a, b) => Node::And(
            Box::new(build(a, scope, slots, preds)),
            Box::new(build(b, scope, slots, preds)),
        ),
        FoFormula::Or(a, b) => Node::Or(
            Box::new(build(a, scope, slots, preds)),
            Box::new(build(b, scope, slots, preds)),
        ),
        FoFormula::Imp(a, b) => Node::Imp(
            Box::new(build(a, scope, slots, preds)),
            Box::new(build(b, scope, slots, preds)),
        ),
        FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
            let k = *slots;
            *slots += 1;
            scope.push((x.clone(), k));
            let body = Box::new(build(a, scope, slots, preds));
            scope.pop();
            if matches!(f, FoFormula::Forall(..)) {
                Node::Forall(k, body)
            } else {
                Node::Exists(k, body)
            }
        }
    }
}

fn go(n: &Node, frame: &FiniteFrame, preds: &[WorldSet], env: &mut [usize]) -> bool {
    match n {
        Node::True => true,
        Node::False => false,
        Node::Rel(r, x, y) => frame.holds(*r, env[*x], env[*y]),
        Node::Pred(p, x) => preds[*p] >> env[*x] & 1 == 1,
        Node::Eq(x, y) => env[*x] == env[*y],
        Node::Not(a) => !go(a, frame, preds, env),
        Node::And(a, b) => go(a, frame, preds, env) && go(b, frame, preds, env),
        Node::Or(a, b) => go(a, frame, preds, env) || go(b, frame, preds, env),
        Node::Imp(a, b) => !go(a, frame, preds, env) || go(b, frame, preds, env),
        Node::Forall(k, a) => (0..frame.size()).all(|w| {
            env[*k] = w;
            go(a, frame, preds, env)
        }),
        Node::Exists(k, a) => (0..frame.size()).any(|w| {
            env[*k] = w;
            go(a, frame, preds, env)
        }),
    }
}

/// Truth of `f` in the model given by `frame` and `val`.
///
/// Predicate `p` denotes `val.props[p]`. Free individual variables are looked
/// up in `assignment` first and then among the nominals of `val`.
pub fn eval_fo(
    frame: &FiniteFrame,
    val: &Valuation,
    f: &FoFormula,
    assignment: &BTreeMap<String, usize>,
) -> Result<bool, SemanticsError> {
    let c = CompiledFo::compile(f);
    let preds = c
        .preds
        .iter()
        .map(|p| val.props.get(p).copied().ok_or_else(|| SemanticsError::UnassignedVar(p.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let env = c
        .free
        .iter()
        .map(|x| {
            assignment
                .get(x)
                .or_else(|| val.noms.get(x))
                .copied()
                .ok_or_else(|| SemanticsError::UnassignedNominal(x.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(&w) = env.iter().find(|&&w| w >= frame.size()) {
        return Err(SemanticsError::WorldOutOfRange(w));
    }
    Ok(c.eval(frame, &preds, &env))
}
