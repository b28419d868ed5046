//! First-order frame language and the standard translation into it.

mod parse;
mod simplify;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{Formula, Inequality, Modality, QuasiInequality, Rel, Relation, Statement};

pub use parse::{parse_fo, FoParseError};
pub use simplify::{canonical_names, simplify_fo};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoFormula {
    True,
    False,
    /// `R(x,y)` or `R'(x,y)`.
    Rel(Relation, String, String),
    /// Unary predicate for a propositional variable.
    Pred(String, String),
    Eq(String, String),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Imp(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

impl FoFormula {
    pub fn not(a: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(a))
    }
    pub fn and(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Imp(Box::new(a), Box::new(b))
    }
    pub fn forall(x: &str, a: FoFormula) -> FoFormula {
        FoFormula::Forall(x.into(), Box::new(a))
    }
    pub fn exists(x: &str, a: FoFormula) -> FoFormula {
        FoFormula::Exists(x.into(), Box::new(a))
    }
    pub fn rel(r: Relation, x: &str, y: &str) -> FoFormula {
        FoFormula::Rel(r, x.into(), y.into())
    }

    pub fn conj(items: Vec<FoFormula>) -> FoFormula {
        items.into_iter().reduce(FoFormula::and).unwrap_or(FoFormula::True)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |x: &String, bound: &Vec<String>| {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        };
        match self {
            FoFormula::True | FoFormula::False => {}
            FoFormula::Rel(_, x, y) | FoFormula::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            FoFormula::Pred(_, x) => note(x, bound),
            FoFormula::Not(a) => a.free_into(bound, out),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Imp(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
                bound.push(x.clone());
                a.free_into(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name used, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            FoFormula::True | FoFormula::False => {}
            FoFormula::Rel(_, x, y) | FoFormula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            FoFormula::Pred(_, x) => {
                out.insert(x.clone());
            }
            FoFormula::Not(a) => a.all_vars(out),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Imp(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
                out.insert(x.clone());
                a.all_vars(out);
            }
        }
    }

    pub fn uses_relation(&self, r: Relation) -> bool {
        match self {
            FoFormula::Rel(s, ..) => *s == r,
            FoFormula::True | FoFormula::False | FoFormula::Pred(..) | FoFormula::Eq(..) => false,
            FoFormula::Not(a) | FoFormula::Forall(_, a) | FoFormula::Exists(_, a) => {
                a.uses_relation(r)
            }
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Imp(a, b) => {
                a.uses_relation(r) || b.uses_relation(r)
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FoFormula::True
            | FoFormula::False
            | FoFormula::Rel(..)
            | FoFormula::Pred(..)
            | FoFormula::Eq(..) => 1,
            FoFormula::Not(a) | FoFormula::Forall(_, a) | FoFormula::Exists(_, a) => 1 + a.size(),
            FoFormula::And(a, b) | FoFormula::Or(a, b) | FoFormula::Imp(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

/// Supplies `x0, x1, ...`, skipping names that are already taken.
#[derive(Clone, Debug, Default)]
pub struct VarSupply {
    next: usize,
    taken: BTreeSet<String>,
}

impl VarSupply {
    pub fn avoiding(taken: BTreeSet<String>) -> VarSupply {
        VarSupply { next: 0, taken }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("x{}", self.next);
            self.next += 1;
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }
}

/// `ST_x(phi)`. Nominals translate to equalities with a variable of the same name.
pub fn standard_translation(phi: &Formula, x: &str, supply: &mut VarSupply) -> FoFormula {
    match phi {
        Formula::Top => FoFormula::True,
        Formula::Bot => FoFormula::False,
        Formula::Var(p) => FoFormula::Pred(p.clone(), x.into()),
        Formula::Nom(i) => FoFormula::Eq(x.into(), i.clone()),
        Formula::Not(a) => FoFormula::not(standard_translation(a, x, supply)),
        Formula::And(a, b) => FoFormula::and(
            standard_translation(a, x, supply),
            standard_translation(b, x, supply),
        ),
        Formula::Or(a, b) => FoFormula::or(
            standard_translation(a, x, supply),
            standard_translation(b, x, supply),
        ),
        Formula::Imp(a, b) => FoFormula::imp(
            standard_translation(a, x, supply),
            standard_translation(b, x, supply),
        ),
        Formula::Modal(m, a) => {
            let y = supply.fresh();
            let edge = if m.forward() {
                FoFormula::rel(m.relation(), x, &y)
            } else {
                FoFormula::rel(m.relation(), &y, x)
            };
            let body = standard_translation(a, &y, supply);
            if m.is_diamond() {
                FoFormula::Exists(y, Box::new(FoFormula::and(edge, body)))
            } else {
                FoFormula::Forall(y, Box::new(FoFormula::imp(edge, body)))
            }
        }
    }
}

fn translate_inequality(i: &Inequality, supply: &mut VarSupply) -> FoFormula {
    let x = supply.fresh();
    let lhs = match i.rel {
        Rel::Leq => i.lhs.clone(),
        Rel::Prec => Formula::modal(Modality::SDia, i.lhs.clone()),
    };
    let a = standard_translation(&lhs, &x, supply);
    let b = standard_translation(&i.rhs, &x, supply);
    FoFormula::Forall(x, Box::new(FoFormula::imp(a, b)))
}

fn translate_all(is: &[Inequality], supply: &mut VarSupply) -> FoFormula {
    FoFormula::conj(is.iter().map(|i| translate_inequality(i, supply)).collect())
}

/// Translation of an inequality, meta-conjunction or quasi-inequality.
///
/// Nominals are closed off with universal quantifiers in order of first
/// appearance, so pure statements become first-order sentences. `None` for
/// statements with existential propositional quantifiers.
pub fn standard_translation_statement(s: &Statement) -> Option<FoFormula> {
    let mut noms: Vec<String> = Vec::new();
    let mut note = |is: &[Inequality]| {
        for i in is {
            nominal_order(&i.lhs, &mut noms);
            nominal_order(&i.rhs, &mut noms);
        }
    };
    match s {
        Statement::Inequality(i) => note(core::slice::from_ref(i)),
        Statement::Meta(is) => note(is),
        Statement::Quasi(q) => {
            note(&q.antecedent);
            note(&q.consequent);
        }
        Statement::Pi2(_) => return None,
    }
    let mut supply = VarSupply::avoiding(noms.iter().cloned().collect());
    let body = match s {
        Statement::Inequality(i) => translate_inequality(i, &mut supply),
        Statement::Meta(is) => translate_all(is, &mut supply),
        Statement::Quasi(q) => FoFormula::imp(
            translate_all(&q.antecedent, &mut supply),
            translate_all(&q.consequent, &mut supply),
        ),
        Statement::Pi2(_) => unreachable!(),
    };
    Some(
        noms.iter()
            .rev()
            .fold(body, |acc, i| FoFormula::Forall(i.clone(), Box::new(acc))),
    )
}

/// First-order condition of a set of pure quasi-inequalities: the conjunction
/// of their translations, simplified and with canonical variable names.
pub fn fo_correspondent(qs: &[QuasiInequality]) -> FoFormula {
    let parts = qs
        .iter()
        .filter_map(|q| standard_translation_statement(&Statement::Quasi(q.clone())))
        .collect();
    canonical_names(&simplify_fo(&FoFormula::conj(parts)))
}

fn nominal_order(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Nom(i) => {
            if !out.contains(i) {
                out.push(i.clone());
            }
        }
        Formula::Top | Formula::Bot | Formula::Var(_) => {}
        Formula::Not(a) | Formula::Modal(_, a) => nominal_order(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            nominal_order(a, out);
            nominal_order(b, out);
        }
    }
}

fn fo_prec(f: &FoFormula) -> u8 {
    match f {
        FoFormula::Forall(..) | FoFormula::Exists(..) => 0,
        FoFormula::Imp(..) => 1,
        FoFormula::Or(..) => 2,
        FoFormula::And(..) => 3,
        _ => 4,
    }
}

fn write_fo(out: &mut String, f: &FoFormula) {
    let child = |out: &mut String, g: &FoFormula, parens: bool| {
        if parens {
            out.push('(');
            write_fo(out, g);
            out.push(')');
        } else {
            write_fo(out, g);
        }
    };
    match f {
        FoFormula::True => out.push('T'),
        FoFormula::False => out.push('F'),
        FoFormula::Rel(r, x, y) => {
            out.push_str(match r {
                Relation::Sub => "R(",
                Relation::Modal => "R'(",
            });
            out.push_str(x);
            out.push(',');
            out.push_str(y);
            out.push(')');
        }
        FoFormula::Pred(p, x) => {
            out.push_str(p);
            out.push('(');
            out.push_str(x);
            out.push(')');
        }
        FoFormula::Eq(x, y) => {
            out.push_str(x);
            out.push_str(" = ");
            out.push_str(y);
        }
        FoFormula::Not(a) => {
            out.push('~');
            child(out, a, fo_prec(a) < 4 || matches!(**a, FoFormula::Eq(..)));
        }
        FoFormula::And(a, b) | FoFormula::Or(a, b) => {
            let p = fo_prec(f);
            child(out, a, fo_prec(a) < p);
            out.push_str(if p == 3 { " & " } else { " | " });
            child(out, b, fo_prec(b) <= p);
        }
        FoFormula::Imp(a, b) => {
            child(out, a, fo_prec(a) <= 1);
            out.push_str(" -> ");
            child(out, b, fo_prec(b) < 1);
        }
        FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
            out.push_str(if matches!(f, FoFormula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(x);
            out.push_str(". ");
            write_fo(out, a);
        }
    }
}

/// ASCII rendering, e.g. `forall w. R(w,w)`; `parse_fo` inverts it.
pub fn render_fo(f: &FoFormula) -> String {
    let mut s = String::new();
    write_fo(&mut s, f);
    s
}

/// S-expression dump, handy for diffing.
pub fn render_fo_sexpr(f: &FoFormula) -> String {
    match f {
        FoFormula::True => "true".into(),
        FoFormula::False => "false".into(),
        FoFormula::Rel(Relation::Sub, x, y) => format!("(R {x} {y})"),
        FoFormula::Rel(Relation::Modal, x, y) => format!("(R' {x} {y})"),
        FoFormula::Pred(p, x) => format!("({p} {x})"),
        FoFormula::Eq(x, y) => format!("(= {x} {y})"),
        FoFormula::Not(a) => format!("(not {})", render_fo_sexpr(a)),
        FoFormula::And(a, b) => format!("(and {} {})", render_fo_sexpr(a), render_fo_sexpr(b)),
        FoFormula::Or(a, b) => format!("(or {} {})", render_fo_sexpr(a), render_fo_sexpr(b)),
        FoFormula::Imp(a, b) => format!("(-> {} {})", render_fo_sexpr(a), render_fo_sexpr(b)),
        FoFormula::Forall(x, a) => format!("(forall {x} {})", render_fo_sexpr(a)),
        FoFormula::Exists(x, a) => format!("(exists {x} {})", render_fo_sexpr(a)),
    }
}

impl core::fmt::Display for FoFormula {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&render_fo(self))
    }
}
