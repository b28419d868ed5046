//! Formulas, inequalities and statements of the modal subordination language.
//!
//! The input language has the classical connectives, `box`/`dia` for the modal
//! relation and `sbox`/`sdia` for the subordination relation. The expanded
//! language adds nominals and the four black (adjoint) connectives.

mod parse;
mod render;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub use parse::{parse_formula, parse_statement, ParseError, ParseErrorKind};
pub use render::{render_formula, render_inequality, render_statement};

/// The eight unary modal connectives.
///
/// Each one quantifies over the successors or predecessors of the current
/// point along one of the two relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    Box,
    Dia,
    SBox,
    SDia,
    BBox,
    BDia,
    SBBox,
    SBDia,
}

/// Which accessibility relation a modality reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// The subordination relation `R`.
    Sub,
    /// The modal relation `R'`.
    Modal,
}

impl Modality {
    pub const ALL: [Modality; 8] = [
        Modality::Box,
        Modality::Dia,
        Modality::SBox,
        Modality::SDia,
        Modality::BBox,
        Modality::BDia,
        Modality::SBBox,
        Modality::SBDia,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Box => "box",
            Modality::Dia => "dia",
            Modality::SBox => "sbox",
            Modality::SDia => "sdia",
            Modality::BBox => "bbox",
            Modality::BDia => "bdia",
            Modality::SBBox => "sbbox",
            Modality::SBDia => "sbdia",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Modality> {
        Modality::ALL.into_iter().find(|m| m.keyword() == s)
    }

    pub fn relation(self) -> Relation {
        match self {
            Modality::Box | Modality::Dia | Modality::BBox | Modality::BDia => Relation::Modal,
            _ => Relation::Sub,
        }
    }

    /// True when the modality looks at `{v | w rel v}` rather than `{v | v rel w}`.
    pub fn forward(self) -> bool {
        matches!(
            self,
            Modality::Box | Modality::Dia | Modality::SBBox | Modality::SBDia
        )
    }

    /// Existential (join preserving) modalities.
    pub fn is_diamond(self) -> bool {
        matches!(
            self,
            Modality::Dia | Modality::SDia | Modality::BDia | Modality::SBDia
        )
    }

    pub fn is_black(self) -> bool {
        matches!(
            self,
            Modality::BBox | Modality::BDia | Modality::SBBox | Modality::SBDia
        )
    }

    /// `~m~` expressed as a single modality.
    pub fn dual(self) -> Modality {
        match self {
            Modality::Box => Modality::Dia,
            Modality::Dia => Modality::Box,
            Modality::SBox => Modality::SDia,
            Modality::SDia => Modality::SBox,
            Modality::BBox => Modality::BDia,
            Modality::BDia => Modality::BBox,
            Modality::SBBox => Modality::SBDia,
            Modality::SBDia => Modality::SBBox,
        }
    }

    /// The other half of the adjunction. For a diamond `d` this is the box
    /// `b` with `d x <= y` iff `x <= b y`; for a box it is the matching diamond.
    pub fn adjoint(self) -> Modality {
        match self {
            Modality::Dia => Modality::BBox,
            Modality::BBox => Modality::Dia,
            Modality::BDia => Modality::Box,
            Modality::Box => Modality::BDia,
            Modality::SDia => Modality::SBBox,
            Modality::SBBox => Modality::SDia,
            Modality::SBDia => Modality::SBox,
            Modality::SBox => Modality::SBDia,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Var(String),
    Nom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Modal(Modality, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.into())
    }

    pub fn nom(name: &str) -> Formula {
        Formula::Nom(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn modal(m: Modality, f: Formula) -> Formula {
        Formula::Modal(m, Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::modal(Modality::Dia, f)
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::modal(Modality::Box, f)
    }

    pub fn sdia(f: Formula) -> Formula {
        Formula::modal(Modality::SDia, f)
    }

    pub fn sbox(f: Formula) -> Formula {
        Formula::modal(Modality::SBox, f)
    }

    /// Left-associated join of `items`, `F` when empty.
    pub fn join_all(items: Vec<Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Left-associated meet of `items`, `T` when empty.
    pub fn meet_all(items: Vec<Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) | Formula::Nom(_) => 1,
            Formula::Not(a) | Formula::Modal(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth of connectives; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Var(_) | Formula::Nom(_) => 0,
            Formula::Not(a) | Formula::Modal(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn info(&self) -> FormulaInfo {
        let mut info = FormulaInfo::default();
        self.collect(&mut info);
        info
    }

    fn collect(&self, info: &mut FormulaInfo) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Var(p) => {
                info.prop_vars.insert(p.clone());
            }
            Formula::Nom(i) => {
                info.nominals.insert(i.clone());
            }
            Formula::Not(a) => a.collect(info),
            Formula::Modal(m, a) => {
                if matches!(m, Modality::SDia | Modality::SBox | Modality::SBDia | Modality::SBBox) {
                    info.has_dotted = true;
                }
                if m.is_black() {
                    info.has_black = true;
                }
                a.collect(info);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect(info);
                b.collect(info);
            }
        }
    }

    pub fn contains_var(&self, p: &str) -> bool {
        match self {
            Formula::Var(q) => q == p,
            Formula::Top | Formula::Bot | Formula::Nom(_) => false,
            Formula::Not(a) | Formula::Modal(_, a) => a.contains_var(p),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.contains_var(p) || b.contains_var(p)
            }
        }
    }

    pub fn contains_nom(&self, i: &str) -> bool {
        match self {
            Formula::Nom(j) => j == i,
            Formula::Top | Formula::Bot | Formula::Var(_) => false,
            Formula::Not(a) | Formula::Modal(_, a) => a.contains_nom(i),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.contains_nom(i) || b.contains_nom(i)
            }
        }
    }

    pub fn is_pure(&self) -> bool {
        self.info().prop_vars.is_empty()
    }

    /// Polarity of the occurrences of `p`: `(has positive, has negative)`.
    pub fn polarity(&self, p: &str) -> (bool, bool) {
        let mut acc = (false, false);
        self.polarity_into(p, true, &mut acc);
        acc
    }

    fn polarity_into(&self, p: &str, positive: bool, acc: &mut (bool, bool)) {
        match self {
            Formula::Var(q) if q == p => {
                if positive {
                    acc.0 = true;
                } else {
                    acc.1 = true;
                }
            }
            Formula::Top | Formula::Bot | Formula::Var(_) | Formula::Nom(_) => {}
            Formula::Not(a) => a.polarity_into(p, !positive, acc),
            Formula::Modal(_, a) => a.polarity_into(p, positive, acc),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.polarity_into(p, positive, acc);
                b.polarity_into(p, positive, acc);
            }
            Formula::Imp(a, b) => {
                a.polarity_into(p, !positive, acc);
                b.polarity_into(p, positive, acc);
            }
        }
    }

    /// No negative occurrence of `p` (vacuously true when `p` is absent).
    pub fn positive_in(&self, p: &str) -> bool {
        !self.polarity(p).1
    }

    /// No positive occurrence of `p`.
    pub fn negative_in(&self, p: &str) -> bool {
        !self.polarity(p).0
    }
}

/// Replace every occurrence of the variable `p` in `phi` by `theta`.
pub fn substitute(phi: &Formula, theta: &Formula, p: &str) -> Formula {
    map_atoms(phi, &mut |f| match f {
        Formula::Var(q) if q == p => Some(theta.clone()),
        _ => None,
    })
}

/// Replace every occurrence of the nominal `i` in `phi` by `theta`.
pub fn substitute_nominal(phi: &Formula, theta: &Formula, i: &str) -> Formula {
    map_atoms(phi, &mut |f| match f {
        Formula::Nom(j) if j == i => Some(theta.clone()),
        _ => None,
    })
}

fn map_atoms(phi: &Formula, f: &mut impl FnMut(&Formula) -> Option<Formula>) -> Formula {
    if let Some(r) = f(phi) {
        return r;
    }
    match phi {
        Formula::Top | Formula::Bot | Formula::Var(_) | Formula::Nom(_) => phi.clone(),
        Formula::Not(a) => Formula::not(map_atoms(a, f)),
        Formula::Modal(m, a) => Formula::modal(*m, map_atoms(a, f)),
        Formula::And(a, b) => Formula::and(map_atoms(a, f), map_atoms(b, f)),
        Formula::Or(a, b) => Formula::or(map_atoms(a, f), map_atoms(b, f)),
        Formula::Imp(a, b) => Formula::imp(map_atoms(a, f), map_atoms(b, f)),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaInfo {
    pub prop_vars: BTreeSet<String>,
    pub nominals: BTreeSet<String>,
    /// Some subordination connective (`sdia`, `sbox` or their black adjoints) occurs.
    pub has_dotted: bool,
    pub has_black: bool,
}

impl FormulaInfo {
    pub fn is_pure(&self) -> bool {
        self.prop_vars.is_empty()
    }

    fn merge(&mut self, other: FormulaInfo) {
        self.prop_vars.extend(other.prop_vars);
        self.nominals.extend(other.nominals);
        self.has_dotted |= other.has_dotted;
        self.has_black |= other.has_black;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Leq,
    Prec,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub lhs: Formula,
    pub rel: Rel,
    pub rhs: Formula,
}

impl Inequality {
    pub fn leq(lhs: Formula, rhs: Formula) -> Inequality {
        Inequality { lhs, rel: Rel::Leq, rhs }
    }

    pub fn prec(lhs: Formula, rhs: Formula) -> Inequality {
        Inequality { lhs, rel: Rel::Prec, rhs }
    }

    /// `⊤ ≤ ⊤`, used for empty antecedents.
    pub fn trivial() -> Inequality {
        Inequality::leq(Formula::Top, Formula::Top)
    }

    pub fn is_trivial(&self) -> bool {
        *self == Inequality::trivial()
    }

    /// `a prec b` becomes `sdia a <= b`; `<=` rows are returned unchanged.
    pub fn to_leq(&self) -> Inequality {
        match self.rel {
            Rel::Leq => self.clone(),
            Rel::Prec => Inequality::leq(Formula::sdia(self.lhs.clone()), self.rhs.clone()),
        }
    }

    pub fn info(&self) -> FormulaInfo {
        let mut i = self.lhs.info();
        i.merge(self.rhs.info());
        i
    }

    pub fn is_pure(&self) -> bool {
        self.info().is_pure()
    }

    pub fn contains_var(&self, p: &str) -> bool {
        self.lhs.contains_var(p) || self.rhs.contains_var(p)
    }

    pub fn contains_nom(&self, i: &str) -> bool {
        self.lhs.contains_nom(i) || self.rhs.contains_nom(i)
    }

    pub fn substitute(&self, theta: &Formula, p: &str) -> Inequality {
        Inequality {
            lhs: substitute(&self.lhs, theta, p),
            rel: self.rel,
            rhs: substitute(&self.rhs, theta, p),
        }
    }

    pub fn map(&self, mut f: impl FnMut(&Formula) -> Formula) -> Inequality {
        Inequality {
            lhs: f(&self.lhs),
            rel: self.rel,
            rhs: f(&self.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiInequality {
    pub antecedent: Vec<Inequality>,
    pub consequent: Vec<Inequality>,
}

impl QuasiInequality {
    pub fn new(antecedent: Vec<Inequality>, consequent: Vec<Inequality>) -> QuasiInequality {
        let antecedent = if antecedent.is_empty() {
            alloc::vec![Inequality::trivial()]
        } else {
            antecedent
        };
        QuasiInequality {
            antecedent,
            consequent,
        }
    }

    pub fn info(&self) -> FormulaInfo {
        let mut info = FormulaInfo::default();
        for i in self.antecedent.iter().chain(&self.consequent) {
            info.merge(i.info());
        }
        info
    }

    pub fn prop_vars(&self) -> BTreeSet<String> {
        self.info().prop_vars
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistsStatement {
    pub bound: Vec<String>,
    pub body: Vec<Inequality>,
}

impl ExistsStatement {
    pub fn info(&self) -> FormulaInfo {
        let mut info = FormulaInfo::default();
        for i in &self.body {
            info.merge(i.info());
        }
        info
    }

    /// Variables of the body that are not bound.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = self.info().prop_vars;
        for q in &self.bound {
            vars.remove(q);
        }
        vars
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi2Statement {
    pub antecedent: Vec<Inequality>,
    pub exists: ExistsStatement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Inequality(Inequality),
    Meta(Vec<Inequality>),
    Quasi(QuasiInequality),
    Pi2(Pi2Statement),
}

impl Statement {
    pub fn info(&self) -> FormulaInfo {
        let mut info = FormulaInfo::default();
        match self {
            Statement::Inequality(i) => info = i.info(),
            Statement::Meta(is) => is.iter().for_each(|i| info.merge(i.info())),
            Statement::Quasi(q) => info = q.info(),
            Statement::Pi2(p) => {
                p.antecedent.iter().for_each(|i| info.merge(i.info()));
                info.merge(p.exists.info());
            }
        }
        info
    }

    /// Propositional variables that are not bound by an existential quantifier.
    pub fn free_prop_vars(&self) -> BTreeSet<String> {
        let mut vars = self.info().prop_vars;
        if let Statement::Pi2(p) = self {
            for q in &p.exists.bound {
                let in_antecedent = p.antecedent.iter().any(|i| i.contains_var(q));
                if !in_antecedent {
                    vars.remove(q);
                }
            }
        }
        vars
    }

    /// Statement over the input language: no nominals and no black connectives.
    pub fn is_input_language(&self) -> bool {
        let info = self.info();
        info.nominals.is_empty() && !info.has_black
    }

    /// Views any statement as a quasi-inequality where that makes sense.
    pub fn as_quasi(&self) -> Option<QuasiInequality> {
        match self {
            Statement::Inequality(i) => Some(QuasiInequality::new(Vec::new(), alloc::vec![i.clone()])),
            Statement::Meta(is) => Some(QuasiInequality::new(Vec::new(), is.clone())),
            Statement::Quasi(q) => Some(q.clone()),
            Statement::Pi2(_) => None,
        }
    }
}
