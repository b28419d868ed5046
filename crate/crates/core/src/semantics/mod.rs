//! Finite frames, valuations and model checking.
//!
//! Worlds are `0..size` and subsets of worlds are bitmasks, so frames have at
//! most 64 points. Formulas are compiled to postfix code once and evaluated
//! against many frames and valuations.

mod dual;
mod fo_eval;
mod oracle;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::syntax::{Formula, Inequality, Modality, Rel, Relation, Statement};

pub use dual::{dual_algebra, AxiomReport, DualAlgebra};
pub use fo_eval::{eval_fo, CompiledFo};
pub use oracle::{
    equivalence_oracle, first_disagreement, first_invalid_frame, frame_at, frame_count, FrameBudget, OracleJob,
    OracleVerdict,
};

/// Subset of the worlds of a frame, as a bitmask.
pub type WorldSet = u64;

pub const MAX_WORLDS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("frame size {0} is outside 1..=64")]
    BadSize(usize),
    #[error("world {0} is out of range")]
    WorldOutOfRange(usize),
    #[error("no value for propositional variable {0}")]
    UnassignedVar(String),
    #[error("no value for nominal or individual variable {0}")]
    UnassignedNominal(String),
    #[error("admissible family is not closed: {0}")]
    NotClosed(&'static str),
    #[error("statement has existential quantifiers and cannot be used here")]
    Quantified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFrame {
    size: usize,
    /// `succ[rel][w]` is the set of `v` with `w rel v`.
    succ: [Vec<WorldSet>; 2],
    pred: [Vec<WorldSet>; 2],
}

fn rel_index(r: Relation) -> usize {
    match r {
        Relation::Sub => 0,
        Relation::Modal => 1,
    }
}

impl FiniteFrame {
    /// `r` is the subordination relation, `rp` the modal relation.
    pub fn new(
        size: usize,
        r: &[(usize, usize)],
        rp: &[(usize, usize)],
    ) -> Result<FiniteFrame, SemanticsError> {
        if size == 0 || size > MAX_WORLDS {
            return Err(SemanticsError::BadSize(size));
        }
        let mut f = FiniteFrame {
            size,
            succ: [alloc::vec![0; size], alloc::vec![0; size]],
            pred: [alloc::vec![0; size], alloc::vec![0; size]],
        };
        for (k, pairs) in [r, rp].into_iter().enumerate() {
            for &(w, v) in pairs {
                if w >= size {
                    return Err(SemanticsError::WorldOutOfRange(w));
                }
                if v >= size {
                    return Err(SemanticsError::WorldOutOfRange(v));
                }
                f.succ[k][w] |= 1 << v;
                f.pred[k][v] |= 1 << w;
            }
        }
        Ok(f)
    }

    /// Frame from adjacency bitmasks: bit `w*size + v` of `r` is `R(w,v)`.
    pub fn from_masks(size: usize, r: u64, rp: u64) -> FiniteFrame {
        let pairs = |m: u64| -> Vec<(usize, usize)> {
            (0..size * size)
                .filter(|b| m >> b & 1 == 1)
                .map(|b| (b / size, b % size))
                .collect()
        };
        FiniteFrame::new(size, &pairs(r), &pairs(rp)).expect("size checked by caller")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> WorldSet {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    pub fn holds(&self, r: Relation, w: usize, v: usize) -> bool {
        self.succ[rel_index(r)][w] >> v & 1 == 1
    }

    pub fn pairs(&self, r: Relation) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for w in 0..self.size {
            for v in 0..self.size {
                if self.holds(r, w, v) {
                    out.push((w, v));
                }
            }
        }
        out
    }

    pub fn successors(&self, r: Relation, w: usize) -> WorldSet {
        self.succ[rel_index(r)][w]
    }

    pub fn predecessors(&self, r: Relation, w: usize) -> WorldSet {
        self.pred[rel_index(r)][w]
    }

    /// `R[u]`, the forward image of a set.
    pub fn image(&self, r: Relation, u: WorldSet) -> WorldSet {
        let mut out = 0;
        for w in 0..self.size {
            if u >> w & 1 == 1 {
                out |= self.succ[rel_index(r)][w];
            }
        }
        out
    }

    /// Extension of `m phi` given the extension `u` of `phi`.
    pub fn apply(&self, m: Modality, u: WorldSet) -> WorldSet {
        let table = if m.forward() {
            &self.succ[rel_index(m.relation())]
        } else {
            &self.pred[rel_index(m.relation())]
        };
        let mut out = 0;
        if m.is_diamond() {
            for (w, s) in table.iter().enumerate() {
                if s & u != 0 {
                    out |= 1 << w;
                }
            }
        } else {
            for (w, s) in table.iter().enumerate() {
                if s & !u == 0 {
                    out |= 1 << w;
                }
            }
        }
        out
    }
}

/// Assignment of subsets to propositional variables and points to nominals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub props: BTreeMap<String, WorldSet>,
    pub noms: BTreeMap<String, usize>,
}

impl Valuation {
    pub fn with_prop(mut self, p: &str, s: WorldSet) -> Valuation {
        self.props.insert(p.into(), s);
        self
    }

    pub fn with_nom(mut self, i: &str, w: usize) -> Valuation {
        self.noms.insert(i.into(), w);
        self
    }
}

/// Where propositional variables (and existential witnesses) range.
#[derive(Clone, Copy, Debug)]
pub enum ValuationMode<'a> {
    Arbitrary,
    Admissible(&'a AdmissibleFamily),
}

/// Family of subsets standing in for the clopens of a descriptive frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleFamily {
    sets: Vec<WorldSet>,
}

impl AdmissibleFamily {
    /// Checks that the family contains the empty and full sets and is closed
    /// under union, intersection, complement and preimage along `R'`.
    pub fn new(frame: &FiniteFrame, sets: &[WorldSet]) -> Result<AdmissibleFamily, SemanticsError> {
        let full = frame.full();
        let mut v: Vec<WorldSet> = sets.iter().map(|s| s & full).collect();
        v.sort_unstable();
        v.dedup();
        let has = |s: WorldSet| v.binary_search(&s).is_ok();
        if !has(0) || !has(full) {
            return Err(SemanticsError::NotClosed("must contain the empty and the full set"));
        }
        for &a in &v {
            if !has(full & !a) {
                return Err(SemanticsError::NotClosed("complement"));
            }
            if !has(frame.apply(Modality::Dia, a)) {
                return Err(SemanticsError::NotClosed("preimage along R'"));
            }
            for &b in &v {
                if !has(a | b) {
                    return Err(SemanticsError::NotClosed("union"));
                }
                if !has(a & b) {
                    return Err(SemanticsError::NotClosed("intersection"));
                }
            }
        }
        Ok(AdmissibleFamily { sets: v })
    }

    pub fn powerset(frame: &FiniteFrame) -> AdmissibleFamily {
        AdmissibleFamily {
            sets: (0..=frame.full()).collect(),
        }
    }

    pub fn sets(&self) -> &[WorldSet] {
        &self.sets
    }

    pub fn contains(&self, s: WorldSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Top,
    Bot,
    Var(usize),
    Nom(usize),
    Not,
    And,
    Or,
    Imp,
    Modal(Modality),
}

/// Formula in postfix form with variables and nominals resolved to slots.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    ops: Vec<Op>,
}

/// Names of the variable and nominal slots shared by a group of compiled formulas.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    pub vars: Vec<String>,
    pub noms: Vec<String>,
}

impl Symbols {
    fn var_slot(&mut self, p: &str) -> usize {
        slot(&mut self.vars, p)
    }

    fn nom_slot(&mut self, i: &str) -> usize {
        slot(&mut self.noms, i)
    }
}

fn slot(v: &mut Vec<String>, name: &str) -> usize {
    match v.iter().position(|x| x == name) {
        Some(k) => k,
        None => {
            v.push(name.into());
            v.len() - 1
        }
    }
}

impl CompiledFormula {
    pub fn compile(f: &Formula, syms: &mut Symbols) -> CompiledFormula {
        let mut ops = Vec::new();
        emit(f, syms, &mut ops);
        CompiledFormula { ops }
    }

    /// Extension of the formula; `vars` and `noms` are indexed by slot.
    pub fn eval(
        &self,
        frame: &FiniteFrame,
        vars: &[WorldSet],
        noms: &[usize],
        stack: &mut Vec<WorldSet>,
    ) -> WorldSet {
        let full = frame.full();
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Top => full,
                Op::Bot => 0,
                Op::Var(k) => vars[k],
                Op::Nom(k) => 1 << noms[k],
                Op::Not => {
                    let a = stack.pop().unwrap();
                    full & !a
                }
                Op::Modal(m) => {
                    let a = stack.pop().unwrap();
                    frame.apply(m, a)
                }
                Op::And | Op::Or | Op::Imp => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    match *op {
                        Op::And => a & b,
                        Op::Or => a | b,
                        _ => (full & !a) | b,
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().unwrap()
    }
}

fn emit(f: &Formula, syms: &mut Symbols, ops: &mut Vec<Op>) {
    match f {
        Formula::Top => ops.push(Op::Top),
        Formula::Bot => ops.push(Op::Bot),
        Formula::Var(p) => ops.push(Op::Var(syms.var_slot(p))),
        Formula::Nom(i) => ops.push(Op::Nom(syms.nom_slot(i))),
        Formula::Not(a) => {
            emit(a, syms, ops);
            ops.push(Op::Not);
        }
        Formula::Modal(m, a) => {
            emit(a, syms, ops);
            ops.push(Op::Modal(*m));
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            emit(a, syms, ops);
            emit(b, syms, ops);
            ops.push(match f {
                Formula::And(..) => Op::And,
                Formula::Or(..) => Op::Or,
                _ => Op::Imp,
            });
        }
    }
}

/// An inequality compiled as `lhs <= rhs`, with `prec` turned into `sdia`.
#[derive(Clone, Debug)]
pub struct CompiledInequality {
    lhs: CompiledFormula,
    rhs: CompiledFormula,
}

impl CompiledInequality {
    pub fn compile(i: &Inequality, syms: &mut Symbols) -> CompiledInequality {
        let i = i.to_leq();
        CompiledInequality {
            lhs: CompiledFormula::compile(&i.lhs, syms),
            rhs: CompiledFormula::compile(&i.rhs, syms),
        }
    }

    pub fn holds(
        &self,
        frame: &FiniteFrame,
        vars: &[WorldSet],
        noms: &[usize],
        stack: &mut Vec<WorldSet>,
    ) -> bool {
        let a = self.lhs.eval(frame, vars, noms, stack);
        let b = self.rhs.eval(frame, vars, noms, stack);
        a & !b == 0
    }
}

fn all_hold(
    is: &[CompiledInequality],
    frame: &FiniteFrame,
    vars: &[WorldSet],
    noms: &[usize],
    stack: &mut Vec<WorldSet>,
) -> bool {
    is.iter().all(|i| i.holds(frame, vars, noms, stack))
}

/// A statement ready for repeated validity checks.
///
/// Free variables occupy the first slots; existentially bound ones follow.
#[derive(Clone, Debug)]
pub struct CompiledStatement {
    pub symbols: Symbols,
    free_vars: usize,
    antecedent: Vec<CompiledInequality>,
    consequent: Vec<CompiledInequality>,
    /// Number of existentially bound variables (zero for quasi-inequalities).
    bound: usize,
}

impl CompiledStatement {
    pub fn compile(s: &Statement) -> CompiledStatement {
        let mut syms = Symbols::default();
        let (ante, cons, bound): (Vec<Inequality>, Vec<Inequality>, Vec<String>) = match s {
            Statement::Inequality(i) => (Vec::new(), alloc::vec![i.clone()], Vec::new()),
            Statement::Meta(is) => (Vec::new(), is.clone(), Vec::new()),
            Statement::Quasi(q) => (q.antecedent.clone(), q.consequent.clone(), Vec::new()),
            Statement::Pi2(p) => (
                p.antecedent.clone(),
                p.exists.body.clone(),
                p.exists.bound.clone(),
            ),
        };
        for p in s.free_prop_vars() {
            syms.var_slot(&p);
        }
        let free_vars = syms.vars.len();
        for q in &bound {
            syms.var_slot(q);
        }
        let antecedent = ante.iter().map(|i| CompiledInequality::compile(i, &mut syms)).collect();
        let consequent = cons.iter().map(|i| CompiledInequality::compile(i, &mut syms)).collect();
        CompiledStatement {
            free_vars,
            bound: syms.vars.len() - free_vars,
            symbols: syms,
            antecedent,
            consequent,
        }
    }

    /// Truth under one assignment of the free variables and nominals.
    pub fn holds_at(
        &self,
        frame: &FiniteFrame,
        vars: &mut [WorldSet],
        noms: &[usize],
        domain: &[WorldSet],
        stack: &mut Vec<WorldSet>,
    ) -> bool {
        if !all_hold(&self.antecedent, frame, vars, noms, stack) {
            return true;
        }
        if self.bound == 0 {
            return all_hold(&self.consequent, frame, vars, noms, stack);
        }
        let mut idx = alloc::vec![0usize; self.bound];
        loop {
            for (k, &d) in idx.iter().enumerate() {
                vars[self.free_vars + k] = domain[d];
            }
            if all_hold(&self.consequent, frame, vars, noms, stack) {
                return true;
            }
            if !advance(&mut idx, domain.len()) {
                return false;
            }
        }
    }

    /// Validity on the frame: truth under every assignment.
    pub fn valid(&self, frame: &FiniteFrame, domain: &[WorldSet]) -> bool {
        let nv = self.free_vars;
        let nn = self.symbols.noms.len();
        let mut vars = alloc::vec![0 as WorldSet; self.symbols.vars.len()];
        let mut noms = alloc::vec![0usize; nn];
        let mut vi = alloc::vec![0usize; nv];
        let mut stack = Vec::with_capacity(32);
        loop {
            for (k, &d) in vi.iter().enumerate() {
                vars[k] = domain[d];
            }
            noms.iter_mut().for_each(|w| *w = 0);
            loop {
                if !self.holds_at(frame, &mut vars, &noms, domain, &mut stack) {
                    return false;
                }
                if !advance(&mut noms, frame.size()) {
                    break;
                }
            }
            if !advance(&mut vi, domain.len()) {
                return true;
            }
        }
    }
}

/// Mixed-radix increment; false once every digit has wrapped.
fn advance(idx: &mut [usize], radix: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn resolve(val: &Valuation, syms: &Symbols) -> Result<(Vec<WorldSet>, Vec<usize>), SemanticsError> {
    let vars = syms
        .vars
        .iter()
        .map(|p| val.props.get(p).copied().ok_or_else(|| SemanticsError::UnassignedVar(p.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let noms = syms
        .noms
        .iter()
        .map(|i| val.noms.get(i).copied().ok_or_else(|| SemanticsError::UnassignedNominal(i.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((vars, noms))
}

/// Extension of `phi` under `val`.
pub fn eval_formula(frame: &FiniteFrame, val: &Valuation, phi: &Formula) -> Result<WorldSet, SemanticsError> {
    let mut syms = Symbols::default();
    let c = CompiledFormula::compile(phi, &mut syms);
    let (vars, noms) = resolve(val, &syms)?;
    check_worlds(frame, &noms)?;
    Ok(c.eval(frame, &vars, &noms, &mut Vec::new()))
}

fn check_worlds(frame: &FiniteFrame, noms: &[usize]) -> Result<(), SemanticsError> {
    match noms.iter().find(|&&w| w >= frame.size()) {
        Some(&w) => Err(SemanticsError::WorldOutOfRange(w)),
        None => Ok(()),
    }
}

pub fn holds_inequality(frame: &FiniteFrame, val: &Valuation, i: &Inequality) -> Result<bool, SemanticsError> {
    let i = i.to_leq();
    let a = eval_formula(frame, val, &i.lhs)?;
    let b = eval_formula(frame, val, &i.rhs)?;
    Ok(a & !b == 0)
}

/// Truth of a statement under one valuation. Existential witnesses range over
/// the sets allowed by `mode`.
pub fn holds_statement(
    frame: &FiniteFrame,
    val: &Valuation,
    s: &Statement,
    mode: ValuationMode<'_>,
) -> Result<bool, SemanticsError> {
    let c = CompiledStatement::compile(s);
    let (mut vars, noms) = {
        let mut syms = c.symbols.clone();
        let bound: Vec<String> = syms.vars.split_off(c.free_vars);
        let (mut vars, noms) = resolve(val, &syms)?;
        vars.extend(bound.iter().map(|_| 0));
        (vars, noms)
    };
    check_worlds(frame, &noms)?;
    let domain = domain_for(frame, mode);
    Ok(c.holds_at(frame, &mut vars, &noms, &domain, &mut Vec::new()))
}

fn domain_for(frame: &FiniteFrame, mode: ValuationMode<'_>) -> Vec<WorldSet> {
    match mode {
        ValuationMode::Arbitrary => (0..=frame.full()).collect(),
        ValuationMode::Admissible(fam) => fam.sets().to_vec(),
    }
}

/// Frame validity: truth under every valuation allowed by `mode` and every
/// assignment of nominals.
pub fn valid(frame: &FiniteFrame, s: &Statement, mode: ValuationMode<'_>) -> bool {
    CompiledStatement::compile(s).valid(frame, &domain_for(frame, mode))
}

/// Whether `s` mentions the given relation anywhere (`prec` uses `R`).
pub fn statement_uses(s: &Statement, r: Relation) -> bool {
    fn f_uses(f: &Formula, r: Relation) -> bool {
        match f {
            Formula::Modal(m, a) => m.relation() == r || f_uses(a, r),
            Formula::Not(a) => f_uses(a, r),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => f_uses(a, r) || f_uses(b, r),
            _ => false,
        }
    }
    let i_uses = |i: &Inequality| (i.rel == Rel::Prec && r == Relation::Sub) || f_uses(&i.lhs, r) || f_uses(&i.rhs, r);
    match s {
        Statement::Inequality(i) => i_uses(i),
        Statement::Meta(is) => is.iter().any(i_uses),
        Statement::Quasi(q) => q.antecedent.iter().chain(&q.consequent).any(i_uses),
        Statement::Pi2(p) => p.antecedent.iter().chain(&p.exists.body).any(i_uses),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_statement};

    fn refl() -> Statement {
        parse_statement("p prec q => p <= q").unwrap()
    }

    #[test]
    fn reflexivity_quasi_on_two_world_frames() {
        let reflexive = FiniteFrame::new(2, &[(0, 0), (1, 1)], &[]).unwrap();
        assert!(valid(&reflexive, &refl(), ValuationMode::Arbitrary));
        let not = FiniteFrame::new(2, &[(0, 1)], &[]).unwrap();
        assert!(!valid(&not, &refl(), ValuationMode::Arbitrary));
    }

    #[test]
    fn modal_clauses_match_definitions() {
        let f = FiniteFrame::new(3, &[(0, 1), (1, 2)], &[(2, 0), (0, 0)]).unwrap();
        let u: WorldSet = 0b010;
        for m in Modality::ALL {
            let got = f.apply(m, u);
            for w in 0..3 {
                let rel = m.relation();
                let nbrs: Vec<usize> = (0..3)
                    .filter(|&v| if m.forward() { f.holds(rel, w, v) } else { f.holds(rel, v, w) })
                    .collect();
                let expect = if m.is_diamond() {
                    nbrs.iter().any(|&v| u >> v & 1 == 1)
                } else {
                    nbrs.iter().all(|&v| u >> v & 1 == 1)
                };
                assert_eq!(got >> w & 1 == 1, expect, "{m:?} at {w}");
            }
        }
    }

    #[test]
    fn eval_reports_missing_assignments() {
        let f = FiniteFrame::new(1, &[], &[]).unwrap();
        let e = eval_formula(&f, &Valuation::default(), &parse_formula("p").unwrap());
        assert_eq!(e, Err(SemanticsError::UnassignedVar("p".into())));
    }

    #[test]
    fn family_closure_is_checked() {
        let f = FiniteFrame::new(2, &[], &[(0, 1)]).unwrap();
        assert!(AdmissibleFamily::new(&f, &[0, 1, 2, 3]).is_ok());
        // the preimage of the full set along R' is {0}
        assert_eq!(
            AdmissibleFamily::new(&f, &[0, 3]),
            Err(SemanticsError::NotClosed("preimage along R'"))
        );
        let g = FiniteFrame::new(3, &[], &[]).unwrap();
        assert!(AdmissibleFamily::new(&g, &[0, 7]).is_ok());
        assert!(AdmissibleFamily::new(&g, &[0, 1, 7]).is_err());
    }

    #[test]
    fn pi2_witnesses_range_over_the_mode() {
        let f = FiniteFrame::new(2, &[(0, 1), (1, 0)], &[]).unwrap();
        let s = parse_statement("p prec q => E c. (p prec c & c prec q)").unwrap();
        // R is not transitive: 0R1R0 but not 0R0
        assert!(!valid(&f, &s, ValuationMode::Arbitrary));
        let t = FiniteFrame::new(2, &[(0, 1)], &[]).unwrap();
        assert!(valid(&t, &s, ValuationMode::Arbitrary));
        let coarse = AdmissibleFamily::new(&t, &[0, 3]).unwrap();
        assert!(valid(&t, &s, ValuationMode::Admissible(&coarse)));
    }

    #[test]
    fn holds_statement_single_valuation() {
        let f = FiniteFrame::new(2, &[(0, 1)], &[]).unwrap();
        let v = Valuation::default().with_prop("p", 0b01).with_prop("q", 0b10);
        assert_eq!(holds_statement(&f, &v, &refl(), ValuationMode::Arbitrary), Ok(false));
        let v = v.with_prop("q", 0b11);
        assert_eq!(holds_statement(&f, &v, &refl(), ValuationMode::Arbitrary), Ok(true));
    }
}
