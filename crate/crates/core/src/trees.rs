//! Signed generation trees, node classes and branches.
//!
//! Several signed connectives belong to both the Skeleton and the PIA part
//! of the node table (`+∧`, `−∨`, `±¬` as SLR and SRA, `+∨`, `−∧` as
//! Δ-adjoint and SRR). [`node_roles`] reports every role; a branch is split
//! into a PIA prefix and a Skeleton suffix at the lowest point that works.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Formula, Modality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Imp,
    Modal(Modality),
}

impl Connective {
    pub const ALL: [Connective; 12] = [
        Connective::Not,
        Connective::And,
        Connective::Or,
        Connective::Imp,
        Connective::Modal(Modality::Box),
        Connective::Modal(Modality::Dia),
        Connective::Modal(Modality::SBox),
        Connective::Modal(Modality::SDia),
        Connective::Modal(Modality::BBox),
        Connective::Modal(Modality::BDia),
        Connective::Modal(Modality::SBBox),
        Connective::Modal(Modality::SBDia),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Connective::Not => "~",
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Imp => "->",
            Connective::Modal(m) => m.keyword(),
        }
    }

    /// Sign of child `k` under a node of sign `s`.
    pub fn child_sign(self, s: Sign, k: usize) -> Sign {
        match self {
            Connective::Not => s.flip(),
            Connective::Imp if k == 0 => s.flip(),
            _ => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeClass {
    DeltaAdjoint,
    Slr,
    Sra,
    Srr,
}

impl NodeClass {
    pub fn is_skeleton(self) -> bool {
        matches!(self, NodeClass::DeltaAdjoint | NodeClass::Slr)
    }
}

/// Skeleton and PIA memberships of a signed connective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Roles {
    pub skeleton: Option<NodeClass>,
    pub pia: Option<NodeClass>,
}

pub fn node_roles(sign: Sign, c: Connective) -> Roles {
    use NodeClass::*;
    let (skeleton, pia) = match (sign, c) {
        (_, Connective::Not) => (Some(Slr), Some(Sra)),
        (Sign::Pos, Connective::And) | (Sign::Neg, Connective::Or) => (Some(Slr), Some(Sra)),
        (Sign::Pos, Connective::Or) | (Sign::Neg, Connective::And) => (Some(DeltaAdjoint), Some(Srr)),
        (Sign::Pos, Connective::Imp) => (None, Some(Srr)),
        (Sign::Neg, Connective::Imp) => (Some(Slr), None),
        (s, Connective::Modal(m)) => {
            if m.is_diamond() == (s == Sign::Pos) {
                (Some(Slr), None)
            } else {
                (None, Some(Sra))
            }
        }
    };
    Roles { skeleton, pia }
}

/// The single class reported for a node: its Skeleton class when it has one,
/// otherwise its PIA class.
pub fn classify_node(sign: Sign, c: Connective) -> NodeClass {
    let r = node_roles(sign, c);
    r.skeleton.or(r.pia).expect("every signed connective has a class")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    Node(Connective),
    Leaf(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTree {
    pub sign: Sign,
    pub label: Label,
    pub children: Vec<SignedTree>,
}

impl SignedTree {
    pub fn new(sign: Sign, f: &Formula) -> SignedTree {
        let (label, kids): (Label, Vec<&Formula>) = match f {
            Formula::Top | Formula::Bot | Formula::Var(_) | Formula::Nom(_) => (Label::Leaf(f.clone()), Vec::new()),
            Formula::Not(a) => (Label::Node(Connective::Not), alloc::vec![&**a]),
            Formula::Modal(m, a) => (Label::Node(Connective::Modal(*m)), alloc::vec![&**a]),
            Formula::And(a, b) => (Label::Node(Connective::And), alloc::vec![&**a, &**b]),
            Formula::Or(a, b) => (Label::Node(Connective::Or), alloc::vec![&**a, &**b]),
            Formula::Imp(a, b) => (Label::Node(Connective::Imp), alloc::vec![&**a, &**b]),
        };
        let children = match &label {
            Label::Node(c) => kids
                .into_iter()
                .enumerate()
                .map(|(k, g)| SignedTree::new(c.child_sign(sign, k), g))
                .collect(),
            Label::Leaf(_) => Vec::new(),
        };
        SignedTree { sign, label, children }
    }

    pub fn formula(&self) -> Formula {
        match &self.label {
            Label::Leaf(f) => f.clone(),
            Label::Node(c) => {
                let k: Vec<Formula> = self.children.iter().map(|t| t.formula()).collect();
                match c {
                    Connective::Not => Formula::not(k[0].clone()),
                    Connective::Modal(m) => Formula::modal(*m, k[0].clone()),
                    Connective::And => Formula::and(k[0].clone(), k[1].clone()),
                    Connective::Or => Formula::or(k[0].clone(), k[1].clone()),
                    Connective::Imp => Formula::imp(k[0].clone(), k[1].clone()),
                }
            }
        }
    }

    /// Class of the root, `None` for leaves.
    pub fn class(&self) -> Option<NodeClass> {
        match self.label {
            Label::Node(c) => Some(classify_node(self.sign, c)),
            Label::Leaf(_) => None,
        }
    }

    /// Every branch ending in a propositional variable, left to right.
    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk(&mut path, &mut out);
        out
    }

    fn walk(&self, path: &mut Vec<Step>, out: &mut Vec<Branch>) {
        match &self.label {
            Label::Leaf(Formula::Var(p)) => {
                let mut steps = path.clone();
                steps.reverse();
                out.push(Branch {
                    var: p.clone(),
                    sign: self.sign,
                    steps,
                });
            }
            Label::Leaf(_) => {}
            Label::Node(c) => {
                for (k, child) in self.children.iter().enumerate() {
                    let sibling = (self.children.len() == 2).then(|| Box::new(self.children[1 - k].clone()));
                    path.push(Step {
                        sign: self.sign,
                        connective: *c,
                        child: k,
                        sibling,
                    });
                    child.walk(path, out);
                    path.pop();
                }
            }
        }
    }

    /// Leaves of propositional variables with their signs.
    pub fn var_leaves(&self) -> Vec<(String, Sign)> {
        self.branches().into_iter().map(|b| (b.var, b.sign)).collect()
    }
}

/// One internal node on a branch, recorded together with the subtree of the
/// other child for binary nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub sign: Sign,
    pub connective: Connective,
    /// Which child the branch continues into.
    pub child: usize,
    pub sibling: Option<Box<SignedTree>>,
}

impl Step {
    pub fn roles(&self) -> Roles {
        node_roles(self.sign, self.connective)
    }
}

/// Path from a variable leaf up to the root; `steps[0]` is the leaf's parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub var: String,
    pub sign: Sign,
    pub steps: Vec<Step>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    /// PIA nodes from the leaf up for `pia_len` steps, then Skeleton nodes.
    Good { pia_len: usize, skel_len: usize },
    /// Every node is PIA (and some node is not Skeleton).
    Pia,
    /// Every node is Skeleton.
    Skeleton,
    Bad,
}

impl Branch {
    /// Smallest `k` such that `steps[..k]` are PIA nodes and `steps[k..]`
    /// Skeleton nodes.
    pub fn split(&self) -> Option<usize> {
        let mut k = self.steps.len();
        while k > 0 && self.steps[k - 1].roles().skeleton.is_some() {
            k -= 1;
        }
        self.steps[..k]
            .iter()
            .all(|s| s.roles().pia.is_some())
            .then_some(k)
    }

    pub fn is_pia(&self) -> bool {
        self.steps.iter().all(|s| s.roles().pia.is_some())
    }

    pub fn is_skeleton(&self) -> bool {
        self.steps.iter().all(|s| s.roles().skeleton.is_some())
    }

    pub fn kind(&self) -> BranchKind {
        if self.steps.is_empty() {
            return BranchKind::Good {
                pia_len: 0,
                skel_len: 0,
            };
        }
        if self.is_skeleton() {
            return BranchKind::Skeleton;
        }
        if self.is_pia() {
            return BranchKind::Pia;
        }
        match self.split() {
            Some(k) => BranchKind::Good {
                pia_len: k,
                skel_len: self.steps.len() - k,
            },
            None => BranchKind::Bad,
        }
    }

    /// Connectives from the leaf upward, e.g. `["+p", "+box", "+sdia"]`.
    pub fn describe(&self) -> Vec<String> {
        let mut v = alloc::vec![alloc::format!("{}{}", self.sign, self.var)];
        v.extend(self.steps.iter().map(|s| alloc::format!("{}{}", s.sign, s.connective.name())));
        v
    }
}

pub fn branch_kind(b: &Branch) -> BranchKind {
    b.kind()
}

pub fn build_signed_tree(sign: Sign, f: &Formula) -> SignedTree {
    SignedTree::new(sign, f)
}

/// `ε(p)`: `One` makes `+p` leaves critical, `Partial` makes `-p` leaves critical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    One,
    Partial,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::One => Polarity::Partial,
            Polarity::Partial => Polarity::One,
        }
    }

    /// The leaf sign that is critical under this polarity.
    pub fn critical_sign(self) -> Sign {
        match self {
            Polarity::One => Sign::Pos,
            Polarity::Partial => Sign::Neg,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::One => "1",
            Polarity::Partial => "d",
        }
    }
}

/// Order-type. Variables missing from the map are treated as parameters:
/// their leaves are never critical and never break uniformity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrderType(pub BTreeMap<String, Polarity>);

impl OrderType {
    pub fn get(&self, p: &str) -> Option<Polarity> {
        self.0.get(p).copied()
    }

    pub fn set(&mut self, p: &str, e: Polarity) {
        self.0.insert(p.into(), e);
    }

    pub fn is_critical(&self, var: &str, sign: Sign) -> bool {
        self.get(var).is_some_and(|e| e.critical_sign() == sign)
    }

    pub fn flipped(&self) -> OrderType {
        OrderType(self.0.iter().map(|(k, v)| (k.clone(), v.flip())).collect())
    }
}

pub fn critical_branches(t: &SignedTree, eps: &OrderType) -> Vec<Branch> {
    t.branches()
        .into_iter()
        .filter(|b| eps.is_critical(&b.var, b.sign))
        .collect()
}

/// Every leaf of a variable in `eps` is critical for `eps`, or for its flip
/// when `dual` is set.
pub fn is_eps_uniform(t: &SignedTree, eps: &OrderType, dual: bool) -> bool {
    t.branches().iter().all(|b| match eps.get(&b.var) {
        None => true,
        Some(e) => {
            let e = if dual { e.flip() } else { e };
            e.critical_sign() == b.sign
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn tree(sign: Sign, src: &str) -> SignedTree {
        SignedTree::new(sign, &parse_formula(src).unwrap())
    }

    #[test]
    fn children_signs() {
        let t = tree(Sign::Pos, "dia p");
        assert_eq!(t.class(), Some(NodeClass::Slr));
        assert_eq!(t.children[0].sign, Sign::Pos);
        let t = tree(Sign::Neg, "dia p");
        assert_eq!(t.class(), Some(NodeClass::Sra));
        assert_eq!(t.children[0].sign, Sign::Neg);
        let t = tree(Sign::Pos, "a -> b");
        assert_eq!(t.class(), Some(NodeClass::Srr));
        assert_eq!((t.children[0].sign, t.children[1].sign), (Sign::Neg, Sign::Pos));
    }

    #[test]
    fn single_classes() {
        use Connective::*;
        assert_eq!(classify_node(Sign::Pos, Or), NodeClass::DeltaAdjoint);
        assert_eq!(classify_node(Sign::Neg, Imp), NodeClass::Slr);
        assert_eq!(classify_node(Sign::Pos, Modal(Modality::SBox)), NodeClass::Sra);
        assert_eq!(classify_node(Sign::Pos, Modal(Modality::SDia)), NodeClass::Slr);
    }

    #[test]
    fn branch_kinds() {
        let b = &tree(Sign::Pos, "sdia box p").branches()[0];
        assert_eq!(b.kind(), BranchKind::Good { pia_len: 1, skel_len: 1 });
        let b = &tree(Sign::Pos, "box dia p").branches()[0];
        assert_eq!(b.kind(), BranchKind::Bad);
        let b = &tree(Sign::Pos, "p").branches()[0];
        assert_eq!(b.kind(), BranchKind::Good { pia_len: 0, skel_len: 0 });
        let b = &tree(Sign::Pos, "box (q \\/ box p)").branches()[1];
        assert_eq!(b.kind(), BranchKind::Pia);
        assert_eq!(b.describe(), ["+p", "+box", "+\\/", "+box"]);
    }

    #[test]
    fn critical_and_uniform() {
        let mut eps = OrderType::default();
        eps.set("p", Polarity::One);
        let t = tree(Sign::Pos, "p /\\ ~p");
        assert_eq!(critical_branches(&t, &eps).len(), 1);
        assert!(!is_eps_uniform(&t, &eps, false));
        assert!(!is_eps_uniform(&t, &eps, true));
        assert!(is_eps_uniform(&tree(Sign::Pos, "dia p"), &eps, false));
        eps.set("p", Polarity::Partial);
        assert!(critical_branches(&tree(Sign::Pos, "dia p"), &eps).is_empty());
        eps.set("q", Polarity::One);
        assert!(is_eps_uniform(&tree(Sign::Neg, "sbox q"), &eps, true));
        assert!(is_eps_uniform(&tree(Sign::Neg, "T /\\ @i"), &eps, true));
    }

    #[test]
    fn every_signed_connective_has_a_role() {
        for sign in [Sign::Pos, Sign::Neg] {
            for c in Connective::ALL {
                let r = node_roles(sign, c);
                assert!(r.skeleton.is_some() || r.pia.is_some());
                assert_eq!(classify_node(sign, c), r.skeleton.or(r.pia).unwrap());
            }
        }
    }

    #[test]
    fn sign_flips_count_negations_and_antecedents() {
        let t = tree(Sign::Pos, "~(p -> ~box q)");
        let signs: Vec<(String, Sign)> = t.var_leaves();
        assert_eq!(signs, [("p".into(), Sign::Pos), ("q".into(), Sign::Pos)]);
    }

    #[test]
    fn tree_round_trips_formula() {
        let f = parse_formula("~(p -> sdia q) /\\ bbox @i \\/ T").unwrap();
        assert_eq!(SignedTree::new(Sign::Neg, &f).formula(), f);
    }
}
