//! Inductive quasi-inequalities, their restricted variants and certificate search.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::syntax::{Formula, Inequality, QuasiInequality};
use crate::trees::{critical_branches, is_eps_uniform, Branch, NodeClass, OrderType, Polarity, Sign, SignedTree};

/// A linear dependence order, least variable first. Variables not listed are
/// parameters and count as below every listed variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DependenceOrder(pub Vec<String>);

impl DependenceOrder {
    pub fn less(&self, a: &str, b: &str) -> bool {
        let pos = |x: &str| self.0.iter().position(|y| y == x);
        match (pos(a), pos(b)) {
            (Some(i), Some(j)) => i < j,
            (None, Some(_)) => true,
            _ => false,
        }
    }

    pub fn rank(&self, a: &str) -> Option<usize> {
        self.0.iter().position(|y| y == a)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub eps: OrderType,
    pub omega: DependenceOrder,
}

impl core::fmt::Display for Certificate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("eps {")?;
        for (k, (p, e)) in self.eps.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {}", e.symbol())?;
        }
        f.write_str("}, omega [")?;
        for (k, p) in self.omega.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" < ")?;
            }
            f.write_str(p)?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Receiving,
    Solvable,
    ConsequentInductive,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted(Certificate),
    Rejected,
}

/// The first clause found violated, with the offending branch (leaf first)
/// when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub inequality: Option<Inequality>,
    pub branch: Vec<String>,
}

impl Violation {
    fn new(clause: &str) -> Violation {
        Violation {
            clause: clause.into(),
            inequality: None,
            branch: Vec::new(),
        }
    }

    fn at(mut self, i: &Inequality) -> Violation {
        self.inequality = Some(i.clone());
        self
    }

    fn on(clause: &str, b: &Branch) -> Violation {
        Violation {
            clause: clause.into(),
            inequality: None,
            branch: b.describe(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub tags: Vec<(Inequality, Tag)>,
    pub violation: Option<Violation>,
    /// Variables removed up front because all their occurrences share a polarity.
    pub eliminated: Vec<String>,
}

impl ClassificationReport {
    pub fn accepted(&self) -> bool {
        matches!(self.verdict, Verdict::Accepted(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.verdict {
            Verdict::Accepted(c) => Some(c),
            Verdict::Rejected => None,
        }
    }

    fn rejected(violation: Violation) -> ClassificationReport {
        ClassificationReport {
            verdict: Verdict::Rejected,
            tags: Vec::new(),
            violation: Some(violation),
            eliminated: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("{found} variables exceed the certificate search bound of {bound}")]
    TooManyVariables { found: usize, bound: usize },
}

pub const DEFAULT_SEARCH_BOUND: usize = 6;

/// Checks one signed tree. With `pia_only`, every critical branch must be a
/// PIA branch (the solvable side of an antecedent inequality).
fn tree_violation(t: &SignedTree, cert: &Certificate, pia_only: bool) -> Option<Violation> {
    for b in critical_branches(t, &cert.eps) {
        let k = if pia_only {
            if !b.is_pia() {
                return Some(Violation::on("critical branch is not PIA", &b));
            }
            b.steps.len()
        } else {
            match b.split() {
                Some(k) => k,
                None => return Some(Violation::on("critical branch is not good", &b)),
            }
        };
        for step in &b.steps[..k] {
            if step.roles().pia != Some(NodeClass::Srr) {
                continue;
            }
            let side = step.sibling.as_ref().expect("SRR nodes are binary");
            if !is_eps_uniform(side, &cert.eps, true) {
                return Some(Violation::on("SRR side formula is not eps-dual uniform", &b));
            }
            if side.var_leaves().iter().any(|(r, _)| !cert.omega.less(r, &b.var)) {
                return Some(Violation::on("SRR side formula is not below the leaf in omega", &b));
            }
        }
    }
    None
}

pub fn check_inductive_tree(t: &SignedTree, cert: &Certificate) -> bool {
    tree_violation(t, cert, false).is_none()
}

fn antecedent_trees(i: &Inequality) -> (SignedTree, SignedTree) {
    let i = i.to_leq();
    (SignedTree::new(Sign::Neg, &i.lhs), SignedTree::new(Sign::Pos, &i.rhs))
}

fn tag_trees(l: &SignedTree, r: &SignedTree, cert: &Certificate) -> Result<Tag, Violation> {
    let ul = is_eps_uniform(l, &cert.eps, true);
    let ur = is_eps_uniform(r, &cert.eps, true);
    let (uniform, other) = match (ul, ur) {
        (true, true) => return Ok(Tag::Receiving),
        (false, false) => return Err(Violation::new("neither side is eps-dual uniform")),
        (true, false) => (l, r),
        (false, true) => (r, l),
    };
    if let Some(v) = tree_violation(other, cert, true) {
        return Err(v);
    }
    for b in critical_branches(other, &cert.eps) {
        if uniform.var_leaves().iter().any(|(r, _)| !cert.omega.less(r, &b.var)) {
            return Err(Violation::on("uniform side is not below the critical leaf in omega", &b));
        }
    }
    Ok(Tag::Solvable)
}

pub fn tag_inequality(i: &Inequality, cert: &Certificate) -> Tag {
    let (l, r) = antecedent_trees(i);
    tag_trees(&l, &r, cert).unwrap_or(Tag::Neither)
}

/// Substitutions `p := ⊥` (every occurrence negative in `-lhs`, `+rhs` of the
/// antecedent and `+lhs`, `-rhs` of the consequent) and `p := ⊤` (every such
/// occurrence positive). Validity of the quasi is unchanged by them.
pub fn uniform_eliminations(antecedent: &[Inequality], consequent: &[Inequality]) -> Vec<(String, Formula)> {
    let mut leaves: Vec<(String, Sign)> = Vec::new();
    for i in antecedent {
        let (l, r) = antecedent_trees(i);
        leaves.extend(l.var_leaves());
        leaves.extend(r.var_leaves());
    }
    for i in consequent {
        let i = i.to_leq();
        leaves.extend(SignedTree::new(Sign::Pos, &i.lhs).var_leaves());
        leaves.extend(SignedTree::new(Sign::Neg, &i.rhs).var_leaves());
    }
    let vars: BTreeSet<&String> = leaves.iter().map(|(p, _)| p).collect();
    vars.into_iter()
        .filter_map(|p| {
            let signs: BTreeSet<Sign> = leaves.iter().filter(|(q, _)| q == p).map(|(_, s)| *s).collect();
            match signs.iter().collect::<Vec<_>>()[..] {
                [Sign::Neg] => Some((p.clone(), Formula::Bot)),
                [Sign::Pos] => Some((p.clone(), Formula::Top)),
                _ => None,
            }
        })
        .collect()
}

fn eliminate_uniform(q: &QuasiInequality) -> (QuasiInequality, Vec<String>) {
    let subs = uniform_eliminations(&q.antecedent, &q.consequent);
    let apply = |i: &Inequality| subs.iter().fold(i.clone(), |acc, (p, t)| acc.substitute(t, p));
    let out = QuasiInequality::new(
        q.antecedent.iter().map(apply).collect(),
        q.consequent.iter().map(apply).collect(),
    );
    (out, subs.into_iter().map(|(p, _)| p).collect())
}

struct Prepared {
    antecedent: Vec<(Inequality, SignedTree, SignedTree)>,
    consequent: Vec<(Inequality, SignedTree, SignedTree)>,
}

impl Prepared {
    fn new(q: &QuasiInequality) -> Prepared {
        let antecedent = q
            .antecedent
            .iter()
            .map(|i| {
                let (l, r) = antecedent_trees(i);
                (i.clone(), l, r)
            })
            .collect();
        let consequent = q
            .consequent
            .iter()
            .map(|i| {
                let j = i.to_leq();
                (
                    i.clone(),
                    SignedTree::new(Sign::Pos, &j.lhs),
                    SignedTree::new(Sign::Neg, &j.rhs),
                )
            })
            .collect();
        Prepared { antecedent, consequent }
    }

    fn check(&self, cert: &Certificate) -> Result<Vec<(Inequality, Tag)>, Violation> {
        let mut tags = Vec::new();
        for (i, l, r) in &self.antecedent {
            let t = tag_trees(l, r, cert).map_err(|v| v.at(i))?;
            tags.push((i.clone(), t));
        }
        for (i, l, r) in &self.consequent {
            for t in [l, r] {
                if let Some(v) = tree_violation(t, cert, false) {
                    return Err(v.at(i));
                }
            }
            tags.push((i.clone(), Tag::ConsequentInductive));
        }
        Ok(tags)
    }
}

/// Extends a certificate on the remaining variables with the eliminated ones,
/// which get `ε = 1` and sit at the bottom of the order.
fn complete(cert: &Certificate, eliminated: &[String]) -> Certificate {
    let mut eps = cert.eps.clone();
    for p in eliminated {
        eps.set(p, Polarity::One);
    }
    let mut omega: Vec<String> = eliminated.to_vec();
    omega.extend(cert.omega.0.iter().filter(|p| !eliminated.contains(p)).cloned());
    Certificate {
        eps,
        omega: DependenceOrder(omega),
    }
}

pub fn check_inductive_quasi(q: &QuasiInequality, cert: &Certificate) -> ClassificationReport {
    let (q2, eliminated) = eliminate_uniform(q);
    match Prepared::new(&q2).check(cert) {
        Ok(tags) => ClassificationReport {
            verdict: Verdict::Accepted(complete(cert, &eliminated)),
            tags,
            violation: None,
            eliminated,
        },
        Err(v) => ClassificationReport {
            eliminated,
            ..ClassificationReport::rejected(v)
        },
    }
}

/// Next permutation in lexicographic order; false after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every `(ε, Ω)` over `vars` in search order: `ε` by bitmask with bit `k`
/// marking `vars[k]` as `∂` (all-1 first), then `Ω` over permutations in
/// lexicographic order.
pub fn certificates(vars: &[String]) -> impl Iterator<Item = Certificate> + '_ {
    let n = vars.len();
    (0u32..1 << n).flat_map(move |mask| {
        let mut eps = OrderType::default();
        for (k, p) in vars.iter().enumerate() {
            eps.set(p, if mask >> k & 1 == 1 { Polarity::Partial } else { Polarity::One });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut first = true;
        core::iter::from_fn(move || {
            if !first && !next_permutation(&mut perm) {
                return None;
            }
            first = false;
            Some(Certificate {
                eps: eps.clone(),
                omega: DependenceOrder(perm.iter().map(|&k| vars[k].clone()).collect()),
            })
        })
    })
}

pub fn find_certificate(q: &QuasiInequality) -> Result<Option<Certificate>, ClassifyError> {
    find_certificate_bounded(q, DEFAULT_SEARCH_BOUND)
}

pub fn find_certificate_bounded(q: &QuasiInequality, bound: usize) -> Result<Option<Certificate>, ClassifyError> {
    let (q2, eliminated) = eliminate_uniform(q);
    let vars: Vec<String> = q2.prop_vars().into_iter().collect();
    if vars.len() > bound {
        return Err(ClassifyError::TooManyVariables {
            found: vars.len(),
            bound,
        });
    }
    let prepared = Prepared::new(&q2);
    let found = certificates(&vars).find(|c| prepared.check(c).is_ok());
    Ok(found.map(|c| complete(&c, &eliminated)))
}

/// Search plus the report for the certificate found, or for the first
/// candidate when none works.
pub fn classify_quasi(q: &QuasiInequality) -> Result<ClassificationReport, ClassifyError> {
    match find_certificate(q)? {
        Some(c) => Ok(check_inductive_quasi(q, &c)),
        None => {
            let (q2, eliminated) = eliminate_uniform(q);
            let vars: Vec<String> = q2.prop_vars().into_iter().collect();
            let first = certificates(&vars).next();
            let first = first.expect("at least one candidate");
            let mut r = check_inductive_quasi(q, &first);
            r.verdict = Verdict::Rejected;
            r.tags.clear();
            if r.violation.is_none() {
                r.violation = Some(Violation::new("no certificate"));
            }
            r.eliminated = eliminated;
            Ok(r)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntacticPolarity {
    pub closed: bool,
    pub open: bool,
}

/// Closed: nominals, `bdia`, `sdia` and `sbdia` occur only positively and
/// `bbox`, `sbox`, `sbbox` only negatively. Open is the mirror image.
pub fn syntactic_polarity(f: &Formula, sign: Sign) -> SyntacticPolarity {
    use crate::syntax::Modality::*;
    fn go(f: &Formula, s: Sign, out: &mut SyntacticPolarity) {
        // `Some(true)` for closed-type symbols, `Some(false)` for open-type.
        let kind = match f {
            Formula::Nom(_) => Some(true),
            Formula::Modal(BDia | SDia | SBDia, _) => Some(true),
            Formula::Modal(BBox | SBox | SBBox, _) => Some(false),
            _ => None,
        };
        if let Some(closed_type) = kind {
            let positive = s == Sign::Pos;
            if closed_type != positive {
                out.closed = false;
            }
            if closed_type == positive {
                out.open = false;
            }
        }
        match f {
            Formula::Not(a) => go(a, s.flip(), out),
            Formula::Modal(_, a) => go(a, s, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, s, out);
                go(b, s, out);
            }
            Formula::Imp(a, b) => {
                go(a, s.flip(), out);
                go(b, s, out);
            }
            _ => {}
        }
    }
    let mut out = SyntacticPolarity {
        closed: true,
        open: true,
    };
    go(f, sign, &mut out);
    out
}

pub fn check_restricted_inductive_quasi(q: &QuasiInequality) -> Result<ClassificationReport, ClassifyError> {
    let info = q.info();
    let clause = if !info.nominals.is_empty() {
        Some("contains nominals")
    } else if info.has_dotted {
        Some("contains a dotted connective")
    } else if info.has_black {
        Some("contains a black connective")
    } else {
        None
    };
    match clause {
        Some(c) => Ok(ClassificationReport::rejected(Violation::new(c))),
        None => classify_quasi(q),
    }
}

/// The restricted receiving and solvable shapes for the body of an
/// ∃-statement, read literally on the `sdia` form of each inequality. Only
/// branches ending in variables are considered.
pub fn check_restricted_first_round_good(
    e: &crate::syntax::ExistsStatement,
    eps_q: &OrderType,
    omega: &DependenceOrder,
) -> ClassificationReport {
    let cert = Certificate {
        eps: eps_q.clone(),
        omega: omega.clone(),
    };
    let mut tags = Vec::new();
    for i in &e.body {
        match restricted_tag(i, &cert) {
            Ok(t) => tags.push((i.clone(), t)),
            Err(v) => return ClassificationReport::rejected(v.at(i)),
        }
    }
    ClassificationReport {
        verdict: Verdict::Accepted(cert),
        tags,
        violation: None,
        eliminated: Vec::new(),
    }
}

fn restricted_tag(i: &Inequality, cert: &Certificate) -> Result<Tag, Violation> {
    let j = i.to_leq();
    let (neg_l, pos_r) = (SignedTree::new(Sign::Neg, &j.lhs), SignedTree::new(Sign::Pos, &j.rhs));
    let (pos_l, neg_r) = (SignedTree::new(Sign::Pos, &j.lhs), SignedTree::new(Sign::Neg, &j.rhs));
    let ul = is_eps_uniform(&neg_l, &cert.eps, true);
    let ur = is_eps_uniform(&pos_r, &cert.eps, true);
    let skeleton = |t: &SignedTree| t.branches().into_iter().find(|b| !b.is_skeleton());
    if ul && ur {
        if let Some(b) = skeleton(&pos_l).or_else(|| skeleton(&neg_r)) {
            return Err(Violation::on("receiving: opposite-sign branch is not Skeleton", &b));
        }
        return Ok(Tag::Receiving);
    }
    if !ul && !ur {
        return Err(Violation::new("no side is eps-dual uniform in the bound variables"));
    }
    let (rho, kappa) = if ul { (&neg_l, &pos_r) } else { (&pos_r, &neg_l) };
    if let Some(v) = tree_violation(kappa, cert, true) {
        return Err(v);
    }
    for b in critical_branches(kappa, &cert.eps) {
        if rho.var_leaves().iter().any(|(r, _)| !cert.omega.less(r, &b.var)) {
            return Err(Violation::on("solvable: side variable is not below the critical leaf", &b));
        }
    }
    for (signed, flipped) in [(&neg_l, &pos_l), (&pos_r, &neg_r)] {
        for (b, fb) in signed.branches().iter().zip(flipped.branches()) {
            if !cert.eps.is_critical(&b.var, b.sign) && !fb.is_skeleton() {
                return Err(Violation::on("solvable: non-critical branch is not Skeleton", &fb));
            }
        }
    }
    Ok(Tag::Solvable)
}

/// Π₂-statements are inductive when the first half of the engine removes the
/// bound variables and the resulting quasi-inequality has a certificate.
pub fn check_inductive_pi2(s: &crate::syntax::Pi2Statement) -> Result<ClassificationReport, ClassifyError> {
    use crate::alba_pi2::{first_half, second_half_input};
    if s.exists.bound.is_empty() {
        return classify_quasi(&second_half_input(s, s.exists.body.clone()));
    }
    match first_half(&s.exists) {
        Ok(h) => classify_quasi(&second_half_input(s, h.body)),
        Err(f) => {
            let mut v = Violation::new("first half cannot eliminate the bound variables");
            v.branch = f.unresolved;
            Ok(ClassificationReport::rejected(v))
        }
    }
}

pub fn describe_violation(v: &Violation) -> String {
    let mut s = v.clause.to_string();
    if let Some(i) = &v.inequality {
        s.push_str(" in ");
        s.push_str(&crate::syntax::render_inequality(i));
    }
    if !v.branch.is_empty() {
        s.push_str(" along ");
        s.push_str(&v.branch.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_statement, Statement};

    fn quasi(src: &str) -> QuasiInequality {
        parse_statement(src).unwrap().as_quasi().unwrap()
    }

    fn cert(eps: &[(&str, Polarity)], omega: &[&str]) -> Certificate {
        let mut e = OrderType::default();
        for (p, v) in eps {
            e.set(p, *v);
        }
        Certificate {
            eps: e,
            omega: DependenceOrder(omega.iter().map(|s| s.to_string()).collect()),
        }
    }

    fn ineq(src: &str) -> Inequality {
        match parse_statement(src).unwrap() {
            Statement::Inequality(i) => i,
            other => panic!("{other:?}"),
        }
    }

    use Polarity::{One, Partial};

    #[test]
    fn inductive_trees() {
        let t = |s| SignedTree::new(Sign::Pos, &parse_formula(s).unwrap());
        assert!(check_inductive_tree(&t("sdia box p"), &cert(&[("p", One)], &["p"])));
        assert!(!check_inductive_tree(&t("box dia p"), &cert(&[("p", One)], &["p"])));
        let c = cert(&[("p", One), ("q", Partial)], &["q", "p"]);
        assert!(check_inductive_tree(&t("q \\/ box p"), &c));
        let c = cert(&[("p", One), ("q", Partial)], &["p", "q"]);
        assert!(!check_inductive_tree(&t("box (q \\/ p)"), &c));
    }

    #[test]
    fn tags() {
        let c = cert(&[("p", One), ("q", One)], &["p", "q"]);
        assert_eq!(tag_inequality(&ineq("p <= box q"), &c), Tag::Solvable);
        let c = cert(&[("p", One), ("q", One)], &["q", "p"]);
        assert_eq!(tag_inequality(&ineq("p <= box q"), &c), Tag::Neither);
        let c = cert(&[("p", One), ("q", Partial)], &["p", "q"]);
        assert_eq!(tag_inequality(&ineq("dia p <= q"), &c), Tag::Receiving);
        let c = cert(&[("p", One), ("q", One)], &[]);
        assert_eq!(tag_inequality(&ineq("sdia p <= q"), &c), Tag::Neither);
        let c = cert(&[("p", One), ("q", One)], &["p", "q"]);
        assert_eq!(tag_inequality(&ineq("sdia p <= q"), &c), Tag::Solvable);
        assert_eq!(tag_inequality(&ineq("p prec q"), &c), Tag::Solvable);
    }

    #[test]
    fn certificates_for_known_examples() {
        for src in [
            "p prec q => p <= q",
            "p prec q => ~q prec ~p",
            "p prec q => dia p prec dia q",
        ] {
            let q = quasi(src);
            let c = find_certificate(&q).unwrap().unwrap_or_else(|| panic!("{src}"));
            assert!(check_inductive_quasi(&q, &c).accepted());
        }
        assert_eq!(find_certificate(&quasi("T <= T => box dia p <= dia box p")).unwrap(), None);
        let r = classify_quasi(&quasi("T <= T => box dia p <= dia box p")).unwrap();
        assert!(!r.accepted());
        assert!(r.violation.is_some());
    }

    #[test]
    fn search_order_is_lexicographic() {
        let vars = ["a".to_string(), "b".to_string(), "c".to_string()];
        let all: Vec<Certificate> = certificates(&vars).collect();
        assert_eq!(all.len(), 8 * 6);
        assert_eq!(all[0].omega.0, ["a", "b", "c"]);
        assert_eq!(all[1].omega.0, ["a", "c", "b"]);
        assert_eq!(all[5].omega.0, ["c", "b", "a"]);
        assert_eq!(all[6].eps.get("a"), Some(Partial));
        assert!(all[..6].iter().all(|c| c.eps.0.values().all(|&e| e == One)));
    }

    #[test]
    fn uniform_variables_are_eliminated_first() {
        let q = quasi("dia r <= q => q <= q \\/ r");
        let subs = uniform_eliminations(&q.antecedent, &q.consequent);
        assert_eq!(subs, [("r".to_string(), Formula::Bot)]);
        let c = find_certificate(&q).unwrap().unwrap();
        assert_eq!(c.omega.0[0], "r");
        assert_eq!(c.eps.get("r"), Some(One));
    }

    #[test]
    fn search_bound() {
        let q = quasi("T <= T => a /\\ b /\\ c /\\ d <= dia (a \\/ b \\/ c \\/ d)");
        assert!(find_certificate_bounded(&q, 3).is_err());
    }

    #[test]
    fn polarity_flags() {
        let f = |s| parse_formula(s).unwrap();
        let sp = |s| syntactic_polarity(&f(s), Sign::Pos);
        assert_eq!(sp("sdia p"), SyntacticPolarity { closed: true, open: false });
        assert_eq!(sp("box (p -> q)"), SyntacticPolarity { closed: true, open: true });
        assert_eq!(sp("~sdia @j"), SyntacticPolarity { closed: false, open: true });
        assert_eq!(sp("sbox p -> ~@i"), SyntacticPolarity { closed: false, open: false });
    }

    #[test]
    fn restricted_inductive() {
        assert!(check_restricted_inductive_quasi(&quasi("p prec q => p <= q")).unwrap().accepted());
        assert!(!check_restricted_inductive_quasi(&quasi("sdia p <= q => p <= q")).unwrap().accepted());
        assert!(!check_restricted_inductive_quasi(&quasi("T <= T => box dia p <= dia box p"))
            .unwrap()
            .accepted());
    }

    #[test]
    fn restricted_first_round_good() {
        let e = |src: &str| match parse_statement(src).unwrap() {
            Statement::Pi2(p) => p.exists,
            other => panic!("{other:?}"),
        };
        let eps = cert(&[("c", One)], &["c"]);
        let t = e("p prec q => E c. (p prec c & c prec q)");
        let r = check_restricted_first_round_good(&t, &eps.eps, &eps.omega);
        assert!(r.accepted(), "{:?}", r.violation);
        assert_eq!(r.tags.iter().map(|t| t.1).collect::<Vec<_>>(), [Tag::Solvable, Tag::Receiving]);
        for epsc in [One, Partial] {
            let c = cert(&[("c", epsc)], &["c"]);
            let r = check_restricted_first_round_good(&e("T <= T => E c. dia c <= c"), &c.eps, &c.omega);
            assert!(!r.accepted());
        }
        let r = check_restricted_first_round_good(&e("T <= T => E c. T <= T"), &eps.eps, &eps.omega);
        assert!(r.accepted());
    }

    #[test]
    fn inductive_pi2() {
        let p = |src: &str| match parse_statement(src).unwrap() {
            Statement::Pi2(p) => p,
            other => panic!("{other:?}"),
        };
        assert!(check_inductive_pi2(&p("p prec q => E c. p prec c & c prec q")).unwrap().accepted());
        let stuck = check_inductive_pi2(&p("T <= T => E c. c <= dia c & dia c <= c")).unwrap();
        assert!(!stuck.accepted());
        assert_eq!(stuck.violation.unwrap().branch, ["c"]);
        let plain = p("p prec q => E c. p <= q");
        let mut degenerate = plain.clone();
        degenerate.exists.bound.clear();
        assert_eq!(
            check_inductive_pi2(&degenerate).unwrap(),
            classify_quasi(&quasi("p prec q => p <= q")).unwrap()
        );
    }
}
