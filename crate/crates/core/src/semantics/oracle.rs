use core::ops::Range;

use super::{CompiledFo, CompiledStatement, FiniteFrame, SemanticsError};
use crate::fol::FoFormula;
use crate::syntax::{Relation, Statement};

/// How far the exhaustive frame search goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameBudget {
    /// Frames of every size `1..=max_size` are enumerated.
    pub max_size: usize,
    /// Skip frames that differ only in a relation neither side mentions. Every
    /// skipped frame agrees with the frame obtained by emptying that relation.
    pub skip_unused_relations: bool,
}

impl Default for FrameBudget {
    fn default() -> FrameBudget {
        FrameBudget {
            max_size: 3,
            skip_unused_relations: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Equivalent {
        frames_checked: u64,
    },
    Counterexample {
        frame: FiniteFrame,
        /// Position in the enumeration of frames of this size.
        index: u64,
        statement_valid: bool,
        fo_valid: bool,
    },
}

impl OracleVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, OracleVerdict::Equivalent { .. })
    }
}

/// Number of frames with `n` worlds: every pair of relations.
pub fn frame_count(n: usize) -> u64 {
    1u64 << (2 * n * n)
}

/// Frames of a size are ordered by the bitmask of `R`, then of `R'`.
pub fn frame_at(n: usize, index: u64) -> FiniteFrame {
    let bits = n * n;
    let r = index >> bits;
    let rp = index & ((1u64 << bits) - 1);
    FiniteFrame::from_masks(n, r, rp)
}

/// The pair of compiled sides plus the index filter implied by the budget.
pub struct OracleJob {
    stmt: CompiledStatement,
    fo: CompiledFo,
    need_sub: bool,
    need_modal: bool,
}

impl OracleJob {
    pub fn new(s: &Statement, fo: &FoFormula, budget: &FrameBudget) -> Result<OracleJob, SemanticsError> {
        let cfo = CompiledFo::compile(fo);
        if let Some(x) = cfo.free.first() {
            return Err(SemanticsError::UnassignedNominal(x.clone()));
        }
        if let Some(p) = cfo.preds.first() {
            return Err(SemanticsError::UnassignedVar(p.clone()));
        }
        let uses = |r| super::statement_uses(s, r) || fo.uses_relation(r);
        Ok(OracleJob {
            stmt: CompiledStatement::compile(s),
            fo: cfo,
            need_sub: !budget.skip_unused_relations || uses(Relation::Sub),
            need_modal: !budget.skip_unused_relations || uses(Relation::Modal),
        })
    }

    fn wanted(&self, n: usize, index: u64) -> bool {
        let bits = n * n;
        (self.need_sub || index >> bits == 0) && (self.need_modal || index & ((1u64 << bits) - 1) == 0)
    }

    /// The index with the bits of skipped relations cleared, so that sampled
    /// indices always land on frames the search checks.
    pub fn representative(&self, n: usize, index: u64) -> u64 {
        let bits = n * n;
        let low = (1u64 << bits) - 1;
        let r = if self.need_sub { index >> bits & low } else { 0 };
        let rp = if self.need_modal { index & low } else { 0 };
        r << bits | rp
    }

    /// First disagreeing frame of size `n` with index in `range`.
    pub fn search(&self, n: usize, range: Range<u64>) -> (u64, Option<OracleVerdict>) {
        let domain: alloc::vec::Vec<u64> = (0..1u64 << n).collect();
        let mut checked = 0;
        for index in range {
            if !self.wanted(n, index) {
                continue;
            }
            checked += 1;
            let frame = frame_at(n, index);
            let sv = self.stmt.valid(&frame, &domain);
            let fv = self.fo.eval_sentence(&frame);
            if sv != fv {
                return (
                    checked,
                    Some(OracleVerdict::Counterexample {
                        frame,
                        index,
                        statement_valid: sv,
                        fo_valid: fv,
                    }),
                );
            }
        }
        (checked, None)
    }
}

/// Compares frame validity of `s` (valuations over all subsets) with truth
/// of the sentence `fo` on every frame within the budget. The counterexample
/// reported is the first one in enumeration order.
pub fn equivalence_oracle(
    s: &Statement,
    fo: &FoFormula,
    budget: &FrameBudget,
) -> Result<OracleVerdict, SemanticsError> {
    let job = OracleJob::new(s, fo, budget)?;
    let mut total = 0;
    for n in 1..=budget.max_size {
        let (checked, cex) = job.search(n, 0..frame_count(n));
        total += checked;
        if let Some(c) = cex {
            return Ok(c);
        }
    }
    Ok(OracleVerdict::Equivalent {
        frames_checked: total,
    })
}

/// Frames within the budget in enumeration order, skipping those that differ
/// only in a relation none of `uses` mentions.
fn frames(budget: &FrameBudget, need_sub: bool, need_modal: bool) -> impl Iterator<Item = FiniteFrame> + '_ {
    (1..=budget.max_size).flat_map(move |n| {
        let bits = n * n;
        (0..frame_count(n))
            .filter(move |&i| {
                !budget.skip_unused_relations
                    || ((need_sub || i >> bits == 0) && (need_modal || i & ((1u64 << bits) - 1) == 0))
            })
            .map(move |i| frame_at(n, i))
    })
}

fn needs(ss: &[&Statement]) -> (bool, bool) {
    let any = |r| ss.iter().any(|s| super::statement_uses(s, r));
    (any(Relation::Sub), any(Relation::Modal))
}

/// First frame on which `s` is not valid under arbitrary valuations.
pub fn first_invalid_frame(s: &Statement, budget: &FrameBudget) -> Option<FiniteFrame> {
    let c = CompiledStatement::compile(s);
    let (a, b) = needs(&[s]);
    frames(budget, a, b).find(|f| {
        let domain: alloc::vec::Vec<u64> = (0..=f.full()).collect();
        !c.valid(f, &domain)
    })
}

/// First frame on which exactly one of `a` and `b` is valid.
pub fn first_disagreement(a: &Statement, b: &Statement, budget: &FrameBudget) -> Option<FiniteFrame> {
    let (ca, cb) = (CompiledStatement::compile(a), CompiledStatement::compile(b));
    let (x, y) = needs(&[a, b]);
    frames(budget, x, y).find(|f| {
        let domain: alloc::vec::Vec<u64> = (0..=f.full()).collect();
        ca.valid(f, &domain) != cb.valid(f, &domain)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_fo;
    use crate::syntax::parse_statement;

    #[test]
    fn reflexivity_against_its_condition() {
        let s = parse_statement("p prec q => p <= q").unwrap();
        let good = parse_fo("forall w. R(w,w)").unwrap();
        let v = equivalence_oracle(&s, &good, &FrameBudget::default()).unwrap();
        assert!(v.is_equivalent());
        let bad = parse_fo("forall w. forall v. R(w,v)").unwrap();
        match equivalence_oracle(&s, &bad, &FrameBudget::default()).unwrap() {
            OracleVerdict::Counterexample {
                frame,
                statement_valid,
                fo_valid,
                ..
            } => {
                assert!(statement_valid && !fo_valid);
                assert_eq!(frame.size(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn skipping_unused_relations_agrees_with_full_search() {
        let s = parse_statement("p prec q => p <= q").unwrap();
        let full = FrameBudget {
            max_size: 2,
            skip_unused_relations: false,
        };
        let fast = FrameBudget {
            max_size: 2,
            skip_unused_relations: true,
        };
        for src in ["forall w. R(w,w)", "forall w. forall v. R(w,v)", "forall w. R'(w,w) | R(w,w)"] {
            let fo = parse_fo(src).unwrap();
            let a = equivalence_oracle(&s, &fo, &full).unwrap();
            let b = equivalence_oracle(&s, &fo, &fast).unwrap();
            match (a, b) {
                (OracleVerdict::Equivalent { .. }, OracleVerdict::Equivalent { .. }) => {}
                (x, y) => assert_eq!(x, y, "{src}"),
            }
        }
    }

    #[test]
    fn frame_indexing() {
        assert_eq!(frame_count(2), 256);
        let f = frame_at(2, (0b0001 << 4) | 0b1000);
        assert!(f.holds(Relation::Sub, 0, 0));
        assert!(f.holds(Relation::Modal, 1, 1));
        assert_eq!(f.pairs(Relation::Sub).len() + f.pairs(Relation::Modal).len(), 2);
    }

    #[test]
    fn invalid_frames_and_disagreements() {
        let refl = parse_statement("p prec q => p <= q").unwrap();
        let f = first_invalid_frame(&refl, &FrameBudget::default()).unwrap();
        assert_eq!((f.size(), f.holds(Relation::Sub, 0, 0)), (1, false));
        let t = parse_statement("p <= p").unwrap();
        assert_eq!(first_invalid_frame(&t, &FrameBudget::default()), None);
        let seriality = parse_statement("T <= dia T").unwrap();
        assert!(first_disagreement(&refl, &seriality, &FrameBudget::default()).is_some());
        let same = parse_statement("sdia p <= q => p <= q").unwrap();
        assert_eq!(first_disagreement(&refl, &same, &FrameBudget::default()), None);
        let ex = parse_statement("T <= T => E c. p <= c & c <= p").unwrap();
        assert_eq!(first_invalid_frame(&ex, &FrameBudget::default()), None);
        let no = parse_statement("T <= T => E c. p <= c & c <= F").unwrap();
        assert!(first_invalid_frame(&no, &FrameBudget::default()).is_some());
    }
}
