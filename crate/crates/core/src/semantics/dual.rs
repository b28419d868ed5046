use alloc::vec::Vec;

use super::{AdmissibleFamily, FiniteFrame, WorldSet};
use crate::syntax::{Modality, Relation};

/// The subordination algebra of a finite frame: a family of sets with
/// `a ≺ b` iff `R[a] ⊆ b` and `◇` the preimage along `R'`.
#[derive(Clone, Debug)]
pub struct DualAlgebra {
    pub full: WorldSet,
    pub carrier: Vec<WorldSet>,
    pub axioms: Vec<AxiomReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub name: &'static str,
    pub holds: bool,
    /// Elements violating the axiom, when it fails.
    pub witness: Vec<WorldSet>,
}

impl DualAlgebra {
    pub fn axiom(&self, name: &str) -> Option<&AxiomReport> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

struct Ctx<'a> {
    frame: &'a FiniteFrame,
    carrier: &'a [WorldSet],
    full: WorldSet,
}

impl Ctx<'_> {
    fn prec(&self, a: WorldSet, b: WorldSet) -> bool {
        self.frame.image(Relation::Sub, a) & !b == 0
    }

    fn dia(&self, a: WorldSet) -> WorldSet {
        self.frame.apply(Modality::Dia, a)
    }

    fn neg(&self, a: WorldSet) -> WorldSet {
        self.full & !a
    }

    fn pairs(&self, mut bad: impl FnMut(WorldSet, WorldSet) -> bool) -> Option<Vec<WorldSet>> {
        for &a in self.carrier {
            for &b in self.carrier {
                if bad(a, b) {
                    return Some(alloc::vec![a, b]);
                }
            }
        }
        None
    }

    fn triples(&self, mut bad: impl FnMut(WorldSet, WorldSet, WorldSet) -> bool) -> Option<Vec<WorldSet>> {
        for &a in self.carrier {
            for &b in self.carrier {
                for &c in self.carrier {
                    if bad(a, b, c) {
                        return Some(alloc::vec![a, b, c]);
                    }
                }
            }
        }
        None
    }
}

fn report(name: &'static str, witness: Option<Vec<WorldSet>>) -> AxiomReport {
    AxiomReport {
        name,
        holds: witness.is_none(),
        witness: witness.unwrap_or_default(),
    }
}

/// Builds the algebra on `family` and checks the subordination axioms and the
/// frame-dependent ones by brute force.
pub fn dual_algebra(frame: &FiniteFrame, family: &AdmissibleFamily) -> DualAlgebra {
    let full = frame.full();
    let carrier = family.sets();
    let c = Ctx {
        frame,
        carrier,
        full,
    };
    let mut axioms = Vec::new();
    let bounds = [(0, 0), (full, full)].into_iter().find(|&(a, b)| !c.prec(a, b));
    axioms.push(report("bounds", bounds.map(|(a, b)| alloc::vec![a, b])));
    axioms.push(report(
        "meet",
        c.triples(|a, b, d| c.prec(a, b) && c.prec(a, d) && !c.prec(a, b & d)),
    ));
    axioms.push(report(
        "join",
        c.triples(|a, b, d| c.prec(a, d) && c.prec(b, d) && !c.prec(a | b, d)),
    ));
    axioms.push(report(
        "weakening",
        c.pairs(|a, b| {
            c.prec(a, b)
                && carrier
                    .iter()
                    .any(|&x| x & !a == 0 && carrier.iter().any(|&y| b & !y == 0 && !c.prec(x, y)))
        }),
    ));
    axioms.push(report(
        "normality",
        (c.dia(0) != 0).then(|| alloc::vec![0]),
    ));
    axioms.push(report("additivity", c.pairs(|a, b| c.dia(a | b) != c.dia(a) | c.dia(b))));
    axioms.push(report("reflexive contact", c.pairs(|a, b| c.prec(a, b) && a & !b != 0)));
    axioms.push(report(
        "symmetric contact",
        c.pairs(|a, b| c.prec(a, b) && !c.prec(c.neg(b), c.neg(a))),
    ));
    axioms.push(report(
        "interpolation",
        c.pairs(|a, b| c.prec(a, b) && !carrier.iter().any(|&m| c.prec(a, m) && c.prec(m, b))),
    ));
    axioms.push(report(
        "nondegeneracy",
        carrier
            .iter()
            .find(|&&a| a != 0 && !carrier.iter().any(|&b| b != 0 && c.prec(b, a)))
            .map(|&a| alloc::vec![a]),
    ));
    axioms.push(report(
        "proximity",
        c.pairs(|a, b| c.prec(a, b) && !c.prec(c.dia(a), c.dia(b))),
    ));
    DualAlgebra {
        full,
        carrier: carrier.to_vec(),
        axioms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_fo;
    use crate::semantics::{frame_at, frame_count, CompiledFo};

    #[test]
    fn reflexive_frame_has_reflexive_contact() {
        let f = FiniteFrame::new(2, &[(0, 0), (1, 1), (0, 1)], &[]).unwrap();
        let d = dual_algebra(&f, &AdmissibleFamily::powerset(&f));
        assert!(d.axiom("reflexive contact").unwrap().holds);
        assert!(!d.axiom("symmetric contact").unwrap().holds);
    }

    #[test]
    fn structural_axioms_hold_on_every_small_frame() {
        for n in 1..=2 {
            for k in 0..frame_count(n) {
                let f = frame_at(n, k);
                let d = dual_algebra(&f, &AdmissibleFamily::powerset(&f));
                for name in ["bounds", "meet", "join", "weakening", "normality", "additivity"] {
                    assert!(d.axiom(name).unwrap().holds, "{name} on frame {k}");
                }
            }
        }
    }

    #[test]
    fn proximity_axiom_tracks_its_frame_condition() {
        let cond = CompiledFo::compile(
            &parse_fo("forall v. forall w. forall u. R'(v,w) & R(v,u) -> (exists t. R(w,t) & R'(u,t))").unwrap(),
        );
        for k in 0..frame_count(2) {
            let f = frame_at(2, k);
            let d = dual_algebra(&f, &AdmissibleFamily::powerset(&f));
            assert_eq!(d.axiom("proximity").unwrap().holds, cond.eval_sentence(&f), "frame {k}");
        }
    }
}
