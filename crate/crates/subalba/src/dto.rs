//! JSON shapes for frame files, trace lines and command reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use subalba_core::alba::{TopoReport, TraceStep};
use subalba_core::classify::{describe_violation, Certificate, ClassificationReport};
use subalba_core::semantics::{AdmissibleFamily, FiniteFrame, SemanticsError, WorldSet};
use subalba_core::syntax::{render_inequality, Inequality, Relation};

/// `{"size": n, "R": [[u,v],...], "Rp": [[u,v],...], "family": [[w,...],...]}`.
/// `family` lists admissible subsets as sorted worlds; without it every
/// subset is admissible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub size: usize,
    #[serde(rename = "R")]
    pub r: Vec<(usize, usize)>,
    #[serde(rename = "Rp")]
    pub rp: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<usize>>>,
}

impl FrameFile {
    pub fn from_frame(f: &FiniteFrame) -> FrameFile {
        FrameFile {
            size: f.size(),
            r: f.pairs(Relation::Sub),
            rp: f.pairs(Relation::Modal),
            family: None,
        }
    }

    pub fn frame(&self) -> Result<FiniteFrame, SemanticsError> {
        FiniteFrame::new(self.size, &self.r, &self.rp)
    }

    /// The declared family, checked for closure, if there is one.
    pub fn admissible(&self, frame: &FiniteFrame) -> Result<Option<AdmissibleFamily>, SemanticsError> {
        let Some(fam) = &self.family else {
            return Ok(None);
        };
        let mut sets = Vec::new();
        for s in fam {
            let mut bits: WorldSet = 0;
            for &w in s {
                if w >= frame.size() {
                    return Err(SemanticsError::WorldOutOfRange(w));
                }
                bits |= 1 << w;
            }
            sets.push(bits);
        }
        AdmissibleFamily::new(frame, &sets).map(Some)
    }
}

/// One line of a `--trace` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLine {
    pub step: usize,
    pub stage: String,
    pub rule: String,
    pub target: String,
    pub var: Option<String>,
    pub consumed: Vec<String>,
    pub produced: Vec<String>,
    pub fresh: Vec<String>,
    pub goal: Option<String>,
    pub half: Option<u8>,
}

fn rendered(is: &[Inequality]) -> Vec<String> {
    is.iter().map(render_inequality).collect()
}

impl From<&TraceStep> for TraceLine {
    fn from(s: &TraceStep) -> TraceLine {
        TraceLine {
            step: s.step,
            stage: s.stage.name().into(),
            rule: s.rule.name(),
            target: s.target.to_string(),
            var: s.var.clone(),
            consumed: rendered(&s.consumed),
            produced: rendered(&s.produced),
            fresh: s.fresh.clone(),
            goal: s.goal.as_ref().map(render_inequality),
            half: s.half,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    /// `"1"` or `"d"` per variable.
    pub eps: BTreeMap<String, String>,
    pub omega: Vec<String>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> CertificateJson {
        CertificateJson {
            eps: c.eps.0.iter().map(|(p, e)| (p.clone(), e.symbol().into())).collect(),
            omega: c.omega.0.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyJson {
    pub input: String,
    pub accepted: bool,
    pub certificate: Option<CertificateJson>,
    pub violation: Option<String>,
    pub eliminated: Vec<String>,
}

impl ClassifyJson {
    pub fn new(input: &str, r: &ClassificationReport) -> ClassifyJson {
        ClassifyJson {
            input: input.into(),
            accepted: r.accepted(),
            certificate: r.certificate().map(CertificateJson::from),
            violation: r.violation.as_ref().map(describe_violation),
            eliminated: r.eliminated.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoJson {
    pub correct: bool,
    pub ackermann_steps: usize,
    /// `step: inequality` for every offending inequality.
    pub offending: Vec<String>,
    pub replay_error: Option<String>,
}

impl From<&TopoReport> for TopoJson {
    fn from(r: &TopoReport) -> TopoJson {
        TopoJson {
            correct: r.all_correct(),
            ackermann_steps: r.steps.len(),
            offending: r
                .steps
                .iter()
                .flat_map(|s| s.offending.iter().map(move |x| format!("{}: {}", s.step, render_inequality(x))))
                .collect(),
            replay_error: r.replay_error.as_ref().map(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunJson {
    pub input: String,
    pub success: bool,
    pub pure: Vec<String>,
    pub fo: Option<String>,
    /// Variables left when the run got stuck.
    pub unresolved: Vec<String>,
    /// The stuck system on failure.
    pub system: Vec<String>,
    pub failure: Option<String>,
    pub topo: Option<TopoJson>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyJson {
    pub input: String,
    pub fo: String,
    pub equivalent: bool,
    pub frames_checked: u64,
    pub counterexample: Option<FrameFile>,
    pub statement_valid: Option<bool>,
    pub fo_valid: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorJson {
    pub error: String,
}
