//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Oracles here are independent of the engine: reference first-order
//! conditions are written out by hand, rule soundness and first-half
//! soundness are decided by brute-force frame validity, and standard
//! translation is checked against direct evaluation.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use subalba::dto::TraceLine;
use subalba::gen;
use subalba_core::alba::{
    check_topological_correctness, render_pure_quasi, run_alba, AlbaOutcome, Rule, RuleInstance, System,
};
use subalba_core::alba_pi2::{first_half, run_alba_pi2};
use subalba_core::classify::{check_restricted_inductive_quasi, find_certificate};
use subalba_core::fol::{fo_correspondent, parse_fo, render_fo, standard_translation, VarSupply};
use subalba_core::semantics::{
    equivalence_oracle, eval_fo, eval_formula, first_disagreement, first_invalid_frame, FrameBudget, OracleVerdict,
};
use subalba_core::syntax::{parse_statement, render_statement, Inequality, Pi2Statement, QuasiInequality, Statement};

const CORPUS_SEED: u64 = 1;
const EXISTS_SEED: u64 = 2;
const ST_SEED: u64 = 3;
const CORPUS_SIZE: usize = 100;

/// Every pair of relations on every frame up to the size, nothing skipped.
fn exhaustive(max_size: usize) -> FrameBudget {
    FrameBudget {
        max_size,
        skip_unused_relations: false,
    }
}

fn statement(src: &str) -> Statement {
    parse_statement(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn quasi(src: &str) -> QuasiInequality {
    statement(src).as_quasi().expect("quasi-inequality")
}

fn run(s: &Statement) -> AlbaOutcome {
    match s {
        Statement::Pi2(p) => run_alba_pi2(p),
        other => run_alba(&other.as_quasi().expect("quasi-inequality")),
    }
}

fn show(s: &Statement) -> String {
    render_statement(s)
}

fn corpus() -> Vec<QuasiInequality> {
    gen::inductive_quasis(CORPUS_SEED, CORPUS_SIZE)
}

const GOLDEN: [(&str, &str, &str); 4] = [
    ("reflexivity", "p prec q => p <= q", "forall x. R(x,x)"),
    ("symmetry", "p prec q => ~q prec ~p", "forall x. forall y. R(x,y) -> R(y,x)"),
    (
        "proximity",
        "p prec q => dia p prec dia q",
        // v in R[R'^-1(w)] implies v in R'^-1[R(w)]
        "forall w. forall v. (exists u. R'(u,w) & R(u,v)) -> (exists t. R(w,t) & R'(v,t))",
    ),
    (
        "transitivity",
        "p prec q => E c. p prec c & c prec q",
        "forall x. forall y. forall z. R(x,y) & R(y,z) -> R(x,z)",
    ),
];

fn golden_correspondents() -> Result<String, String> {
    let mut frames = 0;
    for (name, src, reference) in GOLDEN {
        let s = statement(src);
        let t = Instant::now();
        let out = run(&s);
        let elapsed = t.elapsed();
        let ok = out.success().ok_or(format!("{name}: run failed"))?;
        if elapsed >= Duration::from_secs(1) {
            return Err(format!("{name}: run took {elapsed:?}"));
        }
        let fo = fo_correspondent(&ok.pure_quasis);
        let reference = parse_fo(reference).map_err(|e| e.to_string())?;
        let pure = Statement::Quasi(ok.pure_quasis[0].clone());
        for (what, st, f) in [("input vs reference", &s, &reference), ("pure output vs reference", &pure, &reference), ("input vs correspondent", &s, &fo)] {
            match equivalence_oracle(st, f, &exhaustive(3)).map_err(|e| e.to_string())? {
                OracleVerdict::Equivalent { frames_checked } => frames += frames_checked,
                OracleVerdict::Counterexample { frame, .. } => {
                    return Err(format!("{name}: {what} differs on {frame:?} (fo {})", render_fo(&fo)))
                }
            }
        }
    }
    Ok(format!("4 goldens, {frames} frame checks, zero counterexamples"))
}

fn soundness_suite(corpus: &[QuasiInequality]) -> Result<String, String> {
    if corpus.len() < CORPUS_SIZE {
        return Err(format!("generator produced only {} items", corpus.len()));
    }
    let t = Instant::now();
    for q in corpus {
        let s = Statement::Quasi(q.clone());
        let ok = run_alba(q).success().cloned().ok_or(format!("run failed on {}", show(&s)))?;
        let fo = fo_correspondent(&ok.pure_quasis);
        let v = equivalence_oracle(&s, &fo, &exhaustive(3)).map_err(|e| e.to_string())?;
        if let OracleVerdict::Counterexample { frame, .. } = v {
            return Err(format!("{} vs {}: counterexample {frame:?}", show(&s), render_fo(&fo)));
        }
    }
    let elapsed = t.elapsed();
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} items equivalent on all frames |X|<=3", corpus.len()))
}

/// `(quasi-inequality "system => goal", rule, index, variable)`.
const CATALOGUE: [(&str, &str, usize, &str); 30] = [
    ("p <= dia q /\\ q => p <= dia q", "split-meet", 0, ""),
    ("p \\/ box q <= q => box q <= p", "split-join", 0, ""),
    ("p prec q /\\ dia q => p prec dia q", "split-meet", 0, ""),
    ("p \\/ q prec q => p prec q", "split-join", 0, ""),
    ("dia (p \\/ q) <= q => dia p <= q", "distribute", 0, ""),
    ("p <= box (p /\\ q) => p <= box q", "distribute", 0, ""),
    ("p prec q => p <= q", "prec-rewrite", 0, ""),
    ("dia p <= q => box q <= dia q", "eliminate-bot", 0, "p"),
    ("p <= box q => p <= dia p", "eliminate-top", 0, "q"),
    ("@i <= dia p & p <= q => @i <= dia q", "approx-dia", 0, ""),
    ("@i <= sdia p & p <= q => @i <= sdia q", "approx-sdia", 0, ""),
    ("box p <= ~@j & q <= p => box q <= ~@j", "approx-box", 0, ""),
    ("sbox p <= ~@j & q <= p => sbox q <= ~@j", "approx-sbox", 0, ""),
    ("p -> q <= ~@j => p <= q", "approx-imp", 0, ""),
    ("dia p <= q => p <= box q", "res-dia", 0, ""),
    ("p <= box q => dia p <= q", "res-box", 0, ""),
    ("sdia p <= q => p <= q", "res-sdia", 0, ""),
    ("p <= sbox q => p <= q", "res-sbox", 0, ""),
    ("~p <= q => ~q <= p", "not-res-left", 0, ""),
    ("p <= ~q => q <= ~p", "not-res-right", 0, ""),
    ("p /\\ q <= dia p => p <= q -> dia p", "and-res-1", 0, ""),
    ("p /\\ q <= dia p => q <= p -> dia p", "and-res-2", 0, ""),
    ("p <= q \\/ dia p => p /\\ ~q <= dia p", "or-res-1", 0, ""),
    ("p <= q \\/ dia p => p /\\ ~dia p <= q", "or-res-2", 0, ""),
    ("p <= q -> dia q => p /\\ q <= dia q", "imp-res-1", 0, ""),
    ("p <= q -> dia q => p <= q", "imp-res-2", 0, ""),
    ("~~@i <= p => @i <= p", "double-neg", 0, ""),
    ("@i <= p & @k <= p & dia p <= q => dia @i <= q", "ackermann-right", 0, "p"),
    ("q <= box p & @i <= dia q => @i <= dia box p", "ackermann-left", 0, "q"),
    ("@i <= p & q <= p & p <= sbox ~@j => @i <= sbox ~@j", "ackermann-right", 0, "p"),
];

fn per_rule_soundness() -> Result<String, String> {
    let mut rules = std::collections::BTreeSet::new();
    for (src, rule, index, var) in CATALOGUE {
        let q = quasi(src);
        let rule = Rule::from_name(rule).ok_or(format!("unknown rule {rule}"))?;
        let pre = System {
            inequalities: q.antecedent.clone(),
            goal: None,
            fresh_counter: 0,
        };
        let inst = RuleInstance {
            rule,
            index,
            var: (!var.is_empty()).then(|| var.to_string()),
        };
        let post = subalba_core::alba::apply_rule(&pre, &inst).map_err(|e| format!("{src}: {e}"))?;
        let after = Statement::Quasi(QuasiInequality::new(post.inequalities, q.consequent.clone()));
        if let Some(f) = first_disagreement(&Statement::Quasi(q), &after, &exhaustive(2)) {
            return Err(format!("{rule} on {src} changes validity on {f:?}"));
        }
        rules.insert(rule);
    }
    Ok(format!("{} cases over {} rules agree on all frames |X|<=2", CATALOGUE.len(), rules.len()))
}

fn success_theorem(corpus: &[QuasiInequality]) -> Result<String, String> {
    for q in corpus {
        if !matches!(find_certificate(q), Ok(Some(_))) {
            return Err(format!("corpus item without certificate: {}", show(&Statement::Quasi(q.clone()))));
        }
        if !run_alba(q).is_success() {
            return Err(format!("certified input failed: {}", show(&Statement::Quasi(q.clone()))));
        }
    }
    let m = quasi("T <= T => box dia p <= dia box p");
    if !matches!(find_certificate(&m), Ok(None)) {
        return Err("McKinsey-like input has a certificate".into());
    }
    if run_alba(&m).is_success() {
        return Err("McKinsey-like input succeeded".into());
    }
    Ok(format!("{} certified inputs succeed; McKinsey-like input has no certificate and fails", corpus.len()))
}

fn standard_translation_agreement() -> Result<String, String> {
    let cases = gen::st_cases(ST_SEED, 1000);
    for c in &cases {
        let direct = eval_formula(&c.frame, &c.valuation, &c.formula).map_err(|e| e.to_string())? >> c.world & 1 == 1;
        let taken = ["x".to_string(), "i".to_string()].into_iter().collect();
        let st = standard_translation(&c.formula, "x", &mut VarSupply::avoiding(taken));
        let env = BTreeMap::from([("x".to_string(), c.world)]);
        let via_fo = eval_fo(&c.frame, &c.valuation, &st, &env).map_err(|e| e.to_string())?;
        if direct != via_fo {
            return Err(format!("{:?} at world {} on {:?}", c.formula, c.world, c.frame));
        }
    }
    Ok(format!("{} tuples agree", cases.len()))
}

fn topological_monitor(corpus: &[QuasiInequality]) -> Result<String, String> {
    let mut checked = 0;
    let mut steps = 0;
    let goldens = GOLDEN.iter().map(|g| statement(g.1));
    for s in corpus.iter().map(|q| Statement::Quasi(q.clone())).chain(goldens) {
        let restricted = match &s {
            Statement::Pi2(_) => s.is_input_language() && !s.info().has_dotted,
            other => check_restricted_inductive_quasi(&other.as_quasi().unwrap()).is_ok_and(|r| r.accepted()),
        };
        if !restricted {
            continue;
        }
        let report = check_topological_correctness(run(&s).trace());
        if !report.all_correct() {
            return Err(format!("{}: {report:?}", show(&s)));
        }
        checked += 1;
        steps += report.steps.len();
    }
    if checked == 0 {
        return Err("no restricted inputs".into());
    }
    Ok(format!("{checked} restricted inputs, {steps} Ackermann steps all closed/open"))
}

fn first_half_soundness() -> Result<String, String> {
    let items = gen::first_round_good(EXISTS_SEED, 30);
    if items.len() < 30 {
        return Err(format!("generator produced only {} items", items.len()));
    }
    for e in &items {
        let shown = e.body.iter().map(subalba_core::syntax::render_inequality).collect::<Vec<_>>().join(" & ");
        let h = first_half(e).map_err(|f| format!("E c. {shown}: unresolved {:?}", f.unresolved))?;
        let body = if h.body.is_empty() { vec![Inequality::trivial()] } else { h.body };
        // body' entails E c. body, and body entails body' for every c.
        let forward = Statement::Pi2(Pi2Statement {
            antecedent: body.clone(),
            exists: e.clone(),
        });
        let backward = Statement::Quasi(QuasiInequality::new(e.body.clone(), body));
        for s in [&forward, &backward] {
            if let Some(f) = first_invalid_frame(s, &exhaustive(3)) {
                return Err(format!("{} fails on {f:?}", show(s)));
            }
        }
    }
    Ok(format!("{} statements equivalent to their first-half output on all frames |X|<=3", items.len()))
}

fn transcript(s: &Statement) -> String {
    let out = run(s);
    let mut text = String::new();
    for step in &out.trace().steps {
        text.push_str(&serde_json::to_string(&TraceLine::from(step)).unwrap());
        text.push('\n');
    }
    match &out {
        AlbaOutcome::Success(ok) => {
            for q in &ok.pure_quasis {
                text.push_str(&render_pure_quasi(q));
                text.push('\n');
            }
        }
        AlbaOutcome::Failure(f) => text.push_str(&format!("{:?}\n", f.unresolved)),
    }
    text
}

fn determinism(corpus: &[QuasiInequality]) -> Result<String, String> {
    let goldens = GOLDEN.iter().map(|g| statement(g.1));
    let all: Vec<Statement> = corpus.iter().map(|q| Statement::Quasi(q.clone())).chain(goldens).collect();
    for s in &all {
        if transcript(s).as_bytes() != transcript(s).as_bytes() {
            return Err(format!("runs differ on {}", show(s)));
        }
    }
    Ok(format!("{} items, identical traces and outputs", all.len()))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: [(&str, Box<dyn Fn() -> Result<String, String>>); 8] = [
        ("golden correspondents", Box::new(golden_correspondents)),
        ("end-to-end soundness", Box::new(|| soundness_suite(&corpus))),
        ("per-rule soundness", Box::new(per_rule_soundness)),
        ("success theorem", Box::new(|| success_theorem(&corpus))),
        ("standard translation", Box::new(standard_translation_agreement)),
        ("topological monitor", Box::new(|| topological_monitor(&corpus))),
        ("first-half soundness", Box::new(first_half_soundness)),
        ("determinism", Box::new(|| determinism(&corpus))),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
