//! Seeded generators for the property suites.
//!
//! Everything is driven by a ChaCha stream seeded from a `u64`, so a corpus
//! is fully determined by its seed and size.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subalba_core::classify::{check_restricted_first_round_good, find_certificate, Certificate, DependenceOrder};
use subalba_core::semantics::{FiniteFrame, Valuation};
use subalba_core::syntax::{render_statement, ExistsStatement, Formula, Inequality, Modality, QuasiInequality, Statement};
use subalba_core::trees::{OrderType, Polarity};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connectives a random formula may use.
#[derive(Clone, Debug)]
pub struct Shape {
    pub vars: Vec<String>,
    pub nominals: Vec<String>,
    pub modalities: Vec<Modality>,
    pub max_depth: usize,
}

impl Shape {
    /// Input language over `p` and `q` with `box` and `dia`.
    pub fn input(vars: &[&str], max_depth: usize) -> Shape {
        Shape {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            nominals: Vec::new(),
            modalities: vec![Modality::Box, Modality::Dia],
            max_depth,
        }
    }

    /// Every connective of the expanded language, nominals included.
    pub fn expanded(max_depth: usize) -> Shape {
        Shape {
            vars: vec!["p".into(), "q".into()],
            nominals: vec!["i".into()],
            modalities: Modality::ALL.to_vec(),
            max_depth,
        }
    }
}

pub fn formula<R: Rng>(rng: &mut R, shape: &Shape, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let roll = rng.gen_range(0..20);
        return if roll == 0 {
            Formula::Top
        } else if roll == 1 {
            Formula::Bot
        } else if roll < 4 && !shape.nominals.is_empty() {
            Formula::nom(shape.nominals.choose(rng).unwrap())
        } else {
            Formula::var(shape.vars.choose(rng).unwrap())
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => Formula::not(formula(rng, shape, d)),
        1 => Formula::and(formula(rng, shape, d), formula(rng, shape, d)),
        2 => Formula::or(formula(rng, shape, d), formula(rng, shape, d)),
        3 => Formula::imp(formula(rng, shape, d), formula(rng, shape, d)),
        _ => Formula::modal(*shape.modalities.choose(rng).unwrap(), formula(rng, shape, d)),
    }
}

fn inequality<R: Rng>(rng: &mut R, shape: &Shape) -> Inequality {
    let lhs = formula(rng, shape, shape.max_depth);
    let rhs = formula(rng, shape, shape.max_depth);
    if rng.gen_bool(0.35) {
        Inequality::prec(lhs, rhs)
    } else {
        Inequality::leq(lhs, rhs)
    }
}

fn quasi<R: Rng>(rng: &mut R, shape: &Shape) -> QuasiInequality {
    let n = rng.gen_range(0..=2);
    let antecedent = (0..n).map(|_| inequality(rng, shape)).collect();
    QuasiInequality::new(antecedent, vec![inequality(rng, shape)])
}

/// Upper bound on draws per accepted item before a generator gives up.
const PATIENCE: usize = 20_000;

/// Distinct quasi-inequalities over `p`, `q` (depth at most 3) that have an
/// inductive certificate and mention at least one variable.
pub fn inductive_quasis(seed: u64, count: usize) -> Vec<QuasiInequality> {
    let mut rng = rng(seed);
    let shape = Shape::input(&["p", "q"], 3);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < count && draws < PATIENCE * count {
        draws += 1;
        let q = quasi(&mut rng, &shape);
        if q.prop_vars().is_empty() || !matches!(find_certificate(&q), Ok(Some(_))) {
            continue;
        }
        if seen.insert(render_statement(&Statement::Quasi(q.clone()))) {
            out.push(q);
        }
    }
    out
}

/// Distinct bodies `∃c. Ψ` with at most two free variables that pass the
/// restricted first-round-good check for `c` under some order type.
pub fn first_round_good(seed: u64, count: usize) -> Vec<ExistsStatement> {
    let mut rng = rng(seed);
    let shape = Shape::input(&["c", "p", "q"], 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < count && draws < PATIENCE * count {
        draws += 1;
        let n = rng.gen_range(1..=3);
        let body: Vec<Inequality> = (0..n).map(|_| inequality(&mut rng, &shape)).collect();
        let e = ExistsStatement {
            bound: vec!["c".into()],
            body,
        };
        if !e.body.iter().any(|i| i.contains_var("c")) || !good_for_some_order(&e) {
            continue;
        }
        let key: Vec<String> = e.body.iter().map(subalba_core::syntax::render_inequality).collect();
        if seen.insert(key) {
            out.push(e);
        }
    }
    out
}

fn good_for_some_order(e: &ExistsStatement) -> bool {
    [Polarity::One, Polarity::Partial].into_iter().any(|eps| {
        let mut c = Certificate {
            eps: OrderType::default(),
            omega: DependenceOrder(vec!["c".into()]),
        };
        c.eps.set("c", eps);
        check_restricted_first_round_good(e, &c.eps, &c.omega).accepted()
    })
}

/// One standard-translation sample.
#[derive(Clone, Debug)]
pub struct StCase {
    pub formula: Formula,
    pub frame: FiniteFrame,
    pub valuation: Valuation,
    pub world: usize,
}

pub fn st_cases(seed: u64, count: usize) -> Vec<StCase> {
    let mut rng = rng(seed);
    let shape = Shape::expanded(3);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let mask = (1u64 << (n * n)) - 1;
            let frame = FiniteFrame::from_masks(n, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask);
            let sets = (1u64 << n) - 1;
            let valuation = Valuation::default()
                .with_prop("p", rng.gen::<u64>() & sets)
                .with_prop("q", rng.gen::<u64>() & sets)
                .with_nom("i", rng.gen_range(0..n));
            StCase {
                formula: formula(&mut rng, &shape, shape.max_depth),
                frame,
                valuation,
                world: rng.gen_range(0..n),
            }
        })
        .collect()
}
