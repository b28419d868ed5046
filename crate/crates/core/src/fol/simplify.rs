use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::FoFormula;

/// Equality elimination, constant folding and pruning of vacuous quantifiers.
///
/// The result is logically equivalent to the input on every non-empty domain.
pub fn simplify_fo(f: &FoFormula) -> FoFormula {
    let mut cur = f.clone();
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn step(f: &FoFormula) -> FoFormula {
    use FoFormula::*;
    match f {
        True | False | Rel(..) | Pred(..) => f.clone(),
        Eq(x, y) => {
            if x == y {
                True
            } else {
                f.clone()
            }
        }
        Not(a) => match step(a) {
            True => False,
            False => True,
            a => FoFormula::not(a),
        },
        And(a, b) => match (step(a), step(b)) {
            (True, x) | (x, True) => x,
            (False, _) | (_, False) => False,
            (a, b) => FoFormula::and(a, b),
        },
        Or(a, b) => match (step(a), step(b)) {
            (False, x) | (x, False) => x,
            (True, _) | (_, True) => True,
            (a, b) => FoFormula::or(a, b),
        },
        Imp(a, b) => match (step(a), step(b)) {
            (True, x) => x,
            (False, _) | (_, True) => True,
            (x, False) => FoFormula::not(x),
            (a, b) => FoFormula::imp(a, b),
        },
        Exists(y, body) => {
            let body = step(body);
            if !body.free_vars().contains(y) {
                return body;
            }
            let mut parts = Vec::new();
            conjuncts(&body, &mut parts);
            if let Some(r) = one_point(y, &parts) {
                return r;
            }
            FoFormula::Exists(y.clone(), Box::new(body))
        }
        Forall(y, body) => {
            let body = step(body);
            if !body.free_vars().contains(y) {
                return body;
            }
            if let Imp(a, b) = &body {
                let mut parts = Vec::new();
                conjuncts(a, &mut parts);
                for k in 0..parts.len() {
                    let Some(t) = eq_partner(parts[k], y) else { continue };
                    let rest: Vec<FoFormula> = parts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != k)
                        .map(|(_, p)| (*p).clone())
                        .collect();
                    let candidate = FoFormula::imp(FoFormula::conj(rest), (**b).clone());
                    if let Some(r) = subst(&candidate, y, &t) {
                        return r;
                    }
                }
                // forall y. A -> ~(y = t)  is  ~A[t/y]
                if let Not(n) = &**b {
                    if let Some(t) = eq_partner(n, y) {
                        if let Some(r) = subst(&FoFormula::not((**a).clone()), y, &t) {
                            return r;
                        }
                    }
                }
            }
            FoFormula::Forall(y.clone(), Box::new(body))
        }
    }
}

fn one_point(y: &str, parts: &[&FoFormula]) -> Option<FoFormula> {
    for k in 0..parts.len() {
        let Some(t) = eq_partner(parts[k], y) else { continue };
        let rest: Vec<FoFormula> = parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| (*p).clone())
            .collect();
        if let Some(r) = subst(&FoFormula::conj(rest), y, &t) {
            return Some(r);
        }
    }
    None
}

fn conjuncts<'a>(f: &'a FoFormula, out: &mut Vec<&'a FoFormula>) {
    match f {
        FoFormula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f),
    }
}

/// `t` when `f` is `y = t` or `t = y` with `t` distinct from `y`.
fn eq_partner(f: &FoFormula, y: &str) -> Option<String> {
    match f {
        FoFormula::Eq(a, b) if a == y && b != y => Some(b.clone()),
        FoFormula::Eq(a, b) if b == y && a != y => Some(a.clone()),
        _ => None,
    }
}

/// Capture-avoiding `f[t/y]`; `None` if some binder for `t` would capture it.
fn subst(f: &FoFormula, y: &str, t: &str) -> Option<FoFormula> {
    use FoFormula::*;
    let r = |x: &String| if x == y { String::from(t) } else { x.clone() };
    Some(match f {
        True | False => f.clone(),
        Rel(rel, a, b) => Rel(*rel, r(a), r(b)),
        Pred(p, a) => Pred(p.clone(), r(a)),
        Eq(a, b) => Eq(r(a), r(b)),
        Not(a) => FoFormula::not(subst(a, y, t)?),
        And(a, b) => FoFormula::and(subst(a, y, t)?, subst(b, y, t)?),
        Or(a, b) => FoFormula::or(subst(a, y, t)?, subst(b, y, t)?),
        Imp(a, b) => FoFormula::imp(subst(a, y, t)?, subst(b, y, t)?),
        Forall(x, a) | Exists(x, a) => {
            let body = if x == y {
                (**a).clone()
            } else if x == t && a.free_vars().contains(y) {
                return None;
            } else {
                subst(a, y, t)?
            };
            if matches!(f, Forall(..)) {
                Forall(x.clone(), Box::new(body))
            } else {
                Exists(x.clone(), Box::new(body))
            }
        }
    })
}

const LETTERS: [&str; 16] = [
    "w", "v", "u", "t", "s", "r", "q", "p", "o", "n", "m", "l", "k", "j", "i", "h",
];

/// Rename bound variables to `w, v, u, t, ...` in binding order.
pub fn canonical_names(f: &FoFormula) -> FoFormula {
    let free = f.free_vars();
    let mut supply = (0usize, free);
    rename(f, &mut Vec::new(), &mut supply)
}

fn next_name(supply: &mut (usize, BTreeSet<String>)) -> String {
    loop {
        let k = supply.0;
        supply.0 += 1;
        let name = if k < LETTERS.len() {
            String::from(LETTERS[k])
        } else {
            format!("{}{}", LETTERS[k % LETTERS.len()], k / LETTERS.len())
        };
        if !supply.1.contains(&name) {
            return name;
        }
    }
}

fn rename(
    f: &FoFormula,
    env: &mut Vec<(String, String)>,
    supply: &mut (usize, BTreeSet<String>),
) -> FoFormula {
    use FoFormula::*;
    let look = |x: &String, env: &Vec<(String, String)>| {
        env.iter()
            .rev()
            .find(|(old, _)| old == x)
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| x.clone())
    };
    match f {
        True | False => f.clone(),
        Rel(r, a, b) => Rel(*r, look(a, env), look(b, env)),
        Pred(p, a) => Pred(p.clone(), look(a, env)),
        Eq(a, b) => Eq(look(a, env), look(b, env)),
        Not(a) => FoFormula::not(rename(a, env, supply)),
        And(a, b) => {
            let a = rename(a, env, supply);
            FoFormula::and(a, rename(b, env, supply))
        }
        Or(a, b) => {
            let a = rename(a, env, supply);
            FoFormula::or(a, rename(b, env, supply))
        }
        Imp(a, b) => {
            let a = rename(a, env, supply);
            FoFormula::imp(a, rename(b, env, supply))
        }
        Forall(x, a) | Exists(x, a) => {
            let new = next_name(supply);
            env.push((x.clone(), new.clone()));
            let body = rename(a, env, supply);
            env.pop();
            if matches!(f, Forall(..)) {
                Forall(new, Box::new(body))
            } else {
                Exists(new, Box::new(body))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_fo, render_fo};

    fn simp(src: &str) -> alloc::string::String {
        render_fo(&canonical_names(&simplify_fo(&parse_fo(src).unwrap())))
    }

    #[test]
    fn one_point_rules() {
        assert_eq!(simp("exists y. y = i & R(y,y)"), "R(i,i)");
        assert_eq!(
            simp("forall i. forall x0. x0 = i -> (exists x1. R(x1,x0) & x1 = i)"),
            "forall w. R(w,w)"
        );
        assert_eq!(simp("forall w. R(w,w)"), "forall w. R(w,w)");
    }

    #[test]
    fn negated_equality_consequent() {
        assert_eq!(simp("forall j. forall x. R(x,j) -> ~(x = j)"), "forall w. ~R(w,w)");
    }

    #[test]
    fn capture_is_avoided() {
        // substituting z for y under a binder of z must not fire
        let f = parse_fo("forall z. exists y. y = z & (exists z. R(y,z))").unwrap();
        let s = simplify_fo(&f);
        assert_eq!(render_fo(&s), "forall z. exists y. y = z & (exists z. R(y,z))");
    }

    #[test]
    fn constants_and_vacuous_quantifiers() {
        assert_eq!(simp("forall x. T -> p(c) & T"), "p(c)");
        assert_eq!(simp("exists x. F | R(c,c)"), "R(c,c)");
        assert_eq!(simp("forall x. p(x) -> F"), "forall w. ~p(w)");
    }
}
