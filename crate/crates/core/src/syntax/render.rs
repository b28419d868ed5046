use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{Formula, Inequality, Rel, Statement};

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_child(out: &mut String, f: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Var(p) => out.push_str(p),
        Formula::Nom(i) => {
            out.push('@');
            out.push_str(i);
        }
        Formula::Not(a) => {
            out.push('~');
            write_child(out, a, prec(a) < 4);
        }
        Formula::Modal(m, a) => {
            out.push_str(m.keyword());
            out.push(' ');
            write_child(out, a, prec(a) < 4);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let p = prec(f);
            let op = if p == 3 { " /\\ " } else { " \\/ " };
            write_child(out, a, prec(a) < p);
            out.push_str(op);
            write_child(out, b, prec(b) <= p);
        }
        Formula::Imp(a, b) => {
            write_child(out, a, prec(a) <= 1);
            out.push_str(" -> ");
            write_child(out, b, prec(b) < 1);
        }
    }
}

/// Canonical text of a formula; `parse_formula` inverts it.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f);
    s
}

pub fn render_inequality(i: &Inequality) -> String {
    let mut s = render_formula(&i.lhs);
    s.push_str(match i.rel {
        Rel::Leq => " <= ",
        Rel::Prec => " prec ",
    });
    s.push_str(&render_formula(&i.rhs));
    s
}

fn render_all(is: &[Inequality]) -> String {
    is.iter().map(render_inequality).collect::<Vec<_>>().join(" & ")
}

pub fn render_statement(s: &Statement) -> String {
    match s {
        Statement::Inequality(i) => render_inequality(i),
        Statement::Meta(is) => render_all(is),
        Statement::Quasi(q) => {
            let mut s = render_all(&q.antecedent);
            s.push_str(" => ");
            s.push_str(&render_all(&q.consequent));
            s
        }
        Statement::Pi2(p) => {
            let mut s = render_all(&p.antecedent);
            s.push_str(" => E");
            for q in &p.exists.bound {
                let _ = write!(s, " {q}");
            }
            let _ = write!(s, ". ({})", render_all(&p.exists.body));
            s
        }
    }
}

impl core::fmt::Display for Formula {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&render_formula(self))
    }
}

impl core::fmt::Display for Inequality {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&render_inequality(self))
    }
}

impl core::fmt::Display for Statement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&render_statement(self))
    }
}
