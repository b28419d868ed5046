use alloc::string::String;
use alloc::vec::Vec;

use super::FoFormula;
use crate::syntax::Relation;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct FoParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Top,
    Bot,
    Not,
    And,
    Or,
    Arrow,
    Eq,
    Comma,
    Dot,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FoParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, col));
            i += 2;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            out.push((
                match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    _ => Tok::Ident(word),
                },
                col,
            ));
            i = j;
        } else {
            return Err(FoParseError {
                column: col,
                message: alloc::format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct P {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err(&self, what: &str) -> FoParseError {
        FoParseError {
            column: self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len + 1),
            message: alloc::format!("expected {what}"),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, FoParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.err("a variable")),
        }
    }

    fn formula(&mut self) -> Result<FoFormula, FoParseError> {
        if let Some(q @ (Tok::Forall | Tok::Exists)) = self.peek().cloned() {
            self.pos += 1;
            let x = self.ident()?;
            if !self.eat(&Tok::Dot) {
                return Err(self.err("'.'"));
            }
            let body = self.formula()?;
            return Ok(if q == Tok::Forall {
                FoFormula::forall(&x, body)
            } else {
                FoFormula::exists(&x, body)
            });
        }
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            return Ok(FoFormula::imp(lhs, self.formula()?));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<FoFormula, FoParseError> {
        let mut f = self.conj()?;
        while self.eat(&Tok::Or) {
            f = FoFormula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<FoFormula, FoParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = FoFormula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<FoFormula, FoParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(FoFormula::not(self.unary()?))
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(FoFormula::True)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(FoFormula::False)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("')'"));
                }
                Ok(f)
            }
            Some(Tok::Forall | Tok::Exists) => self.formula(),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat(&Tok::LParen) {
                    let mut args = alloc::vec![self.ident()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.ident()?);
                    }
                    if !self.eat(&Tok::RParen) {
                        return Err(self.err("')'"));
                    }
                    match (name.as_str(), args.len()) {
                        ("R", 2) => Ok(FoFormula::Rel(Relation::Sub, args[0].clone(), args[1].clone())),
                        ("R'", 2) => Ok(FoFormula::Rel(Relation::Modal, args[0].clone(), args[1].clone())),
                        (_, 1) => Ok(FoFormula::Pred(name, args[0].clone())),
                        _ => Err(self.err("a unary predicate or R/R' with two arguments")),
                    }
                } else if self.eat(&Tok::Eq) {
                    Ok(FoFormula::Eq(name, self.ident()?))
                } else {
                    Err(self.err("'(' or '='"))
                }
            }
            _ => Err(self.err("a formula")),
        }
    }
}

/// Parse the ASCII form produced by `render_fo`.
pub fn parse_fo(src: &str) -> Result<FoFormula, FoParseError> {
    let toks = lex(src)?;
    let mut p = P {
        toks,
        pos: 0,
        len: src.chars().count(),
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(p.err("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::render_fo;

    #[test]
    fn round_trips() {
        for src in [
            "forall w. R(w,w)",
            "forall w. forall v. R(v,w) -> R(w,v)",
            "forall x0. x0 = i -> (exists x1. R(x1,x0) & x1 = i)",
            "~(x = y) | R'(x,y) & p(x)",
            "(forall x. p(x)) & T -> F",
        ] {
            let f = parse_fo(src).unwrap();
            assert_eq!(render_fo(&f), src);
        }
    }

    #[test]
    fn arity_errors() {
        assert!(parse_fo("R(x)").is_ok());
        assert!(parse_fo("R(x,y,z)").is_err());
        assert!(parse_fo("forall x R(x,x)").is_err());
    }
}
