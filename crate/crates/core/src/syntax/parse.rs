use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{ExistsStatement, Formula, Inequality, Modality, Pi2Statement, QuasiInequality, Rel, Statement};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    BoundInAntecedent(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found {found:?}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "unexpected end of input, expected {expected}")
            }
            ParseErrorKind::BoundInAntecedent(q) => {
                write!(f, "bound variable {q} occurs in the antecedent")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nominal(String),
    Modal(Modality),
    Top,
    Bot,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Leq,
    Prec,
    Implies,
    Amp,
    Dot,
    Exists,
    Forall,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Nominal(s) => alloc::format!("@{s}"),
            Tok::Modal(m) => m.keyword().into(),
            Tok::Top => "T".into(),
            Tok::Bot => "F".into(),
            Tok::Not => "~".into(),
            Tok::And => "/\\".into(),
            Tok::Or => "\\/".into(),
            Tok::Arrow => "->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Leq => "<=".into(),
            Tok::Prec => "prec".into(),
            Tok::Implies => "=>".into(),
            Tok::Amp => "&".into(),
            Tok::Dot => ".".into(),
            Tok::Exists => "E".into(),
            Tok::Forall => "forall".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += width;
            *col += width;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                col += 1;
                i += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '~' => push(Tok::Not, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '/' if next == Some('\\') => push(Tok::And, 2, &mut i, &mut col),
            '\\' if next == Some('/') => push(Tok::Or, 2, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Leq, 2, &mut i, &mut col),
            '=' if next == Some('>') => push(Tok::Implies, 2, &mut i, &mut col),
            '@' if next.is_some_and(is_ident_start) => {
                let mut j = i + 1;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let name: String = chars[i + 1..j].iter().collect();
                push(Tok::Nominal(name), j - i, &mut i, &mut col);
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    "E" => Tok::Exists,
                    "prec" => Tok::Prec,
                    "forall" => Tok::Forall,
                    w => match Modality::from_keyword(w) {
                        Some(m) => Tok::Modal(m),
                        None => Tok::Ident(word.clone()),
                    },
                };
                push(tok, j - i, &mut i, &mut col);
            }
            other => {
                return Err(ParseError {
                    line,
                    column: col,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        }
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Parser> {
        let (toks, end) = lex(src)?;
        Ok(Parser { toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError {
                line: s.line,
                column: s.column,
                kind: ParseErrorKind::UnexpectedToken {
                    found: s.tok.describe(),
                    expected,
                },
            },
            None => ParseError {
                line: self.end.0,
                column: self.end.1,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
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

    fn expect(&mut self, t: Tok, what: &'static str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Modal(m)) => {
                self.pos += 1;
                Ok(Formula::modal(m, self.unary()?))
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(p)) => {
                self.pos += 1;
                Ok(Formula::Var(p))
            }
            Some(Tok::Nominal(i)) => {
                self.pos += 1;
                Ok(Formula::Nom(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn inequality(&mut self) -> PResult<Inequality> {
        let lhs = self.formula()?;
        let rel = match self.peek() {
            Some(Tok::Leq) => Rel::Leq,
            Some(Tok::Prec) => Rel::Prec,
            _ => return Err(self.error("'<=' or 'prec'")),
        };
        self.pos += 1;
        let rhs = self.formula()?;
        Ok(Inequality { lhs, rel, rhs })
    }

    fn inequalities(&mut self) -> PResult<Vec<Inequality>> {
        let mut v = alloc::vec![self.inequality()?];
        while self.eat(&Tok::Amp) {
            v.push(self.inequality()?);
        }
        Ok(v)
    }

    /// Body of an existential, optionally wrapped in one pair of parentheses.
    fn exists_body(&mut self) -> PResult<Vec<Inequality>> {
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            if let Ok(v) = self.inequalities() {
                if self.eat(&Tok::RParen) && self.peek().is_none() {
                    return Ok(v);
                }
            }
            self.pos = save;
        }
        self.inequalities()
    }

    fn statement(&mut self) -> PResult<Statement> {
        if self.eat(&Tok::Forall) {
            while let Some(Tok::Nominal(_)) = self.peek() {
                self.pos += 1;
            }
            self.expect(Tok::Dot, "'.' after the nominal binder")?;
        }
        let first = self.inequalities()?;
        if !self.eat(&Tok::Implies) {
            self.finish()?;
            return Ok(if first.len() == 1 {
                Statement::Inequality(first.into_iter().next().unwrap())
            } else {
                Statement::Meta(first)
            });
        }
        if self.eat(&Tok::Exists) {
            let mut bound: Vec<(String, usize, usize)> = Vec::new();
            loop {
                let (line, column) = self
                    .toks
                    .get(self.pos)
                    .map(|s| (s.line, s.column))
                    .unwrap_or(self.end);
                match self.peek().cloned() {
                    Some(Tok::Ident(q)) => {
                        self.pos += 1;
                        bound.push((q, line, column));
                    }
                    _ => break,
                }
            }
            if bound.is_empty() {
                return Err(self.error("a bound variable"));
            }
            self.expect(Tok::Dot, "'.' after the bound variables")?;
            let body = self.exists_body()?;
            self.finish()?;
            for (q, line, column) in &bound {
                if first.iter().any(|i| i.contains_var(q)) {
                    return Err(ParseError {
                        line: *line,
                        column: *column,
                        kind: ParseErrorKind::BoundInAntecedent(q.clone()),
                    });
                }
            }
            return Ok(Statement::Pi2(Pi2Statement {
                antecedent: first,
                exists: ExistsStatement {
                    bound: bound.into_iter().map(|b| b.0).collect(),
                    body,
                },
            }));
        }
        let second = self.inequalities()?;
        self.finish()?;
        Ok(Statement::Quasi(QuasiInequality::new(first, second)))
    }

    fn finish(&self) -> PResult<()> {
        if self.peek().is_some() {
            Err(self.error("end of input"))
        } else {
            Ok(())
        }
    }
}

/// Parse a single formula.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse a statement:
///
/// ```text
/// stmt  := ["forall" @i* "."] ineqs ["=>" (ineqs | "E" ident+ "." ineqs)]
/// ineqs := ineq ("&" ineq)*
/// ineq  := fm ("<=" | "prec") fm
/// ```
///
/// The optional `forall` prefix only documents that nominals are universally
/// read; it does not change the result.
pub fn parse_statement(src: &str) -> Result<Statement, ParseError> {
    let mut p = Parser::new(src)?;
    p.statement()
}

impl ParseError {
    pub fn message(&self) -> String {
        self.kind.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn quasi_with_sdia() {
        let s = parse_statement("sdia p <= q  =>  p <= q").unwrap();
        assert_eq!(
            s,
            Statement::Quasi(QuasiInequality::new(
                alloc::vec![Inequality::leq(Formula::sdia(p("p")), p("q"))],
                alloc::vec![Inequality::leq(p("p"), p("q"))]
            ))
        );
    }

    #[test]
    fn pi2_with_parenthesised_body() {
        let s = parse_statement("p prec q => E c. (p prec c & c prec q)").unwrap();
        let Statement::Pi2(pi) = s else { panic!() };
        assert_eq!(pi.antecedent, alloc::vec![Inequality::prec(p("p"), p("q"))]);
        assert_eq!(pi.exists.bound, alloc::vec![String::from("c")]);
        assert_eq!(
            pi.exists.body,
            alloc::vec![Inequality::prec(p("p"), p("c")), Inequality::prec(p("c"), p("q"))]
        );
    }

    #[test]
    fn parenthesised_formula_after_exists_is_not_a_group() {
        let s = parse_statement("p <= q => E c. (p) <= c").unwrap();
        let Statement::Pi2(pi) = s else { panic!() };
        assert_eq!(pi.exists.body, alloc::vec![Inequality::leq(p("p"), p("c"))]);
    }

    #[test]
    fn truncated_input() {
        let e = parse_statement("p <= ").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        assert_eq!((e.line, e.column), (1, 6));
    }

    #[test]
    fn positions_span_lines() {
        let e = parse_statement("p <= q =>\n  q <= $").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
    }

    #[test]
    fn bound_variable_in_antecedent() {
        let e = parse_statement("c <= q => E c. c <= q").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BoundInAntecedent("c".into()));
        assert_eq!((e.line, e.column), (1, 13));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("~p /\\ q \\/ r -> s -> t").unwrap(),
            Formula::imp(
                Formula::or(Formula::and(Formula::not(p("p")), p("q")), p("r")),
                Formula::imp(p("s"), p("t"))
            )
        );
        assert_eq!(
            parse_formula("sdia ~p /\\ box @i").unwrap(),
            Formula::and(
                Formula::sdia(Formula::not(p("p"))),
                Formula::boxed(Formula::nom("i"))
            )
        );
    }

    #[test]
    fn forall_prefix_is_transparent() {
        assert_eq!(
            parse_statement("forall @i. @i <= sdia @i").unwrap(),
            parse_statement("@i <= sdia @i").unwrap()
        );
    }

    #[test]
    fn comments_are_skipped() {
        assert!(parse_statement("# reflexivity\np prec q => p <= q # done\n").is_ok());
    }
}
