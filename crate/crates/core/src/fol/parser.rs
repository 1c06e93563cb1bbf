//! Recursive-descent parser for formula text.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula  := implies ( ("<->" | "↔") implies )*        right-assoc
//! implies  := or ( ("->" | "→") or )*                   right-assoc
//! or       := and ( ("|" | "∨") and )*                  left-assoc
//! and      := unary ( ("&" | "∧") unary )*              left-assoc
//! unary    := ("~" | "¬" | "!") unary
//!           | ("forall" | "∀" | "exists" | "∃") var formula
//!           | primary
//! primary  := "(" formula ")"
//!           | Ident "(" term ("," term)* ")"
//!           | term ("=" | "!=" | "≠") term
//! ```
//!
//! A quantifier's scope runs as far right as possible. `a != b` is sugar for
//! `~(a = b)`.

use std::fmt;

use super::ast::{Atom, BinaryOp, Formula, Quantifier, Term};

/// Nesting bound for negations, quantifiers and parentheses.
pub const MAX_NESTING: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 0-based character offset into the input.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    /// Renders the error with the offending input line and a caret under the
    /// failing position.
    pub fn render(&self, input: &str) -> String {
        let mut col = self.position;
        let mut lines = input.split('\n').peekable();
        let mut line = "";
        while let Some(l) = lines.next() {
            line = l;
            let len = l.chars().count();
            if col <= len || lines.peek().is_none() {
                break;
            }
            col -= len + 1;
        }
        format!("{}\n{}\n{}^", self, line, " ".repeat(col))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Forall,
    Exists,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    LParen,
    RParen,
    Comma,
    Ident(String),
    Unknown(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Forall => f.write_str("'forall'"),
            Tok::Exists => f.write_str("'exists'"),
            Tok::Not => f.write_str("'~'"),
            Tok::And => f.write_str("'&'"),
            Tok::Or => f.write_str("'|'"),
            Tok::Implies => f.write_str("'->'"),
            Tok::Iff => f.write_str("'<->'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Neq => f.write_str("'!='"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Unknown(c) => write!(f, "character {c:?}"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(input: &str) -> Vec<(Tok, usize)> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let peek = |k: usize| chars.get(i + k).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '¬' | '~' => Tok::Not,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '=' => Tok::Eq,
            '≠' => Tok::Neq,
            '!' if peek(1) == Some('=') => {
                i += 1;
                Tok::Neq
            }
            '!' => Tok::Not,
            '-' if peek(1) == Some('>') => {
                i += 1;
                Tok::Implies
            }
            '<' if peek(1) == Some('-') && peek(2) == Some('>') => {
                i += 2;
                Tok::Iff
            }
            c if is_ident_char(c) && c != '\'' => {
                let mut j = i;
                loop {
                    while j < chars.len() && is_ident_char(chars[j]) {
                        j += 1;
                    }
                    // time-style constants such as 2:05
                    if j + 1 < chars.len() && chars[j] == ':' && chars[j + 1].is_ascii_alphanumeric() {
                        j += 1;
                        continue;
                    }
                    break;
                }
                let word: String = chars[i..j].iter().collect();
                i = j;
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                };
                toks.push((tok, start));
                continue;
            }
            other => Tok::Unknown(other),
        };
        i += 1;
        toks.push((tok, start));
    }
    toks.push((Tok::End, chars.len()));
    toks
}

/// Names that denote variables even when no quantifier binds them
/// (`u`..`z`, optionally followed by digits or primes).
pub fn is_free_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if ('u'..='z').contains(&c) => chars.all(|c| c.is_ascii_digit() || c == '\''),
        _ => false,
    }
}

/// Whether `name` may be bound by a quantifier.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(is_ident_char)
}

/// A precedence level of the grammar.
type Level = fn(&mut Parser) -> Result<Formula, ParseError>;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError { position: self.offset(), expected: expected.into(), found: self.peek().to_string() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError {
                position: self.offset(),
                expected: format!("at most {MAX_NESTING} levels of nesting"),
                found: "deeper nesting".into(),
            });
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.right_assoc(BinaryOp::Iff)
    }

    fn right_assoc(&mut self, op: BinaryOp) -> Result<Formula, ParseError> {
        let (tok, next): (Tok, Level) = match op {
            BinaryOp::Iff => (Tok::Iff, |p| p.right_assoc(BinaryOp::Implies)),
            _ => (Tok::Implies, |p| p.left_assoc(BinaryOp::Or)),
        };
        let mut operands = vec![next(self)?];
        while *self.peek() == tok {
            self.bump();
            operands.push(next(self)?);
        }
        let mut acc = operands.pop().expect("at least one operand");
        while let Some(lhs) = operands.pop() {
            acc = Formula::binary(op, lhs, acc);
        }
        Ok(acc)
    }

    fn left_assoc(&mut self, op: BinaryOp) -> Result<Formula, ParseError> {
        let (tok, next): (Tok, Level) = match op {
            BinaryOp::Or => (Tok::Or, |p| p.left_assoc(BinaryOp::And)),
            _ => (Tok::And, Parser::unary),
        };
        let mut acc = next(self)?;
        while *self.peek() == tok {
            self.bump();
            let rhs = next(self)?;
            acc = Formula::binary(op, acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(Formula::not(inner))
            }
            Tok::Forall | Tok::Exists => {
                let q = if self.bump() == Tok::Forall { Quantifier::ForAll } else { Quantifier::Exists };
                let var = match self.peek() {
                    Tok::Ident(name) if is_variable_name(name) => name.clone(),
                    _ => return Err(self.error("a lowercase variable name")),
                };
                self.bump();
                self.enter()?;
                self.scope.push(var.clone());
                let body = self.formula();
                self.scope.pop();
                self.depth -= 1;
                Ok(Formula::quantified(q, var, body?))
            }
            _ => self.primary(),
        }
    }

    fn term(&mut self, name: String) -> Term {
        if self.scope.contains(&name) || is_free_variable_name(&name) {
            Term::Variable(name)
        } else {
            Term::Constant(name)
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                self.enter()?;
                let inner = self.formula()?;
                self.depth -= 1;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    loop {
                        match self.peek().clone() {
                            Tok::Ident(arg) => {
                                self.bump();
                                args.push(self.term(arg));
                            }
                            _ => return Err(self.error("a term")),
                        }
                        match self.peek() {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => break,
                            _ => return Err(self.error("',' or ')'")),
                        }
                    }
                    let end = self.offset() + 1;
                    self.bump();
                    let mut atom = Atom::new(name, args);
                    atom.span = Some(start..end);
                    Ok(Formula::Atomic(atom))
                } else {
                    let lhs = self.term(name);
                    let negated = match self.peek() {
                        Tok::Eq => false,
                        Tok::Neq => true,
                        _ => return Err(self.error("'(' or '='")),
                    };
                    self.bump();
                    let rhs = match self.peek().clone() {
                        Tok::Ident(r) => {
                            self.bump();
                            self.term(r)
                        }
                        _ => return Err(self.error("a term")),
                    };
                    let end = self.toks[self.pos.saturating_sub(1)].1
                        + match self.toks[self.pos.saturating_sub(1)].0 {
                            Tok::Ident(ref s) => s.chars().count(),
                            _ => 1,
                        };
                    let mut atom = Atom::equality(lhs, rhs);
                    atom.span = Some(start..end);
                    let f = Formula::Atomic(atom);
                    Ok(if negated { Formula::not(f) } else { f })
                }
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses formula text in either ASCII or Unicode notation.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text), pos: 0, depth: 0, scope: Vec::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
