//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! formula := block* matrix
//! block   := ("E" | "A") "{" var ("," var)* "}"
//! ```
//!
//! Binding strength, tightest first: `! X F G`, then `U R` (right
//! associative), `&`, `|`, `->` (right associative), `<->` (right
//! associative). `#` starts a comment that runs to the end of the line.

use super::ast::{Matrix, QuantBlock, QuantifiedFormula, Quantifier, Var, VarSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Exists,
    Forall,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '!' => push(Tok::Not, 1, &mut i, &mut col),
            '&' => push(Tok::And, 1, &mut i, &mut col),
            '|' => push(Tok::Or, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Implies, 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut col)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "E" => Tok::Exists,
                    "A" => Tok::Forall,
                    "X" => Tok::Next,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    w if w.starts_with(|c: char| c.is_ascii_lowercase()) => Tok::Ident(word),
                    _ => {
                        return Err(Error::Syntax {
                            line,
                            column: col,
                            message: format!("unexpected word `{word}`"),
                        })
                    }
                };
                let len = j - i;
                push(tok, len, &mut i, &mut col);
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek().tok))
        }
    }

    fn at_block(&self) -> bool {
        matches!(self.peek().tok, Tok::Exists | Tok::Forall)
            && self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::LBrace)
    }

    fn formula(&mut self) -> Result<QuantifiedFormula> {
        let mut prefix = Vec::new();
        let mut bound = VarSet::new();
        while self.at_block() {
            let kind = match self.bump().tok {
                Tok::Exists => Quantifier::Exists,
                _ => Quantifier::Forall,
            };
            self.expect(Tok::LBrace, "`{`")?;
            let mut vars = VarSet::new();
            loop {
                let v = self.var()?;
                if !bound.insert(v.clone()) {
                    return Err(Error::Rebound(v.to_string()));
                }
                vars.insert(v);
                match self.peek().tok {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RBrace => {
                        self.bump();
                        break;
                    }
                    _ => return self.error("expected `,` or `}`"),
                }
            }
            prefix.push(QuantBlock { kind, vars });
        }
        let matrix = self.iff()?;
        if self.peek().tok != Tok::Eof {
            return self.error(format!("unexpected {:?}", self.peek().tok));
        }
        QuantifiedFormula::new(prefix, matrix)
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                self.bump();
                Var::new(&name)
            }
            other => self.error(format!("expected a variable, found {other:?}")),
        }
    }

    fn iff(&mut self) -> Result<Matrix> {
        let lhs = self.implies()?;
        if self.peek().tok == Tok::Iff {
            self.bump();
            return Ok(Matrix::iff(lhs, self.iff()?));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Matrix> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Implies {
            self.bump();
            return Ok(Matrix::implies(lhs, self.implies()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Matrix> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            lhs = Matrix::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Matrix> {
        let mut lhs = self.binary_temporal()?;
        while self.peek().tok == Tok::And {
            self.bump();
            lhs = Matrix::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Matrix> {
        let lhs = self.unary()?;
        match self.peek().tok {
            Tok::Until => {
                self.bump();
                Ok(Matrix::until(lhs, self.binary_temporal()?))
            }
            Tok::Release => {
                self.bump();
                Ok(Matrix::release(lhs, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Matrix> {
        if self.at_block() {
            let t = self.peek();
            return Err(Error::NonPrenex {
                line: t.line,
                column: t.column,
            });
        }
        match self.peek().tok.clone() {
            Tok::Not => {
                self.bump();
                Ok(Matrix::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(Matrix::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(Matrix::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.bump();
                Ok(Matrix::globally(self.unary()?))
            }
            Tok::True => {
                self.bump();
                Ok(Matrix::True)
            }
            Tok::False => {
                self.bump();
                Ok(Matrix::False)
            }
            Tok::Ident(_) => Ok(Matrix::Atom(self.var()?)),
            Tok::LParen => {
                self.bump();
                let m = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(m)
            }
            other => self.error(format!("unexpected {other:?}")),
        }
    }
}

/// Parses a prenex formula.
pub fn parse(text: &str) -> Result<QuantifiedFormula> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.formula()
}

/// Parses a bare LTL matrix (no quantifier blocks allowed).
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let f = parse(text)?;
    if !f.prefix().is_empty() {
        return Err(Error::Invalid("expected a quantifier-free matrix".into()));
    }
    Ok(f.matrix().clone())
}
