use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::{Expr, Formula};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Tilde,
    LParen,
    RParen,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => alloc::format!("identifier `{name}`"),
            Token::Tilde => "`~`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Amp => "`&`".into(),
            Token::Bar => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::DoubleArrow => "`<->`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, Error> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'~' => Token::Tilde,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'&' => Token::Amp,
            b'|' => Token::Bar,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Token::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, alloc::format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        tokens.push((start, token));
    }
    tokens.push((text.len(), Token::End));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].1.clone();
        if token != Token::End {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == token {
            self.bump();
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.implication()?;
        while self.eat(&Token::DoubleArrow) {
            let rhs = self.implication()?;
            lhs = Expr::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, Error> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.implication()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, Error> {
        let mut parts = alloc::vec![self.conjunction()?];
        while self.eat(&Token::Bar) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Expr, Error> {
        let mut parts = alloc::vec![self.unary()?];
        while self.eat(&Token::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        let offset = self.offset();
        match self.bump() {
            Token::Tilde => Ok(Expr::Not(Box::new(self.unary()?))),
            Token::Ident(name) => Ok(Expr::Atom(name)),
            Token::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(syntax(
                        self.offset(),
                        alloc::format!("expected `)`, found {}", self.peek().describe()),
                    ));
                }
                Ok(inner)
            }
            other => Err(syntax(
                offset,
                alloc::format!("expected a formula, found {}", other.describe()),
            )),
        }
    }
}

/// Parses a formula. Precedence from tightest: `~`, `&`, `|`, `->`
/// (right-associative), `<->`.
pub fn parse(text: &str) -> Result<Formula, Error> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.iff()?;
    if *parser.peek() != Token::End {
        return Err(syntax(
            parser.offset(),
            alloc::format!("unexpected {}", parser.peek().describe()),
        ));
    }
    Ok(Formula::new(expr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> Expr {
        Expr::Atom(name.into())
    }

    #[test]
    fn reads_contradiction() {
        let f = parse("a & ~a").unwrap();
        assert_eq!(*f.expr(), Expr::And(alloc::vec![atom("a"), Expr::Not(Box::new(atom("a")))]));
    }

    #[test]
    fn precedence_of_implication() {
        let f = parse("a | b -> c").unwrap();
        assert_eq!(
            *f.expr(),
            Expr::Implies(Box::new(Expr::Or(alloc::vec![atom("a"), atom("b")])), Box::new(atom("c")))
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse("a -> b -> c").unwrap();
        assert_eq!(
            *f.expr(),
            Expr::Implies(
                Box::new(atom("a")),
                Box::new(Expr::Implies(Box::new(atom("b")), Box::new(atom("c"))))
            )
        );
    }

    #[test]
    fn iff_binds_loosest() {
        let f = parse("a -> b <-> c").unwrap();
        assert!(matches!(f.expr(), Expr::Iff(lhs, _) if matches!(**lhs, Expr::Implies(..))));
    }

    #[test]
    fn unbalanced_parenthesis() {
        assert_eq!(
            parse("(a").unwrap_err(),
            Error::Syntax { offset: 2, message: "expected `)`, found end of input".into() }
        );
    }

    #[test]
    fn other_errors_carry_offsets() {
        assert!(matches!(parse("a &"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("a b"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("a $ b"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("a - b"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" ( a\t&b )\n").unwrap().expr(), parse("a&b").unwrap().expr());
    }
}
