//! Recursive-descent parser for runtime formulas.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | constant | variable | func '(' expr ')' | '(' expr ')'
//! ```

use super::ast::{BinOp, Func, Node, Var, VarSet};
use super::ParseError;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Num(&'a str),
    Ident(&'a str),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((start, Tok::End));
        };
        let tok = match c {
            b'0'..=b'9' | b'.' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                // scientific suffix only when digits follow, so `2e` stays an error
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut k = end + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        end = k;
                    }
                }
                self.pos = end;
                Tok::Num(&self.src[start..end])
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                Tok::Ident(&self.src[start..end])
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        };
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok<'a>),
    allowed: VarSet,
}

pub(super) fn parse<T: Scalar>(src: &str, allowed: VarSet) -> Result<Node<T>, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError::Syntax {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut lexer = Lexer { src, pos: 0 };
    let peeked = lexer.next()?;
    let mut p = Parser {
        lexer,
        peeked,
        allowed,
    };
    let node = p.expr()?;
    match p.peeked {
        (_, Tok::End) => Ok(node),
        (pos, ref tok) => Err(ParseError::Syntax {
            position: pos,
            message: format!("unexpected {} after complete expression", describe(tok)),
        }),
    }
}

fn describe(tok: &Tok<'_>) -> String {
    match tok {
        Tok::Num(s) => format!("number '{s}'"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Op(c) => format!("operator '{c}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    fn expect_rparen(&mut self, open_at: usize) -> Result<(), ParseError> {
        match self.bump()? {
            (_, Tok::RParen) => Ok(()),
            (pos, tok) => Err(ParseError::Syntax {
                position: pos,
                message: format!(
                    "expected ')' to close '(' at {open_at}, found {}",
                    describe(&tok)
                ),
            }),
        }
    }

    fn expr<T: Scalar>(&mut self) -> Result<Node<T>, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peeked.1 {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Node::binary(op, lhs, self.term()?);
        }
    }

    fn term<T: Scalar>(&mut self) -> Result<Node<T>, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peeked.1 {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Node::binary(op, lhs, self.unary()?);
        }
    }

    fn unary<T: Scalar>(&mut self) -> Result<Node<T>, ParseError> {
        if self.peeked.1 == Tok::Op('-') {
            self.bump()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power<T: Scalar>(&mut self) -> Result<Node<T>, ParseError> {
        let base = self.primary()?;
        if self.peeked.1 == Tok::Op('^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Node::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary<T: Scalar>(&mut self) -> Result<Node<T>, ParseError> {
        let (pos, tok) = self.bump()?;
        match tok {
            Tok::Num(text) => text
                .parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Node::Const)
                .ok_or_else(|| ParseError::Syntax {
                    position: pos,
                    message: format!("malformed number '{text}'"),
                }),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen(pos)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(pos, name),
            other => Err(ParseError::Syntax {
                position: pos,
                message: format!("expected a value, found {}", describe(&other)),
            }),
        }
    }

    fn identifier<T: Scalar>(&mut self, pos: usize, name: &str) -> Result<Node<T>, ParseError> {
        let is_call = self.peeked.1 == Tok::LParen;
        if is_call {
            let func = Func::from_name(name).ok_or_else(|| ParseError::UnknownFunction {
                position: pos,
                name: name.to_string(),
            })?;
            let (open, _) = self.bump()?;
            let arg = self.expr()?;
            self.expect_rparen(open)?;
            return Ok(Node::call(func, arg));
        }
        match name {
            "e" => return Ok(Node::Const(T::E())),
            "pi" => return Ok(Node::Const(T::PI())),
            _ => {}
        }
        if Func::from_name(name).is_some() {
            return Err(ParseError::Syntax {
                position: pos,
                message: format!("function '{name}' must be called with parentheses"),
            });
        }
        match Var::from_name(name) {
            Some(var) if self.allowed.contains(var) => Ok(Node::Var(var)),
            _ => Err(ParseError::UnknownVariable {
                position: pos,
                name: name.to_string(),
                allowed: self.allowed.to_string(),
            }),
        }
    }
}
