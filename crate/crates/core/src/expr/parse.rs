//! Recursive-descent parser for the manifest expression grammar:
//! integers, symbols, `+ - * / ^` (integer exponents) and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::{Expr, SymbolTable};

/// Parse failure with a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: BigInt = digits.parse().expect("ascii digits");
            toks.push((Tok::Int(n), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else if c == '−' {
            // U+2212 minus sign
            toks.push((Tok::Op('-'), col));
            i += 1;
        } else {
            return Err(ParseError {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let col = self.col();
                    let rhs = self.unary()?;
                    acc = acc.try_div(&rhs).map_err(|_| ParseError {
                        column: col,
                        message: "division by an expression that is identically zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let negative = if self.peek() == &Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let exp = match self.bump() {
            Tok::Int(n) => n,
            _ => {
                return Err(ParseError {
                    column: col,
                    message: "expected an integer exponent".into(),
                })
            }
        };
        let exp: i32 = match i32::try_from(exp) {
            Ok(e) => e,
            Err(_) => {
                return Err(ParseError {
                    column: col,
                    message: "exponent out of range".into(),
                })
            }
        };
        let exp = if negative { -exp } else { exp };
        base.pow(exp).map_err(|_| ParseError {
            column: col,
            message: "negative power of an expression that is identically zero".into(),
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::rational(BigRational::from_integer(n))),
            Tok::Ident(name) => self.symbols.symbol_expr(&name).map_err(|_| ParseError {
                column: col,
                message: format!("unknown symbol `{name}`"),
            }),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(ParseError {
                column: col,
                message: "unexpected end of expression".into(),
            }),
            Tok::Op(c) => Err(ParseError {
                column: col,
                message: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// Parses `src` against the declared symbols.
pub fn parse_expr(src: &str, symbols: &SymbolTable) -> Result<Expr, ParseError> {
    let lexer = lex(src)?;
    let mut parser = Parser {
        toks: lexer.toks,
        pos: 0,
        symbols,
    };
    let e = parser.expr()?;
    if parser.peek() != &Tok::End {
        return parser.err("unexpected trailing input");
    }
    Ok(e)
}
