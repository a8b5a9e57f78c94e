//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | base ('^' '-'? integer)?
//! base    := integer | coord | constant | funcall | '(' expr ')'
//! funcall := ident '(' expr (',' expr)* ')'
//!          | 'diff' '(' expr ',' coord (',' integer)? ')'
//!          | 'D' '[' integer (',' integer)* ']' '(' ident ')' '(' args ')'
//!          | ('sin' | 'cos' | 'exp') '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::atom::FuncApp;
use super::{Expr, Rational};
use crate::error::{Error, Result};
use crate::tensor::Chart;

pub const RESERVED: [&str; 5] = ["diff", "D", "sin", "cos", "exp"];

const MAX_EXPONENT: u64 = 256;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer;

impl Lexer {
    fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
        let bytes: Vec<char> = src.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits")), start));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_alphanumeric() || bytes[i] == '_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
            } else if "+-*/^(),[]".contains(c) {
                out.push((Tok::Sym(c), i));
                i += 1;
            } else {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    chart: &'a Chart,
}

/// Parses `src` against the coordinates and function symbols of `chart`.
pub fn parse_expr(src: &str, chart: &Chart) -> Result<Expr> {
    let toks = Lexer::lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        chart,
    };
    if p.toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    if let Some((t, pos)) = p.toks.get(p.at) {
        return Err(Error::Syntax {
            pos: *pos,
            msg: format!("unexpected trailing token {t:?}"),
        });
    }
    Ok(e)
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn err(&self, msg: String) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg,
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.err("expected integer".into())),
        }
    }

    fn small_integer(&mut self) -> Result<u32> {
        let pos = self.pos();
        let n = self.integer()?;
        n.to_u64()
            .filter(|v| *v <= MAX_EXPONENT)
            .map(|v| v as u32)
            .ok_or(Error::Syntax {
                pos,
                msg: format!("integer {n} out of range (max {MAX_EXPONENT})"),
            })
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok((s, pos))
            }
            _ => Err(self.err("expected identifier".into())),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.factor()?;
                acc = acc.checked_div(&d).ok_or(Error::Syntax {
                    pos,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            let pos = self.pos();
            self.at += 1;
            let neg = self.eat('-');
            let e = self.small_integer()? as i32;
            if neg && base.is_zero() {
                return Err(Error::Syntax {
                    pos,
                    msg: "negative power of zero".into(),
                });
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::from_rational(Rational::from_integer(n)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(_)) => self.ident_base(),
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input".into())),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect('(')?;
        let mut args = Vec::new();
        if self.eat(')') {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(')') {
                return Ok(args);
            }
            self.expect(',')?;
        }
    }

    fn coord_name(&mut self) -> Result<String> {
        let (name, pos) = self.ident()?;
        if self.chart.index_of(&name).is_none() {
            return Err(Error::Syntax {
                pos,
                msg: format!("`{name}` is not a chart coordinate"),
            });
        }
        Ok(name)
    }

    fn ident_base(&mut self) -> Result<Expr> {
        let (name, pos) = self.ident()?;
        match name.as_str() {
            "sin" | "cos" | "exp" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(match name.as_str() {
                    "sin" => Expr::sin(e),
                    "cos" => Expr::cos(e),
                    _ => Expr::exp(e),
                })
            }
            "diff" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let c = self.coord_name()?;
                let n = if self.eat(',') { self.small_integer()? } else { 1 };
                self.expect(')')?;
                Ok(e.derive_n(&c, n))
            }
            "D" => {
                self.expect('[')?;
                let mut orders = vec![self.small_integer()?];
                while self.eat(',') {
                    orders.push(self.small_integer()?);
                }
                self.expect(']')?;
                self.expect('(')?;
                let (fname, fpos) = self.ident()?;
                self.expect(')')?;
                let app = self.func_app(&fname, fpos)?;
                if orders.len() != app.params.len() {
                    return Err(Error::Arity {
                        name: fname,
                        expected: app.params.len(),
                        got: orders.len(),
                    });
                }
                Ok(Expr::func_app(app.with_dorder(orders)))
            }
            _ if self.chart.index_of(&name).is_some() => Ok(Expr::coord(&name)),
            _ => Ok(Expr::func_app(self.func_app(&name, pos)?)),
        }
    }

    fn func_app(&mut self, name: &str, pos: usize) -> Result<FuncApp> {
        let params = self
            .chart
            .func_params(name)
            .ok_or_else(|| Error::UnknownIdent {
                name: name.to_string(),
                pos,
            })?
            .to_vec();
        let args = if params.is_empty() && self.peek() != Some(&Tok::Sym('(')) {
            Vec::new()
        } else {
            self.args()?
        };
        if args.len() != params.len() {
            return Err(Error::Arity {
                name: name.to_string(),
                expected: params.len(),
                got: args.len(),
            });
        }
        let p: Vec<&str> = params.iter().map(String::as_str).collect();
        Ok(FuncApp::new(name, &p).with_args(args))
    }
}

impl Expr {
    /// Parses an integer literal used in rational constants like `3/4`.
    pub fn parse_rational(s: &str) -> Option<Rational> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::txy()
            .with_func("a", &["y"])
            .unwrap()
            .with_func("f", &["t", "x", "y"])
            .unwrap()
            .with_func("alpha", &[])
            .unwrap()
    }

    #[test]
    fn walker_profile() {
        let c = chart();
        let e = c.parse("x^3 + a(y)*x").unwrap();
        let x = Expr::coord("x");
        assert_eq!(e, x.pow(3) + Expr::func("a", &["y"]) * x);
    }

    #[test]
    fn zero_and_derivative_atom() {
        let c = chart();
        assert!(c.parse("0").unwrap().is_zero());
        let d = c.parse("diff(a(y), y, 2)").unwrap();
        assert_eq!(d, Expr::func("a", &["y"]).derive_n("y", 2));
        assert_eq!(d.to_string(), "diff(a(y), y, 2)");
    }

    #[test]
    fn precedence() {
        let c = chart();
        assert_eq!(c.parse("-x^2").unwrap(), -Expr::coord("x").pow(2));
        assert_eq!(c.parse("3/4*y^2").unwrap(), Expr::rational(3, 4) * Expr::coord("y").pow(2));
        assert_eq!(c.parse("2^-2").unwrap(), Expr::rational(1, 4));
        assert_eq!(c.parse("alpha*alpha()").unwrap(), Expr::constant("alpha").pow(2));
    }

    #[test]
    fn errors() {
        let c = chart();
        assert!(matches!(c.parse("x +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(c.parse("z"), Err(Error::UnknownIdent { .. })));
        assert!(matches!(c.parse("a(x, y)"), Err(Error::Arity { .. })));
        assert!(matches!(c.parse("x / (y - y)"), Err(Error::Syntax { .. })));
        assert!(matches!(c.parse("x $ y"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn composite_derivative_round_trip() {
        let c = chart();
        let e = c.parse("D[2](a)(2*y + 1) + diff(f(t, x, y), t, 3)").unwrap();
        let again = c.parse(&e.to_string()).unwrap();
        assert_eq!(e, again);
    }
}
