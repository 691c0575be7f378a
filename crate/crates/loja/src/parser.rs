//! Polynomial expression parser.
//!
//! Grammar: integers, rationals `a/b`, variable names `[a-zA-Z][a-zA-Z0-9_]*`,
//! operators `+ - * ^` with non-negative integer exponents, and parentheses.
//! Multiplication is always explicit. The canonical serializer is
//! `MultiPoly`'s `Display` impl; `parse_poly(p.to_string())` round-trips.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    toks: Vec<(usize, Tok)>,
}

impl<'a> Lexer<'a> {
    fn run(text: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
            toks: Vec::new(),
        };
        while lx.pos < lx.src.len() {
            let start = lx.pos;
            let c = lx.src[lx.pos];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => lx.pos += 1,
                b'+' => lx.push1(Tok::Plus),
                b'-' => lx.push1(Tok::Minus),
                // U+2212 minus sign, first byte 0xE2
                0xe2 if lx.src[lx.pos..].starts_with("\u{2212}".as_bytes()) => {
                    lx.toks.push((start, Tok::Minus));
                    lx.pos += "\u{2212}".len();
                }
                b'*' => lx.push1(Tok::Star),
                b'^' => lx.push1(Tok::Caret),
                b'(' => lx.push1(Tok::LParen),
                b')' => lx.push1(Tok::RParen),
                b'0'..=b'9' => lx.number(start)?,
                b'a'..=b'z' | b'A'..=b'Z' => lx.ident(start),
                _ => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!(
                            "unexpected character `{}`",
                            text[start..].chars().next().unwrap()
                        ),
                    })
                }
            }
        }
        Ok(lx.toks)
    }

    fn push1(&mut self, t: Tok) {
        self.toks.push((self.pos, t));
        self.pos += 1;
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self, start: usize) -> Result<()> {
        let num = self.take_digits();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            return Err(Error::Parse {
                pos: self.pos,
                msg: "decimal literals are not rational; write a/b".into(),
            });
        }
        let mut value: Rational = Rational::from_integer(num.parse::<BigInt>().unwrap());
        // A '/' directly after an integer literal denotes a rational literal.
        if self.pos < self.src.len() && self.src[self.pos] == b'/' {
            self.pos += 1;
            if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                return Err(Error::Parse {
                    pos: self.pos,
                    msg: "expected denominator digits after `/`".into(),
                });
            }
            let den_pos = self.pos;
            let den = self.take_digits().parse::<BigInt>().unwrap();
            if den.is_zero() {
                return Err(Error::Parse {
                    pos: den_pos,
                    msg: "zero denominator".into(),
                });
            }
            value /= Rational::from_integer(den);
        }
        self.toks.push((start, Tok::Num(value)));
        Ok(())
    }

    fn ident(&mut self, start: usize) {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        self.toks.push((start, Tok::Ident(name)));
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    idx: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t).unwrap();
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t).unwrap();
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f).unwrap();
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(e)) => {
                    if !e.is_integer() {
                        return Err(Error::Parse {
                            pos,
                            msg: "exponent must be a non-negative integer".into(),
                        });
                    }
                    let e = e.to_integer();
                    if e < BigInt::zero() || e > BigInt::from(10_000) {
                        return Err(Error::Parse {
                            pos,
                            msg: "exponent out of range".into(),
                        });
                    }
                    let e: u32 = e.to_string().parse().unwrap();
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse {
                    pos,
                    msg: "expected integer exponent after `^`".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(c)) => Ok(MultiPoly::constant(self.vars, c)),
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| **v == name) {
                Some(i) => Ok(MultiPoly::var(self.vars, i)),
                None => Err(Error::UnknownVariable { pos, name }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let pos = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse {
                        pos,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {:?}", t),
            }),
            None => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parse `text` as a polynomial in the given variables.
pub fn parse_poly(text: &str, variables: &[&str]) -> Result<MultiPoly> {
    assert!(!variables.is_empty(), "variable list must be nonempty");
    {
        let mut seen = std::collections::HashSet::new();
        for v in variables {
            assert!(seen.insert(*v), "duplicate variable name {v}");
        }
    }
    let toks = Lexer::run(text)?;
    let mut p = Parser {
        toks: &toks,
        idx: 0,
        vars: variables,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.idx != toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: format!("trailing input {:?}", p.peek().unwrap()),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    #[test]
    fn spec_examples() {
        let p = parse_poly("x^2*y + 3/2*y^2 - 1", &["x", "y"]).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.total_degree(), Some(3));

        let z = parse_poly("0", &["x", "y"]).unwrap();
        assert!(z.is_zero());

        let q = parse_poly("x*(x*y - 1)", &["x", "y"]).unwrap();
        let expect =
            MultiPoly::from_terms(&["x", "y"], [(vec![2, 1], rat(1)), (vec![1, 0], rat(-1))]);
        assert_eq!(q, expect);
    }

    #[test]
    fn rational_literals_and_signs() {
        let p = parse_poly("-3/4*x + 2", &["x", "y"]).unwrap();
        assert_eq!(
            p,
            MultiPoly::from_terms(
                &["x", "y"],
                [(vec![1, 0], rat_frac(-3, 4)), (vec![0, 0], rat(2))]
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + $", &["x", "y"]) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
        match parse_poly("x + z", &["x", "y"]) {
            Err(Error::UnknownVariable { name, .. }) => assert_eq!(name, "z"),
            other => panic!("expected unknown variable, got {:?}", other),
        }
        assert!(parse_poly("1.5*x", &["x"]).is_err());
        assert!(parse_poly("x^(2)", &["x"]).is_err());
        assert!(
            parse_poly("2 x", &["x"]).is_err(),
            "implicit multiplication rejected"
        );
    }

    #[test]
    fn round_trip_canonical() {
        let cases = ["x^2*y + 3/2*y^2 - 1", "0", "-x", "x^3 - 2*x*y + 5", "1/3"];
        for c in cases {
            let p = parse_poly(c, &["x", "y"]).unwrap();
            let s = p.to_string();
            let q = parse_poly(&s, &["x", "y"]).unwrap();
            assert_eq!(p, q, "round trip through `{s}`");
        }
    }
}
