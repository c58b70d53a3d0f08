//! Recursive-descent parser for rational expressions in `s` with an optional
//! `exp(-T*s)` factor.

use super::poly;
use super::TransferFunction;
use crate::error::{Result, SrgError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    S,
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            's' => Tok::S,
            _ if c.is_ascii_digit() || c == '.' => {
                while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && (b[j] as char).is_ascii_digit() {
                        i = j;
                        while i < b.len() && (b[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v = text
                    .parse::<f64>()
                    .map_err(|_| SrgError::Syntax { pos: start, msg: format!("bad number `{text}`") })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            _ if src[i..].starts_with("exp") => {
                i += 3;
                out.push((Tok::Exp, start));
                continue;
            }
            _ => return Err(SrgError::Syntax { pos: start, msg: format!("unexpected character `{c}`") }),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// `num/den · e^{-delay·s}` during parsing.
#[derive(Clone, Debug)]
struct Rat {
    num: Vec<f64>,
    den: Vec<f64>,
    delay: f64,
}

impl Rat {
    fn constant(c: f64) -> Self {
        Rat { num: vec![c], den: vec![1.0], delay: 0.0 }
    }

    fn is_zero(&self) -> bool {
        poly::is_zero(&self.num)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(SrgError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Rat> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let sign = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => return Ok(acc),
            };
            self.bump();
            let mut rhs = self.term()?;
            rhs.num = poly::scale(&rhs.num, sign);
            acc = add(acc, rhs, pos)?;
        }
    }

    fn term(&mut self) -> Result<Rat> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs);
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.unary()?;
                    acc = div(acc, rhs, pos)?;
                }
                Tok::Num(_) | Tok::S | Tok::LParen | Tok::Exp => {
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Rat> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let mut r = self.unary()?;
                r.num = poly::scale(&r.num, -1.0);
                Ok(r)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Rat> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = match self.bump() {
            Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 && v <= 64.0 => v as u32,
            _ => return Err(SrgError::Syntax { pos, msg: "exponent must be an integer literal in 0..=64".into() }),
        };
        let mut r = Rat {
            num: poly::pow(&base.num, n),
            den: poly::pow(&base.den, n),
            delay: base.delay * n as f64,
        };
        if neg {
            r = div(Rat::constant(1.0), r, pos)?;
        }
        Ok(r)
    }

    fn primary(&mut self) -> Result<Rat> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Rat::constant(v)),
            Tok::S => Ok(Rat { num: vec![1.0, 0.0], den: vec![1.0], delay: 0.0 }),
            Tok::LParen => {
                let r = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(r)
            }
            Tok::Exp => {
                self.expect(Tok::LParen, "`(` after exp")?;
                let arg_pos = self.pos();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                delay_factor(&arg, arg_pos)
            }
            Tok::End => Err(SrgError::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(SrgError::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

/// `exp(a·s)` with constant `a ≤ 0`.
fn delay_factor(arg: &Rat, pos: usize) -> Result<Rat> {
    let den = poly::trim(&arg.den);
    let num = poly::trim(&arg.num);
    let constant_den = den.len() == 1;
    let linear = num.len() == 2 && num[1] == 0.0;
    if arg.delay != 0.0 || !constant_den || !(linear || poly::is_zero(&num)) {
        return Err(SrgError::Syntax { pos, msg: "delay exponent must have the form -T*s with constant T".into() });
    }
    let t = if linear { -num[0] / den[0] } else { 0.0 };
    if t < 0.0 || !t.is_finite() {
        return Err(SrgError::Syntax { pos, msg: format!("delay must be nonnegative, got {t}") });
    }
    Ok(Rat { num: vec![1.0], den: vec![1.0], delay: t })
}

fn add(a: Rat, b: Rat, pos: usize) -> Result<Rat> {
    if a.is_zero() {
        return Ok(b);
    }
    if b.is_zero() {
        return Ok(a);
    }
    if a.delay != b.delay {
        return Err(SrgError::Syntax { pos, msg: "terms with different delays cannot be added".into() });
    }
    if a.den == b.den {
        return Ok(Rat { num: poly::add(&a.num, &b.num), den: a.den, delay: a.delay });
    }
    Ok(Rat {
        num: poly::add(&poly::mul(&a.num, &b.den), &poly::mul(&b.num, &a.den)),
        den: poly::mul(&a.den, &b.den),
        delay: a.delay,
    })
}

fn mul(a: Rat, b: Rat) -> Rat {
    Rat { num: poly::mul(&a.num, &b.num), den: poly::mul(&a.den, &b.den), delay: a.delay + b.delay }
}

fn div(a: Rat, b: Rat, pos: usize) -> Result<Rat> {
    if b.is_zero() {
        return Err(SrgError::Syntax { pos, msg: "division by the zero polynomial".into() });
    }
    if b.delay > 0.0 {
        return Err(SrgError::Syntax { pos, msg: "division by a delay factor gives a predictor".into() });
    }
    Ok(Rat { num: poly::mul(&a.num, &b.den), den: poly::mul(&a.den, &b.num), delay: a.delay })
}

pub fn parse_tf(src: &str) -> Result<TransferFunction> {
    let mut p = Parser { toks: lex(src)?, i: 0 };
    let r = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    TransferFunction::new(r.num, r.den, r.delay)
}
