//! Constant angle expressions: numeric literals, `pi`, `+ - * /`, unary sign
//! and parentheses.
//!
//! Evaluation stays exact while the value is a rational multiple of `π⁰` or
//! `π¹`, so `2*pi/3` becomes the exact angle `2π/3` rather than a float.

use super::lexer::{Token, TokenKind};
use super::{QasmError, QasmErrorKind};
use crate::angle::{gcd, AngleValue, PiFraction};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Value {
    /// `num/den · π^pi_power`, lowest terms, `den > 0`.
    Exact {
        num: i64,
        den: i64,
        pi_power: i32,
    },
    Real(f64),
}

impl Value {
    fn exact(num: i64, den: i64, pi_power: i32) -> Option<Value> {
        if den == 0 {
            return None;
        }
        let sign: i64 = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Some(Value::Exact {
            num: sign.checked_mul(num)? / g,
            den: sign.checked_mul(den)? / g,
            pi_power,
        })
    }

    fn to_f64(self) -> f64 {
        match self {
            Value::Exact { num, den, pi_power } => {
                num as f64 / den as f64 * std::f64::consts::PI.powi(pi_power)
            }
            Value::Real(x) => x,
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Exact { num, den, pi_power } => match num.checked_neg() {
                Some(num) => Value::Exact { num, den, pi_power },
                None => Value::Real(-self.to_f64()),
            },
            Value::Real(x) => Value::Real(-x),
        }
    }

    fn add(self, rhs: Value) -> Value {
        if let (
            Value::Exact {
                num: a,
                den: b,
                pi_power: p,
            },
            Value::Exact {
                num: c,
                den: d,
                pi_power: q,
            },
        ) = (self, rhs)
        {
            if a == 0 {
                return rhs;
            }
            if c == 0 {
                return self;
            }
            if p == q {
                let sum = a
                    .checked_mul(d)
                    .zip(c.checked_mul(b))
                    .and_then(|(x, y)| x.checked_add(y));
                if let Some(v) = sum
                    .zip(b.checked_mul(d))
                    .and_then(|(n, m)| Value::exact(n, m, p))
                {
                    return v;
                }
            }
        }
        Value::Real(self.to_f64() + rhs.to_f64())
    }

    fn mul(self, rhs: Value) -> Value {
        if let (
            Value::Exact {
                num: a,
                den: b,
                pi_power: p,
            },
            Value::Exact {
                num: c,
                den: d,
                pi_power: q,
            },
        ) = (self, rhs)
        {
            let pi_power = if a == 0 || c == 0 { 0 } else { p + q };
            if let Some(v) = a
                .checked_mul(c)
                .zip(b.checked_mul(d))
                .and_then(|(n, m)| Value::exact(n, m, pi_power))
            {
                return v;
            }
        }
        Value::Real(self.to_f64() * rhs.to_f64())
    }

    fn div(self, rhs: Value) -> Option<Value> {
        match rhs {
            Value::Exact { num: 0, .. } => None,
            Value::Real(0.0) => None,
            Value::Exact { num, den, pi_power } => {
                Some(self.mul(
                    Value::exact(den, num, -pi_power).unwrap_or(Value::Real(1.0 / rhs.to_f64())),
                ))
            }
            Value::Real(x) => Some(Value::Real(self.to_f64() / x)),
        }
    }

    fn into_angle(self) -> AngleValue {
        match self {
            Value::Exact { num: 0, .. } => {
                PiFraction::new(0, 1).expect("nonzero denominator").into()
            }
            Value::Exact {
                num,
                den,
                pi_power: 1,
            } => PiFraction::new(num, den)
                .expect("nonzero denominator")
                .into(),
            other => AngleValue::from_radians(other.to_f64())
                .unwrap_or_else(|_| AngleValue::from_radians(0.0).expect("finite")),
        }
    }
}

/// Parses a decimal literal exactly when its digits fit in an `i64`.
fn literal(text: &str) -> Option<Value> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().ok()?
    };
    let scale = exponent - frac_part.len() as i32;
    let pow10 = |k: i32| 10i64.checked_pow(k.unsigned_abs());
    if scale >= 0 {
        Value::exact(num.checked_mul(pow10(scale)?)?, 1, 0)
    } else {
        Value::exact(num, pow10(scale)?, 0)
    }
}

pub(crate) struct ExprParser<'a> {
    tokens: &'a [Token],
    pub(crate) pos: usize,
    implicit_mul: bool,
}

impl<'a> ExprParser<'a> {
    pub(crate) fn new(tokens: &'a [Token], pos: usize, implicit_mul: bool) -> Self {
        Self {
            tokens,
            pos,
            implicit_mul,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> &Token {
        let t = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        self.pos += 1;
        t
    }

    fn malformed(&self, token: &Token, what: &str) -> QasmError {
        QasmError::new(
            token.span,
            QasmErrorKind::MalformedExpression(format!("{what}, found `{}`", token.kind)),
        )
    }

    pub(crate) fn parse_angle(&mut self) -> Result<AngleValue, QasmError> {
        Ok(self.expr()?.into_angle())
    }

    fn expr(&mut self) -> Result<Value, QasmError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.advance();
                    acc = acc.add(self.term()?);
                }
                TokenKind::Minus => {
                    self.advance();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, QasmError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    self.advance();
                    acc = acc.mul(self.unary()?);
                }
                TokenKind::Slash => {
                    let slash = self.advance().clone();
                    let rhs = self.unary()?;
                    acc = acc.div(rhs).ok_or_else(|| {
                        QasmError::new(
                            slash.span,
                            QasmErrorKind::MalformedExpression("division by zero".into()),
                        )
                    })?;
                }
                TokenKind::Ident(_) | TokenKind::LParen if self.implicit_mul => {
                    acc = acc.mul(self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, QasmError> {
        match self.peek().kind {
            TokenKind::Minus => {
                self.advance();
                Ok(self.unary()?.neg())
            }
            TokenKind::Plus => {
                self.advance();
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Value, QasmError> {
        let token = self.advance().clone();
        match &token.kind {
            TokenKind::Int(s) | TokenKind::Real(s) => {
                Ok(literal(s).unwrap_or_else(|| Value::Real(s.parse().unwrap_or(f64::NAN))))
            }
            TokenKind::Ident(name) if name == "pi" => Ok(Value::Exact {
                num: 1,
                den: 1,
                pi_power: 1,
            }),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.advance().clone();
                if close.kind != TokenKind::RParen {
                    return Err(self.malformed(&close, "expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.malformed(&token, "expected a number, `pi` or `(`")),
        }
    }
}
