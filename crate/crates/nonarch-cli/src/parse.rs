//! Exact numeric literals, polynomial expressions, and series generators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use nonarch::multipoly::MultiPoly;
use nonarch::poly::RatPoly;
use nonarch::tate_series::TruncatedSeries;
use nonarch::valuation::{Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("float literal {0:?} is not accepted; write a rational a/b")]
    Float(String),
    #[error("not a rational number: {0:?}")]
    Number(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("unexpected {found} at position {at} in {input:?}")]
    Unexpected { input: String, at: usize, found: String },
    #[error("unknown variable {name:?}; expected one of {expected:?}")]
    UnknownVariable { name: String, expected: Vec<String> },
    #[error("expected a univariate polynomial, found variables {0:?}")]
    TooManyVariables(Vec<String>),
    #[error("unknown generator {0:?}")]
    Generator(String),
}

/// Integer or `a/b`, optionally signed.
pub fn rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    if t.contains('.') || t.contains(['e', 'E']) && t.chars().any(|c| c.is_ascii_digit()) {
        return Err(ParseError::Float(s.to_string()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let parse = |x: &str| -> Result<BigInt, ParseError> {
        let digits = x.strip_prefix(['+', '-']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::Number(s.to_string()));
        }
        x.parse().map_err(|_| ParseError::Number(s.to_string()))
    };
    let (n, d) = (parse(num)?, parse(den)?);
    if d.is_zero() {
        return Err(ParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

pub fn rational_list(s: &str) -> Result<Vec<Rational>, ParseError> {
    s.split(',').map(rational).collect()
}

pub fn integer(s: &str) -> Result<i64, ParseError> {
    let r = rational(s)?;
    if !r.is_integer() {
        return Err(ParseError::Number(s.to_string()));
    }
    r.to_integer().try_into().map_err(|_| ParseError::Number(s.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(ParseError::Float(input.to_string()));
            }
            // a/b only between two digit runs
            if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((start, Token::Number(rational(&input[start..i])?)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(input[start..i].to_string())));
        } else if "+-*^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Unexpected { input: input.to_string(), at: i, found: c.to_string() });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn unexpected(&self) -> ParseError {
        let (at, found) = match self.tokens.get(self.pos) {
            Some((at, t)) => (*at, format!("{t:?}")),
            None => (self.input.len(), "end of input".to_string()),
        };
        ParseError::Unexpected { input: self.input.to_string(), at, found }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                // implicit product: 3T, 2(x+1), x y
                Some(Token::Number(_) | Token::Ident(_) | Token::Op('(')) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Token::Number(n)) if n.is_integer() && n >= &Rational::zero() => {
                    let e: u32 = n.to_integer().try_into().map_err(|_| self.unexpected())?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.unexpected()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let n = self.vars.len();
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Number(c)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(n, c))
            }
            Some(Token::Ident(name)) => {
                let i = self.vars.iter().position(|v| *v == name).ok_or_else(|| ParseError::UnknownVariable {
                    name: name.clone(),
                    expected: self.vars.to_vec(),
                })?;
                self.pos += 1;
                Ok(MultiPoly::variable(n, i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Identifiers used in `input`, sorted.
pub fn variables(input: &str) -> Result<Vec<String>, ParseError> {
    let names: BTreeSet<String> = tokenize(input)?
        .into_iter()
        .filter_map(|(_, t)| match t {
            Token::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    Ok(names.into_iter().collect())
}

pub fn multi_poly(input: &str, vars: &[String]) -> Result<MultiPoly, ParseError> {
    let mut parser = Parser { input, tokens: tokenize(input)?, pos: 0, vars };
    let out = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected());
    }
    Ok(out)
}

fn generator(input: &str) -> Option<Result<RatPoly, ParseError>> {
    let (name, arg) = input.trim().split_once(':')?;
    let order = || -> Result<usize, ParseError> {
        arg.trim().parse().map_err(|_| ParseError::Generator(input.to_string()))
    };
    // the coefficients do not depend on p or the radius
    let p = Prime::new(2).expect("prime");
    let build = |f: fn(Prime, usize, Rational) -> TruncatedSeries| order().map(|n| f(p, n, Rational::zero()).to_poly());
    Some(match name.trim() {
        "exp-trunc" => build(TruncatedSeries::exp),
        "log-trunc" => build(TruncatedSeries::log1p),
        "log-over-t-trunc" => build(TruncatedSeries::log1p_over_t),
        _ => Err(ParseError::Generator(input.to_string())),
    })
}

/// A univariate polynomial or one of the generators `exp-trunc:N`,
/// `log-trunc:N`, `log-over-t-trunc:N`.
pub fn univariate(input: &str) -> Result<RatPoly, ParseError> {
    if let Some(generated) = generator(input) {
        return generated;
    }
    let vars = variables(input)?;
    if vars.len() > 1 {
        return Err(ParseError::TooManyVariables(vars));
    }
    let vars = if vars.is_empty() { vec!["T".to_string()] } else { vars };
    let multi = multi_poly(input, &vars)?;
    let degree = multi.support().iter().map(|e| e[0] as usize).max().unwrap_or(0);
    Ok(RatPoly::new((0..=degree).map(|k| multi.coeff(&[k as u32])).collect()))
}

/// Declared order of a generator input, if any.
pub fn generator_order(input: &str) -> Option<usize> {
    generator(input)?.ok()?;
    input.split_once(':')?.1.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nonarch::valuation::{frac, int};

    #[test]
    fn rationals() {
        assert_eq!(rational("-63/8").unwrap(), frac(-63, 8));
        assert_eq!(rational(" 12 ").unwrap(), int(12));
        assert_eq!(rational("4/6").unwrap(), frac(2, 3));
        assert!(matches!(rational("0.5"), Err(ParseError::Float(_))));
        assert!(matches!(rational("1e3"), Err(ParseError::Float(_))));
        assert!(matches!(rational("1/0"), Err(ParseError::ZeroDenominator(_))));
        assert!(matches!(rational("x"), Err(ParseError::Number(_))));
        assert!(matches!(rational(""), Err(ParseError::Number(_))));
    }

    #[test]
    fn univariate_expressions() {
        assert_eq!(univariate("T^2 - 6*T + 5").unwrap(), RatPoly::from_ints(&[5, -6, 1]));
        assert_eq!(univariate("x^2-2").unwrap(), RatPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(univariate("(T-1)(T+1)").unwrap(), RatPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(univariate("1/2 T^3 - T").unwrap(), RatPoly::new(vec![int(0), int(-1), int(0), frac(1, 2)]));
        assert_eq!(univariate("-3").unwrap(), RatPoly::from_ints(&[-3]));
        assert_eq!(univariate("2(T + 1)^2").unwrap(), RatPoly::from_ints(&[2, 4, 2]));
        assert!(univariate("x*y").is_err());
        assert!(univariate("T^").is_err());
        assert!(univariate("T^-1").is_err());
        assert!(univariate("0.5 T").is_err());
        assert!(univariate("(T").is_err());
    }

    #[test]
    fn generators() {
        let e = univariate("exp-trunc:3").unwrap();
        assert_eq!(e, RatPoly::new(vec![int(1), int(1), frac(1, 2), frac(1, 6)]));
        assert_eq!(univariate("log-trunc:2").unwrap(), RatPoly::new(vec![int(0), int(1), frac(-1, 2)]));
        assert_eq!(univariate("log-over-t-trunc:1").unwrap(), RatPoly::new(vec![int(1), frac(-1, 2)]));
        assert!(matches!(univariate("sin-trunc:3"), Err(ParseError::Generator(_))));
        assert!(matches!(univariate("exp-trunc:x"), Err(ParseError::Generator(_))));
        assert_eq!(generator_order("exp-trunc:30"), Some(30));
        assert_eq!(generator_order("T^2"), None);
    }

    #[test]
    fn multivariate_expressions() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let f = multi_poly("1 + x + y", &vars).unwrap();
        assert_eq!(f.support(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let g = multi_poly("x y - 2 x^2", &vars).unwrap();
        assert_eq!(g.coeff(&[1, 1]), int(1));
        assert_eq!(g.coeff(&[2, 0]), int(-2));
        assert!(matches!(multi_poly("z", &vars), Err(ParseError::UnknownVariable { .. })));
        assert_eq!(variables("y^6 - 5 x y^5").unwrap(), vec!["x", "y"]);
    }
}
