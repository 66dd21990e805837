//! Recursive-descent parser for polynomials in `x` and `y` with rational
//! coefficients: `+ - * ^`, parentheses and implicit multiplication
//! (`3x`, `x(y+1)`). The result must be a nonzero homogeneous form.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::BinaryForm;
use crate::error::{Error, Result};
use crate::num::parse_rat;

const MAX_EXPONENT: u32 = 512;

/// Sparse polynomial: `(deg_x, deg_y) ↦ coefficient`.
type Sparse = BTreeMap<(u32, u32), BigRational>;

fn constant(c: BigRational) -> Sparse {
    let mut p = Sparse::new();
    if !c.is_zero() {
        p.insert((0, 0), c);
    }
    p
}

fn add(a: &Sparse, b: &Sparse, sign: i32) -> Sparse {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(BigRational::zero);
        if sign < 0 {
            *e -= v;
        } else {
            *e += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for ((ax, ay), u) in a {
        for ((bx, by), v) in b {
            *out.entry((ax + bx, ay + by))
                .or_insert_with(BigRational::zero) += u * v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        let column = self
            .chars
            .get(self.pos)
            .map_or(self.src.chars().count() + 1, |(c, _)| c + 1);
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.bump();
                add(&Sparse::new(), &self.term()?, -1)
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.bump();
            let t = self.term()?;
            acc = add(&acc, &t, if op == '-' { -1 } else { 1 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = mul(&acc, &self.factor()?);
                }
                Some(c) if c == '(' || c == 'x' || c == 'y' || c.is_ascii_digit() => {
                    acc = mul(&acc, &self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected a nonnegative integer exponent"));
        }
        let digits: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| {
                self.pos = start;
                self.err(format!("exponent larger than {MAX_EXPONENT}"))
            })?;
        Ok((0..e).fold(constant(BigRational::one()), |acc, _| mul(&acc, &base)))
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok(Sparse::from([((1, 0), BigRational::one())]))
            }
            Some('y') => {
                self.bump();
                Ok(Sparse::from([((0, 1), BigRational::one())]))
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || c == '/' || c == '.')
                {
                    self.bump();
                }
                let text: String = self.chars[start..self.pos]
                    .iter()
                    .map(|&(_, c)| c)
                    .collect();
                let value = parse_rat(&text).ok_or_else(|| {
                    self.pos = start;
                    self.err(format!("invalid number {text:?}"))
                })?;
                Ok(constant(value))
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a homogeneous polynomial in `x`, `y` such as `x^2*y^2 - 3*x^4`.
pub fn parse_binary_form(text: &str) -> Result<BinaryForm> {
    let chars: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut p = Parser {
        chars,
        pos: 0,
        src: text,
    };
    let poly = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let Some(&(x, y)) = poly.keys().next() else {
        return Err(Error::Input("the zero form has no orbit to decide".into()));
    };
    let n = (x + y) as usize;
    if poly.keys().any(|&(a, b)| (a + b) as usize != n) {
        return Err(Error::Input("the polynomial is not homogeneous".into()));
    }
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for ((_, b), c) in poly {
        coeffs[b as usize] = c;
    }
    BinaryForm::from_coefficients(coeffs)
}
