//! The function mini-language:
//!
//! ```text
//! expr := "q" | literal | "moebius(" literal ")" | "pow(" integer ")"
//!       | "star(" expr "," expr ")" | "sum(" expr "," expr ")"
//!       | "rmul(" expr "," literal ")" | "recip(" expr ")"
//!       | "cayley_conj(" expr ")" | "coeffs(" path ")"
//! literal := "(" real "," real "," real "," real ")"
//! ```
//!
//! The same expression builds a power series on the ball or a pointwise map
//! on the right half-space.

use std::fmt;

use slicereg::verify::{cayley_conjugate, Affine, Constant, Reciprocal, RightMul, Star, Sum};
use slicereg::{Quaternion, RegularSeries, SliceFunction};

#[derive(Clone, Debug, PartialEq)]
pub struct SpecError {
    /// Byte offset into the expression, when the error has one.
    pub pos: Option<usize>,
    pub message: String,
}

impl SpecError {
    fn at(pos: usize, message: impl Into<String>) -> Self {
        SpecError {
            pos: Some(pos),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "at column {}: {}", p + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for SpecError {}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var,
    Literal(Quaternion),
    Moebius { u: Quaternion, pos: usize },
    Pow(usize),
    Star(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    RMul(Box<Expr>, Quaternion),
    Recip { inner: Box<Expr>, pos: usize },
    CayleyConj { inner: Box<Expr>, pos: usize },
    Coeffs { path: String, pos: usize },
}

impl Expr {
    pub fn uses_cayley(&self) -> bool {
        match self {
            Expr::CayleyConj { .. } => true,
            Expr::Star(a, b) | Expr::Sum(a, b) => a.uses_cayley() || b.uses_cayley(),
            Expr::RMul(a, _) | Expr::Recip { inner: a, .. } => a.uses_cayley(),
            _ => false,
        }
    }

    /// Power series at the origin, truncated at `truncation`.
    pub fn to_series(&self, truncation: usize) -> Result<RegularSeries, SpecError> {
        Ok(match self {
            Expr::Var => RegularSeries::identity(),
            Expr::Literal(c) => RegularSeries::constant(*c),
            Expr::Moebius { u, pos } => RegularSeries::moebius_with_order(*u, truncation)
                .map_err(|e| SpecError::at(*pos, e.to_string()))?,
            Expr::Pow(n) => RegularSeries::power(*n),
            Expr::Star(a, b) => a.to_series(truncation)?.star(&b.to_series(truncation)?),
            Expr::Sum(a, b) => a.to_series(truncation)?.add(&b.to_series(truncation)?),
            Expr::RMul(a, c) => a.to_series(truncation)?.right_mul(*c),
            Expr::Recip { inner, pos } => inner
                .to_series(truncation)?
                .reciprocal_to(truncation)
                .map_err(|e| SpecError::at(*pos, e.to_string()))?,
            Expr::CayleyConj { pos, .. } => {
                return Err(SpecError::at(
                    *pos,
                    "cayley_conj gives a map of the half-space, not of the ball",
                ))
            }
            Expr::Coeffs { path, pos } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| SpecError::at(*pos, format!("{path}: {e}")))?;
                RegularSeries::from_json(&text)
                    .map_err(|e| SpecError::at(*pos, format!("{path}: {e}")))?
            }
        })
    }

    /// Pointwise map on the right half-space. Series at the origin only
    /// enter through `cayley_conj`, since they need not converge there.
    pub fn to_halfspace(&self, truncation: usize) -> Result<Box<dyn SliceFunction>, SpecError> {
        Ok(match self {
            Expr::Var => Box::new(Affine::identity()),
            Expr::Literal(c) => Box::new(Constant(*c)),
            Expr::Pow(n) => Box::new(RegularSeries::power(*n)),
            Expr::Star(a, b) => Box::new(Star(
                a.to_halfspace(truncation)?,
                b.to_halfspace(truncation)?,
            )),
            Expr::Sum(a, b) => Box::new(Sum(
                a.to_halfspace(truncation)?,
                b.to_halfspace(truncation)?,
            )),
            Expr::RMul(a, c) => Box::new(RightMul {
                f: a.to_halfspace(truncation)?,
                c: *c,
            }),
            Expr::Recip { inner, .. } => Box::new(Reciprocal(inner.to_halfspace(truncation)?)),
            Expr::CayleyConj { inner, .. } => {
                Box::new(cayley_conjugate(inner.to_series(truncation)?))
            }
            Expr::Moebius { pos, .. } | Expr::Coeffs { pos, .. } => {
                return Err(SpecError::at(
                    *pos,
                    "power series at 0 are maps of the ball; wrap them in cayley_conj",
                ))
            }
        })
    }
}

pub fn parse(src: &str) -> Result<Expr, SpecError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(SpecError::at(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => Err(SpecError::at(
                self.pos,
                format!("expected `{c}`, found `{found}`"),
            )),
            None => Err(SpecError::at(
                self.pos,
                format!("expected `{c}`, found end of input"),
            )),
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<f64, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E')))
            .unwrap_or(self.rest().len());
        let text = &self.src[start..start + len];
        let value: f64 = text
            .parse()
            .map_err(|_| SpecError::at(start, format!("expected a real number, found `{text}`")))?;
        if !value.is_finite() {
            return Err(SpecError::at(start, "number is not finite"));
        }
        self.pos += len;
        Ok(value)
    }

    fn literal(&mut self) -> Result<Quaternion, SpecError> {
        self.expect('(')?;
        let mut x = [0.0; 4];
        for (i, slot) in x.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *slot = self.number()?;
        }
        self.expect(')')?;
        Ok(Quaternion::from(x))
    }

    fn pair(&mut self) -> Result<(Expr, Expr), SpecError> {
        self.expect('(')?;
        let a = self.expr()?;
        self.expect(',')?;
        let b = self.expr()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn single(&mut self) -> Result<Expr, SpecError> {
        self.expect('(')?;
        let a = self.expr()?;
        self.expect(')')?;
        Ok(a)
    }

    fn expr(&mut self) -> Result<Expr, SpecError> {
        match self.peek() {
            None => {
                return Err(SpecError::at(
                    self.pos,
                    "expected an expression, found end of input",
                ))
            }
            Some('(') => return Ok(Expr::Literal(self.literal()?)),
            _ => {}
        }
        let start = self.pos;
        let name = self.ident().to_string();
        Ok(match name.as_str() {
            "q" => Expr::Var,
            "moebius" => {
                self.expect('(')?;
                let pos = self.pos;
                let u = self.literal()?;
                self.expect(')')?;
                let _ = pos;
                Expr::Moebius { u, pos: start }
            }
            "pow" => {
                self.expect('(')?;
                self.skip_ws();
                let at = self.pos;
                let len = self
                    .rest()
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(self.rest().len());
                let n = self.src[at..at + len]
                    .parse()
                    .map_err(|_| SpecError::at(at, "expected a nonnegative integer exponent"))?;
                self.pos += len;
                self.expect(')')?;
                Expr::Pow(n)
            }
            "star" => {
                let (a, b) = self.pair()?;
                Expr::Star(Box::new(a), Box::new(b))
            }
            "sum" => {
                let (a, b) = self.pair()?;
                Expr::Sum(Box::new(a), Box::new(b))
            }
            "rmul" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let c = self.literal()?;
                self.expect(')')?;
                Expr::RMul(Box::new(a), c)
            }
            "recip" => Expr::Recip {
                inner: Box::new(self.single()?),
                pos: start,
            },
            "cayley_conj" => Expr::CayleyConj {
                inner: Box::new(self.single()?),
                pos: start,
            },
            "coeffs" => {
                self.expect('(')?;
                self.skip_ws();
                let len = self
                    .rest()
                    .find(')')
                    .ok_or_else(|| SpecError::at(self.pos, "unterminated coeffs(...)"))?;
                let path = self.rest()[..len].trim_end().to_string();
                if path.is_empty() {
                    return Err(SpecError::at(self.pos, "coeffs needs a file path"));
                }
                self.pos += len;
                self.expect(')')?;
                Expr::Coeffs { path, pos: start }
            }
            "" => {
                return Err(SpecError::at(
                    start,
                    format!("unexpected `{}`", self.rest().chars().next().unwrap_or(' ')),
                ))
            }
            other => return Err(SpecError::at(start, format!("unknown function `{other}`"))),
        })
    }
}
