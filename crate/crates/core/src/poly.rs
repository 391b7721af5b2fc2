//! Univariate polynomials in the flag parameter `v` with exact coefficients.

use crate::rational::{fmt_q, q, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense coefficients, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b v`.
    pub fn affine(a: Q, b: Q) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn v() -> Self {
        Poly::affine(Q::zero(), Q::one())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).copied().unwrap_or_else(Q::zero)
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }

    pub fn scale(&self, s: Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Q::one()), |acc, _| &acc * self)
    }

    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Q::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / q(i as i128 + 1));
        }
        Poly::new(out)
    }

    pub fn integrate(&self, a: Q, b: Q) -> Q {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// Minimum over `[a, b]`; degree at most 2.
    pub fn min_on(&self, a: Q, b: Q) -> Q {
        assert!(self.degree() <= 2, "min_on supports degree <= 2");
        let mut best = crate::rational::min_q(self.eval(a), self.eval(b));
        if self.degree() == 2 {
            let x = -self.coeff(1) / (q(2) * self.coeff(2));
            if x > a && x < b {
                best = crate::rational::min_q(best, self.eval(x));
            }
        }
        best
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i128))
                .collect(),
        )
    }

    /// Parses expressions such as `2(3-v)^2/3`, `(10-7v)(2-v)/4` or
    /// `1 - 5v/12`. Division is only allowed by constants.
    pub fn parse(s: &str) -> Result<Poly, String> {
        Combination::parse(s)?
            .as_scalar()
            .ok_or_else(|| format!("curve symbols in a scalar expression {s:?}"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Q::zero();
            let a = if neg { -c } else { *c };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{i}"),
            };
            if i == 0 || !a.is_one() {
                write!(f, "{}{}", fmt_q(&a), mono)?;
            } else {
                write!(f, "{mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<crate::rational::QJson> = self.coeffs.iter().map(|c| (*c).into()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<crate::rational::QJson>::deserialize(d)?;
        let cs = v
            .into_iter()
            .map(|j| {
                j.to_q()
                    .ok_or_else(|| serde::de::Error::custom("zero denominator"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(cs))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-Q::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A formal linear combination of named symbols with polynomial
/// coefficients; the key `""` holds the scalar part. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Combination {
    pub terms: BTreeMap<String, Poly>,
}

impl Combination {
    pub fn scalar(p: Poly) -> Self {
        let mut c = Combination::default();
        c.insert("", p);
        c
    }

    pub fn symbol(name: &str) -> Self {
        let mut c = Combination::default();
        c.insert(name, Poly::constant(Q::one()));
        c
    }

    fn insert(&mut self, k: &str, p: Poly) {
        if p.is_zero() {
            self.terms.remove(k);
        } else {
            self.terms.insert(k.to_string(), p);
        }
    }

    /// The scalar part, if nothing else is present.
    pub fn as_scalar(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => self.terms.get("").cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, name: &str) -> Poly {
        self.terms.get(name).cloned().unwrap_or_default()
    }

    /// Named symbols with their coefficients, scalar part excluded.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, &Poly)> {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(k, p)| (k.as_str(), p))
    }

    fn combine(&self, o: &Combination, sign: Q) -> Combination {
        let mut out = self.clone();
        for (k, p) in &o.terms {
            let sum = &out.coefficient(k) + &p.scale(sign);
            out.insert(k, sum);
        }
        out
    }

    fn times(&self, p: &Poly) -> Combination {
        let mut out = Combination::default();
        for (k, c) in &self.terms {
            out.insert(k, c * p);
        }
        out
    }

    fn mul(&self, o: &Combination) -> Result<Combination, String> {
        if let Some(p) = o.as_scalar() {
            Ok(self.times(&p))
        } else if let Some(p) = self.as_scalar() {
            Ok(o.times(&p))
        } else {
            Err("product of two symbolic factors".into())
        }
    }

    /// Parses expressions such as `v/5(4B+3C) + (v-1)(B1+B2)`. Symbols are
    /// an uppercase letter followed by letters or digits; multiplication
    /// needs a scalar on one side.
    pub fn parse(s: &str) -> Result<Combination, String> {
        let tokens = tokenize(s)?;
        let mut p = Parser { t: &tokens, i: 0 };
        let e = p.expr()?;
        if p.i != tokens.len() {
            return Err(format!("trailing input in {s:?}"));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i128),
    V,
    Sym(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' => i += 1,
            '0'..='9' => {
                let mut n: i128 = 0;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(cs[i].to_digit(10).unwrap() as i128))
                        .ok_or_else(|| format!("number too large in {s:?}"))?;
                    i += 1;
                }
                out.push(Tok::Num(n));
            }
            'v' => {
                out.push(Tok::V);
                i += 1;
            }
            'A'..='Z' => {
                let mut name = String::new();
                while i < cs.len() && cs[i].is_ascii_alphanumeric() && cs[i] != 'v' {
                    name.push(cs[i]);
                    i += 1;
                }
                out.push(Tok::Sym(name));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            _ => return Err(format!("unexpected character {c:?} in {s:?}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    t: &'a [Tok],
    i: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn expr(&mut self) -> Result<Combination, String> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let r = self.term()?;
            let sign = if c == '+' { Q::one() } else { -Q::one() };
            acc = acc.combine(&r, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Combination, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.i += 1;
                    let r = self.unary()?;
                    acc = acc.mul(&r)?;
                }
                Some(Tok::Op('/')) => {
                    self.i += 1;
                    let r = self.unary()?.as_scalar();
                    match r {
                        Some(r) if r.degree() == 0 && !r.is_zero() => {
                            acc = acc.times(&Poly::constant(Q::one() / r.coeff(0)));
                        }
                        _ => return Err("division by a non-constant or zero".into()),
                    }
                }
                Some(Tok::V) | Some(Tok::Sym(_)) | Some(Tok::Op('(')) | Some(Tok::Num(_)) => {
                    let r = self.power()?;
                    acc = acc.mul(&r)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Combination, String> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.i += 1;
            return Ok(self.unary()?.times(&Poly::constant(-Q::one())));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Combination, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let base = base.as_scalar().ok_or("power of a symbolic factor")?;
            match self.peek() {
                Some(Tok::Num(e)) => {
                    let e = u32::try_from(*e).map_err(|_| "exponent too large")?;
                    self.i += 1;
                    return Ok(Combination::scalar(base.pow(e)));
                }
                _ => return Err("exponent must be an integer literal".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Combination, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Combination::scalar(Poly::constant(q(n))))
            }
            Some(Tok::V) => {
                self.i += 1;
                Ok(Combination::scalar(Poly::v()))
            }
            Some(Tok::Sym(s)) => {
                self.i += 1;
                Ok(Combination::symbol(&s))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err("unbalanced parenthesis".into());
                }
                self.i += 1;
                Ok(e)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}
