//! Laurent polynomials in the spectral parameters `u` and `u'` with exact
//! Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QismError, Result};
use crate::scalar::{fmt_gauss, gq, GaussQ, Scalar};
use crate::text::{Cursor, Token};

/// Spectral variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spectral {
    U,
    UPrime,
}

impl Spectral {
    pub fn name(self) -> &'static str {
        match self {
            Spectral::U => "u",
            Spectral::UPrime => "u'",
        }
    }

    fn index(self) -> usize {
        match self {
            Spectral::U => 0,
            Spectral::UPrime => 1,
        }
    }

    /// `u`; `u'`, `v` and `up` all name the second parameter.
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "u" => Some(Spectral::U),
            "u'" | "v" | "up" => Some(Spectral::UPrime),
            _ => None,
        }
    }
}

/// Values for the spectral variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralAssignment {
    pub u: Option<Scalar>,
    pub u_prime: Option<Scalar>,
}

impl SpectralAssignment {
    pub fn u(u: Scalar) -> Self {
        SpectralAssignment { u: Some(u), u_prime: None }
    }

    pub fn pair(u: Scalar, u_prime: Scalar) -> Self {
        SpectralAssignment { u: Some(u), u_prime: Some(u_prime) }
    }

    pub fn get(&self, v: Spectral) -> Option<&Scalar> {
        match v {
            Spectral::U => self.u.as_ref(),
            Spectral::UPrime => self.u_prime.as_ref(),
        }
    }
}

type Exponents = [i32; 2];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<Exponents, GaussQ>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussQ::one())
    }

    pub fn constant(c: GaussQ) -> Self {
        Self::monomial(c, Spectral::U, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(gq(n, 0))
    }

    /// `c · var^exp`.
    pub fn monomial(c: GaussQ, var: Spectral, exp: i32) -> Self {
        let mut e = [0; 2];
        e[var.index()] = exp;
        Self::from_pairs([(e, c)])
    }

    pub fn var(var: Spectral) -> Self {
        Self::monomial(GaussQ::one(), var, 1)
    }

    fn from_pairs(pairs: impl IntoIterator<Item = (Exponents, GaussQ)>) -> Self {
        let mut out = Laurent::zero();
        for (e, c) in pairs {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Exponents, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32; 2], &GaussQ)> {
        self.terms.iter()
    }

    /// Minimum and maximum exponent of `var` over all terms.
    pub fn degree_range(&self, var: Spectral) -> Option<(i32, i32)> {
        let k = var.index();
        let min = self.terms.keys().map(|e| e[k]).min()?;
        let max = self.terms.keys().map(|e| e[k]).max()?;
        Some((min, max))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &GaussQ) -> Self {
        Self::from_pairs(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Laurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        out
    }

    /// Integer power; negative powers are only defined for monomials.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            if self.terms.len() != 1 {
                return Err(QismError::InvalidParameter("negative power of a non-monomial".into()));
            }
            let (e, c) = self.terms.iter().next().map(|(e, c)| (*e, c.clone())).unwrap();
            let inv = crate::scalar::gq_pow(&c, exp)?;
            return Ok(Self::from_pairs([([e[0] * exp, e[1] * exp], inv)]));
        }
        let mut acc = Laurent::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, assignment: &SpectralAssignment) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (e, c) in &self.terms {
            let mut term = Scalar::Exact(c.clone());
            for var in [Spectral::U, Spectral::UPrime] {
                let k = e[var.index()];
                if k == 0 {
                    continue;
                }
                let value = assignment.get(var).ok_or_else(|| QismError::Unassigned(var.name().into()))?;
                if k < 0 && value.is_zero() {
                    return Err(QismError::ZeroToNegativePower(var.name().into()));
                }
                term = &term * &value.pow(k)?;
            }
            total = &total + &term;
        }
        Ok(total)
    }
}

fn fmt_monomial_vars(e: &Exponents) -> Vec<String> {
    let mut parts = Vec::new();
    for var in [Spectral::U, Spectral::UPrime] {
        match e[var.index()] {
            0 => {}
            1 => parts.push(var.name().to_string()),
            k => parts.push(format!("{}^{}", var.name(), k)),
        }
    }
    parts
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            // pull the sign out of negative real or negative imaginary coefficients
            let negative = (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
            let mag = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let vars = fmt_monomial_vars(e);
            let coef = fmt_gauss(&mag);
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{}*{}", coef, vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        parse_laurent(s, 1)
    }
}

pub(crate) fn parse_laurent(s: &str, line: usize) -> Result<Laurent> {
    let mut cur = Cursor::new(s, line)?;
    let out = parse_sum(&mut cur)?;
    cur.expect_end()?;
    Ok(out)
}

fn parse_sum(cur: &mut Cursor) -> Result<Laurent> {
    let mut acc = Laurent::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat_sym('-') {
            true
        } else {
            if !first && !cur.eat_sym('+') {
                break;
            }
            if first {
                cur.eat_sym('+');
            }
            false
        };
        let term = parse_product(cur)?;
        acc = if negative { acc.sub(&term) } else { acc.add(&term) };
        first = false;
        if !(cur.peek_sym('+') || cur.peek_sym('-')) {
            break;
        }
    }
    Ok(acc)
}

fn starts_factor(cur: &Cursor) -> bool {
    matches!(cur.peek(), Some(Token::Int(_)) | Some(Token::Ident(_))) || cur.peek_sym('(')
}

fn parse_product(cur: &mut Cursor) -> Result<Laurent> {
    let mut acc = parse_factor(cur)?;
    loop {
        if cur.eat_sym('*') || starts_factor(cur) {
            acc = acc.mul(&parse_factor(cur)?);
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_factor(cur: &mut Cursor) -> Result<Laurent> {
    let base = match cur.next() {
        Some(Token::Int(n)) => {
            let q = if cur.eat_sym('/') {
                let d = cur.expect_int()?;
                if d.is_zero() {
                    return Err(QismError::DivisionByZero);
                }
                BigRational::new(n, d)
            } else {
                BigRational::from_integer(n)
            };
            Laurent::constant(GaussQ::new(q, BigRational::zero()))
        }
        Some(Token::Ident(name)) if name == "i" => Laurent::constant(gq(0, 1)),
        Some(Token::Ident(name)) => {
            let var = Spectral::from_name(&name).ok_or_else(|| cur.error(format!("unknown variable `{name}`")))?;
            Laurent::var(var)
        }
        Some(Token::Sym('(')) => {
            let inner = parse_sum(cur)?;
            cur.expect_sym(')')?;
            inner
        }
        other => return Err(cur.error(format!("unexpected token {other:?}"))),
    };
    if cur.eat_sym('^') {
        let e = cur.expect_signed_int()?;
        let e: i32 = i32::try_from(e).map_err(|_| cur.error("exponent too large"))?;
        base.pow(e)
    } else {
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_cancellation() {
        let a = Laurent::var(Spectral::U);
        let b = Laurent::var(Spectral::U).pow(-1).unwrap();
        assert_eq!(a.mul(&b), Laurent::one());
    }

    #[test]
    fn parse_and_print() {
        let p: Laurent = "-u^2 + 3/2*i*u' + (1+i)*u^-1".parse().unwrap();
        assert_eq!(p.num_terms(), 3);
        let again: Laurent = p.to_string().parse().unwrap();
        assert_eq!(p, again);
        assert_eq!("i u i u".parse::<Laurent>().unwrap(), "-u^2".parse().unwrap());
        assert_eq!(Laurent::zero().to_string(), "0");
        assert!("w + 1".parse::<Laurent>().is_err());
    }

    #[test]
    fn evaluation() {
        let p: Laurent = "u^2 - u^-1".parse().unwrap();
        let v = p.evaluate(&SpectralAssignment::u(Scalar::int(2))).unwrap();
        assert_eq!(v, Scalar::ratio(7, 2));
        assert_eq!(p.evaluate(&SpectralAssignment::default()), Err(QismError::Unassigned("u".into())));
        assert_eq!(
            p.evaluate(&SpectralAssignment::u(Scalar::zero())),
            Err(QismError::ZeroToNegativePower("u".into()))
        );
    }

    #[test]
    fn degree_range_tracks_negative_powers() {
        let p: Laurent = "u^3 + u^-2".parse().unwrap();
        assert_eq!(p.degree_range(Spectral::U), Some((-2, 3)));
    }
}
