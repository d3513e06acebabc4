//! Free Poisson-algebra expressions over named generators.
//!
//! Brackets of sums and products are expanded with bilinearity,
//! anticommutativity and Leibniz until every bracket has single generators
//! in both slots. The coefficient algebra is commutative. Elementary
//! brackets can then be replaced from a table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{QismError, Result};
use crate::scalar::{gq, Scalar};
use crate::text::{Cursor, Token};

pub const DEFAULT_DEPTH_CAP: usize = 6;

/// Generator with a spectral tag (`I[1,2](u)`); the tag may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub tag: String,
}

impl Atom {
    pub fn new(name: impl Into<String>, tag: impl Into<String>) -> Self {
        Atom { name: name.into(), tag: tag.into() }
    }

    /// `I[i,j](tag)`.
    pub fn generator(i: usize, j: usize, tag: &str) -> Self {
        Atom::new(format!("I[{i},{j}]"), tag)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}({})", self.name, self.tag)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PExpr {
    Atom(Atom),
    Num(Scalar),
    Sum(Vec<PExpr>),
    Product(Vec<PExpr>),
    Bracket(Box<PExpr>, Box<PExpr>),
    ScalarMul(Scalar, Box<PExpr>),
}

impl PExpr {
    pub fn atom(name: &str, tag: &str) -> Self {
        PExpr::Atom(Atom::new(name, tag))
    }

    pub fn bracket(a: PExpr, b: PExpr) -> Self {
        PExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scale(c: Scalar, e: PExpr) -> Self {
        PExpr::ScalarMul(c, Box::new(e))
    }

    /// `Σ_{j=1}^{len} I[k,j](tag)`.
    pub fn generator_sum(k: usize, len: usize, tag: &str) -> Self {
        PExpr::Sum((1..=len).map(|j| PExpr::Atom(Atom::generator(k, j, tag))).collect())
    }

    /// Bracket nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            PExpr::Atom(_) | PExpr::Num(_) => 0,
            PExpr::Sum(v) | PExpr::Product(v) => v.iter().map(PExpr::depth).max().unwrap_or(0),
            PExpr::Bracket(a, b) => 1 + a.depth().max(b.depth()),
            PExpr::ScalarMul(_, e) => e.depth(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            PExpr::Atom(a) => {
                out.insert(a.clone());
            }
            PExpr::Num(_) => {}
            PExpr::Sum(v) | PExpr::Product(v) => v.iter().for_each(|e| e.collect_atoms(out)),
            PExpr::Bracket(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            PExpr::ScalarMul(_, e) => e.collect_atoms(out),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text, 1)?;
        let e = parse_expr(&mut cur)?;
        cur.expect_end()?;
        Ok(e)
    }
}

fn parse_expr(cur: &mut Cursor) -> Result<PExpr> {
    let mut terms = Vec::new();
    let mut negate = cur.eat_sym('-');
    loop {
        let t = parse_term(cur)?;
        terms.push(if negate { PExpr::scale(Scalar::int(-1), t) } else { t });
        if cur.eat_sym('+') {
            negate = false;
        } else if cur.eat_sym('-') {
            negate = true;
        } else {
            break;
        }
    }
    Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { PExpr::Sum(terms) })
}

fn parse_term(cur: &mut Cursor) -> Result<PExpr> {
    let mut factors = vec![parse_factor(cur)?];
    while cur.eat_sym('*') {
        factors.push(parse_factor(cur)?);
    }
    Ok(if factors.len() == 1 { factors.pop().expect("one factor") } else { PExpr::Product(factors) })
}

fn int_scalar(n: &BigInt, cur: &Cursor) -> Result<i64> {
    n.to_i64().ok_or_else(|| cur.error("integer literal too large"))
}

fn parse_factor(cur: &mut Cursor) -> Result<PExpr> {
    if cur.eat_sym('-') {
        return Ok(PExpr::scale(Scalar::int(-1), parse_factor(cur)?));
    }
    if cur.eat_sym('(') {
        let e = parse_expr(cur)?;
        cur.expect_sym(')')?;
        return Ok(e);
    }
    if cur.eat_sym('{') {
        let a = parse_expr(cur)?;
        cur.expect_sym(',')?;
        let b = parse_expr(cur)?;
        cur.expect_sym('}')?;
        return Ok(PExpr::bracket(a, b));
    }
    match cur.next() {
        Some(Token::Int(n)) => {
            let num = int_scalar(&n, cur)?;
            if cur.eat_sym('/') {
                let d = cur.expect_int()?;
                let den = int_scalar(&d, cur)?;
                if den == 0 {
                    return Err(cur.error("zero denominator"));
                }
                return Ok(PExpr::Num(Scalar::ratio(num, den)));
            }
            Ok(PExpr::Num(Scalar::int(num)))
        }
        Some(Token::Ident(id)) if id == "i" => Ok(PExpr::Num(Scalar::gauss(0, 1))),
        Some(Token::Ident(id)) => {
            let mut name = id;
            if cur.eat_sym('[') {
                let mut idx = Vec::new();
                loop {
                    idx.push(cur.expect_int()?.to_string());
                    if !cur.eat_sym(',') {
                        break;
                    }
                }
                cur.expect_sym(']')?;
                name = format!("{name}[{}]", idx.join(","));
            }
            let mut tag = String::new();
            if cur.eat_sym('(') {
                match cur.next() {
                    Some(Token::Ident(t)) => tag = t,
                    _ => return Err(cur.error("expected spectral tag")),
                }
                cur.expect_sym(')')?;
            }
            Ok(PExpr::Atom(Atom { name, tag }))
        }
        Some(t) => Err(cur.error(format!("unexpected token {t:?}"))),
        None => Err(cur.error("unexpected end of expression")),
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExpr::Atom(a) => write!(f, "{a}"),
            PExpr::Num(s) => write!(f, "{s}"),
            PExpr::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            PExpr::Product(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            PExpr::Bracket(a, b) => write!(f, "{{{a}, {b}}}"),
            PExpr::ScalarMul(c, e) => write!(f, "{c}*{e}"),
        }
    }
}

/// Generator of the free Poisson algebra: an atom or a canonically ordered
/// bracket of two generators.
#[derive(Clone, Debug, Hash)]
pub enum Gen {
    Atom(Atom),
    /// Arguments ordered so that the first is smaller.
    Bracket(Arc<Gen>, Arc<Gen>),
}

fn cmp_shared(a: &Arc<Gen>, b: &Arc<Gen>) -> std::cmp::Ordering {
    if Arc::ptr_eq(a, b) {
        std::cmp::Ordering::Equal
    } else {
        a.as_ref().cmp(b.as_ref())
    }
}

impl Ord for Gen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Gen::Atom(a), Gen::Atom(b)) => a.cmp(b),
            (Gen::Atom(_), Gen::Bracket(..)) => std::cmp::Ordering::Less,
            (Gen::Bracket(..), Gen::Atom(_)) => std::cmp::Ordering::Greater,
            (Gen::Bracket(a1, b1), Gen::Bracket(a2, b2)) => cmp_shared(a1, a2).then_with(|| cmp_shared(b1, b2)),
        }
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Gen {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Gen {}

impl Gen {
    pub fn depth(&self) -> usize {
        match self {
            Gen::Atom(_) => 0,
            Gen::Bracket(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn as_atom_pair(&self) -> Option<(&Atom, &Atom)> {
        match self {
            Gen::Bracket(a, b) => match (a.as_ref(), b.as_ref()) {
                (Gen::Atom(x), Gen::Atom(y)) => Some((x, y)),
                _ => None,
            },
            Gen::Atom(_) => None,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Atom(a) => write!(f, "{a}"),
            Gen::Bracket(a, b) => write!(f, "{{{a}, {b}}}"),
        }
    }
}

/// Sorted multiset of generators.
pub type Monomial = Vec<Gen>;

/// Commutative polynomial in generators with scalar coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = GenPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn gen(g: Gen) -> Self {
        let mut p = GenPoly::zero();
        p.add_term(vec![g], Scalar::one());
        p
    }

    pub fn atom(a: Atom) -> Self {
        GenPoly::gen(Gen::Atom(a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No generator appears.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        (self.is_constant()).then(|| self.terms[&Vec::new()].clone())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        out.absorb(other.clone(), None);
        out
    }

    /// In-place `self += c · other`.
    fn absorb(&mut self, other: GenPoly, c: Option<&Scalar>) {
        for (m, x) in other.terms {
            let x = match c {
                Some(c) => &x * c,
                None => x,
            };
            self.add_term(m, x);
        }
    }

    pub fn sub(&self, other: &GenPoly) -> GenPoly {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> GenPoly {
        let mut out = GenPoly::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &GenPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(merge(ma, mb), ca * cb);
            }
        }
        out
    }

    /// `self · m` for a unit-coefficient monomial.
    fn times_monomial(&self, m: &[Gen]) -> GenPoly {
        let mut out = GenPoly::zero();
        for (ma, c) in &self.terms {
            out.add_term(merge(ma, m), c.clone());
        }
        out
    }

    /// Evaluate with numeric values for atoms; brackets must be absent.
    pub fn evaluate(&self, values: &BTreeMap<Atom, Scalar>) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for g in m {
                match g {
                    Gen::Atom(a) => {
                        let v = values.get(a).ok_or_else(|| QismError::Unassigned(a.to_string()))?;
                        t = &t * v;
                    }
                    Gen::Bracket(..) => return Err(QismError::UnresolvedBracket(g.to_string())),
                }
            }
            total = &total + &t;
        }
        Ok(total)
    }

    /// Replace every generator by a polynomial.
    pub fn map_gens(&self, f: &mut dyn FnMut(&Gen) -> Result<GenPoly>) -> Result<GenPoly> {
        let mut out = GenPoly::zero();
        for (m, c) in &self.terms {
            let mut t = GenPoly::constant(c.clone());
            for g in m {
                t = t.mul(&f(g)?);
            }
            out.absorb(t, None);
        }
        Ok(out)
    }
}

fn merge(a: &[Gen], b: &[Gen]) -> Monomial {
    let mut m: Vec<Gen> = a.iter().chain(b).cloned().collect();
    m.sort();
    m
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    return c.to_string();
                }
                let body: Vec<String> = m.iter().map(|g| g.to_string()).collect();
                if c.is_one() {
                    body.join("*")
                } else {
                    format!("{c}*{}", body.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `{a, b}` as a polynomial: zero if equal, sign absorbed into the order.
pub fn elementary(a: &Gen, b: &Gen) -> GenPoly {
    use std::cmp::Ordering::*;
    match a.cmp(b) {
        Equal => GenPoly::zero(),
        Less => GenPoly::gen(Gen::Bracket(Arc::new(a.clone()), Arc::new(b.clone()))),
        Greater => GenPoly::gen(Gen::Bracket(Arc::new(b.clone()), Arc::new(a.clone()))).scale(&Scalar::int(-1)),
    }
}

/// Order in which Leibniz splits products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// First argument before second, peeling the leading factor.
    #[default]
    LeftFirst,
    /// Second argument before first, peeling the trailing factor.
    RightFirst,
}

/// Bracket of two polynomials expanded down to elementary brackets, with
/// `elem` resolving each `{g, h}` of single generators.
fn bracket_with(x: &GenPoly, y: &GenPoly, strategy: Strategy, elem: &mut dyn FnMut(&Gen, &Gen) -> Result<GenPoly>) -> Result<GenPoly> {
    let mut out = GenPoly::zero();
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let t = match strategy {
                Strategy::LeftFirst => left_first(mx, my, elem)?,
                Strategy::RightFirst => right_first(mx, my, elem)?,
            };
            out.absorb(t, Some(&(cx * cy)));
        }
    }
    Ok(out)
}

fn left_first(x: &[Gen], y: &[Gen], elem: &mut dyn FnMut(&Gen, &Gen) -> Result<GenPoly>) -> Result<GenPoly> {
    // leading factors peeled all the way down:
    // {x₁⋯x_k, y₁⋯y_l} = Σᵢⱼ {xᵢ, yⱼ} ∏_{i'≠i} x_{i'} ∏_{j'≠j} y_{j'}
    let mut out = GenPoly::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            let e = elem(&x[i], &y[j])?;
            if e.is_zero() {
                continue;
            }
            let rest: Vec<Gen> = x[..i].iter().chain(&x[i + 1..]).chain(&y[..j]).chain(&y[j + 1..]).cloned().collect();
            out.absorb(e.times_monomial(&rest), None);
        }
    }
    Ok(out)
}

fn right_first(x: &[Gen], y: &[Gen], elem: &mut dyn FnMut(&Gen, &Gen) -> Result<GenPoly>) -> Result<GenPoly> {
    if x.is_empty() || y.is_empty() {
        return Ok(GenPoly::zero());
    }
    if y.len() > 1 {
        // {X, r·h} = {X, r} h + r {X, h}
        let (r, h) = y.split_at(y.len() - 1);
        let mut a = right_first(x, r, elem)?.times_monomial(h);
        a.absorb(right_first(x, h, elem)?.times_monomial(r), None);
        return Ok(a);
    }
    if x.len() > 1 {
        let (r, g) = x.split_at(x.len() - 1);
        let mut a = right_first(r, y, elem)?.times_monomial(g);
        a.absorb(right_first(g, y, elem)?.times_monomial(r), None);
        return Ok(a);
    }
    elem(&x[0], &y[0])
}

/// Fully expanded bracket expression. Each monomial carries at least one
/// bracket generator; for inputs of depth one exactly one, with a
/// bracket-free coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBracketForm {
    pub poly: GenPoly,
}

/// `coefficient · {left, right}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalTerm {
    pub coefficient: GenPoly,
    pub left: Gen,
    pub right: Gen,
}

impl NormalBracketForm {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms grouped by the outermost bracket of each monomial.
    pub fn terms(&self) -> Vec<NormalTerm> {
        let mut groups: BTreeMap<Gen, GenPoly> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let Some(k) = (0..m.len()).filter(|&i| matches!(m[i], Gen::Bracket(..))).max_by_key(|&i| (m[i].depth(), i)) else {
                continue;
            };
            let mut rest = m.clone();
            let b = rest.remove(k);
            let slot = groups.entry(b).or_default();
            slot.add_term(rest, c.clone());
        }
        groups
            .into_iter()
            .map(|(b, coefficient)| match b {
                Gen::Bracket(l, r) => NormalTerm { coefficient, left: Arc::unwrap_or_clone(l), right: Arc::unwrap_or_clone(r) },
                Gen::Atom(_) => unreachable!("grouped by bracket generators"),
            })
            .collect()
    }

    /// Number of distinct elementary brackets.
    pub fn count_elementary(&self) -> usize {
        self.terms().len()
    }
}

impl fmt::Display for NormalBracketForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Expand every bracket node of `e`.
pub fn expand_with(e: &PExpr, strategy: Strategy, depth_cap: usize) -> Result<NormalBracketForm> {
    let depth = e.depth();
    if depth == 0 {
        return Err(QismError::NoBracket);
    }
    if depth > depth_cap {
        return Err(QismError::DepthCapExceeded { depth, cap: depth_cap });
    }
    Ok(NormalBracketForm { poly: to_poly(e, strategy)? })
}

pub fn expand(e: &PExpr) -> Result<NormalBracketForm> {
    expand_with(e, Strategy::LeftFirst, DEFAULT_DEPTH_CAP)
}

fn to_poly(e: &PExpr, strategy: Strategy) -> Result<GenPoly> {
    Ok(match e {
        PExpr::Atom(a) => GenPoly::atom(a.clone()),
        PExpr::Num(s) => GenPoly::constant(s.clone()),
        PExpr::Sum(v) => {
            let mut acc = GenPoly::zero();
            for x in v {
                acc.absorb(to_poly(x, strategy)?, None);
            }
            acc
        }
        PExpr::Product(v) => {
            let mut acc = GenPoly::constant(Scalar::one());
            for x in v {
                acc = acc.mul(&to_poly(x, strategy)?);
            }
            acc
        }
        PExpr::ScalarMul(c, x) => to_poly(x, strategy)?.scale(c),
        PExpr::Bracket(a, b) => {
            let (pa, pb) = (to_poly(a, strategy)?, to_poly(b, strategy)?);
            bracket_with(&pa, &pb, strategy, &mut |g, h| Ok(elementary(g, h)))?
        }
    })
}

/// Elementary brackets in the expansion of an `m`-term sum of distinct
/// generators against an `n`-term sum of distinct generators.
pub fn count_elementary(m: usize, n: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(QismError::InvalidParameter("sum lengths must be at least 1".into()));
    }
    let e = PExpr::bracket(PExpr::generator_sum(1, m, "u"), PExpr::generator_sum(2, n, "u'"));
    Ok(expand(&e)?.count_elementary())
}

/// Rational function of named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueExpr {
    Num(Scalar),
    Var(String),
    Add(Box<ValueExpr>, Box<ValueExpr>),
    Sub(Box<ValueExpr>, Box<ValueExpr>),
    Mul(Box<ValueExpr>, Box<ValueExpr>),
    Div(Box<ValueExpr>, Box<ValueExpr>),
    Neg(Box<ValueExpr>),
    Pow(Box<ValueExpr>, i32),
}

impl ValueExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_at(text, 1)
    }

    fn parse_at(text: &str, line: usize) -> Result<Self> {
        let mut cur = Cursor::new(text, line)?;
        let e = value_sum(&mut cur)?;
        cur.expect_end()?;
        Ok(e)
    }

    pub fn evaluate(&self, vars: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        Ok(match self {
            ValueExpr::Num(s) => s.clone(),
            ValueExpr::Var(v) => vars.get(v).cloned().ok_or_else(|| QismError::Unassigned(v.clone()))?,
            ValueExpr::Add(a, b) => &a.evaluate(vars)? + &b.evaluate(vars)?,
            ValueExpr::Sub(a, b) => &a.evaluate(vars)? - &b.evaluate(vars)?,
            ValueExpr::Mul(a, b) => &a.evaluate(vars)? * &b.evaluate(vars)?,
            ValueExpr::Div(a, b) => a.evaluate(vars)?.div(&b.evaluate(vars)?)?,
            ValueExpr::Neg(a) => -a.evaluate(vars)?,
            ValueExpr::Pow(a, k) => a.evaluate(vars)?.pow(*k)?,
        })
    }

    /// Rename variables; unmapped names are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> ValueExpr {
        let r = |e: &ValueExpr| Box::new(e.rename(map));
        match self {
            ValueExpr::Num(_) => self.clone(),
            ValueExpr::Var(v) => ValueExpr::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            ValueExpr::Add(a, b) => ValueExpr::Add(r(a), r(b)),
            ValueExpr::Sub(a, b) => ValueExpr::Sub(r(a), r(b)),
            ValueExpr::Mul(a, b) => ValueExpr::Mul(r(a), r(b)),
            ValueExpr::Div(a, b) => ValueExpr::Div(r(a), r(b)),
            ValueExpr::Neg(a) => ValueExpr::Neg(r(a)),
            ValueExpr::Pow(a, k) => ValueExpr::Pow(r(a), *k),
        }
    }
}

fn value_sum(cur: &mut Cursor) -> Result<ValueExpr> {
    let mut acc = value_product(cur)?;
    loop {
        if cur.eat_sym('+') {
            acc = ValueExpr::Add(Box::new(acc), Box::new(value_product(cur)?));
        } else if cur.eat_sym('-') {
            acc = ValueExpr::Sub(Box::new(acc), Box::new(value_product(cur)?));
        } else {
            return Ok(acc);
        }
    }
}

fn value_product(cur: &mut Cursor) -> Result<ValueExpr> {
    let mut acc = value_power(cur)?;
    loop {
        if cur.eat_sym('*') {
            acc = ValueExpr::Mul(Box::new(acc), Box::new(value_power(cur)?));
        } else if cur.eat_sym('/') {
            acc = ValueExpr::Div(Box::new(acc), Box::new(value_power(cur)?));
        } else {
            return Ok(acc);
        }
    }
}

fn value_power(cur: &mut Cursor) -> Result<ValueExpr> {
    let base = value_atom(cur)?;
    if cur.eat_sym('^') {
        let k = cur.expect_signed_int()?;
        let k = k.to_i32().ok_or_else(|| cur.error("exponent too large"))?;
        return Ok(ValueExpr::Pow(Box::new(base), k));
    }
    Ok(base)
}

fn value_atom(cur: &mut Cursor) -> Result<ValueExpr> {
    if cur.eat_sym('-') {
        return Ok(ValueExpr::Neg(Box::new(value_power(cur)?)));
    }
    if cur.eat_sym('(') {
        let e = value_sum(cur)?;
        cur.expect_sym(')')?;
        return Ok(e);
    }
    match cur.next() {
        Some(Token::Int(n)) => Ok(ValueExpr::Num(Scalar::int(int_scalar(&n, cur)?))),
        Some(Token::Ident(id)) if id == "i" => Ok(ValueExpr::Num(Scalar::from(gq(0, 1)))),
        Some(Token::Ident(id)) => Ok(ValueExpr::Var(id)),
        Some(t) => Err(cur.error(format!("unexpected token {t:?}"))),
        None => Err(cur.error("unexpected end of value")),
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Num(s) => write!(f, "{s}"),
            ValueExpr::Var(v) => write!(f, "{v}"),
            ValueExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ValueExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            ValueExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            ValueExpr::Div(a, b) => write!(f, "{a}/{b}"),
            ValueExpr::Neg(a) => write!(f, "-{a}"),
            ValueExpr::Pow(a, k) => write!(f, "{a}^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableValue {
    /// Central value depending only on spectral variables.
    Value(ValueExpr),
    /// Polynomial in atoms; brackets with such entries need not satisfy
    /// Jacobi.
    Poly(GenPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub value: TableValue,
    /// Value is an approximation rather than an identity.
    pub approximate: bool,
}

/// What an unlisted pair becomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fallback {
    /// Left as an unevaluated elementary bracket.
    #[default]
    Symbolic,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubstituteMode {
    /// Unresolved pairs are an error.
    Strict,
    #[default]
    Lenient,
}

/// Values of elementary brackets `{a, b}` of atoms. Stored pairs close
/// antisymmetrically; `{a, a} = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElemBracketTable {
    entries: BTreeMap<(Atom, Atom), TableEntry>,
    /// Value for `{X(s), X(t)}` with the same name and different tags;
    /// variables `u` and `u'` stand for the left and right tags.
    diagonal: Option<TableEntry>,
    pub fallback: Fallback,
}

impl ElemBracketTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every pair brackets to zero.
    pub fn zero() -> Self {
        ElemBracketTable { fallback: Fallback::Zero, ..Self::default() }
    }

    /// `{X(u), X(u')} = 1/(u − u')`, flagged approximate.
    pub fn inverse_difference_diagonal() -> Self {
        let mut t = Self::new();
        t.set_diagonal(ValueExpr::parse("1/(u - u')").expect("literal"), true);
        t
    }

    pub fn set_diagonal(&mut self, value: ValueExpr, approximate: bool) {
        self.diagonal = Some(TableEntry { value: TableValue::Value(value), approximate });
    }

    /// Store `{a, b}`; `{b, a}` follows by antisymmetry.
    pub fn insert(&mut self, a: Atom, b: Atom, value: TableValue, approximate: bool) -> Result<()> {
        if a == b {
            return Err(QismError::InvalidParameter(format!("{{{a}, {a}}} is always zero")));
        }
        let entry = TableEntry { value, approximate };
        if a < b {
            self.entries.insert((a, b), entry);
        } else {
            let entry = TableEntry { value: negate(&entry.value), ..entry };
            self.entries.insert((b, a), entry);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len() + self.diagonal.is_some() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All values are independent of atoms.
    pub fn is_constant(&self) -> bool {
        self.entries.values().chain(self.diagonal.as_ref()).all(|e| match &e.value {
            TableValue::Value(_) => true,
            TableValue::Poly(p) => p.is_constant(),
        })
    }

    pub fn any_approximate(&self) -> bool {
        self.entries.values().chain(self.diagonal.as_ref()).any(|e| e.approximate)
    }

    /// Value of `{a, b}`, or `None` if unlisted.
    pub fn lookup(&self, a: &Atom, b: &Atom, vars: &BTreeMap<String, Scalar>) -> Result<Option<GenPoly>> {
        if a == b {
            return Ok(Some(GenPoly::zero()));
        }
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let resolved = if let Some(e) = self.entries.get(&(lo.clone(), hi.clone())) {
            Some(value_poly(&e.value, vars)?)
        } else if let (Some(d), true) = (&self.diagonal, a.name == b.name) {
            let TableValue::Value(v) = &d.value else { unreachable!("diagonal rule holds a value") };
            let map = BTreeMap::from([("u".to_string(), lo.tag.clone()), ("u'".to_string(), hi.tag.clone())]);
            Some(GenPoly::constant(v.rename(&map).evaluate(vars)?))
        } else if self.fallback == Fallback::Zero {
            Some(GenPoly::zero())
        } else {
            None
        };
        Ok(resolved.map(|p| if sign < 0 { p.scale(&Scalar::int(-1)) } else { p }))
    }

    /// Table file: one `atom, atom, value[, approximate]` per line, plus
    /// `@diagonal value [approximate]` and `@fallback zero|symbolic`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Self::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("@diagonal") {
                let rest = rest.trim();
                let (v, approx) = match rest.strip_suffix("approximate") {
                    Some(v) => (v.trim(), true),
                    None => (rest, false),
                };
                t.set_diagonal(ValueExpr::parse_at(v, line)?, approx);
                continue;
            }
            if let Some(rest) = body.strip_prefix("@fallback") {
                t.fallback = match rest.trim() {
                    "zero" => Fallback::Zero,
                    "symbolic" => Fallback::Symbolic,
                    other => return Err(QismError::parse(line, format!("unknown fallback `{other}`"))),
                };
                continue;
            }
            let fields = split_top_level(body);
            if fields.len() < 3 || fields.len() > 4 {
                return Err(QismError::parse(line, "expected `atom, atom, value[, approximate]`"));
            }
            let atom = |s: &str| -> Result<Atom> {
                match PExpr::parse(s).map_err(|e| reline(e, line))? {
                    PExpr::Atom(a) => Ok(a),
                    _ => Err(QismError::parse(line, format!("`{s}` is not an atom"))),
                }
            };
            let approx = match fields.get(3).map(|s| s.trim()) {
                None => false,
                Some("approximate") => true,
                Some(other) => return Err(QismError::parse(line, format!("unknown flag `{other}`"))),
            };
            let value = ValueExpr::parse_at(fields[2], line)?;
            t.insert(atom(fields[0])?, atom(fields[1])?, TableValue::Value(value), approx)
                .map_err(|e| QismError::parse(line, e.to_string()))?;
        }
        Ok(t)
    }
}

fn reline(e: QismError, line: usize) -> QismError {
    match e {
        QismError::Parse { message, .. } => QismError::Parse { line, message },
        other => other,
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn negate(v: &TableValue) -> TableValue {
    match v {
        TableValue::Value(e) => TableValue::Value(ValueExpr::Neg(Box::new(e.clone()))),
        TableValue::Poly(p) => TableValue::Poly(p.scale(&Scalar::int(-1))),
    }
}

fn value_poly(v: &TableValue, vars: &BTreeMap<String, Scalar>) -> Result<GenPoly> {
    Ok(match v {
        TableValue::Value(e) => GenPoly::constant(e.evaluate(vars)?),
        TableValue::Poly(p) => p.clone(),
    })
}

/// Replace elementary brackets by table values, innermost first. Spectral
/// variables are taken from `vars`. The result is a polynomial in atoms,
/// plus unresolved brackets in lenient mode.
/// Evaluate `e` in the polynomial ring, resolving each bracket node through
/// the table as soon as its arguments are known (innermost first). Agrees
/// with `substitute` after `expand`, without building the nested symbolic
/// form.
pub fn evaluate_with_table(e: &PExpr, table: &ElemBracketTable, vars: &BTreeMap<String, Scalar>, mode: SubstituteMode) -> Result<GenPoly> {
    Ok(match e {
        PExpr::Atom(a) => GenPoly::atom(a.clone()),
        PExpr::Num(s) => GenPoly::constant(s.clone()),
        PExpr::Sum(v) => {
            let mut acc = GenPoly::zero();
            for x in v {
                acc.absorb(evaluate_with_table(x, table, vars, mode)?, None);
            }
            acc
        }
        PExpr::Product(v) => {
            let mut acc = GenPoly::constant(Scalar::one());
            for x in v {
                acc = acc.mul(&evaluate_with_table(x, table, vars, mode)?);
            }
            acc
        }
        PExpr::ScalarMul(c, x) => evaluate_with_table(x, table, vars, mode)?.scale(c),
        PExpr::Bracket(a, b) => {
            let pa = evaluate_with_table(a, table, vars, mode)?;
            let pb = evaluate_with_table(b, table, vars, mode)?;
            bracket_with(&pa, &pb, Strategy::LeftFirst, &mut |x, y| resolve_pair(x, y, table, vars, mode))?
        }
    })
}

pub fn substitute(
    nf: &NormalBracketForm,
    table: &ElemBracketTable,
    vars: &BTreeMap<String, Scalar>,
    mode: SubstituteMode,
) -> Result<GenPoly> {
    let mut resolve = |g: &Gen| resolve_gen(g, table, vars, mode);
    nf.poly.map_gens(&mut resolve)
}

fn resolve_gen(g: &Gen, table: &ElemBracketTable, vars: &BTreeMap<String, Scalar>, mode: SubstituteMode) -> Result<GenPoly> {
    match g {
        Gen::Atom(_) => Ok(GenPoly::gen(g.clone())),
        Gen::Bracket(a, b) => {
            let pa = resolve_gen(a, table, vars, mode)?;
            let pb = resolve_gen(b, table, vars, mode)?;
            bracket_with(&pa, &pb, Strategy::LeftFirst, &mut |x, y| resolve_pair(x, y, table, vars, mode))
        }
    }
}

fn resolve_pair(x: &Gen, y: &Gen, table: &ElemBracketTable, vars: &BTreeMap<String, Scalar>, mode: SubstituteMode) -> Result<GenPoly> {
    let hit = match (x, y) {
        (Gen::Atom(p), Gen::Atom(q)) => table.lookup(p, q, vars)?,
        _ => None,
    };
    match (hit, mode) {
        (Some(v), _) => Ok(v),
        (None, SubstituteMode::Lenient) => Ok(elementary(x, y)),
        (None, SubstituteMode::Strict) => Err(QismError::UnresolvedBracket(format!("{{{x}, {y}}}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` after substitution.
    pub residual: GenPoly,
    /// The identity is guaranteed only for constant tables.
    pub constant_table: bool,
}

impl JacobiReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn jacobi_residual(f: &PExpr, g: &PExpr, h: &PExpr, table: &ElemBracketTable, vars: &BTreeMap<String, Scalar>) -> Result<JacobiReport> {
    let b = |x: &PExpr, y: &PExpr| PExpr::bracket(x.clone(), y.clone());
    let cyc = PExpr::Sum(vec![b(f, &b(g, h)), b(g, &b(h, f)), b(h, &b(f, g))]);
    Ok(JacobiReport {
        residual: evaluate_with_table(&cyc, table, vars, SubstituteMode::Lenient)?,
        constant_table: table.is_constant(),
    })
}

/// Generators per block `𝓘₁ … 𝓘₄`.
pub const BLOCK_SIZES: [usize; 4] = [3, 4, 4, 5];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureEntry {
    /// `(i, j)` for `{𝓘_i(u), 𝓘_j(u')}`.
    pub left_block: usize,
    pub right_block: usize,
    pub elementary: usize,
    /// Brackets of a generator with itself at the other spectral tag.
    pub diagonal: usize,
    /// Symbolic constant the bracket is proportional to.
    pub constant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureGroup {
    pub group: usize,
    pub entries: Vec<StructureEntry>,
    /// Entries reconstructed because the source listing leaves the first
    /// argument blank.
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub model: String,
    pub groups: Vec<StructureGroup>,
    pub total_brackets: usize,
}

impl StructureReport {
    pub fn counts(&self) -> Vec<Vec<usize>> {
        self.groups.iter().map(|g| g.entries.iter().map(|e| e.elementary).collect()).collect()
    }
}

fn structure(model: &str, completed_group: Option<usize>) -> Result<StructureReport> {
    let mut groups = Vec::new();
    for i in 1..=4 {
        let mut entries = Vec::new();
        for j in 1..=4 {
            let e = PExpr::bracket(PExpr::generator_sum(i, BLOCK_SIZES[i - 1], "u"), PExpr::generator_sum(j, BLOCK_SIZES[j - 1], "u'"));
            let nf = expand(&e)?;
            let diagonal = nf.terms().iter().filter(|t| matches!((&t.left, &t.right), (Gen::Atom(a), Gen::Atom(b)) if a.name == b.name)).count();
            entries.push(StructureEntry {
                left_block: i,
                right_block: j,
                elementary: nf.count_elementary(),
                diagonal,
                constant: format!("kappa[{j},{i}] * C[{j},{i}]"),
            });
        }
        groups.push(StructureGroup { group: i, entries, completed: completed_group == Some(i) });
    }
    let total = groups.iter().map(|g| g.entries.len()).sum();
    Ok(StructureReport { model: model.into(), groups, total_brackets: total })
}

/// The 4 × 4 bracket structure of the blocks `𝓘₁ … 𝓘₄` with elementary
/// counts, for the 4-vertex model and the higher-spin chain. The chain's
/// third group is completed as `{𝓘₃(u), 𝓘_j(u')}`.
pub fn structure_check() -> Result<Vec<StructureReport>> {
    Ok(vec![structure("4v", None)?, structure("xxx", Some(3))?])
}
