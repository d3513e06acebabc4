//! Symbolic operators as sums of matrix-unit words with Laurent coefficients.
//!
//! A [`SiteWord`] holds at most one matrix unit per site (identity elsewhere);
//! products of site letters are reduced immediately with
//! `E_ij · E_kl = δ_jk E_il`, so a vanishing site product removes the whole
//! term. [`WordSum`] keeps a canonical map from words to nonzero
//! coefficients: sites ascending, units ordered `E11 < E12 < E21 < E22`.
//!
//! Text form, one term per line:
//!
//! ```text
//! @chain_len 2
//! (u^2) 0:E22 1:E22
//! (1) 0:E12 1:E21
//! ```
//!
//! Letters may also be written `sp` (σ⁺ = E21), `sm` (σ⁻ = E12) or `e` (the
//! projector chosen by the parse options); several letters on one site are
//! multiplied left to right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{QismError, Result};
use crate::laurent::{parse_laurent, Laurent, SpectralAssignment};
use crate::operator::{ChainOperator, LocalOperator};

/// Matrix unit `E_{row,col}`, 0-based internally, printed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Unit {
    pub row: u8,
    pub col: u8,
}

impl Unit {
    pub const fn new(row: u8, col: u8) -> Self {
        Unit { row, col }
    }

    pub const SIGMA_PLUS: Unit = Unit::new(1, 0);
    pub const SIGMA_MINUS: Unit = Unit::new(0, 1);
    pub const PROJ_DOWN: Unit = Unit::new(0, 0);
    pub const PROJ_UP: Unit = Unit::new(1, 1);

    pub fn mul(self, other: Unit) -> Option<Unit> {
        (self.col == other.row).then_some(Unit::new(self.row, other.col))
    }

    pub fn to_local(self, dim: usize) -> LocalOperator {
        LocalOperator::matrix_unit(dim, self.row as usize, self.col as usize)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}", self.row + 1, self.col + 1)
    }
}

/// One matrix unit per occupied site.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteWord {
    letters: BTreeMap<usize, Unit>,
}

impl SiteWord {
    pub fn identity() -> Self {
        SiteWord::default()
    }

    /// Multiply letters in order; `None` if some site product vanishes.
    pub fn from_letters(letters: impl IntoIterator<Item = (usize, Unit)>) -> Option<Self> {
        let mut w = SiteWord::default();
        for (site, unit) in letters {
            let merged = match w.letters.remove(&site) {
                Some(prev) => prev.mul(unit)?,
                None => unit,
            };
            w.letters.insert(site, merged);
        }
        Some(w)
    }

    pub fn letters(&self) -> impl Iterator<Item = (usize, Unit)> + '_ {
        self.letters.iter().map(|(s, u)| (*s, *u))
    }

    pub fn get(&self, site: usize) -> Option<Unit> {
        self.letters.get(&site).copied()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_site(&self) -> Option<usize> {
        self.letters.keys().next_back().copied()
    }

    pub fn mul(&self, other: &SiteWord) -> Option<SiteWord> {
        SiteWord::from_letters(self.letters().chain(other.letters()))
    }

    /// Matrix element `⟨out| w |in⟩` for product basis states given as index lists.
    pub fn matrix_element(&self, out: &[usize], input: &[usize]) -> bool {
        out.iter().zip(input).enumerate().all(|(site, (&o, &i))| match self.letters.get(&site) {
            Some(u) => u.row as usize == o && u.col as usize == i,
            None => o == i,
        })
    }
}

impl fmt::Display for SiteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|(s, u)| format!("{s}:{u}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSum {
    chain_len: usize,
    local_dim: usize,
    terms: BTreeMap<SiteWord, Laurent>,
}

impl WordSum {
    pub fn zero(chain_len: usize, local_dim: usize) -> Self {
        WordSum { chain_len, local_dim, terms: BTreeMap::new() }
    }

    pub fn identity(chain_len: usize, local_dim: usize) -> Self {
        Self::term(Laurent::one(), SiteWord::identity(), chain_len, local_dim)
    }

    pub fn term(coeff: Laurent, word: SiteWord, chain_len: usize, local_dim: usize) -> Self {
        let mut out = Self::zero(chain_len, local_dim);
        out.add_term(word, coeff);
        out
    }

    /// `coeff · unit` placed on `site`.
    pub fn letter(coeff: Laurent, site: usize, unit: Unit, chain_len: usize) -> Result<Self> {
        if site >= chain_len {
            return Err(QismError::SiteOutOfRange { site, chain_len });
        }
        let word = SiteWord::from_letters([(site, unit)]).expect("single letter never vanishes");
        Ok(Self::term(coeff, word, chain_len, 2))
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SiteWord, &Laurent)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &SiteWord) -> Option<&Laurent> {
        self.terms.get(word)
    }

    fn add_term(&mut self, word: SiteWord, coeff: Laurent) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&word) {
            Some(prev) => prev.add(&coeff),
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(word, sum);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.chain_len != other.chain_len || self.local_dim != other.local_dim {
            return Err(QismError::ShapeMismatch(format!(
                "word sums on ({}, d={}) and ({}, d={})",
                self.chain_len, self.local_dim, other.chain_len, other.local_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        WordSum {
            chain_len: self.chain_len,
            local_dim: self.local_dim,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Laurent) -> Self {
        let mut out = Self::zero(self.chain_len, self.local_dim);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul(s));
        }
        out
    }

    /// Product of word sums with per-site matrix-unit multiplication.
    pub fn word_multiply(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.chain_len, self.local_dim);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if let Some(w) = wa.mul(wb) {
                    out.add_term(w, ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    /// Substitute spectral values, producing a chain operator with the same
    /// term structure.
    pub fn evaluate(&self, assignment: &SpectralAssignment) -> Result<ChainOperator> {
        let d = self.local_dim;
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| {
                let value = c.evaluate(assignment)?;
                Ok((value, w.letters().map(|(s, u)| (s, u.to_local(d))).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainOperator::from_terms(self.chain_len, d, terms)
    }

    /// Key set of the canonical form.
    pub fn support(&self) -> BTreeSet<SiteWord> {
        self.terms.keys().cloned().collect()
    }

    pub fn contains_word(&self, word: &SiteWord) -> bool {
        self.terms.contains_key(word)
    }

    /// Range of `u`-exponents over all terms.
    pub fn u_degree_range(&self) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for c in self.terms.values() {
            if let Some((lo, hi)) = c.degree_range(crate::laurent::Spectral::U) {
                range = Some(match range {
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                    None => (lo, hi),
                });
            }
        }
        range
    }

    /// Matrix element between product basis states, as a Laurent polynomial.
    pub fn matrix_element(&self, out: &[usize], input: &[usize]) -> Laurent {
        self.terms
            .iter()
            .filter(|(w, _)| w.matrix_element(out, input))
            .fold(Laurent::zero(), |acc, (_, c)| acc.add(c))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("@chain_len {}\n", self.chain_len);
        if self.local_dim != 2 {
            s.push_str(&format!("@local_dim {}\n", self.local_dim));
        }
        s.push_str(&self.body_text());
        s
    }

    /// Term lines without the header.
    pub fn body_text(&self) -> String {
        let mut s = String::new();
        for (w, c) in &self.terms {
            if w.is_empty() {
                s.push_str(&format!("({c})\n"));
            } else {
                s.push_str(&format!("({c}) {w}\n"));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &WordParseOptions::default())
    }

    pub fn parse_with(text: &str, opts: &WordParseOptions) -> Result<Self> {
        let sections = parse_sections(text, opts)?;
        match sections.len() {
            1 => Ok(sections.into_iter().next().unwrap().sum),
            n => Err(QismError::parse(1, format!("expected a single word sum, found {n} entries"))),
        }
    }
}

/// Options for reading word sums.
#[derive(Clone, Debug)]
pub struct WordParseOptions {
    /// Unit denoted by the letter `e`.
    pub projector: Unit,
    /// Chain length used when no `@chain_len` directive is present.
    pub default_chain_len: Option<usize>,
}

impl Default for WordParseOptions {
    fn default() -> Self {
        WordParseOptions { projector: Unit::PROJ_UP, default_chain_len: None }
    }
}

/// A named word sum read from a (possibly multi-entry) file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSection {
    pub name: String,
    pub sum: WordSum,
    /// Lines read for this entry.
    pub transcribed_terms: usize,
    /// Lines whose site letters multiplied to zero.
    pub vanished_terms: usize,
}

fn parse_unit(tok: &str, dim: usize, opts: &WordParseOptions) -> Option<Unit> {
    match tok {
        "sp" | "s+" => return Some(Unit::SIGMA_PLUS),
        "sm" | "s-" => return Some(Unit::SIGMA_MINUS),
        "e" => return Some(opts.projector),
        _ => {}
    }
    let digits = tok.strip_prefix('E')?;
    let bytes: Vec<u8> = digits.bytes().collect();
    if bytes.len() != 2 {
        return None;
    }
    let (r, c) = ((bytes[0] as char).to_digit(10)?, (bytes[1] as char).to_digit(10)?);
    if r == 0 || c == 0 || r as usize > dim || c as usize > dim {
        return None;
    }
    Some(Unit::new(r as u8 - 1, c as u8 - 1))
}

fn split_coefficient(line: &str, lineno: usize) -> Result<(&str, &str)> {
    let rest = line.strip_prefix('(').ok_or_else(|| QismError::parse(lineno, "term must start with `(`"))?;
    let mut depth = 1usize;
    for (i, ch) in rest.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((&rest[..i], &rest[i + 1..]));
                }
            }
            _ => {}
        }
    }
    Err(QismError::parse(lineno, "unbalanced parentheses in coefficient"))
}

/// Read one or more `@entry`-delimited word sums.
pub fn parse_sections(text: &str, opts: &WordParseOptions) -> Result<Vec<ParsedSection>> {
    let mut chain_len = opts.default_chain_len;
    let mut local_dim = 2usize;
    let mut sections: Vec<ParsedSection> = Vec::new();
    let mut pending: Vec<(usize, Laurent, Vec<(usize, Unit)>)> = Vec::new();
    let mut current_name: Option<String> = None;

    let flush = |name: Option<String>,
                 pending: &mut Vec<(usize, Laurent, Vec<(usize, Unit)>)>,
                 sections: &mut Vec<ParsedSection>,
                 chain_len: Option<usize>,
                 local_dim: usize|
     -> Result<()> {
        if name.is_none() && pending.is_empty() {
            return Ok(());
        }
        let n = chain_len.ok_or_else(|| QismError::parse(1, "missing @chain_len directive"))?;
        let mut sum = WordSum::zero(n, local_dim);
        let mut vanished = 0;
        let transcribed = pending.len();
        for (lineno, coeff, letters) in pending.drain(..) {
            if let Some((site, _)) = letters.iter().find(|(s, _)| *s >= n) {
                return Err(QismError::parse(lineno, format!("site {site} out of range for chain of length {n}")));
            }
            match SiteWord::from_letters(letters) {
                Some(w) => sum.add_term(w, coeff),
                None => vanished += 1,
            }
        }
        sections.push(ParsedSection {
            name: name.unwrap_or_default(),
            sum,
            transcribed_terms: transcribed,
            vanished_terms: vanished,
        });
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(directive) = line.strip_prefix('@') {
            let mut parts = directive.split_whitespace();
            let key = parts.next().unwrap_or("");
            let value = parts.collect::<Vec<_>>().join(" ");
            match key {
                "chain_len" => {
                    chain_len = Some(value.parse().map_err(|_| QismError::parse(lineno, "bad @chain_len"))?);
                }
                "local_dim" => {
                    local_dim = value.parse().map_err(|_| QismError::parse(lineno, "bad @local_dim"))?;
                }
                "entry" => {
                    flush(current_name.take(), &mut pending, &mut sections, chain_len, local_dim)?;
                    current_name = Some(value);
                }
                other => return Err(QismError::parse(lineno, format!("unknown directive @{other}"))),
            }
            continue;
        }
        let (coef_src, rest) = split_coefficient(line, lineno)?;
        let coeff = parse_laurent(coef_src, lineno)?;
        let mut letters = Vec::new();
        for tok in rest.split_whitespace() {
            let (site, unit) = tok
                .split_once(':')
                .ok_or_else(|| QismError::parse(lineno, format!("expected site:unit, found `{tok}`")))?;
            let site: usize = site.parse().map_err(|_| QismError::parse(lineno, format!("bad site `{site}`")))?;
            let unit = parse_unit(unit, local_dim, opts)
                .ok_or_else(|| QismError::parse(lineno, format!("unknown unit `{unit}`")))?;
            letters.push((site, unit));
        }
        pending.push((lineno, coeff, letters));
    }
    flush(current_name.take(), &mut pending, &mut sections, chain_len, local_dim)?;
    if sections.is_empty() {
        let n = chain_len.ok_or_else(|| QismError::parse(1, "missing @chain_len directive"))?;
        sections.push(ParsedSection {
            name: String::new(),
            sum: WordSum::zero(n, local_dim),
            transcribed_terms: 0,
            vanished_terms: 0,
        });
    }
    Ok(sections)
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Spectral;
    use crate::scalar::Scalar;

    fn letter(c: &str, site: usize, unit: Unit, n: usize) -> WordSum {
        WordSum::letter(c.parse().unwrap(), site, unit, n).unwrap()
    }

    #[test]
    fn unit_products() {
        let a = letter("1", 0, Unit::new(0, 1), 1);
        let b = letter("1", 0, Unit::new(1, 0), 1);
        assert_eq!(a.word_multiply(&b).unwrap(), letter("1", 0, Unit::new(0, 0), 1));
        let sp = letter("1", 0, Unit::SIGMA_PLUS, 1);
        assert!(sp.word_multiply(&sp).unwrap().is_zero());
    }

    #[test]
    fn laurent_cancellation_across_sites() {
        let a = letter("u", 0, Unit::PROJ_UP, 2);
        let b = letter("u^-1", 1, Unit::PROJ_UP, 2);
        let p = a.word_multiply(&b).unwrap();
        let w = SiteWord::from_letters([(0, Unit::PROJ_UP), (1, Unit::PROJ_UP)]).unwrap();
        assert_eq!(p.coefficient(&w), Some(&Laurent::one()));
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn evaluate_substitutes() {
        let a = letter("u", 0, Unit::PROJ_UP, 2);
        let op = a.evaluate(&SpectralAssignment::u(Scalar::int(2))).unwrap();
        let expected = ChainOperator::embed_scaled(Scalar::int(2), &Unit::PROJ_UP.to_local(2), 0, 2).unwrap();
        assert_eq!(op, expected);
        assert!(WordSum::zero(2, 2).evaluate(&SpectralAssignment::default()).unwrap().is_structurally_zero());
        assert!(a.evaluate(&SpectralAssignment::default()).is_err());
    }

    #[test]
    fn support_of_zero_is_empty() {
        assert!(WordSum::zero(3, 2).support().is_empty());
    }

    #[test]
    fn text_round_trip_and_aliases() {
        let text = "@chain_len 2\n(u^2) 0:e 1:e\n(1) 0:sm 1:sp\n";
        let w = WordSum::parse(text).unwrap();
        assert_eq!(w.num_terms(), 2);
        assert_eq!(WordSum::parse(&w.to_text()).unwrap(), w);
        // σ⁺σ⁻ reduces to the up projector
        let v = WordSum::parse("@chain_len 1\n(1) 0:sp 0:sm\n").unwrap();
        assert_eq!(v, letter("1", 0, Unit::PROJ_UP, 1));
        let err = WordSum::parse("@chain_len 1\n(1) 3:E11\n").unwrap_err();
        assert!(matches!(err, QismError::Parse { line: 2, .. }));
    }

    #[test]
    fn sections_track_vanishing_terms() {
        let text = "@chain_len 2\n@entry A\n(1) 0:sp 0:sp\n(u) 1:E11\n@entry B\n(1)\n";
        let s = parse_sections(text, &WordParseOptions::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].vanished_terms, 1);
        assert_eq!(s[0].sum.num_terms(), 1);
        assert_eq!(s[1].sum, WordSum::identity(2, 2));
    }

    #[test]
    fn degree_range() {
        let w = letter("u^-1", 0, Unit::PROJ_UP, 1).add(&letter("u^2", 0, Unit::SIGMA_MINUS, 1)).unwrap();
        assert_eq!(w.u_degree_range(), Some((-1, 2)));
        let _ = Spectral::U;
    }
}
