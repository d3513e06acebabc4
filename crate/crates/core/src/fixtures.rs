//! Transcribed product expansions and a per-term diff against engine output.
//!
//! A transcription is a multi-entry word-sum file (`@entry A` … `@entry D`).
//! Each entry is compared with the engine's word sum of the same name; the
//! dense oracle, not the transcription, is the reference.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{QismError, Result};
use crate::models::Convention;
use crate::monodromy::{monodromy_symbolic, SiteOrder, LABELS};
use crate::words::{parse_sections, ParsedSection, WordParseOptions, WordSum};

/// Built-in transcriptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// The four entries of the two-site product.
    TwoSite,
    /// `A` and `B` of the three-site product.
    ThreeSiteFirstRow,
}

impl Fixture {
    pub fn all() -> [Fixture; 2] {
        [Fixture::TwoSite, Fixture::ThreeSiteFirstRow]
    }

    pub fn name(self) -> &'static str {
        match self {
            Fixture::TwoSite => "two-site",
            Fixture::ThreeSiteFirstRow => "three-site-first-row",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            Fixture::TwoSite => include_str!("../fixtures/two_site.txt"),
            Fixture::ThreeSiteFirstRow => include_str!("../fixtures/three_site_first_row.txt"),
        }
    }

    pub fn chain_len(self) -> usize {
        match self {
            Fixture::TwoSite => 2,
            Fixture::ThreeSiteFirstRow => 3,
        }
    }
}

impl std::str::FromStr for Fixture {
    type Err = QismError;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::all()
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| QismError::InvalidParameter(format!("unknown fixture `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermStatus {
    Matched,
    CoefficientMismatch,
    MissingInFixture,
    ExtraInFixture,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermDiff {
    pub word: String,
    pub status: TermStatus,
    pub engine: Option<String>,
    pub fixture: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryDiff {
    pub entry: String,
    pub matched: usize,
    pub coefficient_mismatch: usize,
    pub missing_in_fixture: usize,
    pub extra_in_fixture: usize,
    /// Transcribed terms that reduced to zero on parsing.
    pub vanished_in_fixture: usize,
    /// Engine and fixture have the same set of words.
    pub support_match: bool,
    pub terms: Vec<TermDiff>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureDiffReport {
    pub fixture: String,
    pub convention: String,
    pub entries: Vec<EntryDiff>,
}

impl FixtureDiffReport {
    pub fn all_supports_match(&self) -> bool {
        self.entries.iter().all(|e| e.support_match)
    }
}

/// Per-term classification of `fixture` against `engine`.
pub fn diff_entry(name: &str, engine: &WordSum, fixture: Option<&ParsedSection>) -> EntryDiff {
    let empty = WordSum::zero(engine.chain_len(), engine.local_dim());
    let fsum = fixture.map_or(&empty, |f| &f.sum);
    let words: BTreeSet<_> = engine.support().into_iter().chain(fsum.support()).collect();
    let mut terms = Vec::new();
    for w in words {
        let (e, f) = (engine.coefficient(&w), fsum.coefficient(&w));
        let status = match (e, f) {
            (Some(x), Some(y)) if x == y => TermStatus::Matched,
            (Some(_), Some(_)) => TermStatus::CoefficientMismatch,
            (Some(_), None) => TermStatus::MissingInFixture,
            (None, _) => TermStatus::ExtraInFixture,
        };
        terms.push(TermDiff {
            word: w.to_string(),
            status,
            engine: e.map(|c| c.to_string()),
            fixture: f.map(|c| c.to_string()),
        });
    }
    let count = |s: TermStatus| terms.iter().filter(|t| t.status == s).count();
    EntryDiff {
        entry: name.to_string(),
        matched: count(TermStatus::Matched),
        coefficient_mismatch: count(TermStatus::CoefficientMismatch),
        missing_in_fixture: count(TermStatus::MissingInFixture),
        extra_in_fixture: count(TermStatus::ExtraInFixture),
        vanished_in_fixture: fixture.map_or(0, |f| f.vanished_terms),
        support_match: engine.support() == fsum.support(),
        terms,
    }
}

/// Diff named engine entries against a transcription text. Fixture entries
/// without an engine counterpart are an error.
pub fn lemma_fixture_diff(engine: &[(String, WordSum)], fixture_text: &str, opts: &WordParseOptions) -> Result<Vec<EntryDiff>> {
    let sections = if fixture_text.lines().all(|l| l.trim().is_empty() || l.trim_start().starts_with('#')) {
        Vec::new()
    } else {
        parse_sections(fixture_text, opts)?
    };
    for s in &sections {
        if !engine.iter().any(|(n, _)| *n == s.name) {
            return Err(QismError::parse(1, format!("fixture entry `{}` has no engine counterpart", s.name)));
        }
        if let Some((_, e)) = engine.iter().find(|(n, _)| *n == s.name) {
            if e.chain_len() != s.sum.chain_len() {
                return Err(QismError::ShapeMismatch(format!(
                    "entry `{}`: fixture has {} sites, engine {}",
                    s.name,
                    s.sum.chain_len(),
                    e.chain_len()
                )));
            }
        }
    }
    Ok(engine
        .iter()
        .map(|(name, sum)| diff_entry(name, sum, sections.iter().find(|s| s.name == *name)))
        .collect())
}

/// Symbolic monodromy cells `A`–`D` on `n` sites under `convention`.
pub fn engine_entries(n: usize, convention: Convention) -> Result<Vec<(String, WordSum)>> {
    let t = monodromy_symbolic(convention, n, SiteOrder::Ascending)?;
    Ok(LABELS.iter().zip(t.cells()).map(|(l, c)| (l.to_string(), c.clone())).collect())
}

/// Diff a built-in transcription. Only entries present in the transcription
/// are compared.
pub fn diff_builtin(fixture: Fixture, convention: Convention) -> Result<FixtureDiffReport> {
    let opts = WordParseOptions { projector: convention.projector(), default_chain_len: None };
    let sections = parse_sections(fixture.source(), &opts)?;
    let engine: Vec<(String, WordSum)> = engine_entries(fixture.chain_len(), convention)?
        .into_iter()
        .filter(|(n, _)| sections.iter().any(|s| s.name == *n))
        .collect();
    Ok(FixtureDiffReport {
        fixture: fixture.name().into(),
        convention: convention.name().into(),
        entries: lemma_fixture_diff(&engine, fixture.source(), &opts)?,
    })
}

/// Diff a user-supplied transcription file against the `n`-site engine entries.
pub fn diff_text(text: &str, n: usize, convention: Convention, label: &str) -> Result<FixtureDiffReport> {
    let opts = WordParseOptions { projector: convention.projector(), default_chain_len: Some(n) };
    Ok(FixtureDiffReport {
        fixture: label.into(),
        convention: convention.name().into(),
        entries: lemma_fixture_diff(&engine_entries(n, convention)?, text, &opts)?,
    })
}
