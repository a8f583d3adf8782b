//! JSON certificate documents.
//!
//! One document shape covers every result kind; a `kind` field tells them
//! apart. Integers are written as decimal strings so values of any size
//! survive third-party parsers unchanged.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::dsl::parse_spec;
use crate::error::{Error, Result};
use crate::fsfp::{finite_sums, BlockSystem, Sequence};
use crate::partition::{Coloring, FsWitness};
use crate::search::{verify_report, Certificate, SearchBudget, SearchOutcome, SearchRun};

pub const FORMAT_VERSION: u32 = 1;

/// Version 1: subsystem blocks are chosen by depth-first search with
/// chronological backtracking in canonical block order, to a fixed depth.
pub const FORMAT_NOTES: &str =
    "v1: blocks chosen by bounded depth-first search with chronological \
backtracking; canonical block order is (max index, size, lexicographic); a certificate covers \
exactly the recorded depth";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Subsystem,
    FsWitness,
    IpStarRefutation,
    Hindman,
    Semigroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub format_version: u32,
    pub kind: DocKind,
    /// `found`, `exhausted`, `node_limit`, `none`, or `valid` for reports.
    pub outcome: String,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ys: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<SearchBudget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn dec<'a>(vals: impl IntoIterator<Item = &'a BigUint>) -> Vec<String> {
    vals.into_iter().map(BigUint::to_string).collect()
}

fn parse_dec(field: &str, vals: &[String]) -> Result<Vec<BigUint>> {
    vals.iter()
        .map(|s| {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::input(format!(
                    "{field}: '{s}' is not a decimal integer"
                )));
            }
            Ok(BigUint::parse_bytes(s.as_bytes(), 10).expect("digits"))
        })
        .collect()
}

fn required<'a, T>(field: &str, v: &'a Option<T>) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::input(format!("document is missing the '{field}' field")))
}

impl Document {
    fn empty(kind: DocKind, outcome: &str) -> Self {
        Document {
            format_version: FORMAT_VERSION,
            kind,
            outcome: outcome.to_owned(),
            verified: false,
            spec: None,
            x: None,
            blocks: None,
            ys: None,
            fs: None,
            fp: None,
            budget: None,
            nodes: None,
            terms: None,
            depth: None,
            bound: None,
            color: None,
            coloring: None,
            report: None,
            notes: None,
        }
    }

    pub fn from_certificate(cert: &Certificate) -> Self {
        let mut d = Self::empty(DocKind::Subsystem, "found");
        d.verified = cert.verified;
        d.spec = Some(cert.spec_text.clone());
        d.x = Some(dec(cert.x.terms()));
        d.blocks = Some(cert.blocks.to_indices());
        d.ys = Some(dec(&cert.ys));
        d.fs = Some(dec(&cert.fs));
        d.fp = Some(dec(&cert.fp));
        d.budget = cert.budget;
        d.notes = Some(FORMAT_NOTES.to_owned());
        d
    }

    /// Any search result, including the ones without a certificate.
    pub fn from_search(run: &SearchRun, spec_text: &str, budget: SearchBudget) -> Self {
        let mut d = match &run.outcome {
            SearchOutcome::Found(cert) => Self::from_certificate(cert),
            other => {
                let mut d = Self::empty(DocKind::Subsystem, other.kind());
                d.spec = Some(spec_text.to_owned());
                d.notes = Some(FORMAT_NOTES.to_owned());
                d
            }
        };
        d.budget = Some(budget);
        d.nodes = Some(run.nodes);
        d
    }

    /// `kind` must be [`DocKind::FsWitness`] or [`DocKind::IpStarRefutation`];
    /// `spec` is the set `B` searched, or the set `A` refuted.
    pub fn from_witness(
        kind: DocKind,
        spec_text: &str,
        k: usize,
        bound: u64,
        w: Option<&FsWitness>,
    ) -> Self {
        let mut d = Self::empty(kind, if w.is_some() { "found" } else { "none" });
        d.spec = Some(spec_text.to_owned());
        d.depth = Some(k);
        d.bound = Some(bound);
        if let Some(w) = w {
            d.terms = Some(dec(w.terms()));
            d.fs = Some(dec(w.fs()));
            d.verified = true;
        }
        d
    }

    pub fn from_hindman(c: &Coloring, k: usize, found: Option<&(u32, FsWitness)>) -> Self {
        let mut d = Self::empty(
            DocKind::Hindman,
            if found.is_some() { "found" } else { "none" },
        );
        d.depth = Some(k);
        d.bound = Some(c.bound() as u64);
        d.coloring = Some(c.colors().to_vec());
        if let Some((color, w)) = found {
            d.color = Some(*color);
            d.terms = Some(dec(w.terms()));
            d.fs = Some(dec(w.fs()));
            d.verified = true;
        }
        d
    }

    pub fn from_report(report: serde_json::Value) -> Self {
        let mut d = Self::empty(DocKind::Semigroup, "valid");
        d.verified = true;
        d.report = Some(report);
        d
    }

    /// Rebuild the subsystem certificate recorded in this document.
    pub fn to_certificate(&self) -> Result<Certificate> {
        if self.kind != DocKind::Subsystem {
            return Err(Error::input("document is not a subsystem certificate"));
        }
        let x = Sequence::new(parse_dec("x", required("x", &self.x)?)?)?;
        let blocks = BlockSystem::from_indices(required("blocks", &self.blocks)?.clone())?;
        Ok(Certificate {
            x,
            blocks,
            ys: parse_dec("ys", required("ys", &self.ys)?)?,
            fs: parse_dec("fs", required("fs", &self.fs)?)?
                .into_iter()
                .collect(),
            fp: parse_dec("fp", required("fp", &self.fp)?)?
                .into_iter()
                .collect(),
            spec_text: required("spec", &self.spec)?.clone(),
            budget: self.budget,
            verified: self.verified,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: Document = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("bad certificate document: {e}")))?;
        if d.format_version != FORMAT_VERSION {
            return Err(Error::input(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                d.format_version
            )));
        }
        Ok(d)
    }
}

/// Re-check a document from its own contents. Returns human-readable
/// failures; an empty list means it verifies. Only documents that claim a
/// positive result can verify.
pub fn verify_document(doc: &Document) -> Result<Vec<String>> {
    if doc.outcome != "found" {
        return Ok(vec![format!(
            "document records outcome '{}', nothing to verify",
            doc.outcome
        )]);
    }
    match doc.kind {
        DocKind::Subsystem => Ok(verify_report(&doc.to_certificate()?)?
            .into_iter()
            .map(|f| f.to_string())
            .collect()),
        DocKind::FsWitness | DocKind::IpStarRefutation => {
            let spec = parse_spec(required("spec", &doc.spec)?)?;
            let target = if doc.kind == DocKind::IpStarRefutation {
                spec.complement()
            } else {
                spec
            };
            let terms = parse_dec("terms", required("terms", &doc.terms)?)?;
            let mut failures = witness_shape(&terms, doc)?;
            for v in finite_sums(&terms)? {
                if !target.contains(&v)? {
                    failures.push(format!("finite sum {v} is not in the target"));
                }
            }
            Ok(failures)
        }
        DocKind::Hindman => {
            let colors = required("coloring", &doc.coloring)?;
            let c = Coloring::from_colors(colors.clone())?;
            let color = *required("color", &doc.color)?;
            let terms = parse_dec("terms", required("terms", &doc.terms)?)?;
            let mut failures = witness_shape(&terms, doc)?;
            for v in finite_sums(&terms)? {
                let shade = usize::try_from(&v).ok().and_then(|v| c.color(v));
                match shade {
                    None => failures.push(format!("finite sum {v} lies outside 1..={}", c.bound())),
                    Some(s) if s != color => {
                        failures.push(format!("finite sum {v} has colour {s}, not {color}"))
                    }
                    Some(_) => {}
                }
            }
            Ok(failures)
        }
        DocKind::Semigroup => Err(Error::input(
            "semigroup reports are recomputed, not verified",
        )),
    }
}

fn witness_shape(terms: &[BigUint], doc: &Document) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    if terms.windows(2).any(|w| w[0] >= w[1]) {
        failures.push("terms are not strictly increasing".to_owned());
    }
    if let Some(k) = doc.depth {
        if terms.len() != k {
            failures.push(format!("{} terms recorded for depth {k}", terms.len()));
        }
    }
    if let Some(n) = doc.bound {
        if let Some(t) = terms.iter().find(|t| **t > BigUint::from(n)) {
            failures.push(format!("term {t} exceeds bound {n}"));
        }
    }
    if let Some(fs) = &doc.fs {
        let recorded: BTreeSet<BigUint> = parse_dec("fs", fs)?.into_iter().collect();
        if !terms.is_empty() && recorded != finite_sums(terms)? {
            failures.push("recorded fs differs from the recomputed finite sums".to_owned());
        }
    }
    Ok(failures)
}
