//! Effective and extremal word-sets over a corpus.
//!
//! A word-set `s` is effective on a corpus when `λ_s >= 0` on every entry.
//! An effective `s` is extremal when its indicator vector is not a
//! nonnegative combination of the indicators of the other nonempty
//! effective sets.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cdbasis::{
    fibonacci_count, lambda_sum, vanishes_on_simple, word_index, CdError, CdVector, GVector,
    WordSet,
};
use crate::corpus::{CorpusEntry, EntrySource};
use crate::exactnum::{format_rat, lp_nonneg_feasible, solve_linear, QMatrix, Rat};

pub const REPORT_VERSION: &str = "gvlab-report-v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("corpus is empty; every word-set would be vacuously effective")]
    EmptyCorpus,
    #[error("corpus mixes dimensions {0} and {1}")]
    MixedDimensions(usize, usize),
    #[error("word-set {0} is not in the span of the given basis")]
    OutsideSpan(String),
    #[error("basis word-sets are linearly dependent")]
    DependentBasis,
    #[error(transparent)]
    Cd(#[from] CdError),
}

/// An excluded word-set together with an entry on which `λ_s < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub set: WordSet,
    /// Index into the entry list the family was computed from.
    pub witness: usize,
    pub value: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveFamily {
    pub d: usize,
    /// Effective sets, ascending by bitmask; always contains the empty set.
    pub members: Vec<WordSet>,
    pub excluded: Vec<Exclusion>,
    pub distinct_vectors: usize,
}

impl EffectiveFamily {
    pub fn contains(&self, s: &WordSet) -> bool {
        self.members.binary_search(s).is_ok()
    }

    pub fn exclusion(&self, s: &WordSet) -> Option<&Exclusion> {
        self.excluded.iter().find(|e| e.set == *s)
    }

    /// Disjoint effective members whose union is not a member.
    pub fn union_closure_violations(&self) -> Vec<(WordSet, WordSet)> {
        let mut out = Vec::new();
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if a.is_disjoint(b) && !self.contains(&a.union(b)) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }
}

/// Sweeps all `2^{F_{d+1}}` word-sets over the distinct CD vectors of the
/// corpus.
pub fn effective_sets(entries: &[CorpusEntry]) -> Result<EffectiveFamily, SearchError> {
    let first = entries.first().ok_or(SearchError::EmptyCorpus)?;
    let d = first.cd.dim();
    if let Some(e) = entries.iter().find(|e| e.cd.dim() != d) {
        return Err(SearchError::MixedDimensions(d, e.cd.dim()));
    }
    let mut index: HashMap<&CdVector, usize> = HashMap::new();
    let mut distinct: Vec<(usize, &CdVector)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        index.entry(&e.cd).or_insert_with(|| {
            distinct.push((i, &e.cd));
            i
        });
    }
    let n_words = fibonacci_count(d);
    let verdicts: Vec<Option<Exclusion>> = (0..1u64 << n_words)
        .into_par_iter()
        .map(|bits| {
            let s = WordSet::from_bits(d, bits);
            let mut worst: Option<(usize, Rat)> = None;
            for &(i, cd) in &distinct {
                let v = lambda_sum(cd, &s);
                if v.is_negative() && worst.as_ref().is_none_or(|(_, w)| v < *w) {
                    worst = Some((i, v));
                }
            }
            worst.map(|(witness, value)| Exclusion {
                set: s,
                witness,
                value,
            })
        })
        .collect();
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for (bits, v) in verdicts.into_iter().enumerate() {
        match v {
            None => members.push(WordSet::from_bits(d, bits as u64)),
            Some(x) => excluded.push(x),
        }
    }
    Ok(EffectiveFamily {
        d,
        members,
        excluded,
        distinct_vectors: distinct.len(),
    })
}

/// Extremal members, plus a nonnegative combination for every other
/// nonempty member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremality {
    pub extremal: Vec<WordSet>,
    pub combinations: Vec<(WordSet, Vec<(WordSet, Rat)>)>,
}

/// Decides extremality of every nonempty member by an exact LP against all
/// other nonempty members.
pub fn extremal_analysis(e: &EffectiveFamily) -> Extremality {
    let nonempty: Vec<WordSet> = e.members.iter().filter(|s| !s.is_empty()).copied().collect();
    let rows = fibonacci_count(e.d);
    let verdicts: Vec<Option<Vec<(WordSet, Rat)>>> = nonempty
        .par_iter()
        .map(|s| {
            let others: Vec<WordSet> = nonempty.iter().filter(|t| *t != s).copied().collect();
            let mut a = QMatrix::zeros(rows, others.len());
            for (j, t) in others.iter().enumerate() {
                for (i, v) in t.indicator().into_iter().enumerate() {
                    a[(i, j)] = v;
                }
            }
            lp_nonneg_feasible(&a, &s.indicator()).map(|x| {
                others
                    .into_iter()
                    .zip(x)
                    .filter(|(_, w)| !w.is_zero())
                    .collect()
            })
        })
        .collect();
    let mut out = Extremality {
        extremal: Vec::new(),
        combinations: Vec::new(),
    };
    for (s, v) in nonempty.into_iter().zip(verdicts) {
        match v {
            None => out.extremal.push(s),
            Some(combo) => out.combinations.push((s, combo)),
        }
    }
    out
}

pub fn extremal_subsets(e: &EffectiveFamily) -> Vec<WordSet> {
    extremal_analysis(e).extremal
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// `s = {w : deg_D w = i}`.
    OrderZero(usize),
    /// `λ_s` vanishes on simple polytopes.
    HigherOrder,
    Residual,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::OrderZero(i) => write!(f, "order-zero (g_{i})"),
            Classification::HigherOrder => write!(f, "higher-order"),
            Classification::Residual => write!(f, "residual"),
        }
    }
}

pub fn classify(s: &WordSet) -> Classification {
    let d = s.dim();
    if let Some(i) = (0..=d / 2).find(|&i| *s == WordSet::order_zero(d, i)) {
        return Classification::OrderZero(i);
    }
    if vanishes_on_simple(s) {
        Classification::HigherOrder
    } else {
        Classification::Residual
    }
}

/// Writes `λ_s >= 0` in terms of the basis components `g_b = λ_b`:
/// negative coefficients go left, positive ones right. Terms on each side
/// are ordered by descending index string.
pub fn render_inequality(s: &WordSet, basis: &[WordSet]) -> Result<String, SearchError> {
    let rows = fibonacci_count(s.dim());
    let mut m = QMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for (i, v) in b.indicator().into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    let coeffs = solve_linear(&m, &s.indicator())
        .map_err(|_| SearchError::DependentBasis)?
        .ok_or_else(|| SearchError::OutsideSpan(s.to_string()))?;
    let mut left: Vec<(String, Rat)> = Vec::new();
    let mut right: Vec<(String, Rat)> = Vec::new();
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let name = word_index(b)?;
        if c.is_negative() {
            left.push((name, -c));
        } else {
            right.push((name, c));
        }
    }
    let side = |mut terms: Vec<(String, Rat)>| -> String {
        if terms.is_empty() {
            return "0".into();
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        terms
            .iter()
            .map(|(name, c)| {
                if *c == Rat::from_integer(1.into()) {
                    format!("g_{name}")
                } else {
                    format!("{} g_{name}", format_rat(c))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    Ok(format!("{} <= {}", side(left), side(right)))
}

/// `g_s = λ_s` for each component.
pub fn g_vector(cd: &CdVector, components: &[WordSet]) -> GVector {
    GVector {
        d: cd.dim(),
        components: components.iter().map(|s| (*s, lambda_sum(cd, s))).collect(),
    }
}

/// Checks that every word appears first in exactly one component and never
/// in a later one, which makes the components a basis.
pub fn is_upper_triangular(components: &[WordSet]) -> bool {
    let Some(d) = components.first().map(WordSet::dim) else {
        return false;
    };
    let n = fibonacci_count(d);
    if components.len() != n {
        return false;
    }
    let mut firsts = Vec::new();
    for (k, s) in components.iter().enumerate() {
        let Some(first) = s.indices().next() else {
            return false;
        };
        if components[k + 1..].iter().any(|t| t.contains_index(first)) {
            return false;
        }
        firsts.push(first);
    }
    firsts.sort_unstable();
    firsts.dedup();
    firsts.len() == n
}

/// Reference d=5 g-vector components and the residual extremal sets
/// with their inequalities.
pub mod d5 {
    use super::*;

    /// `(index, words)` in listed order.
    pub const COMPONENTS: [(&str, &[&str]); 8] = [
        ("11111", &["CCCCC"]),
        ("2111", &["DCCC", "CDCC", "CCDC", "CCCD"]),
        ("221", &["DDC", "DCD", "CDD"]),
        ("1211", &["CDCC", "CCDC", "CCCD", "CDD"]),
        ("1121", &["CCDC", "CCCD", "DCD"]),
        ("1112", &["CCCD"]),
        ("122", &["CDD"]),
        ("212", &["DCD"]),
    ];

    /// `(inequality, words)`.
    pub const RESIDUALS: [(&str, &[&str]); 5] = [
        ("g_122 <= g_221 + g_2111", &["DDC", "DCD", "DCCC", "CDCC", "CCDC", "CCCD"]),
        ("g_122 <= g_221 + g_1211", &["DDC", "DCD", "CDD", "CDCC", "CCDC", "CCCD"]),
        ("g_212 <= g_221 + g_1112", &["DDC", "CDD", "CCCD"]),
        ("g_212 <= g_221 + g_1121", &["DDC", "DCD", "CDD", "CCDC", "CCCD"]),
        ("g_212 <= g_221 + g_2111", &["DDC", "CDD", "DCCC", "CDCC", "CCDC", "CCCD"]),
    ];

    /// The set that the exceptional test polytope's polar makes negative.
    pub const EXCEPTION: [&str; 3] = ["CDCC", "CCDC", "CCCD"];

    pub fn components() -> Vec<WordSet> {
        COMPONENTS
            .iter()
            .map(|(_, ws)| WordSet::from_words(5, ws).expect("valid words"))
            .collect()
    }

    pub fn residuals() -> Vec<WordSet> {
        RESIDUALS
            .iter()
            .map(|(_, ws)| WordSet::from_words(5, ws).expect("valid words"))
            .collect()
    }

    /// All thirteen extremal sets: components first, then residuals.
    pub fn extremal_sets() -> Vec<WordSet> {
        let mut v = components();
        v.extend(residuals());
        v
    }
}

/// Summary of the input corpus, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusSummary {
    pub dimension: usize,
    pub entries: usize,
    pub distinct_cd_vectors: usize,
    pub fingerprint: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalRecord {
    pub index: String,
    pub words: Vec<String>,
    pub classification: Classification,
    pub inequality: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub words: Vec<String>,
    pub entry: String,
    pub lambda: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinationRecord {
    pub words: Vec<String>,
    pub combination: Vec<(Vec<String>, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub format: String,
    pub tool_version: String,
    pub corpus: CorpusSummary,
    pub effective_count: usize,
    pub effective: Vec<Vec<String>>,
    pub extremal: Vec<ExtremalRecord>,
    pub witnesses: Vec<WitnessRecord>,
    pub combinations: Vec<CombinationRecord>,
}

fn word_strings(s: &WordSet) -> Vec<String> {
    let mut v: Vec<String> = s.members().iter().map(|w| w.to_string()).collect();
    v.sort();
    v
}

fn source_label(e: &EntrySource) -> String {
    format!("{}", e)
}

impl SearchReport {
    /// Runs the whole search. Residual sets are rendered as inequalities
    /// when `basis` is given.
    pub fn build(
        entries: &[CorpusEntry],
        fingerprint: &str,
        seed: Option<u64>,
        basis: Option<&[WordSet]>,
    ) -> Result<SearchReport, SearchError> {
        let family = effective_sets(entries)?;
        let ext = extremal_analysis(&family);
        let mut extremal = Vec::new();
        for s in &ext.extremal {
            let classification = classify(s);
            let inequality = match (classification, basis) {
                (Classification::Residual, Some(b)) => Some(render_inequality(s, b)?),
                _ => None,
            };
            extremal.push(ExtremalRecord {
                index: word_index(s)?,
                words: s.members().iter().map(|w| w.to_string()).collect(),
                classification,
                inequality,
            });
        }
        Ok(SearchReport {
            format: REPORT_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            corpus: CorpusSummary {
                dimension: family.d,
                entries: entries.len(),
                distinct_cd_vectors: family.distinct_vectors,
                fingerprint: fingerprint.into(),
                seed,
            },
            effective_count: family.members.len(),
            effective: family.members.iter().map(word_strings).collect(),
            extremal,
            witnesses: family
                .excluded
                .iter()
                .map(|x| WitnessRecord {
                    words: word_strings(&x.set),
                    entry: source_label(&entries[x.witness].source),
                    lambda: format_rat(&x.value),
                })
                .collect(),
            combinations: ext
                .combinations
                .iter()
                .map(|(s, combo)| CombinationRecord {
                    words: word_strings(s),
                    combination: combo
                        .iter()
                        .map(|(t, w)| (word_strings(t), format_rat(w)))
                        .collect(),
                })
                .collect(),
        })
    }

    pub fn count_by_class(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for e in &self.extremal {
            match e.classification {
                Classification::OrderZero(_) => c.0 += 1,
                Classification::HigherOrder => c.1 += 1,
                Classification::Residual => c.2 += 1,
            }
        }
        c
    }

    /// Human-readable section followed by the JSON section.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (gvlab {})", self.format, self.tool_version);
        let c = &self.corpus;
        let _ = writeln!(out, "corpus: d={} entries={} distinct-cd={} fingerprint={}", c.dimension, c.entries, c.distinct_cd_vectors, c.fingerprint);
        if let Some(seed) = c.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        let _ = writeln!(out, "effective word-sets: {} (relative to this corpus)", self.effective_count);
        let (z, h, r) = self.count_by_class();
        let _ = writeln!(
            out,
            "extremal word-sets: {} ({z} order-zero, {h} higher-order, {r} residual)",
            self.extremal.len()
        );
        for e in &self.extremal {
            let _ = write!(out, "  {:<6} {:<17} {}", e.index, e.classification.to_string(), e.words.join(", "));
            if let Some(ineq) = &e.inequality {
                let _ = write!(out, "   [{ineq}]");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "excluded word-sets: {}", self.witnesses.len());
        for w in &self.witnesses {
            let _ = writeln!(out, "  {{{}}} lambda={} on {}", w.words.join(", "), w.lambda, w.entry);
        }
        let _ = writeln!(out, "--- json ---");
        out.push_str(&serde_json::to_string_pretty(self).expect("report serializes"));
        out.push('\n');
        out
    }
}
