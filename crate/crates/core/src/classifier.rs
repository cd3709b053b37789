//! The full FPT / W[1]-hard dichotomy for finite Boolean languages, decided
//! through direct clause-closure definability tests and the two structural
//! graph conditions.

use crate::clause::{families, qfpp_definable};
use crate::language::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tractability {
    Fpt,
    W1Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Trivial: every non-empty relation 0-valid, or every one 1-valid.
    T1a,
    /// Bijunctive with 2K2-free Gaifman graphs.
    T1b,
    /// Definable by negative clauses and assignments.
    T1c,
    /// Definable by positive clauses and assignments.
    T1d,
    /// Definable by negative clauses, implications and assignments, with
    /// 2K2-free arrow graphs.
    T2a,
    /// Dual of T2a.
    T2b,
    Hard,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::T1a => "1a",
            CaseTag::T1b => "1b",
            CaseTag::T1c => "1c",
            CaseTag::T1d => "1d",
            CaseTag::T2a => "2a",
            CaseTag::T2b => "2b",
            CaseTag::Hard => "HARD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub weighted: Tractability,
    pub unweighted: Tractability,
    pub case_tag: CaseTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialSide {
    ZeroValid,
    OneValid,
}

/// Triviality test: all non-empty relations 0-valid, or all 1-valid. Empty
/// relations are ignored here; formula preprocessing removes them.
pub fn is_trivial_language(lang: &Language) -> Option<TrivialSide> {
    let non_empty: Vec<_> = lang.iter().filter(|(_, r)| !r.is_empty()).collect();
    if non_empty.iter().all(|(_, r)| r.is_zero_valid()) {
        return Some(TrivialSide::ZeroValid);
    }
    if non_empty.iter().all(|(_, r)| r.is_one_valid()) {
        return Some(TrivialSide::OneValid);
    }
    None
}

fn case_1b(lang: &Language) -> bool {
    lang.iter().all(|(_, r)| {
        qfpp_definable(r, families::BIJUNCTIVE) && r.gaifman_graph().unwrap().is_2k2_free()
    })
}

fn case_1c(lang: &Language) -> bool {
    lang.iter()
        .all(|(_, r)| qfpp_definable(r, families::NEGATIVE_ASSIGN))
}

fn case_2a(lang: &Language) -> bool {
    lang.iter().all(|(_, r)| {
        qfpp_definable(r, families::SIGMA) && r.arrow_graph().unwrap().underlying().is_2k2_free()
    })
}

/// Classifies a finite Boolean language. Cases are evaluated in fixed
/// precedence order; a language matching several gets the earliest tag. The
/// empty language is trivially tractable and tagged 1a by convention.
pub fn classify_language(lang: &Language) -> Verdict {
    use Tractability::*;
    let lang = lang.without_empty();
    let both_fpt = |tag| Verdict {
        weighted: Fpt,
        unweighted: Fpt,
        case_tag: tag,
    };
    if lang.is_empty() || is_trivial_language(&lang).is_some() {
        return both_fpt(CaseTag::T1a);
    }
    if case_1b(&lang) {
        return both_fpt(CaseTag::T1b);
    }
    let dual = lang.dual();
    if case_1c(&lang) {
        debug_assert!(lang
            .iter()
            .all(|(_, r)| r.arrow_graph().unwrap().is_edgeless()));
        return both_fpt(CaseTag::T1c);
    }
    if case_1c(&dual) {
        return both_fpt(CaseTag::T1d);
    }
    if case_2a(&lang) {
        return Verdict {
            weighted: W1Hard,
            unweighted: Fpt,
            case_tag: CaseTag::T2a,
        };
    }
    if case_2a(&dual) {
        return Verdict {
            weighted: W1Hard,
            unweighted: Fpt,
            case_tag: CaseTag::T2b,
        };
    }
    Verdict {
        weighted: W1Hard,
        unweighted: W1Hard,
        case_tag: CaseTag::Hard,
    }
}
