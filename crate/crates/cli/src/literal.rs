//! Textual forms of sets, type elements, words and algebra elements as they
//! appear on the command line and in certificates.

use paracomp::action::{Action, ActionError, GroupWord, PrefixExchange};
use paracomp::algebra::AlgebraElement;
use paracomp::semigroup::{canonical_type_element, TypeElement};
use paracomp::sft::{ClopenSet, SftSpace, SpaceError, Word};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("malformed literal {0:?}")]
    Malformed(String),
}

/// `[w]` with the empty word written `[]`.
pub fn cylinder(space: &SftSpace, w: &[u8]) -> String {
    format!("[{}]", space.format_word(w))
}

pub fn parse_cylinder(space: &SftSpace, text: &str) -> Result<Word, LiteralError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| LiteralError::Malformed(text.to_string()))?;
    Ok(space.parse_admissible(inner)?)
}

pub fn set(space: &SftSpace, a: &ClopenSet) -> String {
    space.format_set(a)
}

/// Parses a set literal and insists that it is already in canonical form, so
/// that every set has exactly one spelling.
pub fn parse_canonical_set(space: &SftSpace, text: &str) -> Result<ClopenSet, LiteralError> {
    let a = space.parse_set(text)?;
    if space.format_set(&a) != text {
        return Err(LiteralError::Malformed(format!("{text} (not canonical)")));
    }
    Ok(a)
}

/// `[w]*m|[v]|…` with multiplicity 1 left implicit; `0` is the zero element.
pub fn type_element(space: &SftSpace, f: &TypeElement) -> String {
    let step = f.to_step(space);
    if step.is_zero() {
        return "0".to_string();
    }
    step.terms()
        .map(|(w, m)| {
            if *m == 1 {
                cylinder(space, w)
            } else {
                format!("{}*{m}", cylinder(space, w))
            }
        })
        .collect::<Vec<_>>()
        .join("|")
}

pub fn parse_type_element(space: &SftSpace, text: &str) -> Result<TypeElement, LiteralError> {
    let text = text.trim();
    if text == "0" {
        return Ok(TypeElement::zero());
    }
    let mut terms = Vec::new();
    for part in text.split('|') {
        let part = part.trim();
        let (c, m) = match part.rsplit_once('*') {
            Some((c, m)) => (
                c,
                m.parse::<u32>()
                    .map_err(|_| LiteralError::Malformed(part.to_string()))?,
            ),
            None => (part, 1),
        };
        terms.push((parse_cylinder(space, c)?, m));
    }
    canonical_type_element(space, &terms).map_err(|e| LiteralError::Malformed(e.to_string()))
}

pub fn group_word(action: &Action, w: &GroupWord) -> String {
    action.format_group_word(w)
}

pub fn parse_group_word(action: &Action, text: &str) -> Result<GroupWord, LiteralError> {
    Ok(action.parse_group_word(text)?)
}

/// Comma-separated group words.
pub fn parse_group_words(action: &Action, text: &str) -> Result<Vec<GroupWord>, LiteralError> {
    text.split(',')
        .map(|t| parse_group_word(action, t))
        .collect()
}

fn word_or_dot(space: &SftSpace, w: &[u8]) -> String {
    if w.is_empty() {
        ".".to_string()
    } else {
        space.format_word(w)
    }
}

/// `u>v,…`, or `id` for the identity.
pub fn exchange(space: &SftSpace, t: &PrefixExchange) -> String {
    if t.is_identity() {
        return "id".to_string();
    }
    t.rules()
        .map(|(u, v)| format!("{}>{}", word_or_dot(space, u), word_or_dot(space, v)))
        .collect::<Vec<_>>()
        .join(",")
}

/// One `<exchange> <coefficient>` string per term, coefficient written as
/// `[w]=q,…`.
pub fn algebra_terms(space: &SftSpace, a: &AlgebraElement) -> Vec<String> {
    a.terms()
        .map(|(t, b)| {
            let coef = b
                .terms()
                .map(|(w, q)| format!("{}={q}", cylinder(space, w)))
                .collect::<Vec<_>>()
                .join(",");
            format!("{} {coef}", exchange(space, t))
        })
        .collect()
}
