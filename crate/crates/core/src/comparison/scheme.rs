use std::collections::BTreeMap;
use std::fmt;

use crate::action::{Action, GroupWord, PrefixExchange};
use crate::comparison::ComparisonError;
use crate::sft::{ClopenSet, SftSpace, Word};

/// A certificate for `source ≺ target`: the piece cylinders partition the
/// source and their translates are pairwise disjoint inside the target.
#[derive(Clone, PartialEq, Eq)]
pub struct SubequivalenceScheme {
    pub source: ClopenSet,
    pub target: ClopenSet,
    pub pieces: Vec<(Word, GroupWord)>,
}

impl fmt::Debug for SubequivalenceScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("pieces", &self.pieces)
            .finish()
    }
}

/// The first clause of the scheme definition that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeViolation {
    /// Two pieces meet.
    PieceOverlap(usize, usize),
    /// The pieces do not union to the source.
    Coverage,
    /// Two translated pieces meet.
    ImageOverlap(usize, usize),
    /// A translated piece leaves the target.
    ImageOutsideTarget(usize),
}

impl fmt::Display for SchemeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeViolation::PieceOverlap(i, j) => write!(f, "pieces {i} and {j} overlap"),
            SchemeViolation::Coverage => write!(f, "pieces do not partition the source"),
            SchemeViolation::ImageOverlap(i, j) => {
                write!(f, "images of pieces {i} and {j} overlap")
            }
            SchemeViolation::ImageOutsideTarget(i) => {
                write!(f, "image of piece {i} is not inside the target")
            }
        }
    }
}

impl SubequivalenceScheme {
    /// The scheme moving every cylinder of `source` by the identity.
    pub fn identity(source: &ClopenSet, target: &ClopenSet) -> Self {
        SubequivalenceScheme {
            source: source.clone(),
            target: target.clone(),
            pieces: source
                .cylinders()
                .map(|c| (c.clone(), GroupWord::identity()))
                .collect(),
        }
    }

    /// Translated pieces, in piece order.
    pub fn images(&self, action: &Action) -> Result<Vec<ClopenSet>, ComparisonError> {
        let mut out = Vec::with_capacity(self.pieces.len());
        for (p, w) in &self.pieces {
            action.space().check_word(p)?;
            out.push(
                action
                    .evaluate_word(w)?
                    .image_of_cylinder(action.space(), p),
            );
        }
        Ok(out)
    }

    /// Union of the translated pieces.
    pub fn image_union(&self, action: &Action) -> Result<ClopenSet, ComparisonError> {
        Ok(action.space().union_all(&self.images(action)?))
    }

    /// The same scheme with its target shrunk to the union of the images.
    pub fn tightened(&self, action: &Action) -> Result<Self, ComparisonError> {
        Ok(SubequivalenceScheme {
            target: self.image_union(action)?,
            ..self.clone()
        })
    }

    /// Maximum piece length.
    pub fn depth(&self) -> usize {
        self.pieces.iter().map(|(p, _)| p.len()).max().unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.pieces.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

/// Exact check of every clause, in order: piece disjointness, coverage of
/// the source, image disjointness, image containment.
pub fn verify_scheme(
    action: &Action,
    s: &SubequivalenceScheme,
) -> Result<Result<(), SchemeViolation>, ComparisonError> {
    let space = action.space();
    space.check_set(&s.source)?;
    space.check_set(&s.target)?;
    let mut order: Vec<usize> = (0..s.pieces.len()).collect();
    order.sort_by(|&a, &b| s.pieces[a].0.cmp(&s.pieces[b].0));
    for pair in order.windows(2) {
        if s.pieces[pair[0]].0.is_prefix_of(&s.pieces[pair[1]].0) {
            let (i, j) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            return Ok(Err(SchemeViolation::PieceOverlap(i, j)));
        }
    }
    for (p, _) in &s.pieces {
        space.check_word(p)?;
    }
    if space.canonicalize_unchecked(s.pieces.iter().map(|(p, _)| p.clone())) != s.source {
        return Ok(Err(SchemeViolation::Coverage));
    }
    let images = s.images(action)?;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !images[i].is_disjoint(&images[j]) {
                return Ok(Err(SchemeViolation::ImageOverlap(i, j)));
            }
        }
    }
    for (i, img) in images.iter().enumerate() {
        if !space.is_subset(img, &s.target) {
            return Ok(Err(SchemeViolation::ImageOutsideTarget(i)));
        }
    }
    Ok(Ok(()))
}

fn require_valid(action: &Action, s: &SubequivalenceScheme) -> Result<(), ComparisonError> {
    match verify_scheme(action, s)? {
        Ok(()) => Ok(()),
        Err(v) => Err(ComparisonError::SchemeInvalid(v)),
    }
}

/// Cylinders of `[w] ∩ set`.
fn cylinder_meet(space: &SftSpace, w: &Word, set: &ClopenSet) -> Vec<Word> {
    if set.has_prefix_of(w) {
        vec![w.clone()]
    } else {
        let ext: Vec<Word> = set
            .cylinders()
            .filter(|c| w.is_prefix_of(c))
            .cloned()
            .collect();
        space
            .canonicalize_unchecked(ext)
            .cylinders()
            .cloned()
            .collect()
    }
}

/// Restricts a verified scheme to a subset of its source; the target is kept.
pub fn restrict(
    action: &Action,
    s: &SubequivalenceScheme,
    subset: &ClopenSet,
) -> Result<SubequivalenceScheme, ComparisonError> {
    let space = action.space();
    space.check_set(subset)?;
    if !space.is_subset(subset, &s.source) {
        return Err(ComparisonError::HypothesisMismatch(
            "restriction set is not inside the source".into(),
        ));
    }
    let mut pieces = Vec::new();
    for (p, w) in &s.pieces {
        for c in cylinder_meet(space, p, subset) {
            pieces.push((c, w.clone()));
        }
    }
    Ok(SubequivalenceScheme {
        source: subset.clone(),
        target: s.target.clone(),
        pieces,
    })
}

/// Composes `s1: F ≺ N` with `s2: N' ≺ B` where `N ⊆ N'`: every piece of
/// `s1` is cut along the pieces of `s2` after translation, and each part
/// moves by the product of the two words.
pub fn compose_schemes(
    action: &Action,
    s1: &SubequivalenceScheme,
    s2: &SubequivalenceScheme,
) -> Result<SubequivalenceScheme, ComparisonError> {
    require_valid(action, s1)?;
    require_valid(action, s2)?;
    let space = action.space();
    if !space.is_subset(&s1.target, &s2.source) {
        return Err(ComparisonError::HypothesisMismatch(
            "first target is not inside the second source".into(),
        ));
    }
    let mut pieces = Vec::new();
    for (p, g) in &s1.pieces {
        let gx: PrefixExchange = action.evaluate_word(g)?;
        let ginv = gx.invert(space);
        for e in gx.image_words(space, p) {
            for (q, h) in &s2.pieces {
                let region = if q.is_prefix_of(&e) {
                    e.clone()
                } else if e.is_prefix_of(q) {
                    q.clone()
                } else {
                    continue;
                };
                let word = h.then_apply_after(g);
                for c in ginv.image_words(space, &region) {
                    pieces.push((c, word.clone()));
                }
            }
        }
    }
    Ok(SubequivalenceScheme {
        source: s1.source.clone(),
        target: s2.target.clone(),
        pieces: merge_pieces(space, pieces),
    })
}

/// Merges sibling pieces moved by the same word; output sorted by piece.
pub(crate) fn merge_pieces(
    space: &SftSpace,
    pieces: Vec<(Word, GroupWord)>,
) -> Vec<(Word, GroupWord)> {
    let mut by_word: BTreeMap<GroupWord, Vec<Word>> = BTreeMap::new();
    for (p, w) in pieces {
        by_word.entry(w).or_default().push(p);
    }
    let mut out: Vec<(Word, GroupWord)> = by_word
        .into_iter()
        .flat_map(|(w, ps)| {
            let set = space.canonicalize_unchecked(ps);
            set.cylinders()
                .map(|c| (c.clone(), w.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out
}
