//! One-step subshifts of finite type and the boolean algebra of their clopen
//! sets.
//!
//! A point of the space is an infinite sequence of letters; a finite word `u`
//! names the cylinder `[u]` of all points starting with `u`. Every clopen set
//! is a finite union of cylinders, and [`ClopenSet`] stores it in a canonical
//! form: the antichain of maximal cylinders contained in the set. Two clopen
//! sets are equal as subsets of the space iff their canonical forms are equal.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Bound, Deref};

use thiserror::Error;

/// Index of a letter in the alphabet.
pub type Letter = u8;

/// Largest supported alphabet.
pub const MAX_ALPHABET: usize = 128;

/// A finite word over the alphabet, naming a cylinder set.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &[Letter]) -> bool {
        other.starts_with(&self.0)
    }

    /// True when one word is a prefix of the other, i.e. the cylinders meet.
    pub fn is_comparable(&self, other: &[Letter]) -> bool {
        self.is_prefix_of(other) || self.0.starts_with(other)
    }

    pub fn child(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, tail: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + tail.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(tail);
        Word(v)
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn into_inner(self) -> Vec<Letter> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("the space has no admissible point")]
    EmptySpace,
    #[error("letter {0:?} has no allowed successor")]
    DeadEnd(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("word {0} is not admissible")]
    InadmissibleWord(String),
    #[error("unknown letter in {0:?}")]
    UnknownLetter(String),
    #[error("invalid letter name {0:?}")]
    BadLetterName(String),
    #[error("depth {depth} is smaller than the longest cylinder ({needed})")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("malformed set literal {0:?}")]
    BadLiteral(String),
    #[error("set is not a clopen set of this space")]
    SpaceMismatch,
}

/// Relation between two clopen sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetRelation {
    Equal,
    /// Strict containment of the first operand in the second.
    Subset,
    Superset,
    Disjoint,
    Overlapping,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

/// A clopen set in canonical form: the antichain of maximal cylinders it
/// contains. Only an [`SftSpace`] constructs these.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClopenSet {
    cylinders: BTreeSet<Word>,
}

impl ClopenSet {
    pub fn empty() -> Self {
        ClopenSet::default()
    }

    pub fn whole() -> Self {
        let mut cylinders = BTreeSet::new();
        cylinders.insert(Word::empty());
        ClopenSet { cylinders }
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.cylinders.len() == 1 && self.cylinders.iter().next().is_some_and(|w| w.is_empty())
    }

    pub fn cylinders(&self) -> impl Iterator<Item = &Word> + '_ {
        self.cylinders.iter()
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    /// Length of the longest cylinder word (0 for the empty set).
    pub fn max_len(&self) -> usize {
        self.cylinders.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Whether some cylinder of the set is a prefix of `w`, i.e. `[w]` lies
    /// inside one cylinder of the set.
    pub fn has_prefix_of(&self, w: &[Letter]) -> bool {
        (0..=w.len()).any(|k| self.cylinders.contains(&w[..k]))
    }

    /// Whether some cylinder of the set extends `w` (including `w` itself).
    pub fn has_extension_of(&self, w: &[Letter]) -> bool {
        self.extensions_of(w).next().is_some()
    }

    pub(crate) fn extensions_of<'a>(
        &'a self,
        w: &'a [Letter],
    ) -> impl Iterator<Item = &'a Word> + 'a {
        self.cylinders
            .range::<[Letter], _>((Bound::Included(w), Bound::Unbounded))
            .take_while(move |c| c.starts_with(w))
    }

    /// Whether the cylinder `[w]` meets the set.
    pub fn meets_cylinder(&self, w: &[Letter]) -> bool {
        self.has_prefix_of(w) || self.has_extension_of(w)
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.cylinders.iter().all(|c| !large.meets_cylinder(c))
    }

    pub(crate) fn from_canonical(cylinders: BTreeSet<Word>) -> Self {
        ClopenSet { cylinders }
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.cylinders.iter()).finish()
    }
}

/// A one-step subshift of finite type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SftSpace {
    names: Vec<String>,
    transitions: Vec<Vec<bool>>,
    initial: Vec<bool>,
    successors: Vec<Vec<Letter>>,
    initial_letters: Vec<Letter>,
}

impl fmt::Debug for SftSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SftSpace")
            .field("letters", &self.names)
            .finish()
    }
}

fn valid_letter_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !"[]|.*+:#/()^,;=-<>".contains(c))
}

/// Validates a space with letters named `0, 1, …`.
pub fn validate_space(
    alphabet_size: usize,
    transitions: Vec<Vec<bool>>,
    initial: Vec<bool>,
) -> Result<SftSpace, SpaceError> {
    let names = (0..alphabet_size).map(|i| i.to_string()).collect();
    SftSpace::new(names, transitions, initial)
}

impl SftSpace {
    /// Builds a space from letter names, the successor matrix and the allowed
    /// initial letters. Letter names must form a prefix-free code so that
    /// words written by concatenating names parse uniquely.
    pub fn new(
        names: Vec<String>,
        transitions: Vec<Vec<bool>>,
        initial: Vec<bool>,
    ) -> Result<Self, SpaceError> {
        let k = names.len();
        if k == 0 || k > MAX_ALPHABET {
            return Err(SpaceError::ShapeMismatch(format!(
                "alphabet size {k} outside 1..={MAX_ALPHABET}"
            )));
        }
        if transitions.len() != k || transitions.iter().any(|row| row.len() != k) {
            return Err(SpaceError::ShapeMismatch(format!(
                "transition matrix is not {k}x{k}"
            )));
        }
        if initial.len() != k {
            return Err(SpaceError::ShapeMismatch(format!(
                "initial vector has length {}, expected {k}",
                initial.len()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if !valid_letter_name(a) {
                return Err(SpaceError::BadLetterName(a.clone()));
            }
            for b in &names[i + 1..] {
                if a.starts_with(b.as_str()) || b.starts_with(a.as_str()) {
                    return Err(SpaceError::BadLetterName(format!(
                        "{a} / {b} (names must be prefix-free)"
                    )));
                }
            }
        }
        let successors: Vec<Vec<Letter>> = transitions
            .iter()
            .map(|row| (0..k).filter(|&j| row[j]).map(|j| j as Letter).collect())
            .collect();
        let initial_letters: Vec<Letter> = (0..k)
            .filter(|&j| initial[j])
            .map(|j| j as Letter)
            .collect();
        if initial_letters.is_empty() {
            return Err(SpaceError::EmptySpace);
        }
        // Dead ends are rejected only among letters that can actually occur;
        // a letter unreachable from `initial` never appears in a point.
        let mut reachable = vec![false; k];
        let mut stack: Vec<Letter> = initial_letters.clone();
        while let Some(l) = stack.pop() {
            if std::mem::replace(&mut reachable[l as usize], true) {
                continue;
            }
            stack.extend(successors[l as usize].iter().copied());
        }
        for i in 0..k {
            if successors[i].is_empty() && (reachable[i] || initial[i]) {
                return Err(SpaceError::DeadEnd(names[i].clone()));
            }
        }
        Ok(SftSpace {
            names,
            transitions,
            initial,
            successors,
            initial_letters,
        })
    }

    /// The full shift on the given letter names.
    pub fn full_shift(names: &[&str]) -> Result<Self, SpaceError> {
        let k = names.len();
        SftSpace::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![vec![true; k]; k],
            vec![true; k],
        )
    }

    pub fn alphabet_size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Letter)
    }

    pub fn transitions(&self) -> &[Vec<bool>] {
        &self.transitions
    }

    pub fn initial(&self) -> &[bool] {
        &self.initial
    }

    pub fn allows(&self, from: Letter, to: Letter) -> bool {
        self.transitions[from as usize][to as usize]
    }

    /// Letters that may follow `w` (the initial letters when `w` is empty).
    pub fn successors(&self, w: &[Letter]) -> &[Letter] {
        match w.last() {
            None => &self.initial_letters,
            Some(&l) => &self.successors[l as usize],
        }
    }

    pub fn successors_of_letter(&self, l: Letter) -> &[Letter] {
        &self.successors[l as usize]
    }

    pub fn is_admissible(&self, w: &[Letter]) -> bool {
        match w.first() {
            None => true,
            Some(&first) => {
                (first as usize) < self.names.len()
                    && self.initial[first as usize]
                    && w.windows(2)
                        .all(|p| (p[1] as usize) < self.names.len() && self.allows(p[0], p[1]))
            }
        }
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<(), SpaceError> {
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(SpaceError::InadmissibleWord(self.format_word(w)))
        }
    }

    /// Checks that every cylinder of `a` is admissible and that `a` is in
    /// canonical form over this space.
    pub fn check_set(&self, a: &ClopenSet) -> Result<(), SpaceError> {
        for c in a.cylinders() {
            self.check_word(c)?;
        }
        if self.canonicalize_unchecked(a.cylinders().cloned()) != *a {
            return Err(SpaceError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|&l| {
                self.names
                    .get(l as usize)
                    .map(String::as_str)
                    .unwrap_or("?")
            })
            .collect()
    }

    /// Parses a concatenation of letter names; `.` or the empty string is the
    /// empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, SpaceError> {
        if text == "." {
            return Ok(Word::empty());
        }
        let mut rest = text;
        let mut out = Vec::new();
        'outer: while !rest.is_empty() {
            for (i, n) in self.names.iter().enumerate() {
                if let Some(r) = rest.strip_prefix(n.as_str()) {
                    out.push(i as Letter);
                    rest = r;
                    continue 'outer;
                }
            }
            return Err(SpaceError::UnknownLetter(text.to_string()));
        }
        Ok(Word(out))
    }

    /// Parses and checks an admissible word.
    pub fn parse_admissible(&self, text: &str) -> Result<Word, SpaceError> {
        let w = self.parse_word(text)?;
        self.check_word(&w)?;
        Ok(w)
    }

    /// Formats a clopen set as a literal: cylinders in brackets joined by
    /// `|`; `[]` is the whole space and `empty` the empty set.
    pub fn format_set(&self, a: &ClopenSet) -> String {
        if a.is_empty() {
            return "empty".to_string();
        }
        a.cylinders()
            .map(|c| format!("[{}]", self.format_word(c)))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Parses a clopen-set literal (see [`SftSpace::format_set`]); the result
    /// is canonical.
    pub fn parse_set(&self, text: &str) -> Result<ClopenSet, SpaceError> {
        let text = text.trim();
        if text == "empty" {
            return Ok(ClopenSet::empty());
        }
        let mut words = Vec::new();
        for part in text.split('|') {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| SpaceError::BadLiteral(text.to_string()))?;
            words.push(self.parse_admissible(inner)?);
        }
        self.canonicalize(words)
    }

    /// All admissible words of length exactly `depth`, in lexicographic order.
    pub fn words_of_length(&self, depth: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.extend_into(&Word::empty(), depth, &mut out);
        out
    }

    fn extend_into(&self, w: &Word, depth: usize, out: &mut Vec<Word>) {
        if w.len() >= depth {
            out.push(w.clone());
            return;
        }
        for &c in self.successors(w) {
            self.extend_into(&w.child(c), depth, out);
        }
    }

    /// Canonical form of a union of cylinders.
    pub fn canonicalize<I: IntoIterator<Item = Word>>(
        &self,
        words: I,
    ) -> Result<ClopenSet, SpaceError> {
        let words: Vec<Word> = words.into_iter().collect();
        for w in &words {
            self.check_word(w)?;
        }
        Ok(self.canonicalize_unchecked(words))
    }

    pub(crate) fn canonicalize_unchecked<I: IntoIterator<Item = Word>>(
        &self,
        words: I,
    ) -> ClopenSet {
        let all: BTreeSet<Word> = words.into_iter().collect();
        // Drop words with a proper prefix already present. In sorted order a
        // word's prefixes precede it, so one forward pass suffices.
        let mut kept: Vec<Word> = Vec::with_capacity(all.len());
        for w in all {
            if let Some(last) = kept.last() {
                if last.is_prefix_of(&w) {
                    continue;
                }
            }
            kept.push(w);
        }
        let max_len = kept.iter().map(|w| w.len()).max().unwrap_or(0);
        let mut levels: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); max_len + 1];
        for w in kept {
            let l = w.len();
            levels[l].insert(w);
        }
        for len in (1..=max_len).rev() {
            let level = std::mem::take(&mut levels[len]);
            let mut by_parent: BTreeMap<Word, Vec<Letter>> = BTreeMap::new();
            for w in level {
                let last = w[w.len() - 1];
                by_parent
                    .entry(Word(w[..w.len() - 1].to_vec()))
                    .or_default()
                    .push(last);
            }
            let mut remaining = BTreeSet::new();
            for (parent, mut kids) in by_parent {
                kids.sort_unstable();
                if kids.as_slice() == self.successors(&parent) {
                    levels[len - 1].insert(parent);
                } else {
                    remaining.extend(kids.into_iter().map(|k| parent.child(k)));
                }
            }
            levels[len] = remaining;
        }
        ClopenSet::from_canonical(levels.into_iter().flatten().collect())
    }

    /// The canonical set `[w]`.
    pub fn cylinder(&self, w: &[Letter]) -> Result<ClopenSet, SpaceError> {
        self.canonicalize(std::iter::once(Word::from(w)))
    }

    pub fn union(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        self.canonicalize_unchecked(a.cylinders().chain(b.cylinders()).cloned())
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a ClopenSet>>(&self, sets: I) -> ClopenSet {
        self.canonicalize_unchecked(sets.into_iter().flat_map(|s| s.cylinders().cloned()))
    }

    pub fn intersection(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for c in a.cylinders() {
            if b.has_prefix_of(c) {
                out.push(c.clone());
            } else {
                out.extend(b.extensions_of(c).cloned());
            }
        }
        self.canonicalize_unchecked(out)
    }

    pub fn complement(&self, a: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        self.complement_below(&Word::empty(), a, &mut out);
        self.canonicalize_unchecked(out)
    }

    fn complement_below(&self, p: &Word, a: &ClopenSet, out: &mut Vec<Word>) {
        if a.cylinders.contains(p.letters()) {
            return;
        }
        if !a.has_extension_of(p) {
            out.push(p.clone());
            return;
        }
        for &c in self.successors(p) {
            self.complement_below(&p.child(c), a, out);
        }
    }

    pub fn difference(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        self.intersection(a, &self.complement(b))
    }

    /// Dispatches a boolean operation; `Complement` ignores `b`, the others
    /// require it.
    pub fn clopen_algebra(
        &self,
        op: SetOp,
        a: &ClopenSet,
        b: Option<&ClopenSet>,
    ) -> Result<ClopenSet, SpaceError> {
        self.check_set(a)?;
        if let Some(b) = b {
            self.check_set(b)?;
        }
        let need_b =
            || b.ok_or_else(|| SpaceError::ShapeMismatch("operation needs two operands".into()));
        Ok(match op {
            SetOp::Union => self.union(a, need_b()?),
            SetOp::Intersection => self.intersection(a, need_b()?),
            SetOp::Complement => self.complement(a),
            SetOp::Difference => self.difference(a, need_b()?),
        })
    }

    /// Whether the cylinder `[w]` is contained in `a`.
    pub fn cylinder_in(&self, w: &[Letter], a: &ClopenSet) -> bool {
        if a.has_prefix_of(w) {
            return true;
        }
        if !a.has_extension_of(w) {
            return false;
        }
        let mut buf = Word::from(w);
        self.successors(w).to_vec().into_iter().all(|c| {
            buf.0.push(c);
            let r = self.cylinder_in(&buf, a);
            buf.0.pop();
            r
        })
    }

    pub fn is_subset(&self, a: &ClopenSet, b: &ClopenSet) -> bool {
        a.cylinders().all(|c| self.cylinder_in(c, b))
    }

    /// The admissible depth-`depth` cylinders whose union is `a`.
    pub fn refine(&self, a: &ClopenSet, depth: usize) -> Result<Vec<Word>, SpaceError> {
        let needed = a.max_len();
        if depth < needed {
            return Err(SpaceError::DepthTooSmall { depth, needed });
        }
        let mut out = Vec::new();
        for c in a.cylinders() {
            self.extend_into(c, depth, &mut out);
        }
        Ok(out)
    }

    /// Refines a single cylinder to the given depth (no-op when already
    /// deeper).
    pub fn refine_word(&self, w: &Word, depth: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.extend_into(w, depth, &mut out);
        out
    }

    pub fn compare_clopen(&self, a: &ClopenSet, b: &ClopenSet) -> SetRelation {
        if a == b {
            return SetRelation::Equal;
        }
        if a.is_disjoint(b) {
            return SetRelation::Disjoint;
        }
        if self.is_subset(a, b) {
            SetRelation::Subset
        } else if self.is_subset(b, a) {
            SetRelation::Superset
        } else {
            SetRelation::Overlapping
        }
    }
}
