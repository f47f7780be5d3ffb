//! Subequivalence `F ≺ O` of clopen sets: exact scheme verification, bounded
//! witness search, and the derived paradoxicality, filling, boundary and
//! tower checks.
//!
//! Every search is three-valued. A found witness is re-checked by
//! [`verify_scheme`]; `NotFound` only means the bounds ran out; `Refuted`
//! carries an invariant content that rules out any witness.

mod checks;
mod packing;
mod scheme;

use std::collections::HashSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::action::{enumerate_elements, Action, ActionError, ElementCatalog, GroupWord};
use crate::measures::{content_at_depths, InvariantContent, MeasureError, Normalization};
use crate::par::Execution;
use crate::sft::{ClopenSet, SpaceError, Word};
use crate::step::StepFunction;

pub use checks::{
    check_n_filling, check_strong_boundary, find_open_tower, verify_filling_cover, BoundaryEntry,
    BoundaryReport, CheckFailure, CheckVerdict, FillingEntry, FillingReport,
};
pub use scheme::{compose_schemes, restrict, verify_scheme, SchemeViolation, SubequivalenceScheme};

use packing::{Candidate, Packing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComparisonError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("scheme does not verify: {0}")]
    SchemeInvalid(SchemeViolation),
    #[error("hypothesis mismatch: {0}")]
    HypothesisMismatch(String),
    #[error("no paradoxical witness for the target set within the bounds")]
    NoParadoxicalWitness,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("fragment has {count} instances, above the limit {limit}")]
    FragmentTooLarge { count: u128, limit: u128 },
}

/// Limits for every bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    /// Maximum length of piece cylinders.
    pub depth: usize,
    /// Maximum length of group words.
    pub word_length: usize,
    /// Maximum number of backtracking assignments.
    pub node_budget: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            depth: 3,
            word_length: 4,
            node_budget: 1_000_000,
        }
    }
}

impl SearchBounds {
    pub fn new(
        depth: usize,
        word_length: usize,
        node_budget: u64,
    ) -> Result<Self, ComparisonError> {
        let b = SearchBounds {
            depth,
            word_length,
            node_budget,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ComparisonError> {
        if self.depth == 0 || self.word_length == 0 || self.node_budget == 0 {
            return Err(ComparisonError::InvalidBounds(format!(
                "{self:?}: all bounds must be positive"
            )));
        }
        Ok(())
    }

    /// One more level of depth and word length, twice the budget.
    pub fn enlarged(&self) -> Self {
        SearchBounds {
            depth: self.depth + 1,
            word_length: self.word_length + 1,
            node_budget: self.node_budget.saturating_mul(2),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub budget_exhausted: bool,
}

impl SearchStats {
    fn absorb(&mut self, nodes: u64, exhausted: bool) {
        self.nodes += nodes;
        self.budget_exhausted |= exhausted;
    }
}

/// Result of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<W> {
    Found(W),
    /// Bounds ran out; says nothing about existence.
    NotFound(SearchStats),
    /// An invariant content under which no witness can exist.
    Refuted(InvariantContent),
}

impl<W> SearchOutcome<W> {
    pub fn found(self) -> Option<W> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchOutcome::Refuted(_))
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> SearchOutcome<V> {
        match self {
            SearchOutcome::Found(w) => SearchOutcome::Found(f(w)),
            SearchOutcome::NotFound(s) => SearchOutcome::NotFound(s),
            SearchOutcome::Refuted(c) => SearchOutcome::Refuted(c),
        }
    }
}

/// `A ≺ O1` and `A ≺ O2` with `O1`, `O2` disjoint inside `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParadoxicalWitness {
    pub set: ClopenSet,
    pub o1: ClopenSet,
    pub o2: ClopenSet,
    pub s1: SubequivalenceScheme,
    pub s2: SubequivalenceScheme,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParadoxViolation {
    /// Scheme 1 or 2 fails.
    Scheme(u8, SchemeViolation),
    /// A scheme's source or target is not the declared set.
    Mismatch(u8),
    TargetsOverlap,
    TargetOutside,
}

/// `n` pairwise disjoint targets inside `O`, each receiving `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSubequivalence {
    pub targets: Vec<ClopenSet>,
    pub schemes: Vec<SubequivalenceScheme>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakOutcome {
    Found(SubequivalenceScheme),
    NotFound(SearchStats),
    /// No translate cover of `F` by `O` within the word bound.
    NotCovered,
}

pub fn verify_paradoxical(
    action: &Action,
    w: &ParadoxicalWitness,
) -> Result<Result<(), ParadoxViolation>, ComparisonError> {
    let space = action.space();
    for (k, s, o) in [(1u8, &w.s1, &w.o1), (2, &w.s2, &w.o2)] {
        if s.source != w.set || &s.target != o {
            return Ok(Err(ParadoxViolation::Mismatch(k)));
        }
        if let Err(v) = verify_scheme(action, s)? {
            return Ok(Err(ParadoxViolation::Scheme(k, v)));
        }
    }
    if !w.o1.is_disjoint(&w.o2) {
        return Ok(Err(ParadoxViolation::TargetsOverlap));
    }
    if !space.is_subset(&space.union(&w.o1, &w.o2), &w.set) {
        return Ok(Err(ParadoxViolation::TargetOutside));
    }
    Ok(Ok(()))
}

pub fn verify_multi(
    action: &Action,
    f: &ClopenSet,
    o: &ClopenSet,
    m: &MultiSubequivalence,
) -> Result<bool, ComparisonError> {
    let space = action.space();
    if m.targets.len() != m.schemes.len() {
        return Ok(false);
    }
    for (t, s) in m.targets.iter().zip(&m.schemes) {
        if &s.source != f
            || &s.target != t
            || !space.is_subset(t, o)
            || verify_scheme(action, s)?.is_err()
        {
            return Ok(false);
        }
    }
    for i in 0..m.targets.len() {
        for j in i + 1..m.targets.len() {
            if !m.targets[i].is_disjoint(&m.targets[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn indicator(set: &ClopenSet) -> StepFunction<u32> {
    StepFunction::indicator_scaled(set, 1)
}

fn set_normalization(a: &ClopenSet) -> Normalization {
    if a.is_whole() {
        Normalization::Probability
    } else {
        Normalization::Set(a.clone())
    }
}

/// An action with fixed bounds and a lazily built element catalog.
pub struct SearchContext<'a> {
    action: &'a Action,
    bounds: SearchBounds,
    exec: Execution,
    catalog: OnceLock<ElementCatalog>,
}

impl<'a> SearchContext<'a> {
    pub fn new(action: &'a Action, bounds: SearchBounds) -> Result<Self, ComparisonError> {
        bounds.validate()?;
        Ok(SearchContext {
            action,
            bounds,
            exec: Execution::default(),
            catalog: OnceLock::new(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn action(&self) -> &'a Action {
        self.action
    }

    pub fn bounds(&self) -> SearchBounds {
        self.bounds
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    /// Group elements of word length at most `bounds.word_length`.
    pub fn catalog(&self) -> &ElementCatalog {
        self.catalog
            .get_or_init(|| enumerate_elements(self.action, self.bounds.word_length, self.exec))
    }

    /// Distinct images of cylinder `p` inside each layer, first word wins;
    /// the layer index is the candidate tag.
    fn placements(&self, p: &Word, layers: &[ClopenSet]) -> Vec<Candidate> {
        let space = self.action.space();
        let mut out = Vec::new();
        for (tag, layer) in layers.iter().enumerate() {
            let mut seen = HashSet::new();
            for (k, e) in self.catalog().entries.iter().enumerate() {
                let image = e.exchange.image_of_cylinder(space, p);
                if space.is_subset(&image, layer) && seen.insert(image.clone()) {
                    out.push(Candidate {
                        tag: tag as u32,
                        image,
                        choice: k as u32,
                    });
                }
            }
        }
        out
    }

    /// Assigns every piece a word moving it into one of `layers`, images in
    /// the same layer pairwise disjoint. `twin_next` marks interchangeable
    /// pieces (same cylinder).
    pub(crate) fn pack_layers(
        &self,
        pieces: &[Word],
        twin_next: Vec<Option<usize>>,
        layers: &[ClopenSet],
        budget: u64,
    ) -> (Option<Vec<GroupWord>>, u64, bool) {
        let mut cache: std::collections::HashMap<&Word, Vec<Candidate>> =
            std::collections::HashMap::new();
        let items = pieces
            .iter()
            .map(|p| {
                cache
                    .entry(p)
                    .or_insert_with(|| self.placements(p, layers))
                    .clone()
            })
            .collect();
        let packing = Packing { items, twin_next };
        let r = packing::solve(&packing, budget, self.exec);
        let Some(a) = r.assignment else {
            return (None, r.nodes, r.exhausted);
        };
        let catalog = self.catalog();
        let words = a
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                catalog.entries[packing.items[i][x].choice as usize]
                    .word
                    .clone()
            })
            .collect();
        (Some(words), r.nodes, false)
    }

    /// Places `copies` copies of `pieces` disjointly inside `target`.
    fn pack(
        &self,
        pieces: &[Word],
        copies: usize,
        target: &ClopenSet,
        budget: u64,
    ) -> (Option<Vec<Vec<(Word, GroupWord)>>>, u64, bool) {
        let n = pieces.len();
        let all: Vec<Word> = (0..copies).flat_map(|_| pieces.iter().cloned()).collect();
        let twin_next = (0..all.len())
            .map(|i| (i + n < all.len()).then_some(i + n))
            .collect();
        let (found, nodes, exhausted) =
            self.pack_layers(&all, twin_next, std::slice::from_ref(target), budget);
        let schemes = found.map(|words| {
            let mut words = words.into_iter();
            (0..copies)
                .map(|_| pieces.iter().cloned().zip(words.by_ref().take(n)).collect())
                .collect()
        });
        (schemes, nodes, exhausted)
    }

    /// Iterative deepening over piece depth; the node budget is shared
    /// across depths.
    fn deepen<T>(
        &self,
        source: &ClopenSet,
        mut attempt: impl FnMut(&[Word], u64) -> Result<(Option<T>, u64, bool), ComparisonError>,
    ) -> Result<Result<T, SearchStats>, ComparisonError> {
        let space = self.action.space();
        let mut stats = SearchStats::default();
        for depth in source.max_len()..=self.bounds.depth.max(source.max_len()) {
            let remaining = self.bounds.node_budget.saturating_sub(stats.nodes);
            if remaining == 0 {
                stats.budget_exhausted = true;
                break;
            }
            let pieces = space.refine(source, depth)?;
            let (found, nodes, exhausted) = attempt(&pieces, remaining)?;
            stats.absorb(nodes, exhausted);
            if let Some(t) = found {
                return Ok(Ok(t));
            }
        }
        Ok(Err(stats))
    }

    fn refute(&self, norm: &Normalization) -> Option<InvariantContent> {
        content_at_depths(self.action, norm, self.bounds.depth)
    }

    pub fn search_subequivalence(
        &self,
        f: &ClopenSet,
        o: &ClopenSet,
    ) -> Result<SearchOutcome<SubequivalenceScheme>, ComparisonError> {
        let space = self.action.space();
        space.check_set(f)?;
        space.check_set(o)?;
        if f.is_empty() {
            return Ok(SearchOutcome::Found(SubequivalenceScheme::identity(f, o)));
        }
        if o.is_empty() {
            return Err(ComparisonError::InvalidArgument(
                "target is empty but source is not".into(),
            ));
        }
        let norm = Normalization::Separation {
            lhs: indicator(f),
            rhs: indicator(o),
        };
        if let Some(mu) = self.refute(&norm) {
            return Ok(SearchOutcome::Refuted(mu));
        }
        let r = self.deepen(f, |pieces, budget| {
            let (found, nodes, ex) = self.pack(pieces, 1, o, budget);
            let scheme = found.map(|mut s| SubequivalenceScheme {
                source: f.clone(),
                target: o.clone(),
                pieces: s.remove(0),
            });
            Ok((scheme, nodes, ex))
        })?;
        match r {
            Ok(s) => {
                checked(self.action, &s)?;
                Ok(SearchOutcome::Found(s))
            }
            Err(stats) => Ok(SearchOutcome::NotFound(stats)),
        }
    }

    pub fn check_paradoxical(
        &self,
        a: &ClopenSet,
    ) -> Result<SearchOutcome<ParadoxicalWitness>, ComparisonError> {
        let space = self.action.space();
        space.check_set(a)?;
        if a.is_empty() {
            return Err(ComparisonError::InvalidArgument(
                "paradoxicality of the empty set".into(),
            ));
        }
        if let Some(mu) = self.refute(&set_normalization(a)) {
            return Ok(SearchOutcome::Refuted(mu));
        }
        let r = self.deepen(a, |pieces, budget| {
            let (found, nodes, ex) = self.pack(pieces, 2, a, budget);
            let Some(mut copies) = found else {
                return Ok((None, nodes, ex));
            };
            let second = copies.pop().expect("two copies");
            let first = copies.pop().expect("two copies");
            let s1 = SubequivalenceScheme {
                source: a.clone(),
                target: a.clone(),
                pieces: first,
            }
            .tightened(self.action)?;
            let s2 = SubequivalenceScheme {
                source: a.clone(),
                target: a.clone(),
                pieces: second,
            }
            .tightened(self.action)?;
            let w = ParadoxicalWitness {
                set: a.clone(),
                o1: s1.target.clone(),
                o2: s2.target.clone(),
                s1,
                s2,
            };
            Ok((Some(w), nodes, ex))
        })?;
        match r {
            Ok(w) => match verify_paradoxical(self.action, &w)? {
                Ok(()) => Ok(SearchOutcome::Found(w)),
                Err(v) => Err(ComparisonError::HypothesisMismatch(format!(
                    "search produced an invalid witness: {v:?}"
                ))),
            },
            Err(stats) => Ok(SearchOutcome::NotFound(stats)),
        }
    }

    /// `n` disjoint copies of `F` inside `O` by repeated halving of `O`
    /// along a paradoxical witness.
    pub fn multi_subequivalence(
        &self,
        f: &ClopenSet,
        o: &ClopenSet,
        n: usize,
        witness: Option<&ParadoxicalWitness>,
    ) -> Result<MultiSubequivalence, ComparisonError> {
        let space = self.action.space();
        space.check_set(f)?;
        space.check_set(o)?;
        if n == 0 {
            return Err(ComparisonError::InvalidArgument(
                "n must be at least 1".into(),
            ));
        }
        if !space.is_subset(f, o) {
            return Err(ComparisonError::HypothesisMismatch(
                "source is not inside the target set".into(),
            ));
        }
        if n == 1 {
            let s = SubequivalenceScheme::identity(f, o);
            return Ok(MultiSubequivalence {
                targets: vec![o.clone()],
                schemes: vec![s],
            });
        }
        let found;
        let w = match witness {
            Some(w) => {
                if w.set != *o || verify_paradoxical(self.action, w)?.is_err() {
                    return Err(ComparisonError::HypothesisMismatch(
                        "witness is not a valid witness for the target set".into(),
                    ));
                }
                w
            }
            None => {
                found = self
                    .check_paradoxical(o)?
                    .found()
                    .ok_or(ComparisonError::NoParadoxicalWitness)?;
                &found
            }
        };
        let mut level = vec![SubequivalenceScheme::identity(o, o)];
        while level.len() < n {
            let mut next = Vec::with_capacity(level.len() * 2);
            for t in &level {
                for (s, half) in [(&w.s1, &w.o1), (&w.s2, &w.o2)] {
                    let inner = restrict(self.action, t, half)?;
                    next.push(compose_schemes(self.action, s, &inner)?.tightened(self.action)?);
                }
            }
            level = next;
        }
        level.truncate(n);
        let mut schemes = Vec::with_capacity(n);
        for t in &level {
            schemes.push(restrict(self.action, t, f)?.tightened(self.action)?);
        }
        let m = MultiSubequivalence {
            targets: schemes.iter().map(|s| s.target.clone()).collect(),
            schemes,
        };
        if !verify_multi(self.action, f, o, &m)? {
            return Err(ComparisonError::HypothesisMismatch(
                "doubling produced an invalid family".into(),
            ));
        }
        Ok(m)
    }

    /// Translates `h(O)` covering `F`: a single translate if one exists,
    /// otherwise a greedy cover.
    pub fn translate_cover(
        &self,
        f: &ClopenSet,
        o: &ClopenSet,
    ) -> Result<Option<Vec<GroupWord>>, ComparisonError> {
        let space = self.action.space();
        let catalog = self.catalog();
        let images: Vec<ClopenSet> = catalog
            .entries
            .iter()
            .map(|e| e.exchange.image(space, o))
            .collect();
        if !space.is_subset(f, &space.union_all(&images)) {
            return Ok(None);
        }
        if let Some(k) = images.iter().position(|img| space.is_subset(f, img)) {
            return Ok(Some(vec![catalog.entries[k].word.clone()]));
        }
        let depth = images
            .iter()
            .map(|i| i.max_len())
            .max()
            .unwrap_or(0)
            .max(f.max_len());
        let mut remaining = f.clone();
        let mut chosen = Vec::new();
        while !remaining.is_empty() {
            let best = images
                .iter()
                .enumerate()
                .map(|(k, img)| {
                    let gain = space
                        .refine(&space.intersection(&remaining, img), depth)
                        .map(|v| v.len())
                        .unwrap_or(0);
                    (gain, k)
                })
                .max_by_key(|&(gain, k)| (gain, std::cmp::Reverse(k)))
                .expect("nonempty catalog");
            chosen.push(catalog.entries[best.1].word.clone());
            remaining = space.difference(&remaining, &images[best.1]);
        }
        Ok(Some(chosen))
    }

    pub fn check_weak_paradoxical(
        &self,
        f: &ClopenSet,
        o: &ClopenSet,
    ) -> Result<WeakOutcome, ComparisonError> {
        let space = self.action.space();
        space.check_set(f)?;
        space.check_set(o)?;
        if f.is_empty() {
            return Ok(WeakOutcome::Found(SubequivalenceScheme::identity(f, o)));
        }
        if o.is_empty() {
            return Ok(WeakOutcome::NotCovered);
        }
        let Some(cover) = self.translate_cover(f, o)? else {
            return Ok(WeakOutcome::NotCovered);
        };
        let multi = match self.check_paradoxical(o)? {
            SearchOutcome::Found(w) => self.multi_subequivalence(o, o, cover.len(), Some(&w))?,
            SearchOutcome::NotFound(stats) => return Ok(WeakOutcome::NotFound(stats)),
            SearchOutcome::Refuted(_) => return Ok(WeakOutcome::NotFound(SearchStats::default())),
        };
        let mut rest = f.clone();
        let mut pieces = Vec::new();
        for (h, t) in cover.iter().zip(&multi.schemes) {
            let hx = self.action.evaluate_word(h)?;
            let part = space.intersection(&rest, &hx.image(space, o));
            rest = space.difference(&rest, &part);
            if part.is_empty() {
                continue;
            }
            let back = SubequivalenceScheme {
                source: part.clone(),
                target: o.clone(),
                pieces: part.cylinders().map(|c| (c.clone(), h.inverse())).collect(),
            };
            pieces.extend(compose_schemes(self.action, &back, t)?.pieces);
        }
        let s = SubequivalenceScheme {
            source: f.clone(),
            target: o.clone(),
            pieces: scheme::merge_pieces(space, pieces),
        };
        checked(self.action, &s)?;
        Ok(WeakOutcome::Found(s))
    }
}

fn checked(action: &Action, s: &SubequivalenceScheme) -> Result<(), ComparisonError> {
    match verify_scheme(action, s)? {
        Ok(()) => Ok(()),
        Err(v) => Err(ComparisonError::SchemeInvalid(v)),
    }
}

pub fn search_subequivalence(
    action: &Action,
    f: &ClopenSet,
    o: &ClopenSet,
    bounds: SearchBounds,
) -> Result<SearchOutcome<SubequivalenceScheme>, ComparisonError> {
    SearchContext::new(action, bounds)?.search_subequivalence(f, o)
}

pub fn check_paradoxical(
    action: &Action,
    a: &ClopenSet,
    bounds: SearchBounds,
) -> Result<SearchOutcome<ParadoxicalWitness>, ComparisonError> {
    SearchContext::new(action, bounds)?.check_paradoxical(a)
}

pub fn multi_subequivalence(
    action: &Action,
    f: &ClopenSet,
    o: &ClopenSet,
    n: usize,
    bounds: SearchBounds,
) -> Result<MultiSubequivalence, ComparisonError> {
    SearchContext::new(action, bounds)?.multi_subequivalence(f, o, n, None)
}

pub fn check_weak_paradoxical(
    action: &Action,
    f: &ClopenSet,
    o: &ClopenSet,
    bounds: SearchBounds,
) -> Result<WeakOutcome, ComparisonError> {
    SearchContext::new(action, bounds)?.check_weak_paradoxical(f, o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::builtin::{bit_permutation, f2_boundary, product_with_trivial};
    use crate::measures::evaluate_content;

    fn set(a: &Action, lit: &str) -> ClopenSet {
        a.space().parse_set(lit).unwrap()
    }

    #[test]
    fn subequivalence_search() {
        let act = f2_boundary();
        let b = SearchBounds::new(2, 1, 10_000).unwrap();
        let s = search_subequivalence(&act, &set(&act, "[b]|[B]"), &set(&act, "[a]"), b)
            .unwrap()
            .found()
            .unwrap();
        assert!(s
            .pieces
            .iter()
            .all(|(_, w)| act.format_group_word(w) == "ga"));

        let s = search_subequivalence(
            &act,
            &ClopenSet::whole(),
            &set(&act, "[a]"),
            SearchBounds::default(),
        );
        let s = s.unwrap().found().unwrap();
        assert_eq!(verify_scheme(&act, &s).unwrap(), Ok(()));

        let swap = bit_permutation(&[1, 0]).unwrap();
        match search_subequivalence(&swap, &ClopenSet::whole(), &set(&swap, "[0]"), b).unwrap() {
            SearchOutcome::Refuted(mu) => {
                let x = evaluate_content(&mu, swap.space(), &ClopenSet::whole()).unwrap();
                let o = evaluate_content(&mu, swap.space(), &set(&swap, "[0]")).unwrap();
                assert!(x > o);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn paradoxical_example() {
        let act = f2_boundary();
        let w = check_paradoxical(&act, &set(&act, "[a]"), SearchBounds::default())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(w.o1, set(&act, "[aa]"));
        assert_eq!(w.o2, set(&act, "[aba]"));
        assert_eq!(act.format_group_word(&w.s1.pieces[0].1), "ga");
        assert_eq!(act.format_group_word(&w.s2.pieces[0].1), "ga*gb");
        for a in ["[]", "[b]", "[A]|[bA]"] {
            let w = check_paradoxical(&act, &set(&act, a), SearchBounds::default())
                .unwrap()
                .found()
                .unwrap();
            assert_eq!(verify_paradoxical(&act, &w).unwrap(), Ok(()));
        }
        let swap = bit_permutation(&[1, 0]).unwrap();
        assert!(
            check_paradoxical(&swap, &set(&swap, "[0]"), SearchBounds::default())
                .unwrap()
                .is_refuted()
        );
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let act = f2_boundary();
        let a = set(&act, "[A]|[bA]");
        let run = |exec| {
            SearchContext::new(&act, SearchBounds::default())
                .unwrap()
                .with_execution(exec)
                .check_paradoxical(&a)
                .unwrap()
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }

    #[test]
    fn doubling() {
        let act = f2_boundary();
        let o = set(&act, "[a]");
        let m =
            multi_subequivalence(&act, &set(&act, "[aa]"), &o, 2, SearchBounds::default()).unwrap();
        assert!(act.space().is_subset(&m.targets[0], &set(&act, "[aa]")));
        assert!(act.space().is_subset(&m.targets[1], &set(&act, "[ab]")));
        let m =
            multi_subequivalence(&act, &set(&act, "[aa]"), &o, 4, SearchBounds::default()).unwrap();
        assert_eq!(m.targets.len(), 4);
        assert!(verify_multi(&act, &set(&act, "[aa]"), &o, &m).unwrap());
        let m =
            multi_subequivalence(&act, &set(&act, "[aa]"), &o, 1, SearchBounds::default()).unwrap();
        assert!(m.schemes[0].pieces.iter().all(|(_, w)| w.is_identity()));
    }

    #[test]
    fn weak_paradoxical() {
        let act = f2_boundary();
        match check_weak_paradoxical(
            &act,
            &ClopenSet::whole(),
            &set(&act, "[a]"),
            SearchBounds::default(),
        )
        .unwrap()
        {
            WeakOutcome::Found(s) => assert_eq!(verify_scheme(&act, &s).unwrap(), Ok(())),
            other => panic!("{other:?}"),
        }
        let prod = product_with_trivial(&act, &["0", "1"]).unwrap();
        let r = check_weak_paradoxical(
            &prod,
            &set(&prod, "[1]"),
            &set(&prod, "[0]"),
            SearchBounds::default(),
        )
        .unwrap();
        assert_eq!(r, WeakOutcome::NotCovered);
        let r = check_weak_paradoxical(
            &act,
            &ClopenSet::empty(),
            &set(&act, "[a]"),
            SearchBounds::default(),
        )
        .unwrap();
        assert!(matches!(r, WeakOutcome::Found(s) if s.pieces.is_empty()));
    }

    #[test]
    fn bounds_must_be_positive() {
        assert!(SearchBounds::new(0, 1, 1).is_err());
        assert!(SearchBounds::new(1, 1, 1).is_ok());
    }
}
