//! Locally constant functions on the space with values in an additive monoid.
//!
//! A [`StepFunction`] is stored as a canonical list of disjoint cylinders with
//! nonzero values; sibling cylinders carrying the same value are merged into
//! their parent, so equal functions have equal representations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::sft::{ClopenSet, Letter, SftSpace, Word};

/// Values a step function may take.
pub trait StepValue: Clone + PartialEq + Zero + fmt::Debug {}
impl<T: Clone + PartialEq + Zero + fmt::Debug> StepValue for T {}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepFunction<V> {
    terms: BTreeMap<Word, V>,
}

impl<V: fmt::Debug> fmt::Debug for StepFunction<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<V: StepValue> Default for StepFunction<V> {
    fn default() -> Self {
        StepFunction {
            terms: BTreeMap::new(),
        }
    }
}

impl<V: StepValue> StepFunction<V> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `value` times the indicator of `set`.
    pub fn indicator_scaled(set: &ClopenSet, value: V) -> Self {
        if value.is_zero() {
            return Self::zero();
        }
        StepFunction {
            terms: set
                .cylinders()
                .map(|c| (c.clone(), value.clone()))
                .collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &V)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Sum of possibly overlapping weighted cylinders.
    pub fn from_terms<I>(space: &SftSpace, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, V)>,
    {
        let mut acc = Self::zero();
        for (w, v) in terms {
            if v.is_zero() {
                continue;
            }
            let single = StepFunction {
                terms: std::iter::once((w, v)).collect(),
            };
            acc = acc.combine(space, &single, |a, b| a.clone() + b.clone());
        }
        acc
    }

    /// Value at every point of `[w]`, or `None` when the function is not
    /// constant there.
    pub fn value_on(&self, w: &[Letter]) -> Option<V> {
        for k in 0..=w.len() {
            if let Some(v) = self.terms.get(&w[..k]) {
                return Some(v.clone());
            }
        }
        let lower = self
            .terms
            .range::<[Letter], _>((std::ops::Bound::Included(w), std::ops::Bound::Unbounded))
            .next();
        match lower {
            Some((c, _)) if c.starts_with(w) => None,
            _ => Some(V::zero()),
        }
    }

    /// Pointwise combination `op(self, other)`; `op(0, 0)` must be 0.
    pub fn combine<F>(&self, space: &SftSpace, other: &Self, op: F) -> Self
    where
        F: Fn(&V, &V) -> V,
    {
        let mut out = Vec::new();
        self.combine_below(space, other, &Word::empty(), None, None, &op, &mut out);
        canonical(space, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn combine_below<F>(
        &self,
        space: &SftSpace,
        other: &Self,
        p: &Word,
        mut va: Option<V>,
        mut vb: Option<V>,
        op: &F,
        out: &mut Vec<(Word, V)>,
    ) where
        F: Fn(&V, &V) -> V,
    {
        if va.is_none() {
            va = resolve(&self.terms, p);
        }
        if vb.is_none() {
            vb = resolve(&other.terms, p);
        }
        match (&va, &vb) {
            (Some(a), Some(b)) => {
                let v = op(a, b);
                if !v.is_zero() {
                    out.push((p.clone(), v));
                }
            }
            _ => {
                for &c in space.successors(p) {
                    self.combine_below(space, other, &p.child(c), va.clone(), vb.clone(), op, out);
                }
            }
        }
    }

    pub fn add(&self, space: &SftSpace, other: &Self) -> Self {
        self.combine(space, other, |a, b| a.clone() + b.clone())
    }

    /// Applies `f` to every value (f(0) must be 0).
    pub fn map_values<F: Fn(&V) -> V>(&self, space: &SftSpace, f: F) -> Self {
        canonical(
            space,
            self.terms.iter().map(|(w, v)| (w.clone(), f(v))).collect(),
        )
    }

    /// Support as a clopen set.
    pub fn support(&self, space: &SftSpace) -> ClopenSet {
        space.canonicalize_unchecked(self.terms.keys().cloned())
    }

    /// Whether `pred(self(x), other(x))` holds at every point.
    pub fn all_pointwise<F>(&self, space: &SftSpace, other: &Self, pred: F) -> bool
    where
        F: Fn(&V, &V) -> bool,
    {
        let mut ok = true;
        self.visit_pairs(space, other, &Word::empty(), None, None, &mut |a, b| {
            ok &= pred(a, b)
        });
        ok
    }

    fn visit_pairs<F: FnMut(&V, &V)>(
        &self,
        space: &SftSpace,
        other: &Self,
        p: &Word,
        mut va: Option<V>,
        mut vb: Option<V>,
        f: &mut F,
    ) {
        if va.is_none() {
            va = resolve(&self.terms, p);
        }
        if vb.is_none() {
            vb = resolve(&other.terms, p);
        }
        match (&va, &vb) {
            (Some(a), Some(b)) => f(a, b),
            _ => {
                for &c in space.successors(p) {
                    self.visit_pairs(space, other, &p.child(c), va.clone(), vb.clone(), f);
                }
            }
        }
    }
}

impl<V: StepValue + Ord> StepFunction<V> {
    /// Largest value taken (zero for the zero function).
    pub fn max_value(&self) -> V {
        self.terms.values().cloned().max().unwrap_or_else(V::zero)
    }
}

/// The value on all of `[p]` if the function is constant there given that no
/// term strictly above `p` applies; `None` if terms lie strictly below `p`.
fn resolve<V: StepValue>(terms: &BTreeMap<Word, V>, p: &[Letter]) -> Option<V> {
    if let Some(v) = terms.get(p) {
        return Some(v.clone());
    }
    let next = terms
        .range::<[Letter], _>((std::ops::Bound::Excluded(p), std::ops::Bound::Unbounded))
        .next();
    match next {
        Some((c, _)) if c.starts_with(p) => None,
        _ => Some(V::zero()),
    }
}

/// Canonicalizes disjoint weighted cylinders: zero terms dropped, complete
/// sibling groups with equal values merged bottom-up.
pub(crate) fn canonical<V: StepValue>(space: &SftSpace, terms: Vec<(Word, V)>) -> StepFunction<V> {
    let max_len = terms.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
    let mut levels: Vec<BTreeMap<Word, V>> = vec![BTreeMap::new(); max_len + 1];
    for (w, v) in terms {
        if !v.is_zero() {
            let l = w.len();
            levels[l].insert(w, v);
        }
    }
    for len in (1..=max_len).rev() {
        let level = std::mem::take(&mut levels[len]);
        let mut by_parent: BTreeMap<Word, Vec<(Letter, V)>> = BTreeMap::new();
        for (w, v) in level {
            let last = w[w.len() - 1];
            by_parent
                .entry(Word::from(&w[..w.len() - 1]))
                .or_default()
                .push((last, v));
        }
        let mut remaining = BTreeMap::new();
        for (parent, kids) in by_parent {
            let letters: BTreeSet<Letter> = kids.iter().map(|(l, _)| *l).collect();
            let complete = letters.len() == space.successors(&parent).len()
                && space
                    .successors(&parent)
                    .iter()
                    .all(|l| letters.contains(l));
            if complete && kids.iter().all(|(_, v)| *v == kids[0].1) {
                levels[len - 1].insert(parent, kids[0].1.clone());
            } else {
                for (l, v) in kids {
                    remaining.insert(parent.child(l), v);
                }
            }
        }
        levels[len] = remaining;
    }
    StepFunction {
        terms: levels.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::tests::{binary, free2};

    fn w(s: &SftSpace, t: &str) -> Word {
        s.parse_word(t).unwrap()
    }

    #[test]
    fn sums_merge_and_cancel() {
        let s = binary();
        let f = StepFunction::from_terms(&s, [(w(&s, "0"), 1i64), (w(&s, "1"), 1)]);
        assert_eq!(f.terms().collect::<Vec<_>>(), vec![(&Word::empty(), &1)]);
        let g = StepFunction::from_terms(&s, [(w(&s, "."), 2i64), (w(&s, "01"), -2)]);
        assert_eq!(g.value_on(&w(&s, "01")), Some(0));
        assert_eq!(g.value_on(&w(&s, "00")), Some(2));
        assert_eq!(g.value_on(&w(&s, "0")), None);
        assert!(g.add(&s, &g.map_values(&s, |v| -v)).is_zero());
    }

    #[test]
    fn overlapping_terms_are_summed() {
        let s = free2();
        let f = StepFunction::from_terms(&s, [(w(&s, "a"), 1u32), (w(&s, "aa"), 1)]);
        assert_eq!(f.value_on(&w(&s, "aa")), Some(2));
        assert_eq!(f.value_on(&w(&s, "ab")), Some(1));
        assert_eq!(f.value_on(&w(&s, "b")), Some(0));
        assert_eq!(f.max_value(), 2);
        assert!(f.all_pointwise(
            &s,
            &StepFunction::indicator_scaled(&ClopenSet::whole(), 2),
            |a, b| a <= b
        ));
        assert!(!f.all_pointwise(
            &s,
            &StepFunction::indicator_scaled(&ClopenSet::whole(), 1),
            |a, b| a <= b
        ));
    }
}
