//! Prefix-exchange homeomorphisms.
//!
//! A [`PrefixExchange`] is a finite list of rules `u -> v` whose domain words
//! partition the space; a point `u·w` is sent to `v·w`. Rules are kept in a
//! normal form in which no complete family of sibling rules `p·c -> q·c`
//! survives unmerged, so two exchanges inducing the same map compare equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;

use crate::action::ActionError;
use crate::sft::{ClopenSet, Letter, SftSpace, Word};
use crate::step::{self, StepFunction, StepValue};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixExchange {
    rules: BTreeMap<Word, Word>,
}

impl fmt::Debug for PrefixExchange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.rules.iter()).finish()
    }
}

/// Checks a rule list and returns its normal form.
pub fn validate_exchange(
    space: &SftSpace,
    rules: Vec<(Word, Word)>,
) -> Result<PrefixExchange, ActionError> {
    for (u, v) in &rules {
        space.check_word(u)?;
        space.check_word(v)?;
    }
    let mut domain: Vec<&Word> = rules.iter().map(|(u, _)| u).collect();
    domain.sort();
    for pair in domain.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(ActionError::OverlappingDomain(format!(
                "{} and {}",
                space.format_word(pair[0]),
                space.format_word(pair[1])
            )));
        }
    }
    if !space
        .canonicalize_unchecked(domain.iter().map(|w| (*w).clone()))
        .is_whole()
    {
        return Err(ActionError::IncompleteDomain);
    }
    for (u, v) in &rules {
        let target = space.successors(v);
        if let Some(c) = space.successors(u).iter().find(|c| !target.contains(c)) {
            return Err(ActionError::TailMismatch(format!(
                "{} -> {} (tail letter {})",
                space.format_word(u),
                space.format_word(v),
                space.name(*c)
            )));
        }
    }
    let mut images: Vec<Word> = rules
        .iter()
        .flat_map(|(u, v)| space.successors(u).iter().map(move |&c| v.child(c)))
        .collect();
    images.sort();
    for pair in images.windows(2) {
        if pair[0].is_prefix_of(&pair[1]) {
            return Err(ActionError::NotBijective(format!(
                "images overlap at {}",
                space.format_word(&pair[1])
            )));
        }
    }
    if !space.canonicalize_unchecked(images).is_whole() {
        return Err(ActionError::NotBijective(
            "images do not cover the space".into(),
        ));
    }
    Ok(PrefixExchange::normalized(
        space,
        rules.into_iter().collect(),
    ))
}

impl PrefixExchange {
    pub fn identity() -> Self {
        PrefixExchange {
            rules: std::iter::once((Word::empty(), Word::empty())).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rules.len() == 1 && self.rules.iter().all(|(u, v)| u.is_empty() && v.is_empty())
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Word, &Word)> + '_ {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Longest word occurring in a rule.
    pub fn max_rule_len(&self) -> usize {
        self.rules
            .iter()
            .map(|(u, v)| u.len().max(v.len()))
            .max()
            .unwrap_or(0)
    }

    /// Longest domain word.
    pub fn max_domain_len(&self) -> usize {
        self.rules.keys().map(|u| u.len()).max().unwrap_or(0)
    }

    /// Merges complete sibling families bottom-up.
    fn normalized(space: &SftSpace, rules: BTreeMap<Word, Word>) -> Self {
        let max_len = rules.keys().map(|u| u.len()).max().unwrap_or(0);
        let mut levels: Vec<BTreeMap<Word, Word>> = vec![BTreeMap::new(); max_len + 1];
        for (u, v) in rules {
            let l = u.len();
            levels[l].insert(u, v);
        }
        for len in (1..=max_len).rev() {
            let level = std::mem::take(&mut levels[len]);
            let mut by_parent: BTreeMap<Word, Vec<(Letter, Word)>> = BTreeMap::new();
            for (u, v) in level {
                let last = u[u.len() - 1];
                by_parent
                    .entry(Word::from(&u[..u.len() - 1]))
                    .or_default()
                    .push((last, v));
            }
            let mut remaining = BTreeMap::new();
            for (p, kids) in by_parent {
                let letters: Vec<Letter> = kids.iter().map(|(c, _)| *c).collect();
                let merged = if letters.as_slice() == space.successors(&p) {
                    let q = kids[0].1.parent();
                    q.filter(|q| {
                        kids.iter()
                            .all(|(c, v)| v.last() == Some(c) && v[..v.len() - 1] == q[..])
                    })
                } else {
                    None
                };
                match merged {
                    Some(q) => {
                        levels[len - 1].insert(p, q);
                    }
                    None => {
                        for (c, v) in kids {
                            remaining.insert(p.child(c), v);
                        }
                    }
                }
            }
            levels[len] = remaining;
        }
        PrefixExchange {
            rules: levels.into_iter().flatten().collect(),
        }
    }

    /// The rule whose domain word is a prefix of `w`, if any.
    fn rule_above(&self, w: &[Letter]) -> Option<(&Word, &Word)> {
        (0..=w.len()).find_map(|k| self.rules.get_key_value(&w[..k]))
    }

    /// Rules whose domain word strictly extends `w`.
    fn rules_below<'a>(
        &'a self,
        w: &'a [Letter],
    ) -> impl Iterator<Item = (&'a Word, &'a Word)> + 'a {
        self.rules
            .range::<[Letter], _>((Bound::Excluded(w), Bound::Unbounded))
            .take_while(move |(u, _)| u.starts_with(w))
    }

    /// Image of the cylinder `[w]` as a disjoint list of cylinders.
    pub fn image_words(&self, space: &SftSpace, w: &[Letter]) -> Vec<Word> {
        match self.rule_above(w) {
            Some((u, v)) if u.len() < w.len() => vec![v.concat(&w[u.len()..])],
            Some((_, v)) => space.successors(w).iter().map(|&c| v.child(c)).collect(),
            None => self
                .rules_below(w)
                .flat_map(|(u, v)| space.successors(u).iter().map(move |&c| v.child(c)))
                .collect(),
        }
    }

    /// Exact image of a clopen set; the set must belong to `space`.
    pub fn apply(&self, space: &SftSpace, a: &ClopenSet) -> Result<ClopenSet, ActionError> {
        space.check_set(a)?;
        Ok(self.image(space, a))
    }

    pub(crate) fn image(&self, space: &SftSpace, a: &ClopenSet) -> ClopenSet {
        if self.is_identity() {
            return a.clone();
        }
        space.canonicalize_unchecked(a.cylinders().flat_map(|c| self.image_words(space, c)))
    }

    /// Image of a single cylinder as a canonical set.
    pub fn image_of_cylinder(&self, space: &SftSpace, w: &[Letter]) -> ClopenSet {
        space.canonicalize_unchecked(self.image_words(space, w))
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, space: &SftSpace, other: &PrefixExchange) -> PrefixExchange {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        let mut out = BTreeMap::new();
        for (u, v) in &other.rules {
            match self.rule_above(v) {
                Some((u2, v2)) => {
                    out.insert(u.clone(), v2.concat(&v[u2.len()..]));
                }
                None => {
                    let allowed = space.successors(u);
                    for (u2, v2) in self.rules_below(v) {
                        let r = &u2[v.len()..];
                        if allowed.contains(&r[0]) {
                            out.insert(u.concat(r), v2.clone());
                        }
                    }
                }
            }
        }
        PrefixExchange::normalized(space, out)
    }

    pub fn invert(&self, space: &SftSpace) -> PrefixExchange {
        if self.is_identity() {
            return self.clone();
        }
        let mut out = BTreeMap::new();
        for (u, v) in &self.rules {
            for &c in space.successors(u) {
                out.insert(v.child(c), u.child(c));
            }
        }
        PrefixExchange::normalized(space, out)
    }

    /// Whether the map is the identity at every point of `[w]`.
    pub fn fixes_cylinder(&self, w: &[Letter]) -> bool {
        match self.rule_above(w) {
            Some((u, v)) => u == v,
            None => self.rules_below(w).all(|(u, v)| u == v),
        }
    }

    /// Union of the depth-`depth` cylinders fixed pointwise.
    pub fn fixed_cylinders(&self, space: &SftSpace, depth: usize) -> ClopenSet {
        space.canonicalize_unchecked(
            space
                .words_of_length(depth)
                .into_iter()
                .filter(|w| self.fixes_cylinder(w)),
        )
    }

    /// The translate `x ↦ f(self⁻¹ x)` of a step function.
    pub fn translate<V: StepValue>(
        &self,
        space: &SftSpace,
        f: &StepFunction<V>,
    ) -> StepFunction<V> {
        if self.is_identity() {
            return f.clone();
        }
        let terms = f
            .terms()
            .flat_map(|(w, v)| {
                self.image_words(space, w)
                    .into_iter()
                    .map(move |c| (c, v.clone()))
            })
            .collect();
        step::canonical(space, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::tests::{binary, free2, table};

    pub(crate) fn rules(s: &SftSpace, pairs: &[(&str, &str)]) -> Vec<(Word, Word)> {
        pairs
            .iter()
            .map(|(u, v)| (s.parse_word(u).unwrap(), s.parse_word(v).unwrap()))
            .collect()
    }

    fn ga(s: &SftSpace) -> PrefixExchange {
        validate_exchange(
            s,
            rules(s, &[("A", "."), ("a", "aa"), ("b", "ab"), ("B", "aB")]),
        )
        .unwrap()
    }

    fn gb(s: &SftSpace) -> PrefixExchange {
        validate_exchange(
            s,
            rules(s, &[("B", "."), ("b", "bb"), ("a", "ba"), ("A", "bA")]),
        )
        .unwrap()
    }

    fn set(s: &SftSpace, lit: &str) -> ClopenSet {
        s.parse_set(lit).unwrap()
    }

    #[test]
    fn validation_examples() {
        let s = free2();
        let g = ga(&s);
        assert_eq!(g.len(), 4);
        // image cylinders partition X: check via the depth-2 membership table
        let mut hits = vec![0; s.words_of_length(2).len()];
        for (u, v) in g.rules() {
            let img = s.canonicalize_unchecked(s.successors(u).iter().map(|&c| v.child(c)));
            for (i, m) in table(&s, &img, 2).into_iter().enumerate() {
                hits[i] += m as usize;
            }
        }
        assert!(hits.iter().all(|&h| h == 1));

        let b = binary();
        let swap = validate_exchange(&b, rules(&b, &[("0", "1"), ("1", "0")])).unwrap();
        assert!(swap.compose(&b, &swap).is_identity());
        assert!(matches!(
            validate_exchange(&b, rules(&b, &[("0", "00"), ("1", "01")])),
            Err(ActionError::NotBijective(_))
        ));
        assert!(matches!(
            validate_exchange(&b, rules(&b, &[("0", "0")])),
            Err(ActionError::IncompleteDomain)
        ));
        assert!(matches!(
            validate_exchange(&b, rules(&b, &[("0", "0"), ("01", "01"), ("1", "1")])),
            Err(ActionError::OverlappingDomain(_))
        ));
        // 'a' may be followed by 'a', but 'A' may not
        assert!(matches!(
            validate_exchange(
                &s,
                rules(&s, &[("a", "A"), ("A", "a"), ("b", "b"), ("B", "B")])
            ),
            Err(ActionError::TailMismatch(_))
        ));
    }

    #[test]
    fn normal_form_merges_refined_rules() {
        let b = binary();
        let id =
            validate_exchange(&b, rules(&b, &[("00", "00"), ("01", "01"), ("1", "1")])).unwrap();
        assert!(id.is_identity());
        let swap =
            validate_exchange(&b, rules(&b, &[("00", "10"), ("01", "11"), ("1", "0")])).unwrap();
        assert_eq!(
            swap,
            validate_exchange(&b, rules(&b, &[("0", "1"), ("1", "0")])).unwrap()
        );
    }

    #[test]
    fn apply_examples() {
        let s = free2();
        let g = ga(&s);
        assert_eq!(g.apply(&s, &set(&s, "[b]")).unwrap(), set(&s, "[ab]"));
        assert_eq!(g.apply(&s, &set(&s, "[a]")).unwrap(), set(&s, "[aa]"));
        assert!(g.apply(&s, &ClopenSet::whole()).unwrap().is_whole());
        assert_eq!(
            g.apply(&s, &set(&s, "[A]")).unwrap(),
            set(&s, "[A]|[b]|[B]")
        );
    }

    #[test]
    fn compose_and_invert_examples() {
        let s = free2();
        let (a, b) = (ga(&s), gb(&s));
        let ab = a.compose(&s, &b);
        assert_eq!(ab.image(&s, &set(&s, "[a]")), set(&s, "[aba]"));
        let inv = a.invert(&s);
        assert!(a.compose(&s, &inv).is_identity());
        assert!(inv.compose(&s, &a).is_identity());
        let expected = validate_exchange(
            &s,
            rules(
                &s,
                &[
                    ("A", "AA"),
                    ("b", "Ab"),
                    ("B", "AB"),
                    ("aa", "a"),
                    ("ab", "b"),
                    ("aB", "B"),
                ],
            ),
        )
        .unwrap();
        assert_eq!(inv, expected);
        assert!(PrefixExchange::identity().invert(&s).is_identity());
        let aa = a.compose(&s, &a);
        assert_eq!(aa.image(&s, &set(&s, "[b]")), set(&s, "[aab]"));
    }

    #[test]
    fn fixed_cylinder_examples() {
        let s = free2();
        assert!(PrefixExchange::identity().fixed_cylinders(&s, 2).is_whole());
        assert!(ga(&s).fixed_cylinders(&s, 3).is_empty());
        let b = binary();
        let swap = validate_exchange(&b, rules(&b, &[("0", "1"), ("1", "0")])).unwrap();
        assert!(swap.fixed_cylinders(&b, 3).is_empty());
        let half =
            validate_exchange(&b, rules(&b, &[("00", "01"), ("01", "00"), ("1", "1")])).unwrap();
        assert_eq!(half.fixed_cylinders(&b, 2), set(&b, "[1]"));
    }

    #[test]
    fn translate_moves_values() {
        let s = free2();
        let f = StepFunction::indicator_scaled(&set(&s, "[b]"), 3i64);
        let t = ga(&s).translate(&s, &f);
        assert_eq!(t, StepFunction::indicator_scaled(&set(&s, "[ab]"), 3));
    }
}
