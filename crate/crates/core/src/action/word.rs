use std::fmt;

use crate::action::{ActionError, PrefixExchange};
use crate::sft::{ClopenSet, SftSpace};

/// A reduced word in the generators and their inverses. The word
/// `x1 x2 … xn` denotes `x1 ∘ x2 ∘ … ∘ xn`, so `xn` acts first.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    letters: Vec<(usize, i8)>,
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| {
                if e > 0 {
                    format!("g{g}")
                } else {
                    format!("g{g}^-1")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(index: usize) -> Self {
        GroupWord {
            letters: vec![(index, 1)],
        }
    }

    /// Builds a word from `(generator, ±1)` letters, cancelling adjacent
    /// inverse pairs.
    pub fn new<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for (g, e) in letters {
            let e = if e >= 0 { 1 } else { -1 };
            match out.last() {
                Some(&(h, f)) if h == g && f == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        GroupWord { letters: out }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word for `self ∘ other`.
    pub fn then_apply_after(&self, other: &GroupWord) -> GroupWord {
        GroupWord::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::new(self.letters.iter().rev().map(|&(g, e)| (g, -e)))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub exchange: PrefixExchange,
    pub inverse: PrefixExchange,
}

/// A finitely generated group acting on an SFT by prefix exchanges.
#[derive(Clone, PartialEq, Eq)]
pub struct Action {
    space: SftSpace,
    generators: Vec<Generator>,
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Action")
            .field("space", &self.space)
            .field(
                "generators",
                &self.generators.iter().map(|g| &g.name).collect::<Vec<_>>(),
            )
            .finish()
    }
}

fn valid_generator_name(name: &str) -> bool {
    name != "e"
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Action {
    /// Generators must already be valid exchanges over `space` (see
    /// [`crate::action::validate_exchange`]).
    pub fn new(
        space: SftSpace,
        generators: Vec<(String, PrefixExchange)>,
    ) -> Result<Self, ActionError> {
        let mut gens: Vec<Generator> = Vec::with_capacity(generators.len());
        for (name, exchange) in generators {
            if !valid_generator_name(&name) {
                return Err(ActionError::BadGeneratorName(name));
            }
            if gens.iter().any(|g| g.name == name) {
                return Err(ActionError::BadGeneratorName(format!("{name} (duplicate)")));
            }
            let inverse = exchange.invert(&space);
            gens.push(Generator {
                name,
                exchange,
                inverse,
            });
        }
        Ok(Action {
            space,
            generators: gens,
        })
    }

    pub fn space(&self) -> &SftSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// The exchange of a single letter `(generator, ±1)`.
    pub fn letter_exchange(&self, g: usize, e: i8) -> &PrefixExchange {
        let gen = &self.generators[g];
        if e > 0 {
            &gen.exchange
        } else {
            &gen.inverse
        }
    }

    /// Largest domain length over the generators' rules.
    pub fn max_domain_len(&self) -> usize {
        self.generators
            .iter()
            .map(|g| g.exchange.max_domain_len())
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate_word(&self, w: &GroupWord) -> Result<PrefixExchange, ActionError> {
        if let Some(&(g, _)) = w
            .letters()
            .iter()
            .find(|(g, _)| *g >= self.generators.len())
        {
            return Err(ActionError::UnknownGenerator(format!("index {g}")));
        }
        Ok(self.evaluate_unchecked(w))
    }

    pub(crate) fn evaluate_unchecked(&self, w: &GroupWord) -> PrefixExchange {
        let mut acc = PrefixExchange::identity();
        for &(g, e) in w.letters() {
            acc = acc.compose(&self.space, self.letter_exchange(g, e));
        }
        acc
    }

    /// Image of a clopen set under a group word.
    pub fn apply_word(&self, w: &GroupWord, a: &ClopenSet) -> Result<ClopenSet, ActionError> {
        self.space.check_set(a)?;
        Ok(self.evaluate_word(w)?.image(&self.space, a))
    }

    /// Formats a word as `e` or `name*name^-1*…`.
    pub fn format_group_word(&self, w: &GroupWord) -> String {
        if w.is_identity() {
            return "e".to_string();
        }
        w.letters()
            .iter()
            .map(|&(g, e)| {
                let name = self
                    .generators
                    .get(g)
                    .map(|g| g.name.as_str())
                    .unwrap_or("?");
                if e > 0 {
                    name.to_string()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_group_word(&self, text: &str) -> Result<GroupWord, ActionError> {
        let text = text.trim();
        if text == "e" {
            return Ok(GroupWord::identity());
        }
        let mut letters = Vec::new();
        for part in text.split('*') {
            let part = part.trim();
            let (name, e) = match part.strip_suffix("^-1") {
                Some(n) => (n, -1),
                None => (part, 1),
            };
            let g = self
                .generator_index(name)
                .ok_or_else(|| ActionError::UnknownGenerator(name.to_string()))?;
            letters.push((g, e));
        }
        let w = GroupWord::new(letters.iter().copied());
        if w.len() != letters.len() {
            return Err(ActionError::BadGroupWord(format!("{text} is not reduced")));
        }
        Ok(w)
    }

    /// Repeatedly adds the images of `a` under the generators and their
    /// inverses. Returns the result and whether a fixed point was reached
    /// within `max_rounds` rounds.
    pub fn invariant_clopen_saturation(
        &self,
        a: &ClopenSet,
        max_rounds: usize,
    ) -> Result<(ClopenSet, bool), ActionError> {
        self.space.check_set(a)?;
        let mut cur = a.clone();
        for _ in 0..max_rounds {
            let mut parts = vec![cur.clone()];
            for g in &self.generators {
                parts.push(g.exchange.image(&self.space, &cur));
                parts.push(g.inverse.image(&self.space, &cur));
            }
            let next = self.space.union_all(&parts);
            if next == cur {
                return Ok((cur, true));
            }
            cur = next;
        }
        Ok((cur, false))
    }
}

/// A clopen base whose translates under a finite list of words are pairwise
/// disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerWitness {
    pub words: Vec<GroupWord>,
    pub base: ClopenSet,
}

impl TowerWitness {
    /// Exact check that the translates of the base are pairwise disjoint.
    pub fn verify(&self, action: &Action) -> Result<bool, ActionError> {
        action.space().check_set(&self.base)?;
        let mut images = Vec::with_capacity(self.words.len());
        for w in &self.words {
            images.push(action.evaluate_word(w)?.image(action.space(), &self.base));
        }
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if !images[i].is_disjoint(&images[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::builtin::{bit_permutation, f2_boundary, product_with_trivial};

    #[test]
    fn words_reduce_and_invert() {
        let w = GroupWord::new([(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w.letters(), &[(0, 1), (0, 1)]);
        assert_eq!(w.inverse().letters(), &[(0, -1), (0, -1)]);
        assert!(w.then_apply_after(&w.inverse()).is_identity());
    }

    #[test]
    fn evaluate_examples() {
        let act = f2_boundary();
        let s = act.space();
        let aa = act.parse_group_word("ga*ga").unwrap();
        let b = s.parse_set("[b]").unwrap();
        assert_eq!(
            act.apply_word(&aa, &b).unwrap(),
            s.parse_set("[aab]").unwrap()
        );
        assert!(act
            .evaluate_word(&GroupWord::new([(0, 1), (0, -1)]))
            .unwrap()
            .is_identity());
        assert!(act
            .evaluate_word(&GroupWord::identity())
            .unwrap()
            .is_identity());
        assert!(matches!(
            act.evaluate_word(&GroupWord::generator(7)),
            Err(ActionError::UnknownGenerator(_))
        ));
        assert_eq!(
            act.format_group_word(&act.parse_group_word("ga*gb^-1").unwrap()),
            "ga*gb^-1"
        );
        assert!(act.parse_group_word("ga*ga^-1").is_err());

        let swap = bit_permutation(&[1, 0]).unwrap();
        let sss = GroupWord::new([(0, 1), (0, 1), (0, 1)]);
        assert_eq!(
            swap.evaluate_word(&sss).unwrap(),
            swap.generators()[0].exchange
        );
    }

    #[test]
    fn saturation_examples() {
        let act = f2_boundary();
        let a = act.space().parse_set("[a]").unwrap();
        let (sat, stable) = act.invariant_clopen_saturation(&a, 3).unwrap();
        assert!(sat.is_whole() && stable);

        let prod = product_with_trivial(&act, &["0", "1"]).unwrap();
        let x0 = prod.space().parse_set("[0]").unwrap();
        let (sat, stable) = prod.invariant_clopen_saturation(&x0, 5).unwrap();
        assert!(stable);
        assert_eq!(sat, x0);
        let (sat, stable) = prod
            .invariant_clopen_saturation(&ClopenSet::whole(), 1)
            .unwrap();
        assert!(stable && sat.is_whole());
    }

    #[test]
    fn tower_examples() {
        let act = f2_boundary();
        let t = TowerWitness {
            words: vec![GroupWord::identity(), GroupWord::generator(0)],
            base: act.space().parse_set("[b]").unwrap(),
        };
        assert!(t.verify(&act).unwrap());
        let bad = TowerWitness {
            words: t.words.clone(),
            base: act.space().parse_set("[a]").unwrap(),
        };
        assert!(!bad.verify(&act).unwrap());
    }
}
