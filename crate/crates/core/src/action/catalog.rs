use std::collections::HashSet;

use crate::action::{Action, GroupWord, PrefixExchange};
use crate::par::{self, Execution};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub word: GroupWord,
    pub exchange: PrefixExchange,
}

/// Distinct group elements of word length at most `max_len`, each listed once
/// under its first word in length-then-lexicographic order (letters ordered
/// `g0, g0^-1, g1, g1^-1, …`).
#[derive(Debug, Clone)]
pub struct ElementCatalog {
    pub entries: Vec<CatalogEntry>,
    pub max_len: usize,
    /// Set when the enumeration stopped growing, i.e. the whole (finite)
    /// group is listed.
    pub complete: bool,
}

impl ElementCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn enumerate_elements(action: &Action, max_len: usize, exec: Execution) -> ElementCatalog {
    let space = action.space();
    let letters: Vec<(usize, i8)> = (0..action.generators().len())
        .flat_map(|g| [(g, 1), (g, -1)])
        .collect();
    let id = CatalogEntry {
        word: GroupWord::identity(),
        exchange: PrefixExchange::identity(),
    };
    let mut seen: HashSet<PrefixExchange> = HashSet::new();
    seen.insert(id.exchange.clone());
    let mut entries = vec![id];
    let mut frontier: Vec<usize> = vec![0];
    let mut complete = letters.is_empty();
    for _ in 0..max_len {
        let candidates: Vec<(usize, (usize, i8))> = frontier
            .iter()
            .flat_map(|&i| letters.iter().map(move |&x| (i, x)))
            .filter(|&(i, (g, e))| entries[i].word.letters().last() != Some(&(g, -e)))
            .collect();
        let composed = par::map(exec, &candidates, |&(i, (g, e))| {
            entries[i]
                .exchange
                .compose(space, action.letter_exchange(g, e))
        });
        let mut next = Vec::new();
        for ((i, x), exchange) in candidates.into_iter().zip(composed) {
            if seen.insert(exchange.clone()) {
                let word = GroupWord::new(entries[i].word.letters().iter().copied().chain([x]));
                next.push(entries.len());
                entries.push(CatalogEntry { word, exchange });
            }
        }
        if next.is_empty() {
            complete = true;
            break;
        }
        frontier = next;
    }
    ElementCatalog {
        entries,
        max_len,
        complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::builtin::{bit_permutation, f2_boundary};

    #[test]
    fn free_group_elements_are_distinct() {
        let act = f2_boundary();
        let cat = enumerate_elements(&act, 3, Execution::Sequential);
        // 1 + 4 + 12 + 36 reduced words, all acting differently
        assert_eq!(cat.len(), 53);
        assert!(!cat.complete);
        assert_eq!(act.format_group_word(&cat.entries[1].word), "ga");
        assert_eq!(act.format_group_word(&cat.entries[2].word), "ga^-1");
        let par = enumerate_elements(&act, 3, Execution::Parallel);
        assert!(cat
            .entries
            .iter()
            .zip(&par.entries)
            .all(|(a, b)| a.word == b.word));
    }

    #[test]
    fn finite_group_is_completed() {
        let act = bit_permutation(&[1, 0]).unwrap();
        let cat = enumerate_elements(&act, 5, Execution::Sequential);
        assert_eq!(cat.len(), 2);
        assert!(cat.complete);
    }
}
