//! Built-in example actions.

use std::fmt;
use std::str::FromStr;

use crate::action::{validate_exchange, Action, ActionError, PrefixExchange};
use crate::sft::{Letter, SftSpace, Word};

/// Largest rank accepted by [`free_boundary`].
pub const MAX_FREE_RANK: usize = 13;

/// Names of the built-in actions, parsed from and printed as
/// `f2_boundary`, `free_boundary:3`, `bit_permutation:1,0` (several
/// permutations separated by `/`) and `product_with_trivial:<base>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    F2Boundary,
    FreeBoundary(usize),
    BitPermutation(Vec<Vec<usize>>),
    ProductWithTrivial(Box<Builtin>),
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::F2Boundary => write!(f, "f2_boundary"),
            Builtin::FreeBoundary(n) => write!(f, "free_boundary:{n}"),
            Builtin::BitPermutation(perms) => {
                let parts: Vec<String> = perms
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "bit_permutation:{}", parts.join("/"))
            }
            Builtin::ProductWithTrivial(base) => write!(f, "product_with_trivial:{base}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = ActionError;

    fn from_str(s: &str) -> Result<Self, ActionError> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let bad = |msg: &str| ActionError::BadParams(format!("{s}: {msg}"));
        match (name, params) {
            ("f2_boundary", None) => Ok(Builtin::F2Boundary),
            ("free_boundary", Some(p)) => p
                .trim()
                .parse()
                .map(Builtin::FreeBoundary)
                .map_err(|_| bad("expected a rank")),
            ("bit_permutation", Some(p)) => {
                let perms = p
                    .split('/')
                    .map(|perm| {
                        perm.split(',')
                            .map(|i| i.trim().parse::<usize>())
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected comma-separated indices"))?;
                Ok(Builtin::BitPermutation(perms))
            }
            ("product_with_trivial", Some(p)) => {
                Ok(Builtin::ProductWithTrivial(Box::new(p.parse()?)))
            }
            ("f2_boundary" | "free_boundary" | "bit_permutation" | "product_with_trivial", _) => {
                Err(bad("wrong parameters"))
            }
            _ => Err(ActionError::UnknownName(name.to_string())),
        }
    }
}

impl Builtin {
    pub fn build(&self) -> Result<Action, ActionError> {
        match self {
            Builtin::F2Boundary => free_boundary(2),
            Builtin::FreeBoundary(n) => free_boundary(*n),
            Builtin::BitPermutation(perms) => bit_permutations(perms),
            Builtin::ProductWithTrivial(base) => product_with_trivial(&base.build()?, &["0", "1"]),
        }
    }
}

/// Looks up a built-in action by its textual name.
pub fn builtin_action(name: &str) -> Result<Action, ActionError> {
    name.parse::<Builtin>()?.build()
}

/// The boundary of the free group on two generators `ga`, `gb`.
pub fn f2_boundary() -> Action {
    free_boundary(2).expect("rank 2 is valid")
}

/// Left multiplication on reduced infinite words over `a A b B …`, where an
/// upper-case letter is the inverse of its lower-case partner.
pub fn free_boundary(rank: usize) -> Result<Action, ActionError> {
    if rank == 0 || rank > MAX_FREE_RANK {
        return Err(ActionError::BadParams(format!(
            "free_boundary rank {rank} outside 1..={MAX_FREE_RANK}"
        )));
    }
    let k = 2 * rank;
    let names: Vec<String> = (0..rank)
        .flat_map(|i| {
            let c = (b'a' + i as u8) as char;
            [c.to_string(), c.to_ascii_uppercase().to_string()]
        })
        .collect();
    let inv = |l: usize| l ^ 1;
    let mut t = vec![vec![true; k]; k];
    for (l, row) in t.iter_mut().enumerate() {
        row[inv(l)] = false;
    }
    let space = SftSpace::new(names, t, vec![true; k])?;
    let mut gens = Vec::with_capacity(rank);
    for i in 0..rank {
        let x = (2 * i) as Letter;
        let xi = x + 1;
        let mut rules = vec![(Word::new(vec![xi]), Word::empty())];
        for y in 0..k as Letter {
            if y != xi {
                rules.push((Word::new(vec![y]), Word::new(vec![x, y])));
            }
        }
        let name = format!("g{}", space.name(x));
        gens.push((name, validate_exchange(&space, rules)?));
    }
    Action::new(space, gens)
}

/// The full binary shift with one generator per permutation; a permutation
/// of `0..2^m` permutes the length-`m` prefixes (in lexicographic order).
pub fn bit_permutations(perms: &[Vec<usize>]) -> Result<Action, ActionError> {
    if perms.is_empty() {
        return Err(ActionError::BadParams("no permutation given".into()));
    }
    let space = SftSpace::full_shift(&["0", "1"])?;
    let mut gens = Vec::with_capacity(perms.len());
    for (i, perm) in perms.iter().enumerate() {
        let n = perm.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(ActionError::BadParams(format!(
                "permutation length {n} is not a power of two >= 2"
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(ActionError::BadParams(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let words = space.words_of_length(n.trailing_zeros() as usize);
        let rules = words
            .iter()
            .zip(perm)
            .map(|(w, &p)| (w.clone(), words[p].clone()))
            .collect();
        let name = if perms.len() == 1 {
            "s".to_string()
        } else {
            format!("s{}", i + 1)
        };
        gens.push((name, validate_exchange(&space, rules)?));
    }
    Action::new(space, gens)
}

pub fn bit_permutation(perm: &[usize]) -> Result<Action, ActionError> {
    bit_permutations(&[perm.to_vec()])
}

/// The base action on a space whose points carry a label that no generator
/// changes: a point is a label letter followed by a point of the base.
pub fn product_with_trivial(base: &Action, labels: &[&str]) -> Result<Action, ActionError> {
    if labels.is_empty() {
        return Err(ActionError::BadParams("no labels given".into()));
    }
    let bs = base.space();
    let m = labels.len();
    let k = m + bs.alphabet_size();
    let names: Vec<String> = labels
        .iter()
        .map(|s| s.to_string())
        .chain(bs.names().iter().cloned())
        .collect();
    let mut t = vec![vec![false; k]; k];
    for row in t.iter_mut().take(m) {
        for (j, &ok) in bs.initial().iter().enumerate() {
            row[m + j] = ok;
        }
    }
    for (i, brow) in bs.transitions().iter().enumerate() {
        for (j, &ok) in brow.iter().enumerate() {
            t[m + i][m + j] = ok;
        }
    }
    let initial: Vec<bool> = (0..k).map(|i| i < m).collect();
    let space =
        SftSpace::new(names, t, initial).map_err(|e| ActionError::BadParams(e.to_string()))?;
    let shift = |w: &Word| -> Vec<Letter> { w.iter().map(|&l| l + m as Letter).collect() };
    let mut gens = Vec::with_capacity(base.generators().len());
    for g in base.generators() {
        let mut rules = Vec::new();
        for y in 0..m as Letter {
            for (u, v) in g.exchange.rules() {
                let mut uu = vec![y];
                uu.extend(shift(u));
                let mut vv = vec![y];
                vv.extend(shift(v));
                rules.push((Word::new(uu), Word::new(vv)));
            }
        }
        gens.push((g.name.clone(), validate_exchange(&space, rules)?));
    }
    Action::new(space, gens)
}

/// Exchange of the first-letter swap on the full binary shift.
pub fn first_bit_swap(space: &SftSpace) -> Result<PrefixExchange, ActionError> {
    let zero = Word::new(vec![0]);
    let one = Word::new(vec![1]);
    validate_exchange(space, vec![(zero.clone(), one.clone()), (one, zero)])
}
