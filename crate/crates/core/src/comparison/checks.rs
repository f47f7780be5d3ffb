//! Finite-resolution checks: n-filling and strong boundary over all
//! depth-`d` instances, and open towers.

use std::collections::HashSet;

use crate::action::{Action, GroupWord, TowerWitness};
use crate::comparison::{indicator, ComparisonError, SearchBounds, SearchContext};
use crate::measures::{InvariantContent, Normalization};
use crate::par;
use crate::sft::{ClopenSet, Word};
use crate::step::StepFunction;

/// Largest number of instances a single check enumerates.
pub const MAX_INSTANCES: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    /// The whole (finite) group was searched.
    Exhaustive,
    /// No witness can exist under this content.
    Content(InvariantContent),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckVerdict<I> {
    Pass,
    Fail {
        instance: I,
        reason: CheckFailure,
    },
    /// First instance left undecided.
    Inconclusive {
        instance: I,
    },
}

/// A tuple of cylinders with the words whose translates cover `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingEntry {
    pub tuple: Vec<Word>,
    pub words: Vec<GroupWord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingReport {
    pub n: usize,
    pub depth: usize,
    pub bounds: SearchBounds,
    pub instances: usize,
    pub covers: Vec<FillingEntry>,
    pub verdict: CheckVerdict<Vec<Word>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryEntry {
    pub from: ClopenSet,
    pub to: ClopenSet,
    pub word: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryReport {
    pub depth: usize,
    pub bounds: SearchBounds,
    pub instances: usize,
    pub entries: Vec<BoundaryEntry>,
    pub verdict: CheckVerdict<(ClopenSet, ClopenSet)>,
}

enum Decision<W> {
    Witness(W),
    Exhausted,
    Open,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Non-decreasing index tuples of length `n` over `0..k`.
fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..n).rev().find(|&i| cur[i] + 1 < k) else {
            return out;
        };
        let v = cur[pos] + 1;
        for c in &mut cur[pos..] {
            *c = v;
        }
    }
}

/// Exact check that the translates `g_i [u_i]` cover the space.
pub fn verify_filling_cover(
    action: &Action,
    tuple: &[Word],
    words: &[GroupWord],
) -> Result<bool, ComparisonError> {
    if tuple.len() != words.len() {
        return Ok(false);
    }
    let space = action.space();
    let mut images = Vec::new();
    for (u, g) in tuple.iter().zip(words) {
        space.check_word(u)?;
        images.push(action.evaluate_word(g)?.image_of_cylinder(space, u));
    }
    Ok(space.union_all(&images).is_whole())
}

struct CoverSearch<'a> {
    ctx: &'a SearchContext<'a>,
    options: Vec<Vec<(ClopenSet, usize)>>,
    suffix: Vec<ClopenSet>,
    nodes: u64,
    exhausted: bool,
}

impl CoverSearch<'_> {
    fn run(&mut self, i: usize, acc: &ClopenSet, picks: &mut Vec<usize>) -> bool {
        let space = self.ctx.action().space();
        if i == self.options.len() {
            return acc.is_whole();
        }
        if !space.union(acc, &self.suffix[i]).is_whole() {
            return false;
        }
        for k in 0..self.options[i].len() {
            if self.nodes >= self.ctx.bounds().node_budget {
                self.exhausted = true;
                return false;
            }
            self.nodes += 1;
            let next = space.union(acc, &self.options[i][k].0);
            picks.push(self.options[i][k].1);
            if self.run(i + 1, &next, picks) {
                return true;
            }
            picks.pop();
        }
        false
    }
}

fn cover_tuple(ctx: &SearchContext<'_>, tuple: &[Word]) -> Decision<Vec<GroupWord>> {
    let space = ctx.action().space();
    let catalog = ctx.catalog();
    let options: Vec<Vec<(ClopenSet, usize)>> = tuple
        .iter()
        .map(|u| {
            let mut seen = HashSet::new();
            catalog
                .entries
                .iter()
                .enumerate()
                .filter_map(|(k, e)| {
                    let img = e.exchange.image_of_cylinder(space, u);
                    seen.insert(img.clone()).then_some((img, k))
                })
                .collect()
        })
        .collect();
    let mut suffix = vec![ClopenSet::empty(); options.len() + 1];
    for i in (0..options.len()).rev() {
        let all = space.union_all(options[i].iter().map(|(s, _)| s));
        suffix[i] = space.union(&all, &suffix[i + 1]);
    }
    let mut s = CoverSearch {
        ctx,
        options,
        suffix,
        nodes: 0,
        exhausted: false,
    };
    let mut picks = Vec::new();
    if s.run(0, &ClopenSet::empty(), &mut picks) {
        return Decision::Witness(
            picks
                .into_iter()
                .map(|k| catalog.entries[k].word.clone())
                .collect(),
        );
    }
    if catalog.complete && !s.exhausted {
        Decision::Exhausted
    } else {
        Decision::Open
    }
}

fn fold_verdict<I: Clone, W>(
    ctx: &SearchContext<'_>,
    instances: &[I],
    decisions: Vec<Decision<W>>,
    content: impl Fn(&I) -> Normalization,
) -> (Vec<(usize, W)>, CheckVerdict<I>) {
    let mut witnesses = Vec::new();
    let mut first_open = None;
    for (idx, d) in decisions.into_iter().enumerate() {
        match d {
            Decision::Witness(w) => witnesses.push((idx, w)),
            Decision::Exhausted => {
                let instance = instances[idx].clone();
                return (
                    witnesses,
                    CheckVerdict::Fail {
                        instance,
                        reason: CheckFailure::Exhaustive,
                    },
                );
            }
            Decision::Open => {
                if let Some(mu) = ctx.refute(&content(&instances[idx])) {
                    let instance = instances[idx].clone();
                    return (
                        witnesses,
                        CheckVerdict::Fail {
                            instance,
                            reason: CheckFailure::Content(mu),
                        },
                    );
                }
                first_open.get_or_insert(idx);
            }
        }
    }
    let verdict = match first_open {
        Some(i) => CheckVerdict::Inconclusive {
            instance: instances[i].clone(),
        },
        None => CheckVerdict::Pass,
    };
    (witnesses, verdict)
}

/// For every `n`-tuple of depth-`depth` cylinders, looks for words whose
/// translates of the tuple cover the space.
pub fn check_n_filling(
    action: &Action,
    n: usize,
    depth: usize,
    bounds: SearchBounds,
) -> Result<FillingReport, ComparisonError> {
    SearchContext::new(action, bounds)?.check_n_filling(n, depth)
}

/// For every proper nonempty union `F` and nonempty union `O` of
/// depth-`depth` cylinders, looks for one word moving `F` into `O`.
pub fn check_strong_boundary(
    action: &Action,
    depth: usize,
    bounds: SearchBounds,
) -> Result<BoundaryReport, ComparisonError> {
    SearchContext::new(action, bounds)?.check_strong_boundary(depth)
}

impl SearchContext<'_> {
    /// [`check_n_filling`] under this context's bounds and execution mode.
    pub fn check_n_filling(
        &self,
        n: usize,
        depth: usize,
    ) -> Result<FillingReport, ComparisonError> {
        if n < 2 {
            return Err(ComparisonError::InvalidArgument(format!(
                "n-filling needs n >= 2, got {n}"
            )));
        }
        let ctx = self;
        let bounds = self.bounds();
        let space = self.action.space();
        let words = space.words_of_length(depth);
        let count = binomial((words.len() + n - 1) as u128, n as u128);
        if count > MAX_INSTANCES {
            return Err(ComparisonError::FragmentTooLarge {
                count,
                limit: MAX_INSTANCES,
            });
        }
        let tuples: Vec<Vec<Word>> = multisets(words.len(), n)
            .into_iter()
            .map(|t| t.into_iter().map(|i| words[i].clone()).collect())
            .collect();
        ctx.catalog();
        let decisions = par::map(ctx.execution(), &tuples, |t| cover_tuple(ctx, t));
        let (covers, verdict) =
            fold_verdict(ctx, &tuples, decisions, |t| Normalization::Separation {
                lhs: indicator(&ClopenSet::whole()),
                rhs: StepFunction::from_terms(space, t.iter().map(|u| (u.clone(), 1u32))),
            });
        let covers = covers
            .into_iter()
            .map(|(i, words)| FillingEntry {
                tuple: tuples[i].clone(),
                words,
            })
            .collect();
        Ok(FillingReport {
            n,
            depth,
            bounds,
            instances: tuples.len(),
            covers,
            verdict,
        })
    }

    /// [`check_strong_boundary`] under this context's bounds and execution mode.
    pub fn check_strong_boundary(&self, depth: usize) -> Result<BoundaryReport, ComparisonError> {
        let ctx = self;
        let bounds = self.bounds();
        let space = self.action.space();
        let words = space.words_of_length(depth);
        let k = words.len();
        let subsets = if k >= 100 {
            u128::MAX
        } else {
            (1u128 << k) - 1
        };
        let count = subsets.saturating_sub(1).saturating_mul(subsets);
        if count > MAX_INSTANCES {
            return Err(ComparisonError::FragmentTooLarge {
                count,
                limit: MAX_INSTANCES,
            });
        }
        let sets: Vec<ClopenSet> = (1..=subsets as u64)
            .map(|mask| {
                space.canonicalize_unchecked(
                    (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| words[i].clone()),
                )
            })
            .collect();
        let proper: Vec<ClopenSet> = sets.iter().filter(|s| !s.is_whole()).cloned().collect();
        let catalog = ctx.catalog();
        let per_f = par::map(ctx.execution(), &proper, |f| {
            let images: Vec<ClopenSet> = catalog
                .entries
                .iter()
                .map(|e| e.exchange.image(space, f))
                .collect();
            sets.iter()
                .map(
                    |o| match images.iter().position(|img| space.is_subset(img, o)) {
                        Some(i) => Decision::Witness(catalog.entries[i].word.clone()),
                        None if catalog.complete => Decision::Exhausted,
                        None => Decision::Open,
                    },
                )
                .collect::<Vec<_>>()
        });
        let pairs: Vec<(ClopenSet, ClopenSet)> = proper
            .iter()
            .flat_map(|f| sets.iter().map(move |o| (f.clone(), o.clone())))
            .collect();
        let decisions = per_f.into_iter().flatten().collect();
        let (found, verdict) =
            fold_verdict(ctx, &pairs, decisions, |(f, o)| Normalization::Separation {
                lhs: indicator(f),
                rhs: indicator(o),
            });
        let entries = found
            .into_iter()
            .map(|(i, word)| BoundaryEntry {
                from: pairs[i].0.clone(),
                to: pairs[i].1.clone(),
                word,
            })
            .collect();
        Ok(BoundaryReport {
            depth,
            bounds,
            instances: pairs.len(),
            entries,
            verdict,
        })
    }
}

/// Greedy search for a nonempty `W ⊆ U` whose translates under `words` are
/// pairwise disjoint, using cylinders of increasing length.
pub fn find_open_tower(
    action: &Action,
    words: &[GroupWord],
    u: &ClopenSet,
    bounds: SearchBounds,
) -> Result<Option<TowerWitness>, ComparisonError> {
    bounds.validate()?;
    let space = action.space();
    space.check_set(u)?;
    if words.is_empty() || u.is_empty() {
        return Err(ComparisonError::InvalidArgument(
            "tower needs words and a nonempty base region".into(),
        ));
    }
    let maps = words
        .iter()
        .map(|w| action.evaluate_word(w))
        .collect::<Result<Vec<_>, _>>()?;
    for depth in u.max_len()..=bounds.depth.max(u.max_len()) {
        let mut base = ClopenSet::empty();
        let mut images = vec![ClopenSet::empty(); maps.len()];
        for c in space.refine(u, depth)? {
            let new: Vec<ClopenSet> = maps
                .iter()
                .map(|m| m.image_of_cylinder(space, &c))
                .collect();
            let fits = new.iter().enumerate().all(|(i, a)| {
                new.iter()
                    .enumerate()
                    .all(|(j, b)| i == j || a.is_disjoint(b))
                    && images.iter().all(|old| a.is_disjoint(old))
            });
            if fits {
                base = space.union(&base, &space.cylinder(&c)?);
                for (img, n) in images.iter_mut().zip(new) {
                    *img = space.union(img, &n);
                }
            }
        }
        if !base.is_empty() {
            return Ok(Some(TowerWitness {
                words: words.to_vec(),
                base,
            }));
        }
    }
    Ok(None)
}
