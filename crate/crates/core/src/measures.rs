//! Invariant contents on the clopen algebra, found or refuted by exact linear
//! programming at a fixed depth.
//!
//! At depth `d` the unknowns are the masses of the admissible length-`d`
//! cylinders. Every generator `g` (and its inverse) contributes the rows
//! `μ(g[c]) = μ([c])` for the words `c` with `|c| <= d` whose image is a union
//! of cylinders of length at most `d`. These rows hold for every invariant
//! content, so infeasibility at any depth is a proof; feasibility is only
//! evidence at that resolution.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::action::Action;
use crate::lp::{rat, Feasibility, LinearSystem, Optimum, Rational, Row, RowKind};
use crate::semigroup::TypeElement;
use crate::sft::{ClopenSet, SftSpace, SpaceError, Word};
use crate::step::StepFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("depth {depth} is below the minimum {needed} for this action")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("set needs depth {needed} but the content has depth {depth}")]
    DepthExceeded { depth: usize, needed: usize },
    #[error("normalization is trivial (empty set or zero function)")]
    EmptyNormalization,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The extra row that rules out the zero content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    /// `μ(X) = 1`
    Probability,
    /// `μ(O) = 1`
    Set(ClopenSet),
    /// `∫ f dμ = 1`
    Integral(StepFunction<u32>),
    /// `∫ lhs dμ - ∫ rhs dμ >= 1`
    Separation {
        lhs: StepFunction<u32>,
        rhs: StepFunction<u32>,
    },
}

impl Normalization {
    fn needed_depth(&self) -> usize {
        match self {
            Normalization::Probability => 0,
            Normalization::Set(o) => o.max_len(),
            Normalization::Integral(f) => f.max_len(),
            Normalization::Separation { lhs, rhs } => lhs.max_len().max(rhs.max_len()),
        }
    }
}

/// What a constraint row of a [`ContentProgram`] expresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOrigin {
    /// `μ(g[c]) - μ([c]) = 0` for generator `generator` (or its inverse).
    Invariance {
        generator: usize,
        inverse: bool,
        word: Word,
    },
    Normalization,
}

#[derive(Debug, Clone)]
pub struct ContentProgram {
    pub depth: usize,
    pub words: Vec<Word>,
    pub system: LinearSystem,
    pub origins: Vec<RowOrigin>,
}

/// Nonnegative masses of the depth-`depth` cylinders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantContent {
    pub depth: usize,
    pub values: BTreeMap<Word, Rational>,
}

/// Sparse Farkas multipliers over the rows of the content program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub depth: usize,
    pub normalization: Normalization,
    pub multipliers: Vec<(usize, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContentOutcome {
    Feasible(InvariantContent),
    Infeasible(InfeasibilityCertificate),
}

impl ContentOutcome {
    pub fn feasible(self) -> Option<InvariantContent> {
        match self {
            ContentOutcome::Feasible(c) => Some(c),
            ContentOutcome::Infeasible(_) => None,
        }
    }
}

/// Smallest depth at which the content program is built.
pub fn min_content_depth(action: &Action) -> usize {
    action.max_domain_len().max(1)
}

pub fn content_program(
    action: &Action,
    depth: usize,
    norm: &Normalization,
) -> Result<ContentProgram, MeasureError> {
    let needed = min_content_depth(action);
    if depth < needed {
        return Err(MeasureError::DepthTooSmall { depth, needed });
    }
    let needed = norm.needed_depth();
    if depth < needed {
        return Err(MeasureError::DepthExceeded { depth, needed });
    }
    let space = action.space();
    let words = space.words_of_length(depth);
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let var = |w: &Word| index[w];
    let mut system = LinearSystem::new(words.len());
    let mut origins = Vec::new();
    let mut seen: HashSet<Vec<(usize, Rational)>> = HashSet::new();

    let mut shorter: Vec<Word> = Vec::new();
    for len in 0..=depth {
        shorter.extend(space.words_of_length(len));
    }
    for (gi, g) in action.generators().iter().enumerate() {
        for (inverse, ex) in [(false, &g.exchange), (true, &g.inverse)] {
            for c in &shorter {
                let image = ex.image_words(space, c);
                if image.iter().any(|w| w.len() > depth) {
                    continue;
                }
                let mut coeffs = Vec::new();
                for w in &image {
                    coeffs.extend(space.refine_word(w, depth).iter().map(|v| (var(v), rat(1))));
                }
                coeffs.extend(
                    space
                        .refine_word(c, depth)
                        .iter()
                        .map(|v| (var(v), rat(-1))),
                );
                let mut row = Row::new(coeffs, RowKind::Eq, Rational::zero());
                if row.coeffs.is_empty() {
                    continue;
                }
                if row.coeffs[0].1.is_negative() {
                    for (_, v) in row.coeffs.iter_mut() {
                        *v = -v.clone();
                    }
                }
                if seen.insert(row.coeffs.clone()) {
                    system.push(row);
                    origins.push(RowOrigin::Invariance {
                        generator: gi,
                        inverse,
                        word: c.clone(),
                    });
                }
            }
        }
    }

    let weights = |f: &StepFunction<u32>| -> Vec<(usize, Rational)> {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| (i, rat(f.value_on(w).unwrap_or(0) as i64)))
            .collect()
    };
    let row = match norm {
        Normalization::Probability => Row::new(
            (0..words.len()).map(|i| (i, rat(1))).collect(),
            RowKind::Eq,
            rat(1),
        ),
        Normalization::Set(o) => {
            space.check_set(o)?;
            let coeffs = space
                .refine(o, depth)?
                .iter()
                .map(|w| (var(w), rat(1)))
                .collect();
            Row::new(coeffs, RowKind::Eq, rat(1))
        }
        Normalization::Integral(f) => Row::new(weights(f), RowKind::Eq, rat(1)),
        Normalization::Separation { lhs, rhs } => {
            let mut coeffs = weights(lhs);
            coeffs.extend(weights(rhs).into_iter().map(|(i, v)| (i, -v)));
            Row::new(coeffs, RowKind::Ge, rat(1))
        }
    };
    if row.coeffs.is_empty() && matches!(norm, Normalization::Set(_) | Normalization::Integral(_)) {
        return Err(MeasureError::EmptyNormalization);
    }
    system.push(row);
    origins.push(RowOrigin::Normalization);
    Ok(ContentProgram {
        depth,
        words,
        system,
        origins,
    })
}

/// Solves the content program. A feasible answer maximizes the smallest
/// cylinder mass, capped at 1.
pub fn find_content(
    action: &Action,
    depth: usize,
    norm: &Normalization,
) -> Result<ContentOutcome, MeasureError> {
    let prog = content_program(action, depth, norm)?;
    let n = prog.words.len();
    if let Feasibility::Infeasible(y) = prog.system.feasibility() {
        let multipliers = y
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        return Ok(ContentOutcome::Infeasible(InfeasibilityCertificate {
            depth,
            normalization: norm.clone(),
            multipliers,
        }));
    }
    let t = n;
    let mut ext = LinearSystem::new(n + 1);
    ext.rows = prog.system.rows.clone();
    for i in 0..n {
        ext.push(Row::new(
            vec![(i, rat(1)), (t, rat(-1))],
            RowKind::Ge,
            Rational::zero(),
        ));
    }
    ext.push(Row::new(vec![(t, rat(-1))], RowKind::Ge, rat(-1)));
    let x = match ext.maximize(&[(t, rat(1))]) {
        Optimum::Optimal(x) => x,
        other => unreachable!("bounded feasible program: {other:?}"),
    };
    let values = prog.words.into_iter().zip(x).collect();
    Ok(ContentOutcome::Feasible(InvariantContent { depth, values }))
}

pub fn invariant_probability_measure(
    action: &Action,
    depth: usize,
) -> Result<ContentOutcome, MeasureError> {
    find_content(action, depth, &Normalization::Probability)
}

pub fn invariant_content_normalized(
    action: &Action,
    o: &ClopenSet,
    depth: usize,
) -> Result<ContentOutcome, MeasureError> {
    if o.is_empty() {
        return Err(MeasureError::EmptyNormalization);
    }
    if o.is_whole() {
        return find_content(action, depth, &Normalization::Probability);
    }
    find_content(action, depth, &Normalization::Set(o.clone()))
}

/// A content with `∫ y dμ = 1`, inducing a state normalized at `y` on the
/// depth-`depth` fragment.
pub fn state_on_type_element(
    action: &Action,
    y: &TypeElement,
    depth: usize,
) -> Result<ContentOutcome, MeasureError> {
    if y.is_zero() {
        return Err(MeasureError::EmptyNormalization);
    }
    find_content(
        action,
        depth,
        &Normalization::Integral(y.to_step(action.space())),
    )
}

/// Exact check of a content against its program.
pub fn verify_content(
    action: &Action,
    mu: &InvariantContent,
    norm: &Normalization,
) -> Result<bool, MeasureError> {
    let prog = content_program(action, mu.depth, norm)?;
    if mu.values.len() != prog.words.len() || prog.words.iter().any(|w| !mu.values.contains_key(w))
    {
        return Ok(false);
    }
    let x: Vec<Rational> = prog.words.iter().map(|w| mu.values[w].clone()).collect();
    Ok(prog.system.is_solution(&x))
}

/// Replays a certificate against the rebuilt program.
pub fn verify_infeasibility(
    action: &Action,
    cert: &InfeasibilityCertificate,
) -> Result<bool, MeasureError> {
    let prog = content_program(action, cert.depth, &cert.normalization)?;
    let mut y = vec![Rational::zero(); prog.system.rows.len()];
    for (i, v) in &cert.multipliers {
        match y.get_mut(*i) {
            Some(slot) => *slot = v.clone(),
            None => return Ok(false),
        }
    }
    Ok(prog.system.is_farkas_certificate(&y))
}

impl InvariantContent {
    pub fn value(&self, w: &Word) -> Rational {
        self.values.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.values.values().sum()
    }

    /// `∫ f dμ` for a step function no deeper than the content.
    pub fn integrate<V: Clone + Into<i64> + PartialEq + Zero + std::fmt::Debug>(
        &self,
        space: &SftSpace,
        f: &StepFunction<V>,
    ) -> Result<Rational, MeasureError> {
        if f.max_len() > self.depth {
            return Err(MeasureError::DepthExceeded {
                depth: self.depth,
                needed: f.max_len(),
            });
        }
        let mut acc = Rational::zero();
        for (w, v) in f.terms() {
            let m: Rational = space
                .refine_word(w, self.depth)
                .iter()
                .map(|u| self.value(u))
                .sum();
            acc += m * rat(v.clone().into());
        }
        Ok(acc)
    }

    pub fn is_positive_on(&self, space: &SftSpace, a: &ClopenSet) -> Result<bool, MeasureError> {
        Ok(evaluate_content(self, space, a)?.is_positive())
    }
}

/// `μ(A)` for a set no deeper than the content.
pub fn evaluate_content(
    mu: &InvariantContent,
    space: &SftSpace,
    a: &ClopenSet,
) -> Result<Rational, MeasureError> {
    if a.max_len() > mu.depth {
        return Err(MeasureError::DepthExceeded {
            depth: mu.depth,
            needed: a.max_len(),
        });
    }
    Ok(space.refine(a, mu.depth)?.iter().map(|w| mu.value(w)).sum())
}

/// Depth at which a refutation is attempted: at least the action's minimum,
/// the given set depth and `requested`.
pub fn refutation_depth(action: &Action, set_depth: usize, requested: usize) -> usize {
    min_content_depth(action).max(set_depth).max(requested)
}

/// Looks for a content at the smallest sensible depth and, if one exists,
/// confirms at `depth`. Returns the content found at the larger depth.
pub(crate) fn content_at_depths(
    action: &Action,
    norm: &Normalization,
    depth: usize,
) -> Option<InvariantContent> {
    let base = refutation_depth(action, norm.needed_depth(), 0);
    let first = find_content(action, base, norm).ok()?.feasible()?;
    let target = base.max(depth);
    if target == base {
        return Some(first);
    }
    find_content(action, target, norm).ok()?.feasible()
}
