//! The type semigroup on nonnegative integer clopen step functions.
//!
//! An element is stored through its level sets `A_i = {f >= i}`. The order
//! `[f] <= [g]` is witnessed by parts `(cylinder, multiplicity, word)` whose
//! multiplicities sum to `f` and whose translates sum to at most `g`
//! pointwise.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::action::{Action, GroupWord};
use crate::comparison::{
    self, ComparisonError, ParadoxicalWitness, SearchBounds, SearchContext, SearchOutcome,
    SearchStats, SubequivalenceScheme,
};
use crate::measures::{content_at_depths, MeasureError, Normalization};
use crate::par;
use crate::sft::{ClopenSet, SftSpace, SpaceError, Word};
use crate::step::StepFunction;

/// Default cap on multiplicities in fragment enumeration.
pub const DEFAULT_MULTIPLICITY_CAP: u32 = 4;

/// Largest fragment [`check_purely_infinite_fragment`] enumerates.
pub const MAX_FRAGMENT: u128 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("order witness does not verify: {0}")]
    InvalidWitness(OrderViolation),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("fragment has {count} elements, above the limit {limit}")]
    FragmentTooLarge { count: u128, limit: u128 },
}

/// Descending chain of nonempty level sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeElement {
    levels: Vec<ClopenSet>,
}

impl TypeElement {
    pub fn zero() -> Self {
        TypeElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn indicator(set: &ClopenSet) -> Self {
        if set.is_empty() {
            return Self::zero();
        }
        TypeElement {
            levels: vec![set.clone()],
        }
    }

    pub fn levels(&self) -> &[ClopenSet] {
        &self.levels
    }

    /// Largest value of the function.
    pub fn max_multiplicity(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn support(&self) -> ClopenSet {
        self.levels.first().cloned().unwrap_or_default()
    }

    pub fn max_len(&self) -> usize {
        self.levels.iter().map(|l| l.max_len()).max().unwrap_or(0)
    }

    pub fn from_step(space: &SftSpace, f: &StepFunction<u32>) -> Self {
        let levels = (1..=f.max_value())
            .map(|i| {
                space.canonicalize_unchecked(
                    f.terms().filter(|(_, v)| **v >= i).map(|(w, _)| w.clone()),
                )
            })
            .collect();
        TypeElement { levels }
    }

    pub fn to_step(&self, space: &SftSpace) -> StepFunction<u32> {
        StepFunction::from_terms(
            space,
            self.levels
                .iter()
                .flat_map(|l| l.cylinders().map(|c| (c.clone(), 1))),
        )
    }

    pub fn add(&self, space: &SftSpace, other: &TypeElement) -> Self {
        Self::from_step(
            space,
            &self.to_step(space).add(space, &other.to_step(space)),
        )
    }

    pub fn scale(&self, space: &SftSpace, m: u32) -> Self {
        if m == 0 {
            return Self::zero();
        }
        Self::from_step(space, &self.to_step(space).map_values(space, |v| v * m))
    }
}

/// Canonical element for a list of weighted, possibly overlapping cylinders.
pub fn canonical_type_element(
    space: &SftSpace,
    terms: &[(Word, u32)],
) -> Result<TypeElement, SemigroupError> {
    for (w, _) in terms {
        space.check_word(w)?;
    }
    Ok(TypeElement::from_step(
        space,
        &StepFunction::from_terms(space, terms.iter().cloned()),
    ))
}

pub fn add(
    space: &SftSpace,
    f: &TypeElement,
    g: &TypeElement,
) -> Result<TypeElement, SemigroupError> {
    for l in f.levels.iter().chain(&g.levels) {
        space.check_set(l)?;
    }
    Ok(f.add(space, g))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderPart {
    pub cylinder: Word,
    pub multiplicity: u32,
    pub word: GroupWord,
}

/// Witness for `[f] <= [g]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderWitness {
    pub parts: Vec<OrderPart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    /// The parts do not sum to `f`.
    Decomposition,
    /// The translated parts exceed `g` somewhere.
    PointwiseBound,
}

impl std::fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderViolation::Decomposition => write!(f, "parts do not sum to the left-hand side"),
            OrderViolation::PointwiseBound => {
                write!(f, "translated parts exceed the right-hand side")
            }
        }
    }
}

impl OrderWitness {
    /// `f <= f` by the identity.
    pub fn identity(space: &SftSpace, f: &TypeElement) -> Self {
        let parts = f
            .to_step(space)
            .terms()
            .map(|(w, v)| OrderPart {
                cylinder: w.clone(),
                multiplicity: *v,
                word: GroupWord::identity(),
            })
            .collect();
        OrderWitness { parts }
    }

    pub fn from_scheme(s: &SubequivalenceScheme) -> Self {
        let parts = s
            .pieces
            .iter()
            .map(|(c, w)| OrderPart {
                cylinder: c.clone(),
                multiplicity: 1,
                word: w.clone(),
            })
            .collect();
        OrderWitness { parts }
    }

    /// Left-hand side `Σ h_i`.
    pub fn source(&self, space: &SftSpace) -> StepFunction<u32> {
        StepFunction::from_terms(
            space,
            self.parts
                .iter()
                .map(|p| (p.cylinder.clone(), p.multiplicity)),
        )
    }

    /// `Σ α_{s_i}(h_i)`.
    pub fn image(&self, action: &Action) -> Result<StepFunction<u32>, SemigroupError> {
        let space = action.space();
        let mut terms = Vec::new();
        for p in &self.parts {
            let ex = action
                .evaluate_word(&p.word)
                .map_err(ComparisonError::from)?;
            terms.extend(
                ex.image_words(space, &p.cylinder)
                    .into_iter()
                    .map(|c| (c, p.multiplicity)),
            );
        }
        Ok(StepFunction::from_terms(space, terms))
    }

    /// Groups parts by word and merges their cylinders.
    fn compress(self, space: &SftSpace) -> Self {
        let mut by_word: BTreeMap<GroupWord, Vec<(Word, u32)>> = BTreeMap::new();
        for p in self.parts {
            if p.multiplicity > 0 {
                by_word
                    .entry(p.word)
                    .or_default()
                    .push((p.cylinder, p.multiplicity));
            }
        }
        let mut parts = Vec::new();
        for (word, terms) in by_word {
            for (c, m) in StepFunction::from_terms(space, terms).terms() {
                parts.push(OrderPart {
                    cylinder: c.clone(),
                    multiplicity: *m,
                    word: word.clone(),
                });
            }
        }
        parts.sort();
        OrderWitness { parts }
    }
}

pub fn verify_order_witness(
    action: &Action,
    f: &TypeElement,
    g: &TypeElement,
    w: &OrderWitness,
) -> Result<Result<(), OrderViolation>, SemigroupError> {
    let space = action.space();
    for l in f.levels.iter().chain(&g.levels) {
        space.check_set(l)?;
    }
    for p in &w.parts {
        space.check_word(&p.cylinder)?;
    }
    if w.source(space) != f.to_step(space) {
        return Ok(Err(OrderViolation::Decomposition));
    }
    if !w
        .image(action)?
        .all_pointwise(space, &g.to_step(space), |a, b| a <= b)
    {
        return Ok(Err(OrderViolation::PointwiseBound));
    }
    Ok(Ok(()))
}

fn require(
    action: &Action,
    f: &TypeElement,
    g: &TypeElement,
    w: &OrderWitness,
) -> Result<(), SemigroupError> {
    verify_order_witness(action, f, g, w)?.map_err(SemigroupError::InvalidWitness)
}

/// `f1 + f2 <= g1 + g2` from witnesses of the two summands.
pub fn sum_order(space: &SftSpace, w1: &OrderWitness, w2: &OrderWitness) -> OrderWitness {
    OrderWitness {
        parts: w1.parts.iter().chain(&w2.parts).cloned().collect(),
    }
    .compress(space)
}

/// `f <= h` from verified witnesses of `f <= g` and `g <= h`.
pub fn compose_order(
    action: &Action,
    (f, g, h): (&TypeElement, &TypeElement, &TypeElement),
    w1: &OrderWitness,
    w2: &OrderWitness,
) -> Result<OrderWitness, SemigroupError> {
    require(action, f, g, w1)?;
    require(action, g, h, w2)?;
    let space = action.space();
    let mut images = Vec::with_capacity(w1.parts.len());
    let mut depth = w2.parts.iter().map(|p| p.cylinder.len()).max().unwrap_or(0);
    for p in &w1.parts {
        let ex = action
            .evaluate_word(&p.word)
            .map_err(ComparisonError::from)?;
        let img = ex.image_words(space, &p.cylinder);
        depth = depth.max(img.iter().map(|c| c.len()).max().unwrap_or(0));
        images.push((ex.invert(space), img));
    }
    let mut capacity: HashMap<Word, Vec<u32>> = HashMap::new();
    let mut parts = Vec::new();
    for (p, (inv, img)) in w1.parts.iter().zip(&images) {
        for e in img {
            for atom in space.refine_word(e, depth) {
                let cap = capacity.entry(atom.clone()).or_insert_with(|| {
                    w2.parts
                        .iter()
                        .map(|q| {
                            if q.cylinder.is_prefix_of(&atom) {
                                q.multiplicity
                            } else {
                                0
                            }
                        })
                        .collect()
                });
                let mut need = p.multiplicity;
                for (j, q) in w2.parts.iter().enumerate() {
                    if need == 0 {
                        break;
                    }
                    let take = need.min(cap[j]);
                    if take == 0 {
                        continue;
                    }
                    cap[j] -= take;
                    need -= take;
                    let word = q.word.then_apply_after(&p.word);
                    for c in inv.image_words(space, &atom) {
                        parts.push(OrderPart {
                            cylinder: c,
                            multiplicity: take,
                            word: word.clone(),
                        });
                    }
                }
                if need > 0 {
                    return Err(SemigroupError::InvalidArgument(
                        "second witness lacks capacity".into(),
                    ));
                }
            }
        }
    }
    let w = OrderWitness { parts }.compress(space);
    require(action, f, h, &w)?;
    Ok(w)
}

/// `2·1_A <= 1_A` from a paradoxical witness for `A`.
pub fn paradoxical_to_order(
    action: &Action,
    w: &ParadoxicalWitness,
) -> Result<OrderWitness, SemigroupError> {
    comparison::verify_paradoxical(action, w)?.map_err(|v| {
        ComparisonError::HypothesisMismatch(format!("paradoxical witness fails: {v:?}"))
    })?;
    let parts = OrderWitness::from_scheme(&w.s1)
        .parts
        .into_iter()
        .chain(OrderWitness::from_scheme(&w.s2).parts);
    Ok(OrderWitness {
        parts: parts.collect(),
    }
    .compress(action.space()))
}

/// A paradoxical witness for `A` from a witness of `2·1_A <= 1_A`.
pub fn order_to_paradoxical(
    action: &Action,
    a: &ClopenSet,
    w: &OrderWitness,
) -> Result<ParadoxicalWitness, SemigroupError> {
    let space = action.space();
    let one = TypeElement::indicator(a);
    require(action, &one.scale(space, 2), &one, w)?;
    let depth = w.parts.iter().map(|p| p.cylinder.len()).max().unwrap_or(0);
    let mut used: HashMap<Word, u32> = HashMap::new();
    let mut copies: [Vec<(Word, GroupWord)>; 2] = [Vec::new(), Vec::new()];
    for p in &w.parts {
        for atom in space.refine_word(&p.cylinder, depth) {
            let k = used.entry(atom.clone()).or_insert(0);
            for _ in 0..p.multiplicity {
                copies[*k as usize].push((atom.clone(), p.word.clone()));
                *k += 1;
            }
        }
    }
    let [first, second] = copies;
    let scheme = |mut pieces: Vec<(Word, GroupWord)>| {
        pieces.sort();
        SubequivalenceScheme {
            source: a.clone(),
            target: a.clone(),
            pieces,
        }
        .tightened(action)
    };
    let s1 = scheme(first)?;
    let s2 = scheme(second)?;
    let pw = ParadoxicalWitness {
        set: a.clone(),
        o1: s1.target.clone(),
        o2: s2.target.clone(),
        s1,
        s2,
    };
    comparison::verify_paradoxical(action, &pw)?
        .map_err(|v| ComparisonError::HypothesisMismatch(format!("split witness fails: {v:?}")))?;
    Ok(pw)
}

/// `m·f <= f` from a witness of `2f <= f`, by induction on `m`.
pub fn multiple_order(
    action: &Action,
    f: &TypeElement,
    double: &OrderWitness,
    m: u32,
) -> Result<OrderWitness, SemigroupError> {
    let space = action.space();
    if m == 0 {
        return Ok(OrderWitness::default());
    }
    require(action, &f.scale(space, 2), f, double)?;
    let id = OrderWitness::identity(space, f);
    let mut acc = id.clone();
    for k in 1..m {
        let kf = f.scale(space, k);
        let next = sum_order(space, &acc, &id);
        acc = compose_order(
            action,
            (&kf.add(space, f), &f.scale(space, 2), f),
            &next,
            double,
        )?;
    }
    Ok(acc)
}

impl SearchContext<'_> {
    /// Witness search for `[f] <= [g]`.
    pub fn search_order(
        &self,
        f: &TypeElement,
        g: &TypeElement,
    ) -> Result<SearchOutcome<OrderWitness>, SemigroupError> {
        let action = self.action();
        let space = action.space();
        let (fs, gs) = (f.to_step(space), g.to_step(space));
        if f.is_zero() {
            return Ok(SearchOutcome::Found(OrderWitness::default()));
        }
        if fs.all_pointwise(space, &gs, |a, b| a <= b) {
            return Ok(SearchOutcome::Found(OrderWitness::identity(space, f)));
        }
        if g.is_zero() {
            return Ok(SearchOutcome::NotFound(SearchStats::default()));
        }
        let norm = Normalization::Separation { lhs: fs, rhs: gs };
        if let Some(mu) = content_at_depths(action, &norm, self.bounds().depth) {
            return Ok(SearchOutcome::Refuted(mu));
        }
        if let Some(w) = self.order_by_doubling(f, g)? {
            return Ok(SearchOutcome::Found(w));
        }
        self.order_by_packing(f, g)
    }

    /// Moves `supp f` into `supp g` and spreads the levels of `f` over
    /// disjoint copies of `supp g`.
    fn order_by_doubling(
        &self,
        f: &TypeElement,
        g: &TypeElement,
    ) -> Result<Option<OrderWitness>, SemigroupError> {
        let action = self.action();
        let (s, b) = (f.support(), g.support());
        let SearchOutcome::Found(sigma) = self.search_subequivalence(&s, &b)? else {
            return Ok(None);
        };
        let multi = match f.max_multiplicity() {
            1 => self.multi_subequivalence(&b, &b, 1, None)?,
            m => match self.check_paradoxical(&b)? {
                SearchOutcome::Found(w) => {
                    self.multi_subequivalence(&b, &b, m as usize, Some(&w))?
                }
                _ => return Ok(None),
            },
        };
        let mut parts = Vec::new();
        for (level, t) in f.levels().iter().zip(&multi.schemes) {
            let piece = comparison::restrict(action, &sigma, level)?;
            parts.extend(
                OrderWitness::from_scheme(&comparison::compose_schemes(action, &piece, t)?).parts,
            );
        }
        let w = OrderWitness { parts }.compress(action.space());
        require(action, f, g, &w)?;
        Ok(Some(w))
    }

    /// Direct packing: every unit of `f` goes to one level of `g`, and units
    /// sent to the same level must land disjointly.
    fn order_by_packing(
        &self,
        f: &TypeElement,
        g: &TypeElement,
    ) -> Result<SearchOutcome<OrderWitness>, SemigroupError> {
        let action = self.action();
        let space = action.space();
        let mut stats = SearchStats::default();
        for depth in f.max_len()..=self.bounds().depth.max(f.max_len()) {
            let remaining = self.bounds().node_budget.saturating_sub(stats.nodes);
            if remaining == 0 {
                stats.budget_exhausted = true;
                break;
            }
            let mut pieces = Vec::new();
            let mut twin_next = Vec::new();
            for (i, level) in f.levels().iter().enumerate() {
                let cyl = space.refine(level, depth)?;
                let twin = f.levels().get(i + 1) == Some(level);
                for k in 0..cyl.len() {
                    twin_next.push(twin.then_some(pieces.len() + cyl.len() + k));
                }
                pieces.extend(cyl);
            }
            let (found, nodes, exhausted) =
                self.pack_layers(&pieces, twin_next, g.levels(), remaining);
            stats.nodes += nodes;
            stats.budget_exhausted |= exhausted;
            if let Some(words) = found {
                let parts = pieces
                    .into_iter()
                    .zip(words)
                    .map(|(cylinder, word)| OrderPart {
                        cylinder,
                        multiplicity: 1,
                        word,
                    })
                    .collect();
                let w = OrderWitness { parts }.compress(space);
                require(action, f, g, &w)?;
                return Ok(SearchOutcome::Found(w));
            }
        }
        Ok(SearchOutcome::NotFound(stats))
    }
}

pub fn search_order(
    action: &Action,
    f: &TypeElement,
    g: &TypeElement,
    bounds: SearchBounds,
) -> Result<SearchOutcome<OrderWitness>, SemigroupError> {
    SearchContext::new(action, bounds)?.search_order(f, g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentEntry {
    pub element: TypeElement,
    pub outcome: SearchOutcome<OrderWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurelyInfiniteReport {
    pub depth: usize,
    pub multiplicity_cap: u32,
    pub bounds: SearchBounds,
    pub entries: Vec<FragmentEntry>,
}

impl PurelyInfiniteReport {
    pub fn verified(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_found()).count()
    }

    pub fn refuted(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.outcome.is_refuted())
            .count()
    }

    pub fn inconclusive(&self) -> usize {
        self.entries.len() - self.verified() - self.refuted()
    }
}

/// Distinct nonzero elements with values in `0..=cap` on depth-`depth`
/// cylinders, in canonical order.
pub fn fragment_elements(
    space: &SftSpace,
    depth: usize,
    cap: u32,
) -> Result<Vec<TypeElement>, SemigroupError> {
    let words = space.words_of_length(depth);
    let count = (cap as u128 + 1)
        .checked_pow(words.len() as u32)
        .unwrap_or(u128::MAX);
    if count > MAX_FRAGMENT {
        return Err(SemigroupError::FragmentTooLarge {
            count,
            limit: MAX_FRAGMENT,
        });
    }
    let mut out = std::collections::BTreeSet::new();
    let mut values = vec![0u32; words.len()];
    loop {
        let terms = words.iter().cloned().zip(values.iter().copied());
        let f = TypeElement::from_step(space, &StepFunction::from_terms(space, terms));
        if !f.is_zero() {
            out.insert(f);
        }
        let Some(pos) = values.iter().position(|&v| v < cap) else {
            break;
        };
        values[pos] += 1;
        values[..pos].iter_mut().for_each(|v| *v = 0);
    }
    Ok(out.into_iter().collect())
}

/// Looks for `2[f] <= [f]` on every nonzero element with multiplicity at
/// most 2 built from depth-`depth` cylinders.
pub fn check_purely_infinite_fragment(
    action: &Action,
    depth: usize,
    bounds: SearchBounds,
) -> Result<PurelyInfiniteReport, SemigroupError> {
    SearchContext::new(action, bounds)?.check_purely_infinite_fragment(depth)
}

impl SearchContext<'_> {
    /// [`check_purely_infinite_fragment`] under this context's bounds and
    /// execution mode.
    pub fn check_purely_infinite_fragment(
        &self,
        depth: usize,
    ) -> Result<PurelyInfiniteReport, SemigroupError> {
        if depth == 0 {
            return Err(SemigroupError::InvalidArgument(
                "depth must be at least 1".into(),
            ));
        }
        let ctx = self;
        let action = self.action();
        let bounds = self.bounds();
        let space = action.space();
        let cap = 2;
        let elements = fragment_elements(space, depth, cap)?;
        let mut sets: Vec<ClopenSet> = elements
            .iter()
            .flat_map(|e| e.levels().iter().cloned())
            .collect();
        sets.sort();
        sets.dedup();
        ctx.catalog();
        let doubles = par::map(ctx.execution(), &sets, |a| match ctx.check_paradoxical(a) {
            Ok(SearchOutcome::Found(w)) => paradoxical_to_order(action, &w).ok(),
            _ => None,
        });
        let doubles: HashMap<&ClopenSet, &Option<OrderWitness>> =
            sets.iter().zip(&doubles).collect();
        let mut entries = Vec::with_capacity(elements.len());
        for f in elements {
            let per_level: Option<Vec<&OrderWitness>> =
                f.levels().iter().map(|l| doubles[l].as_ref()).collect();
            let outcome = match per_level {
                Some(ws) => {
                    let w = ws
                        .into_iter()
                        .fold(OrderWitness::default(), |acc, w| sum_order(space, &acc, w));
                    require(action, &f.scale(space, 2), &f, &w)?;
                    SearchOutcome::Found(w)
                }
                None => ctx.search_order(&f.scale(space, 2), &f)?,
            };
            entries.push(FragmentEntry {
                element: f,
                outcome,
            });
        }
        Ok(PurelyInfiniteReport {
            depth,
            multiplicity_cap: cap,
            bounds,
            entries,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnperforationStatus {
    /// The premise `(n+1)f <= ng` is refuted or `f` is zero.
    Vacuous,
    /// Both witnesses found.
    Established,
    /// Some witness was not found within the bounds.
    Inconclusive,
    /// The premise holds but `f <= g` is refuted by a content.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnperforationEntry {
    pub f: TypeElement,
    pub g: TypeElement,
    pub n: u32,
    pub premise: SearchOutcome<OrderWitness>,
    pub conclusion: Option<SearchOutcome<OrderWitness>>,
    pub status: UnperforationStatus,
}

impl SearchContext<'_> {
    /// `n[g] <= [g]` through `2[g] <= [g]` built from paradoxical level sets.
    fn multiple_of(&self, g: &TypeElement, n: u32) -> Result<Option<OrderWitness>, SemigroupError> {
        let space = self.action().space();
        let mut double = OrderWitness::default();
        for level in g.levels() {
            let SearchOutcome::Found(w) = self.check_paradoxical(level)? else {
                return Ok(None);
            };
            double = sum_order(space, &double, &paradoxical_to_order(self.action(), &w)?);
        }
        Ok(Some(multiple_order(self.action(), g, &double, n)?))
    }

    /// `[f] <= (n+1)[f] <= n[g] <= [g]`.
    fn order_by_chain(
        &self,
        f: &TypeElement,
        g: &TypeElement,
        n: u32,
        premise: &OrderWitness,
    ) -> Result<Option<OrderWitness>, SemigroupError> {
        let action = self.action();
        let space = action.space();
        let Some(down) = self.multiple_of(g, n)? else {
            return Ok(None);
        };
        let (f1, gn) = (f.scale(space, n + 1), g.scale(space, n));
        let up = OrderWitness::identity(space, f);
        let first = compose_order(action, (f, &f1, &gn), &up, premise)?;
        Ok(Some(compose_order(action, (f, &gn, g), &first, &down)?))
    }

    pub fn almost_unperforation_instance(
        &self,
        f: &TypeElement,
        g: &TypeElement,
        n: u32,
    ) -> Result<UnperforationEntry, SemigroupError> {
        if n == 0 {
            return Err(SemigroupError::InvalidArgument(
                "n must be at least 1".into(),
            ));
        }
        let space = self.action().space();
        let entry = |premise, conclusion, status| UnperforationEntry {
            f: f.clone(),
            g: g.clone(),
            n,
            premise,
            conclusion,
            status,
        };
        if f.is_zero() {
            let w = SearchOutcome::Found(OrderWitness::default());
            return Ok(entry(w.clone(), Some(w), UnperforationStatus::Vacuous));
        }
        let premise = self.search_order(&f.scale(space, n + 1), &g.scale(space, n))?;
        let pw = match &premise {
            SearchOutcome::Found(w) => w.clone(),
            SearchOutcome::Refuted(_) => {
                return Ok(entry(premise, None, UnperforationStatus::Vacuous))
            }
            SearchOutcome::NotFound(_) => {
                return Ok(entry(premise, None, UnperforationStatus::Inconclusive))
            }
        };
        let direct = self.search_order(f, g)?;
        let conclusion = match direct {
            SearchOutcome::Found(_) => direct,
            SearchOutcome::Refuted(_) => {
                return Ok(entry(
                    premise,
                    Some(direct),
                    UnperforationStatus::Contradiction,
                ))
            }
            SearchOutcome::NotFound(_) => match self.order_by_chain(f, g, n, &pw)? {
                Some(w) => SearchOutcome::Found(w),
                None => SearchContext::new(self.action(), self.bounds().enlarged())?
                    .with_execution(self.execution())
                    .search_order(f, g)?,
            },
        };
        let status = match &conclusion {
            SearchOutcome::Found(_) => UnperforationStatus::Established,
            SearchOutcome::Refuted(_) => UnperforationStatus::Contradiction,
            SearchOutcome::NotFound(_) => UnperforationStatus::Inconclusive,
        };
        Ok(entry(premise, Some(conclusion), status))
    }
}

pub fn check_almost_unperforation_instances(
    action: &Action,
    triples: &[(TypeElement, TypeElement, u32)],
    bounds: SearchBounds,
) -> Result<Vec<UnperforationEntry>, SemigroupError> {
    let ctx = SearchContext::new(action, bounds)?;
    triples
        .iter()
        .map(|(f, g, n)| ctx.almost_unperforation_instance(f, g, *n))
        .collect()
}
