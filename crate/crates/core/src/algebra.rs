//! Exact finite sums `Σ b_t u_t` with rational step-function coefficients,
//! multiplied by the covariance rule `u_s h u_s⁻¹ = s▷h` where
//! `(s▷h)(x) = h(s⁻¹x)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::action::{Action, ActionError, PrefixExchange};
use crate::comparison::{
    verify_paradoxical, verify_scheme, ComparisonError, ParadoxicalWitness, SubequivalenceScheme,
};
use crate::lp::Rational;
use crate::sft::{ClopenSet, SftSpace};
use crate::step::StepFunction;

pub type Coefficient = StepFunction<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error("scheme does not verify")]
    SchemeInvalid,
    #[error("geometry violated: {0}")]
    GeometryViolated(String),
    #[error("x*x is not an indicator function")]
    NotIndicator,
    #[error("not a scaling element: {0}")]
    NotScaling(String),
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
}

/// `Σ_t b_t u_t`, keyed by the normal form of `t`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<PrefixExchange, Coefficient>,
}

fn one() -> Rational {
    Rational::one()
}

/// Indicator of a set with rational values.
pub fn indicator(set: &ClopenSet) -> Coefficient {
    StepFunction::indicator_scaled(set, one())
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `b·u_t`.
    pub fn term(b: Coefficient, t: PrefixExchange) -> Self {
        let mut terms = BTreeMap::new();
        if !b.is_zero() {
            terms.insert(t, b);
        }
        AlgebraElement { terms }
    }

    pub fn unit() -> Self {
        Self::term(indicator(&ClopenSet::whole()), PrefixExchange::identity())
    }

    /// `f·u_e`.
    pub fn function(f: Coefficient) -> Self {
        Self::term(f, PrefixExchange::identity())
    }

    /// `u_t`.
    pub fn unitary(t: PrefixExchange) -> Self {
        Self::term(indicator(&ClopenSet::whole()), t)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PrefixExchange, &Coefficient)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &PrefixExchange) -> Coefficient {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    fn accumulate(&mut self, space: &SftSpace, t: PrefixExchange, b: Coefficient) {
        if b.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&t) {
            Some(old) => old.add(space, &b),
            None => b,
        };
        if !sum.is_zero() {
            self.terms.insert(t, sum);
        }
    }

    pub fn add(&self, space: &SftSpace, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, b) in &other.terms {
            out.accumulate(space, t.clone(), b.clone());
        }
        out
    }

    pub fn scale(&self, space: &SftSpace, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (t, b) in &self.terms {
            out.accumulate(space, t.clone(), b.map_values(space, |v| v * c));
        }
        out
    }

    pub fn sub(&self, space: &SftSpace, other: &Self) -> Self {
        self.add(space, &other.scale(space, &-one()))
    }

    /// `(f u_s)(h u_t) = f·(s▷h)·u_{st}`, extended bilinearly.
    pub fn multiply(&self, space: &SftSpace, other: &Self) -> Self {
        let mut out = Self::zero();
        for (s, f) in &self.terms {
            for (t, h) in &other.terms {
                let moved = s.translate(space, h);
                let coeff = f.combine(space, &moved, |a, b| a * b);
                out.accumulate(space, s.compose(space, t), coeff);
            }
        }
        out
    }

    /// `(f u_t)* = (t⁻¹▷f) u_{t⁻¹}`.
    pub fn star(&self, space: &SftSpace) -> Self {
        let mut out = Self::zero();
        for (t, f) in &self.terms {
            let inv = t.invert(space);
            let moved = inv.translate(space, f);
            out.accumulate(space, inv, moved);
        }
        out
    }

    /// `p = p* = p²`.
    pub fn is_projection(&self, space: &SftSpace) -> bool {
        self.star(space) == *self && self.multiply(space, self) == *self
    }
}

pub fn algebra_multiply(
    space: &SftSpace,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> AlgebraElement {
    a.multiply(space, b)
}

pub fn algebra_star(space: &SftSpace, a: &AlgebraElement) -> AlgebraElement {
    a.star(space)
}

/// Coefficient at the identity.
pub fn expectation(a: &AlgebraElement) -> Coefficient {
    a.coefficient(&PrefixExchange::identity())
}

/// Pointwise `max(f - eps, 0)`.
pub fn positive_part_shift(space: &SftSpace, f: &Coefficient, eps: &Rational) -> Coefficient {
    let shifted = f.combine(
        space,
        &StepFunction::indicator_scaled(&ClopenSet::whole(), eps.clone()),
        |a, b| a - b,
    );
    shifted.map_values(space, |v| {
        if v.is_positive() {
            v.clone()
        } else {
            Rational::zero()
        }
    })
}

/// Whether every value is 0 or 1.
pub fn is_indicator(f: &Coefficient) -> bool {
    f.terms().all(|(_, v)| v.is_one())
}

/// `x = Σ u_{t_i} 1_{p_i}` for a verified scheme, with its two projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsometry {
    pub x: AlgebraElement,
    /// `x*x`, the indicator of the source.
    pub source_projection: AlgebraElement,
    /// `xx*`, the indicator of the union of the images.
    pub range_projection: AlgebraElement,
}

fn scheme_element(
    action: &Action,
    s: &SubequivalenceScheme,
) -> Result<AlgebraElement, AlgebraError> {
    if verify_scheme(action, s)?.is_err() {
        return Err(AlgebraError::SchemeInvalid);
    }
    let space = action.space();
    let mut x = AlgebraElement::zero();
    for (p, w) in &s.pieces {
        let t = action.evaluate_word(w)?;
        let piece =
            AlgebraElement::function(indicator(&space.cylinder(p).map_err(ActionError::from)?));
        x = x.add(space, &AlgebraElement::unitary(t).multiply(space, &piece));
    }
    Ok(x)
}

/// Builds `x` and checks `x*x = 1_source` and `xx* = 1_images` exactly.
pub fn partial_isometry_from_scheme(
    action: &Action,
    s: &SubequivalenceScheme,
) -> Result<PartialIsometry, AlgebraError> {
    let space = action.space();
    let x = scheme_element(action, s)?;
    let xs = x.star(space);
    let source_projection = xs.multiply(space, &x);
    let range_projection = x.multiply(space, &xs);
    if source_projection != AlgebraElement::function(indicator(&s.source)) {
        return Err(AlgebraError::IdentityFailed(
            "x*x differs from the source indicator".into(),
        ));
    }
    let images = s.image_union(action)?;
    if range_projection != AlgebraElement::function(indicator(&images)) {
        return Err(AlgebraError::IdentityFailed(
            "xx* differs from the image indicator".into(),
        ));
    }
    Ok(PartialIsometry {
        x,
        source_projection,
        range_projection,
    })
}

/// A scaling element `x`: `x*x ≠ xx*` and `(x*x)(xx*) = xx*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingElement {
    pub x: AlgebraElement,
    pub x_star_x: AlgebraElement,
    pub x_x_star: AlgebraElement,
}

/// Builds a scaling element from a scheme. `guard_f` must lie inside the
/// source and the images must lie inside `guard_u`.
pub fn scaling_element_from_scheme(
    action: &Action,
    s: &SubequivalenceScheme,
    guard_f: &ClopenSet,
    guard_u: &ClopenSet,
) -> Result<ScalingElement, AlgebraError> {
    let space = action.space();
    let p = partial_isometry_from_scheme(action, s)?;
    let images = s.image_union(action)?;
    if !space.is_subset(guard_f, &s.source) {
        return Err(AlgebraError::GeometryViolated(
            "guard set is not inside the source".into(),
        ));
    }
    if !space.is_subset(&images, guard_u) {
        return Err(AlgebraError::GeometryViolated(
            "images leave the guard region".into(),
        ));
    }
    let prod = p.source_projection.multiply(space, &p.range_projection);
    if prod != p.range_projection {
        return Err(AlgebraError::GeometryViolated(
            "(x*x)(xx*) differs from xx*: images leave the source".into(),
        ));
    }
    if p.source_projection == p.range_projection {
        return Err(AlgebraError::NotScaling("x*x equals xx*".into()));
    }
    Ok(ScalingElement {
        x: p.x,
        x_star_x: p.source_projection,
        x_x_star: p.range_projection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    pub v: AlgebraElement,
    /// `vv*`.
    pub range: AlgebraElement,
}

/// `v = x + (1 - x*x)`, checking `v*v = 1` and that `vv*` is a projection.
pub fn isometry_from_scaling(
    space: &SftSpace,
    x: &AlgebraElement,
) -> Result<Isometry, AlgebraError> {
    let xs = x.star(space);
    let xsx = xs.multiply(space, x);
    let xxs = x.multiply(space, &xs);
    if xsx == xxs {
        return Err(AlgebraError::NotScaling("x*x equals xx*".into()));
    }
    if xsx.multiply(space, &xxs) != xxs {
        return Err(AlgebraError::NotScaling(
            "(x*x)(xx*) differs from xx*".into(),
        ));
    }
    if xsx.terms().any(|(t, _)| !t.is_identity()) || !is_indicator(&expectation(&xsx)) {
        return Err(AlgebraError::NotIndicator);
    }
    let v = x.add(space, &AlgebraElement::unit().sub(space, &xsx));
    let vs = v.star(space);
    if vs.multiply(space, &v) != AlgebraElement::unit() {
        return Err(AlgebraError::IdentityFailed("v*v differs from 1".into()));
    }
    let range = v.multiply(space, &vs);
    if !range.is_projection(space) {
        return Err(AlgebraError::IdentityFailed(
            "vv* is not a projection".into(),
        ));
    }
    Ok(Isometry { v, range })
}

/// `r` with `r*·1_target·r = 1_source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuntzWitness {
    pub r: AlgebraElement,
    pub source: ClopenSet,
    pub target: ClopenSet,
}

impl CuntzWitness {
    /// Exact replay of `r*·1_target·r = 1_source`.
    pub fn replay(&self, space: &SftSpace) -> bool {
        let g = AlgebraElement::function(indicator(&self.target));
        let lhs = self
            .r
            .star(space)
            .multiply(space, &g)
            .multiply(space, &self.r);
        lhs == AlgebraElement::function(indicator(&self.source))
    }
}

pub fn cuntz_witness_from_scheme(
    action: &Action,
    s: &SubequivalenceScheme,
) -> Result<CuntzWitness, AlgebraError> {
    let r = scheme_element(action, s)?;
    let w = CuntzWitness {
        r,
        source: s.source.clone(),
        target: s.target.clone(),
    };
    if !w.replay(action.space()) {
        return Err(AlgebraError::IdentityFailed(
            "r*·1_target·r differs from 1_source".into(),
        ));
    }
    Ok(w)
}

/// Two witnesses for `1_A ⊕ 1_A ≾ 1_A` with `r1*·r2 = 0`.
pub fn cuntz_pair_from_paradoxical(
    action: &Action,
    w: &ParadoxicalWitness,
) -> Result<(CuntzWitness, CuntzWitness), AlgebraError> {
    if verify_paradoxical(action, w)?.is_err() {
        return Err(AlgebraError::SchemeInvalid);
    }
    let space = action.space();
    let widen = |s: &SubequivalenceScheme| SubequivalenceScheme {
        target: w.set.clone(),
        ..s.clone()
    };
    let r1 = cuntz_witness_from_scheme(action, &widen(&w.s1))?;
    let r2 = cuntz_witness_from_scheme(action, &widen(&w.s2))?;
    if !r1.r.star(space).multiply(space, &r2.r).is_zero() {
        return Err(AlgebraError::IdentityFailed("r1*·r2 is not zero".into()));
    }
    Ok((r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::builtin::f2_boundary;
    use crate::lp::rat;

    fn ind(act: &Action, lit: &str) -> Coefficient {
        indicator(&act.space().parse_set(lit).unwrap())
    }

    fn gen(act: &Action, w: &str) -> PrefixExchange {
        act.evaluate_word(&act.parse_group_word(w).unwrap())
            .unwrap()
    }

    fn scheme(act: &Action, src: &str, tgt: &str, pieces: &[(&str, &str)]) -> SubequivalenceScheme {
        let s = act.space();
        SubequivalenceScheme {
            source: s.parse_set(src).unwrap(),
            target: s.parse_set(tgt).unwrap(),
            pieces: pieces
                .iter()
                .map(|(p, w)| (s.parse_word(p).unwrap(), act.parse_group_word(w).unwrap()))
                .collect(),
        }
    }

    #[test]
    fn products_and_star() {
        let act = f2_boundary();
        let s = act.space();
        let ga = gen(&act, "ga");
        let b = AlgebraElement::function(ind(&act, "[b]"));
        let u = AlgebraElement::unitary(ga.clone());
        assert_eq!(
            b.multiply(s, &u),
            AlgebraElement::term(ind(&act, "[b]"), ga.clone())
        );
        let uinv = AlgebraElement::unitary(gen(&act, "ga^-1"));
        assert_eq!(u.multiply(s, &uinv), AlgebraElement::unit());
        assert_eq!(
            u.multiply(s, &b),
            AlgebraElement::term(ind(&act, "[ab]"), ga.clone())
        );

        let a = AlgebraElement::term(ind(&act, "[b]"), ga.clone());
        assert_eq!(
            a.star(s),
            AlgebraElement::term(ind(&act, "[Ab]"), gen(&act, "ga^-1"))
        );
        assert_eq!(AlgebraElement::unit().star(s), AlgebraElement::unit());
        assert_eq!(expectation(&a.star(s).multiply(s, &a)), ind(&act, "[Ab]"));
        assert_eq!(expectation(&a.multiply(s, &a.star(s))), ind(&act, "[b]"));
        assert!(expectation(&u).is_zero());
        let mixed = AlgebraElement::function(ind(&act, "[a]")).add(s, &a);
        assert_eq!(expectation(&mixed), ind(&act, "[a]"));
    }

    #[test]
    fn scaling_and_isometry() {
        let act = f2_boundary();
        let s = act.space();
        let sc = scheme(&act, "[a]", "[ab]", &[("a", "ga*gb")]);
        let a = s.parse_set("[a]").unwrap();
        let x = scaling_element_from_scheme(&act, &sc, &a, &s.parse_set("[ab]").unwrap()).unwrap();
        assert_eq!(x.x_star_x, AlgebraElement::function(ind(&act, "[a]")));
        assert_eq!(x.x_x_star, AlgebraElement::function(ind(&act, "[aba]")));
        let v = isometry_from_scaling(s, &x.x).unwrap();
        assert_eq!(v.v.star(s).multiply(s, &v.v), AlgebraElement::unit());
        assert!(v.range.is_projection(s));

        let id = scheme(&act, "[a]", "[a]", &[("a", "e")]);
        assert!(matches!(
            scaling_element_from_scheme(&act, &id, &a, &a),
            Err(AlgebraError::NotScaling(_))
        ));
        assert!(isometry_from_scaling(s, &AlgebraElement::zero()).is_err());

        let two = scheme(&act, "[b]|[B]", "[a]", &[("b", "ga"), ("B", "ga")]);
        let p = partial_isometry_from_scheme(&act, &two).unwrap();
        assert_eq!(
            p.source_projection,
            AlgebraElement::function(ind(&act, "[b]|[B]"))
        );
        assert_eq!(
            p.range_projection,
            AlgebraElement::function(ind(&act, "[ab]|[aB]"))
        );
        let f = s.parse_set("[b]").unwrap();
        assert!(matches!(
            scaling_element_from_scheme(&act, &two, &f, &ClopenSet::whole()),
            Err(AlgebraError::GeometryViolated(_))
        ));
    }

    #[test]
    fn cuntz_witnesses() {
        let act = f2_boundary();
        let two = scheme(&act, "[b]|[B]", "[a]", &[("b", "ga"), ("B", "ga")]);
        assert!(cuntz_witness_from_scheme(&act, &two)
            .unwrap()
            .replay(act.space()));
        let id = scheme(&act, "[ab]", "[a]", &[("ab", "e")]);
        let w = cuntz_witness_from_scheme(&act, &id).unwrap();
        assert_eq!(w.r, AlgebraElement::function(ind(&act, "[ab]")));
        let pw = crate::comparison::check_paradoxical(
            &act,
            &act.space().parse_set("[a]").unwrap(),
            Default::default(),
        );
        let (r1, r2) = cuntz_pair_from_paradoxical(&act, &pw.unwrap().found().unwrap()).unwrap();
        assert!(r1.replay(act.space()) && r2.replay(act.space()));
    }

    #[test]
    fn positive_part() {
        let act = f2_boundary();
        let s = act.space();
        let f = ind(&act, "[a]").add(s, &ind(&act, "[ab]"));
        let g = positive_part_shift(s, &f, &rat(1));
        assert_eq!(g, ind(&act, "[ab]"));
    }
}
