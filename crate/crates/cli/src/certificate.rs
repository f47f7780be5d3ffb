//! Self-contained certificates and their replay.
//!
//! ```text
//! paradox-certificate 1
//! version paracomp 0.1.0
//! kind <kind>
//! action-hash sha256:<hex of the action block>
//! bounds depth <d> word-length <l> node-budget <b>   | bounds none
//! begin-action
//! <canonical action text>
//! end-action
//! <key> <arg> <arg> …                                  (payload, kind-specific)
//! end-certificate
//! ```
//!
//! Replay uses only the exact verifiers of the core crate; it never searches.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use paracomp::action::{Action, GroupWord, PrefixExchange, TowerWitness};
use paracomp::algebra::{
    cuntz_witness_from_scheme, isometry_from_scaling, scaling_element_from_scheme,
};
use paracomp::comparison::{
    verify_filling_cover, verify_paradoxical, verify_scheme, ParadoxicalWitness, SearchBounds,
    SubequivalenceScheme,
};
use paracomp::lp::Rational;
use paracomp::measures::{
    verify_content, verify_infeasibility, InfeasibilityCertificate, InvariantContent, Normalization,
};
use paracomp::semigroup::{
    fragment_elements, verify_order_witness, OrderPart, OrderWitness, TypeElement,
};
use paracomp::sft::{ClopenSet, SftSpace, Word};
use paracomp::StepFunction;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::actionfile::{format_action, parse_action_file};
use crate::literal::{
    self, parse_canonical_set, parse_cylinder, parse_group_word, parse_type_element,
};

pub const HEADER: &str = "paradox-certificate 1";
pub const VERSION: &str = concat!("paracomp ", env!("CARGO_PKG_VERSION"));

/// Multiplicity bound of the fragment in `purely-infinite` certificates.
pub const FRAGMENT_CAP: u32 = 2;

/// Largest number of translate combinations an exhaustion replay tries.
pub const MAX_EXHAUSTION: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Subequivalence,
    Paradoxical,
    Tower,
    Order,
    Measure,
    Infeasibility,
    Scaling,
    Isometry,
    Cuntz,
    Filling,
    Boundary,
    PurelyInfinite,
    Exhaustion,
}

const KINDS: [(Kind, &str); 13] = [
    (Kind::Subequivalence, "subequivalence"),
    (Kind::Paradoxical, "paradoxical"),
    (Kind::Tower, "tower"),
    (Kind::Order, "order"),
    (Kind::Measure, "measure"),
    (Kind::Infeasibility, "infeasibility"),
    (Kind::Scaling, "scaling"),
    (Kind::Isometry, "isometry"),
    (Kind::Cuntz, "cuntz"),
    (Kind::Filling, "filling"),
    (Kind::Boundary, "boundary"),
    (Kind::PurelyInfinite, "purely-infinite"),
    (Kind::Exhaustion, "exhaustion"),
];

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = KINDS
            .iter()
            .find(|(k, _)| k == self)
            .map(|(_, n)| *n)
            .unwrap_or("?");
        f.write_str(name)
    }
}

impl FromStr for Kind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        KINDS
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(k, _)| *k)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Arity {
    Exact(usize),
    AtLeast(usize),
}

const SCHEME_KEYS: [(&str, Arity); 3] = [
    ("source", Arity::Exact(1)),
    ("target", Arity::Exact(1)),
    ("piece", Arity::Exact(2)),
];
const GUARD_KEYS: [(&str, Arity); 2] = [("guard-f", Arity::Exact(1)), ("guard-u", Arity::Exact(1))];

fn keys(kind: Kind) -> Vec<(&'static str, Arity)> {
    use Arity::*;
    match kind {
        Kind::Subequivalence => SCHEME_KEYS.to_vec(),
        Kind::Paradoxical => vec![
            ("set", Exact(1)),
            ("target1", Exact(1)),
            ("target2", Exact(1)),
            ("piece1", Exact(2)),
            ("piece2", Exact(2)),
        ],
        Kind::Tower => vec![("base", Exact(1)), ("word", Exact(1))],
        Kind::Order => vec![("f", Exact(1)), ("g", Exact(1)), ("part", Exact(3))],
        Kind::Measure => vec![
            ("claim", AtLeast(1)),
            ("depth", Exact(1)),
            ("mass", Exact(2)),
        ],
        Kind::Infeasibility => vec![
            ("claim", AtLeast(1)),
            ("depth", Exact(1)),
            ("multiplier", Exact(2)),
        ],
        Kind::Scaling => [&SCHEME_KEYS[..], &GUARD_KEYS[..], &[("x-term", Exact(2))]].concat(),
        Kind::Isometry => [&SCHEME_KEYS[..], &GUARD_KEYS[..], &[("v-term", Exact(2))]].concat(),
        Kind::Cuntz => [&SCHEME_KEYS[..], &[("r-term", Exact(2))]].concat(),
        Kind::Filling => vec![("n", Exact(1)), ("depth", Exact(1)), ("cover", AtLeast(3))],
        Kind::Boundary => vec![("depth", Exact(1)), ("move", Exact(3))],
        Kind::PurelyInfinite => vec![
            ("depth", Exact(1)),
            ("element", Exact(1)),
            ("part", Exact(3)),
        ],
        Kind::Exhaustion => vec![("claim", AtLeast(1)), ("group-element", Exact(1))],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub key: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: Kind,
    pub version: String,
    pub action_hash: String,
    pub action_text: String,
    pub bounds: Option<SearchBounds>,
    pub payload: Vec<Line>,
}

/// The certificate text is not in the grammar.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed certificate at line {line}: {msg}")]
pub struct Malformed {
    pub line: usize,
    pub msg: String,
}

/// The certificate is well formed but does not replay.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate rejected: {0}")]
pub struct Rejected(pub String);

fn reject(msg: impl Into<String>) -> Rejected {
    Rejected(msg.into())
}

pub fn action_hash(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

impl Certificate {
    pub fn new(kind: Kind, action: &Action, bounds: Option<SearchBounds>) -> Self {
        let action_text = format_action(action);
        Certificate {
            kind,
            version: VERSION.to_string(),
            action_hash: action_hash(&action_text),
            action_text,
            bounds,
            payload: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, key: &str, args: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.payload.push(Line {
            key: key.to_string(),
            args: args.into_iter().map(Into::into).collect(),
        });
    }

    pub fn push_scheme(&mut self, action: &Action, s: &SubequivalenceScheme) {
        let space = action.space();
        self.push("source", [literal::set(space, &s.source)]);
        self.push("target", [literal::set(space, &s.target)]);
        push_pieces(self, action, "piece", &s.pieces);
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{HEADER}\nversion {}\nkind {}\naction-hash {}\n",
            self.version, self.kind, self.action_hash
        );
        match self.bounds {
            Some(b) => {
                out += &format!(
                    "bounds depth {} word-length {} node-budget {}\n",
                    b.depth, b.word_length, b.node_budget
                )
            }
            None => out += "bounds none\n",
        }
        out += "begin-action\n";
        out += &self.action_text;
        out += "end-action\n";
        for l in &self.payload {
            out += &l.key;
            for a in &l.args {
                out.push(' ');
                out += a;
            }
            out.push('\n');
        }
        out += "end-certificate\n";
        out
    }

    pub fn parse(text: &str) -> Result<Self, Malformed> {
        let lines: Vec<&str> = text.lines().collect();
        let bad = |line: usize, msg: &str| Malformed {
            line,
            msg: msg.to_string(),
        };
        let field = |i: usize, key: &str| -> Result<&str, Malformed> {
            lines
                .get(i)
                .and_then(|l| l.strip_prefix(key))
                .and_then(|l| l.strip_prefix(' '))
                .ok_or_else(|| bad(i + 1, &format!("expected `{key} …`")))
        };
        if lines.first() != Some(&HEADER) {
            return Err(bad(1, "missing header"));
        }
        let version = field(1, "version")?.to_string();
        let kind: Kind = field(2, "kind")?
            .parse()
            .map_err(|_| bad(3, "unknown kind"))?;
        let action_hash = field(3, "action-hash")?.to_string();
        let hex_part = action_hash
            .strip_prefix("sha256:")
            .ok_or_else(|| bad(4, "expected sha256 hash"))?;
        if hex_part.len() != 64 || !hex_part.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad(4, "expected 64 hex digits"));
        }
        let bounds = parse_bounds(field(4, "bounds")?).ok_or_else(|| bad(5, "malformed bounds"))?;
        if lines.get(5) != Some(&"begin-action") {
            return Err(bad(6, "expected begin-action"));
        }
        let end_action = lines
            .iter()
            .position(|l| *l == "end-action")
            .ok_or_else(|| bad(lines.len(), "missing end-action"))?;
        let mut action_text = String::new();
        for l in &lines[6..end_action] {
            action_text += l;
            action_text.push('\n');
        }
        if lines.last() != Some(&"end-certificate") || !text.ends_with('\n') {
            return Err(bad(lines.len(), "truncated: missing end-certificate"));
        }
        let allowed = keys(kind);
        let mut payload = Vec::new();
        for (i, l) in lines
            .iter()
            .enumerate()
            .take(lines.len() - 1)
            .skip(end_action + 1)
        {
            let mut parts = l.split(' ');
            let key = parts.next().unwrap_or("");
            let args: Vec<String> = parts.map(str::to_string).collect();
            if args.iter().any(String::is_empty) {
                return Err(bad(i + 1, "empty field"));
            }
            let Some((_, arity)) = allowed.iter().find(|(k, _)| *k == key) else {
                return Err(bad(
                    i + 1,
                    &format!("unexpected key `{key}` for kind {kind}"),
                ));
            };
            let ok = match arity {
                Arity::Exact(n) => args.len() == *n,
                Arity::AtLeast(n) => args.len() >= *n,
            };
            if !ok {
                return Err(bad(i + 1, &format!("wrong number of fields for `{key}`")));
            }
            payload.push(Line {
                key: key.to_string(),
                args,
            });
        }
        Ok(Certificate {
            kind,
            version,
            action_hash,
            action_text,
            bounds,
            payload,
        })
    }
}

fn parse_bounds(s: &str) -> Option<Option<SearchBounds>> {
    if s == "none" {
        return Some(None);
    }
    let t: Vec<&str> = s.split(' ').collect();
    match t.as_slice() {
        ["depth", d, "word-length", l, "node-budget", b] => {
            SearchBounds::new(d.parse().ok()?, l.parse().ok()?, b.parse().ok()?)
                .ok()
                .map(Some)
        }
        _ => None,
    }
}

fn push_pieces(cert: &mut Certificate, action: &Action, key: &str, pieces: &[(Word, GroupWord)]) {
    for (c, w) in pieces {
        cert.push(
            key,
            [
                literal::cylinder(action.space(), c),
                literal::group_word(action, w),
            ],
        );
    }
}

/// What a content, an infeasibility certificate or an exhaustion establishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    /// An invariant content of total mass 1 exists (or not).
    Probability,
    /// An invariant content giving the set mass 1 exists (or not).
    Normalized(ClopenSet),
    NotParadoxical(ClopenSet),
    NotSubequivalent(ClopenSet, ClopenSet),
    NotOrder(TypeElement, TypeElement),
    /// The translates of this tuple of cylinders never cover the space.
    NotFilling(Vec<Word>),
    /// No single group element moves the first set into the second.
    NotBoundary(ClopenSet, ClopenSet),
}

impl Claim {
    pub fn args(&self, space: &SftSpace) -> Vec<String> {
        let set = |a: &ClopenSet| literal::set(space, a);
        match self {
            Claim::Probability => vec!["probability".into()],
            Claim::Normalized(o) => vec!["normalized".into(), set(o)],
            Claim::NotParadoxical(a) => vec!["not-paradoxical".into(), set(a)],
            Claim::NotSubequivalent(f, o) => vec!["not-subequivalent".into(), set(f), set(o)],
            Claim::NotOrder(f, g) => {
                vec![
                    "not-order".into(),
                    literal::type_element(space, f),
                    literal::type_element(space, g),
                ]
            }
            Claim::NotFilling(t) => std::iter::once("not-filling".to_string())
                .chain(t.iter().map(|w| literal::cylinder(space, w)))
                .collect(),
            Claim::NotBoundary(f, o) => vec!["not-boundary".into(), set(f), set(o)],
        }
    }

    fn parse(space: &SftSpace, args: &[String]) -> Result<Claim, Rejected> {
        let set = |t: &String| parse_canonical_set(space, t).map_err(|e| reject(e.to_string()));
        let te = |t: &String| parse_type_element(space, t).map_err(|e| reject(e.to_string()));
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        match a.as_slice() {
            ["probability"] => Ok(Claim::Probability),
            ["normalized", _] => Ok(Claim::Normalized(set(&args[1])?)),
            ["not-paradoxical", _] => Ok(Claim::NotParadoxical(set(&args[1])?)),
            ["not-subequivalent", _, _] => {
                Ok(Claim::NotSubequivalent(set(&args[1])?, set(&args[2])?))
            }
            ["not-order", _, _] => Ok(Claim::NotOrder(te(&args[1])?, te(&args[2])?)),
            ["not-filling", ..] if a.len() >= 3 => Ok(Claim::NotFilling(
                args[1..]
                    .iter()
                    .map(|t| parse_cylinder(space, t).map_err(|e| reject(e.to_string())))
                    .collect::<Result<_, _>>()?,
            )),
            ["not-boundary", _, _] => Ok(Claim::NotBoundary(set(&args[1])?, set(&args[2])?)),
            _ => Err(reject("unknown claim")),
        }
    }

    /// The normalization whose feasibility the claim asserts or denies.
    pub fn normalization(&self, space: &SftSpace) -> Option<Normalization> {
        let ind = |a: &ClopenSet| StepFunction::indicator_scaled(a, 1u32);
        let mass_one = |a: &ClopenSet| {
            if a.is_whole() {
                Normalization::Probability
            } else {
                Normalization::Set(a.clone())
            }
        };
        match self {
            Claim::Probability => Some(Normalization::Probability),
            Claim::Normalized(o) | Claim::NotParadoxical(o) => Some(mass_one(o)),
            Claim::NotSubequivalent(f, o) => Some(Normalization::Separation {
                lhs: ind(f),
                rhs: ind(o),
            }),
            Claim::NotOrder(f, g) => Some(Normalization::Separation {
                lhs: f.to_step(space),
                rhs: g.to_step(space),
            }),
            Claim::NotFilling(t) => Some(Normalization::Separation {
                lhs: ind(&ClopenSet::whole()),
                rhs: StepFunction::from_terms(space, t.iter().map(|w| (w.clone(), 1u32))),
            }),
            Claim::NotBoundary(..) => None,
        }
    }
}

pub fn push_content(
    cert: &mut Certificate,
    space: &SftSpace,
    claim: &Claim,
    mu: &InvariantContent,
) {
    cert.push("claim", claim.args(space));
    cert.push("depth", [mu.depth.to_string()]);
    for (w, v) in &mu.values {
        cert.push("mass", [literal::cylinder(space, w), v.to_string()]);
    }
}

pub fn push_infeasibility(
    cert: &mut Certificate,
    space: &SftSpace,
    claim: &Claim,
    c: &InfeasibilityCertificate,
) {
    cert.push("claim", claim.args(space));
    cert.push("depth", [c.depth.to_string()]);
    for (i, v) in &c.multipliers {
        cert.push("multiplier", [i.to_string(), v.to_string()]);
    }
}

pub fn push_paradoxical(cert: &mut Certificate, action: &Action, w: &ParadoxicalWitness) {
    let space = action.space();
    cert.push("set", [literal::set(space, &w.set)]);
    cert.push("target1", [literal::set(space, &w.o1)]);
    cert.push("target2", [literal::set(space, &w.o2)]);
    push_pieces(cert, action, "piece1", &w.s1.pieces);
    push_pieces(cert, action, "piece2", &w.s2.pieces);
}

pub fn push_order(cert: &mut Certificate, action: &Action, w: &OrderWitness) {
    for p in &w.parts {
        cert.push(
            "part",
            [
                literal::cylinder(action.space(), &p.cylinder),
                p.multiplicity.to_string(),
                literal::group_word(action, &p.word),
            ],
        );
    }
}

/// Replays a parsed certificate.
pub fn verify(cert: &Certificate) -> Result<(), Rejected> {
    if action_hash(&cert.action_text) != cert.action_hash {
        return Err(reject("action hash does not match the embedded action"));
    }
    let action = parse_action_file(&cert.action_text).map_err(|e| reject(e.to_string()))?;
    if format_action(&action) != cert.action_text {
        return Err(reject("embedded action is not in canonical form"));
    }
    let r = Replay {
        cert,
        action: &action,
    };
    match cert.kind {
        Kind::Subequivalence => r.subequivalence(),
        Kind::Paradoxical => r.paradoxical(),
        Kind::Tower => r.tower(),
        Kind::Order => r.order(),
        Kind::Measure => r.measure(),
        Kind::Infeasibility => r.infeasibility(),
        Kind::Scaling | Kind::Isometry | Kind::Cuntz => r.algebra(),
        Kind::Filling => r.filling(),
        Kind::Boundary => r.boundary(),
        Kind::PurelyInfinite => r.purely_infinite(),
        Kind::Exhaustion => r.exhaustion(),
    }
}

/// Parses and replays certificate text.
pub fn verify_text(text: &str) -> Result<Result<(), Rejected>, Malformed> {
    Certificate::parse(text).map(|c| verify(&c))
}

struct Replay<'a> {
    cert: &'a Certificate,
    action: &'a Action,
}

impl Replay<'_> {
    fn space(&self) -> &SftSpace {
        self.action.space()
    }

    fn lines(&self, key: &str) -> std::vec::IntoIter<&[String]> {
        let v: Vec<&[String]> = self
            .cert
            .payload
            .iter()
            .filter(|l| l.key == key)
            .map(|l| l.args.as_slice())
            .collect();
        v.into_iter()
    }

    fn single(&self, key: &str) -> Result<&[String], Rejected> {
        let mut it = self.lines(key);
        match (it.next(), it.next()) {
            (Some(a), None) => Ok(a),
            _ => Err(reject(format!("expected exactly one `{key}` line"))),
        }
    }

    fn set(&self, text: &str) -> Result<ClopenSet, Rejected> {
        parse_canonical_set(self.space(), text).map_err(|e| reject(e.to_string()))
    }

    fn cylinder(&self, text: &str) -> Result<Word, Rejected> {
        parse_cylinder(self.space(), text).map_err(|e| reject(e.to_string()))
    }

    fn word(&self, text: &str) -> Result<GroupWord, Rejected> {
        parse_group_word(self.action, text).map_err(|e| reject(e.to_string()))
    }

    fn number<T: FromStr>(&self, text: &str) -> Result<T, Rejected> {
        text.parse()
            .map_err(|_| reject(format!("bad number {text:?}")))
    }

    fn type_element(&self, text: &str) -> Result<TypeElement, Rejected> {
        let f = parse_type_element(self.space(), text).map_err(|e| reject(e.to_string()))?;
        if literal::type_element(self.space(), &f) != text {
            return Err(reject(format!("{text} is not canonical")));
        }
        Ok(f)
    }

    fn pieces(&self, key: &str) -> Result<Vec<(Word, GroupWord)>, Rejected> {
        self.lines(key)
            .map(|a| Ok((self.cylinder(&a[0])?, self.word(&a[1])?)))
            .collect()
    }

    fn scheme(&self) -> Result<SubequivalenceScheme, Rejected> {
        Ok(SubequivalenceScheme {
            source: self.set(&self.single("source")?[0])?,
            target: self.set(&self.single("target")?[0])?,
            pieces: self.pieces("piece")?,
        })
    }

    fn claim(&self) -> Result<Claim, Rejected> {
        Claim::parse(self.space(), self.single("claim")?)
    }

    fn subequivalence(&self) -> Result<(), Rejected> {
        let s = self.scheme()?;
        match verify_scheme(self.action, &s) {
            Ok(Ok(())) => Ok(()),
            Ok(Err(v)) => Err(reject(format!("scheme: {v}"))),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    fn paradoxical(&self) -> Result<(), Rejected> {
        let set = self.set(&self.single("set")?[0])?;
        let o1 = self.set(&self.single("target1")?[0])?;
        let o2 = self.set(&self.single("target2")?[0])?;
        let s1 = SubequivalenceScheme {
            source: set.clone(),
            target: o1.clone(),
            pieces: self.pieces("piece1")?,
        };
        let s2 = SubequivalenceScheme {
            source: set.clone(),
            target: o2.clone(),
            pieces: self.pieces("piece2")?,
        };
        let w = ParadoxicalWitness {
            set,
            o1,
            o2,
            s1,
            s2,
        };
        match verify_paradoxical(self.action, &w) {
            Ok(Ok(())) => Ok(()),
            Ok(Err(v)) => Err(reject(format!("paradoxical witness: {v:?}"))),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    fn tower(&self) -> Result<(), Rejected> {
        let base = self.set(&self.single("base")?[0])?;
        let words = self
            .lines("word")
            .map(|a| self.word(&a[0]))
            .collect::<Result<Vec<_>, _>>()?;
        if base.is_empty() || words.is_empty() {
            return Err(reject("tower needs a nonempty base and at least one word"));
        }
        match (TowerWitness { words, base }).verify(self.action) {
            Ok(true) => Ok(()),
            Ok(false) => Err(reject("translates of the base overlap")),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    fn parts(&self, lines: &[&[String]]) -> Result<OrderWitness, Rejected> {
        let parts = lines
            .iter()
            .map(|a| {
                Ok(OrderPart {
                    cylinder: self.cylinder(&a[0])?,
                    multiplicity: self.number(&a[1])?,
                    word: self.word(&a[2])?,
                })
            })
            .collect::<Result<Vec<_>, Rejected>>()?;
        Ok(OrderWitness { parts })
    }

    fn check_order(
        &self,
        f: &TypeElement,
        g: &TypeElement,
        w: &OrderWitness,
    ) -> Result<(), Rejected> {
        match verify_order_witness(self.action, f, g, w) {
            Ok(Ok(())) => Ok(()),
            Ok(Err(v)) => Err(reject(format!("order witness: {v}"))),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    fn order(&self) -> Result<(), Rejected> {
        let f = self.type_element(&self.single("f")?[0])?;
        let g = self.type_element(&self.single("g")?[0])?;
        let lines: Vec<&[String]> = self.lines("part").collect();
        self.check_order(&f, &g, &self.parts(&lines)?)
    }

    fn measure(&self) -> Result<(), Rejected> {
        let claim = self.claim()?;
        let norm = claim
            .normalization(self.space())
            .ok_or_else(|| reject("claim has no content form"))?;
        let depth = self.number(&self.single("depth")?[0])?;
        let mut values = std::collections::BTreeMap::new();
        for a in self.lines("mass") {
            let v: Rational = self.number(&a[1])?;
            if values.insert(self.cylinder(&a[0])?, v).is_some() {
                return Err(reject("repeated cylinder"));
            }
        }
        let mu = InvariantContent { depth, values };
        match verify_content(self.action, &mu, &norm) {
            Ok(true) => Ok(()),
            Ok(false) => Err(reject("content violates its program")),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    fn infeasibility(&self) -> Result<(), Rejected> {
        let claim = self.claim()?;
        if !matches!(claim, Claim::Probability | Claim::Normalized(_)) {
            return Err(reject(
                "infeasibility certificates cover normalized contents only",
            ));
        }
        let normalization = claim.normalization(self.space()).expect("normalized claim");
        let depth = self.number(&self.single("depth")?[0])?;
        let multipliers = self
            .lines("multiplier")
            .map(|a| {
                Ok((
                    self.number::<usize>(&a[0])?,
                    self.number::<Rational>(&a[1])?,
                ))
            })
            .collect::<Result<Vec<_>, Rejected>>()?;
        match verify_infeasibility(
            self.action,
            &InfeasibilityCertificate {
                depth,
                normalization,
                multipliers,
            },
        ) {
            Ok(true) => Ok(()),
            Ok(false) => Err(reject("multipliers are not a Farkas certificate")),
            Err(e) => Err(reject(e.to_string())),
        }
    }

    /// Rebuilds the element from the scheme with the exact constructors and
    /// compares it with the recorded terms.
    fn algebra(&self) -> Result<(), Rejected> {
        let s = self.scheme()?;
        let space = self.space();
        let err = |e: paracomp::algebra::AlgebraError| reject(e.to_string());
        let (key, element) = match self.cert.kind {
            Kind::Cuntz => {
                let w = cuntz_witness_from_scheme(self.action, &s).map_err(err)?;
                ("r-term", w.r)
            }
            kind => {
                let gf = self.set(&self.single("guard-f")?[0])?;
                let gu = self.set(&self.single("guard-u")?[0])?;
                let x = scaling_element_from_scheme(self.action, &s, &gf, &gu).map_err(err)?;
                if kind == Kind::Scaling {
                    ("x-term", x.x)
                } else {
                    ("v-term", isometry_from_scaling(space, &x.x).map_err(err)?.v)
                }
            }
        };
        let recorded: Vec<String> = self.lines(key).map(|a| a.join(" ")).collect();
        if recorded != literal::algebra_terms(space, &element) {
            return Err(reject(format!(
                "recorded {key} lines differ from the rebuilt element"
            )));
        }
        Ok(())
    }

    fn depth_words(&self) -> Result<(usize, Vec<Word>), Rejected> {
        let depth: usize = self.number(&self.single("depth")?[0])?;
        if depth == 0 || depth > 16 {
            return Err(reject("depth outside 1..=16"));
        }
        Ok((depth, self.space().words_of_length(depth)))
    }

    fn filling(&self) -> Result<(), Rejected> {
        let n: usize = self.number(&self.single("n")?[0])?;
        let (depth, words) = self.depth_words()?;
        let mut seen = BTreeSet::new();
        for a in self.lines("cover") {
            let arrow = a
                .iter()
                .position(|t| t == "->")
                .ok_or_else(|| reject("cover without `->`"))?;
            let tuple = a[..arrow]
                .iter()
                .map(|t| self.cylinder(t))
                .collect::<Result<Vec<_>, _>>()?;
            let gs = a[arrow + 1..]
                .iter()
                .map(|t| self.word(t))
                .collect::<Result<Vec<_>, _>>()?;
            if tuple.len() != n || gs.len() != n || tuple.iter().any(|w| w.len() != depth) {
                return Err(reject("cover has the wrong shape"));
            }
            if tuple.windows(2).any(|p| p[0] > p[1]) || !seen.insert(tuple.clone()) {
                return Err(reject("tuples must be sorted and distinct"));
            }
            match verify_filling_cover(self.action, &tuple, &gs) {
                Ok(true) => {}
                Ok(false) => return Err(reject("translates do not cover the space")),
                Err(e) => return Err(reject(e.to_string())),
            }
        }
        let expected = (0..n).fold(1u128, |acc, i| {
            acc * (words.len() + i) as u128 / (i + 1) as u128
        });
        if seen.len() as u128 != expected {
            return Err(reject(format!(
                "{} of {expected} tuples covered",
                seen.len()
            )));
        }
        Ok(())
    }

    fn boundary(&self) -> Result<(), Rejected> {
        let (depth, words) = self.depth_words()?;
        let k = words.len() as u32;
        if k >= 32 {
            return Err(reject("too many cylinders"));
        }
        let space = self.space();
        let mut seen = HashSet::new();
        for a in self.lines("move") {
            let f = self.set(&a[0])?;
            let o = self.set(&a[1])?;
            let g = self.word(&a[2])?;
            if f.is_empty()
                || f.is_whole()
                || o.is_empty()
                || f.max_len() > depth
                || o.max_len() > depth
            {
                return Err(reject("move has the wrong shape"));
            }
            if !seen.insert((f.clone(), o.clone())) {
                return Err(reject("repeated pair"));
            }
            let img = self
                .action
                .apply_word(&g, &f)
                .map_err(|e| reject(e.to_string()))?;
            if !space.is_subset(&img, &o) {
                return Err(reject(format!(
                    "{} does not move {} into {}",
                    a[2], a[0], a[1]
                )));
            }
        }
        let sets = (1u64 << k) - 1;
        if seen.len() as u64 != (sets - 1) * sets {
            return Err(reject(format!(
                "{} of {} pairs covered",
                seen.len(),
                (sets - 1) * sets
            )));
        }
        Ok(())
    }

    fn purely_infinite(&self) -> Result<(), Rejected> {
        let (depth, _) = self.depth_words()?;
        let space = self.space();
        let mut current: Option<(TypeElement, Vec<&[String]>)> = None;
        let mut done = Vec::new();
        let mut finish = |cur: Option<(TypeElement, Vec<&[String]>)>| -> Result<(), Rejected> {
            if let Some((f, lines)) = cur {
                self.check_order(&f.scale(space, 2), &f, &self.parts(&lines)?)?;
                done.push(f);
            }
            Ok(())
        };
        for l in &self.cert.payload {
            match l.key.as_str() {
                "element" => finish(current.replace((self.type_element(&l.args[0])?, Vec::new())))?,
                "part" => match current.as_mut() {
                    Some((_, lines)) => lines.push(&l.args),
                    None => return Err(reject("part before any element")),
                },
                _ => {}
            }
        }
        finish(current.take())?;
        let expected =
            fragment_elements(space, depth, FRAGMENT_CAP).map_err(|e| reject(e.to_string()))?;
        if done != expected {
            return Err(reject("elements are not the whole fragment"));
        }
        Ok(())
    }

    fn exhaustion(&self) -> Result<(), Rejected> {
        let space = self.space();
        let claim = self.claim()?;
        let maps = self
            .lines("group-element")
            .map(|a| {
                self.action
                    .evaluate_word(&self.word(&a[0])?)
                    .map_err(|e| reject(e.to_string()))
            })
            .collect::<Result<Vec<PrefixExchange>, _>>()?;
        let group: HashSet<&PrefixExchange> = maps.iter().collect();
        if !group.contains(&PrefixExchange::identity()) {
            return Err(reject("identity missing from the listed group"));
        }
        for g in 0..self.action.generators().len() {
            for e in [1i8, -1] {
                let s = self.action.letter_exchange(g, e);
                if maps.iter().any(|m| !group.contains(&s.compose(space, m))) {
                    return Err(reject(
                        "listed elements are not closed under the generators",
                    ));
                }
            }
        }
        match claim {
            Claim::NotBoundary(f, o) => {
                if maps
                    .iter()
                    .any(|m| space.is_subset(&m.apply(space, &f).unwrap_or_else(|_| o.clone()), &o))
                {
                    return Err(reject("some element moves the set inside the target"));
                }
                Ok(())
            }
            Claim::NotFilling(tuple) => {
                let images: Vec<Vec<ClopenSet>> = tuple
                    .iter()
                    .map(|u| {
                        let mut v: Vec<ClopenSet> =
                            maps.iter().map(|m| m.image_of_cylinder(space, u)).collect();
                        v.sort();
                        v.dedup();
                        v
                    })
                    .collect();
                let combos = images
                    .iter()
                    .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64));
                if combos.is_none_or(|c| c > MAX_EXHAUSTION) {
                    return Err(reject("too many combinations to replay"));
                }
                if covers(space, &images, ClopenSet::empty()) {
                    return Err(reject("some choice of translates covers the space"));
                }
                Ok(())
            }
            _ => Err(reject(
                "exhaustion certificates cover filling and boundary claims only",
            )),
        }
    }
}

fn covers(space: &SftSpace, images: &[Vec<ClopenSet>], acc: ClopenSet) -> bool {
    match images.split_first() {
        None => acc.is_whole(),
        Some((first, rest)) => first
            .iter()
            .any(|img| covers(space, rest, space.union(&acc, img))),
    }
}
