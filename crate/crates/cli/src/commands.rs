//! Command-line interface and command dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use paracomp::action::{builtin_action, enumerate_elements, Action, ActionError};
use paracomp::algebra::{
    cuntz_witness_from_scheme, isometry_from_scaling, scaling_element_from_scheme, AlgebraError,
};
use paracomp::comparison::{
    find_open_tower, CheckFailure, CheckVerdict, ComparisonError, SearchBounds, SearchContext,
    SearchOutcome, SearchStats, SubequivalenceScheme, WeakOutcome,
};
use paracomp::measures::{
    invariant_content_normalized, invariant_probability_measure, min_content_depth, ContentOutcome,
    MeasureError,
};
use paracomp::semigroup::{SemigroupError, TypeElement, UnperforationStatus};
use paracomp::sft::{ClopenSet, SpaceError};
use paracomp::{Execution, GroupWord};
use thiserror::Error;

use crate::actionfile::{parse_action_file, ActionFileError};
use crate::certificate::{
    push_content, push_infeasibility, push_order, push_paradoxical, verify_text, Certificate,
    Claim, Kind,
};
use crate::literal::{self, parse_group_words, parse_type_element, LiteralError};

pub const EXIT_ESTABLISHED: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

/// Default cylinder depth of the fragment-style checks.
pub const DEFAULT_LEVEL: usize = 1;

#[derive(Debug, Parser)]
#[command(
    name = "paracomp",
    version,
    about = "Witness search and certificate replay for prefix-exchange actions"
)]
pub struct Cli {
    /// Action definition file.
    #[arg(long, global = true, conflicts_with = "builtin")]
    pub action: Option<PathBuf>,
    /// Built-in action, e.g. `f2_boundary` or `bit_permutation:1,0`.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// Search depth, or the cylinder depth for measure, filling, boundary
    /// and fragment commands.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Longest group word tried
    #[arg(long, global = true)]
    pub word_length: Option<usize>,
    /// Search nodes allowed per query
    #[arg(long, global = true)]
    pub node_budget: Option<u64>,
    /// Write the certificate here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run every search on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Scaling,
    Isometry,
    Cuntz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a scheme witnessing F ≺ O.
    CheckSubequiv {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Search for a paradoxical decomposition of a set.
    CheckParadoxical {
        #[arg(long)]
        set: String,
    },
    /// Search for F ≺ O after covering F by translates of O.
    CheckWeakParadoxical {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// n-filling at a cylinder depth.
    CheckNfilling {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Strong boundary at a cylinder depth.
    CheckStrongBoundary,
    /// Search for a base whose translates under the words are disjoint.
    FindTower {
        /// Comma-separated group words.
        #[arg(long)]
        words: String,
        #[arg(long)]
        base: String,
    },
    /// Solve for an invariant probability measure on depth-d cylinders
    FindInvariantMeasure,
    /// Solve for an invariant content giving a set mass 1
    FindNormalizedContent {
        #[arg(long)]
        set: String,
    },
    /// Search for [f] <= [g] in the type semigroup.
    SemigroupOrder {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// 2[f] <= [f] over the fragment of multiplicity at most 2.
    SemigroupPurelyInfinite,
    /// (n+1)[f] <= n[g] implies [f] <= [g] on one instance.
    SemigroupUnperforation {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u32,
    },
    /// Exact algebraic witnesses built from a scheme F ≺ O.
    ScalingElement {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        guard_f: Option<String>,
        #[arg(long)]
        guard_u: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Scaling)]
        emit: Emit,
    },
    /// Replay a certificate file.
    Verify { file: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }
}

impl From<ActionFileError> for CliError {
    fn from(e: ActionFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LiteralError> for CliError {
    fn from(e: LiteralError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ActionError> for CliError {
    fn from(e: ActionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ComparisonError> for CliError {
    fn from(e: ComparisonError) -> Self {
        match e {
            ComparisonError::Space(s) => s.into(),
            ComparisonError::Action(a) => a.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Space(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::Space(s) => s.into(),
            SemigroupError::Comparison(c) => c.into(),
            SemigroupError::Measure(m) => m.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Action(a) => a.into(),
            AlgebraError::Comparison(c) => c.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Result of one command: exit code, certificate text if any, and a short
/// human-readable report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub certificate: Option<String>,
    pub report: String,
}

impl Outcome {
    fn certified(code: i32, cert: Certificate, report: impl Into<String>) -> Self {
        Outcome {
            code,
            certificate: Some(cert.to_text()),
            report: report.into(),
        }
    }

    fn inconclusive(report: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_INCONCLUSIVE,
            certificate: None,
            report: report.into(),
        }
    }

    fn not_found(what: &str, stats: &SearchStats) -> Self {
        let why = if stats.budget_exhausted {
            "node budget exhausted"
        } else {
            "bounds exhausted"
        };
        Outcome::inconclusive(format!(
            "inconclusive: no {what} found ({why}, {} nodes)",
            stats.nodes
        ))
    }
}

pub fn load_action(cli: &Cli) -> Result<Action, CliError> {
    match (&cli.action, &cli.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(parse_action_file(&text)?)
        }
        (None, Some(name)) => Ok(builtin_action(name)?),
        _ => Err(CliError::Usage(
            "exactly one of --action or --builtin is required".into(),
        )),
    }
}

/// Search bounds from the flags; `level` raises the depth for commands whose
/// `--depth` is a cylinder depth.
fn bounds(cli: &Cli, level: Option<usize>) -> Result<SearchBounds, CliError> {
    let d = SearchBounds::default();
    let depth = match level {
        Some(l) => d.depth.max(l),
        None => cli.depth.unwrap_or(d.depth),
    };
    Ok(SearchBounds::new(
        depth,
        cli.word_length.unwrap_or(d.word_length),
        cli.node_budget.unwrap_or(d.node_budget),
    )?)
}

fn execution(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn set_arg(action: &Action, text: &str) -> Result<ClopenSet, CliError> {
    Ok(action.space().parse_set(text)?)
}

fn type_arg(action: &Action, text: &str) -> Result<TypeElement, CliError> {
    Ok(parse_type_element(action.space(), text)?)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Command::Verify { file } = &cli.command {
        return Ok(verify_file(file));
    }
    let action = load_action(cli)?;
    let mut out = dispatch(cli, &action)?;
    let level = cli.depth.unwrap_or(DEFAULT_LEVEL);
    let searched = match &cli.command {
        Command::FindInvariantMeasure | Command::FindNormalizedContent { .. } => None,
        Command::CheckNfilling { .. }
        | Command::CheckStrongBoundary
        | Command::SemigroupPurelyInfinite => Some(bounds(cli, Some(level))?),
        _ => Some(bounds(cli, None)?),
    };
    if let Some(b) = searched {
        out.report += &format!(
            "\nbounds: depth {}, word length {}, node budget {}",
            b.depth, b.word_length, b.node_budget
        );
    }
    if let Command::FindNormalizedContent { .. } = &cli.command {
        out.report += "\nnote: only contents finite on clopen sets are considered, not unbounded invariant measures";
    }
    Ok(out)
}

fn dispatch(cli: &Cli, action: &Action) -> Result<Outcome, CliError> {
    let act = action;
    let space = act.space();
    let exec = execution(cli);
    let context = |level| -> Result<SearchContext<'_>, CliError> {
        Ok(SearchContext::new(act, bounds(cli, level)?)?.with_execution(exec))
    };
    let level = cli.depth.unwrap_or(DEFAULT_LEVEL);
    match &cli.command {
        Command::CheckSubequiv { from, to } => {
            let (f, o) = (set_arg(act, from)?, set_arg(act, to)?);
            let ctx = context(None)?;
            subequivalence(act, &ctx, ctx.search_subequivalence(&f, &o)?, &f, &o)
        }
        Command::CheckParadoxical { set } => {
            let a = set_arg(act, set)?;
            let ctx = context(None)?;
            Ok(match ctx.check_paradoxical(&a)? {
                SearchOutcome::Found(w) => {
                    let mut c = Certificate::new(Kind::Paradoxical, act, Some(ctx.bounds()));
                    push_paradoxical(&mut c, act, &w);
                    Outcome::certified(
                        EXIT_ESTABLISHED,
                        c,
                        format!("established: {} is paradoxical", set),
                    )
                }
                SearchOutcome::Refuted(mu) => {
                    let mut c = Certificate::new(Kind::Measure, act, Some(ctx.bounds()));
                    push_content(&mut c, space, &Claim::NotParadoxical(a), &mu);
                    Outcome::certified(
                        EXIT_REFUTED,
                        c,
                        format!("refuted: an invariant content gives {set} positive mass"),
                    )
                }
                SearchOutcome::NotFound(s) => Outcome::not_found("paradoxical decomposition", &s),
            })
        }
        Command::CheckWeakParadoxical { from, to } => {
            let (f, o) = (set_arg(act, from)?, set_arg(act, to)?);
            let ctx = context(None)?;
            match ctx.check_weak_paradoxical(&f, &o)? {
                WeakOutcome::Found(s) => subequivalence(act, &ctx, SearchOutcome::Found(s), &f, &o),
                WeakOutcome::NotFound(s) => Ok(Outcome::not_found("scheme", &s)),
                WeakOutcome::NotCovered => Ok(Outcome::inconclusive(format!(
                    "inconclusive: {to} has no translate cover of {from} within the word bound"
                ))),
            }
        }
        Command::CheckNfilling { n } => {
            let b = bounds(cli, Some(level))?;
            let report = context(Some(level))?.check_n_filling(*n, level)?;
            match report.verdict {
                CheckVerdict::Pass => {
                    let mut c = Certificate::new(Kind::Filling, act, Some(b));
                    c.push("n", [n.to_string()]);
                    c.push("depth", [level.to_string()]);
                    for e in &report.covers {
                        let args = e
                            .tuple
                            .iter()
                            .map(|w| literal::cylinder(space, w))
                            .chain(std::iter::once("->".to_string()))
                            .chain(e.words.iter().map(|g| literal::group_word(act, g)));
                        c.push("cover", args);
                    }
                    let msg = format!(
                        "established: {n}-filling at depth {level} ({} tuples)",
                        report.instances
                    );
                    Ok(Outcome::certified(EXIT_ESTABLISHED, c, msg))
                }
                CheckVerdict::Fail { instance, reason } => refuted_check(
                    act,
                    b,
                    Claim::NotFilling(instance),
                    reason,
                    exec,
                    "the translates of the tuple never cover",
                ),
                CheckVerdict::Inconclusive { instance } => Ok(Outcome::inconclusive(format!(
                    "inconclusive: no cover for {}",
                    instance
                        .iter()
                        .map(|w| literal::cylinder(space, w))
                        .collect::<Vec<_>>()
                        .join(" ")
                ))),
            }
        }
        Command::CheckStrongBoundary => {
            let b = bounds(cli, Some(level))?;
            let report = context(Some(level))?.check_strong_boundary(level)?;
            match report.verdict {
                CheckVerdict::Pass => {
                    let mut c = Certificate::new(Kind::Boundary, act, Some(b));
                    c.push("depth", [level.to_string()]);
                    for e in &report.entries {
                        c.push(
                            "move",
                            [
                                literal::set(space, &e.from),
                                literal::set(space, &e.to),
                                literal::group_word(act, &e.word),
                            ],
                        );
                    }
                    let msg = format!(
                        "established: strong boundary at depth {level} ({} pairs)",
                        report.instances
                    );
                    Ok(Outcome::certified(EXIT_ESTABLISHED, c, msg))
                }
                CheckVerdict::Fail {
                    instance: (f, o),
                    reason,
                } => {
                    let claim = match reason {
                        CheckFailure::Exhaustive => Claim::NotBoundary(f, o),
                        CheckFailure::Content(_) => Claim::NotSubequivalent(f, o),
                    };
                    refuted_check(
                        act,
                        b,
                        claim,
                        reason,
                        exec,
                        "no group element moves the set inside the target",
                    )
                }
                CheckVerdict::Inconclusive { instance: (f, o) } => {
                    Ok(Outcome::inconclusive(format!(
                        "inconclusive: no element moves {} into {}",
                        literal::set(space, &f),
                        literal::set(space, &o)
                    )))
                }
            }
        }
        Command::FindTower { words, base } => {
            let ws: Vec<GroupWord> = parse_group_words(act, words)?;
            let u = set_arg(act, base)?;
            let b = bounds(cli, None)?;
            Ok(match find_open_tower(act, &ws, &u, b)? {
                Some(t) => {
                    let mut c = Certificate::new(Kind::Tower, act, Some(b));
                    c.push("base", [literal::set(space, &t.base)]);
                    for w in &t.words {
                        c.push("word", [literal::group_word(act, w)]);
                    }
                    Outcome::certified(
                        EXIT_ESTABLISHED,
                        c,
                        format!(
                            "established: tower with base {}",
                            literal::set(space, &t.base)
                        ),
                    )
                }
                None => Outcome::inconclusive("inconclusive: no tower base within the depth bound"),
            })
        }
        Command::FindInvariantMeasure => {
            let depth = cli.depth.unwrap_or_else(|| min_content_depth(act));
            content(
                act,
                depth,
                Claim::Probability,
                invariant_probability_measure(act, depth)?,
            )
        }
        Command::FindNormalizedContent { set } => {
            let o = set_arg(act, set)?;
            let depth = cli
                .depth
                .unwrap_or_else(|| min_content_depth(act).max(o.max_len()));
            let outcome = invariant_content_normalized(act, &o, depth)?;
            content(act, depth, Claim::Normalized(o), outcome)
        }
        Command::SemigroupOrder { f, g } => {
            let (f, g) = (type_arg(act, f)?, type_arg(act, g)?);
            let ctx = context(None)?;
            Ok(match ctx.search_order(&f, &g)? {
                SearchOutcome::Found(w) => {
                    let mut c = Certificate::new(Kind::Order, act, Some(ctx.bounds()));
                    c.push("f", [literal::type_element(space, &f)]);
                    c.push("g", [literal::type_element(space, &g)]);
                    push_order(&mut c, act, &w);
                    Outcome::certified(EXIT_ESTABLISHED, c, "established: [f] <= [g]")
                }
                SearchOutcome::Refuted(mu) => {
                    let mut c = Certificate::new(Kind::Measure, act, Some(ctx.bounds()));
                    push_content(&mut c, space, &Claim::NotOrder(f, g), &mu);
                    Outcome::certified(
                        EXIT_REFUTED,
                        c,
                        "refuted: an invariant content separates [f] from [g]",
                    )
                }
                SearchOutcome::NotFound(s) => Outcome::not_found("order witness", &s),
            })
        }
        Command::SemigroupPurelyInfinite => {
            let b = bounds(cli, Some(level))?;
            let report = context(Some(level))?.check_purely_infinite_fragment(level)?;
            if let Some(e) = report.entries.iter().find(|e| e.outcome.is_refuted()) {
                let SearchOutcome::Refuted(mu) = &e.outcome else {
                    unreachable!()
                };
                let mut c = Certificate::new(Kind::Measure, act, Some(b));
                let claim = Claim::NotOrder(e.element.scale(space, 2), e.element.clone());
                push_content(&mut c, space, &claim, mu);
                let msg = format!(
                    "refuted: 2[f] <= [f] fails for f = {}",
                    literal::type_element(space, &e.element)
                );
                return Ok(Outcome::certified(EXIT_REFUTED, c, msg));
            }
            if report.inconclusive() > 0 {
                return Ok(Outcome::inconclusive(format!(
                    "inconclusive: {} of {} elements undecided",
                    report.inconclusive(),
                    report.entries.len()
                )));
            }
            let mut c = Certificate::new(Kind::PurelyInfinite, act, Some(b));
            c.push("depth", [level.to_string()]);
            for e in &report.entries {
                c.push("element", [literal::type_element(space, &e.element)]);
                if let SearchOutcome::Found(w) = &e.outcome {
                    push_order(&mut c, act, w);
                }
            }
            let msg = format!(
                "established: 2[f] <= [f] for all {} fragment elements",
                report.entries.len()
            );
            Ok(Outcome::certified(EXIT_ESTABLISHED, c, msg))
        }
        Command::SemigroupUnperforation { f, g, n } => {
            let (f, g) = (type_arg(act, f)?, type_arg(act, g)?);
            let ctx = context(None)?;
            let entry = ctx.almost_unperforation_instance(&f, &g, *n)?;
            let order_cert = |w| {
                let mut c = Certificate::new(Kind::Order, act, Some(ctx.bounds()));
                c.push("f", [literal::type_element(space, &f)]);
                c.push("g", [literal::type_element(space, &g)]);
                push_order(&mut c, act, w);
                c
            };
            Ok(match (&entry.status, &entry.premise, &entry.conclusion) {
                (
                    UnperforationStatus::Established | UnperforationStatus::Vacuous,
                    _,
                    Some(SearchOutcome::Found(w)),
                ) => Outcome::certified(EXIT_ESTABLISHED, order_cert(w), "established: [f] <= [g]"),
                (UnperforationStatus::Vacuous, SearchOutcome::Refuted(mu), _) => {
                    let mut c = Certificate::new(Kind::Measure, act, Some(ctx.bounds()));
                    let claim = Claim::NotOrder(f.scale(space, n + 1), g.scale(space, *n));
                    push_content(&mut c, space, &claim, mu);
                    Outcome::certified(
                        EXIT_ESTABLISHED,
                        c,
                        "established: the premise (n+1)[f] <= n[g] is refuted",
                    )
                }
                (UnperforationStatus::Contradiction, _, Some(SearchOutcome::Refuted(mu))) => {
                    let mut c = Certificate::new(Kind::Measure, act, Some(ctx.bounds()));
                    push_content(&mut c, space, &Claim::NotOrder(f.clone(), g.clone()), mu);
                    Outcome::certified(
                        EXIT_REFUTED,
                        c,
                        "refuted: premise holds but [f] <= [g] fails",
                    )
                }
                _ => {
                    Outcome::inconclusive("inconclusive: a witness was not found within the bounds")
                }
            })
        }
        Command::ScalingElement {
            from,
            to,
            guard_f,
            guard_u,
            emit,
        } => {
            let (f, o) = (set_arg(act, from)?, set_arg(act, to)?);
            let gf = guard_f
                .as_deref()
                .map(|t| set_arg(act, t))
                .transpose()?
                .unwrap_or_else(|| f.clone());
            let gu = guard_u
                .as_deref()
                .map(|t| set_arg(act, t))
                .transpose()?
                .unwrap_or_else(|| o.clone());
            let ctx = context(None)?;
            let s = match ctx.search_subequivalence(&f, &o)? {
                SearchOutcome::Found(s) => s,
                other => return subequivalence(act, &ctx, other, &f, &o),
            };
            let (kind, key, element) = match emit {
                Emit::Cuntz => (Kind::Cuntz, "r-term", cuntz_witness_from_scheme(act, &s)?.r),
                Emit::Scaling | Emit::Isometry => {
                    let x = scaling_element_from_scheme(act, &s, &gf, &gu)?;
                    if *emit == Emit::Scaling {
                        (Kind::Scaling, "x-term", x.x)
                    } else {
                        (
                            Kind::Isometry,
                            "v-term",
                            isometry_from_scaling(space, &x.x)?.v,
                        )
                    }
                }
            };
            let mut c = Certificate::new(kind, act, Some(ctx.bounds()));
            c.push_scheme(act, &s);
            if kind != Kind::Cuntz {
                c.push("guard-f", [literal::set(space, &gf)]);
                c.push("guard-u", [literal::set(space, &gu)]);
            }
            for t in literal::algebra_terms(space, &element) {
                c.push(key, t.split(' ').map(str::to_string).collect::<Vec<_>>());
            }
            Ok(Outcome::certified(
                EXIT_ESTABLISHED,
                c,
                format!("established: {kind} element with exact identities"),
            ))
        }
        Command::Verify { .. } => unreachable!(),
    }
}

fn subequivalence(
    act: &Action,
    ctx: &SearchContext<'_>,
    outcome: SearchOutcome<SubequivalenceScheme>,
    f: &ClopenSet,
    o: &ClopenSet,
) -> Result<Outcome, CliError> {
    Ok(match outcome {
        SearchOutcome::Found(s) => {
            let mut c = Certificate::new(Kind::Subequivalence, act, Some(ctx.bounds()));
            c.push_scheme(act, &s);
            Outcome::certified(
                EXIT_ESTABLISHED,
                c,
                format!("established: scheme with {} pieces", s.pieces.len()),
            )
        }
        SearchOutcome::Refuted(mu) => {
            let mut c = Certificate::new(Kind::Measure, act, Some(ctx.bounds()));
            push_content(
                &mut c,
                act.space(),
                &Claim::NotSubequivalent(f.clone(), o.clone()),
                &mu,
            );
            Outcome::certified(
                EXIT_REFUTED,
                c,
                "refuted: an invariant content gives the source more mass than the target",
            )
        }
        SearchOutcome::NotFound(s) => Outcome::not_found("scheme", &s),
    })
}

fn refuted_check(
    act: &Action,
    b: SearchBounds,
    claim: Claim,
    reason: CheckFailure,
    exec: Execution,
    what: &str,
) -> Result<Outcome, CliError> {
    let space = act.space();
    let c = match reason {
        CheckFailure::Content(mu) => {
            let mut c = Certificate::new(Kind::Measure, act, Some(b));
            push_content(&mut c, space, &claim, &mu);
            c
        }
        CheckFailure::Exhaustive => {
            let catalog = enumerate_elements(act, b.word_length, exec);
            if !catalog.complete {
                return Ok(Outcome::inconclusive(
                    "inconclusive: group not exhausted within the word bound",
                ));
            }
            let mut c = Certificate::new(Kind::Exhaustion, act, Some(b));
            c.push("claim", claim.args(space));
            for e in &catalog.entries {
                c.push("group-element", [literal::group_word(act, &e.word)]);
            }
            c
        }
    };
    Ok(Outcome::certified(
        EXIT_REFUTED,
        c,
        format!("refuted: {what}"),
    ))
}

fn content(
    act: &Action,
    depth: usize,
    claim: Claim,
    outcome: ContentOutcome,
) -> Result<Outcome, CliError> {
    let space = act.space();
    Ok(match outcome {
        ContentOutcome::Feasible(mu) => {
            let mut c = Certificate::new(Kind::Measure, act, None);
            push_content(&mut c, space, &claim, &mu);
            Outcome::certified(
                EXIT_ESTABLISHED,
                c,
                format!("established: invariant content at depth {depth}"),
            )
        }
        ContentOutcome::Infeasible(cert) => {
            let mut c = Certificate::new(Kind::Infeasibility, act, None);
            push_infeasibility(&mut c, space, &claim, &cert);
            Outcome::certified(
                EXIT_REFUTED,
                c,
                format!("refuted: no invariant content at depth {depth}"),
            )
        }
    })
}

fn verify_file(path: &PathBuf) -> Outcome {
    let out = |code, report: String| Outcome {
        code,
        certificate: None,
        report,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return out(EXIT_INPUT, format!("{}: {e}", path.display())),
    };
    match verify_text(&text) {
        Ok(Ok(())) => out(EXIT_ESTABLISHED, "verified".into()),
        Ok(Err(e)) => out(EXIT_REFUTED, e.to_string()),
        Err(e) => out(EXIT_INPUT, e.to_string()),
    }
}
