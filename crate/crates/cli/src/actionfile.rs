//! The line-oriented action-definition format.
//!
//! ```text
//! space letters a A b B
//! space forbid aA Aa bB Bb        # forbidden successor pairs
//! space initial a A b B
//! gen ga rule A -> .
//! gen ga rule a -> aa
//! ```
//!
//! A file may instead consist of a single `builtin = <name>` line.

use std::collections::BTreeMap;

use paracomp::action::{validate_exchange, Action, ActionError};
use paracomp::sft::{SftSpace, SpaceError, Word};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionFileError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
}

impl From<SpaceError> for ActionFileError {
    fn from(e: SpaceError) -> Self {
        ActionFileError::Semantic(e.to_string())
    }
}

impl From<ActionError> for ActionFileError {
    fn from(e: ActionError) -> Self {
        ActionFileError::Semantic(e.to_string())
    }
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    col: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

enum Directive {
    Letters(Vec<String>),
    Forbid(Vec<(usize, String)>),
    Initial(Vec<(usize, String)>),
    Rule {
        gen: String,
        from: String,
        to: String,
        line: usize,
    },
    Builtin(String),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ActionFileError {
    ActionFileError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_line(n: usize, raw: &str) -> Result<Option<Directive>, ActionFileError> {
    let line = raw.split('#').next().unwrap_or("");
    let toks = tokens(line);
    let Some(first) = toks.first() else {
        return Ok(None);
    };
    let end = line.trim_end().len() + 1;
    let at = |i: usize| toks.get(i).map(|t| t.col).unwrap_or(end);
    match first.text {
        "builtin" => match toks.as_slice() {
            [_, eq, name] if eq.text == "=" => Ok(Some(Directive::Builtin(name.text.to_string()))),
            _ => Err(syntax(n, at(1), "expected `builtin = <name>`")),
        },
        "space" => {
            let Some(kind) = toks.get(1) else {
                return Err(syntax(n, at(1), "expected letters, forbid or initial"));
            };
            let rest = || {
                toks[2..]
                    .iter()
                    .map(|t| (t.col, t.text.to_string()))
                    .collect::<Vec<_>>()
            };
            match kind.text {
                "letters" if toks.len() > 2 => Ok(Some(Directive::Letters(
                    toks[2..].iter().map(|t| t.text.to_string()).collect(),
                ))),
                "letters" => Err(syntax(n, at(2), "expected at least one letter")),
                "forbid" => Ok(Some(Directive::Forbid(rest()))),
                "initial" if toks.len() > 2 => Ok(Some(Directive::Initial(rest()))),
                "initial" => Err(syntax(n, at(2), "expected at least one letter")),
                _ => Err(syntax(
                    n,
                    kind.col,
                    format!("unknown space directive `{}`", kind.text),
                )),
            }
        }
        "gen" => match toks.as_slice() {
            [_, name, rule, from, arrow, to] if rule.text == "rule" && arrow.text == "->" => {
                Ok(Some(Directive::Rule {
                    gen: name.text.to_string(),
                    from: from.text.to_string(),
                    to: to.text.to_string(),
                    line: n,
                }))
            }
            [_, _, rule, ..] if rule.text != "rule" => Err(syntax(n, rule.col, "expected `rule`")),
            [_, _, _, _, arrow, ..] if arrow.text != "->" => {
                Err(syntax(n, arrow.col, "expected `->`"))
            }
            [_, _, _, _, _, _, extra, ..] => Err(syntax(n, extra.col, "unexpected token")),
            _ => Err(syntax(
                n,
                at(toks.len()),
                "expected `gen <name> rule <word> -> <word>`",
            )),
        },
        other => Err(syntax(n, first.col, format!("unknown directive `{other}`"))),
    }
}

/// Splits a two-letter token such as `aA` into letter indices.
fn parse_pair(names: &[String], tok: &str) -> Option<(usize, usize)> {
    names.iter().enumerate().find_map(|(i, a)| {
        let rest = tok.strip_prefix(a.as_str())?;
        names.iter().position(|b| b == rest).map(|j| (i, j))
    })
}

pub fn parse_action_file(text: &str) -> Result<Action, ActionFileError> {
    let mut directives = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(d) = parse_line(i + 1, raw)? {
            directives.push((i + 1, d));
        }
    }
    if directives.is_empty() {
        return Err(syntax(1, 1, "empty action file"));
    }
    if let Some((n, _)) = directives
        .iter()
        .find(|(_, d)| matches!(d, Directive::Builtin(_)))
    {
        if directives.len() > 1 {
            return Err(syntax(*n, 1, "`builtin` must be the only directive"));
        }
        let Directive::Builtin(name) = &directives[0].1 else {
            unreachable!()
        };
        return Ok(paracomp::action::builtin_action(name)?);
    }
    let mut names: Option<Vec<String>> = None;
    let mut forbid = Vec::new();
    let mut initial: Option<Vec<(usize, usize, String)>> = None;
    let mut rules: Vec<(String, String, String, usize)> = Vec::new();
    for (n, d) in directives {
        match d {
            Directive::Letters(l) if names.is_none() => names = Some(l),
            Directive::Letters(_) => return Err(syntax(n, 1, "letters declared twice")),
            Directive::Forbid(f) => forbid.extend(f.into_iter().map(|(c, t)| (n, c, t))),
            Directive::Initial(_) if initial.is_some() => {
                return Err(syntax(n, 1, "initial letters declared twice"))
            }
            Directive::Initial(l) => {
                initial = Some(l.into_iter().map(|(c, t)| (n, c, t)).collect())
            }
            Directive::Rule {
                gen,
                from,
                to,
                line,
            } => rules.push((gen, from, to, line)),
            Directive::Builtin(_) => unreachable!(),
        }
    }
    let names = names.ok_or_else(|| syntax(1, 1, "missing `space letters` line"))?;
    let k = names.len();
    let mut t = vec![vec![true; k]; k];
    for (n, col, tok) in forbid {
        let (i, j) = parse_pair(&names, &tok)
            .ok_or_else(|| syntax(n, col, format!("`{tok}` is not a pair of letters")))?;
        t[i][j] = false;
    }
    let init = match initial {
        None => vec![true; k],
        Some(list) => {
            let mut v = vec![false; k];
            for (n, col, tok) in list {
                let i = names
                    .iter()
                    .position(|x| *x == tok)
                    .ok_or_else(|| syntax(n, col, format!("unknown letter `{tok}`")))?;
                v[i] = true;
            }
            v
        }
    };
    let space = SftSpace::new(names, t, init)?;
    let mut by_gen: Vec<(String, Vec<(Word, Word)>)> = Vec::new();
    for (gen, from, to, line) in rules {
        let word = |s: &str| {
            space
                .parse_word(s)
                .map_err(|e| ActionFileError::Semantic(format!("line {line}: {e}")))
        };
        let pair = (word(&from)?, word(&to)?);
        match by_gen.iter_mut().find(|(g, _)| *g == gen) {
            Some((_, list)) => list.push(pair),
            None => by_gen.push((gen, vec![pair])),
        }
    }
    if by_gen.is_empty() {
        return Err(ActionFileError::Semantic("no generators".into()));
    }
    let mut gens = Vec::with_capacity(by_gen.len());
    for (name, list) in by_gen {
        let ex = validate_exchange(&space, list)
            .map_err(|e| ActionFileError::Semantic(format!("generator {name}: {e}")))?;
        gens.push((name, ex));
    }
    Ok(Action::new(space, gens)?)
}

fn word_text(space: &SftSpace, w: &[u8]) -> String {
    if w.is_empty() {
        ".".to_string()
    } else {
        space.format_word(w)
    }
}

/// Canonical text of an action: parsing it gives back the same action, and
/// equal actions give equal text.
pub fn format_action(action: &Action) -> String {
    let space = action.space();
    let names = space.names();
    let mut out = format!("space letters {}\n", names.join(" "));
    let mut forbid = Vec::new();
    for (i, row) in space.transitions().iter().enumerate() {
        for (j, &ok) in row.iter().enumerate() {
            if !ok {
                forbid.push(format!("{}{}", names[i], names[j]));
            }
        }
    }
    if !forbid.is_empty() {
        out += &format!("space forbid {}\n", forbid.join(" "));
    }
    let init: Vec<&str> = names
        .iter()
        .zip(space.initial())
        .filter(|(_, &ok)| ok)
        .map(|(n, _)| n.as_str())
        .collect();
    out += &format!("space initial {}\n", init.join(" "));
    for g in action.generators() {
        let rules: BTreeMap<&Word, &Word> = g.exchange.rules().collect();
        for (u, v) in rules {
            out += &format!(
                "gen {} rule {} -> {}\n",
                g.name,
                word_text(space, u),
                word_text(space, v)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use paracomp::action::f2_boundary;

    const F2: &str = "\
space letters a A b B
space forbid aA Aa bB Bb        # forbidden successor pairs
space initial a A b B            # letters allowed at position 0
gen ga rule A -> .               # '.' denotes the empty word
gen ga rule a -> aa
gen ga rule b -> ab
gen ga rule B -> aB
gen gb rule b -> bb
gen gb rule B -> .
gen gb rule a -> ba
gen gb rule A -> bA
";

    #[test]
    fn f2_file_matches_builtin() {
        let act = parse_action_file(F2).unwrap();
        let names: Vec<&str> = act.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["ga", "gb"]);
        assert_eq!(format_action(&act), format_action(&f2_boundary()));
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = format_action(&f2_boundary());
        assert_eq!(format_action(&parse_action_file(&text).unwrap()), text);
        let act = parse_action_file("builtin = product_with_trivial:f2_boundary").unwrap();
        let text = format_action(&act);
        assert_eq!(format_action(&parse_action_file(&text).unwrap()), text);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_action_file(""),
            Err(ActionFileError::Syntax {
                line: 1,
                col: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_action_file("# only a comment\n"),
            Err(ActionFileError::Syntax { .. })
        ));
        let unknown = F2.replace("gen gb rule a -> ba", "gen gb rule a -> bz");
        assert!(matches!(
            parse_action_file(&unknown),
            Err(ActionFileError::Semantic(_))
        ));
        let bad = F2.replace("gen ga rule a -> aa", "gen ga rool a -> aa");
        assert_eq!(
            parse_action_file(&bad),
            Err(ActionFileError::Syntax {
                line: 5,
                col: 8,
                msg: "expected `rule`".into()
            })
        );
        let arrow = F2.replace("gen ga rule a -> aa", "gen ga rule a => aa");
        assert!(matches!(
            parse_action_file(&arrow),
            Err(ActionFileError::Syntax {
                line: 5,
                col: 15,
                ..
            })
        ));
        assert!(matches!(
            parse_action_file("space letters 0 1\n"),
            Err(ActionFileError::Semantic(_))
        ));
        let overlap = F2.replace("gen ga rule a -> aa", "gen ga rule . -> aa");
        assert!(matches!(
            parse_action_file(&overlap),
            Err(ActionFileError::Semantic(_))
        ));
    }
}
