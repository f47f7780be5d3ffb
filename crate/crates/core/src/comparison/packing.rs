//! Backtracking solver for disjoint packings.
//!
//! Every item must pick one candidate `(tag, image)`; two picks conflict when
//! they share a tag and their images meet. Items are chosen most-constrained
//! first (ties to the lower index) and the remaining domains are pruned after
//! each pick. The top-level branches split the node budget evenly and are
//! independent, so running them in parallel returns exactly what a
//! sequential run returns.

use crate::par::{self, Execution};
use crate::sft::ClopenSet;

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub tag: u32,
    pub image: ClopenSet,
    /// Caller data, typically an index into the element catalog.
    pub choice: u32,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Packing {
    pub items: Vec<Vec<Candidate>>,
    /// `twin_next[i] = Some(j)` marks items `i` and `j` as interchangeable
    /// copies with identical candidate lists; `i` must then pick a lower
    /// candidate index than `j`.
    pub twin_next: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PackResult {
    pub assignment: Option<Vec<usize>>,
    pub nodes: u64,
    pub exhausted: bool,
}

impl Packing {
    #[cfg(test)]
    pub fn new(items: Vec<Vec<Candidate>>) -> Self {
        let n = items.len();
        Packing {
            items,
            twin_next: vec![None; n],
        }
    }

    fn conflicts(&self, a: usize, x: usize, b: usize, y: usize) -> bool {
        let (ca, cb) = (&self.items[a][x], &self.items[b][y]);
        ca.tag == cb.tag && !ca.image.is_disjoint(&cb.image)
    }
}

#[derive(Clone)]
struct State {
    domains: Vec<Vec<u32>>,
    assigned: Vec<Option<u32>>,
    twin_prev: Vec<Option<usize>>,
}

impl State {
    fn pick(&self) -> Option<usize> {
        (0..self.domains.len())
            .filter(|&i| self.assigned[i].is_none())
            .min_by_key(|&i| (self.domains[i].len(), i))
    }

    /// Assigns `x` to item `i` and prunes the other domains. Returns the
    /// saved domains for undo, or `None` (with nothing changed) on a wipeout.
    fn assign(&mut self, p: &Packing, i: usize, x: u32) -> Option<Vec<(usize, Vec<u32>)>> {
        let mut saved = Vec::new();
        let mut wiped = false;
        for b in 0..self.domains.len() {
            if b == i || self.assigned[b].is_some() {
                continue;
            }
            let lower = (p.twin_next[i] == Some(b)).then_some(x);
            let upper = (self.twin_prev[i] == Some(b)).then_some(x);
            let old = &self.domains[b];
            let new: Vec<u32> = old
                .iter()
                .copied()
                .filter(|&y| {
                    lower.is_none_or(|l| y > l)
                        && upper.is_none_or(|u| y < u)
                        && !p.conflicts(i, x as usize, b, y as usize)
                })
                .collect();
            if new.len() != old.len() {
                let empty = new.is_empty();
                saved.push((b, std::mem::replace(&mut self.domains[b], new)));
                if empty {
                    wiped = true;
                    break;
                }
            }
        }
        if wiped {
            self.undo(saved);
            return None;
        }
        self.assigned[i] = Some(x);
        Some(saved)
    }

    fn undo(&mut self, saved: Vec<(usize, Vec<u32>)>) {
        for (b, d) in saved.into_iter().rev() {
            self.domains[b] = d;
        }
    }
}

struct Run<'a> {
    p: &'a Packing,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Run<'_> {
    fn search(&mut self, st: &mut State) -> bool {
        let Some(i) = st.pick() else { return true };
        let dom = st.domains[i].clone();
        for x in dom {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return false;
            }
            self.nodes += 1;
            if let Some(saved) = st.assign(self.p, i, x) {
                if self.search(st) {
                    return true;
                }
                st.assigned[i] = None;
                st.undo(saved);
            }
        }
        false
    }
}

pub(crate) fn solve(p: &Packing, budget: u64, exec: Execution) -> PackResult {
    let n = p.items.len();
    let mut twin_prev = vec![None; n];
    for (i, t) in p.twin_next.iter().enumerate() {
        if let Some(j) = t {
            twin_prev[*j] = Some(i);
        }
    }
    let root = State {
        domains: p
            .items
            .iter()
            .map(|c| (0..c.len() as u32).collect())
            .collect(),
        assigned: vec![None; n],
        twin_prev,
    };
    let Some(first) = root.pick() else {
        return PackResult {
            assignment: Some(Vec::new()),
            nodes: 0,
            exhausted: false,
        };
    };
    let branches: Vec<u32> = root.domains[first].clone();
    if branches.is_empty() {
        return PackResult {
            assignment: None,
            nodes: 0,
            exhausted: false,
        };
    }
    let per_branch = (budget / branches.len() as u64).max(1);
    let outcomes = par::map(exec, &branches, |&x| {
        let mut st = root.clone();
        let mut run = Run {
            p,
            nodes: 1,
            budget: per_branch,
            exhausted: false,
        };
        let found = match st.assign(p, first, x) {
            Some(_) => run.search(&mut st),
            None => false,
        };
        let assignment = found.then(|| {
            st.assigned
                .iter()
                .map(|a| a.expect("complete") as usize)
                .collect::<Vec<_>>()
        });
        (assignment, run.nodes, run.exhausted)
    });
    let mut nodes = 0;
    let mut exhausted = false;
    for (assignment, k, ex) in outcomes {
        nodes += k;
        exhausted |= ex;
        if assignment.is_some() {
            return PackResult {
                assignment,
                nodes,
                exhausted: false,
            };
        }
    }
    PackResult {
        assignment: None,
        nodes,
        exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::tests::binary;

    fn cand(s: &crate::sft::SftSpace, lit: &str, choice: u32) -> Candidate {
        Candidate {
            tag: 0,
            image: s.parse_set(lit).unwrap(),
            choice,
        }
    }

    #[test]
    fn packs_disjoint_images() {
        let s = binary();
        let items = vec![
            vec![cand(&s, "[0]", 0), cand(&s, "[00]", 1)],
            vec![cand(&s, "[0]", 0), cand(&s, "[01]", 1)],
            vec![cand(&s, "[1]", 0)],
        ];
        let p = Packing::new(items);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let r = solve(&p, 1000, exec);
            let a = r.assignment.unwrap();
            assert_eq!(a[2], 0);
            assert!(!p.conflicts(0, a[0], 1, a[1]));
        }
    }

    #[test]
    fn reports_infeasible_and_budget() {
        let s = binary();
        let items = vec![vec![cand(&s, "[0]", 0)], vec![cand(&s, "[00]", 0)]];
        let r = solve(&Packing::new(items), 1000, Execution::Sequential);
        assert!(r.assignment.is_none() && !r.exhausted);

        // pigeonhole: 5 items, 4 disjoint slots
        let slots = ["[00]", "[01]", "[10]", "[11]"];
        let items: Vec<Vec<Candidate>> = (0..5)
            .map(|_| {
                slots
                    .iter()
                    .enumerate()
                    .map(|(k, l)| cand(&s, l, k as u32))
                    .collect()
            })
            .collect();
        let r = solve(&Packing::new(items.clone()), 3, Execution::Sequential);
        assert!(r.assignment.is_none() && r.exhausted);
        let mut p = Packing::new(items);
        for i in 0..4 {
            p.twin_next[i] = Some(i + 1);
        }
        let r = solve(&p, 1_000_000, Execution::Parallel);
        assert!(r.assignment.is_none() && !r.exhausted);
        assert!(r.nodes < 50, "{}", r.nodes);
    }
}
