//! Exact rational linear feasibility and optimization over `x >= 0`.
//!
//! The solver is a dense two-phase simplex with Bland's rule. Infeasible
//! systems come with Farkas multipliers `y` (nonnegative on `>=` rows) such
//! that `yᵀA <= 0` componentwise and `yᵀb = 1`, which no `x >= 0` can satisfy.
//! Solutions and certificates are both re-checked against the full system
//! before being returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowKind {
    /// `a·x = b`
    Eq,
    /// `a·x >= b`
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    /// Sparse coefficients, sorted by variable with no zero entries.
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: RowKind,
    pub rhs: Rational,
}

impl Row {
    pub fn new(mut coeffs: Vec<(usize, Rational)>, kind: RowKind, rhs: Rational) -> Row {
        coeffs.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
        for (j, c) in coeffs {
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Row {
            coeffs: merged,
            kind,
            rhs,
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.kind {
            RowKind::Eq => v == self.rhs,
            RowKind::Ge => v >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    /// Farkas multipliers, one per row.
    Infeasible(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Optimum {
    Optimal(Vec<Rational>),
    Unbounded,
    Infeasible(Vec<Rational>),
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// Whether `x >= 0` satisfies every row.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| r.holds(x))
    }

    /// Whether `y` proves that no `x >= 0` satisfies the system.
    pub fn is_farkas_certificate(&self, y: &[Rational]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let mut combo = vec![Rational::zero(); self.num_vars];
        let mut rhs = Rational::zero();
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            if row.kind == RowKind::Ge && yi.is_negative() {
                return false;
            }
            for (j, c) in &row.coeffs {
                if *j >= self.num_vars {
                    return false;
                }
                combo[*j] += c * yi;
            }
            rhs += &row.rhs * yi;
        }
        rhs.is_positive() && combo.iter().all(|c| !c.is_positive())
    }

    pub fn feasibility(&self) -> Feasibility {
        match self.maximize(&[]) {
            Optimum::Optimal(x) => Feasibility::Feasible(x),
            Optimum::Infeasible(y) => Feasibility::Infeasible(y),
            Optimum::Unbounded => unreachable!("zero objective is bounded"),
        }
    }

    /// Maximizes `objective·x` subject to the system and `x >= 0`.
    pub fn maximize(&self, objective: &[(usize, Rational)]) -> Optimum {
        let keep = independent_rows(self);
        let result = solve(self, &keep, objective);
        match &result {
            Optimum::Optimal(x) if !self.is_solution(x) => {
                solve(self, &(0..self.rows.len()).collect::<Vec<_>>(), objective)
            }
            Optimum::Infeasible(y) if !self.is_farkas_certificate(y) => {
                solve(self, &(0..self.rows.len()).collect::<Vec<_>>(), objective)
            }
            _ => result,
        }
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_p(r: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let n = ((r.numer() % &p) + &p) % &p;
    let d = ((r.denom() % &p) + &p) % &p;
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, PRIME - 2)))
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

/// Indices of rows to hand to the simplex: every `>=` row plus a subset of
/// equality rows whose augmented vectors are independent modulo a large
/// prime. The dropped rows are (almost surely) implied by the kept ones;
/// callers re-check every answer against the full system.
fn independent_rows(sys: &LinearSystem) -> Vec<usize> {
    let width = sys.num_vars + 1;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for (i, row) in sys.rows.iter().enumerate() {
        if row.kind == RowKind::Ge {
            keep.push(i);
            continue;
        }
        let mut v = vec![0u64; width];
        let mut ok = true;
        for (j, c) in &row.coeffs {
            match mod_p(c) {
                Some(m) => v[*j] = m,
                None => ok = false,
            }
        }
        match mod_p(&row.rhs) {
            Some(m) => v[sys.num_vars] = m,
            None => ok = false,
        }
        if !ok {
            keep.push(i);
            continue;
        }
        for (pivot, b) in &basis {
            let f = v[*pivot];
            if f != 0 {
                for k in 0..width {
                    if b[k] != 0 {
                        v[k] = (v[k] + PRIME - mulmod(f, b[k])) % PRIME;
                    }
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[pivot], PRIME - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            for (_, b) in basis.iter_mut() {
                let f = b[pivot];
                if f != 0 {
                    for k in 0..width {
                        if v[k] != 0 {
                            b[k] = (b[k] + PRIME - mulmod(f, v[k])) % PRIME;
                        }
                    }
                }
            }
            basis.push((pivot, v));
            keep.push(i);
        }
    }
    keep
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current (minimization) objective.
    cost: Vec<Rational>,
    /// Columns allowed to enter the basis.
    enterable: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.a[r][c].clone();
        if !piv.is_one() {
            for v in self.a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
            self.b[r] /= &piv;
        }
        let prow = self.a[r].clone();
        let pb = self.b[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.a[i][j] -= d;
            }
            let d = &f * &pb;
            self.b[i] -= d;
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.cost[j] -= d;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule to optimality. Returns `false` when unbounded.
    fn run(&mut self) -> bool {
        loop {
            let entering =
                (0..self.cost.len()).find(|&j| self.enterable[j] && self.cost[j].is_negative());
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][c];
                let better = match &best {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*k]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

fn solve(sys: &LinearSystem, keep: &[usize], objective: &[(usize, Rational)]) -> Optimum {
    let n = sys.num_vars;
    let m = keep.len();
    let slack_rows: Vec<usize> = (0..m)
        .filter(|&i| sys.rows[keep[i]].kind == RowKind::Ge)
        .collect();
    let n_slack = slack_rows.len();
    let art0 = n + n_slack;
    let cols = art0 + m;
    let mut a = vec![vec![Rational::zero(); cols]; m];
    let mut b = vec![Rational::zero(); m];
    let mut negated = vec![false; m];
    for (i, &ri) in keep.iter().enumerate() {
        let row = &sys.rows[ri];
        let neg = row.rhs.is_negative();
        negated[i] = neg;
        for (j, c) in &row.coeffs {
            a[i][*j] = if neg { -c } else { c.clone() };
        }
        b[i] = if neg {
            -row.rhs.clone()
        } else {
            row.rhs.clone()
        };
        a[i][art0 + i] = Rational::one();
    }
    for (s, &i) in slack_rows.iter().enumerate() {
        // surplus for a >= row, slack once the row has been negated
        a[i][n + s] = if negated[i] {
            Rational::one()
        } else {
            -Rational::one()
        };
    }
    let mut cost = vec![Rational::zero(); cols];
    for j in 0..art0 {
        let s: Rational = (0..m).map(|i| a[i][j].clone()).sum();
        cost[j] = -s;
    }
    let mut t = Tableau {
        a,
        b,
        basis: (art0..cols).collect(),
        cost,
        enterable: vec![true; cols],
    };
    for j in art0..cols {
        t.enterable[j] = false;
    }
    t.run();
    let infeasibility: Rational = (0..m)
        .filter(|&i| t.basis[i] >= art0)
        .map(|i| t.b[i].clone())
        .sum();
    if infeasibility.is_positive() {
        // cost of artificial i is 1, so its reduced cost is 1 - π_i
        let mut y = vec![Rational::zero(); sys.rows.len()];
        for (i, &ri) in keep.iter().enumerate() {
            let pi = Rational::one() - &t.cost[art0 + i];
            let pi = if negated[i] { -pi } else { pi };
            y[ri] = pi / &infeasibility;
        }
        return Optimum::Infeasible(y);
    }
    for r in 0..m {
        if t.basis[r] >= art0 {
            if let Some(c) = (0..art0).find(|&j| !t.a[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }
    let mut c = vec![Rational::zero(); cols];
    for (j, v) in objective {
        c[*j] -= v;
    }
    let mut cost = c.clone();
    for r in 0..m {
        let cb = &c[t.basis[r]];
        if !cb.is_zero() {
            for j in 0..cols {
                if !t.a[r][j].is_zero() {
                    cost[j] -= cb * &t.a[r][j];
                }
            }
        }
    }
    t.cost = cost;
    if !t.run() {
        return Optimum::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.b[r].clone();
        }
    }
    Optimum::Optimal(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(coeffs: &[(usize, i64)], kind: RowKind, rhs: i64) -> Row {
        Row::new(
            coeffs.iter().map(|&(j, c)| (j, rat(c))).collect(),
            kind,
            rat(rhs),
        )
    }

    #[test]
    fn feasible_point_satisfies_rows() {
        let mut s = LinearSystem::new(3);
        s.push(row(&[(0, 1), (1, 1), (2, 1)], RowKind::Eq, 1));
        s.push(row(&[(0, 1), (1, -1)], RowKind::Eq, 0));
        s.push(row(&[(2, 1)], RowKind::Ge, 0));
        match s.feasibility() {
            Feasibility::Feasible(x) => assert!(s.is_solution(&x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_system_has_certificate() {
        // x0 + x1 = 1, x0 = 0, x1 = 0
        let mut s = LinearSystem::new(2);
        s.push(row(&[(0, 1), (1, 1)], RowKind::Eq, 1));
        s.push(row(&[(0, 1)], RowKind::Eq, 0));
        s.push(row(&[(1, 1)], RowKind::Eq, 0));
        match s.feasibility() {
            Feasibility::Infeasible(y) => {
                assert!(s.is_farkas_certificate(&y));
                assert!(!s.is_farkas_certificate(&[rat(1), rat(0), rat(0)]));
            }
            other => panic!("{other:?}"),
        }
        // x0 - x1 >= 1 and x1 - x0 >= 0
        let mut s = LinearSystem::new(2);
        s.push(row(&[(0, 1), (1, -1)], RowKind::Ge, 1));
        s.push(row(&[(0, -1), (1, 1)], RowKind::Ge, 0));
        assert!(
            matches!(s.feasibility(), Feasibility::Infeasible(y) if s.is_farkas_certificate(&y))
        );
        // -x0 >= 1
        let mut s = LinearSystem::new(1);
        s.push(row(&[(0, -1)], RowKind::Ge, 1));
        assert!(
            matches!(s.feasibility(), Feasibility::Infeasible(y) if s.is_farkas_certificate(&y))
        );
    }

    #[test]
    fn maximize_and_unbounded() {
        // max x0 + x1 s.t. x0 + 2 x1 = 4, x0 <= 3  (i.e. -x0 >= -3)
        let mut s = LinearSystem::new(2);
        s.push(row(&[(0, 1), (1, 2)], RowKind::Eq, 4));
        s.push(row(&[(0, -1)], RowKind::Ge, -3));
        match s.maximize(&[(0, rat(1)), (1, rat(1))]) {
            Optimum::Optimal(x) => assert_eq!(
                x,
                vec![rat(3), Rational::new(BigInt::from(1), BigInt::from(2))]
            ),
            other => panic!("{other:?}"),
        }
        let mut s = LinearSystem::new(2);
        s.push(row(&[(0, 1), (1, -1)], RowKind::Eq, 0));
        assert_eq!(s.maximize(&[(0, rat(1))]), Optimum::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_harmless() {
        let mut s = LinearSystem::new(2);
        for _ in 0..3 {
            s.push(row(&[(0, 1), (1, 1)], RowKind::Eq, 2));
        }
        s.push(row(&[(0, 2), (1, 2)], RowKind::Eq, 4));
        assert!(matches!(s.feasibility(), Feasibility::Feasible(x) if s.is_solution(&x)));
        s.push(row(&[(0, 1), (1, 1)], RowKind::Eq, 3));
        assert!(
            matches!(s.feasibility(), Feasibility::Infeasible(y) if s.is_farkas_certificate(&y))
        );
    }
}
