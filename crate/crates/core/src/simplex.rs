//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are in standard form: minimize `c.x` subject to `A x = b`,
//! `x >= 0`. Bland's rule guarantees termination without cycling.

use crate::rational::Q;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows[i]` holds the constraint coefficients followed by the rhs.
    rows: Vec<Vec<Q>>,
    /// Reduced costs followed by minus the objective value.
    cost: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x /= p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= f * y;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c];
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                *x -= f * y;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let rhs = self.ncols;
            let mut best: Option<(Q, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = row[rhs] / row[c];
                    let better = match &best {
                        None => true,
                        Some((br, _, bb)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Minimizes `c.x` subject to `A x = b`, `x >= 0`.
pub fn minimize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpResult {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));
    // Columns: n structural, m artificial, then rhs.
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let s = |x: Q| if flip { -x } else { x };
        let mut row: Vec<Q> = a[i].iter().map(|&x| s(x)).collect();
        row.extend((0..m).map(|k| if k == i { Q::from_integer(1) } else { Q::zero() }));
        row.push(s(b[i]));
        rows.push(row);
    }
    // Phase 1 cost: sum of artificials, expressed in non-basic terms.
    let mut cost = vec![Q::zero(); ncols + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[ncols] -= row[ncols];
    }
    let mut t = Tableau {
        rows,
        cost,
        basis: (n..n + m).collect(),
        ncols,
    };
    t.optimize(n);
    if !t.cost[ncols].is_zero() {
        return LpResult::Infeasible;
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }
    // Rows still carrying an artificial are redundant; zero them out.
    for r in 0..m {
        if t.basis[r] >= n {
            for x in t.rows[r].iter_mut() {
                *x = Q::zero();
            }
        }
    }
    // Phase 2 cost.
    let mut cost = vec![Q::zero(); ncols + 1];
    cost[..n].copy_from_slice(c);
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n && !cost[bv].is_zero() {
            let f = cost[bv];
            for (x, y) in cost.iter_mut().zip(&t.rows[r]) {
                *x -= f * y;
            }
        }
    }
    t.cost = cost;
    if !t.optimize(n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[r][ncols];
        }
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpResult::Optimal { x, value }
}

/// A nonnegative solution of `A x = b`, if one exists.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    match minimize(a, b, &vec![Q::zero(); n]) {
        LpResult::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
