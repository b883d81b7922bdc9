//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Works over any [`Scalar`]; with exact rationals the returned basic
//! solution and optimum are exact.

use std::time::Instant;

use super::{LpModel, Relation, Sense, SolveReport, Status};
use crate::scalar::Scalar;

/// Pivot budget per solve.
pub const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    /// Reduced costs; last entry is minus the current objective.
    obj: Vec<S>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    blocked: Vec<bool>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    Budget,
}

impl<S: Scalar> Tableau<S> {
    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let rhs = self.ncols();
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.div_ref(&p);
                }
            }
        }
        let pr = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=rhs).filter(|&j| !pr[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j].sub_mul(&f, &pr[j]);
            }
            // Keep the pivot column exactly unit under float rounding.
            row[c] = S::zero();
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j].sub_mul(&f, &pr[j]);
            }
            self.obj[c] = S::zero();
        }
        self.rows[r] = pr;
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Maximizes the objective currently loaded in `obj`.
    fn run(&mut self) -> Outcome {
        let rhs = self.ncols();
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Outcome::Budget;
            }
            let Some(c) = (0..rhs).find(|&j| !self.blocked[j] && self.obj[j].is_pos()) else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = row[rhs].div_ref(&row[c]);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        let d = ratio.clone() - br.clone();
                        d.is_neg() || (d.is_zero_tol() && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn load_objective(&mut self, cost: &[S]) {
        let rhs = self.ncols();
        let mut obj: Vec<S> = cost.to_vec();
        obj.push(S::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=rhs {
                if !row[j].is_zero() {
                    obj[j].sub_mul(cb, &row[j]);
                }
            }
        }
        self.obj = obj;
    }
}

pub fn solve<S: Scalar>(model: &LpModel<S>) -> SolveReport<S> {
    let start = Instant::now();
    let nvars = model.objective.len();
    let active: Vec<usize> = (0..nvars).filter(|&v| !model.fixed_zero[v]).collect();
    let mut col_of = vec![usize::MAX; nvars];
    for (c, &v) in active.iter().enumerate() {
        col_of[v] = c;
    }

    // Normalize rows to nonnegative right-hand sides.
    struct Row<S> {
        coeffs: Vec<(usize, S)>,
        rel: Relation,
        rhs: S,
    }
    let mut rows: Vec<Row<S>> = Vec::with_capacity(model.constraints.len());
    for con in &model.constraints {
        let coeffs: Vec<(usize, S)> =
            con.coeffs.iter().filter(|(v, _)| col_of[*v] != usize::MAX).map(|(v, a)| (col_of[*v], a.clone())).collect();
        if con.rhs.is_neg() {
            let rel = match con.relation {
                Relation::Ge => Relation::Le,
                Relation::Le => Relation::Ge,
                Relation::Eq => Relation::Eq,
            };
            rows.push(Row { coeffs: coeffs.into_iter().map(|(c, a)| (c, -a)).collect(), rel, rhs: -con.rhs.clone() });
        } else {
            rows.push(Row { coeffs, rel: con.relation, rhs: con.rhs.clone() });
        }
    }

    let mut kinds = vec![ColKind::Structural; active.len()];
    let m = rows.len();
    let mut extra: Vec<(usize, ColKind, S)> = Vec::new();
    let mut basis = vec![0usize; m];
    for (i, r) in rows.iter().enumerate() {
        match r.rel {
            Relation::Le => {
                basis[i] = kinds.len() + extra.len();
                extra.push((i, ColKind::Slack, S::one()));
            }
            Relation::Ge => {
                extra.push((i, ColKind::Slack, -S::one()));
                basis[i] = kinds.len() + extra.len();
                extra.push((i, ColKind::Artificial, S::one()));
            }
            Relation::Eq => {
                basis[i] = kinds.len() + extra.len();
                extra.push((i, ColKind::Artificial, S::one()));
            }
        }
    }
    kinds.extend(extra.iter().map(|e| e.1));
    let ncols = kinds.len();
    let mut table: Vec<Vec<S>> = vec![vec![S::zero(); ncols + 1]; m];
    for (i, r) in rows.iter().enumerate() {
        for (c, a) in &r.coeffs {
            table[i][*c] = table[i][*c].clone() + a.clone();
        }
        table[i][ncols] = r.rhs.clone();
    }
    for (off, (i, _, a)) in extra.iter().enumerate() {
        table[*i][active.len() + off] = a.clone();
    }

    let mut t = Tableau { rows: table, obj: Vec::new(), basis, kinds, blocked: vec![false; ncols], pivots: 0 };
    let finish = |t: &Tableau<S>, status: Status, objective: Option<S>, x: Vec<S>| SolveReport {
        status,
        objective,
        x,
        pivots: t.pivots,
        wall_time: start.elapsed(),
        exact: S::EXACT,
    };

    // Phase 1: maximize minus the sum of artificials.
    let phase1: Vec<S> =
        t.kinds.iter().map(|k| if *k == ColKind::Artificial { -S::one() } else { S::zero() }).collect();
    if t.kinds.contains(&ColKind::Artificial) {
        t.load_objective(&phase1);
        if let Outcome::Budget = t.run() {
            return finish(&t, Status::BudgetExceeded, None, Vec::new());
        }
        if t.obj[ncols].is_pos() {
            return finish(&t, Status::Infeasible, None, Vec::new());
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.kinds[t.basis[i]] == ColKind::Artificial {
                let c = (0..ncols).find(|&j| t.kinds[j] != ColKind::Artificial && !t.rows[i][j].is_zero_tol());
                match c {
                    Some(c) => t.pivot(i, c),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for j in 0..ncols {
            t.blocked[j] = t.kinds[j] == ColKind::Artificial;
        }
    }

    // Phase 2.
    let mut cost = vec![S::zero(); ncols];
    for (c, &v) in active.iter().enumerate() {
        cost[c] = match model.sense {
            Sense::Max => model.objective[v].clone(),
            Sense::Min => -model.objective[v].clone(),
        };
    }
    t.load_objective(&cost);
    match t.run() {
        Outcome::Budget => return finish(&t, Status::BudgetExceeded, None, Vec::new()),
        Outcome::Unbounded => return finish(&t, Status::Unbounded, None, Vec::new()),
        Outcome::Optimal => {}
    }
    let mut x = vec![S::zero(); nvars];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        if b < active.len() {
            x[active[b]] = row[ncols].clone();
        }
    }
    let value = model.objective.iter().zip(&x).fold(S::zero(), |acc, (c, v)| acc + c.mul_ref(v));
    finish(&t, Status::Optimal, Some(value), x)
}
