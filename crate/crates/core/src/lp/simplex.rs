//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Sized for desk instances: a few hundred rows and a few thousand
//! columns. Duals are read off the tableau columns that started as the
//! identity (slack or artificial), which hold `B⁻¹`.

use serde::{Deserialize, Serialize};

pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x` subject to `rows`, `x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, rel, rhs));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// One multiplier per row, signed for the original (unflipped) row.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; last column is
    /// the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f.abs() > 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes the objective row. Columns with `allowed[c] == false`
    /// never enter. Returns false if unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        let m = self.basis.len();
        loop {
            let obj = &self.t[m];
            // Bland: lowest-index improving column
            let Some(c) = (0..self.width).find(|&c| allowed[c] && obj[c] < -TOLERANCE) else {
                return true;
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for r in 0..m {
                let a = self.t[r][c];
                if a > TOLERANCE {
                    let ratio = self.rhs(r) / a;
                    let better = match best {
                        None => true,
                        Some((br, _, bb)) => ratio < br - TOLERANCE || (ratio <= br + TOLERANCE && self.basis[r] < bb),
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn set_objective(&mut self, costs: &[f64]) {
        let m = self.basis.len();
        let mut row = vec![0.0; self.width + 1];
        for (c, &cost) in costs.iter().enumerate() {
            row[c] = -cost;
        }
        // price out basic columns
        for r in 0..m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for (v, tv) in row.iter_mut().zip(&self.t[r]) {
                    *v += cb * tv;
                }
            }
        }
        self.t[m] = row;
    }
}

pub fn solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.objective.len();
    let m = lp.rows.len();
    // normalise to non-negative right-hand sides
    let mut flipped = vec![false; m];
    let mut rels = Vec::with_capacity(m);
    for (i, (_, rel, rhs)) in lp.rows.iter().enumerate() {
        let rel = if *rhs < 0.0 {
            flipped[i] = true;
            match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            *rel
        };
        rels.push(rel);
    }
    let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
    let width = n + n_slack + n_art;
    let mut t = vec![vec![0.0; width + 1]; m + 1];
    let mut basis = vec![0; m];
    let mut unit_col = vec![0; m];
    let mut is_art = vec![false; width];
    let (mut s, mut a) = (n, n + n_slack);
    for i in 0..m {
        let sign = if flipped[i] { -1.0 } else { 1.0 };
        let (coeffs, _, rhs) = &lp.rows[i];
        for j in 0..n {
            t[i][j] = sign * coeffs[j];
        }
        t[i][width] = sign * rhs;
        match rels[i] {
            Relation::Le => {
                t[i][s] = 1.0;
                basis[i] = s;
                unit_col[i] = s;
                s += 1;
            }
            Relation::Ge => {
                t[i][s] = -1.0;
                s += 1;
                t[i][a] = 1.0;
                basis[i] = a;
                unit_col[i] = a;
                is_art[a] = true;
                a += 1;
            }
            Relation::Eq => {
                t[i][a] = 1.0;
                basis[i] = a;
                unit_col[i] = a;
                is_art[a] = true;
                a += 1;
            }
        }
    }
    let mut tab = Tableau {
        t,
        basis,
        width,
        pivots: 0,
    };
    let all = vec![true; width];
    if n_art > 0 {
        let costs: Vec<f64> = (0..width).map(|c| if is_art[c] { -1.0 } else { 0.0 }).collect();
        tab.set_objective(&costs);
        tab.optimize(&all);
        if tab.t[m][width] < -1e-7 {
            return LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                x: vec![0.0; n],
                duals: vec![0.0; m],
                pivots: tab.pivots,
            };
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if is_art[tab.basis[r]] {
                if let Some(c) = (0..width).find(|&c| !is_art[c] && tab.t[r][c].abs() > TOLERANCE) {
                    tab.pivot(r, c);
                }
            }
        }
    }
    let mut costs = vec![0.0; width];
    costs[..n].copy_from_slice(&lp.objective);
    tab.set_objective(&costs);
    let allowed: Vec<bool> = (0..width).map(|c| !is_art[c]).collect();
    if !tab.optimize(&allowed) {
        return LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::INFINITY,
            x: vec![0.0; n],
            duals: vec![0.0; m],
            pivots: tab.pivots,
        };
    }
    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r).max(0.0);
        }
    }
    let duals = (0..m)
        .map(|i| {
            let y: f64 = (0..m).map(|r| costs[tab.basis[r]] * tab.t[r][unit_col[i]]).sum();
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    LpSolution {
        status: LpStatus::Optimal,
        objective: tab.t[m][width],
        x,
        duals,
        pivots: tab.pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::new(vec![3.0, 5.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, 36.0));
        assert!(close(s.x[0], 2.0) && close(s.x[1], 6.0));
        assert!(close(s.duals[0], 0.0) && close(s.duals[1], 1.5) && close(s.duals[2], 1.0));
    }

    #[test]
    fn ge_and_eq_rows() {
        // max -x - y, x + y ≥ 2, x - y = 0 → x = y = 1
        let mut lp = LinearProgram::new(vec![-1.0, -1.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 2.0);
        lp.add_row(vec![1.0, -1.0], Relation::Eq, 0.0);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(close(s.objective, -2.0));
        assert!(close(s.x[0], 1.0) && close(s.x[1], 1.0));
        // dual objective b·y equals the primal value
        assert!(close(2.0 * s.duals[0], -2.0));
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // max x, -x ≥ -3 → x = 3 with dual of the original row = -1
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_row(vec![-1.0], Relation::Ge, -3.0);
        let s = solve(&lp);
        assert!(close(s.objective, 3.0));
        assert!(close(s.duals[0] * -3.0, 3.0));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        lp.add_row(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(vec![1.0, 0.0]);
        lp.add_row(vec![0.0, 1.0], Relation::Le, 1.0);
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);
    }
}
