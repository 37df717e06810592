use num_traits::{Signed, Zero};

use super::{dot, LpOutcome, LpProblem, LpSolution, Rational, Sense};

/// Solves `p` exactly. Two phases over a dense tableau; the entering column
/// is the least index with negative reduced cost and ties in the ratio test
/// go to the least basic variable (Bland), so the method terminates.
pub fn solve(p: &LpProblem) -> LpOutcome {
    solve_counting(p).0
}

/// As `solve`, also returning the number of pivots performed.
pub fn solve_counting(p: &LpProblem) -> (LpOutcome, usize) {
    let n = p.columns;
    let m = p.rows.len();
    let cost: Vec<Rational> = match p.sense {
        Sense::Min => p.objective.clone(),
        Sense::Max => p.objective.iter().map(|c| -c).collect(),
    };
    let sign: Vec<bool> = p.rows.iter().map(|r| r.rhs.is_negative()).collect();
    let flip = |x: &Rational, neg: bool| if neg { -x } else { x.clone() };

    // columns: n structural, m artificial, then the right-hand side
    let rhs = n + m;
    let mut t = Tableau {
        rows: p
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<Rational> = r.coeffs.iter().map(|x| flip(x, sign[i])).collect();
                row.extend((0..m).map(|k| if k == i { super::int(1) } else { Rational::zero() }));
                row.push(flip(&r.rhs, sign[i]));
                row
            })
            .collect(),
        obj: vec![Rational::zero(); rhs + 1],
        basis: (n..n + m).collect(),
        live: (0..m).collect(),
        pivots: 0,
    };

    // phase 1: minimise the sum of artificials
    for row in &t.rows {
        for j in (0..n).chain(std::iter::once(rhs)) {
            t.obj[j] -= &row[j];
        }
    }
    if t.run(n + m).is_err() {
        unreachable!("phase 1 is bounded below by zero");
    }
    if !t.obj[rhs].is_zero() {
        return (LpOutcome::Infeasible, t.pivots);
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    t.live.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2
    t.obj = vec![Rational::zero(); rhs + 1];
    t.obj[..n].clone_from_slice(&cost);
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        let cb = &cost[b];
        if cb.is_zero() {
            continue;
        }
        for (o, x) in t.obj.iter_mut().zip(row) {
            *o -= cb * x;
        }
    }
    if t.run(n).is_err() {
        return (LpOutcome::Unbounded, t.pivots);
    }

    let mut vertex = vec![Rational::zero(); n];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        vertex[b] = row[rhs].clone();
    }
    let mut basis = t.basis.clone();
    basis.sort_unstable();

    // duals of the internal minimisation: solve yᵀB = c_B on the kept rows
    let k = t.live.len();
    let mut system: Vec<Vec<Rational>> = t
        .basis
        .iter()
        .map(|&b| {
            let mut eq: Vec<Rational> = t
                .live
                .iter()
                .map(|&r| flip(&p.rows[r].coeffs[b], sign[r]))
                .collect();
            eq.push(cost[b].clone());
            eq
        })
        .collect();
    let y = gauss_solve(&mut system, k);
    let mut duals = vec![Rational::zero(); m];
    for (idx, &r) in t.live.iter().enumerate() {
        let yi = flip(&y[idx], sign[r]);
        duals[r] = match p.sense {
            Sense::Min => yi,
            Sense::Max => -yi,
        };
    }
    let value = dot(&p.objective, &vertex);
    (
        LpOutcome::Optimal(LpSolution {
            value,
            vertex,
            basis,
            duals,
        }),
        t.pivots,
    )
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    /// Original row index of each tableau row.
    live: Vec<usize>,
    pivots: usize,
}

struct Unbounded;

impl Tableau {
    /// Bland iterations with entering columns restricted to `0..allowed`.
    fn run(&mut self, allowed: usize) -> Result<(), Unbounded> {
        let rhs = self.obj.len() - 1;
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(Unbounded);
            };
            self.pivot(r, c);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, q) in row.iter_mut().zip(&prow) {
                if !q.is_zero() {
                    *x -= &f * q;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }
}

/// Gauss–Jordan on a nonsingular `k × (k + 1)` augmented system.
fn gauss_solve(a: &mut [Vec<Rational>], k: usize) -> Vec<Rational> {
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .expect("basis matrix is nonsingular");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, q) in row.iter_mut().zip(&prow) {
                    *x -= &f * q;
                }
            }
        }
    }
    a.iter().map(|row| row[k].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{check_solution, int};

    fn lp(sense: Sense, obj: &[i64], rows: &[(&[i64], i64)]) -> LpProblem {
        let mut p = LpProblem::new(sense, obj.iter().map(|&c| int(c)).collect());
        for (coeffs, rhs) in rows {
            p.add_row(coeffs.iter().map(|&c| int(c)).collect(), int(*rhs));
        }
        p
    }

    #[test]
    fn simplex_on_segment() {
        let p = lp(Sense::Max, &[1, 2], &[(&[1, 1], 1)]);
        let s = solve(&p).optimal().cloned().unwrap();
        assert_eq!(s.value, int(2));
        assert_eq!(s.vertex, vec![int(0), int(1)]);
        assert!(check_solution(&p, &s));
        let s = solve(&p.flipped()).optimal().cloned().unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.vertex, vec![int(1), int(0)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(solve(&lp(Sense::Max, &[1], &[(&[1], -1)])), LpOutcome::Infeasible);
        assert_eq!(solve(&lp(Sense::Max, &[1, 0], &[(&[1, -1], 0)])), LpOutcome::Unbounded);
        assert_eq!(solve(&lp(Sense::Max, &[1], &[])), LpOutcome::Unbounded);
        let s = solve(&lp(Sense::Min, &[1], &[])).optimal().cloned().unwrap();
        assert_eq!(s.value, int(0));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let p = lp(Sense::Max, &[3, 1], &[(&[1, 1], 2), (&[2, 2], 4), (&[1, 1], 2)]);
        let (out, _) = solve_counting(&p);
        let s = out.optimal().cloned().unwrap();
        assert_eq!(s.value, int(6));
        assert!(check_solution(&p, &s));
    }
}
