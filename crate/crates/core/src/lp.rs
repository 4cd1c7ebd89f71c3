//! Exact dense simplex over [`Q`].
//!
//! Only the shape needed by the polyhedral code is supported: maximize `c·x`
//! subject to `A x ≤ b`, `x ≥ 0` with `b ≥ 0`, so the origin is a feasible
//! starting vertex and no phase one is needed. Bland's rule rules out cycling
//! on the (very degenerate) homogeneous systems produced by cones.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Unbounded,
}

pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    assert!(b.iter().all(|v| !v.is_negative()), "right-hand side must be nonnegative");
    let width = n + m + 1;
    let mut rows: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n);
            let mut row = vec![Q::zero(); width];
            row[..n].clone_from_slice(r);
            row[n + i] = Q::from_integer(1);
            row[width - 1] = b[i];
            row
        })
        .collect();
    let mut obj = vec![Q::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = row[width - 1] / row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut rows, &mut obj, pr, enter);
        basis[pr] = enter;
    }

    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rows[i][width - 1];
        }
    }
    LpOutcome::Optimal { value: obj[width - 1], x }
}

fn pivot(rows: &mut [Vec<Q>], obj: &mut [Q], pr: usize, pc: usize) {
    let inv = Q::from_integer(1) / rows[pr][pc];
    for v in rows[pr].iter_mut() {
        if !v.is_zero() {
            *v *= inv;
        }
    }
    let prow = rows[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    let eliminate = |row: &mut [Q]| {
        let f = row[pc];
        if f.is_zero() {
            return;
        }
        for &j in &nz {
            row[j] -= f * prow[j];
        }
    };
    for (i, row) in rows.iter_mut().enumerate() {
        if i != pr {
            eliminate(row);
        }
    }
    eliminate(obj);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn small_textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36
        let out = maximize(
            &[q(3), q(5)],
            &[vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]],
            &[q(4), q(12), q(18)],
        );
        assert_eq!(out, LpOutcome::Optimal { value: q(36), x: vec![q(2), q(6)] });
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y ≤ 1, x + 2y ≤ 1 → (1/3, 1/3)
        let out = maximize(&[q(1), q(1)], &[vec![q(2), q(1)], vec![q(1), q(2)]], &[q(1), q(1)]);
        assert_eq!(out, LpOutcome::Optimal { value: qf(2, 3), x: vec![qf(1, 3), qf(1, 3)] });
    }

    #[test]
    fn detects_unbounded() {
        let out = maximize(&[q(1), q(0)], &[vec![q(-1), q(1)]], &[q(0)]);
        assert_eq!(out, LpOutcome::Unbounded);
    }
}
