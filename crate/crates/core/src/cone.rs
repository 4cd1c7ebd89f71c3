//! Polyhedral cones in H-representation, decided by exact LP.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::rational::{dot, primitive_integer, Q};

/// `{x : a·x ≥ 0 for every inequality a, e·x = 0 for every equation e}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub ambient_dim: usize,
    pub inequalities: Vec<Vec<Q>>,
    pub equations: Vec<Vec<Q>>,
}

impl Cone {
    pub fn new(ambient_dim: usize, inequalities: Vec<Vec<Q>>, equations: Vec<Vec<Q>>) -> Self {
        debug_assert!(inequalities.iter().chain(&equations).all(|r| r.len() == ambient_dim));
        Cone { ambient_dim, inequalities, equations }
    }

    pub fn with_inequalities(&self, extra: impl IntoIterator<Item = Vec<Q>>) -> Cone {
        let mut c = self.clone();
        c.inequalities.extend(extra);
        c
    }

    /// A point satisfying every inequality strictly together with its slack,
    /// or `None` when no such point exists.
    pub fn strict_point(&self) -> Option<(Vec<Q>, Q)> {
        let n = self.ambient_dim;
        let nv = 2 * n + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for r in &self.inequalities {
            let mut row = vec![Q::zero(); nv];
            for j in 0..n {
                row[j] = -r[j];
                row[n + j] = r[j];
            }
            row[2 * n] = Q::one();
            a.push(row);
            b.push(Q::zero());
        }
        push_equations(&self.equations, n, nv, &mut a, &mut b);
        let mut cap = vec![Q::zero(); nv];
        cap[2 * n] = Q::one();
        a.push(cap);
        b.push(Q::one());
        let mut c = vec![Q::zero(); nv];
        c[2 * n] = Q::one();
        match maximize(&c, &a, &b) {
            LpOutcome::Optimal { value, x } if value.is_positive() => {
                let p: Vec<Q> = (0..n).map(|j| x[j] - x[n + j]).collect();
                Some((p, value))
            }
            _ => None,
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.iter().all(|e| e.iter().all(|v| v.is_zero())) && self.strict_point().is_some()
    }

    /// Indices of inequalities that hold with equality on the whole cone, and a
    /// point that is strict on all the others.
    pub fn implicit_equalities(&self) -> (Vec<usize>, Vec<Q>) {
        let n = self.ambient_dim;
        let k = self.inequalities.len();
        let nv = 2 * n + k;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, r) in self.inequalities.iter().enumerate() {
            let mut row = vec![Q::zero(); nv];
            for j in 0..n {
                row[j] = -r[j];
                row[n + j] = r[j];
            }
            row[2 * n + i] = Q::one();
            a.push(row);
            b.push(Q::zero());
            let mut cap = vec![Q::zero(); nv];
            cap[2 * n + i] = Q::one();
            a.push(cap);
            b.push(Q::one());
        }
        push_equations(&self.equations, n, nv, &mut a, &mut b);
        let mut c = vec![Q::zero(); nv];
        for v in c.iter_mut().skip(2 * n) {
            *v = Q::one();
        }
        match maximize(&c, &a, &b) {
            LpOutcome::Optimal { x, .. } => {
                let implicit = (0..k).filter(|&i| x[2 * n + i] < Q::one()).collect();
                let p = (0..n).map(|j| x[j] - x[n + j]).collect();
                (implicit, p)
            }
            LpOutcome::Unbounded => unreachable!("objective is capped"),
        }
    }

    pub fn dimension(&self) -> usize {
        let (implicit, _) = self.implicit_equalities();
        let mut rows: Vec<Vec<Q>> = self.equations.clone();
        rows.extend(implicit.iter().map(|&i| self.inequalities[i].clone()));
        self.ambient_dim - rank(&rows)
    }

    /// Point with every inequality strict, scaled to a primitive integer vector.
    pub fn relative_interior_point(&self) -> Result<Vec<Q>> {
        let (p, _) = self.strict_point().ok_or(Error::EmptyCone)?;
        Ok(normalize_point(&p))
    }

    /// Every inequality strictly positive and every equation zero.
    pub fn contains_strictly(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|r| dot(r, x).is_positive())
            && self.equations.iter().all(|e| dot(e, x).is_zero())
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|r| !dot(r, x).is_negative())
            && self.equations.iter().all(|e| dot(e, x).is_zero())
    }
}

fn push_equations(eqs: &[Vec<Q>], n: usize, nv: usize, a: &mut Vec<Vec<Q>>, b: &mut Vec<Q>) {
    for e in eqs {
        for s in [Q::one(), -Q::one()] {
            let mut row = vec![Q::zero(); nv];
            for j in 0..n {
                row[j] = s * e[j];
                row[n + j] = -s * e[j];
            }
            a.push(row);
            b.push(Q::zero());
        }
    }
}

/// Clears denominators and divides by the content.
pub fn normalize_point(p: &[Q]) -> Vec<Q> {
    if p.iter().all(|v| v.is_zero()) {
        return p.to_vec();
    }
    primitive_integer(p).into_iter().map(Q::from_integer).collect()
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let Some(ncols) = m.first().map(|r| r.len()) else {
        return 0;
    };
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col];
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col] / pivot;
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}
