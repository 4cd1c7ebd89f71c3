//! Lattice points of 4Δ₂ and the S₃ action on their indices.
//!
//! Points are numbered along the rows `u1 + u2 = k`, `k = 0..=4`, and inside a
//! row by decreasing `u1`:
//!
//! ```text
//! index  0      1     2      3     4     5      6     7     8     9
//! point (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3)
//!
//! index 10    11    12    13    14
//! point (4,0) (3,1) (2,2) (1,3) (0,4)
//! ```
//!
//! Equivalently, homogeneous coordinates `(4 - u1 - u2, u1, u2)` appear in
//! decreasing lexicographic order. The mirror numbering (increasing `u1`)
//! differs by the transposition `u1 ↔ u2`, which is itself one of the six
//! symmetries, so every index-level statement reads the same in both.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_POINTS: usize = 15;
pub const DEGREE: u8 = 4;

/// Sorted index triple.
pub type Triangle = [u8; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub u1: u8,
    pub u2: u8,
    pub index: u8,
}

impl LatticePoint {
    pub fn coords(&self) -> (i64, i64) {
        (self.u1 as i64, self.u2 as i64)
    }

    /// `(4 - u1 - u2, u1, u2)`.
    pub fn homogenized(&self) -> [u8; 3] {
        [DEGREE - self.u1 - self.u2, self.u1, self.u2]
    }
}

static POINTS: [(u8, u8); NUM_POINTS] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

pub fn point_of_index(i: usize) -> Result<LatticePoint> {
    let &(u1, u2) = POINTS.get(i).ok_or(Error::IndexOutOfRange(i))?;
    Ok(LatticePoint { u1, u2, index: i as u8 })
}

pub fn index_of_point(u1: i64, u2: i64) -> Option<usize> {
    if u1 < 0 || u2 < 0 || u1 + u2 > DEGREE as i64 {
        return None;
    }
    let k = u1 + u2;
    Some((k * (k + 1) / 2 + u2) as usize)
}

/// Coordinates of point `i`; panics on an out-of-range index.
pub fn coords(i: usize) -> (i64, i64) {
    let (a, b) = POINTS[i];
    (a as i64, b as i64)
}

pub fn all_points() -> impl Iterator<Item = LatticePoint> {
    (0..NUM_POINTS).map(|i| point_of_index(i).unwrap())
}

/// Twice the signed area of the triangle on three point indices.
pub fn double_area(a: usize, b: usize, c: usize) -> i64 {
    let (ax, ay) = coords(a);
    let (bx, by) = coords(b);
    let (cx, cy) = coords(c);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

pub fn sort_triangle(mut t: Triangle) -> Triangle {
    t.sort_unstable();
    t
}

/// A permutation of the 15 point indices, `p.0[i]` being the image of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation(pub [u8; NUM_POINTS]);

impl Permutation {
    pub fn identity() -> Self {
        let mut p = [0u8; NUM_POINTS];
        for (i, v) in p.iter_mut().enumerate() {
            *v = i as u8;
        }
        Permutation(p)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut p = [0u8; NUM_POINTS];
        for (i, v) in p.iter_mut().enumerate() {
            *v = self.0[other.0[i] as usize];
        }
        Permutation(p)
    }

    pub fn inverse(&self) -> Permutation {
        let mut p = [0u8; NUM_POINTS];
        for (i, &v) in self.0.iter().enumerate() {
            p[v as usize] = i as u8;
        }
        Permutation(p)
    }

    pub fn apply_triangle(&self, t: &Triangle) -> Triangle {
        sort_triangle([self.0[t[0] as usize], self.0[t[1] as usize], self.0[t[2] as usize]])
    }

    /// Image of a triangle set, each triangle and the list sorted.
    pub fn apply_triangles(&self, ts: &[Triangle]) -> Vec<Triangle> {
        let mut out: Vec<Triangle> = ts.iter().map(|t| self.apply_triangle(t)).collect();
        out.sort_unstable();
        out
    }

    pub fn apply_set(&self, s: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = s.iter().map(|&i| self.apply(i)).collect();
        out.sort_unstable();
        out
    }

    /// Moves coordinate `i` of `v` to position `σ(i)`.
    pub fn permute_coordinates<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.apply(i)] = x.clone();
        }
        out
    }
}

/// Rows of `ALL_GROUP_ELEMENTS` in the order the extension prints them.
pub const ACTION_ROWS: [[u8; NUM_POINTS]; 6] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14],
    [0, 2, 1, 5, 4, 3, 9, 8, 7, 6, 14, 13, 12, 11, 10],
    [10, 6, 11, 3, 7, 12, 1, 4, 8, 13, 0, 2, 5, 9, 14],
    [10, 11, 6, 12, 7, 3, 13, 8, 4, 1, 14, 9, 5, 2, 0],
    [14, 9, 13, 5, 8, 12, 2, 4, 7, 11, 0, 1, 3, 6, 10],
    [14, 13, 9, 12, 8, 5, 11, 7, 4, 2, 10, 6, 3, 1, 0],
];

#[derive(Debug, Clone)]
pub struct ActionTable {
    elements: [Permutation; 6],
    /// `product[i][j]` is the index of `elements[i] ∘ elements[j]`.
    product: [[usize; 6]; 6],
}

impl ActionTable {
    fn build() -> Self {
        let elements = ACTION_ROWS.map(Permutation);
        let find = |p: &Permutation| elements.iter().position(|e| e == p);
        let mut product = [[0usize; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                product[i][j] = find(&elements[i].compose(&elements[j]))
                    .expect("action rows are not closed under composition");
            }
        }
        assert!(elements[0] == Permutation::identity());
        for e in &elements {
            assert!(find(&e.inverse()).is_some(), "action rows are not closed under inverses");
            let hom = |i: usize| point_of_index(i).unwrap().homogenized();
            // Each row must permute homogeneous coordinates the same way at every point.
            let coord_perm = coordinate_permutation_of(e).expect("row is not a coordinate permutation");
            for i in 0..NUM_POINTS {
                let h = hom(i);
                let mut img = [0u8; 3];
                for k in 0..3 {
                    img[coord_perm[k]] = h[k];
                }
                assert_eq!(img, hom(e.apply(i)));
            }
        }
        ActionTable { elements, product }
    }

    pub fn elements(&self) -> &[Permutation; 6] {
        &self.elements
    }

    pub fn get(&self, k: usize) -> &Permutation {
        &self.elements[k]
    }

    pub fn product_index(&self, i: usize, j: usize) -> usize {
        self.product[i][j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        (0..6).find(|&j| self.product[i][j] == 0).unwrap()
    }
}

/// Where each homogeneous coordinate is sent, if `p` acts as a coordinate
/// permutation on the homogenized points.
pub fn coordinate_permutation_of(p: &Permutation) -> Option<[usize; 3]> {
    // The three vertices (4,0,0), (0,4,0), (0,0,4) are indices 0, 10, 14.
    let vertex_coord = |i: usize| match i {
        0 => Some(0),
        10 => Some(1),
        14 => Some(2),
        _ => None,
    };
    let mut perm = [0usize; 3];
    for (k, v) in [0usize, 10, 14].into_iter().enumerate() {
        perm[k] = vertex_coord(p.apply(v))?;
    }
    for i in 0..NUM_POINTS {
        let h = point_of_index(i).unwrap().homogenized();
        let mut img = [0u8; 3];
        for k in 0..3 {
            img[perm[k]] = h[k];
        }
        if img != point_of_index(p.apply(i)).unwrap().homogenized() {
            return None;
        }
    }
    Some(perm)
}

pub fn action_table() -> &'static ActionTable {
    static TABLE: OnceLock<ActionTable> = OnceLock::new();
    TABLE.get_or_init(ActionTable::build)
}
