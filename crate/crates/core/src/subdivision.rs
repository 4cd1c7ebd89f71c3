//! Regular subdivisions of 4Δ₂ from weight vectors, unimodular triangulations,
//! secondary cones, GKZ vectors and S₃-minimal representatives.
//!
//! Weights follow the min convention: cells are projections of the *lower*
//! faces of the lifted point set `{(u, λ_u)}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{action_table, coords, double_area, sort_triangle, Triangle, NUM_POINTS};
use crate::rational::{dot, format_q, parse_q_list, primitive_integer, serde_q_vec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector(#[serde(with = "serde_q_vec")] pub Vec<Q>);

impl WeightVector {
    pub fn new(entries: Vec<Q>) -> Result<Self> {
        if entries.len() != NUM_POINTS {
            return Err(Error::WrongLength { expected: NUM_POINTS, got: entries.len() });
        }
        Ok(WeightVector(entries))
    }

    pub fn from_ints(xs: &[i128]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Q::from_integer(x)).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_q_list(s)?)
    }

    pub fn negated(&self) -> Self {
        WeightVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn entries(&self) -> &[Q] {
        &self.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_q).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Cells of a regular subdivision as sorted index sets, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subdivision {
    pub cells: Vec<Vec<u8>>,
}

impl Subdivision {
    pub fn max_cell_size(&self) -> usize {
        self.cells.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn to_triangulation(&self) -> Option<Triangulation> {
        if !is_unimodular_triangulation(self) {
            return None;
        }
        let cells = self.cells.iter().map(|c| [c[0], c[1], c[2]]).collect();
        Triangulation::new(cells).ok()
    }
}

/// Lower faces of the lifted configuration, as index sets of all points lying
/// on each lower facet.
pub fn subdivision_from_weights(w: &WeightVector) -> Subdivision {
    let lam = w.entries();
    let mut cells: BTreeSet<Vec<u8>> = BTreeSet::new();
    for a in 0..NUM_POINTS {
        for b in a + 1..NUM_POINTS {
            for c in b + 1..NUM_POINTS {
                if double_area(a, b, c) == 0 {
                    continue;
                }
                let plane = plane_through(a, b, c, lam);
                let mut on = Vec::new();
                let mut lower = true;
                for j in 0..NUM_POINTS {
                    let h = lam[j] - plane_value(&plane, j);
                    if h.is_negative() {
                        lower = false;
                        break;
                    }
                    if h.is_zero() {
                        on.push(j as u8);
                    }
                }
                if lower {
                    cells.insert(on);
                }
            }
        }
    }
    Subdivision { cells: cells.into_iter().collect() }
}

/// Affine function `(α, β, γ)` with `α + β u1 + γ u2` interpolating the
/// lifted points `a`, `b`, `c`.
fn plane_through(a: usize, b: usize, c: usize, lam: &[Q]) -> [Q; 3] {
    let (ax, ay) = coords(a);
    let (bx, by) = coords(b);
    let (cx, cy) = coords(c);
    let det = Q::from_integer(double_area(a, b, c) as i128);
    let (dbx, dby) = (Q::from_integer((bx - ax) as i128), Q::from_integer((by - ay) as i128));
    let (dcx, dcy) = (Q::from_integer((cx - ax) as i128), Q::from_integer((cy - ay) as i128));
    let (db, dc) = (lam[b] - lam[a], lam[c] - lam[a]);
    let beta = (db * dcy - dc * dby) / det;
    let gamma = (dbx * dc - dcx * db) / det;
    let alpha = lam[a] - beta * Q::from_integer(ax as i128) - gamma * Q::from_integer(ay as i128);
    [alpha, beta, gamma]
}

fn plane_value(p: &[Q; 3], j: usize) -> Q {
    let (x, y) = coords(j);
    p[0] + p[1] * Q::from_integer(x as i128) + p[2] * Q::from_integer(y as i128)
}

pub fn is_unimodular_triangulation(s: &Subdivision) -> bool {
    s.cells.len() == 16
        && s.cells
            .iter()
            .all(|c| c.len() == 3 && double_area(c[0] as usize, c[1] as usize, c[2] as usize).abs() == 1)
}

fn on_boundary_edge(a: usize, b: usize) -> bool {
    let (ax, ay) = coords(a);
    let (bx, by) = coords(b);
    (ax == 0 && bx == 0) || (ay == 0 && by == 0) || (ax + ay == 4 && bx + by == 4)
}

/// A unimodular triangulation of 4Δ₂: 16 sorted triangles in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct Triangulation {
    cells: Vec<Triangle>,
}

impl TryFrom<Vec<Vec<u8>>> for Triangulation {
    type Error = Error;

    fn try_from(v: Vec<Vec<u8>>) -> Result<Self> {
        let cells = v
            .into_iter()
            .map(|c| {
                <[u8; 3]>::try_from(c.as_slice())
                    .map_err(|_| Error::InvalidTriangulation(format!("cell {c:?} is not a triangle")))
            })
            .collect::<Result<Vec<_>>>()?;
        Triangulation::new(cells)
    }
}

impl From<Triangulation> for Vec<Vec<u8>> {
    fn from(t: Triangulation) -> Self {
        t.cells.iter().map(|c| c.to_vec()).collect()
    }
}

/// An interior edge `{b, c}` together with the apexes of its two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorEdge {
    pub edge: [u8; 2],
    pub apexes: [u8; 2],
}

impl Triangulation {
    pub fn new(cells: Vec<Triangle>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        if cells.len() != 16 {
            return bad(format!("expected 16 triangles, got {}", cells.len()));
        }
        let mut sorted = Vec::with_capacity(16);
        for c in cells {
            if c.iter().any(|&i| i as usize >= NUM_POINTS) {
                return bad(format!("triangle {c:?} has an index outside 0..15"));
            }
            if double_area(c[0] as usize, c[1] as usize, c[2] as usize).abs() != 1 {
                return bad(format!("triangle {c:?} is not unimodular"));
            }
            sorted.push(sort_triangle(c));
        }
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated triangle".into());
        }
        let t = Triangulation { cells: sorted };
        for (edge, apexes) in t.edge_map() {
            let (a, b) = (edge[0] as usize, edge[1] as usize);
            match apexes.as_slice() {
                [_] if on_boundary_edge(a, b) => {}
                [p, q] if !on_boundary_edge(a, b) => {
                    let s1 = double_area(a, b, *p as usize).signum();
                    let s2 = double_area(a, b, *q as usize).signum();
                    if s1 == s2 {
                        return bad(format!("triangles on edge {edge:?} overlap"));
                    }
                }
                _ => return bad(format!("edge {edge:?} is used by {} triangles", apexes.len())),
            }
        }
        Ok(t)
    }

    pub fn from_cells(cells: &[[u8; 3]]) -> Result<Self> {
        Self::new(cells.to_vec())
    }

    /// Parses a JSON cell list such as `[[0,1,2],[1,2,4],...]`.
    pub fn parse_json(s: &str) -> Result<Self> {
        let v: Vec<Vec<u8>> = serde_json::from_str(s)?;
        Triangulation::try_from(v)
    }

    pub fn cells(&self) -> &[Triangle] {
        &self.cells
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        self.cells.binary_search(t).is_ok()
    }

    fn edge_map(&self) -> BTreeMap<[u8; 2], Vec<u8>> {
        let mut m: BTreeMap<[u8; 2], Vec<u8>> = BTreeMap::new();
        for t in &self.cells {
            for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                m.entry([t[i], t[j]]).or_default().push(t[k]);
            }
        }
        m
    }

    pub fn interior_edges(&self) -> Vec<InteriorEdge> {
        self.edge_map()
            .into_iter()
            .filter(|(_, ap)| ap.len() == 2)
            .map(|(edge, ap)| InteriorEdge { edge, apexes: [ap[0].min(ap[1]), ap[0].max(ap[1])] })
            .collect()
    }

    pub fn edges(&self) -> Vec<[u8; 2]> {
        self.edge_map().into_keys().collect()
    }

    pub fn to_subdivision(&self) -> Subdivision {
        Subdivision { cells: self.cells.iter().map(|c| c.to_vec()).collect() }
    }

    pub fn apply(&self, sigma_index: usize) -> Triangulation {
        Triangulation { cells: action_table().get(sigma_index).apply_triangles(&self.cells) }
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|c| format!("[{},{},{}]", c[0], c[1], c[2])).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Affine dependence of the circuit `{a, b, c, d}`, as a primitive integer row
/// over the 15 coordinates with positive apex coefficients.
pub fn circuit_row(e: &InteriorEdge) -> Vec<Q> {
    let pts = [e.apexes[0], e.edge[0], e.edge[1], e.apexes[1]].map(|i| i as usize);
    let hom = |i: usize| {
        let (x, y) = coords(i);
        [1i128, x as i128, y as i128]
    };
    let det3 = |p: [usize; 3]| {
        let (r0, r1, r2) = (hom(p[0]), hom(p[1]), hom(p[2]));
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
            + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    };
    let mut coef = [0i128; 4];
    for (k, c) in coef.iter_mut().enumerate() {
        let rest: Vec<usize> = (0..4).filter(|&j| j != k).map(|j| pts[j]).collect();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        *c = sign * det3([rest[0], rest[1], rest[2]]);
    }
    let prim = primitive_integer(&coef.map(Q::from_integer));
    let flip = if prim[0] < 0 { -1 } else { 1 };
    let mut row = vec![Q::zero(); NUM_POINTS];
    for (k, &p) in pts.iter().enumerate() {
        row[p] += Q::from_integer(flip * prim[k]);
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondaryCone {
    #[serde(with = "crate::rational::serde_q_rows")]
    pub inequalities: Vec<Vec<Q>>,
    pub lineality_dimension: usize,
}

impl SecondaryCone {
    pub fn cone(&self) -> Cone {
        Cone::new(NUM_POINTS, self.inequalities.clone(), vec![])
    }

    pub fn contains_strictly(&self, w: &WeightVector) -> bool {
        self.inequalities.iter().all(|r| dot(r, w.entries()).is_positive())
    }
}

/// Affine functions on the lattice points: they span the lineality space.
pub fn lineality_basis() -> Vec<Vec<Q>> {
    let one = (0..NUM_POINTS).map(|_| Q::from_integer(1)).collect();
    let x = (0..NUM_POINTS).map(|i| Q::from_integer(coords(i).0 as i128)).collect();
    let y = (0..NUM_POINTS).map(|i| Q::from_integer(coords(i).1 as i128)).collect();
    vec![one, x, y]
}

pub fn secondary_cone(t: &Triangulation) -> SecondaryCone {
    let inequalities = t.interior_edges().iter().map(circuit_row).collect();
    SecondaryCone { inequalities, lineality_dimension: 3 }
}

/// Regular iff the circuit inequalities admit a strictly positive solution.
pub fn is_regular(t: &Triangulation) -> bool {
    secondary_cone(t).cone().strict_point().is_some()
}

/// A weight vector strictly inside the secondary cone, scaled to integers.
pub fn interior_weights(t: &Triangulation) -> Result<WeightVector> {
    WeightVector::new(secondary_cone(t).cone().relative_interior_point()?)
}

/// Entry `i` is the summed area of the triangles containing point `i`.
pub fn gkz_vector(t: &Triangulation) -> Vec<Q> {
    let mut v = vec![Q::zero(); NUM_POINTS];
    for c in t.cells() {
        let area = Q::new(double_area(c[0] as usize, c[1] as usize, c[2] as usize).abs() as i128, 2);
        for &i in c {
            v[i as usize] += area;
        }
    }
    v
}

/// Lexicographically smallest image under the six symmetries, with the index
/// of a symmetry attaining it.
pub fn minimal_representative_with_symmetry(t: &Triangulation) -> (Triangulation, usize) {
    (0..6)
        .map(|k| (t.apply(k), k))
        .min_by(|a, b| a.0.cells.cmp(&b.0.cells).then(a.1.cmp(&b.1)))
        .unwrap()
}

pub fn minimal_representative(t: &Triangulation) -> Triangulation {
    minimal_representative_with_symmetry(t).0
}

/// Number of distinct images under the action.
pub fn orbit_size(t: &Triangulation) -> usize {
    let mut imgs: Vec<Triangulation> = (0..6).map(|k| t.apply(k)).collect();
    imgs.sort();
    imgs.dedup();
    imgs.len()
}

/// The triangulation induced by `u1² + u1 u2 + u2²`: every cell is a unit
/// triangle cut out by the three line families.
pub fn staircase() -> Triangulation {
    let w: Vec<i128> = (0..NUM_POINTS)
        .map(|i| {
            let (x, y) = coords(i);
            (x * x + x * y + y * y) as i128
        })
        .collect();
    subdivision_from_weights(&WeightVector::from_ints(&w).unwrap())
        .to_triangulation()
        .expect("staircase weights are generic")
}
