//! Tropical quartics, tropical lines and their stable intersection.
//!
//! Under the min convention the quartic with coefficients `λ` is the corner
//! locus of `min_u (λ_u + u1·x + u2·y)`; its dual subdivision is the regular
//! subdivision induced by `λ`. Under the max convention
//! `max_u (c_u + u·p) = −min_u (−c_u + u·(−p))`, so the max curve of `c` is the
//! point reflection of the min curve of `−c`, with dual subdivision that of `−c`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{coords, Triangle, NUM_POINTS};
use crate::rational::{q, qf, Q};
use crate::subdivision::{subdivision_from_weights, Triangulation, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Min,
    Max,
}

impl Convention {
    fn sign(self) -> Q {
        match self {
            Convention::Min => q(1),
            Convention::Max => q(-1),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Convention::Min),
            "max" => Ok(Convention::Max),
            _ => Err(Error::Parse(format!("unknown convention {s:?} (expected min or max)"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Min => "min",
            Convention::Max => "max",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point2 {
    #[serde(with = "crate::rational::serde_q")]
    pub x: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub y: Q,
}

impl Point2 {
    pub fn new(x: Q, y: Q) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i128, y: i128) -> Self {
        Point2 { x: q(x), y: q(y) }
    }

    pub fn add(&self, d: Dir, t: Q) -> Point2 {
        Point2 { x: self.x + t * q(d.0 as i128), y: self.y + t * q(d.1 as i128) }
    }

    pub fn scaled(&self, s: Q) -> Point2 {
        Point2 { x: self.x * s, y: self.y * s }
    }

    pub fn sub(&self, o: &Point2) -> (Q, Q) {
        (self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A primitive integer direction.
pub type Dir = (i64, i64);

pub fn det(a: Dir, b: Dir) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn primitive(dx: Q, dy: Q) -> Dir {
    let v = crate::rational::primitive_integer(&[dx, dy]);
    (v[0] as i64, v[1] as i64)
}

/// A bounded edge (segment) or an unbounded ray of a tropical curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEdge {
    /// The dual edge of the triangulation.
    pub dual: [u8; 2],
    pub start: Point2,
    /// `None` for a ray.
    pub end: Option<Point2>,
    /// Primitive direction from `start` (towards `end` for segments).
    pub direction: Dir,
}

impl CurveEdge {
    /// Length in lattice units along `direction` (`None` for rays).
    pub fn lattice_length(&self) -> Option<Q> {
        let e = self.end?;
        let (dx, dy) = e.sub(&self.start);
        Some(if self.direction.0 != 0 { dx / q(self.direction.0 as i128) } else { dy / q(self.direction.1 as i128) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropicalQuartic {
    pub coefficients: WeightVector,
    pub convention: Convention,
    /// The dual triangulation (min-subdivision of the sign-adjusted coefficients).
    pub triangulation: Triangulation,
    /// One vertex per triangle, in the triangulation's cell order.
    pub vertices: Vec<(Triangle, Point2)>,
    pub edges: Vec<CurveEdge>,
}

/// Solves `λ_a + a·p = λ_b + b·p = λ_c + c·p` for the min convention.
fn dual_vertex(lambda: &[Q], t: &Triangle) -> Point2 {
    let [a, b, c] = t.map(|i| i as usize);
    let (ax, ay) = coords(a);
    let (bx, by) = coords(b);
    let (cx, cy) = coords(c);
    // (b - a)·p = λ_a - λ_b,  (c - a)·p = λ_a - λ_c
    let (m11, m12, r1) = (q((bx - ax) as i128), q((by - ay) as i128), lambda[a] - lambda[b]);
    let (m21, m22, r2) = (q((cx - ax) as i128), q((cy - ay) as i128), lambda[a] - lambda[c]);
    let d = m11 * m22 - m12 * m21;
    Point2::new((r1 * m22 - m12 * r2) / d, (m11 * r2 - r1 * m21) / d)
}

/// Builds the curve; errors unless the dual subdivision is a unimodular triangulation.
pub fn curve_from_coefficients(c: &WeightVector, convention: Convention) -> Result<TropicalQuartic> {
    let s = convention.sign();
    let lambda: Vec<Q> = c.entries().iter().map(|v| *v * s).collect();
    let sub = subdivision_from_weights(&WeightVector::new(lambda.clone())?);
    let tri = sub.to_triangulation().ok_or_else(|| {
        Error::NotSmooth(format!("dual subdivision has cells {:?}", sub.cells))
    })?;
    let vertices: Vec<(Triangle, Point2)> =
        tri.cells().iter().map(|t| (*t, dual_vertex(&lambda, t).scaled(s))).collect();
    let vertex_of: BTreeMap<Triangle, Point2> = vertices.iter().copied().collect();

    let mut by_edge: BTreeMap<[u8; 2], Vec<(Triangle, u8)>> = BTreeMap::new();
    for t in tri.cells() {
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            by_edge.entry([t[i], t[j]]).or_default().push((*t, t[k]));
        }
    }
    let mut edges = Vec::with_capacity(30);
    for (dual, tris) in by_edge {
        let (b, cc) = (coords(dual[0] as usize), coords(dual[1] as usize));
        match tris.as_slice() {
            [(t1, _), (t2, _)] => {
                let (p1, p2) = (vertex_of[t1], vertex_of[t2]);
                let (dx, dy) = p2.sub(&p1);
                edges.push(CurveEdge { dual, start: p1, end: Some(p2), direction: primitive(dx, dy) });
            }
            [(t, apex)] => {
                // Normal to the dual edge, pointing to the apex side (min);
                // reflected with the curve for max.
                let a = coords(*apex as usize);
                let mut d: Dir = (-(cc.1 - b.1), cc.0 - b.0);
                if d.0 * (a.0 - b.0) + d.1 * (a.1 - b.1) < 0 {
                    d = (-d.0, -d.1);
                }
                if convention == Convention::Max {
                    d = (-d.0, -d.1);
                }
                edges.push(CurveEdge { dual, start: vertex_of[t], end: None, direction: d });
            }
            _ => unreachable!("validated triangulation"),
        }
    }
    Ok(TropicalQuartic { coefficients: c.clone(), convention, triangulation: tri, vertices, edges })
}

/// Value of the tropical polynomial at `p` and the monomials attaining it.
pub fn evaluate(c: &WeightVector, convention: Convention, p: &Point2) -> (Q, Vec<usize>) {
    let vals: Vec<Q> = (0..NUM_POINTS)
        .map(|i| {
            let (u1, u2) = coords(i);
            c.entries()[i] + q(u1 as i128) * p.x + q(u2 as i128) * p.y
        })
        .collect();
    let best = match convention {
        Convention::Min => *vals.iter().min().unwrap(),
        Convention::Max => *vals.iter().max().unwrap(),
    };
    (best, (0..NUM_POINTS).filter(|&i| vals[i] == best).collect())
}

impl TropicalQuartic {
    pub fn vertex(&self, t: &Triangle) -> Option<Point2> {
        self.vertices.iter().find(|(u, _)| u == t).map(|(_, p)| *p)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        evaluate(&self.coefficients, self.convention, p).1.len() >= 2
    }

    /// Primitive edge directions leaving each vertex sum to zero.
    pub fn is_balanced(&self) -> bool {
        self.vertices.iter().all(|(_, v)| {
            let mut sx = 0;
            let mut sy = 0;
            for e in &self.edges {
                if e.start == *v {
                    sx += e.direction.0;
                    sy += e.direction.1;
                }
                if e.end == Some(*v) {
                    sx -= e.direction.0;
                    sy -= e.direction.1;
                }
            }
            sx == 0 && sy == 0
        })
    }

    /// Directions of every edge and ray, primitive and up to sign.
    pub fn directions(&self) -> Vec<Dir> {
        let mut out: Vec<Dir> = self.edges.iter().map(|e| canonical_sign(e.direction)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub(crate) fn canonical_sign(d: Dir) -> Dir {
    if d.0 < 0 || (d.0 == 0 && d.1 < 0) {
        (-d.0, -d.1)
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalLine {
    pub vertex: Point2,
    pub convention: Convention,
}

impl TropicalLine {
    pub fn new(vertex: Point2, convention: Convention) -> Self {
        TropicalLine { vertex, convention }
    }

    pub fn rays(&self) -> [Dir; 3] {
        match self.convention {
            Convention::Min => [(1, 0), (0, 1), (-1, -1)],
            Convention::Max => [(-1, 0), (0, -1), (1, 1)],
        }
    }

    /// Vertex positions `v` whose line passes through `p`: the set `p − Λ(0)`.
    pub fn through(p: &Point2, convention: Convention) -> [(Point2, Dir); 3] {
        let l = TropicalLine::new(*p, convention);
        l.rays().map(|d| (*p, (-d.0, -d.1)))
    }
}

/// The points `vertex + t·rays[ray]` of a line for `from ≤ t ≤ to`
/// (`to = None`: unbounded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RayPiece {
    pub ray: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub from: Q,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub to: Option<Q>,
}

/// A connected component of `Λ ∩ Γ`, described along the rays of the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionComponent {
    pub pieces: Vec<RayPiece>,
    pub multiplicity: u32,
}

impl IntersectionComponent {
    pub fn is_point(&self) -> bool {
        self.pieces.iter().all(|p| Some(p.from) == p.to)
    }

    pub fn contains_line_vertex(&self) -> bool {
        self.pieces.iter().any(|p| p.from.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableIntersection {
    pub components: Vec<IntersectionComponent>,
}

impl StableIntersection {
    pub fn total(&self) -> u32 {
        self.components.iter().map(|c| c.multiplicity).sum()
    }

    /// Multiplicities of the components that carry some, in decreasing order.
    pub fn distribution(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.components.iter().map(|c| c.multiplicity).filter(|&m| m > 0).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }
}

/// `a + b·ε` compared lexicographically, i.e. for infinitesimal `ε > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Eps(Q, Q);

impl Eps {
    fn is_positive(&self) -> bool {
        *self > Eps(Q::zero(), Q::zero())
    }
}

/// Default perturbation slope: no primitive direction with entries of size at
/// most 4 (all that occur on smooth quartics and lines) has this slope.
pub const DEFAULT_PERTURBATION: (i64, i64) = (1, 101);

/// Stable intersection of a line and a smooth quartic.
///
/// The line is moved by `ε·g`, `g = (g.0, g.1)` (any direction whose slope
/// differs from every edge and ray direction), and each transversal crossing
/// of weight `|det|` is followed back to its limit point as `ε → 0⁺`.
pub fn stable_intersection_with(curve: &TropicalQuartic, line: &TropicalLine, g: Dir) -> StableIntersection {
    assert_eq!(curve.convention, line.convention, "conventions must match");
    for d in curve.directions().into_iter().chain(line.rays()) {
        assert!(det(d, g) != 0, "perturbation direction {g:?} is parallel to {d:?}");
    }
    let v = line.vertex;
    let rays = line.rays();
    let (gx, gy) = (q(g.0 as i128), q(g.1 as i128));

    // Set-theoretic intersection, as closed t-intervals along each ray.
    let mut pieces = Vec::new();
    for (k, &r) in rays.iter().enumerate() {
        for e in &curve.edges {
            if let Some((from, to)) = ray_piece_overlap(&v, r, e) {
                pieces.push(RayPiece { ray: k, from, to });
            }
        }
    }
    let components = group_pieces(pieces);

    // Perturbed crossings: v + εg + t r = s + u d.
    let mut mult = vec![0u32; components.len()];
    for (k, &r) in rays.iter().enumerate() {
        for e in &curve.edges {
            let dd = det(r, e.direction);
            if dd == 0 {
                continue;
            }
            let dq = q(dd as i128);
            let (wx, wy) = e.start.sub(&v);
            // t r - u d = (s - v) - ε g  ⇒ Cramer with columns r, -d
            let (rx, ry) = (q(r.0 as i128), q(r.1 as i128));
            let (ex, ey) = (q(e.direction.0 as i128), q(e.direction.1 as i128));
            // det[r, -d] = -dd
            let solve_t = |bx: Q, by: Q| (bx * (-ey) - (-ex) * by) / (-dq);
            let solve_u = |bx: Q, by: Q| (rx * by - ry * bx) / (-dq);
            let t = Eps(solve_t(wx, wy), solve_t(-gx, -gy));
            let u = Eps(solve_u(wx, wy), solve_u(-gx, -gy));
            if !t.is_positive() || !u.is_positive() {
                continue;
            }
            if let Some(len) = e.lattice_length() {
                if !(Eps(len, Q::zero()) > u) {
                    continue;
                }
            }
            let idx = locate(&components, k, &t.0).expect("limit point lies in the intersection");
            mult[idx] += dd.unsigned_abs() as u32;
        }
    }
    StableIntersection {
        components: components
            .into_iter()
            .zip(mult)
            .map(|(pieces, multiplicity)| IntersectionComponent { pieces, multiplicity })
            .collect(),
    }
}

pub fn stable_intersection(curve: &TropicalQuartic, line: &TropicalLine) -> StableIntersection {
    stable_intersection_with(curve, line, DEFAULT_PERTURBATION)
}

/// Two components of multiplicity 2, or one of multiplicity 4.
pub fn is_bitangent(curve: &TropicalQuartic, line: &TropicalLine) -> bool {
    let d = stable_intersection(curve, line).distribution();
    d == [2, 2] || d == [4]
}

/// The t-range of `{v + t r : t ≥ 0}` meeting the edge, if nonempty.
fn ray_piece_overlap(v: &Point2, r: Dir, e: &CurveEdge) -> Option<(Q, Option<Q>)> {
    let (rx, ry) = (q(r.0 as i128), q(r.1 as i128));
    let (wx, wy) = e.start.sub(v);
    let dd = det(r, e.direction);
    if dd != 0 {
        let dq = q(dd as i128);
        let (ex, ey) = (q(e.direction.0 as i128), q(e.direction.1 as i128));
        let t = (wx * (-ey) + ex * wy) / (-dq);
        let u = (rx * wy - ry * wx) / (-dq);
        if t.is_negative() || u.is_negative() {
            return None;
        }
        if let Some(len) = e.lattice_length() {
            if u > len {
                return None;
            }
        }
        return Some((t, Some(t)));
    }
    // Parallel: collinear iff w ∥ r.
    if wx * ry != wy * rx {
        return None;
    }
    // Parameter of a point p on the ray's line: (p - v)·r / |r|² in units of r.
    let norm = rx * rx + ry * ry;
    let param = |p: &Point2| {
        let (a, b) = p.sub(v);
        (a * rx + b * ry) / norm
    };
    let t0 = param(&e.start);
    let same = e.direction.0 * r.0 + e.direction.1 * r.1 > 0;
    let (lo, hi): (Option<Q>, Option<Q>) = match e.end {
        Some(end) => {
            let t1 = param(&end);
            (Some(t0.min(t1)), Some(t0.max(t1)))
        }
        None if same => (Some(t0), None),
        None => (None, Some(t0)),
    };
    let lo = lo.map_or(Q::zero(), |l| l.max(Q::zero()));
    match hi {
        Some(h) if h < lo => None,
        h => Some((lo, h)),
    }
}

/// Merges overlapping pieces along each ray; pieces at `t = 0` share the vertex.
fn group_pieces(mut pieces: Vec<RayPiece>) -> Vec<Vec<RayPiece>> {
    pieces.sort();
    let mut merged: Vec<RayPiece> = Vec::new();
    for p in pieces {
        if let Some(last) = merged.last_mut() {
            if last.ray == p.ray {
                match last.to {
                    None => continue,
                    Some(h) if p.from <= h => {
                        last.to = p.to.map(|h2| h.max(h2));
                        continue;
                    }
                    _ => {}
                }
            }
        }
        merged.push(p);
    }
    let (at_vertex, rest): (Vec<_>, Vec<_>) = merged.into_iter().partition(|p| p.from.is_zero());
    let mut out = Vec::new();
    if !at_vertex.is_empty() {
        out.push(at_vertex);
    }
    out.extend(rest.into_iter().map(|p| vec![p]));
    out
}

fn locate(components: &[Vec<RayPiece>], ray: usize, t: &Q) -> Option<usize> {
    components.iter().position(|c| {
        c.iter().any(|p| {
            (t.is_zero() && p.from.is_zero()) || (p.ray == ray && p.from <= *t && p.to.is_none_or(|h| *t <= h))
        })
    })
}

/// A line vertex far out in the open region where the monomial `x^0 y^0`
/// is not involved: all four crossings are simple and lie on one ray.
pub fn far_line(curve: &TropicalQuartic) -> TropicalLine {
    let m = curve
        .vertices
        .iter()
        .map(|(_, p)| p.x.abs().max(p.y.abs()))
        .max()
        .unwrap_or_else(Q::zero);
    let r = m * q(4) + q(10);
    let v = match curve.convention {
        Convention::Min => Point2::new(-r, -r * qf(3, 2)),
        Convention::Max => Point2::new(r, r * qf(3, 2)),
    };
    TropicalLine::new(v, curve.convention)
}
