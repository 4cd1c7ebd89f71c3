//! Motif-free enumeration of the bitangent classes of a smooth quartic.
//!
//! Whether `Λ(v)` is bitangent can only change where the combinatorics of
//! `Λ(v) ∩ Γ` changes: when `v` crosses the curve, or when a ray of the line
//! passes through a vertex of the curve (`v ∈ p − Λ(0)`). Extending all these
//! loci to full lines gives an arrangement on whose open cells (vertices,
//! edges, faces) bitangency is constant. One exact sample per cell decides the
//! cell, and bitangent cells incident to each other are glued into classes.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{canonical_sign, stable_intersection, Dir, Point2, TropicalLine, TropicalQuartic};
use crate::rational::{q, Q};

/// `n·p = c` with `n` primitive and sign-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Line {
    n: Dir,
    c: Q,
}

impl Line {
    fn through(p: &Point2, d: Dir) -> Line {
        let n = canonical_sign((-d.1, d.0));
        Line { n, c: nq(n.0) * p.x + nq(n.1) * p.y }
    }

    fn eval(&self, p: &Point2) -> Q {
        nq(self.n.0) * p.x + nq(self.n.1) * p.y - self.c
    }

    fn dir(&self) -> Dir {
        (self.n.1, -self.n.0)
    }

    fn along(&self, d: Dir) -> Q {
        nq(self.n.0 * d.0 + self.n.1 * d.1)
    }
}

fn nq(x: i64) -> Q {
    q(x as i128)
}

fn intersect(a: &Line, b: &Line) -> Option<Point2> {
    let det = a.n.0 * b.n.1 - a.n.1 * b.n.0;
    if det == 0 {
        return None;
    }
    let d = nq(det);
    Some(Point2::new((a.c * nq(b.n.1) - nq(a.n.1) * b.c) / d, (nq(a.n.0) * b.c - a.c * nq(b.n.0)) / d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCell {
    pub dim: u8,
    /// Exact sample of the open cell, used as the line vertex.
    pub sample: Point2,
    /// For 1-cells, the primitive direction of the supporting line.
    pub direction: Option<Dir>,
    /// Multiplicities of the components of `Λ(sample) ∩ Γ`.
    pub distribution: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitangentClass {
    pub cells: Vec<OracleCell>,
    /// Pairs of indices into `cells` that are incident (lower-dimensional first).
    pub incidences: Vec<(usize, usize)>,
}

/// A translation-invariant description of the shape of a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dims: Vec<u8>,
    pub pieces: usize,
    pub dirs: Vec<Dir>,
    /// Boundary of the two-dimensional part: each direction with the number
    /// of maximal straight boundary segments in it.
    pub polygon: Vec<(Dir, usize)>,
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let dirs: Vec<String> = self.dirs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let poly: Vec<String> = self.polygon.iter().map(|((a, b), n)| format!("({a},{b})x{n}")).collect();
        write!(f, "dims={} pieces={} dirs={}", dims.join(","), self.pieces, dirs.join(""))?;
        if !poly.is_empty() {
            write!(f, " boundary={}", poly.join(""))?;
        }
        Ok(())
    }
}

struct Arrangement {
    lines: Vec<Line>,
    /// sign vector → (dim, sample, direction)
    cells: Vec<(u8, Point2, Option<Dir>)>,
    index: HashMap<Vec<i8>, usize>,
    incidences: BTreeSet<(usize, usize)>,
}

fn critical_lines(curve: &TropicalQuartic) -> Vec<Line> {
    let mut lines = BTreeSet::new();
    for e in &curve.edges {
        lines.insert(Line::through(&e.start, e.direction));
    }
    for (_, p) in &curve.vertices {
        for d in TropicalLine::new(*p, curve.convention).rays() {
            lines.insert(Line::through(p, d));
        }
    }
    lines.into_iter().collect()
}

impl Arrangement {
    fn new(lines: Vec<Line>) -> Self {
        Arrangement { lines, cells: Vec::new(), index: HashMap::new(), incidences: BTreeSet::new() }
    }

    fn signs(&self, p: &Point2) -> Vec<i8> {
        self.lines
            .iter()
            .map(|l| {
                let v = l.eval(p);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    fn cell(&mut self, p: Point2, direction: Option<Dir>) -> usize {
        let s = self.signs(&p);
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let zeros = s.iter().filter(|&&x| x == 0).count();
        let dim = match zeros {
            0 => 2,
            1 => 1,
            _ => 0,
        };
        let i = self.cells.len();
        self.cells.push((dim, p, if dim == 1 { direction.map(canonical_sign) } else { None }));
        self.index.insert(s, i);
        i
    }

    /// Largest step `δ/2` from `w` along `d` that crosses no line missing `w`.
    fn step(&self, w: &Point2, d: Dir) -> Q {
        let mut best: Option<Q> = None;
        for l in &self.lines {
            let at = l.eval(w);
            let slope = l.along(d);
            if at.is_zero() || slope.is_zero() {
                continue;
            }
            let t = (at / slope).abs() / q(2);
            best = Some(best.map_or(t, |b: Q| b.min(t)));
        }
        best.unwrap_or_else(|| q(1))
    }

    fn build(&mut self) {
        let n = self.lines.len();
        let mut vertices: Vec<(Point2, Vec<usize>)> = Vec::new();
        let mut seen: HashMap<Point2, usize> = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                if let Some(p) = intersect(&self.lines[i], &self.lines[j]) {
                    let k = *seen.entry(p).or_insert_with(|| {
                        vertices.push((p, Vec::new()));
                        vertices.len() - 1
                    });
                    vertices[k].1.push(i);
                    vertices[k].1.push(j);
                }
            }
        }
        for (_, ls) in vertices.iter_mut() {
            ls.sort_unstable();
            ls.dedup();
        }

        // Edges along each line between consecutive vertices.
        let mut on_line: Vec<Vec<(Q, usize)>> = vec![Vec::new(); n];
        for (k, (p, ls)) in vertices.iter().enumerate() {
            for &i in ls {
                let d = self.lines[i].dir();
                on_line[i].push((nq(d.0) * p.x + nq(d.1) * p.y, k));
            }
        }
        let vcell: Vec<usize> = vertices.iter().map(|(p, _)| self.cell(*p, None)).collect();
        for (i, pts) in on_line.iter_mut().enumerate() {
            pts.sort();
            let d = self.lines[i].dir();
            let neg = (-d.0, -d.1);
            let Some(&(_, first)) = pts.first() else { continue };
            let &(_, last) = pts.last().unwrap();
            let before = self.cell(vertices[first].0.add(neg, q(1)), Some(d));
            self.incidences.insert((vcell[first], before));
            let after = self.cell(vertices[last].0.add(d, q(1)), Some(d));
            self.incidences.insert((vcell[last], after));
            for w in pts.windows(2) {
                let (a, b) = (&vertices[w[0].1].0, &vertices[w[1].1].0);
                let mid = Point2::new((a.x + b.x) / q(2), (a.y + b.y) / q(2));
                let e = self.cell(mid, Some(d));
                self.incidences.insert((vcell[w[0].1], e));
                self.incidences.insert((vcell[w[1].1], e));
            }
        }

        // Faces: one sample per angular sector at every vertex.
        for (k, (w, ls)) in vertices.iter().enumerate() {
            let mut dirs: Vec<Dir> = Vec::new();
            for &i in ls {
                let d = self.lines[i].dir();
                dirs.push(d);
                dirs.push((-d.0, -d.1));
            }
            dirs.sort_by(|a, b| angle_cmp(*a, *b));
            for s in 0..dirs.len() {
                let (d1, d2) = (dirs[s], dirs[(s + 1) % dirs.len()]);
                let mid = (d1.0 + d2.0, d1.1 + d2.1);
                let t = self.step(w, mid);
                let f = self.cell(w.add(mid, t), None);
                self.incidences.insert((vcell[k], f));
            }
        }

        // Edge–face incidences: flip the single zero of an edge's sign vector.
        let edges: Vec<(Vec<i8>, usize)> =
            self.index.iter().filter(|(_, &c)| self.cells[c].0 == 1).map(|(s, &c)| (s.clone(), c)).collect();
        for (s, e) in edges {
            let j = s.iter().position(|&x| x == 0).unwrap();
            for side in [-1i8, 1] {
                let mut t = s.clone();
                t[j] = side;
                if let Some(&f) = self.index.get(&t) {
                    self.incidences.insert((e, f));
                }
            }
        }
    }
}

/// Counter-clockwise order of directions starting from the positive x-axis.
fn angle_cmp(a: Dir, b: Dir) -> std::cmp::Ordering {
    let half = |d: Dir| if d.1 > 0 || (d.1 == 0 && d.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// All bitangent classes of a smooth quartic (seven, by the classical count).
pub fn enumerate_bitangent_classes(curve: &TropicalQuartic) -> Vec<BitangentClass> {
    let mut arr = Arrangement::new(critical_lines(curve));
    arr.build();
    let dists: Vec<Vec<u32>> = arr
        .cells
        .par_iter()
        .map(|(_, p, _)| stable_intersection(curve, &TropicalLine::new(*p, curve.convention)).distribution())
        .collect();
    let good = |i: usize| dists[i] == [2, 2] || dists[i] == [4];

    let n = arr.cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &arr.incidences {
        if good(a) && good(b) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in (0..n).filter(|&i| good(i)) {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push((r, Vec::new()));
            groups.len() - 1
        });
        groups[s].1.push(i);
    }
    let mut classes: Vec<BitangentClass> = groups
        .into_iter()
        .map(|(_, members)| {
            let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let mut cells: Vec<OracleCell> = members
                .iter()
                .map(|&i| {
                    let (dim, sample, direction) = arr.cells[i];
                    OracleCell { dim, sample, direction, distribution: dists[i].clone() }
                })
                .collect();
            let incidences: Vec<(usize, usize)> = arr
                .incidences
                .iter()
                .filter_map(|(a, b)| Some((*local.get(a)?, *local.get(b)?)))
                .collect();
            // Deterministic order: by sample point.
            let mut order: Vec<usize> = (0..cells.len()).collect();
            order.sort_by(|&a, &b| (cells[a].dim, cells[a].sample).cmp(&(cells[b].dim, cells[b].sample)));
            let mut pos = vec![0; cells.len()];
            for (new, &old) in order.iter().enumerate() {
                pos[old] = new;
            }
            cells = order.iter().map(|&i| cells[i].clone()).collect();
            let mut inc: Vec<(usize, usize)> = incidences.into_iter().map(|(a, b)| (pos[a], pos[b])).collect();
            inc.sort_unstable();
            BitangentClass { cells, incidences: inc }
        })
        .collect();
    classes.sort_by(|a, b| a.cells[0].sample.cmp(&b.cells[0].sample));
    classes
}

impl BitangentClass {
    pub fn dimension(&self) -> u8 {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    fn maximal(&self) -> Vec<bool> {
        let mut m = vec![true; self.cells.len()];
        for &(a, b) in &self.incidences {
            if self.cells[a].dim < self.cells[b].dim {
                m[a] = false;
            }
        }
        m
    }

    pub fn fingerprint(&self) -> Fingerprint {
        class_fingerprint(self)
    }
}

/// Dimensions of maximal pieces, their number, and the directions of the
/// one-dimensional ones. Collinear edges meeting at a vertex and faces
/// meeting along an edge count as one piece.
pub fn class_fingerprint(b: &BitangentClass) -> Fingerprint {
    let maximal = b.maximal();
    let n = b.cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let union = |p: &mut Vec<usize>, a: usize, c: usize| {
        let (ra, rc) = (find(p, a), find(p, c));
        if ra != rc {
            p[ra] = rc;
        }
    };
    // faces through a shared edge
    let mut faces_of_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut edges_of_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, c) in &b.incidences {
        match (b.cells[a].dim, b.cells[c].dim) {
            (1, 2) if maximal[c] => faces_of_edge.entry(a).or_default().push(c),
            (0, 1) if maximal[c] => edges_of_vertex.entry(a).or_default().push(c),
            _ => {}
        }
    }
    for fs in faces_of_edge.values() {
        for w in fs.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
    }
    for es in edges_of_vertex.values() {
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                if b.cells[es[i]].direction == b.cells[es[j]].direction {
                    union(&mut parent, es[i], es[j]);
                }
            }
        }
    }
    let polygon = boundary_segments(b);
    let mut roots = BTreeSet::new();
    let mut dims = BTreeSet::new();
    let mut dirs = BTreeSet::new();
    for i in (0..n).filter(|&i| maximal[i]) {
        roots.insert(find(&mut parent, i));
        dims.insert(b.cells[i].dim);
        if let Some(d) = b.cells[i].direction {
            dirs.insert(d);
        }
    }
    Fingerprint { dims: dims.into_iter().collect(), pieces: roots.len(), dirs: dirs.into_iter().collect(), polygon }
}

/// Edges of the class bordering exactly one of its faces, merged through
/// vertices where the boundary runs straight on.
fn boundary_segments(b: &BitangentClass) -> Vec<(Dir, usize)> {
    let mut faces_per_edge: HashMap<usize, usize> = HashMap::new();
    for &(a, c) in &b.incidences {
        if b.cells[a].dim == 1 && b.cells[c].dim == 2 {
            *faces_per_edge.entry(a).or_default() += 1;
        }
    }
    let boundary: Vec<usize> = faces_per_edge.iter().filter(|(_, &n)| n == 1).map(|(&e, _)| e).collect();
    let is_boundary: HashMap<usize, usize> = boundary.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..boundary.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut at_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, c) in &b.incidences {
        if b.cells[a].dim == 0 {
            if let Some(&k) = is_boundary.get(&c) {
                at_vertex.entry(a).or_default().push(k);
            }
        }
    }
    for es in at_vertex.values() {
        if let [x, y] = es.as_slice() {
            if b.cells[boundary[*x]].direction == b.cells[boundary[*y]].direction {
                let (rx, ry) = (find(&mut parent, *x), find(&mut parent, *y));
                parent[rx] = ry;
            }
        }
    }
    let mut count: std::collections::BTreeMap<Dir, BTreeSet<usize>> = std::collections::BTreeMap::new();
    for k in 0..boundary.len() {
        let r = find(&mut parent, k);
        count.entry(b.cells[boundary[k]].direction.unwrap()).or_default().insert(r);
    }
    count.into_iter().map(|(d, rs)| (d, rs.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curve_from_coefficients, Convention};
    use crate::subdivision::{fixtures::s_fixture, interior_weights, WeightVector};

    #[test]
    fn max_fixture_has_seven_classes() {
        let c = WeightVector::from_ints(&[-14, -9, -4, -6, 0, -12, -4, 0, -5, -21, -3, -1, 0, -12, -31]).unwrap();
        let curve = curve_from_coefficients(&c, Convention::Max).unwrap();
        let classes = enumerate_bitangent_classes(&curve);
        assert_eq!(classes.len(), 7, "{:#?}", classes.iter().map(|c| c.fingerprint()).collect::<Vec<_>>());
    }

    #[test]
    fn s_fixture_has_seven_classes() {
        let w = interior_weights(&s_fixture()).unwrap();
        let curve = curve_from_coefficients(&w, Convention::Min).unwrap();
        assert_eq!(enumerate_bitangent_classes(&curve).len(), 7);
    }

    #[test]
    fn angular_order() {
        let mut d = vec![(0, -1), (-1, 0), (1, 1), (1, 0), (0, 1), (-1, -1)];
        d.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(d, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]);
    }
}
