//! All regular unimodular triangulations of 4Δ₂ up to S₃ symmetry.
//!
//! Breadth-first search over bistellar (2,2) flips, starting from a regular
//! staircase triangulation. The regular triangulations are the vertices of the
//! secondary polytope, and its edges are flips, so the search reaches every
//! orbit. Orbits are keyed by their minimal representative and each level of
//! the search is processed in parallel.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{double_area, sort_triangle, Triangle};
use crate::subdivision::{is_regular, minimal_representative, orbit_size, staircase, Triangulation};

/// The triangulations obtained by exchanging the diagonal of a convex
/// quadrilateral formed by two adjacent triangles.
pub fn flip_neighbors(t: &Triangulation) -> Vec<Triangulation> {
    let mut out = Vec::new();
    for ie in t.interior_edges() {
        let [b, c] = ie.edge;
        let [a, d] = ie.apexes;
        let (ai, bi, ci, di) = (a as usize, b as usize, c as usize, d as usize);
        // b and c strictly on opposite sides of the new diagonal a–d
        let sb = double_area(ai, di, bi).signum();
        let sc = double_area(ai, di, ci).signum();
        if sb == 0 || sc == 0 || sb == sc {
            continue;
        }
        let old: [Triangle; 2] = [sort_triangle([a, b, c]), sort_triangle([b, c, d])];
        let mut cells: Vec<Triangle> = t.cells().iter().filter(|x| !old.contains(x)).copied().collect();
        cells.push(sort_triangle([a, d, b]));
        cells.push(sort_triangle([a, d, c]));
        if let Ok(n) = Triangulation::new(cells) {
            out.push(n);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub representative: Triangulation,
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Orbit representatives in increasing lexicographic order.
    pub entries: Vec<CensusEntry>,
    /// Number of distinct non-regular orbits met on the way (flip targets
    /// rejected by the regularity test).
    pub non_regular_seen: usize,
}

impl Census {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of labeled regular unimodular triangulations.
    pub fn labeled_count(&self) -> usize {
        self.entries.iter().map(|e| e.orbit_size).sum()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Triangulation> {
        self.entries.iter().map(|e| &e.representative)
    }
}

pub fn enumerate_census() -> Census {
    let seed = minimal_representative(&staircase());
    let mut regular: HashSet<Triangulation> = HashSet::from([seed.clone()]);
    let mut verdict: HashMap<Triangulation, bool> = HashMap::new();
    verdict.insert(seed.clone(), true);
    let mut frontier = vec![seed];
    while !frontier.is_empty() {
        let candidates: HashSet<Triangulation> = frontier
            .par_iter()
            .flat_map_iter(|t| flip_neighbors(t).into_iter().map(|n| minimal_representative(&n)))
            .collect();
        let fresh: Vec<Triangulation> = candidates.into_iter().filter(|c| !verdict.contains_key(c)).collect();
        let decided: Vec<(Triangulation, bool)> = fresh.into_par_iter().map(|c| {
            let r = is_regular(&c);
            (c, r)
        }).collect();
        frontier.clear();
        for (c, r) in decided {
            verdict.insert(c.clone(), r);
            if r && regular.insert(c.clone()) {
                frontier.push(c);
            }
        }
        frontier.sort();
    }
    let mut reps: Vec<Triangulation> = regular.into_iter().collect();
    reps.sort();
    let entries = reps
        .into_iter()
        .map(|r| CensusEntry { orbit_size: orbit_size(&r), representative: r })
        .collect();
    Census { entries, non_regular_seen: verdict.values().filter(|r| !**r).count() }
}
