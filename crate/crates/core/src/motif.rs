//! Deformation motifs: the catalog, their occurrences in a triangulation, the
//! S₃ transport of sign conditions and hyperplanes, shape naming and
//! genericity.
//!
//! The catalog describes every deformation class in identity position. It is
//! data, not code: the embedded file only knows the classes whose description
//! is available in textual form, and a complete catalog can be supplied at run
//! time (see [`MotifCatalog::load`]). Consumers that need all seven motifs of a
//! triangulation use [`all_motifs`], which refuses to answer from an
//! incomplete catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::curve::Convention;
use crate::error::{Error, Result};
use crate::lattice::{action_table, coords, Triangle, NUM_POINTS};
use crate::rational::{dot, Q};
use crate::subdivision::{circuit_row, secondary_cone, Triangulation, WeightVector};

/// Number of deformation classes of every smooth quartic.
pub const MOTIFS_PER_TRIANGULATION: usize = 7;

/// Environment variable naming a catalog file that replaces the embedded one.
pub const CATALOG_ENV: &str = "QUARTIC_CATALOG";

/// A product of coefficient signs, with an optional leading `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignedSet {
    pub negative: bool,
    pub indices: Vec<u8>,
}

impl SignedSet {
    pub fn is_empty(&self) -> bool {
        !self.negative && self.indices.is_empty()
    }

    /// `(−1)^negative · Π s_i > 0`; the empty set holds vacuously.
    pub fn holds(&self, s: &[i8]) -> bool {
        let neg = self.indices.iter().filter(|&&i| s[i as usize] < 0).count() % 2 == 1;
        neg == self.negative
    }

    pub fn transported(&self, sigma: usize) -> SignedSet {
        let p = action_table().get(sigma);
        let mut indices: Vec<u8> = self.indices.iter().map(|&i| p.apply(i as usize) as u8).collect();
        indices.sort_unstable();
        SignedSet { negative: self.negative, indices }
    }

    fn tokens(&self) -> Vec<i64> {
        let mut t: Vec<i64> = if self.negative { vec![-1] } else { vec![] };
        t.extend(self.indices.iter().map(|&i| i as i64));
        t
    }

    fn from_tokens(t: &[i64]) -> Result<Self> {
        let mut out = SignedSet::default();
        for &x in t {
            match x {
                -1 if !out.negative => out.negative = true,
                -1 => return Err(Error::Catalog("more than one -1 token in a sign set".into())),
                i if (0..NUM_POINTS as i64).contains(&i) => out.indices.push(i as u8),
                i => return Err(Error::Catalog(format!("sign index {i} out of range"))),
            }
        }
        out.indices.sort_unstable();
        Ok(out)
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tokens().iter().map(|t| t.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Up to two sign products that must both be positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignCondition {
    pub first: SignedSet,
    pub second: SignedSet,
}

impl SignCondition {
    pub fn holds(&self, s: &[i8]) -> bool {
        self.first.holds(s) && self.second.holds(s)
    }

    pub fn transported(&self, sigma: usize) -> SignCondition {
        SignCondition { first: self.first.transported(sigma), second: self.second.transported(sigma) }
    }

    /// Both products are invariant under a global sign flip.
    pub fn has_even_sets(&self) -> bool {
        self.first.indices.len().is_multiple_of(2) && self.second.indices.len().is_multiple_of(2)
    }

    pub fn from_tokens(first: &[i64], second: &[i64]) -> Result<Self> {
        Ok(SignCondition { first: SignedSet::from_tokens(first)?, second: SignedSet::from_tokens(second)? })
    }
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.first, self.second)
    }
}

impl Serialize for SignCondition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.first.tokens(), self.second.tokens()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignCondition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Vec<i64>>::deserialize(d)?;
        let empty = Vec::new();
        if v.len() > 2 {
            return Err(serde::de::Error::custom("a sign condition has at most two sets"));
        }
        let first = v.first().unwrap_or(&empty);
        let second = v.get(1).unwrap_or(&empty);
        SignCondition::from_tokens(first, second).map_err(serde::de::Error::custom)
    }
}

/// One deformation class in identity position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub triangles: Vec<Triangle>,
    pub sign_condition: SignCondition,
    #[serde(with = "crate::rational::serde_q_rows")]
    pub hyperplanes: Vec<Vec<Q>>,
    /// Sign pattern of the hyperplane rows (one of `+`, `-`, `0` per row) →
    /// shape letter.
    #[serde(default)]
    pub shapes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogManifest {
    pub version: String,
    pub sha256: String,
    /// Whether the catalog lists every deformation class.
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotifCatalog {
    pub entries: BTreeMap<String, CatalogEntry>,
    pub manifest: CatalogManifest,
    /// Where the catalog came from (`None` for the embedded copy).
    pub source: Option<PathBuf>,
}

const EMBEDDED_CATALOG: &str = include_str!("../data/motifs.json");
const EMBEDDED_MANIFEST: &str = include_str!("../data/motifs.manifest.json");

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl MotifCatalog {
    pub fn embedded() -> Self {
        Self::from_parts(EMBEDDED_CATALOG, EMBEDDED_MANIFEST, None).expect("embedded catalog is valid")
    }

    /// Reads a catalog file and the manifest next to it
    /// (`<name>.manifest.json`, replacing a trailing `.json`).
    pub fn load(path: &Path) -> Result<Self> {
        let data = std::fs::read_to_string(path)?;
        let manifest_path = manifest_path(path);
        let manifest = std::fs::read_to_string(&manifest_path)
            .map_err(|e| Error::Catalog(format!("cannot read manifest {}: {e}", manifest_path.display())))?;
        Self::from_parts(&data, &manifest, Some(path.to_path_buf()))
    }

    /// The catalog named by `QUARTIC_CATALOG`, or the embedded one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::embedded()),
        }
    }

    pub fn from_parts(data: &str, manifest: &str, source: Option<PathBuf>) -> Result<Self> {
        let manifest: CatalogManifest = serde_json::from_str(manifest)?;
        let digest = sha256_hex(data.as_bytes());
        if !digest.eq_ignore_ascii_case(&manifest.sha256) {
            return Err(Error::Catalog(format!("checksum mismatch: manifest {}, data {digest}", manifest.sha256)));
        }
        let entries: BTreeMap<String, CatalogEntry> = serde_json::from_str(data)?;
        let cat = MotifCatalog { entries, manifest, source };
        cat.validate()?;
        Ok(cat)
    }

    pub fn is_complete(&self) -> bool {
        self.manifest.complete
    }

    pub fn get(&self, type_name: &str) -> Option<&CatalogEntry> {
        self.entries.get(type_name)
    }

    /// Whether every condition is invariant under a global sign flip.
    pub fn all_conditions_even(&self) -> bool {
        self.entries.values().all(|e| e.sign_condition.has_even_sets())
    }

    fn validate(&self) -> Result<()> {
        for (name, e) in &self.entries {
            let bad = |m: String| Err(Error::Catalog(format!("{name}: {m}")));
            if e.triangles.is_empty() {
                return bad("no triangles".into());
            }
            for t in &e.triangles {
                if t.iter().any(|&i| i as usize >= NUM_POINTS) || !(t[0] < t[1] && t[1] < t[2]) {
                    return bad(format!("malformed triangle {t:?}"));
                }
            }
            for r in &e.hyperplanes {
                if r.len() != NUM_POINTS {
                    return bad(format!("hyperplane row with {} entries", r.len()));
                }
            }
            for pattern in e.shapes.keys() {
                if pattern.chars().count() != e.hyperplanes.len() || !pattern.chars().all(|c| "+-0".contains(c)) {
                    return bad(format!("shape pattern {pattern:?} does not match {} rows", e.hyperplanes.len()));
                }
            }
        }
        let dlo = self.get("DLO").ok_or_else(|| Error::Catalog("the DLO entry is missing".into()))?;
        let m = transport("DLO", dlo, 1);
        let expected_triangles: Vec<Triangle> = vec![[1, 2, 4], [2, 4, 12], [4, 7, 12]];
        let expected_condition = SignCondition::from_tokens(&[-1, 1, 2, 4, 12], &[])?;
        let expected_row: Vec<Q> =
            [0, 1, -1, 0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0, 0].iter().map(|&x| Q::from_integer(x)).collect();
        if m.triangles != expected_triangles || m.sign_conditions != expected_condition || m.hyperplanes != [expected_row]
        {
            return Err(Error::Catalog("the DLO entry does not reproduce its reference position".into()));
        }
        Ok(())
    }
}

fn manifest_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".json").unwrap_or(&name);
    path.with_file_name(format!("{stem}.manifest.json"))
}

/// A deformation class placed inside a triangulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationMotif {
    pub triangles: Vec<Triangle>,
    #[serde(rename = "type")]
    pub type_name: String,
    /// Index into the action table.
    pub symmetry: usize,
    pub sign_conditions: SignCondition,
    #[serde(with = "crate::rational::serde_q_rows")]
    pub hyperplanes: Vec<Vec<Q>>,
}

/// The catalog entry moved by the `sigma`-th group element.
pub fn transport(type_name: &str, entry: &CatalogEntry, sigma: usize) -> DeformationMotif {
    let p = action_table().get(sigma);
    DeformationMotif {
        triangles: p.apply_triangles(&entry.triangles),
        type_name: type_name.to_string(),
        symmetry: sigma,
        sign_conditions: transported_sign_conditions(&entry.sign_condition, sigma),
        hyperplanes: transported_hyperplanes(&entry.hyperplanes, sigma),
    }
}

pub fn transported_sign_conditions(c: &SignCondition, sigma: usize) -> SignCondition {
    c.transported(sigma)
}

/// Coordinate `i` of each row moves to position `σ(i)`.
pub fn transported_hyperplanes(rows: &[Vec<Q>], sigma: usize) -> Vec<Vec<Q>> {
    let p = action_table().get(sigma);
    rows.iter().map(|r| p.permute_coordinates(r)).collect()
}

/// Every placement of a catalog motif inside `t`. A motif stabilized by some
/// group elements is reported once, with the smallest symmetry index.
pub fn find_all_motifs(t: &Triangulation, catalog: &MotifCatalog) -> Vec<DeformationMotif> {
    let mut out: Vec<DeformationMotif> = Vec::new();
    for (name, entry) in &catalog.entries {
        for sigma in 0..6 {
            let m = transport(name, entry, sigma);
            if m.triangles.iter().all(|x| t.contains_triangle(x))
                && !out.iter().any(|o| o.type_name == m.type_name && o.triangles == m.triangles)
            {
                out.push(m);
            }
        }
    }
    out
}

/// The seven motifs of `t`, or an error if the catalog does not find exactly seven.
pub fn all_motifs(t: &Triangulation, catalog: &MotifCatalog) -> Result<Vec<DeformationMotif>> {
    let ms = find_all_motifs(t, catalog);
    if ms.len() != MOTIFS_PER_TRIANGULATION {
        return Err(Error::MotifCount { found: ms.len() });
    }
    Ok(ms)
}

/// Sign of each hyperplane row at `w`, as a string over `+ - 0`.
pub fn sign_pattern(rows: &[Vec<Q>], w: &[Q]) -> String {
    rows.iter()
        .map(|r| {
            let v = dot(r, w);
            if v.is_zero() {
                '0'
            } else if v.is_positive() {
                '+'
            } else {
                '-'
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeOutcome {
    /// The catalog names the shape for this sign pattern.
    Named { letter: String, pattern: String },
    /// The catalog has no name for this sign pattern (e.g. a wall).
    Unnamed { pattern: String },
    /// Class (C) on a non-generic triangulation.
    Unknown,
}

impl fmt::Display for ShapeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeOutcome::Named { letter, .. } => f.write_str(letter),
            ShapeOutcome::Unnamed { pattern } => write!(f, "?[{pattern}]"),
            ShapeOutcome::Unknown => f.write_str("?"),
        }
    }
}

/// Min-convention weights of a coefficient vector.
pub fn min_weights(c: &WeightVector, convention: Convention) -> WeightVector {
    match convention {
        Convention::Min => c.clone(),
        Convention::Max => c.negated(),
    }
}

/// Shape of every deformation class of the quartic with coefficients `c`.
pub fn bitangent_shapes(c: &WeightVector, convention: Convention, catalog: &MotifCatalog) -> Result<Vec<ShapeOutcome>> {
    let w = min_weights(c, convention);
    let t = crate::subdivision::subdivision_from_weights(&w)
        .to_triangulation()
        .ok_or_else(|| Error::NotSmooth("dual subdivision is not a unimodular triangulation".into()))?;
    let generic = is_generic(&t);
    let motifs = all_motifs(&t, catalog)?;
    Ok(motifs.iter().map(|m| motif_shape(m, &w, generic, catalog)).collect())
}

/// Shape of one motif's class at min-convention weights `w`.
pub fn motif_shape(m: &DeformationMotif, w: &WeightVector, generic: bool, catalog: &MotifCatalog) -> ShapeOutcome {
    if !generic && m.type_name == "C" {
        return ShapeOutcome::Unknown;
    }
    let pattern = sign_pattern(&m.hyperplanes, w.entries());
    // The naming table is written for the identity position.
    match catalog.get(&m.type_name).and_then(|e| e.shapes.get(&pattern)) {
        Some(letter) => ShapeOutcome::Named { letter: letter.clone(), pattern },
        None => ShapeOutcome::Unnamed { pattern },
    }
}

/// Curve vertices that can violate genericity: upright unit triangles
/// `{p, p+e1, p+e2}` whose three edges are interior. Their dual vertices have
/// three bounded edges, and the edge lengths are the circuit values of the
/// three edges. Returns the three length rows per vertex.
pub fn tripod_length_rows(t: &Triangulation) -> Vec<[Vec<Q>; 3]> {
    let ies = t.interior_edges();
    let row = |a: u8, b: u8| {
        let e = [a.min(b), a.max(b)];
        ies.iter().find(|ie| ie.edge == e).map(circuit_row)
    };
    let mut out = Vec::new();
    for c in t.cells() {
        let pts = c.map(|i| coords(i as usize));
        let minx = pts.iter().map(|p| p.0).min().unwrap();
        let miny = pts.iter().map(|p| p.1).min().unwrap();
        if !pts.contains(&(minx, miny)) {
            continue;
        }
        if let (Some(a), Some(b), Some(d)) = (row(c[0], c[1]), row(c[0], c[2]), row(c[1], c[2])) {
            out.push([a, b, d]);
        }
    }
    out
}

/// Whether the shortest edge at every tripod vertex is unique for `w`.
pub fn is_generic_point(t: &Triangulation, w: &WeightVector) -> bool {
    tripod_length_rows(t).iter().all(|rows| {
        let ls: Vec<Q> = rows.iter().map(|r| dot(r, w.entries())).collect();
        let m = *ls.iter().min().unwrap();
        ls.iter().filter(|&&l| l == m).count() == 1
    })
}

/// Whether some point of the open secondary cone satisfies the genericity
/// condition. Two tripod lengths that agree as linear forms can never be
/// separated, so such a vertex forces the third length to be the strictly
/// shortest; the triangulation is generic iff these strict inequalities are
/// jointly feasible inside the cone.
pub fn is_generic(t: &Triangulation) -> bool {
    let mut extra: Vec<Vec<Q>> = Vec::new();
    for rows in tripod_length_rows(t) {
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            if rows[i] == rows[j] {
                extra.push(rows[i].iter().zip(&rows[k]).map(|(a, b)| a - b).collect());
            }
        }
    }
    if extra.is_empty() {
        return true;
    }
    secondary_cone(t).cone().with_inequalities(extra).strict_point().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::fixtures::{ds_fixture, s_fixture};

    #[test]
    fn embedded_catalog_loads_and_is_marked_incomplete() {
        let c = MotifCatalog::embedded();
        assert!(!c.is_complete());
        assert!(c.all_conditions_even());
    }

    #[test]
    fn dlo_on_s_fixture() {
        let ms = find_all_motifs(&s_fixture(), &MotifCatalog::embedded());
        let dlo: Vec<_> = ms.iter().filter(|m| m.type_name == "DLO").collect();
        assert_eq!(dlo.len(), 1);
        assert_eq!(dlo[0].symmetry, 1);
        assert_eq!(dlo[0].triangles, vec![[1, 2, 4], [2, 4, 12], [4, 7, 12]]);
        assert_eq!(dlo[0].sign_conditions.to_string(), "[{-1 1 2 4 12},{}]");
    }

    #[test]
    fn incomplete_catalog_refuses_to_count() {
        assert!(matches!(all_motifs(&s_fixture(), &MotifCatalog::embedded()), Err(Error::MotifCount { .. })));
    }

    #[test]
    fn sign_condition_round_trip() {
        let c = SignCondition::from_tokens(&[-1, 2, 8, 12, 13], &[10, 12]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, "[[-1,2,8,12,13],[10,12]]");
        assert_eq!(serde_json::from_str::<SignCondition>(&s).unwrap(), c);
        assert!(SignCondition::from_tokens(&[-1, -1, 2], &[]).is_err());
    }

    #[test]
    fn checksum_is_enforced() {
        let bad = EMBEDDED_MANIFEST.replace("1fb2", "0000");
        assert!(matches!(MotifCatalog::from_parts(EMBEDDED_CATALOG, &bad, None), Err(Error::Catalog(_))));
    }

    #[test]
    fn fixtures_are_generic() {
        assert!(is_generic(&s_fixture()));
        assert!(is_generic(&ds_fixture()));
    }
}
