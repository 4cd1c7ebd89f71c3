//! The census as a collection of JSON documents.
//!
//! On disk a store is a directory holding `meta.json`, one
//! `documents/<id>.json` per triangulation and `index.ndjson` with one compact
//! line per document. Every field of a document can be recomputed from its
//! cells and the motif catalog; [`audit`] does exactly that.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::census::Census;
use crate::error::{Error, Result};
use crate::motif::{find_all_motifs, is_generic, DeformationMotif, MotifCatalog, MOTIFS_PER_TRIANGULATION};
use crate::pluecker::{sweep_conditions, SignVector};
use crate::rational::Q;
use crate::subdivision::{gkz_vector, minimal_representative, Triangulation};

/// Environment variable naming the store directory.
pub const DB_ENV: &str = "QUARTIC_DB";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticDocument {
    pub id: u32,
    pub maximal_cells: Triangulation,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub gkz_vector: Vec<Q>,
    pub minimal_representative: Triangulation,
    pub is_generic: bool,
    pub deformation_motifs: Vec<DeformationMotif>,
    /// Whether the catalog found all seven motifs.
    pub motifs_complete: bool,
    /// Achievable numbers of real bitangents; absent for non-generic
    /// triangulations and when the motifs are incomplete.
    pub pluecker_numbers: Option<BTreeSet<u32>>,
    pub sign_representatives: Option<BTreeMap<u32, SignVector>>,
}

/// Derives every field from the cells.
pub fn make_document(id: u32, cells: &Triangulation, catalog: &MotifCatalog) -> QuarticDocument {
    let generic = is_generic(cells);
    let motifs = find_all_motifs(cells, catalog);
    let complete = motifs.len() == MOTIFS_PER_TRIANGULATION;
    let sweep = (generic && complete).then(|| {
        let conds: Vec<_> = motifs.iter().map(|m| m.sign_conditions.clone()).collect();
        sweep_conditions(&conds)
    });
    QuarticDocument {
        id,
        maximal_cells: cells.clone(),
        gkz_vector: gkz_vector(cells),
        minimal_representative: minimal_representative(cells),
        is_generic: generic,
        deformation_motifs: motifs,
        motifs_complete: complete,
        pluecker_numbers: sweep.as_ref().map(|s| s.achievable_counts.clone()),
        sign_representatives: sweep.map(|s| s.representatives),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreMeta {
    pub count: usize,
    pub catalog_version: String,
    pub catalog_sha256: String,
    pub catalog_complete: bool,
    /// `"census-order"` or the path of the imported id map.
    pub id_source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collection {
    pub meta: StoreMeta,
    pub documents: Vec<QuarticDocument>,
}

/// An `(id, maximal_cells)` pair of a published collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdMapEntry {
    pub id: u32,
    pub maximal_cells: Triangulation,
}

/// Reads an id map: a JSON array of `{id, maximal_cells}` or one such object per line.
pub fn read_id_map(path: &Path) -> Result<Vec<IdMapEntry>> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(&text)?);
    }
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

/// One document per orbit. Ids follow the census order unless an id map is
/// given, in which case its ids and cells are used and every orbit must be
/// matched exactly once.
pub fn build_collection(census: &Census, catalog: &MotifCatalog, id_map: Option<(&[IdMapEntry], String)>) -> Result<Collection> {
    let (pairs, id_source): (Vec<(u32, Triangulation)>, String) = match id_map {
        None => (
            census.representatives().enumerate().map(|(i, t)| (i as u32 + 1, t.clone())).collect(),
            "census-order".into(),
        ),
        Some((entries, source)) => {
            let reps: BTreeSet<&Triangulation> = census.representatives().collect();
            let mut seen = BTreeSet::new();
            let mut pairs = Vec::new();
            for e in entries {
                let m = minimal_representative(&e.maximal_cells);
                if !reps.contains(&m) {
                    return Err(Error::NotFound(format!("id {} is not a census triangulation", e.id)));
                }
                if !seen.insert(m) {
                    return Err(Error::Parse(format!("id {} repeats an orbit", e.id)));
                }
                pairs.push((e.id, e.maximal_cells.clone()));
            }
            if seen.len() != reps.len() {
                return Err(Error::Parse(format!("id map covers {} of {} orbits", seen.len(), reps.len())));
            }
            pairs.sort_by_key(|p| p.0);
            (pairs, source)
        }
    };
    let documents: Vec<QuarticDocument> =
        pairs.par_iter().map(|(id, t)| make_document(*id, t, catalog)).collect();
    Ok(Collection {
        meta: StoreMeta {
            count: documents.len(),
            catalog_version: catalog.manifest.version.clone(),
            catalog_sha256: catalog.manifest.sha256.clone(),
            catalog_complete: catalog.is_complete(),
            id_source,
        },
        documents,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexLine {
    id: u32,
    minimal_representative: Triangulation,
}

impl Collection {
    pub fn save(&self, dir: &Path) -> Result<()> {
        let docs = dir.join("documents");
        fs::create_dir_all(&docs)?;
        fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&self.meta)?)?;
        let mut index = fs::File::create(dir.join("index.ndjson"))?;
        for d in &self.documents {
            fs::write(docs.join(format!("{}.json", d.id)), serde_json::to_string_pretty(d)?)?;
            let line = IndexLine { id: d.id, minimal_representative: d.minimal_representative.clone() };
            writeln!(index, "{}", serde_json::to_string(&line)?)?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let meta: StoreMeta = serde_json::from_str(&fs::read_to_string(dir.join("meta.json"))?)?;
        let index = BufReader::new(fs::File::open(dir.join("index.ndjson"))?);
        let mut documents = Vec::with_capacity(meta.count);
        for line in index.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: IndexLine = serde_json::from_str(&line)?;
            let path = dir.join("documents").join(format!("{}.json", entry.id));
            documents.push(serde_json::from_str(&fs::read_to_string(path)?)?);
        }
        Ok(Collection { meta, documents })
    }

    pub fn get(&self, id: u32) -> Option<&QuarticDocument> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn find_in_database(&self, t: &Triangulation) -> Result<u32> {
        let m = minimal_representative(t);
        self.documents
            .iter()
            .find(|d| d.minimal_representative == m)
            .map(|d| d.id)
            .ok_or_else(|| Error::NotFound("no document has this minimal representative".into()))
    }

    pub fn query(&self, filter: &str) -> Result<Vec<&QuarticDocument>> {
        let clauses = parse_filter(filter)?;
        let mut out = Vec::new();
        for d in &self.documents {
            let v = serde_json::to_value(d)?;
            if clauses.iter().all(|c| c.matches(&v)) {
                out.push(d);
            }
        }
        Ok(out)
    }
}

/// The store directory from `QUARTIC_DB`, defaulting to `./quartic-db`.
pub fn default_store_path() -> PathBuf {
    std::env::var_os(DB_ENV).filter(|p| !p.is_empty()).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("quartic-db"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Contains,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    path: Vec<String>,
    op: Op,
    value: Value,
}

/// Parses `field=value & other~value`. Fields are dotted paths (arrays are
/// searched element-wise); operators are `=`, `!=`, `~` (contains), `<`,
/// `<=`, `>`, `>=`; values are JSON literals or bare strings.
pub fn parse_filter(filter: &str) -> Result<Vec<Clause>> {
    let mut out = Vec::new();
    for raw in filter.split('&').map(str::trim).filter(|s| !s.is_empty()) {
        let ops = [("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("=", Op::Eq), ("~", Op::Contains), ("<", Op::Lt), (">", Op::Gt)];
        let (pos, len, op) = ops
            .iter()
            .filter_map(|(s, op)| raw.find(s).map(|p| (p, s.len(), *op)))
            .min_by_key(|(p, l, _)| (*p, usize::MAX - l))
            .ok_or_else(|| Error::Filter(format!("no operator in {raw:?}")))?;
        let field = raw[..pos].trim();
        let lit = raw[pos + len..].trim();
        if field.is_empty() || lit.is_empty() || !field.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
            return Err(Error::Filter(format!("malformed clause {raw:?}")));
        }
        let value = serde_json::from_str(lit).unwrap_or_else(|_| Value::String(lit.to_string()));
        if matches!(op, Op::Lt | Op::Le | Op::Gt | Op::Ge) && !value.is_number() {
            return Err(Error::Filter(format!("ordering needs a number in {raw:?}")));
        }
        out.push(Clause { path: field.split('.').map(String::from).collect(), op, value });
    }
    Ok(out)
}

fn resolve<'a>(v: &'a Value, path: &[String], out: &mut Vec<&'a Value>) {
    match (path.first(), v) {
        (None, _) => out.push(v),
        (Some(_), Value::Array(xs)) => xs.iter().for_each(|x| resolve(x, path, out)),
        (Some(k), Value::Object(m)) => {
            if let Some(x) = m.get(k) {
                resolve(x, &path[1..], out)
            }
        }
        _ => {}
    }
}

fn loosely_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.as_f64() == y.as_f64(),
        (Value::String(s), other) | (other, Value::String(s)) if !other.is_string() => s == &other.to_string(),
        _ => a == b,
    }
}

impl Clause {
    fn matches(&self, doc: &Value) -> bool {
        let mut found = Vec::new();
        resolve(doc, &self.path, &mut found);
        let eq = |x: &Value| loosely_equal(x, &self.value);
        let num = |x: &Value| x.as_f64();
        let target = self.value.as_f64();
        match self.op {
            Op::Eq => found.iter().any(|x| eq(x)),
            Op::Ne => !found.iter().any(|x| eq(x)),
            Op::Contains => found.iter().any(|x| match x {
                Value::Array(xs) => xs.iter().any(eq),
                Value::String(s) => self.value.as_str().is_some_and(|t| s.contains(t)),
                other => eq(other),
            }),
            Op::Lt | Op::Le | Op::Gt | Op::Ge => found.iter().filter_map(|x| num(x)).any(|x| {
                let t = target.unwrap();
                match self.op {
                    Op::Lt => x < t,
                    Op::Le => x <= t,
                    Op::Gt => x > t,
                    _ => x >= t,
                }
            }),
        }
    }
}

/// Ids of documents whose stored fields differ from a fresh derivation.
pub fn audit(collection: &Collection, catalog: &MotifCatalog) -> Vec<u32> {
    collection
        .documents
        .par_iter()
        .filter(|d| make_document(d.id, &d.maximal_cells, catalog) != **d)
        .map(|d| d.id)
        .collect()
}

/// Count of documents per value of a boolean field, for summaries.
pub fn generic_split(collection: &Collection) -> (usize, usize) {
    let g = collection.documents.iter().filter(|d| d.is_generic).count();
    (g, collection.documents.len() - g)
}

/// Documents keyed by minimal representative.
pub fn by_representative(collection: &Collection) -> HashMap<&Triangulation, u32> {
    collection.documents.iter().map(|d| (&d.minimal_representative, d.id)).collect()
}
