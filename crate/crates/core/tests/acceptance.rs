//! Acceptance report: one PASS, FAIL or SKIP line per criterion.
//!
//! Run with `cargo test -p quartic-core --test acceptance`. Criteria that
//! depend on data this crate does not ship report why they fail or skip; the
//! process exits nonzero only when `QUARTIC_ACCEPTANCE_STRICT` is set, so the
//! report can be read as part of the normal test run.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartic::census::{enumerate_census, Census};
use quartic::chamber::chamber_decomposition;
use quartic::curve::{curve_from_coefficients, stable_intersection, Convention, Point2, TropicalLine, TropicalQuartic};
use quartic::db::{build_collection, read_id_map};
use quartic::motif::{all_motifs, bitangent_shapes, find_all_motifs, is_generic, MotifCatalog, SignCondition};
use quartic::oracle::enumerate_bitangent_classes;
use quartic::pluecker::{give_pluecker, pluecker_sweep, SignVector};
use quartic::rational::{dot, q, qf};
use quartic::subdivision::{interior_weights, secondary_cone, subdivision_from_weights, Triangulation, WeightVector};
use quartic::Q;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn report(id: &str, name: &str, v: Verdict, failures: &mut usize) {
    let (tag, msg) = match v {
        Verdict::Pass(m) => ("PASS", m),
        Verdict::Fail(m) => {
            *failures += 1;
            ("FAIL", m)
        }
        Verdict::Skip(m) => ("SKIP", m),
    };
    println!("{tag} {id:<3} {name}: {msg}");
}

fn cells(s: &str) -> Triangulation {
    Triangulation::parse_json(s).expect("fixture cells")
}

const LOOKUP_CELLS: &str = "[[6,10,11],[3,6,11],[3,7,11],[7,11,12],[1,3,7],[4,8,12],[8,12,13],[0,4,8],[5,9,13],[9,13,14],[5,8,13],[2,5,8],[4,7,12],[0,4,7],[0,2,8],[0,1,7]]";
const S_CELLS: &str = "[[0,1,2],[1,2,4],[2,4,12],[4,7,12],[2,8,12],[2,8,13],[8,12,13],[2,5,13],[5,9,13],[9,13,14],[7,11,12],[7,10,11],[4,7,10],[4,6,10],[3,4,6],[1,3,4]]";
const DS_CELLS: &str = "[[0,1,2],[1,2,3],[2,3,4],[5,8,9],[9,13,14],[8,11,12],[3,7,8],[6,10,11],[3,6,11],[3,7,11],[8,12,13],[3,4,8],[2,5,8],[8,9,13],[7,8,11],[2,4,8]]";
const PRINTED_VECTOR: &str = "1,1,-1,1,-1,-1,1,1,1,-1,-1,1,1,1,-1";
const C_MAX: [i128; 15] = [-14, -9, -4, -6, 0, -12, -4, 0, -5, -21, -3, -1, 0, -12, -31];

fn s_triangulation() -> Triangulation {
    cells(S_CELLS)
}

fn printed_conditions() -> Vec<SignCondition> {
    let c = |a: &[i64], b: &[i64]| SignCondition::from_tokens(a, b).unwrap();
    vec![
        c(&[-1, 2, 8, 12, 13], &[-1, 1, 2, 4, 12]),
        c(&[-1, 2, 8, 12, 13], &[10, 12]),
        c(&[-1, 2, 8, 12, 13], &[10, 12]),
        c(&[-1, 1, 2, 4, 12], &[]),
        c(&[10, 12], &[]),
        c(&[10, 12], &[]),
        c(&[-1, 1, 2, 4, 10], &[]),
    ]
}

fn criterion_1(cat: &MotifCatalog) -> Verdict {
    let v = SignVector::parse(PRINTED_VECTOR).unwrap();
    let start = Instant::now();
    let r = give_pluecker(&s_triangulation(), &v, cat);
    let dt = start.elapsed();
    match r {
        Ok(4) if dt.as_millis() < 1 => Verdict::Pass(format!("4 in {dt:?}")),
        Ok(n) => Verdict::Fail(format!("got {n} in {dt:?}")),
        Err(e) => Verdict::Fail(format!("{e}")),
    }
}

fn criterion_2(cat: &MotifCatalog) -> Verdict {
    let mut want: Vec<String> = printed_conditions().iter().map(|c| c.to_string()).collect();
    want.sort();
    match all_motifs(&s_triangulation(), cat) {
        Ok(ms) => {
            let mut got: Vec<String> = ms.iter().map(|m| m.sign_conditions.to_string()).collect();
            got.sort();
            if got == want {
                Verdict::Pass("7 pairs match the listing".into())
            } else {
                Verdict::Fail(format!("got {got:?}"))
            }
        }
        Err(e) => {
            let found = find_all_motifs(&s_triangulation(), cat);
            let listed = found.iter().filter(|m| want.contains(&m.sign_conditions.to_string())).count();
            Verdict::Fail(format!("{e}; {listed} of the {} found conditions are in the listing", found.len()))
        }
    }
}

fn criterion_3(cat: &MotifCatalog) -> Verdict {
    let row: Vec<Q> = [0, 1, -1, 0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0, 0].iter().map(|&x| q(x)).collect();
    let cond = SignCondition::from_tokens(&[-1, 1, 2, 4, 12], &[]).unwrap();
    let found = find_all_motifs(&s_triangulation(), cat);
    match found.iter().find(|m| m.type_name == "DLO" && m.symmetry == 1) {
        Some(m) if m.sign_conditions == cond && m.hyperplanes == vec![row] => {
            Verdict::Pass(format!("DLO at symmetry 1 on {:?}", m.triangles))
        }
        Some(m) => Verdict::Fail(format!("DLO at symmetry 1 has {} and {} rows", m.sign_conditions, m.hyperplanes.len())),
        None => Verdict::Fail("no DLO motif at symmetry 1".into()),
    }
}

fn criterion_4(census: &Census, cat: &MotifCatalog) -> Verdict {
    let start = Instant::now();
    let counts: Vec<usize> = census.representatives().map(|t| find_all_motifs(t, cat).len()).collect();
    let dt = start.elapsed();
    let seven = counts.iter().filter(|&&c| c == 7).count();
    let hist: BTreeSet<usize> = counts.iter().copied().collect();
    let msg = format!("{seven} of {} representatives have 7 motifs (counts seen {hist:?}) in {dt:?}", counts.len());
    if seven == counts.len() && dt.as_secs() < 10 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_5(census: &Census, dt: std::time::Duration) -> Verdict {
    let generic = census.representatives().filter(|t| is_generic(t)).count();
    let msg = format!("{} orbits, {generic} generic, {} non-generic ({} labeled) in {dt:?}", census.len(), census.len() - generic, census.labeled_count());
    if census.len() == 1278 && generic == 1270 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_6(census: &Census, cat: &MotifCatalog) -> Verdict {
    let allowed = BTreeSet::from([4, 8, 16, 28]);
    let start = Instant::now();
    let mut union = BTreeSet::new();
    let mut errors = 0usize;
    let mut first_error = None;
    for t in census.representatives().filter(|t| is_generic(t)) {
        match pluecker_sweep(t, cat) {
            Ok(r) => {
                if !r.achievable_counts.is_subset(&allowed) {
                    return Verdict::Fail(format!("counts {:?} outside {{4,8,16,28}}", r.achievable_counts));
                }
                union.extend(r.achievable_counts);
            }
            Err(e) => {
                errors += 1;
                first_error.get_or_insert(e.to_string());
            }
        }
    }
    let dt = start.elapsed();
    if errors > 0 {
        return Verdict::Fail(format!("{errors} generic representatives could not be swept ({})", first_error.unwrap()));
    }
    if union == allowed && dt.as_secs() < 300 {
        Verdict::Pass(format!("union {union:?} in {dt:?}"))
    } else {
        Verdict::Fail(format!("union {union:?} in {dt:?}"))
    }
}

/// A smooth curve with min-convention weights in the open cone of `t`.
fn random_point_in_cone(t: &Triangulation, rng: &mut ChaCha8Rng) -> WeightVector {
    let w0 = interior_weights(t).unwrap();
    let sc = secondary_cone(t);
    let mut k = 4i128;
    loop {
        let w: Vec<Q> = w0.entries().iter().map(|x| x * q(k) + qf(rng.gen_range(-12..=12), 4)).collect();
        let w = WeightVector::new(w).unwrap();
        if sc.contains_strictly(&w) {
            return w;
        }
        k *= 2;
    }
}

fn random_curves(census: &Census, n: usize, rng: &mut ChaCha8Rng) -> Vec<(Triangulation, TropicalQuartic)> {
    (0..n)
        .map(|_| {
            let t = census.entries[rng.gen_range(0..census.len())].representative.clone();
            let w = random_point_in_cone(&t, rng);
            let curve = curve_from_coefficients(&w, Convention::Min).expect("interior point is smooth");
            (t, curve)
        })
        .collect()
}

fn criterion_7(census: &Census, rng: &mut ChaCha8Rng) -> Verdict {
    let curves = random_curves(census, 100, rng);
    let mut worst = std::time::Duration::ZERO;
    let mut bad = Vec::new();
    for (i, (t, c)) in curves.iter().enumerate() {
        assert_eq!(&c.triangulation, t);
        let start = Instant::now();
        let n = enumerate_bitangent_classes(c).len();
        worst = worst.max(start.elapsed());
        if n != 7 {
            bad.push((i, n));
        }
    }
    let msg = format!("{} of 100 curves have 7 classes, slowest {worst:?}", 100 - bad.len());
    if bad.is_empty() && worst.as_secs() < 10 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(format!("{msg}; deviations {bad:?}"))
    }
}

fn random_line(c: &TropicalQuartic, rng: &mut ChaCha8Rng) -> TropicalLine {
    let (_, base) = &c.vertices[rng.gen_range(0..c.vertices.len())];
    let p = match rng.gen_range(0..4) {
        // exactly on a curve vertex
        0 => *base,
        // on a curve edge or ray
        1 => {
            let e = &c.edges[rng.gen_range(0..c.edges.len())];
            let t = match e.lattice_length() {
                Some(l) => l * qf(rng.gen_range(0..=4), 4),
                None => qf(rng.gen_range(0..=12), 2),
            };
            e.start.add(e.direction, t)
        }
        // integral offsets hit many degenerate positions
        2 => base.add((1, 0), q(rng.gen_range(-4..=4))).add((0, 1), q(rng.gen_range(-4..=4))),
        _ => Point2::new(base.x + qf(rng.gen_range(-40..=40), 7), base.y + qf(rng.gen_range(-40..=40), 3)),
    };
    TropicalLine::new(p, c.convention)
}

fn criterion_8(census: &Census, rng: &mut ChaCha8Rng) -> Verdict {
    let curves = random_curves(census, 50, rng);
    let mut bad = 0;
    let mut pairs = 0;
    for (_, c) in &curves {
        for _ in 0..20 {
            let l = random_line(c, rng);
            pairs += 1;
            if stable_intersection(c, &l).total() != 4 {
                bad += 1;
            }
        }
    }
    if bad == 0 {
        Verdict::Pass(format!("total multiplicity 4 on {pairs} pairs"))
    } else {
        Verdict::Fail(format!("{bad} of {pairs} pairs violate total multiplicity 4"))
    }
}

fn criterion_9a(cat: &MotifCatalog) -> Verdict {
    let ds = cells(DS_CELLS);
    match all_motifs(&ds, cat) {
        Ok(ms) if ms[6].type_name == "W...HH+(xz)" => {
            let cd = chamber_decomposition(&secondary_cone(&ds), &ms[6].hyperplanes);
            match cd.chambers.first() {
                Some(c) if c.dimension == 15 => Verdict::Pass(format!("first of {} chambers has dimension 15", cd.chambers.len())),
                Some(c) => Verdict::Fail(format!("first chamber has dimension {}", c.dimension)),
                None => Verdict::Fail("no chambers".into()),
            }
        }
        Ok(ms) => Verdict::Fail(format!("motif 6 has type {}", ms[6].type_name)),
        Err(e) => Verdict::Fail(format!("hyperplanes of motif 6 unavailable: {e}")),
    }
}

fn criterion_9b() -> Verdict {
    let lambdas = [
        "0,5,5,9,8,5,6.5,9,9,4,2,7,8,7,1",
        "0,5,5,9,8,5,6,9,9,4,2,7,8,7,1",
        "0,5,5,9,8,5,5.5,9,9,4,1,7,8,7,1",
    ];
    let mut row = vec![q(0); 15];
    row[8] = q(1);
    row[4] = q(-1);
    row[11] = q(-1);
    row[6] = q(1);
    let ws: Vec<WeightVector> = lambdas.iter().map(|s| WeightVector::parse(s).unwrap()).collect();
    let vals: Vec<Q> = ws.iter().map(|w| dot(&row, w.entries())).collect();
    // The weights are given for the max convention.
    let ts: Vec<Option<Triangulation>> = ws.iter().map(|w| subdivision_from_weights(&w.negated()).to_triangulation()).collect();
    let same = ts[0].is_some() && ts[0] == ts[1] && ts[1] == ts[2];
    let msg = format!("wall row values {}, {}, {}; one common triangulation: {same}", vals[0], vals[1], vals[2]);
    if vals[1] == q(0) && vals[0] * vals[2] < q(0) && same {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_10(census: &Census, cat: &MotifCatalog, rng: &mut ChaCha8Rng) -> Verdict {
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 && attempts < 200 {
        attempts += 1;
        let t = &census.entries[rng.gen_range(0..census.len())].representative;
        let ms = match all_motifs(t, cat) {
            Ok(ms) => ms,
            Err(e) => return Verdict::Fail(format!("shape outputs unavailable: {e}")),
        };
        let m = &ms[rng.gen_range(0..ms.len())];
        let cd = chamber_decomposition(&secondary_cone(t), &m.hyperplanes);
        for c in &cd.chambers {
            let a = &c.interior_point;
            let b = random_point_in_chamber(c.cone.as_ref().unwrap(), a, rng);
            let sa = bitangent_shapes(a, Convention::Min, cat);
            let sb = bitangent_shapes(&b, Convention::Min, cat);
            match (sa, sb) {
                (Ok(x), Ok(y)) if x == y => {}
                (x, y) => return Verdict::Fail(format!("chamber {} gives {x:?} and {y:?}", c.pattern)),
            }
        }
        checked += 1;
    }
    Verdict::Pass(format!("{checked} (triangulation, motif) pairs constant on every chamber"))
}

fn random_point_in_chamber(cone: &quartic::cone::Cone, a: &WeightVector, rng: &mut ChaCha8Rng) -> WeightVector {
    let mut scale = 1i128;
    loop {
        let w: Vec<Q> = a.entries().iter().map(|x| x * q(8 * scale) + qf(rng.gen_range(-3..=3), 2)).collect();
        if cone.contains_strictly(&w) {
            return WeightVector::new(w).unwrap();
        }
        scale *= 2;
    }
}

fn criterion_11(census: &Census, cat: &MotifCatalog) -> Verdict {
    let id_map = std::env::var_os("QUARTIC_ID_MAP");
    if !cat.is_complete() || id_map.is_none() {
        return Verdict::Skip(format!(
            "needs the complete shape catalog (complete: {}) and QUARTIC_ID_MAP (set: {})",
            cat.is_complete(),
            id_map.is_some()
        ));
    }
    let c = WeightVector::from_ints(&C_MAX).unwrap();
    let shapes = |w: &WeightVector, conv| -> String {
        bitangent_shapes(w, conv, cat).map(|s| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_else(|e| e.to_string())
    };
    let got_c = shapes(&c, Convention::Max);
    let ds = cells(DS_CELLS);
    let got_np = all_motifs(&ds, cat)
        .map(|ms| {
            let cd = chamber_decomposition(&secondary_cone(&ds), &ms[6].hyperplanes);
            shapes(&cd.chambers[0].interior_point, Convention::Min)
        })
        .unwrap_or_else(|e| e.to_string());
    let path = std::path::PathBuf::from(id_map.unwrap());
    let col = read_id_map(&path).and_then(|m| build_collection(census, cat, Some((&m, path.display().to_string()))));
    let (find, nongeneric) = match &col {
        Ok(col) => (
            col.find_in_database(&cells(LOOKUP_CELLS)).map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
            col.query("is_generic=false").map(|ds| ds.iter().map(|d| d.id).collect::<Vec<_>>()).unwrap_or_default(),
        ),
        Err(e) => (e.to_string(), Vec::new()),
    };
    let msg = format!("shapes {got_c:?} / {got_np:?}, find {find}, non-generic {nongeneric:?}");
    if got_c == "A A A D E E I" && got_np == "A B B E F N EE" && find == "100" && nongeneric == [511, 718, 841, 904, 1094, 1113, 1190, 1262] {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn main() {
    let cat = MotifCatalog::from_env().expect("motif catalog");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = 0;
    println!(
        "catalog {} ({} entries, complete: {})",
        cat.manifest.version,
        cat.entries.len(),
        cat.is_complete()
    );
    report("1", "give_pluecker fixture", criterion_1(&cat), &mut failures);
    report("2", "sign conditions fixture", criterion_2(&cat), &mut failures);
    report("3", "DLO fixture", criterion_3(&cat), &mut failures);
    let start = Instant::now();
    let census = enumerate_census();
    let census_time = start.elapsed();
    report("4", "seven motifs everywhere", criterion_4(&census, &cat), &mut failures);
    report("5", "census", criterion_5(&census, census_time), &mut failures);
    report("6", "achievable counts", criterion_6(&census, &cat), &mut failures);
    report("7", "seven bitangent classes", criterion_7(&census, &mut rng), &mut failures);
    report("8", "total multiplicity", criterion_8(&census, &mut rng), &mut failures);
    report("9a", "chamber dimension", criterion_9a(&cat), &mut failures);
    report("9b", "wall row", criterion_9b(), &mut failures);
    report("10", "shape constancy", criterion_10(&census, &cat, &mut rng), &mut failures);
    report("11", "catalog-contingent fixtures", criterion_11(&census, &cat), &mut failures);
    println!("{failures} failing criteria");
    if failures > 0 && std::env::var_os("QUARTIC_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
