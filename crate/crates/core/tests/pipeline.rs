use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartic::census::{enumerate_census, Census};
use quartic::curve::{
    curve_from_coefficients, stable_intersection, stable_intersection_with, Convention, Point2, TropicalLine,
};
use quartic::db::{audit, build_collection, Collection, IdMapEntry};
use quartic::motif::{find_all_motifs, is_generic, MotifCatalog};
use quartic::pluecker::{count_for_conditions, SignVector};
use quartic::rational::{q, qf};
use quartic::subdivision::{
    gkz_vector, interior_weights, minimal_representative, secondary_cone, subdivision_from_weights, Triangulation,
    WeightVector,
};
use quartic::Q;

fn census() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(enumerate_census)
}

fn collection() -> &'static Collection {
    static C: OnceLock<Collection> = OnceLock::new();
    C.get_or_init(|| build_collection(census(), &MotifCatalog::embedded(), None).unwrap())
}

fn s_cells() -> Triangulation {
    Triangulation::parse_json(
        "[[0,1,2],[1,2,4],[2,4,12],[4,7,12],[2,8,12],[2,8,13],[8,12,13],[2,5,13],[5,9,13],[9,13,14],[7,11,12],[7,10,11],[4,7,10],[4,6,10],[3,4,6],[1,3,4]]",
    )
    .unwrap()
}

#[test]
fn census_representatives_are_minimal_and_regular() {
    let c = census();
    assert_eq!(c.len(), 1278);
    for t in c.representatives() {
        assert_eq!(&minimal_representative(t), t);
    }
    let sample: Vec<&Triangulation> = c.representatives().step_by(97).collect();
    for t in sample {
        let w = interior_weights(t).unwrap();
        assert_eq!(subdivision_from_weights(&w).to_triangulation().as_ref(), Some(t));
    }
}

#[test]
fn gkz_entries_sum_to_three_times_the_area() {
    // Each unit triangle has area 1/2 and three vertices; 4Δ₂ has area 8.
    for t in census().representatives().step_by(50) {
        let s: Q = gkz_vector(t).iter().sum();
        assert_eq!(s, q(24));
    }
}

#[test]
fn every_document_is_found_from_every_orbit_element() {
    let col = collection();
    for d in col.documents.iter().step_by(7) {
        for sigma in 0..6 {
            assert_eq!(col.find_in_database(&d.maximal_cells.apply(sigma)).unwrap(), d.id);
        }
    }
}

#[test]
fn queries_select_documents() {
    let col = collection();
    assert_eq!(col.query("").unwrap().len(), 1278);
    assert_eq!(col.query("is_generic=false").unwrap().len(), 8);
    assert_eq!(col.query("is_generic=true & id<=10").unwrap().len(), 10 - col.query("is_generic=false & id<=10").unwrap().len());
    let dlo = col.query("deformation_motifs.type=DLO").unwrap();
    assert!(!dlo.is_empty());
    assert!(dlo.iter().all(|d| d.deformation_motifs.iter().any(|m| m.type_name == "DLO")));
    assert!(col.query("is_generic").is_err());
}

#[test]
fn store_round_trip_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let col = collection();
    col.save(dir.path()).unwrap();
    let back = Collection::load(dir.path()).unwrap();
    assert_eq!(&back, col);
    assert!(audit(&back, &MotifCatalog::embedded()).is_empty());

    // A tampered document is reported.
    let mut bad = back.clone();
    bad.documents[3].is_generic = !bad.documents[3].is_generic;
    assert_eq!(audit(&bad, &MotifCatalog::embedded()), vec![bad.documents[3].id]);
}

#[test]
fn imported_ids_are_used() {
    let col = collection();
    let n = col.documents.len() as u32;
    // Reverse the ids and hand in non-minimal cells.
    let map: Vec<IdMapEntry> = col
        .documents
        .iter()
        .map(|d| IdMapEntry { id: n + 1 - d.id, maximal_cells: d.maximal_cells.apply(3) })
        .collect();
    let imported = build_collection(census(), &MotifCatalog::embedded(), Some((&map, "reversed".into()))).unwrap();
    let target = col.find_in_database(&s_cells()).unwrap();
    assert_eq!(imported.find_in_database(&s_cells()).unwrap(), n + 1 - target);
    assert_eq!(imported.meta.id_source, "reversed");

    let short = &map[1..];
    assert!(build_collection(census(), &MotifCatalog::embedded(), Some((short, "short".into()))).is_err());
}

#[test]
fn non_generic_orbits_share_a_central_configuration() {
    let non: Vec<&Triangulation> = census().representatives().filter(|t| !is_generic(t)).collect();
    assert_eq!(non.len(), 8);
    for t in non {
        for c in [[4, 8, 14], [4, 9, 14], [4, 7, 8], [4, 7, 10], [2, 4, 5], [4, 5, 9]] {
            assert!(t.contains_triangle(&c), "{t} lacks {c:?}");
        }
    }
}

#[test]
fn dlo_sign_condition_on_s() {
    let ms = find_all_motifs(&s_cells(), &MotifCatalog::embedded());
    let dlo = ms.iter().find(|m| m.type_name == "DLO").unwrap();
    let v = SignVector::parse("1,1,-1,1,-1,-1,1,1,1,-1,-1,1,1,1,-1").unwrap();
    // s1 s2 s4 s12 = 1·(−1)·(−1)·1 = +1, so "{-1 1 2 4 12}" fails.
    assert_eq!(count_for_conditions(std::slice::from_ref(&dlo.sign_conditions), &v), 0);
    assert_eq!(count_for_conditions(std::slice::from_ref(&dlo.sign_conditions), &SignVector::all_positive()), 0);
}

fn random_curve(rng: &mut ChaCha8Rng) -> quartic::curve::TropicalQuartic {
    let c = census();
    let t = &c.entries[rng.gen_range(0..c.len())].representative;
    let w0 = interior_weights(t).unwrap();
    let sc = secondary_cone(t);
    let mut k = 4;
    loop {
        let w = WeightVector::new(w0.entries().iter().map(|x| x * q(k) + qf(rng.gen_range(-6..=6), 3)).collect()).unwrap();
        if sc.contains_strictly(&w) {
            return curve_from_coefficients(&w, Convention::Min).unwrap();
        }
        k *= 2;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn minimal_representative_is_orbit_invariant(i in 0usize..1278, sigma in 0usize..6) {
        let t = &census().entries[i].representative;
        prop_assert_eq!(&minimal_representative(&t.apply(sigma)), t);
    }

    #[test]
    fn stable_intersection_does_not_depend_on_the_perturbation(seed in any::<u64>(), x in -60i64..60, y in -60i64..60, which in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let curve = random_curve(&mut rng);
        let (_, base) = curve.vertices[rng.gen_range(0..curve.vertices.len())];
        let p = if which == 0 { base } else { Point2::new(base.x + qf(x as i128, 10), base.y + qf(y as i128, 10)) };
        let line = TropicalLine::new(p, Convention::Min);
        let a = stable_intersection(&curve, &line);
        prop_assert_eq!(a.total(), 4);
        for g in [(101, 1), (-1, 103), (-107, -3), (7, -97)] {
            let b = stable_intersection_with(&curve, &line, g);
            prop_assert_eq!(&b, &a);
        }
    }

    #[test]
    fn max_curve_is_the_point_reflection_of_the_negated_min_curve(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let min = random_curve(&mut rng);
        let max = curve_from_coefficients(&min.coefficients.negated(), Convention::Max).unwrap();
        prop_assert_eq!(&max.triangulation, &min.triangulation);
        let neg = |p: &Point2| Point2::new(-p.x, -p.y);
        for ((t1, p1), (t2, p2)) in min.vertices.iter().zip(&max.vertices) {
            prop_assert_eq!(t1, t2);
            prop_assert_eq!(neg(p1), *p2);
        }
    }
}

#[test]
fn max_curve_of_the_shape_listing_is_dual_to_s() {
    let c = WeightVector::from_ints(&[-14, -9, -4, -6, 0, -12, -4, 0, -5, -21, -3, -1, 0, -12, -31]).unwrap();
    let curve = curve_from_coefficients(&c, Convention::Max).unwrap();
    assert_eq!(curve.triangulation, s_cells());
}
