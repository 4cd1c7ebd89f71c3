//! Chambers cut out of a secondary cone by the hyperplanes of a motif.
//!
//! The shapes of the bitangent classes change only when the coefficients cross
//! one of these hyperplanes, so inside each chamber the shapes are constant.
//! Chambers are kept in H-representation: the cone's inequalities plus one
//! strict half-space per hyperplane.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::curve::{curve_from_coefficients, Convention};
use crate::error::{Error, Result};
use crate::motif::{all_motifs, bitangent_shapes, MotifCatalog, ShapeOutcome};
use crate::oracle::{enumerate_bitangent_classes, Fingerprint};
use crate::rational::Q;
use crate::subdivision::{secondary_cone, SecondaryCone, Triangulation, WeightVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chamber {
    /// `+` or `-` per hyperplane row.
    pub pattern: String,
    pub dimension: usize,
    /// A primitive integer point with every inequality strict.
    pub interior_point: WeightVector,
    #[serde(skip)]
    pub cone: Option<Cone>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberDecomposition {
    #[serde(with = "crate::rational::serde_q_rows")]
    pub hyperplanes: Vec<Vec<Q>>,
    pub chambers: Vec<Chamber>,
}

fn halfspace(row: &[Q], sign: char) -> Vec<Q> {
    if sign == '+' {
        row.to_vec()
    } else {
        row.iter().map(|x| -x).collect()
    }
}

/// Full-dimensional chambers of `cone` cut by `rows`, found by extending
/// feasible sign prefixes one hyperplane at a time.
pub fn chamber_decomposition(cone: &SecondaryCone, rows: &[Vec<Q>]) -> ChamberDecomposition {
    let base = cone.cone();
    let mut prefixes: Vec<String> = vec![String::new()];
    for k in 0..rows.len() {
        prefixes = prefixes
            .par_iter()
            .flat_map_iter(|p| {
                ['+', '-'].into_iter().filter_map(|s| {
                    let mut pat = p.clone();
                    pat.push(s);
                    let c = base.with_inequalities(
                        pat.chars().zip(&rows[..=k]).map(|(ch, r)| halfspace(r, ch)).collect::<Vec<_>>(),
                    );
                    c.strict_point().map(|_| pat)
                })
            })
            .collect();
        prefixes.sort();
    }
    let chambers = prefixes
        .into_iter()
        .map(|pattern| {
            let c = base.with_inequalities(pattern.chars().zip(rows).map(|(ch, r)| halfspace(r, ch)).collect::<Vec<_>>());
            let p = c.relative_interior_point().expect("feasible chamber");
            Chamber {
                dimension: c.dimension(),
                interior_point: WeightVector::new(p).expect("15 entries"),
                pattern,
                cone: Some(c),
            }
        })
        .collect();
    ChamberDecomposition { hyperplanes: rows.to_vec(), chambers }
}

/// A point with every inequality of `cone` strict, scaled to primitive integers.
pub fn relative_interior_point(cone: &Cone) -> Result<WeightVector> {
    WeightVector::new(cone.relative_interior_point()?)
}

/// Shapes and oracle fingerprints at one chamber's sample point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberShapes {
    pub chamber: Chamber,
    pub shapes: Vec<ShapeOutcome>,
    pub fingerprints: Vec<Fingerprint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifChambers {
    pub motif_index: usize,
    pub type_name: String,
    pub chambers: Vec<ChamberShapes>,
}

/// Sorted oracle fingerprints of the quartic with min-convention weights `w`.
pub fn oracle_fingerprints(w: &WeightVector) -> Result<Vec<Fingerprint>> {
    let curve = curve_from_coefficients(w, Convention::Min)?;
    let mut f: Vec<Fingerprint> = enumerate_bitangent_classes(&curve).iter().map(|c| c.fingerprint()).collect();
    f.sort();
    Ok(f)
}

/// For every motif of `t`, its chambers with the shapes named by the catalog
/// and the oracle's class fingerprints at the sample point.
pub fn shape_report(t: &Triangulation, catalog: &MotifCatalog) -> Result<Vec<MotifChambers>> {
    if !crate::motif::is_generic(t) {
        return Err(Error::NonGeneric);
    }
    let sc = secondary_cone(t);
    all_motifs(t, catalog)?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let cd = chamber_decomposition(&sc, &m.hyperplanes);
            let chambers = cd
                .chambers
                .into_iter()
                .map(|chamber| {
                    let shapes = bitangent_shapes(&chamber.interior_point, Convention::Min, catalog)?;
                    let fingerprints = oracle_fingerprints(&chamber.interior_point)?;
                    Ok(ChamberShapes { chamber, shapes, fingerprints })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MotifChambers { motif_index: i, type_name: m.type_name.clone(), chambers })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::subdivision::fixtures::{ds_fixture, s_fixture};
    use crate::subdivision::subdivision_from_weights;

    #[test]
    fn no_rows_give_the_cone() {
        let sc = secondary_cone(&ds_fixture());
        let cd = chamber_decomposition(&sc, &[]);
        assert_eq!(cd.chambers.len(), 1);
        assert_eq!(cd.chambers[0].dimension, 15);
        let p = &cd.chambers[0].interior_point;
        assert!(sc.contains_strictly(p));
        assert_eq!(subdivision_from_weights(p).to_triangulation().unwrap(), ds_fixture());
    }

    #[test]
    fn dlo_row_splits_the_s_cone() {
        let row: Vec<Q> = [0, 1, -1, 0, 1, 0, 0, -2, 0, 0, 0, 0, 1, 0, 0].iter().map(|&x| q(x)).collect();
        let sc = secondary_cone(&s_fixture());
        let cd = chamber_decomposition(&sc, &[row]);
        let pats: Vec<&str> = cd.chambers.iter().map(|c| c.pattern.as_str()).collect();
        assert_eq!(pats, vec!["+", "-"]);
        for c in &cd.chambers {
            assert_eq!(c.dimension, 15);
            assert!(sc.contains_strictly(&c.interior_point));
        }
    }
}
