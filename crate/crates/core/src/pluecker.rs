//! Real-lifting sign conditions and the achievable numbers of real bitangents.
//!
//! Each of the seven deformation classes of a generic quartic lifts to either
//! zero or four real bitangents, depending on a sign condition on the
//! coefficients of a real lift. Counting over all sign vectors yields the
//! achievable totals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::NUM_POINTS;
use crate::motif::{all_motifs, is_generic, MotifCatalog, SignCondition, SignedSet};
use crate::subdivision::Triangulation;

/// Fifteen signs `±1`, one per coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(v: Vec<i8>) -> Result<Self> {
        if v.len() != NUM_POINTS {
            return Err(Error::WrongLength { expected: NUM_POINTS, got: v.len() });
        }
        if v.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::Parse(format!("sign vector entries must be 1 or -1: {v:?}")));
        }
        Ok(SignVector(v))
    }

    pub fn all_positive() -> Self {
        SignVector(vec![1; NUM_POINTS])
    }

    /// Parses `1,1,-1,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<i8>().map_err(|e| Error::Parse(format!("sign {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        SignVector(self.0.iter().map(|x| -x).collect())
    }

    /// The vector or its negative, whichever starts with `+1`.
    pub fn standardized(&self) -> Self {
        if self.0[0] < 0 {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Bit `i` set iff entry `i` is `−1`.
    pub fn negative_mask(&self) -> u16 {
        self.0.iter().enumerate().filter(|(_, &x)| x < 0).fold(0, |m, (i, _)| m | (1 << i))
    }

    fn from_negative_mask(mask: u16) -> Self {
        SignVector((0..NUM_POINTS).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn evaluate_condition(cond: &SignCondition, s: &SignVector) -> bool {
    cond.holds(s.entries())
}

/// A condition as parity checks on the negative-entry mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompiledCondition {
    sets: [(u16, bool); 2],
}

impl CompiledCondition {
    pub fn new(c: &SignCondition) -> Self {
        let one = |s: &SignedSet| (s.indices.iter().fold(0u16, |m, &i| m | (1 << i)), s.negative);
        CompiledCondition { sets: [one(&c.first), one(&c.second)] }
    }

    /// The product over a set is negative iff an odd number of its entries
    /// are negative; the `−1` token flips that.
    #[inline]
    pub fn holds(&self, negative_mask: u16) -> bool {
        self.sets.iter().all(|&(m, neg)| ((negative_mask & m).count_ones() % 2 == 1) == neg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PlueckerResult {
    pub achievable_counts: BTreeSet<u32>,
    /// First witness of each count in lexicographic order (`−1 < +1`).
    pub representatives: BTreeMap<u32, SignVector>,
}

/// `4 ×` the number of satisfied conditions.
pub fn count_for_conditions(conds: &[SignCondition], s: &SignVector) -> u32 {
    4 * conds.iter().filter(|c| evaluate_condition(c, s)).count() as u32
}

/// Number of real bitangents of a generic quartic of type `t` whose real lift
/// has coefficient signs `s`.
pub fn give_pluecker(t: &Triangulation, s: &SignVector, catalog: &MotifCatalog) -> Result<u32> {
    if !is_generic(t) {
        return Err(Error::NonGeneric);
    }
    let conds: Vec<SignCondition> = all_motifs(t, catalog)?.into_iter().map(|m| m.sign_conditions).collect();
    Ok(count_for_conditions(&conds, s))
}

/// Every count reached by some sign vector. When every condition is even
/// (invariant under `s ↦ −s`) only vectors with `s_0 = +1` are visited.
pub fn sweep_conditions(conds: &[SignCondition]) -> PlueckerResult {
    let compiled: Vec<CompiledCondition> = conds.iter().map(CompiledCondition::new).collect();
    let even = conds.iter().all(SignCondition::has_even_sets);
    let free: u32 = if even { NUM_POINTS as u32 - 1 } else { NUM_POINTS as u32 };
    let first = NUM_POINTS as u32 - free;
    let mut out = PlueckerResult::default();
    // k counts upward; entry `first + j` is −1 iff bit (free − 1 − j) of k is 0,
    // so increasing k walks the vectors in lexicographic order with −1 < +1.
    // With s_0 fixed to +1, this is the order among standardized vectors.
    for k in 0u32..(1 << free) {
        let mut mask: u16 = 0;
        for j in 0..free {
            if k >> (free - 1 - j) & 1 == 0 {
                mask |= 1 << (first + j);
            }
        }
        let count = 4 * compiled.iter().filter(|c| c.holds(mask)).count() as u32;
        if out.achievable_counts.insert(count) {
            out.representatives.insert(count, SignVector::from_negative_mask(mask));
        }
    }
    out
}

pub fn pluecker_sweep(t: &Triangulation, catalog: &MotifCatalog) -> Result<PlueckerResult> {
    if !is_generic(t) {
        return Err(Error::NonGeneric);
    }
    let conds: Vec<SignCondition> = all_motifs(t, catalog)?.into_iter().map(|m| m.sign_conditions).collect();
    Ok(sweep_conditions(&conds))
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn printed_vector_gives_four() {
        let v = SignVector::parse("1,1,-1,1,-1,-1,1,1,1,-1,-1,1,1,1,-1").unwrap();
        let conds = printed_conditions();
        let holding: Vec<usize> = (0..7).filter(|&i| evaluate_condition(&conds[i], &v)).collect();
        assert_eq!(holding, vec![6]);
        assert_eq!(count_for_conditions(&conds, &v), 4);
    }

    #[test]
    fn all_positive_satisfies_only_the_unsigned_conditions() {
        assert_eq!(count_for_conditions(&printed_conditions(), &SignVector::all_positive()), 8);
    }

    #[test]
    fn compiled_matches_direct_evaluation() {
        let conds = printed_conditions();
        for mask in (0u16..(1 << 15)).step_by(37) {
            let s = SignVector::from_negative_mask(mask);
            for c in &conds {
                assert_eq!(CompiledCondition::new(c).holds(mask), evaluate_condition(c, &s));
            }
        }
    }

    #[test]
    fn printed_conditions_sweep() {
        let r = sweep_conditions(&printed_conditions());
        assert!(r.achievable_counts.iter().all(|c| [4, 8, 16, 28].contains(c)), "{r:?}");
        for (count, s) in &r.representatives {
            assert_eq!(s.entries()[0], 1);
            assert_eq!(count_for_conditions(&printed_conditions(), s), *count);
            assert_eq!(count_for_conditions(&printed_conditions(), &s.negated()), *count);
        }
    }

    #[test]
    fn odd_conditions_use_all_vectors() {
        let odd = vec![SignCondition::from_tokens(&[0], &[]).unwrap()];
        let r = sweep_conditions(&odd);
        assert_eq!(r.achievable_counts, BTreeSet::from([0, 4]));
    }
}
