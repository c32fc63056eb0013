//! Numerical recognition of divisorial contractions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::{LogCY3Pair, PairSpec};

/// `(E . l, K . l, E . K^2)` for the exceptional divisor `E` and the
/// minimal curve `l` of the contracted ray.
pub type Descriptor = (i64, i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    pub descriptor: Descriptor,
    /// `E` is contracted to a point.
    pub to_point: bool,
    /// Mori types compatible with the data.
    pub types: Vec<u8>,
}

impl Contraction {
    pub fn mori_type(&self) -> Option<u8> {
        match self.types.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }
}

/// Match a descriptor against the table of divisorial contractions. Types
/// 3 and 4 have the same numerics and are returned together.
pub fn recognize(d: Descriptor, to_point: bool) -> Result<Vec<u8>> {
    let types = match (d, to_point) {
        ((-1, -1, _), false) => vec![1],
        ((-1, -2, 4), true) => vec![2],
        ((-1, -1, 2), true) => vec![3, 4],
        ((-2, -1, 1), true) => vec![5],
        _ => vec![],
    };
    if types.is_empty() {
        return Err(Error::Internal(format!("descriptor {d:?} (to point: {to_point}) matches no contraction type")));
    }
    Ok(types)
}

/// Types compatible with a bare descriptor.
pub fn recognize_descriptor(d: Descriptor) -> Vec<u8> {
    let mut out: Vec<u8> = [false, true].iter().flat_map(|&p| recognize(d, p).unwrap_or_default()).collect();
    out.sort_unstable();
    out
}

/// Classify the contraction of the exceptional divisor of step `k`, seen on
/// the pair obtained by the first `k + 1` steps.
pub fn classify_contraction(p: &LogCY3Pair, k: usize) -> Result<Contraction> {
    if k >= p.n_steps() {
        return Err(Error::InvalidPair(format!("no step {k}")));
    }
    let spec = p.spec();
    let q = LogCY3Pair::new(PairSpec {
        fan: spec.fan.clone(),
        edge_orientations: spec.edge_orientations.clone(),
        steps: spec.steps[..=k].to_vec(),
    })?;
    let e_idx = q.exceptional_index(k);
    let e = q.basis_vector(e_idx);
    let kk: Vec<i64> = q.anticanonical().iter().map(|x| -x).collect();
    // Pic(Y_k) = Pic(Y_{k-1}) + Z E and l vanishes on the first summand.
    let ell = |d: &[i64]| -d[e_idx];
    let ek2 = q.cubic(&e, &kk, &kk);
    let to_point = (0..e_idx).all(|j| q.cubic(&e, &e, &q.basis_vector(j)) == 0);
    if to_point {
        // For a point blowup l = -E^2.
        for j in 0..=e_idx {
            let b = q.basis_vector(j);
            if -q.cubic(&b, &e, &e) != ell(&b) {
                return Err(Error::Internal(format!("step {k}: -E^2 is not the ray generator")));
            }
        }
    }
    let descriptor = (ell(&e), ell(&kk), ek2);
    Ok(Contraction { descriptor, to_point, types: recognize(descriptor, to_point)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn point_blowup_is_type_2() {
        let p = LogCY3Pair::new(fixtures::p3_two_points()).unwrap();
        for k in 0..2 {
            let c = classify_contraction(&p, k).unwrap();
            assert_eq!(c.descriptor, (-1, -2, 4));
            assert_eq!(c.mori_type(), Some(2));
        }
    }

    #[test]
    fn curve_blowups_are_type_1() {
        let line = LogCY3Pair::new(fixtures::p3_line()).unwrap();
        assert_eq!(classify_contraction(&line, 0).unwrap().descriptor, (-1, -1, 6));
        let conic = LogCY3Pair::new(fixtures::p3_conic()).unwrap();
        let c = classify_contraction(&conic, 0).unwrap();
        assert_eq!(c.descriptor, (-1, -1, 10));
        assert_eq!(c.mori_type(), Some(1));
    }

    #[test]
    fn table_rows() {
        assert_eq!(recognize((-2, -1, 1), true).unwrap(), vec![5]);
        assert_eq!(recognize((-1, -1, 2), true).unwrap(), vec![3, 4]);
        assert_eq!(recognize_descriptor((-1, -1, 2)), vec![1, 3, 4]);
        assert_eq!(recognize_descriptor((-1, -2, 4)), vec![2]);
        assert!(recognize((-1, -3, 4), true).is_err());
    }

    #[test]
    fn mixed_program_steps() {
        let p = LogCY3Pair::new(fixtures::p3_mixed()).unwrap();
        let types: Vec<u8> = (0..p.n_steps()).map(|k| classify_contraction(&p, k).unwrap().mori_type().unwrap()).collect();
        assert_eq!(types, vec![1, 2, 2]);
    }
}
