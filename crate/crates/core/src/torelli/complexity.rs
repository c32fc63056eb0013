//! The complexity `c = n + r - d` of a decomposition of the boundary.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rank, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complexity {
    pub n: usize,
    pub r: usize,
    pub d: BigRational,
    pub c: BigRational,
}

/// `classes` are divisor classes in a basis of `Pic`, with weights `a_i`.
pub fn complexity(classes: &[(Vec<i64>, BigRational)], pic_rank: usize) -> Result<Complexity> {
    let mut d = BigRational::zero();
    for (cls, a) in classes {
        if a.is_negative() {
            return Err(Error::InvalidPair(format!("negative weight {a}")));
        }
        if cls.len() != pic_rank {
            return Err(Error::BasisMismatch(format!("class of length {} in Pic of rank {pic_rank}", cls.len())));
        }
        d += a;
    }
    let cols: Vec<&[i64]> = classes.iter().map(|(c, _)| c.as_slice()).collect();
    let r = if cols.is_empty() { 0 } else { rank(&IntMatrix::from_columns(&cols, pic_rank)) };
    let n = 3;
    let c = BigRational::from_integer((n + r).into()) - &d;
    Ok(Complexity { n, r, d, c })
}

/// The toric boundary `sum D_rho` with unit weights.
pub fn toric_boundary_complexity(f: &crate::toric::SmoothFan) -> Result<Complexity> {
    let one = BigRational::from_integer(1.into());
    let classes: Vec<(Vec<i64>, BigRational)> =
        (0..f.n_rays()).map(|v| (f.ray_class(v).to_vec(), one.clone())).collect();
    complexity(&classes, f.pic_rank())
}
