//! Solving monomial systems `prod_k z_k^{A_jk} = t_j` over the torus.
//!
//! Over `C*` a solution exists iff every integer relation among the rows of
//! `A` is respected by the targets. Over `Q(i)*` one may additionally need
//! roots that do not exist in the field.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::gaussian::{GaussianRational, RootResult};
use super::matrix::IntMatrix;
use super::snf::{left_kernel_basis, snf};
use crate::error::{Error, Result};

/// Answer to the relation test over `C*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSolvability {
    pub solvable: bool,
    /// A relation `a` with `a^T A = 0` and `prod t_j^{a_j} != 1`, when unsolvable.
    pub certificate: Option<Vec<BigInt>>,
}

/// Evaluate `prod_j t_j^{a_j}`.
pub fn monomial(targets: &[GaussianRational], exps: &[BigInt]) -> Result<GaussianRational> {
    let mut acc = GaussianRational::one();
    for (t, a) in targets.iter().zip(exps) {
        if !a.is_zero() {
            acc = &acc * &t.pow_big(a)?;
        }
    }
    Ok(acc)
}

fn check_targets(a: &IntMatrix, targets: &[GaussianRational]) -> Result<()> {
    if a.rows() != targets.len() {
        return Err(Error::BasisMismatch(format!(
            "{} targets for {} rows",
            targets.len(),
            a.rows()
        )));
    }
    if let Some(j) = targets.iter().position(GaussianRational::is_zero) {
        return Err(Error::ZeroValue(format!("target {j}")));
    }
    Ok(())
}

pub fn solvable_over_torus(a: &IntMatrix, targets: &[GaussianRational]) -> Result<TorusSolvability> {
    check_targets(a, targets)?;
    for rel in left_kernel_basis(a) {
        if !monomial(targets, &rel)?.is_one() {
            return Ok(TorusSolvability { solvable: false, certificate: Some(rel) });
        }
    }
    Ok(TorusSolvability { solvable: true, certificate: None })
}

/// Outcome of an explicit solve in `Q(i)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusSolution {
    Solved(Vec<GaussianRational>),
    /// Solvable over `C*`, but a required root is not in `Q(i)`.
    NoGaussianRoot { degree: BigInt, value: GaussianRational },
    Unsolvable { relation: Vec<BigInt> },
    /// Root extraction exceeded the certified search range.
    Undetermined { degree: BigInt, value: GaussianRational },
}

pub fn solve_over_gaussian(a: &IntMatrix, targets: &[GaussianRational]) -> Result<TorusSolution> {
    let check = solvable_over_torus(a, targets)?;
    if let Some(relation) = check.certificate {
        return Ok(TorusSolution::Unsolvable { relation });
    }
    let s = snf(a);
    let diag = s.diagonal();
    let r = a.cols();
    let mut w = vec![GaussianRational::one(); r];
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let si = monomial(targets, s.u.row(i))?;
        let deg = d.to_u32().ok_or(Error::Overflow("root degree"))?;
        match si.nth_root(deg) {
            RootResult::Found(z) => w[i] = z,
            RootResult::NotInField => {
                return Ok(TorusSolution::NoGaussianRoot { degree: d.clone(), value: si })
            }
            RootResult::Undetermined => {
                return Ok(TorusSolution::Undetermined { degree: d.clone(), value: si })
            }
        }
    }
    let z = (0..r)
        .map(|k| monomial(&w, s.v.row(k)))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(verify_solution(a, targets, &z).unwrap_or(false));
    Ok(TorusSolution::Solved(z))
}

/// Check `prod_k z_k^{A_jk} = t_j` for every row.
pub fn verify_solution(a: &IntMatrix, targets: &[GaussianRational], z: &[GaussianRational]) -> Result<bool> {
    for j in 0..a.rows() {
        if monomial(z, a.row(j))? != targets[j] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn identity_always_solvable() {
        let a = IntMatrix::identity(2);
        let t = [g("2"), g("1/3+1*i")];
        assert!(solvable_over_torus(&a, &t).unwrap().solvable);
        assert_eq!(solve_over_gaussian(&a, &t).unwrap(), TorusSolution::Solved(t.to_vec()));
    }

    #[test]
    fn forced_inconsistency() {
        let a = IntMatrix::from_rows(&[[1], [1]]);
        let r = solvable_over_torus(&a, &[g("2"), g("3")]).unwrap();
        assert!(!r.solvable);
        assert_eq!(r.certificate, Some(vec![BigInt::from(1), BigInt::from(-1)]));
    }

    #[test]
    fn divisibility() {
        let a = IntMatrix::from_rows(&[[2]]);
        assert!(solvable_over_torus(&a, &[g("4")]).unwrap().solvable);
        assert_eq!(solve_over_gaussian(&a, &[g("4")]).unwrap(), TorusSolution::Solved(vec![g("2")]));
        assert!(matches!(
            solve_over_gaussian(&a, &[g("2")]).unwrap(),
            TorusSolution::NoGaussianRoot { .. }
        ));
    }

    #[test]
    fn zero_target_rejected() {
        let a = IntMatrix::identity(1);
        assert!(solvable_over_torus(&a, &[GaussianRational::zero()]).is_err());
    }

    #[test]
    fn mixed_system() {
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4], [4, 6]]);
        let z = [g("2"), g("1-1*i")];
        let t: Vec<_> = (0..3).map(|j| monomial(&z, a.row(j)).unwrap()).collect();
        match solve_over_gaussian(&a, &t).unwrap() {
            TorusSolution::Solved(sol) => assert!(verify_solution(&a, &t, &sol).unwrap()),
            other => panic!("{other:?}"),
        }
    }
}
