//! Smith and Hermite normal forms and the lattice operations built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{normalize_sign, IntMatrix};

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with
/// nonnegative entries `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Pivot: smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !(d[(i, j)].is_multiple_of(&p))));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfDecomposition { u, d, v }
}

pub fn rank(a: &IntMatrix) -> usize {
    snf(a).rank()
}

/// Row-style Hermite normal form: echelon rows, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !h[(i, c)].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[(i, c)].abs()).unwrap();
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = -h[(i, c)].div_floor(&h[(r, c)]);
                    h.add_row_multiple(i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[(r, c)].is_zero() {
            if h[(r, c)].is_negative() {
                h.negate_row(r);
            }
            for i in 0..r {
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
            }
            r += 1;
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    IntMatrix::from_big_rows(rows, n)
}

/// Basis of the integer kernel `{x : A x = 0}`, canonicalized by Hermite
/// reduction. The lattice spanned is saturated.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = snf(a);
    let r = s.rank();
    let n = a.cols();
    if r == n {
        return Vec::new();
    }
    let raw: Vec<Vec<BigInt>> = (r..n).map(|j| s.v.column(j)).collect();
    let h = hermite_rows(&IntMatrix::from_big_rows(raw, n));
    (0..h.rows()).map(|i| h.row(i).to_vec()).collect()
}

/// Basis of the left kernel `{a : a^T A = 0}`, each normalized so that its
/// first nonzero entry is positive.
pub fn left_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut out = kernel_basis(&a.transpose());
    for v in out.iter_mut() {
        normalize_sign(v);
    }
    out
}

/// Structure of `Z^rows / im(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl CokernelStructure {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn cokernel_structure(a: &IntMatrix) -> CokernelStructure {
    let s = snf(a);
    let diag = s.diagonal();
    let r = s.rank();
    CokernelStructure {
        free_rank: a.rows() - r,
        torsion: diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
    }
}

/// Basis of the column span of `A`, with a flag telling whether the span
/// is saturated in `Z^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBasis {
    pub basis: Vec<Vec<BigInt>>,
    pub saturated: bool,
}

pub fn image_basis(a: &IntMatrix) -> ImageBasis {
    let h = hermite_rows(&a.transpose());
    ImageBasis {
        basis: (0..h.rows()).map(|i| h.row(i).to_vec()).collect(),
        saturated: cokernel_structure(a).is_free(),
    }
}

/// Some integer solution of `A x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve");
    let s = snf(a);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = c.div_rem(&di);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let s = snf(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_snf() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_snf() {
        // Hand reduction: gcd of entries is 2, determinant -8, so (2, 4).
        let s = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn zero_snf() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&IntMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&IntMatrix::from_rows(&[[2, -2]])), vec![big(&[1, 1])]);
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1, 1, 1]]));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn cokernels() {
        assert_eq!(
            cokernel_structure(&IntMatrix::identity(2)),
            CokernelStructure { free_rank: 0, torsion: vec![] }
        );
        assert_eq!(
            cokernel_structure(&IntMatrix::from_rows(&[[2]])),
            CokernelStructure { free_rank: 0, torsion: big(&[2]) }
        );
    }

    #[test]
    fn images() {
        let im = image_basis(&IntMatrix::from_rows(&[[2, 0], [0, 2]]));
        assert_eq!(im.basis.len(), 2);
        assert!(!im.saturated);
        assert!(image_basis(&IntMatrix::from_rows(&[[1, 2], [0, 1]])).saturated);
    }

    #[test]
    fn integer_solve() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        assert_eq!(solve_integer(&a, &big(&[4, 9])), Some(big(&[2, 3])));
        assert_eq!(solve_integer(&a, &big(&[1, 0])), None);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let b = IntMatrix::from_rows(&[[0, 18, 24], [2, 4, 4], [8, -8, -20]]);
        assert_eq!(hermite_rows(&a), hermite_rows(&b));
    }
}
