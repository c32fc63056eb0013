//! Triple intersection numbers of toric divisors by wall-relation reduction.

use std::collections::{BTreeMap, BTreeSet};

use super::fan::{dot, dual_frame, sorted3, Fan3};

/// Dense table of `D_i . D_j . D_k` over ray divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayTensor {
    n: usize,
    data: Vec<i64>,
}

impl RayTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Third rays of the two cones on each wall.
pub(crate) fn wall_map(f: &Fan3) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut walls: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for c in &f.cones {
        let c = sorted3(*c);
        walls.entry((c[0], c[1])).or_default().push(c[2]);
        walls.entry((c[0], c[2])).or_default().push(c[1]);
        walls.entry((c[1], c[2])).or_default().push(c[0]);
    }
    walls
}

/// `D_i^2 . D_j` for a wall `{i, j}` with third rays `x`, `y`: pick `m` with
/// `<m, n_i> = 1` and `<m, n_j> = <m, n_x> = 0`; then `D_i ~ -sum <m, n_u> D_u`
/// leaves only the `y` term.
fn square_times(f: &Fan3, i: usize, j: usize, x: usize, y: usize) -> i64 {
    let m = dual_frame(&f.rays[i], &f.rays[j], &f.rays[x])[0];
    -dot(&m, &f.rays[y])
}

/// Compute the full tensor for a validated fan.
pub fn ray_tensor(f: &Fan3) -> RayTensor {
    let n = f.rays.len();
    let walls = wall_map(f);
    let cones: BTreeSet<[usize; 3]> = f.cones.iter().map(|c| sorted3(*c)).collect();
    let mut data = vec![0i64; n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut sq = vec![0i64; n * n];
    for (&(a, b), thirds) in &walls {
        let (x, y) = (thirds[0], thirds[1]);
        sq[a * n + b] = square_times(f, a, b, x, y);
        sq[b * n + a] = square_times(f, b, a, x, y);
    }
    let mut cube = vec![0i64; n];
    for (i, c) in cube.iter_mut().enumerate() {
        let cone = f.cones.iter().find(|c| c.contains(&i)).expect("ray in no cone");
        let others: Vec<usize> = cone.iter().copied().filter(|&u| u != i).collect();
        let m = dual_frame(&f.rays[i], &f.rays[others[0]], &f.rays[others[1]])[0];
        *c = -(0..n)
            .filter(|&u| u != i)
            .map(|u| dot(&m, &f.rays[u]) * sq[i * n + u])
            .sum::<i64>();
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = if i == j && j == k {
                    cube[i]
                } else if i == j {
                    sq[i * n + k]
                } else if i == k {
                    sq[i * n + j]
                } else if j == k {
                    sq[j * n + i]
                } else {
                    i64::from(cones.contains(&sorted3([i, j, k])))
                };
                data[idx(i, j, k)] = v;
            }
        }
    }
    RayTensor { n, data }
}

/// Basis of `Pic = Z^rays / M`: the rays outside a fixed frame cone. Each
/// frame ray's divisor is rewritten through the dual frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricPicBasis {
    pub frame: [usize; 3],
    pub basis_rays: Vec<usize>,
    /// Class of every ray divisor in basis coordinates.
    pub ray_classes: Vec<Vec<i64>>,
}

impl ToricPicBasis {
    pub fn new(f: &Fan3) -> ToricPicBasis {
        let frame = sorted3(f.cones[0]);
        let basis_rays: Vec<usize> = (0..f.rays.len()).filter(|i| !frame.contains(i)).collect();
        let pos: BTreeMap<usize, usize> =
            basis_rays.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let m = dual_frame(&f.rays[frame[0]], &f.rays[frame[1]], &f.rays[frame[2]]);
        let rank = basis_rays.len();
        let ray_classes = (0..f.rays.len())
            .map(|x| {
                let mut v = vec![0i64; rank];
                if let Some(&k) = pos.get(&x) {
                    v[k] = 1;
                } else {
                    let slot = frame.iter().position(|&r| r == x).unwrap();
                    for (k, &u) in basis_rays.iter().enumerate() {
                        v[k] = -dot(&m[slot], &f.rays[u]);
                    }
                }
                v
            })
            .collect();
        ToricPicBasis { frame, basis_rays, ray_classes }
    }

    pub fn rank(&self) -> usize {
        self.basis_rays.len()
    }

    /// Presentation `M -> Z^rays`: row `k` is `(<e_k^*, n_v>)_v`.
    pub fn presentation(f: &Fan3) -> Vec<Vec<i64>> {
        (0..3).map(|k| f.rays.iter().map(|r| r[k]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn p3_numbers() {
        let t = ray_tensor(&fixtures::p3_fan());
        assert_eq!(t.get(0, 1, 2), 1);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(t.get(i, j, k), 1, "H^3 = 1 on every triple");
                }
            }
        }
    }

    #[test]
    fn opposite_rays_never_meet() {
        let f = fixtures::p1p1p1_fan();
        let t = ray_tensor(&f);
        let (px, mx, py) = (0, 1, 2);
        assert_eq!(f.rays[px], [1, 0, 0]);
        assert_eq!(f.rays[mx], [-1, 0, 0]);
        assert_eq!(f.rays[py], [0, 1, 0]);
        assert_eq!(t.get(px, mx, py), 0);
        assert_eq!(t.get(px, px, py), 0);
        assert_eq!(t.get(px, px, px), 0);
    }

    #[test]
    fn anticanonical_cube_of_p3() {
        let t = ray_tensor(&fixtures::p3_fan());
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    s += t.get(i, j, k);
                }
            }
        }
        assert_eq!(s, 64);
    }

    #[test]
    fn pic_basis_of_p3() {
        let f = fixtures::p3_fan();
        let b = ToricPicBasis::new(&f);
        assert_eq!(b.rank(), 1);
        for c in &b.ray_classes {
            assert_eq!(c, &vec![1]);
        }
    }
}
