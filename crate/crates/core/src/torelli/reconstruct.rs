//! Recover a smooth complete fan from the intersection numbers of its toric
//! boundary, and compare fans up to `GL_3(Z)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::toric::{cross, det3, sorted3, validate_fan, Fan3, Orientation, Ray, SmoothFan};

/// Intersection data of a toric boundary: the triples of components with
/// `D_i D_j D_k = 1` and, for each adjacent pair `i < j`, the numbers
/// `(D_i^2 D_j, D_j^2 D_i)`, i.e. the self-intersections of `D_i ∩ D_j`
/// in `D_j` and in `D_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionData {
    pub n: usize,
    pub cones: Vec<[usize; 3]>,
    pub walls: BTreeMap<(usize, usize), (i64, i64)>,
}

impl IntersectionData {
    pub fn of_fan(f: &SmoothFan) -> IntersectionData {
        let n = f.n_rays();
        let mut cones = Vec::new();
        let mut walls = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                if f.ray_triple(i, i, j) != 0 || f.ray_triple(i, j, j) != 0 || f.dual().edge_id(i, j).is_some() {
                    walls.insert((i, j), (f.ray_triple(i, i, j), f.ray_triple(i, j, j)));
                }
                for k in j + 1..n {
                    if f.ray_triple(i, j, k) == 1 {
                        cones.push([i, j, k]);
                    }
                }
            }
        }
        IntersectionData { n, cones, walls }
    }

    /// `(D_i^2 D_j, D_j^2 D_i)` for the ordered pair.
    pub fn wall(&self, i: usize, j: usize) -> Option<(i64, i64)> {
        if i < j {
            self.walls.get(&(i, j)).copied()
        } else {
            self.walls.get(&(j, i)).map(|&(a, b)| (b, a))
        }
    }
}

fn add(a: Ray, b: Ray, s: i64) -> Ray {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// Place the first cone on the standard basis and propagate across walls
/// with `n_y = -n_x - a n_i - b n_j`.
pub fn reconstruct_fan(d: &IntersectionData) -> Result<Fan3> {
    let bad = |m: String| Err(Error::NotToric(m));
    if d.cones.is_empty() {
        return bad("no cones".into());
    }
    let cones: BTreeSet<[usize; 3]> = d.cones.iter().map(|c| sorted3(*c)).collect();
    let mut thirds: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for c in &cones {
        if c.iter().any(|&x| x >= d.n) {
            return bad(format!("cone {c:?} out of range"));
        }
        for (a, b, x) in [(c[0], c[1], c[2]), (c[0], c[2], c[1]), (c[1], c[2], c[0])] {
            thirds.entry((a, b)).or_default().push(x);
        }
    }
    let mut rays: Vec<Option<Ray>> = vec![None; d.n];
    let c0 = *cones.iter().next().unwrap();
    rays[c0[0]] = Some([1, 0, 0]);
    rays[c0[1]] = Some([0, 1, 0]);
    rays[c0[2]] = Some([0, 0, 1]);
    let mut queue = VecDeque::from([c0]);
    let mut done = BTreeSet::new();
    while let Some(c) = queue.pop_front() {
        if !done.insert(c) {
            continue;
        }
        for (i, j, x) in [(c[0], c[1], c[2]), (c[0], c[2], c[1]), (c[1], c[2], c[0])] {
            let others = &thirds[&(i, j)];
            if others.len() != 2 {
                return bad(format!("wall {i}-{j} lies in {} cones", others.len()));
            }
            let y = if others[0] == x { others[1] } else { others[0] };
            let Some((a, b)) = d.wall(i, j) else {
                return bad(format!("no self-intersection data for {i}-{j}"));
            };
            let (ni, nj, nx) = (rays[i].unwrap(), rays[j].unwrap(), rays[x].unwrap());
            let ny = add(add([-nx[0], -nx[1], -nx[2]], ni, -a), nj, -b);
            match rays[y] {
                Some(r) if r != ny => {
                    return bad(format!("inconsistent ray {y} across wall {i}-{j}: {r:?} and {ny:?}"));
                }
                _ => rays[y] = Some(ny),
            }
            queue.push_back(sorted3([i, j, y]));
        }
    }
    let Some(rays) = rays.into_iter().collect::<Option<Vec<Ray>>>() else {
        return bad("components not reached from the first cone".into());
    };
    let cones: Vec<[usize; 3]> = cones.into_iter().collect();
    let fan = Fan3 { rays, cones, orientation: Orientation { cone: c0, sign: 1 } };
    validate_fan(&fan).map_err(|e| Error::NotToric(e.0))?;
    let back = IntersectionData::of_fan(&SmoothFan::new(fan.clone(), &[])?);
    if back.cones != d.cones.iter().map(|c| sorted3(*c)).collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>() {
        return bad("reconstructed cones differ from the data".into());
    }
    for (&(i, j), &v) in &d.walls {
        if back.wall(i, j).unwrap_or((0, 0)) != v {
            return bad(format!("self-intersections of {i}-{j} not reproduced"));
        }
    }
    Ok(fan)
}

pub type Matrix3 = [[i64; 3]; 3];

fn mat_mul_vec(m: &Matrix3, v: &Ray) -> Ray {
    [0, 1, 2].map(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
}

/// The unique linear map sending the rays of `frame` in `a` to the rays of
/// `image` in `b`, if it is integral and unimodular.
fn frame_map(a: &Fan3, frame: [usize; 3], b: &Fan3, image: [usize; 3]) -> Option<Matrix3> {
    let s = frame.map(|i| a.rays[i]);
    let t = image.map(|i| b.rays[i]);
    let det = det3(&s[0], &s[1], &s[2]) as i64;
    if det.abs() != 1 {
        return None;
    }
    // M = T S^{-1}; S^{-1} = adj(S) / det with S having the rays as columns.
    let rows_inv = [cross(&s[1], &s[2]), cross(&s[2], &s[0]), cross(&s[0], &s[1])];
    let mut m = [[0i64; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m[r][c] = (0..3).map(|k| t[k][r] * rows_inv[k][c]).sum::<i64>() * det;
        }
    }
    let d = det3(&m[0], &m[1], &m[2]);
    (d.abs() == 1).then_some(m)
}

/// A lattice automorphism carrying one fan onto another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanIsomorphism {
    pub matrix: Matrix3,
    pub ray_map: Vec<usize>,
}

impl FanIsomorphism {
    pub fn det(&self) -> i64 {
        det3(&self.matrix[0], &self.matrix[1], &self.matrix[2]) as i64
    }
}

/// Check that `m` maps rays to rays and cones to cones.
pub fn check_linear_map(a: &Fan3, b: &Fan3, m: &Matrix3) -> Option<FanIsomorphism> {
    if a.rays.len() != b.rays.len() || a.cones.len() != b.cones.len() {
        return None;
    }
    let index: BTreeMap<Ray, usize> = b.rays.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let ray_map: Vec<usize> = a.rays.iter().map(|r| index.get(&mat_mul_vec(m, r)).copied()).collect::<Option<_>>()?;
    let bc: BTreeSet<[usize; 3]> = b.cones.iter().map(|c| sorted3(*c)).collect();
    a.cones
        .iter()
        .all(|c| bc.contains(&sorted3(c.map(|i| ray_map[i]))))
        .then(|| FanIsomorphism { matrix: *m, ray_map })
}

/// The lattice map realizing a given bijection of rays, if any.
pub fn induced_linear_map(a: &Fan3, b: &Fan3, vertex_map: &[usize]) -> Option<FanIsomorphism> {
    let c = a.cones[0];
    let m = frame_map(a, c, b, c.map(|i| vertex_map[i]))?;
    let iso = check_linear_map(a, b, &m)?;
    (iso.ray_map == vertex_map).then_some(iso)
}

/// Search all frames for a lattice isomorphism `a -> b`.
pub fn fan_isomorphism(a: &Fan3, b: &Fan3) -> Option<FanIsomorphism> {
    let c = a.cones[0];
    for t in &b.cones {
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let img = p.map(|k| t[k]);
            if let Some(m) = frame_map(a, c, b, img) {
                if let Some(iso) = check_linear_map(a, b, &m) {
                    return Some(iso);
                }
            }
        }
    }
    None
}
