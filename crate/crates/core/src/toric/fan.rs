use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Check, Diagnostic};

pub type Ray = [i64; 3];

/// Global orientation of the dual complex: the listed reference cone, read
/// in the listed order, is positively oriented when `sign = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    pub cone: [usize; 3],
    pub sign: i64,
}

/// Raw fan data in a rank-3 lattice. Use [`validate_fan`] or
/// [`SmoothFan::new`](super::SmoothFan::new) before computing with it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fan3 {
    pub rays: Vec<Ray>,
    pub cones: Vec<[usize; 3]>,
    pub orientation: Orientation,
}

pub fn det3(a: &Ray, b: &Ray, c: &Ray) -> i128 {
    let (a, b, c) = (a.map(i128::from), b.map(i128::from), c.map(i128::from));
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn cross(a: &Ray, b: &Ray) -> Ray {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: &Ray, b: &Ray) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn is_primitive(r: &Ray) -> bool {
    r[0].gcd(&r[1]).gcd(&r[2]) == 1
}

pub fn sorted3(c: [usize; 3]) -> [usize; 3] {
    let mut c = c;
    c.sort_unstable();
    c
}

/// Rows of the inverse of the unimodular matrix with columns `a, b, c`:
/// row `k` pairs to 1 with the `k`-th column and 0 with the others.
pub fn dual_frame(a: &Ray, b: &Ray, c: &Ray) -> [Ray; 3] {
    let d = det3(a, b, c);
    assert!(d == 1 || d == -1, "frame is not unimodular");
    let d = d as i64;
    let r0 = cross(b, c).map(|x| x * d);
    let r1 = cross(c, a).map(|x| x * d);
    let r2 = cross(a, b).map(|x| x * d);
    [r0, r1, r2]
}

impl Fan3 {
    /// `epsilon` such that a cone `(a, b, c)` is positively oriented iff
    /// `epsilon * det(n_a, n_b, n_c) > 0`.
    pub fn epsilon(&self) -> i64 {
        let [a, b, c] = self.orientation.cone;
        let d = det3(&self.rays[a], &self.rays[b], &self.rays[c]);
        self.orientation.sign * d.signum() as i64
    }

    /// Fan with rays sorted lexicographically and cones relabelled and
    /// sorted, for equality tests up to ordering.
    pub fn canonical(&self) -> (Vec<Ray>, Vec<[usize; 3]>) {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by_key(|&i| self.rays[i]);
        let mut pos = vec![0; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i]).collect();
        let mut cones: Vec<[usize; 3]> =
            self.cones.iter().map(|c| sorted3(c.map(|i| pos[i]))).collect();
        cones.sort_unstable();
        (rays, cones)
    }
}

/// Check every fan invariant; the diagnostic names the first failure.
pub fn validate_fan(f: &Fan3) -> Check {
    let n = f.rays.len();
    let fail = |m: String| Err(Diagnostic::new(m));
    for (i, r) in f.rays.iter().enumerate() {
        if *r == [0, 0, 0] {
            return fail(format!("zero ray {i}"));
        }
        if !is_primitive(r) {
            return fail(format!("non-primitive ray {i} {r:?}"));
        }
    }
    let mut seen = HashMap::new();
    for (i, r) in f.rays.iter().enumerate() {
        if let Some(j) = seen.insert(*r, i) {
            return fail(format!("duplicate ray {j} and {i}"));
        }
    }
    let mut cone_set = BTreeSet::new();
    for (ci, c) in f.cones.iter().enumerate() {
        if c.iter().any(|&i| i >= n) {
            return fail(format!("cone {ci} index out of range"));
        }
        if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
            return fail(format!("cone {ci} repeats a ray"));
        }
        if !cone_set.insert(sorted3(*c)) {
            return fail(format!("duplicate cone {ci}"));
        }
        let d = det3(&f.rays[c[0]], &f.rays[c[1]], &f.rays[c[2]]);
        if d.abs() != 1 {
            return fail(format!("cone not unimodular: cone {ci} {c:?} has determinant {d}"));
        }
    }
    let mut walls: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for c in &cone_set {
        for (a, b) in [(c[0], c[1]), (c[0], c[2]), (c[1], c[2])] {
            *walls.entry((a, b)).or_default() += 1;
        }
    }
    for (&(a, b), &k) in &walls {
        if k == 1 {
            return fail(format!("wall with one incident cone: rays {a}, {b}"));
        }
        if k > 2 {
            return fail(format!("wall with {k} incident cones: rays {a}, {b}"));
        }
    }
    let mut used = vec![false; n];
    for c in &cone_set {
        for &i in c {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|&u| !u) {
        return fail(format!("ray in no cone: {i}"));
    }
    let o = &f.orientation;
    if o.sign != 1 && o.sign != -1 {
        return fail(format!("orientation sign must be 1 or -1, got {}", o.sign));
    }
    if o.cone.iter().any(|&i| i >= n) || !cone_set.contains(&sorted3(o.cone)) {
        return fail(format!("orientation reference {:?} is not a cone", o.cone));
    }
    // Geometric orientation: each directed edge exactly once.
    let mut directed = BTreeSet::new();
    for c in &cone_set {
        let t = positive_order(f, *c);
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if !directed.insert((a, b)) {
                return fail(format!("cones overlap along wall {a}, {b}"));
            }
        }
    }
    for v in 0..n {
        let succ: BTreeMap<usize, usize> = cone_set
            .iter()
            .filter(|c| c.contains(&v))
            .map(|c| {
                let t = positive_order(f, *c);
                let k = t.iter().position(|&x| x == v).unwrap();
                (t[(k + 1) % 3], t[(k + 2) % 3])
            })
            .collect();
        let start = *succ.keys().next().unwrap();
        let mut cur = start;
        let mut len = 0;
        loop {
            match succ.get(&cur) {
                Some(&nx) => cur = nx,
                None => return fail(format!("vertex link not a cycle at ray {v}")),
            }
            len += 1;
            if cur == start || len > succ.len() {
                break;
            }
        }
        if cur != start || len != succ.len() {
            return fail(format!("vertex link not a cycle at ray {v}"));
        }
    }
    let euler = n as i64 - walls.len() as i64 + cone_set.len() as i64;
    if euler != 2 {
        return fail(format!("dual complex has Euler characteristic {euler}, expected 2"));
    }
    match covering_degree(f, &cone_set) {
        1 => Ok(()),
        k => fail(format!("fan covers a generic point {k} times, expected once")),
    }
}

/// The cone's rays ordered so that their determinant is positive.
pub(crate) fn positive_order(f: &Fan3, c: [usize; 3]) -> [usize; 3] {
    if det3(&f.rays[c[0]], &f.rays[c[1]], &f.rays[c[2]]) > 0 {
        c
    } else {
        [c[0], c[2], c[1]]
    }
}

fn covering_degree(f: &Fan3, cones: &BTreeSet<[usize; 3]>) -> usize {
    // Points with large, distinct coordinates avoid every wall plane of a
    // small fan; retry on the rare degenerate hit.
    let probes: [Ray; 4] = [
        [1_000_003, 1_009, 17],
        [-7_919, 104_729, 1_299_709],
        [15_485_863, -32_452_843, 49_979_687],
        [3, -2_750_159, 86_028_121],
    ];
    'probe: for x in probes {
        let mut count = 0;
        for c in cones {
            let (a, b, cc) = (&f.rays[c[0]], &f.rays[c[1]], &f.rays[c[2]]);
            let d = det3(a, b, cc);
            let coords = [det3(&x, b, cc), det3(a, &x, cc), det3(a, b, &x)];
            if coords.iter().any(|&t| t == 0) {
                continue 'probe;
            }
            if coords.iter().all(|&t| t.signum() == d.signum()) {
                count += 1;
            }
        }
        return count;
    }
    0
}
