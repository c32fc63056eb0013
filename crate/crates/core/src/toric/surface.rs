//! Star surfaces: the toric boundary component `D_v` as a complete fan in
//! `N / <n_v>`.

use serde::Serialize;

use super::fan::{dual_frame, dot, Fan3};

/// Smooth complete 2D fan with its rays in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan2 {
    /// Rays in the quotient lattice, positively ordered.
    pub rays: Vec<[i64; 2]>,
    /// Ray index in the ambient fan for each position (the neighbor `w`).
    pub neighbors: Vec<usize>,
    /// Self-intersection of each boundary curve.
    pub self_intersections: Vec<i64>,
}

impl Fan2 {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Picard rank `n - 2`.
    pub fn pic_rank(&self) -> usize {
        self.rays.len() - 2
    }

    pub fn position(&self, w: usize) -> Option<usize> {
        self.neighbors.iter().position(|&x| x == w)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.len();
        i != j && ((i + 1) % n == j || (j + 1) % n == i)
    }

    /// Intersection number of boundary curves at positions `i`, `j`.
    pub fn curve_product(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.self_intersections[i]
        } else {
            i64::from(self.adjacent(i, j))
        }
    }

    /// Class of the boundary curve at position `i` in the toric basis
    /// (curves at positions `2..n`; positions 0 and 1 are the frame).
    pub fn curve_class(&self, i: usize) -> Vec<i64> {
        let r = self.pic_rank();
        let mut v = vec![0i64; r];
        if i >= 2 {
            v[i - 2] = 1;
        } else {
            // Frame rays are (1,0) and (0,1): D_i = -sum_{k>=2} u_k[i] D_k.
            for k in 2..self.len() {
                v[k - 2] = -self.rays[k][i];
            }
        }
        v
    }

    /// Gram matrix of the toric basis.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        (2..n).map(|i| (2..n).map(|j| self.curve_product(i, j)).collect()).collect()
    }
}

/// The fan of `D_v`, with its cyclic order matching the link of `v`.
pub fn star_surface(f: &Fan3, link: &[usize], v: usize) -> Fan2 {
    let (a, b) = (link[0], link[1]);
    let m = dual_frame(&f.rays[v], &f.rays[a], &f.rays[b]);
    let rays: Vec<[i64; 2]> = link
        .iter()
        .map(|&w| [dot(&m[1], &f.rays[w]), dot(&m[2], &f.rays[w])])
        .collect();
    let n = rays.len();
    let mut self_intersections = Vec::with_capacity(n);
    for i in 0..n {
        let (p, c, q) = (rays[(i + n - 1) % n], rays[i], rays[(i + 1) % n]);
        let s = [p[0] + q[0], p[1] + q[1]];
        // s = -k c with c primitive.
        let k = if c[0] != 0 { -s[0] / c[0] } else { -s[1] / c[1] };
        debug_assert_eq!([-k * c[0], -k * c[1]], s);
        self_intersections.push(k);
    }
    Fan2 { rays, neighbors: link.to_vec(), self_intersections }
}
