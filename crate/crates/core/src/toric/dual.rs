use std::collections::BTreeMap;

use serde::Serialize;

use super::fan::{det3, sorted3, Fan3};
use crate::error::{Error, Result};

/// An oriented edge `tail -> head` of the dual complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.tail || v == self.head
    }
}

/// The dual complex of the toric boundary: vertices are rays, edges are
/// walls, triangles are maximal cones. Triangles are stored positively
/// oriented for the global orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    n_vertices: usize,
    edges: Vec<Edge>,
    edge_index: BTreeMap<(usize, usize), usize>,
    triangles: Vec<[usize; 3]>,
    triangle_index: BTreeMap<[usize; 3], usize>,
    /// Neighbors of each vertex in positive cyclic order, starting at the
    /// smallest index.
    links: Vec<Vec<usize>>,
}

impl DualComplex {
    /// Build from a validated fan. Edges default to `min -> max`; entries in
    /// `orientations` override individual edges.
    pub fn new(f: &Fan3, orientations: &[(usize, usize)]) -> Result<DualComplex> {
        let eps = f.epsilon();
        let n = f.rays.len();
        let mut triangles = Vec::new();
        for c in &f.cones {
            let d = det3(&f.rays[c[0]], &f.rays[c[1]], &f.rays[c[2]]) as i64;
            triangles.push(if d * eps > 0 { *c } else { [c[0], c[2], c[1]] });
        }
        let mut keys = BTreeMap::new();
        for t in &triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                keys.insert((a.min(b), a.max(b)), ());
            }
        }
        let mut edges: Vec<Edge> =
            keys.keys().map(|&(a, b)| Edge { tail: a, head: b }).collect();
        let edge_index: BTreeMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, e)| (e.key(), i)).collect();
        for &(t, h) in orientations {
            let k = (t.min(h), t.max(h));
            let i = *edge_index.get(&k).ok_or_else(|| {
                Error::InvalidPair(format!("edge orientation {t}->{h} is not an edge"))
            })?;
            edges[i] = Edge { tail: t, head: h };
        }
        let triangle_index =
            triangles.iter().enumerate().map(|(i, t)| (sorted3(*t), i)).collect();
        let mut links = Vec::with_capacity(n);
        for v in 0..n {
            let succ: BTreeMap<usize, usize> = triangles
                .iter()
                .filter(|t| t.contains(&v))
                .map(|t| {
                    let k = t.iter().position(|&x| x == v).unwrap();
                    (t[(k + 1) % 3], t[(k + 2) % 3])
                })
                .collect();
            let start = *succ.keys().next().ok_or_else(|| {
                Error::InvalidFan(format!("ray {v} lies in no cone"))
            })?;
            let mut link = vec![start];
            let mut cur = succ[&start];
            while cur != start {
                link.push(cur);
                cur = succ[&cur];
            }
            links.push(link);
        }
        Ok(DualComplex { n_vertices: n, edges, edge_index, triangles, triangle_index, links })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn triangle_id(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.triangle_index.get(&sorted3([a, b, c])).copied()
    }

    pub fn link(&self, v: usize) -> &[usize] {
        &self.links[v]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// The vertex completing the positively oriented triangle through
    /// `a -> b`, i.e. the left side of that directed edge.
    pub fn left_apex(&self, a: usize, b: usize) -> usize {
        let link = &self.links[a];
        let k = link.iter().position(|&x| x == b).expect("not an edge");
        link[(k + 1) % link.len()]
    }

    /// Apex of the triangle on the right of `a -> b`.
    pub fn right_apex(&self, a: usize, b: usize) -> usize {
        self.left_apex(b, a)
    }

    /// Edge ids of the boundary cycle of component `v`, in link order.
    pub fn cycle_edges(&self, v: usize) -> Vec<usize> {
        self.links[v].iter().map(|&w| self.edge_id(v, w).unwrap()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn p3_complex() {
        let f = fixtures::p3_fan();
        let d = DualComplex::new(&f, &[]).unwrap();
        assert_eq!(d.edges().len(), 6);
        assert_eq!(d.triangles().len(), 4);
        assert_eq!(d.euler_characteristic(), 2);
        for v in 0..4 {
            assert_eq!(d.link(v).len(), 3);
        }
    }

    #[test]
    fn left_and_right_differ() {
        let d = DualComplex::new(&fixtures::p1p1p1_fan(), &[]).unwrap();
        for e in d.edges() {
            let l = d.left_apex(e.tail, e.head);
            let r = d.right_apex(e.tail, e.head);
            assert_ne!(l, r);
            assert!(d.triangle_id(e.tail, e.head, l).is_some());
            assert!(d.triangle_id(e.tail, e.head, r).is_some());
        }
    }

    #[test]
    fn orientation_override() {
        let f = fixtures::p3_fan();
        let d = DualComplex::new(&f, &[(3, 0)]).unwrap();
        let e = d.edge(d.edge_id(0, 3).unwrap());
        assert_eq!((e.tail, e.head), (3, 0));
        assert!(DualComplex::new(&f, &[(0, 0)]).is_err());
    }

    #[test]
    fn flipping_global_orientation_reverses_links() {
        let f = fixtures::p1p1p1_fan();
        let mut g = f.clone();
        g.orientation.sign = -g.orientation.sign;
        let (a, b) = (DualComplex::new(&f, &[]).unwrap(), DualComplex::new(&g, &[]).unwrap());
        for v in 0..f.rays.len() {
            let mut rev = b.link(v).to_vec();
            rev[1..].reverse();
            assert_eq!(a.link(v), &rev[..]);
        }
    }
}
