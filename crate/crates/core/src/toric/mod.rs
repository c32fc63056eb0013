//! Smooth complete fans in rank 3, their dual complexes, intersection
//! theory and boundary surfaces.

mod chart;
mod dual;
mod fan;
mod intersection;
mod subdivide;
mod surface;

pub use chart::{edge_coordinate_chart, marker, reverse_coordinate, EdgeChart};
pub use dual::{DualComplex, Edge};
pub use fan::{cross, det3, dot, dual_frame, is_primitive, sorted3, validate_fan, Fan3, Orientation, Ray};
pub use intersection::{ray_tensor, RayTensor, ToricPicBasis};
pub use subdivide::star_subdivide;
pub use surface::{star_surface, Fan2};


use crate::error::{Error, Result};

/// A validated fan together with everything derived from it.
#[derive(Clone, Debug)]
pub struct SmoothFan {
    fan: Fan3,
    eps: i64,
    dual: DualComplex,
    tensor: RayTensor,
    pic: ToricPicBasis,
    stars: Vec<Fan2>,
}

impl SmoothFan {
    pub fn new(fan: Fan3, edge_orientations: &[(usize, usize)]) -> Result<SmoothFan> {
        validate_fan(&fan).map_err(|d| Error::InvalidFan(d.0))?;
        let dual = DualComplex::new(&fan, edge_orientations)?;
        let tensor = ray_tensor(&fan);
        let pic = ToricPicBasis::new(&fan);
        let stars = (0..fan.rays.len()).map(|v| star_surface(&fan, dual.link(v), v)).collect();
        let eps = fan.epsilon();
        Ok(SmoothFan { fan, eps, dual, tensor, pic, stars })
    }

    pub fn fan(&self) -> &Fan3 {
        &self.fan
    }

    pub fn epsilon(&self) -> i64 {
        self.eps
    }

    pub fn dual(&self) -> &DualComplex {
        &self.dual
    }

    pub fn n_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn tensor(&self) -> &RayTensor {
        &self.tensor
    }

    pub fn ray_triple(&self, i: usize, j: usize, k: usize) -> i64 {
        self.tensor.get(i, j, k)
    }

    pub fn pic(&self) -> &ToricPicBasis {
        &self.pic
    }

    pub fn pic_rank(&self) -> usize {
        self.pic.rank()
    }

    pub fn ray_class(&self, i: usize) -> &[i64] {
        &self.pic.ray_classes[i]
    }

    /// Triple product of classes in the Picard basis.
    pub fn cubic(&self, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
        let r = &self.pic.basis_rays;
        let mut s = 0;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                for (k, &z) in c.iter().enumerate() {
                    if z != 0 {
                        s += x * y * z * self.tensor.get(r[i], r[j], r[k]);
                    }
                }
            }
        }
        s
    }

    pub fn star(&self, v: usize) -> &Fan2 {
        &self.stars[v]
    }

    pub fn edge_chart(&self, id: usize) -> EdgeChart {
        let e = self.dual.edge(id);
        let right = self.dual.right_apex(e.tail, e.head);
        let left = self.dual.left_apex(e.tail, e.head);
        edge_coordinate_chart(&self.fan, self.eps, e, right, left)
    }

    /// Integer coefficients `(a, b)` of the wall relation
    /// `n_x + n_y + a n_i + b n_j = 0` for the wall `{i, j}`.
    pub fn wall_relation(&self, i: usize, j: usize) -> Option<(usize, usize, i64, i64)> {
        let x = self.dual.left_apex(i, j);
        let y = self.dual.right_apex(i, j);
        self.dual.edge_id(i, j)?;
        let n = &self.fan.rays;
        let m = dual_frame(&n[i], &n[j], &n[x]);
        let s: Ray = [n[x][0] + n[y][0], n[x][1] + n[y][1], n[x][2] + n[y][2]];
        // s lies in span(n_i, n_j) by smoothness of both cones.
        let (a, b) = (-dot(&m[0], &s), -dot(&m[1], &s));
        Some((x, y, a, b))
    }
}
