//! Coordinates on the interior of a 1-stratum `D_e`.
//!
//! For `e = t -> h` the edge chart is the character `eps * (n_h x n_t)`
//! restricted to `D_e`: it vanishes at the 0-stratum on the right of `t -> h`
//! and has its pole at the one on the left. The head component uses the
//! edge chart, the tail component its inverse, so each component runs along
//! its boundary cycle from `infinity` to `0` on every edge. The marker `m_e`
//! has coordinate `-1` in both.

use serde::Serialize;

use super::dual::Edge;
use super::fan::{cross, Fan3, Ray};
use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeChart {
    pub edge: Edge,
    /// Apex of the triangle where the coordinate is 0.
    pub zero_at: usize,
    /// Apex of the triangle where the coordinate is infinite.
    pub infinity_at: usize,
    /// Character of the torus whose restriction is the coordinate.
    pub character: Ray,
}

impl EdgeChart {
    /// Chart of the same stratum with the orientation reversed.
    pub fn reversed(&self) -> EdgeChart {
        EdgeChart {
            edge: Edge { tail: self.edge.head, head: self.edge.tail },
            zero_at: self.infinity_at,
            infinity_at: self.zero_at,
            character: self.character.map(|x| -x),
        }
    }

    /// Sign relating the chart seen from component `v` to this chart.
    pub fn sign_for(&self, v: usize) -> i64 {
        if v == self.edge.head {
            1
        } else {
            -1
        }
    }
}

/// Change of chart: a point with coordinate `z` has coordinate `z^{-1}` in
/// the reversed chart. Stratum points are rejected.
pub fn reverse_coordinate(z: &GaussianRational) -> Result<GaussianRational> {
    if z.is_zero() {
        return Err(Error::StratumPoint(z.to_string()));
    }
    z.inv()
}

/// Coordinate of the marker in any chart.
pub fn marker() -> GaussianRational {
    GaussianRational::minus_one()
}

pub fn edge_coordinate_chart(f: &Fan3, eps: i64, edge: Edge, right: usize, left: usize) -> EdgeChart {
    let c = cross(&f.rays[edge.head], &f.rays[edge.tail]);
    EdgeChart { edge, zero_at: right, infinity_at: left, character: c.map(|x| eps * x) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::toric::fan::dot;
    use crate::toric::SmoothFan;

    #[test]
    fn reversal_inverts() {
        let l = GaussianRational::from_parts((2, 3), (-1, 5));
        let r = reverse_coordinate(&l).unwrap();
        assert_eq!(&r * &l, GaussianRational::one());
        assert_eq!(reverse_coordinate(&r).unwrap(), l);
        assert_eq!(reverse_coordinate(&GaussianRational::one()).unwrap(), GaussianRational::one());
        assert!(reverse_coordinate(&GaussianRational::zero()).is_err());
    }

    #[test]
    fn marker_is_fixed() {
        assert_eq!(reverse_coordinate(&marker()).unwrap(), marker());
    }

    #[test]
    fn zero_and_pole_follow_character() {
        for (_, fan) in fixtures::toric_fans() {
            let f = SmoothFan::new(fan, &[]).unwrap();
            for id in 0..f.dual().edges().len() {
                let ch = f.edge_chart(id);
                let n = &f.fan().rays;
                assert!(dot(&ch.character, &n[ch.zero_at]) > 0);
                assert!(dot(&ch.character, &n[ch.infinity_at]) < 0);
                assert_eq!(dot(&ch.character, &n[ch.edge.tail]), 0);
                let back = ch.reversed().reversed();
                assert_eq!(back, ch);
            }
        }
    }
}
