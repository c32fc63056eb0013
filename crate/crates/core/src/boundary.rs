//! Boundary components `D_v` as Looijenga pairs: a toric surface blown up
//! at interior points of its boundary cycle.
//!
//! Every coordinate stored here is in the edge chart of the stratum it lies
//! on; [`LooijengaComponent::to_own_chart`] converts to the component's
//! chart, in which the boundary cycle is traversed from `infinity` to `0` on
//! every edge.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Check, Diagnostic, Error, Result};
use crate::exactnum::GaussianRational;
use crate::toric::{marker, Fan2};

/// Exceptional curve of an interior blowup point on the edge `v w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exceptional {
    pub neighbor: usize,
    /// Coordinate in the edge chart.
    pub coord: GaussianRational,
    /// Index of the originating blowup step.
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LooijengaComponent {
    pub vertex: usize,
    pub base: Fan2,
    /// Edge id of each link position.
    pub edge_ids: Vec<usize>,
    /// `1` where the component's chart is the edge chart, `-1` where it is
    /// the inverse.
    pub chart_signs: Vec<i64>,
    pub excs: Vec<Exceptional>,
}

/// Points on the boundary cycle with multiplicities, per link position, in
/// the component's own charts.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycleDivisor {
    pub terms: Vec<BTreeMap<GaussianRational, i64>>,
}

impl CycleDivisor {
    pub fn degree(&self, pos: usize) -> i64 {
        self.terms[pos].values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|t| t.values().all(|&a| a == 0))
    }

    fn add(&mut self, pos: usize, q: GaussianRational, a: i64) {
        if a == 0 {
            return;
        }
        let e = self.terms[pos].entry(q.clone()).or_insert(0);
        *e += a;
        if *e == 0 {
            self.terms[pos].remove(&q);
        }
    }
}

/// A marking: one interior point per edge of the dual complex, given in the
/// edge chart and indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Marking {
    pub points: Vec<GaussianRational>,
}

impl Marking {
    /// The markers `m_e = -1` on every edge.
    pub fn markers(n_edges: usize) -> Marking {
        Marking { points: vec![marker(); n_edges] }
    }

    pub fn check(&self, n_edges: usize) -> Result<()> {
        if self.points.len() != n_edges {
            return Err(Error::InvalidPair(format!(
                "marking has {} points for {} edges",
                self.points.len(),
                n_edges
            )));
        }
        if let Some(i) = self.points.iter().position(GaussianRational::is_zero) {
            return Err(Error::StratumPoint(format!("marking point on edge {i}")));
        }
        Ok(())
    }
}

/// `prod q_i^{a_i} / p^{d}` for `d = sum a_i`: the ratio `f(0) / f(infinity)`
/// of `f = prod (z - q_i)^{a_i} / (z - p)^d`.
pub fn lambda_factor(divisor: &BTreeMap<GaussianRational, i64>, p: &GaussianRational) -> Result<GaussianRational> {
    if p.is_zero() {
        return Err(Error::StratumPoint(format!("marking {p}")));
    }
    let mut acc = GaussianRational::one();
    let mut d = 0;
    for (q, &a) in divisor {
        if q.is_zero() {
            return Err(Error::StratumPoint(q.to_string()));
        }
        acc = &acc * &q.pow(a)?;
        d += a;
    }
    Ok(&acc * &p.pow(-d)?)
}

impl LooijengaComponent {
    pub fn n_edges(&self) -> usize {
        self.base.len()
    }

    pub fn toric_rank(&self) -> usize {
        self.base.pic_rank()
    }

    pub fn rank(&self) -> usize {
        self.toric_rank() + self.excs.len()
    }

    pub fn position_of(&self, w: usize) -> Option<usize> {
        self.base.position(w)
    }

    /// Convert an edge-chart coordinate on link position `pos` to the
    /// component's chart.
    pub fn to_own_chart(&self, pos: usize, z: &GaussianRational) -> Result<GaussianRational> {
        if self.chart_signs[pos] == 1 {
            Ok(z.clone())
        } else {
            z.inv().map_err(|_| Error::StratumPoint(z.to_string()))
        }
    }

    /// Exceptional indices on the edge toward neighbor `w`.
    pub fn excs_on(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.excs.iter().enumerate().filter(move |(_, e)| e.neighbor == w).map(|(i, _)| i)
    }

    /// The basis vector of exceptional `j`.
    pub fn exc_class(&self, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[self.toric_rank() + j] = 1;
        v
    }

    /// Pullback of a toric class given in the toric basis.
    pub fn pullback(&self, toric: &[i64]) -> Vec<i64> {
        let mut v = toric.to_vec();
        v.resize(self.rank(), 0);
        v
    }

    /// Class of the strict transform of the boundary curve at `pos`.
    pub fn boundary_class(&self, pos: usize) -> Vec<i64> {
        let mut v = self.pullback(&self.base.curve_class(pos));
        let w = self.base.neighbors[pos];
        for j in self.excs_on(w) {
            v[self.toric_rank() + j] -= 1;
        }
        v
    }

    pub fn canonical_class(&self) -> Vec<i64> {
        let mut k = vec![0; self.rank()];
        for pos in 0..self.n_edges() {
            for (x, y) in k.iter_mut().zip(self.boundary_class(pos)) {
                *x -= y;
            }
        }
        k
    }

    pub fn intersect(&self, a: &[i64], b: &[i64]) -> i64 {
        let t = self.toric_rank();
        let n = self.base.len();
        let mut s = 0;
        for i in 0..t {
            if a[i] == 0 {
                continue;
            }
            for j in 0..t {
                s += a[i] * b[j] * self.base.curve_product(i + 2, j + 2);
            }
        }
        debug_assert_eq!(t + 2, n);
        for j in t..self.rank() {
            s -= a[j] * b[j];
        }
        s
    }

    /// Restriction of a class to the boundary cycle: toric classes go to
    /// `(L . D_e) m_e`, each exceptional to its point.
    pub fn restrict_to_cycle(&self, l: &[i64]) -> Result<CycleDivisor> {
        let mut d = CycleDivisor { terms: vec![BTreeMap::new(); self.n_edges()] };
        let t = self.toric_rank();
        let toric: Vec<i64> = l[..t].to_vec();
        for pos in 0..self.n_edges() {
            let curve = self.base.curve_class(pos);
            let deg: i64 = (0..t)
                .map(|i| (0..t).map(|j| toric[i] * curve[j] * self.base.curve_product(i + 2, j + 2)).sum::<i64>())
                .sum();
            d.add(pos, marker(), deg);
        }
        for (j, e) in self.excs.iter().enumerate() {
            let a = l[t + j];
            if a != 0 {
                let pos = self.position_of(e.neighbor).expect("exceptional on a boundary edge");
                d.add(pos, self.to_own_chart(pos, &e.coord)?, a);
            }
        }
        Ok(d)
    }

    /// `phi_{D_v, p}(L)`: product over the boundary edges of the lambda
    /// factors, in the component's charts. `marking` is indexed by edge id.
    pub fn marked_period(&self, marking: &Marking, l: &[i64]) -> Result<GaussianRational> {
        let d = self.restrict_to_cycle(l)?;
        let mut acc = GaussianRational::one();
        for pos in 0..self.n_edges() {
            let p = self.to_own_chart(pos, &marking.points[self.edge_ids[pos]])?;
            acc = &acc * &lambda_factor(&d.terms[pos], &p)?;
        }
        Ok(acc)
    }

    /// Smooth rational curve test: `C^2 + K.C = -2` and `C . D_e >= 0`.
    pub fn adjunction_check(&self, c: &[i64]) -> Check {
        if c.len() != self.rank() {
            return Err(Diagnostic::new(format!(
                "curve class has {} entries, component {} has rank {}",
                c.len(),
                self.vertex,
                self.rank()
            )));
        }
        let c2 = self.intersect(c, c);
        let kc = self.intersect(&self.canonical_class(), c);
        if c2 + kc != -2 {
            return Err(Diagnostic::new(format!(
                "adjunction failed: C^2 + K.C = {c2} + {kc} = {} != -2",
                c2 + kc
            )));
        }
        for pos in 0..self.n_edges() {
            let d = self.intersect(c, &self.boundary_class(pos));
            if d < 0 {
                return Err(Diagnostic::new(format!(
                    "curve has negative degree {d} on edge toward {}",
                    self.base.neighbors[pos]
                )));
            }
        }
        Ok(())
    }
}

/// Stand-alone wrappers matching the operation names.
pub fn restrict_to_cycle(c: &LooijengaComponent, l: &[i64]) -> Result<CycleDivisor> {
    c.restrict_to_cycle(l)
}

pub fn component_marked_period(c: &LooijengaComponent, m: &Marking, l: &[i64]) -> Result<GaussianRational> {
    c.marked_period(m, l)
}

pub fn adjunction_check(c: &LooijengaComponent, class: &[i64]) -> Check {
    c.adjunction_check(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::toric::SmoothFan;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn plane(excs: Vec<Exceptional>) -> LooijengaComponent {
        let f = SmoothFan::new(fixtures::p3_fan(), &[]).unwrap();
        let v = 3;
        let edge_ids = f.dual().cycle_edges(v);
        let chart_signs = edge_ids.iter().map(|&e| f.edge_chart(e).sign_for(v)).collect();
        LooijengaComponent { vertex: v, base: f.star(v).clone(), edge_ids, chart_signs, excs }
    }

    #[test]
    fn line_restricts_to_markers() {
        let c = plane(vec![]);
        let d = c.restrict_to_cycle(&[1]).unwrap();
        for pos in 0..3 {
            assert_eq!(d.terms[pos].get(&marker()), Some(&1));
            assert_eq!(d.degree(pos), 1);
        }
        assert!(c.restrict_to_cycle(&[0]).unwrap().is_empty());
    }

    #[test]
    fn exceptional_restricts_to_point() {
        let c = plane(vec![Exceptional { neighbor: 0, coord: g("5"), step: 0 }]);
        let d = c.restrict_to_cycle(&[0, 1]).unwrap();
        let pos = c.position_of(0).unwrap();
        // Component 3 is the head of every edge of P^3 by default.
        assert_eq!(d.terms[pos].get(&g("5")), Some(&1));
        assert_eq!(d.degree(pos), 1);
    }

    #[test]
    fn lambda_factor_cases() {
        let mut d = BTreeMap::new();
        d.insert(g("3"), 1);
        d.insert(g("7/2"), -1);
        assert_eq!(lambda_factor(&d, &g("11")).unwrap(), g("6/7"));
        let mut d = BTreeMap::new();
        d.insert(g("2+1*i"), 3);
        assert_eq!(lambda_factor(&d, &g("2+1*i")).unwrap(), GaussianRational::one());
        let mut d = BTreeMap::new();
        d.insert(marker(), 1);
        assert_eq!(lambda_factor(&d, &marker()).unwrap(), GaussianRational::one());
        let mut d = BTreeMap::new();
        d.insert(GaussianRational::zero(), 1);
        assert!(lambda_factor(&d, &g("1")).is_err());
    }

    #[test]
    fn marker_marking_trivial_on_toric() {
        let c = plane(vec![Exceptional { neighbor: 1, coord: g("2"), step: 0 }]);
        let m = Marking::markers(6);
        assert_eq!(c.marked_period(&m, &[1, 0]).unwrap(), GaussianRational::one());
        assert_eq!(c.marked_period(&m, &[0, 0]).unwrap(), GaussianRational::one());
    }

    #[test]
    fn exceptional_period_is_ratio() {
        let c = plane(vec![Exceptional { neighbor: 1, coord: g("2"), step: 0 }]);
        let mut m = Marking::markers(6);
        let e = c.edge_ids[c.position_of(1).unwrap()];
        m.points[e] = g("7");
        assert_eq!(c.marked_period(&m, &[0, 1]).unwrap(), g("2/7"));
    }

    #[test]
    fn adjunction() {
        let c = plane(vec![]);
        assert_eq!(c.adjunction_check(&[2]), Ok(()));
        assert_eq!(c.adjunction_check(&[1]), Ok(()));
        assert!(c.adjunction_check(&[3]).unwrap_err().0.contains("adjunction failed"));
        assert!(c.adjunction_check(&[0]).is_err());
    }

    #[test]
    fn boundary_degrees_match_intersections() {
        let c = plane(vec![
            Exceptional { neighbor: 0, coord: g("2"), step: 0 },
            Exceptional { neighbor: 0, coord: g("3"), step: 1 },
            Exceptional { neighbor: 2, coord: g("1+1*i"), step: 2 },
        ]);
        for b in 0..c.rank() {
            let mut l = vec![0; c.rank()];
            l[b] = 1;
            let d = c.restrict_to_cycle(&l).unwrap();
            for pos in 0..3 {
                assert_eq!(d.degree(pos), c.intersect(&l, &c.boundary_class(pos)));
            }
        }
    }
}
