//! Log Calabi-Yau pairs given as interior blowup programs over a smooth
//! complete toric threefold.
//!
//! The threefold Picard basis is the toric basis followed by the total
//! transforms `E_1, ..., E_r` of the exceptional divisors, in step order.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::boundary::{Exceptional, LooijengaComponent};
use crate::error::{Check, Diagnostic, Error, Result};
use crate::exactnum::{image_basis, GaussianRational, ImageBasis, IntMatrix};
use crate::toric::{marker, Fan3, SmoothFan};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlowupStep {
    /// Blow up the point with edge-chart coordinate `coord` on the stratum
    /// `D_v ∩ D_w`.
    Point { edge: (usize, usize), coord: GaussianRational },
    /// Blow up a smooth rational curve in `D_v` with the given class in the
    /// current basis of `Pic(D_v)`, meeting each edge toward `w` at the
    /// listed edge-chart coordinates.
    Curve { component: usize, class: Vec<i64>, points: Vec<(usize, Vec<GaussianRational>)> },
}

impl BlowupStep {
    pub fn is_point(&self) -> bool {
        matches!(self, BlowupStep::Point { .. })
    }
}

/// Raw pair data: toric model, edge orientations and blowup program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairSpec {
    pub fan: Fan3,
    pub edge_orientations: Vec<(usize, usize)>,
    pub steps: Vec<BlowupStep>,
}

impl PairSpec {
    pub fn toric(fan: Fan3) -> PairSpec {
        PairSpec { fan, edge_orientations: Vec::new(), steps: Vec::new() }
    }

    pub fn with_steps(fan: Fan3, steps: Vec<BlowupStep>) -> PairSpec {
        PairSpec { fan, edge_orientations: Vec::new(), steps }
    }
}

/// Which lattice a [`PicVector`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisTag {
    Threefold,
    Component(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PicVector {
    pub tag: BasisTag,
    pub coords: Vec<i64>,
}

impl PicVector {
    pub fn threefold(coords: Vec<i64>) -> PicVector {
        PicVector { tag: BasisTag::Threefold, coords }
    }
}

/// Exceptional classes created by one step, per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub touched: Vec<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug)]
pub struct LogCY3Pair {
    spec: PairSpec,
    fan: SmoothFan,
    components: Vec<LooijengaComponent>,
    rank: usize,
    tensor: Vec<i64>,
    /// `res[v][j]`: restriction of basis class `j` to `D_v`.
    res: Vec<Vec<Vec<i64>>>,
    boundary: Vec<Vec<i64>>,
    records: Vec<StepRecord>,
    warnings: Vec<String>,
}

pub fn validate_pair(spec: &PairSpec) -> Check {
    replay(spec).map(|_| ())
}

fn diag<T>(msg: String) -> std::result::Result<T, Diagnostic> {
    Err(Diagnostic::new(msg))
}

fn replay(spec: &PairSpec) -> std::result::Result<LogCY3Pair, Diagnostic> {
    let fan = SmoothFan::new(spec.fan.clone(), &spec.edge_orientations).map_err(|e| match e {
        Error::InvalidFan(m) => Diagnostic::new(m),
        other => Diagnostic::new(other.to_string()),
    })?;
    let dual = fan.dual().clone();
    let n = fan.n_rays();
    let mut components: Vec<LooijengaComponent> = (0..n)
        .map(|v| {
            let edge_ids = dual.cycle_edges(v);
            let chart_signs = edge_ids.iter().map(|&e| fan.edge_chart(e).sign_for(v)).collect();
            LooijengaComponent { vertex: v, base: fan.star(v).clone(), edge_ids, chart_signs, excs: Vec::new() }
        })
        .collect();

    let rt = fan.pic_rank();
    let mut rank = rt;
    let mut tensor = vec![0i64; rt * rt * rt];
    let basis_rays = fan.pic().basis_rays.clone();
    for i in 0..rt {
        for j in 0..rt {
            for k in 0..rt {
                tensor[(i * rt + j) * rt + k] = fan.ray_triple(basis_rays[i], basis_rays[j], basis_rays[k]);
            }
        }
    }
    let res_ray = |u: usize, x: usize| -> Vec<i64> {
        let s = fan.star(u);
        let mut out = vec![0i64; s.pic_rank()];
        if x == u {
            // D_u|_{D_u} = -sum <m, n_w> D_uw with <m, n_u> = 1.
            let (a, b) = (s.neighbors[0], s.neighbors[1]);
            let rays = &fan.fan().rays;
            let m = crate::toric::dual_frame(&rays[u], &rays[a], &rays[b])[0];
            for (pos, &w) in s.neighbors.iter().enumerate() {
                let c = -crate::toric::dot(&m, &rays[w]);
                for (o, y) in out.iter_mut().zip(s.curve_class(pos)) {
                    *o += c * y;
                }
            }
        } else if let Some(pos) = s.position(x) {
            out = s.curve_class(pos);
        }
        out
    };
    let mut res: Vec<Vec<Vec<i64>>> =
        (0..n).map(|u| basis_rays.iter().map(|&x| res_ray(u, x)).collect()).collect();
    let mut boundary: Vec<Vec<i64>> = (0..n).map(|v| fan.ray_class(v).to_vec()).collect();
    let mut used: Vec<BTreeSet<GaussianRational>> = vec![BTreeSet::new(); dual.edges().len()];
    let mut records = Vec::new();
    let mut warnings = Vec::new();

    let check_coord = |used: &BTreeSet<GaussianRational>, eid: usize, q: &GaussianRational, k: usize, warnings: &mut Vec<String>| {
        if q.is_zero() {
            return diag(format!("step {k}: coordinate 0 on edge {eid} is a 0-stratum"));
        }
        if used.contains(q) {
            return diag(format!("step {k}: coordinate {q} already used on edge {eid}"));
        }
        if *q == marker() {
            warnings.push(format!("step {k}: center at the marker -1 on edge {eid}"));
        }
        Ok(())
    };

    for (k, step) in spec.steps.iter().enumerate() {
        let new_rank = rank + 1;
        let mut t2 = vec![0i64; new_rank * new_rank * new_rank];
        for i in 0..rank {
            for j in 0..rank {
                for l in 0..rank {
                    t2[(i * new_rank + j) * new_rank + l] = tensor[(i * rank + j) * rank + l];
                }
            }
        }
        let e = rank;
        let mut set = |i: usize, j: usize, l: usize, v: i64| {
            for (a, b, c) in [(i, j, l), (i, l, j), (j, i, l), (j, l, i), (l, i, j), (l, j, i)] {
                t2[(a * new_rank + b) * new_rank + c] = v;
            }
        };
        let mut touched = Vec::new();
        match step {
            BlowupStep::Point { edge: (v, w), coord } => {
                let (v, w) = (*v, *w);
                let Some(eid) = (v < n && w < n).then(|| dual.edge_id(v, w)).flatten() else {
                    return diag(format!("step {k}: {v}-{w} is not an edge of the dual complex"));
                };
                check_coord(&used[eid], eid, coord, k, &mut warnings)?;
                used[eid].insert(coord.clone());
                set(e, e, e, 1);
                for (a, b) in [(v, w), (w, v)] {
                    components[a].excs.push(Exceptional { neighbor: b, coord: coord.clone(), step: k });
                    touched.push((a, vec![components[a].excs.len() - 1]));
                }
                for u in 0..n {
                    let r = components[u].rank();
                    for row in res[u].iter_mut() {
                        row.resize(r, 0);
                    }
                    let mut new = vec![0i64; r];
                    if u == v || u == w {
                        new[r - 1] = 1;
                    }
                    res[u].push(new);
                    boundary[u].push(if u == v || u == w { -1 } else { 0 });
                }
            }
            BlowupStep::Curve { component: v, class, points } => {
                let v = *v;
                if v >= n {
                    return diag(format!("step {k}: no component {v}"));
                }
                let comp = &components[v];
                if class.len() != comp.rank() {
                    return diag(format!(
                        "step {k}: curve class has {} entries, Pic(D_{v}) has rank {}",
                        class.len(),
                        comp.rank()
                    ));
                }
                comp.adjunction_check(class).map_err(|d| Diagnostic::new(format!("step {k}: {d}")))?;
                for j in 0..comp.excs.len() {
                    let x = comp.intersect(class, &comp.exc_class(j));
                    if x < 0 {
                        return diag(format!("step {k}: curve meets exceptional {j} of D_{v} negatively ({x})"));
                    }
                }
                let mut seen = BTreeSet::new();
                for (w, _) in points {
                    if comp.position_of(*w).is_none() {
                        return diag(format!("step {k}: {w} is not adjacent to component {v}"));
                    }
                    if !seen.insert(*w) {
                        return diag(format!("step {k}: neighbor {w} listed twice"));
                    }
                }
                let mut actual = GaussianRational::one();
                for pos in 0..comp.n_edges() {
                    let w = comp.base.neighbors[pos];
                    let eid = comp.edge_ids[pos];
                    let deg = comp.intersect(class, &comp.boundary_class(pos));
                    let coords: &[GaussianRational] =
                        points.iter().find(|(x, _)| *x == w).map_or(&[], |(_, c)| c.as_slice());
                    if coords.len() as i64 != deg {
                        return diag(format!(
                            "step {k}: curve meets edge {v}-{w} in {} listed points, expected C.D_e = {deg}",
                            coords.len()
                        ));
                    }
                    let mut here = BTreeSet::new();
                    for q in coords {
                        check_coord(&used[eid], eid, q, k, &mut warnings)?;
                        if !here.insert(q.clone()) {
                            return diag(format!("step {k}: coordinate {q} repeated on edge {eid}"));
                        }
                        let own = comp.to_own_chart(pos, q).map_err(|e| Diagnostic::new(e.to_string()))?;
                        actual = &actual * &own;
                    }
                }
                let expected_div = comp.restrict_to_cycle(class).map_err(|e| Diagnostic::new(e.to_string()))?;
                let mut expected = GaussianRational::one();
                for t in &expected_div.terms {
                    for (q, &a) in t {
                        expected = &expected * &q.pow(a).map_err(|e| Diagnostic::new(e.to_string()))?;
                    }
                }
                if actual != expected {
                    return diag(format!(
                        "step {k}: curve class not realizable: boundary points multiply to {actual}, the class requires {expected}"
                    ));
                }
                // Cubic constants: A.E^2 = -(A|_{D_v} . C), E^3 = K_Y.C + 2.
                let comp = components[v].clone();
                for a in 0..rank {
                    set(a, e, e, -comp.intersect(&res[v][a], class));
                }
                let mut anti = vec![0i64; comp.rank()];
                for b in &boundary {
                    for (j, &c) in b.iter().enumerate() {
                        if c != 0 {
                            for (x, y) in anti.iter_mut().zip(&res[v][j]) {
                                *x += c * y;
                            }
                        }
                    }
                }
                let minus_kc = comp.intersect(&anti, class);
                set(e, e, e, 2 - minus_kc);
                // Exceptional curves keep the order in which the points are listed.
                for (w, coords) in points {
                    let mut idx = Vec::new();
                    for q in coords.iter().cloned() {
                        let eid = dual.edge_id(v, *w).unwrap();
                        used[eid].insert(q.clone());
                        components[*w].excs.push(Exceptional { neighbor: v, coord: q, step: k });
                        idx.push(components[*w].excs.len() - 1);
                    }
                    if !idx.is_empty() {
                        touched.push((*w, idx));
                    }
                }
                touched.sort();
                for u in 0..n {
                    let r = components[u].rank();
                    for row in res[u].iter_mut() {
                        row.resize(r, 0);
                    }
                    let mut new = vec![0i64; r];
                    if u == v {
                        new = class.clone();
                    } else if let Some((_, idx)) = touched.iter().find(|(x, _)| *x == u) {
                        for &i in idx {
                            new[components[u].toric_rank() + i] = 1;
                        }
                    }
                    res[u].push(new);
                    boundary[u].push(if u == v { -1 } else { 0 });
                }
            }
        }
        tensor = t2;
        rank = new_rank;
        records.push(StepRecord { step: k, touched });
    }
    Ok(LogCY3Pair { spec: spec.clone(), fan, components, rank, tensor, res, boundary, records, warnings })
}

impl LogCY3Pair {
    pub fn new(spec: PairSpec) -> Result<LogCY3Pair> {
        replay(&spec).map_err(|d| Error::InvalidPair(d.0))
    }

    pub fn spec(&self) -> &PairSpec {
        &self.spec
    }

    pub fn fan(&self) -> &SmoothFan {
        &self.fan
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn toric_rank(&self) -> usize {
        self.fan.pic_rank()
    }

    pub fn n_steps(&self) -> usize {
        self.spec.steps.len()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_edges(&self) -> usize {
        self.fan.dual().edges().len()
    }

    pub fn is_toric(&self) -> bool {
        self.spec.steps.is_empty()
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    /// Basis index of the exceptional divisor of step `k`.
    pub fn exceptional_index(&self, k: usize) -> usize {
        self.toric_rank() + k
    }

    pub fn basis_vector(&self, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        v[j] = 1;
        v
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> i64 {
        let r = self.rank;
        self.tensor[(i * r + j) * r + k]
    }

    pub fn cubic(&self, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &x) in a.iter().enumerate().filter(|p| *p.1 != 0) {
            for (j, &y) in b.iter().enumerate().filter(|p| *p.1 != 0) {
                for (k, &z) in c.iter().enumerate().filter(|p| *p.1 != 0) {
                    s += x * y * z * self.triple(i, j, k);
                }
            }
        }
        s
    }

    pub fn cubic_form(&self, a: &PicVector, b: &PicVector, c: &PicVector) -> Result<i64> {
        for v in [a, b, c] {
            if v.tag != BasisTag::Threefold || v.coords.len() != self.rank {
                return Err(Error::BasisMismatch(format!(
                    "expected a threefold class of length {}, got {:?} of length {}",
                    self.rank,
                    v.tag,
                    v.coords.len()
                )));
            }
        }
        Ok(self.cubic(&a.coords, &b.coords, &c.coords))
    }

    /// Class of the boundary component `D_v` in `Pic(Y)`.
    pub fn boundary_class(&self, v: usize) -> &[i64] {
        &self.boundary[v]
    }

    /// `-K_Y = sum_v D_v`.
    pub fn anticanonical(&self) -> Vec<i64> {
        let mut k = vec![0; self.rank];
        for b in &self.boundary {
            for (x, y) in k.iter_mut().zip(b) {
                *x += y;
            }
        }
        k
    }

    pub fn components(&self) -> &[LooijengaComponent] {
        &self.components
    }

    pub fn component(&self, v: usize) -> &LooijengaComponent {
        &self.components[v]
    }

    /// Offsets of each component block in `⊕_v Pic(D_v)`.
    pub fn component_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.components.len() + 1);
        let mut s = 0;
        for c in &self.components {
            off.push(s);
            s += c.rank();
        }
        off.push(s);
        off
    }

    pub fn direct_sum_rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    /// Restriction of a threefold class to every component.
    pub fn restrict(&self, l: &[i64]) -> Vec<Vec<i64>> {
        self.components
            .iter()
            .enumerate()
            .map(|(v, c)| {
                let mut out = vec![0i64; c.rank()];
                for (j, &a) in l.iter().enumerate() {
                    if a != 0 {
                        for (x, y) in out.iter_mut().zip(&self.res[v][j]) {
                            *x += a * y;
                        }
                    }
                }
                out
            })
            .collect()
    }

    pub fn restrict_pic(&self, l: &PicVector) -> Result<Vec<PicVector>> {
        if l.tag != BasisTag::Threefold || l.coords.len() != self.rank {
            return Err(Error::BasisMismatch(format!("not a threefold class: {:?}", l.tag)));
        }
        Ok(self
            .restrict(&l.coords)
            .into_iter()
            .enumerate()
            .map(|(v, coords)| PicVector { tag: BasisTag::Component(v), coords })
            .collect())
    }

    /// Restriction of `l` flattened into `⊕_v Pic(D_v)`.
    pub fn restrict_flat(&self, l: &[i64]) -> Vec<i64> {
        self.restrict(l).concat()
    }

    /// Matrix of the restriction map, columns indexed by the threefold basis.
    pub fn restriction_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<i64>> = (0..self.rank).map(|j| self.restrict_flat(&self.basis_vector(j))).collect();
        IntMatrix::from_columns(&cols, self.direct_sum_rank())
    }

    /// Image `K` of `Pic(Y)` in `⊕_v Pic(D_v)`.
    pub fn k_image(&self) -> ImageBasis {
        image_basis(&self.restriction_matrix())
    }
}
