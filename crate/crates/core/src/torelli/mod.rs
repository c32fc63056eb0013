//! Torelli equivalence of two pairs under a correspondence: compare dual
//! complexes, cubic forms, contraction steps, toric models and finally the
//! periods on `Lambda`.

mod complexity;
mod mori;
mod reconstruct;

pub use complexity::{complexity, toric_boundary_complexity, Complexity};
pub use mori::{classify_contraction, recognize, recognize_descriptor, Contraction, Descriptor};
pub use reconstruct::{
    check_linear_map, fan_isomorphism, induced_linear_map, reconstruct_fan, FanIsomorphism, IntersectionData,
    Matrix3,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::boundary::Marking;
use crate::error::{Error, Result};
use crate::exactnum::{solve_over_gaussian, GaussianRational, IntMatrix, TorusSolution};
use crate::oracle::cocycle_value;
use crate::pair::{BlowupStep, LogCY3Pair, PairSpec};
use crate::periods::{edge_matching_map, lambda_lattice, marked_value};
use crate::toric::SmoothFan;

/// Bijections between the data of two pairs. `vertices[v]` is the image of
/// the component `D_v`, `steps[k]` the image of the `k`-th blowup. The
/// optional matrices replace the canonical maps: `mu[j]` is the image of
/// the `j`-th basis class of `Pic(Y)`, `mu_v[v][j]` that of the `j`-th basis
/// class of `Pic(D_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub vertices: Vec<usize>,
    pub steps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_v: Option<Vec<Vec<Vec<i64>>>>,
}

impl Correspondence {
    pub fn identity(p: &LogCY3Pair) -> Correspondence {
        Correspondence {
            vertices: (0..p.n_components()).collect(),
            steps: (0..p.n_steps()).collect(),
            mu: None,
            mu_v: None,
        }
    }

    /// The inverse bijections. Explicit matrices are not inverted.
    pub fn inverse(&self) -> Result<Correspondence> {
        if self.mu.is_some() || self.mu_v.is_some() {
            return Err(Error::Correspondence("inverse of explicit maps is not supported".into()));
        }
        let inv = |m: &[usize]| {
            let mut out = vec![0; m.len()];
            for (i, &j) in m.iter().enumerate() {
                out[j] = i;
            }
            out
        };
        check_permutation(&self.vertices, self.vertices.len(), "vertex")?;
        check_permutation(&self.steps, self.steps.len(), "step")?;
        Ok(Correspondence { vertices: inv(&self.vertices), steps: inv(&self.steps), mu: None, mu_v: None })
    }
}

fn check_permutation(m: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    if m.len() != n {
        return Err(Error::Correspondence(format!("{what} map has {} entries, expected {n}", m.len())));
    }
    for &j in m {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::Correspondence(format!("{what} map is not a bijection")));
        }
    }
    Ok(())
}

/// Period comparison on one generator of `Lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodWitness {
    pub generator: Vec<i64>,
    pub image: Vec<i64>,
    pub value: GaussianRational,
    pub image_value: GaussianRational,
    /// The correspondence reverses the orientation of the sphere, so the
    /// image value is compared through its inverse.
    pub inverted: bool,
}

impl PeriodWitness {
    pub fn matches(&self) -> Result<bool> {
        let b = if self.inverted { self.image_value.inv()? } else { self.image_value.clone() };
        Ok(self.value == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum DistinctCertificate {
    DualComplex { reason: String },
    BoundaryClass { vertex: usize },
    Diagram { basis_index: usize },
    Cubic { triple: [usize; 3], value: i64, image_value: i64 },
    StepType { step: usize, image_step: usize, contraction: Contraction, image_contraction: Contraction },
    CurveClass { step: usize, image: Vec<i64>, expected: Vec<i64> },
    CombinatorialType { reason: String },
    ToricModel { reason: String },
    Period { witness: PeriodWitness },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphicCertificate {
    pub correspondence: Correspondence,
    pub fan_map: FanIsomorphism,
    pub periods: Vec<PeriodWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Isomorphic(Box<IsomorphicCertificate>),
    /// Distinct under the given correspondence.
    Distinct { correspondence: Correspondence, certificate: DistinctCertificate },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Isomorphic(_) => "isomorphic",
            Verdict::Distinct { .. } => "distinct",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Isomorphic(_) => 0,
            Verdict::Distinct { .. } => 1,
            Verdict::Inconclusive { .. } => 2,
        }
    }
}

/// The maps on Picard groups induced by a correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMaps {
    pub mu: Vec<Vec<i64>>,
    pub mu_v: Vec<Vec<Vec<i64>>>,
    /// Image edge and orientation sign for every edge.
    pub edges: Vec<(usize, i64)>,
    pub orientation_preserved: bool,
}

fn combine(images: &[Vec<i64>], x: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0; len];
    for (img, &a) in images.iter().zip(x) {
        if a != 0 {
            for (o, b) in out.iter_mut().zip(img) {
                *o += a * b;
            }
        }
    }
    out
}

impl InducedMaps {
    pub fn apply(&self, q: &LogCY3Pair, x: &[i64]) -> Vec<i64> {
        combine(&self.mu, x, q.rank())
    }

    /// `⊕_v mu_v` from `⊕_v Pic(D_v)` to `⊕_v Pic(D'_v)`.
    pub fn apply_direct_sum(&self, p: &LogCY3Pair, q: &LogCY3Pair, vertices: &[usize], x: &[i64]) -> Vec<i64> {
        let off = p.component_offsets();
        let off2 = q.component_offsets();
        let mut out = vec![0; q.direct_sum_rank()];
        for v in 0..p.n_components() {
            let w = vertices[v];
            let img = combine(&self.mu_v[v], &x[off[v]..off[v + 1]], q.component(w).rank());
            out[off2[w]..off2[w + 1]].copy_from_slice(&img);
        }
        out
    }
}

type Stage<T> = std::result::Result<T, DistinctCertificate>;

fn pad(v: &[i64], n: usize) -> Vec<i64> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

/// Compute the induced maps and check that they respect the dual complex,
/// boundary classes, exceptional classes and restrictions.
pub fn induced_maps(p: &LogCY3Pair, q: &LogCY3Pair, corr: &Correspondence) -> Result<Stage<InducedMaps>> {
    let n = p.n_components();
    let fail = |reason: String| Ok(Err(DistinctCertificate::DualComplex { reason }));
    if n != q.n_components() {
        return fail(format!("{n} components against {}", q.n_components()));
    }
    check_permutation(&corr.vertices, n, "vertex")?;
    if p.n_steps() != q.n_steps() {
        return Ok(Err(DistinctCertificate::CombinatorialType {
            reason: format!("{} blowups against {}", p.n_steps(), q.n_steps()),
        }));
    }
    check_permutation(&corr.steps, p.n_steps(), "step")?;
    let vm = &corr.vertices;
    let (d1, d2) = (p.fan().dual(), q.fan().dual());
    if d1.edges().len() != d2.edges().len() || d1.triangles().len() != d2.triangles().len() {
        return fail("different numbers of edges or triangles".into());
    }
    let mut edges = Vec::new();
    for e in d1.edges() {
        let Some(id) = d2.edge_id(vm[e.tail], vm[e.head]) else {
            return fail(format!("edge {}-{} has no image", e.tail, e.head));
        };
        edges.push((id, if d2.edge(id).tail == vm[e.tail] { 1 } else { -1 }));
    }
    let mut signs = std::collections::BTreeSet::new();
    for t in d1.triangles() {
        let img = t.map(|v| vm[v]);
        let Some(tid) = d2.triangle_id(img[0], img[1], img[2]) else {
            return fail(format!("triangle {t:?} has no image"));
        };
        let s = d2.triangles()[tid];
        let rot = |a: [usize; 3]| [a, [a[1], a[2], a[0]], [a[2], a[0], a[1]]];
        signs.insert(rot(s).contains(&img));
    }
    if signs.len() != 1 {
        return fail("correspondence mixes orientations".into());
    }
    let orientation_preserved = signs.contains(&true);

    // Threefold map.
    let mu = match &corr.mu {
        Some(m) => {
            if m.len() != p.rank() || m.iter().any(|r| r.len() != q.rank()) {
                return Err(Error::Correspondence("explicit mu has the wrong shape".into()));
            }
            m.clone()
        }
        None => {
            let pic = &p.fan().pic().basis_rays;
            let mut m: Vec<Vec<i64>> =
                pic.iter().map(|&r| pad(q.fan().ray_class(vm[r]), q.rank())).collect();
            if m.len() != q.toric_rank() {
                return Ok(Err(DistinctCertificate::ToricModel { reason: "toric Picard ranks differ".into() }));
            }
            for k in 0..p.n_steps() {
                m.push(q.basis_vector(q.exceptional_index(corr.steps[k])));
            }
            m
        }
    };
    let im = IntMatrix::from_columns(&mu, q.rank());
    if p.rank() != q.rank() || im.det().magnitude() != &num_bigint::BigUint::from(1u32) {
        return Ok(Err(DistinctCertificate::CombinatorialType { reason: "mu is not an isomorphism".into() }));
    }
    for v in 0..n {
        if combine(&mu, p.boundary_class(v), q.rank()) != q.boundary_class(vm[v]) {
            return Ok(Err(DistinctCertificate::BoundaryClass { vertex: v }));
        }
    }

    // Component maps.
    let mu_v = match &corr.mu_v {
        Some(m) => {
            if m.len() != n {
                return Err(Error::Correspondence("explicit mu_v has the wrong length".into()));
            }
            for v in 0..n {
                if m[v].len() != p.component(v).rank() || m[v].iter().any(|r| r.len() != q.component(vm[v]).rank()) {
                    return Err(Error::Correspondence(format!("explicit mu_v[{v}] has the wrong shape")));
                }
            }
            m.clone()
        }
        None => match canonical_component_maps(p, q, corr) {
            Ok(m) => m,
            Err(reason) => return Ok(Err(DistinctCertificate::CombinatorialType { reason })),
        },
    };
    for v in 0..n {
        let (c, c2) = (p.component(v), q.component(vm[v]));
        for a in 0..c.rank() {
            for b in a..c.rank() {
                let x = c.intersect(&unit(c.rank(), a), &unit(c.rank(), b));
                let y = c2.intersect(&mu_v[v][a], &mu_v[v][b]);
                if x != y {
                    return Ok(Err(DistinctCertificate::CombinatorialType {
                        reason: format!("mu_{v} is not an isometry"),
                    }));
                }
            }
        }
        for pos in 0..c.n_edges() {
            let w = c.base.neighbors[pos];
            let pos2 = c2.position_of(vm[w]).expect("edge image checked");
            if combine(&mu_v[v], &c.boundary_class(pos), c2.rank()) != c2.boundary_class(pos2) {
                return Ok(Err(DistinctCertificate::CombinatorialType {
                    reason: format!("mu_{v} does not preserve the boundary curve toward {w}"),
                }));
            }
        }
    }
    let maps = InducedMaps { mu, mu_v, edges, orientation_preserved };
    for j in 0..p.rank() {
        let lhs = q.restrict_flat(&maps.mu[j]);
        let rhs = maps.apply_direct_sum(p, q, vm, &p.restrict_flat(&p.basis_vector(j)));
        if lhs != rhs {
            return Ok(Err(DistinctCertificate::Diagram { basis_index: j }));
        }
    }
    Ok(Ok(maps))
}

fn unit(n: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

/// Boundary curves go to boundary curves; the `i`-th exceptional curve of a
/// step on an edge goes to the `i`-th of the image step on the image edge.
fn canonical_component_maps(
    p: &LogCY3Pair,
    q: &LogCY3Pair,
    corr: &Correspondence,
) -> std::result::Result<Vec<Vec<Vec<i64>>>, String> {
    let vm = &corr.vertices;
    let mut out = Vec::new();
    for v in 0..p.n_components() {
        let (c, c2) = (p.component(v), q.component(vm[v]));
        if c.n_edges() != c2.n_edges() || c.excs.len() != c2.excs.len() {
            return Err(format!("components {v} and {} differ", vm[v]));
        }
        let mut m = Vec::new();
        for i in 0..c.toric_rank() {
            let w = c.base.neighbors[i + 2];
            let pos2 = c2.position_of(vm[w]).ok_or_else(|| format!("no edge {}-{}", vm[v], vm[w]))?;
            m.push(pad(&c2.base.curve_class(pos2), c2.rank()));
        }
        for e in &c.excs {
            let rank_in = c.excs.iter().take_while(|f| !std::ptr::eq(*f, e)).filter(|f| f.step == e.step && f.neighbor == e.neighbor).count();
            let target_step = corr.steps[e.step];
            let target = c2
                .excs
                .iter()
                .enumerate()
                .filter(|(_, f)| f.step == target_step && f.neighbor == vm[e.neighbor])
                .nth(rank_in)
                .map(|(j, _)| j)
                .ok_or_else(|| format!("exceptional curve of step {} on {v}-{} has no image", e.step, e.neighbor))?;
            m.push(unit(c2.rank(), c2.toric_rank() + target));
        }
        out.push(m);
    }
    Ok(out)
}

fn step_checks(p: &LogCY3Pair, q: &LogCY3Pair, corr: &Correspondence, maps: &InducedMaps) -> Result<Stage<()>> {
    for k in (0..p.n_steps()).rev() {
        let k2 = corr.steps[k];
        let (a, b) = (classify_contraction(p, k)?, classify_contraction(q, k2)?);
        if a.types != b.types || a.descriptor != b.descriptor {
            return Ok(Err(DistinctCertificate::StepType { step: k, image_step: k2, contraction: a, image_contraction: b }));
        }
        let e = p.basis_vector(p.exceptional_index(k));
        let e2 = q.basis_vector(q.exceptional_index(k2));
        if maps.apply(q, &e) != e2 {
            return Ok(Err(DistinctCertificate::CombinatorialType {
                reason: format!("mu does not send E_{k} to E'_{k2}"),
            }));
        }
        match (&p.spec().steps[k], &q.spec().steps[k2]) {
            (BlowupStep::Point { edge: (v, w), .. }, BlowupStep::Point { edge: (v2, w2), .. }) => {
                let (x, y) = (corr.vertices[*v], corr.vertices[*w]);
                if !((x == *v2 && y == *w2) || (x == *w2 && y == *v2)) {
                    return Ok(Err(DistinctCertificate::CombinatorialType {
                        reason: format!("point of step {k} lies on a different edge"),
                    }));
                }
            }
            (BlowupStep::Curve { component: v, class, .. }, BlowupStep::Curve { component: v2, class: class2, .. }) => {
                if corr.vertices[*v] != *v2 {
                    return Ok(Err(DistinctCertificate::CombinatorialType {
                        reason: format!("curve of step {k} lies on a different component"),
                    }));
                }
                let c2 = q.component(*v2);
                let image = combine(&maps.mu_v[*v], class, c2.rank());
                let expected = pad(class2, c2.rank());
                if image != expected {
                    return Ok(Err(DistinctCertificate::CurveClass { step: k, image, expected }));
                }
            }
            _ => unreachable!("contraction types agree"),
        }
    }
    Ok(Ok(()))
}

fn toric_model_check(p: &LogCY3Pair, q: &LogCY3Pair, corr: &Correspondence) -> Result<Stage<FanIsomorphism>> {
    let ra = reconstruct_fan(&IntersectionData::of_fan(p.fan()))?;
    let rb = reconstruct_fan(&IntersectionData::of_fan(q.fan()))?;
    if fan_isomorphism(&ra, &rb).is_none() {
        return Ok(Err(DistinctCertificate::ToricModel { reason: "toric models are not isomorphic".into() }));
    }
    match induced_linear_map(&p.spec().fan, &q.spec().fan, &corr.vertices) {
        Some(iso) => Ok(Ok(iso)),
        None => Ok(Err(DistinctCertificate::ToricModel {
            reason: "the vertex map is not induced by a lattice isomorphism".into(),
        })),
    }
}

/// Unmarked period of `p` on `x` and of `q` on its image.
fn period_witness(p: &LogCY3Pair, q: &LogCY3Pair, x: &[i64], y: Vec<i64>, inverted: bool) -> Result<PeriodWitness> {
    let value = marked_value(p, &Marking::markers(p.n_edges()), x)?;
    let image_value = marked_value(q, &Marking::markers(q.n_edges()), &y)?;
    Ok(PeriodWitness { generator: x.to_vec(), image: y, value, image_value, inverted })
}

/// Run the full pipeline under one correspondence.
pub fn decide_isomorphism(p: &LogCY3Pair, q: &LogCY3Pair, corr: &Correspondence) -> Result<Verdict> {
    let distinct = |certificate| Ok(Verdict::Distinct { correspondence: corr.clone(), certificate });
    let maps = match induced_maps(p, q, corr)? {
        Ok(m) => m,
        Err(c) => return distinct(c),
    };
    for i in 0..p.rank() {
        for j in i..p.rank() {
            for k in j..p.rank() {
                let a = p.triple(i, j, k);
                let b = q.cubic(&maps.mu[i], &maps.mu[j], &maps.mu[k]);
                if a != b {
                    return distinct(DistinctCertificate::Cubic { triple: [i, j, k], value: a, image_value: b });
                }
            }
        }
    }
    for k in 0..p.n_steps() {
        for r in [p, q] {
            let c = classify_contraction(r, k)?;
            if !matches!(c.mori_type(), Some(1) | Some(2)) {
                return Ok(Verdict::Inconclusive { reason: format!("step {k} has contraction types {:?}", c.types) });
            }
        }
    }
    if let Err(c) = step_checks(p, q, corr, &maps)? {
        return distinct(c);
    }
    let fan_map = match toric_model_check(p, q, corr)? {
        Ok(f) => f,
        Err(c) => return distinct(c),
    };
    let l2 = edge_matching_map(q).matrix;
    let mut periods = Vec::new();
    for x in lambda_lattice(p)?.basis {
        let y = maps.apply_direct_sum(p, q, &corr.vertices, &x);
        if !l2.mul_vec_i64(&y).iter().all(|v| v == &BigInt::from(0)) {
            return distinct(DistinctCertificate::CombinatorialType {
                reason: format!("image of the Lambda generator {x:?} is not in Lambda'"),
            });
        }
        let w = period_witness(p, q, &x, y, !maps.orientation_preserved)?;
        if !w.matches()? {
            return distinct(DistinctCertificate::Period { witness: w });
        }
        periods.push(w);
    }
    Ok(Verdict::Isomorphic(Box::new(IsomorphicCertificate { correspondence: corr.clone(), fan_map, periods })))
}

/// Like [`decide_isomorphism`], then if the given correspondence fails try
/// other orderings of the blowup steps, at most `bound` of them.
pub fn decide_with_search(p: &LogCY3Pair, q: &LogCY3Pair, corr: &Correspondence, bound: usize) -> Result<Verdict> {
    let first = decide_isomorphism(p, q, corr)?;
    if bound == 0 || !matches!(first, Verdict::Distinct { .. }) {
        return Ok(first);
    }
    let n = corr.steps.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut tried = 0;
    loop {
        if perm != corr.steps {
            let kinds_match = (0..n).all(|k| p.spec().steps[k].is_point() == q.spec().steps.get(perm[k]).is_some_and(|s| s.is_point()));
            if kinds_match {
                if tried == bound {
                    return Ok(Verdict::Inconclusive {
                        reason: format!("search bound {bound} reached without an isomorphism"),
                    });
                }
                tried += 1;
                let c = Correspondence { steps: perm.clone(), ..corr.clone() };
                let v = decide_isomorphism(p, q, &c)?;
                if matches!(v, Verdict::Isomorphic(_)) {
                    return Ok(v);
                }
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(first);
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Re-verify a verdict. Period values are recomputed along the cocycle
/// path, independently of the path used by the pipeline.
pub fn recheck(p: &LogCY3Pair, q: &LogCY3Pair, verdict: &Verdict) -> Result<std::result::Result<(), String>> {
    let reval = |w: &PeriodWitness, corr: &Correspondence| -> Result<std::result::Result<bool, String>> {
        let maps = match induced_maps(p, q, corr)? {
            Ok(m) => m,
            Err(c) => return Ok(Err(format!("correspondence no longer valid: {c:?}"))),
        };
        if maps.apply_direct_sum(p, q, &corr.vertices, &w.generator) != w.image {
            return Ok(Err("image vector does not match the correspondence".into()));
        }
        let a = cocycle_value(p, &w.generator, false)?;
        let b = cocycle_value(q, &w.image, false)?;
        if a != w.value || b != w.image_value {
            return Ok(Err(format!("recomputed values {a}, {b} differ from the certificate")));
        }
        let b = if w.inverted { b.inv()? } else { b };
        Ok(Ok(a == b))
    };
    match verdict {
        Verdict::Isomorphic(cert) => {
            if check_linear_map(&p.spec().fan, &q.spec().fan, &cert.fan_map.matrix).is_none() {
                return Ok(Err("fan map does not carry the fan onto the other".into()));
            }
            let lam = lambda_lattice(p)?;
            if lam.basis.len() != cert.periods.len()
                || lam.basis.iter().zip(&cert.periods).any(|(x, w)| *x != w.generator)
            {
                return Ok(Err("period transcript does not cover Lambda".into()));
            }
            for w in &cert.periods {
                match reval(w, &cert.correspondence)? {
                    Ok(true) => {}
                    Ok(false) => return Ok(Err(format!("periods differ on {:?}", w.generator))),
                    Err(e) => return Ok(Err(e)),
                }
            }
            Ok(Ok(()))
        }
        Verdict::Distinct { correspondence, certificate: DistinctCertificate::Period { witness } } => {
            if lambda_lattice(p)?.coordinates(&witness.generator, p.direct_sum_rank()).is_none() {
                return Ok(Err("witness is not in Lambda".into()));
            }
            match reval(witness, correspondence)? {
                Ok(false) => Ok(Ok(())),
                Ok(true) => Ok(Err("periods agree on the witness".into())),
                Err(e) => Ok(Err(e)),
            }
        }
        Verdict::Distinct { correspondence, certificate: DistinctCertificate::Cubic { triple, value, image_value } } => {
            let maps = match induced_maps(p, q, correspondence)? {
                Ok(m) => m,
                Err(c) => return Ok(Err(format!("correspondence no longer valid: {c:?}"))),
            };
            let [i, j, k] = *triple;
            let a = p.cubic(&p.basis_vector(i), &p.basis_vector(j), &p.basis_vector(k));
            let b = q.cubic(&maps.mu[i], &maps.mu[j], &maps.mu[k]);
            if (a, b) == (*value, *image_value) && a != b {
                Ok(Ok(()))
            } else {
                Ok(Err("cubic values not reproduced".into()))
            }
        }
        Verdict::Distinct { correspondence, .. } => {
            let again = decide_isomorphism(p, q, correspondence)?;
            if again == *verdict {
                Ok(Ok(()))
            } else {
                Ok(Err(format!("pipeline now returns {}", again.kind())))
            }
        }
        Verdict::Inconclusive { .. } => Ok(Ok(())),
    }
}

/// Outcome of solving for a change of marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transport {
    Solved { lambdas: Vec<GaussianRational> },
    /// Solvable over `C*` but a root is missing from `Q(i)`.
    NotInField { degree: BigInt, value: GaussianRational },
    /// A relation among the equations with product different from 1.
    Unsolvable { relation: Vec<BigInt> },
    Undetermined { degree: BigInt, value: GaussianRational },
}

/// Per-edge `lambda` with `theta(lambda) phi_{P, m} = phi_{P', m'} ∘ ⊕ mu_v`.
pub fn marking_transporter(
    p: &LogCY3Pair,
    q: &LogCY3Pair,
    corr: &Correspondence,
    m: &Marking,
    m2: &Marking,
) -> Result<Transport> {
    let maps = induced_maps(p, q, corr)?
        .map_err(|c| Error::Correspondence(format!("correspondence rejected: {c:?}")))?;
    let l = edge_matching_map(p).matrix;
    let n = p.direct_sum_rank();
    let mut targets = Vec::with_capacity(n);
    for j in 0..n {
        let e = unit(n, j);
        let mut b = marked_value(q, m2, &maps.apply_direct_sum(p, q, &corr.vertices, &e))?;
        if !maps.orientation_preserved {
            b = b.inv()?;
        }
        targets.push(b.checked_div(&marked_value(p, m, &e)?)?);
    }
    Ok(match solve_over_gaussian(&l.transpose(), &targets)? {
        TorusSolution::Solved(lambdas) => Transport::Solved { lambdas },
        TorusSolution::NoGaussianRoot { degree, value } => Transport::NotInField { degree, value },
        TorusSolution::Unsolvable { relation } => Transport::Unsolvable { relation },
        TorusSolution::Undetermined { degree, value } => Transport::Undetermined { degree, value },
    })
}

/// Act on every blowup coordinate by a torus element `t`: a point on the
/// edge `e` is multiplied by the value of the edge character at `t`.
pub fn torus_translate(spec: &PairSpec, t: &[GaussianRational; 3]) -> Result<PairSpec> {
    let f = SmoothFan::new(spec.fan.clone(), &spec.edge_orientations)?;
    let factor = |v: usize, w: usize| -> Result<GaussianRational> {
        let id = f.dual().edge_id(v, w).ok_or_else(|| Error::InvalidPair(format!("{v}-{w} is not an edge")))?;
        let ch = f.edge_chart(id).character;
        let mut acc = GaussianRational::one();
        for (ti, &c) in t.iter().zip(&ch) {
            acc = &acc * &ti.pow(c)?;
        }
        Ok(acc)
    };
    let mut out = spec.clone();
    for step in out.steps.iter_mut() {
        match step {
            BlowupStep::Point { edge: (v, w), coord } => *coord = &*coord * &factor(*v, *w)?,
            BlowupStep::Curve { component, points, .. } => {
                for (w, coords) in points.iter_mut() {
                    let s = factor(*component, *w)?;
                    for c in coords.iter_mut() {
                        *c = &*c * &s;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn pair(spec: PairSpec) -> LogCY3Pair {
        LogCY3Pair::new(spec).unwrap()
    }

    #[test]
    fn identity_is_isomorphic() {
        for (name, spec) in fixtures::bundled_pairs() {
            let p = pair(spec);
            let v = decide_isomorphism(&p, &p, &Correspondence::identity(&p)).unwrap();
            assert_eq!(v.kind(), "isomorphic", "{name}: {v:?}");
            assert_eq!(recheck(&p, &p, &v).unwrap(), Ok(()), "{name}");
        }
    }

    #[test]
    fn torus_translate_is_isomorphic() {
        let t = [g("2"), g("1/3+1*i"), g("-5/7")];
        for (name, spec) in fixtures::bundled_pairs() {
            let p = pair(spec.clone());
            let q = pair(torus_translate(&spec, &t).unwrap());
            let v = decide_isomorphism(&p, &q, &Correspondence::identity(&p)).unwrap();
            assert_eq!(v.kind(), "isomorphic", "{name}: {v:?}");
        }
    }

    #[test]
    fn perturbed_conic_is_distinct() {
        let p = pair(fixtures::p3_conic());
        let mut spec = fixtures::p3_conic();
        if let BlowupStep::Curve { points, .. } = &mut spec.steps[0] {
            points[0].1 = vec![g("10"), g("3/5")];
        }
        let q = pair(spec);
        let v = decide_isomorphism(&p, &q, &Correspondence::identity(&p)).unwrap();
        let Verdict::Distinct { certificate: DistinctCertificate::Period { witness }, .. } = &v else {
            panic!("{v:?}");
        };
        assert!(!witness.matches().unwrap());
        assert_eq!(recheck(&p, &q, &v).unwrap(), Ok(()));
    }

    #[test]
    fn different_programs_are_distinct() {
        let p = pair(fixtures::p3_conic());
        let q = pair(fixtures::p3_line());
        let v = decide_isomorphism(&p, &q, &Correspondence::identity(&p)).unwrap();
        assert_eq!(v.kind(), "distinct");
        let a = pair(PairSpec::toric(fixtures::p3_fan()));
        let b = pair(PairSpec::toric(fixtures::p1p1p1_fan()));
        let v = decide_isomorphism(&a, &b, &Correspondence::identity(&a));
        assert!(matches!(v, Err(_)) || v.unwrap().kind() == "distinct");
    }

    #[test]
    fn symmetry_under_inverse() {
        let p = pair(fixtures::p3_mixed());
        let q = pair(torus_translate(&fixtures::p3_mixed(), &[g("3"), g("1/2"), g("1*i")]).unwrap());
        let c = Correspondence::identity(&p);
        let a = decide_isomorphism(&p, &q, &c).unwrap();
        let b = decide_isomorphism(&q, &p, &c.inverse().unwrap()).unwrap();
        assert_eq!(a.kind(), b.kind());
    }

    #[test]
    fn relabelled_p3_pair_is_isomorphic() {
        // Cyclically relabel the rays of P^3 and move the program along.
        let perm = [1usize, 2, 3, 0];
        let base = fixtures::p3_two_points();
        let mut f = base.fan.clone();
        let mut rays = f.rays.clone();
        for (v, &w) in perm.iter().enumerate() {
            rays[w] = f.rays[v];
        }
        f.rays = rays;
        f.cones = f.cones.iter().map(|c| c.map(|v| perm[v])).collect();
        f.orientation.cone = f.orientation.cone.map(|v| perm[v]);
        let p = pair(base.clone());
        let fq = SmoothFan::new(f.clone(), &[]).unwrap();
        let fp = p.fan();
        // Coordinates move to the image edge chart, which may be reversed.
        let steps = base
            .steps
            .iter()
            .map(|s| match s {
                BlowupStep::Point { edge: (v, w), coord } => {
                    let (a, b) = (perm[*v], perm[*w]);
                    let e1 = fp.dual().edge(fp.dual().edge_id(*v, *w).unwrap());
                    let e2 = fq.dual().edge(fq.dual().edge_id(a, b).unwrap());
                    let same = perm[e1.tail] == e2.tail;
                    let c = if same { coord.clone() } else { coord.inv().unwrap() };
                    BlowupStep::Point { edge: (a, b), coord: c }
                }
                _ => unreachable!(),
            })
            .collect();
        let q = pair(PairSpec::with_steps(f, steps));
        let corr = Correspondence { vertices: perm.to_vec(), steps: vec![0, 1], mu: None, mu_v: None };
        let v = decide_isomorphism(&p, &q, &corr).unwrap();
        assert_eq!(v.kind(), "isomorphic", "{v:?}");
    }

    #[test]
    fn step_search_finds_swapped_order() {
        let p = pair(fixtures::p3_two_points());
        let mut spec = fixtures::p3_two_points();
        spec.steps.swap(0, 1);
        let q = pair(spec);
        let c = Correspondence::identity(&p);
        assert_eq!(decide_isomorphism(&p, &q, &c).unwrap().kind(), "distinct");
        assert_eq!(decide_with_search(&p, &q, &c, 5).unwrap().kind(), "isomorphic");
    }

    #[test]
    fn transporter_identity_and_single_edge() {
        let p = pair(fixtures::p3_conic());
        let c = Correspondence::identity(&p);
        let m = crate::periods::reference_marking(p.n_edges());
        let Transport::Solved { lambdas } = marking_transporter(&p, &p, &c, &m, &m).unwrap() else {
            panic!()
        };
        assert!(lambdas.iter().all(|l| l.is_one()));
        let t = g("3/2");
        let mut m2 = m.clone();
        m2.points[0] = &m2.points[0] * &t;
        let Transport::Solved { lambdas } = marking_transporter(&p, &p, &c, &m, &m2).unwrap() else {
            panic!()
        };
        let moved = crate::periods::act_on_marking(&lambdas, &m);
        assert_eq!(
            crate::periods::marked_period(&p, &moved).unwrap(),
            crate::periods::marked_period(&p, &m2).unwrap()
        );
    }

    #[test]
    fn transporter_detects_period_mismatch() {
        let p = pair(fixtures::p3_conic());
        let mut spec = fixtures::p3_conic();
        if let BlowupStep::Curve { points, .. } = &mut spec.steps[0] {
            points[0].1 = vec![g("10"), g("3/5")];
        }
        let q = pair(spec);
        let m = Marking::markers(p.n_edges());
        let r = marking_transporter(&p, &q, &Correspondence::identity(&p), &m, &m).unwrap();
        assert!(matches!(r, Transport::Unsolvable { .. }), "{r:?}");
    }
}
