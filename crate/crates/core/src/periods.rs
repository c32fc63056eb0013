//! The edge-matching map `l`, the lattice `Lambda = ker(l)`, the map
//! `gamma` into `∧²N`, and the period point of the boundary.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::boundary::Marking;
use crate::error::{Error, Result};
use crate::exactnum::{
    cokernel_structure, kernel_basis, snf, solve_integer, to_i64, CokernelStructure,
    GaussianRational, IntMatrix,
};
use crate::pair::LogCY3Pair;
use crate::toric::Ray;

/// Matrix of `l`: rows are edges, columns the basis of `⊕_v Pic(D_v)`. For
/// `e = t -> h` the row is `L_t . D_e - L_h . D_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMatchingMap {
    pub matrix: IntMatrix,
}

pub fn edge_matching_map(p: &LogCY3Pair) -> EdgeMatchingMap {
    let dual = p.fan().dual();
    let off = p.component_offsets();
    let mut m = IntMatrix::zeros(dual.edges().len(), p.direct_sum_rank());
    for (id, e) in dual.edges().iter().enumerate() {
        for (v, sign) in [(e.tail, 1i64), (e.head, -1i64)] {
            let c = p.component(v);
            let pos = c.position_of(e.other(v)).expect("edge in link");
            let d = c.boundary_class(pos);
            for j in 0..c.rank() {
                let mut u = vec![0; c.rank()];
                u[j] = 1;
                m[(id, off[v] + j)] = BigInt::from(sign * c.intersect(&u, &d));
            }
        }
    }
    EdgeMatchingMap { matrix: m }
}

/// Saturated basis of `Lambda` in `⊕_v Pic(D_v)` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaLattice {
    pub basis: Vec<Vec<i64>>,
}

impl LambdaLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self, ambient: usize) -> IntMatrix {
        IntMatrix::from_columns(&self.basis, ambient)
    }

    /// Coordinates of an element of `Lambda` in this basis.
    pub fn coordinates(&self, x: &[i64], ambient: usize) -> Option<Vec<i64>> {
        let b: Vec<BigInt> = x.iter().map(|&a| a.into()).collect();
        let y = solve_integer(&self.matrix(ambient), &b)?;
        y.iter().map(|v| to_i64(v).ok()).collect()
    }
}

pub fn lambda_lattice(p: &LogCY3Pair) -> Result<LambdaLattice> {
    let l = edge_matching_map(p);
    let basis = kernel_basis(&l.matrix)
        .into_iter()
        .map(|v| v.iter().map(to_i64).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaLattice { basis })
}

/// `n_a ∧ n_b` in the basis `(e1∧e2, e1∧e3, e2∧e3)`.
pub fn wedge(a: &Ray, b: &Ray) -> [i64; 3] {
    [a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    /// `3 x edges`, column `e = t -> h` is `n_t ∧ n_h`.
    pub gamma: IntMatrix,
    /// Edges whose stratum meets a blowup center.
    pub blown_edges: Vec<usize>,
    /// `gamma ∘ l` vanishes in `N' = ∧²N / <n_t ∧ n_h : e blown>`.
    pub composite_vanishes: bool,
    pub coker_l: CokernelStructure,
    pub n_prime: CokernelStructure,
}

impl GammaReport {
    /// `coker(l)` has the same invariants as `N'`.
    pub fn cokernel_matches(&self) -> bool {
        self.coker_l == self.n_prime
    }
}

pub fn blown_edges(p: &LogCY3Pair) -> Vec<usize> {
    let dual = p.fan().dual();
    let mut out = std::collections::BTreeSet::new();
    for c in p.components() {
        for e in &c.excs {
            out.insert(dual.edge_id(c.vertex, e.neighbor).unwrap());
        }
    }
    out.into_iter().collect()
}

pub fn gamma_map(p: &LogCY3Pair) -> GammaReport {
    let dual = p.fan().dual();
    let rays = &p.fan().fan().rays;
    let cols: Vec<[i64; 3]> = dual.edges().iter().map(|e| wedge(&rays[e.tail], &rays[e.head])).collect();
    let gamma = IntMatrix::from_columns(&cols, 3);
    let l = edge_matching_map(p).matrix;
    let comp = gamma.mul(&l);
    let blown = blown_edges(p);
    let blown_cols: Vec<[i64; 3]> = blown.iter().map(|&e| cols[e]).collect();
    let bm = IntMatrix::from_columns(&blown_cols, 3);
    let composite_vanishes = (0..comp.cols()).all(|j| {
        let c = comp.column(j);
        c.iter().all(Zero::is_zero) || (!blown.is_empty() && solve_integer(&bm, &c).is_some())
    });
    GammaReport {
        gamma,
        blown_edges: blown,
        composite_vanishes,
        coker_l: cokernel_structure(&l),
        n_prime: cokernel_structure(&bm),
    }
}

/// A character with values on a list of domain vectors (in `⊕_v Pic(D_v)`
/// coordinates); evaluation on integer combinations is multiplicative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCharacter {
    pub domain: Vec<Vec<i64>>,
    pub values: Vec<GaussianRational>,
}

impl PeriodCharacter {
    pub fn evaluate(&self, coeffs: &[i64]) -> Result<GaussianRational> {
        let mut acc = GaussianRational::one();
        for (v, &c) in self.values.iter().zip(coeffs) {
            if c != 0 {
                acc = &acc * &v.pow(c)?;
            }
        }
        Ok(acc)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(GaussianRational::is_one)
    }

    pub fn product(&self, other: &PeriodCharacter) -> PeriodCharacter {
        assert_eq!(self.domain, other.domain, "characters on different bases");
        PeriodCharacter {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }
}

fn standard_basis(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// Value of the marked period on an element of `⊕_v Pic(D_v)`.
pub fn marked_value(p: &LogCY3Pair, m: &Marking, x: &[i64]) -> Result<GaussianRational> {
    m.check(p.n_edges())?;
    let off = p.component_offsets();
    let mut acc = GaussianRational::one();
    for (v, c) in p.components().iter().enumerate() {
        let block = &x[off[v]..off[v + 1]];
        if block.iter().any(|&a| a != 0) {
            acc = &acc * &c.marked_period(m, block)?;
        }
    }
    Ok(acc)
}

/// `phi_{D, p}` on the standard basis of `⊕_v Pic(D_v)`.
pub fn marked_period(p: &LogCY3Pair, m: &Marking) -> Result<PeriodCharacter> {
    let domain = standard_basis(p.direct_sum_rank());
    let values = domain.iter().map(|x| marked_value(p, m, x)).collect::<Result<Vec<_>>>()?;
    Ok(PeriodCharacter { domain, values })
}

/// A fixed marking different from the markers, used to cross-check
/// marking independence.
pub fn reference_marking(n_edges: usize) -> Marking {
    Marking {
        points: (0..n_edges as i64)
            .map(|e| GaussianRational::from_parts((e + 2, 1), (1, e + 3)))
            .collect(),
    }
}

/// `phi_D` on the basis of `Lambda`. Computed with the marker marking and
/// checked against a second marking.
pub fn unmarked_period(p: &LogCY3Pair) -> Result<PeriodCharacter> {
    let lam = lambda_lattice(p)?;
    let a = Marking::markers(p.n_edges());
    let b = reference_marking(p.n_edges());
    let mut values = Vec::with_capacity(lam.rank());
    for x in &lam.basis {
        let va = marked_value(p, &a, x)?;
        if va != marked_value(p, &b, x)? {
            return Err(Error::Internal(format!("period on {x:?} depends on the marking")));
        }
        values.push(va);
    }
    Ok(PeriodCharacter { domain: lam.basis, values })
}

/// The character `theta(lambda)(L) = prod_e lambda_e^{l(L)_e}`.
pub fn theta(p: &LogCY3Pair, lambdas: &[GaussianRational]) -> Result<PeriodCharacter> {
    if lambdas.len() != p.n_edges() {
        return Err(Error::BasisMismatch(format!("{} values for {} edges", lambdas.len(), p.n_edges())));
    }
    if let Some(e) = lambdas.iter().position(GaussianRational::is_zero) {
        return Err(Error::ZeroValue(format!("lambda on edge {e}")));
    }
    let l = edge_matching_map(p).matrix;
    let domain = standard_basis(p.direct_sum_rank());
    let values = (0..l.cols())
        .map(|j| {
            let mut acc = GaussianRational::one();
            for (e, lam) in lambdas.iter().enumerate() {
                let a = &l[(e, j)];
                if !a.is_zero() {
                    acc = &acc * &lam.pow_big(a)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodCharacter { domain, values })
}

/// Move every marking point by `alpha_e` in the edge chart.
pub fn act_on_marking(alpha: &[GaussianRational], m: &Marking) -> Marking {
    Marking { points: m.points.iter().zip(alpha).map(|(p, a)| p * a).collect() }
}

/// The induced character on `Lambda / K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientClass {
    pub lambda_rank: usize,
    pub k_rank: usize,
    pub k_saturated_in_lambda: bool,
    /// Lifts to `⊕_v Pic(D_v)` of a basis of the free part.
    pub free_lifts: Vec<Vec<i64>>,
    pub free_values: Vec<GaussianRational>,
    /// Torsion generators: order, lift and value (a root of unity).
    pub torsion: Vec<(i64, Vec<i64>, GaussianRational)>,
}

impl QuotientClass {
    pub fn free_rank(&self) -> usize {
        self.free_lifts.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_values.iter().all(GaussianRational::is_one)
            && self.torsion.iter().all(|t| t.2.is_one())
    }
}

pub fn quotient_class(p: &LogCY3Pair) -> Result<QuotientClass> {
    let lam = lambda_lattice(p)?;
    let phi = unmarked_period(p)?;
    let amb = p.direct_sum_rank();
    let k = p.k_image();
    let lm = lam.matrix(amb);
    let r = lam.rank();
    let mut kcols = Vec::with_capacity(k.basis.len());
    for kv in &k.basis {
        let y = solve_integer(&lm, kv)
            .ok_or_else(|| Error::Internal("restricted class outside Lambda".into()))?;
        let y: Vec<i64> = y.iter().map(to_i64).collect::<Result<_>>()?;
        if !phi.evaluate(&y)?.is_one() {
            return Err(Error::Internal(format!("period is not trivial on the restricted class {y:?}")));
        }
        kcols.push(y);
    }
    let km = IntMatrix::from_columns(&kcols, r);
    let s = snf(&km);
    let uinv = s.u.inverse_unimodular()?;
    let diag = s.diagonal();
    let mut free_lifts = Vec::new();
    let mut free_values = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..r {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        let f: Vec<i64> = uinv.column_i64(i)?;
        let lift: Vec<i64> = lm.mul_vec_i64(&f).iter().map(to_i64).collect::<Result<_>>()?;
        let value = phi.evaluate(&f)?;
        if d.is_zero() {
            free_lifts.push(lift);
            free_values.push(value);
        } else {
            let order = to_i64(&d)?;
            if !value.pow(order)?.is_one() {
                return Err(Error::Internal("torsion value is not a root of unity".into()));
            }
            torsion.push((order, lift, value));
        }
    }
    Ok(QuotientClass {
        lambda_rank: r,
        k_rank: s.rank(),
        k_saturated_in_lambda: torsion.is_empty(),
        free_lifts,
        free_values,
        torsion,
    })
}

/// Divisors of `x` on each edge seen from the tail and from the head, in
/// the edge chart.
pub fn edge_divisors(p: &LogCY3Pair, x: &[i64]) -> Result<Vec<[BTreeMap<GaussianRational, i64>; 2]>> {
    let dual = p.fan().dual();
    let off = p.component_offsets();
    let mut out = vec![[BTreeMap::new(), BTreeMap::new()]; dual.edges().len()];
    for (v, c) in p.components().iter().enumerate() {
        let d = c.restrict_to_cycle(&x[off[v]..off[v + 1]])?;
        for (pos, terms) in d.terms.iter().enumerate() {
            let id = c.edge_ids[pos];
            let side = usize::from(dual.edge(id).head == v);
            for (q, &a) in terms {
                // Own chart back to the edge chart: both maps are q or 1/q.
                let z = c.to_own_chart(pos, q)?;
                *out[id][side].entry(z).or_insert(0) += a;
            }
        }
    }
    Ok(out)
}

/// `prod_e prod_q q^{a_head(q) - a_tail(q)}`: the marked period of an
/// element of `Lambda`, which does not depend on the marking.
pub fn lambda_path_value(p: &LogCY3Pair, x: &[i64]) -> Result<GaussianRational> {
    let mut acc = GaussianRational::one();
    for [tail, head] in edge_divisors(p, x)? {
        for (q, a) in head {
            acc = &acc * &q.pow(a)?;
        }
        for (q, a) in tail {
            acc = &acc * &q.pow(-a)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pair::PairSpec;

    fn pair(spec: PairSpec) -> LogCY3Pair {
        LogCY3Pair::new(spec).unwrap()
    }

    #[test]
    fn p3_lambda_and_cokernel() {
        let p = pair(PairSpec::toric(fixtures::p3_fan()));
        let l = edge_matching_map(&p);
        assert_eq!((l.matrix.rows(), l.matrix.cols()), (6, 4));
        let lam = lambda_lattice(&p).unwrap();
        assert_eq!(lam.basis, vec![vec![1, 1, 1, 1]]);
        let g = gamma_map(&p);
        assert!(g.composite_vanishes);
        assert_eq!(g.coker_l, CokernelStructure { free_rank: 3, torsion: vec![] });
        assert!(g.cokernel_matches());
    }

    #[test]
    fn flipping_an_edge_negates_its_row() {
        let a = pair(PairSpec::toric(fixtures::p3_fan()));
        let mut spec = PairSpec::toric(fixtures::p3_fan());
        spec.edge_orientations = vec![(3, 0)];
        let b = pair(spec);
        let (la, lb) = (edge_matching_map(&a).matrix, edge_matching_map(&b).matrix);
        let id = a.fan().dual().edge_id(0, 3).unwrap();
        for e in 0..la.rows() {
            for j in 0..la.cols() {
                let expect = if e == id { -la[(e, j)].clone() } else { la[(e, j)].clone() };
                assert_eq!(lb[(e, j)], expect);
            }
        }
    }

    #[test]
    fn conic_lambda_contains_exceptional_differences() {
        let p = pair(fixtures::p3_conic());
        let lam = lambda_lattice(&p).unwrap();
        let off = p.component_offsets();
        for w in 0..3 {
            let mut x = vec![0; p.direct_sum_rank()];
            let t = p.component(w).toric_rank();
            x[off[w] + t] = 1;
            x[off[w] + t + 1] = -1;
            assert!(lam.coordinates(&x, p.direct_sum_rank()).is_some(), "component {w}");
        }
    }

    #[test]
    fn toric_periods_trivial() {
        for (name, f) in fixtures::toric_fans() {
            let p = pair(PairSpec::toric(f));
            assert!(marked_period(&p, &Marking::markers(p.n_edges())).unwrap().is_trivial(), "{name}");
            assert!(unmarked_period(&p).unwrap().is_trivial(), "{name}");
            let q = quotient_class(&p).unwrap();
            assert_eq!(q.free_rank(), 0);
        }
    }

    #[test]
    fn two_points_difference_lies_in_k() {
        let p = pair(fixtures::p3_two_points());
        let e1 = p.basis_vector(p.exceptional_index(0));
        let e2 = p.basis_vector(p.exceptional_index(1));
        let d: Vec<i64> = e1.iter().zip(&e2).map(|(a, b)| a - b).collect();
        let x = p.restrict_flat(&d);
        let m = reference_marking(p.n_edges());
        assert_eq!(marked_value(&p, &m, &x).unwrap(), GaussianRational::one());
    }

    #[test]
    fn conic_quotient_value() {
        let p = pair(fixtures::p3_conic());
        let q = quotient_class(&p).unwrap();
        assert!(q.free_rank() >= 1);
        assert_eq!(q.free_rank(), q.lambda_rank - q.k_rank);
        assert!(!q.is_trivial());
    }

    #[test]
    fn conic_exceptional_difference_value() {
        let p = pair(fixtures::p3_conic());
        let off = p.component_offsets();
        // Component 0: exceptionals at 2 and 3 on edge 0 -> 3, sorted.
        let c = p.component(0);
        let t = c.toric_rank();
        let mut x = vec![0; p.direct_sum_rank()];
        x[off[0] + t] = 1;
        x[off[0] + t + 1] = -1;
        let (q1, q2) = (&c.excs[0].coord, &c.excs[1].coord);
        let v = lambda_path_value(&p, &x).unwrap();
        // Component 0 is the tail of edge 0 -> 3: its chart inverts.
        assert_eq!(v, q2.checked_div(q1).unwrap());
        let lam = lambda_lattice(&p).unwrap();
        let y = lam.coordinates(&x, p.direct_sum_rank()).unwrap();
        assert_eq!(unmarked_period(&p).unwrap().evaluate(&y).unwrap(), v);
    }

    #[test]
    fn theta_homomorphism() {
        let p = pair(fixtures::p3_mixed());
        let n = p.n_edges();
        let a: Vec<GaussianRational> = (0..n as i64).map(|e| GaussianRational::from_ratio(e + 2, 3)).collect();
        let b: Vec<GaussianRational> = (0..n as i64).map(|e| GaussianRational::from_parts((1, 1), (e, 1))).collect();
        let ab: Vec<GaussianRational> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        assert_eq!(theta(&p, &a).unwrap().product(&theta(&p, &b).unwrap()), theta(&p, &ab).unwrap());
        assert!(theta(&p, &vec![GaussianRational::one(); n]).unwrap().is_trivial());
        assert!(theta(&p, &vec![GaussianRational::zero(); n]).is_err());
    }

    #[test]
    fn torsor_identity_once() {
        let p = pair(fixtures::p3_mixed());
        let n = p.n_edges();
        let m = reference_marking(n);
        let alpha: Vec<GaussianRational> =
            (0..n as i64).map(|e| GaussianRational::from_parts((e + 1, 2), (-1, e + 1))).collect();
        let lhs = theta(&p, &alpha).unwrap().product(&marked_period(&p, &m).unwrap());
        let rhs = marked_period(&p, &act_on_marking(&alpha, &m)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
