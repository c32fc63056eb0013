//! Independent recomputations used to cross-check the main paths: the
//! period as a product of transition scalars over the triangles, and the
//! cubic form of a blowup program against a toric degeneration.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;
use crate::pair::{BlowupStep, LogCY3Pair};
use crate::periods::{edge_divisors, lambda_lattice, lambda_path_value};
use crate::toric::{star_subdivide, Fan3, SmoothFan};

/// Value at `z = 0` or `z = infinity` of `prod_q (z - q)^{a_q}`.
fn evaluate_at_stratum(div: &BTreeMap<GaussianRational, i64>, at_zero: bool) -> Result<GaussianRational> {
    let deg: i64 = div.values().sum();
    if !at_zero {
        if deg != 0 {
            return Err(Error::Internal("transition has a zero or pole at a 0-stratum".into()));
        }
        return Ok(GaussianRational::one());
    }
    let mut acc = GaussianRational::one();
    for (q, &a) in div {
        acc = &acc * &(&GaussianRational::minus_one() * q).pow(a)?;
    }
    Ok(acc)
}

/// Product over the triangles of the scalars `alpha_sigma` for an element
/// `x` of `Lambda`. Each triangle is traversed in its positive cyclic order,
/// or the reverse one when `flip` is set.
pub fn cocycle_value(p: &LogCY3Pair, x: &[i64], flip: bool) -> Result<GaussianRational> {
    let f = p.fan();
    let dual = f.dual();
    let divs = edge_divisors(p, x)?;
    let mut acc = GaussianRational::one();
    for t in dual.triangles() {
        let order = if flip { [t[0], t[2], t[1]] } else { *t };
        for i in 0..3 {
            let (a, b, c) = (order[i], order[(i + 1) % 3], order[(i + 2) % 3]);
            let id = dual.edge_id(a, b).expect("triangle edge");
            let e = dual.edge(id);
            let chart = f.edge_chart(id);
            let (da, db) = if e.tail == a { (&divs[id][0], &divs[id][1]) } else { (&divs[id][1], &divs[id][0]) };
            // Transition from the model of L_a to that of L_b on D_e.
            let mut h = da.clone();
            for (q, &m) in db {
                *h.entry(q.clone()).or_insert(0) -= m;
            }
            h.retain(|_, m| *m != 0);
            let at_zero = if chart.zero_at == c {
                true
            } else if chart.infinity_at == c {
                false
            } else {
                return Err(Error::Internal(format!("triangle {t:?} not incident to edge {id}")));
            };
            acc = &acc * &evaluate_at_stratum(&h, at_zero)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDiscrepancy {
    pub generator: Vec<i64>,
    pub lambda_path: GaussianRational,
    pub cocycle_path: GaussianRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathReport {
    pub generators: usize,
    pub flipped: bool,
    pub first_discrepancy: Option<PathDiscrepancy>,
}

impl PathReport {
    pub fn agree(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Compare the cocycle product with the lambda product on every generator
/// of `Lambda`.
pub fn compare_period_paths(p: &LogCY3Pair, flip: bool) -> Result<PathReport> {
    let lam = lambda_lattice(p)?;
    let mut first = None;
    for x in &lam.basis {
        let a = lambda_path_value(p, x)?;
        let b = cocycle_value(p, x, flip)?;
        if a != b {
            first = Some(PathDiscrepancy { generator: x.clone(), lambda_path: a, cocycle_path: b });
            break;
        }
    }
    Ok(PathReport { generators: lam.rank(), flipped: flip, first_discrepancy: first })
}

/// A toric threefold obtained by moving every blowup center of the program
/// to a torus-invariant one, with the images of the pair's basis classes as
/// combinations of toric divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDegeneration {
    pub fan: Fan3,
    pub subdivisions: Vec<Vec<usize>>,
    pub images: Vec<Vec<i64>>,
}

fn best_cone(f: &Fan3, must: &[usize]) -> Option<[usize; 3]> {
    f.cones
        .iter()
        .filter(|c| must.iter().all(|v| c.contains(v)))
        .min_by_key(|c| {
            let mut s = **c;
            s.sort_unstable();
            (s[2], s)
        })
        .copied()
}

/// Degenerate the centers: a point on `D_v ∩ D_w` goes to a fixed point on
/// that curve, a curve in `D_v` of the class of a boundary curve `D_v ∩ D_x`
/// goes to that curve. Returns `None` for other programs.
pub fn toric_degeneration(p: &LogCY3Pair) -> Result<Option<ToricDegeneration>> {
    let mut fan = p.spec().fan.clone();
    let pic = p.fan().pic();
    let mut images: Vec<Vec<i64>> = pic
        .basis_rays
        .iter()
        .map(|&r| {
            let mut v = vec![0; fan.rays.len()];
            v[r] = 1;
            v
        })
        .collect();
    let mut subdivisions = Vec::new();
    for (k, step) in p.spec().steps.iter().enumerate() {
        let target: Vec<usize> = match step {
            BlowupStep::Point { edge: (v, w), .. } => match best_cone(&fan, &[*v, *w]) {
                Some(c) => c.to_vec(),
                None => return Ok(None),
            },
            BlowupStep::Curve { component, class, .. } => {
                let c = p.component(*component);
                let t = c.toric_rank();
                if class.len() != t || c.excs.iter().any(|e| e.step < k) {
                    return Ok(None);
                }
                let found = (0..c.n_edges()).find_map(|pos| {
                    let x = c.base.neighbors[pos];
                    (c.base.curve_class(pos) == *class && best_cone(&fan, &[*component, x]).is_some())
                        .then_some(x)
                });
                match found {
                    Some(x) => vec![*component, x],
                    None => return Ok(None),
                }
            }
        };
        fan = star_subdivide(&fan, &target)?;
        for img in images.iter_mut() {
            let s = target.iter().map(|&r| img[r]).sum();
            img.push(s);
        }
        let mut e = vec![0; fan.rays.len()];
        e[fan.rays.len() - 1] = 1;
        images.push(e);
        subdivisions.push(target);
    }
    Ok(Some(ToricDegeneration { fan, subdivisions, images }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicDiscrepancy {
    pub triple: [usize; 3],
    pub pair: i64,
    pub toric: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicOracleReport {
    pub subdivisions: Vec<Vec<usize>>,
    pub checked: usize,
    pub first_discrepancy: Option<CubicDiscrepancy>,
}

impl CubicOracleReport {
    pub fn agree(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// Triple product of combinations of toric divisors.
pub fn ray_cubic(f: &SmoothFan, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &x) in a.iter().enumerate().filter(|t| *t.1 != 0) {
        for (j, &y) in b.iter().enumerate().filter(|t| *t.1 != 0) {
            for (k, &z) in c.iter().enumerate().filter(|t| *t.1 != 0) {
                s += x * y * z * f.ray_triple(i, j, k);
            }
        }
    }
    s
}

/// Compare the pair's cubic tensor entrywise with that of its toric
/// degeneration. `None` if the program has no torus-invariant degeneration.
pub fn cubic_oracle(p: &LogCY3Pair) -> Result<Option<CubicOracleReport>> {
    let Some(d) = toric_degeneration(p)? else {
        return Ok(None);
    };
    let f = SmoothFan::new(d.fan.clone(), &[])?;
    let n = p.rank();
    let mut checked = 0;
    let mut first = None;
    'outer: for i in 0..n {
        for j in i..n {
            for k in j..n {
                checked += 1;
                let a = p.triple(i, j, k);
                let b = ray_cubic(&f, &d.images[i], &d.images[j], &d.images[k]);
                if a != b {
                    first = Some(CubicDiscrepancy { triple: [i, j, k], pair: a, toric: b });
                    break 'outer;
                }
            }
        }
    }
    Ok(Some(CubicOracleReport { subdivisions: d.subdivisions, checked, first_discrepancy: first }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pair::PairSpec;

    #[test]
    fn paths_agree_on_bundled_pairs() {
        for (name, spec) in fixtures::bundled_pairs() {
            let p = LogCY3Pair::new(spec).unwrap();
            let r = compare_period_paths(&p, false).unwrap();
            assert!(r.agree(), "{name}: {:?}", r.first_discrepancy);
        }
    }

    #[test]
    fn flipped_orientation_disagrees_on_conic() {
        let p = LogCY3Pair::new(fixtures::p3_conic()).unwrap();
        let r = compare_period_paths(&p, true).unwrap();
        let d = r.first_discrepancy.expect("flip should be detected");
        assert_eq!(&d.lambda_path * &d.cocycle_path, GaussianRational::one());
    }

    #[test]
    fn flip_is_invisible_on_toric() {
        let p = LogCY3Pair::new(PairSpec::toric(fixtures::p3_fan())).unwrap();
        assert!(compare_period_paths(&p, true).unwrap().agree());
    }

    #[test]
    fn cubic_oracle_on_invariant_programs() {
        for (name, spec) in fixtures::invariant_center_pairs() {
            let p = LogCY3Pair::new(spec).unwrap();
            let r = cubic_oracle(&p).unwrap().expect(name);
            assert!(r.agree(), "{name}: {:?}", r.first_discrepancy);
            assert_eq!(r.checked, (p.rank() * (p.rank() + 1) * (p.rank() + 2)) / 6);
        }
    }

    #[test]
    fn conic_has_no_invariant_degeneration() {
        let p = LogCY3Pair::new(fixtures::p3_conic()).unwrap();
        assert!(cubic_oracle(&p).unwrap().is_none());
    }

    #[test]
    fn toric_degeneration_of_empty_program_is_identity() {
        let p = LogCY3Pair::new(PairSpec::toric(fixtures::p1p1p1_fan())).unwrap();
        let r = cubic_oracle(&p).unwrap().unwrap();
        assert!(r.subdivisions.is_empty() && r.agree());
    }
}
