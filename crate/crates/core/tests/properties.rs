//! Randomized checks of the algebraic invariants, all in exact arithmetic.

use proptest::prelude::*;

use logcy3::exactnum::{
    cokernel_structure, kernel_basis, rank, snf, solvable_over_torus, BigInt, GaussianRational, IntMatrix,
};
use logcy3::fixtures;
use logcy3::pair::{validate_pair, BlowupStep, LogCY3Pair, PairSpec};
use logcy3::periods::{
    act_on_marking, edge_matching_map, lambda_lattice, marked_period, marked_value, theta, unmarked_period,
};
use logcy3::boundary::Marking;
use logcy3::toric::{star_subdivide, validate_fan, Fan3, SmoothFan};
use logcy3::torelli::{decide_isomorphism, torus_translate, Correspondence};

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    ((-9i64..=9, 1i64..=9), (-9i64..=9, 1i64..=9))
        .prop_map(|(re, im)| GaussianRational::from_parts(re, im))
        .prop_filter("nonzero", |g| !g.is_zero())
}

fn unit(d: &BigInt) -> bool {
    *d == BigInt::from(1) || *d == BigInt::from(-1)
}

/// A bundled pair followed by up to two random point blowups.
fn random_pair() -> impl Strategy<Value = LogCY3Pair> {
    let bases = fixtures::bundled_pairs();
    let n = bases.len();
    (0..n, prop::collection::vec((any::<prop::sample::Index>(), gaussian()), 0..3)).prop_filter_map(
        "valid program",
        move |(b, extra)| {
            let mut spec: PairSpec = bases[b].1.clone();
            let f = SmoothFan::new(spec.fan.clone(), &spec.edge_orientations).ok()?;
            for (idx, coord) in extra {
                let e = f.dual().edge(idx.index(f.dual().edges().len()));
                spec.steps.push(BlowupStep::Point { edge: (e.tail, e.head), coord });
            }
            validate_pair(&spec).ok()?;
            LogCY3Pair::new(spec).ok()
        },
    )
}

/// A bundled toric fan with up to two random star subdivisions.
fn random_fan() -> impl Strategy<Value = Fan3> {
    let fans = fixtures::toric_fans();
    let n = fans.len();
    (0..n, prop::collection::vec((any::<prop::sample::Index>(), any::<bool>(), 0usize..3), 0..3)).prop_map(
        move |(b, subs)| {
            let mut f = fans[b].1.clone();
            for (idx, wall, drop) in subs {
                let c = f.cones[idx.index(f.cones.len())];
                let target: Vec<usize> =
                    if wall { c.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v).collect() } else { c.to_vec() };
                f = star_subdivide(&f, &target).expect("star subdivision of a cone or wall");
            }
            f
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_round_trip(rows in small_matrix()) {
        let a = IntMatrix::from_rows(&rows);
        let s = snf(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(unit(&s.u.det()) && unit(&s.v.det()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[1] != BigInt::from(0) {
                prop_assert!(w[0] != BigInt::from(0) && (&w[1] % &w[0]) == BigInt::from(0));
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert_eq!(&s.d[(i, j)], &BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_complementary(rows in small_matrix()) {
        let a = IntMatrix::from_rows(&rows);
        let k = kernel_basis(&a);
        prop_assert_eq!(rank(&a) + k.len(), a.cols());
        for v in &k {
            prop_assert!(a.mul_vec(v).iter().all(|x| *x == BigInt::from(0)));
        }
        if !k.is_empty() {
            let m = IntMatrix::from_big_rows(k.clone(), a.cols()).transpose();
            prop_assert!(cokernel_structure(&m).is_free());
        }
    }

    #[test]
    fn torus_solvability_survives_row_operations(
        rows in small_matrix(),
        targets in prop::collection::vec(gaussian(), 4),
        i in 0usize..4, j in 0usize..4, c in -2i64..=2,
    ) {
        let a = IntMatrix::from_rows(&rows);
        let r = a.rows();
        let (i, j) = (i % r, j % r);
        prop_assume!(i != j);
        let t = &targets[..r];
        let mut rows2 = rows.clone();
        for col in 0..rows2[i].len() {
            rows2[i][col] += c * rows[j][col];
        }
        let mut t2 = t.to_vec();
        t2[i] = &t[i] * &t[j].pow(c).unwrap();
        let before = solvable_over_torus(&a, t).unwrap().solvable;
        let after = solvable_over_torus(&IntMatrix::from_rows(&rows2), &t2).unwrap().solvable;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn subdivided_fans_stay_valid(f in random_fan()) {
        prop_assert!(validate_fan(&f).is_ok());
        let s = SmoothFan::new(f, &[]).unwrap();
        prop_assert_eq!(s.dual().euler_characteristic(), 2);
    }

    #[test]
    fn linear_equivalence_kills_triple_products(f in random_fan(), a in 0usize..64, b in 0usize..64) {
        let s = SmoothFan::new(f.clone(), &[]).unwrap();
        let n = f.rays.len();
        let (a, b) = (a % n, b % n);
        for m in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            let mut total = 0;
            for (v, r) in f.rays.iter().enumerate() {
                let pairing = m[0] * r[0] + m[1] * r[1] + m[2] * r[2];
                total += pairing * s.ray_triple(v, a, b);
            }
            prop_assert_eq!(total, 0);
        }
    }

    #[test]
    fn cubic_form_is_symmetric(p in random_pair(), seed in prop::collection::vec(-3i64..=3, 48)) {
        let n = p.rank();
        let (a, b, c) = (&seed[..n], &seed[16..16 + n], &seed[32..32 + n]);
        let x = p.cubic(a, b, c);
        prop_assert_eq!(x, p.cubic(b, a, c));
        prop_assert_eq!(x, p.cubic(c, b, a));
        prop_assert_eq!(x, p.cubic(a, c, b));
    }

    #[test]
    fn restrictions_satisfy_edge_matching(p in random_pair(), seed in prop::collection::vec(-4i64..=4, 16)) {
        let l = &seed[..p.rank()];
        let x = p.restrict_flat(l);
        let m = edge_matching_map(&p).matrix;
        prop_assert!(m.mul_vec_i64(&x).iter().all(|v| *v == BigInt::from(0)));
    }

    #[test]
    fn period_is_trivial_on_k(p in random_pair()) {
        let phi = unmarked_period(&p).unwrap();
        for j in 0..p.rank() {
            let x = p.restrict_flat(&p.basis_vector(j));
            prop_assert!(marked_value(&p, &Marking::markers(p.n_edges()), &x).unwrap().is_one());
        }
        prop_assert_eq!(phi.domain.len(), lambda_lattice(&p).unwrap().rank());
    }

    #[test]
    fn marking_independence_on_lambda(p in random_pair(), m in prop::collection::vec(gaussian(), 30)) {
        let m = Marking { points: m[..p.n_edges()].to_vec() };
        let phi = unmarked_period(&p).unwrap();
        for (x, v) in phi.domain.iter().zip(&phi.values) {
            prop_assert_eq!(&marked_value(&p, &m, x).unwrap(), v);
        }
    }

    #[test]
    fn torsor_identity(p in random_pair(), m in prop::collection::vec(gaussian(), 30), alpha in prop::collection::vec(gaussian(), 30)) {
        let n = p.n_edges();
        let m = Marking { points: m[..n].to_vec() };
        let alpha = &alpha[..n];
        let lhs = theta(&p, alpha).unwrap().product(&marked_period(&p, &m).unwrap());
        prop_assert_eq!(lhs, marked_period(&p, &act_on_marking(alpha, &m)).unwrap());
    }

    #[test]
    fn characters_are_multiplicative(
        p in random_pair(),
        m in prop::collection::vec(gaussian(), 30),
        a in prop::collection::vec(-3i64..=3, 64),
        b in prop::collection::vec(-3i64..=3, 64),
    ) {
        let d = p.direct_sum_rank();
        let m = Marking { points: m[..p.n_edges()].to_vec() };
        let (a, b) = (&a[..d], &b[..d]);
        let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let lhs = marked_value(&p, &m, &ab).unwrap();
        let rhs = &marked_value(&p, &m, a).unwrap() * &marked_value(&p, &m, b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn torus_translates_are_isomorphic(p in random_pair(), t in prop::collection::vec(gaussian(), 3)) {
        let q = LogCY3Pair::new(torus_translate(p.spec(), &[t[0].clone(), t[1].clone(), t[2].clone()]).unwrap()).unwrap();
        let v = decide_isomorphism(&p, &q, &Correspondence::identity(&p)).unwrap();
        prop_assert_eq!(v.kind(), "isomorphic");
    }
}
