//! Bundled example fans and pairs.

use crate::exactnum::GaussianRational;
use crate::pair::{BlowupStep, PairSpec};
use crate::toric::{star_subdivide, Fan3, Orientation};

fn g(s: &str) -> GaussianRational {
    s.parse().expect("fixture coordinate")
}

pub fn p3_fan() -> Fan3 {
    Fan3 {
        rays: vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
        cones: vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
        orientation: Orientation { cone: [0, 1, 2], sign: 1 },
    }
}

pub fn p1p1p1_fan() -> Fan3 {
    let rays = vec![[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
    let mut cones = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                cones.push([x, y, z]);
            }
        }
    }
    Fan3 { rays, cones, orientation: Orientation { cone: [0, 2, 4], sign: 1 } }
}

/// Blowup of `P^3` at the torus-fixed point of the cone `{0, 1, 2}`.
pub fn bl_point_p3_fan() -> Fan3 {
    star_subdivide(&p3_fan(), &[0, 1, 2]).expect("cone of P^3")
}

/// Blowup of `P^3` along the torus-invariant line of the wall `{0, 1}`.
pub fn bl_line_p3_fan() -> Fan3 {
    star_subdivide(&p3_fan(), &[0, 1]).expect("wall of P^3")
}

/// Blowup of `P^3` at two torus-fixed points.
pub fn bl_two_points_p3_fan() -> Fan3 {
    let f = star_subdivide(&p3_fan(), &[0, 1, 2]).expect("cone of P^3");
    star_subdivide(&f, &[1, 2, 3]).expect("cone of Bl P^3")
}

/// All bundled toric fans with their names.
pub fn toric_fans() -> Vec<(&'static str, Fan3)> {
    vec![
        ("p3", p3_fan()),
        ("p1p1p1", p1p1p1_fan()),
        ("bl-point-p3", bl_point_p3_fan()),
        ("bl-line-p3", bl_line_p3_fan()),
        ("bl-two-points-p3", bl_two_points_p3_fan()),
    ]
}

/// `P^3` with a conic of class `2H` blown up in the plane `D_3`. Its points
/// on the three edges multiply to 1, as the class requires.
pub fn p3_conic() -> PairSpec {
    PairSpec::with_steps(
        p3_fan(),
        vec![BlowupStep::Curve {
            component: 3,
            class: vec![2],
            points: vec![
                (0, vec![g("2"), g("3")]),
                (1, vec![g("5"), g("1/7")]),
                (2, vec![g("1/2"), g("7/15")]),
            ],
        }],
    )
}

/// `P^3` blown up at two points of the stratum `D_0 ∩ D_1`.
pub fn p3_two_points() -> PairSpec {
    PairSpec::with_steps(
        p3_fan(),
        vec![
            BlowupStep::Point { edge: (0, 1), coord: g("2") },
            BlowupStep::Point { edge: (0, 1), coord: g("5/3") },
        ],
    )
}

/// The conic pair followed by two point blowups.
pub fn p3_mixed() -> PairSpec {
    let mut spec = p3_conic();
    spec.steps.push(BlowupStep::Point { edge: (0, 3), coord: g("1/2+1*i") });
    spec.steps.push(BlowupStep::Point { edge: (1, 2), coord: g("4") });
    spec
}

/// `P^1 x P^1 x P^1` with a curve of bidegree (1, 1) blown up in `D_0`.
pub fn p1p1p1_curve() -> PairSpec {
    PairSpec::with_steps(
        p1p1p1_fan(),
        vec![BlowupStep::Curve {
            component: 0,
            class: vec![1, 1],
            points: vec![
                (2, vec![g("2")]),
                (3, vec![g("3")]),
                (4, vec![g("5")]),
                (5, vec![g("1/30")]),
            ],
        }],
    )
}

/// Every bundled pair: the toric fans with empty programs and the blowup
/// examples.
pub fn bundled_pairs() -> Vec<(&'static str, PairSpec)> {
    let mut out: Vec<(&'static str, PairSpec)> =
        toric_fans().into_iter().map(|(n, f)| (n, PairSpec::toric(f))).collect();
    out.push(("p3-conic", p3_conic()));
    out.push(("p3-two-points", p3_two_points()));
    out.push(("p3-mixed", p3_mixed()));
    out.push(("p1p1p1-curve", p1p1p1_curve()));
    out
}

/// `P^3` blown up along a line of the plane `D_3`.
pub fn p3_line() -> PairSpec {
    PairSpec::with_steps(
        p3_fan(),
        vec![BlowupStep::Curve {
            component: 3,
            class: vec![1],
            points: vec![(0, vec![g("2")]), (1, vec![g("3")]), (2, vec![g("-1/6")])],
        }],
    )
}

/// Programs whose centers can be moved to torus-invariant ones.
pub fn invariant_center_pairs() -> Vec<(&'static str, PairSpec)> {
    let point = |edge, coord: &str| BlowupStep::Point { edge, coord: g(coord) };
    let mut line_point = p3_line();
    line_point.steps.push(point((1, 2), "7"));
    vec![
        ("p3-point", PairSpec::with_steps(p3_fan(), vec![point((0, 1), "2")])),
        ("p3-two-points", p3_two_points()),
        ("p3-points-apart", PairSpec::with_steps(p3_fan(), vec![point((0, 1), "2"), point((2, 3), "1/3+1*i")])),
        ("p3-line", p3_line()),
        ("p3-line-point", line_point),
        ("p1p1p1-point", PairSpec::with_steps(p1p1p1_fan(), vec![point((0, 2), "5")])),
    ]
}

/// The conic pair moved by the torus element `(2, 1/3 + i, -5/7)`.
pub fn p3_conic_translated() -> PairSpec {
    crate::torelli::torus_translate(&p3_conic(), &[g("2"), g("1/3+1*i"), g("-5/7")]).expect("conic edges")
}

/// The conic pair with its two points on the edge `D_3 ∩ D_0` moved to
/// `(2s, 3/s)` for `s = 5`. The product of the points is kept, so the
/// conic still exists, but the period changes.
pub fn p3_conic_perturbed() -> PairSpec {
    let mut spec = p3_conic();
    if let BlowupStep::Curve { points, .. } = &mut spec.steps[0] {
        points[0].1 = vec![g("10"), g("3/5")];
    }
    spec
}
