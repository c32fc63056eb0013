use super::fan::{det3, sorted3, Fan3, Orientation};
use crate::error::{Error, Result};

/// Star subdivision at a cone given by two or three ray indices. The new
/// ray is appended last; the global orientation is preserved.
pub fn star_subdivide(f: &Fan3, target: &[usize]) -> Result<Fan3> {
    if !(2..=3).contains(&target.len()) || target.iter().any(|&i| i >= f.rays.len()) {
        return Err(Error::InvalidFan(format!("{target:?} is not a cone of the fan")));
    }
    let containing: Vec<usize> = (0..f.cones.len())
        .filter(|&c| target.iter().all(|t| f.cones[c].contains(t)))
        .collect();
    if containing.is_empty() {
        return Err(Error::InvalidFan(format!("{target:?} is not a cone of the fan")));
    }
    let mut ray = [0i64; 3];
    for &t in target {
        for k in 0..3 {
            ray[k] += f.rays[t][k];
        }
    }
    let new = f.rays.len();
    let mut rays = f.rays.clone();
    rays.push(ray);
    let mut cones = Vec::new();
    for (ci, c) in f.cones.iter().enumerate() {
        if containing.contains(&ci) {
            for &t in target {
                cones.push(c.map(|x| if x == t { new } else { x }));
            }
        } else {
            cones.push(*c);
        }
    }
    let eps = f.epsilon();
    let orientation = if cones.iter().any(|c| sorted3(*c) == sorted3(f.orientation.cone)) {
        f.orientation.clone()
    } else {
        let c = cones[0];
        let d = det3(&rays[c[0]], &rays[c[1]], &rays[c[2]]).signum() as i64;
        Orientation { cone: c, sign: eps * d }
    };
    Ok(Fan3 { rays, cones, orientation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::toric::validate_fan;

    #[test]
    fn blowup_of_point_and_line() {
        let p3 = fixtures::p3_fan();
        let pt = star_subdivide(&p3, &[0, 1, 2]).unwrap();
        assert_eq!(pt.rays.len(), 5);
        assert_eq!(pt.cones.len(), 6);
        assert_eq!(validate_fan(&pt), Ok(()));
        let line = star_subdivide(&p3, &[0, 1]).unwrap();
        assert_eq!(line.rays.len(), 5);
        assert_eq!(validate_fan(&line), Ok(()));
        assert_eq!(line.epsilon(), p3.epsilon());
    }

    #[test]
    fn disjoint_subdivisions_commute() {
        let p3 = fixtures::p3_fan();
        let a = star_subdivide(&star_subdivide(&p3, &[0, 1, 2]).unwrap(), &[0, 1, 3]).unwrap();
        let b = star_subdivide(&star_subdivide(&p3, &[0, 1, 3]).unwrap(), &[0, 1, 2]).unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn rejects_non_cone() {
        let f = fixtures::p1p1p1_fan();
        assert!(star_subdivide(&f, &[0, 1]).is_err());
        assert!(star_subdivide(&f, &[0]).is_err());
    }
}
