use serde::{Deserialize, Serialize};

use super::{iterate, RationalMap};
use crate::proj::{count_points, enumerate_points, height_bound_from_log, ProjPointQ};
use crate::Result;

/// Height bounds used for the preperiodic search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NorthcottBound {
    /// Every preperiodic point has `h(x) <= bound`.
    pub bound: f64,
    /// Orbits are declared escaping above this height.
    pub height_cap: f64,
}

/// `B = c_max (2d - 1) / (d - 1)^2` and the orbit cap `B + c_upper`.
pub fn northcott_bound(f: &RationalMap) -> NorthcottBound {
    let d = f.degree() as f64;
    let k = f.constants();
    let bound = k.c_max * (2.0 * d - 1.0) / ((d - 1.0) * (d - 1.0));
    // Slack for rounding in the logarithms, so a point with h = B exactly
    // is never dropped.
    let bound = bound * (1.0 + 1e-12) + 1e-12;
    NorthcottBound {
        bound,
        height_cap: bound + k.c_upper,
    }
}

/// All preperiodic points of `f` in `P^1(Q)`, sorted.
pub fn preperiodic_points_rational(f: &RationalMap) -> Result<Vec<ProjPointQ>> {
    let nb = northcott_bound(f);
    let candidates = enumerate_points(1, nb.bound)?;
    // A preperiodic orbit stays below the cap, so its length is at most
    // the number of points there.
    let n_max = count_points(1, height_bound_from_log(nb.height_cap)) as usize + 1;
    let mut out: Vec<ProjPointQ> = candidates
        .into_iter()
        .filter(|x| iterate(f, x, n_max, nb.height_cap).is_preperiodic())
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[[i64; 2]]) -> Vec<ProjPointQ> {
        let mut v: Vec<ProjPointQ> = c.iter().map(|p| ProjPointQ::from_i64(p).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn squaring() {
        let f = RationalMap::power_map(2).unwrap();
        assert_eq!(
            preperiodic_points_rational(&f).unwrap(),
            pts(&[[0, 1], [1, 0], [1, 1], [1, -1]])
        );
    }

    #[test]
    fn z2_minus_1() {
        let f = RationalMap::from_i64(&[1, 0, -1], &[0, 0, 1]).unwrap();
        assert_eq!(
            preperiodic_points_rational(&f).unwrap(),
            pts(&[[0, 1], [1, 0], [1, 1], [1, -1]])
        );
    }

    #[test]
    fn z2_plus_1_only_infinity() {
        let f = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        assert_eq!(preperiodic_points_rational(&f).unwrap(), pts(&[[1, 0]]));
    }

    #[test]
    fn bound_values() {
        let f = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        let b = northcott_bound(&f);
        assert!((b.bound - 3.0 * 2f64.ln()).abs() < 1e-10);
        assert!(height_bound_from_log(b.bound) == 8);
    }
}
