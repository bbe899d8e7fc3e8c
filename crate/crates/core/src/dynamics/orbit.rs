use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::RationalMap;
use crate::proj::ProjPointQ;

/// How an orbit computation ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrbitStatus {
    /// The last point exceeded the height cap.
    Escaping,
    /// `f^(entry + length)(x) = f^entry(x)`.
    Cycle { entry: usize, length: usize },
    BudgetExhausted,
}

/// A gcd-reduced orbit `x_0, x_1, ...`.
///
/// `gcds[k]` is the integer extracted when mapping `points[k]`, so
/// `U(a_k, b_k) = +-gcds[k] a_(k+1)`. For a cycle the last entry of `gcds`
/// belongs to the step that returns to `points[entry]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub points: Vec<ProjPointQ>,
    #[serde(
        serialize_with = "crate::serde_util::ser_bigints",
        deserialize_with = "crate::serde_util::de_bigints"
    )]
    pub gcds: Vec<BigInt>,
    pub status: OrbitStatus,
}

impl OrbitRecord {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self.status, OrbitStatus::Cycle { .. })
    }
}

/// Iterates until a point repeats, the height exceeds `height_cap`, or
/// `n_max` steps have been taken.
pub fn iterate(f: &RationalMap, x: &ProjPointQ, n_max: usize, height_cap: f64) -> OrbitRecord {
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
    let mut points = vec![x.clone()];
    let mut gcds = Vec::new();
    seen.insert(x.clone(), 0);
    if x.height() > height_cap {
        return OrbitRecord {
            points,
            gcds,
            status: OrbitStatus::Escaping,
        };
    }
    for _ in 0..n_max {
        let (y, g) = f.step(points.last().expect("orbit is nonempty"));
        gcds.push(g);
        if let Some(&entry) = seen.get(&y) {
            let length = points.len() - entry;
            return OrbitRecord {
                points,
                gcds,
                status: OrbitStatus::Cycle { entry, length },
            };
        }
        let escaped = y.height() > height_cap;
        seen.insert(y.clone(), points.len());
        points.push(y);
        if escaped {
            return OrbitRecord {
                points,
                gcds,
                status: OrbitStatus::Escaping,
            };
        }
    }
    OrbitRecord {
        points,
        gcds,
        status: OrbitStatus::BudgetExhausted,
    }
}
