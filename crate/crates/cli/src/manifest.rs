use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A numeric output together with its certified error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    #[serde(with = "ext_f64")]
    pub value: f64,
    /// `inf` when no bound is available.
    #[serde(with = "ext_f64")]
    pub error: f64,
}

/// `f64` as a JSON number, or `"inf"`, `"-inf"`, `"nan"`.
mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&crate::output::fmt_f64(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("not a float: {s:?}"))),
            },
        }
    }
}

/// Everything needed to reproduce and audit one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    pub wall_time_seconds: f64,
    pub outputs: BTreeMap<String, Certified>,
}

impl RunManifest {
    pub fn versions() -> BTreeMap<String, String> {
        BTreeMap::from([
            ("arithdyn".to_string(), arithdyn::VERSION.to_string()),
            ("arithdyn-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ])
    }
}
