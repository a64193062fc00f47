pub mod ito;
pub mod map;
pub mod pde;
pub mod phase;
pub mod regularize;
pub mod variation;

use serde::Serialize;
use serde_json::{Map, Value};

/// Independent RNG stream per suite so that suites can run in any
/// combination without sharing draws.
pub(crate) fn stream_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub(crate) fn params_map(p: &impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(p) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}
