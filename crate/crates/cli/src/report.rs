//! Deterministic report assembly: ordered JSON objects and fixed float
//! formatting so reports are byte-stable across runs.

use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::verify::SuiteResult;
use looplab_core::IndexClass;

/// Fixed-width scientific notation keeps reports byte-stable.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn config_value(cfg: &RunConfig) -> Value {
    let mut m = Map::new();
    m.insert("modes".into(), Value::from(cfg.modes));
    m.insert("emax".into(), Value::from(cfg.emax));
    m.insert("mode".into(), Value::from(cfg.mode_name()));
    m.insert("level_c".into(), Value::from(cfg.level_c));
    m.insert("level_k".into(), Value::from(cfg.level_k));
    m.insert("window".into(), Value::from(cfg.window));
    m.insert("quad_order".into(), Value::from(cfg.quad_order));
    m.insert("tolerance".into(), Value::from(fmt_float(cfg.tolerance)));
    Value::Object(m)
}

pub fn report_skeleton(command: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(1));
    m.insert("command".into(), Value::from(command));
    m.insert("config".into(), config_value(cfg));
    m
}

pub fn suites_value(suites: &[SuiteResult]) -> Value {
    Value::Array(
        suites
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert("name".into(), Value::from(s.name));
                m.insert("status".into(), Value::from(s.status.as_str()));
                m.insert("max_deviation".into(), Value::from(fmt_float(s.max_deviation)));
                m.insert("detail".into(), Value::from(s.detail.clone()));
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn index_value(index: &IndexClass) -> Value {
    let mut m = Map::new();
    for (class, mult) in index.iter() {
        m.insert(class.to_string(), Value::from(mult));
    }
    Value::Object(m)
}

pub fn render(map: Map<String, Value>) -> String {
    let mut text = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
    text.push('\n');
    text
}
