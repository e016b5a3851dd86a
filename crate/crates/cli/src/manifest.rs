use std::time::{SystemTime, UNIX_EPOCH};

use odd_ramsey::tiles::TileSystem;
use serde::{Deserialize, Serialize};

use crate::args::{Command, Global};

pub const SCHEMA_ID: &str = "odd-ramsey/report-v1";

/// Everything needed to rerun a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub parameters: Parameters,
    pub threads: usize,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub kind: String,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub seed: Option<u64>,
    pub guard: Option<u64>,
    pub budget: Option<u64>,
    /// Subcommand options.
    pub options: serde_json::Value,
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

impl RunManifest {
    pub fn new(global: &Global, command: &Command, argv: Vec<String>, seed: Option<u64>, threads: usize) -> Self {
        let options = serde_json::to_value(command).unwrap_or(serde_json::Value::Null);
        RunManifest {
            tool: "odd-ramsey".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.name().into(),
            argv,
            parameters: Parameters {
                kind: serde_json::to_value(global.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                n: global.n,
                t: global.t,
                k: global.k,
                epsilon: global.eps,
                delta: global.delta,
                n1: global.n1,
                n2: global.n2,
                seed,
                guard: global.guard,
                budget: global.budget,
                options,
            },
            threads,
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
        }
    }

    /// Records the values a tile system resolved from defaults.
    pub fn resolve(&mut self, system: &TileSystem) {
        let p = &mut self.parameters;
        p.epsilon = Some(system.epsilon());
        p.delta = Some(system.delta());
        p.n1 = Some(system.palette().n1);
        p.n2 = Some(system.palette().n2);
    }
}
