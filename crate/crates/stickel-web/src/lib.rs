//! Browser bindings: run an experiment from TOML text, and explore the
//! augmentation filtration of a small group ring.

use serde::Serialize;
use stickel::abelian::FinAbGroup;
use stickel::augfilt::AugFiltration;
use stickel::groupring::ModPow;
use stickel::harness::{self, ConfigFile, RunOptions};

/// Kinds the page offers; the slow ones stay on the CLI.
pub const DEMO_KINDS: [&str; 4] = ["theta", "gross-check", "stark-check", "selftest"];

/// Runs one experiment kind on a TOML config and returns the JSON report.
pub fn run_experiment(kind: &str, config: &str) -> Result<String, String> {
    if !DEMO_KINDS.contains(&kind) {
        return Err(format!("{kind} is not available in the demo"));
    }
    let file = ConfigFile::parse(config).map_err(|e| e.to_string())?;
    let set = harness::run(kind, &file, &RunOptions::default()).map_err(|e| e.to_string())?;
    Ok(set.to_json())
}

/// The preset config for a kind, as a starting point for editing.
pub fn preset(kind: &str) -> Option<String> {
    harness::preset(kind).map(str::to_string)
}

#[derive(Serialize)]
struct FiltrationRow {
    n: usize,
    /// log_p |I^n / I^{n+1}|
    log_quotient: u32,
    /// log_p |I^n|
    log_ideal: u32,
}

#[derive(Serialize)]
struct FiltrationTable {
    group: Vec<u64>,
    p: u64,
    precision: u32,
    rows: Vec<FiltrationRow>,
}

/// Sizes of I^n and I^n / I^{n+1} in Z/p^M[H] for H = prod Z/factors.
pub fn filtration_table(factors: &[u64], p: u64, precision: u32, depth: usize) -> Result<String, String> {
    let h = FinAbGroup::new(factors.to_vec()).map_err(|e| e.to_string())?;
    if h.order() > 243 {
        return Err(format!("|H| = {} is too large for the page", h.order()));
    }
    let ring = ModPow::new(p, precision).map_err(|e| e.to_string())?;
    let filt = AugFiltration::build(&h, ring, depth).map_err(|e| e.to_string())?;
    let rows = (0..depth)
        .map(|n| {
            let (a, b) = (filt.log_card(n), filt.log_card(n + 1));
            FiltrationRow { n, log_quotient: a - b, log_ideal: a }
        })
        .collect();
    let t = FiltrationTable { group: h.factors().to_vec(), p, precision, rows };
    serde_json::to_string_pretty(&t).map_err(|e| e.to_string())
}

#[cfg(target_family = "wasm")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = runExperiment)]
    pub fn run_experiment(kind: &str, config: &str) -> Result<String, JsValue> {
        super::run_experiment(kind, config).map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen(js_name = presetConfig)]
    pub fn preset_config(kind: &str) -> Option<String> {
        super::preset(kind)
    }

    #[wasm_bindgen(js_name = filtrationTable)]
    pub fn filtration_table(factors: Vec<u64>, p: u64, precision: u32, depth: usize) -> Result<String, JsValue> {
        super::filtration_table(&factors, p, precision, depth).map_err(|e| JsValue::from_str(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_preset_runs() {
        let json = run_experiment("theta", &preset("theta").unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["kind"], "theta");
        assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rejects_slow_kinds() {
        assert!(run_experiment("factorization", "experiment = []").is_err());
        assert!(run_experiment("theta", "not toml [").is_err());
    }

    #[test]
    fn cyclic_filtration_quotients() {
        // Z/p^M[Z/p]: each quotient I^n / I^{n+1} is Z/p for 1 <= n < p
        let v: serde_json::Value = serde_json::from_str(&filtration_table(&[3], 3, 1, 3).unwrap()).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows[1]["log_quotient"], 1);
        assert_eq!(rows[2]["log_quotient"], 1);
        assert_eq!(rows[0]["log_ideal"], 3);
    }

    #[test]
    fn refuses_large_groups() {
        assert!(filtration_table(&[27, 27], 3, 1, 2).is_err());
    }
}
