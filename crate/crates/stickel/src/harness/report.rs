use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::groupring::{CoeffRing, GroupRingElem, ModElem, ZElem};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    VerifiedExact,
    VerifiedAtPrecision,
    Failed,
    OutOfScope,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    /// the invariant being exercised
    pub invariant: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn exact(id: impl Into<String>, invariant: &str, ok: bool, witness: impl FnOnce() -> String) -> Self {
        Check {
            id: id.into(),
            invariant: invariant.into(),
            status: if ok { Status::VerifiedExact } else { Status::Failed },
            precision: None,
            witness: (!ok).then(witness),
            detail: Value::Null,
        }
    }

    pub fn at_precision(id: impl Into<String>, invariant: &str, prec: u32, ok: bool, witness: impl FnOnce() -> String) -> Self {
        Check {
            id: id.into(),
            invariant: invariant.into(),
            status: if ok { Status::VerifiedAtPrecision } else { Status::Failed },
            precision: Some(prec),
            witness: (!ok).then(witness),
            detail: Value::Null,
        }
    }

    pub fn out_of_scope(id: impl Into<String>, invariant: &str, why: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            invariant: invariant.into(),
            status: Status::OutOfScope,
            precision: None,
            witness: Some(why.into()),
            detail: Value::Null,
        }
    }

    /// Scope errors become out-of-scope, anything else a failure.
    pub fn from_error(id: impl Into<String>, invariant: &str, e: &Error) -> Self {
        match e {
            Error::OutOfScope(_) | Error::Unsupported(_) | Error::Precision(_) | Error::Ramified(_) => {
                Check::out_of_scope(id, invariant, e.to_string())
            }
            _ => Check {
                id: id.into(),
                invariant: invariant.into(),
                status: Status::Failed,
                precision: None,
                witness: Some(e.to_string()),
                detail: Value::Null,
            },
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub kind: String,
    pub inputs: Value,
    pub values: serde_json::Map<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(experiment: &str, kind: &str, inputs: Value) -> Self {
        Report {
            experiment: experiment.into(),
            kind: kind.into(),
            inputs,
            values: serde_json::Map::new(),
            checks: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn value(&mut self, key: impl Into<String>, v: Value) {
        self.values.insert(key.into(), v);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportSet {
    pub report_version: u32,
    pub kind: String,
    /// sign and orientation conventions shared by every report
    pub conventions: Vec<&'static str>,
    pub reports: Vec<Report>,
}

pub const CONVENTIONS: [&str; 4] = [
    "lambda_w(u) = deg_w(u) = ord_w(u) deg w; rec_w(uniformizer) = arithmetic Frobenius",
    "regulator places are S without its first place, in configured order",
    "unit bases oriented so that (-1)^r det(deg_{w_i}(u_j)) > 0, i.e. the log-regulator is positive",
    "a_m denotes the coefficient of (u - 1)^m in Theta",
];

impl ReportSet {
    pub fn new(kind: &str, mut reports: Vec<Report>) -> Self {
        reports.sort_by(|a, b| a.experiment.cmp(&b.experiment));
        ReportSet { report_version: REPORT_VERSION, kind: kind.into(), conventions: CONVENTIONS.to_vec(), reports }
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Sparse group ring element: group invariants and nonzero terms with
/// exact coefficients as decimal strings.
pub fn group_elem_json<R: CoeffRing>(x: &GroupRingElem<R>, show: impl Fn(&R::Elem) -> String) -> Value
where
    R::Elem: PartialEq,
{
    let g = x.group();
    let zero = x.ring().zero();
    let terms: Vec<Value> = x
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != zero)
        .map(|(i, c)| json!([g.coords(i), show(c)]))
        .collect();
    json!({ "group": g.factors(), "terms": terms })
}

pub fn zelem_json(x: &ZElem) -> Value {
    group_elem_json(x, |c| c.to_string())
}

pub fn modelem_json(x: &ModElem) -> Value {
    let mut v = group_elem_json(x, |c| c.to_string());
    v["modulus"] = json!(x.ring().modulus.to_string());
    v
}
