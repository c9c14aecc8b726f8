use serde::{Deserialize, Serialize};

use crate::classfield::LayerSpec;
use crate::error::{Error, Result};
use crate::fqpoly::{FqPoly, Place};
use crate::units::UnitExpr;

/// A place: "inf", or a monic irreducible as coefficients low to high.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceSpec {
    Named(String),
    Poly(Vec<u32>),
}

impl PlaceSpec {
    pub fn to_place(&self, q: u32) -> Result<Place> {
        match self {
            PlaceSpec::Named(s) if s == "inf" => Ok(Place::Infinity),
            PlaceSpec::Named(s) => Err(Error::Config(format!("unknown place name {s:?}; use \"inf\" or a coefficient list"))),
            PlaceSpec::Poly(c) => {
                let p = FqPoly::new(q, c.clone());
                let irreducible = p.deg() >= 1 && matches!(crate::fqpoly::factor(&p).1.as_slice(), [(_, 1)]);
                if !p.is_monic() || !irreducible {
                    return Err(Error::Config(format!("{p} is not a monic irreducible")));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

/// One term c * u_{i_1} ^ ... ^ u_{i_n} of a candidate eps; c = num/den.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsTerm {
    pub units: Vec<usize>,
    pub num: String,
    #[serde(default = "one_str")]
    pub den: String,
}

fn one_str() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub q: u32,
    /// M: computations in Z/p^M
    #[serde(default = "default_precision")]
    pub precision: u32,
    /// B; 0 picks the smallest bound that certifies Theta
    #[serde(default)]
    pub bound: usize,
    #[serde(default = "default_window")]
    pub window: usize,
    /// D: cap of filtration searches
    #[serde(default = "default_depth")]
    pub depth: usize,
    pub s: Vec<PlaceSpec>,
    pub t: Vec<PlaceSpec>,
    /// places split completely in K; their count is n
    #[serde(default)]
    pub s0: Vec<PlaceSpec>,
    #[serde(default)]
    pub layers: Vec<LayerSpec>,
    /// supplied basis of U; absent means computed
    #[serde(default)]
    pub units: Option<Vec<UnitExpr>>,
    #[serde(default)]
    pub eps: Option<Vec<EpsTerm>>,
    /// phi_i^(id)(u_j) rows for the Burns matrix
    #[serde(default)]
    pub phi: Option<Vec<Vec<i64>>>,
    /// constant extension degree and varpi values for Theta bridges
    #[serde(default)]
    pub bridge: Option<BridgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeSpec {
    pub constant_degree: u64,
    pub varpi: Vec<u64>,
}

fn default_precision() -> u32 {
    3
}

fn default_window() -> usize {
    crate::lseries::DEFAULT_WINDOW
}

fn default_depth() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut ids: Vec<&str> = file.experiments.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("duplicate experiment id".into()));
        }
        for e in &file.experiments {
            e.validate()?;
        }
        Ok(file)
    }
}

/// Places resolved against q.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub s: Vec<Place>,
    pub t: Vec<Place>,
    pub s0: Vec<Place>,
}

impl ExperimentConfig {
    pub fn p(&self) -> u64 {
        self.q as u64
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let conv = |v: &[PlaceSpec]| v.iter().map(|x| x.to_place(self.q)).collect::<Result<Vec<_>>>();
        Ok(Resolved { s: conv(&self.s)?, t: conv(&self.t)?, s0: conv(&self.s0)? })
    }

    /// Global hypotheses: S and T disjoint, T nonempty, S_0 a proper subset
    /// of S, D < p, no repeated places.
    pub fn validate(&self) -> Result<()> {
        crate::fqpoly::check_prime(self.q).map_err(|e| Error::Config(e.to_string()))?;
        let r = self.resolve()?;
        if r.s.is_empty() {
            return Err(Error::Config(format!("{}: S is empty", self.id)));
        }
        if r.t.is_empty() {
            return Err(Error::Config(format!("{}: T is empty", self.id)));
        }
        for list in [&r.s, &r.t, &r.s0] {
            for (i, v) in list.iter().enumerate() {
                if list[..i].contains(v) {
                    return Err(Error::Config(format!("{}: {v} listed twice", self.id)));
                }
            }
        }
        if let Some(v) = r.t.iter().find(|v| r.s.contains(v)) {
            return Err(Error::Config(format!("{}: {v} lies in S and T", self.id)));
        }
        if r.s0.iter().any(|v| !r.s.contains(v)) || r.s0.len() >= r.s.len() {
            return Err(Error::Config(format!("{}: S_0 must be a proper subset of S", self.id)));
        }
        if self.depth as u64 >= self.p() {
            return Err(Error::Config(format!("{}: D = {} must be below p = {}", self.id, self.depth, self.p())));
        }
        if self.precision == 0 {
            return Err(Error::Config(format!("{}: precision must be positive", self.id)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[[experiment]]
id = "base"
q = 3
s = ["inf", [0, 1]]
t = [[2, 1]]
s0 = [[0, 1]]
layers = [{ constant_degree = 27 }, { carlitz = { m = [0, 1], depth = 2 }, real = true }]
"#;

    #[test]
    fn parses_sample() {
        let f = ConfigFile::parse(SAMPLE).unwrap();
        let e = &f.experiments[0];
        assert_eq!(e.precision, 3);
        let r = e.resolve().unwrap();
        assert_eq!(r.s[0], Place::Infinity);
        assert_eq!(e.layers[1].carlitz.as_ref().unwrap().depth, 2);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = SAMPLE.replace("t = [[2, 1]]", "t = [[0, 1]]");
        assert!(ConfigFile::parse(&bad).is_err());
        let bad = SAMPLE.replace("t = [[2, 1]]", "t = []");
        assert!(ConfigFile::parse(&bad).is_err());
        let bad = SAMPLE.replace("s0 = [[0, 1]]", "s0 = [[0, 1], \"inf\"]");
        assert!(ConfigFile::parse(&bad).is_err());
        let bad = SAMPLE.replace("q = 3", "q = 3\ndepth = 3");
        assert!(ConfigFile::parse(&bad).is_err());
        let bad = SAMPLE.replace("[[2, 1]]", "[[1, 0, 1, 1]]");
        assert!(ConfigFile::parse(&bad).is_err());
        let bad = SAMPLE.replace("q = 3", "q = 3\nbogus = 1");
        assert!(ConfigFile::parse(&bad).is_err());
    }
}
