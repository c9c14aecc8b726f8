//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use stickel::classfield::{Layer, LayerSpec};
use stickel::fqpoly::{FqPoly, Place};
use stickel::groupring::ZElem;
use stickel::harness::{self, ConfigFile, Report, ReportSet, RunOptions, Status};
use stickel::lseries::equivariant_theta;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn preset(kind: &str) -> ReportSet {
    let file = ConfigFile::parse(harness::preset(kind).unwrap()).unwrap();
    harness::run(kind, &file, &RunOptions::default()).unwrap()
}

fn report<'a>(set: &'a ReportSet, id: &str) -> &'a Report {
    set.reports.iter().find(|r| r.experiment == id).unwrap_or_else(|| panic!("no experiment {id}"))
}

fn status(r: &Report, check: &str) -> Result<Status, String> {
    r.find(check).map(|c| c.status).ok_or_else(|| format!("{}: missing check {check}", r.experiment))
}

fn failures(set: &ReportSet) -> Vec<String> {
    set.reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.passed()).map(move |c| format!("{}/{}", r.experiment, c.id)))
        .collect()
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn fin(c: &[u32]) -> Place {
    Place::Finite(FqPoly::new(3, c.to_vec()))
}

fn closed_forms() -> Outcome {
    let layer = Layer::new(3, &LayerSpec::constant(1)).map_err(|e| e.to_string())?;
    let g = layer.group().clone();
    let int = |c: i64| ZElem::from_ints(&g, vec![c]).unwrap();
    let cases = [
        (vec![Place::Infinity], vec![fin(&[0, 1])], vec![int(1)]),
        (vec![Place::Infinity, fin(&[0, 1])], vec![fin(&[2, 1])], vec![int(1), int(-1)]),
    ];
    for (s, t, want) in cases {
        let start = Instant::now();
        let poly = equivariant_theta(&layer, &s, &t, 8, 4).map_err(|e| e.to_string())?;
        ensure(poly.coeffs == want, || format!("Theta = {:?}", poly.coeffs))?;
        within(start, Duration::from_secs(1))?;
    }
    Ok(())
}

fn interpolation() -> Outcome {
    let start = Instant::now();
    let set = preset("interpolation");
    let seen: Vec<(u32, String)> = set
        .reports
        .iter()
        .map(|r| (r.inputs["q"].as_u64().unwrap() as u32, r.experiment.clone()))
        .collect();
    for q in [2, 3] {
        for m in ["t", "t2", "t-t1"] {
            let id = format!("q{q}-{m}");
            ensure(seen.iter().any(|(_, e)| *e == id), || format!("missing {id}"))?;
            ensure(status(report(&set, &id), "layer0.interpolation")? == Status::VerifiedExact, || format!("{id} mismatches"))?;
        }
    }
    ensure(failures(&set).is_empty(), || format!("{:?}", failures(&set)))?;
    within(start, Duration::from_secs(30))
}

fn product_formula() -> Outcome {
    let set = preset("product-formula");
    for r in &set.reports {
        let c = r.find("layer0.product").ok_or("missing product check")?;
        ensure(c.status == Status::VerifiedExact, || format!("{}: {:?}", r.experiment, c.witness))?;
        let order: u64 = c.detail["group"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).product();
        ensure(order <= 200, || format!("|G| = {order}"))?;
    }
    Ok(())
}

fn gross_checks(set: &ReportSet, id: &str, layers: usize) -> Outcome {
    let r = report(set, id);
    for i in 0..layers {
        let c = r.find(&format!("layer{i}.congruence")).ok_or_else(|| format!("{id}: layer{i} missing"))?;
        ensure(c.status == Status::VerifiedAtPrecision && c.precision.unwrap_or(0) >= 3, || {
            format!("{id}/layer{i}: {:?} {:?}", c.status, c.witness)
        })?;
        ensure(c.detail["sign_flip_only"] == false, || format!("{id}/layer{i}: sign flip"))?;
    }
    Ok(())
}

fn gross() -> Outcome {
    let set = preset("gross-check");
    gross_checks(&set, "r0-constant", 3)?;
    gross_checks(&set, "r1", 3)?;
    gross_checks(&set, "r2", 2)?;
    ensure(report(&set, "r2").values["units"]["rank"] == 2, || "r2 has rank != 2".into())?;
    ensure(failures(&set).is_empty(), || format!("{:?}", failures(&set)))
}

fn stark() -> Outcome {
    let set = preset("stark-check");
    let r = report(&set, "hayes");
    for check in ["layer0.stark", "layer1.stark", "same-eps", "classical"] {
        ensure(status(r, check)? == Status::VerifiedExact, || format!("hayes/{check}: {:?}", r.find(check)))?;
    }
    let specs = &r.inputs["layers"];
    ensure(specs[0]["carlitz"].is_null() && !specs[1]["carlitz"].is_null(), || "need a constant and a Carlitz layer".into())?;
    ensure(failures(&set).is_empty(), || format!("{:?}", failures(&set)))
}

fn bridges() -> Outcome {
    for kind in ["gross-check", "stark-check"] {
        let set = preset(kind);
        for r in &set.reports {
            let b: Vec<_> = r.checks.iter().filter(|c| c.id.contains("bridge")).collect();
            ensure(b.iter().any(|c| c.id.contains("bridge-theta")), || format!("{}: no theta bridge", r.experiment))?;
            ensure(b.iter().any(|c| c.id.contains("bridge-refined")) || r.experiment == "r0-constant", || {
                format!("{}: no refined bridge", r.experiment)
            })?;
            for c in b {
                ensure(c.status == Status::VerifiedAtPrecision, || format!("{}/{}: {:?}", r.experiment, c.id, c.witness))?;
            }
        }
    }
    Ok(())
}

fn burns() -> Outcome {
    let set = preset("burns-check");
    let r = report(&set, "carlitz-t2");
    ensure(status(r, "congruence")? == Status::VerifiedAtPrecision, || format!("{:?}", r.find("congruence")))?;
    ensure(r.values["units"]["rank"] == 2 && r.inputs["s0"].as_array().unwrap().len() == 1, || "need n = 1, r = 2".into())?;
    ensure(failures(&set).is_empty(), || format!("{:?}", failures(&set)))
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let set = preset("aug-oracle");
    ensure(set.passed(), || format!("{:?}", set.reports[0].checks[0].witness))?;
    within(start, Duration::from_secs(120))
}

fn factorization() -> Outcome {
    let set = preset("factorization");
    for id in ["trivial-gamma-r1", "trivial-gamma-r2"] {
        let r = report(&set, id);
        ensure(r.values["rank_H"] == 2, || format!("{id}: H not of rank 2"))?;
        for check in ["xi-equals-h-f", "f-product", "xi-product", "discriminant"] {
            ensure(status(r, check)? == Status::VerifiedAtPrecision, || format!("{id}/{check}: {:?}", r.find(check)))?;
        }
        ensure(status(r, "rational-basis")? == Status::VerifiedExact, || format!("{id}: rational basis"))?;
    }
    let r = report(&set, "gamma-z2");
    ensure(status(r, "xi-product")? == Status::VerifiedAtPrecision, || format!("gamma-z2: {:?}", r.find("xi-product")))?;
    ensure(failures(&set).is_empty(), || format!("{:?}", failures(&set)))
}

fn determinism() -> Outcome {
    for kind in ["theta", "gross-check", "burns-check"] {
        let file = ConfigFile::parse(harness::preset(kind).unwrap()).unwrap();
        let once = |jobs: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .unwrap()
                .install(|| harness::run(kind, &file, &RunOptions::default()).unwrap().to_json())
        };
        let a = once(1);
        ensure(a == once(4) && a == once(1), || format!("{kind}: reports differ"))?;
    }
    let dir = std::env::temp_dir().join(format!("stickel-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outs = Vec::new();
    for jobs in ["1", "3", "1"] {
        let path = dir.join(format!("stark-{}.json", outs.len()));
        let st = Command::new(env!("CARGO_BIN_EXE_stickel"))
            .args(["stark-check", "--jobs", jobs, "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(st.success(), || format!("cli exited with {st}"))?;
        outs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(outs.windows(2).all(|w| w[0] == w[1]), || "cli reports differ across --jobs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form Theta", closed_forms),
        ("interpolation", interpolation),
        ("product formula", product_formula),
        ("Gross congruence", gross),
        ("n = 1 refined identity", stark),
        ("bridge identities", bridges),
        ("Burns congruence", burns),
        ("augmentation oracle", oracle),
        ("factorization probe", factorization),
        ("determinism", determinism),
    ];
    let mut ok = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match out {
            Ok(()) => println!("AC{:<2} PASS  {name} ({ms} ms)", i + 1),
            Err(e) => {
                ok = false;
                println!("AC{:<2} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
