use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::synth::{synth_thm1_with, SynthParams, DEFAULT_BASE_SUPPORT};
use super::{Block, EmbeddingCertificate, Step};
use crate::error::Result;
use crate::geom::{pullback_error, substream_seed, AmbientMap, PointTS};
use crate::mcg::{normalize_with, Letter, TwistWord};
use crate::openbook::{BaseLabel, EdgeKind};
use crate::report::{Obligation, Report, Status};
use crate::verifier::{
    check_distance_bound, check_support_disjoint, check_twist_symplectic, dehn_twist_map, embedding_map,
    exactness_witness, twist_samples, CutoffProfile, TwistProfile, VerifyConfig,
};

/// Largest source dimension with numeric checks.
const MAX_NUMERIC_N: usize = 3;

/// Parsed node block.
struct NodeBlock {
    node: String,
    prefix: Option<(i64, f64)>,
    eps: f64,
    delta: f64,
    power: i64,
    support: f64,
}

fn parse_block(b: &Block) -> std::result::Result<NodeBlock, String> {
    let node = b.node().expect("node block").to_string();
    if let Some(s) = b.steps.iter().find(|s| s.node().is_some_and(|n| n != node) || s.is_symbolic()) {
        return Err(format!("block at [{}, {}] mixes node `{node}` with `{s}`", b.t0, b.t1));
    }
    let (prefix, rest) = match b.steps.as_slice() {
        [Step::AmbientTwist { power, support, .. }, rest @ ..] if rest.len() == 3 => (Some((*power, *support)), rest),
        rest => (None, rest),
    };
    match rest {
        [Step::IsotopeAway { eps, delta, .. }, Step::AmbientTwist { power, support, .. }, Step::IsotopeBack { .. }] => {
            Ok(NodeBlock { node, prefix, eps: *eps, delta: *delta, power: *power, support: *support })
        }
        _ => Err(format!(
            "block for `{node}` must read [AmbientTwist], IsotopeAway, AmbientTwist, IsotopeBack"
        )),
    }
}

/// Problems that make numeric checking meaningless, in the order found.
pub fn structure_issues(cert: &EmbeddingCertificate) -> Vec<String> {
    let mut issues = Vec::new();
    let (src, tgt) = (cert.source.page(), cert.target.page());

    // the target page is the source page with promoted bases
    let mapped: BTreeSet<&String> = cert.node_map.values().collect();
    if cert.node_map.len() != src.nodes().len() || mapped.len() != cert.node_map.len() || tgt.nodes().len() != src.nodes().len() {
        issues.push("nodeMap is not a bijection between source and target nodes".into());
    }
    if tgt.dim() != src.dim() + 2 {
        issues.push(format!("target dim {} is not source dim {} + 2", tgt.dim(), src.dim()));
    }
    if let Some(v) = tgt.nodes().iter().find(|v| v.base != BaseLabel::Sphere { n: src.n() + 1 }) {
        issues.push(format!("target node `{}` is not a promoted sphere", v.name));
    }
    let image = |s: &str| cert.node_map.get(s).cloned().unwrap_or_default();
    let tgt_edges: BTreeSet<(String, String, EdgeKind)> = tgt
        .edges()
        .iter()
        .flat_map(|e| [(e.a.clone(), e.b.clone(), e.kind), (e.b.clone(), e.a.clone(), e.kind)])
        .collect();
    if tgt.edges().len() != src.edges().len()
        || src.edges().iter().any(|e| !tgt_edges.contains(&(image(&e.a), image(&e.b), e.kind)))
    {
        issues.push("target page graph is not the promoted source page graph".into());
    }

    // node blocks
    let inverse: BTreeMap<&str, &str> = cert.node_map.iter().map(|(s, t)| (t.as_str(), s.as_str())).collect();
    let mut covered = BTreeSet::new();
    let mut intervals = Vec::new();
    for b in cert.node_blocks() {
        match parse_block(b) {
            Ok(NodeBlock { node, prefix, eps, delta, support, .. }) => {
                if !covered.insert(node.clone()) {
                    issues.push(format!("node `{node}` is scheduled more than once"));
                }
                if !(0.0 < b.t0 && b.t0 < b.t1 && b.t1 < 1.0) {
                    issues.push(format!("interval [{}, {}] of `{node}` is not inside (0, 1)", b.t0, b.t1));
                }
                intervals.push((b.t0, b.t1, node.clone()));
                if !(support > 0.0) || prefix.is_some_and(|(_, s)| !(s > 0.0)) {
                    issues.push(format!("twist support on `{node}` must be positive"));
                }
                if !(eps > 0.0 && eps <= 1.0 && delta > 0.0 && delta <= 1.0) {
                    issues.push(format!("isotopy parameters on `{node}` must lie in (0, 1]"));
                }
                let k = inverse.get(node.as_str()).map_or(0, |s| cert.source.monodromy().exponent_sum(s));
                let prefix_power = prefix.map_or(0, |(p, _)| p);
                if prefix_power != k {
                    issues.push(format!("prefix twist on `{node}` has power {prefix_power}, source power is {k}"));
                }
            }
            Err(e) => issues.push(e),
        }
    }
    for v in tgt.nodes() {
        if !covered.contains(&v.name) {
            issues.push(format!("node `{}` has no block", v.name));
        }
    }
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in intervals.windows(2) {
        if w[0].1 >= w[1].0 {
            issues.push(format!("intervals of `{}` and `{}` overlap", w[0].2, w[1].2));
        }
    }

    // symbolic steps
    let symbolic: Vec<&Step> = cert
        .schedule
        .iter()
        .filter(|b| b.node().is_none())
        .flat_map(|b| &b.steps)
        .collect();
    if !symbolic.iter().any(|s| matches!(s, Step::ExtendIsotopy { .. })) {
        issues.push("schedule has no ExtendIsotopy step".into());
    }
    if !symbolic.iter().any(|s| matches!(s, Step::GlueMappingTorus { .. })) {
        issues.push("schedule has no GlueMappingTorus step".into());
    }
    issues
}

/// Net target word: every AmbientTwist letter in schedule order.
fn net_word(cert: &EmbeddingCertificate) -> TwistWord {
    TwistWord::from_letters(cert.schedule.iter().flat_map(|b| &b.steps).filter_map(|s| match s {
        Step::AmbientTwist { node, power, .. } => Some(Letter::named(node, *power)),
        _ => None,
    }))
}

type Task<'a> = Box<dyn Fn(u64) -> Obligation + Send + Sync + 'a>;

fn max_diff(a: &PointTS, b: &PointTS) -> f64 {
    a.ambient().iter().zip(b.ambient()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

fn error_obligation(name: &str, e: impl std::fmt::Display) -> Obligation {
    Obligation::new(name, Status::Fail).detail(e.to_string())
}

fn numeric_tasks<'a>(b: &'a NodeBlock, n: usize, c: &'a VerifyConfig) -> Vec<(String, Task<'a>)> {
    let tol = c.tolerances;
    let count = c.samples;
    let (k, base_support) = b.prefix.unwrap_or((0, DEFAULT_BASE_SUPPORT));
    let mut tasks: Vec<(String, Task<'a>)> = Vec::new();

    let mut twist_task = |label: &str, power: i64, support: f64| {
        let sym = format!("twist-symplectic[{label}]");
        let ex = format!("exactness[{label}]");
        let s2 = sym.clone();
        tasks.push((
            sym,
            Box::new(move |seed| {
                let run = || -> Result<Obligation> {
                    let p = TwistProfile::new(power, support)?;
                    let r = check_twist_symplectic(n + 1, p, &twist_samples(n + 1, support, seed, count)?, c.h)?;
                    Ok(Obligation::below(&s2, r.max_error, tol.pullback).samples(r.samples, seed))
                };
                run().unwrap_or_else(|e| error_obligation(&s2, e))
            }),
        ));
        let e2 = ex.clone();
        tasks.push((
            ex,
            Box::new(move |seed| {
                let run = || -> Result<Obligation> {
                    let p = TwistProfile::new(power, support)?;
                    let (_, r) = exactness_witness(n + 1, p, &twist_samples(n + 1, support, seed, count)?, c.h)?;
                    Ok(Obligation::below(&e2, r.residual, tol.exactness).samples(r.samples, seed))
                };
                run().unwrap_or_else(|e| error_obligation(&e2, e))
            }),
        ));
    };
    if b.prefix.is_some() {
        twist_task("k", k, base_support);
    }
    twist_task("l-k", b.power, b.support);

    if b.prefix.is_some() {
        tasks.push((
            "induced-twist".into(),
            Box::new(move |seed| {
                let run = || -> Result<Obligation> {
                    let p = TwistProfile::new(k, base_support)?;
                    let (src, amb) = (dehn_twist_map(n, p), dehn_twist_map(n + 1, p));
                    let j0 = embedding_map(0.0, CutoffProfile::new(1.0, 1.0)?, n);
                    let samples = twist_samples(n, base_support, seed, count)?;
                    let worst = samples
                        .iter()
                        .map(|s| max_diff(&amb.apply(&j0.apply(&s.point)), &j0.apply(&src.apply(&s.point))))
                        .fold(0.0, f64::max);
                    Ok(Obligation::below("induced-twist", worst, tol.equality).samples(samples.len(), seed))
                };
                run().unwrap_or_else(|e| error_obligation("induced-twist", e))
            }),
        ));
    }

    for name in ["d:isotope-away", "d:isotope-back"] {
        tasks.push((
            name.into(),
            Box::new(move |seed| {
                let run = || -> Result<Obligation> {
                    let cutoff = CutoffProfile::new(b.eps, b.delta)?;
                    let samples = twist_samples(n, b.delta, seed, count)?;
                    let mut worst = 0.0f64;
                    let mut used = 0;
                    for t in [0.0, 0.5, 1.0] {
                        let r = pullback_error(&embedding_map(t, cutoff, n), &samples, c.h)?;
                        worst = worst.max(r.max_error);
                        used += r.samples;
                    }
                    Ok(Obligation::below(name, worst, tol.pullback).samples(used, seed).detail("t in {0, 0.5, 1}"))
                };
                run().unwrap_or_else(|e| error_obligation(name, e))
            }),
        ));
    }

    tasks.push((
        "b:distance".into(),
        Box::new(move |seed| {
            let run = || -> Result<Obligation> {
                let cutoff = CutoffProfile::new(b.eps, b.delta)?;
                let r = check_distance_bound(n, TwistProfile::new(k, base_support)?, cutoff, seed, count)?;
                let mut o = Obligation::pass_if("b:distance", r.passed()).samples(r.samples, seed);
                o.measured = Some(r.estimate);
                o.tolerance = Some(r.m0);
                Ok(o.detail("measured distance must exceed m0"))
            };
            run().unwrap_or_else(|e| error_obligation("b:distance", e))
        }),
    ));

    tasks.push((
        "c:disjoint".into(),
        Box::new(move |seed| {
            let run = || -> Result<Obligation> {
                let cutoff = CutoffProfile::new(b.eps, b.delta)?;
                let r = check_support_disjoint(
                    n,
                    TwistProfile::new(k, base_support)?,
                    b.power,
                    b.support,
                    cutoff,
                    seed,
                    count,
                    tol.equality,
                )?;
                let mut o = Obligation::below("c:disjoint", r.max_displacement, tol.equality).samples(r.samples, seed);
                if let Some(w) = r.witness {
                    o = o.detail(format!("{} displaced samples, e.g. x = {:?}, y = {:?}", r.displaced, w.x, w.y));
                }
                Ok(o)
            };
            run().unwrap_or_else(|e| error_obligation("c:disjoint", e))
        }),
    ));
    tasks
}

/// Checks every obligation of `cert`. Structural problems are reported as a
/// failing `structure` obligation without running numerics.
pub fn check_certificate(cert: &EmbeddingCertificate, config: &VerifyConfig) -> Result<Report> {
    config.validate()?;
    cert.check_references()?;
    let mut report = Report { seed: config.seed, obligations: Vec::new(), flags: Vec::new() };
    let issues = structure_issues(cert);
    if !issues.is_empty() {
        report.obligations.push(Obligation::new("structure", Status::Fail).detail(issues.join("; ")));
        return Ok(report);
    }
    report.obligations.push(Obligation::new("structure", Status::Pass));

    let n = cert.source.page().n();
    let inverse: BTreeMap<&str, &str> = cert.node_map.iter().map(|(s, t)| (t.as_str(), s.as_str())).collect();
    let blocks: Vec<NodeBlock> = cert
        .node_blocks()
        .map(|b| parse_block(b).expect("structure checked"))
        .collect();

    if n > MAX_NUMERIC_N {
        report.flags.push(format!("numeric checks skipped: source dimension n = {n} exceeds {MAX_NUMERIC_N}"));
    }

    let mut tasks: Vec<(Option<&str>, String, Task<'_>)> = Vec::new();
    let mut fixed: Vec<Obligation> = Vec::new();
    for b in &blocks {
        let m0 = 0.5 * b.eps.min(b.delta);
        let ok = b.support <= m0 / 2.0 * (1.0 + 1e-12);
        let mut a = Obligation::pass_if("a:m0-support", ok).node(&b.node);
        a.measured = Some(b.support);
        a.tolerance = Some(m0 / 2.0);
        fixed.push(a.detail(format!("m0 = {m0}; support must be at most m0/2")));

        let sphere = cert.source.page().node(inverse[b.node.as_str()]).is_some_and(|v| v.base.is_sphere());
        if !sphere || n > MAX_NUMERIC_N {
            let (status, why) = if sphere {
                (Status::Skipped, "numerics skipped for n > 3")
            } else {
                (Status::Symbolic, "no coordinate model for this base")
            };
            for name in ["b:distance", "c:disjoint", "d:isotope-away", "d:isotope-back"] {
                fixed.push(Obligation::new(name, status).node(&b.node).detail(why));
            }
            continue;
        }
        for (name, task) in numeric_tasks(b, n, config) {
            tasks.push((Some(b.node.as_str()), name, task));
        }
    }

    let numeric: Vec<Obligation> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, (node, _, task))| {
            let o = task(substream_seed(config.seed, i as u64));
            match node {
                Some(v) => o.node(*v),
                None => o,
            }
        })
        .collect();

    // order: per node, arithmetic first, then numerics in task order
    for b in &blocks {
        report.obligations.extend(fixed.iter().filter(|o| o.node.as_deref() == Some(b.node.as_str())).cloned());
        report.obligations.extend(numeric.iter().filter(|o| o.node.as_deref() == Some(b.node.as_str())).cloned());
    }

    let net = normalize_with(cert.target.page(), &net_word(cert));
    let want = normalize_with(cert.target.page(), cert.target.monodromy());
    report.obligations.push(
        Obligation::pass_if("e:net-word", net == want).detail(format!("net word {net}; target monodromy {want}")),
    );
    for s in cert.schedule.iter().flat_map(|b| &b.steps) {
        let (name, citation) = match s {
            Step::ExtendIsotopy { citation } => ("extend-isotopy", citation),
            Step::GlueMappingTorus { citation } => ("glue-mapping-torus", citation),
            _ => continue,
        };
        let status = if citation.trim().is_empty() { Status::Fail } else { Status::Symbolic };
        report.obligations.push(Obligation::new(name, status).detail(if citation.trim().is_empty() {
            "missing citation".to_string()
        } else {
            citation.clone()
        }));
    }
    Ok(report)
}

/// Synthesizes the single-node certificate for `(n, k, l)` with the
/// configured isotopy parameters and checks it.
pub fn run_thm1_suite(n: usize, k: i64, l: i64, config: &VerifyConfig) -> Result<Report> {
    config.validate()?;
    let params = SynthParams { eps: config.eps, delta: config.delta, p0_policy: config.p0_policy, ..Default::default() };
    check_certificate(&synth_thm1_with(n, k, l, &params)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{synth_corollary, synth_thm1, synth_type1};
    use crate::openbook::{catalog, CatalogEntry};

    fn quick() -> VerifyConfig {
        VerifyConfig { samples: 200, ..Default::default() }
    }

    #[test]
    fn thm1_passes() {
        for (n, k, l) in [(1usize, -1i64, 1i64), (1, 2, 1), (2, -1, 1), (1, 0, 0)] {
            let r = check_certificate(&synth_thm1(n, k, l).unwrap(), &quick()).unwrap();
            assert!(r.passed(), "({n},{k},{l}):\n{r}");
            assert!(r.find("b:distance").all(|o| o.status == Status::Pass));
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let cert = synth_thm1(1, 1, 2).unwrap();
        let a = check_certificate(&cert, &quick()).unwrap();
        let b = check_certificate(&cert, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tampered_support_fails_a() {
        let mut cert = synth_thm1(1, 2, 1).unwrap();
        if let Step::AmbientTwist { support, .. } = &mut cert.schedule[0].steps[2] {
            *support = 0.1;
        }
        let r = check_certificate(&cert, &quick()).unwrap();
        assert!(!r.passed());
        let failed: Vec<&str> = r.failures().map(|o| o.name.as_str()).collect();
        assert_eq!(failed, vec!["a:m0-support"]);
    }

    #[test]
    fn overlapping_intervals_are_structural() {
        let mut cert = synth_type1(&catalog(&CatalogEntry::XiN { n: 2 }).unwrap()).unwrap();
        cert.schedule[1].t0 = cert.schedule[0].t0 + 0.01;
        let r = check_certificate(&cert, &quick()).unwrap();
        assert_eq!(r.obligations.len(), 1);
        assert_eq!(r.obligations[0].name, "structure");
        assert!(r.obligations[0].detail.contains("overlap"));
    }

    #[test]
    fn other_structural_problems() {
        let base = synth_thm1(1, 1, 1).unwrap();
        let mut swapped = base.clone();
        swapped.schedule[0].steps.swap(1, 3);
        assert!(!structure_issues(&swapped).is_empty());
        let mut wrong_k = base.clone();
        if let Step::AmbientTwist { power, .. } = &mut wrong_k.schedule[0].steps[0] {
            *power = 3;
        }
        assert!(!structure_issues(&wrong_k).is_empty());
        let mut no_glue = base.clone();
        no_glue.schedule.pop();
        assert!(!structure_issues(&no_glue).is_empty());
    }

    #[test]
    fn net_word_mismatch_fails_e() {
        let mut cert = synth_thm1(1, 1, 2).unwrap();
        cert.target = catalog(&CatalogEntry::StdSphere { n: 2 }).unwrap();
        let r = check_certificate(&cert, &quick()).unwrap();
        let failed: Vec<&str> = r.failures().map(|o| o.name.as_str()).collect();
        assert_eq!(failed, vec!["e:net-word"]);
    }

    #[test]
    fn large_n_skips_numerics() {
        let r = run_thm1_suite(5, 1, 1, &quick()).unwrap();
        assert!(r.passed());
        assert!(!r.flags.is_empty());
        assert!(r.obligations.iter().any(|o| o.status == Status::Skipped));
    }

    #[test]
    fn surface_certificate_passes() {
        let cert = synth_corollary(2, &"a1 c1 b1^-1".parse().unwrap()).unwrap();
        let r = check_certificate(&cert, &VerifyConfig { samples: 100, ..Default::default() }).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn bad_config_rejected() {
        let cert = synth_thm1(1, 1, 1).unwrap();
        assert!(check_certificate(&cert, &VerifyConfig { samples: 0, ..Default::default() }).is_err());
    }
}
