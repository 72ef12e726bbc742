//! `classify`, `attractor`, `orbit` and `verify`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use skewtent::attractors::{attractor as build_attractor, Attractor, AttractorKind};
use skewtent::interval::{Interval, IntervalUnion};
use skewtent::regions::{
    self, classify as classify_params, t_poly, window_index, ClassifyOptions, RegionTag, WindowIndex, WindowSub,
};
use skewtent::verify::{self, Covering};
use skewtent::MapParams;

use crate::fmt::{num, trimmed};
use crate::{CliError, CliResult, Suite, EXIT_BOUNDARY, EXIT_OK, EXIT_VERIFY_FAILED};

fn params(k: f64, r: f64) -> Result<MapParams, CliError> {
    MapParams::new(k, r).map_err(CliError::from)
}

/// One-line gloss of what lives in a region.
pub fn describe(tag: &RegionTag, p: &MapParams) -> String {
    match *tag {
        RegionTag::Trivial => "no interesting dynamics".into(),
        RegionTag::FixedPoint => format!("attracting fixed point {}", num(1.0 / (p.k() + 1.0))),
        RegionTag::TwoCycle => "attracting 2-cycle".into(),
        RegionTag::FullIntervalChaos => "chaos on [1-k, 1]".into(),
        RegionTag::EscapeCantor => "almost every orbit escapes; invariant Cantor set".into(),
        RegionTag::Cascade { p, terminal: true } => format!("{} chaotic bands", 1u64 << p.min(63)),
        RegionTag::Cascade { p, terminal: false } => format!("at least 2^{p} chaotic bands, depth cap reached"),
        RegionTag::Window { m, sub: WindowSub::R1 } => format!("attracting period-{} orbit", m + 1),
        RegionTag::Window { m, sub: WindowSub::R2 } => format!("{} chaotic bands", m + 1),
        RegionTag::Window { m, sub: WindowSub::R3 } => format!("{} chaotic bands", 2 * m + 2),
        RegionTag::Window { sub: WindowSub::R4, .. } => "chaos on [1-k, 1]".into(),
        RegionTag::Boundary { .. } => "not classified".into(),
    }
}

/// Signed values of the defining expressions relevant at `(k, r)`, in a fixed order.
pub fn boundary_distances(p: &MapParams, tag: &RegionTag) -> Map<String, Value> {
    let (k, r) = (p.k(), p.r());
    let mut out = Map::new();
    let mut put = |name: String, v: f64| {
        if v.is_finite() {
            out.insert(name, json!(v));
        }
    };
    put("k-1".into(), k - 1.0);
    if k > 1.0 {
        put("r-1/k".into(), r - 1.0 / k);
        put("r-k/(k^2-1)".into(), r - k / (k * k - 1.0));
        put("r-1/(k-1)".into(), r - 1.0 / (k - 1.0));
        put("r-1".into(), r - 1.0);
        put("r-k/(k-1)".into(), r - k / (k - 1.0));
    }
    if let RegionTag::Cascade { p: depth, .. } = *tag {
        for q in 1..=depth.min(regions::LOG_DOMAIN_DEPTH) {
            if let Ok(t) = t_poly(q, k, r) {
                put(format!("t_{q}"), t);
            }
        }
    }
    if k > 2.0 && r > 0.0 && r < 1.0 {
        if let Ok(WindowIndex::Inside(m)) = window_index(k, r, 0.0) {
            let rm = r.powi(m as i32);
            put(format!("k-K_{m}(r)"), k - regions::window_wall(m, r));
            put(format!("K_{}(r)-k", m + 1), regions::window_wall(m + 1, r) - k);
            put(format!("k*r^{m}-1"), k * rm - 1.0);
            put(format!("r^{m}*k^2-k-r"), rm * k * k - k - r);
            put(format!("r^{}*k^3-k-r", 2 * m), rm * rm * k * k * k - k - r);
        }
    }
    out
}

pub fn classify_record(p: &MapParams, tag: &RegionTag) -> Value {
    let mut rec = Map::new();
    rec.insert("k".into(), json!(p.k()));
    rec.insert("r".into(), json!(p.r()));
    rec.insert("region".into(), serde_json::to_value(tag).expect("region tags serialize"));
    rec.insert("boundary_distances".into(), Value::Object(boundary_distances(p, tag)));
    if *tag == RegionTag::FixedPoint {
        rec.insert("x_star".into(), json!(1.0 / (p.k() + 1.0)));
    }
    Value::Object(rec)
}

pub fn classify(k: f64, r: f64, as_json: bool, tau: f64, p_max: usize, out: &mut dyn Write) -> CliResult {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(CliError::usage(format!("--tau must be a finite non-negative number, got {tau}")));
    }
    let p = params(k, r)?;
    let tag = classify_params(&p, &ClassifyOptions { tau, p_max });
    if as_json {
        writeln!(out, "{}", classify_record(&p, &tag))?;
    } else {
        writeln!(out, "{tag} ({})", describe(&tag, &p))?;
        for (name, v) in boundary_distances(&p, &tag) {
            writeln!(out, "  {name} = {v}")?;
        }
    }
    Ok(if tag.is_boundary() { EXIT_BOUNDARY } else { EXIT_OK })
}

fn bands_text(bands: &IntervalUnion) -> String {
    let parts: Vec<String> = bands.intervals().iter().map(|iv| format!("[{},{}]", num(iv.lo), num(iv.hi))).collect();
    parts.join(" ")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

/// Text report: the attractor on the first line, further exceptional sets after.
pub fn attractor_text(a: &Attractor) -> String {
    let mut lines = Vec::new();
    let ex = &a.exceptional;
    match &a.kind {
        AttractorKind::Point { x } => lines.push(format!("Point {}", num(*x))),
        AttractorKind::Cycle { orbit } => lines.push(format!(
            "Cycle period {}: {}; multiplier {}",
            orbit.period,
            list(&orbit.points),
            num(orbit.multiplier)
        )),
        AttractorKind::Bands { bands } => {
            let head = match a.region {
                RegionTag::Cascade { p, .. } => format!("Bands p={p}"),
                RegionTag::Window { m, sub } => format!("Bands m={m} sub={sub}"),
                _ => "Bands".into(),
            };
            let mut line = format!("{head}: {}", bands_text(bands));
            match ex.cascade_points.as_slice() {
                [] => {}
                [only] => line.push_str(&format!("; unstable fixed point {}", num(only.x))),
                many => {
                    let pts: Vec<String> = many.iter().map(|u| format!("{} (period {})", num(u.x), 1u64 << u.m)).collect();
                    line.push_str(&format!("; unstable points {}", pts.join(", ")));
                }
            }
            lines.push(line);
        }
        AttractorKind::FullInterval { interval } => {
            lines.push(format!("FullInterval [{}, {}]", num(interval.lo), num(interval.hi)))
        }
        AttractorKind::NoneEscape => {
            match ex.cantor_hull {
                Some(hull) => lines.push(format!(
                    "NoneEscape; Cantor repeller on [{}, {}]",
                    trimmed(hull.lo, 4),
                    trimmed(hull.hi, 4)
                )),
                None => lines.push("NoneEscape".into()),
            }
        }
    }
    if !matches!(a.kind, AttractorKind::NoneEscape) {
        for orbit in &ex.unstable_orbits {
            let what = if orbit.period == 1 { "unstable fixed point".to_string() } else { format!("unstable period-{} orbit", orbit.period) };
            let tail = if a.region == RegionTag::TwoCycle { " and its preimages" } else { "" };
            lines.push(format!("exceptional: {what} {}{tail}; multiplier {}", list(&orbit.points), num(orbit.multiplier)));
        }
        if let (Some(sys), Some(hull)) = (&ex.cantor, ex.cantor_hull) {
            let code = match sys.kind {
                skewtent::CantorKind::FullShift2 => "full 2-shift".to_string(),
                skewtent::CantorKind::WindowShift { m } => format!("Sigma_{m}"),
            };
            lines.push(format!("exceptional: Cantor repeller in [{}, {}] coded by {code}", num(hull.lo), num(hull.hi)));
        }
    }
    lines.join("\n")
}

pub fn attractor(k: f64, r: f64, as_json: bool, out: &mut dyn Write) -> CliResult {
    let p = params(k, r)?;
    let a = build_attractor(&p)?;
    if as_json {
        let rec = json!({ "k": k, "r": r, "attractor": serde_json::to_value(&a).expect("attractors serialize") });
        writeln!(out, "{rec}")?;
    } else {
        writeln!(out, "{}", attractor_text(&a))?;
    }
    Ok(EXIT_OK)
}

pub fn orbit(k: f64, r: f64, x0: f64, n: usize, out: &mut dyn Write) -> CliResult {
    if !x0.is_finite() {
        return Err(CliError::usage(format!("--x0 must be finite, got {x0}")));
    }
    let p = params(k, r)?;
    let orbit = p.iterate(x0, n);
    writeln!(out, "step,x,branch")?;
    let last = orbit.points.len() - 1;
    for (i, x) in orbit.points.iter().enumerate() {
        let branch = if orbit.escaped && i == last {
            "ESC".to_string()
        } else if i == 0 {
            String::new()
        } else {
            orbit.branches[i - 1].letter().to_string()
        };
        writeln!(out, "{i},{x},{branch}")?;
    }
    Ok(EXIT_OK)
}

pub const BASIN_SAMPLES: usize = 10_000;
pub const COVERING_SAMPLES: usize = 20;
pub const LYAPUNOV_ITERATIONS: usize = 1_000_000;
pub const LYAPUNOV_SEEDS: usize = 4;
pub const LYAPUNOV_BURN_IN: usize = 1_000;
pub const LYAPUNOV_TOL: f64 = 1e-3;
pub const BASIN_THRESHOLD: f64 = 0.99;
pub const COVERING_HORIZON: usize = 200;

struct Outcome {
    pass: bool,
    summary: String,
    detail: Value,
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    k: f64,
    r: f64,
    suite: Suite,
    samples: Option<usize>,
    seed: u64,
    iterations: Option<usize>,
    as_json: bool,
    out: &mut dyn Write,
) -> CliResult {
    let p = params(k, r)?;
    let tag = classify_params(&p, &ClassifyOptions::default());
    if let RegionTag::Boundary { which } = tag {
        return Err(CliError::boundary(format!("(k={k}, r={r}) lies on the boundary {which}")));
    }
    let outcome = match suite {
        Suite::Basin => basin_suite(&p, &tag, samples.unwrap_or(BASIN_SAMPLES), seed)?,
        Suite::Invariance => invariance_suite(&p)?,
        Suite::Lyapunov => lyapunov_suite(&p, iterations.unwrap_or(LYAPUNOV_ITERATIONS), seed)?,
        Suite::Covering => covering_suite(&p, samples.unwrap_or(COVERING_SAMPLES), seed)?,
    };
    let name = format!("{suite:?}").to_lowercase();
    if as_json {
        let rec = json!({
            "k": k,
            "r": r,
            "region": serde_json::to_value(tag).expect("region tags serialize"),
            "suite": name,
            "pass": outcome.pass,
            "detail": outcome.detail,
        });
        writeln!(out, "{rec}")?;
    } else {
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{name}: {verdict} ({tag}) {}", outcome.summary)?;
    }
    Ok(if outcome.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn basin_suite(p: &MapParams, tag: &RegionTag, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    if samples == 0 {
        return Err(CliError::usage("--samples must be positive"));
    }
    let stats = verify::basin_experiment(p, samples, verify::DEFAULT_HORIZON, verify::DEFAULT_EPS, seed)?;
    let (frac, what) = if *tag == RegionTag::EscapeCantor {
        (stats.escaped_fraction(), "escaped")
    } else {
        (stats.attracted_fraction(), "attracted")
    };
    let pass = frac >= BASIN_THRESHOLD && stats.tail_violations == 0;
    let summary = format!(
        "{what} {:.2}% of {} seeds (attracted {}, escaped {}, undecided {}); rng {} seed {}",
        100.0 * frac,
        stats.n_samples,
        stats.n_to_attractor,
        stats.n_escaped,
        stats.n_undecided,
        stats.rng,
        stats.seed
    );
    Ok(Outcome { pass, summary, detail: serde_json::to_value(&stats).expect("stats serialize") })
}

fn attractor_set(a: &Attractor) -> Option<IntervalUnion> {
    match &a.kind {
        AttractorKind::Point { x } => Some(IntervalUnion::single(Interval::point(*x))),
        AttractorKind::Cycle { orbit } => {
            Some(IntervalUnion::merged(orbit.points.iter().map(|&x| Interval::point(x)).collect()))
        }
        AttractorKind::Bands { bands } => Some(bands.clone()),
        AttractorKind::FullInterval { interval } => Some(IntervalUnion::single(*interval)),
        AttractorKind::NoneEscape => None,
    }
}

fn invariance_suite(p: &MapParams) -> Result<Outcome, CliError> {
    let a = build_attractor(p)?;
    let set = attractor_set(&a).ok_or_else(|| CliError::boundary("no attractor: almost every orbit escapes"))?;
    let defect = verify::check_invariance(&set, p);
    let gap = verify::check_disjoint(set.intervals());
    let pass = defect <= 1e-9 && gap > 0.0;
    let summary = format!("{} pieces, invariance defect {defect:e}, min gap {gap}", set.len());
    let detail = json!({ "pieces": set.len(), "defect": defect, "min_gap": if gap.is_finite() { json!(gap) } else { Value::Null } });
    Ok(Outcome { pass, summary, detail })
}

fn lyapunov_suite(p: &MapParams, n: usize, seed: u64) -> Result<Outcome, CliError> {
    let a = build_attractor(p)?;
    let expected = match &a.kind {
        AttractorKind::Point { .. } => Some(p.k().ln()),
        AttractorKind::Cycle { orbit } => Some(orbit.multiplier.abs().ln() / orbit.period as f64),
        AttractorKind::Bands { .. } | AttractorKind::FullInterval { .. } => None,
        AttractorKind::NoneEscape => return Err(CliError::boundary("no attractor: almost every orbit escapes")),
    };
    let est = verify::lyapunov(p, n, LYAPUNOV_SEEDS, LYAPUNOV_BURN_IN, seed)?;
    let (pass, criterion) = match expected {
        Some(e) => ((est.lambda - e).abs() <= LYAPUNOV_TOL, format!("expected {e:.6} +- {LYAPUNOV_TOL}")),
        None => (est.lambda > 0.0, "expected > 0".to_string()),
    };
    let summary = format!(
        "lambda {:.6} (stderr {:.2e}), {criterion}; n {} x {} seeds, rng {} seed {}",
        est.lambda, est.stderr, est.n, est.n_used, est.rng, est.seed
    );
    Ok(Outcome { pass, summary, detail: serde_json::to_value(&est).expect("estimates serialize") })
}

fn covering_suite(p: &MapParams, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let a = build_attractor(p)?;
    let (pieces, power) = match &a.kind {
        AttractorKind::FullInterval { interval } => (vec![*interval], 1),
        AttractorKind::Bands { bands } => (bands.intervals().to_vec(), bands.len()),
        _ => return Err(CliError::boundary("covering needs a chaotic attractor (bands or full interval)")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0;
    let mut failures = 0;
    for i in 0..samples {
        let band = pieces[i % pieces.len()];
        let width = (1e-3f64).min(band.width() / 10.0);
        let lo = band.lo + rng.gen::<f64>() * (band.width() - width);
        let target = IntervalUnion::single(band);
        match verify::covering_test(p, power, Interval::new(lo, lo + width), &target, COVERING_HORIZON) {
            Covering::CoveredAt { n } => worst = worst.max(n),
            Covering::NotCovered => failures += 1,
        }
    }
    let pass = failures == 0 && samples > 0;
    let summary = format!("{} of {samples} starts covered their band under f^{power} within {worst} steps", samples - failures);
    Ok(Outcome { pass, summary, detail: json!({ "samples": samples, "power": power, "not_covered": failures, "max_steps": worst }) })
}
