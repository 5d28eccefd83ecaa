//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; errors come back as JS exceptions carrying the message.

use migrate_sched::adversary::play_adversary;
use migrate_sched::alpha::{alpha_sequence, solve_alpha};
use migrate_sched::batch::AlgSpec;
use migrate_sched::model::Event;
use migrate_sched::num::{fmt_fraction, parse_rational};
use migrate_sched::{Instance, Rational, RunOptions, Scalar};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Result<T> = std::result::Result<T, String>;

fn dec(r: &Rational) -> f64 {
    r.as_f64()
}

/// Profile of ALG(alpha_m) plus the curve of alpha_k for k = 2..=m_max.
pub fn profile_json(m: usize, m_max: usize) -> Result<String> {
    let p = solve_alpha(m).map_err(|e| e.to_string())?;
    let curve = alpha_sequence(m_max.max(2)).map_err(|e| e.to_string())?;
    let out = json!({
        "m": m,
        "alpha": fmt_fraction(&p.alpha),
        "alpha_dec": dec(&p.alpha),
        "mu": p.mu,
        "k_break": p.k_break,
        "beta": p.beta.iter().map(dec).collect::<Vec<_>>(),
        "curve": curve.iter().map(dec).collect::<Vec<_>>(),
    });
    Ok(out.to_string())
}

fn parse_sizes(text: &str) -> Result<Vec<Rational>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

fn event_json(e: &Event) -> Value {
    match *e {
        Event::Assign { job, to } => json!({"op": "assign", "job": job, "to": to}),
        Event::Migrate { job, from, to } => json!({"op": "migrate", "job": job, "from": from, "to": to}),
    }
}

/// Run `alg` on `m` machines over the sizes in `sizes` (comma or whitespace
/// separated). The optimum is included when the instance is small enough.
pub fn simulate_json(alg: &str, m: usize, sizes: &str) -> Result<String> {
    let alg: AlgSpec = alg.parse().map_err(|e: migrate_sched::Error| e.to_string())?;
    let inst = Instance::new(m, parse_sizes(sizes)?).map_err(|e| e.to_string())?;
    let out = alg.run(&inst, &RunOptions::checked()).map_err(|e| e.to_string())?;
    let machines: Vec<Vec<Value>> = out
        .schedule
        .machines
        .iter()
        .map(|mc| mc.jobs.iter().map(|j| json!({"id": j.id, "p": dec(&j.p)})).collect())
        .collect();
    let r = &out.report;
    let result = json!({
        "alg": r.alg,
        "makespan": fmt_fraction(&r.makespan),
        "lower_bound": fmt_fraction(&r.lower_bound),
        "opt": r.opt.as_ref().map(fmt_fraction),
        "ratio_vs_opt": r.ratio_vs_opt.as_ref().map(dec),
        "ratio_vs_l": dec(&r.ratio_vs_l),
        "migrations": r.migrations,
        "violations": r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "machines": machines,
        "events": out.schedule.events.iter().map(event_json).collect::<Vec<_>>(),
    });
    Ok(result.to_string())
}

/// Play the adversary against `alg` with `n_prime` phase-one jobs.
pub fn adversary_json(alg: &str, m: usize, n_prime: usize) -> Result<String> {
    let alg: AlgSpec = alg.parse().map_err(|e: migrate_sched::Error| e.to_string())?;
    let mut sched = alg.scheduler(m).map_err(|e| e.to_string())?;
    let n_prime = n_prime.max(m).div_ceil(m) * m;
    let out = play_adversary(sched.as_mut(), n_prime, &Rational::new(1.into(), 1000.into())).map_err(|e| e.to_string())?;
    let result = json!({
        "scheduler": out.scheduler,
        "n_prime": out.n_prime,
        "branch": out.branch,
        "phase1_loads": out.phase1_loads.iter().map(dec).collect::<Vec<_>>(),
        "alg_makespan": fmt_fraction(&out.alg_makespan),
        "opt_upper": fmt_fraction(&out.opt_upper),
        "ratio_lb": fmt_fraction(&out.ratio_lb),
        "ratio_lb_dec": dec(&out.ratio_lb),
        "migrations": out.migrations,
        "alpha_dec": dec(&solve_alpha(m).map_err(|e| e.to_string())?.alpha),
    });
    Ok(result.to_string())
}

#[wasm_bindgen]
pub fn profile(m: usize, m_max: usize) -> std::result::Result<String, JsValue> {
    profile_json(m, m_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate(alg: &str, m: usize, sizes: &str) -> std::result::Result<String, JsValue> {
    simulate_json(alg, m, sizes).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn adversary(alg: &str, m: usize, n_prime: usize) -> std::result::Result<String, JsValue> {
    adversary_json(alg, m, n_prime).map_err(|e| JsValue::from_str(&e))
}
