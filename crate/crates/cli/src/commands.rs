use std::path::PathBuf;

use localctl::control::{
    classify_with, default_max_depth, heisenberg_drift, ising_drift, random_two_local_drift, site_controls, Pauli,
    DEFAULT_TOL,
};
use localctl::engine::{bound_terms, carnot_like_protocol, Corners};
use localctl::hamiltonians::ising_hamiltonian;
use localctl::ising::{
    efficiency_at_max_work, ground_state_degeneracy, j_grid, optimal_field, precision_efficiency, LevelTable,
    SweepMode, MAX_PRECISION_SITES,
};
use localctl::linalg::CMatrix;
use localctl::{efficiency_bound, run_cycle, GeneratorSet, InverseTemperaturePair, UnitaryChoice, UnitaryClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{BoundArgs, ControlArgs, CycleArgs, GsDegArgs, OptimalFieldArgs, PrecisionArgs, SweepArgs, Temps};
use crate::config::{finite, j_range, pick, pick_list, positive, require, FileConfig};
use crate::output::{float, number, print_json, Csv};
use crate::CliError;

fn temperatures(t: &Temps, file: &FileConfig) -> Result<InverseTemperaturePair, CliError> {
    let beta_h = positive(pick(t.beta_h, file.beta_h, 0.5), "--beta-h")?;
    let beta_c = positive(pick(t.beta_c, file.beta_c, 1.0), "--beta-c")?;
    if beta_h >= beta_c {
        return Err(CliError::Config(format!("--beta-h ({beta_h}) must be below --beta-c ({beta_c})")));
    }
    Ok(InverseTemperaturePair::new(beta_h, beta_c)?)
}

fn pool(flag: Option<usize>, file: &FileConfig) -> Result<rayon::ThreadPool, CliError> {
    let threads = flag.or(file.threads);
    if threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("--threads: {e}")))
}

fn grid(min: Option<f64>, max: Option<f64>, step: Option<f64>, file: &FileConfig, default: (f64, f64, f64)) -> Result<(Vec<f64>, [f64; 3]), CliError> {
    let (lo, hi, dj) = j_range(
        pick(min, file.j_min, default.0),
        pick(max, file.j_max, default.1),
        pick(step, file.j_step, default.2),
    )?;
    let js = j_grid(lo, hi, dj).map_err(|e| CliError::Config(format!("J grid: {e}")))?;
    Ok((js, [lo, hi, dj]))
}

fn output_path(flag: Option<PathBuf>, file: &FileConfig) -> Option<PathBuf> {
    flag.or_else(|| file.output.clone())
}

#[derive(Serialize)]
struct SweepParams {
    command: &'static str,
    beta_h: f64,
    beta_c: f64,
    j_min: f64,
    j_max: f64,
    j_step: f64,
    mode: &'static str,
}

pub fn sweep_j(a: SweepArgs, file: &FileConfig) -> Result<(), CliError> {
    let betas = temperatures(&a.temps, file)?;
    let (js, [j_min, j_max, j_step]) = grid(a.range.j_min, a.range.j_max, a.range.j_step, file, (-5.0, 5.0, 0.1))?;
    let mode = match pick(a.mode, file.mode.clone(), "paper".into()).as_str() {
        "paper" => SweepMode::Tied,
        "free" => SweepMode::Free,
        other => return Err(CliError::Config(format!("--mode must be paper or free, got {other:?}"))),
    };
    let pool = pool(a.threads, file)?;
    let points = pool.install(|| {
        js.par_iter().map(|&j| efficiency_at_max_work(j, &betas, mode)).collect::<Result<Vec<_>, _>>()
    })?;
    let params = SweepParams { command: "sweep-j", beta_h: betas.beta_h, beta_c: betas.beta_c, j_min, j_max, j_step, mode: mode.name() };
    let mut csv = Csv::new(&["J", "h_opt", "work_density", "efficiency", "mode"], &params);
    for p in &points {
        csv.row(&[float(p.j), float(p.h_opt), float(p.work_density), float(p.efficiency), mode.name().into()]);
    }
    csv.write(output_path(a.output, file).as_deref())
}

#[derive(Serialize)]
struct PrecisionParams {
    command: &'static str,
    beta_h: f64,
    beta_c: f64,
    #[serde(rename = "N")]
    n: usize,
    epsilon: Vec<f64>,
    j_min: f64,
    j_max: f64,
    j_step: f64,
}

pub fn precision(a: PrecisionArgs, file: &FileConfig) -> Result<(), CliError> {
    let betas = temperatures(&a.temps, file)?;
    let n = pick(a.n, file.n, 6);
    if n == 0 || n > MAX_PRECISION_SITES {
        return Err(CliError::Config(format!("-N must be between 1 and {MAX_PRECISION_SITES}, got {n}")));
    }
    let epsilon = pick_list(a.epsilon, file.epsilon.clone(), Vec::new());
    if epsilon.is_empty() {
        return Err(CliError::Config("--epsilon needs at least one value".into()));
    }
    for &e in &epsilon {
        if !(e.is_finite() && e >= 0.0) {
            return Err(CliError::Config(format!("--epsilon must be finite and non-negative, got {e}")));
        }
    }
    let (js, [j_min, j_max, j_step]) = grid(a.range.j_min, a.range.j_max, a.range.j_step, file, (0.0, 20.0, 0.25))?;
    let table = LevelTable::new(n)?;
    let tasks: Vec<(f64, f64)> = epsilon.iter().flat_map(|&e| js.iter().map(move |&j| (e, j))).collect();
    let pool = pool(a.threads, file)?;
    let points = pool.install(|| {
        tasks.par_iter().map(|&(e, j)| precision_efficiency(&table, j, e, &betas)).collect::<Result<Vec<_>, _>>()
    })?;
    let params = PrecisionParams { command: "precision", beta_h: betas.beta_h, beta_c: betas.beta_c, n, epsilon, j_min, j_max, j_step };
    let mut csv = Csv::new(&["J", "epsilon", "efficiency"], &params);
    for p in &points {
        csv.row(&[float(p.j), float(p.epsilon), float(p.efficiency)]);
    }
    csv.write(output_path(a.output, file).as_deref())
}

#[derive(Serialize)]
struct OptimalFieldParams {
    command: &'static str,
    betas: Vec<f64>,
    j_min: f64,
    j_max: f64,
    j_step: f64,
}

pub fn optimal_field_sweep(a: OptimalFieldArgs, file: &FileConfig) -> Result<(), CliError> {
    let betas = pick_list(a.beta, file.betas.clone(), vec![1.0, 2.0, 3.0]);
    for &b in &betas {
        positive(b, "--beta")?;
    }
    let (js, [j_min, j_max, j_step]) = grid(a.range.j_min, a.range.j_max, a.range.j_step, file, (-3.0, 0.0, 0.01))?;
    let tasks: Vec<(f64, f64)> = betas.iter().flat_map(|&b| js.iter().map(move |&j| (b, j))).collect();
    let pool = pool(a.threads, file)?;
    let fields = pool.install(|| tasks.par_iter().map(|&(b, j)| optimal_field(b, j)).collect::<Result<Vec<_>, _>>())?;
    let params = OptimalFieldParams { command: "optimal-field", betas, j_min, j_max, j_step };
    let mut csv = Csv::new(&["beta", "J", "h_opt"], &params);
    for (&(b, j), &h) in tasks.iter().zip(&fields) {
        csv.row(&[float(b), float(j), float(h)]);
    }
    csv.write(output_path(a.output, file).as_deref())
}

struct CornerSetup {
    corners: Corners,
    echo: Value,
}

fn corners(n: Option<usize>, j: Option<f64>, fields: [Option<f64>; 4], file: &FileConfig) -> Result<CornerSetup, CliError> {
    let n = pick(n, file.n, 2);
    let j = finite(pick(j, file.j, 0.0), "-J")?;
    let names = ["--h-a", "--h-b", "--h-c", "--h-d"];
    let from_file = [file.h_a, file.h_b, file.h_c, file.h_d];
    let mut h = [0.0; 4];
    for k in 0..4 {
        h[k] = finite(require(fields[k], from_file[k], names[k])?, names[k])?;
    }
    let build = |x: f64| ising_hamiltonian(n, j, x).map_err(CliError::from_config);
    let corners = Corners { h_a: build(h[0])?, h_b: build(h[1])?, h_c: build(h[2])?, h_d: build(h[3])? };
    let echo = json!({ "N": n, "J": j, "h_a": h[0], "h_b": h[1], "h_c": h[2], "h_d": h[3] });
    Ok(CornerSetup { corners, echo })
}

pub fn bound(a: BoundArgs, file: &FileConfig) -> Result<(), CliError> {
    let betas = temperatures(&a.temps, file)?;
    let setup = corners(a.corners.n, a.corners.j, a.corners.fields(), file)?;
    let class_name = pick(a.class, file.class.clone(), "commuting".into());
    let choice = match class_name.as_str() {
        "full" => UnitaryChoice::Class(UnitaryClass::Full),
        "commuting" => UnitaryChoice::Class(UnitaryClass::Commuting),
        "identity" => UnitaryChoice::Identity,
        other => return Err(CliError::Config(format!("--class must be full, commuting or identity, got {other:?}"))),
    };
    let inputs = localctl::BoundInputs { corners: setup.corners, betas, u: choice.clone(), v: choice };
    let terms = bound_terms(&inputs)?;
    let eta = efficiency_bound(&inputs)?;
    let mut echo = setup.echo;
    echo["beta_h"] = json!(betas.beta_h);
    echo["beta_c"] = json!(betas.beta_c);
    echo["class"] = json!(class_name);
    print_json(&json!({
        "command": "bound",
        "inputs": echo,
        "bound": number(eta),
        "carnot": number(betas.carnot()),
        "entropy_gain": number(terms.entropy_gain),
        "penalty_hot_to_cold": number(terms.penalty_hot_to_cold),
        "penalty_cold_to_hot": number(terms.penalty_cold_to_hot),
    }))
}

pub fn cycle(a: CycleArgs, file: &FileConfig) -> Result<(), CliError> {
    let betas = temperatures(&a.temps, file)?;
    let setup = corners(a.corners.n, a.corners.j, a.corners.fields(), file)?;
    let micro_steps = pick(a.micro_steps, file.micro_steps, localctl::engine::DEFAULT_MICRO_STEPS);
    if micro_steps == 0 {
        return Err(CliError::Config("--micro-steps must be at least 1".into()));
    }
    let steps = carnot_like_protocol(&setup.corners, micro_steps, None, None)?;
    let report = run_cycle(&setup.corners.h_d, &steps, &betas)?;
    if !(report.heat_hot > 0.0) {
        return Err(CliError::Undefined(format!("efficiency undefined: hot-bath heat {} is not positive", report.heat_hot)));
    }
    let inputs = localctl::BoundInputs { corners: setup.corners, betas, u: UnitaryChoice::Identity, v: UnitaryChoice::Identity };
    let bound = match efficiency_bound(&inputs) {
        Ok(v) => number(v),
        Err(localctl::Error::BoundUndefined(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let mut echo = setup.echo;
    echo["beta_h"] = json!(betas.beta_h);
    echo["beta_c"] = json!(betas.beta_c);
    echo["micro_steps"] = json!(micro_steps);
    print_json(&json!({
        "command": "cycle",
        "inputs": echo,
        "total_work": number(report.total_work),
        "heat_hot": number(report.heat_hot),
        "heat_cold": number(report.heat_cold),
        "efficiency": number(report.efficiency),
        "bound": bound,
        "converged": report.converged,
        "iterations": report.iterations,
        "first_law_residual": number(report.first_law_residual),
        "steps": report.per_step.len(),
    }))
}

pub fn gs_deg(a: GsDegArgs, file: &FileConfig) -> Result<(), CliError> {
    let n = require(a.n, file.n, "-N")?;
    let j = finite(pick(a.j, file.j, -1.0), "-J")?;
    let h = finite(pick(a.h, file.h, 0.0), "-h")?;
    let gs = ground_state_degeneracy(n, j, h).map_err(CliError::from_config)?;
    print_json(&json!({
        "command": "gs-deg",
        "inputs": { "N": n, "J": j, "h": h },
        "g0": gs.g0,
        "e0": number(gs.e0),
    }))
}

/// `site<k>:<paulis>` or `all:<paulis>`, e.g. `site0:x,z`.
fn parse_controls(spec: &str, n: usize) -> Result<Vec<CMatrix>, CliError> {
    let bad = || CliError::Config(format!("--controls {spec:?}: expected site<k>:<x|y|z,...> or all:<x|y|z,...>"));
    let (target, ops) = spec.split_once(':').ok_or_else(bad)?;
    let paulis = ops
        .split(',')
        .map(|p| Pauli::parse(p.trim()).ok_or_else(bad))
        .collect::<Result<Vec<_>, _>>()?;
    let sites: Vec<usize> = if target == "all" {
        (0..n).collect()
    } else {
        vec![target.strip_prefix("site").and_then(|k| k.parse().ok()).ok_or_else(bad)?]
    };
    let mut out = Vec::new();
    for s in sites {
        out.extend(site_controls(n, s, &paulis).map_err(CliError::from_config)?);
    }
    Ok(out)
}

pub fn control(a: ControlArgs, file: &FileConfig) -> Result<(), CliError> {
    let model = pick(a.model, file.model.clone(), "heisenberg-chain".into());
    let n = pick(a.n, file.n, 2);
    let seed = pick(a.seed, file.seed, 0);
    let drift = match model.as_str() {
        "heisenberg-chain" => Some(heisenberg_drift(n)),
        "ising-chain" => Some(ising_drift(n)),
        "random-two-local" => Some(random_two_local_drift(&mut ChaCha8Rng::seed_from_u64(seed), n)),
        "none" => None,
        other => {
            return Err(CliError::Config(format!(
                "--model must be heisenberg-chain, ising-chain, random-two-local or none, got {other:?}"
            )))
        }
    };
    let drift = drift.transpose().map_err(CliError::from_config)?;
    let specs = pick_list(a.controls, file.controls.clone(), Vec::new());
    let mut controls = Vec::new();
    for s in &specs {
        controls.extend(parse_controls(s, n)?);
    }
    let gens = GeneratorSet::new(drift, controls).map_err(CliError::from_config)?;
    let d = gens.dim();
    let max_depth = pick(a.max_depth, file.max_depth, default_max_depth(d));
    let tol = positive(pick(a.tol, file.tol, DEFAULT_TOL), "--tol")?;
    let (class, closure) = classify_with(&gens, max_depth, tol)?;
    let mut inputs = json!({ "model": model, "N": n, "controls": specs, "max_depth": max_depth, "tol": tol });
    if model == "random-two-local" {
        inputs["seed"] = json!(seed);
    }
    print_json(&json!({
        "command": "control",
        "inputs": inputs,
        "class": class.name(),
        "dim": closure.dim,
        "full_dim": d * d - 1,
        "depth": closure.depth,
        "stabilized": closure.stabilized,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_specs() {
        assert_eq!(parse_controls("site0:x,z", 2).unwrap().len(), 2);
        assert_eq!(parse_controls("all:z", 3).unwrap().len(), 3);
        for bad in ["site0", "site:x", "site0:q", "left:x"] {
            assert!(parse_controls(bad, 2).is_err(), "{bad}");
        }
        assert!(parse_controls("site5:x", 2).is_err());
    }
}
