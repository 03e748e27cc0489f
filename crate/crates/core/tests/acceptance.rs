//! Acceptance suite: one check per criterion, each printing a pass/fail line.

use std::io::Write;
use std::time::{Duration, Instant};

use localctl::control::{heisenberg_drift, ising_drift, site_controls, Pauli};
use localctl::engine::{carnot_like_protocol, isothermal_staircase, Corners, DEFAULT_MICRO_STEPS};
use localctl::hamiltonians::ising_hamiltonian;
use localctl::ising::{
    efficiency_at_max_work, efficiency_thermo_limit, enumerated_log_z, entropy_density, entropy_density_dh,
    ferro_efficiency_limit, free_energy_density, ground_state_degeneracy, optimal_field, transfer_matrix_logZ,
    work_density, ProtocolFields, SweepMode,
};
use localctl::linalg::{random_probabilities, random_unitary};
use localctl::thermo::{Basis, DensityState};
use localctl::{
    classify_unitary_class, efficiency_bound, lie_algebra_dimension, relative_entropy_down, run_cycle, Bath,
    BoundInputs, ControlClass, Error, GeneratorSet, InverseTemperaturePair, ProtocolStep, UnitaryChoice, UnitaryClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn betas() -> InverseTemperaturePair {
    InverseTemperaturePair::new(0.5, 1.0).unwrap()
}

fn corners(j: f64, [a, b, c, d]: [f64; 4]) -> Corners {
    let h = |x| ising_hamiltonian(2, j, x).unwrap();
    Corners { h_a: h(a), h_b: h(b), h_c: h(c), h_d: h(d) }
}

fn carnot_recovery() -> Check {
    let b = betas();
    // H_C = (β_h/β_c) H_B, H_A = (β_c/β_h) H_D
    let c = corners(0.0, [4.0, 1.0, 0.5, 2.0]);
    let inputs = BoundInputs { corners: c.clone(), betas: b, u: UnitaryChoice::Identity, v: UnitaryChoice::Identity };
    let bound = efficiency_bound(&inputs).map_err(|e| e.to_string())?;
    ensure((bound - 0.5).abs() < 1e-6, || format!("bound {bound}"))?;
    let steps = carnot_like_protocol(&c, DEFAULT_MICRO_STEPS, None, None).map_err(|e| e.to_string())?;
    let report = run_cycle(&c.h_d, &steps, &b).map_err(|e| e.to_string())?;
    ensure(report.converged, || "cycle did not converge".into())?;
    ensure((report.efficiency - 0.5).abs() < 1e-3, || format!("cycle efficiency {}", report.efficiency))?;
    let p = efficiency_at_max_work(0.0, &b, SweepMode::Tied).map_err(|e| e.to_string())?;
    ensure((p.efficiency - 0.5).abs() < 1e-6, || format!("thermodynamic-limit efficiency {}", p.efficiency))
}

fn antiferromagnetic_limit() -> Check {
    let b = betas();
    let fields = ProtocolFields::polarised(80.0);
    let w = work_density(-40.0, &fields, &b).map_err(|e| e.to_string())?;
    let target = (b.t_hot() - b.t_cold()) * 0.5 * 2f64.ln() - 1e-3;
    ensure(w >= target, || format!("work density {w} < {target}"))?;
    let eta = efficiency_thermo_limit(-40.0, &fields, &b).map_err(|e| e.to_string())?;
    ensure(eta >= 0.49, || format!("efficiency {eta}"))?;
    let p = efficiency_at_max_work(-40.0, &b, SweepMode::Tied).map_err(|e| e.to_string())?;
    ensure(p.work_density >= target && p.efficiency >= 0.49, || format!("optimised point {p:?}"))
}

fn ferromagnetic_collapse() -> Check {
    let b = betas();
    for mode in [SweepMode::Tied, SweepMode::Free] {
        let p = efficiency_at_max_work(40.0, &b, mode).map_err(|e| e.to_string())?;
        ensure(p.efficiency < 0.05 && p.work_density < 1e-3, || format!("{mode:?}: {p:?}"))?;
    }
    let v: Vec<f64> = [6, 12, 24, 96]
        .iter()
        .map(|&n| ferro_efficiency_limit(0.1, n, &b).unwrap())
        .collect();
    ensure(v[0] > v[1] && v[1] > v[2], || format!("not decreasing: {v:?}"))?;
    ensure(v[3] < 0.01, || format!("N = 96 gives {}", v[3]))
}

fn optimal_field_kink() -> Check {
    for beta in [1.0, 2.0, 3.0] {
        let critical = 1.0 / (2.0 * beta);
        for k in 0..=1000 {
            let j = -critical * k as f64 / 1000.0;
            let h = optimal_field(beta, j).map_err(|e| e.to_string())?;
            ensure(h == 0.0, || format!("β {beta}, J {j}: h_opt {h}"))?;
        }
        let h = optimal_field(beta, -(critical + 0.01)).map_err(|e| e.to_string())?;
        ensure(h > 0.0, || format!("β {beta}: h_opt vanishes past the kink"))?;
    }
    let h = optimal_field(1.0, -1.0).map_err(|e| e.to_string())?;
    ensure((h - 2.0 * h.tanh()).abs() < 1e-9, || format!("residual {}", h - 2.0 * h.tanh()))
}

/// `min_π Σ p_i log(p_i/q_π(i))` by trying every pairing.
fn best_pairing(p: &[f64], q: &[f64]) -> f64 {
    fn permute(k: usize, idx: &mut Vec<usize>, p: &[f64], q: &[f64], best: &mut f64) {
        if k == idx.len() {
            let mut total = 0.0;
            for (i, &j) in idx.iter().enumerate() {
                if p[i] == 0.0 {
                    continue;
                }
                if q[j] == 0.0 {
                    return;
                }
                total += p[i] * (p[i] / q[j]).ln();
            }
            *best = best.min(total);
            return;
        }
        for s in k..idx.len() {
            idx.swap(k, s);
            permute(k + 1, idx, p, q, best);
            idx.swap(k, s);
        }
    }
    let mut best = f64::INFINITY;
    permute(0, &mut (0..p.len()).collect(), p, q, &mut best);
    best.max(0.0)
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for n in 4..=12 {
        for _ in 0..50 {
            let (j, h, beta) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(0.05..3.0));
            let direct = enumerated_log_z(n, j, h, beta).map_err(|e| e.to_string())?;
            let tm = transfer_matrix_logZ(n, j, h, beta).map_err(|e| e.to_string())?;
            let rel = (tm - direct).abs() / direct.abs();
            worst = worst.max(rel);
            ensure(rel < 1e-10, || format!("N {n} J {j} h {h} β {beta}: relative error {rel:e}"))?;
        }
    }
    for _ in 0..100 {
        let d = rng.random_range(2..=4);
        let state = |rng: &mut ChaCha8Rng| {
            let mut p = random_probabilities(rng, d);
            if rng.random_bool(0.2) {
                p[rng.random_range(0..d)] = 0.0;
                let total: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= total);
            }
            let basis = Basis::Dense(random_unitary(rng, d));
            (DensityState::new(p.clone(), basis).unwrap(), p)
        };
        let (rho, p) = state(&mut rng);
        let (sigma, q) = state(&mut rng);
        let fast = relative_entropy_down(&rho, &sigma).map_err(|e| e.to_string())?;
        let slow = best_pairing(&p, &q);
        let agree = if slow.is_infinite() { fast == slow } else { (fast - slow).abs() < 1e-10 };
        ensure(agree, || format!("D↓ {fast} vs exhaustive {slow} for {p:?} {q:?}"))?;
    }
    Ok(())
}

/// A random quench–contact path from `from` to `to`, through random
/// intermediate fields, in contact with one bath.
fn random_path(rng: &mut ChaCha8Rng, j: f64, to: f64, bath: Bath) -> Vec<ProtocolStep> {
    let mut steps = Vec::new();
    for _ in 0..rng.random_range(0..4) {
        let via = ising_hamiltonian(2, j, rng.random_range(-3.0..3.0)).unwrap();
        steps.push(ProtocolStep::Quench(via));
        steps.push(ProtocolStep::ThermalContact(bath));
    }
    steps.push(ProtocolStep::Quench(ising_hamiltonian(2, j, to).unwrap()));
    steps.push(ProtocolStep::ThermalContact(bath));
    steps
}

fn bound_dominance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b = betas();
    let (mut compared, mut tries) = (0, 0);
    while compared < 200 {
        tries += 1;
        ensure(tries < 5000, || format!("only {compared} comparable cycles"))?;
        let j = rng.random_range(-2.0..2.0);
        let f: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        let c = corners(j, f);
        let class = if rng.random_bool(0.5) { UnitaryClass::Commuting } else { UnitaryClass::Full };
        let inputs = BoundInputs { corners: c.clone(), betas: b, u: UnitaryChoice::Class(class), v: UnitaryChoice::Class(class) };
        let bound = match efficiency_bound(&inputs) {
            Ok(v) => v,
            Err(Error::BoundUndefined(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        // D → A, hot leg A ⇝ B, B → C, cold leg C ⇝ D
        let mut steps = vec![ProtocolStep::Quench(c.h_a.clone()), ProtocolStep::ThermalContact(Bath::Hot)];
        if rng.random_bool(0.5) {
            steps.extend(isothermal_staircase(&c.h_a, &c.h_b, Bath::Hot, rng.random_range(1..40)).unwrap());
        } else {
            steps.extend(random_path(&mut rng, j, f[1], Bath::Hot));
        }
        steps.push(ProtocolStep::Quench(c.h_c.clone()));
        steps.push(ProtocolStep::ThermalContact(Bath::Cold));
        if rng.random_bool(0.5) {
            steps.extend(isothermal_staircase(&c.h_c, &c.h_d, Bath::Cold, rng.random_range(1..40)).unwrap());
        } else {
            steps.extend(random_path(&mut rng, j, f[3], Bath::Cold));
        }
        let r = run_cycle(&c.h_d, &steps, &b).map_err(|e| e.to_string())?;
        if r.converged {
            ensure(r.first_law_residual.abs() < 1e-9, || format!("first-law residual {:e}", r.first_law_residual))?;
        }
        if !(r.heat_hot > 0.0) {
            continue;
        }
        compared += 1;
        ensure(r.efficiency <= bound + 1e-9, || format!("η {} above bound {bound} at J {j}, fields {f:?}", r.efficiency))?;
    }
    Ok(())
}

fn derivative_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let step = 1e-5;
    for _ in 0..20 {
        let beta = rng.random_range(0.2..3.0);
        let j = rng.random_range(-10.0..10.0) / beta;
        let h = rng.random_range(-10.0..10.0) / beta;
        let t = 1.0 / beta;
        let f_at = |t: f64| free_energy_density(1.0 / t, j, h).unwrap();
        let s_fd = -(f_at(t + step) - f_at(t - step)) / (2.0 * step);
        let s = entropy_density(beta, j, h).map_err(|e| e.to_string())?;
        ensure((s - s_fd).abs() < 1e-6, || format!("s at (β {beta}, J {j}, h {h}): {s} vs {s_fd}"))?;
        let ds_fd = (entropy_density(beta, j, h + step).unwrap() - entropy_density(beta, j, h - step).unwrap()) / (2.0 * step);
        let ds = entropy_density_dh(beta, j, h).map_err(|e| e.to_string())?;
        ensure((ds - ds_fd).abs() < 1e-6, || format!("∂s/∂h at (β {beta}, J {j}, h {h}): {ds} vs {ds_fd}"))?;
    }
    Ok(())
}

fn degeneracy_counting() -> Check {
    for n in 2..=12 {
        let g = ground_state_degeneracy(n, -1.0, 0.0).map_err(|e| e.to_string())?.g0;
        let expected = if n % 2 == 0 { 2 } else { 2 * n as u64 };
        ensure(g == expected, || format!("N {n}, h 0: g0 {g}, expected {expected}"))?;
        if n % 2 == 0 {
            let g = ground_state_degeneracy(n, -1.0, 2.0).map_err(|e| e.to_string())?.g0;
            ensure(g >= 1 << (n / 2), || format!("N {n}, h 2: g0 {g}"))?;
        }
    }
    Ok(())
}

fn controllability() -> Check {
    let heis = GeneratorSet::new(Some(heisenberg_drift(2).unwrap()), site_controls(2, 0, &[Pauli::X, Pauli::Z]).unwrap())
        .map_err(|e| e.to_string())?;
    let closure = lie_algebra_dimension(&heis, localctl::control::default_max_depth(4), localctl::control::DEFAULT_TOL);
    ensure(closure.dim == 15 && closure.stabilized, || format!("Heisenberg closure {closure:?}"))?;
    let mut controls = site_controls(2, 0, &[Pauli::Z]).unwrap();
    controls.extend(site_controls(2, 1, &[Pauli::Z]).unwrap());
    let ising = GeneratorSet::new(Some(ising_drift(2).unwrap()), controls).map_err(|e| e.to_string())?;
    let (class, _) = classify_unitary_class(&ising).map_err(|e| e.to_string())?;
    ensure(class == ControlClass::Commuting, || format!("Ising classified {class:?}"))?;
    // the commuting bound then coincides with the identity-unitary bound
    let c = corners(1.0, [3.0, 0.8, 0.5, 2.0]);
    let choice = UnitaryChoice::for_class(class).map_err(|e| e.to_string())?;
    let commuting = efficiency_bound(&BoundInputs { corners: c.clone(), betas: betas(), u: choice.clone(), v: choice })
        .map_err(|e| e.to_string())?;
    let identity = efficiency_bound(&BoundInputs { corners: c, betas: betas(), u: UnitaryChoice::Identity, v: UnitaryChoice::Identity })
        .map_err(|e| e.to_string())?;
    ensure(commuting == identity, || format!("{commuting} vs {identity}"))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Check, Duration);
    let criteria: [Criterion; 9] = [
        ("carnot recovery at zero coupling", carnot_recovery, Duration::from_secs(1)),
        ("anti-ferromagnetic limit", antiferromagnetic_limit, Duration::from_secs(1)),
        ("ferromagnetic collapse", ferromagnetic_collapse, Duration::from_secs(1)),
        ("optimal-field kink", optimal_field_kink, Duration::from_secs(1)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(30)),
        ("bound dominance", bound_dominance, Duration::from_secs(60)),
        ("derivative checks", derivative_checks, Duration::from_secs(1)),
        ("degeneracy counting", degeneracy_counting, Duration::from_secs(10)),
        ("controllability", controllability, Duration::from_secs(5)),
    ];
    // written to the handle directly so the lines survive output capture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failures = Vec::new();
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > *limit {
            outcome = Err(format!("took {elapsed:?}, limit {limit:?}"));
        }
        match &outcome {
            Ok(()) => writeln!(out, "criterion {}: PASS  {name} ({elapsed:.2?})", k + 1).unwrap(),
            Err(msg) => {
                writeln!(out, "criterion {}: FAIL  {name} ({elapsed:.2?}): {msg}", k + 1).unwrap();
                failures.push(k + 1);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
