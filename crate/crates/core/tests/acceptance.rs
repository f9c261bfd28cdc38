//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use chainqst::exact::ExactSolver;
use chainqst::fidelity::VANISHING;
use chainqst::report::first_peak;
use chainqst::scenario::{linspace, preset, Scenario, PRESETS};
use chainqst::sweep::{run_sweep, write_csv_to};
use chainqst::weisskopf::{decay_rates, mtf_closed_form, DecayRates, WeisskopfSolver};
use chainqst::wick::C64;
use chainqst::{Amplitudes, BathSpec, ChainSpec, CouplingModel, EnergyReference, SystemModel};
use common::fock::FockSystem;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(limit: Duration, started: Instant) -> (bool, String) {
    let took = started.elapsed();
    (
        took < limit,
        format!("{:.2}s of {:.0}s", took.as_secs_f64(), limit.as_secs_f64()),
    )
}

fn preset_scenario(name: &str) -> Scenario {
    Scenario::from_file(&preset(name).unwrap()).unwrap()
}

fn solvers(s: &Scenario) -> (ExactSolver, WeisskopfSolver) {
    let model = s.model().unwrap();
    let rates = decay_rates(&model, s.broadening).unwrap();
    (
        ExactSolver::new(&model).unwrap(),
        WeisskopfSolver::new(&model, rates).unwrap(),
    )
}

fn decoupled(n: usize) -> SystemModel {
    SystemModel::new(
        ChainSpec::new(n, 1.0).unwrap(),
        BathSpec {
            m_sites: 10 * n,
            energy_mean: 2.5,
            energy_std: 1.0,
            seed: 1,
            energies: None,
        },
        &CouplingModel::Uniform { g0: 0.0 },
        EnergyReference::ModeGrid,
        0,
    )
    .unwrap()
}

fn c1_perfect_transfer() -> Outcome {
    let started = Instant::now();
    let mut worst_peak = 0.0_f64;
    let mut worst_curve = 0.0_f64;
    for n in [2, 4, 10] {
        let s = ExactSolver::new(&decoupled(n)).unwrap();
        worst_peak = worst_peak.max(1.0 - s.mtf(PI));
        for t in linspace(0.0, 4.0 * PI, 200) {
            let closed = (0.5 * t).sin().powi(2 * (n as i32 - 1));
            worst_curve = worst_curve.max((s.mtf(t) - closed).abs());
        }
    }
    let (fast, time) = within(Duration::from_secs(1), started);
    outcome(
        worst_peak <= 1e-10 && worst_curve < 1e-8 && fast,
        format!("1 − mtf(π) ≤ {worst_peak:.1e}, max curve error {worst_curve:.1e}, {time}"),
    )
}

fn c2_closed_form_identity() -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0_f64;
    for n in 2..=12 {
        let model = common::gaussian_model(n, 10 * n, 0.1, 2.5, 1.0, 271828);
        for gamma in [0.0, 0.02, 0.1, 0.5] {
            let s =
                WeisskopfSolver::new(&model, DecayRates::uniform(n, gamma, 0.25).unwrap()).unwrap();
            for t in linspace(0.0, 4.0 * PI, 401) {
                let closed = mtf_closed_form(n, 1.0, gamma, t).unwrap();
                worst = worst.max((s.mtf(t).unwrap() - closed).abs());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(5), started);
    outcome(
        worst < 1e-8 && fast,
        format!("max |mtf − closed form| = {worst:.1e}, {time}"),
    )
}

fn c3_fock_space() -> Outcome {
    let started = Instant::now();
    let model = common::gaussian_model(2, 2, 0.7, 1.0, 1.0, 271828);
    let exact = ExactSolver::new(&model).unwrap();
    let fock = FockSystem::new(&model);
    let mut worst = 0.0_f64;
    for temperature in [0.0, 0.5, 2.0] {
        for t in linspace(0.0, 4.0 * PI, 20) {
            let e = exact.components(t, temperature).unwrap();
            let b = fock.components(t, temperature);
            for ((_, v), r) in e.iter().zip(b) {
                worst = worst.max((v - r).norm());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(10), started);
    outcome(
        worst < 1e-8 && fast,
        format!("max component error {worst:.1e} over 16 × 60 points, {time}"),
    )
}

fn c4_vanishing_components() -> Outcome {
    let s = preset_scenario("fig1a");
    let (e, w) = solvers(&s);
    let mut nonzero = 0;
    let mut checked = 0;
    for temperature in [0.0, 1.0, 10.0] {
        for t in linspace(0.0, 6.0 * PI, 121) {
            for f in [
                e.components(t, temperature).unwrap(),
                w.components(t, temperature).unwrap(),
            ] {
                for (i, j, l, m) in VANISHING {
                    checked += 1;
                    if f.get(i, j, l, m) != C64::new(0.0, 0.0) {
                        nonzero += 1;
                    }
                }
            }
        }
    }
    outcome(
        nonzero == 0,
        format!("{nonzero} of {checked} values not exactly zero"),
    )
}

fn c5_sum_rules() -> Outcome {
    let s = preset_scenario("fig1a");
    let (e, _) = solvers(&s);
    let mut worst = 0.0_f64;
    for &temperature in &s.temperatures {
        for &t in &s.times {
            let (a, b) = e.components(t, temperature).unwrap().sum_rule_defects();
            worst = worst.max(a).max(b);
        }
    }
    outcome(
        worst < 1e-10,
        format!(
            "max defect {worst:.1e} over {} points",
            s.times.len() * s.temperatures.len()
        ),
    )
}

fn c6_equal_amplitudes() -> Outcome {
    let s = preset_scenario("fig2");
    let (_, w) = solvers(&s);
    let h = 0.5f64.sqrt();
    let amps = Amplitudes::real(h, h).unwrap();
    let temps = linspace(0.0, 10.0, 50);
    let mut worst = 0.0_f64;
    for t in [0.5 * PI, PI, 2.0 * PI, 5.0 * PI] {
        let f: Vec<f64> = temps
            .iter()
            .map(|tt| w.fidelity(t, *tt, &amps, false).unwrap())
            .collect();
        let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        worst = worst.max(hi - lo);
    }
    outcome(
        worst < 1e-8,
        format!("max spread over T ∈ [0, 10] is {worst:.1e}"),
    )
}

/// +1 non-decreasing, −1 non-increasing, 0 neither.
fn trend(values: &[f64]) -> i32 {
    let up = values.windows(2).all(|p| p[1] >= p[0] - 1e-12);
    let down = values.windows(2).all(|p| p[1] <= p[0] + 1e-12);
    match (up, down) {
        (true, false) => 1,
        (false, true) => -1,
        _ => 0,
    }
}

fn c7_temperature_trend() -> Outcome {
    let s = preset_scenario("fig2");
    let (e, w) = solvers(&s);
    let temps = linspace(0.0, 10.0, 20);
    let r = 3f64.sqrt() / 2.0;
    let mut ok = true;
    let mut parts = Vec::new();
    for (amps, want, label) in [
        (Amplitudes::real(r, 0.5).unwrap(), -1, "(√3/2, 1/2)"),
        (Amplitudes::real(0.5, r).unwrap(), 1, "(1/2, √3/2)"),
    ] {
        let fe: Vec<f64> = temps
            .iter()
            .map(|tt| e.fidelity(PI, *tt, &amps, false).unwrap())
            .collect();
        let fw: Vec<f64> = temps
            .iter()
            .map(|tt| w.fidelity(PI, *tt, &amps, false).unwrap())
            .collect();
        let (te, tw) = (trend(&fe), trend(&fw));
        ok &= te == want && tw == want;
        parts.push(format!(
            "{label}: exact {:.4}→{:.4}, weisskopf {:.4}→{:.4}",
            fe[0], fe[19], fw[0], fw[19]
        ));
    }
    outcome(ok, parts.join("; "))
}

/// Largest MTF in each transfer period `[2kπ, 2(k+1)π]` over `[0, 6π]`.
fn period_peaks(w: &WeisskopfSolver) -> Vec<f64> {
    (0..3)
        .map(|k| {
            linspace(2.0 * PI * k as f64, 2.0 * PI * (k + 1) as f64, 2001)
                .iter()
                .map(|t| w.mtf(*t).unwrap())
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn c8_envelope() -> (Outcome, Outcome) {
    let started = Instant::now();
    let small = preset_scenario("fig1a");
    let large = preset_scenario("fig1b");
    let (es, ws) = solvers(&small);
    let (el, wl) = solvers(&large);
    let ps = period_peaks(&ws);
    let pl = period_peaks(&wl);
    let decreasing = |p: &[f64]| p.windows(2).all(|q| q[1] < q[0]);
    let fs = first_peak(&es, &ws).unwrap();
    let fl = first_peak(&el, &wl).unwrap();
    let (fast, time) = within(Duration::from_secs(30), started);
    let envelope = outcome(
        decreasing(&ps) && decreasing(&pl) && fast,
        format!(
            "period maxima N=4 [{:.4}, {:.4}, {:.4}], N=10 [{:.4}, {:.4}, {:.4}], {time}",
            ps[0], ps[1], ps[2], pl[0], pl[1], pl[2]
        ),
    );
    let ordering = outcome(
        fl.mtf_weisskopf < fs.mtf_weisskopf && fast,
        format!(
            "first peak N=10 {:.4} vs N=4 {:.4} (exact {:.4} vs {:.4})",
            fl.mtf_weisskopf, fs.mtf_weisskopf, fl.mtf_exact, fs.mtf_exact
        ),
    );
    (envelope, ordering)
}

fn c9_weak_coupling() -> Outcome {
    let model = common::gaussian_model(4, 40, 0.02, 2.5, 1.0, 271828);
    let e = ExactSolver::new(&model).unwrap();
    let w = WeisskopfSolver::new(&model, decay_rates(&model, 0.25).unwrap()).unwrap();
    let p = first_peak(&e, &w).unwrap();
    let dev = p.relative_deviation();
    outcome(
        dev < 0.10,
        format!(
            "peak exact {:.4} at t={:.3}, weisskopf {:.4} at t={:.3}: relative deviation {dev:.4} (same-t {:.4})",
            p.mtf_exact,
            p.t_exact,
            p.mtf_weisskopf,
            p.t_weisskopf,
            p.relative_deviation_same_time()
        ),
    )
}

fn c10_determinism() -> Outcome {
    let mut differing = Vec::new();
    let mut bytes = 0;
    for name in PRESETS {
        let s = preset_scenario(name);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv_to(&run_sweep(&s).unwrap(), &mut a).unwrap();
        write_csv_to(&run_sweep(&s).unwrap(), &mut b).unwrap();
        bytes += a.len();
        if a != b {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} presets, {bytes} bytes, differing: {differing:?}",
            PRESETS.len()
        ),
    )
}

fn main() {
    let (c8a, c8b) = c8_envelope();
    let results = [
        ("C1", "perfect-transfer baseline", c1_perfect_transfer()),
        ("C2", "closed-form identity", c2_closed_form_identity()),
        ("C3", "brute-force Fock-space validation", c3_fock_space()),
        ("C4", "vanishing components", c4_vanishing_components()),
        ("C5", "trace sum rules", c5_sum_rules()),
        (
            "C6",
            "temperature independence at equal amplitudes",
            c6_equal_amplitudes(),
        ),
        ("C7", "temperature monotonicity", c7_temperature_trend()),
        ("C8a", "decreasing transfer-peak envelope", c8a),
        ("C8b", "first peak lower for N=10 than N=4", c8b),
        ("C9", "weak-coupling oracle agreement", c9_weak_coupling()),
        ("C10", "determinism", c10_determinism()),
    ];
    let mut failed = Vec::new();
    for (id, name, o) in &results {
        println!(
            "{} {id:<4} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(*id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        results.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
