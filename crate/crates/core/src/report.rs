//! Exact-versus-perturbative comparison summary.

use std::fmt;

use crate::error::Result;
use crate::exact::ExactSolver;
use crate::scenario::{Scenario, SolverKind};
use crate::sweep::run_sweep;
use crate::weisskopf::{decay_rates, WeisskopfSolver};

/// Components whose exact and perturbative values differ by more than this
/// anywhere on the grid are listed.
pub const COMPONENT_TOLERANCE: f64 = 1e-2;
/// Deviations above this are flagged as a breakdown of the perturbative
/// treatment.
pub const LARGE_DEVIATION: f64 = 0.1;
const PEAK_SAMPLES: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max: f64,
    pub mean: f64,
    /// `(t, T)` of the maximum.
    pub at: (f64, f64),
}

/// First transfer peak of each solver, the maximum of the MTF over
/// `(0, 2π/θ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPeak {
    pub t_exact: f64,
    pub mtf_exact: f64,
    pub t_weisskopf: f64,
    pub mtf_weisskopf: f64,
    /// Weisskopf MTF at the exact peak time.
    pub mtf_weisskopf_at_exact_peak: f64,
}

impl FirstPeak {
    /// `|peak_W − peak_E| / peak_E`, each curve at its own maximum.
    pub fn relative_deviation(&self) -> f64 {
        (self.mtf_weisskopf - self.mtf_exact).abs() / self.mtf_exact
    }

    /// Same, with both curves read at the exact peak time.
    pub fn relative_deviation_same_time(&self) -> f64 {
        (self.mtf_weisskopf_at_exact_peak - self.mtf_exact).abs() / self.mtf_exact
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub seed: u64,
    pub grid_points: usize,
    pub mtf: Deviation,
    pub fidelity: Deviation,
    pub sum_rule_exact: f64,
    pub sum_rule_weisskopf: f64,
    /// `(component label, max |exact − weisskopf|)`.
    pub disagreeing_components: Vec<(String, f64)>,
    pub first_peak: FirstPeak,
}

impl CompareReport {
    pub fn large_deviation(&self) -> bool {
        self.mtf.max > LARGE_DEVIATION || self.fidelity.max > LARGE_DEVIATION
    }
}

fn peak_over<F: Fn(f64) -> Result<f64>>(f: F, t_max: f64) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 1..PEAK_SAMPLES {
        let t = t_max * k as f64 / (PEAK_SAMPLES - 1) as f64;
        let v = f(t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    Ok(best)
}

pub fn first_peak(exact: &ExactSolver, weisskopf: &WeisskopfSolver) -> Result<FirstPeak> {
    let period = 2.0 * std::f64::consts::PI / exact.model().theta();
    let (t_exact, mtf_exact) = peak_over(|t| Ok(exact.mtf(t)), period)?;
    let (t_weisskopf, mtf_weisskopf) = peak_over(|t| weisskopf.mtf(t), period)?;
    Ok(FirstPeak {
        t_exact,
        mtf_exact,
        t_weisskopf,
        mtf_weisskopf,
        mtf_weisskopf_at_exact_peak: weisskopf.mtf(t_exact)?,
    })
}

fn deviation(pairs: &[(f64, f64, f64)]) -> Deviation {
    let mut worst = (0.0, (0.0, 0.0));
    let mut total = 0.0;
    for &(t, temperature, d) in pairs {
        total += d;
        if d > worst.0 {
            worst = (d, (t, temperature));
        }
    }
    Deviation {
        max: worst.0,
        mean: if pairs.is_empty() {
            0.0
        } else {
            total / pairs.len() as f64
        },
        at: worst.1,
    }
}

/// Runs the scenario with both solvers, whatever solver it names.
pub fn compare_report(s: &Scenario) -> Result<CompareReport> {
    let mut s = s.clone();
    s.solver = SolverKind::Compare;
    let rows = run_sweep(&s)?;

    let mut mtf = Vec::new();
    let mut fid = Vec::new();
    let mut sum_exact = 0.0_f64;
    let mut sum_w = 0.0_f64;
    let mut component_dev = [0.0_f64; 16];
    for pair in rows.chunks(2) {
        let (e, w) = (&pair[0], &pair[1]);
        mtf.push((e.t, e.temperature, (e.mtf - w.mtf).abs()));
        fid.push((e.t, e.temperature, (e.fidelity - w.fidelity).abs()));
        let (a, b) = e.components.sum_rule_defects();
        sum_exact = sum_exact.max(a).max(b);
        let (a, b) = w.components.sum_rule_defects();
        sum_w = sum_w.max(a).max(b);
        for (k, ((_, ve), (_, vw))) in e.components.iter().zip(w.components.iter()).enumerate() {
            component_dev[k] = component_dev[k].max((ve - vw).norm());
        }
    }

    let labels = rows[0]
        .components
        .iter()
        .map(|((i, j, l, m), _)| format!("F{i}{j}{l}{m}"));
    let disagreeing_components = labels
        .zip(component_dev)
        .filter(|(_, d)| *d > COMPONENT_TOLERANCE)
        .collect();

    let model = s.model()?;
    let exact = ExactSolver::new(&model)?;
    let weisskopf = WeisskopfSolver::new(&model, decay_rates(&model, s.broadening)?)?;

    Ok(CompareReport {
        seed: s.seed(),
        grid_points: mtf.len(),
        mtf: deviation(&mtf),
        fidelity: deviation(&fid),
        sum_rule_exact: sum_exact,
        sum_rule_weisskopf: sum_w,
        disagreeing_components,
        first_peak: first_peak(&exact, &weisskopf)?,
    })
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.first_peak;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "grid_points: {}", self.grid_points)?;
        for (name, d) in [("mtf", &self.mtf), ("fidelity", &self.fidelity)] {
            writeln!(f, "{name}.max_abs_deviation: {:.6e}", d.max)?;
            writeln!(f, "{name}.mean_abs_deviation: {:.6e}", d.mean)?;
            writeln!(f, "{name}.max_at: t={:.6} T={:.6}", d.at.0, d.at.1)?;
        }
        writeln!(
            f,
            "sum_rule.max_violation_exact: {:.6e}",
            self.sum_rule_exact
        )?;
        writeln!(
            f,
            "sum_rule.max_violation_weisskopf: {:.6e}",
            self.sum_rule_weisskopf
        )?;
        let listed: Vec<String> = self
            .disagreeing_components
            .iter()
            .map(|(k, d)| format!("{k}({d:.3e})"))
            .collect();
        writeln!(
            f,
            "components_beyond_{COMPONENT_TOLERANCE:e}: [{}]",
            listed.join(", ")
        )?;
        writeln!(
            f,
            "first_peak.exact: t={:.6} mtf={:.6}",
            p.t_exact, p.mtf_exact
        )?;
        writeln!(
            f,
            "first_peak.weisskopf: t={:.6} mtf={:.6}",
            p.t_weisskopf, p.mtf_weisskopf
        )?;
        writeln!(
            f,
            "first_peak.relative_deviation: {:.6}",
            p.relative_deviation()
        )?;
        writeln!(
            f,
            "first_peak.relative_deviation_same_t: {:.6}",
            p.relative_deviation_same_time()
        )?;
        write!(f, "large_deviation: {}", self.large_deviation())
    }
}
