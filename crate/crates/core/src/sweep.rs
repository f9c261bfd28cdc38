//! Evaluation of a scenario over its `(T, t)` grid and CSV output.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{QstError, Result};
use crate::exact::ExactSolver;
use crate::fidelity::FidelityComponents;
use crate::scenario::{Scenario, SolverKind};
use crate::weisskopf::{decay_rates, mtf_closed_form, DecayRates, WeisskopfSolver};

const SUM_RULE_WARNING: f64 = 1e-3;
const MTF_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// One of `exact`, `weisskopf`, `closed_form`.
    pub solver: SolverKind,
    pub seed: u64,
    pub n_sites: usize,
    pub m_sites: usize,
    pub t: f64,
    pub temperature: f64,
    pub mtf: f64,
    pub fidelity: f64,
    pub components: FidelityComponents,
    /// `|exact − weisskopf|` at the same grid point, compare mode only.
    pub dev_mtf: Option<f64>,
    pub dev_fidelity: Option<f64>,
}

/// Solvers built once per sweep and shared read-only across grid points.
enum Engine {
    Exact(ExactSolver),
    Weisskopf(WeisskopfSolver),
    ClosedForm { solver: WeisskopfSolver, gamma: f64 },
}

impl Engine {
    fn tag(&self) -> SolverKind {
        match self {
            Engine::Exact(_) => SolverKind::Exact,
            Engine::Weisskopf(_) => SolverKind::Weisskopf,
            Engine::ClosedForm { .. } => SolverKind::ClosedForm,
        }
    }

    fn evaluate(
        &self,
        s: &Scenario,
        t: f64,
        temperature: f64,
    ) -> Result<(f64, f64, FidelityComponents)> {
        let amps = &s.amplitudes;
        let pc = s.phase_compensation;
        match self {
            Engine::Exact(x) => Ok((
                x.mtf(t),
                x.fidelity(t, temperature, amps, pc)?,
                x.components(t, temperature)?,
            )),
            Engine::Weisskopf(w) => {
                let components = w.components(t, temperature)?;
                let (a, b) = components.sum_rule_defects();
                if a.max(b) > SUM_RULE_WARNING {
                    log::warn!(
                        "perturbative sum rule violated by {:e} at t = {t}, T = {temperature}",
                        a.max(b)
                    );
                }
                Ok((w.mtf(t)?, w.fidelity(t, temperature, amps, pc)?, components))
            }
            Engine::ClosedForm { solver, gamma } => Ok((
                mtf_closed_form(s.chain.n_sites, s.chain.theta, *gamma, t)?,
                solver.fidelity(t, temperature, amps, pc)?,
                solver.components(t, temperature)?,
            )),
        }
    }
}

fn engines(s: &Scenario) -> Result<Vec<Engine>> {
    let model = s.model()?;
    let rates = || decay_rates(&model, s.broadening);
    Ok(match s.solver {
        SolverKind::Exact => vec![Engine::Exact(ExactSolver::new(&model)?)],
        SolverKind::Weisskopf => vec![Engine::Weisskopf(WeisskopfSolver::new(&model, rates()?)?)],
        SolverKind::ClosedForm => {
            let gamma = match s.closed_form_rate {
                Some(g) => g,
                None => rates()?.mean(),
            };
            let uniform = DecayRates::uniform(model.n_sites(), gamma, s.broadening)?;
            vec![Engine::ClosedForm {
                solver: WeisskopfSolver::new(&model, uniform)?,
                gamma,
            }]
        }
        SolverKind::Compare => vec![
            Engine::Exact(ExactSolver::new(&model)?),
            Engine::Weisskopf(WeisskopfSolver::new(&model, rates()?)?),
        ],
    })
}

fn at_point(err: QstError, t: f64, temperature: f64) -> QstError {
    let here = format!("at t = {t}, T = {temperature}");
    match err {
        QstError::Numeric(m) => QstError::Numeric(format!("{m} ({here})")),
        QstError::Precision(m) => QstError::Precision(format!("{m} ({here})")),
        QstError::Domain(m) => QstError::Domain(format!("{m} ({here})")),
        other => other,
    }
}

/// One row per grid point (per solver in compare mode), ordered by `T`,
/// then `t`, then solver.
pub fn run_sweep(s: &Scenario) -> Result<Vec<SweepRow>> {
    let engines = engines(s)?;
    let grid: Vec<(f64, f64)> = s
        .temperatures
        .iter()
        .flat_map(|temp| s.times.iter().map(move |t| (*temp, *t)))
        .collect();

    let blocks: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&(temperature, t)| {
            let mut rows = Vec::with_capacity(engines.len());
            for e in &engines {
                let (mtf, fidelity, components) =
                    e.evaluate(s, t, temperature).map_err(|err| at_point(err, t, temperature))?;
                if !(mtf.is_finite() && fidelity.is_finite()) || components.iter().any(|(_, v)| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(QstError::Numeric(format!("non-finite result at t = {t}, T = {temperature}")));
                }
                if !(-MTF_SLACK..=1.0 + MTF_SLACK).contains(&mtf) {
                    return Err(QstError::Numeric(format!(
                        "{} transfer probability {mtf} outside [0, 1] at t = {t}, T = {temperature}",
                        e.tag()
                    )));
                }
                rows.push(SweepRow {
                    solver: e.tag(),
                    seed: s.seed(),
                    n_sites: s.chain.n_sites,
                    m_sites: s.bath.m_sites,
                    t,
                    temperature,
                    mtf,
                    fidelity,
                    components,
                    dev_mtf: None,
                    dev_fidelity: None,
                });
            }
            if let [a, b] = rows.as_mut_slice() {
                let dm = (a.mtf - b.mtf).abs();
                let df = (a.fidelity - b.fidelity).abs();
                for r in [a, b] {
                    r.dev_mtf = Some(dm);
                    r.dev_fidelity = Some(df);
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Twelve significant digits; negative zero is written as zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

type Key = (u8, u8, u8, u8);

const DIAGONAL: [(&str, Key); 4] = [
    ("F0000", (0, 0, 0, 0)),
    ("F0011", (0, 0, 1, 1)),
    ("F1100", (1, 1, 0, 0)),
    ("F1111", (1, 1, 1, 1)),
];

const COHERENCES: [(&str, Key); 4] = [
    ("F0110", (0, 1, 1, 0)),
    ("F1010", (1, 0, 1, 0)),
    ("F0101", (0, 1, 0, 1)),
    ("F1001", (1, 0, 0, 1)),
];

pub fn csv_header(compare: bool) -> Vec<String> {
    let mut h: Vec<String> = ["solver", "seed", "N", "M", "t", "T", "mtf", "fidelity"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(DIAGONAL.iter().map(|(name, _)| name.to_string()));
    for (name, _) in COHERENCES {
        h.push(format!("{name}_re"));
        h.push(format!("{name}_im"));
    }
    if compare {
        h.push("dev_mtf".into());
        h.push("dev_fidelity".into());
    }
    h
}

fn record(row: &SweepRow, compare: bool) -> Vec<String> {
    let mut r = vec![
        row.solver.to_string(),
        row.seed.to_string(),
        row.n_sites.to_string(),
        row.m_sites.to_string(),
        format_number(row.t),
        format_number(row.temperature),
        format_number(row.mtf),
        format_number(row.fidelity),
    ];
    for (_, (i, j, l, m)) in DIAGONAL {
        r.push(format_number(row.components.get(i, j, l, m).re));
    }
    for (_, (i, j, l, m)) in COHERENCES {
        let v = row.components.get(i, j, l, m);
        r.push(format_number(v.re));
        r.push(format_number(v.im));
    }
    if compare {
        r.push(format_number(row.dev_mtf.unwrap_or(f64::NAN)));
        r.push(format_number(row.dev_fidelity.unwrap_or(f64::NAN)));
    }
    r
}

/// Writes the table; deviation columns appear when any row carries them.
pub fn write_csv_to<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let compare = rows.iter().any(|r| r.dev_mtf.is_some());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let err = |e: csv::Error| QstError::Io(std::io::Error::other(e));
    w.write_record(csv_header(compare)).map_err(err)?;
    for row in rows {
        w.write_record(record(row, compare)).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv_to(rows, std::io::BufWriter::new(file))
}
