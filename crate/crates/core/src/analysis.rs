//! Observables, trajectory comparisons, steady states and validity sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generator::{assemble_exact, assemble_tcg, Generator};
use crate::model::{slow_timescale, DecayChannel, Drive, DrivenLevelSystem};
use crate::operator::{hermitize, ComplexMatrix, DensityMatrix, ONE, ZERO};
use crate::solver::{default_dt, propagate, TimeGrid, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
    Abs,
}

impl Part {
    pub fn suffix(self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
            Part::Abs => "abs",
        }
    }
}

/// `⟨σ_ij⟩ = Tr(|i⟩⟨j| ρ) = ρ_ji`, projected onto one real part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObservableSpec {
    pub name: String,
    pub i: usize,
    pub j: usize,
    pub part: Part,
}

impl ObservableSpec {
    pub fn new(name: impl Into<String>, i: usize, j: usize, part: Part) -> Self {
        ObservableSpec {
            name: name.into(),
            i,
            j,
            part,
        }
    }

    /// `<name>_<part>`, the column name used in CSV output.
    pub fn column(&self) -> String {
        format!("{}_{}", self.name, self.part.suffix())
    }

    pub fn evaluate(&self, rho: &ComplexMatrix) -> f64 {
        let z = rho[(self.j, self.i)];
        match self.part {
            Part::Re => z.re,
            Part::Im => z.im,
            Part::Abs => z.norm(),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        for index in [self.i, self.j] {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
        }
        Ok(())
    }
}

pub fn observable_series(traj: &Trajectory, spec: &ObservableSpec) -> Result<Vec<f64>> {
    spec.check(traj.dim())?;
    Ok(traj.states.iter().map(|rho| spec.evaluate(rho)).collect())
}

/// Deviation metrics for one observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
    pub final_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub window: (f64, f64),
    pub deviations: Vec<Deviation>,
}

impl ComparisonReport {
    pub fn max_abs(&self) -> f64 {
        self.deviations.iter().map(|d| d.max_abs).fold(0.0, f64::max)
    }

    pub fn get(&self, column: &str) -> Option<&Deviation> {
        self.deviations.iter().find(|d| d.name == column)
    }
}

/// Compares two trajectories on identical grids over the grid points inside
/// `window` (the whole span when `None`).
pub fn compare(
    a: &Trajectory,
    b: &Trajectory,
    specs: &[ObservableSpec],
    window: Option<(f64, f64)>,
) -> Result<ComparisonReport> {
    if a.grid != b.grid || a.dim() != b.dim() {
        return Err(Error::GridMismatch);
    }
    let grid = &a.grid;
    let (ta, tb) = window.unwrap_or((grid.t0(), grid.t1()));
    let slack = 1e-9 * (grid.t1() - grid.t0());
    if ta.is_nan() || tb.is_nan() || ta > tb || ta < grid.t0() - slack || tb > grid.t1() + slack {
        return Err(Error::InvalidGrid(format!(
            "window [{ta}, {tb}] outside [{}, {}]",
            grid.t0(),
            grid.t1()
        )));
    }
    let points: Vec<usize> = (0..grid.len())
        .filter(|&k| {
            let t = grid.time(k);
            t >= ta - slack && t <= tb + slack
        })
        .collect();
    let deviations = specs
        .iter()
        .map(|spec| {
            spec.check(a.dim())?;
            let diffs: Vec<f64> = points
                .iter()
                .map(|&k| (spec.evaluate(&a.states[k]) - spec.evaluate(&b.states[k])).abs())
                .collect();
            let count = diffs.len().max(1) as f64;
            Ok(Deviation {
                name: spec.column(),
                max_abs: diffs.iter().cloned().fold(0.0, f64::max),
                rms: (diffs.iter().map(|d| d * d).sum::<f64>() / count).sqrt(),
                final_abs: diffs.last().cloned().unwrap_or(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        window: (ta, tb),
        deviations,
    })
}

/// Mean of each observable over the last `tail_fraction` of the grid.
pub fn steady_state_estimate(
    traj: &Trajectory,
    specs: &[ObservableSpec],
    tail_fraction: f64,
) -> Result<Vec<f64>> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidGrid(format!(
            "tail fraction {tail_fraction} outside (0, 1]"
        )));
    }
    let len = traj.states.len();
    let tail = ((len as f64 * tail_fraction).ceil() as usize).clamp(1, len);
    specs
        .iter()
        .map(|spec| {
            let series = observable_series(traj, spec)?;
            Ok(series[len - tail..].iter().sum::<f64>() / tail as f64)
        })
        .collect()
}

/// Stationary state of a time-independent generator: the null vector of its
/// Liouvillian, normalized to unit trace.
pub fn liouvillian_steady_state(gen: &Generator) -> Result<ComplexMatrix> {
    if !gen.is_time_independent() {
        return Err(Error::TimeDependent);
    }
    let n = gen.dim();
    let mut l = gen.liouvillian(0.0);
    // replace one equation by the trace condition
    for col in 0..n * n {
        l[(0, col)] = ZERO;
    }
    for p in 0..n {
        l[(0, p * n + p)] = ONE;
    }
    let mut rhs = nalgebra::DVector::from_element(n * n, ZERO);
    rhs[0] = ONE;
    let x = l
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("Liouvillian has no unique stationary state".into()))?;
    Ok(hermitize(&ComplexMatrix::from_fn(n, n, |p, q| x[q * n + p])))
}

/// One cell of a validity sweep. Failed cells carry NaN deviations and the
/// error message.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega_ratio: f64,
    pub gamma_ratio: f64,
    pub max_pop_dev: f64,
    pub max_coh_dev: f64,
    pub error: Option<String>,
}

/// Settings shared by every sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Integration span in units of each cell's own `τ`.
    pub periods: f64,
    /// Step override; the model default is used when `None`.
    pub dt: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            periods: 10.0,
            dt: None,
        }
    }
}

/// Rescales every drive to `|Ω| = omega_ratio·|Δ|` (keeping its phase) and
/// every active decay channel to `γ = gamma_ratio·Δ_ref`, where `Δ_ref` is
/// the detuning of the first detuned drive.
pub fn rescale(sys: &DrivenLevelSystem, omega_ratio: f64, gamma_ratio: f64) -> Result<DrivenLevelSystem> {
    let reference = sys
        .drives()
        .iter()
        .find(|d| !d.is_resonant())
        .map(|d| d.detuning.abs())
        .ok_or_else(|| Error::InvalidModel("sweep needs a detuned drive".into()))?;
    let mut out = DrivenLevelSystem::new(sys.dim())?
        .with_labels(sys.labels().to_vec())?
        .with_manifold(sys.manifold().to_vec())?
        .with_frame(sys.frame().to_vec())?
        .with_h0(sys.h0().clone())?;
    for d in sys.drives() {
        let scale = if d.is_resonant() { reference } else { d.detuning.abs() };
        let rabi = d.rabi / d.rabi.norm() * (omega_ratio * scale);
        out = out.with_drive(Drive::new(d.lower, d.upper, rabi, d.detuning))?;
    }
    for d in sys.decays() {
        let rate = if d.rate > 0.0 { gamma_ratio * reference } else { 0.0 };
        out = out.with_decay(DecayChannel::new(d.target, d.source, rate))?;
    }
    Ok(out)
}

fn sweep_cell(
    base: &DrivenLevelSystem,
    omega_ratio: f64,
    gamma_ratio: f64,
    rho0: &DensityMatrix,
    options: SweepOptions,
) -> Result<(f64, f64)> {
    let sys = rescale(base, omega_ratio, gamma_ratio)?;
    let tau = slow_timescale(&sys)?;
    let dt = options.dt.unwrap_or_else(|| default_dt(&sys));
    let grid = TimeGrid::with_max_step(0.0, options.periods * tau, dt)?;
    let exact = propagate(&assemble_exact(&sys), rho0, &grid)?;
    let tcg = propagate(&assemble_tcg(&sys, false)?, rho0, &grid)?;
    let n = sys.dim();
    let mut pop: f64 = 0.0;
    let mut coh: f64 = 0.0;
    for (a, b) in exact.states.iter().zip(&tcg.states) {
        for i in 0..n {
            pop = pop.max((a[(i, i)].re - b[(i, i)].re).abs());
            for j in i + 1..n {
                coh = coh.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
    }
    Ok((pop, coh))
}

/// Exact versus coarse-grained (without jump terms) deviation on every
/// `(Ω/Δ, γ/Δ)` cell, sorted by `(Ω/Δ, γ/Δ)`. Cells run in parallel; a
/// failing cell yields a NaN row instead of aborting the sweep.
pub fn validity_sweep(
    base: &DrivenLevelSystem,
    omega_ratios: &[f64],
    gamma_ratios: &[f64],
    rho0: &DensityMatrix,
    options: SweepOptions,
) -> Vec<SweepRow> {
    let mut cells: Vec<(f64, f64)> = omega_ratios
        .iter()
        .flat_map(|&w| gamma_ratios.iter().map(move |&g| (w, g)))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cells
        .par_iter()
        .map(|&(w, g)| match sweep_cell(base, w, g, rho0, options) {
            Ok((pop, coh)) => SweepRow {
                omega_ratio: w,
                gamma_ratio: g,
                max_pop_dev: pop,
                max_coh_dev: coh,
                error: None,
            },
            Err(e) => SweepRow {
                omega_ratio: w,
                gamma_ratio: g,
                max_pop_dev: f64::NAN,
                max_coh_dev: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::generator::assemble_exact;
    use crate::operator::dyad;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn constant(rho: ComplexMatrix, points: usize) -> Trajectory {
        let grid = TimeGrid::new(0.0, (points - 1) as f64, 1.0).unwrap();
        Trajectory {
            grid,
            states: vec![rho.clone(); points],
            diagnostics: vec![crate::solver::StepDiagnostics::of(&rho); points],
            positivity_warning: None,
        }
    }

    #[test]
    fn observables_on_fixed_states() {
        let traj = constant(dyad(2, 0, 0), 5);
        let s11 = ObservableSpec::new("s11", 0, 0, Part::Re);
        assert!(observable_series(&traj, &s11).unwrap().iter().all(|&v| v == 1.0));

        let plus = DensityMatrix::from_amplitudes(&[c(1.0), c(1.0)]).unwrap();
        let traj = constant(plus.into_inner(), 2);
        let s13 = ObservableSpec::new("s13", 0, 1, Part::Re);
        assert!((observable_series(&traj, &s13).unwrap()[0] - 0.5).abs() < 1e-15);

        let bad = ObservableSpec::new("s15", 0, 4, Part::Re);
        assert!(observable_series(&traj, &bad).is_err());
    }

    #[test]
    fn coherence_reads_the_transposed_entry() {
        let rho = ComplexMatrix::from_row_slice(2, 2, &[c(0.5), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.5)]);
        let spec = ObservableSpec::new("s12", 0, 1, Part::Im);
        assert_eq!(spec.evaluate(&rho), -0.2);
    }

    #[test]
    fn compare_identical_is_zero() {
        let traj = constant(dyad(2, 1, 1), 4);
        let specs = [ObservableSpec::new("s22", 1, 1, Part::Re)];
        let report = compare(&traj, &traj, &specs, None).unwrap();
        assert_eq!(report.max_abs(), 0.0);
        assert_eq!(report.deviations[0].rms, 0.0);
        assert!(compare(&traj, &constant(dyad(2, 1, 1), 5), &specs, None).is_err());
        assert!(compare(&traj, &traj, &specs, Some((1.0, 9.0))).is_err());
    }

    #[test]
    fn compare_window_and_metrics() {
        let mut a = constant(dyad(2, 0, 0), 5);
        a.states[1] = dyad(2, 0, 0) * c(0.5);
        let b = constant(dyad(2, 0, 0), 5);
        let specs = [ObservableSpec::new("s11", 0, 0, Part::Re)];
        let full = compare(&a, &b, &specs, None).unwrap();
        assert_eq!(full.deviations[0].max_abs, 0.5);
        assert!((full.deviations[0].rms - (0.25f64 / 5.0).sqrt()).abs() < 1e-15);
        assert_eq!(full.deviations[0].final_abs, 0.0);
        let late = compare(&a, &b, &specs, Some((2.0, 4.0))).unwrap();
        assert_eq!(late.deviations[0].max_abs, 0.0);
    }

    #[test]
    fn steady_state_of_constant() {
        let traj = constant(dyad(2, 1, 1), 10);
        let specs = [ObservableSpec::new("s22", 1, 1, Part::Re)];
        assert_eq!(steady_state_estimate(&traj, &specs, 0.3).unwrap(), vec![1.0]);
        assert!(steady_state_estimate(&traj, &specs, 0.0).is_err());
    }

    #[test]
    fn null_vector_of_pure_decay() {
        let sys = DrivenLevelSystem::new(2)
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, 0.3))
            .unwrap();
        let rho = liouvillian_steady_state(&assemble_exact(&sys)).unwrap();
        assert!((rho[(0, 0)] - c(1.0)).norm() < 1e-14);
        assert!(rho[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn empty_sweep() {
        let sys = DrivenLevelSystem::new(2)
            .unwrap()
            .with_drive(Drive::new(0, 1, c(0.1), 1.0))
            .unwrap();
        let rho = DensityMatrix::basis(2, 0).unwrap();
        assert!(validity_sweep(&sys, &[], &[0.1], &rho, SweepOptions::default()).is_empty());
    }

    #[test]
    fn failed_cell_becomes_nan_row() {
        let sys = DrivenLevelSystem::new(2).unwrap();
        let rho = DensityMatrix::basis(2, 0).unwrap();
        let rows = validity_sweep(&sys, &[0.1], &[0.1], &rho, SweepOptions::default());
        assert_eq!(rows.len(), 1);
        assert!(rows[0].max_pop_dev.is_nan());
        assert!(rows[0].error.is_some());
    }

    #[test]
    fn rescale_keeps_phase_and_sets_rates() {
        let sys = DrivenLevelSystem::new(2)
            .unwrap()
            .with_drive(Drive::new(0, 1, Complex64::new(0.0, 0.1), 2.0))
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, 0.1))
            .unwrap();
        let r = rescale(&sys, 0.3, 0.5).unwrap();
        assert!((r.drives()[0].rabi - Complex64::new(0.0, 0.6)).norm() < 1e-15);
        assert!((r.decays()[0].rate - 1.0).abs() < 1e-15);
    }
}
