//! Fixed-step fourth-order Runge–Kutta propagation.
//!
//! The propagated state is never renormalized or re-hermitized; drift shows
//! up in the per-step diagnostics instead.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::generator::{Generator, Scratch};
use crate::model::DrivenLevelSystem;
use crate::operator::{hermiticity_defect, max_abs, min_eigenvalue, trace_defect, ComplexMatrix, DensityMatrix};
use crate::tolerance;

/// Uniform grid `t0, t0 + dt, …, t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    /// Requires `t1 > t0`, `dt > 0` and `dt` dividing `t1 − t0` to one part
    /// in 10⁹.
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidGrid("non-finite grid parameter".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("dt = {dt} must be positive")));
        }
        let span = t1 - t0;
        let steps = (span / dt).round();
        if steps < 1.0 || (steps * dt - span).abs() > tolerance::GRID_DIVISIBILITY * span {
            return Err(Error::InvalidGrid(format!(
                "dt = {dt} does not divide the span {span}"
            )));
        }
        Ok(TimeGrid {
            t0,
            t1,
            dt,
            steps: steps as usize,
        })
    }

    /// The coarsest uniform grid on `[t0, t1]` whose step does not exceed
    /// `max_dt`.
    pub fn with_max_step(t0: f64, t1: f64, max_dt: f64) -> Result<Self> {
        if max_dt.is_nan() || max_dt <= 0.0 || t1.is_nan() || t0.is_nan() || t1 <= t0 {
            return Err(Error::InvalidGrid(format!(
                "need t1 > t0 and a positive step, got [{t0}, {t1}] with {max_dt}"
            )));
        }
        let steps = ((t1 - t0) / max_dt * (1.0 - 1e-12)).ceil().max(1.0);
        Self::new(t0, t1, (t1 - t0) / steps)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of grid points, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.time(k))
    }
}

/// Defects of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub trace_defect: f64,
    pub hermiticity_defect: f64,
    /// Smallest eigenvalue of the hermitized state; NaN if the state was too
    /// far from Hermitian to diagonalize.
    pub min_eigenvalue: f64,
}

impl StepDiagnostics {
    pub fn of(rho: &ComplexMatrix) -> Self {
        StepDiagnostics {
            trace_defect: trace_defect(rho),
            hermiticity_defect: hermiticity_defect(rho),
            min_eigenvalue: min_eigenvalue(rho).unwrap_or(f64::NAN),
        }
    }
}

/// Record of a state leaving the positive cone by more than
/// [`tolerance::NEGATIVITY_WARNING`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityWarning {
    pub first_step: usize,
    pub first_time: f64,
    pub worst_eigenvalue: f64,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<ComplexMatrix>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub positivity_warning: Option<PositivityWarning>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.states[0].nrows()
    }

    pub fn max_trace_defect(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.trace_defect).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.hermiticity_defect)
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Stage buffers for repeated RK4 steps.
struct Stepper {
    k: [ComplexMatrix; 4],
    stage: ComplexMatrix,
    scratch: Scratch,
}

impl Stepper {
    fn new(dim: usize) -> Self {
        let z = ComplexMatrix::zeros(dim, dim);
        Stepper {
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            stage: z,
            scratch: Scratch::new(dim),
        }
    }

    fn step(&mut self, gen: &Generator, rho: &ComplexMatrix, t: f64, dt: f64) -> ComplexMatrix {
        let Stepper { k, stage, scratch } = self;
        let [k1, k2, k3, k4] = k;
        gen.apply_into(t, rho, k1, scratch);
        stage.copy_from(rho);
        add_scaled(stage, 0.5 * dt, k1);
        gen.apply_into(t + 0.5 * dt, stage, k2, scratch);
        stage.copy_from(rho);
        add_scaled(stage, 0.5 * dt, k2);
        gen.apply_into(t + 0.5 * dt, stage, k3, scratch);
        stage.copy_from(rho);
        add_scaled(stage, dt, k3);
        gen.apply_into(t + dt, stage, k4, scratch);
        let mut next = rho.clone();
        let sixth = dt / 6.0;
        add_scaled(&mut next, sixth, k1);
        add_scaled(&mut next, 2.0 * sixth, k2);
        add_scaled(&mut next, 2.0 * sixth, k3);
        add_scaled(&mut next, sixth, k4);
        next
    }
}

/// `dst += a·src`.
fn add_scaled(dst: &mut ComplexMatrix, a: f64, src: &ComplexMatrix) {
    dst.zip_apply(src, |d, s| *d += s * a);
}

fn check_dims(gen: &Generator, rho: &ComplexMatrix) -> Result<()> {
    if rho.nrows() != gen.dim() || rho.ncols() != gen.dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.dim(),
            found: rho.nrows(),
        });
    }
    Ok(())
}

fn finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// One classical RK4 step of `dρ/dt = gen(t, ρ)` from `t` to `t + dt`.
pub fn rk4_step(gen: &Generator, rho: &ComplexMatrix, t: f64, dt: f64) -> Result<ComplexMatrix> {
    check_dims(gen, rho)?;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidGrid(format!("dt = {dt} must be positive")));
    }
    let next = Stepper::new(gen.dim()).step(gen, rho, t, dt);
    if !finite(&next) {
        return Err(Error::IntegrationBlowup { step: 0, time: t });
    }
    Ok(next)
}

/// Integrates from `rho0` over `grid`, recording every state and its
/// diagnostics.
pub fn propagate(gen: &Generator, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<Trajectory> {
    check_dims(gen, rho0.matrix())?;
    let mut stepper = Stepper::new(gen.dim());
    let mut states = Vec::with_capacity(grid.len());
    let mut diagnostics = Vec::with_capacity(grid.len());
    let mut warning: Option<PositivityWarning> = None;
    let mut rho = rho0.matrix().clone();
    for k in 0..grid.len() {
        if k > 0 {
            let t = grid.time(k - 1);
            rho = stepper.step(gen, &rho, t, grid.time(k) - t);
            if !finite(&rho) {
                return Err(Error::IntegrationBlowup { step: k, time: grid.time(k) });
            }
        }
        let d = StepDiagnostics::of(&rho);
        if d.min_eigenvalue < tolerance::NEGATIVITY_WARNING {
            let w = warning.get_or_insert(PositivityWarning {
                first_step: k,
                first_time: grid.time(k),
                worst_eigenvalue: d.min_eigenvalue,
                count: 0,
            });
            w.count += 1;
            w.worst_eigenvalue = w.worst_eigenvalue.min(d.min_eigenvalue);
        }
        diagnostics.push(d);
        states.push(rho.clone());
    }
    Ok(Trajectory {
        grid: *grid,
        states,
        diagnostics,
        positivity_warning: warning,
    })
}

/// Step giving at least [`tolerance::STEPS_PER_PERIOD`] steps per fastest
/// oscillation or decay time of the model:
/// `min(2π/(40 max|Δ|), 1/(40 max γ), 2π/(40 ‖H₀‖_max + ε))`.
///
/// Detunings include both physical values and frame-shifted drive
/// frequencies; `H₀` is taken in the system's frame.
pub fn default_dt(sys: &DrivenLevelSystem) -> f64 {
    let n = tolerance::STEPS_PER_PERIOD;
    let mut dt = f64::INFINITY;
    let fastest = sys
        .drives()
        .iter()
        .flat_map(|d| [d.detuning.abs(), sys.drive_frequency(d).abs()])
        .fold(0.0, f64::max);
    let components = sys.frame_hamiltonian_components();
    let fastest = components
        .iter()
        .map(|(f, _)| f.abs())
        .fold(fastest, f64::max);
    if fastest > 0.0 {
        dt = dt.min(TAU / (n * fastest));
    }
    let gamma = sys.decays().iter().map(|d| d.rate).fold(0.0, f64::max);
    if gamma > 0.0 {
        dt = dt.min(1.0 / (n * gamma));
    }
    let h0 = components
        .iter()
        .map(|(_, m)| max_abs(m))
        .fold(0.0, f64::max);
    dt.min(TAU / (n * h0 + tolerance::DT_GUARD))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::generator::assemble_exact;
    use crate::model::{DecayChannel, Drive};
    use crate::operator::dyad;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn decay_only(gamma: f64) -> DrivenLevelSystem {
        DrivenLevelSystem::new(2)
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, gamma))
            .unwrap()
    }

    #[test]
    fn grid_validation() {
        let g = TimeGrid::new(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.time(4), 1.0);
        assert!(TimeGrid::new(1.0, 0.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.3).is_err());
        let g = TimeGrid::with_max_step(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.steps(), 4);
        let g = TimeGrid::with_max_step(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g.steps(), 4);
    }

    #[test]
    fn zero_generator_step_is_identity() {
        let gen = assemble_exact(&DrivenLevelSystem::new(2).unwrap());
        let rho = DensityMatrix::from_amplitudes(&[c(1.0), Complex64::new(0.3, 0.4)]).unwrap();
        let next = rk4_step(&gen, rho.matrix(), 0.0, 0.1).unwrap();
        assert_eq!(&next, rho.matrix());
        let traj = propagate(&gen, &rho, &TimeGrid::new(0.0, 1.0, 0.1).unwrap()).unwrap();
        assert!(traj.states.iter().all(|s| s == rho.matrix()));
        assert_eq!(traj.states.len(), traj.grid.len());
    }

    #[test]
    fn decay_step_matches_exponential() {
        let gen = assemble_exact(&decay_only(0.1));
        let next = rk4_step(&gen, &dyad(2, 1, 1), 0.0, 0.01).unwrap();
        assert!((next[(1, 1)].re - (-0.1f64 * 0.01).exp()).abs() < 1e-11);
    }

    #[test]
    fn rotation_step_matches_phase() {
        let sys = DrivenLevelSystem::new(2)
            .unwrap()
            .with_h0(dyad(2, 1, 1) * c(1.0))
            .unwrap();
        let gen = assemble_exact(&sys);
        let rho = DensityMatrix::from_amplitudes(&[c(1.0), c(1.0)]).unwrap();
        let dt = 0.01;
        let next = rk4_step(&gen, rho.matrix(), 0.0, dt).unwrap();
        // ρ13 picks up e^{+iΔt} since ρ ↦ e^{−iHt}ρe^{iHt}
        let expected = Complex64::cis(dt) * 0.5;
        assert!((next[(0, 1)] - expected).norm() < 1e-11);
    }

    #[test]
    fn blowup_is_reported() {
        let sys = DrivenLevelSystem::new(2)
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, 1e300))
            .unwrap();
        let gen = assemble_exact(&sys);
        let rho = DensityMatrix::basis(2, 1).unwrap();
        let err = propagate(&gen, &rho, &TimeGrid::new(0.0, 10.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::IntegrationBlowup { .. }));
    }

    #[test]
    fn default_step_examples() {
        let two = DrivenLevelSystem::new(2)
            .unwrap()
            .with_drive(Drive::new(0, 1, c(0.1), 1.0))
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, 0.1))
            .unwrap();
        assert!((default_dt(&two) - TAU / 40.0).abs() < 1e-15);
        let stiff = DrivenLevelSystem::new(2)
            .unwrap()
            .with_drive(Drive::new(0, 1, c(0.1), 1.0))
            .unwrap()
            .with_decay(DecayChannel::new(0, 1, 10.0))
            .unwrap();
        assert!((default_dt(&stiff) - 1.0 / 400.0).abs() < 1e-15);
        let idle = DrivenLevelSystem::new(2).unwrap();
        assert!((default_dt(&idle) - TAU / tolerance::DT_GUARD).abs() < 1e-9);
    }
}
