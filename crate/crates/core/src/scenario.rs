//! Ready-made models: a detuned two-level atom, a three-level Raman system
//! and a four-level double-Λ system (from the ground or excited manifold).

use num_complex::Complex64;

use crate::analysis::{ObservableSpec, Part};
use crate::error::{Error, Result};
use crate::model::{slow_timescale, DecayChannel, Drive, DrivenLevelSystem, Manifold};
use crate::operator::DensityMatrix;
use crate::solver::{default_dt, TimeGrid};

pub const PRESET_NAMES: [&str; 4] = ["twolevel", "raman3", "fourlevel", "fourlevel_excited"];

/// A model together with its frame, initial state, run length and the
/// observables worth reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub system: DrivenLevelSystem,
    /// Unnormalized amplitudes, one per level.
    pub initial: Vec<Complex64>,
    /// Run length in units of `τ`.
    pub periods: f64,
    pub observables: Vec<ObservableSpec>,
}

impl Scenario {
    pub fn initial_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_amplitudes(&self.initial)
    }

    pub fn tau(&self) -> Result<f64> {
        slow_timescale(&self.system)
    }

    /// Half of [`default_dt`]. At the model default the RK4 error on a
    /// pure initial state already pushes the smallest eigenvalue of
    /// `raman3` to about −4e−9; halving keeps every exact preset run above
    /// −1e−9.
    pub fn dt(&self) -> f64 {
        default_dt(&self.system) / 2.0
    }

    /// `[0, periods·τ]` at [`Scenario::dt`] or finer.
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::with_max_step(0.0, self.periods * self.tau()?, self.dt())
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sigma(sys: &DrivenLevelSystem, i: u32, j: u32, parts: &[Part]) -> Vec<ObservableSpec> {
    let (a, b) = (
        sys.level_index(i).expect("preset label"),
        sys.level_index(j).expect("preset label"),
    );
    parts
        .iter()
        .map(|&p| ObservableSpec::new(format!("s{i}{j}"), a, b, p))
        .collect()
}

fn two_level() -> Result<Scenario> {
    let system = DrivenLevelSystem::new(2)?
        .with_labels(vec![1, 3])?
        .with_manifold(vec![Manifold::Lower, Manifold::Upper])?
        .with_drive(Drive::new(0, 1, re(0.1), 1.0))?
        .with_decay(DecayChannel::new(0, 1, 0.1))?
        .with_frame(vec![0.0, 1.0])?;
    let observables = [
        sigma(&system, 1, 1, &[Part::Re]),
        sigma(&system, 3, 3, &[Part::Re]),
        sigma(&system, 1, 3, &[Part::Re, Part::Im, Part::Abs]),
    ]
    .concat();
    Ok(Scenario {
        name: "twolevel".into(),
        system,
        initial: vec![re(1.0), re(1.0)],
        periods: 10.0,
        observables,
    })
}

fn raman() -> Result<Scenario> {
    let system = DrivenLevelSystem::new(3)?
        .with_manifold(vec![Manifold::Lower, Manifold::Lower, Manifold::Upper])?
        .with_drive(Drive::new(0, 2, re(0.1), 1.0))?
        .with_drive(Drive::new(1, 2, re(0.1), 1.0))?
        .with_decay(DecayChannel::new(0, 2, 0.1))?
        .with_decay(DecayChannel::new(1, 2, 0.1))?
        .with_frame(vec![0.0, 0.0, 1.0])?;
    let observables = [
        sigma(&system, 1, 1, &[Part::Re]),
        sigma(&system, 2, 2, &[Part::Re]),
        sigma(&system, 3, 3, &[Part::Re]),
        sigma(&system, 1, 2, &[Part::Re, Part::Im]),
        sigma(&system, 1, 3, &[Part::Re, Part::Im]),
        sigma(&system, 2, 3, &[Part::Re, Part::Im]),
    ]
    .concat();
    Ok(Scenario {
        name: "raman3".into(),
        system,
        initial: vec![re(1.0), re(1.0), re(0.0)],
        periods: 10.0,
        observables,
    })
}

fn four_level(excited: bool) -> Result<Scenario> {
    use Manifold::{Lower, Upper};
    let system = DrivenLevelSystem::new(4)?
        .with_manifold(vec![Lower, Lower, Upper, Upper])?
        .with_drive(Drive::new(0, 2, re(0.1), 1.0))?
        .with_drive(Drive::new(1, 2, re(0.1), 0.9))?
        .with_drive(Drive::new(0, 3, re(0.1), 1.2))?
        .with_drive(Drive::new(1, 3, re(0.1), 1.1))?
        .with_decay(DecayChannel::new(0, 2, 0.1))?
        .with_decay(DecayChannel::new(1, 2, 0.1))?
        .with_decay(DecayChannel::new(0, 3, 0.1))?
        .with_decay(DecayChannel::new(1, 3, 0.1))?
        .with_frame(vec![0.0, 0.1, 1.0, 1.2])?;
    let observables = [
        sigma(&system, 1, 1, &[Part::Re]),
        sigma(&system, 2, 2, &[Part::Re]),
        sigma(&system, 3, 3, &[Part::Re]),
        sigma(&system, 4, 4, &[Part::Re]),
        sigma(&system, 1, 2, &[Part::Re, Part::Im]),
        sigma(&system, 3, 4, &[Part::Re, Part::Im]),
    ]
    .concat();
    let initial = if excited {
        vec![re(0.0), re(0.0), re(1.0), re(1.0)]
    } else {
        vec![re(1.0), re(1.0), re(0.0), re(0.0)]
    };
    Ok(Scenario {
        name: if excited { "fourlevel_excited" } else { "fourlevel" }.into(),
        system,
        initial,
        periods: 10.0,
        observables,
    })
}

pub fn preset(name: &str) -> Result<Scenario> {
    match name {
        "twolevel" => two_level(),
        "raman3" => raman(),
        "fourlevel" => four_level(false),
        "fourlevel_excited" => four_level(true),
        other => Err(Error::Config(format!(
            "unknown preset {other:?}; expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}
