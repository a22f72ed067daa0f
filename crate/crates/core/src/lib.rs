//! Time-coarse-grained master equations for driven, dissipative multilevel
//! atoms.
//!
//! A [`DrivenLevelSystem`] describes levels, harmonic drives and decay
//! channels. From it the crate assembles either the exact Lindblad
//! generator or its coarse-grained counterpart, in which fast oscillations
//! are averaged out and decay is carried into complex detunings. Both are
//! explicit term lists ([`Generator`]) that can be printed, inspected,
//! propagated with a fixed-step RK4 integrator and compared.
//!
//! ```
//! use tcg::{assemble_exact, assemble_tcg, compare, propagate, scenario, TimeGrid};
//!
//! let s = scenario::preset("twolevel").unwrap();
//! let tau = s.tau().unwrap();
//! let grid = TimeGrid::with_max_step(0.0, tau, 0.15).unwrap();
//! let rho0 = s.initial_state().unwrap();
//! let exact = propagate(&assemble_exact(&s.system), &rho0, &grid).unwrap();
//! let tcg = propagate(&assemble_tcg(&s.system, true).unwrap(), &rho0, &grid).unwrap();
//! let report = compare(&exact, &tcg, &s.observables[..2], None).unwrap();
//! assert!(report.max_abs() < 0.1);
//! ```

pub mod analysis;
pub mod config;
pub mod error;
pub mod generator;
pub mod model;
pub mod operator;
pub mod scenario;
pub mod solver;
pub mod tolerance;

pub use analysis::{
    compare, liouvillian_steady_state, observable_series, steady_state_estimate, validity_sweep,
    ComparisonReport, ObservableSpec, Part, SweepOptions, SweepRow,
};
pub use error::{Error, Result};
pub use generator::{
    assemble_closed, assemble_dephasing, assemble_exact, assemble_h_eff, assemble_jump,
    assemble_tcg, describe, Generator, GeneratorTerm, Role, TermKind, Variant,
};
pub use model::{
    build_harmonic_terms, build_k, build_lindblads, extract_eigenrate, fold_resonant_drives,
    rotating_frame, slow_timescale, DecayChannel, Drive, DrivenLevelSystem, HarmonicTerm, Manifold,
};
pub use operator::{ComplexMatrix, DensityMatrix};
pub use solver::{default_dt, propagate, rk4_step, TimeGrid, Trajectory};
