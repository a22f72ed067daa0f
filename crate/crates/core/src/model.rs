//! Declarative description of a driven, dissipative multilevel atom and the
//! quantities derived from it: Lindblad operators, the decay matrix `K`,
//! decaying-frame rates and harmonic terms.
//!
//! Levels carry integer labels (by default `1..=dim`) so that models can use
//! the conventional names of atomic levels, e.g. a two-level atom made of
//! `|1⟩` and `|3⟩`. Internally every operator is indexed by position.
//!
//! # Frames
//!
//! Drives are written in the interaction picture,
//! `H(t) = H₀ + Σ (Ω/2)|i⟩⟨j| e^{iΔt} + h.c.`. A diagonal rotating frame with
//! per-level phases `p` maps `ρ → e^{iPt} ρ e^{-iPt}`. Under that map
//! `|i⟩⟨j|` picks up `e^{i(p_i − p_j)t}`, the frame adds `−P` to the
//! Hamiltonian, and dyadic Lindblad operators are unaffected. The system
//! keeps the physical detuning of every drive and records the frame
//! separately, because the coarse-grained coefficients depend on the former
//! while the time dependence of every term follows the latter.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{
    check_finite, check_square, dyad, hermiticity_defect, is_zero, max_abs, ComplexMatrix, ZERO,
};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Lower,
    Upper,
}

/// Harmonic drive `(Ω/2)|lower⟩⟨upper| e^{iΔt} + h.c.` between two levels
/// (zero-based positions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub lower: usize,
    pub upper: usize,
    pub rabi: Complex64,
    pub detuning: f64,
}

impl Drive {
    /// Builds a drive, storing it with the smaller index first. A drive given
    /// upper-first is the same physical term with `Ω → Ω*` and `Δ → −Δ`.
    pub fn new(i: usize, j: usize, rabi: Complex64, detuning: f64) -> Self {
        if i <= j {
            Drive {
                lower: i,
                upper: j,
                rabi,
                detuning,
            }
        } else {
            Drive {
                lower: j,
                upper: i,
                rabi: rabi.conj(),
                detuning: -detuning,
            }
        }
    }

    /// `h = (Ω/2)|lower⟩⟨upper|`.
    pub fn operator(&self, dim: usize) -> ComplexMatrix {
        dyad(dim, self.lower, self.upper) * (self.rabi * 0.5)
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning == 0.0
    }
}

/// Incoherent decay `source → target` at rate `γ`, with Lindblad operator
/// `√γ |target⟩⟨source|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayChannel {
    pub target: usize,
    pub source: usize,
    pub rate: f64,
}

impl DecayChannel {
    pub fn new(target: usize, source: usize, rate: f64) -> Self {
        DecayChannel {
            target,
            source,
            rate,
        }
    }

    pub fn operator(&self, dim: usize) -> ComplexMatrix {
        dyad(dim, self.target, self.source) * Complex64::new(self.rate.sqrt(), 0.0)
    }
}

/// A driven, dissipative multilevel system.
///
/// All frequencies and rates are angular frequencies in the same (arbitrary)
/// unit. Values are immutable once built; the `with_*` methods consume and
/// return a validated copy.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivenLevelSystem {
    dim: usize,
    h0: ComplexMatrix,
    drives: Vec<Drive>,
    decays: Vec<DecayChannel>,
    manifold: Vec<Manifold>,
    labels: Vec<u32>,
    frame: Vec<f64>,
}

impl DrivenLevelSystem {
    /// An undriven, non-decaying system with `H₀ = 0`, levels labelled
    /// `1..=dim` and every level in the lower manifold.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be at least 1".into()));
        }
        Ok(DrivenLevelSystem {
            dim,
            h0: ComplexMatrix::zeros(dim, dim),
            drives: Vec::new(),
            decays: Vec::new(),
            manifold: vec![Manifold::Lower; dim],
            labels: (1..=dim as u32).collect(),
            frame: vec![0.0; dim],
        })
    }

    pub fn with_h0(mut self, h0: ComplexMatrix) -> Result<Self> {
        check_square(&h0)?;
        check_finite(&h0)?;
        if h0.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: h0.nrows(),
            });
        }
        let defect = hermiticity_defect(&h0);
        if defect > tolerance::HERMITIAN {
            return Err(Error::NotHermitian { defect });
        }
        self.h0 = h0;
        Ok(self)
    }

    pub fn with_drive(mut self, drive: Drive) -> Result<Self> {
        self.check_index(drive.lower)?;
        self.check_index(drive.upper)?;
        if drive.lower == drive.upper {
            return Err(Error::InvalidModel(format!(
                "drive couples level {} to itself",
                self.labels[drive.lower]
            )));
        }
        if !(drive.rabi.re.is_finite() && drive.rabi.im.is_finite() && drive.detuning.is_finite())
        {
            return Err(Error::NonFinite);
        }
        if drive.rabi == ZERO {
            return Err(Error::InvalidModel("drive with zero Rabi frequency".into()));
        }
        self.drives.push(Drive::new(
            drive.lower,
            drive.upper,
            drive.rabi,
            drive.detuning,
        ));
        Ok(self)
    }

    pub fn with_decay(mut self, decay: DecayChannel) -> Result<Self> {
        self.check_index(decay.target)?;
        self.check_index(decay.source)?;
        if decay.target == decay.source {
            return Err(Error::InvalidModel(format!(
                "decay channel from level {} into itself",
                self.labels[decay.source]
            )));
        }
        if !decay.rate.is_finite() || decay.rate < 0.0 {
            return Err(Error::InvalidModel(format!(
                "decay rate must be finite and non-negative, got {}",
                decay.rate
            )));
        }
        self.decays.push(decay);
        Ok(self)
    }

    pub fn with_manifold(mut self, manifold: Vec<Manifold>) -> Result<Self> {
        if manifold.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: manifold.len(),
            });
        }
        self.manifold = manifold;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: labels.len(),
            });
        }
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::InvalidModel("level labels must be distinct".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Replaces the frame phases outright. See [`rotating_frame`] for
    /// composing a further frame on top of the current one.
    pub fn with_frame(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: phases.len(),
            });
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.frame = phases;
        Ok(self)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dim {
            Err(Error::IndexOutOfRange {
                index,
                dim: self.dim,
            })
        } else {
            Ok(())
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Time-independent Hamiltonian in the interaction picture (before any
    /// frame is applied).
    pub fn h0(&self) -> &ComplexMatrix {
        &self.h0
    }

    pub fn drives(&self) -> &[Drive] {
        &self.drives
    }

    pub fn decays(&self) -> &[DecayChannel] {
        &self.decays
    }

    pub fn manifold(&self) -> &[Manifold] {
        &self.manifold
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn frame(&self) -> &[f64] {
        &self.frame
    }

    /// Position of the level carrying `label`.
    pub fn level_index(&self, label: u32) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::InvalidModel(format!("no level labelled {label}")))
    }

    /// Oscillation frequency of a drive in the current frame,
    /// `Δ − (p_upper − p_lower)`.
    pub fn drive_frequency(&self, drive: &Drive) -> f64 {
        let (pu, pl) = (self.frame[drive.upper], self.frame[drive.lower]);
        snap(drive.detuning - (pu - pl), drive.detuning.abs() + pu.abs() + pl.abs())
    }

    /// `H₀` expressed in the current frame as `Σ_ν H_ν e^{iνt}`, including
    /// the `−P` contribution of the frame itself. Components are ordered by
    /// frequency; the static one comes first when present.
    pub fn frame_hamiltonian_components(&self) -> Vec<(f64, ComplexMatrix)> {
        let n = self.dim;
        let mut groups: Vec<(f64, ComplexMatrix)> = Vec::new();
        let mut push = |nu: f64, i: usize, j: usize, value: Complex64| {
            // collapse -0.0 so that grouping is by value
            let nu = if nu == 0.0 { 0.0 } else { nu };
            match groups.iter_mut().find(|(f, _)| *f == nu) {
                Some((_, m)) => m[(i, j)] += value,
                None => {
                    let mut m = ComplexMatrix::zeros(n, n);
                    m[(i, j)] = value;
                    groups.push((nu, m));
                }
            }
        };
        for i in 0..n {
            let value = self.h0[(i, i)] - Complex64::new(self.frame[i], 0.0);
            if value != ZERO {
                push(0.0, i, i, value);
            }
            for j in 0..n {
                if i != j && self.h0[(i, j)] != ZERO {
                    push(self.frame[i] - self.frame[j], i, j, self.h0[(i, j)]);
                }
            }
        }
        groups.sort_by(|a, b| {
            a.0.abs()
                .total_cmp(&b.0.abs())
                .then(a.0.total_cmp(&b.0))
        });
        groups
    }

    /// Largest `|Ω|/|Δ|` over detuned drives and largest `γ/|Δ|` over decay
    /// channels, with `|Δ|` the smallest nonzero detuning. Reported alongside
    /// results as a measure of how perturbative the model is.
    pub fn perturbation_ratios(&self) -> (f64, f64) {
        let detuned: Vec<&Drive> = self.drives.iter().filter(|d| !d.is_resonant()).collect();
        let min_detuning = detuned
            .iter()
            .map(|d| d.detuning.abs())
            .fold(f64::INFINITY, f64::min);
        let rabi = detuned
            .iter()
            .map(|d| d.rabi.norm() / d.detuning.abs())
            .fold(0.0, f64::max);
        let gamma = self.decays.iter().map(|d| d.rate).fold(0.0, f64::max);
        let gamma_ratio = if min_detuning.is_finite() {
            gamma / min_detuning
        } else {
            f64::NAN
        };
        (rabi, gamma_ratio)
    }
}

/// One `√γ |target⟩⟨source|` per channel with positive rate.
pub fn build_lindblads(sys: &DrivenLevelSystem) -> Vec<ComplexMatrix> {
    active_decays(sys)
        .map(|d| d.operator(sys.dim()))
        .collect()
}

pub(crate) fn active_decays(sys: &DrivenLevelSystem) -> impl Iterator<Item = &DecayChannel> {
    sys.decays().iter().filter(|d| d.rate > 0.0)
}

/// `K = ½ Σ L†L`.
pub fn build_k(dim: usize, lindblads: &[ComplexMatrix]) -> ComplexMatrix {
    let mut k = ComplexMatrix::zeros(dim, dim);
    for l in lindblads {
        k += l.adjoint() * l;
    }
    k * Complex64::new(0.5, 0.0)
}

/// Finds the real `c` with `[K, X] = −c·factor·X`.
///
/// With `factor = ½` and `X` a Lindblad operator this is its relaxation
/// rate `γ_K`; with `factor = 1` and `X` a drive term it is the decay shift
/// `κ`. Any `X` whose commutator with `K` is not a real multiple of itself is
/// rejected with [`Error::ProportionalityViolation`].
pub fn extract_eigenrate(k: &ComplexMatrix, x: &ComplexMatrix, factor: f64) -> Result<f64> {
    extract_labelled(k, x, factor, "operator")
}

pub(crate) fn extract_labelled(
    k: &ComplexMatrix,
    x: &ComplexMatrix,
    factor: f64,
    label: &str,
) -> Result<f64> {
    let n = check_square(k)?;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.nrows(),
        });
    }
    let scale = max_abs(x);
    if scale == 0.0 {
        return Err(Error::InvalidModel(format!("{label} is zero")));
    }
    let c = k * x - x * k;
    // least-squares fit of C ≈ −s·X, s = c·factor
    let overlap: Complex64 = x.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
    let norm: f64 = x.iter().map(|a| a.norm_sqr()).sum();
    let s = -overlap / norm;
    let rate = s / factor;
    let residual = max_abs(&(c + x * s)) / scale;
    if residual > tolerance::PROPORTIONALITY || rate.im.abs() > tolerance::RATE_IMAGINARY {
        return Err(Error::ProportionalityViolation {
            operator: label.to_string(),
            residual,
            imaginary: rate.im,
        });
    }
    Ok(rate.re)
}

/// `x`, or exactly 0 when it is rounding noise relative to `scale`, so that
/// a frame matched to the drive detunings yields a static generator.
pub(crate) fn snap(x: f64, scale: f64) -> f64 {
    if x.abs() <= tolerance::FREQUENCY_SNAP * scale {
        0.0
    } else {
        x
    }
}

/// Frequency difference `a − b` with rounding noise removed.
pub(crate) fn beat(a: f64, b: f64) -> f64 {
    snap(a - b, a.abs() + b.abs())
}

/// A drive term in the decaying frame: `h e^{iω̃t}` with complex frequency
/// `ω̃ = Δ + iκ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTerm {
    pub h: ComplexMatrix,
    /// Physical detuning `Δ`.
    pub delta: f64,
    /// Decay shift `κ` from `e^{Kt} h e^{−Kt} = e^{−κt} h`.
    pub kappa: f64,
    pub omega_tilde: Complex64,
    /// Oscillation frequency of `h` in the system's frame. Equal to `delta`
    /// in the interaction picture.
    pub frequency: f64,
    pub lower: usize,
    pub upper: usize,
}

/// One harmonic term per drive, each with its decaying-frame shift `κ`.
///
/// Every drive must be detuned; fold resonant drives into `H₀` first.
pub fn build_harmonic_terms(sys: &DrivenLevelSystem) -> Result<Vec<HarmonicTerm>> {
    let k = build_k(sys.dim(), &build_lindblads(sys));
    sys.drives()
        .iter()
        .map(|d| {
            if d.is_resonant() {
                return Err(Error::InvalidModel(format!(
                    "resonant drive {}-{} must be folded into H0",
                    sys.labels()[d.lower],
                    sys.labels()[d.upper]
                )));
            }
            let h = d.operator(sys.dim());
            let label = format!("h{}{}", sys.labels()[d.lower], sys.labels()[d.upper]);
            let kappa = extract_labelled(&k, &h, 1.0, &label)?;
            Ok(HarmonicTerm {
                h,
                delta: d.detuning,
                kappa,
                omega_tilde: Complex64::new(d.detuning, kappa),
                frequency: sys.drive_frequency(d),
                lower: d.lower,
                upper: d.upper,
            })
        })
        .collect()
}

/// Moves every resonant drive into `H₀` as `(Ω/2)|i⟩⟨j| + h.c.`.
pub fn fold_resonant_drives(sys: &DrivenLevelSystem) -> DrivenLevelSystem {
    let mut out = sys.clone();
    let (resonant, detuned): (Vec<Drive>, Vec<Drive>) =
        sys.drives().iter().partition(|d| d.is_resonant());
    for d in resonant {
        let h = d.operator(sys.dim());
        out.h0 += &h + h.adjoint();
    }
    out.drives = detuned;
    out
}

/// Composes a diagonal rotating frame with per-level `phases` on top of the
/// system's current frame.
///
/// The returned system reports `H₀ − diag(phases)` through
/// [`DrivenLevelSystem::frame_hamiltonian_components`] and drive frequencies
/// `Δ − (p_upper − p_lower)`; Lindblad operators are unchanged.
pub fn rotating_frame(sys: &DrivenLevelSystem, phases: &[f64]) -> Result<DrivenLevelSystem> {
    if phases.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: phases.len(),
        });
    }
    let composed = sys
        .frame()
        .iter()
        .zip(phases)
        .map(|(a, b)| a + b)
        .collect();
    sys.clone().with_frame(composed)
}

/// Slow time unit `τ = 4|ω̃|²/(|Δ||Ω|²)` of the first detuned drive, the
/// abscissa unit used when reporting coarse-grained dynamics.
pub fn slow_timescale(sys: &DrivenLevelSystem) -> Result<f64> {
    let folded = fold_resonant_drives(sys);
    let terms = build_harmonic_terms(&folded)?;
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidModel("no detuned drive to set the time unit".into()))?;
    let rabi = folded.drives()[0].rabi.norm();
    Ok(4.0 * first.omega_tilde.norm_sqr() / (first.delta.abs() * rabi * rabi))
}

/// Checks that `H₀` is unchanged by the decaying-frame transform, i.e.
/// `[K, H₀] = 0`. Couplings in `H₀` between levels with different decay
/// envelopes break the constant-rate assumption.
pub(crate) fn check_static_hamiltonian(sys: &DrivenLevelSystem, k: &ComplexMatrix) -> Result<()> {
    if is_zero(sys.h0()) {
        return Ok(());
    }
    extract_labelled(k, sys.h0(), 1.0, "H0").map(|_| ())
}
