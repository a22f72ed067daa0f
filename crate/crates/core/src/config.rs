//! TOML model files.
//!
//! ```toml
//! dim = 2
//! manifold = ["lower", "upper"]
//! labels = [1, 3]          # optional, defaults to 1..=dim
//! frame = [0.0, 1.0]       # optional per-level phases
//! h0 = [[0.0, 0.0], ...]   # optional, dim*dim row-major [re, im] pairs
//!
//! [[drive]]
//! lower = 1
//! upper = 3
//! rabi_re = 0.1
//! rabi_im = 0.0
//! detuning = 1.0
//!
//! [[decay]]
//! target = 1
//! source = 3
//! rate = 0.1
//! ```
//!
//! Level references in `[[drive]]` and `[[decay]]` blocks are labels, not
//! positions.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DecayChannel, Drive, DrivenLevelSystem, Manifold};
use crate::operator::{is_zero, ComplexMatrix};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    dim: usize,
    manifold: Vec<Manifold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frame: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h0: Option<Vec<[f64; 2]>>,
    #[serde(default, rename = "drive")]
    drives: Vec<DriveEntry>,
    #[serde(default, rename = "decay")]
    decays: Vec<DecayEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveEntry {
    lower: u32,
    upper: u32,
    rabi_re: f64,
    #[serde(default)]
    rabi_im: f64,
    detuning: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayEntry {
    target: u32,
    source: u32,
    rate: f64,
}

pub fn parse_model(text: &str) -> Result<DrivenLevelSystem> {
    let file: ModelFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut sys = DrivenLevelSystem::new(file.dim)?.with_manifold(file.manifold)?;
    if let Some(labels) = file.labels {
        sys = sys.with_labels(labels)?;
    }
    if let Some(frame) = file.frame {
        sys = sys.with_frame(frame)?;
    }
    if let Some(h0) = file.h0 {
        let n = file.dim;
        if h0.len() != n * n {
            return Err(Error::Config(format!(
                "h0 needs {} entries, found {}",
                n * n,
                h0.len()
            )));
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let [re, im] = h0[i * n + j];
            Complex64::new(re, im)
        });
        sys = sys.with_h0(m)?;
    }
    for d in file.drives {
        let lower = sys.level_index(d.lower)?;
        let upper = sys.level_index(d.upper)?;
        sys = sys.with_drive(Drive::new(
            lower,
            upper,
            Complex64::new(d.rabi_re, d.rabi_im),
            d.detuning,
        ))?;
    }
    for d in file.decays {
        let target = sys.level_index(d.target)?;
        let source = sys.level_index(d.source)?;
        sys = sys.with_decay(DecayChannel::new(target, source, d.rate))?;
    }
    Ok(sys)
}

pub fn read_model(path: &Path) -> Result<DrivenLevelSystem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

/// Serializes a system so that [`parse_model`] rebuilds an equal value.
pub fn write_model(sys: &DrivenLevelSystem) -> String {
    let n = sys.dim();
    let labels = sys.labels();
    let default_labels = labels.iter().enumerate().all(|(i, &l)| l == i as u32 + 1);
    let file = ModelFile {
        dim: n,
        manifold: sys.manifold().to_vec(),
        labels: (!default_labels).then(|| labels.to_vec()),
        frame: sys
            .frame()
            .iter()
            .any(|&p| p != 0.0)
            .then(|| sys.frame().to_vec()),
        h0: (!is_zero(sys.h0())).then(|| {
            let h0 = sys.h0();
            (0..n * n)
                .map(|k| {
                    let z = h0[(k / n, k % n)];
                    [z.re, z.im]
                })
                .collect()
        }),
        drives: sys
            .drives()
            .iter()
            .map(|d| DriveEntry {
                lower: labels[d.lower],
                upper: labels[d.upper],
                rabi_re: d.rabi.re,
                rabi_im: d.rabi.im,
                detuning: d.detuning,
            })
            .collect(),
        decays: sys
            .decays()
            .iter()
            .map(|d| DecayEntry {
                target: labels[d.target],
                source: labels[d.source],
                rate: d.rate,
            })
            .collect(),
    };
    toml::to_string(&file).expect("model file serializes")
}
