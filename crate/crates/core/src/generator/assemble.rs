use num_complex::Complex64;

use super::{fnv1a, Generator, GeneratorTerm, Role, TermKind, Variant};
use crate::config::write_model;
use crate::error::{Error, Result};
use crate::model::{
    active_decays, beat, build_harmonic_terms, build_k, build_lindblads, check_static_hamiltonian,
    extract_labelled, fold_resonant_drives, DrivenLevelSystem, HarmonicTerm,
};
use crate::operator::{ComplexMatrix, I, ONE};

/// One piece `c·e^{iνt}·H` of a time-dependent Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianTerm {
    pub operator: ComplexMatrix,
    pub coefficient: Complex64,
    pub frequency: f64,
    pub role: Role,
}

/// `H_eff(t) = Σ c_k e^{iν_k t} H_k`, Hermitian at every `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub dim: usize,
    pub terms: Vec<HamiltonianTerm>,
}

impl EffectiveHamiltonian {
    pub fn at(&self, t: f64) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim, self.dim);
        for term in &self.terms {
            let phase = if term.frequency == 0.0 {
                ONE
            } else {
                Complex64::cis(term.frequency * t)
            };
            h += &term.operator * (term.coefficient * phase);
        }
        h
    }

    fn into_terms(self) -> impl Iterator<Item = GeneratorTerm> {
        self.terms.into_iter().map(|t| {
            GeneratorTerm::commutator(t.role, t.operator, t.coefficient, t.frequency)
        })
    }
}

/// `1/z`, exact for real `z` so that open and closed routes agree bitwise.
fn recip(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(1.0 / z.re, 0.0)
    } else {
        z.inv()
    }
}

fn model_hash(sys: &DrivenLevelSystem) -> u64 {
    fnv1a(write_model(sys).as_bytes())
}

fn bare_hamiltonian(sys: &DrivenLevelSystem) -> Vec<HamiltonianTerm> {
    sys.frame_hamiltonian_components()
        .into_iter()
        .map(|(frequency, operator)| HamiltonianTerm {
            operator,
            coefficient: ONE,
            frequency,
            role: Role::Hamiltonian,
        })
        .collect()
}

fn dissipation(lindblads: &[ComplexMatrix]) -> impl Iterator<Item = GeneratorTerm> + '_ {
    lindblads
        .iter()
        .map(|l| GeneratorTerm::dissipator(Role::Dissipation, l.clone(), l.adjoint(), ONE, 0.0))
}

/// Exact Lindblad generator `−i[H(t), ρ] + Σ 𝒟_{L,L†}ρ` in the system's
/// frame. Hamiltonian pieces sharing a frequency are merged into a single
/// commutator term.
pub fn assemble_exact(sys: &DrivenLevelSystem) -> Generator {
    let n = sys.dim();
    let mut parts: Vec<(f64, ComplexMatrix)> = sys.frame_hamiltonian_components();
    let mut add = |frequency: f64, m: ComplexMatrix| {
        let frequency = if frequency == 0.0 { 0.0 } else { frequency };
        match parts.iter_mut().find(|(f, _)| *f == frequency) {
            Some((_, acc)) => *acc += m,
            None => parts.push((frequency, m)),
        }
    };
    for d in sys.drives() {
        let h = d.operator(n);
        let f = sys.drive_frequency(d);
        add(-f, h.adjoint());
        add(f, h);
    }
    parts.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()).then(a.0.total_cmp(&b.0)));
    let mut terms: Vec<GeneratorTerm> = parts
        .into_iter()
        .map(|(f, h)| GeneratorTerm::commutator(Role::Hamiltonian, h, ONE, f))
        .collect();
    terms.extend(dissipation(&build_lindblads(sys)));
    Generator::new(n, terms, Variant::Exact, sys.labels().to_vec(), model_hash(sys))
}

/// `H_eff(t) = H₀ + Σ_{m,n} ½(1/ω̃_n + 1/ω̃_m*)(h_m h_n† − h_m† h_n) e^{i(ν_m − ν_n)t}`
/// over all ordered pairs of harmonic terms, with `h0` given as frequency
/// components.
pub fn assemble_h_eff(
    dim: usize,
    terms: &[HarmonicTerm],
    h0: &[(f64, ComplexMatrix)],
) -> EffectiveHamiltonian {
    let mut out: Vec<HamiltonianTerm> = h0
        .iter()
        .map(|(frequency, operator)| HamiltonianTerm {
            operator: operator.clone(),
            coefficient: ONE,
            frequency: *frequency,
            role: Role::Hamiltonian,
        })
        .collect();
    for m in terms {
        for n in terms {
            out.push(HamiltonianTerm {
                operator: &m.h * n.h.adjoint() - m.h.adjoint() * &n.h,
                coefficient: (recip(n.omega_tilde) + recip(m.omega_tilde).conj()) * 0.5,
                frequency: beat(m.frequency, n.frequency),
                role: Role::EffectiveHamiltonian,
            });
        }
    }
    EffectiveHamiltonian { dim, terms: out }
}

/// Dephasing terms: for every ordered pair `(m, n)`,
/// `c 𝒟_{h_m,h_n†}` at `ν_m − ν_n` and `−c 𝒟_{h_m†,h_n}` at `ν_n − ν_m`, with
/// `c = −i(1/ω̃_m − 1/ω̃_n*)`.
pub fn assemble_dephasing(terms: &[HarmonicTerm]) -> Vec<GeneratorTerm> {
    let mut out = Vec::with_capacity(2 * terms.len() * terms.len());
    for m in terms {
        for n in terms {
            let c = -I * (recip(m.omega_tilde) - recip(n.omega_tilde).conj());
            let nu = beat(m.frequency, n.frequency);
            out.push(GeneratorTerm::dissipator(
                Role::Dephasing,
                m.h.clone(),
                n.h.adjoint(),
                c,
                nu,
            ));
            out.push(GeneratorTerm::dissipator(
                Role::Dephasing,
                m.h.adjoint(),
                n.h.clone(),
                -c,
                -nu,
            ));
        }
    }
    out
}

/// Jump brackets: for every Lindblad operator `L_n` with relaxation rate
/// `γ_{n,K}` and every pair of harmonic terms `(m, l)`, the bracket
/// `[L_n ρ [h_m, L_n†], h_l†]` with coefficient
/// `1/(ω̃_m*(ω̃_m* + iγ_{n,K}))` at `ν_m − ν_l`, followed by its Hermitian
/// conjugate.
pub fn assemble_jump(
    terms: &[HarmonicTerm],
    lindblads: &[(ComplexMatrix, f64)],
) -> Vec<GeneratorTerm> {
    let mut out = Vec::new();
    for (l, gamma_k) in lindblads {
        for m in terms {
            let w = m.omega_tilde.conj();
            let c = recip(w * (w + I * *gamma_k));
            for p in terms {
                let nu = beat(m.frequency, p.frequency);
                for (adjoint, coefficient, frequency) in [(false, c, nu), (true, c.conj(), -nu)] {
                    out.push(GeneratorTerm {
                        kind: TermKind::Jump {
                            lindblad: l.clone(),
                            drive: m.h.clone(),
                            probe: p.h.clone(),
                            adjoint,
                        },
                        role: Role::Jump,
                        coefficient,
                        frequency,
                    });
                }
            }
        }
    }
    out
}

/// Time-coarse-grained generator: `−i[H_eff(t), ρ]`, the Lindblad
/// dissipators, the dephasing terms and, when `include_jump` is set, the
/// jump brackets.
///
/// Resonant drives are folded into `H₀` first. Fails with
/// [`Error::ProportionalityViolation`] when a drive, a Lindblad operator or
/// `H₀` is not an eigenoperator of the decay matrix `K`.
pub fn assemble_tcg(sys: &DrivenLevelSystem, include_jump: bool) -> Result<Generator> {
    let folded = fold_resonant_drives(sys);
    let n = folded.dim();
    let lindblads = build_lindblads(&folded);
    let k = build_k(n, &lindblads);
    check_static_hamiltonian(&folded, &k)?;
    let harmonic = build_harmonic_terms(&folded)?;

    let mut terms: Vec<GeneratorTerm> =
        assemble_h_eff(n, &harmonic, &folded.frame_hamiltonian_components())
            .into_terms()
            .collect();
    terms.extend(dissipation(&lindblads));
    terms.extend(assemble_dephasing(&harmonic));
    let variant = if include_jump {
        let labels = folded.labels();
        let rated = active_decays(&folded)
            .zip(&lindblads)
            .map(|(d, l)| {
                let name = format!("L{}{}", labels[d.target], labels[d.source]);
                extract_labelled(&k, l, 0.5, &name).map(|g| (l.clone(), g))
            })
            .collect::<Result<Vec<_>>>()?;
        terms.extend(assemble_jump(&harmonic, &rated));
        Variant::TcgFull
    } else {
        Variant::TcgSimple
    };
    Ok(Generator::new(
        n,
        terms,
        variant,
        sys.labels().to_vec(),
        model_hash(sys),
    ))
}

/// Coarse-grained generator of a closed system, built directly from the
/// real detunings without going through the decaying frame.
///
/// Produces the same term sequence as [`assemble_tcg`] on a decay-free
/// model, so the two can be compared coefficient by coefficient.
pub fn assemble_closed(sys: &DrivenLevelSystem) -> Result<Generator> {
    if active_decays(sys).next().is_some() {
        return Err(Error::InvalidModel(
            "closed-system generator requires all decay rates to be zero".into(),
        ));
    }
    let folded = fold_resonant_drives(sys);
    let n = folded.dim();
    let drives: Vec<(ComplexMatrix, f64, f64)> = folded
        .drives()
        .iter()
        .map(|d| (d.operator(n), d.detuning, folded.drive_frequency(d)))
        .collect();

    let mut terms: Vec<GeneratorTerm> = bare_hamiltonian(&folded)
        .into_iter()
        .map(|t| GeneratorTerm::commutator(t.role, t.operator, t.coefficient, t.frequency))
        .collect();
    for (hm, wm, fm) in &drives {
        for (hn, wn, fn_) in &drives {
            terms.push(GeneratorTerm::commutator(
                Role::EffectiveHamiltonian,
                hm * hn.adjoint() - hm.adjoint() * hn,
                Complex64::new(0.5 * (1.0 / wn + 1.0 / wm), 0.0),
                beat(*fm, *fn_),
            ));
        }
    }
    for (hm, wm, fm) in &drives {
        for (hn, wn, fn_) in &drives {
            let rate = 1.0 / wm - 1.0 / wn;
            terms.push(GeneratorTerm::dissipator(
                Role::Dephasing,
                hm.clone(),
                hn.adjoint(),
                Complex64::new(0.0, -rate),
                beat(*fm, *fn_),
            ));
            terms.push(GeneratorTerm::dissipator(
                Role::Dephasing,
                hm.adjoint(),
                hn.clone(),
                Complex64::new(0.0, rate),
                beat(*fn_, *fm),
            ));
        }
    }
    Ok(Generator::new(
        n,
        terms,
        Variant::TcgClosed,
        sys.labels().to_vec(),
        model_hash(sys),
    ))
}
