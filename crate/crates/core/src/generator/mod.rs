//! Master-equation generators as explicit term lists.
//!
//! Every generator is a sum `Σ_k c_k e^{iν_k t} 𝒯_k ρ` of structured terms
//! (commutators, two-operator dissipators and jump brackets). Keeping the
//! terms symbolic allows [`describe`] to print them and tests to inspect
//! coefficients directly. For evaluation the list is compiled once into
//! left, right and sandwich products grouped by frequency.

mod assemble;
mod describe;

use std::fmt;

use nalgebra::{DVectorView, DVectorViewMut};
use num_complex::Complex64;

pub use assemble::{
    assemble_closed, assemble_dephasing, assemble_exact, assemble_h_eff, assemble_jump,
    assemble_tcg, EffectiveHamiltonian, HamiltonianTerm,
};
pub use describe::describe;

use crate::error::{Error, Result};
use crate::operator::{dyad, is_zero, ComplexMatrix, I, ONE, ZERO};

/// Structural part of a generator term; the scalar prefactor lives on
/// [`GeneratorTerm`].
#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    /// `−i[H, ρ]`.
    Commutator { hamiltonian: ComplexMatrix },
    /// `𝒟_{A,B}ρ = AρB − ½(BAρ + ρBA)`.
    Dissipator {
        left: ComplexMatrix,
        right: ComplexMatrix,
    },
    /// `[L ρ [X, L†], Y†]` with `L = lindblad`, `X = drive`, `Y = probe`.
    /// With `adjoint` set it is the Hermitian conjugate bracket
    /// `[Y, [L, X†] ρ L†]`.
    Jump {
        lindblad: ComplexMatrix,
        drive: ComplexMatrix,
        probe: ComplexMatrix,
        adjoint: bool,
    },
}

/// Which part of the master equation a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Hamiltonian,
    EffectiveHamiltonian,
    Dissipation,
    Dephasing,
    Jump,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Hamiltonian => "hamiltonian",
            Role::EffectiveHamiltonian => "heff",
            Role::Dissipation => "dissipation",
            Role::Dephasing => "dephasing",
            Role::Jump => "jump",
        }
    }
}

/// One term `c·e^{iνt}·𝒯ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorTerm {
    pub kind: TermKind,
    pub role: Role,
    pub coefficient: Complex64,
    pub frequency: f64,
}

impl GeneratorTerm {
    pub fn commutator(role: Role, hamiltonian: ComplexMatrix, coefficient: Complex64, frequency: f64) -> Self {
        GeneratorTerm {
            kind: TermKind::Commutator { hamiltonian },
            role,
            coefficient,
            frequency,
        }
    }

    pub fn dissipator(
        role: Role,
        left: ComplexMatrix,
        right: ComplexMatrix,
        coefficient: Complex64,
        frequency: f64,
    ) -> Self {
        GeneratorTerm {
            kind: TermKind::Dissipator { left, right },
            role,
            coefficient,
            frequency,
        }
    }

    /// Expands the term into `(A, B)` pairs meaning `AρB`, with `None`
    /// standing for the identity. The coefficient is folded into `A`.
    fn products(&self) -> Vec<(Option<ComplexMatrix>, Option<ComplexMatrix>)> {
        let c = self.coefficient;
        match &self.kind {
            TermKind::Commutator { hamiltonian: h } => {
                vec![(Some(h * (-I * c)), None), (None, Some(h * (I * c)))]
            }
            TermKind::Dissipator { left, right } => {
                let ba = right * left * (c * -0.5);
                vec![
                    (Some(left * c), Some(right.clone())),
                    (Some(ba.clone()), None),
                    (None, Some(ba)),
                ]
            }
            TermKind::Jump {
                lindblad: l,
                drive: x,
                probe,
                adjoint,
            } => {
                let ld = l.adjoint();
                if !adjoint {
                    let m = x * &ld - &ld * x;
                    let y = probe.adjoint();
                    vec![
                        (Some(l * c), Some(&m * &y)),
                        (Some(&y * l * -c), Some(m)),
                    ]
                } else {
                    let md = l * x.adjoint() - x.adjoint() * l;
                    vec![
                        (Some(probe * &md * c), Some(ld.clone())),
                        (Some(md * -c), Some(&ld * probe)),
                    ]
                }
            }
        }
    }
}

/// Which equation a generator represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Exact,
    TcgFull,
    TcgSimple,
    TcgClosed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Exact => "exact",
            Variant::TcgFull => "tcg_full",
            Variant::TcgSimple => "tcg_simple",
            Variant::TcgClosed => "tcg_closed",
        })
    }
}

/// All products sharing one oscillation frequency.
#[derive(Debug, Clone)]
struct Block {
    frequency: f64,
    left: Option<ComplexMatrix>,
    right: Option<ComplexMatrix>,
    sandwiches: Vec<(ComplexMatrix, ComplexMatrix)>,
    /// The whole block as a matrix on column-stacked `vec(ρ)`, built when
    /// one matrix-vector product is cheaper than the individual products.
    superoperator: Option<ComplexMatrix>,
}

/// A linear map `ρ ↦ dρ/dt` at time `t`.
#[derive(Debug, Clone)]
pub struct Generator {
    dim: usize,
    terms: Vec<GeneratorTerm>,
    variant: Variant,
    labels: Vec<u32>,
    model_hash: u64,
    blocks: Vec<Block>,
}

impl Generator {
    /// Terms with an exactly zero coefficient are dropped.
    pub fn new(
        dim: usize,
        terms: Vec<GeneratorTerm>,
        variant: Variant,
        labels: Vec<u32>,
        model_hash: u64,
    ) -> Self {
        let mut terms = terms;
        terms.retain(|t| t.coefficient != ZERO);
        let blocks = compile(dim, &terms);
        Generator {
            dim,
            terms,
            variant,
            labels,
            model_hash,
            blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[GeneratorTerm] {
        &self.terms
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// FNV-1a hash of the model file the generator was built from.
    pub fn model_hash(&self) -> u64 {
        self.model_hash
    }

    /// True when every surviving product is static, so the generator is a
    /// constant Liouvillian.
    pub fn is_time_independent(&self) -> bool {
        self.blocks.iter().all(|b| b.frequency == 0.0)
    }

    /// `dρ/dt` at time `t`.
    pub fn apply(&self, t: f64, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        let mut scratch = Scratch::new(self.dim);
        self.apply_into(t, rho, &mut out, &mut scratch);
        Ok(out)
    }

    /// Allocation-free evaluation for the integrator. `rho` and `out` must
    /// already have the generator's dimension.
    pub(crate) fn apply_into(
        &self,
        t: f64,
        rho: &ComplexMatrix,
        out: &mut ComplexMatrix,
        scratch: &mut Scratch,
    ) {
        out.fill(ZERO);
        let Scratch { block, product } = scratch;
        for b in &self.blocks {
            block.fill(ZERO);
            if let Some(sup) = &b.superoperator {
                let n2 = rho.len();
                let v = DVectorView::from_slice(rho.as_slice(), n2);
                let mut w = DVectorViewMut::from_slice(block.as_mut_slice(), n2);
                w.gemv(ONE, sup, &v, ZERO);
            } else {
                if let Some(left) = &b.left {
                    block.gemm(ONE, left, rho, ONE);
                }
                if let Some(right) = &b.right {
                    block.gemm(ONE, rho, right, ONE);
                }
                for (a, c) in &b.sandwiches {
                    product.gemm(ONE, a, rho, ZERO);
                    block.gemm(ONE, product, c, ONE);
                }
            }
            let phase = if b.frequency == 0.0 {
                ONE
            } else {
                Complex64::cis(b.frequency * t)
            };
            out.zip_apply(block, |o, v| *o += phase * v);
        }
    }

    /// Matrix of the generator acting on column-stacked `vec(ρ)`.
    pub fn liouvillian(&self, t: f64) -> ComplexMatrix {
        let n = self.dim;
        let mut l = ComplexMatrix::zeros(n * n, n * n);
        let mut out = ComplexMatrix::zeros(n, n);
        let mut scratch = Scratch::new(n);
        for j in 0..n {
            for i in 0..n {
                self.apply_into(t, &dyad(n, i, j), &mut out, &mut scratch);
                let col = j * n + i;
                for q in 0..n {
                    for p in 0..n {
                        l[(q * n + p, col)] = out[(p, q)];
                    }
                }
            }
        }
        l
    }
}

/// Work buffers for [`Generator::apply_into`].
#[derive(Debug, Clone)]
pub(crate) struct Scratch {
    block: ComplexMatrix,
    product: ComplexMatrix,
}

impl Scratch {
    pub(crate) fn new(dim: usize) -> Self {
        Scratch {
            block: ComplexMatrix::zeros(dim, dim),
            product: ComplexMatrix::zeros(dim, dim),
        }
    }
}

fn compile(dim: usize, terms: &[GeneratorTerm]) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for term in terms {
        if term.coefficient == ZERO {
            continue;
        }
        let frequency = if term.frequency == 0.0 { 0.0 } else { term.frequency };
        let index = match blocks.iter().position(|b| b.frequency == frequency) {
            Some(i) => i,
            None => {
                blocks.push(Block {
                    frequency,
                    left: None,
                    right: None,
                    sandwiches: Vec::new(),
                    superoperator: None,
                });
                blocks.len() - 1
            }
        };
        let block = &mut blocks[index];
        for (a, b) in term.products() {
            match (a, b) {
                (Some(a), None) => accumulate(&mut block.left, a, dim),
                (None, Some(b)) => accumulate(&mut block.right, b, dim),
                (Some(a), Some(b)) => {
                    if !is_zero(&a) && !is_zero(&b) {
                        block.sandwiches.push((a, b));
                    }
                }
                (None, None) => unreachable!("products always carry an operator"),
            }
        }
    }
    for b in &mut blocks {
        if b.left.as_ref().is_some_and(is_zero) {
            b.left = None;
        }
        if b.right.as_ref().is_some_and(is_zero) {
            b.right = None;
        }
    }
    blocks.retain(|b| b.left.is_some() || b.right.is_some() || !b.sandwiches.is_empty());
    for b in &mut blocks {
        // each product costs about n³ multiplications, the superoperator n⁴
        let products = b.left.is_some() as usize + b.right.is_some() as usize + 2 * b.sandwiches.len();
        if products > dim {
            b.superoperator = Some(superoperator(dim, b));
        }
    }
    blocks
}

/// `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)` summed over the block's products.
fn superoperator(n: usize, b: &Block) -> ComplexMatrix {
    let id = ComplexMatrix::identity(n, n);
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    if let Some(left) = &b.left {
        s += id.kronecker(left);
    }
    if let Some(right) = &b.right {
        s += right.transpose().kronecker(&id);
    }
    for (a, c) in &b.sandwiches {
        s += c.transpose().kronecker(a);
    }
    s
}

fn accumulate(slot: &mut Option<ComplexMatrix>, m: ComplexMatrix, dim: usize) {
    debug_assert_eq!(m.nrows(), dim);
    match slot {
        Some(acc) => *acc += m,
        None => *slot = Some(m),
    }
}

/// 64-bit FNV-1a; stable across toolchains, unlike `DefaultHasher`.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{commutator, dissipator_apply, max_abs};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_rho() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)],
        )
    }

    #[test]
    fn commutator_term_matches_direct_evaluation() {
        let h = ComplexMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, 0.4), c(0.1, -0.4), c(-0.2, 0.0)]);
        let term = GeneratorTerm::commutator(Role::Hamiltonian, h.clone(), c(0.7, 0.1), 0.0);
        let gen = Generator::new(2, vec![term], Variant::Exact, vec![1, 2], 0);
        let rho = sample_rho();
        let expected = commutator(&h, &rho).unwrap() * (-I * c(0.7, 0.1));
        assert!(max_abs(&(gen.apply(0.0, &rho).unwrap() - expected)) < 1e-15);
    }

    #[test]
    fn dissipator_term_matches_direct_evaluation() {
        let a = dyad(2, 0, 1) * c(0.2, 0.1);
        let b = dyad(2, 1, 0) + dyad(2, 1, 1) * c(0.0, 0.3);
        let term = GeneratorTerm::dissipator(Role::Dephasing, a.clone(), b.clone(), c(0.5, -0.2), 0.4);
        let gen = Generator::new(2, vec![term], Variant::TcgSimple, vec![1, 2], 0);
        let rho = sample_rho();
        let t = 1.3;
        let expected = dissipator_apply(&a, &b, &rho).unwrap() * (c(0.5, -0.2) * Complex64::cis(0.4 * t));
        assert!(max_abs(&(gen.apply(t, &rho).unwrap() - expected)) < 1e-15);
        assert!(!gen.is_time_independent());
    }

    #[test]
    fn jump_term_matches_direct_evaluation() {
        let l = dyad(2, 0, 1) * c(0.3, 0.0);
        let x = dyad(2, 0, 1) * c(0.05, 0.02);
        let p = dyad(2, 0, 1) * c(0.04, -0.01);
        let coefficient = c(0.9, 0.3);
        let rho = sample_rho();
        let m = commutator(&x, &l.adjoint()).unwrap();
        let y = p.adjoint();
        let inner = &l * &rho * &m;
        let expected = commutator(&inner, &y).unwrap() * coefficient;
        let term = GeneratorTerm {
            kind: TermKind::Jump {
                lindblad: l.clone(),
                drive: x.clone(),
                probe: p.clone(),
                adjoint: false,
            },
            role: Role::Jump,
            coefficient,
            frequency: 0.0,
        };
        let adjoint = GeneratorTerm {
            kind: TermKind::Jump {
                lindblad: l.clone(),
                drive: x,
                probe: p,
                adjoint: true,
            },
            role: Role::Jump,
            coefficient: coefficient.conj(),
            frequency: 0.0,
        };
        let gen = Generator::new(2, vec![term.clone()], Variant::TcgFull, vec![1, 2], 0);
        assert!(max_abs(&(gen.apply(0.0, &rho).unwrap() - &expected)) < 1e-15);
        // the conjugate bracket evaluates to the adjoint of the first
        let gen = Generator::new(2, vec![adjoint], Variant::TcgFull, vec![1, 2], 0);
        assert!(max_abs(&(gen.apply(0.0, &rho).unwrap() - expected.adjoint())) < 1e-15);
    }

    #[test]
    fn empty_generator_is_zero() {
        let gen = Generator::new(3, Vec::new(), Variant::Exact, vec![1, 2, 3], 0);
        let rho = ComplexMatrix::identity(3, 3) * c(1.0 / 3.0, 0.0);
        assert!(is_zero(&gen.apply(2.0, &rho).unwrap()));
        assert!(gen.is_time_independent());
        assert!(gen.apply(0.0, &ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn liouvillian_agrees_with_apply() {
        let a = dyad(2, 0, 1) * c(0.3, 0.0);
        let term = GeneratorTerm::dissipator(Role::Dissipation, a.clone(), a.adjoint(), ONE, 0.0);
        let h = GeneratorTerm::commutator(Role::Hamiltonian, dyad(2, 1, 1), ONE, 0.0);
        let gen = Generator::new(2, vec![term, h], Variant::Exact, vec![1, 2], 0);
        let rho = sample_rho();
        let l = gen.liouvillian(0.0);
        let v = nalgebra::DVector::from_iterator(4, rho.iter().cloned());
        let lv = &l * v;
        let direct = gen.apply(0.0, &rho).unwrap();
        for (x, y) in lv.iter().zip(direct.iter()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
    }
}
