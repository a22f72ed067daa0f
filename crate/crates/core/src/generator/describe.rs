use std::fmt::Write;

use num_complex::Complex64;

use super::{Generator, GeneratorTerm, TermKind};
use crate::operator::ComplexMatrix;

/// Entries within this distance of `±1` after normalization print as bare
/// dyads.
const UNIT_SNAP: f64 = 1e-12;

/// Line-oriented dump of a generator.
///
/// The header names the variant, dimension, term count and model hash. Each
/// term follows on its own line as
///
/// ```text
/// <kind> <role> <operators> c=<re>,<im> nu=<ν>
/// ```
///
/// Every operator is printed as a sum of dyads over level labels, scaled so
/// that its first nonzero entry (row-major) is 1; the scale factors are
/// folded into the printed coefficient. Lines are sorted by kind, then
/// operators, then frequency.
pub fn describe(gen: &Generator) -> String {
    let labels = gen.labels();
    let mut lines: Vec<(u8, String, f64, String)> = gen
        .terms()
        .iter()
        .map(|t| {
            let (rank, ops, coefficient) = render(t, labels);
            // adding 0.0 turns -0.0 into 0.0
            let nu = t.frequency + 0.0;
            let line = format!(
                "{} {} {} c={:+.9e},{:+.9e} nu={:+.9e}",
                kind_name(t),
                t.role.as_str(),
                ops,
                coefficient.re + 0.0,
                coefficient.im + 0.0,
                nu
            );
            (rank, ops, nu, line)
        })
        .collect();
    lines.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then_with(|| a.3.cmp(&b.3))
    });
    let mut out = String::new();
    writeln!(
        out,
        "# generator variant={} dim={} terms={} model={:016x}",
        gen.variant(),
        gen.dim(),
        gen.terms().len(),
        gen.model_hash()
    )
    .unwrap();
    for (_, _, _, line) in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn kind_name(term: &GeneratorTerm) -> &'static str {
    match &term.kind {
        TermKind::Commutator { .. } => "commutator",
        TermKind::Dissipator { .. } => "dissipator",
        TermKind::Jump { adjoint: false, .. } => "jump",
        TermKind::Jump { adjoint: true, .. } => "jump_adj",
    }
}

fn render(term: &GeneratorTerm, labels: &[u32]) -> (u8, String, Complex64) {
    let mut c = term.coefficient;
    match &term.kind {
        TermKind::Commutator { hamiltonian } => {
            let (s, f) = operator(hamiltonian, labels);
            c *= f;
            (0, format!("H={s}"), c)
        }
        TermKind::Dissipator { left, right } => {
            let (a, fa) = operator(left, labels);
            let (b, fb) = operator(right, labels);
            c *= fa * fb;
            (1, format!("A={a} B={b}"), c)
        }
        TermKind::Jump {
            lindblad,
            drive,
            probe,
            adjoint,
        } => {
            let (l, fl) = operator(lindblad, labels);
            let (x, fx) = operator(drive, labels);
            let (y, fy) = operator(probe, labels);
            // L enters once directly and once conjugated
            c *= fl * fl.conj();
            c *= if *adjoint { fx.conj() * fy } else { fx * fy.conj() };
            (2 + *adjoint as u8, format!("L={l} X={x} Y={y}"), c)
        }
    }
}

/// Renders `m / f` as a dyad sum and returns `f`, the first nonzero entry.
fn operator(m: &ComplexMatrix, labels: &[u32]) -> (String, Complex64) {
    let n = m.nrows();
    let Some(f) = (0..n * n)
        .map(|k| m[(k / n, k % n)])
        .find(|z| z.re != 0.0 || z.im != 0.0)
    else {
        return ("0".to_string(), Complex64::new(1.0, 0.0));
    };
    let mut s = String::new();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            let v = z / f;
            let dyad = format!("|{}><{}|", labels[i], labels[j]);
            if (v - 1.0).norm() < UNIT_SNAP {
                if !s.is_empty() {
                    s.push('+');
                }
            } else if (v + 1.0).norm() < UNIT_SNAP {
                s.push('-');
            } else {
                if !s.is_empty() {
                    s.push('+');
                }
                write!(s, "({:.6e},{:.6e})", v.re + 0.0, v.im + 0.0).unwrap();
            }
            s.push_str(&dyad);
        }
    }
    (s, f)
}
