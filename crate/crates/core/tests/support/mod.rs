//! Independent reference implementations shared by the integration and
//! acceptance tests. Nothing here calls into the crate's generator code.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type M = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn ket_bra(n: usize, i: usize, j: usize) -> M {
    let mut m = M::zeros(n, n);
    m[(i, j)] = r(1.0);
    m
}

pub fn comm(a: &M, b: &M) -> M {
    a * b - b * a
}

/// `AρB − ½(BAρ + ρBA)`.
pub fn diss(a: &M, b: &M, rho: &M) -> M {
    let ba = b * a;
    a * rho * b - (&ba * rho + rho * &ba) * r(0.5)
}

pub fn max_entry(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> M {
    M::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> M {
    let a = random_matrix(rng, n);
    (&a + a.adjoint()) * r(0.5)
}

/// `AA†/Tr(AA†)` for a random complex `A`.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> M {
    let a = random_matrix(rng, n);
    let p = &a * a.adjoint();
    let t = p.trace();
    p / t
}

/// The two-level coarse-grained equation written out by hand, levels
/// `|1⟩, |3⟩` at indices 0, 1, in the frame where the bare Hamiltonian is
/// `frame_sign·Δ|3⟩⟨3|`.
pub fn two_level_tcg(rho: &M, delta: f64, omega: f64, gamma: f64, frame_sign: f64) -> M {
    let sm = ket_bra(2, 0, 1);
    let sp = ket_bra(2, 1, 0);
    let p3 = ket_bra(2, 1, 1);
    let mod2 = delta * delta + gamma * gamma / 4.0;
    let ch = delta * omega * omega / (4.0 * mod2);
    let cg = gamma * omega * omega / (4.0 * mod2);
    let z = comm(&sm, &sp);
    let i = c(0.0, 1.0);
    let mut out = comm(&p3, rho) * (-i * frame_sign * delta);
    out += diss(&sm, &sp, rho) * r(gamma);
    out += comm(&z, rho) * (-i * ch);
    out -= (diss(&sm, &sp, rho) - diss(&sp, &sm, rho)) * r(cg);
    out -= comm(&sp, &(&sm * rho * &z)) * r(cg);
    out += comm(&sm, &(&z * rho * &sp)) * r(cg);
    out
}

/// Hand-written three-level Raman equation (levels 1, 2 lower, 3 upper) in
/// the interaction picture at time `t`: effective Hamiltonian, dephasing,
/// dissipation and jump parts, for real Rabi frequencies.
pub fn three_level_tcg(
    rho: &M,
    t: f64,
    d: [f64; 2],
    o: [f64; 2],
    g: [f64; 2],
    include_jump: bool,
) -> M {
    let n = 3;
    let i = c(0.0, 1.0);
    let gamma = g[0] + g[1];
    let dt = [c(d[0], gamma / 2.0), c(d[1], gamma / 2.0)];
    let k = |a: usize, b: usize| ket_bra(n, a, b);
    let d12 = d[0] - d[1];

    let mut h = M::zeros(n, n);
    for s in 0..2 {
        h += (k(s, s) - k(2, 2)) * r(o[s] * o[s] * d[s] / (4.0 * d[s] * d[s] + gamma * gamma));
    }
    let cross = r((d[0] + d[1]) * o[0] * o[1])
        / (r(8.0) * c(d[0], -gamma / 2.0) * c(d[1], gamma / 2.0))
        * Complex64::cis(d12 * t);
    h += k(0, 1) * cross + k(1, 0) * cross.conj();
    let mut out = comm(&h, rho) * (-i);

    for s in 0..2 {
        let rate = o[s] * o[s] / 4.0 * gamma / dt[s].norm_sqr();
        out -= (diss(&k(s, 2), &k(2, s), rho) - diss(&k(2, s), &k(s, 2), rho)) * r(rate);
    }
    let cc = -i * r(o[0] * o[1] / 4.0) * (dt[1].conj() - dt[0]) / (dt[0] * dt[1].conj());
    let e = Complex64::cis(d12 * t);
    // cc·[e 𝒟_{A,B} − e* 𝒟_{C,D}] plus its Hermitian conjugate, where the
    // conjugate of x·𝒟_{A,B} is x*·𝒟_{B†,A†}
    let (a, b) = (k(0, 2), k(2, 1));
    let (cm, dm) = (k(2, 0), k(1, 2));
    out += diss(&a, &b, rho) * (cc * e) - diss(&cm, &dm, rho) * (cc * e.conj());
    out += diss(&b.adjoint(), &a.adjoint(), rho) * (cc * e).conj()
        - diss(&dm.adjoint(), &cm.adjoint(), rho) * (cc * e.conj()).conj();

    for s in 0..2 {
        let l = k(s, 2) * r(g[s].sqrt());
        out += diss(&l, &l.adjoint(), rho);
    }

    if include_jump {
        let ht = k(0, 2) * (r(o[0] / 2.0) * Complex64::cis(d[0] * t))
            + k(1, 2) * (r(o[1] / 2.0) * Complex64::cis(d[1] * t));
        let hd = k(0, 2) * (r(o[0] / (2.0 * dt[0].norm_sqr())) * Complex64::cis(d[0] * t))
            + k(1, 2) * (r(o[1] / (2.0 * dt[1].norm_sqr())) * Complex64::cis(d[1] * t));
        let mut jump = M::zeros(n, n);
        for s in 0..2 {
            let inner = k(s, 2) * rho * comm(&hd, &k(2, s));
            jump += comm(&inner, &ht.adjoint()) * r(g[s]);
        }
        out += &jump + jump.adjoint();
    }
    out
}

/// Column-stacked Liouvillian of `−i[H, ρ] + Σ 𝒟_{L,L†}ρ`, built from
/// Kronecker products: `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn lindblad_liouvillian(h: &M, ls: &[M]) -> M {
    let n = h.nrows();
    let id = M::identity(n, n);
    let i = c(0.0, 1.0);
    let mut out = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-i);
    for l in ls {
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += ld.transpose().kronecker(l);
        out -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * r(0.5);
    }
    out
}

pub fn vec_of(m: &M) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_iterator(m.len(), m.iter().cloned())
}

pub fn unvec(v: &nalgebra::DVector<Complex64>, n: usize) -> M {
    M::from_iterator(n, n, v.iter().cloned())
}

/// `e^A` by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &M) -> M {
    let n = a.nrows();
    let norm: f64 = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = a / r(2f64.powi(s));
    let mut term = M::identity(n, n);
    let mut sum = M::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / r(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Exact state at each time for a constant Liouvillian.
pub fn exact_states(l: &M, rho0: &M, times: &[f64]) -> Vec<M> {
    let n = rho0.nrows();
    let v0 = vec_of(rho0);
    times
        .iter()
        .map(|&t| unvec(&(expm(&(l * r(t))) * &v0), n))
        .collect()
}
