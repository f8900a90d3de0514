//! Named property suites over seeded random inputs.
//!
//! Each trial draws from its own stream (see [`crate::random`]), so results do
//! not depend on scheduling and trials run in parallel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use crate::alphabet::Alphabet;
use crate::automorphism::{gl_act, BracketSpan, FilteredAutomorphism};
use crate::cyclic::CyclicElement;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::fox::{induced_automorphism, Expansion, FreeGroupAutomorphism, GroupWord};
use crate::linalg::sparse_rank;
use crate::magnus::{mag, QuotientAlgebra, RMatrix};
use crate::random;
use crate::symplectic::dehn_twist_boundary;
use crate::word::{lyndon_words, necklaces};
use crate::Rational;

type Q = Rational;

/// Outcome of a suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = [
    "trace-cocycle",
    "ab-cocycle",
    "ab-equivariance",
    "dehn-equivariance",
    "traces-correspondence",
    "jacobi-formula",
    "tau-trace",
    "satoh-rank",
];

type Trial = fn(u64, &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String>;

/// Runs `trials` trials of the named suite with the given seed.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<SuiteReport> {
    let trial: Trial = match name {
        "trace-cocycle" => trace_cocycle,
        "ab-cocycle" => ab_cocycle,
        "ab-equivariance" => ab_equivariance,
        "dehn-equivariance" => dehn_equivariance,
        "traces-correspondence" => traces_correspondence,
        "jacobi-formula" => jacobi_formula,
        "tau-trace" => tau_trace,
        "satoh-rank" => satoh_rank,
        _ => return Err(Error::Parse(format!("unknown suite `{name}` (expected one of {})", SUITES.join(", ")))),
    };
    let mut failures: Vec<(u64, String)> = (0..trials as u64)
        .into_par_iter()
        .filter_map(|t| trial(t, &mut random::trial_rng(seed, t)).err().map(|e| (t, e)))
        .collect();
    failures.sort_by_key(|(t, _)| *t);
    let failures = failures.into_iter().map(|(t, e)| format!("trial {t}: {e}")).collect();
    Ok(SuiteReport { suite: name.to_string(), trials, failures })
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// `Tr([δ, η]) = δ·Tr(η) - η·Tr(δ)` for homogeneous `δ`, `η` of degrees 0 to 4.
fn trace_cocycle(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let n = if t.is_multiple_of(2) { 2 } else { 4 };
    let alphabet = Alphabet::standard(n);
    let (p, q) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
    let trunc = p + q + 1;
    let d: Derivation<Q> = random::homogeneous_derivation(rng, &alphabet, trunc, p);
    let e: Derivation<Q> = random::homogeneous_derivation(rng, &alphabet, trunc, q);
    let lhs = d.bracket(&e).map_err(fail)?.trace();
    let rhs =
        d.act_on_cyclic(&e.trace()).map_err(fail)?.sub(&e.act_on_cyclic(&d.trace()).map_err(fail)?).map_err(fail)?;
    check(lhs == rhs, || format!("cocycle identity fails for degrees ({p}, {q}) over {n} letters"))
}

/// Process-wide memo of expensive per-shape structures.
type Cache<K, V> = OnceLock<Mutex<HashMap<K, Arc<V>>>>;

fn bracket_span(n: usize, trunc: usize) -> Arc<BracketSpan<Q>> {
    static CACHE: Cache<(usize, usize), BracketSpan<Q>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache").get(&(n, trunc)) {
        return s.clone();
    }
    let span = Arc::new(BracketSpan::new(&Alphabet::standard(n), trunc));
    cache.lock().expect("cache").insert((n, trunc), span.clone());
    span
}

/// `Ab(ψφ) - Ab(ψ) - σ(ψ)·Ab(φ)` lies in the bracket span (trunc 4).
fn ab_cocycle(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let n = 2 + (t % 2) as usize;
    let alphabet = Alphabet::standard(n);
    let psi: FilteredAutomorphism<Q> = random::aut(rng, &alphabet, 4);
    let phi: FilteredAutomorphism<Q> = random::aut(rng, &alphabet, 4);
    let lhs = psi.compose(&phi).map_err(fail)?.ab().map_err(fail)?;
    let moved = gl_act(psi.sigma(), &phi.ab().map_err(fail)?).map_err(fail)?;
    let defect = lhs.sub(&psi.ab().map_err(fail)?).map_err(fail)?.sub(&moved).map_err(fail)?;
    check(bracket_span(n, 4).contains(&defect).map_err(fail)?, || "cocycle defect outside the bracket span".into())
}

/// `Ab(φψφ⁻¹) - σ(φ)·Ab(ψ)` lies in the bracket span for `ψ ∈ IAut` (trunc 4).
fn ab_equivariance(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let n = 2 + (t % 2) as usize;
    let alphabet = Alphabet::standard(n);
    let phi: FilteredAutomorphism<Q> = random::aut(rng, &alphabet, 4);
    let psi: FilteredAutomorphism<Q> = random::iaut(rng, &alphabet, 4);
    let conj = phi.compose(&psi).and_then(|x| x.compose(&phi.invert()?)).map_err(fail)?;
    let moved = gl_act(phi.sigma(), &psi.ab().map_err(fail)?).map_err(fail)?;
    let defect = conj.ab().map_err(fail)?.sub(&moved).map_err(fail)?;
    check(bracket_span(n, 4).contains(&defect).map_err(fail)?, || "equivariance defect outside the bracket span".into())
}

/// `Ab(TψT⁻¹) - Ab(ψ)` lies in the bracket span for the boundary twist `T`, genus 1.
fn dehn_equivariance(_t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let twist = dehn_twist_boundary::<Q>(1, 4).map_err(fail)?;
    let alphabet = twist.alphabet().clone();
    let psi: FilteredAutomorphism<Q> = random::iaut(rng, &alphabet, 4);
    let conj = twist.compose(&psi).and_then(|x| x.compose(&twist.invert()?)).map_err(fail)?;
    let defect = conj.ab().map_err(fail)?.sub(&psi.ab().map_err(fail)?).map_err(fail)?;
    let span = BracketSpan::new(&alphabet, 4);
    check(span.contains(&defect).map_err(fail)?, || "twist-conjugation defect outside the bracket span".into())
}

fn quotient(n: usize, m: usize, trunc: usize) -> Arc<QuotientAlgebra<Q>> {
    static CACHE: Cache<(usize, usize, usize), QuotientAlgebra<Q>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.lock().expect("cache").get(&(n, m, trunc)) {
        return q.clone();
    }
    let q = Arc::new(QuotientAlgebra::new(&Alphabet::standard(n), m, trunc).expect("m >= 2"));
    cache.lock().expect("cache").insert((n, m, trunc), q.clone());
    q
}

/// `ℓdet(Mag(ψ)) = p(Tr(Ab(ψ)))` for `ψ ∈ Aut^R`, `R = L_{≥m}`, `m ∈ {2, 3}`, trunc 5.
fn traces_correspondence(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let m = 2 + (t % 2) as usize;
    let alphabet = Alphabet::standard(2);
    let algebra = quotient(2, m, 4);
    let psi: FilteredAutomorphism<Q> = random::aut_r(rng, &alphabet, 5, m);
    let lhs = mag(&psi, &algebra).and_then(|x| x.ldet()).map_err(fail)?;
    let rhs = algebra.project_cyclic(&psi.ab().map_err(fail)?.trace()).map_err(fail)?;
    check(lhs == rhs, || format!("ldet(Mag) differs from the projected trace for m = {m}"))
}

/// `det = exp ∘ ℓdet` on unipotent commutative matrices, and `ℓdet(r·I) = n log(r/ε(r))`.
fn jacobi_formula(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let size = 2 + (t % 2) as usize;
    let algebra = quotient(2, 2, 4);
    let p = random::unipotent_matrix(rng, &algebra, size);
    let det = p.det_commutative().map_err(fail)?;
    let ldet = p.ldet().map_err(fail)?.to_sym().exp().map_err(fail)?;
    check(det == ldet, || format!("det differs from exp(ldet) for a {size}x{size} matrix"))?;
    let m = 2 + (t / 2 % 2) as usize;
    let algebra = quotient(2, m, 4);
    let c: Q = random::small_rational(rng);
    let r = random::quotient_element(rng, &algebra, c.clone());
    let lhs = RMatrix::scalar(&algebra, size, &r).ldet().map_err(fail)?;
    let normalized = r.scale(&crate::Scalar::inv(&c)).log().map_err(fail)?;
    let rhs = algebra
        .project_cyclic(&CyclicElement::from_tensor(&normalized))
        .map_err(fail)?
        .scale(&<Q as crate::Scalar>::from_i64(size as i64));
    check(lhs == rhs, || format!("scalar rule fails for m = {m}"))
}

/// `Tr(τ_k(ψ)) = 0` for `ψ` induced by conjugation by a `Γ_k` word or a commutator of IA generators.
fn tau_trace(t: u64, rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let (k, n) = [(2, 2), (2, 3), (3, 3)][(t % 3) as usize];
    let f = if (t / 3).is_multiple_of(2) { gamma_conjugation(rng, k, n) } else { ia_commutator(rng, k, n) };
    let theta = Expansion::<Q>::exponential(&Alphabet::standard(n), k + 2);
    let psi = induced_automorphism(&theta, &f).map_err(fail)?;
    let tau = psi.tau(k).map_err(fail)?;
    check(tau.trace().is_zero(), || format!("Tr(tau_{k}) is nonzero for rank {n}"))
}

fn random_generator(rng: &mut impl Rng, n: usize) -> GroupWord {
    let g = GroupWord::generator(rng.gen_range(0..n) as u8);
    if rng.gen_bool(0.5) {
        g.inverse()
    } else {
        g
    }
}

/// Conjugation by a random left-normed commutator of length `k`.
fn gamma_conjugation(rng: &mut impl Rng, k: usize, n: usize) -> FreeGroupAutomorphism {
    let mut c = random_generator(rng, n);
    while c.is_identity() || c.len() < k {
        c = random_generator(rng, n);
        for _ in 1..k {
            c = GroupWord::commutator(&c, &random_generator(rng, n));
        }
        if k == 1 {
            break;
        }
    }
    FreeGroupAutomorphism::conjugation(n, &c)
}

/// `K_ij: γ_i ↦ γ_j γ_i γ_j⁻¹` or `M_ijk: γ_i ↦ γ_i [γ_j, γ_k]`.
fn ia_generator(rng: &mut impl Rng, n: usize) -> FreeGroupAutomorphism {
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    let mut images: Vec<GroupWord> = (0..n).map(|g| GroupWord::generator(g as u8)).collect();
    let mut inverses = images.clone();
    let (gi, gj) = (GroupWord::generator(i as u8), GroupWord::generator(j as u8));
    if n >= 3 && rng.gen_bool(0.5) {
        let k = (0..n).find(|&x| x != i && x != j).expect("three generators");
        let c = GroupWord::commutator(&gj, &GroupWord::generator(k as u8));
        images[i] = gi.mul(&c);
        inverses[i] = gi.mul(&c.inverse());
    } else {
        images[i] = gj.mul(&gi).mul(&gj.inverse());
        inverses[i] = gj.inverse().mul(&gi).mul(&gj);
    }
    FreeGroupAutomorphism::new(images, inverses).expect("IA generator")
}

/// An iterated commutator of `k` random IA generators (lies in `A[k]`).
fn ia_commutator(rng: &mut impl Rng, k: usize, n: usize) -> FreeGroupAutomorphism {
    let mut f = ia_generator(rng, n);
    for _ in 1..k {
        f = FreeGroupAutomorphism::commutator(&f, &ia_generator(rng, n));
    }
    f
}

/// Rank of `Tr: Hom(H, L_{k+1}) → C_k` equals the number of necklaces of length `k`.
fn satoh_rank(t: u64, _rng: &mut rand_chacha::ChaCha8Rng) -> std::result::Result<(), String> {
    let (k, n) = [(2, 4), (3, 5)][(t % 2) as usize];
    let (rank, target) = trace_rank(k, n);
    check(rank == target, || format!("trace rank {rank} differs from dim C_{k} = {target} for rank {n}"))
}

/// Rank of the trace on `Hom(H, L_{k+1})` and `dim C_k(H)`, for `n` generators.
pub fn trace_rank(k: usize, n: usize) -> (usize, usize) {
    let alphabet = Alphabet::standard(n);
    let necks = necklaces(n, k);
    let index: std::collections::HashMap<_, _> = necks.iter().enumerate().map(|(p, w)| (w.clone(), p)).collect();
    let vectors: Vec<Vec<(usize, Q)>> = (0..n)
        .flat_map(|i| lyndon_words(n, k + 1).into_iter().map(move |w| (i, w)))
        .map(|(i, w)| {
            let tr = Derivation::<Q>::elementary(&alphabet, k + 1, i, &w).trace();
            let mut v: Vec<(usize, Q)> = tr.terms().map(|(w, c)| (index[w], c.clone())).collect();
            v.sort_by_key(|(p, _)| *p);
            v
        })
        .collect();
    (sparse_rank(&vectors), necks.len())
}
