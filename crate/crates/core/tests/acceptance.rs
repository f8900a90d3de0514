//! Acceptance runner: one pass/fail line per criterion, with runtime bounds.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jtl_core::cyclic::SymElement;
use jtl_core::derivation::Derivation;
use jtl_core::linalg::sparse_rank;
use jtl_core::suites::{run_suite, trace_rank};
use jtl_core::symplectic::{
    boundary_word, dehn_twist_boundary, dehn_twist_derivation, h1_invariant_count, h_basis, omega, symplectic_expansion,
};
use jtl_core::trees::{caterpillar_six, eta, xi_trees, Invariant};
use jtl_core::word::{all_words, Word};
use jtl_core::{Rational, Scalar, Tensor};

type Q = Rational;
type Outcome = Result<String, String>;
/// Name, runtime bound in seconds, and check.
type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn ensure(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lift<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn suite(name: &str, trials: usize, seed: u64) -> Outcome {
    let report = lift(run_suite(name, trials, seed))?;
    ensure(report.passed(), format!("{name}: {} trials, failures {:?}", trials, report.failures))
}

fn i2() -> Outcome {
    let v = lift(Invariant::I2.evaluate(&lift(dehn_twist_derivation::<Q>(1, 4))?))?;
    ensure(v == q(6), format!("I2(t) = {v}"))
}

fn i6() -> Outcome {
    let v = lift(Invariant::I6.evaluate(&lift(eta::<Q>(&caterpillar_six(), 8))?))?;
    ensure(v == q(72), format!("I6 = {v}"))
}

fn i10() -> Outcome {
    let names = [Invariant::I10_1, Invariant::I10_2, Invariant::I10_3];
    let mut table = Vec::new();
    for tree in xi_trees() {
        let d = lift(eta::<Q>(&tree, 12))?;
        table.push(names.iter().map(|n| lift(n.evaluate(&d))).collect::<Result<Vec<_>, _>>()?);
    }
    let expected: Vec<Vec<Q>> =
        [[324, 32, 18], [0, -24, -24], [0, 0, 150]].iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let shown: Vec<Vec<String>> = table.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    ensure(table == expected, format!("matrix {shown:?}"))
}

fn h_dims() -> Outcome {
    let dims = (1..=10).map(|k| lift(h_basis::<Q>(1, k, k + 2)).map(|h| h.dim())).collect::<Result<Vec<_>, _>>()?;
    ensure(dims == [0, 1, 0, 3, 0, 6, 4, 13, 12, 37], format!("dims {dims:?}"))
}

fn h1_invariants() -> Outcome {
    let counts = [2, 6, 10].iter().map(|&k| lift(h1_invariant_count::<Q>(k))).collect::<Result<Vec<_>, _>>()?;
    ensure(counts == [1, 1, 3], format!("[0]-multiplicities at k = 2, 6, 10: {counts:?}"))
}

fn sym_vector(s: &SymElement<Q>, words: &[Word]) -> Vec<(usize, Q)> {
    words.iter().enumerate().map(|(p, w)| (p, s.coeff(w))).filter(|(_, c)| *c != q(0)).collect()
}

fn itr_properties() -> Outcome {
    let all_zero = |basis: &[Derivation<Q>]| -> Result<bool, String> {
        for d in basis {
            if !lift(d.itr())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for k in [2, 4] {
        let h = lift(h_basis::<Q>(2, k, k + 2))?;
        if !all_zero(h.basis())? {
            return Err(format!("itr nonzero on h_{k}, genus 2"));
        }
    }
    let mut ranks = Vec::new();
    for (k, target) in [(1, 4), (3, 20)] {
        let h = lift(h_basis::<Q>(2, k, k + 2))?;
        let sorted: Vec<Word> = all_words(4, k).into_iter().filter(Word::is_sorted).collect();
        let images =
            h.basis().iter().map(|d| lift(d.itr()).map(|s| sym_vector(&s, &sorted))).collect::<Result<Vec<_>, _>>()?;
        let rank = sparse_rank(&images);
        if rank != target {
            return Err(format!("itr rank {rank} on h_{k}, expected dim S^{k} = {target}"));
        }
        ranks.push(rank);
    }
    for k in 1..=10 {
        if !all_zero(lift(h_basis::<Q>(1, k, k + 2))?.basis())? {
            return Err(format!("itr nonzero on h_{k}, genus 1"));
        }
    }
    Ok(format!("genus 2: zero on h_2, h_4; ranks {ranks:?} onto S^1, S^3; genus 1: zero on h_1..h_10"))
}

fn ab_suites() -> Outcome {
    let a = suite("ab-cocycle", 50, 8)?;
    let b = suite("ab-equivariance", 50, 8)?;
    Ok(format!("{a}; {b}"))
}

fn satoh() -> Outcome {
    let mut parts = Vec::new();
    for (k, n) in [(2, 4), (3, 5)] {
        let (rank, dim) = trace_rank(k, n);
        if rank != dim {
            return Err(format!("(k, n) = ({k}, {n}): rank {rank}, dim C_k {dim}"));
        }
        parts.push(format!("({k},{n}): {rank}"));
    }
    Ok(format!("rank = dim C_k: {}", parts.join(", ")))
}

fn expansion() -> Outcome {
    for g in 1..=2 {
        let theta = lift(symplectic_expansion::<Q>(g, 6))?;
        if !theta.is_grouplike() {
            return Err(format!("genus {g}: not group-like"));
        }
        let h = theta.alphabet().clone();
        for (i, img) in theta.images().iter().enumerate() {
            if img.with_trunc(1) != &Tensor::one(&h, 1) + &Tensor::generator(&h, 1, i as u8) {
                return Err(format!("genus {g}: degree-1 normalisation fails"));
            }
        }
        let log = lift(lift(theta.evaluate(&boundary_word(g)))?.log())?;
        if log != -&lift(omega::<Q>(&h, 6))? {
            return Err(format!("genus {g}: log θ(ζ) ≠ -ω"));
        }
    }
    Ok("genus 1, 2 at N = 6: group-like, normalised, log θ(ζ) = -ω".into())
}

fn dehn_twist() -> Outcome {
    let twist = lift(dehn_twist_boundary::<Q>(1, 6))?;
    let log = lift(twist.log_aut())?;
    let t = lift(dehn_twist_derivation::<Q>(1, 6))?;
    let degree = lift(twist.filtration_degree())?;
    ensure(log == t && degree == Some(2), format!("log T = t: {}, filtration degree {degree:?}", log == t))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("I2(t) = 6", 1, Box::new(i2)),
        ("I6(eta(caterpillar abababab)) = 72", 5, Box::new(i6)),
        ("I10 matrix on xi_1, xi_2, xi_3", 120, Box::new(i10)),
        ("dim h_k, genus 1, k = 1..10", 120, Box::new(h_dims)),
        ("[0]-multiplicity in H1(h+)_k = 1, 1, 3", 300, Box::new(h1_invariants)),
        ("itr vanishing and surjectivity", 300, Box::new(itr_properties)),
        ("trace cocycle suite", 60, Box::new(|| suite("trace-cocycle", 200, 7))),
        ("Ab cocycle and equivariance suites", 180, Box::new(ab_suites)),
        ("traces correspondence ldet(Mag) = Tr(Ab)", 180, Box::new(|| suite("traces-correspondence", 24, 9))),
        ("Jacobi formula and scalar rule", 60, Box::new(|| suite("jacobi-formula", 24, 10))),
        ("Tr(tau_k) = 0 on A[k]", 120, Box::new(|| suite("tau-trace", 18, 11))),
        ("Satoh rank check", 120, Box::new(satoh)),
        ("symplectic expansion builder", 60, Box::new(expansion)),
        ("Dehn twist identity", 1, Box::new(dehn_twist)),
    ];
    let mut failed = 0;
    for (i, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*bound);
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name} ({:.2}s, bound {bound}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
