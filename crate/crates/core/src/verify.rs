//! Self-check suites run by `lynprof verify`.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construction::{
    build, certify_det_nonzero, context, densities_at, leading_monomial_coefficient, random_params,
};
use crate::error::Result;
use crate::flagalg::{dimension, express, lyndon_densities, product};
use crate::solver::{perturbed_defaults, solve, target_densities, SolveOptions};
use crate::tournamentons::{density, normalization_check, random_step, StepTournamenton};
use crate::tournaments::{classes, Tournament};
use crate::words::{cfl_factorize, enumerate_lyndon_with, is_lyndon, TieBreak};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<(bool, String)>;

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn random_tournament<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.random())
}

fn step_samples(rng: &mut ChaCha8Rng, count: usize) -> Vec<StepTournamenton> {
    (0..count).map(|_| random_step(rng, 3)).collect()
}

fn class_counts() -> Outcome {
    let expected = [1usize, 1, 2, 4, 12, 56];
    let got = (1..=6).map(|n| classes(n).map(<[_]>::len)).collect::<Result<Vec<_>>>()?;
    Ok((got == expected, format!("{got:?}")))
}

fn canonical_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..100 {
        let n = rng.random_range(1..=7);
        let t = random_tournament(rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        if t.permute(&perm).canonicalize() != t.canonicalize() {
            return Ok((false, format!("{t} changed canonical form under {perm:?}")));
        }
    }
    Ok((true, "100 relabelings".into()))
}

fn cfl(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..200 {
        let len = rng.random_range(1..=12);
        let w: Vec<u8> = (0..len).map(|_| rng.random_range(0..3)).collect();
        let parts = cfl_factorize(&w);
        let joined: Vec<u8> = parts.concat();
        let ok = joined == w && parts.iter().all(|p| is_lyndon(p)) && parts.windows(2).all(|p| p[0] >= p[1]);
        if !ok {
            return Ok((false, format!("bad factorization of {w:?}")));
        }
    }
    Ok((true, "200 words".into()))
}

fn dimensions(level: Level) -> Outcome {
    let mut got = vec![dimension(3)?, dimension(4)?];
    let mut expected = vec![1, 3];
    if level == Level::Full {
        got.push(dimension(5)?);
        got.push(enumerate_lyndon_with(5, TieBreak::Descending)?.len());
        expected.extend([11, 11]);
    }
    Ok((got == expected, format!("{got:?}")))
}

fn express_matches_density(level: Level, rng: &mut ChaCha8Rng) -> Outcome {
    let k = if level == Level::Full { 5 } else { 4 };
    let ws = step_samples(rng, 3);
    let mut checked = 0;
    for w in &ws {
        let point = lyndon_densities(k, w)?;
        for n in 1..=k {
            for t in classes(n)? {
                if express(t)?.evaluate(&point)? != density(t, w)? {
                    return Ok((false, format!("mismatch for {t}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} evaluations")))
}

fn products(rng: &mut ChaCha8Rng) -> Outcome {
    let ws = step_samples(rng, 3);
    for _ in 0..10 {
        let (na, nb) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let a = random_tournament(rng, na);
        let b = random_tournament(rng, nb);
        let p = product(&a, &b)?;
        for w in &ws {
            if p.density(w)? != density(&a, w)? * density(&b, w)? {
                return Ok((false, format!("product identity fails for {a} x {b}")));
            }
        }
    }
    Ok((true, "10 pairs on 3 tournamentons".into()))
}

fn normalization(level: Level, rng: &mut ChaCha8Rng) -> Outcome {
    let kmax = if level == Level::Full { 5 } else { 4 };
    for w in step_samples(rng, 3) {
        for k in 1..=kmax {
            let total = normalization_check(k, &w)?;
            if !total.is_one() {
                return Ok((false, format!("k={k}: total {total}")));
            }
        }
    }
    Ok((true, format!("k <= {kmax}")))
}

fn wk_densities(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 3..=4 {
        let ctx = context(k)?;
        for _ in 0..2 {
            let p = random_params(&ctx, rng);
            let w = build(&ctx, &p)?;
            let symbolic = densities_at(&ctx, &p)?;
            for (t, d) in ctx.lyndon_seq().iter().zip(&symbolic) {
                if density(t, &w)? != *d {
                    return Ok((false, format!("k={k}: symbolic density of {t} disagrees")));
                }
            }
        }
    }
    Ok((true, "k in {3, 4}".into()))
}

fn certification(level: Level, seed: u64) -> Outcome {
    let kmax = if level == Level::Full { 5 } else { 4 };
    let mut dets = Vec::new();
    for k in 3..=kmax {
        let cert = certify_det_nonzero(&context(k)?, 10, seed)?;
        dets.push(if cert.det.is_zero() { "0".to_string() } else { "nonzero".to_string() });
    }
    Ok((dets.iter().all(|d| d == "nonzero"), format!("k=3..={kmax}: {dets:?}")))
}

fn leading_coefficients() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in 3..=4 {
        let ctx = context(k)?;
        let c = leading_monomial_coefficient(&ctx)?;
        let mut expected = num_bigint::BigInt::one();
        for t in ctx.lyndon_seq() {
            expected *= t.len() as u64 * t.automorphism_count()?;
        }
        ok &= !c.is_zero() && c == crate::rational::Rational::from_integer(expected);
        parts.push(format!("k={k}: {c}"));
    }
    Ok((ok, parts.join(", ")))
}

fn round_trips(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for (k, draws) in [(3, 3), (4, 2)] {
        let ctx = context(k)?;
        for _ in 0..draws {
            let p = perturbed_defaults(&ctx, rng);
            let x = target_densities(&ctx, &p)?;
            let rep = solve(&ctx, &x, &SolveOptions { fixed_t: Some(p.t.clone()), ..Default::default() })?;
            if !rep.converged() {
                return Ok((false, format!("k={k}: {:?}", rep.status)));
            }
            worst = worst.max(rep.residual);
        }
    }
    Ok((worst <= 1e-8, format!("worst residual {worst:.3e}")))
}

/// Runs the suite; every check uses its own generator derived from `seed`.
pub fn run(level: Level, seed: u64) -> Vec<Check> {
    let rng = |salt: u64| ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    vec![
        timed("class-counts", class_counts),
        timed("canonical-invariance", || canonical_invariance(&mut rng(1))),
        timed("cfl-factorization", || cfl(&mut rng(2))),
        timed("dimension", || dimensions(level)),
        timed("express-vs-density", || express_matches_density(level, &mut rng(3))),
        timed("product-identity", || products(&mut rng(4))),
        timed("normalization", || normalization(level, &mut rng(5))),
        timed("wk-symbolic-density", || wk_densities(&mut rng(6))),
        timed("det-certification", || certification(level, seed)),
        timed("leading-coefficient", leading_coefficients),
        timed("newton-round-trip", || round_trips(&mut rng(7))),
    ]
}
