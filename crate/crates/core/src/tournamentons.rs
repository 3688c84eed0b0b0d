//! Step tournamentons: `[0,1]` split into blocks, constant on every pair of
//! distinct blocks, and either constant `1/2` or transitive (`W(x,y) = 1`
//! for `x < y`) inside a block.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, format_rational, parse_rational, ratio, to_f64, Rational};
use crate::tournaments::{classes, Tournament};

/// Largest pattern size for exact densities.
pub const MAX_DENSITY_VERTICES: usize = 6;
/// Largest `k` for [`normalization_check`].
pub const MAX_NORMALIZATION_K: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Diagonal {
    #[serde(rename = "half")]
    ConstantHalf,
    #[serde(rename = "transitive")]
    Transitive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub measure: Rational,
    pub diagonal: Diagonal,
}

impl Block {
    pub fn new(measure: Rational, diagonal: Diagonal) -> Self {
        Block { measure, diagonal }
    }
}

/// `cross[b][c]` is the value of `W` on block `b` × block `c`; diagonal
/// entries of `cross` are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTournamenton {
    blocks: Vec<Block>,
    cross: Vec<Vec<Rational>>,
}

impl StepTournamenton {
    /// Validated construction.
    pub fn new(blocks: Vec<Block>, cross: Vec<Vec<Rational>>) -> Result<Self> {
        let w = Self::new_unchecked(blocks, cross);
        w.validate()?;
        Ok(w)
    }

    pub fn new_unchecked(blocks: Vec<Block>, cross: Vec<Vec<Rational>>) -> Self {
        StepTournamenton { blocks, cross }
    }

    /// `W ≡ 1/2`.
    pub fn constant_half() -> Self {
        Self::single(Diagonal::ConstantHalf)
    }

    /// `W(x,y) = 1` for `x < y`.
    pub fn transitive() -> Self {
        Self::single(Diagonal::Transitive)
    }

    fn single(diagonal: Diagonal) -> Self {
        StepTournamenton { blocks: vec![Block::new(Rational::one(), diagonal)], cross: vec![vec![ratio(1, 2)]] }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn cross(&self, b: usize, c: usize) -> &Rational {
        &self.cross[b][c]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let k = self.blocks.len();
        if k == 0 {
            problems.push("no blocks".to_string());
        }
        if self.cross.len() != k || self.cross.iter().any(|row| row.len() != k) {
            problems.push(format!("cross matrix must be {k}x{k}"));
            return Err(Error::InvalidTournamenton(problems));
        }
        let mut total = Rational::zero();
        for (b, block) in self.blocks.iter().enumerate() {
            if block.measure <= Rational::zero() || block.measure > Rational::one() {
                problems.push(format!("block {b} measure {} outside (0,1]", block.measure));
            }
            total += &block.measure;
        }
        if total != Rational::one() {
            problems.push(format!("block measures sum to {total}, not 1"));
        }
        for b in 0..k {
            for c in 0..k {
                if b == c {
                    continue;
                }
                let f = &self.cross[b][c];
                if *f < Rational::zero() || *f > Rational::one() {
                    problems.push(format!("cross[{b}][{c}] = {f} outside [0,1]"));
                }
                if b < c && f + &self.cross[c][b] != Rational::one() {
                    problems.push(format!(
                        "cross[{b}][{c}] + cross[{c}][{b}] = {} + {} != 1",
                        f, self.cross[c][b]
                    ));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidTournamenton(problems))
        }
    }

    /// Splits block `b` into two equal halves with `W = 1/2` between them.
    /// Only meaningful for constant-half blocks.
    pub fn split_block(&self, b: usize) -> StepTournamenton {
        let half = &self.blocks[b].measure * ratio(1, 2);
        let mut blocks = self.blocks.clone();
        blocks[b].measure = half.clone();
        blocks.insert(b + 1, Block::new(half, self.blocks[b].diagonal));
        let origin = |i: usize| if i <= b { i } else { i - 1 };
        let k = blocks.len();
        let cross = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let (oi, oj) = (origin(i), origin(j));
                        if oi == oj {
                            ratio(1, 2)
                        } else {
                            self.cross[oi][oj].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        StepTournamenton { blocks, cross }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("tournamentons are serializable")
    }

    fn to_file(&self) -> TournamentonFile {
        TournamentonFile {
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockFile { measure: format_rational(&b.measure), diagonal: b.diagonal })
                .collect(),
            cross: self
                .cross
                .iter()
                .enumerate()
                .map(|(b, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(c, f)| if b == c { "1/2".to_string() } else { format_rational(f) })
                        .collect()
                })
                .collect(),
        }
    }

    /// Parses and validates the JSON file format.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: TournamentonFile =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("tournamenton JSON: {e}")))?;
        let blocks = file
            .blocks
            .iter()
            .map(|b| Ok(Block::new(parse_rational(&b.measure)?, b.diagonal)))
            .collect::<Result<Vec<_>>>()?;
        let cross = file
            .cross
            .iter()
            .map(|row| row.iter().map(|f| parse_rational(f)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks, cross)
    }
}

impl Serialize for StepTournamenton {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct BlockFile {
    measure: String,
    diagonal: Diagonal,
}

#[derive(Serialize, Deserialize)]
struct TournamentonFile {
    blocks: Vec<BlockFile>,
    cross: Vec<Vec<String>>,
}

pub fn validate(w: &StepTournamenton) -> Result<()> {
    w.validate()
}

// ---------------------------------------------------------------------------
// Exact densities

struct DensityEval<'a> {
    t: &'a Tournament,
    w: &'a StepTournamenton,
    /// `block_factor[b][c]`: contribution of `c` pattern vertices landing in block `b`.
    block_factor: Vec<Vec<Rational>>,
}

impl<'a> DensityEval<'a> {
    fn new(t: &'a Tournament, w: &'a StepTournamenton) -> Self {
        let n = t.len();
        let block_factor = w
            .blocks
            .iter()
            .map(|b| {
                (0..=n)
                    .map(|c| {
                        let power = num_traits::pow(b.measure.clone(), c);
                        match b.diagonal {
                            Diagonal::Transitive => power / Rational::from_integer(factorial(c)),
                            Diagonal::ConstantHalf => {
                                power / Rational::from_integer(num_traits::pow(BigInt::from(2), c * c.saturating_sub(1) / 2))
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        DensityEval { t, w, block_factor }
    }

    /// Sum over all completions of the partial map `assign[..v]`.
    fn descend(&self, v: usize, assign: &mut Vec<usize>, masks: &mut [u64], weight: Rational) -> Rational {
        let n = self.t.len();
        if v == n {
            let mut total = weight;
            for (b, &mask) in masks.iter().enumerate() {
                if mask != 0 {
                    total *= &self.block_factor[b][mask.count_ones() as usize];
                }
            }
            return total;
        }
        let mut sum = Rational::zero();
        for b in 0..self.w.blocks.len() {
            if let Some(next) = self.extend(v, b, assign, masks, &weight) {
                assign.push(b);
                masks[b] |= 1 << v;
                sum += self.descend(v + 1, assign, masks, next);
                masks[b] &= !(1 << v);
                assign.pop();
            }
        }
        sum
    }

    /// Weight after sending pattern vertex `v` to block `b`, or `None` when it vanishes.
    fn extend(&self, v: usize, b: usize, assign: &[usize], masks: &[u64], weight: &Rational) -> Option<Rational> {
        if self.w.blocks[b].diagonal == Diagonal::Transitive && !self.t.is_acyclic_on(masks[b] | 1 << v) {
            return None;
        }
        let mut next = weight.clone();
        for (u, &bu) in assign.iter().enumerate() {
            if bu == b {
                continue;
            }
            let f = if self.t.beats(u, v) { &self.w.cross[bu][b] } else { &self.w.cross[b][bu] };
            if f.is_zero() {
                return None;
            }
            if !f.is_one() {
                next *= f;
            }
        }
        Some(next)
    }
}

/// Exact density `t(T, W)`: the integral over `[0,1]^V(T)` of the product of
/// `W(x_u, x_v)` over edges `u → v`, evaluated block by block.
pub fn density(t: &Tournament, w: &StepTournamenton) -> Result<Rational> {
    if t.len() > MAX_DENSITY_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "exact densities are limited to {MAX_DENSITY_VERTICES}-vertex patterns, got {}",
            t.len()
        )));
    }
    w.validate()?;
    Ok(density_unchecked(t, w))
}

/// [`density`] without validation or size checks; also accepts block
/// measures that do not sum to one.
pub fn density_unchecked(t: &Tournament, w: &StepTournamenton) -> Rational {
    let eval = DensityEval::new(t, w);
    if t.is_empty() {
        return Rational::one();
    }
    (0..w.blocks.len())
        .into_par_iter()
        .map(|b| {
            let mut assign = Vec::with_capacity(t.len());
            let mut masks = vec![0u64; w.blocks.len()];
            match eval.extend(0, b, &assign, &masks, &Rational::one()) {
                Some(weight) => {
                    assign.push(b);
                    masks[b] = 1;
                    eval.descend(1, &mut assign, &mut masks, weight)
                }
                None => Rational::zero(),
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// `Σ_{|T|=k} (k!/|Aut(T)|)·t(T,W)`, which is exactly one for every tournamenton.
pub fn normalization_check(k: usize, w: &StepTournamenton) -> Result<Rational> {
    if k > MAX_NORMALIZATION_K {
        return Err(Error::BudgetExceeded(format!(
            "normalization check is limited to k <= {MAX_NORMALIZATION_K}, got {k}"
        )));
    }
    w.validate()?;
    let mut total = Rational::zero();
    for t in classes(k)? {
        let labelings = factorial(k) / BigInt::from(t.automorphism_count()?);
        total += Rational::from_integer(labelings) * density_unchecked(t, w);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Sampling

/// Float tables for drawing finite tournaments from a tournamenton.
#[derive(Clone, Debug)]
pub struct Sampler {
    cumulative: Vec<f64>,
    cross: Vec<Vec<f64>>,
    diagonal: Vec<Diagonal>,
}

impl Sampler {
    pub fn new(w: &StepTournamenton) -> Self {
        let mut acc = 0.0;
        let cumulative = w
            .blocks
            .iter()
            .map(|b| {
                acc += to_f64(&b.measure);
                acc
            })
            .collect();
        Sampler {
            cumulative,
            cross: w.cross.iter().map(|row| row.iter().map(to_f64).collect()).collect(),
            diagonal: w.blocks.iter().map(|b| b.diagonal).collect(),
        }
    }

    /// Draws `n` independent points and orients every pair according to `W`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Tournament {
        self.sample_with_blocks(rng, n).0
    }

    /// Like [`Sampler::sample`], also returning the block of every vertex.
    pub fn sample_with_blocks<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> (Tournament, Vec<usize>) {
        let last = self.cumulative.len() - 1;
        let points: Vec<(usize, f64)> = (0..n)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * self.cumulative[last];
                let b = self.cumulative.iter().position(|&c| u < c).unwrap_or(last);
                (b, rng.random::<f64>())
            })
            .collect();
        let t = Tournament::from_fn(n, |i, j| {
            let ((bi, xi), (bj, xj)) = (points[i], points[j]);
            if bi != bj {
                return rng.random::<f64>() < self.cross[bi][bj];
            }
            match self.diagonal[bi] {
                Diagonal::Transitive if xi != xj => xi < xj,
                _ => rng.random::<bool>(),
            }
        });
        (t, points.into_iter().map(|(b, _)| b).collect())
    }
}

/// One tournament on `n` vertices drawn from `W`, deterministic in `seed`.
pub fn sample(w: &StepTournamenton, n: usize, seed: u64) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Sampler::new(w).sample(&mut rng, n)
}

/// Random valid step tournamenton with 1..=`max_blocks` blocks and small
/// denominators.
pub fn random_step<R: Rng + ?Sized>(rng: &mut R, max_blocks: usize) -> StepTournamenton {
    let k = rng.random_range(1..=max_blocks.max(1));
    let weights: Vec<i64> = (0..k).map(|_| rng.random_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let blocks = weights
        .iter()
        .map(|&w| {
            let diagonal = if rng.random::<bool>() { Diagonal::Transitive } else { Diagonal::ConstantHalf };
            Block::new(ratio(w, total), diagonal)
        })
        .collect();
    let mut cross = vec![vec![ratio(1, 2); k]; k];
    for b in 0..k {
        for c in b + 1..k {
            let q = rng.random_range(1..=6);
            let p = rng.random_range(0..=q);
            cross[b][c] = ratio(p, q);
            cross[c][b] = ratio(q - p, q);
        }
    }
    StepTournamenton { blocks, cross }
}
