//! The blow-up family `W_k(s, t)`.
//!
//! With `T_1, …, T_ℓ` the non-trivial Lyndon tournaments on at most `k`
//! vertices in decreasing word order, `W_k` blows vertex `j` of `T_i` up to a
//! transitive interval of measure `s_i·t_{i,j}`, arranges the intervals like
//! `T_1 ⊕ … ⊕ T_ℓ`, and puts the remaining mass in a final transitive
//! interval beaten by everything else. Densities of the `T_i` are then
//! polynomials in the `s`- and `t`-variables, summed over the maps of
//! [`homomorphism_set`].

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poly::{det_rational, derivative_coeffs, horner, Monomial, Point, Polynomial, VarId};
use crate::rational::{factorial, format_rational, ratio, Rational};
use crate::tournamentons::{Block, Diagonal, StepTournamenton};
use crate::tournaments::{direct_sum, Tournament};
use crate::words::{lyndon_sequence, TieBreak, Word};

pub const MIN_K: usize = 3;
pub const MAX_K: usize = 5;
/// Largest `k` for the full symbolic determinant routines.
pub const MAX_SYMBOLIC_DET_K: usize = 4;

/// The data defining `W_k`: the Lyndon sequence, vertex counts and the
/// host tournament `T_1 ⊕ … ⊕ T_ℓ`.
#[derive(Debug)]
pub struct WkContext {
    k: usize,
    words: Vec<Word>,
    lyndon: Vec<Tournament>,
    offsets: Vec<usize>,
    host: Tournament,
    densities: Vec<OnceLock<Polynomial>>,
}

impl WkContext {
    pub fn new(k: usize) -> Result<Self> {
        if !(MIN_K..=MAX_K).contains(&k) {
            return Err(Error::Domain(format!("W_k is defined here for {MIN_K} <= k <= {MAX_K}, got {k}")));
        }
        let seq = lyndon_sequence(k, TieBreak::Ascending)?;
        let (words, lyndon): (Vec<Word>, Vec<Tournament>) = seq.into_iter().unzip();
        let mut offsets = Vec::with_capacity(lyndon.len());
        let mut acc = 0;
        for t in &lyndon {
            offsets.push(acc);
            acc += t.len();
        }
        let host = direct_sum(&lyndon);
        let densities = (0..lyndon.len()).map(|_| OnceLock::new()).collect();
        Ok(WkContext { k, words, lyndon, offsets, host, densities })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `ℓ`, the number of non-trivial Lyndon tournaments on at most `k` vertices.
    pub fn ell(&self) -> usize {
        self.lyndon.len()
    }

    pub fn lyndon_seq(&self) -> &[Tournament] {
        &self.lyndon
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.lyndon.iter().map(Tournament::len).collect()
    }

    /// `N = Σ n_i`, the number of `t`-variables.
    pub fn total_vertices(&self) -> usize {
        self.host.len()
    }

    pub fn host(&self) -> &Tournament {
        &self.host
    }

    /// `(i, j)` for host vertex `v`, i.e. vertex `j` of `T_i`.
    pub fn owner(&self, v: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= v) - 1;
        (i, v - self.offsets[i])
    }

    pub fn t_vars(&self) -> Vec<VarId> {
        (0..self.host.len()).map(|v| {
            let (i, j) = self.owner(v);
            VarId::T(i, j)
        }).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            word: String,
            tournament: String,
            size: usize,
            automorphisms: u64,
        }
        #[derive(Serialize)]
        struct Out {
            k: usize,
            ell: usize,
            #[serde(rename = "N")]
            n: usize,
            tournaments: Vec<Entry>,
        }
        serde_json::to_value(Out {
            k: self.k,
            ell: self.ell(),
            n: self.total_vertices(),
            tournaments: self
                .words
                .iter()
                .zip(&self.lyndon)
                .map(|(w, t)| Entry {
                    word: w.pretty(),
                    tournament: t.encode(),
                    size: t.len(),
                    automorphisms: t.automorphism_count().expect("Lyndon tournaments are small"),
                })
                .collect(),
        })
        .expect("contexts are serializable")
    }
}

pub fn context(k: usize) -> Result<WkContext> {
    WkContext::new(k)
}

/// Parameters `s_1..s_ℓ` and `t_{i,1..n_i}` of `W_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WkParams {
    #[serde(with = "crate::rational::serde_string_vec")]
    pub s: Vec<Rational>,
    #[serde(with = "crate::rational::serde_string_mat")]
    pub t: Vec<Vec<Rational>>,
}

impl WkParams {
    /// Shape, positivity and `Σ_i s_i Σ_j t_{i,j} < 1`.
    pub fn validate(&self, ctx: &WkContext) -> Result<()> {
        let sizes = ctx.sizes();
        if self.s.len() != sizes.len() || self.t.len() != sizes.len() {
            return Err(Error::Domain(format!("expected {} s-values and t-rows", sizes.len())));
        }
        for (i, row) in self.t.iter().enumerate() {
            if row.len() != sizes[i] {
                return Err(Error::Domain(format!("t-row {} needs {} values, got {}", i + 1, sizes[i], row.len())));
            }
        }
        if self.s.iter().chain(self.t.iter().flatten()).any(|x| *x <= Rational::zero()) {
            return Err(Error::Domain("all parameters must be positive".into()));
        }
        if self.used_mass() >= Rational::one() {
            return Err(Error::Domain(format!(
                "domain violation: sum of s_i * sum_j t_ij = {} >= 1",
                self.used_mass()
            )));
        }
        Ok(())
    }

    /// `Σ_i s_i Σ_j t_{i,j}`.
    pub fn used_mass(&self) -> Rational {
        self.s.iter().zip(&self.t).map(|(s, row)| s * row.iter().sum::<Rational>()).sum()
    }

    pub fn to_point(&self) -> Point {
        let mut point = Point::new();
        for (i, s) in self.s.iter().enumerate() {
            point.insert(VarId::S(i), s.clone());
        }
        for (i, row) in self.t.iter().enumerate() {
            for (j, t) in row.iter().enumerate() {
                point.insert(VarId::T(i, j), t.clone());
            }
        }
        point
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("parameters are serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("parameter JSON: {e}")))
    }
}

/// Random parameters inside the domain: `t_{i,j} = p/q` with `1 ≤ p ≤ q ≤ 16`
/// and `s_i = p/(16·ℓ·n_i)` with `1 ≤ p ≤ 16`, redrawn until the mass is below one.
pub fn random_params<R: Rng + ?Sized>(ctx: &WkContext, rng: &mut R) -> WkParams {
    let ell = ctx.ell() as i64;
    loop {
        let t: Vec<Vec<Rational>> = ctx
            .sizes()
            .iter()
            .map(|&n| {
                (0..n)
                    .map(|_| {
                        let q = rng.random_range(1..=16);
                        ratio(rng.random_range(1..=q), q)
                    })
                    .collect()
            })
            .collect();
        let s = ctx.sizes().iter().map(|&n| ratio(rng.random_range(1..=16), 16 * ell * n as i64)).collect();
        let params = WkParams { s, t };
        if params.validate(ctx).is_ok() {
            return params;
        }
    }
}

/// `W_k(s, t)` as a step tournamenton: blocks `I_{1,1}, …, I_{ℓ,n_ℓ}, I_0`.
pub fn build(ctx: &WkContext, p: &WkParams) -> Result<StepTournamenton> {
    p.validate(ctx)?;
    let n = ctx.total_vertices();
    let mut blocks: Vec<Block> = (0..n)
        .map(|v| {
            let (i, j) = ctx.owner(v);
            Block::new(&p.s[i] * &p.t[i][j], Diagonal::Transitive)
        })
        .collect();
    blocks.push(Block::new(Rational::one() - p.used_mass(), Diagonal::Transitive));
    let one = Rational::one();
    let zero = Rational::zero();
    let cross = (0..=n)
        .map(|b| {
            (0..=n)
                .map(|c| {
                    if b == c {
                        ratio(1, 2)
                    } else if b == n {
                        zero.clone()
                    } else if c == n || ctx.host.beats(b, c) {
                        one.clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    StepTournamenton::new(blocks, cross)
}

// ---------------------------------------------------------------------------
// Homomorphism sets

/// Visits every map `f: V(t) → V(host)` such that each preimage induces an
/// acyclic subtournament of `t` and every edge `u → v` of `t` has
/// `f(u) = f(v)` or `f(u) → f(v)` in `host`.
pub fn for_each_homomorphism(
    t: &Tournament,
    host: &Tournament,
    budget: &Budget,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    let mut map = Vec::with_capacity(t.len());
    let mut preimage = vec![0u64; host.len()];
    let mut count = 0u64;
    hom_descend(t, host, budget, &mut map, &mut preimage, &mut count, &mut visit)?;
    Ok(count)
}

fn hom_descend(
    t: &Tournament,
    host: &Tournament,
    budget: &Budget,
    map: &mut Vec<usize>,
    preimage: &mut [u64],
    count: &mut u64,
    visit: &mut impl FnMut(&[usize]),
) -> Result<()> {
    let v = map.len();
    if v == t.len() {
        *count += 1;
        if *count % 4096 == 0 {
            budget.check(*count, "homomorphism enumeration")?;
        }
        visit(map);
        return Ok(());
    }
    for h in 0..host.len() {
        let compatible = map.iter().enumerate().all(|(u, &fu)| {
            fu == h || (t.beats(u, v) == host.beats(fu, h))
        });
        if !compatible {
            continue;
        }
        let grown = preimage[h] | 1 << v;
        if !t.is_acyclic_on(grown) {
            continue;
        }
        let saved = preimage[h];
        preimage[h] = grown;
        map.push(h);
        hom_descend(t, host, budget, map, preimage, count, visit)?;
        map.pop();
        preimage[h] = saved;
    }
    Ok(())
}

/// All maps of [`for_each_homomorphism`], collected.
pub fn homomorphism_set(t: &Tournament, host: &Tournament) -> Result<Vec<Vec<usize>>> {
    homomorphism_set_with_budget(t, host, &Budget::unlimited().with_max_items(50_000_000))
}

pub fn homomorphism_set_with_budget(t: &Tournament, host: &Tournament, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    if t.len() > MAX_K {
        return Err(Error::BudgetExceeded(format!("patterns are limited to {MAX_K} vertices, got {}", t.len())));
    }
    let mut maps = Vec::new();
    for_each_homomorphism(t, host, budget, |m| maps.push(m.to_vec()))?;
    Ok(maps)
}

// ---------------------------------------------------------------------------
// Symbolic densities

impl WkContext {
    /// `t(T_i, W_k)` as a polynomial:
    /// `Σ_f Π_v (s_{i(v)} t_v)^{|f⁻¹(v)|} / |f⁻¹(v)|!` over the homomorphism set.
    pub fn symbolic_density(&self, i: usize) -> Result<Polynomial> {
        self.symbolic_density_with_budget(i, &Budget::unlimited())
    }

    pub fn symbolic_density_with_budget(&self, i: usize, budget: &Budget) -> Result<Polynomial> {
        if i >= self.ell() {
            return Err(Error::Domain(format!("index {i} out of range for ell = {}", self.ell())));
        }
        if let Some(p) = self.densities[i].get() {
            return Ok(p.clone());
        }
        let p = self.compute_symbolic_density(i, budget)?;
        Ok(self.densities[i].get_or_init(|| p).clone())
    }

    fn compute_symbolic_density(&self, i: usize, budget: &Budget) -> Result<Polynomial> {
        let t = &self.lyndon[i];
        let n = t.len();
        let inv_fact: Vec<Rational> = (0..=n).map(|c| Rational::from_integer(factorial(c)).recip()).collect();
        // accumulate by the multiset of preimage sizes
        let mut acc: HashMap<Vec<(u8, u8)>, Rational> = HashMap::new();
        let mut counts = vec![0u8; self.host.len()];
        for_each_homomorphism(t, &self.host, budget, |map| {
            for &h in map {
                counts[h] += 1;
            }
            let mut key = Vec::with_capacity(n);
            let mut coeff = Rational::one();
            for &h in map {
                if counts[h] > 0 {
                    key.push((h as u8, counts[h]));
                    coeff *= &inv_fact[counts[h] as usize];
                    counts[h] = 0;
                }
            }
            key.sort_unstable();
            *acc.entry(key).or_insert_with(Rational::zero) += coeff;
        })?;
        let mut p = Polynomial::zero();
        for (key, c) in acc {
            let powers = key.iter().flat_map(|&(h, e)| {
                let (a, b) = self.owner(h as usize);
                [(VarId::S(a), e as u32), (VarId::T(a, b), e as u32)]
            });
            p.add_term(Monomial::from_powers(powers), c);
        }
        Ok(p)
    }

    /// Computes every symbolic density up front under one budget.
    pub fn prepare(&self, budget: &Budget) -> Result<()> {
        (0..self.ell()).into_par_iter().try_for_each(|i| self.symbolic_density_with_budget(i, budget).map(drop))
    }
}

/// `∂ t(T_i, W_k) / ∂ s_j` at `p`, exactly: restrict the density to a
/// univariate polynomial in `s_j`, differentiate, evaluate.
pub fn jacobian_at(ctx: &WkContext, p: &WkParams) -> Result<Vec<Vec<Rational>>> {
    p.validate(ctx)?;
    jacobian_at_unchecked(ctx, p)
}

/// [`jacobian_at`] without the domain check.
pub fn jacobian_at_unchecked(ctx: &WkContext, p: &WkParams) -> Result<Vec<Vec<Rational>>> {
    let ell = ctx.ell();
    let densities = (0..ell).map(|i| ctx.symbolic_density(i)).collect::<Result<Vec<_>>>()?;
    let point = p.to_point();
    (0..ell)
        .into_par_iter()
        .map(|i| {
            (0..ell)
                .map(|j| {
                    let coeffs = densities[i].restrict_univariate(&VarId::S(j), &point)?;
                    Ok(horner(&derivative_coeffs(&coeffs), &p.s[j]))
                })
                .collect()
        })
        .collect()
}

/// The Jacobian with respect to the `s`-variables as polynomials.
pub fn symbolic_jacobian(ctx: &WkContext) -> Result<Vec<Vec<Polynomial>>> {
    (0..ctx.ell())
        .map(|i| {
            let d = ctx.symbolic_density(i)?;
            Ok((0..ctx.ell()).map(|j| d.partial_derivative(&VarId::S(j))).collect())
        })
        .collect()
}

/// Exact densities `t(T_i, W_k(p))` from the symbolic polynomials.
pub fn densities_at(ctx: &WkContext, p: &WkParams) -> Result<Vec<Rational>> {
    let point = p.to_point();
    (0..ctx.ell()).map(|i| ctx.symbolic_density(i)?.evaluate(&point)).collect()
}

/// A point where `det 𝕁` is non-zero, with the value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub point: WkParams,
    #[serde(with = "crate::rational::serde_string")]
    pub det: Rational,
}

/// Draws random rational points until the exact Jacobian determinant is
/// non-zero; fails as inconclusive if none of `trials` points succeeds.
pub fn certify_det_nonzero(ctx: &WkContext, trials: usize, seed: u64) -> Result<Certificate> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let point = random_params(ctx, &mut rng);
        let det = det_rational(&jacobian_at(ctx, &point)?);
        if !det.is_zero() {
            return Ok(Certificate { point, det });
        }
    }
    Err(Error::Inconclusive(format!(
        "det(J) vanished at all {trials} sampled points; this does not show it is the zero polynomial"
    )))
}

/// `Π_i s_i^{n_i−1} Π_{i,j} t_{i,j}`.
pub fn leading_monomial(ctx: &WkContext) -> Monomial {
    let sizes = ctx.sizes();
    let s_part = sizes.iter().enumerate().map(|(i, &n)| (VarId::S(i), n as u32 - 1));
    let t_part = ctx.t_vars().into_iter().map(|v| (v, 1));
    Monomial::from_powers(s_part.chain(t_part))
}

fn multilinear_in_t(m: &Monomial) -> bool {
    m.powers().iter().all(|(v, e)| !matches!(v, VarId::T(..)) || *e == 1)
}

fn check_symbolic_det_k(ctx: &WkContext) -> Result<()> {
    if ctx.k > MAX_SYMBOLIC_DET_K {
        return Err(Error::BudgetExceeded(format!(
            "symbolic determinant routines are limited to k <= {MAX_SYMBOLIC_DET_K}"
        )));
    }
    Ok(())
}

/// The part of `det 𝕁` whose monomials contain every `t`-variable, by full
/// Leibniz expansion. Products are truncated to `t`-multilinear monomials,
/// which is lossless here because the total `t`-degree equals the number
/// of `t`-variables.
pub fn det_full_t_part(ctx: &WkContext) -> Result<Polynomial> {
    check_symbolic_det_k(ctx)?;
    let jac = symbolic_jacobian(ctx)?;
    let ell = ctx.ell();
    let mut total = Polynomial::zero();
    for perm in permutations(ell) {
        let mut term = Polynomial::one();
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul_filtered(&jac[i][j], multilinear_in_t);
            if term.is_zero() {
                break;
            }
        }
        if permutation_sign(&perm) < 0 {
            total = &total - &term;
        } else {
            total = &total + &term;
        }
    }
    let n = ctx.total_vertices();
    total.retain(|m| m.powers().iter().filter(|(v, _)| matches!(v, VarId::T(..))).count() == n);
    Ok(total)
}

/// Coefficient of [`leading_monomial`] in `det 𝕁`, from the diagonal product
/// `Π_i 𝕁_{i,i}` restricted to `t`-multilinear terms.
pub fn leading_monomial_coefficient(ctx: &WkContext) -> Result<Rational> {
    check_symbolic_det_k(ctx)?;
    let target = leading_monomial(ctx);
    let mut product = Polynomial::one();
    for i in 0..ctx.ell() {
        let entry = ctx.symbolic_density(i)?.partial_derivative(&VarId::S(i));
        product = product.mul_filtered(&entry, multilinear_in_t);
    }
    Ok(product.coefficient(&target))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "point": self.point.to_json(), "det": format_rational(&self.det) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::tournamentons::density;

    fn k3_params(s: Rational) -> WkParams {
        WkParams { s: vec![s], t: vec![vec![ratio(1, 3); 3]] }
    }

    #[test]
    fn contexts() {
        let c4 = context(4).unwrap();
        assert_eq!(c4.ell(), 3);
        let words: Vec<String> = c4.words().iter().map(Word::pretty).collect();
        assert_eq!(words, vec!["c", "b", "ab"]);
        assert_eq!(c4.total_vertices(), 11);
        let c3 = context(3).unwrap();
        assert_eq!((c3.ell(), c3.total_vertices()), (1, 3));
        let c5 = context(5).unwrap();
        assert_eq!((c5.ell(), c5.total_vertices()), (11, 51));
        assert!(context(2).is_err());
        assert!(context(6).is_err());
        assert_eq!(c4.owner(0), (0, 0));
        assert_eq!(c4.owner(4), (1, 0));
        assert_eq!(c4.owner(10), (2, 3));
        for k in 3..=5 {
            assert!(context(k).unwrap().lyndon_seq().iter().all(|t| !t.has_sink()));
        }
    }

    #[test]
    fn building() {
        let c3 = context(3).unwrap();
        let w = build(&c3, &k3_params(ratio(1, 2))).unwrap();
        let measures: Vec<Rational> = w.blocks().iter().map(|b| b.measure.clone()).collect();
        assert_eq!(measures, vec![ratio(1, 6), ratio(1, 6), ratio(1, 6), ratio(1, 2)]);
        assert!(w.blocks().iter().all(|b| b.diagonal == Diagonal::Transitive));
        let c3t = Tournament::cyclic_triangle();
        for b in 0..3 {
            for c in 0..3 {
                if b != c {
                    assert_eq!(w.cross(b, c).is_one(), c3t.beats(b, c));
                }
            }
            assert!(w.cross(b, 3).is_one());
        }
        assert!(build(&c3, &k3_params(int(3))).is_err());
        assert!(build(&c3, &k3_params(int(0))).is_err());
        assert!(build(&c3, &WkParams { s: vec![], t: vec![] }).is_err());
    }

    #[test]
    fn homomorphism_sets() {
        let c3 = Tournament::cyclic_triangle();
        assert_eq!(homomorphism_set(&c3, &c3).unwrap().len(), 3);
        let host = context(4).unwrap().host().clone();
        assert_eq!(homomorphism_set(&Tournament::single_vertex(), &host).unwrap().len(), host.len());
    }

    #[test]
    fn k3_symbolic_density() {
        let c3 = context(3).unwrap();
        let p = c3.symbolic_density(0).unwrap();
        let m = Monomial::from_powers([
            (VarId::S(0), 3),
            (VarId::T(0, 0), 1),
            (VarId::T(0, 1), 1),
            (VarId::T(0, 2), 1),
        ]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&m), int(3));
        let w = build(&c3, &WkParams { s: vec![int(1)], t: vec![vec![ratio(1, 4); 3]] }).unwrap();
        assert_eq!(density(&Tournament::cyclic_triangle(), &w).unwrap(), ratio(3, 64));
    }

    #[test]
    fn k3_jacobian_and_certificate() {
        let c3 = context(3).unwrap();
        let j = jacobian_at(&c3, &k3_params(ratio(1, 2))).unwrap();
        assert_eq!(j, vec![vec![ratio(1, 12)]]);
        let cert = certify_det_nonzero(&c3, 5, 1).unwrap();
        assert!(!cert.det.is_zero());
        assert_eq!(leading_monomial_coefficient(&c3).unwrap(), int(9));
        let full = det_full_t_part(&c3).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full.coefficient(&leading_monomial(&c3)), int(9));
        assert!(certify_det_nonzero(&c3, 0, 1).is_err());
    }

    #[test]
    fn params_json() {
        let p = k3_params(ratio(1, 2));
        assert_eq!(p.to_json().to_string(), r#"{"s":["1/2"],"t":[["1/3","1/3","1/3"]]}"#);
        assert_eq!(WkParams::from_json(&p.to_json()).unwrap(), p);
        assert!(WkParams::from_json(&serde_json::json!({"s": ["x"], "t": []})).is_err());
    }
}
