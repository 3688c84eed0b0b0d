//! Formal rational combinations of tournaments, the flag product, and the
//! expression of every tournament density as a polynomial in the densities
//! of non-trivial Lyndon tournaments.
//!
//! The expression is built by induction along the tournament order: a
//! non-Lyndon `T` is the leading term of the product of its Lyndon factors,
//! and every other term of that product is smaller than `T`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Point, Polynomial, VarId};
use crate::rational::{format_rational, Rational};
use crate::tournamentons::{density, StepTournamenton};
use crate::tournaments::Tournament;
use crate::words::{enumerate_lyndon, is_lyndon_tournament, tournament_of, word_of};

/// Largest total vertex count of a product.
pub const MAX_PRODUCT_VERTICES: usize = 7;
/// Largest tournament accepted by [`express`] and [`lemma_reduce`].
pub const MAX_EXPRESS_VERTICES: usize = 6;

/// Rational combination of canonical tournaments, zero terms pruned.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinComb {
    terms: BTreeMap<Tournament, Rational>,
}

impl LinComb {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: &Tournament) -> Self {
        let mut c = Self::zero();
        c.add_term(t, Rational::one());
        c
    }

    /// Adds `c·t`, canonicalizing `t`.
    pub fn add_term(&mut self, t: &Tournament, c: Rational) {
        let key = t.canonicalize();
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, t: &Tournament) -> Rational {
        self.terms.get(&t.canonicalize()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tournament, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients.
    pub fn total(&self) -> Rational {
        self.terms.values().sum()
    }

    /// `t(τ, W) = Σ c_S t(S, W)`.
    pub fn density(&self, w: &StepTournamenton) -> Result<Rational> {
        let mut total = Rational::zero();
        for (t, c) in &self.terms {
            total += c * density(t, w)?;
        }
        Ok(total)
    }

    /// Product with a single tournament, extended linearly.
    pub fn times(&self, t: &Tournament) -> Result<LinComb> {
        let mut out = LinComb::zero();
        for (s, c) in &self.terms {
            for (u, d) in &product(s, t)?.terms {
                *out.terms.entry(u.clone()).or_insert_with(Rational::zero) += c * d;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `[{"tournament": …, "coeff": "p/q"}, …]`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            tournament: String,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(t, c)| Term { tournament: t.encode(), coeff: format_rational(c) })
            .collect();
        serde_json::to_value(terms).expect("combinations are serializable")
    }
}

type ProductCache = Mutex<HashMap<(Tournament, Tournament), LinComb>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Flag product: every way of orienting the cross edges between `t1` and
/// `t2`, bucketed by isomorphism class.
pub fn product(t1: &Tournament, t2: &Tournament) -> Result<LinComb> {
    let (n1, n2) = (t1.len(), t2.len());
    if n1 + n2 > MAX_PRODUCT_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "products are limited to {MAX_PRODUCT_VERTICES} vertices in total, got {}",
            n1 + n2
        )));
    }
    let key = (t1.canonicalize(), t2.canonicalize());
    if let Some(hit) = product_cache().lock().expect("product cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let (a, b) = (&key.0, &key.1);
    let mut counts: BTreeMap<Tournament, u64> = BTreeMap::new();
    for mask in 0u64..1 << (n1 * n2) {
        let joined = Tournament::from_fn(n1 + n2, |i, j| match (i < n1, j < n1) {
            (true, true) => a.beats(i, j),
            (false, false) => b.beats(i - n1, j - n1),
            // i in the first part, j in the second
            _ => mask >> (i * n2 + (j - n1)) & 1 == 1,
        });
        *counts.entry(joined.canonicalize()).or_insert(0) += 1;
    }
    let result = LinComb {
        terms: counts.into_iter().map(|(t, c)| (t, Rational::from_integer(c.into()))).collect(),
    };
    product_cache().lock().expect("product cache poisoned").insert(key, result.clone());
    Ok(result)
}

/// Left fold of [`product`]; associative and commutative.
pub fn multi_product(parts: &[Tournament]) -> Result<LinComb> {
    let Some((first, rest)) = parts.split_first() else {
        return Err(Error::Domain("product of no tournaments".into()));
    };
    let total: usize = parts.iter().map(Tournament::len).sum();
    if total > MAX_PRODUCT_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "products are limited to {MAX_PRODUCT_VERTICES} vertices in total, got {total}"
        )));
    }
    rest.iter().try_fold(LinComb::single(first), |acc, t| acc.times(t))
}

/// `t(T,W) = γ·Π t(T_i,W) + Σ α_S t(S,W)` with `T_1 ⊕ … ⊕ T_ℓ` the
/// Lyndon factorization of `T` and every `S` smaller than `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Lyndon factors, canonical, in non-increasing word order.
    pub factors: Vec<Tournament>,
    pub gamma: Rational,
    pub alphas: BTreeMap<Tournament, Rational>,
}

impl Reduction {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Alpha {
            tournament: String,
            coeff: String,
        }
        #[derive(Serialize)]
        struct Out {
            factors: Vec<String>,
            gamma: String,
            alphas: Vec<Alpha>,
        }
        serde_json::to_value(Out {
            factors: self.factors.iter().map(Tournament::encode).collect(),
            gamma: format_rational(&self.gamma),
            alphas: self
                .alphas
                .iter()
                .map(|(t, c)| Alpha { tournament: t.encode(), coeff: format_rational(c) })
                .collect(),
        })
        .expect("reductions are serializable")
    }
}

fn check_express_budget(t: &Tournament) -> Result<()> {
    if t.len() > MAX_EXPRESS_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "polynomial expressions are limited to {MAX_EXPRESS_VERTICES} vertices, got {}",
            t.len()
        )));
    }
    Ok(())
}

/// Lyndon factors of `t` as canonical tournaments.
pub fn lyndon_factors(t: &Tournament) -> Vec<Tournament> {
    word_of(t).factorize().iter().map(|w| tournament_of(w).canonicalize()).collect()
}

pub fn lemma_reduce(t: &Tournament) -> Result<Reduction> {
    check_express_budget(t)?;
    if is_lyndon_tournament(t) {
        return Err(Error::IsLyndon(t.encode()));
    }
    let target = t.canonicalize();
    let factors = lyndon_factors(&target);
    let beta = multi_product(&factors)?;
    let beta_t = beta.coefficient(&target);
    debug_assert!(!beta_t.is_zero(), "T occurs in the product of its factors");
    let gamma = beta_t.recip();
    let alphas = beta
        .terms()
        .filter(|(s, _)| **s != target)
        .map(|(s, c)| (s.clone(), -c / &beta_t))
        .collect();
    Ok(Reduction { factors, gamma, alphas })
}

/// Variable standing for the density of a Lyndon tournament.
pub fn lyndon_var(t: &Tournament) -> VarId {
    VarId::X(t.canonicalize().encode())
}

/// Memoized construction of the polynomials `p_T`.
#[derive(Debug, Default)]
pub struct Expressor {
    memo: HashMap<Tournament, Polynomial>,
}

impl Expressor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn express(&mut self, t: &Tournament) -> Result<Polynomial> {
        check_express_budget(t)?;
        let key = t.canonicalize();
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        let p = if key.len() == 1 {
            Polynomial::one()
        } else if is_lyndon_tournament(&key) {
            Polynomial::var(lyndon_var(&key))
        } else {
            let reduction = lemma_reduce(&key)?;
            let leading = Monomial::from_powers(
                reduction.factors.iter().filter(|f| f.len() > 1).map(|f| (lyndon_var(f), 1)),
            );
            let mut p = Polynomial::zero();
            p.add_term(leading, reduction.gamma.clone());
            for (s, alpha) in &reduction.alphas {
                let ps = self.express(s)?;
                p = &p + &ps.scale(alpha);
            }
            p
        };
        self.memo.insert(key, p.clone());
        Ok(p)
    }
}

/// The polynomial `p_T` in the densities of non-trivial Lyndon tournaments
/// on at most `|T|` vertices.
pub fn express(t: &Tournament) -> Result<Polynomial> {
    Expressor::new().express(t)
}

/// Number of non-trivial Lyndon tournaments on at most `k` vertices.
pub fn dimension(k: usize) -> Result<usize> {
    if !(2..=MAX_EXPRESS_VERTICES).contains(&k) {
        return Err(if k > MAX_EXPRESS_VERTICES {
            Error::BudgetExceeded(format!("dimension is limited to k <= {MAX_EXPRESS_VERTICES}, got {k}"))
        } else {
            Error::Domain(format!("dimension needs k >= 2, got {k}"))
        });
    }
    Ok(enumerate_lyndon(k)?.len())
}

/// Densities of the non-trivial Lyndon tournaments on at most `k` vertices,
/// keyed by their variables.
pub fn lyndon_densities(k: usize, w: &StepTournamenton) -> Result<Point> {
    if k < 2 {
        return Ok(Point::new());
    }
    enumerate_lyndon(k)?
        .iter()
        .map(|s| Ok((lyndon_var(s), density(s, w)?)))
        .collect()
}
