//! Sparse multivariate polynomials over exact rationals, and exact
//! determinants of rational matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

/// A polynomial variable.
///
/// `S(i)` and `T(i, j)` are zero-based and render one-based (`s1`, `t1,2`);
/// `X` is indexed by a tournament encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    S(usize),
    T(usize, usize),
    X(String),
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::S(i) => write!(f, "s{}", i + 1),
            VarId::T(i, j) => write!(f, "t{},{}", i + 1, j + 1),
            VarId::X(enc) => f.write_str(enc),
        }
    }
}

impl VarId {
    pub fn parse(text: &str) -> Result<VarId> {
        let bad = || Error::Parse(format!("invalid variable name {text:?}"));
        let one_based = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| bad())?;
            v.checked_sub(1).ok_or_else(bad)
        };
        if text.contains(':') {
            return Ok(VarId::X(text.to_string()));
        }
        if let Some(rest) = text.strip_prefix('s') {
            return Ok(VarId::S(one_based(rest)?));
        }
        if let Some(rest) = text.strip_prefix('t') {
            let (i, j) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(VarId::T(one_based(i)?, one_based(j)?));
        }
        Err(bad())
    }
}

/// Product of variable powers; sorted by variable, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn powers(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: &VarId) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn without(&self, v: &VarId) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| w != v).cloned().collect())
    }
}

/// Evaluation point: a value for each variable.
pub type Point = BTreeMap<VarId, Rational>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: VarId) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial(vec![(v, 1)]), Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials with non-zero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c·m`, pruning a resulting zero coefficient.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Product keeping only monomials accepted by `keep`. Sound as a
    /// truncation whenever rejected monomials can never divide a wanted one.
    pub fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if keep(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn retain(&mut self, keep: impl Fn(&Monomial) -> bool) {
        self.terms.retain(|m, _| keep(m));
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn degree_in(&self, v: &VarId) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn partial_derivative(&self, v: &VarId) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e == 0 {
                continue;
            }
            let rest = m.without(v);
            let lowered = if e > 1 { rest.mul(&Monomial(vec![(v.clone(), e - 1)])) } else { rest };
            out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact value at `point`, which must bind every variable of `self`.
    pub fn evaluate(&self, point: &Point) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in &m.0 {
                let x = point.get(v).ok_or_else(|| Error::MissingBinding(v.to_string()))?;
                term *= num_traits::pow(x.clone(), *e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn evaluate_f64(&self, point: &BTreeMap<VarId, f64>) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut term = to_f64(c);
            for (v, e) in &m.0 {
                let x = point.get(v).ok_or_else(|| Error::MissingBinding(v.to_string()))?;
                term *= x.powi(*e as i32);
            }
            total += term;
        }
        Ok(total)
    }

    /// Coefficients `[c0, c1, …]` of the univariate polynomial in `v`
    /// obtained by binding every other variable from `others`.
    pub fn restrict_univariate(&self, v: &VarId, others: &Point) -> Result<Vec<Rational>> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut term = c.clone();
            let mut e_v = 0;
            for (w, e) in &m.0 {
                if w == v {
                    e_v = *e as usize;
                    continue;
                }
                let x = others.get(w).ok_or_else(|| Error::MissingBinding(w.to_string()))?;
                term *= num_traits::pow(x.clone(), *e as usize);
            }
            coeffs[e_v] += term;
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Ok(coeffs)
    }

    /// Total degrees of the variables selected by each class, when every
    /// monomial has the same degree profile.
    pub fn uniform_degrees<const K: usize>(&self, class_of: impl Fn(&VarId) -> Option<usize>) -> Option<[u32; K]> {
        let mut seen: Option<[u32; K]> = None;
        for m in self.terms.keys() {
            let mut d = [0u32; K];
            for (v, e) in &m.0 {
                if let Some(c) = class_of(v) {
                    d[c] += e;
                }
            }
            match seen {
                None => seen = Some(d),
                Some(prev) if prev != d => return None,
                Some(_) => {}
            }
        }
        seen
    }

    /// `(s-degree, t-degree)` when uniform across monomials.
    pub fn st_degrees(&self) -> Option<(u32, u32)> {
        self.uniform_degrees::<2>(|v| match v {
            VarId::S(_) => Some(0),
            VarId::T(..) => Some(1),
            VarId::X(_) => None,
        })
        .map(|[s, t]| (s, t))
    }

    /// `[{"monomial": [{"var": …, "exp": …}], "coeff": "p/q"}, …]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.json_terms()).expect("polynomials are serializable")
    }

    fn json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(m, c)| JsonTerm {
                monomial: m.0.iter().map(|(v, e)| JsonPower { var: v.to_string(), exp: *e }).collect(),
                coeff: format_rational(c),
            })
            .collect()
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Polynomial> {
        let terms: Vec<JsonTerm> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
        let mut p = Polynomial::zero();
        for term in terms {
            let powers = term
                .monomial
                .iter()
                .map(|pw| VarId::parse(&pw.var).map(|v| (v, pw.exp)))
                .collect::<Result<Vec<_>>>()?;
            p.add_term(Monomial::from_powers(powers), parse_rational(&term.coeff)?);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPower {
    var: String,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    monomial: Vec<JsonPower>,
    coeff: String,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.json_terms().serialize(s)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if k == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|(v, e)| if *e == 1 { format!("[{v}]") } else { format!("[{v}]^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_filtered(rhs, |_| true)
    }
}

/// Univariate polynomial `c0 + c1 x + …` at `x`.
pub fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Formal derivative of univariate coefficients.
pub fn derivative_coeffs(coeffs: &[Rational]) -> Vec<Rational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination, after clearing
/// the denominators of each row.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Rational::new(sign * &a[n - 1][n - 1], scale)
}
