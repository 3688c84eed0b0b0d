//! Tournaments: encoding, canonical forms, enumeration of isomorphism
//! classes, strong components and direct sums.
//!
//! A tournament on `n` vertices is stored as one out-neighbourhood bitmask
//! per vertex, so `n` is limited to [`MAX_VERTICES`]. The text encoding
//! `"n:bits"` lists one bit per pair `(i, j)`, `i < j`, in the order
//! `(0,1), (0,2), …, (0,n−1), (1,2), …, (n−2,n−1)`; bit `1` means `i → j`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest vertex count representable.
pub const MAX_VERTICES: usize = 64;
/// Largest `n` for exhaustive enumeration and automorphism counting.
pub const MAX_ENUMERATION: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    out: Vec<u64>,
}

impl Tournament {
    /// Builds a tournament from a predicate answering "is the edge directed `i → j`?"
    /// for every pair `i < j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices are supported");
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    out[i] |= 1 << j;
                } else {
                    out[j] |= 1 << i;
                }
            }
        }
        Tournament { n, out }
    }

    pub fn single_vertex() -> Self {
        Self::from_fn(1, |_, _| true)
    }

    /// The transitive tournament with `i → j` for all `i < j`.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    /// `0 → 1 → 2 → 0`.
    pub fn cyclic_triangle() -> Self {
        Self::from_fn(3, |i, j| !(i == 0 && j == 2))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// True when the edge between distinct `i` and `j` is directed `i → j`.
    #[inline]
    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.out[i] >> j & 1 == 1
    }

    #[inline]
    pub fn out_mask(&self, v: usize) -> u64 {
        self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn scores(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.out_degree(v)).collect()
    }

    /// Pair bits in encoding order.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| self.beats(i, j)))
    }

    pub fn encode(&self) -> String {
        let mut s = format!("{}:", self.n);
        s.extend(self.bits().map(|b| if b { '1' } else { '0' }));
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (head, bits) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in tournament encoding {text:?}")))?;
        let n: usize = head
            .parse()
            .map_err(|_| Error::Parse(format!("malformed vertex count in {text:?}")))?;
        if n == 0 {
            return Err(Error::Parse("a tournament needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Parse(format!("at most {MAX_VERTICES} vertices are supported, got {n}")));
        }
        if let Some(c) = bits.chars().find(|c| *c != '0' && *c != '1') {
            return Err(Error::Parse(format!("illegal character {c:?} in {text:?}")));
        }
        let expected = n * (n - 1) / 2;
        if bits.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} bits for {n} vertices, found {}",
                bits.len()
            )));
        }
        let mut it = bits.bytes();
        Ok(Self::from_fn(n, |_, _| it.next() == Some(b'1')))
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut inverse = vec![0; self.n];
        for (v, &p) in perm.iter().enumerate() {
            inverse[p] = v;
        }
        Self::from_fn(self.n, |i, j| self.beats(inverse[i], inverse[j]))
    }

    /// Subtournament on `vertices`, which keep their listed order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        Self::from_fn(vertices.len(), |i, j| self.beats(vertices[i], vertices[j]))
    }

    /// True when the tournament has no directed cycle.
    pub fn is_transitive(&self) -> bool {
        let mut seen = 0u64;
        for v in 0..self.n {
            let d = self.out_degree(v);
            if seen >> d & 1 == 1 {
                return false;
            }
            seen |= 1 << d;
        }
        true
    }

    /// True when the vertices in `mask` induce an acyclic subtournament.
    pub fn is_acyclic_on(&self, mask: u64) -> bool {
        let mut seen = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.out[v] & mask).count_ones();
            if seen >> d & 1 == 1 {
                return false;
            }
            seen |= 1 << d;
        }
        true
    }

    /// A sink has no outgoing edge.
    pub fn has_sink(&self) -> bool {
        (0..self.n).any(|v| self.out[v] == 0)
    }

    /// JSON adjacency export: `{"n": …, "edges": [[i, j], …]}` with every directed edge `i → j`.
    pub fn adjacency_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Adjacency {
            n: usize,
            edges: Vec<[usize; 2]>,
        }
        let mut edges = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.beats(i, j) {
                    edges.push([i, j]);
                }
            }
        }
        serde_json::to_value(Adjacency { n: self.n, edges }).expect("adjacency is serializable")
    }
}

impl Ord for Tournament {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.bits().cmp(other.bits()))
    }
}

impl PartialOrd for Tournament {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({})", self.encode())
    }
}

impl FromStr for Tournament {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Tournament {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.encode())
    }
}

impl<'de> serde::Deserialize<'de> for Tournament {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Self::parse(&text).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Canonical form

/// Branch-and-bound search for the relabelling with the lexicographically
/// largest encoding.
///
/// Positions are filled left to right. The vertices not yet placed are kept
/// in an ordered partition; placing `v` at the next position splits every
/// cell into out-neighbours of `v` followed by the rest, which is exactly what
/// maximizes the encoding row of that position. Any optimal relabelling
/// respects this refinement, so the search visits all of them.
struct CanonSearch<'a> {
    t: &'a Tournament,
    best_code: Vec<bool>,
    best_order: Vec<usize>,
    optimal_leaves: usize,
}

impl CanonSearch<'_> {
    fn run(t: &Tournament) -> (Vec<usize>, usize) {
        let mut search = CanonSearch { t, best_code: Vec::new(), best_order: Vec::new(), optimal_leaves: 0 };
        let cells = if t.n == 0 { vec![] } else { vec![(0..t.n).collect::<Vec<_>>()] };
        let mut order = Vec::with_capacity(t.n);
        let mut code = Vec::with_capacity(t.n * t.n.saturating_sub(1) / 2);
        search.descend(&mut order, cells, &mut code);
        (search.best_order, search.optimal_leaves)
    }

    fn descend(&mut self, order: &mut Vec<usize>, cells: Vec<Vec<usize>>, code: &mut Vec<bool>) {
        let seen_leaf = self.optimal_leaves > 0;
        if seen_leaf && code.as_slice() < &self.best_code[..code.len()] {
            return;
        }
        if cells.is_empty() {
            if seen_leaf && *code == self.best_code {
                self.optimal_leaves += 1;
            } else {
                self.best_code = code.clone();
                self.best_order = order.clone();
                self.optimal_leaves = 1;
            }
            return;
        }
        let first = &cells[0];
        for (idx, &v) in first.iter().enumerate() {
            let mask = self.t.out_mask(v);
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
            let mark = code.len();
            for (c, cell) in cells.iter().enumerate() {
                let (mut wins, mut losses) = (Vec::new(), Vec::new());
                for (k, &u) in cell.iter().enumerate() {
                    if c == 0 && k == idx {
                        continue;
                    }
                    if mask >> u & 1 == 1 {
                        wins.push(u);
                    } else {
                        losses.push(u);
                    }
                }
                code.extend(std::iter::repeat_n(true, wins.len()));
                code.extend(std::iter::repeat_n(false, losses.len()));
                if !wins.is_empty() {
                    next.push(wins);
                }
                if !losses.is_empty() {
                    next.push(losses);
                }
            }
            order.push(v);
            self.descend(order, next, code);
            order.pop();
            code.truncate(mark);
        }
    }
}

impl Tournament {
    /// Relabelling with the lexicographically maximal encoding.
    pub fn canonicalize(&self) -> Tournament {
        let (order, _) = CanonSearch::run(self);
        self.induced(&order)
    }

    /// `order[p]` is the vertex of `self` placed at position `p` of the canonical form.
    pub fn canonical_order(&self) -> Vec<usize> {
        CanonSearch::run(self).0
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    pub fn is_isomorphic(&self, other: &Tournament) -> bool {
        self.n == other.n && self.scores_sorted() == other.scores_sorted() && self.canonicalize() == other.canonicalize()
    }

    fn scores_sorted(&self) -> Vec<usize> {
        let mut s = self.scores();
        s.sort_unstable();
        s
    }

    /// Number of vertex permutations preserving every edge.
    pub fn automorphism_count(&self) -> Result<u64> {
        if self.n > MAX_ENUMERATION {
            return Err(Error::BudgetExceeded(format!(
                "automorphism counting is limited to {MAX_ENUMERATION} vertices, got {}",
                self.n
            )));
        }
        let scores = self.scores();
        let mut image = vec![usize::MAX; self.n];
        let mut used = 0u64;
        Ok(self.count_automorphisms(0, &scores, &mut image, &mut used))
    }

    fn count_automorphisms(&self, v: usize, scores: &[usize], image: &mut [usize], used: &mut u64) -> u64 {
        if v == self.n {
            return 1;
        }
        let mut total = 0;
        for w in 0..self.n {
            if *used >> w & 1 == 1 || scores[w] != scores[v] {
                continue;
            }
            if (0..v).all(|u| self.beats(u, v) == self.beats(image[u], w)) {
                image[v] = w;
                *used |= 1 << w;
                total += self.count_automorphisms(v + 1, scores, image, used);
                *used &= !(1 << w);
            }
        }
        total
    }
}

pub fn canonicalize(t: &Tournament) -> Tournament {
    t.canonicalize()
}

pub fn are_isomorphic(s: &Tournament, t: &Tournament) -> bool {
    s.is_isomorphic(t)
}

pub fn automorphism_count(t: &Tournament) -> Result<u64> {
    t.automorphism_count()
}

// ---------------------------------------------------------------------------
// Enumeration

static CLASSES: [OnceLock<Vec<Tournament>>; MAX_ENUMERATION + 1] = [const { OnceLock::new() }; MAX_ENUMERATION + 1];

/// Canonical representatives of all isomorphism classes on `n` vertices,
/// sorted by encoding. Cached per `n`.
pub fn classes(n: usize) -> Result<&'static [Tournament]> {
    if n == 0 {
        return Err(Error::Domain("enumeration needs n >= 1".into()));
    }
    if n > MAX_ENUMERATION {
        return Err(Error::BudgetExceeded(format!(
            "enumeration is limited to {MAX_ENUMERATION} vertices, got {n}"
        )));
    }
    if let Some(done) = CLASSES[n].get() {
        return Ok(done);
    }
    let list = if n == 1 {
        vec![Tournament::single_vertex()]
    } else {
        let smaller = classes(n - 1)?;
        let found: BTreeSet<Tournament> = smaller
            .par_iter()
            .flat_map_iter(|base| {
                (0u64..1 << (n - 1)).map(move |mask| {
                    Tournament::from_fn(n, |i, j| if j == n - 1 { mask >> i & 1 == 1 } else { base.beats(i, j) })
                        .canonicalize()
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        found.into_iter().collect()
    };
    Ok(CLASSES[n].get_or_init(|| list))
}

pub fn enumerate_exact(n: usize) -> Result<Vec<Tournament>> {
    classes(n).map(<[Tournament]>::to_vec)
}

// ---------------------------------------------------------------------------
// Strong components and direct sums

/// Strong components in condensation order: every edge between an earlier
/// and a later part points forward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccDecomposition {
    pub parts: Vec<Vec<usize>>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn components<'a>(&'a self, t: &'a Tournament) -> impl Iterator<Item = Tournament> + 'a {
        self.parts.iter().map(move |p| t.induced(p))
    }
}

impl Tournament {
    /// A vertex set of size `m` beats everything outside it exactly when its
    /// score sum is `m(m−1)/2 + m(n−m)`, and such sets are prefixes of the
    /// vertices sorted by decreasing score.
    pub fn strongly_connected_components(&self) -> SccDecomposition {
        let n = self.n;
        let mut by_score: Vec<usize> = (0..n).collect();
        by_score.sort_by_key(|&v| (std::cmp::Reverse(self.out_degree(v)), v));
        let mut parts = Vec::new();
        let mut start = 0;
        let mut sum = 0;
        for (m, &v) in by_score.iter().enumerate() {
            sum += self.out_degree(v);
            let m = m + 1;
            if sum == m * (m - 1) / 2 + m * (n - m) {
                let mut part = by_score[start..m].to_vec();
                part.sort_unstable();
                parts.push(part);
                start = m;
            }
        }
        SccDecomposition { parts }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n >= 1 && self.strongly_connected_components().len() == 1
    }
}

pub fn strongly_connected_components(t: &Tournament) -> SccDecomposition {
    t.strongly_connected_components()
}

/// All cross edges go from earlier parts to later parts.
pub fn direct_sum<'a>(parts: impl IntoIterator<Item = &'a Tournament>) -> Tournament {
    let parts: Vec<&Tournament> = parts.into_iter().collect();
    assert!(!parts.is_empty(), "direct sum of no tournaments");
    let mut owner = Vec::new();
    let mut local = Vec::new();
    for (p, t) in parts.iter().enumerate() {
        for v in 0..t.len() {
            owner.push(p);
            local.push(v);
        }
    }
    Tournament::from_fn(owner.len(), |i, j| {
        if owner[i] == owner[j] {
            parts[owner[i]].beats(local[i], local[j])
        } else {
            owner[i] < owner[j]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tournament {
        Tournament::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let one = t("1:");
        assert_eq!(one.len(), 1);
        let tt = t("3:111");
        assert!(tt.beats(0, 1) && tt.beats(0, 2) && tt.beats(1, 2));
        let c = t("3:101");
        assert!(c.beats(0, 1) && c.beats(2, 0) && c.beats(1, 2));
        assert_eq!(c, Tournament::cyclic_triangle());
        for s in ["1:", "2:0", "3:101", "4:110100", "5:0110101100"] {
            assert_eq!(t(s).encode(), s);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "3", "x:111", "0:", "3:11", "3:1111", "3:1a1", "-1:"] {
            assert!(matches!(Tournament::parse(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(t("3:010").canonicalize().encode(), "3:101");
        assert_eq!(t("3:101").canonicalize().encode(), "3:101");
        assert_eq!(t("1:").canonicalize().encode(), "1:");
        for n in 1..=6 {
            let tn = Tournament::transitive(n).permute(&(0..n).rev().collect::<Vec<_>>());
            assert!(tn.canonicalize().bits().all(|b| b));
        }
        assert!(t("3:101").is_isomorphic(&t("3:010")));
        assert!(!t("3:101").is_isomorphic(&t("3:111")));
    }

    #[test]
    fn canonical_matches_bruteforce_maximum() {
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
        for n in 1..=5 {
            let perms = permutations(n);
            for code in 0u64..1 << (n * (n - 1) / 2) {
                let mut bit = 0;
                let tour = Tournament::from_fn(n, |_, _| {
                    bit += 1;
                    code >> (bit - 1) & 1 == 1
                });
                let max = perms.iter().map(|p| tour.permute(p)).max().unwrap();
                assert_eq!(tour.canonicalize(), max);
            }
        }
    }

    #[test]
    fn automorphisms() {
        assert_eq!(t("3:101").automorphism_count().unwrap(), 3);
        assert_eq!(t("2:1").automorphism_count().unwrap(), 1);
        for n in 1..=7 {
            assert_eq!(Tournament::transitive(n).automorphism_count().unwrap(), 1);
        }
        assert!(matches!(Tournament::transitive(8).automorphism_count(), Err(Error::BudgetExceeded(_))));
        // optimal leaves of the canonical search form one automorphism coset
        for n in 1..=6 {
            for c in classes(n).unwrap() {
                assert_eq!(CanonSearch::run(c).1 as u64, c.automorphism_count().unwrap());
            }
        }
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 12, 56, 456]);
        assert!(matches!(classes(8), Err(Error::BudgetExceeded(_))));
        assert!(classes(0).is_err());
        let five = classes(5).unwrap();
        assert!(five.windows(2).all(|w| w[0].encode() < w[1].encode()));
    }

    #[test]
    fn components() {
        let tt = t("3:111").strongly_connected_components();
        assert_eq!(tt.parts, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(t("3:101").strongly_connected_components().len(), 1);
        let sum = direct_sum([&Tournament::single_vertex(), &Tournament::cyclic_triangle()]);
        let sizes: Vec<usize> = sum.strongly_connected_components().parts.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3]);
        assert!(t("3:101").is_strongly_connected());
        assert!(!t("2:1").is_strongly_connected());
        assert!(t("1:").is_strongly_connected());
        // reversed transitive: 2 → 1 → 0
        let rev = t("3:000").strongly_connected_components();
        assert_eq!(rev.parts, vec![vec![2], vec![1], vec![0]]);
    }

    #[test]
    fn direct_sums() {
        let a = Tournament::single_vertex();
        assert_eq!(direct_sum([&a, &a]).encode(), "2:1");
        assert_eq!(direct_sum([&a, &a, &a]), Tournament::transitive(3));
        for n in 1..=5 {
            for c in classes(n).unwrap() {
                let scc = c.strongly_connected_components();
                let parts: Vec<Tournament> = scc.components(c).collect();
                assert!(parts.iter().all(Tournament::is_strongly_connected));
                assert!(direct_sum(&parts).is_isomorphic(c));
            }
        }
    }

    #[test]
    fn adjacency_export() {
        let json = t("3:101").adjacency_json();
        assert_eq!(json.to_string(), r#"{"n":3,"edges":[[0,1],[1,2],[2,0]]}"#);
    }

    #[test]
    fn acyclicity_and_sinks() {
        assert!(t("3:111").is_transitive());
        assert!(!t("3:101").is_transitive());
        assert!(t("3:111").has_sink());
        assert!(!t("3:101").has_sink());
        let c = t("3:101");
        assert!(c.is_acyclic_on(0b011));
        assert!(!c.is_acyclic_on(0b111));
    }
}
