//! Words over the alphabet of strongly connected tournaments.
//!
//! Letters are ordered by vertex count; letters of equal size are ordered by
//! their canonical encoding (ascending by default, see [`TieBreak`]). The
//! word of a tournament lists its strong components in direct-sum order, and
//! a tournament is Lyndon when its word is.
//!
//! The Lyndon primitives ([`is_lyndon`], [`cfl_factorize`], [`shuffle`]) are
//! generic over any ordered letter type.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournaments::{classes, direct_sum, Tournament, MAX_ENUMERATION};

/// Largest `k` accepted by [`enumerate_lyndon`].
pub const MAX_LYNDON_K: usize = 6;
/// Largest total length of a shuffle product.
pub const MAX_SHUFFLE_LEN: usize = 12;

/// Order among strongly connected tournaments of equal size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    #[default]
    Ascending,
    Descending,
}

static STRONG: [OnceLock<Vec<Tournament>>; MAX_ENUMERATION + 1] = [const { OnceLock::new() }; MAX_ENUMERATION + 1];

/// Canonical strongly connected tournaments on `size` vertices, ascending by encoding.
pub fn strong_tournaments(size: usize) -> Result<&'static [Tournament]> {
    if size == 0 {
        return Err(Error::Domain("letters have at least one vertex".into()));
    }
    if size > MAX_ENUMERATION {
        return Err(Error::BudgetExceeded(format!(
            "letters are limited to {MAX_ENUMERATION} vertices, got {size}"
        )));
    }
    if let Some(done) = STRONG[size].get() {
        return Ok(done);
    }
    let list: Vec<Tournament> = classes(size)?.iter().filter(|t| t.is_strongly_connected()).cloned().collect();
    Ok(STRONG[size].get_or_init(|| list))
}

fn rank_offset(size: usize) -> Result<usize> {
    (1..size).map(|m| strong_tournaments(m).map(<[_]>::len)).sum()
}

/// A letter: a canonical strongly connected tournament and its position in the alphabet.
#[derive(Clone, Debug)]
pub struct Letter {
    tournament: Tournament,
    rank: usize,
}

impl Letter {
    pub fn new(t: &Tournament, tie_break: TieBreak) -> Result<Letter> {
        if !t.is_strongly_connected() {
            return Err(Error::NotStronglyConnected(t.encode()));
        }
        let canonical = t.canonicalize();
        let strong = strong_tournaments(t.len())?;
        let idx = strong.binary_search(&canonical).expect("strong classes are enumerated exhaustively");
        let within = match tie_break {
            TieBreak::Ascending => idx,
            TieBreak::Descending => strong.len() - 1 - idx,
        };
        Ok(Letter { tournament: canonical, rank: rank_offset(t.len())? + within })
    }

    /// The letter of the given rank.
    pub fn from_rank(rank: usize, tie_break: TieBreak) -> Result<Letter> {
        let mut offset = 0;
        for size in 1..=MAX_ENUMERATION {
            let strong = strong_tournaments(size)?;
            if rank < offset + strong.len() {
                let within = rank - offset;
                let idx = match tie_break {
                    TieBreak::Ascending => within,
                    TieBreak::Descending => strong.len() - 1 - within,
                };
                return Ok(Letter { tournament: strong[idx].clone(), rank });
            }
            offset += strong.len();
        }
        Err(Error::BudgetExceeded(format!("letter rank {rank} lies beyond {MAX_ENUMERATION}-vertex letters")))
    }

    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.tournament.len()
    }

    /// Human name: `a`, `b`, `c` for the three smallest letters, then
    /// `d1…d6` for 5-vertex letters, `e1…` for 6-vertex ones and `f1…` for 7.
    pub fn name(&self) -> String {
        let within = self.rank - rank_offset(self.size()).expect("letter sizes are within budget");
        match self.size() {
            1 => "a".into(),
            3 => "b".into(),
            4 => "c".into(),
            s => format!("{}{}", (b'd' + (s - 5) as u8) as char, within + 1),
        }
    }

    fn from_name(name: &str, tie_break: TieBreak) -> Result<Letter> {
        let bad = || Error::Parse(format!("unknown letter name {name:?}"));
        let mut chars = name.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest: String = chars.collect();
        let rank = match (head, rest.as_str()) {
            ('a', "") => 0,
            ('b', "") => 1,
            ('c', "") => 2,
            ('d'..='f', digits) if !digits.is_empty() => {
                let idx: usize = digits.parse().map_err(|_| bad())?;
                let size = 5 + (head as u8 - b'd') as usize;
                let count = strong_tournaments(size)?.len();
                if idx == 0 || idx > count {
                    return Err(bad());
                }
                rank_offset(size)? + idx - 1
            }
            _ => return Err(bad()),
        };
        Letter::from_rank(rank, tie_break)
    }
}

impl PartialEq for Letter {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
    }
}

impl Eq for Letter {}

impl std::hash::Hash for Letter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank.cmp(&other.rank)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The rank of a strongly connected tournament in the alphabet.
pub fn sigma_rank(t: &Tournament) -> Result<usize> {
    sigma_rank_with(t, TieBreak::Ascending)
}

pub fn sigma_rank_with(t: &Tournament, tie_break: TieBreak) -> Result<usize> {
    Letter::new(t, tie_break).map(|l| l.rank)
}

/// A non-empty sequence of letters, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::Domain("words are non-empty".into()));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of vertices.
    pub fn size(&self) -> usize {
        self.letters.iter().map(Letter::size).sum()
    }

    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.letters)
    }

    pub fn factorize(&self) -> Vec<Word> {
        cfl_factorize(&self.letters).into_iter().map(|f| Word { letters: f.to_vec() }).collect()
    }

    /// Parses short names (`"aab"`, `"ad1"`, `"a,d1"`) or comma-separated
    /// letter encodings (`"1:,3:101"`).
    pub fn parse(text: &str, tie_break: TieBreak) -> Result<Word> {
        let text = text.trim();
        if text.contains(':') {
            let letters = text
                .split(',')
                .map(|enc| Tournament::parse(enc.trim()).and_then(|t| Letter::new(&t, tie_break)))
                .collect::<Result<Vec<_>>>()?;
            return Word::new(letters);
        }
        let mut letters = Vec::new();
        let chars: Vec<char> = text.chars().filter(|c| *c != ',' && !c.is_whitespace()).collect();
        let mut i = 0;
        while i < chars.len() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let name: String = chars[i..j].iter().collect();
            letters.push(Letter::from_name(&name, tie_break)?);
            i = j;
        }
        Word::new(letters)
    }

    /// Letter names, concatenated when all are single characters.
    pub fn pretty(&self) -> String {
        let names: Vec<String> = self.letters.iter().map(Letter::name).collect();
        if names.iter().all(|n| n.len() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }
}

impl fmt::Display for Word {
    /// Short names when every letter is among `a`, `b`, `c`; encodings otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.iter().all(|l| l.rank < 3) {
            for l in &self.letters {
                f.write_str(&l.name())?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| l.tournament.encode()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Strong components of `t` as letters, in direct-sum order.
pub fn word_of(t: &Tournament) -> Word {
    word_of_with(t, TieBreak::Ascending).expect("components of a tournament within budget are letters")
}

pub fn word_of_with(t: &Tournament, tie_break: TieBreak) -> Result<Word> {
    let scc = t.strongly_connected_components();
    let letters = scc.components(t).map(|c| Letter::new(&c, tie_break)).collect::<Result<Vec<_>>>()?;
    Word::new(letters)
}

pub fn tournament_of(w: &Word) -> Tournament {
    direct_sum(w.letters.iter().map(|l| &l.tournament))
}

pub fn lex_compare(w1: &Word, w2: &Word) -> Ordering {
    w1.cmp(w2)
}

// ---------------------------------------------------------------------------
// Generic Lyndon machinery

/// Every proper suffix is strictly greater than the word itself.
pub fn is_lyndon<L: Ord>(w: &[L]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > *w)
}

/// Chen–Fox–Lyndon factorization by Duval's algorithm: Lyndon factors,
/// lexicographically non-increasing, concatenating to `w`.
pub fn cfl_factorize<L: Ord>(w: &[L]) -> Vec<&[L]> {
    let n = w.len();
    let mut factors = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut j, mut k) = (i + 1, i);
        while j < n && w[k] <= w[j] {
            if w[k] < w[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        let period = j - k;
        while i <= k {
            factors.push(&w[i..i + period]);
            i += period;
        }
    }
    factors
}

/// Formal sum of words with positive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordCombo<L> {
    terms: BTreeMap<Vec<L>, u64>,
}

impl<L: Ord + Clone> WordCombo<L> {
    fn unit() -> Self {
        WordCombo { terms: BTreeMap::from([(Vec::new(), 1)]) }
    }

    pub fn single(w: &[L]) -> Self {
        WordCombo { terms: BTreeMap::from([(w.to_vec(), 1)]) }
    }

    pub fn coefficient(&self, w: &[L]) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[L], u64)> {
        self.terms.iter().map(|(w, &c)| (w.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Lexicographically largest constituent.
    pub fn largest(&self) -> Option<(&[L], u64)> {
        self.terms.iter().next_back().map(|(w, &c)| (w.as_slice(), c))
    }

    fn word_len(&self) -> usize {
        self.terms.keys().next().map_or(0, Vec::len)
    }

    /// Shuffle with every constituent of `other`, multiplying coefficients.
    pub fn shuffle_with(&self, other: &WordCombo<L>) -> Result<WordCombo<L>> {
        let mut out = BTreeMap::new();
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                for (w, c) in shuffle_pair(u, v)?.terms {
                    *out.entry(w).or_insert(0) += c * cu * cv;
                }
            }
        }
        Ok(WordCombo { terms: out })
    }
}

impl WordCombo<Letter> {
    /// `[{"word": …, "coefficient": …}, …]` in ascending word order.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            word: String,
            coefficient: u64,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(w, &c)| Term { word: Word { letters: w.clone() }.to_string(), coefficient: c })
            .collect();
        serde_json::to_value(terms).expect("word combinations are serializable")
    }
}

fn shuffle_pair<L: Ord + Clone>(a: &[L], b: &[L]) -> Result<WordCombo<L>> {
    let (n, m) = (a.len(), b.len());
    if n + m > MAX_SHUFFLE_LEN {
        return Err(Error::BudgetExceeded(format!(
            "shuffle products are limited to total length {MAX_SHUFFLE_LEN}, got {}",
            n + m
        )));
    }
    // table[i][j] holds the shuffles of a[i..] and b[j..]
    let mut table: Vec<Vec<WordCombo<L>>> = vec![vec![WordCombo { terms: BTreeMap::new() }; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                table[i][j] = WordCombo::unit();
                continue;
            }
            let mut terms = BTreeMap::new();
            if i < n {
                for (w, &c) in &table[i + 1][j].terms {
                    let mut u = Vec::with_capacity(w.len() + 1);
                    u.push(a[i].clone());
                    u.extend_from_slice(w);
                    *terms.entry(u).or_insert(0) += c;
                }
            }
            if j < m {
                for (w, &c) in &table[i][j + 1].terms {
                    let mut u = Vec::with_capacity(w.len() + 1);
                    u.push(b[j].clone());
                    u.extend_from_slice(w);
                    *terms.entry(u).or_insert(0) += c;
                }
            }
            table[i][j] = WordCombo { terms };
        }
    }
    Ok(std::mem::replace(&mut table[0][0], WordCombo { terms: BTreeMap::new() }))
}

/// Shuffle product: the coefficient of `u` counts the ways `u` splits into
/// disjoint subwords `a` and `b`.
pub fn shuffle<L: Ord + Clone>(a: &[L], b: &[L]) -> Result<WordCombo<L>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("shuffle operands are non-empty words".into()));
    }
    shuffle_pair(a, b)
}

/// Shuffle product of several words.
pub fn multi_shuffle<L: Ord + Clone>(words: &[&[L]]) -> Result<WordCombo<L>> {
    let Some((first, rest)) = words.split_first() else {
        return Err(Error::Domain("multi-shuffle of no words".into()));
    };
    let total: usize = words.iter().map(|w| w.len()).sum();
    if total > MAX_SHUFFLE_LEN {
        return Err(Error::BudgetExceeded(format!(
            "shuffle products are limited to total length {MAX_SHUFFLE_LEN}, got {total}"
        )));
    }
    if words.iter().any(|w| w.is_empty()) {
        return Err(Error::Domain("shuffle operands are non-empty words".into()));
    }
    let mut acc = WordCombo::single(first);
    for w in rest {
        acc = acc.shuffle_with(&WordCombo::single(w))?;
    }
    debug_assert_eq!(acc.word_len(), total);
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Tournament order and Lyndon tournaments

/// Sort key of the tournament order: vertex count, number of strong
/// components, then the word.
pub fn order_key(t: &Tournament) -> (usize, usize, Word) {
    let w = word_of(t);
    (t.len(), w.len(), w)
}

pub fn tournament_cmp(s: &Tournament, t: &Tournament) -> Ordering {
    order_key(s).cmp(&order_key(t))
}

/// Strict order: fewer vertices, then fewer strong components, then a smaller word.
pub fn tournament_less(s: &Tournament, t: &Tournament) -> bool {
    tournament_cmp(s, t) == Ordering::Less
}

pub fn is_lyndon_tournament(t: &Tournament) -> bool {
    word_of(t).is_lyndon()
}

pub fn is_lyndon_tournament_with(t: &Tournament, tie_break: TieBreak) -> Result<bool> {
    Ok(word_of_with(t, tie_break)?.is_lyndon())
}

/// Non-trivial Lyndon tournaments on `2..=k` vertices with their words, in
/// decreasing order of words.
pub fn lyndon_sequence(k: usize, tie_break: TieBreak) -> Result<Vec<(Word, Tournament)>> {
    if k < 2 {
        return Err(Error::Domain(format!("Lyndon enumeration needs k >= 2, got {k}")));
    }
    if k > MAX_LYNDON_K {
        return Err(Error::BudgetExceeded(format!(
            "Lyndon enumeration is limited to k <= {MAX_LYNDON_K}, got {k}"
        )));
    }
    let mut found = Vec::new();
    for size in 2..=k {
        for t in classes(size)? {
            let w = word_of_with(t, tie_break)?;
            if w.is_lyndon() {
                found.push((w, t.clone()));
            }
        }
    }
    found.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(found)
}

pub fn enumerate_lyndon(k: usize) -> Result<Vec<Tournament>> {
    enumerate_lyndon_with(k, TieBreak::Ascending)
}

pub fn enumerate_lyndon_with(k: usize, tie_break: TieBreak) -> Result<Vec<Tournament>> {
    Ok(lyndon_sequence(k, tie_break)?.into_iter().map(|(_, t)| t).collect())
}
