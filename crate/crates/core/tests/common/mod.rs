//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's algorithms beyond plain accessors.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lynprof::rational::{ratio, to_f64};
use lynprof::tournamentons::{Block, Diagonal};
use lynprof::{Rational, StepTournamenton, Tournament};
use num_traits::{One, Zero};
use rand::Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Adjacency matrix from the "n:bits" text, read independently of the parser.
pub fn adjacency(n: usize, bits: &str) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    let mut it = bits.chars();
    for i in 0..n {
        for j in i + 1..n {
            let b = it.next().expect("enough bits") == '1';
            adj[i][j] = b;
            adj[j][i] = !b;
        }
    }
    adj
}

pub fn matrix_of(t: &Tournament) -> Vec<Vec<bool>> {
    let text = t.encode();
    let (n, bits) = text.split_once(':').unwrap();
    adjacency(n.parse().unwrap(), bits)
}

pub fn encode_matrix(adj: &[Vec<bool>]) -> String {
    let n = adj.len();
    let mut s = format!("{n}:");
    for i in 0..n {
        for j in i + 1..n {
            s.push(if adj[i][j] { '1' } else { '0' });
        }
    }
    s
}

/// All labeled tournaments on `n` vertices as adjacency matrices.
pub fn labeled(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs)
        .map(|mask| {
            let bits: String = (0..pairs).map(|p| if mask >> p & 1 == 1 { '1' } else { '0' }).collect();
            adjacency(n, &bits)
        })
        .collect()
}

/// Isomorphism by trying every bijection.
pub fn brute_isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let n = a.len();
    n == b.len()
        && permutations(n).iter().any(|p| (0..n).all(|i| (0..n).all(|j| i == j || a[i][j] == b[p[i]][p[j]])))
}

/// Representatives of the isomorphism classes, found by pairwise testing.
pub fn brute_classes(n: usize) -> Vec<Vec<Vec<bool>>> {
    let mut reps: Vec<Vec<Vec<bool>>> = Vec::new();
    for t in labeled(n) {
        if !reps.iter().any(|r| brute_isomorphic(r, &t)) {
            reps.push(t);
        }
    }
    reps
}

pub fn brute_automorphisms(a: &[Vec<bool>]) -> usize {
    let n = a.len();
    permutations(n).iter().filter(|p| (0..n).all(|i| (0..n).all(|j| i == j || a[i][j] == a[p[i]][p[j]]))).count()
}

/// Lexicographically largest encoding over all relabelings.
pub fn brute_canonical(a: &[Vec<bool>]) -> String {
    let n = a.len();
    permutations(n)
        .iter()
        .map(|p| {
            let m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| a[p[i]][p[j]]).collect()).collect();
            encode_matrix(&m)
        })
        .max()
        .unwrap()
}

/// Strong connectivity by forward and backward reachability from vertex 0.
pub fn bfs_strong(a: &[Vec<bool>]) -> bool {
    let n = a.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if u != v && !seen[v] && (if forward { a[u][v] } else { a[v][u] }) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

// ---------------------------------------------------------------------------
// words

/// Lyndon by the suffix definition.
pub fn naive_is_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > *w)
}

/// Repeatedly strip the longest Lyndon prefix.
pub fn naive_cfl<T: Ord + Clone>(w: &[T]) -> Vec<Vec<T>> {
    let mut rest = w;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let len = (1..=rest.len()).rev().find(|&l| naive_is_lyndon(&rest[..l])).unwrap();
        out.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    out
}

/// Shuffle product by choosing the positions of the first word.
pub fn naive_shuffle<T: Ord + Clone>(a: &[T], b: &[T]) -> BTreeMap<Vec<T>, u64> {
    let n = a.len() + b.len();
    let mut out = BTreeMap::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut w = Vec::with_capacity(n);
        for p in 0..n {
            if mask >> p & 1 == 1 {
                w.push(a[i].clone());
                i += 1;
            } else {
                w.push(b[j].clone());
                j += 1;
            }
        }
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

pub fn all_words(alphabet: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..alphabet).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

// ---------------------------------------------------------------------------
// densities

/// Probability that `c` points placed in uniformly random order realize the
/// orientation `sub` when each edge goes from the earlier point to the later.
fn order_probability(sub: &[Vec<bool>]) -> Rational {
    // orders[R]: ways to list the vertex set R so that every vertex beats
    // all vertices listed after it
    let c = sub.len();
    let mut orders = vec![0u64; 1 << c];
    orders[0] = 1;
    for r in 1usize..1 << c {
        for v in (0..c).filter(|&v| r >> v & 1 == 1) {
            let rest = r & !(1 << v);
            if (0..c).all(|u| rest >> u & 1 == 0 || sub[v][u]) {
                orders[r] += orders[rest];
            }
        }
    }
    let fact: u64 = (1..=c as u64).product();
    ratio(orders[(1 << c) - 1] as i64, fact as i64)
}

/// t(T, W) summed over every map from vertices to blocks, with the
/// same-block factor computed by counting linear orders.
pub fn oracle_density(t: &Tournament, w: &StepTournamenton) -> Rational {
    let a = matrix_of(t);
    let n = a.len();
    let blocks = w.blocks();
    let nb = blocks.len();
    let mut total = Rational::zero();
    let mut f = vec![0usize; n];
    loop {
        let mut term = Rational::one();
        for u in 0..n {
            for v in u + 1..n {
                if f[u] != f[v] {
                    term *= if a[u][v] { w.cross(f[u], f[v]).clone() } else { w.cross(f[v], f[u]).clone() };
                }
            }
        }
        for (b, block) in blocks.iter().enumerate() {
            if term.is_zero() {
                break;
            }
            let members: Vec<usize> = (0..n).filter(|&v| f[v] == b).collect();
            if members.is_empty() {
                continue;
            }
            for _ in &members {
                term *= &block.measure;
            }
            let sub: Vec<Vec<bool>> = members.iter().map(|&u| members.iter().map(|&v| a[u][v]).collect()).collect();
            term *= match block.diagonal {
                Diagonal::Transitive => order_probability(&sub),
                Diagonal::ConstantHalf => {
                    let pairs = members.len() * (members.len() - 1) / 2;
                    ratio(1, 1i64 << pairs)
                }
            };
        }
        total += term;
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            f[i] += 1;
            if f[i] < nb {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// Midpoint Riemann sum of the density integral on `grid` cells per unit,
/// with value 1/2 on tied cells. Block measures must be multiples of `1/grid`.
pub fn riemann_density(t: &Tournament, w: &StepTournamenton, grid: usize) -> f64 {
    let a = matrix_of(t);
    let n = a.len();
    let mut cell_block = Vec::with_capacity(grid);
    for (b, block) in w.blocks().iter().enumerate() {
        let cells = to_f64(&block.measure) * grid as f64;
        for _ in 0..cells.round() as usize {
            cell_block.push(b);
        }
    }
    assert_eq!(cell_block.len(), grid, "measures must be multiples of 1/grid");
    let value = |x: usize, y: usize| -> f64 {
        let (bx, by) = (cell_block[x], cell_block[y]);
        if bx != by {
            return to_f64(w.cross(bx, by));
        }
        match w.blocks()[bx].diagonal {
            Diagonal::ConstantHalf => 0.5,
            Diagonal::Transitive => match x.cmp(&y) {
                std::cmp::Ordering::Less => 1.0,
                std::cmp::Ordering::Greater => 0.0,
                std::cmp::Ordering::Equal => 0.5,
            },
        }
    };
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut term = 1.0;
        for u in 0..n {
            for v in u + 1..n {
                term *= if a[u][v] { value(idx[u], idx[v]) } else { value(idx[v], idx[u]) };
            }
        }
        total += term;
        let mut i = 0;
        loop {
            if i == n {
                return total / (grid as f64).powi(n as i32);
            }
            idx[i] += 1;
            if idx[i] < grid {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Random step tournamenton with `blocks` blocks whose measures are
/// multiples of `1/grid`.
pub fn random_grid_step<R: Rng + ?Sized>(rng: &mut R, blocks: usize, grid: usize) -> StepTournamenton {
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < blocks - 1 {
        let c = rng.random_range(1..grid);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(grid);
    let bl: Vec<Block> = cuts
        .windows(2)
        .map(|c| {
            let diag = if rng.random() { Diagonal::Transitive } else { Diagonal::ConstantHalf };
            Block::new(ratio((c[1] - c[0]) as i64, grid as i64), diag)
        })
        .collect();
    let mut cross = vec![vec![ratio(1, 2); blocks]; blocks];
    for b in 0..blocks {
        for c in b + 1..blocks {
            let q = rng.random_range(1..=6);
            let v = ratio(rng.random_range(0..=q), q);
            cross[c][b] = Rational::one() - &v;
            cross[b][c] = v;
        }
    }
    StepTournamenton::new(bl, cross).unwrap()
}

// ---------------------------------------------------------------------------
// linear algebra

pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::zero();
    for c in 0..n {
        let minor: Vec<Vec<Rational>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    ratio(rng.random_range(-9..=9), rng.random_range(1..=7))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|_| (0..n).map(|_| random_rational(rng)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Largest deviation, in binomial standard deviations, between the class
/// frequencies of `samples` tournaments on `n` vertices drawn by the
/// library sampler and `(n!/|Aut T|)·t(T, W)` from the oracles above.
pub fn monte_carlo_sigmas(w: &StepTournamenton, n: usize, samples: usize, seed: u64) -> f64 {
    use lynprof::tournamentons::Sampler;
    use rand::SeedableRng;
    let sampler = Sampler::new(w);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..samples {
        let drawn = sampler.sample(&mut rng, n);
        *counts.entry(brute_canonical(&matrix_of(&drawn))).or_insert(0) += 1;
    }
    let fact = (1..=n).product::<usize>();
    let mut worst: f64 = 0.0;
    for m in brute_classes(n) {
        let key = brute_canonical(&m);
        let t = Tournament::parse(&key).unwrap();
        let p = to_f64(&oracle_density(&t, w)) * (fact / brute_automorphisms(&m)) as f64;
        let freq = counts.get(&key).copied().unwrap_or(0) as f64 / samples as f64;
        let sd = (p * (1.0 - p) / samples as f64).sqrt();
        let dev = (freq - p).abs();
        let sigmas = match (sd == 0.0, dev == 0.0) {
            (_, true) => 0.0,
            (true, false) => f64::INFINITY,
            (false, false) => dev / sd,
        };
        worst = worst.max(sigmas);
    }
    worst
}
