//! Reference implementations used as test oracles. They share nothing with
//! the library beyond the input format: distances come from Floyd-Warshall
//! over raw declarations, and Nash checks try every strategy.

#![allow(dead_code)]

use netgame_core::Rational;

/// Either game, in the plainest possible encoding.
#[derive(Debug, Clone)]
pub enum Game {
    Uc { n: usize, alpha: Rational },
    Ubbc { budgets: Vec<usize> },
}

impl Game {
    pub fn n(&self) -> usize {
        match self {
            Game::Uc { n, .. } => *n,
            Game::Ubbc { budgets } => budgets.len(),
        }
    }

    fn cap(&self, i: usize) -> usize {
        match self {
            Game::Uc { n, .. } => n - 1,
            Game::Ubbc { budgets } => budgets[i],
        }
    }

    fn price(&self) -> Rational {
        match self {
            Game::Uc { alpha, .. } => *alpha,
            Game::Ubbc { .. } => Rational::from_integer(0),
        }
    }
}

const INF: u64 = u64::MAX / 4;

pub fn distances(n: usize, s: &[Vec<usize>]) -> Vec<Vec<u64>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (i, si) in s.iter().enumerate() {
        for &j in si {
            d[i][j] = 1;
            d[j][i] = 1;
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                let via = d[a][m] + d[m][b];
                if via < d[a][b] {
                    d[a][b] = via;
                }
            }
        }
    }
    d
}

/// Per-agent cost, `None` for infinite.
pub fn costs(game: &Game, s: &[Vec<usize>]) -> Vec<Option<Rational>> {
    let n = game.n();
    let d = distances(n, s);
    (0..n)
        .map(|i| {
            if d[i].iter().any(|&x| x >= INF) {
                return None;
            }
            let usage: u64 = d[i].iter().sum();
            Some(
                game.price() * Rational::from_integer(s[i].len() as i64)
                    + Rational::from_integer(usage as i64),
            )
        })
        .collect()
}

/// `a < b` with `None` as infinity.
pub fn cheaper(a: Option<Rational>, b: Option<Rational>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Every strategy of agent `i` as a sorted list.
pub fn strategies(game: &Game, i: usize) -> Vec<Vec<usize>> {
    let n = game.n();
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    (0u32..1 << others.len())
        .map(|mask| {
            others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &j)| j)
                .collect::<Vec<_>>()
        })
        .filter(|v| v.len() <= game.cap(i))
        .collect()
}

pub fn is_nash(game: &Game, s: &[Vec<usize>]) -> bool {
    let current = costs(game, s);
    (0..game.n()).all(|i| {
        strategies(game, i).into_iter().all(|alt| {
            let mut t = s.to_vec();
            t[i] = alt;
            !cheaper(costs(game, &t)[i], current[i])
        })
    })
}

/// Every joint profile (small instances only).
pub fn profiles(game: &Game) -> Vec<Vec<Vec<usize>>> {
    let spaces: Vec<_> = (0..game.n()).map(|i| strategies(game, i)).collect();
    let mut out = vec![Vec::new()];
    for space in &spaces {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                space.iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// max/min over finite costs; `None` if any cost is infinite.
pub fn ratio(c: &[Option<Rational>]) -> Option<Rational> {
    let v: Option<Vec<Rational>> = c.iter().copied().collect();
    let v = v?;
    Some(*v.iter().max()? / *v.iter().min()?)
}

pub fn edge_count(s: &[Vec<usize>]) -> usize {
    let mut e = std::collections::BTreeSet::new();
    for (i, si) in s.iter().enumerate() {
        for &j in si {
            e.insert((i.min(j), i.max(j)));
        }
    }
    e.len()
}

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

/// A random connected graph of diameter at most 2, each edge declared by one
/// random endpoint. Returns the strategies.
pub fn random_diameter2<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<Vec<usize>> {
    loop {
        let density = rng.gen_range(0.35..0.9);
        let mut s = vec![Vec::new(); n];
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    if rng.gen_bool(0.5) {
                        s[a].push(b);
                    } else {
                        s[b].push(a);
                    }
                }
            }
        }
        let d = distances(n, &s);
        if d.iter().flatten().all(|&x| x <= 2) {
            for si in &mut s {
                si.sort_unstable();
            }
            return s;
        }
    }
}
