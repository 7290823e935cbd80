//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls the graph or k-NN code under test;
//! only the similarity primitive of a space is used.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relneigh::{EmbeddingModel, SimilaritySpace, WordId};

pub fn id(i: usize) -> WordId {
    WordId::new(i)
}

pub fn ids(n: usize) -> Vec<WordId> {
    (0..n).map(id).collect()
}

pub fn random_points(seed: u64, n: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

pub fn model_from_points(points: &[Vec<f64>]) -> EmbeddingModel {
    let names: Vec<String> = (0..points.len()).map(|i| format!("w{i}")).collect();
    EmbeddingModel::from_rows(names, points.to_vec()).unwrap()
}

/// Full similarity matrix; the diagonal is unused.
pub fn sim_matrix<S: SimilaritySpace + ?Sized>(space: &S, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        f64::NAN
                    } else {
                        space.similarity(id(i), id(j))
                    }
                })
                .collect()
        })
        .collect()
}

/// Every point's neighbors by full sort: descending similarity, then id.
pub fn sorted_neighbors(m: &[Vec<f64>], a: usize) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = (0..m.len()).filter(|&j| j != a).map(|j| (j, m[a][j])).collect();
    v.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
    v
}

/// Textbook triple loop over a set of point indices.
pub fn rng_edges_oracle(m: &[Vec<f64>], points: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for (x, &a) in points.iter().enumerate() {
        for &c in &points[x + 1..] {
            let s_ac = m[a][c];
            let blocked = points
                .iter()
                .any(|&b| b != a && b != c && m[a][b] > s_ac && m[c][b] > s_ac);
            if !blocked {
                edges.insert((a.min(c), a.max(c)));
            }
        }
    }
    edges
}

/// Relative neighbors of `a` among `points` by direct definition.
pub fn rng_nbh_oracle(m: &[Vec<f64>], points: &[usize], a: usize) -> BTreeSet<usize> {
    points
        .iter()
        .copied()
        .filter(|&c| c != a)
        .filter(|&c| {
            let s_ac = m[a][c];
            !points
                .iter()
                .any(|&b| b != a && b != c && m[a][b] > s_ac && m[c][b] > s_ac)
        })
        .collect()
}

/// Prim's algorithm on a dense distance matrix.
pub fn mst_oracle(dist: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let n = dist.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![usize::MAX; n];
    let mut edges = Vec::new();
    best[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&x, &y| best[x].partial_cmp(&best[y]).unwrap())
            .unwrap();
        in_tree[u] = true;
        if from[u] != usize::MAX {
            edges.push((from[u].min(u), from[u].max(u)));
        }
        for v in 0..n {
            if !in_tree[v] && dist[u][v] < best[v] {
                best[v] = dist[u][v];
                from[v] = u;
            }
        }
    }
    edges
}

pub fn euclid(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}
