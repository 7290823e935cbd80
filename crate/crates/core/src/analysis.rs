//! Seeded neighborhood diagnostics: rank reciprocity of random pairs,
//! random-pair versus k-NN similarity density, and the similarity decay
//! curve of a single word.

use std::io::Write;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::WordId;
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::knn::{knn, rank_of};
use crate::similarity::SimilaritySpace;

/// `x` is the rank of `b` among the neighbors of `a`, `y` the rank of `a`
/// among the neighbors of `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocityPair {
    pub a: WordId,
    pub b: WordId,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumber {
    /// Quartiles by linear interpolation between order statistics.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(FiveNumber {
            min: v[0],
            q1: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q3: quantile_sorted(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    v[lo] + (v[hi] - v[lo]) * frac
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySummary {
    pub random_pair_sims: Vec<f64>,
    pub knn_mean_sims: Vec<f64>,
    pub random_pair_summary: FiveNumber,
    pub knn_mean_summary: FiveNumber,
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of unordered pairs `(i, j)`, `i < j < n`, whose first index is
/// below `i`.
fn pairs_before(i: usize, n: usize) -> usize {
    i * (2 * n - i - 1) / 2
}

/// Inverse of the row-major enumeration of unordered pairs.
fn decode_pair(p: usize, n: usize) -> (usize, usize) {
    let (mut lo, mut hi) = (0, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if pairs_before(mid, n) <= p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let j = p - pairs_before(lo, n) + lo + 1;
    (lo, j)
}

fn sample_pairs(active: &[WordId], n_pairs: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(WordId, WordId)>> {
    let n = active.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, have: n });
    }
    let available = n * (n - 1) / 2;
    if n_pairs > available {
        return Err(Error::SampleTooLarge {
            requested: n_pairs,
            available,
        });
    }
    Ok(index::sample(rng, available, n_pairs)
        .into_iter()
        .map(|p| {
            let (i, j) = decode_pair(p, n);
            (active[i], active[j])
        })
        .collect())
}

/// Samples `n_pairs` distinct unordered pairs of active points and
/// annotates each with its two neighbor ranks.
pub fn reciprocity_sample<S: SimilaritySpace + ?Sized>(
    space: &S,
    n_pairs: usize,
    seed: u64,
) -> Result<Vec<ReciprocityPair>> {
    let active = space.active_ids();
    let pairs = sample_pairs(&active, n_pairs, &mut rng_for(seed))?;
    pairs
        .par_iter()
        .map(|&(a, b)| {
            Ok(ReciprocityPair {
                a,
                b,
                x: rank_of(space, a, b)?,
                y: rank_of(space, b, a)?,
            })
        })
        .collect()
}

/// Similarities of `n_pairs` random pairs next to the mean top-`k`
/// similarity of `n_words` random words.
pub fn density_stats<S: SimilaritySpace + ?Sized>(
    space: &S,
    n_words: usize,
    n_pairs: usize,
    k: usize,
    seed: u64,
) -> Result<DensitySummary> {
    if k == 0 || n_words == 0 || n_pairs == 0 {
        return Err(Error::InvalidParameter("sample sizes and k must be positive".into()));
    }
    let active = space.active_ids();
    if active.len() <= k {
        return Err(Error::TooFewPoints {
            needed: k + 1,
            have: active.len(),
        });
    }
    if n_words > active.len() {
        return Err(Error::SampleTooLarge {
            requested: n_words,
            available: active.len(),
        });
    }
    let mut rng = rng_for(seed);
    let pairs = sample_pairs(&active, n_pairs, &mut rng)?;
    let words: Vec<WordId> = index::sample(&mut rng, active.len(), n_words)
        .into_iter()
        .map(|i| active[i])
        .collect();

    let random_pair_sims: Vec<f64> = pairs.par_iter().map(|&(a, b)| space.similarity(a, b)).collect();
    let knn_mean_sims = words
        .par_iter()
        .map(|&w| {
            let list = knn(space, w, k)?;
            Ok(list.entries.iter().map(|n| n.sim).sum::<f64>() / list.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(DensitySummary {
        random_pair_summary: FiveNumber::of(&random_pair_sims).unwrap(),
        knn_mean_summary: FiveNumber::of(&knn_mean_sims).unwrap(),
        random_pair_sims,
        knn_mean_sims,
    })
}

/// Descending similarities of the `k` nearest neighbors of `word`.
pub fn similarity_curve<S: SimilaritySpace + ?Sized>(space: &S, word: WordId, k: usize) -> Result<Vec<f64>> {
    Ok(knn(space, word, k)?.sims())
}

/// CSV with header `a,b,x,y`; ids are written as tokens via `name`.
pub fn write_reciprocity_csv<W: Write>(
    mut out: W,
    pairs: &[ReciprocityPair],
    name: impl Fn(WordId) -> String,
) -> std::io::Result<()> {
    writeln!(out, "a,b,x,y")?;
    for p in pairs {
        writeln!(
            out,
            "{},{},{},{}",
            csv_field(&name(p.a)),
            csv_field(&name(p.b)),
            p.x,
            p.y
        )?;
    }
    out.flush()
}

/// Single-column CSV with the given header.
pub fn write_column_csv<W: Write>(mut out: W, header: &str, values: &[f64]) -> std::io::Result<()> {
    writeln!(out, "{header}")?;
    for &v in values {
        writeln!(out, "{}", fmt_f64(v))?;
    }
    out.flush()
}

/// CSV with header `rank,sim`, ranks starting at 1.
pub fn write_curve_csv<W: Write>(mut out: W, curve: &[f64]) -> std::io::Result<()> {
    writeln!(out, "rank,sim")?;
    for (i, &s) in curve.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, fmt_f64(s))?;
    }
    out.flush()
}

/// Quotes a CSV field when it contains a delimiter, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
