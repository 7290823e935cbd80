//! Positive-PMI models built from raw text.
//!
//! The pipeline is: tokenize each document (one per input line), count
//! symmetric window co-occurrences, weight them with positive pointwise
//! mutual information and compress the sparse rows with a seeded Gaussian
//! random projection.

use std::collections::HashMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::fmt_f64;

/// Columns of the projection matrix generated per seeded block. Part of the
/// determinism contract: changing it changes every projected model.
pub const PROJECTION_BLOCK: usize = 64;

const COUNT_SHARD: usize = 256;

/// Lowercases `text` and splits it on every run of non-alphanumeric
/// characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Tokenizes a corpus with one document per line.
pub fn tokenize_corpus(text: &str) -> Vec<Vec<String>> {
    text.lines().map(tokenize).filter(|d| !d.is_empty()).collect()
}

/// Sparse term-by-term co-occurrence counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CooccurrenceCounts {
    pub vocab: Vec<String>,
    /// Row `a` holds `(b, count)` pairs sorted by `b`; zeros are not stored.
    pub rows: Vec<Vec<(u32, u64)>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

impl CooccurrenceCounts {
    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.vocab.iter().position(|t| t == token)
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        let row = &self.rows[a];
        row.binary_search_by_key(&(b as u32), |&(j, _)| j)
            .map_or(0, |p| row[p].1)
    }

    /// Count for a pair of tokens; unknown tokens count zero.
    pub fn count_tokens(&self, a: &str, b: &str) -> u64 {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.count(i, j),
            _ => 0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Writes `#vocab N` followed by `token_a<TAB>token_b<TAB>count` lines.
    pub fn write_sparse<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_sparse(out, &self.vocab, &self.rows, |c| c.to_string())
    }
}

fn write_sparse<W: Write, T: Copy>(
    mut out: W,
    vocab: &[String],
    rows: &[Vec<(u32, T)>],
    fmt: impl Fn(T) -> String,
) -> std::io::Result<()> {
    writeln!(out, "#vocab {}", vocab.len())?;
    for (a, row) in rows.iter().enumerate() {
        for &(b, v) in row {
            writeln!(out, "{}\t{}\t{}", vocab[a], vocab[b as usize], fmt(v))?;
        }
    }
    out.flush()
}

/// Counts co-occurrences within `window` positions on either side.
///
/// Tokens seen fewer than `min_count` times are removed from the documents
/// before counting. Windows never cross document boundaries. The vocabulary
/// is ordered by descending frequency, ties broken lexicographically.
pub fn count_cooccurrences<D>(corpus: &[D], window: usize, min_count: u64) -> Result<CooccurrenceCounts>
where
    D: AsRef<[String]> + Sync,
{
    if window == 0 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }

    let mut freq: HashMap<&str, u64> = HashMap::new();
    for doc in corpus {
        for t in doc.as_ref() {
            *freq.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut kept: Vec<(&str, u64)> = freq.into_iter().filter(|&(_, f)| f >= min_count).collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let index: HashMap<&str, u32> = kept.iter().enumerate().map(|(i, &(t, _))| (t, i as u32)).collect();
    let vocab: Vec<String> = kept.iter().map(|&(t, _)| t.to_owned()).collect();

    let docs: Vec<Vec<u32>> = corpus
        .iter()
        .map(|d| {
            d.as_ref()
                .iter()
                .filter_map(|t| index.get(t.as_str()).copied())
                .collect()
        })
        .collect();

    let merged = docs
        .par_chunks(COUNT_SHARD)
        .map(|shard| {
            let mut local: HashMap<(u32, u32), u64> = HashMap::new();
            for doc in shard {
                for (i, &a) in doc.iter().enumerate() {
                    let hi = (i + window).min(doc.len() - 1);
                    for &b in &doc[i + 1..=hi] {
                        *local.entry((a, b)).or_default() += 1;
                        *local.entry((b, a)).or_default() += 1;
                    }
                }
            }
            local
        })
        .reduce(HashMap::new, |mut acc, part| {
            if acc.len() < part.len() {
                return merge_into(part, acc);
            }
            for (k, v) in part {
                *acc.entry(k).or_default() += v;
            }
            acc
        });

    let n = vocab.len();
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
    for ((a, b), c) in merged {
        rows[a as usize].push((b, c));
    }
    let mut row_sums = vec![0u64; n];
    let mut col_sums = vec![0u64; n];
    for (a, row) in rows.iter_mut().enumerate() {
        row.sort_unstable_by_key(|&(b, _)| b);
        for &(b, c) in row.iter() {
            row_sums[a] += c;
            col_sums[b as usize] += c;
        }
    }
    let total = row_sums.iter().sum();
    Ok(CooccurrenceCounts {
        vocab,
        rows,
        row_sums,
        col_sums,
        total,
    })
}

fn merge_into(mut big: HashMap<(u32, u32), u64>, small: HashMap<(u32, u32), u64>) -> HashMap<(u32, u32), u64> {
    for (k, v) in small {
        *big.entry(k).or_default() += v;
    }
    big
}

/// Sparse positive-PMI weights; only strictly positive values are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PpmiMatrix {
    pub vocab: Vec<String>,
    pub rows: Vec<Vec<(u32, f64)>>,
}

impl PpmiMatrix {
    pub fn value(&self, a: usize, b: usize) -> f64 {
        let row = &self.rows[a];
        row.binary_search_by_key(&(b as u32), |&(j, _)| j)
            .map_or(0.0, |p| row[p].1)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn write_sparse<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_sparse(out, &self.vocab, &self.rows, fmt_f64)
    }
}

/// `max(0, ln(p(a,b) / (p(a) p(b))))` with probabilities estimated from the
/// count matrix and its marginals, natural log.
pub fn ppmi(counts: &CooccurrenceCounts) -> Result<PpmiMatrix> {
    if counts.total == 0 {
        return Err(Error::EmptyCounts);
    }
    let total = counts.total as f64;
    let rows = counts
        .rows
        .par_iter()
        .enumerate()
        .map(|(a, row)| {
            let ra = counts.row_sums[a] as f64;
            row.iter()
                .filter_map(|&(b, c)| {
                    let cb = counts.col_sums[b as usize] as f64;
                    let pmi = (c as f64 * total / (ra * cb)).ln();
                    (pmi > 0.0).then_some((b, pmi))
                })
                .collect()
        })
        .collect();
    Ok(PpmiMatrix {
        vocab: counts.vocab.clone(),
        rows,
    })
}

/// Projects each sparse row onto `target_dim` dimensions with a Gaussian
/// matrix whose entries have mean 0 and variance `1/target_dim`.
///
/// The matrix is generated in column blocks of [`PROJECTION_BLOCK`], each
/// from its own stream of a ChaCha generator seeded with `seed`, so output
/// is identical for any number of worker threads.
pub fn random_projection(matrix: &PpmiMatrix, target_dim: usize, seed: u64) -> Result<EmbeddingModel> {
    if target_dim == 0 {
        return Err(Error::InvalidParameter("target dimension must be at least 1".into()));
    }
    let n = matrix.vocab.len();
    if n == 0 {
        return Err(Error::EmptyCounts);
    }
    let normal =
        Normal::new(0.0, 1.0 / (target_dim as f64).sqrt()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let n_blocks = target_dim.div_ceil(PROJECTION_BLOCK);

    let blocks: Vec<Vec<f64>> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let width = PROJECTION_BLOCK.min(target_dim - block * PROJECTION_BLOCK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let r: Vec<f64> = (0..n * width).map(|_| normal.sample(&mut rng)).collect();
            let mut out = vec![0.0; n * width];
            for (i, row) in matrix.rows.iter().enumerate() {
                let dst = &mut out[i * width..(i + 1) * width];
                for &(j, v) in row {
                    let src = &r[j as usize * width..(j as usize + 1) * width];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += v * s;
                    }
                }
            }
            out
        })
        .collect();

    let mut flat = vec![0.0; n * target_dim];
    for (block, data) in blocks.iter().enumerate() {
        let start = block * PROJECTION_BLOCK;
        let width = data.len() / n;
        for (row, src) in flat.chunks_exact_mut(target_dim).zip(data.chunks_exact(width)) {
            row[start..start + width].copy_from_slice(src);
        }
    }
    drop(blocks);
    EmbeddingModel::from_flat(matrix.vocab.clone(), flat, target_dim)
}
