//! Dense embedding storage and the plain-text embedding formats.
//!
//! Two line-oriented formats are read, both UTF-8 with a single ASCII space
//! between fields and LF or CRLF line endings:
//!
//! * headerless (GloVe style): `token v1 v2 ... vdim` on every line;
//! * with header (word2vec text style): a first line `|V| dim`, then the
//!   same data lines.
//!
//! Rows whose Euclidean norm is zero are kept in the model but flagged in
//! the [`LoadReport`]; every similarity query skips them.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt_f64;

/// Index of a row in the model (or point set) that issued it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct WordId(u32);

impl WordId {
    pub fn new(index: usize) -> Self {
        WordId(u32::try_from(index).expect("word index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for WordId {
    fn from(index: usize) -> Self {
        WordId::new(index)
    }
}

impl std::fmt::Display for WordId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rows that were accepted at load time but are excluded from queries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub zero_vectors: Vec<WordId>,
}

impl LoadReport {
    pub fn is_clean(&self) -> bool {
        self.zero_vectors.is_empty()
    }
}

/// An immutable vocabulary plus a row-major `|V| x dim` matrix.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    vocab: Vec<String>,
    index: HashMap<String, WordId>,
    matrix: Vec<f64>,
    norms: Vec<f64>,
    dim: usize,
    report: LoadReport,
}

impl EmbeddingModel {
    /// Builds a model from parallel token and row lists.
    pub fn from_rows<S, R>(vocab: Vec<S>, rows: Vec<R>) -> Result<Self>
    where
        S: Into<String>,
        R: AsRef<[f64]>,
    {
        if rows.is_empty() {
            return Err(Error::EmptyFile);
        }
        if vocab.len() != rows.len() {
            return Err(Error::CountMismatch {
                declared: vocab.len(),
                found: rows.len(),
            });
        }
        let dim = rows[0].as_ref().len();
        let mut builder = Builder::new(dim, rows.len());
        for (line, (token, row)) in vocab.into_iter().zip(&rows).enumerate() {
            builder.push(token.into(), row.as_ref(), line + 1)?;
        }
        builder.finish()
    }

    /// Builds a model from a row-major matrix of `vocab.len()` rows.
    pub fn from_flat<S: Into<String>>(vocab: Vec<S>, matrix: Vec<f64>, dim: usize) -> Result<Self> {
        if vocab.is_empty() {
            return Err(Error::EmptyFile);
        }
        if dim == 0 || matrix.len() != vocab.len() * dim {
            return Err(Error::DimensionMismatch {
                line: 0,
                expected: vocab.len() * dim,
                found: matrix.len(),
            });
        }
        let mut index = HashMap::with_capacity(vocab.len());
        let mut tokens = Vec::with_capacity(vocab.len());
        for (i, token) in vocab.into_iter().enumerate() {
            let token: String = token.into();
            if index.insert(token.clone(), WordId::new(i)).is_some() {
                return Err(Error::DuplicateToken { token, line: i + 1 });
            }
            tokens.push(token);
        }
        let norms: Vec<f64> = matrix
            .chunks_exact(dim)
            .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        let zero_vectors = norms
            .iter()
            .enumerate()
            .filter(|(_, &n)| n == 0.0)
            .map(|(i, _)| WordId::new(i))
            .collect();
        Ok(EmbeddingModel {
            vocab: tokens,
            index,
            matrix,
            norms,
            dim,
            report: LoadReport { zero_vectors },
        })
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn token(&self, id: WordId) -> &str {
        &self.vocab[id.index()]
    }

    pub fn vector(&self, id: WordId) -> &[f64] {
        let start = id.index() * self.dim;
        &self.matrix[start..start + self.dim]
    }

    pub fn norm(&self, id: WordId) -> f64 {
        self.norms[id.index()]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn report(&self) -> &LoadReport {
        &self.report
    }

    pub fn is_zero(&self, id: WordId) -> bool {
        self.norms[id.index()] == 0.0
    }

    /// Exact, case-sensitive token lookup.
    pub fn lookup(&self, token: &str) -> Result<WordId> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownToken(token.to_owned()))
    }

    /// Exact lookup, then a lowercase retry when the exact form is absent.
    pub fn lookup_folded(&self, token: &str) -> Result<WordId> {
        self.lookup(token).or_else(|err| {
            let lower = token.to_lowercase();
            if lower != token {
                self.index.get(&lower).copied().ok_or(err)
            } else {
                Err(err)
            }
        })
    }

    /// Groups of rows whose vectors are bit-identical (nonzero rows only).
    pub fn duplicate_vectors(&self) -> Vec<Vec<WordId>> {
        let mut groups: HashMap<Vec<u64>, Vec<WordId>> = HashMap::new();
        for i in 0..self.len() {
            let id = WordId::new(i);
            if self.is_zero(id) {
                continue;
            }
            let key = self.vector(id).iter().map(|x| x.to_bits()).collect();
            groups.entry(key).or_default().push(id);
        }
        let mut dups: Vec<_> = groups.into_values().filter(|g| g.len() > 1).collect();
        dups.sort();
        dups
    }

    /// Writes the model in text format with 17 significant digits per value.
    pub fn write_text<W: Write>(&self, mut out: W, header: bool) -> std::io::Result<()> {
        if header {
            writeln!(out, "{} {}", self.len(), self.dim)?;
        }
        let mut line = String::new();
        for (i, token) in self.vocab.iter().enumerate() {
            line.clear();
            line.push_str(token);
            for &x in self.vector(WordId::new(i)) {
                line.push(' ');
                line.push_str(&fmt_f64(x));
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    }
}

struct Builder {
    dim: usize,
    vocab: Vec<String>,
    index: HashMap<String, WordId>,
    matrix: Vec<f64>,
    norms: Vec<f64>,
    zero: Vec<WordId>,
}

impl Builder {
    fn new(dim: usize, capacity: usize) -> Self {
        Builder {
            dim,
            vocab: Vec::with_capacity(capacity),
            index: HashMap::with_capacity(capacity),
            matrix: Vec::with_capacity(capacity * dim),
            norms: Vec::with_capacity(capacity),
            zero: Vec::new(),
        }
    }

    fn push(&mut self, token: String, row: &[f64], line: usize) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                line,
                expected: self.dim,
                found: row.len(),
            });
        }
        let id = WordId::new(self.vocab.len());
        match self.index.entry(token) {
            Entry::Occupied(e) => {
                return Err(Error::DuplicateToken {
                    token: e.key().clone(),
                    line,
                })
            }
            Entry::Vacant(e) => {
                self.vocab.push(e.key().clone());
                e.insert(id);
            }
        }
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            self.zero.push(id);
        }
        self.norms.push(norm);
        self.matrix.extend_from_slice(row);
        Ok(())
    }

    fn finish(self) -> Result<EmbeddingModel> {
        if self.vocab.is_empty() {
            return Err(Error::EmptyFile);
        }
        if self.dim == 0 {
            return Err(Error::InvalidParameter("embedding dimension is zero".into()));
        }
        Ok(EmbeddingModel {
            vocab: self.vocab,
            index: self.index,
            matrix: self.matrix,
            norms: self.norms,
            dim: self.dim,
            report: LoadReport {
                zero_vectors: self.zero,
            },
        })
    }
}

/// Loads a text embedding file. See the module docs for the format.
pub fn load_text_embeddings(path: impl AsRef<Path>, has_header: bool) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_text_embeddings(BufReader::new(file), has_header)
}

/// Same as [`load_text_embeddings`], reading from any buffered source.
pub fn read_text_embeddings<R: BufRead>(reader: R, has_header: bool) -> Result<EmbeddingModel> {
    let mut declared: Option<(usize, usize)> = None;
    let mut builder: Option<Builder> = None;
    let mut row = Vec::new();

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', ' ']);
        if line.is_empty() {
            continue;
        }

        if has_header && declared.is_none() {
            declared = Some(parse_header(line, lineno)?);
            let (n, dim) = declared.unwrap();
            builder = Some(Builder::new(dim, n));
            continue;
        }

        let mut fields = line.split(' ');
        let token = fields.next().unwrap_or_default();
        row.clear();
        for field in fields {
            let value: f64 = field.parse().map_err(|_| Error::NonNumeric {
                field: field.to_owned(),
                line: lineno,
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumeric {
                    field: field.to_owned(),
                    line: lineno,
                });
            }
            row.push(value);
        }
        let b = builder.get_or_insert_with(|| Builder::new(row.len(), 0));
        b.push(token.to_owned(), &row, lineno)?;
    }

    let builder = builder.ok_or(Error::EmptyFile)?;
    if let Some((n, _)) = declared {
        if n != builder.vocab.len() {
            return Err(Error::CountMismatch {
                declared: n,
                found: builder.vocab.len(),
            });
        }
    }
    builder.finish()
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let bad = |reason: &str| Error::BadHeader {
        line: lineno,
        reason: reason.to_owned(),
    };
    let mut parts = line.split(' ');
    let n = parts
        .next()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| bad("expected vocabulary size"))?;
    let dim = parts
        .next()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| bad("expected dimension"))?;
    if parts.next().is_some() {
        return Err(bad("trailing fields"));
    }
    if dim == 0 {
        return Err(bad("dimension must be positive"));
    }
    Ok((n, dim))
}
