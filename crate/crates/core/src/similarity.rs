//! Similarity functions over indexed point sets.
//!
//! Similarity is the only primitive: a point is closer to the reference
//! exactly when its similarity is strictly greater. Euclidean geometry is
//! expressed through [`EuclideanSpace`], whose similarity is the negated
//! distance.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::embedding::{EmbeddingModel, WordId};
use crate::error::{Error, Result};

/// A symmetric similarity over the ids `0..len()`.
///
/// Inactive points (zero vectors) are never returned by queries and may not
/// be used as query references.
pub trait SimilaritySpace: Sync {
    fn len(&self) -> usize;

    fn similarity(&self, a: WordId, b: WordId) -> f64;

    fn is_active(&self, _id: WordId) -> bool {
        true
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fails when `id` is out of range or inactive.
    fn check(&self, id: WordId) -> Result<()> {
        if id.index() >= self.len() {
            return Err(Error::InvalidId {
                id: id.index(),
                len: self.len(),
            });
        }
        if !self.is_active(id) {
            return Err(Error::ZeroVector(id.index()));
        }
        Ok(())
    }

    fn active_ids(&self) -> Vec<WordId> {
        (0..self.len())
            .map(WordId::new)
            .filter(|&id| self.is_active(id))
            .collect()
    }
}

impl<S: SimilaritySpace + ?Sized> SimilaritySpace for &S {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn similarity(&self, a: WordId, b: WordId) -> f64 {
        (**self).similarity(a, b)
    }

    fn is_active(&self, id: WordId) -> bool {
        (**self).is_active(id)
    }
}

#[inline]
fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Cosine of the angle between two nonzero vectors of equal length.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionDiffers(u.len(), v.len()));
    }
    let (su, sv) = (dot(u, u), dot(v, v));
    if su == 0.0 {
        return Err(Error::ZeroVector(0));
    }
    if sv == 0.0 {
        return Err(Error::ZeroVector(1));
    }
    Ok(cosine_from_parts(dot(u, v), su, sv))
}

/// `sqrt(x * x) == |x|` in IEEE arithmetic, so identical vectors score
/// exactly 1.
#[inline]
fn cosine_from_parts(dot_uv: f64, sq_u: f64, sq_v: f64) -> f64 {
    (dot_uv / (sq_u * sq_v).sqrt()).clamp(-1.0, 1.0)
}

/// Cosine similarity over the rows of an [`EmbeddingModel`].
#[derive(Clone, Debug)]
pub struct CosineSpace<'m> {
    model: &'m EmbeddingModel,
    squared_norms: Vec<f64>,
}

impl<'m> CosineSpace<'m> {
    pub fn new(model: &'m EmbeddingModel) -> Self {
        let squared_norms = (0..model.len())
            .map(|i| {
                let v = model.vector(WordId::new(i));
                dot(v, v)
            })
            .collect();
        CosineSpace { model, squared_norms }
    }

    pub fn model(&self) -> &'m EmbeddingModel {
        self.model
    }
}

impl SimilaritySpace for CosineSpace<'_> {
    fn len(&self) -> usize {
        self.model.len()
    }

    #[inline]
    fn similarity(&self, a: WordId, b: WordId) -> f64 {
        let m = self.model;
        // Products are formed in a fixed order so that s(a,b) == s(b,a) bit for bit.
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let d = dot(m.vector(x), m.vector(y));
        cosine_from_parts(d, self.squared_norms[x.index()], self.squared_norms[y.index()])
    }

    fn is_active(&self, id: WordId) -> bool {
        !self.model.is_zero(id)
    }
}

/// Raw points under negated Euclidean distance.
#[derive(Clone, Debug)]
pub struct EuclideanSpace {
    points: Vec<f64>,
    dim: usize,
}

impl EuclideanSpace {
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut points = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionDiffers(dim, r.len()));
            }
            points.extend_from_slice(r);
        }
        Ok(EuclideanSpace { points, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, id: WordId) -> &[f64] {
        let start = id.index() * self.dim;
        &self.points[start..start + self.dim]
    }

    /// Plain Euclidean distance between two points.
    pub fn distance(&self, a: WordId, b: WordId) -> f64 {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        self.point(x)
            .iter()
            .zip(self.point(y))
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }
}

impl SimilaritySpace for EuclideanSpace {
    fn len(&self) -> usize {
        self.points.len().checked_div(self.dim).unwrap_or(0)
    }

    #[inline]
    fn similarity(&self, a: WordId, b: WordId) -> f64 {
        -self.distance(a, b)
    }
}

/// Wraps a space and counts similarity evaluations.
#[derive(Debug)]
pub struct CountingSpace<S> {
    inner: S,
    calls: AtomicU64,
}

impl<S: SimilaritySpace> CountingSpace<S> {
    pub fn new(inner: S) -> Self {
        CountingSpace {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) -> u64 {
        self.calls.swap(0, Ordering::Relaxed)
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<S: SimilaritySpace> SimilaritySpace for CountingSpace<S> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn similarity(&self, a: WordId, b: WordId) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.similarity(a, b)
    }

    fn is_active(&self, id: WordId) -> bool {
        self.inner.is_active(id)
    }
}
