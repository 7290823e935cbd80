//! Exact k-nearest-neighbor search, rank lookup and threshold queries.
//!
//! All orderings are by descending similarity with ties broken by ascending
//! id, so every result is fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::WordId;
use crate::error::{Error, Result};
use crate::similarity::SimilaritySpace;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Neighbor {
    pub id: WordId,
    pub sim: f64,
}

impl Neighbor {
    pub fn new(id: WordId, sim: f64) -> Self {
        Neighbor { id, sim }
    }
}

/// `Less` when `a` ranks ahead of `b`.
#[inline]
pub fn rank_order(a: &Neighbor, b: &Neighbor) -> Ordering {
    b.sim.total_cmp(&a.sim).then(a.id.cmp(&b.id))
}

/// Heap entry ordered so that the worst-ranked neighbor sits on top.
#[derive(Clone, Copy, Debug)]
struct Ranked(Neighbor);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        rank_order(&self.0, &other.0) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        rank_order(&self.0, &other.0)
    }
}

/// Ranked neighbors of a reference point, best first. Ranks are 1-based
/// positions in `entries`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborList {
    pub reference: WordId,
    pub k: usize,
    pub entries: Vec<Neighbor>,
}

impl NeighborList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        self.entries.iter().map(|n| n.id)
    }

    pub fn sims(&self) -> Vec<f64> {
        self.entries.iter().map(|n| n.sim).collect()
    }

    /// 1-based rank of `id`, if present.
    pub fn rank(&self, id: WordId) -> Option<usize> {
        self.entries.iter().position(|n| n.id == id).map(|p| p + 1)
    }
}

fn candidates<S: SimilaritySpace + ?Sized>(space: &S, reference: WordId) -> impl Iterator<Item = Neighbor> + '_ {
    (0..space.len())
        .map(WordId::new)
        .filter(move |&id| id != reference && space.is_active(id))
        .map(move |id| Neighbor::new(id, space.similarity(reference, id)))
}

/// The `k` points most similar to `reference`, using a bounded heap.
///
/// Asking for more neighbors than exist returns all of them.
pub fn knn<S: SimilaritySpace + ?Sized>(space: &S, reference: WordId, k: usize) -> Result<NeighborList> {
    space.check(reference)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut heap: BinaryHeap<Ranked> = BinaryHeap::with_capacity(k.min(space.len()) + 1);
    for n in candidates(space, reference) {
        if heap.len() < k {
            heap.push(Ranked(n));
        } else if let Some(mut worst) = heap.peek_mut() {
            if rank_order(&n, &worst.0) == Ordering::Less {
                *worst = Ranked(n);
            }
        }
    }
    Ok(NeighborList {
        reference,
        k,
        entries: heap.into_sorted_vec().into_iter().map(|r| r.0).collect(),
    })
}

/// Every other active point, fully sorted.
pub fn exhaustive<S: SimilaritySpace + ?Sized>(space: &S, reference: WordId) -> Result<NeighborList> {
    space.check(reference)?;
    let mut entries: Vec<Neighbor> = candidates(space, reference).collect();
    entries.sort_by(rank_order);
    Ok(NeighborList {
        reference,
        k: entries.len(),
        entries,
    })
}

/// Runs [`knn`] for many references in parallel.
pub fn knn_many<S: SimilaritySpace + ?Sized>(space: &S, references: &[WordId], k: usize) -> Vec<Result<NeighborList>> {
    references.par_iter().map(|&r| knn(space, r, k)).collect()
}

/// 1-based position of `b` in the exhaustive neighbor list of `a`.
pub fn rank_of<S: SimilaritySpace + ?Sized>(space: &S, a: WordId, b: WordId) -> Result<usize> {
    if a == b {
        return Err(Error::SamePoint(a.index()));
    }
    space.check(a)?;
    space.check(b)?;
    let target = Neighbor::new(b, space.similarity(a, b));
    let ahead = candidates(space, a)
        .filter(|n| n.id != b && rank_order(n, &target) == Ordering::Less)
        .count();
    Ok(ahead + 1)
}

/// All points with similarity at least `threshold` to `reference`.
pub fn within_threshold<S: SimilaritySpace + ?Sized>(
    space: &S,
    reference: WordId,
    threshold: f64,
) -> Result<NeighborList> {
    space.check(reference)?;
    if threshold.is_nan() {
        return Err(Error::InvalidParameter("threshold is NaN".into()));
    }
    let mut entries: Vec<Neighbor> = candidates(space, reference).filter(|n| n.sim >= threshold).collect();
    entries.sort_by(rank_order);
    Ok(NeighborList {
        reference,
        k: entries.len(),
        entries,
    })
}
