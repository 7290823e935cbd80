//! Relative neighborhood graphs and the neighborhood structures built on them.
//!
//! A point `b` lies between `a` and `c` when it is strictly more similar to
//! both of them than they are to each other. `c` is a relative neighbor of
//! `a` when nothing lies between them. Restricting both neighbors and
//! blockers to the `k` nearest neighbors of `a` gives the k-RNG
//! neighborhood; letting `k` cover the whole vocabulary gives the horizon.
//!
//! Every routine here walks candidates in rank order (most similar to the
//! reference first). A blocker for `c` must be strictly more similar to the
//! reference than `c` is, so only the candidates ranked ahead of `c` need to
//! be inspected. For `k` candidates this costs at most `k(k-1)/2` extra
//! similarity evaluations.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::WordId;
use crate::error::{Error, Result};
use crate::knn::{knn, rank_order, Neighbor, NeighborList};
use crate::similarity::SimilaritySpace;

/// A relative neighbor annotated with its similarity to the reference and
/// its 1-based rank in the reference's k-NN list.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelativeNeighbor {
    pub id: WordId,
    pub sim: f64,
    pub rank: usize,
}

/// Undirected RNG edges stored as `(low, high)` id pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RngEdgeSet {
    pub edges: BTreeSet<(WordId, WordId)>,
    pub point_set_size: usize,
}

impl RngEdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: WordId, b: WordId) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    pub fn neighbors_of(&self, a: WordId) -> BTreeSet<WordId> {
        self.edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }
}

fn ordered(a: WordId, b: WordId) -> (WordId, WordId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The relative neighborhood of `a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Horizon {
    pub reference: WordId,
    pub neighbors: Vec<RelativeNeighbor>,
}

/// Points of `candidates` that lie strictly between `a` and `c`.
pub fn betweens<S: SimilaritySpace + ?Sized>(
    space: &S,
    candidates: &[WordId],
    a: WordId,
    c: WordId,
) -> Result<BTreeSet<WordId>> {
    if a == c {
        return Err(Error::SamePoint(a.index()));
    }
    space.check(a)?;
    space.check(c)?;
    let s_ac = space.similarity(a, c);
    let mut out = BTreeSet::new();
    for &b in candidates {
        space.check(b)?;
        if b == a || b == c {
            continue;
        }
        if space.similarity(a, b) > s_ac && space.similarity(c, b) > s_ac {
            out.insert(b);
        }
    }
    Ok(out)
}

/// Positions in `ranked` (sorted best first relative to some reference) of
/// the candidates that no other candidate blocks.
fn unblocked<F>(ranked: &[Neighbor], mut sim: F) -> Vec<usize>
where
    F: FnMut(WordId, WordId) -> f64,
{
    let mut keep = Vec::new();
    for (j, c) in ranked.iter().enumerate() {
        let blocked = ranked[..j]
            .iter()
            .take_while(|b| b.sim > c.sim)
            .any(|b| sim(c.id, b.id) > c.sim);
        if !blocked {
            keep.push(j);
        }
    }
    keep
}

/// Ranks `points` relative to `a`, dropping `a`, duplicates and inactive ids.
fn rank_points<S: SimilaritySpace + ?Sized>(space: &S, points: &[WordId], a: WordId) -> Result<Vec<Neighbor>> {
    let mut seen = BTreeSet::new();
    let mut ranked = Vec::with_capacity(points.len());
    for &p in points {
        if p.index() >= space.len() {
            return Err(Error::InvalidId {
                id: p.index(),
                len: space.len(),
            });
        }
        if p == a || !space.is_active(p) || !seen.insert(p) {
            continue;
        }
        ranked.push(Neighbor::new(p, space.similarity(a, p)));
    }
    ranked.sort_by(rank_order);
    Ok(ranked)
}

/// Relative neighbors of `a` within the point set `points`.
pub fn rng_neighbors<S: SimilaritySpace + ?Sized>(space: &S, points: &[WordId], a: WordId) -> Result<BTreeSet<WordId>> {
    space.check(a)?;
    let ranked = rank_points(space, points, a)?;
    Ok(unblocked(&ranked, |x, y| space.similarity(x, y))
        .into_iter()
        .map(|j| ranked[j].id)
        .collect())
}

/// The full relative neighborhood graph over `points`.
///
/// Pairwise similarities are computed once, then each point's neighborhood
/// is resolved in parallel.
pub fn rng_edges<S: SimilaritySpace + ?Sized>(space: &S, points: &[WordId]) -> Result<RngEdgeSet> {
    let mut ids: Vec<WordId> = Vec::with_capacity(points.len());
    for &p in points {
        if p.index() >= space.len() {
            return Err(Error::InvalidId {
                id: p.index(),
                len: space.len(),
            });
        }
        if space.is_active(p) {
            ids.push(p);
        }
    }
    ids.sort();
    ids.dedup();
    let n = ids.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, have: n });
    }

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0.0 } else { space.similarity(ids[i], ids[j]) })
                .collect()
        })
        .collect();
    let local: HashMap<WordId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

    let per_point: Vec<Vec<(WordId, WordId)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut ranked: Vec<Neighbor> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Neighbor::new(ids[j], rows[i][j]))
                .collect();
            ranked.sort_by(rank_order);
            unblocked(&ranked, |x, y| rows[local[&x]][local[&y]])
                .into_iter()
                .map(|j| ordered(ids[i], ranked[j].id))
                .collect()
        })
        .collect();

    let mut edges = BTreeSet::new();
    for e in per_point.into_iter().flatten() {
        edges.insert(e);
    }
    Ok(RngEdgeSet {
        edges,
        point_set_size: n,
    })
}

/// Relative neighbors of `a` with neighbors and blockers both restricted to
/// its `k` nearest neighbors, in k-NN rank order.
pub fn krng_neighbors<S: SimilaritySpace + ?Sized>(space: &S, a: WordId, k: usize) -> Result<Vec<RelativeNeighbor>> {
    let list = knn(space, a, k)?;
    Ok(krng_from_list(space, &list))
}

/// k-RNG neighborhood over an already computed neighbor list.
pub fn krng_from_list<S: SimilaritySpace + ?Sized>(space: &S, list: &NeighborList) -> Vec<RelativeNeighbor> {
    unblocked(&list.entries, |x, y| space.similarity(x, y))
        .into_iter()
        .map(|j| RelativeNeighbor {
            id: list.entries[j].id,
            sim: list.entries[j].sim,
            rank: j + 1,
        })
        .collect()
}

/// Relative neighbors of `a` over the entire vocabulary.
pub fn horizon<S: SimilaritySpace + ?Sized>(space: &S, a: WordId) -> Result<Horizon> {
    space.check(a)?;
    let active = space.active_ids().len();
    if active < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            have: active,
        });
    }
    Ok(Horizon {
        reference: a,
        neighbors: krng_neighbors(space, a, active - 1)?,
    })
}

/// A node of a relative neighborhood tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TreeNode {
    pub id: WordId,
    /// Similarity to the root.
    pub sim: f64,
    /// 1-based k-NN rank relative to the root.
    pub rank: usize,
    pub parent: WordId,
    /// Number of edges from the root.
    pub depth: usize,
}

/// A tree rooted at a reference word. Each node hangs below the point that
/// is most similar to it among the root and the points lying between it and
/// the root, so the root's children are its relative neighbors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RngTree {
    pub root: WordId,
    /// Non-root nodes in k-NN rank order.
    pub nodes: Vec<TreeNode>,
}

impl RngTree {
    pub fn len(&self) -> usize {
        self.nodes.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, id: WordId) -> Option<&TreeNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn parent(&self, id: WordId) -> Option<WordId> {
        self.node(id).map(|n| n.parent)
    }

    pub fn children(&self, id: WordId) -> Vec<WordId> {
        self.nodes.iter().filter(|n| n.parent == id).map(|n| n.id).collect()
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Non-root nodes at most `depth` edges below the root.
    pub fn depth_slice(&self, depth: usize) -> BTreeSet<WordId> {
        tree_depth_slice(self, depth)
    }
}

/// Builds the relative neighborhood tree of `a` over its `k` nearest
/// neighbors.
pub fn rn_tree<S: SimilaritySpace + ?Sized>(space: &S, a: WordId, k: usize) -> Result<RngTree> {
    let list = knn(space, a, k)?;
    let ranked = &list.entries;
    let mut nodes: Vec<TreeNode> = Vec::with_capacity(ranked.len());
    let mut depth_of: HashMap<WordId, usize> = HashMap::with_capacity(ranked.len() + 1);
    depth_of.insert(a, 0);

    for (j, c) in ranked.iter().enumerate() {
        // Candidate parents are points between a and c; a itself is the
        // fallback and always loses to any of them since s(c,b) > s(a,c).
        let mut best: Option<Neighbor> = None;
        for b in ranked[..j].iter().take_while(|b| b.sim > c.sim) {
            let s_cb = space.similarity(c.id, b.id);
            if s_cb > c.sim {
                let cand = Neighbor::new(b.id, s_cb);
                if best.is_none_or(|cur| rank_order(&cand, &cur).is_lt()) {
                    best = Some(cand);
                }
            }
        }
        let parent = best.map_or(a, |b| b.id);
        let depth = depth_of[&parent] + 1;
        depth_of.insert(c.id, depth);
        nodes.push(TreeNode {
            id: c.id,
            sim: c.sim,
            rank: j + 1,
            parent,
            depth,
        });
    }
    Ok(RngTree { root: a, nodes })
}

/// Non-root nodes whose distance from the root, in edges, is at most `depth`.
pub fn tree_depth_slice(tree: &RngTree, depth: usize) -> BTreeSet<WordId> {
    tree.nodes.iter().filter(|n| n.depth <= depth).map(|n| n.id).collect()
}
