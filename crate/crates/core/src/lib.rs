//! Relative neighborhood graphs over word-embedding spaces.
//!
//! A ranked k-NN list says nothing about how the neighbors relate to each
//! other. This crate computes the relative neighborhood graph (RNG) of a
//! point set, its k-restricted variant, rooted relative neighborhood trees
//! and the horizon of a word (its relative neighbors over the whole
//! vocabulary). It also builds positive-PMI models from raw text and emits
//! the neighborhood diagnostics used to inspect a model.
//!
//! ```
//! use relneigh::{EuclideanSpace, WordId, rng_neighbors};
//!
//! let space = EuclideanSpace::new(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
//! let all: Vec<WordId> = (0..3).map(WordId::new).collect();
//! let nbh = rng_neighbors(&space, &all, WordId::new(0)).unwrap();
//! assert_eq!(nbh.into_iter().collect::<Vec<_>>(), vec![WordId::new(1)]);
//! ```

pub mod analysis;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod knn;
pub mod pmi;
pub mod rng;
pub mod similarity;

pub use analysis::{density_stats, reciprocity_sample, similarity_curve, DensitySummary, FiveNumber, ReciprocityPair};
pub use embedding::{load_text_embeddings, read_text_embeddings, EmbeddingModel, LoadReport, WordId};
pub use error::{Error, Result};
pub use knn::{exhaustive, knn, knn_many, rank_of, within_threshold, Neighbor, NeighborList};
pub use pmi::{count_cooccurrences, ppmi, random_projection, tokenize, CooccurrenceCounts, PpmiMatrix};
pub use rng::{
    betweens, horizon, krng_neighbors, rn_tree, rng_edges, rng_neighbors, tree_depth_slice, Horizon, RelativeNeighbor,
    RngEdgeSet, RngTree, TreeNode,
};
pub use similarity::{cosine, CosineSpace, CountingSpace, EuclideanSpace, SimilaritySpace};

/// Formats a float with 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
