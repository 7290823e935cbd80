// Relative neighborhood graph of a random planar point set.
//
// Two points are joined unless some third point is closer to both of
// them than they are to each other. The result always contains the
// minimum spanning tree and every nearest-neighbor edge.
//
// ```bash
// cargo run --example rng_graph
// ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relneigh::{knn, rng_edges, EuclideanSpace, WordId};

pub fn run_example() -> relneigh::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points: Vec<[f64; 2]> = (0..30).map(|_| [rng.gen(), rng.gen()]).collect();
    let space = EuclideanSpace::new(&points)?;
    let all: Vec<WordId> = (0..points.len()).map(WordId::new).collect();

    let graph = rng_edges(&space, &all)?;
    println!("{} points, {} edges", points.len(), graph.len());
    for &(a, b) in graph.edges.iter().take(5) {
        println!("  {a} -- {b}  (distance {:.3})", space.distance(a, b));
    }

    for &a in &all {
        let nn = knn(&space, a, 1)?.entries[0].id;
        assert!(graph.contains(a, nn));
    }
    let degrees: Vec<usize> = all.iter().map(|&a| graph.neighbors_of(a).len()).collect();
    println!("max degree {}", degrees.iter().max().unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
