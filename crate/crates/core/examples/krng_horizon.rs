// k-restricted relative neighbors and the full horizon of a point.
//
// The k-RNG only looks inside the k nearest neighbors, so it costs
// O(k^2) similarity calls on top of the k-NN scan. `CountingSpace`
// makes that visible.
//
// ```bash
// cargo run --example krng_horizon
// ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relneigh::{horizon, krng_neighbors, CountingSpace, EuclideanSpace, WordId};

pub fn run_example() -> relneigh::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 2000;
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let space = CountingSpace::new(EuclideanSpace::new(&points)?);
    let a = WordId::new(0);

    for k in [5, 20, 80] {
        space.reset();
        let nbrs = krng_neighbors(&space, a, k)?;
        let ranks: Vec<String> = nbrs.iter().map(|r| format!("{} ({})", r.id, r.rank)).collect();
        println!("k={k:<3} calls={:<5} {}", space.calls(), ranks.join(", "));
    }

    let h = horizon(&space, a)?;
    println!(
        "horizon: {} relative neighbors over all {} points",
        h.neighbors.len(),
        n
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
