// Neighborhood diagnostics for a model: rank reciprocity of random
// pairs, random-pair vs k-NN density, and the similarity curve of a word.
//
// ```bash
// cargo run --example diagnostics
// ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relneigh::{density_stats, reciprocity_sample, similarity_curve, CosineSpace, EmbeddingModel, WordId};

pub fn run_example() -> relneigh::Result<()> {
    // A few tight clusters in 20 dimensions.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let centers: Vec<Vec<f64>> = (0..8)
        .map(|_| (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..400)
        .map(|i| centers[i % 8].iter().map(|c| c + rng.gen_range(-0.3..0.3)).collect())
        .collect();
    let names: Vec<String> = (0..rows.len()).map(|i| format!("w{i}")).collect();
    let model = EmbeddingModel::from_rows(names, rows)?;
    let space = CosineSpace::new(&model);

    let pairs = reciprocity_sample(&space, 200, 0)?;
    let lopsided = pairs.iter().filter(|p| p.x.max(p.y) > 4 * p.x.min(p.y)).count();
    println!("{lopsided} of {} pairs differ in rank by more than 4x", pairs.len());

    let d = density_stats(&space, 100, 500, 10, 0)?;
    println!("median random-pair sim {:.3}", d.random_pair_summary.median);
    println!("median 10-NN mean sim  {:.3}", d.knn_mean_summary.median);

    let curve = similarity_curve(&space, WordId::new(0), 60)?;
    println!(
        "curve: s1={:.3} s2={:.3} s50={:.3} s60={:.3}",
        curve[0], curve[1], curve[49], curve[59]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
