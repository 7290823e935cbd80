// Build a positive-PMI model from raw text and query it.
//
// Each line is a document; co-occurrence windows never cross lines.
// The sparse PPMI matrix is reduced with a seeded Gaussian random
// projection, so the same seed always gives the same vectors.
//
// ```bash
// cargo run --example ppmi_model
// ```

use relneigh::pmi::tokenize_corpus;
use relneigh::{count_cooccurrences, knn, ppmi, random_projection, CosineSpace};

const CORPUS: &str = "\
the ship sailed across the sea at dawn
the whale swam under the ship in the sea
the captain watched the whale from the deck
a storm rose over the sea and the ship rolled
the court heard the case and the judge ruled
the lawyer argued the case before the judge
the judge left the court after the ruling
a lawyer filed an appeal with the court
";

pub fn run_example() -> relneigh::Result<()> {
    let docs = tokenize_corpus(CORPUS);
    let counts = count_cooccurrences(&docs, 2, 2)?;
    println!("{} types kept, {} co-occurrences", counts.vocab.len(), counts.total);

    let matrix = ppmi(&counts)?;
    println!("{} nonzero PPMI cells", matrix.nnz());

    let model = random_projection(&matrix, 256, 0)?;
    let space = CosineSpace::new(&model);
    for word in ["ship", "judge"] {
        let id = model.lookup(word)?;
        let near: Vec<&str> = knn(&space, id, 3)?.ids().map(|n| model.token(n)).collect();
        println!("{word}: {near:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
