// Load a word2vec-style text model and list nearest neighbors.
//
// ```bash
// cargo run --example knn_search
// ```

use std::io::Cursor;

use relneigh::{knn, rank_of, read_text_embeddings, within_threshold, CosineSpace};

const MODEL: &str = "\
6 3
bank 0.9 0.3 0.1
river 0.8 0.1 0.6
money 0.7 0.6 0.0
loan 0.6 0.7 0.1
shore 0.6 0.0 0.8
tree 0.0 0.2 1.0
";

pub fn run_example() -> relneigh::Result<()> {
    let model = read_text_embeddings(Cursor::new(MODEL), true)?;
    let space = CosineSpace::new(&model);
    let bank = model.lookup("bank")?;

    let list = knn(&space, bank, 3)?;
    for (i, n) in list.entries.iter().enumerate() {
        println!("{}\t{}\t{:.4}", i + 1, model.token(n.id), n.sim);
    }

    // Ranks are not symmetric.
    let tree = model.lookup("tree")?;
    println!(
        "tree is #{} for bank, bank is #{} for tree",
        rank_of(&space, bank, tree)?,
        rank_of(&space, tree, bank)?
    );

    let close = within_threshold(&space, bank, 0.85)?;
    println!("{} words with cosine >= 0.85", close.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
