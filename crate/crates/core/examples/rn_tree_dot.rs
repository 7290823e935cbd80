// Relative neighborhood tree rooted at a word, printed as Graphviz DOT.
//
// ```bash
// cargo run --example rn_tree_dot > tree.dot && dot -Tsvg tree.dot -o tree.svg
// ```

use std::io::Cursor;

use relneigh::{read_text_embeddings, rn_tree, CosineSpace};

const MODEL: &str = "\
heart 1.0 0.0 0.0 0.0
cardiac 0.9 0.3 0.0 0.0
artery 0.8 0.4 0.2 0.0
vein 0.7 0.4 0.3 0.0
love 0.7 0.0 0.0 0.6
romance 0.5 0.0 0.1 0.8
soul 0.6 0.0 0.4 0.5
";

pub fn run_example() -> relneigh::Result<()> {
    let model = read_text_embeddings(Cursor::new(MODEL), false)?;
    let space = CosineSpace::new(&model);
    let root = model.lookup("heart")?;
    let tree = rn_tree(&space, root, 6)?;

    println!("digraph \"heart\" {{");
    for node in &tree.nodes {
        println!("  \"{}\" -> \"{}\";", model.token(node.parent), model.token(node.id));
    }
    println!("}}");

    let senses: Vec<&str> = tree.depth_slice(1).into_iter().map(|id| model.token(id)).collect();
    eprintln!("depth 1: {senses:?}, height {}", tree.height());
    Ok(())
}

#[allow(dead_code)]
fn main() -> relneigh::Result<()> {
    run_example()
}
