use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relneigh::cli::{run, KnnJson, TreeJson};
use relneigh::{load_text_embeddings, rank_of, CosineSpace};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relneigh"))
}

fn exec(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = exec(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SQUARE: &str = "a 0 0\nb 1 0\nc 1 1\nd 0 1\n";
const COLLINEAR: &str = "a 0 0\nb 1 0\nc 3 0\n";

fn random_model(dir: &Path, n: usize, dim: usize) -> PathBuf {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("w{i}"));
        for _ in 0..dim {
            text.push_str(&format!(" {}", rng.gen_range(-1.0f64..1.0)));
        }
        text.push('\n');
    }
    write(dir, "rand.txt", &text)
}

#[test]
fn knn_on_two_words() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "x 1 0\ny 0.6 0.8\n");
    let out = stdout_of(&["knn", "x", "--model", s(&m), "-k", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("1\ty\t"));
    let sim: f64 = lines[0].split('\t').nth(2).unwrap().parse().unwrap();
    assert!((sim - 0.6).abs() < 1e-15);
}

#[test]
fn knn_truncates_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let out = exec(&["knn", "a", "--model", s(&m), "-k", "10", "--similarity", "euclidean"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("warning: k=10"));
}

#[test]
fn knn_json_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let out = stdout_of(&[
        "knn",
        "a",
        "--model",
        s(&m),
        "-k",
        "3",
        "--similarity",
        "euclidean",
        "--format",
        "json",
    ]);
    let doc: KnnJson = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.query, "a");
    assert_eq!(doc.k, 3);
    let words: Vec<&str> = doc.neighbors.iter().map(|n| n.word.as_str()).collect();
    assert_eq!(words, ["b", "d", "c"]);
    assert_eq!(doc.neighbors.iter().map(|n| n.rank).collect::<Vec<_>>(), [1, 2, 3]);
    assert_eq!(doc.neighbors[0].sim, -1.0);
}

#[test]
fn unknown_word_fails_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "Paris 1 0\nrome 0 1\n");
    let out = exec(&["knn", "nowhere", "--model", s(&m)]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("nowhere"));
    let out = exec(&["knn", "PARIS", "--model", s(&m), "--fold-case"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("Paris"));
    let out = stdout_of(&["knn", "Rome", "--model", s(&m), "--fold-case"]);
    assert!(out.starts_with("1\tParis\t"));
}

#[test]
fn square_gives_two_relative_neighbors() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    for w in ["a", "b", "c", "d"] {
        let h = stdout_of(&["horizon", w, "--model", s(&m), "--similarity", "euclidean"]);
        assert_eq!(h.lines().count(), 2, "{w}: {h}");
        let k = stdout_of(&["krng", w, "--model", s(&m), "--similarity", "euclidean", "-k", "3"]);
        assert_eq!(h, k);
    }
    let a = stdout_of(&["horizon", "a", "--model", s(&m), "--similarity", "euclidean"]);
    assert_eq!(a, "b (1)\nd (2)\n");
}

#[test]
fn krng_with_k_one_has_rank_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_model(dir.path(), 40, 5);
    for w in ["w0", "w7", "w39"] {
        let out = stdout_of(&["krng", w, "--model", s(&m), "-k", "1"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].ends_with(" (1)"));
    }
}

#[test]
fn relative_listing_is_in_descending_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_model(dir.path(), 200, 4);
    let out = stdout_of(&["krng", "w3", "--model", s(&m), "-k", "50"]);
    let ranks: Vec<usize> = out
        .lines()
        .map(|l| {
            let (word, rank) = l.rsplit_once(' ').unwrap();
            assert!(!word.is_empty());
            rank.trim_matches(|c| c == '(' || c == ')').parse().unwrap()
        })
        .collect();
    assert!(!ranks.is_empty());
    assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(ranks[0], 1);
}

/// Minimal structural check of the DOT subset we emit: a digraph header,
/// statements ending in `;`, quoted ids, and a closing brace.
fn parse_dot(text: &str) -> (String, Vec<String>, Vec<(String, String)>) {
    fn quoted(s: &str) -> (String, &str) {
        assert!(s.starts_with('"'), "unquoted id in {s}");
        let mut out = String::new();
        let mut chars = s[1..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => out.push(chars.next().unwrap().1),
                '"' => return (out, &s[i + 2..]),
                _ => out.push(c),
            }
        }
        panic!("unterminated id");
    }
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    let rest = head.strip_prefix("digraph ").expect("digraph header");
    let (name, tail) = quoted(rest);
    assert_eq!(tail.trim(), "{");
    let (mut nodes, mut edges) = (Vec::new(), Vec::new());
    let mut closed = false;
    for line in lines {
        let line = line.trim();
        if line == "}" {
            closed = true;
            continue;
        }
        assert!(!closed, "content after closing brace");
        let stmt = line.strip_suffix(';').expect("statement ends with ;");
        let (from, tail) = quoted(stmt);
        match tail.trim().strip_prefix("->") {
            Some(to) => {
                let (to, end) = quoted(to.trim());
                assert!(end.is_empty());
                edges.push((from, to));
            }
            None => {
                assert!(tail.is_empty());
                nodes.push(from);
            }
        }
    }
    assert!(closed);
    (name, nodes, edges)
}

#[test]
fn tree_on_collinear_points() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", COLLINEAR);
    let dot = stdout_of(&["tree", "a", "--model", s(&m), "--similarity", "euclidean", "-k", "2"]);
    let (name, nodes, edges) = parse_dot(&dot);
    assert_eq!(name, "a");
    assert_eq!(nodes, ["a"]);
    assert_eq!(
        edges,
        [("a".to_owned(), "b".to_owned()), ("b".to_owned(), "c".to_owned())]
    );

    let dot = stdout_of(&[
        "tree",
        "a",
        "--model",
        s(&m),
        "--similarity",
        "euclidean",
        "-k",
        "2",
        "--depth",
        "1",
    ]);
    let (_, _, edges) = parse_dot(&dot);
    assert_eq!(edges, [("a".to_owned(), "b".to_owned())]);

    let json = stdout_of(&[
        "tree",
        "a",
        "--model",
        s(&m),
        "--similarity",
        "euclidean",
        "-k",
        "2",
        "--format",
        "json",
    ]);
    let t: TreeJson = serde_json::from_str(&json).unwrap();
    assert_eq!(t.word, "a");
    assert_eq!(t.sim, 0.0);
    assert_eq!(t.children.len(), 1);
    assert_eq!(t.children[0].word, "b");
    assert_eq!(t.children[0].children[0].word, "c");
    assert!(t.children[0].children[0].children.is_empty());
}

#[test]
fn tree_dot_is_rooted_and_depth_filtered() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_model(dir.path(), 120, 3);
    let full = stdout_of(&["tree", "w5", "--model", s(&m), "-k", "60"]);
    let (name, _, edges) = parse_dot(&full);
    assert_eq!(name, "w5");
    assert_eq!(edges.len(), 60);
    let children: std::collections::HashSet<&str> = edges.iter().map(|e| e.1.as_str()).collect();
    assert_eq!(children.len(), 60);
    assert!(!children.contains("w5"));
    let d1 = stdout_of(&["tree", "w5", "--model", s(&m), "-k", "60", "--depth", "1"]);
    let (_, _, top) = parse_dot(&d1);
    assert!(top.iter().all(|e| e.0 == "w5"));
    let krng = stdout_of(&["krng", "w5", "--model", s(&m), "-k", "60"]);
    assert_eq!(top.len(), krng.lines().count());
}

#[test]
fn dot_escapes_awkward_tokens() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "\"q\" 1 0\na\\b 0.9 0.1\nc 0 1\n");
    let dot = stdout_of(&["tree", "\"q\"", "--model", s(&m), "-k", "2"]);
    let (name, _, edges) = parse_dot(&dot);
    assert_eq!(name, "\"q\"");
    assert_eq!(edges[0], ("\"q\"".to_owned(), "a\\b".to_owned()));
}

const TOY_CORPUS: &str = "the cat sat on the mat\nthe dog sat on the log\n";

#[test]
fn build_pmi_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", TOY_CORPUS);
    let out = dir.path().join("m.txt");
    let msg = stdout_of(&[
        "build-pmi",
        "--corpus",
        s(&c),
        "--out",
        s(&out),
        "--min-count",
        "1",
        "--target-dim",
        "16",
    ]);
    assert_eq!(msg, "vocab 7 dim 16\n");
    let model = load_text_embeddings(&out, false).unwrap();
    assert_eq!((model.len(), model.dim()), (7, 16));
    assert_eq!(model.vocab()[0], "the");
    let hout = dir.path().join("h.txt");
    stdout_of(&[
        "build-pmi",
        "--corpus",
        s(&c),
        "--out",
        s(&hout),
        "--min-count",
        "1",
        "--target-dim",
        "16",
        "--header",
    ]);
    let with_header = load_text_embeddings(&hout, true).unwrap();
    for i in 0..7 {
        let id = relneigh::WordId::new(i);
        assert_eq!(model.vector(id), with_header.vector(id));
    }
}

#[test]
fn build_pmi_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", TOY_CORPUS);
    let outs: Vec<Vec<u8>> = ["1", "1", "4"]
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = dir.path().join(format!("m{i}.txt"));
            stdout_of(&[
                "--threads",
                t,
                "build-pmi",
                "--corpus",
                s(&c),
                "--out",
                s(&p),
                "--min-count",
                "1",
                "--target-dim",
                "100",
                "--seed",
                "9",
            ]);
            fs::read(&p).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
    let other = dir.path().join("other.txt");
    stdout_of(&[
        "build-pmi",
        "--corpus",
        s(&c),
        "--out",
        s(&other),
        "--min-count",
        "1",
        "--target-dim",
        "100",
        "--seed",
        "10",
    ]);
    assert_ne!(fs::read(&other).unwrap(), outs[0]);
}

#[test]
fn build_pmi_writes_sparse_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", "x y\n");
    let (m, counts, pp) = (dir.path().join("m"), dir.path().join("counts"), dir.path().join("ppmi"));
    stdout_of(&[
        "build-pmi",
        "--corpus",
        s(&c),
        "--out",
        s(&m),
        "--min-count",
        "0",
        "--target-dim",
        "4",
        "--counts-out",
        s(&counts),
        "--ppmi-out",
        s(&pp),
    ]);
    let counts = fs::read_to_string(counts).unwrap();
    assert!(counts.starts_with("#vocab 2\n"));
    assert_eq!(counts.lines().count(), 3);
    let pp = fs::read_to_string(pp).unwrap();
    let v: f64 = pp.lines().nth(1).unwrap().split('\t').nth(2).unwrap().parse().unwrap();
    assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn empty_corpus_is_an_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "empty-corpus.txt", "\n\n");
    let out_path = dir.path().join("m.txt");
    let out = exec(&["build-pmi", "--corpus", s(&c), "--out", s(&out_path)]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("empty-corpus.txt"));
    assert!(!out_path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn sample_commands_have_requested_sizes_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_model(dir.path(), 150, 6);
    let model = load_text_embeddings(&m, false).unwrap();
    let space = CosineSpace::new(&model);

    let rec = stdout_of(&["reciprocity", "--model", s(&m), "--n-pairs", "300", "--seed", "4"]);
    let mut lines = rec.lines();
    assert_eq!(lines.next(), Some("a,b,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 300);
    for row in rows.iter().step_by(17) {
        let f: Vec<&str> = row.split(',').collect();
        let (a, b) = (model.lookup(f[0]).unwrap(), model.lookup(f[1]).unwrap());
        assert_eq!(rank_of(&space, a, b).unwrap().to_string(), f[2]);
        assert_eq!(rank_of(&space, b, a).unwrap().to_string(), f[3]);
    }

    let prefix = dir.path().join("dens");
    let summary = stdout_of(&[
        "density",
        "--model",
        s(&m),
        "--n-pairs",
        "250",
        "--n-words",
        "120",
        "-k",
        "5",
        "--out",
        s(&prefix),
    ]);
    assert_eq!(summary.lines().count(), 2);
    let pairs = fs::read_to_string(dir.path().join("dens.pairs.csv")).unwrap();
    let knn = fs::read_to_string(dir.path().join("dens.knn.csv")).unwrap();
    assert_eq!(pairs.lines().next(), Some("pair_sim"));
    assert_eq!(pairs.lines().count(), 251);
    assert_eq!(knn.lines().next(), Some("knn_mean_sim"));
    assert_eq!(knn.lines().count(), 121);

    let curve = stdout_of(&["simcurve", "w9", "--model", s(&m), "-k", "30"]);
    let list = relneigh::knn(&space, model.lookup("w9").unwrap(), 30).unwrap();
    let mut lines = curve.lines();
    assert_eq!(lines.next(), Some("rank,sim"));
    for (i, line) in lines.enumerate() {
        let (r, v) = line.split_once(',').unwrap();
        assert_eq!(r.parse::<usize>().unwrap(), i + 1);
        assert_eq!(v.parse::<f64>().unwrap(), list.entries[i].sim);
    }
    assert_eq!(curve.lines().count(), 31);
}

#[test]
fn seeded_commands_repeat_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_model(dir.path(), 120, 8);
    let commands: Vec<Vec<&str>> = vec![
        vec!["reciprocity", "--model", s(&m), "--n-pairs", "200", "--seed", "3"],
        vec![
            "density",
            "--model",
            s(&m),
            "--n-pairs",
            "200",
            "--n-words",
            "50",
            "--seed",
            "3",
        ],
        vec!["tree", "w1", "--model", s(&m), "-k", "50"],
        vec!["horizon", "w1", "--model", s(&m), "--format", "json"],
    ];
    for cmd in &commands {
        let mut seen = Vec::new();
        for t in ["1", "1", "3"] {
            let mut args = vec!["--threads", t];
            args.extend(cmd);
            seen.push(stdout_of(&args));
        }
        assert_eq!(seen[0], seen[1], "{cmd:?}");
        assert_eq!(seen[0], seen[2], "{cmd:?}");
    }
    let a = stdout_of(&["reciprocity", "--model", s(&m), "--n-pairs", "200", "--seed", "4"]);
    assert_ne!(a, stdout_of(&commands[0]));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let conf = write(
        dir.path(),
        "run.conf",
        &format!("model = {}\nsimilarity = euclidean\nk = 1\n", s(&m)),
    );
    let out = stdout_of(&["--config", s(&conf), "knn", "c"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("1\tb\t"));
    let out = stdout_of(&["--config", s(&conf), "knn", "c", "-k", "2"]);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn help_documents_defaults() {
    let expect: &[(&str, &[&str])] = &[
        (
            "build-pmi",
            &[
                "--window",
                "[default: 2]",
                "[default: 2000]",
                "[default: 5]",
                "[default: 0]",
                "--counts-out",
            ],
        ),
        ("knn", &["--model", "[default: 100]", "[default: cosine]", "--format"]),
        ("krng", &["[default: 100]", "--fold-case"]),
        ("horizon", &["--similarity", "--header"]),
        ("tree", &["--depth", "[default: unbounded]", "[default: dot]"]),
        ("reciprocity", &["--n-pairs", "[default: 1000]", "--seed"]),
        ("density", &["--n-words", "[default: 10]"]),
        ("simcurve", &["[default: 100]", "--out"]),
    ];
    for (cmd, needles) in expect {
        let help = stdout_of(&[cmd, "--help"]);
        for n in *needles {
            assert!(help.contains(n), "{cmd} --help lacks {n}");
        }
        for line in help
            .lines()
            .map(str::trim)
            .filter(|l| l.starts_with("--") || l.starts_with("-k"))
        {
            if line.starts_with("--help") {
                continue;
            }
            assert!(!line.ends_with('>') || help.contains("[default"), "{cmd}: {line}");
        }
    }
    let top = stdout_of(&["--help"]);
    for cmd in [
        "build-pmi",
        "knn",
        "krng",
        "horizon",
        "tree",
        "reciprocity",
        "density",
        "simcurve",
        "--threads",
        "--config",
    ] {
        assert!(top.contains(cmd));
    }
}

#[test]
fn failed_output_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let target = dir.path().join("missing-dir").join("out.txt");
    let out = exec(&["knn", "a", "--model", s(&m), "--out", s(&target)]);
    assert!(!out.status.success());
    assert!(!target.exists());

    // Density with an unwritable second file must not leave the first one behind.
    let prefix = dir.path().join("d");
    fs::create_dir(dir.path().join("d.knn.csv")).unwrap();
    let out = exec(&[
        "density",
        "--model",
        s(&m),
        "--n-pairs",
        "3",
        "--n-words",
        "2",
        "-k",
        "1",
        "--out",
        s(&prefix),
    ]);
    assert!(!out.status.success());
    assert!(!dir.path().join("d.pairs.csv").exists());
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "a 1 2\nb 1\n");
    let out = exec(&["knn", "a", "--model", s(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    assert!(!exec(&["knn", "a", "--model", s(&dir.path().join("nope.txt"))])
        .status
        .success());
    assert!(!exec(&["knn", "a", "--model", s(&bad), "-k", "0"]).status.success());
    assert!(!exec(&["frobnicate"]).status.success());
}

#[test]
fn in_process_run_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let args = [
        "relneigh",
        "krng",
        "c",
        "--model",
        s(&m),
        "--similarity",
        "euclidean",
        "-k",
        "3",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    run(args, &mut out, &mut err).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), stdout_of(&args[1..]));
    assert!(err.is_empty());
}

#[test]
fn zero_vectors_warn_only_under_cosine() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", SQUARE);
    let cos = exec(&["knn", "b", "--model", s(&m)]);
    assert!(cos.status.success());
    assert!(String::from_utf8(cos.stderr).unwrap().contains("`a` is a zero vector"));
    assert!(!String::from_utf8(cos.stdout).unwrap().contains("\ta\t"));
    assert!(!exec(&["knn", "a", "--model", s(&m)]).status.success());
}
