use std::path::Path;

use depsense::conllu::parse_conllu_str;
use depsense::eval::{self, dataset, spearman, CompositionalScorer, SentenceScorer, SimilarityPair, SvoTriple};
use depsense::synthetic::{generate, SyntheticParams};
use depsense::{
    build_ppmi_spaces, extract_triples, Composer, ComposeOptions, Fallback, Pos, PpmiParams, RelationFilter,
    TripleCountTable,
};

fn read(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)).unwrap()
}

fn catch_ball() -> (TripleCountTable, depsense::SpaceSet) {
    let corpus = parse_conllu_str(&read("catch_ball.conllu"));
    let filter = RelationFilter::default();
    let table = TripleCountTable::accumulate(corpus.trees.iter().flat_map(|t| extract_triples(t, &filter)));
    let spaces = build_ppmi_spaces(
        &table,
        PpmiParams {
            min_count: 1,
            ..PpmiParams::default()
        },
    )
    .unwrap();
    (table, spaces)
}

#[test]
fn bundled_synthetic_files_match_the_generator() {
    let generated = generate(&SyntheticParams::default());
    assert_eq!(read("synthetic.conllu"), generated.corpus);
    let mut tsv = Vec::new();
    dataset::write_dataset(&generated.pairs, &mut tsv).unwrap();
    assert_eq!(read("synthetic_pairs.tsv"), String::from_utf8(tsv).unwrap());
}

#[test]
fn grand_total_matches_an_edge_scan() {
    let text = read("catch_ball.conllu");
    // subject and object rows, found without the parser
    let scanned = text
        .lines()
        .filter(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            cols.len() == 10 && (cols[7] == "nsubj" || cols[7] == "obj") && cols[3] == "NOUN"
        })
        .count() as u64;
    let (table, _) = catch_ball();
    assert_eq!(table.total(), scanned);
    assert_eq!(scanned, 40);
}

#[test]
fn sentence_vector_is_the_verb_contextualized_by_both_arguments() {
    let (table, spaces) = catch_ball();
    let composer = Composer::new(&table, &spaces, ComposeOptions::default());
    let tree = SvoTriple::parse("girl catch ball").unwrap().tree();
    let sentence = composer.sentence_vector(&tree).unwrap();

    let (by_object, _) = composer
        .contextualize_pair(("catch", Pos::Verb), ("ball", Pos::Noun), "obj")
        .unwrap();
    let (by_subject, _) = composer
        .contextualize_pair(("catch", Pos::Verb), ("girl", Pos::Noun), "nsubj")
        .unwrap();
    // multiplicative steps: the product of both restrictions, renormalized
    let base = spaces.vector("catch", Pos::Verb).unwrap();
    let pref = |q| composer.preference(&q).vector;
    let p_obj = pref(depsense::compose::SlotQuery::new("ball", Pos::Noun, "obj", depsense::Slot::Head, Pos::Verb));
    let p_subj = pref(depsense::compose::SlotQuery::new("girl", Pos::Noun, "nsubj", depsense::Slot::Head, Pos::Verb));
    let product: Vec<f64> = base.iter().zip(&p_obj).zip(&p_subj).map(|((a, b), c)| a * b * c).collect();
    let expected = depsense::vector::l2_normalize(&product);
    for (x, y) in sentence.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-12);
    }
    assert_ne!(by_object.vector, sentence);
    assert_ne!(by_subject.vector, sentence);
}

#[test]
fn ten_pair_dataset_rho_matches_oracle() {
    let (table, spaces) = catch_ball();
    let scorer = CompositionalScorer::new(Composer::new(&table, &spaces, ComposeOptions::default()));
    let rows = [
        ("girl catch ball", "girl grasp ball", 6.2),
        ("boy catch stone", "boy throw stone", 5.1),
        ("child catch cold", "child contract cold", 6.8),
        ("patient catch flu", "patient have flu", 5.5),
        ("girl catch ball", "girl contract ball", 1.4),
        ("child catch cold", "child grasp cold", 1.2),
        ("man attend ball", "man organize ball", 3.3),
        ("woman attend party", "woman organize party", 3.9),
        ("player toss ball", "player throw ball", 6.0),
        ("boy grasp rope", "boy toss rope", 4.2),
    ];
    let pairs: Vec<SimilarityPair> = rows
        .iter()
        .map(|(a, b, h)| SimilarityPair {
            expr1: SvoTriple::parse(a).unwrap(),
            expr2: SvoTriple::parse(b).unwrap(),
            human_score: *h,
        })
        .collect();
    let report = eval::evaluate(&pairs, &scorer, Fallback::Strict).unwrap();
    assert_eq!(report.n_pairs, 10);
    let model: Vec<f64> = pairs.iter().map(|p| scorer.score_pair(p).unwrap().cosine).collect();
    let human: Vec<f64> = pairs.iter().map(|p| p.human_score).collect();
    assert_eq!(report.spearman_rho, spearman(&model, &human).unwrap());
}

#[test]
fn identical_sentences_score_one() {
    let (table, spaces) = catch_ball();
    let t = SvoTriple::parse("girl catch ball").unwrap();
    let comp = CompositionalScorer::new(Composer::new(&table, &spaces, ComposeOptions::default()));
    assert!((comp.score(&t, &t).unwrap().cosine - 1.0).abs() < 1e-12);
    let stat = eval::StaticScorer::new(&spaces);
    assert!((stat.score(&t, &t).unwrap().cosine - 1.0).abs() < 1e-12);
    let attn = eval::AttentionScorer::new(
        depsense::attention::InputEmbedder::new(&spaces, 16, 4),
        depsense::attention::AttentionParams::random(16, 8, 8, 4),
        true,
    );
    assert!((attn.score(&t, &t).unwrap().cosine - 1.0).abs() < 1e-12);
}

#[test]
fn evaluation_is_deterministic() {
    let (table, spaces) = catch_ball();
    let pairs = vec![
        SimilarityPair {
            expr1: SvoTriple::parse("girl catch ball").unwrap(),
            expr2: SvoTriple::parse("girl grasp ball").unwrap(),
            human_score: 6.0,
        },
        SimilarityPair {
            expr1: SvoTriple::parse("child catch cold").unwrap(),
            expr2: SvoTriple::parse("child grasp cold").unwrap(),
            human_score: 2.0,
        },
    ];
    let run = || {
        let scorer = CompositionalScorer::new(Composer::new(&table, &spaces, ComposeOptions::default()));
        eval::evaluate(&pairs, &scorer, Fallback::Strict).unwrap()
    };
    assert_eq!(run(), run());
}
