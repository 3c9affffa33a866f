use depsense::conllu::parse_conllu_str;
use depsense::eval::{self, spearman, CompositionalScorer, SentenceScorer, StaticScorer, SvoTriple};
use depsense::{
    build_ppmi_spaces, extract_triples, Composer, ComposeOptions, DependencyTriple, Mode, Pos, PpmiParams,
    RelationFilter, TripleCountTable,
};
use proptest::prelude::*;

fn sentence(words: &[(usize, usize)]) -> String {
    // words are (noun, verb) picks for `n<i> v<j> n<i+1>`
    let mut out = String::new();
    for &(n, v) in words {
        out.push_str(&format!(
            "1\tn{n}\tn{n}\tNOUN\t_\t_\t2\tnsubj\t_\t_\n\
             2\tv{v}\tv{v}\tVERB\t_\t_\t0\troot\t_\t_\n\
             3\tthe\tthe\tDET\t_\t_\t4\tdet\t_\t_\n\
             4\tn{}\tn{}\tNOUN\t_\t_\t2\tobj\t_\t_\n\n",
            n + 1,
            n + 1
        ));
    }
    out
}

fn triple_strategy() -> impl Strategy<Value = DependencyTriple> {
    (0..4usize, prop::sample::select(vec!["nsubj", "obj"]), 0..5usize)
        .prop_map(|(v, r, n)| DependencyTriple::new(format!("v{v}"), Pos::Verb, r, format!("n{n}"), Pos::Noun))
}

proptest! {
    #[test]
    fn parsing_concatenation_is_union(a in prop::collection::vec((0..5usize, 0..3usize), 0..6),
                                      b in prop::collection::vec((0..5usize, 0..3usize), 0..6)) {
        let (ta, tb) = (sentence(&a), sentence(&b));
        let joined = parse_conllu_str(&(ta.clone() + &tb));
        let left = parse_conllu_str(&ta);
        let right = parse_conllu_str(&tb);
        prop_assert_eq!(joined.trees.len(), left.trees.len() + right.trees.len());
        prop_assert_eq!(&joined.trees[..left.trees.len()], &left.trees[..]);
    }

    #[test]
    fn counts_are_conserved(triples in prop::collection::vec(triple_strategy(), 0..80)) {
        let table = TripleCountTable::accumulate(triples.clone());
        prop_assert_eq!(table.total(), triples.len() as u64);
        let heads: u64 = ["v0", "v1", "v2", "v3"].iter()
            .flat_map(|v| ["nsubj", "obj"].map(|r| table.head_total(v, Pos::Verb, r)))
            .sum();
        prop_assert_eq!(heads, table.total());
        let mut merged = TripleCountTable::accumulate(triples[..triples.len() / 2].to_vec());
        merged.merge(&TripleCountTable::accumulate(triples[triples.len() / 2..].to_vec()));
        prop_assert_eq!(merged, table);
    }

    #[test]
    fn spearman_ignores_monotone_transforms(xs in prop::collection::vec(-50.0f64..50.0, 3..30),
                                            ys in prop::collection::vec(-50.0f64..50.0, 3..30)) {
        let n = xs.len().min(ys.len());
        let (x, y) = (&xs[..n], &ys[..n]);
        if let Ok(rho) = spearman(x, y) {
            let fx: Vec<f64> = x.iter().map(|v| (v / 10.0).exp() + 3.0).collect();
            let fy: Vec<f64> = y.iter().map(|v| v * v * v).collect();
            prop_assert!((spearman(&fx, &fy).unwrap() - rho).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(&rho));
        }
    }

    #[test]
    fn spearman_with_itself_is_one(xs in prop::collection::vec(-5i32..5, 2..25)) {
        let x: Vec<f64> = xs.iter().map(|&v| v as f64).collect();
        if x.iter().any(|v| *v != x[0]) {
            prop_assert!((spearman(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn preference_sums_decompose(triples in prop::collection::vec(triple_strategy(), 1..50)) {
        // the unnormalized sum over a class equals the sum over any split of it
        let table = TripleCountTable::accumulate(triples);
        let spaces = build_ppmi_spaces(&table, PpmiParams { min_count: 1, ..PpmiParams::default() }).unwrap();
        let q = depsense::compose::SlotQuery::new("n1", Pos::Noun, "obj", depsense::Slot::Head, Pos::Verb);
        let class = depsense::compose::paradigmatic_class(&table, &q, 10, depsense::Relevance::Frequency);
        let whole = depsense::compose::preference_sum(&class, &spaces, false);
        let mid = class.members.len() / 2;
        let part = |members: &[depsense::compose::ClassMember]| {
            let sub = depsense::compose::ParadigmaticClass { members: members.to_vec(), ..class.clone() };
            depsense::compose::preference_sum(&sub, &spaces, false).vector
        };
        if let Some(space) = spaces.get(Pos::Verb) {
            let (a, b) = (part(&class.members[..mid]), part(&class.members[mid..]));
            prop_assert_eq!(whole.vector.len(), space.dim());
            for i in 0..space.dim() {
                prop_assert!((whole.vector[i] - (a[i] + b[i])).abs() < 1e-12);
            }
        }
    }
}

fn small_world() -> (TripleCountTable, depsense::SpaceSet) {
    let text = sentence(&[(0, 0), (1, 0), (2, 1), (0, 1), (3, 2), (1, 2), (2, 0), (3, 1)]);
    let corpus = parse_conllu_str(&text);
    let filter = RelationFilter::default();
    let table = TripleCountTable::accumulate(corpus.trees.iter().flat_map(|t| extract_triples(t, &filter)));
    let spaces = build_ppmi_spaces(&table, PpmiParams { min_count: 1, ..PpmiParams::default() }).unwrap();
    (table, spaces)
}

proptest! {
    #[test]
    fn scores_are_symmetric(a in (0..4usize, 0..3usize), b in (0..4usize, 0..3usize), add in any::<bool>()) {
        let (table, spaces) = small_world();
        let t1 = SvoTriple::new(&format!("n{}", a.0), &format!("v{}", a.1), &format!("n{}", a.0 + 1)).unwrap();
        let t2 = SvoTriple::new(&format!("n{}", b.0), &format!("v{}", b.1), &format!("n{}", b.0 + 1)).unwrap();
        let options = ComposeOptions { mode: if add { Mode::Add } else { Mode::Mult }, ..ComposeOptions::default() };
        let scorers: Vec<Box<dyn SentenceScorer>> = vec![
            Box::new(StaticScorer::new(&spaces)),
            Box::new(CompositionalScorer::new(Composer::new(&table, &spaces, options))),
        ];
        for s in &scorers {
            match (s.score(&t1, &t2), s.score(&t2, &t1)) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                (Err(eval::EvalError::MissingVocab { .. }), Err(eval::EvalError::MissingVocab { .. })) => {}
                _ => prop_assert!(false, "asymmetric failure"),
            }
        }
    }
}
