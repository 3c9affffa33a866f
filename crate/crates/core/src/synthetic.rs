//! Deterministic synthetic corpus and similarity dataset.
//!
//! Six verbs each carry two senses. Every sense has its own subjects,
//! objects, a landmark verb and a few verbs that share its arguments. A
//! dataset pair contrasts `s v o` with `s L o`; judges rate it high when
//! the arguments belong to the landmark's sense. The verb alone cannot tell
//! the two readings apart, the arguments can.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::eval::dataset::{SimilarityPair, SvoTriple};

pub const DEFAULT_SEED: u64 = 2019;

pub struct Sense {
    pub verb: &'static str,
    pub landmark: &'static str,
    pub subjects: &'static [&'static str],
    pub objects: &'static [&'static str],
    pub fillers: &'static [&'static str],
}

pub const SENSES: [Sense; 12] = [
    Sense {
        verb: "catch",
        landmark: "grasp",
        subjects: &["player", "goalkeeper", "fielder", "boy"],
        objects: &["ball", "rope", "fish", "frisbee"],
        fillers: &["throw", "toss", "hold"],
    },
    Sense {
        verb: "catch",
        landmark: "contract",
        subjects: &["patient", "child", "traveller", "nurse"],
        objects: &["cold", "flu", "virus", "infection"],
        fillers: &["have", "spread", "cure"],
    },
    Sense {
        verb: "draw",
        landmark: "sketch",
        subjects: &["artist", "painter", "student", "designer"],
        objects: &["picture", "portrait", "map", "diagram"],
        fillers: &["paint", "colour", "print"],
    },
    Sense {
        verb: "draw",
        landmark: "attract",
        subjects: &["report", "show", "exhibition", "scandal"],
        objects: &["attention", "crowd", "criticism", "interest"],
        fillers: &["receive", "generate", "gain"],
    },
    Sense {
        verb: "run",
        landmark: "move",
        subjects: &["athlete", "runner", "horse", "dog"],
        objects: &["race", "marathon", "mile", "lap"],
        fillers: &["finish", "win", "complete"],
    },
    Sense {
        verb: "run",
        landmark: "operate",
        subjects: &["manager", "company", "director", "team"],
        objects: &["business", "shop", "hotel", "programme"],
        fillers: &["manage", "own", "control"],
    },
    Sense {
        verb: "meet",
        landmark: "visit",
        subjects: &["friend", "delegate", "minister", "tourist"],
        objects: &["colleague", "family", "ambassador", "partner"],
        fillers: &["greet", "invite", "welcome"],
    },
    Sense {
        verb: "meet",
        landmark: "satisfy",
        subjects: &["product", "service", "solution", "plan"],
        objects: &["requirement", "demand", "standard", "need"],
        fillers: &["fulfil", "exceed", "address"],
    },
    Sense {
        verb: "buy",
        landmark: "purchase",
        subjects: &["customer", "shopper", "investor", "buyer"],
        objects: &["car", "house", "share", "ticket"],
        fillers: &["sell", "rent", "afford"],
    },
    Sense {
        verb: "buy",
        landmark: "accept",
        subjects: &["jury", "voter", "public", "audience"],
        objects: &["story", "excuse", "argument", "explanation"],
        fillers: &["believe", "doubt", "reject"],
    },
    Sense {
        verb: "provide",
        landmark: "supply",
        subjects: &["government", "charity", "supplier", "school"],
        objects: &["food", "shelter", "equipment", "funding"],
        fillers: &["deliver", "distribute", "donate"],
    },
    Sense {
        verb: "provide",
        landmark: "stipulate",
        subjects: &["contract", "law", "agreement", "treaty"],
        objects: &["condition", "penalty", "clause", "term"],
        fillers: &["specify", "require", "impose"],
    },
];

const ADJECTIVES: [&str; 6] = ["new", "old", "big", "small", "good", "local"];

#[derive(Clone, Debug)]
pub struct SyntheticParams {
    pub seed: u64,
    /// Sentences per verb per sense.
    pub sentences_per_verb: usize,
    /// Chance that an argument is drawn from a random other sense.
    pub noise: f64,
    /// Chance that the object carries an adjective.
    pub adjective_rate: f64,
    pub n_pairs: usize,
    /// Pairs whose object never occurs as an object anywhere in the corpus.
    pub unattested_pairs: usize,
    pub high_mean: f64,
    pub low_mean: f64,
    pub judge_sd: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            seed: DEFAULT_SEED,
            sentences_per_verb: 40,
            noise: 0.15,
            adjective_rate: 0.3,
            n_pairs: 200,
            unattested_pairs: 2,
            high_mean: 6.0,
            low_mean: 2.0,
            judge_sd: 0.7,
        }
    }
}

pub struct SyntheticData {
    /// CoNLL-U text.
    pub corpus: String,
    pub sentences: usize,
    pub pairs: Vec<SimilarityPair>,
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &[&'a str]) -> &'a str {
    words.choose(rng).expect("non-empty word list")
}

fn argument(rng: &mut ChaCha8Rng, sense: usize, noise: f64, subject: bool) -> &'static str {
    let source = if rng.random_bool(noise) {
        let other = rng.random_range(0..SENSES.len() - 1);
        if other >= sense { other + 1 } else { other }
    } else {
        sense
    };
    let s = &SENSES[source];
    pick(rng, if subject { s.subjects } else { s.objects })
}

fn write_sentence(out: &mut String, id: usize, subject: &str, verb: &str, adjective: Option<&str>, object: &str) {
    let mut text = format!("the {subject} {verb} the");
    if let Some(a) = adjective {
        text.push(' ');
        text.push_str(a);
    }
    text.push(' ');
    text.push_str(object);
    let obj_index = if adjective.is_some() { 6 } else { 5 };

    writeln!(out, "# sent_id = s{id}").unwrap();
    writeln!(out, "# text = {text}").unwrap();
    let mut row = |i: usize, lemma: &str, upos: &str, head: usize, rel: &str| {
        writeln!(out, "{i}\t{lemma}\t{lemma}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_").unwrap();
    };
    row(1, "the", "DET", 2, "det");
    row(2, subject, "NOUN", 3, "nsubj");
    row(3, verb, "VERB", 0, "root");
    row(4, "the", "DET", obj_index, "det");
    if let Some(a) = adjective {
        row(5, a, "ADJ", obj_index, "amod");
    }
    row(obj_index, object, "NOUN", 3, "obj");
    out.push('\n');
}

fn judge(rng: &mut ChaCha8Rng, mean: f64, sd: f64) -> f64 {
    let raw = Normal::new(mean, sd).expect("positive sd").sample(rng);
    (raw.clamp(1.0, 7.0) * 100.0).round() / 100.0
}

/// Generates the corpus and dataset. Equal seeds give identical output.
pub fn generate(params: &SyntheticParams) -> SyntheticData {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut corpus = String::new();
    let mut id = 0;

    for (s, sense) in SENSES.iter().enumerate() {
        let verbs = std::iter::once(sense.verb)
            .chain(std::iter::once(sense.landmark))
            .chain(sense.fillers.iter().copied());
        for verb in verbs {
            for _ in 0..params.sentences_per_verb {
                id += 1;
                let subject = argument(&mut rng, s, params.noise, true);
                let object = argument(&mut rng, s, params.noise, false);
                let adjective = rng
                    .random_bool(params.adjective_rate)
                    .then(|| pick(&mut rng, &ADJECTIVES));
                write_sentence(&mut corpus, id, subject, verb, adjective, object);
            }
        }
    }

    // pairs are distinct so that none get merged as repeated judgments
    let mut seen = HashSet::new();
    let mut pairs = Vec::with_capacity(params.n_pairs);
    let regular = params.n_pairs.saturating_sub(params.unattested_pairs);
    while pairs.len() < regular {
        let verb_group = rng.random_range(0..SENSES.len() / 2);
        let landmark_sense = 2 * verb_group + rng.random_range(0..2);
        let arg_sense = 2 * verb_group + rng.random_range(0..2);
        let args = &SENSES[arg_sense];
        let subject = pick(&mut rng, args.subjects);
        let object = pick(&mut rng, args.objects);
        if !seen.insert((subject, arg_sense, landmark_sense, object)) {
            continue;
        }
        let mean = if arg_sense == landmark_sense {
            params.high_mean
        } else {
            params.low_mean
        };
        pairs.push(SimilarityPair {
            expr1: SvoTriple::new(subject, SENSES[arg_sense].verb, object).expect("clean lemma"),
            expr2: SvoTriple::new(subject, SENSES[landmark_sense].landmark, object).expect("clean lemma"),
            human_score: judge(&mut rng, mean, params.judge_sd),
        });
    }
    // subjects never occur in object position, so their object class is empty
    while pairs.len() < params.n_pairs {
        let s = rng.random_range(0..SENSES.len());
        let sense = &SENSES[s];
        let subject = pick(&mut rng, sense.subjects);
        let object = pick(&mut rng, sense.subjects);
        if object == subject || !seen.insert((subject, s, s, object)) {
            continue;
        }
        pairs.push(SimilarityPair {
            expr1: SvoTriple::new(subject, sense.verb, object).expect("clean lemma"),
            expr2: SvoTriple::new(subject, sense.landmark, object).expect("clean lemma"),
            human_score: judge(&mut rng, params.low_mean, params.judge_sd),
        });
    }

    SyntheticData {
        corpus,
        sentences: id,
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu_str;

    fn small() -> SyntheticParams {
        SyntheticParams {
            sentences_per_verb: 3,
            n_pairs: 20,
            ..SyntheticParams::default()
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = generate(&small());
        let b = generate(&small());
        assert_eq!(a.corpus, b.corpus);
        assert_eq!(a.pairs, b.pairs);
        let c = generate(&SyntheticParams { seed: 7, ..small() });
        assert_ne!(a.corpus, c.corpus);
    }

    #[test]
    fn corpus_parses_cleanly() {
        let data = generate(&small());
        let parsed = parse_conllu_str(&data.corpus);
        assert!(parsed.errors.is_empty());
        assert_eq!(parsed.trees.len(), data.sentences);
        assert_eq!(data.sentences, 12 * 5 * 3);
    }

    #[test]
    fn pairs_share_arguments() {
        let data = generate(&small());
        assert_eq!(data.pairs.len(), 20);
        assert_eq!(crate::eval::average_annotators(&data.pairs).len(), 20);
        for p in &data.pairs {
            assert_eq!(p.expr1.subject, p.expr2.subject);
            assert_eq!(p.expr1.object, p.expr2.object);
            assert!((1.0..=7.0).contains(&p.human_score));
        }
    }

    #[test]
    fn argument_lists_are_disjoint() {
        let mut seen = std::collections::BTreeSet::new();
        for s in &SENSES {
            for w in s.subjects.iter().chain(s.objects) {
                assert!(seen.insert(*w), "{w} reused");
            }
        }
    }
}
