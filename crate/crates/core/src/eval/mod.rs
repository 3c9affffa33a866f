//! Sentence-similarity evaluation against human judgments.
//!
//! Each model maps a pair of SVO sentences to a cosine; the report
//! correlates those cosines with the human scores using Spearman's rho.

pub mod dataset;
pub mod stats;

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::attention::{self, AttentionParams, InputEmbedder, TokenSequence};
use crate::compose::{ComposeError, Composer, Fallback};
use crate::pos::Pos;
use crate::space::SpaceSet;
use crate::vector;

pub use dataset::{average_annotators, load_dataset, svo_tree, SimilarityPair, SvoTriple};
pub use stats::{paired_significance, spearman, PairedTest, StatsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Static,
    Compositional,
    Attention,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Static => "static",
            ModelKind::Compositional => "compositional",
            ModelKind::Attention => "attention",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "static" | "baseline" => Ok(ModelKind::Static),
            "compositional" | "comp" => Ok(ModelKind::Compositional),
            "attention" | "attn" => Ok(ModelKind::Attention),
            other => Err(format!(
                "unknown model `{other}` (expected static, compositional or attention)"
            )),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("`{lemma}/{pos}` is out of vocabulary")]
    MissingVocab { lemma: String, pos: Pos },
    #[error(transparent)]
    Compose(ComposeError),
    #[error(transparent)]
    Attention(#[from] attention::AttentionError),
    #[error("no scoreable pairs")]
    NoScoreablePairs,
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl From<ComposeError> for EvalError {
    fn from(err: ComposeError) -> Self {
        match err {
            ComposeError::MissingVocab { lemma, pos } => EvalError::MissingVocab { lemma, pos },
            other => EvalError::Compose(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairScore {
    pub cosine: f64,
    /// A strict fallback zeroed one of the sentence vectors.
    pub zero_fallback: bool,
}

/// Maps a sentence pair to a similarity.
pub trait SentenceScorer {
    fn kind(&self) -> ModelKind;

    fn score(&self, expr1: &SvoTriple, expr2: &SvoTriple) -> Result<PairScore, EvalError>;

    fn score_pair(&self, pair: &SimilarityPair) -> Result<PairScore, EvalError> {
        self.score(&pair.expr1, &pair.expr2)
    }
}

fn lookup<'a>(spaces: &'a SpaceSet, lemma: &str, pos: Pos) -> Result<&'a [f64], EvalError> {
    spaces.vector(lemma, pos).ok_or_else(|| EvalError::MissingVocab {
        lemma: lemma.to_owned(),
        pos,
    })
}

/// Cosine of the two verbs' static vectors. With `summed`, subject, verb
/// and object vectors are unit-normalized and concatenated instead, which
/// amounts to averaging the three per-slot cosines.
pub struct StaticScorer<'a> {
    spaces: &'a SpaceSet,
    summed: bool,
}

impl<'a> StaticScorer<'a> {
    pub fn new(spaces: &'a SpaceSet) -> Self {
        StaticScorer {
            spaces,
            summed: false,
        }
    }

    pub fn summed(spaces: &'a SpaceSet) -> Self {
        StaticScorer {
            spaces,
            summed: true,
        }
    }

    fn representation(&self, t: &SvoTriple) -> Result<Vec<f64>, EvalError> {
        let verb = lookup(self.spaces, &t.verb, Pos::Verb)?;
        if !self.summed {
            return Ok(verb.to_vec());
        }
        let subject = lookup(self.spaces, &t.subject, Pos::Noun)?;
        let object = lookup(self.spaces, &t.object, Pos::Noun)?;
        Ok([subject, verb, object]
            .iter()
            .flat_map(|v| vector::l2_normalize(v))
            .collect())
    }
}

impl SentenceScorer for StaticScorer<'_> {
    fn kind(&self) -> ModelKind {
        ModelKind::Static
    }

    fn score(&self, expr1: &SvoTriple, expr2: &SvoTriple) -> Result<PairScore, EvalError> {
        let a = self.representation(expr1)?;
        let b = self.representation(expr2)?;
        Ok(PairScore {
            cosine: vector::cosine(&a, &b).expect("same space"),
            zero_fallback: false,
        })
    }
}

/// Cosine of the contextualized root (verb) senses.
pub struct CompositionalScorer<'a> {
    composer: Composer<'a>,
}

impl<'a> CompositionalScorer<'a> {
    pub fn new(composer: Composer<'a>) -> Self {
        CompositionalScorer { composer }
    }
}

impl SentenceScorer for CompositionalScorer<'_> {
    fn kind(&self) -> ModelKind {
        ModelKind::Compositional
    }

    fn score(&self, expr1: &SvoTriple, expr2: &SvoTriple) -> Result<PairScore, EvalError> {
        let a = self.composer.sentence_sense(&expr1.tree())?;
        let b = self.composer.sentence_sense(&expr2.tree())?;
        Ok(PairScore {
            cosine: vector::cosine(&a.vector, &b.vector).expect("same space"),
            zero_fallback: a.collapsed() || b.collapsed(),
        })
    }
}

/// Cosine of the verb outputs of one self-attention layer run over the
/// three-token sequences.
pub struct AttentionScorer<'a> {
    embedder: InputEmbedder<'a>,
    params: AttentionParams,
    positional: bool,
}

impl<'a> AttentionScorer<'a> {
    pub fn new(embedder: InputEmbedder<'a>, params: AttentionParams, positional: bool) -> Self {
        AttentionScorer {
            embedder,
            params,
            positional,
        }
    }

    fn root_output(&self, t: &SvoTriple) -> Result<Vec<f64>, EvalError> {
        let words = [
            (&t.subject, Pos::Noun),
            (&t.verb, Pos::Verb),
            (&t.object, Pos::Noun),
        ];
        let items = words
            .iter()
            .map(|&(lemma, pos)| {
                self.embedder
                    .embed(lemma, pos)
                    .map(|v| (lemma.clone(), v))
                    .ok_or_else(|| EvalError::MissingVocab {
                        lemma: lemma.clone(),
                        pos,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let seq = TokenSequence::new(items, self.positional)?;
        let mut out = attention::self_attention(&seq, &self.params)?;
        Ok(out.outputs.swap_remove(1))
    }
}

impl SentenceScorer for AttentionScorer<'_> {
    fn kind(&self) -> ModelKind {
        ModelKind::Attention
    }

    fn score(&self, expr1: &SvoTriple, expr2: &SvoTriple) -> Result<PairScore, EvalError> {
        let a = self.root_output(expr1)?;
        let b = self.root_output(expr2)?;
        Ok(PairScore {
            cosine: vector::cosine(&a, &b).expect("same width"),
            zero_fallback: false,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub expr1: String,
    pub expr2: String,
    pub human: f64,
    pub model_score: f64,
    pub zero_fallback: bool,
    pub oov: bool,
}

impl PairRecord {
    /// The cosine on the judges' 0..7 display scale.
    pub fn display_score(&self) -> f64 {
        self.model_score * 7.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub model: ModelKind,
    pub n_pairs: usize,
    pub spearman_rho: f64,
    pub zero_fallback_count: usize,
    pub oov_count: usize,
    /// Out-of-vocabulary pairs dropped under the backoff policy.
    pub excluded: usize,
    pub records: Vec<PairRecord>,
}

impl EvalReport {
    pub fn model_scores(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.model_score).collect()
    }

    pub fn human_scores(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.human).collect()
    }

    pub fn write_table<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# model\t{}", self.model)?;
        writeln!(w, "# pairs\t{}", self.n_pairs)?;
        writeln!(w, "# spearman_rho\t{:.4}", self.spearman_rho)?;
        writeln!(w, "# zero_fallback\t{}", self.zero_fallback_count)?;
        writeln!(w, "# oov\t{}", self.oov_count)?;
        writeln!(w, "# excluded\t{}", self.excluded)?;
        writeln!(w, "# expr1\texpr2\thuman\tcosine\tscaled\tflags")?;
        for r in &self.records {
            let mut flags = Vec::new();
            if r.zero_fallback {
                flags.push("zero_fallback");
            }
            if r.oov {
                flags.push("oov");
            }
            writeln!(
                w,
                "{}\t{}\t{:.2}\t{:.4}\t{:.1}\t{}",
                r.expr1,
                r.expr2,
                r.human,
                r.model_score,
                r.display_score(),
                if flags.is_empty() { "-".to_owned() } else { flags.join(",") }
            )?;
        }
        w.flush()
    }

    /// One JSON object per pair, tagged with the model name.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Tagged<'a> {
            model: &'a str,
            #[serde(flatten)]
            record: &'a PairRecord,
        }
        for record in &self.records {
            let line = Tagged {
                model: self.model.as_str(),
                record,
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        w.flush()
    }
}

/// Scores every pair and correlates with the human judgments.
///
/// Repeated pairs are first averaged over annotators. Out-of-vocabulary
/// pairs score 0 and stay in under `Strict`; under `Backoff` they are
/// dropped. Either way they are counted.
pub fn evaluate(
    dataset: &[SimilarityPair],
    scorer: &dyn SentenceScorer,
    fallback: Fallback,
) -> Result<EvalReport, EvalError> {
    let pairs = average_annotators(dataset);
    let mut records = Vec::with_capacity(pairs.len());
    let mut zero_fallback_count = 0;
    let mut oov_count = 0;
    let mut excluded = 0;

    for pair in &pairs {
        let (score, oov) = match scorer.score_pair(pair) {
            Ok(score) => (score, false),
            Err(EvalError::MissingVocab { .. }) => {
                oov_count += 1;
                if fallback == Fallback::Backoff {
                    excluded += 1;
                    continue;
                }
                (
                    PairScore {
                        cosine: 0.0,
                        zero_fallback: false,
                    },
                    true,
                )
            }
            Err(other) => return Err(other),
        };
        if score.zero_fallback {
            zero_fallback_count += 1;
        }
        records.push(PairRecord {
            expr1: pair.expr1.to_string(),
            expr2: pair.expr2.to_string(),
            human: pair.human_score,
            model_score: score.cosine,
            zero_fallback: score.zero_fallback,
            oov,
        });
    }

    if records.is_empty() {
        return Err(EvalError::NoScoreablePairs);
    }
    let human: Vec<f64> = records.iter().map(|r| r.human).collect();
    let model: Vec<f64> = records.iter().map(|r| r.model_score).collect();
    let spearman_rho = spearman(&model, &human)?;

    Ok(EvalReport {
        model: scorer.kind(),
        n_pairs: records.len(),
        spearman_rho,
        zero_fallback_count,
        oov_count,
        excluded,
        records,
    })
}
