//! Single-head, single-layer self-attention.
//!
//! This is a contrast baseline: each token's static embedding plus a
//! sinusoidal position code is projected into query, key and value
//! vectors, and the contextualized output of a token is the
//! attention-weighted sum of all value vectors in the sequence. There is
//! no training; projections are seeded random or loaded from files.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pos::Pos;
use crate::space::SpaceSet;
use crate::vector;

#[derive(Debug, thiserror::Error)]
pub enum AttentionError {
    #[error("positional encoding needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("width mismatch: expected {expected}, found {found}")]
    Width { expected: usize, found: usize },
    #[error("attention over an empty sequence")]
    Empty,
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("{0}")]
    MatrixFile(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Sinusoidal position code: component `2i` is
/// `sin(position / 10000^(2i/dim))` and `2i+1` the matching cosine.
pub fn positional_encoding(position: usize, dim: usize) -> Result<Vec<f64>, AttentionError> {
    if !dim.is_multiple_of(2) {
        return Err(AttentionError::OddDimension(dim));
    }
    let mut code = Vec::with_capacity(dim);
    for i in 0..dim / 2 {
        let angle = position as f64 / 10000f64.powf(2.0 * i as f64 / dim as f64);
        code.push(angle.sin());
        code.push(angle.cos());
    }
    Ok(code)
}

/// Softmax of `query . key_j`, optionally divided by `sqrt(width)`.
pub fn attention_weights(query: &[f64], keys: &[Vec<f64>], scaled: bool) -> Result<Vec<f64>, AttentionError> {
    if keys.is_empty() {
        return Err(AttentionError::Empty);
    }
    let scale = if scaled {
        (query.len() as f64).sqrt()
    } else {
        1.0
    };
    let scores: Vec<f64> = keys
        .iter()
        .map(|k| {
            vector::dot(query, k)
                .map(|d| d / scale)
                .map_err(|e| AttentionError::Width {
                    expected: e.left,
                    found: e.right,
                })
        })
        .collect::<Result<_, _>>()?;
    Ok(softmax(&scores))
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttentionParams {
    pub wq: Array2<f64>,
    pub wk: Array2<f64>,
    pub wv: Array2<f64>,
    pub seed: u64,
    /// Divide scores by `sqrt(dim_qk)`.
    pub scaled: bool,
}

impl AttentionParams {
    /// Projections drawn from uniform(-1/sqrt(dim_model), 1/sqrt(dim_model)).
    pub fn random(dim_model: usize, dim_qk: usize, dim_v: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = 1.0 / (dim_model as f64).sqrt();
        let mut draw = |cols: usize| {
            Array2::from_shape_fn((dim_model, cols), |_| rng.random_range(-bound..bound))
        };
        let wq = draw(dim_qk);
        let wk = draw(dim_qk);
        let wv = draw(dim_v);
        AttentionParams {
            wq,
            wk,
            wv,
            seed,
            scaled: true,
        }
    }

    pub fn from_matrices(wq: Array2<f64>, wk: Array2<f64>, wv: Array2<f64>) -> Result<Self, AttentionError> {
        let rows = wq.nrows();
        for m in [&wk, &wv] {
            if m.nrows() != rows {
                return Err(AttentionError::Width {
                    expected: rows,
                    found: m.nrows(),
                });
            }
        }
        if wk.ncols() != wq.ncols() {
            return Err(AttentionError::Width {
                expected: wq.ncols(),
                found: wk.ncols(),
            });
        }
        if [&wq, &wk, &wv].iter().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(AttentionError::NonFinite);
        }
        Ok(AttentionParams {
            wq,
            wk,
            wv,
            seed: 0,
            scaled: true,
        })
    }

    pub fn dim_model(&self) -> usize {
        self.wq.nrows()
    }

    pub fn dim_qk(&self) -> usize {
        self.wq.ncols()
    }

    pub fn dim_v(&self) -> usize {
        self.wv.ncols()
    }
}

/// Input embeddings (static plus optional position code) of a sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenSequence {
    lemmas: Vec<String>,
    inputs: Vec<Vec<f64>>,
}

impl TokenSequence {
    pub fn new<I, S>(items: I, positional: bool) -> Result<Self, AttentionError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut lemmas = Vec::new();
        let mut inputs: Vec<Vec<f64>> = Vec::new();
        for (position, (lemma, embedding)) in items.into_iter().enumerate() {
            if let Some(first) = inputs.first() {
                if first.len() != embedding.len() {
                    return Err(AttentionError::Width {
                        expected: first.len(),
                        found: embedding.len(),
                    });
                }
            }
            let input = if positional {
                let code = positional_encoding(position, embedding.len())?;
                vector::add(&embedding, &code).expect("same width")
            } else {
                embedding
            };
            lemmas.push(lemma.into());
            inputs.push(input);
        }
        Ok(TokenSequence { lemmas, inputs })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn lemmas(&self) -> &[String] {
        &self.lemmas
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttentionOutput {
    pub queries: Vec<Vec<f64>>,
    pub keys: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    /// Row `i` holds the weights token `i` assigns to every token.
    pub weights: Vec<Vec<f64>>,
    pub outputs: Vec<Vec<f64>>,
}

fn project(input: &[f64], matrix: &Array2<f64>) -> Vec<f64> {
    ArrayView1::from(input).dot(matrix).to_vec()
}

pub fn self_attention(seq: &TokenSequence, params: &AttentionParams) -> Result<AttentionOutput, AttentionError> {
    if seq.is_empty() {
        return Err(AttentionError::Empty);
    }
    for input in seq.inputs() {
        if input.len() != params.dim_model() {
            return Err(AttentionError::Width {
                expected: params.dim_model(),
                found: input.len(),
            });
        }
    }

    let queries: Vec<Vec<f64>> = seq.inputs().iter().map(|x| project(x, &params.wq)).collect();
    let keys: Vec<Vec<f64>> = seq.inputs().iter().map(|x| project(x, &params.wk)).collect();
    let values: Vec<Vec<f64>> = seq.inputs().iter().map(|x| project(x, &params.wv)).collect();

    let mut weights = Vec::with_capacity(seq.len());
    let mut outputs = Vec::with_capacity(seq.len());
    for query in &queries {
        let row = attention_weights(query, &keys, params.scaled)?;
        let mut out = Array1::<f64>::zeros(params.dim_v());
        for (w, v) in row.iter().zip(&values) {
            out.scaled_add(*w, &ArrayView1::from(v.as_slice()));
        }
        outputs.push(out.to_vec());
        weights.push(row);
    }

    Ok(AttentionOutput {
        queries,
        keys,
        values,
        weights,
        outputs,
    })
}

/// Reads a matrix file: `rows cols` on the first line, then the entries in
/// row-major order, whitespace separated.
pub fn read_matrix<R: BufRead>(reader: R) -> Result<Array2<f64>, AttentionError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|x| x.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| AttentionError::MatrixFile(format!("bad header `{header}`")))?;
    let [rows, cols] = dims[..] else {
        return Err(AttentionError::MatrixFile(format!("bad header `{header}`")));
    };
    let mut data = Vec::with_capacity(rows * cols);
    for line in lines {
        for x in line?.split_whitespace() {
            data.push(
                x.parse::<f64>()
                    .map_err(|_| AttentionError::MatrixFile(format!("non-numeric entry `{x}`")))?,
            );
        }
    }
    if data.len() != rows * cols {
        return Err(AttentionError::MatrixFile(format!(
            "expected {} entries, found {}",
            rows * cols,
            data.len()
        )));
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(AttentionError::NonFinite);
    }
    Ok(Array2::from_shape_vec((rows, cols), data).expect("length checked"))
}

pub fn load_matrix(path: &Path) -> Result<Array2<f64>, AttentionError> {
    read_matrix(BufReader::new(File::open(path)?))
}

pub fn write_matrix<W: Write>(matrix: &Array2<f64>, mut writer: W) -> io::Result<()> {
    writeln!(writer, "{} {}", matrix.nrows(), matrix.ncols())?;
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(writer, "{}", cells.join(" "))?;
    }
    writer.flush()
}

pub fn save_matrix(matrix: &Array2<f64>, path: &Path) -> io::Result<()> {
    write_matrix(matrix, BufWriter::new(File::create(path)?))
}

/// Maps words from the per-category spaces into one shared model space.
///
/// Category spaces have unrelated dimensions, so each gets its own seeded
/// random projection to `dim_model`. Vectors are unit-normalized first.
/// Words found in no space get a deterministic pseudo-random embedding
/// derived from the lemma.
#[derive(Clone, Debug)]
pub struct InputEmbedder<'a> {
    spaces: &'a SpaceSet,
    projections: Vec<(Pos, Array2<f64>)>,
    dim_model: usize,
    seed: u64,
}

impl<'a> InputEmbedder<'a> {
    pub fn new(spaces: &'a SpaceSet, dim_model: usize, seed: u64) -> Self {
        let projections = spaces
            .spaces()
            .map(|space| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9 * (space.pos() as u64 + 1)));
                let bound = (3.0 / space.dim().max(1) as f64).sqrt();
                let m = Array2::from_shape_fn((space.dim(), dim_model), |_| rng.random_range(-bound..bound));
                (space.pos(), m)
            })
            .collect();
        InputEmbedder {
            spaces,
            projections,
            dim_model,
            seed,
        }
    }

    pub fn dim_model(&self) -> usize {
        self.dim_model
    }

    /// Projected embedding of `lemma/pos`, or `None` if it is not in the
    /// space of its category.
    pub fn embed(&self, lemma: &str, pos: Pos) -> Option<Vec<f64>> {
        let v = self.spaces.vector(lemma, pos)?;
        let (_, matrix) = self.projections.iter().find(|(p, _)| *p == pos)?;
        Some(project(&vector::l2_normalize(v), matrix))
    }

    /// Looks the lemma up in every category (nouns, verbs, adjectives,
    /// adverbs) and falls back to a hashed embedding.
    pub fn embed_any(&self, lemma: &str) -> Vec<f64> {
        Pos::LEXICAL
            .iter()
            .find_map(|&pos| self.embed(lemma, pos))
            .unwrap_or_else(|| hashed_embedding(lemma, self.dim_model, self.seed))
    }
}

/// A reproducible unit-scale embedding seeded by the lemma's FNV-1a hash.
pub fn hashed_embedding(lemma: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in lemma.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(hash ^ seed);
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}
