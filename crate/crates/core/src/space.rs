//! Per-category static vector spaces.
//!
//! Nouns, verbs, adjectives and adverbs live in separate spaces, so a
//! lookup always needs both the lemma and its category. Spaces are either
//! built from triple counts as syntactic-context PPMI vectors or loaded
//! from word2vec text files.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::counts::TripleCountTable;
use crate::pos::Pos;
use crate::triples::Slot;

pub const SPACE_HEADER: &str = "#depsense-space v1";
pub const CONTEXTS_HEADER: &str = "#depsense-contexts v1";

#[derive(Debug, thiserror::Error)]
pub enum SpaceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot build spaces from an empty count table")]
    EmptyTable,
    #[error("{path}: bad header `{header}`")]
    Header { path: PathBuf, header: String },
    #[error("{path}, line {line}: {reason}")]
    Row {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("vector for `{lemma}` has length {found}, space has dim {dim}")]
    Dimension {
        lemma: String,
        found: usize,
        dim: usize,
    },
    #[error("vector for `{lemma}` has a non-finite component")]
    NonFinite { lemma: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SpaceError + '_ {
    move |source| SpaceError::Io {
        path: path.to_owned(),
        source,
    }
}

/// A syntactic context: the co-occurring word, the slot it occupies and
/// the relation. The context `(obj, dep, ball, NOUN)` of the verb `catch`
/// means "has `ball` as direct object".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextKey {
    pub relation: String,
    pub slot: Slot,
    pub lemma: String,
    pub pos: Pos,
}

impl fmt::Display for ContextKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}/{}", self.relation, self.slot, self.lemma, self.pos)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosSpace {
    pos: Pos,
    dim: usize,
    vocab: BTreeMap<String, Vec<f64>>,
    contexts: Option<Vec<ContextKey>>,
}

impl PosSpace {
    pub fn new(pos: Pos, dim: usize) -> Self {
        PosSpace {
            pos,
            dim,
            vocab: BTreeMap::new(),
            contexts: None,
        }
    }

    /// Builds a space from `(lemma, vector)` pairs; later duplicates replace
    /// earlier ones.
    pub fn from_vectors<I, S>(pos: Pos, dim: usize, vectors: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut space = PosSpace::new(pos, dim);
        for (lemma, vector) in vectors {
            space.insert(lemma, vector)?;
        }
        Ok(space)
    }

    /// Inserts or replaces a vector. Returns true if the lemma was
    /// already present.
    pub fn insert(&mut self, lemma: impl Into<String>, vector: Vec<f64>) -> Result<bool, SpaceError> {
        let lemma = lemma.into();
        if vector.len() != self.dim {
            return Err(SpaceError::Dimension {
                lemma,
                found: vector.len(),
                dim: self.dim,
            });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(SpaceError::NonFinite { lemma });
        }
        Ok(self.vocab.insert(lemma, vector).is_some())
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn get(&self, lemma: &str) -> Option<&[f64]> {
        self.vocab.get(lemma).map(Vec::as_slice)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.vocab.contains_key(lemma)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vocab.iter().map(|(l, v)| (l.as_str(), v.as_slice()))
    }

    /// Dimension labels, present only for count-based spaces.
    pub fn contexts(&self) -> Option<&[ContextKey]> {
        self.contexts.as_deref()
    }

    pub fn dimension_label(&self, dim: usize) -> String {
        match self.contexts.as_ref().and_then(|c| c.get(dim)) {
            Some(key) => key.to_string(),
            None => format!("d{dim}"),
        }
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writeln!(writer, "{SPACE_HEADER} pos={} dim={}", self.pos, self.dim)?;
        for (lemma, vector) in &self.vocab {
            let cells: Vec<String> = vector
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0.0)
                .map(|(i, x)| format!("{i}:{x}"))
                .collect();
            writeln!(writer, "{lemma}\t{}", cells.join(","))?;
        }
        writer.flush()
    }

    pub fn write_contexts_to<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writeln!(writer, "{CONTEXTS_HEADER} pos={}", self.pos)?;
        for (i, key) in self.contexts.iter().flatten().enumerate() {
            writeln!(
                writer,
                "{i}\t{}\t{}\t{}\t{}",
                key.relation, key.slot, key.lemma, key.pos
            )?;
        }
        writer.flush()
    }

    /// Writes `<dir>/<pos>.space.tsv` and, for count-based spaces, the
    /// `<pos>.contexts.tsv` sidecar.
    pub fn save(&self, dir: &Path) -> Result<(), SpaceError> {
        let (space_path, ctx_path) = space_paths(dir, self.pos);
        let file = File::create(&space_path).map_err(io_err(&space_path))?;
        self.write_to(BufWriter::new(file))
            .map_err(io_err(&space_path))?;
        if self.contexts.is_some() {
            let file = File::create(&ctx_path).map_err(io_err(&ctx_path))?;
            self.write_contexts_to(BufWriter::new(file))
                .map_err(io_err(&ctx_path))?;
        }
        Ok(())
    }

    pub fn load(space_path: &Path, contexts_path: Option<&Path>) -> Result<Self, SpaceError> {
        let file = File::open(space_path).map_err(io_err(space_path))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .transpose()
            .map_err(io_err(space_path))?
            .unwrap_or_default();
        let (pos, dim) = parse_space_header(&header).ok_or_else(|| SpaceError::Header {
            path: space_path.to_owned(),
            header: header.clone(),
        })?;

        let mut space = PosSpace::new(pos, dim);
        for (offset, line) in lines.enumerate() {
            let line = line.map_err(io_err(space_path))?;
            let lineno = offset + 2;
            if line.is_empty() {
                continue;
            }
            let row_err = |reason: String| SpaceError::Row {
                path: space_path.to_owned(),
                line: lineno,
                reason,
            };
            let (lemma, cells) = line
                .split_once('\t')
                .ok_or_else(|| row_err("expected `lemma<TAB>cells`".to_owned()))?;
            let mut vector = vec![0.0; dim];
            for cell in cells.split(',').filter(|c| !c.is_empty()) {
                let (i, x) = cell
                    .split_once(':')
                    .ok_or_else(|| row_err(format!("bad cell `{cell}`")))?;
                let i: usize = i
                    .parse()
                    .ok()
                    .filter(|&i| i < dim)
                    .ok_or_else(|| row_err(format!("bad dimension in `{cell}`")))?;
                vector[i] = x
                    .parse()
                    .map_err(|_| row_err(format!("bad value in `{cell}`")))?;
            }
            space.insert(lemma, vector)?;
        }

        if let Some(ctx_path) = contexts_path {
            space.contexts = Some(load_contexts(ctx_path, pos, dim)?);
        }
        Ok(space)
    }
}

fn space_paths(dir: &Path, pos: Pos) -> (PathBuf, PathBuf) {
    let stem = pos.as_str().to_lowercase();
    (
        dir.join(format!("{stem}.space.tsv")),
        dir.join(format!("{stem}.contexts.tsv")),
    )
}

fn parse_space_header(header: &str) -> Option<(Pos, usize)> {
    let rest = header.strip_prefix(SPACE_HEADER)?;
    let mut pos = None;
    let mut dim = None;
    for field in rest.split_whitespace() {
        match field.split_once('=')? {
            ("pos", p) => pos = p.parse::<Pos>().ok().filter(|p| p.is_lexical()),
            ("dim", d) => dim = d.parse().ok(),
            _ => return None,
        }
    }
    Some((pos?, dim?))
}

fn load_contexts(path: &Path, pos: Pos, dim: usize) -> Result<Vec<ContextKey>, SpaceError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(io_err(path))?
        .unwrap_or_default();
    if header != format!("{CONTEXTS_HEADER} pos={pos}") {
        return Err(SpaceError::Header {
            path: path.to_owned(),
            header,
        });
    }
    let mut keys = Vec::with_capacity(dim);
    for (offset, line) in lines.enumerate() {
        let line = line.map_err(io_err(path))?;
        let lineno = offset + 2;
        let row_err = |reason: &str| SpaceError::Row {
            path: path.to_owned(),
            line: lineno,
            reason: reason.to_owned(),
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 5 {
            return Err(row_err("expected 5 columns"));
        }
        if cols[0].parse::<usize>().ok() != Some(keys.len()) {
            return Err(row_err("dimensions must be listed in order"));
        }
        keys.push(ContextKey {
            relation: cols[1].to_owned(),
            slot: cols[2].parse().map_err(|e: String| row_err(&e))?,
            lemma: cols[3].to_owned(),
            pos: cols[4].parse().map_err(|_| row_err("bad POS"))?,
        });
    }
    if keys.len() != dim {
        return Err(SpaceError::Row {
            path: path.to_owned(),
            line: keys.len() + 1,
            reason: format!("{} context rows for dim {dim}", keys.len()),
        });
    }
    Ok(keys)
}

/// One optional space per lexical category.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpaceSet {
    noun: Option<PosSpace>,
    verb: Option<PosSpace>,
    adj: Option<PosSpace>,
    adv: Option<PosSpace>,
}

impl SpaceSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot_mut(&mut self, pos: Pos) -> Option<&mut Option<PosSpace>> {
        match pos {
            Pos::Noun => Some(&mut self.noun),
            Pos::Verb => Some(&mut self.verb),
            Pos::Adj => Some(&mut self.adj),
            Pos::Adv => Some(&mut self.adv),
            Pos::Other => None,
        }
    }

    /// Installs `space` under its own category, replacing any previous one.
    pub fn insert(&mut self, space: PosSpace) {
        if let Some(slot) = self.slot_mut(space.pos()) {
            *slot = Some(space);
        }
    }

    pub fn get(&self, pos: Pos) -> Option<&PosSpace> {
        match pos {
            Pos::Noun => self.noun.as_ref(),
            Pos::Verb => self.verb.as_ref(),
            Pos::Adj => self.adj.as_ref(),
            Pos::Adv => self.adv.as_ref(),
            Pos::Other => None,
        }
    }

    pub fn vector(&self, lemma: &str, pos: Pos) -> Option<&[f64]> {
        self.get(pos)?.get(lemma)
    }

    pub fn spaces(&self) -> impl Iterator<Item = &PosSpace> {
        [&self.noun, &self.verb, &self.adj, &self.adv]
            .into_iter()
            .filter_map(Option::as_ref)
    }

    pub fn is_empty(&self) -> bool {
        self.spaces().next().is_none()
    }

    pub fn save(&self, dir: &Path) -> Result<(), SpaceError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for space in self.spaces() {
            space.save(dir)?;
        }
        Ok(())
    }

    /// Loads whichever `<pos>.space.tsv` files exist in `dir`.
    pub fn load(dir: &Path) -> Result<Self, SpaceError> {
        if !dir.is_dir() {
            return Err(SpaceError::Io {
                path: dir.to_owned(),
                source: io::Error::new(io::ErrorKind::NotFound, "space directory not found"),
            });
        }
        let mut set = SpaceSet::new();
        for pos in Pos::LEXICAL {
            let (space_path, ctx_path) = space_paths(dir, pos);
            if !space_path.exists() {
                continue;
            }
            let ctx = ctx_path.exists().then_some(ctx_path.as_path());
            let space = PosSpace::load(&space_path, ctx)?;
            if space.pos() != pos {
                return Err(SpaceError::Header {
                    path: space_path,
                    header: format!("pos={}", space.pos()),
                });
            }
            set.insert(space);
        }
        Ok(set)
    }
}

/// Parameters for count-based space construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpmiParams {
    /// Contexts seen fewer times than this (within a category) are dropped.
    pub min_count: u64,
    /// Keep at most this many of the most frequent contexts per category.
    pub max_dims: usize,
}

impl Default for PpmiParams {
    fn default() -> Self {
        PpmiParams {
            min_count: 2,
            max_dims: 50_000,
        }
    }
}

/// Builds one PPMI space per category from syntactic contexts.
///
/// Each triple `(h, R, d)` gives `h` the context `(R, dep, d)` and `d` the
/// context `(R, head, h)`. Within category `p`, with `n(w,c)` the joint
/// count, `n(w)` and `n(c)` the marginals and `N` the total, the weight is
/// `max(0, ln(n(w,c) N / (n(w) n(c))))`. Marginals are taken before any
/// context is dropped.
pub fn build_ppmi_spaces(table: &TripleCountTable, params: PpmiParams) -> Result<SpaceSet, SpaceError> {
    if table.is_empty() {
        return Err(SpaceError::EmptyTable);
    }

    let mut per_pos: HashMap<Pos, BTreeMap<(&str, ContextKey), u64>> = HashMap::new();
    for (t, count) in table.iter() {
        let head_ctx = ContextKey {
            relation: t.relation.clone(),
            slot: Slot::Dependent,
            lemma: t.dep_lemma.clone(),
            pos: t.dep_pos,
        };
        let dep_ctx = ContextKey {
            relation: t.relation.clone(),
            slot: Slot::Head,
            lemma: t.head_lemma.clone(),
            pos: t.head_pos,
        };
        *per_pos
            .entry(t.head_pos)
            .or_default()
            .entry((t.head_lemma.as_str(), head_ctx))
            .or_default() += count;
        *per_pos
            .entry(t.dep_pos)
            .or_default()
            .entry((t.dep_lemma.as_str(), dep_ctx))
            .or_default() += count;
    }

    let mut set = SpaceSet::new();
    for pos in Pos::LEXICAL {
        let Some(joint) = per_pos.get(&pos) else {
            continue;
        };
        if let Some(space) = ppmi_space(pos, joint, params) {
            set.insert(space);
        }
    }
    Ok(set)
}

fn ppmi_space(pos: Pos, joint: &BTreeMap<(&str, ContextKey), u64>, params: PpmiParams) -> Option<PosSpace> {
    let mut word_totals: BTreeMap<&str, u64> = BTreeMap::new();
    let mut ctx_totals: BTreeMap<&ContextKey, u64> = BTreeMap::new();
    let mut grand = 0u64;
    for ((word, ctx), &n) in joint {
        *word_totals.entry(word).or_default() += n;
        *ctx_totals.entry(ctx).or_default() += n;
        grand += n;
    }

    let mut kept: Vec<(&ContextKey, u64)> = ctx_totals
        .iter()
        .filter(|(_, &n)| n >= params.min_count)
        .map(|(&k, &n)| (k, n))
        .collect();
    // most frequent first, ties by key
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    kept.truncate(params.max_dims);
    if kept.is_empty() {
        return None;
    }
    let dim_of: HashMap<&ContextKey, usize> =
        kept.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();

    let mut rows: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let total = grand as f64;
    for ((word, ctx), &n) in joint {
        let Some(&d) = dim_of.get(ctx) else {
            continue;
        };
        let pmi = ((n as f64) * total / (word_totals[word] as f64 * ctx_totals[ctx] as f64)).ln();
        let row = rows.entry(word).or_insert_with(|| vec![0.0; kept.len()]);
        row[d] = pmi.max(0.0);
    }

    let mut space = PosSpace::new(pos, kept.len());
    space.contexts = Some(kept.into_iter().map(|(k, _)| k.clone()).collect());
    for (word, row) in rows {
        space.vocab.insert(word.to_owned(), row);
    }
    Some(space)
}

/// A space read from a word2vec text file.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedEmbeddings {
    pub space: PosSpace,
    /// Lemmas that occurred more than once; the last row won.
    pub duplicates: usize,
}

/// Reads word2vec text format: a `V d` header, then `V` rows of a lemma
/// followed by `d` space-separated components.
pub fn load_embeddings(path: &Path, pos: Pos) -> Result<LoadedEmbeddings, SpaceError> {
    let file = File::open(path).map_err(io_err(path))?;
    read_embeddings(BufReader::new(file), path, pos)
}

pub fn read_embeddings<R: BufRead>(reader: R, path: &Path, pos: Pos) -> Result<LoadedEmbeddings, SpaceError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(io_err(path))?
        .unwrap_or_default();
    let bad_header = || SpaceError::Header {
        path: path.to_owned(),
        header: header.clone(),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [rows, dim] = fields[..] else {
        return Err(bad_header());
    };
    let rows: usize = rows.parse().map_err(|_| bad_header())?;
    let dim: usize = dim.parse().map_err(|_| bad_header())?;

    let mut space = PosSpace::new(pos, dim);
    let mut duplicates = 0;
    let mut seen = 0;
    for (offset, line) in lines.enumerate() {
        let line = line.map_err(io_err(path))?;
        let lineno = offset + 2;
        if line.trim().is_empty() {
            continue;
        }
        let row_err = |reason: String| SpaceError::Row {
            path: path.to_owned(),
            line: lineno,
            reason,
        };
        let mut parts = line.split_whitespace();
        let lemma = parts.next().unwrap_or_default();
        let vector: Vec<f64> = parts
            .map(|x| {
                x.parse::<f64>()
                    .map_err(|_| row_err(format!("non-numeric component `{x}`")))
            })
            .collect::<Result<_, _>>()?;
        if vector.len() != dim {
            return Err(row_err(format!(
                "row `{lemma}` has {} components, header says {dim}",
                vector.len()
            )));
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(row_err(format!("row `{lemma}` has a non-finite component")));
        }
        seen += 1;
        if space.insert(lemma, vector)? {
            duplicates += 1;
        }
    }
    if seen != rows {
        return Err(SpaceError::Row {
            path: path.to_owned(),
            line: seen + 1,
            reason: format!("header announces {rows} rows, found {seen}"),
        });
    }
    Ok(LoadedEmbeddings { space, duplicates })
}
