//! Aggregate triple counts and their TSV persistence.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::pos::Pos;
use crate::triples::{DependencyTriple, Slot};

pub const COUNTS_HEADER: &str = "#depsense-counts v1";

#[derive(Debug, thiserror::Error)]
pub enum CountsError {
    #[error("cannot read counts: {0}")]
    Io(#[from] io::Error),
    #[error("missing or wrong header line (expected `{COUNTS_HEADER}`, found `{0}`)")]
    Header(String),
    #[error("line {line}: {reason}: `{row}`")]
    Row {
        line: usize,
        row: String,
        reason: String,
    },
}

/// Counts of lexical dependency triples plus cached marginals.
///
/// Entries are kept in sorted order so that serialization is
/// deterministic. Every stored count is at least 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleCountTable {
    entries: BTreeMap<DependencyTriple, u64>,
    head_totals: HashMap<(String, Pos, String), u64>,
    dep_totals: HashMap<(String, String, Pos), u64>,
    total: u64,
}

/// One word attested in the open slot of a relation with a fixed anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filler<'a> {
    pub lemma: &'a str,
    pub pos: Pos,
    pub count: u64,
}

impl TripleCountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn accumulate<I>(triples: I) -> Self
    where
        I: IntoIterator<Item = DependencyTriple>,
    {
        let mut table = TripleCountTable::new();
        for triple in triples {
            table.add(triple, 1);
        }
        table
    }

    /// Adds `count` occurrences of `triple`. A zero count is ignored.
    pub fn add(&mut self, triple: DependencyTriple, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .head_totals
            .entry((
                triple.head_lemma.clone(),
                triple.head_pos,
                triple.relation.clone(),
            ))
            .or_default() += count;
        *self
            .dep_totals
            .entry((
                triple.relation.clone(),
                triple.dep_lemma.clone(),
                triple.dep_pos,
            ))
            .or_default() += count;
        self.total += count;
        *self.entries.entry(triple).or_default() += count;
    }

    /// Entry-wise count addition; associative and commutative.
    pub fn merge(&mut self, other: &TripleCountTable) {
        for (triple, &count) in &other.entries {
            self.add(triple.clone(), count);
        }
    }

    pub fn count(&self, triple: &DependencyTriple) -> u64 {
        self.entries.get(triple).copied().unwrap_or(0)
    }

    /// Total count of `(head, relation, *)`.
    pub fn head_total(&self, lemma: &str, pos: Pos, relation: &str) -> u64 {
        self.head_totals
            .get(&(lemma.to_owned(), pos, relation.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    /// Total count of `(*, relation, dependent)`.
    pub fn dep_total(&self, relation: &str, lemma: &str, pos: Pos) -> u64 {
        self.dep_totals
            .get(&(relation.to_owned(), lemma.to_owned(), pos))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct triples.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DependencyTriple, u64)> {
        self.entries.iter().map(|(t, &c)| (t, c))
    }

    /// Words of POS `filler_pos` attested in `slot` of `relation` whose
    /// other side is the anchor. Returned in table order.
    pub fn fillers(
        &self,
        anchor_lemma: &str,
        anchor_pos: Pos,
        relation: &str,
        slot: Slot,
        filler_pos: Pos,
    ) -> Vec<Filler<'_>> {
        self.entries
            .iter()
            .filter(|(t, _)| t.relation == relation)
            .filter_map(|(t, &count)| match slot {
                Slot::Head => (t.dep_lemma == anchor_lemma
                    && t.dep_pos == anchor_pos
                    && t.head_pos == filler_pos)
                    .then_some(Filler {
                        lemma: &t.head_lemma,
                        pos: t.head_pos,
                        count,
                    }),
                Slot::Dependent => (t.head_lemma == anchor_lemma
                    && t.head_pos == anchor_pos
                    && t.dep_pos == filler_pos)
                    .then_some(Filler {
                        lemma: &t.dep_lemma,
                        pos: t.dep_pos,
                        count,
                    }),
            })
            .collect()
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writeln!(writer, "{COUNTS_HEADER}")?;
        for (t, count) in self.iter() {
            writeln!(
                writer,
                "{}\t{}\t{}\t{}\t{}\t{}",
                t.head_lemma, t.head_pos, t.relation, t.dep_lemma, t.dep_pos, count
            )?;
        }
        writer.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self, CountsError> {
        let mut lines = reader.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim_end() != COUNTS_HEADER {
            return Err(CountsError::Header(header));
        }

        let mut table = TripleCountTable::new();
        for (offset, line) in lines.enumerate() {
            let line = line?;
            let lineno = offset + 2;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (triple, count) = parse_row(&line).map_err(|reason| CountsError::Row {
                line: lineno,
                row: line.clone(),
                reason,
            })?;
            table.add(triple, count);
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CountsError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn parse_row(line: &str) -> Result<(DependencyTriple, u64), String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 6 {
        return Err(format!("expected 6 columns, found {}", cols.len()));
    }
    let lexical = |s: &str| -> Result<Pos, String> {
        match s.parse::<Pos>() {
            Ok(pos) if pos.is_lexical() => Ok(pos),
            _ => Err(format!("`{s}` is not a lexical POS")),
        }
    };
    let head_pos = lexical(cols[1])?;
    let dep_pos = lexical(cols[4])?;
    if cols[0].is_empty() || cols[2].is_empty() || cols[3].is_empty() {
        return Err("empty field".to_owned());
    }
    let count: u64 = cols[5]
        .trim()
        .parse()
        .map_err(|_| format!("count `{}` is not a positive integer", cols[5]))?;
    if count == 0 {
        return Err("count must be positive".to_owned());
    }
    Ok((
        DependencyTriple::new(cols[0], head_pos, cols[2], cols[3], dep_pos),
        count,
    ))
}
