//! Subject-verb-object similarity datasets.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::conllu::{DependencyTree, Token};
use crate::pos::Pos;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
    #[error("GS2011 header lacks column `{0}`")]
    MissingColumn(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct SvoTriple {
    pub subject: String,
    pub verb: String,
    pub object: String,
}

impl SvoTriple {
    /// Lemmas are lowercased; empty or whitespace-bearing lemmas are rejected.
    pub fn new(subject: &str, verb: &str, object: &str) -> Result<Self, String> {
        let clean = |s: &str| {
            let s = s.trim();
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                Err(format!("invalid lemma `{s}`"))
            } else {
                Ok(s.to_lowercase())
            }
        };
        Ok(SvoTriple {
            subject: clean(subject)?,
            verb: clean(verb)?,
            object: clean(object)?,
        })
    }

    /// Parses `"girl catch ball"`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words[..] {
            [s, v, o] => SvoTriple::new(s, v, o),
            _ => Err(format!("expected `subject verb object`, got `{text}`")),
        }
    }

    /// Three-token tree: the verb is the root, the subject attaches by
    /// `nsubj` and the object by `obj`.
    pub fn tree(&self) -> DependencyTree {
        DependencyTree::new(vec![
            Token::new(1, self.subject.clone(), &self.subject, Pos::Noun, 2, "nsubj"),
            Token::new(2, self.verb.clone(), &self.verb, Pos::Verb, 0, "root"),
            Token::new(3, self.object.clone(), &self.object, Pos::Noun, 2, "obj"),
        ])
        .expect("an SVO tree is always well formed")
    }
}

impl fmt::Display for SvoTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.verb, self.object)
    }
}

pub fn svo_tree(triple: &SvoTriple) -> DependencyTree {
    triple.tree()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityPair {
    pub expr1: SvoTriple,
    pub expr2: SvoTriple,
    /// Mean human judgment on the 1..=7 scale.
    pub human_score: f64,
}

fn check_score(score: f64) -> Result<f64, String> {
    if (1.0..=7.0).contains(&score) {
        Ok(score)
    } else {
        Err(format!("human score {score} outside [1, 7]"))
    }
}

/// Reads the 7-column TSV layout
/// `s1 v1 o1 s2 v2 o2 score`; `#` lines and blank lines are skipped.
pub fn read_dataset<R: BufRead>(reader: R) -> Result<Vec<SimilarityPair>, DatasetError> {
    let mut pairs = Vec::new();
    for (offset, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = offset + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let row_err = |reason: String| DatasetError::Row {
            line: lineno,
            reason,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(row_err(format!("expected 7 columns, found {}", cols.len())));
        }
        let expr1 = SvoTriple::new(cols[0], cols[1], cols[2]).map_err(row_err)?;
        let expr2 = SvoTriple::new(cols[3], cols[4], cols[5]).map_err(row_err)?;
        let score: f64 = cols[6]
            .trim()
            .parse()
            .map_err(|_| row_err(format!("score `{}` is not a number", cols[6])))?;
        let human_score = check_score(score).map_err(row_err)?;
        pairs.push(SimilarityPair {
            expr1,
            expr2,
            human_score,
        });
    }
    Ok(pairs)
}

pub fn load_dataset(path: &Path) -> Result<Vec<SimilarityPair>, DatasetError> {
    read_dataset(BufReader::new(File::open(path)?))
}

pub fn write_dataset<W: Write>(pairs: &[SimilarityPair], mut writer: W) -> io::Result<()> {
    writeln!(writer, "# subject1\tverb1\tobject1\tsubject2\tverb2\tobject2\thuman_score")?;
    for p in pairs {
        writeln!(
            writer,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.expr1.subject,
            p.expr1.verb,
            p.expr1.object,
            p.expr2.subject,
            p.expr2.verb,
            p.expr2.object,
            p.human_score
        )?;
    }
    writer.flush()
}

/// Reads the whitespace-separated layout used by the Grefenstette and
/// Sadrzadeh (2011) transitive-verb set: a header naming at least the
/// columns `verb subject object landmark input`, one row per annotator
/// judgment. Each row becomes the pair `(subject verb object)` vs
/// `(subject landmark object)`; repeated judgments are not merged here.
pub fn read_gs2011<R: BufRead>(reader: R) -> Result<Vec<SimilarityPair>, DatasetError> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Ok(Vec::new()),
        }
    };
    let names: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    let column = |name: &'static str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or(DatasetError::MissingColumn(name))
    };
    let (verb, subject, object, landmark, input) = (
        column("verb")?,
        column("subject")?,
        column("object")?,
        column("landmark")?,
        column("input")?,
    );

    let mut pairs = Vec::new();
    for (offset, line) in lines {
        let line = line?;
        let lineno = offset + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row_err = |reason: String| DatasetError::Row {
            line: lineno,
            reason,
        };
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != names.len() {
            return Err(row_err(format!(
                "expected {} columns, found {}",
                names.len(),
                cols.len()
            )));
        }
        let expr1 = SvoTriple::new(cols[subject], cols[verb], cols[object]).map_err(row_err)?;
        let expr2 = SvoTriple::new(cols[subject], cols[landmark], cols[object]).map_err(row_err)?;
        let score: f64 = cols[input]
            .parse()
            .map_err(|_| row_err(format!("score `{}` is not a number", cols[input])))?;
        pairs.push(SimilarityPair {
            expr1,
            expr2,
            human_score: check_score(score).map_err(row_err)?,
        });
    }
    Ok(pairs)
}

pub fn load_gs2011(path: &Path) -> Result<Vec<SimilarityPair>, DatasetError> {
    read_gs2011(BufReader::new(File::open(path)?))
}

/// Merges rows describing the same pair (one per annotator) into one pair
/// with the mean score, keeping first-occurrence order.
pub fn average_annotators(pairs: &[SimilarityPair]) -> Vec<SimilarityPair> {
    let mut index: HashMap<(&SvoTriple, &SvoTriple), usize> = HashMap::new();
    let mut merged: Vec<(SimilarityPair, usize)> = Vec::new();
    for pair in pairs {
        match index.get(&(&pair.expr1, &pair.expr2)) {
            Some(&i) => {
                merged[i].0.human_score += pair.human_score;
                merged[i].1 += 1;
            }
            None => {
                index.insert((&pair.expr1, &pair.expr2), merged.len());
                merged.push((pair.clone(), 1));
            }
        }
    }
    merged
        .into_iter()
        .map(|(mut pair, n)| {
            pair.human_score /= n as f64;
            pair
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::{extract_triples, RelationFilter};

    #[test]
    fn published_sample_row() {
        let text = "employ\tbuy\tproperty\temploy\tpurchase\tproperty\t7.0\n";
        let pairs = read_dataset(text.as_bytes()).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].human_score, 7.0);
        assert_eq!(pairs[0].expr2.verb, "purchase");
    }

    #[test]
    fn empty_and_comment_only() {
        assert!(read_dataset("".as_bytes()).unwrap().is_empty());
        assert!(read_dataset("# header\n\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_score_rejected() {
        let text = "# h\na\tb\tc\td\te\tf\t8.0\n";
        match read_dataset(text.as_bytes()) {
            Err(DatasetError::Row { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains('8'));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_dataset("a\tb\tc\td\te\t3\n".as_bytes()).is_err());
    }

    #[test]
    fn svo_tree_shape() {
        let t = SvoTriple::parse("girl catch ball").unwrap();
        let tree = svo_tree(&t);
        assert_eq!(tree.root().lemma, "catch");
        assert_eq!(tree.root().pos, Pos::Verb);
        assert_eq!(tree.token(1).deprel, "nsubj");
        assert_eq!(tree.token(3).deprel, "obj");
        let triples = extract_triples(&tree, &RelationFilter::new(["nsubj", "obj"]));
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn gs2011_layout_and_averaging() {
        let text = "\
participant verb subject object landmark input hilo
p1 draw child picture attract 2 LOW
p2 draw child picture attract 3 LOW
p1 draw report attention attract 7 HIGH
";
        let raw = read_gs2011(text.as_bytes()).unwrap();
        assert_eq!(raw.len(), 3);
        let merged = average_annotators(&raw);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].human_score, 2.5);
        assert_eq!(merged[0].expr2.to_string(), "child attract picture");
        assert_eq!(merged[1].human_score, 7.0);
    }

    #[test]
    fn round_trip() {
        let pairs = vec![SimilarityPair {
            expr1: SvoTriple::parse("boy meet girl").unwrap(),
            expr2: SvoTriple::parse("boy visit girl").unwrap(),
            human_score: 4.5,
        }];
        let mut buf = Vec::new();
        write_dataset(&pairs, &mut buf).unwrap();
        assert_eq!(read_dataset(buf.as_slice()).unwrap(), pairs);
    }
}
