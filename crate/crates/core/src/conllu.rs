//! Reader for CoNLL-U dependency treebanks.
//!
//! Only the ID, FORM, LEMMA, UPOS, HEAD and DEPREL columns are consumed.
//! Multiword token ranges (`3-4`) and empty nodes (`5.1`) are skipped so
//! that token indices stay aligned with HEAD references. Errors are
//! reported per sentence: a malformed sentence is dropped and parsing
//! resumes at the next blank line.

use std::fmt;
use std::io::{self, BufRead};

use crate::pos::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    /// Lowercased lemma, never empty and never containing whitespace.
    pub lemma: String,
    pub pos: Pos,
    /// Head index; 0 marks the root.
    pub head: usize,
    pub deprel: String,
}

impl Token {
    pub fn new(
        index: usize,
        form: impl Into<String>,
        lemma: &str,
        pos: Pos,
        head: usize,
        deprel: impl Into<String>,
    ) -> Self {
        let form = form.into();
        Token {
            index,
            lemma: normalize_lemma(lemma, &form),
            form,
            pos,
            head,
            deprel: deprel.into(),
        }
    }
}

/// Lowercases a lemma, falls back to the form for `_`, and replaces
/// internal whitespace so the lemma stays a single TSV-safe field.
pub fn normalize_lemma(lemma: &str, form: &str) -> String {
    let source = if lemma.is_empty() || (lemma == "_" && form != "_") {
        form
    } else {
        lemma
    };
    let lowered = source.trim().to_lowercase();
    let joined: String = lowered
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    if joined.is_empty() {
        "_".to_owned()
    } else {
        joined
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token {index} has index out of sequence")]
    IndexOutOfSequence { index: usize },
    #[error("token {index} is its own head")]
    SelfLoop { index: usize },
    #[error("token {index} points to missing head {head}")]
    DanglingHead { index: usize, head: usize },
    #[error("sentence has no root")]
    NoRoot,
    #[error("sentence has {count} roots")]
    MultipleRoots { count: usize },
    #[error("head graph contains a cycle through token {index}")]
    Cycle { index: usize },
}

/// A validated dependency tree: one root, every head in range, no cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyTree {
    tokens: Vec<Token>,
    root_index: usize,
}

impl DependencyTree {
    pub fn new(tokens: Vec<Token>) -> Result<Self, TreeError> {
        if tokens.is_empty() {
            return Err(TreeError::Empty);
        }
        let n = tokens.len();
        for (pos, token) in tokens.iter().enumerate() {
            if token.index != pos + 1 {
                return Err(TreeError::IndexOutOfSequence { index: token.index });
            }
            if token.head == token.index {
                return Err(TreeError::SelfLoop { index: token.index });
            }
            if token.head > n {
                return Err(TreeError::DanglingHead {
                    index: token.index,
                    head: token.head,
                });
            }
        }

        let roots: Vec<usize> = tokens
            .iter()
            .filter(|t| t.head == 0)
            .map(|t| t.index)
            .collect();
        let root_index = match roots.len() {
            0 => return Err(TreeError::NoRoot),
            1 => roots[0],
            count => return Err(TreeError::MultipleRoots { count }),
        };

        // Walking up from any token must reach the root within n steps.
        for token in &tokens {
            let mut current = token.index;
            let mut steps = 0;
            while current != 0 {
                current = tokens[current - 1].head;
                steps += 1;
                if steps > n {
                    return Err(TreeError::Cycle { index: token.index });
                }
            }
        }

        Ok(DependencyTree { tokens, root_index })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn root(&self) -> &Token {
        self.token(self.root_index)
    }

    /// Token by 1-based index. Panics on an out-of-range index.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    /// `(head, dependent)` token pairs for every non-root token, in
    /// dependent order.
    pub fn edges(&self) -> impl Iterator<Item = (&Token, &Token)> + '_ {
        self.tokens
            .iter()
            .filter(|t| t.head != 0)
            .map(move |t| (self.token(t.head), t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SentenceErrorKind {
    ColumnCount { found: usize },
    BadId(String),
    BadHead(String),
    Tree(TreeError),
}

impl fmt::Display for SentenceErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceErrorKind::ColumnCount { found } => {
                write!(f, "expected 10 tab-separated columns, found {found}")
            }
            SentenceErrorKind::BadId(id) => write!(f, "invalid token ID `{id}`"),
            SentenceErrorKind::BadHead(head) => write!(f, "non-integer HEAD `{head}`"),
            SentenceErrorKind::Tree(err) => write!(f, "{err}"),
        }
    }
}

/// A rejected sentence. `line` is 1-based and points at the offending
/// line, or at the first line of the sentence for tree-level problems.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct SentenceError {
    pub line: usize,
    pub kind: SentenceErrorKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedCorpus {
    pub trees: Vec<DependencyTree>,
    pub errors: Vec<SentenceError>,
}

impl ParsedCorpus {
    /// Appends another parse result, as if the inputs had been concatenated.
    pub fn extend(&mut self, other: ParsedCorpus) {
        self.trees.extend(other.trees);
        self.errors.extend(other.errors);
    }
}

/// Parse a CoNLL-U stream into trees. Only I/O failures (including
/// invalid UTF-8) abort; malformed sentences end up in `errors`.
pub fn parse_conllu<R: BufRead>(reader: R) -> io::Result<ParsedCorpus> {
    let mut corpus = ParsedCorpus::default();
    let mut block = SentenceBlock::default();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim_end_matches('\r');

        if trimmed.trim().is_empty() {
            block.finish(&mut corpus);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        block.push(lineno, trimmed);
    }
    block.finish(&mut corpus);

    Ok(corpus)
}

pub fn parse_conllu_str(text: &str) -> ParsedCorpus {
    parse_conllu(text.as_bytes()).expect("reading from memory cannot fail")
}

#[derive(Default)]
struct SentenceBlock {
    start: Option<usize>,
    tokens: Vec<Token>,
    error: Option<SentenceError>,
}

impl SentenceBlock {
    fn push(&mut self, lineno: usize, line: &str) {
        self.start.get_or_insert(lineno);
        if self.error.is_some() {
            return;
        }
        match parse_token_line(line) {
            Ok(Some(token)) => self.tokens.push(token),
            Ok(None) => {}
            Err(kind) => self.error = Some(SentenceError { line: lineno, kind }),
        }
    }

    fn finish(&mut self, corpus: &mut ParsedCorpus) {
        let block = std::mem::take(self);
        let Some(start) = block.start else {
            return;
        };
        if let Some(err) = block.error {
            corpus.errors.push(err);
            return;
        }
        match DependencyTree::new(block.tokens) {
            Ok(tree) => corpus.trees.push(tree),
            Err(err) => corpus.errors.push(SentenceError {
                line: start,
                kind: SentenceErrorKind::Tree(err),
            }),
        }
    }
}

fn parse_token_line(line: &str) -> Result<Option<Token>, SentenceErrorKind> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(SentenceErrorKind::ColumnCount { found: cols.len() });
    }

    let id = cols[0];
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    let index: usize = id
        .parse()
        .ok()
        .filter(|&i| i >= 1)
        .ok_or_else(|| SentenceErrorKind::BadId(id.to_owned()))?;
    let head: usize = cols[6]
        .parse()
        .map_err(|_| SentenceErrorKind::BadHead(cols[6].to_owned()))?;

    Ok(Some(Token::new(
        index,
        cols[1],
        cols[2],
        Pos::from_upos(cols[3]),
        head,
        cols[7],
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GIRL: &str = "\
# text = the girl catches a ball
1\tthe\tthe\tDET\tDT\t_\t2\tdet\t_\t_
2\tgirl\tgirl\tNOUN\tNN\t_\t3\tnsubj\t_\t_
3\tcatches\tcatch\tVERB\tVBZ\t_\t0\troot\t_\t_
4\ta\ta\tDET\tDT\t_\t5\tdet\t_\t_
5\tball\tball\tNOUN\tNN\t_\t3\tobj\t_\t_
";

    #[test]
    fn parses_simple_sentence() {
        let corpus = parse_conllu_str(GIRL);
        assert!(corpus.errors.is_empty());
        assert_eq!(corpus.trees.len(), 1);
        let tree = &corpus.trees[0];
        assert_eq!(tree.len(), 5);
        assert_eq!(tree.root_index(), 3);
        assert_eq!(tree.root().lemma, "catch");
        assert_eq!(tree.token(1).pos, Pos::Other);
    }

    #[test]
    fn empty_input() {
        let corpus = parse_conllu_str("");
        assert!(corpus.trees.is_empty());
        assert!(corpus.errors.is_empty());
        assert!(parse_conllu_str("\n\n# only a comment\n\n").trees.is_empty());
    }

    #[test]
    fn bad_head_rejects_only_that_sentence() {
        let third_bad = GIRL.replace("\t0\troot", "\tx\troot");
        let text = format!("{third_bad}\n{GIRL}");
        let corpus = parse_conllu_str(&text);
        assert_eq!(corpus.trees.len(), 1);
        assert_eq!(corpus.errors.len(), 1);
        assert_eq!(corpus.errors[0].line, 4);
        assert_eq!(
            corpus.errors[0].kind,
            SentenceErrorKind::BadHead("x".to_owned())
        );
    }

    #[test]
    fn column_count_error_has_line_number() {
        let text = "1\tfoo\tfoo\tNOUN\t_\t_\t0\troot\t_\n";
        let corpus = parse_conllu_str(text);
        assert_eq!(corpus.errors.len(), 1);
        assert_eq!(corpus.errors[0].line, 1);
        assert_eq!(
            corpus.errors[0].kind,
            SentenceErrorKind::ColumnCount { found: 9 }
        );
    }

    #[test]
    fn root_count_enforced() {
        let two_roots = "\
1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_
2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_
";
        let corpus = parse_conllu_str(two_roots);
        assert_eq!(
            corpus.errors[0].kind,
            SentenceErrorKind::Tree(TreeError::MultipleRoots { count: 2 })
        );

        let cycle = "\
1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_
2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_
";
        let corpus = parse_conllu_str(cycle);
        assert_eq!(
            corpus.errors[0].kind,
            SentenceErrorKind::Tree(TreeError::NoRoot)
        );

        let cycle_with_root = "\
1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_
2\tb\tb\tNOUN\t_\t_\t3\tdep\t_\t_
3\tc\tc\tNOUN\t_\t_\t2\tdep\t_\t_
";
        let corpus = parse_conllu_str(cycle_with_root);
        assert!(matches!(
            corpus.errors[0].kind,
            SentenceErrorKind::Tree(TreeError::Cycle { .. })
        ));
    }

    #[test]
    fn skips_multiword_and_empty_nodes() {
        let text = "\
1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_
1\tde\tde\tADP\t_\t_\t2\tcase\t_\t_
2\tel\tel\tDET\t_\t_\t3\tdet\t_\t_
3\tGato\tGato\tNOUN\t_\t_\t0\troot\t_\t_
3.1\tx\tx\tVERB\t_\t_\t_\t_\t_\t_
";
        let corpus = parse_conllu_str(text);
        assert!(corpus.errors.is_empty(), "{:?}", corpus.errors);
        let tree = &corpus.trees[0];
        assert_eq!(tree.len(), 3);
        assert_eq!(tree.token(3).lemma, "gato");
    }

    #[test]
    fn lemma_normalization() {
        assert_eq!(normalize_lemma("Catch", "catches"), "catch");
        assert_eq!(normalize_lemma("_", "Balls"), "balls");
        assert_eq!(normalize_lemma("ice cream", "ice cream"), "ice_cream");
        assert_eq!(normalize_lemma("_", "_"), "_");
    }
}
