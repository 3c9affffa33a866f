//! Lexical dependency triples.

use std::collections::BTreeSet;
use std::fmt;

use crate::conllu::DependencyTree;
use crate::pos::Pos;

/// One lexical dependency edge `head --relation--> dependent`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyTriple {
    pub head_lemma: String,
    pub head_pos: Pos,
    pub relation: String,
    pub dep_lemma: String,
    pub dep_pos: Pos,
}

impl DependencyTriple {
    pub fn new(
        head_lemma: impl Into<String>,
        head_pos: Pos,
        relation: impl Into<String>,
        dep_lemma: impl Into<String>,
        dep_pos: Pos,
    ) -> Self {
        DependencyTriple {
            head_lemma: head_lemma.into(),
            head_pos,
            relation: relation.into(),
            dep_lemma: dep_lemma.into(),
            dep_pos,
        }
    }
}

impl fmt::Display for DependencyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}/{} {}-> {}/{}>",
            self.head_lemma, self.head_pos, self.relation, self.dep_lemma, self.dep_pos
        )
    }
}

/// Side of a dependency relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Head,
    Dependent,
}

impl Slot {
    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Head => "head",
            Slot::Dependent => "dep",
        }
    }

    pub fn opposite(self) -> Slot {
        match self {
            Slot::Head => Slot::Dependent,
            Slot::Dependent => Slot::Head,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Slot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "head" | "h" => Ok(Slot::Head),
            "dep" | "dependent" | "d" => Ok(Slot::Dependent),
            other => Err(format!("unknown slot `{other}` (expected head or dep)")),
        }
    }
}

/// Set of dependency relations kept when extracting triples.
///
/// A token's DEPREL matches if either the full label (`nsubj:pass`) or its
/// universal base (`nsubj`) is in the set. The triple records whichever
/// label matched, preferring the full one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFilter(BTreeSet<String>);

impl RelationFilter {
    pub const DEFAULT_RELATIONS: [&'static str; 6] =
        ["nsubj", "obj", "iobj", "amod", "advmod", "nmod"];

    pub fn new<I, S>(relations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        RelationFilter(relations.into_iter().map(Into::into).collect())
    }

    /// Parses a comma-separated list such as `nsubj,obj`.
    pub fn parse_list(list: &str) -> Self {
        RelationFilter::new(
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned),
        )
    }

    /// The label under which `deprel` is recorded, if it passes.
    pub fn matched<'a>(&self, deprel: &'a str) -> Option<&'a str> {
        if self.0.contains(deprel) {
            return Some(deprel);
        }
        let base = deprel.split(':').next().unwrap_or(deprel);
        self.0.contains(base).then_some(base)
    }

    pub fn relations(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for RelationFilter {
    fn default() -> Self {
        RelationFilter::new(Self::DEFAULT_RELATIONS)
    }
}

impl fmt::Display for RelationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<&str> = self.relations().collect();
        f.write_str(&list.join(","))
    }
}

/// A tree edge that survives the relation and POS filters, identified by
/// token indices. Shared by triple extraction and contextualization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexicalEdge {
    pub head: usize,
    pub dependent: usize,
    pub relation: String,
}

/// Edges whose relation passes `filter` and whose endpoints are both
/// lexical, in dependent-token order.
pub fn lexical_edges(tree: &DependencyTree, filter: &RelationFilter) -> Vec<LexicalEdge> {
    tree.edges()
        .filter(|(head, dep)| head.pos.is_lexical() && dep.pos.is_lexical())
        .filter_map(|(head, dep)| {
            filter.matched(&dep.deprel).map(|rel| LexicalEdge {
                head: head.index,
                dependent: dep.index,
                relation: rel.to_owned(),
            })
        })
        .collect()
}

pub fn extract_triples(tree: &DependencyTree, filter: &RelationFilter) -> Vec<DependencyTriple> {
    lexical_edges(tree, filter)
        .into_iter()
        .map(|edge| {
            let head = tree.token(edge.head);
            let dep = tree.token(edge.dependent);
            DependencyTriple::new(
                head.lemma.clone(),
                head.pos,
                edge.relation,
                dep.lemma.clone(),
                dep.pos,
            )
        })
        .collect()
}
