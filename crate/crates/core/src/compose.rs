//! Selectional-preference composition.
//!
//! For an edge `w1 --R--> w2`, the head is restricted by the words that
//! can replace it while keeping `w2` in `R`, and the dependent by the
//! words that can replace it while keeping `w1` as head:
//!
//! ```text
//! w1' = w1 (x) sum{ v : v R-> w2 attested }     (head side)
//! w2' = w2 (x) sum{ v : w1 R-> v attested }     (dependent side)
//! ```
//!
//! where `(x)` is component-wise multiplication or addition. In a tree,
//! each word accumulates one such restriction per edge it takes part in,
//! and the root's final vector represents the sentence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::conllu::DependencyTree;
use crate::counts::TripleCountTable;
use crate::pos::Pos;
use crate::space::{PosSpace, SpaceSet};
use crate::triples::{lexical_edges, LexicalEdge, RelationFilter, Slot};
use crate::vector;

/// How a preference is folded into a sense.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Component-wise product: intersective restriction.
    #[default]
    Mult,
    Add,
}

/// Ranking of paradigmatic class members.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Relevance {
    /// Raw co-occurrence count with the anchor.
    #[default]
    Frequency,
    /// Positive PMI between member and anchor within the relation.
    Ppmi,
}

/// What happens when a preference vector comes out empty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fallback {
    /// The sense collapses to the zero vector, and out-of-vocabulary
    /// tokens are hard errors.
    #[default]
    Strict,
    /// The preference is skipped, and out-of-vocabulary tokens are left out
    /// of the tree output.
    Backoff,
}

macro_rules! keyword_enum {
    ($ty:ty, $($name:literal => $variant:expr),+ $(,)?) => {
        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    other => Err(format!(
                        "unknown value `{other}` (expected one of: {})",
                        [$($name),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

keyword_enum!(Mode, "mult" => Mode::Mult, "add" => Mode::Add);
keyword_enum!(Relevance, "freq" => Relevance::Frequency, "ppmi" => Relevance::Ppmi);
keyword_enum!(Fallback, "strict" => Fallback::Strict, "backoff" => Fallback::Backoff);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("`{lemma}/{pos}` is not in the {pos} space")]
    MissingVocab { lemma: String, pos: Pos },
    #[error("root `{lemma}/{pos}` is not a lexical word")]
    RootNotLexical { lemma: String, pos: Pos },
}

/// A slot to fill: the words standing in `slot` of `relation` whose other
/// side is the anchor, restricted to `filler_pos`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotQuery {
    pub anchor_lemma: String,
    pub anchor_pos: Pos,
    pub relation: String,
    pub slot: Slot,
    pub filler_pos: Pos,
}

impl SlotQuery {
    pub fn new(
        anchor_lemma: impl Into<String>,
        anchor_pos: Pos,
        relation: impl Into<String>,
        slot: Slot,
        filler_pos: Pos,
    ) -> Self {
        SlotQuery {
            anchor_lemma: anchor_lemma.into(),
            anchor_pos,
            relation: relation.into(),
            slot,
            filler_pos,
        }
    }
}

impl fmt::Display for SlotQuery {
    /// `<* obj-> ball/NOUN>` fills the head, `<catch/VERB obj-> *>` the
    /// dependent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            Slot::Head => write!(
                f,
                "<{} {}-> {}/{}>",
                self.filler_pos, self.relation, self.anchor_lemma, self.anchor_pos
            ),
            Slot::Dependent => write!(
                f,
                "<{}/{} {}-> {}>",
                self.anchor_lemma, self.anchor_pos, self.relation, self.filler_pos
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassMember {
    pub lemma: String,
    pub pos: Pos,
    pub relevance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParadigmaticClass {
    pub query: SlotQuery,
    /// Sorted by relevance, highest first; ties by lemma.
    pub members: Vec<ClassMember>,
    pub k: usize,
}

impl ParadigmaticClass {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// The `k` most relevant words attested in the query's open slot.
pub fn paradigmatic_class(
    table: &TripleCountTable,
    query: &SlotQuery,
    k: usize,
    relevance: Relevance,
) -> ParadigmaticClass {
    let grand = table.total() as f64;
    let mut members: Vec<ClassMember> = table
        .fillers(
            &query.anchor_lemma,
            query.anchor_pos,
            &query.relation,
            query.slot,
            query.filler_pos,
        )
        .into_iter()
        .map(|filler| {
            let score = match relevance {
                Relevance::Frequency => filler.count as f64,
                Relevance::Ppmi => {
                    let (head_total, dep_total) = match query.slot {
                        Slot::Head => (
                            table.head_total(filler.lemma, filler.pos, &query.relation),
                            table.dep_total(&query.relation, &query.anchor_lemma, query.anchor_pos),
                        ),
                        Slot::Dependent => (
                            table.head_total(&query.anchor_lemma, query.anchor_pos, &query.relation),
                            table.dep_total(&query.relation, filler.lemma, filler.pos),
                        ),
                    };
                    let pmi = (filler.count as f64 * grand / (head_total as f64 * dep_total as f64)).ln();
                    pmi.max(0.0)
                }
            };
            ClassMember {
                lemma: filler.lemma.to_owned(),
                pos: filler.pos,
                relevance: score,
            }
        })
        .collect();

    members.sort_by(|a, b| {
        b.relevance
            .total_cmp(&a.relevance)
            .then_with(|| a.lemma.cmp(&b.lemma))
    });
    members.truncate(k);

    ParadigmaticClass {
        query: query.clone(),
        members,
        k,
    }
}

/// The summed vector of a class, before normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct PreferenceSum {
    pub vector: Vec<f64>,
    /// Members whose vectors were summed.
    pub member_count: usize,
    /// Members absent from the filler space.
    pub missing: usize,
}

/// Sums the static vectors of the class members found in the filler
/// space, in class order. With `weighted`, each vector is scaled by the
/// member's relevance. Without a filler space the vector is empty.
pub fn preference_sum(class: &ParadigmaticClass, spaces: &SpaceSet, weighted: bool) -> PreferenceSum {
    let Some(space) = spaces.get(class.query.filler_pos) else {
        return PreferenceSum {
            vector: Vec::new(),
            member_count: 0,
            missing: class.members.len(),
        };
    };
    let mut sum = vec![0.0; space.dim()];
    let mut member_count = 0;
    let mut missing = 0;
    for member in &class.members {
        match space.get(&member.lemma) {
            Some(v) => {
                if weighted {
                    vector::add_assign(&mut sum, &vector::scale(v, member.relevance))
                } else {
                    vector::add_assign(&mut sum, v)
                }
                .expect("space vectors share the space dimension");
                member_count += 1;
            }
            None => missing += 1,
        }
    }
    PreferenceSum {
        vector: sum,
        member_count,
        missing,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionalPreference {
    pub query: SlotQuery,
    /// Unit length, or all zeros when nothing was summed.
    pub vector: Vec<f64>,
    pub member_count: usize,
    pub missing: usize,
}

impl SelectionalPreference {
    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.vector)
    }
}

pub fn preference_vector(class: &ParadigmaticClass, spaces: &SpaceSet, weighted: bool) -> SelectionalPreference {
    let sum = preference_sum(class, spaces, weighted);
    SelectionalPreference {
        query: class.query.clone(),
        vector: vector::l2_normalize(&sum.vector),
        member_count: sum.member_count,
        missing: sum.missing,
    }
}

/// Record of one preference folded into a sense.
#[derive(Clone, Debug, PartialEq)]
pub struct AppliedPreference {
    pub query: SlotQuery,
    pub member_count: usize,
    /// The preference was zero and the fallback policy kicked in.
    pub fell_back: bool,
}

/// A word's vector after zero or more contextualization steps.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextualizedSense {
    pub lemma: String,
    pub pos: Pos,
    pub base: Vec<f64>,
    pub applied: Vec<AppliedPreference>,
    pub vector: Vec<f64>,
    /// Sum of applied preferences, used by additive composition.
    pref_sum: Vec<f64>,
    collapsed: bool,
}

impl ContextualizedSense {
    pub fn new(lemma: impl Into<String>, pos: Pos, base: Vec<f64>) -> Self {
        ContextualizedSense {
            lemma: lemma.into(),
            pos,
            vector: base.clone(),
            pref_sum: vec![0.0; base.len()],
            base,
            applied: Vec::new(),
            collapsed: false,
        }
    }

    /// True when a strict fallback zeroed this sense.
    pub fn collapsed(&self) -> bool {
        self.collapsed
    }

    /// Folds one preference into the sense and renormalizes. Multiplicative
    /// steps compute `normalize(current (x) pref)`; additive steps compute
    /// `normalize(normalize(base) + sum of prefs)`. Either way the result
    /// does not depend on the order of application.
    pub fn apply(&mut self, pref: &SelectionalPreference, mode: Mode, fallback: Fallback) {
        let zero = pref.is_zero();
        self.applied.push(AppliedPreference {
            query: pref.query.clone(),
            member_count: pref.member_count,
            fell_back: zero,
        });

        if zero {
            if fallback == Fallback::Strict {
                self.collapsed = true;
                self.vector = vec![0.0; self.base.len()];
            }
            return;
        }
        if self.collapsed {
            return;
        }

        match mode {
            Mode::Mult => {
                let product = vector::hadamard(&self.vector, &pref.vector)
                    .expect("preference and sense share the space dimension");
                self.vector = vector::l2_normalize(&product);
            }
            Mode::Add => {
                vector::add_assign(&mut self.pref_sum, &pref.vector)
                    .expect("preference and sense share the space dimension");
                let base = vector::l2_normalize(&self.base);
                let total = vector::add(&base, &self.pref_sum).expect("same length");
                self.vector = vector::l2_normalize(&total);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComposeOptions {
    pub mode: Mode,
    /// Maximum class size.
    pub k: usize,
    pub relevance: Relevance,
    pub fallback: Fallback,
    /// Weight class members by relevance inside the sum.
    pub weighted: bool,
    pub relations: RelationFilter,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            mode: Mode::Mult,
            k: 10,
            relevance: Relevance::Frequency,
            fallback: Fallback::Strict,
            weighted: false,
            relations: RelationFilter::default(),
        }
    }
}

/// Contextualized senses of the lexical tokens of one tree.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeSenses {
    pub senses: BTreeMap<usize, ContextualizedSense>,
    pub root_index: usize,
    /// Lexical tokens left out because they are not in their space.
    pub missing: Vec<usize>,
}

impl TreeSenses {
    pub fn root(&self) -> Option<&ContextualizedSense> {
        self.senses.get(&self.root_index)
    }
}

/// Composition over a fixed count table and space set.
#[derive(Clone, Debug)]
pub struct Composer<'a> {
    table: &'a TripleCountTable,
    spaces: &'a SpaceSet,
    options: ComposeOptions,
}

impl<'a> Composer<'a> {
    pub fn new(table: &'a TripleCountTable, spaces: &'a SpaceSet, options: ComposeOptions) -> Self {
        Composer {
            table,
            spaces,
            options,
        }
    }

    pub fn options(&self) -> &ComposeOptions {
        &self.options
    }

    pub fn spaces(&self) -> &'a SpaceSet {
        self.spaces
    }

    pub fn table(&self) -> &'a TripleCountTable {
        self.table
    }

    pub fn class(&self, query: &SlotQuery) -> ParadigmaticClass {
        paradigmatic_class(self.table, query, self.options.k, self.options.relevance)
    }

    pub fn preference(&self, query: &SlotQuery) -> SelectionalPreference {
        preference_vector(&self.class(query), self.spaces, self.options.weighted)
    }

    fn static_sense(&self, lemma: &str, pos: Pos) -> Result<ContextualizedSense, ComposeError> {
        self.spaces
            .vector(lemma, pos)
            .map(|v| ContextualizedSense::new(lemma, pos, v.to_vec()))
            .ok_or_else(|| ComposeError::MissingVocab {
                lemma: lemma.to_owned(),
                pos,
            })
    }

    /// Head-side and dependent-side preferences for `head --relation--> dep`.
    fn edge_preferences(
        &self,
        head: (&str, Pos),
        dep: (&str, Pos),
        relation: &str,
    ) -> (SelectionalPreference, SelectionalPreference) {
        let for_head = SlotQuery::new(dep.0, dep.1, relation, Slot::Head, head.1);
        let for_dep = SlotQuery::new(head.0, head.1, relation, Slot::Dependent, dep.1);
        (self.preference(&for_head), self.preference(&for_dep))
    }

    /// Mutual contextualization of `w1 --relation--> w2`.
    pub fn contextualize_pair(
        &self,
        w1: (&str, Pos),
        w2: (&str, Pos),
        relation: &str,
    ) -> Result<(ContextualizedSense, ContextualizedSense), ComposeError> {
        let mut head = self.static_sense(w1.0, w1.1)?;
        let mut dep = self.static_sense(w2.0, w2.1)?;
        let (for_head, for_dep) = self.edge_preferences(w1, w2, relation);
        head.apply(&for_head, self.options.mode, self.options.fallback);
        dep.apply(&for_dep, self.options.mode, self.options.fallback);
        Ok((head, dep))
    }

    pub fn contextualize_tree(&self, tree: &DependencyTree) -> Result<TreeSenses, ComposeError> {
        let edges = lexical_edges(tree, &self.options.relations);
        self.contextualize_edges(tree, &edges)
    }

    /// Contextualizes `tree` applying `edges` in the given order. Every
    /// lexical token starts at its static vector; each edge restricts both
    /// of its endpoints.
    pub fn contextualize_edges(
        &self,
        tree: &DependencyTree,
        edges: &[LexicalEdge],
    ) -> Result<TreeSenses, ComposeError> {
        let mut senses = BTreeMap::new();
        let mut missing = Vec::new();
        for token in tree.tokens().iter().filter(|t| t.pos.is_lexical()) {
            match self.static_sense(&token.lemma, token.pos) {
                Ok(sense) => {
                    senses.insert(token.index, sense);
                }
                Err(err) if self.options.fallback == Fallback::Strict => return Err(err),
                Err(_) => missing.push(token.index),
            }
        }

        for edge in edges {
            let head = tree.token(edge.head);
            let dep = tree.token(edge.dependent);
            let (for_head, for_dep) = self.edge_preferences(
                (&head.lemma, head.pos),
                (&dep.lemma, dep.pos),
                &edge.relation,
            );
            if let Some(sense) = senses.get_mut(&edge.head) {
                sense.apply(&for_head, self.options.mode, self.options.fallback);
            }
            if let Some(sense) = senses.get_mut(&edge.dependent) {
                sense.apply(&for_dep, self.options.mode, self.options.fallback);
            }
        }

        Ok(TreeSenses {
            senses,
            root_index: tree.root_index(),
            missing,
        })
    }

    /// The contextualized sense of the root.
    pub fn sentence_sense(&self, tree: &DependencyTree) -> Result<ContextualizedSense, ComposeError> {
        let root = tree.root();
        if !root.pos.is_lexical() {
            return Err(ComposeError::RootNotLexical {
                lemma: root.lemma.clone(),
                pos: root.pos,
            });
        }
        let mut senses = self.contextualize_tree(tree)?;
        senses
            .senses
            .remove(&tree.root_index())
            .ok_or_else(|| ComposeError::MissingVocab {
                lemma: root.lemma.clone(),
                pos: root.pos,
            })
    }

    pub fn sentence_vector(&self, tree: &DependencyTree) -> Result<Vec<f64>, ComposeError> {
        self.sentence_sense(tree).map(|s| s.vector)
    }
}

/// The `n` largest components of a sense, as `(dimension, weight)`.
pub fn top_dimensions(vector: &[f64], n: usize) -> Vec<(usize, f64)> {
    let mut dims: Vec<(usize, f64)> = vector
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, x)| *x != 0.0)
        .collect();
    dims.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    dims.truncate(n);
    dims
}

/// Human-readable labels for the top dimensions of a sense.
pub fn describe_top_dimensions(space: &PosSpace, vector: &[f64], n: usize) -> Vec<String> {
    top_dimensions(vector, n)
        .into_iter()
        .map(|(d, w)| format!("{}={w:.4}", space.dimension_label(d)))
        .collect()
}
