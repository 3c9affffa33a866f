//! Contextualized word senses built from dependency trees.
//!
//! A word's sense in a sentence is its static vector combined with the
//! selectional preferences imposed by every word it is syntactically
//! related to. A preference is the sum of the static vectors of the words
//! attested in the same slot with the same partner (a paradigmatic class).
//! The contextualized vector of the root stands for the whole sentence.

pub mod attention;
pub mod cli;
pub mod compose;
pub mod config;
pub mod conllu;
pub mod counts;
pub mod eval;
pub mod pos;
pub mod space;
pub mod synthetic;
pub mod triples;
pub mod vector;

pub use compose::{Composer, ComposeOptions, Fallback, Mode, Relevance};
pub use conllu::{parse_conllu, DependencyTree, Token};
pub use counts::TripleCountTable;
pub use pos::Pos;
pub use space::{build_ppmi_spaces, PosSpace, PpmiParams, SpaceSet};
pub use triples::{extract_triples, DependencyTriple, RelationFilter, Slot};
