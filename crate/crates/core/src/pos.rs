//! Coarse lexical categories.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Coarse part-of-speech tag. Only the four lexical categories take part
/// in triples and vector spaces; everything else collapses to `Other`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl Pos {
    pub const LEXICAL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    /// Map a Universal Dependencies UPOS value onto the coarse tag set.
    /// Proper nouns are treated as nouns; auxiliaries are not verbs.
    pub fn from_upos(upos: &str) -> Pos {
        match upos {
            "NOUN" | "PROPN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            _ => Pos::Other,
        }
    }

    pub fn is_lexical(self) -> bool {
        self != Pos::Other
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown part-of-speech tag `{0}`")]
pub struct UnknownPos(pub String);

impl FromStr for Pos {
    type Err = UnknownPos;

    /// Parses the coarse tag names (case-insensitive). Unlike
    /// [`Pos::from_upos`] this is strict: unknown names are an error.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NOUN" | "N" => Ok(Pos::Noun),
            "VERB" | "V" => Ok(Pos::Verb),
            "ADJ" | "A" => Ok(Pos::Adj),
            "ADV" | "R" => Ok(Pos::Adv),
            "OTHER" => Ok(Pos::Other),
            _ => Err(UnknownPos(s.to_owned())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upos_collapse() {
        assert_eq!(Pos::from_upos("NOUN"), Pos::Noun);
        assert_eq!(Pos::from_upos("PROPN"), Pos::Noun);
        assert_eq!(Pos::from_upos("AUX"), Pos::Other);
        assert_eq!(Pos::from_upos("DET"), Pos::Other);
        assert!(!Pos::from_upos("PUNCT").is_lexical());
    }

    #[test]
    fn parse_round_trip() {
        for pos in Pos::LEXICAL {
            assert_eq!(pos.as_str().parse::<Pos>().unwrap(), pos);
        }
        assert!("DET".parse::<Pos>().is_err());
    }
}
