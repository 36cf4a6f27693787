//! Finite presentations of mapping-torus fundamental groups.

use crate::mcg::{automorphism_of, surface_relator};
use crate::words::{GroupWord, Letter, Sym, TwistWord, A1, A2, A3, A4, T};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Which fiber the mapping torus is built from: the closed genus-two surface
/// or the once-punctured one (free fiber group, no surface relator).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberType {
    Closed,
    Punctured,
}

impl FiberType {
    pub fn label(self) -> &'static str {
        match self {
            FiberType::Closed => "closed",
            FiberType::Punctured => "punctured",
        }
    }

    pub fn from_label(s: &str) -> Option<FiberType> {
        match s {
            "closed" => Some(FiberType::Closed),
            "punctured" => Some(FiberType::Punctured),
            _ => None,
        }
    }
}

/// A finite presentation: an ordered generator list and a relator list.
/// Relators are words over the generators, each asserting `word = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub generators: Vec<Sym>,
    pub relators: Vec<GroupWord>,
}

impl Presentation {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Sum of relator lengths, the size measure used by rewriting budgets.
    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Checks every relator mentions only listed generators.
    pub fn is_well_formed(&self) -> bool {
        self.relators
            .iter()
            .flat_map(|r| r.letters.iter())
            .all(|l| self.generators.contains(&l.sym))
    }
}

/// The fundamental group of the mapping torus of the monodromy named by
/// `word`, acting on the chosen fiber.
///
/// Generators are `a1, a2, a3, a4, t` in that order. For each fiber
/// generator `a` there is a relator `t^-1 a t phi(a)^-1`, where `phi` is the
/// monodromy automorphism; a closed fiber adds the genus-two surface relator
/// `a1 a2 a1^-1 a2^-1 a4 a3 a4^-1 a3^-1`.
pub fn bundle_presentation(word: &TwistWord, fiber: FiberType) -> Presentation {
    let phi = automorphism_of(word);
    let mut relators = Vec::with_capacity(5);
    for g in [A1, A2, A3, A4] {
        let mut r = vec![Letter::new(T, -1), Letter::new(g, 1), Letter::new(T, 1)];
        r.extend(phi.image_of(g).inverse().letters.iter().copied());
        relators.push(GroupWord { letters: r }.free_reduce());
    }
    if fiber == FiberType::Closed {
        relators.push(surface_relator());
    }
    Presentation { generators: vec![A1, A2, A3, A4, T], relators }
}

// JSON wire format: {"generators": ["a1", ...], "relators": [["t^-1", "a1", ...], ...]}
impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            generators: Vec<String>,
            relators: Vec<Vec<String>>,
        }
        Wire {
            generators: self.generators.iter().map(|g| g.name()).collect(),
            relators: self.relators.iter().map(|r| r.tokens()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            generators: Vec<String>,
            relators: Vec<Vec<String>>,
        }
        let wire = Wire::deserialize(d)?;
        let generators = wire
            .generators
            .iter()
            .map(|s| Sym::from_name(s).ok_or_else(|| D::Error::custom(format!("unknown generator `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let relators = wire
            .relators
            .iter()
            .map(|toks| {
                toks.iter()
                    .map(|tk| {
                        Letter::from_token(tk)
                            .ok_or_else(|| D::Error::custom(format!("bad letter token `{tk}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(|letters| GroupWord { letters })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { generators, relators })
    }
}
