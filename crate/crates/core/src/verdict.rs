//! Three-valued verdicts and the closed vocabulary of rule anchors they cite.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum State {
    Proved,
    Refuted,
    Unknown,
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            State::Proved => "PROVED",
            State::Refuted => "REFUTED",
            State::Unknown => "UNKNOWN",
        })
    }
}

/// Stable identifiers of every rule the engine may cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    /// Boundary circles are not torus or cable knots with `mn = p`.
    TorusCableBoundaryCondition,
    /// Boundary circles are not torus knots with `mn = p`.
    TorusBoundaryCondition,
    IrreducibleExteriorCriterion,
    /// Power test on `l+`, `l-` settled by words or asserted facts.
    TrivialExteriorPowerCriterion,
    /// Power test on `l+`, `l-` settled by abelianization alone.
    TrivialExteriorPowerHomologyCriterion,
    TrivialExteriorTorusBoundaryCriterion,
    TrivialExteriorAtoroidality,
    TorusLinkAtoroidality,
    IrreducibleExteriorUniqueness,
    TrivialExteriorUniqueness,
    OddSlopeUniqueness,
    SlopeOneRigidity,
    SymmetryGeneralBound,
    AsymmetricSlopeTypeBound,
    SwapObstruction,
    NonInvertibleBoundary,
    TwoSyllableBasisCriterion,
    ExplicitBasisFound,
    ChiralityLinkingNumber,
    FamilyVSymmetry,
    FamilyVPrimeSymmetry,
    FamilyWSymmetry,
}

impl Citation {
    pub const ALL: [Citation; 22] = [
        Citation::TorusCableBoundaryCondition,
        Citation::TorusBoundaryCondition,
        Citation::IrreducibleExteriorCriterion,
        Citation::TrivialExteriorPowerCriterion,
        Citation::TrivialExteriorPowerHomologyCriterion,
        Citation::TrivialExteriorTorusBoundaryCriterion,
        Citation::TrivialExteriorAtoroidality,
        Citation::TorusLinkAtoroidality,
        Citation::IrreducibleExteriorUniqueness,
        Citation::TrivialExteriorUniqueness,
        Citation::OddSlopeUniqueness,
        Citation::SlopeOneRigidity,
        Citation::SymmetryGeneralBound,
        Citation::AsymmetricSlopeTypeBound,
        Citation::SwapObstruction,
        Citation::NonInvertibleBoundary,
        Citation::TwoSyllableBasisCriterion,
        Citation::ExplicitBasisFound,
        Citation::ChiralityLinkingNumber,
        Citation::FamilyVSymmetry,
        Citation::FamilyVPrimeSymmetry,
        Citation::FamilyWSymmetry,
    ];

    pub fn anchor(self) -> &'static str {
        match self {
            Citation::TorusCableBoundaryCondition => "torus-cable-boundary-condition",
            Citation::TorusBoundaryCondition => "torus-boundary-condition",
            Citation::IrreducibleExteriorCriterion => "irreducible-exterior-criterion",
            Citation::TrivialExteriorPowerCriterion => "trivial-exterior-power-criterion",
            Citation::TrivialExteriorPowerHomologyCriterion => {
                "trivial-exterior-power-homology-criterion"
            }
            Citation::TrivialExteriorTorusBoundaryCriterion => {
                "trivial-exterior-torus-boundary-criterion"
            }
            Citation::TrivialExteriorAtoroidality => "trivial-exterior-atoroidality",
            Citation::TorusLinkAtoroidality => "torus-link-atoroidality",
            Citation::IrreducibleExteriorUniqueness => "irreducible-exterior-uniqueness",
            Citation::TrivialExteriorUniqueness => "trivial-exterior-uniqueness",
            Citation::OddSlopeUniqueness => "odd-slope-uniqueness",
            Citation::SlopeOneRigidity => "slope-one-rigidity",
            Citation::SymmetryGeneralBound => "symmetry-general-bound",
            Citation::AsymmetricSlopeTypeBound => "asymmetric-slope-type-bound",
            Citation::SwapObstruction => "swap-obstruction",
            Citation::NonInvertibleBoundary => "non-invertible-boundary",
            Citation::TwoSyllableBasisCriterion => "two-syllable-basis-criterion",
            Citation::ExplicitBasisFound => "explicit-basis-found",
            Citation::ChiralityLinkingNumber => "chirality-linking-number",
            Citation::FamilyVSymmetry => "family-v-symmetry",
            Citation::FamilyVPrimeSymmetry => "family-v-prime-symmetry",
            Citation::FamilyWSymmetry => "family-w-symmetry",
        }
    }

    pub fn from_anchor(s: &str) -> Option<Citation> {
        Citation::ALL.into_iter().find(|c| c.anchor() == s)
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.anchor())
    }
}

/// Where a group-theoretic fact about `l+` or `l-` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Evidence {
    Words,
    AssertedFact,
    Homology,
}

/// A rule that was tried and did not fire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub rule: Citation,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub state: State,
    pub citation: Option<Citation>,
    pub details: String,
    pub evidence: Option<Evidence>,
    pub attempts: Vec<Attempt>,
}

impl Verdict {
    pub fn proved(citation: Citation, details: impl Into<String>) -> Self {
        Verdict {
            state: State::Proved,
            citation: Some(citation),
            details: details.into(),
            evidence: None,
            attempts: Vec::new(),
        }
    }

    pub fn refuted(citation: Citation, details: impl Into<String>) -> Self {
        Verdict { state: State::Refuted, ..Verdict::proved(citation, details) }
    }

    pub fn unknown(details: impl Into<String>, attempts: Vec<Attempt>) -> Self {
        Verdict {
            state: State::Unknown,
            citation: None,
            details: details.into(),
            evidence: None,
            attempts,
        }
    }

    pub fn with_evidence(mut self, evidence: Evidence) -> Self {
        self.evidence = Some(evidence);
        self
    }

    pub fn is_proved(&self) -> bool {
        self.state == State::Proved
    }

    pub fn is_refuted(&self) -> bool {
        self.state == State::Refuted
    }

    pub fn is_unknown(&self) -> bool {
        self.state == State::Unknown
    }
}
