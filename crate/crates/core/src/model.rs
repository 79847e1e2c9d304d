//! Presentation data model, validation and JSON I/O for presentations and
//! reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgroup::{self, BasisSearch, Word, DEFAULT_BASIS_BUDGET};
use crate::lattice::{self, Divisibility, LatticeVector, SlopeInvariant};
use crate::verdict::{Citation, Evidence, Verdict};

pub const PRESENTATION_SCHEMA: &str = "annulus-presentation/1";
pub const REPORT_SCHEMA: &str = "annulus-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    True,
    False,
    #[default]
    Unknown,
}

impl TriState {
    pub fn known(self) -> Option<bool> {
        match self {
            TriState::True => Some(true),
            TriState::False => Some(false),
            TriState::Unknown => None,
        }
    }

    pub fn is_true(self) -> bool {
        self == TriState::True
    }
}

impl From<bool> for TriState {
    fn from(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KnotKind {
    Trivial,
    Torus { m: i64, n: i64 },
    Cable { m: i64, n: i64, companion: String },
    Other { label: String },
}

/// Knot type of one boundary circle of the annulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotDescriptor {
    #[serde(flatten)]
    pub kind: KnotKind,
    #[serde(default)]
    pub invertible: TriState,
}

impl KnotDescriptor {
    pub fn trivial() -> Self {
        KnotDescriptor { kind: KnotKind::Trivial, invertible: TriState::True }
    }

    pub fn torus(m: i64, n: i64) -> Self {
        // torus knots are invertible
        KnotDescriptor { kind: KnotKind::Torus { m, n }, invertible: TriState::True }
    }

    pub fn other(label: &str, invertible: TriState) -> Self {
        KnotDescriptor { kind: KnotKind::Other { label: label.to_string() }, invertible }
    }

    /// `(m, n)` for torus and cable knots.
    pub fn torus_or_cable_params(&self) -> Option<(i64, i64)> {
        match self.kind {
            KnotKind::Torus { m, n } | KnotKind::Cable { m, n, .. } => Some((m, n)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryLinkDescriptor {
    /// The `(2m, 2n)` torus link, stored as `[2m, 2n]`.
    TorusLink { params: [i64; 2] },
    CableLink { params: [i64; 2], companion: String },
    Other,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExteriorStatus {
    #[serde(default)]
    pub hk_a_trivial: TriState,
    #[serde(default)]
    pub hk_a_irreducible: TriState,
    #[serde(default)]
    pub hk_a_atoroidal: TriState,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl ExteriorStatus {
    /// A trivial exterior (a handlebody) is irreducible and atoroidal.
    pub fn irreducible(&self) -> TriState {
        if self.hk_a_trivial.is_true() {
            TriState::True
        } else {
            self.hk_a_irreducible
        }
    }

    pub fn atoroidal(&self) -> TriState {
        if self.hk_a_trivial.is_true() {
            TriState::True
        } else {
            self.hk_a_atoroidal
        }
    }

    pub fn is_consistent(&self) -> bool {
        !(self.hk_a_trivial.is_true()
            && (self.hk_a_irreducible == TriState::False || self.hk_a_atoroidal == TriState::False))
    }
}

/// Which of the two parallel copies of the annulus core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "l+",
            Side::Minus => "l-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactKind {
    LPlusIsPPower,
    LMinusIsPPower,
    LPlusIsPPowerOfPrimitive,
    LMinusIsPPowerOfPrimitive,
    LPlusPrimitive,
    LMinusPrimitive,
    ClassesContainBasis,
}

impl FactKind {
    pub fn is_p_power(side: Side) -> FactKind {
        match side {
            Side::Plus => FactKind::LPlusIsPPower,
            Side::Minus => FactKind::LMinusIsPPower,
        }
    }

    pub fn is_p_power_of_primitive(side: Side) -> FactKind {
        match side {
            Side::Plus => FactKind::LPlusIsPPowerOfPrimitive,
            Side::Minus => FactKind::LMinusIsPPowerOfPrimitive,
        }
    }

    pub fn primitive(side: Side) -> FactKind {
        match side {
            Side::Plus => FactKind::LPlusPrimitive,
            Side::Minus => FactKind::LMinusPrimitive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertedFact {
    pub fact: FactKind,
    pub value: TriState,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusPresentation {
    pub schema: String,
    pub label: String,
    pub p: i64,
    pub h_l_plus: LatticeVector,
    pub h_l_minus: LatticeVector,
    #[serde(default)]
    pub w_l_plus: Option<Word>,
    #[serde(default)]
    pub w_l_minus: Option<Word>,
    #[serde(default)]
    pub l1: Option<KnotDescriptor>,
    #[serde(default)]
    pub l2: Option<KnotDescriptor>,
    #[serde(default)]
    pub boundary_link: BoundaryLinkDescriptor,
    #[serde(default)]
    pub exterior: ExteriorStatus,
    #[serde(default)]
    pub asserted_facts: Vec<AssertedFact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl AnnulusPresentation {
    /// A presentation with only the homology data filled in.
    pub fn new(label: &str, h_l_plus: LatticeVector, h_l_minus: LatticeVector) -> Self {
        AnnulusPresentation {
            schema: PRESENTATION_SCHEMA.to_string(),
            label: label.to_string(),
            p: h_l_plus.sum(),
            h_l_plus,
            h_l_minus,
            w_l_plus: None,
            w_l_minus: None,
            l1: None,
            l2: None,
            boundary_link: BoundaryLinkDescriptor::Unknown,
            exterior: ExteriorStatus::default(),
            asserted_facts: Vec::new(),
            notes: None,
        }
    }

    pub fn class(&self, side: Side) -> LatticeVector {
        match side {
            Side::Plus => self.h_l_plus,
            Side::Minus => self.h_l_minus,
        }
    }

    pub fn word(&self, side: Side) -> Option<&Word> {
        match side {
            Side::Plus => self.w_l_plus.as_ref(),
            Side::Minus => self.w_l_minus.as_ref(),
        }
    }

    pub fn asserted(&self, fact: FactKind) -> Option<bool> {
        self.asserted_facts.iter().find(|f| f.fact == fact).and_then(|f| f.value.known())
    }

    /// Both boundary knot descriptors, if present.
    pub fn boundary_knots(&self) -> Option<[&KnotDescriptor; 2]> {
        Some([self.l1.as_ref()?, self.l2.as_ref()?])
    }

    pub fn slope(&self) -> Result<(SlopeInvariant, i64), lattice::LatticeError> {
        lattice::normalize_oriented(self.h_l_plus, self.h_l_minus)
    }

    pub fn without_words(&self) -> Self {
        AnnulusPresentation { w_l_plus: None, w_l_minus: None, ..self.clone() }
    }
}

/// Whether `l` (on `side`) is the `k`-th power of a primitive element,
/// from the word if present, else from the homology class when that
/// settles it negatively.
pub fn derived_power_of_primitive(
    pres: &AnnulusPresentation,
    side: Side,
    k: u64,
) -> Option<(bool, Evidence)> {
    if let Some(w) = pres.word(side) {
        let r = fgroup::is_power_of_primitive(w, k as usize).unwrap_or(false);
        return Some((r, Evidence::Words));
    }
    match lattice::divisibility_class(pres.class(side), k as i64) {
        Ok(Divisibility::MultipleOfGenerator) | Err(_) => None,
        Ok(_) => Some((false, Evidence::Homology)),
    }
}

/// Whether `l` is the `k`-th power of some element.
pub fn derived_power(pres: &AnnulusPresentation, side: Side, k: u64) -> Option<(bool, Evidence)> {
    if let Some(w) = pres.word(side) {
        let r = matches!(fgroup::nth_root(w, k as usize), Ok(Some(_)));
        return Some((r, Evidence::Words));
    }
    match lattice::divisibility_class(pres.class(side), k as i64) {
        Ok(Divisibility::NotMultiple) => Some((false, Evidence::Homology)),
        _ => None,
    }
}

pub fn derived_primitive(pres: &AnnulusPresentation, side: Side) -> Option<(bool, Evidence)> {
    if let Some(w) = pres.word(side) {
        return Some((fgroup::is_primitive(w), Evidence::Words));
    }
    let h = pres.class(side);
    (lattice::gcd(h.c1, h.c2) != 1).then_some((false, Evidence::Homology))
}

/// Whether the conjugacy classes of `l+`, `l-` contain a basis of the free
/// group. Word evidence comes with the rule that settled it.
pub fn derived_basis(pres: &AnnulusPresentation) -> Option<(bool, Evidence, Option<Citation>)> {
    if let (Some(u), Some(v)) = (&pres.w_l_plus, &pres.w_l_minus) {
        return match fgroup::classes_contain_basis(u, v, DEFAULT_BASIS_BUDGET) {
            BasisSearch::Found { .. } => {
                Some((true, Evidence::Words, Some(Citation::ExplicitBasisFound)))
            }
            BasisSearch::ExponentCriterion { .. } => {
                Some((false, Evidence::Words, Some(Citation::TwoSyllableBasisCriterion)))
            }
            BasisSearch::Undecided { .. } => None,
        };
    }
    // a basis abelianizes to a basis of the lattice; the determinant is p
    let (a, b) = (pres.h_l_plus, pres.h_l_minus);
    let det = a.c1 * b.c2 - a.c2 * b.c1;
    (det.abs() != 1).then_some((false, Evidence::Homology, None))
}

fn derived_fact(pres: &AnnulusPresentation, fact: FactKind) -> Option<bool> {
    let k = pres.p.unsigned_abs();
    if k == 0 {
        return None;
    }
    let r = match fact {
        FactKind::LPlusIsPPower => derived_power(pres, Side::Plus, k),
        FactKind::LMinusIsPPower => derived_power(pres, Side::Minus, k),
        FactKind::LPlusIsPPowerOfPrimitive => derived_power_of_primitive(pres, Side::Plus, k),
        FactKind::LMinusIsPPowerOfPrimitive => derived_power_of_primitive(pres, Side::Minus, k),
        FactKind::LPlusPrimitive => derived_primitive(pres, Side::Plus),
        FactKind::LMinusPrimitive => derived_primitive(pres, Side::Minus),
        FactKind::ClassesContainBasis => derived_basis(pres).map(|(b, e, _)| (b, e)),
    };
    r.map(|(b, _)| b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    SchemaVersion,
    NonTrivialSlope,
    OrientationOffset,
    CoordinateSum,
    AbelianizationMismatch,
    DistinctClasses,
    KnotParameters,
    LinkParameters,
    ExteriorConsistency,
    DuplicateFact,
    FactContradiction,
}

impl Invariant {
    pub fn message(self) -> &'static str {
        match self {
            Invariant::SchemaVersion => "unsupported schema version",
            Invariant::NonTrivialSlope => "non-trivial boundary slope required",
            Invariant::OrientationOffset => "orientation offset violated",
            Invariant::CoordinateSum => "coordinate sum of [l+] differs from p",
            Invariant::AbelianizationMismatch => "abelianization mismatch",
            Invariant::DistinctClasses => "[l+] and [l-] must be nonzero and differ up to sign",
            Invariant::KnotParameters => "torus/cable parameters need |m| >= 2 and n >= 2",
            Invariant::LinkParameters => "torus/cable link parameters must be nonzero and even",
            Invariant::ExteriorConsistency => "a trivial HK_A exterior is irreducible and atoroidal",
            Invariant::DuplicateFact => "asserted fact listed twice",
            Invariant::FactContradiction => "asserted fact contradicts computed evidence",
        }
    }

    /// The source of the invariant, as a short rule description.
    pub fn source(self) -> &'static str {
        match self {
            Invariant::SchemaVersion | Invariant::DuplicateFact => "input format",
            Invariant::NonTrivialSlope => "boundary slope must be nonzero",
            Invariant::OrientationOffset => "orientation convention [l+] - [l-] = (1,-1)",
            Invariant::CoordinateSum => "q1 + q2 = p in any meridional basis",
            Invariant::AbelianizationMismatch => "words abelianize to their homology classes",
            Invariant::DistinctClasses => "[l+] != ±[l-], neither trivial in H1",
            Invariant::KnotParameters => "torus/cable convention |m|, n > 1",
            Invariant::LinkParameters => "boundary of the annulus is a (2m,2n) link",
            Invariant::ExteriorConsistency => "HK_A is irreducible or trivial",
            Invariant::FactContradiction => "word computation and abelianization",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub message: String,
}

impl Violation {
    fn new(invariant: Invariant, detail: impl fmt::Display) -> Self {
        Violation {
            invariant,
            message: format!("{}: {} ({})", invariant.message(), detail, invariant.source()),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn validate(pres: &AnnulusPresentation) -> Vec<Violation> {
    use Invariant::*;
    let mut out = Vec::new();
    if pres.schema != PRESENTATION_SCHEMA {
        out.push(Violation::new(SchemaVersion, format!("got {:?}", pres.schema)));
    }
    if pres.p == 0 {
        out.push(Violation::new(NonTrivialSlope, "p = 0"));
    }
    let offset = pres.h_l_plus - pres.h_l_minus;
    if offset != LatticeVector::new(1, -1) {
        let hint = if offset == LatticeVector::new(-1, 1) {
            "; this is the offset a MINUS basis change produces"
        } else {
            ""
        };
        out.push(Violation::new(OrientationOffset, format!("[l+] - [l-] = {offset}{hint}")));
    }
    if pres.h_l_plus.sum() != pres.p {
        out.push(Violation::new(
            CoordinateSum,
            format!("{} sums to {}, p = {}", pres.h_l_plus, pres.h_l_plus.sum(), pres.p),
        ));
    }
    for side in Side::BOTH {
        if let Some(w) = pres.word(side) {
            let a = fgroup::abelianize(w);
            if a != pres.class(side) {
                out.push(Violation::new(
                    AbelianizationMismatch,
                    format!("{side} word {w} abelianizes to {a}, class is {}", pres.class(side)),
                ));
            }
        }
    }
    let (a, b) = (pres.h_l_plus, pres.h_l_minus);
    if a.is_zero() || b.is_zero() || a == b || a == -b {
        out.push(Violation::new(DistinctClasses, format!("[l+] = {a}, [l-] = {b}")));
    }
    for (name, k) in [("l1", &pres.l1), ("l2", &pres.l2)] {
        if let Some((m, n)) = k.as_ref().and_then(|k| k.torus_or_cable_params()) {
            if m.abs() < 2 || n < 2 {
                out.push(Violation::new(KnotParameters, format!("{name} has (m,n) = ({m},{n})")));
            }
        }
    }
    if let BoundaryLinkDescriptor::TorusLink { params } | BoundaryLinkDescriptor::CableLink { params, .. } =
        &pres.boundary_link
    {
        if params.iter().any(|&x| x == 0 || x % 2 != 0) {
            out.push(Violation::new(LinkParameters, format!("params {params:?}")));
        }
    }
    if !pres.exterior.is_consistent() {
        out.push(Violation::new(ExteriorConsistency, "hk_a_trivial = true with a false companion"));
    }
    let mut seen = BTreeSet::new();
    for f in &pres.asserted_facts {
        if !seen.insert(f.fact) {
            out.push(Violation::new(DuplicateFact, format!("{:?}", f.fact)));
        }
    }
    if pres.p != 0 {
        for f in &pres.asserted_facts {
            let (Some(claimed), Some(computed)) = (f.value.known(), derived_fact(pres, f.fact)) else {
                continue;
            };
            if claimed != computed {
                out.push(Violation::new(
                    FactContradiction,
                    format!("{:?} asserted {claimed}, computed {computed}", f.fact),
                ));
            }
        }
        for side in Side::BOTH {
            let pop = pres.asserted(FactKind::is_p_power_of_primitive(side));
            let pow = pres.asserted(FactKind::is_p_power(side));
            let prim = pres.asserted(FactKind::primitive(side));
            if pop == Some(true) && pow == Some(false) {
                out.push(Violation::new(
                    FactContradiction,
                    format!("{side} asserted a p-th power of a primitive but not a p-th power"),
                ));
            }
            if pres.p.abs() >= 2 && prim == Some(true) && pow == Some(true) {
                out.push(Violation::new(
                    FactContradiction,
                    format!("{side} asserted primitive and a proper p-th power"),
                ));
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("validation failed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ModelError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn load_presentation(text: &str) -> Result<AnnulusPresentation, ModelError> {
    let pres: AnnulusPresentation = from_json(text)?;
    let v = validate(&pres);
    if v.is_empty() {
        Ok(pres)
    } else {
        Err(ModelError::Validation(v))
    }
}

/// Deterministic JSON: keys sorted, two-space indent, LF, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("model values serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn save_presentation(pres: &AnnulusPresentation) -> String {
    to_canonical_json(pres)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SymGroup {
    #[serde(rename = "TRIVIAL")]
    Trivial,
    #[serde(rename = "Z2")]
    Z2,
    #[serde(rename = "Z2xZ2")]
    Z2xZ2,
}

impl SymGroup {
    pub fn from_rank(bits: u32) -> SymGroup {
        match bits {
            0 => SymGroup::Trivial,
            1 => SymGroup::Z2,
            _ => SymGroup::Z2xZ2,
        }
    }
}

impl fmt::Display for SymGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymGroup::Trivial => "TRIVIAL",
            SymGroup::Z2 => "Z2",
            SymGroup::Z2xZ2 => "Z2xZ2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub group: SymGroup,
    pub citation: Citation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactorState {
    Possible,
    Excluded,
    Undetermined,
}

/// One `Z2` factor of the image of the symmetry group in the mapping class
/// group of the annulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryFactor {
    pub state: FactorState,
    pub citation: Option<Citation>,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryBound {
    pub upper: Option<SymGroup>,
    pub lower: Option<LowerBound>,
    pub exact: Option<SymGroup>,
    pub chiral: Verdict,
    /// Symmetries reversing the orientation of the annulus; these exchange
    /// `l+` and `l-`.
    pub reverse_annulus: SymmetryFactor,
    /// The nontrivial symmetry preserving the annulus orientation; it
    /// reverses both boundary circles.
    pub half_turn: SymmetryFactor,
    pub citations: Vec<Citation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub invariant: SlopeInvariant,
    pub n_used: i64,
    pub slope_type: SlopeInvariant,
    pub is_symmetric_type: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub label: String,
    pub p: i64,
    pub slope: SlopeReport,
    pub condition_dagger: Verdict,
    pub condition_double_dagger: Verdict,
    pub essential: Verdict,
    pub irreducible: Verdict,
    pub atoroidal: Verdict,
    pub unique_annulus: Verdict,
    pub symmetry: SymmetryBound,
}

pub fn save_report(report: &Report) -> String {
    to_canonical_json(report)
}

pub fn load_report(text: &str) -> Result<Report, ModelError> {
    from_json(text)
}
