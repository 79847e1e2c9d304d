//! Constructors for the three families of handlebody-knots with a type 3-3
//! annulus (`T`, `I`, `U`), membership predicates, and a grid driver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgroup::Word;
use crate::lattice::{self, LatticeVector, SlopeInvariant};
use crate::model::{
    AnnulusPresentation, BoundaryLinkDescriptor, ExteriorStatus, KnotDescriptor, LowerBound, SymGroup,
    TriState,
};
use crate::verdict::Citation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("T({mu},{nu}) needs odd parameters")]
    EvenParameter { mu: i64, nu: i64 },
    #[error("{family}({mu},{nu}) has boundary slope 0")]
    ZeroSlope { family: Family, mu: i64, nu: i64 },
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("predicate {predicate} does not apply to family {family}")]
    PredicateMismatch { predicate: Predicate, family: Family },
    #[error("bad family spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("a nu range is required for {0}")]
    MissingNuRange(Family),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    T,
    I,
    U,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::T => "T",
            Family::I => "I",
            Family::U => "U",
        })
    }
}

impl FromStr for Family {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(Family::T),
            "I" => Ok(Family::I),
            "U" => Ok(Family::U),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub mu: i64,
    pub nu: i64,
    pub presentation: AnnulusPresentation,
    pub known_lower_bound: Option<LowerBound>,
    pub expected_slope_type: SlopeInvariant,
}

fn finish(
    family: Family,
    mu: i64,
    nu: i64,
    presentation: AnnulusPresentation,
    known_lower_bound: Option<LowerBound>,
) -> FamilyInstance {
    let (s, _) = lattice::normalize(presentation.h_l_plus.c1, presentation.h_l_plus.c2)
        .expect("constructors reject p = 0");
    FamilyInstance {
        family,
        mu,
        nu,
        presentation,
        known_lower_bound,
        expected_slope_type: lattice::slope_type(s),
    }
}

fn provenance(pairs: &[(&str, &str)]) -> std::collections::BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// Known lower bound on the symmetry group of `T(mu, nu)`, from explicit
/// symmetries of the subfamilies `V`, `V'` and `W`.
fn t_lower_bound(mu: i64, nu: i64) -> Option<LowerBound> {
    if Predicate::V.holds(mu, nu) {
        Some(LowerBound { group: SymGroup::Z2xZ2, citation: Citation::FamilyVSymmetry })
    } else if nu == 2 - mu && !(-1..=3).contains(&mu) {
        // T(mu, 2-mu) = T(2-mu, mu), so mu > 3 is the same subfamily
        Some(LowerBound { group: SymGroup::Z2, citation: Citation::FamilyVPrimeSymmetry })
    } else if Predicate::W.holds(mu, nu) {
        Some(LowerBound { group: SymGroup::Z2, citation: Citation::FamilyWSymmetry })
    } else {
        None
    }
}

/// `T(mu, nu)`: the unknotting-annulus family built from a trivial knot and
/// a tunnel, with `mu`, `nu` odd.
pub fn family_t(mu: i64, nu: i64) -> Result<FamilyInstance, FamilyError> {
    if mu % 2 == 0 || nu % 2 == 0 {
        return Err(FamilyError::EvenParameter { mu, nu });
    }
    if mu + nu == 0 {
        return Err(FamilyError::ZeroSlope { family: Family::T, mu, nu });
    }
    let hp = LatticeVector::new((mu + 1) / 2, (nu - 1) / 2);
    let hm = LatticeVector::new((mu - 1) / 2, (nu + 1) / 2);
    let mut pres = AnnulusPresentation::new(&format!("T({mu},{nu})"), hp, hm);
    pres.w_l_plus = Some(Word::x1a_x2b(hp.c1, hp.c2));
    pres.w_l_minus = Some(Word::x1a_x2b(hm.c1, hm.c2));
    pres.l1 = Some(KnotDescriptor::trivial());
    pres.l2 = Some(KnotDescriptor::trivial());
    pres.exterior = ExteriorStatus {
        hk_a_trivial: TriState::True,
        hk_a_irreducible: TriState::True,
        hk_a_atoroidal: TriState::True,
        provenance: provenance(&[(
            "hk_a_trivial",
            "HK_A is a neighborhood of a trivial knot and a tunnel; its exterior is a handlebody",
        )]),
    };
    pres.notes = Some(
        "words x1^a x2^b with (a,b) the homology class; the general form is an extrapolation of the T(mu,2-mu) and T(-2p+1,4p-1) cases"
            .into(),
    );
    Ok(finish(Family::T, mu, nu, pres, t_lower_bound(mu, nu)))
}

/// `I(mu, nu)`: a `p`-annulus on the trefoil constituent of `5_2`, with
/// `p = mu + nu + 3`.
pub fn family_i(mu: i64, nu: i64) -> Result<FamilyInstance, FamilyError> {
    let p = mu + nu + 3;
    if p == 0 {
        return Err(FamilyError::ZeroSlope { family: Family::I, mu, nu });
    }
    let hp = LatticeVector::new(mu + 2, nu + 1);
    let hm = LatticeVector::new(mu + 1, nu + 2);
    let mut pres = AnnulusPresentation::new(&format!("I({mu},{nu})"), hp, hm);
    // the boundary circles are parallel copies of the trefoil constituent
    pres.l1 = Some(KnotDescriptor::torus(3, 2));
    pres.l2 = Some(KnotDescriptor::torus(3, 2));
    pres.boundary_link = if p == 6 {
        BoundaryLinkDescriptor::TorusLink { params: [6, 4] }
    } else {
        BoundaryLinkDescriptor::Other
    };
    let src = "HK_A is the handlebody-knot 5_2, irreducible and atoroidal (its mirror is T(3,3))";
    pres.exterior = ExteriorStatus {
        hk_a_trivial: TriState::False,
        hk_a_irreducible: TriState::True,
        hk_a_atoroidal: TriState::True,
        provenance: provenance(&[
            ("hk_a_trivial", src),
            ("hk_a_irreducible", src),
            ("hk_a_atoroidal", src),
        ]),
    };
    Ok(finish(Family::I, mu, nu, pres, None))
}

/// `U(mu, nu)`: a `p`-annulus on the knot `8_16` with a tunnel, `p = mu + nu`.
pub fn family_u(mu: i64, nu: i64) -> Result<FamilyInstance, FamilyError> {
    if mu + nu == 0 {
        return Err(FamilyError::ZeroSlope { family: Family::U, mu, nu });
    }
    let hp = LatticeVector::new(mu, nu);
    let hm = LatticeVector::new(mu - 1, nu + 1);
    let mut pres = AnnulusPresentation::new(&format!("U({mu},{nu})"), hp, hm);
    pres.l1 = Some(KnotDescriptor::other("8_16", TriState::False));
    pres.l2 = Some(KnotDescriptor::other("8_16", TriState::False));
    pres.boundary_link = BoundaryLinkDescriptor::Other;
    let src = "HK_A is equivalent to the mirror of the handlebody-knot 5_1";
    pres.exterior = ExteriorStatus {
        hk_a_trivial: TriState::False,
        hk_a_irreducible: TriState::True,
        hk_a_atoroidal: TriState::True,
        provenance: provenance(&[
            ("hk_a_trivial", src),
            ("hk_a_irreducible", src),
            ("hk_a_atoroidal", src),
        ]),
    };
    pres.notes = Some("8_16 is a non-invertible knot".into());
    Ok(finish(Family::U, mu, nu, pres, None))
}

pub fn construct(family: Family, mu: i64, nu: i64) -> Result<FamilyInstance, FamilyError> {
    match family {
        Family::T => family_t(mu, nu),
        Family::I => family_i(mu, nu),
        Family::U => family_u(mu, nu),
    }
}

/// Named subfamilies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Predicate {
    /// `T`, odd `mu >= nu > 1` or `-1 > mu >= nu`.
    PT,
    /// `I`, `mu >= nu > -1` or `-2 > mu >= nu`, and `p != 6`.
    PI,
    /// `T(mu, mu)`, `mu` odd, `|mu| > 1`.
    V,
    /// `T`, odd `mu != nu`, both `> 1` or both `< -1`.
    W,
    /// `T(mu, 2 - mu)`, `mu < -1`.
    Vprime,
    /// `U`, `mu > nu + 1 > 1` or `0 > mu > nu + 1`.
    U,
}

impl Predicate {
    pub const ALL: [Predicate; 6] =
        [Predicate::PT, Predicate::PI, Predicate::V, Predicate::W, Predicate::Vprime, Predicate::U];

    pub fn family(self) -> Family {
        match self {
            Predicate::PI => Family::I,
            Predicate::U => Family::U,
            _ => Family::T,
        }
    }

    pub fn holds(self, mu: i64, nu: i64) -> bool {
        let odd = mu % 2 != 0 && nu % 2 != 0;
        match self {
            Predicate::PT => odd && ((mu >= nu && nu > 1) || (-1 > mu && mu >= nu)),
            Predicate::PI => ((mu >= nu && nu > -1) || (-2 > mu && mu >= nu)) && mu + nu + 3 != 6,
            Predicate::V => odd && mu == nu && mu.abs() > 1,
            Predicate::W => odd && mu != nu && ((mu > 1 && nu > 1) || (mu < -1 && nu < -1)),
            Predicate::Vprime => mu % 2 != 0 && nu == 2 - mu && mu < -1,
            Predicate::U => (mu > nu + 1 && nu + 1 > 1) || (0 > mu && mu > nu + 1),
        }
    }

    /// For one-parameter subfamilies, `nu` as a function of `mu`.
    pub fn derived_nu(self, mu: i64) -> Option<i64> {
        match self {
            Predicate::V => Some(mu),
            Predicate::Vprime => Some(2 - mu),
            _ => None,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::PT => "PT",
            Predicate::PI => "PI",
            Predicate::V => "V",
            Predicate::W => "W",
            Predicate::Vprime => "Vprime",
            Predicate::U => "U",
        })
    }
}

impl FromStr for Predicate {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| FamilyError::UnknownPredicate(s.to_string()))
    }
}

/// Inclusive integer range `start..end` with a positive step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRange {
    pub start: i64,
    pub end: i64,
    pub step: i64,
}

impl StepRange {
    pub fn new(start: i64, end: i64) -> Self {
        StepRange { start, end, step: 1 }
    }

    pub fn values(&self) -> impl Iterator<Item = i64> {
        let (end, step) = (self.end, self.step);
        std::iter::successors(Some(self.start), move |x| Some(x + step)).take_while(move |x| *x <= end)
    }
}

impl FromStr for StepRange {
    type Err = String;

    /// `a..b` or `a..b:step`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (range, step) = match s.split_once(':') {
            Some((r, st)) => (r, st.parse::<i64>().map_err(|e| format!("step {st:?}: {e}"))?),
            None => (s, 1),
        };
        if step <= 0 {
            return Err(format!("step must be positive, got {step}"));
        }
        let (a, b) = range.split_once("..").ok_or_else(|| format!("expected a..b, got {range:?}"))?;
        let start = a.trim().parse().map_err(|e| format!("start {a:?}: {e}"))?;
        let end = b.trim().parse().map_err(|e| format!("end {b:?}: {e}"))?;
        if end < start {
            return Err(format!("empty range {s:?}"));
        }
        Ok(StepRange { start, end, step })
    }
}

/// Instances of `family` over the grid, in ascending `(mu, nu)` order. With
/// a one-parameter predicate `nu` is derived from `mu`.
pub fn enumerate(
    family: Family,
    mu_range: StepRange,
    nu_range: Option<StepRange>,
    filter: Option<Predicate>,
) -> Result<Vec<FamilyInstance>, FamilyError> {
    if let Some(pred) = filter {
        if pred.family() != family {
            return Err(FamilyError::PredicateMismatch { predicate: pred, family });
        }
    }
    let mut pairs = Vec::new();
    for mu in mu_range.values() {
        match (filter.and_then(|f| f.derived_nu(mu)), nu_range) {
            (Some(nu), _) => pairs.push((mu, nu)),
            (None, Some(r)) => pairs.extend(r.values().map(|nu| (mu, nu))),
            (None, None) => return Err(FamilyError::MissingNuRange(family)),
        }
    }
    let mut out = Vec::new();
    for (mu, nu) in pairs {
        match filter {
            Some(f) if !f.holds(mu, nu) => continue,
            _ => out.push(construct(family, mu, nu)?),
        }
    }
    Ok(out)
}

/// Parsed form of the family mini-language: `T:3,3` or
/// `T:mu=3..15:2,nu=3..15:2,filter=PT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Single { family: Family, mu: i64, nu: i64 },
    Grid { family: Family, mu: StepRange, nu: Option<StepRange>, filter: Option<Predicate> },
}

impl FamilySpec {
    pub fn instances(&self) -> Result<Vec<FamilyInstance>, FamilyError> {
        match *self {
            FamilySpec::Single { family, mu, nu } => Ok(vec![construct(family, mu, nu)?]),
            FamilySpec::Grid { family, mu, nu, filter } => enumerate(family, mu, nu, filter),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: String| FamilyError::BadSpec { spec: s.to_string(), reason };
        let (fam, rest) = s.split_once(':').ok_or_else(|| bad("expected FAMILY:...".into()))?;
        let family: Family = fam.trim().parse()?;
        if !rest.contains('=') {
            let (a, b) = rest.split_once(',').ok_or_else(|| bad("expected mu,nu".into()))?;
            let mu = a.trim().parse().map_err(|e| bad(format!("mu: {e}")))?;
            let nu = b.trim().parse().map_err(|e| bad(format!("nu: {e}")))?;
            return Ok(FamilySpec::Single { family, mu, nu });
        }
        let (mut mu, mut nu, mut filter) = (None, None, None);
        for part in rest.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            match k.trim() {
                "mu" => mu = Some(v.trim().parse::<StepRange>().map_err(bad)?),
                "nu" => nu = Some(v.trim().parse::<StepRange>().map_err(bad)?),
                "filter" => filter = Some(v.trim().parse::<Predicate>()?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let mu = mu.ok_or_else(|| bad("missing mu range".into()))?;
        Ok(FamilySpec::Grid { family, mu, nu, filter })
    }
}
