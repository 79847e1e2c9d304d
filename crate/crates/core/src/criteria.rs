//! The verdict engine. Every rule here is a sufficient condition, so the only
//! outcomes for irreducibility, atoroidality and uniqueness are PROVED and
//! UNKNOWN.

use thiserror::Error;

use crate::fgroup;
use crate::lattice::{self, Divisibility};
use crate::model::{
    self, AnnulusPresentation, BoundaryLinkDescriptor, FactKind, FactorState, KnotKind,
    LowerBound, Report, Side, SlopeReport, SymGroup, SymmetryBound, SymmetryFactor, TriState,
    Violation, REPORT_SCHEMA,
};
use crate::verdict::{Attempt, Citation, Evidence, Verdict};

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("presentation is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("inconsistent exterior status: HK_A trivial but not irreducible or not atoroidal")]
    InconsistentExterior,
    #[error("known lower bound {lower} exceeds the proved upper bound {upper}")]
    BoundConflict { lower: SymGroup, upper: SymGroup },
}

fn attempt(rule: Citation, reason: impl Into<String>) -> Attempt {
    Attempt { rule, reason: reason.into() }
}

/// The weaker of two evidence sources, for reporting a combined verdict.
fn weakest(a: Evidence, b: Evidence) -> Evidence {
    let rank = |e| match e {
        Evidence::Words => 0,
        Evidence::AssertedFact => 1,
        Evidence::Homology => 2,
    };
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

/// Whether `|p| = mn` for some `|m|, n >= 2`.
fn slope_factors(p: i64) -> bool {
    let a = p.unsigned_abs();
    (2..a).any(|n| n * n <= a && a.is_multiple_of(n))
}

/// `l` on `side` is the `k`-th power of a primitive element.
pub fn power_of_primitive(pres: &AnnulusPresentation, side: Side, k: u64) -> Option<(bool, Evidence)> {
    if pres.word(side).is_none() && k == pres.p.unsigned_abs() {
        if let Some(v) = pres.asserted(FactKind::is_p_power_of_primitive(side)) {
            return Some((v, Evidence::AssertedFact));
        }
        if pres.asserted(FactKind::is_p_power(side)) == Some(false) {
            return Some((false, Evidence::AssertedFact));
        }
    }
    model::derived_power_of_primitive(pres, side, k)
}

/// `l` on `side` is the `|p|`-th power of some element.
pub fn p_power(pres: &AnnulusPresentation, side: Side) -> Option<(bool, Evidence)> {
    let k = pres.p.unsigned_abs();
    if pres.word(side).is_none() {
        if let Some(v) = pres.asserted(FactKind::is_p_power(side)) {
            return Some((v, Evidence::AssertedFact));
        }
        if pres.asserted(FactKind::is_p_power_of_primitive(side)) == Some(true) {
            return Some((true, Evidence::AssertedFact));
        }
    }
    model::derived_power(pres, side, k)
}

pub fn primitive(pres: &AnnulusPresentation, side: Side) -> Option<(bool, Evidence)> {
    if pres.word(side).is_none() {
        if let Some(v) = pres.asserted(FactKind::primitive(side)) {
            return Some((v, Evidence::AssertedFact));
        }
    }
    model::derived_primitive(pres, side)
}

/// Whether the classes of `l+`, `l-` contain a basis, with the rule used.
pub fn classes_contain_basis(pres: &AnnulusPresentation) -> Option<(bool, Evidence, Option<Citation>)> {
    if pres.w_l_plus.is_none() || pres.w_l_minus.is_none() {
        if let Some(v) = pres.asserted(FactKind::ClassesContainBasis) {
            return Some((v, Evidence::AssertedFact, None));
        }
    }
    model::derived_basis(pres)
}

/// Both sides fail `test`; returns the weakest evidence used, or the reason
/// it could not be established.
fn neither(
    what: &str,
    test: impl Fn(Side) -> Option<(bool, Evidence)>,
) -> Result<Evidence, String> {
    let mut ev = Evidence::Words;
    for side in Side::BOTH {
        match test(side) {
            Some((false, e)) => ev = weakest(ev, e),
            Some((true, _)) => return Err(format!("{side} is {what}")),
            None => return Err(format!("cannot decide whether {side} is {what}")),
        }
    }
    Ok(ev)
}

fn condition(pres: &AnnulusPresentation, with_cable: bool) -> Verdict {
    let (cite, shape) = if with_cable {
        (Citation::TorusCableBoundaryCondition, "torus or cable knot")
    } else {
        (Citation::TorusBoundaryCondition, "torus knot")
    };
    let p = pres.p;
    let mut missing = Vec::new();
    for (name, k) in [("l1", &pres.l1), ("l2", &pres.l2)] {
        let Some(k) = k else {
            missing.push(name);
            continue;
        };
        let hit = match &k.kind {
            KnotKind::Torus { m, n } => Some((m, n, "TORUS")),
            KnotKind::Cable { m, n, .. } if with_cable => Some((m, n, "CABLE")),
            _ => None,
        };
        if let Some((m, n, kind)) = hit {
            if m * n == p {
                return Verdict::refuted(cite, format!("{name} is {kind}({m},{n}) with mn = p = {p}"));
            }
        }
    }
    if missing.is_empty() {
        Verdict::proved(cite, format!("no boundary circle is a {shape} with mn = p = {p}"))
    } else if !slope_factors(p) {
        Verdict::proved(cite, format!("|p| = {} is not mn with |m|, n >= 2", p.abs()))
    } else {
        Verdict::unknown(
            format!("knot type of {} not given", missing.join(", ")),
            vec![attempt(cite, "boundary knot descriptor missing")],
        )
    }
}

/// The two boundary-knot conditions: not a torus/cable knot, and not a
/// torus knot, with `mn = p`.
pub fn check_condition_dagger(pres: &AnnulusPresentation) -> (Verdict, Verdict) {
    (condition(pres, true), condition(pres, false))
}

/// Hypotheses of slope-one rigidity, or why they fail.
fn rigidity(pres: &AnnulusPresentation) -> Result<Verdict, String> {
    if pres.p.abs() != 1 {
        return Err(format!("|p| = {} != 1", pres.p.abs()));
    }
    let ext = &pres.exterior;
    if ext.atoroidal() != TriState::True {
        return Err("HK_A not known to be atoroidal".into());
    }
    match ext.hk_a_trivial {
        TriState::False => Ok(Verdict::proved(
            Citation::SlopeOneRigidity,
            "p = ±1 and HK_A is atoroidal and non-trivial",
        )),
        TriState::Unknown => Err("triviality of HK_A unknown".into()),
        TriState::True => match classes_contain_basis(pres) {
            Some((false, ev, rule)) => {
                let via = rule.map(|r| format!(" ({r})")).unwrap_or_default();
                Ok(Verdict::proved(
                    Citation::SlopeOneRigidity,
                    format!("p = ±1, HK_A trivial, {{l+, l-}} is not a basis{via}"),
                )
                .with_evidence(ev))
            }
            Some((true, _, _)) => Err("the classes of l+, l- contain a basis".into()),
            None => Err("could not decide whether l+, l- give a basis".into()),
        },
    }
}

pub fn check_irreducible(
    pres: &AnnulusPresentation,
    double_dagger: &Verdict,
) -> Result<(Verdict, Verdict), CriteriaError> {
    let ext = &pres.exterior;
    if !ext.is_consistent() {
        return Err(CriteriaError::InconsistentExterior);
    }
    let mut tried = Vec::new();
    let k = pres.p.unsigned_abs();
    let trivial = ext.hk_a_trivial;

    let found = 'rules: {
        if ext.hk_a_irreducible == TriState::True && trivial == TriState::False {
            break 'rules Some(Verdict::proved(
                Citation::IrreducibleExteriorCriterion,
                "HK_A is irreducible and non-trivial",
            ));
        }
        tried.push(attempt(Citation::IrreducibleExteriorCriterion, "HK_A not known irreducible non-trivial"));

        match rigidity(pres) {
            Ok(v) => break 'rules Some(v),
            Err(why) => tried.push(attempt(Citation::SlopeOneRigidity, why)),
        }

        if trivial != TriState::True {
            tried.push(attempt(Citation::TrivialExteriorPowerCriterion, "HK_A not known trivial"));
            break 'rules None;
        }

        if double_dagger.is_proved() {
            match neither(&format!("a {k}-th power of a primitive"), |s| {
                power_of_primitive(pres, s, k)
            }) {
                Ok(ev) => {
                    let cite = if ev == Evidence::Homology {
                        Citation::TrivialExteriorPowerHomologyCriterion
                    } else {
                        Citation::TrivialExteriorPowerCriterion
                    };
                    break 'rules Some(
                        Verdict::proved(
                            cite,
                            format!("HK_A trivial, torus condition holds, neither l+ nor l- is a {k}-th power of a primitive"),
                        )
                        .with_evidence(ev),
                    );
                }
                Err(why) => tried.push(attempt(Citation::TrivialExteriorPowerCriterion, why)),
            }
        } else {
            tried.push(attempt(Citation::TrivialExteriorPowerCriterion, "torus condition not established"));
        }

        let torus = match (&pres.l1, &pres.l2) {
            (Some(a), Some(b)) => match (&a.kind, &b.kind) {
                (KnotKind::Torus { m, n }, KnotKind::Torus { m: m2, n: n2 })
                    if (m, n) == (m2, n2) && m * n == pres.p =>
                {
                    Some((*m, *n))
                }
                _ => None,
            },
            _ => None,
        };
        let Some((m, n)) = torus else {
            tried.push(attempt(
                Citation::TrivialExteriorTorusBoundaryCriterion,
                "l1, l2 not both TORUS(m,n) with mn = p",
            ));
            break 'rules None;
        };
        for side in Side::BOTH {
            let a = power_of_primitive(pres, side, n as u64);
            let b = power_of_primitive(pres, side, m.unsigned_abs());
            if let (Some((false, e1)), Some((false, e2))) = (a, b) {
                break 'rules Some(
                    Verdict::proved(
                        Citation::TrivialExteriorTorusBoundaryCriterion,
                        format!("l1, l2 are TORUS({m},{n}); {side} is neither a {n}-th nor a {}-th power of a primitive", m.abs()),
                    )
                    .with_evidence(weakest(e1, e2)),
                );
            }
        }
        tried.push(attempt(
            Citation::TrivialExteriorTorusBoundaryCriterion,
            format!("neither l+ nor l- is known to avoid {n}-th and {}-th powers of primitives", m.abs()),
        ));
        None
    };

    Ok(match found {
        Some(v) => {
            let essential = Verdict { details: format!("annulus is essential: {}", v.details), ..v.clone() };
            (v, essential)
        }
        None => (
            Verdict::unknown("no irreducibility criterion applies", tried.clone()),
            Verdict::unknown("essentiality follows only from the irreducibility criteria", tried),
        ),
    })
}

pub fn check_atoroidal(pres: &AnnulusPresentation, irreducible: &Verdict, essential: &Verdict) -> Verdict {
    let mut tried = Vec::new();
    match rigidity(pres) {
        Ok(v) => return v,
        Err(why) => tried.push(attempt(Citation::SlopeOneRigidity, why)),
    }
    let ext = &pres.exterior;
    if irreducible.is_proved() && ext.hk_a_trivial == TriState::True {
        return Verdict::proved(Citation::TrivialExteriorAtoroidality, "HK irreducible and HK_A trivial");
    }
    tried.push(attempt(Citation::TrivialExteriorAtoroidality, "needs irreducible HK and trivial HK_A"));

    if !essential.is_proved() {
        tried.push(attempt(Citation::TorusLinkAtoroidality, "annulus not known essential"));
    } else if ext.atoroidal() != TriState::True {
        tried.push(attempt(Citation::TorusLinkAtoroidality, "HK_A not known atoroidal"));
    } else {
        let p = pres.p;
        let blocked = match &pres.boundary_link {
            BoundaryLinkDescriptor::TorusLink { params: [a, b] } => {
                let (x, y) = (a / 2, b / 2);
                (x.abs() > 1 && y.abs() > 1 && (x * y).abs() == p.abs())
                    .then(|| format!("boundary is the ({a},{b}) torus link and mn = ±p"))
            }
            BoundaryLinkDescriptor::Unknown if slope_factors(p) => {
                Some("boundary link type unknown and |p| = mn is possible".to_string())
            }
            _ => None,
        };
        match blocked {
            None => {
                return Verdict::proved(
                    Citation::TorusLinkAtoroidality,
                    "annulus essential, HK_A atoroidal, boundary not a (2m,2n) torus link with mn = ±p",
                )
            }
            Some(why) => tried.push(attempt(Citation::TorusLinkAtoroidality, why)),
        }
    }
    Verdict::unknown("no atoroidality criterion applies", tried)
}

pub fn check_unique_annulus(
    pres: &AnnulusPresentation,
    irreducible: &Verdict,
    atoroidal: &Verdict,
    dagger: &Verdict,
    double_dagger: &Verdict,
) -> Verdict {
    if !(irreducible.is_proved() && atoroidal.is_proved()) {
        return Verdict::unknown("hypotheses not established", Vec::new());
    }
    let mut tried = Vec::new();
    match rigidity(pres) {
        Ok(v) => return v,
        Err(why) => tried.push(attempt(Citation::SlopeOneRigidity, why)),
    }
    let ext = &pres.exterior;
    let p = pres.p;
    let k = p.unsigned_abs();

    if ext.hk_a_irreducible == TriState::True && ext.hk_a_trivial == TriState::False {
        if !dagger.is_proved() {
            tried.push(attempt(Citation::IrreducibleExteriorUniqueness, "torus/cable condition not established"));
        } else if k == 1 {
            return Verdict::proved(Citation::IrreducibleExteriorUniqueness, "HK_A irreducible, p = ±1");
        } else {
            match neither(&format!("a {k}-th power"), |s| p_power(pres, s)) {
                Ok(ev) => {
                    return Verdict::proved(
                        Citation::IrreducibleExteriorUniqueness,
                        format!("HK_A irreducible, neither l+ nor l- is a {k}-th power"),
                    )
                    .with_evidence(ev)
                }
                Err(why) => tried.push(attempt(Citation::IrreducibleExteriorUniqueness, why)),
            }
        }
    } else {
        tried.push(attempt(Citation::IrreducibleExteriorUniqueness, "HK_A not known irreducible non-trivial"));
    }

    if ext.hk_a_trivial != TriState::True {
        tried.push(attempt(Citation::TrivialExteriorUniqueness, "HK_A not known trivial"));
        return Verdict::unknown("no uniqueness criterion applies", tried);
    }
    if !double_dagger.is_proved() {
        tried.push(attempt(Citation::TrivialExteriorUniqueness, "torus condition not established"));
        tried.push(attempt(Citation::OddSlopeUniqueness, "torus condition not established"));
        return Verdict::unknown("no uniqueness criterion applies", tried);
    }
    if k == 1 {
        return Verdict::proved(Citation::TrivialExteriorUniqueness, "HK_A trivial, p = ±1");
    }
    let powers = neither(&format!("a {k}-th power of a primitive"), |s| power_of_primitive(pres, s, k));
    let non_primitive = Side::BOTH
        .into_iter()
        .filter_map(|s| match primitive(pres, s) {
            Some((false, e)) => Some((s, e)),
            _ => None,
        })
        .min_by_key(|(_, e)| *e == Evidence::Homology);
    match (powers, non_primitive) {
        (Ok(e1), Some((side, e2))) => {
            return Verdict::proved(
                Citation::TrivialExteriorUniqueness,
                format!("HK_A trivial, {side} not primitive, neither l+ nor l- a {k}-th power of a primitive"),
            )
            .with_evidence(weakest(e1, e2))
        }
        (Err(why), _) => tried.push(attempt(Citation::TrivialExteriorUniqueness, why)),
        (Ok(_), None) => tried.push(attempt(
            Citation::TrivialExteriorUniqueness,
            "both l+ and l- may be primitive",
        )),
    }

    if k % 2 == 1 {
        let gens: Vec<Side> = Side::BOTH
            .into_iter()
            .filter(|s| lattice::divisibility_class(pres.class(*s), p) == Ok(Divisibility::MultipleOfGenerator))
            .collect();
        if gens.is_empty() {
            return Verdict::proved(
                Citation::OddSlopeUniqueness,
                format!("p = {p} odd, neither [l+] nor [l-] is {k} times a generator"),
            )
            .with_evidence(Evidence::Homology);
        }
        tried.push(attempt(
            Citation::OddSlopeUniqueness,
            format!("[{}] is {k} times a generator", gens[0]),
        ));
    } else {
        tried.push(attempt(Citation::OddSlopeUniqueness, format!("p = {p} is even")));
    }
    Verdict::unknown("no uniqueness criterion applies", tried)
}

fn factor(state: FactorState, citation: Option<Citation>, details: impl Into<String>) -> SymmetryFactor {
    SymmetryFactor { state, citation, details: details.into() }
}

pub fn symmetry_upper_bound(pres: &AnnulusPresentation, slope: &SlopeReport, unique: &Verdict) -> SymmetryBound {
    if !unique.is_proved() {
        let why = "requires a unique annulus";
        return SymmetryBound {
            upper: None,
            lower: None,
            exact: None,
            chiral: Verdict::unknown(why, vec![attempt(Citation::ChiralityLinkingNumber, why)]),
            reverse_annulus: factor(FactorState::Undetermined, None, why),
            half_turn: factor(FactorState::Undetermined, None, why),
            citations: Vec::new(),
        };
    }
    let chiral = Verdict::proved(
        Citation::ChiralityLinkingNumber,
        format!("lk(l1, l2) = {} != 0 changes sign under a mirror", pres.p),
    );
    let mut citations = vec![Citation::SymmetryGeneralBound];

    let swap = match (&pres.w_l_plus, &pres.w_l_minus) {
        (Some(u), Some(v)) => match (fgroup::xayb_quotient_class(u), fgroup::xayb_quotient_class(v)) {
            (Some(a), Some(b)) if a != b => Some((a, b)),
            _ => None,
        },
        _ => None,
    };
    let reverse = if !slope.is_symmetric_type {
        citations.push(Citation::AsymmetricSlopeTypeBound);
        factor(
            FactorState::Excluded,
            Some(Citation::AsymmetricSlopeTypeBound),
            format!("slope type {} is not ((p+1)/2,(p-1)/2)", slope.slope_type),
        )
    } else if let Some((a, b)) = swap {
        citations.push(Citation::SwapObstruction);
        factor(
            FactorState::Excluded,
            Some(Citation::SwapObstruction),
            format!("complements of l+ and l- have non-isomorphic groups {a} and {b}"),
        )
    } else {
        factor(FactorState::Possible, None, "no obstruction to reversing the annulus")
    };

    let non_invertible = [&pres.l1, &pres.l2]
        .iter()
        .all(|k| k.as_ref().is_some_and(|k| k.invertible == TriState::False));
    let half_turn = if reverse.state == FactorState::Excluded && non_invertible {
        citations.push(Citation::NonInvertibleBoundary);
        factor(
            FactorState::Excluded,
            Some(Citation::NonInvertibleBoundary),
            "the remaining symmetry reverses l1 and l2, which are non-invertible",
        )
    } else {
        factor(FactorState::Possible, None, "no obstruction to the orientation-preserving symmetry")
    };

    let rank = [&reverse, &half_turn].iter().filter(|f| f.state == FactorState::Possible).count();
    let upper = SymGroup::from_rank(rank as u32);
    SymmetryBound {
        upper: Some(upper),
        lower: None,
        exact: (upper == SymGroup::Trivial).then_some(upper),
        chiral,
        reverse_annulus: reverse,
        half_turn,
        citations,
    }
}

/// Runs every check in dependency order.
pub fn classify(pres: &AnnulusPresentation) -> Result<Report, CriteriaError> {
    classify_with_lower_bound(pres, None)
}

/// As [`classify`], combining the upper bound with a known lower bound.
pub fn classify_with_lower_bound(
    pres: &AnnulusPresentation,
    lower: Option<LowerBound>,
) -> Result<Report, CriteriaError> {
    let violations = model::validate(pres);
    if !violations.is_empty() {
        return Err(CriteriaError::Invalid(violations));
    }
    let (invariant, n_used) = pres.slope().expect("validated presentations normalize");
    let slope_type = lattice::slope_type(invariant);
    let slope = SlopeReport {
        invariant,
        n_used,
        slope_type,
        is_symmetric_type: lattice::is_symmetric_type(slope_type),
    };
    let (dagger, double_dagger) = check_condition_dagger(pres);
    let (irreducible, essential) = check_irreducible(pres, &double_dagger)?;
    let atoroidal = check_atoroidal(pres, &irreducible, &essential);
    let unique_annulus = check_unique_annulus(pres, &irreducible, &atoroidal, &dagger, &double_dagger);
    let mut symmetry = symmetry_upper_bound(pres, &slope, &unique_annulus);
    if let Some(lb) = lower {
        if let Some(upper) = symmetry.upper {
            if lb.group > upper {
                return Err(CriteriaError::BoundConflict { lower: lb.group, upper });
            }
            if lb.group == upper {
                symmetry.exact = Some(upper);
            }
        }
        symmetry.lower = Some(lb);
    }
    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        label: pres.label.clone(),
        p: pres.p,
        slope,
        condition_dagger: dagger,
        condition_double_dagger: double_dagger,
        essential,
        irreducible,
        atoroidal,
        unique_annulus,
        symmetry,
    })
}
