use annulus_core::criteria::{self, classify};
use annulus_core::families::{self, Family, FamilyInstance, Predicate, StepRange};
use annulus_core::fgroup::{self, Letter, Word};
use annulus_core::lattice::{self, BasisChange, LatticeVector};
use annulus_core::model::{
    self, AnnulusPresentation, AssertedFact, FactKind, Invariant, Report, Side, TriState,
};
use annulus_core::oracle;
use annulus_core::verdict::{Citation, State, Verdict};
use proptest::prelude::*;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..4usize, 0..=max_len).prop_map(|ix| fgroup::free_reduce(ix.into_iter().map(|i| Letter::ALL[i])))
}

fn nontrivial_word(max_len: usize) -> impl Strategy<Value = Word> {
    word(max_len).prop_filter("nontrivial", |w| !w.is_empty())
}

fn presentation() -> impl Strategy<Value = AnnulusPresentation> {
    any::<u64>().prop_map(|seed| oracle::random_presentation(&mut oracle::seeded(seed), &format!("p{seed}")))
}

fn verdicts(r: &Report) -> [(&'static str, &Verdict); 4] {
    [
        ("essential", &r.essential),
        ("irreducible", &r.irreducible),
        ("atoroidal", &r.atoroidal),
        ("unique", &r.unique_annulus),
    ]
}

/// Every fact the words settle, written out as asserted facts.
fn facts_from_words(pres: &AnnulusPresentation) -> Vec<AssertedFact> {
    let k = pres.p.unsigned_abs();
    let mut out = Vec::new();
    for side in Side::BOTH {
        let derived = [
            (FactKind::is_p_power(side), model::derived_power(pres, side, k)),
            (FactKind::is_p_power_of_primitive(side), model::derived_power_of_primitive(pres, side, k)),
            (FactKind::primitive(side), model::derived_primitive(pres, side)),
        ];
        for (fact, d) in derived {
            if let Some((v, _)) = d {
                out.push(AssertedFact { fact, value: if v { TriState::True } else { TriState::False }, provenance: "words".into() });
            }
        }
    }
    out
}

/// `weaker` was computed from less information than `stronger`.
fn no_new_proofs(stronger: &Report, weaker: &Report) -> Result<(), TestCaseError> {
    for ((name, s), (_, w)) in verdicts(stronger).into_iter().zip(verdicts(weaker)) {
        if w.state != State::Unknown {
            prop_assert_eq!(w.state, s.state, "{} changed with less information", name);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn free_reduce_is_idempotent(w in word(20)) {
        prop_assert_eq!(fgroup::free_reduce(w.letters().iter().copied()), w.clone());
        let ls = w.letters();
        prop_assert!(ls.windows(2).all(|p| p[0] != p[1].inv()));
    }

    #[test]
    fn cyclic_reduce_reconstructs(w in word(20)) {
        let (core, c) = fgroup::cyclic_reduce(&w);
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugated_by(&c), w);
    }

    #[test]
    fn conjugacy_is_an_equivalence(u in word(10), c1 in word(6), c2 in word(6)) {
        let v = u.conjugated_by(&c1);
        let w = v.conjugated_by(&c2);
        prop_assert!(fgroup::are_conjugate(&u, &u));
        prop_assert!(fgroup::are_conjugate(&u, &v) && fgroup::are_conjugate(&v, &u));
        prop_assert!(fgroup::are_conjugate(&u, &w));
        prop_assert_eq!(fgroup::canonical_class(&u), fgroup::canonical_class(&w));
    }

    #[test]
    fn roots_are_sound(u in nontrivial_word(8), n in 1usize..5, c in word(4)) {
        let w = u.pow(n as i64).conjugated_by(&c);
        let r = fgroup::nth_root(&w, n).unwrap();
        prop_assert!(r.is_some());
        prop_assert!(fgroup::are_conjugate(&r.unwrap().pow(n as i64), &w));
        prop_assert_eq!(fgroup::abelianize(&w), fgroup::abelianize(&u).scale(n as i64));
    }

    #[test]
    fn abelianization_obstructs_roots(w in nontrivial_word(12), n in 2usize..5) {
        let a = fgroup::abelianize(&w);
        if a.c1 % n as i64 != 0 || a.c2 % n as i64 != 0 {
            prop_assert_eq!(fgroup::nth_root(&w, n).unwrap(), None);
        }
        if let Some(r) = fgroup::nth_root(&w, n).unwrap() {
            prop_assert!(fgroup::are_conjugate(&r.pow(n as i64), &w));
        }
    }

    #[test]
    fn primitivity_is_conjugation_and_inverse_invariant(w in nontrivial_word(10), c in word(5)) {
        let p = fgroup::is_primitive(&w);
        prop_assert_eq!(fgroup::is_primitive(&w.inverse()), p);
        prop_assert_eq!(fgroup::is_primitive(&w.conjugated_by(&c)), p);
    }

    #[test]
    fn normalize_ignores_plus_changes(q1 in -40i64..40, q2 in -40i64..40, n in -6i64..6) {
        prop_assume!(q1 + q2 != 0);
        let base = lattice::normalize(q1, q2).unwrap().0;
        let v = lattice::apply_change(LatticeVector::new(q1, q2), BasisChange::plus(n));
        prop_assert_eq!(lattice::normalize(v.c1, v.c2).unwrap().0, base);
    }

    #[test]
    fn reverse_is_an_involution(seed in any::<u64>()) {
        let s = oracle::random_slope_invariant(&mut oracle::seeded(seed));
        let r = lattice::reverse_orientation(s);
        prop_assert_eq!(lattice::reverse_orientation(r), s);
        prop_assert_eq!(lattice::slope_type(s), lattice::slope_type(r));
        let t = lattice::slope_type(s);
        prop_assert!(t == s || t == r);
        prop_assert!(t.p1() > t.p2() || lattice::is_symmetric_type(t));
    }

    #[test]
    fn presentation_and_report_json_round_trip(pres in presentation()) {
        let text = model::save_presentation(&pres);
        prop_assert_eq!(model::load_presentation(&text).unwrap(), pres.clone());
        let report = classify(&pres).unwrap();
        prop_assert_eq!(model::load_report(&model::save_report(&report)).unwrap(), report);
    }

    #[test]
    fn random_presentations_validate(pres in presentation()) {
        prop_assert!(model::validate(&pres).is_empty());
    }

    #[test]
    fn mutations_are_caught(pres in presentation(), which in 0..4usize, d in 1i64..4) {
        let mut bad = pres.clone();
        let expect = match which {
            0 => { bad.p += d; Invariant::CoordinateSum }
            1 => { bad.h_l_minus = bad.h_l_minus - LatticeVector::new(d, 0); Invariant::OrientationOffset }
            2 => { bad.schema = "annulus-presentation/0".into(); Invariant::SchemaVersion }
            _ => {
                let w = Word::x1a_x2b(bad.h_l_plus.c1 + d, bad.h_l_plus.c2);
                bad.w_l_plus = Some(w);
                Invariant::AbelianizationMismatch
            }
        };
        let v = model::validate(&bad);
        prop_assert!(v.iter().any(|x| x.invariant == expect), "{:?} not reported: {:?}", expect, v);
        prop_assert!(matches!(classify(&bad), Err(criteria::CriteriaError::Invalid(_))));
    }

    #[test]
    fn never_refutes_the_main_properties(pres in presentation()) {
        let r = classify(&pres).unwrap();
        for (name, v) in verdicts(&r) {
            prop_assert!(v.state != State::Refuted, "{} refuted", name);
            prop_assert_eq!(v.state == State::Proved, v.citation.is_some(), "{} citation", name);
        }
        if r.unique_annulus.state == State::Proved {
            prop_assert!(r.irreducible.state == State::Proved && r.atoroidal.state == State::Proved);
            prop_assert_eq!(r.symmetry.chiral.state, State::Proved);
        }
    }

    #[test]
    fn citations_are_closed(pres in presentation()) {
        let r = classify(&pres).unwrap();
        let json: serde_json::Value = serde_json::from_str(&model::save_report(&r)).unwrap();
        let mut stack = vec![&json];
        while let Some(v) = stack.pop() {
            match v {
                serde_json::Value::Object(m) => {
                    for (k, x) in m {
                        if k == "citation" || k == "rule" {
                            if let Some(s) = x.as_str() {
                                prop_assert!(Citation::from_anchor(s).is_some(), "unknown anchor {}", s);
                            }
                        }
                        stack.push(x);
                    }
                }
                serde_json::Value::Array(a) => stack.extend(a),
                _ => {}
            }
        }
    }

    #[test]
    fn dropping_facts_never_adds_proofs(pres in presentation()) {
        prop_assume!(pres.w_l_plus.is_some());
        let mut with_facts = pres.without_words();
        with_facts.asserted_facts = facts_from_words(&pres);
        prop_assert!(model::validate(&with_facts).is_empty());
        let full = classify(&with_facts).unwrap();
        let bare = classify(&pres.without_words()).unwrap();
        no_new_proofs(&full, &bare)?;
        let words = classify(&pres).unwrap();
        no_new_proofs(&words, &bare)?;
    }
}

/// Every constructible instance with both parameters in `-r..=r`.
fn grid(family: Family, r: i64) -> Vec<FamilyInstance> {
    let insts: Vec<_> = (-r..=r)
        .flat_map(|mu| (-r..=r).map(move |nu| (mu, nu)))
        .filter_map(|(mu, nu)| families::construct(family, mu, nu).ok())
        .collect();
    assert!(insts.len() > 20, "{family}: only {} instances", insts.len());
    insts
}

#[test]
fn homology_shortcuts_agree_with_words_on_families() {
    for family in [Family::T, Family::I, Family::U] {
        for inst in grid(family, 9) {
            let pres = &inst.presentation;
            if pres.w_l_plus.is_none() {
                continue;
            }
            let bare = pres.without_words();
            let k = pres.p.unsigned_abs();
            for side in Side::BOTH {
                if let Some((v, _)) = model::derived_power_of_primitive(&bare, side, k) {
                    let (w, _) = model::derived_power_of_primitive(pres, side, k).unwrap();
                    assert_eq!(v, w, "{} {side}: power of primitive", pres.label);
                }
                if let Some((v, _)) = model::derived_power(&bare, side, k) {
                    let (w, _) = model::derived_power(pres, side, k).unwrap();
                    assert_eq!(v, w, "{} {side}: power", pres.label);
                }
            }
            if let Some((v, _, _)) = model::derived_basis(&bare) {
                if let Some((w, _, _)) = model::derived_basis(pres) {
                    assert_eq!(v, w, "{}: basis", pres.label);
                }
            }
        }
    }
}

#[test]
fn withholding_words_never_contradicts_t_family() {
    for inst in grid(Family::T, 11) {
        let full = classify(&inst.presentation).unwrap();
        let bare = classify(&inst.presentation.without_words()).unwrap();
        for ((name, s), (_, w)) in verdicts(&full).into_iter().zip(verdicts(&bare)) {
            if w.state != State::Unknown {
                assert_eq!(w.state, s.state, "{} {name}", inst.presentation.label);
            }
        }
    }
}

#[test]
fn family_grids_have_distinct_slope_types() {
    for (pred, range) in [(Predicate::PT, StepRange::new(-15, 15)), (Predicate::PI, StepRange::new(-8, 8))] {
        let rows = families::enumerate(pred.family(), range, Some(range), Some(pred)).unwrap();
        assert!(!rows.is_empty());
        let mut seen = std::collections::BTreeMap::new();
        for inst in rows {
            let r = classify(&inst.presentation).unwrap();
            assert_eq!(r.slope.slope_type, inst.expected_slope_type, "{}", r.label);
            let key = (r.slope.slope_type.p1(), r.slope.slope_type.p2());
            if let Some(prev) = seen.insert(key, r.label.clone()) {
                panic!("{pred}: {} and {prev} share slope type {:?}", r.label, key);
            }
        }
    }
}
