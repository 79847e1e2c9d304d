//! Acceptance suite. Runs as a plain binary so every criterion prints its
//! PASS/FAIL line, then exits nonzero if any failed.

use std::path::PathBuf;
use std::time::Instant;

use annulus_core::criteria::{classify, classify_with_lower_bound};
use annulus_core::families::{self, Family, FamilyInstance, Predicate, StepRange};
use annulus_core::fgroup::{self, QuotientClass, Word};
use annulus_core::lattice::{self, Divisibility, SlopeInvariant};
use annulus_core::model::{self, FactorState, Report, SymGroup};
use annulus_core::oracle;
use annulus_core::verdict::{Citation, Evidence, State};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> Result<model::AnnulusPresentation, String> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    model::load_presentation(&text).map_err(|e| format!("{name}: {e}"))
}

fn run(inst: &FamilyInstance) -> Result<Report, String> {
    classify_with_lower_bound(&inst.presentation, inst.known_lower_bound.clone()).map_err(|e| e.to_string())
}

fn si(a: i64, b: i64) -> SlopeInvariant {
    SlopeInvariant::new(a, b).unwrap()
}

fn criterion_1() -> Check {
    let r = run(&families::family_t(3, 3).map_err(|e| e.to_string())?)?;
    ensure!(r.irreducible.state == State::Proved, "irreducible {}", r.irreducible.state);
    ensure!(r.atoroidal.state == State::Proved, "atoroidal {}", r.atoroidal.state);
    ensure!(
        r.unique_annulus.state == State::Proved && r.unique_annulus.citation == Some(Citation::OddSlopeUniqueness),
        "unique {:?}",
        r.unique_annulus
    );
    ensure!(r.symmetry.chiral.state == State::Proved, "chiral {}", r.symmetry.chiral.state);
    ensure!(r.slope.slope_type == si(2, 1), "slope type {}", r.slope.slope_type);
    ensure!(r.slope.is_symmetric_type, "not symmetric type");
    ensure!(r.symmetry.upper == Some(SymGroup::Z2xZ2), "upper {:?}", r.symmetry.upper);
    ensure!(r.symmetry.exact == Some(SymGroup::Z2xZ2), "exact {:?}", r.symmetry.exact);
    Ok(())
}

fn criterion_2() -> Check {
    let inst = families::family_t(-3, 5).map_err(|e| e.to_string())?;
    let r = run(&inst)?;
    ensure!(r.p == 1, "p = {}", r.p);
    ensure!(r.slope.invariant == si(1, 0) && r.slope.n_used == 2, "slope {:?}", r.slope);
    for (name, v) in [("irreducible", &r.irreducible), ("atoroidal", &r.atoroidal), ("unique", &r.unique_annulus)] {
        ensure!(
            v.state == State::Proved && v.citation == Some(Citation::SlopeOneRigidity),
            "{name}: {:?}",
            v
        );
    }
    let wp = inst.presentation.w_l_plus.as_ref().unwrap();
    let wm = inst.presentation.w_l_minus.as_ref().unwrap();
    ensure!(fgroup::xayb_quotient_class(wp) == Some(QuotientClass::InfiniteCyclic), "l+ quotient class");
    ensure!(
        fgroup::xayb_quotient_class(wm) == Some(QuotientClass::TorusGroup { larger: 3, smaller: 2 }),
        "l- quotient class"
    );
    let rev = &r.symmetry.reverse_annulus;
    ensure!(
        rev.state == FactorState::Excluded && rev.citation == Some(Citation::SwapObstruction),
        "reverse factor {:?}",
        rev
    );
    ensure!(r.symmetry.upper == Some(SymGroup::Z2), "upper {:?}", r.symmetry.upper);
    ensure!(r.symmetry.exact == Some(SymGroup::Z2), "exact {:?}", r.symmetry.exact);
    Ok(())
}

fn criterion_3() -> Check {
    let r = run(&families::family_u(3, 1).map_err(|e| e.to_string())?)?;
    ensure!(r.symmetry.upper == Some(SymGroup::Trivial), "upper {:?}", r.symmetry.upper);
    ensure!(!r.slope.is_symmetric_type, "slope type {} symmetric", r.slope.slope_type);
    ensure!(
        r.symmetry.half_turn.citation == Some(Citation::NonInvertibleBoundary),
        "half turn {:?}",
        r.symmetry.half_turn
    );
    let u = &r.unique_annulus;
    ensure!(
        u.state == State::Proved
            && u.citation == Some(Citation::IrreducibleExteriorUniqueness)
            && u.evidence == Some(Evidence::Homology),
        "unique {:?}",
        u
    );
    for (h, want) in [((3, 1), Divisibility::NotMultiple), ((2, 2), Divisibility::NotMultiple)] {
        let d = lattice::divisibility_class(lattice::LatticeVector::new(h.0, h.1), 4).unwrap();
        ensure!(d == want, "{h:?}: {d:?}");
    }
    Ok(())
}

fn criterion_4() -> Check {
    for nu in [3, 5, 7, 9, 11] {
        let inst = families::family_t(1, nu).map_err(|e| e.to_string())?;
        let p = inst.presentation.p;
        let d = lattice::divisibility_class(inst.presentation.h_l_minus, p).unwrap();
        ensure!(d == Divisibility::MultipleOfGenerator, "T(1,{nu}): [l-] is {d:?}");
        let r = run(&inst)?;
        ensure!(r.irreducible.state == State::Unknown, "T(1,{nu}) irreducible {}", r.irreducible.state);
    }
    let r = classify(&fixture("fig1_reducible.json")?).map_err(|e| e.to_string())?;
    ensure!(r.irreducible.state == State::Unknown, "fig1 irreducible {}", r.irreducible.state);

    let r = classify(&fixture("hk_t.json")?).map_err(|e| e.to_string())?;
    ensure!(r.irreducible.state == State::Proved, "HK^t irreducible {}", r.irreducible.state);
    ensure!(r.condition_double_dagger.state == State::Refuted, "HK^t torus condition not refuted");
    ensure!(r.unique_annulus.state == State::Unknown, "HK^t unique {}", r.unique_annulus.state);

    let r = classify(&fixture("hk_c.json")?).map_err(|e| e.to_string())?;
    ensure!(r.condition_dagger.state == State::Refuted, "HK^c cable condition not refuted");
    ensure!(r.unique_annulus.state == State::Unknown, "HK^c unique {}", r.unique_annulus.state);

    let r = classify(&fixture("nonunique.json")?).map_err(|e| e.to_string())?;
    ensure!(r.unique_annulus.state == State::Unknown, "p = 2 example unique {}", r.unique_annulus.state);
    Ok(())
}

fn distinct_slope_types(rows: &[(FamilyInstance, Report)]) -> Check {
    let mut seen = std::collections::BTreeSet::new();
    for (inst, r) in rows {
        ensure!(r.unique_annulus.state == State::Proved, "{} unique {}", r.label, r.unique_annulus.state);
        ensure!(r.slope.slope_type == inst.expected_slope_type, "{} slope type", r.label);
        ensure!(seen.insert((r.slope.slope_type.p1(), r.slope.slope_type.p2())), "{} repeats a slope type", r.label);
    }
    Ok(())
}

fn criterion_5() -> Check {
    let r = StepRange { start: 3, end: 15, step: 1 };
    let pt = families::enumerate(Family::T, r, Some(r), Some(Predicate::PT)).map_err(|e| e.to_string())?;
    ensure!(pt.len() == 28, "PT has {} rows", pt.len());
    let rows: Vec<_> = pt.into_iter().map(|i| run(&i).map(|r| (i, r))).collect::<Result<_, _>>()?;
    for (i, r) in &rows {
        let want = si((i.mu + 1) / 2, (i.nu - 1) / 2);
        ensure!(r.slope.slope_type == want, "{}: {} != {want}", r.label, r.slope.slope_type);
    }
    distinct_slope_types(&rows)?;

    let g = StepRange::new(0, 4);
    let pi = families::enumerate(Family::I, g, Some(g), Some(Predicate::PI)).map_err(|e| e.to_string())?;
    ensure!(!pi.is_empty(), "PI grid empty");
    let rows: Vec<_> = pi.into_iter().map(|i| run(&i).map(|r| (i, r))).collect::<Result<_, _>>()?;
    distinct_slope_types(&rows)
}

fn summary(s: oracle::OracleSummary) -> Check {
    ensure!(s.passed(), "{} of {} {} checks failed, first: {}", s.failures.len(), s.checked, s.suite, s.failures[0]);
    Ok(())
}

fn criterion_6() -> Check {
    summary(oracle::check_primitivity(8))
}

fn criterion_7() -> Check {
    summary(oracle::check_basis(8))
}

fn criterion_8() -> Check {
    let suites = [
        (oracle::check_roots(1000, 0), 1000),
        (oracle::check_reverse(500, 0), 500),
        (oracle::check_normalize(200, 0), 200),
        (oracle::check_json_round_trip(200, 0), 200),
    ];
    for (s, n) in suites {
        ensure!(s.checked == n, "{} ran {} cases", s.suite, s.checked);
        summary(s)?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    for p in [2i64, 3, 4, 5] {
        let inst = families::family_t(-2 * p + 1, 4 * p - 1).map_err(|e| e.to_string())?;
        let pres = &inst.presentation;
        let want_plus: Word = format!("x1^{} x2^{}", -p + 1, 2 * p - 1).parse().unwrap();
        let want_minus: Word = format!("x1^{} x2^{}", -p, 2 * p).parse().unwrap();
        ensure!(pres.w_l_plus.as_ref() == Some(&want_plus), "p = {p}: l+ word {:?}", pres.w_l_plus);
        ensure!(pres.w_l_minus.as_ref() == Some(&want_minus), "p = {p}: l- word {:?}", pres.w_l_minus);
        if p % 2 == 0 {
            continue;
        }
        let r = run(&inst)?;
        for (name, v) in [("irreducible", &r.irreducible), ("atoroidal", &r.atoroidal), ("unique", &r.unique_annulus)] {
            ensure!(v.state == State::Proved, "p = {p}: {name} {}", v.state);
        }
        ensure!(
            r.irreducible.citation == Some(Citation::TrivialExteriorPowerCriterion)
                && r.irreducible.evidence == Some(Evidence::Words),
            "p = {p}: irreducible via {:?}",
            r.irreducible
        );
        ensure!(r.unique_annulus.evidence == Some(Evidence::Words), "p = {p}: unique via {:?}", r.unique_annulus);
        let d = lattice::divisibility_class(pres.h_l_minus, p).unwrap();
        ensure!(d == Divisibility::MultipleOfGenerator, "p = {p}: [l-] is {d:?}");
        let homology_only = classify(&pres.without_words()).map_err(|e| e.to_string())?;
        ensure!(
            homology_only.irreducible.state == State::Unknown,
            "p = {p}: homology alone proved irreducibility"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("T(3,3) full classification, symmetry Z2xZ2", criterion_1),
        ("T(-3,5) rigidity and swap obstruction, symmetry Z2", criterion_2),
        ("U(3,1) trivial symmetry group", criterion_3),
        ("negative controls stay unproved", criterion_4),
        ("PT and PI grids have distinct slope types", criterion_5),
        ("Whitehead primitivity matches Nielsen orbit, length <= 8", criterion_6),
        ("basis test matches Nielsen orbit, total length <= 8", criterion_7),
        ("seeded property suites", criterion_8),
        ("T(-2p+1,4p-1) word-level criteria", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
