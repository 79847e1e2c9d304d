//! Brute-force cross-checks: Nielsen-orbit enumeration for primitivity and
//! bases, and seeded randomized suites for roots, normalization, orientation
//! reversal and report serialization.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria;
use crate::fgroup::{self, CyclicWord, Letter, Word};
use crate::lattice::{self, BasisChange, LatticeVector, SlopeInvariant};
use crate::model::{self, AnnulusPresentation, BoundaryLinkDescriptor, KnotDescriptor, TriState};

/// Outcome of one oracle suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSummary {
    pub suite: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn nielsen_moves(u: &Word, v: &Word) -> Vec<(Word, Word)> {
    let (ui, vi) = (u.inverse(), v.inverse());
    vec![
        (v.clone(), u.clone()),
        (ui.clone(), v.clone()),
        (u.clone(), vi.clone()),
        (u.mul(v), v.clone()),
        (u.mul(&vi), v.clone()),
        (v.mul(u), v.clone()),
        (vi.mul(u), v.clone()),
        (u.clone(), v.mul(u)),
        (u.clone(), v.mul(&ui)),
        (u.clone(), u.mul(v)),
        (u.clone(), ui.mul(v)),
    ]
}

/// Every ordered basis `(u, v)` with `|u| + |v| <= max_total`, found by
/// breadth-first search from `(x1, x2)` through pairs within the bound.
/// Nielsen reduction never needs to lengthen a basis, so the bounded
/// search reaches all of them.
pub fn nielsen_orbit(max_total: usize) -> HashSet<(Word, Word)> {
    let start = (Word::x1(), Word::x2());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((u, v)) = queue.pop_front() {
        for next in nielsen_moves(&u, &v) {
            if next.0.len() + next.1.len() <= max_total && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Conjugacy classes of basis elements seen in the bounded orbit.
pub fn primitive_classes(max_total: usize) -> BTreeSet<CyclicWord> {
    nielsen_orbit(max_total)
        .into_iter()
        .flat_map(|(u, v)| [fgroup::canonical_class(&u), fgroup::canonical_class(&v)])
        .collect()
}

/// All conjugacy classes of nontrivial words of cyclic length at most `n`.
pub fn cyclic_classes_up_to(n: usize) -> BTreeSet<CyclicWord> {
    fgroup::reduced_words_up_to(n)
        .into_iter()
        .filter(|w| !w.is_empty() && w.is_cyclically_reduced())
        .map(|w| fgroup::canonical_class(&w))
        .collect()
}

/// Compares Whitehead primitivity with the orbit oracle on every cyclic
/// word of length at most `maxlen`.
pub fn check_primitivity(maxlen: usize) -> OracleSummary {
    let classes = cyclic_classes_up_to(maxlen);
    // a primitive cyclic word of length n has a basis partner shorter than
    // itself, so total length 2n covers every class
    let prim = primitive_classes(2 * maxlen);
    let mut failures = Vec::new();
    for c in &classes {
        let fast = fgroup::is_primitive(c.rep());
        let slow = prim.contains(c);
        if fast != slow {
            failures.push(format!("{c}: whitehead {fast}, orbit {slow}"));
        }
    }
    OracleSummary { suite: "primitivity", checked: classes.len(), failures }
}

/// Compares the commutator basis test with the orbit oracle on every pair
/// of reduced words of total length at most `max_total`.
pub fn check_basis(max_total: usize) -> OracleSummary {
    let orbit = nielsen_orbit(max_total);
    let words = fgroup::reduced_words_up_to(max_total);
    let mut failures = Vec::new();
    let mut checked = 0;
    for u in &words {
        for v in words.iter().filter(|v| u.len() + v.len() <= max_total) {
            checked += 1;
            let fast = fgroup::is_basis_pair(u, v);
            let slow = orbit.contains(&(u.clone(), v.clone()));
            if fast != slow {
                failures.push(format!("({u}, {v}): commutator {fast}, orbit {slow}"));
            }
        }
    }
    OracleSummary { suite: "basis", checked, failures }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly chosen freely reduced word of length at most `max_len`.
pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::ALL[rng.gen_range(0..4)];
        if letters.last() != Some(&l.inv()) {
            letters.push(l);
        }
    }
    fgroup::free_reduce(letters)
}

/// Builds `c u^n c^-1` and checks that the extracted root reconstructs it.
pub fn check_roots(cases: usize, seed: u64) -> OracleSummary {
    let mut rng = seeded(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    while checked < cases {
        let u = random_word(&mut rng, 6);
        if fgroup::cyclic_length(&u) == 0 {
            continue;
        }
        checked += 1;
        let n = rng.gen_range(1..=5usize);
        let c = random_word(&mut rng, 4);
        let w = u.pow(n as i64).conjugated_by(&c);
        match fgroup::nth_root(&w, n) {
            Ok(Some(r)) => {
                if fgroup::canonical_class(&r.pow(n as i64)) != fgroup::canonical_class(&w) {
                    failures.push(format!("root {r} of {w} (n = {n}) does not reconstruct"));
                }
            }
            other => failures.push(format!("{w} = ({c})({u})^{n}({c})^-1: nth_root gave {other:?}")),
        }
        let (root, e) = fgroup::max_root(&w).expect("nonempty");
        if e % n != 0 || fgroup::canonical_class(&root.pow(e as i64)) != fgroup::canonical_class(&w) {
            failures.push(format!("max_root of {w} is ({root}, {e}), n = {n}"));
        }
        let a = fgroup::abelianize(&u.pow(n as i64));
        if a != fgroup::abelianize(&u).scale(n as i64) {
            failures.push(format!("abelianize({u}^{n}) = {a}"));
        }
    }
    OracleSummary { suite: "roots", checked, failures }
}

fn random_class<R: Rng>(rng: &mut R) -> LatticeVector {
    loop {
        let v = LatticeVector::new(rng.gen_range(-40..=40), rng.gen_range(-40..=40));
        if v.sum() != 0 {
            return v;
        }
    }
}

/// Normalization is unchanged by a prior PLUS change of basis, and a MINUS
/// change is rejected.
pub fn check_normalize(cases: usize, seed: u64) -> OracleSummary {
    let mut rng = seeded(seed);
    let mut failures = Vec::new();
    for _ in 0..cases {
        let plus = random_class(&mut rng);
        let minus = plus - LatticeVector::new(1, -1);
        let n = rng.gen_range(-20..=20);
        let base = lattice::normalize_oriented(plus, minus);
        let t = BasisChange::plus(n);
        let moved = lattice::normalize_oriented(lattice::apply_change(plus, t), lattice::apply_change(minus, t));
        if base.as_ref().map(|r| r.0) != moved.as_ref().map(|r| r.0) {
            failures.push(format!("{plus} under PLUS {n}: {base:?} vs {moved:?}"));
        }
        let t = BasisChange::minus(n);
        if lattice::normalize_oriented(lattice::apply_change(plus, t), lattice::apply_change(minus, t)).is_ok() {
            failures.push(format!("{plus} under MINUS {n} was accepted"));
        }
        if let Ok((s, _)) = base {
            if s.p() != plus.sum() {
                failures.push(format!("{plus} normalized to {s} with a different p"));
            }
        }
    }
    OracleSummary { suite: "normalize", checked: cases, failures }
}

pub fn random_slope_invariant<R: Rng>(rng: &mut R) -> SlopeInvariant {
    let v = random_class(rng);
    lattice::normalize(v.c1, v.c2).expect("p != 0").0
}

pub fn check_reverse(cases: usize, seed: u64) -> OracleSummary {
    let mut rng = seeded(seed);
    let mut failures = Vec::new();
    for _ in 0..cases {
        let s = random_slope_invariant(&mut rng);
        let r = lattice::reverse_orientation(s);
        if lattice::reverse_orientation(r) != s || r.p() != s.p() {
            failures.push(format!("reverse of {s} is {r}"));
        }
        let t = lattice::slope_type(s);
        if t.p1() < t.p2() {
            failures.push(format!("slope type of {s} is {t}"));
        }
    }
    OracleSummary { suite: "reverse", checked: cases, failures }
}

fn random_tri<R: Rng>(rng: &mut R) -> TriState {
    [TriState::True, TriState::False, TriState::Unknown][rng.gen_range(0..3)]
}

/// A random presentation that passes validation.
pub fn random_presentation<R: Rng>(rng: &mut R, label: &str) -> AnnulusPresentation {
    let h = random_class(rng);
    let mut pres = AnnulusPresentation::new(label, h, h - LatticeVector::new(1, -1));
    if rng.gen_bool(0.5) {
        pres.w_l_plus = Some(Word::x1a_x2b(h.c1, h.c2));
        let m = pres.h_l_minus;
        pres.w_l_minus = Some(Word::x1a_x2b(m.c1, m.c2));
    }
    let knot = |rng: &mut R| match rng.gen_range(0..4) {
        0 => None,
        1 => Some(KnotDescriptor::trivial()),
        2 => Some(KnotDescriptor::torus(rng.gen_range(2..5) * if rng.gen_bool(0.5) { 1 } else { -1 }, 2)),
        _ => Some(KnotDescriptor::other("K", random_tri(rng))),
    };
    pres.l1 = knot(rng);
    pres.l2 = knot(rng);
    pres.boundary_link = match rng.gen_range(0..3) {
        0 => BoundaryLinkDescriptor::TorusLink { params: [2 * rng.gen_range(2..4), 2 * rng.gen_range(2..4)] },
        1 => BoundaryLinkDescriptor::Other,
        _ => BoundaryLinkDescriptor::Unknown,
    };
    pres.exterior.hk_a_trivial = random_tri(rng);
    if !pres.exterior.hk_a_trivial.is_true() {
        pres.exterior.hk_a_irreducible = random_tri(rng);
        pres.exterior.hk_a_atoroidal = random_tri(rng);
    }
    pres
}

/// `load_report(save_report(r)) == r` for reports of random presentations.
pub fn check_json_round_trip(cases: usize, seed: u64) -> OracleSummary {
    let mut rng = seeded(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let pres = random_presentation(&mut rng, &format!("random-{i}"));
        let report = match criteria::classify(&pres) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{}: {e}", pres.label));
                continue;
            }
        };
        let text = model::save_report(&report);
        match model::load_report(&text) {
            Ok(back) if back == report && model::save_report(&back) == text => {}
            Ok(_) => failures.push(format!("{}: round trip changed the report", pres.label)),
            Err(e) => failures.push(format!("{}: {e}", pres.label)),
        }
        let ptext = model::save_presentation(&pres);
        if model::load_presentation(&ptext).ok().as_ref() != Some(&pres) {
            failures.push(format!("{}: presentation round trip failed", pres.label));
        }
    }
    OracleSummary { suite: "json", checked: cases, failures }
}
