//! Integer calculus on the first homology of the exterior of `HK ∪ N(A)`,
//! a rank-two lattice with meridional bases.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("non-trivial boundary slope required (p = 0)")]
    ZeroSlope,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("divisor must be nonzero")]
    ZeroDivisor,
    #[error("[l+] - [l-] is {0}, expected (1,-1)")]
    OrientationOffset(LatticeVector),
    #[error("a MINUS transition never relates two normalized bases")]
    MinusTransition,
    #[error("({p1},{p2}) with p = {p} is outside the normalized window")]
    OutsideWindow { p1: i64, p2: i64, p: i64 },
}

/// Coordinates `(c1, c2)` of a homology class in a meridional basis `{a1, a2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub c1: i64,
    pub c2: i64,
}

impl LatticeVector {
    pub const fn new(c1: i64, c2: i64) -> Self {
        LatticeVector { c1, c2 }
    }

    pub fn sum(self) -> i64 {
        self.c1 + self.c2
    }

    pub fn scale(self, k: i64) -> Self {
        LatticeVector::new(k * self.c1, k * self.c2)
    }

    pub fn is_zero(self) -> bool {
        self.c1 == 0 && self.c2 == 0
    }
}

impl std::ops::Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> Self {
        LatticeVector::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> Self {
        LatticeVector::new(-self.c1, -self.c2)
    }
}

impl From<[i64; 2]> for LatticeVector {
    fn from(v: [i64; 2]) -> Self {
        LatticeVector::new(v[0], v[1])
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.c1, v.c2]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c1, self.c2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ChangeKind {
    Plus,
    Minus,
}

/// One of the two admissible transitions between meridional bases:
/// `{a1', a2'} = {a1, a2} M` with
/// `M = [[1-n, -n], [n, n+1]]` (PLUS, det 1) or
/// `M = [[1-n, 2-n], [n, n-1]]` (MINUS, det -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisChange {
    pub n: i64,
    pub kind: ChangeKind,
}

type Mat = [[i64; 2]; 2];

fn det(m: Mat) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

impl BasisChange {
    pub fn plus(n: i64) -> Self {
        let t = BasisChange { n, kind: ChangeKind::Plus };
        debug_assert_eq!(det(t.basis_matrix()), 1);
        t
    }

    pub fn minus(n: i64) -> Self {
        let t = BasisChange { n, kind: ChangeKind::Minus };
        debug_assert_eq!(det(t.basis_matrix()), -1);
        t
    }

    /// Columns are the new basis vectors in old coordinates.
    pub fn basis_matrix(&self) -> Mat {
        let n = self.n;
        match self.kind {
            ChangeKind::Plus => [[1 - n, -n], [n, n + 1]],
            ChangeKind::Minus => [[1 - n, 2 - n], [n, n - 1]],
        }
    }

    pub fn determinant(&self) -> i64 {
        det(self.basis_matrix())
    }

    /// Inverse of the basis matrix: maps old coordinates to new ones.
    pub fn coordinate_matrix(&self) -> Mat {
        let m = self.basis_matrix();
        let d = det(m);
        [[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]]
    }
}

/// Coordinates of the same class after the change of meridional basis.
pub fn apply_change(v: LatticeVector, t: BasisChange) -> LatticeVector {
    let m = t.coordinate_matrix();
    LatticeVector::new(m[0][0] * v.c1 + m[0][1] * v.c2, m[1][0] * v.c1 + m[1][1] * v.c2)
}

/// Coordinates `(p1, p2)` of `[l+]` in a normalized basis, with `p = p1 + p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct SlopeInvariant {
    p1: i64,
    p2: i64,
}

fn in_window(p1: i64, p: i64) -> bool {
    (p > 0 && 0 < p1 && p1 <= p) || (p < 0 && p < p1 && p1 <= 0)
}

impl SlopeInvariant {
    pub fn new(p1: i64, p2: i64) -> Result<Self, LatticeError> {
        let p = p1 + p2;
        if p == 0 {
            return Err(LatticeError::ZeroSlope);
        }
        if !in_window(p1, p) {
            return Err(LatticeError::OutsideWindow { p1, p2, p });
        }
        Ok(SlopeInvariant { p1, p2 })
    }

    pub fn p1(&self) -> i64 {
        self.p1
    }

    pub fn p2(&self) -> i64 {
        self.p2
    }

    pub fn p(&self) -> i64 {
        self.p1 + self.p2
    }

    pub fn as_vector(&self) -> LatticeVector {
        LatticeVector::new(self.p1, self.p2)
    }

    /// Invariant seen from another meridional basis reached by `t`. Only the
    /// PLUS transition with `n = 0` preserves normalization.
    pub fn after_change(&self, t: BasisChange) -> Result<SlopeInvariant, LatticeError> {
        if t.kind == ChangeKind::Minus {
            return Err(LatticeError::MinusTransition);
        }
        let v = apply_change(self.as_vector(), t);
        SlopeInvariant::new(v.c1, v.c2)
    }
}

impl TryFrom<[i64; 2]> for SlopeInvariant {
    type Error = LatticeError;
    fn try_from(v: [i64; 2]) -> Result<Self, Self::Error> {
        SlopeInvariant::new(v[0], v[1])
    }
}

impl From<SlopeInvariant> for [i64; 2] {
    fn from(s: SlopeInvariant) -> Self {
        [s.p1, s.p2]
    }
}

impl fmt::Display for SlopeInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p1, self.p2)
    }
}

/// Normalizes `[l+] = (q1, q2)`: returns the unique invariant with
/// `p1 = n p + q1` inside the window, and the `n` used.
pub fn normalize(q1: i64, q2: i64) -> Result<(SlopeInvariant, i64), LatticeError> {
    let p = q1 + q2;
    if p == 0 {
        return Err(LatticeError::ZeroSlope);
    }
    let m = p.abs();
    let p1 = if p > 0 {
        match q1.rem_euclid(m) {
            0 => m,
            r => r,
        }
    } else {
        -((-q1).rem_euclid(m))
    };
    let n = (p1 - q1) / p;
    debug_assert_eq!(apply_change(LatticeVector::new(q1, q2), BasisChange::plus(n)).c1, p1);
    Ok((SlopeInvariant::new(p1, p - p1)?, n))
}

/// Normalizes the oriented pair `([l+], [l-])`. The orientation convention
/// `[l+] - [l-] = (1,-1)` is required; the flipped offset `(-1,1)` is what a
/// MINUS transition produces, and is rejected.
pub fn normalize_oriented(
    plus: LatticeVector,
    minus: LatticeVector,
) -> Result<(SlopeInvariant, i64), LatticeError> {
    let offset = plus - minus;
    if offset != LatticeVector::new(1, -1) {
        return Err(LatticeError::OrientationOffset(offset));
    }
    normalize(plus.c1, plus.c2)
}

/// Invariant of the same annulus with reversed orientation.
pub fn reverse_orientation(s: SlopeInvariant) -> SlopeInvariant {
    normalize(s.p2 + 1, s.p1 - 1)
        .expect("reversal preserves p")
        .0
}

/// The invariant under a preferred orientation (`p1 > p2`, or the symmetric
/// type, which is its own reverse).
pub fn slope_type(s: SlopeInvariant) -> SlopeInvariant {
    if s.p1 > s.p2 {
        s
    } else {
        reverse_orientation(s)
    }
}

/// `((p+1)/2, (p-1)/2)` with `p` odd.
pub fn is_symmetric_type(s: SlopeInvariant) -> bool {
    let p = s.p();
    p % 2 != 0 && s.p1 == (p + 1) / 2 && s.p2 == (p - 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Divisibility {
    NotMultiple,
    MultipleOfElement,
    MultipleOfGenerator,
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether `v` is the `|p|`-th multiple of some class, and if so whether that
/// class is primitive in the lattice.
pub fn divisibility_class(v: LatticeVector, p: i64) -> Result<Divisibility, LatticeError> {
    if p == 0 {
        return Err(LatticeError::ZeroDivisor);
    }
    if v.c1 % p != 0 || v.c2 % p != 0 {
        return Ok(Divisibility::NotMultiple);
    }
    Ok(if gcd(v.c1 / p, v.c2 / p) == 1 {
        Divisibility::MultipleOfGenerator
    } else {
        Divisibility::MultipleOfElement
    })
}

/// Exact rational in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, LatticeError> {
        if den == 0 {
            return Err(LatticeError::ZeroDenominator);
        }
        let g = gcd(num, den).max(1);
        let s = den.signum();
        Ok(Rational { num: s * num / g, den: s * den / g })
    }

    pub fn integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SlopePairKind {
    /// `{p/q, q/p}` with both non-integral: the union is a torus-knot exterior.
    TorusFibered { p: i64, q: i64 },
    /// `{p/q, pq}`: `HK ∪ N(A)` is a handlebody.
    Handlebody { p: i64, q: i64 },
    /// The handlebody case with `q = 1`, `p != 0`.
    BoundarySlope { p: i64 },
    Invalid,
}

/// Classifies an unordered slope pair.
pub fn classify_slope_pair(r1: Rational, r2: Rational) -> SlopePairKind {
    match (r1.is_integer(), r2.is_integer()) {
        (false, false) => {
            let (p, q) = (r1.num, r1.den);
            if Rational::new(q, p) == Ok(r2) {
                SlopePairKind::TorusFibered { p, q }
            } else {
                SlopePairKind::Invalid
            }
        }
        (false, true) | (true, false) => {
            let (frac, int) = if r1.is_integer() { (r2, r1) } else { (r1, r2) };
            if int.num == frac.num * frac.den {
                SlopePairKind::Handlebody { p: frac.num, q: frac.den }
            } else {
                SlopePairKind::Invalid
            }
        }
        (true, true) => match (r1.num, r2.num) {
            (a, b) if a == b && a != 0 => SlopePairKind::BoundarySlope { p: a },
            (0, 0) => SlopePairKind::Handlebody { p: 0, q: 1 },
            _ => SlopePairKind::Invalid,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    /// Window scan independent of the closed form in `normalize`.
    fn normalize_by_scan(q1: i64, q2: i64) -> (i64, i64, i64) {
        let p = q1 + q2;
        for n in -1000..=1000 {
            let p1 = n * p + q1;
            if in_window(p1, p) {
                return (p1, p - p1, n);
            }
        }
        panic!("no window hit");
    }

    #[test]
    fn slope_pairs() {
        assert_eq!(classify_slope_pair(r(3, 2), r(2, 3)), SlopePairKind::TorusFibered { p: 3, q: 2 });
        assert_eq!(classify_slope_pair(r(3, 1), r(3, 1)), SlopePairKind::BoundarySlope { p: 3 });
        assert_eq!(classify_slope_pair(r(3, 2), r(6, 1)), SlopePairKind::Handlebody { p: 3, q: 2 });
        assert_eq!(classify_slope_pair(r(6, 1), r(3, 2)), SlopePairKind::Handlebody { p: 3, q: 2 });
        assert_eq!(classify_slope_pair(r(-3, 2), r(-2, 3)), SlopePairKind::TorusFibered { p: -3, q: 2 });
        assert_eq!(classify_slope_pair(r(3, 2), r(5, 1)), SlopePairKind::Invalid);
        assert_eq!(classify_slope_pair(r(3, 1), r(4, 1)), SlopePairKind::Invalid);
        assert_eq!(classify_slope_pair(r(3, 2), r(5, 3)), SlopePairKind::Invalid);
        assert_eq!(Rational::new(1, 0), Err(LatticeError::ZeroDenominator));
        assert_eq!(r(4, -6), r(-2, 3));
    }

    #[test]
    fn basis_changes() {
        assert_eq!(apply_change(LatticeVector::new(-1, 2), BasisChange::plus(2)), LatticeVector::new(1, 0));
        let v = LatticeVector::new(7, -4);
        assert_eq!(apply_change(v, BasisChange::plus(0)), v);
        assert_eq!(apply_change(LatticeVector::new(2, 1), BasisChange::plus(1)), LatticeVector::new(5, -2));
        for n in -5..=5 {
            assert_eq!(BasisChange::plus(n).determinant(), 1);
            assert_eq!(BasisChange::minus(n).determinant(), -1);
            // MINUS flips the orientation offset
            let off = apply_change(LatticeVector::new(1, -1), BasisChange::minus(n));
            assert_eq!(off, LatticeVector::new(-1, 1));
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(2, 1).unwrap(), (SlopeInvariant::new(2, 1).unwrap(), 0));
        assert_eq!(normalize(-1, 2).unwrap(), (SlopeInvariant::new(1, 0).unwrap(), 2));
        // frozen from normalize_by_scan(7, -3)
        assert_eq!(normalize_by_scan(7, -3), (3, 1, -1));
        assert_eq!(normalize(7, -3).unwrap(), (SlopeInvariant::new(3, 1).unwrap(), -1));
        assert_eq!(normalize(2, -2), Err(LatticeError::ZeroSlope));
        for q1 in -30..=30 {
            for q2 in -30..=30 {
                if q1 + q2 == 0 {
                    continue;
                }
                let (s, n) = normalize(q1, q2).unwrap();
                assert_eq!((s.p1(), s.p2(), n), normalize_by_scan(q1, q2), "({q1},{q2})");
            }
        }
    }

    #[test]
    fn oriented_normalization_rejects_flipped_offset() {
        let e = normalize_oriented(LatticeVector::new(1, 2), LatticeVector::new(2, 1));
        assert_eq!(e, Err(LatticeError::OrientationOffset(LatticeVector::new(-1, 1))));
        assert!(normalize_oriented(LatticeVector::new(2, 1), LatticeVector::new(1, 2)).is_ok());
    }

    #[test]
    fn orientation_reversal() {
        let s = |a, b| SlopeInvariant::new(a, b).unwrap();
        assert_eq!(reverse_orientation(s(2, 1)), s(2, 1));
        assert_eq!(reverse_orientation(s(3, 1)), s(2, 2));
        assert_eq!(reverse_orientation(reverse_orientation(s(3, 1))), s(3, 1));
        // (1,2) reverses to (3,0), not to its coordinate swap
        assert_eq!(reverse_orientation(s(1, 2)), s(3, 0));
        assert_eq!(slope_type(s(1, 2)), s(3, 0));
        assert_eq!(slope_type(s(2, 1)), s(2, 1));
        assert_eq!(slope_type(s(3, 1)), s(3, 1));
        assert!(is_symmetric_type(s(2, 1)));
        assert!(!is_symmetric_type(s(3, 1)));
        assert!(is_symmetric_type(s(1, 0)));
        assert!(is_symmetric_type(s(-1, -2)));
    }

    #[test]
    fn normalized_basis_is_fixed_by_nonzero_plus_and_every_minus() {
        let s = SlopeInvariant::new(3, 1).unwrap();
        assert_eq!(s.after_change(BasisChange::plus(0)), Ok(s));
        assert!(matches!(s.after_change(BasisChange::plus(1)), Err(LatticeError::OutsideWindow { .. })));
        assert_eq!(s.after_change(BasisChange::minus(0)), Err(LatticeError::MinusTransition));
    }

    #[test]
    fn divisibility() {
        for p in [-5i64, -2, 2, 3, 7] {
            assert_eq!(
                divisibility_class(LatticeVector::new(-p, 2 * p), p),
                Ok(Divisibility::MultipleOfGenerator)
            );
            assert_eq!(
                divisibility_class(LatticeVector::new(2 * p, 2 * p), p),
                Ok(Divisibility::MultipleOfElement)
            );
        }
        assert_eq!(divisibility_class(LatticeVector::new(2, 1), 3), Ok(Divisibility::NotMultiple));
        assert_eq!(divisibility_class(LatticeVector::new(2, 1), 0), Err(LatticeError::ZeroDivisor));
    }
}
