//! Square classes, Hilbert symbols and Weil indices at the places of Q.
//!
//! Every value is a global rational viewed locally through a [`Place`].
//! Weil indices are eighth roots of unity, carried exactly as [`Mu8`].

mod oracle;

use std::fmt;
use std::ops::{Div, Mul};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::{int, powmod, split_valuation, unit_residue, Rational};

pub use oracle::{weil_index_oracle, weil_index_oracle_with, OracleConfig, OracleReading};

/// A place of Q: a finite prime or the real place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Real,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            domain(format!("{p} is not prime"))
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Finite(p) => Some(*p),
            Place::Real => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Real => write!(f, "real"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "real" | "inf" | "R" => Ok(Place::Real),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                Place::finite(p)
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of {±1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bool_minus(minus: bool) -> Sign {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be ±1, got {v}"))),
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn pow(self, e: u64) -> Sign {
        if e % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bool_minus(self != rhs)
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).map_err(serde::de::Error::custom)
    }
}

/// The eighth root of unity `exp(2πi·k/8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mu8(u8);

impl Mu8 {
    pub const ONE: Mu8 = Mu8(0);
    pub const MINUS_ONE: Mu8 = Mu8(4);

    pub fn new(exponent: i64) -> Mu8 {
        Mu8(exponent.rem_euclid(8) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inverse(self) -> Mu8 {
        Mu8::new(-(self.0 as i64))
    }

    pub fn pow(self, e: i64) -> Mu8 {
        Mu8::new(self.0 as i64 * e)
    }

    pub fn to_complex(self) -> (f64, f64) {
        let t = std::f64::consts::PI * self.0 as f64 / 4.0;
        (t.cos(), t.sin())
    }
}

impl From<Sign> for Mu8 {
    fn from(s: Sign) -> Mu8 {
        match s {
            Sign::Plus => Mu8::ONE,
            Sign::Minus => Mu8::MINUS_ONE,
        }
    }
}

impl Mul for Mu8 {
    type Output = Mu8;
    fn mul(self, rhs: Mu8) -> Mu8 {
        Mu8::new(self.0 as i64 + rhs.0 as i64)
    }
}

impl Div for Mu8 {
    type Output = Mu8;
    fn div(self, rhs: Mu8) -> Mu8 {
        self * rhs.inverse()
    }
}

impl std::iter::Product for Mu8 {
    fn product<I: Iterator<Item = Mu8>>(iter: I) -> Mu8 {
        iter.fold(Mu8::ONE, Mul::mul)
    }
}

impl fmt::Display for Mu8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre_u64(u, p) == -1).expect("odd prime")
}

fn legendre_u64(a: u64, p: u64) -> i8 {
    match powmod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Legendre symbol of a `p`-adic unit rational.
fn legendre_unit(u: &Rational, p: u64) -> i8 {
    legendre_u64(unit_residue(u, p), p)
}

/// Class of a nonzero rational in `F^×/(F^×)²` for the completion at a place.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    place: Place,
    rep: Rational,
}

impl SquareClass {
    pub fn place(&self) -> Place {
        self.place
    }

    pub fn representative(&self) -> &Rational {
        &self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.is_one()
    }

    /// The canonical representatives at `place`, in a fixed order.
    pub fn all(place: Place) -> Vec<SquareClass> {
        canonical_reps(place)
            .into_iter()
            .map(|rep| SquareClass { place, rep })
            .collect()
    }
}

impl Mul for &SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: &SquareClass) -> SquareClass {
        assert_eq!(self.place, rhs.place, "square classes at different places");
        square_class(&(&self.rep * &rhs.rep), self.place).expect("nonzero")
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

fn canonical_reps(place: Place) -> Vec<Rational> {
    match place {
        Place::Real => vec![int(1), int(-1)],
        Place::Finite(2) => [1, -1, 2, -2, 5, -5, 10, -10].map(int).to_vec(),
        Place::Finite(p) => {
            let u = least_nonresidue(p) as i64;
            let p = p as i64;
            vec![int(1), int(u), int(p), int(u * p)]
        }
    }
}

pub fn square_class(a: &Rational, place: Place) -> Result<SquareClass> {
    if a.is_zero() {
        return domain("square class of zero");
    }
    let rep = match place {
        Place::Real => int(if a.is_negative() { -1 } else { 1 }),
        Place::Finite(2) => {
            let (v, u) = split_valuation(a, 2);
            // unit classes mod 8: 1 → 1, 3 → −5, 5 → 5, 7 → −1
            let unit = match unit_residue(&u, 8) {
                1 => 1,
                3 => -5,
                5 => 5,
                7 => -1,
                _ => unreachable!(),
            };
            int(if v.rem_euclid(2) == 1 { 2 * unit } else { unit })
        }
        Place::Finite(p) => {
            let (v, u) = split_valuation(a, p);
            let unit = if legendre_unit(&u, p) == 1 {
                1
            } else {
                least_nonresidue(p) as i64
            };
            int(if v.rem_euclid(2) == 1 {
                unit * p as i64
            } else {
                unit
            })
        }
    };
    Ok(SquareClass { place, rep })
}

/// The quadratic Hilbert symbol `(a, b)` at `place`.
pub fn hilbert(a: &Rational, b: &Rational, place: Place) -> Result<Sign> {
    if a.is_zero() || b.is_zero() {
        return domain("Hilbert symbol of zero");
    }
    let minus = match place {
        Place::Real => a.is_negative() && b.is_negative(),
        Place::Finite(2) => {
            let (al, u) = split_valuation(a, 2);
            let (be, v) = split_valuation(b, 2);
            let (u, v) = (unit_residue(&u, 8), unit_residue(&v, 8));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(v)
                + al.rem_euclid(2) as u64 * omega(v)
                + be.rem_euclid(2) as u64 * omega(u);
            e % 2 == 1
        }
        Place::Finite(p) => {
            let (al, u) = split_valuation(a, p);
            let (be, v) = split_valuation(b, p);
            let (al, be) = (al.rem_euclid(2), be.rem_euclid(2));
            let mut s = 1i8;
            if al * be == 1 && (p % 4 == 3) {
                s = -s;
            }
            if be == 1 {
                s *= legendre_unit(&u, p);
            }
            if al == 1 {
                s *= legendre_unit(&v, p);
            }
            s == -1
        }
    };
    Ok(Sign::from_bool_minus(minus))
}

/// Hilbert symbol of two square classes at the same place.
pub fn hilbert_classes(a: &SquareClass, b: &SquareClass) -> Sign {
    assert_eq!(a.place, b.place);
    hilbert(&a.rep, &b.rep, a.place).expect("classes are nonzero")
}

/// `(−1, −1)` at `place`.
pub fn hilbert_minus_one(place: Place) -> Sign {
    hilbert(&int(-1), &int(-1), place).expect("nonzero")
}

/// The character `ψ_c(x) = ψ(cx)` of `Q_p`, where `ψ` is the standard
/// level-zero character `x ↦ exp(2πi{x}_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveCharacter {
    p: u64,
    shift: Rational,
}

impl AdditiveCharacter {
    pub fn new(place: Place, shift: Rational) -> Result<Self> {
        let Place::Finite(p) = place else {
            return domain("additive characters are only provided at finite places");
        };
        if shift.is_zero() {
            return domain("ψ_0 is the trivial character");
        }
        Ok(Self { p, shift })
    }

    pub fn standard(place: Place) -> Result<Self> {
        Self::new(place, Rational::one())
    }

    pub fn place(&self) -> Place {
        Place::Finite(self.p)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    /// `ψ_c ↦ ψ_{ca}`.
    pub fn shifted(&self, a: &Rational) -> Self {
        Self {
            p: self.p,
            shift: &self.shift * a,
        }
    }
}

/// Unnormalized Weil index `γ(ψ_a)` of `x ↦ ψ(a x²)`, in closed form.
pub fn weil_index(a: &Rational, psi: &AdditiveCharacter) -> Result<Mu8> {
    if a.is_zero() {
        return domain("Weil index of the zero form");
    }
    let b = &psi.shift * a;
    let p = psi.p;
    let (v, u) = split_valuation(&b, p);
    let odd = v.rem_euclid(2) == 1;
    let e = if p == 2 {
        let r = unit_residue(&u, 8) as i64;
        match (odd, r % 4) {
            (false, 1) => 1,
            (false, _) => 7,
            (true, _) => r,
        }
    } else if !odd {
        0
    } else {
        let quartic = if p % 4 == 1 { 0 } else { 2 };
        let leg = if legendre_unit(&u, p) == 1 { 0 } else { 4 };
        quartic + leg
    };
    Ok(Mu8::new(e))
}

/// `γ(a, ψ) = γ(ψ_a)/γ(ψ)`, a fourth root of unity.
pub fn normalized_weil_index(a: &Rational, psi: &AdditiveCharacter) -> Result<Mu8> {
    Ok(weil_index(a, psi)? / weil_index(&Rational::one(), psi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(v: u64) -> Place {
        Place::Finite(v)
    }

    /// Solvability of z² = a x² + b y² modulo 2^k, primitive solutions that
    /// lift by Hensel: enough for small-valuation integers at p = 2.
    fn hilbert2_search(a: i64, b: i64) -> Sign {
        let m = 1i64 << 6;
        for x in 0..64 {
            for y in 0..64 {
                for z in 0..64 {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return Sign::Plus;
                    }
                }
            }
        }
        Sign::Minus
    }

    #[test]
    fn square_class_examples() {
        assert!(square_class(&int(4), p(3)).unwrap().is_trivial());
        assert_eq!(square_class(&int(18), p(3)).unwrap().representative(), &int(2));
        assert_eq!(square_class(&int(-1), Place::Real).unwrap().representative(), &int(-1));
        assert_eq!(square_class(&int(7), p(2)).unwrap().representative(), &int(-1));
        assert_eq!(square_class(&frac(3, 8), p(2)).unwrap().representative(), &int(-10));
        assert!(square_class(&int(0), p(5)).is_err());
    }

    #[test]
    fn hilbert_examples() {
        for place in [p(2), p(3), p(5), Place::Real] {
            assert_eq!(hilbert(&int(1), &int(-7), place).unwrap(), Sign::Plus);
        }
        assert_eq!(hilbert(&int(-1), &int(-1), p(2)).unwrap(), Sign::Minus);
        assert_eq!(hilbert(&int(-1), &int(-1), p(5)).unwrap(), Sign::Plus);
        assert_eq!(hilbert(&int(-1), &int(-1), p(3)).unwrap(), Sign::Plus);
        assert_eq!(hilbert(&int(-1), &int(-1), Place::Real).unwrap(), Sign::Minus);
        assert!(hilbert(&int(0), &int(1), p(3)).is_err());
    }

    #[test]
    fn hilbert_at_two_matches_search() {
        let reps = [1, -1, 2, -2, 5, -5, 10, -10];
        for a in reps {
            for b in reps {
                assert_eq!(
                    hilbert(&int(a), &int(b), p(2)).unwrap(),
                    hilbert2_search(a, b),
                    "({a},{b})_2"
                );
            }
        }
    }

    #[test]
    fn weil_index_closed_form_matches_oracle() {
        for q in [2, 3, 5, 7] {
            let psi = AdditiveCharacter::standard(p(q)).unwrap();
            for cls in SquareClass::all(p(q)) {
                let a = cls.representative();
                let oracle = weil_index_oracle(a, &psi).unwrap();
                assert_eq!(weil_index(a, &psi).unwrap(), oracle.value, "p={q} a={a}");
                assert!(oracle.residual < 1e-6);
            }
        }
    }

    #[test]
    fn weil_index_hyperbolic_and_normalized() {
        for q in [2, 3, 5] {
            let psi = AdditiveCharacter::standard(p(q)).unwrap();
            assert_eq!(normalized_weil_index(&int(1), &psi).unwrap(), Mu8::ONE);
            assert_eq!(normalized_weil_index(&int(9), &psi).unwrap(), Mu8::ONE);
            for cls in SquareClass::all(p(q)) {
                let a = cls.representative();
                let g = weil_index(a, &psi).unwrap() * weil_index(&-a, &psi).unwrap();
                assert_eq!(g, Mu8::ONE);
                assert_eq!(normalized_weil_index(a, &psi).unwrap().pow(4), Mu8::ONE);
            }
        }
    }

    #[test]
    fn mu8_arithmetic() {
        assert_eq!(Mu8::new(5) * Mu8::new(6), Mu8::new(3));
        assert_eq!(Mu8::new(3) / Mu8::new(5), Mu8::new(6));
        assert_eq!(Mu8::from(Sign::Minus), Mu8::new(4));
        assert_eq!(Mu8::new(-1).exponent(), 7);
    }
}
