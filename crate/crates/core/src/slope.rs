//! Extended-rational slopes on the boundary torus of a knot neighbourhood.
//!
//! Coordinates: the meridian has slope `0/1`, the longitude has slope `1/0`
//! (written `∞`). A curve winding `m` times meridionally and `l` times
//! longitudinally has slope `l/m`, so the dividing curves of a standard
//! neighbourhood of a Legendrian with Thurston–Bennequin number `tb` have
//! slope `1/tb`, and the `(p, q)`-cable curve has slope `q/p`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("0/0 is not a slope")]
    ZeroOverZero,
    #[error("tb = 0 has no standard-neighbourhood dividing slope")]
    ZeroTwisting,
    #[error("cable ({p},{q}): longitudinal winding must be at least 2")]
    QTooSmall { p: BigInt, q: BigInt },
    #[error("cable ({p},{q}): windings are not coprime")]
    NotCoprime { p: BigInt, q: BigInt },
    #[error("matrix ({a} {b}; {c} {d}) has determinant {det}, expected ±1")]
    NotUnimodular {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
        det: BigInt,
    },
    #[error("cannot parse {0:?} as a slope")]
    Parse(String),
}

/// A reduced extended rational `numerator/denominator` with `denominator >= 0`.
///
/// `∞` is stored as `1/0`; there is no signed infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    num: BigInt,
    den: BigInt,
}

impl Slope {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, SlopeError> {
        let (mut num, mut den) = (num.into(), den.into());
        if num.is_zero() && den.is_zero() {
            return Err(SlopeError::ZeroOverZero);
        }
        if den.is_zero() {
            return Ok(Self::infinity());
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(Slope { num, den })
    }

    pub fn infinity() -> Self {
        Slope {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Slope {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Slope {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// Compares two slopes by position on the Farey circle, reading
    /// counterclockwise from `0`: `0 → 1 → ∞ → −1 → 0`.
    ///
    /// This is the usual order of the real line with `∞` inserted between the
    /// positive and negative halves, starting at `0`.
    pub fn circle_cmp(&self, other: &Slope) -> Ordering {
        let (ha, hb) = (self.half(), other.half());
        ha.cmp(&hb).then_with(|| {
            if ha == 1 {
                Ordering::Equal
            } else {
                (&self.num * &other.den).cmp(&(&other.num * &self.den))
            }
        })
    }

    // 0: [0, ∞), 1: ∞, 2: (−∞, 0)
    fn half(&self) -> u8 {
        if self.den.is_zero() {
            1
        } else if self.num.is_negative() {
            2
        } else {
            0
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "infinity") {
            return Ok(Slope::infinity());
        }
        let bad = || SlopeError::Parse(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Slope::new(n, d)
            }
            None => Ok(Slope::integer(t.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Minimal geometric intersection `|n1·d2 − d1·n2|` of two curves on the torus.
pub fn intersection_number(a: &Slope, b: &Slope) -> BigInt {
    (&a.num * &b.den - &a.den * &b.num).abs()
}

/// Dividing slope `1/tb` of a standard neighbourhood.
pub fn tb_to_dividing_slope(tb: &BigInt) -> Result<Slope, SlopeError> {
    if tb.is_zero() {
        return Err(SlopeError::ZeroTwisting);
    }
    Slope::new(BigInt::one(), tb.clone())
}

/// Coprime windings of a cable: `p` meridional, `q >= 2` longitudinal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CableSpec {
    p: BigInt,
    q: BigInt,
}

impl CableSpec {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, SlopeError> {
        let (p, q) = (p.into(), q.into());
        if q < BigInt::from(2) {
            return Err(SlopeError::QTooSmall { p, q });
        }
        if !p.gcd(&q).is_one() {
            return Err(SlopeError::NotCoprime { p, q });
        }
        Ok(CableSpec { p, q })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn pq(&self) -> BigInt {
        &self.p * &self.q
    }

    /// The fraction `p/q` compared against the widths.
    pub fn ratio(&self) -> Slope {
        Slope {
            num: self.p.clone(),
            den: self.q.clone(),
        }
    }

    /// Slope `q/p` of the cable curve on the boundary of the companion's neighbourhood.
    pub fn cable_slope(&self) -> Slope {
        Slope::new(self.q.clone(), self.p.clone()).expect("q >= 2")
    }

    /// `p/q > n`
    pub fn ratio_exceeds(&self, n: &BigInt) -> bool {
        self.p > n * &self.q
    }

    /// `p/q < n`
    pub fn ratio_below(&self, n: &BigInt) -> bool {
        self.p < n * &self.q
    }
}

impl fmt::Display for CableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for CableSpec {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlopeError::Parse(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        CableSpec::new(p, q)
    }
}

/// Converts a twisting number measured against the torus framing into the
/// Seifert framing of the cable: `t' + pq`.
pub fn framing_shift(t_torus: &BigInt, spec: &CableSpec) -> BigInt {
    t_torus + spec.pq()
}

pub fn framing_unshift(t_seifert: &BigInt, spec: &CableSpec) -> BigInt {
    t_seifert - spec.pq()
}

/// Integer matrix `(a b; c d)` with determinant ±1 acting on slopes by
/// `n/d ↦ (a·n + b·d)/(c·n + d·d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl UnimodularMap {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, SlopeError> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.abs().is_one() {
            return Err(SlopeError::NotUnimodular { a, b, c, d, det });
        }
        Ok(UnimodularMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        UnimodularMap {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// An orientation-preserving map sending `s` to `∞`.
    pub fn sending_to_infinity(s: &Slope) -> Self {
        // x·n + y·d = 1, then (x y; −d n) has determinant 1 and kills the
        // bottom row at s.
        let e = s.num.extended_gcd(&s.den);
        let (mut x, mut y) = (e.x, e.y);
        if e.gcd.is_negative() {
            x = -x;
            y = -y;
        }
        UnimodularMap {
            a: x,
            b: y,
            c: -s.den.clone(),
            d: s.num.clone(),
        }
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Self {
        let det = self.determinant();
        // det = ±1, so dividing by det is multiplying by it.
        UnimodularMap {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    pub fn apply(&self, s: &Slope) -> Slope {
        let n = &self.a * &s.num + &self.b * &s.den;
        let d = &self.c * &s.num + &self.d * &s.den;
        Slope::new(n, d).expect("unimodular image is never 0/0")
    }
}

pub fn apply_unimodular(m: &UnimodularMap, s: &Slope) -> Slope {
    m.apply(s)
}
