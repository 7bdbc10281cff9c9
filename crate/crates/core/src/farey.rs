//! The Farey tessellation as a graph on extended rationals, and the dividing
//! slope produced by attaching a bypass to a convex torus with two dividing
//! curves.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::slope::{intersection_number, Slope, UnimodularMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    #[error("{0} and {1} are not joined by a Farey edge")]
    NotAnEdge(Slope, Slope),
    #[error("arc endpoints coincide at {0}")]
    DegenerateArc(Slope),
    #[error("ruling slope equals dividing slope {0}")]
    RulingEqualsDividing(Slope),
    #[error("no Farey neighbour of {s} in the arc with entries bounded by {bound}")]
    EmptyCandidates { s: Slope, bound: u64 },
    #[error("slope {0} is too large for the brute-force oracle")]
    OracleOutOfRange(Slope),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttachmentSide {
    Front,
    Back,
}

impl std::str::FromStr for AttachmentSide {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "front" => Ok(AttachmentSide::Front),
            "back" => Ok(AttachmentSide::Back),
            other => Err(format!("side must be `front` or `back`, got {other:?}")),
        }
    }
}

/// Closed arc of the boundary circle running counterclockwise from `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyArc {
    from: Slope,
    to: Slope,
}

impl FareyArc {
    pub fn new(from: Slope, to: Slope) -> Result<Self, FareyError> {
        if from == to {
            return Err(FareyError::DegenerateArc(from));
        }
        Ok(FareyArc { from, to })
    }

    pub fn from(&self) -> &Slope {
        &self.from
    }

    pub fn to(&self) -> &Slope {
        &self.to
    }

    pub fn contains(&self, x: &Slope) -> bool {
        use std::cmp::Ordering::*;
        let after_start = self.from.circle_cmp(x) != Greater;
        let before_end = x.circle_cmp(&self.to) != Greater;
        match self.from.circle_cmp(&self.to) {
            Less => after_start && before_end,
            _ => after_start || before_end,
        }
    }
}

pub fn arc_contains(arc: &FareyArc, x: &Slope) -> bool {
    arc.contains(x)
}

pub fn is_edge(a: &Slope, b: &Slope) -> bool {
    intersection_number(a, b).is_one()
}

/// The common neighbour of the edge `a`–`b` lying in the counterclockwise arc
/// from `a` to `b`.
///
/// With the single stored form of `∞`, the order of arguments selects the
/// half-plane: `mediant(0, ∞) = 1` while `mediant(∞, 0) = −1`.
pub fn mediant(a: &Slope, b: &Slope) -> Result<Slope, FareyError> {
    if !is_edge(a, b) {
        return Err(FareyError::NotAnEdge(a.clone(), b.clone()));
    }
    let arc = FareyArc::new(a.clone(), b.clone())?;
    let sum = Slope::new(
        a.numerator() + b.numerator(),
        a.denominator() + b.denominator(),
    )
    .expect("edge endpoints are distinct");
    if arc.contains(&sum) {
        return Ok(sum);
    }
    Ok(Slope::new(
        a.numerator() - b.numerator(),
        a.denominator() - b.denominator(),
    )
    .expect("edge endpoints are distinct"))
}

/// Dividing slope after a bypass is attached along a ruling curve of slope `r`
/// to a torus with dividing slope `s`.
///
/// The result is the Farey neighbour of `s` nearest to `r` inside the arc
/// `[r, s]` (front) or `[s, r]` (back). After a map sending `s` to `∞` the
/// neighbours of `s` become the integers, so the answer is the ceiling (front)
/// or floor (back) of the image of `r`.
pub fn bypass_slope(s: &Slope, r: &Slope, side: AttachmentSide) -> Result<Slope, FareyError> {
    if s == r {
        return Err(FareyError::RulingEqualsDividing(s.clone()));
    }
    let m = UnimodularMap::sending_to_infinity(s);
    let image = m.apply(r);
    let (n, d) = (image.numerator(), image.denominator());
    let k = match side {
        AttachmentSide::Front => n.div_ceil(d),
        AttachmentSide::Back => n.div_floor(d),
    };
    Ok(m.inverse().apply(&Slope::integer(k)))
}

/// Brute-force reference for [`bypass_slope`]: enumerates every slope with
/// `|numerator|, denominator <= denom_bound`, keeps the Farey neighbours of `s`
/// inside the arc and returns the one met first when walking away from `r`.
pub fn bypass_slope_oracle(
    s: &Slope,
    r: &Slope,
    side: AttachmentSide,
    denom_bound: u64,
) -> Result<Slope, FareyError> {
    if s == r {
        return Err(FareyError::RulingEqualsDividing(s.clone()));
    }
    let small = |x: &Slope| -> Result<Frac, FareyError> {
        match (x.numerator().to_i64(), x.denominator().to_i64()) {
            (Some(n), Some(d)) => Ok((n as i128, d as i128)),
            _ => Err(FareyError::OracleOutOfRange(x.clone())),
        }
    };
    let (sf, rf) = (small(s)?, small(r)?);
    let empty = || FareyError::EmptyCandidates {
        s: s.clone(),
        bound: denom_bound,
    };
    if denom_bound == 0 {
        return Err(empty());
    }
    let bound = denom_bound as i128;
    let (lo, hi) = match side {
        AttachmentSide::Front => (rf, sf),
        AttachmentSide::Back => (sf, rf),
    };

    let mut best: Option<Frac> = None;
    let candidates = std::iter::once((1, 0))
        .chain((1..=bound).flat_map(|d| (-bound..=bound).map(move |n| (n, d))));
    for x in candidates {
        // |det| = 1 already forces the candidate to be reduced
        if (x.0 * sf.1 - x.1 * sf.0).abs() != 1 || !oracle::ccw_between(lo, x, hi) {
            continue;
        }
        let closer = match best {
            None => true,
            Some(b) => match side {
                AttachmentSide::Front => oracle::ccw_between(rf, x, b) && x != b,
                AttachmentSide::Back => oracle::ccw_between(b, x, rf) && x != b,
            },
        };
        if closer {
            best = Some(x);
        }
    }
    let (n, d) = best.ok_or_else(empty)?;
    Ok(Slope::new(n, d).expect("candidate is never 0/0"))
}

type Frac = (i128, i128);

mod oracle {
    use super::Frac;
    use std::cmp::Ordering;

    // Position on the circle: nonnegative reals, then ∞, then negatives.
    fn cmp(a: Frac, b: Frac) -> Ordering {
        let half = |x: Frac| match (x.1 == 0, x.0 < 0) {
            (true, _) => 1,
            (false, true) => 2,
            (false, false) => 0,
        };
        match half(a).cmp(&half(b)) {
            Ordering::Equal if a.1 == 0 => Ordering::Equal,
            Ordering::Equal => (a.0 * b.1).cmp(&(b.0 * a.1)),
            o => o,
        }
    }

    /// `x` lies on the closed counterclockwise arc from `a` to `b`.
    pub(super) fn ccw_between(a: Frac, x: Frac, b: Frac) -> bool {
        let ax = cmp(a, x) != Ordering::Greater;
        let xb = cmp(x, b) != Ordering::Greater;
        match cmp(a, b) {
            Ordering::Less => ax && xb,
            Ordering::Equal => cmp(a, x) == Ordering::Equal,
            Ordering::Greater => ax || xb,
        }
    }
}

/// A shortest edge path in the Farey graph from `a` to `b`.
///
/// `a` is moved to `∞`; every geodesic from `∞` to `x` then stays among the
/// convergents and intermediate fractions of the continued fraction of `x`.
/// Inside a fan only the two intermediates next to its ends can shorten a
/// path, so longer fans are cut down to those.
pub fn edge_path(a: &Slope, b: &Slope) -> Vec<Slope> {
    if a == b {
        return vec![a.clone()];
    }
    let m = UnimodularMap::sending_to_infinity(a);
    let x = m.apply(b);

    let terms = continued_fraction(x.numerator(), x.denominator());
    let mut graph = Ladder::default();
    let inf = graph.vertex(Slope::infinity());

    // convergents c_{-1} = ∞, c_0, c_1, ...
    let mut convergents: Vec<(BigInt, BigInt)> = vec![(BigInt::one(), BigInt::zero())];
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    for t in &terms {
        let np = t * &p + &p_prev;
        let nq = t * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
        convergents.push((p.clone(), q.clone()));
    }
    let ids: Vec<usize> = convergents
        .iter()
        .map(|(n, d)| graph.vertex(Slope::new(n.clone(), d.clone()).unwrap()))
        .collect();
    for w in ids.windows(2) {
        graph.edge(w[0], w[1]);
    }

    // fan around c_k (k >= 0) runs from c_{k-1} to c_{k+1} = c_{k-1} + a_{k+1}·c_k
    for k in 1..convergents.len().saturating_sub(1) {
        let pivot = ids[k];
        let (pn, pd) = &convergents[k];
        let (bn, bd) = &convergents[k - 1];
        let span = &terms[k];
        let mut kept: Vec<BigInt> = vec![BigInt::zero(), BigInt::one(), span - 1u32, span.clone()];
        kept.sort();
        kept.dedup();
        let fan: Vec<(BigInt, usize)> = kept
            .into_iter()
            .map(|j| {
                let v = Slope::new(bn + &j * pn, bd + &j * pd).unwrap();
                let id = graph.vertex(v);
                (j, id)
            })
            .collect();
        for (i, (j, id)) in fan.iter().enumerate() {
            graph.edge(pivot, *id);
            if let Some((j2, id2)) = fan.get(i + 1) {
                if j2 - j == BigInt::one() {
                    graph.edge(*id, *id2);
                }
            }
        }
    }

    let target = graph.vertex(x);
    let back = m.inverse();
    graph
        .shortest(inf, target)
        .into_iter()
        .map(|v| back.apply(&v))
        .collect()
}

/// Regular continued fraction `[a0; a1, ..., an]` of a finite rational, `an >= 2` unless `n = 0`.
fn continued_fraction(num: &BigInt, den: &BigInt) -> Vec<BigInt> {
    let (mut n, mut d) = (num.clone(), den.clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let (t, rem) = n.div_mod_floor(&d);
        out.push(t);
        n = std::mem::replace(&mut d, rem);
    }
    out
}

#[derive(Default)]
struct Ladder {
    vertices: Vec<Slope>,
    index: HashMap<Slope, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl Ladder {
    fn vertex(&mut self, s: Slope) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.vertices.len();
        self.index.insert(s.clone(), i);
        self.vertices.push(s);
        self.adjacency.push(Vec::new());
        i
    }

    fn edge(&mut self, u: usize, v: usize) {
        if u != v && !self.adjacency[u].contains(&v) {
            debug_assert!(is_edge(&self.vertices[u], &self.vertices[v]));
            self.adjacency[u].push(v);
            self.adjacency[v].push(u);
        }
    }

    fn shortest(&self, from: usize, to: usize) -> Vec<Slope> {
        let mut prev = vec![usize::MAX; self.vertices.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &self.adjacency[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path.into_iter().map(|i| self.vertices[i].clone()).collect()
    }
}
