//! Points of the lattice N x N, the componentwise partial order, the two
//! monomial orders, successor enumeration, staircase Delta-sets with their
//! defining points, and the hyperbolic index sets B_delta.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A point of Sigma_0 = N x N. The derived `Ord` is structural (n1, then n2)
/// and is used only as a map key; order semantics live in `MonomialOrder`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct LatticePoint {
    pub n1: u32,
    pub n2: u32,
}

pub fn point(n1: u32, n2: u32) -> LatticePoint {
    LatticePoint { n1, n2 }
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { n1: 0, n2: 0 };

    /// Componentwise partial order n <= m.
    pub fn leq_partial(self, m: LatticePoint) -> bool {
        self.n1 <= m.n1 && self.n2 <= m.n2
    }

    pub fn add(self, m: LatticePoint) -> LatticePoint {
        point(self.n1 + m.n1, self.n2 + m.n2)
    }

    /// Componentwise difference; requires m ⪯ self.
    pub fn sub(self, m: LatticePoint) -> LatticePoint {
        debug_assert!(m.leq_partial(self));
        point(self.n1 - m.n1, self.n2 - m.n2)
    }

    pub fn reduce_mod(self, bounds: (u32, u32)) -> LatticePoint {
        point(self.n1 % bounds.0, self.n2 % bounds.1)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(u32),
    #[error("defining points must satisfy the staircase shape: {0}")]
    BadDefiningPoints(String),
    #[error("point set is not downward closed (not a footprint)")]
    NotDownwardClosed,
}

/// The two total orders on Sigma_0 used by the algorithm.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Lexicographic with X1 > X2: compare n1, then n2.
    Lex,
    /// Graded with X2 > X1: compare n1 + n2, ties to the larger n2.
    Graded,
}

impl MonomialOrder {
    pub fn compare(self, a: LatticePoint, b: LatticePoint) -> Ordering {
        match self {
            MonomialOrder::Lex => a.n1.cmp(&b.n1).then(a.n2.cmp(&b.n2)),
            MonomialOrder::Graded => (a.n1 as u64 + a.n2 as u64)
                .cmp(&(b.n1 as u64 + b.n2 as u64))
                .then(a.n2.cmp(&b.n2)),
        }
    }

    pub fn lt(self, a: LatticePoint, b: LatticePoint) -> bool {
        self.compare(a, b) == Ordering::Less
    }

    pub fn leq(self, a: LatticePoint, b: LatticePoint) -> bool {
        self.compare(a, b) != Ordering::Greater
    }

    /// The next recursion point after n. The graded successor is intrinsic;
    /// the lex one walks the fundamental rectangle row by row, so it needs r2
    /// and n must lie inside the rectangle.
    pub fn successor(self, n: LatticePoint, bounds: (u32, u32)) -> LatticePoint {
        match self {
            MonomialOrder::Lex => {
                assert!(
                    n.n1 < bounds.0 && n.n2 < bounds.1,
                    "lex successor of {n} outside the {}x{} rectangle",
                    bounds.0,
                    bounds.1
                );
                if n.n2 < bounds.1 - 1 {
                    point(n.n1, n.n2 + 1)
                } else {
                    point(n.n1 + 1, 0)
                }
            }
            MonomialOrder::Graded => {
                if n.n1 > 0 {
                    point(n.n1 - 1, n.n2 + 1)
                } else {
                    point(n.n2 + 1, 0)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Graded => "graded",
        }
    }

    pub fn other(self) -> MonomialOrder {
        match self {
            MonomialOrder::Lex => MonomialOrder::Graded,
            MonomialOrder::Graded => MonomialOrder::Lex,
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "graded" => Ok(MonomialOrder::Graded),
            other => Err(format!("unknown order {other:?}, expected lex or graded")),
        }
    }
}

/// A staircase region of N x N stored by its defining points s^(1)..s^(d):
/// first coordinates strictly decreasing to 0, second strictly increasing
/// from 0. The region itself is the union over i < d of the rectangles
/// [0, s1^(i) - 1] x [0, s2^(i+1) - 1]. With d = 1 the region is empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DeltaSet {
    defining_points: Vec<LatticePoint>,
}

impl DeltaSet {
    pub fn new(defining_points: Vec<LatticePoint>) -> Result<DeltaSet, LatticeError> {
        let pts = &defining_points;
        let shape_ok = !pts.is_empty()
            && pts.windows(2).all(|w| w[0].n1 > w[1].n1 && w[0].n2 < w[1].n2)
            && pts.last().unwrap().n1 == 0
            && pts[0].n2 == 0;
        if !shape_ok {
            let listed = pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
            return Err(LatticeError::BadDefiningPoints(listed));
        }
        Ok(DeltaSet { defining_points })
    }

    /// The d = 1 staircase: defining point (0,0), empty region.
    pub fn empty() -> DeltaSet {
        DeltaSet {
            defining_points: vec![LatticePoint::ORIGIN],
        }
    }

    pub fn defining_points(&self) -> &[LatticePoint] {
        &self.defining_points
    }

    pub fn contains(&self, m: LatticePoint) -> bool {
        self.defining_points
            .windows(2)
            .any(|w| m.n1 < w[0].n1 && m.n2 < w[1].n2)
    }

    pub fn size(&self) -> u64 {
        self.defining_points
            .windows(2)
            .map(|w| (w[0].n1 - w[1].n1) as u64 * w[1].n2 as u64)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.defining_points.len() == 1
    }

    /// The maximal points of the region, one per consecutive pair of
    /// defining points: (s1^(i) - 1, s2^(i+1) - 1).
    pub fn interior_corners(&self) -> Vec<LatticePoint> {
        self.defining_points
            .windows(2)
            .map(|w| point(w[0].n1 - 1, w[1].n2 - 1))
            .collect()
    }

    /// All points of the region, sorted by the structural point order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for w in self.defining_points.windows(2) {
            for n1 in w[1].n1..w[0].n1 {
                for n2 in 0..w[1].n2 {
                    out.push(point(n1, n2));
                }
            }
        }
        out.sort();
        out
    }

    /// Rebuilds a staircase from any set of points whose downward closures
    /// are to be unioned. Dominated corners are discarded first.
    pub fn from_interior_corners(corners: impl IntoIterator<Item = LatticePoint>) -> DeltaSet {
        let all: Vec<LatticePoint> = corners.into_iter().collect();
        let mut maximal: Vec<LatticePoint> = all
            .iter()
            .copied()
            .filter(|&c| !all.iter().any(|&o| c != o && c.leq_partial(o)))
            .collect();
        maximal.sort();
        maximal.dedup();
        maximal.sort_by(|a, b| b.n1.cmp(&a.n1));
        if maximal.is_empty() {
            return DeltaSet::empty();
        }
        let mut pts = Vec::with_capacity(maximal.len() + 1);
        pts.push(point(maximal[0].n1 + 1, 0));
        for w in maximal.windows(2) {
            pts.push(point(w[1].n1 + 1, w[0].n2 + 1));
        }
        pts.push(point(0, maximal.last().unwrap().n2 + 1));
        DeltaSet { defining_points: pts }
    }

    /// Reconstructs a staircase from an explicit point set, which must be
    /// downward closed.
    pub fn from_point_set(pts: &[LatticePoint]) -> Result<DeltaSet, LatticeError> {
        let corners: Vec<LatticePoint> = pts
            .iter()
            .copied()
            .filter(|&c| !pts.iter().any(|&o| c != o && c.leq_partial(o)))
            .collect();
        let d = DeltaSet::from_interior_corners(corners);
        let mut sorted: Vec<LatticePoint> = pts.to_vec();
        sorted.sort();
        sorted.dedup();
        if d.size() as usize != sorted.len() {
            return Err(LatticeError::NotDownwardClosed);
        }
        Ok(d)
    }
}

impl fmt::Display for DeltaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let listed = self
            .defining_points
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "[{listed}]")
    }
}

/// The index set B_delta = {(i,j) : (i+1)(j+1) <= delta} minus its two axis
/// endpoints (delta-1, 0) and (0, delta-1), sorted by the given order.
pub fn b_delta(delta: u32, order: MonomialOrder) -> Result<Vec<LatticePoint>, LatticeError> {
    if delta < 2 {
        return Err(LatticeError::DeltaTooSmall(delta));
    }
    let mut out = Vec::new();
    for i in 0..delta {
        for j in 0..delta {
            if (i + 1) * (j + 1) <= delta && (i, j) != (delta - 1, 0) && (i, j) != (0, delta - 1) {
                out.push(point(i, j));
            }
        }
    }
    out.sort_by(|&a, &b| order.compare(a, b));
    Ok(out)
}
