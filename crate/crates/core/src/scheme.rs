//! Fat point schemes: finite sets of points with multiplicities, their
//! degrees, colon-by-line reduction, reduction vectors, and the closed-form
//! Hilbert function of a strictly decreasing full reduction vector.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::geometry::{ProjLine, ProjPoint};
use crate::hf::{binomial, HilbertFunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeError {
    /// Two scheme points share the same support.
    DuplicateSupport(String),
    /// Multiplicities must be at least 1.
    ZeroMultiplicity,
    /// The closed form needs a strictly decreasing reduction vector.
    NotStrictlyDecreasing,
    /// The closed form needs a full reduction (the line sequence must empty
    /// the scheme).
    NotFullReduction,
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::DuplicateSupport(p) => write!(f, "duplicate support point {p}"),
            SchemeError::ZeroMultiplicity => write!(f, "multiplicities must be positive"),
            SchemeError::NotStrictlyDecreasing => {
                write!(f, "reduction vector is not strictly decreasing")
            }
            SchemeError::NotFullReduction => {
                write!(f, "reduction vector is not full (lines do not empty the scheme)")
            }
        }
    }
}

impl std::error::Error for SchemeError {}

/// A scheme `m_1 P_1 + ... + m_s P_s` of points with multiplicities, the
/// supports pairwise distinct. The empty scheme is allowed. Points keep
/// insertion order; equality is order-insensitive.
#[derive(Clone, Debug)]
pub struct FatPointScheme {
    points: Vec<(ProjPoint, usize)>,
}

impl FatPointScheme {
    pub fn new(points: Vec<(ProjPoint, usize)>) -> Result<Self, SchemeError> {
        let mut scheme = FatPointScheme::empty();
        for (p, m) in points {
            scheme.push(p, m)?;
        }
        Ok(scheme)
    }

    pub fn empty() -> Self {
        FatPointScheme { points: Vec::new() }
    }

    fn push(&mut self, p: ProjPoint, m: usize) -> Result<(), SchemeError> {
        if m == 0 {
            return Err(SchemeError::ZeroMultiplicity);
        }
        if self.points.iter().any(|(q, _)| *q == p) {
            return Err(SchemeError::DuplicateSupport(p.to_string()));
        }
        self.points.push((p, m));
        Ok(())
    }

    /// A copy of the scheme with one more point appended.
    pub fn with_point(&self, p: ProjPoint, m: usize) -> Result<Self, SchemeError> {
        let mut copy = self.clone();
        copy.push(p, m)?;
        Ok(copy)
    }

    pub fn points(&self) -> &[(ProjPoint, usize)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of support points.
    pub fn support_size(&self) -> usize {
        self.points.len()
    }

    pub fn multiplicity_of(&self, p: &ProjPoint) -> Option<usize> {
        self.points.iter().find(|(q, _)| q == p).map(|&(_, m)| m)
    }

    /// Sum of the multiplicities.
    pub fn multiplicity_sum(&self) -> usize {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    /// Degree of the scheme: a point of multiplicity `m` in the plane
    /// contributes `C(m + 1, 2)` (a reduced point 1, a double point 3).
    pub fn degree(&self) -> usize {
        self.points.iter().map(|&(_, m)| binomial(m + 1, 2)).sum()
    }

    /// Sum of the multiplicities of the points lying on `l`: the degree of
    /// the scheme-theoretic intersection with the line.
    pub fn line_intersection_degree(&self, l: &ProjLine) -> usize {
        self.points
            .iter()
            .filter(|(p, _)| l.contains(p))
            .map(|&(_, m)| m)
            .sum()
    }

    /// The colon scheme `Z : l`: every point on `l` has its multiplicity
    /// reduced by one (dropped entirely at zero); points off `l` are
    /// untouched.
    pub fn colon_by_line(&self, l: &ProjLine) -> FatPointScheme {
        let points = self
            .points
            .iter()
            .filter_map(|(p, m)| {
                let m = if l.contains(p) { m - 1 } else { *m };
                (m > 0).then(|| (p.clone(), m))
            })
            .collect();
        FatPointScheme { points }
    }

    /// Colons the scheme by each line in order, recording the intersection
    /// degree seen by each line; `full` reports whether the sequence empties
    /// the scheme.
    pub fn reduction_vector(&self, lines: &[ProjLine]) -> ReductionVector {
        let mut current = self.clone();
        let mut entries = Vec::with_capacity(lines.len());
        for l in lines {
            entries.push(current.line_intersection_degree(l));
            current = current.colon_by_line(l);
        }
        ReductionVector { entries, full: current.is_empty() }
    }

    /// True iff coloning by the whole sequence empties the scheme;
    /// equivalently, each point of multiplicity `m` lies on at least `m`
    /// lines of the sequence (counted with repetition).
    pub fn totally_reduces(&self, lines: &[ProjLine]) -> bool {
        let by_colon = self.reduction_vector(lines).full;
        let by_count = self
            .points
            .iter()
            .all(|(p, m)| lines.iter().filter(|l| l.contains(p)).count() >= *m);
        debug_assert_eq!(by_colon, by_count);
        by_colon
    }
}

impl PartialEq for FatPointScheme {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.points.clone();
        let mut b = other.points.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for FatPointScheme {}

impl fmt::Display for FatPointScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "(empty scheme)");
        }
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|(p, m)| if *m == 1 { p.to_string() } else { format!("{m}{p}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct SchemePointRepr {
    coords: ProjPoint,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct SchemeRepr {
    points: Vec<SchemePointRepr>,
}

impl Serialize for FatPointScheme {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = SchemeRepr {
            points: self
                .points
                .iter()
                .map(|(p, m)| SchemePointRepr { coords: p.clone(), mult: *m })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FatPointScheme {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SchemeRepr::deserialize(deserializer)?;
        let points = repr.points.into_iter().map(|p| (p.coords, p.mult)).collect();
        FatPointScheme::new(points).map_err(D::Error::custom)
    }
}

/// The integer vector recorded while coloning a scheme through a line
/// sequence, plus whether the sequence totally reduces the scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionVector {
    pub entries: Vec<usize>,
    pub full: bool,
}

impl ReductionVector {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] > w[1])
    }

    /// Total degree removed; equals the scheme degree for a full reduction.
    pub fn sum(&self) -> usize {
        self.entries.iter().sum()
    }

    /// Closed-form Hilbert function of a scheme with this reduction vector:
    /// for a full, strictly decreasing vector `(d_1, ..., d_n)`,
    ///
    /// `H(t) = sum_i max(0, min(t - i + 1, d_{i+1}))` for `i = 0..n`,
    ///
    /// constant at `sum d_i` from degree `d_1 - 1` on.
    pub fn hilbert_function(&self) -> Result<HilbertFunction, SchemeError> {
        if !self.full {
            return Err(SchemeError::NotFullReduction);
        }
        if !self.is_strictly_decreasing() {
            return Err(SchemeError::NotStrictlyDecreasing);
        }
        let total = self.sum();
        if total == 0 {
            return Ok(HilbertFunction::new(vec![0], 0));
        }
        let top = self.entries[0]; // entries are strictly decreasing, so this is max
        let values: Vec<usize> = (0..top)
            .map(|t| {
                self.entries
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| {
                        let avail = t as i64 - i as i64 + 1;
                        avail.clamp(0, d as i64) as usize
                    })
                    .sum()
            })
            .collect();
        debug_assert_eq!(values.last().copied(), Some(total));
        Ok(HilbertFunction::new(values, total))
    }
}

impl fmt::Display for ReductionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|d| d.to_string()).collect();
        write!(f, "({}){}", parts.join(","), if self.full { " full" } else { "" })
    }
}
