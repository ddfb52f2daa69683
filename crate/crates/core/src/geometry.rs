//! Exact projective-plane primitives: rational points, lines, incidence,
//! intersection, and deterministic seeded generation of line arrangements in
//! general position.
//!
//! Every point and line is stored in canonical form (first nonzero coordinate
//! equal to 1), so structural equality is projective equality. Genericity is
//! never assumed: arrangements are certified by exact 3x3 determinants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rng::SplitMix64;

/// Exact rational scalar; always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Coordinate / coefficient magnitude for seeded generation. Kept small so
/// that intersection points (entries up to twice the square of this bound)
/// feed the exact rank computations with short integers; larger bounds make
/// the bignum elimination measurably slower without adding any genericity.
const COORD_BOUND: i64 = 12;

/// Range of the pencil parameter when sampling points on a line. Wider than
/// the coefficient bound so that a line always carries plenty of candidate
/// points, while the sampled coordinates stay the same size as intersection
/// points.
const PENCIL_SPAN: i64 = 40;

/// Resample budget per generation call before giving up. Genericity failures
/// at this coordinate range are vanishingly rare; the bound guarantees
/// termination.
const RETRY_BUDGET: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryError {
    /// A projective triple must have at least one nonzero entry.
    ZeroTriple,
    /// The two lines coincide, so they have no unique intersection.
    IdenticalLines,
    /// The two points coincide, so they span no unique line.
    IdenticalPoints,
    /// Seeded generation did not find an admissible sample within the retry
    /// budget.
    GenerationExhausted,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::ZeroTriple => write!(f, "projective triple is identically zero"),
            GeometryError::IdenticalLines => write!(f, "lines are identical"),
            GeometryError::IdenticalPoints => write!(f, "points are identical"),
            GeometryError::GenerationExhausted => {
                write!(f, "seeded generation exhausted its retry budget ({RETRY_BUDGET} resamples)")
            }
        }
    }
}

impl std::error::Error for GeometryError {}

fn canonicalize(mut triple: [Rational; 3]) -> Result<[Rational; 3], GeometryError> {
    let pivot = triple
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .ok_or(GeometryError::ZeroTriple)?;
    for c in triple.iter_mut() {
        *c /= pivot.clone();
    }
    Ok(triple)
}

fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_str(s: &str) -> Result<Rational, String> {
    let parse_int = |tok: &str| {
        tok.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {tok:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
    }
}

fn triple_to_strings(t: &[Rational; 3]) -> Vec<String> {
    t.iter().map(rational_to_string).collect()
}

fn triple_from_strings(v: &[String]) -> Result<[Rational; 3], String> {
    if v.len() != 3 {
        return Err(format!("expected 3 coordinates, got {}", v.len()));
    }
    Ok([
        rational_from_str(&v[0])?,
        rational_from_str(&v[1])?,
        rational_from_str(&v[2])?,
    ])
}

/// A point of the projective plane in canonical homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: [Rational; 3],
}

impl ProjPoint {
    pub fn new(coords: [Rational; 3]) -> Result<Self, GeometryError> {
        Ok(ProjPoint { coords: canonicalize(coords)? })
    }

    pub fn from_integers(x: i64, y: i64, z: i64) -> Result<Self, GeometryError> {
        ProjPoint::new([
            Rational::from_integer(x.into()),
            Rational::from_integer(y.into()),
            Rational::from_integer(z.into()),
        ])
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.coords
    }

    /// True exactly when the point satisfies the line's equation.
    pub fn on_line(&self, line: &ProjLine) -> bool {
        dot(&self.coords, &line.coeffs).is_zero()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{})",
            rational_to_string(&self.coords[0]),
            rational_to_string(&self.coords[1]),
            rational_to_string(&self.coords[2])
        )
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        triple_to_strings(&self.coords).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let triple = triple_from_strings(&strings).map_err(D::Error::custom)?;
        ProjPoint::new(triple).map_err(D::Error::custom)
    }
}

/// A line of the projective plane: the canonical coefficient triple of its
/// defining linear form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine {
    coeffs: [Rational; 3],
}

impl ProjLine {
    pub fn new(coeffs: [Rational; 3]) -> Result<Self, GeometryError> {
        Ok(ProjLine { coeffs: canonicalize(coeffs)? })
    }

    pub fn from_integers(a: i64, b: i64, c: i64) -> Result<Self, GeometryError> {
        ProjLine::new([
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
            Rational::from_integer(c.into()),
        ])
    }

    pub fn coeffs(&self) -> &[Rational; 3] {
        &self.coeffs
    }

    /// The unique line through two distinct points.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self, GeometryError> {
        let coeffs = cross(&p.coords, &q.coords);
        ProjLine::new(coeffs).map_err(|_| GeometryError::IdenticalPoints)
    }

    /// The unique intersection point of two distinct lines.
    pub fn intersect(&self, other: &ProjLine) -> Result<ProjPoint, GeometryError> {
        let coords = cross(&self.coeffs, &other.coeffs);
        ProjPoint::new(coords).map_err(|_| GeometryError::IdenticalLines)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.on_line(self)
    }

    /// Two projectively independent points on the line, usable as a basis for
    /// parametrizing it.
    fn basis_points(&self) -> (ProjPoint, ProjPoint) {
        let units: [[Rational; 3]; 3] = [
            [Rational::one(), Rational::zero(), Rational::zero()],
            [Rational::zero(), Rational::one(), Rational::zero()],
            [Rational::zero(), Rational::zero(), Rational::one()],
        ];
        let mut found: Vec<ProjPoint> = Vec::new();
        for unit in &units {
            if let Ok(p) = ProjPoint::new(cross(&self.coeffs, unit)) {
                if !found.contains(&p) {
                    found.push(p);
                    if found.len() == 2 {
                        break;
                    }
                }
            }
        }
        let mut it = found.into_iter();
        (
            it.next().expect("a line always contains a basis point"),
            it.next().expect("a line always contains two independent points"),
        )
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}:{}]",
            rational_to_string(&self.coeffs[0]),
            rational_to_string(&self.coeffs[1]),
            rational_to_string(&self.coeffs[2])
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LineRepr {
    coeffs: Vec<String>,
}

impl Serialize for ProjLine {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LineRepr { coeffs: triple_to_strings(&self.coeffs) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjLine {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = LineRepr::deserialize(deserializer)?;
        let triple = triple_from_strings(&repr.coeffs).map_err(D::Error::custom)?;
        ProjLine::new(triple).map_err(D::Error::custom)
    }
}

/// Determinant of the 3x3 matrix whose rows are the given triples.
fn det3(a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]) -> Rational {
    dot(a, &cross(b, c))
}

/// True iff the lines are pairwise distinct and no three are concurrent
/// (every triple of coefficient vectors has nonzero determinant).
pub fn is_general_position(lines: &[ProjLine]) -> bool {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i] == lines[j] {
                return false;
            }
            for k in j + 1..lines.len() {
                if det3(&lines[i].coeffs, &lines[j].coeffs, &lines[k].coeffs).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// An ordered sequence of pairwise distinct lines in general position,
/// together with the seed that generated it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    seed: u64,
    lines: Vec<ProjLine>,
}

impl Arrangement {
    /// Wraps an explicit line list, certifying general position.
    pub fn from_lines(lines: Vec<ProjLine>, seed: u64) -> Result<Self, GeometryError> {
        if !is_general_position(&lines) {
            return Err(GeometryError::GenerationExhausted);
        }
        Ok(Arrangement { seed, lines })
    }

    /// Draws `n` lines with small random integer coefficients, rejecting any
    /// candidate that would break general position. Deterministic in `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self, GeometryError> {
        assert!(n >= 1, "an arrangement needs at least one line");
        let mut rng = SplitMix64::new(seed);
        let mut lines: Vec<ProjLine> = Vec::with_capacity(n);
        let mut rejects = 0usize;
        while lines.len() < n {
            let a = rng.int_in(-COORD_BOUND, COORD_BOUND);
            let b = rng.int_in(-COORD_BOUND, COORD_BOUND);
            let c = rng.int_in(-COORD_BOUND, COORD_BOUND);
            let candidate = match ProjLine::from_integers(a, b, c) {
                Ok(l) => l,
                Err(_) => {
                    rejects += 1;
                    if rejects > RETRY_BUDGET {
                        return Err(GeometryError::GenerationExhausted);
                    }
                    continue;
                }
            };
            let clashes = lines.contains(&candidate)
                || pairs(&lines).any(|(a, b)| {
                    det3(&a.coeffs, &b.coeffs, &candidate.coeffs).is_zero()
                });
            if clashes {
                rejects += 1;
                if rejects > RETRY_BUDGET {
                    return Err(GeometryError::GenerationExhausted);
                }
                continue;
            }
            lines.push(candidate);
        }
        debug_assert!(is_general_position(&lines));
        Ok(Arrangement { seed, lines })
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// All pairwise intersection points, in lexicographic pair order.
    pub fn intersections(&self) -> Vec<ProjPoint> {
        let mut pts = Vec::new();
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let p = self.lines[i]
                    .intersect(&self.lines[j])
                    .expect("arrangement lines are pairwise distinct");
                pts.push(p);
            }
        }
        pts
    }
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(default)]
            seed: u64,
            lines: Vec<ProjLine>,
        }
        let repr = Repr::deserialize(deserializer)?;
        Arrangement::from_lines(repr.lines, repr.seed)
            .map_err(|_| D::Error::custom("lines are not in general position"))
    }
}

fn pairs<T>(items: &[T]) -> impl Iterator<Item = (&T, &T)> {
    items
        .iter()
        .enumerate()
        .flat_map(move |(i, a)| items[i + 1..].iter().map(move |b| (a, b)))
}

/// `count` distinct points on `l`, none in `forbidden`; deterministic in
/// `seed`. Samples points of the pencil `p0 + t * p1` for small integer `t`.
pub fn points_on_line_avoiding(
    l: &ProjLine,
    count: usize,
    forbidden: &[ProjPoint],
    seed: u64,
) -> Result<Vec<ProjPoint>, GeometryError> {
    let mut rng = SplitMix64::new(seed);
    let (p0, p1) = l.basis_points();
    let mut chosen: Vec<ProjPoint> = Vec::with_capacity(count);
    let mut rejects = 0usize;
    while chosen.len() < count {
        let t = Rational::from_integer(rng.int_in(-PENCIL_SPAN, PENCIL_SPAN).into());
        let coords = [
            &p0.coords[0] + &t * &p1.coords[0],
            &p0.coords[1] + &t * &p1.coords[1],
            &p0.coords[2] + &t * &p1.coords[2],
        ];
        let candidate =
            ProjPoint::new(coords).expect("pencil combination of independent points is nonzero");
        debug_assert!(l.contains(&candidate));
        if forbidden.contains(&candidate) || chosen.contains(&candidate) {
            rejects += 1;
            if rejects > RETRY_BUDGET {
                return Err(GeometryError::GenerationExhausted);
            }
            continue;
        }
        chosen.push(candidate);
    }
    Ok(chosen)
}

/// A random point lying on none of the given lines; deterministic in `seed`.
pub fn random_point_off_lines(
    lines: &[ProjLine],
    seed: u64,
) -> Result<ProjPoint, GeometryError> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..=RETRY_BUDGET {
        let x = rng.int_in(-COORD_BOUND, COORD_BOUND);
        let y = rng.int_in(-COORD_BOUND, COORD_BOUND);
        let z = rng.int_in(-COORD_BOUND, COORD_BOUND);
        let Ok(candidate) = ProjPoint::from_integers(x, y, z) else {
            continue;
        };
        if lines.iter().all(|l| !l.contains(&candidate)) {
            return Ok(candidate);
        }
    }
    Err(GeometryError::GenerationExhausted)
}

/// Sum of the absolute values of numerators and denominators; a crude size
/// measure used only by tests.
pub fn coord_magnitude(p: &ProjPoint) -> BigInt {
    p.coords
        .iter()
        .map(|c| c.numer().abs() + c.denom().abs())
        .sum()
}
