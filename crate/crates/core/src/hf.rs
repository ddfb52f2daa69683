//! Combinatorics of valid Hilbert functions of zero-dimensional schemes in
//! the projective plane.
//!
//! A finite sequence of positive integers `(h_0, ..., h_sigma)` is a *valid*
//! first difference (Castelnuovo function) when it satisfies
//!
//!   (a) an initial staircase: `h_i = i + 1` for `0 <= i < alpha`, and
//!   (b) a nonincreasing tail: `h_i >= h_{i+1}` for `alpha <= i <= sigma`,
//!
//! where `alpha` is the length of the maximal initial staircase run. The
//! conjugate partition of a valid sequence is strictly decreasing, which is
//! exactly what lets a k-configuration of reduced points realize it.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Binomial coefficient with the usual convention `C(n, k) = 0` for `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: usize = 1;
    for i in 1..=k {
        res = res * (n - k + i) / i;
    }
    res
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfError {
    /// Input sequence empty (or all zeros).
    Empty,
    /// A zero entry before the stripped tail.
    ZeroEntry { index: usize },
    /// Condition (a) fails: the entry breaks the initial staircase pattern.
    Staircase { index: usize, found: usize },
    /// Condition (b) fails: the tail increases at this index.
    TailRise { index: usize },
    /// Input to `first_difference` decreases at this index.
    NotNondecreasing { index: usize },
    /// No closed form is implemented for t generic double points with
    /// t in {2, 5}; the min-formula for the Hilbert function fails there.
    ExceptionalT { t: usize },
}

impl fmt::Display for HfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HfError::Empty => write!(f, "sequence is empty"),
            HfError::ZeroEntry { index } => {
                write!(f, "entry at index {index} is zero; all entries must be positive")
            }
            HfError::Staircase { index, found } => write!(
                f,
                "condition (a) fails at index {index}: found {found}, but the sequence must \
                 start with the staircase 1, 2, 3, ... and drop to at most the staircase length"
            ),
            HfError::TailRise { index } => write!(
                f,
                "condition (b) fails at index {index}: the tail after the staircase must be \
                 nonincreasing"
            ),
            HfError::NotNondecreasing { index } => {
                write!(f, "sequence decreases at index {index}; a Hilbert function is nondecreasing")
            }
            HfError::ExceptionalT { t } => write!(
                f,
                "t = {t} is an exceptional case: the generic double-point Hilbert function does \
                 not follow the min formula; supply the Hilbert function explicitly"
            ),
        }
    }
}

impl std::error::Error for HfError {}

/// A valid first difference `(h_0, ..., h_sigma)` of a Hilbert function,
/// indexed from 0, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaH {
    values: Vec<usize>,
    alpha: usize,
}

impl DeltaH {
    /// Validates a sequence (after stripping trailing zeros) and computes
    /// `alpha`, the length of the maximal initial staircase run.
    ///
    /// The degenerate sequence `(1)` is accepted with `alpha = 1`, and a pure
    /// staircase `(1, 2, ..., n)` with `alpha = n`: in both cases the
    /// staircase runs to the end of the sequence.
    pub fn new(seq: &[usize]) -> Result<DeltaH, HfError> {
        let mut end = seq.len();
        while end > 0 && seq[end - 1] == 0 {
            end -= 1;
        }
        let values = seq[..end].to_vec();
        if values.is_empty() {
            return Err(HfError::Empty);
        }
        if let Some(index) = values.iter().position(|&h| h == 0) {
            return Err(HfError::ZeroEntry { index });
        }
        // Maximal initial run with h_i = i + 1.
        let alpha = values
            .iter()
            .enumerate()
            .take_while(|&(i, &h)| h == i + 1)
            .count();
        if alpha == 0 {
            return Err(HfError::Staircase { index: 0, found: values[0] });
        }
        if alpha < values.len() {
            // The tail must start at or below the staircase top...
            if values[alpha] > alpha {
                return Err(HfError::Staircase { index: alpha, found: values[alpha] });
            }
            // ...and never increase afterwards.
            for i in alpha..values.len() - 1 {
                if values[i] < values[i + 1] {
                    return Err(HfError::TailRise { index: i + 1 });
                }
            }
        }
        Ok(DeltaH { values, alpha })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Length of the initial staircase run; also the maximal entry.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Index of the last nonzero entry.
    pub fn sigma(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a DeltaH always has at least one entry
    }

    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }

    /// The conjugate partition: part `i` counts the entries that are `>= i`,
    /// for `i = 1, ..., alpha`.
    pub fn conjugate(&self) -> ConjugatePartition {
        let parts = (1..=self.alpha)
            .map(|level| self.values.iter().filter(|&&h| h >= level).count())
            .collect();
        ConjugatePartition::new(parts)
    }

    /// Prefix sums: the Hilbert function whose first difference this is.
    pub fn accumulate(&self) -> HilbertFunction {
        let mut acc = 0usize;
        let values: Vec<usize> = self
            .values
            .iter()
            .map(|&h| {
                acc += h;
                acc
            })
            .collect();
        HilbertFunction::new(values, acc)
    }

    /// Writes the total as `3d + r` with `0 <= r < 3`: the maximal number of
    /// double points `d` a scheme of this degree could consist of, and the
    /// leftover reduced points `r`.
    pub fn degree_split(&self) -> (usize, usize, usize) {
        let total = self.sum();
        (total, total / 3, total % 3)
    }

    /// Renders the sequence as columns of dots, bottom-aligned, one character
    /// per dot with single-space separation. Column `i` holds `h_i` dots; the
    /// row lengths read bottom-to-top give the conjugate.
    pub fn dot_diagram(&self) -> String {
        let mut rows = Vec::with_capacity(self.alpha);
        for level in (1..=self.alpha).rev() {
            let row: Vec<&str> = self
                .values
                .iter()
                .map(|&h| if h >= level { "\u{2022}" } else { " " })
                .collect();
            rows.push(row.join(" ").trim_end().to_string());
        }
        rows.join("\n")
    }
}

impl fmt::Display for DeltaH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|h| h.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DeltaH {
    type Err = String;

    /// Parses the comma-separated text form, e.g. `"1,2,3,4,2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let seq: Vec<usize> = s
            .split(',')
            .map(|tok| tok.trim().parse::<usize>().map_err(|e| format!("bad entry {tok:?}: {e}")))
            .collect::<Result<_, _>>()?;
        DeltaH::new(&seq).map_err(|e| e.to_string())
    }
}

impl Serialize for DeltaH {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DeltaH {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let seq = Vec::<usize>::deserialize(deserializer)?;
        DeltaH::new(&seq).map_err(D::Error::custom)
    }
}

/// The conjugate of a valid first difference: a strictly decreasing partition
/// `(h_1*, ..., h_alpha*)`, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatePartition {
    parts: Vec<usize>,
}

impl ConjugatePartition {
    fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] > w[1]),
            "conjugate of a valid sequence must be strictly decreasing, got {parts:?}"
        );
        assert!(!parts.is_empty() && *parts.last().unwrap() > 0);
        ConjugatePartition { parts }
    }

    /// Part `i` for `i = 1, ..., alpha` (1-based, as written on paper).
    pub fn part(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.parts.len(), "part index {i} out of range");
        self.parts[i - 1]
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for ConjugatePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|h| h.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A Hilbert function: nondecreasing values `H(0), ..., H(T)` together with
/// the eventual constant (the degree of the scheme).
///
/// `values` may stop before reaching `stable_value` when a computation was
/// truncated at an explicit degree cap; every internal constructor that runs
/// to stabilization ends the vector exactly at the stable value.
#[derive(Clone, Debug)]
pub struct HilbertFunction {
    values: Vec<usize>,
    stable_value: usize,
}

impl HilbertFunction {
    pub fn new(values: Vec<usize>, stable_value: usize) -> Self {
        assert!(
            values.windows(2).all(|w| w[0] <= w[1]),
            "Hilbert function values must be nondecreasing: {values:?}"
        );
        assert!(values.iter().all(|&v| v <= stable_value));
        HilbertFunction { values, stable_value }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn stable_value(&self) -> usize {
        self.stable_value
    }

    /// `H(t)`, extending by the stable value past the computed range.
    pub fn value_at(&self, t: usize) -> usize {
        if t < self.values.len() {
            self.values[t]
        } else {
            self.stable_value
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The first difference, with `H(-1) = 0` and trailing zeros stripped.
    pub fn first_difference(&self) -> Result<DeltaH, HfError> {
        first_difference(&self.values)
    }
}

/// Two Hilbert functions are equal when they agree at every degree, treating
/// both as eventually constant at their stable value.
impl PartialEq for HilbertFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.stable_value != other.stable_value {
            return false;
        }
        let n = self.values.len().max(other.values.len());
        (0..n).all(|t| self.value_at(t) == other.value_at(t))
    }
}

impl Eq for HilbertFunction {}

impl fmt::Display for HilbertFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|h| h.to_string()).collect();
        write!(f, "{} (stable {})", parts.join(","), self.stable_value)
    }
}

/// First difference of a nondecreasing sequence, `H(-1) = 0`.
///
/// Fails with [`HfError::NotNondecreasing`] on a decreasing input, and with a
/// validity error when the difference is not a valid first difference of
/// points in the plane.
pub fn first_difference(values: &[usize]) -> Result<DeltaH, HfError> {
    if values.is_empty() {
        return Err(HfError::Empty);
    }
    let mut diffs = Vec::with_capacity(values.len());
    let mut prev = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v < prev {
            return Err(HfError::NotNondecreasing { index: i });
        }
        diffs.push(v - prev);
        prev = v;
    }
    DeltaH::new(&diffs)
}

/// First difference of the Hilbert function of double points supported on a
/// star configuration of `t + 1` general lines:
/// `(1, 2, ..., t, t+1, ..., t+1)` with `t` copies of `t + 1`.
pub fn star_delta(t: usize) -> DeltaH {
    assert!(t >= 1, "star parameter must be at least 1");
    let mut seq: Vec<usize> = (1..=t).collect();
    seq.extend(std::iter::repeat_n(t + 1, t));
    DeltaH::new(&seq).expect("star sequence is valid by construction")
}

/// [`star_delta`] with one extra reduced point on a star line: appends a
/// final 1.
pub fn star_plus_point_delta(t: usize) -> DeltaH {
    assert!(t >= 1, "star parameter must be at least 1");
    let mut seq: Vec<usize> = (1..=t).collect();
    seq.extend(std::iter::repeat_n(t + 1, t));
    seq.push(1);
    DeltaH::new(&seq).expect("star-plus-point sequence is valid by construction")
}

/// First difference of the Hilbert function of `t` generic double points,
/// `H(i) = min(C(i+2, 2), 3t)`, valid for every `t` except the exceptional
/// cases `t = 2` and `t = 5` where the min formula fails.
pub fn generic_double_delta(t: usize) -> Result<DeltaH, HfError> {
    assert!(t >= 1, "point count must be at least 1");
    if t == 2 || t == 5 {
        return Err(HfError::ExceptionalT { t });
    }
    let degree = 3 * t;
    let mut values = Vec::new();
    let mut i = 0usize;
    loop {
        let v = binomial(i + 2, 2).min(degree);
        values.push(v);
        if v == degree {
            break;
        }
        i += 1;
    }
    first_difference(&values)
}

/// Draws a uniformly-shaped random valid first difference: a random staircase
/// length followed by a random nonincreasing tail, subject to
/// `sigma <= max_sigma` and `sum <= max_sum`. Deterministic in the generator
/// state; used by property tests and randomized verification sweeps.
pub fn random_valid_delta(
    rng: &mut crate::rng::SplitMix64,
    max_sigma: usize,
    max_sum: usize,
) -> DeltaH {
    assert!(max_sum >= 1);
    let max_len = max_sigma + 1;
    // Largest staircase that fits both caps.
    let alpha_cap = (1..=max_len)
        .take_while(|&a| a * (a + 1) / 2 <= max_sum)
        .last()
        .unwrap_or(1);
    let alpha = rng.int_in(1, alpha_cap as i64) as usize;
    let mut seq: Vec<usize> = (1..=alpha).collect();
    let mut budget = max_sum - alpha * (alpha + 1) / 2;
    let mut cur = alpha;
    while seq.len() < max_len && budget > 0 {
        // Stop with probability 1/3 to vary lengths.
        if rng.int_in(0, 2) == 0 {
            break;
        }
        let next = rng.int_in(1, cur.min(budget) as i64) as usize;
        seq.push(next);
        cur = next;
        budget -= next;
    }
    DeltaH::new(&seq).expect("randomly generated sequence is valid by construction")
}
