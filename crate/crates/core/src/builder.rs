//! The constructive pipeline: given a valid first difference, build an
//! explicit scheme of double and reduced points realizing it.
//!
//! The construction seeds a k-configuration of reduced points on general
//! lines (which realizes the target Hilbert function), then repeatedly
//! *merges* two reduced points on one line with one reduced point on another
//! into a double point at the intersection of the two lines. Under the
//! hypotheses verified by [`LabeledScheme::merge`], a merge preserves the
//! Hilbert function, so every intermediate scheme realizes the input.
//!
//! Line labels follow the usual mathematical convention and are 1-based
//! throughout this module: an arrangement of `alpha` lines is addressed as
//! lines `1..=alpha`, and a double point at the intersection of lines `i` and
//! `j` carries the label `(i, j)` with `i < j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    points_on_line_avoiding, Arrangement, GeometryError, ProjLine, ProjPoint, Rational,
};
use crate::hf::{binomial, generic_double_delta, ConjugatePartition, DeltaH, HfError};
use crate::rng::SplitMix64;
use crate::scheme::{FatPointScheme, ReductionVector};

/// Which merge hypothesis failed. Double points are stored as intersection
/// index pairs, so "every double point sits at an intersection" holds by
/// representation and has no failure variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisViolation {
    /// (a) a support point does not lie on its assigned line.
    SupportOffLine,
    /// (c) a reduced point sits at an intersection of two arrangement lines.
    ReducedAtIntersection,
    /// (d) the reduction vector along the arrangement lines is not strictly
    /// decreasing.
    NotStrictlyDecreasing,
    /// (e) the requested merge targets are invalid: bad line pair, points not
    /// reduced on the right lines, or the double point already present.
    MergeTargets(String),
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisViolation::SupportOffLine => {
                write!(f, "hypothesis (a) fails: a support point is off its line")
            }
            HypothesisViolation::ReducedAtIntersection => {
                write!(f, "hypothesis (c) fails: a reduced point sits at a line intersection")
            }
            HypothesisViolation::NotStrictlyDecreasing => write!(
                f,
                "hypothesis (d) fails: the reduction vector along the arrangement is not \
                 strictly decreasing"
            ),
            HypothesisViolation::MergeTargets(msg) => {
                write!(f, "hypothesis (e) fails: {msg}")
            }
        }
    }
}

impl std::error::Error for HypothesisViolation {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuilderError {
    /// The arrangement does not have exactly `alpha` lines.
    ArityMismatch { expected: usize, got: usize },
    Geometry(GeometryError),
    Hypothesis(HypothesisViolation),
    Hf(HfError),
}

impl fmt::Display for BuilderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuilderError::ArityMismatch { expected, got } => {
                write!(f, "arrangement must have exactly {expected} lines, got {got}")
            }
            BuilderError::Geometry(e) => write!(f, "{e}"),
            BuilderError::Hypothesis(e) => write!(f, "{e}"),
            BuilderError::Hf(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BuilderError {}

impl From<GeometryError> for BuilderError {
    fn from(e: GeometryError) -> Self {
        BuilderError::Geometry(e)
    }
}

impl From<HypothesisViolation> for BuilderError {
    fn from(e: HypothesisViolation) -> Self {
        BuilderError::Hypothesis(e)
    }
}

impl From<HfError> for BuilderError {
    fn from(e: HfError) -> Self {
        BuilderError::Hf(e)
    }
}

/// A scheme of double and reduced points bound to a line arrangement:
/// every reduced point lies on a known line (off all intersections), and
/// every double point sits at a known intersection of two lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledScheme {
    arrangement: Arrangement,
    /// Reduced points per line, in placement order; entry `k` holds the
    /// points on line `k + 1`.
    reduced: Vec<Vec<ProjPoint>>,
    /// Double points as 1-based line index pairs `(i, j)`, `i < j`, in
    /// creation order.
    doubles: Vec<(usize, usize)>,
}

impl LabeledScheme {
    fn new(arrangement: Arrangement) -> Self {
        let lines = arrangement.len();
        LabeledScheme { arrangement, reduced: vec![Vec::new(); lines], doubles: Vec::new() }
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    /// The line with 1-based label `k`.
    pub fn line(&self, k: usize) -> &ProjLine {
        assert!(k >= 1 && k <= self.arrangement.len(), "line label {k} out of range");
        &self.arrangement.lines()[k - 1]
    }

    pub fn double_pairs(&self) -> &[(usize, usize)] {
        &self.doubles
    }

    pub fn double_count(&self) -> usize {
        self.doubles.len()
    }

    pub fn reduced_count(&self) -> usize {
        self.reduced.iter().map(|pts| pts.len()).sum()
    }

    pub fn reduced_on_line(&self, k: usize) -> &[ProjPoint] {
        assert!(k >= 1 && k <= self.reduced.len(), "line label {k} out of range");
        &self.reduced[k - 1]
    }

    /// The support point of the double labeled `(i, j)`.
    pub fn intersection_point(&self, i: usize, j: usize) -> ProjPoint {
        self.line(i)
            .intersect(self.line(j))
            .expect("arrangement lines are pairwise distinct")
    }

    /// 1-based label of the line carrying this reduced point, if any.
    pub fn line_of(&self, p: &ProjPoint) -> Option<usize> {
        self.reduced
            .iter()
            .position(|pts| pts.contains(p))
            .map(|idx| idx + 1)
    }

    /// The line index pair of the double point supported at `p`, if any.
    pub fn double_at(&self, p: &ProjPoint) -> Option<(usize, usize)> {
        self.doubles
            .iter()
            .copied()
            .find(|&(i, j)| self.intersection_point(i, j) == *p)
    }

    /// The underlying fat point scheme: doubles in creation order, then
    /// reduced points line by line in placement order.
    pub fn to_scheme(&self) -> FatPointScheme {
        let mut points = Vec::with_capacity(self.doubles.len() + self.reduced_count());
        for &(i, j) in &self.doubles {
            points.push((self.intersection_point(i, j), 2));
        }
        for pts in &self.reduced {
            for p in pts {
                points.push((p.clone(), 1));
            }
        }
        FatPointScheme::new(points)
            .expect("labeled scheme supports are pairwise distinct by construction")
    }

    /// Reduction vector of the scheme along the arrangement lines in order.
    pub fn reduction_vector(&self) -> ReductionVector {
        self.to_scheme().reduction_vector(self.arrangement.lines())
    }

    fn verify_merge_hypotheses(
        &self,
        i: usize,
        j: usize,
        q1: &ProjPoint,
        q2: &ProjPoint,
        r: &ProjPoint,
    ) -> Result<(), HypothesisViolation> {
        // (a) reduced points lie on their lines. (Doubles are intersection
        // index pairs; (b) holds by representation.)
        for (idx, pts) in self.reduced.iter().enumerate() {
            let line = &self.arrangement.lines()[idx];
            if pts.iter().any(|p| !line.contains(p)) {
                return Err(HypothesisViolation::SupportOffLine);
            }
        }
        // (c) reduced points avoid every intersection.
        let intersections = self.arrangement.intersections();
        for pts in &self.reduced {
            if pts.iter().any(|p| intersections.contains(p)) {
                return Err(HypothesisViolation::ReducedAtIntersection);
            }
        }
        // (d) strictly decreasing reduction vector.
        if !self.reduction_vector().is_strictly_decreasing() {
            return Err(HypothesisViolation::NotStrictlyDecreasing);
        }
        // (e) the merge targets themselves.
        let alpha = self.arrangement.len();
        if !(1 <= i && i < j && j <= alpha) {
            return Err(HypothesisViolation::MergeTargets(format!(
                "line pair ({i}, {j}) is not 1 <= i < j <= {alpha}"
            )));
        }
        if q1 == q2 {
            return Err(HypothesisViolation::MergeTargets(
                "the two points on the first line must be distinct".into(),
            ));
        }
        if !self.reduced[i - 1].contains(q1) || !self.reduced[i - 1].contains(q2) {
            return Err(HypothesisViolation::MergeTargets(format!(
                "both removed points must be reduced points on line {i}"
            )));
        }
        if !self.reduced[j - 1].contains(r) {
            return Err(HypothesisViolation::MergeTargets(format!(
                "the third removed point must be a reduced point on line {j}"
            )));
        }
        if self.doubles.contains(&(i, j)) {
            return Err(HypothesisViolation::MergeTargets(format!(
                "the double point at lines ({i}, {j}) is already present"
            )));
        }
        Ok(())
    }

    /// The Hilbert-function-preserving merge: removes the reduced points
    /// `q1, q2` on line `i` and `r` on line `j`, and adds a double point at
    /// the intersection of lines `i` and `j`. All hypotheses are re-verified;
    /// scheme degree is unchanged.
    pub fn merge(
        &self,
        i: usize,
        j: usize,
        q1: &ProjPoint,
        q2: &ProjPoint,
        r: &ProjPoint,
    ) -> Result<LabeledScheme, BuilderError> {
        self.verify_merge_hypotheses(i, j, q1, q2, r)?;
        let mut next = self.clone();
        next.reduced[i - 1].retain(|p| p != q1 && p != q2);
        next.reduced[j - 1].retain(|p| p != r);
        next.doubles.push((i, j));
        debug_assert_eq!(next.to_scheme().degree(), self.to_scheme().degree());
        Ok(next)
    }
}

/// Reduced points realizing a valid first difference: `h_k*` points on line
/// `k` for each part of the conjugate, avoiding all intersections (so no
/// point lies on two lines). The arrangement must have exactly `alpha` lines.
pub fn k_configuration(
    d: &DeltaH,
    arrangement: &Arrangement,
    seed: u64,
) -> Result<LabeledScheme, BuilderError> {
    let conj = d.conjugate();
    if arrangement.len() != conj.len() {
        return Err(BuilderError::ArityMismatch {
            expected: conj.len(),
            got: arrangement.len(),
        });
    }
    let forbidden = arrangement.intersections();
    let mut rng = SplitMix64::new(seed);
    let mut scheme = LabeledScheme::new(arrangement.clone());
    for k in 1..=conj.len() {
        let line = &arrangement.lines()[k - 1];
        let pts = points_on_line_avoiding(line, conj.part(k), &forbidden, rng.next_u64())?;
        scheme.reduced[k - 1] = pts;
    }
    Ok(scheme)
}

/// One merge performed during a construction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub i: usize,
    pub j: usize,
    /// The reduced points the merge consumed (two on line `i`, one on line
    /// `j`); bookkeeping only, not part of the wire format.
    #[serde(skip)]
    pub removed: Vec<ProjPoint>,
}

/// One step of the construction: the remaining-point lower bounds `h_n`
/// for lines `n..=alpha`, the count `s_n` of eligible later lines, the merge
/// count `t_n`, and the merges actually performed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub h_n: Vec<usize>,
    pub s_n: usize,
    pub t_n: usize,
    pub merges: Vec<MergeRecord>,
}

/// Full per-step record of a construction run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub steps: Vec<StepRecord>,
    pub doubles: usize,
    pub reduced: usize,
}

impl ConstructionTrace {
    /// The step at which the construction stopped.
    pub fn terminal_step(&self) -> usize {
        self.steps.last().map_or(0, |s| s.n)
    }
}

/// Runs the full construction for a valid first difference `d`:
/// seeds a k-configuration, then at step `n = 1, 2, ...` merges
/// `t_n = min(floor((h_n* - (n-1))_+ / 2), s_n)` pairs of reduced points on
/// line `n` with one reduced point on each of lines `n+1, ..., n+t_n`,
/// stopping when `s_n = 0` (no eligible later line) or after `stop_at`
/// double points exist.
///
/// Every merge re-verifies the preservation hypotheses, so the output scheme
/// provably has the same Hilbert function as the seed configuration.
pub fn construct(
    d: &DeltaH,
    seed: u64,
    stop_at: Option<usize>,
) -> Result<(LabeledScheme, ConstructionTrace), BuilderError> {
    construct_with_inspector(d, seed, stop_at, |_| {})
}

/// [`construct`] with a hook invoked after every individual merge; used by
/// verification sweeps that oracle-check each intermediate scheme.
pub fn construct_with_inspector(
    d: &DeltaH,
    seed: u64,
    stop_at: Option<usize>,
    mut inspect: impl FnMut(&LabeledScheme),
) -> Result<(LabeledScheme, ConstructionTrace), BuilderError> {
    if let Some(e) = stop_at {
        assert!(e >= 1, "stop_at must be at least 1");
    }
    let conj = d.conjugate();
    let alpha = conj.len();
    let mut rng = SplitMix64::new(seed);
    let arrangement = Arrangement::random(alpha, rng.next_u64())?;
    let mut scheme = k_configuration(d, &arrangement, rng.next_u64())?;

    let mut steps: Vec<StepRecord> = Vec::new();
    let mut doubles_made = 0usize;
    for n in 1..=alpha {
        if stop_at == Some(doubles_made) {
            break; // budget exhausted exactly at a step boundary
        }
        let h_n: Vec<usize> =
            (n..=alpha).map(|k| conj.part(k).saturating_sub(n - 1)).collect();
        let s_n = (n + 1..=alpha).filter(|&k| conj.part(k) >= n).count();
        if s_n == 0 {
            steps.push(StepRecord { n, h_n, s_n, t_n: 0, merges: Vec::new() });
            break;
        }
        let t_n = (h_n[0] / 2).min(s_n);
        debug_assert!(t_n >= 1, "an eligible step always merges at least once");
        let mut merges = Vec::new();
        let mut budget_hit = false;
        for j in n + 1..=n + t_n {
            if stop_at == Some(doubles_made) {
                budget_hit = true;
                break;
            }
            // Consume the most recently placed reduced points (deterministic
            // LIFO); any admissible choice preserves the Hilbert function.
            let q1 = scheme.reduced[n - 1]
                .last()
                .expect("step arithmetic guarantees two points on the base line")
                .clone();
            let q2 = scheme.reduced[n - 1]
                .iter()
                .rev()
                .nth(1)
                .expect("step arithmetic guarantees two points on the base line")
                .clone();
            let r = scheme.reduced[j - 1]
                .last()
                .expect("step arithmetic guarantees a point on the target line")
                .clone();
            scheme = scheme.merge(n, j, &q1, &q2, &r)?;
            doubles_made += 1;
            inspect(&scheme);
            merges.push(MergeRecord { i: n, j, removed: vec![q1, q2, r] });
        }
        if stop_at == Some(doubles_made) {
            budget_hit = true;
        }
        steps.push(StepRecord { n, h_n, s_n, t_n, merges });
        if budget_hit {
            break;
        }
    }
    debug_assert!(scheme.reduction_vector().is_strictly_decreasing());
    let trace = ConstructionTrace {
        steps,
        doubles: scheme.double_count(),
        reduced: scheme.reduced_count(),
    };
    Ok((scheme, trace))
}

/// The number of double points [`construct`] produces for `d`, evaluated
/// directly on the conjugate without building any geometry:
/// `sum over i = 1..alpha of min(floor((h_i* - (i-1))_+ / 2), s_i)`.
pub fn predicted_double_count(d: &DeltaH) -> usize {
    let conj = d.conjugate();
    let alpha = conj.len();
    (1..alpha)
        .map(|i| step_merge_count(&conj, alpha, i))
        .sum()
}

fn step_merge_count(conj: &ConjugatePartition, alpha: usize, i: usize) -> usize {
    let available_pairs = conj.part(i).saturating_sub(i - 1) / 2;
    let eligible_lines = (i + 1..=alpha).filter(|&k| conj.part(k) >= i).count();
    available_pairs.min(eligible_lines)
}

/// Bounds on the construction's double count:
/// `min(floor((sigma+1)/2), alpha-1) <= count <= C(alpha, 2)`.
pub fn double_bounds(d: &DeltaH) -> (usize, usize) {
    let alpha = d.alpha();
    let lower = d.sigma().div_ceil(2).min(alpha - 1); // = floor((sigma + 1) / 2)
    let upper = binomial(alpha, 2);
    (lower, upper)
}

/// True iff the construction consumes every reduced point, i.e. for each
/// `i = 1, ..., alpha - 1` the pair supply `(h_i* - (i-1))_+ / 2` exactly
/// equals the eligible-line count (in particular the numerator is even).
/// When it holds, `d` is the Hilbert function of a set of only double points.
///
/// A single-line input (`alpha = 1`) never merges, so it reports false.
pub fn all_doubles_criterion(d: &DeltaH) -> bool {
    let conj = d.conjugate();
    let alpha = conj.len();
    if alpha < 2 {
        return false;
    }
    (1..alpha).all(|i| {
        let numer = conj.part(i).saturating_sub(i - 1);
        let eligible = (i + 1..=alpha).filter(|&k| conj.part(k) >= i).count();
        numer.is_multiple_of(2) && numer / 2 == eligible
    })
}

/// True iff the conjugate is the arithmetic staircase
/// `(2 alpha - 2, 2 alpha - 3, ..., alpha - 1)`. A strictly stronger
/// condition than [`all_doubles_criterion`]; it holds exactly for the star
/// family shapes.
pub fn staircase_conjugate_criterion(d: &DeltaH) -> bool {
    let conj = d.conjugate();
    let alpha = conj.len();
    if alpha < 2 {
        return false;
    }
    (1..=alpha).all(|i| conj.part(i) == 2 * alpha - 1 - i)
}

/// Double points at all pairwise intersections of `t + 1` random general
/// lines: a star configuration of `C(t+1, 2)` double points.
pub fn star_scheme(t: usize, seed: u64) -> Result<LabeledScheme, BuilderError> {
    assert!(t >= 1, "star parameter must be at least 1");
    let arrangement = Arrangement::random(t + 1, seed)?;
    let mut scheme = LabeledScheme::new(arrangement);
    for i in 1..=t {
        for j in i + 1..=t + 1 {
            scheme.doubles.push((i, j));
        }
    }
    Ok(scheme)
}

impl LabeledScheme {
    /// A copy with one extra reduced point placed on line `k`, avoiding all
    /// intersections and the points already present.
    pub fn with_extra_reduced_point(
        &self,
        k: usize,
        seed: u64,
    ) -> Result<LabeledScheme, BuilderError> {
        let line = self.line(k).clone();
        let mut forbidden = self.arrangement.intersections();
        forbidden.extend(self.reduced[k - 1].iter().cloned());
        let pts = points_on_line_avoiding(&line, 1, &forbidden, seed)?;
        let mut next = self.clone();
        next.reduced[k - 1].push(pts.into_iter().next().unwrap());
        Ok(next)
    }
}

/// The star configuration on `t + 1` lines with one double point displaced:
/// doubles at all intersections except lines `(1, 2)`, a double at a general
/// point of line 2, and a reduced point at a general point of line 1.
pub fn near_star_scheme(t: usize, seed: u64) -> Result<FatPointScheme, BuilderError> {
    assert!(t >= 3, "the near-star configuration needs t >= 3");
    let mut rng = SplitMix64::new(seed);
    let arrangement = Arrangement::random(t + 1, rng.next_u64())?;
    let forbidden = arrangement.intersections();
    let lines = arrangement.lines();

    let mut points: Vec<(ProjPoint, usize)> = Vec::new();
    for i in 1..=t {
        for j in i + 1..=t + 1 {
            if (i, j) == (1, 2) {
                continue;
            }
            let p = lines[i - 1].intersect(&lines[j - 1]).expect("distinct lines");
            points.push((p, 2));
        }
    }
    let q = points_on_line_avoiding(&lines[1], 1, &forbidden, rng.next_u64())?
        .into_iter()
        .next()
        .unwrap();
    points.push((q, 2));
    let p = points_on_line_avoiding(&lines[0], 1, &forbidden, rng.next_u64())?
        .into_iter()
        .next()
        .unwrap();
    points.push((p, 1));
    Ok(FatPointScheme::new(points).expect("supports are distinct by construction"))
}

/// The construction's double yield for the Hilbert function of `t` generic
/// double points, computed purely from the conjugate (no geometry).
pub fn generic_double_yield(t: usize) -> Result<usize, HfError> {
    Ok(predicted_double_count(&generic_double_delta(t)?))
}

/// One row of the asymptotic yield table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticRow {
    pub t: usize,
    pub doubles: usize,
    /// Exact ratio doubles / t.
    pub ratio: Rational,
}

/// Exact yield ratios for a list of generic-point counts. The ratio tends to
/// 3/4 as `t` grows.
pub fn asymptotic_table(t_values: &[usize]) -> Result<Vec<AsymptoticRow>, HfError> {
    t_values
        .iter()
        .map(|&t| {
            let doubles = generic_double_yield(t)?;
            Ok(AsymptoticRow {
                t,
                doubles,
                ratio: Rational::new((doubles as i64).into(), (t as i64).into()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn delta(seq: &[usize]) -> DeltaH {
        DeltaH::new(seq).unwrap()
    }

    #[test]
    fn k_configuration_places_conjugate_counts() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(4, 3).unwrap();
        let z = k_configuration(&d, &arr, 17).unwrap();
        let counts: Vec<usize> = (1..=4).map(|k| z.reduced_on_line(k).len()).collect();
        assert_eq!(counts, vec![5, 4, 2, 1]);
        assert_eq!(z.double_count(), 0);

        // Every point on its line, never on another line.
        for k in 1..=4usize {
            for p in z.reduced_on_line(k) {
                assert!(z.line(k).contains(p));
                for other in 1..=4usize {
                    if other != k {
                        assert!(!z.line(other).contains(p));
                    }
                }
            }
        }
    }

    #[test]
    fn k_configuration_requires_alpha_lines() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(3, 3).unwrap();
        assert_eq!(
            k_configuration(&d, &arr, 0).unwrap_err(),
            BuilderError::ArityMismatch { expected: 4, got: 3 }
        );
    }

    #[test]
    fn k_configuration_realizes_the_hilbert_function() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(4, 3).unwrap();
        let z = k_configuration(&d, &arr, 17).unwrap();
        let h = oracle::hilbert_function(&z.to_scheme(), None).unwrap();
        assert_eq!(h, d.accumulate());

        let single = delta(&[1]);
        let arr1 = Arrangement::random(1, 5).unwrap();
        let z1 = k_configuration(&single, &arr1, 2).unwrap();
        assert_eq!(oracle::delta_hf(&z1.to_scheme()).unwrap(), single);
    }

    #[test]
    fn k_configuration_reduction_vector_is_the_conjugate() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(4, 11).unwrap();
        let z = k_configuration(&d, &arr, 13).unwrap();
        let rv = z.reduction_vector();
        assert_eq!(rv.entries, d.conjugate().parts());
        assert!(rv.full);
        assert!(rv.is_strictly_decreasing());
    }

    #[test]
    fn merge_preserves_degree_and_counts() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(4, 3).unwrap();
        let z = k_configuration(&d, &arr, 17).unwrap();
        let q1 = z.reduced_on_line(1)[4].clone();
        let q2 = z.reduced_on_line(1)[3].clone();
        let r = z.reduced_on_line(2)[3].clone();
        let merged = z.merge(1, 2, &q1, &q2, &r).unwrap();
        assert_eq!(merged.double_count(), 1);
        assert_eq!(merged.reduced_count(), z.reduced_count() - 3);
        assert_eq!(merged.to_scheme().degree(), z.to_scheme().degree());
        assert_eq!(merged.double_at(&merged.intersection_point(1, 2)), Some((1, 2)));

        // Re-merging the same pair violates hypothesis (e).
        let q3 = merged.reduced_on_line(1)[2].clone();
        let q4 = merged.reduced_on_line(1)[1].clone();
        let r2 = merged.reduced_on_line(2)[2].clone();
        match merged.merge(1, 2, &q3, &q4, &r2).unwrap_err() {
            BuilderError::Hypothesis(HypothesisViolation::MergeTargets(_)) => {}
            other => panic!("expected merge-target violation, got {other:?}"),
        }
    }

    #[test]
    fn merge_rejects_points_off_the_lines() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let arr = Arrangement::random(4, 3).unwrap();
        let z = k_configuration(&d, &arr, 17).unwrap();
        let q1 = z.reduced_on_line(1)[0].clone();
        let q2 = z.reduced_on_line(1)[1].clone();
        let wrong = z.reduced_on_line(3)[0].clone(); // not on line 2
        match z.merge(1, 2, &q1, &q2, &wrong).unwrap_err() {
            BuilderError::Hypothesis(HypothesisViolation::MergeTargets(_)) => {}
            other => panic!("expected merge-target violation, got {other:?}"),
        }
    }

    #[test]
    fn construct_example_three_doubles() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let (z, trace) = construct(&d, 1, None).unwrap();
        assert_eq!(z.double_count(), 3);
        assert_eq!(z.reduced_count(), 3);
        assert_eq!(z.double_pairs(), &[(1, 2), (1, 3), (2, 3)]);

        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.steps[0].t_n, 2);
        assert_eq!(trace.steps[0].s_n, 3);
        assert_eq!(trace.steps[0].h_n, vec![5, 4, 2, 1]);
        assert_eq!(trace.steps[1].t_n, 1);
        assert_eq!(trace.steps[1].h_n, vec![3, 1, 0]);
        assert_eq!(trace.steps[2].s_n, 0);
        assert_eq!(trace.terminal_step(), 3);
        assert_eq!(trace.doubles, 3);
        assert_eq!(trace.reduced, 3);
    }

    #[test]
    fn construct_example_single_double() {
        let d = delta(&[1, 2, 2, 1]);
        let (z, _) = construct(&d, 0, None).unwrap();
        assert_eq!(z.double_count(), 1);
        assert_eq!(z.reduced_count(), 3);
        // Two leftovers on line 1 and one on line 2.
        assert_eq!(z.reduced_on_line(1).len(), 2);
        assert_eq!(z.reduced_on_line(2).len(), 1);
    }

    #[test]
    fn construct_all_doubles_example() {
        let d = delta(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1]);
        let (z, _) = construct(&d, 5, None).unwrap();
        assert_eq!(z.double_count(), 9);
        assert_eq!(z.reduced_count(), 0);
        assert_eq!(
            z.double_pairs(),
            &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (2, 5), (3, 4)]
        );
    }

    #[test]
    fn construct_all_ones_stops_immediately() {
        let d = delta(&[1, 1, 1, 1]);
        let (z, trace) = construct(&d, 2, None).unwrap();
        assert_eq!(z.double_count(), 0);
        assert_eq!(z.reduced_count(), 4);
        assert_eq!(z.reduced_on_line(1).len(), 4);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].s_n, 0);
    }

    #[test]
    fn construct_is_deterministic_in_the_seed() {
        let d = delta(&[1, 2, 3, 4, 2]);
        let (a, ta) = construct(&d, 9, None).unwrap();
        let (b, tb) = construct(&d, 9, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        let (c, _) = construct(&d, 10, None).unwrap();
        assert_ne!(a.to_scheme(), c.to_scheme());
    }

    #[test]
    fn construct_with_stop_budget() {
        let d = delta(&[1, 2, 3, 4, 2]);
        for e in 1..=3usize {
            let (z, trace) = construct(&d, 1, Some(e)).unwrap();
            assert_eq!(z.double_count(), e);
            assert_eq!(z.reduced_count(), d.sum() - 3 * e);
            assert_eq!(trace.doubles, e);
        }
        // A budget above the natural count changes nothing.
        let (z, _) = construct(&d, 1, Some(50)).unwrap();
        assert_eq!(z.double_count(), 3);
    }

    #[test]
    fn predicted_counts_match_goldens() {
        assert_eq!(predicted_double_count(&delta(&[1, 2, 3, 4, 2])), 3);
        assert_eq!(predicted_double_count(&crate::hf::star_delta(3)), 6);
        assert_eq!(predicted_double_count(&delta(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1])), 9);
        assert_eq!(predicted_double_count(&delta(&[1, 2, 2, 1])), 1);
        assert_eq!(predicted_double_count(&delta(&[1, 1, 1, 1])), 0);
    }

    #[test]
    fn double_bounds_goldens() {
        assert_eq!(double_bounds(&delta(&[1, 2, 3, 4, 2])), (2, 6));
        assert_eq!(double_bounds(&delta(&[1, 1, 1, 1])), (0, 0));
        assert_eq!(double_bounds(&delta(&[1, 2])), (1, 1));
    }

    #[test]
    fn all_doubles_criterion_goldens() {
        assert!(all_doubles_criterion(&delta(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1])));
        assert!(!all_doubles_criterion(&delta(&[1, 2, 3, 4, 2])));
        for t in 3..=6 {
            assert!(all_doubles_criterion(&crate::hf::star_delta(t)));
        }
        assert!(!all_doubles_criterion(&delta(&[1])));
        assert!(!all_doubles_criterion(&delta(&[1, 1, 1])));
    }

    #[test]
    fn staircase_conjugate_criterion_goldens() {
        assert!(staircase_conjugate_criterion(&crate::hf::star_delta(3)));
        assert!(!staircase_conjugate_criterion(&delta(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1])));
        assert!(!staircase_conjugate_criterion(&delta(&[1])));
    }

    #[test]
    fn star_scheme_small_cases() {
        let z = star_scheme(1, 4).unwrap();
        assert_eq!(z.double_count(), 1);
        assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), crate::hf::star_delta(1));

        let z3 = star_scheme(3, 4).unwrap();
        assert_eq!(z3.double_count(), 6);
        assert_eq!(z3.reduced_count(), 0);
    }

    #[test]
    fn extra_reduced_point_stays_admissible() {
        let z = star_scheme(3, 4).unwrap();
        let with_point = z.with_extra_reduced_point(1, 99).unwrap();
        assert_eq!(with_point.reduced_count(), 1);
        let p = &with_point.reduced_on_line(1)[0];
        assert!(with_point.line(1).contains(p));
        assert!(!with_point.arrangement().intersections().contains(p));
    }

    #[test]
    fn near_star_shape() {
        let z = near_star_scheme(3, 21).unwrap();
        // Six doubles (one displaced) plus one reduced point.
        assert_eq!(z.points().len(), 7);
        assert_eq!(z.degree(), 19);
        assert_eq!(z.points().iter().filter(|&&(_, m)| m == 2).count(), 6);
        assert_eq!(z.points().iter().filter(|&&(_, m)| m == 1).count(), 1);
        // Despite not being a star, its first difference has the same shape
        // as a star plus a general point: the bump t+2 sits at degree t+1.
        assert_eq!(oracle::delta_hf(&z).unwrap().values(), &[1, 2, 3, 4, 5, 4]);
    }

    #[test]
    fn generic_yield_goldens() {
        assert_eq!(generic_double_yield(4).unwrap(), 3);
        assert_eq!(generic_double_yield(9).unwrap(), 6);
        assert_eq!(generic_double_yield(1).unwrap(), 1);
        assert!(generic_double_yield(2).is_err());
        assert!(generic_double_yield(5).is_err());
    }

    #[test]
    fn asymptotic_rows_are_exact() {
        let rows = asymptotic_table(&[4, 1684]).unwrap();
        assert_eq!(rows[0].doubles, 3);
        assert_eq!(rows[0].ratio, Rational::new(3.into(), 4.into()));
        assert_eq!(rows[1].doubles, 1275);
        assert_eq!(rows[1].ratio, Rational::new(1275.into(), 1684.into()));
    }

    #[test]
    fn trace_json_shape() {
        let d = delta(&[1, 2, 2, 1]);
        let (_, trace) = construct(&d, 0, None).unwrap();
        let json = serde_json::to_value(&trace).unwrap();
        assert!(json["steps"].is_array());
        assert_eq!(json["doubles"], 1);
        assert_eq!(json["reduced"], 3);
        let step = &json["steps"][0];
        assert_eq!(step["n"], 1);
        assert!(step["h_n"].is_array());
        assert_eq!(step["merges"][0]["i"], 1);
        assert_eq!(step["merges"][0]["j"], 2);
        // Merge records carry only the line pair on the wire.
        assert!(step["merges"][0].get("removed").is_none());
    }
}
