//! Ground-truth Hilbert functions of arbitrary fat point schemes by exact
//! rank computation on the multiplicity-conditions matrix.
//!
//! A form of degree `t` vanishes to order `m` at a point exactly when all
//! partial derivatives of order below `m` of its dehomogenization (at a
//! coordinate where the point is nonzero) vanish at the corresponding affine
//! point. Each derivative-point pair contributes one linear condition on the
//! coefficients of the form; the Hilbert function at degree `t` is the rank
//! of the resulting matrix. This engine is the independent verifier for every
//! construction in the crate: it shares no code path with the closed-form
//! engine in [`crate::scheme`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::hf::{binomial, DeltaH, HilbertFunction};
use crate::linalg::integer_rank;
use crate::scheme::FatPointScheme;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// The Hilbert function did not stabilize by the hard degree cap. This is
    /// impossible for a true fat point scheme and signals an internal bug.
    CapExceeded { cap: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::CapExceeded { cap } => write!(
                f,
                "Hilbert function did not reach the scheme degree by degree {cap}; \
                 this indicates an internal bug"
            ),
        }
    }
}

impl std::error::Error for OracleError {}

/// Monomial exponents of degree `t` in three variables, in a fixed order.
fn monomials(t: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(binomial(t + 2, 2));
    for e0 in (0..=t).rev() {
        for e1 in (0..=t - e0).rev() {
            out.push([e0, e1, t - e0 - e1]);
        }
    }
    out
}

/// The matrix whose rows are the vanishing conditions a fat point scheme
/// imposes on forms of degree `t`: one row per derivative order below each
/// point's multiplicity, one column per degree-`t` monomial.
///
/// The row for the order-`(a, b)` affine derivative at a point with affine
/// coordinates `(u, v) = (U/W, V/W)` has rational entries
/// `p!/(p-a)! * q!/(q-b)! * u^(p-a) * v^(q-b)`. Rows are stored scaled by
/// `W^t / (a! b!)`, which clears every denominator and keeps the integers
/// short; row scaling never changes the rank.
pub struct ConditionsMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl ConditionsMatrix {
    pub fn build(z: &FatPointScheme, t: usize) -> Self {
        let mons = monomials(t);
        let mut rows = Vec::with_capacity(z.degree());
        for (point, mult) in z.points() {
            let coords = point.coords();
            // Canonical form guarantees the first nonzero coordinate is 1;
            // dehomogenize there. The remaining two coordinates are the
            // affine point.
            let pivot = (0..3)
                .find(|&i| !coords[i].is_zero())
                .expect("canonical projective point has a nonzero coordinate");
            let (ui, vi) = match pivot {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            // Smallest integer representative (U, V, W) of (u, v, 1).
            let denom_lcm = coords[ui].denom().lcm(coords[vi].denom());
            let big_u = coords[ui].numer() * (&denom_lcm / coords[ui].denom());
            let big_v = coords[vi].numer() * (&denom_lcm / coords[vi].denom());
            let u_pow = powers(&big_u, t);
            let v_pow = powers(&big_v, t);
            let w_pow = powers(&denom_lcm, t);
            for a in 0..*mult {
                for b in 0..*mult - a {
                    let row = mons
                        .iter()
                        .map(|exps| {
                            let p = exps[ui];
                            let q = exps[vi];
                            if p < a || q < b {
                                return BigInt::zero();
                            }
                            let coeff =
                                BigInt::from((binomial(p, a) * binomial(q, b)) as u64);
                            coeff
                                * &u_pow[p - a]
                                * &v_pow[q - b]
                                * &w_pow[t - (p - a) - (q - b)]
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        ConditionsMatrix { rows, cols: mons.len() }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Exact rank over the rationals.
    pub fn rank(self) -> usize {
        integer_rank(self.rows)
    }
}

fn powers(base: &BigInt, up_to: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(BigInt::one());
    for i in 1..=up_to {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

/// Dimension of the degree-`t` graded piece of the scheme's ideal:
/// `C(t+2, 2) - rank`, rank computed exactly.
pub fn ideal_dimension(z: &FatPointScheme, t: usize) -> usize {
    binomial(t + 2, 2) - ConditionsMatrix::build(z, t).rank()
}

/// Hilbert function `H(t) = C(t+2,2) - dim (I_Z)_t`, which equals the rank of
/// the conditions matrix at degree `t`.
///
/// With `up_to = None`, computes degree by degree until `H` reaches the
/// scheme degree (guaranteed to happen at or below the hard cap, the sum of
/// the multiplicities plus one). With `up_to = Some(k)`, computes degrees
/// `0..=k` exactly as given, which may stop short of stabilization.
pub fn hilbert_function(
    z: &FatPointScheme,
    up_to: Option<usize>,
) -> Result<HilbertFunction, OracleError> {
    let degree = z.degree();
    match up_to {
        Some(cap) => {
            let values: Vec<usize> =
                (0..=cap).map(|t| ConditionsMatrix::build(z, t).rank()).collect();
            debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
            Ok(HilbertFunction::new(values, degree))
        }
        None => {
            let cap = z.multiplicity_sum() + 1;
            let mut values = Vec::new();
            for t in 0..=cap {
                let h = ConditionsMatrix::build(z, t).rank();
                if let Some(&prev) = values.last() {
                    debug_assert!(h >= prev, "Hilbert function must be nondecreasing");
                }
                values.push(h);
                if h == degree {
                    return Ok(HilbertFunction::new(values, degree));
                }
            }
            Err(OracleError::CapExceeded { cap })
        }
    }
}

/// First difference of the oracle Hilbert function of a nonempty scheme.
pub fn delta_hf(z: &FatPointScheme) -> Result<DeltaH, OracleError> {
    assert!(!z.is_empty(), "first difference is defined for nonempty schemes");
    let h = hilbert_function(z, None)?;
    Ok(h.first_difference()
        .expect("the first difference of a fat point Hilbert function is always valid"))
}
