//! Acceptance suite: every criterion below runs as its own test and prints
//! one `PASS`/`FAIL` line (visible with `cargo test -- --nocapture`).
//!
//! All assertions are exact: the arithmetic is rational throughout, so no
//! tolerance is involved anywhere except the asymptotic ratio band, which is
//! itself an exact rational comparison.

use fatpoints::builder::{
    all_doubles_criterion, construct, construct_with_inspector, double_bounds,
    generic_double_yield, near_star_scheme, predicted_double_count,
    staircase_conjugate_criterion, star_scheme,
};
use fatpoints::geometry::{random_point_off_lines, Rational};
use fatpoints::hf::{binomial, random_valid_delta, star_delta, star_plus_point_delta, DeltaH};
use fatpoints::oracle;
use fatpoints::rng::SplitMix64;
use fatpoints::{FatPointScheme, ProjLine, ProjPoint};

fn report(number: usize, description: &str, check: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(check) {
        Ok(()) => println!("criterion {number:>2}: PASS - {description}"),
        Err(cause) => {
            println!("criterion {number:>2}: FAIL - {description}");
            std::panic::resume_unwind(cause);
        }
    }
}

/// Deterministic randomized suite shared by the merge-invariance and count
/// criteria.
fn sample_suite(seed: u64, count: usize, max_sigma: usize, max_sum: usize) -> Vec<(DeltaH, u64)> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let d = random_valid_delta(&mut rng, max_sigma, max_sum);
            let construction_seed = rng.next_u64();
            (d, construction_seed)
        })
        .collect()
}

/// Runs `f` over the items on two worker threads pulling from a shared
/// queue (the verification of independent schemes is embarrassingly parallel
/// and every type involved is immutable).
fn for_each_parallel<T: Sync>(items: &[T], f: impl Fn(&T) + Sync) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..2 {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(idx) else { break };
                f(item);
            });
        }
    });
}

const MERGE_SUITE_SEED: u64 = 0xfa7_90125;

#[test]
fn criterion_01_conjugate_golden() {
    report(1, "conjugate of (1,2,3,4,4,3,1) is exactly (7,5,4,2)", || {
        let d = DeltaH::new(&[1, 2, 3, 4, 4, 3, 1]).unwrap();
        assert_eq!(d.conjugate().parts(), &[7, 5, 4, 2]);
        assert_eq!(d.alpha(), 4);
    });
}

#[test]
fn criterion_02_reduction_vector_golden() {
    report(
        2,
        "triple-triple-double scheme reduces to (6,4,3,2), closed form = rank oracle, stable 15",
        || {
            let p1 = ProjPoint::from_integers(0, 0, 1).unwrap();
            let p2 = ProjPoint::from_integers(1, 0, 1).unwrap();
            let p3 = ProjPoint::from_integers(0, 1, 1).unwrap();
            let z = FatPointScheme::new(vec![
                (p1.clone(), 3),
                (p2.clone(), 3),
                (p3.clone(), 2),
            ])
            .unwrap();
            let l12 = ProjLine::through(&p1, &p2).unwrap();
            let l13 = ProjLine::through(&p1, &p3).unwrap();
            let l23 = ProjLine::through(&p2, &p3).unwrap();
            let rv = z.reduction_vector(&[l12.clone(), l12, l13, l23]);
            assert_eq!(rv.entries, vec![6, 4, 3, 2]);
            assert!(rv.full);

            let closed = rv.hilbert_function().unwrap();
            let brute = oracle::hilbert_function(&z, None).unwrap();
            assert_eq!(closed, brute);
            assert_eq!(closed.stable_value(), 15);
            assert_eq!(z.degree(), 15);
        },
    );
}

#[test]
fn criterion_03_construction_goldens() {
    report(
        3,
        "constructions for (1,2,3,4,2), (1,2,2,1), (1,2,3,4,5,6,2,2,1,1) match the golden shapes",
        || {
            for seed in [1u64, 77] {
                let d = DeltaH::new(&[1, 2, 3, 4, 2]).unwrap();
                let (z, _) = construct(&d, seed, None).unwrap();
                assert_eq!(z.double_count(), 3);
                assert_eq!(z.reduced_count(), 3);
                assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), d);
            }

            let d = DeltaH::new(&[1, 2, 2, 1]).unwrap();
            let (z, _) = construct(&d, 3, None).unwrap();
            assert_eq!(z.double_count(), 1);
            assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), d);

            let d = DeltaH::new(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1]).unwrap();
            let (z, _) = construct(&d, 5, None).unwrap();
            assert_eq!(z.double_count(), 9);
            assert_eq!(z.reduced_count(), 0);
            assert_eq!(
                z.double_pairs(),
                &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (2, 5), (3, 4)]
            );
            assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), d);
        },
    );
}

#[test]
fn criterion_04_merge_invariance() {
    report(
        4,
        "50 random inputs (sum <= 40): oracle first difference unchanged after every merge",
        || {
            let suite = sample_suite(MERGE_SUITE_SEED, 50, 12, 40);
            for_each_parallel(&suite, |(d, seed)| {
                construct_with_inspector(d, *seed, None, |z| {
                    assert_eq!(
                        oracle::delta_hf(&z.to_scheme()).unwrap(),
                        *d,
                        "merge changed the Hilbert function for input {d}"
                    );
                })
                .unwrap();
            });
        },
    );
}

#[test]
fn criterion_05_double_count_agreement() {
    report(
        5,
        "same suite: construction double count equals the closed-form prediction, within bounds",
        || {
            let suite = sample_suite(MERGE_SUITE_SEED, 50, 12, 40);
            for (d, seed) in &suite {
                let (z, trace) = construct(d, *seed, None).unwrap();
                let predicted = predicted_double_count(d);
                assert_eq!(z.double_count(), predicted, "input {d}");
                assert_eq!(trace.doubles, predicted);
                assert_eq!(z.reduced_count(), d.sum() - 3 * predicted);
                let (lower, upper) = double_bounds(d);
                assert!(lower <= predicted && predicted <= upper, "input {d}");
            }
        },
    );
}

#[test]
fn criterion_06_early_stop_sweep() {
    report(
        6,
        "10 random inputs: every budget 1 <= e <= prediction yields e doubles, oracle-verified",
        || {
            let suite = sample_suite(0xeeab5, 10, 8, 28);
            for_each_parallel(&suite, |(d, seed)| {
                let predicted = predicted_double_count(d);
                for e in 1..=predicted {
                    let (z, trace) = construct(d, *seed, Some(e)).unwrap();
                    assert_eq!(z.double_count(), e, "input {d}, budget {e}");
                    assert_eq!(z.reduced_count(), d.sum() - 3 * e);
                    assert_eq!(trace.doubles, e);
                    assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), *d);
                }
            });
        },
    );
}

#[test]
fn criterion_07_all_doubles_criteria() {
    report(
        7,
        "all-doubles criterion holds for the golden family, outputs have zero reduced points",
        || {
            let nine = DeltaH::new(&[1, 2, 3, 4, 5, 6, 2, 2, 1, 1]).unwrap();
            assert!(all_doubles_criterion(&nine));
            let (z, _) = construct(&nine, 2, None).unwrap();
            assert_eq!(z.reduced_count(), 0);

            for t in 3..=6 {
                let d = star_delta(t);
                assert!(all_doubles_criterion(&d), "star t={t}");
                let (z, _) = construct(&d, t as u64, None).unwrap();
                assert_eq!(z.reduced_count(), 0, "star t={t}");
                assert_eq!(z.double_count(), binomial(t + 1, 2));
            }

            // The staircase-conjugate condition implies the all-doubles one.
            let mut rng = SplitMix64::new(31337);
            for _ in 0..500 {
                let d = random_valid_delta(&mut rng, 12, 60);
                if staircase_conjugate_criterion(&d) {
                    assert!(all_doubles_criterion(&d), "input {d}");
                }
            }
            // And the implication is strict.
            assert!(!staircase_conjugate_criterion(&nine));
        },
    );
}

#[test]
fn criterion_08_star_family() {
    report(8, "star double points realize the star shape exactly for t = 1..6", || {
        let inputs: Vec<usize> = (1..=6).collect();
        for_each_parallel(&inputs, |&t| {
            let z = star_scheme(t, 0xa11ce + t as u64).unwrap();
            assert_eq!(z.double_count(), binomial(t + 1, 2));
            assert_eq!(oracle::delta_hf(&z.to_scheme()).unwrap(), star_delta(t), "t={t}");
        });
    });
}

#[test]
fn criterion_09_star_plus_point() {
    report(
        9,
        "star plus a point on a line appends a 1; a point off all lines bumps degree t+1",
        || {
            let cases: Vec<usize> = vec![3, 4];
            for_each_parallel(&cases, |&t| {
                let star = star_scheme(t, 0xbee + t as u64).unwrap();

                let on_line = star.with_extra_reduced_point(1, 0xcafe + t as u64).unwrap();
                assert_eq!(
                    oracle::delta_hf(&on_line.to_scheme()).unwrap(),
                    star_plus_point_delta(t),
                    "t={t} point on line"
                );

                let off = random_point_off_lines(star.arrangement().lines(), 0xd00d + t as u64)
                    .unwrap();
                let bumped = star.to_scheme().with_point(off, 1).unwrap();
                let dh = oracle::delta_hf(&bumped).unwrap();
                assert_eq!(dh.values()[t + 1], t + 2, "t={t} point off all lines, got {dh}");
            });
        },
    );
}

#[test]
fn criterion_10_near_star_dimensions() {
    report(
        10,
        "near-star ideal dimensions: t=3 gives 2 at degree 5; t=4 gives 2 at 6 and 5 at 7",
        || {
            let cases: Vec<usize> = vec![3, 4];
            for_each_parallel(&cases, |&t| {
                let z = near_star_scheme(t, 0xface + t as u64).unwrap();
                // Degree t+2 always carries exactly a pencil's worth of curves.
                assert_eq!(oracle::ideal_dimension(&z, t + 2), 2, "t={t} at degree t+2");
                // Degree 2t-1 is not defective: C(t,2) - 1.
                assert_eq!(
                    oracle::ideal_dimension(&z, 2 * t - 1),
                    binomial(t, 2) - 1,
                    "t={t} at degree 2t-1"
                );
            });
        },
    );
}

#[test]
fn criterion_11_perturbation_falsification() {
    report(
        11,
        "displacing any one star double point off its intersection changes the Hilbert function",
        || {
            let cases: Vec<(usize, u64)> = (0..5u64)
                .flat_map(|round| [(3usize, round), (4usize, round)])
                .collect();
            for_each_parallel(&cases, |&(t, round)| {
                let star = star_scheme(t, 0x57a6 + t as u64).unwrap();
                let scheme = star.to_scheme();
                let doubles = scheme.points().len();
                let victim = (round as usize * 7 + t) % doubles;
                let replacement = random_point_off_lines(
                    star.arrangement().lines(),
                    0x9e0 + 31 * round + t as u64,
                )
                .unwrap();
                let perturbed: Vec<(ProjPoint, usize)> = scheme
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(idx, (p, m))| {
                        if idx == victim {
                            (replacement.clone(), *m)
                        } else {
                            (p.clone(), *m)
                        }
                    })
                    .collect();
                let moved = FatPointScheme::new(perturbed).unwrap();
                assert_ne!(
                    oracle::delta_hf(&moved).unwrap(),
                    star_delta(t),
                    "t={t} round={round}: perturbed star kept the star Hilbert function"
                );
            });
        },
    );
}

#[test]
fn criterion_12_asymptotic_yield() {
    report(
        12,
        "yield matches (b+1)(b+3)/8 for odd b <= 99; ratio stays within 0.05 of 3/4 for t >= 200",
        || {
            for b in (3..=99usize).step_by(2) {
                let base = binomial(b + 2, 2);
                for eps in 0..=b + 1 {
                    if !(base + eps).is_multiple_of(3) {
                        continue;
                    }
                    let t = (base + eps) / 3;
                    if t == 2 || t == 5 {
                        continue;
                    }
                    assert_eq!(
                        generic_double_yield(t).unwrap(),
                        (b + 1) * (b + 3) / 8,
                        "b={b} eps={eps} t={t}"
                    );
                }
            }

            let target = Rational::new(3.into(), 4.into());
            let band = Rational::new(1.into(), 20.into());
            for t in 200..=2000usize {
                let s = generic_double_yield(t).unwrap();
                let ratio = Rational::new((s as i64).into(), (t as i64).into());
                let gap = if ratio > target { &ratio - &target } else { &target - &ratio };
                assert!(gap <= band, "t={t}: ratio {ratio} leaves the band");
            }
        },
    );
}

#[test]
fn criterion_13_cross_engine_equivalence() {
    report(
        13,
        "100 constructed schemes: closed-form Hilbert function equals the rank oracle entrywise",
        || {
            let suite = sample_suite(0xc0de, 100, 8, 30);
            for_each_parallel(&suite, |(d, seed)| {
                let (z, _) = construct(d, *seed, None).unwrap();
                let rv = z.reduction_vector();
                assert!(rv.full && rv.is_strictly_decreasing(), "input {d}");
                let closed = rv.hilbert_function().unwrap();
                let brute = oracle::hilbert_function(&z.to_scheme(), None).unwrap();
                assert_eq!(closed, brute, "input {d}");
            });
        },
    );
}
