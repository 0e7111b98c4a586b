//! Property tests for the algebraic invariants of the analysis pipeline.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use ambit_core::evidence::{
    belief, choquet_lower_expectation, expected_utility_interval, lower_expected_utility,
    nonspecificity, pignistic, upper_expected_utility, Alternative, MassFunction, UtilityFrame,
    UtilityInterval,
};
use ambit_core::game::{first_mover_pref, pref_among, second_mover_pref};
use ambit_core::oracle::{grid_winner_map, winner_at};
use ambit_core::preference::{
    crossing_point, filter_nested_chain, pref_uniform, pref_with_distribution,
    pref_with_distribution_normalized, preference_segments, preferred_choice, CrossingPoints,
    NestedChain, RhoDistribution,
};

fn label(i: usize) -> String {
    format!("o{i}")
}

fn arb_frame(n: usize) -> impl Strategy<Value = UtilityFrame> {
    prop::collection::vec(-10.0..10.0f64, n).prop_map(|utilities| {
        UtilityFrame::new(
            utilities
                .into_iter()
                .enumerate()
                .map(|(i, u)| (label(i), u))
                .collect(),
        )
        .unwrap()
    })
}

fn arb_bpa(n: usize) -> impl Strategy<Value = MassFunction> {
    let max_mask = (1u64 << n) - 1;
    prop::collection::vec((1..=max_mask, 0.01..1.0f64), 1..=20).prop_map(move |raw| {
        let mut by_mask: BTreeMap<u64, f64> = BTreeMap::new();
        for (mask, weight) in raw {
            *by_mask.entry(mask).or_insert(0.0) += weight;
        }
        let total: f64 = by_mask.values().sum();
        MassFunction::new(
            by_mask
                .into_iter()
                .map(|(mask, weight)| {
                    let subset: BTreeSet<String> =
                        (0..n).filter(|i| mask & (1 << i) != 0).map(label).collect();
                    (subset, weight / total)
                })
                .collect(),
        )
        .unwrap()
    })
}

fn arb_frame_and_bpa() -> impl Strategy<Value = (UtilityFrame, MassFunction)> {
    (1..=6usize).prop_flat_map(|n| (arb_frame(n), arb_bpa(n)))
}

/// Strictly nested intervals, innermost first; every step widens both ends
/// so all of them survive filtering.
fn arb_chain_intervals(max_extra: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    (
        -5.0..5.0f64,
        0.0..2.0f64,
        prop::collection::vec((0.01..0.5f64, 0.01..0.5f64), 0..=max_extra),
    )
        .prop_map(|(lo, len, increments)| {
            let mut intervals = vec![(lo, lo + len)];
            let (mut l, mut u) = (lo, lo + len);
            for (dl, du) in increments {
                l -= dl;
                u += du;
                intervals.push((l, u));
            }
            intervals
        })
}

fn chain_of(intervals: &[(f64, f64)]) -> (NestedChain, CrossingPoints) {
    let alternatives: Vec<Alternative> = intervals
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            Alternative::from_interval(i + 1, label(i), UtilityInterval::new(lo, hi).unwrap())
                .unwrap()
        })
        .collect();
    let chain = filter_nested_chain(&alternatives).unwrap();
    assert_eq!(
        chain.len(),
        intervals.len(),
        "nested family must survive intact"
    );
    let crossings = CrossingPoints::compute(&chain).unwrap();
    (chain, crossings)
}

fn arb_distribution() -> impl Strategy<Value = RhoDistribution> {
    let bounded = (0.0..0.9f64, 0.01..1.0f64).prop_map(|(lower, width)| {
        let upper = (lower + width).min(1.0);
        RhoDistribution::bounded(lower, upper).unwrap()
    });
    let piecewise = (
        prop::collection::vec(0.0..1.0f64, 0..6),
        prop::collection::vec(0.0..1.0f64, 0..6),
    )
        .prop_map(|(mut xs, mut fs)| {
            // Matching sorted abscissas with sorted cumulative values gives
            // a valid cdf; equal abscissas encode jumps.
            let k = xs.len().min(fs.len());
            xs.truncate(k);
            fs.truncate(k);
            xs.sort_by(f64::total_cmp);
            fs.sort_by(f64::total_cmp);
            let mut knots = vec![(0.0, 0.0)];
            knots.extend(xs.into_iter().zip(fs));
            knots.push((1.0, 1.0));
            RhoDistribution::piecewise_cdf(knots).unwrap()
        });
    prop_oneof![Just(RhoDistribution::Uniform), bounded, piecewise,]
}

fn total_mass(dist: &RhoDistribution) -> f64 {
    match dist {
        RhoDistribution::Bounded { lower, upper } => upper - lower,
        _ => 1.0,
    }
}

#[test]
fn domain_types_are_shareable_across_threads() {
    fn check<T: Send + Sync>() {}
    check::<UtilityFrame>();
    check::<MassFunction>();
    check::<UtilityInterval>();
    check::<Alternative>();
    check::<NestedChain>();
    check::<CrossingPoints>();
    check::<RhoDistribution>();
    check::<ambit_core::preference::PreferenceSegments>();
    check::<ambit_core::preference::PreferenceReport>();
    check::<ambit_core::game::GameSolution>();
    check::<ambit_core::oracle::WinnerMap>();
    check::<ambit_core::oracle::McReport>();
}

proptest! {
    #[test]
    fn lower_never_exceeds_upper((frame, m) in arb_frame_and_bpa()) {
        let lo = lower_expected_utility(&m, &frame).unwrap();
        let hi = upper_expected_utility(&m, &frame).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }

    #[test]
    fn interpolation_is_affine_and_monotone(
        (frame, m) in arb_frame_and_bpa(),
        rho_a in 0.0..1.0f64,
        rho_b in 0.0..1.0f64,
    ) {
        let interval = expected_utility_interval(&m, &frame).unwrap();
        let at = |rho: f64| interval.at(rho).unwrap();
        let affine = at(0.0) + rho_a * (at(1.0) - at(0.0));
        prop_assert!((at(rho_a) - affine).abs() <= 1e-9);
        let (lo, hi) = if rho_a <= rho_b { (rho_a, rho_b) } else { (rho_b, rho_a) };
        prop_assert!(at(lo) <= at(hi) + 1e-12);
    }

    #[test]
    fn pignistic_dominates_belief((frame, m) in arb_frame_and_bpa()) {
        let n = frame.len();
        let singleton_probs: Vec<f64> = (0..n)
            .map(|i| pignistic(&m, &frame, &label(i)).unwrap())
            .collect();
        prop_assert!((singleton_probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for mask in 0u64..(1 << n) {
            let subset: BTreeSet<String> =
                (0..n).filter(|i| mask & (1 << i) != 0).map(label).collect();
            let bet: f64 = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| singleton_probs[i])
                .sum();
            let bel = belief(&m, &frame, &subset).unwrap();
            prop_assert!(bet + 1e-9 >= bel, "BetP {bet} < Bel {bel}");
        }
    }

    #[test]
    fn choquet_agrees_with_lower_expectation((frame, m) in arb_frame_and_bpa()) {
        let choquet = choquet_lower_expectation(&m, &frame).unwrap();
        let lower = lower_expected_utility(&m, &frame).unwrap();
        prop_assert!((choquet - lower).abs() <= 1e-9, "choquet {choquet} vs lower {lower}");
    }

    #[test]
    fn nonspecificity_is_maximal_only_when_vacuous((frame, m) in arb_frame_and_bpa()) {
        let n = frame.len();
        let bound = (n as f64).log2();
        let value = nonspecificity(&m);
        prop_assert!(value >= -1e-12 && value <= bound + 1e-12);
        let vacuous = m.focal_elements().len() == 1
            && m.focal_elements()[0].subset().len() == n;
        if vacuous {
            prop_assert!((value - bound).abs() <= 1e-12);
        } else {
            prop_assert!(value < bound);
            // Same statement through the ratio form: the mass-weighted sum
            // of log2(|A| / N) is strictly negative off the vacuous case.
            let ratio_sum: f64 = m
                .focal_elements()
                .iter()
                .map(|fe| fe.mass() * (fe.subset().len() as f64 / n as f64).log2())
                .sum();
            prop_assert!(ratio_sum < 0.0);
        }
    }

    #[test]
    fn crossing_point_lies_in_unit_range(
        lo in -5.0..5.0f64,
        len in 0.0..2.0f64,
        dl in 0.001..1.0f64,
        du in 0.001..1.0f64,
    ) {
        let inner = UtilityInterval::new(lo, lo + len).unwrap();
        let outer = UtilityInterval::new(lo - dl, lo + len + du).unwrap();
        let rho = crossing_point(inner, outer).unwrap();
        prop_assert!((0.0..=1.0).contains(&rho));
        // Both interpolations agree at the crossing.
        let diff = (inner.at(rho).unwrap() - outer.at(rho).unwrap()).abs();
        prop_assert!(diff <= 1e-9, "gap {diff} at rho {rho}");
    }

    #[test]
    fn segments_match_the_grid_oracle(intervals in arb_chain_intervals(7)) {
        let (chain, crossings) = chain_of(&intervals);
        let segments = preference_segments(&chain, &crossings).unwrap();

        // Structure: a contiguous partition of [0, 1] with strictly rising
        // owners of strictly positive width.
        let segs = segments.segments();
        prop_assert_eq!(segs[0].lo, 0.0);
        prop_assert_eq!(segs[segs.len() - 1].hi, 1.0);
        for pair in segs.windows(2) {
            prop_assert_eq!(pair[0].hi, pair[1].lo);
            prop_assert!(pair[0].choice < pair[1].choice);
        }
        for s in segs {
            prop_assert!(s.hi > s.lo);
        }

        let step = 1e-4;
        let map = grid_winner_map(&chain, step).unwrap();
        let boundaries: Vec<f64> = segments.segments().iter().map(|s| s.hi).collect();
        for (t, &winner) in map.winners.iter().enumerate() {
            let rho = map.rho_at(t);
            if boundaries.iter().any(|b| (b - rho).abs() <= step) {
                continue;
            }
            prop_assert_eq!(winner, segments.owner_at(rho), "rho {}", rho);
        }
    }

    #[test]
    fn preferences_sum_to_the_distribution_mass(
        intervals in arb_chain_intervals(7),
        dist in arb_distribution(),
    ) {
        let (chain, crossings) = chain_of(&intervals);
        let total: f64 = (1..=chain.len())
            .map(|j| pref_with_distribution(&chain, &crossings, j, &dist).unwrap())
            .sum();
        prop_assert!((total - total_mass(&dist)).abs() <= 1e-9, "total {total}");
        let normalized: f64 = (1..=chain.len())
            .map(|j| pref_with_distribution_normalized(&chain, &crossings, j, &dist).unwrap())
            .sum();
        prop_assert!((normalized - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn discarded_alternatives_never_win(
        raw in prop::collection::vec(((-5.0..5.0f64), (0.0..2.0f64)), 1..=8),
        dist in arb_distribution(),
    ) {
        let alternatives: Vec<Alternative> = raw
            .iter()
            .enumerate()
            .map(|(i, &(lo, len))| {
                Alternative::from_interval(
                    i + 1,
                    label(i),
                    UtilityInterval::new(lo, lo + len).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let report = preferred_choice(&alternatives, &dist).unwrap();
        let kept: Vec<usize> = report.chain.choices().iter().map(|c| c.original_id).collect();

        // Discarded alternatives carry zero preference under any
        // distribution...
        for &(id, pref) in &report.alternative_prefs {
            if !kept.contains(&id) {
                prop_assert_eq!(pref, 0.0);
            }
        }
        // ...because some kept alternative matches or beats them at every
        // rho: the best kept utility equals the best overall utility.
        for t in 0..=1000 {
            let rho = t as f64 / 1000.0;
            let best_all = alternatives
                .iter()
                .map(|a| a.interval.at(rho).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            let best_kept = report
                .chain
                .choices()
                .iter()
                .map(|c| c.interval.at(rho).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(best_kept >= best_all - 1e-12);
        }
    }

    #[test]
    fn point_mass_concentrates_on_the_grid_winner(
        intervals in arb_chain_intervals(7),
        rho in 0.0..1.0f64,
    ) {
        let (chain, crossings) = chain_of(&intervals);
        // Stay away from crossing points, where the atom convention rules.
        for i in 1..=chain.len() {
            for j in (i + 1)..=chain.len() {
                prop_assume!((crossings.rho(i, j).unwrap() - rho).abs() > 1e-3);
            }
        }
        let dist = RhoDistribution::point_mass(rho).unwrap();
        let winner = winner_at(&chain, rho);
        for j in 1..=chain.len() {
            let pref = pref_with_distribution(&chain, &crossings, j, &dist).unwrap();
            if j == winner {
                prop_assert!((pref - 1.0).abs() <= 1e-12);
            } else {
                prop_assert_eq!(pref, 0.0);
            }
        }
    }

    #[test]
    fn pref_among_members_partition_the_unit_range(
        intervals in arb_chain_intervals(6),
        mask in 1u64..256,
    ) {
        let (chain, crossings) = chain_of(&intervals);
        let members: Vec<usize> =
            (1..=chain.len()).filter(|j| mask & (1 << (j - 1)) != 0).collect();
        prop_assume!(!members.is_empty());
        let total: f64 = members
            .iter()
            .map(|&j| pref_among(&chain, &crossings, j, &members).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-9, "total {total}");
    }

    #[test]
    fn adding_competitors_never_helps(
        intervals in arb_chain_intervals(6),
        mask_small in 0u64..256,
        mask_extra in 0u64..256,
        pick in 0usize..8,
    ) {
        let (chain, crossings) = chain_of(&intervals);
        let n = chain.len();
        let j = pick % n + 1;
        let jbit = 1u64 << (j - 1);
        let valid = (1u64 << n) - 1;
        let small = (mask_small | jbit) & valid;
        let large = (small | mask_extra) & valid;
        let members = |mask: u64| -> Vec<usize> {
            (1..=n).filter(|c| mask & (1 << (c - 1)) != 0).collect()
        };
        let p_small = pref_among(&chain, &crossings, j, &members(small)).unwrap();
        let p_large = pref_among(&chain, &crossings, j, &members(large)).unwrap();
        prop_assert!(p_large <= p_small + 1e-12);
    }

    #[test]
    fn second_mover_directions_complement(
        intervals in arb_chain_intervals(6),
        a in 0usize..8,
        b in 0usize..8,
    ) {
        let (chain, crossings) = chain_of(&intervals);
        let n = chain.len();
        let (j, k) = (a % n + 1, b % n + 1);
        prop_assume!(j != k);
        let forward = second_mover_pref(&chain, &crossings, j, k).unwrap();
        let backward = second_mover_pref(&chain, &crossings, k, j).unwrap();
        prop_assert!((forward + backward - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn first_mover_equals_the_worst_best_response(
        intervals in arb_chain_intervals(6),
        pick in 0usize..8,
    ) {
        let (chain, crossings) = chain_of(&intervals);
        let n = chain.len();
        prop_assume!(n >= 2);
        let j = pick % n + 1;
        let value = first_mover_pref(&chain, &crossings, j).unwrap();

        // Enumerate the opponent's replies; their best responses all leave
        // us the same preference, which is the guarantee.
        let mut best_reply = f64::NEG_INFINITY;
        for k in (1..=n).filter(|&k| k != j) {
            let reply = pref_among(&chain, &crossings, k, &[j, k]).unwrap();
            best_reply = best_reply.max(reply);
        }
        let mut ours = f64::INFINITY;
        for k in (1..=n).filter(|&k| k != j) {
            let reply = pref_among(&chain, &crossings, k, &[j, k]).unwrap();
            if (reply - best_reply).abs() <= 1e-9 {
                ours = ours.min(pref_among(&chain, &crossings, j, &[j, k]).unwrap());
            }
        }
        prop_assert!((value - ours).abs() <= 1e-9, "formula {value} vs enumerated {ours}");
    }

    #[test]
    fn uniform_pref_is_pref_among_everyone(intervals in arb_chain_intervals(7)) {
        let (chain, crossings) = chain_of(&intervals);
        let everyone: Vec<usize> = (1..=chain.len()).collect();
        for j in 1..=chain.len() {
            let uniform = pref_uniform(&chain, &crossings, j).unwrap();
            let among = pref_among(&chain, &crossings, j, &everyone).unwrap();
            prop_assert!((uniform - among).abs() <= 1e-12);
        }
    }
}
