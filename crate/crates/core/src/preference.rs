//! Which choice is preferred on which sub-range of rho, and with what
//! probability.
//!
//! After discarding dominated alternatives the survivors form a chain of
//! nested utility intervals, renumbered `1..=n` by increasing interval
//! length. For each nested pair there is a single crossing point: the rho
//! at which the two interpolated expected utilities are equal. Below it the
//! inner (shorter) interval wins, above it the outer one does. Iterating
//! over crossing points partitions `[0, 1]` into preference segments, and
//! the probability that a choice is the best one is the mass a rho
//! distribution puts on its segment.

use crate::error::{Error, Result};
use crate::evidence::{Alternative, UtilityInterval};
use crate::TOLERANCE;

/// One entry of a [`NestedChain`]: the original alternative id and its
/// interval. The position in the chain is the choice number.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainChoice {
    pub original_id: usize,
    pub interval: UtilityInterval,
}

/// Non-dominated alternatives ordered by increasing interval length, so
/// that each interval is included in the next.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedChain {
    choices: Vec<ChainChoice>,
}

impl NestedChain {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn choices(&self) -> &[ChainChoice] {
        &self.choices
    }

    /// The entry for 1-based choice number `number`.
    pub fn choice(&self, number: usize) -> Result<&ChainChoice> {
        if number == 0 || number > self.choices.len() {
            return Err(Error::ChoiceOutOfRange {
                choice: number,
                len: self.choices.len(),
            });
        }
        Ok(&self.choices[number - 1])
    }

    pub fn interval(&self, number: usize) -> Result<UtilityInterval> {
        Ok(self.choice(number)?.interval)
    }
}

/// The rho at which two nested choices have equal interpolated expected
/// utility.
///
/// `inner` must be included in `outer` with strictly smaller length; the
/// result is then guaranteed to lie in `[0, 1]`. A pair of equal length has
/// no unique crossing and is rejected; a non-nested pair is ordered by
/// dominance and must be filtered out instead.
pub fn crossing_point(inner: UtilityInterval, outer: UtilityInterval) -> Result<f64> {
    if !outer.contains_interval(&inner) {
        return Err(Error::IntervalsNotNested);
    }
    let denominator = outer.length() - inner.length();
    if denominator <= TOLERANCE {
        return Err(Error::DegenerateIntervalPair);
    }
    let rho = (inner.lower() - outer.lower()) / denominator;
    debug_assert!((-TOLERANCE..=1.0 + TOLERANCE).contains(&rho));
    Ok(rho.clamp(0.0, 1.0))
}

/// Discards dominated alternatives and renumbers the survivors by
/// increasing interval length.
///
/// Walking the alternatives by falling upper bound, an alternative is kept
/// only if its lower bound strictly exceeds the last kept one's; everything
/// discarded this way is weakly dominated by some kept alternative at every
/// rho. Ties on the upper bound are walked in order of falling lower bound
/// so the dominating interval is seen first; exact duplicates keep the
/// highest original id. Survivors whose lengths agree within tolerance are
/// effectively identical intervals: only the highest-numbered one is kept,
/// so crossing points are defined for every surviving pair.
pub fn filter_nested_chain(alternatives: &[Alternative]) -> Result<NestedChain> {
    if alternatives.is_empty() {
        return Err(Error::NoAlternatives);
    }
    let mut order: Vec<&Alternative> = alternatives.iter().collect();
    order.sort_by(|a, b| {
        b.interval
            .upper()
            .total_cmp(&a.interval.upper())
            .then(b.interval.lower().total_cmp(&a.interval.lower()))
            .then(b.id.cmp(&a.id))
    });

    // Keep order: outermost interval first, lower bounds strictly rising.
    let mut kept: Vec<&Alternative> = Vec::new();
    for alt in order {
        match kept.last() {
            Some(last) if alt.interval.lower() <= last.interval.lower() => {}
            _ => kept.push(alt),
        }
    }

    // Chain order is the reverse: increasing interval length. Drop the
    // earlier member of any near-equal-length pair (float noise can leave
    // two practically identical intervals alive).
    kept.reverse();
    let mut choices: Vec<ChainChoice> = Vec::new();
    for alt in kept {
        if let Some(last) = choices.last() {
            if alt.interval.length() - last.interval.length() <= TOLERANCE {
                choices.pop();
            }
        }
        choices.push(ChainChoice {
            original_id: alt.id,
            interval: alt.interval,
        });
    }
    Ok(NestedChain { choices })
}

/// The crossing points of every nested pair of a chain, indexed by 1-based
/// choice numbers `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingPoints {
    n: usize,
    rho: Vec<f64>,
}

impl CrossingPoints {
    pub fn compute(chain: &NestedChain) -> Result<Self> {
        let n = chain.len();
        let mut rho = Vec::with_capacity(n * (n - 1) / 2);
        for i in 1..=n {
            for j in (i + 1)..=n {
                rho.push(crossing_point(
                    chain.choices[i - 1].interval,
                    chain.choices[j - 1].interval,
                )?);
            }
        }
        Ok(Self { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The crossing point of choices `i < j`.
    pub fn rho(&self, i: usize, j: usize) -> Result<f64> {
        if i == 0 || j <= i || j > self.n {
            return Err(Error::ChoiceOutOfRange {
                choice: j.max(i),
                len: self.n,
            });
        }
        Ok(self.rho_unchecked(i, j))
    }

    fn rho_unchecked(&self, i: usize, j: usize) -> f64 {
        self.rho[(i - 1) * (2 * self.n - i) / 2 + (j - i - 1)]
    }

    fn check_chain(&self, chain: &NestedChain) -> Result<()> {
        if chain.len() != self.n {
            return Err(Error::CrossingSizeMismatch {
                crossings: self.n,
                chain: chain.len(),
            });
        }
        Ok(())
    }
}

/// A contiguous partition of `[0, 1]` into the sub-ranges of rho on which
/// each surviving choice has the highest interpolated expected utility.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceSegments {
    segments: Vec<Segment>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// 1-based choice number owning this sub-range.
    pub choice: usize,
    pub lo: f64,
    pub hi: f64,
}

impl PreferenceSegments {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The segment containing `rho` (boundaries resolve to the later,
    /// higher-numbered segment).
    pub fn owner_at(&self, rho: f64) -> usize {
        let mut owner = self.segments[0].choice;
        for segment in &self.segments {
            if rho >= segment.lo {
                owner = segment.choice;
            }
        }
        owner
    }
}

/// Builds the preference segments of a chain by iterating over crossing
/// points: starting from choice 1 at rho 0, repeatedly jump to the choice
/// whose crossing with the current one comes first. A tie in that minimum
/// goes to the highest choice number, since the skipped choices would only
/// ever be preferred on a zero-length range.
pub fn preference_segments(
    chain: &NestedChain,
    crossings: &CrossingPoints,
) -> Result<PreferenceSegments> {
    crossings.check_chain(chain)?;
    let n = chain.len();
    let mut segments = Vec::new();
    let mut current = 1;
    let mut lo = 0.0;
    while current < n {
        let min = ((current + 1)..=n)
            .map(|j| crossings.rho_unchecked(current, j))
            .fold(f64::INFINITY, f64::min);
        let next = ((current + 1)..=n)
            .filter(|&j| crossings.rho_unchecked(current, j) <= min + TOLERANCE)
            .max()
            .expect("nonempty candidate range");
        let hi = crossings.rho_unchecked(current, next);
        segments.push(Segment {
            choice: current,
            lo,
            hi,
        });
        lo = hi;
        current = next;
    }
    segments.push(Segment {
        choice: current,
        lo,
        hi: 1.0,
    });
    Ok(PreferenceSegments { segments })
}

/// A probability distribution for the ambiguity parameter rho.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoDistribution {
    /// No information beyond `rho` lying in `[0, 1]`.
    Uniform,
    /// Known bounds `0 <= lower < upper <= 1` on rho.
    Bounded { lower: f64, upper: f64 },
    /// An arbitrary distribution given by its cumulative distribution
    /// function as piecewise-linear knots.
    PiecewiseCdf(PiecewiseCdf),
}

impl RhoDistribution {
    pub fn uniform() -> Self {
        Self::Uniform
    }

    pub fn bounded(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite()
            && upper.is_finite()
            && 0.0 <= lower
            && lower < upper
            && upper <= 1.0)
        {
            return Err(Error::InvalidRhoBounds { lower, upper });
        }
        Ok(Self::Bounded { lower, upper })
    }

    pub fn piecewise_cdf(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Self::PiecewiseCdf(PiecewiseCdf::new(knots)?))
    }

    /// All mass on a single rho, encoded as a cdf jump.
    pub fn point_mass(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && (0.0..=1.0).contains(&rho)) {
            return Err(Error::RhoOutOfRange(rho));
        }
        let mut knots = Vec::new();
        if rho > 0.0 {
            knots.push((0.0, 0.0));
        }
        knots.push((rho, 0.0));
        knots.push((rho, 1.0));
        if rho < 1.0 {
            knots.push((1.0, 1.0));
        }
        Self::piecewise_cdf(knots)
    }
}

/// A cumulative distribution function for rho, as linear interpolation
/// between knots. A point mass is a jump: two knots at the same rho.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCdf {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseCdf {
    /// Validates knots: sorted by rho over exactly `[0, 1]`, cumulative
    /// values nondecreasing from 0 to 1.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidCdf("at least two knots required".into()));
        }
        for &(x, f) in &knots {
            if !x.is_finite() || !f.is_finite() {
                return Err(Error::InvalidCdf(format!("non-finite knot ({x}, {f})")));
            }
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if first != (0.0, 0.0) {
            return Err(Error::InvalidCdf(format!(
                "first knot must be (0, 0), got ({}, {})",
                first.0, first.1
            )));
        }
        if last != (1.0, 1.0) {
            return Err(Error::InvalidCdf(format!(
                "last knot must be (1, 1), got ({}, {})",
                last.0, last.1
            )));
        }
        for pair in knots.windows(2) {
            let ((x0, f0), (x1, f1)) = (pair[0], pair[1]);
            if x1 < x0 {
                return Err(Error::InvalidCdf(format!(
                    "knots out of order at rho {x1} after {x0}"
                )));
            }
            if f1 < f0 {
                return Err(Error::InvalidCdf(format!(
                    "cumulative value falls from {f0} to {f1} at rho {x1}"
                )));
            }
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// The left limit of the cdf at `x`: excludes a point mass located
    /// exactly at `x`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        // Last knot strictly below x; the next knot closes its segment.
        let below = self.knots.iter().rposition(|&(k, _)| k < x);
        let Some(i) = below else {
            return 0.0;
        };
        let (x0, f0) = self.knots[i];
        let (x1, f1) = self.knots[i + 1];
        if x1 > x {
            f0 + (f1 - f0) * (x - x0) / (x1 - x0)
        } else {
            // x1 == x: the limit from below is the first knot value at x.
            f1
        }
    }

    /// Inverse-cdf transform: maps a uniform draw `u` in `[0, 1)` to a rho
    /// sample. A jump maps a whole range of `u` onto its atom.
    pub fn quantile(&self, u: f64) -> f64 {
        let mut i = self
            .knots
            .iter()
            .position(|&(_, f)| f >= u)
            .unwrap_or(self.knots.len() - 1);
        while i > 0 && self.knots[i - 1].1 >= u {
            i -= 1;
        }
        if i == 0 {
            return self.knots[0].0;
        }
        let (x0, f0) = self.knots[i - 1];
        let (x1, f1) = self.knots[i];
        if x1 == x0 || f1 == f0 {
            return x1;
        }
        x0 + (x1 - x0) * (u - f0) / (f1 - f0)
    }
}

/// Per-choice preference bounds: the range of rho on which choice `j`
/// beats every other chain member, before clipping.
///
/// The lower end is the latest crossing with a smaller-interval choice
/// (0 for choice 1), the upper end the earliest crossing with a
/// larger-interval choice (1 for choice n). `has_upper` distinguishes a
/// real crossing from the choice-n convention so that a point mass sitting
/// exactly on a boundary is awarded to the higher-numbered choice.
pub(crate) struct PrefBounds {
    pub lo: f64,
    pub hi: f64,
    pub has_upper: bool,
}

pub(crate) fn pref_bounds<I>(crossings: &CrossingPoints, j: usize, others: I) -> PrefBounds
where
    I: IntoIterator<Item = usize>,
{
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut has_upper = false;
    for other in others {
        if other < j {
            lo = lo.max(crossings.rho_unchecked(other, j));
        } else if other > j {
            let rho = crossings.rho_unchecked(j, other);
            if !has_upper || rho < hi {
                hi = rho;
            }
            has_upper = true;
        }
    }
    PrefBounds { lo, hi, has_upper }
}

/// The probability, under a uniform rho, that choice `j` is the preferred
/// one: the length of its preference segment. Zero for choices never
/// preferred; the values over a chain sum to 1.
pub fn pref_uniform(chain: &NestedChain, crossings: &CrossingPoints, j: usize) -> Result<f64> {
    crossings.check_chain(chain)?;
    chain.choice(j)?;
    let bounds = pref_bounds(crossings, j, 1..=chain.len());
    Ok((bounds.hi - bounds.lo).max(0.0))
}

/// The preference of choice `j` under an arbitrary rho distribution.
///
/// Uniform reproduces [`pref_uniform`] exactly. For cdf distributions the
/// result is the probability mass on `j`'s preference segment, a point
/// mass exactly on a crossing counting toward the higher-numbered choice.
/// For bounded rho the result is the literal overlap length
/// `max(0, min(upper, hi) - max(lower, lo))`, which is not normalized by
/// `upper - lower`; see [`pref_with_distribution_normalized`].
pub fn pref_with_distribution(
    chain: &NestedChain,
    crossings: &CrossingPoints,
    j: usize,
    dist: &RhoDistribution,
) -> Result<f64> {
    crossings.check_chain(chain)?;
    chain.choice(j)?;
    let bounds = pref_bounds(crossings, j, 1..=chain.len());
    Ok(pref_of_bounds(&bounds, dist))
}

/// As [`pref_with_distribution`], with the bounded case divided by
/// `upper - lower` so the values form a probability distribution.
pub fn pref_with_distribution_normalized(
    chain: &NestedChain,
    crossings: &CrossingPoints,
    j: usize,
    dist: &RhoDistribution,
) -> Result<f64> {
    let pref = pref_with_distribution(chain, crossings, j, dist)?;
    match dist {
        RhoDistribution::Bounded { lower, upper } => Ok(pref / (upper - lower)),
        _ => Ok(pref),
    }
}

pub(crate) fn pref_of_bounds(bounds: &PrefBounds, dist: &RhoDistribution) -> f64 {
    match dist {
        RhoDistribution::Uniform => (bounds.hi - bounds.lo).max(0.0),
        RhoDistribution::Bounded { lower, upper } => {
            (bounds.hi.min(*upper) - bounds.lo.max(*lower)).max(0.0)
        }
        RhoDistribution::PiecewiseCdf(cdf) => {
            let upper = if bounds.has_upper {
                cdf.cdf_left(bounds.hi)
            } else {
                1.0
            };
            (upper - cdf.cdf_left(bounds.lo)).max(0.0)
        }
    }
}

/// The end-to-end analysis of a set of alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceReport {
    pub chain: NestedChain,
    pub crossings: CrossingPoints,
    pub segments: PreferenceSegments,
    /// Preference per chain choice, indexed by choice number - 1.
    pub chain_prefs: Vec<f64>,
    /// Preference per input alternative as `(original id, value)`;
    /// discarded alternatives get 0.
    pub alternative_prefs: Vec<(usize, f64)>,
    /// Chain number of the preferred choice.
    pub preferred_choice: usize,
    /// Original id of the preferred choice.
    pub preferred_id: usize,
    pub preference: f64,
}

/// Runs filtering, crossing points, segments, and distribution-weighted
/// preferences, returning the choice with the highest preference. A tie is
/// broken toward the highest chain number.
pub fn preferred_choice(
    alternatives: &[Alternative],
    dist: &RhoDistribution,
) -> Result<PreferenceReport> {
    let chain = filter_nested_chain(alternatives)?;
    let crossings = CrossingPoints::compute(&chain)?;
    let segments = preference_segments(&chain, &crossings)?;
    let chain_prefs = (1..=chain.len())
        .map(|j| pref_with_distribution(&chain, &crossings, j, dist))
        .collect::<Result<Vec<f64>>>()?;
    let preferred = argmax_highest(&chain_prefs);
    let alternative_prefs = alternatives
        .iter()
        .map(|alt| {
            let pref = chain
                .choices()
                .iter()
                .position(|c| c.original_id == alt.id)
                .map_or(0.0, |idx| chain_prefs[idx]);
            (alt.id, pref)
        })
        .collect();
    let preferred_id = chain.choices()[preferred - 1].original_id;
    let preference = chain_prefs[preferred - 1];
    Ok(PreferenceReport {
        chain,
        crossings,
        segments,
        chain_prefs,
        alternative_prefs,
        preferred_choice: preferred,
        preferred_id,
        preference,
    })
}

/// Index (1-based) of the largest value, ties within tolerance going to
/// the highest index.
pub(crate) fn argmax_highest(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .rposition(|&v| v >= max - TOLERANCE)
        .expect("nonempty values")
        + 1
}
