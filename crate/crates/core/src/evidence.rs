//! Utility frames, mass functions, and expectation operators.
//!
//! A [`UtilityFrame`] lists the possible outcomes of a choice together with
//! their utilities. Evidence about which outcome will occur is a
//! [`MassFunction`]: a basic probability assignment that puts mass on
//! subsets of the frame (the focal elements). The mass on a non-singleton
//! subset is ambiguity, committed to the subset without being divided
//! among its members. The operators here turn that evidence into
//! lower/upper expected utilities, belief and pignistic probabilities, a
//! Choquet lower expectation, and the nonspecificity measure.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::TOLERANCE;

/// One possible outcome: a display label and its numeric utility.
///
/// Labels are presentation only (currency symbols and the like); all
/// arithmetic uses the `utility` field.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDef {
    pub label: String,
    pub utility: f64,
}

/// An ordered, finite set of mutually exclusive outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityFrame {
    outcomes: Vec<OutcomeDef>,
}

impl UtilityFrame {
    /// Builds a frame from `(label, utility)` pairs.
    ///
    /// The frame must be nonempty, labels must be unique, and every utility
    /// must be a finite real.
    pub fn new<L: Into<String>>(outcomes: Vec<(L, f64)>) -> Result<Self> {
        let outcomes: Vec<OutcomeDef> = outcomes
            .into_iter()
            .map(|(label, utility)| OutcomeDef {
                label: label.into(),
                utility,
            })
            .collect();
        if outcomes.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let mut seen = BTreeSet::new();
        for outcome in &outcomes {
            if !outcome.utility.is_finite() {
                return Err(Error::NonFiniteUtility {
                    label: outcome.label.clone(),
                    value: outcome.utility,
                });
            }
            if !seen.insert(outcome.label.as_str()) {
                return Err(Error::DuplicateLabel(outcome.label.clone()));
            }
        }
        Ok(Self { outcomes })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[OutcomeDef] {
        &self.outcomes
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|o| o.label.as_str())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.outcomes.iter().any(|o| o.label == label)
    }

    fn index_of(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The full set of labels, i.e. the whole frame as a subset.
    pub fn full_subset(&self) -> BTreeSet<String> {
        self.labels().map(str::to_string).collect()
    }
}

/// A subset of the frame carrying positive mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalElement {
    subset: BTreeSet<String>,
    mass: f64,
}

impl FocalElement {
    pub fn subset(&self) -> &BTreeSet<String> {
        &self.subset
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// A basic probability assignment over a utility frame.
///
/// Construction enforces the defining axioms: no mass on the empty set,
/// every mass in `(0, 1]`, distinct focal subsets, and a total mass of 1
/// within [`TOLERANCE`]. Assignments outside tolerance are rejected rather
/// than renormalized, so authoring mistakes surface instead of being
/// papered over.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    focal: Vec<FocalElement>,
}

impl MassFunction {
    pub fn new(elements: Vec<(BTreeSet<String>, f64)>) -> Result<Self> {
        let mut focal = Vec::with_capacity(elements.len());
        let mut seen: Vec<&BTreeSet<String>> = Vec::new();
        let mut sum = 0.0;
        for (index, (subset, mass)) in elements.iter().enumerate() {
            if subset.is_empty() {
                return Err(Error::EmptyFocalElement { index });
            }
            if !(mass.is_finite() && *mass > 0.0 && *mass <= 1.0 + TOLERANCE) {
                return Err(Error::MassOutOfRange { index, mass: *mass });
            }
            if seen.contains(&subset) {
                return Err(Error::DuplicateFocalElement { index });
            }
            seen.push(subset);
            sum += mass;
        }
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::MassSumMismatch { sum });
        }
        for (subset, mass) in elements {
            focal.push(FocalElement { subset, mass });
        }
        Ok(Self { focal })
    }

    /// Builds a mass function from `(labels, mass)` pairs, for convenience.
    pub fn from_parts<L: Into<String>>(elements: Vec<(Vec<L>, f64)>) -> Result<Self> {
        Self::new(
            elements
                .into_iter()
                .map(|(labels, mass)| (labels.into_iter().map(Into::into).collect(), mass))
                .collect(),
        )
    }

    /// Total ignorance: all mass on the whole frame.
    pub fn vacuous(frame: &UtilityFrame) -> Self {
        Self {
            focal: vec![FocalElement {
                subset: frame.full_subset(),
                mass: 1.0,
            }],
        }
    }

    pub fn focal_elements(&self) -> &[FocalElement] {
        &self.focal
    }

    /// Resolves every focal subset to outcome indices in `frame`.
    fn resolve(&self, frame: &UtilityFrame) -> Result<Vec<(Vec<usize>, f64)>> {
        self.focal
            .iter()
            .map(|fe| {
                let indices = fe
                    .subset
                    .iter()
                    .map(|label| frame.index_of(label))
                    .collect::<Result<Vec<usize>>>()?;
                Ok((indices, fe.mass))
            })
            .collect()
    }
}

/// The closed interval `[lower, upper]` of expected utilities of a choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityInterval {
    lower: f64,
    upper: f64,
}

impl UtilityInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower <= upper) {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// The expected utility at ambiguity parameter `rho`: the linear
    /// interpolation `lower + rho * (upper - lower)`.
    pub fn at(&self, rho: f64) -> Result<f64> {
        if !(rho.is_finite() && (0.0..=1.0).contains(&rho)) {
            return Err(Error::RhoOutOfRange(rho));
        }
        Ok(self.lower + rho * (self.upper - self.lower))
    }

    /// True if `self` contains `inner` (set inclusion of closed intervals).
    pub fn contains_interval(&self, inner: &UtilityInterval) -> bool {
        self.lower <= inner.lower && inner.upper <= self.upper
    }
}

/// Where an alternative's utility interval came from.
#[derive(Debug, Clone, PartialEq)]
pub enum AlternativeSource {
    /// Derived from evidence: interval computed from a mass function.
    Assessed(MassFunction),
    /// Stated directly as an interval.
    Direct,
}

/// A named choice with its expected-utility interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Alternative {
    pub id: usize,
    pub name: String,
    pub source: AlternativeSource,
    pub interval: UtilityInterval,
}

impl Alternative {
    /// Builds an alternative from evidence; the interval is the computed
    /// `[lower_expected_utility, upper_expected_utility]`.
    pub fn from_mass_function<N: Into<String>>(
        id: usize,
        name: N,
        frame: &UtilityFrame,
        mass: MassFunction,
    ) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidAlternativeId);
        }
        let interval = expected_utility_interval(&mass, frame)?;
        Ok(Self {
            id,
            name: name.into(),
            source: AlternativeSource::Assessed(mass),
            interval,
        })
    }

    pub fn from_interval<N: Into<String>>(
        id: usize,
        name: N,
        interval: UtilityInterval,
    ) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidAlternativeId);
        }
        Ok(Self {
            id,
            name: name.into(),
            source: AlternativeSource::Direct,
            interval,
        })
    }
}

/// Mass-weighted sum of each focal element's minimum utility.
pub fn lower_expected_utility(m: &MassFunction, frame: &UtilityFrame) -> Result<f64> {
    let resolved = m.resolve(frame)?;
    Ok(resolved
        .iter()
        .map(|(indices, mass)| min_utility(frame, indices) * mass)
        .sum())
}

/// Mass-weighted sum of each focal element's maximum utility.
pub fn upper_expected_utility(m: &MassFunction, frame: &UtilityFrame) -> Result<f64> {
    let resolved = m.resolve(frame)?;
    Ok(resolved
        .iter()
        .map(|(indices, mass)| max_utility(frame, indices) * mass)
        .sum())
}

/// Both bounds at once.
pub fn expected_utility_interval(
    m: &MassFunction,
    frame: &UtilityFrame,
) -> Result<UtilityInterval> {
    let lower = lower_expected_utility(m, frame)?;
    let upper = upper_expected_utility(m, frame)?;
    UtilityInterval::new(lower, upper)
}

/// Total mass committed to subsets of `a`: the belief in `a`.
pub fn belief(m: &MassFunction, frame: &UtilityFrame, a: &BTreeSet<String>) -> Result<f64> {
    for label in a {
        frame.index_of(label)?;
    }
    Ok(m.focal_elements()
        .iter()
        .filter(|fe| fe.subset().is_subset(a))
        .map(FocalElement::mass)
        .sum())
}

/// The pignistic probability of a single outcome: each focal element's
/// mass spread evenly over its members. The betting frame is fixed to the
/// singleton partition of the utility frame.
pub fn pignistic(m: &MassFunction, frame: &UtilityFrame, outcome: &str) -> Result<f64> {
    frame.index_of(outcome)?;
    Ok(m.focal_elements()
        .iter()
        .filter(|fe| fe.subset().contains(outcome))
        .map(|fe| fe.mass() / fe.subset().len() as f64)
        .sum())
}

/// Choquet integral of the utility map with respect to the belief function.
///
/// Computed exactly over the sorted distinct utility levels: the integral
/// of `Bel(utility > t)` over positive `t` plus the integral of
/// `Bel(utility > t) - 1` over negative `t`. For any valid assignment this
/// equals [`lower_expected_utility`] on a finite frame; the two routes are
/// kept separate so they can check each other.
pub fn choquet_lower_expectation(m: &MassFunction, frame: &UtilityFrame) -> Result<f64> {
    let resolved = m.resolve(frame)?;
    let mut levels: Vec<f64> = frame.outcomes().iter().map(|o| o.utility).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // Belief of the upper level set {outcome : utility >= level}.
    let bel_at_least = |level: f64| -> f64 {
        resolved
            .iter()
            .filter(|(indices, _)| {
                indices
                    .iter()
                    .all(|&i| frame.outcomes()[i].utility >= level)
            })
            .map(|(_, mass)| *mass)
            .sum()
    };

    let first = levels[0];
    let last = *levels.last().expect("frame is nonempty");
    let mut integral = 0.0;
    if first > 0.0 {
        // Below the lowest level the upper set is the whole frame, Bel = 1.
        integral += first;
    }
    for pair in levels.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let bel = bel_at_least(b);
        if b > 0.0 {
            integral += (b - a.max(0.0)) * bel;
        }
        if a < 0.0 {
            integral += (b.min(0.0) - a) * (bel - 1.0);
        }
    }
    if last < 0.0 {
        // Above the highest level the upper set is empty: Bel - 1 = -1.
        integral += last;
    }
    Ok(integral)
}

/// The nonspecificity of a mass function, in bits:
/// the mass-weighted sum of `log2 |subset|` over focal elements.
///
/// Zero exactly when every focal element is a singleton; maximal, at
/// `log2 N`, exactly when all mass sits on the whole frame.
pub fn nonspecificity(m: &MassFunction) -> f64 {
    m.focal_elements()
        .iter()
        .map(|fe| fe.mass() * (fe.subset().len() as f64).log2())
        .sum()
}

fn min_utility(frame: &UtilityFrame, indices: &[usize]) -> f64 {
    indices
        .iter()
        .map(|&i| frame.outcomes()[i].utility)
        .fold(f64::INFINITY, f64::min)
}

fn max_utility(frame: &UtilityFrame, indices: &[usize]) -> f64 {
    indices
        .iter()
        .map(|&i| frame.outcomes()[i].utility)
        .fold(f64::NEG_INFINITY, f64::max)
}
