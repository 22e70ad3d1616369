//! Discrete world hypotheses and exact beliefs over them.
//!
//! A [`HypothesisSpace`] enumerates every world the robot may be in. A
//! [`Belief`] is an exact rational distribution over that space, so beliefs
//! reached along different observation orders compare equal without any
//! tolerance. Observations are deterministic and binary: looking at object
//! `i` reveals its presence bit.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest object count accepted in obstacles mode (2^n hypotheses).
pub const MAX_OBJECTS: usize = 16;

/// What the partially observable objects stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Each object may independently be present (blocking) or absent.
    Obstacles,
    /// Exactly one of the objects exists; it marks the goal.
    Goals,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldHypothesis {
    pub index: usize,
    /// `presence[i]` is true when object `i` is present (closed door, box there).
    pub presence: Vec<bool>,
}

impl WorldHypothesis {
    pub fn is_present(&self, object: usize) -> bool {
        self.presence[object]
    }

    pub fn present_objects(&self) -> impl Iterator<Item = usize> + '_ {
        self.presence
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i))
    }
}

/// The ordered, finite set of world hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisSpace {
    mode: Mode,
    num_objects: usize,
    hypotheses: Vec<WorldHypothesis>,
}

impl HypothesisSpace {
    /// Enumerates all hypotheses for `n` objects.
    ///
    /// Obstacles mode yields `2^n` presence vectors where hypothesis `h` has
    /// object `i` present iff bit `i` of `h` is set, so for two doors the
    /// order is `(0,0), (1,0), (0,1), (1,1)`. Goals mode yields the `n`
    /// one-hot vectors.
    pub fn enumerate(mode: Mode, n: usize) -> Result<Self> {
        let hypotheses = match mode {
            Mode::Obstacles => {
                if n > MAX_OBJECTS {
                    return Err(Error::TooManyObjects(n));
                }
                (0..1usize << n)
                    .map(|h| WorldHypothesis {
                        index: h,
                        presence: (0..n).map(|i| (h >> i) & 1 == 1).collect(),
                    })
                    .collect()
            }
            Mode::Goals => {
                if n == 0 {
                    return Err(Error::NoGoalLocations);
                }
                (0..n)
                    .map(|h| WorldHypothesis {
                        index: h,
                        presence: (0..n).map(|i| i == h).collect(),
                    })
                    .collect()
            }
        };
        Ok(Self {
            mode,
            num_objects: n,
            hypotheses,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn hypotheses(&self) -> &[WorldHypothesis] {
        &self.hypotheses
    }

    pub fn get(&self, index: usize) -> Result<&WorldHypothesis> {
        self.hypotheses.get(index).ok_or(Error::InvalidHypothesis {
            index,
            count: self.hypotheses.len(),
        })
    }

    pub fn is_present(&self, hypothesis: usize, object: usize) -> bool {
        self.hypotheses[hypothesis].presence[object]
    }

    pub fn uniform_belief(&self) -> Belief {
        Belief::uniform(self.len())
    }

    fn check_object(&self, object: usize) -> Result<()> {
        if object >= self.num_objects {
            return Err(Error::InvalidObject {
                index: object,
                count: self.num_objects,
            });
        }
        Ok(())
    }

    fn check_belief(&self, belief: &Belief) -> Result<()> {
        if belief.len() != self.len() {
            return Err(Error::InvalidBelief(format!(
                "belief has {} entries, hypothesis space has {}",
                belief.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Bayes update for observing a single object.
    ///
    /// Only outcomes with positive prior mass are returned, absent before
    /// present. When the object is already determined by `belief` a single
    /// entry carrying `belief` itself is returned.
    pub fn observe(
        &self,
        belief: &Belief,
        object: usize,
    ) -> Result<Vec<(ObservationOutcome, Belief)>> {
        self.check_object(object)?;
        self.check_belief(belief)?;
        let mut out = Vec::with_capacity(2);
        for seen_present in [false, true] {
            let mass: BigRational = belief
                .probs
                .iter()
                .enumerate()
                .filter(|(h, _)| self.is_present(*h, object) == seen_present)
                .map(|(_, p)| p.clone())
                .sum();
            if mass.is_zero() {
                continue;
            }
            let probs = belief
                .probs
                .iter()
                .enumerate()
                .map(|(h, p)| {
                    if self.is_present(h, object) == seen_present {
                        p / &mass
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            out.push((
                ObservationOutcome {
                    object_index: object,
                    seen_present,
                },
                Belief { probs },
            ));
        }
        Ok(out)
    }

    /// Posteriors after observing every object in `objects` at once.
    ///
    /// The support of `belief` is partitioned by the joint presence bits of
    /// the observed objects. Returns an empty list when the observation
    /// cannot change the belief.
    pub fn observe_all(&self, belief: &Belief, objects: &[usize]) -> Result<Vec<Belief>> {
        let mut current = vec![belief.clone()];
        for &object in objects {
            let mut next = Vec::with_capacity(current.len() * 2);
            for b in &current {
                next.extend(self.observe(b, object)?.into_iter().map(|(_, child)| child));
            }
            current = next;
        }
        if current.len() == 1 {
            current.clear();
        }
        Ok(current)
    }

    /// Breadth-first closure of `{initial}` under single-object observations.
    pub fn all_belief_states(&self, initial: &Belief) -> Result<Vec<Belief>> {
        self.check_belief(initial)?;
        let mut seen: HashSet<Belief> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(initial.clone());
        queue.push_back(initial.clone());
        while let Some(b) = queue.pop_front() {
            for object in 0..self.num_objects {
                for (_, child) in self.observe(&b, object)? {
                    if seen.insert(child.clone()) {
                        queue.push_back(child);
                    }
                }
            }
            order.push(b);
        }
        Ok(order)
    }
}

/// Beliefs whose support lies inside `valid_worlds`.
pub fn compatible_beliefs<'a>(valid_worlds: &WorldSet, beliefs: &'a [Belief]) -> Vec<&'a Belief> {
    beliefs
        .iter()
        .filter(|b| b.support().is_subset(valid_worlds))
        .collect()
}

/// Mass of `parent` on the hypotheses that `child` still considers possible.
pub fn branching_probability(parent: &Belief, child: &Belief) -> BigRational {
    parent
        .probs
        .iter()
        .zip(&child.probs)
        .filter(|(_, c)| c.is_positive())
        .map(|(p, _)| p.clone())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObservationOutcome {
    pub object_index: usize,
    pub seen_present: bool,
}

/// Exact probability distribution over a [`HypothesisSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Belief {
    probs: Vec<BigRational>,
}

impl Belief {
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidBelief("belief has no entries".into()));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidBelief(format!("negative entry {p}")));
        }
        let total: BigRational = probs.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidBelief(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::from(n));
        Self { probs: vec![p; n] }
    }

    /// All mass on hypothesis `index`.
    pub fn certain(n: usize, index: usize) -> Self {
        let probs = (0..n)
            .map(|i| {
                if i == index {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn get(&self, hypothesis: usize) -> &BigRational {
        &self.probs[hypothesis]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Indices with positive probability.
    pub fn support(&self) -> WorldSet {
        let mut set = WorldSet::with_capacity(self.len());
        for (i, p) in self.probs.iter().enumerate() {
            if p.is_positive() {
                set.insert(i);
            }
        }
        set
    }

    /// True iff exactly one entry equals 1.
    pub fn is_final(&self) -> bool {
        self.probs.iter().filter(|p| p.is_one()).count() == 1
    }

    /// The hypothesis this belief is certain of, if any.
    pub fn resolved_hypothesis(&self) -> Option<usize> {
        if self.is_final() {
            self.probs.iter().position(|p| p.is_one())
        } else {
            None
        }
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_ratio(p: &BigRational) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidBelief(format!("cannot parse `{s}` as a rational"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

impl Serialize for Belief {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.probs.iter().map(format_ratio))
    }
}

impl<'de> Deserialize<'de> for Belief {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let probs = raw
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Belief::new(probs).map_err(serde::de::Error::custom)
    }
}

/// Set of hypothesis indices, stored as a bitset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WorldSet {
    words: Vec<u64>,
}

impl WorldSet {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut set = Self::with_capacity(n);
        for i in 0..n {
            set.insert(i);
        }
        set
    }

    pub fn insert(&mut self, index: usize) {
        let word = index / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words
            .get(index / 64)
            .is_some_and(|w| w & (1 << (index % 64)) != 0)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| {
            let o = other.words.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| i * 64 + b)
        })
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = WorldSet::default();
        for i in iter {
            set.insert(i);
        }
        set
    }
}
