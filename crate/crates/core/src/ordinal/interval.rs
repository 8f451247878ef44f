use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Ordinal, OrdinalError};

/// Half-open interval `[low, high)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrdinalInterval {
    pub low: Ordinal,
    pub high: Ordinal,
}

impl OrdinalInterval {
    /// `None` when the interval would be empty.
    pub fn new(low: Ordinal, high: Ordinal) -> Option<Self> {
        (low < high).then_some(OrdinalInterval { low, high })
    }

    /// The closed interval `[low, high]`.
    pub fn closed(low: Ordinal, high: &Ordinal) -> Option<Self> {
        OrdinalInterval::new(low, high.successor())
    }

    pub fn contains(&self, a: &Ordinal) -> bool {
        &self.low <= a && a < &self.high
    }
}

impl fmt::Display for OrdinalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.low, self.high)
    }
}

/// A finite union of ordinal intervals, kept sorted with no two intervals
/// overlapping or touching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    intervals: Vec<OrdinalInterval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// `[0, bound)`.
    pub fn below(bound: &Ordinal) -> Self {
        IntervalSet::from_intervals(OrdinalInterval::new(Ordinal::zero(), bound.clone()))
    }

    pub fn from_intervals<I: IntoIterator<Item = OrdinalInterval>>(intervals: I) -> Self {
        let mut items: Vec<OrdinalInterval> = intervals.into_iter().collect();
        items.sort_by(|a, b| a.low.cmp(&b.low));
        let mut out: Vec<OrdinalInterval> = Vec::with_capacity(items.len());
        for iv in items {
            match out.last_mut() {
                Some(last) if iv.low <= last.high => {
                    if iv.high > last.high {
                        last.high = iv.high;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[OrdinalInterval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn member(&self, a: &Ordinal) -> bool {
        // last interval whose low is <= a
        let idx = self.intervals.partition_point(|iv| &iv.low <= a);
        idx > 0 && self.intervals[idx - 1].contains(a)
    }

    pub fn sup(&self) -> Result<Ordinal, OrdinalError> {
        self.intervals
            .last()
            .map(|iv| iv.high.clone())
            .ok_or(OrdinalError::EmptySet)
    }

    pub fn has_max(&self) -> Result<bool, OrdinalError> {
        Ok(self.sup()?.is_successor())
    }

    /// The largest member, if the set has one.
    pub fn max(&self) -> Option<Ordinal> {
        self.intervals.last().and_then(|iv| iv.high.predecessor())
    }

    pub fn min(&self) -> Option<&Ordinal> {
        self.intervals.first().map(|iv| &iv.low)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            let low = std::cmp::max(&a.low, &b.low);
            let high = std::cmp::min(&a.high, &b.high);
            if let Some(iv) = OrdinalInterval::new(low.clone(), high.clone()) {
                out.push(iv);
            }
            if a.high < b.high {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Members strictly below `bound`.
    pub fn filter_below(&self, bound: &Ordinal) -> IntervalSet {
        self.intersect(&IntervalSet::below(bound))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (n, iv) in self.intervals.iter().enumerate() {
            if n > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
