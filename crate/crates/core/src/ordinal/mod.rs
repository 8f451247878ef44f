//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is a strictly decreasing (in exponent) list of
//! `ω^e·c` terms with `c ≥ 1`. The empty list is zero. Because the
//! representation is canonical, derived `Eq`/`Hash` coincide with ordinal
//! equality and [`Ord`] is the lexicographic order on terms.

mod interval;
mod notation;

use std::cmp::Ordering;
use std::fmt;

pub use interval::{IntervalSet, OrdinalInterval};
pub use notation::{parse_ordinal, OrdinalError};

/// One `ω^exponent · coefficient` summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Zero, successor, or limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::finite(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1, 1)
    }

    pub fn finite(n: u64) -> Self {
        Ordinal::omega_pow(0, n)
    }

    /// `ω^exponent · coefficient` (zero when `coefficient == 0`).
    pub fn omega_pow(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// `ω·m + n`, the shape of every ordinal below ω².
    pub fn omega_times_plus(m: u64, n: u64) -> Self {
        Ordinal::omega_pow(1, m).add(&Ordinal::finite(n))
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, rejecting
    /// sequences that are not in Cantor normal form.
    pub fn from_terms<I>(terms: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = (u32, u64)>,
    {
        let mut out: Vec<Term> = Vec::new();
        for (exponent, coefficient) in terms {
            if coefficient == 0 {
                return Err(OrdinalError::NonCanonical(format!(
                    "zero coefficient at exponent {exponent}"
                )));
            }
            if let Some(last) = out.last() {
                if last.exponent <= exponent {
                    return Err(OrdinalError::NonCanonical(format!(
                        "exponent {exponent} does not decrease after {}",
                        last.exponent
                    )));
                }
            }
            out.push(Term {
                exponent,
                coefficient,
            });
        }
        Ok(Ordinal { terms: out })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exponent)
    }

    /// Exponent of the last (smallest) term; `None` for zero.
    pub fn last_exponent(&self) -> Option<u32> {
        self.terms.last().map(|t| t.exponent)
    }

    /// Coefficient of the `ω^0` term.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exponent == 0 => t.coefficient,
            _ => 0,
        }
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.last_exponent() {
            None => OrdinalKind::Zero,
            Some(0) => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == OrdinalKind::Successor
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalKind::Limit
    }

    /// A limit of limit ordinals.
    pub fn is_lim2(&self) -> bool {
        matches!(self.last_exponent(), Some(e) if e >= 2)
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// The immediate predecessor of a successor ordinal.
    pub fn predecessor(&self) -> Option<Ordinal> {
        let last = self.terms.last()?;
        if last.exponent != 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        if last.coefficient == 1 {
            terms.pop();
        } else {
            terms.last_mut().unwrap().coefficient -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Ordinal addition; terms of `self` below the leading exponent of
    /// `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .copied()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient += lead.coefficient;
                rest.next();
            }
        }
        terms.extend(rest.copied());
        Ordinal { terms }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&notation::format_ordinal(self))
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ordinal(&text).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for parsing a literal that is known to be well formed.
///
/// Panics on malformed input; intended for tests and fixtures.
pub fn ord(text: &str) -> Ordinal {
    parse_ordinal(text).unwrap_or_else(|e| panic!("bad ordinal literal {text:?}: {e}"))
}
