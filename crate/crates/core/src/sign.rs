//! Sign sequences: the `±1` words that select creation (`+1`) or
//! annihilation (`-1`) in an operator product, indexed by an ordered set of
//! position labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position label. Labels are positive integers; an ordered set `V` is
/// represented by its sorted label list.
pub type Label = u32;

/// Default hard cap on `n` (half the word length) for exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    /// `-1`: annihilation, left index of a pair.
    Minus,
    /// `+1`: creation, right index of a pair.
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            other => Err(Error::InvalidSign(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Positive,
    Negative,
}

/// A `±1`-valued function on a strictly increasing list of position labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSequence {
    values: Vec<Sign>,
    positions: Vec<Label>,
}

impl SignSequence {
    /// Sequence on the default positions `1..=m`.
    pub fn new(values: Vec<Sign>) -> Self {
        let positions = (1..=values.len() as Label).collect();
        SignSequence { values, positions }
    }

    pub fn from_values(values: &[i64]) -> Result<Self> {
        let signs = values
            .iter()
            .map(|&v| Sign::from_value(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(signs))
    }

    pub fn with_positions(values: Vec<Sign>, positions: Vec<Label>) -> Result<Self> {
        if values.len() != positions.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                positions: positions.len(),
            });
        }
        if positions.first().is_some_and(|&p| p == 0)
            || positions.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::PositionsNotIncreasing);
        }
        Ok(SignSequence { values, positions })
    }

    pub fn empty() -> Self {
        SignSequence {
            values: Vec::new(),
            positions: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    pub fn positions(&self) -> &[Label] {
        &self.positions
    }

    pub fn as_integers(&self) -> Vec<i64> {
        self.values.iter().map(|s| s.value()).collect()
    }

    /// `(label, sign)` pairs in position order.
    pub fn iter(&self) -> impl Iterator<Item = (Label, Sign)> + '_ {
        self.positions.iter().copied().zip(self.values.iter().copied())
    }

    pub fn sign_at(&self, label: Label) -> Option<Sign> {
        self.positions
            .binary_search(&label)
            .ok()
            .map(|i| self.values[i])
    }

    /// Labels carrying `-1`, i.e. `ε⁻¹({-1})`, in increasing order.
    pub fn minus_labels(&self) -> Vec<Label> {
        self.iter()
            .filter(|&(_, s)| s == Sign::Minus)
            .map(|(p, _)| p)
            .collect()
    }

    /// Positive iff the total sum vanishes and every suffix sum is `>= 0`.
    /// The empty sequence is positive.
    pub fn classify(&self) -> SignClass {
        let mut suffix = 0i64;
        for s in self.values.iter().rev() {
            suffix += s.value();
            if suffix < 0 {
                return SignClass::Negative;
            }
        }
        if suffix == 0 {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }

    /// Same classification through the prefix criterion: total sum zero and
    /// every prefix sum `<= 0`.
    pub fn classify_by_prefix(&self) -> SignClass {
        let mut prefix = 0i64;
        for s in &self.values {
            prefix += s.value();
            if prefix > 0 {
                return SignClass::Negative;
            }
        }
        if prefix == 0 {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }

    pub fn is_positive(&self) -> bool {
        self.classify() == SignClass::Positive
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::NotPositive(self.to_string()))
        }
    }

    /// Restriction to the labels in `keep`, in their induced order.
    pub fn restrict(&self, keep: &[Label]) -> Result<SignSequence> {
        if let Some(&missing) = keep.iter().find(|&&l| self.sign_at(l).is_none()) {
            return Err(Error::LabelNotPresent(missing));
        }
        let (positions, values) = self
            .iter()
            .filter(|(p, _)| keep.contains(p))
            .unzip();
        Ok(SignSequence { values, positions })
    }

    /// Restriction to every label except those in `drop`.
    pub fn without(&self, drop: &[Label]) -> Result<SignSequence> {
        if let Some(&missing) = drop.iter().find(|&&l| self.sign_at(l).is_none()) {
            return Err(Error::LabelNotPresent(missing));
        }
        let (positions, values) = self
            .iter()
            .filter(|(p, _)| !drop.contains(p))
            .unzip();
        Ok(SignSequence { values, positions })
    }
}

impl fmt::Display for SignSequence {
    /// Comma-separated `±1` list, the CLI argument form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|s| s.value().to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for SignSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SignSequence::empty());
        }
        let values = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad sign entry {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SignSequence::from_values(&values)
    }
}

pub fn check_bound(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        Err(Error::BoundExceeded { n, max: max_n })
    } else {
        Ok(())
    }
}

/// All positive-class sequences of length `2n` in lexicographic order
/// (`-1 < +1`), under the default bound.
pub fn enumerate_positive_signs(n: usize) -> Result<Vec<SignSequence>> {
    enumerate_positive_signs_bounded(n, DEFAULT_MAX_N)
}

pub fn enumerate_positive_signs_bounded(n: usize, max_n: usize) -> Result<Vec<SignSequence>> {
    check_bound(n, max_n)?;
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(2 * n);
    extend_ballot(n, 0, 0, &mut word, &mut out);
    Ok(out)
}

// `minus`/`plus` count the symbols placed so far; a prefix may never hold
// more `+1` than `-1`.
fn extend_ballot(
    n: usize,
    minus: usize,
    plus: usize,
    word: &mut Vec<Sign>,
    out: &mut Vec<SignSequence>,
) {
    if word.len() == 2 * n {
        out.push(SignSequence::new(word.clone()));
        return;
    }
    if minus < n {
        word.push(Sign::Minus);
        extend_ballot(n, minus + 1, plus, word, out);
        word.pop();
    }
    if plus < minus {
        word.push(Sign::Plus);
        extend_ballot(n, minus, plus + 1, word, out);
        word.pop();
    }
}

/// Every sign sequence of length `m` in lexicographic order.
pub fn all_sign_sequences(m: usize) -> Vec<SignSequence> {
    (0u64..1 << m)
        .map(|bits| {
            SignSequence::new(
                (0..m)
                    .map(|i| {
                        if bits >> (m - 1 - i) & 1 == 0 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}
