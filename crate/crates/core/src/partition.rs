//! Pair partitions of finite ordered label sets: enumeration, the map to
//! sign sequences, the non-crossing counterpart, restricted crossing numbers,
//! depths and gluing.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sign::{check_bound, Label, Sign, SignSequence, DEFAULT_MAX_N};

pub type Pair = (Label, Label);

/// A perfect matching of its support, stored as `(left, right)` pairs with
/// `left < right`, sorted by left index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPairs")]
pub struct PairPartition {
    pairs: Vec<Pair>,
}

#[derive(Deserialize)]
struct RawPairs {
    pairs: Vec<Pair>,
}

impl TryFrom<RawPairs> for PairPartition {
    type Error = Error;

    fn try_from(raw: RawPairs) -> Result<Self> {
        PairPartition::new(raw.pairs)
    }
}

impl PairPartition {
    /// Validates and canonicalises a list of pairs (any order).
    pub fn new(mut pairs: Vec<Pair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(l, r) in &pairs {
            if l == 0 || l >= r {
                return Err(Error::InvalidPair { left: l, right: r });
            }
            for x in [l, r] {
                if !seen.insert(x) {
                    return Err(Error::DuplicateLabel(x));
                }
            }
        }
        pairs.sort_unstable();
        Ok(PairPartition { pairs })
    }

    pub fn empty() -> Self {
        PairPartition { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn lefts(&self) -> Vec<Label> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn support(&self) -> Vec<Label> {
        let mut s: Vec<Label> = self.pairs.iter().flat_map(|&(l, r)| [l, r]).collect();
        s.sort_unstable();
        s
    }

    pub fn contains_pair(&self, pair: Pair) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    /// The sign sequence on the support: `-1` at left indices, `+1` at right
    /// indices. Always lands in the positive class.
    pub fn tau(&self) -> SignSequence {
        let support = self.support();
        let values = support
            .iter()
            .map(|x| {
                if self.pairs.binary_search_by_key(x, |p| p.0).is_ok() {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        SignSequence::with_positions(values, support).expect("support is strictly increasing")
    }

    /// Restricted crossing number: the number of index pairs `(h, j)` with
    /// `l_h < l_j < r_h < r_j`.
    pub fn crossing_number(&self) -> usize {
        let mut count = 0;
        for (h, &(_, rh)) in self.pairs.iter().enumerate() {
            for &(lj, rj) in &self.pairs[h + 1..] {
                if lj < rh && rh < rj {
                    count += 1;
                }
            }
        }
        count
    }

    /// Non-crossing test straight from the definition: for every `k < h`,
    /// `i_k < i_h < j_k` holds iff `i_k < j_h < j_k` does.
    pub fn is_non_crossing(&self) -> bool {
        self.pairs.iter().enumerate().all(|(k, &(ik, jk))| {
            self.pairs[k + 1..].iter().all(|&(ih, jh)| {
                (ik < ih && ih < jk) == (ik < jh && jh < jk)
            })
        })
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.pairs.len() {
            Err(Error::IndexOutOfRange {
                index: k,
                len: self.pairs.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Depth of the `k`-th pair (0-based): the number of pairs strictly
    /// enclosing it. Rejects crossing partitions.
    pub fn depth(&self, k: usize) -> Result<usize> {
        self.check_index(k)?;
        if !self.is_non_crossing() {
            return Err(Error::CrossingInput);
        }
        let (lk, rk) = self.pairs[k];
        Ok(self
            .pairs
            .iter()
            .filter(|&&(lh, rh)| lh < lk && rk < rh)
            .count())
    }

    /// Depth through the counting identity
    /// `|{h: r_h > r_k}| - |{h: l_h > r_k}|`.
    pub fn depth_by_counts(&self, k: usize) -> Result<usize> {
        self.check_index(k)?;
        if !self.is_non_crossing() {
            return Err(Error::CrossingInput);
        }
        let rk = self.pairs[k].1;
        let right_after = self.pairs.iter().filter(|p| p.1 > rk).count();
        let left_after = self.pairs.iter().filter(|p| p.0 > rk).count();
        Ok(right_after - left_after)
    }

    /// All depths, in pair order.
    pub fn depths(&self) -> Result<Vec<usize>> {
        (0..self.pairs.len()).map(|k| self.depth(k)).collect()
    }

    /// The partition with the `k`-th pair removed (`θ_k`).
    pub fn without_pair(&self, k: usize) -> Result<PairPartition> {
        self.check_index(k)?;
        let mut pairs = self.pairs.clone();
        pairs.remove(k);
        Ok(PairPartition { pairs })
    }

    /// Image under a label map, which should be strictly order preserving.
    pub fn relabel(&self, map: impl Fn(Label) -> Label) -> Result<PairPartition> {
        PairPartition::new(self.pairs.iter().map(|&(l, r)| (map(l), map(r))).collect())
    }

    /// Argument form used on the command line, e.g. `1-4,2-3`.
    pub fn to_arg_string(&self) -> String {
        self.pairs
            .iter()
            .map(|(l, r)| format!("{l}-{r}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(l, r)| format!("({l},{r})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for PairPartition {
    type Err = Error;

    /// Parses `l-r` pairs joined by commas.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PairPartition::empty());
        }
        let pairs = s
            .split(',')
            .map(|tok| {
                let (l, r) = tok
                    .trim()
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("expected l-r, got {tok:?}")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<Label>()
                        .map_err(|_| Error::Parse(format!("bad label in {tok:?}")))
                };
                Ok((parse(l)?, parse(r)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PairPartition::new(pairs)
    }
}

/// Union of pair partitions on pairwise disjoint supports, in canonical
/// order over the merged support.
pub fn glue(parts: &[PairPartition]) -> Result<PairPartition> {
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    for part in parts {
        for &(l, r) in &part.pairs {
            for x in [l, r] {
                if !seen.insert(x) {
                    return Err(Error::OverlappingSupport(x));
                }
            }
            pairs.push((l, r));
        }
    }
    pairs.sort_unstable();
    Ok(PairPartition { pairs })
}

/// All pair partitions of an even-sized ordered label set, in lexicographic
/// order of their pair lists.
pub fn enumerate_pp_on(support: &[Label]) -> Vec<PairPartition> {
    let mut out = Vec::new();
    if support.len() % 2 == 1 {
        return out;
    }
    let mut pairs = Vec::with_capacity(support.len() / 2);
    match_remaining(support.to_vec(), &mut pairs, &mut out);
    out
}

fn match_remaining(rest: Vec<Label>, pairs: &mut Vec<Pair>, out: &mut Vec<PairPartition>) {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(PairPartition {
            pairs: pairs.clone(),
        });
        return;
    };
    for (i, &partner) in tail.iter().enumerate() {
        let mut remaining = tail.to_vec();
        remaining.remove(i);
        pairs.push((first, partner));
        match_remaining(remaining, pairs, out);
        pairs.pop();
    }
}

/// `PP(2n)` under the default bound.
pub fn enumerate_pp(n: usize) -> Result<Vec<PairPartition>> {
    enumerate_pp_bounded(n, DEFAULT_MAX_N)
}

pub fn enumerate_pp_bounded(n: usize, max_n: usize) -> Result<Vec<PairPartition>> {
    check_bound(n, max_n)?;
    let support: Vec<Label> = (1..=2 * n as Label).collect();
    Ok(enumerate_pp_on(&support))
}

/// One branch of the last-left-index decomposition: the pair `(m, m + k)`
/// and the sign sequence left after deleting both labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub pair: Pair,
    pub rest: SignSequence,
}

/// Splits `PP(V, ε)` by the partner of `m`, the largest `-1` label. Every
/// label after `m` carries `+1`, so each one is a candidate partner.
pub fn last_left_branches(eps: &SignSequence) -> Result<Vec<Branch>> {
    eps.require_positive()?;
    let Some(m_idx) = eps.values().iter().rposition(|&s| s == Sign::Minus) else {
        return Ok(Vec::new());
    };
    let m = eps.positions()[m_idx];
    eps.positions()[m_idx + 1..]
        .iter()
        .map(|&partner| {
            Ok(Branch {
                pair: (m, partner),
                rest: eps.without(&[m, partner])?,
            })
        })
        .collect()
}

/// `PP(V, ε) = τ⁻¹(ε)`, built recursively from [`last_left_branches`].
/// Output is sorted.
pub fn pp_with_sign(eps: &SignSequence) -> Result<Vec<PairPartition>> {
    eps.require_positive()?;
    let mut out = pp_with_sign_rec(eps);
    out.sort_unstable();
    Ok(out)
}

fn pp_with_sign_rec(eps: &SignSequence) -> Vec<PairPartition> {
    if eps.is_empty() {
        return vec![PairPartition::empty()];
    }
    let branches = last_left_branches(eps).expect("restrictions stay positive");
    let mut out = Vec::new();
    for branch in branches {
        let head = PairPartition {
            pairs: vec![branch.pair],
        };
        for sub in pp_with_sign_rec(&branch.rest) {
            out.push(glue(&[sub, head.clone()]).expect("disjoint supports"));
        }
    }
    out
}

/// `PP(V, ε)` by filtering every pair partition of the support through τ.
pub fn pp_with_sign_by_filter(eps: &SignSequence) -> Result<Vec<PairPartition>> {
    eps.require_positive()?;
    Ok(enumerate_pp_on(eps.positions())
        .into_iter()
        .filter(|theta| &theta.tau() == eps)
        .collect())
}

/// `∏_h (2h - l_h)` over the `-1` labels, indexed within the sequence.
pub fn pp_with_sign_count(eps: &SignSequence) -> Result<u64> {
    eps.require_positive()?;
    Ok(eps
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == Sign::Minus)
        .enumerate()
        .map(|(h, (idx, _))| (2 * (h as u64 + 1)) - (idx as u64 + 1))
        .product())
}

/// The unique non-crossing element of `PP(V, ε)`: scan left to right,
/// push each `-1` label, and close the most recent open label at each `+1`.
pub fn ncpp_counterpart(eps: &SignSequence) -> Result<PairPartition> {
    eps.require_positive()?;
    let mut open = Vec::new();
    let mut pairs = Vec::with_capacity(eps.len() / 2);
    for (label, sign) in eps.iter() {
        match sign {
            Sign::Minus => open.push(label),
            Sign::Plus => {
                let left = open.pop().expect("positive class never underflows");
                pairs.push((left, label));
            }
        }
    }
    pairs.sort_unstable();
    Ok(PairPartition { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(pairs: &[Pair]) -> PairPartition {
        PairPartition::new(pairs.to_vec()).unwrap()
    }

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::from_values(v).unwrap()
    }

    fn double_factorial(n: usize) -> usize {
        (1..=n).map(|h| 2 * h - 1).product()
    }

    #[test]
    fn enumerate_pp_small() {
        assert_eq!(enumerate_pp(1).unwrap(), vec![pp(&[(1, 2)])]);
        assert_eq!(
            enumerate_pp(2).unwrap(),
            vec![
                pp(&[(1, 2), (3, 4)]),
                pp(&[(1, 3), (2, 4)]),
                pp(&[(1, 4), (2, 3)])
            ]
        );
        for n in 0..=6 {
            let all = enumerate_pp(n).unwrap();
            assert_eq!(all.len(), double_factorial(n));
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
        assert!(matches!(enumerate_pp(7), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(pp(&[(1, 2)]).tau(), seq(&[-1, 1]));
        assert_eq!(pp(&[(1, 4), (2, 3)]).tau(), seq(&[-1, -1, 1, 1]));
        assert_eq!(pp(&[(1, 3), (2, 4)]).tau(), seq(&[-1, -1, 1, 1]));
    }

    #[test]
    fn pp_with_sign_examples() {
        assert_eq!(pp_with_sign(&seq(&[-1, 1])).unwrap(), vec![pp(&[(1, 2)])]);
        let two: BTreeSet<_> = pp_with_sign(&seq(&[-1, -1, 1, 1]))
            .unwrap()
            .into_iter()
            .collect();
        let expected: BTreeSet<_> = [pp(&[(1, 4), (2, 3)]), pp(&[(1, 3), (2, 4)])]
            .into_iter()
            .collect();
        assert_eq!(two, expected);
        let eps = seq(&[-1, -1, -1, 1, 1, 1]);
        assert_eq!(pp_with_sign(&eps).unwrap().len(), 6);
        assert_eq!(pp_with_sign_count(&eps).unwrap(), 6);
        assert_eq!(
            pp_with_sign(&seq(&[1, -1])),
            Err(Error::NotPositive("1,-1".into()))
        );
    }

    #[test]
    fn counterpart_examples() {
        assert_eq!(
            ncpp_counterpart(&seq(&[-1, -1, 1, 1])).unwrap(),
            pp(&[(1, 4), (2, 3)])
        );
        assert_eq!(
            ncpp_counterpart(&seq(&[-1, 1, -1, 1])).unwrap(),
            pp(&[(1, 2), (3, 4)])
        );
        assert_eq!(
            ncpp_counterpart(&seq(&[-1, -1, -1, 1, 1, 1])).unwrap(),
            pp(&[(1, 6), (2, 5), (3, 4)])
        );
        assert!(ncpp_counterpart(&seq(&[-1, 1, 1, -1])).is_err());
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(pp(&[(1, 2), (3, 4)]).crossing_number(), 0);
        assert_eq!(pp(&[(1, 3), (2, 4)]).crossing_number(), 1);
        assert_eq!(pp(&[(1, 4), (2, 6), (3, 5)]).crossing_number(), 2);
        assert_eq!(PairPartition::empty().crossing_number(), 0);
    }

    // Brute force over all ordered 4-tuples of support labels.
    fn crossing_by_quadruples(theta: &PairPartition) -> usize {
        let pairs = theta.pairs();
        let mut count = 0;
        for a in pairs {
            for b in pairs {
                let (l1, r1) = *a;
                let (l2, r2) = *b;
                if l1 < l2 && l2 < r1 && r1 < r2 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn crossing_matches_quadruple_count() {
        for n in 0..=5 {
            for theta in enumerate_pp(n).unwrap() {
                assert_eq!(theta.crossing_number(), crossing_by_quadruples(&theta));
            }
        }
    }

    #[test]
    fn depth_examples() {
        let nested = pp(&[(1, 6), (2, 5), (3, 4)]);
        assert_eq!(nested.depth(2).unwrap(), 2);
        assert_eq!(nested.depth(0).unwrap(), 0);
        assert_eq!(pp(&[(1, 2), (3, 4)]).depth(1).unwrap(), 0);
        assert_eq!(pp(&[(1, 3), (2, 4)]).depth(0), Err(Error::CrossingInput));
        assert_eq!(
            nested.depth(3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn glue_examples() {
        let glued = glue(&[pp(&[(1, 5), (3, 4)]), pp(&[(2, 6)])]).unwrap();
        assert_eq!(glued, pp(&[(1, 5), (2, 6), (3, 4)]));
        assert_eq!(glued.pairs(), &[(1, 5), (2, 6), (3, 4)]);
        let theta = pp(&[(1, 3), (2, 4)]);
        assert_eq!(glue(std::slice::from_ref(&theta)).unwrap(), theta);
        assert_eq!(
            glue(&[pp(&[(1, 2)]), pp(&[(3, 4)])]).unwrap(),
            pp(&[(1, 2), (3, 4)])
        );
        assert_eq!(
            glue(&[pp(&[(1, 2)]), pp(&[(2, 3)])]),
            Err(Error::OverlappingSupport(2))
        );
        assert_eq!(glue(&[]).unwrap(), PairPartition::empty());
    }

    #[test]
    fn construction_and_parsing() {
        assert_eq!(
            PairPartition::new(vec![(2, 1)]),
            Err(Error::InvalidPair { left: 2, right: 1 })
        );
        assert_eq!(
            PairPartition::new(vec![(1, 2), (2, 3)]),
            Err(Error::DuplicateLabel(2))
        );
        let theta: PairPartition = "2-3,1-4".parse().unwrap();
        assert_eq!(theta.pairs(), &[(1, 4), (2, 3)]);
        assert_eq!(theta.to_arg_string(), "1-4,2-3");
        assert_eq!(theta.to_string(), "{(1,4),(2,3)}");
        assert!("1:2".parse::<PairPartition>().is_err());
    }

    #[test]
    fn recursive_and_filter_routes_agree() {
        for n in 0..=5 {
            for eps in crate::sign::enumerate_positive_signs(n).unwrap() {
                let rec = pp_with_sign(&eps).unwrap();
                let filt = pp_with_sign_by_filter(&eps).unwrap();
                assert_eq!(rec, filt, "{eps}");
                assert_eq!(rec.len() as u64, pp_with_sign_count(&eps).unwrap());
                let nc: Vec<_> = rec.iter().filter(|t| t.crossing_number() == 0).collect();
                assert_eq!(nc, vec![&ncpp_counterpart(&eps).unwrap()]);
            }
        }
    }

    #[test]
    fn works_on_general_label_sets() {
        let eps = SignSequence::with_positions(
            vec![Sign::Minus, Sign::Minus, Sign::Plus, Sign::Plus],
            vec![1, 2, 5, 6],
        )
        .unwrap();
        let all = pp_with_sign(&eps).unwrap();
        assert_eq!(all, vec![pp(&[(1, 5), (2, 6)]), pp(&[(1, 6), (2, 5)])]);
        assert_eq!(ncpp_counterpart(&eps).unwrap(), pp(&[(1, 6), (2, 5)]));
    }
}
