//! The distinguished subset of `PP(2n, ε)` that indexes the vacuum
//! expectation on the `(q,2)`-Fock space.
//!
//! Take the non-crossing counterpart of `ε` and split its pairs by depth.
//! Pairs of depth `>= 2` stay fixed. The labels of the pairs of depth 0 and 1
//! may be rematched arbitrarily, subject only to keeping `ε` on them.

use serde::Serialize;

use crate::error::Result;
use crate::partition::{glue, ncpp_counterpart, pp_with_sign, Pair, PairPartition};
use crate::poly::{Monomial, MultiPoly};
use crate::sign::{Label, SignSequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSet {
    /// Counterpart pairs of depth `>= 2`, shared by every member.
    pub fixed_deep_pairs: Vec<Pair>,
    /// Labels of the counterpart pairs of depth `<= 1`.
    pub variable_labels: Vec<Label>,
    pub members: Vec<PairPartition>,
}

impl PSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_θ q^{c(θ)} ∏_h g_{l_h, r_h}` over the members.
    pub fn moment_polynomial(&self) -> MultiPoly {
        self.members
            .iter()
            .map(partition_monomial)
            .fold(MultiPoly::zero(), |acc, p| &acc + &p)
    }
}

/// `q^{c(θ)} ∏ g_{l,r}` for one pair partition.
pub fn partition_monomial(theta: &PairPartition) -> MultiPoly {
    let m = Monomial::new(theta.crossing_number() as u32, theta.pairs().to_vec())
        .expect("pairs satisfy left < right");
    MultiPoly::term(num_traits::One::one(), m)
}

pub fn build_p_set(eps: &SignSequence) -> Result<PSet> {
    let counterpart = ncpp_counterpart(eps)?;
    let depths = counterpart.depths()?;
    let mut fixed_deep_pairs = Vec::new();
    let mut variable_labels = Vec::new();
    for (&(l, r), &d) in counterpart.pairs().iter().zip(&depths) {
        if d >= 2 {
            fixed_deep_pairs.push((l, r));
        } else {
            variable_labels.extend([l, r]);
        }
    }
    variable_labels.sort_unstable();

    let fixed = PairPartition::new(fixed_deep_pairs.clone())?;
    let variable_sign = eps.restrict(&variable_labels)?;
    let members = pp_with_sign(&variable_sign)?
        .into_iter()
        .map(|sigma| glue(&[fixed.clone(), sigma]))
        .collect::<Result<Vec<_>>>()?;

    Ok(PSet {
        fixed_deep_pairs,
        variable_labels,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::from_values(v).unwrap()
    }

    fn pp(pairs: &[Pair]) -> PairPartition {
        PairPartition::new(pairs.to_vec()).unwrap()
    }

    #[test]
    fn two_by_two_nested_is_everything() {
        let eps = seq(&[-1, -1, 1, 1]);
        let p = build_p_set(&eps).unwrap();
        assert_eq!(p.members, pp_with_sign(&eps).unwrap());
        assert!(p.fixed_deep_pairs.is_empty());
        assert_eq!(p.variable_labels, vec![1, 2, 3, 4]);
    }

    #[test]
    fn three_nested_fixes_the_innermost_pair() {
        let p = build_p_set(&seq(&[-1, -1, -1, 1, 1, 1])).unwrap();
        assert_eq!(p.fixed_deep_pairs, vec![(3, 4)]);
        assert_eq!(p.variable_labels, vec![1, 2, 5, 6]);
        assert_eq!(
            p.members,
            vec![pp(&[(1, 5), (2, 6), (3, 4)]), pp(&[(1, 6), (2, 5), (3, 4)])]
        );
    }

    #[test]
    fn single_pair() {
        let p = build_p_set(&seq(&[-1, 1])).unwrap();
        assert_eq!(p.members, vec![pp(&[(1, 2)])]);
        assert_eq!(p.moment_polynomial().to_string(), "g_{1,2}");
    }

    #[test]
    fn rejects_negative_class() {
        assert!(build_p_set(&seq(&[1, -1])).is_err());
    }

    #[test]
    fn members_contain_counterpart_and_share_lefts() {
        for n in 1..=5 {
            for eps in crate::sign::enumerate_positive_signs(n).unwrap() {
                let p = build_p_set(&eps).unwrap();
                let all = pp_with_sign(&eps).unwrap();
                assert!(p.members.contains(&ncpp_counterpart(&eps).unwrap()));
                for m in &p.members {
                    assert!(all.contains(m));
                    assert_eq!(m.lefts(), eps.minus_labels());
                    for &pair in &p.fixed_deep_pairs {
                        assert!(m.contains_pair(pair));
                    }
                }
            }
        }
    }

    #[test]
    fn moment_of_nested_pair() {
        let p = build_p_set(&seq(&[-1, -1, 1, 1])).unwrap();
        assert_eq!(
            p.moment_polynomial().to_string(),
            "g_{1,4} g_{2,3} + q^1 g_{1,3} g_{2,4}"
        );
    }
}
