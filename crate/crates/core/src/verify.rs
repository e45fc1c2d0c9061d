//! Exhaustive cross-checks at small size.
//!
//! Every check produces one [`VerifyReport`] per instance. A failing report
//! carries both computed values so that the instance can be replayed.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilation, apply_creation, apply_word, check_q, lambda_inner,
    vacuum_expectation_operator, vacuum_expectation_with_labels, ElementaryTensor, FockVector,
    NumericGram,
};
use crate::norm::{
    annihilation_creation_norm, creation_annihilation_norm, creation_norm_formula,
    lambda_min_eigenvalue, restricted_annihilation_norm, restricted_creation_norm,
    sup_creation_norm,
};
use crate::partition::{
    enumerate_pp, last_left_branches, ncpp_counterpart, pp_with_sign, pp_with_sign_by_filter,
    pp_with_sign_count, PairPartition,
};
use crate::poly::{Monomial, MultiPoly};
use crate::pset::build_p_set;
use crate::sign::{all_sign_sequences, enumerate_positive_signs, Label, SignSequence};

/// Relative tolerance for floating norms.
pub const NORM_RTOL: f64 = 1e-8;
/// Absolute floor for the smallest eigenvalue of `λₙ`.
pub const PSD_ATOL: f64 = 1e-10;

pub const MAIN_THEOREM: &str = "main_theorem";
pub const SCALAR_FORM: &str = "scalar_form";
pub const UNIQUENESS: &str = "uniqueness";
pub const VANISHING: &str = "vanishing";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Identifies one checked instance; unused fields stay empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
}

impl Instance {
    fn eps(eps: &SignSequence) -> Self {
        Instance {
            n: Some(eps.len() / 2),
            eps: Some(eps.to_string()),
            ..Default::default()
        }
    }

    fn theta(theta: &PairPartition) -> Self {
        Instance {
            n: Some(theta.len()),
            theta: Some(theta.to_arg_string()),
            ..Default::default()
        }
    }

    fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
}

/// Both sides of a failed comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub instance: Instance,
    pub status: Status,
    pub detail: Option<Counterexample>,
}

impl VerifyReport {
    fn compare(check: &str, instance: Instance, expected: String, actual: String) -> Self {
        if expected == actual {
            Self::pass(check, instance)
        } else {
            Self::fail(check, instance, expected, actual)
        }
    }

    fn pass(check: &str, instance: Instance) -> Self {
        VerifyReport {
            check: check.to_string(),
            instance,
            status: Status::Pass,
            detail: None,
        }
    }

    fn fail(check: &str, instance: Instance, expected: String, actual: String) -> Self {
        VerifyReport {
            check: check.to_string(),
            instance,
            status: Status::Fail,
            detail: Some(Counterexample { expected, actual }),
        }
    }

    fn from_bool(check: &str, instance: Instance, ok: bool, what: impl FnOnce() -> (String, String)) -> Self {
        if ok {
            Self::pass(check, instance)
        } else {
            let (e, a) = what();
            Self::fail(check, instance, e, a)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_passed(reports: &[VerifyReport]) -> bool {
    reports.iter().all(VerifyReport::passed)
}

fn sorted(mut reports: Vec<VerifyReport>) -> Vec<VerifyReport> {
    reports.sort();
    reports
}

fn check_range(what: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value > hi {
        Err(Error::BoundExceeded { n: value, max: hi })
    } else if value < lo {
        Err(Error::Dimension(format!("{what} = {value} is below {lo}")))
    } else {
        Ok(())
    }
}

fn positive_signs_up_to(n_max: usize) -> Result<Vec<SignSequence>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(enumerate_positive_signs(n)?);
    }
    Ok(out)
}

/// Combinatorial side of the main identity.
pub fn combinatorial_moment(eps: &SignSequence) -> Result<MultiPoly> {
    Ok(build_p_set(eps)?.moment_polynomial())
}

/// Symbolic operator expectation versus the `q^{c(θ)}`-weighted P-set sum,
/// for every positive `ε` with `1 <= n <= n_max`, plus the check that the
/// final state is a multiple of the vacuum.
pub fn check_main_theorem(n_max: usize) -> Result<Vec<VerifyReport>> {
    check_range("n_max", n_max, 1, 5)?;
    let mut reports = Vec::new();
    for eps in positive_signs_up_to(n_max)? {
        let (expected, actual) = replay_main_theorem(&eps)?;
        reports.push(VerifyReport::compare(
            MAIN_THEOREM,
            Instance::eps(&eps),
            expected.to_string(),
            actual.to_string(),
        ));
        let state = apply_word(&eps, eps.positions(), &crate::fock::SymbolicGram)?;
        reports.push(VerifyReport::from_bool(
            SCALAR_FORM,
            Instance::eps(&eps),
            state.is_scalar(),
            || ("grade 0".into(), format!("grade {:?}", state.grade())),
        ));
    }
    Ok(sorted(reports))
}

/// `(combinatorial, operator)` polynomials for one sequence.
pub fn replay_main_theorem(eps: &SignSequence) -> Result<(MultiPoly, MultiPoly)> {
    Ok((combinatorial_moment(eps)?, vacuum_expectation_operator(eps)))
}

/// Gram-monomial support of the operator expectation must be exactly the
/// P-set, each with coefficient `q^{c(θ)}`.
pub fn check_uniqueness(n_max: usize) -> Result<Vec<VerifyReport>> {
    check_range("n_max", n_max, 1, 4)?;
    let mut reports = Vec::new();
    for eps in positive_signs_up_to(n_max)? {
        let (expected, actual) = replay_uniqueness(&eps)?;
        reports.push(VerifyReport::compare(
            UNIQUENESS,
            Instance::eps(&eps),
            expected,
            actual,
        ));
    }
    Ok(sorted(reports))
}

/// Renders, for both routes, the map `Gram monomial ↦ coefficient`.
pub fn replay_uniqueness(eps: &SignSequence) -> Result<(String, String)> {
    let pset = build_p_set(eps)?;
    let expected: BTreeSet<String> = pset
        .members
        .iter()
        .map(|theta| {
            let gram = Monomial::new(0, theta.pairs().to_vec()).expect("valid pairs");
            format!("{gram} -> q^{}", theta.crossing_number())
        })
        .collect();
    if expected.len() != pset.members.len() {
        return Ok((
            format!("{} distinct Gram monomials", pset.members.len()),
            format!("{} distinct Gram monomials", expected.len()),
        ));
    }
    let op = vacuum_expectation_operator(eps);
    let actual: BTreeSet<String> = op
        .terms()
        .map(|(m, c)| {
            let gram = Monomial::new(0, m.gram_factors().to_vec()).expect("valid factors");
            if c.is_one() {
                format!("{gram} -> q^{}", m.q_degree())
            } else {
                format!("{gram} -> {c} q^{}", m.q_degree())
            }
        })
        .collect();
    let join = |s: BTreeSet<String>| s.into_iter().collect::<Vec<_>>().join("; ");
    Ok((join(expected), join(actual)))
}

fn catalan(n: usize) -> u64 {
    // C_{k+1} = C_k · 2(2k+1)/(k+2)
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k as u64 + 1) / (k as u64 + 2))
}

/// Positive-class counts against brute-force filtering and the Catalan
/// numbers, `1 <= n <= n_max <= 6`.
pub fn check_catalan_counts(n_max: usize) -> Result<Vec<VerifyReport>> {
    check_range("n_max", n_max, 1, 6)?;
    let mut reports = Vec::new();
    for n in 1..=n_max {
        let generated = enumerate_positive_signs(n)?;
        let brute: Vec<SignSequence> = all_sign_sequences(2 * n)
            .into_iter()
            .filter(|s| s.is_positive())
            .collect();
        let expected = catalan(n);
        reports.push(VerifyReport::from_bool(
            "positive_class_catalan",
            Instance {
                n: Some(n),
                ..Default::default()
            },
            generated == brute && generated.len() as u64 == expected,
            || {
                (
                    format!("{expected} (brute force {})", brute.len()),
                    generated.len().to_string(),
                )
            },
        ));
    }
    Ok(reports)
}

/// Every pair-partition identity, exhaustively for `1 <= n <= n_max <= 5`.
pub fn check_combinatorics(n_max: usize) -> Result<Vec<VerifyReport>> {
    check_range("n_max", n_max, 1, 5)?;
    let mut reports = check_catalan_counts(n_max)?;
    for n in 1..=n_max {
        for theta in enumerate_pp(n)? {
            check_crossing(&theta, &mut reports)?;
            if theta.is_non_crossing() {
                check_depths(&theta, &mut reports)?;
            }
        }
        for eps in enumerate_positive_signs(n)? {
            check_sign_structures(&eps, &mut reports)?;
        }
    }
    Ok(sorted(reports))
}

fn count<F: Fn(usize) -> bool>(n: usize, pred: F) -> usize {
    (0..n).filter(|&h| pred(h)).count()
}

fn check_crossing(theta: &PairPartition, out: &mut Vec<VerifyReport>) -> Result<()> {
    let c = theta.crossing_number();
    out.push(VerifyReport::from_bool(
        "crossing_zero_iff_noncrossing",
        Instance::theta(theta),
        (c == 0) == theta.is_non_crossing(),
        || (format!("non-crossing = {}", theta.is_non_crossing()), format!("c = {c}")),
    ));

    // Two strictly increasing relabelings of the support.
    let stretched = theta.relabel(|v| 3 * v + 1)?;
    let squared = theta.relabel(|v| v * v + 7)?;
    out.push(VerifyReport::from_bool(
        "crossing_relabel_invariance",
        Instance::theta(theta),
        stretched.crossing_number() == c && squared.crossing_number() == c,
        || {
            (
                c.to_string(),
                format!("{} / {}", stretched.crossing_number(), squared.crossing_number()),
            )
        },
    ));

    let n = theta.len();
    if n < 2 {
        return Ok(());
    }
    let pairs = theta.pairs();
    for k in 0..n {
        let (lk, rk) = pairs[k];
        let reduced = theta.without_pair(k)?;
        let before = count(n, |h| {
            let (lh, rh) = pairs[h];
            lh < lk && lk < rh && rh < rk
        });
        let after = count(n, |h| {
            let (lh, rh) = pairs[h];
            lk < lh && lh < rk && rk < rh
        });
        let expected = reduced.crossing_number() + before + after;
        let mut ok = c == expected;
        if rk == lk + 1 {
            ok &= c == reduced.crossing_number();
        }
        if rk == lk + 2 {
            ok &= c == reduced.crossing_number() + 1;
        }
        if k == n - 1 {
            ok &= c == reduced.crossing_number() + (rk - lk - 1) as usize;
        }
        out.push(VerifyReport::from_bool(
            "crossing_removal",
            Instance::theta(theta).with_k(k + 1),
            ok,
            || (expected.to_string(), c.to_string()),
        ));
    }
    Ok(())
}

fn check_depths(theta: &PairPartition, out: &mut Vec<VerifyReport>) -> Result<()> {
    let n = theta.len();
    let pairs = theta.pairs();
    let depths = theta.depths()?;
    let two_n = 2 * n as Label;

    // Counting identity, last pair, and the two depth-0 pairs.
    let by_counts: Vec<usize> = (0..n).map(|k| theta.depth_by_counts(k)).collect::<Result<_>>()?;
    let (ln, rn) = pairs[n - 1];
    let outer = pairs.iter().position(|p| p.1 == two_n).expect("2n is a right index");
    let ok = by_counts == depths
        && depths[n - 1] == (two_n - rn) as usize
        && rn == ln + 1
        && depths[0] == 0
        && depths[outer] == 0;
    out.push(VerifyReport::from_bool(
        "depth_counting",
        Instance::theta(theta),
        ok,
        || (format!("{depths:?}"), format!("{by_counts:?}")),
    ));

    for k in 0..n {
        let reduced = theta.without_pair(k)?;
        let (lk, rk) = pairs[k];
        let mut ok = reduced.is_non_crossing();
        let mut first_bad = None;
        for p in (0..n).filter(|&p| p != k) {
            let (lp, rp) = pairs[p];
            let p_red = if p < k { p } else { p - 1 };
            let d_red = reduced.depth(p_red)?;
            let d_red_counts = count(n, |h| h != k && pairs[h].1 > rp)
                - count(n, |h| h != k && pairs[h].0 > rp);
            let inside = lk < lp && rp < rk;
            let predicted = if inside { depths[p] - 1 } else { depths[p] };
            let lower = if inside { depths[k] } else { depths[p] };
            let mut p_ok = d_red == d_red_counts && d_red == predicted && d_red >= lower;

            // Sufficient conditions for the depth to be unchanged.
            let unchanged = rk == lk + 1
                || (0..n).any(|s| depths[k] >= s && depths[p] <= s)
                || (1..n).any(|s| depths[k] >= s && d_red < s);
            if unchanged {
                p_ok &= d_red == depths[p];
            }
            if depths[k] >= 1 {
                p_ok &= (d_red == 0) == (depths[p] == 0);
            }
            if depths[k] >= 2 {
                p_ok &= (d_red == 1) == (depths[p] == 1);
            }
            if !p_ok && first_bad.is_none() {
                first_bad = Some((p, predicted, d_red));
            }
            ok &= p_ok;
        }
        out.push(VerifyReport::from_bool(
            "depth_removal",
            Instance::theta(theta).with_k(k + 1),
            ok,
            || match first_bad {
                Some((p, predicted, got)) => {
                    (format!("pair {}: depth {predicted}", p + 1), format!("depth {got}"))
                }
                None => ("non-crossing remainder".into(), "crossing remainder".into()),
            },
        ));
    }

    // Reattaching the outer right index when the last pair is (2n-2, 2n-1).
    if n >= 2 && ln == two_n - 2 {
        let m = outer;
        let mut ok = m < n - 1 && depths[m] == 0;
        for r in [two_n - 1, two_n] {
            let moved: Vec<_> = pairs[..n - 1]
                .iter()
                .enumerate()
                .map(|(h, &(l, rr))| if h == m { (l, r) } else { (l, rr) })
                .collect();
            let reattached = PairPartition::new(moved)?;
            ok &= reattached.is_non_crossing();
            if ok {
                ok &= (0..n - 1).all(|p| reattached.depth(p).ok() == Some(depths[p]));
            }
        }
        out.push(VerifyReport::from_bool(
            "depth_tail_reattachment",
            Instance::theta(theta),
            ok,
            || ("depths preserved".into(), "depths changed".into()),
        ));
    }
    Ok(())
}

fn check_sign_structures(eps: &SignSequence, out: &mut Vec<VerifyReport>) -> Result<()> {
    let recursive = pp_with_sign(eps)?;
    let brute = pp_with_sign_by_filter(eps)?;
    let formula = pp_with_sign_count(eps)?;
    let nc: Vec<&PairPartition> = brute.iter().filter(|t| t.crossing_number() == 0).collect();
    out.push(VerifyReport::from_bool(
        "cardinality",
        Instance::eps(eps),
        brute.len() as u64 == formula && nc.len() == 1,
        || (format!("{formula} elements, 1 non-crossing"), format!("{} elements, {} non-crossing", brute.len(), nc.len())),
    ));

    let counterpart = ncpp_counterpart(eps)?;
    out.push(VerifyReport::from_bool(
        "counterpart",
        Instance::eps(eps),
        nc == vec![&counterpart] && counterpart.tau() == *eps && counterpart.crossing_number() == 0,
        || {
            (
                nc.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
                counterpart.to_string(),
            )
        },
    ));

    // Branches over the partner of the last -1 label: each restriction stays
    // positive, branches are disjoint, and their union is everything.
    let branches = last_left_branches(eps)?;
    let mut union = BTreeSet::new();
    let mut total = 0;
    let mut ok = true;
    for b in &branches {
        ok &= b.rest.is_positive();
        let head = PairPartition::new(vec![b.pair])?;
        for sub in pp_with_sign(&b.rest)? {
            union.insert(crate::partition::glue(&[sub, head.clone()])?);
            total += 1;
        }
    }
    let brute_set: BTreeSet<_> = brute.iter().cloned().collect();
    ok &= total == union.len() && union == brute_set;
    ok &= recursive == brute;
    out.push(VerifyReport::from_bool(
        "decomposition",
        Instance::eps(eps),
        ok,
        || (format!("{} partitions", brute.len()), format!("{total} branch members, {} distinct", union.len())),
    ));

    let pset = build_p_set(eps)?;
    let lefts = eps.minus_labels();
    let distinct: BTreeSet<_> = pset.members.iter().collect();
    let variable = pp_with_sign(&eps.restrict(&pset.variable_labels)?)?;
    let ok = pset.members.contains(&counterpart)
        && pset.members.iter().all(|m| brute_set.contains(m))
        && pset.members.iter().all(|m| m.lefts() == lefts)
        && pset
            .members
            .iter()
            .all(|m| pset.fixed_deep_pairs.iter().all(|&p| m.contains_pair(p)))
        && distinct.len() == pset.members.len()
        && pset.members.len() == variable.len();
    out.push(VerifyReport::from_bool(
        "pset_structure",
        Instance::eps(eps),
        ok,
        || ("well-formed P-set".into(), format!("{} members", pset.members.len())),
    ));
    Ok(())
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Fixed non-orthogonal rational test vectors in `Q^dim`.
pub fn test_vectors(dim: usize) -> Vec<Vec<BigRational>> {
    match dim {
        2 => vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(1, 2), r(-1, 1)],
            vec![r(2, 1), r(3, 1)],
        ],
        _ => vec![
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(1, 2), r(-1, 1), r(1, 1)],
            vec![r(0, 1), r(2, 1), r(-1, 3)],
        ],
    }
}

fn render_vector(v: &[BigRational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn close(computed: f64, reference: f64) -> bool {
    (computed - reference).abs() <= NORM_RTOL * reference.abs()
}

fn words(alphabet: usize, grade: usize) -> Vec<Vec<Label>> {
    crate::norm::basis_tensors(alphabet, grade)
        .into_iter()
        .map(|t| t.0)
        .collect()
}

fn check_fock_args(q_grid: &[BigRational], dim: usize, n_max: usize) -> Result<()> {
    if !(2..=3).contains(&dim) {
        return Err(Error::Dimension(format!("dimension {dim} must be 2 or 3")));
    }
    check_range("n_max", n_max, 1, 3)?;
    q_grid.iter().try_for_each(check_q)
}

fn q_instance(q: &BigRational, dim: usize) -> Instance {
    Instance {
        q: Some(q.to_string()),
        dim: Some(dim),
        ..Default::default()
    }
}

/// `⟨A⁺(f)F, G⟩ = ⟨F, A(f)G⟩` exactly, for every `q`, every grade
/// `n <= n_max` of `F`, over the labelled test vectors in `Q^dim`.
pub fn check_adjointness(q_grid: &[BigRational], dim: usize, n_max: usize) -> Result<Vec<VerifyReport>> {
    check_fock_args(q_grid, dim, n_max)?;
    let vectors = test_vectors(dim);
    let mut reports = Vec::new();
    for q in q_grid {
        let gram = NumericGram::from_vectors(q.clone(), &vectors)?;
        for n in 0..=n_max {
            reports.push(adjointness_at(&gram, vectors.len(), n, q_instance(q, dim))?);
        }
    }
    Ok(sorted(reports))
}

/// Smallest eigenvalue of `λₙ` on `(R^dim)^{⊗n}` for `2 <= n <= n_max + 1`.
pub fn check_lambda_positivity(q_grid: &[BigRational], dim: usize, n_max: usize) -> Result<Vec<VerifyReport>> {
    check_fock_args(q_grid, dim, n_max)?;
    let mut reports = Vec::new();
    for q in q_grid {
        for grade in 2..=n_max + 1 {
            let min = lambda_min_eigenvalue(grade, dim, q)?;
            reports.push(VerifyReport::from_bool(
                "lambda_positivity",
                Instance {
                    n: Some(grade),
                    ..q_instance(q, dim)
                },
                min >= -PSD_ATOL,
                || (format!(">= -{PSD_ATOL:e}"), format!("{min:e}")),
            ));
        }
    }
    Ok(sorted(reports))
}

/// Closed-form norm of `A⁺(f)` against the sup of restricted norms over
/// `n <= n_max`, the symmetry `‖A(f)|H_{n+1}‖ = ‖A⁺(f)|H_n‖` for `n <= 2`,
/// and `‖A A⁺|H_n‖ = ‖A⁺|H_n‖²`, `‖A⁺ A|H_n‖ = ‖A|H_n‖²`.
pub fn check_norms(
    q_grid: &[BigRational],
    vectors: &[Vec<BigRational>],
    n_max: usize,
) -> Result<Vec<VerifyReport>> {
    let dim = vectors.first().map_or(2, Vec::len);
    check_fock_args(q_grid, dim, n_max)?;
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::Dimension(format!("vector of length {} in dimension {dim}", v.len())));
    }
    let mut reports = Vec::new();
    for q in q_grid {
        for f in vectors {
            let inst = Instance {
                f: Some(render_vector(f)),
                ..q_instance(q, dim)
            };
            let sup = sup_creation_norm(f, q, n_max)?;
            let formula = creation_norm_formula(f, q);
            reports.push(VerifyReport::from_bool(
                "norm_formula",
                inst.clone(),
                close(sup, formula),
                || (format!("{formula:.12}"), format!("{sup:.12}")),
            ));
            for n in 0..=n_max.min(2) {
                let cre = restricted_creation_norm(f, n, q)?;
                let ann = restricted_annihilation_norm(f, n + 1, q)?;
                reports.push(VerifyReport::from_bool(
                    "norm_symmetry",
                    Instance {
                        n: Some(n),
                        ..inst.clone()
                    },
                    close(ann, cre),
                    || (format!("{cre:.12}"), format!("{ann:.12}")),
                ));
            }
            for n in 0..=n_max {
                let cre = restricted_creation_norm(f, n, q)?;
                let ann = restricted_annihilation_norm(f, n, q)?;
                let ac = annihilation_creation_norm(f, n, q)?;
                let ca = creation_annihilation_norm(f, n, q)?;
                reports.push(VerifyReport::from_bool(
                    "norm_product",
                    Instance {
                        n: Some(n),
                        ..inst.clone()
                    },
                    close(ac, cre * cre) && close(ca, ann * ann),
                    || {
                        (
                            format!("{:.12} / {:.12}", cre * cre, ann * ann),
                            format!("{ac:.12} / {ca:.12}"),
                        )
                    },
                ));
            }
        }
    }
    Ok(sorted(reports))
}

/// With every test function equal to one vector of squared norm `13/4`,
/// the expectation collapses to `(13/4)^n Σ_{θ∈P} q^{c(θ)}`.
pub fn check_single_function_reduction(q_grid: &[BigRational], n_max: usize) -> Result<Vec<VerifyReport>> {
    check_range("n_max", n_max, 1, 5)?;
    q_grid.iter().try_for_each(check_q)?;
    let norm_sq = r(13, 4);
    let mut reports = Vec::new();
    for q in q_grid {
        let single = NumericGram::new(q.clone(), vec![vec![norm_sq.clone()]])?;
        for eps in positive_signs_up_to(n_max)? {
            let n = eps.len() / 2;
            let actual = vacuum_expectation_with_labels(&eps, &vec![0; eps.len()], &single)?;
            let weight: BigRational = build_p_set(&eps)?
                .members
                .iter()
                .map(|t| pow(q, t.crossing_number()))
                .sum();
            reports.push(VerifyReport::compare(
                "single_function_reduction",
                Instance {
                    n: Some(n),
                    eps: Some(eps.to_string()),
                    q: Some(q.to_string()),
                    ..Default::default()
                },
                (pow(&norm_sq, n) * weight).to_string(),
                actual.to_string(),
            ));
        }
    }
    Ok(sorted(reports))
}

/// The symbolic expectation is zero for every sign sequence of length
/// `1..=max_len` outside the positive class.
pub fn check_vanishing(max_len: usize) -> Result<Vec<VerifyReport>> {
    check_range("max_len", max_len, 1, 10)?;
    let mut reports = Vec::new();
    for len in 1..=max_len {
        for eps in all_sign_sequences(len).into_iter().filter(|s| !s.is_positive()) {
            reports.push(VerifyReport::compare(
                VANISHING,
                Instance {
                    n: Some(len),
                    eps: Some(eps.to_string()),
                    ..Default::default()
                },
                "0".into(),
                vacuum_expectation_operator(&eps).to_string(),
            ));
        }
    }
    Ok(sorted(reports))
}

/// Every operator-side check: adjointness, `λₙ` positivity, the norm
/// identities on the non-basis test vectors, the single-function reduction
/// for `n <= n_max + 1`, and vanishing up to length `2(n_max + 1)`.
pub fn check_fock_analysis(q_grid: &[BigRational], dim: usize, n_max: usize) -> Result<Vec<VerifyReport>> {
    check_fock_analysis_with(q_grid, dim, n_max, &[])
}

/// As [`check_fock_analysis`], with extra vectors `f` for the norm checks.
pub fn check_fock_analysis_with(
    q_grid: &[BigRational],
    dim: usize,
    n_max: usize,
    extra_vectors: &[Vec<BigRational>],
) -> Result<Vec<VerifyReport>> {
    check_fock_args(q_grid, dim, n_max)?;
    let mut norm_vectors = test_vectors(dim)[1..].to_vec();
    norm_vectors.extend(extra_vectors.iter().cloned());

    let mut reports = check_adjointness(q_grid, dim, n_max)?;
    reports.extend(check_lambda_positivity(q_grid, dim, n_max)?);
    reports.extend(check_norms(q_grid, &norm_vectors, n_max)?);
    reports.extend(check_single_function_reduction(q_grid, n_max + 1)?);
    reports.extend(check_vanishing(2 * (n_max + 1))?);
    Ok(sorted(reports))
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// `⟨A⁺(f)F, G⟩_{n+1} = ⟨F, A(f)G⟩_n` over all elementary `F` of grade `n`,
/// `G` of grade `n + 1` and `f` drawn from the labelled test vectors.
fn adjointness_at(
    gram: &NumericGram,
    alphabet: usize,
    n: usize,
    base: Instance,
) -> Result<VerifyReport> {
    let inst = Instance {
        n: Some(n),
        ..base
    };
    for f in 0..alphabet as Label {
        for fl in words(alphabet, n) {
            let big_f = FockVector::<BigRational>::basis(ElementaryTensor(fl.clone()));
            let created = apply_creation(f, &big_f);
            for gl in words(alphabet, n + 1) {
                let big_g = FockVector::basis(ElementaryTensor(gl.clone()));
                let lhs = lambda_inner(&created, &big_g, gram)?;
                let rhs = lambda_inner(&big_f, &apply_annihilation(f, &big_g, gram), gram)?;
                if lhs != rhs {
                    return Ok(VerifyReport::fail(
                        "adjointness",
                        Instance {
                            f: Some(format!("f={f} F={fl:?} G={gl:?}")),
                            ..inst
                        },
                        lhs.to_string(),
                        rhs.to_string(),
                    ));
                }
            }
        }
    }
    Ok(VerifyReport::pass("adjointness", inst))
}

/// Recomputes the two values of a report for the exact symbolic checks.
/// Returns `None` for checks that are not replayable this way.
pub fn replay(report: &VerifyReport) -> Result<Option<Counterexample>> {
    let Some(eps_str) = &report.instance.eps else {
        return Ok(None);
    };
    let eps: SignSequence = eps_str.parse()?;
    let (expected, actual) = match report.check.as_str() {
        MAIN_THEOREM => {
            let (e, a) = replay_main_theorem(&eps)?;
            (e.to_string(), a.to_string())
        }
        UNIQUENESS => replay_uniqueness(&eps)?,
        VANISHING => ("0".to_string(), vacuum_expectation_operator(&eps).to_string()),
        _ => return Ok(None),
    };
    Ok(Some(Counterexample { expected, actual }))
}

/// Default deformation grid.
pub fn default_q_grid() -> Vec<BigRational> {
    vec![r(-1, 1), r(-1, 2), BigRational::zero(), r(1, 2), r(1, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..=7).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn main_theorem_small() {
        let reports = check_main_theorem(1).unwrap();
        let main: Vec<_> = reports.iter().filter(|r| r.check == MAIN_THEOREM).collect();
        assert_eq!(main.len(), 1);
        assert!(all_passed(&reports));

        let reports = check_main_theorem(2).unwrap();
        assert_eq!(reports.iter().filter(|r| r.check == MAIN_THEOREM).count(), 3);
        assert!(all_passed(&reports));
    }

    #[test]
    fn bounds() {
        assert!(check_main_theorem(0).is_err());
        assert!(check_main_theorem(6).is_err());
        assert!(check_uniqueness(5).is_err());
        assert!(check_combinatorics(6).is_err());
        assert!(check_fock_analysis(&[r(0, 1)], 4, 1).is_err());
        assert!(check_fock_analysis(&[r(2, 1)], 2, 1).is_err());
        assert!(check_fock_analysis(&[r(0, 1)], 2, 4).is_err());
    }

    #[test]
    fn uniqueness_examples() {
        let eps: SignSequence = "-1,-1,1,1".parse().unwrap();
        let (e, a) = replay_uniqueness(&eps).unwrap();
        assert_eq!(e, a);
        assert_eq!(e, "g_{1,3} g_{2,4} -> q^1; g_{1,4} g_{2,3} -> q^0");
        let eps: SignSequence = "-1,1,-1,1".parse().unwrap();
        assert_eq!(replay_uniqueness(&eps).unwrap().1, "g_{1,2} g_{3,4} -> q^0");
        let eps: SignSequence = "-1,-1,-1,1,1,1".parse().unwrap();
        let (e, a) = replay_uniqueness(&eps).unwrap();
        assert_eq!(e, a);
        assert_eq!(a.split("; ").count(), 2);
    }

    #[test]
    fn pass_reports_have_no_payload() {
        for r in check_combinatorics(2).unwrap() {
            assert!(r.passed(), "{r:?}");
            assert!(r.detail.is_none());
        }
    }

    #[test]
    fn replay_reproduces_values() {
        for report in check_main_theorem(3).unwrap() {
            if report.check != MAIN_THEOREM {
                continue;
            }
            let ce = replay(&report).unwrap().unwrap();
            assert_eq!(ce.expected, ce.actual);
        }
        // A fabricated failing report replays to the real values.
        let bogus = VerifyReport::fail(
            MAIN_THEOREM,
            Instance::eps(&"-1,1".parse().unwrap()),
            "g_{1,2}".into(),
            "g_{1,2}".into(),
        );
        let ce = replay(&bogus).unwrap().unwrap();
        assert_eq!(ce, bogus.detail.unwrap());
    }

    #[test]
    fn deterministic() {
        assert_eq!(check_combinatorics(3).unwrap(), check_combinatorics(3).unwrap());
        assert_eq!(check_uniqueness(3).unwrap(), check_uniqueness(3).unwrap());
    }
}
