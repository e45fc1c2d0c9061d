//! Direct simulation of creation and annihilation operators on the
//! `(q,2)`-Fock space.
//!
//! States are finite linear combinations of elementary tensors whose slots
//! hold test-function labels. Inner products between labels come from a
//! [`GramSource`]: either formal indeterminates `g_{i,j}` (exact symbolic
//! moments) or a concrete rational Gram matrix.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::sign::{Label, Sign, SignSequence};

/// Commutative ring used for state coefficients.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Scalar for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Source of one-particle inner products `⟨f, g⟩` and of the deformation
/// parameter, both valued in the same scalar ring.
pub trait GramSource {
    type Scalar: Scalar;

    fn inner(&self, f: Label, g: Label) -> Self::Scalar;

    fn q(&self) -> Self::Scalar;

    fn check_label(&self, _label: Label) -> Result<()> {
        Ok(())
    }
}

/// `⟨f_i, f_j⟩ ↦ g_{min(i,j), max(i,j)}`, `q ↦ q`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SymbolicGram;

impl GramSource for SymbolicGram {
    type Scalar = MultiPoly;

    fn inner(&self, f: Label, g: Label) -> MultiPoly {
        MultiPoly::gram(f, g).expect("symbolic words never pair a position with itself")
    }

    fn q(&self) -> MultiPoly {
        MultiPoly::q()
    }
}

/// Concrete rational Gram matrix indexed by labels `0..len`, together with
/// a numeric `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericGram {
    q: BigRational,
    matrix: Vec<Vec<BigRational>>,
}

pub fn check_q(q: &BigRational) -> Result<()> {
    let one = <BigRational as One>::one();
    if *q > one || *q < -one {
        Err(Error::InvalidQ(q.to_string()))
    } else {
        Ok(())
    }
}

impl NumericGram {
    /// Validates that `matrix` is square, symmetric, with a non-negative
    /// diagonal, and that `q ∈ [-1, 1]`.
    pub fn new(q: BigRational, matrix: Vec<Vec<BigRational>>) -> Result<Self> {
        check_q(&q)?;
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Gram(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            if row[i] < <BigRational as Zero>::zero() {
                return Err(Error::Gram(format!("diagonal entry {} is negative", i + 1)));
            }
            for j in 0..i {
                if row[j] != matrix[j][i] {
                    return Err(Error::Gram(format!("not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(NumericGram { q, matrix })
    }

    /// Gram matrix of explicit coordinate vectors (real dot product).
    pub fn from_vectors(q: BigRational, vectors: &[Vec<BigRational>]) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension("vectors of unequal length".into()));
        }
        let matrix = vectors
            .iter()
            .map(|a| vectors.iter().map(|b| dot(a, b)).collect())
            .collect();
        Self::new(q, matrix)
    }

    /// Orthonormal ground set `e_0, …, e_{dim-1}`.
    pub fn orthonormal(q: BigRational, dim: usize) -> Result<Self> {
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { <BigRational as One>::one() } else { <BigRational as Zero>::zero() })
                    .collect()
            })
            .collect();
        Self::new(q, matrix)
    }

    pub fn q_value(&self) -> &BigRational {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn matrix(&self) -> &[Vec<BigRational>] {
        &self.matrix
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl GramSource for NumericGram {
    type Scalar = BigRational;

    fn inner(&self, f: Label, g: Label) -> BigRational {
        self.matrix[f as usize][g as usize].clone()
    }

    fn q(&self) -> BigRational {
        self.q.clone()
    }

    fn check_label(&self, label: Label) -> Result<()> {
        if (label as usize) < self.matrix.len() {
            Ok(())
        } else {
            Err(Error::Gram(format!(
                "label {label} outside a Gram matrix of size {}",
                self.matrix.len()
            )))
        }
    }
}

/// `g_1 ⊗ … ⊗ g_n`; the empty tensor is the vacuum `Φ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryTensor(pub Vec<Label>);

impl ElementaryTensor {
    pub fn vacuum() -> Self {
        ElementaryTensor(Vec::new())
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }
}

/// Grade-homogeneous linear combination of elementary tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<S> {
    terms: BTreeMap<ElementaryTensor, S>,
}

impl<S: Scalar> Default for FockVector<S> {
    fn default() -> Self {
        FockVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(ElementaryTensor::vacuum())
    }

    pub fn basis(t: ElementaryTensor) -> Self {
        Self::from_term(t, S::one())
    }

    pub fn from_term(t: ElementaryTensor, coeff: S) -> Self {
        let mut v = Self::zero();
        v.accumulate(t, coeff);
        v
    }

    /// Adds `coeff · t`, rejecting a tensor of a different grade.
    pub fn add_term(&mut self, t: ElementaryTensor, coeff: S) -> Result<()> {
        if let Some(g) = self.grade() {
            if g != t.grade() {
                return Err(Error::GradeMismatch {
                    left: g,
                    right: t.grade(),
                });
            }
        }
        self.accumulate(t, coeff);
        Ok(())
    }

    fn accumulate(&mut self, t: ElementaryTensor, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(c) => {
                let sum = c.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&t);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(t, coeff);
            }
        }
    }

    /// `None` for the zero vector.
    pub fn grade(&self) -> Option<usize> {
        self.terms.keys().next().map(ElementaryTensor::grade)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ElementaryTensor, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &ElementaryTensor) -> S {
        self.terms.get(t).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `Φ`.
    pub fn vacuum_coefficient(&self) -> S {
        self.coefficient(&ElementaryTensor::vacuum())
    }

    /// True when the support lies in `{Φ}`.
    pub fn is_scalar(&self) -> bool {
        matches!(self.grade(), None | Some(0))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (t, x) in &self.terms {
            out.accumulate(t.clone(), x.mul(c));
        }
        out
    }
}

/// `A⁺(f)`: prepends `f` to every tensor.
pub fn apply_creation<S: Scalar>(label: Label, v: &FockVector<S>) -> FockVector<S> {
    let mut out = FockVector::zero();
    for (t, c) in v.terms() {
        let mut labels = Vec::with_capacity(t.grade() + 1);
        labels.push(label);
        labels.extend_from_slice(&t.0);
        out.accumulate(ElementaryTensor(labels), c.clone());
    }
    out
}

/// `A(f)`, extended linearly from
///
/// * `A(f)Φ = 0`,
/// * `A(f) g₁ = ⟨f, g₁⟩ Φ`,
/// * `A(f)(g₁⊗g₂) = ⟨f, g₁⟩ g₂ + q ⟨f, g₂⟩ g₁`,
/// * `A(f)(g₁⊗…⊗gₙ) = ⟨f, g₁⟩ g₂⊗…⊗gₙ` for `n > 2`.
pub fn apply_annihilation<G: GramSource>(
    label: Label,
    v: &FockVector<G::Scalar>,
    gram: &G,
) -> FockVector<G::Scalar> {
    let mut out = FockVector::zero();
    for (t, c) in v.terms() {
        let slots = &t.0;
        match slots.len() {
            0 => {}
            2 => {
                out.accumulate(
                    ElementaryTensor(vec![slots[1]]),
                    c.mul(&gram.inner(label, slots[0])),
                );
                out.accumulate(
                    ElementaryTensor(vec![slots[0]]),
                    c.mul(&gram.q()).mul(&gram.inner(label, slots[1])),
                );
            }
            _ => {
                out.accumulate(
                    ElementaryTensor(slots[1..].to_vec()),
                    c.mul(&gram.inner(label, slots[0])),
                );
            }
        }
    }
    out
}

/// `λₙ` on a state: the last two slots of each tensor are swapped with
/// weight `q` and added.
fn apply_lambda<G: GramSource>(v: &FockVector<G::Scalar>, gram: &G) -> FockVector<G::Scalar> {
    let mut out = v.clone();
    for (t, c) in v.terms() {
        let n = t.grade();
        if n >= 2 {
            let mut swapped = t.0.clone();
            swapped.swap(n - 2, n - 1);
            out.accumulate(ElementaryTensor(swapped), c.mul(&gram.q()));
        }
    }
    out
}

fn tensor_inner<G: GramSource>(a: &ElementaryTensor, b: &ElementaryTensor, gram: &G) -> G::Scalar {
    a.0.iter()
        .zip(&b.0)
        .fold(G::Scalar::one(), |acc, (&x, &y)| acc.mul(&gram.inner(x, y)))
}

/// `⟨F, G⟩ₙ := ⟨F, λₙ G⟩_{⊗n}`; for grades 0 and 1 this is the plain inner
/// product.
pub fn lambda_inner<G: GramSource>(
    f: &FockVector<G::Scalar>,
    g: &FockVector<G::Scalar>,
    gram: &G,
) -> Result<G::Scalar> {
    if let (Some(a), Some(b)) = (f.grade(), g.grade()) {
        if a != b {
            return Err(Error::GradeMismatch { left: a, right: b });
        }
    }
    let lg = apply_lambda(g, gram);
    let mut acc = G::Scalar::zero();
    for (ta, ca) in f.terms() {
        for (tb, cb) in lg.terms() {
            acc = acc.add(&ca.mul(cb).mul(&tensor_inner(ta, tb, gram)));
        }
    }
    Ok(acc)
}

/// `A^{ε(1)}(f_{label_1}) … A^{ε(m)}(f_{label_m}) Φ`, applied right to left.
pub fn apply_word<G: GramSource>(
    eps: &SignSequence,
    labels: &[Label],
    gram: &G,
) -> Result<FockVector<G::Scalar>> {
    if labels.len() != eps.len() {
        return Err(Error::LengthMismatch {
            values: eps.len(),
            positions: labels.len(),
        });
    }
    for &l in labels {
        gram.check_label(l)?;
    }
    let mut state = FockVector::vacuum();
    for (&sign, &label) in eps.values().iter().zip(labels).rev() {
        state = match sign {
            Sign::Plus => apply_creation(label, &state),
            Sign::Minus => apply_annihilation(label, &state, gram),
        };
        if state.is_zero() {
            break;
        }
    }
    Ok(state)
}

/// Vacuum expectation `⟨Φ, A^{ε(1)}(f_1) … A^{ε(m)}(f_m) Φ⟩` with the
/// test function at each position named by `labels`.
pub fn vacuum_expectation_with_labels<G: GramSource>(
    eps: &SignSequence,
    labels: &[Label],
    gram: &G,
) -> Result<G::Scalar> {
    Ok(apply_word(eps, labels, gram)?.vacuum_coefficient())
}

/// Vacuum expectation using the sequence's own position labels as test
/// function labels.
pub fn vacuum_expectation<G: GramSource>(eps: &SignSequence, gram: &G) -> Result<G::Scalar> {
    vacuum_expectation_with_labels(eps, eps.positions(), gram)
}

/// Symbolic vacuum expectation: a polynomial in `q` and the `g_{i,j}`.
/// Zero for every sequence outside the positive class.
pub fn vacuum_expectation_operator(eps: &SignSequence) -> MultiPoly {
    vacuum_expectation(eps, &SymbolicGram).expect("symbolic labels are always valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn t(labels: &[Label]) -> ElementaryTensor {
        ElementaryTensor(labels.to_vec())
    }

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::from_values(v).unwrap()
    }

    #[test]
    fn creation_examples() {
        let v: FockVector<MultiPoly> = apply_creation(1, &FockVector::vacuum());
        assert_eq!(v, FockVector::basis(t(&[1])));
        let v = apply_creation(1, &FockVector::<MultiPoly>::basis(t(&[2])));
        assert_eq!(v, FockVector::basis(t(&[1, 2])));
        let c = MultiPoly::q();
        let v = apply_creation(1, &FockVector::from_term(t(&[2, 3]), c.clone()));
        assert_eq!(v, FockVector::from_term(t(&[1, 2, 3]), c));
    }

    #[test]
    fn annihilation_examples() {
        let g = SymbolicGram;
        assert!(apply_annihilation(1, &FockVector::vacuum(), &g).is_zero());

        let out = apply_annihilation(1, &FockVector::basis(t(&[2, 3])), &g);
        assert_eq!(out.coefficient(&t(&[3])).to_string(), "g_{1,2}");
        assert_eq!(out.coefficient(&t(&[2])).to_string(), "q^1 g_{1,3}");
        assert_eq!(out.terms().count(), 2);

        let out = apply_annihilation(1, &FockVector::basis(t(&[2, 3, 4])), &g);
        assert_eq!(out.terms().count(), 1);
        assert_eq!(out.coefficient(&t(&[3, 4])).to_string(), "g_{1,2}");
    }

    #[test]
    fn vacuum_expectation_examples() {
        assert_eq!(vacuum_expectation_operator(&seq(&[-1, 1])).to_string(), "g_{1,2}");
        assert_eq!(
            vacuum_expectation_operator(&seq(&[-1, -1, 1, 1])).to_string(),
            "g_{1,4} g_{2,3} + q^1 g_{1,3} g_{2,4}"
        );
        assert!(vacuum_expectation_operator(&seq(&[1, -1])).is_zero());
    }

    #[test]
    fn lambda_inner_examples() {
        let q = r(1, 3);
        let gram = NumericGram::from_vectors(q.clone(), &[vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)], vec![r(2, 1), r(-1, 2)]]).unwrap();
        let f = FockVector::basis(t(&[2]));
        let g = FockVector::basis(t(&[0]));
        assert_eq!(lambda_inner(&f, &g, &gram).unwrap(), r(2, 1));

        let e12 = FockVector::basis(t(&[0, 1]));
        let e21 = FockVector::basis(t(&[1, 0]));
        assert_eq!(lambda_inner(&e12, &e21, &gram).unwrap(), q);

        // ‖f‖² = 17/4, so ⟨f⊗f, f⊗f⟩₂ = (1 + q)(17/4)².
        let ff = FockVector::basis(t(&[2, 2]));
        assert_eq!(
            lambda_inner(&ff, &ff, &gram).unwrap(),
            (r(1, 1) + &q) * r(289, 16)
        );

        let err = lambda_inner(&f, &e12, &gram);
        assert_eq!(err, Err(Error::GradeMismatch { left: 1, right: 2 }));
    }

    // λ₂ as an explicit 4×4 matrix on an orthonormal basis of C², checked
    // against the operator route entry by entry.
    #[test]
    fn lambda_two_matches_explicit_matrix() {
        let q = r(-1, 2);
        let gram = NumericGram::orthonormal(q.clone(), 2).unwrap();
        let basis = [[0, 0], [0, 1], [1, 0], [1, 1]];
        for a in basis {
            for b in basis {
                let expected = if a == b { r(1, 1) } else { r(0, 1) }
                    + if a[0] == b[1] && a[1] == b[0] { q.clone() } else { r(0, 1) };
                let got = lambda_inner(
                    &FockVector::basis(t(&a)),
                    &FockVector::basis(t(&b)),
                    &gram,
                )
                .unwrap();
                assert_eq!(got, expected, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn numeric_gram_validation() {
        assert!(matches!(
            NumericGram::new(r(2, 1), vec![]),
            Err(Error::InvalidQ(_))
        ));
        assert!(matches!(
            NumericGram::new(r(0, 1), vec![vec![r(1, 1), r(1, 2)], vec![r(1, 3), r(1, 1)]]),
            Err(Error::Gram(_))
        ));
        assert!(matches!(
            NumericGram::new(r(0, 1), vec![vec![r(-1, 1)]]),
            Err(Error::Gram(_))
        ));
        assert!(matches!(
            NumericGram::new(r(0, 1), vec![vec![r(1, 1), r(0, 1)]]),
            Err(Error::Gram(_))
        ));
        let g = NumericGram::orthonormal(r(0, 1), 2).unwrap();
        assert!(apply_word(&seq(&[-1, 1]), &[0, 5], &g).is_err());
    }

    #[test]
    fn add_term_rejects_mixed_grades() {
        let mut v = FockVector::<BigRational>::basis(t(&[1]));
        assert_eq!(
            v.add_term(t(&[1, 2]), r(1, 1)),
            Err(Error::GradeMismatch { left: 1, right: 2 })
        );
        v.add_term(t(&[1]), r(-1, 1)).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn numeric_route_is_evaluation_of_symbolic_route() {
        let eps = seq(&[-1, -1, 1, -1, 1, 1]);
        let q = r(-2, 5);
        let vectors = vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(-1, 2), r(1, 1)],
            vec![r(3, 1), r(0, 1)],
            vec![r(1, 3), r(-1, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(2, 1), r(2, 1)],
        ];
        let gram = NumericGram::from_vectors(q.clone(), &vectors).unwrap();
        let labels: Vec<Label> = (0..6).collect();
        let numeric = vacuum_expectation_with_labels(&eps, &labels, &gram).unwrap();
        let symbolic = vacuum_expectation_operator(&eps);
        let values = symbolic
            .indeterminates()
            .into_iter()
            .map(|(i, j)| ((i, j), gram.inner(i - 1, j - 1)))
            .collect();
        assert_eq!(symbolic.eval(&q, &values).unwrap(), numeric);
    }
}
