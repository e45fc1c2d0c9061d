//! Floating-point spectral checks on the finite-dimensional particle spaces:
//! positivity of `λₙ` and restricted operator norms of `A⁺(f)` and `A(f)`.
//!
//! All operator and Gram matrices are assembled exactly over the rationals,
//! in the elementary-tensor basis of an orthonormal ground set, and only
//! converted to `f64` for the dense eigen-solve. When `λₙ` is singular
//! (`|q| = 1`) norms are taken on the range of the Gram matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilation, apply_creation, check_q, lambda_inner, ElementaryTensor, FockVector,
    NumericGram,
};
use crate::sign::Label;

/// Eigenvalues at or below this are treated as the kernel of a Gram matrix.
pub const RANGE_CUTOFF: f64 = 1e-12;

/// Largest grade `n` accepted for restricted norms of `A⁺(f)|_{H_n}`.
pub const MAX_NORM_GRADE: usize = 3;

/// Elementary tensors `e_{i_1} ⊗ … ⊗ e_{i_n}` in lexicographic order.
pub fn basis_tensors(dim: usize, grade: usize) -> Vec<ElementaryTensor> {
    let mut out = vec![Vec::new()];
    for _ in 0..grade {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Label>| {
                (0..dim as Label).map(move |i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(ElementaryTensor).collect()
}

fn basis_index(t: &ElementaryTensor, dim: usize) -> usize {
    t.0.iter().fold(0, |acc, &i| acc * dim + i as usize)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("finite rational")
}

fn to_dense(rows: &[Vec<BigRational>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| to_f64(&rows[i][j]))
}

/// Exact matrix of `⟨·,·⟩ₙ` on the grade-`n` basis of an orthonormal ground
/// set of size `dim`.
pub fn lambda_gram_exact(grade: usize, dim: usize, q: &BigRational) -> Result<Vec<Vec<BigRational>>> {
    let gram = NumericGram::orthonormal(q.clone(), dim)?;
    let basis = basis_tensors(dim, grade);
    basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    lambda_inner(
                        &FockVector::basis(a.clone()),
                        &FockVector::basis(b.clone()),
                        &gram,
                    )
                })
                .collect()
        })
        .collect()
}

pub fn lambda_gram_matrix(grade: usize, dim: usize, q: &BigRational) -> Result<DMatrix<f64>> {
    Ok(to_dense(&lambda_gram_exact(grade, dim, q)?))
}

/// Smallest eigenvalue of the `λₙ` Gram matrix, for `2 <= n <= 4` and
/// `1 <= dim <= 3`.
pub fn lambda_min_eigenvalue(grade: usize, dim: usize, q: &BigRational) -> Result<f64> {
    if !(2..=4).contains(&grade) {
        return Err(Error::Dimension(format!("grade {grade} outside 2..=4")));
    }
    if !(1..=3).contains(&dim) {
        return Err(Error::Dimension(format!("dimension {dim} outside 1..=3")));
    }
    check_q(q)?;
    let m = lambda_gram_matrix(grade, dim, q)?;
    Ok(SymmetricEigen::new(m).eigenvalues.min())
}

/// `sup ‖Xv‖ / ‖v‖` where the domain carries Gram matrix `dom` and the
/// codomain `cod`, with `v` ranging over the range of `dom`.
pub fn operator_norm(x: &DMatrix<f64>, dom: &DMatrix<f64>, cod: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(dom.clone());
    let kept: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > RANGE_CUTOFF)
        .collect();
    if kept.is_empty() {
        return 0.0;
    }
    let w = DMatrix::from_fn(dom.nrows(), kept.len(), |i, k| {
        let col = kept[k];
        eig.eigenvectors[(i, col)] / eig.eigenvalues[col].sqrt()
    });
    let xw = x * &w;
    let b = xw.transpose() * cod * &xw;
    let sym = (&b + b.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.max().max(0.0).sqrt()
}

/// Ground set `e_0 … e_{dim-1}` plus `f` under label `dim`.
fn ground_with(f: &[BigRational], q: &BigRational) -> Result<NumericGram> {
    let dim = f.len();
    let mut vectors: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| BigRational::from_integer((i == j).into()))
                .collect()
        })
        .collect();
    vectors.push(f.to_vec());
    NumericGram::from_vectors(q.clone(), &vectors)
}

/// Coordinates of `v` in the grade-`grade` basis, expanding every slot that
/// holds label `f_label` into `Σ_k f_k e_k`.
fn coordinates(
    v: &FockVector<BigRational>,
    f_label: Label,
    f: &[BigRational],
    grade: usize,
) -> Vec<BigRational> {
    let dim = f.len();
    let mut out = vec![BigRational::zero(); dim.pow(grade as u32)];
    for (t, c) in v.terms() {
        let mut partial: Vec<(Vec<Label>, BigRational)> = vec![(Vec::new(), c.clone())];
        for &slot in &t.0 {
            partial = partial
                .into_iter()
                .flat_map(|(prefix, coeff)| {
                    let choices: Vec<(Label, BigRational)> = if slot == f_label {
                        f.iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(k, x)| (k as Label, x.clone()))
                            .collect()
                    } else {
                        vec![(slot, BigRational::from_integer(1.into()))]
                    };
                    choices.into_iter().map(move |(k, x)| {
                        let mut p = prefix.clone();
                        p.push(k);
                        (p, &coeff * x)
                    })
                })
                .collect();
        }
        for (labels, coeff) in partial {
            out[basis_index(&ElementaryTensor(labels), dim)] += coeff;
        }
    }
    out
}

fn columns_to_matrix(columns: Vec<Vec<BigRational>>, rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, columns.len(), |i, j| to_f64(&columns[j][i]))
}

/// Exact-to-float matrix of `A⁺(f): H_n → H_{n+1}` in the tensor basis.
fn creation_matrix(f: &[BigRational], grade: usize) -> DMatrix<f64> {
    let dim = f.len();
    let f_label = dim as Label;
    let columns = basis_tensors(dim, grade)
        .into_iter()
        .map(|t| {
            let image = apply_creation(f_label, &FockVector::basis(t));
            coordinates(&image, f_label, f, grade + 1)
        })
        .collect();
    columns_to_matrix(columns, dim.pow(grade as u32 + 1))
}

/// Matrix of `A(f): H_n → H_{n-1}`, `n >= 1`.
fn annihilation_matrix(f: &[BigRational], grade: usize, q: &BigRational) -> Result<DMatrix<f64>> {
    let dim = f.len();
    let f_label = dim as Label;
    let gram = ground_with(f, q)?;
    let columns = basis_tensors(dim, grade)
        .into_iter()
        .map(|t| {
            let image = apply_annihilation(f_label, &FockVector::basis(t), &gram);
            coordinates(&image, f_label, f, grade - 1)
        })
        .collect();
    Ok(columns_to_matrix(columns, dim.pow(grade as u32 - 1)))
}

fn check_norm_args(f: &[BigRational], q: &BigRational) -> Result<()> {
    check_q(q)?;
    if f.len() < 2 {
        return Err(Error::Dimension(format!(
            "ground space dimension must be at least 2, got {}",
            f.len()
        )));
    }
    Ok(())
}

fn check_grade(grade: usize, max: usize) -> Result<()> {
    if grade > max {
        Err(Error::Dimension(format!("grade {grade} exceeds cap {max}")))
    } else {
        Ok(())
    }
}

/// `‖A⁺(f)|_{H_n}‖` for `n <= MAX_NORM_GRADE`; the ground space is
/// `R^{f.len()}` with its standard basis.
pub fn restricted_creation_norm(f: &[BigRational], grade: usize, q: &BigRational) -> Result<f64> {
    check_norm_args(f, q)?;
    check_grade(grade, MAX_NORM_GRADE)?;
    let dim = f.len();
    let x = creation_matrix(f, grade);
    let dom = lambda_gram_matrix(grade, dim, q)?;
    let cod = lambda_gram_matrix(grade + 1, dim, q)?;
    Ok(operator_norm(&x, &dom, &cod))
}

/// `‖A(f)|_{H_n}‖` for `1 <= n <= MAX_NORM_GRADE + 1`.
pub fn restricted_annihilation_norm(f: &[BigRational], grade: usize, q: &BigRational) -> Result<f64> {
    check_norm_args(f, q)?;
    check_grade(grade, MAX_NORM_GRADE + 1)?;
    if grade == 0 {
        return Ok(0.0);
    }
    let dim = f.len();
    let x = annihilation_matrix(f, grade, q)?;
    let dom = lambda_gram_matrix(grade, dim, q)?;
    let cod = lambda_gram_matrix(grade - 1, dim, q)?;
    Ok(operator_norm(&x, &dom, &cod))
}

/// `‖A(f)A⁺(f)|_{H_n}‖`.
pub fn annihilation_creation_norm(f: &[BigRational], grade: usize, q: &BigRational) -> Result<f64> {
    check_norm_args(f, q)?;
    check_grade(grade, MAX_NORM_GRADE)?;
    let dim = f.len();
    let x = annihilation_matrix(f, grade + 1, q)? * creation_matrix(f, grade);
    let m = lambda_gram_matrix(grade, dim, q)?;
    Ok(operator_norm(&x, &m, &m))
}

/// `‖A⁺(f)A(f)|_{H_n}‖`, `n >= 1`.
pub fn creation_annihilation_norm(f: &[BigRational], grade: usize, q: &BigRational) -> Result<f64> {
    check_norm_args(f, q)?;
    check_grade(grade, MAX_NORM_GRADE)?;
    if grade == 0 {
        return Ok(0.0);
    }
    let dim = f.len();
    let x = creation_matrix(f, grade - 1) * annihilation_matrix(f, grade, q)?;
    let m = lambda_gram_matrix(grade, dim, q)?;
    Ok(operator_norm(&x, &m, &m))
}

/// `max_{n <= n_max} ‖A⁺(f)|_{H_n}‖`.
pub fn sup_creation_norm(f: &[BigRational], q: &BigRational, n_max: usize) -> Result<f64> {
    (0..=n_max)
        .map(|n| restricted_creation_norm(f, n, q))
        .try_fold(0.0f64, |acc, x| Ok(acc.max(x?)))
}

/// Closed form of `‖A⁺(f)‖`: `‖f‖√(1+q)` for `q >= 0`, `‖f‖` otherwise.
pub fn creation_norm_formula(f: &[BigRational], q: &BigRational) -> f64 {
    let norm = f.iter().map(|x| to_f64(x).powi(2)).sum::<f64>().sqrt();
    if *q >= BigRational::zero() {
        norm * (1.0 + to_f64(q)).sqrt()
    } else {
        norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn lambda_min_eigen_examples() {
        assert!(close(lambda_min_eigenvalue(2, 2, &r(0, 1)).unwrap(), 1.0, 1e-12));
        assert!(lambda_min_eigenvalue(2, 2, &r(1, 1)).unwrap().abs() < 1e-12);
        assert!(close(lambda_min_eigenvalue(2, 2, &r(1, 2)).unwrap(), 0.5, 1e-12));
        assert!(lambda_min_eigenvalue(5, 2, &r(0, 1)).is_err());
        assert!(lambda_min_eigenvalue(2, 4, &r(0, 1)).is_err());
        assert!(lambda_min_eigenvalue(2, 2, &r(3, 2)).is_err());
    }

    #[test]
    fn grade_zero_norm_is_vector_norm() {
        let f = vec![r(3, 1), r(4, 1)];
        for q in [r(-1, 1), r(0, 1), r(1, 2)] {
            assert!(close(restricted_creation_norm(&f, 0, &q).unwrap(), 5.0, 1e-10));
        }
    }

    #[test]
    fn grade_one_norm_at_q_one() {
        let f = vec![r(1, 1), r(0, 1)];
        let n1 = restricted_creation_norm(&f, 1, &r(1, 1)).unwrap();
        assert!(close(n1, 2f64.sqrt(), 1e-8), "{n1}");
    }

    #[test]
    fn negative_q_sup_is_norm() {
        let f = vec![r(1, 1), r(0, 1)];
        let s = sup_creation_norm(&f, &r(-1, 2), 3).unwrap();
        assert!(close(s, 1.0, 1e-8), "{s}");
    }

    // Dense oracle for grade one: maximise ⟨f⊗v, f⊗v⟩₂ over unit v by brute
    // force on a fine angle grid (dim 2, orthonormal λ₁).
    #[test]
    fn grade_one_norm_matches_angle_scan() {
        let f = vec![r(2, 1), r(-1, 1)];
        let q = r(1, 3);
        let fx = [2.0f64, -1.0];
        let qf = 1.0 / 3.0;
        let mut best: f64 = 0.0;
        for step in 0..20000 {
            let a = std::f64::consts::PI * step as f64 / 20000.0;
            let v = [a.cos(), a.sin()];
            // ⟨f⊗v, f⊗v + q v⊗f⟩ = ‖f‖²‖v‖² + q⟨f,v⟩²
            let fv = fx[0] * v[0] + fx[1] * v[1];
            let val = 5.0 + qf * fv * fv;
            best = best.max(val);
        }
        let got = restricted_creation_norm(&f, 1, &q).unwrap();
        assert!(close(got, best.sqrt(), 1e-6), "{got} vs {}", best.sqrt());
    }

    #[test]
    fn bad_arguments() {
        assert!(restricted_creation_norm(&[r(1, 1)], 0, &r(0, 1)).is_err());
        assert!(restricted_creation_norm(&[r(1, 1), r(0, 1)], 4, &r(0, 1)).is_err());
        assert!(restricted_creation_norm(&[r(1, 1), r(0, 1)], 0, &r(-3, 2)).is_err());
    }

    #[test]
    fn basis_order() {
        let b = basis_tensors(2, 2);
        assert_eq!(b.len(), 4);
        assert_eq!(b[1].0, vec![0, 1]);
        for (i, t) in b.iter().enumerate() {
            assert_eq!(basis_index(t, 2), i);
        }
    }
}
