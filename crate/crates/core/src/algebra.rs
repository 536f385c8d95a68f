//! Finite-dimensional commutative unital algebras given by structure
//! constants, and their derivations.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{is_zero_vec, sub_vec, unit_vec, Scalar};
use crate::validation::ValidationReport;

/// A commutative algebra `A` with basis `e_0..e_{d-1}` and
/// `e_i e_j = Σ_k mult[i][j][k] e_k`.
///
/// Elements are coordinate vectors of length `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutativeAlgebra<T> {
    labels: Vec<String>,
    /// Flattened `mult[i][j][k]` at `(i * d + j) * d + k`.
    mult: Vec<T>,
    unit: Vec<T>,
}

/// A linear endomorphism of `A` (column `j` is the image of `e_j`) that
/// satisfies the Leibniz rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<T>(pub Matrix<T>);

impl<T: Scalar> CommutativeAlgebra<T> {
    /// Builds an algebra from nested structure constants `mult[i][j]` (each a
    /// coordinate vector) without validating it.
    pub fn from_table(labels: Vec<String>, mult: Vec<Vec<Vec<T>>>, unit: Vec<T>) -> Result<Self> {
        let d = labels.len();
        if mult.len() != d || unit.len() != d {
            return Err(Error::Dimension(format!(
                "algebra of dimension {d} needs a {d}x{d}x{d} table and a unit of length {d}"
            )));
        }
        let mut flat = Vec::with_capacity(d * d * d);
        for (i, row) in mult.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::Dimension(format!("mult[{i}] has {} entries", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != d {
                    return Err(Error::Dimension(format!("mult[{i}][{j}] has length {}", v.len())));
                }
                flat.extend(v);
            }
        }
        Ok(CommutativeAlgebra {
            labels,
            mult: flat,
            unit,
        })
    }

    /// The ground field `Q` itself.
    pub fn rationals() -> Self {
        CommutativeAlgebra {
            labels: vec!["1".into()],
            mult: vec![T::one()],
            unit: vec![T::one()],
        }
    }

    /// `Q[t]/(t^2)` with basis `{1, t}`.
    pub fn dual_numbers() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::from_table(
            vec!["1".into(), "t".into()],
            vec![
                vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
                vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
            ],
            vec![o, z],
        )
        .expect("well-formed table")
    }

    /// `Q × Q` with the two orthogonal idempotents as basis.
    pub fn split_pair() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::from_table(
            vec!["p".into(), "q".into()],
            vec![
                vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]],
                vec![vec![z.clone(), z.clone()], vec![z.clone(), o.clone()]],
            ],
            vec![o.clone(), o],
        )
        .expect("well-formed table")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[T] {
        &self.unit
    }

    pub fn zero(&self) -> Vec<T> {
        vec![T::zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Vec<T> {
        unit_vec(self.dim(), i)
    }

    /// `e_i e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[T] {
        let d = self.dim();
        &self.mult[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Checked product of two elements.
    pub fn multiply(&self, a: &[T], b: &[T]) -> Result<Vec<T>> {
        let d = self.dim();
        if a.len() != d || b.len() != d {
            return Err(Error::Dimension(format!(
                "algebra elements must have length {d}, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(self.mul(a, b))
    }

    /// Product without length checks (callers guarantee coordinate length).
    pub fn mul(&self, a: &[T], b: &[T]) -> Vec<T> {
        let d = self.dim();
        if d == 1 {
            return vec![a[0].clone() * b[0].clone()];
        }
        let mut out = vec![T::zero(); d];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.clone() * bj.clone();
                for (k, m) in self.basis_product(i, j).iter().enumerate() {
                    if !m.is_zero() {
                        out[k] = out[k].clone() + c.clone() * m.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `a` (column `j` is `a e_j`).
    pub fn mult_matrix(&self, a: &[T]) -> Matrix<T> {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for j in 0..d {
            let col = self.mul(a, &self.basis_element(j));
            m.set_column(j, &col);
        }
        m
    }

    pub fn is_unit(&self, a: &[T]) -> bool {
        a == self.unit.as_slice()
    }

    /// Checks commutativity, associativity and the unit law on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut report = ValidationReport::new("commutative algebra");
        for i in 0..d {
            for j in i + 1..d {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    report.push("commutativity", vec![i, j], "e_i e_j != e_j e_i");
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let left = self.mul(self.basis_product(i, j), &self.basis_element(l));
                    let right = self.mul(&self.basis_element(i), self.basis_product(j, l));
                    if left != right {
                        report.push("associativity", vec![i, j, l], "(e_i e_j) e_l != e_i (e_j e_l)");
                    }
                }
            }
        }
        for i in 0..d {
            let e = self.basis_element(i);
            if self.mul(&self.unit, &e) != e {
                report.push("unit", vec![i], "1 e_i != e_i");
            }
        }
        report
    }

    /// Checks the Leibniz rule on all basis pairs; returns the first
    /// violating pair.
    pub fn is_derivation(&self, delta: &Matrix<T>) -> std::result::Result<(), (usize, usize)> {
        let d = self.dim();
        assert_eq!((delta.rows(), delta.cols()), (d, d), "derivation must be dim x dim");
        for i in 0..d {
            for j in i..d {
                let lhs = delta.mul_vec(self.basis_product(i, j));
                let mut rhs = self.mul(&delta.column(i), &self.basis_element(j));
                let other = self.mul(&self.basis_element(i), &delta.column(j));
                crate::scalar::add_assign(&mut rhs, &other);
                if !is_zero_vec(&sub_vec(&lhs, &rhs)) {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    /// Canonical basis of `Der(A)` from the kernel of the Leibniz system.
    pub fn derivations_basis(&self) -> Vec<Derivation<T>> {
        let d = self.dim();
        // unknown delta[(k, l)] = coefficient of e_k in delta(e_l), index k*d + l
        let n = d * d;
        let mut rows = Vec::new();
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let mut row = vec![T::zero(); n];
                    for (l, m) in self.basis_product(i, j).iter().enumerate() {
                        if !m.is_zero() {
                            row[k * d + l] = row[k * d + l].clone() + m.clone();
                        }
                    }
                    for l in 0..d {
                        let a = &self.basis_product(l, j)[k];
                        if !a.is_zero() {
                            row[l * d + i] = row[l * d + i].clone() - a.clone();
                        }
                        let b = &self.basis_product(i, l)[k];
                        if !b.is_zero() {
                            row[l * d + j] = row[l * d + j].clone() - b.clone();
                        }
                    }
                    if !is_zero_vec(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        let system = Matrix::from_rows(n, &rows).expect("rows have length d*d");
        system
            .kernel_basis()
            .into_iter()
            .map(|v| Derivation(Matrix::from_vec(d, d, v).expect("d*d entries")))
            .collect()
    }
}

impl<T: Scalar> Derivation<T> {
    pub fn zero(dim: usize) -> Self {
        Derivation(Matrix::zeros(dim, dim))
    }

    pub fn apply(&self, a: &[T]) -> Vec<T> {
        self.0.mul_vec(a)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Derivation(self.0.commutator(&other.0).expect("square matrices of equal size"))
    }
}

/// `t d/dt` on `Q[t]/(t^2)`: `1 ↦ 0`, `t ↦ t`.
pub fn euler_derivation<T: Scalar>() -> Derivation<T> {
    let mut m = Matrix::zeros(2, 2);
    m[(1, 1)] = T::one();
    Derivation(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn multiply_examples() {
        let qq = CommutativeAlgebra::<Rational>::rationals();
        assert_eq!(qq.multiply(&[q(2)], &[q(3)]).unwrap(), vec![q(6)]);
        let dn = CommutativeAlgebra::<Rational>::dual_numbers();
        let t = vec![q(0), q(1)];
        assert_eq!(dn.multiply(&t, &t).unwrap(), vec![q(0), q(0)]);
        let a = vec![q(5), q(-7)];
        assert_eq!(dn.multiply(dn.unit(), &a).unwrap(), a);
        assert!(dn.multiply(&[q(1)], &a).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(CommutativeAlgebra::<Rational>::dual_numbers().validate().is_valid());
        assert!(CommutativeAlgebra::<Rational>::rationals().validate().is_valid());
        let (o, z) = (q(1), q(0));
        let broken = CommutativeAlgebra::from_table(
            vec!["1".into(), "t".into()],
            vec![
                vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
                vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]],
            ],
            vec![o, z],
        )
        .unwrap();
        let report = broken.validate();
        assert_eq!(report.first("commutativity").unwrap().witness, vec![0, 1]);
    }

    #[test]
    fn derivation_examples() {
        let dn = CommutativeAlgebra::<Rational>::dual_numbers();
        assert!(dn.is_derivation(&Matrix::zeros(2, 2)).is_ok());
        assert!(dn.is_derivation(&euler_derivation::<Rational>().0).is_ok());
        let mut d_dt = Matrix::zeros(2, 2);
        d_dt[(0, 1)] = q(1);
        assert_eq!(dn.is_derivation(&d_dt), Err((1, 1)));
    }

    #[test]
    fn derivations_basis_examples() {
        assert!(CommutativeAlgebra::<Rational>::rationals().derivations_basis().is_empty());
        let ders = CommutativeAlgebra::<Rational>::dual_numbers().derivations_basis();
        assert_eq!(ders, vec![euler_derivation()]);
        assert!(CommutativeAlgebra::<Rational>::split_pair().derivations_basis().is_empty());
    }

    #[test]
    fn derivations_close_under_bracket() {
        for alg in [
            CommutativeAlgebra::<Rational>::dual_numbers(),
            CommutativeAlgebra::<Rational>::split_pair(),
        ] {
            let ders = alg.derivations_basis();
            for a in &ders {
                assert!(alg.is_derivation(&a.0).is_ok());
                for b in &ders {
                    assert!(alg.is_derivation(&a.bracket(b).0).is_ok());
                }
            }
        }
    }
}
