//! Lie-Rinehart algebras that are free over the base algebra, and their
//! modules.
//!
//! An element of `L` is stored as `rank` blocks of `A`-coordinates: the
//! coefficient of `e_i` occupies `x[i*d .. (i+1)*d]`. Brackets and anchors
//! are stored on basis elements only. General elements are handled through
//! `(aα)(b) = a·α(b)` and `[α, bβ] = b[α,β] + α(b)β`.

use crate::algebra::{CommutativeAlgebra, Derivation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{add_assign, axpy, is_zero_vec, sub_vec, unit_vec, Scalar};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, PartialEq)]
pub struct LieRinehartAlgebra<T> {
    base: CommutativeAlgebra<T>,
    labels: Vec<String>,
    /// `[e_i, e_j]` at index `i * rank + j`.
    bracket: Vec<Vec<T>>,
    anchor: Vec<Derivation<T>>,
}

impl<T: Scalar> LieRinehartAlgebra<T> {
    /// Assembles an algebra from basis data without validating it.
    ///
    /// `bracket[i][j]` is the element `[e_i, e_j]` (length `rank * dim A`).
    pub fn new(
        base: CommutativeAlgebra<T>,
        labels: Vec<String>,
        bracket: Vec<Vec<Vec<T>>>,
        anchor: Vec<Derivation<T>>,
    ) -> Result<Self> {
        let n = labels.len();
        let d = base.dim();
        if bracket.len() != n || anchor.len() != n {
            return Err(Error::Dimension(format!(
                "rank {n} needs {n} bracket rows and {n} anchors"
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in bracket.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("bracket[{i}] has {} entries", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != n * d {
                    return Err(Error::Dimension(format!(
                        "bracket[{i}][{j}] has length {}, expected {}",
                        v.len(),
                        n * d
                    )));
                }
                flat.push(v);
            }
        }
        for (i, a) in anchor.iter().enumerate() {
            if a.0.rows() != d || a.0.cols() != d {
                return Err(Error::Dimension(format!("anchor[{i}] must be {d}x{d}")));
            }
        }
        Ok(LieRinehartAlgebra {
            base,
            labels,
            bracket: flat,
            anchor,
        })
    }

    /// A Lie algebra over `Q` (zero anchor) from structure constants:
    /// `constants[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`.
    pub fn lie_algebra(labels: &[&str], constants: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let base = CommutativeAlgebra::rationals();
        let n = labels.len();
        Self::new(
            base,
            labels.iter().map(|s| s.to_string()).collect(),
            constants,
            vec![Derivation::zero(1); n],
        )
    }

    /// The abelian algebra of the given rank over `base` with zero anchor.
    pub fn abelian(base: CommutativeAlgebra<T>, labels: &[&str]) -> Self {
        let n = labels.len();
        let d = base.dim();
        LieRinehartAlgebra {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            bracket: vec![vec![T::zero(); n * d]; n * n],
            anchor: vec![Derivation::zero(d); n],
            base,
        }
    }

    pub fn base(&self) -> &CommutativeAlgebra<T> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Dimension over `Q`.
    pub fn qdim(&self) -> usize {
        self.rank() * self.base.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn anchors(&self) -> &[Derivation<T>] {
        &self.anchor
    }

    pub fn zero_element(&self) -> Vec<T> {
        vec![T::zero(); self.qdim()]
    }

    /// `e_i` (coefficient `1 ∈ A`).
    pub fn basis_element(&self, i: usize) -> Vec<T> {
        self.scaled_basis_element(self.base.unit(), i)
    }

    /// `a e_i`.
    pub fn scaled_basis_element(&self, a: &[T], i: usize) -> Vec<T> {
        let d = self.base.dim();
        let mut x = self.zero_element();
        x[i * d..(i + 1) * d].clone_from_slice(a);
        x
    }

    /// The `A`-coefficient of `e_i` in `x`.
    pub fn coefficient<'a>(&self, x: &'a [T], i: usize) -> &'a [T] {
        let d = self.base.dim();
        &x[i * d..(i + 1) * d]
    }

    /// `a · x`.
    pub fn scalar_mul(&self, a: &[T], x: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(x.len());
        for i in 0..self.rank() {
            out.extend(self.base.mul(a, self.coefficient(x, i)));
        }
        out
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[T] {
        &self.bracket[i * self.rank() + j]
    }

    /// Anchor of a general element: `Σ_i x_i · anchor(e_i)`.
    pub fn anchor_of(&self, x: &[T]) -> Matrix<T> {
        let d = self.base.dim();
        let mut m = Matrix::zeros(d, d);
        for i in 0..self.rank() {
            let c = self.coefficient(x, i);
            if is_zero_vec(c) || self.anchor[i].0.is_zero() {
                continue;
            }
            m = m.add(&self.base.mult_matrix(c).mul(&self.anchor[i].0).expect("d x d"));
        }
        m
    }

    /// `x(a)`, the action of `x ∈ L` on `a ∈ A`.
    pub fn act_on_base(&self, x: &[T], a: &[T]) -> Vec<T> {
        let d = self.base.dim();
        let mut out = vec![T::zero(); d];
        for i in 0..self.rank() {
            let c = self.coefficient(x, i);
            if is_zero_vec(c) {
                continue;
            }
            let da = self.anchor[i].apply(a);
            add_assign(&mut out, &self.base.mul(c, &da));
        }
        out
    }

    /// Bracket of general elements, expanded from basis data.
    pub fn bracket(&self, x: &[T], y: &[T]) -> Vec<T> {
        let n = self.rank();
        let mut out = self.zero_element();
        for i in 0..n {
            let xi = self.coefficient(x, i);
            if is_zero_vec(xi) {
                continue;
            }
            for j in 0..n {
                let yj = self.coefficient(y, j);
                if is_zero_vec(yj) {
                    continue;
                }
                // x_i y_j [e_i, e_j] + x_i e_i(y_j) e_j - y_j e_j(x_i) e_i
                let c = self.base.mul(xi, yj);
                add_assign(&mut out, &self.scalar_mul(&c, self.bracket_basis(i, j)));
                let xi_dyj = self.base.mul(xi, &self.anchor[i].apply(yj));
                add_assign(&mut out, &self.scaled_basis_element(&xi_dyj, j));
                let yj_dxi = self.base.mul(yj, &self.anchor[j].apply(xi));
                out = sub_vec(&out, &self.scaled_basis_element(&yj_dxi, i));
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|v| is_zero_vec(v))
    }

    pub fn has_zero_anchor(&self) -> bool {
        self.anchor.iter().all(|a| a.0.is_zero())
    }

    /// Reports every violated Lie-Rinehart axiom with basis witnesses.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("Lie-Rinehart algebra");
        report.extend(self.base.validate());
        let n = self.rank();
        let d = self.base.dim();
        for i in 0..n {
            if !is_zero_vec(self.bracket_basis(i, i)) {
                report.push("antisymmetry", vec![i, i], "[e_i, e_i] != 0");
            }
            for j in i + 1..n {
                let s: Vec<T> = self
                    .bracket_basis(i, j)
                    .iter()
                    .zip(self.bracket_basis(j, i))
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect();
                if !is_zero_vec(&s) {
                    report.push("antisymmetry", vec![i, j], "[e_i, e_j] != -[e_j, e_i]");
                }
            }
        }
        for (i, a) in self.anchor.iter().enumerate() {
            if let Err((p, q)) = self.base.is_derivation(&a.0) {
                report.push(
                    "anchor is a derivation",
                    vec![i, p, q],
                    "Leibniz rule fails for anchor(e_i) on (e_p, e_q)",
                );
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.anchor_of(self.bracket_basis(i, j));
                let rhs = self.anchor[i].0.commutator(&self.anchor[j].0).expect("d x d");
                if lhs != rhs {
                    report.push(
                        "anchor preserves brackets",
                        vec![i, j],
                        "anchor([e_i,e_j]) != [anchor e_i, anchor e_j]",
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..d {
                    let a = self.base.basis_element(k);
                    let lhs = self.bracket(&self.basis_element(i), &self.scaled_basis_element(&a, j));
                    let mut rhs = self.scalar_mul(&a, self.bracket_basis(i, j));
                    let da = self.anchor[i].apply(&a);
                    add_assign(&mut rhs, &self.scaled_basis_element(&da, j));
                    if lhs != rhs {
                        report.push(
                            "bracket Leibniz rule",
                            vec![i, j, k],
                            "[e_i, a e_j] != a[e_i,e_j] + e_i(a) e_j",
                        );
                    }
                    let scaled = self.scaled_basis_element(&a, i);
                    let lhs = self.anchor_of(&scaled);
                    let rhs = self.base.mult_matrix(&a).mul(&self.anchor[i].0).expect("d x d");
                    if lhs != rhs {
                        report.push("anchor A-linearity", vec![i, k], "(a e_i)(b) != a e_i(b)");
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let jac = self.jacobiator(
                        &self.basis_element(i),
                        &self.basis_element(j),
                        &self.basis_element(k),
                    );
                    if !is_zero_vec(&jac) {
                        report.push("Jacobi identity", vec![i, j, k], "Jacobi sum is nonzero");
                    }
                }
            }
        }
        report
    }

    /// `[[x,y],z] + [[y,z],x] + [[z,x],y]`.
    pub fn jacobiator(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let mut s = self.bracket(&self.bracket(x, y), z);
        add_assign(&mut s, &self.bracket(&self.bracket(y, z), x));
        add_assign(&mut s, &self.bracket(&self.bracket(z, x), y));
        s
    }

    /// The `Q`-linear matrix of an `A`-linear map `L → L2` given by the
    /// images of the basis of `L` (each image an element of `L2`).
    pub fn qmatrix_of_amap(&self, images: &[Vec<T>], target_qdim: usize) -> Matrix<T> {
        let d = self.base.dim();
        let mut m = Matrix::zeros(target_qdim, self.qdim());
        for (i, img) in images.iter().enumerate() {
            for a in 0..d {
                let col = scale_blocks(&self.base, &self.base.basis_element(a), img);
                m.set_column(i * d + a, &col);
            }
        }
        m
    }
}

/// Multiplies every `A`-block of `x` by `a`.
pub(crate) fn scale_blocks<T: Scalar>(base: &CommutativeAlgebra<T>, a: &[T], x: &[T]) -> Vec<T> {
    let d = base.dim();
    x.chunks(d).flat_map(|c| base.mul(a, c)).collect()
}

/// An `(A, L)`-module: a finite-dimensional `Q`-space with commuting
/// `A`-action and compatible `L`-action, both given on basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct LrModule<T> {
    qdim: usize,
    a_action: Vec<Matrix<T>>,
    l_action: Vec<Matrix<T>>,
}

impl<T: Scalar> LrModule<T> {
    pub fn new(qdim: usize, a_action: Vec<Matrix<T>>, l_action: Vec<Matrix<T>>) -> Result<Self> {
        for m in a_action.iter().chain(&l_action) {
            if m.rows() != qdim || m.cols() != qdim {
                return Err(Error::Dimension(format!("module actions must be {qdim}x{qdim}")));
            }
        }
        Ok(LrModule {
            qdim,
            a_action,
            l_action,
        })
    }

    /// `A` itself, with `L` acting through the anchor.
    pub fn base(lra: &LieRinehartAlgebra<T>) -> Self {
        let alg = lra.base();
        LrModule {
            qdim: alg.dim(),
            a_action: (0..alg.dim()).map(|k| alg.mult_matrix(&alg.basis_element(k))).collect(),
            l_action: lra.anchors().iter().map(|a| a.0.clone()).collect(),
        }
    }

    /// The one-dimensional trivial module; only defined when `A` is
    /// one-dimensional (no augmentation is chosen otherwise).
    pub fn trivial(lra: &LieRinehartAlgebra<T>) -> Result<Self> {
        let alg = lra.base();
        if alg.dim() != 1 {
            return Err(Error::Unsupported(
                "trivial module needs a one-dimensional base algebra".into(),
            ));
        }
        let scale = T::one() / alg.unit()[0].clone();
        Ok(LrModule {
            qdim: 1,
            a_action: vec![Matrix::from_vec(1, 1, vec![scale]).expect("1x1")],
            l_action: vec![Matrix::zeros(1, 1); lra.rank()],
        })
    }

    pub fn zero(lra: &LieRinehartAlgebra<T>) -> Self {
        LrModule {
            qdim: 0,
            a_action: vec![Matrix::zeros(0, 0); lra.base().dim()],
            l_action: vec![Matrix::zeros(0, 0); lra.rank()],
        }
    }

    /// The free module `A^rank` with `e_i(ε_s) = Σ_t theta[i][s][t] ε_t`,
    /// extended to `A`-multiples by the Leibniz rule.
    pub fn free(lra: &LieRinehartAlgebra<T>, rank: usize, theta: &[Vec<Vec<Vec<T>>>]) -> Result<Self> {
        let alg = lra.base();
        let d = alg.dim();
        if theta.len() != lra.rank() {
            return Err(Error::Dimension("one theta matrix per basis element of L".into()));
        }
        let qdim = rank * d;
        let a_action = (0..d)
            .map(|k| block_diag(&alg.mult_matrix(&alg.basis_element(k)), rank))
            .collect();
        let mut l_action = Vec::with_capacity(lra.rank());
        for (i, th) in theta.iter().enumerate() {
            if th.len() != rank || th.iter().any(|r| r.len() != rank || r.iter().any(|a| a.len() != d)) {
                return Err(Error::Dimension(format!("theta[{i}] must be {rank}x{rank} of A-elements")));
            }
            let mut m = Matrix::zeros(qdim, qdim);
            for s in 0..rank {
                for a in 0..d {
                    let ea = alg.basis_element(a);
                    let mut col = vec![T::zero(); qdim];
                    let da = lra.anchors()[i].apply(&ea);
                    add_assign(&mut col[s * d..(s + 1) * d], &da);
                    for t in 0..rank {
                        let c = alg.mul(&ea, &th[s][t]);
                        add_assign(&mut col[t * d..(t + 1) * d], &c);
                    }
                    m.set_column(s * d + a, &col);
                }
            }
            l_action.push(m);
        }
        Ok(LrModule {
            qdim,
            a_action,
            l_action,
        })
    }

    pub fn qdim(&self) -> usize {
        self.qdim
    }

    pub fn a_actions(&self) -> &[Matrix<T>] {
        &self.a_action
    }

    pub fn l_actions(&self) -> &[Matrix<T>] {
        &self.l_action
    }

    /// Matrix of the action of `a ∈ A`.
    pub fn act_a(&self, a: &[T]) -> Matrix<T> {
        let mut m = Matrix::zeros(self.qdim, self.qdim);
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.a_action[k].scale(c));
            }
        }
        m
    }

    /// `a · v`.
    pub fn a_mul(&self, a: &[T], v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.qdim];
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.a_action[k].mul_vec(v));
            }
        }
        out
    }

    /// Matrix of the action of a general `x ∈ L`: `Σ_i act_a(x_i) ∘ e_i`.
    pub fn act_l(&self, lra: &LieRinehartAlgebra<T>, x: &[T]) -> Matrix<T> {
        let mut m = Matrix::zeros(self.qdim, self.qdim);
        for i in 0..lra.rank() {
            let c = lra.coefficient(x, i);
            if is_zero_vec(c) {
                continue;
            }
            m = m.add(&self.act_a(c).mul(&self.l_action[i]).expect("square"));
        }
        m
    }

    /// If the `A`-action is that of `A^r` (block-diagonal regular
    /// representation), returns `r`.
    pub fn free_rank(&self, base: &CommutativeAlgebra<T>) -> Option<usize> {
        let d = base.dim();
        if !self.qdim.is_multiple_of(d) {
            return None;
        }
        let r = self.qdim / d;
        (0..d)
            .all(|k| self.a_action[k] == block_diag(&base.mult_matrix(&base.basis_element(k)), r))
            .then_some(r)
    }

    /// Checks the representation laws, `(aα)(m) = a(α(m))`,
    /// `α(am) = aα(m) + α(a)m`, and the Lie condition on basis elements.
    pub fn validate(&self, lra: &LieRinehartAlgebra<T>) -> ValidationReport {
        let mut report = ValidationReport::new("(A,L)-module");
        let alg = lra.base();
        let d = alg.dim();
        if self.a_action.len() != d || self.l_action.len() != lra.rank() {
            report.push("shape", vec![], "wrong number of action matrices");
            return report;
        }
        if self.act_a(alg.unit()) != Matrix::identity(self.qdim) {
            report.push("unital A-action", vec![], "1 does not act as the identity");
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.a_action[i].mul(&self.a_action[j]).expect("square");
                if lhs != self.act_a(alg.basis_product(i, j)) {
                    report.push("multiplicative A-action", vec![i, j], "e_i(e_j m) != (e_i e_j) m");
                }
            }
        }
        for i in 0..lra.rank() {
            for k in 0..d {
                let a = alg.basis_element(k);
                let lhs = self.act_l(lra, &lra.scaled_basis_element(&a, i));
                let rhs = self.a_action[k].mul(&self.l_action[i]).expect("square");
                if lhs != rhs {
                    report.push("(a alpha)(m) = a(alpha(m))", vec![i, k], "action is not A-linear in L");
                }
                let lhs = self.l_action[i].commutator(&self.a_action[k]).expect("square");
                let rhs = self.act_a(&lra.anchors()[i].apply(&a));
                if lhs != rhs {
                    report.push(
                        "alpha(a m) = a alpha(m) + alpha(a) m",
                        vec![i, k],
                        "Leibniz compatibility of the L-action fails",
                    );
                }
            }
        }
        for i in 0..lra.rank() {
            for j in i + 1..lra.rank() {
                let lhs = self.act_l(lra, lra.bracket_basis(i, j));
                let rhs = self.l_action[i].commutator(&self.l_action[j]).expect("square");
                if lhs != rhs {
                    report.push("Lie condition", vec![i, j], "[e_i,e_j] does not act as the commutator");
                }
            }
        }
        report
    }
}

pub(crate) fn block_diag<T: Scalar>(block: &Matrix<T>, copies: usize) -> Matrix<T> {
    let b = block.rows();
    let mut m = Matrix::zeros(b * copies, b * copies);
    for c in 0..copies {
        for i in 0..b {
            for j in 0..b {
                m[(c * b + i, c * b + j)] = block[(i, j)].clone();
            }
        }
    }
    m
}

/// Standard basis vector of a module of dimension `qdim`.
pub fn module_basis_vector<T: Scalar>(qdim: usize, i: usize) -> Vec<T> {
    unit_vec(qdim, i)
}
