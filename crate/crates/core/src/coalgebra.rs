//! The symmetric coalgebra `Σ'_A[s²L']` on the kernel of an extension, in
//! the divided-power basis.
//!
//! The weight-`k` component is free over `A` on the monomials `γ_m`, one
//! for each multiset `m` of kernel basis indices of size `k`; an element
//! stores the `A`-coefficient of `γ_m` at `m_index * d .. (m_index+1) * d`.
//! `s²L'` sits in even degree, so no Koszul signs occur.
//!
//! Functionals `ζ: Σ'^k → A` are stored by their values `ζ(γ_m)` in the
//! same layout. Under the natural duality `⟨ξ^m, γ_{m'}⟩ = δ_{m,m'}` these
//! are the coefficients of a polynomial in the dual basis.

use std::collections::BTreeMap;

use crate::algebra::CommutativeAlgebra;
use crate::error::{Error, Result};
use crate::extension::{adjoint_module, Extension};
use crate::lierinehart::LrModule;
use crate::linalg::Matrix;
use crate::scalar::{add_assign, axpy, is_zero_vec, scale_vec, sub_vec, unit_vec, Scalar};

/// Nondecreasing `k`-sequences over `0..r`, in lexicographic order.
pub fn multisets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..r {
            current.push(i);
            rec(r, k, i, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

pub fn multiplicity(m: &[usize], letter: usize) -> usize {
    m.iter().filter(|&&l| l == letter).count()
}

/// `m + {letter}`, kept sorted.
pub fn insert_letter(m: &[usize], letter: usize) -> Vec<usize> {
    let mut v = m.to_vec();
    let pos = v.partition_point(|&l| l <= letter);
    v.insert(pos, letter);
    v
}

/// `m - {letter}` (one occurrence).
pub fn remove_letter(m: &[usize], letter: usize) -> Option<Vec<usize>> {
    let pos = m.iter().position(|&l| l == letter)?;
    let mut v = m.to_vec();
    v.remove(pos);
    Some(v)
}

/// Every way to write `m = m1 + m2` with `|m1| = u`, as distinct
/// sub-multisets `m1` in lexicographic order.
pub fn splits(m: &[usize], u: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in m {
        *counts.entry(l).or_default() += 1;
    }
    let letters: Vec<(usize, usize)> = counts.into_iter().collect();
    let mut out = Vec::new();
    fn rec(
        letters: &[(usize, usize)],
        idx: usize,
        remaining: usize,
        left: &mut Vec<usize>,
        right: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if idx == letters.len() {
            if remaining == 0 {
                out.push((left.clone(), right.clone()));
            }
            return;
        }
        let (l, c) = letters[idx];
        for take in (0..=c.min(remaining)).rev() {
            let (ll, rl) = (left.len(), right.len());
            left.extend(std::iter::repeat_n(l, take));
            right.extend(std::iter::repeat_n(l, c - take));
            rec(letters, idx + 1, remaining - take, left, right, out);
            left.truncate(ll);
            right.truncate(rl);
        }
    }
    rec(&letters, 0, u, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `m! = Π_l (mult_m(l))!`.
pub fn multiset_factorial<T: Scalar>(m: &[usize]) -> T {
    let mut out = T::one();
    let mut i = 0;
    while i < m.len() {
        let j = m[i..].iter().take_while(|&&l| l == m[i]).count();
        out = out * T::factorial(j);
        i += j;
    }
    out
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    T::factorial(n) / (T::factorial(k) * T::factorial(n - k))
}

/// The divided-power monomial basis of one weight component.
#[derive(Clone, Debug, PartialEq)]
pub struct SymBasis {
    weight: usize,
    monomials: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl SymBasis {
    pub fn new(letters: usize, weight: usize) -> Self {
        let monomials = multisets(letters, weight);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        SymBasis {
            weight,
            monomials,
            index,
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[usize]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `Σ'_A` on a free module of rank `letters`, over `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymCoalgebra<T> {
    base: CommutativeAlgebra<T>,
    letters: usize,
}

impl<T: Scalar> SymCoalgebra<T> {
    pub fn new(base: CommutativeAlgebra<T>, letters: usize) -> Self {
        SymCoalgebra { base, letters }
    }

    pub fn for_extension(ext: &Extension<T>) -> Self {
        Self::new(ext.kernel().base().clone(), ext.kernel().rank())
    }

    pub fn base(&self) -> &CommutativeAlgebra<T> {
        &self.base
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn basis(&self, k: usize) -> SymBasis {
        SymBasis::new(self.letters, k)
    }

    /// `Q`-dimension of the weight-`k` component.
    pub fn qdim(&self, k: usize) -> usize {
        self.basis(k).len() * self.base.dim()
    }

    /// `a γ_m` in weight `|m|`.
    pub fn monomial(&self, m: &[usize], a: &[T]) -> Vec<T> {
        let basis = self.basis(m.len());
        let d = self.base.dim();
        let mut v = vec![T::zero(); basis.len() * d];
        let i = basis.index_of(m).expect("letters in range");
        v[i * d..(i + 1) * d].clone_from_slice(a);
        v
    }

    /// The unit `γ_∅` of weight 0.
    pub fn unit(&self) -> Vec<T> {
        self.base.unit().to_vec()
    }

    /// The `(u, k-u)` component of the coproduct, in the coordinates of
    /// `Σ'^u ⊗_A Σ'^{k-u}` (pair index `i1 * len(k-u) + i2`, then `A`).
    pub fn diagonal(&self, k: usize, u: usize, x: &[T]) -> Result<Vec<T>> {
        if u > k {
            return Err(Error::Dimension("coproduct split exceeds the weight".into()));
        }
        let d = self.base.dim();
        let (bk, bu, bv) = (self.basis(k), self.basis(u), self.basis(k - u));
        if x.len() != bk.len() * d {
            return Err(Error::Dimension("element has the wrong weight".into()));
        }
        let mut out = vec![T::zero(); bu.len() * bv.len() * d];
        for (i, m) in bk.monomials().iter().enumerate() {
            let a = &x[i * d..(i + 1) * d];
            if is_zero_vec(a) {
                continue;
            }
            for (m1, m2) in splits(m, u) {
                let p = bu.index_of(&m1).expect("sub-multiset") * bv.len() + bv.index_of(&m2).expect("sub-multiset");
                add_assign(&mut out[p * d..(p + 1) * d], a);
            }
        }
        Ok(out)
    }

    /// `x ⊗ y` in the coordinates of [`SymCoalgebra::diagonal`].
    pub fn tensor(&self, u: usize, x: &[T], v: usize, y: &[T]) -> Vec<T> {
        let d = self.base.dim();
        let (bu, bv) = (self.basis(u).len(), self.basis(v).len());
        let mut out = vec![T::zero(); bu * bv * d];
        for i in 0..bu {
            let a = &x[i * d..(i + 1) * d];
            if is_zero_vec(a) {
                continue;
            }
            for j in 0..bv {
                let b = &y[j * d..(j + 1) * d];
                if is_zero_vec(b) {
                    continue;
                }
                let p = i * bv + j;
                add_assign(&mut out[p * d..(p + 1) * d], &self.base.mul(a, b));
            }
        }
        out
    }

    /// The product of the divided-power algebra:
    /// `γ_{m1} γ_{m2} = Π_l binom(m1_l + m2_l, m1_l) γ_{m1+m2}`.
    pub fn multiply(&self, u: usize, x: &[T], v: usize, y: &[T]) -> Vec<T> {
        let d = self.base.dim();
        let (bu, bv, bk) = (self.basis(u), self.basis(v), self.basis(u + v));
        let mut out = vec![T::zero(); bk.len() * d];
        for (i, m1) in bu.monomials().iter().enumerate() {
            let a = &x[i * d..(i + 1) * d];
            if is_zero_vec(a) {
                continue;
            }
            for (j, m2) in bv.monomials().iter().enumerate() {
                let b = &y[j * d..(j + 1) * d];
                if is_zero_vec(b) {
                    continue;
                }
                let mut m = m1.clone();
                m.extend(m2);
                m.sort_unstable();
                let mut c = T::one();
                let mut letters: Vec<usize> = m.clone();
                letters.dedup();
                for l in letters {
                    c = c * binomial::<T>(multiplicity(&m, l), multiplicity(m1, l));
                }
                let p = bk.index_of(&m).expect("weights add");
                axpy(&mut out[p * d..(p + 1) * d], &c, &self.base.mul(a, b));
            }
        }
        out
    }

    /// Coefficients `θ[m][m']` of the extension to weight `k` of the
    /// derivation `ξ_i ↦ Σ_l c[i]_l ξ_l` of `Σ'^1` (`c[i]` an element of
    /// weight 1).
    pub fn extend_derivation(&self, k: usize, c: &[Vec<T>]) -> Vec<Vec<Vec<T>>> {
        let d = self.base.dim();
        let basis = self.basis(k);
        let mut theta = vec![vec![vec![T::zero(); d]; basis.len()]; basis.len()];
        for (mi, m) in basis.monomials().iter().enumerate() {
            let mut distinct = m.clone();
            distinct.dedup();
            for &i in &distinct {
                let rest = remove_letter(m, i).expect("letter of m");
                for l in 0..self.letters {
                    let cil = &c[i][l * d..(l + 1) * d];
                    if is_zero_vec(cil) {
                        continue;
                    }
                    let target = insert_letter(&rest, l);
                    let factor = T::from_int((multiplicity(&rest, l) + 1) as i64);
                    let ti = basis.index_of(&target).expect("same weight");
                    axpy(&mut theta[mi][ti], &factor, cil);
                }
            }
        }
        theta
    }
}

/// The weight-`k` component as an `(A, L)`-module, `L` acting through the
/// adjoint action on the kernel, extended as coderivations.
pub fn sym_module<T: Scalar>(ext: &Extension<T>, k: usize) -> Result<LrModule<T>> {
    let coalg = SymCoalgebra::for_extension(ext);
    let adj = adjoint_module(ext)?;
    let kernel = ext.kernel();
    let thetas: Vec<Vec<Vec<Vec<T>>>> = adj
        .l_actions()
        .iter()
        .map(|act| {
            let c: Vec<Vec<T>> = (0..kernel.rank()).map(|s| act.mul_vec(&kernel.basis_element(s))).collect();
            coalg.extend_derivation(k, &c)
        })
        .collect();
    LrModule::free(ext.total(), coalg.basis(k).len(), &thetas)
}

/// Matrix of the action of the `alpha`-th basis element of `L` on the
/// weight-`k` component, including the anchor on `A`-coefficients.
pub fn coalgebra_action<T: Scalar>(ext: &Extension<T>, alpha: usize, k: usize) -> Result<Matrix<T>> {
    if alpha >= ext.total().rank() {
        return Err(Error::Dimension(format!("no basis element {alpha} in L")));
    }
    Ok(sym_module(ext, k)?.l_actions()[alpha].clone())
}

/// `(αζ)(γ_m) = α(ζ(γ_m)) - ζ(α γ_m)` for the `alpha`-th basis element.
pub fn dual_action<T: Scalar>(ext: &Extension<T>, alpha: usize, k: usize, zeta: &[T]) -> Result<Vec<T>> {
    let module = sym_module(ext, k)?;
    dual_action_in(ext, &module, alpha, zeta)
}

fn dual_action_in<T: Scalar>(ext: &Extension<T>, module: &LrModule<T>, alpha: usize, zeta: &[T]) -> Result<Vec<T>> {
    let alg = ext.total().base();
    let d = alg.dim();
    if zeta.len() != module.qdim() {
        return Err(Error::Dimension("functional has the wrong weight".into()));
    }
    let count = module.qdim() / d;
    let act = &module.l_actions()[alpha];
    let anchor = &ext.total().anchors()[alpha];
    let mut out = Vec::with_capacity(zeta.len());
    for m in 0..count {
        let value = &zeta[m * d..(m + 1) * d];
        let moved = act.mul_vec(&unit_block(count, d, m, alg.unit()));
        out.extend(sub_vec(&anchor.apply(value), &pair(alg, zeta, &moved)));
    }
    Ok(out)
}

fn unit_block<T: Scalar>(count: usize, d: usize, m: usize, unit: &[T]) -> Vec<T> {
    let mut v = vec![T::zero(); count * d];
    v[m * d..(m + 1) * d].clone_from_slice(unit);
    v
}

/// `ζ(x) = Σ_m x_m ζ(γ_m)` in `A`.
pub fn pair<T: Scalar>(alg: &CommutativeAlgebra<T>, zeta: &[T], x: &[T]) -> Vec<T> {
    let d = alg.dim();
    let mut out = vec![T::zero(); d];
    for (z, a) in zeta.chunks(d).zip(x.chunks(d)) {
        if !is_zero_vec(a) && !is_zero_vec(z) {
            add_assign(&mut out, &alg.mul(z, a));
        }
    }
    out
}

/// A functional on the weight-`k` component, read as a polynomial in the
/// dual basis: the coefficient of `ξ^m` is the value on `γ_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantPolynomial<T> {
    weight: usize,
    coefficients: Vec<T>,
}

impl<T: Scalar> InvariantPolynomial<T> {
    pub fn new(weight: usize, coefficients: Vec<T>) -> Self {
        InvariantPolynomial { weight, coefficients }
    }

    /// The counit: weight 0, value `1`.
    pub fn counit(alg: &CommutativeAlgebra<T>) -> Self {
        Self::new(0, alg.unit().to_vec())
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coefficients)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.weight, scale_vec(c, &self.coefficients))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight || self.coefficients.len() != other.coefficients.len() {
            return Err(Error::Dimension("polynomials of different weight".into()));
        }
        let mut c = self.coefficients.clone();
        add_assign(&mut c, &other.coefficients);
        Ok(Self::new(self.weight, c))
    }

    /// Whether every basis element of `L` annihilates the functional.
    pub fn is_invariant(&self, ext: &Extension<T>) -> Result<bool> {
        let module = sym_module(ext, self.weight)?;
        for alpha in 0..ext.total().rank() {
            if !is_zero_vec(&dual_action_in(ext, &module, alpha, &self.coefficients)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The product dual to the coproduct:
    /// `(φψ)(γ_m) = Σ_{m = m1 + m2} φ(γ_{m1}) ψ(γ_{m2})`, which is the
    /// product of polynomials.
    pub fn product(&self, other: &Self, coalg: &SymCoalgebra<T>) -> Self {
        let d = coalg.base().dim();
        let k = self.weight + other.weight;
        let (bk, bu, bv) = (coalg.basis(k), coalg.basis(self.weight), coalg.basis(other.weight));
        let mut out = vec![T::zero(); bk.len() * d];
        for (i, m) in bk.monomials().iter().enumerate() {
            for (m1, m2) in splits(m, self.weight) {
                let a = block(&self.coefficients, bu.index_of(&m1).expect("split"), d);
                let b = block(&other.coefficients, bv.index_of(&m2).expect("split"), d);
                add_assign(&mut out[i * d..(i + 1) * d], &coalg.base().mul(a, b));
            }
        }
        Self::new(k, out)
    }
}

fn block<T>(v: &[T], i: usize, d: usize) -> &[T] {
    &v[i * d..(i + 1) * d]
}

/// Simultaneous kernel of the dual action of all basis elements of `L` in
/// weight `k`, as a canonical `Q`-basis.
pub fn invariants<T: Scalar>(ext: &Extension<T>, k: usize) -> Result<Vec<InvariantPolynomial<T>>> {
    let module = sym_module(ext, k)?;
    let n = module.qdim();
    let rank = ext.total().rank();
    let mut stacked = Matrix::zeros(n * rank, n);
    for j in 0..n {
        let zeta = unit_vec(n, j);
        let mut col = Vec::with_capacity(n * rank);
        for alpha in 0..rank {
            col.extend(dual_action_in(ext, &module, alpha, &zeta)?);
        }
        stacked.set_column(j, &col);
    }
    Ok(stacked
        .kernel_basis()
        .into_iter()
        .map(|c| InvariantPolynomial::new(k, c))
        .collect())
}

/// The symmetric function of a polynomial: its value on the
/// symmetric-algebra monomial `ξ_{l1}⋯ξ_{lk} = m! γ_m` is `m! p_m`.
pub fn polarize<T: Scalar>(coalg: &SymCoalgebra<T>, k: usize, p: &[T]) -> Vec<T> {
    weight_by_factorials(coalg, k, p, false)
}

/// Inverse of [`polarize`].
pub fn depolarize<T: Scalar>(coalg: &SymCoalgebra<T>, k: usize, f: &[T]) -> Vec<T> {
    weight_by_factorials(coalg, k, f, true)
}

fn weight_by_factorials<T: Scalar>(coalg: &SymCoalgebra<T>, k: usize, v: &[T], invert: bool) -> Vec<T> {
    let d = coalg.base().dim();
    let mut out = Vec::with_capacity(v.len());
    for (i, m) in coalg.basis(k).monomials().iter().enumerate() {
        let f: T = multiset_factorial(m);
        let f = if invert { T::one() / f } else { f };
        out.extend(scale_vec(&f, &v[i * d..(i + 1) * d]));
    }
    out
}

/// The matrix of [`polarize`] in weight `k`.
pub fn polarization_matrix<T: Scalar>(coalg: &SymCoalgebra<T>, k: usize) -> Matrix<T> {
    let n = coalg.qdim(k);
    let cols: Vec<Vec<T>> = (0..n).map(|j| polarize(coalg, k, &unit_vec(n, j))).collect();
    Matrix::from_columns(n, &cols).expect("square")
}
