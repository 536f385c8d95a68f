//! The complex `Alt_A(L, M)` of alternating `A`-multilinear forms.
//!
//! A form of degree `p` is stored by its values on strictly increasing
//! `p`-tuples of basis indices of `L`; absent tuples are zero. Values are
//! `Q`-coordinate vectors in the coefficient module.
//!
//! Sign conventions: the differential carries the global factor `(-1)^n`
//! on `n`-tuples, and the wedge product carries `(-1)^{pq}` in front of the
//! shuffle sum.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lierinehart::{LieRinehartAlgebra, LrModule};
use crate::linalg::{Matrix, Quotient};
use crate::scalar::{add_assign, axpy, is_zero_vec, scale_vec, Scalar};
use crate::validation::ValidationReport;

/// Strictly increasing `p`-tuples from `0..n`, in lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut current: Vec<usize> = (0..p).collect();
    loop {
        out.push(current.clone());
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - p + i {
                current[i] += 1;
                for j in i + 1..p {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sorts `tuple` and returns the parity of the sorting permutation, or
/// `None` if an index repeats.
pub fn sort_with_parity(tuple: &[usize]) -> Option<(Vec<usize>, usize)> {
    let mut v = tuple.to_vec();
    let mut swaps = 0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, swaps % 2))
}

/// Parity of the shuffle that puts the positions `subset` (increasing)
/// first, followed by the remaining positions.
pub fn shuffle_parity(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(k, &s)| s - k).sum::<usize>() % 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct AltForm<T> {
    degree: usize,
    rank: usize,
    value_dim: usize,
    values: BTreeMap<Vec<usize>, Vec<T>>,
}

impl<T: Scalar> AltForm<T> {
    pub fn zero(degree: usize, rank: usize, value_dim: usize) -> Self {
        AltForm {
            degree,
            rank,
            value_dim,
            values: BTreeMap::new(),
        }
    }

    /// The degree-0 form with value `v`.
    pub fn constant(rank: usize, v: Vec<T>) -> Self {
        let mut f = Self::zero(0, rank, v.len());
        f.set(&[], v);
        f
    }

    /// Builds a form from `(tuple, value)` pairs. Tuples need not be
    /// sorted; an unsorted tuple stores its value with the sorting sign.
    pub fn from_values(
        degree: usize,
        rank: usize,
        value_dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<T>)>,
    ) -> Result<Self> {
        let mut f = Self::zero(degree, rank, value_dim);
        for (tuple, value) in entries {
            if tuple.len() != degree || tuple.iter().any(|&i| i >= rank) || value.len() != value_dim {
                return Err(Error::Dimension(format!("bad form entry {tuple:?}")));
            }
            let (sorted, parity) = sort_with_parity(&tuple)
                .ok_or_else(|| Error::Invalid(format!("repeated index in {tuple:?}")))?;
            let value = if parity == 1 { scale_vec(&-T::one(), &value) } else { value };
            let mut current = f.value(&sorted);
            add_assign(&mut current, &value);
            f.set(&sorted, current);
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    /// Stored entries on increasing tuples (zero values are never stored).
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<T>)> {
        self.values.iter()
    }

    /// Value on an increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> Vec<T> {
        self.values
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| vec![T::zero(); self.value_dim])
    }

    /// Value on an arbitrary tuple of basis indices.
    pub fn value_signed(&self, tuple: &[usize]) -> Vec<T> {
        match sort_with_parity(tuple) {
            None => vec![T::zero(); self.value_dim],
            Some((sorted, 0)) => self.value(&sorted),
            Some((sorted, _)) => scale_vec(&-T::one(), &self.value(&sorted)),
        }
    }

    /// Sets the value on an increasing tuple.
    pub fn set(&mut self, tuple: &[usize], value: Vec<T>) {
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        if is_zero_vec(&value) {
            self.values.remove(tuple);
        } else {
            self.values.insert(tuple.to_vec(), value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if (self.degree, self.rank, self.value_dim) != (other.degree, other.rank, other.value_dim) {
            return Err(Error::Dimension("forms of different shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (t, v) in &other.values {
            let mut cur = out.value(t);
            add_assign(&mut cur, v);
            out.set(t, cur);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.degree, self.rank, self.value_dim);
        for (t, v) in &self.values {
            out.set(t, scale_vec(c, v));
        }
        out
    }

    /// Applies a linear map to every value.
    pub fn map_values(&self, m: &Matrix<T>) -> Self {
        let mut out = Self::zero(self.degree, self.rank, m.rows());
        for (t, v) in &self.values {
            out.set(t, m.mul_vec(v));
        }
        out
    }

    /// `Q`-dimension of the space of forms of this shape.
    pub fn space_dim(degree: usize, rank: usize, value_dim: usize) -> usize {
        combinations(rank, degree).len() * value_dim
    }

    /// Flat coordinates: increasing tuples in lexicographic order, each
    /// followed by its value coordinates.
    pub fn to_vector(&self) -> Vec<T> {
        let mut out = Vec::new();
        for t in combinations(self.rank, self.degree) {
            out.extend(self.value(&t));
        }
        out
    }

    pub fn from_vector(degree: usize, rank: usize, value_dim: usize, v: &[T]) -> Result<Self> {
        let combos = combinations(rank, degree);
        if v.len() != combos.len() * value_dim {
            return Err(Error::Dimension("form vector has wrong length".into()));
        }
        let mut f = Self::zero(degree, rank, value_dim);
        for (k, t) in combos.iter().enumerate() {
            f.set(t, v[k * value_dim..(k + 1) * value_dim].to_vec());
        }
        Ok(f)
    }

    /// A form with small random integer values.
    pub fn random<R: Rng>(degree: usize, rank: usize, value_dim: usize, rng: &mut R) -> Self {
        let n = Self::space_dim(degree, rank, value_dim);
        let v: Vec<T> = (0..n).map(|_| T::from_int(rng.gen_range(-3..=3))).collect();
        Self::from_vector(degree, rank, value_dim, &v).expect("length matches")
    }
}

/// Evaluates `f` on general elements of `L`, extending the stored basis
/// values alternatingly and `A`-multilinearly.
pub fn evaluate<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    f: &AltForm<T>,
    args: &[Vec<T>],
) -> Result<Vec<T>> {
    if args.len() != f.degree() {
        return Err(Error::Dimension(format!(
            "form of degree {} evaluated on {} arguments",
            f.degree(),
            args.len()
        )));
    }
    let mut out = vec![T::zero(); f.value_dim()];
    let mut indices = Vec::with_capacity(args.len());
    evaluate_rec(lra, module, f, args, &mut indices, lra.base().unit().to_vec(), &mut out);
    Ok(out)
}

fn evaluate_rec<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    f: &AltForm<T>,
    args: &[Vec<T>],
    indices: &mut Vec<usize>,
    coeff: Vec<T>,
    out: &mut [T],
) {
    let slot = indices.len();
    if slot == args.len() {
        let v = f.value_signed(indices);
        if !is_zero_vec(&v) {
            add_assign(out, &module.a_mul(&coeff, &v));
        }
        return;
    }
    for i in 0..lra.rank() {
        let c = lra.coefficient(&args[slot], i);
        if is_zero_vec(c) || indices.contains(&i) {
            continue;
        }
        indices.push(i);
        evaluate_rec(lra, module, f, args, indices, lra.base().mul(&coeff, c), out);
        indices.pop();
    }
}

/// The differential of the complex of forms on `lra` whose basis element
/// `e_i` acts on values through `ops[i]`, with `A` acting through `module`.
///
/// With `ops` the module's own `L`-action this is the Chevalley-Eilenberg
/// differential; other choices give covariant derivatives.
pub fn differential_with<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    ops: &[Matrix<T>],
    f: &AltForm<T>,
) -> AltForm<T> {
    let n = lra.rank();
    let p = f.degree();
    let mut out = AltForm::zero(p + 1, n, f.value_dim());
    if f.is_zero() {
        return out;
    }
    let global = T::sign(p + 1);
    for tuple in combinations(n, p + 1) {
        let mut acc = vec![T::zero(); f.value_dim()];
        for s in 0..=p {
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|&(k, _)| k != s).map(|(_, &i)| i).collect();
            let v = f.value(&rest);
            if !is_zero_vec(&v) {
                axpy(&mut acc, &T::sign(s), &ops[tuple[s]].mul_vec(&v));
            }
        }
        for s in 0..=p {
            for t in s + 1..=p {
                let bracket = lra.bracket_basis(tuple[s], tuple[t]);
                if is_zero_vec(bracket) {
                    continue;
                }
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != s && k != t)
                    .map(|(_, &i)| i)
                    .collect();
                for k in 0..n {
                    let c = lra.coefficient(bracket, k);
                    if is_zero_vec(c) || rest.contains(&k) {
                        continue;
                    }
                    let mut args = Vec::with_capacity(p);
                    args.push(k);
                    args.extend(&rest);
                    let v = f.value_signed(&args);
                    if !is_zero_vec(&v) {
                        axpy(&mut acc, &T::sign(s + t), &module.a_mul(c, &v));
                    }
                }
            }
        }
        out.set(&tuple, scale_vec(&global, &acc));
    }
    out
}

/// The Chevalley-Eilenberg-Rinehart differential on `Alt_A(L, M)`.
pub fn ce_differential<T: Scalar>(lra: &LieRinehartAlgebra<T>, module: &LrModule<T>, f: &AltForm<T>) -> AltForm<T> {
    differential_with(lra, module, module.l_actions(), f)
}

/// A bilinear map `M' × M'' → M`, given by the images of pairs of basis
/// vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing<T> {
    left_dim: usize,
    right_dim: usize,
    out_dim: usize,
    /// Image of `(u_i, v_j)` at `i * right_dim + j`.
    table: Vec<Vec<T>>,
}

impl<T: Scalar> Pairing<T> {
    pub fn new(left_dim: usize, right_dim: usize, out_dim: usize, table: Vec<Vec<T>>) -> Result<Self> {
        if table.len() != left_dim * right_dim || table.iter().any(|v| v.len() != out_dim) {
            return Err(Error::Dimension("pairing table has wrong shape".into()));
        }
        Ok(Pairing {
            left_dim,
            right_dim,
            out_dim,
            table,
        })
    }

    /// Multiplication `A × A → A`.
    pub fn algebra(lra: &LieRinehartAlgebra<T>) -> Self {
        let alg = lra.base();
        let d = alg.dim();
        let table = (0..d * d).map(|k| alg.basis_product(k / d, k % d).to_vec()).collect();
        Pairing {
            left_dim: d,
            right_dim: d,
            out_dim: d,
            table,
        }
    }

    /// The module action `A × M → M`.
    pub fn module_action(lra: &LieRinehartAlgebra<T>, module: &LrModule<T>) -> Self {
        let d = lra.base().dim();
        let q = module.qdim();
        let table = (0..d * q).map(|k| module.a_actions()[k / q].column(k % q)).collect();
        Pairing {
            left_dim: d,
            right_dim: q,
            out_dim: q,
            table,
        }
    }

    /// The module action written on the right, `M × A → M`.
    pub fn right_module_action(lra: &LieRinehartAlgebra<T>, module: &LrModule<T>) -> Self {
        let d = lra.base().dim();
        let q = module.qdim();
        let table = (0..q * d).map(|k| module.a_actions()[k % d].column(k / d)).collect();
        Pairing {
            left_dim: q,
            right_dim: d,
            out_dim: q,
            table,
        }
    }

    /// The bracket of `lra`, as a pairing on its `Q`-coordinates.
    pub fn lie_bracket(lra: &LieRinehartAlgebra<T>) -> Self {
        let q = lra.qdim();
        let basis: Vec<Vec<T>> = (0..q).map(|i| crate::scalar::unit_vec(q, i)).collect();
        let mut table = Vec::with_capacity(q * q);
        for x in &basis {
            for y in &basis {
                table.push(lra.bracket(x, y));
            }
        }
        Pairing {
            left_dim: q,
            right_dim: q,
            out_dim: q,
            table,
        }
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn apply(&self, u: &[T], v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.out_dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(ui.clone() * vj.clone()), &self.table[i * self.right_dim + j]);
            }
        }
        out
    }

    /// Checks that the pairing is `A`-balanced, `A`-linear and
    /// `L`-equivariant for the given modules.
    pub fn validate(
        &self,
        lra: &LieRinehartAlgebra<T>,
        left: &LrModule<T>,
        right: &LrModule<T>,
        out: &LrModule<T>,
    ) -> ValidationReport {
        let mut report = ValidationReport::new("pairing");
        if left.qdim() != self.left_dim || right.qdim() != self.right_dim || out.qdim() != self.out_dim {
            report.push("shape", vec![], "pairing does not match module dimensions");
            return report;
        }
        let units = |n: usize| -> Vec<Vec<T>> { (0..n).map(|i| crate::scalar::unit_vec(n, i)).collect() };
        for (i, u) in units(self.left_dim).iter().enumerate() {
            for (j, v) in units(self.right_dim).iter().enumerate() {
                let uv = self.apply(u, v);
                for k in 0..lra.base().dim() {
                    let au = left.a_actions()[k].mul_vec(u);
                    let av = right.a_actions()[k].mul_vec(v);
                    let lhs = self.apply(&au, v);
                    if lhs != self.apply(u, &av) {
                        report.push("A-balanced", vec![i, j, k], "mu(au, v) != mu(u, av)");
                    }
                    if lhs != out.a_actions()[k].mul_vec(&uv) {
                        report.push("A-linear", vec![i, j, k], "mu(au, v) != a mu(u, v)");
                    }
                }
                for a in 0..lra.rank() {
                    let lhs = out.l_actions()[a].mul_vec(&uv);
                    let mut rhs = self.apply(&left.l_actions()[a].mul_vec(u), v);
                    add_assign(&mut rhs, &self.apply(u, &right.l_actions()[a].mul_vec(v)));
                    if lhs != rhs {
                        report.push("L-equivariant", vec![i, j, a], "alpha mu(u,v) != mu(alpha u, v) + mu(u, alpha v)");
                    }
                }
            }
        }
        report
    }
}

/// The shuffle product `f ∧ g`, with values multiplied by `pairing`.
pub fn wedge<T: Scalar>(f: &AltForm<T>, g: &AltForm<T>, pairing: &Pairing<T>) -> Result<AltForm<T>> {
    if f.rank() != g.rank() || f.value_dim() != pairing.left_dim || g.value_dim() != pairing.right_dim {
        return Err(Error::Dimension("wedge factors do not match the pairing".into()));
    }
    let (p, q) = (f.degree(), g.degree());
    let n = f.rank();
    let mut out = AltForm::zero(p + q, n, pairing.out_dim);
    if f.is_zero() || g.is_zero() {
        return Ok(out);
    }
    let global = T::sign(p * q);
    for tuple in combinations(n, p + q) {
        let mut acc = vec![T::zero(); pairing.out_dim];
        for subset in combinations(p + q, p) {
            let left: Vec<usize> = subset.iter().map(|&s| tuple[s]).collect();
            let u = f.value(&left);
            if is_zero_vec(&u) {
                continue;
            }
            let right: Vec<usize> = (0..p + q).filter(|k| !subset.contains(k)).map(|k| tuple[k]).collect();
            let v = g.value(&right);
            if is_zero_vec(&v) {
                continue;
            }
            axpy(&mut acc, &T::sign(shuffle_parity(&subset)), &pairing.apply(&u, &v));
        }
        out.set(&tuple, scale_vec(&global, &acc));
    }
    Ok(out)
}

/// A bounded chain complex `C_top → … → C_0` of `(A, L)`-modules.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedModule<T> {
    components: Vec<LrModule<T>>,
    /// `boundary[l - 1]` maps `C_l` to `C_{l-1}`.
    boundary: Vec<Matrix<T>>,
}

impl<T: Scalar> GradedModule<T> {
    pub fn new(components: Vec<LrModule<T>>, boundary: Vec<Matrix<T>>) -> Result<Self> {
        if components.is_empty() || boundary.len() + 1 != components.len() {
            return Err(Error::Dimension("need one boundary map per positive level".into()));
        }
        for (l, b) in boundary.iter().enumerate() {
            if b.rows() != components[l].qdim() || b.cols() != components[l + 1].qdim() {
                return Err(Error::Dimension(format!("boundary at level {} has wrong shape", l + 1)));
            }
        }
        Ok(GradedModule { components, boundary })
    }

    pub fn levels(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, level: usize) -> &LrModule<T> {
        &self.components[level]
    }

    /// The boundary `C_level → C_{level-1}` (`level ≥ 1`).
    pub fn boundary(&self, level: usize) -> &Matrix<T> {
        &self.boundary[level - 1]
    }

    /// Checks each component, `A`-linearity and `L`-equivariance of the
    /// boundary, and that consecutive boundaries compose to zero.
    pub fn validate(&self, lra: &LieRinehartAlgebra<T>) -> ValidationReport {
        let mut report = ValidationReport::new("graded module");
        for c in &self.components {
            report.extend(c.validate(lra));
        }
        for l in 1..self.levels() {
            let b = self.boundary(l);
            let (src, dst) = (&self.components[l], &self.components[l - 1]);
            for k in 0..lra.base().dim() {
                if b.mul(&src.a_actions()[k]).expect("shape") != dst.a_actions()[k].mul(b).expect("shape") {
                    report.push("boundary is A-linear", vec![l, k], "boundary does not commute with A");
                }
            }
            for a in 0..lra.rank() {
                if b.mul(&src.l_actions()[a]).expect("shape") != dst.l_actions()[a].mul(b).expect("shape") {
                    report.push("boundary is a chain map", vec![l, a], "boundary does not commute with L");
                }
            }
            if l >= 2 && !self.boundary(l - 1).mul(b).expect("shape").is_zero() {
                report.push("boundary squares to zero", vec![l], "consecutive boundaries compose to nonzero");
            }
        }
        report
    }
}

/// A family of forms with values in the levels of a [`GradedModule`],
/// keyed by `(level, degree)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedAltForm<T> {
    parts: BTreeMap<(usize, usize), AltForm<T>>,
}

impl<T: Scalar> GradedAltForm<T> {
    pub fn new() -> Self {
        GradedAltForm { parts: BTreeMap::new() }
    }

    /// Adds `f` as a component with values in `level`.
    pub fn insert(&mut self, level: usize, f: AltForm<T>) -> Result<()> {
        let key = (level, f.degree());
        let merged = match self.parts.remove(&key) {
            Some(existing) => existing.add(&f)?,
            None => f,
        };
        if !merged.is_zero() {
            self.parts.insert(key, merged);
        }
        Ok(())
    }

    pub fn part(&self, level: usize, degree: usize) -> Option<&AltForm<T>> {
        self.parts.get(&(level, degree))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&(usize, usize), &AltForm<T>)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

/// The total differential `d⁰ + d¹` on forms with values in a chain
/// complex. `d⁰` applies the boundary to values; on a form with values in
/// level `l`, `d¹` is `(-1)^l` times the Chevalley-Eilenberg differential.
pub fn total_differential<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    complex: &GradedModule<T>,
    f: &GradedAltForm<T>,
) -> Result<GradedAltForm<T>> {
    let report = complex.validate(lra);
    if !report.is_valid() {
        return Err(Error::Invalid(format!("coefficient complex: {:?}", report.violations)));
    }
    let mut out = GradedAltForm::new();
    for (&(level, _), form) in f.parts() {
        if level >= complex.levels() || form.value_dim() != complex.component(level).qdim() {
            return Err(Error::Dimension(format!("form component at level {level} does not fit")));
        }
        if level >= 1 {
            out.insert(level - 1, form.map_values(complex.boundary(level)))?;
        }
        let d1 = ce_differential(lra, complex.component(level), form).scale(&T::sign(level));
        out.insert(level, d1)?;
    }
    Ok(out)
}

/// A finite graded vector space with a differential, each basis vector
/// carrying a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComplex<T> {
    degrees: Vec<i64>,
    differential: Matrix<T>,
}

impl<T: Scalar> GradedComplex<T> {
    pub fn new(degrees: Vec<i64>, differential: Matrix<T>) -> Result<Self> {
        let n = degrees.len();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::Dimension("differential must be square of the space dimension".into()));
        }
        Ok(GradedComplex { degrees, differential })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn differential(&self) -> &Matrix<T> {
        &self.differential
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }
}

/// Whether `f: C → U` raises degrees by exactly `degree`.
pub fn is_homogeneous<T: Scalar>(source: &GradedComplex<T>, target: &GradedComplex<T>, f: &Matrix<T>, degree: i64) -> bool {
    (0..f.rows()).all(|i| (0..f.cols()).all(|j| f[(i, j)].is_zero() || target.degrees[i] == source.degrees[j] + degree))
}

/// The differential of `Hom(C, U)`: `Df = d_U f + (-1)^{|f|+1} f d_C`.
pub fn hom_differential<T: Scalar>(
    source: &GradedComplex<T>,
    target: &GradedComplex<T>,
    f: &Matrix<T>,
    degree: i64,
) -> Result<Matrix<T>> {
    if f.rows() != target.dim() || f.cols() != source.dim() {
        return Err(Error::Dimension("map does not fit the complexes".into()));
    }
    if !is_homogeneous(source, target, f, degree) {
        return Err(Error::Invalid(format!("map is not homogeneous of degree {degree}")));
    }
    let sign = T::sign((degree + 1).rem_euclid(2) as usize);
    let df = target.differential.mul(f)?;
    let fd = f.mul(&source.differential)?;
    Ok(df.add(&fd.scale(&sign)))
}

/// Matrix of `differential_with` from degree `p` to degree `p + 1`, in the
/// flat coordinates of [`AltForm::to_vector`].
pub fn differential_matrix_with<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    ops: &[Matrix<T>],
    p: usize,
) -> Matrix<T> {
    let n = lra.rank();
    let q = module.qdim();
    let src = AltForm::<T>::space_dim(p, n, q);
    let dst = AltForm::<T>::space_dim(p + 1, n, q);
    let mut m = Matrix::zeros(dst, src);
    for j in 0..src {
        let f = AltForm::from_vector(p, n, q, &crate::scalar::unit_vec(src, j)).expect("length");
        m.set_column(j, &differential_with(lra, module, ops, &f).to_vector());
    }
    m
}

pub fn differential_matrix<T: Scalar>(lra: &LieRinehartAlgebra<T>, module: &LrModule<T>, p: usize) -> Matrix<T> {
    differential_matrix_with(lra, module, module.l_actions(), p)
}

/// `H^p(Alt_A(L, M))` with canonical representatives.
#[derive(Clone, Debug)]
pub struct Cohomology<T> {
    degree: usize,
    rank: usize,
    value_dim: usize,
    differential: Matrix<T>,
    quotient: Quotient<T>,
}

impl<T: Scalar> Cohomology<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Canonical cocycle representatives of a basis of `H^p`.
    pub fn representatives(&self) -> Vec<AltForm<T>> {
        self.quotient
            .representatives()
            .iter()
            .map(|v| AltForm::from_vector(self.degree, self.rank, self.value_dim, v).expect("length"))
            .collect()
    }

    pub fn is_cocycle(&self, f: &AltForm<T>) -> bool {
        self.differential.mul_vec(&f.to_vector()).iter().all(Zero::is_zero)
    }

    /// Coordinates of `[f]` against [`Cohomology::representatives`].
    pub fn class_of(&self, f: &AltForm<T>) -> Result<Vec<T>> {
        if (f.degree(), f.rank(), f.value_dim()) != (self.degree, self.rank, self.value_dim) {
            return Err(Error::Dimension("form does not belong to this cochain space".into()));
        }
        if !self.is_cocycle(f) {
            return Err(Error::NotCocycle(format!("degree-{} form has nonzero differential", self.degree)));
        }
        self.quotient
            .coordinates(&f.to_vector())
            .ok_or_else(|| Error::Verification("cocycle outside cocycle space".into()))
    }

    pub fn is_coboundary(&self, f: &AltForm<T>) -> Result<bool> {
        Ok(is_zero_vec(&self.class_of(f)?))
    }
}

/// `H^p` for the differential determined by `ops` (see [`differential_with`]).
pub fn cohomology_with<T: Scalar>(
    lra: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    ops: &[Matrix<T>],
    p: usize,
) -> Result<Cohomology<T>> {
    let n = lra.rank();
    let q = module.qdim();
    let ambient = AltForm::<T>::space_dim(p, n, q);
    let differential = differential_matrix_with(lra, module, ops, p);
    let cocycles = differential.kernel_basis();
    let boundaries = if p == 0 {
        Vec::new()
    } else {
        differential_matrix_with(lra, module, ops, p - 1).columns()
    };
    let quotient = Quotient::new(ambient, &boundaries, &cocycles)?;
    Ok(Cohomology {
        degree: p,
        rank: n,
        value_dim: q,
        differential,
        quotient,
    })
}

/// `H^p(Alt_A(L, M))`. Fails with [`Error::NotContained`] if `d² ≠ 0`.
pub fn cohomology<T: Scalar>(lra: &LieRinehartAlgebra<T>, module: &LrModule<T>, p: usize) -> Result<Cohomology<T>> {
    cohomology_with(lra, module, module.l_actions(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn evaluate_is_alternating() {
        let ab2 = fixtures::ab2::<Rational>();
        let m = LrModule::trivial(&ab2).unwrap();
        let f = AltForm::from_values(2, 2, 1, [(vec![0, 1], vec![q(5)])]).unwrap();
        let (e0, e1) = (ab2.basis_element(0), ab2.basis_element(1));
        assert_eq!(evaluate(&ab2, &m, &f, &[e1.clone(), e0]).unwrap(), vec![q(-5)]);
        assert_eq!(evaluate(&ab2, &m, &f, &[e1.clone(), e1]).unwrap(), vec![q(0)]);
    }

    #[test]
    fn evaluate_is_a_linear() {
        let tp2 = fixtures::tp2::<Rational>();
        let m = LrModule::base(&tp2);
        let one = tp2.base().unit().to_vec();
        let f = AltForm::from_values(1, 1, 2, [(vec![0], one)]).unwrap();
        let t = tp2.base().basis_element(1);
        let tx = tp2.scaled_basis_element(&t, 0);
        assert_eq!(evaluate(&tp2, &m, &f, &[tx]).unwrap(), t);
    }

    #[test]
    fn differential_examples() {
        let tp2 = fixtures::tp2::<Rational>();
        let m = LrModule::base(&tp2);
        let f = AltForm::constant(1, vec![q(0), q(1)]);
        let df = ce_differential(&tp2, &m, &f);
        assert_eq!(df.value(&[0]), vec![q(0), q(-1)]);

        let sl2 = fixtures::sl2::<Rational>();
        let triv = LrModule::trivial(&sl2).unwrap();
        let h_star = AltForm::from_values(1, 3, 1, [(vec![2], vec![q(1)])]).unwrap();
        assert_eq!(ce_differential(&sl2, &triv, &h_star).value(&[0, 1]), vec![q(-1)]);

        let ab2 = fixtures::ab2::<Rational>();
        let triv = LrModule::trivial(&ab2).unwrap();
        assert!(ce_differential(&ab2, &triv, &AltForm::constant(2, vec![q(7)])).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let ab2 = fixtures::ab2::<Rational>();
        let mu = Pairing::algebra(&ab2);
        let x = AltForm::from_values(1, 2, 1, [(vec![0], vec![q(1)])]).unwrap();
        let y = AltForm::from_values(1, 2, 1, [(vec![1], vec![q(1)])]).unwrap();
        assert_eq!(wedge(&x, &y, &mu).unwrap().value(&[0, 1]), vec![q(-1)]);
        let one = AltForm::constant(2, vec![q(1)]);
        assert_eq!(wedge(&x, &one, &mu).unwrap(), x);
        let omega = AltForm::from_values(2, 2, 1, [(vec![0, 1], vec![q(1)])]).unwrap();
        let w = wedge(&omega, &omega, &mu).unwrap();
        assert_eq!(w.degree(), 4);
        assert!(w.is_zero());
    }

    #[test]
    fn cohomology_examples() {
        let ab2 = fixtures::ab2::<Rational>();
        let triv = LrModule::trivial(&ab2).unwrap();
        let dims: Vec<usize> = (0..=2).map(|p| cohomology(&ab2, &triv, p).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 2, 1]);

        let tp2 = fixtures::tp2::<Rational>();
        let m = LrModule::base(&tp2);
        let dims: Vec<usize> = (0..=1).map(|p| cohomology(&tp2, &m, p).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 1]);

        let sl2 = fixtures::sl2::<Rational>();
        let triv = LrModule::trivial(&sl2).unwrap();
        let dims: Vec<usize> = (0..=3).map(|p| cohomology(&sl2, &triv, p).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
    }

    #[test]
    fn representatives_are_independent_cocycles() {
        let ab2 = fixtures::ab2::<Rational>();
        let triv = LrModule::trivial(&ab2).unwrap();
        let h1 = cohomology(&ab2, &triv, 1).unwrap();
        let reps = h1.representatives();
        assert_eq!(h1.class_of(&reps[0]).unwrap(), vec![q(1), q(0)]);
        assert_eq!(h1.class_of(&reps[1]).unwrap(), vec![q(0), q(1)]);
    }

    #[test]
    fn hom_differential_examples() {
        let d = Matrix::from_rows(2, &[vec![q(0), q(1)], vec![q(0), q(0)]]).unwrap();
        let c = GradedComplex::new(vec![0, 1], d.clone()).unwrap();
        let id = Matrix::<Rational>::identity(2);
        assert!(hom_differential(&c, &c, &id, 0).unwrap().is_zero());

        let zero = GradedComplex::new(vec![0, 1], Matrix::zeros(2, 2)).unwrap();
        let f = Matrix::from_rows(2, &[vec![q(0), q(0)], vec![q(3), q(0)]]).unwrap();
        assert!(hom_differential(&zero, &zero, &f, 1).unwrap().is_zero());

        let df = hom_differential(&c, &c, &f, 1).unwrap();
        let expected = d.mul(&f).unwrap().add(&f.mul(&d).unwrap());
        assert_eq!(df, expected);
        assert!(!df.is_zero());
        assert!(hom_differential(&c, &c, &f, 0).is_err());
    }

    #[test]
    fn total_differential_with_zero_boundary_is_ce() {
        let tp2 = fixtures::tp2::<Rational>();
        let m = LrModule::base(&tp2);
        let c = GradedModule::new(vec![m.clone(), m.clone()], vec![Matrix::zeros(2, 2)]).unwrap();
        let f = AltForm::constant(1, vec![q(0), q(1)]);
        let mut g = GradedAltForm::new();
        g.insert(1, f.clone()).unwrap();
        let dg = total_differential(&tp2, &c, &g).unwrap();
        assert_eq!(dg.part(1, 1).unwrap(), &ce_differential(&tp2, &m, &f).scale(&q(-1)));
    }
}
