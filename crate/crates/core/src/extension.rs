//! Extensions `0 → L' → L → L'' → 0` of Lie-Rinehart algebras over a common
//! base, connections, curvature, covariant derivatives, and the
//! classification of extensions by 2-cocycles.
//!
//! The maps `incl: L' → L`, `proj: L → L''` and a connection `ω: L'' → L`
//! are `A`-linear and stored by the images of basis elements.

use rand::Rng;

use crate::cochain::{ce_differential, cohomology, differential_matrix, differential_with, AltForm};
use crate::error::{Error, Result};
use crate::lierinehart::{block_diag, scale_blocks, LieRinehartAlgebra, LrModule};
use crate::linalg::Matrix;
use crate::scalar::{add_assign, is_zero_vec, scale_vec, sub_vec, unit_vec, Scalar};
use crate::validation::ValidationReport;

/// An `A`-linear section of the projection, given by `ω(e''_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T> {
    images: Vec<Vec<T>>,
}

impl<T: Scalar> Connection<T> {
    pub fn new(images: Vec<Vec<T>>) -> Self {
        Connection { images }
    }

    pub fn images(&self) -> &[Vec<T>] {
        &self.images
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extension<T> {
    kernel: LieRinehartAlgebra<T>,
    total: LieRinehartAlgebra<T>,
    quotient: LieRinehartAlgebra<T>,
    incl: Vec<Vec<T>>,
    proj: Vec<Vec<T>>,
    connection: Connection<T>,
    incl_q: Matrix<T>,
}

/// Applies the `A`-linear map with the given basis images to `x`.
fn apply_amap<T: Scalar>(
    source: &LieRinehartAlgebra<T>,
    images: &[Vec<T>],
    target_qdim: usize,
    x: &[T],
) -> Vec<T> {
    let mut out = vec![T::zero(); target_qdim];
    for (i, img) in images.iter().enumerate() {
        let c = source.coefficient(x, i);
        if !is_zero_vec(c) {
            add_assign(&mut out, &scale_blocks(source.base(), c, img));
        }
    }
    out
}

impl<T: Scalar> Extension<T> {
    /// Assembles an extension, checking only shapes. Use
    /// [`Extension::validate`] for the axioms.
    pub fn new(
        kernel: LieRinehartAlgebra<T>,
        total: LieRinehartAlgebra<T>,
        quotient: LieRinehartAlgebra<T>,
        incl: Vec<Vec<T>>,
        proj: Vec<Vec<T>>,
        connection: Connection<T>,
    ) -> Result<Self> {
        let shape = |maps: &[Vec<T>], count: usize, len: usize, what: &str| -> Result<()> {
            if maps.len() != count || maps.iter().any(|v| v.len() != len) {
                return Err(Error::Dimension(format!("{what} needs {count} images of length {len}")));
            }
            Ok(())
        };
        shape(&incl, kernel.rank(), total.qdim(), "incl")?;
        shape(&proj, total.rank(), quotient.qdim(), "proj")?;
        shape(connection.images(), quotient.rank(), total.qdim(), "connection")?;
        if kernel.base().dim() != total.base().dim() || quotient.base().dim() != total.base().dim() {
            return Err(Error::Dimension("extension algebras have different bases".into()));
        }
        let incl_q = kernel.qmatrix_of_amap(&incl, total.qdim());
        Ok(Extension {
            kernel,
            total,
            quotient,
            incl,
            proj,
            connection,
            incl_q,
        })
    }

    /// `0 → 0 → L → L → 0` with the identity connection.
    pub fn trivial(lra: LieRinehartAlgebra<T>) -> Self {
        let kernel = LieRinehartAlgebra::abelian(lra.base().clone(), &[]);
        let ids: Vec<Vec<T>> = (0..lra.rank()).map(|i| lra.basis_element(i)).collect();
        Self::new(kernel, lra.clone(), lra, Vec::new(), ids.clone(), Connection::new(ids)).expect("shapes agree")
    }

    /// The product `L' × L''` (zero cross brackets) with its canonical
    /// connection.
    pub fn direct_product(kernel: LieRinehartAlgebra<T>, quotient: LieRinehartAlgebra<T>) -> Result<Self> {
        let d = kernel.base().dim();
        let theta = vec![vec![vec![T::zero(); kernel.rank() * d]; kernel.rank()]; quotient.rank()];
        let zero = AltForm::zero(2, quotient.rank(), kernel.qdim());
        twisted_product(&kernel, &quotient, &theta, &zero)
    }

    pub fn kernel(&self) -> &LieRinehartAlgebra<T> {
        &self.kernel
    }

    pub fn total(&self) -> &LieRinehartAlgebra<T> {
        &self.total
    }

    pub fn quotient(&self) -> &LieRinehartAlgebra<T> {
        &self.quotient
    }

    pub fn incl_images(&self) -> &[Vec<T>] {
        &self.incl
    }

    pub fn proj_images(&self) -> &[Vec<T>] {
        &self.proj
    }

    /// The connection stored with the extension.
    pub fn connection(&self) -> &Connection<T> {
        &self.connection
    }

    pub fn with_connection(&self, connection: Connection<T>) -> Result<Self> {
        Self::new(
            self.kernel.clone(),
            self.total.clone(),
            self.quotient.clone(),
            self.incl.clone(),
            self.proj.clone(),
            connection,
        )
    }

    pub fn include(&self, x: &[T]) -> Vec<T> {
        apply_amap(&self.kernel, &self.incl, self.total.qdim(), x)
    }

    pub fn project(&self, x: &[T]) -> Vec<T> {
        apply_amap(&self.total, &self.proj, self.quotient.qdim(), x)
    }

    /// `ω(x)` for `x ∈ L''`.
    pub fn lift(&self, connection: &Connection<T>, x: &[T]) -> Vec<T> {
        apply_amap(&self.quotient, connection.images(), self.total.qdim(), x)
    }

    /// The element of `L'` mapping to `x` under `incl`.
    pub fn retract(&self, x: &[T]) -> Result<Vec<T>> {
        if self.kernel.qdim() == 0 {
            return if is_zero_vec(x) { Ok(Vec::new()) } else { Err(Error::NotContained) };
        }
        self.incl_q.solve(x).ok_or(Error::NotContained)
    }

    /// Checks the constituent algebras, exactness, that `incl` and `proj`
    /// preserve brackets and anchors, and that the stored connection is a
    /// section.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new("extension");
        report.extend(self.kernel.validate());
        report.extend(self.total.validate());
        report.extend(self.quotient.validate());
        if self.kernel.base() != self.total.base() || self.quotient.base() != self.total.base() {
            report.push("common base algebra", vec![], "kernel, total and quotient have different bases");
            return report;
        }
        if !self.kernel.has_zero_anchor() {
            report.push("kernel has zero anchor", vec![], "the kernel acts nontrivially on A");
        }
        if self.total.rank() != self.kernel.rank() + self.quotient.rank() {
            report.push("rank additivity", vec![], "rank L != rank L' + rank L''");
        }
        for s in 0..self.kernel.rank() {
            if !is_zero_vec(&self.project(&self.incl[s])) {
                report.push("exactness", vec![s], "proj(incl(e'_s)) != 0");
            }
        }
        let proj_q = self.total.qmatrix_of_amap(&self.proj, self.quotient.qdim());
        let (ri, rp) = (self.incl_q.rank(), proj_q.rank());
        if ri != self.kernel.qdim() {
            report.push("incl injective", vec![], "incl has a kernel");
        }
        if rp != self.quotient.qdim() {
            report.push("proj surjective", vec![], "proj is not onto");
        }
        if ri + rp != self.total.qdim() {
            report.push("exactness", vec![], "ker(proj) != im(incl)");
        }
        for s in 0..self.kernel.rank() {
            if !self.total.anchor_of(&self.incl[s]).is_zero() {
                report.push("incl preserves anchors", vec![s], "anchor(incl(e'_s)) != 0");
            }
            for t in s + 1..self.kernel.rank() {
                let lhs = self.include(self.kernel.bracket_basis(s, t));
                let rhs = self.total.bracket(&self.incl[s], &self.incl[t]);
                if lhs != rhs {
                    report.push("incl preserves brackets", vec![s, t], "incl[e'_s,e'_t] != [incl e'_s, incl e'_t]");
                }
            }
        }
        for i in 0..self.total.rank() {
            if self.quotient.anchor_of(&self.proj[i]) != self.total.anchors()[i].0 {
                report.push("proj preserves anchors", vec![i], "anchor''(proj e_i) != anchor(e_i)");
            }
            for j in i + 1..self.total.rank() {
                let lhs = self.project(self.total.bracket_basis(i, j));
                let rhs = self.quotient.bracket(&self.proj[i], &self.proj[j]);
                if lhs != rhs {
                    report.push("proj preserves brackets", vec![i, j], "proj[e_i,e_j] != [proj e_i, proj e_j]");
                }
            }
        }
        report.extend(self.validate_connection(&self.connection));
        report
    }

    pub fn validate_connection(&self, connection: &Connection<T>) -> ValidationReport {
        let mut report = ValidationReport::new("connection");
        if connection.images().len() != self.quotient.rank() {
            report.push("shape", vec![], "one image per basis element of L''");
            return report;
        }
        for a in 0..self.quotient.rank() {
            if self.project(&connection.images()[a]) != self.quotient.basis_element(a) {
                report.push("section", vec![a], "proj(omega(e''_a)) != e''_a");
            }
        }
        report
    }

    /// `ω + incl∘β` for a random `A`-linear `β: L'' → L'` with small
    /// integer coordinates.
    pub fn random_connection<R: Rng>(&self, rng: &mut R) -> Connection<T> {
        let images = self
            .connection
            .images()
            .iter()
            .map(|img| {
                let beta: Vec<T> = (0..self.kernel.qdim()).map(|_| T::from_int(rng.gen_range(-2..=2))).collect();
                let mut v = img.clone();
                add_assign(&mut v, &self.include(&beta));
                v
            })
            .collect();
        Connection::new(images)
    }

    /// `[e_j, incl(x)]` pulled back to `L'`, for a basis element `e_j` of `L`.
    fn ad_on_kernel(&self, x_total: &[T], y_kernel: &[T]) -> Result<Vec<T>> {
        self.retract(&self.total.bracket(x_total, &self.include(y_kernel)))
    }
}

/// The curvature `Ω(α,β) = [ω α, ω β] - ω[α,β]`, as an `L'`-valued 2-form
/// on `L''`.
pub fn curvature<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>) -> Result<AltForm<T>> {
    let n = ext.quotient().rank();
    let mut omega = AltForm::zero(2, n, ext.kernel().qdim());
    for i in 0..n {
        for j in i + 1..n {
            let a = ext.lift(connection, &ext.quotient().basis_element(i));
            let b = ext.lift(connection, &ext.quotient().basis_element(j));
            let defect = sub_vec(
                &ext.total().bracket(&a, &b),
                &ext.lift(connection, ext.quotient().bracket_basis(i, j)),
            );
            omega.set(&[i, j], ext.retract(&defect)?);
        }
    }
    Ok(omega)
}

/// `L'` as an `(A, L)`-module through the bracket of `L`.
pub fn adjoint_module<T: Scalar>(ext: &Extension<T>) -> Result<LrModule<T>> {
    let kernel = ext.kernel();
    let alg = kernel.base();
    let d = alg.dim();
    let r = kernel.rank();
    let a_action = (0..d).map(|k| block_diag(&alg.mult_matrix(&alg.basis_element(k)), r)).collect();
    let mut l_action = Vec::with_capacity(ext.total().rank());
    for j in 0..ext.total().rank() {
        let ej = ext.total().basis_element(j);
        let mut m = Matrix::zeros(kernel.qdim(), kernel.qdim());
        for c in 0..kernel.qdim() {
            m.set_column(c, &ext.ad_on_kernel(&ej, &unit_vec(kernel.qdim(), c))?);
        }
        l_action.push(m);
    }
    LrModule::new(kernel.qdim(), a_action, l_action)
}

/// Checks that every `L`-basis element acts on `L'` by derivations of the
/// bracket of `L'`.
pub fn adjoint_derivation_check<T: Scalar>(ext: &Extension<T>, module: &LrModule<T>) -> ValidationReport {
    let mut report = ValidationReport::new("adjoint action by derivations");
    let kernel = ext.kernel();
    for (j, act) in module.l_actions().iter().enumerate() {
        for s in 0..kernel.rank() {
            for t in s + 1..kernel.rank() {
                let (x, y) = (kernel.basis_element(s), kernel.basis_element(t));
                let lhs = act.mul_vec(&kernel.bracket(&x, &y));
                let mut rhs = kernel.bracket(&act.mul_vec(&x), &y);
                add_assign(&mut rhs, &kernel.bracket(&x, &act.mul_vec(&y)));
                if lhs != rhs {
                    report.push("derivation of the kernel bracket", vec![j, s, t], "alpha[x,y] != [alpha x,y] + [x, alpha y]");
                }
            }
        }
    }
    report
}

/// The operators through which `L''` acts on values in the covariant
/// derivative: `e''_a` acts as `ω(e''_a)` does on `module`.
pub fn connection_operators<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    module: &LrModule<T>,
) -> Vec<Matrix<T>> {
    (0..ext.quotient().rank())
        .map(|a| module.act_l(ext.total(), &ext.lift(connection, &ext.quotient().basis_element(a))))
        .collect()
}

/// Restricts an `(A, L)`-module along `ω`. This is an `(A, L'')`-module
/// whenever the kernel acts trivially on it.
pub fn induced_module<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    module: &LrModule<T>,
) -> Result<LrModule<T>> {
    LrModule::new(module.qdim(), module.a_actions().to_vec(), connection_operators(ext, connection, module))
}

/// The covariant derivative `D^ω` on forms on `L''` with values in an
/// `(A, L)`-module.
pub fn covariant_derivative<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    module: &LrModule<T>,
    f: &AltForm<T>,
) -> AltForm<T> {
    let ops = connection_operators(ext, connection, module);
    differential_with(ext.quotient(), module, &ops, f)
}

/// `D^ω Ω = 0` with values in the adjoint module.
pub fn bianchi_check<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>) -> Result<bool> {
    let omega = curvature(ext, connection)?;
    let adj = adjoint_module(ext)?;
    Ok(covariant_derivative(ext, connection, &adj, &omega).is_zero())
}

/// Builds `L' ⊕ L''` with `[k_s, k_t]` from `kernel`, `[q_i, k_s] =
/// theta[i][s]`, and `[q_i, q_j] = cocycle(i, j) + [q_i, q_j]''`. The result
/// is validated; its stored connection is `q_i ↦ q_i`.
pub fn twisted_product<T: Scalar>(
    kernel: &LieRinehartAlgebra<T>,
    quotient: &LieRinehartAlgebra<T>,
    theta: &[Vec<Vec<T>>],
    cocycle: &AltForm<T>,
) -> Result<Extension<T>> {
    let alg = quotient.base().clone();
    let d = alg.dim();
    let (r, n) = (kernel.rank(), quotient.rank());
    let total_qdim = (r + n) * d;
    let embed_k = |x: &[T]| -> Vec<T> {
        let mut v = x.to_vec();
        v.resize(total_qdim, T::zero());
        v
    };
    let embed_q = |x: &[T]| -> Vec<T> {
        let mut v = vec![T::zero(); r * d];
        v.extend_from_slice(x);
        v
    };
    let mut bracket = vec![vec![vec![T::zero(); total_qdim]; r + n]; r + n];
    for s in 0..r {
        for t in 0..r {
            bracket[s][t] = embed_k(kernel.bracket_basis(s, t));
        }
    }
    for i in 0..n {
        for s in 0..r {
            let v = embed_k(&theta[i][s]);
            bracket[s][r + i] = scale_vec(&-T::one(), &v);
            bracket[r + i][s] = v;
        }
        for j in 0..n {
            let mut v = embed_k(&cocycle.value_signed(&[i, j]));
            add_assign(&mut v, &embed_q(quotient.bracket_basis(i, j)));
            bracket[r + i][r + j] = v;
        }
    }
    let mut anchor = vec![crate::algebra::Derivation::zero(d); r];
    anchor.extend(quotient.anchors().iter().cloned());
    let mut labels: Vec<String> = kernel.labels().to_vec();
    labels.extend(quotient.labels().iter().cloned());
    let total = LieRinehartAlgebra::new(alg, labels, bracket, anchor)?;
    let incl = (0..r).map(|s| total.basis_element(s)).collect();
    let mut proj = vec![quotient.zero_element(); r];
    proj.extend((0..n).map(|i| quotient.basis_element(i)));
    let connection = Connection::new((0..n).map(|i| total.basis_element(r + i)).collect());
    let ext = Extension::new(kernel.clone(), total, quotient.clone(), incl, proj, connection)?;
    ext.validate().into_result()?;
    Ok(ext)
}

fn kernel_labels(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["z".into()]
    } else {
        (0..r).map(|s| format!("z{s}")).collect()
    }
}

/// The extension of `L''` by the abelian kernel `module` (free over `A`)
/// with curvature `cocycle` under its canonical connection.
pub fn extension_from_cocycle<T: Scalar>(
    quotient: &LieRinehartAlgebra<T>,
    module: &LrModule<T>,
    cocycle: &AltForm<T>,
) -> Result<Extension<T>> {
    let alg = quotient.base();
    module.validate(quotient).into_result()?;
    let r = module
        .free_rank(alg)
        .ok_or_else(|| Error::Unsupported("kernel module must be free over A".into()))?;
    if cocycle.degree() != 2 || cocycle.value_dim() != module.qdim() || cocycle.rank() != quotient.rank() {
        return Err(Error::Dimension("cocycle must be an L''-form of degree 2 with module values".into()));
    }
    if !ce_differential(quotient, module, cocycle).is_zero() {
        return Err(Error::NotCocycle("d(Omega) != 0".into()));
    }
    let labels = kernel_labels(r);
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let kernel = LieRinehartAlgebra::abelian(alg.clone(), &label_refs);
    let theta: Vec<Vec<Vec<T>>> = module
        .l_actions()
        .iter()
        .map(|act| (0..r).map(|s| act.mul_vec(&kernel.scaled_basis_element(alg.unit(), s))).collect())
        .collect();
    twisted_product(&kernel, quotient, &theta, cocycle)
}

/// For an abelian kernel, `L'` as an `(A, L'')`-module.
pub fn kernel_module<T: Scalar>(ext: &Extension<T>) -> Result<LrModule<T>> {
    if !ext.kernel().is_abelian() {
        return Err(Error::Unsupported("kernel is not abelian".into()));
    }
    induced_module(ext, ext.connection(), &adjoint_module(ext)?)
}

/// Coordinates of `[Ω]` in `H²(Alt_A(L'', L'))` for an abelian kernel.
pub fn cocycle_class<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>) -> Result<Vec<T>> {
    let module = kernel_module(ext)?;
    let omega = curvature(ext, connection)?;
    cohomology(ext.quotient(), &module, 2)?.class_of(&omega)
}

/// Whether two extensions with the same kernel and quotient are congruent.
///
/// Abelian kernels: decided exactly by a coboundary solve. Non-abelian
/// kernels: decided only when both stored connections induce the same
/// action of `L''` on `L'`; otherwise [`Error::Unsupported`].
pub fn congruent<T: Scalar>(e1: &Extension<T>, e2: &Extension<T>) -> Result<bool> {
    if e1.kernel() != e2.kernel() || e1.quotient() != e2.quotient() {
        return Err(Error::Invalid("extensions have different kernel or quotient".into()));
    }
    let m1 = induced_module(e1, e1.connection(), &adjoint_module(e1)?)?;
    let m2 = induced_module(e2, e2.connection(), &adjoint_module(e2)?)?;
    let diff = curvature(e1, e1.connection())?.sub(&curvature(e2, e2.connection())?)?;
    if e1.kernel().is_abelian() {
        if m1 != m2 {
            return Err(Error::Invalid("extensions induce different kernel modules".into()));
        }
        return cohomology(e1.quotient(), &m1, 2)?.is_coboundary(&diff);
    }
    if m1 != m2 {
        return Err(Error::Unsupported(
            "non-abelian kernels with different induced actions".into(),
        ));
    }
    let z = center(e1, e1.connection())?;
    let mut rho = AltForm::zero(2, diff.rank(), z.dim());
    for (tuple, value) in diff.entries() {
        match z.coordinates(value) {
            Some(c) => rho.set(tuple, c),
            None => return Ok(false),
        }
    }
    cohomology(e1.quotient(), z.module(), 2)?.is_coboundary(&rho)
}

/// The center `Z` of the kernel with its induced `(A, L'')`-module
/// structure.
#[derive(Clone, Debug, PartialEq)]
pub struct Center<T> {
    basis: Vec<Vec<T>>,
    basis_matrix: Matrix<T>,
    module: LrModule<T>,
}

impl<T: Scalar> Center<T> {
    /// `Q`-dimension of `Z`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Q`-basis of `Z` in kernel coordinates.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn module(&self) -> &LrModule<T> {
        &self.module
    }

    /// Kernel element with the given `Z`-coordinates.
    pub fn to_kernel(&self, coords: &[T]) -> Vec<T> {
        self.basis_matrix.mul_vec(coords)
    }

    /// `Z`-coordinates of a kernel element, if it is central.
    pub fn coordinates(&self, x: &[T]) -> Option<Vec<T>> {
        if self.basis.is_empty() {
            return is_zero_vec(x).then(Vec::new);
        }
        self.basis_matrix.solve(x)
    }
}

/// The center of `L'` with `L''` acting by `z ↦ [ω(α), z]`.
pub fn center<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>) -> Result<Center<T>> {
    let kernel = ext.kernel();
    let q = kernel.qdim();
    let r = kernel.rank();
    let mut ad = Matrix::zeros(q * r, q);
    for c in 0..q {
        let x = unit_vec(q, c);
        let mut col = Vec::with_capacity(q * r);
        for t in 0..r {
            col.extend(kernel.bracket(&x, &kernel.basis_element(t)));
        }
        ad.set_column(c, &col);
    }
    let basis = ad.kernel_basis();
    let basis_matrix = Matrix::from_columns(q, &basis)?;
    let coords = |x: &[T]| -> Result<Vec<T>> {
        if basis.is_empty() {
            return if is_zero_vec(x) { Ok(Vec::new()) } else { Err(Error::Verification("center not stable".into())) };
        }
        basis_matrix
            .solve(x)
            .ok_or_else(|| Error::Verification("center is not stable".into()))
    };
    let adj = adjoint_module(ext)?;
    for z in &basis {
        for t in 0..r {
            let inner = ext.total().bracket(&ext.include(&kernel.basis_element(t)), &ext.include(z));
            if !is_zero_vec(&inner) {
                return Err(Error::Verification("[L', Z] != 0".into()));
            }
        }
    }
    let m = basis.len();
    let mut a_action = Vec::new();
    for act in adj.a_actions() {
        let cols: Vec<Vec<T>> = basis.iter().map(|z| coords(&act.mul_vec(z))).collect::<Result<_>>()?;
        a_action.push(Matrix::from_columns(m, &cols)?);
    }
    let mut l_action = Vec::new();
    for op in connection_operators(ext, connection, &adj) {
        let cols: Vec<Vec<T>> = basis.iter().map(|z| coords(&op.mul_vec(z))).collect::<Result<_>>()?;
        l_action.push(Matrix::from_columns(m, &cols)?);
    }
    let module = LrModule::new(m, a_action, l_action)?;
    Ok(Center {
        basis,
        basis_matrix,
        module,
    })
}

/// The extension with curvature `Ω + ρ` for a `Z`-valued 2-cocycle `ρ`
/// (given in `Z`-coordinates), built on `L' ⊕ L''`.
pub fn act_rho<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>, rho: &AltForm<T>) -> Result<Extension<T>> {
    let z = center(ext, connection)?;
    if rho.degree() != 2 || rho.rank() != ext.quotient().rank() || rho.value_dim() != z.dim() {
        return Err(Error::Dimension("rho must be a Z-valued 2-form on L''".into()));
    }
    if !ce_differential(ext.quotient(), z.module(), rho).is_zero() {
        return Err(Error::NotCocycle("d(rho) != 0".into()));
    }
    let omega = curvature(ext, connection)?.add(&rho.map_values(&z.basis_matrix))?;
    let kernel = ext.kernel();
    let theta: Vec<Vec<Vec<T>>> = (0..ext.quotient().rank())
        .map(|i| {
            let w = ext.lift(connection, &ext.quotient().basis_element(i));
            (0..kernel.rank())
                .map(|s| ext.ad_on_kernel(&w, &kernel.basis_element(s)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    twisted_product(kernel, ext.quotient(), &theta, &omega)
}

/// A connection with zero curvature, if one exists. Exact for abelian
/// kernels; for non-abelian kernels only an already flat connection is
/// recognized.
pub fn flat_connection<T: Scalar>(ext: &Extension<T>) -> Result<Option<Connection<T>>> {
    let omega = curvature(ext, ext.connection())?;
    if omega.is_zero() {
        return Ok(Some(ext.connection().clone()));
    }
    let module = kernel_module(ext)?;
    let d1 = differential_matrix(ext.quotient(), &module, 1);
    let target = scale_vec(&-T::one(), &omega.to_vector());
    let Some(beta) = d1.solve(&target) else {
        return Ok(None);
    };
    let beta = AltForm::from_vector(1, ext.quotient().rank(), module.qdim(), &beta)?;
    let images = (0..ext.quotient().rank())
        .map(|a| {
            let mut v = ext.connection().images()[a].clone();
            add_assign(&mut v, &ext.include(&beta.value(&[a])));
            v
        })
        .collect();
    let flat = Connection::new(images);
    if !curvature(ext, &flat)?.is_zero() {
        return Err(Error::Verification("solved connection is not flat".into()));
    }
    Ok(Some(flat))
}
