//! The classifying map `Ω♯` of an extension and the Chern-Weil map from
//! invariant functionals on the symmetric coalgebra to
//! `H^{2*}(Alt_A(L'', A))`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::{ce_differential, cohomology, combinations, sort_with_parity, wedge, AltForm, Pairing};
use crate::coalgebra::{pair, sym_module, InvariantPolynomial, SymCoalgebra};
use crate::error::{Error, Result};
use crate::extension::{connection_operators, covariant_derivative, curvature, Connection, Extension};
use crate::lierinehart::LrModule;
use crate::linalg::{Matrix, Quotient};
use crate::scalar::{add_assign, axpy, is_zero_vec, unit_vec, Scalar};

/// Default weight bound: forms of degree `2k > rank L''` vanish.
pub fn default_max_weight<T: Scalar>(ext: &Extension<T>) -> usize {
    ext.quotient().rank() / 2
}

/// Partitions of `0..2k` into pairs `(a, b)` with `a < b`, pairs sorted by
/// first element.
pub fn pair_partitions(size: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(remaining: &[usize], current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = remaining.split_first() else {
            out.push(current.clone());
            return;
        };
        for (i, &partner) in rest.iter().enumerate() {
            let others: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            current.push((first, partner));
            rec(&others, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if size.is_multiple_of(2) {
        rec(&(0..size).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    }
    out
}

/// Weight components `F_0, …, F_w` of `Ω♯`; `F_k` is a `2k`-form on `L''`
/// with values in the weight-`k` component.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyingMap<T> {
    components: Vec<AltForm<T>>,
}

impl<T: Scalar> ClassifyingMap<T> {
    pub fn new(components: Vec<AltForm<T>>) -> Self {
        ClassifyingMap { components }
    }

    pub fn max_weight(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn component(&self, k: usize) -> &AltForm<T> {
        &self.components[k]
    }

    pub fn components(&self) -> &[AltForm<T>] {
        &self.components
    }
}

/// `Ω♯` through weight `w_max`: `F_0` is the unit, and `F_k` on a
/// `2k`-tuple is the signed sum over pair partitions of the product of
/// curvature values in the divided-power algebra (the `k`-th cup power of
/// `Ω♭` in invariant tensors).
pub fn classifying_map<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>, w_max: usize) -> Result<ClassifyingMap<T>> {
    let omega = curvature(ext, connection)?;
    let coalg = SymCoalgebra::for_extension(ext);
    Ok(ClassifyingMap::new(
        (0..=w_max).map(|k| cup_power(&coalg, &omega, k)).collect(),
    ))
}

/// The weight-`k` component built from a curvature form.
pub fn cup_power<T: Scalar>(coalg: &SymCoalgebra<T>, omega: &AltForm<T>, k: usize) -> AltForm<T> {
    let n = omega.rank();
    let mut out = AltForm::zero(2 * k, n, coalg.qdim(k));
    if k == 0 {
        out.set(&[], coalg.unit());
        return out;
    }
    let partitions = pair_partitions(2 * k);
    for tuple in combinations(n, 2 * k) {
        let mut acc = vec![T::zero(); coalg.qdim(k)];
        for partition in &partitions {
            let order: Vec<usize> = partition.iter().flat_map(|&(a, b)| [a, b]).collect();
            let (_, parity) = sort_with_parity(&order).expect("partition of distinct positions");
            let mut product = coalg.unit();
            for (w, &(a, b)) in partition.iter().enumerate() {
                let value = omega.value(&[tuple[a], tuple[b]]);
                product = coalg.multiply(w, &product, 1, &value);
                if is_zero_vec(&product) {
                    break;
                }
            }
            axpy(&mut acc, &T::sign(parity), &product);
        }
        out.set(&tuple, acc);
    }
    out
}

/// Checks `Δ_{u,v} F_k(I) = Σ_S ± F_u(I_S) ⊗ F_v(I_S^c)` over all
/// `(2u, 2v)`-shuffles, for every `k ≤ w_max`, and that `F_0` is the unit.
pub fn coalgebra_morphism_check<T: Scalar>(coalg: &SymCoalgebra<T>, map: &ClassifyingMap<T>, w_max: usize) -> Result<bool> {
    if map.max_weight() < w_max {
        return Err(Error::Dimension("map is not given through the requested weight".into()));
    }
    let f0 = map.component(0);
    if f0.degree() != 0 || f0.value(&[]) != coalg.unit() {
        return Ok(false);
    }
    for k in 1..=w_max {
        let fk = map.component(k);
        if fk.degree() != 2 * k {
            return Ok(false);
        }
        let n = fk.rank();
        for tuple in combinations(n, 2 * k) {
            let value = fk.value(&tuple);
            for u in 0..=k {
                let v = k - u;
                let lhs = coalg.diagonal(k, u, &value)?;
                let mut rhs = vec![T::zero(); lhs.len()];
                for subset in combinations(2 * k, 2 * u) {
                    let left: Vec<usize> = subset.iter().map(|&s| tuple[s]).collect();
                    let right: Vec<usize> = (0..2 * k).filter(|p| !subset.contains(p)).map(|p| tuple[p]).collect();
                    let term = coalg.tensor(u, &map.component(u).value(&left), v, &map.component(v).value(&right));
                    axpy(&mut rhs, &T::sign(crate::cochain::shuffle_parity(&subset)), &term);
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `D^ω F_k = 0` for every component, with `L` acting on each weight
/// component by coderivations.
pub fn verify_lemma_3_11<T: Scalar>(ext: &Extension<T>, connection: &Connection<T>, map: &ClassifyingMap<T>) -> Result<bool> {
    for (k, fk) in map.components().iter().enumerate() {
        let module = sym_module(ext, k)?;
        if !covariant_derivative(ext, connection, &module, fk).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `φ ∘ F_k`, a `2k`-form on `L''` with values in `A`. Refuses
/// non-invariant `φ`.
pub fn chern_weil_form<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    phi: &InvariantPolynomial<T>,
) -> Result<AltForm<T>> {
    if !phi.is_invariant(ext)? {
        return Err(Error::NotInvariant);
    }
    let coalg = SymCoalgebra::for_extension(ext);
    let k = phi.weight();
    let fk = cup_power(&coalg, &curvature(ext, connection)?, k);
    Ok(pair_with_form(ext, phi, &fk))
}

fn pair_with_form<T: Scalar>(ext: &Extension<T>, phi: &InvariantPolynomial<T>, f: &AltForm<T>) -> AltForm<T> {
    let alg = ext.quotient().base();
    let mut out = AltForm::zero(f.degree(), f.rank(), alg.dim());
    for (tuple, value) in f.entries() {
        out.set(tuple, pair(alg, phi.coefficients(), value));
    }
    out
}

/// `φ ∘ Ω` for a weight-1 `φ`, computed straight from the curvature.
pub fn weight_one_form<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    phi: &InvariantPolynomial<T>,
) -> Result<AltForm<T>> {
    if phi.weight() != 1 {
        return Err(Error::Dimension("weight-one functional expected".into()));
    }
    let alg = ext.quotient().base();
    let d = alg.dim();
    let omega = curvature(ext, connection)?;
    let mut out = AltForm::zero(2, omega.rank(), d);
    for (tuple, value) in omega.entries() {
        let mut acc = vec![T::zero(); d];
        for s in 0..ext.kernel().rank() {
            add_assign(
                &mut acc,
                &alg.mul(&phi.coefficients()[s * d..(s + 1) * d], &value[s * d..(s + 1) * d]),
            );
        }
        out.set(tuple, acc);
    }
    Ok(out)
}

/// A Chern-Weil class: representative and its coordinates against the
/// canonical basis of `H^{2k}(Alt_A(L'', A))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicClass<T> {
    pub weight: usize,
    pub representative: AltForm<T>,
    pub coordinates: Vec<T>,
}

impl<T: Scalar> CharacteristicClass<T> {
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coordinates)
    }
}

/// The class of `φ`, computed with the stored connection and checked
/// against a connection sampled from `seed`.
pub fn chern_weil_class<T: Scalar>(ext: &Extension<T>, phi: &InvariantPolynomial<T>, seed: u64) -> Result<CharacteristicClass<T>> {
    let base = LrModule::base(ext.quotient());
    let h = cohomology(ext.quotient(), &base, 2 * phi.weight())?;
    let representative = chern_weil_form(ext, ext.connection(), phi)?;
    let coordinates = h.class_of(&representative).map_err(|e| match e {
        Error::NotCocycle(m) => Error::Verification(format!("Chern-Weil form is not closed: {m}")),
        other => other,
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fresh = ext.random_connection(&mut rng);
    let other = h.class_of(&chern_weil_form(ext, &fresh, phi)?)?;
    if other != coordinates {
        return Err(Error::Verification("class depends on the connection".into()));
    }
    Ok(CharacteristicClass {
        weight: phi.weight(),
        representative,
        coordinates,
    })
}

/// `cw(φ₁ φ₂) = cw(φ₁) ∧ cw(φ₂)`.
pub fn multiplicativity_check<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    phi1: &InvariantPolynomial<T>,
    phi2: &InvariantPolynomial<T>,
) -> Result<bool> {
    let coalg = SymCoalgebra::for_extension(ext);
    let product = phi1.product(phi2, &coalg);
    let lhs = chern_weil_form(ext, connection, &product)?;
    let mu = Pairing::algebra(ext.quotient());
    let rhs = wedge(
        &chern_weil_form(ext, connection, phi1)?,
        &chern_weil_form(ext, connection, phi2)?,
        &mu,
    )?;
    Ok(lhs == rhs)
}

/// One weight of the global invariant: `F_k` pushed to the coinvariants of
/// the kernel action.
#[derive(Clone, Debug)]
pub struct GlobalInvariantComponent<T> {
    pub weight: usize,
    /// Representatives (weight-`k` coordinates) of the canonical basis of
    /// the coinvariants.
    pub representatives: Vec<Vec<T>>,
    pub module: LrModule<T>,
    pub form: AltForm<T>,
    pub cohomology_dim: usize,
    pub coordinates: Vec<T>,
}

impl<T: Scalar> GlobalInvariantComponent<T> {
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coordinates)
    }
}

/// The class of `Ω♯` with the kernel action divided out, weight by weight.
pub fn global_invariant<T: Scalar>(
    ext: &Extension<T>,
    connection: &Connection<T>,
    w_max: usize,
) -> Result<Vec<GlobalInvariantComponent<T>>> {
    let map = classifying_map(ext, connection, w_max)?;
    let kernel = ext.kernel();
    let alg = kernel.base();
    let mut out = Vec::new();
    for k in 0..=w_max {
        let sym = sym_module(ext, k)?;
        let n = sym.qdim();
        let mut image = Vec::new();
        for s in 0..kernel.rank() {
            for a in 0..alg.dim() {
                let x = ext.include(&kernel.scaled_basis_element(&alg.basis_element(a), s));
                image.extend(sym.act_l(ext.total(), &x).columns());
            }
        }
        let everything: Vec<Vec<T>> = (0..n).map(|i| unit_vec(n, i)).collect();
        let quotient = Quotient::new(n, &image, &everything)?;
        let reps = quotient.representatives().to_vec();
        let m = reps.len();
        let coords = |v: &[T]| -> Result<Vec<T>> {
            quotient
                .coordinates(v)
                .ok_or_else(|| Error::Verification("coinvariant coordinates".into()))
        };
        let push = |op: &Matrix<T>| -> Result<Matrix<T>> {
            let cols = reps.iter().map(|r| coords(&op.mul_vec(r))).collect::<Result<Vec<_>>>()?;
            Matrix::from_columns(m, &cols)
        };
        let a_action = sym.a_actions().iter().map(push).collect::<Result<Vec<_>>>()?;
        let l_action = connection_operators(ext, connection, &sym)
            .iter()
            .map(push)
            .collect::<Result<Vec<_>>>()?;
        let module = LrModule::new(m, a_action, l_action)?;
        if !module.validate(ext.quotient()).is_valid() {
            return Err(Error::Verification(format!("coinvariant module in weight {k} is not a module")));
        }
        let fk = map.component(k);
        let mut form = AltForm::zero(fk.degree(), fk.rank(), m);
        for (tuple, value) in fk.entries() {
            form.set(tuple, coords(value)?);
        }
        if !ce_differential(ext.quotient(), &module, &form).is_zero() {
            return Err(Error::Verification(format!("global invariant in weight {k} is not closed")));
        }
        let h = cohomology(ext.quotient(), &module, 2 * k)?;
        let coordinates = h.class_of(&form)?;
        out.push(GlobalInvariantComponent {
            weight: k,
            representatives: reps,
            module,
            form,
            cohomology_dim: h.dim(),
            coordinates,
        });
    }
    Ok(out)
}
