//! The built-in catalog of algebras and extensions.

use crate::algebra::{euler_derivation, CommutativeAlgebra, Derivation};
use crate::cochain::AltForm;
use crate::error::{Error, Result};
use crate::extension::{extension_from_cocycle, Connection, Extension};
use crate::lierinehart::{LieRinehartAlgebra, LrModule};
use crate::scalar::{parse_rational, Scalar};
use crate::Rational;

/// Catalog names accepted by [`builtin_fixture`]. `FIX-HEIS(c)` takes any
/// rational `c`.
pub const FIXTURE_NAMES: &[&str] = &[
    "FIX-AB2",
    "FIX-SL2",
    "FIX-TP2",
    "FIX-HEIS",
    "FIX-HEIS(c)",
    "FIX-SPLIT-SL2",
    "FIX-TP-HEIS",
];

/// `Q²` with basis `{x, y}`, abelian, zero anchor.
pub fn ab2<T: Scalar>() -> LieRinehartAlgebra<T> {
    LieRinehartAlgebra::abelian(CommutativeAlgebra::rationals(), &["x", "y"])
}

/// `sl₂` with basis `{e, f, h}`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2<T: Scalar>() -> LieRinehartAlgebra<T> {
    let q = |n| T::from_int(n);
    let v = |a, b, c| vec![q(a), q(b), q(c)];
    let constants = vec![
        vec![v(0, 0, 0), v(0, 0, 1), v(-2, 0, 0)],
        vec![v(0, 0, -1), v(0, 0, 0), v(0, 2, 0)],
        vec![v(2, 0, 0), v(0, -2, 0), v(0, 0, 0)],
    ];
    LieRinehartAlgebra::lie_algebra(&["e", "f", "h"], constants).expect("sl2 table is well formed")
}

/// `Q[t]/(t²)` with the free rank-one algebra on `X`, anchor `t∂t`.
pub fn tp2<T: Scalar>() -> LieRinehartAlgebra<T> {
    let base = CommutativeAlgebra::dual_numbers();
    LieRinehartAlgebra::new(
        base,
        vec!["X".into()],
        vec![vec![vec![T::zero(), T::zero()]]],
        vec![euler_derivation()],
    )
    .expect("tp2 table is well formed")
}

/// The Heisenberg extension `0 → Qz → heis₃ → Q{x,y} → 0` with
/// `[x, y] = c z`, total basis `(z, x, y)` and connection `x ↦ x, y ↦ y`.
pub fn heis<T: Scalar>(c: T) -> Extension<T> {
    let base = CommutativeAlgebra::rationals();
    let kernel = LieRinehartAlgebra::abelian(base.clone(), &["z"]);
    let quotient = ab2();
    let z = || T::zero();
    let mut bracket = vec![vec![vec![z(), z(), z()]; 3]; 3];
    bracket[1][2] = vec![c.clone(), z(), z()];
    bracket[2][1] = vec![-c, z(), z()];
    let total = LieRinehartAlgebra::new(
        base,
        vec!["z".into(), "x".into(), "y".into()],
        bracket,
        vec![Derivation::zero(1); 3],
    )
    .expect("heis table is well formed");
    let e = |i| total.basis_element(i);
    let incl = vec![e(0)];
    let proj = vec![vec![z(), z()], vec![T::one(), z()], vec![z(), T::one()]];
    let connection = Connection::new(vec![e(1), e(2)]);
    Extension::new(kernel, total.clone(), quotient, incl, proj, connection).expect("heis shapes agree")
}

/// `0 → sl₂ → sl₂ × Q → Q → 0` with the canonical flat connection.
pub fn split_sl2<T: Scalar>() -> Extension<T> {
    let line = LieRinehartAlgebra::abelian(CommutativeAlgebra::rationals(), &["u"]);
    Extension::direct_product(sl2(), line).expect("direct product is valid")
}

/// Over `A = Q[t]/(t²)`: `L'' = A{X, Y}` with anchor `X ↦ t∂t`, `Y ↦ 0`,
/// abelian; kernel `A` with `L''` acting through the anchor; curvature
/// `Ω(X, Y) = 1`.
pub fn tp_heis<T: Scalar>() -> Extension<T> {
    let base = CommutativeAlgebra::<T>::dual_numbers();
    let quotient = LieRinehartAlgebra::new(
        base.clone(),
        vec!["X".into(), "Y".into()],
        vec![vec![vec![T::zero(); 4]; 2]; 2],
        vec![euler_derivation(), Derivation::zero(2)],
    )
    .expect("quotient table is well formed");
    let module = LrModule::base(&quotient);
    let omega = AltForm::from_values(2, 2, 2, [(vec![0, 1], base.unit().to_vec())]).expect("shape");
    extension_from_cocycle(&quotient, &module, &omega).expect("top-degree form is a cocycle")
}

/// A fixture from the catalog.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Fixture {
    Algebra(LieRinehartAlgebra<Rational>),
    Extension(Extension<Rational>),
}

impl Fixture {
    /// The Lie-Rinehart algebra itself, or the total algebra of an
    /// extension.
    pub fn algebra(&self) -> &LieRinehartAlgebra<Rational> {
        match self {
            Fixture::Algebra(l) => l,
            Fixture::Extension(e) => e.total(),
        }
    }

    pub fn extension(&self) -> Option<&Extension<Rational>> {
        match self {
            Fixture::Extension(e) => Some(e),
            Fixture::Algebra(_) => None,
        }
    }
}

/// Looks up a catalog fixture by name and validates it.
pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let fixture = match name.trim() {
        "FIX-AB2" => Fixture::Algebra(ab2()),
        "FIX-SL2" => Fixture::Algebra(sl2()),
        "FIX-TP2" => Fixture::Algebra(tp2()),
        "FIX-HEIS" => Fixture::Extension(heis(Rational::from_int(1))),
        "FIX-SPLIT-SL2" => Fixture::Extension(split_sl2()),
        "FIX-TP-HEIS" => Fixture::Extension(tp_heis()),
        other => {
            let arg = other
                .strip_prefix("FIX-HEIS(")
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(|| Error::UnknownFixture(other.to_string()))?;
            Fixture::Extension(heis(parse_rational(arg)?))
        }
    };
    let report = match &fixture {
        Fixture::Algebra(l) => l.validate(),
        Fixture::Extension(e) => e.validate(),
    };
    if !report.is_valid() {
        return Err(Error::Verification(format!("fixture {name} failed validation")));
    }
    Ok(fixture)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_lookup() {
        for name in ["FIX-AB2", "FIX-SL2", "FIX-TP2", "FIX-HEIS", "FIX-HEIS(5)", "FIX-HEIS(-1/2)", "FIX-SPLIT-SL2", "FIX-TP-HEIS"] {
            builtin_fixture(name).unwrap();
        }
        assert!(matches!(builtin_fixture("FIX-NOPE"), Err(Error::UnknownFixture(_))));
        assert!(matches!(builtin_fixture("FIX-HEIS(1/0)"), Err(Error::Parse(_))));
    }

    #[test]
    fn catalog_shapes() {
        let ab2 = builtin_fixture("FIX-AB2").unwrap();
        assert!(ab2.algebra().is_abelian());
        assert_eq!(ab2.algebra().rank(), 2);
        let tp2 = builtin_fixture("FIX-TP2").unwrap();
        assert!(!tp2.algebra().has_zero_anchor());
    }
}
