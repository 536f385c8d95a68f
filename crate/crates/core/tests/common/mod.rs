#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rinehart_core::cochain::AltForm;
use rinehart_core::extension::{extension_from_cocycle, Extension};
use rinehart_core::fixtures;
use rinehart_core::{CommutativeAlgebra, LieRinehartAlgebra, LrModule, Matrix, Rational, Scalar};

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Abelian Lie algebra of rank `n` over `Q`.
pub fn ab(n: usize) -> LieRinehartAlgebra<Rational> {
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    LieRinehartAlgebra::abelian(CommutativeAlgebra::rationals(), &refs)
}

/// `Q^r` with every element of `lra` acting by zero.
pub fn trivial_free(lra: &LieRinehartAlgebra<Rational>, r: usize) -> LrModule<Rational> {
    let d = lra.base().dim();
    let theta = vec![vec![vec![vec![q(0); d]; r]; r]; lra.rank()];
    LrModule::free(lra, r, &theta).unwrap()
}

/// Rank-4 abelian quotient with a rank-2 central kernel.
pub fn rank4_two_central() -> Extension<Rational> {
    let base = ab(4);
    let m = trivial_free(&base, 2);
    let omega = AltForm::from_values(
        2,
        4,
        2,
        [
            (vec![0, 1], vec![q(1), q(0)]),
            (vec![2, 3], vec![q(0), q(1)]),
            (vec![0, 2], vec![q(1), q(1)]),
        ],
    )
    .unwrap();
    extension_from_cocycle(&base, &m, &omega).unwrap()
}

/// `sl₂ × Q^n`.
pub fn split_sl2_over(n: usize) -> Extension<Rational> {
    Extension::direct_product(fixtures::sl2(), ab(n)).unwrap()
}

/// The adjoint representation of `sl₂` on itself.
pub fn sl2_adjoint() -> (LieRinehartAlgebra<Rational>, LrModule<Rational>) {
    let sl2 = fixtures::sl2::<Rational>();
    let ads: Vec<Matrix<Rational>> = (0..3)
        .map(|i| {
            let cols: Vec<Vec<Rational>> = (0..3).map(|j| sl2.bracket_basis(i, j).to_vec()).collect();
            Matrix::from_columns(3, &cols).unwrap()
        })
        .collect();
    let m = LrModule::new(3, vec![Matrix::identity(3)], ads).unwrap();
    (sl2, m)
}

/// Every catalog extension plus the larger test fixtures.
pub fn all_extensions() -> Vec<(&'static str, Extension<Rational>)> {
    vec![
        ("FIX-HEIS", fixtures::heis(q(1))),
        ("FIX-HEIS(5)", fixtures::heis(q(5))),
        ("FIX-HEIS(0)", fixtures::heis(q(0))),
        ("FIX-SPLIT-SL2", fixtures::split_sl2()),
        ("FIX-TP-HEIS", fixtures::tp_heis()),
        ("rank4-two-central", rank4_two_central()),
        ("sl2-over-Q3", split_sl2_over(3)),
        ("trivial-TP2", Extension::trivial(fixtures::tp2())),
    ]
}

pub type Named<T> = (&'static str, LieRinehartAlgebra<Rational>, T);

/// Algebras with a selection of valid modules over each.
pub fn algebras_with_modules() -> Vec<Named<Vec<LrModule<Rational>>>> {
    let ab2 = fixtures::ab2::<Rational>();
    let (sl2, ad) = sl2_adjoint();
    let tp2 = fixtures::tp2::<Rational>();
    let t = vec![q(0), q(1)];
    let one = vec![q(1), q(0)];
    let free = LrModule::free(&tp2, 2, &[vec![vec![t.clone(), one], vec![vec![q(0), q(0)], t]]]).unwrap();
    let heis = fixtures::heis(q(1));
    let tph = fixtures::tp_heis::<Rational>();
    vec![
        ("FIX-AB2", ab2.clone(), vec![LrModule::trivial(&ab2).unwrap(), trivial_free(&ab2, 2)]),
        ("FIX-SL2", sl2.clone(), vec![LrModule::trivial(&sl2).unwrap(), ad]),
        ("FIX-TP2", tp2.clone(), vec![LrModule::base(&tp2), free]),
        ("heis3", heis.total().clone(), vec![LrModule::trivial(heis.total()).unwrap()]),
        ("tp-heis-total", tph.total().clone(), vec![LrModule::base(tph.total())]),
    ]
}

/// Relabels the basis of `lra` so that new basis element `i` is old
/// element `perm[i]`.
pub fn permute_basis(lra: &LieRinehartAlgebra<Rational>, perm: &[usize]) -> LieRinehartAlgebra<Rational> {
    let n = lra.rank();
    let d = lra.base().dim();
    let inv: Vec<usize> = (0..n).map(|old| perm.iter().position(|&p| p == old).unwrap()).collect();
    let relabel = |x: &[Rational]| -> Vec<Rational> {
        let mut v = vec![q(0); n * d];
        for old in 0..n {
            v[inv[old] * d..(inv[old] + 1) * d].clone_from_slice(&x[old * d..(old + 1) * d]);
        }
        v
    };
    let bracket = (0..n)
        .map(|i| (0..n).map(|j| relabel(lra.bracket_basis(perm[i], perm[j]))).collect())
        .collect();
    let anchor = perm.iter().map(|&p| lra.anchors()[p].clone()).collect();
    let labels = perm.iter().map(|&p| lra.labels()[p].clone()).collect();
    LieRinehartAlgebra::new(lra.base().clone(), labels, bracket, anchor).unwrap()
}

pub fn permute_module(module: &LrModule<Rational>, perm: &[usize]) -> LrModule<Rational> {
    let l = perm.iter().map(|&p| module.l_actions()[p].clone()).collect();
    LrModule::new(module.qdim(), module.a_actions().to_vec(), l).unwrap()
}
