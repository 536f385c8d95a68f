#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use common::{all_extensions, q};
use num_rational::Ratio;
use proptest::prelude::*;
use rinehart_core::coalgebra::{
    depolarize, invariants, multiset_factorial, multisets, pair, polarization_matrix, polarize, sym_module,
    InvariantPolynomial, SymCoalgebra,
};
use rinehart_core::{fixtures, CommutativeAlgebra, Rational};

type Terms = BTreeMap<Vec<Vec<usize>>, Vec<Rational>>;

fn algebras() -> Vec<CommutativeAlgebra<Rational>> {
    let tp2 = fixtures::tp2::<Rational>();
    vec![CommutativeAlgebra::rationals(), tp2.base().clone()]
}

fn add_term(out: &mut Terms, key: Vec<Vec<usize>>, a: &[Rational]) {
    let entry = out.entry(key).or_insert_with(|| vec![q(0); a.len()]);
    for (e, x) in entry.iter_mut().zip(a) {
        *e += x;
    }
}

fn prune(mut t: Terms) -> Terms {
    t.retain(|_, v| v.iter().any(|x| *x != q(0)));
    t
}

/// Decodes a vector of weight `k` into monomial terms.
fn decode(c: &SymCoalgebra<Rational>, k: usize, x: &[Rational]) -> Terms {
    let d = c.base().dim();
    let mut out = Terms::new();
    for (i, m) in c.basis(k).monomials().iter().enumerate() {
        add_term(&mut out, vec![m.clone()], &x[i * d..(i + 1) * d]);
    }
    prune(out)
}

/// Decodes the output of `diagonal(u+v, u, _)` into pairs of monomials.
fn decode2(c: &SymCoalgebra<Rational>, u: usize, v: usize, x: &[Rational]) -> Terms {
    let d = c.base().dim();
    let (bu, bv) = (c.basis(u), c.basis(v));
    let mut out = Terms::new();
    for (i, m1) in bu.monomials().iter().enumerate() {
        for (j, m2) in bv.monomials().iter().enumerate() {
            let p = i * bv.len() + j;
            add_term(&mut out, vec![m1.clone(), m2.clone()], &x[p * d..(p + 1) * d]);
        }
    }
    prune(out)
}

fn random_element(c: &SymCoalgebra<Rational>, k: usize, coeffs: &[i64]) -> Vec<Rational> {
    (0..c.qdim(k)).map(|i| q(coeffs[i % coeffs.len()])).collect()
}

/// `(Δ_{u,v} ⊗ id) Δ_{u+v,w}` and `(id ⊗ Δ_{v,w}) Δ_{u,v+w}`.
fn coassociativity_sides(c: &SymCoalgebra<Rational>, u: usize, v: usize, w: usize, x: &[Rational]) -> (Terms, Terms) {
    let k = u + v + w;
    let mut left = Terms::new();
    for (key, a) in decode2(c, u + v, w, &c.diagonal(k, u + v, x).unwrap()) {
        let inner = c.diagonal(u + v, u, &c.monomial(&key[0], &a)).unwrap();
        for (k2, b) in decode2(c, u, v, &inner) {
            add_term(&mut left, vec![k2[0].clone(), k2[1].clone(), key[1].clone()], &b);
        }
    }
    let mut right = Terms::new();
    for (key, a) in decode2(c, u, v + w, &c.diagonal(k, u, x).unwrap()) {
        let inner = c.diagonal(v + w, v, &c.monomial(&key[1], &a)).unwrap();
        for (k2, b) in decode2(c, v, w, &inner) {
            add_term(&mut right, vec![key[0].clone(), k2[0].clone(), k2[1].clone()], &b);
        }
    }
    (prune(left), prune(right))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coassociative_and_counital(coeffs in prop::collection::vec(-3i64..=3, 1..12), letters in 1usize..=3) {
        for alg in algebras() {
            let c = SymCoalgebra::new(alg, letters);
            for k in 0..=3 {
                let x = random_element(&c, k, &coeffs);
                prop_assert_eq!(c.diagonal(k, k, &x).unwrap(), c.tensor(k, &x, 0, &c.unit()));
                prop_assert_eq!(c.diagonal(k, 0, &x).unwrap(), c.tensor(0, &c.unit(), k, &x));
                for u in 0..=k {
                    for v in 0..=k - u {
                        let (l, r) = coassociativity_sides(&c, u, v, k - u - v, &x);
                        prop_assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn polarization_is_bijective(coeffs in prop::collection::vec(-5i64..=5, 1..12), letters in 1usize..=3) {
        for alg in algebras() {
            let c = SymCoalgebra::new(alg, letters);
            for k in 0..=4 {
                let p = random_element(&c, k, &coeffs);
                prop_assert_eq!(depolarize(&c, k, &polarize(&c, k, &p)), p.clone());
                prop_assert_eq!(polarization_matrix(&c, k).rank(), c.qdim(k));
            }
        }
    }
}

#[test]
fn polarization_evaluates_on_symmetric_products() {
    // The product of degree-one generators ξ_{l1}⋯ξ_{lk} in the divided-power
    // algebra is m! γ_m; a polynomial evaluates there to its polarization.
    let c = SymCoalgebra::new(CommutativeAlgebra::<Rational>::rationals(), 3);
    for k in 1..=4 {
        let p: Vec<Rational> = (0..c.qdim(k)).map(|i| q(i as i64 * 7 % 5 - 2)).collect();
        let pol = polarize(&c, k, &p);
        for (i, m) in c.basis(k).monomials().iter().enumerate() {
            let mut prod = c.unit();
            for (w, &l) in m.iter().enumerate() {
                prod = c.multiply(w, &prod, 1, &c.monomial(&[l], &[q(1)]));
            }
            assert_eq!(pair(c.base(), &p, &prod), vec![pol[i].clone()], "{m:?}");
            assert_eq!(pol[i], multiset_factorial::<Rational>(m) * &p[i]);
        }
    }
}

// Tensor-word model: over Q, γ_m is the sum of the distinct words whose
// letters form the multiset m. Coproduct = deconcatenation, product =
// shuffle, derivations act letter by letter.

type Words = BTreeMap<Vec<usize>, Ratio<i64>>;

fn orbit_sum(m: &[usize]) -> Words {
    fn go(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Words) {
        if rest.is_empty() {
            out.insert(prefix.clone(), Ratio::from_integer(1));
            return;
        }
        let mut seen = Vec::new();
        for i in 0..rest.len() {
            if seen.contains(&rest[i]) {
                continue;
            }
            seen.push(rest[i]);
            let l = rest.remove(i);
            prefix.push(l);
            go(rest, prefix, out);
            prefix.pop();
            rest.insert(i, l);
        }
    }
    let mut out = Words::new();
    go(&mut m.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn to_ratio(x: &Rational) -> Ratio<i64> {
    Ratio::new(x.numer().try_into().unwrap(), x.denom().try_into().unwrap())
}

fn embed(c: &SymCoalgebra<Rational>, k: usize, x: &[Rational]) -> Words {
    let mut out = Words::new();
    for (i, m) in c.basis(k).monomials().iter().enumerate() {
        for (w, _) in orbit_sum(m) {
            *out.entry(w).or_default() += to_ratio(&x[i]);
        }
    }
    out.retain(|_, v| *v != Ratio::from_integer(0));
    out
}

fn shuffles(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    if a.is_empty() || b.is_empty() {
        return vec![[a, b].concat()];
    }
    let mut out = Vec::new();
    for mut s in shuffles(&a[1..], b) {
        s.insert(0, a[0]);
        out.push(s);
    }
    for mut s in shuffles(a, &b[1..]) {
        s.insert(0, b[0]);
        out.push(s);
    }
    out
}

#[test]
fn diagonal_matches_deconcatenation() {
    let c = SymCoalgebra::new(CommutativeAlgebra::<Rational>::rationals(), 3);
    for k in 0..=4 {
        for m in multisets(3, k) {
            for u in 0..=k {
                let mut expected: BTreeMap<(Vec<usize>, Vec<usize>), Ratio<i64>> = BTreeMap::new();
                for (w, coef) in orbit_sum(&m) {
                    *expected.entry((w[..u].to_vec(), w[u..].to_vec())).or_default() += coef;
                }
                let mut got: BTreeMap<(Vec<usize>, Vec<usize>), Ratio<i64>> = BTreeMap::new();
                for (key, a) in decode2(&c, u, k - u, &c.diagonal(k, u, &c.monomial(&m, &[q(1)])).unwrap()) {
                    for (w1, c1) in orbit_sum(&key[0]) {
                        for (w2, c2) in orbit_sum(&key[1]) {
                            *got.entry((w1.clone(), w2)).or_default() += c1 * c2 * to_ratio(&a[0]);
                        }
                    }
                }
                assert_eq!(got, expected, "{m:?} split {u}");
            }
        }
    }
}

#[test]
fn product_matches_shuffle() {
    let c = SymCoalgebra::new(CommutativeAlgebra::<Rational>::rationals(), 2);
    for u in 0..=3 {
        for v in 0..=3 - u {
            for m1 in multisets(2, u) {
                for m2 in multisets(2, v) {
                    let mut expected = Words::new();
                    for (w1, _) in orbit_sum(&m1) {
                        for (w2, _) in orbit_sum(&m2) {
                            for s in shuffles(&w1, &w2) {
                                *expected.entry(s).or_default() += Ratio::from_integer(1);
                            }
                        }
                    }
                    let prod = c.multiply(u, &c.monomial(&m1, &[q(1)]), v, &c.monomial(&m2, &[q(1)]));
                    assert_eq!(embed(&c, u + v, &prod), expected, "{m1:?} * {m2:?}");
                }
            }
        }
    }
}

#[test]
fn derivation_extension_matches_letterwise_action() {
    let c = SymCoalgebra::new(CommutativeAlgebra::<Rational>::rationals(), 3);
    let lin = [[1i64, 0, 2], [0, -1, 1], [3, 0, 0]];
    let images: Vec<Vec<Rational>> = lin.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    for k in 0..=4 {
        let theta = c.extend_derivation(k, &images);
        let basis = c.basis(k);
        for (mi, m) in basis.monomials().iter().enumerate() {
            let mut expected = Words::new();
            for (w, coef) in orbit_sum(m) {
                for p in 0..w.len() {
                    for l in 0..3 {
                        let mut w2 = w.clone();
                        w2[p] = l;
                        *expected.entry(w2).or_default() += coef * Ratio::from_integer(lin[w[p]][l]);
                    }
                }
            }
            expected.retain(|_, v| *v != Ratio::from_integer(0));
            let image: Vec<Rational> = (0..basis.len()).map(|t| theta[mi][t][0].clone()).collect();
            assert_eq!(embed(&c, k, &image), expected, "{m:?}");
        }
    }
}

#[test]
fn actions_are_coderivations() {
    for (name, ext) in all_extensions() {
        let c = SymCoalgebra::for_extension(&ext);
        let modules: Vec<_> = (0..=3).map(|k| sym_module(&ext, k).unwrap()).collect();
        for (k, module) in modules.iter().enumerate() {
            assert!(module.validate(ext.total()).is_valid(), "{name} weight {k}");
        }
        for alpha in 0..ext.total().rank() {
            for k in 0..=3 {
                let x: Vec<Rational> = (0..c.qdim(k)).map(|i| q((i as i64 * 5 + alpha as i64) % 7 - 3)).collect();
                let ax = modules[k].l_actions()[alpha].mul_vec(&x);
                for u in 0..=k {
                    let lhs = decode2(&c, u, k - u, &c.diagonal(k, u, &ax).unwrap());
                    let mut rhs = Terms::new();
                    for (key, a) in decode2(&c, u, k - u, &c.diagonal(k, u, &x).unwrap()) {
                        let left = modules[u].l_actions()[alpha].mul_vec(&c.monomial(&key[0], &a));
                        for (k1, b) in decode(&c, u, &left) {
                            add_term(&mut rhs, vec![k1[0].clone(), key[1].clone()], &b);
                        }
                        let right = modules[k - u].l_actions()[alpha].mul_vec(&c.monomial(&key[1], c.base().unit()));
                        for (k2, b) in decode(&c, k - u, &right) {
                            add_term(&mut rhs, vec![key[0].clone(), k2[0].clone()], &c.base().mul(&a, &b));
                        }
                    }
                    assert_eq!(lhs, prune(rhs), "{name} alpha {alpha} weight {k} split {u}");
                }
            }
        }
    }
}

#[test]
fn invariant_products_stay_invariant() {
    for (name, ext) in all_extensions() {
        let c = SymCoalgebra::for_extension(&ext);
        let inv: Vec<Vec<InvariantPolynomial<Rational>>> = (0..=4).map(|k| invariants(&ext, k).unwrap()).collect();
        // Every catalog base has only the constants as anchor-invariants.
        assert_eq!(inv[0].len(), 1, "{name}");
        assert!(InvariantPolynomial::counit(c.base()).is_invariant(&ext).unwrap(), "{name}");
        for phi in inv.iter().flatten() {
            assert!(phi.is_invariant(&ext).unwrap(), "{name}");
        }
        for u in 1..=2 {
            for v in u..=4 - u {
                for a in &inv[u] {
                    for b in &inv[v] {
                        let ab = a.product(b, &c);
                        assert!(ab.is_invariant(&ext).unwrap(), "{name} {u}+{v}");
                        assert_eq!(ab, b.product(a, &c), "{name} commutative");
                    }
                }
            }
        }
    }
}

// Independent oracle: sl₂-invariant polynomials in ξ_e, ξ_f, ξ_h under the
// coadjoint action, by elimination over Ratio<i64>.
fn sl2_invariant_count(k: usize) -> usize {
    let c = |x: usize, i: usize| -> [i64; 3] {
        // [e,f] = h, [h,e] = 2e, [h,f] = -2f
        match (x, i) {
            (0, 1) => [0, 0, 1],
            (1, 0) => [0, 0, -1],
            (2, 0) => [2, 0, 0],
            (0, 2) => [-2, 0, 0],
            (2, 1) => [0, -2, 0],
            (1, 2) => [0, 2, 0],
            _ => [0, 0, 0],
        }
    };
    let monos: Vec<[usize; 3]> = (0..=k)
        .flat_map(|a| (0..=k - a).map(move |b| [a, b, k - a - b]))
        .collect();
    let index = |e: [usize; 3]| monos.iter().position(|m| *m == e).unwrap();
    let mut rows: Vec<Vec<Ratio<i64>>> = Vec::new();
    for x in 0..3 {
        let mut mat = vec![vec![Ratio::from_integer(0i64); monos.len()]; monos.len()];
        for (col, m) in monos.iter().enumerate() {
            for j in 0..3 {
                if m[j] == 0 {
                    continue;
                }
                // x·ξ_j = -Σ_i c(x,i)_j ξ_i, applied as a derivation.
                for i in 0..3 {
                    let coef = -c(x, i)[j];
                    if coef == 0 {
                        continue;
                    }
                    let mut t = *m;
                    t[j] -= 1;
                    t[i] += 1;
                    mat[index(t)][col] += Ratio::from_integer(coef * m[j] as i64);
                }
            }
        }
        rows.extend(mat);
    }
    let cols = monos.len();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != Ratio::from_integer(0)) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != Ratio::from_integer(0) {
                let f = rows[i][col] / rows[r][col];
                for t in 0..cols {
                    let v = rows[r][t];
                    rows[i][t] -= f * v;
                }
            }
        }
        r += 1;
    }
    cols - r
}

#[test]
fn sl2_invariants_match_brute_force() {
    let ext = fixtures::split_sl2::<Rational>();
    for k in 1..=4 {
        assert_eq!(sl2_invariant_count(k), [0, 1, 0, 1][k - 1]);
        assert_eq!(invariants(&ext, k).unwrap().len(), sl2_invariant_count(k), "weight {k}");
    }
}
