#![allow(clippy::needless_range_loop)]

mod common;

use common::{algebras_with_modules, permute_basis, permute_module, q, rng, sl2_adjoint};
use num_rational::Ratio;
use rand::Rng;
use rinehart_core::cochain::{
    ce_differential, cohomology, evaluate, total_differential, wedge, AltForm, GradedAltForm, GradedModule, Pairing,
};
use rinehart_core::fixtures;
use rinehart_core::scalar::add_assign;
use rinehart_core::{LrModule, Matrix, Rational};

#[test]
fn d_squared_vanishes_on_random_forms() {
    let mut r = rng(1);
    for (name, lra, modules) in algebras_with_modules() {
        for m in &modules {
            for p in 0..lra.rank() {
                for _ in 0..10 {
                    let f = AltForm::random(p, lra.rank(), m.qdim(), &mut r);
                    let ddf = ce_differential(&lra, m, &ce_differential(&lra, m, &f));
                    assert!(ddf.is_zero(), "{name} degree {p}");
                }
            }
        }
    }
}

/// Pairings `M' × M'' → M` that are morphisms of modules, with the three
/// modules, over each test algebra.
type M = LrModule<Rational>;
type WithPairing = (&'static str, rinehart_core::LieRinehartAlgebra<Rational>, M, M, M, Pairing<Rational>);

fn valid_pairings() -> Vec<WithPairing> {
    let mut out = Vec::new();
    for (name, lra, modules) in algebras_with_modules() {
        let base = LrModule::base(&lra);
        out.push((name, lra.clone(), base.clone(), base.clone(), base.clone(), Pairing::algebra(&lra)));
        for m in modules {
            out.push((name, lra.clone(), base.clone(), m.clone(), m.clone(), Pairing::module_action(&lra, &m)));
            out.push((name, lra.clone(), m.clone(), base.clone(), m.clone(), Pairing::right_module_action(&lra, &m)));
        }
    }
    let (sl2, ad) = sl2_adjoint();
    out.push(("sl2-bracket", sl2.clone(), ad.clone(), ad.clone(), ad, Pairing::lie_bracket(&sl2)));
    out
}

#[test]
fn pairings_are_module_morphisms() {
    for (name, lra, l, r, o, mu) in valid_pairings() {
        assert!(mu.validate(&lra, &l, &r, &o).is_valid(), "{name}");
    }
}

#[test]
fn graded_leibniz_rule() {
    let mut r = rng(2);
    for (name, lra, ml, mr, mo, mu) in valid_pairings() {
        let n = lra.rank();
        for p in 0..n {
            for qd in 0..n - p {
                for _ in 0..4 {
                    let f = AltForm::random(p, n, ml.qdim(), &mut r);
                    let g = AltForm::random(qd, n, mr.qdim(), &mut r);
                    let lhs = ce_differential(&lra, &mo, &wedge(&f, &g, &mu).unwrap());
                    let a = wedge(&ce_differential(&lra, &ml, &f), &g, &mu).unwrap();
                    let b = wedge(&f, &ce_differential(&lra, &mr, &g), &mu).unwrap();
                    let sign = if p % 2 == 0 { q(1) } else { q(-1) };
                    assert_eq!(lhs, a.add(&b.scale(&sign)).unwrap(), "{name} p={p} q={qd}");
                }
            }
        }
    }
}

#[test]
fn graded_commutativity_and_associativity() {
    let mut r = rng(3);
    for (name, lra, modules) in algebras_with_modules() {
        let n = lra.rank();
        let d = lra.base().dim();
        let mu = Pairing::algebra(&lra);
        for p in 0..=n {
            for qd in 0..=n - p {
                let f = AltForm::random(p, n, d, &mut r);
                let g = AltForm::random(qd, n, d, &mut r);
                let sign = if (p * qd) % 2 == 0 { q(1) } else { q(-1) };
                assert_eq!(wedge(&f, &g, &mu).unwrap(), wedge(&g, &f, &mu).unwrap().scale(&sign), "{name}");
                for s in 0..=n - p - qd {
                    let h = AltForm::random(s, n, d, &mut r);
                    let left = wedge(&wedge(&f, &g, &mu).unwrap(), &h, &mu).unwrap();
                    let right = wedge(&f, &wedge(&g, &h, &mu).unwrap(), &mu).unwrap();
                    assert_eq!(left, right, "{name}");
                    for m in &modules {
                        let act = Pairing::module_action(&lra, m);
                        let hm = AltForm::random(s, n, m.qdim(), &mut r);
                        let left = wedge(&wedge(&f, &g, &mu).unwrap(), &hm, &act).unwrap();
                        let right = wedge(&f, &wedge(&g, &hm, &act).unwrap(), &act).unwrap();
                        assert_eq!(left, right, "{name} module associativity");
                    }
                }
            }
        }
    }
}

#[test]
fn evaluate_is_alternating_and_multilinear() {
    let mut r = rng(4);
    for (name, lra, modules) in algebras_with_modules() {
        let n = lra.rank();
        let d = lra.base().dim();
        for m in &modules {
            for p in 1..=n.min(3) {
                let f = AltForm::random(p, n, m.qdim(), &mut r);
                let args: Vec<Vec<Rational>> = (0..p)
                    .map(|_| (0..lra.qdim()).map(|_| q(r.gen_range(-2..=2))).collect())
                    .collect();
                let base = evaluate(&lra, m, &f, &args).unwrap();
                if p >= 2 {
                    let mut swapped = args.clone();
                    swapped.swap(0, 1);
                    let neg: Vec<Rational> = base.iter().map(|x| -x.clone()).collect();
                    assert_eq!(evaluate(&lra, m, &f, &swapped).unwrap(), neg, "{name}");
                    let mut repeated = args.clone();
                    repeated[1] = repeated[0].clone();
                    assert!(evaluate(&lra, m, &f, &repeated).unwrap().iter().all(|x| *x == q(0)));
                }
                let a: Vec<Rational> = (0..d).map(|_| q(r.gen_range(-2..=2))).collect();
                let extra: Vec<Rational> = (0..lra.qdim()).map(|_| q(r.gen_range(-2..=2))).collect();
                for slot in 0..p {
                    let mut scaled = args.clone();
                    scaled[slot] = lra.scalar_mul(&a, &args[slot]);
                    add_assign(&mut scaled[slot], &extra);
                    let mut other = args.clone();
                    other[slot] = extra.clone();
                    let mut expected = m.a_mul(&a, &base);
                    add_assign(&mut expected, &evaluate(&lra, m, &f, &other).unwrap());
                    assert_eq!(evaluate(&lra, m, &f, &scaled).unwrap(), expected, "{name} slot {slot}");
                }
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut v = p.clone();
            v.insert(i, n - 1);
            out.push(v);
        }
    }
    out
}

#[test]
fn cohomology_is_basis_independent() {
    for (name, lra, modules) in algebras_with_modules() {
        for m in &modules {
            let dims: Vec<usize> = (0..=lra.rank()).map(|p| cohomology(&lra, m, p).unwrap().dim()).collect();
            for perm in permutations(lra.rank()) {
                let l2 = permute_basis(&lra, &perm);
                let m2 = permute_module(m, &perm);
                assert!(m2.validate(&l2).is_valid());
                let dims2: Vec<usize> = (0..=l2.rank()).map(|p| cohomology(&l2, &m2, p).unwrap().dim()).collect();
                assert_eq!(dims, dims2, "{name} {perm:?}");
            }
        }
    }
}

// Independent oracle: the classical Chevalley-Eilenberg complex of a Lie
// algebra over Q with trivial coefficients, on exterior monomials, with
// ranks by fraction-free elimination over Ratio<i64>.
fn oracle_betti(structure: &[[[i64; 3]; 3]], n: usize) -> Vec<usize> {
    let subsets = |p: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == p)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    let rank = |rows: Vec<Vec<Ratio<i64>>>| -> usize {
        let mut rows = rows;
        let mut r = 0;
        let cols = rows.first().map_or(0, |x| x.len());
        for c in 0..cols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != Ratio::from_integer(0)) else { continue };
            rows.swap(r, pr);
            for i in 0..rows.len() {
                if i != r && rows[i][c] != Ratio::from_integer(0) {
                    let f = rows[i][c] / rows[r][c];
                    for k in 0..cols {
                        let v = rows[r][k];
                        rows[i][k] -= f * v;
                    }
                }
            }
            r += 1;
        }
        r
    };
    // (dφ)(x_0..x_p) = Σ_{s<t} (-1)^{s+t} φ([x_s,x_t], …); entries in the
    // basis of exterior monomials.
    let d_rank = |p: usize| -> usize {
        let src = subsets(p);
        let dst = subsets(p + 1);
        if src.is_empty() || dst.is_empty() {
            return 0;
        }
        let mut rows = vec![vec![Ratio::from_integer(0i64); src.len()]; dst.len()];
        for (ri, tuple) in dst.iter().enumerate() {
            for s in 0..tuple.len() {
                for t in s + 1..tuple.len() {
                    let rest: Vec<usize> = tuple.iter().enumerate().filter(|&(k, _)| k != s && k != t).map(|(_, &v)| v).collect();
                    for k in 0..n {
                        let c = structure[tuple[s]][tuple[t]][k];
                        if c == 0 || rest.contains(&k) {
                            continue;
                        }
                        let mut args = vec![k];
                        args.extend(&rest);
                        let inversions = (0..args.len()).flat_map(|i| (i + 1..args.len()).map(move |j| (i, j))).filter(|&(i, j)| args[i] > args[j]).count();
                        let mut sorted = args.clone();
                        sorted.sort();
                        let ci = src.iter().position(|x| *x == sorted).unwrap();
                        let sign = if (s + t + inversions) % 2 == 0 { 1 } else { -1 };
                        rows[ri][ci] += Ratio::from_integer(sign * c);
                    }
                }
            }
        }
        rank(rows)
    };
    (0..=n)
        .map(|p| {
            let dim = subsets(p).len();
            let out = d_rank(p);
            let inc = if p == 0 { 0 } else { d_rank(p - 1) };
            dim - out - inc
        })
        .collect()
}

#[test]
fn cohomology_matches_dense_oracle() {
    let sl2 = [
        [[0, 0, 0], [0, 0, 1], [-2, 0, 0]],
        [[0, 0, -1], [0, 0, 0], [0, 2, 0]],
        [[2, 0, 0], [0, -2, 0], [0, 0, 0]],
    ];
    assert_eq!(oracle_betti(&sl2, 3), vec![1, 0, 0, 1]);
    let lra = fixtures::sl2::<Rational>();
    let m = LrModule::trivial(&lra).unwrap();
    let dims: Vec<usize> = (0..=3).map(|p| cohomology(&lra, &m, p).unwrap().dim()).collect();
    assert_eq!(dims, oracle_betti(&sl2, 3));

    let ab2 = [[[0; 3]; 3]; 3];
    assert_eq!(oracle_betti(&ab2, 2), vec![1, 2, 1]);
}

#[test]
fn total_differential_squares_to_zero() {
    let tp2 = fixtures::tp2::<Rational>();
    let a = LrModule::base(&tp2);
    let c = GradedModule::new(vec![a.clone(), a.clone()], vec![Matrix::identity(2)]).unwrap();
    assert!(c.validate(&tp2).is_valid());
    let mut r = rng(5);
    for _ in 0..20 {
        let mut f = GradedAltForm::new();
        for level in 0..2 {
            for p in 0..=1 {
                f.insert(level, AltForm::random(p, 1, 2, &mut r)).unwrap();
            }
        }
        let df = total_differential(&tp2, &c, &f).unwrap();
        assert!(total_differential(&tp2, &c, &df).unwrap().is_zero());
    }
}

#[test]
fn total_differential_of_a_cycle_valued_form_over_ab2() {
    let ab2 = fixtures::ab2::<Rational>();
    let t = LrModule::trivial(&ab2).unwrap();
    let c = GradedModule::new(vec![t.clone(), t.clone()], vec![Matrix::zeros(1, 1)]).unwrap();
    let mut f = GradedAltForm::new();
    f.insert(1, AltForm::constant(2, vec![q(3)])).unwrap();
    assert!(total_differential(&ab2, &c, &f).unwrap().is_zero());
}

#[test]
fn total_differential_refuses_non_chain_maps() {
    let tp2 = fixtures::tp2::<Rational>();
    let a = LrModule::base(&tp2);
    let bad = Matrix::from_rows(2, &[vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
    let c = GradedModule::new(vec![a.clone(), a.clone()], vec![bad]).unwrap();
    assert!(!c.validate(&tp2).is_valid());
    let mut f = GradedAltForm::new();
    f.insert(1, AltForm::constant(1, vec![q(1), q(0)])).unwrap();
    assert!(total_differential(&tp2, &c, &f).is_err());
}
