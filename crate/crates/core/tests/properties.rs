use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use unitary_forms::arithmetic::{conic_hilbert_symbol, hilbert_symbol, Place};
use unitary_forms::genus_pipeline::{genus::recheck, genus_size, OrderSpec};
use unitary_forms::isometry_engine::{
    all_reflections, cd_factorize, inverse_reflection, orthogonal_group, reflection_map, reflection_product, DicksonEngine,
};
use unitary_forms::quadratic_space::classify::{gl_order, DEFAULT_BUDGET};
use unitary_forms::quadratic_space::{
    brute_force_classify, herm_of, is_isometry, lambda_p_generators, orth_sum, quad_equal, scalar_extend, AlgMatrix,
    Flavor, QuadClass,
};
use unitary_forms::ring_core::{BaseRing, RingElem, RingHom};
use unitary_forms::unitary_algebra::{jacobson_radical, lambda_min_max, Algebra, MatrixInvolution, Span, UnitaryRing};

fn bases() -> Vec<BaseRing> {
    vec![
        BaseRing::prime_field(5).unwrap(),
        BaseRing::finite_field(3, 2).unwrap(),
        BaseRing::truncated(3, 3).unwrap(),
        BaseRing::localized(&[3, 5]).unwrap(),
        BaseRing::Rationals,
        BaseRing::product(vec![BaseRing::prime_field(3).unwrap(), BaseRing::prime_field(5).unwrap()]).unwrap(),
    ]
}

fn elem(r: &BaseRing, n: i64, d: i64) -> RingElem {
    match r {
        BaseRing::Rationals | BaseRing::Localized(_) => {
            let x = r.from_rational(&BigRational::new(n.into(), d.into()));
            x.unwrap_or_else(|_| r.from_int(n))
        }
        BaseRing::Finite(_) => {
            let all = r.elements().unwrap();
            all[(n.rem_euclid(all.len() as i64)) as usize].clone()
        }
        _ => r.from_int(n),
    }
}

fn fp(p: u64) -> Arc<UnitaryRing> {
    Arc::new(UnitaryRing::scalar_ring(BaseRing::prime_field(p).unwrap(), 1, false).unwrap())
}

fn gram_f3(entries: &[i64], m: usize) -> QuadClass {
    let rows: Vec<Vec<i64>> = (0..m).map(|i| entries[i * m..(i + 1) * m].to_vec()).collect();
    QuadClass::from_ints(fp(3), &rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(k in 0usize..6, a in -40i64..40, b in -40i64..40, c in -40i64..40, d in 1i64..9) {
        let r = &bases()[k];
        let (x, y, z) = (elem(r, a, d), elem(r, b, 1), elem(r, c, d));
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
        prop_assert_eq!(r.add(&x, &r.neg(&x)), r.zero());
        prop_assert_eq!(r.mul(&x, &r.one()), x.clone());
        if r.is_unit(&x) {
            prop_assert!(r.is_one(&r.mul(&r.inv(&x).unwrap(), &x)));
        }
    }

    #[test]
    fn homomorphisms_compose(a in -500i64..500, b in -500i64..500, d in prop::sample::select(vec![1i64, 2, 4, 5, 7])) {
        let z3 = BaseRing::localized(&[3]).unwrap();
        let z27 = BaseRing::truncated(3, 3).unwrap();
        let f3 = BaseRing::prime_field(3).unwrap();
        let (h1, h2, h) = (RingHom::new(&z3, &z27).unwrap(), RingHom::new(&z27, &f3).unwrap(), RingHom::new(&z3, &f3).unwrap());
        let x = z3.from_rational(&BigRational::new(a.into(), d.into())).unwrap();
        let y = z3.from_int(b);
        prop_assert_eq!(h2.apply(&h1.apply(&x).unwrap()).unwrap(), h.apply(&x).unwrap());
        prop_assert_eq!(h1.apply(&z3.mul(&x, &y)).unwrap(), z27.mul(&h1.apply(&x).unwrap(), &h1.apply(&y).unwrap()));
        prop_assert_eq!(h1.apply(&z3.add(&x, &y)).unwrap(), z27.add(&h1.apply(&x).unwrap(), &h1.apply(&y).unwrap()));
        prop_assert_eq!(h1.apply(&z3.one()).unwrap(), z27.one());
    }

    #[test]
    fn quad_equal_is_an_equivalence(g in prop::collection::vec(0i64..3, 4), d1 in 0i64..3, d2 in 0i64..3) {
        let q = gram_f3(&g, 2);
        let ring = q.parent().clone();
        let gens = lambda_p_generators(&ring, 2);
        let alg = &ring.algebra;
        let shift = |q: &QuadClass, k: i64| {
            let mut d = AlgMatrix::zeros(alg, 2, 2);
            for _ in 0..k { d = d.add(alg, &gens[0]); }
            QuadClass::from_gram(ring.clone(), q.gram().add(alg, &d)).unwrap()
        };
        let (q1, q2) = (shift(&q, d1), shift(&q, d2));
        prop_assert!(quad_equal(&q, &q));
        prop_assert_eq!(quad_equal(&q, &q1), quad_equal(&q1, &q));
        prop_assert!(quad_equal(&q, &q1) && quad_equal(&q1, &q2) && quad_equal(&q, &q2));
        prop_assert_eq!(herm_of(&q).gram().clone(), herm_of(&q1).gram().clone());
    }

    #[test]
    fn scalar_extension_is_natural(g in prop::collection::vec(0i64..3, 4), h in prop::collection::vec(0i64..3, 1)) {
        let (a, b) = (gram_f3(&g, 2), gram_f3(&h, 1));
        let hom = RingHom::new(&BaseRing::prime_field(3).unwrap(), &BaseRing::finite_field(3, 2).unwrap()).unwrap();
        let ea = scalar_extend(&a, &hom).unwrap();
        let mapped = herm_of(&a).gram().map_entries(|x| hom.apply_all(x)).unwrap();
        prop_assert_eq!(herm_of(&ea).gram().clone(), mapped);
        let eb = QuadClass::from_gram(ea.parent().clone(), scalar_extend(&b, &hom).unwrap().gram().clone()).unwrap();
        let lhs = scalar_extend(&orth_sum(&a, &b), &hom).unwrap();
        prop_assert!(quad_equal(&QuadClass::from_gram(ea.parent().clone(), lhs.gram().clone()).unwrap(), &orth_sum(&ea, &eb)));
    }

    #[test]
    fn hilbert_symbol_identities(a in -300i64..300, b in -300i64..300, c in -300i64..300, k in 0usize..6) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let place = [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7), Place::Prime(11)][k];
        let q = |x: i64| BigRational::from_integer(x.into());
        let s = |x: i64, y: i64| hilbert_symbol(&q(x), &q(y), place).unwrap();
        prop_assert_eq!(s(a, b), s(b, a));
        prop_assert_eq!(s(a, b * c), s(a, b) * s(a, c));
        prop_assert_eq!(s(a * c * c, b), s(a, b));
        if let Place::Prime(p) = place {
            prop_assert_eq!(s(a, b), conic_hilbert_symbol(a, b, p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflections_are_involutive_isometries(g in prop::collection::vec(1i64..5, 2), p in prop::sample::select(vec![3u64, 5])) {
        let q = QuadClass::from_ints(fp(p), &[vec![g[0], 0], vec![0, g[1]]]).unwrap();
        let ring = q.parent().clone();
        for (r, m) in all_reflections(&q, DEFAULT_BUDGET).unwrap() {
            prop_assert!(is_isometry(&m, &q, &q).unwrap());
            let inv = reflection_map(&inverse_reflection(&r, &ring), &q).unwrap();
            prop_assert_eq!(m.mul(&ring.algebra, &inv), AlgMatrix::identity(&ring.algebra, 2));
        }
    }

    #[test]
    fn dickson_is_a_homomorphism_and_factorization_round_trips(i in 0usize..10_000, j in 0usize..10_000, which in 0usize..3) {
        let (ring, m) = [(fp(3), 3usize), (fp(5), 2), (fp(3), 2)][which].clone();
        let q = QuadClass::from_gram(ring.clone(), AlgMatrix::identity(&ring.algebra, m)).unwrap();
        let o = orthogonal_group(&q, DEFAULT_BUDGET).unwrap();
        let engine = DicksonEngine::new(&q).unwrap();
        let (a, b) = (&o.elements[i % o.order()], &o.elements[j % o.order()]);
        let lhs = engine.signature(&o.mul(a, b)).unwrap();
        prop_assert_eq!(lhs, engine.signature(a).unwrap().add(&engine.signature(b).unwrap()));
        let refl = cd_factorize(a, &q).unwrap();
        prop_assert_eq!(&reflection_product(&q, &refl).unwrap(), a);
    }

    #[test]
    fn genus_sizes_are_powers_of_two(mask in 1u8..8, u in prop::sample::select(vec![-1i64, -5, 7])) {
        let primes: Vec<u64> = [3u64, 7, 11].iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        prop_assume!(primes.iter().all(|&p| u % p as i64 != 0));
        let pi = primes.iter().product::<u64>() as i64;
        let spec = OrderSpec::quaternion(&primes, u, -1, pi);
        let ring = spec.build().unwrap();
        let q = spec.form(&ring, None).unwrap();
        let r = genus_size(&spec, &q).unwrap();
        prop_assert!(r.divides.is_power_of_two());
        prop_assert!(r.divides <= 1u64 << r.i_size());
        if let Some(s) = r.size {
            prop_assert!(s.is_power_of_two() && r.divides % s == 0);
        }
        prop_assert!(recheck(&spec, &q, &r).unwrap());
    }
}

#[test]
fn orbit_stabilizer_counts() {
    for (ring, m) in [(fp(3), 1usize), (fp(3), 2), (fp(5), 2)] {
        for flavor in [Flavor::Quadratic, Flavor::Hermitian] {
            let list = brute_force_classify(&ring, m, flavor, false, DEFAULT_BUDGET).unwrap();
            let gl = gl_order(&ring.algebra, m).unwrap();
            assert_eq!(list.classes.iter().map(|c| c.orbit_size).sum::<u64>(), list.total);
            for c in &list.classes {
                assert_eq!(c.orbit_size as u128 * c.stabilizer_order, gl);
            }
        }
    }
}

#[test]
fn one_form_parameter_in_odd_characteristic() {
    let f3 = BaseRing::prime_field(3).unwrap();
    let rings = [
        UnitaryRing::scalar_ring(f3.clone(), 1, false).unwrap(),
        UnitaryRing::scalar_ring(f3.clone(), -1, false).unwrap(),
        UnitaryRing::matrix_algebra(2, f3.clone(), MatrixInvolution::Transpose, 1).unwrap(),
        UnitaryRing::matrix_algebra(2, f3.clone(), MatrixInvolution::Symplectic, 1).unwrap(),
        UnitaryRing::swap_pair(BaseRing::prime_field(5).unwrap()).unwrap(),
    ];
    for r in &rings {
        let (min, max) = lambda_min_max(&r.algebra, &r.sigma, &r.u).unwrap();
        let n = r.dim();
        let smin = Span::new(r.base(), n, &min).unwrap();
        assert_eq!(smin.rank(), Span::new(r.base(), n, &max).unwrap().rank());
        assert!(smin.contains_all(&max));
    }
}

#[test]
fn radical_is_a_nilpotent_ideal() {
    let f3 = BaseRing::prime_field(3).unwrap();
    // upper triangular 2×2 over F_3: basis E00, E01, E11
    let tri = Algebra::from_fn(f3.clone(), 3, vec![f3.one(), f3.zero(), f3.one()], |i, j| {
        let mut v = vec![f3.zero(); 3];
        match (i, j) {
            (0, 0) => v[0] = f3.one(),
            (0, 1) => v[1] = f3.one(),
            (1, 2) => v[1] = f3.one(),
            (2, 2) => v[2] = f3.one(),
            _ => {}
        }
        v
    })
    .unwrap();
    // F_3[x]/(x^2)
    let dual = Algebra::from_fn(f3.clone(), 2, vec![f3.one(), f3.zero()], |i, j| {
        let mut v = vec![f3.zero(); 2];
        if i + j < 2 {
            v[i + j] = f3.one();
        }
        v
    })
    .unwrap();
    for (alg, expect) in [(tri, 1), (dual, 1), (Algebra::scalars(f3), 0)] {
        let j = jacobson_radical(&alg).unwrap();
        assert_eq!(j.len(), expect);
        let span = Span::new(alg.base(), alg.dim(), &j).unwrap();
        for x in &j {
            for k in 0..alg.dim() {
                assert!(span.contains(&alg.mul(x, &alg.basis(k))));
                assert!(span.contains(&alg.mul(&alg.basis(k), x)));
            }
            assert!(alg.is_zero(&alg.pow(x, alg.dim() as u64 + 1)));
        }
    }
}
