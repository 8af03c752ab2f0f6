use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use arcmot::deformed::{lambda_indices, lambda_support, Deformed, LambdaContext};
use arcmot::format::{from_json, to_json};
use arcmot::milnor::{cylinder_measure, Milnor, Route};
use arcmot::numtheory::{divisors, gcd, mobius};
use arcmot::{
    rat_eq_modp, Coefficient, FactoredRational, Image, LaurentPoly, ModP, Monomial, Rational, Subst, VarId,
};

const VARS: [VarId; 4] = [VarId::T, VarId::L, VarId::Lam(2), VarId::BigA];

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0..VARS.len(), -3i64..=3), 0..3)
        .prop_map(|v| Monomial::from_pairs(v.into_iter().map(|(i, e)| (VARS[i], e))))
}

fn poly<C: Coefficient + 'static>() -> impl Strategy<Value = LaurentPoly<C>> {
    prop::collection::vec((monomial(), -5i64..=5), 0..5)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(m, c)| (m, C::from_i64(c)))))
}

fn nonconstant() -> impl Strategy<Value = Monomial> {
    monomial().prop_filter("nonconstant", |m| !m.is_one())
}

/// `±unit * num / prod (1 - body)`.
fn rational() -> impl Strategy<Value = Rational> {
    (poly::<BigInt>(), monomial(), prop::collection::vec(nonconstant(), 0..3)).prop_map(|(p, u, bodies)| {
        let mut x = Rational::from_poly(p).mul_monomial(1, &u);
        for b in &bodies {
            x = x.mul(&Rational::one_minus_inv(b).unwrap());
        }
        x
    })
}

/// Nonzero values that are always invertible in the kernel.
fn unit_rational() -> impl Strategy<Value = Rational> {
    (any::<bool>(), monomial(), prop::collection::vec(nonconstant(), 0..3), prop::collection::vec(nonconstant(), 0..2))
        .prop_map(|(neg, u, den, num)| {
            let mut x = Rational::from_monomial(if neg { -1 } else { 1 }, u);
            for b in &den {
                x = x.mul(&Rational::one_minus_inv(b).unwrap());
            }
            for b in &num {
                x = x.mul(&Rational::one_minus(b));
            }
            x
        })
}

fn substitution() -> impl Strategy<Value = Subst> {
    let images = prop::collection::vec((any::<bool>(), monomial()), VARS.len());
    images.prop_map(|imgs| {
        let mut s = Subst::new();
        for (v, (neg, m)) in VARS.iter().zip(imgs) {
            if !m.is_one() {
                s.insert(*v, Image::Monomial { sign: if neg { -1 } else { 1 }, mono: m });
            }
        }
        s
    })
}

fn ring_axioms<C: Coefficient>(a: &LaurentPoly<C>, b: &LaurentPoly<C>, c: &LaurentPoly<C>) {
    assert_eq!(&(a + b) + c, a + &(b + c));
    assert_eq!(&(a * b) * c, a * &(b * c));
    assert_eq!(a * b, b * a);
    assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    assert!((a + &a.neg_ref()).is_zero());
    assert_eq!(a * &LaurentPoly::one(), a.clone());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_big_integers(a in poly::<BigInt>(), b in poly::<BigInt>(), c in poly::<BigInt>()) {
        ring_axioms(&a, &b, &c);
    }

    #[test]
    fn ring_axioms_machine_integers(a in poly::<i64>(), b in poly::<i64>(), c in poly::<i64>()) {
        ring_axioms(&a, &b, &c);
    }

    #[test]
    fn ring_axioms_rationals(a in poly::<BigRational>(), b in poly::<BigRational>(), c in poly::<BigRational>()) {
        ring_axioms(&a, &b, &c);
    }

    #[test]
    fn field_axioms(x in rational(), y in rational(), z in rational(), u in unit_rational()) {
        prop_assert!(x.add(&y).sub(&y).eq_exact(&x));
        prop_assert!(x.mul(&y.add(&z)).eq_exact(&x.mul(&y).add(&x.mul(&z))));
        prop_assert!(x.mul(&u).div(&u).unwrap().eq_exact(&x));
        prop_assert!(u.mul(&u.inv().unwrap()).is_one());
        prop_assert!(x.mul(&y).eq_exact(&y.mul(&x)));
    }

    #[test]
    fn exact_equality_is_reflexive_under_rebuilding(x in rational(), y in rational()) {
        let rebuilt = x.add(&y).sub(&y);
        prop_assert!(rebuilt.eq_exact(&x));
        prop_assert!(x.eq_exact(&rebuilt));
    }

    #[test]
    fn substitution_is_a_homomorphism(x in rational(), y in rational(), s in substitution()) {
        let (Ok(sx), Ok(sy)) = (s.apply(&x), s.apply(&y)) else { return Ok(()); };
        if let Ok(sxy) = s.apply(&x.mul(&y)) {
            prop_assert!(sxy.eq_exact(&sx.mul(&sy)));
        }
        if let Ok(ssum) = s.apply(&x.add(&y)) {
            prop_assert!(ssum.eq_exact(&sx.add(&sy)));
        }
    }

    #[test]
    fn product_and_quotient_rules(x in rational(), y in rational(), u in unit_rational(), vi in 0..VARS.len()) {
        let v = VARS[vi];
        let lhs = x.mul(&y).derivative(v);
        let rhs = x.derivative(v).mul(&y).add(&x.mul(&y.derivative(v)));
        prop_assert!(lhs.eq_exact(&rhs));
        // (x/u)' u^2 = x' u - x u'
        let q = x.div(&u).unwrap().derivative(v).mul(&u).mul(&u);
        let expect = x.derivative(v).mul(&u).sub(&x.mul(&u.derivative(v)));
        prop_assert!(q.eq_exact(&expect));
    }

    #[test]
    fn randomized_equality_has_no_false_negatives(x in rational(), y in rational(), z in rational(), seed in any::<u64>()) {
        let lhs = x.mul(&y.add(&z));
        let rhs = x.mul(&y).add(&x.mul(&z));
        prop_assert_eq!(rat_eq_modp(&lhs, &rhs, 8, seed), Ok(true));
    }

    #[test]
    fn evaluation_is_multiplicative(x in rational(), y in rational(), seed in 1u64..1 << 40) {
        let point = |v: VarId| ModP::new(seed.wrapping_mul(as_index(v)) % ((1 << 61) - 1) + 2);
        if let (Some(a), Some(b), Some(c)) = (x.eval(&point), y.eval(&point), x.mul(&y).eval(&point)) {
            prop_assert_eq!(a * b, c);
        }
    }

    #[test]
    fn json_round_trip(x in rational()) {
        let back = from_json(&to_json(&x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn orders_are_symmetric(k in 1u64..=12, m in 1u64..=12) {
        let g = Milnor::new();
        prop_assert_eq!(g.g_theorem2(k, m).unwrap(), g.g_theorem2(m, k).unwrap());
        prop_assert!(g.g_via_gcd(k, m).unwrap().eq_exact(&g.g_via_gcd(m, k).unwrap()));
    }

    #[test]
    fn coprime_orders_have_monomial_values(k in 1u64..=40, m in 1u64..=40) {
        prop_assume!(gcd(k, m) == 1);
        let g = Milnor::new();
        let (ki, mi) = (k as i64, m as i64);
        let expect = cylinder_measure(k, m).mul_monomial(1, &Monomial::tl((ki - 1) * (mi - 1), 0));
        prop_assert!(g.g_theorem2(k, m).unwrap().eq_exact(&expect));
    }

    #[test]
    fn s_routes_agree(k in 2u64..=60, pick in any::<prop::sample::Index>()) {
        let proper: Vec<u64> = divisors(k).into_iter().filter(|&a| a < k).collect();
        let a = proper[pick.index(proper.len())];
        let g = Milnor::new();
        prop_assert!(g.s_direct(a, k).unwrap().eq_exact(&g.s_mobius(a, k).unwrap()));
    }

    #[test]
    fn mobius_is_multiplicative(a in 1u64..2000, b in 1u64..2000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(mobius(a * b), mobius(a) * mobius(b));
    }

    #[test]
    fn lambda_support_and_degeneration(k in 1u64..=10, m in 1u64..=10) {
        let d = Deformed::new();
        let g = d.g_def_theorem3(k, m, &LambdaContext::symbolic()).unwrap();
        prop_assert!(lambda_indices(&g).is_subset(&lambda_support(k, m)));
        let flat = d.g_def_theorem3(k, m, &LambdaContext::all_l()).unwrap();
        prop_assert!(flat.eq_exact(&Milnor::new().g(Route::Recurrence, k, m).unwrap()));
    }
}

fn as_index(v: VarId) -> u64 {
    match v {
        VarId::T => 3,
        VarId::L => 5,
        VarId::Lam(i) => 7 + i as u64,
        VarId::BigA => 101,
        VarId::Tau => 103,
    }
}

#[test]
fn generic_kernel_over_rationals() {
    type R = FactoredRational<BigRational>;
    let half = BigRational::new(1.into(), 2.into());
    let x = R::from_poly(LaurentPoly::constant(half.clone()).add_ref(&LaurentPoly::var(VarId::L)));
    let y = R::one_minus_inv(&Monomial::tl(1, -1)).unwrap();
    let lhs = x.mul(&y).derivative(VarId::L);
    let rhs = x.derivative(VarId::L).mul(&y).add(&x.mul(&y.derivative(VarId::L)));
    assert!(lhs.eq_exact(&rhs));
    assert!(!x.eq_exact(&R::var(VarId::L)));
}
