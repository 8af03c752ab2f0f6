//! The undeformed integrals `G_{k,m}(t, L)`.
//!
//! Three independent evaluation routes are provided: the defining
//! recurrences, the reduction to the diagonal through the `S_{a,k}`
//! polynomials (plain and divisor-chain forms), and the closed chain-tuple
//! sum. Their agreement is the central identity checked by this crate.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::monomial::Monomial;
use crate::numtheory::{divisors, enumerate_chain_tuples, enumerate_divisor_chains, gcd, mobius};
use crate::subst::{Image, Substitution};
use crate::var::VarId;
use crate::Rational;

pub(crate) fn tl(t: i64, l: i64) -> Monomial {
    Monomial::tl(t, l)
}

pub(crate) fn mono(t: i64, l: i64) -> Rational {
    Rational::from_monomial(1, tl(t, l))
}

/// `L - 1`.
pub fn l_minus_one() -> Rational {
    Rational::one_minus(&tl(0, 1)).neg()
}

/// `G_{1,1} = (L - 1)^2 L^{-2}`.
pub fn g11() -> Rational {
    let l1 = l_minus_one();
    l1.mul(&l1).mul_monomial(1, &tl(0, -2))
}

pub(crate) fn check_orders(k: u64, m: u64) -> Result<(), Error> {
    if k == 0 || m == 0 {
        Err(Error::InvalidOrder(k as i64, m as i64))
    } else {
        Ok(())
    }
}

fn check_divisor(a: u64, k: u64) -> Result<(), Error> {
    if a == 0 || k == 0 || !k.is_multiple_of(a) {
        Err(Error::NotADivisor { a, k })
    } else {
        Ok(())
    }
}

/// The exponent of `t` and `L` in the monomial prefactor reducing `G_{k,m}`
/// to `G_{a,a}`, `a = gcd(k, m)`.
fn reduction_exponents(k: u64, m: u64) -> (i64, i64, u64) {
    let a = gcd(k, m);
    let (k, m, ai) = (k as i64, m as i64, a as i64);
    ((k - 1) * (m - 1) - (ai - 1) * (ai - 1), 2 * ai - k - m, a)
}

/// Which definition of `S_{a,k}` feeds the diagonal reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SRoute {
    Direct,
    Mobius,
}

/// Evaluation route for a table of `G` values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Recurrence,
    DivisorChain,
    ChainTuple,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Recurrence => "recurrence",
            Route::DivisorChain => "divisor-chain",
            Route::ChainTuple => "chain-tuple",
        }
    }
}

type Cache<K> = Mutex<HashMap<K, Rational>>;

fn cached<K, F>(cache: &Cache<K>, key: K, f: F) -> Result<Rational, Error>
where
    K: std::hash::Hash + Eq + Copy,
    F: FnOnce() -> Result<Rational, Error>,
{
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = f()?;
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// Memoized evaluator for the undeformed integrals. Safe to share between
/// threads; every cached value is a pure function of its key.
#[derive(Default)]
pub struct Milnor {
    recurrence: Cache<(u64, u64)>,
    diag_eq8: Cache<(u64, SRoute)>,
    diag_eq9: Cache<u64>,
    theorem2: Cache<(u64, u64)>,
    step: Cache<(u64, u64)>,
    s_direct: Cache<(u64, u64)>,
}

impl Milnor {
    pub fn new() -> Self {
        Self::default()
    }

    /// `G_{k,m}` from the recurrences: symmetry, the blow-up step for
    /// `m > k`, and the solved diagonal relation.
    pub fn g_recurrence(&self, k: u64, m: u64) -> Result<Rational, Error> {
        check_orders(k, m)?;
        let (k, m) = if k > m { (m, k) } else { (k, m) };
        cached(&self.recurrence, (k, m), || {
            if k == 1 && m == 1 {
                return Ok(g11());
            }
            let ki = k as i64;
            if m > k {
                let inner = self.g_recurrence(k, m - k)?;
                return Ok(inner.mul_monomial(1, &tl(ki * (ki - 1), -ki)));
            }
            let lower: Vec<Rational> = (1..k)
                .map(|j| self.g_recurrence(k, j))
                .collect::<Result<_, _>>()?;
            let sum = Rational::sum(lower.iter());
            Ok(self.diag_prefactor(k).mul(&sum))
        })
    }

    /// `(L - 1) t^{k(k-1)} L^{-k} / (1 - t^{k(k-1)} L^{1-k})`.
    fn diag_prefactor(&self, k: u64) -> Rational {
        let ki = k as i64;
        let e = ki * (ki - 1);
        l_minus_one()
            .mul_monomial(1, &tl(e, -ki))
            .mul(&Rational::one_minus_inv(&tl(e, 1 - ki)).expect("k >= 2"))
    }

    /// `S_{a,k}` as the literal sum over `1 <= m < k` with `gcd(m, k) = a`.
    pub fn s_direct(&self, a: u64, k: u64) -> Result<Rational, Error> {
        check_divisor(a, k)?;
        cached(&self.s_direct, (a, k), || {
            let (ai, ki) = (a as i64, k as i64);
            let terms: Vec<Rational> = (1..k)
                .filter(|&m| gcd(m, k) == a)
                .map(|m| {
                    let mi = m as i64;
                    mono((ki - 1) * (mi - 1) - (ai - 1) * (ai - 1), 2 * ai - ki - mi)
                })
                .collect();
            Ok(Rational::sum(terms.iter()))
        })
    }

    /// `Ŝ_{a,k}` as the literal sum over `1 <= m < k` with `a | m`.
    pub fn s_hat_sum(&self, a: u64, k: u64) -> Result<Rational, Error> {
        check_divisor(a, k)?;
        let ki = k as i64;
        let terms: Vec<Rational> = (1..k)
            .filter(|m| m % a == 0)
            .map(|m| {
                let mi = m as i64;
                mono((ki - 1) * (mi - 1), -ki - mi)
            })
            .collect();
        Ok(Rational::sum(terms.iter()))
    }

    /// `Ŝ_{a,k}` in closed form as a geometric series.
    pub fn s_hat(&self, a: u64, k: u64) -> Result<Rational, Error> {
        check_divisor(a, k)?;
        let (ai, ki) = (a as i64, k as i64);
        let num = mono((ki - 1) * (ai - 1), -ki - ai).sub(&mono((ki - 1) * (ki - 1), -2 * ki));
        Ok(num.mul(&Rational::one_minus_inv(&tl((ki - 1) * ai, -ai))?))
    }

    /// `S_{a,k}` by Möbius inversion of `Ŝ` over the divisor lattice
    /// between `a` and `k`.
    pub fn s_mobius(&self, a: u64, k: u64) -> Result<Rational, Error> {
        check_divisor(a, k)?;
        let mut parts: Vec<(i64, Rational)> = Vec::new();
        for b in divisors(k).into_iter().filter(|b| b % a == 0) {
            let mu = mobius(b / a);
            if mu != 0 {
                parts.push((mu, self.s_hat(b, k)?));
            }
        }
        let ai = a as i64;
        let sum = Rational::linear_combination(parts.iter().map(|(w, x)| (*w, x)));
        Ok(sum.mul_monomial(1, &tl(-(ai - 1) * (ai - 1), 2 * ai)))
    }

    /// Monomial prefactor and `a = gcd(k, m)` with `G_{k,m} = prefactor * G_{a,a}`.
    pub fn g_reduce_to_gcd(&self, k: u64, m: u64) -> Result<(Rational, u64), Error> {
        check_orders(k, m)?;
        let (te, le, a) = reduction_exponents(k, m);
        Ok((mono(te, le), a))
    }

    /// `G_{k,k}` from the diagonal relation written over divisors of `k`.
    pub fn g_diag_eq8(&self, k: u64, route: SRoute) -> Result<Rational, Error> {
        check_orders(k, k)?;
        cached(&self.diag_eq8, (k, route), || {
            if k == 1 {
                return Ok(g11());
            }
            let mut terms = Vec::new();
            for a in divisors(k).into_iter().filter(|&a| a < k) {
                let s = match route {
                    SRoute::Direct => self.s_direct(a, k)?,
                    SRoute::Mobius => self.s_mobius(a, k)?,
                };
                terms.push(s.mul(&self.g_diag_eq8(a, route)?));
            }
            Ok(self.diag_prefactor(k).mul(&Rational::sum(terms.iter())))
        })
    }

    /// `G_{k,k}` as an explicit sum over divisor chains `1 = a_0 < ... < a_r = k`.
    pub fn g_diag_eq9(&self, k: u64) -> Result<Rational, Error> {
        check_orders(k, k)?;
        cached(&self.diag_eq9, k, || {
            let mut terms = Vec::new();
            for chain in enumerate_divisor_chains(k) {
                let mut term = g11();
                for (prev, next) in chain.steps() {
                    term = term
                        .mul(&self.diag_prefactor(next))
                        .mul(&self.s_direct(prev, next)?);
                }
                terms.push(term);
            }
            Ok(Rational::sum(terms.iter()))
        })
    }

    /// `G_{k,m}` through the gcd reduction and the divisor-chain diagonal.
    pub fn g_via_gcd(&self, k: u64, m: u64) -> Result<Rational, Error> {
        let (pre, a) = self.g_reduce_to_gcd(k, m)?;
        Ok(pre.mul(&self.g_diag_eq9(a)?))
    }

    /// One factor of the chain-tuple sum for the step `b | a`, without the
    /// Möbius sign:
    /// `(L-1) t^{(a-1)b} L^{-b} (1 - t^{(a-1)(a-b)} L^{b-a}) /
    ///  ((1 - t^{a(a-1)} L^{1-a})(1 - t^{(a-1)b} L^{-b}))`.
    fn chain_step(&self, b: u64, a: u64) -> Result<Rational, Error> {
        cached(&self.step, (b, a), || {
            let (bi, ai) = (b as i64, a as i64);
            Ok(l_minus_one()
                .mul_monomial(1, &tl((ai - 1) * bi, -bi))
                .mul(&Rational::one_minus(&tl((ai - 1) * (ai - bi), bi - ai)))
                .mul(&Rational::one_minus_inv(&tl(ai * (ai - 1), 1 - ai))?)
                .mul(&Rational::one_minus_inv(&tl((ai - 1) * bi, -bi))?))
        })
    }

    /// The chain-tuple sum for target `a` (equal to 1 when `a = 1`).
    pub fn chain_sum(&self, a: u64) -> Result<Rational, Error> {
        let mut parts: Vec<(i64, Rational)> = Vec::new();
        for tuple in enumerate_chain_tuples(a) {
            let mut sign = 1;
            let mut term = Rational::one();
            for (prev, b, next) in tuple.steps() {
                sign *= mobius(b / prev);
                if sign == 0 {
                    break;
                }
                term = term.mul(&self.chain_step(b, next)?);
            }
            if sign != 0 {
                parts.push((sign, term));
            }
        }
        Ok(Rational::linear_combination(parts.iter().map(|(w, x)| (*w, x))))
    }

    /// `G_{k,m}` from the closed chain-tuple formula.
    pub fn g_theorem2(&self, k: u64, m: u64) -> Result<Rational, Error> {
        check_orders(k, m)?;
        let (k, m) = if k > m { (m, k) } else { (k, m) };
        cached(&self.theorem2, (k, m), || {
            let (ki, mi) = (k as i64, m as i64);
            let sum = self.chain_sum(gcd(k, m))?;
            Ok(l_minus_one()
                .mul(&l_minus_one())
                .mul_monomial(1, &tl((ki - 1) * (mi - 1), -ki - mi))
                .mul(&sum))
        })
    }

    pub fn g(&self, route: Route, k: u64, m: u64) -> Result<Rational, Error> {
        match route {
            Route::Recurrence => self.g_recurrence(k, m),
            Route::DivisorChain => self.g_via_gcd(k, m),
            Route::ChainTuple => self.g_theorem2(k, m),
        }
    }

    /// Both sides of the inversion symmetry
    /// `G(t^{-1}, L^{-1}) = t^{-2(k-1)(m-1)} L^{2k+2m-2} G(t, L)`.
    pub fn symmetry_sides(&self, k: u64, m: u64) -> Result<(Rational, Rational), Error> {
        let g = self.g_recurrence(k, m)?;
        let (ki, mi) = (k as i64, m as i64);
        let lhs = Substitution::inversion([VarId::T, VarId::L]).apply(&g)?;
        let rhs = g.mul_monomial(1, &tl(-2 * (ki - 1) * (mi - 1), 2 * ki + 2 * mi - 2));
        Ok((lhs, rhs))
    }

    pub fn symmetry_check(&self, k: u64, m: u64) -> Result<bool, Error> {
        let (lhs, rhs) = self.symmetry_sides(k, m)?;
        Ok(lhs.eq_exact(&rhs))
    }

    /// `sum_{m >= 1} G_{k,m} = sum_{m<k} G_{k,m} + G_{k,k} + G_{k,k}/(L-1)`.
    pub fn rowsum(&self, k: u64) -> Result<Rational, Error> {
        check_orders(k, k)?;
        let mut terms: Vec<Rational> = (1..k)
            .map(|m| self.g_recurrence(k, m))
            .collect::<Result<_, _>>()?;
        let gkk = self.g_recurrence(k, k)?;
        terms.push(gkk.mul_monomial(1, &tl(0, 1)).div(&l_minus_one())?);
        Ok(Rational::sum(terms.iter()))
    }

    /// The same row sum from the blow-up step alone: the tail `m > k` is a
    /// shifted copy of the whole row, so
    /// `rowsum(k) = sum_{m <= k} G_{k,m} / (1 - t^{k(k-1)} L^{-k})`.
    pub fn rowsum_geometric(&self, k: u64, route: Route) -> Result<Rational, Error> {
        check_orders(k, k)?;
        let terms: Vec<Rational> = (1..=k)
            .map(|m| self.g(route, k, m))
            .collect::<Result<_, _>>()?;
        let ki = k as i64;
        Ok(Rational::sum(terms.iter()).mul(&Rational::one_minus_inv(&tl(ki * (ki - 1), -ki))?))
    }

    /// `G_{k,m}` at `t = 1`.
    pub fn g_at_t1(&self, route: Route, k: u64, m: u64) -> Result<Rational, Error> {
        let g = self.g(route, k, m)?;
        Substitution::new().with(VarId::T, Image::one()).apply(&g)
    }
}

/// `(L - 1)^2 L^{-k-m}`, the measure of the arcs with orders `(k, m)`.
pub fn cylinder_measure(k: u64, m: u64) -> Rational {
    g11().mul_monomial(1, &tl(0, 2 - k as i64 - m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(t: i64, l: i64) -> Rational {
        Rational::one_minus_inv(&tl(t, l)).unwrap()
    }

    fn l1_pow(n: u32) -> Rational {
        let mut x = Rational::one();
        for _ in 0..n {
            x = x.mul(&l_minus_one());
        }
        x
    }

    #[test]
    fn recurrence_base_and_small_values() {
        let g = Milnor::new();
        assert_eq!(g.g_recurrence(1, 1).unwrap(), g11());
        assert!(g.g_recurrence(1, 2).unwrap().eq_exact(&l1_pow(2).mul(&mono(0, -3))));
        let g22 = l1_pow(3).mul(&mono(2, -5)).mul(&inv(2, -1));
        assert!(g.g_recurrence(2, 2).unwrap().eq_exact(&g22));
        let g33 = l1_pow(3)
            .mul(&mono(6, -7))
            .mul(&Rational::one().add(&mono(2, -1)))
            .mul(&inv(6, -2));
        assert!(g.g_recurrence(3, 3).unwrap().eq_exact(&g33));
        assert_eq!(g.g_recurrence(0, 2), Err(Error::InvalidOrder(0, 2)));
    }

    #[test]
    fn s_direct_examples() {
        let g = Milnor::new();
        assert_eq!(g.s_direct(1, 2).unwrap(), mono(0, -1));
        assert!(g.s_direct(1, 3).unwrap().eq_exact(&mono(0, -2).add(&mono(2, -3))));
        assert_eq!(g.s_direct(2, 4).unwrap(), mono(2, -2));
        assert!(g.s_direct(4, 4).unwrap().is_zero());
        assert_eq!(g.s_direct(2, 3), Err(Error::NotADivisor { a: 2, k: 3 }));
    }

    #[test]
    fn s_hat_two_routes() {
        let g = Milnor::new();
        for (a, k) in [(1, 2), (2, 4), (1, 3), (3, 12), (1, 1)] {
            assert!(g.s_hat(a, k).unwrap().eq_exact(&g.s_hat_sum(a, k).unwrap()), "({a},{k})");
        }
        assert!(g.s_hat_sum(1, 3).unwrap().eq_exact(&mono(0, -4).add(&mono(2, -5))));
        assert_eq!(g.s_hat_sum(2, 4).unwrap(), mono(3, -6));
    }

    #[test]
    fn s_mobius_examples() {
        let g = Milnor::new();
        assert!(g.s_mobius(1, 2).unwrap().eq_exact(&mono(0, -1)));
        assert!(g.s_mobius(2, 4).unwrap().eq_exact(&mono(2, -2)));
        assert!(g.s_mobius(1, 6).unwrap().eq_exact(&g.s_direct(1, 6).unwrap()));
    }

    #[test]
    fn reduction_prefactors() {
        let g = Milnor::new();
        assert_eq!(g.g_reduce_to_gcd(2, 3).unwrap(), (mono(2, -3), 1));
        assert_eq!(g.g_reduce_to_gcd(5, 5).unwrap(), (Rational::one(), 5));
        assert_eq!(g.g_reduce_to_gcd(2, 4).unwrap(), (mono(2, -2), 2));
    }

    #[test]
    fn diagonal_routes_small() {
        let g = Milnor::new();
        for k in 1..=6 {
            let r = g.g_recurrence(k, k).unwrap();
            assert!(g.g_diag_eq8(k, SRoute::Direct).unwrap().eq_exact(&r), "eq8 k={k}");
            assert!(g.g_diag_eq9(k).unwrap().eq_exact(&r), "eq9 k={k}");
        }
    }

    #[test]
    fn theorem2_examples() {
        let g = Milnor::new();
        assert_eq!(g.g_theorem2(1, 1).unwrap(), g11());
        assert!(g.g_theorem2(2, 3).unwrap().eq_exact(&l1_pow(2).mul(&mono(2, -5))));
        let raw = l1_pow(3)
            .mul(&mono(2, -5))
            .mul(&Rational::one_minus(&tl(1, -1)))
            .mul(&inv(2, -1))
            .mul(&inv(1, -1));
        assert!(g.g_theorem2(2, 2).unwrap().eq_exact(&raw));
        assert!(g.g_theorem2(2, 2).unwrap().eq_exact(&g.g_recurrence(2, 2).unwrap()));
    }

    #[test]
    fn symmetry_small() {
        let g = Milnor::new();
        for (k, m) in [(1, 1), (2, 2), (2, 3), (4, 6)] {
            assert!(g.symmetry_check(k, m).unwrap(), "({k},{m})");
        }
        let (lhs, _) = g.symmetry_sides(1, 1).unwrap();
        assert!(lhs.eq_exact(&l1_pow(2)));
    }

    #[test]
    fn rowsum_forms() {
        let g = Milnor::new();
        let r1 = g.rowsum(1).unwrap();
        assert!(r1.eq_exact(&l_minus_one().mul(&mono(0, -1))));
        for k in 1..=5 {
            let a = g.rowsum(k).unwrap();
            let b = g.rowsum_geometric(k, Route::Recurrence).unwrap();
            assert!(a.eq_exact(&b), "k={k}");
            // (L - 1)(rowsum - sum_{m<=k} G) = G_{k,k}
            let head: Vec<Rational> = (1..=k).map(|m| g.g_recurrence(k, m).unwrap()).collect();
            let tail = a.sub(&Rational::sum(head.iter())).mul(&l_minus_one());
            assert!(tail.eq_exact(&g.g_recurrence(k, k).unwrap()));
        }
    }

    #[test]
    fn measure_at_t1() {
        let g = Milnor::new();
        for (k, m) in [(1, 1), (2, 2), (3, 6), (4, 4)] {
            let v = g.g_at_t1(Route::ChainTuple, k, m).unwrap();
            assert!(v.eq_exact(&cylinder_measure(k, m)), "({k},{m})");
        }
    }
}
