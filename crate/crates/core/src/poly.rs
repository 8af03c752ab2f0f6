//! Sparse multivariate Laurent polynomials.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;

use crate::monomial::Monomial;
use crate::scalar::{Coefficient, Field, Lift};
use crate::var::VarId;

/// A Laurent polynomial with coefficients in `C`.
///
/// Terms are kept sorted by descending [`Monomial`] order with no zero
/// coefficients, so structural equality is value equality.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v))
    }

    /// `1 - m`.
    pub fn one_minus(m: &Monomial) -> Self {
        Self::from_terms([(Monomial::one(), C::one()), (m.clone(), -C::one())])
    }

    /// Collects arbitrary terms, merging equal monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut acc: FxHashMap<Monomial, C> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        LaurentPoly { terms }
    }

    /// Trusts the caller that `terms` is strictly descending and zero-free.
    fn from_sorted(terms: Vec<(Monomial, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<&(Monomial, C)> {
        if self.terms.len() == 1 {
            self.terms.first()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.contains(v))
    }

    /// The monomial gcd of all terms, or the unit for the zero polynomial.
    pub fn content_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, (m, _)| g.gcd(m))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(
            self.terms
                .iter()
                .filter_map(|(m, x)| {
                    let y = x.clone() * c.clone();
                    (!y.is_zero()).then(|| (m.clone(), y))
                })
                .collect(),
        )
    }

    /// Multiplication by a monomial preserves term order.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        Self::from_sorted(
            self.terms
                .iter()
                .map(|(u, c)| (u.mul(m), c.clone()))
                .collect(),
        )
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        self.mul_monomial(m).scale(c)
    }

    /// `self * (1 - m)`.
    pub fn mul_one_minus(&self, m: &Monomial) -> Self {
        self.sub_ref(&self.mul_monomial(m))
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: &C| if negate_other { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), fix(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.clone() + fix(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), fix(c))));
        Self::from_sorted(out)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg_ref(&self) -> Self {
        Self::from_sorted(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        )
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, c);
        }
        if small.len() == 2 && small.terms[1].0.is_one() && small.terms[1].1.is_one() && (-small.terms[0].1.clone()).is_one() {
            // (1 - m) with m > 1 in the term order
            return big.mul_one_minus(&small.terms[0].0);
        }
        let mut acc: FxHashMap<Monomial, C> =
            FxHashMap::with_capacity_and_hasher(small.len() * big.len(), Default::default());
        for (ma, ca) in small.terms.iter() {
            for (mb, cb) in big.terms.iter() {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Exact division by `1 - m`, or `None` when `1 - m` does not divide.
    ///
    /// Monomials are grouped into cosets of the lattice generated by `m`;
    /// within a coset the polynomial is univariate in `m` and divisible by
    /// `1 - m` iff its coefficients sum to zero.
    pub fn div_one_minus(&self, m: &Monomial) -> Option<Self> {
        let (lead_var, lead_exp) = m.leading_exp()?;
        if lead_exp < 0 {
            // p / (1 - m) = -m^{-1} p / (1 - m^{-1})
            let mi = m.inv();
            return self
                .div_one_minus(&mi)
                .map(|q| q.mul_term(&mi, &-C::one()));
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Descending term order within a coset is descending power of m.
        let mut cosets: FxHashMap<Monomial, Vec<(i64, C)>> = FxHashMap::default();
        for (u, c) in self.terms.iter() {
            let j = u.exp(lead_var).div_euclid(lead_exp);
            let rep = u.mul(&m.pow(-j));
            cosets.entry(rep).or_default().push((j, c.clone()));
        }
        let mut out: Vec<(Monomial, C)> = Vec::new();
        for (rep, seq) in cosets {
            // q_{j-1} = q_j + c_j walking down from the top power
            let mut run = C::zero();
            let mut it = seq.into_iter().peekable();
            while let Some((j, c)) = it.next() {
                run = run + c;
                let next_j = it.peek().map(|p| p.0);
                let stop = next_j.unwrap_or(i64::MIN);
                if next_j.is_none() && !run.is_zero() {
                    return None;
                }
                if run.is_zero() {
                    continue;
                }
                let mut k = j - 1;
                while k >= stop {
                    out.push((rep.mul(&m.pow(k)), -run.clone()));
                    k -= 1;
                }
            }
        }
        out.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Some(Self::from_sorted(out))
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: VarId) -> Self {
        let mut out = Vec::new();
        for (m, c) in self.terms.iter() {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let d = c.clone() * C::from_i64(e);
            if d.is_zero() {
                continue;
            }
            out.push((m.mul(&Monomial::var_pow(v, -1)), d));
        }
        // d/dv shifts only the v exponent by -1 on the terms it keeps,
        // which preserves relative order.
        Self::from_sorted(out)
    }

    /// Evaluate at a point given by `value`, which must return an invertible
    /// element for every variable that appears with a negative exponent.
    pub fn eval<F>(&self, value: &impl Fn(VarId) -> F) -> Option<F>
    where
        F: Field,
        C: Lift<F>,
    {
        let mut acc = F::zero();
        for (m, c) in self.terms.iter() {
            acc = acc + c.lift() * eval_monomial(m, value)?;
        }
        Some(acc)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub(crate) fn eval_monomial<F: Field>(m: &Monomial, value: &impl Fn(VarId) -> F) -> Option<F> {
    let mut acc = F::one();
    for (v, e) in m.iter() {
        acc = acc * value(v).pow_i64(e)?;
    }
    Some(acc)
}

impl<C: Coefficient> Add for LaurentPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<C: Coefficient> Sub for LaurentPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<C: Coefficient> Mul for LaurentPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<'a, C: Coefficient> Add<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.add_ref(rhs)
    }
}

impl<'a, C: Coefficient> Sub<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.sub_ref(rhs)
    }
}

impl<'a, C: Coefficient> Mul<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coefficient> LaurentPoly<C> {
    fn fmt_terms(&self, f: &mut fmt::Formatter<'_>, coef: impl Fn(&C) -> String) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&coef(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", coef(&abs))?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f, |c| c.to_string())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f, |c| format!("{c:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = LaurentPoly<BigInt>;

    fn l() -> P {
        P::var(VarId::L)
    }

    fn c(v: i64) -> P {
        P::constant(BigInt::from(v))
    }

    #[test]
    fn binomial_square() {
        let x = &l() - &c(1);
        let sq = &x * &x;
        let expect = P::from_terms([
            (Monomial::var_pow(VarId::L, 2), BigInt::from(1)),
            (Monomial::var(VarId::L), BigInt::from(-2)),
            (Monomial::one(), BigInt::from(1)),
        ]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn additive_identity() {
        let p = &l() - &c(3);
        assert_eq!(&p + &P::zero(), p);
    }

    #[test]
    fn difference_of_squares() {
        let m = Monomial::tl(1, -1);
        let a = P::one_minus(&m);
        let b = &c(1) + &P::monomial(m.clone());
        assert_eq!(&a * &b, P::one_minus(&m.pow(2)));
    }

    #[test]
    fn divide_by_binomial() {
        let m = Monomial::tl(2, -1);
        let q = &c(3) - &P::monomial(Monomial::tl(1, 4));
        let p = q.mul_one_minus(&m);
        assert_eq!(p.div_one_minus(&m), Some(q.clone()));
        // non-canonical orientation
        assert_eq!(p.div_one_minus(&m.inv()).map(|r| r.mul_term(&m.inv(), &BigInt::from(-1))), Some(q));
        // not divisible
        assert_eq!(c(2).div_one_minus(&m), None);
    }

    #[test]
    fn divide_geometric() {
        let m = Monomial::var(VarId::L);
        let p = P::one_minus(&m.pow(5));
        let q = p.div_one_minus(&m).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(q.mul_one_minus(&m), p);
    }

    #[test]
    fn divide_non_primitive_body() {
        // 1 - t^2 L^-2 does not divide 1 - t L^-1
        let m2 = Monomial::tl(2, -2);
        assert_eq!(P::one_minus(&Monomial::tl(1, -1)).div_one_minus(&m2), None);
        let p = P::one_minus(&Monomial::tl(6, -6));
        assert!(p.div_one_minus(&m2).is_some());
        assert!(p.div_one_minus(&Monomial::tl(4, -4)).is_none());
    }

    #[test]
    fn derivative_power_rule() {
        let m = Monomial::from_pairs([(VarId::BigA, 1), (VarId::Tau, 2)]);
        let d = P::monomial(m).derivative(VarId::Tau);
        let expect = P::term(
            Monomial::from_pairs([(VarId::BigA, 1), (VarId::Tau, 1)]),
            BigInt::from(2),
        );
        assert_eq!(d, expect);
        assert!(c(5).derivative(VarId::Tau).is_zero());
    }

    #[test]
    fn display_orders_descending() {
        let x = &l() - &c(1);
        assert_eq!((&x * &x).to_string(), "L^2 - 2*L + 1");
    }
}
