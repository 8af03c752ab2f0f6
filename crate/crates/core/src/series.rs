//! Coefficientwise checks of the generating-series identities.
//!
//! The series `F = sum G_{k,m} a^k b^m c^{k^2} d^{km} e^{m^2}` is never
//! stored; every substitution of the formal variables is tracked as an
//! exponent map on the pattern of a single coefficient.

use serde::{Deserialize, Serialize};

use crate::deformed::{Deformed, LambdaContext};
use crate::error::Error;
use crate::milnor::{l_minus_one, tl, Milnor, Route};
use crate::monomial::Monomial;
use crate::numtheory::{divisors, gcd};
use crate::subst::{substitute_with, Image, Substitution};
use crate::var::VarId;
use crate::Rational;

/// A monomial in `t, L` and the five formal series variables `a..e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Formal {
    pub t: i64,
    pub l: i64,
    pub x: [i64; 5],
}

impl Formal {
    pub const fn new(t: i64, l: i64, x: [i64; 5]) -> Self {
        Formal { t, l, x }
    }

    /// Exponent pattern of the `(k, m)` coefficient of `F`.
    pub fn pattern(k: u64, m: u64) -> Self {
        let (k, m) = (k as i64, m as i64);
        Formal::new(0, 0, [k, m, k * k, k * m, m * m])
    }

    /// Reads back `(k, m)` if this is a coefficient pattern.
    pub fn decode(&self) -> Option<(u64, u64)> {
        let [k, m, c, d, e] = self.x;
        (k >= 1 && m >= 1 && c == k * k && d == k * m && e == m * m).then_some((k as u64, m as u64))
    }

    fn add_scaled(&mut self, other: &Formal, n: i64) {
        self.t += n * other.t;
        self.l += n * other.l;
        for i in 0..5 {
            self.x[i] += n * other.x[i];
        }
    }

    /// Image of `self` under `a..e -> images[0..5]`; `t` and `L` are kept.
    pub fn substitute(&self, images: &[Formal; 5]) -> Formal {
        let mut out = Formal::new(self.t, self.l, [0; 5]);
        for (i, img) in images.iter().enumerate() {
            out.add_scaled(img, self.x[i]);
        }
        out
    }

    pub fn tl(&self) -> Monomial {
        tl(self.t, self.l)
    }
}

const A: [i64; 5] = [1, 0, 0, 0, 0];
const B: [i64; 5] = [0, 1, 0, 0, 0];
const C: [i64; 5] = [0, 0, 1, 0, 0];
const D: [i64; 5] = [0, 0, 0, 1, 0];
const E: [i64; 5] = [0, 0, 0, 0, 1];
const ONE: [i64; 5] = [0; 5];

fn add(p: [i64; 5], q: [i64; 5]) -> [i64; 5] {
    std::array::from_fn(|i| p[i] + q[i])
}

fn twice(p: [i64; 5]) -> [i64; 5] {
    p.map(|v| 2 * v)
}

/// The three substitutions on the right of the functional equation
/// `F(a,b,c,d,e) = F(t^{-1}abL^{-1}, b, tcde, de^2, e)
///               + F(t^{-1}abL^{-1}, a, tcde, dc^2, c)
///               + (L-1) F(t^{-1}abL^{-1}, 1, tcde, 1, 1)`.
pub fn functional_eq_terms() -> [[Formal; 5]; 3] {
    let ab = Formal::new(-1, -1, add(A, B));
    let cde = Formal::new(1, 0, add(add(C, D), E));
    [
        [ab, Formal::new(0, 0, B), cde, Formal::new(0, 0, add(D, twice(E))), Formal::new(0, 0, E)],
        [ab, Formal::new(0, 0, A), cde, Formal::new(0, 0, add(D, twice(C))), Formal::new(0, 0, C)],
        [ab, Formal::new(0, 0, ONE), cde, Formal::new(0, 0, ONE), Formal::new(0, 0, ONE)],
    ]
}

/// The substitution in `F(t,L;a,b,c,d,e) = t^2 L^2 F(t^{-1},L^{-1}; at^{-2}L^{-2}, bt^{-2}L^{-2}, c, dt^2, e)`.
pub fn f_symmetry_images() -> (Formal, [Formal; 5]) {
    (
        Formal::new(2, 2, ONE),
        [
            Formal::new(-2, -2, A),
            Formal::new(-2, -2, B),
            Formal::new(0, 0, C),
            Formal::new(2, 0, D),
            Formal::new(0, 0, E),
        ],
    )
}

/// The form of the higher-derivative prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HigherForm {
    /// `(1 - L^{-α}) L^{α(k-1)} / ((λ_α - 1)(1 - λ_α L^{-α})^k)`.
    Stated,
    /// `(1 - L^{-α}) k! L^{-α(k-1)} / ((λ_α - 1)(1 - λ_α L^{-α})^k)`.
    Corrected,
}

/// A functional-equation cell `(k, m)` with its two sides.
pub type CellSides = ((u64, u64), Rational, Rational);

/// Shared evaluators for every series check.
#[derive(Default)]
pub struct Series {
    pub milnor: Milnor,
    pub deformed: Deformed,
}

fn lam(i: u64) -> VarId {
    VarId::Lam(i as u32)
}

fn a_tau(alpha: u64) -> Monomial {
    Monomial::from_pairs([(VarId::BigA, 1), (VarId::Tau, alpha as i64)])
}

/// `L -> L^α`, `λ_i -> λ_{iα}`.
fn rescale_lambda(x: &Rational, alpha: u64) -> Result<Rational, Error> {
    substitute_with(x, |v| match v {
        VarId::L => Some(Image::mono(Monomial::var_pow(VarId::L, alpha as i64))),
        VarId::Lam(i) => Some(Image::var(lam(i as u64 * alpha))),
        _ => None,
    })
}

/// `L -> L^α`, `τ -> τ^α`.
fn rescale_tau(x: &Rational, alpha: u64) -> Result<Rational, Error> {
    let a = alpha as i64;
    Substitution::new()
        .with(VarId::L, Image::mono(Monomial::var_pow(VarId::L, a)))
        .with(VarId::Tau, Image::mono(Monomial::var_pow(VarId::Tau, a)))
        .apply(x)
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

impl Series {
    pub fn new() -> Self {
        Self::default()
    }

    /// Contributions landing on the `(k, m)` coefficient from the three
    /// terms of the functional equation, summed over sources with both
    /// orders at most `max(k, m)`. The third term sums a whole row, taken in
    /// closed form from the geometric tail.
    fn functional_eq_rhs(&self, k: u64, m: u64) -> Result<Rational, Error> {
        let n = k.max(m);
        let mut parts = Vec::new();
        for (idx, images) in functional_eq_terms().iter().enumerate() {
            for sk in 1..=n {
                if idx == 2 {
                    let target = Formal::pattern(sk, 1).substitute(images);
                    if (2..=n).any(|sm| Formal::pattern(sk, sm).substitute(images) != target) {
                        return Err(Error::InvalidSequence("row term depends on m".into()));
                    }
                    if target.decode() == Some((k, m)) {
                        let row = self.milnor.rowsum_geometric(sk, Route::ChainTuple)?;
                        parts.push(row.mul(&l_minus_one()).mul_monomial(1, &target.tl()));
                    }
                    continue;
                }
                for sm in 1..=n {
                    let target = Formal::pattern(sk, sm).substitute(images);
                    let Some(cell) = target.decode() else {
                        return Err(Error::InvalidSequence("term leaves the pattern set".into()));
                    };
                    if cell == (k, m) {
                        parts.push(self.milnor.g_theorem2(sk, sm)?.mul_monomial(1, &target.tl()));
                    }
                }
            }
        }
        Ok(Rational::sum(parts.iter()))
    }

    /// `G_{k,m}` against the right side of the functional equation at `(k, m)`.
    pub fn functional_eq_cell(&self, k: u64, m: u64) -> Result<(Rational, Rational), Error> {
        Ok((self.milnor.g_theorem2(k, m)?, self.functional_eq_rhs(k, m)?))
    }

    /// Every coefficient with `k, m <= n`.
    pub fn check_functional_eq(&self, n: u64) -> Result<Vec<CellSides>, Error> {
        let mut out = Vec::new();
        for k in 1..=n {
            for m in 1..=n {
                let (lhs, rhs) = self.functional_eq_cell(k, m)?;
                out.push(((k, m), lhs, rhs));
            }
        }
        Ok(out)
    }

    /// `G_{k,k}` against `(L-1) t^{k(k-1)} L^{-k} rowsum(k)`.
    pub fn diagonal_rowsum_sides(&self, k: u64) -> Result<(Rational, Rational), Error> {
        let ki = k as i64;
        let rhs = l_minus_one()
            .mul_monomial(1, &tl(ki * (ki - 1), -ki))
            .mul(&self.milnor.rowsum(k)?);
        Ok((self.milnor.g_recurrence(k, k)?, rhs))
    }

    /// Coefficient `(k, m)` of the `F` inversion symmetry: `G` against the
    /// transformed right side.
    pub fn check_f_symmetry(&self, k: u64, m: u64) -> Result<(Rational, Rational), Error> {
        let g = self.milnor.g_theorem2(k, m)?;
        let (global, images) = f_symmetry_images();
        let mut image = Formal::pattern(k, m).substitute(&images);
        if image.decode() != Some((k, m)) {
            return Err(Error::InvalidSequence("symmetry moves the coefficient".into()));
        }
        image.add_scaled(&global, 1);
        let inverted = Substitution::inversion([VarId::T, VarId::L]).apply(&g)?;
        Ok((g, inverted.mul_monomial(1, &image.tl())))
    }

    /// `(1 - L^{-α}) / ((λ_α - 1)(1 - λ_α L^{-α}))`.
    fn first_prefactor(alpha: u64) -> Result<Rational, Error> {
        let a = alpha as i64;
        Ok(Rational::one_minus(&tl(0, -a))
            .mul(&Rational::one_minus_inv(&Monomial::var(lam(alpha)))?.neg())
            .mul(&Rational::one_minus_inv(&Monomial::from_pairs([(VarId::L, -a), (lam(alpha), 1)]))?))
    }

    fn higher_prefactor(alpha: u64, order: u32, form: HigherForm) -> Result<Rational, Error> {
        let a = alpha as i64;
        let body = Monomial::from_pairs([(VarId::L, -a), (lam(alpha), 1)]);
        let extra = Rational::one_minus_inv(&body)?.pow(order as i64 - 1)?;
        let base = Self::first_prefactor(alpha)?.mul(&extra);
        Ok(match form {
            HigherForm::Stated => base.mul_monomial(1, &tl(0, a * (order as i64 - 1))),
            HigherForm::Corrected => base
                .mul_monomial(1, &tl(0, -a * (order as i64 - 1)))
                .mul(&Rational::from_i64(factorial(order))),
        })
    }

    /// Right side of the first-derivative identity for the `(k, m)` coefficient.
    pub fn theorem4_first_rhs(&self, k: u64, m: u64, alpha: u64) -> Result<Rational, Error> {
        if !gcd(k, m).is_multiple_of(alpha) {
            return Ok(Rational::zero());
        }
        let sym = LambdaContext::symbolic();
        let h_aa = self.deformed.h_chain_sum(alpha, alpha, &sym)?;
        let tail = rescale_lambda(&self.deformed.h_chain_sum(k / alpha, m / alpha, &sym)?, alpha)?;
        Ok(Self::first_prefactor(alpha)?.mul(&h_aa).mul(&tail))
    }

    /// `∂H_{k,m}/∂λ_α` against the product formula, or against 0 when `α ∤ gcd(k, m)`.
    pub fn check_theorem4_first(&self, k: u64, m: u64, alpha: u64) -> Result<(Rational, Rational), Error> {
        if alpha < 2 {
            return Err(Error::InvalidSequence(format!("α must be at least 2, got {alpha}")));
        }
        let h = self.deformed.h_chain_sum(k, m, &LambdaContext::symbolic())?;
        Ok((h.derivative(lam(alpha)), self.theorem4_first_rhs(k, m, alpha)?))
    }

    /// Mixed derivative `∂^{k_1+..+k_n} H_{k,m} / ∂λ_{α_1}^{k_1}..∂λ_{α_n}^{k_n}`
    /// against the telescoping product formula in the given prefactor form.
    pub fn check_theorem4_higher(
        &self,
        k: u64,
        m: u64,
        alphas: &[u64],
        orders: &[u32],
        form: HigherForm,
    ) -> Result<(Rational, Rational), Error> {
        if alphas.is_empty() || alphas.len() != orders.len() {
            return Err(Error::InvalidSequence("α and order sequences must be nonempty and of equal length".into()));
        }
        if alphas[0] < 2 || alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSequence(format!("α sequence {alphas:?} is not strictly increasing from 2")));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidSequence("derivative orders must be positive".into()));
        }
        let sym = LambdaContext::symbolic();
        let mut lhs = self.deformed.h_chain_sum(k, m, &sym)?;
        for (&a, &o) in alphas.iter().zip(orders) {
            for _ in 0..o {
                lhs = lhs.derivative(lam(a));
            }
        }
        let last = *alphas.last().unwrap();
        let chained = alphas.windows(2).all(|w| w[1] % w[0] == 0);
        if !chained || !gcd(k, m).is_multiple_of(last) {
            return Ok((lhs, Rational::zero()));
        }
        let mut rhs = self.deformed.h_chain_sum(alphas[0], alphas[0], &sym)?;
        for (&a, &o) in alphas.iter().zip(orders) {
            rhs = rhs.mul(&Self::higher_prefactor(a, o, form)?);
        }
        for w in alphas.windows(2) {
            let q = w[1] / w[0];
            rhs = rhs.mul(&rescale_lambda(&self.deformed.h_chain_sum(q, q, &sym)?, w[0])?);
        }
        let tail = self.deformed.h_chain_sum(k / last, m / last, &sym)?;
        Ok((lhs, rhs.mul(&rescale_lambda(&tail, last)?)))
    }

    /// `Z_n(L, τ) = H_{n,n}(L; Aτ^2, Aτ^3, ...)`.
    pub fn z_value(&self, n: u64) -> Result<Rational, Error> {
        self.deformed.h_chain_sum(n, n, &LambdaContext::a_tau())
    }

    /// `α A τ^{α-1} (1 - L^{-α}) / ((Aτ^α - 1)(1 - Aτ^α L^{-α}))`.
    fn tau_prefactor(alpha: u64) -> Result<Rational, Error> {
        let a = alpha as i64;
        Ok(Rational::from_i64(a)
            .mul_monomial(1, &Monomial::from_pairs([(VarId::BigA, 1), (VarId::Tau, a - 1)]))
            .mul(&Rational::one_minus(&tl(0, -a)))
            .mul(&Rational::one_minus_inv(&a_tau(alpha))?.neg())
            .mul(&Rational::one_minus_inv(&a_tau(alpha).mul(&tl(0, -a)))?))
    }

    /// `∂Z_n/∂τ` against `sum_{α | n, α >= 2}` of the rescaled products.
    pub fn check_z_ode(&self, n: u64) -> Result<(Rational, Rational), Error> {
        let lhs = self.z_value(n)?.derivative(VarId::Tau);
        let mut terms = Vec::new();
        for alpha in divisors(n).into_iter().filter(|&a| a >= 2) {
            let tail = rescale_tau(&self.z_value(n / alpha)?, alpha)?;
            terms.push(Self::tau_prefactor(alpha)?.mul(&self.z_value(alpha)?).mul(&tail));
        }
        Ok((lhs, Rational::sum(terms.iter())))
    }

    /// The `a^k b^m` coefficient of the τ-derivative identity for the generating function.
    pub fn check_z_pde_coefficient(&self, k: u64, m: u64) -> Result<(Rational, Rational), Error> {
        let ctx = LambdaContext::a_tau();
        let lhs = self.deformed.h_chain_sum(k, m, &ctx)?.derivative(VarId::Tau);
        let mut terms = Vec::new();
        for alpha in divisors(gcd(k, m)).into_iter().filter(|&a| a >= 2) {
            let tail = self.deformed.h_chain_sum(k / alpha, m / alpha, &ctx)?;
            terms.push(
                Self::tau_prefactor(alpha)?
                    .mul(&self.z_value(alpha)?)
                    .mul(&rescale_tau(&tail, alpha)?),
            );
        }
        Ok((lhs, Rational::sum(terms.iter())))
    }

    /// `∂Z_n/∂τ` against `sum_α (∂H_{n,n}/∂λ_α)|_{λ_i = Aτ^i} · αAτ^{α-1}`,
    /// with each partial taken from the first-derivative product formula.
    pub fn chain_rule_sides(&self, n: u64) -> Result<(Rational, Rational), Error> {
        let ctx = LambdaContext::a_tau();
        let lhs = self.z_value(n)?.derivative(VarId::Tau);
        let mut terms = Vec::new();
        for alpha in 2..=n {
            let partial = ctx.apply(&self.theorem4_first_rhs(n, n, alpha)?)?;
            let a = alpha as i64;
            let dl = Rational::from_i64(a)
                .mul_monomial(1, &Monomial::from_pairs([(VarId::BigA, 1), (VarId::Tau, a - 1)]));
            terms.push(partial.mul(&dl));
        }
        Ok((lhs, Rational::sum(terms.iter())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(sides: (Rational, Rational)) -> bool {
        sides.0.eq_exact(&sides.1)
    }

    #[test]
    fn pattern_bookkeeping() {
        let [t1, t2, t3] = functional_eq_terms();
        let p = Formal::pattern(2, 3);
        let a = p.substitute(&t1);
        assert_eq!(a.decode(), Some((2, 5)));
        assert_eq!((a.t, a.l), (2, -2));
        let b = p.substitute(&t2);
        assert_eq!(b.decode(), Some((5, 2)));
        assert_eq!((b.t, b.l), (2, -2));
        let c = p.substitute(&t3);
        assert_eq!(c.decode(), Some((2, 2)));
        assert_eq!(Formal::pattern(2, 7).substitute(&t3), c);
    }

    #[test]
    fn functional_equation_small() {
        let s = Series::new();
        for (cell, lhs, rhs) in s.check_functional_eq(4).unwrap() {
            assert!(lhs.eq_exact(&rhs), "{cell:?}");
        }
        for k in 1..=4 {
            assert!(eq(s.diagonal_rowsum_sides(k).unwrap()), "k={k}");
        }
    }

    #[test]
    fn f_symmetry_matches_inversion() {
        let s = Series::new();
        for (k, m) in [(1, 1), (2, 3), (4, 6)] {
            assert!(eq(s.check_f_symmetry(k, m).unwrap()));
            assert!(s.milnor.symmetry_check(k, m).unwrap());
        }
    }

    #[test]
    fn first_derivative_examples() {
        let s = Series::new();
        let (lhs, rhs) = s.check_theorem4_first(2, 2, 2).unwrap();
        // L^-1 (1 - L^-2) / (1 - λ2 L^-2)^2
        let expect = Rational::one_minus(&tl(0, -2)).mul_monomial(1, &tl(0, -1)).mul(
            &Rational::one_minus_inv(&Monomial::from_pairs([(VarId::L, -2), (lam(2), 1)]))
                .unwrap()
                .pow(2)
                .unwrap(),
        );
        assert!(lhs.eq_exact(&expect));
        assert!(rhs.eq_exact(&expect));
        let (lhs, rhs) = s.check_theorem4_first(3, 5, 2).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
        assert!(eq(s.check_theorem4_first(4, 4, 2).unwrap()));
        assert!(eq(s.check_theorem4_first(6, 6, 3).unwrap()));
    }

    #[test]
    fn higher_derivative_forms() {
        let s = Series::new();
        for form in [HigherForm::Stated, HigherForm::Corrected] {
            assert!(eq(s.check_theorem4_higher(4, 4, &[2, 4], &[1, 1], form).unwrap()));
            let (lhs, rhs) = s.check_theorem4_higher(6, 6, &[2, 3], &[1, 1], form).unwrap();
            assert!(lhs.is_zero() && rhs.is_zero());
        }
        assert!(eq(s.check_theorem4_higher(4, 4, &[2], &[2], HigherForm::Corrected).unwrap()));
        assert!(!eq(s.check_theorem4_higher(4, 4, &[2], &[2], HigherForm::Stated).unwrap()));
        assert!(s.check_theorem4_higher(4, 4, &[4, 2], &[1, 1], HigherForm::Stated).is_err());
    }

    #[test]
    fn z_examples() {
        let s = Series::new();
        assert!(s.z_value(1).unwrap().is_one());
        // (Aτ^2 - 1) L^-1 / (1 - Aτ^2 L^-2)
        let expect = Rational::one_minus(&a_tau(2))
            .neg()
            .mul_monomial(1, &tl(0, -1))
            .mul(&Rational::one_minus_inv(&a_tau(2).mul(&tl(0, -2))).unwrap());
        assert!(s.z_value(2).unwrap().eq_exact(&expect));
        let norm = Substitution::new()
            .with(VarId::BigA, Image::var(VarId::L))
            .with(VarId::Tau, Image::one())
            .apply(&s.z_value(6).unwrap())
            .unwrap();
        assert!(norm.is_one());
        for n in [1, 2, 6] {
            assert!(eq(s.check_z_ode(n).unwrap()), "n={n}");
            assert!(eq(s.chain_rule_sides(n).unwrap()), "n={n}");
        }
        assert!(eq(s.check_z_pde_coefficient(2, 4).unwrap()));
        let (l, r) = s.check_z_pde_coefficient(3, 4).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }
}
