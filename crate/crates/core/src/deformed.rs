//! The λ-deformed integrals, where the diagonal factor `(L - 1)` becomes
//! `(λ_k - 1)`, and the t = 1 ratio `H_{k,m}`.
//!
//! Everything is computed with symbolic `λ_i` and specialized afterwards
//! by substitution through a [`LambdaContext`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use serde_json::Value;

use crate::error::Error;
use crate::milnor::{check_orders, g11, l_minus_one, mono, tl};
use crate::monomial::Monomial;
use crate::numtheory::{divisors, enumerate_chain_tuples, gcd, mobius};
use crate::subst::{substitute_with, Image, Substitution};
use crate::var::VarId;
use crate::{Rational, Subst};

/// What an unlisted `λ_i` becomes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Fallback {
    #[default]
    Symbolic,
    /// `λ_i = L`, the undeformed system.
    EqualsL,
    /// `λ_i = A τ^i`.
    ATauPow,
}

/// A specialization of the deformation parameters. `λ_1` is always `L`
/// and is never represented.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LambdaContext {
    fallback: Fallback,
    overrides: BTreeMap<u32, Image<crate::Coeff>>,
}

impl LambdaContext {
    pub fn symbolic() -> Self {
        Self::default()
    }

    pub fn all_l() -> Self {
        LambdaContext { fallback: Fallback::EqualsL, overrides: BTreeMap::new() }
    }

    pub fn a_tau() -> Self {
        LambdaContext { fallback: Fallback::ATauPow, overrides: BTreeMap::new() }
    }

    pub fn with(mut self, i: u32, img: Image<crate::Coeff>) -> Result<Self, Error> {
        VarId::lam(i)?;
        self.overrides.insert(i, img);
        Ok(self)
    }

    pub fn fallback(&self) -> &Fallback {
        &self.fallback
    }

    pub fn is_symbolic(&self) -> bool {
        self.fallback == Fallback::Symbolic && self.overrides.is_empty()
    }

    /// Image of `λ_i`, or `None` when it stays symbolic.
    pub fn image(&self, i: u32) -> Option<Image<crate::Coeff>> {
        if let Some(img) = self.overrides.get(&i) {
            return Some(img.clone());
        }
        match self.fallback {
            Fallback::Symbolic => None,
            Fallback::EqualsL => Some(Image::var(VarId::L)),
            Fallback::ATauPow => Some(Image::mono(Monomial::from_pairs([
                (VarId::BigA, 1),
                (VarId::Tau, i as i64),
            ]))),
        }
    }

    /// Specializes every `λ_i` in `x`.
    pub fn apply(&self, x: &Rational) -> Result<Rational, Error> {
        if self.is_symbolic() {
            return Ok(x.clone());
        }
        substitute_with(x, |v| match v {
            VarId::Lam(i) => self.image(i),
            _ => None,
        })
    }

    /// Parses `{"lam": {"2": "L", "4": "A*tau^4"}, "default": "symbolic"}`.
    /// `default` may be `"symbolic"`, `"L"` or `"A*tau^i"`.
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("lambda spec must be an object".into()))?;
        let mut ctx = LambdaContext::symbolic();
        for key in obj.keys() {
            if key != "lam" && key != "default" {
                return Err(Error::Parse(format!("unknown lambda spec key '{key}'")));
            }
        }
        if let Some(d) = obj.get("default") {
            ctx.fallback = match d.as_str() {
                Some("symbolic") => Fallback::Symbolic,
                Some("L") => Fallback::EqualsL,
                Some("A*tau^i") => Fallback::ATauPow,
                _ => return Err(Error::Parse(format!("unknown lambda default {d}"))),
            };
        }
        if let Some(lam) = obj.get("lam") {
            let lam = lam
                .as_object()
                .ok_or_else(|| Error::Parse("'lam' must be an object".into()))?;
            for (k, e) in lam {
                let i: u32 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("lambda index '{k}' is not an integer")))?;
                let text = e
                    .as_str()
                    .ok_or_else(|| Error::Parse(format!("lambda {i} must be a string")))?;
                let (sign, m) = parse_signed_monomial(text)?;
                ctx = ctx.with(i, Image::Monomial { sign, mono: m })?;
            }
        }
        Ok(ctx)
    }
}

/// Parses `[+-] factor (* factor)*` where a factor is `1` or a variable
/// name with an optional integer exponent, e.g. `-A*tau^4` or `L^-2`.
pub fn parse_signed_monomial(s: &str) -> Result<(i8, Monomial), Error> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut pairs = Vec::new();
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor == "1" {
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
            ),
            None => (factor, 1),
        };
        let v: VarId = name.parse()?;
        pairs.push((v, exp));
    }
    if pairs.is_empty() && body.trim() != "1" {
        return Err(Error::Parse(format!("empty monomial '{s}'")));
    }
    Ok((sign, Monomial::from_pairs(pairs)))
}

fn lam_minus_one(a: u64) -> Rational {
    Rational::one_minus(&Monomial::var(VarId::Lam(a as u32))).neg()
}

fn lam_mono(a: u64, t: i64, l: i64) -> Monomial {
    Monomial::from_pairs([(VarId::T, t), (VarId::L, l), (VarId::Lam(a as u32), 1)])
}

/// Memoized evaluator for the deformed integrals with symbolic `λ_i`.
#[derive(Default)]
pub struct Deformed {
    recurrence: Mutex<HashMap<(u64, u64), Rational>>,
    theorem3: Mutex<HashMap<(u64, u64), Rational>>,
    h: Mutex<HashMap<u64, Rational>>,
}

fn cached<K: std::hash::Hash + Eq + Copy>(
    cache: &Mutex<HashMap<K, Rational>>,
    key: K,
    f: impl FnOnce() -> Result<Rational, Error>,
) -> Result<Rational, Error> {
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = f()?;
    cache.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

impl Deformed {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(λ_k - 1) t^{k(k-1)} L^{-k} / (1 - λ_k t^{k(k-1)} L^{-k})`.
    fn diag_prefactor(k: u64) -> Result<Rational, Error> {
        let ki = k as i64;
        let e = ki * (ki - 1);
        Ok(lam_minus_one(k)
            .mul_monomial(1, &tl(e, -ki))
            .mul(&Rational::one_minus_inv(&lam_mono(k, e, -ki))?))
    }

    fn recurrence_symbolic(&self, k: u64, m: u64) -> Result<Rational, Error> {
        let (k, m) = if k > m { (m, k) } else { (k, m) };
        cached(&self.recurrence, (k, m), || {
            if k == 1 && m == 1 {
                return Ok(g11());
            }
            let ki = k as i64;
            if m > k {
                let inner = self.recurrence_symbolic(k, m - k)?;
                return Ok(inner.mul_monomial(1, &tl(ki * (ki - 1), -ki)));
            }
            let lower: Vec<Rational> = (1..k)
                .map(|j| self.recurrence_symbolic(k, j))
                .collect::<Result<_, _>>()?;
            Ok(Self::diag_prefactor(k)?.mul(&Rational::sum(lower.iter())))
        })
    }

    /// `G_{k,m}(t, L; λ)` from the deformed recurrences.
    pub fn g_def_recurrence(&self, k: u64, m: u64, ctx: &LambdaContext) -> Result<Rational, Error> {
        check_orders(k, m)?;
        ctx.apply(&self.recurrence_symbolic(k, m)?)
    }

    /// One chain step `b | a`; with `with_t = false` every power of `t` is dropped.
    fn step(b: u64, a: u64, with_t: bool) -> Result<Rational, Error> {
        let (bi, ai) = (b as i64, a as i64);
        let w = |e: i64| if with_t { e } else { 0 };
        Ok(lam_minus_one(a)
            .mul_monomial(1, &tl(w((ai - 1) * bi), -bi))
            .mul(&Rational::one_minus(&tl(w((ai - 1) * (ai - bi)), bi - ai)))
            .mul(&Rational::one_minus_inv(&lam_mono(a, w(ai * (ai - 1)), -ai))?)
            .mul(&Rational::one_minus_inv(&tl(w((ai - 1) * bi), -bi))?))
    }

    fn chain_sum(a: u64, with_t: bool) -> Result<Rational, Error> {
        let mut steps: HashMap<(u64, u64), Rational> = HashMap::new();
        let mut parts: Vec<(i64, Rational)> = Vec::new();
        for tuple in enumerate_chain_tuples(a) {
            let mut sign = 1;
            let mut term = Rational::one();
            for (prev, b, next) in tuple.steps() {
                sign *= mobius(b / prev);
                if sign == 0 {
                    break;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = steps.entry((b, next)) {
                    e.insert(Self::step(b, next, with_t)?);
                }
                term = term.mul(&steps[&(b, next)]);
            }
            if sign != 0 {
                parts.push((sign, term));
            }
        }
        Ok(Rational::linear_combination(parts.iter().map(|(w, x)| (*w, x))))
    }

    /// `G_{k,m}(t, L; λ)` from the closed chain-tuple formula.
    pub fn g_def_theorem3(&self, k: u64, m: u64, ctx: &LambdaContext) -> Result<Rational, Error> {
        check_orders(k, m)?;
        let (k, m) = if k > m { (m, k) } else { (k, m) };
        let g = cached(&self.theorem3, (k, m), || {
            let (ki, mi) = (k as i64, m as i64);
            Ok(l_minus_one()
                .mul(&l_minus_one())
                .mul_monomial(1, &tl((ki - 1) * (mi - 1), -ki - mi))
                .mul(&Self::chain_sum(gcd(k, m), true)?))
        })?;
        ctx.apply(&g)
    }

    /// `H_{k,m}(L; λ)` as the t = 1 chain sum. Depends only on `gcd(k, m)`.
    pub fn h_chain_sum(&self, k: u64, m: u64, ctx: &LambdaContext) -> Result<Rational, Error> {
        check_orders(k, m)?;
        let a = gcd(k, m);
        let h = cached(&self.h, a, || Self::chain_sum(a, false))?;
        ctx.apply(&h)
    }

    /// `H_{k,m}` as the ratio of the deformed and undeformed values at t = 1.
    pub fn h_from_definition(&self, k: u64, m: u64, ctx: &LambdaContext) -> Result<Rational, Error> {
        let at_t1 = Substitution::new().with(VarId::T, Image::one());
        let g = self.g_def_theorem3(k, m, &LambdaContext::symbolic())?;
        let num = ctx.apply(&at_t1.apply(&g)?)?;
        let den = LambdaContext::all_l().apply(&at_t1.apply(&g)?)?;
        num.div(&den)
    }

    /// Closed form at t = 1, `(L-1)^2 L^{-k-m} H_{k,m}`.
    pub fn g_def_t1(&self, k: u64, m: u64, ctx: &LambdaContext) -> Result<Rational, Error> {
        let h = self.h_chain_sum(k, m, ctx)?;
        Ok(g11().mul_monomial(1, &tl(0, 2 - k as i64 - m as i64)).mul(&h))
    }

    /// Both sides of
    /// `G(t^{-1}, L^{-1}, λ^{-1}) = t^{-2(k-1)(m-1)} L^{2k+2m-2} G(t, L, λ)`.
    pub fn symmetry_def_sides(&self, k: u64, m: u64) -> Result<(Rational, Rational), Error> {
        let g = self.g_def_recurrence(k, m, &LambdaContext::symbolic())?;
        let lhs = Subst::inversion(g.vars()).apply(&g)?;
        let (ki, mi) = (k as i64, m as i64);
        let rhs = g.mul_monomial(1, &tl(-2 * (ki - 1) * (mi - 1), 2 * ki + 2 * mi - 2));
        Ok((lhs, rhs))
    }

    pub fn symmetry_def_check(&self, k: u64, m: u64) -> Result<bool, Error> {
        let (lhs, rhs) = self.symmetry_def_sides(k, m)?;
        Ok(lhs.eq_exact(&rhs))
    }
}

/// Indices `d >= 2` with `d | gcd(k, m)`: the only `λ_d` that may occur in `G_{k,m}`.
pub fn lambda_support(k: u64, m: u64) -> BTreeSet<u32> {
    divisors(gcd(k, m)).into_iter().filter(|&d| d >= 2).map(|d| d as u32).collect()
}

/// The `λ` indices occurring in `x`.
pub fn lambda_indices(x: &Rational) -> BTreeSet<u32> {
    x.vars()
        .into_iter()
        .filter_map(|v| match v {
            VarId::Lam(i) => Some(i),
            _ => None,
        })
        .collect()
}

/// `(L-1)^2 L^{-k-m}` with a `t^{(k-1)(m-1)}` prefactor: the value for coprime orders.
pub fn coprime_value(k: u64, m: u64) -> Rational {
    let (ki, mi) = (k as i64, m as i64);
    g11().mul(&mono((ki - 1) * (mi - 1), 2 - ki - mi))
}
