//! Substitution homomorphisms.
//!
//! When every image is a signed monomial, binomial factors map to binomial
//! factors and nothing is expanded. Rational images go through the general
//! field operations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::factor::CanonFactor;
use crate::monomial::Monomial;
use crate::poly::LaurentPoly;
use crate::rational::FactoredRational;
use crate::scalar::Coefficient;
use crate::var::VarId;

#[derive(Clone, PartialEq)]
pub enum Image<C> {
    Monomial { sign: i8, mono: Monomial },
    Rational(FactoredRational<C>),
}

impl<C: Coefficient> Image<C> {
    pub fn mono(m: Monomial) -> Self {
        Image::Monomial { sign: 1, mono: m }
    }

    pub fn var(v: VarId) -> Self {
        Image::mono(Monomial::var(v))
    }

    pub fn one() -> Self {
        Image::mono(Monomial::one())
    }

    pub fn to_rational(&self) -> FactoredRational<C> {
        match self {
            Image::Monomial { sign, mono } => FactoredRational::from_monomial(*sign, mono.clone()),
            Image::Rational(r) => r.clone(),
        }
    }
}

/// A finite substitution `VarId -> Image`. Unmapped variables are fixed.
#[derive(Clone, PartialEq)]
pub struct Substitution<C> {
    map: BTreeMap<VarId, Image<C>>,
}

impl<C: Coefficient> fmt::Debug for Image<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Monomial { sign, mono } => {
                if *sign < 0 {
                    f.write_str("-")?;
                }
                write!(f, "{mono}")
            }
            Image::Rational(r) => write!(f, "{r:?}"),
        }
    }
}

impl<C: Coefficient> fmt::Debug for Substitution<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

impl<C: Coefficient> Default for Substitution<C> {
    fn default() -> Self {
        Substitution::new()
    }
}

impl<C: Coefficient> Substitution<C> {
    pub fn new() -> Self {
        Substitution { map: BTreeMap::new() }
    }

    pub fn with(mut self, v: VarId, img: Image<C>) -> Self {
        self.map.insert(v, img);
        self
    }

    pub fn insert(&mut self, v: VarId, img: Image<C>) {
        self.map.insert(v, img);
    }

    pub fn get(&self, v: VarId) -> Option<&Image<C>> {
        self.map.get(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `(t, L) -> (t^{-1}, L^{-1})`, plus every listed variable inverted.
    pub fn inversion(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut s = Substitution::new();
        for v in vars {
            s.insert(v, Image::mono(Monomial::var_pow(v, -1)));
        }
        s
    }

    pub fn apply(&self, x: &FactoredRational<C>) -> Result<FactoredRational<C>, Error> {
        substitute_with(x, |v| self.map.get(&v).cloned())
    }
}

/// Applies the substitution given by `image` to every variable of `x`;
/// `None` leaves the variable fixed.
pub fn substitute_with<C: Coefficient>(
    x: &FactoredRational<C>,
    image: impl Fn(VarId) -> Option<Image<C>>,
) -> Result<FactoredRational<C>, Error> {
    let mut map: BTreeMap<VarId, Image<C>> = BTreeMap::new();
    for v in x.vars() {
        if let Some(img) = image(v) {
            if let Image::Rational(r) = &img {
                if r.is_zero() {
                    return Err(Error::ZeroSubstitution(v));
                }
            }
            map.insert(v, img);
        }
    }
    if map.is_empty() || x.is_zero() {
        return Ok(x.clone());
    }
    if map.values().all(|i| matches!(i, Image::Monomial { .. })) {
        monomial_path(x, &map)
    } else {
        general_path(x, &map)
    }
}

fn image_of_monomial<C>(m: &Monomial, map: &BTreeMap<VarId, Image<C>>) -> (i8, Monomial) {
    let mut sign = 1i8;
    let mut pairs: Vec<(VarId, i64)> = Vec::new();
    for (v, e) in m.iter() {
        match map.get(&v) {
            Some(Image::Monomial { sign: s, mono }) => {
                if *s < 0 && e % 2 != 0 {
                    sign = -sign;
                }
                pairs.extend(mono.iter().map(|(w, f)| (w, f * e)));
            }
            _ => pairs.push((v, e)),
        }
    }
    (sign, Monomial::from_pairs(pairs))
}

fn monomial_path<C: Coefficient>(
    x: &FactoredRational<C>,
    map: &BTreeMap<VarId, Image<C>>,
) -> Result<FactoredRational<C>, Error> {
    let num = LaurentPoly::from_terms(x.num().terms().iter().map(|(m, c)| {
        let (s, m2) = image_of_monomial(m, map);
        (m2, if s < 0 { -c.clone() } else { c.clone() })
    }));
    let (us, mut unit) = image_of_monomial(x.unit(), map);
    let mut sign = x.sign() * us;
    let mut extra = LaurentPoly::one();
    let mut den: BTreeMap<CanonFactor, u32> = BTreeMap::new();
    for (f, &e) in x.den().iter() {
        let (s, b) = image_of_monomial(f.body(), map);
        if b.is_one() {
            return Err(if s > 0 {
                Error::DivisionByZero
            } else {
                Error::ConstantDenominator(2)
            });
        }
        let body = if s > 0 {
            b
        } else {
            // 1/(1 + b) = (1 - b)/(1 - b^2)
            for _ in 0..e {
                extra = extra.mul_one_minus(&b);
            }
            b.pow(2)
        };
        let o = CanonFactor::orient(&body).expect("nonunit body");
        if o.sign < 0 && e % 2 == 1 {
            sign = -sign;
        }
        unit = unit.mul(&o.unit.inv().pow(e as i64));
        *den.entry(o.factor).or_insert(0) += e;
    }
    Ok(FactoredRational::from_parts(
        sign,
        unit,
        num.mul_ref(&extra),
        den,
    ))
}

fn general_path<C: Coefficient>(
    x: &FactoredRational<C>,
    map: &BTreeMap<VarId, Image<C>>,
) -> Result<FactoredRational<C>, Error> {
    let mono_value = |m: &Monomial| -> Result<FactoredRational<C>, Error> {
        let mut acc = FactoredRational::one();
        let mut rest: Vec<(VarId, i64)> = Vec::new();
        for (v, e) in m.iter() {
            match map.get(&v) {
                Some(img) => acc = acc.mul(&img.to_rational().pow(e)?),
                None => rest.push((v, e)),
            }
        }
        Ok(acc.mul_monomial(1, &Monomial::from_pairs(rest)))
    };
    let mut terms: Vec<FactoredRational<C>> = Vec::with_capacity(x.num().len());
    for (m, c) in x.num().terms() {
        let t = mono_value(m)?;
        terms.push(t.mul(&FactoredRational::from_poly(LaurentPoly::constant(c.clone()))));
    }
    let mut out = FactoredRational::sum(terms.iter());
    out = out.mul(&mono_value(x.unit())?);
    if x.sign() < 0 {
        out = out.neg();
    }
    for (f, &e) in x.den().iter() {
        let d = FactoredRational::one().sub(&mono_value(f.body())?);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        out = out.mul(&d.pow(-(e as i64))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type R = FactoredRational<BigInt>;

    fn g11() -> R {
        R::var(VarId::L)
            .sub(&R::one())
            .pow(2)
            .unwrap()
            .mul_monomial(1, &Monomial::tl(0, -2))
    }

    #[test]
    fn invert_l_in_base_value() {
        let s = Substitution::inversion([VarId::L]);
        let got = s.apply(&g11()).unwrap();
        // (L^-1 - 1)^2 L^2 = (L - 1)^2
        let expect = R::var(VarId::L).sub(&R::one()).pow(2).unwrap();
        assert!(got.eq_exact(&expect));
        assert_eq!(got, expect);
    }

    #[test]
    fn empty_substitution_is_identity() {
        let x = g11().mul(&R::one_minus_inv(&Monomial::tl(2, -1)).unwrap());
        assert_eq!(Substitution::new().apply(&x).unwrap(), x);
    }

    #[test]
    fn lambda_to_l() {
        let m = Monomial::from_pairs([(VarId::Lam(2), 1), (VarId::L, -2)]);
        let x = R::one_minus(&m);
        let s = Substitution::new().with(VarId::Lam(2), Image::var(VarId::L));
        let got = s.apply(&x).unwrap();
        assert!(got.eq_exact(&R::one_minus(&Monomial::tl(0, -1))));
    }

    #[test]
    fn denominator_vanishing_is_an_error() {
        let x = R::one_minus_inv(&Monomial::tl(1, 0)).unwrap();
        let s = Substitution::new().with(VarId::T, Image::one());
        assert_eq!(s.apply(&x), Err(Error::DivisionByZero));
        let s = Substitution::new().with(VarId::T, Image::Monomial { sign: -1, mono: Monomial::one() });
        assert_eq!(s.apply(&x), Err(Error::ConstantDenominator(2)));
        let s = Substitution::new().with(VarId::T, Image::Rational(R::zero()));
        assert_eq!(s.apply(&x), Err(Error::ZeroSubstitution(VarId::T)));
    }

    #[test]
    fn negative_monomial_image_in_denominator() {
        // 1/(1 - t) with t -> -L gives 1/(1 + L)
        let x = R::one_minus_inv(&Monomial::tl(1, 0)).unwrap();
        let s = Substitution::new().with(VarId::T, Image::Monomial { sign: -1, mono: Monomial::var(VarId::L) });
        let got = s.apply(&x).unwrap();
        let onep = R::one().add(&R::var(VarId::L));
        assert!(got.mul(&onep).is_one());
    }

    #[test]
    fn rational_image_matches_monomial_image() {
        let x = g11().mul(&R::one_minus_inv(&Monomial::tl(2, -1)).unwrap());
        let a = Substitution::new().with(VarId::L, Image::mono(Monomial::var_pow(VarId::L, 3))).apply(&x).unwrap();
        let b = Substitution::new()
            .with(VarId::L, Image::Rational(R::from_monomial(1, Monomial::var_pow(VarId::L, 3))))
            .apply(&x)
            .unwrap();
        assert!(a.eq_exact(&b));
    }
}
