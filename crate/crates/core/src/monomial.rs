use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::var::VarId;

/// A Laurent monomial: a finite product of variables raised to nonzero
/// integer powers. Entries are sorted by [`VarId`] and never hold a zero
/// exponent, so the empty monomial is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(VarId, i64); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: i64) -> Self {
        let mut exps = SmallVec::new();
        if e != 0 {
            exps.push((v, e));
        }
        Monomial { exps }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i64)>>(pairs: I) -> Self {
        let mut v: Vec<(VarId, i64)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut exps: SmallVec<[(VarId, i64); 4]> = SmallVec::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        exps.retain(|p| p.1 != 0);
        Monomial { exps }
    }

    /// `t^a L^b`, the shape that dominates the undeformed integrals.
    pub fn tl(t: i64, l: i64) -> Self {
        Monomial::from_pairs([(VarId::T, t), (VarId::L, l)])
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp(&self, v: VarId) -> i64 {
        self.exps
            .iter()
            .find(|p| p.0 == v)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i64)> + '_ {
        self.exps.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|p| p.0)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.exps.iter().any(|p| p.0 == v)
    }

    /// The first exponent in variable order, if any.
    pub fn leading_exp(&self) -> Option<(VarId, i64)> {
        self.exps.first().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out: SmallVec<[(VarId, i64); 4]> = SmallVec::new();
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, n: i64) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * n)).collect(),
        }
    }

    /// Drops `v` from the monomial, returning its exponent.
    pub fn without(&self, v: VarId) -> (Monomial, i64) {
        let e = self.exp(v);
        let exps = self.exps.iter().copied().filter(|p| p.0 != v).collect();
        (Monomial { exps }, e)
    }

    /// Componentwise minimum of exponents; missing variables count as zero.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(VarId, i64)> = Vec::new();
        for &(v, e) in self.exps.iter() {
            pairs.push((v, e.min(other.exp(v))));
        }
        for &(v, e) in other.exps.iter() {
            if !self.contains(v) {
                pairs.push((v, e.min(0)));
            }
        }
        Monomial::from_pairs(pairs)
    }

    /// Map every variable through `f`; exponents of colliding images add up.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }

    pub(crate) fn fmt_with(
        &self,
        f: &mut impl fmt::Write,
        name: impl Fn(VarId) -> String,
        mul: &str,
        pow: impl Fn(i64) -> String,
    ) -> fmt::Result {
        for (i, &(v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str(mul)?;
            }
            f.write_str(&name(v))?;
            if e != 1 {
                f.write_str(&pow(e))?;
            }
        }
        Ok(())
    }

    pub fn latex(&self) -> String {
        let mut s = String::new();
        self.fmt_with(&mut s, |v| v.latex(), "", |e| format!("^{{{e}}}"))
            .unwrap();
        s
    }
}

impl Ord for Monomial {
    /// Lexicographic on the dense exponent vector in variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut s = String::new();
        self.fmt_with(&mut s, |v| v.name(), "*", |e| format!("^{e}"))?;
        f.write_str(&s)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_cancels_to_unit() {
        let m = Monomial::tl(2, -3);
        assert!(m.mul(&m.inv()).is_one());
        assert_eq!(m.mul(&Monomial::one()), m);
    }

    #[test]
    fn order_is_lex_on_dense_vectors() {
        // t > L^100 because t comes first
        assert!(Monomial::var(VarId::T) > Monomial::var_pow(VarId::L, 100));
        assert!(Monomial::var_pow(VarId::L, -1) < Monomial::one());
        assert!(Monomial::tl(1, -5) > Monomial::tl(0, 5));
        assert!(Monomial::var(VarId::Lam(2)) > Monomial::one());
        assert!(Monomial::var(VarId::Lam(2)) < Monomial::var(VarId::L));
    }

    #[test]
    fn order_is_translation_invariant() {
        let a = Monomial::tl(3, -1);
        let b = Monomial::tl(2, 7);
        let s = Monomial::from_pairs([(VarId::L, -4), (VarId::Lam(3), 2)]);
        assert_eq!(a.cmp(&b), a.mul(&s).cmp(&b.mul(&s)));
    }

    #[test]
    fn gcd_takes_minimum_with_implicit_zero() {
        let a = Monomial::tl(3, -1);
        let b = Monomial::var_pow(VarId::L, 2);
        assert_eq!(a.gcd(&b), Monomial::tl(0, -1));
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::tl(2, -5).to_string(), "t^2*L^-5");
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(Monomial::tl(0, -2).latex(), "\\mathbb{L}^{-2}");
    }
}
