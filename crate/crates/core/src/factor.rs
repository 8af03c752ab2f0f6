use std::fmt;

use crate::monomial::Monomial;

/// A denominator factor `1 - body` in canonical orientation: the first
/// nonzero exponent of `body` (in variable order) is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonFactor {
    body: Monomial,
}

/// Result of orienting a binomial `1 - m`: `1 - m = sign * unit * (1 - body)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oriented {
    pub sign: i8,
    pub unit: Monomial,
    pub factor: CanonFactor,
}

impl CanonFactor {
    /// Orients `1 - m`. Returns `None` when `m` is the unit monomial.
    pub fn orient(m: &Monomial) -> Option<Oriented> {
        let (_, e) = m.leading_exp()?;
        Some(if e > 0 {
            Oriented {
                sign: 1,
                unit: Monomial::one(),
                factor: CanonFactor { body: m.clone() },
            }
        } else {
            // 1 - m = (-m) * (1 - m^{-1})
            Oriented {
                sign: -1,
                unit: m.clone(),
                factor: CanonFactor { body: m.inv() },
            }
        })
    }

    /// The factor `1 - m` for an `m` already known to be canonical.
    pub fn new(m: Monomial) -> Option<CanonFactor> {
        match m.leading_exp() {
            Some((_, e)) if e > 0 => Some(CanonFactor { body: m }),
            _ => None,
        }
    }

    pub fn body(&self) -> &Monomial {
        &self.body
    }

    /// Expresses `1 - body^{-1}` against this factor:
    /// `1 - m^{-1} = (-m^{-1}) * (1 - m)`.
    pub fn inverse_binomial(&self) -> Oriented {
        Oriented {
            sign: -1,
            unit: self.body.inv(),
            factor: self.clone(),
        }
    }
}

impl fmt::Display for CanonFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 - {})", self.body)
    }
}

impl fmt::Debug for CanonFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
