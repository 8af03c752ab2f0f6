use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The variables that can occur in a value.
///
/// The derived ordering is the canonical one used for monomial ordering and
/// factor orientation: `T < L < Lam(2) < Lam(3) < ... < BigA < Tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    /// The Milnor-number parameter `t`.
    T,
    /// The class of the affine line.
    L,
    /// Deformation parameter `λ_i`, `i >= 2`.
    Lam(u32),
    /// Amplitude of the power-law specialization `λ_j = A τ^j`.
    BigA,
    Tau,
}

impl VarId {
    pub fn lam(i: u32) -> Result<VarId, Error> {
        if i < 2 {
            return Err(Error::InvalidVariable(format!("lam{i}")));
        }
        Ok(VarId::Lam(i))
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn latex(&self) -> String {
        match self {
            VarId::T => "t".into(),
            VarId::L => "\\mathbb{L}".into(),
            VarId::Lam(i) => format!("\\lambda_{{{i}}}"),
            VarId::BigA => "A".into(),
            VarId::Tau => "\\tau".into(),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::T => f.write_str("t"),
            VarId::L => f.write_str("L"),
            VarId::Lam(i) => write!(f, "lam{i}"),
            VarId::BigA => f.write_str("A"),
            VarId::Tau => f.write_str("tau"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" => Ok(VarId::T),
            "L" => Ok(VarId::L),
            "A" => Ok(VarId::BigA),
            "tau" => Ok(VarId::Tau),
            _ => {
                let idx = s
                    .strip_prefix("lam")
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidVariable(s.to_string()))?;
                VarId::lam(idx)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_canonical() {
        let mut v = vec![
            VarId::Tau,
            VarId::Lam(10),
            VarId::BigA,
            VarId::L,
            VarId::Lam(2),
            VarId::T,
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                VarId::T,
                VarId::L,
                VarId::Lam(2),
                VarId::Lam(10),
                VarId::BigA,
                VarId::Tau
            ]
        );
    }

    #[test]
    fn names_roundtrip() {
        for v in [VarId::T, VarId::L, VarId::Lam(7), VarId::BigA, VarId::Tau] {
            assert_eq!(v.name().parse::<VarId>().unwrap(), v);
        }
        assert!("lam1".parse::<VarId>().is_err());
        assert!("x".parse::<VarId>().is_err());
    }
}
