//! Equality testing for rational functions: exact cross-multiplication, or
//! randomized evaluation over a prime field.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::FactoredRational;
use crate::scalar::{Coefficient, Lift, ModP, MODULUS};
use crate::var::VarId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqMode {
    Exact,
    Modp,
}

/// Trials used by default in the randomized path.
pub const DEFAULT_TRIALS: usize = 20;

pub fn rat_eq_exact<C: Coefficient>(x: &FactoredRational<C>, y: &FactoredRational<C>) -> bool {
    x.eq_exact(y)
}

/// Compares `x` and `y` at `trials` random points of the prime field.
///
/// Never reports `false` for equal functions. Points where any denominator
/// factor vanishes are redrawn; more than `100 * trials` consecutive
/// redraws is an error.
pub fn rat_eq_modp<C>(
    x: &FactoredRational<C>,
    y: &FactoredRational<C>,
    trials: usize,
    seed: u64,
) -> Result<bool, Error>
where
    C: Coefficient + Lift<ModP>,
{
    let vars: Vec<VarId> = x
        .vars()
        .union(&y.vars())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = 100 * trials.max(1);
    let mut done = 0;
    let mut degenerate = 0;
    while done < trials {
        let point: Vec<(VarId, ModP)> = vars
            .iter()
            .map(|&v| (v, ModP::new(rng.gen_range(1..MODULUS))))
            .collect();
        let value = |v: VarId| {
            point
                .iter()
                .find(|p| p.0 == v)
                .map(|p| p.1)
                .unwrap_or_else(|| ModP::new(1))
        };
        match (x.eval(&value), y.eval(&value)) {
            (Some(a), Some(b)) => {
                degenerate = 0;
                done += 1;
                if a != b {
                    return Ok(false);
                }
            }
            _ => {
                degenerate += 1;
                if degenerate > limit {
                    return Err(Error::DegeneratePoint(degenerate));
                }
            }
        }
    }
    Ok(true)
}

/// Equality under the chosen mode. The randomized path treats exhaustion of
/// evaluation points as inequality.
pub fn rat_eq<C>(x: &FactoredRational<C>, y: &FactoredRational<C>, mode: EqMode, seed: u64) -> bool
where
    C: Coefficient + Lift<ModP>,
{
    match mode {
        EqMode::Exact => x.eq_exact(y),
        EqMode::Modp => rat_eq_modp(x, y, DEFAULT_TRIALS, seed).unwrap_or(false),
    }
}
