//! Verification driver: named identities evaluated over index cells, with a
//! deterministic JSON report.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::deformed::{coprime_value, lambda_indices, lambda_support, LambdaContext};
use crate::error::Error;
use crate::format::to_json_value;
use crate::identity::{rat_eq_modp, EqMode, DEFAULT_TRIALS};
use crate::milnor::{cylinder_measure, Route, SRoute};
use crate::monomial::Monomial;
use crate::numtheory::{divisors, gcd};
use crate::poly::LaurentPoly;
use crate::series::{HigherForm, Series};
use crate::subst::{Image, Substitution};
use crate::var::VarId;
use crate::{Coeff, Rational};

/// What a single cell asserts.
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    /// Two exact values that must be equal.
    Equal(Rational, Rational),
    /// A structural property; the string describes a violation.
    Holds(bool, String),
}

type Eval = fn(&Series, &[u64]) -> Result<Outcome, Error>;

/// One named identity and the cells it is checked on.
pub struct Identity {
    pub name: &'static str,
    /// Not stated as such in the source material; follows from it.
    pub derived: bool,
    pub note: Option<&'static str>,
    pub cells: Vec<Vec<u64>>,
    eval: Eval,
}

impl Identity {
    fn new(name: &'static str, cells: Vec<Vec<u64>>, eval: Eval) -> Self {
        Identity { name, derived: false, note: None, cells, eval }
    }

    fn derived(mut self, note: &'static str) -> Self {
        self.derived = true;
        self.note = Some(note);
        self
    }

    fn noted(mut self, note: &'static str) -> Self {
        self.note = Some(note);
        self
    }

    pub fn evaluate(&self, s: &Series, cell: &[u64]) -> Result<Outcome, Error> {
        (self.eval)(s, cell)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Routes,
    Symmetry,
    SLemma,
    Measure,
    FunctionalEq,
    Deformed,
    Theorem4,
    ZOde,
}

impl Suite {
    /// Every concrete suite, in report order.
    pub const EACH: [Suite; 8] = [
        Suite::Routes,
        Suite::Symmetry,
        Suite::SLemma,
        Suite::Measure,
        Suite::FunctionalEq,
        Suite::Deformed,
        Suite::Theorem4,
        Suite::ZOde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Routes => "routes",
            Suite::Symmetry => "symmetry",
            Suite::SLemma => "s-lemma",
            Suite::Measure => "measure",
            Suite::FunctionalEq => "functional-eq",
            Suite::Deformed => "deformed",
            Suite::Theorem4 => "theorem4",
            Suite::ZOde => "z-ode",
        }
    }

    pub fn identities(self, n: u64) -> Vec<Identity> {
        match self {
            Suite::All => Suite::EACH.iter().flat_map(|s| s.identities(n)).collect(),
            Suite::Routes => routes(n),
            Suite::Symmetry => symmetry(n),
            Suite::SLemma => s_lemma(n),
            Suite::Measure => measure(n),
            Suite::FunctionalEq => functional_eq(n),
            Suite::Deformed => deformed(n),
            Suite::Theorem4 => theorem4(n),
            Suite::ZOde => z_ode(n),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [Suite::All]
            .into_iter()
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

fn pairs(n: u64) -> Vec<Vec<u64>> {
    (1..=n).flat_map(|k| (1..=n).map(move |m| vec![k, m])).collect()
}

fn singles(n: u64) -> Vec<Vec<u64>> {
    (1..=n).map(|k| vec![k]).collect()
}

fn eq(pair: (Rational, Rational)) -> Outcome {
    Outcome::Equal(pair.0, pair.1)
}

fn base_literal() -> Rational {
    // L^2 - 2L + 1 over L^2
    let l = |e| Monomial::var_pow(VarId::L, e);
    let num = LaurentPoly::from_terms([
        (l(2), Coeff::from(1)),
        (l(1), Coeff::from(-2)),
        (Monomial::one(), Coeff::from(1)),
    ]);
    Rational::from_poly(num).mul_monomial(1, &l(-2))
}

fn at_t1(x: &Rational) -> Result<Rational, Error> {
    Substitution::new().with(VarId::T, Image::one()).apply(x)
}

fn routes(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("g-base-value", vec![vec![1, 1]], |s, _| {
            Ok(Outcome::Equal(s.milnor.g_recurrence(1, 1)?, base_literal()))
        }),
        Identity::new("g-recurrence-vs-chain-tuple", pairs(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_recurrence(c[0], c[1])?, s.milnor.g_theorem2(c[0], c[1])?))
        }),
        Identity::new("g-divisor-sum-diagonal", singles(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_diag_eq8(c[0], SRoute::Direct)?, s.milnor.g_recurrence(c[0], c[0])?))
        }),
        Identity::new("g-divisor-sum-diagonal-mobius", singles(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_diag_eq8(c[0], SRoute::Mobius)?, s.milnor.g_recurrence(c[0], c[0])?))
        }),
        Identity::new("g-divisor-chain-diagonal", singles(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_diag_eq9(c[0])?, s.milnor.g_theorem2(c[0], c[0])?))
        }),
        Identity::new("g-gcd-reduction", pairs(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_via_gcd(c[0], c[1])?, s.milnor.g_recurrence(c[0], c[1])?))
        }),
        Identity::new(
            "g-coprime-closed-form",
            pairs(n).into_iter().filter(|c| gcd(c[0], c[1]) == 1).collect(),
            |s, c| Ok(Outcome::Equal(s.milnor.g_theorem2(c[0], c[1])?, coprime_value(c[0], c[1]))),
        ),
    ]
}

fn symmetry(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("g-inversion-symmetry", pairs(n), |s, c| Ok(eq(s.milnor.symmetry_sides(c[0], c[1])?))),
        Identity::new("f-inversion-symmetry", pairs(n), |s, c| Ok(eq(s.check_f_symmetry(c[0], c[1])?))),
        Identity::new("g-def-inversion-symmetry", pairs(n), |s, c| {
            Ok(eq(s.deformed.symmetry_def_sides(c[0], c[1])?))
        }),
    ]
}

/// Cells `[a, k]` with `a | k`, `a < k`, `k <= 5n`.
fn divisor_cells(n: u64) -> Vec<Vec<u64>> {
    (2..=5 * n)
        .flat_map(|k| divisors(k).into_iter().filter(move |&a| a < k).map(move |a| vec![a, k]))
        .collect()
}

fn s_lemma(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("s-direct-vs-mobius", divisor_cells(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.s_direct(c[0], c[1])?, s.milnor.s_mobius(c[0], c[1])?))
        })
        .noted("orders up to 5 * max"),
        Identity::new("s-hat-sum-vs-closed-form", divisor_cells(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.s_hat_sum(c[0], c[1])?, s.milnor.s_hat(c[0], c[1])?))
        })
        .noted("orders up to 5 * max"),
    ]
}

fn measure(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("g-measure-at-t1", pairs(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.g_at_t1(Route::ChainTuple, c[0], c[1])?, cylinder_measure(c[0], c[1])))
        })
        .derived("t = 1 value follows from the cylinder measure"),
        Identity::new("g-def-measure-at-t1", pairs(n), |s, c| {
            let g = s.deformed.g_def_theorem3(c[0], c[1], &LambdaContext::all_l())?;
            Ok(Outcome::Equal(at_t1(&g)?, cylinder_measure(c[0], c[1])))
        })
        .derived("t = 1 and every λ = L"),
        Identity::new("chain-sum-at-t1-is-one", singles(n), |s, c| {
            Ok(Outcome::Equal(at_t1(&s.milnor.chain_sum(c[0])?)?, Rational::one()))
        })
        .derived("equivalent form of the measure normalization"),
    ]
}

fn functional_eq(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("f-functional-equation", pairs(n), |s, c| Ok(eq(s.functional_eq_cell(c[0], c[1])?)))
            .noted("coefficient of a^k b^m c^(k^2) d^(km) e^(m^2)"),
        Identity::new("g-diagonal-rowsum", singles(n), |s, c| Ok(eq(s.diagonal_rowsum_sides(c[0])?))),
        Identity::new("rowsum-closed-vs-geometric", singles(n), |s, c| {
            Ok(Outcome::Equal(s.milnor.rowsum(c[0])?, s.milnor.rowsum_geometric(c[0], Route::Recurrence)?))
        })
        .derived("row sum from the blow-up tail as a geometric series"),
    ]
}

fn deformed(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("g-def-recurrence-vs-chain-tuple", pairs(n), |s, c| {
            let sym = LambdaContext::symbolic();
            Ok(Outcome::Equal(
                s.deformed.g_def_recurrence(c[0], c[1], &sym)?,
                s.deformed.g_def_theorem3(c[0], c[1], &sym)?,
            ))
        }),
        Identity::new("g-def-recurrence-degeneration", pairs(n), |s, c| {
            Ok(Outcome::Equal(
                s.deformed.g_def_recurrence(c[0], c[1], &LambdaContext::all_l())?,
                s.milnor.g_recurrence(c[0], c[1])?,
            ))
        }),
        Identity::new("g-def-chain-tuple-degeneration", pairs(n), |s, c| {
            Ok(Outcome::Equal(
                s.deformed.g_def_theorem3(c[0], c[1], &LambdaContext::all_l())?,
                s.milnor.g_theorem2(c[0], c[1])?,
            ))
        }),
        Identity::new("g-def-lambda-support", pairs(n), |s, c| {
            let found = lambda_indices(&s.deformed.g_def_theorem3(c[0], c[1], &LambdaContext::symbolic())?);
            let allowed = lambda_support(c[0], c[1]);
            Ok(Outcome::Holds(
                found.is_subset(&allowed),
                format!("λ indices {found:?} not within {allowed:?}"),
            ))
        }),
        Identity::new("g-def-t1-closed-form", pairs(n), |s, c| {
            let sym = LambdaContext::symbolic();
            Ok(Outcome::Equal(
                s.deformed.g_def_t1(c[0], c[1], &sym)?,
                at_t1(&s.deformed.g_def_theorem3(c[0], c[1], &sym)?)?,
            ))
        }),
        Identity::new("h-definition-vs-chain-sum", pairs(n), |s, c| {
            let sym = LambdaContext::symbolic();
            Ok(Outcome::Equal(
                s.deformed.h_from_definition(c[0], c[1], &sym)?,
                s.deformed.h_chain_sum(c[0], c[1], &sym)?,
            ))
        }),
        Identity::new("h-normalization", pairs(n), |s, c| {
            Ok(Outcome::Equal(s.deformed.h_chain_sum(c[0], c[1], &LambdaContext::all_l())?, Rational::one()))
        }),
    ]
}

/// Higher-derivative cases `[k, m, α_1, k_1, α_2, k_2, ...]`.
pub const HIGHER_CASES: &[&[u64]] = &[
    &[2, 2, 2, 2],
    &[4, 4, 2, 1, 4, 1],
    &[4, 4, 2, 2],
    &[4, 4, 2, 3],
    &[4, 8, 2, 1, 4, 1],
    &[6, 6, 2, 1, 3, 1],
    &[6, 6, 3, 2],
    &[8, 8, 2, 1, 4, 1],
    &[8, 8, 2, 2, 4, 1],
    &[12, 12, 2, 1, 4, 1, 12, 1],
    &[12, 12, 3, 1, 6, 2],
    &[12, 12, 4, 1, 6, 1],
];

/// Splits a higher-derivative cell into `(k, m, α sequence, orders)`.
pub fn split_higher(cell: &[u64]) -> (u64, u64, Vec<u64>, Vec<u32>) {
    let rest = &cell[2..];
    let alphas = rest.iter().step_by(2).copied().collect();
    let orders = rest.iter().skip(1).step_by(2).map(|&o| o as u32).collect();
    (cell[0], cell[1], alphas, orders)
}

fn higher(s: &Series, c: &[u64], form: HigherForm) -> Result<Outcome, Error> {
    let (k, m, alphas, orders) = split_higher(c);
    Ok(eq(s.check_theorem4_higher(k, m, &alphas, &orders, form)?))
}

fn theorem4(n: u64) -> Vec<Identity> {
    let first = (1..=n)
        .flat_map(|k| (1..=n).flat_map(move |m| (2..=n).map(move |a| vec![k, m, a])))
        .collect();
    let cases: Vec<Vec<u64>> = HIGHER_CASES
        .iter()
        .filter(|c| c[0] <= n && c[1] <= n)
        .map(|c| c.to_vec())
        .collect();
    vec![
        Identity::new("h-first-derivative", first, |s, c| Ok(eq(s.check_theorem4_first(c[0], c[1], c[2])?)))
            .noted("cells [k, m, α]"),
        Identity::new("h-higher-derivative-as-stated", cases.clone(), |s, c| higher(s, c, HigherForm::Stated))
            .noted("cells [k, m, α_1, k_1, ...]; prefactor L^{α(k-1)} without k!"),
        Identity::new("h-higher-derivative-corrected", cases, |s, c| higher(s, c, HigherForm::Corrected))
            .derived("prefactor k! L^{-α(k-1)}; agrees with the stated form when every k_j = 1"),
    ]
}

fn z_ode(n: u64) -> Vec<Identity> {
    vec![
        Identity::new("z-ode", singles(n), |s, c| Ok(eq(s.check_z_ode(c[0])?))),
        Identity::new("z-pde-coefficient", pairs(n), |s, c| Ok(eq(s.check_z_pde_coefficient(c[0], c[1])?))),
        Identity::new("z-chain-rule", singles(n), |s, c| Ok(eq(s.chain_rule_sides(c[0])?)))
            .derived("τ-derivative assembled from the λ-derivative product formula"),
        Identity::new("z-normalization", singles(n), |s, c| {
            let z = Substitution::new()
                .with(VarId::BigA, Image::var(VarId::L))
                .with(VarId::Tau, Image::one())
                .apply(&s.z_value(c[0])?)?;
            Ok(Outcome::Equal(z, Rational::one()))
        })
        .derived("A = L, τ = 1 restores every λ = L"),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Exact,
    Modp,
    Both,
}

impl RunMode {
    fn modes(self) -> &'static [EqMode] {
        match self {
            RunMode::Exact => &[EqMode::Exact],
            RunMode::Modp => &[EqMode::Modp],
            RunMode::Both => &[EqMode::Exact, EqMode::Modp],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max: u64,
    pub mode: RunMode,
    pub seed: u64,
    /// Record wall-clock times; off gives byte-identical reports.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max: 10, mode: RunMode::Exact, seed: 1, timings: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: Vec<u64>,
    pub pass: bool,
    pub mode: EqMode,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub derived: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub pass: bool,
    pub cells: Vec<CellResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub identities: usize,
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cells where the randomized verdict differs from the exact one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modp_disagreements: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub identity: String,
    pub cell: Vec<u64>,
    pub mode: EqMode,
    pub lhs: Value,
    pub rhs: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub max: u64,
    pub mode: RunMode,
    pub seed: u64,
    pub identities: Vec<IdentityReport>,
    pub summary: Summary,
    pub first_failure: Option<Failure>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per cell: `identity,cell,mode,pass,millis`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,cell,mode,pass,millis\n");
        for id in &self.identities {
            for c in &id.cells {
                let cell: Vec<String> = c.cell.iter().map(u64::to_string).collect();
                let mode = if c.mode == EqMode::Exact { "exact" } else { "modp" };
                out.push_str(&format!("{},{},{},{},{}\n", id.name, cell.join(" "), mode, c.pass, c.millis));
            }
        }
        out
    }

    /// Verdicts keyed by `(identity, cell, mode)`.
    pub fn verdicts(&self) -> Vec<(String, Vec<u64>, EqMode, bool)> {
        self.identities
            .iter()
            .flat_map(|id| id.cells.iter().map(move |c| (id.name.clone(), c.cell.clone(), c.mode, c.pass)))
            .collect()
    }
}

fn cell_seed(seed: u64, identity: usize, cell: usize) -> u64 {
    seed ^ ((identity as u64) << 32 | cell as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs `suite` with fresh caches.
pub fn verify(suite: Suite, config: &RunConfig) -> VerificationReport {
    verify_with(&Series::new(), suite, config)
}

/// Runs `suite` reusing the caches in `s`.
pub fn verify_with(s: &Series, suite: Suite, config: &RunConfig) -> VerificationReport {
    let mut identities = Vec::new();
    let mut first_failure = None;
    let (mut cells, mut passed, mut disagreements) = (0, 0, 0);
    for (i, id) in suite.identities(config.max).into_iter().enumerate() {
        let mut results = Vec::new();
        for (j, cell) in id.cells.iter().enumerate() {
            let start = Instant::now();
            let outcome = id.evaluate(s, cell);
            let built = start.elapsed();
            let mut exact_verdict = None;
            for &mode in config.mode.modes() {
                let start = Instant::now();
                let (pass, error) = match &outcome {
                    Err(e) => (false, Some(e.to_string())),
                    Ok(Outcome::Holds(ok, _)) => (*ok, None),
                    Ok(Outcome::Equal(l, r)) => match mode {
                        EqMode::Exact => (l.eq_exact(r), None),
                        EqMode::Modp => match rat_eq_modp(l, r, DEFAULT_TRIALS, cell_seed(config.seed, i, j)) {
                            Ok(b) => (b, None),
                            Err(e) => (false, Some(e.to_string())),
                        },
                    },
                };
                let elapsed = built + start.elapsed();
                match mode {
                    EqMode::Exact => exact_verdict = Some(pass),
                    EqMode::Modp => {
                        if exact_verdict.is_some_and(|v| v != pass) {
                            disagreements += 1;
                        }
                    }
                }
                cells += 1;
                if pass {
                    passed += 1;
                } else if first_failure.is_none() {
                    first_failure = Some(failure(id.name, cell, mode, &outcome));
                }
                results.push(CellResult {
                    cell: cell.clone(),
                    pass,
                    mode,
                    millis: if config.timings { millis(elapsed) } else { 0 },
                    error,
                });
            }
        }
        identities.push(IdentityReport {
            name: id.name.to_string(),
            derived: id.derived,
            note: id.note.map(str::to_string),
            pass: results.iter().all(|c| c.pass),
            cells: results,
        });
    }
    VerificationReport {
        suite: suite.name().to_string(),
        max: config.max,
        mode: config.mode,
        seed: config.seed,
        summary: Summary {
            identities: identities.len(),
            cells,
            passed,
            failed: cells - passed,
            modp_disagreements: (config.mode == RunMode::Both).then_some(disagreements),
            pass: cells == passed,
        },
        identities,
        first_failure,
    }
}

fn millis(d: Duration) -> u64 {
    d.as_millis() as u64
}

fn failure(name: &str, cell: &[u64], mode: EqMode, outcome: &Result<Outcome, Error>) -> Failure {
    let (lhs, rhs, detail) = match outcome {
        Ok(Outcome::Equal(l, r)) => (to_json_value(l), to_json_value(r), None),
        Ok(Outcome::Holds(_, d)) => (Value::Null, Value::Null, Some(d.clone())),
        Err(e) => (Value::Null, Value::Null, Some(e.to_string())),
    };
    Failure { identity: name.to_string(), cell: cell.to_vec(), mode, lhs, rhs, detail }
}

/// Per-suite timings of the exact and randomized paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub suite: String,
    pub cells: usize,
    pub exact_millis: u64,
    pub modp_millis: u64,
    pub exact_pass: bool,
    pub modp_pass: bool,
    /// Set when both paths ran: every modp verdict matches the exact one.
    pub verdicts_agree: bool,
}

/// Times every suite in both modes with fresh caches per run.
pub fn bench(config: &RunConfig) -> Vec<BenchRow> {
    Suite::EACH
        .iter()
        .map(|&suite| {
            let run = |mode| {
                let cfg = RunConfig { mode, timings: true, ..config.clone() };
                let start = Instant::now();
                let r = verify(suite, &cfg);
                (r, millis(start.elapsed()))
            };
            let (exact, te) = run(RunMode::Exact);
            let (modp, tm) = run(RunMode::Modp);
            let agree = exact
                .verdicts()
                .iter()
                .zip(modp.verdicts())
                .all(|(a, b)| a.0 == b.0 && a.1 == b.1 && a.3 == b.3);
            BenchRow {
                suite: suite.name().to_string(),
                cells: exact.summary.cells,
                exact_millis: if config.timings { te } else { 0 },
                modp_millis: if config.timings { tm } else { 0 },
                exact_pass: exact.pass(),
                modp_pass: modp.pass(),
                verdicts_agree: agree,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(max: u64, mode: RunMode) -> RunConfig {
        RunConfig { max, mode, seed: 7, timings: false }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn all_at_max_one_passes() {
        let r = verify(Suite::All, &cfg(1, RunMode::Both));
        assert!(r.pass(), "{:?}", r.first_failure);
        assert_eq!(r.summary.modp_disagreements, Some(0));
    }

    #[test]
    fn routes_and_symmetry_small() {
        for suite in [Suite::Routes, Suite::Symmetry] {
            let r = verify(suite, &cfg(4, RunMode::Exact));
            assert!(r.pass(), "{suite}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn stated_higher_form_is_reported() {
        let r = verify(Suite::Theorem4, &cfg(4, RunMode::Exact));
        assert!(!r.pass());
        let f = r.first_failure.unwrap();
        assert_eq!(f.identity, "h-higher-derivative-as-stated");
        assert_eq!(f.cell, vec![2, 2, 2, 2]);
        let corrected = r.identities.iter().find(|i| i.name == "h-higher-derivative-corrected").unwrap();
        assert!(corrected.pass);
    }

    #[test]
    fn reports_are_deterministic_without_timings() {
        let a = verify(Suite::Measure, &cfg(3, RunMode::Both)).to_json();
        let b = verify(Suite::Measure, &cfg(3, RunMode::Both)).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn higher_cell_split() {
        assert_eq!(split_higher(&[4, 8, 2, 1, 4, 1]), (4, 8, vec![2, 4], vec![1, 1]));
    }
}
