//! Named cross-check suites behind the `verify` subcommand.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtins;
use crate::classify::{
    class_bound, classify_exhaustive, classify_sampled, max_epsilon, min_nonzero_epsilon,
    min_nonzero_perm, ClassHistogram,
};
use crate::entangle::{check_block_conditions, entangling_power};
use crate::error::{Error, Result};
use crate::latin::{are_orthogonal, construct_mols, count_orthogonal_pairs, PAIR_COUNT_MAX_D};
use crate::oracle::{mc_power, oracle_power, Unitary};
use crate::perm::{enumerate_perms, random_perm, BiPerm};
use crate::rational::Rational;
use crate::tolerance::{COMPARISON, ORACLE_MAX_D};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    FormulaVsOracle,
    McVsFormula,
    MaxPower,
    MinPower,
    Tables,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::FormulaVsOracle,
        Target::McVsFormula,
        Target::MaxPower,
        Target::MinPower,
        Target::Tables,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::FormulaVsOracle => "formula-vs-oracle",
            Target::McVsFormula => "mc-vs-formula",
            Target::MaxPower => "theorem4",
            Target::MinPower => "theorem7",
            Target::Tables => "tables",
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!(
                    "unknown verify target {s:?}; expected one of {}",
                    Target::ALL.map(Target::name).join(", ")
                ),
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub d: usize,
    /// Random permutations for formula-vs-oracle, Haar draws for mc-vs-formula,
    /// random permutations for sampled tables.
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub target: Target,
    pub d: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn check(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
        });
    }

    fn expect_eq<T: PartialEq + ToString>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        let passed = expected == actual;
        self.check(name, expected, actual, passed);
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{mark}  {}", c.name)?;
            if !c.passed {
                writeln!(f, "      - expected {}", c.expected)?;
                writeln!(f, "      + actual   {}", c.actual)?;
            }
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "{} d={}: {} checks, {failed} failed",
            self.target.name(),
            self.d,
            self.checks.len()
        )
    }
}

pub fn run(target: Target, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        target,
        d: cfg.d,
        checks: Vec::new(),
    };
    match target {
        Target::FormulaVsOracle => formula_vs_oracle(cfg, &mut report)?,
        Target::McVsFormula => mc_vs_formula(cfg, &mut report)?,
        Target::MaxPower => max_power(cfg, &mut report)?,
        Target::MinPower => min_power(cfg, &mut report)?,
        Target::Tables => tables(cfg, &mut report)?,
    }
    Ok(report)
}

fn seeded_perms(d: usize, count: u64, seed: u64) -> Result<Vec<BiPerm>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_perm(d, &mut rng)).collect()
}

fn formula_vs_oracle(cfg: &VerifyConfig, report: &mut VerifyReport) -> Result<()> {
    let d = cfg.d;
    if !(2..=ORACLE_MAX_D).contains(&d) {
        return Err(Error::InvalidDimension {
            d,
            reason: "oracle supports 2 <= d <= 12",
        });
    }
    let perms: Vec<BiPerm> = if d == 2 {
        enumerate_perms(2, false)?.collect()
    } else {
        seeded_perms(d, cfg.samples, cfg.seed)?
    };
    let mut worst = 0.0f64;
    let mut shown = 0;
    for p in &perms {
        let exact = entangling_power(p)?.epsilon;
        let oracle = oracle_power(&Unitary::from_biperm(p)?)?;
        let dev = (exact.to_f64() - oracle).abs();
        worst = worst.max(dev);
        if dev > COMPARISON && shown < 10 {
            shown += 1;
            report.check(format!("eps of {:?}", p.one_line()), exact, oracle, false);
        }
    }
    report.check(
        format!("max |formula - oracle| over {} permutations", perms.len()),
        format!("<= {COMPARISON:e}"),
        format!("{worst:e}"),
        worst <= COMPARISON,
    );
    Ok(())
}

fn mc_vs_formula(cfg: &VerifyConfig, report: &mut VerifyReport) -> Result<()> {
    let d = cfg.d;
    let mut perms = vec![("min-nonzero".to_string(), min_nonzero_perm(d)?)];
    if d == 2 {
        perms.push(("cnot".into(), builtins::cnot()));
    }
    if let Ok(pair) = construct_mols(d) {
        perms.push(("mols".into(), pair.superimpose()));
    }
    for (i, p) in seeded_perms(d, 3, cfg.seed)?.into_iter().enumerate() {
        perms.push((format!("random #{i}"), p));
    }
    let samples = cfg.samples.max(2) as usize;
    for (name, p) in perms {
        let exact = entangling_power(&p)?.epsilon.to_f64();
        let est = mc_power(&Unitary::from_biperm(&p)?, samples, cfg.seed)?;
        let tol = (5.0 * est.std_error).max(COMPARISON);
        report.check(
            format!("{name}: MC within 5 SE of exact"),
            format!("{exact:.6} +/- {tol:.2e}"),
            format!("{:.6}", est.mean),
            (est.mean - exact).abs() <= tol,
        );
    }
    Ok(())
}

fn max_power(cfg: &VerifyConfig, report: &mut VerifyReport) -> Result<()> {
    let d = cfg.d;
    let pair = construct_mols(d)?;
    report.expect_eq("squares orthogonal", true, are_orthogonal(pair.first(), pair.second()));
    let p = pair.superimpose();
    let rep = entangling_power(&p)?;
    report.expect_eq("eps of superimposed pair", max_epsilon(d), rep.epsilon);
    let dd = (d * d) as u64;
    report.expect_eq("Q_P", dd, rep.q_p);
    report.expect_eq("Q_PS", dd, rep.q_ps);
    report.expect_eq("block conditions", true, check_block_conditions(&p).all());
    if d <= 3 {
        // converse: every maximal permutation is a superimposed orthogonal pair
        let h = classify_exhaustive(d)?;
        let pairs = count_orthogonal_pairs(d)?;
        report.expect_eq("maximal class size = 2 x ordered pairs", 2 * pairs, h.count(max_epsilon(d)));
        let mut converse = true;
        for q in enumerate_perms(d, false)? {
            let at_max = entangling_power(&q)?.epsilon == max_epsilon(d);
            converse &= at_max == check_block_conditions(&q).all();
        }
        report.expect_eq("max eps <=> block conditions (exhaustive)", true, converse);
    } else if d <= PAIR_COUNT_MAX_D {
        report.expect_eq("ordered orthogonal pairs", 3456, count_orthogonal_pairs(d)?);
    }
    Ok(())
}

fn min_power(cfg: &VerifyConfig, report: &mut VerifyReport) -> Result<()> {
    let d = cfg.d;
    let p = min_nonzero_perm(d)?;
    let rep = entangling_power(&p)?;
    let d64 = d as u64;
    report.expect_eq("eps = 8(d-1)/(d(d+1)^2)", min_nonzero_epsilon(d)?, rep.epsilon);
    report.expect_eq("Q_P = d^4 - 8(d-1)^2", d64.pow(4) - 8 * (d64 - 1).pow(2), rep.q_p);
    report.expect_eq("Q_PS = d^2", d64 * d64, rep.q_ps);
    if d <= 3 {
        let h = classify_exhaustive(d)?;
        let smallest = h.classes().keys().copied().find(|e| !e.is_zero());
        report.expect_eq(
            "smallest nonzero class (exhaustive)",
            min_nonzero_epsilon(d)?.to_string(),
            smallest.map_or_else(|| "none".into(), |e| e.to_string()),
        );
        report.check(
            "class count within bound",
            format!("<= {}", class_bound(d)?),
            h.classes().len(),
            h.classes().len() as u64 <= class_bound(d)?,
        );
    }
    Ok(())
}

/// Expected d=3 classes in ascending order. The unlabeled row is listed as
/// 182/375, which is not of the form n/96 and so cannot be a d=3 value.
pub const TABLE_D3: [(Option<(i64, i64)>, u64); 15] = [
    (Some((0, 1)), 72),
    (Some((1, 3)), 2592),
    (Some((3, 8)), 864),
    (Some((5, 12)), 1296),
    (None, 10368),
    (Some((23, 48)), 20736),
    (Some((1, 2)), 27432),
    (Some((25, 48)), 36288),
    (Some((13, 24)), 44064),
    (Some((9, 16)), 101376),
    (Some((7, 12)), 44712),
    (Some((29, 48)), 46656),
    (Some((5, 8)), 22464),
    (Some((2, 3)), 3888),
    (Some((3, 4)), 72),
];

/// Exact value of the unlabeled row, from the exhaustive run.
pub const TABLE_D3_UNLABELED: (i64, i64) = (11, 24);

/// Sampled-mean windows for d = 4, 5.
pub const SAMPLED_MEAN_WINDOWS: [(usize, f64, f64); 2] = [(4, 0.66, 0.68), (5, 0.73, 0.75)];

fn compare_d3(h: &ClassHistogram, report: &mut VerifyReport) {
    let got: Vec<(Rational, u64)> = h.classes().iter().map(|(e, c)| (*e, *c)).collect();
    report.expect_eq("class count", 15, got.len());
    for (row, &(label, count)) in TABLE_D3.iter().enumerate() {
        let (want, name) = match label {
            Some((n, d)) => (Rational::new(n, d), format!("row {}", row + 1)),
            None => (
                Rational::new(TABLE_D3_UNLABELED.0, TABLE_D3_UNLABELED.1),
                format!("row {} (listed as 182/375)", row + 1),
            ),
        };
        let actual = got
            .get(row)
            .map(|(e, c)| format!("{e}: {c}"))
            .unwrap_or_else(|| "missing".into());
        report.expect_eq(name, format!("{want}: {count}"), actual);
    }
}

fn tables(cfg: &VerifyConfig, report: &mut VerifyReport) -> Result<()> {
    let d = cfg.d;
    match d {
        2 => {
            let h = classify_exhaustive(2)?;
            report.expect_eq("classes", "0: 8, 4/9: 16".to_string(), format_classes(&h));
            report.expect_eq("mean", Rational::new(8, 27).to_string(), mean_string(&h)?);
        }
        3 => {
            let h = classify_exhaustive(3)?;
            compare_d3(&h, report);
            report.expect_eq("mean", Rational::new(31, 56).to_string(), mean_string(&h)?);
        }
        _ => {
            let &(_, lo, hi) = SAMPLED_MEAN_WINDOWS
                .iter()
                .find(|w| w.0 == d)
                .ok_or(Error::InvalidDimension {
                    d,
                    reason: "tables cover d = 2..=5",
                })?;
            let (h, stats) = classify_sampled(d, cfg.samples, cfg.seed, None)?;
            report.check(
                format!("sampled mean over {} permutations", stats.samples),
                format!("[{lo}, {hi}]"),
                format!("{:.5} +/- {:.5}", stats.mean_epsilon, stats.std_error),
                (lo..=hi).contains(&stats.mean_epsilon),
            );
            report.check(
                "observed classes within bound",
                format!("<= {}", class_bound(d)?),
                h.classes().len(),
                h.classes().len() as u64 <= class_bound(d)?,
            );
        }
    }
    Ok(())
}

fn mean_string(h: &ClassHistogram) -> Result<String> {
    Ok(h.mean()?.map_or_else(|| "none".into(), |m| m.to_string()))
}

fn format_classes(h: &ClassHistogram) -> String {
    h.classes()
        .iter()
        .map(|(e, c)| format!("{e}: {c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: usize, samples: u64) -> VerifyConfig {
        VerifyConfig { d, samples, seed: 42 }
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("nope".parse::<Target>().is_err());
    }

    #[test]
    fn small_targets_pass() {
        for t in Target::ALL.into_iter().filter(|&t| t != Target::MaxPower) {
            let r = run(t, &cfg(2, 2000)).unwrap();
            assert!(r.passed(), "{r}");
        }
        let r = run(Target::FormulaVsOracle, &cfg(3, 20)).unwrap();
        assert!(r.passed(), "{r}");
        let r = run(Target::MaxPower, &cfg(5, 0)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn no_pair_of_side_two() {
        assert!(matches!(
            run(Target::MaxPower, &cfg(2, 0)),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn report_lists_failures_with_diff() {
        let mut r = VerifyReport { target: Target::Tables, d: 3, checks: vec![] };
        r.expect_eq("x", 1, 2);
        r.expect_eq("y", 3, 3);
        assert!(!r.passed());
        let text = r.to_string();
        assert!(text.contains("FAIL  x"));
        assert!(text.contains("- expected 1"));
        assert!(text.contains("+ actual   2"));
        assert!(text.contains("2 checks, 1 failed"));
    }
}
