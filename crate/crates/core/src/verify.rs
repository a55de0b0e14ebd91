//! Verification suites: each compares a production path against an
//! independent computation and records one case per comparison.

use rayon::prelude::*;
use serde::Serialize;

use crate::bivariate::{
    biamice_check, bimu_oracle, bimu_value, minus_minus_unsigned_form, BiResidue, BiSign,
};
use crate::digits::all_residues;
use crate::distribution::{amice_check, mu_oracle, mu_value, verify_additivity};
use crate::series::{verify_product_identity, SeriesPrecision};
use crate::{Prime, Result, Sign, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Oracle,
    Additivity,
    Amice,
    Biamice,
    Logproduct,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Additivity => "additivity",
            Suite::Amice => "amice",
            Suite::Biamice => "biamice",
            Suite::Logproduct => "logproduct",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub input: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Case {
    fn new(input: String, expected: String, actual: String) -> Self {
        let pass = expected == actual;
        Case { input, expected, actual, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub p: u64,
    pub max_n: u32,
    pub t_prec: usize,
    pub p_prec: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: Parameters,
    pub cases: Vec<Case>,
    /// Observations that do not affect the verdict.
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(suite: Suite, parameters: Parameters, cases: Vec<Case>, notes: Vec<String>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        VerificationReport { suite: suite.name().into(), parameters, cases, notes, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// Closed form against the character-sum oracle on every class mod `p^n`.
pub fn oracle_cases(p: Prime, max_n: u32) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for sign in Sign::ALL {
        for n in 1..=max_n {
            let residues = all_residues(p, n, DEFAULT_ENUMERATION_CAP)?;
            let batch = residues
                .par_iter()
                .map(|r| {
                    let expected = mu_oracle(sign, r)?;
                    Ok(Case::new(
                        format!("mu{sign} p={p} n={n} a={}", r.value()),
                        expected.to_string(),
                        mu_value(sign, r).to_string(),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            cases.extend(batch);
        }
    }
    Ok(cases)
}

pub fn additivity_cases(p: Prime, max_n: u32) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for sign in Sign::ALL {
        for n in 1..=max_n {
            let report = verify_additivity(sign, p, n)?;
            let actual = match report.failures.first() {
                None => format!("{} classes additive", report.checked),
                Some(f) => format!(
                    "{} failures, first at a={}: parent {} vs children {}",
                    report.failures.len(),
                    f.a,
                    f.parent,
                    f.children_sum
                ),
            };
            cases.push(Case::new(
                format!("mu{sign} p={p} n={n}"),
                format!("{} classes additive", report.checked),
                actual,
            ));
        }
    }
    Ok(cases)
}

pub fn amice_cases(p: Prime, max_n: u32) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for sign in Sign::ALL {
        for n in 1..=max_n {
            for k in 1..=n {
                let check = amice_check(sign, k, p, n)?;
                cases.push(Case::new(
                    format!("log{sign}(zeta_{k} - 1) p={p} level={n}"),
                    check.closed_form.to_string(),
                    check.integral.to_string(),
                ));
            }
        }
    }
    Ok(cases)
}

/// Product formula against the double character sum on every box with
/// `n, m <= max_n`, then the two-variable interpolation at `k1, k2 <= n`.
pub fn biamice_cases(p: Prime, max_n: u32) -> Result<(Vec<Case>, Vec<String>)> {
    let mut cases = Vec::new();
    let mut unsigned_mismatches = 0usize;
    let mut minus_minus_nonzero = 0usize;
    for s in BiSign::ALL {
        for n in 1..=max_n {
            for m in 1..=max_n {
                let firsts = all_residues(p, n, DEFAULT_ENUMERATION_CAP)?;
                let seconds = all_residues(p, m, DEFAULT_ENUMERATION_CAP)?;
                let boxes: Vec<BiResidue> = firsts
                    .iter()
                    .flat_map(|a| seconds.iter().map(move |b| (a.clone(), b.clone())))
                    .map(|(a, b)| BiResidue::new(a, b))
                    .collect::<Result<_>>()?;
                let batch = boxes
                    .par_iter()
                    .map(|r| {
                        let expected = bimu_oracle(s, r)?;
                        Ok(Case::new(
                            format!(
                                "mu{s} p={p} (n,m)=({n},{m}) (a,b)=({},{})",
                                r.first().value(),
                                r.second().value()
                            ),
                            expected.to_string(),
                            bimu_value(s, r).to_string(),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cases.extend(batch);
                if s == BiSign::new(Sign::Minus, Sign::Minus) {
                    for r in &boxes {
                        let value = bimu_value(s, r);
                        if !value.is_zero() {
                            minus_minus_nonzero += 1;
                            if minus_minus_unsigned_form(r) != value.to_rational() {
                                unsigned_mismatches += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    for s in BiSign::ALL {
        for n in 1..=max_n {
            for k1 in 1..=n {
                for k2 in 1..=n {
                    let check = biamice_check(s, p, k1, k2, n)?;
                    cases.push(Case::new(
                        format!("log{s}(zeta_{k1} - 1, zeta_{k2} - 1) p={p} level={n}"),
                        check.closed_form.to_string(),
                        check.integral.to_string(),
                    ));
                }
            }
        }
    }
    let notes = vec![format!(
        "mu--: the unsigned form p^(floor((n+3)/2) - floor((m+3)/2)) differs from the product \
         formula on {unsigned_mismatches} of {minus_minus_nonzero} nonzero boxes; the product \
         formula is used"
    )];
    Ok((cases, notes))
}

pub fn logproduct_cases(p: Prime, prec: SeriesPrecision) -> Result<Vec<Case>> {
    let report = verify_product_identity(p, prec)?;
    Ok(report
        .rows
        .iter()
        .map(|row| {
            let expected = match row.guarantee {
                Some(g) => format!("v_p >= {g}"),
                None => "exactly 0".to_string(),
            };
            let actual = match (row.valuation, row.pass) {
                (None, _) => "exactly 0".to_string(),
                (Some(_), true) => expected.clone(),
                (Some(v), false) => format!("v_p = {v} (residual {}/{})", row.num, row.den),
            };
            Case::new(
                format!(
                    "p^2 T log+ log- - log(1+T) at T^{} p={p} N={} M={}",
                    row.k,
                    prec.t_prec(),
                    prec.p_prec()
                ),
                expected,
                actual,
            )
        })
        .collect())
}

/// Fails fast when the largest level of a suite would exceed the cap.
fn check_size(suite: Suite, p: Prime, max_n: u32) -> Result<()> {
    let cap = DEFAULT_ENUMERATION_CAP;
    match suite {
        Suite::Oracle | Suite::Amice => p.pow_capped(max_n, "cosets", cap).map(drop),
        Suite::Additivity => p.pow_capped(max_n + 1, "cosets", cap).map(drop),
        Suite::Biamice => p.pow_capped(2 * max_n, "two-variable cosets", cap).map(drop),
        Suite::Logproduct => Ok(()),
        Suite::All => check_size(Suite::Biamice, p, max_n).and(check_size(Suite::Additivity, p, max_n)),
    }
}

pub fn run_suite(suite: Suite, p: Prime, max_n: u32, prec: SeriesPrecision) -> Result<VerificationReport> {
    check_size(suite, p, max_n)?;
    let parameters =
        Parameters { p: p.get(), max_n, t_prec: prec.t_prec(), p_prec: prec.p_prec() };
    let mut notes = Vec::new();
    let cases = match suite {
        Suite::Oracle => oracle_cases(p, max_n)?,
        Suite::Additivity => additivity_cases(p, max_n)?,
        Suite::Amice => amice_cases(p, max_n)?,
        Suite::Biamice => {
            let (cases, n) = biamice_cases(p, max_n)?;
            notes = n;
            cases
        }
        Suite::Logproduct => logproduct_cases(p, prec)?,
        Suite::All => {
            let mut cases = Vec::new();
            for sub in [Suite::Oracle, Suite::Additivity, Suite::Amice, Suite::Biamice, Suite::Logproduct] {
                let report = run_suite(sub, p, max_n, prec)?;
                cases.extend(report.cases.into_iter().map(|mut c| {
                    c.input = format!("{}: {}", sub.name(), c.input);
                    c
                }));
                notes.extend(report.notes);
            }
            cases
        }
    };
    Ok(VerificationReport::new(suite, parameters, cases, notes))
}
