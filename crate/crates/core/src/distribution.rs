//! The distributions `mu_+` and `mu_-` on `Z_p` whose Amice transforms are
//! `log_p^+` and `log_p^-`.
//!
//! Closed form, for `n >= 1`:
//!
//! ```text
//! mu_+(a + p^n Z_p) = p^-floor((n+2)/2)  if a in S_n^+, else 0
//! mu_-(a + p^n Z_p) = p^-floor((n+3)/2)  if a in S_n^-, else 0
//! ```
//!
//! [`mu_oracle`] recomputes the same numbers from the character-sum
//! expression `p^-c(n) sum_{zeta in mu_{p^n}} zeta^-a prod Phi(zeta)` without
//! looking at digits.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{character_sum, eval_at_zeta_power, signed_product, CyclotomicElement};
use crate::digits::{all_residues, r_count_for};
use crate::rational::{p_power, valuation};
use crate::{Error, Prime, Residue, Result, Sign, DEFAULT_ENUMERATION_CAP};

/// A value of `mu_±` or of a two-variable product: `0` or `p^-k`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DistValue {
    p: Prime,
    neg_exponent: Option<u32>,
}

impl DistValue {
    pub fn zero(p: Prime) -> Self {
        DistValue { p, neg_exponent: None }
    }

    /// `p^-k`.
    pub fn inverse_power(p: Prime, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("distribution values are p^-k with k >= 1".into()));
        }
        Ok(DistValue { p, neg_exponent: Some(k) })
    }

    /// Accepts exactly `0` and `p^-k` for `k >= 1`.
    pub fn from_rational(p: Prime, q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Ok(DistValue::zero(p));
        }
        let v = valuation(q, p.get()).expect("nonzero");
        if v <= -1 && *q == p_power(p.get(), v) {
            Self::inverse_power(p, (-v) as u32)
        } else {
            Err(Error::InvalidArgument(format!("{q} is neither 0 nor a negative power of {p}")))
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.neg_exponent.is_none()
    }

    /// `v_p` of the value, `None` for zero.
    pub fn p_val(&self) -> Option<i64> {
        self.neg_exponent.map(|k| -(k as i64))
    }

    pub fn to_rational(&self) -> BigRational {
        match self.neg_exponent {
            None => BigRational::zero(),
            Some(k) => p_power(self.p.get(), -(k as i64)),
        }
    }

    pub fn product(&self, other: &DistValue) -> DistValue {
        assert_eq!(self.p, other.p, "distribution values over different primes");
        DistValue { p: self.p, neg_exponent: self.neg_exponent.zip(other.neg_exponent).map(|(a, b)| a + b) }
    }

    pub fn to_json(&self) -> DistValueJson {
        let q = self.to_rational();
        DistValueJson {
            zero: self.is_zero(),
            num: q.numer().to_string(),
            den: q.denom().to_string(),
            p_val: self.p_val(),
        }
    }
}

impl std::fmt::Display for DistValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

/// Wire form of a [`DistValue`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistValueJson {
    pub zero: bool,
    pub num: String,
    pub den: String,
    pub p_val: Option<i64>,
}

/// `k` in the nonzero value `p^-k` at level `n`.
pub fn value_exponent(sign: Sign, n: u32) -> u32 {
    match sign {
        Sign::Plus => (n + 2) / 2,
        Sign::Minus => (n + 3) / 2,
    }
}

pub fn mu_value(sign: Sign, r: &Residue) -> DistValue {
    if r.in_s(sign) {
        DistValue { p: r.prime(), neg_exponent: Some(value_exponent(sign, r.n())) }
    } else {
        DistValue::zero(r.prime())
    }
}

/// Power of `p` dividing the character sum in the oracle formula.
pub fn oracle_scale_exponent(sign: Sign, n: u32) -> u32 {
    match sign {
        Sign::Plus => (3 * n + 2) / 2,
        Sign::Minus => (3 * n + 1) / 2 + 1,
    }
}

/// Weights `e -> c` of `x^-a prod Phi(x)`, the Laurent polynomial summed
/// over `mu_{p^n}` by the oracle.
pub fn oracle_weights(sign: Sign, r: &Residue) -> Result<BTreeMap<i128, BigRational>> {
    let prod = signed_product(r.prime(), r_count_for(sign, r.n()), sign)?;
    let a = r.value() as i128;
    Ok(prod.terms().map(|(e, c)| (e as i128 - a, c.clone())).collect())
}

/// `mu_±(a + p^n Z_p)` via the cyclotomic character sum.
pub fn mu_oracle(sign: Sign, r: &Residue) -> Result<DistValue> {
    mu_oracle_capped(sign, r, DEFAULT_ENUMERATION_CAP)
}

pub fn mu_oracle_capped(sign: Sign, r: &Residue, cap: u64) -> Result<DistValue> {
    let p = r.prime();
    p.pow_capped(r.n(), "roots of unity", cap)?;
    let weights = oracle_weights(sign, r)?;
    let sum = character_sum(p, r.n(), &weights)?;
    let scaled = sum * p_power(p.get(), -(oracle_scale_exponent(sign, r.n()) as i64));
    DistValue::from_rational(p, &scaled)
}

/// `mu_±(Z_p)`, summed over the classes mod `p`.
pub fn total_mass(sign: Sign, p: Prime) -> BigRational {
    (0..p.get())
        .map(|a| mu_value(sign, &Residue::from_integer(a as i128, p, 1).expect("n = 1")).to_rational())
        .sum()
}

/// Values a step function may take: rationals, or elements of a cyclotomic ring.
pub trait IntegrandValue: Clone {
    fn scaled(&self, q: &BigRational) -> Self;
    fn plus(&self, other: &Self) -> Self;
}

impl IntegrandValue for BigRational {
    fn scaled(&self, q: &BigRational) -> Self {
        self * q
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl IntegrandValue for CyclotomicElement {
    fn scaled(&self, q: &BigRational) -> Self {
        self.scale(q)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

/// A function on `Z_p` constant on the classes mod `p^n`, listed by
/// representative `0..p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<V> {
    p: Prime,
    n: u32,
    values: Vec<V>,
}

impl<V: IntegrandValue> StepFunction<V> {
    pub fn new(p: Prime, n: u32, values: Vec<V>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("step functions need n >= 1".into()));
        }
        let count = p.pow_capped(n, "step function entries", DEFAULT_ENUMERATION_CAP)?;
        if values.len() as u64 != count {
            return Err(Error::InvalidArgument(format!(
                "step function mod {p}^{n} needs {count} values, got {}",
                values.len()
            )));
        }
        Ok(StepFunction { p, n, values })
    }

    pub fn from_fn<F: FnMut(u64) -> Result<V>>(p: Prime, n: u32, mut f: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("step functions need n >= 1".into()));
        }
        let count = p.pow_capped(n, "step function entries", DEFAULT_ENUMERATION_CAP)?;
        let values = (0..count).map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(p, n, values)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self, a: u64) -> &V {
        &self.values[a as usize]
    }
}

impl StepFunction<BigRational> {
    /// The characteristic function of `r`, as a step function at level `r.n()`.
    pub fn indicator(r: &Residue) -> Result<Self> {
        let target = r.value();
        Self::from_fn(r.prime(), r.n(), |a| {
            Ok(if a == target { BigRational::one() } else { BigRational::zero() })
        })
    }

    pub fn constant(p: Prime, n: u32, c: BigRational) -> Result<Self> {
        Self::from_fn(p, n, |_| Ok(c.clone()))
    }
}

/// `int f dmu_±`.
pub fn integrate<V: IntegrandValue>(sign: Sign, f: &StepFunction<V>) -> V {
    let weight = |a: u64| {
        mu_value(sign, &Residue::from_integer(a as i128, f.p, f.n).expect("validated level"))
            .to_rational()
    };
    let mut acc = f.values[0].scaled(&weight(0));
    for (a, v) in f.values.iter().enumerate().skip(1) {
        let w = weight(a as u64);
        if !w.is_zero() {
            acc = acc.plus(&v.scaled(&w));
        }
    }
    acc
}

/// Closed form of `log_p^±(zeta_k - 1)` in the level-`n` ring, written with
/// the product indexed up to `index` instead of `k`. Any `index >= k` of the
/// same parity as `k` gives the same element, because `Phi_m(zeta_k) = p`
/// once `m > k`.
pub fn interpolation_with_index(
    sign: Sign,
    k: u32,
    index: u32,
    p: Prime,
    n: u32,
) -> Result<CyclotomicElement> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if index < k || !(index - k).is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "index {index} must be >= k = {k} and of the same parity"
        )));
    }
    let vanishes = match sign {
        Sign::Plus => k.is_multiple_of(2),
        Sign::Minus => k % 2 == 1,
    };
    if vanishes {
        return CyclotomicElement::zero(p, n);
    }
    let (count, neg_exp) = match sign {
        Sign::Plus => ((index - 1) / 2, (index + 1) / 2),
        Sign::Minus => (index / 2, index / 2 + 1),
    };
    let prod = signed_product(p, count, sign)?;
    let at_zeta_k = eval_at_zeta_power(&prod, p, n, p.pow(n - k)?)?;
    Ok(at_zeta_k.scale(&p_power(p.get(), -(neg_exp as i64))))
}

/// `log_p^±(zeta_k - 1)` as an element of the level-`n` ring, `1 <= k <= n`.
/// The product runs to the largest index `<= n` with the parity of `k`.
pub fn interpolation_rhs(sign: Sign, k: u32, p: Prime, n: u32) -> Result<CyclotomicElement> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let index = if (n - k).is_multiple_of(2) { n } else { n - 1 };
    interpolation_with_index(sign, k, index, p, n)
}

/// The character `a -> zeta_k^a` as a step function mod `p^n`.
pub fn zeta_character(p: Prime, k: u32, n: u32) -> Result<StepFunction<CyclotomicElement>> {
    if k > n {
        return Err(Error::InvalidArgument(format!("need k <= n, got k = {k}, n = {n}")));
    }
    let step = p.pow(n - k)? as i128;
    StepFunction::from_fn(p, n, |a| CyclotomicElement::zeta_power(p, n, a as i128 * step))
}

#[derive(Debug, Clone)]
pub struct AmiceCheck {
    pub sign: Sign,
    pub k: u32,
    pub n: u32,
    pub integral: CyclotomicElement,
    pub closed_form: CyclotomicElement,
    pub pass: bool,
}

/// Compares `int zeta_k^x dmu_±` against `log_p^±(zeta_k - 1)`.
pub fn amice_check(sign: Sign, k: u32, p: Prime, n: u32) -> Result<AmiceCheck> {
    let integral = integrate(sign, &zeta_character(p, k, n)?);
    let closed_form = interpolation_rhs(sign, k, p, n)?;
    let pass = integral == closed_form;
    Ok(AmiceCheck { sign, k, n, integral, closed_form, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityFailure {
    pub a: u64,
    pub parent: String,
    pub children_sum: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityReport {
    pub p: u64,
    pub n: u32,
    pub checked: usize,
    pub failures: Vec<AdditivityFailure>,
    pub pass: bool,
}

/// Checks `sum_j mu(a + j p^n + p^(n+1) Z_p) = mu(a + p^n Z_p)` for every `a`.
pub fn verify_additivity(sign: Sign, p: Prime, n: u32) -> Result<AdditivityReport> {
    p.pow_capped(n + 1, "cosets", DEFAULT_ENUMERATION_CAP)?;
    let parents = all_residues(p, n, DEFAULT_ENUMERATION_CAP)?;
    let mut failures = Vec::new();
    for r in &parents {
        let parent = mu_value(sign, r).to_rational();
        let children_sum: BigRational =
            r.children()?.iter().map(|c| mu_value(sign, c).to_rational()).sum();
        if parent != children_sum {
            failures.push(AdditivityFailure {
                a: r.value(),
                parent: parent.to_string(),
                children_sum: children_sum.to_string(),
            });
        }
    }
    let pass = failures.is_empty();
    Ok(AdditivityReport { p: p.get(), n, checked: parents.len(), failures, pass })
}
