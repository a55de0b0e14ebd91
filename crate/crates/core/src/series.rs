//! Truncated power series in `T` with rational coefficients and a per
//! coefficient p-adic error bound.
//!
//! A [`Coefficient`] is an exact rational `c` together with a guarantee `g`:
//! the true coefficient lies in `c + p^g Z_p`. A missing guarantee means the
//! value is exact. Products propagate bounds the usual way,
//! `(a + O(p^α))(b + O(p^β)) = ab + O(p^min(v(a)+β, v(b)+α, α+β))`.
//!
//! `log_p^±` is built as the partial product
//! `(1/p) prod_{j<=K} Phi_{e(j)}(1+T)/p` times an unknown tail whose
//! coefficients in degrees `1..N` are bounded below in valuation. For
//! `1 <= k`, the `T^k` coefficient of `Phi_m(1+T)/p` has valuation at least
//! `m - 2 - v_p(k)`, because `v_p C(p^(m-1) t, k) >= m - 1 - v_p(k)`. `K` is the
//! least index for which that bound reaches the working precision `M` on
//! every later factor.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{binomial, p_power, valuation, valuation_at_least};
use crate::{Error, Prime, Result, Sign};

/// Factor cap for the infinite product.
pub const FACTOR_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesPrecision {
    t_prec: usize,
    p_prec: i64,
}

impl SeriesPrecision {
    pub const DEFAULT: SeriesPrecision = SeriesPrecision { t_prec: 8, p_prec: 6 };

    pub fn new(t_prec: usize, p_prec: i64) -> Result<Self> {
        if t_prec == 0 || p_prec < 1 {
            return Err(Error::InvalidArgument(format!(
                "series precision needs t_prec >= 1 and p_prec >= 1, got ({t_prec}, {p_prec})"
            )));
        }
        Ok(SeriesPrecision { t_prec, p_prec })
    }

    /// `N`: coefficients of `T^0 .. T^(N-1)` are tracked.
    pub fn t_prec(&self) -> usize {
        self.t_prec
    }

    /// `M`: working p-adic precision.
    pub fn p_prec(&self) -> i64 {
        self.p_prec
    }
}

impl Default for SeriesPrecision {
    fn default() -> Self {
        SeriesPrecision::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficient {
    pub value: BigRational,
    /// `None` when the value is exact.
    pub guarantee: Option<i64>,
}

impl Coefficient {
    pub fn exact(value: BigRational) -> Self {
        Coefficient { value, guarantee: None }
    }

    /// Whether the value is indistinguishable from zero at its guarantee.
    pub fn is_zero_at_precision(&self, p: u64) -> bool {
        match self.guarantee {
            None => self.value.is_zero(),
            Some(g) => valuation_at_least(&self.value, p, g),
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    p: Prime,
    prec: SeriesPrecision,
    coeffs: Vec<Coefficient>,
}

impl TruncatedSeries {
    /// An exact series from its first `N` coefficients; missing ones are 0.
    pub fn exact(p: Prime, prec: SeriesPrecision, mut values: Vec<BigRational>) -> Self {
        values.resize(prec.t_prec, BigRational::zero());
        values.truncate(prec.t_prec);
        TruncatedSeries { p, prec, coeffs: values.into_iter().map(Coefficient::exact).collect() }
    }

    pub fn one(p: Prime, prec: SeriesPrecision) -> Self {
        Self::exact(p, prec, vec![BigRational::one()])
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> SeriesPrecision {
        self.prec
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k].value
    }

    pub fn guarantee(&self, k: usize) -> Option<i64> {
        self.coeffs[k].guarantee
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.p, other.p, "series over different primes");
        assert_eq!(self.prec.t_prec, other.prec.t_prec, "series of different T-precision");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let p = self.p.get();
        let vals_a: Vec<Option<i64>> = self.coeffs.iter().map(|c| valuation(&c.value, p)).collect();
        let vals_b: Vec<Option<i64>> =
            other.coeffs.iter().map(|c| valuation(&c.value, p)).collect();
        let coeffs = (0..self.len())
            .map(|k| {
                let mut value = BigRational::zero();
                let mut guarantee = None;
                for i in 0..=k {
                    let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                    value += &a.value * &b.value;
                    let err = min_opt(
                        min_opt(add_opt(vals_a[i], b.guarantee), add_opt(vals_b[k - i], a.guarantee)),
                        add_opt(a.guarantee, b.guarantee),
                    );
                    guarantee = min_opt(guarantee, err);
                }
                Coefficient { value, guarantee }
            })
            .collect();
        TruncatedSeries { p: self.p, prec: self.prec, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| Coefficient {
                value: &a.value - &b.value,
                guarantee: min_opt(a.guarantee, b.guarantee),
            })
            .collect();
        TruncatedSeries { p: self.p, prec: self.prec, coeffs }
    }

    /// Multiply by a nonzero rational; guarantees shift by its valuation.
    pub fn scale(&self, q: &BigRational) -> Self {
        let shift = valuation(q, self.p.get()).expect("scaling by zero");
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Coefficient { value: &c.value * q, guarantee: c.guarantee.map(|g| g + shift) })
            .collect();
        TruncatedSeries { p: self.p, prec: self.prec, coeffs }
    }

    /// Multiply by `T`, dropping the coefficient pushed past `N`.
    pub fn shift_t(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.len());
        coeffs.push(Coefficient::exact(BigRational::zero()));
        coeffs.extend(self.coeffs[..self.len() - 1].iter().cloned());
        TruncatedSeries { p: self.p, prec: self.prec, coeffs }
    }

    /// Coefficientwise congruence up to the weaker of the two guarantees
    /// (exact coefficients must agree exactly).
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.check_compatible(other);
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| {
            let diff = &a.value - &b.value;
            match min_opt(a.guarantee, b.guarantee) {
                None => diff.is_zero(),
                Some(g) => valuation_at_least(&diff, self.p.get(), g),
            }
        })
    }

    pub fn to_dump(&self, sign: Sign) -> SeriesDump {
        SeriesDump {
            p: self.p.get(),
            sign: sign.to_string(),
            t_prec: self.prec.t_prec,
            p_prec: self.prec.p_prec,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| CoefficientRecord {
                    k,
                    num: c.value.numer().to_string(),
                    den: c.value.denom().to_string(),
                    guaranteed_mod_p_pow: c.guarantee.unwrap_or(self.prec.p_prec),
                })
                .collect(),
        }
    }
}

/// JSON layout of `plusminus series`.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesDump {
    pub p: u64,
    pub sign: String,
    pub t_prec: usize,
    pub p_prec: i64,
    pub coeffs: Vec<CoefficientRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRecord {
    pub k: usize,
    pub num: String,
    pub den: String,
    pub guaranteed_mod_p_pow: i64,
}

/// `log(1+T) = sum (-1)^(k+1) T^k / k`, exact.
pub fn series_log_classical(p: Prime, prec: SeriesPrecision) -> TruncatedSeries {
    let values = (0..prec.t_prec)
        .map(|k| match k {
            0 => BigRational::zero(),
            k => {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                BigRational::new(BigInt::from(sign), BigInt::from(k))
            }
        })
        .collect();
    TruncatedSeries::exact(p, prec, values)
}

/// `Phi_m(1+T) = sum_{t<p} (1+T)^(p^(m-1) t)`, exact up to `T^(N-1)`.
pub fn phi_shifted(p: Prime, m: u32, prec: SeriesPrecision) -> Result<TruncatedSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("cyclotomic level must be >= 1".into()));
    }
    let step = BigUint::from(p.get()).pow(m - 1);
    let values = (0..prec.t_prec as u64)
        .map(|k| {
            let total: BigUint =
                (0..p.get()).map(|t| binomial(&(&step * BigUint::from(t)), k)).sum();
            BigRational::from_integer(BigInt::from(total))
        })
        .collect();
    Ok(TruncatedSeries::exact(p, prec, values))
}

/// `max_{1 <= k < N} v_p(k)`, the worst valuation loss in the factor bound.
fn max_index_valuation(p: Prime, t_prec: usize) -> i64 {
    (1..t_prec as u64)
        .map(|k| {
            let mut v = 0;
            let mut k = k;
            while k % p.get() == 0 {
                k /= p.get();
                v += 1;
            }
            v
        })
        .max()
        .unwrap_or(0)
}

/// Lower bound on the valuation of every non-constant coefficient (below
/// `T^N`) of `Phi_m(1+T)/p`, valid for every level `>= m`.
pub fn factor_tail_bound(p: Prime, level: u32, t_prec: usize) -> i64 {
    level as i64 - 2 - max_index_valuation(p, t_prec)
}

/// `(1/p) prod_{j=1}^{factors} Phi_{e(j)}(1+T)/p`, exact.
pub fn partial_log_pm(
    p: Prime,
    sign: Sign,
    prec: SeriesPrecision,
    factors: u32,
) -> Result<TruncatedSeries> {
    let inv_p = p_power(p.get(), -1);
    let mut acc = TruncatedSeries::one(p, prec).scale(&inv_p);
    for j in 1..=factors {
        acc = acc.mul(&normalized_factor(p, sign.factor_level(j), prec)?);
    }
    Ok(acc)
}

/// `Phi_level(1+T)/p`.
pub fn normalized_factor(p: Prime, level: u32, prec: SeriesPrecision) -> Result<TruncatedSeries> {
    Ok(phi_shifted(p, level, prec)?.scale(&p_power(p.get(), -1)))
}

/// A constructed `log_p^±` with its bookkeeping.
#[derive(Debug, Clone)]
pub struct LogConstruction {
    pub series: TruncatedSeries,
    /// Number `K` of cyclotomic factors multiplied out.
    pub factors: u32,
    /// Valuation bound on the non-constant coefficients of the omitted tail.
    pub tail_bound: i64,
}

pub fn construct_log_pm(p: Prime, sign: Sign, prec: SeriesPrecision) -> Result<LogConstruction> {
    let factors = (1..=FACTOR_CAP)
        .find(|&k| factor_tail_bound(p, sign.factor_level(k + 1), prec.t_prec) >= prec.p_prec)
        .ok_or(Error::NonConvergence { cap: FACTOR_CAP })?;
    let tail_bound = factor_tail_bound(p, sign.factor_level(factors + 1), prec.t_prec);

    let next = normalized_factor(p, sign.factor_level(factors + 1), prec)?;
    let next_is_one = next.coeffs()[1..]
        .iter()
        .all(|c| valuation_at_least(&c.value, p.get(), tail_bound));
    if !next_is_one || !next.coeff(0).is_one() {
        return Err(Error::NonConvergence { cap: FACTOR_CAP });
    }

    let partial = partial_log_pm(p, sign, prec, factors)?;
    let mut tail = TruncatedSeries::one(p, prec);
    for c in tail.coeffs.iter_mut().skip(1) {
        c.guarantee = Some(tail_bound);
    }
    Ok(LogConstruction { series: partial.mul(&tail), factors, tail_bound })
}

pub fn build_log_pm(p: Prime, sign: Sign, prec: SeriesPrecision) -> Result<TruncatedSeries> {
    Ok(construct_log_pm(p, sign, prec)?.series)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub k: usize,
    pub num: String,
    pub den: String,
    /// `None` when the residual is exactly zero.
    pub valuation: Option<i64>,
    /// `None` when the coefficient is exact, in which case the residual must vanish.
    pub guarantee: Option<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductIdentityReport {
    pub p: u64,
    pub t_prec: usize,
    pub p_prec: i64,
    pub rows: Vec<ResidualRow>,
    pub pass: bool,
}

/// Residual `p^2 T log^+ log^- - log(1+T)`, checked coefficientwise against
/// the propagated guarantees.
pub fn verify_product_identity(p: Prime, prec: SeriesPrecision) -> Result<ProductIdentityReport> {
    let plus = build_log_pm(p, Sign::Plus, prec)?;
    let minus = build_log_pm(p, Sign::Minus, prec)?;
    let lhs = plus.mul(&minus).scale(&p_power(p.get(), 2)).shift_t();
    let residual = lhs.sub(&series_log_classical(p, prec));
    let rows: Vec<ResidualRow> = residual
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| ResidualRow {
            k,
            num: c.value.numer().to_string(),
            den: c.value.denom().to_string(),
            valuation: valuation(&c.value, p.get()),
            guarantee: c.guarantee,
            pass: c.is_zero_at_precision(p.get()),
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(ProductIdentityReport { p: p.get(), t_prec: prec.t_prec, p_prec: prec.p_prec, rows, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValuationEntry {
    pub k: usize,
    /// `None`: zero at working precision.
    pub valuation: Option<i64>,
}

pub fn coefficient_valuation_profile(s: &TruncatedSeries) -> Vec<ValuationEntry> {
    let p = s.prime().get();
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| ValuationEntry {
            k,
            valuation: if c.is_zero_at_precision(p) { None } else { valuation(&c.value, p) },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_int;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn rational(n: i64, d: i64) -> BigRational {
        from_int(n) / from_int(d)
    }

    fn prec(n: usize, m: i64) -> SeriesPrecision {
        SeriesPrecision::new(n, m).unwrap()
    }

    #[test]
    fn classical_log() {
        let s = series_log_classical(p(2), prec(6, 4));
        assert_eq!(s.coeff(0), &rational(0, 1));
        assert_eq!(s.coeff(1), &rational(1, 1));
        assert_eq!(s.coeff(2), &rational(-1, 2));
        assert_eq!(s.coeff(4), &rational(-1, 4));
        assert_eq!(valuation(s.coeff(4), 2), Some(-2));
    }

    #[test]
    fn shifted_cyclotomic() {
        let s = phi_shifted(p(2), 1, prec(4, 4)).unwrap();
        let got: Vec<_> = s.coeffs().iter().map(|c| c.value.clone()).collect();
        assert_eq!(got, vec![rational(2, 1), rational(1, 1), rational(0, 1), rational(0, 1)]);
        let s = phi_shifted(p(3), 1, prec(3, 4)).unwrap();
        // 1 + (1+T) + (1+T)^2
        assert_eq!(s.coeff(0), &rational(3, 1));
        assert_eq!(s.coeff(1), &rational(3, 1));
        assert_eq!(s.coeff(2), &rational(1, 1));
        for (pp, m) in [(5u64, 3u32), (7, 2), (2, 6)] {
            assert_eq!(phi_shifted(p(pp), m, prec(5, 3)).unwrap().coeff(0), &rational(pp as i64, 1));
        }
    }

    #[test]
    fn shifted_cyclotomic_matches_substitution() {
        // Phi_2(1+T) for p=3 is 1 + (1+T)^3 + (1+T)^6.
        let s = phi_shifted(p(3), 2, prec(8, 4)).unwrap();
        let expected = [3, 9, 18, 21, 15, 6, 1, 0];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(k), &rational(*e, 1), "k={k}");
        }
    }

    #[test]
    fn factor_bound_holds_for_computed_factors() {
        for pp in [2u64, 3, 5] {
            for n in [2usize, 5, 10] {
                for level in 1..=10 {
                    let f = normalized_factor(p(pp), level, prec(n, 1)).unwrap();
                    let bound = factor_tail_bound(p(pp), level, n);
                    for k in 1..n {
                        assert!(valuation_at_least(f.coeff(k), pp, bound), "p={pp} level={level} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn constant_terms_are_one_over_p() {
        for pp in [2u64, 3, 5, 7] {
            for sign in Sign::ALL {
                let s = build_log_pm(p(pp), sign, prec(6, 4)).unwrap();
                assert_eq!(s.coeff(0), &rational(1, pp as i64));
                assert_eq!(s.guarantee(0), None);
            }
        }
    }

    #[test]
    fn single_coefficient_series() {
        let s = build_log_pm(p(3), Sign::Plus, prec(1, 4)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(0), &rational(1, 3));
    }

    #[test]
    fn truncation_is_sound() {
        // The partial products with K and K+1 factors agree at the guarantee.
        for pp in [2u64, 3, 5] {
            for sign in Sign::ALL {
                let pr = prec(8, 6);
                let built = construct_log_pm(p(pp), sign, pr).unwrap();
                assert!(built.factors >= 1 && built.factors <= FACTOR_CAP);
                let next = partial_log_pm(p(pp), sign, pr, built.factors + 1).unwrap();
                let again = partial_log_pm(p(pp), sign, pr, built.factors + 3).unwrap();
                for k in 0..pr.t_prec() {
                    let g = built.series.guarantee(k);
                    for other in [&next, &again] {
                        let diff = built.series.coeff(k) - other.coeff(k);
                        match g {
                            None => assert!(diff.is_zero()),
                            Some(g) => assert!(valuation_at_least(&diff, pp, g), "p={pp} k={k}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_is_monotone() {
        for pp in [2u64, 3] {
            for sign in Sign::ALL {
                let base = build_log_pm(p(pp), sign, prec(8, 4)).unwrap();
                let finer_m = build_log_pm(p(pp), sign, prec(8, 7)).unwrap();
                let longer = build_log_pm(p(pp), sign, prec(12, 4)).unwrap();
                for k in 0..8 {
                    for other in [&finer_m, &longer] {
                        let diff = base.coeff(k) - other.coeff(k);
                        match base.guarantee(k) {
                            None => assert!(diff.is_zero()),
                            Some(g) => assert!(valuation_at_least(&diff, pp, g)),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn identity_low_coefficients() {
        let report = verify_product_identity(p(3), prec(8, 6)).unwrap();
        assert!(report.rows[0].pass && report.rows[0].valuation.is_none());
        // T^1: p^2 (1/p)(1/p) = 1 exactly.
        assert_eq!(report.rows[1].valuation, None);
        assert_eq!(report.rows[1].guarantee, None);
        assert!(report.pass, "{report:#?}");
    }

    #[test]
    fn identity_detects_a_wrong_series() {
        // Perturb log^- by p^0 T: the residual at T^2 must then fail.
        let pr = prec(6, 6);
        let prime = p(3);
        let plus = build_log_pm(prime, Sign::Plus, pr).unwrap();
        let mut minus = build_log_pm(prime, Sign::Minus, pr).unwrap();
        minus.coeffs[1].value += rational(1, 1);
        let lhs = plus.mul(&minus).scale(&p_power(3, 2)).shift_t();
        let residual = lhs.sub(&series_log_classical(prime, pr));
        assert!(!residual.coeffs()[2].is_zero_at_precision(3));
    }

    #[test]
    fn valuation_profile() {
        for pp in [2u64, 3, 5] {
            for sign in Sign::ALL {
                let built = construct_log_pm(p(pp), sign, prec(10, 6)).unwrap();
                let profile = coefficient_valuation_profile(&built.series);
                assert_eq!(profile[0].valuation, Some(-1));
                for e in &profile {
                    if let Some(v) = e.valuation {
                        assert!(v >= -(1 + built.factors as i64), "p={pp} {e:?}");
                    }
                }
            }
        }
        let zero = TruncatedSeries::exact(p(3), prec(3, 2), vec![rational(1, 1)]);
        let prof = coefficient_valuation_profile(&zero);
        assert_eq!(prof[1].valuation, None);
    }

    #[test]
    fn precision_validation() {
        assert!(SeriesPrecision::new(0, 3).is_err());
        assert!(SeriesPrecision::new(3, 0).is_err());
        assert!(matches!(
            build_log_pm(p(2), Sign::Plus, prec(4, 200)),
            Err(Error::NonConvergence { .. })
        ));
    }
}
