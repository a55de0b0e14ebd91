//! `p`-power cyclotomic polynomials and exact arithmetic in
//! `Q[x] / Phi_{p^n}(x)`.
//!
//! Here `Phi_n(T) = sum_{t<p} T^(p^(n-1) t)` is the `p^n`-th cyclotomic
//! polynomial. The class of `x` in `Q[x] / Phi_n` is a fixed primitive
//! `p^n`-th root of unity `zeta_n`; every `p^n`-th root of unity, primitive or
//! not, is a power of it, so one ring per `(p, n)` is enough.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::from_int;
use crate::{Error, Prime, Result, Sign, DEFAULT_ENUMERATION_CAP};

/// A polynomial with few nonzero terms, keyed by exponent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<u64, BigRational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn one() -> Self {
        SparsePoly::monomial(0, BigRational::one())
    }

    pub fn monomial(exp: u64, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        SparsePoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, BigRational)>>(terms: I) -> Self {
        let mut poly = SparsePoly::zero();
        for (e, c) in terms {
            poly.add_term(e, c);
        }
        poly
    }

    fn add_term(&mut self, exp: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn support(&self) -> Vec<u64> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: u64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Schoolbook product. Fails if the naive term count `|a| * |b|`
    /// exceeds `cap`, or an exponent overflows.
    pub fn mul_capped(&self, other: &SparsePoly, cap: u64) -> Result<SparsePoly> {
        let work = self.len() as u64 * other.len() as u64;
        if work > cap {
            return Err(Error::ResourceCap {
                what: "sparse product".into(),
                needed: work.to_string(),
                cap,
            });
        }
        let mut out = SparsePoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                let e = ea.checked_add(eb).ok_or_else(|| {
                    Error::InvalidArgument("polynomial exponent overflows 64 bits".into())
                })?;
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&e, c)| c * num_traits::pow(x.clone(), e as usize))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

/// `Phi_level(T)` for the prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycloPoly {
    p: Prime,
    level: u32,
}

impl CycloPoly {
    pub fn new(p: Prime, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("cyclotomic level must be >= 1".into()));
        }
        p.pow(level)?;
        Ok(CycloPoly { p, level })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Spacing `p^(level-1)` between consecutive exponents.
    pub fn step(&self) -> u64 {
        self.p.get().pow(self.level - 1)
    }

    pub fn degree(&self) -> u64 {
        self.step() * (self.p.get() - 1)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> {
        let step = self.step();
        (0..self.p.get()).map(move |t| t * step)
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly::from_terms(self.exponents().map(|e| (e, BigRational::one())))
    }
}

pub fn cyclo_poly(p: Prime, n: u32) -> Result<CycloPoly> {
    CycloPoly::new(p, n)
}

/// `prod_{j=1}^{count} Phi_{level(j)}` computed by actual multiplication.
fn factor_product(p: Prime, count: u32, sign: Sign, cap: u64) -> Result<SparsePoly> {
    p.pow_capped(count, "cyclotomic product support", cap)?;
    let mut acc = SparsePoly::one();
    for j in 1..=count {
        let factor = CycloPoly::new(p, sign.factor_level(j))?.to_sparse();
        acc = acc.mul_capped(&factor, cap)?;
    }
    Ok(acc)
}

/// `Phi_2 Phi_4 ... Phi_{2 count}`.
pub fn even_product(p: Prime, count: u32) -> Result<SparsePoly> {
    factor_product(p, count, Sign::Plus, DEFAULT_ENUMERATION_CAP)
}

/// `Phi_1 Phi_3 ... Phi_{2 count - 1}`.
pub fn odd_product(p: Prime, count: u32) -> Result<SparsePoly> {
    factor_product(p, count, Sign::Minus, DEFAULT_ENUMERATION_CAP)
}

pub fn signed_product(p: Prime, count: u32, sign: Sign) -> Result<SparsePoly> {
    factor_product(p, count, sign, DEFAULT_ENUMERATION_CAP)
}

/// An element of `Q(zeta_n) = Q[x] / Phi_n(x)`, stored as the canonical
/// representative of degree `< p^(n-1) (p-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElement {
    p: Prime,
    level: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    fn check_level(p: Prime, level: u32) -> Result<u64> {
        if level == 0 {
            return Err(Error::InvalidArgument("cyclotomic level must be >= 1".into()));
        }
        p.pow_capped(level, "cyclotomic ring dimension", DEFAULT_ENUMERATION_CAP)
    }

    fn dim(p: Prime, level: u32) -> usize {
        (p.get().pow(level - 1) * (p.get() - 1)) as usize
    }

    pub fn zero(p: Prime, level: u32) -> Result<Self> {
        Self::check_level(p, level)?;
        Ok(CyclotomicElement { p, level, coeffs: vec![BigRational::zero(); Self::dim(p, level)] })
    }

    pub fn from_rational(p: Prime, level: u32, q: BigRational) -> Result<Self> {
        let mut z = Self::zero(p, level)?;
        z.coeffs[0] = q;
        Ok(z)
    }

    pub fn one(p: Prime, level: u32) -> Result<Self> {
        Self::from_rational(p, level, BigRational::one())
    }

    /// Reduce a vector indexed by exponents modulo `p^level` (i.e. an element
    /// of `Q[x]/(x^(p^level) - 1)`) to its class modulo `Phi_level`.
    pub fn from_cyclic(p: Prime, level: u32, mut cyclic: Vec<BigRational>) -> Result<Self> {
        let order = Self::check_level(p, level)? as usize;
        if cyclic.len() != order {
            return Err(Error::InvalidArgument(format!(
                "cyclic vector has length {}, expected {order}",
                cyclic.len()
            )));
        }
        // x^((p-1) b + r) = -sum_{t < p-1} x^(t b + r) modulo Phi.
        let block = order / p.get() as usize;
        let top = (p.get() as usize - 1) * block;
        for r in 0..block {
            let c = std::mem::take(&mut cyclic[top + r]);
            if c.is_zero() {
                continue;
            }
            for t in 0..p.get() as usize - 1 {
                cyclic[t * block + r] -= &c;
            }
        }
        cyclic.truncate(top);
        Ok(CyclotomicElement { p, level, coeffs: cyclic })
    }

    /// `zeta_level^e`, `e` of any sign.
    pub fn zeta_power(p: Prime, level: u32, e: i128) -> Result<Self> {
        let order = Self::check_level(p, level)?;
        let mut cyclic = vec![BigRational::zero(); order as usize];
        cyclic[e.rem_euclid(order as i128) as usize] = BigRational::one();
        Self::from_cyclic(p, level, cyclic)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn order(&self) -> u64 {
        self.p.get().pow(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicElement {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.level).expect("level already validated");
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn assert_same_ring(&self, other: &Self) {
        assert!(
            self.p == other.p && self.level == other.level,
            "mixing cyclotomic rings of level {} (p={}) and {} (p={})",
            self.level,
            self.p,
            other.level,
            other.p
        );
    }
}

impl std::fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn add(self, other: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_ring(other);
        CyclotomicElement {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn sub(self, other: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_ring(other);
        CyclotomicElement {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn neg(self) -> CyclotomicElement {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn mul(self, other: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_ring(other);
        let order = self.order() as usize;
        let mut cyclic = vec![BigRational::zero(); order];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                cyclic[(i + j) % order] += a * b;
            }
        }
        CyclotomicElement::from_cyclic(self.p, self.level, cyclic).expect("same ring")
    }
}

pub fn zeta_power(p: Prime, n: u32, e: i128) -> Result<CyclotomicElement> {
    CyclotomicElement::zeta_power(p, n, e)
}

/// Substitute `x -> zeta_n` and reduce.
pub fn eval_at_zeta(poly: &SparsePoly, p: Prime, n: u32) -> Result<CyclotomicElement> {
    eval_at_zeta_power(poly, p, n, 1)
}

/// Substitute `x -> zeta_n^step`. With `step = p^(n-k)` this evaluates at
/// `zeta_k` inside the level-`n` ring.
pub fn eval_at_zeta_power(
    poly: &SparsePoly,
    p: Prime,
    n: u32,
    step: u64,
) -> Result<CyclotomicElement> {
    let order = CyclotomicElement::check_level(p, n)?;
    let mut cyclic = vec![BigRational::zero(); order as usize];
    for (e, c) in poly.terms() {
        let idx = ((e as u128 * step as u128) % order as u128) as usize;
        cyclic[idx] += c;
    }
    CyclotomicElement::from_cyclic(p, n, cyclic)
}

/// `sum_{zeta in mu_{p^n}} sum_e w(e) zeta^e`, by the collapse
/// `sum_zeta zeta^m = p^n [p^n | m]`.
pub fn character_sum(
    p: Prime,
    n: u32,
    weights: &BTreeMap<i128, BigRational>,
) -> Result<BigRational> {
    let order = p.pow(n)? as i128;
    let hit: BigRational = weights
        .iter()
        .filter(|(e, _)| e.rem_euclid(order) == 0)
        .map(|(_, w)| w.clone())
        .sum();
    Ok(hit * from_int(order as i64))
}

/// Double sum over `mu_{p^n} x mu_{p^m}` of `sum w(e1, e2) zeta^e1 xi^e2`.
pub fn character_sum_2d(
    p: Prime,
    n: u32,
    m: u32,
    weights: &BTreeMap<(i128, i128), BigRational>,
) -> Result<BigRational> {
    let order_n = p.pow(n)? as i128;
    let order_m = p.pow(m)? as i128;
    let hit: BigRational = weights
        .iter()
        .filter(|((e1, e2), _)| e1.rem_euclid(order_n) == 0 && e2.rem_euclid(order_m) == 0)
        .map(|(_, w)| w.clone())
        .sum();
    Ok(hit * BigRational::from_integer(BigInt::from(order_n * order_m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::enumerate_r;
    use proptest::prelude::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn q(n: i64) -> BigRational {
        from_int(n)
    }

    fn poly(terms: &[(u64, i64)]) -> SparsePoly {
        SparsePoly::from_terms(terms.iter().map(|&(e, c)| (e, q(c))))
    }

    /// Root-by-root summation in the cyclotomic ring.
    fn character_sum_literal(
        p: Prime,
        n: u32,
        weights: &BTreeMap<i128, BigRational>,
    ) -> Result<BigRational> {
        let order = p.pow(n).unwrap() as i128;
        let mut acc = CyclotomicElement::zero(p, n)?;
        for k in 0..order {
            for (e, w) in weights {
                acc = &acc + &CyclotomicElement::zeta_power(p, n, k * e)?.scale(w);
            }
        }
        acc.to_rational()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclo_poly(p(3), 1).unwrap().to_sparse(), poly(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(cyclo_poly(p(2), 3).unwrap().to_sparse(), poly(&[(0, 1), (4, 1)]));
        assert_eq!(cyclo_poly(p(5), 1).unwrap().to_sparse().eval_rational(&q(1)), q(5));
        let phi = cyclo_poly(p(3), 3).unwrap();
        assert_eq!(phi.degree(), 18);
        assert_eq!(phi.to_sparse().len(), 3);
        assert!(cyclo_poly(p(3), 0).is_err());
    }

    #[test]
    fn products_of_cyclotomics() {
        assert_eq!(even_product(p(2), 1).unwrap(), poly(&[(0, 1), (2, 1)]));
        assert_eq!(even_product(p(3), 1).unwrap(), poly(&[(0, 1), (3, 1), (6, 1)]));
        assert_eq!(even_product(p(2), 0).unwrap(), SparsePoly::one());
        assert_eq!(odd_product(p(3), 1).unwrap(), poly(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(odd_product(p(2), 2).unwrap(), poly(&[(0, 1), (1, 1), (4, 1), (5, 1)]));
        assert_eq!(odd_product(p(5), 0).unwrap(), SparsePoly::one());
        assert!(matches!(
            factor_product(p(5), 4, Sign::Plus, 100),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn product_supports_are_r_sets() {
        for pp in [2u64, 3, 5] {
            for count in 0..=3 {
                for sign in Sign::ALL {
                    let prod = signed_product(p(pp), count, sign).unwrap();
                    assert_eq!(prod.support(), enumerate_r(p(pp), count, sign).unwrap());
                    assert!(prod.terms().all(|(_, c)| c.is_one()));
                }
            }
        }
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(zeta_power(p(3), 1, 3).unwrap(), CyclotomicElement::one(p(3), 1).unwrap());
        let z = zeta_power(p(2), 2, 1).unwrap();
        assert_eq!(z.coeffs(), &[q(0), q(1)]);
        assert_eq!(zeta_power(p(3), 1, 2).unwrap().coeffs(), &[q(-1), q(-1)]);
        assert_eq!(zeta_power(p(3), 2, -1).unwrap(), zeta_power(p(3), 2, 8).unwrap());
    }

    #[test]
    fn zeta_has_exact_order() {
        for (pp, n) in [(2u64, 1u32), (2, 3), (3, 1), (3, 2), (5, 2), (7, 1)] {
            let z = zeta_power(p(pp), n, 1).unwrap();
            let one = CyclotomicElement::one(p(pp), n).unwrap();
            assert_eq!(z.pow(pp.pow(n)), one);
            assert_ne!(z.pow(pp.pow(n - 1)), one);
        }
    }

    #[test]
    fn evaluation_at_zeta() {
        // Phi_m(zeta_n) = p for m > n.
        for pp in [2u64, 3, 5] {
            for n in 1..=2 {
                for m in n + 1..=4 {
                    let phi = cyclo_poly(p(pp), m).unwrap().to_sparse();
                    let val = eval_at_zeta(&phi, p(pp), n).unwrap();
                    assert_eq!(val.to_rational().unwrap(), q(pp as i64));
                }
                // and Phi_n(zeta_n) = 0
                let phi = cyclo_poly(p(pp), n).unwrap().to_sparse();
                assert!(eval_at_zeta(&phi, p(pp), n).unwrap().is_zero());
            }
        }
        assert_eq!(eval_at_zeta(&SparsePoly::one(), p(3), 2).unwrap().to_rational().unwrap(), q(1));
        let x = poly(&[(1, 1)]);
        assert_eq!(eval_at_zeta(&x, p(2), 1).unwrap().to_rational().unwrap(), q(-1));
    }

    #[test]
    fn character_sum_examples() {
        let w = |e: i128| BTreeMap::from([(e, q(1))]);
        assert_eq!(character_sum(p(3), 1, &w(0)).unwrap(), q(3));
        assert_eq!(character_sum(p(3), 1, &w(1)).unwrap(), q(0));
        assert_eq!(character_sum(p(2), 2, &w(4)).unwrap(), q(4));
    }

    #[test]
    fn character_sum_collapse_matches_literal_sum() {
        for (pp, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let order = pp.pow(n) as i128;
            for m in -(order * pp as i128) + 1..order * pp as i128 {
                let w = BTreeMap::from([(m, q(1))]);
                let collapsed = character_sum(p(pp), n, &w).unwrap();
                let expected = if m % order == 0 { q(order as i64) } else { q(0) };
                assert_eq!(collapsed, expected, "p={pp} n={n} m={m}");
                assert_eq!(character_sum_literal(p(pp), n, &w).unwrap(), expected);
            }
        }
    }

    #[test]
    fn literal_sum_of_non_galois_stable_input_is_rejected() {
        // A single root, not a full orbit sum, is irrational.
        let z = zeta_power(p(3), 1, 1).unwrap();
        assert!(matches!(z.to_rational(), Err(Error::NotRational(_))));
    }

    #[test]
    fn two_dimensional_sum() {
        let w = BTreeMap::from([((9i128, 3i128), q(2)), ((9, 1), q(5)), ((0, 0), q(1))]);
        // p=3, n=2, m=1: only (9,3) and (0,0) survive.
        assert_eq!(character_sum_2d(p(3), 2, 1, &w).unwrap(), q(3 * 27));
    }

    fn element(pp: u64, n: u32) -> impl Strategy<Value = CyclotomicElement> {
        let order = pp.pow(n) as usize;
        proptest::collection::vec(-5i64..=5, order).prop_map(move |v| {
            CyclotomicElement::from_cyclic(p(pp), n, v.into_iter().map(q).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in element(3, 2), b in element(3, 2), c in element(3, 2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, CyclotomicElement::zero(p(3), 2).unwrap());
        }

        #[test]
        fn multiplication_matches_polynomial_product(
            a in proptest::collection::vec(-4i64..=4, 1..10),
            b in proptest::collection::vec(-4i64..=4, 1..10),
        ) {
            // reduce(f) * reduce(g) = reduce(f * g)
            let f = SparsePoly::from_terms(a.iter().enumerate().map(|(i, &c)| (i as u64, q(c))));
            let g = SparsePoly::from_terms(b.iter().enumerate().map(|(i, &c)| (i as u64, q(c))));
            let fg = f.mul_capped(&g, 1000).unwrap();
            let lhs = &eval_at_zeta(&f, p(2), 3).unwrap() * &eval_at_zeta(&g, p(2), 3).unwrap();
            prop_assert_eq!(lhs, eval_at_zeta(&fg, p(2), 3).unwrap());
        }
    }
}
