//! Two-variable plus/minus logarithms `log^{*o}(T1, T2) = log^*(T1) log^o(T2)`
//! and their distributions `mu_{*o}` on `Z_p^2`.
//!
//! The value on a box `(a + p^n Z_p) x (b + p^m Z_p)` is the product of the
//! one-variable values; [`bimu_oracle`] recomputes it from the double
//! character sum over `mu_{p^n} x mu_{p^m}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::{character_sum_2d, CyclotomicElement};
use crate::distribution::{
    interpolation_rhs, mu_value, oracle_scale_exponent, oracle_weights, value_exponent, DistValue,
};
use crate::rational::p_power;
use crate::{Error, Prime, Residue, Result, Sign, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiSign {
    pub first: Sign,
    pub second: Sign,
}

impl BiSign {
    pub const ALL: [BiSign; 4] = [
        BiSign { first: Sign::Plus, second: Sign::Plus },
        BiSign { first: Sign::Plus, second: Sign::Minus },
        BiSign { first: Sign::Minus, second: Sign::Plus },
        BiSign { first: Sign::Minus, second: Sign::Minus },
    ];

    pub fn new(first: Sign, second: Sign) -> Self {
        BiSign { first, second }
    }
}

impl fmt::Display for BiSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

impl FromStr for BiSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => {
                Ok(BiSign::new(a.to_string().parse()?, b.to_string().parse()?))
            }
            _ => Err(Error::InvalidArgument(format!("unknown two-variable sign {s:?}"))),
        }
    }
}

/// The box `(a + p^n Z_p) x (b + p^m Z_p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiResidue {
    first: Residue,
    second: Residue,
}

impl BiResidue {
    pub fn new(first: Residue, second: Residue) -> Result<Self> {
        if first.prime() != second.prime() {
            return Err(Error::InvalidArgument(format!(
                "coordinates use different primes {} and {}",
                first.prime(),
                second.prime()
            )));
        }
        Ok(BiResidue { first, second })
    }

    pub fn from_integers(a: i128, b: i128, p: Prime, n: u32, m: u32) -> Result<Self> {
        Self::new(Residue::from_integer(a, p, n)?, Residue::from_integer(b, p, m)?)
    }

    pub fn first(&self) -> &Residue {
        &self.first
    }

    pub fn second(&self) -> &Residue {
        &self.second
    }

    pub fn prime(&self) -> Prime {
        self.first.prime()
    }
}

impl fmt::Display for BiResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) x ({})", self.first, self.second)
    }
}

pub fn bimu_value(s: BiSign, r: &BiResidue) -> DistValue {
    mu_value(s.first, &r.first).product(&mu_value(s.second, &r.second))
}

/// `mu_{*o}` on a box from
/// `p^-(c(n)+c(m)) sum_{zeta, xi} zeta^-a xi^-b prod Phi(zeta) prod Phi(xi)`.
pub fn bimu_oracle(s: BiSign, r: &BiResidue) -> Result<DistValue> {
    let p = r.prime();
    let (n, m) = (r.first.n(), r.second.n());
    p.pow_capped(n, "roots of unity", DEFAULT_ENUMERATION_CAP)?;
    p.pow_capped(m, "roots of unity", DEFAULT_ENUMERATION_CAP)?;
    let w1 = oracle_weights(s.first, &r.first)?;
    let w2 = oracle_weights(s.second, &r.second)?;
    let work = w1.len() as u64 * w2.len() as u64;
    if work > DEFAULT_ENUMERATION_CAP {
        return Err(Error::ResourceCap {
            what: "double character sum terms".into(),
            needed: work.to_string(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut weights = BTreeMap::new();
    for (e1, c1) in &w1 {
        for (e2, c2) in &w2 {
            weights.insert((*e1, *e2), c1 * c2);
        }
    }
    let sum = character_sum_2d(p, n, m, &weights)?;
    let scale = oracle_scale_exponent(s.first, n) + oracle_scale_exponent(s.second, m);
    DistValue::from_rational(p, &(sum * p_power(p.get(), -(scale as i64))))
}

/// Closed form by coordinate membership: `p^-(floor((n+c1)/2) + floor((m+c2)/2))`
/// with `c = 2` for plus and `3` for minus.
pub fn bimu_closed_form(s: BiSign, r: &BiResidue) -> DistValue {
    if r.first.in_s(s.first) && r.second.in_s(s.second) {
        let k = value_exponent(s.first, r.first.n()) + value_exponent(s.second, r.second.n());
        DistValue::inverse_power(r.prime(), k).expect("k >= 2")
    } else {
        DistValue::zero(r.prime())
    }
}

/// The `--` closed form as it is sometimes quoted,
/// `p^(floor((n+3)/2) - floor((m+3)/2))` (no leading minus). Kept only so the
/// verification report can show where it departs from the product formula.
pub fn minus_minus_unsigned_form(r: &BiResidue) -> BigRational {
    if r.first.in_s_minus() && r.second.in_s_minus() {
        let e = value_exponent(Sign::Minus, r.first.n()) as i64
            - value_exponent(Sign::Minus, r.second.n()) as i64;
        p_power(r.prime().get(), e)
    } else {
        BigRational::zero()
    }
}

#[derive(Debug, Clone)]
pub struct BiAmiceCheck {
    pub sign: BiSign,
    pub k1: u32,
    pub k2: u32,
    pub n: u32,
    pub integral: CyclotomicElement,
    pub closed_form: CyclotomicElement,
    pub pass: bool,
}

/// Compares `sum_{a,b mod p^n} zeta_k1^a zeta_k2^b mu_{*o}(box)` with
/// `log^*(zeta_k1 - 1) log^o(zeta_k2 - 1)` in the level-`n` ring.
pub fn biamice_check(s: BiSign, p: Prime, k1: u32, k2: u32, n: u32) -> Result<BiAmiceCheck> {
    if k1 == 0 || k2 == 0 || k1 > n || k2 > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k1, k2 <= n, got k1 = {k1}, k2 = {k2}, n = {n}"
        )));
    }
    let order = p.pow(n)?;
    p.pow_capped(2 * n, "two-variable cosets", DEFAULT_ENUMERATION_CAP)?;
    let (step1, step2) = (p.pow(n - k1)?, p.pow(n - k2)?);

    // Both characters live in the same ring, so accumulate on exponents
    // mod p^n and reduce once.
    let mut cyclic = vec![BigRational::zero(); order as usize];
    for a in 0..order {
        let ra = Residue::from_integer(a as i128, p, n)?;
        let va = mu_value(s.first, &ra);
        if va.is_zero() {
            continue;
        }
        for b in 0..order {
            let rb = Residue::from_integer(b as i128, p, n)?;
            let value = bimu_value(s, &BiResidue::new(ra.clone(), rb)?);
            if value.is_zero() {
                continue;
            }
            let e = ((a as u128 * step1 as u128 + b as u128 * step2 as u128) % order as u128) as usize;
            cyclic[e] += value.to_rational();
        }
    }
    let integral = CyclotomicElement::from_cyclic(p, n, cyclic)?;
    let closed_form =
        &interpolation_rhs(s.first, k1, p, n)? * &interpolation_rhs(s.second, k2, p, n)?;
    let pass = integral == closed_form;
    Ok(BiAmiceCheck { sign: s, k1, k2, n, integral, closed_form, pass })
}
