//! Small helpers on arbitrary-precision rationals: p-adic valuation and
//! signed powers of `p`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `v_p(n)` for a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)`; `None` stands for `v_p(0) = +inf`.
pub fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    let num = int_valuation(q.numer(), p)?;
    let den = int_valuation(q.denom(), p).expect("denominator is nonzero");
    Some(num - den)
}

/// `v_p(q) >= bound`, with the convention that zero meets every bound.
pub fn valuation_at_least(q: &BigRational, p: u64, bound: i64) -> bool {
    valuation(q, p).is_none_or(|v| v >= bound)
}

/// `p^e` as a rational, `e` of either sign.
pub fn p_power(p: u64, e: i64) -> BigRational {
    let mag = BigInt::from(BigUint::from(p).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

pub fn from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C(n, k)` for a possibly huge `n` and small `k`.
pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}
