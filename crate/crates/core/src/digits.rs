//! Residues modulo `p^n`, their little-endian base-p digits, and the digit
//! pattern sets.
//!
//! `S_n^+` is the set of classes whose digits vanish at every even position
//! below `n`; `S_n^-` asks the same of the odd positions. `R_k^+` collects the
//! integers `sum a_l p^(2l+1)` over `l < k`, `R_k^-` the integers
//! `sum a_l p^(2l)`. Reducing `R_{floor(n/2)}^+` (resp. `R_{floor((n+1)/2)}^-`)
//! mod `p^n` gives exactly `S_n^+` (resp. `S_n^-`).

use std::fmt;

use crate::{Error, Result, Sign, DEFAULT_ENUMERATION_CAP};

/// A prime number, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidArgument(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e`, or an error if it does not fit in 64 bits.
    pub fn pow(self, e: u32) -> Result<u64> {
        self.0
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidArgument(format!("{}^{e} overflows 64 bits", self.0)))
    }

    /// `p^e`, additionally bounded by `cap`.
    pub fn pow_capped(self, e: u32, what: &str, cap: u64) -> Result<u64> {
        match self.0.checked_pow(e) {
            Some(v) if v <= cap => Ok(v),
            Some(v) => Err(Error::ResourceCap { what: what.into(), needed: v.to_string(), cap }),
            None => Err(Error::ResourceCap {
                what: what.into(),
                needed: format!("{}^{e}", self.0),
                cap,
            }),
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these bases suffice for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The class `a + p^n Z_p`, stored as its `n` base-p digits, units digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    p: Prime,
    digits: Vec<u64>,
}

impl Residue {
    /// Reduces `a` (any sign, any size) modulo `p^n`.
    pub fn from_integer(a: i128, p: Prime, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus exponent n must be >= 1".into()));
        }
        let modulus = p.pow(n)? as i128;
        let mut rest = a.rem_euclid(modulus) as u64;
        let digits = (0..n)
            .map(|_| {
                let d = rest % p.get();
                rest /= p.get();
                d
            })
            .collect();
        Ok(Residue { p, digits })
    }

    pub fn from_digits(p: Prime, digits: Vec<u64>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidArgument("modulus exponent n must be >= 1".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for p = {p}")));
        }
        p.pow(digits.len() as u32)?;
        Ok(Residue { p, digits })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// The representative in `[0, p^n)`.
    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p.get() + d)
    }

    pub fn modulus(&self) -> u64 {
        self.p.get().pow(self.n())
    }

    /// All digits at even positions below `n` vanish.
    pub fn in_s_plus(&self) -> bool {
        self.digits.iter().step_by(2).all(|&d| d == 0)
    }

    /// All digits at odd positions below `n` vanish.
    pub fn in_s_minus(&self) -> bool {
        self.digits.iter().skip(1).step_by(2).all(|&d| d == 0)
    }

    pub fn in_s(&self, sign: Sign) -> bool {
        match sign {
            Sign::Plus => self.in_s_plus(),
            Sign::Minus => self.in_s_minus(),
        }
    }

    /// The `p` classes `a + j p^n` modulo `p^(n+1)` refining this one.
    pub fn children(&self) -> Result<Vec<Residue>> {
        self.p.pow(self.n() + 1)?;
        Ok((0..self.p.get())
            .map(|j| {
                let mut digits = self.digits.clone();
                digits.push(j);
                Residue { p: self.p, digits }
            })
            .collect())
    }

    /// Dot-separated digits, units digit first.
    pub fn digit_string(&self) -> String {
        self.digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}^{} Z_{}", self.value(), self.p, self.n(), self.p)
    }
}

pub fn residue_from_integer(a: i128, p: Prime, n: u32) -> Result<Residue> {
    Residue::from_integer(a, p, n)
}

pub fn in_s_plus(r: &Residue) -> bool {
    r.in_s_plus()
}

pub fn in_s_minus(r: &Residue) -> bool {
    r.in_s_minus()
}

/// Every class modulo `p^n` in ascending order of representative.
pub fn all_residues(p: Prime, n: u32, cap: u64) -> Result<Vec<Residue>> {
    let count = p.pow_capped(n, "cosets", cap)?;
    (0..count).map(|a| Residue::from_integer(a as i128, p, n)).collect()
}

/// `R_count^±`, sorted ascending. `count = 0` gives `{0}`.
pub fn enumerate_r(p: Prime, count: u32, sign: Sign) -> Result<Vec<u64>> {
    enumerate_r_capped(p, count, sign, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_r_capped(p: Prime, count: u32, sign: Sign, cap: u64) -> Result<Vec<u64>> {
    p.pow_capped(count, "R set", cap)?;
    let offset = match sign {
        Sign::Plus => 1,
        Sign::Minus => 0,
    };
    let mut set = vec![0u64];
    for l in 0..count {
        let place = p.pow(2 * l + offset)?;
        let mut next = Vec::with_capacity(set.len() * p.get() as usize);
        for digit in 0..p.get() {
            let shift = digit
                .checked_mul(place)
                .ok_or_else(|| Error::InvalidArgument("R set element overflows 64 bits".into()))?;
            next.extend(set.iter().map(|&x| x + shift));
        }
        set = next;
    }
    set.sort_unstable();
    Ok(set)
}

/// Number of elements of `R` whose reduction describes `S_n^±`.
pub fn r_count_for(sign: Sign, n: u32) -> u32 {
    match sign {
        Sign::Plus => n / 2,
        Sign::Minus => (n + 1) / 2,
    }
}
