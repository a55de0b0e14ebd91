//! Exact arithmetic for the plus/minus p-adic logarithms.
//!
//! The crate builds `log_p^+` and `log_p^-` as truncated power series with
//! tracked p-adic precision, evaluates the distributions `mu_+` and `mu_-`
//! whose Amice transforms are these series, and checks the identities that
//! tie the two descriptions together:
//!
//! - [`digits`]: residues mod `p^n`, base-p digits and the digit-pattern sets.
//! - [`cyclotomic`]: `p`-power cyclotomic polynomials and the rings `Q(zeta_{p^n})`.
//! - [`series`]: truncated series at joint `(T, p)` precision.
//! - [`distribution`]: closed-form values of `mu_±`, the character-sum oracle,
//!   integration of step functions and the interpolation check.
//! - [`bivariate`]: the four two-variable products on `Z_p^2`.
//! - [`verify`]: the verification suites behind the `plusminus verify` command.
//!
//! Every computation is exact; no floating point is involved.

#![allow(clippy::manual_div_ceil)]

// floor((n + c) / 2) is kept in the form it is usually written.


pub mod bivariate;
pub mod cyclotomic;
pub mod digits;
pub mod distribution;
mod error;
pub mod rational;
pub mod series;
pub mod verify;

pub use bivariate::{BiResidue, BiSign};
pub use cyclotomic::{CycloPoly, CyclotomicElement, SparsePoly};
pub use digits::{Prime, Residue};
pub use distribution::{DistValue, StepFunction};
pub use error::{Error, Result};
pub use series::{SeriesPrecision, TruncatedSeries};

use std::fmt;
use std::str::FromStr;

/// Version of the JSON/CSV output formats produced by the CLI.
pub const FORMAT_VERSION: u32 = 1;

/// Default cap on the size of any enumerated set (cosets, `R_n^±`, supports).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Selects the plus or the minus logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    /// Level of the `j`-th cyclotomic factor in the defining product
    /// (`2j` for plus, `2j - 1` for minus), `j >= 1`.
    pub fn factor_level(self, j: u32) -> u32 {
        match self {
            Sign::Plus => 2 * j,
            Sign::Minus => 2 * j - 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("unknown sign {other:?}"))),
        }
    }
}
