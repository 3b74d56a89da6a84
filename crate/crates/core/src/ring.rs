use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficient ring of a cochain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
    Z2,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("coefficient {0} is not an integer")]
    NotIntegral(String),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
}

impl Ring {
    /// Whether `2 != 0`, i.e. whether orientation-reversing automorphisms kill a diagram.
    pub fn char_not_two(self) -> bool {
        self != Ring::Z2
    }

    /// Bring a coefficient into the ring's normal form.
    pub fn normalize(self, c: &BigRational) -> Result<BigRational, CoeffError> {
        match self {
            Ring::Q => Ok(c.clone()),
            Ring::Z => {
                if c.is_integer() {
                    Ok(c.clone())
                } else {
                    Err(CoeffError::NotIntegral(c.to_string()))
                }
            }
            Ring::Z2 => {
                if !c.is_integer() {
                    return Err(CoeffError::NotIntegral(c.to_string()));
                }
                let r = c.to_integer().mod_floor(&BigInt::from(2));
                Ok(BigRational::from_integer(r))
            }
        }
    }

    pub fn reduce_int(self, c: &BigInt) -> BigInt {
        match self {
            Ring::Z2 => c.mod_floor(&BigInt::from(2)),
            _ => c.clone(),
        }
    }

    pub fn parse_coeff(self, s: &str) -> Result<BigRational, CoeffError> {
        let v = parse_rational(s)?;
        self.normalize(&v)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CoeffError> {
    let t = s.trim();
    let err = || CoeffError::Parse(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| err())?))
    }
}

pub fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
            Ring::Z2 => "Z2",
        })
    }
}

impl FromStr for Ring {
    type Err = String;
    fn from_str(s: &str) -> Result<Ring, String> {
        match s {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            "Z2" | "z2" => Ok(Ring::Z2),
            _ => Err(format!("unknown ring {s:?} (expected Z, Q or Z2)")),
        }
    }
}
