use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    W,
    S,
    H,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "W" | "w" => Ok(Family::W),
            "S" | "s" => Ok(Family::S),
            "H" | "h" => Ok(Family::H),
            other => Err(Error::InvalidContext(format!(
                "unknown algebra family '{other}' (expected W, S or H)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::W => "W",
            Family::S => "S",
            Family::H => "H",
        };
        f.write_str(c)
    }
}

/// Which of W(n), S(n), H(2r) we are working in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraContext {
    family: Family,
    n: usize,
}

impl AlgebraContext {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidContext(format!(
                "{family}({n}): the number of variables must be at least 2"
            )));
        }
        if family == Family::H && n % 2 != 0 {
            return Err(Error::InvalidContext(format!(
                "H({n}): the number of variables must be even"
            )));
        }
        if n > 16 {
            return Err(Error::InvalidContext(format!("{family}({n}): at most 16 variables are supported")));
        }
        Ok(AlgebraContext { family, n })
    }

    pub fn w(n: usize) -> Result<Self> {
        Self::new(Family::W, n)
    }

    pub fn s(n: usize) -> Result<Self> {
        Self::new(Family::S, n)
    }

    pub fn h(n: usize) -> Result<Self> {
        Self::new(Family::H, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Half the number of variables for H; meaningless otherwise.
    pub fn r(&self) -> usize {
        self.n / 2
    }

    /// Number of coordinates of a weight: n for W and S, r for H.
    pub fn weight_len(&self) -> usize {
        match self.family {
            Family::H => self.r(),
            _ => self.n,
        }
    }

    /// Name of the degree-zero part: gl, sl or sp.
    pub fn g0_name(&self) -> &'static str {
        match self.family {
            Family::W => "gl",
            Family::S => "sl",
            Family::H => "sp",
        }
    }

    /// `σ(i)` for 0-based `i`.
    pub fn sigma(&self, i: usize) -> i64 {
        if i < self.r() {
            1
        } else {
            -1
        }
    }

    /// `i′` for 0-based `i`.
    pub fn prime(&self, i: usize) -> usize {
        let r = self.r();
        if i < r {
            i + r
        } else {
            i - r
        }
    }

    pub(crate) fn ensure_same(&self, other: &AlgebraContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch(self.to_string(), other.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(AlgebraContext::w(1).is_err());
        assert!(AlgebraContext::h(3).is_err());
        assert!(AlgebraContext::h(4).is_ok());
        assert_eq!(AlgebraContext::h(4).unwrap().weight_len(), 2);
        assert_eq!("S".parse::<Family>().unwrap(), Family::S);
        assert!("K".parse::<Family>().is_err());
    }

    #[test]
    fn symplectic_pairing() {
        let h = AlgebraContext::h(4).unwrap();
        assert_eq!(h.prime(0), 2);
        assert_eq!(h.prime(3), 1);
        assert_eq!(h.sigma(1), 1);
        assert_eq!(h.sigma(2), -1);
    }
}
