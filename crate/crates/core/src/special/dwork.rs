use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalParam {
    num: i64,
    den: i64,
}

impl RationalParam {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidParameter(format!("denominator must be positive: {num}/{den}")));
        }
        if num.gcd(&den) != 1 {
            return Err(Error::InvalidParameter(format!("{num}/{den} is not reduced")));
        }
        Ok(RationalParam { num, den })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn as_ratio(&self) -> Rational64 {
        Rational64::new_raw(self.num, self.den)
    }

    pub fn in_unit_interval(&self) -> bool {
        0 < self.num && self.num < self.den
    }
}

impl FromStr for RationalParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected a fraction num/den, got {s:?}"));
        let (n, d) = s.trim().split_once('/').ok_or_else(bad)?;
        let num = n.trim().parse::<i64>().map_err(|_| bad())?;
        let den = d.trim().parse::<i64>().map_err(|_| bad())?;
        RationalParam::new(num, den)
    }
}

impl fmt::Display for RationalParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The Dwork prime `(a+k)/p`, `k ∈ [0, p-1]` the unique shift making the
/// numerator divisible by `p`.
pub fn dwork_prime(a: RationalParam, p: u64) -> Result<RationalParam> {
    let p = p as i64;
    if a.den % p == 0 {
        return Err(Error::InvalidParameter(format!("p = {p} divides the denominator of {a}")));
    }
    // k ≡ -num * den^{-1} (mod p)
    let den_inv = a.den.extended_gcd(&p).x.mod_floor(&p);
    let k = (-a.num * den_inv).mod_floor(&p);
    let top = a.num + k * a.den;
    debug_assert_eq!(top % p, 0);
    RationalParam::new(top / p, a.den)
}

/// The periodic Dwork orbit `(a^(k), b^(k))`, `k = 0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pairs: Vec<(RationalParam, RationalParam)>,
}

impl Orbit {
    pub fn new(a: RationalParam, b: RationalParam, p: u64) -> Result<Self> {
        for x in [a, b] {
            if !x.in_unit_interval() {
                return Err(Error::InvalidParameter(format!("{x} is not in (0,1)")));
            }
        }
        let mut pairs = vec![(a, b)];
        let (mut x, mut y) = (a, b);
        // the Dwork prime permutes {j/den : 0 < j < den}, so the orbit closes
        let bound = (a.den * b.den) as usize + 1;
        loop {
            x = dwork_prime(x, p)?;
            y = dwork_prime(y, p)?;
            if (x, y) == (a, b) {
                return Ok(Orbit { pairs });
            }
            if pairs.len() > bound {
                return Err(Error::InternalConsistency("Dwork orbit failed to close".into()));
            }
            pairs.push((x, y));
        }
    }

    /// Orbit length `m`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(a^(k), b^(k))`, indices taken mod `m`.
    pub fn pair(&self, k: usize) -> (RationalParam, RationalParam) {
        self.pairs[k % self.pairs.len()]
    }

    pub fn pairs(&self) -> &[(RationalParam, RationalParam)] {
        &self.pairs
    }
}

pub fn orbit_length(a: RationalParam, b: RationalParam, p: u64) -> Result<usize> {
    Ok(Orbit::new(a, b, p)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> RationalParam {
        RationalParam::new(n, d).unwrap()
    }

    #[test]
    fn dwork_prime_examples() {
        assert_eq!(dwork_prime(q(1, 2), 5).unwrap(), q(1, 2));
        assert_eq!(dwork_prime(q(1, 3), 5).unwrap(), q(2, 3));
        assert_eq!(dwork_prime(q(2, 3), 5).unwrap(), q(1, 3));
        assert!(matches!(dwork_prime(q(1, 5), 5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_length(q(1, 2), q(1, 2), 5).unwrap(), 1);
        assert_eq!(orbit_length(q(1, 3), q(1, 3), 5).unwrap(), 2);
        assert_eq!(orbit_length(q(1, 2), q(1, 3), 5).unwrap(), 2);
        assert_eq!(orbit_length(q(1, 4), q(3, 4), 7).unwrap(), 2);
    }

    #[test]
    fn dwork_prime_stays_in_interval() {
        for p in [5u64, 7, 11, 13] {
            for den in 2..p as i64 {
                for num in 1..den {
                    if num.gcd(&den) != 1 {
                        continue;
                    }
                    let a = q(num, den);
                    let a1 = dwork_prime(a, p).unwrap();
                    assert_eq!(a1.den(), den);
                    assert!(a1.in_unit_interval());
                    // p a' - a ∈ {0, .., p-1}
                    let shift = a1.as_ratio() * Rational64::from(p as i64) - a.as_ratio();
                    assert!(shift.is_integer());
                    assert!((0..p as i64).contains(&shift.to_integer()));
                }
            }
        }
    }

    #[test]
    fn parse_fraction() {
        assert_eq!("1/2".parse::<RationalParam>().unwrap(), q(1, 2));
        assert!("2/4".parse::<RationalParam>().is_err());
        assert!("1/0".parse::<RationalParam>().is_err());
        assert!("1/-2".parse::<RationalParam>().is_err());
        assert!("x".parse::<RationalParam>().is_err());
    }
}
