//! Exact rational scalars and small helpers shared across the crate.
//!
//! Everything in this library computes over arbitrary-precision rationals;
//! no floating point is used anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// Rational from an integer pair `p/q`. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an integer.
pub fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn rzero() -> Rat {
    Rat::zero()
}

pub fn rone() -> Rat {
    Rat::one()
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    Rat::from_integer(acc)
}

/// Parse an exact rational written as `p` or `p/q` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator in `{s}`"))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| format!("invalid rational denominator in `{s}`"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(p, q))
}

/// Render a rational as `p` or `p/q` (canonical reduced form, sign on the numerator).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else if r.denom().is_negative() {
        // num-rational keeps denominators positive, but be defensive in output.
        format!("{}/{}", -r.numer(), -r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Deterministic pseudo-random sequence (SplitMix64) for the randomized
/// test batteries. Not cryptographic; fixed seeds keep reports reproducible.
#[derive(Clone, Debug)]
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Small rational with numerator in `-4..=4` and denominator in `1..=3`.
    pub fn small_rat(&mut self) -> Rat {
        let p = self.below(9) as i64 - 4;
        let q = self.below(3) as i64 + 1;
        rat(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(fmt_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), rint(1));
        assert_eq!(factorial(5), rint(120));
    }

    #[test]
    fn det_rng_is_deterministic() {
        let mut a = DetRng::new(42);
        let mut b = DetRng::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
