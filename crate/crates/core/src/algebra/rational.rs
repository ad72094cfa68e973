//! Rational scalars and vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always normalized (`gcd(num, den) = 1`, `den > 0`).
pub type Rational = BigRational;

/// Rational vector.
pub type QVec = Vec<Rational>;

/// Integer (lattice) vector.
pub type ZVec = Vec<BigInt>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zvec(xs: &[i64]) -> ZVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn z_to_q(v: &[BigInt]) -> QVec {
    v.iter().map(from_big).collect()
}

/// Returns the integer vector if every entry of `v` is integral.
pub fn q_to_z(v: &[Rational]) -> Option<ZVec> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

/// Fractional part `{x}` in `[0, 1)`.
pub fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Formats as `"p/q"`, or `"n"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(p), Some(q)) if p.is_finite() && q.is_finite() => p / q,
        _ => {
            // Scale down huge operands before dividing.
            let shift = x.denom().bits().max(x.numer().bits()).saturating_sub(1000);
            let p = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let q = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            p / q
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_z(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rational], c: &Rational) -> QVec {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Writes `v = scale * p` with `p` a primitive integer vector whose first
/// nonzero entry is positive. Returns `None` for the zero vector.
pub fn primitive_canonical(v: &[Rational]) -> Option<(ZVec, Rational)> {
    let (p, scale) = primitive(v)?;
    let lead_negative = p.iter().find(|x| !x.is_zero()).map(|x| x.is_negative())?;
    if lead_negative {
        Some((p.iter().map(|x| -x).collect(), -scale))
    } else {
        Some((p, scale))
    }
}

/// Writes `v = scale * p` with `p` primitive integer and `scale > 0`.
pub fn primitive(v: &[Rational]) -> Option<(ZVec, Rational)> {
    if is_zero_vec(v) {
        return None;
    }
    let lcm_den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: ZVec = v.iter().map(|x| (x * from_big(&lcm_den)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let p: ZVec = ints.iter().map(|x| x / &g).collect();
    let scale = Rational::new(g, lcm_den);
    Some((p, scale))
}

pub fn primitive_z(v: &[BigInt]) -> ZVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}
