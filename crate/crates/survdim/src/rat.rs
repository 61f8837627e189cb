//! Exact rational plumbing: parsing, outward `f64` conversion and dyadic
//! interval helpers used by the certified solvers.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a rational given as `p/q`, a plain integer, a decimal string such
/// as `0.26`, or scientific notation such as `1e-12`. Every form is exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from(n * num::pow(ten, scale as usize))
    } else {
        Rational::new(n, num::pow(ten, (-scale) as usize))
    })
}

/// True when the reduced denominator of `x` divides a power of `d`.
pub fn is_d_rational(x: &Rational, d: u32) -> bool {
    let mut den = x.denom().abs();
    let d = BigInt::from(d);
    loop {
        if den.is_one() {
            return true;
        }
        let g = num::integer::gcd(den.clone(), d.clone());
        if g.is_one() {
            return false;
        }
        den /= g;
    }
}

fn approx_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let neg = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().abs();
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let f = num::ToPrimitive::to_f64(&q).unwrap_or(f64::MAX) * 2f64.powi(-shift as i32);
    if neg {
        -f
    } else {
        f
    }
}

fn from_f64(f: f64) -> Option<Rational> {
    Rational::from_float(f)
}

/// Largest convenient `f64` that is certainly `<= x`.
pub fn to_f64_lo(x: &Rational) -> f64 {
    let mut f = approx_f64(x);
    if !f.is_finite() {
        f = if f > 0.0 { f64::MAX } else { f64::MIN };
    }
    for _ in 0..64 {
        match from_f64(f) {
            Some(r) if r <= *x => return f,
            _ => f = f.next_down(),
        }
    }
    f
}

/// Smallest convenient `f64` that is certainly `>= x`.
pub fn to_f64_hi(x: &Rational) -> f64 {
    let mut f = approx_f64(x);
    if !f.is_finite() {
        f = if f > 0.0 { f64::MAX } else { f64::MIN };
    }
    for _ in 0..64 {
        match from_f64(f) {
            Some(r) if r >= *x => return f,
            _ => f = f.next_up(),
        }
    }
    f
}

/// Midpoint-style `f64` view of a rational, good to a couple of ulps.
pub fn to_f64(x: &Rational) -> f64 {
    approx_f64(x)
}

/// A dyadic rational `mant / 2^exp`. The certified bisection and the log
/// digit extraction work entirely on these: addition, multiplication and
/// comparison are exact integer operations with no gcd reductions.
#[derive(Clone, Debug)]
pub(crate) struct Dyadic {
    pub mant: BigInt,
    pub exp: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: u64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    /// Strips trailing zero bits so mantissas stay as small as possible.
    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.mant >>= tz;
            self.exp -= tz;
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        Dyadic::new(&hi.mant + (&lo.mant << (hi.exp - lo.exp)), hi.exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.mant << (e - self.exp);
        let b = &other.mant << (e - other.exp);
        Dyadic::new(a - b, e)
    }

    pub fn halfway(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let s = a.add(b);
        Dyadic::new(s.mant, s.exp + 1)
    }

    pub fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        self.sub(other).mant.sign().cmp(&Sign::NoSign)
    }

    /// Largest dyadic with `bits` fractional bits that is `<= x`.
    pub fn floor_of(x: &Rational, bits: u64) -> Dyadic {
        let scaled = num::Integer::div_floor(&(x.numer() << bits), x.denom());
        Dyadic::new(scaled, bits)
    }

    /// Smallest dyadic with `bits` fractional bits that is `>= x`.
    pub fn ceil_of(x: &Rational, bits: u64) -> Dyadic {
        let num = x.numer() << bits;
        let (q, r) = num::Integer::div_mod_floor(&num, x.denom());
        let q = if r.is_zero() { q } else { q + 1 };
        Dyadic::new(q, bits)
    }

    /// Rounds self down to `bits` fractional bits.
    pub fn round_down(&self, bits: u64) -> Dyadic {
        if self.exp <= bits {
            return self.clone();
        }
        let shift: BigInt = BigInt::one() << (self.exp - bits);
        Dyadic::new(num::Integer::div_floor(&self.mant, &shift), bits)
    }

    /// Rounds self up to `bits` fractional bits.
    pub fn round_up(&self, bits: u64) -> Dyadic {
        if self.exp <= bits {
            return self.clone();
        }
        let shift = self.exp - bits;
        let (q, r) = num::Integer::div_mod_floor(&self.mant, &(BigInt::one() << shift));
        Dyadic::new(if r.is_zero() { q } else { q + 1 }, bits)
    }
}
