//! Certified base-`d` logarithms by binary digit extraction.
//!
//! For `s` in `[1, d)` the first binary digit of `log_d s` is 1 iff
//! `s^2 >= d`; squaring (and dividing by `d` on a 1-digit) walks the whole
//! expansion. The iteration runs on outward-rounded dyadic intervals at a
//! working precision that doubles on an ambiguous digit until a cap, which
//! raises an explicit error.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rat::{Dyadic, Rational};

/// Working precision for the log extraction: intervals are rounded outward
/// to `start_bits` fractional bits, doubling up to `cap_bits` whenever a
/// digit cannot be certified.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub start_bits: u64,
    pub cap_bits: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: 128,
            cap_bits: 4096,
        }
    }
}

/// Smallest `j` with `2^-j <= tol` (so `j` extracted digits meet `tol`).
pub(crate) fn bits_for(tol: &Rational) -> u64 {
    let mut j = 0u64;
    let mut v = tol.clone();
    let two = Rational::from(BigInt::from(2));
    while v < Rational::one() {
        v *= &two;
        j += 1;
    }
    j
}

/// Certified enclosure of `log_d(q)` for rational `q >= 1`, with width at
/// most `2^-digits` beyond the inherent point value.
pub(crate) fn log_enclosure(
    q: &Rational,
    d: u32,
    digits: u64,
    prec: &Precision,
) -> Result<(Rational, Rational)> {
    if *q < Rational::one() {
        return Err(Error::InvalidInput(format!(
            "log extraction requires q >= 1, got {q}"
        )));
    }
    let d_rat = Rational::from(BigInt::from(d));
    let mut integer_part = 0u32;
    let mut s = q.clone();
    while s >= d_rat {
        s /= &d_rat;
        integer_part += 1;
    }
    let int_rat = Rational::from(BigInt::from(integer_part));
    if s.is_one() {
        return Ok((int_rat.clone(), int_rat));
    }

    let d_dy = Dyadic::new(BigInt::from(d), 0);
    let mut m = prec.start_bits;
    'retry: loop {
        let mut a = Dyadic::floor_of(&s, m);
        let mut b = Dyadic::ceil_of(&s, m);
        let mut acc = BigInt::zero();
        for _ in 0..digits {
            a = a.mul(&a).round_down(m);
            b = b.mul(&b).round_up(m);
            acc <<= 1;
            if a.cmp(&d_dy) != std::cmp::Ordering::Less {
                // True value is certainly >= d: digit 1, renormalize by d.
                a = Dyadic::floor_of(&(a.to_rational() / &d_rat), m);
                b = Dyadic::ceil_of(&(b.to_rational() / &d_rat), m);
                acc += 1;
            } else if b.cmp(&d_dy) == std::cmp::Ordering::Less {
                // Certainly below d: digit 0.
            } else {
                if m >= prec.cap_bits {
                    return Err(Error::PrecisionCap {
                        cap: prec.cap_bits as u32,
                    });
                }
                m = (m * 2).min(prec.cap_bits);
                continue 'retry;
            }
        }
        let scale = BigInt::one() << digits;
        let frac_lo = Rational::new(acc.clone(), scale.clone());
        let frac_hi = Rational::new(acc + BigInt::one(), scale);
        return Ok((&int_rat + frac_lo, int_rat + frac_hi));
    }
}
