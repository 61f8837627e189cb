//! Certified root enclosures for `P_t(lambda) = 1`.
//!
//! `P_t` is strictly increasing on `[0, 1)` (its first nonzero coefficient
//! is positive), so plain bisection on exact dyadic points yields an
//! enclosure `[lo, hi]` with `P(lo) <= 1 <= P(hi)` decided in integer
//! arithmetic; no rounding enters anywhere.

use std::cmp::Ordering;

use num::{BigInt, One, Signed, Zero};

use crate::dimension::series::SeriesRep;
use crate::error::{Error, Result};
use crate::rat::{Dyadic, Rational};

/// A certified bracket of the unique root `lambda` of `P(x) = 1` in
/// `(0, 1]`: `P(lo) <= 1 <= P(hi)` with outward rounding, `hi - lo` at
/// most the requested tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootEnclosure {
    pub fn exact(v: Rational) -> Self {
        RootEnclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.hi + &self.lo) / Rational::from(BigInt::from(2))
    }

    pub fn is_exactly_one(&self) -> bool {
        self.lo.is_one() && self.hi.is_one()
    }
}

/// Solves `P(lambda) = 1` with a certified enclosure of width `<= tol`.
///
/// When the limit of `P` at `1` is `<= 1` (a polynomial whose coefficients
/// sum to one) the root is `lambda = 1` exactly and is returned with zero
/// width. Truncated series are solved through their finite part and the
/// enclosure is widened by the certified tail via the derivative lower
/// bound `P' >= c_1 >= 1`.
pub fn solve_lambda(rep: &SeriesRep, tol: &Rational) -> Result<RootEnclosure> {
    if !tol.is_positive() {
        return Err(Error::BadTolerance(tol.to_string()));
    }
    if rep.is_zero() {
        return Err(Error::ZeroSeries);
    }
    match rep {
        SeriesRep::Truncated { coeffs, base, .. } => {
            if rep.limit_at_one().expect("finite form") <= BigInt::one() {
                // The finite part roots at 1 where the tail bound diverges;
                // nothing certifiable can be said at this depth.
                return Err(Error::ToleranceUnreachable {
                    tail: "divergent at lambda = 1".into(),
                });
            }
            if coeffs.first().copied().unwrap_or(0) < 1 {
                return Err(Error::InvalidInput(
                    "truncated solve needs c_1 >= 1 for the tail propagation bound".into(),
                ));
            }
            let finite = SeriesRep::Polynomial {
                coeffs: coeffs.clone(),
                base: *base,
            };
            let half = tol / Rational::from(BigInt::from(2));
            let inner = bisect(&finite, &half)?;
            let tail = rep.tail_at(&inner.hi);
            if tail > half {
                return Err(Error::ToleranceUnreachable {
                    tail: tail.to_string(),
                });
            }
            let lo = (&inner.lo - &tail).max(Rational::zero());
            Ok(RootEnclosure { lo, hi: inner.hi })
        }
        _ => {
            if let Some(sum) = rep.limit_at_one() {
                if sum <= BigInt::one() {
                    // Nonzero series with sum(c_k) <= 1 means exactly one
                    // coefficient equal to 1, so P(1) = 1 exactly.
                    return Ok(RootEnclosure::exact(Rational::one()));
                }
            }
            bisect(rep, tol)
        }
    }
}

fn bisect(rep: &SeriesRep, tol: &Rational) -> Result<RootEnclosure> {
    let mut lo = Dyadic::zero();
    // Find an upper bracket 1 - 2^-k with P >= 1; P(0) = 0 < 1 starts the
    // lower side. The limit at 1 exceeds 1, so this terminates.
    let mut hi = None;
    for k in 1..=4096u64 {
        let probe = Dyadic::new((BigInt::one() << k) - BigInt::one(), k);
        match rep.cmp_one_dyadic(&probe) {
            Ordering::Less => lo = probe,
            Ordering::Equal => return Ok(RootEnclosure::exact(probe.to_rational())),
            Ordering::Greater => {
                hi = Some(probe);
                break;
            }
        }
    }
    let mut hi = hi.ok_or(Error::PrecisionCap { cap: 4096 })?;
    loop {
        if hi.sub(&lo).to_rational() <= *tol {
            return Ok(RootEnclosure {
                lo: lo.to_rational(),
                hi: hi.to_rational(),
            });
        }
        let mid = Dyadic::halfway(&lo, &hi);
        match rep.cmp_one_dyadic(&mid) {
            Ordering::Less => lo = mid,
            Ordering::Equal => return Ok(RootEnclosure::exact(mid.to_rational())),
            Ordering::Greater => hi = mid,
        }
    }
}
