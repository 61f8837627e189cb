//! The coefficient series `P_t(X) = sum_k (d-1-e_k) X^k` built from the
//! digits of `t`, in exact closed form.
//!
//! Eventually periodic digits give a rational function
//! `A(X) + X^q B(X) / (1 - X^p)`; an all-zero period collapses to the
//! polynomial `A(X)`. A truncation of a raw digit stream carries the
//! certified tail bound `tail_coeff * x^(N+1) / (1 - x)`.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Dyadic, Rational};
use crate::words::{Base, Expansion};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeriesRep {
    /// `P(X) = sum coeffs[k-1] X^k`, finitely many terms.
    Polynomial { coeffs: Vec<u32>, base: Base },
    /// `P(X) = A(X) + X^q B(X) / (1 - X^p)` with `A` from the preperiod
    /// coefficients and `B` (not identically zero) from the period.
    RationalFn {
        pre_coeffs: Vec<u32>,
        per_coeffs: Vec<u32>,
        base: Base,
    },
    /// First `coeffs.len()` coefficients of an unknown continuation whose
    /// coefficients are bounded by `tail_coeff`.
    Truncated {
        coeffs: Vec<u32>,
        tail_coeff: u32,
        base: Base,
    },
}

/// Exact lower/upper bounds on a series value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueBounds {
    pub lo: Rational,
    pub hi: Rational,
}

/// Builds the exact closed form of `P_t` from a non-degenerate expansion.
pub fn series_of(e: &Expansion) -> SeriesRep {
    let top = e.base().top_digit();
    let pre: Vec<u32> = e.preperiod().iter().map(|&a| top - a).collect();
    let per: Vec<u32> = e.period().iter().map(|&a| top - a).collect();
    if per.iter().all(|&c| c == 0) {
        let mut coeffs = pre;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        SeriesRep::Polynomial {
            coeffs,
            base: e.base(),
        }
    } else {
        SeriesRep::RationalFn {
            pre_coeffs: pre,
            per_coeffs: per,
            base: e.base(),
        }
    }
}

/// A certified truncation of a raw digit stream (the only route for
/// parameters that are not eventually periodic).
pub fn series_of_stream(digits: &[u32], base: Base) -> Result<SeriesRep> {
    if digits.is_empty() {
        return Err(Error::InvalidInput("empty digit stream".into()));
    }
    if let Some(&bad) = digits.iter().find(|&&a| a >= base.get()) {
        return Err(Error::InvalidInput(format!(
            "digit {bad} out of range for base {base}"
        )));
    }
    Ok(SeriesRep::Truncated {
        coeffs: digits.iter().map(|&a| base.top_digit() - a).collect(),
        tail_coeff: base.top_digit(),
        base,
    })
}

fn poly_eval(coeffs: &[u32], x: &Rational) -> Rational {
    // sum_{k=1}^D c_k x^k by Horner.
    let mut acc = Rational::zero();
    for &c in coeffs.iter().rev() {
        acc = (acc + Rational::from(BigInt::from(c))) * x;
    }
    acc
}

fn poly_eval_dyadic(coeffs: &[u32], x: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.add(&Dyadic::new(BigInt::from(c), 0)).mul(x);
    }
    acc
}

fn dyadic_pow(x: &Dyadic, mut e: usize) -> Dyadic {
    let mut result = Dyadic::one();
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

impl SeriesRep {
    pub fn base(&self) -> Base {
        match self {
            SeriesRep::Polynomial { base, .. }
            | SeriesRep::RationalFn { base, .. }
            | SeriesRep::Truncated { base, .. } => *base,
        }
    }

    /// The coefficient of `X^k`, `k >= 1` (period continued forever;
    /// truncations report `None` past their depth).
    pub fn coeff(&self, k: u64) -> Option<u32> {
        assert!(k >= 1);
        let i = (k - 1) as usize;
        match self {
            SeriesRep::Polynomial { coeffs, .. } => Some(coeffs.get(i).copied().unwrap_or(0)),
            SeriesRep::RationalFn {
                pre_coeffs,
                per_coeffs,
                ..
            } => Some(if i < pre_coeffs.len() {
                pre_coeffs[i]
            } else {
                per_coeffs[(i - pre_coeffs.len()) % per_coeffs.len()]
            }),
            SeriesRep::Truncated { coeffs, .. } => coeffs.get(i).copied(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SeriesRep::Polynomial { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
            SeriesRep::RationalFn {
                pre_coeffs,
                per_coeffs,
                ..
            } => {
                pre_coeffs.iter().all(|&c| c == 0) && per_coeffs.iter().all(|&c| c == 0)
            }
            SeriesRep::Truncated { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
        }
    }

    /// `P(1)` for finite forms, `None` for the divergent rational-function
    /// form (its period has a positive coefficient).
    pub fn limit_at_one(&self) -> Option<BigInt> {
        match self {
            SeriesRep::Polynomial { coeffs, .. } | SeriesRep::Truncated { coeffs, .. } => {
                Some(coeffs.iter().map(|&c| BigInt::from(c)).sum())
            }
            SeriesRep::RationalFn { per_coeffs, .. } => {
                if per_coeffs.iter().all(|&c| c == 0) {
                    unreachable!("series_of collapses all-zero periods to polynomials")
                } else {
                    None
                }
            }
        }
    }

    fn eval_exact(&self, x: &Rational) -> Rational {
        match self {
            SeriesRep::Polynomial { coeffs, .. } | SeriesRep::Truncated { coeffs, .. } => {
                poly_eval(coeffs, x)
            }
            SeriesRep::RationalFn {
                pre_coeffs,
                per_coeffs,
                ..
            } => {
                let q = pre_coeffs.len();
                let p = per_coeffs.len();
                let xp = num::pow(x.clone(), p);
                let xq = num::pow(x.clone(), q);
                poly_eval(pre_coeffs, x)
                    + xq * poly_eval(per_coeffs, x) / (Rational::one() - xp)
            }
        }
    }

    /// Certified bounds on `P(x)` for rational `x` in `[0, 1)` (`x = 1`
    /// only for the polynomial form). Closed forms are exact (`lo == hi`);
    /// truncations add the tail bound `tail_coeff x^(N+1) / (1-x)`.
    pub fn eval(&self, x: &Rational) -> Result<ValueBounds> {
        if x.is_negative() {
            return Err(Error::InvalidInput(format!("eval requires x >= 0, got {x}")));
        }
        let poly_like = matches!(self, SeriesRep::Polynomial { .. });
        if (*x > Rational::one()) || (!poly_like && x.is_one()) {
            return Err(Error::InvalidInput(format!(
                "eval requires x < 1 for non-polynomial series, got {x}"
            )));
        }
        let v = self.eval_exact(x);
        match self {
            SeriesRep::Truncated {
                coeffs, tail_coeff, ..
            } => {
                let n1 = coeffs.len() + 1;
                let tail = Rational::from(BigInt::from(*tail_coeff)) * num::pow(x.clone(), n1)
                    / (Rational::one() - x);
                Ok(ValueBounds {
                    lo: v.clone(),
                    hi: v + tail,
                })
            }
            _ => Ok(ValueBounds {
                lo: v.clone(),
                hi: v,
            }),
        }
    }

    /// Exact comparison of `P(x)` against 1 at a dyadic point `0 <= x < 1`.
    /// Truncations compare their finite part. Integer arithmetic only.
    pub(crate) fn cmp_one_dyadic(&self, x: &Dyadic) -> Ordering {
        let one = Dyadic::one();
        match self {
            SeriesRep::Polynomial { coeffs, .. } | SeriesRep::Truncated { coeffs, .. } => {
                poly_eval_dyadic(coeffs, x).cmp(&one)
            }
            SeriesRep::RationalFn {
                pre_coeffs,
                per_coeffs,
                ..
            } => {
                // A(x) + x^q B(x)/(1-x^p) <=> 1 against (1 - x^p) > 0.
                let denom = one.sub(&dyadic_pow(x, per_coeffs.len()));
                let lhs = poly_eval_dyadic(pre_coeffs, x)
                    .mul(&denom)
                    .add(&dyadic_pow(x, pre_coeffs.len()).mul(&poly_eval_dyadic(per_coeffs, x)));
                lhs.cmp(&denom)
            }
        }
    }

    /// Tail bound for a truncation at `x`; zero for closed forms.
    pub(crate) fn tail_at(&self, x: &Rational) -> Rational {
        match self {
            SeriesRep::Truncated {
                coeffs, tail_coeff, ..
            } if *tail_coeff > 0 => {
                Rational::from(BigInt::from(*tail_coeff))
                    * num::pow(x.clone(), coeffs.len() + 1)
                    / (Rational::one() - x)
            }
            _ => Rational::zero(),
        }
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, coeffs: &[u32], offset: usize, first: &mut bool) -> fmt::Result {
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let k = offset + i + 1;
        if !*first {
            write!(f, " + ")?;
        }
        *first = false;
        match (c, k) {
            (1, 1) => write!(f, "X")?,
            (1, _) => write!(f, "X^{k}")?,
            (_, 1) => write!(f, "{c}X")?,
            (_, _) => write!(f, "{c}X^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for SeriesRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesRep::Polynomial { coeffs, .. } => {
                if coeffs.iter().all(|&c| c == 0) {
                    return write!(f, "0");
                }
                let mut first = true;
                fmt_terms(f, coeffs, 0, &mut first)
            }
            SeriesRep::RationalFn {
                pre_coeffs,
                per_coeffs,
                ..
            } => {
                let mut first = true;
                if pre_coeffs.iter().any(|&c| c != 0) {
                    fmt_terms(f, pre_coeffs, 0, &mut first)?;
                    write!(f, " + ")?;
                }
                write!(f, "(")?;
                let mut inner_first = true;
                fmt_terms(f, per_coeffs, pre_coeffs.len(), &mut inner_first)?;
                write!(f, ") / (1 - X^{})", per_coeffs.len())
            }
            SeriesRep::Truncated { coeffs, .. } => {
                let mut first = true;
                if coeffs.iter().all(|&c| c == 0) {
                    write!(f, "0")?;
                } else {
                    fmt_terms(f, coeffs, 0, &mut first)?;
                }
                write!(f, " + O(X^{})", coeffs.len() + 1)
            }
        }
    }
}
