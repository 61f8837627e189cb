//! Base-`d` digit expansions of rationals and the word combinatorics they
//! feed: the strong order, Lyndon words and prefix comparisons.
//!
//! Everything here is exact. Parameters are rationals, expansions are
//! eventually periodic digit streams stored canonically (minimal preperiod
//! and period, never eventually zero), so equality and digit lookup are
//! decidable.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigUint, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rational;

/// The expansion base `d >= 2`, fixed per value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Base(u32);

impl Base {
    pub fn new(d: u32) -> Result<Base> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("base must be >= 2, got {d}")));
        }
        Ok(Base(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// The largest digit, `d - 1`.
    pub fn top_digit(self) -> u32 {
        self.0 - 1
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_digits(digits: &[u32], base: Base) -> Result<()> {
    if let Some(&bad) = digits.iter().find(|&&a| a >= base.get()) {
        return Err(Error::InvalidInput(format!(
            "digit {bad} out of range for base {base}"
        )));
    }
    Ok(())
}

fn fmt_digits(digits: &[u32], base: Base, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if base.get() <= 10 {
        for a in digits {
            write!(f, "{a}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = digits.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_digits(s: &str, base: Base) -> Result<Vec<u32>> {
    let digits: Vec<u32> = if base.get() <= 10 {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad digit {p:?}")))
            })
            .collect::<Result<_>>()?
    };
    check_digits(&digits, base)?;
    Ok(digits)
}

/// A non-empty finite word over the alphabet `{0, ..., d-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    digits: Vec<u32>,
    base: Base,
}

impl Word {
    pub fn new(digits: Vec<u32>, base: Base) -> Result<Word> {
        if digits.is_empty() {
            return Err(Error::InvalidInput("empty word".into()));
        }
        check_digits(&digits, base)?;
        Ok(Word { digits, base })
    }

    /// Parses the I/O form: a digit string for `d <= 10`, comma-separated
    /// integers otherwise.
    pub fn parse(s: &str, base: Base) -> Result<Word> {
        Word::new(parse_digits(s, base)?, base)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last_digit(&self) -> u32 {
        *self.digits.last().expect("words are non-empty")
    }

    /// The rational `.digits` in base `d`.
    pub fn value(&self) -> Rational {
        let d = BigInt::from(self.base.get());
        let mut num = BigInt::zero();
        for &a in &self.digits {
            num = num * &d + BigInt::from(a);
        }
        Rational::new(num, num::pow(d, self.digits.len()))
    }

    /// `S . x`: the number whose expansion starts with this word and
    /// continues with the expansion of `x`. An affine contraction with
    /// derivative `d^-|S|`; inverse branch of the `|S|`-fold map.
    pub fn concat_value(&self, x: &Rational) -> Rational {
        let scale = Rational::new(BigInt::one(), num::pow(self.base.big(), self.digits.len()));
        self.value() + x * scale
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_digits(&self.digits, self.base, f)
    }
}

/// `S << T`: the strong order. True iff the words agree on some prefix of
/// length `k-1` with `k <= min(|S|, |T|)` and then `S` drops strictly below
/// `T` at position `k`. A word that is a prefix of the other is never
/// strongly less.
pub fn strongly_less(s: &Word, t: &Word) -> bool {
    assert_eq!(s.base, t.base, "strong order requires a common base");
    for (a, b) in s.digits.iter().zip(t.digits.iter()) {
        if a != b {
            return a < b;
        }
    }
    false
}

/// A word is Lyndon when it is strongly less than all of its proper
/// suffixes.
pub fn is_lyndon(s: &Word) -> bool {
    (1..s.len()).all(|i| {
        let suffix = Word {
            digits: s.digits[i..].to_vec(),
            base: s.base,
        };
        strongly_less(s, &suffix)
    })
}

/// The rotation form of the Lyndon property: `S < YX` (lexicographically,
/// equal lengths) for every split `S = XY` into non-empty words. Equivalent
/// to [`is_lyndon`]; both are kept so the equivalence can be tested.
pub fn is_lyndon_by_rotation(s: &Word) -> bool {
    (1..s.len()).all(|i| {
        let mut rot = s.digits[i..].to_vec();
        rot.extend_from_slice(&s.digits[..i]);
        s.digits < rot
    })
}

/// All Lyndon words of length `<= max_len` whose last digit is nonzero (the
/// valid plateau labels), in increasing order of their rational values.
///
/// Uses the classic iterative generation (Duval/FKM): the successor of `w`
/// is obtained by repeating `w` cyclically to `max_len` digits, stripping
/// trailing top digits and incrementing the last remaining one. Generation
/// order is lexicographic with prefixes first, which coincides with the
/// order by value. The only Lyndon word ending in `0` is the word `0`
/// itself, which is skipped.
pub fn enumerate_lyndon(base: Base, max_len: usize) -> Vec<Word> {
    let d = base.get();
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u32> = vec![0];
    loop {
        if w != [0] {
            out.push(Word {
                digits: w.clone(),
                base,
            });
        }
        let len = w.len();
        let mut t: Vec<u32> = (0..max_len).map(|i| w[i % len]).collect();
        while t.last() == Some(&(d - 1)) {
            t.pop();
        }
        match t.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
        w = t;
    }
    out
}

/// Length of the longest common prefix of two expansions; infinite exactly
/// when the canonical forms coincide.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PrefixLen {
    Finite(u64),
    Infinite,
}

impl PrefixLen {
    pub fn finite(self) -> Option<u64> {
        match self {
            PrefixLen::Finite(k) => Some(k),
            PrefixLen::Infinite => None,
        }
    }
}

/// The canonical eventually periodic base-`d` expansion
/// `.preperiod (period)^infinity` of a rational in `(0, 1]`.
///
/// Canonical means: the period is primitive (no shorter rotation generates
/// the same stream), the preperiod is minimal, and the stream is never
/// eventually zero; `d`-rationals are carried in their trailing-`(d-1)`
/// form, e.g. `1/4 = .00(1)` in base 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Expansion {
    preperiod: Vec<u32>,
    period: Vec<u32>,
    base: Base,
}

impl Expansion {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>, base: Base) -> Result<Expansion> {
        check_digits(&preperiod, base)?;
        check_digits(&period, base)?;
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be non-empty".into()));
        }
        if period.iter().all(|&a| a == 0) {
            return Err(Error::InvalidInput(
                "eventually-zero expansions are degenerate; use the trailing-(d-1) form".into(),
            ));
        }
        let mut e = Expansion {
            preperiod,
            period,
            base,
        };
        e.canonicalize();
        Ok(e)
    }

    /// Parses the I/O form `preperiod(period)`, e.g. `00(1)`.
    pub fn parse(s: &str, base: Base) -> Result<Expansion> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expansion {s:?} lacks a (period)")))?;
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("expansion {s:?} lacks a closing )")));
        }
        let pre = parse_digits(&s[..open], base)?;
        let per = parse_digits(&s[open + 1..s.len() - 1], base)?;
        Expansion::new(pre, per, base)
    }

    fn canonicalize(&mut self) {
        // Primitive period: the shortest divisor-length block generating it.
        let p = self.period.len();
        for len in 1..p {
            if p.is_multiple_of(len) && self.period.chunks(len).all(|c| c == &self.period[..len]) {
                self.period.truncate(len);
                break;
            }
        }
        // Minimal preperiod: while the preperiod ends with the same digit
        // the period ends with, absorb it by rotating the period right.
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().expect("non-empty period") {
                break;
            }
            self.preperiod.pop();
            let rotated = self.period.pop().expect("non-empty period");
            self.period.insert(0, rotated);
        }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// The `k`-th digit, 1-indexed. O(1).
    pub fn digit(&self, k: u64) -> u32 {
        assert!(k >= 1, "digits are 1-indexed");
        let q = self.preperiod.len() as u64;
        if k <= q {
            self.preperiod[(k - 1) as usize]
        } else {
            self.period[((k - q - 1) % self.period.len() as u64) as usize]
        }
    }

    /// The first `n` digits as a word-sized vector.
    pub fn prefix(&self, n: usize) -> Vec<u32> {
        (1..=n as u64).map(|k| self.digit(k)).collect()
    }

    /// The exact rational value of the stream.
    pub fn value(&self) -> Rational {
        let d = self.base.big();
        let q = self.preperiod.len();
        let p = self.period.len();
        let mut pre_num = BigInt::zero();
        for &a in &self.preperiod {
            pre_num = pre_num * &d + BigInt::from(a);
        }
        let mut per_num = BigInt::zero();
        for &a in &self.period {
            per_num = per_num * &d + BigInt::from(a);
        }
        let dq = num::pow(d.clone(), q);
        let dp = num::pow(d, p);
        Rational::new(pre_num, dq.clone()) + Rational::new(per_num, dq * (dp - BigInt::one()))
    }

    /// True when the stream is the trailing-`(d-1)` form of a `d`-rational.
    pub fn is_d_rational(&self) -> bool {
        self.period == [self.base.top_digit()]
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_digits(&self.preperiod, self.base, f)?;
        write!(f, "(")?;
        fmt_digits(&self.period, self.base, f)?;
        write!(f, ")")
    }
}

/// The non-degenerate base-`d` expansion of a rational `x` in `(0, 1]`,
/// computed by exact long division with first-repeat cycle detection.
pub fn expand(x: &Rational, base: Base) -> Result<Expansion> {
    if !x.is_positive() || *x > Rational::one() {
        return Err(Error::InvalidInput(format!(
            "expand requires 0 < x <= 1, got {x}"
        )));
    }
    let d = base.get();
    if x.is_one() {
        return Expansion::new(vec![], vec![d - 1], base);
    }
    let q: BigUint = x.denom().to_biguint().expect("positive denominator");
    let mut r: BigUint = x.numer().to_biguint().expect("positive numerator");
    let big_d = BigUint::from(d);
    let mut digits: Vec<u32> = Vec::new();
    let mut seen: HashMap<BigUint, usize> = HashMap::new();
    loop {
        if r.is_zero() {
            // Terminating expansion: rewrite ...e 000 as ...(e-1) (d-1)(d-1)...
            let last = digits.pop().expect("x > 0 yields at least one digit");
            debug_assert!(last >= 1);
            digits.push(last - 1);
            return Expansion::new(digits, vec![d - 1], base);
        }
        if let Some(&start) = seen.get(&r) {
            let period = digits.split_off(start);
            return Expansion::new(digits, period, base);
        }
        seen.insert(r.clone(), digits.len());
        let prod = r * &big_d;
        let digit = num::ToPrimitive::to_u32(&(&prod / &q)).expect("digit < d fits in u32");
        digits.push(digit);
        r = prod % &q;
    }
}

/// `m(e1, e2)`: the length of the longest common prefix of two digit
/// streams, infinite iff the canonical expansions are equal.
pub fn common_prefix_len(e1: &Expansion, e2: &Expansion) -> PrefixLen {
    assert_eq!(e1.base, e2.base, "prefix comparison requires a common base");
    if e1 == e2 {
        return PrefixLen::Infinite;
    }
    let q = e1.preperiod.len().max(e2.preperiod.len()) as u64;
    let l = num::integer::lcm(e1.period.len() as u64, e2.period.len() as u64);
    for k in 1..=q + l {
        if e1.digit(k) != e2.digit(k) {
            return PrefixLen::Finite(k - 1);
        }
    }
    unreachable!("distinct canonical expansions differ within preperiod + lcm of periods");
}
