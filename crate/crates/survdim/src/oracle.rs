//! Independent brute-force verification.
//!
//! Everything here cross-checks the analytic modules without sharing their
//! code paths: cylinder survival is decided by a purely combinatorial
//! lexicographic rule on digit words (suffix >= prefix-of-t at the first
//! difference, or an all-zero suffix; straddling cylinders count as
//! survivors), and the digits of `t` are produced by a local greedy loop
//! rather than the words-module expansion.

use std::collections::HashSet;

use num::bigint::BigUint;
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::orbits::{in_bifurcation_set, in_survivor_set, step};
use crate::rat::Rational;
use crate::words::{Base, Word};

/// Counting state of the `n`-step survivor enumeration.
#[derive(Clone, Debug)]
pub struct SurvivorStats {
    pub depth: usize,
    pub count: BigUint,
    /// `ln(count) / n`, nats.
    pub log_count_over_n: f64,
    /// `log_d(count) / n`, the cylinder-growth dimension proxy.
    pub eta_estimate: f64,
    /// `(1 - eta_estimate) * ln d`, the escape-rate proxy, nats.
    pub gamma_estimate: f64,
}

fn stats_from_count(count: u64, depth: usize, base: Base) -> SurvivorStats {
    let log_d = (base.get() as f64).ln();
    let ln_count = (count as f64).ln();
    let eta = ln_count / (depth as f64 * log_d);
    SurvivorStats {
        depth,
        count: BigUint::from(count),
        log_count_over_n: ln_count / depth as f64,
        eta_estimate: eta,
        gamma_estimate: (1.0 - eta) * log_d,
    }
}

/// First `n` digits of the non-degenerate expansion of `t` in `(0,1)`,
/// by plain greedy multiplication (local to the oracle on purpose).
fn digits_of(t: &Rational, base: Base, n: usize) -> Vec<u32> {
    let d = Rational::from(base.big());
    let mut digits = Vec::with_capacity(n);
    let mut x = t.clone();
    for i in 0..n {
        x *= &d;
        let digit = x.floor();
        x -= &digit;
        digits.push(num::ToPrimitive::to_u32(digit.numer()).expect("digit < d"));
        if x.is_zero() {
            // Terminating: rewrite the tail as (e-1)(d-1)(d-1)...
            let last = digits.last_mut().expect("at least one digit");
            debug_assert!(*last >= 1);
            *last -= 1;
            digits.resize(n, base.top_digit());
            for slot in digits.iter_mut().skip(i + 1) {
                *slot = base.top_digit();
            }
            break;
        }
    }
    digits
}

/// Tight-suffix transition for the survivor rule. `mask` has bit `k-1` set
/// when some suffix currently equals the first `k` digits of `t`; `zeros`
/// is the count of leading zeros of `t`'s digit stream. Returns the new
/// mask and whether an all-zero suffix dropped below `t` (which pins every
/// later digit of the word to zero), or `None` when the word dies.
fn survivor_step(mask: u64, a: u32, tdig: &[u32], zeros: usize) -> Option<(u64, bool)> {
    let mut next = 0u64;
    let mut zero_run = false;
    let mut bits = mask;
    while bits != 0 {
        let k = bits.trailing_zeros() as usize + 1;
        bits &= bits - 1;
        match a.cmp(&tdig[k]) {
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => next |= 1 << k,
            std::cmp::Ordering::Less => {
                if a == 0 && k <= zeros {
                    zero_run = true;
                } else {
                    return None;
                }
            }
        }
    }
    match a.cmp(&tdig[0]) {
        std::cmp::Ordering::Greater => {}
        std::cmp::Ordering::Equal => next |= 1,
        std::cmp::Ordering::Less => {
            if a == 0 {
                zero_run = true;
            } else {
                return None;
            }
        }
    }
    Some((next, zero_run))
}

struct SurvivorDfs<'a> {
    tdig: &'a [u32],
    zeros: usize,
    d: u32,
    n: usize,
    counts: Vec<u64>,
    visited: u64,
    budget: u64,
}

impl SurvivorDfs<'_> {
    fn run(&mut self) -> Result<()> {
        self.recurse(0, 0)
    }

    fn charge(&mut self, depth: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            let deepest = self.counts.iter().rposition(|&c| c > 0).unwrap_or(0);
            return Err(Error::BudgetExceeded {
                visited: self.visited,
                depth: deepest.min(depth),
            });
        }
        Ok(())
    }

    fn recurse(&mut self, pos: usize, mask: u64) -> Result<()> {
        if pos > 0 {
            self.counts[pos] += 1;
        }
        if pos == self.n {
            return Ok(());
        }
        for a in 0..self.d {
            self.charge(pos)?;
            match survivor_step(mask, a, self.tdig, self.zeros) {
                None => {}
                Some((next, true)) => self.zero_completion(pos + 1, next)?,
                Some((next, false)) => self.recurse(pos + 1, next)?,
            }
        }
        Ok(())
    }

    /// An all-zero suffix is active: the only possible completion appends
    /// zeros; walk that single path while tight suffixes survive it.
    fn zero_completion(&mut self, mut pos: usize, mut mask: u64) -> Result<()> {
        loop {
            self.counts[pos] += 1;
            if pos == self.n {
                return Ok(());
            }
            self.charge(pos)?;
            match survivor_step(mask, 0, self.tdig, self.zeros) {
                None => return Ok(()),
                Some((next, _)) => mask = next,
            }
            pos += 1;
        }
    }
}

fn survivor_counts_to(t: &Rational, base: Base, n: usize, budget: u64) -> Result<Vec<u64>> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "survivor counting requires t in (0,1), got {t}"
        )));
    }
    if n == 0 || n > 60 {
        return Err(Error::InvalidInput(format!(
            "survivor depth must be in 1..=60, got {n}"
        )));
    }
    // One digit of lookahead per tight length: matched lengths reach n.
    let tdig = digits_of(t, base, n + 1);
    let zeros = tdig.iter().take_while(|&&a| a == 0).count();
    let mut dfs = SurvivorDfs {
        tdig: &tdig,
        zeros,
        d: base.get(),
        n,
        counts: vec![0u64; n + 1],
        visited: 0,
        budget,
    };
    dfs.run()?;
    Ok(dfs.counts)
}

/// Counts the depth-`n` cylinders that survive `n` steps, by depth-first
/// search with pruning (cost proportional to survivors, not `d^n`).
pub fn survivor_count(t: &Rational, base: Base, n: usize, budget: u64) -> Result<SurvivorStats> {
    let counts = survivor_counts_to(t, base, n, budget)?;
    Ok(stats_from_count(counts[n], n, base))
}

/// Reference implementation: the full `d^n` scan applying the survival
/// rule literally to every word. For cross-checking the pruned walk.
pub fn survivor_count_exhaustive(t: &Rational, base: Base, n: usize) -> Result<BigUint> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "survivor counting requires t in (0,1), got {t}"
        )));
    }
    let d = base.get() as u64;
    let total = d
        .checked_pow(n as u32)
        .filter(|&v| v <= 1 << 26)
        .ok_or_else(|| Error::InvalidInput("exhaustive scan limited to d^n <= 2^26".into()))?;
    let tdig = digits_of(t, base, n);
    let mut count = 0u64;
    let mut word = vec![0u32; n];
    for word_index in 0..total {
        let mut idx = word_index;
        for slot in word.iter_mut().rev() {
            *slot = (idx % d) as u32;
            idx /= d;
        }
        let ok = (0..n).all(|j| {
            let suffix = &word[j..];
            match suffix.iter().zip(&tdig).find(|(a, b)| *a != *b) {
                None => true,
                Some((a, b)) if a > b => true,
                _ => suffix.iter().all(|&x| x == 0),
            }
        });
        if ok {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// A growth-rate estimate with its fit diagnostics; estimates are never
/// bare numbers.
#[derive(Clone, Debug)]
pub struct FitEstimate {
    pub value: f64,
    pub residual: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub used_upper_half: bool,
}

/// When the full-range fit leaves worse RMS residual than this (in log_d
/// units), transient boundary effects dominate and the fit is redone on
/// the upper half of the range.
const REFIT_RESIDUAL_THRESHOLD: f64 = 0.02;

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

/// Least-squares slope of `log_d count(n)` over `n` in `[n_min, n_max]`:
/// the counting estimate of the dimension.
pub fn dim_estimate(
    t: &Rational,
    base: Base,
    n_min: usize,
    n_max: usize,
    budget: u64,
) -> Result<FitEstimate> {
    if n_min == 0 || n_min >= n_max {
        return Err(Error::InvalidInput(format!(
            "bad depth range {n_min}..{n_max}"
        )));
    }
    let counts = survivor_counts_to(t, base, n_max, budget)?;
    let log_d = (base.get() as f64).ln();
    let pts: Vec<(f64, f64)> = (n_min..=n_max)
        .map(|n| (n as f64, (counts[n] as f64).ln() / log_d))
        .collect();
    let (slope, residual) = least_squares(&pts);
    if residual <= REFIT_RESIDUAL_THRESHOLD {
        return Ok(FitEstimate {
            value: slope,
            residual,
            n_min,
            n_max,
            used_upper_half: false,
        });
    }
    let start = pts.len() / 2;
    let (slope, residual) = least_squares(&pts[start..]);
    Ok(FitEstimate {
        value: slope,
        residual,
        n_min: n_min + start,
        n_max,
        used_upper_half: true,
    })
}

/// Escape-rate estimate `-(1/n) log(count d^-n)` at a single depth,
/// reported with the full survivor statistics.
pub fn escape_estimate(t: &Rational, base: Base, n: usize, budget: u64) -> Result<SurvivorStats> {
    survivor_count(t, base, n, budget)
}

/// Box-count proxy for the bifurcation set beyond `t`.
#[derive(Clone, Debug)]
pub struct BifDimEstimate {
    pub depth: usize,
    pub count: BigUint,
    /// `log_d(count) / n`.
    pub estimate: f64,
}

struct BifDfs<'a> {
    tdig: &'a [u32],
    d: u32,
    n: usize,
    path: Vec<u32>,
    count: u64,
    visited: u64,
    budget: u64,
}

impl BifDfs<'_> {
    fn recurse(&mut self, mask: u64, t_tight: bool) -> Result<()> {
        let pos = self.path.len();
        if pos == self.n {
            self.count += 1;
            return Ok(());
        }
        for a in 0..self.d {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    visited: self.visited,
                    depth: pos,
                });
            }
            // Order against t's digits decides first.
            let next_tight = if t_tight {
                match a.cmp(&self.tdig[pos]) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => true,
                    std::cmp::Ordering::Greater => false,
                }
            } else {
                false
            };
            // Every proper suffix must stay >= the word itself.
            let mut next = 0u64;
            let mut dead = false;
            let mut bits = mask;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                match a.cmp(&self.path[k]) {
                    std::cmp::Ordering::Greater => {}
                    std::cmp::Ordering::Equal => next |= 1 << k,
                    std::cmp::Ordering::Less => {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            if pos >= 1 {
                match a.cmp(&self.path[0]) {
                    std::cmp::Ordering::Greater => {}
                    std::cmp::Ordering::Equal => next |= 1,
                    std::cmp::Ordering::Less => continue,
                }
            }
            self.path.push(a);
            self.recurse(next, next_tight)?;
            self.path.pop();
        }
        Ok(())
    }
}

/// Counts length-`n` words `w >= prefix(t)` whose every proper suffix is
/// lexicographically `>=` `w` at the first difference: finite-depth
/// certificates for membership in the bifurcation set on `[t, 1]`.
/// Returns `log_d(count)/n` as a box-count proxy for its dimension.
pub fn bif_dim_estimate(t: &Rational, base: Base, n: usize, budget: u64) -> Result<BifDimEstimate> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "bifurcation box count requires t in (0,1), got {t}"
        )));
    }
    if n == 0 || n > 60 {
        return Err(Error::InvalidInput(format!(
            "depth must be in 1..=60, got {n}"
        )));
    }
    let tdig = digits_of(t, base, n);
    let mut dfs = BifDfs {
        tdig: &tdig,
        d: base.get(),
        n,
        path: Vec::with_capacity(n),
        count: 0,
        visited: 0,
        budget,
    };
    dfs.recurse(0, true)?;
    let estimate = (dfs.count as f64).ln() / (n as f64 * (base.get() as f64).ln());
    Ok(BifDimEstimate {
        depth: n,
        count: BigUint::from(dfs.count),
        estimate,
    })
}

/// Outcome of the structural crosscheck of `K(t) = {t} u U_S S . K(t)`.
#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub forward_samples: usize,
    /// Concatenations of Markov words verified inside K(t) by orbit scan.
    pub forward_ok: usize,
    pub reverse_samples: usize,
    /// Members of K(t) whose greedy Markov decomposition succeeded.
    pub reverse_ok: usize,
    /// Decompositions that terminated at the atom t itself or at 0.
    pub atoms_hit: usize,
}

impl CrosscheckReport {
    pub fn all_ok(&self) -> bool {
        self.forward_ok == self.forward_samples && self.reverse_ok == self.reverse_samples
    }
}

/// Crosschecks the Markov decomposition of the survivor set at a
/// bifurcation parameter `t` in both directions: concatenations of Markov
/// words (over a tail of `0` or `t`) must pass the orbit-scan membership
/// test, and sampled members of `K(t)` must admit the greedy decomposition
/// into Markov words.
pub fn markov_crosscheck(
    t: &Rational,
    base: Base,
    samples: usize,
    seed: u64,
) -> Result<CrosscheckReport> {
    if !in_bifurcation_set(t, base)?.in_set {
        return Err(Error::NotBifurcation(t.to_string()));
    }
    let e_t = crate::words::expand(t, base)?;
    let words: Vec<Word> = crate::dimension::markov_words(&e_t, 8);
    if words.is_empty() {
        return Err(Error::InvalidInput(
            "no Markov words below depth 8; t is too close to 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut forward_ok = 0usize;
    for _ in 0..samples {
        let m = rng.gen_range(1..=4usize);
        let tail = if rng.gen_bool(0.5) {
            Rational::zero()
        } else {
            t.clone()
        };
        let mut x = tail;
        for _ in 0..m {
            let w = &words[rng.gen_range(0..words.len())];
            x = w.concat_value(&x);
        }
        if x < Rational::one() && in_survivor_set(&x, t, base)? {
            forward_ok += 1;
        }
    }

    let mut reverse_ok = 0usize;
    let mut reverse_samples = 0usize;
    let mut atoms_hit = 0usize;
    // Members can be scarce on the sampling grid (K(t) is countable for t
    // near the critical parameter), so cap the rejection draws and report
    // however many members were actually found.
    let mut draws = 0u64;
    while reverse_samples < samples && draws < 200_000 {
        draws += 1;
        let q = rng.gen_range(2u64..1000);
        let p = rng.gen_range(1..q);
        let x = Rational::new(BigInt::from(p), BigInt::from(q));
        if x < *t || !in_survivor_set(&x, t, base)? {
            continue;
        }
        reverse_samples += 1;
        let mut cur = x;
        let mut visited: HashSet<Rational> = HashSet::new();
        let ok = loop {
            if cur.is_zero() || cur == *t {
                atoms_hit += 1;
                break true;
            }
            if !visited.insert(cur.clone()) {
                break true; // periodic decomposition closes on itself
            }
            let e_x = match crate::words::expand(&cur, base) {
                Ok(e) => e,
                Err(_) => break false,
            };
            let k = match crate::words::common_prefix_len(&e_x, &e_t) {
                crate::words::PrefixLen::Infinite => {
                    atoms_hit += 1;
                    break true;
                }
                crate::words::PrefixLen::Finite(m) => m + 1,
            };
            if e_x.digit(k) <= e_t.digit(k) {
                break false; // would contradict cur >= t inside K(t)
            }
            for _ in 0..k {
                cur = step(&cur, base)?;
            }
        };
        if ok {
            reverse_ok += 1;
        }
    }

    Ok(CrosscheckReport {
        forward_samples: samples,
        forward_ok,
        reverse_samples,
        reverse_ok,
        atoms_hit,
    })
}
