//! Exact dynamics of `g(x) = d x mod 1` on rationals: forward orbits,
//! membership in the survivor set `K(t)` and in the bifurcation set, and
//! the Lyndon-labelled plateau structure of the stable set.
//!
//! The hole is the open interval `(0, t)`; the boundary points `0` and `t`
//! survive. Orbits of rationals preserve the denominator, so every verdict
//! here is an exact finite computation.

use std::collections::HashMap;

use num::{BigInt, One, Signed, ToPrimitive, Zero};


use crate::error::{Error, Result};
use crate::rat::Rational;
use crate::words::{expand, is_lyndon, Base, Word};

/// One application of `g(x) = d x mod 1`. Exact; the reduced denominator
/// never grows.
pub fn step(x: &Rational, base: Base) -> Result<Rational> {
    if x.is_negative() || *x >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "step requires x in [0,1), got {x}"
        )));
    }
    let y = x * Rational::from(base.big());
    Ok(y.fract())
}

/// The full eventually periodic forward orbit of `x`, with the index where
/// the cycle begins. The orbit has at most `denom(x)` distinct points.
#[derive(Clone, Debug)]
pub struct OrbitInfo {
    pub points: Vec<Rational>,
    pub cycle_start: usize,
}

pub fn orbit(x: &Rational, base: Base) -> Result<OrbitInfo> {
    let mut points: Vec<Rational> = Vec::new();
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut cur = x.clone();
    loop {
        if let Some(&idx) = seen.get(&cur) {
            return Ok(OrbitInfo {
                points,
                cycle_start: idx,
            });
        }
        seen.insert(cur.clone(), points.len());
        points.push(cur.clone());
        cur = step(&cur, base)?;
    }
}

/// Iterates numerators `a -> d a mod b` over a fixed denominator `b`,
/// calling `hit` with `(k, a_k)` for `k = 0..=b`. Scanning `b + 1` steps
/// visits every point of the eventually periodic orbit.
fn scan_numerators_u64(a0: u64, b: u64, d: u64, mut hit: impl FnMut(usize, u64) -> bool) -> bool {
    let mut a = a0;
    for k in 0..=b as usize {
        if hit(k, a) {
            return true;
        }
        a = ((a as u128 * d as u128) % b as u128) as u64;
    }
    false
}

fn scan_numerators_big(
    a0: BigInt,
    b: &BigInt,
    d: &BigInt,
    mut hit: impl FnMut(usize, &BigInt) -> bool,
) -> bool {
    let mut a = a0;
    let steps = b.to_usize().unwrap_or(usize::MAX);
    for k in 0..=steps {
        if hit(k, &a) {
            return true;
        }
        a = (a * d) % b;
    }
    false
}

/// Exact membership of `x` in `K(t)`: does the forward orbit of `x` avoid
/// the open hole `(0, t)`?
pub fn in_survivor_set(x: &Rational, t: &Rational, base: Base) -> Result<bool> {
    if x.is_negative() || *x >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "membership requires x in [0,1), got {x}"
        )));
    }
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::InvalidInput(format!(
            "hole parameter must lie in [0,1], got {t}"
        )));
    }
    if t.is_zero() {
        return Ok(true);
    }
    // x_k = a_k / b is in (0, t=c/e) iff a_k > 0 and a_k * e < c * b.
    let b_big = x.denom().clone();
    let c = t.numer();
    let e = t.denom();
    if let (Some(a0), Some(b), Some(cu), Some(eu)) = (
        x.numer().to_u64(),
        b_big.to_u64(),
        c.to_u64(),
        e.to_u64(),
    ) {
        let bound = cu as u128 * b as u128;
        let mut escaped = false;
        let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
        scan_numerators_u64(a0, b, base.get() as u64, |_, a| {
            if !seen.insert(a) {
                return true; // orbit cycled without escaping
            }
            if a > 0 && (a as u128 * eu as u128) < bound {
                escaped = true;
                return true;
            }
            false
        });
        return Ok(!escaped);
    }
    let bound = c * &b_big;
    let mut escaped = false;
    let mut seen: std::collections::HashSet<BigInt> = std::collections::HashSet::new();
    scan_numerators_big(x.numer().clone(), &b_big, &base.big(), |_, a| {
        if !seen.insert(a.clone()) {
            return true;
        }
        if a.is_positive() && a * e < bound {
            escaped = true;
            return true;
        }
        false
    });
    Ok(!escaped)
}

/// Verdict of the bifurcation-set test `t in K(t)`, with the minimal
/// witness iterate when the orbit falls into the hole.
#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub in_set: bool,
    pub witness_k: Option<usize>,
    pub orbit_len: usize,
}

/// Exact test of `g^k(t) not in (0, t)` for all `k >= 0`; equivalently
/// `t in K(t)`, which characterizes the bifurcation parameters.
/// `t = 1` is accepted (its orbit is `{1, 0}`, disjoint from the open hole).
pub fn in_bifurcation_set(t: &Rational, base: Base) -> Result<MembershipVerdict> {
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::InvalidInput(format!(
            "bifurcation test requires t in [0,1], got {t}"
        )));
    }
    if t.is_zero() {
        return Ok(MembershipVerdict {
            in_set: true,
            witness_k: None,
            orbit_len: 1,
        });
    }
    if t.is_one() {
        return Ok(MembershipVerdict {
            in_set: true,
            witness_k: None,
            orbit_len: 2,
        });
    }
    // Same denominator throughout: x_k in (0, t) iff 0 < a_k < a_0.
    // The scan runs to cycle closure so orbit_len is the full orbit size;
    // the witness, when present, is the minimal escaping iterate.
    let mut witness: Option<usize> = None;
    let mut orbit_len = 0usize;
    if let (Some(a0), Some(b)) = (t.numer().to_u64(), t.denom().to_u64()) {
        let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
        scan_numerators_u64(a0, b, base.get() as u64, |k, a| {
            if !seen.insert(a) {
                return true;
            }
            orbit_len = seen.len();
            if witness.is_none() && a > 0 && a < a0 {
                witness = Some(k);
            }
            false
        });
    } else {
        let a0 = t.numer().clone();
        let mut seen: std::collections::HashSet<BigInt> = std::collections::HashSet::new();
        scan_numerators_big(a0.clone(), t.denom(), &base.big(), |k, a| {
            if !seen.insert(a.clone()) {
                return true;
            }
            orbit_len = seen.len();
            if witness.is_none() && a.is_positive() && *a < a0 {
                witness = Some(k);
            }
            false
        });
    }
    Ok(MembershipVerdict {
        in_set: witness.is_none(),
        witness_k: witness,
        orbit_len,
    })
}

/// A connected component `(left, right)` of the stable set, labelled by a
/// Lyndon word with nonzero last digit: `left = .S`, `right = .overline{S}`.
#[derive(Clone, Debug)]
pub struct PlateauRecord {
    pub label: Word,
    pub left: Rational,
    pub right: Rational,
}

impl PlateauRecord {
    pub fn length(&self) -> usize {
        self.label.len()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.left < *t && *t < self.right
    }
}

/// The interval `I_r = (.S, .overline{S})` for a Lyndon label `S`.
/// Errors when `S` is not Lyndon or ends in `0`: such intervals are not
/// components of the stable set.
pub fn plateau_interval(label: &Word) -> Result<PlateauRecord> {
    if label.last_digit() == 0 || !is_lyndon(label) {
        return Err(Error::NotLyndon(label.to_string()));
    }
    let left = label.value();
    let m = label.len();
    let dm = num::pow(label.base().big(), m);
    let right = &left * Rational::new(dm.clone(), dm - BigInt::one());
    Ok(PlateauRecord {
        label: label.clone(),
        left,
        right,
    })
}

/// Locates the stable-set component containing `t`, or `None` when `t` is a
/// bifurcation parameter. The component is built from the minimal witness
/// iterate `k`: truncate the non-degenerate expansion of `t` to its first
/// `k` digits, strip trailing zeros, and take the interval of the resulting
/// (always Lyndon) label.
pub fn plateau_of(t: &Rational, base: Base) -> Result<Option<PlateauRecord>> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "plateau lookup requires t in (0,1), got {t}"
        )));
    }
    let verdict = in_bifurcation_set(t, base)?;
    let Some(k) = verdict.witness_k else {
        return Ok(None);
    };
    debug_assert!(k >= 1, "g^0(t) = t is never inside (0, t)");
    let e = expand(t, base)?;
    let mut prefix = e.prefix(k);
    while prefix.last() == Some(&0) {
        prefix.pop();
    }
    let label = Word::new(prefix, base)?;
    let record = plateau_interval(&label)?;
    debug_assert!(record.contains(t));
    Ok(Some(record))
}

/// All plateaus with label length `<= max_len`, pairwise disjoint and
/// sorted by left endpoint.
pub fn enumerate_plateaus(base: Base, max_len: usize) -> Vec<PlateauRecord> {
    crate::words::enumerate_lyndon(base, max_len)
        .iter()
        .map(|s| plateau_interval(s).expect("enumerated labels are Lyndon with nonzero last digit"))
        .collect()
}

/// The `n`-th term of the one-sided approximating sequence of a bifurcation
/// parameter `t`:
///
/// * `t` not `d`-rational: `t_n = .e_1...e_n (d-1)^inf > t`, digitwise `>= t`;
/// * `t` `d`-rational with non-degenerate form `.e_1...e_k (d-1)^inf`
///   (requires `e_1 != d-1`): `t_n = .overline{e_1...e_k (d-1)^n} < t`,
///   digitwise `<= t`.
///
/// Membership of the constructed point is re-verified exactly.
pub fn nth_approximation(t: &Rational, base: Base, n: u32) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidInput("approximation index must be >= 1".into()));
    }
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::InvalidInput(format!(
            "approximating sequences require t in (0,1), got {t}"
        )));
    }
    if !in_bifurcation_set(t, base)?.in_set {
        return Err(Error::NotBifurcation(t.to_string()));
    }
    let e = expand(t, base)?;
    let t_n = if e.is_d_rational() {
        let pre = e.preperiod().to_vec();
        debug_assert!(!pre.is_empty(), "d-rationals in (0,1) have a preperiod");
        if pre[0] == base.top_digit() {
            return Err(Error::InvalidInput(format!(
                "approximating construction needs a leading digit below {}, got expansion {e}",
                base.top_digit()
            )));
        }
        let mut period = pre;
        period.extend(std::iter::repeat_n(base.top_digit(), n as usize));
        crate::words::Expansion::new(vec![], period, base)?.value()
    } else {
        let prefix = Word::new(e.prefix(n as usize), base)?;
        prefix.concat_value(&Rational::one())
    };
    if !in_bifurcation_set(&t_n, base)?.in_set {
        return Err(Error::NotBifurcation(format!(
            "constructed approximation {t_n} for t = {t}"
        )));
    }
    Ok(t_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn b2() -> Base {
        Base::new(2).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(&ratio(1, 7), b2()).unwrap(), ratio(2, 7));
        assert_eq!(step(&ratio(5, 8), b2()).unwrap(), ratio(1, 4));
        assert_eq!(step(&ratio(0, 1), Base::new(5).unwrap()).unwrap(), ratio(0, 1));
        assert!(step(&ratio(1, 1), b2()).is_err());
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&ratio(1, 7), b2()).unwrap();
        assert_eq!(o.points, vec![ratio(1, 7), ratio(2, 7), ratio(4, 7)]);
        assert_eq!(o.cycle_start, 0);

        let o = orbit(&ratio(5, 8), b2()).unwrap();
        assert_eq!(
            o.points,
            vec![ratio(5, 8), ratio(1, 4), ratio(1, 2), ratio(0, 1)]
        );
        assert_eq!(o.cycle_start, 3);

        let o = orbit(&ratio(0, 1), b2()).unwrap();
        assert_eq!(o.points, vec![ratio(0, 1)]);
    }

    #[test]
    fn survivor_membership_examples() {
        assert!(in_survivor_set(&ratio(1, 7), &ratio(1, 7), b2()).unwrap());
        assert!(in_survivor_set(&ratio(3, 5), &ratio(0, 1), b2()).unwrap());
        assert!(!in_survivor_set(&ratio(5, 8), &ratio(1, 2), b2()).unwrap());
    }

    #[test]
    fn bifurcation_examples() {
        let v = in_bifurcation_set(&ratio(1, 7), b2()).unwrap();
        assert!(v.in_set);
        assert_eq!(v.witness_k, None);
        assert_eq!(v.orbit_len, 3);

        let v = in_bifurcation_set(&ratio(5, 8), b2()).unwrap();
        assert!(!v.in_set);
        assert_eq!(v.witness_k, Some(1));

        for d in [2u32, 3, 10] {
            let base = Base::new(d).unwrap();
            let t = ratio((d - 1) as i64, d as i64);
            assert!(in_bifurcation_set(&t, base).unwrap().in_set);
        }
        assert!(in_bifurcation_set(&Rational::one(), b2()).unwrap().in_set);
    }

    #[test]
    fn verdict_agrees_with_plain_orbit_scan() {
        // Brute-force oracle: 3 * denominator steps, no cycle logic.
        let base = b2();
        for q in 1..=400i64 {
            for p in 1..q {
                if num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let t = ratio(p, q);
                let mut x = t.clone();
                let mut escaped = None;
                for k in 0..(3 * q as usize) {
                    if x.is_positive() && x < t {
                        escaped = Some(k);
                        break;
                    }
                    x = step(&x, base).unwrap();
                }
                let v = in_bifurcation_set(&t, base).unwrap();
                assert_eq!(v.in_set, escaped.is_none(), "t = {p}/{q}");
                assert_eq!(v.witness_k, escaped, "t = {p}/{q}");
            }
        }
        // Random sample up to denominator 2000.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1500 {
            let q = rng.gen_range(401i64..=2000);
            let p = rng.gen_range(1..q);
            let t = ratio(p, q);
            let mut x = t.clone();
            let mut escaped = None;
            for k in 0..(3 * q as usize) {
                if x.is_positive() && x < t {
                    escaped = Some(k);
                    break;
                }
                x = step(&x, base).unwrap();
            }
            let v = in_bifurcation_set(&t, base).unwrap();
            assert_eq!(v.in_set, escaped.is_none(), "t = {p}/{q}");
            assert_eq!(v.witness_k, escaped, "t = {p}/{q}");
        }
    }

    #[test]
    fn stable_set_contains_intervals_right_of_every_dyadic() {
        // For every d-rational r some (r, r+eps) lies inside a plateau
        // whose left endpoint is at or below r. Start probing at the
        // resolution 2^-(m+6) and halve while the adjacent plateau is
        // shorter than the probe offset (e.g. (1/128, 1/127) is shorter
        // than 2^-13).
        let base = b2();
        for m in 1..=8u32 {
            let denom = 1i64 << m;
            for a in (1..denom).step_by(2) {
                let r = ratio(a, denom);
                let mut eps = Rational::new(BigInt::one(), BigInt::from(1i64 << (m + 6)));
                let mut found = false;
                for _ in 0..(m + 16) {
                    let x = &r + &eps;
                    if let Some(p) = plateau_of(&x, base).unwrap() {
                        if p.left <= r && x < p.right {
                            found = true;
                            break;
                        }
                    }
                    eps /= ratio(2, 1);
                }
                assert!(found, "no stable interval right of {a}/{denom}");
            }
        }
    }

    #[test]
    fn common_prefix_gap_bounds_on_bifurcation_pairs() {
        // For t1, t2 in the bifurcation set above t0 = 1/8 (d = 2):
        // (t0/d) 2^-m <= |t1 - t2| <= 2^-m with m the common prefix length.
        use rand::{Rng, SeedableRng};
        let base = b2();
        let lower_const = ratio(1, 16); // t0 / d
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut members = Vec::new();
        while members.len() < 24 {
            let q = rng.gen_range(2i64..=500);
            let p = rng.gen_range(1..q);
            let t = ratio(p, q);
            if t < ratio(1, 8) || !in_bifurcation_set(&t, base).unwrap().in_set {
                continue;
            }
            if !members.contains(&t) {
                members.push(t);
            }
        }
        members.push(Rational::one()); // the right end of the set
        for i in 0..members.len() {
            for j in 0..i {
                let (t1, t2) = (&members[i], &members[j]);
                let e1 = expand(t1, base).unwrap();
                let e2 = expand(t2, base).unwrap();
                let m = crate::words::common_prefix_len(&e1, &e2)
                    .finite()
                    .expect("distinct parameters have finite common prefix");
                let gap = (t1 - t2).abs();
                let scale = Rational::new(BigInt::one(), BigInt::one() << m);
                assert!(gap <= scale, "upper gap bound fails for {t1}, {t2}");
                assert!(
                    gap >= &lower_const * &scale,
                    "lower gap bound fails for {t1}, {t2} (m = {m})"
                );
            }
        }
    }

    #[test]
    fn plateau_interval_examples() {
        let p = plateau_interval(&Word::parse("01", b2()).unwrap()).unwrap();
        assert_eq!((p.left, p.right), (ratio(1, 4), ratio(1, 3)));
        let p = plateau_interval(&Word::parse("1", b2()).unwrap()).unwrap();
        assert_eq!((p.left, p.right), (ratio(1, 2), ratio(1, 1)));
        let p = plateau_interval(&Word::parse("001", b2()).unwrap()).unwrap();
        assert_eq!((p.left, p.right), (ratio(1, 8), ratio(1, 7)));
        assert!(plateau_interval(&Word::parse("11", b2()).unwrap()).is_err());
        assert!(plateau_interval(&Word::parse("10", b2()).unwrap()).is_err());
    }

    #[test]
    fn plateau_lookup_examples() {
        let p = plateau_of(&ratio(5, 8), b2()).unwrap().unwrap();
        assert_eq!(p.label.to_string(), "1");
        assert_eq!((p.left, p.right), (ratio(1, 2), ratio(1, 1)));

        let p = plateau_of(&ratio(13, 50), b2()).unwrap().unwrap();
        assert_eq!(p.label.to_string(), "01");
        assert_eq!((p.left, p.right), (ratio(1, 4), ratio(1, 3)));

        assert!(plateau_of(&ratio(1, 7), b2()).unwrap().is_none());
    }

    #[test]
    fn plateau_enumeration_examples() {
        let ivals = |d: u32, n: usize| {
            enumerate_plateaus(Base::new(d).unwrap(), n)
                .iter()
                .map(|p| (p.left.clone(), p.right.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            ivals(2, 2),
            vec![(ratio(1, 4), ratio(1, 3)), (ratio(1, 2), ratio(1, 1))]
        );
        assert_eq!(
            ivals(2, 3),
            vec![
                (ratio(1, 8), ratio(1, 7)),
                (ratio(1, 4), ratio(1, 3)),
                (ratio(3, 8), ratio(3, 7)),
                (ratio(1, 2), ratio(1, 1)),
            ]
        );
        assert_eq!(
            ivals(3, 1),
            vec![(ratio(1, 3), ratio(1, 2)), (ratio(2, 3), ratio(1, 1))]
        );
    }

    #[test]
    fn plateaus_are_pairwise_disjoint() {
        let ps = enumerate_plateaus(b2(), 10);
        for pair in ps.windows(2) {
            assert!(pair[0].right <= pair[1].left, "overlap at {}", pair[1].label);
        }
    }

    #[test]
    fn approximation_examples() {
        // Non-d-rational branch: first four digits of 1/7 then all ones.
        let t4 = nth_approximation(&ratio(1, 7), b2(), 4).unwrap();
        assert_eq!(t4, ratio(3, 16));
        assert!(t4 > ratio(1, 7));

        // d-rational branch at t = 1/4 = .00(1).
        assert_eq!(nth_approximation(&ratio(1, 4), b2(), 1).unwrap(), ratio(1, 7));
        assert_eq!(nth_approximation(&ratio(1, 4), b2(), 2).unwrap(), ratio(1, 5));

        // Not in the bifurcation set -> error.
        assert!(nth_approximation(&ratio(5, 8), b2(), 1).is_err());
    }

    #[test]
    fn approximations_are_one_sided_and_digitwise_monotone() {
        let base = b2();
        for (t, d_rational) in [(ratio(1, 7), false), (ratio(1, 4), true), (ratio(3, 8), true)] {
            let e_t = expand(&t, base).unwrap();
            for n in 1..=8 {
                let tn = nth_approximation(&t, base, n).unwrap();
                let e_n = expand(&tn, base).unwrap();
                if d_rational {
                    assert!(tn < t);
                    for k in 1..=40 {
                        assert!(e_n.digit(k) <= e_t.digit(k), "t={t} n={n} k={k}");
                    }
                } else {
                    assert!(tn > t);
                    for k in 1..=40 {
                        assert!(e_n.digit(k) >= e_t.digit(k), "t={t} n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn survivor_family_is_monotone_in_t() {
        // s < t implies K(s) contains K(t): membership can only be lost as
        // the hole grows.
        let base = b2();
        let q = 24i64;
        for xp in 0..q {
            let x = ratio(xp, q);
            let verdicts: Vec<bool> = (0..=q)
                .map(|tp| in_survivor_set(&x, &ratio(tp, q), base).unwrap())
                .collect();
            for t_idx in 0..verdicts.len() {
                for s_idx in 0..t_idx {
                    assert!(
                        !verdicts[t_idx] || verdicts[s_idx],
                        "x={xp}/{q}: in K({t_idx}/{q}) but not K({s_idx}/{q})"
                    );
                }
            }
        }
    }
}
