//! Named verification suites behind `survdim verify`. Same checks and
//! tolerances as the crate's acceptance test suite, evaluated through the
//! public library API.

use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use survdim::dimension::{
    eta, holder_probe, modulus_probe, moran_residual, series_of, solve_lambda, zeta,
    DimensionResult, Precision, SeriesRep,
};
use survdim::oracle::{bif_dim_estimate, dim_estimate, survivor_count, survivor_count_exhaustive};
use survdim::orbits::{enumerate_plateaus, in_bifurcation_set, plateau_interval, plateau_of};
use survdim::rat::{ratio, to_f64, Rational};
use survdim::words::{enumerate_lyndon, expand, is_lyndon, Base, Word};
use survdim::Error;

pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, pass, detail }
}

struct Env {
    base: Base,
    tol: Rational,
    prec: Precision,
    budget: u64,
}

impl Env {
    fn eta(&self, t: &Rational) -> Result<DimensionResult, Error> {
        eta(t, self.base, &self.tol, &self.prec)
    }
}

pub fn run_suite(
    suite: &str,
    base: Base,
    tol: &Rational,
    prec: &Precision,
    budget: u64,
    t_override: Option<Rational>,
) -> Result<Vec<CheckOutcome>, Error> {
    let env = Env {
        base,
        tol: tol.clone(),
        prec: *prec,
        budget,
    };
    let t_holder = t_override.unwrap_or_else(|| ratio(1, 4));
    let run_one = |name: &str| -> Result<Option<CheckOutcome>, Error> {
        Ok(Some(match name {
            "urbanski" => urbanski(&env)?,
            "plateau-constancy" => plateau_constancy(&env)?,
            "complement-cover" => complement_cover(&env)?,
            "lyndon-dom" => lyndon_dom(&env)?,
            "oracle-agreement" => oracle_agreement(&env)?,
            "envelope" => envelope(&env)?,
            "holder" => holder(&env, &t_holder)?,
            "modulus" => modulus(&env)?,
            "bifdim" => bifdim(&env)?,
            "monotonic" => monotonic(&env)?,
            "moran" => moran(&env)?,
            _ => return Ok(None),
        }))
    };
    if suite == "all" {
        let names = [
            "urbanski",
            "plateau-constancy",
            "complement-cover",
            "lyndon-dom",
            "oracle-agreement",
            "envelope",
            "holder",
            "modulus",
            "bifdim",
            "monotonic",
            "moran",
        ];
        let mut out = Vec::new();
        for name in names {
            out.push(run_one(name)?.expect("known suite"));
        }
        return Ok(out);
    }
    match run_one(suite)? {
        Some(o) => Ok(vec![o]),
        None => Err(Error::Parse(format!("unknown verify suite {suite:?}"))),
    }
}

fn urbanski(env: &Env) -> Result<CheckOutcome, Error> {
    let rep = series_of(&expand(&ratio(1, 7), env.base)?);
    let form_ok = rep
        == SeriesRep::RationalFn {
            pre_coeffs: vec![],
            per_coeffs: vec![1, 1, 0],
            base: env.base,
        };
    let lam = solve_lambda(&rep, &ratio(1, 10_000_000_000_000))?;
    let mid = lam.midpoint();
    let residual = (&mid * &mid * &mid + &mid * &mid + &mid - Rational::one()).abs();
    let pass = form_ok && to_f64(&residual) <= 1e-12;
    Ok(outcome(
        "urbanski",
        pass,
        format!(
            "series {} ({}), cubic residual {:.2e}",
            rep,
            if form_ok { "exact form" } else { "WRONG FORM" },
            to_f64(&residual)
        ),
    ))
}

fn plateau_constancy(env: &Env) -> Result<CheckOutcome, Error> {
    let gap_tol = ratio(1, 10_000_000_000);
    let mut worst = Rational::zero();
    let labels = enumerate_lyndon(env.base, 8);
    for label in &labels {
        let p = plateau_interval(label)?;
        let left = env.eta(&p.left)?;
        let right = env.eta(&p.right)?;
        let lo = left.eta_lo.clone().max(right.eta_lo.clone());
        let hi = left.eta_hi.clone().min(right.eta_hi.clone());
        worst = worst.max((lo - hi).max(Rational::zero()));
    }
    let pass = worst <= gap_tol;
    Ok(outcome(
        "plateau-constancy",
        pass,
        format!(
            "{} labels <= 8, worst two-path gap {:.2e} (tol 1e-10)",
            labels.len(),
            to_f64(&worst)
        ),
    ))
}

fn complement_cover(env: &Env) -> Result<CheckOutcome, Error> {
    let mut pass = true;
    let mut detail = String::new();
    for m in 1..=12u32 {
        let denom = 1i64 << m;
        for a in (1..denom).step_by(2) {
            let t = ratio(a, denom);
            let verdict = in_bifurcation_set(&t, env.base)?;
            match plateau_of(&t, env.base)? {
                None => {
                    if !verdict.in_set {
                        pass = false;
                        detail = format!("{a}/{denom} outside U but no plateau");
                    }
                }
                Some(p) => {
                    if verdict.in_set || !p.contains(&t) || !is_lyndon(&p.label) {
                        pass = false;
                        detail = format!("bad plateau for {a}/{denom}");
                    }
                }
            }
        }
    }
    let plateaus = enumerate_plateaus(env.base, 12);
    for pair in plateaus.windows(2) {
        if pair[0].right > pair[1].left {
            pass = false;
            detail = format!("plateaus {} and {} overlap", pair[0].label, pair[1].label);
        }
    }
    let named = plateaus
        .iter()
        .any(|p| p.left == ratio(1, 4) && p.right == ratio(1, 3))
        && plateaus
            .iter()
            .any(|p| p.left == ratio(1, 2) && p.right == ratio(1, 1));
    pass &= named;
    if detail.is_empty() {
        detail = format!(
            "4095 dyadics decomposed, {} disjoint plateaus, (1/4,1/3) and (1/2,1) present",
            plateaus.len()
        );
    }
    Ok(outcome("complement-cover", pass, detail))
}

fn lyndon_dom(env: &Env) -> Result<CheckOutcome, Error> {
    let mut checked = 0usize;
    for len in 1..=10usize {
        for idx in 0..(1u64 << len) {
            let digits: Vec<u32> = (0..len).rev().map(|b| ((idx >> b) & 1) as u32).collect();
            if *digits.last().unwrap() == 0 {
                continue;
            }
            let word = Word::new(digits, env.base)?;
            let left = word.value();
            let dm = BigInt::from(1u64 << len);
            let right = &left * Rational::new(dm.clone(), dm - BigInt::one());
            let both_in = in_bifurcation_set(&left, env.base)?.in_set
                && in_bifurcation_set(&right, env.base)?.in_set;
            if both_in != is_lyndon(&word) {
                return Ok(outcome(
                    "lyndon-dom",
                    false,
                    format!("equivalence fails for {word}"),
                ));
            }
            checked += 1;
        }
    }
    Ok(outcome(
        "lyndon-dom",
        true,
        format!("boundary membership == Lyndon for {checked} words up to length 10"),
    ))
}

fn oracle_agreement(env: &Env) -> Result<CheckOutcome, Error> {
    let mut detail = String::new();
    for (p, q) in [(1i64, 4i64), (1, 7), (1, 5)] {
        let t = ratio(p, q);
        let fit = dim_estimate(&t, env.base, 10, 28, env.budget)?;
        let certified = env.eta(&t)?.eta_mid();
        let gap = (fit.value - certified).abs();
        if gap > 0.02 {
            return Ok(outcome(
                "oracle-agreement",
                false,
                format!("dim estimate off by {gap:.4} at {p}/{q}"),
            ));
        }
        let escape_gap = gap * (env.base.get() as f64).ln();
        if escape_gap > 0.02 {
            return Ok(outcome(
                "oracle-agreement",
                false,
                format!("escape estimate off by {escape_gap:.4} nats at {p}/{q}"),
            ));
        }
        detail.push_str(&format!("{p}/{q}: |fit-eta|={gap:.5} "));
    }
    for q in 2i64..=64 {
        for p in 1..q {
            if num::integer::gcd(p, q) != 1 {
                continue;
            }
            let t = ratio(p, q);
            for n in 1..=14usize {
                let pruned = survivor_count(&t, env.base, n, env.budget)?.count;
                let full = survivor_count_exhaustive(&t, env.base, n)?;
                if pruned != full {
                    return Ok(outcome(
                        "oracle-agreement",
                        false,
                        format!("pruned != exhaustive at {p}/{q}, n={n}"),
                    ));
                }
            }
        }
    }
    detail.push_str("; pruned == exhaustive on the q<=64 grid, n<=14");
    Ok(outcome("oracle-agreement", true, detail))
}

fn envelope(env: &Env) -> Result<CheckOutcome, Error> {
    let mut runmin_lo = Rational::one();
    let mut runmin_hi = Rational::one();
    for k in 0..=256i64 {
        let t = ratio(k, 256);
        let e = env.eta(&t)?;
        let z = zeta(&t, env.base, &env.tol, &env.prec)?;
        if z.eta_hi < e.eta_lo {
            return Ok(outcome(
                "envelope",
                false,
                format!("zeta < eta at {k}/256"),
            ));
        }
        runmin_lo = runmin_lo.min(z.eta_lo.clone());
        runmin_hi = runmin_hi.min(z.eta_hi.clone());
        if !(runmin_lo <= e.eta_hi && e.eta_lo <= runmin_hi) {
            return Ok(outcome(
                "envelope",
                false,
                format!("running minimum of zeta misses eta at {k}/256"),
            ));
        }
    }
    Ok(outcome(
        "envelope",
        true,
        "min of zeta equals eta across k/256; zeta dominates everywhere".into(),
    ))
}

fn holder(env: &Env, t: &Rational) -> Result<CheckOutcome, Error> {
    let probe = holder_probe(t, env.base, 8, 32, &env.prec)?;
    let target = probe.eta_t.eta_mid();
    let mut rows = String::new();
    let last5 = &probe.points[probe.points.len().saturating_sub(5)..];
    let mut pass = true;
    for p in &probe.points {
        if !p.certified {
            pass = false;
        }
    }
    for p in last5 {
        rows.push_str(&format!("n={}:[{:.4},{:.4}] ", p.n, p.slope_lo, p.slope_hi));
        if !(p.slope_lo >= target - 0.05 && p.slope_hi <= target + 0.05) {
            pass = false;
        }
    }
    Ok(outcome(
        "holder",
        pass,
        format!("eta(t)={target:.6}; last-5 slopes {rows}(window +-0.05)"),
    ))
}

fn modulus(env: &Env) -> Result<CheckOutcome, Error> {
    let ns = [10u32, 20, 50, 100];
    let mut naive = Vec::new();
    let mut refined_100 = 0.0;
    for &n in &ns {
        let p = modulus_probe(env.base, n, &env.tol, &env.prec)?;
        naive.push(p.ratio_naive);
        if n == 100 {
            refined_100 = p.ratio_refined;
        }
    }
    let increasing = naive.windows(2).all(|w| w[0] < w[1]);
    let refined_ok = (refined_100 - 1.0).abs() <= 0.10;
    Ok(outcome(
        "modulus",
        increasing && refined_ok,
        format!(
            "naive ratios {naive:?} (increasing: {increasing}; see ledger for the n~55 minimum), refined(100) = {refined_100:.6}"
        ),
    ))
}

fn bifdim(env: &Env) -> Result<CheckOutcome, Error> {
    let est = bif_dim_estimate(&ratio(1, 4), env.base, 24, env.budget)?;
    let target = env.eta(&ratio(1, 4))?.eta_mid();
    let pass = (est.estimate - target).abs() <= 0.05;
    Ok(outcome(
        "bifdim",
        pass,
        format!(
            "log2(count)/24 = {:.4} vs eta(1/4) = {:.4} (exact box count 17342 -> 0.5867; depth-24 transient, see ledger)",
            est.estimate, target
        ),
    ))
}

fn monotonic(env: &Env) -> Result<CheckOutcome, Error> {
    let mut prev_hi: Option<Rational> = None;
    for k in 0..=1024i64 {
        let t = ratio(k, 1024);
        let e = env.eta(&t)?;
        if let Some(ph) = &prev_hi {
            if e.eta_lo > *ph {
                return Ok(outcome(
                    "monotonic",
                    false,
                    format!("eta increases at {k}/1024"),
                ));
            }
        }
        if k == 0 && !(e.exact && e.eta_lo.is_one()) {
            return Ok(outcome("monotonic", false, "eta(0) != 1".into()));
        }
        if k >= 512 && !(e.exact && e.eta_hi.is_zero()) {
            return Ok(outcome(
                "monotonic",
                false,
                format!("eta({k}/1024) != 0 exactly"),
            ));
        }
        prev_hi = Some(e.eta_hi);
    }
    Ok(outcome(
        "monotonic",
        true,
        "eta non-increasing on k/1024; eta(0)=1, eta(t>=1/2)=0 exactly".into(),
    ))
}

fn moran(env: &Env) -> Result<CheckOutcome, Error> {
    // Fixed cases first.
    let e = expand(&ratio(1, 7), env.base)?;
    let lam = solve_lambda(&series_of(&e), &env.tol)?;
    let check = moran_residual(&e, &lam, 60);
    if !check.holds() || check.residual_bound().is_none_or(|r| to_f64(&r) > 1e-10) {
        return Ok(outcome("moran", false, "residual too large at t=1/7".into()));
    }
    // 50 random bifurcation parameters with denominator <= 1000.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut tested = 0usize;
    while tested < 50 {
        let q = rng.gen_range(2u64..=1000);
        let p = rng.gen_range(1..q);
        let t = Rational::new(BigInt::from(p), BigInt::from(q));
        if !in_bifurcation_set(&t, env.base)?.in_set || t >= ratio(1, 1) {
            continue;
        }
        if t >= ratio((env.base.get() - 1) as i64, env.base.get() as i64) {
            continue;
        }
        let e = expand(&t, env.base)?;
        let lam = solve_lambda(&series_of(&e), &env.tol)?;
        let check = moran_residual(&e, &lam, 200);
        if !check.holds() {
            return Ok(outcome(
                "moran",
                false,
                format!("Moran identity fails at t={t}"),
            ));
        }
        tested += 1;
    }
    Ok(outcome(
        "moran",
        true,
        "identity certified at t=1/7 (depth 60, residual <= 1e-10) and 50 random bifurcation parameters (depth 200)".into(),
    ))
}
