//! Closed-form failure probabilities, twirled depolarizing rates and
//! fault-tolerant overhead estimates.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack used when testing `t·log(a) ≥ c` style inequalities.
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MemoryCurvePoint {
    #[serde(rename = "T")]
    pub t: f64,
    pub eps_base: f64,
    pub eps: f64,
    pub bound: f64,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Probability that a single unprotected excited qubit has decayed after `t`
/// steps of damping `delta`: `1 − (1−δ)^t`.
pub fn eps_base(delta: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if delta >= 1.0 {
        return 1.0;
    }
    -(t * (-delta).ln_1p()).exp_m1()
}

/// `P[at least two of m independent events of probability e]`, summed term by
/// term so that small `e` loses no precision.
pub fn at_least_two_of(m: u32, e: f64) -> f64 {
    (2..=m)
        .map(|k| binomial(m, k) * e.powi(k as i32) * (1.0 - e).powi((m - k) as i32))
        .sum()
}

/// `ε = 1 − (1−ε_b)^8 − 8ε_b(1−ε_b)^7` and the bound `28 ε_b²`.
pub fn memory_failure(delta: f64, t: f64) -> Result<MemoryCurvePoint> {
    if !(0.0..=1.0).contains(&delta) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("need 0 ≤ δ ≤ 1 and T ≥ 0, got δ={delta}, T={t}")));
    }
    let e = eps_base(delta, t);
    Ok(MemoryCurvePoint {
        t,
        eps_base: e,
        eps: at_least_two_of(8, e),
        bound: 28.0 * e * e,
    })
}

/// Failure probability of the eight-qubit code when only the four excited
/// qubits of each codeword term can decay: `P[≥2 of 4]`.
pub fn memory_failure_excited_only(delta: f64, t: f64) -> f64 {
    at_least_two_of(4, eps_base(delta, t))
}

pub fn memory_curve(delta: f64, t_max: u64) -> Result<Vec<MemoryCurvePoint>> {
    (0..=t_max).map(|t| memory_failure(delta, t as f64)).collect()
}

/// Continuous `T` with `1 − (1−δ)^T = target`.
pub fn steps_for_eps_base(delta: f64, target: f64) -> f64 {
    (-target).ln_1p() / (-delta).ln_1p()
}

/// Continuous `T` at which the binomial `ε` reaches `target`.
pub fn steps_for_eps(delta: f64, target: f64) -> f64 {
    let e = bisect(|e| at_least_two_of(8, e) - target, 0.0, 1.0, 1e-15);
    steps_for_eps_base(delta, e)
}

/// Continuous `T` at which `28 ε_b²` reaches `target`.
pub fn steps_for_bound(delta: f64, target: f64) -> f64 {
    steps_for_eps_base(delta, (target / 28.0).sqrt())
}

/// Root of an increasing-through-zero function on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossover {
    /// `log(27/28)/log(1−δ)`, where `28 ε_b² = ε_b`.
    pub t_star_bound: f64,
    /// The same crossing located by bisection in `T`.
    pub t_star_bound_bisection: f64,
    /// Bisection on `ε(T) = ε_b(T)` with the exact binomial `ε`.
    pub t_star_exact: f64,
    /// `ε_b` at the exact crossing.
    pub eps_at_exact: f64,
}

pub fn memory_crossover(delta: f64) -> Result<Crossover> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < δ < 1, got {delta}")));
    }
    let t_star_bound = (27.0f64 / 28.0).ln() / (-delta).ln_1p();
    let hi = 10.0 * t_star_bound;
    let t_star_bound_bisection = bisect(
        |t| {
            let e = eps_base(delta, t);
            28.0 * e * e - e
        },
        t_star_bound * 1e-3,
        hi,
        1e-10 * t_star_bound,
    );
    // ε − ε_b changes sign once on (0, 1): negative for small ε_b, positive by 1/2.
    let eps_at_exact = bisect(|e| at_least_two_of(8, e) - e, 1e-6, 0.5, 1e-14);
    Ok(Crossover {
        t_star_bound,
        t_star_bound_bisection,
        t_star_exact: steps_for_eps_base(delta, eps_at_exact),
        eps_at_exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwirledQ {
    pub q: f64,
    pub q_upper: f64,
}

/// `q = 1 − ((1−λ)cos^{2n}θ + λ(1−p)^n)^{1/n}` and `q ≤ (1−λ)sin²θ + λp`.
pub fn twirled_q(lambda: f64, p: f64, theta: f64, n: u32) -> Result<TwirledQ> {
    if !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&p) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need λ, p in [0, 1] and n ≥ 1, got λ={lambda}, p={p}, n={n}"
        )));
    }
    let c2 = theta.cos().powi(2);
    let s2 = theta.sin().powi(2);
    let q_upper = (1.0 - lambda) * s2 + lambda * p;
    let q = if n == 1 {
        q_upper
    } else {
        let nf = f64::from(n);
        let inner = (1.0 - lambda) * (nf * c2.ln()).exp() + lambda * (nf * (-p).ln_1p()).exp();
        if inner <= 0.0 {
            1.0
        } else {
            -(inner.ln() / nf).exp_m1()
        }
    };
    debug_assert!(q <= q_upper + 1e-15, "q={q} q_upper={q_upper}");
    Ok(TwirledQ { q, q_upper })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenericOverhead {
    pub t: u64,
    /// `⌊c/log(q_th/q)⌋` and `⌈c/log(q_th/q)⌉`.
    pub floor: u64,
    pub ceil: u64,
    /// `c = log(q/p_fail)`.
    pub c: f64,
}

/// `F_t q^{t+1} ≤ p_fail` with `F_t = q_th^{−t}`, i.e. `t·log(q_th/q) ≥ log(q/p_fail)`.
pub fn generic_inequality_holds(t: u64, q: f64, q_th: f64, p_fail: f64) -> bool {
    let lhs = t as f64 * (q_th / q).ln();
    let c = (q / p_fail).ln();
    lhs >= c - REL_TOL * c.abs().max(1.0)
}

/// Smallest `t ≥ 0` at which the generic concatenated code reaches `p_fail`.
pub fn overhead_generic(q: f64, q_th: f64, p_fail: f64) -> Result<GenericOverhead> {
    if !(q > 0.0) || !(p_fail > 0.0) {
        return Err(Error::InvalidParameter(format!("need q > 0 and p_fail > 0, got q={q}, p_fail={p_fail}")));
    }
    if q >= q_th {
        return Err(Error::ThresholdViolated { rate: q, threshold: q_th });
    }
    let c = (q / p_fail).ln();
    let ratio = (c / (q_th / q).ln()).max(0.0);
    let t = smallest_satisfying(ratio.ceil() as u64, |t| generic_inequality_holds(t, q, q_th, p_fail));
    Ok(GenericOverhead {
        t,
        floor: ratio.floor() as u64,
        ceil: ratio.ceil() as u64,
        c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CeOverhead {
    pub t: u64,
    /// `(c′ + log λ + log(2−p)) / log(p_th/p)`, possibly negative.
    pub bound: f64,
    /// `c′ = log(p/p_fail)`.
    pub c_prime: f64,
}

/// `η_t = λ(1−(1−p)²)(p/p_th)^t`.
pub fn ce_eta(t: u64, lambda: f64, p: f64, p_th: f64) -> f64 {
    lambda * (1.0 - (1.0 - p).powi(2)) * (p / p_th).powf(t as f64)
}

/// `η_t ≤ p_fail`, compared in log space.
pub fn ce_inequality_holds(t: u64, lambda: f64, p: f64, p_th: f64, p_fail: f64) -> bool {
    if lambda == 0.0 {
        return true;
    }
    let log_eta = lambda.ln() + (p * (2.0 - p)).ln() + t as f64 * (p / p_th).ln();
    let rhs = p_fail.ln();
    log_eta <= rhs + REL_TOL * rhs.abs().max(1.0)
}

/// Concatenation level for a rotated code whose leading-order failures come
/// only from the stochastic fraction `λ`.
pub fn overhead_ce(lambda: f64, p: f64, p_th: f64, p_fail: f64) -> Result<CeOverhead> {
    if !(0.0..=1.0).contains(&lambda) || !(p > 0.0) || !(p_fail > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need λ in [0, 1], p > 0, p_fail > 0, got λ={lambda}, p={p}, p_fail={p_fail}"
        )));
    }
    if p >= p_th {
        return Err(Error::ThresholdViolated { rate: p, threshold: p_th });
    }
    let c_prime = (p / p_fail).ln();
    if lambda == 0.0 {
        return Ok(CeOverhead {
            t: 0,
            bound: f64::NEG_INFINITY,
            c_prime,
        });
    }
    let bound = (c_prime + lambda.ln() + (2.0 - p).ln()) / (p_th / p).ln();
    let t = smallest_satisfying(bound.max(0.0).ceil() as u64, |t| {
        ce_inequality_holds(t, lambda, p, p_th, p_fail)
    });
    Ok(CeOverhead { t, bound, c_prime })
}

/// Moves `guess` to the smallest `t` with `holds(t)`, for monotone `holds`.
fn smallest_satisfying(mut t: u64, holds: impl Fn(u64) -> bool) -> u64 {
    while !holds(t) {
        t += 1;
    }
    while t > 0 && holds(t - 1) {
        t -= 1;
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverheadParams {
    pub p: f64,
    pub theta: f64,
    pub q_th: f64,
    pub p_th: f64,
    pub p_fail: f64,
    /// Block length used for the exact twirled rate.
    pub n: u32,
    /// Use the exact `q` at `n` for the generic code instead of `q_upper`.
    pub use_exact_q: bool,
    /// Generic points needing more than `t_cap` levels are reported as missing.
    pub t_cap: Option<u64>,
}

impl OverheadParams {
    /// `q_th = 0.01`, `p_th = 0.005`, `p = 0.0005`, `sin²θ = 0.005`, `p_fail = 10^{-12}`.
    pub fn reference() -> Self {
        Self {
            p: 0.0005,
            theta: theta_from_sin2(0.005),
            q_th: 0.01,
            p_th: 0.005,
            p_fail: 1e-12,
            n: 1,
            use_exact_q: false,
            t_cap: None,
        }
    }
}

pub fn theta_from_sin2(s2: f64) -> f64 {
    s2.sqrt().asin()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OverheadPoint {
    pub lambda: f64,
    pub q: f64,
    pub q_upper: f64,
    pub t_generic: Option<u64>,
    pub t_ce: Option<u64>,
}

/// `count` values spaced evenly in `log10` from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

pub fn overhead_curve(lambdas: &[f64], params: &OverheadParams) -> Result<Vec<OverheadPoint>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let tq = twirled_q(lambda, params.p, params.theta, params.n)?;
            let rate = if params.use_exact_q { tq.q } else { tq.q_upper };
            let t_generic = match overhead_generic(rate, params.q_th, params.p_fail) {
                Ok(o) => Some(o.t).filter(|&t| params.t_cap.is_none_or(|cap| t <= cap)),
                Err(Error::ThresholdViolated { .. }) => None,
                Err(e) => return Err(e),
            };
            let t_ce = match overhead_ce(lambda, params.p, params.p_th, params.p_fail) {
                Ok(o) => Some(o.t),
                Err(Error::ThresholdViolated { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(OverheadPoint {
                lambda,
                q: tq.q,
                q_upper: tq.q_upper,
                t_generic,
                t_ce,
            })
        })
        .collect()
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(t: Option<u64>) -> String {
    t.map_or_else(|| "NA".to_string(), |t| t.to_string())
}

pub const MEMORY_CSV_HEADER: &str = "T,eps_base,eps,bound";
pub const OVERHEAD_CSV_HEADER: &str = "lambda,q,q_upper,t_generic,t_ce";

pub fn write_memory_csv<W: Write>(points: &[MemoryCurvePoint], mut w: W) -> Result<()> {
    writeln!(w, "{MEMORY_CSV_HEADER}")?;
    for p in points {
        writeln!(w, "{},{},{},{}", p.t, fmt_f64(p.eps_base), fmt_f64(p.eps), fmt_f64(p.bound))?;
    }
    Ok(())
}

pub fn write_overhead_csv<W: Write>(points: &[OverheadPoint], mut w: W) -> Result<()> {
    writeln!(w, "{OVERHEAD_CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(p.lambda),
            fmt_f64(p.q),
            fmt_f64(p.q_upper),
            fmt_opt(p.t_generic),
            fmt_opt(p.t_ce)
        )?;
    }
    Ok(())
}
