//! Sudden (free) expansion `L -> alpha L`: overlap coefficients between the old and new
//! eigenbases, the redistributed populations, and certified summation of the
//! energy-conservation series.
//!
//! Overlaps are evaluated in the form
//! `b_{m,n} = 2 n sqrt(alpha) / (m + alpha n) * sinc((m - alpha n) / alpha)`,
//! which equals `2 n alpha^{3/2} (-1)^n sin(m pi / alpha) / (pi (m^2 - alpha^2 n^2))` away
//! from resonance and tends to `1 / sqrt(alpha)` at `m = alpha n`.
//!
//! Truncation bounds (`a = alpha n`, valid once `M >= 2a`):
//! * probability tail of level `n`: `(4 n^2 alpha^3 / pi^2) * 16 / (27 M^3)`;
//! * relative energy tail: `(2 alpha / pi^2) [I(M) + g(M+1) / sin(pi / alpha)]`, with
//!   `g(x) = x^2 / (x^2 - a^2)^2` and `I(M) = int_M^inf g`, from splitting
//!   `sin^2 = (1 - cos) / 2` and bounding the cosine part by Abel summation.

use crate::boxmodel::MixedState;
use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;
/// Budget for materialized post-expansion distributions (one weight per retained level).
pub const DEFAULT_DISTRIBUTION_BUDGET: u64 = 20_000_000;

const RESONANCE_REL: f64 = 1e-9;
const NEAR_RESONANCE_REL: f64 = 1e-4;
const POLE_DISTANCE: f64 = 1e-9;

/// Width ratio of a sudden expansion. `alpha = 1` is the identity map.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExpansionRatio<T>(T);

impl<T: Real> ExpansionRatio<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha.is_finite() && alpha >= T::one() {
            Ok(Self(alpha))
        } else {
            Err(Error::domain("expansion ratio must be finite and at least 1", alpha))
        }
    }

    /// Strict expansion, `alpha > 1`.
    pub fn expanding(alpha: T) -> Result<Self> {
        if alpha.is_finite() && alpha > T::one() {
            Ok(Self(alpha))
        } else {
            Err(Error::domain("alpha must exceed 1", alpha))
        }
    }

    pub fn get(self) -> T {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == T::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport<T> {
    pub terms_used: u64,
    /// Bound on the neglected part of the summed series (probability mass for
    /// distributions, the energy series itself for the identity check).
    pub tail_bound: T,
    pub achieved_sum: T,
    /// Bound on the neglected expectation energy, relative to the pre-expansion energy.
    pub energy_tail_bound: T,
}

fn sinc<T: Real>(t: T) -> T {
    let x = T::PI() * t;
    if x.abs() < T::lit(1e-3) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// `sin(m pi / alpha)` with exact argument reduction (`fmod` is exact).
fn sine_of_level<T: Real>(m: u64, alpha: T) -> T {
    let m = T::from_u64(m).unwrap();
    let r = m % alpha;
    let q = ((m - r) / alpha).round();
    let s = (T::PI() * r / alpha).sin();
    if (q / T::lit(2.0)).fract() == T::zero() {
        s
    } else {
        -s
    }
}

/// Overlap with the sine `sin(m pi / alpha)` supplied by the caller.
fn overlap_with_sine<T: Real>(n: u64, m: u64, alpha: T, sine_m: T) -> T {
    let nf = T::from_u64(n).unwrap();
    let mf = T::from_u64(m).unwrap();
    let a = alpha * nf;
    let gap = mf - a;
    let scale = mf.max(a);
    if gap.abs() <= T::lit(RESONANCE_REL) * scale {
        return T::one() / alpha.sqrt();
    }
    if gap.abs() < T::lit(NEAR_RESONANCE_REL) * mf {
        return T::lit(2.0) * nf * alpha.sqrt() / (mf + a) * sinc(gap / alpha);
    }
    let parity = if n % 2 == 0 { T::one() } else { -T::one() };
    T::lit(2.0) * nf * alpha * alpha.sqrt() * parity * sine_m / (T::PI() * gap * (mf + a))
}

/// `b_{m,n} = <chi_m | phi_n>`, the overlap of old level `n` with new level `m`.
pub fn overlap_coefficient<T: Real>(n: u32, m: u32, alpha: ExpansionRatio<T>) -> Result<T> {
    if n < 1 || m < 1 {
        return Err(Error::domain("level indices must be at least 1", n.min(m)));
    }
    let alpha = alpha.get();
    if alpha == T::one() {
        return Ok(if n == m { T::one() } else { T::zero() });
    }
    Ok(overlap_with_sine(n.into(), m.into(), alpha, sine_of_level(m.into(), alpha)))
}

fn probability_tail<T: Real>(n: u32, alpha: T, terms: u64) -> T {
    let nf = T::from_u32(n).unwrap();
    let mf = T::from_u64(terms).unwrap();
    let pi = T::PI();
    T::lit(4.0) * nf * nf * alpha.powi(3) / (pi * pi) * T::lit(16.0 / 27.0) / (mf * mf * mf)
}

/// Bound on `sum_{m > terms} b_{m,n}^2 E_m(alpha L) / E_n(L)`.
fn energy_tail<T: Real>(n: u32, alpha: T, terms: u64) -> T {
    let a = alpha * T::from_u32(n).unwrap();
    let big_m = T::from_u64(terms).unwrap();
    let pi = T::PI();
    let integral = big_m / (T::lit(2.0) * (big_m * big_m - a * a))
        + (T::lit(2.0) * a / (big_m - a)).ln_1p() / (T::lit(4.0) * a);
    let next = big_m + T::one();
    let g_next = next * next / ((next * next - a * a) * (next * next - a * a));
    T::lit(2.0) * alpha / (pi * pi) * (integral + g_next / (pi / alpha).sin())
}

/// Smallest admissible `terms` for which `bound(terms) <= tol`; `None` past `budget`.
fn smallest_terms<T: Real>(minimum: u64, budget: u64, tol: T, bound: impl Fn(u64) -> T) -> Option<u64> {
    let minimum = minimum.max(1);
    if bound(minimum) <= tol {
        return Some(minimum);
    }
    let mut hi = minimum;
    let mut lo = loop {
        if hi >= budget {
            return None;
        }
        let lo = hi;
        hi = hi.saturating_mul(2).min(budget);
        if bound(hi) <= tol {
            break lo;
        }
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn resonance_floor<T: Real>(alpha: T, top_level: u32) -> u64 {
    (T::lit(2.0) * alpha * T::from_u32(top_level).unwrap()).ceil().to_u64().unwrap_or(u64::MAX)
}

/// First `terms` post-expansion populations `w'_m = sum_n w_n b_{m,n}^2`, `m = 1..=terms`.
pub fn post_expansion_weights<T: Real>(state: &MixedState<T>, alpha: ExpansionRatio<T>, terms: u64) -> Vec<T> {
    let alpha = alpha.get();
    let len = usize::try_from(terms).expect("term count fits in memory");
    if alpha == T::one() {
        let mut out = vec![T::zero(); len];
        for &(n, w) in state.populations() {
            if let Some(slot) = out.get_mut(n as usize - 1) {
                *slot = w;
            }
        }
        return out;
    }
    (1..=terms)
        .map(|m| {
            let sine = sine_of_level(m, alpha);
            state
                .populations()
                .iter()
                .map(|&(n, w)| {
                    let b = overlap_with_sine(n.into(), m, alpha, sine);
                    w * b * b
                })
                .fold(T::zero(), |acc, x| acc + x)
        })
        .collect()
}

/// Populations after the sudden expansion, truncated so that both the neglected
/// probability mass and the neglected relative energy are at most `tail_tol`.
/// The result is not renormalized; its deficit is the truncation error.
pub fn post_expansion_distribution<T: Real>(
    state: &MixedState<T>,
    alpha: ExpansionRatio<T>,
    tail_tol: T,
) -> Result<(MixedState<T>, TruncationReport<T>)> {
    post_expansion_distribution_with_budget(state, alpha, tail_tol, DEFAULT_DISTRIBUTION_BUDGET)
}

pub fn post_expansion_distribution_with_budget<T: Real>(
    state: &MixedState<T>,
    alpha: ExpansionRatio<T>,
    tail_tol: T,
    budget: u64,
) -> Result<(MixedState<T>, TruncationReport<T>)> {
    if !(tail_tol > T::zero() && tail_tol <= T::lit(1e-3)) {
        return Err(Error::domain("tail tolerance must lie in (0, 1e-3]", tail_tol));
    }
    let top = state.max_level();
    if alpha.is_identity() {
        let report = TruncationReport {
            terms_used: top.into(),
            tail_bound: T::zero(),
            achieved_sum: state.total_weight(),
            energy_tail_bound: T::zero(),
        };
        return Ok((state.clone(), report));
    }
    let a = alpha.get();
    let moment = state.second_moment();
    let prob = |terms: u64| {
        state
            .populations()
            .iter()
            .map(|&(n, w)| w * probability_tail(n, a, terms))
            .fold(T::zero(), |acc, x| acc + x)
    };
    let energy = |terms: u64| {
        state
            .populations()
            .iter()
            .map(|&(n, w)| {
                let nf = T::from_u32(n).unwrap();
                w * nf * nf * energy_tail(n, a, terms)
            })
            .fold(T::zero(), |acc, x| acc + x)
            / moment
    };
    let floor = resonance_floor(a, top);
    let terms = smallest_terms(floor, budget, tail_tol, |t| prob(t).max(energy(t)))
        .ok_or(Error::Truncation { needed: budget.saturating_add(1), budget })?;

    let weights = post_expansion_weights(state, alpha, terms);
    let achieved_sum = weights.iter().copied().collect::<CompensatedSum<T>>().value();
    let tail_bound = prob(terms);
    let pairs: Vec<(u32, T)> = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| (u32::try_from(i + 1).expect("level fits in u32"), w))
        .collect();
    let out = MixedState::truncated(pairs, tail_bound)?;
    Ok((out, TruncationReport { terms_used: terms, tail_bound, achieved_sum, energy_tail_bound: energy(terms) }))
}

/// Certifies `sum_m 4 alpha m^2 sin^2(m pi / alpha) / (pi^2 (m^2 - alpha^2 n^2)^2) = 1`
/// by direct summation up to an explicit tail bound.
pub fn verify_energy_identity<T: Real>(n: u32, alpha: ExpansionRatio<T>, tol: T) -> Result<TruncationReport<T>> {
    verify_energy_identity_with_budget(n, alpha, tol, DEFAULT_TERM_BUDGET)
}

pub fn verify_energy_identity_with_budget<T: Real>(
    n: u32,
    alpha: ExpansionRatio<T>,
    tol: T,
    budget: u64,
) -> Result<TruncationReport<T>> {
    if n < 1 {
        return Err(Error::domain("level index must be at least 1", n));
    }
    if alpha.is_identity() {
        return Err(Error::domain("alpha must exceed 1", alpha.get()));
    }
    if !(tol > T::zero() && tol <= T::lit(1e-4)) {
        return Err(Error::domain("tolerance must lie in (0, 1e-4]", tol));
    }
    let a = alpha.get();
    let floor = resonance_floor(a, n);
    let planned = smallest_terms(floor, budget, tol, |t| energy_tail(n, a, t));
    let terms = planned.unwrap_or(budget.max(1));

    let nf = T::from_u32(n).unwrap();
    let mut acc = CompensatedSum::new();
    for m in 1..=terms {
        let b = overlap_with_sine(n.into(), m, a, sine_of_level(m, a));
        let ratio = T::from_u64(m).unwrap() / (a * nf);
        acc.add(b * b * ratio * ratio);
    }
    let achieved_sum = acc.value();
    let tail_bound = if terms >= floor { energy_tail(n, a, terms) } else { T::infinity() };
    let report = TruncationReport { terms_used: terms, tail_bound, achieved_sum, energy_tail_bound: tail_bound };
    let residual = (achieved_sum - T::one()).abs();
    if planned.is_some() && residual <= tol && tail_bound <= tol {
        Ok(report)
    } else {
        Err(Error::IdentityNotCertified {
            achieved_sum: achieved_sum.as_f64(),
            tail_bound: tail_bound.as_f64(),
            terms_used: terms,
            residual: residual.as_f64(),
        })
    }
}

/// Closed form of `sum_{m >= 1} cos(m x) / (m^2 - u^2)` for non-integer `u`:
/// `1/(2u^2) - pi cos(((2k+1) pi - x) u) / (2u sin(pi u))`, `k = floor(x / 2pi)`.
pub fn cosine_series<T: Real>(x: T, u: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain("x must be finite", x));
    }
    if !u.is_finite() || (u - u.round()).abs() <= T::lit(POLE_DISTANCE) {
        return Err(Error::Pole { u: u.as_f64() });
    }
    let pi = T::PI();
    let k = (x / (T::lit(2.0) * pi)).floor();
    let phase = ((T::lit(2.0) * k + T::one()) * pi - x) * u;
    Ok(T::one() / (T::lit(2.0) * u * u) - pi * phase.cos() / (T::lit(2.0) * u * (pi * u).sin()))
}
