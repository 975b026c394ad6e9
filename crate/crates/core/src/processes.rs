//! Reversible strokes: adiabatic (populations frozen) and isothermal (expectation energy
//! frozen, populations climbing the level staircase).

use crate::boxmodel::{check_length, eigenenergy, entropy, expectation_energy, wall_force, MixedState, WellParams};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions, Quadrature, DEFAULT_MAX_INTERVALS};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrokeKind {
    Adiabatic,
    Isothermal,
}

impl StrokeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrokeKind::Adiabatic => "adiabatic",
            StrokeKind::Isothermal => "isothermal",
        }
    }
}

impl std::fmt::Display for StrokeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One point along a stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSample<T> {
    pub kind: StrokeKind,
    pub length: T,
    pub force: T,
    pub energy: T,
    pub entropy: T,
    pub state: MixedState<T>,
}

/// `L / base`, snapped onto an integer when it is within a few ulps of one so that
/// `n * base` lands exactly on the pure level `n`.
fn staircase_ratio<T: Real>(length: T, base: T) -> T {
    let r = length / base;
    let nearest = r.round();
    if (r - nearest).abs() <= T::lit(8.0) * T::epsilon() * r {
        nearest
    } else {
        r
    }
}

/// State on the isotherm `E = e_fix` through the pure ground state at width `base`.
///
/// With `k = floor(L / base)` the populations sit on levels `k` and `k + 1`:
/// `w_{k+1} = ((L/base)^2 - k^2) / (2k + 1)`, `w_k = 1 - w_{k+1}`. At `L = k * base` the
/// state is pure level `k`.
pub fn isothermal_state_at<T: Real>(e_fix: T, length: T, base: T, params: &WellParams<T>) -> Result<MixedState<T>> {
    check_length(length)?;
    let ground = eigenenergy(1, base, params)?;
    if (e_fix - ground).abs() > T::normalization_tol() * ground {
        return Err(Error::domain("isotherm energy must equal the ground-state energy at the base width", e_fix));
    }
    staircase_state(length, base)
}

fn staircase_state<T: Real>(length: T, base: T) -> Result<MixedState<T>> {
    let r = staircase_ratio(length, base);
    if r < T::one() {
        return Err(Error::OutsideIsotherm { length: length.as_f64(), base: base.as_f64() });
    }
    let k_real = r.floor();
    let k = k_real
        .to_u32()
        .filter(|&k| k < u32::MAX)
        .ok_or_else(|| Error::domain("isotherm width exceeds the representable level range", length))?;
    let upper = ((r - k_real) * (r + k_real) / (T::lit(2.0) * k_real + T::one())).min(T::one()).max(T::zero());
    MixedState::new([(k, T::one() - upper), (k + 1, upper)])
}

#[derive(Debug, Clone, PartialEq)]
enum Path<T> {
    Frozen,
    Staircase { base: T, e_fix: T },
}

/// One quasistatic stroke between two well widths.
#[derive(Debug, Clone, PartialEq)]
pub struct Stroke<T> {
    l_start: T,
    l_end: T,
    params: WellParams<T>,
    state_start: MixedState<T>,
    path: Path<T>,
}

impl<T: Real> Stroke<T> {
    /// Adiabatic stroke: populations fixed, `E L^2` and `F L^3` constant.
    pub fn adiabatic(state: MixedState<T>, l_from: T, l_to: T, params: WellParams<T>) -> Result<Self> {
        check_length(l_from)?;
        check_length(l_to)?;
        Ok(Self { l_start: l_from, l_end: l_to, params, state_start: state, path: Path::Frozen })
    }

    /// Isothermal stroke at expectation energy `e_fix`, which must be the ground-state
    /// energy at width `base`. Valid for widths `L >= base`; `L F = 2 e_fix` throughout.
    pub fn isothermal(e_fix: T, l_from: T, l_to: T, base: T, params: WellParams<T>) -> Result<Self> {
        let state_start = isothermal_state_at(e_fix, l_from, base, &params)?;
        check_length(l_to)?;
        if staircase_ratio(l_to, base) < T::one() {
            return Err(Error::OutsideIsotherm { length: l_to.as_f64(), base: base.as_f64() });
        }
        Ok(Self { l_start: l_from, l_end: l_to, params, state_start, path: Path::Staircase { base, e_fix } })
    }

    /// Isothermal stroke whose energy is the ground-state energy at `base`.
    pub fn isothermal_from_base(base: T, l_from: T, l_to: T, params: WellParams<T>) -> Result<Self> {
        let e_fix = eigenenergy(1, base, &params)?;
        Self::isothermal(e_fix, l_from, l_to, base, params)
    }

    pub fn kind(&self) -> StrokeKind {
        match self.path {
            Path::Frozen => StrokeKind::Adiabatic,
            Path::Staircase { .. } => StrokeKind::Isothermal,
        }
    }

    pub fn l_start(&self) -> T {
        self.l_start
    }

    pub fn l_end(&self) -> T {
        self.l_end
    }

    pub fn params(&self) -> &WellParams<T> {
        &self.params
    }

    pub fn state_start(&self) -> &MixedState<T> {
        &self.state_start
    }

    pub fn state_end(&self) -> Result<MixedState<T>> {
        self.state_at(self.l_end)
    }

    /// Conserved quantity: `e_fix` on isotherms, `E(L) L^2` on adiabats.
    pub fn conserved(&self) -> T {
        match self.path {
            Path::Staircase { e_fix, .. } => e_fix,
            Path::Frozen => {
                self.params.energy_unit() * self.state_start.second_moment()
            }
        }
    }

    /// Lowest and highest level populated anywhere along the stroke.
    pub fn level_window(&self) -> (u32, u32) {
        match self.path {
            Path::Frozen => {
                let pops = self.state_start.populations();
                (pops[0].0, pops[pops.len() - 1].0)
            }
            Path::Staircase { base, .. } => {
                let lo = staircase_ratio(self.l_start.min(self.l_end), base).floor();
                let hi = staircase_ratio(self.l_start.max(self.l_end), base).ceil();
                (lo.to_u32().unwrap_or(1), hi.to_u32().unwrap_or(u32::MAX))
            }
        }
    }

    pub fn state_at(&self, length: T) -> Result<MixedState<T>> {
        check_length(length)?;
        match self.path {
            Path::Frozen => Ok(self.state_start.clone()),
            Path::Staircase { base, .. } => staircase_state(length, base),
        }
    }

    pub fn force_at(&self, length: T) -> Result<T> {
        wall_force(&self.state_at(length)?, length, &self.params)
    }

    pub fn energy_at(&self, length: T) -> Result<T> {
        expectation_energy(&self.state_at(length)?, length, &self.params)
    }

    /// Closed-form work done by the system; positive on expansion.
    pub fn work(&self) -> T {
        if self.l_start == self.l_end {
            return T::zero();
        }
        match self.path {
            Path::Staircase { e_fix, .. } => T::lit(2.0) * e_fix * (self.l_end.ln() - self.l_start.ln()),
            Path::Frozen => {
                let moment = self.params.energy_unit() * self.state_start.second_moment();
                moment / (self.l_start * self.l_start) - moment / (self.l_end * self.l_end)
            }
        }
    }

    /// Work as the adaptive quadrature of `F(L) dL`, with `F` evaluated from the state
    /// at each node.
    pub fn work_quadrature(&self, rel_tol: T) -> Result<Quadrature<T>> {
        if !(rel_tol > T::zero() && rel_tol <= T::lit(1e-4)) {
            return Err(Error::domain("quadrature tolerance must lie in (0, 1e-4]", rel_tol));
        }
        let opts = QuadOptions { rel_tol, max_intervals: DEFAULT_MAX_INTERVALS };
        integrate(|l| self.force_at(l), self.l_start, self.l_end, opts)
    }

    /// `count` samples at uniformly spaced widths, endpoints included.
    pub fn sample(&self, count: usize) -> Result<Vec<ProcessSample<T>>> {
        if count < 2 {
            return Err(Error::domain("sample count must be at least 2", count));
        }
        let last = count - 1;
        let span = self.l_end - self.l_start;
        (0..count)
            .map(|i| {
                let length = if i == last {
                    self.l_end
                } else {
                    self.l_start + span * T::from_count(i) / T::from_count(last)
                };
                let state = self.state_at(length)?;
                Ok(ProcessSample {
                    kind: self.kind(),
                    length,
                    force: wall_force(&state, length, &self.params)?,
                    energy: expectation_energy(&state, length, &self.params)?,
                    entropy: entropy(&state),
                    state,
                })
            })
            .collect()
    }

    /// Same path traversed in the opposite direction.
    pub fn reversed(&self) -> Result<Self> {
        Ok(Self {
            l_start: self.l_end,
            l_end: self.l_start,
            params: self.params,
            state_start: self.state_end()?,
            path: self.path.clone(),
        })
    }
}
