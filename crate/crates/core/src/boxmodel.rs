//! Infinite square well: eigenlevels, level-population states, and the observables
//! (expectation energy, wall force, entropy) that the engine strokes are built from.
//!
//! States carry populations `w_n = |a_n|^2` only. Every observable used by the engine
//! depends on populations alone, so phases are not represented.

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

/// Physical constants fixing the energy scale. Natural units (`hbar = mass = 1`) by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellParams<T> {
    hbar: T,
    mass: T,
}

impl<T: Real> Default for WellParams<T> {
    fn default() -> Self {
        Self { hbar: T::one(), mass: T::one() }
    }
}

impl<T: Real> WellParams<T> {
    pub fn new(hbar: T, mass: T) -> Result<Self> {
        if !(hbar.is_finite() && hbar > T::zero()) {
            return Err(Error::domain("hbar must be finite and positive", hbar));
        }
        if !(mass.is_finite() && mass > T::zero()) {
            return Err(Error::domain("mass must be finite and positive", mass));
        }
        Ok(Self { hbar, mass })
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// `pi^2 hbar^2 / (2 m)`, the ground-state energy of a unit-width well.
    pub fn energy_unit(&self) -> T {
        let pi = T::PI();
        pi * pi * self.hbar * self.hbar / (T::lit(2.0) * self.mass)
    }
}

pub(crate) fn check_length<T: Real>(length: T) -> Result<()> {
    if length.is_finite() && length > T::zero() {
        Ok(())
    } else {
        Err(Error::domain("well width must be finite and positive", length))
    }
}

fn check_level(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::domain("level index must be at least 1", n))
    }
}

/// `E_n(L) = pi^2 hbar^2 n^2 / (2 m L^2)`.
pub fn eigenenergy<T: Real>(n: u32, length: T, params: &WellParams<T>) -> Result<T> {
    check_level(n)?;
    check_length(length)?;
    let r = T::from_u32(n).unwrap() / length;
    Ok(params.energy_unit() * r * r)
}

/// `phi_n(x) = sqrt(2/L) sin(n pi x / L)` on `[0, L]`.
pub fn eigenfunction_value<T: Real>(n: u32, length: T, x: T) -> Result<T> {
    check_level(n)?;
    check_length(length)?;
    if !(x >= T::zero() && x <= length) {
        return Err(Error::domain("position must lie inside [0, L]", x));
    }
    let n = T::from_u32(n).unwrap();
    Ok((T::lit(2.0) / length).sqrt() * (n * T::PI() * x / length).sin())
}

/// Finite population vector over box eigenlevels, sorted by level.
///
/// A state built with [`MixedState::new`] sums to one within
/// [`Real::normalization_tol`]. Truncated sudden-expansion outputs may fall short of one;
/// the shortfall is reported by [`MixedState::deficit`] and removed only on request
/// through [`MixedState::renormalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState<T> {
    populations: Vec<(u32, T)>,
}

impl<T: Real> MixedState<T> {
    /// Validates and sorts `(level, weight)` pairs. Zero weights are dropped.
    pub fn new(pairs: impl IntoIterator<Item = (u32, T)>) -> Result<Self> {
        let populations = Self::collect(pairs)?;
        let total = total_weight(&populations);
        if (total - T::one()).abs() > T::normalization_tol() {
            return Err(Error::InvalidState(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { populations })
    }

    /// Validates and rescales the weights so they sum to one.
    pub fn from_unnormalized(pairs: impl IntoIterator<Item = (u32, T)>) -> Result<Self> {
        let mut populations = Self::collect(pairs)?;
        let total = total_weight(&populations);
        if !(total > T::zero()) {
            return Err(Error::InvalidState("weights sum to zero".into()));
        }
        for (_, w) in &mut populations {
            *w = *w / total;
        }
        Ok(Self { populations })
    }

    /// Truncated expansion output: total weight may fall short of one by at most `allowance`.
    pub(crate) fn truncated(pairs: Vec<(u32, T)>, allowance: T) -> Result<Self> {
        let populations = Self::collect(pairs)?;
        let total = total_weight(&populations);
        let tol = T::normalization_tol();
        if total > T::one() + tol || total < T::one() - allowance - tol {
            return Err(Error::InvalidState(format!(
                "truncated weights sum to {total}, allowance {allowance}"
            )));
        }
        Ok(Self { populations })
    }

    pub fn pure(level: u32) -> Result<Self> {
        check_level(level)?;
        Ok(Self { populations: vec![(level, T::one())] })
    }

    fn collect(pairs: impl IntoIterator<Item = (u32, T)>) -> Result<Vec<(u32, T)>> {
        let mut populations: Vec<(u32, T)> = Vec::new();
        for (n, w) in pairs {
            check_level(n)?;
            if !w.is_finite() || w < T::zero() {
                return Err(Error::InvalidState(format!("weight {w} of level {n} is not a probability")));
            }
            if w > T::zero() {
                populations.push((n, w));
            }
        }
        populations.sort_by_key(|&(n, _)| n);
        if let Some(pair) = populations.windows(2).find(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidState(format!("level {} appears twice", pair[0].0)));
        }
        if populations.is_empty() {
            return Err(Error::InvalidState("state has no populated level".into()));
        }
        Ok(populations)
    }

    pub fn populations(&self) -> &[(u32, T)] {
        &self.populations
    }

    pub fn weight(&self, level: u32) -> T {
        self.populations
            .binary_search_by_key(&level, |&(n, _)| n)
            .map(|i| self.populations[i].1)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn total_weight(&self) -> T {
        total_weight(&self.populations)
    }

    /// Probability mass missing from a truncated state (zero for normalized states).
    pub fn deficit(&self) -> T {
        (T::one() - self.total_weight()).max(T::zero())
    }

    pub fn renormalized(&self) -> Self {
        let total = self.total_weight();
        Self { populations: self.populations.iter().map(|&(n, w)| (n, w / total)).collect() }
    }

    pub fn is_pure(&self) -> bool {
        self.populations.len() == 1
    }

    pub fn max_level(&self) -> u32 {
        self.populations.last().map(|&(n, _)| n).unwrap_or(1)
    }

    /// `sum w_n n^2`, the level moment shared by energy and force.
    pub(crate) fn second_moment(&self) -> T {
        self.populations
            .iter()
            .map(|&(n, w)| {
                let n = T::from_u32(n).unwrap();
                w * n * n
            })
            .collect::<CompensatedSum<T>>()
            .value()
    }
}

fn total_weight<T: Real>(pairs: &[(u32, T)]) -> T {
    pairs.iter().map(|&(_, w)| w).collect::<CompensatedSum<T>>().value()
}

/// `E(L) = sum w_n E_n(L)`.
pub fn expectation_energy<T: Real>(state: &MixedState<T>, length: T, params: &WellParams<T>) -> Result<T> {
    check_length(length)?;
    Ok(params.energy_unit() * state.second_moment() / (length * length))
}

/// `F(L) = sum w_n pi^2 hbar^2 n^2 / (m L^3) = -dE/dL` at fixed populations.
pub fn wall_force<T: Real>(state: &MixedState<T>, length: T, params: &WellParams<T>) -> Result<T> {
    check_length(length)?;
    Ok(T::lit(2.0) * params.energy_unit() * state.second_moment() / (length * length * length))
}

/// `S = -sum w ln w`, with `0 ln 0 = 0`.
pub fn entropy<T: Real>(state: &MixedState<T>) -> T {
    state
        .populations
        .iter()
        .filter(|&&(_, w)| w > T::zero())
        .map(|&(_, w)| -(w * w.ln()) + T::zero())
        .collect::<CompensatedSum<T>>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit() -> WellParams<f64> {
        WellParams::default()
    }

    #[test]
    fn eigenenergy_examples() {
        let p = unit();
        assert_relative_eq!(eigenenergy(1, 1.0, &p).unwrap(), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(eigenenergy(1, 1.0, &p).unwrap(), 4.934_802_2, max_relative = 1e-8);
        assert_eq!(eigenenergy(2, 2.0, &p).unwrap(), eigenenergy(1, 1.0, &p).unwrap());
        assert_relative_eq!(eigenenergy(3, 1.0, &p).unwrap(), 44.413_220, max_relative = 1e-7);
    }

    #[test]
    fn eigenenergy_rejects_bad_input() {
        let p = unit();
        assert!(matches!(eigenenergy(0, 1.0, &p), Err(Error::Domain { .. })));
        assert!(eigenenergy(1, 0.0, &p).is_err());
        assert!(eigenenergy(1, -1.0, &p).is_err());
        assert!(eigenenergy(1, f64::NAN, &p).is_err());
    }

    #[test]
    fn eigenenergy_scales_with_mass_and_hbar() {
        let p = WellParams::new(2.0, 4.0).unwrap();
        assert_relative_eq!(eigenenergy(1, 1.0, &p).unwrap(), PI * PI * 4.0 / 8.0, max_relative = 1e-15);
        assert!(WellParams::new(0.0, 1.0).is_err());
        assert!(WellParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn eigenfunction_examples() {
        assert_eq!(eigenfunction_value(1, 1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(eigenfunction_value(1, 1.0, 0.5).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert!(eigenfunction_value(2, 1.0f64, 0.5).unwrap().abs() < 1e-15);
        assert!(eigenfunction_value(1, 1.0, 1.5).is_err());
        assert!(eigenfunction_value(1, 1.0, -0.1).is_err());
    }

    #[test]
    fn expectation_energy_examples() {
        let p = unit();
        let ground = MixedState::pure(1).unwrap();
        assert_relative_eq!(expectation_energy(&ground, 1.0, &p).unwrap(), PI * PI / 2.0, max_relative = 1e-15);
        let half = MixedState::new([(1, 0.5), (2, 0.5)]).unwrap();
        assert_relative_eq!(expectation_energy(&half, 1.0, &p).unwrap(), 12.337_006, max_relative = 1e-7);

        // On the two-level isotherm through the ground state at L1, E = E_H requires L^2 = L1^2 (4 - 3 w1).
        let l1 = 0.7;
        let s = MixedState::new([(1, 0.25), (2, 0.75)]).unwrap();
        let l = l1 * 3.25f64.sqrt();
        assert_relative_eq!(
            expectation_energy(&s, l, &p).unwrap(),
            eigenenergy(1, l1, &p).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn wall_force_examples() {
        let p = unit();
        assert_relative_eq!(wall_force(&MixedState::pure(1).unwrap(), 1.0, &p).unwrap(), PI * PI, max_relative = 1e-15);
        let half = MixedState::new([(1, 0.5), (2, 0.5)]).unwrap();
        let f = wall_force(&half, 1.0, &p).unwrap();
        assert_relative_eq!(f, 24.674_011, max_relative = 1e-7);
        let h = 1e-6;
        let fd = -(expectation_energy(&half, 1.0 + h, &p).unwrap() - expectation_energy(&half, 1.0 - h, &p).unwrap())
            / (2.0 * h);
        assert_relative_eq!(f, fd, max_relative = 1e-6);

        let l1 = 1.3;
        let f2 = wall_force(&MixedState::pure(2).unwrap(), 2.0 * l1, &p).unwrap();
        assert_relative_eq!(f2, PI * PI / (2.0 * l1.powi(3)), max_relative = 1e-14);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&MixedState::<f64>::pure(4).unwrap()), 0.0);
        let half = MixedState::new([(1, 0.5), (2, 0.5)]).unwrap();
        assert_relative_eq!(entropy(&half), 2f64.ln(), max_relative = 1e-15);
        let s = MixedState::new([(1, 0.25), (2, 0.75)]).unwrap();
        assert_relative_eq!(entropy(&s), 0.562_335_1, max_relative = 1e-7);
    }

    #[test]
    fn state_validation() {
        assert!(MixedState::new([(1, 0.5), (2, 0.4)]).is_err());
        assert!(MixedState::new([(1, 0.5), (1, 0.5)]).is_err());
        assert!(MixedState::new([(0, 1.0)]).is_err());
        assert!(MixedState::new([(1, 1.5), (2, -0.5)]).is_err());
        assert!(MixedState::<f64>::new([]).is_err());
        let s = MixedState::new([(3, 0.5), (1, 0.5), (2, 0.0)]).unwrap();
        assert_eq!(s.populations(), &[(1, 0.5), (3, 0.5)]);
        assert_eq!(s.weight(2), 0.0);
        assert!(MixedState::new([(1, 0.5 + 5e-13), (2, 0.5)]).is_ok());
    }

    #[test]
    fn renormalization() {
        let s = MixedState::from_unnormalized([(1, 2.0), (2, 6.0)]).unwrap();
        assert_eq!(s.populations(), &[(1, 0.25), (2, 0.75)]);
        let t = MixedState::truncated(vec![(1, 0.5), (2, 0.49)], 0.02).unwrap();
        assert_relative_eq!(t.deficit(), 0.01, max_relative = 1e-12);
        assert_relative_eq!(t.renormalized().total_weight(), 1.0, max_relative = 1e-15);
        assert!(MixedState::truncated(vec![(1, 0.5), (2, 0.4)], 0.02).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let p = WellParams::<f32>::default();
        let e = eigenenergy(1, 1.0f32, &p).unwrap();
        assert!((e - std::f32::consts::PI.powi(2) / 2.0).abs() < 1e-5);
        let s = MixedState::new([(1, 0.5f32), (2, 0.5)]).unwrap();
        assert!((wall_force(&s, 1.0, &p).unwrap() - 2.0 * expectation_energy(&s, 1.0, &p).unwrap()).abs() < 1e-4);
    }
}
