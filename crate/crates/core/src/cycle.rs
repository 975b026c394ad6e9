//! Four-stroke Carnot cycle: isothermal expansion from the ground state at `L1` up to pure
//! level `n_top` at `L2 = n_top L1`, adiabatic expansion to `L3`, isothermal compression
//! back to the ground state at `L4 = L3 / n_top`, adiabatic compression to `L1`.

use crate::boxmodel::{eigenenergy, entropy, MixedState, WellParams};
use crate::error::{Error, Result};
use crate::processes::{ProcessSample, Stroke};
use crate::quadrature::DEFAULT_REL_TOL;
use crate::real::{CompensatedSum, Real};

/// Relative slack under which `L3 = n_top L1` is treated as the degenerate (zero-area) cycle.
const DEGENERATE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarnotSpec<T> {
    pub top_level: u32,
    pub l1: T,
    pub l3: T,
    pub params: WellParams<T>,
    pub samples_per_stroke: usize,
}

impl<T: Real> CarnotSpec<T> {
    pub fn new(top_level: u32, l1: T, l3: T) -> Self {
        Self { top_level, l1, l3, params: WellParams::default(), samples_per_stroke: 256 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_level < 2 {
            return Err(Error::Geometry(format!("top level must be at least 2, got {}", self.top_level)));
        }
        for (name, v) in [("L1", self.l1), ("L3", self.l3)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::Geometry(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.samples_per_stroke < 2 {
            return Err(Error::Geometry(format!(
                "samples_per_stroke must be at least 2, got {}",
                self.samples_per_stroke
            )));
        }
        let l2 = T::from_u32(self.top_level).unwrap() * self.l1;
        if self.l3 < l2 && !self.is_degenerate() {
            return Err(Error::Geometry(format!("L3 must exceed top_level·L1 (got L3 = {}, top_level·L1 = {l2})", self.l3)));
        }
        Ok(())
    }

    /// `L3 = n_top L1` within rounding: the isotherms coincide and the cycle encloses no area.
    pub fn is_degenerate(&self) -> bool {
        let l2 = T::from_u32(self.top_level).unwrap() * self.l1;
        (self.l3 - l2).abs() <= T::lit(DEGENERATE_REL) * l2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<T> {
    spec: CarnotSpec<T>,
    strokes: [Stroke<T>; 4],
    e_hot: T,
    e_cold: T,
    l2: T,
    l4: T,
}

/// Net work, heat flows and efficiency of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleReport<T> {
    pub work: T,
    pub heat_in: T,
    pub heat_out: T,
    pub eta: T,
    pub eta_closed_form: T,
    /// Largest quadrature-vs-closed-form work difference (per stroke and net), relative to `heat_in`.
    pub quadrature_discrepancy: T,
    pub stroke_works: [T; 4],
    pub stroke_works_quadrature: [T; 4],
    pub work_quadrature: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleSample<T> {
    /// 1-based stroke position within the cycle.
    pub stroke_index: usize,
    pub sample: ProcessSample<T>,
}

impl<T: Real> Cycle<T> {
    pub fn build(spec: CarnotSpec<T>) -> Result<Self> {
        spec.validate()?;
        let n = spec.top_level;
        let nf = T::from_u32(n).unwrap();
        let params = spec.params;
        let l1 = spec.l1;
        let l2 = nf * l1;
        let (l3, l4) = if spec.is_degenerate() { (l2, l1) } else { (spec.l3, spec.l3 / nf) };

        let hot = Stroke::isothermal_from_base(l1, l1, l2, params)?;
        let adiabatic_out = Stroke::adiabatic(MixedState::pure(n)?, l2, l3, params)?;
        let cold = Stroke::isothermal_from_base(l4, l3, l4, params)?;
        let adiabatic_in = Stroke::adiabatic(MixedState::pure(1)?, l4, l1, params)?;

        let cycle = Self {
            spec: CarnotSpec { l3, ..spec },
            e_hot: eigenenergy(1, l1, &params)?,
            e_cold: eigenenergy(1, l4, &params)?,
            strokes: [hot, adiabatic_out, cold, adiabatic_in],
            l2,
            l4,
        };
        cycle.check_closure()?;
        Ok(cycle)
    }

    /// Each stroke must start where the previous one ended, and the last must return to
    /// the initial `(state, L)`.
    fn check_closure(&self) -> Result<()> {
        for i in 0..4 {
            let this = &self.strokes[i];
            let next = &self.strokes[(i + 1) % 4];
            if this.l_end() != next.l_start() {
                return Err(Error::Geometry(format!("stroke {} ends at L = {} but stroke {} starts at L = {}",
                    i + 1, this.l_end(), (i + 1) % 4 + 1, next.l_start())));
            }
            if this.state_end()? != *next.state_start() {
                return Err(Error::Geometry(format!("state discontinuity after stroke {}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &CarnotSpec<T> {
        &self.spec
    }

    pub fn strokes(&self) -> &[Stroke<T>; 4] {
        &self.strokes
    }

    pub fn e_hot(&self) -> T {
        self.e_hot
    }

    pub fn e_cold(&self) -> T {
        self.e_cold
    }

    pub fn l2(&self) -> T {
        self.l2
    }

    pub fn l4(&self) -> T {
        self.l4
    }

    pub fn is_degenerate(&self) -> bool {
        self.spec.is_degenerate()
    }

    /// Closed-form efficiency `1 - n_top^2 L1^2 / L3^2`.
    pub fn eta_geometric(&self) -> T {
        let r = T::from_u32(self.spec.top_level).unwrap() * self.spec.l1 / self.spec.l3;
        T::one() - r * r
    }

    pub fn evaluate(&self) -> Result<CycleReport<T>> {
        self.evaluate_with_tol(T::lit(DEFAULT_REL_TOL))
    }

    pub fn evaluate_with_tol(&self, rel_tol: T) -> Result<CycleReport<T>> {
        let mut stroke_works = [T::zero(); 4];
        let mut stroke_works_quadrature = [T::zero(); 4];
        for (i, stroke) in self.strokes.iter().enumerate() {
            stroke_works[i] = stroke.work();
            stroke_works_quadrature[i] = stroke.work_quadrature(rel_tol)?.value;
        }
        let work = stroke_works.iter().copied().collect::<CompensatedSum<T>>().value();
        let work_quadrature = stroke_works_quadrature.iter().copied().collect::<CompensatedSum<T>>().value();
        let heat_in = stroke_works[0];
        let heat_out = -stroke_works[2];
        let quadrature_discrepancy = stroke_works
            .iter()
            .zip(&stroke_works_quadrature)
            .map(|(w, q)| (*w - *q).abs())
            .fold((work - work_quadrature).abs(), T::max)
            / heat_in;
        let (work, eta) = if self.is_degenerate() { (T::zero(), T::zero()) } else { (work, work / heat_in) };
        Ok(CycleReport {
            work,
            heat_in,
            heat_out,
            eta,
            eta_closed_form: T::one() - self.e_cold / self.e_hot,
            quadrature_discrepancy,
            stroke_works,
            stroke_works_quadrature,
            work_quadrature,
        })
    }

    /// Per-stroke samples in cycle order, forming a closed polyline in the `(L, F)` plane.
    pub fn sample(&self) -> Result<Vec<CycleSample<T>>> {
        let mut out = Vec::with_capacity(4 * self.spec.samples_per_stroke);
        for (i, stroke) in self.strokes.iter().enumerate() {
            for sample in stroke.sample(self.spec.samples_per_stroke)? {
                out.push(CycleSample { stroke_index: i + 1, sample });
            }
        }
        Ok(out)
    }

    /// The same loop traversed backwards (refrigerator orientation).
    pub fn reversed_strokes(&self) -> Result<Vec<Stroke<T>>> {
        self.strokes.iter().rev().map(Stroke::reversed).collect()
    }

    /// Entropy of the working medium at the start of each stroke and after the last one.
    pub fn entropy_trace(&self) -> Result<Vec<T>> {
        let mut trace: Vec<T> = self.strokes.iter().map(|s| entropy(s.state_start())).collect();
        trace.push(entropy(&self.strokes[3].state_end()?));
        Ok(trace)
    }
}

/// Area enclosed by the `(L, F)` polyline, positive when traversed clockwise (engine
/// orientation). Equals the trapezoid-rule work along the path.
pub fn enclosed_work<T: Real>(points: impl IntoIterator<Item = (T, T)>) -> T {
    let points: Vec<(T, T)> = points.into_iter().collect();
    if points.len() < 3 {
        return T::zero();
    }
    let mut acc = CompensatedSum::new();
    for (i, &(x0, y0)) in points.iter().enumerate() {
        let (x1, y1) = points[(i + 1) % points.len()];
        acc.add(x1 * y0 - x0 * y1);
    }
    acc.value() / T::lit(2.0)
}
