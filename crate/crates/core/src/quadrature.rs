//! Globally adaptive Gauss-Kronrod (7/15) quadrature with bisection of the worst panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_INTERVALS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self { rel_tol: T::lit(DEFAULT_REL_TOL), max_intervals: DEFAULT_MAX_INTERVALS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: T,
    pub intervals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> Result<Panel<T>>
where
    F: FnMut(T) -> Result<T>,
{
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    Ok(Panel { a, b, value: kronrod * radius, error: ((kronrod - gauss) * radius).abs() })
}

/// Integrates `f` over `[a, b]` (either orientation) until the summed panel error
/// estimate is at most `rel_tol * |value|`.
pub fn integrate<T: Real, F>(mut f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if a == b {
        return Ok(Quadrature { value: T::zero(), error_estimate: T::zero(), intervals: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, T::one()) } else { (b, a, -T::one()) };

    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod(&mut f, lo, hi)?;
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    loop {
        // Floor at a few ulps of the integral so smooth integrands terminate.
        let floor = T::epsilon() * T::lit(50.0) * value.abs();
        if error <= opts.rel_tol * value.abs() || error <= floor {
            // Re-sum the panels so running-total drift never reaches the result.
            let value = heap.iter().map(|p| p.value).collect::<CompensatedSum<T>>().value();
            let error = heap.iter().map(|p| p.error).collect::<CompensatedSum<T>>().value();
            return Ok(Quadrature { value: sign * value, error_estimate: error, intervals: heap.len() });
        }
        let exhausted = |intervals| Error::Quadrature {
            estimate: (sign * value).as_f64(),
            error_estimate: error.as_f64(),
            intervals,
        };
        if heap.len() >= opts.max_intervals {
            return Err(exhausted(heap.len()));
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(exhausted(heap.len() + 1));
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        value = value - worst.value + left.value + right.value;
        error = (error - worst.error + left.error + right.error).max(T::zero());
        heap.push(left);
        heap.push(right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x: f64| Ok(x.powi(6) - 3.0 * x), 0.0, 2.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(q.value, 128.0 / 7.0 - 6.0, max_relative = 1e-14);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let fwd = integrate(|x: f64| Ok(1.0 / x), 1.0, 3.0, QuadOptions::default()).unwrap();
        let back = integrate(|x: f64| Ok(1.0 / x), 3.0, 1.0, QuadOptions::default()).unwrap();
        assert_relative_eq!(fwd.value, 3f64.ln(), max_relative = 1e-13);
        assert_eq!(fwd.value, -back.value);
    }

    #[test]
    fn oscillatory_integrand_subdivides() {
        let q = integrate(|x: f64| Ok((40.0 * x).sin().powi(2)), 0.0, 3.0, QuadOptions::default()).unwrap();
        let exact = 1.5 - (240.0f64).sin() / 160.0;
        assert_relative_eq!(q.value, exact, max_relative = 1e-10);
        assert!(q.intervals > 1);
        assert!(q.error_estimate <= 1e-10 * q.value.abs());
    }

    #[test]
    fn budget_exhaustion_reports_partial_estimate() {
        let opts = QuadOptions { rel_tol: 1e-14, max_intervals: 3 };
        let err = integrate(|x: f64| Ok(x.abs().sqrt()), -1.0, 2.0, opts).unwrap_err();
        match err {
            Error::Quadrature { estimate, intervals, .. } => {
                assert_eq!(intervals, 3);
                assert!((estimate - (2.0 / 3.0) * (1.0 + 2f64.powf(1.5))).abs() < 1e-2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(|_x: f64| Err(Error::Geometry("boom".into())), 0.0, 1.0, QuadOptions::default());
        assert!(matches!(r, Err(Error::Geometry(_))));
    }
}
