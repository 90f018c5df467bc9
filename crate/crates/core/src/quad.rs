//! Adaptive Gauss-Kronrod quadrature shared by every module.
//!
//! The backbone is a 15-point Kronrod rule with embedded 7-point Gauss
//! estimate per panel and a global worst-panel-first refinement queue.
//! Endpoint power singularities are removed by the callers via explicit
//! substitutions before the integrand reaches this module.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae (positive half, QUADPACK values).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// Embedded 7-point Gauss weights (nodes are XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Scalar types the quadrature kernel can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Absolute/relative tolerance pair. Defaults match the module contracts:
/// absolute 1e-10, relative 1e-8.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }
}

/// Quadrature outcome: value plus an error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Quad<T> {
    pub value: T,
    pub abs_error: f64,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = f_center.scale(WGK[7]);
    let mut gauss = f_center.scale(WG[3]);
    let mut resabs = f_center.norm() * WGK[7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let sum = f1.add(f2);
        kronrod = kronrod.add(sum.scale(WGK[j]));
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss = gauss.add(sum.scale(WG[j / 2]));
        }
    }

    let value = kronrod.scale(half);
    let raw_err = kronrod.sub(gauss).norm() * half.abs();
    // QUADPACK-style rescaling: sharpen the raw |K15-G7| difference.
    let resabs = resabs * half.abs();
    let error = if resabs > 0.0 && raw_err > 0.0 {
        let scaled = (200.0 * raw_err / resabs).powf(1.5);
        if scaled < 1.0 {
            resabs * scaled
        } else {
            raw_err
        }
    } else {
        raw_err
    };
    let min_err = 50.0 * f64::EPSILON * resabs;
    let error = if error.is_finite() && value.norm().is_finite() {
        error.max(min_err)
    } else {
        // overflow or NaN in the integrand: force this panel to the top of
        // the refinement queue
        f64::INFINITY
    };
    Panel { a, b, value, error }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Quad<T>> {
    if a == b {
        return Ok(Quad {
            value: T::zero(),
            abs_error: 0.0,
        });
    }
    const MAX_PANELS: usize = 4000;

    let mut heap = BinaryHeap::new();
    let first = gk15(&mut f, a, b);
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);

    while total_err > tol.bound(total.norm()) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                estimate: total_err,
                tolerance: tol.bound(total.norm()),
            });
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel at floating-point resolution with its error still above
            // tolerance: the integrand is effectively singular here.
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (panel at float resolution)",
                estimate: total_err,
                tolerance: tol.bound(total.norm()),
            });
        }
        total = total.sub(worst.value);
        total_err -= worst.error;
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        total = total.add(left.value).add(right.value);
        total_err += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }

    // Recompute the sums from the panels to shed accumulated cancellation.
    let mut value = T::zero();
    let mut err = 0.0;
    for p in heap.iter() {
        value = value.add(p.value);
        err += p.error;
    }
    Ok(Quad {
        value,
        abs_error: err,
    })
}

/// Adaptive integration of `f` over `[a, +inf)` through the rational map
/// `x = a + scale * u / (1 - u)`, `u` in `[0, 1)`.
///
/// `scale` should match the decay length of `f`; exponential or algebraic
/// (order > 1) decay both transform to integrable behavior at `u = 1`.
pub fn integrate_to_inf<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<Quad<T>> {
    assert!(scale > 0.0, "scale must be positive");
    integrate(
        |u| {
            let om = 1.0 - u;
            if om <= 1e-300 {
                return T::zero();
            }
            let x = a + scale * u / om;
            let jac = scale / (om * om);
            if !x.is_finite() || !jac.is_finite() {
                return T::zero();
            }
            f(x).scale(jac)
        },
        0.0,
        1.0,
        tol,
    )
}

/// Fixed-order composite Gauss-Legendre rule (10-point); used where a
/// predictable node layout matters more than adaptivity.
pub fn gauss_legendre_10(a: f64, b: f64) -> [(f64, f64); 10] {
    // 10-point Gauss-Legendre nodes/weights on [-1, 1].
    const X: [f64; 5] = [
        0.148_874_338_981_631_210_88,
        0.433_395_394_129_247_190_80,
        0.679_409_568_299_024_406_23,
        0.865_063_366_688_984_510_73,
        0.973_906_528_517_171_720_08,
    ];
    const W: [f64; 5] = [
        0.295_524_224_714_752_870_17,
        0.269_266_719_309_996_355_09,
        0.219_086_362_515_982_043_99,
        0.149_451_349_150_580_593_15,
        0.066_671_344_308_688_137_59,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 10];
    for i in 0..5 {
        out[2 * i] = (c - h * X[i], W[i] * h);
        out[2 * i + 1] = (c + h * X[i], W[i] * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, Tolerance::default()).unwrap();
        // antiderivative x^4/4 - x^2 + x
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert_relative_eq!(q.value, exact, max_relative = 1e-13);
    }

    #[test]
    fn integrable_power_singularity() {
        // int_0^1 x^{-1/2} dx = 2 (slow without substitution, but must converge)
        let q = integrate(
            |x| if x > 0.0 { x.powf(-0.5) } else { 0.0 },
            0.0,
            1.0,
            Tolerance::new(1e-9, 1e-8),
        )
        .unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-7);
    }

    #[test]
    fn exponential_tail() {
        let q = integrate_to_inf(|x| (-x).exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn complex_integrand() {
        // int_0^inf e^{-(1+i)t} dt = 1/(1+i)
        let lam = Complex64::new(1.0, 1.0);
        let q = integrate_to_inf(
            |t| (-lam * t).exp(),
            0.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap();
        let exact = Complex64::new(1.0, 0.0) / lam;
        assert!((q.value - exact).norm() < 1e-10);
    }

    #[test]
    fn nonconvergent_integral_errors() {
        // 1/x on (0,1] diverges; the panel budget must trip.
        let r = integrate(
            |x| if x > 0.0 { 1.0 / x } else { 0.0 },
            0.0,
            1.0,
            Tolerance::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn gauss_legendre_panel_is_exact_for_cubics() {
        let nodes = gauss_legendre_10(0.0, 2.0);
        let s: f64 = nodes.iter().map(|&(x, w)| w * (x * x * x + 1.0)).sum();
        assert_relative_eq!(s, 4.0 + 2.0, max_relative = 1e-14);
    }
}
