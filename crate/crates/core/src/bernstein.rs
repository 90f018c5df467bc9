//! Subordinators represented through their Laplace exponents, Levy tails and
//! integrated tails, plus the generalized Caputo convolution kernel.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::special;

/// Catalog of driftless subordinator models.
///
/// `IdentityDegenerate` (Psi(lambda) = lambda) is a test-only model: it
/// violates the driftless/infinite-activity assumptions, has no Levy
/// measure, and reduces every time change to the identity. Operations that
/// need the Levy tail reject it explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubordinatorModel {
    Stable { alpha: f64 },
    TemperedStable { alpha: f64, tempering: f64 },
    Gamma { shape: f64, rate: f64 },
    IdentityDegenerate,
}

impl SubordinatorModel {
    pub fn stable(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "stable index must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(SubordinatorModel::Stable { alpha })
    }

    pub fn tempered_stable(alpha: f64, tempering: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "stable index must lie in (0, 1), got {alpha}"
            )));
        }
        if !(tempering > 0.0) {
            return Err(Error::domain(format!(
                "tempering must be positive, got {tempering}"
            )));
        }
        Ok(SubordinatorModel::TemperedStable { alpha, tempering })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) {
            return Err(Error::domain(format!(
                "gamma subordinator needs shape > 0 and rate > 0, got ({shape}, {rate})"
            )));
        }
        Ok(SubordinatorModel::Gamma { shape, rate })
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, SubordinatorModel::IdentityDegenerate)
    }

    /// Laplace exponent Psi(lambda) on the closed right half-plane
    /// (principal branches).
    pub fn laplace_exponent(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.re < 0.0 {
            return Err(Error::domain(
                "Laplace exponent is defined for Re(lambda) >= 0",
            ));
        }
        Ok(match *self {
            SubordinatorModel::Stable { alpha } => {
                if lambda.norm() == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    lambda.powf(alpha)
                }
            }
            SubordinatorModel::TemperedStable { alpha, tempering } => {
                (lambda + tempering).powf(alpha) - tempering.powf(alpha)
            }
            SubordinatorModel::Gamma { shape, rate } => ((lambda / rate) + 1.0).ln() * shape,
            SubordinatorModel::IdentityDegenerate => lambda,
        })
    }

    /// Psi on the positive reals (real-valued fast path).
    pub fn psi(&self, lambda: f64) -> Result<f64> {
        Ok(self
            .laplace_exponent(Complex64::new(lambda, 0.0))?
            .re)
    }

    /// Closed-form Psi'(lambda) on (0, inf); used for monotonicity asserts.
    pub fn psi_prime(&self, lambda: f64) -> Result<f64> {
        if lambda <= 0.0 {
            return Err(Error::domain("Psi' is evaluated on lambda > 0"));
        }
        Ok(match *self {
            SubordinatorModel::Stable { alpha } => alpha * lambda.powf(alpha - 1.0),
            SubordinatorModel::TemperedStable { alpha, tempering } => {
                alpha * (lambda + tempering).powf(alpha - 1.0)
            }
            SubordinatorModel::Gamma { shape, rate } => shape / (rate + lambda),
            SubordinatorModel::IdentityDegenerate => 1.0,
        })
    }

    /// Density of the Levy measure on (0, inf).
    fn levy_density(&self, x: f64) -> Result<f64> {
        match *self {
            SubordinatorModel::Stable { alpha } => {
                Ok(alpha / special::gamma(1.0 - alpha) * x.powf(-1.0 - alpha))
            }
            SubordinatorModel::TemperedStable { alpha, tempering } => {
                Ok(alpha / special::gamma(1.0 - alpha) * x.powf(-1.0 - alpha) * (-tempering * x).exp())
            }
            SubordinatorModel::Gamma { shape, rate } => Ok(shape / x * (-rate * x).exp()),
            SubordinatorModel::IdentityDegenerate => Err(Error::UnsupportedModel(
                "the identity model has no Levy measure".into(),
            )),
        }
    }

    /// Levy tail nu_inf(t) = nu(t, inf) for t > 0.
    pub fn levy_tail(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::domain("Levy tail needs t > 0"));
        }
        match *self {
            SubordinatorModel::Stable { alpha } => {
                Ok(t.powf(-alpha) / special::gamma(1.0 - alpha))
            }
            SubordinatorModel::TemperedStable { tempering, .. } => {
                let scale = t.max(1.0 / tempering);
                let q = quad::integrate_to_inf(
                    |x| self.levy_density(x).unwrap_or(0.0),
                    t,
                    scale,
                    Tolerance::default(),
                )?;
                Ok(q.value)
            }
            SubordinatorModel::Gamma { rate, .. } => {
                let scale = t.max(1.0 / rate);
                let q = quad::integrate_to_inf(
                    |x| self.levy_density(x).unwrap_or(0.0),
                    t,
                    scale,
                    Tolerance::default(),
                )?;
                Ok(q.value)
            }
            SubordinatorModel::IdentityDegenerate => Err(Error::UnsupportedModel(
                "Levy tail is undefined for the identity model".into(),
            )),
        }
    }

    /// Integrated tail I(x) = int_0^x nu_inf(y) dy, computed through the
    /// Fubini split I(x) = int_0^x z nu(dz) + x nu_inf(x) so the kernel
    /// singularity never meets the quadrature directly.
    pub fn integrated_tail(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Err(Error::domain("integrated tail needs x > 0"));
        }
        match *self {
            SubordinatorModel::Stable { alpha } => {
                Ok(x.powf(1.0 - alpha) / ((1.0 - alpha) * special::gamma(1.0 - alpha)))
            }
            SubordinatorModel::TemperedStable { alpha, tempering } => {
                // z nu(z) = alpha/Gamma(1-alpha) z^{-alpha} e^{-m z};
                // z = u^{1/(1-alpha)} flattens the power.
                let c = alpha / special::gamma(1.0 - alpha);
                let upper = x.powf(1.0 - alpha);
                let first = quad::integrate(
                    |u| {
                        let z = u.powf(1.0 / (1.0 - alpha));
                        (-tempering * z).exp()
                    },
                    0.0,
                    upper,
                    Tolerance::default(),
                )?
                .value
                    * c
                    / (1.0 - alpha);
                Ok(first + x * self.levy_tail(x)?)
            }
            SubordinatorModel::Gamma { shape, rate } => {
                let first = shape / rate * (1.0 - (-rate * x).exp());
                Ok(first + x * self.levy_tail(x)?)
            }
            SubordinatorModel::IdentityDegenerate => Err(Error::UnsupportedModel(
                "integrated tail is undefined for the identity model".into(),
            )),
        }
    }

    /// Laplace transform of the Caputo kernel: L[nu_inf](lambda) = Psi(lambda)/lambda,
    /// defined strictly inside the right half-plane.
    pub fn caputo_kernel_transform(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.re <= 0.0 {
            return Err(Error::domain(
                "Caputo kernel transform needs Re(lambda) > 0",
            ));
        }
        Ok(self.laplace_exponent(lambda)? / lambda)
    }

    /// Small-t exponent p with nu_inf(t) = O(t^{-p}); drives substitution
    /// choices in callers.
    pub(crate) fn tail_singularity_exponent(&self) -> f64 {
        match *self {
            SubordinatorModel::Stable { alpha } | SubordinatorModel::TemperedStable { alpha, .. } => {
                alpha
            }
            // log singularity: any positive exponent regularizes it
            SubordinatorModel::Gamma { .. } => 0.5,
            SubordinatorModel::IdentityDegenerate => 0.0,
        }
    }
}

impl fmt::Display for SubordinatorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SubordinatorModel::Stable { alpha } => write!(f, "stable:{alpha}"),
            SubordinatorModel::TemperedStable { alpha, tempering } => {
                write!(f, "tempered:{alpha}:{tempering}")
            }
            SubordinatorModel::Gamma { shape, rate } => write!(f, "gamma:{shape}:{rate}"),
            SubordinatorModel::IdentityDegenerate => write!(f, "identity"),
        }
    }
}

impl FromStr for SubordinatorModel {
    type Err = Error;

    /// Parses the CLI/config model strings: `stable:0.7`,
    /// `tempered:0.7:1.5`, `gamma:1.0:1.0`, `identity`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| -> Result<f64> {
            p.parse::<f64>()
                .map_err(|_| Error::domain(format!("cannot parse '{p}' as a number in model spec '{s}'")))
        };
        match parts.as_slice() {
            ["identity"] => Ok(SubordinatorModel::IdentityDegenerate),
            ["stable", a] => SubordinatorModel::stable(num(a)?),
            ["tempered", a, m] => SubordinatorModel::tempered_stable(num(a)?, num(m)?),
            ["gamma", a, b] => SubordinatorModel::gamma(num(a)?, num(b)?),
            _ => Err(Error::domain(format!(
                "unknown model spec '{s}' (expected stable:a | tempered:a:m | gamma:a:b | identity)"
            ))),
        }
    }
}

/// Conjugate pair Psi*(lambda) = lambda / Psi(lambda).
#[derive(Clone, Copy, Debug)]
pub struct ConjugateModel {
    base: SubordinatorModel,
}

impl ConjugateModel {
    pub fn new(base: SubordinatorModel) -> Self {
        ConjugateModel { base }
    }

    pub fn base(&self) -> SubordinatorModel {
        self.base
    }

    pub fn psi_star(&self, lambda: Complex64) -> Result<Complex64> {
        if lambda.re < 0.0 {
            return Err(Error::domain("conjugate exponent needs Re(lambda) >= 0"));
        }
        if lambda.norm() == 0.0 {
            // limit at the origin
            return Ok(match self.base {
                SubordinatorModel::Stable { .. } => Complex64::new(0.0, 0.0),
                SubordinatorModel::TemperedStable { alpha, tempering } => {
                    Complex64::new(1.0 / (alpha * tempering.powf(alpha - 1.0)), 0.0)
                }
                SubordinatorModel::Gamma { shape, rate } => Complex64::new(rate / shape, 0.0),
                SubordinatorModel::IdentityDegenerate => Complex64::new(1.0, 0.0),
            });
        }
        Ok(lambda / self.base.laplace_exponent(lambda)?)
    }

    /// Levy tail of the conjugate exponent where the base is special with a
    /// known transform: for Stable(alpha) the conjugate is Stable(1-alpha).
    pub fn conjugate_levy_tail(&self, t: f64) -> Option<f64> {
        match self.base {
            SubordinatorModel::Stable { alpha } => {
                Some(t.powf(alpha - 1.0) / special::gamma(alpha))
            }
            _ => None,
        }
    }
}

/// Output of the generalized Caputo derivative on a uniform grid.
#[derive(Clone, Debug)]
pub struct CaputoDerivative {
    /// d/dt of the kernel convolution at each grid node.
    pub values: Vec<f64>,
    /// The convolution int_0^t nu_inf(t - tau)(v(tau) - v(0)) dtau itself.
    pub convolution: Vec<f64>,
    /// Average kernel mass over the first cell, I(dt)/dt.
    pub kernel_steepness: f64,
    /// Set when the kernel is too steep for the grid resolution.
    pub steep_kernel: bool,
    /// First-order accuracy: the discretization error is O(dt).
    pub dt: f64,
}

/// Steepness guard default for [`generalized_caputo`].
pub const DEFAULT_STEEPNESS_THRESHOLD: f64 = 1e3;

/// Generalized Caputo derivative of samples `v` on the uniform grid
/// {0, dt, ..., (n-1) dt}.
///
/// The convolution integrates nu_inf exactly over every subinterval via the
/// integrated tail (product integration), with the trapezoid average of v on
/// each cell; the time derivative uses centered differences inside and
/// one-sided differences at the ends. Under the identity model the operator
/// degenerates to the classical first derivative of v.
pub fn generalized_caputo(
    model: &SubordinatorModel,
    v: &[f64],
    dt: f64,
    steepness_threshold: f64,
) -> Result<CaputoDerivative> {
    let n = v.len();
    if dt <= 0.0 {
        return Err(Error::domain("Caputo grid step must be positive"));
    }
    if n < 3 {
        return Err(Error::GridTooCoarse(format!(
            "need at least 3 samples so that dt < T, got {n}"
        )));
    }

    if model.is_identity() {
        // Psi(lambda)/lambda = 1: the kernel is a Dirac mass and the
        // operator is d/dt.
        let mut d = vec![0.0; n];
        d[0] = (v[1] - v[0]) / dt;
        for k in 1..n - 1 {
            d[k] = (v[k + 1] - v[k - 1]) / (2.0 * dt);
        }
        d[n - 1] = (v[n - 1] - v[n - 2]) / dt;
        let mut conv = vec![0.0; n];
        for k in 0..n {
            conv[k] = v[k] - v[0];
        }
        return Ok(CaputoDerivative {
            values: d,
            convolution: conv,
            kernel_steepness: f64::INFINITY,
            steep_kernel: false,
            dt,
        });
    }

    // I(m dt) table; cell mass over [t_k - t_{j+1}, t_k - t_j] is the
    // difference of two table entries.
    let mut itail = vec![0.0; n];
    for (m, slot) in itail.iter_mut().enumerate().skip(1) {
        *slot = model.integrated_tail(m as f64 * dt)?;
    }
    let steepness = itail[1] / dt;
    let steep = steepness > steepness_threshold;

    let mut conv = vec![0.0; n];
    for k in 1..n {
        let mut acc = 0.0;
        for j in 0..k {
            let cell_avg = 0.5 * (v[j] + v[j + 1]) - v[0];
            let mass = itail[k - j] - itail[k - j - 1];
            acc += cell_avg * mass;
        }
        conv[k] = acc;
    }

    let mut d = vec![0.0; n];
    d[0] = (conv[1] - conv[0]) / dt;
    for k in 1..n - 1 {
        d[k] = (conv[k + 1] - conv[k - 1]) / (2.0 * dt);
    }
    d[n - 1] = (conv[n - 1] - conv[n - 2]) / dt;

    Ok(CaputoDerivative {
        values: d,
        convolution: conv,
        kernel_steepness: steepness,
        steep_kernel: steep,
        dt,
    })
}
