//! Convolution L-functions `(L_f # L_g)(s, t)` of two cusp forms, the
//! two-variable Mellin transform `Λ_{f,g}(s, t)` with its continuation in `t`,
//! and the one-variable `Λ_{f,g}(s)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::QExpansion;
use crate::ft::FloatSeries;
use crate::lfun::{completed_lambda, i_pow, LFunctionJob};
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::special::{factorial, gamma, lower_gamma_ibp, lower_gamma_ibp_regularized, rgamma, upper_gamma};

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_TRUNCATION: usize = 2000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const QUAD_TOL: Tolerance = Tolerance { abs: 1e-300, rel: 1e-12, max_intervals: 4000 };

/// A cusp form `Σ_{n≥1} a_n q^n` with its optional dual `f|_k S_w`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub coeffs: Vec<Complex64>,
    pub dual: Option<Vec<Complex64>>,
    pub weight: i64,
}

impl Expansion {
    pub fn new(coeffs: Vec<Complex64>, dual: Option<Vec<Complex64>>, weight: i64) -> Self {
        Expansion { coeffs, dual, weight }
    }

    pub fn from_forms(f: &QExpansion, dual: Option<&QExpansion>) -> Result<Self> {
        for form in std::iter::once(f).chain(dual) {
            if !form.is_cusp_form() {
                return Err(Error::input(format!("{} is not a cusp form", form.label)));
            }
            if form.weight != f.weight {
                return Err(Error::input("a form and its dual must share a weight"));
            }
        }
        Ok(Expansion::new(f.coeffs_c64(), dual.map(QExpansion::coeffs_c64), f.weight))
    }

    fn hat(&self) -> Result<Expansion> {
        let dual = self.dual.clone().ok_or_else(|| Error::Precondition("dual series required".into()))?;
        Ok(Expansion { coeffs: dual, dual: Some(self.coeffs.clone()), weight: self.weight })
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == ZERO)
    }

    fn scaled(&self, c: Complex64) -> Expansion {
        Expansion {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            dual: self.dual.as_ref().map(|d| d.iter().map(|a| a * c).collect()),
            weight: self.weight,
        }
    }

    /// `C` with `|a_n| ≤ C n^{k/2}` on the stored range.
    fn growth(&self) -> f64 {
        let alpha = self.weight as f64 / 2.0;
        self.coeffs.iter().enumerate().map(|(i, a)| a.norm() / ((i + 1) as f64).powf(alpha)).fold(0.0, f64::max)
    }

    fn to_series(&self, coeffs: &[Complex64]) -> Result<FloatSeries> {
        let values = if coeffs.is_empty() { vec![ZERO] } else { coeffs.to_vec() };
        Ok(FloatSeries::from_q_expansion(1, values)?.with_weight(self.weight))
    }

    fn lfunction(&self, width: f64) -> Result<LFunctionJob> {
        let dual = self.dual.as_ref().map(|d| self.to_series(d)).transpose()?;
        LFunctionJob::new(self.to_series(&self.coeffs)?, dual, self.weight, width)
    }
}

/// `Σ_n c_n e^{-2πny}`.
fn q_sum(coeffs: &[Complex64], y: f64) -> Complex64 {
    let q = (-2.0 * PI * y).exp();
    let mut q_n = q;
    let mut acc = ZERO;
    for a in coeffs {
        if q_n == 0.0 {
            break;
        }
        acc += a * q_n;
        q_n *= q;
    }
    acc
}

/// `f(ix)`, through the dual series below the cusp width when it is known.
fn imag_axis(e: &Expansion, width: f64, truncation: usize, x: f64) -> Complex64 {
    match &e.dual {
        Some(dual) if x < 1.0 / width.sqrt() => {
            let k = e.weight as i32;
            i_pow(e.weight) * width.powf(-(k as f64) / 2.0) * x.powi(-k) * q_sum(dual, 1.0 / (width * x))
        }
        _ => q_sum(&e.coeffs[..e.coeffs.len().min(truncation)], x),
    }
}

#[derive(Clone, Debug)]
pub struct ConvolutionJob {
    pub f: Expansion,
    pub g: Expansion,
    pub width: f64,
    pub truncation: usize,
    pub depth: usize,
}

impl ConvolutionJob {
    pub fn new(f: Expansion, g: Expansion, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::input(format!("width must be positive, got {width}")));
        }
        if f.weight % 2 != 0 || g.weight % 2 != 0 {
            return Err(Error::input("weights must be even"));
        }
        Ok(ConvolutionJob { f, g, width, truncation: DEFAULT_TRUNCATION, depth: DEFAULT_DEPTH })
    }

    pub fn from_forms(
        f: &QExpansion,
        f_hat: Option<&QExpansion>,
        g: &QExpansion,
        g_hat: Option<&QExpansion>,
        width: f64,
    ) -> Result<Self> {
        Self::new(Expansion::from_forms(f, f_hat)?, Expansion::from_forms(g, g_hat)?, width)
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = n.max(1);
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    /// The job for `(f̂, ĝ)`.
    pub fn hat(&self) -> Result<Self> {
        Ok(ConvolutionJob { f: self.f.hat()?, g: self.g.hat()?, ..self.clone() })
    }

    /// The job for `(g, f)`.
    pub fn swapped(&self) -> Self {
        ConvolutionJob { f: self.g.clone(), g: self.f.clone(), ..self.clone() }
    }

    pub fn scale_f(&self, c: Complex64) -> Self {
        ConvolutionJob { f: self.f.scaled(c), ..self.clone() }
    }

    fn cusp_start(&self) -> f64 {
        1.0 / self.width.sqrt()
    }

    fn a(&self) -> &[Complex64] {
        &self.f.coeffs[..self.f.coeffs.len().min(self.truncation)]
    }

    fn b(&self) -> &[Complex64] {
        &self.g.coeffs[..self.g.coeffs.len().min(self.truncation)]
    }

    fn f_imag(&self, x: f64) -> Complex64 {
        imag_axis(&self.f, self.width, self.truncation, x)
    }

    fn g_imag(&self, y: f64) -> Complex64 {
        imag_axis(&self.g, self.width, self.truncation, y)
    }

    /// `∫_0^{x_0} h` as `∫_{x_0}^∞ h(1/(wu)) du / (wu²)`; `x_0 = 1/√w` is fixed by
    /// the substitution.
    fn integrate_near_zero(&self, h: &dyn Fn(f64) -> Complex64, tol: Tolerance) -> Result<Complex64> {
        let w = self.width;
        let mapped = |u: f64| {
            let x = 1.0 / (w * u);
            let v = h(x);
            if v == ZERO {
                v
            } else {
                v / (w * u * u)
            }
        };
        Ok(integrate_to_infinity(&mapped, self.cusp_start(), tol)?.value)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesValue {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub value: Complex64,
    pub tail_bound: f64,
    pub converged: bool,
}

/// `Σ_{n ≤ N} n^{-s} Σ_{j<n} a_{n-j} b_j j^{-t}`, ascending in `n` then `j`.
pub fn conv_series(job: &ConvolutionJob, s: Complex64, t: Complex64, truncation: usize) -> SeriesValue {
    let (a, b) = (job.a(), job.b());
    let last = truncation.min(a.len() + b.len());
    let j_pow: Vec<Complex64> = (1..=b.len().min(last)).map(|j| (-t * (j as f64).ln()).exp()).collect();
    let mut value = ZERO;
    for n in 2..=last {
        let mut inner = ZERO;
        for j in 1..n {
            let (Some(bj), Some(an)) = (b.get(j - 1), a.get(n - j - 1)) else { continue };
            inner += an * bj * j_pow[j - 1];
        }
        value += inner * (-s * (n as f64).ln()).exp();
    }
    // |inner(n)| ≤ C_a C_b n^{α} Σ_{j<n} j^{β-τ} ≤ C_a C_b n^{α + max(β-τ,0) + 1}.
    let alpha = job.f.weight as f64 / 2.0;
    let beta = job.g.weight as f64 / 2.0;
    let scale = job.f.growth() * job.g.growth();
    let excess = s.re - alpha - (beta - t.re).max(0.0) - 2.0;
    let tail_bound = if scale == 0.0 {
        0.0
    } else if excess > 0.0 {
        scale * (last.max(1) as f64).powf(-excess) / excess
    } else {
        f64::INFINITY
    };
    SeriesValue { value, tail_bound, converged: tail_bound <= 1e-10 * value.norm().max(1e-300) }
}

/// `(2π)^{-(s+t)} Γ(s) Γ(t) (L_f # L_g)(s, t)` from the truncated double series.
pub fn lambda2_series(job: &ConvolutionJob, s: Complex64, t: Complex64) -> Result<SeriesValue> {
    let series = conv_series(job, s, t, job.truncation);
    let factor = (-(s + t)).expf(2.0 * PI) * gamma(s)? * gamma(t)?;
    Ok(SeriesValue { value: factor * series.value, tail_bound: factor.norm() * series.tail_bound, ..series })
}

/// Inner weights `∫_0^∞ e^{-2πmy} y^{t-1} dy`, split at `y_0 = 1/√w` into
/// `Γ(t, X_m) + γ(t, X_m)` with `γ` continued by integration by parts; divided
/// by `Γ(t)` when `regularized`.
fn inner_weights(job: &ConvolutionJob, t: Complex64, regularized: bool) -> Result<Vec<Complex64>> {
    let y0 = job.cusp_start();
    (1..=job.b().len())
        .map(|m| {
            let x = 2.0 * PI * m as f64 * y0;
            let scale = (-t).expf(2.0 * PI * m as f64);
            let split = if regularized {
                upper_gamma(t, x)? * rgamma(t) + lower_gamma_ibp_regularized(t, x, job.depth)?
            } else {
                upper_gamma(t, x)? + lower_gamma_ibp(t, x, job.depth)?
            };
            Ok(scale * split)
        })
        .collect()
}

/// `∫_0^∞ f(ix) Σ_m b_m e^{-2πmx} W_m x^{s-1} dx`: termwise incomplete gamma
/// above `x_0`, quadrature below.
fn split_mellin(job: &ConvolutionJob, s: Complex64, weights: &[Complex64]) -> Result<Complex64> {
    let (a, b) = (job.a(), job.b());
    let x0 = job.cusp_start();
    let mut upper = ZERO;
    for total in 2..=a.len() + b.len() {
        let mut inner = ZERO;
        for m in 1..total {
            let (Some(bm), Some(an)) = (b.get(m - 1), a.get(total - m - 1)) else { continue };
            inner += an * bm * weights[m - 1];
        }
        if inner == ZERO {
            continue;
        }
        let x = 2.0 * PI * total as f64;
        let term = inner * (-s).expf(x) * upper_gamma(s, x * x0)?;
        upper += term;
        if term.norm() < 1e-20 * upper.norm() && (x * x0) > s.norm() + 40.0 {
            break;
        }
    }
    check_coverage(job, s, weights)?;
    let h = |x: f64| -> Complex64 {
        let fx = job.f_imag(x);
        if fx == ZERO {
            return ZERO;
        }
        let q = (-2.0 * PI * x).exp();
        let mut q_m = q;
        let mut acc = ZERO;
        for (bm, wm) in b.iter().zip(weights) {
            acc += bm * wm * q_m;
            q_m *= q;
        }
        fx * acc * (s - 1.0).expf(x)
    };
    Ok(upper + job.integrate_near_zero(&h, QUAD_TOL)?)
}

/// The near-zero quadrature truncates `Σ_m b_m e^{-2πmx} W_m` at the stored
/// length; refuse when that truncation is visible where `f(ix)` is not negligible.
fn check_coverage(job: &ConvolutionJob, s: Complex64, weights: &[Complex64]) -> Result<()> {
    let len = weights.len();
    if len == 0 || job.f.is_zero() || job.f.dual.is_none() {
        return Ok(());
    }
    let k = job.f.weight as f64;
    // After x = 1/(wu) the integrand is ~ u^{k-σ-1} e^{-2πu} times the inner
    // sum, which grows at most like u^{l/2+1}; find where it drops below e^{-60}.
    let degree = (k - s.re - 1.0).max(0.0) + job.g.weight as f64 / 2.0 + 3.0;
    let mut u = job.cusp_start();
    while 2.0 * PI * u - degree * (job.width * u).max(1.0).ln() < 60.0 {
        u += 0.25;
    }
    let x_min = 1.0 / (job.width * u);
    let last = weights[len - 1].norm() * job.g.growth() * (len as f64).powf(job.g.weight as f64 / 2.0);
    let decay = (-2.0 * PI * len as f64 * x_min).exp();
    let head = weights[0].norm().max(1e-300) * job.g.coeffs[0].norm().max(job.g.growth());
    if last * decay / (1.0 - (-2.0 * PI * x_min).exp()) > 1e-14 * head {
        let needed = (60.0 / (2.0 * PI * x_min)).ceil() as usize;
        return Err(Error::numeric(format!(
            "g has {len} coefficients; about {needed} are needed for the near-zero integral"
        )));
    }
    Ok(())
}

fn pole_index(t: Complex64) -> Option<usize> {
    (t.im == 0.0 && t.re <= 0.0 && t.re.fract() == 0.0).then(|| (-t.re) as usize)
}

/// `Λ_{f,g}(s, t)`, continued to `Re t > -depth`; at `t = -j` the pole is
/// reported with residue `(-1)^j/j! · E(s, -j)`, `E = Λ/Γ(t)`.
pub fn lambda2(job: &ConvolutionJob, s: Complex64, t: Complex64) -> Result<Complex64> {
    if t.re <= -(job.depth as f64) {
        return Err(Error::Domain(format!("Re t = {} is outside the continuation depth {}", t.re, job.depth)));
    }
    if let Some(j) = pole_index(t) {
        let entire = split_mellin(job, s, &inner_weights(job, t, true)?)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let residue = entire * sign / factorial(j as u64);
        return Err(Error::Pole { at: format!("t = {}", t.re), residue_re: residue.re, residue_im: residue.im });
    }
    split_mellin(job, s, &inner_weights(job, t, false)?)
}

/// `(L_f # L_g)(s, t) = (2π)^{s+t} Λ_{f,g}(s, t) / (Γ(s) Γ(t))`, evaluated
/// without dividing by `Γ(t)` so it is finite at `t = 0, -1, …`.
pub fn conv_entire(job: &ConvolutionJob, s: Complex64, t: Complex64) -> Result<Complex64> {
    if t.re <= -(job.depth as f64) {
        return Err(Error::Domain(format!("Re t = {} is outside the continuation depth {}", t.re, job.depth)));
    }
    if job.f.is_zero() || job.g.is_zero() {
        return Ok(ZERO);
    }
    let entire = split_mellin(job, s, &inner_weights(job, t, true)?)?;
    Ok((s + t).expf(2.0 * PI) * rgamma(s) * entire)
}

/// `∫_0^∞ ∫_0^∞ f(ix) g(ix+iy) y^{t-1} x^{s-1} dy dx` by nested quadrature,
/// for `Re s, Re t > 0`.
pub fn lambda2_quadrature(job: &ConvolutionJob, s: Complex64, t: Complex64, rel_tol: f64) -> Result<Complex64> {
    if s.re <= 0.0 || t.re <= 0.0 {
        return Err(Error::Domain("the double integral converges for Re s, Re t > 0".into()));
    }
    let tol = Tolerance::new(1e-300, rel_tol);
    let inner = |x: f64| -> Result<Complex64> {
        let h = |y: f64| if y == 0.0 { ZERO } else { job.g_imag(x + y) * (t - 1.0).expf(y) };
        Ok(integrate_to_infinity(&h, 0.0, Tolerance::new(1e-300, rel_tol * 1e-2))?.value)
    };
    outer_integral(job, s, &inner, tol)
}

/// `∫_0^∞ f(ix) inner(x) x^{s-1} dx`, split at `x_0`.
fn outer_integral(
    job: &ConvolutionJob,
    s: Complex64,
    inner: &dyn Fn(f64) -> Result<Complex64>,
    tol: Tolerance,
) -> Result<Complex64> {
    let failure = std::cell::RefCell::new(None);
    let h = |x: f64| -> Complex64 {
        let fx = job.f_imag(x);
        if fx == ZERO || x == 0.0 {
            return ZERO;
        }
        match inner(x) {
            Ok(v) => fx * v * (s - 1.0).expf(x),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e.to_string());
                Complex64::new(f64::NAN, 0.0)
            }
        }
    };
    let above = integrate_to_infinity(&h, job.cusp_start(), tol);
    let below = job.integrate_near_zero(&h, tol);
    if let Some(msg) = failure.into_inner() {
        return Err(Error::numeric(msg));
    }
    Ok(above?.value + below?)
}

/// `M_g(σ) = ∫_0^∞ g(iy) y^{σ-1} dy` by quadrature.
fn g_mellin(job: &ConvolutionJob, sigma: f64) -> Result<Complex64> {
    let h = |y: f64| if y == 0.0 { ZERO } else { job.g_imag(y) * y.powf(sigma - 1.0) };
    let swapped = job.swapped();
    let above = integrate_to_infinity(&h, job.cusp_start(), QUAD_TOL)?.value;
    Ok(above + swapped.integrate_near_zero(&h, QUAD_TOL)?)
}

/// `Λ_{f,g}(s) = ∫_0^∞ f(ix) (∫_x^∞ + ∫_x^0) g(iy) (y-x)^{l-2} dy x^{s-1} dx`,
/// with the bracket written as `2∫_x^∞ - ∫_0^∞`: the first termwise, the
/// second as a polynomial in `x` with quadrature Mellin coefficients.
pub fn lambda_onevar(job: &ConvolutionJob, s: Complex64) -> Result<Complex64> {
    let l = job.g.weight;
    if l < 4 {
        return Err(Error::input(format!("the one-variable transform needs l >= 4, got {l}")));
    }
    if job.f.is_zero() || job.g.is_zero() {
        return Ok(ZERO);
    }
    let d = (l - 2) as usize;
    let fact = factorial(d as u64);
    let tail_weights: Vec<f64> = (1..=job.b().len()).map(|m| fact * (2.0 * PI * m as f64).powi(1 - l as i32)).collect();
    // ∫_0^∞ g(iy)(y-x)^{l-2} dy = Σ_j C(l-2, j) (-x)^j M_g(l-1-j)
    let poly: Vec<Complex64> = (0..=d)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            Ok(g_mellin(job, (l - 1 - j as i64) as f64)? * sign * crate::special::binomial(d as u64, j as u64))
        })
        .collect::<Result<_>>()?;
    let b = job.b();
    let inner = |x: f64| -> Result<Complex64> {
        let q = (-2.0 * PI * x).exp();
        let mut q_m = q;
        let mut above = ZERO;
        for (bm, wm) in b.iter().zip(&tail_weights) {
            above += bm * (wm * q_m);
            q_m *= q;
        }
        let full = poly.iter().rev().fold(ZERO, |acc, c| acc * x + c);
        Ok(above * 2.0 - full)
    };
    outer_integral(job, s, &inner, QUAD_TOL)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Check {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub lhs: Complex64,
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub rhs: Complex64,
    pub residual: f64,
    pub relative: f64,
}

impl Check {
    fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let residual = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        Check { lhs, rhs, residual, relative: if scale == 0.0 { 0.0 } else { residual / scale } }
    }
}

/// `L_f(σ)` through the completed L-function.
fn l_value(e: &Expansion, width: f64, sigma: Complex64) -> Result<Complex64> {
    let lambda = completed_lambda(&e.lfunction(width)?, sigma)?.value;
    Ok(lambda * sigma.expf(2.0 * PI) * rgamma(sigma))
}

/// Right side of the one-variable identity:
/// `2 (2π)^{-(s+l-1)} (l-2)! Γ(s) (L_f # L_g)(s, l-1)
///  - (l-2)! (2π)^{-(s+l-1)} Σ_{j=0}^{l-2} (-1)^j/j! Γ(s+j) L_f(s+j) L_g(l-1-j)`.
pub fn prop_identity_rhs(job: &ConvolutionJob, s: Complex64) -> Result<Complex64> {
    let l = job.g.weight;
    if l < 4 {
        return Err(Error::input(format!("the one-variable transform needs l >= 4, got {l}")));
    }
    if job.f.is_zero() || job.g.is_zero() {
        return Ok(ZERO);
    }
    let d = (l - 2) as u64;
    let fact = factorial(d);
    let prefactor = (-(s + (l - 1) as f64)).expf(2.0 * PI) * fact;
    let conv = conv_entire(job, s, Complex64::new((l - 1) as f64, 0.0))?;
    let mut sum = ZERO;
    for j in 0..=d {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let shifted = s + j as f64;
        let lf = l_value(&job.f, job.width, shifted)?;
        let lg = l_value(&job.g, job.width, Complex64::new((l - 1) as f64 - j as f64, 0.0))?;
        sum += gamma(shifted)? * lf * lg * sign / factorial(j);
    }
    Ok(prefactor * (gamma(s)? * conv * 2.0 - sum))
}

pub fn prop_identity_check(job: &ConvolutionJob, s: Complex64) -> Result<Check> {
    Ok(Check::new(lambda_onevar(job, s)?, prop_identity_rhs(job, s)?))
}

pub fn prop_identity_residual(job: &ConvolutionJob, s: Complex64) -> Result<f64> {
    Ok(prop_identity_check(job, s)?.residual)
}

/// `Λ_{f,g}(s) = -i^{k+l} w^{(k-l)/2-s+1} Λ_{f̂,ĝ}(k-l+2-s)`.
pub fn fe_onevar_check(job: &ConvolutionJob, s: Complex64) -> Result<Check> {
    let (k, l) = (job.f.weight, job.g.weight);
    let dual_s = Complex64::new((k - l + 2) as f64, 0.0) - s;
    let factor = -i_pow(k + l) * (Complex64::new((k - l) as f64 / 2.0 + 1.0, 0.0) - s).expf(job.width);
    let lhs = lambda_onevar(job, s)?;
    let rhs = factor * lambda_onevar(&job.hat()?, dual_s)?;
    Ok(Check::new(lhs, rhs))
}

pub fn fe_onevar_residual(job: &ConvolutionJob, s: Complex64) -> Result<f64> {
    Ok(fe_onevar_check(job, s)?.residual)
}
