//! L-functions of Fourier–Taylor series: the Dirichlet series `L_ν`, the
//! completed `Λ(f, s)` by incomplete-gamma series, and functional-equation
//! residuals.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::QExpansion;
use crate::ft::FloatSeries;
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::special::{gamma, lower_gamma, upper_gamma};

pub const DEFAULT_TRUNCATION: usize = 2000;
/// Tail bounds above this flag a Dirichlet value as unconverged.
pub const TAIL_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `i^ν` exactly.
pub fn i_pow(nu: i64) -> Complex64 {
    match nu.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug)]
pub struct LFunctionJob {
    pub f: FloatSeries,
    /// `f|_k S_w`; without it only the direct Mellin evaluation is available.
    pub f_hat: Option<FloatSeries>,
    pub weight: i64,
    pub width: f64,
    pub truncation: usize,
    /// The cusp integral is split at `split / √w`; any positive value gives the same `Λ`.
    pub split: f64,
}

impl LFunctionJob {
    pub fn new(f: FloatSeries, f_hat: Option<FloatSeries>, weight: i64, width: f64) -> Result<Self> {
        if weight % 2 != 0 {
            return Err(Error::input(format!("weight must be even, got {weight}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::input(format!("width must be positive, got {width}")));
        }
        for series in std::iter::once(&f).chain(f_hat.as_ref()) {
            if series.n_min() < 1 {
                return Err(Error::input("series must start at n >= 1"));
            }
        }
        Ok(LFunctionJob { f, f_hat, weight, width, truncation: DEFAULT_TRUNCATION, split: 1.0 })
    }

    pub fn from_forms(f: &QExpansion, f_hat: &QExpansion, width: f64) -> Result<Self> {
        if f.weight != f_hat.weight {
            return Err(Error::input("f and its dual must share a weight"));
        }
        Self::new(f.to_series()?.to_complex(), Some(f_hat.to_series()?.to_complex()), f.weight, width)
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = n.max(1);
        self
    }

    pub fn with_split(mut self, split: f64) -> Result<Self> {
        if !(split > 0.0 && split.is_finite()) {
            return Err(Error::input(format!("split must be positive, got {split}")));
        }
        self.split = split;
        Ok(self)
    }

    /// The job for `f̂`, whose dual is `f` again.
    pub fn hat(&self) -> Result<Self> {
        let f_hat = self.f_hat.clone().ok_or_else(|| Error::Precondition("job has no dual series".into()))?;
        Ok(LFunctionJob { f: f_hat, f_hat: Some(self.f.clone()), ..self.clone() })
    }

    fn cusp_start(&self) -> f64 {
        self.split / self.width.sqrt()
    }

    /// Start of the dual half after `x ↦ 1/(wx)`.
    fn dual_start(&self) -> f64 {
        1.0 / (self.width * self.cusp_start())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    IncompleteGamma,
    Quadrature,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CompletedValue {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub s: Complex64,
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub value: Complex64,
    pub tail_bound: f64,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirichletValue {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
    pub converged: bool,
}

/// `C` and `α` with `|a_{n,ν}| ≤ C n^α` on the stored range, `α = k/2` when a
/// weight is tagged.
fn growth_model(f: &FloatSeries) -> (f64, f64) {
    let alpha = f.weight().map_or(0.0, |k| k as f64 / 2.0);
    let scale = f
        .frequencies()
        .map(|n| f.row(n).iter().map(|a| a.norm()).fold(0.0, f64::max) / (n as f64).powf(alpha))
        .fold(0.0, f64::max);
    (scale, alpha)
}

/// `L_ν(f, s) = Σ_{n ≤ N} a_{n,ν} n^{-s}`, with the tail bounded by the growth
/// model.
pub fn dirichlet_l(f: &FloatSeries, nu: usize, s: Complex64, truncation: usize) -> DirichletValue {
    if nu > f.order() {
        return DirichletValue { value: ZERO, tail_bound: 0.0, terms: 0, converged: true };
    }
    let last = f.n_max().min(truncation as i64);
    let mut value = ZERO;
    for n in f.n_min().max(1)..=last {
        let a = f.coeff(n, nu);
        if a != ZERO {
            value += a * (-s * (n as f64).ln()).exp();
        }
    }
    let (scale, alpha) = growth_model(f);
    let excess = s.re - alpha - 1.0;
    let tail_bound = if scale == 0.0 {
        0.0
    } else if excess > 0.0 {
        scale * (last.max(1) as f64).powf(-excess) / excess
    } else {
        f64::INFINITY
    };
    DirichletValue { value, tail_bound, terms: last.max(0) as usize, converged: tail_bound <= TAIL_TOLERANCE }
}

/// Upper bound for `|Γ(a + iτ, x)| ≤ Γ(a, x)`.
fn upper_gamma_bound(a: f64, x: f64) -> f64 {
    let lead = ((a - 1.0) * x.ln() - x).exp();
    if a <= 1.0 {
        lead
    } else if x > a - 1.0 {
        lead * x / (x - (a - 1.0))
    } else {
        f64::INFINITY
    }
}

/// `Σ_{n,ν} a_{n,ν} i^ν (2πn)^{-(s+ν)} Γ(s+ν, 2πn x_0)` summed in ascending
/// `n` until the model bound on the remaining terms is negligible.
fn cusp_half(f: &FloatSeries, s: Complex64, start: f64, truncation: usize) -> Result<(Complex64, f64)> {
    let (scale, alpha) = growth_model(f);
    if scale == 0.0 {
        return Ok((ZERO, 0.0));
    }
    let bound = |n: i64| -> f64 {
        let x = 2.0 * PI * n as f64 * start;
        let n_pow = (n as f64).powf(alpha);
        (0..=f.order())
            .map(|nu| {
                let a = s.re + nu as f64;
                scale * n_pow * (2.0 * PI * n as f64).powf(-a) * upper_gamma_bound(a, x)
            })
            .sum()
    };
    let last = f.n_max().min(truncation as i64);
    let mut value = ZERO;
    let mut stop = last;
    for n in f.n_min()..=last {
        let x = 2.0 * PI * n as f64 * start;
        for nu in 0..=f.order() {
            let a = f.coeff(n, nu);
            if a == ZERO {
                continue;
            }
            let exponent = s + nu as f64;
            let power = (-exponent * (2.0 * PI * n as f64).ln()).exp();
            value += a * i_pow(nu as i64) * power * upper_gamma(exponent, x)?;
        }
        let b = bound(n + 1);
        if b.is_finite() && b <= 1e-18 * value.norm() {
            stop = n;
            break;
        }
    }
    // Bound the terms past `stop` by the model; successive bounds shrink by
    // about e^{-2π x_0}, so the loop ends once they are negligible.
    let mut tail = 0.0;
    for n in stop + 1.. {
        let b = bound(n);
        if !b.is_finite() {
            if n > stop + 100_000 {
                return Ok((value, f64::INFINITY));
            }
            continue;
        }
        tail += b;
        if b <= 1e-20 * tail || b == 0.0 {
            let ratio = (-2.0 * PI * start).exp();
            tail += b * ratio / (1.0 - ratio);
            break;
        }
        if n > stop + 100_000 {
            return Ok((value, f64::INFINITY));
        }
    }
    Ok((value, tail))
}

/// `Λ(f, s) = F(s) + i^k w^{k/2-s} F̂(k-s)` when the dual is known, otherwise
/// the direct Mellin series `Σ a_{n,ν} i^ν (2πn)^{-(s+ν)} (Γ(s+ν, X_n) + γ(s+ν, X_n))`.
pub fn completed_lambda(job: &LFunctionJob, s: Complex64) -> Result<CompletedValue> {
    let start = job.cusp_start();
    let Some(f_hat) = &job.f_hat else {
        return direct_mellin(job, s);
    };
    let (upper, tail_f) = cusp_half(&job.f, s, start, job.truncation)?;
    let dual_s = Complex64::new(job.weight as f64, 0.0) - s;
    let (lower, tail_hat) = cusp_half(f_hat, dual_s, job.dual_start(), job.truncation)?;
    let factor = i_pow(job.weight) * (Complex64::new(job.weight as f64 / 2.0, 0.0) - s).expf(job.width);
    Ok(CompletedValue {
        s,
        value: upper + factor * lower,
        tail_bound: tail_f + factor.norm() * tail_hat,
        method: Method::IncompleteGamma,
    })
}

fn direct_mellin(job: &LFunctionJob, s: Complex64) -> Result<CompletedValue> {
    let start = job.cusp_start();
    let f = &job.f;
    let mut value = ZERO;
    let last = f.n_max().min(job.truncation as i64);
    for n in f.n_min()..=last {
        let x = 2.0 * PI * n as f64 * start;
        for nu in 0..=f.order() {
            let a = f.coeff(n, nu);
            if a == ZERO {
                continue;
            }
            let exponent = s + nu as f64;
            let full = upper_gamma(exponent, x)? + lower_gamma(exponent, x)?;
            value += a * i_pow(nu as i64) * (-exponent * (2.0 * PI * n as f64).ln()).exp() * full;
        }
    }
    let tail_bound = (0..=f.order())
        .map(|nu| {
            let exponent = s + nu as f64;
            let factor = gamma(exponent).map_or(f64::INFINITY, |g| g.norm()) * (2.0 * PI).powf(-exponent.re);
            factor * dirichlet_l(f, nu, exponent, job.truncation).tail_bound
        })
        .sum();
    Ok(CompletedValue { s, value, tail_bound, method: Method::IncompleteGamma })
}

/// `∫_0^∞ f(iy) y^{s-1} dy` by adaptive quadrature of the truncated series;
/// accurate where the Dirichlet series converges absolutely.
pub fn completed_lambda_quadrature(job: &LFunctionJob, s: Complex64, rel_tol: f64) -> Result<CompletedValue> {
    let f = &job.f;
    let last = f.n_max().min(job.truncation as i64);
    let integrand = |y: f64| -> Complex64 {
        if y == 0.0 {
            return ZERO;
        }
        let z = Complex64::new(0.0, y);
        let mut acc = ZERO;
        let q = (-2.0 * PI * y).exp();
        let mut q_n = q.powi(f.n_min() as i32);
        for n in f.n_min()..=last {
            let mut poly = ZERO;
            let mut z_pow = Complex64::new(1.0, 0.0);
            for a in f.row(n) {
                poly += a * z_pow;
                z_pow *= z;
            }
            acc += poly * q_n;
            q_n *= q;
        }
        acc * (s - 1.0).expf(y)
    };
    let q = integrate_to_infinity(&integrand, 0.0, Tolerance::new(1e-300, rel_tol))?;
    Ok(CompletedValue { s, value: q.value, tail_bound: q.error, method: Method::Quadrature })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FeCheck {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub lhs: Complex64,
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub rhs: Complex64,
    pub residual: f64,
    pub relative: f64,
}

/// Both sides of `Λ(f, s) = i^k w^{k/2-s} Λ(f̂, k-s)`.
pub fn fe_check(job: &LFunctionJob, s: Complex64) -> Result<FeCheck> {
    let hat = job.hat()?;
    let lhs = completed_lambda(job, s)?.value;
    let dual_s = Complex64::new(job.weight as f64, 0.0) - s;
    let factor = i_pow(job.weight) * (Complex64::new(job.weight as f64 / 2.0, 0.0) - s).expf(job.width);
    let rhs = factor * completed_lambda(&hat, dual_s)?.value;
    let residual = (lhs - rhs).norm();
    let scale = lhs.norm().max(rhs.norm());
    Ok(FeCheck { lhs, rhs, residual, relative: if scale == 0.0 { 0.0 } else { residual / scale } })
}

pub fn fe_residual(job: &LFunctionJob, s: Complex64) -> Result<f64> {
    Ok(fe_check(job, s)?.residual)
}

/// `|Λ(f, s) - Σ_ν i^ν Γ(s+ν) (2π)^{-(s+ν)} L_ν(f, s+ν)|`; refused outside the
/// region where every `L_ν(f, s+ν)` converges absolutely.
pub fn lambda_nu_decomposition_residual(job: &LFunctionJob, s: Complex64) -> Result<f64> {
    let lambda = completed_lambda(job, s)?.value;
    let mut sum = ZERO;
    for nu in 0..=job.f.order() {
        let exponent = s + nu as f64;
        let l = dirichlet_l(&job.f, nu, exponent, job.truncation);
        if !l.converged {
            return Err(Error::Precondition(format!(
                "L_{nu} at {exponent} is outside the absolute-convergence region (tail bound {:e})",
                l.tail_bound
            )));
        }
        sum += i_pow(nu as i64) * gamma(exponent)? * (-exponent).expf(2.0 * PI) * l.value;
    }
    Ok((lambda - sum).norm())
}
