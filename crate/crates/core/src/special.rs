//! Complex gamma and incomplete gamma functions for real positive `x`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 200_000;

fn lanczos_core(z: Complex64) -> Complex64 {
    // Γ(z + 1) for Re z >= -1/2.
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Distance from `z` to the nearest nonpositive integer, if the real part is
/// at most `1/2`.
fn pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

/// `Γ(z)`. Returns an error at the poles `0, -1, -2, ..`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if pole_distance(z) == 0.0 {
        return Err(Error::Pole { at: format!("{z}"), residue_re: f64::NAN, residue_im: 0.0 });
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        PI / ((PI * z).sin() * gamma_unchecked(1.0 - z))
    } else {
        lanczos_core(z - 1.0)
    }
}

pub fn gamma_real(x: f64) -> f64 {
    gamma_unchecked(Complex64::new(x, 0.0)).re
}

/// `1 / Γ(z)`, entire.
pub fn rgamma(z: Complex64) -> Complex64 {
    if pole_distance(z) == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * gamma_unchecked(1.0 - z) / PI
    } else {
        1.0 / lanczos_core(z - 1.0)
    }
}

/// `x^s e^{-x}` for real `x > 0`.
fn power_exp(s: Complex64, x: f64) -> Complex64 {
    (s * x.ln() - x).exp()
}

/// Lower incomplete gamma by its power series; accurate for `x` up to about
/// `|s| + 30`.
fn lower_series(s: Complex64, x: f64) -> Result<Complex64> {
    let mut term = 1.0 / s;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= x / (s + n as f64);
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            return Ok(sum * power_exp(s, x));
        }
    }
    Err(Error::numeric(format!("lower incomplete gamma series did not converge at s={s}, x={x}")))
}

/// Upper incomplete gamma by the Legendre continued fraction (modified Lentz).
fn upper_fraction(s: Complex64, x: f64) -> Result<Complex64> {
    let tiny = Complex64::new(TINY, 0.0);
    let mut b = x + 1.0 - s;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() <= EPS {
            return Ok(h * power_exp(s, x));
        }
    }
    Err(Error::numeric(format!("upper incomplete gamma fraction did not converge at s={s}, x={x}")))
}

fn use_fraction(s: Complex64, x: f64) -> bool {
    x >= 1f64.max(s.norm()) || pole_distance(s) < 0.3
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("incomplete gamma needs finite x > 0, got {x}")));
    }
    Ok(())
}

/// `Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt` for real `x > 0`, entire in `s`.
pub fn upper_gamma(s: Complex64, x: f64) -> Result<Complex64> {
    check_x(x)?;
    if use_fraction(s, x) {
        upper_fraction(s, x)
    } else {
        Ok(gamma_unchecked(s) - lower_series(s, x)?)
    }
}

/// `γ(s, x) = ∫_0^x t^{s-1} e^{-t} dt`, continued meromorphically in `s`.
pub fn lower_gamma(s: Complex64, x: f64) -> Result<Complex64> {
    check_x(x)?;
    if pole_distance(s) == 0.0 {
        return Err(Error::Pole { at: format!("{s}"), residue_re: f64::NAN, residue_im: 0.0 });
    }
    if x < (s.norm() + 30.0).max(1.0) && !use_fraction(s, x) || x < 30.0 {
        lower_series(s, x)
    } else {
        Ok(gamma_unchecked(s) - upper_fraction(s, x)?)
    }
}

/// `Γ(s, x) / Γ(s)`, entire in `s` (zero is never divided by).
pub fn upper_gamma_regularized(s: Complex64, x: f64) -> Result<Complex64> {
    Ok(upper_gamma(s, x)? * rgamma(s))
}

/// `γ(t, X)` through `depth` integration-by-parts steps:
/// `Σ_{j<d} X^{t+j} e^{-X} / (t)_{j+1} + γ(t+d, X) / (t)_d`.
/// Valid for `Re t > -depth`.
pub fn lower_gamma_ibp(t: Complex64, x: f64, depth: usize) -> Result<Complex64> {
    check_x(x)?;
    if t.re <= -(depth as f64) {
        return Err(Error::Domain(format!("Re t = {} is outside the continuation range of depth {depth}", t.re)));
    }
    let mut poch = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..depth {
        poch *= t + j as f64;
        if poch.norm() == 0.0 {
            return Err(Error::Pole { at: format!("{t}"), residue_re: f64::NAN, residue_im: 0.0 });
        }
        sum += power_exp(t + j as f64, x) / poch;
    }
    if depth == 0 {
        return lower_gamma(t, x);
    }
    Ok(sum + lower_gamma(t + depth as f64, x)? / poch)
}

/// `γ_ibp(t, X) / Γ(t)`, written without division so it stays finite at the
/// poles of `Γ(t)`.
pub fn lower_gamma_ibp_regularized(t: Complex64, x: f64, depth: usize) -> Result<Complex64> {
    check_x(x)?;
    if t.re <= -(depth as f64) {
        return Err(Error::Domain(format!("Re t = {} is outside the continuation range of depth {depth}", t.re)));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..depth {
        sum += power_exp(t + j as f64, x) * rgamma(t + (j + 1) as f64);
    }
    let tail = t + depth as f64;
    Ok(sum + lower_gamma(tail, x)? * rgamma(tail))
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}
