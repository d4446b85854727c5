//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-14, rel: 1e-12, max_intervals: 4000 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn kronrod(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let pair = f(c - x) + f(c + x);
        k += pair * WGK[i];
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Piece { a, b, value, error }
}

/// `∫_a^b f`.
pub fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::input("finite limits required; use integrate_to_infinity"));
    }
    if a == b {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(f, a, b);
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    let mut evaluations = 15;
    loop {
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::numeric("non-finite integrand"));
        }
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(Quadrature { value: total, error: err, evaluations });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::numeric(format!(
                "quadrature did not converge on [{a}, {b}]: error estimate {err:e} for value {total}"
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        heap.push(left);
        heap.push(right);
        // Re-sum error estimates to avoid drift from repeated subtraction.
        err = heap.iter().map(|p| p.error).sum();
    }
}

/// `∫_a^∞ f` through `x = a + t/(1-t)`.
pub fn integrate_to_infinity(f: &dyn Fn(f64) -> Complex64, a: f64, tol: Tolerance) -> Result<Quadrature> {
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + t / s;
        let v = f(x);
        if v.norm() == 0.0 {
            v
        } else {
            v / (s * s)
        }
    };
    integrate(&g, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_oscillatory() {
        let q = integrate(&|x| Complex64::new(x * x, 0.0), 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((q.value.re - 9.0).abs() < 1e-13);
        let q = integrate(&|x| Complex64::new(0.0, 10.0 * x).exp(), 0.0, 2.0 * PI, Tolerance::default()).unwrap();
        assert!(q.value.norm() < 1e-12);
    }

    #[test]
    fn semi_infinite_gamma() {
        // ∫_0^∞ x^4 e^{-x} dx = 24
        let q = integrate_to_infinity(&|x| Complex64::new(x.powi(4) * (-x).exp(), 0.0), 0.0, Tolerance::default()).unwrap();
        assert!((q.value.re - 24.0).abs() < 1e-10);
    }

    #[test]
    fn divergence_reported() {
        let r = integrate(&|x| Complex64::new(1.0 / x.abs().sqrt().max(1e-300), 0.0).powf(3.0), -1.0, 1.0, Tolerance { max_intervals: 50, ..Default::default() });
        assert!(matches!(r, Err(Error::Numeric(_))));
    }
}
