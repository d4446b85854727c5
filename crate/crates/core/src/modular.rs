//! Real `SL_2` points acting on the upper half plane, the weight-k slash
//! action, and the lift of a form to a function on the group.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DET_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupPoint {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() >= DET_TOLERANCE {
            return Err(Error::Domain(format!("determinant {det} is not 1")));
        }
        Ok(GroupPoint { a, b, c, d })
    }

    pub fn identity() -> Self {
        GroupPoint { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `S_w = [[0, -1/√w], [√w, 0]]`.
    pub fn fricke(width: f64) -> Self {
        let r = width.sqrt();
        GroupPoint { a: 0.0, b: -1.0 / r, c: r, d: 0.0 }
    }

    pub fn mul(&self, o: &GroupPoint) -> GroupPoint {
        GroupPoint {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inv(&self) -> GroupPoint {
        GroupPoint { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Automorphy factor `cz + d`.
    pub fn factor(&self, z: Complex64) -> Complex64 {
        self.c * z + self.d
    }

    /// Möbius action `(az + b) / (cz + d)`.
    pub fn act(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / self.factor(z)
    }
}

fn check_upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("Im z must be positive, got {z}")));
    }
    Ok(())
}

/// `(f|_k γ)(z) = (cz + d)^{-k} f(γz)`.
pub fn slash(f: &dyn Fn(Complex64) -> Complex64, gamma: &GroupPoint, k: i32, z: Complex64) -> Result<Complex64> {
    check_upper(z)?;
    let j = gamma.factor(z);
    if j.norm() == 0.0 {
        return Err(Error::Domain("automorphy factor vanishes".into()));
    }
    Ok(j.powi(-k) * f(gamma.act(z)))
}

/// Rotation part of the Iwasawa decomposition `g = n a k`:
/// `k = (1/√(c²+d²)) [[d, -c], [c, d]]`.
pub fn iwasawa_k(g: &GroupPoint) -> GroupPoint {
    let r = g.c.hypot(g.d);
    GroupPoint { a: g.d / r, b: -g.c / r, c: g.c / r, d: g.d / r }
}

/// `ψ_f(g) = Im(g i)^{k/2} ε_k(k(g)) f(g i)` with `ε_k([[a, -b], [b, a]]) = (a + ib)^{-k}`.
pub fn psi_lift(f: &dyn Fn(Complex64) -> Complex64, k: i32, g: &GroupPoint) -> Complex64 {
    let w = g.act(Complex64::i());
    let rot = iwasawa_k(g);
    let eps = Complex64::new(rot.a, rot.c).powi(-k);
    w.im.powf(k as f64 / 2.0) * eps * f(w)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DZero {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub value: Complex64,
    /// Change between the last two trapezoid refinements.
    pub residual: f64,
    pub nodes: usize,
}

/// `(1/period) ∫_0^period (f|_k σ_c)(t + iy) dt` by the trapezoid rule,
/// doubling the node count until two refinements agree.
pub fn dzero_at_cusp(
    f: &dyn Fn(Complex64) -> Complex64,
    sigma_c: &GroupPoint,
    period: f64,
    y: f64,
    k: i32,
) -> Result<DZero> {
    if !(period > 0.0) {
        return Err(Error::input("period must be positive"));
    }
    check_upper(Complex64::new(0.0, y))?;
    let average = |m: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            let t = period * i as f64 / m as f64;
            acc += slash(f, sigma_c, k, Complex64::new(t, y))?;
        }
        Ok(acc / m as f64)
    };
    let mut m = 16;
    let mut prev = average(m)?;
    loop {
        m *= 2;
        let next = average(m)?;
        let residual = (next - prev).norm();
        if residual <= 1e-14 * next.norm().max(1.0) || m >= 1 << 16 {
            return Ok(DZero { value: next, residual, nodes: m });
        }
        prev = next;
    }
}

/// `e^{2πi n z}`.
pub fn q_power(n: f64, z: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * n) * z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(z: Complex64) -> Complex64 {
        q_power(1.0, z) * (1.0 + z * z) + q_power(2.0, z) * 0.3
    }

    #[test]
    fn slash_basics() {
        let z = Complex64::new(0.2, 0.9);
        assert_eq!(slash(&sample, &GroupPoint::identity(), 12, z).unwrap(), sample(z));
        let minus = GroupPoint::new(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert!((slash(&sample, &minus, 12, z).unwrap() - sample(z)).norm() < 1e-15);
        assert!(slash(&sample, &GroupPoint::identity(), 2, Complex64::new(0.0, -1.0)).is_err());
        assert!(GroupPoint::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn slash_cocycle() {
        let g1 = GroupPoint::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let g2 = GroupPoint::new(1.0, -0.5, 0.4, 0.8).unwrap();
        let z = Complex64::new(-0.3, 1.1);
        let k = 6;
        let inner = |w: Complex64| slash(&sample, &g1, k, w).unwrap();
        let lhs = slash(&inner, &g2, k, z).unwrap();
        let rhs = slash(&sample, &g1.mul(&g2), k, z).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn lift_basics() {
        assert_eq!(psi_lift(&sample, 4, &GroupPoint::identity()), sample(Complex64::i()));
        let upper = GroupPoint::new(2.0, 3.0, 0.0, 0.5).unwrap();
        assert_eq!(iwasawa_k(&upper), GroupPoint::identity());
        let g = GroupPoint::new(1.0, 0.3, -0.7, 0.79).unwrap();
        let x = GroupPoint::new(0.5, -1.0, 0.25, 1.5).unwrap();
        let k = 4;
        let lhs = psi_lift(&sample, k, &g.mul(&x));
        let slashed = |w: Complex64| slash(&sample, &g, k, w).unwrap();
        let rhs = psi_lift(&slashed, k, &x);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn dzero_constant_and_cusp_form() {
        let one = |_: Complex64| Complex64::new(1.0, 0.0);
        let d = dzero_at_cusp(&one, &GroupPoint::identity(), 1.0, 1.0, 0).unwrap();
        assert!((d.value - 1.0).norm() < 1e-15);
        let cusp = |z: Complex64| q_power(1.0, z) - q_power(3.0, z) * 0.5;
        let d1 = dzero_at_cusp(&cusp, &GroupPoint::identity(), 1.0, 0.7, 2).unwrap();
        let d2 = dzero_at_cusp(&cusp, &GroupPoint::identity(), 1.0, 1.4, 2).unwrap();
        assert!(d1.value.norm() < 1e-12 && d2.value.norm() < 1e-12);
    }
}
