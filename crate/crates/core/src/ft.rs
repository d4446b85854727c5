//! Fourier–Taylor series `Σ_n e^{2πinz} (a_{n,0} + a_{n,1} z + … + a_{n,q} z^q)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, QI};

#[derive(Clone, Debug, PartialEq)]
pub struct FTSeries<C> {
    order: usize,
    n_min: i64,
    n_max: i64,
    /// Row `n - n_min` holds `a_{n,0}, …, a_{n,q}`.
    coeffs: Vec<Vec<C>>,
    weight: Option<i64>,
}

pub type ExactSeries = FTSeries<QI>;
pub type FloatSeries = FTSeries<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    #[serde(serialize_with = "crate::ft::ser_c64")]
    pub value: Complex64,
    pub tail_bound: f64,
}

pub(crate) fn ser_c64<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

fn binom_i64(n: usize, k: usize) -> i64 {
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl<C: Coefficient> FTSeries<C> {
    pub fn new(order: usize, n_min: i64, n_max: i64, coeffs: Vec<Vec<C>>) -> Result<Self> {
        if n_max < n_min {
            return Err(Error::input(format!("empty frequency range {n_min}..={n_max}")));
        }
        if coeffs.len() as i64 != n_max - n_min + 1 || coeffs.iter().any(|r| r.len() != order + 1) {
            return Err(Error::input("coefficients do not fill the declared rectangle"));
        }
        Ok(FTSeries { order, n_min, n_max, coeffs, weight: None })
    }

    pub fn zero(order: usize, n_min: i64, n_max: i64) -> Self {
        let rows = (n_max - n_min + 1).max(0) as usize;
        FTSeries { order, n_min, n_max, coeffs: vec![vec![C::zero(); order + 1]; rows], weight: None }
    }

    /// Order-0 series from `a_{n_min}, a_{n_min+1}, …`.
    pub fn from_q_expansion(n_min: i64, values: Vec<C>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("empty q-expansion"));
        }
        let n_max = n_min + values.len() as i64 - 1;
        Self::new(0, n_min, n_max, values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn with_weight(mut self, k: i64) -> Self {
        self.weight = Some(k);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn frequencies(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    /// `a_{n,j}`; zero outside the declared rectangle.
    pub fn coeff(&self, n: i64, j: usize) -> C {
        if n < self.n_min || n > self.n_max || j > self.order {
            return C::zero();
        }
        self.coeffs[(n - self.n_min) as usize][j].clone()
    }

    pub fn set(&mut self, n: i64, j: usize, c: C) -> Result<()> {
        if n < self.n_min || n > self.n_max || j > self.order {
            return Err(Error::input(format!("({n}, {j}) lies outside the declared rectangle")));
        }
        self.coeffs[(n - self.n_min) as usize][j] = c;
        Ok(())
    }

    pub fn row(&self, n: i64) -> &[C] {
        &self.coeffs[(n - self.n_min) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(C::is_zero)
    }

    pub fn to_complex(&self) -> FloatSeries {
        FTSeries {
            order: self.order,
            n_min: self.n_min,
            n_max: self.n_max,
            coeffs: self.coeffs.iter().map(|r| r.iter().map(C::to_c64).collect()).collect(),
            weight: self.weight,
        }
    }

    /// Partial sum over the declared range, with a bound on the omitted
    /// frequencies `n > n_max` under the growth model `|a_{n,j}| ≤ C n^{k/2}`
    /// (exponent 0 when no weight is tagged), `C` fitted on the declared range.
    pub fn eval(&self, z: Complex64) -> Result<Evaluation> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        let mut powers = vec![Complex64::new(1.0, 0.0); self.order + 1];
        for j in 1..=self.order {
            powers[j] = powers[j - 1] * z;
        }
        let mut value = Complex64::new(0.0, 0.0);
        for n in self.frequencies() {
            let e = (Complex64::new(0.0, 2.0 * PI * n as f64) * z).exp();
            let poly: Complex64 = self.row(n).iter().zip(&powers).map(|(a, p)| a.to_c64() * p).sum();
            value += e * poly;
        }
        Ok(Evaluation { value, tail_bound: self.tail_bound(z) })
    }

    fn tail_bound(&self, z: Complex64) -> f64 {
        let alpha = self.weight.map_or(0.0, |k| k as f64 / 2.0);
        let growth = |n: i64| (n.max(1) as f64).powf(alpha);
        let scale = self
            .frequencies()
            .map(|n| self.row(n).iter().map(|a| a.to_c64().norm()).fold(0.0, f64::max) / growth(n))
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let poly: f64 = (0..=self.order).map(|j| z.norm().powi(j as i32)).sum();
        let mut total = 0.0;
        let mut n = self.n_max.max(0) + 1;
        loop {
            let term = scale * growth(n) * (-2.0 * PI * n as f64 * z.im).exp() * poly;
            total += term;
            // Once the term ratio is below one it stays there, so the rest is
            // bounded by a geometric series.
            let ratio = ((n + 1) as f64 / n as f64).powf(alpha) * (-2.0 * PI * z.im).exp();
            if ratio < 1.0 && (term <= 1e-17 * total || term == 0.0) {
                return total + term * ratio / (1.0 - ratio);
            }
            n += 1;
            if n > self.n_max + 1_000_000 {
                return total;
            }
        }
    }

    /// `f(z+1) - f(z)`: order drops by one, `a'_{n,k} = Σ_{j>k} C(j,k) a_{n,j}`.
    pub fn delta(&self) -> Self {
        if self.order == 0 {
            return FTSeries { weight: self.weight, ..Self::zero(0, self.n_min, self.n_max) };
        }
        let q = self.order;
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                (0..q)
                    .map(|k| {
                        ((k + 1)..=q).fold(C::zero(), |acc, j| acc.add(&row[j].mul(&C::from_i64(binom_i64(j, k)))))
                    })
                    .collect()
            })
            .collect();
        FTSeries { order: q - 1, n_min: self.n_min, n_max: self.n_max, coeffs, weight: self.weight }
    }

    /// The unique `g` of order `q+1` with `delta(g) = self` and order-0 part
    /// `v0_part`; the frequency range is the union of both ranges.
    pub fn solve_delta(&self, v0_part: &FTSeries<C>) -> Result<Self> {
        if v0_part.order != 0 {
            return Err(Error::input("the kernel part must have order 0"));
        }
        let q = self.order;
        let n_min = self.n_min.min(v0_part.n_min);
        let n_max = self.n_max.max(v0_part.n_max);
        let mut out = Self::zero(q + 1, n_min, n_max);
        for n in n_min..=n_max {
            let a: Vec<C> = (0..=q).map(|k| self.coeff(n, k)).collect();
            let mut b = vec![C::zero(); q + 2];
            b[q + 1] = a[q].div_int(q as i64 + 1);
            for k in (0..q).rev() {
                let mut rhs = a[k].clone();
                for j in (k + 2)..=(q + 1) {
                    rhs = rhs.sub(&b[j].mul(&C::from_i64(binom_i64(j, k))));
                }
                b[k + 1] = rhs.div_int(k as i64 + 1);
            }
            b[0] = v0_part.coeff(n, 0);
            out.coeffs[(n - n_min) as usize] = b;
        }
        out.weight = self.weight.or(v0_part.weight);
        Ok(out)
    }

    /// Order-0 part as its own series.
    pub fn order_zero_part(&self) -> Self {
        FTSeries {
            order: 0,
            n_min: self.n_min,
            n_max: self.n_max,
            coeffs: self.coeffs.iter().map(|r| vec![r[0].clone()]).collect(),
            weight: self.weight,
        }
    }

    /// Coefficient-wise equality after padding both to a common rectangle.
    pub fn same_function(&self, other: &Self) -> bool {
        let q = self.order.max(other.order);
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max.max(other.n_max);
        (lo..=hi).all(|n| (0..=q).all(|j| self.coeff(n, j) == other.coeff(n, j)))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        let mut s = Self::zero(raw.q, raw.n_min, raw.n_max);
        if raw.n_max < raw.n_min {
            return Err(Error::input("empty frequency range"));
        }
        for n in raw.n_min..=raw.n_max {
            let row = raw
                .coeffs
                .get(&n.to_string())
                .ok_or_else(|| Error::input(format!("missing coefficients for n = {n}")))?;
            if row.len() != raw.q + 1 {
                return Err(Error::input(format!("row n = {n} needs {} entries", raw.q + 1)));
            }
            for (j, x) in row.iter().enumerate() {
                s.set(n, j, C::parse_text(x)?)?;
            }
        }
        if let Some(extra) = raw.coeffs.keys().find(|k| k.parse::<i64>().map_or(true, |n| n < raw.n_min || n > raw.n_max)) {
            return Err(Error::input(format!("coefficient key {extra:?} lies outside the declared range")));
        }
        s.weight = raw.weight;
        Ok(s)
    }

    /// JSON with coefficient rows in numeric frequency order.
    pub fn to_json(&self) -> String {
        let mut text = format!("{{\n  \"q\": {},\n  \"n_min\": {},\n  \"n_max\": {},\n", self.order, self.n_min, self.n_max);
        if let Some(k) = self.weight {
            text += &format!("  \"weight\": {k},\n");
        }
        let rows: Vec<String> = self
            .frequencies()
            .map(|n| {
                let r: Vec<String> = self.row(n).iter().map(C::render).collect();
                format!("    \"{n}\": {}", serde_json::to_string(&r).expect("serializable"))
            })
            .collect();
        text + "  \"coeffs\": {\n" + &rows.join(",\n") + "\n  }\n}"
    }
}

#[derive(Deserialize)]
struct SeriesJson {
    q: usize,
    n_min: i64,
    n_max: i64,
    #[serde(default)]
    weight: Option<i64>,
    coeffs: BTreeMap<String, Vec<String>>,
}

fn check_cuspidal<C: Coefficient>(f: &FTSeries<C>) -> Result<()> {
    if f.order != 0 || f.n_min < 1 {
        return Err(Error::input("second-order products need order-0 series with n_min >= 1"));
    }
    Ok(())
}

/// `c_n = Σ_{j=1}^{n-1} a_{n-j} b_j / j` for `1 ≤ n ≤ min(N_f, N_g) + 1`.
pub fn second_order_product<C: Coefficient>(f: &FTSeries<C>, g: &FTSeries<C>) -> Result<FTSeries<C>> {
    check_cuspidal(f)?;
    check_cuspidal(g)?;
    let top = f.n_max.min(g.n_max) + 1;
    let mut out = FTSeries::zero(0, 1, top);
    for n in 1..=top {
        let mut c = C::zero();
        for j in 1..n {
            let term = f.coeff(n - j, 0).mul(&g.coeff(j, 0));
            if !term.is_zero() {
                c = c.add(&term.div_int(j));
            }
        }
        out.coeffs[(n - 1) as usize][0] = c;
    }
    Ok(out)
}

/// The literal coefficients of `f · ∫ g`: each term also divided by `2πi`.
pub fn second_order_product_analytic<C: Coefficient>(f: &FTSeries<C>, g: &FTSeries<C>) -> Result<FloatSeries> {
    let p = second_order_product(&f.to_complex(), &g.to_complex())?;
    let scale = Complex64::new(0.0, 2.0 * PI).inv();
    Ok(FTSeries { coeffs: p.coeffs.into_iter().map(|r| vec![r[0] * scale]).collect(), ..p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QI {
        QI::from_int(n)
    }

    #[test]
    fn single_term_evaluations() {
        let f = FTSeries::from_q_expansion(1, vec![q(1)]).unwrap();
        let e = f.eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((e.value - Complex64::new((-2.0 * PI).exp(), 0.0)).norm() < 1e-15);
        let mut g = ExactSeries::zero(1, 1, 1);
        g.set(1, 1, q(1)).unwrap();
        let e = g.eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((e.value - Complex64::new(0.0, (-2.0 * PI).exp())).norm() < 1e-15);
        assert!(f.eval(Complex64::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn delta_examples() {
        let f = FTSeries::from_q_expansion(1, vec![q(3), q(4)]).unwrap();
        assert!(f.delta().is_zero());
        let mut g = ExactSeries::zero(1, 2, 2);
        g.set(2, 1, q(5)).unwrap();
        assert_eq!(g.delta().coeff(2, 0), q(5));
        let mut h = ExactSeries::zero(2, 1, 1);
        h.set(1, 2, q(1)).unwrap();
        let d = h.delta();
        assert_eq!((d.coeff(1, 0), d.coeff(1, 1)), (q(1), q(2)));
    }

    #[test]
    fn solve_delta_examples() {
        let p = FTSeries::from_q_expansion(1, vec![q(2), q(-1)]).unwrap();
        let zero = ExactSeries::zero(0, 1, 2);
        let g = zero.solve_delta(&p).unwrap();
        assert_eq!(g.order_zero_part(), p);
        assert!(g.delta().is_zero());
        let one = FTSeries::from_q_expansion(3, vec![q(1)]).unwrap();
        let b = one.solve_delta(&ExactSeries::zero(0, 3, 3)).unwrap();
        assert_eq!(b.coeff(3, 1), q(1));
        let mut h = ExactSeries::zero(1, 1, 1);
        h.set(1, 0, q(3)).unwrap();
        h.set(1, 1, q(5)).unwrap();
        let b = h.solve_delta(&ExactSeries::zero(0, 1, 1)).unwrap();
        assert_eq!(b.coeff(1, 2), QI::from_frac(5, 2));
        assert_eq!(b.coeff(1, 1), q(3) - QI::from_frac(5, 2));
        assert_eq!(b.delta(), h);
    }

    #[test]
    fn shift_identity_numerically() {
        let mut f = ExactSeries::zero(2, 1, 4);
        for n in 1..=4 {
            for j in 0..=2 {
                f.set(n, j, QI::from_frac(n * 3 - j as i64, j as i64 + 2)).unwrap();
            }
        }
        let z = Complex64::new(0.17, 0.4);
        let lhs = f.eval(z + 1.0).unwrap().value - f.eval(z).unwrap().value;
        let rhs = f.delta().eval(z).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn products() {
        let f = FTSeries::from_q_expansion(1, vec![q(1)]).unwrap();
        let c = second_order_product(&f, &f).unwrap();
        assert_eq!(c.coeff(1, 0), q(0));
        assert_eq!(c.coeff(2, 0), q(1));
        let z = FTSeries::from_q_expansion(1, vec![q(0)]).unwrap();
        assert!(second_order_product(&f, &z).unwrap().is_zero());
        let a = second_order_product_analytic(&f, &f).unwrap();
        assert!((a.coeff(2, 0) - Complex64::new(0.0, -1.0 / (2.0 * PI))).norm() < 1e-15);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let mut f = ExactSeries::zero(1, 1, 11);
        f.set(10, 1, QI::from_frac(-7, 3)).unwrap();
        let f = f.with_weight(12);
        let text = f.to_json();
        assert!(text.find("\"2\"").unwrap() < text.find("\"10\"").unwrap());
        assert_eq!(ExactSeries::from_json(&text).unwrap(), f);
        let float = FloatSeries::from_json(&text).unwrap();
        assert!((float.coeff(10, 1).re + 7.0 / 3.0).abs() < 1e-15);
        assert!(ExactSeries::from_json(r#"{"q":0,"n_min":1,"n_max":2,"coeffs":{"1":["1"]}}"#).is_err());
        assert!(ExactSeries::from_json(r#"{"q":0,"n_min":1,"n_max":1,"coeffs":{"1":["x"]}}"#).is_err());
    }

    #[test]
    fn tail_bound_covers_omitted_terms() {
        let full: Vec<QI> = (1..=30).map(|n| q(n * n)).collect();
        let short = FTSeries::from_q_expansion(1, full[..8].to_vec()).unwrap().with_weight(4);
        let long = FTSeries::from_q_expansion(1, full).unwrap();
        let z = Complex64::new(0.1, 0.5);
        let e = short.eval(z).unwrap();
        let gap = (long.eval(z).unwrap().value - e.value).norm();
        assert!(gap <= e.tail_bound, "{gap} > {}", e.tail_bound);
    }
}
