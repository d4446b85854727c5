//! Exact q-expansions: Eisenstein series, `Δ`, eta products, file formats,
//! Fricke duals and the level-1 inner products.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ft::ExactSeries;
use crate::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::scalar::QI;

#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub label: String,
    pub weight: i64,
    pub level: u64,
    /// `a_0`, if the form is not cuspidal.
    pub constant: Option<QI>,
    /// `a_1, …, a_{n_max}`.
    pub coeffs: Vec<QI>,
    /// How the expansion was obtained, for derived data such as duals.
    pub provenance: Option<String>,
}

impl QExpansion {
    pub fn new(label: impl Into<String>, weight: i64, level: u64, constant: Option<QI>, coeffs: Vec<QI>) -> Self {
        QExpansion { label: label.into(), weight, level, constant, coeffs, provenance: None }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_cusp_form(&self) -> bool {
        self.constant.as_ref().map_or(true, QI::is_zero)
    }

    /// `a_n`, with `a_0` from the constant term and zero past `n_max`.
    pub fn coeff(&self, n: usize) -> QI {
        if n == 0 {
            self.constant.clone().unwrap_or_default()
        } else {
            self.coeffs.get(n - 1).cloned().unwrap_or_default()
        }
    }

    pub fn truncate(&self, n_max: usize) -> QExpansion {
        QExpansion { coeffs: self.coeffs.iter().take(n_max).cloned().collect(), ..self.clone() }
    }

    pub fn coeffs_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(QI::to_c64).collect()
    }

    /// `Σ_n a_n e^{2πinz}` over the stored range.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = (acc + a.to_c64()) * q;
        }
        acc + self.constant.as_ref().map_or(Complex64::new(0.0, 0.0), QI::to_c64)
    }

    /// The order-0 Fourier–Taylor series of a cusp form.
    pub fn to_series(&self) -> Result<ExactSeries> {
        if !self.is_cusp_form() {
            return Err(Error::input(format!("{} has a constant term", self.label)));
        }
        Ok(ExactSeries::from_q_expansion(1, self.coeffs.clone())?.with_weight(self.weight))
    }

    pub fn scaled(&self, c: &QI) -> QExpansion {
        QExpansion {
            constant: self.constant.as_ref().map(|a| a * c),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("q-expansion JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("q-expansion must be a JSON object".into()))?;
        let field = |name: &str| obj.get(name).ok_or_else(|| Error::Parse(format!("missing field: {name}")));
        let label = field("label")?
            .as_str()
            .ok_or_else(|| Error::Parse("field label: expected a string".into()))?
            .to_string();
        let weight = field("weight")?.as_i64().ok_or_else(|| Error::Parse("field weight: expected an integer".into()))?;
        let level = field("level")?.as_u64().ok_or_else(|| Error::Parse("field level: expected a positive integer".into()))?;
        if level == 0 {
            return Err(Error::Parse("field level: expected a positive integer".into()));
        }
        let coeffs = field("coeffs")?.as_object().ok_or_else(|| Error::Parse("field coeffs: expected an object".into()))?;
        let mut table = BTreeMap::new();
        for (key, val) in coeffs {
            let n: usize = key.parse().map_err(|_| Error::Parse(format!("field coeffs: bad index {key:?}")))?;
            let text = match val {
                Value::String(s) => s.clone(),
                Value::Number(x) => x.to_string(),
                _ => return Err(Error::Parse(format!("field coeffs.{key}: expected a rational string"))),
            };
            let a: QI = text.parse().map_err(|e| Error::Parse(format!("field coeffs.{key}: {e}")))?;
            table.insert(n, a);
        }
        let n_max = table.keys().copied().max().unwrap_or(0);
        let constant = table.remove(&0);
        let coeffs = (1..=n_max).map(|n| table.remove(&n).unwrap_or_default()).collect();
        let provenance = obj.get("provenance").and_then(Value::as_str).map(str::to_string);
        Ok(QExpansion { label, weight, level, constant, coeffs, provenance })
    }

    /// Canonical JSON: fixed field order, coefficient keys in numeric order.
    pub fn to_json(&self) -> String {
        let mut rows = Vec::new();
        if let Some(a0) = &self.constant {
            rows.push(format!("    \"0\": \"{a0}\""));
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            rows.push(format!("    \"{}\": \"{a}\"", i + 1));
        }
        let label = serde_json::to_string(&self.label).expect("string");
        let mut text = format!("{{\n  \"label\": {label},\n  \"weight\": {},\n  \"level\": {},\n", self.weight, self.level);
        if let Some(p) = &self.provenance {
            text += &format!("  \"provenance\": {},\n", serde_json::to_string(p).expect("string"));
        }
        text + "  \"coeffs\": {\n" + &rows.join(",\n") + "\n  }\n}\n"
    }

    /// Two-column `n,a_n` CSV; a non-numeric first row is treated as a header.
    pub fn from_csv(text: &str, label: &str, weight: i64, level: u64) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut table = BTreeMap::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("csv line {}: {e}", line + 1)))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("csv line {}: expected two columns", line + 1)));
            }
            let Ok(n) = rec[0].parse::<usize>() else {
                if line == 0 {
                    continue;
                }
                return Err(Error::Parse(format!("csv line {}: bad index {:?}", line + 1, &rec[0])));
            };
            let a: QI = rec[1].parse().map_err(|e| Error::Parse(format!("csv line {}: {e}", line + 1)))?;
            table.insert(n, a);
        }
        let n_max = table.keys().copied().max().unwrap_or(0);
        let constant = table.remove(&0);
        let coeffs = (1..=n_max).map(|n| table.remove(&n).unwrap_or_default()).collect();
        Ok(QExpansion::new(label, weight, level, constant, coeffs))
    }
}

pub fn load_qexp(path: impl AsRef<Path>) -> Result<QExpansion> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("csv");
        return Err(Error::input(format!("{stem}: CSV input needs weight and level; use QExpansion::from_csv")));
    }
    QExpansion::from_json(&text)
}

pub fn save_qexp(f: &QExpansion, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, f.to_json())?;
    Ok(())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Bernoulli numbers `B_0, …, B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn divisor_sigma(n: u64, power: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| num_traits::pow(BigInt::from(d), power as usize)).sum()
}

/// `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n`.
pub fn eisenstein_qexp(k: i64, n_max: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::input(format!("Eisenstein series need even weight k >= 4, got {k}")));
    }
    let bk = bernoulli(k as usize).pop().expect("nonempty");
    let factor = -rat(2 * k) / bk;
    let coeffs = (1..=n_max as u64)
        .map(|n| QI::real(&factor * BigRational::from_integer(divisor_sigma(n, k as u32 - 1))))
        .collect();
    Ok(QExpansion::new(format!("E{k}"), k, 1, Some(QI::one()), coeffs))
}

fn series_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Integral coefficients `a_0, …, a_{len-1}` of an Eisenstein series.
fn integral_coeffs(f: &QExpansion, len: usize) -> Vec<BigInt> {
    (0..len).map(|n| f.coeff(n).re.to_integer()).collect()
}

/// `Δ = (E_4³ - E_6²) / 1728`.
pub fn delta_qexp(n_max: usize) -> Result<QExpansion> {
    if n_max == 0 {
        return Err(Error::input("n_max must be at least 1"));
    }
    let len = n_max + 1;
    let e4 = integral_coeffs(&eisenstein_qexp(4, n_max)?, len);
    let e6 = integral_coeffs(&eisenstein_qexp(6, n_max)?, len);
    let e4_cubed = series_mul(&series_mul(&e4, &e4, len), &e4, len);
    let e6_sq = series_mul(&e6, &e6, len);
    let scale = BigInt::from(1728);
    let coeffs = (1..len)
        .map(|n| QI::real(BigRational::from_integer((&e4_cubed[n] - &e6_sq[n]) / &scale)))
        .collect();
    Ok(QExpansion::new("Delta", 12, 1, None, coeffs))
}

/// `Π_n (1 - q^n)` by Euler's pentagonal theorem, as sparse `(exponent, ±1)`.
fn pentagonal(len: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 1)];
    for k in 1i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((e1, sign));
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e2 < len {
            out.push((e2, sign));
        }
    }
    out
}

/// `q^{Σ m r / 24} Π_{(m, r)} Π_n (1 - q^{mn})^r`; the shift must be an integer.
pub fn eta_product(factors: &[(u64, i64)], n_max: usize, label: &str, weight: i64, level: u64) -> Result<QExpansion> {
    let shift24: i64 = factors.iter().map(|&(m, r)| m as i64 * r).sum();
    if shift24 % 24 != 0 || shift24 < 0 {
        return Err(Error::input("eta product must have a nonnegative integral q-shift"));
    }
    let shift = (shift24 / 24) as usize;
    let len = n_max + 1;
    let mut series = vec![BigInt::zero(); len];
    series[0] = BigInt::one();
    for &(m, r) in factors {
        if m == 0 {
            return Err(Error::input("eta factor needs m >= 1"));
        }
        let sparse: Vec<(usize, i64)> = pentagonal(len)
            .into_iter()
            .filter_map(|(e, s)| {
                let e = e.checked_mul(m as usize)?;
                (e < len).then_some((e, s))
            })
            .collect();
        for _ in 0..r.unsigned_abs() {
            if r > 0 {
                let mut next = vec![BigInt::zero(); len];
                for (i, x) in series.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for &(e, s) in &sparse {
                        if i + e < len {
                            next[i + e] += x * s;
                        }
                    }
                }
                series = next;
            } else {
                // Divide by the sparse series, whose constant term is 1.
                for n in 0..len {
                    let mut acc = series[n].clone();
                    for &(e, s) in sparse.iter().skip(1) {
                        if e > n {
                            break;
                        }
                        acc -= &series[n - e] * s;
                    }
                    series[n] = acc;
                }
            }
        }
    }
    let mut coeffs = vec![QI::zero(); n_max];
    for (n, x) in series.into_iter().enumerate() {
        let target = n + shift;
        if (1..=n_max).contains(&target) {
            coeffs[target - 1] = QI::real(BigRational::from_integer(x));
        }
    }
    let constant = (shift == 0).then(QI::one);
    Ok(QExpansion::new(label, weight, level, constant, coeffs))
}

/// The weight-2 newform of level 11, `η(z)² η(11z)²`.
pub fn level11_newform(n_max: usize) -> Result<QExpansion> {
    eta_product(&[(1, 2), (11, 2)], n_max, "11a", 2, 11)
}

#[derive(Clone, Debug)]
pub enum FrickeData {
    /// The caller asserts `f|S_w = ±f`.
    Eigenvalue(i8),
    Explicit(QExpansion),
}

/// `f̂ = f|_k S_w`.
pub fn fricke_dual(f: &QExpansion, data: &FrickeData) -> Result<QExpansion> {
    let mut out = match data {
        FrickeData::Eigenvalue(e) if *e == 1 || *e == -1 => {
            if f.level == 1 && *e == -1 {
                return Err(Error::input("at level 1 the dual of a modular form is the form itself"));
            }
            let mut g = f.scaled(&QI::from_int(*e as i64));
            g.provenance = Some(format!("fricke eigenvalue {e:+} applied to {}", f.label));
            g
        }
        FrickeData::Eigenvalue(e) => return Err(Error::input(format!("Fricke eigenvalue must be ±1, got {e}"))),
        FrickeData::Explicit(g) => {
            if g.weight != f.weight || g.level != f.level {
                return Err(Error::input("dual must share weight and level"));
            }
            let mut g = g.clone();
            g.provenance = Some(format!("supplied dual of {}", f.label));
            g
        }
    };
    out.label = if f.label.ends_with("^") { f.label.trim_end_matches('^').to_string() } else { format!("{}^", f.label) };
    Ok(out)
}

/// `(1/|cusps|) Σ_c d_0(f, c) conj(d_0(g, c))`.
pub fn cusp_inner(d0_f: &[Complex64], d0_g: &[Complex64]) -> Result<Complex64> {
    if d0_f.len() != d0_g.len() {
        return Err(Error::input("cusp lists differ in length"));
    }
    if d0_f.is_empty() {
        return Err(Error::input("no cusps supplied"));
    }
    let sum: Complex64 = d0_f.iter().zip(d0_g).map(|(a, b)| a * b.conj()).sum();
    Ok(sum / d0_f.len() as f64)
}

#[derive(Clone, Copy, Debug)]
pub struct Petersson {
    pub value: Complex64,
    pub error: f64,
}

/// `(3/π) ∫_F f(z) conj(g(z)) y^k dx dy / y²` over the standard fundamental
/// domain of `SL_2(Z)`.
pub fn petersson_numeric(f: &QExpansion, g: &QExpansion, rel_tol: f64) -> Result<Petersson> {
    if f.level != 1 || g.level != 1 {
        return Err(Error::Unsupported("Petersson integration is implemented for level 1 only".into()));
    }
    if !f.is_cusp_form() || !g.is_cusp_form() {
        return Err(Error::input("Petersson integration needs cusp forms"));
    }
    if f.weight != g.weight {
        return Err(Error::input("forms must share a weight"));
    }
    let k = f.weight as i32;
    let inner_tol = Tolerance::new(1e-30, rel_tol * 1e-2);
    let column = |x: f64| -> Result<Complex64> {
        let y0 = (1.0 - x * x).sqrt();
        let h = |y: f64| {
            let z = Complex64::new(x, y);
            f.eval(z) * g.eval(z).conj() * y.powi(k - 2)
        };
        Ok(integrate_to_infinity(&h, y0, inner_tol)?.value)
    };
    // Fn closures cannot record the first failure directly; the outer integral sees NaN.
    let failure = std::cell::RefCell::new(None);
    let outer = |x: f64| {
        column(x).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e.to_string());
            Complex64::new(f64::NAN, 0.0)
        })
    };
    let q = integrate(&outer, -0.5, 0.5, Tolerance::new(1e-30, rel_tol));
    if let Some(msg) = failure.into_inner() {
        return Err(Error::numeric(msg));
    }
    let q = q?;
    let vol = PI / 3.0;
    Ok(Petersson { value: q.value / vol, error: q.error / vol })
}

/// `P(f) = f - a_0 E_k` at level 1 and weight `k ≥ 4`.
pub fn cusp_projection_level1(f: &QExpansion) -> Result<QExpansion> {
    if f.level != 1 {
        return Err(Error::Unsupported("cusp projection is implemented for level 1 only".into()));
    }
    let Some(a0) = f.constant.clone() else {
        return Ok(f.clone());
    };
    let e = eisenstein_qexp(f.weight, f.n_max())?;
    let coeffs = f.coeffs.iter().zip(&e.coeffs).map(|(a, b)| a - &(&a0 * b)).collect();
    Ok(QExpansion { constant: None, coeffs, label: format!("P({})", f.label), ..f.clone() })
}

/// `|a_n| ≤ d(n) n^{(k-1)/2}` (times `1 + slack`) over the stored range.
pub fn ramanujan_bound_holds(f: &QExpansion, slack: f64) -> bool {
    f.coeffs.iter().enumerate().all(|(i, a)| {
        let n = i as u64 + 1;
        let d = (1..=n).filter(|x| n % x == 0).count() as f64;
        a.to_c64().norm() <= d * (n as f64).powf((f.weight as f64 - 1.0) / 2.0) * (1.0 + slack)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> QI {
        QI::from_int(n)
    }

    #[test]
    fn eisenstein_coefficients() {
        let e4 = eisenstein_qexp(4, 5).unwrap();
        assert_eq!(e4.coeff(0), int(1));
        assert_eq!(e4.coeff(1), int(240));
        assert_eq!(e4.coeff(2), int(2160));
        assert_eq!(eisenstein_qexp(6, 2).unwrap().coeff(1), int(-504));
        assert!(eisenstein_qexp(5, 3).is_err());
        assert!(eisenstein_qexp(2, 3).is_err());
    }

    #[test]
    fn delta_matches_eta_product() {
        let d = delta_qexp(50).unwrap();
        assert_eq!(d.coeff(0), int(0));
        assert_eq!(d.coeff(1), int(1));
        assert_eq!(d.coeff(2), int(-24));
        assert_eq!(d.coeff(3), int(252));
        assert_eq!(d.coeff(11), int(534_612));
        let eta = eta_product(&[(1, 24)], 50, "eta24", 12, 1).unwrap();
        assert_eq!(eta.coeffs, d.coeffs);
        assert!(ramanujan_bound_holds(&d, 1e-9));
    }

    #[test]
    fn level11_coefficients() {
        let f = level11_newform(12).unwrap();
        let expect = [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2];
        assert_eq!(f.coeffs, expect.iter().map(|&x| int(x)).collect::<Vec<_>>());
    }

    #[test]
    fn inverse_eta_factor() {
        // 1/Π(1-q^n) generates partition numbers.
        let p = eta_product(&[(1, 24), (1, -24), (1, -1), (1, 1)], 6, "one", 0, 1).unwrap();
        assert_eq!(p.constant, Some(int(1)));
        assert!(p.coeffs.iter().all(QI::is_zero));
        assert!(eta_product(&[(1, 1)], 5, "bad", 0, 1).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let d = delta_qexp(12).unwrap();
        let text = d.to_json();
        let back = QExpansion::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
        let err = QExpansion::from_json(r#"{"label":"x","level":1,"coeffs":{}}"#).unwrap_err();
        assert!(err.to_string().contains("missing field: weight"));
        let third = QExpansion::from_json(r#"{"label":"x","weight":2,"level":1,"coeffs":{"1":"1/3"}}"#).unwrap();
        assert_eq!(third.coeff(1), QI::from_frac(1, 3));
        assert!(QExpansion::from_json(r#"{"label":"x","weight":2,"level":1,"coeffs":{"1":"pi"}}"#).is_err());
        assert!(QExpansion::from_json("").is_err());
    }

    #[test]
    fn csv_import() {
        let f = QExpansion::from_csv("n,a_n\n1,1\n2,-24\n3, 252\n", "Delta", 12, 1).unwrap();
        assert_eq!(f.coeffs, delta_qexp(3).unwrap().coeffs);
        assert!(QExpansion::from_csv("1,1\nx,2\n", "bad", 12, 1).is_err());
    }

    #[test]
    fn fricke_duals() {
        let d = delta_qexp(5).unwrap();
        let same = fricke_dual(&d, &FrickeData::Eigenvalue(1)).unwrap();
        assert_eq!(same.coeffs, d.coeffs);
        assert!(fricke_dual(&d, &FrickeData::Eigenvalue(-1)).is_err());
        let f = level11_newform(5).unwrap();
        let neg = fricke_dual(&f, &FrickeData::Eigenvalue(-1)).unwrap();
        assert_eq!(neg.coeff(2), int(2));
        let back = fricke_dual(&neg, &FrickeData::Eigenvalue(-1)).unwrap();
        assert_eq!(back.coeffs, f.coeffs);
        assert_eq!(back.label, f.label);
    }

    #[test]
    fn cusp_inner_examples() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(cusp_inner(&[c(2.0)], &[c(3.0)]).unwrap(), c(6.0));
        assert_eq!(cusp_inner(&[c(0.0), c(0.0)], &[c(1.0), c(5.0)]).unwrap(), c(0.0));
        let a = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        let b = [Complex64::new(0.2, -1.0), Complex64::new(3.0, 0.1)];
        assert!((cusp_inner(&a, &b).unwrap() - cusp_inner(&b, &a).unwrap().conj()).norm() < 1e-15);
        assert!(cusp_inner(&a, &b[..1]).is_err());
    }

    #[test]
    fn petersson_norm_of_delta() {
        let d = delta_qexp(30).unwrap();
        let p = petersson_numeric(&d, &d, 1e-9).unwrap();
        // Unnormalized ⟨Δ, Δ⟩ ≈ 1.035362e-6 over the fundamental domain.
        assert!((p.value.re * PI / 3.0 - 1.035_362e-6).abs() < 1e-11);
        assert!(p.value.im.abs() < 1e-18);
        let coarse = petersson_numeric(&d, &d, 1e-5).unwrap();
        assert!((coarse.value - p.value).norm() < 1e-6 * p.value.norm());
        assert!(petersson_numeric(&level11_newform(5).unwrap(), &level11_newform(5).unwrap(), 1e-6).is_err());
    }

    #[test]
    fn level_one_projection() {
        let e12 = eisenstein_qexp(12, 6).unwrap();
        let f = QExpansion { coeffs: e12.coeffs.iter().zip(&delta_qexp(6).unwrap().coeffs).map(|(a, b)| a + b).collect(), ..e12 };
        let p = cusp_projection_level1(&f).unwrap();
        assert!(p.is_cusp_form());
        assert_eq!(p.coeffs, delta_qexp(6).unwrap().coeffs);
    }
}
