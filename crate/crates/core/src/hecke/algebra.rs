use std::collections::HashMap;

use super::pair::{HeckePair, Side};
use crate::error::{Error, Result};
use crate::group::GroupUniverse;
use crate::scalar::QI;

/// `Σ_g c_g 1_{ΓgΓ}` with one representative per double coset.
#[derive(Clone, Debug)]
pub struct HeckeAlgebraElement<E> {
    pub support: Vec<(E, QI)>,
}

impl<E: Clone> HeckeAlgebraElement<E> {
    pub fn zero() -> Self {
        HeckeAlgebraElement { support: Vec::new() }
    }

    pub fn basis(g: E) -> Self {
        HeckeAlgebraElement { support: vec![(g, QI::one())] }
    }
}

/// Left `Γ`-coset representatives of every double coset in the support,
/// cached per representative.
struct DoubleCosets<'a, U: GroupUniverse> {
    pair: &'a HeckePair<U>,
    cache: HashMap<U::Element, Vec<U::Element>>,
}

impl<'a, U: GroupUniverse> DoubleCosets<'a, U> {
    fn new(pair: &'a HeckePair<U>) -> Self {
        DoubleCosets { pair, cache: HashMap::new() }
    }

    fn left_reps(&mut self, g: &U::Element) -> Result<Vec<U::Element>> {
        if let Some(r) = self.cache.get(g) {
            return Ok(r.clone());
        }
        let r = self.pair.enumerate_gamma_cosets(g, Side::Left)?.reps;
        self.cache.insert(g.clone(), r.clone());
        Ok(r)
    }

    /// `x ∈ ΓgΓ`.
    fn contains(&mut self, g: &U::Element, x: &U::Element) -> Result<bool> {
        let u = &self.pair.universe;
        Ok(self.left_reps(g)?.iter().any(|h| self.pair.in_gamma(&u.mul(&u.inv(h), x))))
    }
}

fn evaluate<U: GroupUniverse>(
    f: &HeckeAlgebraElement<U::Element>,
    x: &U::Element,
    dc: &mut DoubleCosets<'_, U>,
) -> Result<QI> {
    let mut total = QI::zero();
    for (g, c) in &f.support {
        if dc.contains(g, x)? {
            total += c;
        }
    }
    Ok(total)
}

fn validate<U: GroupUniverse>(f: &HeckeAlgebraElement<U::Element>, dc: &mut DoubleCosets<'_, U>) -> Result<()> {
    for (i, (g, _)) in f.support.iter().enumerate() {
        for (h, _) in &f.support[..i] {
            if dc.contains(h, g)? {
                return Err(Error::input(format!("{g:?} and {h:?} lie in the same double coset")));
            }
        }
    }
    Ok(())
}

/// Convolution `(f * h)(x) = Σ_{y ∈ G/Γ} f(y) h(y⁻¹x)`, returned in the
/// double-coset basis.
pub fn hecke_convolve<U: GroupUniverse>(
    a: &HeckeAlgebraElement<U::Element>,
    b: &HeckeAlgebraElement<U::Element>,
    pair: &HeckePair<U>,
) -> Result<HeckeAlgebraElement<U::Element>> {
    let u = &pair.universe;
    let mut dc = DoubleCosets::new(pair);
    validate(a, &mut dc)?;
    validate(b, &mut dc)?;
    // Candidate double cosets: Γ a_i b_j Γ over left representatives.
    let mut candidates: Vec<U::Element> = Vec::new();
    for (ga, _) in &a.support {
        for (gb, _) in &b.support {
            let left_a = dc.left_reps(ga)?;
            let left_b = dc.left_reps(gb)?;
            for ai in &left_a {
                for bj in &left_b {
                    let x = u.mul(ai, bj);
                    let mut known = false;
                    for c in &candidates {
                        if dc.contains(c, &x)? {
                            known = true;
                            break;
                        }
                    }
                    if !known {
                        candidates.push(x);
                    }
                }
            }
        }
    }
    let mut support = Vec::new();
    for x in candidates {
        let mut value = QI::zero();
        for (ga, alpha) in &a.support {
            for ai in dc.left_reps(ga)? {
                let y = u.mul(&u.inv(&ai), &x);
                let hv = evaluate(b, &y, &mut dc)?;
                if !hv.is_zero() {
                    value += &(alpha * &hv);
                }
            }
        }
        if !value.is_zero() {
            support.push((x, value));
        }
    }
    Ok(HeckeAlgebraElement { support })
}

/// Whether two elements define the same function on `G`.
pub fn algebra_elements_equal<U: GroupUniverse>(
    a: &HeckeAlgebraElement<U::Element>,
    b: &HeckeAlgebraElement<U::Element>,
    pair: &HeckePair<U>,
) -> Result<bool> {
    let mut dc = DoubleCosets::new(pair);
    for (x, _) in a.support.iter().chain(&b.support) {
        if evaluate(a, x, &mut dc)? != evaluate(b, x, &mut dc)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of `f` on every element of a finite universe.
pub fn as_function<U: GroupUniverse>(
    f: &HeckeAlgebraElement<U::Element>,
    pair: &HeckePair<U>,
) -> Result<Vec<QI>> {
    let elements = pair
        .finite_elements()
        .ok_or_else(|| Error::Unsupported("needs a finite universe".into()))?;
    let mut dc = DoubleCosets::new(pair);
    elements.iter().map(|x| evaluate(f, x, &mut dc)).collect()
}

/// `(f * h)(x) = (1/|Γ|) Σ_{y ∈ G} f(y) h(y⁻¹x)` on a finite universe, with
/// functions given by their values on `elements`.
pub fn convolve_on_group<U: GroupUniverse>(
    universe: &U,
    elements: &[U::Element],
    gamma_order: usize,
    f: &[QI],
    h: &[QI],
) -> Vec<QI> {
    let index: HashMap<&U::Element, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let scale = QI::from_frac(1, gamma_order as i64);
    elements
        .iter()
        .map(|x| {
            let mut acc = QI::zero();
            for (iy, y) in elements.iter().enumerate() {
                if f[iy].is_zero() {
                    continue;
                }
                let z = universe.mul(&universe.inv(y), x);
                let hz = &h[index[&z]];
                if !hz.is_zero() {
                    acc += &(&f[iy] * hz);
                }
            }
            &acc * &scale
        })
        .collect()
}
