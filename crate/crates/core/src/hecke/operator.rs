use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::pair::{HeckePair, Side};
use crate::error::{Error, Result};
use crate::group::GroupUniverse;
use crate::invariants::{higher_invariants, is_unitary_exact, MatrixModule};
use crate::linalg::{hermitian, vec_add, vec_scale, vec_sub, Matrix, Subspace, Vector};
use crate::scalar::QI;

/// A linear action of the universe on `Q(i)^dim`.
pub trait Representation<E> {
    fn dim(&self) -> usize;
    fn act(&self, e: &E) -> Matrix;
}

impl<E, F: Fn(&E) -> Matrix> Representation<E> for (usize, F) {
    fn dim(&self) -> usize {
        self.0
    }
    fn act(&self, e: &E) -> Matrix {
        (self.1)(e)
    }
}

/// `H_q` of the subgroup generated by `generators`.
pub fn subgroup_invariants<E, R: Representation<E>>(rep: &R, generators: &[E], q: isize) -> Result<Subspace> {
    if q < 0 {
        return Ok(Subspace::zero(rep.dim()));
    }
    let gens = generators.iter().enumerate().map(|(i, g)| (format!("s{i}"), rep.act(g))).collect();
    let module = MatrixModule::infinite(rep.dim(), gens)?.with_q_max(q as usize);
    higher_invariants(&module, q as usize)
}

/// An element of `H_q(Σ, V) / H_{q-1}(Σ, V)`.
#[derive(Clone, Debug, Serialize)]
pub struct HeckeClass {
    pub sigma_label: String,
    pub order: usize,
    pub representative: Vector,
    pub modulus: Subspace,
}

impl HeckeClass {
    /// Validates `v ∈ H_q(Σ, V)` and attaches the modulus `H_{q-1}(Σ, V)`.
    pub fn new<U: GroupUniverse, R: Representation<U::Element>>(
        pair: &HeckePair<U>,
        rep: &R,
        order: usize,
        v: Vector,
    ) -> Result<Self> {
        let hq = subgroup_invariants(rep, pair.sigma_generators(), order as isize)?;
        if !hq.contains(&v) {
            return Err(Error::input(format!("vector is not in H_{order}(Σ)")));
        }
        let modulus = subgroup_invariants(rep, pair.sigma_generators(), order as isize - 1)?;
        Ok(HeckeClass { sigma_label: pair.sigma_label().to_string(), order, representative: v, modulus })
    }

    /// Two classes over the same modulus agree.
    pub fn congruent(&self, other: &HeckeClass) -> bool {
        self.modulus.contains(&vec_sub(&self.representative, &other.representative))
    }
}

/// `(1/[Γ:Σ]) Σ_j h_j v` for the supplied representatives.
pub fn hecke_sum<E, R: Representation<E>>(reps: &[E], index: usize, rep: &R, v: &[QI]) -> Vector {
    let mut acc = vec![QI::zero(); v.len()];
    for h in reps {
        acc = vec_add(&acc, &rep.act(h).mul_vec(v));
    }
    vec_scale(&acc, &QI::from_frac(1, index as i64))
}

/// `T_{ΓgΓ}` on the class, landing in `H_q(Σ', V) / H_{q-1}(Σ', V)` where `Σ'`
/// is generated by `target_generators`, each of which must lie in `Σ(g)`.
pub fn hecke_apply<U, R>(
    pair: &HeckePair<U>,
    rep: &R,
    class: &HeckeClass,
    g: &U::Element,
    target_generators: &[U::Element],
) -> Result<HeckeClass>
where
    U: GroupUniverse,
    R: Representation<U::Element>,
{
    let reps = pair.enumerate_cosets(g, Side::Left)?.reps;
    hecke_apply_with_reps(pair, rep, class, &reps, target_generators)
}

/// As [`hecke_apply`], with caller-chosen coset representatives of `ΓgΓ/Σ`.
pub fn hecke_apply_with_reps<U, R>(
    pair: &HeckePair<U>,
    rep: &R,
    class: &HeckeClass,
    reps: &[U::Element],
    target_generators: &[U::Element],
) -> Result<HeckeClass>
where
    U: GroupUniverse,
    R: Representation<U::Element>,
{
    if class.sigma_label != pair.sigma_label() {
        return Err(Error::input("class belongs to a different Σ"));
    }
    let u = &pair.universe;
    for s in target_generators {
        let fixes = pair.in_sigma(s) && reps.iter().all(|h| pair.in_sigma(&u.mul(&u.inv(h), &u.mul(s, h))));
        if !fixes {
            return Err(Error::input(format!("{s:?} is not in Σ(g)")));
        }
    }
    let w = hecke_sum(reps, pair.sigma_index(), rep, &class.representative);
    let q = class.order as isize;
    debug_assert!(subgroup_invariants(rep, target_generators, q)?.contains(&w));
    let modulus = subgroup_invariants(rep, target_generators, q - 1)?;
    Ok(HeckeClass {
        sigma_label: format!("{}(g)", pair.sigma_label()),
        order: class.order,
        representative: w,
        modulus,
    })
}

/// Restriction to a smaller normal subgroup: same representative, modulus
/// recomputed for `finer`.
pub fn restrict_class<U, R>(class: &HeckeClass, coarse: &HeckePair<U>, finer: &HeckePair<U>, rep: &R) -> Result<HeckeClass>
where
    U: GroupUniverse,
    R: Representation<U::Element>,
{
    if class.sigma_label != coarse.sigma_label() {
        return Err(Error::input("class belongs to a different Σ"));
    }
    if let Some(s) = finer.sigma_generators().iter().find(|s| !coarse.in_sigma(s)) {
        return Err(Error::input(format!("{s:?} lies in the finer subgroup but not in Σ")));
    }
    let modulus = subgroup_invariants(rep, finer.sigma_generators(), class.order as isize - 1)?;
    Ok(HeckeClass {
        sigma_label: finer.sigma_label().to_string(),
        order: class.order,
        representative: class.representative.clone(),
        modulus,
    })
}

/// `restrict ∘ T` and `T ∘ restrict` agree modulo `H_{q-1}(Σ'(g), V)`.
/// `target_generators` generate a subgroup of `Σ'(g)`.
pub fn restriction_diagram_commutes<U, R>(
    class: &HeckeClass,
    coarse: &HeckePair<U>,
    finer: &HeckePair<U>,
    rep: &R,
    g: &U::Element,
    target_generators: &[U::Element],
) -> Result<bool>
where
    U: GroupUniverse,
    R: Representation<U::Element>,
{
    let coarse_reps = coarse.enumerate_cosets(g, Side::Left)?.reps;
    let upper = hecke_sum(&coarse_reps, coarse.sigma_index(), rep, &class.representative);
    let lower = hecke_apply(finer, rep, &restrict_class(class, coarse, finer, rep)?, g, target_generators)?;
    Ok(lower.modulus.contains(&vec_sub(&upper, &lower.representative)))
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitaryReport {
    pub order: usize,
    /// `dim H̄_q`; zero means every statement holds vacuously.
    pub quotient_dim: usize,
    pub operator_norm: f64,
    pub norm_bound: usize,
    pub norm_slack: f64,
    pub adjoint_constant: String,
    pub adjoint_residual: f64,
    pub adjoint_exact: bool,
    pub symmetric_double_coset: bool,
    pub self_adjoint: Option<bool>,
}

/// Orthonormal basis in `f64` by modified Gram–Schmidt.
fn orthonormal(vectors: &[Vector]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w: Vec<Complex64> = v.iter().map(QI::to_c64).collect();
        for e in &out {
            let c: Complex64 = e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= c * ei;
            }
        }
        let n = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            out.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Checks the norm bound and adjoint identity for `T_{ΓgΓ}` on
/// `H̄_q(Σ, V)`, realised as the orthogonal complement of `H_{q-1}` in `H_q`.
pub fn unitary_model_checks<U, R>(pair: &HeckePair<U>, rep: &R, g: &U::Element, q: usize) -> Result<UnitaryReport>
where
    U: GroupUniverse,
    R: Representation<U::Element>,
{
    let elements = pair
        .finite_elements()
        .ok_or_else(|| Error::Precondition("unitary checks need a finite universe".into()))?;
    if let Some(e) = elements.iter().find(|e| !is_unitary_exact(&rep.act(e))) {
        return Err(Error::Precondition(format!("{e:?} does not act unitarily")));
    }
    let u = &pair.universe;
    let ginv = u.inv(g);
    let reps = pair.enumerate_cosets(g, Side::Left)?.reps;
    let reps_inv = pair.enumerate_cosets(&ginv, Side::Left)?.reps;
    let norm_bound = pair.enumerate_gamma_cosets(g, Side::Left)?.len();
    let c_num = pair.sigma_double_coset_size(g)?;
    let c_den = pair.sigma_double_coset_size(&ginv)?;
    let c = QI::from_frac(c_num as i64, c_den as i64);

    let sigma = pair.sigma_generators();
    let hq = subgroup_invariants(rep, sigma, q as isize)?;
    let hq1 = subgroup_invariants(rep, sigma, q as isize - 1)?;
    let domain = hq1.orthogonal_complement_in(&hq);
    let sigma_g = pair.sigma_g_elements(g)?;
    let sigma_ginv = pair.sigma_g_elements(&ginv)?;
    let out_mod = subgroup_invariants(rep, &sigma_g, q as isize - 1)?;
    let out_mod_inv = subgroup_invariants(rep, &sigma_ginv, q as isize - 1)?;
    let index = pair.sigma_index();
    let t = |v: &Vector| {
        let w = hecke_sum(&reps, index, rep, v);
        vec_sub(&w, &out_mod.project(&w))
    };
    let t_inv = |v: &Vector| {
        let w = hecke_sum(&reps_inv, index, rep, v);
        vec_sub(&w, &out_mod_inv.project(&w))
    };

    let basis = domain.basis();
    let images: Vec<Vector> = basis.iter().map(t).collect();
    let images_inv: Vec<Vector> = basis.iter().map(t_inv).collect();
    let mut residual = 0.0f64;
    let mut exact = true;
    for (i, v) in basis.iter().enumerate() {
        for (j, w) in basis.iter().enumerate() {
            let lhs = hermitian(&images[i], w);
            let rhs = &c * &hermitian(v, &images_inv[j]);
            let diff = &lhs - &rhs;
            exact &= diff.is_zero();
            residual = residual.max(diff.to_c64().norm());
        }
    }

    let operator_norm = if basis.is_empty() {
        0.0
    } else {
        let onb = orthonormal(basis);
        let dim = rep.dim();
        // Columns: images of an orthonormal basis of the domain, in ambient coordinates.
        let mut m = DMatrix::<Complex64>::zeros(dim, onb.len());
        let act: Vec<Matrix> = reps.iter().map(|h| rep.act(h)).collect();
        let proj_basis = orthonormal(out_mod.basis());
        for (col, e) in onb.iter().enumerate() {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            for a in &act {
                for r in 0..dim {
                    for k in 0..dim {
                        w[r] += a[(r, k)].to_c64() * e[k];
                    }
                }
            }
            for x in w.iter_mut() {
                *x /= index as f64;
            }
            for p in &proj_basis {
                let coef: Complex64 = p.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, pi) in w.iter_mut().zip(p) {
                    *wi -= coef * pi;
                }
            }
            for r in 0..dim {
                m[(r, col)] = w[r];
            }
        }
        m.singular_values().max()
    };

    let symmetric = reps_inv.iter().all(|h| reps.iter().any(|r| pair.in_sigma(&u.mul(&u.inv(r), h))))
        && reps_inv.len() == reps.len();
    let self_adjoint = symmetric.then(|| {
        basis.iter().enumerate().all(|(i, v)| {
            basis.iter().enumerate().all(|(j, w)| hermitian(&images[i], w) == hermitian(v, &images[j]))
        })
    });
    Ok(UnitaryReport {
        order: q,
        quotient_dim: basis.len(),
        operator_norm,
        norm_bound,
        norm_slack: norm_bound as f64 - operator_norm,
        adjoint_constant: c.to_string(),
        adjoint_residual: residual,
        adjoint_exact: exact,
        symmetric_double_coset: symmetric,
        self_adjoint,
    })
}
