//! Higher invariants `H_q = {v : I^{q+1} v = 0}` of matrix group actions.
//!
//! The production path works from generators only: `v ∈ H_q` iff
//! `(g - 1) v ∈ H_{q-1}` for every generator `g`, which is enough because the
//! augmentation ideal is two-sided and so each `H_q` is stable under the group.
//! [`ideal_power_annihilator`] is a brute-force oracle that builds the image
//! of `I^{q+1}` from every group element.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{closure, is_perfect, MatrixGroup};
use crate::linalg::{vec_sub, EchelonBuilder, Matrix, Subspace, Vector};
use crate::scalar::QI;

pub const DEFAULT_Q_MAX: usize = 4;
const ENUMERATION_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "finite")]
    Finite,
    #[serde(rename = "fg-infinite")]
    FinitelyGeneratedInfinite,
}

/// A group given by invertible generator matrices acting on `Q(i)^dim`.
#[derive(Clone, Debug)]
pub struct MatrixModule {
    dim: usize,
    generators: Vec<(String, Matrix)>,
    group_kind: GroupKind,
    q_max: usize,
    elements: Option<Vec<Matrix>>,
}

impl MatrixModule {
    pub fn new(dim: usize, generators: Vec<(String, Matrix)>, group_kind: GroupKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("module dimension must be positive"));
        }
        for (name, g) in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::input(format!("generator {name} is not {dim}x{dim}")));
            }
            if g.rank() != dim {
                return Err(Error::input(format!("generator {name} is not invertible")));
            }
        }
        let elements = match group_kind {
            GroupKind::Finite => {
                let mats: Vec<Matrix> = generators.iter().map(|(_, g)| g.clone()).collect();
                Some(closure(&MatrixGroup { dim }, &mats, ENUMERATION_CAP)?)
            }
            GroupKind::FinitelyGeneratedInfinite => None,
        };
        Ok(MatrixModule { dim, generators, group_kind, q_max: DEFAULT_Q_MAX, elements })
    }

    pub fn finite(dim: usize, generators: Vec<(String, Matrix)>) -> Result<Self> {
        Self::new(dim, generators, GroupKind::Finite)
    }

    pub fn infinite(dim: usize, generators: Vec<(String, Matrix)>) -> Result<Self> {
        Self::new(dim, generators, GroupKind::FinitelyGeneratedInfinite)
    }

    /// Module for a finite group whose full element list is already known.
    pub fn from_elements(dim: usize, generators: Vec<(String, Matrix)>, elements: Vec<Matrix>) -> Result<Self> {
        let mut m = Self::new(dim, generators, GroupKind::FinitelyGeneratedInfinite)?;
        m.group_kind = GroupKind::Finite;
        m.elements = Some(elements);
        Ok(m)
    }

    pub fn with_q_max(mut self, q_max: usize) -> Self {
        self.q_max = q_max;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[(String, Matrix)] {
        &self.generators
    }

    pub fn group_kind(&self) -> GroupKind {
        self.group_kind
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Full element list for finite groups.
    pub fn elements(&self) -> Option<&[Matrix]> {
        self.elements.as_deref()
    }

    pub fn direct_sum(&self, other: &MatrixModule) -> Result<MatrixModule> {
        if self.generators.len() != other.generators.len() {
            return Err(Error::input("direct sum needs matching generator lists"));
        }
        let n = self.dim + other.dim;
        let gens = self
            .generators
            .iter()
            .zip(&other.generators)
            .map(|((name, a), (_, b))| {
                let mut m = Matrix::zeros(n, n);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                (name.clone(), m)
            })
            .collect();
        MatrixModule::new(n, gens, self.group_kind.max_kind(other.group_kind))
    }

    /// Conjugate every generator by `p`: the same abstract module in the basis
    /// given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<MatrixModule> {
        let pinv = p.inverse().ok_or_else(|| Error::input("change of basis must be invertible"))?;
        let gens = self.generators.iter().map(|(n, g)| (n.clone(), pinv.mul(g).mul(p))).collect();
        MatrixModule::new(self.dim, gens, self.group_kind)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ModuleJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("module JSON: {e}")))?;
        let mut gens = Vec::new();
        for (name, rows) in raw.generators {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.parse::<QI>()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            gens.push((name, Matrix::from_rows(rows)?));
        }
        MatrixModule::new(raw.dim, gens, raw.group_kind)
    }

    pub fn to_json(&self) -> String {
        let raw = ModuleJson {
            dim: self.dim,
            generators: self
                .generators
                .iter()
                .map(|(n, g)| (n.clone(), g.to_rows().iter().map(|r| r.iter().map(QI::to_string).collect()).collect()))
                .collect(),
            group_kind: self.group_kind,
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

impl GroupKind {
    fn max_kind(self, other: GroupKind) -> GroupKind {
        if self == GroupKind::Finite && other == GroupKind::Finite {
            GroupKind::Finite
        } else {
            GroupKind::FinitelyGeneratedInfinite
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    dim: usize,
    generators: BTreeMap<String, Vec<Vec<String>>>,
    group_kind: GroupKind,
}

fn check_order(module: &MatrixModule, q: usize) -> Result<()> {
    if q > module.q_max {
        return Err(Error::input(format!("order {q} exceeds q_max = {}", module.q_max)));
    }
    Ok(())
}

/// The filtration `[H_0, .., H_q]`.
pub fn invariant_filtration(module: &MatrixModule, q: usize) -> Result<Vec<Subspace>> {
    check_order(module, q)?;
    let steps: Vec<Matrix> = module.generators.iter().map(|(_, g)| g.minus_identity()).collect();
    let mut prev = Subspace::zero(module.dim);
    let mut out = Vec::with_capacity(q + 1);
    for _ in 0..=q {
        let next = if steps.is_empty() {
            Subspace::full(module.dim)
        } else {
            let c = prev.constraints();
            if c.rows() == 0 {
                Subspace::full(module.dim)
            } else {
                let blocks: Vec<Matrix> = steps.iter().map(|s| c.mul(s)).collect();
                Matrix::vstack(&blocks).kernel()
            }
        };
        out.push(next.clone());
        prev = next;
    }
    Ok(out)
}

/// `H^0_q(Γ, V)`.
pub fn higher_invariants(module: &MatrixModule, q: usize) -> Result<Subspace> {
    Ok(invariant_filtration(module, q)?.pop().expect("nonempty filtration"))
}

/// `H_{q-1}` with the convention `H_{-1} = 0`.
pub fn lower_invariants(module: &MatrixModule, q: usize) -> Result<Subspace> {
    if q == 0 {
        Ok(Subspace::zero(module.dim))
    } else {
        higher_invariants(module, q - 1)
    }
}

fn flatten(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

fn unflatten(v: &[QI], n: usize) -> Matrix {
    Matrix::from_rows(v.chunks(n).map(<[QI]>::to_vec).collect()).expect("square")
}

/// Kernel of the image of `I^{q+1}` in `End(V)`, built from all products
/// `(γ_1 - 1)…(γ_{q+1} - 1)` over the full element list.
pub fn ideal_power_annihilator(module: &MatrixModule, q: usize) -> Result<Subspace> {
    Ok(ideal_power_chain(module, q)?.pop().expect("nonempty chain"))
}

/// Annihilators of `I^1, …, I^{q+1}`, sharing the products between orders.
pub fn ideal_power_chain(module: &MatrixModule, q: usize) -> Result<Vec<Subspace>> {
    check_order(module, q)?;
    let elements = module
        .elements()
        .ok_or_else(|| Error::Unsupported("ideal-power oracle needs an enumerable finite group".into()))?;
    let n = module.dim;
    let steps: Vec<Matrix> = elements.iter().map(Matrix::minus_identity).collect();
    let annihilator = |span: &EchelonBuilder| -> Subspace {
        if span.is_empty() {
            return Subspace::full(n);
        }
        let blocks: Vec<Matrix> = span.vectors().map(|v| unflatten(v, n)).collect();
        Matrix::vstack(&blocks).kernel()
    };
    let mut span = EchelonBuilder::new();
    for s in &steps {
        span.insert(flatten(s));
    }
    let mut out = vec![annihilator(&span)];
    while out.len() <= q {
        let basis: Vec<Matrix> = span.vectors().map(|v| unflatten(v, n)).collect();
        let mut next = EchelonBuilder::new();
        for s in &steps {
            for m in &basis {
                next.insert(flatten(&s.mul(m)));
            }
        }
        // I^{k+1} ⊆ I^k, so equal dimension means the chain has stabilised.
        if next.len() == span.len() {
            let last = out.last().expect("nonempty").clone();
            out.resize(q + 1, last);
            break;
        }
        span = next;
        out.push(annihilator(&span));
    }
    Ok(out)
}

/// `γ ↦ (γ - 1) v` viewed in `H_{q-1} / H_{q-2}`.
#[derive(Clone, Debug)]
pub struct LoweringMap {
    pub source_order: usize,
    pub images: Vec<(String, Vector)>,
    /// `H_{q-2}`; images are taken modulo this subspace.
    pub modulus: Subspace,
    vector: Vector,
}

impl LoweringMap {
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|(_, w)| self.modulus.contains(w))
    }

    /// Image of an arbitrary group element given by its matrix.
    pub fn image_of(&self, gamma: &Matrix) -> Vector {
        vec_sub(&gamma.mul_vec(&self.vector), &self.vector)
    }

    /// Two images agree in the quotient.
    pub fn congruent(&self, a: &[QI], b: &[QI]) -> bool {
        self.modulus.contains(&vec_sub(a, b))
    }
}

pub fn order_lowering(v: &[QI], module: &MatrixModule, q: usize) -> Result<LoweringMap> {
    if v.len() != module.dim {
        return Err(Error::input("vector has the wrong length"));
    }
    let filt = invariant_filtration(module, q)?;
    if !filt[q].contains(v) {
        return Err(Error::input(format!("vector is not in H_{q}")));
    }
    let target = if q == 0 { Subspace::zero(module.dim) } else { filt[q - 1].clone() };
    let modulus = if q <= 1 { Subspace::zero(module.dim) } else { filt[q - 2].clone() };
    let mut images = Vec::new();
    for (name, g) in &module.generators {
        let w = vec_sub(&g.mul_vec(v), v);
        debug_assert!(target.contains(&w));
        images.push((name.clone(), w));
    }
    Ok(LoweringMap { source_order: q, images, modulus, vector: v.to_vec() })
}

pub fn is_unitary_exact(m: &Matrix) -> bool {
    m.conj_transpose().mul(m) == Matrix::identity(m.rows())
}

/// `M* M = I` entrywise within `tol`.
pub fn is_unitary_f64(m: &[Vec<Complex64>], tol: f64) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let s: Complex64 = (0..n).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            (s - target).norm() <= tol
        })
    })
}

pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// For a finite group acting unitarily, checks `H_q = H_0` for `q = 1, 2, 3`.
pub fn no_higher_invariants_unitary_check(module: &MatrixModule) -> Result<bool> {
    if module.group_kind != GroupKind::Finite {
        return Err(Error::Precondition("group must be finite".into()));
    }
    if let Some((name, _)) = module.generators.iter().find(|(_, g)| !is_unitary_exact(g)) {
        return Err(Error::Precondition(format!("generator {name} is not unitary")));
    }
    let q = 3.min(module.q_max);
    let filt = invariant_filtration(module, q)?;
    Ok(filt.iter().all(|h| h == &filt[0]))
}

/// Perfectness of the acting finite group, by enumeration.
pub fn module_group_is_perfect(module: &MatrixModule) -> Result<bool> {
    let els = module.elements().ok_or_else(|| Error::Unsupported("needs an enumerable finite group".into()))?;
    is_perfect(&MatrixGroup { dim: module.dim }, els)
}
