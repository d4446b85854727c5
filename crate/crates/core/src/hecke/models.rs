//! Concrete Hecke pairs: `SL_2(Z)` inside `GL_2(Q)`, finite permutation
//! models, the affine group acting on polynomials, and the p-adic affine
//! example.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::operator::Representation;
use super::pair::{HeckePair, Side};
use crate::error::{Error, Result};
use crate::group::{closure, padic_valuation, Affine, AffineRational, Gl2, Gl2Rational, Perm, Permutations};
use crate::linalg::Matrix;
use crate::scalar::QI;

/// `Γ = SL_2(Z)` with `Σ = Γ(level) = {γ ≡ I mod level}`.
pub fn sl2z_pair(level: u64) -> Result<HeckePair<Gl2Rational>> {
    if level == 0 {
        return Err(Error::input("level must be positive"));
    }
    let gens = vec![Gl2::new(0, -1, 1, 0), Gl2::new(1, 1, 0, 1)];
    HeckePair::new(
        Gl2Rational,
        Arc::new(Gl2::in_sl2z),
        gens,
        Arc::new(move |g: &Gl2| g.in_sl2z() && g.congruent_identity(level)),
        format!("Γ({level})"),
    )
}

/// Every group element acts as the identity.
#[derive(Clone, Copy, Debug)]
pub struct TrivialRep {
    pub dim: usize,
}

impl<E> Representation<E> for TrivialRep {
    fn dim(&self) -> usize {
        self.dim
    }
    fn act(&self, _: &E) -> Matrix {
        Matrix::identity(self.dim)
    }
}

/// Permutation matrices on `Q(i)^degree`.
#[derive(Clone, Copy, Debug)]
pub struct PermutationRep {
    pub degree: usize,
}

impl Representation<Perm> for PermutationRep {
    fn dim(&self) -> usize {
        self.degree
    }
    fn act(&self, p: &Perm) -> Matrix {
        Permutations::matrix(p)
    }
}

/// `G = S_degree` with `Γ`, `Σ` generated by the given permutations (written
/// as cycle lists).
pub fn permutation_pair(
    degree: usize,
    gamma_generators: &[Vec<Vec<u8>>],
    sigma_generators: &[Vec<Vec<u8>>],
    sigma_label: &str,
) -> Result<HeckePair<Permutations>> {
    let u = Permutations { degree };
    let perm = |cycles: &Vec<Vec<u8>>| -> Result<Perm> {
        if cycles.iter().flatten().any(|&x| x as usize >= degree) {
            return Err(Error::input(format!("cycle entry out of range for degree {degree}")));
        }
        let refs: Vec<&[u8]> = cycles.iter().map(Vec::as_slice).collect();
        Ok(u.from_cycles(&refs))
    };
    let gamma_gens = gamma_generators.iter().map(perm).collect::<Result<Vec<_>>>()?;
    let sigma_gens = sigma_generators.iter().map(perm).collect::<Result<Vec<_>>>()?;
    let gamma: HashSet<Perm> = closure(&u, &gamma_gens, 100_000)?.into_iter().collect();
    let sigma: HashSet<Perm> = closure(&u, &sigma_gens, 100_000)?.into_iter().collect();
    if !sigma.is_subset(&gamma) {
        return Err(Error::input("Σ is not contained in Γ"));
    }
    let full = if degree > 1 {
        let cycle: Vec<u8> = (0..degree as u8).collect();
        closure(&u, &[u.from_cycles(&[&[0, 1]]), u.from_cycles(&[&cycle])], 1_000_000)?
    } else {
        vec![u.from_cycles(&[])]
    };
    Ok(HeckePair::new(
        u,
        Arc::new(move |p: &Perm| gamma.contains(p)),
        gamma_gens,
        Arc::new(move |p: &Perm| sigma.contains(p)),
        sigma_label,
    )?
    .with_finite_universe(full))
}

fn is_integer(r: &BigRational) -> bool {
    r.is_integer()
}

/// `Γ = Z ⋊ {±1}` inside `Q ⋊ Q^×`, with `Σ = level·Z ⋊ {1}` of index
/// `2·level`.
pub fn affine_integer_pair(level: u64) -> Result<HeckePair<AffineRational>> {
    if level == 0 {
        return Err(Error::input("level must be positive"));
    }
    let n = BigInt::from(level);
    let gamma = |a: &Affine| is_integer(&a.x) && a.y.abs().is_one();
    HeckePair::new(
        AffineRational,
        Arc::new(gamma),
        vec![Affine::ints(1, 1), Affine::ints(0, -1)],
        Arc::new(move |a: &Affine| {
            is_integer(&a.x) && a.y.is_one() && (a.x.to_integer() % &n).is_zero()
        }),
        format!("{level}Z"),
    )
}

/// `(x, y)` acts on polynomials of degree at most `degree` by
/// `p(t) ↦ p((t - x) / y)`, in the monomial basis.
#[derive(Clone, Copy, Debug)]
pub struct AffinePolynomialRep {
    pub degree: usize,
}

impl Representation<Affine> for AffinePolynomialRep {
    fn dim(&self) -> usize {
        self.degree + 1
    }
    fn act(&self, a: &Affine) -> Matrix {
        let n = self.degree + 1;
        let mut m = Matrix::zeros(n, n);
        let yinv = a.y.recip();
        let negx = -a.x.clone();
        for k in 0..n {
            let scale = num_traits::pow(yinv.clone(), k);
            let mut binom = BigInt::one();
            for i in 0..=k {
                // coefficient of t^i in ((t - x)/y)^k
                let c = BigRational::from_integer(binom.clone()) * num_traits::pow(negx.clone(), k - i) * &scale;
                m[(i, k)] = QI::real(c);
                binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
            }
        }
        m
    }
}

/// `Γ = {(x, y) : v_p(x) ≥ 0, v_p(y) = 0}` with `Σ = Γ`, generated for the
/// search by translations, the sign, and a few unit scalings.
pub fn padic_affine_pair(p: u64) -> Result<HeckePair<AffineRational>> {
    if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let mut gens = vec![Affine::ints(1, 1), Affine::ints(0, -1)];
    gens.extend([2i64, 3, 5].into_iter().filter(|&u| u as u64 != p).map(|u| Affine::ints(0, u)));
    HeckePair::with_sigma_gamma(
        AffineRational,
        Arc::new(move |a: &Affine| padic_valuation(&a.x, p).map_or(true, |v| v >= 0) && padic_valuation(&a.y, p) == Some(0)),
        gens,
    )
}

/// `(|ΓgΓ/Γ|, |Γ\ΓgΓ|)` in the p-adic affine pair.
pub fn padic_coset_counts(p: u64, g: &Affine) -> Result<(usize, usize)> {
    let pair = padic_affine_pair(p)?;
    let left = pair.enumerate_gamma_cosets(g, Side::Left)?.len();
    let right = pair.enumerate_gamma_cosets(g, Side::Right)?.len();
    Ok((left, right))
}

/// The non-unimodular example at `g = (0, p)`.
pub fn nonunimodular_example(p: u64) -> Result<(usize, usize)> {
    padic_coset_counts(p, &Affine::ints(0, p as i64))
}
