//! Hecke pairs, coset decompositions, Hecke operators on higher-invariant
//! quotients and the Hecke algebra.

mod algebra;
pub mod models;
mod operator;
mod pair;

pub use algebra::{algebra_elements_equal, as_function, convolve_on_group, hecke_convolve, HeckeAlgebraElement};
pub use operator::{
    hecke_apply, hecke_apply_with_reps, hecke_sum, restrict_class, restriction_diagram_commutes, subgroup_invariants,
    unitary_model_checks, HeckeClass, Representation, UnitaryReport,
};
pub use pair::{congruence_lattice_check, CosetDecomposition, HeckePair, Membership, Side, DEFAULT_COSET_CAP};

#[cfg(test)]
mod tests {
    use super::models::*;
    use super::*;
    use crate::group::{Affine, AffineRational, Gl2, GroupUniverse, Permutations};
    use crate::linalg::vec_sub;
    use crate::scalar::QI;
    use crate::Error;

    fn diag(a: i64, d: i64) -> Gl2 {
        Gl2::new(a, 0, 0, d)
    }

    #[test]
    fn sl2z_coset_counts() {
        let pair = sl2z_pair(1).unwrap();
        for p in [2, 3, 5] {
            let g = diag(1, p);
            assert_eq!(pair.enumerate_cosets(&g, Side::Left).unwrap().len(), p as usize + 1);
            assert_eq!(pair.enumerate_cosets(&g, Side::Right).unwrap().len(), p as usize + 1);
        }
        let t = Gl2::new(1, 1, 0, 1);
        let dec = pair.enumerate_cosets(&t, Side::Left).unwrap();
        assert_eq!(dec.reps, vec![t]);
    }

    #[test]
    fn level_two_transversal() {
        let pair = sl2z_pair(2).unwrap();
        assert_eq!(pair.sigma_index(), 6);
        assert!(pair.sigma_generators().iter().all(|g| g.congruent_identity(2)));
        assert_eq!(sl2z_pair(3).unwrap().sigma_index(), 24);
    }

    #[test]
    fn gamma_g_membership() {
        let pair = sl2z_pair(1).unwrap();
        let g = diag(1, 2);
        assert!(!pair.gamma_g_contains(&g, &Gl2::new(1, 1, 0, 1)).unwrap());
        assert!(pair.gamma_g_contains(&g, &Gl2::new(-1, 0, 0, -1)).unwrap());
        assert!(pair.gamma_g_contains(&g, &Gl2::new(3, 2, 4, 3)).unwrap());
        assert!(pair.gamma_g_contains(&g, &Gl2::new(1, 2, 0, 1)).unwrap());
        assert!(matches!(pair.gamma_g_contains(&g, &diag(1, 2)), Err(Error::Input(_))));
    }

    #[test]
    fn coset_cap_fails_loudly() {
        let pair = sl2z_pair(1).unwrap().with_cap(3);
        assert!(matches!(pair.enumerate_cosets(&diag(1, 5), Side::Left), Err(Error::CosetCap { cap: 3 })));
    }

    #[test]
    fn trivial_module_eigenvalue() {
        let pair = sl2z_pair(1).unwrap();
        let rep = TrivialRep { dim: 1 };
        for p in [2i64, 3, 5] {
            let class = HeckeClass::new(&pair, &rep, 0, vec![QI::one()]).unwrap();
            let target = sl2z_pair(p as u64).unwrap().sigma_generators().to_vec();
            let out = hecke_apply(&pair, &rep, &class, &diag(1, p), &target).unwrap();
            assert_eq!(out.representative, vec![QI::from_int(p + 1)]);
        }
        let class = HeckeClass::new(&pair, &rep, 2, vec![QI::from_int(7)]).unwrap();
        let out = hecke_apply(&pair, &rep, &class, &Gl2::new(0, -1, 1, 0), pair.sigma_generators()).unwrap();
        assert_eq!(out.representative, class.representative);
    }

    #[test]
    fn affine_polynomial_filtration() {
        let pair = affine_integer_pair(2).unwrap();
        assert_eq!(pair.sigma_index(), 4);
        let rep = AffinePolynomialRep { degree: 3 };
        for q in 0..=3 {
            assert_eq!(subgroup_invariants(&rep, pair.sigma_generators(), q).unwrap().dim(), q as usize + 1);
        }
        let u = AffineRational;
        let a = Affine::ints(3, -2);
        let b = Affine::ints(-1, 5);
        assert_eq!(rep.act(&u.mul(&a, &b)), rep.act(&a).mul(&rep.act(&b)));
    }

    #[test]
    fn affine_hecke_is_representative_independent() {
        let pair = affine_integer_pair(2).unwrap();
        let rep = AffinePolynomialRep { degree: 3 };
        let g = Affine::ints(0, 3);
        let reps = pair.enumerate_cosets(&g, Side::Left).unwrap().reps;
        assert_eq!(reps.len(), 12);
        let target = [Affine::ints(6, 1)];
        assert!(pair.sigma_g_contains(&g, &target[0]).unwrap());
        assert!(!pair.sigma_g_contains(&g, &Affine::ints(2, 1)).unwrap());
        let v: Vec<QI> = [1, -2, 5, 0].into_iter().map(QI::from_int).collect();
        let class = HeckeClass::new(&pair, &rep, 2, v).unwrap();
        let base = hecke_apply(&pair, &rep, &class, &g, &target).unwrap();
        let u = AffineRational;
        let shifted: Vec<Affine> = reps.iter().enumerate().map(|(j, h)| u.mul(h, &Affine::ints(2 * j as i64 - 4, 1))).collect();
        let moved = hecke_apply_with_reps(&pair, &rep, &class, &shifted, &target).unwrap();
        let diff = vec_sub(&moved.representative, &base.representative);
        assert!(diff.iter().any(|x| !x.is_zero()));
        assert!(base.modulus.contains(&diff));
    }

    #[test]
    fn affine_restriction_diagram() {
        let coarse = affine_integer_pair(2).unwrap();
        let finer = affine_integer_pair(4).unwrap();
        let rep = AffinePolynomialRep { degree: 3 };
        let v: Vec<QI> = [0, 1, 1, 0].into_iter().map(QI::from_int).collect();
        let class = HeckeClass::new(&coarse, &rep, 2, v).unwrap();
        let g = Affine::ints(0, 3);
        assert!(restriction_diagram_commutes(&class, &coarse, &finer, &rep, &g, &[Affine::ints(12, 1)]).unwrap());
        let same = restrict_class(&class, &coarse, &coarse, &rep).unwrap();
        assert_eq!(same.modulus, class.modulus);
        assert!(restrict_class(&class, &finer, &coarse, &rep).is_err());
    }

    fn s4_pair() -> HeckePair<Permutations> {
        permutation_pair(4, &[vec![vec![0, 1]], vec![vec![0, 1, 2]]], &[vec![vec![0, 1, 2]]], "A3").unwrap()
    }

    #[test]
    fn finite_permutation_pair() {
        let pair = s4_pair();
        assert_eq!(pair.sigma_index(), 2);
        let u = Permutations { degree: 4 };
        let g = u.from_cycles(&[&[0, 3]]);
        let rep = PermutationRep { degree: 4 };
        assert_eq!(pair.enumerate_gamma_cosets(&g, Side::Left).unwrap().len(), 3);
        let v: Vec<QI> = [1, 1, 1, 0].into_iter().map(QI::from_int).collect();
        let class = HeckeClass::new(&pair, &rep, 0, v).unwrap();
        let target = pair.sigma_g_elements(&g).unwrap();
        let out = hecke_apply(&pair, &rep, &class, &g, &target).unwrap();
        assert!(out.modulus.dim() == 0);
        let report = unitary_model_checks(&pair, &rep, &g, 0).unwrap();
        assert!(report.operator_norm <= report.norm_bound as f64 + 1e-12);
        assert!(report.adjoint_exact);
        assert_eq!(report.self_adjoint, Some(true));
        let vacuous = unitary_model_checks(&pair, &rep, &g, 1).unwrap();
        assert_eq!(vacuous.quotient_dim, 0);
        assert!(congruence_lattice_check(&pair, &g, &u.from_cycles(&[&[1, 3]])).unwrap());
    }

    #[test]
    fn identity_double_coset_is_trivial() {
        let pair = s4_pair();
        let rep = PermutationRep { degree: 4 };
        let id = Permutations { degree: 4 }.from_cycles(&[]);
        let r = unitary_model_checks(&pair, &rep, &id, 0).unwrap();
        assert_eq!(r.norm_bound, 1);
        assert!((r.operator_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonunimodular_counts() {
        assert_eq!(nonunimodular_example(2).unwrap(), (2, 1));
        assert_eq!(nonunimodular_example(5).unwrap(), (5, 1));
        assert_eq!(padic_coset_counts(3, &Affine::ints(0, 1)).unwrap(), (1, 1));
        assert!(nonunimodular_example(4).is_err());
    }

    #[test]
    fn hecke_algebra_unit_and_oracle() {
        let pair = permutation_pair(4, &[vec![vec![0, 1]], vec![vec![0, 1, 2]]], &[vec![vec![0, 1]], vec![vec![0, 1, 2]]], "S3").unwrap();
        let u = Permutations { degree: 4 };
        let id = u.from_cycles(&[]);
        let g = u.from_cycles(&[&[0, 3]]);
        let one = HeckeAlgebraElement::basis(id);
        let tg = HeckeAlgebraElement::basis(g.clone());
        let prod = hecke_convolve(&one, &tg, &pair).unwrap();
        assert!(algebra_elements_equal(&prod, &tg, &pair).unwrap());
        let sq = hecke_convolve(&tg, &tg, &pair).unwrap();
        let els = pair.finite_elements().unwrap();
        let f = as_function(&tg, &pair).unwrap();
        let oracle = convolve_on_group(&u, els, 6, &f, &f);
        assert_eq!(as_function(&sq, &pair).unwrap(), oracle);
    }
}
