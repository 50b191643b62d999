use messep_lab::error::Error;
use messep_lab::partitions::{enumerate_partitions, DoubleHook, Hook, Partition};
use messep_lab::symmetric::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn p(v: &[usize]) -> Partition {
    Partition::new(v).unwrap()
}

// h_k by summing all monomials of degree k
fn complete(k: i64, z: &[Complex64]) -> Complex64 {
    if k < 0 {
        return Complex64::new(0.0, 0.0);
    }
    fn rec(k: usize, z: &[Complex64]) -> Complex64 {
        match z.split_first() {
            None => Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0),
            Some((&x, rest)) => (0..=k).map(|e| x.powu(e as u32) * rec(k - e, rest)).sum(),
        }
    }
    rec(k as usize, z)
}

// Jacobi-Trudi det(h_{λ_i - i + j})
fn jacobi_trudi(lambda: &Partition, z: &[Complex64]) -> Complex64 {
    let l = lambda.len();
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let m = DMatrix::from_fn(l, l, |i, j| complete(lambda.part(i) as i64 - i as i64 + j as i64, z));
    m.determinant()
}

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..2.0 * PI, n)
}

fn sites(ring: usize, n: usize) -> impl Strategy<Value = Vec<i64>> {
    Just((0..ring as i64).collect::<Vec<_>>()).prop_shuffle().prop_map(move |mut v| {
        v.truncate(n);
        v.sort_unstable();
        v
    })
}

#[test]
fn frozen_small_values() {
    let ones = RootTuple::unchecked(vec![Complex64::new(1.0, 0.0); 3]);
    assert_eq!(schur_tableau(&p(&[2, 1]), &ones), Complex64::new(8.0, 0.0));
    assert_eq!(schur_dimension(&p(&[2, 1]), 3), 8.0);
    assert_eq!(schur_dimension(&p(&[2, 2]), 3), 6.0);
    assert_eq!(schur_dimension(&p(&[1, 1, 1, 1]), 3), 0.0);
    // s_(1,1)(1, i, -1) = e_2 = i - 1 - i = -1
    let z = RootTuple::from_sites(&[0, 1, 2], 4);
    assert!((schur_eval(&p(&[1, 1]), &z).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    assert!((elementary_eval(2, &z) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    assert!((power_sum_eval(0, &z) - Complex64::new(3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn coincident_points_fall_back_to_tableaux() {
    let ones = RootTuple::from_sites(&[0, 0, 0], 5);
    for lambda in enumerate_partitions(6) {
        let v = schur_eval(&lambda, &ones).unwrap();
        assert!((v.re - schur_dimension(&lambda, 3)).abs() < 1e-9 && v.im.abs() < 1e-9);
    }
    let big = p(&[5, 4]);
    assert!(matches!(schur_eval(&big, &ones), Err(Error::DegenerateEvaluation(_))));
}

#[test]
fn long_partitions_vanish() {
    let z = RootTuple::from_sites(&[0, 3], 7);
    assert_eq!(schur_eval(&p(&[1, 1, 1]), &z).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn skew_hook_outside_outer_is_zero() {
    let z = RootTuple::from_sites(&[0, 2, 5], 11);
    // {3|0} = (3) does not contain {2|1} = (1,1)
    let v = skew_hook_eval(Hook::new(3, 0).unwrap(), SkewInner::Hook { m: 2, i: 1 }, &z).unwrap();
    assert_eq!(v, Complex64::new(0.0, 0.0));
    // {3|1}∖{1|0} = s_(1,1) + s_(2)
    let v = skew_hook_eval(Hook::new(3, 1).unwrap(), SkewInner::Hook { m: 1, i: 0 }, &z).unwrap();
    let expect = schur_eval(&p(&[1, 1]), &z).unwrap() + schur_eval(&p(&[2]), &z).unwrap();
    assert!((v - expect).norm() < 1e-12);
}

#[test]
fn identities_reject_bad_inputs() {
    let z = RootTuple::from_angles(&[0.1, 0.7]);
    assert!(conj_hook_identity(2, 0, &z, 9).is_err());
    let r = RootTuple::from_sites(&[0, 1], 9);
    assert!(conj_hook_identity(9, 0, &r, 9).is_err());
    assert!(double_hook_expansion(4, &r, 9).is_err());
    assert!(hook_expansion_check(0, &r).is_err());
    assert!(RootTuple::new(vec![Complex64::new(2.0, 0.0)]).is_err());
}

proptest! {
    #[test]
    fn schur_matches_jacobi_trudi(x in angles(4), idx in 0usize..30) {
        let z = RootTuple::from_angles(&x);
        let all: Vec<Partition> = (1..=5).flat_map(enumerate_partitions).filter(|l| l.len() <= 4).collect();
        let lambda = &all[idx % all.len()];
        let oracle = jacobi_trudi(lambda, z.points());
        prop_assert!((schur_tableau(lambda, &z) - oracle).norm() < 1e-9);
        if z.vandermonde().norm() > 1e-4 {
            prop_assert!((schur_eval(lambda, &z).unwrap() - oracle).norm() < 1e-7);
        }
    }

    #[test]
    fn pieri_rule_for_p1(x in angles(3), idx in 0usize..20) {
        let z = RootTuple::from_angles(&x);
        let all: Vec<Partition> = (0..=4).flat_map(enumerate_partitions).filter(|l| l.len() <= 3).collect();
        let lambda = &all[idx % all.len()];
        let mut rhs = Complex64::new(0.0, 0.0);
        for mu in enumerate_partitions(lambda.weight() + 1) {
            if mu.contains(lambda) {
                rhs += schur_tableau(&mu, &z);
            }
        }
        let lhs = power_sum_eval(1, &z) * schur_tableau(lambda, &z);
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn power_sums_are_alternating_hook_sums(x in angles(4), n in 1usize..7) {
        let z = RootTuple::from_angles(&x);
        prop_assume!(z.vandermonde().norm() > 1e-4);
        prop_assert!(hook_expansion_check(n, &z).unwrap() < 1e-8);
    }

    #[test]
    fn conjugate_hook_on_roots(s in sites(14, 4), n in 1usize..6, k in 0usize..6) {
        prop_assume!(k < n);
        let z = RootTuple::from_sites(&s, 14);
        prop_assert!(conj_hook_identity(n, k, &z, 14).unwrap() < 1e-9);
    }

    #[test]
    fn double_hook_expansion_on_roots(s in sites(16, 5), n in 1usize..6) {
        let z = RootTuple::from_sites(&s, 16);
        prop_assume!(16 >= 2 * n + 5);
        prop_assert!(double_hook_expansion(n, &z, 16).unwrap() < 1e-9);
    }

    #[test]
    fn skew_form_of_genuine_double_hooks(s in sites(16, 4), n in 1usize..6, k in 0usize..6, l in 0usize..6) {
        prop_assume!(k < n && l < n);
        let z = RootTuple::from_sites(&s, 16);
        let h = DoubleHook::new(n, k, l).unwrap();
        if let Some(lambda) = h.partition(16, 4) {
            let direct = schur_eval(&lambda, &z).unwrap();
            prop_assert!((direct - double_hook_via_skew(h, &z).unwrap()).norm() < 1e-9);
            prop_assert!((direct - double_hook_eval(h, &z, 16).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_bounded_by_dimension(x in angles(3), idx in 0usize..20) {
        let z = RootTuple::from_angles(&x);
        let all: Vec<Partition> = (1..=5).flat_map(enumerate_partitions).filter(|l| l.len() <= 3).collect();
        let lambda = &all[idx % all.len()];
        prop_assert!(schur_tableau(lambda, &z).norm() <= schur_dimension(lambda, 3) + 1e-9);
    }
}
