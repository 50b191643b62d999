use messep_lab::error::Error;
use messep_lab::messep::*;
use messep_lab::partitions::{box_partitions, DoubleHook, Hook};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn lp(l: usize, n: usize) -> LatticeParams {
    LatticeParams::new(l, n).unwrap()
}

fn lattice() -> impl Strategy<Value = LatticeParams> {
    (3usize..=9).prop_flat_map(|l| (Just(l), 1..l)).prop_map(|(l, n)| lp(l, n))
}

// number of collision-free walks of n steps from `sites`, each step moving
// one of the N particles by ±1
fn count_walks(sites: &[i64], ring: i64, n: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut total = 0;
    for i in 0..sites.len() {
        for d in [-1, 1] {
            let t = (sites[i] + d).rem_euclid(ring);
            if sites.contains(&t) {
                continue;
            }
            let mut next = sites.to_vec();
            next[i] = t;
            total += count_walks(&next, ring, n - 1);
        }
    }
    total
}

#[test]
fn small_lattices_frozen() {
    assert_eq!(SpectralKernel::new(lp(6, 2)).unwrap().len(), 15);
    let k = SpectralKernel::new(lp(4, 1)).unwrap();
    let mut ev = k.eigenvalues.clone();
    ev.sort_by(f64::total_cmp);
    for (a, b) in ev.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    assert!((lp(4, 1).rho() - 2.0).abs() < 1e-14);
    assert!((spectral_gap(&lp(8, 4)) - (1.0 - (PI / 4.0).cos())).abs() < 1e-14);
    assert_eq!(binomial(20, 10), 184_756);
}

#[test]
fn perron_data_by_power_iteration() {
    for (l, n) in [(7, 3), (8, 4), (9, 2)] {
        let params = lp(l, n);
        let a = adjacency_matrix(&params).unwrap();
        let mut v = nalgebra::DVector::from_element(a.nrows(), 1.0);
        let mut lambda = 0.0;
        for _ in 0..3000 {
            // shifted to separate the top eigenvalue from the bottom one
            let w = &a * &v + &v * (2.0 * n as f64);
            lambda = w.norm() / v.norm() - 2.0 * n as f64;
            v = w.normalize();
        }
        assert!((lambda - params.rho()).abs() < 1e-9, "L={l} N={n}");
        let configs = enumerate_configurations(&params);
        let psi: Vec<f64> = configs.iter().map(|c| params.psi(c)).collect();
        let norm = psi.iter().map(|p| p * p).sum::<f64>().sqrt();
        for (vi, pi) in v.iter().zip(&psi) {
            assert!((vi - pi / norm).abs() < 1e-8);
        }
        assert!((norm - 1.0).abs() < 1e-10, "ψ is normalised in ℓ²");
    }
}

#[test]
fn direct_spectrum_matches_labels() {
    let params = lp(8, 3);
    let k = SpectralKernel::new(params).unwrap();
    let mut direct: Vec<f64> = SymmetricEigen::new(adjacency_matrix(&params).unwrap()).eigenvalues.iter().map(|v| v / k.rho).collect();
    let mut labels = k.eigenvalues.clone();
    direct.sort_by(f64::total_cmp);
    labels.sort_by(f64::total_cmp);
    for (a, b) in direct.iter().zip(&labels) {
        assert!((a - b).abs() < 1e-10);
    }
    // the gap is one minus the second largest eigenvalue
    assert!((1.0 - labels[labels.len() - 2] - spectral_gap(&params)).abs() < 1e-12);
}

#[test]
fn hook_eigenvalues_on_large_ring() {
    let params = lp(20, 10);
    for n in 1..=6 {
        for k in 0..n {
            let lambda = Hook::new(n, k).unwrap().partition();
            let direct = eigenvalue_of(&lambda, &params).unwrap();
            assert!((hook_eigenvalue(n, k, &params).unwrap() - direct).abs() < 1e-12);
            for l in 0..n {
                let h = DoubleHook::new(n, k, l).unwrap();
                if let Some(lambda) = h.partition(20, 10) {
                    let direct = eigenvalue_of(&lambda, &params).unwrap();
                    assert!((double_hook_eigenvalue(n, k, l, &params).unwrap() - direct).abs() < 1e-12);
                }
            }
        }
    }
    // {6|0,5} = (10,7,1^3) is a box partition, {6|0,0} is not
    assert!(double_hook_eigenvalue(6, 0, 5, &params).is_ok());
    assert!(double_hook_eigenvalue(6, 0, 0, &params).is_err());
}

#[test]
fn spectral_semigroup_matches_matrix_powers() {
    let params = lp(7, 3);
    let k = SpectralKernel::new(params).unwrap();
    let f: Vec<Complex64> = (0..k.len()).map(|i| Complex64::new((i as f64).sin(), (i * i % 5) as f64)).collect();
    for steps in [0u64, 1, 3, 17] {
        let direct = k.apply_power(&f, steps as usize);
        for (i, c) in k.configs.iter().enumerate().step_by(5) {
            let s = semigroup_apply(&k, &f, steps, c).unwrap();
            assert!((s - direct[i]).norm() < 1e-10, "steps {steps}");
        }
    }
    assert!(semigroup_apply(&k, &f[1..], 2, &k.configs[0]).is_err());
}

#[test]
fn survival_counts_collision_free_walks() {
    let params = lp(6, 2);
    let xi = Configuration::new(vec![0, 2], 6).unwrap();
    for n in 0..6 {
        let expect = count_walks(&[0, 2], 6, n) as f64 / 4f64.powi(n as i32);
        assert!((survival_probability(&xi, n, &params).unwrap() - expect).abs() < 1e-14);
    }
    let single = survival_table(&lp(5, 1), 10).unwrap();
    assert!(single.iter().flatten().all(|&v| (v - 1.0).abs() < 1e-14));
}

#[test]
fn state_cap_is_a_resource_error() {
    assert!(matches!(SpectralKernel::new(lp(40, 20)), Err(Error::ResourceCap { .. })));
    assert!(matches!(SpectralKernel::with_cap(lp(10, 5), 100), Err(Error::ResourceCap { .. })));
}

#[test]
fn invalid_parameters() {
    assert!(LatticeParams::new(1, 1).is_err());
    assert!(LatticeParams::new(5, 0).is_err());
    assert!(LatticeParams::new(5, 5).is_err());
    assert!(serde_json::from_str::<LatticeParams>(r#"{"ring":5,"particles":5}"#).is_err());
    assert!(serde_json::from_str::<LatticeParams>(r#"{"ring":5,"particles":2,"x":1}"#).is_err());
    assert_eq!(serde_json::from_str::<LatticeParams>(r#"{"ring":5,"particles":2}"#).unwrap(), lp(5, 2));
    assert!(Configuration::new(vec![2, 1], 5).is_err());
    assert!(Configuration::new(vec![1, 5], 5).is_err());
    assert!(minimal_lift(&Configuration::new(vec![1], 5).unwrap(), &lp(5, 2)).is_err());
    assert!(lift_from_partition(&messep_lab::partitions::Partition::new(&[4]).unwrap(), &lp(5, 2)).is_err());
}

proptest! {
    #[test]
    fn kernel_is_stochastic_and_reversible(params in lattice()) {
        let k = SpectralKernel::new(params).unwrap();
        for row in &k.rows {
            let s: f64 = row.iter().map(|e| e.1).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!(row.len() <= 2 * params.particles());
        }
        prop_assert!(k.detailed_balance_defect() < 1e-14);
        prop_assert!((k.mu().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_bijection(params in lattice()) {
        let (l, n) = (params.ring(), params.particles());
        let boxes = box_partitions(n, l - n);
        prop_assert_eq!(boxes.len() as u64, params.state_count());
        let mut seen = vec![false; boxes.len()];
        for lambda in &boxes {
            let c = config_from_partition(lambda, &params).unwrap();
            prop_assert_eq!(&partition_from_config(&c, &params).unwrap(), lambda);
            let r = c.colex_rank();
            prop_assert!(!seen[r]);
            seen[r] = true;
        }
    }

    #[test]
    fn colex_rank_matches_enumeration_order(params in lattice()) {
        for (i, c) in enumerate_configurations(&params).iter().enumerate() {
            prop_assert_eq!(c.colex_rank(), i);
        }
    }

    #[test]
    fn hook_closed_form(l in 8usize..40, n_frac in 0.1f64..0.9, n in 1usize..7, k in 0usize..7) {
        let big_n = ((l as f64 * n_frac) as usize).clamp(1, l - 1);
        prop_assume!(k < n && n <= l - big_n && k < big_n);
        let params = lp(l, big_n);
        let lambda = Hook::new(n, k).unwrap().partition();
        prop_assert!((hook_eigenvalue(n, k, &params).unwrap() - eigenvalue_of(&lambda, &params).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_bounded_and_compact_is_top(params in lattice()) {
        let k = SpectralKernel::new(params).unwrap();
        let top = k.eigenvalues[k.index_of(&params.compact())];
        prop_assert!((top - 1.0).abs() < 1e-12);
        prop_assert!(k.eigenvalues.iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }
}
