use bellks_core::ks;
use bellks_core::lhv::{self, HiddenVariableModel};
use bellks_core::linalg::{self, c, ComplexMatrix, EPS_MAT, EPS_SPECTRAL};
use bellks_core::logic::{self, atom, Formula};
use bellks_core::quantum::{self, ChshSettings, Observable, QuantumState};
use proptest::prelude::*;

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), dim * dim)
        .prop_map(move |v| ComplexMatrix::from_vec(dim, v.into_iter().map(|(r, i)| c(r, i)).collect()).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim).prop_map(|m| (&m + &linalg::adjoint(&m)).scale_real(0.5))
}

fn any_dim() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![1usize, 2, 4, 8, 16])
}

fn density(dim: usize) -> impl Strategy<Value = QuantumState> {
    matrix(dim).prop_map(|m| {
        let g = &linalg::adjoint(&m) * &m;
        let tr = linalg::trace(&g).re;
        QuantumState::new("random", g.scale_real(1.0 / tr)).unwrap()
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["P", "Q", "R", "S"]).prop_map(atom);
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.implies(b)),
        ]
    })
}

proptest! {
    #[test]
    fn adjoint_is_an_involution(m in any_dim().prop_flat_map(matrix)) {
        prop_assert!(linalg::adjoint(&linalg::adjoint(&m)).approx_eq(&m, EPS_MAT));
    }

    #[test]
    fn trace_is_cyclic((a, b) in (1usize..=4).prop_flat_map(|d| (hermitian(d), hermitian(d)))) {
        let ab = linalg::trace(&(&a * &b));
        let ba = linalg::trace(&(&b * &a));
        prop_assert!((ab - ba).norm() <= 1e-10);
        let sum = linalg::trace(&(&a + &b));
        prop_assert!((sum - linalg::trace(&a) - linalg::trace(&b)).norm() <= 1e-12);
        prop_assert!(linalg::trace(&a).im.abs() <= EPS_MAT);
    }

    #[test]
    fn tensor_dimensions_multiply(a in (1usize..=4).prop_flat_map(matrix), b in (1usize..=4).prop_flat_map(matrix)) {
        prop_assert_eq!(linalg::tensor(&a, &b).dim(), a.dim() * b.dim());
    }

    #[test]
    fn commutator_is_antisymmetric((a, b) in (1usize..=4).prop_flat_map(|d| (matrix(d), matrix(d)))) {
        let ab = linalg::commutator(&a, &b).unwrap();
        let ba = linalg::commutator(&b, &a).unwrap();
        prop_assert!(ab.approx_eq(&-&ba, EPS_MAT));
    }

    #[test]
    fn eigen_sum_matches_trace(a in any_dim().prop_flat_map(hermitian)) {
        let e = linalg::hermitian_eigen(&a).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - linalg::trace(&a).re).abs() <= EPS_SPECTRAL);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let scale = a.frobenius_norm().max(1.0);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let av = a.apply(v).unwrap();
            let resid = av.iter().zip(v).map(|(x, y)| (x - y * lam).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(resid <= EPS_SPECTRAL * scale, "residual {}", resid);
        }
    }

    #[test]
    fn expectation_of_hermitian_is_real(rho in density(4), a in hermitian(4)) {
        let obs = Observable::new("A", a).unwrap();
        let tr = linalg::trace(&(rho.rho() * obs.matrix()));
        prop_assert!(tr.im.abs() <= EPS_MAT);
    }

    #[test]
    fn commutator_observable_is_psd_and_symmetric((a, b) in (1usize..=4).prop_flat_map(|d| (hermitian(d), hermitian(d)))) {
        let a = Observable::new("A", a).unwrap();
        let b = Observable::new("B", b).unwrap();
        let fab = quantum::commutator_observable(&a, &b).unwrap();
        let fba = quantum::commutator_observable(&b, &a).unwrap();
        prop_assert!(fab.matrix().approx_eq(fba.matrix(), 1e-10));
        prop_assert!(fab.eigenvalues().unwrap()[0] >= -1e-10);
    }

    #[test]
    fn chsh_never_exceeds_tsirelson(rho in density(4)) {
        let s = ChshSettings::pauli_xy();
        let value = quantum::chsh_value(&rho, &s).unwrap();
        prop_assert!(value <= quantum::tsirelson_max(&s).unwrap() + 1e-9);
    }

    #[test]
    fn lhv_mixtures_respect_the_bound(w in prop::collection::vec(0.0f64..1.0, 16)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-6);
        let mut weights: Vec<f64> = w.iter().map(|x| x / total).collect();
        let drift: f64 = 1.0 - weights.iter().sum::<f64>();
        weights[0] += drift;
        prop_assume!(weights[0] >= 0.0);
        let model = HiddenVariableModel::mixture(&lhv::deterministic_strategies(), weights).unwrap();
        let chsh = model.chsh().unwrap();
        prop_assert!(chsh.abs() <= 2.0 + 1e-12);
        prop_assert!((chsh - model.average_v().unwrap()).abs() <= 1e-12);
        for label in lhv::LABELS {
            let e = model.expectation(lhv::Correlator::Single(label)).unwrap();
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn double_negation(f in formula()) {
        let g = f.clone().not().not();
        for a in logic::assignments(&f.atoms()) {
            prop_assert_eq!(logic::evaluate(&f, &a).unwrap(), logic::evaluate(&g, &a).unwrap());
        }
    }

    #[test]
    fn implication_rewrite_preserves_truth_tables(f in formula()) {
        let g = logic::implication_as_disjunction(&f);
        prop_assert!(!g.contains_implication());
        prop_assert_eq!(logic::truth_table(&f), logic::truth_table(&g));
    }

    #[test]
    fn search_reports_true_minimum(signs in prop::collection::vec(any::<bool>(), 6)) {
        let sq = ks::mermin_peres_square();
        let mut contexts = sq.contexts().to_vec();
        for (ctx, s) in contexts.iter_mut().zip(&signs) {
            ctx.sign = if *s { bellks_core::Outcome::Minus } else { bellks_core::Outcome::Plus };
        }
        let inst = ks::KSInstance::new(sq.observables().to_vec(), contexts).unwrap();
        let out = ks::find_coloring(&inst).unwrap();
        // Parity decides colorability for this grid.
        prop_assert_eq!(out.is_colorable(), !inst.parity_obstruction());
        if let ks::Coloring::NoColoring { min_violations, witness } = &out.coloring {
            prop_assert_eq!(inst.violations(witness), *min_violations);
        }
    }
}
