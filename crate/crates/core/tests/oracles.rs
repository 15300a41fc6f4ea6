use nalgebra::DMatrix;
use proptest::prelude::*;
use spd_fw::manifold::{SpdMatrix, SymMatrix};
use spd_fw::oracle::{
    brute_force_oracle, euclid_oracle, feasibility_check, log_trace_objective, random_instance, riem_oracle,
    OperatorInterval,
};
use spd_fw::random::{random_contraction, random_spd, seeded};

fn rel_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_oracles_stay_feasible(seed in any::<u64>(), dim in 1usize..7) {
        let mut rng = seeded(seed);
        let inst = random_instance(dim, &mut rng).unwrap();
        let e = euclid_oracle(&inst.s, &inst.interval).unwrap();
        prop_assert!(feasibility_check(&e.z, &inst.interval).unwrap().feasible);
        let r = riem_oracle(&inst.s, &inst.x, &inst.interval).unwrap();
        prop_assert!(feasibility_check(&r.z, &inst.interval).unwrap().feasible);
        // reported values are the objectives at the returned points
        let tr = inst.s.as_matrix().dot(e.z.as_matrix());
        prop_assert!((e.objective_value - tr).abs() <= 1e-9 * (1.0 + tr.abs()));
        let lt = log_trace_objective(&inst.s, &inst.x, &r.z);
        prop_assert!((r.objective_value - lt).abs() <= 1e-8 * (1.0 + lt.abs()));
    }

    #[test]
    fn euclid_oracle_beats_random_feasible_points(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = seeded(seed);
        let inst = random_instance(dim, &mut rng).unwrap();
        let best = euclid_oracle(&inst.s, &inst.interval).unwrap().objective_value;
        for i in 0..50 {
            let z = inst.interval.from_contraction(&random_contraction(dim, i % 2 == 0, &mut rng));
            prop_assert!(inst.s.as_matrix().dot(z.as_matrix()) <= best + 1e-9 * (1.0 + best.abs()));
        }
    }

    #[test]
    fn definite_directions_select_endpoints(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = seeded(seed);
        let inst = random_instance(dim, &mut rng).unwrap();
        let pos = SymMatrix::new(random_spd(dim, 0.1, &mut rng)).unwrap();
        let neg = SymMatrix::new(-pos.as_matrix()).unwrap();
        let (l, u) = (inst.interval.lower().as_matrix(), inst.interval.upper().as_matrix());
        prop_assert!(rel_close(euclid_oracle(&pos, &inst.interval).unwrap().z.as_matrix(), u, 1e-9));
        prop_assert!(rel_close(euclid_oracle(&neg, &inst.interval).unwrap().z.as_matrix(), l, 1e-9));
        prop_assert!(rel_close(riem_oracle(&pos, &inst.x, &inst.interval).unwrap().z.as_matrix(), u, 1e-8));
        prop_assert!(rel_close(riem_oracle(&neg, &inst.x, &inst.interval).unwrap().z.as_matrix(), l, 1e-8));
    }

    #[test]
    fn euclid_oracle_commutes_with_congruence(seed in any::<u64>(), dim in 1usize..6) {
        // tr(M⁻¹ S M⁻ᵀ · Mᵀ Z M) = tr(S Z), so the maximizer moves with M
        let mut rng = seeded(seed);
        let inst = random_instance(dim, &mut rng).unwrap();
        let m = random_spd(dim, 0.5, &mut rng);
        let m_inv = m.clone().try_inverse().unwrap();
        let s2 = m_inv.clone() * inst.s.as_matrix() * m_inv.transpose();
        let s2 = SymMatrix::new((&s2 + s2.transpose()) * 0.5).unwrap();
        let moved = OperatorInterval::new(
            inst.interval.lower().congruence(&m).unwrap(),
            inst.interval.upper().congruence(&m).unwrap(),
        )
        .unwrap();
        let z = euclid_oracle(&inst.s, &inst.interval).unwrap().z;
        let z2 = euclid_oracle(&s2, &moved).unwrap().z;
        prop_assert!(rel_close(z2.as_matrix(), z.congruence(&m).unwrap().as_matrix(), 1e-8));
    }

    #[test]
    fn riem_oracle_is_exact_for_diagonal_data(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = seeded(seed);
        let mut draw = |lo: f64, hi: f64| lo + (hi - lo) * rand::Rng::random::<f64>(&mut rng);
        let s: Vec<f64> = (0..dim).map(|_| draw(-1.0, 1.0)).collect();
        let x: Vec<f64> = (0..dim).map(|_| draw(0.5, 2.0)).collect();
        let l: Vec<f64> = (0..dim).map(|_| draw(0.5, 1.0)).collect();
        let u: Vec<f64> = l.iter().map(|v| v + draw(0.1, 2.0)).collect();
        let expected: Vec<f64> = (0..dim).map(|i| if s[i] >= 0.0 { u[i] } else { l[i] }).collect();
        let interval = OperatorInterval::new(
            SpdMatrix::from_diagonal(&l).unwrap(),
            SpdMatrix::from_diagonal(&u).unwrap(),
        )
        .unwrap();
        let sol = riem_oracle(
            &SymMatrix::new(DMatrix::from_diagonal(&s.clone().into())).unwrap(),
            &SpdMatrix::from_diagonal(&x).unwrap(),
            &interval,
        )
        .unwrap();
        let expected = SpdMatrix::from_diagonal(&expected).unwrap();
        prop_assert!(rel_close(sol.z.as_matrix(), expected.as_matrix(), 1e-9));
    }
}

#[test]
fn euclid_oracle_agrees_with_search() {
    let mut rng = seeded(7);
    for dim in [1, 2, 3] {
        for trial in 0..3 {
            let inst = random_instance(dim, &mut rng).unwrap();
            let closed = euclid_oracle(&inst.s, &inst.interval).unwrap().objective_value;
            let search = brute_force_oracle(|z| inst.s.as_matrix().dot(z.as_matrix()), &inst.interval, 1000, trial)
                .unwrap()
                .objective_value;
            assert!(
                search <= closed + 1e-6 * (1.0 + closed.abs()),
                "d={dim}: {search} > {closed}"
            );
            assert!(
                search >= closed - 1e-3 * (1.0 + closed.abs()),
                "search far below closed form"
            );
        }
    }
}

#[test]
fn point_interval_returns_the_point() {
    let x = SpdMatrix::from_row_slice(2, &[2.0, 0.3, 0.3, 1.0]).unwrap();
    let interval = OperatorInterval::point(x.clone());
    assert!(interval.is_degenerate());
    let s = SymMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap();
    assert_eq!(euclid_oracle(&s, &interval).unwrap().z, x);
    assert_eq!(riem_oracle(&s, &SpdMatrix::identity(2), &interval).unwrap().z, x);
}

#[test]
fn reversed_interval_is_rejected() {
    let l = SpdMatrix::from_diagonal(&[2.0, 2.0]).unwrap();
    let u = SpdMatrix::from_diagonal(&[1.0, 3.0]).unwrap();
    assert!(OperatorInterval::new(l, u).is_err());
}
