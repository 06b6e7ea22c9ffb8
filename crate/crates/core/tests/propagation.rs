use num_complex::Complex64 as C64;
use proptest::prelude::*;
use tomoprop::propagators::{
    evolve_mdf, fokker_planck_residual, frame_map, quantum_propagator, quantum_propagator_from_shift,
    PhasePoint,
};
use tomoprop::quad::simpson;
use tomoprop::states::{coherent_mdf, fock_mdf};
use tomoprop::{beta_shift, solve_epsilon, ClassicalPropagator, DriveProfile, Mode, ModeSolver};

fn resonance_solver() -> ModeSolver {
    let p = DriveProfile::parametric_resonance(0.2).unwrap().with_constant_force(0.4);
    ModeSolver::numerical(p, 6.0, 1e-3).unwrap()
}

#[test]
fn fock_states_follow_the_classical_flow() {
    let solver = resonance_solver();
    for t in [0.6, 2.4, 5.5] {
        let mode = solver.mode_at(t).unwrap();
        let prop = ClassicalPropagator::new(mode).unwrap();
        for n in [0, 1, 3, 6] {
            let w0 = |x, mu, nu| fock_mdf(n, &Mode::initial(), x, mu, nu);
            for (mu, nu) in [(1.0, 0.0), (0.3, 0.9), (-0.7, 0.4)] {
                for x in [-2.0, -0.4, 0.5, 1.7] {
                    let a = evolve_mdf(&prop, w0, x, mu, nu).unwrap();
                    let b = fock_mdf(n, &mode, x, mu, nu).unwrap();
                    assert!((a - b).abs() <= 1e-10, "n={n} t={t}: {a} vs {b}");
                }
                let mass = simpson(-15.0, 15.0, 6000, |x| evolve_mdf(&prop, w0, x, mu, nu).unwrap());
                assert!((mass - 1.0).abs() <= 1e-8, "mass {mass}");
            }
        }
    }
}

#[test]
fn fock_fokker_planck_under_numerical_resonance() {
    let solver = ModeSolver::numerical(DriveProfile::parametric_resonance(0.01).unwrap(), 6.0, 1e-3).unwrap();
    let w = |x: f64, mu: f64, nu: f64, t: f64| {
        fock_mdf(2, &solver.mode_at(t).unwrap(), x, mu, nu).unwrap()
    };
    for (x, mu, nu, t) in [(0.4, 0.7, 0.7, 1.0), (-1.2, 1.0, 0.3, 3.3), (0.9, -0.2, 1.1, 4.8)] {
        let at = PhasePoint { x, mu, nu, t };
        let r1 = fokker_planck_residual(w, solver.profile(), at, 2e-2).abs();
        let r2 = fokker_planck_residual(w, solver.profile(), at, 1e-2).abs();
        let r3 = fokker_planck_residual(w, solver.profile(), at, 1e-3).abs();
        assert!(r3 <= 1e-5, "{r3}");
        assert!((3.5..=4.5).contains(&(r1 / r2)), "ratio {}", r1 / r2);
    }
}

#[test]
fn wrong_force_sign_breaks_the_residual() {
    let solver = ModeSolver::for_profile(DriveProfile::constant(1.0).with_constant_force(1.0), 3.0, 1e-3).unwrap();
    let flipped = DriveProfile::constant(1.0).with_constant_force(-1.0);
    let a = C64::new(0.2, 0.0);
    let w = |x: f64, mu: f64, nu: f64, t: f64| coherent_mdf(a, &solver.mode_at(t).unwrap(), x, mu, nu).unwrap();
    let at = PhasePoint { x: 0.5, mu: 0.6, nu: 0.8, t: 1.2 };
    assert!(fokker_planck_residual(w, solver.profile(), at, 1e-3).abs() <= 1e-5);
    assert!(fokker_planck_residual(w, &flipped, at, 1e-3).abs() > 1e-2);
}

#[test]
fn driven_kernel_matches_shift_form() {
    let p = DriveProfile::constant(1.0).with_constant_force(1.0);
    let traj = solve_epsilon(&p, 5.0, 1e-3).unwrap();
    for t in [0.3, 1.1, 2.5, 4.9] {
        let beta = beta_shift(&p, &traj, t).unwrap();
        for (x, xp, z, zp) in [(0.2, -0.5, 1.0, 0.3), (-1.4, 0.8, 0.0, 2.1), (0.6, 0.6, -0.9, 0.4)] {
            let a = quantum_propagator(x, xp, z, zp, t, &p).unwrap();
            let b = quantum_propagator_from_shift(x, xp, z, zp, t, beta).unwrap();
            assert!((a - b).norm() <= 1e-8, "t={t}: {a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_flow_matches_closed_form(
        t in 0.0f64..6.0, ar in -1.5f64..1.5, ai in -1.5f64..1.5,
        x in -3.0f64..3.0, mu in -1.5f64..1.5, nu in -1.5f64..1.5,
    ) {
        prop_assume!(mu.hypot(nu) > 0.05);
        let solver = resonance_solver();
        let mode = solver.mode_at(t).unwrap();
        let prop = ClassicalPropagator::new(mode).unwrap();
        let a = C64::new(ar, ai);
        let w0 = |x, mu, nu| coherent_mdf(a, &Mode::initial(), x, mu, nu);
        let lhs = evolve_mdf(&prop, w0, x, mu, nu).unwrap();
        let rhs = coherent_mdf(a, &mode, x, mu, nu).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
        let p = frame_map(&prop, x, mu, nu).unwrap();
        prop_assert!(p.mu.is_finite() && p.nu.is_finite() && p.x.is_finite());
    }
}
