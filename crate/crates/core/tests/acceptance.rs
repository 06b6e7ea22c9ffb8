//! One test per acceptance criterion; `cargo test --test acceptance` lists
//! a pass/fail line for each, and `-- --nocapture` adds the measured values.

use tomoprop::acceptance;

fn check(id: u8) {
    let r = acceptance::run(id).expect("known criterion");
    println!("{r}");
    assert!(r.passed, "{r}");
}

macro_rules! criteria {
    ($($name:ident = $id:expr;)*) => {
        $(
            #[test]
            fn $name() {
                check($id);
            }
        )*
    };
}

criteria! {
    c01_wronskian_conservation = 1;
    c02_unimodular_invariant = 2;
    c03_normalization = 3;
    c04_moment_match = 4;
    c05_two_route_equivalence = 5;
    c06_fourier_eigen_equation = 6;
    c07_generating_function = 7;
    c08_propagator_limits = 8;
    c09_phase_independence = 9;
    c10_fokker_planck_residual = 10;
    c11_sho_fock_reduction = 11;
    c12_figure_structure = 12;
    c13_resonance_approximation = 13;
}

#[test]
fn every_criterion_is_covered() {
    assert_eq!(acceptance::ids().collect::<Vec<_>>(), (1..=13).collect::<Vec<u8>>());
}
