use std::f64::consts::{FRAC_PI_2, PI};

use biphoton::detection::{analytic_rate, fit_fringe, mz_rates, rate_one_photon, AnalyticFormula, PORT4};
use biphoton::experiment::{compare_oracles, phi_grid};
use biphoton::fock::{
    apply_annihilation, apply_creation, coherent_input, inner_product, CoherentParams, FockBasisState, ModeLabel,
    StateVector,
};
use biphoton::optics::{lift_and_evolve, mz_transfer};
use biphoton::spectral::ScanResult;
use biphoton::units::LengthUnit;
use num_complex::Complex64;

fn ket(occ: &[u32]) -> StateVector {
    StateVector::basis(FockBasisState::new(occ.to_vec()))
}

#[test]
fn pipeline_matches_closed_forms_on_dense_grid() {
    let pair = ket(&[1, 1]);
    let single = ket(&[0, 1]);
    // single global scale fixed at φ = π/2
    let at = mz_rates(&pair, FRAC_PI_2).unwrap();
    let scale_55 = at.r55 / analytic_rate(AnalyticFormula::R55Fock, FRAC_PI_2, None).unwrap();
    let scale_5 =
        mz_rates(&single, FRAC_PI_2).unwrap().r5 / analytic_rate(AnalyticFormula::R5Single, FRAC_PI_2, None).unwrap();
    assert!((scale_55 - 1.0).abs() < 1e-12 && (scale_5 - 1.0).abs() < 1e-12);
    for phi in phi_grid(1000) {
        let two = mz_rates(&pair, phi).unwrap();
        let one = mz_rates(&single, phi).unwrap();
        assert!((two.r55 - scale_55 * analytic_rate(AnalyticFormula::R55Fock, phi, None).unwrap()).abs() < 1e-10);
        assert!((two.r45 - scale_55 * analytic_rate(AnalyticFormula::R45Fock, phi, None).unwrap()).abs() < 1e-10);
        assert!((one.r5 - scale_5 * analytic_rate(AnalyticFormula::R5Single, phi, None).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn coherent_closed_forms() {
    for a in [0.3, 0.5, 1.0] {
        let t = compare_oracles(&phi_grid(1000), Complex64::new(a, 0.0)).unwrap();
        for f in [AnalyticFormula::R55Coherent, AnalyticFormula::R45Coherent] {
            assert!(t.row(f).max_abs < 1e-8, "alpha {a} {f}: {:?}", t.row(f));
        }
    }
}

#[test]
fn coherent_input_factorizes() {
    for a in [0.3, 0.5, 1.0, 1.7] {
        let psi = coherent_input(CoherentParams::new(Complex64::new(a, 0.0)), ModeLabel(1), 2)
            .unwrap()
            .state;
        for phi in phi_grid(64) {
            let out = lift_and_evolve(&psi, &mz_transfer(phi, 0.0)).unwrap();
            let t = biphoton::detection::rate_triple(&out, PORT4, ModeLabel(1)).unwrap();
            let r4 = rate_one_photon(&out, PORT4).unwrap();
            assert!((t.r55 - t.r5 * t.r5).abs() < 1e-8, "alpha {a} phi {phi}");
            assert!((t.r45 - r4 * t.r5).abs() < 1e-8, "alpha {a} phi {phi}");
        }
    }
}

#[test]
fn pair_input_is_not_classical() {
    let worst = phi_grid(400)
        .into_iter()
        .map(|phi| {
            let t = mz_rates(&ket(&[1, 1]), phi).unwrap();
            (t.r55 - t.r5 * t.r5).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 0.1, "{worst}");
}

#[test]
fn pair_fringe_has_half_the_period() {
    let lambda = 861.6;
    let x: Vec<f64> = (0..=200).map(|i| -2500.0 + 25.0 * i as f64).collect();
    let phase = |l: f64| 2.0 * PI * l / lambda;
    let one: Vec<f64> = x
        .iter()
        .map(|&l| mz_rates(&ket(&[0, 1]), phase(l)).unwrap().r5)
        .collect();
    let two: Vec<f64> = x
        .iter()
        .map(|&l| mz_rates(&ket(&[1, 1]), phase(l)).unwrap().r55)
        .collect();
    let f1 = fit_fringe(
        &ScanResult::from_rates("delta_L2", LengthUnit::Nm, &x, &one).unwrap(),
        None,
    )
    .unwrap();
    let f2 = fit_fringe(
        &ScanResult::from_rates("delta_L2", LengthUnit::Nm, &x, &two).unwrap(),
        None,
    )
    .unwrap();
    assert!(
        (f2.period / f1.period - 0.5).abs() < 0.5 * 0.005,
        "{} {}",
        f1.period,
        f2.period
    );
    assert!((f1.period - lambda).abs() < 0.5);
    assert!((f2.visibility - 1.0).abs() < 0.01);
}

#[test]
fn rates_are_real_for_evolved_states() {
    let coherent = coherent_input(CoherentParams::new(Complex64::new(0.8, 0.2)), ModeLabel(1), 2)
        .unwrap()
        .state;
    for psi in [ket(&[1, 1]), ket(&[0, 1]), ket(&[2, 0]), coherent] {
        for phi in phi_grid(50) {
            let out = lift_and_evolve(&psi, &mz_transfer(phi, 0.3)).unwrap();
            let m5 = ModeLabel(1);
            let a5 = apply_annihilation(&out, m5).unwrap();
            let n5 = apply_creation(&a5, m5).unwrap();
            let pair55 =
                apply_creation(&apply_creation(&apply_annihilation(&a5, m5).unwrap(), m5).unwrap(), m5).unwrap();
            let a45 = apply_annihilation(&a5, PORT4).unwrap();
            let pair45 = apply_creation(&apply_creation(&a45, PORT4).unwrap(), m5).unwrap();
            for op_psi in [&n5, &pair55, &pair45] {
                assert!(inner_product(&out, op_psi).unwrap().im.abs() < 1e-12);
            }
        }
    }
}
