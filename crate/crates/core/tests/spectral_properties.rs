use std::f64::consts::PI;

use biphoton::experiment::{biphoton_for, ExperimentConfig};
use biphoton::optics::Distinguishability;
use biphoton::spectral::{
    build_biphoton, hom_scan, mz_one_photon_scan, mz_two_photon_scan, BiphotonSpectralAmplitude, FilterShape,
    FilterSpectrum, PumpShape, PumpSpectrum, SpectralGrid,
};
use biphoton::units::{self, LengthUnit};

const LAMBDA0: f64 = 861.6;

fn bsa(pump: PumpShape, filter: FilterShape, phasematch_nm: f64, points: usize) -> BiphotonSpectralAmplitude {
    biphoton_for(&ExperimentConfig {
        pump_shape: pump,
        filter_shape: filter,
        phasematch_bandwidth_nm: phasematch_nm,
        grid_points: points,
        ..Default::default()
    })
    .unwrap()
}

fn ideal() -> Distinguishability {
    Distinguishability::IDEAL
}

#[test]
fn single_frequency_limit_reproduces_fock_fringes() {
    let b = bsa(PumpShape::Delta, FilterShape::Rectangular, 0.0, 4001);
    let x: Vec<f64> = (0..=400).map(|i| -2000.0 + 10.0 * i as f64).collect();
    let one = mz_one_photon_scan(&b, &x, LengthUnit::Nm, ideal()).unwrap();
    let two = mz_two_photon_scan(&b, &x, LengthUnit::Nm, ideal()).unwrap();
    for (i, &l) in x.iter().enumerate() {
        let phi = 2.0 * PI * l / LAMBDA0;
        assert!(
            (one.samples[i].rate - 0.5 * (1.0 - phi.cos())).abs() < 1e-8,
            "one-photon at {l}"
        );
        assert!(
            (two.samples[i].rate - 0.5 * (1.0 - (2.0 * phi).cos())).abs() < 1e-8,
            "two-photon at {l}"
        );
    }
}

#[test]
fn delta_pump_pairs_conserve_energy() {
    let b = bsa(PumpShape::Delta, FilterShape::Rectangular, 20.0, 4001);
    let two_nu0 = 2.0 * units::nm_to_thz(LAMBDA0);
    for (s, i, a) in b.pair_amplitudes() {
        if a.norm() > 0.0 {
            assert!((s + i - two_nu0).abs() < 1e-9);
        }
    }
    assert_eq!(b.sum_frequency_rms_thz(), 0.0);
}

#[test]
fn gaussian_pump_spread_within_linewidth() {
    let b = bsa(PumpShape::Gaussian, FilterShape::Rectangular, 20.0, 4001);
    let linewidth = units::hz_to_thz(40e6);
    let rms = b.sum_frequency_rms_thz();
    assert!(rms > 0.0 && rms <= linewidth, "{rms} vs {linewidth}");
}

#[test]
fn pair_envelope_outlasts_single_photon_envelope() {
    for filter in [FilterShape::Rectangular, FilterShape::Gaussian] {
        let b = bsa(PumpShape::Gaussian, filter, 20.0, 4001);
        for e in 0..=60 {
            let l = 100.0 * 10f64.powf(e as f64 / 10.0); // 100 nm .. 100 m
            assert!(
                b.two_photon_envelope(l) >= b.one_photon_envelope(l) - 1e-12,
                "{filter} at {l} nm"
            );
        }
    }
}

#[test]
fn pair_envelope_persists_at_400_um() {
    let b = bsa(PumpShape::Gaussian, FilterShape::Rectangular, 20.0, 4001);
    assert!(b.two_photon_envelope(400_000.0) >= 0.99 * b.two_photon_envelope(0.0));
    let d = bsa(PumpShape::Delta, FilterShape::Rectangular, 20.0, 4001);
    for l in [0.0, 400_000.0, 1e9] {
        assert!((d.two_photon_envelope(l) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn one_photon_envelope_width_is_near_the_estimate() {
    let b = bsa(PumpShape::Delta, FilterShape::Rectangular, 20.0, 4001);
    let half_width_um = b.one_photon_coherence_half_width_nm().unwrap() * 1e-3;
    let estimate_um = 860.0 * 860.0 / 10.0 * 1e-3;
    assert!(
        half_width_um > 0.5 * estimate_um && half_width_um < 1.5 * estimate_um,
        "{half_width_um} um vs {estimate_um} um"
    );
}

#[test]
fn refining_the_grid_changes_rates_below_1e6() {
    let x_um: Vec<f64> = vec![
        -150.0, -60.0, -7.3, 0.0, 0.4, 3.0, 40.0, 73.9, 120.0, 399.7, 400.0, 400.43,
    ];
    for pump in [PumpShape::Delta, PumpShape::Gaussian] {
        for filter in [FilterShape::Rectangular, FilterShape::Gaussian] {
            let coarse = bsa(pump, filter, 20.0, 4001);
            let fine = bsa(pump, filter, 20.0, 8001);
            let p = Distinguishability::new(0.97).unwrap();
            type Scan = fn(
                &BiphotonSpectralAmplitude,
                &[f64],
                LengthUnit,
                Distinguishability,
            ) -> biphoton::Result<biphoton::spectral::ScanResult>;
            let scans: [(&str, Scan); 3] = [
                ("hom", hom_scan),
                ("one", mz_one_photon_scan),
                ("two", mz_two_photon_scan),
            ];
            for (name, scan) in scans {
                let a = scan(&coarse, &x_um, LengthUnit::Um, p).unwrap().rates();
                let b = scan(&fine, &x_um, LengthUnit::Um, p).unwrap().rates();
                for (i, (ra, rb)) in a.iter().zip(&b).enumerate() {
                    assert!(
                        (ra - rb).abs() < 1e-6,
                        "{pump} {filter} {name} at {} um: {ra} vs {rb}",
                        x_um[i]
                    );
                }
            }
        }
    }
}

#[test]
fn hom_dip_is_even() {
    for pump in [PumpShape::Delta, PumpShape::Gaussian] {
        let b = bsa(pump, FilterShape::Rectangular, 20.0, 4001);
        let x: Vec<f64> = (0..=150).map(|i| -150.0 + 2.0 * i as f64).collect();
        let r = hom_scan(&b, &x, LengthUnit::Um, ideal()).unwrap().rates();
        for (a, c) in r.iter().zip(r.iter().rev()) {
            assert!((a - c).abs() < 1e-12);
        }
    }
}

#[test]
fn flat_rectangle_gives_sinc_dip() {
    let pump = PumpSpectrum::new(LAMBDA0, 40e6, PumpShape::Delta).unwrap();
    let filter = FilterSpectrum::new(FilterShape::Rectangular, 860.0, 10.0).unwrap();
    let grid = SpectralGrid::for_filter(&pump, &filter, 4001).unwrap();
    let b = build_biphoton(&pump, f64::INFINITY, &filter, &grid).unwrap();

    // both photons inside [c/865, c/855]: |δ| ≤ h around ν0
    let nu0 = units::nm_to_thz(LAMBDA0);
    let h = (units::nm_to_thz(855.0) - nu0).min(nu0 - units::nm_to_thz(865.0));
    let x: Vec<f64> = (0..=300).map(|i| -150.0 + i as f64).collect();
    let scan = hom_scan(&b, &x, LengthUnit::Um, ideal()).unwrap();
    for s in &scan.samples {
        let u = 4.0 * PI * h * units::delay_ps(s.position * 1e3);
        let sinc = if u == 0.0 { 1.0 } else { u.sin() / u };
        assert!((s.rate - 0.5 * (1.0 - sinc)).abs() < 1e-10, "at {} um", s.position);
    }
}

#[test]
fn flat_rectangle_pair_density_is_a_normalized_rectangle() {
    let pump = PumpSpectrum::new(LAMBDA0, 40e6, PumpShape::Delta).unwrap();
    let filter = FilterSpectrum::new(FilterShape::Rectangular, 860.0, 10.0).unwrap();
    let grid = SpectralGrid::for_filter(&pump, &filter, 4001).unwrap();
    let b = build_biphoton(&pump, f64::INFINITY, &filter, &grid).unwrap();
    assert!((b.norm() - 1.0).abs() < 1e-12);
    let slice = &b.slices()[0];
    let values = slice.pair.values();
    assert!(values.iter().all(|v| (v - values[0]).abs() < 1e-9 * values[0]));

    // the signal marginal spans the whole 10 nm filter band
    let nodes = slice.signal.nodes();
    let nu0 = units::nm_to_thz(LAMBDA0);
    let lo = units::thz_to_nm(nu0 + nodes.last().unwrap());
    let hi = units::thz_to_nm(nu0 + nodes[0]);
    assert!((hi - lo - 10.0).abs() < 1e-9, "{lo}..{hi}");
}
