//! Least-squares fringe and dip fitting.
//!
//! Fringes are fitted to `A(1 + V cos(2πx/T + θ))`, optionally multiplied by
//! a known envelope. For a fixed period the model is linear in
//! `(A, A·V·cos θ, −A·V·sin θ)`, so the period is the only nonlinear
//! parameter: it is seeded by scanning a dense frequency grid for the lowest
//! residual (a least-squares periodogram, which handles the λ vs λ/2
//! ambiguity) and then refined by golden-section search.

use serde::{Deserialize, Serialize};

use crate::spectral::ScanResult;
use crate::{Error, Result};

/// Relative RMS residual above which a fit is reported as not converged.
pub const DEFAULT_MAX_RELATIVE_RESIDUAL: f64 = 0.25;

/// Periodogram frequencies per `1/span`.
const OVERSAMPLE: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeSummary {
    /// `(max − min)/(max + min)` of the fitted sinusoid.
    pub visibility: f64,
    /// In nm.
    pub period: f64,
    pub phase_offset: f64,
    /// RMS of the fit residual, in rate units.
    pub residual: f64,
    pub mean_level: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub max_relative_residual: f64,
    /// Restrict the period search (nm); defaults to Nyquist..span.
    pub min_period: Option<f64>,
    pub max_period: Option<f64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_relative_residual: DEFAULT_MAX_RELATIVE_RESIDUAL,
            min_period: None,
            max_period: None,
        }
    }
}

/// Fits a fringe to the scan rates (positions converted to nm).
pub fn fit_fringe(scan: &ScanResult, envelope: Option<&dyn Fn(f64) -> f64>) -> Result<FringeSummary> {
    fit_fringe_samples(&scan.positions_nm(), &scan.rates(), envelope, FitOptions::default())
}

pub fn fit_fringe_samples(
    x: &[f64],
    y: &[f64],
    envelope: Option<&dyn Fn(f64) -> f64>,
    opts: FitOptions,
) -> Result<FringeSummary> {
    validate(x, y)?;
    let n = x.len();
    let span = x[n - 1] - x[0];
    let env: Vec<f64> = match envelope {
        Some(e) => x.iter().map(|&v| e(v)).collect(),
        None => vec![1.0; n],
    };

    let mean = y.iter().sum::<f64>() / n as f64;
    let spread = y.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if spread <= 1e-12 * mean.abs().max(f64::MIN_POSITIVE) {
        return Ok(FringeSummary {
            visibility: 0.0,
            period: span,
            phase_offset: 0.0,
            residual: 0.0,
            mean_level: mean,
        });
    }

    let mut steps: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    steps.sort_by(f64::total_cmp);
    let median_step = steps[steps.len() / 2];
    let f_max = 1.0 / opts.min_period.unwrap_or(2.0 * median_step);
    let f_min = 1.0 / opts.max_period.unwrap_or(span);
    if !(f_max > f_min) {
        return Err(Error::InvalidScan(format!(
            "no resolvable period between {} and {} nm",
            1.0 / f_max,
            1.0 / f_min
        )));
    }
    let df = 1.0 / (span * OVERSAMPLE);
    let count = ((f_max - f_min) / df).ceil() as usize + 1;
    let ss = |f: f64| linear_fit(x, y, &env, f).1;
    let (mut best_f, mut best_ss) = (f_min, f64::INFINITY);
    for i in 0..count {
        let f = (f_min + i as f64 * df).min(f_max);
        let s = ss(f);
        if s < best_ss {
            best_ss = s;
            best_f = f;
        }
    }
    let f = golden_min(&ss, (best_f - df).max(f_min * 0.5), best_f + df, 1e-14 * best_f);
    let (coef, ss_final) = linear_fit(x, y, &env, f);
    let [a, b, c] = coef;
    let amp = (b * b + c * c).sqrt();
    let residual = (ss_final / n as f64).sqrt();
    let relative = residual / a.abs().max(f64::MIN_POSITIVE);
    if relative > opts.max_relative_residual {
        return Err(Error::FitNonConvergence {
            residual: relative,
            threshold: opts.max_relative_residual,
        });
    }
    Ok(FringeSummary {
        visibility: if a > 0.0 { (amp / a).min(1.0) } else { 1.0 },
        period: 1.0 / f,
        phase_offset: (-c).atan2(b),
        residual,
        mean_level: a,
    })
}

fn validate(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidScan("positions and rates differ in length".into()));
    }
    if x.len() < 4 {
        return Err(Error::InvalidScan(format!("need at least 4 samples, got {}", x.len())));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidScan("positions must be strictly increasing".into()));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidScan("non-finite rate".into()));
    }
    Ok(())
}

/// Least squares on `e·[1, cos ωx, sin ωx]`; returns coefficients and the
/// residual sum of squares.
fn linear_fit(x: &[f64], y: &[f64], env: &[f64], f: f64) -> ([f64; 3], f64) {
    let w = 2.0 * std::f64::consts::PI * f;
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for ((&xi, &yi), &ei) in x.iter().zip(y).zip(env) {
        let (s, c) = (w * xi).sin_cos();
        let row = [ei, ei * c, ei * s];
        for j in 0..3 {
            aty[j] += row[j] * yi;
            for k in 0..3 {
                ata[j][k] += row[j] * row[k];
            }
        }
    }
    let coef = solve3(ata, aty).unwrap_or([0.0; 3]);
    let ss = x
        .iter()
        .zip(y)
        .zip(env)
        .map(|((&xi, &yi), &ei)| {
            let (s, c) = (w * xi).sin_cos();
            let r = yi - ei * (coef[0] + coef[1] * c + coef[2] * s);
            r * r
        })
        .sum();
    (coef, ss)
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let m = a[r][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= m * p;
            }
            b[r] -= m * b[col];
        }
    }
    let mut out = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| a[r][k] * out[k]).sum();
        out[r] = (b[r] - s) / a[r][r];
    }
    Some(out)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Fitted Hong-Ou-Mandel dip, `C(1 − V·sinc(π(x − x₀)/w))` with
/// `sinc(u) = sin u / u`: the dip of a rectangular pair spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipSummary {
    /// `(baseline − minimum)/baseline` of the fitted curve.
    pub visibility: f64,
    /// Dip centre, in nm.
    pub center: f64,
    /// Distance from the centre to the first zero of the sinc, in nm.
    pub width: f64,
    pub baseline: f64,
    pub residual: f64,
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Linear part of the dip model for fixed centre and width.
fn dip_linear(x: &[f64], y: &[f64], center: f64, width: f64) -> ([f64; 2], f64) {
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let g: Vec<f64> = x
        .iter()
        .map(|&xi| sinc(std::f64::consts::PI * (xi - center) / width))
        .collect();
    for (&yi, &gi) in y.iter().zip(&g) {
        s11 += 1.0;
        s12 += gi;
        s22 += gi * gi;
        b1 += yi;
        b2 += yi * gi;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-300 {
        return ([b1 / s11, 0.0], f64::INFINITY);
    }
    let c = (s22 * b1 - s12 * b2) / det;
    let d = (s11 * b2 - s12 * b1) / det;
    let ss = y.iter().zip(&g).map(|(&yi, &gi)| (yi - c - d * gi).powi(2)).sum();
    ([c, d], ss)
}

/// Fits a sinc dip to the scan rates (positions converted to nm).
pub fn fit_hom_dip(scan: &ScanResult) -> Result<DipSummary> {
    let x = scan.positions_nm();
    let y = scan.rates();
    validate(&x, &y)?;
    let n = x.len();
    let (imin, &ymin) = y
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let base = 0.5 * (y[0] + y[n - 1]);
    // half-depth crossing on either side seeds the width
    let half = 0.5 * (base + ymin);
    let right = (imin..n).find(|&i| y[i] >= half).unwrap_or(n - 1);
    let left = (0..=imin).rev().find(|&i| y[i] >= half).unwrap_or(0);
    let half_width = 0.5 * (x[right] - x[left]).max(x[1] - x[0]);
    // sinc falls to one half at u ≈ 1.8955
    let w0 = std::f64::consts::PI * half_width / 1.8955;

    let objective = |p: [f64; 2]| {
        if p[1] <= 0.0 {
            return f64::INFINITY;
        }
        dip_linear(&x, &y, p[0], p[1]).1
    };
    let best = nelder_mead(objective, [x[imin], w0], [x[1] - x[0], 0.2 * w0], 4000, 1e-13);
    let ([c, d], ss) = dip_linear(&x, &y, best[0], best[1]);
    let residual = (ss / n as f64).sqrt();
    let relative = residual / c.abs().max(f64::MIN_POSITIVE);
    if relative > DEFAULT_MAX_RELATIVE_RESIDUAL {
        return Err(Error::FitNonConvergence {
            residual: relative,
            threshold: DEFAULT_MAX_RELATIVE_RESIDUAL,
        });
    }
    Ok(DipSummary {
        visibility: -d / c,
        center: best[0],
        width: best[1],
        baseline: c,
        residual,
    })
}

/// Two-parameter Nelder–Mead.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], scale: [f64; 2], max_iter: usize, ftol: f64) -> [f64; 2] {
    let mut simplex = [start, [start[0] + scale[0], start[1]], [start[0], start[1] + scale[1]]];
    let mut values = simplex.map(&f);
    for _ in 0..max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let spread = (values[2] - values[0]).abs();
        if spread <= ftol * (values[0].abs() + 1e-300) {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (simplex[2][0] - centroid[0]),
                centroid[1] + t * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    simplex[best]
}
