//! Oscillatory integrals of sampled spectral densities.
//!
//! A [`Density`] is either a point mass or a piecewise-linear function on
//! sorted nodes. [`Density::characteristic`] integrates `I(x)·e^{ikx}`
//! exactly for the interpolant (Filon's rule with linear pieces), so the
//! error depends only on how well the nodes resolve `I`, not on `k`. That
//! keeps long-delay fringes as accurate as short-delay ones.

use num_complex::Complex64;

/// Below this `|k·h|` the segment weights use their Taylor series.
const SERIES_CUTOFF: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    Point { at: f64, weight: f64 },
    Linear { nodes: Vec<f64>, values: Vec<f64> },
}

impl Density {
    /// Piecewise-linear density. Nodes must be strictly increasing.
    pub fn linear(nodes: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), values.len());
        assert!(nodes.len() >= 2, "need at least one segment");
        debug_assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        Density::Linear { nodes, values }
    }

    pub fn point(at: f64, weight: f64) -> Self {
        Density::Point { at, weight }
    }

    /// `∫ I(x) dx`.
    pub fn total(&self) -> f64 {
        match self {
            Density::Point { weight, .. } => *weight,
            Density::Linear { nodes, values } => nodes
                .windows(2)
                .zip(values.windows(2))
                .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
                .sum(),
        }
    }

    /// `∫ I(x)·e^{ikx} dx`.
    pub fn characteristic(&self, k: f64) -> Complex64 {
        match self {
            Density::Point { at, weight } => Complex64::from_polar(*weight, k * at),
            Density::Linear { nodes, values } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, v) in nodes.windows(2).zip(values.windows(2)) {
                    let h = x[1] - x[0];
                    let (g0, g1) = segment_weights(k * h);
                    acc += Complex64::from_polar(h, k * x[0]) * (g0 * v[0] + g1 * (v[1] - v[0]));
                }
                acc
            }
        }
    }

    /// `∫ x·I(x) dx / ∫ I(x) dx`.
    pub fn mean(&self) -> f64 {
        self.moment(1) / self.total()
    }

    /// `∫ xⁿ I(x) dx` for n ≤ 2, exact for the interpolant.
    pub fn moment(&self, n: u32) -> f64 {
        match self {
            Density::Point { at, weight } => weight * at.powi(n as i32),
            Density::Linear { nodes, values } => {
                let mut acc = 0.0;
                for (x, v) in nodes.windows(2).zip(values.windows(2)) {
                    let (a, b) = (x[0], x[1]);
                    let slope = (v[1] - v[0]) / (b - a);
                    let c0 = v[0] - slope * a;
                    // ∫ (c0 + slope·x)·xⁿ dx
                    let p = |t: f64| {
                        c0 * t.powi(n as i32 + 1) / (n as f64 + 1.0) + slope * t.powi(n as i32 + 2) / (n as f64 + 2.0)
                    };
                    acc += p(b) - p(a);
                }
                acc
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Density::Point { at, weight } => Density::Point {
                at: *at,
                weight: weight * factor,
            },
            Density::Linear { nodes, values } => Density::Linear {
                nodes: nodes.clone(),
                values: values.iter().map(|v| v * factor).collect(),
            },
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        match self {
            Density::Point { at, .. } => vec![*at],
            Density::Linear { nodes, .. } => nodes.clone(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Density::Point { weight, .. } => vec![*weight],
            Density::Linear { values, .. } => values.clone(),
        }
    }
}

/// `g0(u) = ∫₀¹ e^{iut} dt`, `g1(u) = ∫₀¹ t·e^{iut} dt`.
fn segment_weights(u: f64) -> (Complex64, Complex64) {
    let iu = Complex64::new(0.0, u);
    if u.abs() < SERIES_CUTOFF {
        // g0 = Σ (iu)ⁿ/(n+1)!, g1 = Σ (iu)ⁿ/(n!(n+2))
        let mut g0 = Complex64::new(0.0, 0.0);
        let mut g1 = Complex64::new(0.0, 0.0);
        let mut pow_over_fact = Complex64::new(1.0, 0.0);
        for n in 0..14 {
            let nf = n as f64;
            g0 += pow_over_fact / (nf + 1.0);
            g1 += pow_over_fact / (nf + 2.0);
            pow_over_fact = pow_over_fact * iu / (nf + 1.0);
        }
        (g0, g1)
    } else {
        let e = iu.exp();
        let g0 = (e - 1.0) / iu;
        let g1 = e / iu - (e - 1.0) / (iu * iu);
        (g0, g1)
    }
}
