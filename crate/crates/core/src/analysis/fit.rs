//! Least-squares fit of a two-spin pure state to measured correlators.
//!
//! The state is expanded in the Bell basis `(singlet, Φ-, Φ+, Ψ+)` with kets
//! written `|q1 q2>`. Single-spin observables are `σ·a = -sin θ Y + cos θ Z`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

const N: usize = 7;
const STARTS: u64 = 16;
const MAX_ITER: usize = 4000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least 4 distinct angle pairs, got {0}")]
    Underdetermined(usize),
    #[error("data point {0} is not finite")]
    NonFinite(usize),
}

/// One measured setting: angles and the three correlators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitPoint {
    pub theta1: f64,
    pub theta2: f64,
    pub f1: f64,
    pub f2: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureStateFit {
    /// Coefficients of singlet, Φ-, Φ+, Ψ+; the singlet one is real and non-negative.
    pub coefficients: [Complex64; 4],
    /// Sum of squared correlator residuals.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    pub starts: usize,
}

fn bell_to_ket(c: &[Complex64; 4]) -> [Complex64; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [
        (c[1] + c[2]) * r,
        (c[0] + c[3]) * r,
        (c[3] - c[0]) * r,
        (c[2] - c[1]) * r,
    ]
}

fn observable(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, s)],
        [Complex64::new(0.0, -s), Complex64::new(-c, 0.0)],
    ]
}

/// `(E1, E2, E)` for a normalised state given by Bell coefficients.
pub fn model_correlators(coeffs: &[Complex64; 4], theta1: f64, theta2: f64) -> (f64, f64, f64) {
    let psi = bell_to_ket(coeffs);
    let (a, b) = (observable(theta1), observable(theta2));
    let mut e1 = Complex64::new(0.0, 0.0);
    let mut e2 = e1;
    let mut e = e1;
    for i1 in 0..2 {
        for i2 in 0..2 {
            let bra = psi[2 * i1 + i2].conj();
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let ket = psi[2 * j1 + j2];
                    let d1 = if i2 == j2 { a[i1][j1] } else { Complex64::new(0.0, 0.0) };
                    let d2 = if i1 == j1 { b[i2][j2] } else { Complex64::new(0.0, 0.0) };
                    e1 += bra * d1 * ket;
                    e2 += bra * d2 * ket;
                    e += bra * a[i1][j1] * b[i2][j2] * ket;
                }
            }
        }
    }
    (e1.re, e2.re, e.re)
}

fn coeffs_of(x: &[f64; N]) -> [Complex64; 4] {
    let c = [
        Complex64::new(x[0], 0.0),
        Complex64::new(x[1], x[2]),
        Complex64::new(x[3], x[4]),
        Complex64::new(x[5], x[6]),
    ];
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return [Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default(), Complex64::default()];
    }
    c.map(|z| z / norm)
}

fn objective(x: &[f64; N], data: &[FitPoint]) -> f64 {
    let c = coeffs_of(x);
    data.iter()
        .map(|p| {
            let (e1, e2, e) = model_correlators(&c, p.theta1, p.theta2);
            (e1 - p.f1).powi(2) + (e2 - p.f2).powi(2) + (e - p.f).powi(2)
        })
        .sum()
}

fn gradient(x: &[f64; N], data: &[FitPoint]) -> [f64; N] {
    let mut g = [0.0; N];
    for i in 0..N {
        let h = 1e-7 * (1.0 + x[i].abs());
        let (mut up, mut down) = (*x, *x);
        up[i] += h;
        down[i] -= h;
        g[i] = (objective(&up, data) - objective(&down, data)) / (2.0 * h);
    }
    g
}

fn dot(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

struct Run {
    x: [f64; N],
    value: f64,
    converged: bool,
    iterations: usize,
}

/// BFGS with an inverse-Hessian estimate and Armijo backtracking.
fn bfgs(mut x: [f64; N], data: &[FitPoint]) -> Run {
    let mut hinv = [[0.0; N]; N];
    for (i, row) in hinv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut fx = objective(&x, data);
    let mut g = gradient(&x, data);
    for it in 0..MAX_ITER {
        if fx < 1e-24 {
            return Run { x, value: fx, converged: true, iterations: it };
        }
        let mut dir = [0.0; N];
        for i in 0..N {
            dir[i] = -dot(&hinv[i], &g);
        }
        if dot(&dir, &g) >= 0.0 {
            // Lost descent; fall back to steepest descent and reset the estimate.
            dir = g.map(|v| -v);
            for (i, row) in hinv.iter_mut().enumerate() {
                *row = [0.0; N];
                row[i] = 1.0;
            }
        }
        let slope = dot(&dir, &g);
        let mut t = 1.0;
        let mut next = x;
        let mut fnext = fx;
        while t > 1e-20 {
            for i in 0..N {
                next[i] = x[i] + t * dir[i];
            }
            fnext = objective(&next, data);
            if fnext <= fx + 1e-4 * t * slope {
                break;
            }
            t *= 0.5;
        }
        let s: [f64; N] = std::array::from_fn(|i| next[i] - x[i]);
        let step = dot(&s, &s).sqrt();
        if fnext > fx || step < 1e-10 {
            return Run { x, value: fx, converged: true, iterations: it };
        }
        let gnext = gradient(&next, data);
        let y: [f64; N] = std::array::from_fn(|i| gnext[i] - g[i]);
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            let hy: [f64; N] = std::array::from_fn(|i| dot(&hinv[i], &y));
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..N {
                for j in 0..N {
                    hinv[i][j] += rho * rho * (sy + yhy) * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        x = next;
        fx = fnext;
        g = gnext;
    }
    Run { x, value: fx, converged: false, iterations: MAX_ITER }
}

fn canonical(c: [Complex64; 4]) -> [Complex64; 4] {
    let pivot = c.iter().find(|z| z.norm() > 1e-9).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = Complex64::from_polar(1.0, -pivot.arg());
    let mut out = c.map(|z| z * phase);
    out[0].im = 0.0;
    if out[0].re < 0.0 {
        out = out.map(|z| -z);
    }
    out
}

/// Fits pure-state coefficients to correlator data from many random starts.
pub fn fit_pure_state(data: &[FitPoint]) -> Result<PureStateFit, FitError> {
    for (i, p) in data.iter().enumerate() {
        if ![p.theta1, p.theta2, p.f1, p.f2, p.f].iter().all(|v| v.is_finite()) {
            return Err(FitError::NonFinite(i));
        }
    }
    let mut settings: Vec<(u64, u64)> = data.iter().map(|p| (p.theta1.to_bits(), p.theta2.to_bits())).collect();
    settings.sort_unstable();
    settings.dedup();
    if settings.len() < 4 {
        return Err(FitError::Underdetermined(settings.len()));
    }
    let runs: Vec<Run> = (0..STARTS)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0: [f64; N] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            bfgs(x0, data)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    Ok(PureStateFit {
        coefficients: canonical(coeffs_of(&best.x)),
        residual: best.value,
        converged: best.converged,
        iterations,
        starts: STARTS as usize,
    })
}
