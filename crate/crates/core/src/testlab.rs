//! Bivariate test functions with closed-form derivatives up to order two,
//! relative error metrics, and the uniform noise model.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffengine::{gradient_sensitivity, solve_coefficients, DiffReport, Interpolant};
use crate::error::{Error, Result};
use crate::leja::Stencil;
use crate::multiindex::MultiIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    /// Franke's four-Gaussian surface.
    F1,
    /// `exp(x + y)`.
    F2,
    /// `2 cos(10x) sin(10y) + sin(10xy)`.
    F3,
}

/// `c exp(-(ax (9x - px)^2 + ay (9y - py)^2))`
struct Bump {
    c: f64,
    ax: f64,
    px: f64,
    ay: f64,
    py: f64,
}

const FRANKE: [Bump; 4] = [
    Bump { c: 0.75, ax: 0.25, px: 2.0, ay: 0.25, py: 2.0 },
    Bump { c: 0.50, ax: 0.25, px: 7.0, ay: 0.25, py: 3.0 },
    Bump { c: 0.75, ax: 1.0 / 49.0, px: -1.0, ay: 0.1, py: -1.0 },
    Bump { c: -0.20, ax: 1.0, px: 4.0, ay: 1.0, py: 7.0 },
];

impl Bump {
    /// (value, fx, fy, fxx, fxy, fyy)
    fn eval(&self, x: f64, y: f64) -> [f64; 6] {
        let u = 9.0 * x - self.px;
        let v = 9.0 * y - self.py;
        let e = self.c * (-(self.ax * u * u + self.ay * v * v)).exp();
        let gx = -18.0 * self.ax * u;
        let gy = -18.0 * self.ay * v;
        [
            e,
            e * gx,
            e * gy,
            e * (gx * gx - 162.0 * self.ax),
            e * gx * gy,
            e * (gy * gy - 162.0 * self.ay),
        ]
    }
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [TestFunction::F1, TestFunction::F2, TestFunction::F3];

    fn all_terms(self, p: &[f64]) -> [f64; 6] {
        let (x, y) = (p[0], p[1]);
        match self {
            TestFunction::F1 => FRANKE.iter().fold([0.0; 6], |mut acc, b| {
                for (a, t) in acc.iter_mut().zip(b.eval(x, y)) {
                    *a += t;
                }
                acc
            }),
            TestFunction::F2 => [(x + y).exp(); 6],
            TestFunction::F3 => {
                let (s10x, c10x) = (10.0 * x).sin_cos();
                let (s10y, c10y) = (10.0 * y).sin_cos();
                let (sxy, cxy) = (10.0 * x * y).sin_cos();
                [
                    2.0 * c10x * s10y + sxy,
                    -20.0 * s10x * s10y + 10.0 * y * cxy,
                    20.0 * c10x * c10y + 10.0 * x * cxy,
                    -200.0 * c10x * s10y - 100.0 * y * y * sxy,
                    -200.0 * s10x * c10y + 10.0 * cxy - 100.0 * x * y * sxy,
                    -200.0 * c10x * s10y - 100.0 * x * x * sxy,
                ]
            }
        }
    }

    pub fn value(self, p: &[f64]) -> f64 {
        self.all_terms(p)[0]
    }

    pub fn gradient(self, p: &[f64]) -> [f64; 2] {
        let t = self.all_terms(p);
        [t[1], t[2]]
    }

    /// `(f_xx, f_xy, f_yy)`.
    pub fn hessian(self, p: &[f64]) -> [f64; 3] {
        let t = self.all_terms(p);
        [t[3], t[4], t[5]]
    }

    pub fn sample(self, points: &crate::pointset::PointCloud) -> Vec<f64> {
        points.iter().map(|p| self.value(p)).collect()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestFunction::F1 => "f1",
            TestFunction::F2 => "f2",
            TestFunction::F3 => "f3",
        })
    }
}

impl FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(TestFunction::F1),
            "f2" => Ok(TestFunction::F2),
            "f3" => Ok(TestFunction::F3),
            _ => Err(Error::Config(format!("unknown test function {s:?} (f1|f2|f3)"))),
        }
    }
}

/// A relative error, or the absolute error when the reference vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub value: f64,
    /// Set when the reference was zero and `value` is an absolute error.
    pub absolute: bool,
}

impl Metric {
    pub fn relative(error: &[f64], reference: &[f64]) -> Metric {
        let num = norm2(error);
        let den = norm2(reference);
        if den == 0.0 {
            Metric { value: num, absolute: true }
        } else {
            Metric { value: num / den, absolute: false }
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `fe`, `ge`, `sde` at the stencil center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelativeErrors {
    pub fe: Metric,
    pub ge: Metric,
    /// Requires an interpolation degree of at least 2.
    pub sde: Option<Metric>,
}

fn gradient_of(p: &Interpolant) -> Result<[f64; 2]> {
    Ok([
        p.derivative_at_center(&MultiIndex::new(vec![1, 0]))?,
        p.derivative_at_center(&MultiIndex::new(vec![0, 1]))?,
    ])
}

fn hessian_of(p: &Interpolant) -> Result<[f64; 3]> {
    Ok([
        p.derivative_at_center(&MultiIndex::new(vec![2, 0]))?,
        p.derivative_at_center(&MultiIndex::new(vec![1, 1]))?,
        p.derivative_at_center(&MultiIndex::new(vec![0, 2]))?,
    ])
}

/// Relative errors of value, gradient and Hessian triple against the exact
/// derivatives of `f` at the center.
pub fn relative_errors(report: &DiffReport, f: TestFunction) -> Result<RelativeErrors> {
    let p = &report.interpolant;
    if p.center.len() != 2 {
        return Err(Error::Dimension { expected: 2, found: p.center.len() });
    }
    if p.degree < 1 {
        return Err(Error::OrderTooHigh { order: 1, degree: p.degree });
    }
    let c = &p.center;
    let fe = Metric::relative(&[f.value(c) - p.coefficients[0]], &[f.value(c)]);
    let grad = f.gradient(c);
    let ge = Metric::relative(&diff(&grad, &gradient_of(p)?), &grad);
    let sde = if p.degree >= 2 {
        let hess = f.hessian(c);
        Some(Metric::relative(&diff(&hess, &hessian_of(p)?), &hess))
    } else {
        None
    };
    Ok(RelativeErrors { fe, ge, sde })
}

/// `values + U(-ε, ε)` entrywise; deterministic per seed.
pub fn perturb(values: &[f64], epsilon: f64, seed: u64) -> Vec<f64> {
    assert!(epsilon >= 0.0, "noise bound must be non-negative");
    if epsilon == 0.0 {
        return values.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    values
        .iter()
        .map(|&v| v + rng.gen_range(-epsilon..=epsilon))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbedGradientMetrics {
    /// `‖∇f - ∇p̃‖₂ / ‖∇f‖₂`
    pub gep: Metric,
    /// `‖∇p - ∇p̃‖₂ / ‖∇f‖₂`
    pub gs: Metric,
    /// Stability-constant estimate of `gs`.
    pub gse: Metric,
}

/// Gradient metrics under data noise of size `ε`.
///
/// `∇p - ∇p̃` is obtained by interpolating the noise vector itself, which is
/// the same quantity by linearity and keeps its rounding error relative to `ε`.
pub fn perturbed_gradient_metrics(
    stencil: &Stencil,
    f: TestFunction,
    epsilon: f64,
    seed: u64,
) -> Result<PerturbedGradientMetrics> {
    if stencil.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: stencil.dim() });
    }
    if stencil.degree() < 1 {
        return Err(Error::OrderTooHigh { order: 1, degree: stencil.degree() });
    }
    let y = f.sample(stencil.nodes());
    let y_noisy = perturb(&y, epsilon, seed);
    let noise: Vec<f64> = y_noisy.iter().zip(&y).map(|(a, b)| a - b).collect();

    let grad_f = f.gradient(stencil.center());
    let noisy = crate::diffengine::interpolate(stencil, &y_noisy, 1)?;
    let gep = Metric::relative(&diff(&grad_f, &gradient_of(&noisy.interpolant)?), &grad_f);

    let delta = gradient_from_coefficients(stencil, &solve_coefficients(stencil, &noise)?);
    let gs = Metric::relative(&delta, &grad_f);
    let gse = Metric::relative(&[gradient_sensitivity(stencil, epsilon)?], &grad_f);
    Ok(PerturbedGradientMetrics { gep, gs, gse })
}

fn gradient_from_coefficients(stencil: &Stencil, c: &[f64]) -> Vec<f64> {
    (0..stencil.dim())
        .map(|j| c[1 + j] / stencil.h())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    // straight transcription of the Franke display, kept apart from `Bump`
    fn franke_direct(x: f64, y: f64) -> f64 {
        0.75 * (-((9.0 * x - 2.0).powi(2) + (9.0 * y - 2.0).powi(2)) / 4.0).exp()
            + 0.50 * (-((9.0 * x - 7.0).powi(2) + (9.0 * y - 3.0).powi(2)) / 4.0).exp()
            + 0.75 * (-(9.0 * x + 1.0).powi(2) / 49.0 - (9.0 * y + 1.0).powi(2) / 10.0).exp()
            - 0.20 * (-(9.0 * x - 4.0).powi(2) - (9.0 * y - 7.0).powi(2)).exp()
    }

    #[test]
    fn franke_matches_transcription() {
        for p in [[0.5, 0.5], [0.1, 0.9], [0.0, 0.0], [0.77, 0.31]] {
            let a = TestFunction::F1.value(&p);
            let b = franke_direct(p[0], p[1]);
            assert!((a - b).abs() <= 1e-15, "{p:?} {a} {b}");
        }
    }

    #[test]
    fn exponential_and_oscillatory_values() {
        assert_eq!(TestFunction::F2.value(&[0.0, 0.0]), 1.0);
        let e = std::f64::consts::E;
        let c = [0.5, 0.5];
        for v in TestFunction::F2.gradient(&c).iter().chain(&TestFunction::F2.hessian(&c)) {
            assert!((v - e).abs() < 1e-15);
        }
        assert_eq!(TestFunction::F3.value(&[0.0, 0.0]), 0.0);
        let g = TestFunction::F3.gradient(&c);
        assert!(g[0].abs() + g[1].abs() > 0.0);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in TestFunction::ALL {
            for _ in 0..100 {
                let p = [rng.gen::<f64>(), rng.gen::<f64>()];
                let h1 = 1e-6;
                let fd_x = (f.value(&[p[0] + h1, p[1]]) - f.value(&[p[0] - h1, p[1]])) / (2.0 * h1);
                let fd_y = (f.value(&[p[0], p[1] + h1]) - f.value(&[p[0], p[1] - h1])) / (2.0 * h1);
                let g = f.gradient(&p);
                let gscale = norm2(&g).max(1.0);
                assert!((fd_x - g[0]).abs() <= 1e-5 * gscale, "{f} fx at {p:?}");
                assert!((fd_y - g[1]).abs() <= 1e-5 * gscale, "{f} fy at {p:?}");

                let h2 = 1e-4;
                let v = |dx: f64, dy: f64| f.value(&[p[0] + dx, p[1] + dy]);
                let fxx = (v(h2, 0.0) - 2.0 * v(0.0, 0.0) + v(-h2, 0.0)) / (h2 * h2);
                let fyy = (v(0.0, h2) - 2.0 * v(0.0, 0.0) + v(0.0, -h2)) / (h2 * h2);
                let fxy = (v(h2, h2) - v(h2, -h2) - v(-h2, h2) + v(-h2, -h2)) / (4.0 * h2 * h2);
                let hs = f.hessian(&p);
                let hscale = norm2(&hs).max(1.0);
                for (fd, exact) in [(fxx, hs[0]), (fxy, hs[1]), (fyy, hs[2])] {
                    assert!((fd - exact).abs() <= 1e-5 * hscale, "{f} hessian at {p:?}: {fd} {exact}");
                }
            }
        }
    }

    #[test]
    fn perturbation_properties() {
        let y = vec![1.0; 100_000];
        assert_eq!(perturb(&y, 0.0, 3), y);
        let eps = 1e-3;
        let z = perturb(&y, eps, 3);
        assert_eq!(z, perturb(&y, eps, 3));
        let mean = z.iter().map(|v| v - 1.0).sum::<f64>() / z.len() as f64;
        assert!(z.iter().all(|v| (v - 1.0).abs() <= eps * (1.0 + 1e-12)));
        assert!(mean.abs() < 0.01 * eps, "{mean}");
    }

    #[test]
    fn zero_reference_is_flagged() {
        let m = Metric::relative(&[0.25], &[0.0]);
        assert!(m.absolute);
        assert_eq!(m.value, 0.25);
    }

    #[test]
    fn parse_names() {
        assert_eq!("f2".parse::<TestFunction>().unwrap(), TestFunction::F2);
        assert!("f4".parse::<TestFunction>().is_err());
    }
}
