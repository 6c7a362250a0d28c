//! Local interpolation on a [`Stencil`] and pointwise derivative estimates.
//!
//! With `p(x) = Σ_α c_{α,h} ((x - c)/h)^α`, the estimate of `D^ν f(c)` is
//! `ν! c_{ν,h} / h^{|ν|}`. The same inverse Vandermonde matrix yields the
//! fundamental Lagrange polynomials, the stability constant
//! `Σ_i |D^ν ℓ_i(c)| = ν! h^{-|ν|} Σ_i |a^i_{ν,h}|`, a discrete estimate of the
//! Lebesgue constant, and the three bound factors compared in the error
//! analysis (active coefficients, Lebesgue, condition number). Bounds are
//! reported per unit `C^{d,1}` seminorm of the sampled function.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::{self, factorial_ratio, MonomialBasis, MultiIndex};
use crate::pointset::{distance, halton_coords};
use crate::leja::Stencil;

pub const DEFAULT_ORDER: usize = 2;
pub const DEFAULT_PROBES: usize = 4000;
pub const REPORT_VERSION: u32 = 1;

/// `D^ν` applied to every scaled basis monomial, evaluated at scaled point `z`:
/// entry `α` is `h^{-|ν|} α!/(α-ν)! z^{α-ν}` for `α >= ν` and zero otherwise.
fn derivative_weights(basis: &MonomialBasis, nu: &MultiIndex, z: &[f64], h: f64) -> Result<Vec<f64>> {
    let powers = basis.evaluate(z);
    let scale = h.powi(-(nu.degree() as i32));
    basis
        .indices()
        .iter()
        .map(|alpha| match alpha.checked_sub(nu) {
            Some(rest) => {
                let ratio = factorial_ratio(alpha, nu)? as f64;
                Ok(scale * ratio * powers[multiindex::rank(&rest)])
            }
            None => Ok(0.0),
        })
        .collect()
}

/// Interpolating polynomial in the scaled shifted basis.
#[derive(Clone, Debug, Serialize)]
pub struct Interpolant {
    pub center: Vec<f64>,
    pub h: f64,
    pub degree: usize,
    /// `c_h`, in graded word order.
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    basis: MonomialBasis,
}

impl Interpolant {
    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    fn check_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.center.len() {
            return Err(Error::Dimension {
                expected: self.center.len(),
                found: x.len(),
            });
        }
        Ok(x.iter().zip(&self.center).map(|(a, c)| (a - c) / self.h).collect())
    }

    fn check_order(&self, nu: &MultiIndex) -> Result<()> {
        if nu.dim() != self.center.len() {
            return Err(Error::Dimension {
                expected: self.center.len(),
                found: nu.dim(),
            });
        }
        if nu.degree() > self.degree {
            return Err(Error::OrderTooHigh {
                order: nu.degree(),
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// `p(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let z = self.check_point(x)?;
        let phi = self.basis.evaluate(&z);
        Ok(phi.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum())
    }

    /// `D^ν p(x) = Σ_{α>=ν} c_{α,h} h^{-|α|} α!/(α-ν)! (x - c)^{α-ν}`.
    pub fn evaluate_derivative(&self, nu: &MultiIndex, x: &[f64]) -> Result<f64> {
        self.check_order(nu)?;
        let z = self.check_point(x)?;
        let w = derivative_weights(&self.basis, nu, &z, self.h)?;
        Ok(w.iter().zip(&self.coefficients).map(|(a, b)| a * b).sum())
    }

    /// `ν! c_{ν,h} / h^{|ν|}`, the estimate of `D^ν f(c)`.
    pub fn derivative_at_center(&self, nu: &MultiIndex) -> Result<f64> {
        self.check_order(nu)?;
        let pos = self.basis.position(nu).expect("order checked");
        let fact = nu.factorial()? as f64;
        Ok(fact * self.coefficients[pos] / self.h.powi(nu.degree() as i32))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub nu: MultiIndex,
    pub value: f64,
    /// `Σ_i |D^ν ℓ_i(c)|`.
    pub stability_constant: f64,
}

/// The three comparable factors of the pointwise error bounds at the center,
/// per unit seminorm, plus the shared factors.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundTerms {
    pub nu: MultiIndex,
    /// `ν! Σ_i |a^i_{ν,h}|`
    pub active_coeff: f64,
    /// `M_{d,ν} Λ_d(σ)`
    pub lebesgue_term: f64,
    /// `ν! cond_h(σ)`
    pub cond_term: f64,
    pub k_d: f64,
    pub k_d_minus_nu: f64,
    /// `h^{d-|ν|+1}`
    pub h_power: f64,
}

impl BoundTerms {
    /// Each bound at the center, `k_d h^{d-|ν|+1}` times the factor.
    pub fn bounds(&self) -> [f64; 3] {
        let common = self.k_d * self.h_power;
        [
            common * self.active_coeff,
            common * self.lebesgue_term,
            common * self.cond_term,
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub cond: f64,
    pub lebesgue: f64,
    pub probe_count: usize,
    pub bounds: Vec<BoundTerms>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffReport {
    pub format: &'static str,
    pub version: u32,
    pub node_count: usize,
    pub candidate_count: usize,
    pub order: usize,
    /// `‖V c - y‖_∞`
    pub residual: f64,
    pub cond: f64,
    pub interpolant: Interpolant,
    pub estimates: Vec<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

impl DiffReport {
    /// See [`derivative_estimate`].
    pub fn derivative(&self, nu: &MultiIndex) -> Result<f64> {
        self.interpolant.derivative_at_center(nu)
    }

    pub fn estimate(&self, nu: &MultiIndex) -> Option<&Estimate> {
        self.estimates.iter().find(|e| &e.nu == nu)
    }

    /// Fills the bound diagnostics for every `ν` of the estimate table.
    pub fn with_diagnostics(mut self, stencil: &Stencil, probe_count: usize, seed: u64) -> Result<Self> {
        let lebesgue = lebesgue_estimate(stencil, probe_count, seed)?;
        let bounds = self
            .estimates
            .iter()
            .map(|e| bound_terms_with(stencil, &e.nu, lebesgue))
            .collect::<Result<Vec<_>>>()?;
        self.diagnostics = Some(Diagnostics {
            cond: self.cond,
            lebesgue,
            probe_count,
            bounds,
        });
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Solves the scaled interpolation system for `values` (in node order) and
/// tabulates derivative estimates for `|ν| <= min(order, d)`.
pub fn interpolate(stencil: &Stencil, values: &[f64], order: usize) -> Result<DiffReport> {
    let coefficients = solve_coefficients(stencil, values)?;
    let fitted = stencil.vandermonde().matrix.matvec(&coefficients);
    let residual = fitted
        .iter()
        .zip(values)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));

    let interpolant = Interpolant {
        center: stencil.center().to_vec(),
        h: stencil.h(),
        degree: stencil.degree(),
        coefficients,
        basis: stencil.basis().clone(),
    };
    let order = order.min(stencil.degree());
    let estimates = multiindex::enumerate(stencil.dim(), order)
        .into_iter()
        .map(|nu| {
            Ok(Estimate {
                value: interpolant.derivative_at_center(&nu)?,
                stability_constant: stability_constant(stencil, &nu)?,
                nu,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DiffReport {
        format: "lejadiff.diff-report",
        version: REPORT_VERSION,
        node_count: stencil.len(),
        candidate_count: stencil.candidate_count(),
        order,
        residual,
        cond: stencil.cond(),
        interpolant,
        estimates,
        diagnostics: None,
    })
}

/// Coefficients `c_h` only.
pub fn solve_coefficients(stencil: &Stencil, values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != stencil.len() {
        return Err(Error::Dimension {
            expected: stencil.len(),
            found: values.len(),
        });
    }
    stencil.factors().solve(values)
}

/// `ν! c_{ν,h} / h^{|ν|}`.
pub fn derivative_estimate(report: &DiffReport, nu: &MultiIndex) -> Result<f64> {
    report.derivative(nu)
}

/// Columns `a_h^i` of the inverse scaled Vandermonde matrix.
pub fn lagrange_coefficients(stencil: &Stencil) -> &crate::linalg::Matrix {
    stencil.inverse()
}

/// `(ℓ_1(x), ..., ℓ_m(x))`.
pub fn lagrange_values(stencil: &Stencil, x: &[f64]) -> Vec<f64> {
    let z = stencil.scaled(x);
    let phi = stencil.basis().evaluate(&z);
    stencil.inverse().vecmat(&phi)
}

/// `Σ_i |ℓ_i(x)|`.
pub fn lebesgue_function(stencil: &Stencil, x: &[f64]) -> f64 {
    lagrange_values(stencil, x).iter().map(|v| v.abs()).sum()
}

/// `(D^ν ℓ_1(x), ..., D^ν ℓ_m(x))`.
pub fn lagrange_derivatives(stencil: &Stencil, nu: &MultiIndex, x: &[f64]) -> Result<Vec<f64>> {
    stencil.position(nu)?;
    let z = stencil.scaled(x);
    let w = derivative_weights(stencil.basis(), nu, &z, stencil.h())?;
    Ok(stencil.inverse().vecmat(&w))
}

/// Stability constant `ν! h^{-|ν|} Σ_i |a^i_{ν,h}|`, read off row `ν` of `V^{-1}`.
pub fn stability_constant(stencil: &Stencil, nu: &MultiIndex) -> Result<f64> {
    let pos = stencil.position(nu)?;
    let inv = stencil.inverse();
    let row_sum: f64 = (0..inv.cols()).map(|i| inv[(pos, i)].abs()).sum();
    Ok(nu.factorial()? as f64 * stencil.h().powi(-(nu.degree() as i32)) * row_sum)
}

/// `ν! Σ_i |a^i_{ν,h}|` without the `h` power.
pub fn active_coefficients(stencil: &Stencil, nu: &MultiIndex) -> Result<f64> {
    let pos = stencil.position(nu)?;
    let inv = stencil.inverse();
    let row_sum: f64 = (0..inv.cols()).map(|i| inv[(pos, i)].abs()).sum();
    Ok(nu.factorial()? as f64 * row_sum)
}

/// Stability function `Σ_i |D^ν ℓ_i(x)|`.
pub fn stability_function(stencil: &Stencil, nu: &MultiIndex, x: &[f64]) -> Result<f64> {
    Ok(lagrange_derivatives(stencil, nu, x)?
        .iter()
        .map(|v| v.abs())
        .sum())
}

/// Probe points for the Lebesgue estimate: Halton points of the box around
/// the ball `B_h(c)`, starting at sequence index `1 + seed`, kept when they
/// fall in the ball and the stencil's domain box.
pub fn lebesgue_probes(stencil: &Stencil, probe_count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let dim = stencil.dim();
    let c = stencil.center();
    let h = stencil.h();
    let mut probes = Vec::with_capacity(probe_count);
    let mut next = 1 + seed;
    let batch = probe_count.max(64);
    // the ball-domain intersection always holds a positive fraction of the box
    let max_draws = probe_count.saturating_mul(1000).max(10_000) as u64;
    while probes.len() < probe_count && next - 1 - seed < max_draws {
        let coords = halton_coords(next, batch, dim)?;
        next += batch as u64;
        for u in coords.chunks_exact(dim) {
            let x: Vec<f64> = u
                .iter()
                .zip(c)
                .map(|(&u, &cj)| cj + h * (2.0 * u - 1.0))
                .collect();
            if distance(&x, c) <= h && stencil.domain().contains(&x) {
                probes.push(x);
                if probes.len() == probe_count {
                    break;
                }
            }
        }
    }
    Ok(probes)
}

/// Lower estimate of `Λ_d(σ)`: the largest `Σ_i |ℓ_i(x)|` over the nodes, the
/// center, and `probe_count` low-discrepancy points of `B_h(c) ∩ domain`.
pub fn lebesgue_estimate(stencil: &Stencil, probe_count: usize, seed: u64) -> Result<f64> {
    let mut points: Vec<Vec<f64>> = stencil.nodes().iter().map(<[f64]>::to_vec).collect();
    points.push(stencil.center().to_vec());
    points.extend(lebesgue_probes(stencil, probe_count, seed)?);
    // warm the cached inverse before fanning out
    stencil.inverse();
    Ok(points
        .par_iter()
        .map(|x| lebesgue_function(stencil, x))
        .reduce(|| 0.0, f64::max))
}

/// `k_j = s^j / (j-1)!` for `j > 0`, `k_0 = 1`.
pub fn k_factor(j: usize, dim: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let fact: f64 = (1..j).map(|k| k as f64).product();
    (dim as f64).powi(j as i32) / fact
}

/// `M_{d,ν} = Π_{j=0}^{|ν|-1} (d-j)²`.
pub fn markov_factor(degree: usize, nu: &MultiIndex) -> Result<f64> {
    let order = nu.degree();
    if order > degree {
        return Err(Error::OrderTooHigh { order, degree });
    }
    Ok((0..order).map(|j| ((degree - j) as f64).powi(2)).product())
}

fn bound_terms_with(stencil: &Stencil, nu: &MultiIndex, lebesgue: f64) -> Result<BoundTerms> {
    let d = stencil.degree();
    let order = nu.degree();
    let fact = nu.factorial()? as f64;
    Ok(BoundTerms {
        nu: nu.clone(),
        active_coeff: active_coefficients(stencil, nu)?,
        lebesgue_term: markov_factor(d, nu)? * lebesgue,
        cond_term: fact * stencil.cond(),
        k_d: k_factor(d, stencil.dim()),
        k_d_minus_nu: k_factor(d - order, stencil.dim()),
        h_power: stencil.h().powi((d - order + 1) as i32),
    })
}

/// Bound factors for `ν`, with `Λ_d` estimated from `probe_count` probes.
pub fn bound_terms(stencil: &Stencil, nu: &MultiIndex, probe_count: usize, seed: u64) -> Result<BoundTerms> {
    stencil.position(nu)?;
    let lebesgue = lebesgue_estimate(stencil, probe_count, seed)?;
    bound_terms_with(stencil, nu, lebesgue)
}

/// Bound factors for several `ν` sharing one Lebesgue estimate.
pub fn bound_terms_many(
    stencil: &Stencil,
    nus: &[MultiIndex],
    probe_count: usize,
    seed: u64,
) -> Result<Vec<BoundTerms>> {
    let lebesgue = lebesgue_estimate(stencil, probe_count, seed)?;
    nus.iter().map(|nu| bound_terms_with(stencil, nu, lebesgue)).collect()
}

/// `ε Σ_i |D^ν ℓ_i(c)|`: worst-case change of the `D^ν` estimate under data
/// perturbations bounded by `ε`.
pub fn sensitivity_estimate(stencil: &Stencil, nu: &MultiIndex, epsilon: f64) -> Result<f64> {
    Ok(epsilon * stability_constant(stencil, nu)?)
}

/// Euclidean norm of the first-order sensitivity estimates, i.e. the
/// numerator of the gradient sensitivity estimate.
pub fn gradient_sensitivity(stencil: &Stencil, epsilon: f64) -> Result<f64> {
    let dim = stencil.dim();
    let mut acc = 0.0;
    for j in 0..dim {
        let s = sensitivity_estimate(stencil, &MultiIndex::unit(dim, j), epsilon)?;
        acc += s * s;
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leja::extract_leja;
    use crate::pointset::{halton_points, points_in_ball};

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn stencil(n: usize, center: [f64; 2], r: f64, d: usize) -> Stencil {
        let cloud = halton_points(n, 2).unwrap();
        let cand = points_in_ball(&cloud, &center, r).unwrap();
        extract_leja(&cand, &center, d).unwrap()
    }

    fn sample(st: &Stencil, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        st.nodes().iter().map(f).collect()
    }

    #[test]
    fn constants_are_reproduced() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 6);
        let rep = interpolate(&st, &vec![1.0; st.len()], 2).unwrap();
        assert!((rep.derivative(&mi(&[0, 0])).unwrap() - 1.0).abs() < 1e-12 * st.cond());
        for e in rep.estimates.iter().filter(|e| e.nu.degree() > 0) {
            assert!(e.value.abs() < 1e-10 * st.cond(), "{} {}", e.nu, e.value);
        }
    }

    #[test]
    fn quadratic_is_exact() {
        let st = stencil(1000, [0.4, 0.55], 0.3, 2);
        let rep = interpolate(&st, &sample(&st, |p| p[0] * p[0] + p[1]), 2).unwrap();
        let tol = 1e-10 * st.cond();
        assert!((rep.derivative(&mi(&[1, 0])).unwrap() - 0.8).abs() < tol);
        assert!((rep.derivative(&mi(&[0, 1])).unwrap() - 1.0).abs() < tol);
        assert!((rep.derivative(&mi(&[2, 0])).unwrap() - 2.0).abs() < tol);
        assert!(rep.derivative(&mi(&[1, 1])).unwrap().abs() < tol);
        assert!(matches!(
            rep.derivative(&mi(&[3, 0])),
            Err(Error::OrderTooHigh { order: 3, degree: 2 })
        ));
    }

    #[test]
    fn interpolation_conditions_hold() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 5);
        let y = sample(&st, |p| (3.0 * p[0]).sin() + p[1].exp());
        let rep = interpolate(&st, &y, 2).unwrap();
        for (p, v) in st.nodes().iter().zip(&y) {
            assert!((rep.interpolant.evaluate(p).unwrap() - v).abs() < 1e-12 * st.cond());
        }
        assert_eq!(
            rep.interpolant.evaluate(st.center()).unwrap(),
            rep.interpolant.coefficients[0]
        );
        assert!(rep.residual < 1e-13 * st.cond());
    }

    #[test]
    fn derivative_formulas_agree_at_center() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 7);
        let y = sample(&st, |p| (p[0] - 2.0 * p[1]).cos());
        let rep = interpolate(&st, &y, 7).unwrap();
        for nu in multiindex::enumerate(2, 7) {
            let a = rep.derivative(&nu).unwrap();
            let b = rep.interpolant.evaluate_derivative(&nu, st.center()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{nu}");
        }
    }

    #[test]
    fn stability_constant_matches_function_at_center() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 5);
        for nu in multiindex::enumerate(2, 3) {
            let a = stability_constant(&st, &nu).unwrap();
            let b = stability_function(&st, &nu, st.center()).unwrap();
            assert!((a - b).abs() <= 1e-8 * a, "{nu}: {a} {b}");
        }
        assert!(stability_constant(&st, &mi(&[0, 0])).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn k_and_markov_factors() {
        assert_eq!(k_factor(0, 2), 1.0);
        assert_eq!(k_factor(1, 2), 2.0);
        assert!((k_factor(5, 2) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(markov_factor(5, &mi(&[0, 0])).unwrap(), 1.0);
        assert_eq!(markov_factor(5, &mi(&[1, 0])).unwrap(), 25.0);
        assert_eq!(markov_factor(5, &mi(&[1, 1])).unwrap(), 400.0);
        assert!(markov_factor(1, &mi(&[1, 1])).is_err());
    }

    #[test]
    fn single_node_bounds() {
        let cand = crate::pointset::PointCloud::from_points(2, &[vec![0.6, 0.5]]).unwrap();
        let st = extract_leja(&cand, &[0.5, 0.5], 0).unwrap();
        let b = bound_terms(&st, &mi(&[0, 0]), 100, 0).unwrap();
        assert_eq!(b.active_coeff, 1.0);
        assert_eq!(b.cond_term, 1.0);
        assert_eq!(b.lebesgue_term, 1.0);
        assert_eq!(lebesgue_estimate(&st, 10, 0).unwrap(), 1.0);
    }

    #[test]
    fn sensitivity_zero_epsilon() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 4);
        assert_eq!(sensitivity_estimate(&st, &mi(&[1, 0]), 0.0).unwrap(), 0.0);
        assert_eq!(gradient_sensitivity(&st, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn lebesgue_grows_with_probes() {
        let st = stencil(1000, [0.5, 0.5], 0.5, 8);
        let mut last = 0.0;
        for probes in [0, 10, 100, 1000] {
            let l = lebesgue_estimate(&st, probes, 3).unwrap();
            assert!(l >= last);
            assert!(l >= 1.0);
            last = l;
        }
    }

    #[test]
    fn probes_stay_in_ball_and_box() {
        let st = stencil(2000, [1.0, 1.0], 0.25, 5);
        let probes = lebesgue_probes(&st, 500, 0).unwrap();
        assert_eq!(probes.len(), 500);
        for p in &probes {
            assert!(distance(p, st.center()) <= st.h());
            assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }
}
