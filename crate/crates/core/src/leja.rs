//! Discrete Leja Points extracted from a candidate set by row-pivoted LU on
//! the rectangular scaled Vandermonde matrix.
//!
//! Because the basis is graded, the first `binom(k+s, s)` selected nodes are
//! the Leja nodes for degree `k`, for every `k <= d`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{cond_1, lu_row_pivot, LuFactors, Matrix, RANK_TOLERANCE};
use crate::multiindex::{space_dimension, MonomialBasis, MultiIndex};
use crate::pointset::{DomainBox, PointCloud};
use crate::vandermonde::{build_scaled_vandermonde, compute_h, ScaledVandermonde};

/// Largest `d` with `binom(d + s, s) <= n`.
pub fn max_feasible_degree(candidate_count: usize, dim: usize) -> usize {
    assert!(candidate_count >= 1);
    let mut d = 0;
    while space_dimension(dim, d + 1) <= candidate_count {
        d += 1;
    }
    d
}

/// A unisolvent local node set with its factorized scaled Vandermonde matrix.
#[derive(Debug)]
pub struct Stencil {
    center: Vec<f64>,
    basis: MonomialBasis,
    nodes: PointCloud,
    selection: Vec<usize>,
    h: f64,
    vandermonde: ScaledVandermonde,
    lu: LuFactors,
    extraction_pivots: Vec<f64>,
    candidate_count: usize,
    domain: DomainBox,
    inverse: OnceLock<Matrix>,
}

/// Extracts `binom(d+s, s)` Discrete Leja Points from `candidates` around `center`.
pub fn extract_leja(candidates: &PointCloud, center: &[f64], degree: usize) -> Result<Stencil> {
    extract_leja_with_scale(candidates, center, degree, None)
}

/// As [`extract_leja`], with an explicit scale for the rectangular selection
/// matrix instead of the largest candidate distance. The selected nodes do not
/// depend on this scale.
pub fn extract_leja_with_scale(
    candidates: &PointCloud,
    center: &[f64],
    degree: usize,
    initial_scale: Option<f64>,
) -> Result<Stencil> {
    let dim = candidates.dim();
    if center.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: center.len(),
        });
    }
    let basis = MonomialBasis::new(dim, degree);
    let m = basis.len();
    let n = candidates.len();
    if n < m {
        return Err(Error::InsufficientPoints {
            degree,
            needed: m,
            available: n,
        });
    }

    let h0 = match initial_scale {
        Some(h0) => h0,
        None => compute_h(candidates.iter(), center).or_else(|e| {
            // every candidate sits on the center: only a constant is determined
            if degree == 0 { Ok(1.0) } else { Err(e) }
        })?,
    };
    let tall = build_scaled_vandermonde(candidates, center, h0, &basis)?;
    let selection_lu = lu_row_pivot(&tall.matrix, RANK_TOLERANCE)?;
    let selection = selection_lu.pivot_rows().to_vec();
    let extraction_pivots = selection_lu.pivot_magnitudes().to_vec();

    let nodes = candidates.select(&selection);
    let h = match compute_h(nodes.iter(), center) {
        Ok(h) => h,
        Err(Error::DegenerateScale) if degree == 0 => 1.0,
        Err(e) => return Err(e),
    };
    let vandermonde = build_scaled_vandermonde(&nodes, center, h, &basis)?;
    let lu = lu_row_pivot(&vandermonde.matrix, RANK_TOLERANCE)?;

    Ok(Stencil {
        center: center.to_vec(),
        basis,
        nodes,
        selection,
        h,
        vandermonde,
        lu,
        extraction_pivots,
        candidate_count: n,
        domain: candidates.domain().clone(),
        inverse: OnceLock::new(),
    })
}

impl Stencil {
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Number of nodes, `binom(d+s, s)`.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Selected nodes, in pivot order.
    pub fn nodes(&self) -> &PointCloud {
        &self.nodes
    }

    /// Positions of the nodes within the candidate cloud.
    pub fn selection(&self) -> &[usize] {
        &self.selection
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn candidate_count(&self) -> usize {
        self.candidate_count
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn vandermonde(&self) -> &ScaledVandermonde {
        &self.vandermonde
    }

    pub fn factors(&self) -> &LuFactors {
        &self.lu
    }

    /// Pivot magnitudes recorded while selecting the nodes.
    pub fn extraction_pivots(&self) -> &[f64] {
        &self.extraction_pivots
    }

    pub fn position(&self, nu: &MultiIndex) -> Result<usize> {
        if nu.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: nu.dim(),
            });
        }
        self.basis.position(nu).ok_or(Error::OrderTooHigh {
            order: nu.degree(),
            degree: self.degree(),
        })
    }

    /// `V^{-1}` in the scaled basis; column `i` holds the coefficients
    /// `a_h^i` of the fundamental Lagrange polynomial of node `i`.
    pub fn inverse(&self) -> &Matrix {
        self.inverse.get_or_init(|| {
            self.lu
                .inverse()
                .expect("square factors of a constructed stencil")
        })
    }

    /// 1-norm condition number of the square scaled Vandermonde matrix.
    pub fn cond(&self) -> f64 {
        cond_1(&self.vandermonde.matrix, self.inverse())
    }

    /// Scaled coordinates `(x - c)/h`.
    pub fn scaled(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) / self.h)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{halton_points, points_in_ball};

    #[test]
    fn feasible_degree_examples() {
        assert_eq!(max_feasible_degree(21, 2), 5);
        assert_eq!(max_feasible_degree(20, 2), 4);
        assert_eq!(max_feasible_degree(3, 2), 1);
        assert_eq!(max_feasible_degree(1, 2), 0);
        assert_eq!(max_feasible_degree(4, 3), 1);
    }

    #[test]
    fn exact_count_uses_every_candidate() {
        let cloud = halton_points(400, 2).unwrap();
        let cand = points_in_ball(&cloud, &[0.5, 0.5], 0.5).unwrap().select(&(0..21).collect::<Vec<_>>());
        let st = extract_leja(&cand, &[0.5, 0.5], 5).unwrap();
        let mut sel = st.selection().to_vec();
        sel.sort_unstable();
        assert_eq!(sel, (0..21).collect::<Vec<_>>());
    }

    #[test]
    fn too_few_points() {
        let cand = halton_points(10, 2).unwrap();
        assert!(matches!(
            extract_leja(&cand, &[0.5, 0.5], 4),
            Err(Error::InsufficientPoints { needed: 15, available: 10, .. })
        ));
    }

    #[test]
    fn collinear_points_are_rank_deficient() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 10.0, 0.5]).collect();
        let cand = PointCloud::from_points(2, &pts).unwrap();
        assert!(matches!(
            extract_leja(&cand, &[0.5, 0.5], 2),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn degree_seventeen_in_quarter_ball() {
        let cloud = halton_points(1000, 2).unwrap();
        let cand = points_in_ball(&cloud, &[0.5, 0.5], 0.25).unwrap();
        let st = extract_leja(&cand, &[0.5, 0.5], 17).unwrap();
        assert_eq!(st.len(), 171);
        assert_eq!(st.nodes().len(), 171);
        assert!(st.h() <= 0.25);
        for p in st.nodes().iter() {
            assert!(crate::pointset::distance(p, &[0.5, 0.5]) <= 0.25);
        }
    }

    #[test]
    fn degree_zero_stencil() {
        let cand = PointCloud::from_points(2, &[vec![0.5, 0.5], vec![0.6, 0.5]]).unwrap();
        let st = extract_leja(&cand, &[0.5, 0.5], 0).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st.cond(), 1.0);
    }
}
