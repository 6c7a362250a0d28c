//! Vandermonde matrices in the scaled, shifted monomial basis
//! `((x - c) / h)^alpha`, columns in graded word order.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::multiindex::MonomialBasis;
use crate::pointset::{distance, PointCloud};

/// `h = max_i ‖x_i - c‖₂`.
pub fn compute_h<'a>(points: impl IntoIterator<Item = &'a [f64]>, center: &[f64]) -> Result<f64> {
    let mut h: f64 = 0.0;
    let mut any = false;
    for p in points {
        if p.len() != center.len() {
            return Err(Error::Dimension {
                expected: center.len(),
                found: p.len(),
            });
        }
        any = true;
        h = h.max(distance(p, center));
    }
    if !any || h == 0.0 {
        return Err(Error::DegenerateScale);
    }
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct ScaledVandermonde {
    pub center: Vec<f64>,
    pub h: f64,
    pub degree: usize,
    pub matrix: Matrix,
}

impl ScaledVandermonde {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// Row `i` holds `((x_i - c)/h)^alpha` for every `alpha` of `basis`.
pub fn build_scaled_vandermonde(
    points: &PointCloud,
    center: &[f64],
    h: f64,
    basis: &MonomialBasis,
) -> Result<ScaledVandermonde> {
    if points.dim() != basis.dim() {
        return Err(Error::Dimension {
            expected: basis.dim(),
            found: points.dim(),
        });
    }
    if center.len() != basis.dim() {
        return Err(Error::Dimension {
            expected: basis.dim(),
            found: center.len(),
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("scale h must be positive and finite, got {h}")));
    }
    let n = points.len();
    let m = basis.len();
    let mut matrix = Matrix::zeros(n, m);
    let mut z = vec![0.0; basis.dim()];
    let mut row = vec![0.0; m];
    for (i, p) in points.iter().enumerate() {
        for (zj, (&x, &c)) in z.iter_mut().zip(p.iter().zip(center)) {
            *zj = (x - c) / h;
        }
        basis.evaluate_into(&z, &mut row);
        for (j, &v) in row.iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    Ok(ScaledVandermonde {
        center: center.to_vec(),
        h,
        degree: basis.degree(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        let pts = [vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(compute_h(pts.iter().map(|p| p.as_slice()), &[0.0, 0.0]).unwrap(), 1.0);
        let single = [vec![0.3, 0.3]];
        assert!(matches!(
            compute_h(single.iter().map(|p| p.as_slice()), &[0.3, 0.3]),
            Err(Error::DegenerateScale)
        ));
    }

    #[test]
    fn one_dimensional_rows() {
        let cloud = PointCloud::from_points(1, &[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let v = build_scaled_vandermonde(&cloud, &[0.0], 2.0, &MonomialBasis::new(1, 2)).unwrap();
        assert_eq!(v.matrix.row(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(v.matrix.row(1), vec![1.0, 0.5, 0.25]);
        assert_eq!(v.matrix.row(2), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn center_row_is_unit() {
        let cloud = PointCloud::from_points(2, &[vec![0.4, 0.6]]).unwrap();
        let v = build_scaled_vandermonde(&cloud, &[0.4, 0.6], 0.1, &MonomialBasis::new(2, 3)).unwrap();
        let row = v.matrix.row(0);
        assert_eq!(row[0], 1.0);
        assert!(row[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn norm_equals_row_count_inside_ball() {
        let cloud = crate::pointset::halton_points(300, 2).unwrap();
        let center = [0.5, 0.5];
        let h = compute_h(cloud.iter(), &center).unwrap();
        let v = build_scaled_vandermonde(&cloud, &center, h, &MonomialBasis::new(2, 6)).unwrap();
        assert!(v.matrix.max_abs() <= 1.0);
        assert_eq!(v.matrix.norm_1(), 300.0);
    }
}
