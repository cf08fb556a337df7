//! Small dense linear algebra over reals and over jets.

use nalgebra::{DMatrix, DVector};

use crate::jet::{Jet, JetError};

/// Symmetric bilinear form with a checked inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub m: DMatrix<f64>,
    pub inv: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("singular metric (inverse residual {residual:e})")]
pub struct SingularMetric {
    pub residual: f64,
}

impl Metric {
    /// Inverts via LU with partial pivoting and rejects the result when
    /// `|M M^-1 - I|_max` exceeds `guard`.
    pub fn new(m: DMatrix<f64>, guard: f64) -> Result<Metric, SingularMetric> {
        let inv = invert(&m, guard)?;
        Ok(Metric { m, inv })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn scaled(&self, s: f64) -> Metric {
        Metric { m: &self.m * s, inv: &self.inv / s }
    }
}

pub fn invert(m: &DMatrix<f64>, guard: f64) -> Result<DMatrix<f64>, SingularMetric> {
    let inv = m.clone().lu().try_inverse().ok_or(SingularMetric { residual: f64::INFINITY })?;
    let n = m.nrows();
    let residual = (m * &inv - DMatrix::<f64>::identity(n, n)).amax();
    if !(residual <= guard) {
        return Err(SingularMetric { residual });
    }
    Ok(inv)
}

/// Square matrix of jets sharing `(n, r)`.
pub type JetMatrix = Vec<Vec<Jet>>;

pub fn jet_values(m: &JetMatrix) -> DMatrix<f64> {
    let k = m.len();
    DMatrix::from_fn(k, k, |i, j| m[i][j].value())
}

pub fn truncate_matrix(m: &JetMatrix, r: usize) -> JetMatrix {
    m.iter().map(|row| row.iter().map(|j| j.truncate(r)).collect()).collect()
}

/// Determinant by cofactor expansion along the first row. Division-free,
/// so it stays exact in the derivatives even where the value vanishes.
pub fn det_jet(m: &JetMatrix) -> Jet {
    let k = m.len();
    assert!(k > 0, "determinant of an empty matrix");
    let cols: Vec<usize> = (0..k).collect();
    det_minor(m, 0, &cols)
}

fn det_minor(m: &JetMatrix, row: usize, cols: &[usize]) -> Jet {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc: Option<Jet> = None;
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &det_minor(m, row + 1, &rest);
        acc = Some(match acc {
            None => term,
            Some(a) if pos % 2 == 0 => &a + &term,
            Some(a) => &a - &term,
        });
    }
    acc.expect("at least one column")
}

/// Inverse by Gauss-Jordan elimination in jet arithmetic.
pub fn inverse_jet(m: &JetMatrix) -> Result<JetMatrix, JetError> {
    let k = m.len();
    let (nv, r) = (m[0][0].n(), m[0][0].order());
    let mut a = m.clone();
    let mut inv: JetMatrix = (0..k)
        .map(|i| (0..k).map(|j| Jet::constant(nv, r, if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].value().abs().total_cmp(&a[j][col].value().abs()))
            .expect("non-empty range");
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].recip()?;
        for c in 0..k {
            a[col][c] = &a[col][c] * &p;
            inv[col][c] = &inv[col][c] * &p;
        }
        for row in 0..k {
            if row == col {
                continue;
            }
            let factor = a[row][col].clone();
            for c in 0..k {
                let ta = &factor * &a[col][c];
                a[row][c] = &a[row][c] - &ta;
                let ti = &factor * &inv[col][c];
                inv[row][c] = &inv[row][c] - &ti;
            }
        }
    }
    Ok(inv)
}

/// `sqrt(sum |x|^2)` over a list of slices.
pub fn norm_all(parts: &[&[f64]]) -> f64 {
    parts.iter().flat_map(|p| p.iter()).map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::seed_point;

    #[test]
    fn lu_inverse_with_guard() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let metric = Metric::new(m.clone(), 1e-8).unwrap();
        assert_eq!(metric.inv, m);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(Metric::new(singular, 1e-8).is_err());
    }

    #[test]
    fn jet_determinant_and_inverse() {
        // [[u1, u2], [1, u1 u2]] with zero (1,1) entry at the point handled by pivoting
        let s = seed_point(&[0.0, 2.0], 2);
        let one = Jet::constant(2, 2, 1.0);
        let m: JetMatrix = vec![vec![s[0].clone(), s[1].clone()], vec![one.clone(), &s[0] * &s[1]]];
        let det = det_jet(&m);
        // det = u1^2 u2 - u2
        assert!((det.value() - -2.0).abs() < 1e-15);
        assert!((det.d(&[0]) - 0.0).abs() < 1e-15);
        assert!((det.d(&[1]) - -1.0).abs() < 1e-15);
        assert!((det.d(&[0, 0]) - 4.0).abs() < 1e-14);
        assert!((det.d(&[0, 1]) - 0.0).abs() < 1e-14);

        let inv = inverse_jet(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Jet::constant(2, 2, 0.0);
                for k in 0..2 {
                    acc = &acc + &(&m[i][k] * &inv[k][j]);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((acc.value() - target).abs() < 1e-14);
                assert!(acc.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
            }
        }
    }
}
