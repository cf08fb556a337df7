//! Finite-difference cross-check of the jet pipeline.
//!
//! Everything here is built from plain `f64` evaluations of the spec
//! expressions. First derivatives use central differences at `fd_step` and
//! second derivatives a five-point stencil at `fd_step^(1/2)`. The relative
//! normal is differentiated through a nested five-point chain: tangents at
//! `fd_step^(3/5)`, support gradient at `fd_step^(2/5)`, outer step at
//! `fd_step^(1/2)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{frame_of, HarnessError};
use crate::dsl::{Expr, SurfaceSpec};
use crate::euclid::{GeometryError, Thresholds};
use crate::jet::eval_expr_jet;
use crate::relative::shape_operator;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("point {point:?} lies within {margin:e} of the domain boundary")]
pub struct MarginError {
    pub point: Vec<f64>,
    pub margin: f64,
}

/// Finite-difference estimates and their relative deviations from the jets.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub point: Vec<f64>,
    pub fd_step: f64,
    pub g: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
    pub curvature: f64,
    /// `d y / d u_i` for the chosen support function.
    pub y_d: Vec<Vec<f64>>,
    pub g_delta: f64,
    pub h_delta: f64,
    pub xi_delta: f64,
    pub curvature_delta: f64,
    pub y_d_delta: f64,
}

impl OracleReport {
    pub fn max_delta(&self) -> f64 {
        [self.g_delta, self.h_delta, self.xi_delta, self.curvature_delta, self.y_d_delta]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn geometry(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Evaluation(e.to_string())
}

struct Pure<'a> {
    spec: &'a SurfaceSpec,
    h1: f64,
    h2: f64,
    /// Five-point first derivatives instead of central differences.
    five_point: bool,
}

impl Pure<'_> {
    fn x(&self, u: &[f64]) -> Result<DVector<f64>, HarnessError> {
        Ok(DVector::from_vec(self.spec.point(u).map_err(geometry)?))
    }

    fn shifted(u: &[f64], i: usize, d: f64) -> Vec<f64> {
        let mut v = u.to_vec();
        v[i] += d;
        v
    }

    fn tangents(&self, u: &[f64]) -> Result<Vec<DVector<f64>>, HarnessError> {
        let h = self.h1;
        (0..u.len())
            .map(|i| {
                let f = |d: f64| self.x(&Self::shifted(u, i, d));
                if self.five_point {
                    Ok((f(-2.0 * h)? - f(-h)? * 8.0 + f(h)? * 8.0 - f(2.0 * h)?) / (12.0 * h))
                } else {
                    Ok((f(h)? - f(-h)?) / (2.0 * h))
                }
            })
            .collect()
    }

    /// Five-point second derivatives `x_{/ij}`.
    fn second(&self, u: &[f64], i: usize, j: usize) -> Result<DVector<f64>, HarnessError> {
        let s = self.h2;
        if i == j {
            let f = |d: f64| self.x(&Self::shifted(u, i, d));
            return Ok((-f(2.0 * s)? + f(s)? * 16.0 - self.x(u)? * 30.0 + f(-s)? * 16.0 - f(-2.0 * s)?) / (12.0 * s * s));
        }
        // mixed partial as the five-point first derivative of a five-point first derivative
        let d_i = |v: &[f64]| -> Result<DVector<f64>, HarnessError> {
            let f = |d: f64| self.x(&Self::shifted(v, i, d));
            Ok((f(-2.0 * s)? - f(-s)? * 8.0 + f(s)? * 8.0 - f(2.0 * s)?) / (12.0 * s))
        };
        let g = |d: f64| d_i(&Self::shifted(u, j, d));
        Ok((g(-2.0 * s)? - g(-s)? * 8.0 + g(s)? * 8.0 - g(2.0 * s)?) / (12.0 * s))
    }

    fn normal(tangents: &[DVector<f64>]) -> DVector<f64> {
        let n = tangents.len();
        let dim = n + 1;
        let v = DVector::from_fn(dim, |a, _| {
            let minor = DMatrix::from_fn(n, n, |r, c| tangents[r][if c < a { c } else { c + 1 }]);
            let d = minor.determinant();
            if a % 2 == 0 {
                d
            } else {
                -d
            }
        });
        let norm = v.norm();
        v / norm
    }

    /// `(g, h, xi, K)` at `u`.
    fn frame(&self, u: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>, DVector<f64>, f64), HarnessError> {
        let n = u.len();
        let t = self.tangents(u)?;
        let xi = Self::normal(&t);
        let g = DMatrix::from_fn(n, n, |i, j| t[i].dot(&t[j]));
        let mut h = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = xi.dot(&self.second(u, i, j)?);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let k = h.determinant() / g.determinant();
        Ok((g, h, xi, k))
    }

    fn support(&self, q: &Expr, u: &[f64]) -> Result<f64, HarnessError> {
        let k = if q.uses_curvature() { Some(self.frame(u)?.3) } else { None };
        q.eval(u, k).map_err(geometry)
    }

    /// Relative normal `-h^ij q_i x_j + q xi` with `q_i` from a five-point
    /// stencil at step `s`.
    fn relative_normal(&self, q: &Expr, u: &[f64], s: f64) -> Result<DVector<f64>, HarnessError> {
        let n = u.len();
        let (_, h, xi, _) = self.frame(u)?;
        let t = self.tangents(u)?;
        let mut q_grad = vec![0.0; n];
        for (i, qi) in q_grad.iter_mut().enumerate() {
            let f = |d: f64| self.support(q, &Self::shifted(u, i, d));
            *qi = (f(-2.0 * s)? - 8.0 * f(-s)? + 8.0 * f(s)? - f(2.0 * s)?) / (12.0 * s);
        }
        let h_inv = h.try_inverse().ok_or_else(|| geometry("singular second form"))?;
        let mut y = &xi * self.support(q, u)?;
        for i in 0..n {
            for j in 0..n {
                y.axpy(-h_inv[(i, j)] * q_grad[i], &t[j], 1.0);
            }
        }
        Ok(y)
    }
}

fn rel_delta(fd: &[f64], jet: &[f64]) -> f64 {
    let diff = fd.iter().zip(jet).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let scale = jet.iter().map(|v| v * v).sum::<f64>().sqrt();
    if scale > 1e-12 {
        diff / scale
    } else {
        diff
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Finite-difference estimates of `g`, `h`, `xi`, `K` and `y_{/i}` at
/// `point` for support function `q`, compared with the jet pipeline.
pub fn fd_oracle(spec: &SurfaceSpec, q: &Expr, point: &[f64], fd_step: f64) -> Result<OracleReport, HarnessError> {
    if point.len() != spec.n {
        return Err(HarnessError::InvalidConfig(format!("point needs {} coordinates", spec.n)));
    }
    let margin = 2.0 * fd_step;
    if point.iter().zip(&spec.domain).any(|(v, (a, b))| *v < a + margin || *v > b - margin) {
        return Err(MarginError { point: point.to_vec(), margin }.into());
    }
    let n = spec.n;
    let pure = Pure { spec, h1: fd_step, h2: fd_step.sqrt(), five_point: false };
    let chain = Pure { spec, h1: fd_step.powf(0.6), h2: fd_step.sqrt(), five_point: true };
    let (g, h, xi, k) = pure.frame(point)?;

    let s_inner = fd_step.powf(0.4);
    let s_outer = fd_step.sqrt();
    let mut y_d = Vec::with_capacity(n);
    for i in 0..n {
        let f = |d: f64| chain.relative_normal(q, &Pure::shifted(point, i, d), s_inner);
        y_d.push((f(-2.0 * s_outer)? - f(-s_outer)? * 8.0 + f(s_outer)? * 8.0 - f(2.0 * s_outer)?) / (12.0 * s_outer));
    }

    let thresholds = Thresholds::default();
    let (seeds, frame) = frame_of(spec, point, &thresholds)?;
    let q_jet = eval_expr_jet(q, &seeds, Some(&frame.k_jet)).map_err(GeometryError::from)?;
    let shape = shape_operator(&frame, &q_jet, &thresholds)?;

    let flat_y_fd: Vec<f64> = y_d.iter().flat_map(|v| v.iter().copied()).collect();
    let flat_y_jet: Vec<f64> = shape.y_d.iter().flat_map(|v| v.iter().copied()).collect();
    Ok(OracleReport {
        point: point.to_vec(),
        fd_step,
        g_delta: rel_delta(g.as_slice(), frame.g.m.as_slice()),
        h_delta: rel_delta(h.as_slice(), frame.h.m.as_slice()),
        xi_delta: rel_delta(xi.as_slice(), frame.xi.as_slice()),
        curvature_delta: rel_delta(&[k], &[frame.curvature()]),
        y_d_delta: rel_delta(&flat_y_fd, &flat_y_jet),
        g: rows(&g),
        h: rows(&h),
        xi: xi.iter().copied().collect(),
        curvature: k,
        y_d: y_d.iter().map(|v| v.iter().copied().collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::harness::find;

    #[test]
    fn paraboloid_curvature_at_origin() {
        let spec = crate::dsl::parse_spec("n = 2\ndomain = [-1,1] x [-1,1]\nx = [u1, u2, 0.5*(u1^2 + u2^2)]").unwrap();
        let r = fd_oracle(&spec, &parse_expr("1").unwrap(), &[0.0, 0.0], 1e-5).unwrap();
        assert!((r.curvature - 1.0).abs() < 1e-6);
    }

    #[test]
    fn boundary_point_is_rejected() {
        let spec = find("ellipsoid").unwrap();
        let err = fd_oracle(&spec, &parse_expr("1").unwrap(), &[3.0, 0.0], 1e-5).unwrap_err();
        assert!(matches!(err, HarnessError::Margin(_)));
    }
}
