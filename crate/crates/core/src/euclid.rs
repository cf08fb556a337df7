//! Euclidean apparatus of a hypersurface at a point: fundamental forms,
//! unit normal, Gauss-Kronecker curvature, Christoffel symbols, and the
//! Beltrami operators used by the relative geometry.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::jet::{Jet, JetError, MapJet};
use crate::linalg::{det_jet, jet_values, truncate_matrix, JetMatrix, Metric, SingularMetric};

/// Guards that decide whether a sample point is usable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Minimum `det g`.
    pub det_g: f64,
    /// Minimum `|K| = |det h| / det g`.
    pub flat: f64,
    /// Maximum `|M M^-1 - I|` accepted from an inversion.
    pub inverse_residual: f64,
    /// Minimum `|q|`.
    pub support: f64,
    /// Maximum normal component of `y_{/i}` relative to its size.
    pub tangent_residual: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { det_g: 1e-10, flat: 1e-10, inverse_residual: 1e-8, support: 1e-10, tangent_residual: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate point: det g = {0:e}")]
    DegeneratePoint(f64),
    #[error("flat point: |K| = {0:e}")]
    FlatPoint(f64),
    #[error(transparent)]
    SingularMetric(#[from] SingularMetric),
    #[error("support function vanishes: q = {0:e}")]
    ZeroSupport(f64),
    #[error("derivative of y is not tangential (normal residual {0:e})")]
    TangentSolveFailed(f64),
    #[error("not a relative normalization: combined support {0:e}")]
    NotANormalization(f64),
    #[error("jet of order {have} given where order {need} is required")]
    InsufficientOrder { need: usize, have: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

impl GeometryError {
    /// Short stable label used for skip accounting.
    pub fn reason(&self) -> &'static str {
        match self {
            GeometryError::DegeneratePoint(_) => "degenerate point",
            GeometryError::FlatPoint(_) => "flat point",
            GeometryError::SingularMetric(_) => "singular metric",
            GeometryError::ZeroSupport(_) => "zero support",
            GeometryError::TangentSolveFailed(_) => "tangent solve failed",
            GeometryError::NotANormalization(_) => "not a normalization",
            GeometryError::InsufficientOrder { .. } => "insufficient order",
            GeometryError::Jet(JetError::DivisionByZero) => "jet division by zero",
            GeometryError::Jet(_) => "jet domain error",
        }
    }
}

/// Christoffel symbols `Gamma^k_{ij}`, stored `[k][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(n: usize) -> Christoffel {
        Christoffel { n, data: vec![0.0; n * n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        self.data[(k * self.n + i) * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn sub(&self, other: &Christoffel) -> Christoffel {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Christoffel { n: self.n, data }
    }
}

/// `Gamma^k_{ij} = 1/2 Q^{km} (Q_{mi/j} + Q_{mj/i} - Q_{ij/m})` from a metric
/// given as jets of order at least one.
pub fn christoffels(metric: &JetMatrix, inv: &DMatrix<f64>) -> Christoffel {
    let n = metric.len();
    let dq = |a: usize, b: usize, c: usize| metric[a][b].d(&[c]);
    let mut lowered = vec![0.0; n * n * n];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                lowered[(m * n + i) * n + j] = 0.5 * (dq(m, i, j) + dq(m, j, i) - dq(i, j, m));
            }
        }
    }
    let mut out = Christoffel::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let v: f64 = (0..n).map(|m| inv[(k, m)] * lowered[(m * n + i) * n + j]).sum();
                out.set(k, i, j, v);
            }
        }
    }
    out
}

/// First Beltrami operator against a vector-valued function:
/// `Q^{ij} f_{/i} v_{/j}` given the partials `v_{/j}`.
pub fn beltrami_grad(metric: &Metric, f_grad: &[f64], partials: &[DVector<f64>]) -> DVector<f64> {
    let n = metric.dim();
    let mut out = DVector::zeros(partials[0].len());
    for i in 0..n {
        for j in 0..n {
            let w = metric.inv[(i, j)] * f_grad[i];
            if w != 0.0 {
                out.axpy(w, &partials[j], 1.0);
            }
        }
    }
    out
}

/// Mixed first Beltrami operator `Q^{ij} f_{/i} h_{/j}`.
pub fn beltrami_mixed(metric: &Metric, f_grad: &[f64], h_grad: &[f64]) -> f64 {
    let n = metric.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += metric.inv[(i, j)] * f_grad[i] * h_grad[j];
        }
    }
    acc
}

/// Second Beltrami operator `Q^{ij} (f_{/ij} - Gamma^k_{ij} f_{/k})`.
pub fn laplace_beltrami(metric: &Metric, gamma: &Christoffel, f: &Jet) -> f64 {
    let n = metric.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut hess = f.d(&[i, j]);
            for k in 0..n {
                hess -= gamma.get(k, i, j) * f.d(&[k]);
            }
            acc += metric.inv[(i, j)] * hess;
        }
    }
    acc
}

/// Componentwise [`laplace_beltrami`] of an ambient-valued map.
pub fn laplace_beltrami_vec(metric: &Metric, gamma: &Christoffel, f: &MapJet) -> DVector<f64> {
    DVector::from_iterator(f.dim(), f.components().iter().map(|c| laplace_beltrami(metric, gamma, c)))
}

/// Euclidean geometry of the immersion at one parameter point.
#[derive(Debug, Clone)]
pub struct EuclideanFrame {
    pub n: usize,
    /// Source jet of the immersion.
    pub x: MapJet,
    /// `x_{/i}`.
    pub tangents: Vec<DVector<f64>>,
    /// Unit normal as a jet, one order below `x`.
    pub xi_jet: MapJet,
    pub xi: DVector<f64>,
    /// `xi_{/i}`.
    pub xi_d: Vec<DVector<f64>>,
    pub g_jet: JetMatrix,
    pub h_jet: JetMatrix,
    pub g: Metric,
    pub h: Metric,
    pub e: Metric,
    pub k_jet: Jet,
    /// Euclidean mean curvature `e_ij h^ij / n`.
    pub mean_curvature: f64,
    pub gamma_i: Christoffel,
    pub gamma_ii: Christoffel,
    /// `Gamma_I - Gamma_II`.
    pub diff_tensor: Christoffel,
}

impl EuclideanFrame {
    pub fn curvature(&self) -> f64 {
        self.k_jet.value()
    }

    pub fn curvature_grad(&self) -> Vec<f64> {
        self.k_jet.gradient()
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    /// `x_{/ij}`.
    pub fn x2(&self, i: usize, j: usize) -> DVector<f64> {
        self.x.d(&[i, j])
    }
}

/// Normal vector field `N_a = det[e_a; t_1; ...; t_n]` (unnormalized).
fn cofactor_normal(tangents: &[MapJet]) -> Vec<Jet> {
    let n = tangents.len();
    let dim = n + 1;
    (0..dim)
        .map(|a| {
            let minor: JetMatrix = tangents
                .iter()
                .map(|t| (0..dim).filter(|&c| c != a).map(|c| t.components()[c].clone()).collect())
                .collect();
            let d = det_jet(&minor);
            if a % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn dot_jets(a: &[Jet], b: &[Jet]) -> Jet {
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc = &acc + &(x * y);
    }
    acc
}

/// Builds the Euclidean frame from the jet of the immersion (order >= 3).
pub fn frame_at(x: &MapJet, thresholds: &Thresholds) -> Result<EuclideanFrame, GeometryError> {
    let r = x.order();
    if r < 3 {
        return Err(GeometryError::InsufficientOrder { need: 3, have: r });
    }
    let n = x.n();
    assert_eq!(x.dim(), n + 1, "immersion must map into R^(n+1)");

    let tangent_jets: Vec<MapJet> = (0..n).map(|i| x.derivative(i)).collect();
    let g_jet: JetMatrix = (0..n)
        .map(|i| (0..n).map(|j| dot_jets(tangent_jets[i].components(), tangent_jets[j].components())).collect())
        .collect();
    let g_vals = jet_values(&g_jet);
    let det_g = g_vals.determinant();
    if !(det_g >= thresholds.det_g) {
        return Err(GeometryError::DegeneratePoint(det_g));
    }

    let normal = cofactor_normal(&tangent_jets);
    let norm = dot_jets(&normal, &normal).sqrt()?;
    let inv_norm = norm.recip()?;
    let xi_jet = MapJet::new(normal.iter().map(|c| c * &inv_norm).collect());

    let xi_low = xi_jet.truncate(r - 2);
    let h_jet: JetMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| dot_jets(xi_low.components(), tangent_jets[i].derivative(j).components()))
                .collect()
        })
        .collect();

    let det_h = det_jet(&h_jet);
    let det_g_low = det_jet(&truncate_matrix(&g_jet, r - 2));
    let k_jet = det_h.div(&det_g_low)?;
    if !(k_jet.value().abs() >= thresholds.flat) {
        return Err(GeometryError::FlatPoint(k_jet.value()));
    }

    let g = Metric::new(g_vals, thresholds.inverse_residual)?;
    let h = Metric::new(jet_values(&h_jet), thresholds.inverse_residual)?;
    let tangents: Vec<DVector<f64>> = (0..n).map(|i| x.d(&[i])).collect();
    let xi = xi_jet.value();
    let xi_d: Vec<DVector<f64>> = (0..n).map(|i| xi_jet.d(&[i])).collect();
    let e_vals = DMatrix::from_fn(n, n, |i, j| xi_d[i].dot(&xi_d[j]));
    let e = Metric::new(e_vals, thresholds.inverse_residual)?;
    let mean_curvature = e.m.component_mul(&h.inv).sum() / n as f64;

    let gamma_i = christoffels(&g_jet, &g.inv);
    let gamma_ii = christoffels(&h_jet, &h.inv);
    let diff_tensor = gamma_i.sub(&gamma_ii);

    Ok(EuclideanFrame {
        n,
        x: x.clone(),
        tangents,
        xi_jet,
        xi,
        xi_d,
        g_jet,
        h_jet,
        g,
        h,
        e,
        k_jet,
        mean_curvature,
        gamma_i,
        gamma_ii,
        diff_tensor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::jet::{eval_expr_jet, seed_point};

    fn immersion(components: &[&str], u: &[f64]) -> MapJet {
        let seeds = seed_point(u, 4);
        MapJet::new(
            components
                .iter()
                .map(|c| eval_expr_jet(&parse_expr(c).unwrap(), &seeds, None).unwrap())
                .collect(),
        )
    }

    fn assert_matrix(m: &DMatrix<f64>, expect: &[f64], tol: f64) {
        for (a, b) in m.iter().zip(expect) {
            assert!((a - b).abs() < tol, "{m} vs {expect:?}");
        }
    }

    #[test]
    fn unit_sphere_at_origin() {
        let x = immersion(&["cos(u1)*cos(u2)", "sin(u1)*cos(u2)", "sin(u2)"], &[0.0, 0.0]);
        let f = frame_at(&x, &Thresholds::default()).unwrap();
        assert_matrix(&f.g.m, &[1.0, 0.0, 0.0, 1.0], 1e-14);
        assert_matrix(&f.h.m, &[-1.0, 0.0, 0.0, -1.0], 1e-14);
        assert!((f.xi.clone() - DVector::from_vec(vec![1.0, 0.0, 0.0])).norm() < 1e-14);
        assert!((f.curvature() - 1.0).abs() < 1e-14);
        assert!((f.mean_curvature - -1.0).abs() < 1e-14);
    }

    #[test]
    fn paraboloid_at_origin() {
        let x = immersion(&["u1", "u2", "0.5*(u1^2+u2^2)"], &[0.0, 0.0]);
        let f = frame_at(&x, &Thresholds::default()).unwrap();
        assert_matrix(&f.g.m, &[1.0, 0.0, 0.0, 1.0], 1e-15);
        assert_matrix(&f.h.m, &[1.0, 0.0, 0.0, 1.0], 1e-15);
        assert!((f.xi.clone() - DVector::from_vec(vec![0.0, 0.0, 1.0])).norm() < 1e-15);
        assert!((f.curvature() - 1.0).abs() < 1e-15);
        assert!((f.mean_curvature - 1.0).abs() < 1e-15);
        // K = (1 + u1^2 + u2^2)^-2: first derivatives vanish at the origin, K_11 = -4
        assert!(f.curvature_grad().iter().all(|g| g.abs() < 1e-15));
        assert!((f.k_jet.d(&[0, 0]) - -4.0).abs() < 1e-13);
    }

    #[test]
    fn plane_is_flat() {
        let x = immersion(&["u1", "u2", "0"], &[0.3, 0.1]);
        assert!(matches!(frame_at(&x, &Thresholds::default()), Err(GeometryError::FlatPoint(_))));
    }

    #[test]
    fn collapsed_parametrization_is_degenerate() {
        let x = immersion(&["u1", "u1", "u1^2"], &[0.3, 0.1]);
        assert!(matches!(frame_at(&x, &Thresholds::default()), Err(GeometryError::DegeneratePoint(_))));
    }

    #[test]
    fn low_order_rejected() {
        let x = immersion(&["u1", "u2", "u1^2 + u2^2"], &[0.3, 0.1]).truncate(2);
        assert_eq!(
            frame_at(&x, &Thresholds::default()).unwrap_err(),
            GeometryError::InsufficientOrder { need: 3, have: 2 }
        );
    }

    #[test]
    fn beltrami_identity_metric_picks_tangent() {
        let x = immersion(&["u1", "u2", "0.5*(u1^2+u2^2)"], &[0.0, 0.0]);
        let f = frame_at(&x, &Thresholds::default()).unwrap();
        let v = beltrami_grad(&f.g, &[1.0, 0.0], &f.tangents);
        assert!((v - DVector::from_vec(vec![1.0, 0.0, 0.0])).norm() < 1e-15);
        let zero = beltrami_grad(&f.g, &[0.0, 0.0], &f.tangents);
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn constant_metric_has_no_christoffels() {
        let c = |v: f64| Jet::constant(2, 2, v);
        let m: JetMatrix = vec![vec![c(2.0), c(0.5)], vec![c(0.5), c(1.0)]];
        let metric = Metric::new(jet_values(&m), 1e-8).unwrap();
        let gamma = christoffels(&m, &metric.inv);
        assert!(gamma.as_slice().iter().all(|&g| g == 0.0));
    }
}
