//! Relative geometry induced by a support function `q`.
//!
//! Given the Euclidean frame and the jet of `q`, [`relative_at`] builds the
//! relative normal `y = -h^{ij} q_i x_j + q xi`, the conormal `X = xi / q`,
//! the relative metric `G = h / q`, the Darboux cubic form and the
//! Tchebychev field (three ways), and the relative shape operator.

mod identities;
mod manhart;
mod pair;
mod pairings;

pub use identities::{euclidean_checks, manhart_checks, relative_checks};
pub use manhart::{manhart_family, manhart_residuals, manhart_support, ManhartReport};
pub use pair::{normalization_independence, two_normalizations, PairRelation, PairReport};
pub use pairings::{oneform_pairings, PairingReport};

use nalgebra::{DMatrix, DVector};

use crate::euclid::{
    beltrami_grad, beltrami_mixed, christoffels, laplace_beltrami, laplace_beltrami_vec, Christoffel,
    EuclideanFrame, GeometryError, Thresholds,
};
use crate::jet::{Jet, MapJet};
use crate::linalg::{inverse_jet, truncate_matrix, JetMatrix, Metric};

#[derive(Debug, Clone)]
pub struct RelativeFrame {
    pub n: usize,
    pub q_jet: Jet,
    pub q: f64,
    pub q_grad: Vec<f64>,
    /// Gradient of `ln|q|`.
    pub ln_q_grad: Vec<f64>,
    /// Conormal `X = xi / q`.
    pub conormal: DVector<f64>,
    /// Relative metric `G = h / q`.
    pub metric: Metric,
    pub metric_jet: JetMatrix,
    pub gamma: Christoffel,
    pub y: DVector<f64>,
    /// Tangential part `y - q xi`.
    pub y_tangential: DVector<f64>,
    /// `y_{/i}`.
    pub y_d: Vec<DVector<f64>>,
    /// `B[(i, j)] = B_i^j` with `y_{/i} = -B_i^j x_{/j}`.
    pub shape: DMatrix<f64>,
    /// `B_i^i / n`.
    pub mean_curvature: f64,
    /// Mean curvature from the closed expression in `q`, `H_I` and the
    /// second-form Beltrami operators; reported, never used as ground truth.
    pub mean_curvature_formula: f64,
    /// Same expression with coefficient `(2-n)/2` on the gradient term.
    pub mean_curvature_formula_alt: f64,
    /// `q H_I + (Delta^II q - grad^II(q, K) / (2K)) / n`.
    pub mean_curvature_reference: f64,
    /// Largest normal component of `y_{/i}`, relative to `1 + |y_{/i}|`.
    pub tangent_residual: f64,
    /// `A_ijk`, stored `[i][j][k]`.
    pub darboux: Vec<f64>,
    pub tchebychev_darboux: DVector<f64>,
    pub tchebychev_closed: DVector<f64>,
    pub tchebychev_decomp: DVector<f64>,
    pub tchebychev_euclidean: DVector<f64>,
    /// `Q = grad^III(q, xi) / (2 n q)`.
    pub q_field: DVector<f64>,
    /// `phi = |K|^(-1/2n) |q|^((n+2)/2n)`.
    pub phi: f64,
    pub ln_phi_grad: Vec<f64>,
    pub laplace_x: DVector<f64>,
    pub laplace_xi: DVector<f64>,
}

impl RelativeFrame {
    pub fn darboux_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.darboux[(i * self.n + j) * self.n + k]
    }

    /// Tchebychev field (Darboux route).
    pub fn tchebychev(&self) -> &DVector<f64> {
        &self.tchebychev_darboux
    }

    /// Largest deviation of `A_ijk` from total symmetry, relative to
    /// `1 + max |A|`.
    pub fn darboux_symmetry_defect(&self) -> f64 {
        let n = self.n;
        let scale = 1.0 + self.darboux.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = self.darboux_at(i, j, k);
                    for b in [
                        self.darboux_at(i, k, j),
                        self.darboux_at(j, i, k),
                        self.darboux_at(j, k, i),
                        self.darboux_at(k, i, j),
                        self.darboux_at(k, j, i),
                    ] {
                        defect = defect.max((a - b).abs());
                    }
                }
            }
        }
        defect / scale
    }
}

/// Builds the relative frame for support function `q` (jet order >= 2).
pub fn relative_at(frame: &EuclideanFrame, q_jet: &Jet, thresholds: &Thresholds) -> Result<RelativeFrame, GeometryError> {
    if q_jet.order() < 2 {
        return Err(GeometryError::InsufficientOrder { need: 2, have: q_jet.order() });
    }
    let n = frame.n;
    let nf = n as f64;
    let q = q_jet.value();
    if !(q.abs() >= thresholds.support) {
        return Err(GeometryError::ZeroSupport(q));
    }
    let q_grad = q_jet.gradient();
    let ln_q_grad: Vec<f64> = q_grad.iter().map(|d| d / q).collect();
    let k = frame.curvature();
    let k_grad = frame.curvature_grad();

    // G = h / q, with jets for the Christoffel symbols.
    let m = frame.h_jet[0][0].order().min(q_jet.order());
    let q_inv_jet = q_jet.truncate(m).recip()?;
    let metric_jet: JetMatrix = truncate_matrix(&frame.h_jet, m)
        .iter()
        .map(|row| row.iter().map(|h| h * &q_inv_jet).collect())
        .collect();
    let metric = frame.h.scaled(1.0 / q);
    let gamma = christoffels(&metric_jet, &metric.inv);

    let conormal = &frame.xi / q;
    let y_tangential = -beltrami_grad(&frame.h, &q_grad, &frame.tangents);
    let y = &y_tangential + &frame.xi * q;

    let grad_iii_q = beltrami_grad(&frame.e, &q_grad, &frame.xi_d);
    let grad_iii_k = beltrami_grad(&frame.e, &k_grad, &frame.xi_d);
    let q_field = &grad_iii_q / (2.0 * nf * q);
    let tchebychev_euclidean = &grad_iii_k / (2.0 * nf * k);
    let tchebychev_closed = &grad_iii_k * (q / (2.0 * nf * k)) - &grad_iii_q * ((nf + 2.0) / (2.0 * nf));
    let tchebychev_decomp = &tchebychev_euclidean * q - &q_field * (q * (nf + 2.0));

    let darboux = darboux_tensor(frame, &conormal, &metric, &gamma);
    let tchebychev_darboux = darboux_trace(frame, &darboux, &metric);

    let ln_phi_grad: Vec<f64> = (0..n)
        .map(|i| -k_grad[i] / (2.0 * nf * k) + (nf + 2.0) / (2.0 * nf) * ln_q_grad[i])
        .collect();
    let phi = k.abs().powf(-1.0 / (2.0 * nf)) * q.abs().powf((nf + 2.0) / (2.0 * nf));

    let laplace_x = laplace_beltrami_vec(&metric, &gamma, &frame.x);
    let laplace_xi = laplace_beltrami_vec(&metric, &gamma, &frame.xi_jet);

    let shape = shape_operator(frame, q_jet, thresholds)?;

    Ok(RelativeFrame {
        n,
        q_jet: q_jet.clone(),
        q,
        q_grad,
        ln_q_grad,
        conormal,
        metric,
        metric_jet,
        gamma,
        y,
        y_tangential,
        y_d: shape.y_d,
        shape: shape.b,
        mean_curvature: shape.mean_curvature,
        mean_curvature_formula: shape.formula,
        mean_curvature_formula_alt: shape.formula_alt,
        mean_curvature_reference: shape.reference,
        tangent_residual: shape.tangent_residual,
        darboux,
        tchebychev_darboux,
        tchebychev_closed,
        tchebychev_decomp,
        tchebychev_euclidean,
        q_field,
        phi,
        ln_phi_grad,
        laplace_x,
        laplace_xi,
    })
}

/// `A_ijk = <X, x_ijk> - G^Gamma^m_ij G_mk - G^Gamma^m_ki G_jm - G^Gamma^m_kj G_mi`,
/// the contraction of `<X, nabla_k nabla_j x_{/i}>` using `<X, x_m> = 0`
/// and `<X, x_ij> = G_ij`.
fn darboux_tensor(frame: &EuclideanFrame, conormal: &DVector<f64>, metric: &Metric, gamma: &Christoffel) -> Vec<f64> {
    let n = frame.n;
    let g = &metric.m;
    let mut a = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut v = conormal.dot(&frame.x.d(&[i, j, k]));
                for m in 0..n {
                    v -= gamma.get(m, i, j) * g[(m, k)] + gamma.get(m, k, i) * g[(j, m)] + gamma.get(m, k, j) * g[(m, i)];
                }
                a[(i * n + j) * n + k] = v;
            }
        }
    }
    a
}

/// `T = (1/n) A_ijk G^jk G^im x_m`.
fn darboux_trace(frame: &EuclideanFrame, a: &[f64], metric: &Metric) -> DVector<f64> {
    let n = frame.n;
    let gi = &metric.inv;
    let mut traced = vec![0.0; n];
    for (i, t) in traced.iter_mut().enumerate() {
        for j in 0..n {
            for k in 0..n {
                *t += a[(i * n + j) * n + k] * gi[(j, k)];
            }
        }
    }
    let mut out = DVector::zeros(n + 1);
    for i in 0..n {
        for m in 0..n {
            out.axpy(traced[i] * gi[(i, m)] / n as f64, &frame.tangents[m], 1.0);
        }
    }
    out
}

/// Output of [`shape_operator`].
#[derive(Debug, Clone)]
pub struct ShapeOperator {
    pub y_d: Vec<DVector<f64>>,
    pub b: DMatrix<f64>,
    pub mean_curvature: f64,
    pub formula: f64,
    pub formula_alt: f64,
    pub reference: f64,
    pub tangent_residual: f64,
}

/// Relative shape operator from `y_{/i} = -B_i^j x_{/j}`, with `y_{/i}`
/// obtained by differentiating `y` in jet arithmetic.
pub fn shape_operator(frame: &EuclideanFrame, q_jet: &Jet, thresholds: &Thresholds) -> Result<ShapeOperator, GeometryError> {
    let n = frame.n;
    let nf = n as f64;
    let m = frame.h_jet[0][0].order().min(q_jet.order() - 1);
    if m < 1 {
        return Err(GeometryError::InsufficientOrder { need: 2, have: q_jet.order() });
    }
    let h_inv = inverse_jet(&truncate_matrix(&frame.h_jet, m))?;
    let q_m = q_jet.truncate(m);
    let q_d: Vec<Jet> = (0..n).map(|i| q_jet.derivative(i).truncate(m)).collect();
    let x_d: Vec<MapJet> = (0..n).map(|j| frame.x.derivative(j).truncate(m)).collect();
    let xi = frame.xi_jet.truncate(m);

    let dim = n + 1;
    let mut y_components = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut acc = &q_m * &xi.components()[a];
        for i in 0..n {
            for j in 0..n {
                let t = &(&h_inv[i][j] * &q_d[i]) * &x_d[j].components()[a];
                acc = &acc - &t;
            }
        }
        y_components.push(acc);
    }
    let y_jet = MapJet::new(y_components);
    let y_d: Vec<DVector<f64>> = (0..n).map(|i| y_jet.d(&[i])).collect();

    let tangent_residual = y_d
        .iter()
        .map(|v| v.dot(&frame.xi).abs() / (1.0 + v.norm()))
        .fold(0.0f64, f64::max);
    if !(tangent_residual <= thresholds.tangent_residual) {
        return Err(GeometryError::TangentSolveFailed(tangent_residual));
    }

    let b = DMatrix::from_fn(n, n, |i, j| {
        -(0..n).map(|k| y_d[i].dot(&frame.tangents[k]) * frame.g.inv[(k, j)]).sum::<f64>()
    });
    let mean_curvature = b.trace() / nf;

    let q = q_jet.value();
    let ln_q = q_jet.abs()?.ln()?;
    let lap_ln_q = laplace_beltrami(&frame.h, &frame.gamma_ii, &ln_q);
    let grad_ln_q = ln_q.gradient();
    let grad_sq = beltrami_mixed(&frame.h, &grad_ln_q, &grad_ln_q);
    let base = q * frame.mean_curvature;
    let formula = base + (lap_ln_q + (2.0 - nf) / 4.0 * grad_sq) / nf;
    let formula_alt = base + (lap_ln_q + (2.0 - nf) / 2.0 * grad_sq) / nf;

    let lap_q = laplace_beltrami(&frame.h, &frame.gamma_ii, q_jet);
    let k = frame.curvature();
    let q_k = beltrami_mixed(&frame.h, &q_jet.gradient(), &frame.curvature_grad());
    let reference = base + (lap_q - q_k / (2.0 * k)) / nf;

    Ok(ShapeOperator { y_d, b, mean_curvature, formula, formula_alt, reference, tangent_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;
    use crate::euclid::frame_at;
    use crate::jet::{eval_expr_jet, seed_point};

    fn frame(components: &[&str], u: &[f64]) -> EuclideanFrame {
        let seeds = seed_point(u, 4);
        let x = MapJet::new(
            components
                .iter()
                .map(|c| eval_expr_jet(&parse_expr(c).unwrap(), &seeds, None).unwrap())
                .collect(),
        );
        frame_at(&x, &Thresholds::default()).unwrap()
    }

    fn support(f: &EuclideanFrame, expr: &str, u: &[f64]) -> Jet {
        let seeds = seed_point(u, 4);
        eval_expr_jet(&parse_expr(expr).unwrap(), &seeds, Some(&f.k_jet)).unwrap()
    }

    const SPHERE: [&str; 3] = ["cos(u1)*cos(u2)", "sin(u1)*cos(u2)", "sin(u2)"];
    const ELLIPSOID: [&str; 3] = ["cos(u1)*cos(u2)", "1.3*sin(u1)*cos(u2)", "0.7*sin(u2)"];

    #[test]
    fn unit_sphere_euclidean_normalization() {
        let u = [0.0, 0.0];
        let f = frame(&SPHERE, &u);
        let rel = relative_at(&f, &support(&f, "1", &u), &Thresholds::default()).unwrap();
        assert!((&rel.y - &f.xi).norm() < 1e-14);
        assert!(rel.q_field.norm() < 1e-14);
        assert!(rel.tchebychev_euclidean.norm() < 1e-14);
        assert!(rel.tchebychev_darboux.norm() < 1e-13);
        assert!((&rel.laplace_x - &f.xi * 2.0).norm() < 1e-13);
        // xi_{/i} = x_{/i} on the outward unit sphere, so B = -identity
        assert!((&rel.shape + DMatrix::<f64>::identity(2, 2)).amax() < 1e-13);
        assert!((rel.mean_curvature - -1.0).abs() < 1e-13);
    }

    #[test]
    fn euclidean_normalization_reduces_to_weingarten_map() {
        let u = [0.4, -0.3];
        let f = frame(&ELLIPSOID, &u);
        let rel = relative_at(&f, &support(&f, "1", &u), &Thresholds::default()).unwrap();
        let weingarten = &f.h.m * &f.g.inv;
        assert!((&rel.shape - &weingarten).amax() < 1e-12);
        assert!((rel.mean_curvature - f.mean_curvature).abs() < 1e-12);
        assert!((&rel.tchebychev_darboux - &rel.tchebychev_euclidean).norm() < 1e-12);
    }

    #[test]
    fn equiaffine_tchebychev_vanishes() {
        let u = [0.9, 0.5];
        let f = frame(&ELLIPSOID, &u);
        let rel = relative_at(&f, &support(&f, "abs(K)^(1/4)", &u), &Thresholds::default()).unwrap();
        assert!(rel.tchebychev_darboux.norm() < 1e-12, "{}", rel.tchebychev_darboux);
        assert!(rel.tchebychev_closed.norm() < 1e-12);
        assert!(rel.tchebychev_decomp.norm() < 1e-12);
        assert!(rel.tangent_residual < 1e-12);
        assert!(rel.darboux_symmetry_defect() < 1e-12);
    }

    #[test]
    fn zero_support_rejected() {
        let u = [0.1, 0.2];
        let f = frame(&ELLIPSOID, &u);
        let q = support(&f, "u1 - 0.1", &u);
        assert!(matches!(relative_at(&f, &q, &Thresholds::default()), Err(GeometryError::ZeroSupport(_))));
    }

    #[test]
    fn low_order_support_rejected() {
        let u = [0.1, 0.2];
        let f = frame(&ELLIPSOID, &u);
        let q = support(&f, "1 + u1", &u).truncate(1);
        assert_eq!(
            relative_at(&f, &q, &Thresholds::default()).unwrap_err(),
            GeometryError::InsufficientOrder { need: 2, have: 1 }
        );
    }

    #[test]
    fn mean_curvature_reference_matches_trace() {
        let u = [0.7, -0.4];
        let f = frame(&ELLIPSOID, &u);
        for q in ["1", "abs(K)^0.3", "1 + exp(0.2*u1 - 0.1*u2)"] {
            let rel = relative_at(&f, &support(&f, q, &u), &Thresholds::default()).unwrap();
            assert!((rel.mean_curvature - rel.mean_curvature_reference).abs() < 1e-10, "{q}");
        }
    }
}
