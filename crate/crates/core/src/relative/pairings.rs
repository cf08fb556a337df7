use super::RelativeFrame;
use crate::euclid::EuclideanFrame;
use crate::residual::{normalized, Check};

/// Componentwise pairings with `xi_{/i}` and `x_{/i}`.
#[derive(Debug, Clone)]
pub struct PairingReport {
    /// `<Delta^G x, xi_{/i}>`.
    pub p1: Vec<f64>,
    /// `<Delta^G xi, x_{/i}>`.
    pub p2: Vec<f64>,
    /// `<T, xi_{/i}>`.
    pub p3: Vec<f64>,
    pub laplace_x: f64,
    pub laplace_xi: f64,
    pub tchebychev: f64,
    pub sum: f64,
    pub difference: f64,
}

impl PairingReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::new("pairing_laplace_x", "2 <Delta^G x, xi_i> = q d_i ln(|K| |q|^(n-2))", self.laplace_x),
            Check::new("pairing_laplace_xi", "2 <Delta^G xi, x_i> = q d_i ln(|K|^-1 |q|^(n-2))", self.laplace_xi),
            Check::new("pairing_tchebychev", "<T, xi_i> = -q d_i ln(phi)", self.tchebychev),
            Check::new("pairing_sum", "P1_i + P2_i = (n-2) q_i", self.sum),
            Check::new("pairing_difference", "P1_i - P2_i = (q/K) K_i", self.difference),
        ]
    }

    pub fn max_abs_p1(&self) -> f64 {
        self.p1.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_p2(&self) -> f64 {
        self.p2.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn oneform_pairings(rel: &RelativeFrame, frame: &EuclideanFrame) -> PairingReport {
    let n = frame.n;
    let nf = n as f64;
    let q = rel.q;
    let k = frame.curvature();
    let k_grad = frame.curvature_grad();
    let p1: Vec<f64> = frame.xi_d.iter().map(|d| rel.laplace_x.dot(d)).collect();
    let p2: Vec<f64> = frame.tangents.iter().map(|t| rel.laplace_xi.dot(t)).collect();
    let p3: Vec<f64> = frame.xi_d.iter().map(|d| rel.tchebychev_darboux.dot(d)).collect();

    let twice = |p: &[f64]| p.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
    let e1: Vec<f64> = (0..n).map(|i| q * (k_grad[i] / k + (nf - 2.0) * rel.ln_q_grad[i])).collect();
    let e2: Vec<f64> = (0..n).map(|i| q * (-k_grad[i] / k + (nf - 2.0) * rel.ln_q_grad[i])).collect();
    let e3: Vec<f64> = rel.ln_phi_grad.iter().map(|g| -q * g).collect();
    let sum: Vec<f64> = (0..n).map(|i| p1[i] + p2[i]).collect();
    let diff: Vec<f64> = (0..n).map(|i| p1[i] - p2[i]).collect();
    let e_sum: Vec<f64> = rel.q_grad.iter().map(|g| (nf - 2.0) * g).collect();
    let e_diff: Vec<f64> = k_grad.iter().map(|g| q / k * g).collect();

    PairingReport {
        laplace_x: normalized(&twice(&p1), &e1),
        laplace_xi: normalized(&twice(&p2), &e2),
        tchebychev: normalized(&p3, &e3),
        sum: normalized(&sum, &e_sum),
        difference: normalized(&diff, &e_diff),
        p1,
        p2,
        p3,
    }
}
