use super::{relative_at, RelativeFrame};
use crate::euclid::{EuclideanFrame, GeometryError, Thresholds};
use crate::jet::Jet;
use crate::residual::{normalized, normalized_vec, Check};

/// Residuals of the `q = lambda |K|^alpha` family.
#[derive(Debug, Clone)]
pub struct ManhartReport {
    pub alpha: f64,
    pub lambda: f64,
    /// `Q - alpha T_EUK`.
    pub q_field: f64,
    /// `T - q (1 - alpha (n+2)) T_EUK`.
    pub tchebychev: f64,
    /// `Delta^G x - n q ((1 + alpha (n-2)) T_EUK + xi)`.
    pub laplace_x: f64,
    /// `y - q (2 alpha n T_EUK + xi)`.
    pub normal: f64,
    /// `T_lambda - lambda T_1` and `y_lambda - lambda y_1`.
    pub scaling: f64,
    /// `phi - |lambda|^((n+2)/2n) |K|^((alpha (n+2) - 1)/2n)`.
    pub phi: f64,
}

impl ManhartReport {
    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::new("manhart_q_field", "Q = alpha T_EUK", self.q_field),
            Check::new("manhart_tchebychev", "T = q (1 - alpha (n+2)) T_EUK", self.tchebychev),
            Check::new("manhart_laplace_x", "Delta^G x = n q ((1 + alpha (n-2)) T_EUK + xi)", self.laplace_x),
            Check::new("manhart_relative_normal", "y = q (2 alpha n T_EUK + xi)", self.normal),
            Check::new("manhart_scaling", "T(lambda q) = lambda T(q), y(lambda q) = lambda y(q)", self.scaling),
            Check::new("manhart_phi", "phi = |lambda|^((n+2)/2n) |K|^((alpha (n+2) - 1)/2n)", self.phi),
        ]
    }
}

/// Jet of `lambda |K|^alpha`.
pub fn manhart_support(frame: &EuclideanFrame, alpha: f64, lambda: f64) -> Result<Jet, GeometryError> {
    Ok(frame.k_jet.abs()?.powf(alpha)?.scale(lambda))
}

/// Manhart residuals for the relative frame `rel` of `q = lambda |K|^alpha`.
pub fn manhart_residuals(
    frame: &EuclideanFrame,
    rel: &RelativeFrame,
    alpha: f64,
    lambda: f64,
    thresholds: &Thresholds,
) -> Result<ManhartReport, GeometryError> {
    let nf = frame.n as f64;
    let q = rel.q;
    let t_euk = &rel.tchebychev_euclidean;
    let q_field = normalized_vec(&rel.q_field, &(t_euk * alpha));
    let tchebychev = normalized_vec(&rel.tchebychev_darboux, &(t_euk * (q * (1.0 - alpha * (nf + 2.0)))));
    let laplace_x = normalized_vec(
        &rel.laplace_x,
        &((t_euk * (1.0 + alpha * (nf - 2.0)) + &frame.xi) * (nf * q)),
    );
    let normal = normalized_vec(&rel.y, &((t_euk * (2.0 * alpha * nf) + &frame.xi) * q));

    let unit = relative_at(frame, &manhart_support(frame, alpha, 1.0)?, thresholds)?;
    let scaling = normalized_vec(&rel.tchebychev_darboux, &(&unit.tchebychev_darboux * lambda))
        .max(normalized_vec(&rel.y, &(&unit.y * lambda)));

    let phi_expected =
        lambda.abs().powf((nf + 2.0) / (2.0 * nf)) * frame.curvature().abs().powf((alpha * (nf + 2.0) - 1.0) / (2.0 * nf));
    let phi = normalized(&[rel.phi], &[phi_expected]);

    Ok(ManhartReport { alpha, lambda, q_field, tchebychev, laplace_x, normal, scaling, phi })
}

/// Builds `q = lambda |K|^alpha` and evaluates the family residuals.
pub fn manhart_family(
    frame: &EuclideanFrame,
    alpha: f64,
    lambda: f64,
    thresholds: &Thresholds,
) -> Result<(RelativeFrame, ManhartReport), GeometryError> {
    let rel = relative_at(frame, &manhart_support(frame, alpha, lambda)?, thresholds)?;
    let report = manhart_residuals(frame, &rel, alpha, lambda, thresholds)?;
    Ok((rel, report))
}
