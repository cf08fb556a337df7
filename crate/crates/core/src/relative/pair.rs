use super::{manhart_support, relative_at, RelativeFrame};
use crate::euclid::{beltrami_grad, beltrami_mixed, EuclideanFrame, GeometryError, Thresholds};
use crate::jet::Jet;
use crate::residual::{normalized, normalized_vec, Check, Diagnostic};

/// Declared relation between the two support functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairRelation {
    None,
    /// `q2 = lambda q1^alpha`.
    Power { lambda: f64, alpha: f64 },
    /// `q2 = alpha q1 + mu q_AFF`, i.e. `y2 = alpha y1 + mu y_AFF`.
    Affine { alpha: f64, mu: f64 },
}

#[derive(Debug, Clone)]
pub struct PairReport {
    pub checks: Vec<Check>,
    pub diagnostics: Vec<Diagnostic>,
    pub inner_product: f64,
    /// `grad^III(ln|q1|, ln|q2|) + 1`; zero exactly when `y1` and `y2` are orthogonal.
    pub orthogonality: f64,
}

/// `q^-1 (2n T + (n+2) y) - (2n T_EUK + (n+2) xi)`.
pub fn normalization_independence(frame: &EuclideanFrame, rel: &RelativeFrame) -> f64 {
    let nf = frame.n as f64;
    let lhs = (&rel.tchebychev_darboux * (2.0 * nf) + &rel.y * (nf + 2.0)) / rel.q;
    let rhs = &rel.tchebychev_euclidean * (2.0 * nf) + &frame.xi * (nf + 2.0);
    normalized_vec(&lhs, &rhs)
}

/// Compares the relative geometries of two support functions at one point.
pub fn two_normalizations(
    frame: &EuclideanFrame,
    q1_jet: &Jet,
    q2_jet: &Jet,
    relation: PairRelation,
    thresholds: &Thresholds,
) -> Result<PairReport, GeometryError> {
    let n = frame.n;
    let nf = n as f64;
    if let PairRelation::Affine { alpha, mu } = relation {
        let q_aff = frame.curvature().abs().powf(1.0 / (nf + 2.0));
        let combined = alpha * q1_jet.value() + mu * q_aff;
        if !(combined.abs() >= thresholds.support) {
            return Err(GeometryError::NotANormalization(combined));
        }
    }
    let r1 = relative_at(frame, q1_jet, thresholds)?;
    let r2 = relative_at(frame, q2_jet, thresholds)?;
    let (q1, q2) = (r1.q, r2.q);
    let mut checks = Vec::new();
    let mut diagnostics = Vec::new();

    // inner product and orthogonality
    let inner_product = r1.y.dot(&r2.y);
    let inner_expected = beltrami_mixed(&frame.e, &r1.q_grad, &r2.q_grad) + q1 * q2;
    checks.push(Check::new(
        "pair_inner_product",
        "<y1, y2> = grad^III(q1, q2) + q1 q2",
        normalized(&[inner_product], &[inner_expected]),
    ));
    let orthogonality = beltrami_mixed(&frame.e, &r1.ln_q_grad, &r2.ln_q_grad) + 1.0;
    checks.push(Check::new(
        "pair_orthogonality_functional",
        "<y1, y2> / (q1 q2) = grad^III(ln|q1|, ln|q2|) + 1",
        normalized(&[inner_product / (q1 * q2)], &[orthogonality]),
    ));
    diagnostics.push(Diagnostic { name: "pair_orthogonality_functional", value: orthogonality });
    let h_gap = |r: &RelativeFrame| r.mean_curvature - r.mean_curvature_formula;
    let gap = if h_gap(&r1).abs() >= h_gap(&r2).abs() { h_gap(&r1) } else { h_gap(&r2) };
    diagnostics.push(Diagnostic { name: "mean_curvature_formula_difference", value: gap });

    let grad_iii = |g: &[f64]| beltrami_grad(&frame.e, g, &frame.xi_d);

    match relation {
        PairRelation::None => {}
        PairRelation::Power { lambda, alpha } => {
            checks.push(Check::new(
                "power_premise",
                "q2 = lambda q1^alpha",
                normalized(&[q2], &[lambda * q1.powf(alpha)]),
            ));
            let grad_q1 = grad_iii(&r1.q_grad);
            let factor = lambda * q1.powf(alpha - 1.0);
            checks.push(Check::new(
                "power_relative_normal",
                "y2 = lambda q1^(alpha-1) (y1 + (alpha-1) grad^III(q1, xi))",
                normalized_vec(&r2.y, &((&r1.y + &grad_q1 * (alpha - 1.0)) * factor)),
            ));
            let t_expected =
                (&r1.tchebychev_darboux - &grad_q1 * ((alpha - 1.0) * (nf + 2.0) / (2.0 * nf))) * factor;
            checks.push(Check::new(
                "power_tchebychev",
                "T2 = lambda q1^(alpha-1) (T1 - (alpha-1)(n+2)/(2n) grad^III(q1, xi))",
                normalized_vec(&r2.tchebychev_darboux, &t_expected),
            ));
            checks.push(Check::new(
                "power_q_field",
                "Q2 = alpha Q1",
                normalized_vec(&r2.q_field, &(&r1.q_field * alpha)),
            ));
        }
        PairRelation::Affine { alpha, mu } => {
            let q_aff_jet = manhart_support(frame, 1.0 / (nf + 2.0), 1.0)?;
            let ra = relative_at(frame, &q_aff_jet, thresholds)?;
            let q_aff = ra.q;
            checks.push(Check::new(
                "affine_premise",
                "q2 = alpha q1 + mu q_AFF",
                normalized(&[q2], &[alpha * q1 + mu * q_aff]),
            ));
            let sign = |v: f64| if v > 0.0 { 1.0f64 } else if v < 0.0 { -1.0 } else { 0.0 };
            checks.push(Check::new(
                "affine_sign_premise",
                "sign(q2 - alpha q1) = sign(mu)",
                (sign(q2 - alpha * q1) - sign(mu)).abs() / 2.0,
            ));
            checks.push(Check::new(
                "affine_relative_normal",
                "y2 = alpha y1 + mu y_AFF",
                normalized_vec(&r2.y, &(&r1.y * alpha + &ra.y * mu)),
            ));
            checks.push(Check::new(
                "affine_tchebychev",
                "T2 = alpha T1",
                normalized_vec(&r2.tchebychev_darboux, &(&r1.tchebychev_darboux * alpha)),
            ));
            let d = q2 - alpha * q1;
            let d_grad: Vec<f64> = (0..n).map(|i| r2.q_grad[i] - alpha * r1.q_grad[i]).collect();
            let ln_k_grad: Vec<f64> = frame.curvature_grad().iter().map(|g| g / frame.curvature()).collect();
            checks.push(Check::new(
                "affine_tchebychev_condition",
                "(q2 - alpha q1) grad^III(ln|K|, xi) = (n+2) grad^III(q2 - alpha q1, xi)",
                normalized_vec(&(grad_iii(&ln_k_grad) * d), &(grad_iii(&d_grad) * (nf + 2.0))),
            ));
            checks.push(Check::new(
                "affine_support_modulus",
                "|q2 - alpha q1| = |mu| q_AFF",
                normalized(&[d.abs()], &[mu.abs() * q_aff]),
            ));
            checks.push(Check::new(
                "affine_laplace_x",
                "Delta^G2 x - alpha Delta^G1 x = n mu y_AFF",
                normalized_vec(&(&r2.laplace_x - &r1.laplace_x * alpha), &(&ra.y * (nf * mu))),
            ));
            checks.push(Check::new(
                "affine_mean_curvature",
                "H2 = alpha H1 + mu H_AFF",
                normalized(&[r2.mean_curvature], &[alpha * r1.mean_curvature + mu * ra.mean_curvature]),
            ));
            if alpha == 1.0 {
                checks.push(Check::new(
                    "common_tchebychev",
                    "T(y1 + mu y_AFF) = T1",
                    normalized_vec(&r2.tchebychev_darboux, &r1.tchebychev_darboux),
                ));
            }
            let euclid_family = q_aff_jet.scale(mu).add_scalar(1.0);
            if euclid_family.value().abs() >= thresholds.support {
                let re = relative_at(frame, &euclid_family, thresholds)?;
                checks.push(Check::new(
                    "euclidean_family_tchebychev",
                    "T(xi + mu y_AFF) = T_EUK",
                    normalized_vec(&re.tchebychev_darboux, &re.tchebychev_euclidean),
                ));
            }
        }
    }

    // differences scaled by the support functions
    let ln_ratio: Vec<f64> = (0..n).map(|i| r1.ln_q_grad[i] - r2.ln_q_grad[i]).collect();
    let g3 = grad_iii(&ln_ratio);
    let g1 = beltrami_grad(&frame.g, &ln_ratio, &frame.tangents);
    let lap_x_diff = &r1.laplace_x / q1 - &r2.laplace_x / q2;
    checks.push(Check::new(
        "difference_laplace_x",
        "Delta^G1 x / q1 - Delta^G2 x / q2 = (n-2)/2 grad^III(ln|q1/q2|, xi)",
        normalized_vec(&lap_x_diff, &(&g3 * ((nf - 2.0) / 2.0))),
    ));
    let t_diff = &r1.tchebychev_darboux / q1 - &r2.tchebychev_darboux / q2;
    checks.push(Check::new(
        "difference_tchebychev_q_field",
        "T1 / q1 - T2 / q2 = -(n+2) (Q1 - Q2)",
        normalized_vec(&t_diff, &((&r1.q_field - &r2.q_field) * -(nf + 2.0))),
    ));
    checks.push(Check::new(
        "difference_tchebychev",
        "T1 / q1 - T2 / q2 = -(n+2)/(2n) grad^III(ln|q1/q2|, xi)",
        normalized_vec(&t_diff, &(&g3 * (-(nf + 2.0) / (2.0 * nf)))),
    ));
    diagnostics.push(Diagnostic {
        name: "difference_tchebychev_half_coefficient",
        value: (&t_diff - &g3 * (-(nf + 2.0) / 2.0)).norm(),
    });
    let lap_xi_diff = &r1.laplace_xi / q1 - &r2.laplace_xi / q2;
    checks.push(Check::new(
        "difference_laplace_xi",
        "Delta^G1 xi / q1 - Delta^G2 xi / q2 = (n-2)/2 grad^I(ln|q1/q2|, x)",
        normalized_vec(&lap_xi_diff, &(&g1 * ((nf - 2.0) / 2.0))),
    ));
    if n == 2 {
        checks.push(Check::new(
            "invariance_laplace_x",
            "Delta^G1 x / q1 = Delta^G2 x / q2 (n = 2)",
            normalized_vec(&(&r1.laplace_x / q1), &(&r2.laplace_x / q2)),
        ));
        checks.push(Check::new(
            "invariance_laplace_xi",
            "Delta^G1 xi / q1 = Delta^G2 xi / q2 (n = 2)",
            normalized_vec(&(&r1.laplace_xi / q1), &(&r2.laplace_xi / q2)),
        ));
    }

    let independence = "q^-1 (2n T + (n+2) y) = 2n T_EUK + (n+2) xi";
    checks.push(Check::new("normalization_independence_1", independence, normalization_independence(frame, &r1)));
    checks.push(Check::new("normalization_independence_2", independence, normalization_independence(frame, &r2)));

    Ok(PairReport { checks, diagnostics, inner_product, orthogonality })
}
