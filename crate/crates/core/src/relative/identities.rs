//! Pointwise identity catalogue for one normalization.

use nalgebra::DVector;

use super::{normalization_independence, oneform_pairings, RelativeFrame};
use crate::euclid::{beltrami_grad, laplace_beltrami, laplace_beltrami_vec, EuclideanFrame};
use crate::residual::{normalized, normalized_vec, Check, Stack};

/// Checks that depend only on the immersion.
pub fn euclidean_checks(frame: &EuclideanFrame) -> Vec<Check> {
    let n = frame.n;
    let nf = n as f64;
    let k = frame.curvature();
    let k_grad = frame.curvature_grad();
    let mut out = Vec::new();

    let mut s = Stack::new();
    s.push_scalar(frame.xi.norm(), 1.0);
    for t in &frame.tangents {
        s.push_scalar(frame.xi.dot(t), 0.0);
    }
    out.push(Check::new("unit_normal", "|xi| = 1, <xi, x_i> = 0", s.residual()));

    let mut s = Stack::new();
    for i in 0..n {
        let mut rhs = DVector::zeros(n + 1);
        for j in 0..n {
            for l in 0..n {
                rhs.axpy(-frame.h.m[(i, j)] * frame.g.inv[(j, l)], &frame.tangents[l], 1.0);
            }
        }
        s.push_vec(&frame.xi_d[i], &rhs);
    }
    out.push(Check::new("weingarten", "xi_i = -h_ij g^jk x_k", s.residual()));

    let third = &frame.h.m * &frame.g.inv * &frame.h.m;
    out.push(Check::new("third_form", "e = h g^-1 h", normalized(frame.e.m.as_slice(), third.as_slice())));

    // covariant derivative of h with respect to the first form
    let dh = |m: usize, i: usize, j: usize| {
        let mut v = frame.h_jet[i][j].d(&[m]);
        for l in 0..n {
            v -= frame.gamma_i.get(l, m, i) * frame.h.m[(l, j)] + frame.gamma_i.get(l, m, j) * frame.h.m[(i, l)];
        }
        v
    };
    let mut s = Stack::new();
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                s.push_scalar(dh(m, i, j), dh(i, m, j));
            }
        }
    }
    out.push(Check::new("codazzi", "nabla^I_m h_ij = nabla^I_i h_mj", s.residual()));

    let mut s = Stack::new();
    let mut trace = Stack::new();
    let mut contraction = Stack::new();
    for kk in 0..n {
        for i in 0..n {
            for j in 0..n {
                let rhs: f64 = (0..n).map(|m| -0.5 * frame.h.inv[(kk, m)] * dh(m, i, j)).sum();
                s.push_scalar(frame.diff_tensor.get(kk, i, j), rhs);
            }
        }
        let tr: f64 = (0..n).map(|i| frame.diff_tensor.get(i, i, kk)).sum();
        trace.push_scalar(tr, -k_grad[kk] / (2.0 * k));
        let mut lhs = 0.0;
        for i in 0..n {
            for j in 0..n {
                lhs -= 2.0 * frame.h.inv[(i, j)] * frame.diff_tensor.get(kk, i, j);
            }
        }
        let rhs: f64 = (0..n).map(|m| frame.h.inv[(kk, m)] * k_grad[m] / k).sum();
        contraction.push_scalar(lhs, rhs);
    }
    out.push(Check::new("difference_tensor", "Gamma_I - Gamma_II = -1/2 h^km nabla^I_m h_ij", s.residual()));
    out.push(Check::new("difference_tensor_trace", "(Gamma_I - Gamma_II)^i_im = -K_m / (2K)", trace.residual()));
    out.push(Check::new(
        "difference_tensor_contraction",
        "-2 h^ij (Gamma_I - Gamma_II)^k_ij = h^km K_m / K",
        contraction.residual(),
    ));

    let grad_ii_k_x = beltrami_grad(&frame.h, &k_grad, &frame.tangents);
    let grad_ii_k_xi = beltrami_grad(&frame.h, &k_grad, &frame.xi_d);
    let lap_ii_x = laplace_beltrami_vec(&frame.h, &frame.gamma_ii, &frame.x);
    let lap_ii_xi = laplace_beltrami_vec(&frame.h, &frame.gamma_ii, &frame.xi_jet);
    out.push(Check::new(
        "laplace_ii_x",
        "Delta^II x = -1/(2K) grad^II(K, x) + n xi",
        normalized_vec(&lap_ii_x, &(&grad_ii_k_x * (-0.5 / k) + &frame.xi * nf)),
    ));
    out.push(Check::new(
        "laplace_ii_xi",
        "Delta^II xi = 1/(2K) grad^II(K, xi) - n H_I xi",
        normalized_vec(&lap_ii_xi, &(&grad_ii_k_xi * (0.5 / k) - &frame.xi * (nf * frame.mean_curvature))),
    ));
    out
}

/// Gradients of the test functions used by the Beltrami identities: every
/// ambient coordinate of `x` and of `xi`, then the extra scalars given.
fn test_gradients(frame: &EuclideanFrame, extra: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = frame.n;
    let mut out = Vec::new();
    for a in 0..=n {
        out.push(frame.tangents.iter().map(|t| t[a]).collect());
        out.push(frame.xi_d.iter().map(|d| d[a]).collect());
    }
    out.extend(extra.iter().cloned());
    out
}

/// Checks of one relative normalization against the Euclidean frame.
pub fn relative_checks(frame: &EuclideanFrame, rel: &RelativeFrame) -> Vec<Check> {
    let n = frame.n;
    let nf = n as f64;
    let q = rel.q;
    let k = frame.curvature();
    let k_grad = frame.curvature_grad();
    let mut out = Vec::new();

    let mut s = Stack::new();
    for t in &frame.tangents {
        s.push_scalar(rel.conormal.dot(t), 0.0);
    }
    s.push_scalar(rel.conormal.dot(&rel.y), 1.0);
    out.push(Check::new("conormal", "<X, x_i> = 0, <X, y> = 1", s.residual()));

    let mut s = Stack::new();
    for kk in 0..n {
        for i in 0..n {
            for j in 0..n {
                let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                let raised: f64 = (0..n).map(|m| frame.h.inv[(kk, m)] * rel.q_grad[m]).sum();
                let corr = delta(kk, i) * rel.q_grad[j] + delta(kk, j) * rel.q_grad[i] - frame.h.m[(i, j)] * raised;
                s.push_scalar(rel.gamma.get(kk, i, j), frame.gamma_ii.get(kk, i, j) - corr / (2.0 * q));
            }
        }
    }
    out.push(Check::new(
        "relative_christoffel",
        "Gamma_G^k_ij = Gamma_II^k_ij - (d^k_i q_j + d^k_j q_i - h_ij h^km q_m) / (2q)",
        s.residual(),
    ));

    out.push(Check::new("darboux_symmetry", "A_ijk totally symmetric", rel.darboux_symmetry_defect()));

    out.push(Check::new(
        "tchebychev_darboux_closed",
        "(1/n) A_ijk G^jk G^im x_m = (q/2nK) grad^III(K, xi) - (n+2)/(2n) grad^III(q, xi)",
        normalized_vec(&rel.tchebychev_darboux, &rel.tchebychev_closed),
    ));
    out.push(Check::new(
        "tchebychev_darboux_decomposition",
        "(1/n) A_ijk G^jk G^im x_m = q T_EUK - q (n+2) Q",
        normalized_vec(&rel.tchebychev_darboux, &rel.tchebychev_decomp),
    ));
    out.push(Check::new(
        "tchebychev_closed_decomposition",
        "(q/2nK) grad^III(K, xi) - (n+2)/(2n) grad^III(q, xi) = q T_EUK - q (n+2) Q",
        normalized_vec(&rel.tchebychev_closed, &rel.tchebychev_decomp),
    ));

    let tangency = [
        rel.tchebychev_darboux.dot(&frame.xi),
        rel.q_field.dot(&frame.xi),
        rel.tchebychev_euclidean.dot(&frame.xi),
    ];
    out.push(Check::new("tangency", "<T, xi> = <Q, xi> = <T_EUK, xi> = 0", normalized(&tangency, &[0.0; 3])));

    out.push(Check::new(
        "relative_normal_derivative_tangential",
        "<y_i, xi> = 0",
        rel.tangent_residual,
    ));

    out.push(Check::new(
        "laplace_g_x_trace",
        "Delta^G x / n = T + y",
        normalized_vec(&(&rel.laplace_x / nf), &(&rel.tchebychev_darboux + &rel.y)),
    ));

    let grad_iii_k = beltrami_grad(&frame.e, &k_grad, &frame.xi_d);
    let grad_iii_q = beltrami_grad(&frame.e, &rel.q_grad, &frame.xi_d);
    let grad_i_k = beltrami_grad(&frame.g, &k_grad, &frame.tangents);
    let grad_i_q = beltrami_grad(&frame.g, &rel.q_grad, &frame.tangents);
    out.push(Check::new(
        "laplace_g_x",
        "Delta^G x = (q/2K) grad^III(K, xi) - (n+2)/2 grad^III(q, xi) + n y",
        normalized_vec(
            &rel.laplace_x,
            &(&grad_iii_k * (q / (2.0 * k)) - &grad_iii_q * ((nf + 2.0) / 2.0) + &rel.y * nf),
        ),
    ));
    out.push(Check::new(
        "laplace_g_xi",
        "Delta^G xi = -(q/2K) grad^I(K, x) + (n-2)/2 grad^I(q, x) - n q H_I xi",
        normalized_vec(
            &rel.laplace_xi,
            &(&grad_i_k * (-q / (2.0 * k)) + &grad_i_q * ((nf - 2.0) / 2.0)
                - &frame.xi * (nf * q * frame.mean_curvature)),
        ),
    ));
    out.push(Check::new(
        "laplace_g_x_decomposition",
        "Delta^G x = n q (T_EUK + (n-2) Q + xi)",
        normalized_vec(
            &rel.laplace_x,
            &((&rel.tchebychev_euclidean + &rel.q_field * (nf - 2.0) + &frame.xi) * (nf * q)),
        ),
    ));
    out.push(Check::new(
        "relative_normal_decomposition",
        "y = q (2n Q + xi)",
        normalized_vec(&rel.y, &((&rel.q_field * (2.0 * nf) + &frame.xi) * q)),
    ));
    out.push(Check::new(
        "tchebychev_gradient",
        "T = grad^G(ln phi, x)",
        normalized_vec(&rel.tchebychev_darboux, &beltrami_grad(&rel.metric, &rel.ln_phi_grad, &frame.tangents)),
    ));

    // Laplacian of G versus the second form, over coordinates of x, xi and q
    let mut s = Stack::new();
    let grad_ii_q = |partials: &[DVector<f64>]| beltrami_grad(&frame.h, &rel.q_grad, partials);
    let lap_ii_x = laplace_beltrami_vec(&frame.h, &frame.gamma_ii, &frame.x);
    let lap_ii_xi = laplace_beltrami_vec(&frame.h, &frame.gamma_ii, &frame.xi_jet);
    s.push_vec(&rel.laplace_x, &(&lap_ii_x * q - grad_ii_q(&frame.tangents) * ((nf - 2.0) / 2.0)));
    s.push_vec(&rel.laplace_xi, &(&lap_ii_xi * q - grad_ii_q(&frame.xi_d) * ((nf - 2.0) / 2.0)));
    let lap_g_q = laplace_beltrami(&rel.metric, &rel.gamma, &rel.q_jet);
    let lap_ii_q = laplace_beltrami(&frame.h, &frame.gamma_ii, &rel.q_jet);
    let q_q = crate::euclid::beltrami_mixed(&frame.h, &rel.q_grad, &rel.q_grad);
    s.push_scalar(lap_g_q, q * lap_ii_q - (nf - 2.0) / 2.0 * q_q);
    out.push(Check::new("laplace_g_vs_ii", "Delta^G f = q Delta^II f - (n-2)/2 grad^II(q, f)", s.residual()));

    let grads = test_gradients(frame, &[rel.q_grad.clone(), k_grad.clone()]);
    let mut a = Stack::new();
    let mut b = Stack::new();
    for f in &grads {
        let ii_x = beltrami_grad(&frame.h, f, &frame.tangents);
        let ii_xi = beltrami_grad(&frame.h, f, &frame.xi_d);
        a.push_vec(&ii_x, &-beltrami_grad(&frame.e, f, &frame.xi_d));
        a.push_vec(&ii_x, &(beltrami_grad(&rel.metric, f, &frame.tangents) / q));
        b.push_vec(&ii_xi, &-beltrami_grad(&frame.g, f, &frame.tangents));
        b.push_vec(&ii_xi, &(beltrami_grad(&rel.metric, f, &frame.xi_d) / q));
    }
    out.push(Check::new("beltrami_x", "grad^II(f, x) = -grad^III(f, xi) = q^-1 grad^G(f, x)", a.residual()));
    out.push(Check::new("beltrami_xi", "grad^II(f, xi) = -grad^I(f, x) = q^-1 grad^G(f, xi)", b.residual()));

    out.push(Check::new(
        "normalization_independence",
        "q^-1 (2n T + (n+2) y) = 2n T_EUK + (n+2) xi",
        normalization_independence(frame, rel),
    ));

    out.extend(oneform_pairings(rel, frame).checks());
    out
}

/// Residuals for `q = lambda |K|^alpha`, including the exponent-specific
/// vanishing statements (absolute magnitudes).
pub fn manhart_checks(
    frame: &EuclideanFrame,
    rel: &RelativeFrame,
    lambda: f64,
    alpha: f64,
    thresholds: &crate::euclid::Thresholds,
) -> Result<Vec<Check>, crate::euclid::GeometryError> {
    let n = frame.n;
    let nf = n as f64;
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    let mut out = super::manhart_residuals(frame, rel, alpha, lambda, thresholds)?.checks();
    let pairings = oneform_pairings(rel, frame);
    if near(alpha, 1.0 / (nf + 2.0)) {
        let t = rel
            .tchebychev_darboux
            .norm()
            .max(rel.tchebychev_closed.norm())
            .max(rel.tchebychev_decomp.norm());
        out.push(Check::new("equiaffine_tchebychev_zero", "|T| = 0 for q = lambda |K|^(1/(n+2))", t));
        let p3 = pairings.p3.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        out.push(Check::new("tchebychev_pairing_zero", "<T, xi_i> = 0 for q = lambda |K|^(1/(n+2))", p3));
        let dphi = rel.ln_phi_grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        out.push(Check::new("phi_constant", "d ln(phi) = 0 for q = lambda |K|^(1/(n+2))", dphi));
    }
    if n >= 3 && near(alpha, 1.0 / (2.0 - nf)) {
        out.push(Check::new(
            "laplace_x_pairing_zero",
            "<Delta^G x, xi_i> = 0 for q = lambda |K|^(1/(2-n))",
            pairings.max_abs_p1(),
        ));
    }
    if n >= 3 && near(alpha, 1.0 / (nf - 2.0)) {
        out.push(Check::new(
            "laplace_xi_pairing_zero",
            "<Delta^G xi, x_i> = 0 for q = lambda |K|^(1/(n-2))",
            pairings.max_abs_p2(),
        ));
    }
    Ok(out)
}
