use super::{Jet, JetError};
use crate::dsl::{BinOp, Expr, UnaryOp};

/// Evaluates an expression tree in jet arithmetic.
///
/// `seeds` are the coordinate jets (see [`super::seed_point`]). If the
/// expression references `K`, `curvature` must be supplied; the result then
/// has the smaller of the two orders.
pub fn eval_expr_jet(e: &Expr, seeds: &[Jet], curvature: Option<&Jet>) -> Result<Jet, JetError> {
    assert!(!seeds.is_empty(), "at least one coordinate jet");
    let n = seeds[0].n();
    let mut order = seeds[0].order();
    let mut k = None;
    if e.uses_curvature() {
        let kj = curvature.ok_or(JetError::MissingBuiltin)?;
        order = order.min(kj.order());
        k = Some(kj.truncate(order));
    }
    let seeds: Vec<Jet> = if order == seeds[0].order() {
        seeds.to_vec()
    } else {
        seeds.iter().map(|s| s.truncate(order)).collect()
    };
    Evaluator { n, order, seeds: &seeds, curvature: k.as_ref() }.eval(e)
}

struct Evaluator<'a> {
    n: usize,
    order: usize,
    seeds: &'a [Jet],
    curvature: Option<&'a Jet>,
}

impl Evaluator<'_> {
    fn eval(&self, e: &Expr) -> Result<Jet, JetError> {
        Ok(match e {
            Expr::Const(c) => Jet::constant(self.n, self.order, *c),
            Expr::Var(i) => self.seeds[*i].clone(),
            Expr::Curvature => self.curvature.ok_or(JetError::MissingBuiltin)?.clone(),
            Expr::Unary(op, a) => {
                let a = self.eval(a)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Ln => a.ln()?,
                    UnaryOp::Sqrt => a.sqrt()?,
                    UnaryOp::Abs => a.abs()?,
                }
            }
            Expr::Binary(op, a, b) => {
                if *op == BinOp::Pow {
                    let base = self.eval(a)?;
                    return match b.const_value() {
                        Some(p) => base.powf(p),
                        // general exponent: exp(b ln a)
                        None => Ok((self.eval(b)? * base.ln()?).exp()),
                    };
                }
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.div(&y)?,
                    BinOp::Pow => unreachable!(),
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::seed_point;
    use super::*;
    use crate::dsl::parse_expr;

    #[test]
    fn constant_expression() {
        let seeds = seed_point(&[0.3, -0.2], 3);
        let j = eval_expr_jet(&parse_expr("1").unwrap(), &seeds, None).unwrap();
        assert_eq!(j.value(), 1.0);
        assert!(j.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn curvature_support_function_takes_curvature_order() {
        let seeds = seed_point(&[0.3, -0.2], 4);
        // K jet: 1 + u1^2 + u2 truncated to order 2
        let k = (&seeds[0] * &seeds[0] + &seeds[1]).add_scalar(1.0).truncate(2);
        let q = eval_expr_jet(&parse_expr("abs(K)^(1/4)").unwrap(), &seeds, Some(&k)).unwrap();
        assert_eq!(q.order(), 2);
        let kv: f64 = 1.0 + 0.09 - 0.2;
        assert!((q.value() - kv.powf(0.25)).abs() < 1e-15);
        // dq/du1 = 1/4 K^(-3/4) * 2 u1
        assert!((q.d(&[0]) - 0.25 * kv.powf(-0.75) * 0.6).abs() < 1e-14);
    }

    #[test]
    fn missing_curvature_is_reported() {
        let seeds = seed_point(&[0.3, -0.2], 2);
        let err = eval_expr_jet(&parse_expr("u1 + K").unwrap(), &seeds, None).unwrap_err();
        assert_eq!(err, JetError::MissingBuiltin);
    }

    #[test]
    fn variable_exponent() {
        let seeds = seed_point(&[1.5, 0.5], 2);
        let j = eval_expr_jet(&parse_expr("abs(u1)^u2").unwrap(), &seeds, None).unwrap();
        assert!((j.value() - 1.5f64.powf(0.5)).abs() < 1e-15);
        assert!((j.d(&[1]) - 1.5f64.powf(0.5) * 1.5f64.ln()).abs() < 1e-14);
    }
}
