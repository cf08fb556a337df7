use std::fmt;

/// Unary functions and negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl UnaryOp {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "sqrt" => UnaryOp::Sqrt,
            "abs" => UnaryOp::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree for immersion components and support functions.
///
/// Parameter variables are stored zero-based: `u1` is `Var(0)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    /// Gauss-Kronecker curvature of the immersion, resolved at evaluation time.
    Curvature,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn unary(op: UnaryOp, a: Expr) -> Self {
        Expr::Unary(op, Box::new(a))
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// `|K|^alpha`, the support function of the Manhart family.
    pub fn abs_curvature_pow(alpha: f64) -> Self {
        Expr::binary(
            BinOp::Pow,
            Expr::unary(UnaryOp::Abs, Expr::Curvature),
            Expr::Const(alpha),
        )
    }

    pub fn uses_curvature(&self) -> bool {
        match self {
            Expr::Curvature => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Unary(_, a) => a.uses_curvature(),
            Expr::Binary(_, a, b) => a.uses_curvature() || b.uses_curvature(),
        }
    }

    /// Largest zero-based variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) | Expr::Curvature => None,
            Expr::Unary(_, a) => a.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// True when the expression depends on neither parameters nor `K`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) | Expr::Curvature => false,
            Expr::Unary(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Folds a constant subtree to a number. `None` when the tree is not
    /// constant or the evaluation leaves the real domain.
    pub fn const_value(&self) -> Option<f64> {
        if !self.is_constant() {
            return None;
        }
        self.eval(&[], None).ok()
    }

    /// Plain floating-point evaluation at a parameter point.
    pub fn eval(&self, u: &[f64], curvature: Option<f64>) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => *u.get(*i).ok_or(EvalError::UnboundVariable(*i + 1))?,
            Expr::Curvature => curvature.ok_or(EvalError::MissingCurvature)?,
            Expr::Unary(op, a) => {
                let a = a.eval(u, curvature)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Ln if a > 0.0 => a.ln(),
                    UnaryOp::Sqrt if a > 0.0 => a.sqrt(),
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Ln | UnaryOp::Sqrt => return Err(EvalError::Domain(op.name())),
                }
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval(u, curvature)?;
                let y = b.eval(u, curvature)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y != 0.0 => x / y,
                    BinOp::Div => return Err(EvalError::DivisionByZero),
                    BinOp::Pow => pow_real(x, y)?,
                }
            }
        };
        Ok(v)
    }

    /// Recognizes `lambda * |K|^alpha` (and the degenerate forms `c`,
    /// `|K|`, `|K|^alpha`, `|K|^alpha * lambda`), returning `(lambda, alpha)`.
    pub fn as_manhart(&self) -> Option<(f64, f64)> {
        fn abs_k_pow(e: &Expr) -> Option<f64> {
            match e {
                Expr::Unary(UnaryOp::Abs, inner) if **inner == Expr::Curvature => Some(1.0),
                Expr::Binary(BinOp::Pow, base, exp) => {
                    let a = abs_k_pow(base)?;
                    Some(a * exp.const_value()?)
                }
                _ => None,
            }
        }
        if let Some(c) = self.const_value() {
            return Some((c, 0.0));
        }
        if let Some(a) = abs_k_pow(self) {
            return Some((1.0, a));
        }
        match self {
            Expr::Binary(BinOp::Mul, l, r) => {
                if let (Some(c), Some(a)) = (l.const_value(), abs_k_pow(r)) {
                    return Some((c, a));
                }
                if let (Some(a), Some(c)) = (abs_k_pow(l), r.const_value()) {
                    return Some((c, a));
                }
                None
            }
            _ => None,
        }
    }
}

fn pow_real(x: f64, y: f64) -> Result<f64, EvalError> {
    if y.fract() == 0.0 && y.abs() < i32::MAX as f64 {
        if x == 0.0 && y < 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        return Ok(x.powi(y as i32));
    }
    if x > 0.0 {
        Ok(x.powf(y))
    } else {
        Err(EvalError::Domain("pow"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("variable u{0} is not bound at this point")]
    UnboundVariable(usize),
    #[error("builtin K referenced without a curvature value")]
    MissingCurvature,
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument outside the domain of {0}")]
    Domain(&'static str),
}

/// Fully parenthesized rendering; re-parsing yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(i) => write!(f, "u{}", i + 1),
            Expr::Curvature => f.write_str("K"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manhart_shapes_are_recognized() {
        assert_eq!(Expr::abs_curvature_pow(0.25).as_manhart(), Some((1.0, 0.25)));
        assert_eq!(Expr::Const(1.0).as_manhart(), Some((1.0, 0.0)));
        let scaled = Expr::binary(BinOp::Mul, Expr::Const(2.5), Expr::abs_curvature_pow(0.3));
        assert_eq!(scaled.as_manhart(), Some((2.5, 0.3)));
        let generic = Expr::binary(BinOp::Add, Expr::Const(1.0), Expr::Var(0));
        assert_eq!(generic.as_manhart(), None);
    }

    #[test]
    fn integer_powers_accept_negative_bases() {
        let e = Expr::binary(BinOp::Pow, Expr::Var(0), Expr::Const(2.0));
        assert_eq!(e.eval(&[-3.0], None).unwrap(), 9.0);
        let e = Expr::binary(BinOp::Pow, Expr::Var(0), Expr::Const(0.5));
        assert_eq!(e.eval(&[-3.0], None), Err(EvalError::Domain("pow")));
    }
}
