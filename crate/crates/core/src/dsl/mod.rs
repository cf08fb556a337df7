//! Text format for hypersurface definitions.
//!
//! A spec is a sequence of line statements:
//!
//! ```text
//! n = 2
//! domain = [-1,1] x [-1,1]
//! x = [u1, u2, 0.5*(u1^2+u2^2)]
//! q euclidean = 1
//! alpha manhart = 0.3          # q manhart = abs(K)^0.3
//! name = elliptic paraboloid
//! ```

mod expr;
mod lexer;
mod parser;

pub use expr::{BinOp, EvalError, Expr, UnaryOp};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_expr, parse_spec};


#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("illegal character {found:?} at line {line}, column {col}")]
    IllegalCharacter { line: usize, col: usize, found: char },
    #[error("syntax error at line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("validation failed: {rule}")]
    Validation { rule: String },
}

impl SpecError {
    fn rule(rule: impl Into<String>) -> Self {
        SpecError::Validation { rule: rule.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    pub label: String,
    pub expr: Expr,
}

/// A parametric hypersurface `x: box in R^n -> R^(n+1)` with candidate
/// support functions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub n: usize,
    pub domain: Vec<(f64, f64)>,
    pub immersion: Vec<Expr>,
    pub support_functions: Vec<SupportFunction>,
    pub name: String,
    pub description: String,
}

impl SurfaceSpec {
    pub fn support(&self, label: &str) -> Option<&Expr> {
        self.support_functions.iter().find(|s| s.label == label).map(|s| &s.expr)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.support_functions.iter().map(|s| s.label.as_str())
    }

    /// Adds or replaces a support function.
    pub fn set_support(&mut self, label: &str, expr: Expr) {
        match self.support_functions.iter_mut().find(|s| s.label == label) {
            Some(s) => s.expr = expr,
            None => self.support_functions.push(SupportFunction { label: label.to_string(), expr }),
        }
    }

    /// Evaluates the immersion at a parameter point.
    pub fn point(&self, u: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.immersion.iter().map(|e| e.eval(u, None)).collect()
    }

    /// Renders the spec back to the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out += &format!("name = {}\n", self.name);
        }
        if !self.description.is_empty() {
            out += &format!("description = {}\n", self.description);
        }
        out += &format!("n = {}\n", self.n);
        let axes: Vec<String> = self.domain.iter().map(|(a, b)| format!("[{a:?},{b:?}]")).collect();
        out += &format!("domain = {}\n", axes.join(" x "));
        let comps: Vec<String> = self.immersion.iter().map(|e| e.to_string()).collect();
        out += &format!("x = [{}]\n", comps.join(", "));
        for s in &self.support_functions {
            out += &format!("q {} = {}\n", s.label, s.expr);
        }
        out
    }
}

/// Checks structural rules and inserts the default `euclidean` support
/// function when none is given.
pub fn validate_spec(mut spec: SurfaceSpec) -> Result<SurfaceSpec, SpecError> {
    let n = spec.n;
    if n < 2 {
        return Err(SpecError::rule("dimension must be >= 2"));
    }
    if spec.domain.len() != n {
        return Err(SpecError::rule(format!("domain must have {n} intervals, found {}", spec.domain.len())));
    }
    for (i, &(a, b)) in spec.domain.iter().enumerate() {
        if !a.is_finite() || !b.is_finite() {
            return Err(SpecError::rule(format!("domain interval {} has a non-finite endpoint", i + 1)));
        }
        if a > b {
            return Err(SpecError::rule(format!("domain interval {} is empty", i + 1)));
        }
    }
    if spec.immersion.len() != n + 1 {
        return Err(SpecError::rule(format!(
            "immersion must have n+1 = {} components, found {}",
            n + 1,
            spec.immersion.len()
        )));
    }
    for e in &spec.immersion {
        if e.uses_curvature() {
            return Err(SpecError::rule("K forbidden in immersion"));
        }
        check_expr(e, n)?;
    }
    for s in &spec.support_functions {
        check_expr(&s.expr, n)?;
    }
    if spec.support_functions.is_empty() {
        spec.support_functions.push(SupportFunction { label: "euclidean".into(), expr: Expr::Const(1.0) });
    }
    Ok(spec)
}

fn check_expr(e: &Expr, n: usize) -> Result<(), SpecError> {
    match e {
        Expr::Const(c) if !c.is_finite() => Err(SpecError::rule("non-finite constant")),
        Expr::Const(_) | Expr::Curvature => Ok(()),
        Expr::Var(i) if *i >= n => Err(SpecError::rule(format!("variable u{} out of range 1..={n}", i + 1))),
        Expr::Var(_) => Ok(()),
        Expr::Unary(op, a) => {
            check_expr(a, n)?;
            if a.is_constant() {
                let v = a.const_value().unwrap_or(f64::NAN);
                match op {
                    UnaryOp::Ln | UnaryOp::Sqrt if !(v > 0.0) => {
                        return Err(SpecError::rule(format!("{} of a non-positive constant", op.name())))
                    }
                    UnaryOp::Abs if v == 0.0 => return Err(SpecError::rule("abs of zero constant")),
                    _ => {}
                }
            }
            Ok(())
        }
        Expr::Binary(op, a, b) => {
            check_expr(a, n)?;
            check_expr(b, n)?;
            match op {
                BinOp::Div if b.const_value() == Some(0.0) => Err(SpecError::rule("division by zero constant")),
                BinOp::Pow => check_pow(a, b),
                _ => Ok(()),
            }
        }
    }
}

fn check_pow(base: &Expr, exponent: &Expr) -> Result<(), SpecError> {
    let abs_base = matches!(base, Expr::Unary(UnaryOp::Abs, _));
    match exponent.const_value() {
        Some(p) if p.fract() == 0.0 => {
            if p < 0.0 && base.const_value() == Some(0.0) {
                return Err(SpecError::rule("negative power of zero constant"));
            }
            Ok(())
        }
        Some(_) | None => {
            if base.is_constant() {
                return match base.const_value() {
                    Some(v) if v > 0.0 => Ok(()),
                    _ => Err(SpecError::rule("non-integer power of a non-positive constant")),
                };
            }
            if abs_base {
                Ok(())
            } else {
                Err(SpecError::rule("non-integer pow requires an abs-wrapped base"))
            }
        }
    }
}
