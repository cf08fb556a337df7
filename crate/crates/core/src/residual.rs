//! Residual measures and named check results.

use nalgebra::DVector;

/// `|l - r| / (1 + |l| + |r|)` over the concatenated components.
pub fn normalized(l: &[f64], r: &[f64]) -> f64 {
    assert_eq!(l.len(), r.len(), "residual operands differ in length");
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff = l.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    diff / (1.0 + sq(l) + sq(r))
}

pub fn normalized_vec(l: &DVector<f64>, r: &DVector<f64>) -> f64 {
    normalized(l.as_slice(), r.as_slice())
}

/// Euclidean norm of a slice, for checks whose target is zero.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Collects the stacked operands of a residual over several sub-cases.
#[derive(Debug, Default, Clone)]
pub struct Stack {
    lhs: Vec<f64>,
    rhs: Vec<f64>,
}

impl Stack {
    pub fn new() -> Stack {
        Stack::default()
    }

    pub fn push(&mut self, l: &[f64], r: &[f64]) {
        assert_eq!(l.len(), r.len(), "residual operands differ in length");
        self.lhs.extend_from_slice(l);
        self.rhs.extend_from_slice(r);
    }

    pub fn push_scalar(&mut self, l: f64, r: f64) {
        self.lhs.push(l);
        self.rhs.push(r);
    }

    pub fn push_vec(&mut self, l: &DVector<f64>, r: &DVector<f64>) {
        self.push(l.as_slice(), r.as_slice());
    }

    pub fn residual(&self) -> f64 {
        normalized(&self.lhs, &self.rhs)
    }
}

/// One pointwise identity evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Human-readable statement of the identity.
    pub formula: &'static str,
    pub residual: f64,
}

impl Check {
    pub fn new(name: &'static str, formula: &'static str, residual: f64) -> Check {
        Check { name, formula, residual }
    }
}

/// A reported quantity with no pass/fail threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub name: &'static str,
    pub value: f64,
}
