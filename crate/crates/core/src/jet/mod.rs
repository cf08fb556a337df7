//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] holds the value and every raw partial derivative `d^b f`
//! (not divided by `b!`) of a scalar function of `n` variables up to total
//! order `r`. Products use the Leibniz rule; elementary functions compose
//! their univariate derivative sequence with the argument jet.

mod eval;
mod layout;
mod ops;

pub use eval::eval_expr_jet;
pub use layout::Layout;

use nalgebra::DVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("argument outside the domain of {0}")]
    Domain(&'static str),
    #[error("derivative of order {requested} requested from a jet of order {order}")]
    OrderExceeded { requested: usize, order: usize },
    #[error("builtin K referenced without a curvature jet")]
    MissingBuiltin,
}

#[derive(Clone)]
pub struct Jet {
    layout: &'static Layout,
    coeffs: Vec<f64>,
}

impl std::fmt::Debug for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet")
            .field("n", &self.layout.n)
            .field("r", &self.layout.r)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn constant(n: usize, r: usize, value: f64) -> Jet {
        let layout = Layout::get(n, r);
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    /// The coordinate function `u_i` (zero-based `i`) at `value`.
    pub fn variable(n: usize, r: usize, i: usize, value: f64) -> Jet {
        let mut j = Jet::constant(n, r, value);
        if r >= 1 {
            j.coeffs[1 + i] = 1.0;
        }
        j
    }

    pub fn from_coeffs(n: usize, r: usize, coeffs: Vec<f64>) -> Jet {
        let layout = Layout::get(n, r);
        assert_eq!(coeffs.len(), layout.len(), "coefficient count for n={n}, r={r}");
        Jet { layout, coeffs }
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn order(&self) -> usize {
        self.layout.r
    }

    pub fn layout(&self) -> &'static Layout {
        self.layout
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Raw partial derivative for a multi-index.
    pub fn coeff(&self, multi: &[u8]) -> Result<f64, JetError> {
        let requested: usize = multi.iter().map(|&m| m as usize).sum();
        if requested > self.order() {
            return Err(JetError::OrderExceeded { requested, order: self.order() });
        }
        Ok(self.coeffs[self.layout.position(multi).expect("multi-index within layout")])
    }

    /// Partial derivative with respect to the listed (zero-based) variables,
    /// e.g. `partial(&[0, 1])` is `f_{/12}`.
    pub fn partial(&self, vars: &[usize]) -> Result<f64, JetError> {
        self.coeff(&self.layout.multi_index(vars))
    }

    /// Like [`Jet::partial`] for callers that guarantee the order suffices.
    pub fn d(&self, vars: &[usize]) -> f64 {
        match self.partial(vars) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn gradient(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.d(&[i])).collect()
    }

    /// Drops all coefficients above `r`.
    pub fn truncate(&self, r: usize) -> Jet {
        assert!(r <= self.order(), "cannot raise jet order by truncation");
        let layout = Layout::get(self.n(), r);
        Jet { layout, coeffs: self.coeffs[..layout.len()].to_vec() }
    }

    /// The jet of `df/du_i`, one order lower.
    pub fn derivative(&self, i: usize) -> Jet {
        assert!(self.order() >= 1, "derivative of an order-0 jet");
        let layout = Layout::get(self.n(), self.order() - 1);
        let coeffs = self.layout.shift[i].iter().map(|&k| self.coeffs[k]).collect();
        Jet { layout, coeffs }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet { layout: self.layout, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Jets of the coordinate functions at `point`.
pub fn seed_point(point: &[f64], r: usize) -> Vec<Jet> {
    let n = point.len();
    point.iter().enumerate().map(|(i, &v)| Jet::variable(n, r, i, v)).collect()
}

/// Jet of an `R^m`-valued map; all components share `(n, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapJet(Vec<Jet>);

impl MapJet {
    pub fn new(components: Vec<Jet>) -> MapJet {
        assert!(!components.is_empty(), "map jet needs components");
        let (n, r) = (components[0].n(), components[0].order());
        assert!(
            components.iter().all(|c| c.n() == n && c.order() == r),
            "map jet components must share (n, r)"
        );
        MapJet(components)
    }

    pub fn components(&self) -> &[Jet] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0[0].n()
    }

    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    pub fn value(&self) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.0.iter().map(Jet::value))
    }

    /// Ambient vector of a partial derivative, e.g. `d(&[i, j])` is `x_{/ij}`.
    pub fn d(&self, vars: &[usize]) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.0.iter().map(|c| c.d(vars)))
    }

    pub fn derivative(&self, i: usize) -> MapJet {
        MapJet(self.0.iter().map(|c| c.derivative(i)).collect())
    }

    pub fn truncate(&self, r: usize) -> MapJet {
        MapJet(self.0.iter().map(|c| c.truncate(r)).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Jet::is_finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_coordinate_functions() {
        let s = seed_point(&[2.0, 3.0], 2);
        assert_eq!(s[0].value(), 2.0);
        assert_eq!(s[0].d(&[0]), 1.0);
        assert_eq!(s[0].d(&[1]), 0.0);
        for vars in [[0, 0], [0, 1], [1, 1]] {
            assert_eq!(s[0].d(&vars), 0.0);
        }
        let s = seed_point(&[0.1, 0.2, 0.3], 4);
        assert_eq!(s[2].value(), 0.3);
        assert_eq!(s[2].gradient(), vec![0.0, 0.0, 1.0]);
        assert!(s[2].coeffs()[4..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn extraction_beyond_order_is_an_error() {
        let j = Jet::variable(2, 2, 0, 1.0);
        assert_eq!(j.partial(&[0, 0, 1]), Err(JetError::OrderExceeded { requested: 3, order: 2 }));
    }

    #[test]
    fn derivative_shifts_coefficients() {
        // f = u1^2 u2 at (2, 3): df/du1 = 2 u1 u2 -> value 12, d/du1 = 6, d/du2 = 4
        let s = seed_point(&[2.0, 3.0], 3);
        let f = &(&s[0] * &s[0]) * &s[1];
        let df = f.derivative(0);
        assert_eq!(df.order(), 2);
        assert_eq!(df.value(), 12.0);
        assert_eq!(df.d(&[0]), 6.0);
        assert_eq!(df.d(&[1]), 4.0);
        assert_eq!(df.d(&[0, 1]), 2.0);
    }
}
