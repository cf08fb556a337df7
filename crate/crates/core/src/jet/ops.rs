use std::ops::{Add, Mul, Neg, Sub};

use super::{Jet, JetError};

fn check_shape(a: &Jet, b: &Jet) {
    assert!(
        std::ptr::eq(a.layout, b.layout),
        "jet shape mismatch: (n={}, r={}) vs (n={}, r={})",
        a.n(),
        a.order(),
        b.n(),
        b.order()
    );
}

impl Jet {
    fn zip_with(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        check_shape(self, other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Jet { layout: self.layout, coeffs }
    }

    /// Leibniz product on raw partials.
    pub fn mul_jet(&self, other: &Jet) -> Jet {
        check_shape(self, other);
        let coeffs = self
            .layout
            .leibniz
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .fold(0.0, |acc, &(g, rest, c)| acc + c * self.coeffs[g as usize] * other.coeffs[rest as usize])
            })
            .collect();
        Jet { layout: self.layout, coeffs }
    }

    /// `f(self)` given `derivs[k] = f^(k)(self.value())` for `k = 0..=r`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        let r = self.order();
        assert!(derivs.len() > r, "need {} derivatives", r + 1);
        let mut nilpotent = self.clone();
        nilpotent.coeffs[0] = 0.0;

        let mut out = Jet::constant(self.n(), r, derivs[0]);
        let mut power = nilpotent.clone();
        let mut factorial = 1.0;
        for (k, &dk) in derivs.iter().enumerate().take(r + 1).skip(1) {
            factorial *= k as f64;
            let c = dk / factorial;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += c * p;
            }
            if k < r {
                power = power.mul_jet(&nilpotent);
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        // d^k (1/t) = (-1)^k k! / t^(k+1)
        let mut derivs = Vec::with_capacity(self.order() + 1);
        let mut d = 1.0 / a;
        for k in 0..=self.order() {
            derivs.push(d);
            d *= -((k + 1) as f64) / a;
        }
        Ok(self.compose(&derivs))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, JetError> {
        Ok(self.mul_jet(&other.recip()?))
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order() + 1])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order()).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order()).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(JetError::Domain("ln"));
        }
        // d^k ln t = (-1)^(k-1) (k-1)! / t^k
        let mut derivs = vec![a.ln()];
        let mut d = 1.0 / a;
        for k in 1..=self.order() {
            derivs.push(d);
            d *= -(k as f64) / a;
        }
        Ok(self.compose(&derivs))
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        if !(self.value() > 0.0) {
            return Err(JetError::Domain("sqrt"));
        }
        self.powf(0.5)
    }

    /// `self^p` for a real exponent. Integer exponents accept any nonzero
    /// base (and zero for non-negative integers); other exponents need a
    /// positive base.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        let a = self.value();
        let integer = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        if integer {
            if a == 0.0 && p < 0.0 {
                return Err(JetError::DivisionByZero);
            }
        } else if !(a > 0.0) {
            return Err(JetError::Domain("pow"));
        }
        let mut derivs = Vec::with_capacity(self.order() + 1);
        let mut falling = 1.0;
        for k in 0..=self.order() {
            let e = p - k as f64;
            let d = if falling == 0.0 {
                0.0
            } else if integer {
                falling * a.powi(e as i32)
            } else {
                falling * a.powf(e)
            };
            derivs.push(d);
            falling *= e;
        }
        Ok(self.compose(&derivs))
    }

    /// `|self|`, valid away from zero where it is `sign(value) * self`.
    pub fn abs(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a == 0.0 {
            return Err(JetError::Domain("abs"));
        }
        Ok(if a > 0.0 { self.clone() } else { -self })
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { layout: self.layout, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::super::seed_point;
    use super::*;

    #[test]
    fn polynomial_partials() {
        // u1^2 u2 at (2, 3), r = 3
        let s = seed_point(&[2.0, 3.0], 3);
        let f = &(&s[0] * &s[0]) * &s[1];
        assert_eq!(f.value(), 12.0);
        assert_eq!(f.d(&[0]), 12.0);
        assert_eq!(f.d(&[1]), 4.0);
        assert_eq!(f.d(&[0, 0]), 6.0);
        assert_eq!(f.d(&[0, 1]), 4.0);
        assert_eq!(f.d(&[1, 1]), 0.0);
        assert_eq!(f.d(&[0, 0, 1]), 2.0);
        assert_eq!(f.d(&[0, 0, 0]), 0.0);
        assert_eq!(f.d(&[0, 1, 1]), 0.0);
        assert_eq!(f.d(&[1, 1, 1]), 0.0);
    }

    #[test]
    fn sine_at_origin() {
        let x = Jet::variable(1, 3, 0, 0.0);
        let s = x.sin();
        assert_eq!(s.coeffs(), &[0.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn fractional_power_of_abs() {
        let x = Jet::variable(1, 1, 0, 4.0);
        let y = x.abs().unwrap().powf(0.5).unwrap();
        assert_eq!(y.value(), 2.0);
        assert_eq!(y.d(&[0]), 0.25);
    }

    #[test]
    fn abs_flips_negative_jets() {
        let x = Jet::variable(2, 2, 1, -2.0);
        let a = x.abs().unwrap();
        assert_eq!(a.value(), 2.0);
        assert_eq!(a.d(&[1]), -1.0);
        assert_eq!(Jet::constant(2, 2, 0.0).abs(), Err(JetError::Domain("abs")));
    }

    #[test]
    fn domain_errors() {
        let z = Jet::constant(2, 2, 0.0);
        let neg = Jet::constant(2, 2, -1.0);
        assert_eq!(Jet::constant(2, 2, 1.0).div(&z), Err(JetError::DivisionByZero));
        assert_eq!(neg.ln(), Err(JetError::Domain("ln")));
        assert_eq!(neg.sqrt(), Err(JetError::Domain("sqrt")));
        assert_eq!(neg.powf(0.3), Err(JetError::Domain("pow")));
        assert!(neg.powf(3.0).is_ok());
        assert_eq!(z.powf(-1.0), Err(JetError::DivisionByZero));
    }

    #[test]
    fn integer_power_matches_repeated_product() {
        let s = seed_point(&[-0.7, 1.3], 4);
        let base = &s[0] + &(&s[1] * &s[0]);
        let cube = &(&base * &base) * &base;
        let p = base.powf(3.0).unwrap();
        for (a, b) in cube.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn reciprocal_times_self_is_one() {
        let s = seed_point(&[0.4, -1.1, 0.9], 4);
        let f = (&s[0] * &s[1]).exp().add_scalar(0.5) + s[2].sin();
        let one = f.mul_jet(&f.recip().unwrap());
        assert!((one.value() - 1.0).abs() < 1e-14);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }
}
