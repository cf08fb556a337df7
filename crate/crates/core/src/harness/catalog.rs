//! Built-in surfaces.

use crate::dsl::{parse_spec, SurfaceSpec};

const ELLIPSOID: &str = "\
name = ellipsoid
description = ellipsoid with semi-axes 1, 1.3, 0.7
n = 2
domain = [-3,3] x [-1.3,1.3]
x = [cos(u1)*cos(u2), 1.3*sin(u1)*cos(u2), 0.7*sin(u2)]
q euclidean = 1
q affine = abs(K)^(1/4)
alpha manhart = 0.3
q scaled = 2.5*abs(K)^0.3
q generic = 1 + exp(0.2*u1 - 0.1*u2)
";

const ELLIPTIC_PARABOLOID: &str = "\
name = elliptic_paraboloid
description = graph of 0.5 u1^2 + 0.8 u2^2
n = 2
domain = [-1,1] x [-1,1]
x = [u1, u2, 0.5*u1^2 + 0.8*u2^2]
q euclidean = 1
q affine = abs(K)^(1/4)
alpha manhart = 0.3
q scaled = 2.5*abs(K)^0.3
q generic = 1 + exp(0.2*u1 - 0.1*u2)
";

const HYPERBOLIC_PARABOLOID: &str = "\
name = hyperbolic_paraboloid
description = graph of 0.5 u1^2 - 0.7 u2^2, negative curvature
n = 2
domain = [-1,1] x [-1,1]
x = [u1, u2, 0.5*u1^2 - 0.7*u2^2]
q euclidean = 1
q affine = abs(K)^(1/4)
alpha manhart = 0.3
q scaled = 2.5*abs(K)^0.3
q generic = 1 + exp(0.2*u1 - 0.1*u2)
";

const ELLIPSOID4: &str = "\
name = ellipsoid4
description = ellipsoid in R^4 with semi-axes 1, 1.2, 0.8, 1.5
n = 3
domain = [-3,3] x [-1.2,1.2] x [-1.2,1.2]
x = [cos(u1)*cos(u2)*cos(u3), 1.2*sin(u1)*cos(u2)*cos(u3), 0.8*sin(u2)*cos(u3), 1.5*sin(u3)]
q euclidean = 1
q affine = abs(K)^(1/5)
alpha manhart = 0.3
q scaled = 2.5*abs(K)^0.3
q generic = 1 + exp(0.2*u1 - 0.1*u2)
alpha inverse = -1
alpha linear = 1
";

/// Round sphere of radius `r` in R^3.
pub fn sphere(r: f64) -> SurfaceSpec {
    let text = format!(
        "name = sphere\n\
         description = round sphere of radius {r}\n\
         n = 2\n\
         domain = [-3,3] x [-1.3,1.3]\n\
         x = [{r}*cos(u1)*cos(u2), {r}*sin(u1)*cos(u2), {r}*sin(u2)]\n\
         q euclidean = 1\n\
         q affine = abs(K)^(1/4)\n\
         alpha manhart = 0.3\n\
         q scaled = 2.5*abs(K)^0.3\n\
         q generic = 1 + exp(0.2*u1 - 0.1*u2)\n"
    );
    parse_spec(&text).expect("built-in sphere spec parses")
}

/// All built-in specs, unit sphere first.
pub fn catalog() -> Vec<SurfaceSpec> {
    let mut out = vec![sphere(1.0)];
    for text in [ELLIPSOID, ELLIPTIC_PARABOLOID, HYPERBOLIC_PARABOLOID, ELLIPSOID4] {
        out.push(parse_spec(text).expect("built-in spec parses"));
    }
    out
}

/// Looks up a built-in spec by name.
pub fn find(name: &str) -> Option<SurfaceSpec> {
    catalog().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_specs_are_distinct() {
        let specs = catalog();
        assert!(specs.len() >= 5);
        for (i, a) in specs.iter().enumerate() {
            for b in &specs[i + 1..] {
                assert_ne!(a.name, b.name);
            }
            for label in ["euclidean", "affine", "manhart", "generic"] {
                assert!(a.support(label).is_some(), "{} lacks {label}", a.name);
            }
        }
        assert_eq!(find("ellipsoid4").unwrap().n, 3);
    }
}
